//! The Heisenberg nilmanifold `H(R)/H(Z)` in coordinates `[a, b, c]`.
//!
//! Group law `[a,b,c]·[d,e,f] = [a+d, b+e, ae+c+f]`; the integer lattice is
//! `H(Z) = {[i,j,k] : i,j,k ∈ Z}`.

use super::kdtree::{Cloud, Metric};
use super::torus::{frac, interval_wrap, wrap};

/// Group coordinates of `exp(xX + yY + zZ)` for `X = E12`, `Y = E23`, `Z = E13`.
pub fn heis_exp(x: f64, y: f64, z: f64) -> [f64; 3] {
    [x, y, z + 0.5 * x * y]
}

/// Representative of `gΓ` with every coordinate in `[0, 1)`: right
/// multiplication by `[i, j, 0]` fixes `a, b` (and shifts `c` by `a·j`), then
/// a central `[0, 0, k]` fixes `c`.
pub fn heis_reduce(g: [f64; 3]) -> [f64; 3] {
    let [a, b, c] = g;
    let i = -a.floor();
    let j = -b.floor();
    let c1 = c + a * j;
    [frac(a + i), frac(b + j), frac(c1)]
}

/// `min_γ ‖coords(x⁻¹·y·γ)‖` over `γ = [i, j, k]` with `|i|, |j| ≤ 1` and the
/// optimal `k`, for reduced `x, y`.
///
/// `x⁻¹y = [Δ₁, Δ₂, T]` with `T = y₃ − x₃ − x₁Δ₂`, and
/// `x⁻¹yγ = [Δ₁ + i, Δ₂ + j, T + Δ₁ j + k]`.
pub fn heis_distance(x: &[f64], y: &[f64]) -> f64 {
    let d1 = y[0] - x[0];
    let d2 = y[1] - x[1];
    let t = y[2] - x[2] - x[0] * d2;
    let mut best = f64::INFINITY;
    for j in -1..=1 {
        let jf = f64::from(j);
        let u2 = d2 + jf;
        let u3 = wrap(t + d1 * jf);
        let tail = u2 * u2 + u3 * u3;
        for i in -1..=1 {
            let u1 = d1 + f64::from(i);
            best = best.min(u1 * u1 + tail);
        }
    }
    best.sqrt()
}

/// [`heis_distance`] with its interval lower bound, as a tree metric.
pub struct HeisMetric;

fn abs_min(lo: f64, hi: f64) -> f64 {
    if lo <= 0.0 && hi >= 0.0 {
        0.0
    } else {
        lo.abs().min(hi.abs())
    }
}

impl Metric for HeisMetric {
    fn dist(&self, q: &[f64], p: &[f64]) -> f64 {
        heis_distance(q, p)
    }

    fn lower_bound(&self, q: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
        let (d1l, d1h) = (lo[0] - q[0], hi[0] - q[0]);
        let (d2l, d2h) = (lo[1] - q[1], hi[1] - q[1]);
        // T = y₃ − q₃ − q₁·Δ₂ with q₁ ≥ 0
        let tl = lo[2] - q[2] - q[0] * d2h;
        let th = hi[2] - q[2] - q[0] * d2l;
        let mut best = f64::INFINITY;
        for j in -1..=1 {
            let jf = f64::from(j);
            let u2 = abs_min(d2l + jf, d2h + jf);
            let (a, b) = (d1l * jf, d1h * jf);
            let u3 = interval_wrap(tl + a.min(b), th + a.max(b));
            let tail = u2 * u2 + u3 * u3;
            for i in -1..=1 {
                let fi = f64::from(i);
                let u1 = abs_min(d1l + fi, d1h + fi);
                best = best.min(u1 * u1 + tail);
            }
        }
        best.sqrt()
    }
}

/// The `n³` grid `{[i/n, j/n, k/n]}` of the fundamental domain.
pub fn heis_grid(n: usize) -> Cloud {
    let mut cloud = Cloud::new(3);
    let s = n as f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                cloud.push(&[i as f64 / s, j as f64 / s, k as f64 / s]);
            }
        }
    }
    cloud
}
