//! Flat tori `R^m / B·Z^m` in fractional lattice coordinates.

use super::kdtree::Metric;
use super::NumericError;
use crate::qlinalg::LatticeBasis;

/// Embedded lattice with the quotient metric `min_z ‖B(x − y − z)‖`.
#[derive(Clone, Debug)]
pub struct Torus {
    m: usize,
    // row-major m×m
    b: Vec<f64>,
    binv: Vec<f64>,
    diagonal: Option<Vec<f64>>,
    sigma_min: f64,
    condition: f64,
    window: i64,
    // B·z for every z in the window
    offsets: Vec<Vec<f64>>,
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance from `x` to the nearest integer.
pub fn wrap(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Distance from the interval `[lo, hi]` to the nearest integer.
pub fn interval_wrap(lo: f64, hi: f64) -> f64 {
    if hi - lo >= 1.0 || lo.ceil() <= hi {
        return 0.0;
    }
    // no integer inside: lo and hi share a floor
    let f = lo.floor();
    (lo - f).min(f + 1.0 - hi)
}

const SINGULAR_CONDITION: f64 = 1e12;
const SKEW_CONDITION: f64 = 10.0;

impl Torus {
    /// `b` row-major; `window` is the integer offset radius, raised to 2 when
    /// the condition number exceeds 10.
    pub fn new(b: Vec<Vec<f64>>, window: u32) -> Result<Torus, NumericError> {
        let m = b.len();
        if m == 0 || b.iter().any(|r| r.len() != m) {
            return Err(NumericError::SingularBasis);
        }
        let flat: Vec<f64> = b.iter().flatten().copied().collect();
        let (sigma_min, sigma_max) = singular_range(&flat, m);
        let condition = sigma_max / sigma_min;
        if !(sigma_min > 0.0) || !condition.is_finite() || condition > SINGULAR_CONDITION {
            return Err(NumericError::SingularBasis);
        }
        let binv = invert(&flat, m).ok_or(NumericError::SingularBasis)?;
        let is_diag = (0..m).all(|i| (0..m).all(|j| i == j || flat[i * m + j] == 0.0));
        let diagonal = is_diag.then(|| (0..m).map(|i| flat[i * m + i].abs()).collect());
        let mut window = i64::from(window.max(1));
        if condition > SKEW_CONDITION {
            window = window.max(2);
        }
        let mut torus = Torus {
            m,
            b: flat,
            binv,
            diagonal,
            sigma_min,
            condition,
            window,
            offsets: Vec::new(),
        };
        if torus.diagonal.is_none() {
            torus.offsets = torus.window_offsets();
        }
        Ok(torus)
    }

    pub fn from_lattice(lattice: &LatticeBasis, window: u32) -> Result<Torus, NumericError> {
        let b = lattice
            .matrix()
            .iter()
            .map(|r| r.iter().map(|x| x.to_f64()).collect())
            .collect();
        Torus::new(b, window)
    }

    fn window_offsets(&self) -> Vec<Vec<f64>> {
        let m = self.m;
        let w = self.window;
        let side = (2 * w + 1) as usize;
        let total = side.pow(m as u32);
        (0..total)
            .map(|mut idx| {
                let z: Vec<f64> = (0..m)
                    .map(|_| {
                        let v = (idx % side) as i64 - w;
                        idx /= side;
                        v as f64
                    })
                    .collect();
                self.apply(&z)
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal.is_some()
    }

    /// `B·z`.
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.b[i * self.m + j] * z[j]).sum())
            .collect()
    }

    /// `frac(B⁻¹ v)`.
    pub fn reduce(&self, v: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|i| frac((0..self.m).map(|j| self.binv[i * self.m + j] * v[j]).sum()))
            .collect()
    }

    /// Euclidean length of `B·u`.
    pub fn ambient_len(&self, u: &[f64]) -> f64 {
        self.apply(u).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Quotient distance between fractional-coordinate points.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        if let Some(d) = &self.diagonal {
            return x
                .iter()
                .zip(y)
                .zip(d)
                .map(|((a, b), s)| {
                    let w = s * wrap(a - b);
                    w * w
                })
                .sum::<f64>()
                .sqrt();
        }
        let delta: Vec<f64> = x.iter().zip(y).map(|(a, b)| {
            let d = a - b;
            d - d.round()
        }).collect();
        let bd = self.apply(&delta);
        let mut best = f64::INFINITY;
        for off in &self.offsets {
            let s: f64 = bd.iter().zip(off).map(|(a, o)| (a - o) * (a - o)).sum();
            best = best.min(s);
        }
        best.sqrt()
    }
}

impl Metric for Torus {
    fn dist(&self, q: &[f64], p: &[f64]) -> f64 {
        self.distance(q, p)
    }

    fn lower_bound(&self, q: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
        let gaps = q.iter().zip(lo.iter().zip(hi)).map(|(&x, (&l, &h))| interval_wrap(x - h, x - l));
        match &self.diagonal {
            Some(d) => gaps.zip(d).map(|(g, s)| (g * s) * (g * s)).sum::<f64>().sqrt(),
            None => self.sigma_min * gaps.map(|g| g * g).sum::<f64>().sqrt(),
        }
    }
}

fn invert(a: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut aug = vec![0.0; m * 2 * m];
    for i in 0..m {
        aug[i * 2 * m..i * 2 * m + m].copy_from_slice(&a[i * m..(i + 1) * m]);
        aug[i * 2 * m + m + i] = 1.0;
    }
    let w = 2 * m;
    for c in 0..m {
        let p = (c..m).max_by(|&x, &y| aug[x * w + c].abs().total_cmp(&aug[y * w + c].abs()))?;
        if aug[p * w + c] == 0.0 {
            return None;
        }
        for k in 0..w {
            aug.swap(c * w + k, p * w + k);
        }
        let piv = aug[c * w + c];
        for k in 0..w {
            aug[c * w + k] /= piv;
        }
        for r in 0..m {
            if r != c {
                let f = aug[r * w + c];
                if f != 0.0 {
                    for k in 0..w {
                        aug[r * w + k] -= f * aug[c * w + k];
                    }
                }
            }
        }
    }
    Some((0..m).flat_map(|i| aug[i * w + m..(i + 1) * w].to_vec()).collect())
}

/// Smallest and largest singular value via Jacobi iteration on `BᵀB`.
fn singular_range(b: &[f64], m: usize) -> (f64, f64) {
    let mut s = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            s[i * m + j] = (0..m).map(|k| b[k * m + i] * b[k * m + j]).sum();
        }
    }
    for _ in 0..100 {
        let off: f64 = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i * m + j] * s[i * m + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = s[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (s[q * m + q] - s[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..m {
                    let akp = s[k * m + p];
                    let akq = s[k * m + q];
                    s[k * m + p] = c * akp - sn * akq;
                    s[k * m + q] = sn * akp + c * akq;
                }
                for k in 0..m {
                    let apk = s[p * m + k];
                    let aqk = s[q * m + k];
                    s[p * m + k] = c * apk - sn * aqk;
                    s[q * m + k] = sn * apk + c * aqk;
                }
            }
        }
    }
    let eig: Vec<f64> = (0..m).map(|i| s[i * m + i].max(0.0).sqrt()).collect();
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(0.0, f64::max);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::kdtree::{hausdorff, Cloud};
    use proptest::prelude::*;

    fn unit(m: usize) -> Torus {
        let b = (0..m).map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Torus::new(b, 1).unwrap()
    }

    fn skew() -> Torus {
        Torus::new(vec![vec![1.0, 1.0], vec![0.0, 1.0]], 1).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let z2 = unit(2);
        let r = z2.reduce(&[1.25, -0.5]);
        assert!((r[0] - 0.25).abs() < 1e-12 && (r[1] - 0.5).abs() < 1e-12);
        let s = skew();
        let r = s.reduce(&s.apply(&[2.0, 3.0]));
        assert!(r.iter().all(|x| x.min(1.0 - x) < 1e-9));
        let r = s.reduce(&[1.5, 0.5]);
        assert!(r[0].min(1.0 - r[0]) < 1e-12 && (r[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn circle_distances() {
        let c = unit(1);
        assert!((c.distance(&[0.0], &[0.5]) - 0.5).abs() < 1e-12);
        assert!((c.distance(&[0.1], &[0.9]) - 0.2).abs() < 1e-12);
        let a = Cloud::from_points(1, &[vec![0.0]]);
        let b = Cloud::from_points(1, &[vec![0.0], vec![0.5]]);
        assert!((hausdorff(&c, &a, &b).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(hausdorff(&c, &b, &b).unwrap(), 0.0);
    }

    #[test]
    fn singular_rejected() {
        assert!(Torus::new(vec![vec![1.0, 2.0], vec![2.0, 4.0]], 1).is_err());
    }

    #[test]
    fn skew_window_raised() {
        let t = Torus::new(vec![vec![1.0, 30.0], vec![0.0, 1.0]], 1).unwrap();
        assert!(t.condition() > 10.0);
        assert_eq!(t.window(), 2);
        assert_eq!(skew().window(), 1);
    }

    #[test]
    fn interval_wrap_cases() {
        assert_eq!(interval_wrap(0.2, 0.3), 0.2);
        assert!((interval_wrap(-0.3, -0.2) - 0.2).abs() < 1e-15);
        assert_eq!(interval_wrap(0.9, 1.1), 0.0);
        assert!((interval_wrap(2.6, 2.7) - 0.3).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn pseudometric(x in proptest::collection::vec(0.0f64..1.0, 6), skewed in any::<bool>()) {
            let t = if skewed { skew() } else { unit(2) };
            let (a, b, c) = (&x[0..2], &x[2..4], &x[4..6]);
            prop_assert!((t.distance(a, b) - t.distance(b, a)).abs() < 1e-9);
            prop_assert!(t.distance(a, c) <= t.distance(a, b) + t.distance(b, c) + 1e-9);
            prop_assert!(t.distance(a, a) < 1e-12);
        }

        #[test]
        fn lower_bound_is_valid(q in proptest::collection::vec(0.0f64..1.0, 2),
                                 p in proptest::collection::vec((0.0f64..1.0, 0.0f64..0.3), 2),
                                 s in proptest::collection::vec(0.0f64..1.0, 2),
                                 skewed in any::<bool>()) {
            let t = if skewed { skew() } else { unit(2) };
            let lo: Vec<f64> = p.iter().map(|(a, _)| *a).collect();
            let hi: Vec<f64> = p.iter().map(|(a, w)| a + w).collect();
            let y: Vec<f64> = (0..2).map(|i| lo[i] + s[i] * (hi[i] - lo[i])).collect();
            prop_assert!(t.lower_bound(&q, &lo, &hi) <= t.distance(&q, &y) + 1e-12);
        }

        #[test]
        fn reduction_is_lattice_invariant(v in proptest::collection::vec(-5.0f64..5.0, 2), z in proptest::collection::vec(-4i32..5, 2)) {
            let t = skew();
            let shift = t.apply(&[f64::from(z[0]), f64::from(z[1])]);
            let moved: Vec<f64> = v.iter().zip(&shift).map(|(a, b)| a + b).collect();
            let (r1, r2) = (t.reduce(&v), t.reduce(&moved));
            prop_assert!(t.distance(&r1, &r2) < 1e-9);
        }
    }
}
