//! Sampling of dilated pieces and of closed affine subtori.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::kdtree::Cloud;
use super::torus::{frac, Torus};
use crate::limits::{Piece, PolyVec};
use crate::qlinalg::{self, KVec, Subspace};
use crate::scalar::{Rational, Scalar};

/// Exact rational value of a finite float.
pub fn rational_from_f64(t: f64) -> Rational {
    Rational::from_float(t).expect("finite time value")
}

fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Fractional part of the real value of `x`, accurate far beyond `f64`
/// rounding of the integer part.
pub fn frac_exact(x: &Scalar) -> f64 {
    let mid = match x.as_rational() {
        Some(q) => q,
        None => {
            let eps = Rational::new(1.into(), num_bigint::BigInt::from(1u64) << 62);
            let (lo, hi) = x.approx(&eps);
            (lo + hi) / Rational::from_integer(2.into())
        }
    };
    frac(rational_to_f64(&(&mid - mid.floor())))
}

/// Evaluates `p` at the float time `t` exactly and returns the reduced value.
pub fn eval_frac(p: &PolyVec, t: f64) -> Vec<f64> {
    let field = p.coeffs()[0][0].field();
    let ts = Scalar::from_rational(field, rational_from_f64(t));
    p.eval(&ts).iter().map(frac_exact).collect()
}

/// Float Horner evaluation, unreduced.
pub fn eval_f64(coeffs: &[Vec<f64>], t: f64) -> Vec<f64> {
    let mut acc = coeffs.last().unwrap().clone();
    for c in coeffs.iter().rev().skip(1) {
        for (a, x) in acc.iter_mut().zip(c) {
            *a = *a * t + x;
        }
    }
    acc
}

pub fn poly_to_f64(p: &PolyVec) -> Vec<Vec<f64>> {
    p.coeffs().iter().map(|c| c.iter().map(Scalar::to_f64).collect()).collect()
}

/// A finite point set or polytope whose vertices move along polynomials,
/// covered by simplices on its vertices.
#[derive(Clone, Debug)]
pub struct PieceSampler {
    vertices: Vec<PolyVec>,
    simplices: Vec<Vec<usize>>,
}

fn combinations(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for i in start..n {
        current.push(i);
        combinations(n, k, i + 1, current, out);
        current.pop();
    }
}

/// Affinely independent `(r+1)`-subsets covering the hull of `points`.
fn covering_simplices(points: &[KVec], r: usize) -> Vec<Vec<usize>> {
    let n = points.len();
    if n == r + 1 {
        return vec![(0..n).collect()];
    }
    let field = points[0][0].field().clone();
    let mut all = Vec::new();
    combinations(n, r + 1, 0, &mut Vec::new(), &mut all);
    all.into_iter()
        .filter(|subset| {
            let diffs: Vec<KVec> =
                subset[1..].iter().map(|&i| qlinalg::vec_sub(&points[i], &points[subset[0]])).collect();
            Subspace::span(&field, points[0].len(), &diffs).map_or(false, |s| s.rank() == r)
        })
        .collect()
}

/// One simplex at a fixed time: base point and edge vectors.
#[derive(Clone, Debug)]
pub struct SimplexAt {
    pub base: Vec<f64>,
    pub edges: Vec<Vec<f64>>,
}

impl PieceSampler {
    /// `image` maps an input point to its coordinate polynomial.
    pub fn new(piece: &Piece, image: impl Fn(&KVec) -> PolyVec) -> PieceSampler {
        let vertices: Vec<PolyVec> = piece.points().iter().map(&image).collect();
        let simplices = match piece {
            Piece::Points(p) => (0..p.len()).map(|i| vec![i]).collect(),
            Piece::Polytope(p) => covering_simplices(p, piece.affine_dim()),
        };
        PieceSampler { vertices, simplices }
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].ambient_dim()
    }

    /// Simplices at time `t`; base points are reduced exactly when
    /// `reduce_base` is set, edges are exact differences rounded to floats.
    pub fn at(&self, t: f64, reduce_base: bool) -> Vec<SimplexAt> {
        let field = self.vertices[0].coeffs()[0][0].field();
        let ts = Scalar::from_rational(field, rational_from_f64(t));
        let values: Vec<KVec> = self.vertices.iter().map(|p| p.eval(&ts)).collect();
        self.simplices
            .iter()
            .map(|s| {
                let v0 = &values[s[0]];
                let base = if reduce_base {
                    v0.iter().map(frac_exact).collect()
                } else {
                    v0.iter().map(Scalar::to_f64).collect()
                };
                let edges = s[1..]
                    .iter()
                    .map(|&i| qlinalg::vec_sub(&values[i], v0).iter().map(Scalar::to_f64).collect())
                    .collect();
                SimplexAt { base, edges }
            })
            .collect()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn divisions(s: &SimplexAt, density: f64, len: &dyn Fn(&[f64]) -> f64) -> usize {
    let longest = s.edges.iter().map(|e| len(e)).fold(0.0, f64::max);
    if s.edges.is_empty() {
        0
    } else {
        (density * longest).ceil().max(1.0) as usize
    }
}

fn grid_count(simplices: &[SimplexAt], density: f64, len: &dyn Fn(&[f64]) -> f64) -> f64 {
    simplices
        .iter()
        .map(|s| {
            let n = divisions(s, density, len);
            binomial(n + s.edges.len(), s.edges.len())
        })
        .sum()
}

/// Largest density `≤ wanted` whose sample count stays within `cap`.
pub fn clamp_density(simplices: &[SimplexAt], wanted: f64, cap: usize, len: &dyn Fn(&[f64]) -> f64) -> f64 {
    if grid_count(simplices, wanted, len) <= cap as f64 {
        return wanted;
    }
    let (mut lo, mut hi) = (0.0, wanted);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if grid_count(simplices, mid, len) <= cap as f64 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Jittered barycentric grid over every simplex. Each point is
/// `base + Σ λ_i e_i`; `emit` receives the unreduced coordinates.
pub fn grid_simplices(
    simplices: &[SimplexAt],
    density: f64,
    len: &dyn Fn(&[f64]) -> f64,
    seed: u64,
    emit: &mut dyn FnMut(&[f64]),
) {
    let mut point = Vec::new();
    for (si, s) in simplices.iter().enumerate() {
        let r = s.edges.len();
        let n = divisions(s, density, len);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (si as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        if r == 0 {
            emit(&s.base);
            continue;
        }
        let nf = n as f64;
        let mut idx = vec![0usize; r];
        let mut lambda = vec![0.0; r];
        loop {
            let mut total = 0.0;
            for (l, &k) in lambda.iter_mut().zip(&idx) {
                let jitter: f64 = rng.gen_range(-0.5..0.5);
                *l = ((k as f64 + jitter) / nf).max(0.0);
                total += *l;
            }
            if total > 1.0 {
                for l in lambda.iter_mut() {
                    *l /= total;
                }
            }
            point.clear();
            point.extend_from_slice(&s.base);
            for (l, e) in lambda.iter().zip(&s.edges) {
                for (p, x) in point.iter_mut().zip(e) {
                    *p += l * x;
                }
            }
            emit(&point);
            // advance the composition with Σ idx ≤ n
            let mut d = 0;
            loop {
                if d == r {
                    break;
                }
                idx[d] += 1;
                if idx.iter().sum::<usize>() <= n {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == r {
                break;
            }
        }
    }
}

fn time_seed(seed: u64, t: f64, piece: usize) -> u64 {
    seed ^ t.to_bits().rotate_left(17) ^ (piece as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// `π(ρ_t X)` in fractional lattice coordinates: pieces are given by their
/// lattice-coordinate vertex polynomials. Returns the cloud; the density is
/// lowered uniformly if the cap would be exceeded.
pub fn sample_pieces(pieces: &[PieceSampler], t: f64, torus: &Torus, density: f64, cap: usize, seed: u64) -> Cloud {
    let all: Vec<Vec<SimplexAt>> = pieces.iter().map(|p| p.at(t, true)).collect();
    let flat: Vec<SimplexAt> = all.iter().flatten().cloned().collect();
    let len = |e: &[f64]| torus.ambient_len(e);
    let density = clamp_density(&flat, density, cap, &len);
    let mut cloud = Cloud::new(torus.dim());
    for (pi, simplices) in all.iter().enumerate() {
        grid_simplices(simplices, density, &len, time_seed(seed, t, pi), &mut |p| {
            let r: Vec<f64> = p.iter().map(|&x| frac(x)).collect();
            cloud.push(&r);
        });
    }
    cloud
}

/// The closed subtorus `π(d + span{u_i})` for integer lattice-coordinate
/// vectors `u_i`, gridded over the cell `d + [0,1)^r·U`, which covers it.
pub fn sample_subtorus(d: &[f64], basis: &[Vec<f64>], torus: &Torus, density: f64, cap: usize) -> Cloud {
    let r = basis.len();
    let mut counts: Vec<usize> = basis
        .iter()
        .map(|u| (density * torus.ambient_len(u)).ceil().max(1.0) as usize)
        .collect();
    let total = |c: &[usize]| c.iter().map(|&x| x as f64).product::<f64>();
    if total(&counts) > cap as f64 {
        let scale = (cap as f64 / total(&counts)).powf(1.0 / r as f64);
        for c in counts.iter_mut() {
            *c = ((*c as f64) * scale).floor().max(1.0) as usize;
        }
    }
    let mut cloud = Cloud::new(torus.dim());
    let mut idx = vec![0usize; r];
    let mut p = vec![0.0; d.len()];
    loop {
        p.copy_from_slice(d);
        for (k, (u, &c)) in basis.iter().zip(&counts).enumerate() {
            let s = idx[k] as f64 / c as f64;
            for (x, ui) in p.iter_mut().zip(u) {
                *x += s * ui;
            }
        }
        let reduced: Vec<f64> = p.iter().map(|&x| frac(x)).collect();
        cloud.push(&reduced);
        let mut k = 0;
        while k < r {
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == r {
            break;
        }
    }
    cloud
}

/// Grid of the whole torus.
pub fn full_grid(torus: &Torus, density: f64, cap: usize) -> Cloud {
    let m = torus.dim();
    let basis: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    sample_subtorus(&vec![0.0; m], &basis, torus, density, cap)
}

/// Integer lattice-coordinate basis of a rational subspace given in
/// lattice coordinates (basis vectors as floats).
pub fn integer_basis(rows: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| qlinalg::primitive_integer_vector(r).iter().map(rational_to_f64).collect())
        .collect()
}

pub fn is_zero_row(r: &[Rational]) -> bool {
    r.iter().all(Zero::is_zero)
}
