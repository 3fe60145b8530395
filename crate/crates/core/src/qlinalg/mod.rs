//! Exact linear algebra over `K = Q(θ)`.
//!
//! Subspaces are stored in reduced row-echelon form, which makes equality of
//! subspaces a comparison of bases. Rationality is always measured against a
//! [`LatticeBasis`]: a subspace is rational when, pulled back to lattice
//! coordinates, it has a basis of rational vectors.

mod hnf;

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{Coefficient, FieldRef, Rational, Scalar, ScalarError};

pub use hnf::{hnf, hnf_rational};

/// A vector in `K^m`.
pub type KVec = Vec<Scalar>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lattice basis is singular")]
    Singular,
    #[error("degenerate lattice: generators have rank {rank} < {dim}")]
    DegenerateLattice { rank: usize, dim: usize },
    #[error("lattice generators must have at least one entry")]
    NoGenerators,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Gauss-Jordan elimination in place. Zero rows are dropped and the pivot
/// column of each remaining row is returned; pivots are normalized to one.
pub fn rref_in_place<T: Coefficient>(rows: &mut Vec<Vec<T>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero_elem()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip_elem();
        for x in rows[r].iter_mut() {
            *x = x.times(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_elem() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero_elem() {
                    *x = x.minus(&f.times(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : row·x = 0 for every row}` in `T^ncols`, one vector per free
/// column, read off the reduced echelon form.
pub fn nullspace<T: Coefficient>(rows: &[Vec<T>], ncols: usize, zero: &T, one: &T) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref_in_place(&mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); ncols];
        v[free] = one.clone();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = row[free].negated();
        }
        basis.push(v);
    }
    basis
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero(a[0].field());
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> KVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> KVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Scalar], s: &Scalar) -> KVec {
    a.iter().map(|x| x * s).collect()
}

pub fn zero_vec(field: &FieldRef, m: usize) -> KVec {
    vec![Scalar::zero(field); m]
}

pub fn unit_vec(field: &FieldRef, m: usize, i: usize) -> KVec {
    let mut v = zero_vec(field, m);
    v[i] = Scalar::one(field);
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Row-major product `a·v`.
pub fn mat_vec(a: &[KVec], v: &[Scalar]) -> KVec {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &[KVec], b: &[KVec]) -> Vec<KVec> {
    let field = a[0][0].field().clone();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Scalar::zero(&field);
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[KVec]) -> Vec<KVec> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn identity(field: &FieldRef, n: usize) -> Vec<KVec> {
    (0..n).map(|i| unit_vec(field, n, i)).collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(a: &[KVec]) -> Option<Vec<KVec>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let field = a[0][0].field().clone();
    let mut aug: Vec<KVec> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vec(&field, n, i));
            r
        })
        .collect();
    let pivots = rref_in_place(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A subspace of `K^m` held by its canonical reduced row-echelon basis.
#[derive(Clone)]
pub struct Subspace {
    field: FieldRef,
    ambient: usize,
    basis: Vec<KVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &FieldRef, ambient: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &FieldRef, ambient: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            ambient,
            basis: identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors (the `rref` operation).
    pub fn span(field: &FieldRef, ambient: usize, vectors: &[KVec]) -> Result<Subspace, LinalgError> {
        for v in vectors {
            check_dim(ambient, v.len())?;
            for x in v {
                if !x.field().same_as(field) {
                    return Err(ScalarError::DomainMismatch.into());
                }
            }
        }
        let mut rows = vectors.to_vec();
        let pivots = rref_in_place(&mut rows);
        Ok(Subspace {
            field: field.clone(),
            ambient,
            basis: rows,
            pivots,
        })
    }

    /// `{x : row·x = 0 for every row of matrix}`.
    pub fn kernel(field: &FieldRef, ncols: usize, matrix: &[KVec]) -> Result<Subspace, LinalgError> {
        for row in matrix {
            check_dim(ncols, row.len())?;
        }
        let zero = Scalar::zero(field);
        let one = Scalar::one(field);
        let basis = nullspace(matrix, ncols, &zero, &one);
        Subspace::span(field, ncols, &basis)
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[KVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Linear functionals vanishing on the subspace, as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace {
        Subspace::kernel(&self.field, self.ambient, &self.basis).expect("consistent dimensions")
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(&self.field, self.ambient, &rows)
    }

    /// Intersection as the kernel of the stacked annihilators.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        let mut rows = self.annihilator().basis;
        rows.extend(other.annihilator().basis);
        Subspace::kernel(&self.field, self.ambient, &rows)
    }

    /// Canonical representative of `v` modulo the subspace: the pivot entries
    /// are cleared.
    pub fn reduce(&self, v: &[Scalar]) -> KVec {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (x, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, LinalgError> {
        check_dim(self.ambient, v.len())?;
        Ok(is_zero_vec(&self.reduce(v)))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.rank() <= other.rank()
            && self.basis.iter().all(|v| is_zero_vec(&other.reduce(v)))
    }

    /// Image under a linear map given row-major (`out = map·v`).
    pub fn map(&self, map: &[KVec], out_dim: usize) -> Result<Subspace, LinalgError> {
        let images: Vec<KVec> = self.basis.iter().map(|v| mat_vec(map, v)).collect();
        Subspace::span(&self.field, out_dim, &images)
    }
}

fn check_dim(expected: usize, got: usize) -> Result<(), LinalgError> {
    if expected == got {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, got })
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return write!(f, "K^{}", self.ambient);
        }
        write!(f, "span{{")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let entries: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", entries.join(", "))?;
        }
        write!(f, "}} ⊆ K^{}", self.ambient)
    }
}

/// A translate of a subspace, with the translate reduced modulo the direction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coset {
    pub translate: KVec,
    pub direction: Subspace,
}

/// Canonical coset `a + L`; two cosets agree iff their translates differ by
/// an element of `L`.
pub fn coset_reduce(a: &[Scalar], direction: &Subspace) -> Result<Coset, LinalgError> {
    check_dim(direction.ambient_dim(), a.len())?;
    Ok(Coset {
        translate: direction.reduce(a),
        direction: direction.clone(),
    })
}

/// A lattice `Γ = B·Z^m` given by an invertible matrix whose columns generate it.
#[derive(Clone)]
pub struct LatticeBasis {
    field: FieldRef,
    // columns of B, i.e. the generating vectors
    vectors: Vec<KVec>,
    // B⁻¹ row-major
    inverse: Vec<KVec>,
}

impl LatticeBasis {
    /// From the generating vectors (the columns of `B`).
    pub fn new(field: &FieldRef, vectors: Vec<KVec>) -> Result<LatticeBasis, LinalgError> {
        let m = vectors.len();
        if m == 0 {
            return Err(LinalgError::NoGenerators);
        }
        for v in &vectors {
            check_dim(m, v.len())?;
        }
        let b = transpose(&vectors);
        let inverse = inverse(&b).ok_or(LinalgError::Singular)?;
        Ok(LatticeBasis {
            field: field.clone(),
            vectors,
            inverse,
        })
    }

    /// `Z^m`.
    pub fn integer(field: &FieldRef, m: usize) -> LatticeBasis {
        LatticeBasis::new(field, identity(field, m)).expect("identity is invertible")
    }

    pub fn diagonal(field: &FieldRef, entries: &[Scalar]) -> Result<LatticeBasis, LinalgError> {
        let m = entries.len();
        let vectors = (0..m)
            .map(|i| {
                let mut v = zero_vec(field, m);
                v[i] = entries[i].clone();
                v
            })
            .collect();
        LatticeBasis::new(field, vectors)
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Generating vectors (columns of `B`).
    pub fn vectors(&self) -> &[KVec] {
        &self.vectors
    }

    /// `B` row-major.
    pub fn matrix(&self) -> Vec<KVec> {
        transpose(&self.vectors)
    }

    pub fn inverse_matrix(&self) -> &[KVec] {
        &self.inverse
    }

    /// `B⁻¹·v`.
    pub fn coords(&self, v: &[Scalar]) -> Result<KVec, LinalgError> {
        check_dim(self.dim(), v.len())?;
        Ok(mat_vec(&self.inverse, v))
    }

    /// `B·z`.
    pub fn from_coords(&self, z: &[Scalar]) -> KVec {
        let mut out = zero_vec(&self.field, self.dim());
        for (c, v) in z.iter().zip(&self.vectors) {
            if !c.is_zero() {
                out = vec_add(&out, &vec_scale(v, c));
            }
        }
        out
    }

    /// The sublattice `N·Γ`.
    pub fn scaled(&self, n: u64) -> LatticeBasis {
        let s = Scalar::from_rational(&self.field, Rational::from_integer(n.into()));
        let vectors = self.vectors.iter().map(|v| vec_scale(v, &s)).collect();
        LatticeBasis::new(&self.field, vectors).expect("nonzero multiple of an invertible basis")
    }

    /// `Γ^n ⊆ (K^m)^n`, block diagonal.
    pub fn power(&self, n: usize) -> LatticeBasis {
        let m = self.dim();
        let mut vectors = Vec::with_capacity(m * n);
        for block in 0..n {
            for v in &self.vectors {
                let mut w = zero_vec(&self.field, m * n);
                w[block * m..(block + 1) * m].clone_from_slice(v);
                vectors.push(w);
            }
        }
        LatticeBasis::new(&self.field, vectors).expect("block diagonal of invertible blocks")
    }

    /// Whether `B` is diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.vectors
            .iter()
            .enumerate()
            .all(|(j, v)| v.iter().enumerate().all(|(i, x)| i == j || x.is_zero()))
    }
}

impl PartialEq for LatticeBasis {
    fn eq(&self, other: &Self) -> bool {
        self.vectors == other.vectors
    }
}

impl fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", self.vectors)
    }
}

/// Expands each coordinate of `v` in the basis `1, θ, …, θ^{d-1}`, giving `d`
/// rational vectors whose `θ`-weighted sum is `v`.
pub fn rational_parts(v: &[Scalar]) -> Vec<Vec<Rational>> {
    let d = v.first().map_or(1, |x| x.field().degree());
    (0..d)
        .map(|k| v.iter().map(|x| x.rational_coords()[k].clone()).collect())
        .collect()
}

/// The smallest `Γ`-rational subspace containing `l`.
///
/// In lattice coordinates a rational covector kills a vector of `K^m` iff it
/// kills each of its rational parts, so the rational annihilator of `l` is the
/// rational kernel of the stacked parts, and the closure is the kernel of that
/// annihilator mapped back through `B`.
pub fn rational_closure(l: &Subspace, lattice: &LatticeBasis) -> Result<Subspace, LinalgError> {
    let m = l.ambient_dim();
    check_dim(m, lattice.dim())?;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for v in l.basis() {
        let y = lattice.coords(v)?;
        rows.extend(rational_parts(&y).into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    let (zero, one) = (Rational::zero(), Rational::one());
    let annihilators = nullspace(&rows, m, &zero, &one);
    let closure_coords = nullspace(&annihilators, m, &zero, &one);
    let field = l.field();
    let vectors: Vec<KVec> = closure_coords
        .iter()
        .map(|z| {
            let zk: KVec = z.iter().map(|q| Scalar::from_rational(field, q.clone())).collect();
            lattice.from_coords(&zk)
        })
        .collect();
    Subspace::span(field, m, &vectors)
}

/// Whether `l` has a rational basis in lattice coordinates.
pub fn is_rational_subspace(l: &Subspace, lattice: &LatticeBasis) -> Result<bool, LinalgError> {
    Ok(rational_closure(l, lattice)?.rank() == l.rank())
}

/// Rational lattice-coordinate basis of a `Γ`-rational subspace, each vector
/// scaled to a primitive integer vector. Fails with `None` if `l` is not
/// rational.
pub fn rational_coordinate_basis(l: &Subspace, lattice: &LatticeBasis) -> Option<Vec<Vec<Rational>>> {
    let coords: Vec<KVec> = l.basis().iter().map(|v| lattice.coords(v).ok()).collect::<Option<_>>()?;
    let field = l.field();
    let sub = Subspace::span(field, l.ambient_dim(), &coords).ok()?;
    let mut out = Vec::new();
    for v in sub.basis() {
        let q: Vec<Rational> = v.iter().map(Scalar::as_rational).collect::<Option<_>>()?;
        out.push(primitive_integer_vector(&q));
    }
    Some(out)
}

/// Scales a nonzero rational vector to a primitive integer vector with the
/// same direction and orientation.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<Rational> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}
