//! Hausdorff limits at infinity of proper polynomial dilation families.
//!
//! A dilation `ρ_t(x) = M_t·x` with `M_t = Σ_{i≥1} t^i A_i` carries each
//! input piece into a translate `p_j(t) + L_j` of a fixed subspace. The limits
//! of the projected family are then parametrized by the rational closures
//! `L_j^Γ` and by the nearest coset `c̄ + V` of the stacked translation curve.

use thiserror::Error;

use crate::qlinalg::{
    self, coset_reduce, is_zero_vec, mat_vec, rational_closure, KVec, LatticeBasis, LinalgError, Subspace,
};
use crate::scalar::{FieldRef, Scalar, ScalarError};
use crate::unipotent::UnipotentGroupSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitsError {
    #[error("input set is empty")]
    EmptyInput,
    #[error("input piece has no points")]
    EmptyPiece,
    #[error("polytope has repeated vertex {0}")]
    RepeatedVertex(usize),
    #[error("dilation has no matrices")]
    NoMatrices,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dilation has a nonzero constant term; use raw mode")]
    NotProper,
    #[error("contract violation: {0}")]
    Contract(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn check_dim(expected: usize, got: usize) -> Result<(), LimitsError> {
    if expected == got {
        Ok(())
    } else {
        Err(LimitsError::DimensionMismatch { expected, got })
    }
}

/// `p(t) = Σ_i t^i coeffs[i]` with vector coefficients in `K^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVec {
    coeffs: Vec<KVec>,
}

impl PolyVec {
    /// Trailing zero coefficients are trimmed; at least the constant term is kept.
    pub fn new(mut coeffs: Vec<KVec>) -> PolyVec {
        assert!(!coeffs.is_empty(), "polynomial needs a constant term");
        while coeffs.len() > 1 && is_zero_vec(coeffs.last().unwrap()) {
            coeffs.pop();
        }
        PolyVec { coeffs }
    }

    pub fn zero(field: &FieldRef, m: usize) -> PolyVec {
        PolyVec { coeffs: vec![qlinalg::zero_vec(field, m)] }
    }

    pub fn ambient_dim(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[KVec] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&KVec> {
        self.coeffs.get(i)
    }

    pub fn is_proper(&self) -> bool {
        is_zero_vec(&self.coeffs[0])
    }

    pub fn eval(&self, t: &Scalar) -> KVec {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = qlinalg::vec_add(&qlinalg::vec_scale(&acc, t), c);
        }
        acc
    }

    pub fn sub(&self, other: &PolyVec) -> PolyVec {
        let n = self.coeffs.len().max(other.coeffs.len());
        let m = self.ambient_dim();
        let field = self.coeffs[0][0].field().clone();
        let zero = qlinalg::zero_vec(&field, m);
        PolyVec::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&zero);
                    let b = other.coeffs.get(i).unwrap_or(&zero);
                    qlinalg::vec_sub(a, b)
                })
                .collect(),
        )
    }

    /// Applies a linear map (row-major) to every coefficient.
    pub fn map(&self, matrix: &[KVec]) -> PolyVec {
        PolyVec::new(self.coeffs.iter().map(|c| mat_vec(matrix, c)).collect())
    }

    /// Adds a constant vector.
    pub fn shifted(&self, v: &[Scalar]) -> PolyVec {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = qlinalg::vec_add(&coeffs[0], v);
        PolyVec::new(coeffs)
    }
}

/// Proper polynomial matrix `M_t = Σ_{i=1}^{d} t^i A_i` of shape `m×k`.
/// `matrices[i]` holds `A_{i+1}` row-major, so no constant term exists.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationFamily {
    field: FieldRef,
    m: usize,
    k: usize,
    matrices: Vec<Vec<KVec>>,
}

impl DilationFamily {
    pub fn new(field: &FieldRef, matrices: Vec<Vec<KVec>>) -> Result<DilationFamily, LimitsError> {
        let first = matrices.first().ok_or(LimitsError::NoMatrices)?;
        let m = first.len();
        let k = first.first().map_or(0, Vec::len);
        if m == 0 || k == 0 {
            return Err(LimitsError::NoMatrices);
        }
        for a in &matrices {
            check_dim(m, a.len())?;
            for row in a {
                check_dim(k, row.len())?;
                if row.iter().any(|x| !x.field().same_as(field)) {
                    return Err(ScalarError::DomainMismatch.into());
                }
            }
        }
        Ok(DilationFamily { field: field.clone(), m, k, matrices })
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// Output dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Input dimension.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.matrices.len()
    }

    /// `A_i` for `i = 1..=degree`.
    pub fn matrix(&self, i: usize) -> &[KVec] {
        &self.matrices[i - 1]
    }

    pub fn matrices(&self) -> &[Vec<KVec>] {
        &self.matrices
    }

    /// `t ↦ M_t·x`.
    pub fn apply(&self, x: &[Scalar]) -> PolyVec {
        let mut coeffs = vec![qlinalg::zero_vec(&self.field, self.m)];
        coeffs.extend(self.matrices.iter().map(|a| mat_vec(a, x)));
        PolyVec::new(coeffs)
    }

    pub fn eval(&self, t: &Scalar, x: &[Scalar]) -> KVec {
        self.apply(x).eval(t)
    }

    /// Composes every `A_i` with a linear map (row-major) on the output side.
    pub fn post_compose(&self, map: &[KVec]) -> Result<DilationFamily, LimitsError> {
        let matrices = self
            .matrices
            .iter()
            .map(|a| qlinalg::mat_mul(map, a))
            .collect();
        DilationFamily::new(&self.field, matrices)
    }
}

/// One piece of an input set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    Points(Vec<KVec>),
    /// Convex hull of the vertices.
    Polytope(Vec<KVec>),
}

impl Piece {
    pub fn points(&self) -> &[KVec] {
        match self {
            Piece::Points(p) | Piece::Polytope(p) => p,
        }
    }

    /// Affine dimension of the point set.
    pub fn affine_dim(&self) -> usize {
        let pts = self.points();
        let diffs: Vec<KVec> = pts[1..].iter().map(|v| qlinalg::vec_sub(v, &pts[0])).collect();
        let field = pts[0][0].field();
        Subspace::span(field, pts[0].len(), &diffs).map_or(0, |s| s.rank())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSet {
    k: usize,
    pieces: Vec<Piece>,
}

impl InputSet {
    pub fn new(pieces: Vec<Piece>) -> Result<InputSet, LimitsError> {
        let k = pieces
            .first()
            .and_then(|p| p.points().first())
            .map(Vec::len)
            .ok_or(LimitsError::EmptyInput)?;
        for piece in &pieces {
            let pts = piece.points();
            if pts.is_empty() {
                return Err(LimitsError::EmptyPiece);
            }
            for (i, v) in pts.iter().enumerate() {
                check_dim(k, v.len())?;
                if matches!(piece, Piece::Polytope(_)) && pts[..i].contains(v) {
                    return Err(LimitsError::RepeatedVertex(i));
                }
            }
        }
        Ok(InputSet { k, pieces })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }
}

/// One member `p(t) + L` of a multi-coset family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiCoset {
    pub p: PolyVec,
    pub l: Subspace,
}

impl MultiCoset {
    /// Reduces every coefficient of `p` modulo `l`.
    pub fn new(p: PolyVec, l: Subspace) -> MultiCoset {
        let coeffs = p.coeffs().iter().map(|c| l.reduce(c)).collect();
        MultiCoset { p: PolyVec::new(coeffs), l }
    }

    pub fn contains_at(&self, t: &Scalar, x: &[Scalar]) -> Result<bool, LimitsError> {
        let diff = qlinalg::vec_sub(x, &self.p.eval(t));
        Ok(coset_reduce(&diff, &self.l)?.translate.iter().all(Scalar::is_zero))
    }
}

/// `t ↦ ⋃_j (p_j(t) + L_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiCosetFamily {
    pub cosets: Vec<MultiCoset>,
}

impl MultiCosetFamily {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.cosets[0].l.ambient_dim()
    }

    pub fn field(&self) -> &FieldRef {
        self.cosets[0].l.field()
    }

    /// Whether `x` lies in the union at time `t`.
    pub fn contains_at(&self, t: &Scalar, x: &[Scalar]) -> Result<bool, LimitsError> {
        for c in &self.cosets {
            if c.contains_at(t, x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// One coset per point of a finite piece, and for a polytope with base vertex
/// `v₀` the coset `M_t v₀ + span{A_i(v − w)}`, which contains the whole image
/// because `ρ_t` is linear. The result is passed through [`compress`].
pub fn normal_form(dil: &DilationFamily, x: &InputSet) -> Result<MultiCosetFamily, LimitsError> {
    check_dim(dil.k(), x.k())?;
    let field = dil.field();
    let mut cosets = Vec::new();
    for piece in x.pieces() {
        match piece {
            Piece::Points(points) => {
                for v in points {
                    cosets.push(MultiCoset::new(dil.apply(v), Subspace::zero(field, dil.m())));
                }
            }
            Piece::Polytope(vertices) => {
                let v0 = &vertices[0];
                // Differences against v₀ span the same space as all pairwise differences.
                let mut dirs = Vec::new();
                for v in &vertices[1..] {
                    let d = qlinalg::vec_sub(v, v0);
                    for a in dil.matrices() {
                        dirs.push(mat_vec(a, &d));
                    }
                }
                let l = Subspace::span(field, dil.m(), &dirs)?;
                cosets.push(MultiCoset::new(dil.apply(v0), l));
            }
        }
    }
    Ok(compress(&MultiCosetFamily { cosets }))
}

/// Drops coset `j` when some other surviving coset `k` satisfies `L_j ⊆ L_k`
/// and `p_j − p_k` has all coefficients in `L_k`, which makes
/// `p_j(t) + L_j ⊆ p_k(t) + L_k` for every `t`. Cosets are scanned in order and
/// the first eligible `k` absorbs.
pub fn compress(m: &MultiCosetFamily) -> MultiCosetFamily {
    let n = m.cosets.len();
    let mut alive = vec![true; n];
    for j in 0..n {
        let cj = &m.cosets[j];
        let absorbed = (0..n).any(|k| {
            if k == j || !alive[k] {
                return false;
            }
            let ck = &m.cosets[k];
            cj.l.is_subspace_of(&ck.l)
                && cj.p.sub(&ck.p).coeffs().iter().all(|c| is_zero_vec(&ck.l.reduce(c)))
        });
        if absorbed {
            alive[j] = false;
        }
    }
    MultiCosetFamily {
        cosets: m
            .cosets
            .iter()
            .zip(alive)
            .filter_map(|(c, a)| a.then(|| c.clone()))
            .collect(),
    }
}

/// Inclusion-maximal subspaces among the `L_j`, deduplicated, in first-seen order.
pub fn slmax(m: &MultiCosetFamily) -> Vec<Subspace> {
    let mut distinct: Vec<Subspace> = Vec::new();
    for c in &m.cosets {
        if !distinct.contains(&c.l) {
            distinct.push(c.l.clone());
        }
    }
    distinct
        .iter()
        .filter(|l| !distinct.iter().any(|o| o != *l && l.is_subspace_of(o)))
        .cloned()
        .collect()
}

/// The curve `σ(t) = (p_1(t), …, p_n(t)) ∈ K^{m·n}`.
pub fn stacked_curve(m: &MultiCosetFamily) -> PolyVec {
    let field = m.field().clone();
    let dim = m.ambient_dim();
    let n = m.len();
    let degree = m.cosets.iter().map(|c| c.p.degree()).max().unwrap_or(0);
    let coeffs = (0..=degree)
        .map(|i| {
            let mut v = Vec::with_capacity(dim * n);
            for c in &m.cosets {
                match c.p.coeff(i) {
                    Some(x) => v.extend(x.iter().cloned()),
                    None => v.extend(qlinalg::zero_vec(&field, dim)),
                }
            }
            v
        })
        .collect();
    PolyVec::new(coeffs)
}

/// Nearest coset `c̄ + V` at infinity of a polynomial curve.
///
/// For a functional `φ`, `φ(σ(t))` is a polynomial, bounded as `t → ∞` iff
/// constant iff `φ` kills every coefficient of positive degree. So the curve
/// stays within bounded distance of `c₀ + span{c_i : i ≥ 1}` and of no smaller
/// coset, and it is exactly that coset translated by zero.
pub fn nearest_coset(sigma: &PolyVec) -> (KVec, Subspace) {
    let field = sigma.coeffs()[0][0].field().clone();
    let v = Subspace::span(&field, sigma.ambient_dim(), &sigma.coeffs()[1..]).expect("consistent dimensions");
    (sigma.coeffs()[0].clone(), v)
}

/// `(c̄, V)` for the stacked translation curve of `m`.
pub fn curve_coset(m: &MultiCosetFamily) -> (KVec, Subspace) {
    nearest_coset(&stacked_curve(m))
}

/// Complete description of the Hausdorff limits at infinity: the sets
/// `π_Γ(⋃_j (d_j + closures[j]))` for `(d_1, …, d_n) ∈ cbar + vclosed`.
#[derive(Clone, Debug)]
pub struct LimitFamily {
    pub lattice: LatticeBasis,
    pub closures: Vec<Subspace>,
    pub cbar: KVec,
    pub v: Subspace,
    pub vclosed: Subspace,
    pub n: usize,
}

impl LimitFamily {
    /// Whether every member is the whole torus.
    pub fn is_full(&self) -> bool {
        self.closures.iter().any(Subspace::is_full)
    }
}

pub fn limit_family(m: &MultiCosetFamily, lattice: &LatticeBasis) -> Result<LimitFamily, LimitsError> {
    check_dim(m.ambient_dim(), lattice.dim())?;
    let closures = m
        .cosets
        .iter()
        .map(|c| rational_closure(&c.l, lattice))
        .collect::<Result<Vec<_>, _>>()?;
    let (cbar, v) = curve_coset(m);
    let vclosed = rational_closure(&v, &lattice.power(m.len()))?;
    Ok(LimitFamily {
        lattice: lattice.clone(),
        closures,
        cbar,
        v,
        vclosed,
        n: m.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convergence {
    ConvergesStronglyToFull,
    NotFull,
}

impl Convergence {
    pub fn as_str(self) -> &'static str {
        match self {
            Convergence::ConvergesStronglyToFull => "ConvergesStronglyToFull",
            Convergence::NotFull => "NotFull",
        }
    }
}

/// Strong convergence to the whole torus holds iff some inclusion-maximal
/// `L_j` has full rational closure.
pub fn classify_convergence(m: &MultiCosetFamily, lattice: &LatticeBasis) -> Result<Convergence, LimitsError> {
    for l in slmax(m) {
        if rational_closure(&l, lattice)?.is_full() {
            return Ok(Convergence::ConvergesStronglyToFull);
        }
    }
    Ok(Convergence::NotFull)
}

/// Smallest `N` in `1..=n_max` for which `certify(N)` holds, where `certify`
/// checks numerically that the family stays bounded away from the full
/// quotient by `N·Γ`. A strongly convergent family has no such `N`.
pub fn nonconvergence_index<F>(classification: Convergence, n_max: u64, certify: F) -> Result<Option<u64>, LimitsError>
where
    F: FnMut(u64) -> bool,
{
    let mut certify = certify;
    if classification == Convergence::ConvergesStronglyToFull {
        return Err(LimitsError::Contract(
            "family converges strongly to the full torus; no proper sublattice certificate exists".into(),
        ));
    }
    Ok((1..=n_max).find(|&n| certify(n)))
}

/// Limits of `t ↦ a(t) + C`: the sets `π(d + C)` with `d ∈ cbar + vclosed`.
#[derive(Clone, Debug)]
pub struct TranslatedBodyLimits {
    pub lattice: LatticeBasis,
    pub cbar: KVec,
    pub v: Subspace,
    pub vclosed: Subspace,
    pub body: Piece,
}

impl TranslatedBodyLimits {
    /// A bounded body has only `{0}` among its asymptotic subspaces, whose
    /// closure is never the whole space.
    pub fn classification(&self) -> Convergence {
        if self.lattice.dim() == 0 {
            Convergence::ConvergesStronglyToFull
        } else {
            Convergence::NotFull
        }
    }
}

pub fn translated_body_limits(a: &PolyVec, body: &Piece, lattice: &LatticeBasis) -> Result<TranslatedBodyLimits, LimitsError> {
    check_dim(lattice.dim(), a.ambient_dim())?;
    for v in body.points() {
        check_dim(lattice.dim(), v.len())?;
    }
    let (cbar, v) = nearest_coset(a);
    let vclosed = rational_closure(&v, lattice)?;
    Ok(TranslatedBodyLimits {
        lattice: lattice.clone(),
        cbar,
        v,
        vclosed,
        body: body.clone(),
    })
}

/// `dπ_ab ∘ M_t`.
pub fn abelianize_dilation(dil: &DilationFamily, spec: &UnipotentGroupSpec) -> Result<DilationFamily, LimitsError> {
    check_dim(spec.dim(), dil.m())?;
    dil.post_compose(&spec.abelianization().projection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{NumberField, Rational};

    fn f() -> FieldRef {
        NumberField::sqrt(2).unwrap()
    }

    fn ints(k: &FieldRef, xs: &[i64]) -> KVec {
        xs.iter().map(|&x| Scalar::from_int(k, x)).collect()
    }

    fn span(k: &FieldRef, m: usize, vs: &[KVec]) -> Subspace {
        Subspace::span(k, m, vs).unwrap()
    }

    fn identity_dilation(k: &FieldRef, m: usize) -> DilationFamily {
        DilationFamily::new(k, vec![qlinalg::identity(k, m)]).unwrap()
    }

    #[test]
    fn single_point_at_origin() {
        let k = f();
        let dil = DilationFamily::new(&k, vec![vec![ints(&k, &[3]), ints(&k, &[1])]]).unwrap();
        let x = InputSet::new(vec![Piece::Points(vec![ints(&k, &[0])])]).unwrap();
        let nf = normal_form(&dil, &x).unwrap();
        assert_eq!(nf.len(), 1);
        assert!(nf.cosets[0].p.is_proper() && nf.cosets[0].p.degree() == 0);
        assert!(nf.cosets[0].l.is_zero());
    }

    #[test]
    fn parabola_segment_spans_plane() {
        let k = f();
        let dil = DilationFamily::new(
            &k,
            vec![vec![ints(&k, &[1]), ints(&k, &[0])], vec![ints(&k, &[0]), ints(&k, &[1])]],
        )
        .unwrap();
        let x = InputSet::new(vec![Piece::Polytope(vec![ints(&k, &[0]), ints(&k, &[1])])]).unwrap();
        let nf = normal_form(&dil, &x).unwrap();
        assert_eq!(nf.len(), 1);
        assert!(nf.cosets[0].l.is_full());
        assert!(is_zero_vec(&nf.cosets[0].p.eval(&Scalar::from_int(&k, 7))));
    }

    #[test]
    fn vertical_segment_translates() {
        let k = f();
        let x = InputSet::new(vec![Piece::Polytope(vec![ints(&k, &[1, 0]), ints(&k, &[1, 1])])]).unwrap();
        let nf = normal_form(&identity_dilation(&k, 2), &x).unwrap();
        assert_eq!(nf.cosets[0].l, span(&k, 2, &[ints(&k, &[0, 1])]));
        assert_eq!(nf.cosets[0].p.coeffs(), &[ints(&k, &[0, 0]), ints(&k, &[1, 0])]);
        let lf = limit_family(&nf, &LatticeBasis::integer(&k, 2)).unwrap();
        assert_eq!(lf.closures, vec![span(&k, 2, &[ints(&k, &[0, 1])])]);
        assert_eq!(lf.vclosed, span(&k, 2, &[ints(&k, &[1, 0])]));
    }

    #[test]
    fn compress_examples() {
        let k = f();
        let e1 = ints(&k, &[1, 0]);
        let z = ints(&k, &[0, 0]);
        let c = MultiCoset::new(PolyVec::new(vec![z.clone(), e1.clone()]), Subspace::zero(&k, 2));
        let dup = MultiCosetFamily { cosets: vec![c.clone(), c.clone()] };
        assert_eq!(compress(&dup).len(), 1);

        let line = MultiCoset::new(PolyVec::zero(&k, 2), span(&k, 2, &[e1.clone()]));
        let mixed = MultiCosetFamily { cosets: vec![c, line.clone()] };
        assert_eq!(compress(&mixed).cosets, vec![line.clone()]);

        let other = MultiCoset::new(PolyVec::zero(&k, 2), span(&k, 2, &[ints(&k, &[0, 1])]));
        let inc = MultiCosetFamily { cosets: vec![line, other] };
        assert_eq!(compress(&inc), inc);
    }

    #[test]
    fn slmax_examples() {
        let k = f();
        let fam = |ls: Vec<Subspace>| MultiCosetFamily {
            cosets: ls.into_iter().map(|l| MultiCoset::new(PolyVec::zero(&k, 2), l)).collect(),
        };
        let e1 = span(&k, 2, &[ints(&k, &[1, 0])]);
        let e2 = span(&k, 2, &[ints(&k, &[0, 1])]);
        let zero = Subspace::zero(&k, 2);
        let full = Subspace::full(&k, 2);
        assert_eq!(slmax(&fam(vec![zero.clone(), e1.clone()])), vec![e1.clone()]);
        assert_eq!(slmax(&fam(vec![e1.clone(), e2.clone()])), vec![e1.clone(), e2]);
        assert_eq!(slmax(&fam(vec![full.clone(), e1, zero])), vec![full]);
    }

    #[test]
    fn curve_coset_examples() {
        let k = f();
        let zero_fam = MultiCosetFamily {
            cosets: vec![MultiCoset::new(PolyVec::zero(&k, 2), Subspace::zero(&k, 2))],
        };
        let (cbar, v) = curve_coset(&zero_fam);
        assert!(is_zero_vec(&cbar) && v.is_zero());

        let single = MultiCosetFamily {
            cosets: vec![MultiCoset::new(
                PolyVec::new(vec![ints(&k, &[0, 0]), ints(&k, &[0, 1])]),
                Subspace::zero(&k, 2),
            )],
        };
        assert_eq!(curve_coset(&single).1, span(&k, 2, &[ints(&k, &[0, 1])]));

        let two = MultiCosetFamily {
            cosets: vec![
                MultiCoset::new(PolyVec::new(vec![ints(&k, &[0, 0]), ints(&k, &[1, 0])]), Subspace::zero(&k, 2)),
                MultiCoset::new(
                    PolyVec::new(vec![ints(&k, &[0, 0]), ints(&k, &[0, 0]), ints(&k, &[0, 1])]),
                    Subspace::zero(&k, 2),
                ),
            ],
        };
        let expected = span(&k, 4, &[ints(&k, &[1, 0, 0, 0]), ints(&k, &[0, 0, 0, 1])]);
        assert_eq!(curve_coset(&two).1, expected);
    }

    #[test]
    fn horizontal_translates_limit_family() {
        // Segment (0,1)–(1,1) under t·I: p(t) = (0, t), L = span{e1}.
        let k = f();
        let x = InputSet::new(vec![Piece::Polytope(vec![ints(&k, &[0, 1]), ints(&k, &[1, 1])])]).unwrap();
        let nf = normal_form(&identity_dilation(&k, 2), &x).unwrap();
        let z2 = LatticeBasis::integer(&k, 2);
        let lf = limit_family(&nf, &z2).unwrap();
        assert_eq!(lf.closures, vec![span(&k, 2, &[ints(&k, &[1, 0])])]);
        assert_eq!(lf.vclosed, span(&k, 2, &[ints(&k, &[0, 1])]));
        assert_eq!(classify_convergence(&nf, &z2).unwrap(), Convergence::NotFull);
    }

    #[test]
    fn classification_examples() {
        let k = f();
        let z2 = LatticeBasis::integer(&k, 2);
        let irr = vec![Scalar::one(&k), Scalar::theta(&k)];
        let fam = |l: Subspace| MultiCosetFamily { cosets: vec![MultiCoset::new(PolyVec::zero(&k, 2), l)] };
        assert_eq!(
            classify_convergence(&fam(span(&k, 2, &[irr])), &z2).unwrap(),
            Convergence::ConvergesStronglyToFull
        );
        assert_eq!(
            classify_convergence(&fam(span(&k, 2, &[ints(&k, &[1, 2])])), &z2).unwrap(),
            Convergence::NotFull
        );
        assert_eq!(
            classify_convergence(&fam(Subspace::full(&k, 2)), &z2).unwrap(),
            Convergence::ConvergesStronglyToFull
        );
    }

    #[test]
    fn nonconvergence_contract() {
        assert!(nonconvergence_index(Convergence::ConvergesStronglyToFull, 4, |_| true).is_err());
        assert_eq!(nonconvergence_index(Convergence::NotFull, 4, |n| n >= 3).unwrap(), Some(3));
        assert_eq!(nonconvergence_index(Convergence::NotFull, 2, |n| n >= 3).unwrap(), None);
    }

    #[test]
    fn translated_interval() {
        let k = NumberField::rationals();
        let a = PolyVec::new(vec![ints(&k, &[0]), ints(&k, &[1])]);
        let body = Piece::Polytope(vec![ints(&k, &[0]), ints(&k, &[2])]);
        let z = LatticeBasis::integer(&k, 1);
        let lim = translated_body_limits(&a, &body, &z).unwrap();
        assert!(lim.vclosed.is_full());
        assert_eq!(lim.classification(), Convergence::NotFull);
        let lim3 = translated_body_limits(&a, &body, &z.scaled(3)).unwrap();
        assert!(lim3.vclosed.is_full());
        let still = translated_body_limits(&PolyVec::zero(&k, 1), &body, &z).unwrap();
        assert!(still.vclosed.is_zero());
    }

    #[test]
    fn abelianized_heisenberg_orbit() {
        let k = f();
        let heis = UnipotentGroupSpec::builtin(&k, "heisenberg3").unwrap();
        let v = vec![vec![Scalar::one(&k)], vec![Scalar::theta(&k)], vec![Scalar::zero(&k)]];
        let dil = DilationFamily::new(&k, vec![v]).unwrap();
        let ab = abelianize_dilation(&dil, &heis).unwrap();
        assert_eq!(ab.matrix(1), &[vec![Scalar::one(&k)], vec![Scalar::theta(&k)]]);

        let central = DilationFamily::new(&k, vec![vec![ints(&k, &[0]), ints(&k, &[0]), ints(&k, &[5])]]).unwrap();
        let ab = abelianize_dilation(&central, &heis).unwrap();
        assert!(ab.matrix(1).iter().all(|r| is_zero_vec(r)));

        let abel = UnipotentGroupSpec::builtin(&k, "abelian:2").unwrap();
        let d2 = DilationFamily::new(&k, vec![vec![ints(&k, &[1, 2]), ints(&k, &[3, 4])]]).unwrap();
        assert_eq!(abelianize_dilation(&d2, &abel).unwrap(), d2);
    }

    #[test]
    fn rejects_bad_input() {
        let k = f();
        assert!(matches!(InputSet::new(vec![]), Err(LimitsError::EmptyInput)));
        let dup = InputSet::new(vec![Piece::Polytope(vec![ints(&k, &[1]), ints(&k, &[1])])]);
        assert!(matches!(dup, Err(LimitsError::RepeatedVertex(1))));
    }

    #[test]
    fn containment_at_rational_times() {
        let k = f();
        let dil = DilationFamily::new(
            &k,
            vec![
                vec![vec![Scalar::one(&k), Scalar::theta(&k)], ints(&k, &[0, 1])],
                vec![ints(&k, &[2, 0]), ints(&k, &[1, -1])],
            ],
        )
        .unwrap();
        let tri = Piece::Polytope(vec![ints(&k, &[0, 0]), ints(&k, &[1, 0]), ints(&k, &[0, 1])]);
        let pts = Piece::Points(vec![ints(&k, &[3, -1]), ints(&k, &[2, 2])]);
        let x = InputSet::new(vec![tri.clone(), pts.clone()]).unwrap();
        let nf = normal_form(&dil, &x).unwrap();
        for (p, q) in [(1, 1), (7, 3), (-5, 2), (101, 7)] {
            let t = Scalar::from_rational(&k, Rational::new(p.into(), q.into()));
            for v in tri.points().iter().chain(pts.points()) {
                assert!(nf.contains_at(&t, &dil.eval(&t, v)).unwrap());
            }
        }
    }
}
