//! Unipotent matrix groups over `K`: group law, `exp`/`log`, the commutator
//! subalgebra, abelianization and lattice projection.
//!
//! Algebra elements are handled in coordinates with respect to the basis of a
//! [`UnipotentGroupSpec`]; group elements are unipotent upper-triangular
//! matrices.

use std::fmt;

use thiserror::Error;

use crate::qlinalg::{
    self, hnf, identity, is_zero_vec, rref_in_place, KVec, LatticeBasis, LinalgError, Subspace,
};
use crate::scalar::{FieldRef, Rational, Scalar, ScalarError};

/// Square matrix, row-major.
pub type KMatrix = Vec<KVec>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix is not strictly upper triangular")]
    NotNilpotent,
    #[error("matrix is not unipotent upper triangular")]
    NotUnipotent,
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("algebra basis matrices are linearly dependent")]
    DependentBasis,
    #[error("algebra basis is not closed under brackets")]
    NotClosed,
    #[error("element does not lie in the group's Lie algebra")]
    NotInAlgebra,
    #[error("unknown group spec {0:?}")]
    UnknownSpec(String),
    #[error("projected lattice generator is not rational")]
    UnsupportedLattice,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn zero_matrix(field: &FieldRef, n: usize) -> KMatrix {
    vec![vec![Scalar::zero(field); n]; n]
}

fn mat_add(a: &KMatrix, b: &KMatrix) -> KMatrix {
    a.iter().zip(b).map(|(x, y)| qlinalg::vec_add(x, y)).collect()
}

fn mat_sub(a: &KMatrix, b: &KMatrix) -> KMatrix {
    a.iter().zip(b).map(|(x, y)| qlinalg::vec_sub(x, y)).collect()
}

fn mat_scale(a: &KMatrix, s: &Scalar) -> KMatrix {
    a.iter().map(|r| qlinalg::vec_scale(r, s)).collect()
}

fn is_zero_matrix(a: &KMatrix) -> bool {
    a.iter().all(|r| is_zero_vec(r))
}

fn is_strictly_upper(a: &KMatrix) -> bool {
    a.iter().enumerate().all(|(i, r)| r.iter().take(i + 1).all(Scalar::is_zero))
}

fn check_square(a: &KMatrix) -> Result<usize, GroupError> {
    let n = a.len();
    match a.iter().find(|r| r.len() != n) {
        Some(r) => Err(GroupError::SizeMismatch(n, r.len())),
        None => Ok(n),
    }
}

/// `[A, B] = AB − BA`.
pub fn bracket(a: &KMatrix, b: &KMatrix) -> KMatrix {
    mat_sub(&qlinalg::mat_mul(a, b), &qlinalg::mat_mul(b, a))
}

/// `exp(A) = Σ_{k<n} A^k / k!` for strictly upper-triangular `A`.
pub fn exp(a: &KMatrix) -> Result<GroupElement, GroupError> {
    let n = check_square(a)?;
    if n == 0 {
        return Err(GroupError::SizeMismatch(0, 0));
    }
    if !is_strictly_upper(a) {
        return Err(GroupError::NotNilpotent);
    }
    let field = a[0][0].field().clone();
    let mut out = identity(&field, n);
    let mut power = identity(&field, n);
    for k in 1..n {
        power = qlinalg::mat_mul(&power, a);
        if is_zero_matrix(&power) {
            break;
        }
        let c = Scalar::from_rational(&field, Rational::new(1.into(), factorial(k)));
        out = mat_add(&out, &mat_scale(&power, &c));
    }
    Ok(GroupElement { matrix: out })
}

fn factorial(k: usize) -> num_bigint::BigInt {
    (1..=k).map(num_bigint::BigInt::from).product()
}

/// `log(g) = Σ_{k<n} (−1)^{k+1} (g − I)^k / k`.
pub fn log(g: &GroupElement) -> KMatrix {
    let n = g.size();
    let field = g.field().clone();
    let nil = mat_sub(&g.matrix, &identity(&field, n));
    let mut out = zero_matrix(&field, n);
    let mut power = identity(&field, n);
    for k in 1..n {
        power = qlinalg::mat_mul(&power, &nil);
        if is_zero_matrix(&power) {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let c = Scalar::from_rational(&field, Rational::new(sign.into(), (k as i64).into()));
        out = mat_add(&out, &mat_scale(&power, &c));
    }
    out
}

/// A unipotent upper-triangular matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupElement {
    matrix: KMatrix,
}

impl GroupElement {
    pub fn new(matrix: KMatrix) -> Result<GroupElement, GroupError> {
        let n = check_square(&matrix)?;
        if n == 0 {
            return Err(GroupError::SizeMismatch(0, 0));
        }
        let unipotent = matrix.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, x)| match j.cmp(&i) {
                std::cmp::Ordering::Less => x.is_zero(),
                std::cmp::Ordering::Equal => x.is_one(),
                std::cmp::Ordering::Greater => true,
            })
        });
        if !unipotent {
            return Err(GroupError::NotUnipotent);
        }
        Ok(GroupElement { matrix })
    }

    pub fn identity(field: &FieldRef, n: usize) -> GroupElement {
        GroupElement { matrix: identity(field, n) }
    }

    pub fn matrix(&self) -> &KMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn field(&self) -> &FieldRef {
        self.matrix[0][0].field()
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        if self.size() != other.size() {
            return Err(GroupError::SizeMismatch(self.size(), other.size()));
        }
        if !self.field().same_as(other.field()) {
            return Err(ScalarError::DomainMismatch.into());
        }
        Ok(GroupElement { matrix: qlinalg::mat_mul(&self.matrix, &other.matrix) })
    }

    /// `(I + N)⁻¹ = Σ_{k<n} (−N)^k`.
    pub fn inv(&self) -> GroupElement {
        let n = self.size();
        let field = self.field().clone();
        let minus_nil = mat_sub(&identity(&field, n), &self.matrix);
        let mut out = identity(&field, n);
        let mut power = identity(&field, n);
        for _ in 1..n {
            power = qlinalg::mat_mul(&power, &minus_nil);
            if is_zero_matrix(&power) {
                break;
            }
            out = mat_add(&out, &power);
        }
        GroupElement { matrix: out }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == identity(self.field(), self.size())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}

/// Heisenberg element `[a, b, c]`, the matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]`.
pub fn heisenberg(a: &Scalar, b: &Scalar, c: &Scalar) -> GroupElement {
    let field = a.field();
    let (o, z) = (Scalar::one(field), Scalar::zero(field));
    GroupElement {
        matrix: vec![
            vec![o.clone(), a.clone(), c.clone()],
            vec![z.clone(), o.clone(), b.clone()],
            vec![z.clone(), z, o],
        ],
    }
}

/// Inverse of [`heisenberg`] on 3×3 unipotent matrices.
pub fn heisenberg_coords(g: &GroupElement) -> Option<[Scalar; 3]> {
    (g.size() == 3).then(|| {
        let m = g.matrix();
        [m[0][1].clone(), m[1][2].clone(), m[0][2].clone()]
    })
}

/// A unipotent group given by a basis of its Lie algebra of strictly
/// upper-triangular `n×n` matrices.
#[derive(Clone)]
pub struct UnipotentGroupSpec {
    field: FieldRef,
    n: usize,
    basis: Vec<KMatrix>,
    name: Option<String>,
    // Gauss-Jordan data: reduced flattened basis and the transform T with
    // reduced = T · flattened.
    reduced: Vec<KVec>,
    pivots: Vec<usize>,
    transform: Vec<KVec>,
}

fn elementary(field: &FieldRef, n: usize, i: usize, j: usize) -> KMatrix {
    let mut m = zero_matrix(field, n);
    m[i][j] = Scalar::one(field);
    m
}

impl UnipotentGroupSpec {
    pub fn from_basis(
        field: &FieldRef,
        n: usize,
        basis: Vec<KMatrix>,
        name: Option<String>,
    ) -> Result<UnipotentGroupSpec, GroupError> {
        for b in &basis {
            let size = check_square(b)?;
            if size != n {
                return Err(GroupError::SizeMismatch(n, size));
            }
            if !is_strictly_upper(b) {
                return Err(GroupError::NotNilpotent);
            }
        }
        let dim = basis.len();
        let mut aug: Vec<KVec> = basis
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let mut row = flatten(b);
                row.extend(qlinalg::unit_vec(field, dim, k));
                row
            })
            .collect();
        let width = n * n;
        let all_pivots = rref_in_place(&mut aug);
        if all_pivots.len() < dim || all_pivots.iter().any(|&p| p >= width) {
            return Err(GroupError::DependentBasis);
        }
        let reduced = aug.iter().map(|r| r[..width].to_vec()).collect();
        let transform = aug.iter().map(|r| r[width..].to_vec()).collect();
        let spec = UnipotentGroupSpec {
            field: field.clone(),
            n,
            basis,
            name,
            reduced,
            pivots: all_pivots,
            transform,
        };
        for a in &spec.basis {
            for b in &spec.basis {
                if spec.algebra_coords(&bracket(a, b)).is_err() {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        Ok(spec)
    }

    /// Builtin specs: `abelian:m`, `heisenberg3`, `full_un:n`.
    pub fn builtin(field: &FieldRef, name: &str) -> Result<UnipotentGroupSpec, GroupError> {
        let unknown = || GroupError::UnknownSpec(name.to_string());
        if name == "heisenberg3" {
            let basis = vec![
                elementary(field, 3, 0, 1),
                elementary(field, 3, 1, 2),
                elementary(field, 3, 0, 2),
            ];
            return UnipotentGroupSpec::from_basis(field, 3, basis, Some(name.into()));
        }
        if let Some(m) = name.strip_prefix("abelian:") {
            let m: usize = m.parse().map_err(|_| unknown())?;
            if m == 0 {
                return Err(unknown());
            }
            let basis = (0..m).map(|i| elementary(field, m + 1, i, m)).collect();
            return UnipotentGroupSpec::from_basis(field, m + 1, basis, Some(name.into()));
        }
        if let Some(n) = name.strip_prefix("full_un:") {
            let n: usize = n.parse().map_err(|_| unknown())?;
            if n < 2 {
                return Err(unknown());
            }
            // Ordered by superdiagonal, so full_un:3 matches heisenberg3.
            let mut basis = Vec::new();
            for d in 1..n {
                for i in 0..n - d {
                    basis.push(elementary(field, n, i, i + d));
                }
            }
            return UnipotentGroupSpec::from_basis(field, n, basis, Some(name.into()));
        }
        Err(unknown())
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[KMatrix] {
        &self.basis
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn is_heisenberg(&self) -> bool {
        if self.n != 3 || self.dim() != 3 {
            return false;
        }
        let f = &self.field;
        self.basis == [elementary(f, 3, 0, 1), elementary(f, 3, 1, 2), elementary(f, 3, 0, 2)]
    }

    /// `Σ x_i · basis_i`.
    pub fn algebra_matrix(&self, coords: &[Scalar]) -> Result<KMatrix, GroupError> {
        if coords.len() != self.dim() {
            return Err(LinalgError::DimensionMismatch { expected: self.dim(), got: coords.len() }.into());
        }
        let mut out = zero_matrix(&self.field, self.n);
        for (x, b) in coords.iter().zip(&self.basis) {
            if !x.is_zero() {
                out = mat_add(&out, &mat_scale(b, x));
            }
        }
        Ok(out)
    }

    /// Coordinates of an algebra element in the group's basis.
    pub fn algebra_coords(&self, a: &KMatrix) -> Result<KVec, GroupError> {
        if check_square(a)? != self.n {
            return Err(GroupError::SizeMismatch(self.n, a.len()));
        }
        let flat = flatten(a);
        // flat = y · reduced = y · T · basis, with y read off the pivots.
        let y: KVec = self.pivots.iter().map(|&p| flat[p].clone()).collect();
        let mut back = qlinalg::zero_vec(&self.field, flat.len());
        for (c, r) in y.iter().zip(&self.reduced) {
            if !c.is_zero() {
                back = qlinalg::vec_add(&back, &qlinalg::vec_scale(r, c));
            }
        }
        if back != flat {
            return Err(GroupError::NotInAlgebra);
        }
        let mut x = qlinalg::zero_vec(&self.field, self.dim());
        for (c, t) in y.iter().zip(&self.transform) {
            if !c.is_zero() {
                x = qlinalg::vec_add(&x, &qlinalg::vec_scale(t, c));
            }
        }
        Ok(x)
    }

    /// `exp(Σ x_i basis_i)`.
    pub fn exp_coords(&self, coords: &[Scalar]) -> Result<GroupElement, GroupError> {
        exp(&self.algebra_matrix(coords)?)
    }

    /// Coordinates of `log g`; fails if `g` is not in the group.
    pub fn log_coords(&self, g: &GroupElement) -> Result<KVec, GroupError> {
        self.algebra_coords(&log(g))
    }

    /// `[𝔤, 𝔤]` in algebra coordinates.
    pub fn commutator_subalgebra(&self) -> Subspace {
        let mut vectors = Vec::new();
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                vectors.push(self.algebra_coords(&bracket(a, b)).expect("closed under brackets"));
            }
        }
        Subspace::span(&self.field, self.dim(), &vectors).expect("consistent dimensions")
    }

    pub fn abelianization(&self) -> Abelianization {
        let commutator = self.commutator_subalgebra();
        let free: Vec<usize> = (0..self.dim()).filter(|c| !commutator.pivots().contains(c)).collect();
        // reduce(v)[c] = v[c] − Σ_k v[p_k] · R_k[c]
        let projection = free
            .iter()
            .map(|&c| {
                let mut row = qlinalg::unit_vec(&self.field, self.dim(), c);
                for (r, &p) in commutator.basis().iter().zip(commutator.pivots()) {
                    row[p] = -&r[c];
                }
                row
            })
            .collect();
        Abelianization { commutator, free, projection }
    }
}

fn flatten(a: &KMatrix) -> KVec {
    a.iter().flatten().cloned().collect()
}

impl fmt::Debug for UnipotentGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(name) => write!(f, "{name}"),
            None => write!(f, "unipotent(n={}, dim={})", self.n, self.dim()),
        }
    }
}

/// The quotient map `𝔤 → 𝔤/[𝔤,𝔤] ≅ K^{m_ab}` in coordinates: a vector is
/// reduced modulo the echelon basis of `[𝔤,𝔤]` and its free columns kept.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub commutator: Subspace,
    /// Algebra coordinates kept by the projection.
    pub free: Vec<usize>,
    /// `dπ_ab` as an `m_ab × dim` matrix, row-major.
    pub projection: Vec<KVec>,
}

impl Abelianization {
    pub fn m_ab(&self) -> usize {
        self.free.len()
    }

    pub fn project(&self, v: &[Scalar]) -> KVec {
        qlinalg::mat_vec(&self.projection, v)
    }
}

/// Generators of a lattice `Γ ⊆ G`. Discreteness and cocompactness are the
/// caller's responsibility.
#[derive(Clone, Debug)]
pub struct GroupLattice {
    generators: Vec<GroupElement>,
}

impl GroupLattice {
    pub fn new(spec: &UnipotentGroupSpec, generators: Vec<GroupElement>) -> Result<GroupLattice, GroupError> {
        for g in &generators {
            if g.size() != spec.n() {
                return Err(GroupError::SizeMismatch(spec.n(), g.size()));
            }
            spec.log_coords(g)?;
        }
        Ok(GroupLattice { generators })
    }

    /// `exp` of the integer points of the algebra coordinates for abelian
    /// specs, and the coordinate generators `[1,0,0]`, `[0,1,0]`, `[0,0,1]`
    /// for the Heisenberg group.
    pub fn integer(spec: &UnipotentGroupSpec) -> Result<GroupLattice, GroupError> {
        let field = spec.field();
        let generators = if spec.is_heisenberg() {
            let (o, z) = (Scalar::one(field), Scalar::zero(field));
            vec![
                heisenberg(&o, &z, &z),
                heisenberg(&z, &o, &z),
                heisenberg(&z, &z, &o),
            ]
        } else {
            (0..spec.dim())
                .map(|i| spec.exp_coords(&qlinalg::unit_vec(field, spec.dim(), i)))
                .collect::<Result<_, _>>()?
        };
        GroupLattice::new(spec, generators)
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }
}

/// `Γ_ab = π_ab(Γ)`, generated by `dπ_ab(log γ)` for the generators `γ`.
pub fn project_lattice(lattice: &GroupLattice, spec: &UnipotentGroupSpec) -> Result<LatticeBasis, GroupError> {
    let ab = spec.abelianization();
    let mut gens = Vec::new();
    for g in lattice.generators() {
        let v = ab.project(&spec.log_coords(g)?);
        let q: Vec<Rational> = v
            .iter()
            .map(Scalar::as_rational)
            .collect::<Option<_>>()
            .ok_or(GroupError::UnsupportedLattice)?;
        gens.push(q);
    }
    Ok(hnf(spec.field(), &gens)?)
}
