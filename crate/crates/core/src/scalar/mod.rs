//! Exact arithmetic in a real number field `Q(θ)`.
//!
//! A [`NumberField`] is fixed by a monic squarefree polynomial over the
//! rationals together with a rational interval isolating one real root `θ`.
//! A [`Scalar`] is a polynomial in `θ` of degree below the field degree.
//! Signs are decided exactly: a symbolic zero test first, then bisection of
//! the isolating interval until interval evaluation excludes zero.

mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use poly::QPoly;

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shared handle to a number field.
pub type FieldRef = Arc<NumberField>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("operands belong to different number fields")]
    DomainMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("element shares a factor with the defining polynomial; the polynomial is reducible")]
    ReducibleModulus,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
}

/// Width of the isolating interval kept after construction.
const TIGHT_BITS: u32 = 64;

/// The field `Q(θ)` for one real root `θ` of `minpoly`.
#[derive(Clone)]
pub struct NumberField {
    minpoly: QPoly,
    root_between: (Rational, Rational),
    // refined isolating interval; `sign_lo` is the sign of minpoly at its lower end
    tight: (Rational, Rational),
    sign_lo: Ordering,
}

impl NumberField {
    /// Builds `Q(θ)` where `θ` is the unique root of `minpoly` in `(lo, hi)`.
    ///
    /// `minpoly` lists coefficients in ascending degree and must be monic and
    /// squarefree. For degree at least two it must have no rational root.
    pub fn new(minpoly: Vec<Rational>, lo: Rational, hi: Rational) -> Result<FieldRef, ScalarError> {
        let poly = QPoly::from_coeffs(minpoly);
        let invalid = |s: &str| Err(ScalarError::InvalidField(s.to_string()));
        let Some(degree) = poly.degree() else {
            return invalid("minimal polynomial is zero");
        };
        if degree == 0 {
            return invalid("minimal polynomial must have degree at least 1");
        }
        if !poly.leading().unwrap().is_one() {
            return invalid("minimal polynomial must be monic");
        }
        if poly.gcd(&poly.derivative()).degree() != Some(0) {
            return invalid("minimal polynomial is not squarefree");
        }
        if lo >= hi {
            return invalid("root interval must satisfy lo < hi");
        }
        let (flo, fhi) = (poly.eval(&lo), poly.eval(&hi));
        if flo.is_zero() || fhi.is_zero() {
            return invalid("root interval endpoints must not be roots");
        }
        if flo.signum() == fhi.signum() {
            return invalid("minimal polynomial does not change sign on the root interval");
        }
        if poly.count_roots(&lo, &hi) != 1 {
            return invalid("root interval must contain exactly one root");
        }
        if degree >= 2 {
            match poly.has_rational_root() {
                Some(false) => {}
                Some(true) => {
                    return invalid("minimal polynomial has a rational root, so powers of θ are dependent")
                }
                None => return invalid("coefficients too large for the rational root check"),
            }
        }
        let sign_lo = flo.cmp(&Rational::zero());
        let mut field = NumberField {
            minpoly: poly,
            root_between: (lo.clone(), hi.clone()),
            tight: (lo, hi),
            sign_lo,
        };
        let target = Rational::new(BigInt::one(), BigInt::one() << TIGHT_BITS);
        let mut iv = field.tight.clone();
        while iv.0 != iv.1 && &iv.1 - &iv.0 > target {
            iv = field.bisect(iv);
        }
        field.tight = iv;
        Ok(Arc::new(field))
    }

    /// The rationals, presented as `Q(θ)` with `θ = 0` the root of `x`.
    pub fn rationals() -> FieldRef {
        NumberField::new(
            vec![Rational::zero(), Rational::one()],
            Rational::from_integer((-1).into()),
            Rational::one(),
        )
        .expect("x is a valid minimal polynomial")
    }

    /// `Q(√n)` for a positive non-square integer `n`, with the positive root.
    pub fn sqrt(n: u64) -> Result<FieldRef, ScalarError> {
        let hi = Rational::from_integer(BigInt::from(n) + 1);
        NumberField::new(
            vec![Rational::from_integer(-BigInt::from(n)), Rational::zero(), Rational::one()],
            Rational::zero(),
            hi,
        )
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    /// The isolating interval as declared.
    pub fn root_between(&self) -> &(Rational, Rational) {
        &self.root_between
    }

    /// Whether two handles describe the same field (same polynomial, same root).
    pub fn same_as(&self, other: &NumberField) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        self.minpoly == other.minpoly && self.tight.0 <= other.tight.1 && other.tight.0 <= self.tight.1
    }

    fn bisect(&self, (lo, hi): (Rational, Rational)) -> (Rational, Rational) {
        if lo == hi {
            return (lo, hi);
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        match self.minpoly.eval(&mid).cmp(&Rational::zero()) {
            Ordering::Equal => (mid.clone(), mid),
            s if s == self.sign_lo => (mid, hi),
            _ => (lo, mid),
        }
    }

    /// Enclosure of `θ` of width at most `eps`.
    pub fn theta_interval(&self, eps: &Rational) -> (Rational, Rational) {
        let mut iv = self.tight.clone();
        while iv.0 != iv.1 && &iv.1 - &iv.0 > *eps {
            iv = self.bisect(iv);
        }
        iv
    }

    /// Float approximation of `θ`.
    pub fn theta_f64(&self) -> f64 {
        let eps = Rational::new(BigInt::one(), BigInt::from(10u64).pow(12));
        let (lo, hi) = self.theta_interval(&eps);
        ((lo + hi) / Rational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Q(θ), θ root of {:?} in ({}, {})",
            self.minpoly, self.root_between.0, self.root_between.1
        )
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// An element `Σ coeffs[k]·θ^k` of a [`NumberField`].
///
/// The `std::ops` implementations panic when the operands come from different
/// fields; use the `try_*` methods where mixed input is possible.
#[derive(Clone)]
pub struct Scalar {
    field: FieldRef,
    coeffs: Vec<Rational>,
}

impl Scalar {
    pub fn zero(field: &FieldRef) -> Scalar {
        Scalar {
            field: field.clone(),
            coeffs: vec![Rational::zero(); field.degree()],
        }
    }

    pub fn one(field: &FieldRef) -> Scalar {
        Scalar::from_rational(field, Rational::one())
    }

    /// The generator `θ`. In a degree-one field this is the rational root.
    pub fn theta(field: &FieldRef) -> Scalar {
        let mut s = Scalar::zero(field);
        if field.degree() == 1 {
            s.coeffs[0] = -field.minpoly.coeff(0);
        } else {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    pub fn from_rational(field: &FieldRef, q: Rational) -> Scalar {
        let mut s = Scalar::zero(field);
        s.coeffs[0] = q;
        s
    }

    pub fn from_int(field: &FieldRef, n: i64) -> Scalar {
        Scalar::from_rational(field, Rational::from_integer(n.into()))
    }

    /// Builds an element from its coordinates in the basis `1, θ, …, θ^{d-1}`.
    pub fn from_coeffs(field: &FieldRef, coeffs: Vec<Rational>) -> Result<Scalar, ScalarError> {
        if coeffs.len() != field.degree() {
            return Err(ScalarError::WrongLength {
                expected: field.degree(),
                got: coeffs.len(),
            });
        }
        Ok(Scalar {
            field: field.clone(),
            coeffs,
        })
    }

    /// Reduces an arbitrary polynomial in `θ` into the field.
    pub fn from_poly(field: &FieldRef, p: &QPoly) -> Scalar {
        let r = p.rem(&field.minpoly);
        let mut coeffs = vec![Rational::zero(); field.degree()];
        for (i, c) in r.coeffs().iter().enumerate() {
            coeffs[i] = c.clone();
        }
        Scalar {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// Coordinates in the basis `1, θ, …, θ^{d-1}`.
    pub fn rational_coords(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    fn check(&self, other: &Scalar) -> Result<(), ScalarError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(ScalarError::DomainMismatch)
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        let d = self.field.degree();
        if d == 1 {
            return Ok(Scalar {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        // θ^d = -Σ_{k<d} minpoly_k θ^k
        let mp = self.field.minpoly.coeffs();
        for top in (d..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[top], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for k in 0..d {
                prod[top - d + k] -= &c * &mp[k];
            }
        }
        prod.truncate(d);
        Ok(Scalar {
            field: self.field.clone(),
            coeffs: prod,
        })
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against the
    /// defining polynomial.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.field.degree() == 1 {
            return Ok(Scalar {
                field: self.field.clone(),
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        let (g, s, _) = self.to_poly().ext_gcd(&self.field.minpoly);
        if g.degree() != Some(0) {
            if self.sign() == 0 {
                return Err(ScalarError::DivisionByZero);
            }
            return Err(ScalarError::ReducibleModulus);
        }
        Ok(Scalar::from_poly(&self.field, &s))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Multiplies by a rational.
    pub fn scale(&self, q: &Rational) -> Scalar {
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Evaluates the element on an enclosure of `θ`.
    fn enclose(&self, theta: &(Rational, Rational)) -> (Rational, Rational) {
        self.to_poly().eval_interval(&theta.0, &theta.1)
    }

    /// Exact sign of the real value under the chosen embedding.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if self.field.degree() == 1 || self.is_rational() {
            return sign_of(&self.coeffs[0]);
        }
        let p = self.to_poly();
        let g = p.gcd(&self.field.minpoly);
        if g.degree().unwrap_or(0) >= 1 {
            let (lo, hi) = &self.field.root_between;
            if g.count_roots(lo, hi) > 0 {
                return 0;
            }
        }
        let mut iv = self.field.tight.clone();
        loop {
            let (a, b) = self.enclose(&iv);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            if iv.0 == iv.1 {
                // θ is rational here; the enclosure is exact.
                return sign_of(&a);
            }
            iv = self.field.bisect(iv);
        }
    }

    /// Rational interval of width at most `eps` containing the real value.
    pub fn approx(&self, eps: &Rational) -> (Rational, Rational) {
        if self.is_rational() {
            let q = self.coeffs[0].clone();
            return (q.clone(), q);
        }
        let mut iv = self.field.tight.clone();
        loop {
            let (a, b) = self.enclose(&iv);
            if &b - &a <= *eps || iv.0 == iv.1 {
                return (a, b);
            }
            iv = self.field.bisect(iv);
        }
    }

    /// Float value, certified to 1e-12 before rounding.
    pub fn to_f64(&self) -> f64 {
        if let Some(q) = self.as_rational() {
            return q.to_f64().unwrap_or(f64::NAN);
        }
        let eps = Rational::new(BigInt::one(), BigInt::from(10u64).pow(12));
        let (lo, hi) = self.approx(&eps);
        ((lo + hi) / Rational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }

    /// Parses `"p/q"`, `"p"`, or a bracketed coefficient list like `"[1, -1/2]"`.
    pub fn parse(field: &FieldRef, s: &str) -> Result<Scalar, ScalarError> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .map(|c| parse_rational(c.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            return Scalar::from_coeffs(field, coeffs);
        }
        Ok(Scalar::from_rational(field, parse_rational(t)?))
    }
}

fn sign_of(q: &Rational) -> i32 {
    match q.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Parses `"p/q"` or an integer. Decimal points are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let err = || ScalarError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| err())?)),
    }
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.check(other).is_ok() && self.coeffs == other.coeffs
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let c = format_rational(c);
                match i {
                    0 => c,
                    1 if c == "1" => "θ".to_string(),
                    1 => format!("{c}θ"),
                    _ if c == "1" => format!("θ^{i}"),
                    _ => format!("{c}θ^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).expect("mixed number fields")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$try(&rhs).expect("mixed number fields")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Minimal field interface shared by rationals and [`Scalar`] so that the
/// exact elimination routines can run over either.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Inverse of a nonzero element.
    fn recip_elem(&self) -> Self;
}

impl Coefficient for Rational {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip_elem(&self) -> Self {
        self.recip()
    }
}

impl Coefficient for Scalar {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip_elem(&self) -> Self {
        self.inv().expect("inverse of a nonzero field element")
    }
}
