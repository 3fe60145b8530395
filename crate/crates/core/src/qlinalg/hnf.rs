//! Hermite normal form of rational generator lists.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LatticeBasis, LinalgError};
use crate::scalar::{FieldRef, Rational, Scalar};

/// Canonical basis of the subgroup of `Q^m` generated by `generators`.
///
/// Denominators are cleared with their common multiple `q`, the integer
/// matrix is brought to Hermite form and divided back by `q`. Basis vector
/// `i` has its first nonzero entry at index `i`, that entry is positive, and
/// every later basis vector's entry at index `i` lies in `[0, pivot)`. Read as
/// the columns of a matrix, this is the lower-triangular column Hermite form,
/// so the output depends only on the generated group.
pub fn hnf_rational(generators: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, LinalgError> {
    let m = generators.first().map(Vec::len).ok_or(LinalgError::NoGenerators)?;
    if m == 0 {
        return Err(LinalgError::NoGenerators);
    }
    for g in generators {
        if g.len() != m {
            return Err(LinalgError::DimensionMismatch { expected: m, got: g.len() });
        }
    }
    let q = generators
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut rows: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|g| g.iter().map(|x| (x * Rational::from_integer(q.clone())).to_integer()).collect())
        .collect();

    let mut r = 0;
    for c in 0..m {
        // Euclid on column c among rows r.. until a single nonzero entry remains.
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let f = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r >= rows.len() || rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let f = row[c].div_floor(&pivot_row[c]);
            if !f.is_zero() {
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    if r < m {
        return Err(LinalgError::DegenerateLattice { rank: r, dim: m });
    }
    let qr = Rational::from_integer(q);
    Ok(rows
        .into_iter()
        .take(m)
        .map(|row| row.into_iter().map(|x| Rational::from_integer(x) / &qr).collect())
        .collect())
}

/// [`hnf_rational`] packaged as a lattice over `field`.
pub fn hnf(field: &FieldRef, generators: &[Vec<Rational>]) -> Result<LatticeBasis, LinalgError> {
    let basis = hnf_rational(generators)?;
    let vectors = basis
        .into_iter()
        .map(|v| v.into_iter().map(|x| Scalar::from_rational(field, x)).collect())
        .collect();
    LatticeBasis::new(field, vectors)
}
