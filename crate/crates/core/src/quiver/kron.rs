use num_traits::Signed;

use super::{reflect_inverse, DimVec, Rep};
use crate::error::{Error, Result};
use crate::exactla::{det, star, RMatrix, Rational};

fn check_shapes(v: &Rep, w: &Rep) -> Result<(usize, usize)> {
    if v.q() != 3 || w.q() != 3 {
        return Err(Error::contract("C(V,W) is defined on the three-arrow quiver"));
    }
    let r = v.dim().a1;
    let d = w.dim().a1;
    if v.dim() != DimVec::new(r, 2 * r) {
        return Err(Error::contract(format!("V must have dimension (r,2r), got {}", v.dim())));
    }
    if w.dim() != DimVec::new(d, d) {
        return Err(Error::contract(format!("W must have dimension (d,d), got {}", w.dim())));
    }
    Ok((r, d))
}

/// The `dr x dr` matrix `C(V,W) = Σᵢ Wᵢᵀ ∗ Aᵢ`, where `A = reflect_inverse(V)`.
///
/// `det C(V,W)` equals `c(V,W)` up to sign once the inverse reflection is normalised as in
/// [`super::reflect_inverse_with_witness`].
pub fn c_matrix(v: &Rep, w: &Rep) -> Result<RMatrix> {
    let (r, d) = check_shapes(v, w)?;
    let a = reflect_inverse(v)?;
    let mut c = RMatrix::zeros(d * r, d * r);
    for (wi, ai) in w.mats().iter().zip(a.mats()) {
        c = c.checked_add(&star(&wi.transpose(), ai))?;
    }
    Ok(c)
}

/// Both determinant forms of the pairing between an `(r,2r)` and a `(d,d)` representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KronPair {
    /// Determinant of the `3rd x 3rd` block matrix `[Bᵢ ∗ I_r, −I_d ∗ Ãᵢᵀ]ᵢ`.
    pub big: Rational,
    /// `det C(V,W)`.
    pub compact: Rational,
}

/// Computes [`KronPair`] and checks `|big| = |compact|` exactly.
pub fn c_pair_kron(v: &Rep, w: &Rep) -> Result<KronPair> {
    let (r, d) = check_shapes(v, w)?;
    let rows = d * r;
    let mut big = RMatrix::zeros(3 * rows, 3 * rows);
    for (i, (ai, bi)) in v.mats().iter().zip(w.mats()).enumerate() {
        big.set_block(i * rows, 0, &star(bi, &RMatrix::identity(r)));
        big.set_block(i * rows, rows, &star(&RMatrix::identity(d), &ai.transpose()).neg());
    }
    let big = det(&big)?;
    let compact = det(&c_matrix(v, w)?)?;
    if big.abs() != compact.abs() {
        return Err(Error::invariant(format!(
            "|big| = {} differs from |compact| = {}",
            big.abs(),
            compact.abs()
        )));
    }
    Ok(KronPair { big, compact })
}
