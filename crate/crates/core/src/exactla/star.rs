use num_traits::Zero;

use super::matrix::{RMatrix, Rational};
use crate::error::{Error, Result};

/// The block product `Γ ∗ Ω`: an `mk x nl` matrix whose `(s, t)` block is `ω_st · Γ`.
///
/// This is the Kronecker product `Ω ⊗ Γ`.
pub fn star(gamma: &RMatrix, omega: &RMatrix) -> RMatrix {
    let (m, n) = gamma.shape();
    let (k, l) = omega.shape();
    let mut out = RMatrix::zeros(m * k, n * l);
    for s in 0..k {
        for t in 0..l {
            let w = &omega[(s, t)];
            if w.is_zero() {
                continue;
            }
            for i in 0..m {
                for j in 0..n {
                    let g = &gamma[(i, j)];
                    if !g.is_zero() {
                        out[(s * m + i, t * n + j)] = w * g;
                    }
                }
            }
        }
    }
    out
}

/// `Σ coeffs[i] · mats[i]` over matrices of one shape.
pub fn linear_combination(mats: &[RMatrix], coeffs: &[Rational]) -> Result<RMatrix> {
    if mats.len() != coeffs.len() {
        return Err(Error::dim(format!(
            "{} matrices but {} coefficients",
            mats.len(),
            coeffs.len()
        )));
    }
    let Some(first) = mats.first() else {
        return Err(Error::dim("empty linear combination"));
    };
    let shape = first.shape();
    let mut out = RMatrix::zeros(shape.0, shape.1);
    for (m, c) in mats.iter().zip(coeffs) {
        if m.shape() != shape {
            return Err(Error::dim(format!(
                "pencil matrices of shapes {:?} and {:?}",
                shape,
                m.shape()
            )));
        }
        if c.is_zero() {
            continue;
        }
        out = out.checked_add(&m.scale(c))?;
    }
    Ok(out)
}

/// Evaluates the pencil `x·M₁ + y·M₂ + z·M₃` at a point.
pub fn eval_pencil(triple: &[RMatrix], point: &[Rational; 3]) -> Result<RMatrix> {
    if triple.len() != 3 {
        return Err(Error::dim(format!("pencil needs 3 matrices, got {}", triple.len())));
    }
    linear_combination(triple, point)
}
