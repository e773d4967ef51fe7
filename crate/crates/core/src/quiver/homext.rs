use super::{euler_form, Rep};
use crate::error::{Error, Result};
use crate::exactla::{det, rank, star, RMatrix, Rational};

/// The map `d^V_W : ⊕ₓ Hom(V(x), W(x)) → ⊕ₐ Hom(V(ta), W(ha))`, `{f} ↦ {f(ha)V(a) − W(a)f(ta)}`.
///
/// Coordinates are column-major vectorisations; the domain lists `f(x₁)` before `f(x₂)` and the
/// codomain lists arrows in order.
pub fn d_matrix(v: &Rep, w: &Rep) -> Result<RMatrix> {
    if v.q() != w.q() {
        return Err(Error::contract(format!(
            "reps of different quivers Q({}) and Q({})",
            v.q(),
            w.q()
        )));
    }
    let (a1, a2) = (v.dim().a1, v.dim().a2);
    let (b1, b2) = (w.dim().a1, w.dim().a2);
    let n1 = b1 * a1;
    let n2 = b2 * a2;
    let block_rows = b2 * a1;
    let mut d = RMatrix::zeros(v.q() * block_rows, n1 + n2);
    for (i, (va, wa)) in v.mats().iter().zip(w.mats()).enumerate() {
        let r0 = i * block_rows;
        d.set_block(r0, 0, &star(wa, &RMatrix::identity(a1)).neg());
        d.set_block(r0, n1, &star(&RMatrix::identity(b2), &va.transpose()));
    }
    Ok(d)
}

/// `(dim Hom_Q(V,W), dim Ext_Q(V,W))` as kernel and cokernel dimensions of `d^V_W`.
pub fn hom_ext(v: &Rep, w: &Rep) -> Result<(usize, usize)> {
    let d = d_matrix(v, w)?;
    let rk = rank(&d);
    Ok((d.cols() - rk, d.rows() - rk))
}

/// The semi-invariant pairing `c(V, W) = det d^V_W`, defined when `⟨dim V, dim W⟩ = 0`.
pub fn c_pair(v: &Rep, w: &Rep) -> Result<Rational> {
    let e = euler_form(v.q(), v.dim(), w.dim());
    if e != 0 {
        return Err(Error::contract(format!(
            "c(V,W) needs orthogonal dimension vectors, but <{}, {}> = {e}",
            v.dim(),
            w.dim()
        )));
    }
    det(&d_matrix(v, w)?)
}
