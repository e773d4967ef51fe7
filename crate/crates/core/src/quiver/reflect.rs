use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{c_pair, random_rep_with, DimVec, Rep};
use crate::error::{Error, Result};
use crate::exactla::{coker_projection, det, inverse, kernel_basis, rank, RMatrix, Rational};

/// A reflected representation together with the invertible matrix realising the relation
/// between input and output.
#[derive(Clone, Debug)]
pub struct Reflection {
    pub rep: Rep,
    pub witness: RMatrix,
}

/// Reflection `(m1, m2) ↦ (m2, q·m2 − m1)` through the cokernel of `f_V = [A₁; …; A_q]`.
pub fn reflect(v: &Rep) -> Result<Rep> {
    Ok(reflect_with_witness(v)?.rep)
}

/// As [`reflect`], also returning `G = [R; P]` with `G·[A₁; …; A_q] = [I; 0]` and
/// `P = [Ã₁, …, Ã_q]` the cokernel projection in reduced row echelon form.
pub fn reflect_with_witness(v: &Rep) -> Result<Reflection> {
    let (m1, m2) = (v.dim().a1, v.dim().a2);
    let q = v.q();
    let s = v.stacked();
    let rk = rank(&s);
    if rk < m1 {
        return Err(Error::NotReflectable(format!(
            "stacked arrow matrix has rank {rk} < {m1}, so f_V is not injective"
        )));
    }
    let p = coker_projection(&s);
    let m_new = q * m2 - m1;
    debug_assert_eq!(p.shape(), (m_new, q * m2));
    let mats = (0..q).map(|i| p.block(0, i * m2, m_new, m2)).collect();
    let rep = Rep::new(q, DimVec::new(m2, m_new), mats)?;

    let st = s.transpose();
    let left_inv = &inverse(&(&st * &s))? * &st;
    let witness = RMatrix::vstack(q * m2, &[&left_inv, &p])?;
    Ok(Reflection { rep, witness })
}

/// Inverse reflection `(m2, m') ↦ (q·m2 − m', m2)` through the kernel of `f_V̄ = [Ã₁, …, Ã_q]`.
pub fn reflect_inverse(vbar: &Rep) -> Result<Rep> {
    Ok(reflect_inverse_with_witness(vbar)?.rep)
}

/// As [`reflect_inverse`], also returning `H = [N | K]` with `[Ã₁, …, Ã_q]·H = [I, 0]` and
/// `K = [A₁; …; A_q]`.
///
/// The kernel basis is rescaled so that `det H = 1`. With this normalisation the big and
/// compact determinants of [`super::c_pair_kron`] agree up to sign.
pub fn reflect_inverse_with_witness(vbar: &Rep) -> Result<Reflection> {
    let (m2, mp) = (vbar.dim().a1, vbar.dim().a2);
    let q = vbar.q();
    if mp > q * m2 {
        return Err(Error::NotSemistable(format!(
            "dimension {} has more than q*m2 = {} at the head vertex",
            vbar.dim(),
            q * m2
        )));
    }
    let t = vbar.concatenated();
    let rk = rank(&t);
    if rk < mp {
        return Err(Error::NotSemistable(format!(
            "concatenated arrow matrix has rank {rk} < {mp}, so f_V̄ is not surjective"
        )));
    }
    let m1 = q * m2 - mp;
    let mut k = kernel_basis(&t);
    debug_assert_eq!(k.shape(), (q * m2, m1));
    let tt = t.transpose();
    let right_inv = &tt * &inverse(&(&t * &tt))?;
    let mut h = RMatrix::hstack(q * m2, &[&right_inv, &k])?;
    if m1 > 0 {
        let s = det(&h)?;
        if s.is_zero() {
            return Err(Error::invariant("[N | K] is singular"));
        }
        let inv = s.recip();
        for i in 0..k.rows() {
            k[(i, m1 - 1)] = &k[(i, m1 - 1)] * &inv;
        }
        h = RMatrix::hstack(q * m2, &[&right_inv, &k])?;
        debug_assert!(det(&h)?.is_one());
    }
    let mats = (0..q).map(|i| k.block(i * m2, 0, m2, m1)).collect();
    let rep = Rep::new(q, DimVec::new(m1, m2), mats)?;
    Ok(Reflection { rep, witness: h })
}

/// Residual blocks of the relation between `v` (dimension `(m1, m2)`) and its reflection
/// `vbar` realised by `g`: `g·[A₁; …; A_q] − [I; 0]` and, for each arrow, the lower row block
/// of `g` in column block `i` minus `Ã_i`. All blocks vanish exactly when the relation holds.
pub fn compare1_residual(v: &Rep, vbar: &Rep, g: &RMatrix) -> Result<Vec<RMatrix>> {
    let (m1, m2) = (v.dim().a1, v.dim().a2);
    let q = v.q();
    let mp = q * m2 - m1;
    if vbar.q() != q || vbar.dim() != DimVec::new(m2, mp) || g.shape() != (q * m2, q * m2) {
        return Err(Error::dim("reflection relation: shapes do not match"));
    }
    if rank(g) < q * m2 {
        return Err(Error::contract("reflection witness is not invertible"));
    }
    let mut target = RMatrix::zeros(q * m2, m1);
    target.set_block(0, 0, &RMatrix::identity(m1));
    let mut out = vec![(g * &v.stacked()).checked_sub(&target)?];
    for (i, a) in vbar.mats().iter().enumerate() {
        out.push(g.block(m1, i * m2, mp, m2).checked_sub(a)?);
    }
    Ok(out)
}

/// Residual blocks of the inverse relation between `vbar` (dimension `(m2, m')`) and
/// `v = reflect_inverse(vbar)` realised by `h`: `[Ã₁, …, Ã_q]·h − [I, 0]` and, for each arrow,
/// the right column block of `h` in row block `i` minus `A_i`.
pub fn compare11_residual(vbar: &Rep, v: &Rep, h: &RMatrix) -> Result<Vec<RMatrix>> {
    let (m2, mp) = (vbar.dim().a1, vbar.dim().a2);
    let q = vbar.q();
    let m1 = q * m2 - mp;
    if v.q() != q || v.dim() != DimVec::new(m1, m2) || h.shape() != (q * m2, q * m2) {
        return Err(Error::dim("inverse reflection relation: shapes do not match"));
    }
    if rank(h) < q * m2 {
        return Err(Error::contract("inverse reflection witness is not invertible"));
    }
    let mut target = RMatrix::zeros(mp, q * m2);
    target.set_block(0, 0, &RMatrix::identity(mp));
    let mut out = vec![(&vbar.concatenated() * h).checked_sub(&target)?];
    for (i, a) in v.mats().iter().enumerate() {
        out.push(h.block(i * m2, mp, m2, m1).checked_sub(a)?);
    }
    Ok(out)
}

/// Smallest nonzero dimension vector `β` with `⟨alpha, β⟩ = 0`, if one exists.
fn orthogonal_probe_dim(q: usize, alpha: DimVec) -> Option<DimVec> {
    let (a1, a2) = (alpha.a1, alpha.a2);
    if a1 == 0 {
        return Some(DimVec::new(1, 0));
    }
    let lhs = q * a1;
    if lhs < a2 {
        return None;
    }
    let b1 = lhs - a2;
    let g = num_integer::gcd(b1, a1);
    Some(DimVec::new(b1 / g, a1 / g))
}

/// `count` seeded probe reps `W` with `⟨dim V, dim W⟩ = 0` for fingerprinting reps of dimension `alpha`.
pub fn fingerprint_probes(q: usize, alpha: DimVec, count: usize, seed: u64) -> Vec<Rep> {
    let Some(beta) = orthogonal_probe_dim(q, alpha) else {
        return Vec::new();
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_rep_with(&mut rng, q, beta, 3))
        .collect()
}

/// The vector `(c(V, W_j))_j` over a fixed probe list.
pub fn fingerprint(v: &Rep, probes: &[Rep]) -> Result<Vec<Rational>> {
    probes.iter().map(|w| c_pair(v, w)).collect()
}

/// True when `g = λ·f` for a single nonzero scalar `λ`.
pub fn fingerprints_agree(f: &[Rational], g: &[Rational]) -> bool {
    if f.len() != g.len() {
        return false;
    }
    let Some(i) = f.iter().position(|x| !x.is_zero()) else {
        return g.iter().all(Zero::is_zero);
    };
    let lambda = &g[i] / &f[i];
    !lambda.is_zero() && f.iter().zip(g).all(|(x, y)| &(x * &lambda) == y)
}
