//! Representations of the Kronecker quiver `Q(q)`: two vertices `x₁ → x₂` joined by `q`
//! parallel arrows.
//!
//! Matrices act on column vectors, so every arrow of a representation of dimension
//! `(a1, a2)` is an `a2 x a1` matrix.

mod homext;
mod kron;
mod reflect;
mod stability;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{inverse, is_invertible, rat, RMatrix};

pub use homext::{c_pair, d_matrix, hom_ext};
pub use kron::{c_matrix, c_pair_kron, KronPair};
pub use reflect::{
    compare1_residual, compare11_residual, fingerprint, fingerprint_probes, fingerprints_agree,
    reflect, reflect_inverse, reflect_inverse_with_witness, reflect_with_witness, Reflection,
};
pub use stability::{
    destabilize_search, semistable_certificate, Destabilizer, ProbeConfig, ProbeSide, StabilityStatus,
    StabilityVerdict, Witness,
};

/// Dimension vector `(dim V(x₁), dim V(x₂))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DimVec {
    pub a1: usize,
    pub a2: usize,
}

impl DimVec {
    pub const fn new(a1: usize, a2: usize) -> Self {
        DimVec { a1, a2 }
    }

    pub fn is_zero(&self) -> bool {
        self.a1 == 0 && self.a2 == 0
    }

    pub fn total(&self) -> usize {
        self.a1 + self.a2
    }
}

impl std::ops::Add for DimVec {
    type Output = DimVec;

    fn add(self, o: DimVec) -> DimVec {
        DimVec::new(self.a1 + o.a1, self.a2 + o.a2)
    }
}

impl std::fmt::Display for DimVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.a1, self.a2)
    }
}

/// A weight `σ ∈ Γ*`, evaluated on dimension vectors as `w1·a1 + w2·a2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub w1: i64,
    pub w2: i64,
}

impl Weight {
    pub const fn new(w1: i64, w2: i64) -> Self {
        Weight { w1, w2 }
    }

    pub fn eval(&self, d: DimVec) -> i64 {
        self.w1 * d.a1 as i64 + self.w2 * d.a2 as i64
    }

    /// The primitive weight `(a2, -a1)/gcd` vanishing on `alpha`; zero for the zero vector.
    pub fn canonical_for(alpha: DimVec) -> Self {
        let g = num_integer::gcd(alpha.a1, alpha.a2).max(1) as i64;
        Weight::new(alpha.a2 as i64 / g, -(alpha.a1 as i64) / g)
    }

    /// The weight `-⟨-, β⟩` carried by the semi-invariant `c_W`, `dim W = β`.
    pub fn of_right_probe(q: usize, beta: DimVec) -> Self {
        Weight::new(
            q as i64 * beta.a2 as i64 - beta.a1 as i64,
            -(beta.a2 as i64),
        )
    }

    /// The weight `⟨α, -⟩` carried by the semi-invariant `c^V`, `dim V = α`.
    pub fn of_left_probe(q: usize, alpha: DimVec) -> Self {
        Weight::new(
            alpha.a1 as i64,
            alpha.a2 as i64 - q as i64 * alpha.a1 as i64,
        )
    }
}

/// Euler form `⟨α, β⟩ = α₁β₁ + α₂β₂ − q·α₁β₂`.
pub fn euler_form(q: usize, alpha: DimVec, beta: DimVec) -> i64 {
    let (a1, a2, b1, b2) = (
        alpha.a1 as i64,
        alpha.a2 as i64,
        beta.a1 as i64,
        beta.a2 as i64,
    );
    a1 * b1 + a2 * b2 - q as i64 * a1 * b2
}

/// A representation of `Q(q)`: one `a2 x a1` matrix per arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rep {
    q: usize,
    dim: DimVec,
    mats: Vec<RMatrix>,
}

impl Rep {
    pub fn new(q: usize, dim: DimVec, mats: Vec<RMatrix>) -> Result<Self> {
        if q == 0 {
            return Err(Error::contract("a Kronecker quiver needs at least one arrow"));
        }
        if mats.len() != q {
            return Err(Error::dim(format!("{} matrices for {q} arrows", mats.len())));
        }
        if let Some(m) = mats.iter().find(|m| m.shape() != (dim.a2, dim.a1)) {
            return Err(Error::dim(format!(
                "arrow matrix of shape {}x{} in a rep of dimension {dim} (expected {}x{})",
                m.rows(),
                m.cols(),
                dim.a2,
                dim.a1
            )));
        }
        Ok(Rep { q, dim, mats })
    }

    /// Rep whose arrows are the scalars `vals` (dimension `(1,1)`).
    pub fn scalars(vals: &[i64]) -> Self {
        let mats = vals.iter().map(|&v| RMatrix::from_i64(&[&[v]])).collect();
        Rep::new(vals.len(), DimVec::new(1, 1), mats).expect("scalar rep")
    }

    pub fn zero(q: usize, dim: DimVec) -> Self {
        Rep {
            q,
            dim,
            mats: vec![RMatrix::zeros(dim.a2, dim.a1); q],
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> DimVec {
        self.dim
    }

    pub fn mats(&self) -> &[RMatrix] {
        &self.mats
    }

    pub fn into_mats(self) -> Vec<RMatrix> {
        self.mats
    }

    /// The `(q·a2) x a1` matrix `[A₁; …; A_q]` of `f_V : ℂ^{a1} → ℂ^q ⊗ ℂ^{a2}`.
    pub fn stacked(&self) -> RMatrix {
        let parts: Vec<&RMatrix> = self.mats.iter().collect();
        RMatrix::vstack(self.dim.a1, &parts).expect("arrow shapes are uniform")
    }

    /// The `a2 x (q·a1)` matrix `[A₁, …, A_q]` of `ℂ^q ⊗ ℂ^{a1} → ℂ^{a2}`.
    pub fn concatenated(&self) -> RMatrix {
        let parts: Vec<&RMatrix> = self.mats.iter().collect();
        RMatrix::hstack(self.dim.a2, &parts).expect("arrow shapes are uniform")
    }

    /// Group action `A_i ↦ g2 · A_i · g1⁻¹`.
    pub fn act(&self, g1: &RMatrix, g2: &RMatrix) -> Result<Rep> {
        if g1.shape() != (self.dim.a1, self.dim.a1) || g2.shape() != (self.dim.a2, self.dim.a2) {
            return Err(Error::dim("group element does not match the dimension vector"));
        }
        let g1_inv = inverse(g1)?;
        let mats = self.mats.iter().map(|a| &(g2 * a) * &g1_inv).collect();
        Rep::new(self.q, self.dim, mats)
    }

    pub fn transpose_arrows(&self) -> Rep {
        Rep {
            q: self.q,
            dim: DimVec::new(self.dim.a2, self.dim.a1),
            mats: self.mats.iter().map(RMatrix::transpose).collect(),
        }
    }
}

/// Blockwise direct sum.
pub fn direct_sum(v: &Rep, w: &Rep) -> Result<Rep> {
    if v.q != w.q {
        return Err(Error::contract(format!(
            "direct sum of reps with {} and {} arrows",
            v.q, w.q
        )));
    }
    let mats = v
        .mats
        .iter()
        .zip(&w.mats)
        .map(|(a, b)| RMatrix::block_diag(a, b))
        .collect();
    Rep::new(v.q, v.dim + w.dim, mats)
}

/// Rep with entries drawn uniformly from `[-bound, bound]`, fully determined by `seed`.
pub fn random_rep(q: usize, alpha: DimVec, seed: u64, bound: i64) -> Result<Rep> {
    if bound < 1 {
        return Err(Error::contract("entry bound must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_rep_with(&mut rng, q, alpha, bound))
}

pub(crate) fn random_rep_with<R: Rng>(rng: &mut R, q: usize, alpha: DimVec, bound: i64) -> Rep {
    let mats = (0..q)
        .map(|_| RMatrix::from_fn(alpha.a2, alpha.a1, |_, _| rat(rng.gen_range(-bound..=bound))))
        .collect();
    Rep {
        q,
        dim: alpha,
        mats,
    }
}

/// A random invertible `n x n` integer matrix (resampled until invertible).
pub fn random_gl<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RMatrix {
    loop {
        let g = RMatrix::from_fn(n, n, |_, _| rat(rng.gen_range(-bound..=bound)));
        if is_invertible(&g) {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_form_examples() {
        for r in 1..5 {
            for d in 1..5 {
                assert_eq!(euler_form(3, DimVec::new(r, 2 * r), DimVec::new(d, d)), 0);
            }
        }
        assert_eq!(euler_form(3, DimVec::new(1, 0), DimVec::new(0, 1)), -3);
        for q in 1..6 {
            assert_eq!(euler_form(q, DimVec::new(0, 0), DimVec::new(3, 7)), 0);
        }
    }

    #[test]
    fn rep_shape_checks() {
        assert!(Rep::new(2, DimVec::new(1, 2), vec![RMatrix::zeros(2, 1); 2]).is_ok());
        assert!(Rep::new(2, DimVec::new(1, 2), vec![RMatrix::zeros(1, 2); 2]).is_err());
        assert!(Rep::new(3, DimVec::new(1, 2), vec![RMatrix::zeros(2, 1); 2]).is_err());
    }

    #[test]
    fn direct_sum_dims_and_zero() {
        let v = random_rep(3, DimVec::new(2, 3), 1, 3).unwrap();
        let z = Rep::zero(3, DimVec::new(0, 0));
        assert_eq!(direct_sum(&z, &v).unwrap(), v);
        let w = random_rep(3, DimVec::new(1, 1), 2, 3).unwrap();
        assert_eq!(direct_sum(&v, &w).unwrap().dim(), DimVec::new(3, 4));
        assert!(direct_sum(&v, &random_rep(2, DimVec::new(1, 1), 2, 3).unwrap()).is_err());
    }

    #[test]
    fn random_rep_is_seeded() {
        let a = random_rep(3, DimVec::new(2, 4), 42, 5).unwrap();
        let b = random_rep(3, DimVec::new(2, 4), 42, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), DimVec::new(2, 4));
        assert_ne!(a, random_rep(3, DimVec::new(2, 4), 43, 5).unwrap());
        assert!(random_rep(3, DimVec::new(1, 1), 0, 0).is_err());
    }

    #[test]
    fn probe_weights() {
        // c_W with dim W = (2,1) pairs with (1,1) reps at weight (1,-1)
        assert_eq!(Weight::of_right_probe(3, DimVec::new(2, 1)), Weight::new(1, -1));
        // c^V with dim V = (1,2) has weight (1,-1) on (1,1) reps
        assert_eq!(Weight::of_left_probe(3, DimVec::new(1, 2)), Weight::new(1, -1));
        assert_eq!(Weight::canonical_for(DimVec::new(2, 4)), Weight::new(2, -1));
    }
}
