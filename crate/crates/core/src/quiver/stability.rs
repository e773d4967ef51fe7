use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{c_pair, random_gl, random_rep_with, DimVec, Rep, Weight};
use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, rank, rref, RMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum StabilityStatus {
    Semistable,
    Stable,
    Unstable,
    Unknown,
}

/// A subrepresentation `(U₁, U₂)` with `Aᵢ U₁ ⊆ U₂`, given by column bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Destabilizer {
    pub u1: RMatrix,
    pub u2: RMatrix,
    pub dim: DimVec,
}

/// Which slot of the pairing the probe occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeSide {
    /// `c(V, W)`: a semi-invariant `c_W` of weight `−⟨−, dim W⟩`.
    Right,
    /// `c(W, V)`: a semi-invariant `c^W` of weight `⟨dim W, −⟩`.
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Pairing {
        probe: Rep,
        side: ProbeSide,
        value: Rational,
    },
    Subrep(Destabilizer),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub witness: Option<Witness>,
}

/// Search budget for probe certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    /// Random probes per probe dimension vector.
    pub trials: usize,
    /// Probe dimension vectors are `λ·β₀` for `λ = 1..=max_multiple`.
    pub max_multiple: usize,
    pub seed: u64,
    pub bound: i64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            trials: 8,
            max_multiple: 2,
            seed: 0,
            bound: 3,
        }
    }
}

fn nonneg_dim(a: i64, b: i64) -> Option<DimVec> {
    (a >= 0 && b >= 0).then(|| DimVec::new(a as usize, b as usize))
}

/// Probe dimension vectors whose semi-invariants carry a positive multiple of `sigma`,
/// ordered by total size.
fn probe_dims(q: usize, sigma: Weight, max_multiple: usize) -> Vec<(ProbeSide, DimVec)> {
    let q = q as i64;
    let (w1, w2) = (sigma.w1, sigma.w2);
    if w1 == 0 && w2 == 0 {
        return vec![(ProbeSide::Right, DimVec::new(0, 0))];
    }
    let mut out = Vec::new();
    for lam in 1..=max_multiple as i64 {
        if let Some(beta) = nonneg_dim(-lam * (q * w2 + w1), -lam * w2) {
            out.push((ProbeSide::Right, beta));
        }
        if let Some(alpha) = nonneg_dim(lam * w1, lam * (w2 + q * w1)) {
            out.push((ProbeSide::Left, alpha));
        }
    }
    out.sort_by_key(|(_, d)| d.total());
    out
}

/// True when no dimension vector strictly between `0` and `alpha` has weight zero, so that
/// semistability already forces stability.
fn semistable_implies_stable(alpha: DimVec, sigma: Weight) -> bool {
    for g1 in 0..=alpha.a1 {
        for g2 in 0..=alpha.a2 {
            let g = DimVec::new(g1, g2);
            if g.is_zero() || g == alpha {
                continue;
            }
            if sigma.eval(g) == 0 {
                return false;
            }
        }
    }
    true
}

/// Certificate-based stability check.
///
/// A nonzero pairing against a probe of matching weight proves semistability; an explicit
/// destabilising subrepresentation proves instability. Otherwise the verdict is `Unknown`.
pub fn semistable_certificate(v: &Rep, sigma: Weight, cfg: &ProbeConfig) -> Result<StabilityVerdict> {
    let alpha = v.dim();
    if sigma.eval(alpha) != 0 {
        return Err(Error::contract(format!(
            "weight ({},{}) does not vanish on {alpha}",
            sigma.w1, sigma.w2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (side, pd) in probe_dims(v.q(), sigma, cfg.max_multiple) {
        let tries = if pd.is_zero() { 1 } else { cfg.trials };
        for _ in 0..tries {
            let probe = random_rep_with(&mut rng, v.q(), pd, cfg.bound);
            let value = match side {
                ProbeSide::Right => c_pair(v, &probe)?,
                ProbeSide::Left => c_pair(&probe, v)?,
            };
            if !value.is_zero() {
                let status = if semistable_implies_stable(alpha, sigma) {
                    StabilityStatus::Stable
                } else {
                    StabilityStatus::Semistable
                };
                return Ok(StabilityVerdict {
                    status,
                    witness: Some(Witness::Pairing { probe, side, value }),
                });
            }
        }
    }
    if let Some(d) = destabilize_search(v, sigma, cfg.trials.max(1))? {
        return Ok(StabilityVerdict {
            status: StabilityStatus::Unstable,
            witness: Some(Witness::Subrep(d)),
        });
    }
    Ok(StabilityVerdict {
        status: StabilityStatus::Unknown,
        witness: None,
    })
}

/// Column basis of the column space of `m`.
fn column_basis(m: &RMatrix) -> RMatrix {
    let (r, piv) = rref(&m.transpose());
    r.block(0, 0, piv.len(), r.cols()).transpose()
}

/// Builds the subrepresentation generated by `u1` (plus all of `V(x₂)` when `w2 > 0`) and
/// returns it if its weight is positive.
fn try_candidate(v: &Rep, sigma: Weight, u1: &RMatrix) -> Result<Option<Destabilizer>> {
    let a2 = v.dim().a2;
    let u1 = if u1.cols() == 0 { u1.clone() } else { column_basis(u1) };
    let u2 = if sigma.w2 > 0 {
        RMatrix::identity(a2)
    } else {
        let imgs: Vec<RMatrix> = v.mats().iter().map(|a| a * &u1).collect();
        let parts: Vec<&RMatrix> = imgs.iter().collect();
        column_basis(&RMatrix::hstack(a2, &parts)?)
    };
    let dim = DimVec::new(u1.cols(), u2.cols());
    if dim.is_zero() || sigma.eval(dim) <= 0 {
        return Ok(None);
    }
    let base = rank(&u2);
    for a in v.mats() {
        let img = a * &u1;
        if rank(&RMatrix::hstack(a2, &[&u2, &img])?) != base {
            return Err(Error::invariant("candidate subspace is not closed under the arrows"));
        }
    }
    Ok(Some(Destabilizer { u1, u2, dim }))
}

/// Searches for a subrepresentation `U` with `σ(dim U) > 0`.
///
/// Candidates are the common kernel of the arrows, kernels of single arrows, coordinate
/// subspaces (for `a1 ≤ 6`) and `effort` rounds of random flags. Every hit is verified exactly;
/// `None` is not a proof of semistability.
pub fn destabilize_search(
    v: &Rep,
    sigma: Weight,
    effort: usize,
) -> Result<Option<Destabilizer>> {
    let a1 = v.dim().a1;
    let mut candidates = vec![RMatrix::zeros(a1, 0), kernel_basis(&v.stacked())];
    for a in v.mats() {
        candidates.push(kernel_basis(a));
    }
    if a1 <= 6 {
        let id = RMatrix::identity(a1);
        for mask in 1u32..(1 << a1) {
            let cols: Vec<usize> = (0..a1).filter(|&j| mask & (1 << j) != 0).collect();
            candidates.push(id.select_columns(&cols));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d57a ^ effort as u64);
    for _ in 0..effort {
        let g = random_gl(&mut rng, a1, 3);
        for k in 1..=a1 {
            let cols: Vec<usize> = (0..k).collect();
            candidates.push(g.select_columns(&cols));
        }
    }
    for u1 in &candidates {
        if let Some(d) = try_candidate(v, sigma, u1)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{random_rep, reflect};

    fn cfg() -> ProbeConfig {
        ProbeConfig {
            trials: 6,
            max_multiple: 2,
            seed: 17,
            bound: 3,
        }
    }

    #[test]
    fn generic_point_is_stable() {
        let v = Rep::scalars(&[1, 2, 3]);
        let verdict = semistable_certificate(&v, Weight::new(1, -1), &cfg()).unwrap();
        assert_eq!(verdict.status, StabilityStatus::Stable);
        assert!(matches!(verdict.witness, Some(Witness::Pairing { .. })));
    }

    #[test]
    fn zero_point_is_unstable() {
        let v = Rep::scalars(&[0, 0, 0]);
        let verdict = semistable_certificate(&v, Weight::new(1, -1), &cfg()).unwrap();
        assert_eq!(verdict.status, StabilityStatus::Unstable);
        let Some(Witness::Subrep(d)) = verdict.witness else {
            panic!("expected a subrep witness")
        };
        assert_eq!(d.dim, DimVec::new(1, 0));
    }

    #[test]
    fn empty_rep_is_semistable() {
        let v = Rep::zero(3, DimVec::new(0, 0));
        let verdict = semistable_certificate(&v, Weight::new(1, -1), &cfg()).unwrap();
        assert!(matches!(
            verdict.status,
            StabilityStatus::Semistable | StabilityStatus::Stable
        ));
    }

    #[test]
    fn weight_must_vanish() {
        let v = Rep::scalars(&[1, 2, 3]);
        assert!(semistable_certificate(&v, Weight::new(1, 1), &cfg()).is_err());
    }

    #[test]
    fn common_kernel_destabilizes() {
        // both arrows kill e2
        let a = RMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        let b = RMatrix::from_i64(&[&[0, 0], &[1, 0]]);
        let v = Rep::new(3, DimVec::new(2, 2), vec![a.clone(), b, a]).unwrap();
        let d = destabilize_search(&v, Weight::new(1, -1), 4).unwrap().unwrap();
        assert!(Weight::new(1, -1).eval(d.dim) > 0);
        let verdict = semistable_certificate(&v, Weight::new(1, -1), &cfg()).unwrap();
        assert_eq!(verdict.status, StabilityStatus::Unstable);
    }

    #[test]
    fn generic_square_rep_has_no_destabilizer() {
        for seed in 0..5 {
            let v = random_rep(3, DimVec::new(2, 2), seed, 3).unwrap();
            assert!(destabilize_search(&v, Weight::new(1, -1), 10).unwrap().is_none());
            let verdict = semistable_certificate(&v, Weight::new(1, -1), &cfg()).unwrap();
            assert_eq!(verdict.status, StabilityStatus::Semistable);
        }
    }

    #[test]
    fn reflection_keeps_certificates() {
        for seed in 0..5 {
            let v = random_rep(3, DimVec::new(2, 2), seed, 3).unwrap();
            let vb = reflect(&v).unwrap();
            let sigma = Weight::canonical_for(vb.dim());
            let verdict = semistable_certificate(&vb, sigma, &cfg()).unwrap();
            assert!(matches!(
                verdict.status,
                StabilityStatus::Semistable | StabilityStatus::Stable
            ));
        }
    }
}
