//! Seeded experiments: pairing matrices, rank saturation, the vanishing oracle and strata
//! censuses.
//!
//! All randomness is drawn from the configured seed before any parallel work starts, so
//! reports are byte-identical across runs and thread counts.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::doc::rep_value;
use crate::error::{Error, Result};
use crate::exactla::{format_rational, rank, rat, RMatrix, Rational};
use crate::quiver::{
    c_pair_kron, direct_sum, random_gl, random_rep_with, reflect_inverse, DimVec, Rep,
};
use crate::sheafbridge::{
    h0_tensor, hom_to_o, ideal_sheaf, in_chart, lambda3, support_curve, BundleRep, Pencil,
};

/// Retries allowed per sample before an experiment gives up.
pub const MAX_RESAMPLES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// `V` has dimension `(r, 2r)` in pairing and vanishing experiments.
    pub r: usize,
    /// `W` has dimension `(d, d)`.
    pub d: usize,
    /// Bundle rank for strata censuses.
    pub n: usize,
    pub samples_v: usize,
    pub samples_w: usize,
    pub entry_bound: i64,
    /// Sample sizes at which the saturation curve is recorded; strictly increasing.
    pub schedule: Vec<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.d == 0 || self.n == 0 {
            return Err(Error::contract("r, d and n must be positive"));
        }
        if self.samples_v == 0 || self.samples_w == 0 {
            return Err(Error::contract("sample counts must be at least 1"));
        }
        if self.entry_bound < 1 {
            return Err(Error::contract("entry bound must be at least 1"));
        }
        if self.schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::contract("schedule must be strictly increasing"));
        }
        Ok(())
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            r: 1,
            d: 1,
            n: 1,
            samples_v: 4,
            samples_w: 4,
            entry_bound: 3,
            schedule: vec![1, 2, 4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub config: ExperimentConfig,
    /// Exact rank of the pairing matrix; absent for the pairwise vanishing experiment.
    pub matrix_rank: Option<usize>,
    pub saturation: Vec<(usize, usize)>,
    pub cells: usize,
    pub zero_cells: usize,
    pub oracle_disagreements: usize,
    pub resamples: usize,
    /// Pairing values as exact strings, row-major; empty for the vanishing experiment.
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrataReport {
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub fixtures: usize,
    pub counts: BTreeMap<usize, usize>,
    /// Samples where `hom(𝒢, 𝒪) + rank C(V, Λ₃) ≠ 3n`.
    pub identity_violations: usize,
    pub resamples: usize,
    /// First rep observed at each index.
    pub witnesses: BTreeMap<usize, Value>,
}

fn draw_bundle(rng: &mut ChaCha8Rng, r: usize, bound: i64, resamples: &mut usize) -> Result<Rep> {
    for _ in 0..MAX_RESAMPLES {
        let v = random_rep_with(rng, 3, DimVec::new(r, 2 * r), bound);
        if BundleRep::from_rep(&v).is_ok() && reflect_inverse(&v).is_ok() {
            return Ok(v);
        }
        *resamples += 1;
    }
    Err(Error::contract(format!(
        "no reflectable ({r},{}) sample in {MAX_RESAMPLES} draws",
        2 * r
    )))
}

fn draw_pencil(rng: &mut ChaCha8Rng, d: usize, bound: i64, resamples: &mut usize) -> Result<Pencil> {
    for _ in 0..MAX_RESAMPLES {
        let w = Pencil::from_rep(&random_rep_with(rng, 3, DimVec::new(d, d), bound))?;
        if in_chart(&w) {
            return Ok(w);
        }
        *resamples += 1;
    }
    Err(Error::contract(format!("no in-chart ({d},{d}) pencil in {MAX_RESAMPLES} draws")))
}

struct Cell {
    value: Rational,
    disagrees: bool,
}

fn evaluate(v: &Rep, w: &Pencil) -> Result<Cell> {
    let value = c_pair_kron(v, &w.to_rep())?.compact;
    let bundle = BundleRep::from_rep(v)?;
    let disagrees = match h0_tensor(&bundle, w) {
        Ok((h0, _)) => value.is_zero() != (h0 > 0),
        Err(Error::Invariant(_)) => true,
        Err(e) => return Err(e),
    };
    Ok(Cell { value, disagrees })
}

/// `P[i][j] = det C(V_i, W_j)` over seeded reflectable `V_i` and in-chart `W_j`, with its exact
/// rank, saturation curve and a sheaf-cohomology check of every cell.
pub fn pairing_matrix(cfg: &ExperimentConfig) -> Result<(RMatrix, PairingReport)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut resamples = 0;
    let vs = (0..cfg.samples_v)
        .map(|_| draw_bundle(&mut rng, cfg.r, cfg.entry_bound, &mut resamples))
        .collect::<Result<Vec<_>>>()?;
    let ws = (0..cfg.samples_w)
        .map(|_| draw_pencil(&mut rng, cfg.d, cfg.entry_bound, &mut resamples))
        .collect::<Result<Vec<_>>>()?;

    let cols = ws.len();
    let cells = (0..vs.len() * cols)
        .into_par_iter()
        .map(|k| evaluate(&vs[k / cols], &ws[k % cols]))
        .collect::<Result<Vec<_>>>()?;

    let mat = RMatrix::from_fn(vs.len(), cols, |i, j| cells[i * cols + j].value.clone());
    let saturation = cfg
        .schedule
        .iter()
        .map(|&s| {
            let rows: Vec<usize> = (0..s.min(vs.len())).collect();
            let cs: Vec<usize> = (0..s.min(cols)).collect();
            (s, rank(&mat.select_rows(&rows).select_columns(&cs)))
        })
        .collect();
    let report = PairingReport {
        config: cfg.clone(),
        matrix_rank: Some(rank(&mat)),
        saturation,
        cells: cells.len(),
        zero_cells: cells.iter().filter(|c| c.value.is_zero()).count(),
        oracle_disagreements: cells.iter().filter(|c| c.disagrees).count(),
        resamples,
        values: cells.iter().map(|c| format_rational(&c.value)).collect(),
    };
    Ok((mat, report))
}

fn random_point(rng: &mut ChaCha8Rng, bound: i64) -> [Rational; 3] {
    loop {
        let p = [0; 3].map(|_| rat(rng.gen_range(-bound..=bound)));
        if p.iter().any(|c| !c.is_zero()) {
            return p;
        }
    }
}

/// Rank of `{support_curve(W_j)(p_i)}` over `samples` seeded pencils and points. It cannot exceed
/// the number `(d+1)(d+2)/2` of degree-`d` monomials.
pub fn coeff_span_dim(d: usize, samples: usize, seed: u64) -> Result<usize> {
    if d == 0 {
        return Err(Error::contract("pencil size must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resamples = 0;
    let curves = (0..samples)
        .map(|_| draw_pencil(&mut rng, d, 3, &mut resamples).map(|w| support_curve(&w)))
        .collect::<Result<Vec<_>>>()?;
    let bound = 2 * d as i64 + 3;
    let points: Vec<[Rational; 3]> = (0..samples).map(|_| random_point(&mut rng, bound)).collect();
    let m = RMatrix::from_fn(samples, samples, |i, j| curves[j].eval(&points[i]));
    Ok(rank(&m))
}

fn conjugate(rng: &mut ChaCha8Rng, v: &Rep) -> Result<Rep> {
    let g1 = random_gl(rng, v.dim().a1, 2);
    let g2 = random_gl(rng, v.dim().a2, 2);
    v.act(&g1, &g2)
}

/// A pair whose pairing vanishes: `I_p ⊕ V'` against `ℓ ⊕ W'` with `p ∈ ℓ`, disguised by a random
/// change of basis.
fn crafted_pair(rng: &mut ChaCha8Rng, cfg: &ExperimentConfig, resamples: &mut usize) -> Result<(Rep, Pencil)> {
    let b = cfg.entry_bound;
    let p = loop {
        let p = [0; 3].map(|_| rng.gen_range(-b..=b));
        if p.iter().any(|&c| c != 0) {
            break p;
        }
    };
    // a nonzero line through p: cross product of p with a random vector
    let l = loop {
        let u = [0; 3].map(|_| rng.gen_range(-b..=b));
        let l = [p[1] * u[2] - p[2] * u[1], p[2] * u[0] - p[0] * u[2], p[0] * u[1] - p[1] * u[0]];
        if l.iter().any(|&c| c != 0) {
            break l;
        }
    };
    let mut v = ideal_sheaf(&p)?.to_rep();
    if cfg.r > 1 {
        v = direct_sum(&v, &draw_bundle(rng, cfg.r - 1, b, resamples)?)?;
    }
    let mut w = Rep::scalars(&l);
    if cfg.d > 1 {
        w = direct_sum(&w, &draw_pencil(rng, cfg.d - 1, b, resamples)?.to_rep())?;
    }
    let v = conjugate(rng, &v)?;
    let w = Pencil::from_rep(&conjugate(rng, &w)?)?;
    Ok((v, w))
}

/// Checks `det C(V,W) = 0 ⟺ h⁰(𝒢⊗ℱ) > 0` (and `h⁰ = h¹`) on `samples_v` seeded pairs, every
/// fourth of which is crafted to vanish.
pub fn vanishing_oracle_experiment(cfg: &ExperimentConfig) -> Result<PairingReport> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut resamples = 0;
    let mut pairs = Vec::with_capacity(cfg.samples_v);
    for k in 0..cfg.samples_v {
        if k % 4 == 3 {
            pairs.push(crafted_pair(&mut rng, cfg, &mut resamples)?);
        } else {
            let v = draw_bundle(&mut rng, cfg.r, cfg.entry_bound, &mut resamples)?;
            let w = draw_pencil(&mut rng, cfg.d, cfg.entry_bound, &mut resamples)?;
            pairs.push((v, w));
        }
    }
    let cells = pairs
        .par_iter()
        .map(|(v, w)| evaluate(v, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(PairingReport {
        config: cfg.clone(),
        matrix_rank: None,
        saturation: Vec::new(),
        cells: cells.len(),
        zero_cells: cells.iter().filter(|c| c.value.is_zero()).count(),
        oracle_disagreements: cells.iter().filter(|c| c.disagrees).count(),
        resamples,
        values: Vec::new(),
    })
}

/// Strata indices of `samples` random `(n,2n)` reps plus the fixtures
/// `I_{p₁} ⊕ … ⊕ I_{p_k} ⊕ V'` for `k = 1..=n`.
pub fn strata_census(n: usize, samples: usize, seed: u64) -> Result<StrataReport> {
    if n == 0 {
        return Err(Error::contract("bundle rank must be positive"));
    }
    let bound = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resamples = 0;
    let mut reps = Vec::with_capacity(samples + n);
    for _ in 0..samples {
        reps.push(draw_bundle(&mut rng, n, bound, &mut resamples)?);
    }
    for k in 1..=n {
        let mut v = Rep::zero(3, DimVec::new(0, 0));
        for _ in 0..k {
            let p = loop {
                let p = [0; 3].map(|_| rng.gen_range(-bound..=bound));
                if p.iter().any(|&c| c != 0) {
                    break p;
                }
            };
            v = direct_sum(&v, &ideal_sheaf(&p)?.to_rep())?;
        }
        if k < n {
            v = direct_sum(&v, &draw_bundle(&mut rng, n - k, bound, &mut resamples)?)?;
        }
        reps.push(v);
    }
    let lam = lambda3().to_rep();
    let results = reps
        .par_iter()
        .map(|v| -> Result<(usize, usize)> {
            let b = BundleRep::from_rep(v)?;
            let rk = rank(&crate::quiver::c_matrix(v, &lam)?);
            Ok((hom_to_o(&b), rk))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    let mut identity_violations = 0;
    for (v, &(hom, rk)) in reps.iter().zip(&results) {
        if hom + rk != 3 * n {
            identity_violations += 1;
        }
        let idx = 3 * n - rk;
        *counts.entry(idx).or_insert(0) += 1;
        witnesses.entry(idx).or_insert_with(|| rep_value(v));
    }
    Ok(StrataReport {
        n,
        seed,
        samples,
        fixtures: n,
        counts,
        identity_violations,
        resamples,
        witnesses,
    })
}

/// Plain-text summary of a pairing report.
pub fn pairing_table(r: &PairingReport) -> String {
    let mut s = String::new();
    let c = &r.config;
    s.push_str(&format!(
        "V: ({},{}) x {}   W: ({},{}) x {}   seed {}\n",
        c.r,
        2 * c.r,
        c.samples_v,
        c.d,
        c.d,
        c.samples_w,
        c.seed
    ));
    if let Some(rk) = r.matrix_rank {
        s.push_str(&format!("rank {rk}\n"));
    }
    for (size, rk) in &r.saturation {
        s.push_str(&format!("  {size:>5}  {rk:>5}\n"));
    }
    s.push_str(&format!(
        "cells {}  zero {}  disagreements {}  resamples {}\n",
        r.cells, r.zero_cells, r.oracle_disagreements, r.resamples
    ));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(r: usize, d: usize, samples: usize, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            seed,
            r,
            d,
            n: 1,
            samples_v: samples,
            samples_w: samples,
            entry_bound: 3,
            schedule: (1..=samples).collect(),
        }
    }

    #[test]
    fn points_against_lines() {
        let (_, rep) = pairing_matrix(&cfg(1, 1, 3, 11)).unwrap();
        assert_eq!(rep.matrix_rank, Some(3));
        assert_eq!(rep.oracle_disagreements, 0);
    }

    #[test]
    fn single_sample_rank() {
        let (_, rep) = pairing_matrix(&cfg(2, 2, 1, 5)).unwrap();
        assert!(rep.matrix_rank.unwrap() <= 1);
    }

    #[test]
    fn conic_plateau() {
        let (_, rep) = pairing_matrix(&cfg(1, 2, 8, 3)).unwrap();
        assert_eq!(rep.matrix_rank, Some(6));
        let ranks: Vec<usize> = rep.saturation.iter().map(|x| x.1).collect();
        assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*ranks.last().unwrap(), 6);
        assert_eq!(rep.oracle_disagreements, 0);
    }

    #[test]
    fn coefficient_spans() {
        assert_eq!(coeff_span_dim(1, 5, 1).unwrap(), 3);
        assert_eq!(coeff_span_dim(2, 8, 2).unwrap(), 6);
    }

    #[test]
    fn vanishing_oracle_with_crafted_pairs() {
        for (r, d) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let mut c = cfg(r, d, 8, 7);
            c.schedule = vec![];
            let rep = vanishing_oracle_experiment(&c).unwrap();
            assert_eq!(rep.oracle_disagreements, 0);
            assert!(rep.zero_cells >= 2);
        }
    }

    #[test]
    fn census() {
        let rep = strata_census(2, 6, 1).unwrap();
        assert_eq!(rep.identity_violations, 0);
        assert!(rep.counts[&0] >= 5);
        assert!(rep.counts.contains_key(&2));
        assert!(rep.counts.keys().all(|&i| i <= 2));
    }

    #[test]
    fn reports_are_deterministic() {
        let c = cfg(1, 2, 4, 9);
        let a = serde_json::to_string(&pairing_matrix(&c).unwrap().1).unwrap();
        let b = serde_json::to_string(&pairing_matrix(&c).unwrap().1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_configs() {
        let mut c = cfg(1, 1, 2, 0);
        c.schedule = vec![2, 1];
        assert!(pairing_matrix(&c).is_err());
        c.schedule = vec![];
        c.samples_w = 0;
        assert!(c.validate().is_err());
    }
}
