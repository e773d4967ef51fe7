//! The acceptance suite behind `kdual selftest`.

use std::io::Write;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::drezet::{self, Dyadic};
use crate::dualitylab::{self, ExperimentConfig};
use crate::exactla::{det, inverse, rank, rat, ratio, star, RMatrix, Rational};
use crate::quiver::{
    self, c_pair, c_pair_kron, euler_form, fingerprint, fingerprint_probes, fingerprints_agree,
    hom_ext, random_gl, random_rep, random_rep_with, reflect_inverse_with_witness,
    reflect_with_witness, DimVec, Rep, Weight,
};
use crate::sheafbridge::{self, hom_to_o, ideal_sheaf, lambda3, BundleRep, Pencil};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Full,
    Quick,
}

impl Scale {
    fn pick(self, full: usize, quick: usize) -> usize {
        match self {
            Scale::Full => full,
            Scale::Quick => quick,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(Scale) -> Result<String, String>;

const CRITERIA: [(&str, Check); 10] = [
    ("star operator laws", star_laws),
    ("big and compact determinants agree", determinant_identity),
    ("strata identity", strata_identity),
    ("vanishing oracle", vanishing_oracle),
    ("reflection roundtrip", reflection_roundtrip),
    ("semi-invariance weight law", weight_law),
    ("exceptional slopes and heights", drezet_calculus),
    ("coefficient-span plateaus", coefficient_spans),
    ("hom minus ext is the Euler form", hom_ext_contract),
    ("determinism", determinism),
];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: crate::Error) -> String {
    e.to_string()
}

fn rand_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> RMatrix {
    RMatrix::from_fn(r, c, |_, _| rat(rng.gen_range(-3..=3)))
}

fn star_laws(scale: Scale) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = scale.pick(100, 20);
    for _ in 0..n {
        let (m, k) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let g = random_gl(&mut rng, m, 3);
        let o = random_gl(&mut rng, k, 3);
        let lhs = inverse(&star(&g, &o)).map_err(e2s)?;
        let rhs = star(&inverse(&g).map_err(e2s)?, &inverse(&o).map_err(e2s)?);
        ensure(lhs == rhs, || "star of inverses is not the inverse".into())?;

        let dims: Vec<usize> = (0..6).map(|_| rng.gen_range(1..=3)).collect();
        let (g, d) = (rand_matrix(&mut rng, dims[0], dims[1]), rand_matrix(&mut rng, dims[1], dims[2]));
        let (o, l) = (rand_matrix(&mut rng, dims[3], dims[4]), rand_matrix(&mut rng, dims[4], dims[5]));
        ensure(star(&(&g * &d), &(&o * &l)) == &star(&g, &o) * &star(&d, &l), || {
            "star is not multiplicative".into()
        })?;
    }
    let shapes: Vec<[usize; 4]> = (1..=3usize)
        .flat_map(|m| (1..=3).flat_map(move |nn| (1..=3).flat_map(move |k| (1..=3).map(move |l| [m, nn, k, l]))))
        .filter(|[m, nn, k, l]| m * k == nn * l)
        .collect();
    for t in 0..n {
        let [m, nn, k, l] = shapes[t % shapes.len()];
        let terms = rng.gen_range(1..=3);
        let mut a = RMatrix::zeros(m * k, nn * l);
        let mut b = RMatrix::zeros(m * k, nn * l);
        for _ in 0..terms {
            let g = rand_matrix(&mut rng, m, nn);
            let o = rand_matrix(&mut rng, k, l);
            a = &a + &star(&g, &o);
            b = &b + &star(&o, &g);
        }
        let num = m * k * ((m - 1) * (k - 1) + (nn - 1) * (l - 1));
        ensure(num % 4 == 0, || format!("sign exponent {num}/4 is not an integer"))?;
        let sign = if (num / 4) % 2 == 0 { rat(1) } else { rat(-1) };
        let (da, db) = (det(&a).map_err(e2s)?, det(&b).map_err(e2s)?);
        ensure(da == sign * db, || format!("det identity fails for shape {m}x{nn} * {k}x{l}"))?;
    }
    Ok(format!("{n} instances of each law"))
}

fn determinant_identity(scale: Scale) -> Result<String, String> {
    let seeds = scale.pick(20, 3) as u64;
    for r in 1..=3 {
        for d in 1..=3 {
            let mut sign: Option<Rational> = None;
            for seed in 0..seeds {
                let v = random_rep(3, DimVec::new(r, 2 * r), 1000 + seed, 3).map_err(e2s)?;
                let w = random_rep(3, DimVec::new(d, d), 2000 + seed, 3).map_err(e2s)?;
                let k = c_pair_kron(&v, &w).map_err(e2s)?;
                if k.compact.is_zero() {
                    continue;
                }
                let s = &k.big / &k.compact;
                match &sign {
                    Some(prev) => ensure(prev == &s, || format!("sign ratio varies at (r,d)=({r},{d})"))?,
                    None => sign = Some(s),
                }
            }
        }
    }
    Ok(format!("{} pairs", 9 * seeds))
}

fn strata_identity(scale: Scale) -> Result<String, String> {
    let reps = scale.pick(20, 3) as u64;
    let lam = lambda3().to_rep();
    let check = |v: &BundleRep| -> Result<(usize, usize), String> {
        let hom = hom_to_o(v);
        let rk = rank(&quiver::c_matrix(&v.to_rep(), &lam).map_err(e2s)?);
        ensure(hom + rk == 3 * v.n(), || format!("hom {hom} + rank {rk} != {}", 3 * v.n()))?;
        Ok((hom, rk))
    };
    let fixture = ideal_sheaf(&[0, 0, 1]).map_err(e2s)?;
    ensure(check(&fixture)? == (1, 2), || "ideal-sheaf fixture is not (1, 2)".into())?;
    for n in 1..=4 {
        for seed in 0..reps {
            let v = random_rep(3, DimVec::new(n, 2 * n), 300 + seed, 3).map_err(e2s)?;
            if let Ok(b) = BundleRep::from_rep(&v) {
                if quiver::reflect_inverse(&v).is_ok() {
                    check(&b)?;
                }
            }
        }
        let mut sum = Rep::zero(3, DimVec::new(0, 0));
        for i in 0..n as i64 {
            sum = quiver::direct_sum(&sum, &ideal_sheaf(&[1, i, i * i + 1]).map_err(e2s)?.to_rep())
                .map_err(e2s)?;
        }
        let (hom, _) = check(&BundleRep::from_rep(&sum).map_err(e2s)?)?;
        ensure(hom == n, || format!("sum of {n} ideal sheaves has hom {hom}"))?;
    }
    Ok(format!("{} random reps per rank", reps))
}

fn vanishing_oracle(scale: Scale) -> Result<String, String> {
    let pairs = scale.pick(50, 4);
    let mut total = 0;
    for n in 1..=3 {
        for d in 1..=3 {
            let cfg = ExperimentConfig {
                seed: (10 * n + d) as u64,
                r: n,
                d,
                n,
                samples_v: pairs,
                samples_w: 1,
                entry_bound: 3,
                schedule: vec![],
            };
            let rep = dualitylab::vanishing_oracle_experiment(&cfg).map_err(e2s)?;
            ensure(rep.oracle_disagreements == 0, || {
                format!("{} disagreements at (n,d)=({n},{d})", rep.oracle_disagreements)
            })?;
            total += rep.cells;
        }
    }
    let v = ideal_sheaf(&[1, 2, 3]).map_err(e2s)?;
    for (line, expect) in [([1, 1, -1], (1, 1)), ([1, 0, 0], (0, 0))] {
        let w = Pencil::from_rep(&Rep::scalars(&line)).map_err(e2s)?;
        let got = sheafbridge::h0_tensor(&v, &w).map_err(e2s)?;
        ensure(got == expect, || format!("incidence fixture gives {got:?}"))?;
        let c = c_pair_kron(&v.to_rep(), &w.to_rep()).map_err(e2s)?;
        ensure(c.compact.is_zero() == (got.0 > 0), || "incidence fixture disagrees".into())?;
    }
    Ok(format!("{total} pairs and both incidence branches"))
}

fn reflection_roundtrip(scale: Scale) -> Result<String, String> {
    let count = scale.pick(20, 4) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..count {
        let k = 1 + (seed as usize % 4);
        for alpha in [DimVec::new(k, k), DimVec::new(k, 2 * k)] {
            let v = random_rep_with(&mut rng, 3, alpha, 3);
            let Ok(fwd) = reflect_with_witness(&v) else { continue };
            let res = quiver::compare1_residual(&v, &fwd.rep, &fwd.witness).map_err(e2s)?;
            ensure(res.iter().all(RMatrix::is_zero), || format!("compare1 residual at {alpha}"))?;
            let back = reflect_inverse_with_witness(&fwd.rep).map_err(e2s)?;
            let res = quiver::compare11_residual(&fwd.rep, &back.rep, &back.witness).map_err(e2s)?;
            ensure(res.iter().all(RMatrix::is_zero), || format!("compare11 residual at {alpha}"))?;
            let probes = fingerprint_probes(3, alpha, 5, seed);
            let f = fingerprint(&v, &probes).map_err(e2s)?;
            let g = fingerprint(&back.rep, &probes).map_err(e2s)?;
            ensure(fingerprints_agree(&f, &g), || format!("fingerprints differ at {alpha}"))?;
        }
    }
    Ok(format!("{count} seeds, dimensions (k,k) and (k,2k)"))
}

fn weight_law(scale: Scale) -> Result<String, String> {
    let pairs = [
        (3, DimVec::new(1, 1), DimVec::new(2, 1)),
        (3, DimVec::new(1, 2), DimVec::new(1, 1)),
        (3, DimVec::new(2, 2), DimVec::new(2, 1)),
        (3, DimVec::new(2, 4), DimVec::new(2, 2)),
        (3, DimVec::new(3, 3), DimVec::new(2, 1)),
        (2, DimVec::new(1, 1), DimVec::new(1, 1)),
        (2, DimVec::new(2, 2), DimVec::new(1, 1)),
        (2, DimVec::new(1, 2), DimVec::new(0, 1)),
        (3, DimVec::new(1, 3), DimVec::new(0, 1)),
        (4, DimVec::new(1, 2), DimVec::new(2, 1)),
    ];
    let groups = scale.pick(10, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for &(q, alpha, beta) in &pairs {
        ensure(euler_form(q, alpha, beta) == 0, || format!("{alpha},{beta} not orthogonal"))?;
        let (v, w, c) = loop {
            let v = random_rep_with(&mut rng, q, alpha, 3);
            let w = random_rep_with(&mut rng, q, beta, 3);
            let c = c_pair(&v, &w).map_err(e2s)?;
            if !c.is_zero() {
                break (v, w, c);
            }
        };
        let sigma = Weight::of_right_probe(q, beta);
        for _ in 0..groups {
            let g1 = random_gl(&mut rng, alpha.a1, 2);
            let g2 = random_gl(&mut rng, alpha.a2, 2);
            let gv = v.act(&g1, &g2).map_err(e2s)?;
            let factor = int_pow(&det(&g1).map_err(e2s)?, -sigma.w1) * int_pow(&det(&g2).map_err(e2s)?, -sigma.w2);
            ensure(c_pair(&gv, &w).map_err(e2s)? == factor * &c, || {
                format!("weight law fails for {alpha},{beta}")
            })?;
        }
    }
    Ok(format!("{} pairs x {groups} group elements", pairs.len()))
}

fn int_pow(x: &Rational, e: i64) -> Rational {
    let mut out = rat(1);
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.abs() {
        out *= &base;
    }
    out
}

fn drezet_calculus(_: Scale) -> Result<String, String> {
    for r in 1..=6 {
        for n in 1..=6 {
            let h = drezet::height(r, 0, n).map_err(e2s)?;
            ensure(h == rat(n - r), || format!("height({r},0,{n}) = {h}"))?;
            let hc = drezet::height_chi_crosscheck(r, 0, n).map_err(e2s)?;
            ensure(hc == h, || format!("chi form differs at ({r},0,{n})"))?;
        }
    }
    ensure(drezet::delta(&rat(0)).map_err(e2s)? == rat(1), || "δ(0) != 1".into())?;
    let e = drezet::eps(&Dyadic::new(1, 2));
    ensure(e.slope == ratio(2, 5), || format!("eps(1/4) = {}", e.slope))?;
    let e = drezet::eps(&Dyadic::new(3, 3));
    ensure(e.slope == ratio(12, 29) && e.rank == 29.into(), || format!("eps(3/8) = {}", e.slope))?;
    let nodes = drezet::check_rank_products(6).map_err(e2s)?;
    Ok(format!("grid 6x6, {nodes} rank-product nodes"))
}

fn coefficient_spans(scale: Scale) -> Result<String, String> {
    for d in 1..=3usize {
        let n = (d + 1) * (d + 2) / 2;
        for extra in [2, scale.pick(6, 3)] {
            let got = dualitylab::coeff_span_dim(d, n + extra, d as u64 + extra as u64).map_err(e2s)?;
            ensure(got == n, || format!("d={d}: span {got}, expected {n}"))?;
        }
    }
    Ok("d = 1, 2, 3".into())
}

fn hom_ext_contract(scale: Scale) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let count = scale.pick(50, 10);
    for _ in 0..count {
        let q = rng.gen_range(1..=3);
        let a = DimVec::new(rng.gen_range(0..=3), rng.gen_range(0..=3));
        let b = DimVec::new(rng.gen_range(0..=3), rng.gen_range(0..=3));
        let v = random_rep_with(&mut rng, q, a, 2);
        let w = random_rep_with(&mut rng, q, b, 2);
        let (h, e) = hom_ext(&v, &w).map_err(e2s)?;
        ensure(h as i64 - e as i64 == euler_form(q, a, b), || format!("hom-ext at {a},{b}"))?;
    }
    Ok(format!("{count} pairs"))
}

fn determinism(scale: Scale) -> Result<String, String> {
    let cfg = ExperimentConfig {
        seed: 42,
        r: 1,
        d: 2,
        n: 2,
        samples_v: scale.pick(6, 3),
        samples_w: scale.pick(6, 3),
        entry_bound: 3,
        schedule: vec![1, 2, 3],
    };
    let run = || -> Result<String, String> {
        let (_, p) = dualitylab::pairing_matrix(&cfg).map_err(e2s)?;
        let v = dualitylab::vanishing_oracle_experiment(&cfg).map_err(e2s)?;
        let s = dualitylab::strata_census(cfg.n, 4, cfg.seed).map_err(e2s)?;
        serde_json::to_string(&(p, v, s)).map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a == b, || "reports differ between identical runs".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

/// Runs every criterion, writing one line per criterion to `out`.
pub fn run_all(scale: Scale, out: &mut dyn Write) -> Vec<Outcome> {
    let mut results = Vec::new();
    for (i, (name, check)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let res = check(scale);
        let seconds = start.elapsed().as_secs_f64();
        let (passed, detail) = match res {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let _ = writeln!(
            out,
            "criterion {:>2} {}: {name} ({detail}, {seconds:.2}s)",
            i + 1,
            if passed { "PASS" } else { "FAIL" }
        );
        results.push(Outcome {
            id: i + 1,
            name,
            passed,
            detail,
            seconds,
        });
    }
    results
}
