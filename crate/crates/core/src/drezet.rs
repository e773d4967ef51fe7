//! Exceptional slopes on ℙ² and Drézet's height calculus, in exact arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::{parse_rational, rat, ratio, Rational};

pub const DEFAULT_DEPTH: usize = 64;

/// The dyadic rational `p / 2^q`, kept with `p` odd or `q = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    p: BigInt,
    q: u32,
}

impl Dyadic {
    pub fn new(p: impl Into<BigInt>, q: u32) -> Self {
        let mut p = p.into();
        let mut q = q;
        while q > 0 && p.is_even() {
            p /= 2;
            q -= 1;
        }
        Dyadic { p, q }
    }

    pub fn integer(n: i64) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), BigInt::one() << self.q)
    }

    /// Accepts `"p"` or `"p/2^q"` written as `"p/<power of two>"`.
    pub fn parse(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        let den = r.denom().clone();
        let q = den.bits().saturating_sub(1) as u32;
        if BigInt::one() << q != den {
            return Err(Error::Parse(format!("{s:?} is not a dyadic rational")));
        }
        Ok(Dyadic::new(r.numer().clone(), q))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, BigInt::one() << self.q)
        }
    }
}

/// An exceptional slope with its rank and discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExcSlope {
    pub slope: Rational,
    pub rank: BigInt,
    pub discriminant: Rational,
}

impl ExcSlope {
    /// The exceptional slope `a`, with rank the denominator of `a`.
    pub fn from_slope(slope: Rational) -> Self {
        let rank = slope.denom().clone();
        let r2 = Rational::from_integer(&rank * &rank);
        let discriminant = (Rational::one() - r2.recip()) / rat(2);
        ExcSlope {
            slope,
            rank,
            discriminant,
        }
    }

    pub fn integer(n: i64) -> Self {
        ExcSlope::from_slope(rat(n))
    }

    fn rank_q(&self) -> Rational {
        Rational::from_integer(self.rank.clone())
    }
}

/// `P(y) = (y² + 3y + 2)/2`.
#[allow(non_snake_case)]
pub fn P(y: &Rational) -> Rational {
    (y * y + rat(3) * y + rat(2)) / rat(2)
}

/// `a.b = (a + b)/2 + (Δ_b − Δ_a)/(3 + a − b)`.
pub fn dot(a: &ExcSlope, b: &ExcSlope) -> Result<Rational> {
    let den = rat(3) + &a.slope - &b.slope;
    if den.is_zero() {
        return Err(Error::DivisionByZero(format!(
            "3 + a − b vanishes for a = {}, b = {}",
            a.slope, b.slope
        )));
    }
    Ok((&a.slope + &b.slope) / rat(2) + (&b.discriminant - &a.discriminant) / den)
}

fn memo() -> &'static Mutex<HashMap<Dyadic, ExcSlope>> {
    static TABLE: OnceLock<Mutex<HashMap<Dyadic, ExcSlope>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ε(x)`: `ε(n) = n` and `ε((2p+1)/2^q) = ε(p/2^{q−1}) . ε((p+1)/2^{q−1})`.
pub fn eps(x: &Dyadic) -> ExcSlope {
    if x.q == 0 {
        return ExcSlope::from_slope(Rational::from_integer(x.p.clone()));
    }
    if let Some(e) = memo().lock().expect("memo lock").get(x) {
        return e.clone();
    }
    let half: BigInt = (&x.p - 1) / 2;
    let left = eps(&Dyadic::new(half.clone(), x.q - 1));
    let right = eps(&Dyadic::new(half + 1, x.q - 1));
    let slope = dot(&left, &right).expect("neighbouring slopes differ by less than 3");
    let e = ExcSlope::from_slope(slope);
    memo().lock().expect("memo lock").insert(x.clone(), e.clone());
    e
}

/// Whether `μ` lies in `I_a = (a − x_a, a + x_a)`, `x_a = 3/2 − √(9/4 − 1/r_a²)`.
pub fn in_interval(mu: &Rational, a: &ExcSlope) -> bool {
    let dist = (mu - &a.slope).abs();
    let three_halves = ratio(3, 2);
    if dist >= three_halves {
        return false;
    }
    let r2 = a.rank_q() * a.rank_q();
    let gap = three_halves - dist;
    ratio(9, 4) - r2.recip() < &gap * &gap
}

/// The unique exceptional slope `a` with `μ ∈ I_a`, found by descending the dyadic tree.
pub fn assoc_exceptional(mu: &Rational, max_depth: usize) -> Result<ExcSlope> {
    let n = mu.floor().to_integer();
    for m in [n.clone(), &n + 1] {
        let a = ExcSlope::from_slope(Rational::from_integer(m));
        if in_interval(mu, &a) {
            return Ok(a);
        }
    }
    // μ lies strictly between ε(lo/2^q) and ε((lo+1)/2^q)
    let mut lo = n;
    for q in 1..=max_depth as u32 {
        let mid = Dyadic::new(&lo * 2 + 1, q);
        let a = eps(&mid);
        if in_interval(mu, &a) {
            return Ok(a);
        }
        lo = if *mu < a.slope { lo * 2 } else { lo * 2 + 1 };
    }
    Err(Error::DepthExhausted(max_depth))
}

/// `δ(μ) = P(−|μ − a|) − Δ_a` for the exceptional slope `a` with `μ ∈ I_a`.
pub fn delta(mu: &Rational) -> Result<Rational> {
    delta_with_depth(mu, DEFAULT_DEPTH)
}

pub fn delta_with_depth(mu: &Rational, max_depth: usize) -> Result<Rational> {
    let a = assoc_exceptional(mu, max_depth)?;
    Ok(P(&-(mu - &a.slope).abs()) - &a.discriminant)
}

/// `Δ(r, c₁, c₂) = (c₂ − (1 − 1/r)c₁²/2)/r`.
pub fn discriminant(r: i64, c1: i64, c2: i64) -> Result<Rational> {
    if r < 1 {
        return Err(Error::contract(format!("rank must be positive, got {r}")));
    }
    let rq = rat(r);
    let c1q = rat(c1);
    Ok((rat(c2) - (Rational::one() - rq.recip()) * &c1q * &c1q / rat(2)) / rq)
}

/// `h(M(r,c₁,c₂)) = r·r_a·(Δ − δ(c₁/r))`. Negative values are returned as they are.
pub fn height(r: i64, c1: i64, c2: i64) -> Result<Rational> {
    let disc = discriminant(r, c1, c2)?;
    let mu = ratio(c1, r);
    let a = assoc_exceptional(&mu, DEFAULT_DEPTH)?;
    let d = P(&-(&mu - &a.slope).abs()) - &a.discriminant;
    Ok(rat(r) * a.rank_q() * (disc - d))
}

/// Riemann–Roch on ℙ²: `χ(E,F) = r_E·r_F·(P(μ_F − μ_E) − Δ_E − Δ_F)`, in terms of
/// `(rank, slope, discriminant)`.
pub fn chi(e: (&Rational, &Rational, &Rational), f: (&Rational, &Rational, &Rational)) -> Rational {
    e.0 * f.0 * (P(&(f.1 - e.1)) - e.2 - f.2)
}

/// The height as `−χ(ℰ_a, ℱ)` when `μ ≤ a` and `−χ(ℱ, ℰ_a)` when `μ ≥ a`.
pub fn height_chi_crosscheck(r: i64, c1: i64, c2: i64) -> Result<Rational> {
    let disc = discriminant(r, c1, c2)?;
    let mu = ratio(c1, r);
    let a = assoc_exceptional(&mu, DEFAULT_DEPTH)?;
    let rf = rat(r);
    let ra = a.rank_q();
    let ea = (&ra, &a.slope, &a.discriminant);
    let f = (&rf, &mu, &disc);
    Ok(if mu <= a.slope { -chi(ea, f) } else { -chi(f, ea) })
}

/// `M(r,c₁,c₂)` has positive dimension iff `δ(c₁/r) ≤ Δ(r,c₁,c₂)`.
pub fn positive_dim(r: i64, c1: i64, c2: i64) -> Result<bool> {
    let disc = discriminant(r, c1, c2)?;
    Ok(delta(&ratio(c1, r))? <= disc)
}

/// `r_a·r_b·(3 + a − b)` as an integer, when it is one.
pub fn product_rank(a: &ExcSlope, b: &ExcSlope) -> Option<BigInt> {
    let v = a.rank_q() * b.rank_q() * (rat(3) + &a.slope - &b.slope);
    v.is_integer().then(|| v.to_integer())
}

/// Checks the rank recursion `rank(a.b) = r_a·r_b·(3 + a − b)` on every dyadic node of
/// `[0, 1]` with denominator at most `2^max_q`; returns the number of nodes checked.
pub fn check_rank_products(max_q: u32) -> Result<usize> {
    let mut checked = 0;
    for q in 1..=max_q {
        for p in (1..(1i64 << q)).step_by(2) {
            let x = Dyadic::new(p, q);
            let left = eps(&Dyadic::new((p - 1) / 2, q - 1));
            let right = eps(&Dyadic::new((p + 1) / 2, q - 1));
            let node = eps(&x);
            if product_rank(&left, &right).as_ref() != Some(&node.rank) {
                return Err(Error::invariant(format!(
                    "rank of ε({x}) = {} is not r_a·r_b·(3 + a − b)",
                    node.slope
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Approximate `x_a`, for human-readable output only.
pub fn half_width_f64(a: &ExcSlope) -> f64 {
    let r = a.rank.to_f64().unwrap_or(f64::INFINITY);
    1.5 - (2.25 - 1.0 / (r * r)).sqrt()
}
