use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{format_rational, rat, RMatrix, Rational};

/// Number of monomials of degree `k` in three variables; zero for negative `k`.
pub fn monomial_count(k: i64) -> usize {
    if k < 0 {
        0
    } else {
        let k = k as usize;
        (k + 1) * (k + 2) / 2
    }
}

/// Exponent triples `(i, j, k)` with `i + j + k = degree` in graded-lex order:
/// `x^d, x^{d-1}y, x^{d-1}z, x^{d-2}y², …, z^d`.
pub fn monomials(degree: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(monomial_count(degree as i64));
    for i in (0..=degree).rev() {
        for j in (0..=degree - i).rev() {
            out.push([i, j, degree - i - j]);
        }
    }
    out
}

fn monomial_index(e: [usize; 3]) -> usize {
    // position of (i,j,k) in the graded-lex list of degree i+j+k
    let d = e[0] + e[1] + e[2];
    let before: usize = (e[0] + 1..=d).map(|i| d - i + 1).sum();
    before + (d - e[0] - e[1])
}

/// A homogeneous polynomial in `x, y, z` with coefficients in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyDoc", into = "PolyDoc")]
pub struct HomogPoly {
    degree: usize,
    coeffs: Vec<Rational>,
}

impl HomogPoly {
    pub fn new(degree: usize, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != monomial_count(degree as i64) {
            return Err(Error::dim(format!(
                "degree {degree} needs {} coefficients, got {}",
                monomial_count(degree as i64),
                coeffs.len()
            )));
        }
        Ok(HomogPoly { degree, coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        HomogPoly {
            degree,
            coeffs: vec![Rational::zero(); monomial_count(degree as i64)],
        }
    }

    /// The linear form `ax + by + cz`.
    pub fn linear(abc: &[Rational; 3]) -> Self {
        HomogPoly {
            degree: 1,
            coeffs: abc.to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [usize; 3]) -> &Rational {
        &self.coeffs[monomial_index(e)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, p: &[Rational; 3]) -> Rational {
        monomials(self.degree)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let mut t = c.clone();
                for (v, &k) in p.iter().zip(e) {
                    for _ in 0..k {
                        t *= v;
                    }
                }
                t
            })
            .sum()
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        let mut out = HomogPoly::zero(self.degree + other.degree);
        for (ea, ca) in monomials(self.degree).iter().zip(&self.coeffs) {
            if ca.is_zero() {
                continue;
            }
            for (eb, cb) in monomials(other.degree).iter().zip(&other.coeffs) {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.coeffs[monomial_index(e)] += ca * cb;
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> HomogPoly {
        HomogPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = ["x", "y", "z"]
                .iter()
                .zip(e)
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), mono.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    degree: usize,
    coeffs: Vec<String>,
}

impl From<HomogPoly> for PolyDoc {
    fn from(p: HomogPoly) -> Self {
        PolyDoc {
            degree: p.degree,
            coeffs: p.coeffs.iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<PolyDoc> for HomogPoly {
    type Error = Error;

    fn try_from(d: PolyDoc) -> Result<Self> {
        let coeffs = d
            .coeffs
            .iter()
            .map(|s| crate::exactla::parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        HomogPoly::new(d.degree, coeffs)
    }
}

/// Multiplication by `ax + by + cz` from `H⁰(𝒪(k))` to `H⁰(𝒪(k+1))` on monomial bases.
pub fn mult_matrix(ell: &[Rational; 3], k: i64) -> Result<RMatrix> {
    if k < 0 {
        return Err(Error::TwistOutOfRange(k));
    }
    let k = k as usize;
    let src = monomials(k);
    let mut m = RMatrix::zeros(monomial_count(k as i64 + 1), src.len());
    for (col, e) in src.iter().enumerate() {
        for (v, c) in ell.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut f = *e;
            f[v] += 1;
            m[(monomial_index(f), col)] += c;
        }
    }
    Ok(m)
}

/// Multiplication by `ax + by + cz` from `H²(𝒪(−k))` to `H²(𝒪(−k+1))`, for `k ≥ 3`.
///
/// `H²(𝒪(−k))` carries the basis dual to the monomials of degree `k − 3`, so the matrix is the
/// transpose of [`mult_matrix`] in degree `k − 4` (and `0 x 1` for `k = 3`).
pub fn mult_matrix_h2(ell: &[Rational; 3], k: i64) -> Result<RMatrix> {
    if k < 3 {
        return Err(Error::TwistOutOfRange(-k));
    }
    if k == 3 {
        return Ok(RMatrix::zeros(0, 1));
    }
    Ok(mult_matrix(ell, k - 4)?.transpose())
}

/// The coordinate linear forms `x`, `y`, `z`.
pub(crate) fn coordinate_forms() -> [[Rational; 3]; 3] {
    [
        [rat(1), rat(0), rat(0)],
        [rat(0), rat(1), rat(0)],
        [rat(0), rat(0), rat(1)],
    ]
}
