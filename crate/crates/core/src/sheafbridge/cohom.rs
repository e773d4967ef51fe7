use serde::{Deserialize, Serialize};

use super::poly::{coordinate_forms, monomial_count, mult_matrix, mult_matrix_h2};
use super::{in_chart, BundleRep, Pencil};
use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, rank, star, RMatrix};

pub const TWIST_MIN: i64 = -4;
pub const TWIST_MAX: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomProfile {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

impl CohomProfile {
    pub fn euler_characteristic(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }
}

fn chi_line(m: i64) -> i64 {
    (m + 1) * (m + 2) / 2
}

fn h2_dim(m: i64) -> usize {
    monomial_count(-m - 3)
}

/// Matrix of `𝒪(k−2)^n → 𝒪(k−1)^{2n}` on `H⁰` (`h = 0`) or `H²` (`h = 2`).
fn twisted_map(v: &BundleRep, k: i64, h: u8) -> Result<RMatrix> {
    let n = v.n();
    let (src, dst) = if h == 0 {
        (monomial_count(k - 2), monomial_count(k - 1))
    } else {
        (h2_dim(k - 2), h2_dim(k - 1))
    };
    let mut m = RMatrix::zeros(2 * n * dst, n * src);
    if src == 0 {
        return Ok(m);
    }
    for (a, ell) in v.triple().iter().zip(coordinate_forms()) {
        let mult = if h == 0 {
            mult_matrix(&ell, k - 2)?
        } else {
            mult_matrix_h2(&ell, 2 - k)?
        };
        m = &m + &star(&mult, a);
    }
    Ok(m)
}

/// `(h⁰, h¹, h²)` of `𝒢(k)` from the long exact sequence of the twisted resolution.
pub fn coh_twist(v: &BundleRep, k: i64) -> Result<CohomProfile> {
    if !(TWIST_MIN..=TWIST_MAX).contains(&k) {
        return Err(Error::TwistOutOfRange(k));
    }
    let n = v.n();
    let m0 = twisted_map(v, k, 0)?;
    let r0 = rank(&m0);
    if r0 != m0.cols() {
        return Err(Error::invariant("presentation is not injective on global sections"));
    }
    let m2 = twisted_map(v, k, 2)?;
    let r2 = rank(&m2);
    let prof = CohomProfile {
        h0: m0.rows() - r0,
        h1: m2.cols() - r2,
        h2: m2.rows() - r2,
    };
    let chi = 2 * n as i64 * chi_line(k - 1) - n as i64 * chi_line(k - 2);
    if prof.euler_characteristic() != chi {
        return Err(Error::invariant(format!(
            "χ(𝒢({k})) = {} from cohomology but {chi} from the class",
            prof.euler_characteristic()
        )));
    }
    Ok(prof)
}

/// `(h⁰(𝒢⊗ℱ), h¹(𝒢⊗ℱ))` for the sheaf `ℱ` presented by an in-chart pencil.
///
/// `h⁰` is the kernel of `H¹(𝒢(−2))^d → H¹(𝒢(−1))^d` induced by the pencil, with
/// `H¹(𝒢(−2)) = ker(H²(𝒪(−4))^n → H²(𝒪(−3))^{2n})` and `H¹(𝒢(−1)) = H²(𝒪(−3))^n`.
pub fn h0_tensor(v: &BundleRep, w: &Pencil) -> Result<(usize, usize)> {
    if !in_chart(w) {
        return Err(Error::NotInChart);
    }
    let n = v.n();
    let d = w.d();
    let alpha = twisted_map(v, -2, 2)?;
    let h2_g = alpha.rows() - rank(&alpha);
    let k = kernel_basis(&alpha);
    let id_n = RMatrix::identity(n);
    let mut phi = RMatrix::zeros(n * d, 3 * n * d);
    for (b, ell) in w.triple().iter().zip(coordinate_forms()) {
        let h2 = mult_matrix_h2(&ell, 4)?;
        phi = &phi + &star(&star(&h2, &id_n), b);
    }
    let phi = &phi * &star(&k, &RMatrix::identity(d));
    let r = rank(&phi);
    let h0 = phi.cols() - r;
    let h1 = (phi.rows() - r) + d * h2_g;
    if h0 != h1 {
        return Err(Error::invariant(format!(
            "h0 = {h0} but h1 = {h1} for an orthogonal pair"
        )));
    }
    Ok((h0, h1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{random_rep, reflect, DimVec, Rep};
    use crate::sheafbridge::{ideal_sheaf, lambda3};

    fn bundle(n: usize, seed: u64) -> BundleRep {
        let w = random_rep(3, DimVec::new(n, n), seed, 3).unwrap();
        BundleRep::from_rep(&reflect(&w).unwrap()).unwrap()
    }

    #[test]
    fn ideal_sheaf_twists() {
        let v = ideal_sheaf(&[1, 2, 3]).unwrap();
        assert_eq!(coh_twist(&v, 0).unwrap(), CohomProfile { h0: 0, h1: 0, h2: 0 });
        assert_eq!(coh_twist(&v, 1).unwrap(), CohomProfile { h0: 2, h1: 0, h2: 0 });
        assert_eq!(coh_twist(&v, 2).unwrap(), CohomProfile { h0: 5, h1: 0, h2: 0 });
        assert_eq!(coh_twist(&v, -1).unwrap(), CohomProfile { h0: 0, h1: 1, h2: 0 });
        assert_eq!(coh_twist(&v, -2).unwrap(), CohomProfile { h0: 0, h1: 1, h2: 0 });
        assert_eq!(coh_twist(&v, -3).unwrap(), CohomProfile { h0: 0, h1: 1, h2: 1 });
    }

    #[test]
    fn twist_range() {
        let v = ideal_sheaf(&[0, 0, 1]).unwrap();
        assert!(matches!(coh_twist(&v, TWIST_MIN - 1), Err(Error::TwistOutOfRange(_))));
        assert!(matches!(coh_twist(&v, TWIST_MAX + 1), Err(Error::TwistOutOfRange(_))));
        for k in TWIST_MIN..=TWIST_MAX {
            coh_twist(&v, k).unwrap();
        }
    }

    #[test]
    fn generic_bundles_have_no_cohomology_at_zero() {
        for n in 1..=3 {
            for seed in 0..3 {
                let v = bundle(n, seed);
                assert_eq!(coh_twist(&v, 0).unwrap(), CohomProfile { h0: 0, h1: 0, h2: 0 });
                for k in TWIST_MIN..=4 {
                    coh_twist(&v, k).unwrap();
                }
            }
        }
    }

    #[test]
    fn point_and_line() {
        let v = ideal_sheaf(&[1, 2, 3]).unwrap();
        let off = Pencil::from_rep(&Rep::scalars(&[1, 0, 0])).unwrap();
        assert_eq!(h0_tensor(&v, &off).unwrap(), (0, 0));
        let on = Pencil::from_rep(&Rep::scalars(&[1, 1, -1])).unwrap();
        assert_eq!(h0_tensor(&v, &on).unwrap(), (1, 1));
    }

    #[test]
    fn out_of_chart_is_rejected() {
        let v = bundle(3, 1);
        assert_eq!(h0_tensor(&v, &lambda3()), Err(Error::NotInChart));
    }

    #[test]
    fn random_pairs_agree_with_the_determinant() {
        use crate::quiver::c_pair_kron;
        use num_traits::Zero;
        for n in 1..=2 {
            for d in 1..=2 {
                for seed in 0..4 {
                    let v = bundle(n, seed);
                    let w = Pencil::from_rep(&random_rep(3, DimVec::new(d, d), seed + 50, 2).unwrap())
                        .unwrap();
                    if !in_chart(&w) {
                        continue;
                    }
                    let (h0, h1) = h0_tensor(&v, &w).unwrap();
                    assert_eq!(h0, h1);
                    let c = c_pair_kron(&v.to_rep(), &w.to_rep()).unwrap();
                    assert_eq!(c.compact.is_zero(), h0 > 0, "n={n} d={d} seed={seed}");
                }
            }
        }
    }
}
