//! Sheaves on ℙ² presented by quiver data.
//!
//! A `(d,d)` representation `(B_x, B_y, B_z)` is the pencil `0 → 𝒪(−2)^d → 𝒪(−1)^d → ℱ → 0`
//! given by `xB_x + yB_y + zB_z`. An `(n,2n)` representation `(Ã_x, Ã_y, Ã_z)` presents the
//! sheaf `𝒢` in `0 → 𝒪(−2)^n → 𝒪(−1)^{2n} → 𝒢 → 0`.
//!
//! Cohomology is computed on monomial bases. `H²(𝒪(−k))` uses the basis dual to the degree
//! `k − 3` monomials, so a linear form acts on `H²` by the transpose of its `H⁰` action.

mod cohom;
mod poly;

pub use cohom::{coh_twist, h0_tensor, CohomProfile, TWIST_MAX, TWIST_MIN};
pub use poly::{monomial_count, monomials, mult_matrix, mult_matrix_h2, HomogPoly};

use crate::error::{Error, Result};
use crate::exactla::{det, rank, rat, solve, star, RMatrix, Rational};
use crate::quiver::{c_matrix, DimVec, Rep};

use poly::coordinate_forms;

/// The pencil `xB_x + yB_y + zB_z` of `d x d` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    d: usize,
    triple: [RMatrix; 3],
}

impl Pencil {
    pub fn new(triple: [RMatrix; 3]) -> Result<Self> {
        let d = triple[0].rows();
        if triple.iter().any(|m| m.shape() != (d, d)) {
            return Err(Error::dim("pencil matrices must be square of one size"));
        }
        if d == 0 {
            return Err(Error::contract("pencil size must be positive"));
        }
        Ok(Pencil { d, triple })
    }

    pub fn from_rep(rep: &Rep) -> Result<Self> {
        if rep.q() != 3 || rep.dim().a1 != rep.dim().a2 {
            return Err(Error::contract(format!(
                "a pencil is a (d,d) rep of the three-arrow quiver, got q={} dim {}",
                rep.q(),
                rep.dim()
            )));
        }
        let m = rep.mats();
        Pencil::new([m[0].clone(), m[1].clone(), m[2].clone()])
    }

    pub fn to_rep(&self) -> Rep {
        Rep::new(3, DimVec::new(self.d, self.d), self.triple.to_vec()).expect("pencil shapes")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn triple(&self) -> &[RMatrix; 3] {
        &self.triple
    }

    pub fn eval(&self, p: &[Rational; 3]) -> RMatrix {
        let mut m = RMatrix::zeros(self.d, self.d);
        for (b, c) in self.triple.iter().zip(p) {
            m = &m + &b.scale(c);
        }
        m
    }
}

/// The `(n,2n)` data `(Ã_x, Ã_y, Ã_z)` of a presentation `𝒪(−2)^n → 𝒪(−1)^{2n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleRep {
    n: usize,
    triple: [RMatrix; 3],
}

impl BundleRep {
    /// Validates shapes and that the stacked `6n x n` matrix has rank `n`.
    pub fn new(triple: [RMatrix; 3]) -> Result<Self> {
        let n = triple[0].cols();
        if n == 0 {
            return Err(Error::contract("bundle rank must be positive"));
        }
        if triple.iter().any(|m| m.shape() != (2 * n, n)) {
            return Err(Error::dim(format!("bundle matrices must all be {}x{n}", 2 * n)));
        }
        let stacked = RMatrix::vstack(n, &[&triple[0], &triple[1], &triple[2]])?;
        if rank(&stacked) != n {
            return Err(Error::NotReflectable(format!(
                "stacked matrix has rank {} < {n}",
                rank(&stacked)
            )));
        }
        Ok(BundleRep { n, triple })
    }

    pub fn from_rep(rep: &Rep) -> Result<Self> {
        let dim = rep.dim();
        if rep.q() != 3 || dim.a2 != 2 * dim.a1 {
            return Err(Error::contract(format!(
                "a bundle is an (n,2n) rep of the three-arrow quiver, got q={} dim {dim}",
                rep.q()
            )));
        }
        let m = rep.mats();
        BundleRep::new([m[0].clone(), m[1].clone(), m[2].clone()])
    }

    pub fn to_rep(&self) -> Rep {
        Rep::new(3, DimVec::new(self.n, 2 * self.n), self.triple.to_vec()).expect("bundle shapes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triple(&self) -> &[RMatrix; 3] {
        &self.triple
    }
}

/// `det(xB_x + yB_y + zB_z)`, by exact interpolation on a fixed unisolvent grid.
pub fn support_curve(w: &Pencil) -> HomogPoly {
    let d = w.d;
    let mut pts: Vec<[Rational; 3]> = Vec::new();
    for i in 0..d as i64 {
        for j in 0..(d as i64 - i) {
            pts.push([rat(i), rat(j), rat(1)]);
        }
    }
    for i in 0..d as i64 {
        pts.push([rat(i), rat(1), rat(0)]);
    }
    pts.push([rat(1), rat(0), rat(0)]);

    let monos = monomials(d);
    let vander = RMatrix::from_fn(pts.len(), monos.len(), |r, c| {
        let mut v = rat(1);
        for (x, &k) in pts[r].iter().zip(&monos[c]) {
            for _ in 0..k {
                v *= x;
            }
        }
        v
    });
    let values: Vec<Rational> = pts
        .iter()
        .map(|p| det(&w.eval(p)).expect("square"))
        .collect();
    let sol = solve(&vander, &RMatrix::column_vector(values))
        .expect("shapes agree")
        .expect("interpolation grid is unisolvent");
    HomogPoly::new(d, sol.column(0)).expect("coefficient count")
}

/// Whether the pencil is injective as a sheaf map, i.e. its determinant is not identically zero.
pub fn in_chart(w: &Pencil) -> bool {
    !support_curve(w).is_zero()
}

/// The dual `ℱ^D`, presented by the transposed pencil.
pub fn ddual(w: &Pencil) -> Pencil {
    Pencil {
        d: w.d,
        triple: [
            w.triple[0].transpose(),
            w.triple[1].transpose(),
            w.triple[2].transpose(),
        ],
    }
}

/// The `(3,3)` pencil `[[y, −z, 0], [−x, 0, z], [0, x, −y]]`.
pub fn lambda3() -> Pencil {
    Pencil {
        d: 3,
        triple: [
            RMatrix::from_i64(&[&[0, 0, 0], &[-1, 0, 0], &[0, 1, 0]]),
            RMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, -1]]),
            RMatrix::from_i64(&[&[0, -1, 0], &[0, 0, 1], &[0, 0, 0]]),
        ],
    }
}

/// The `6n x 6n` matrix of `H⁰(𝒪(1))^{2n} → H⁰(𝒪(2))^n`, `Φ ↦ Φ·(xÃ_x + yÃ_y + zÃ_z)`.
pub fn hom_to_o_matrix(v: &BundleRep) -> RMatrix {
    let n = v.n;
    let mut m = RMatrix::zeros(6 * n, 6 * n);
    for (a, ell) in v.triple.iter().zip(coordinate_forms()) {
        let mult = mult_matrix(&ell, 1).expect("degree 1");
        m = &m + &star(&mult, &a.transpose());
    }
    m
}

/// `hom(𝒢, 𝒪_{ℙ²})`.
pub fn hom_to_o(v: &BundleRep) -> usize {
    6 * v.n - rank(&hom_to_o_matrix(v))
}

/// `3n − rank C(V, Λ₃)`: the largest `i` with `V` in the `i`-th stratum.
pub fn strata_index(v: &BundleRep) -> Result<usize> {
    let c = c_matrix(&v.to_rep(), &lambda3().to_rep())?;
    Ok(3 * v.n - rank(&c))
}

/// The `(1,2)` bundle rep of the ideal sheaf of the point `p`.
pub fn ideal_sheaf(p: &[i64; 3]) -> Result<BundleRep> {
    BundleRep::from_rep(&crate::quiver::reflect(&Rep::scalars(p))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{eval_pencil, ratio};
    use crate::quiver::{direct_sum, random_rep, reflect};

    fn pencil(seed: u64, d: usize) -> Pencil {
        Pencil::from_rep(&random_rep(3, DimVec::new(d, d), seed, 3).unwrap()).unwrap()
    }

    #[test]
    fn degree_one_curve_is_the_line() {
        let w = Pencil::from_rep(&Rep::scalars(&[2, -3, 5])).unwrap();
        let c = support_curve(&w);
        assert_eq!(c, HomogPoly::linear(&[rat(2), rat(-3), rat(5)]));
        assert!(in_chart(&w));
    }

    #[test]
    fn curve_matches_determinant_at_random_points() {
        for seed in 0..4 {
            let w = pencil(seed, 3);
            let c = support_curve(&w);
            for p in [[rat(3), rat(-2), rat(7)], [ratio(1, 2), rat(5), rat(0)], [rat(-4), rat(0), rat(9)]] {
                assert_eq!(c.eval(&p), det(&w.eval(&p)).unwrap());
            }
        }
    }

    #[test]
    fn lambda3_is_out_of_chart() {
        let l = lambda3();
        assert!(support_curve(&l).is_zero());
        assert!(!in_chart(&l));
        assert_eq!(
            l.triple[0],
            RMatrix::from_i64(&[&[0, 0, 0], &[-1, 0, 0], &[0, 1, 0]])
        );
        assert_eq!(rank(&l.eval(&[rat(1), rat(0), rat(0)])), 2);
        let at_one = eval_pencil(&l.triple, &[rat(1), rat(1), rat(1)]).unwrap();
        assert_eq!(at_one, RMatrix::from_i64(&[&[1, -1, 0], &[-1, 0, 1], &[0, 1, -1]]));
    }

    #[test]
    fn block_pencil_curve_is_a_product() {
        let a = pencil(1, 1);
        let b = pencil(2, 2);
        let ab = Pencil::from_rep(&direct_sum(&a.to_rep(), &b.to_rep()).unwrap()).unwrap();
        assert_eq!(support_curve(&ab), support_curve(&a).mul(&support_curve(&b)));
    }

    #[test]
    fn ddual_is_an_involution_preserving_the_curve() {
        let w = pencil(5, 3);
        assert_eq!(ddual(&ddual(&w)), w);
        assert_eq!(support_curve(&ddual(&w)), support_curve(&w));
        let s = RMatrix::from_i64(&[&[1, 2], &[2, 3]]);
        let sym = Pencil::new([s.clone(), s.clone(), s]).unwrap();
        assert_eq!(ddual(&sym), sym);
    }

    #[test]
    fn generic_pencils_are_in_chart() {
        let hits = (0..20).filter(|&s| in_chart(&pencil(s, 2))).count();
        assert!(hits >= 18);
    }

    #[test]
    fn ideal_sheaf_has_one_map_to_o() {
        let v = ideal_sheaf(&[0, 0, 1]).unwrap();
        assert_eq!(hom_to_o(&v), 1);
        assert_eq!(strata_index(&v).unwrap(), 1);
    }

    #[test]
    fn sums_of_ideal_sheaves() {
        let p = ideal_sheaf(&[1, 2, 3]).unwrap().to_rep();
        let q = ideal_sheaf(&[0, 1, -1]).unwrap().to_rep();
        let v = BundleRep::from_rep(&direct_sum(&p, &q).unwrap()).unwrap();
        assert_eq!(hom_to_o(&v), 2);
        assert_eq!(strata_index(&v).unwrap(), 2);
    }

    #[test]
    fn generic_bundle_has_no_maps_to_o() {
        for n in 1..=3 {
            for seed in 0..3 {
                let w = random_rep(3, DimVec::new(n, n), seed, 3).unwrap();
                let v = BundleRep::from_rep(&reflect(&w).unwrap()).unwrap();
                // (n,n) reflects to (n,2n)
                assert_eq!(hom_to_o(&v), strata_index(&v).unwrap());
                if n >= 2 {
                    assert_eq!(hom_to_o(&v), 0);
                }
            }
        }
    }

    #[test]
    fn bundle_rank_is_checked() {
        let z = RMatrix::zeros(2, 1);
        assert!(BundleRep::new([z.clone(), z.clone(), z]).is_err());
        assert!(Pencil::new([RMatrix::zeros(2, 2), RMatrix::zeros(2, 2), RMatrix::zeros(2, 3)]).is_err());
    }
}
