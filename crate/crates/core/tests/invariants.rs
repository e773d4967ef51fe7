use kronecker_duality::drezet::{self, Dyadic};
use kronecker_duality::exactla::{det, inverse, rank, star, RMatrix, Rational};
use kronecker_duality::quiver::{c_pair, euler_form, hom_ext, random_rep, reflect, reflect_inverse, DimVec};
use kronecker_duality::sheafbridge::{coh_twist, ideal_sheaf, BundleRep};
use num_traits::Zero;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RMatrix> {
    proptest::collection::vec(-4i64..=4, rows * cols).prop_map(move |v| {
        RMatrix::from_fn(rows, cols, |i, j| Rational::from_integer(v[i * cols + j].into()))
    })
}

fn square() -> impl Strategy<Value = RMatrix> {
    (1usize..=4).prop_flat_map(|n| matrix(n, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative((a, b) in (1usize..=4).prop_flat_map(|n| (matrix(n, n), matrix(n, n)))) {
        prop_assert_eq!(det(&(&a * &b)).unwrap(), det(&a).unwrap() * det(&b).unwrap());
    }

    #[test]
    fn inverse_roundtrips(a in square()) {
        match inverse(&a) {
            Ok(inv) => prop_assert_eq!(&a * &inv, RMatrix::identity(a.rows())),
            Err(_) => prop_assert!(det(&a).unwrap().is_zero()),
        }
    }

    #[test]
    fn star_rank_multiplies(g in matrix(2, 3), o in matrix(3, 2)) {
        prop_assert_eq!(rank(&star(&g, &o)), rank(&g) * rank(&o));
    }

    #[test]
    fn hom_minus_ext(q in 1usize..=3, a in (0usize..=3, 0usize..=3), b in (0usize..=3, 0usize..=3), seed in any::<u64>()) {
        let (a, b) = (DimVec::new(a.0, a.1), DimVec::new(b.0, b.1));
        let v = random_rep(q, a, seed, 2).unwrap();
        let w = random_rep(q, b, seed ^ 1, 2).unwrap();
        let (h, e) = hom_ext(&v, &w).unwrap();
        prop_assert_eq!(h as i64 - e as i64, euler_form(q, a, b));
    }

    #[test]
    fn pairing_vanishes_iff_hom(k in 1usize..=2, seed in any::<u64>()) {
        let v = random_rep(3, DimVec::new(k, 2 * k), seed, 2).unwrap();
        let w = random_rep(3, DimVec::new(k, k), seed.wrapping_add(7), 2).unwrap();
        let (h, e) = hom_ext(&v, &w).unwrap();
        prop_assert_eq!(h, e);
        prop_assert_eq!(c_pair(&v, &w).unwrap().is_zero(), h > 0);
    }

    #[test]
    fn reflection_dimensions(k in 1usize..=3, seed in any::<u64>()) {
        let v = random_rep(3, DimVec::new(k, k), seed, 3).unwrap();
        if let Ok(up) = reflect(&v) {
            prop_assert_eq!(up.dim(), DimVec::new(k, 2 * k));
            let back = reflect_inverse(&up).unwrap();
            prop_assert_eq!(back.dim(), v.dim());
        }
    }

    #[test]
    fn ideal_sheaf_euler_characteristic(p in (-3i64..=3, -3i64..=3, 1i64..=3), k in -4i64..=6) {
        let v: BundleRep = ideal_sheaf(&[p.0, p.1, p.2]).unwrap();
        let c = coh_twist(&v, k).unwrap();
        prop_assert_eq!(c.euler_characteristic(), (k + 1) * (k + 2) / 2 - 1);
    }

    #[test]
    fn eps_rank_is_slope_denominator(p in 0i64..=64, q in 0u32..=6) {
        let e = drezet::eps(&Dyadic::new(p, q));
        prop_assert_eq!(e.slope.denom(), &e.rank);
    }
}
