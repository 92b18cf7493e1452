use num_traits::Zero;
use proptest::prelude::*;
use tropaz_core::covers::{enumerate_covers, DimerCover};
use tropaz_core::kirchhoff::{laplacian_residuals, verify_exactness};
use tropaz_core::lattice::FundamentalDomain;
use tropaz_core::model::TropicalModel;
use tropaz_core::rational::{frac, int};
use tropaz_core::tropical_curve::leaf_lines_from_weights;

fn domain() -> impl Strategy<Value = FundamentalDomain> {
    (1usize..=2, 1usize..=2)
        .prop_flat_map(|(k, ell)| (Just(k), Just(ell), proptest::collection::vec(-40i64..=40, 4 * k * ell)))
        .prop_map(|(k, ell, weights)| {
            let mut it = weights.into_iter();
            FundamentalDomain::from_fn(k, ell, |_, _, _| int(it.next().unwrap())).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn maximizers_attain_the_tension(d in domain()) {
        let m = TropicalModel::from_domain(d).unwrap();
        let covers = enumerate_covers(&m.graph).unwrap();
        for c in &covers {
            prop_assert!(&c.energy <= m.table.estar(c.slope).unwrap());
            prop_assert_eq!(&DimerCover::new(c.edges.clone(), &m.graph).unwrap(), c);
        }
        for (mu, entry) in &m.table.entries {
            prop_assert!(!entry.maximizers.is_empty(), "{:?}", mu);
        }
    }

    #[test]
    fn smooth_models_satisfy_exact_invariants(d in domain(), a in 1i64..997, b in 1i64..997) {
        let m = TropicalModel::from_domain(d).unwrap();
        prop_assume!(m.genericity.smooth);
        let s = m.stages().unwrap();
        for v in 0..s.curve.vertices.len() {
            prop_assert_eq!(s.curve.balancing_defect(v), (0, 0));
        }
        prop_assert_eq!(s.curve.leaf_lines(), leaf_lines_from_weights(&m.domain));
        for (_, r) in laplacian_residuals(&m.subdivision, &s.curve, &s.fstar) {
            prop_assert!(r.is_zero());
        }
        prop_assert!(verify_exactness(&s.primal.form, &s.curve).exact());
        let (k, ell) = (m.domain.k() as i64, m.domain.ell() as i64);
        let action = m.action().unwrap();
        let (u, v) = (frac(-a, 997 * ell), frac(-b, 997 * k));
        let zeros = action.classify_zeros(&action.slopes(&u, &v));
        if !zeros.has_triple() {
            prop_assert_eq!(zeros.zero_count(), 2 * m.domain.k() * m.domain.ell());
        }
        for mu in m.subdivision.polygon.points() {
            prop_assert_eq!(action.facet(mu, &u, &v), action.facet_by_default_path(mu, &u, &v));
        }
    }
}
