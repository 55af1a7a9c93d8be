//! Combinatorial identities: exact instances over random ranges, the two
//! constructions of the Legendre table, and the Laguerre image sign checked
//! by quadrature.

use lapseq::exact::{rat, rat_to_f64};
use lapseq::identities::{self, Identity};
use lapseq::laguerre::laguerre_eval;
use lapseq::transform::{self, SourceFunction};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::FileFailurePersistence;

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: Some(Box::new(FileFailurePersistence::Direct("tests/identities_props.proptest-regressions"))),
        ..ProptestConfig::with_cases(48)
    })]

    #[test]
    fn laguerre_identity_holds_for_any_positive_abscissa(m in 0usize..=40, n in 0usize..=40, s in (1i64..=30, 1i64..=7)) {
        let w = identities::verify_laguerre_identity(m, n, &rat(s.0, s.1)).unwrap();
        prop_assert!(w.holds());
    }

    #[test]
    fn legendre_identities_hold(m in 0usize..=60, j in 0usize..=60) {
        prop_assert!(identities::verify_identity_1(m).holds());
        prop_assert!(identities::verify_identity_2(m).holds());
        prop_assert!(identities::verify_identity_3(m, j.min(m)).holds());
    }

    #[test]
    fn mapped_legendre_is_legendre_of_the_mapped_argument(n in 0usize..=20, t in 0.0f64..6.0) {
        let x = 1.0 - 2.0 * (-t).exp();
        let direct = identities::legendre_eval(n, x);
        let mapped = identities::legendre_mapped_eval(n, t).unwrap();
        prop_assert!((direct - mapped).abs() <= 1e-12, "{direct} vs {mapped}");
    }
}

#[test]
fn table_constructions_agree_and_start_at_one() {
    let summed = identities::legendre_table(40);
    assert_eq!(summed, identities::legendre_table_by_expansion(40));
    for (n, row) in summed.iter().enumerate() {
        assert_eq!(row[0], BigRational::one(), "A_{n},0");
        assert!((identities::legendre_mapped_eval(n, 60.0).unwrap() - 1.0).abs() < 1e-12);
    }
    assert!(identities::legendre_a(3, 5).is_err());
}

#[test]
fn laguerre_image_sign_matches_quadrature() {
    // L_0 maps to 1/s^{n+1}; the sign pattern is (-1)^k inside the sum
    for (m, n, s) in [(0usize, 0usize, 2i64), (0, 3, 2), (1, 0, 1), (2, 1, 2), (3, 2, 3), (5, 4, 2)] {
        let exact = rat_to_f64(&identities::laguerre_image_term(m, n, &rat(s, 1)).unwrap());
        let f = SourceFunction::new(format!("L_{m}"), move |t: f64| laguerre_eval(m, t));
        let quad = transform::forward_transform(&f, s as f64, n, 1e-13).unwrap().values[n];
        assert!((exact - quad).abs() < 1e-12, "L_{m} image at n = {n}, s = {s}: {exact} vs {quad}");
    }
}

#[test]
fn short_sweeps_report_no_counterexamples() {
    for id in Identity::ALL {
        let report = identities::sweep(id, 12);
        assert!(report.all_passed, "{id:?}");
        assert!(report.counterexamples.is_empty());
        assert!(report.checked > 0);
    }
    assert_eq!(Identity::parse("bonnet"), Some(Identity::Bonnet));
    assert_eq!(Identity::parse("nope"), None);
}
