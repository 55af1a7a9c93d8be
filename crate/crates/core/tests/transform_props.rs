//! Forward-transform invariants: positivity, monotone decay in `s`, growth
//! bounds, and the output formats.

use lapseq::quadrature::QuadOptions;
use lapseq::transform::{self, ClosedImage, ImageSeq, SourceFunction};
use proptest::prelude::*;
use proptest::test_runner::FileFailurePersistence;

fn nonnegative_sources(a: f64) -> Vec<SourceFunction> {
    vec![
        SourceFunction::exp(-a),
        SourceFunction::power(a),
        SourceFunction::power_exp(a, a),
        SourceFunction::constant(a),
        SourceFunction::linear_combination(vec![(1.0, SourceFunction::constant(1.0)), (1.0, SourceFunction::cos(a))]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: Some(Box::new(FileFailurePersistence::Direct("tests/transform_props.proptest-regressions"))),
        ..ProptestConfig::with_cases(24)
    })]

    #[test]
    fn images_of_nonnegative_sources_are_nonnegative_and_decay(
        a in 0.1f64..3.0,
        s in 0.2f64..5.0,
        ds in 0.05f64..2.0,
        n in 0usize..12,
    ) {
        let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-10, max_abs_error: f64::INFINITY, max_panels: 800 };
        for f in nonnegative_sources(a) {
            let lo = transform::forward_transform_with(&f, s, n, &opts).unwrap();
            let hi = transform::forward_transform_with(&f, s + ds, n, &opts).unwrap();
            for k in 0..=n {
                prop_assert!(lo.values[k] >= -lo.errors[k], "{} φ_{k}({s}) = {}", f.label, lo.values[k]);
                prop_assert!(lo.values[k] + lo.errors[k] + hi.errors[k] >= hi.values[k], "{} not decaying at n = {k}", f.label);
            }
        }
    }

    #[test]
    fn bounded_sources_respect_their_growth_bound(a in -2.0f64..2.0, t in 0.0f64..40.0) {
        let sources = [
            SourceFunction::exp(a),
            SourceFunction::sin(a),
            SourceFunction::cos(a),
            SourceFunction::constant(a),
            SourceFunction::exp(a).delay(1.5),
            SourceFunction::cos(2.0).exp_shift(a),
        ];
        for f in &sources {
            let m = f.bound.expect("bounded source");
            prop_assert!(f.eval(t).abs() <= m * (f.exp_order * t).exp() * (1.0 + 1e-12), "{} at t = {t}", f.label);
        }
    }

    #[test]
    fn exp_row_matches_quadrature(a in -2.0f64..2.0, offset in 0.3f64..4.0) {
        let s = a + offset;
        let image = ClosedImage::exp(a).unwrap();
        // φ_n reaches 1/0.3^11 here, so the target is relative
        let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-10, max_abs_error: f64::INFINITY, max_panels: 800 };
        let seq = transform::forward_transform_with(&SourceFunction::exp(a), s, 10, &opts).unwrap();
        for n in 0..=10 {
            let exact = image.eval(n, s);
            prop_assert!((seq.values[n] - exact).abs() <= 1e-10_f64.max(1e-8 * exact.abs()));
        }
    }
}

#[test]
fn unit_exponential_row_is_a_pure_power() {
    let image = ClosedImage::exp(0.0).unwrap();
    for n in 0..30 {
        for s in [0.5f64, 1.0, 3.0] {
            let expected = s.powi(-(n as i32) - 1);
            assert!((image.eval(n, s) - expected).abs() <= 1e-15 * expected);
        }
    }
}

#[test]
fn abscissa_at_or_below_growth_order_is_rejected() {
    assert!(transform::forward_transform(&SourceFunction::exp(2.0), 2.0, 3, 1e-8).is_err());
    assert!(transform::forward_transform(&SourceFunction::exp(2.0), 1.0, 3, 1e-8).is_err());
    assert!(transform::forward_transform(&SourceFunction::exp(2.0), 3.0, 3, 0.0).is_err());
}

#[test]
fn serialized_forms() {
    let seq = ImageSeq::exact(2.0, vec![0.5, 0.25]);
    let json: serde_json::Value = serde_json::to_value(&seq).unwrap();
    let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["s", "tol", "values"]);
    assert_eq!(json["values"][1], 0.25);
    let csv = seq.to_csv();
    assert!(csv.starts_with("n,phi_n\n0,"));
    assert_eq!(csv.lines().count(), 3);
}
