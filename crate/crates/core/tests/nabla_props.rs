//! Backward-difference calculus: exact operator identities on rational
//! sequences, derivative images of exactly known sources, and quadrature
//! cross-checks.

#![allow(clippy::needless_range_loop)]

use lapseq::exact::{binom_q, factorial, int, rat};
use lapseq::nabla::{self, FractionalOrder};
use lapseq::transform::{self, SourceFunction};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::FileFailurePersistence;

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

/// `1/(s-a)^{n+1}`, the image of `e^{at}`.
fn exp_image(a: &BigRational, s: &BigRational, len: usize) -> Vec<BigRational> {
    let r = (s - a).recip();
    (0..len).map(|n| num_traits::pow(r.clone(), n + 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: Some(Box::new(FileFailurePersistence::Direct("tests/nabla_props.proptest-regressions"))),
        ..ProptestConfig::with_cases(48)
    })]

    #[test]
    fn expansion_equals_iteration(s in nonzero_rational(), phi in prop::collection::vec(rational(), 11)) {
        for p in 0..=10 {
            let iterated = nabla::nabla_iterated(&phi, p, &s);
            for n in p..=10 {
                prop_assert_eq!(nabla::nabla_power(&phi, p, &s, n).unwrap(), iterated[n].clone());
            }
        }
    }

    #[test]
    fn unshift_inverts_the_index_shift(s in nonzero_rational(), phi in prop::collection::vec(rational(), 11)) {
        for p in 0..=10 {
            for n in p..=10 {
                prop_assert_eq!(nabla::unshift_via_nabla(&phi, p, &s, n).unwrap(), phi[n - p].clone());
            }
        }
    }

    #[test]
    fn derivative_images_of_exponentials_are_exact(a in rational(), gap in (1i64..=20, 1i64..=4), p in 0usize..=4) {
        let s = &a + rat(gap.0, gap.1);
        let phi = exp_image(&a, &s, 10);
        let init: Vec<BigRational> = (0..p).map(|j| num_traits::pow(a.clone(), j)).collect();
        let ap = num_traits::pow(a.clone(), p);
        for n in 0..10 {
            prop_assert_eq!(nabla::derivative_image(&phi, p, &s, n, &init).unwrap(), &ap * &phi[n]);
        }
    }

    #[test]
    fn monomial_times_derivative_of_exponential(a in rational(), gap in (1i64..=20, 1i64..=4), p in 0usize..=3, r in 0usize..=3) {
        let s = &a + rat(gap.0, gap.1);
        let phi = exp_image(&a, &s, 12);
        let init: Vec<BigRational> = (0..p).map(|j| num_traits::pow(a.clone(), j)).collect();
        // t^r a^p e^{at} has image a^p (n+1)_r / (s-a)^{n+r+1}
        for n in 0..8 {
            let rising = binom_q((n + r) as i64, r as i64) * BigRational::from_integer(factorial(r as u64));
            let expected = num_traits::pow(a.clone(), p) * rising * &phi[n + r];
            prop_assert_eq!(nabla::monomial_multiply_image(&phi, r, p, &s, n, &init).unwrap(), expected);
        }
    }
}

/// `q! C(n+q, q) / s^{n+q+1}`, the image of `t^q`.
fn power_image(q: usize, s: &BigRational, len: usize) -> Vec<BigRational> {
    let inv = s.recip();
    (0..len)
        .map(|n| {
            BigRational::from_integer(factorial(q as u64))
                * binom_q((n + q) as i64, q as i64)
                * num_traits::pow(inv.clone(), n + q + 1)
        })
        .collect()
}

#[test]
fn small_index_branch_agrees_with_the_padded_difference() {
    // t³ has vanishing derivatives of order < 3 at the origin, so both branches
    // must give the image of the derivative at every n, including n = p - 1 and p
    for s in [rat(1, 2), int(2), rat(7, 3)] {
        let phi = power_image(3, &s, 12);
        for p in 1..=3usize {
            let scale = BigRational::from_integer(factorial(3) / factorial((3 - p) as u64));
            let target = power_image(3 - p, &s, 12);
            for n in 0..10 {
                let got = nabla::derivative_image(&phi, p, &s, n, &vec![BigRational::zero(); p]).unwrap();
                assert_eq!(got, &scale * &target[n], "p = {p}, n = {n}");
            }
        }
    }
}

#[test]
fn derivative_and_monomial_images_match_quadrature() {
    let s = 2.5;
    let sin2 = SourceFunction::sin(2.0);
    let phi = transform::forward_transform(&sin2, s, 12, 1e-12).unwrap().values;
    let init = [0.0, 2.0, 0.0];
    let dsin = |p: usize| -> SourceFunction {
        let scale = 2f64.powi(p as i32);
        let phase = p as f64 * std::f64::consts::FRAC_PI_2;
        SourceFunction::new("derivative", move |t: f64| scale * (2.0 * t + phase).sin()).with_bound(scale)
    };
    for p in 1..=2usize {
        let direct = transform::forward_transform(&dsin(p), s, 8, 1e-12).unwrap().values;
        for n in 0..=8 {
            let v = nabla::derivative_image(&phi, p, &s, n, &init).unwrap();
            assert!((v - direct[n]).abs() < 1e-9, "p = {p}, n = {n}");
        }
        for r in 1..=2usize {
            let d = dsin(p);
            let g = SourceFunction::new("t^r f^(p)", move |t: f64| t.powi(r as i32) * d.eval(t));
            let direct = transform::forward_transform(&g, s, 6, 1e-12).unwrap().values;
            for n in 0..=6 {
                let v = nabla::monomial_multiply_image(&phi, r, p, &s, n, &init).unwrap();
                assert!((v - direct[n]).abs() < 1e-9, "r = {r}, p = {p}, n = {n}: {v} vs {}", direct[n]);
            }
        }
    }
}

#[test]
fn zero_order_fractional_image_is_the_identity() {
    let phi = [0.7, -0.2, 0.05, 1.5];
    let order = FractionalOrder::new(0.0).unwrap();
    for n in 0..4 {
        assert_eq!(nabla::fractional_image(&phi, order, 1.7, n).unwrap(), phi[n]);
    }
    assert!(nabla::fractional_image(&phi, FractionalOrder::new(1.5).unwrap(), 1.0, 0).is_err());
    assert!(FractionalOrder::new(-0.5).is_err());
}
