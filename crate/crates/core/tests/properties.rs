//! Property-based checks of the library's invariants.

mod common;

use proptest::prelude::*;
use symcov::covariation::{correlation_coefficient, kernel, CovariationParams};
use symcov::dependence::min_max_inequality;
use symcov::frac_deriv::{binomial_coefficient, binomial_series_partial, falling_factorial};
use symcov::series::{gaussian_moments, series_term, DEFAULT_MAX_TERMS};
use symcov::{
    linear_combination_covariation, linear_combination_covariation_via_pushforward,
    pushforward_linear, sample_vector, scale_parameter_series, symmetric_covariation, Error,
    MeasureSpec, SpectralMeasure, StableModel,
};

fn alpha() -> impl Strategy<Value = f64> {
    prop_oneof![Just(2.0), Just(1.0), 0.05f64..=2.0]
}

/// Planar symmetric measure from 1 to 8 (angle, weight) pairs.
fn planar_measure() -> impl Strategy<Value = SpectralMeasure> {
    prop::collection::vec((0.0f64..std::f64::consts::TAU, 0.01f64..2.0), 1..=8).prop_map(|pairs| {
        SpectralMeasure::from_pairs(2, pairs.into_iter().map(|(phi, w)| (common::planar(phi), w)))
            .unwrap()
            .symmetrize()
    })
}

fn planar_model() -> impl Strategy<Value = StableModel> {
    (alpha(), planar_measure()).prop_map(|(a, m)| StableModel::new(a, m).unwrap())
}

fn model_in(dim: usize) -> impl Strategy<Value = StableModel> {
    (alpha(), any::<u64>()).prop_map(move |(a, seed)| {
        common::model(&mut common::rng(seed), dim, 6, a)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kernel_is_symmetric_and_odd_in_sign(
        a in alpha(), beta in 0.0f64..5.0, m in 0u8..=1,
        s1 in -1.0f64..1.0, s2 in -1.0f64..1.0,
    ) {
        let p = CovariationParams::new(a, beta, m).unwrap();
        let k = kernel(&p, s1, s2);
        prop_assert_eq!(k, kernel(&p, s2, s1));
        let sign = if m == 1 { -1.0 } else { 1.0 };
        prop_assert_eq!(kernel(&p, s1, -s2), sign * k);
        prop_assert!(k.abs() <= s1.abs().max(s2.abs()).powf(a) * (1.0 + 1e-15));
    }

    #[test]
    fn kernel_is_homogeneous_of_degree_alpha(
        a in alpha(), beta in 0.0f64..4.0, m in 0u8..=1,
        s1 in -1.0f64..1.0, s2 in -1.0f64..1.0, c in 0.01f64..50.0,
    ) {
        let p = CovariationParams::new(a, beta, m).unwrap();
        let scaled = kernel(&p, c * s1, c * s2);
        let expected = c.powf(a) * kernel(&p, s1, s2);
        prop_assert!((scaled - expected).abs() <= 1e-13 * (1.0 + expected.abs()));
    }

    #[test]
    fn symmetrization_is_symmetric_and_mass_preserving(measure in planar_measure()) {
        prop_assert!(measure.is_symmetric());
        let twice = measure.symmetrize();
        prop_assert!(twice.is_symmetric());
        prop_assert!((twice.total_mass() - measure.total_mass()).abs() < 1e-12);
    }

    #[test]
    fn chf_is_a_probability_chf(model in planar_model(), t1 in -5.0f64..5.0, t2 in -5.0f64..5.0) {
        let phi = model.characteristic_function(&[t1, t2]).unwrap();
        prop_assert!(phi > 0.0 && phi <= 1.0);
        prop_assert_eq!(model.characteristic_function(&[0.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn scale_parameter_is_absolutely_homogeneous(
        model in planar_model(), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, c in -4.0f64..4.0,
    ) {
        let sigma = model.scale_parameter_direct(&[t1, t2]).unwrap();
        let scaled = model.scale_parameter_direct(&[c * t1, c * t2]).unwrap();
        prop_assert!((scaled - c.abs() * sigma).abs() <= 1e-12 * (1.0 + scaled));
    }

    #[test]
    fn covariation_symmetry_and_sign_flip_are_exact(
        model in planar_model(), beta in 0.0f64..4.0, m in 0u8..=1,
    ) {
        let base = symmetric_covariation(&model, beta, m).unwrap();
        let swapped = model.with_measure(model.measure().swap_coordinates(0, 1).unwrap()).unwrap();
        prop_assert_eq!(symmetric_covariation(&swapped, beta, m).unwrap(), base);
        let flipped = model.with_measure(model.measure().negate_coordinate(1).unwrap()).unwrap();
        let sign = if m == 1 { -1.0 } else { 1.0 };
        prop_assert_eq!(symmetric_covariation(&flipped, beta, m).unwrap(), sign * base);
    }

    #[test]
    fn self_covariation_does_not_depend_on_beta_or_m(a in alpha(), w in 0.1f64..3.0) {
        // X1 = X2: every atom has equal coordinates.
        let model = StableModel::new(a, common::proportional_measure(1.0, w)).unwrap();
        let reference = symmetric_covariation(&model, 0.0, 0).unwrap();
        for beta in [0.0, 1.0, 0.5 * a, a, a + 1.0] {
            for m in [0u8, 1] {
                prop_assert_eq!(symmetric_covariation(&model, beta, m).unwrap(), reference);
            }
        }
    }

    #[test]
    fn correlation_lies_in_unit_interval(
        model in planar_model(), frac in 0.0f64..=1.0, m in 0u8..=1,
    ) {
        let a = model.alpha();
        let beta = 0.5 * a + frac * 0.5 * a;
        match correlation_coefficient(&model, beta, m) {
            Ok(rho) => prop_assert!(rho.abs() <= 1.0 + 1e-12, "rho = {}", rho),
            Err(Error::Degenerate(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn gaussian_correlation_is_pearson(measure in planar_measure()) {
        let model = StableModel::new(2.0, measure).unwrap();
        let (v1, v2, cov) = gaussian_moments(&model).unwrap();
        prop_assume!(v1 > 1e-6 && v2 > 1e-6);
        let rho = correlation_coefficient(&model, 1.0, 1).unwrap();
        prop_assert!((rho - cov / (v1 * v2).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn two_paths_agree(
        model in prop_oneof![model_in(3), model_in(4)],
        coeffs in prop::collection::vec(-2.0f64..2.0, 8),
        beta in 0.0f64..3.0, m in 0u8..=1,
    ) {
        let d = model.dim();
        let (a, b) = (&coeffs[..d], &coeffs[4..4 + d]);
        let direct = linear_combination_covariation(&model, a, b, beta, m).unwrap();
        let pushed = linear_combination_covariation_via_pushforward(&model, a, b, beta, m).unwrap();
        prop_assert!((direct - pushed).abs() < 1e-12, "{} vs {}", direct, pushed);
    }

    #[test]
    fn pushforward_preserves_symmetry_and_dimension(
        model in model_in(3), coeffs in prop::collection::vec(-2.0f64..2.0, 6),
    ) {
        let image = pushforward_linear(&model, &coeffs[..3], &coeffs[3..], false).unwrap();
        prop_assert_eq!(image.model.dim(), 2);
        prop_assert!(image.model.measure().is_symmetric());
    }

    #[test]
    fn series_invariants(model in planar_model(), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let theta = [t1, t2];
        let tol = 1e-10;
        let e = match scale_parameter_series(&model, &theta, tol, DEFAULT_MAX_TERMS) {
            Ok(e) => e,
            // Near-ties converge too slowly to certify; nothing to check.
            Err(Error::Truncation(_)) => return Ok(()),
            Err(err) => return Err(TestCaseError::fail(err.to_string())),
        };
        let mut running = 0.0;
        for (k, term) in e.terms.iter().enumerate() {
            running += term;
            prop_assert_eq!(running, e.partial_sums[k]);
            let bound = binomial_coefficient(model.alpha(), k as u32).abs() * e.dominator;
            prop_assert!(term.abs() <= bound * (1.0 + 1e-12) + 1e-300);
        }
        prop_assert!(e.tail_bounds.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(e.converged && e.tail_bound <= tol);
        let direct = model.scale_parameter_pow(&theta).unwrap();
        prop_assert!((e.sum() - direct).abs() <= tol + 1e-13 * (1.0 + direct));
    }

    #[test]
    fn series_term_matches_inline_accumulation(
        model in planar_model(), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, k in 0u32..12,
    ) {
        let theta = [t1, t2];
        if let Ok(e) = scale_parameter_series(&model, &theta, 1e-300, k as usize + 1)
            .or_else(|err| match err { Error::Truncation(e) => Ok(*e), other => Err(other) })
        {
            let direct = series_term(&model, &theta, k).unwrap();
            match e.terms.get(k as usize) {
                Some(inline) => {
                    prop_assert!((direct - inline).abs() <= 1e-13 * (1.0 + e.dominator));
                }
                // Stopped early on a vanishing tail: later terms vanish too.
                None => prop_assert!(direct.abs() <= e.tail_bound),
            }
        }
    }

    #[test]
    fn falling_factorial_relates_to_binomial(a in -3.0f64..3.0, k in 0u32..20) {
        let factorial: f64 = (1..=k).map(f64::from).product();
        let lhs = falling_factorial(a, k) / factorial;
        prop_assert!((lhs - binomial_coefficient(a, k)).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn binomial_series_converges_inside_radius(
        a in 0.05f64..2.0, b in prop_oneof![-3.0f64..-0.5, 0.5f64..3.0], frac in -0.8f64..0.8,
    ) {
        let x = frac * b.abs();
        let exact = (x + b).abs().powf(a);
        let partial = binomial_series_partial(x, b, a, 400).unwrap();
        prop_assert!((partial - exact).abs() < 1e-9 * (1.0 + exact));
    }

    #[test]
    fn min_max_inequality_holds(x in -1e3f64..1e3, y in -1e3f64..1e3, p in 0.0f64..=4.0) {
        prop_assert!(min_max_inequality(x, y, p));
    }

    #[test]
    fn spec_round_trip(model in planar_model()) {
        let text = serde_json::to_string(&MeasureSpec::from_model(&model)).unwrap();
        let back = MeasureSpec::from_json(&text).unwrap().to_model().unwrap();
        prop_assert_eq!(back.alpha(), model.alpha());
        prop_assert_eq!(back.measure().merged(), model.measure().merged());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampling_is_deterministic(model in planar_model(), seed in any::<u64>()) {
        let first = sample_vector(&model, 500, seed).unwrap();
        let second = sample_vector(&model, 500, seed).unwrap();
        prop_assert_eq!(first, second);
    }
}
