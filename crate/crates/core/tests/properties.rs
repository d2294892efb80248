use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use noise_localize::channels::DecoherenceParams;
use noise_localize::distribute::{ads_measures, dds_measures, ComparisonPoint};
use noise_localize::localize::{amp_coefficients, amp_probability, amplitude_damped_ghz, measure_qubit3, Outcome};
use noise_localize::measures::{entanglement_report, fef_closed_amp, n_average, negativity_closed_amp};
use noise_localize::optimize::{optimize_theta, Objective};
use noise_localize::qmat::{partial_trace, ComplexMatrix, DensityMatrix};
use noise_localize::states::MeasurementBasis;

fn strength() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn params() -> impl Strategy<Value = DecoherenceParams> {
    (strength(), strength(), strength()).prop_map(|(a, b, c)| DecoherenceParams::new(a, b, c).unwrap())
}

fn basis() -> impl Strategy<Value = MeasurementBasis> {
    (0.0..=PI, 0.0..=2.0 * PI).prop_map(|(t, f)| MeasurementBasis::new(t, f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn branch_probabilities_sum_to_one(p in params(), theta in 0.0..=PI) {
        let total = amp_probability(&p, theta, Outcome::Plus) + amp_probability(&p, theta, Outcome::Minus);
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn branches_recompose_the_marginal(p in params(), b in basis()) {
        let rho = amplitude_damped_ghz(&p).unwrap();
        let marginal = partial_trace(&rho, 3).unwrap();
        let mut sum = ComplexMatrix::zeros(4).unwrap();
        for o in measure_qubit3(&rho, &b).unwrap() {
            if let Some(c) = o.collapsed {
                let part = c.matrix().scale(o.probability.into());
                for i in 0..4 {
                    for j in 0..4 {
                        sum.set(i, j, sum.get(i, j) + part.get(i, j));
                    }
                }
            }
        }
        prop_assert!(sum.max_abs_diff(marginal.matrix()) <= 1e-12);
    }

    #[test]
    fn closed_form_matches_numeric_pipeline(p in params(), b in basis()) {
        let rho = amplitude_damped_ghz(&p).unwrap();
        for o in measure_qubit3(&rho, &b).unwrap() {
            let Some(numeric) = o.collapsed else { continue };
            let closed = amp_coefficients(&p, &b, o.label);
            let rebuilt = closed.to_matrix().scale((1.0 / closed.probability()).into());
            prop_assert!(rebuilt.max_abs_diff(numeric.matrix()) <= 1e-12);
            let report = entanglement_report(&numeric).unwrap();
            prop_assert!((negativity_closed_amp(&p, &b, o.label).unwrap() - report.negativity).abs() <= 1e-12);
            prop_assert!((fef_closed_amp(&p, &b, o.label).unwrap() - report.fef).abs() <= 1e-10);
        }
    }

    #[test]
    fn measures_ignore_the_azimuth(p in params(), theta in 0.0..=PI, phi in 0.0..=2.0 * PI) {
        let b0 = MeasurementBasis::new(theta, 0.0).unwrap();
        let b1 = MeasurementBasis::new(theta, phi).unwrap();
        for o in [Outcome::Plus, Outcome::Minus] {
            let (n0, n1) = (negativity_closed_amp(&p, &b0, o), negativity_closed_amp(&p, &b1, o));
            let (f0, f1) = (fef_closed_amp(&p, &b0, o), fef_closed_amp(&p, &b1, o));
            prop_assert_eq!(n0.is_some(), n1.is_some());
            if let (Some(n0), Some(n1), Some(f0), Some(f1)) = (n0, n1, f0, f1) {
                prop_assert!((n0 - n1).abs() <= 1e-12);
                prop_assert!((f0 - f1).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn fef_stays_in_range_for_mixtures(
        weights in prop::collection::vec(0.0..1.0f64, 4),
        amps in prop::collection::vec(-1.0..1.0f64, 32),
    ) {
        // Random mixture of four random pure states.
        let mut m = ComplexMatrix::zeros(4).unwrap();
        let total: f64 = weights.iter().sum::<f64>() + 1e-9;
        for (k, w) in weights.iter().enumerate() {
            let v: Vec<_> = (0..4)
                .map(|i| num_complex::Complex64::new(amps[8 * k + 2 * i], amps[8 * k + 2 * i + 1]))
                .collect();
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let outer = ComplexMatrix::outer(&v).unwrap().scale((w / (total * norm * norm)).into());
            for i in 0..4 {
                for j in 0..4 {
                    m.set(i, j, m.get(i, j) + outer.get(i, j));
                }
            }
        }
        let rho = DensityMatrix::normalized(m).unwrap();
        let r = entanglement_report(&rho).unwrap();
        prop_assert!((0.25 - 1e-12..=1.0 + 1e-12).contains(&r.fef));
        prop_assert!(r.negativity >= 0.0);
    }

    #[test]
    fn nave_is_mirror_symmetric(d in strength(), theta in 0.0..=PI) {
        let p = DecoherenceParams::symmetric(d).unwrap();
        let a = n_average(&p, &MeasurementBasis::new(theta, 0.0).unwrap());
        let b = n_average(&p, &MeasurementBasis::new(PI - theta, 0.0).unwrap());
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn ads_reduces_to_dds_on_the_equator(d in strength()) {
        let dds = dds_measures(d, d).unwrap();
        let ads = ads_measures(d, 0.0, FRAC_PI_2).unwrap();
        prop_assert!((dds.negativity - ads.negativity).abs() <= 1e-12);
        prop_assert!((dds.fef - ads.fef).abs() <= 1e-12);
    }

    #[test]
    fn deltas_agree_in_sign_when_both_useful(d in strength(), theta in 0.0..=FRAC_PI_2, d3 in strength()) {
        let Ok(pt) = ComparisonPoint::new(d, theta, d3) else { return Ok(()) };
        if pt.n_ads_plus > 0.0 && pt.f_ads_plus > 0.5 {
            prop_assert!(pt.delta_n * pt.delta_f >= -1e-12);
        }
    }

    #[test]
    fn p_plus_grows_with_d3(d in strength(), theta in 0.0..FRAC_PI_2 - 1e-3, a in strength(), b in strength()) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let p = |d3| ComparisonPoint::new(d, theta, d3).map(|pt| pt.p_plus);
        if let (Ok(pl), Ok(ph)) = (p(lo), p(hi)) {
            prop_assert!(ph >= pl - 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn refinement_never_loses_to_the_grid(d in strength(), which in 0usize..7) {
        let p = DecoherenceParams::symmetric(d).unwrap();
        let r = optimize_theta(Objective::ALL[which], &p, 201).unwrap();
        prop_assert!(r.best_value >= r.grid_max());
    }
}
