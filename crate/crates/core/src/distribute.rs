//! Sending a Bell pair straight through two damping channels (direct scheme)
//! versus sending two legs of a GHZ triple and localizing on the kept third
//! qubit (ancilla-assisted scheme).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::localize::{CollapsedCoefficients, ZERO_PROBABILITY};
use crate::qmat::C64;
use crate::states::MeasurementBasis;

/// Smallest `d` used when the third strength is given as a ratio `r = d3/d`.
pub const MIN_RATIO_D: f64 = 1e-6;
/// Measurement angle for ratio scans: close to, but below, `π/2`.
pub const DEFAULT_THETA_PRIME: f64 = 1.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DdsMeasures {
    pub negativity: f64,
    pub fef: f64,
    /// `(d1 d̄2 + d̄1 d2)/4 − √((d1−d2)² + 4 d̄1 d̄2)/4`.
    pub min_pt_eigenvalue: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdsMeasures {
    pub negativity: f64,
    pub fef: f64,
    pub p_plus: f64,
}

/// Direct scheme: `|B+>` with its qubits damped by `d1` and `d2`.
pub fn dds_measures(d1: f64, d2: f64) -> Result<DdsMeasures> {
    let c = dds_coefficients(check_unit("d1", d1)?, check_unit("d2", d2)?);
    let lambda =
        0.25 * (d1 * (1.0 - d2) + (1.0 - d1) * d2) - 0.25 * ((d1 - d2).powi(2) + 4.0 * (1.0 - d1) * (1.0 - d2)).sqrt();
    Ok(DdsMeasures {
        negativity: (-2.0 * lambda).max(0.0),
        fef: c.fef().expect("unit trace"),
        min_pt_eigenvalue: lambda,
    })
}

/// `(2 + 2√(d̄1 d̄2) + 2 d1 d2 − d1 − d2) / 4`. The even-parity overlap always
/// wins for a damped Bell pair, so this is the FEF for every `(d1, d2)`.
pub fn dds_fef_formula(d1: f64, d2: f64) -> f64 {
    0.25 * (2.0 + 2.0 * ((1.0 - d1) * (1.0 - d2)).sqrt() + 2.0 * d1 * d2 - d1 - d2)
}

fn dds_coefficients(d1: f64, d2: f64) -> CollapsedCoefficients {
    let (b1, b2) = (1.0 - d1, 1.0 - d2);
    CollapsedCoefficients {
        gamma: 0.5 * (1.0 + d1 * d2),
        kappa: 0.5 * d1 * b2,
        tau: 0.5 * b1 * d2,
        eta: 0.5 * b1 * b2,
        xi: C64::new(0.5 * (b1 * b2).sqrt(), 0.0),
    }
}

/// `κ'+ = (d d̄/2)(d3 cos²(θ/2) + d̄3 sin²(θ/2))` and `|ξ'| = (d̄/2)√d̄3 sin(θ/2)cos(θ/2)`.
pub fn ads_kappa_xi(d: f64, d3: f64, theta: f64) -> (f64, f64) {
    let dbar = 1.0 - d;
    let (s, c) = (theta / 2.0).sin_cos();
    let kappa = 0.5 * d * dbar * (d3 * c * c + (1.0 - d3) * s * s);
    let xi = 0.5 * dbar * (1.0 - d3).sqrt() * s * c;
    (kappa, xi)
}

/// Ancilla-assisted scheme, `+` outcome, with `d1 = d2 = d`:
/// `N'+ = max{0, 2(|ξ'| − κ'+)/P+}` and `F'+ = 1/2 + (|ξ'| − κ'+)/P+`.
///
/// The `−` outcome is the mirror image under `θ → π − θ`.
pub fn ads_measures(d: f64, d3: f64, theta: f64) -> Result<AdsMeasures> {
    check_unit("d", d)?;
    check_unit("d3", d3)?;
    MeasurementBasis::new(theta, 0.0)?;
    let p_plus = 0.5 + 0.5 * d3 * theta.cos();
    if p_plus < ZERO_PROBABILITY {
        return Err(Error::out_of_domain(
            "theta",
            theta,
            "P+ > 0 (no + outcome when d3 = 1, theta = pi)",
        ));
    }
    let (kappa, xi) = ads_kappa_xi(d, d3, theta);
    let gap = (xi - kappa) / p_plus;
    Ok(AdsMeasures {
        negativity: (2.0 * gap).max(0.0),
        fef: 0.5 + gap,
        p_plus,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonPoint {
    pub d: f64,
    pub theta: f64,
    pub d3: f64,
    pub n_dds: f64,
    pub n_ads_plus: f64,
    pub f_dds: f64,
    pub f_ads_plus: f64,
    pub delta_n: f64,
    pub delta_f: f64,
    pub p_plus: f64,
}

impl ComparisonPoint {
    pub fn new(d: f64, theta: f64, d3: f64) -> Result<Self> {
        let dds = dds_measures(d, d)?;
        let ads = ads_measures(d, d3, theta)?;
        Ok(ComparisonPoint {
            d,
            theta,
            d3,
            n_dds: dds.negativity,
            n_ads_plus: ads.negativity,
            f_dds: dds.fef,
            f_ads_plus: ads.fef,
            delta_n: ads.negativity - dds.negativity,
            delta_f: ads.fef - dds.fef,
            p_plus: ads.p_plus,
        })
    }
}

/// Evenly spaced values on `[start, end]`; one point means just `start`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(start: f64, end: f64, points: usize) -> Self {
        Axis { start, end, points }
    }

    pub fn fixed(value: f64) -> Self {
        Axis::new(value, value, 1)
    }

    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let step = (self.end - self.start) / (n - 1) as f64;
                (0..n)
                    .map(|i| {
                        if i == n - 1 {
                            self.end
                        } else {
                            self.start + step * i as f64
                        }
                    })
                    .collect()
            }
        }
    }
}

/// How the third qubit's strength is swept.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThirdAxis {
    D3(Axis),
    /// `d3 = r d`, with `d` clamped to at least [`MIN_RATIO_D`].
    Ratio(Axis),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub d: Axis,
    pub theta: Axis,
    pub third: ThirdAxis,
}

impl ScanGrid {
    pub fn len(&self) -> usize {
        let third = match self.third {
            ThirdAxis::D3(a) | ThirdAxis::Ratio(a) => a.points,
        };
        self.d.points * self.theta.points * third
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Every grid point, ordered by `d`, then `θ`, then the third axis.
/// Points are evaluated in parallel; the order does not depend on scheduling.
pub fn compare_scan(grid: &ScanGrid) -> Result<Vec<ComparisonPoint>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let ds = grid.d.values();
    let thetas = grid.theta.values();
    let (thirds, ratio) = match grid.third {
        ThirdAxis::D3(a) => (a.values(), false),
        ThirdAxis::Ratio(a) => (a.values(), true),
    };
    let (nt, nz) = (thetas.len(), thirds.len());
    (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (i, j, l) = (k / (nt * nz), (k / nz) % nt, k % nz);
            let (mut d, theta) = (ds[i], thetas[j]);
            let d3 = if ratio {
                d = d.max(MIN_RATIO_D);
                thirds[l] * d
            } else {
                thirds[l]
            };
            ComparisonPoint::new(d, theta, d3)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping, apply_local, DecoherenceParams};
    use crate::localize::{amplitude_damped_ghz, measure_qubit3};
    use crate::measures::entanglement_report;
    use crate::states::bell_plus;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn dds_pipeline(d1: f64, d2: f64) -> (f64, f64) {
        let (a, b) = (amplitude_damping(d1).unwrap(), amplitude_damping(d2).unwrap());
        let rho = apply_local(&bell_plus().projector(), &[Some(&a), Some(&b)]).unwrap();
        let r = entanglement_report(&rho).unwrap();
        (r.negativity, r.fef)
    }

    fn ads_pipeline(d: f64, d3: f64, theta: f64) -> (f64, f64, f64) {
        let rho = amplitude_damped_ghz(&DecoherenceParams::new(d, d, d3).unwrap()).unwrap();
        let [plus, _] = measure_qubit3(&rho, &MeasurementBasis::new(theta, 0.0).unwrap()).unwrap();
        let r = entanglement_report(&plus.collapsed.unwrap()).unwrap();
        (r.negativity, r.fef, plus.probability)
    }

    #[test]
    fn dds_symmetric_values() {
        let m = dds_measures(0.5, 0.5).unwrap();
        assert!((m.negativity - 0.25).abs() < 1e-15);
        assert!((m.fef - 0.625).abs() < 1e-15);
        let m = dds_measures(0.0, 0.0).unwrap();
        assert!((m.negativity - 1.0).abs() < 1e-15);
        assert!((m.fef - 1.0).abs() < 1e-15);
        for i in 0..=50 {
            let d = i as f64 / 50.0;
            let m = dds_measures(d, d).unwrap();
            let n = (1.0 - d) * (1.0 - d);
            assert!((m.negativity - n).abs() < 1e-14);
            assert!((m.fef - 0.5 * (1.0 + n)).abs() < 1e-14);
        }
    }

    #[test]
    fn dds_matches_pipeline() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..200 {
            let (d1, d2) = (rng.gen(), rng.gen());
            let (n, f) = dds_pipeline(d1, d2);
            let m = dds_measures(d1, d2).unwrap();
            assert!((m.negativity - n).abs() <= 1e-12);
            assert!((m.fef - f).abs() <= 1e-12);
            assert!((dds_fef_formula(d1, d2) - f).abs() <= 1e-12);
        }
    }

    #[test]
    fn dds_even_parity_always_wins() {
        for i in 0..=100 {
            for j in 0..=100 {
                let (d1, d2) = (i as f64 / 100.0, j as f64 / 100.0);
                let c = dds_coefficients(d1, d2);
                assert!(c.fef_even_parity().unwrap() >= c.fef_odd_parity().unwrap());
                assert!((dds_measures(d1, d2).unwrap().fef - dds_fef_formula(d1, d2)).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn ads_examples() {
        let m = ads_measures(0.0, 0.0, FRAC_PI_4).unwrap();
        assert!((m.negativity - FRAC_PI_4.sin()).abs() < 1e-15);
        for i in 0..=20 {
            let d = i as f64 / 20.0;
            let ads = ads_measures(d, 0.0, FRAC_PI_2).unwrap();
            let dds = dds_measures(d, d).unwrap();
            assert!((ads.negativity - dds.negativity).abs() <= 1e-12);
            assert!((ads.fef - dds.fef).abs() <= 1e-12);
        }
    }

    #[test]
    fn ads_matches_pipeline() {
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        for _ in 0..200 {
            let (d, d3) = (rng.gen::<f64>(), rng.gen::<f64>());
            let theta = rng.gen_range(0.0..=PI);
            let (n, f, p) = ads_pipeline(d, d3, theta);
            let m = ads_measures(d, d3, theta).unwrap();
            assert!((m.negativity - n).abs() <= 1e-12);
            assert!((m.fef - f).abs() <= 1e-12);
            assert!((m.p_plus - p).abs() <= 1e-12);
        }
    }

    #[test]
    fn separable_branch_has_fef_below_half() {
        // A flipped-sign reading of the zero-negativity branch, 1/2 + (κ' − |ξ'|)/P+,
        // would put a separable state above 1/2.
        let (d, d3, theta) = (0.3, 0.0, 3.0);
        let m = ads_measures(d, d3, theta).unwrap();
        assert_eq!(m.negativity, 0.0);
        let (kappa, xi) = ads_kappa_xi(d, d3, theta);
        let flipped = 0.5 + (kappa - xi) / m.p_plus;
        let (_, f, _) = ads_pipeline(d, d3, theta);
        assert!(f < 0.5);
        assert!((m.fef - f).abs() <= 1e-12);
        assert!((flipped - f).abs() > 0.1);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(dds_measures(1.1, 0.0).is_err());
        assert!(ads_measures(0.5, -0.1, 1.0).is_err());
        assert!(ads_measures(0.5, 0.1, 4.0).is_err());
        assert!(ads_measures(0.5, 1.0, PI).is_err());
    }

    #[test]
    fn delta_signs_agree_where_both_useful() {
        let grid = ScanGrid {
            d: Axis::new(0.0, 1.0, 41),
            theta: Axis::new(0.0, PI, 41),
            third: ThirdAxis::D3(Axis::new(0.0, 0.2, 5)),
        };
        for pt in compare_scan(&grid).unwrap() {
            assert!((pt.delta_n - (pt.n_ads_plus - pt.n_dds)).abs() <= 1e-14);
            assert!((pt.delta_f - (pt.f_ads_plus - pt.f_dds)).abs() <= 1e-14);
            if pt.n_ads_plus > 0.0 && pt.f_ads_plus > 0.5 {
                assert!(pt.delta_n.signum() == pt.delta_f.signum() || pt.delta_n.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn p_plus_grows_with_d3_below_half_pi() {
        for j in 0..20 {
            let theta = FRAC_PI_2 * j as f64 / 20.0;
            let ps: Vec<f64> = (0..=10)
                .map(|k| ads_measures(0.4, k as f64 / 10.0, theta).unwrap().p_plus)
                .collect();
            assert!(ps.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn no_advantage_past_half_pi_without_ancilla_noise() {
        for i in 0..=100 {
            let d = i as f64 / 100.0;
            for j in 1..=100 {
                let theta = FRAC_PI_2 + FRAC_PI_2 * j as f64 / 100.0;
                assert!(ComparisonPoint::new(d, theta, 0.0).unwrap().delta_n <= 1e-15);
            }
        }
    }

    #[test]
    fn scan_order_is_lexicographic() {
        let grid = ScanGrid {
            d: Axis::new(0.1, 0.9, 3),
            theta: Axis::new(0.5, 1.5, 4),
            third: ThirdAxis::Ratio(Axis::new(0.0, 0.1, 2)),
        };
        let pts = compare_scan(&grid).unwrap();
        assert_eq!(pts.len(), 24);
        let keys: Vec<(f64, f64, f64)> = pts.iter().map(|p| (p.d, p.theta, p.d3 / p.d)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
        assert_eq!(pts, compare_scan(&grid).unwrap());
    }

    #[test]
    fn ratio_scan_clamps_zero_strength() {
        let grid = ScanGrid {
            d: Axis::new(0.0, 0.5, 2),
            theta: Axis::fixed(DEFAULT_THETA_PRIME),
            third: ThirdAxis::Ratio(Axis::fixed(0.1)),
        };
        let pts = compare_scan(&grid).unwrap();
        assert_eq!(pts[0].d, MIN_RATIO_D);
        assert!((pts[0].d3 - 0.1 * MIN_RATIO_D).abs() < 1e-20);
    }

    #[test]
    fn empty_grid_is_rejected() {
        let grid = ScanGrid {
            d: Axis::new(0.0, 1.0, 0),
            theta: Axis::fixed(1.0),
            third: ThirdAxis::D3(Axis::fixed(0.0)),
        };
        assert_eq!(compare_scan(&grid).unwrap_err(), Error::EmptyGrid);
    }
}
