//! One-dimensional searches: best measurement angle for an objective, the
//! noise strength where an objective dies, and the splitting of the `N_ave`
//! maximizer into a symmetric pair.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::DecoherenceParams;
use crate::error::{Error, Result};
use crate::localize::{depolarized_lambda, Outcome};
use crate::measures::{f_average, fef_closed_amp, n_average, negativity_closed_amp, USEFUL_FEF};
use crate::states::MeasurementBasis;

pub const DEFAULT_RESOLUTION: usize = 2001;
/// Final golden-section bracket width.
pub const THETA_TOL: f64 = 1e-10;
/// Final bisection bracket width for thresholds in `d`.
pub const D_TOL: f64 = 1e-12;
/// Argmaxes closer than this to `π/2` count as `π/2`.
pub const SPLIT_TOL: f64 = 1e-6;

const FLAT_TOL: f64 = 1e-15;
const POLISH_STEP: f64 = 1e-5;
const POLISH_SLACK: f64 = 1e-15;
const THRESHOLD_SCAN: usize = 1001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Objective {
    #[serde(rename = "n+")]
    NPlus,
    #[serde(rename = "n-")]
    NMinus,
    #[serde(rename = "nave")]
    NAve,
    #[serde(rename = "f+")]
    FPlus,
    #[serde(rename = "f-")]
    FMinus,
    #[serde(rename = "fave")]
    FAve,
    /// Negativity of either collapsed state under uniform depolarizing noise.
    #[serde(rename = "ndep")]
    DepolarizedN,
}

impl Objective {
    pub const ALL: [Objective; 7] = [
        Objective::NPlus,
        Objective::NMinus,
        Objective::NAve,
        Objective::FPlus,
        Objective::FMinus,
        Objective::FAve,
        Objective::DepolarizedN,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Objective::NPlus => "n+",
            Objective::NMinus => "n-",
            Objective::NAve => "nave",
            Objective::FPlus => "f+",
            Objective::FMinus => "f-",
            Objective::FAve => "fave",
            Objective::DepolarizedN => "ndep",
        }
    }

    pub fn is_fef(self) -> bool {
        matches!(self, Objective::FPlus | Objective::FMinus | Objective::FAve)
    }

    /// Level below which the objective stops being useful: zero for
    /// negativities, `1/2` for FEFs.
    pub fn baseline(self) -> f64 {
        if self.is_fef() {
            USEFUL_FEF
        } else {
            0.0
        }
    }

    fn check(self, p: &DecoherenceParams) -> Result<()> {
        if self == Objective::DepolarizedN && !p.is_symmetric() {
            return Err(Error::out_of_domain(
                "d2",
                p.d2(),
                "equal strengths for the depolarizing model",
            ));
        }
        Ok(())
    }

    /// Value at `(p, θ)` with `φ = 0`; `None` if the conditioning outcome is impossible.
    ///
    /// Depolarizing reads its strength from `d1`.
    pub fn evaluate(self, p: &DecoherenceParams, theta: f64) -> Option<f64> {
        let b = MeasurementBasis::new(theta.clamp(0.0, PI), 0.0).ok()?;
        match self {
            Objective::NPlus => negativity_closed_amp(p, &b, Outcome::Plus),
            Objective::NMinus => negativity_closed_amp(p, &b, Outcome::Minus),
            Objective::NAve => Some(n_average(p, &b)),
            Objective::FPlus => fef_closed_amp(p, &b, Outcome::Plus),
            Objective::FMinus => fef_closed_amp(p, &b, Outcome::Minus),
            Objective::FAve => Some(f_average(p, &b)),
            Objective::DepolarizedN => Some((-2.0 * depolarized_lambda(p.d1(), b.theta())).max(0.0)),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "");
        let found = match key.as_str() {
            "n+" | "nplus" => Objective::NPlus,
            "n-" | "nminus" => Objective::NMinus,
            "nave" | "navg" => Objective::NAve,
            "f+" | "fplus" => Objective::FPlus,
            "f-" | "fminus" => Objective::FMinus,
            "fave" | "favg" => Objective::FAve,
            "ndep" | "depol" | "depolarizedn" => Objective::DepolarizedN,
            _ => return Err(Error::UnknownObjective(s.to_owned())),
        };
        Ok(found)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub objective: Objective,
    pub best_theta: f64,
    pub best_value: f64,
    /// The coarse grid, skipping angles where the objective is undefined.
    pub grid: Vec<(f64, f64)>,
    /// The objective is constant on the grid; `best_theta` is the left end.
    pub flat: bool,
}

impl ScanResult {
    pub fn grid_max(&self) -> f64 {
        self.grid.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Best `θ ∈ [0, π]`; see [`optimize_theta_in`].
pub fn optimize_theta(objective: Objective, p: &DecoherenceParams, resolution: usize) -> Result<ScanResult> {
    optimize_theta_in(objective, p, 0.0, PI, resolution)
}

/// Coarse grid of `resolution` points on `[lo, hi]`, then golden-section
/// search between the neighbours of the best grid point down to
/// [`THETA_TOL`], then a parabolic polish. Ties go to the smaller angle.
pub fn optimize_theta_in(
    objective: Objective,
    p: &DecoherenceParams,
    lo: f64,
    hi: f64,
    resolution: usize,
) -> Result<ScanResult> {
    objective.check(p)?;
    if !(0.0..=PI).contains(&lo) || !(0.0..=PI).contains(&hi) || lo >= hi {
        return Err(Error::out_of_domain("theta range", hi - lo, "0 <= lo < hi <= pi"));
    }
    if resolution < 3 {
        return Err(Error::EmptyGrid);
    }
    let step = (hi - lo) / (resolution - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..resolution)
        .into_par_iter()
        .filter_map(|i| {
            let theta = if i == resolution - 1 { hi } else { lo + step * i as f64 };
            objective.evaluate(p, theta).map(|v| (theta, v))
        })
        .collect();
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }

    let (mut best_i, mut grid_min) = (0, f64::INFINITY);
    for (i, &(_, v)) in grid.iter().enumerate() {
        if v > grid[best_i].1 {
            best_i = i;
        }
        grid_min = grid_min.min(v);
    }
    let (coarse_theta, coarse_value) = grid[best_i];
    if coarse_value - grid_min <= FLAT_TOL {
        return Ok(ScanResult {
            objective,
            best_theta: grid[0].0,
            best_value: grid[0].1,
            grid,
            flat: true,
        });
    }

    let f = |theta: f64| objective.evaluate(p, theta).unwrap_or(f64::NEG_INFINITY);
    let a = (coarse_theta - step).max(lo);
    let b = (coarse_theta + step).min(hi);
    let (mut theta, mut value) = golden_section_max(f, a, b, THETA_TOL);
    for _ in 0..2 {
        let polished = parabolic_polish(f, theta, lo, hi);
        let v = f(polished);
        // near the peak the two values differ only by evaluation noise; the
        // vertex is the better argmax unless it is clearly lower
        if v >= value - POLISH_SLACK {
            theta = polished;
            value = v;
        }
    }
    if value < coarse_value {
        theta = coarse_theta;
        value = coarse_value;
    }
    Ok(ScanResult {
        objective,
        best_theta: theta,
        best_value: value,
        grid,
        flat: false,
    })
}

/// Maximizes `f` on `[a, b]`, returning the best point evaluated.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(a, f(a)), (c, fc), (mid, f(mid)), (d, fd), (b, f(b))]
        .into_iter()
        .fold((mid, f(mid)), |best, cand| if cand.1 > best.1 { cand } else { best })
}

// Golden section resolves the argmax only to ~sqrt(eps) because the peak is
// quadratically flat; the vertex of a symmetric three-point parabola does not
// depend on comparing nearly-equal values.
fn parabolic_polish(f: impl Fn(f64) -> f64, x: f64, lo: f64, hi: f64) -> f64 {
    let h = POLISH_STEP;
    if x - h < lo || x + h > hi {
        return x;
    }
    let (fm, f0, fp) = (f(x - h), f(x), f(x + h));
    let curvature = fp - 2.0 * f0 + fm;
    if curvature.is_nan() || curvature >= 0.0 {
        return x;
    }
    let shift = h * (fp - fm) / (2.0 * curvature);
    if shift.abs() > h {
        return x;
    }
    x - shift
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub objective: Objective,
    pub theta: f64,
    pub d_star: f64,
    pub bracket_width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ThresholdOutcome {
    Found(ThresholdResult),
    /// The objective never crosses its baseline when `d` runs over `[0, 1]`.
    NoThreshold {
        objective: Objective,
        theta: f64,
        value_at_zero: f64,
        value_at_one: f64,
    },
}

impl ThresholdOutcome {
    pub fn found(&self) -> Option<&ThresholdResult> {
        match self {
            ThresholdOutcome::Found(r) => Some(r),
            ThresholdOutcome::NoThreshold { .. } => None,
        }
    }
}

fn symmetric_value(objective: Objective, d: f64, theta: f64) -> f64 {
    let p = DecoherenceParams::symmetric(d).expect("d in [0, 1]");
    objective.evaluate(&p, theta).unwrap_or(f64::NEG_INFINITY)
}

/// Smallest uniform strength `d` at which `objective(d, θ)` reaches its
/// baseline (zero negativity, or FEF `1/2`).
///
/// A coarse scan locates the first crossing, which is then bisected to
/// [`D_TOL`]; `d_star` is the bracket midpoint.
pub fn sudden_death_threshold(theta: f64, objective: Objective) -> Result<ThresholdOutcome> {
    MeasurementBasis::new(theta, 0.0)?;
    let base = objective.baseline();
    let alive = |d: f64| symmetric_value(objective, d, theta) > base;
    let ds: Vec<f64> = (0..THRESHOLD_SCAN)
        .map(|i| i as f64 / (THRESHOLD_SCAN - 1) as f64)
        .collect();
    let flags: Vec<bool> = ds.par_iter().map(|&d| alive(d)).collect();
    let no_threshold = ThresholdOutcome::NoThreshold {
        objective,
        theta,
        value_at_zero: symmetric_value(objective, 0.0, theta),
        value_at_one: symmetric_value(objective, 1.0, theta),
    };
    if !flags[0] {
        return Ok(no_threshold);
    }
    let Some(k) = flags.iter().position(|&x| !x) else {
        return Ok(no_threshold);
    };
    let (lo, hi) = bisect(alive, ds[k - 1], ds[k], D_TOL);
    Ok(ThresholdOutcome::Found(ThresholdResult {
        objective,
        theta,
        d_star: 0.5 * (lo + hi),
        bracket_width: hi - lo,
    }))
}

/// Shrinks `[lo, hi]` with `pred(lo)` true and `pred(hi)` false.
fn bisect(pred: impl Fn(f64) -> bool, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArgmaxSplit {
    Single {
        theta: f64,
        value: f64,
    },
    Pair {
        theta_low: f64,
        theta_high: f64,
        value: f64,
    },
    /// `N_ave` vanishes for every angle.
    Empty,
}

impl ArgmaxSplit {
    pub fn is_pair(&self) -> bool {
        matches!(self, ArgmaxSplit::Pair { .. })
    }
}

/// Maximizers of `N_ave` over `θ` under uniform amplitude damping `d`.
///
/// Each half `[0, π/2]`, `[π/2, π]` is optimized separately; a pair is
/// reported when the interior maximum beats `N_ave(π/2)` and sits more
/// than [`SPLIT_TOL`] away from it.
pub fn nave_argmax_split(d: f64) -> Result<ArgmaxSplit> {
    let p = DecoherenceParams::symmetric(d)?;
    let low = optimize_theta_in(Objective::NAve, &p, 0.0, FRAC_PI_2, DEFAULT_RESOLUTION)?;
    if low.flat && low.best_value <= 0.0 {
        return Ok(ArgmaxSplit::Empty);
    }
    let centre = Objective::NAve.evaluate(&p, FRAC_PI_2).unwrap_or(0.0);
    if low.best_value <= centre || (low.best_theta - FRAC_PI_2).abs() <= SPLIT_TOL {
        return Ok(ArgmaxSplit::Single {
            theta: FRAC_PI_2,
            value: centre,
        });
    }
    let high = optimize_theta_in(Objective::NAve, &p, FRAC_PI_2, PI, DEFAULT_RESOLUTION)?;
    Ok(ArgmaxSplit::Pair {
        theta_low: low.best_theta,
        theta_high: high.best_theta,
        value: low.best_value.max(high.best_value),
    })
}

/// Uniform strength where the `N_ave` maximizer leaves `π/2`, bisected on
/// `nave_argmax_split(d).is_pair()` inside `[lo, hi]` to width `tol`.
pub fn nave_split_critical_d(lo: f64, hi: f64, tol: f64) -> Result<ThresholdResult> {
    let split = |d: f64| nave_argmax_split(d).map(|s| s.is_pair());
    if split(lo)? || !split(hi)? {
        return Err(Error::out_of_domain(
            "d bracket",
            hi,
            "single maximizer at lo, pair at hi",
        ));
    }
    let (lo, hi) = bisect(|d| !split(d).unwrap_or(false), lo, hi, tol);
    Ok(ThresholdResult {
        objective: Objective::NAve,
        theta: FRAC_PI_2,
        d_star: 0.5 * (lo + hi),
        bracket_width: hi - lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::f_average_symmetric;

    fn sym(d: f64) -> DecoherenceParams {
        DecoherenceParams::symmetric(d).unwrap()
    }

    /// Independent bisection on `12(3−2d)d = |3−4d|³`, bracketed below `d = 3/4`.
    fn depolarized_root_oracle() -> f64 {
        let g = |d: f64| 12.0 * (3.0 - 2.0 * d) * d - (3.0 - 4.0 * d).abs().powi(3);
        let (mut lo, mut hi) = (0.0, 0.75);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn objective_labels_round_trip() {
        for o in Objective::ALL {
            assert_eq!(o.label().parse::<Objective>().unwrap(), o);
        }
        assert_eq!("N_ave".parse::<Objective>().unwrap(), Objective::NAve);
        assert!(matches!("x".parse::<Objective>(), Err(Error::UnknownObjective(_))));
    }

    #[test]
    fn noise_free_nave_peaks_at_half_pi() {
        let r = optimize_theta(Objective::NAve, &sym(0.0), DEFAULT_RESOLUTION).unwrap();
        assert!((r.best_theta - FRAC_PI_2).abs() < 1e-8);
        assert!((r.best_value - 1.0).abs() < 1e-15);
        for o in [Objective::NPlus, Objective::NMinus, Objective::FAve] {
            let r = optimize_theta(o, &sym(0.0), DEFAULT_RESOLUTION).unwrap();
            assert!((r.best_theta - FRAC_PI_2).abs() < 1e-8, "{o}: {}", r.best_theta);
        }
    }

    #[test]
    fn f_average_maximizer_is_half_pi() {
        for i in 1..=9 {
            let d = i as f64 / 10.0;
            let r = optimize_theta(Objective::FAve, &sym(d), DEFAULT_RESOLUTION).unwrap();
            assert!((r.best_theta - FRAC_PI_2).abs() < 1e-8, "d={d}: {}", r.best_theta);
            assert!((r.best_value - f_average_symmetric(d, FRAC_PI_2)).abs() < 1e-15);
        }
    }

    #[test]
    fn plus_and_minus_maximizers_shift_in_mirror() {
        let plus = optimize_theta(Objective::NPlus, &sym(0.3), DEFAULT_RESOLUTION).unwrap();
        let minus = optimize_theta(Objective::NMinus, &sym(0.3), DEFAULT_RESOLUTION).unwrap();
        assert!(plus.best_theta > FRAC_PI_2 + 1e-3);
        assert!(minus.best_theta < FRAC_PI_2 - 1e-3);
        assert!((plus.best_theta + minus.best_theta - PI).abs() < 1e-8);
        assert!((plus.best_value - minus.best_value).abs() < 1e-14);
        // stationary point of N+ solved at 40 digits
        assert!(
            (plus.best_theta - 1.620_123_620_102_606).abs() < 1e-8,
            "{}",
            plus.best_theta
        );
    }

    #[test]
    fn refinement_never_loses_to_the_grid() {
        for o in Objective::ALL {
            for d in [0.0, 0.1, 0.3, 0.55, 0.6, 0.62] {
                let r = optimize_theta(o, &sym(d), 401).unwrap();
                assert!(r.best_value >= r.grid_max() - 1e-12);
            }
        }
        let p = DecoherenceParams::new(0.2, 0.7, 0.4).unwrap();
        for o in Objective::ALL.into_iter().filter(|&o| o != Objective::DepolarizedN) {
            let r = optimize_theta(o, &p, 401).unwrap();
            assert!(r.best_value >= r.grid_max() - 1e-12);
        }
    }

    #[test]
    fn flat_objective_is_flagged() {
        let r = optimize_theta(Objective::NPlus, &sym(0.9), 101).unwrap();
        assert!(r.flat);
        assert_eq!(r.best_theta, 0.0);
        assert_eq!(r.best_value, 0.0);
    }

    #[test]
    fn depolarizing_needs_equal_strengths() {
        let p = DecoherenceParams::new(0.1, 0.2, 0.1).unwrap();
        assert!(optimize_theta(Objective::DepolarizedN, &p, 101).is_err());
    }

    #[test]
    fn depolarized_maximizer_is_half_pi() {
        for d in [0.05, 0.1, 0.15] {
            let r = optimize_theta(Objective::DepolarizedN, &sym(d), DEFAULT_RESOLUTION).unwrap();
            assert!((r.best_theta - FRAC_PI_2).abs() < 1e-8, "{}", r.best_theta);
        }
    }

    #[test]
    fn golden_threshold_for_plus_negativity() {
        let r = *sudden_death_threshold(FRAC_PI_2, Objective::NPlus)
            .unwrap()
            .found()
            .unwrap();
        let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
        assert!((r.d_star - golden).abs() < 1e-8);
        assert!(r.bracket_width <= 1e-9);
        assert!(symmetric_value(Objective::NPlus, r.d_star - 1e-7, FRAC_PI_2) > 0.0);
        assert_eq!(symmetric_value(Objective::NPlus, r.d_star + 1e-7, FRAC_PI_2), 0.0);
        assert!((f_average_symmetric(r.d_star, FRAC_PI_2) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn usefulness_threshold_of_f_average_is_golden_too() {
        let r = *sudden_death_threshold(FRAC_PI_2, Objective::FAve)
            .unwrap()
            .found()
            .unwrap();
        assert!((r.d_star - (5.0_f64.sqrt() - 1.0) / 2.0).abs() < 1e-8);
    }

    #[test]
    fn depolarized_threshold_matches_oracle() {
        let r = *sudden_death_threshold(FRAC_PI_2, Objective::DepolarizedN)
            .unwrap()
            .found()
            .unwrap();
        assert!((r.d_star - depolarized_root_oracle()).abs() < 1e-9);
    }

    #[test]
    fn no_threshold_when_already_dead() {
        let out = sudden_death_threshold(0.0, Objective::NPlus).unwrap();
        assert!(matches!(out, ThresholdOutcome::NoThreshold { .. }));
        assert!(symmetric_value(Objective::NPlus, 0.0, FRAC_PI_2) > 0.0);
    }

    #[test]
    fn nave_is_mirror_symmetric() {
        for i in 0..=20 {
            let p = sym(i as f64 / 20.0);
            for j in 0..=100 {
                let theta = PI * j as f64 / 100.0;
                let a = Objective::NAve.evaluate(&p, theta).unwrap();
                let b = Objective::NAve.evaluate(&p, PI - theta).unwrap();
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn nave_maximizer_splits_past_critical_strength() {
        assert!(matches!(nave_argmax_split(0.3).unwrap(), ArgmaxSplit::Single { theta, .. } if theta == FRAC_PI_2));
        let ArgmaxSplit::Pair {
            theta_low, theta_high, ..
        } = nave_argmax_split(0.62).unwrap()
        else {
            panic!("expected a pair at d = 0.62");
        };
        assert!((theta_low + theta_high - PI).abs() < 1e-8);
        assert!((FRAC_PI_2 - theta_low).abs() > SPLIT_TOL);
        // stationary point of the surviving branch solved at 40 digits
        assert!((theta_low - 1.333_941_740_941_104).abs() < 1e-8, "{theta_low}");
        assert!((theta_high - 1.807_650_912_648_689).abs() < 1e-8, "{theta_high}");
        assert_eq!(nave_argmax_split(0.7).unwrap(), ArgmaxSplit::Empty);
    }

    #[test]
    fn critical_split_strength() {
        let r = nave_split_critical_d(0.58, 0.62, 1e-7).unwrap();
        // where the off-centre branch peak overtakes N_ave(π/2), solved at 40 digits
        assert!((r.d_star - 0.610_114_678_578).abs() < 1e-6, "{}", r.d_star);
    }
}
