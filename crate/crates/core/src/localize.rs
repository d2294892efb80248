//! Measuring qubit 3 of a noisy GHZ state, and the closed-form description of
//! the collapsed two-qubit states.
//!
//! Every collapsed state in the amplitude-damping family is an "X state":
//! populations `γ, κ, τ, η` on `|00>, |01>, |10>, |11>` and a single coherence
//! `ξ` between `|00>` and `|11>`. [`CollapsedCoefficients`] carries those five
//! numbers unnormalized, so their sum is the outcome probability.

use serde::Serialize;

use crate::channels::{apply_local, depolarizing, DecoherenceParams};
use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, DensityMatrix, PureState, C64};
use crate::states::{basis_kets, ghz3, MeasurementBasis};

/// Below this probability an outcome is treated as impossible and no
/// collapsed state is produced.
pub const ZERO_PROBABILITY: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    /// `+1` or `−1`.
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        }
    }

    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

/// One branch of a measurement on qubit 3.
#[derive(Clone, Debug)]
pub struct LocalizationOutcome {
    pub label: Outcome,
    pub probability: f64,
    /// `None` when `probability < ZERO_PROBABILITY`.
    pub collapsed: Option<DensityMatrix>,
}

/// The GHZ state after amplitude damping `d_i` on qubit `i`.
pub fn amplitude_damped_ghz(p: &DecoherenceParams) -> Result<DensityMatrix> {
    let [a, b, c] = p.amplitude_channels()?;
    apply_local(&ghz3().projector(), &[Some(&a), Some(&b), Some(&c)])
}

/// The GHZ state after depolarizing every qubit with the same strength.
pub fn depolarized_ghz(d: f64) -> Result<DensityMatrix> {
    let ch = depolarizing(d)?;
    apply_local(&ghz3().projector(), &[Some(&ch), Some(&ch), Some(&ch)])
}

/// `Tr_3[(I ⊗ I ⊗ |k><k|) ρ]` for a three-qubit operator.
pub fn collapse_unnormalized(rho: &DensityMatrix, ket: &PureState) -> Result<ComplexMatrix> {
    if rho.qubits() != 3 {
        return Err(Error::UnsupportedRegister(rho.qubits()));
    }
    if ket.qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: ket.amplitudes().len(),
        });
    }
    let k = ket.amplitudes();
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..4 {
        for j in 0..4 {
            let mut s = C64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    s += k[b].conj() * rho.get(2 * i + b, 2 * j + a) * k[a];
                }
            }
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// Measures qubit 3 in `b` and returns the `+` and `−` branches in that order.
pub fn measure_qubit3(rho: &DensityMatrix, b: &MeasurementBasis) -> Result<[LocalizationOutcome; 2]> {
    let (plus, minus) = basis_kets(b);
    let branch = |label, ket: &PureState| -> Result<LocalizationOutcome> {
        let unnorm = collapse_unnormalized(rho, ket)?;
        let probability = unnorm.trace().re;
        let collapsed = if probability < ZERO_PROBABILITY {
            None
        } else {
            Some(DensityMatrix::normalized(unnorm)?)
        };
        Ok(LocalizationOutcome {
            label,
            probability: probability.max(0.0),
            collapsed,
        })
    };
    Ok([branch(Outcome::Plus, &plus)?, branch(Outcome::Minus, &minus)?])
}

/// Unnormalized X-state populations and coherence of a collapsed state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CollapsedCoefficients {
    pub gamma: f64,
    pub kappa: f64,
    pub tau: f64,
    pub eta: f64,
    /// The `<00|·|11>` entry; carries the minus sign on the `−` branch.
    #[serde(skip)]
    pub xi: C64,
}

impl CollapsedCoefficients {
    /// `γ + κ + τ + η`, the outcome probability.
    pub fn probability(&self) -> f64 {
        self.gamma + self.kappa + self.tau + self.eta
    }

    /// The unnormalized collapsed operator.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::diag(&[self.gamma, self.kappa, self.tau, self.eta]).expect("4x4");
        m.set(0, 3, self.xi);
        m.set(3, 0, self.xi.conj());
        m
    }

    fn normalizer(&self) -> Option<f64> {
        let p = self.probability();
        (p >= ZERO_PROBABILITY).then_some(p)
    }

    /// Smaller eigenvalue of the `{|01>, |10>}` block of the partial transpose,
    /// `(κ + τ − √((κ−τ)² + 4|ξ|²)) / 2P`. This is the only partial-transpose
    /// eigenvalue that can go negative.
    pub fn coherence_block_eigenvalue(&self) -> Option<f64> {
        let p = self.normalizer()?;
        let (k, t) = (self.kappa, self.tau);
        let disc = ((k - t) * (k - t) + 4.0 * self.xi.norm_sqr()).sqrt();
        Some((k + t - disc) / (2.0 * p))
    }

    /// Minimum over all four partial-transpose eigenvalues.
    pub fn min_pt_eigenvalue(&self) -> Option<f64> {
        let p = self.normalizer()?;
        let block = self.coherence_block_eigenvalue()?;
        Some(block.min(self.gamma / p).min(self.eta / p))
    }

    pub fn negativity(&self) -> Option<f64> {
        Some((-2.0 * self.coherence_block_eigenvalue()?).max(0.0))
    }

    /// `1/4 + (4|ξ| + γ + η − κ − τ) / 4P`: overlap with the best phased
    /// `|00> + e^{iα}|11>` state.
    pub fn fef_even_parity(&self) -> Option<f64> {
        let p = self.normalizer()?;
        Some(0.25 + (4.0 * self.xi.norm() + self.gamma + self.eta - self.kappa - self.tau) / (4.0 * p))
    }

    /// `(κ + τ) / 2P`: overlap with the best `|01> + e^{iα}|10>` state.
    pub fn fef_odd_parity(&self) -> Option<f64> {
        let p = self.normalizer()?;
        Some((self.kappa + self.tau) / (2.0 * p))
    }

    /// Fully entangled fraction of the X state: the larger of the even- and
    /// odd-parity overlaps. The odd branch only wins when the zz correlation
    /// is below `−2|ξ|/P`, which needs `(2d1−1)(2d2−1) < 0`.
    pub fn fef(&self) -> Option<f64> {
        Some(self.fef_even_parity()?.max(self.fef_odd_parity()?))
    }
}

fn half_angle_weights(theta: f64, label: Outcome) -> (f64, f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    match label {
        Outcome::Plus => (c * c, s * s),
        Outcome::Minus => (s * s, c * c),
    }
}

/// Closed-form `P±` under amplitude damping: `1/2 ± (d3/2) cos θ`.
pub fn amp_probability(p: &DecoherenceParams, theta: f64, label: Outcome) -> f64 {
    0.5 + label.sign() * 0.5 * p.d3() * theta.cos()
}

/// Closed-form collapsed-state coefficients under amplitude damping.
pub fn amp_coefficients(p: &DecoherenceParams, b: &MeasurementBasis, label: Outcome) -> CollapsedCoefficients {
    let [d1, d2, d3] = p.strengths();
    let [b1, b2, b3] = p.complements();
    let (w_same, w_flip) = half_angle_weights(b.theta(), label);
    let (s, c) = (b.theta() / 2.0).sin_cos();
    let xi = C64::from_polar(0.5 * (b1 * b2 * b3).sqrt() * s * c, b.phi());
    CollapsedCoefficients {
        gamma: 0.5 * (1.0 + d1 * d2 * d3) * w_same + 0.5 * d1 * d2 * b3 * w_flip,
        kappa: 0.5 * d1 * b2 * d3 * w_same + 0.5 * d1 * b2 * b3 * w_flip,
        tau: 0.5 * b1 * d2 * d3 * w_same + 0.5 * b1 * d2 * b3 * w_flip,
        eta: 0.5 * b1 * b2 * d3 * w_same + 0.5 * b1 * b2 * b3 * w_flip,
        xi: xi * label.sign(),
    }
}

/// `μˢ±` for `d1 = d2 = d3 = d`:
/// `(d̄/2P±)(d² w± + d d̄ w∓ − √d̄ sin(θ/2)cos(θ/2))` with `w+ = cos²(θ/2)`, `w− = sin²(θ/2)`.
/// `None` if the outcome is impossible.
pub fn mu_symmetric(d: f64, theta: f64, label: Outcome) -> Option<f64> {
    let dbar = 1.0 - d;
    let p = 0.5 + label.sign() * 0.5 * d * theta.cos();
    if p < ZERO_PROBABILITY {
        return None;
    }
    let (w_same, w_flip) = half_angle_weights(theta, label);
    let (s, c) = (theta / 2.0).sin_cos();
    Some(dbar / (2.0 * p) * (d * d * w_same + d * dbar * w_flip - dbar.sqrt() * s * c))
}

/// Minimal partial-transpose eigenvalue after depolarizing all three qubits
/// with strength `d` and measuring qubit 3 at angle `θ`; the same for both
/// outcomes: `2(3−2d)d/9 − |3−4d|³ sin θ / 54`.
pub fn depolarized_lambda(d: f64, theta: f64) -> f64 {
    2.0 * (3.0 - 2.0 * d) * d / 9.0 - (3.0 - 4.0 * d).abs().powi(3) * theta.sin() / 54.0
}

/// Whether the depolarized collapsed state is entangled:
/// `sin θ > 12(3−2d)d / |3−4d|³`. Never satisfied at `d = 3/4`.
pub fn depolarized_condition(d: f64, theta: f64) -> bool {
    let gap = (3.0 - 4.0 * d).abs().powi(3);
    if gap == 0.0 {
        return false;
    }
    theta.sin() > 12.0 * (3.0 - 2.0 * d) * d / gap
}

/// Uniform-strength depolarizing: both outcomes occur with probability 1/2.
pub fn depolarized_probability() -> f64 {
    0.5
}

/// The unnormalized collapsed operator rebuilt from closed-form coefficients,
/// paired with the one obtained by applying the channels and measuring.
pub fn amp_unnormalized_pair(
    p: &DecoherenceParams,
    b: &MeasurementBasis,
    label: Outcome,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let rho = amplitude_damped_ghz(p)?;
    let (plus, minus) = basis_kets(b);
    let ket = match label {
        Outcome::Plus => plus,
        Outcome::Minus => minus,
    };
    Ok((
        amp_coefficients(p, b, label).to_matrix(),
        collapse_unnormalized(&rho, &ket)?,
    ))
}
