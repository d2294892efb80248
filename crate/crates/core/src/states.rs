//! Canonical states and the parametrized single-qubit measurement basis.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::qmat::{re, PureState, C64};

/// Projective basis `{|+_θ>, |−_θ>}` on one qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    /// `θ ∈ [0, π]`, `φ ∈ [0, 2π]`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
            return Err(Error::out_of_domain("theta", theta, "[0, pi]"));
        }
        if !(phi.is_finite() && (0.0..=2.0 * PI).contains(&phi)) {
            return Err(Error::out_of_domain("phi", phi, "[0, 2pi]"));
        }
        Ok(Self { theta, phi })
    }

    /// The `{|+>, |->}` basis (`θ = π/2`, `φ = 0`).
    pub fn hadamard() -> Self {
        Self {
            theta: FRAC_PI_2,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// `(|000> + |111>)/√2`.
pub fn ghz3() -> PureState {
    let mut amps = vec![re(0.0); 8];
    amps[0] = re(FRAC_1_SQRT_2);
    amps[7] = re(FRAC_1_SQRT_2);
    PureState::new(amps).expect("normalized")
}

/// `(|00> + |11>)/√2`.
pub fn bell_plus() -> PureState {
    PureState::new(vec![re(FRAC_1_SQRT_2), re(0.0), re(0.0), re(FRAC_1_SQRT_2)]).expect("normalized")
}

/// `(|00> − |11>)/√2`.
pub fn bell_minus() -> PureState {
    PureState::new(vec![re(FRAC_1_SQRT_2), re(0.0), re(0.0), re(-FRAC_1_SQRT_2)]).expect("normalized")
}

/// `|+_θ> = cos(θ/2)|0> + sin(θ/2)e^{iφ}|1>`,
/// `|−_θ> = sin(θ/2)e^{−iφ}|0> − cos(θ/2)|1>`.
pub fn basis_kets(b: &MeasurementBasis) -> (PureState, PureState) {
    let (s, c) = (b.theta / 2.0).sin_cos();
    let phase = C64::from_polar(1.0, b.phi);
    let plus = vec![re(c), phase * s];
    let minus = vec![phase.conj() * s, re(-c)];
    (
        PureState::new(plus).expect("normalized"),
        PureState::new(minus).expect("normalized"),
    )
}
