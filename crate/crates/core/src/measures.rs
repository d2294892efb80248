//! Negativity and fully entangled fraction of two-qubit states, numerically
//! and in closed form for the amplitude-damped GHZ family.

use serde::Serialize;

use crate::channels::{pauli, DecoherenceParams};
use crate::error::{Error, Result};
use crate::localize::{amp_coefficients, amp_probability, amplitude_damped_ghz, measure_qubit3, Outcome};
use crate::qmat::{eigvals_hermitian, kron, partial_transpose, singular_values_3x3, DensityMatrix, Real3};
use crate::states::MeasurementBasis;

/// FEF above this value beats any classical teleportation strategy.
pub const USEFUL_FEF: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub negativity: f64,
    pub fef: f64,
    pub min_pt_eigenvalue: f64,
    pub useful_for_teleportation: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Negativity {
    pub negativity: f64,
    pub min_pt_eigenvalue: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FefDecomposition {
    /// Descending singular values of the correlation matrix.
    pub singular_values: [f64; 3],
    pub det_sign: i8,
    /// `R_ij = Tr(ρ σ_i ⊗ σ_j)` with `σ = (X, Y, Z)`.
    pub correlation_matrix: Real3,
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.qubits() != 2 {
        return Err(Error::UnsupportedRegister(rho.qubits()));
    }
    Ok(())
}

/// `N(ρ) = max{0, −2 λ_min(ρ^{T_2})}`.
pub fn negativity(rho: &DensityMatrix) -> Result<Negativity> {
    require_two_qubits(rho)?;
    let min = eigvals_hermitian(&partial_transpose(rho, 2)?)?[0];
    Ok(Negativity {
        negativity: (-2.0 * min).max(0.0),
        min_pt_eigenvalue: min,
    })
}

/// Real correlation matrix `Tr(ρ σ_i ⊗ σ_j)`; the imaginary residue is dropped.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<Real3> {
    require_two_qubits(rho)?;
    let mut r = [[0.0; 3]; 3];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let op = kron(&pauli(i + 1), &pauli(j + 1))?;
            *entry = rho.matrix().matmul(&op).trace().re;
        }
    }
    Ok(r)
}

/// `F = (1 + μ1 + μ2 − sgn(det R) μ3) / 4`.
pub fn fef(rho: &DensityMatrix) -> Result<(f64, FefDecomposition)> {
    let r = correlation_matrix(rho)?;
    let sv = singular_values_3x3(&r);
    let [m1, m2, m3] = sv.values;
    let value = 0.25 * (1.0 + m1 + m2 - f64::from(sv.det_sign) * m3);
    Ok((
        value,
        FefDecomposition {
            singular_values: sv.values,
            det_sign: sv.det_sign,
            correlation_matrix: r,
        },
    ))
}

pub fn entanglement_report(rho: &DensityMatrix) -> Result<EntanglementReport> {
    let n = negativity(rho)?;
    let (f, _) = fef(rho)?;
    Ok(EntanglementReport {
        negativity: n.negativity,
        fef: f,
        min_pt_eigenvalue: n.min_pt_eigenvalue,
        useful_for_teleportation: f > USEFUL_FEF,
    })
}

/// Closed-form `N±` under amplitude damping; `None` for an impossible outcome.
pub fn negativity_closed_amp(p: &DecoherenceParams, b: &MeasurementBasis, label: Outcome) -> Option<f64> {
    amp_coefficients(p, b, label).negativity()
}

/// Closed-form `F±` under amplitude damping.
///
/// Reduces to `1/4 + (4|ξ| + γ + η − κ − τ)/4P` whenever
/// `(2d1−1)(2d2−1) ≥ 0`, and to `1/2 − μˢ±` when all strengths are equal.
pub fn fef_closed_amp(p: &DecoherenceParams, b: &MeasurementBasis, label: Outcome) -> Option<f64> {
    amp_coefficients(p, b, label).fef()
}

/// `N_ave = P+ N+ + P− N−`.
pub fn n_average(p: &DecoherenceParams, b: &MeasurementBasis) -> f64 {
    Outcome::BOTH
        .iter()
        .map(|&label| {
            let prob = amp_probability(p, b.theta(), label);
            negativity_closed_amp(p, b, label).map_or(0.0, |n| prob * n)
        })
        .sum()
}

/// `F_ave = P+ F+ + P− F−` from the closed-form `F±`.
pub fn f_average(p: &DecoherenceParams, b: &MeasurementBasis) -> f64 {
    Outcome::BOTH
        .iter()
        .map(|&label| {
            let prob = amp_probability(p, b.theta(), label);
            fef_closed_amp(p, b, label).map_or(0.0, |f| prob * f)
        })
        .sum()
}

/// `3/8 + √(d̄1 d̄2 d̄3) sin(θ/2) cos(θ/2) + (2d1−1)(2d2−1)/8`.
///
/// Equal to [`f_average`] whenever neither branch is in its odd-parity regime,
/// in particular whenever `(2d1−1)(2d2−1) ≥ 0`.
pub fn f_average_formula(p: &DecoherenceParams, theta: f64) -> f64 {
    let [b1, b2, b3] = p.complements();
    let (s, c) = (theta / 2.0).sin_cos();
    0.375 + (b1 * b2 * b3).sqrt() * s * c + (2.0 * p.d1() - 1.0) * (2.0 * p.d2() - 1.0) / 8.0
}

/// `3/8 + d̄^{3/2} sin(θ/2) cos(θ/2) + (2d−1)²/8` for `d1 = d2 = d3 = d`.
pub fn f_average_symmetric(d: f64, theta: f64) -> f64 {
    let dbar = 1.0 - d;
    let (s, c) = (theta / 2.0).sin_cos();
    0.375 + dbar * dbar.sqrt() * s * c + (2.0 * d - 1.0).powi(2) / 8.0
}

/// `N±` for `d3 = 0`, `d1 = d2 = d`:
/// `N+ = max{0, 2d̄ sin(θ/2)(cos(θ/2) − d sin(θ/2))}` and the mirror for `N−`.
pub fn negativity_closed_d3zero(d: f64, theta: f64, label: Outcome) -> f64 {
    let (s, c) = (theta / 2.0).sin_cos();
    let (a, b) = match label {
        Outcome::Plus => (s, c),
        Outcome::Minus => (c, s),
    };
    (2.0 * (1.0 - d) * a * (b - d * a)).max(0.0)
}

/// Entanglement of both branches computed by applying the channels, measuring
/// and diagonalizing. `None` marks an impossible outcome.
pub fn amp_reports_numeric(
    p: &DecoherenceParams,
    b: &MeasurementBasis,
) -> Result<[(Outcome, f64, Option<EntanglementReport>); 2]> {
    let rho = amplitude_damped_ghz(p)?;
    let [plus, minus] = measure_qubit3(&rho, b)?;
    let report = |o: &crate::localize::LocalizationOutcome| -> Result<_> {
        let r = match &o.collapsed {
            Some(state) => Some(entanglement_report(state)?),
            None => None,
        };
        Ok((o.label, o.probability, r))
    };
    Ok([report(&plus)?, report(&minus)?])
}

/// `(N_ave, F_ave)` via the numeric pipeline.
pub fn averages_numeric(p: &DecoherenceParams, b: &MeasurementBasis) -> Result<(f64, f64)> {
    let mut n = 0.0;
    let mut f = 0.0;
    for (_, prob, report) in amp_reports_numeric(p, b)? {
        if let Some(r) = report {
            n += prob * r.negativity;
            f += prob * r.fef;
        }
    }
    Ok((n, f))
}
