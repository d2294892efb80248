//! Single-qubit Kraus channels and their local application to a register.

use crate::error::{check_unit, Error, Result};
use crate::qmat::{c, kron, re, ComplexMatrix, DensityMatrix};

const COMPLETENESS_TOL: f64 = 1e-12;

/// Pauli matrix `σ_i` with `σ_0 = I`, `σ_1 = X`, `σ_2 = Y`, `σ_3 = Z`.
pub fn pauli(i: usize) -> ComplexMatrix {
    let z = re(0.0);
    let rows: [[_; 2]; 2] = match i {
        0 => [[re(1.0), z], [z, re(1.0)]],
        1 => [[z, re(1.0)], [re(1.0), z]],
        2 => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        3 => [[re(1.0), z], [z, re(-1.0)]],
        _ => panic!("pauli index {i} out of range"),
    };
    ComplexMatrix::from_rows(&[&rows[0], &rows[1]]).expect("2x2")
}

/// A single-qubit channel `ρ ↦ Σ K ρ K†`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    name: String,
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Rejects operator sets that are not 2×2 or violate `Σ K†K = I` by more than 1e-12.
    pub fn new(name: impl Into<String>, operators: Vec<ComplexMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidState("channel without Kraus operators".into()));
        }
        for k in &operators {
            if k.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    actual: k.dim(),
                });
            }
        }
        let channel = Self {
            name: name.into(),
            operators,
        };
        let residual = channel.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::InvalidState(format!(
                "Kraus operators are incomplete (residual {residual:e})"
            )));
        }
        Ok(channel)
    }

    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            operators: vec![pauli(0)],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `max |Σ K†K − I|` over entries.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2).expect("2x2");
        for k in &self.operators {
            sum = &sum + &k.adjoint().matmul(k);
        }
        sum.max_abs_diff(&pauli(0))
    }

    /// Applies the channel to a single-qubit operator.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.dim()).expect("dimension checked by caller");
        for k in &self.operators {
            out = &out + &k.conjugate(rho);
        }
        out
    }
}

/// Amplitude damping: `K0 = diag(1, √(1−d))`, `K1 = √d |0><1|`.
pub fn amplitude_damping(d: f64) -> Result<KrausChannel> {
    let d = check_unit("d", d)?;
    let k0 = ComplexMatrix::diag(&[1.0, (1.0 - d).sqrt()])?;
    let k1 = ComplexMatrix::from_real_rows(&[&[0.0, d.sqrt()], &[0.0, 0.0]])?;
    KrausChannel::new(format!("amplitude_damping({d})"), vec![k0, k1])
}

/// Depolarizing: `√p_i σ_i` with `p_0 = 1−d`, `p_{1,2,3} = d/3`.
pub fn depolarizing(d: f64) -> Result<KrausChannel> {
    let d = check_unit("d", d)?;
    let weights = [1.0 - d, d / 3.0, d / 3.0, d / 3.0];
    let ops = weights
        .iter()
        .enumerate()
        .map(|(i, &p)| pauli(i).scale(re(p.sqrt())))
        .collect();
    KrausChannel::new(format!("depolarizing({d})"), ops)
}

/// Per-qubit decoherence strengths `d1, d2, d3 ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoherenceParams {
    d: [f64; 3],
}

impl DecoherenceParams {
    pub fn new(d1: f64, d2: f64, d3: f64) -> Result<Self> {
        Ok(Self {
            d: [check_unit("d1", d1)?, check_unit("d2", d2)?, check_unit("d3", d3)?],
        })
    }

    /// `d1 = d2 = d3 = d`.
    pub fn symmetric(d: f64) -> Result<Self> {
        Self::new(d, d, d)
    }

    pub fn d1(&self) -> f64 {
        self.d[0]
    }

    pub fn d2(&self) -> f64 {
        self.d[1]
    }

    pub fn d3(&self) -> f64 {
        self.d[2]
    }

    pub fn strengths(&self) -> [f64; 3] {
        self.d
    }

    /// `1 − d_i` for each qubit.
    pub fn complements(&self) -> [f64; 3] {
        self.d.map(|d| 1.0 - d)
    }

    pub fn is_symmetric(&self) -> bool {
        self.d[0] == self.d[1] && self.d[1] == self.d[2]
    }

    pub fn amplitude_channels(&self) -> Result<[KrausChannel; 3]> {
        Ok([
            amplitude_damping(self.d[0])?,
            amplitude_damping(self.d[1])?,
            amplitude_damping(self.d[2])?,
        ])
    }
}

/// `ρ' = Σ (⊗_i K_i) ρ (⊗_i K_i)†` over every combination of Kraus indices.
/// `None` entries leave that qubit untouched.
pub fn apply_local(rho: &DensityMatrix, assignment: &[Option<&KrausChannel>]) -> Result<DensityMatrix> {
    let qubits = rho.qubits();
    if assignment.len() != qubits {
        return Err(Error::DimensionMismatch {
            expected: qubits,
            actual: assignment.len(),
        });
    }
    let identity = [pauli(0)];
    let per_qubit: Vec<&[ComplexMatrix]> = assignment
        .iter()
        .map(|ch| match ch {
            Some(ch) => ch.operators(),
            None => &identity[..],
        })
        .collect();

    let mut out = ComplexMatrix::zeros(rho.matrix().dim())?;
    let mut index = vec![0usize; qubits];
    loop {
        let mut op = per_qubit[0][index[0]].clone();
        for q in 1..qubits {
            op = kron(&op, &per_qubit[q][index[q]])?;
        }
        out = &out + &op.conjugate(rho.matrix());

        // odometer over Kraus indices, last qubit fastest
        let mut q = qubits;
        loop {
            if q == 0 {
                return Ok(DensityMatrix::from_trusted(out.hermitian_part()));
            }
            q -= 1;
            index[q] += 1;
            if index[q] < per_qubit[q].len() {
                break;
            }
            index[q] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{eigvals_hermitian, PureState};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ket(bits: &[f64]) -> DensityMatrix {
        PureState::new(bits.iter().map(|&x| re(x)).collect())
            .unwrap()
            .projector()
    }

    fn random_density(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
        let mut g = ComplexMatrix::zeros(n).unwrap();
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
        }
        DensityMatrix::normalized(g.matmul(&g.adjoint())).unwrap()
    }

    #[test]
    fn zero_strength_is_identity() {
        let ch = amplitude_damping(0.0).unwrap();
        assert_eq!(ch.operators()[0], pauli(0));
        assert_eq!(ch.operators()[1], ComplexMatrix::zeros(2).unwrap());
        let dep = depolarizing(0.0).unwrap();
        let rho = ket(&[0.6, 0.8]);
        assert!(dep.apply(rho.matrix()).max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn full_damping_relaxes_to_ground() {
        let ch = amplitude_damping(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density(&mut rng, 2);
        let out = ch.apply(rho.matrix());
        assert!(out.max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn half_damping_of_excited_state() {
        let out = amplitude_damping(0.5).unwrap().apply(ket(&[0.0, 1.0]).matrix());
        assert!(out.max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.5]).unwrap()) < 1e-15);
    }

    #[test]
    fn depolarizing_three_quarters_is_fully_mixing() {
        let ch = depolarizing(0.75).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let rho = random_density(&mut rng, 2);
            let out = ch.apply(rho.matrix());
            assert!(out.max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.5]).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn depolarizing_ground_state() {
        let out = depolarizing(0.3).unwrap().apply(ket(&[1.0, 0.0]).matrix());
        assert!(out.max_abs_diff(&ComplexMatrix::diag(&[0.8, 0.2]).unwrap()) < 1e-15);
    }

    #[test]
    fn strength_outside_unit_interval_is_rejected() {
        for bad in [-0.1, 1.01, f64::NAN] {
            assert!(matches!(amplitude_damping(bad), Err(Error::OutOfDomain { .. })));
            assert!(matches!(depolarizing(bad), Err(Error::OutOfDomain { .. })));
        }
        assert!(DecoherenceParams::new(0.1, 0.2, 1.5).is_err());
    }

    #[test]
    fn incomplete_channel_is_rejected() {
        let k = ComplexMatrix::diag(&[1.0, 0.5]).unwrap();
        assert!(KrausChannel::new("broken", vec![k]).is_err());
    }

    #[test]
    fn completeness_holds_for_random_strengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let d = rng.gen_range(0.0..=1.0);
            assert!(amplitude_damping(d).unwrap().completeness_residual() <= 1e-12);
            assert!(depolarizing(d).unwrap().completeness_residual() <= 1e-12);
        }
    }

    #[test]
    fn identity_assignment_leaves_state_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(&mut rng, 8);
        let out = apply_local(&rho, &[None, None, None]).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let id = KrausChannel::identity();
        let out = apply_local(&rho, &[Some(&id), None, Some(&id)]).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn assignment_length_must_match() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(
            apply_local(&rho, &[None]).unwrap_err(),
            Error::DimensionMismatch { expected: 2, actual: 1 }
        );
    }

    #[test]
    fn apply_local_preserves_trace_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..100 {
            let qubits = 2 + i % 3;
            let rho = random_density(&mut rng, 1 << qubits);
            let channels: Vec<KrausChannel> = (0..qubits)
                .map(|_| {
                    let d = rng.gen_range(0.0..=1.0);
                    if rng.gen_bool(0.5) {
                        amplitude_damping(d).unwrap()
                    } else {
                        depolarizing(d).unwrap()
                    }
                })
                .collect();
            let assignment: Vec<Option<&KrausChannel>> = channels.iter().map(Some).collect();
            let out = apply_local(&rho, &assignment).unwrap();
            assert!((out.matrix().trace().re - 1.0).abs() <= 1e-10);
            assert!(out.matrix().hermiticity_residual() <= 1e-10);
            assert!(eigvals_hermitian(out.matrix()).unwrap()[0] >= -1e-10);
        }
    }

    #[test]
    fn channels_on_different_qubits_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let rho = random_density(&mut rng, 8);
            let a = amplitude_damping(rng.gen_range(0.0..1.0)).unwrap();
            let b = depolarizing(rng.gen_range(0.0..1.0)).unwrap();
            let ab = apply_local(
                &apply_local(&rho, &[Some(&a), None, None]).unwrap(),
                &[None, Some(&b), None],
            )
            .unwrap();
            let ba = apply_local(
                &apply_local(&rho, &[None, Some(&b), None]).unwrap(),
                &[Some(&a), None, None],
            )
            .unwrap();
            let joint = apply_local(&rho, &[Some(&a), Some(&b), None]).unwrap();
            assert!(ab.matrix().max_abs_diff(ba.matrix()) <= 1e-13);
            assert!(ab.matrix().max_abs_diff(joint.matrix()) <= 1e-13);
        }
    }
}
