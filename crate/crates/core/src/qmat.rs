//! Dense complex linear algebra for registers of at most four qubits.
//!
//! Qubit 1 is the most significant bit of a basis label, so `|q1 q2 q3>`
//! maps to row `4*q1 + 2*q2 + q3`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest supported matrix dimension (4 qubits).
pub const MAX_DIM: usize = 16;

/// Tolerance used when validating density matrices built anywhere in the crate.
pub const STATE_TOL: f64 = 1e-10;

/// Tolerance accepted by [`eig_hermitian`] for the Hermiticity residual.
pub const HERMITIAN_TOL: f64 = 1e-10;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;
const DET_ZERO_TOL: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        return Err(Error::DimensionOverflow(dim));
    }
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!(
            "dimension {dim} is not a positive power of two"
        )));
    }
    Ok(())
}

fn qubits_for_dim(dim: usize) -> usize {
    dim.trailing_zeros() as usize
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = re(1.0);
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; `data.len()` must be a square
    /// of a power of two no larger than 16².
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(dim, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| re(x)).collect()).collect();
        let refs: Vec<&[C64]> = rows.iter().map(|r| r.as_slice()).collect();
        Self::from_rows(&refs)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, re(v));
        }
        Ok(m)
    }

    /// Builds a Hermitian matrix, rejecting inputs with `|A - A†|` above 1e-12
    /// in any entry. The result is exactly Hermitian.
    pub fn hermitian(dim: usize, data: Vec<C64>) -> Result<Self> {
        let m = Self::from_vec(dim, data)?;
        let residual = m.hermiticity_residual();
        if residual > 1e-12 {
            return Err(Error::NotHermitian(residual));
        }
        Ok(m.hermitian_part())
    }

    /// `|ψ><ψ|` for an amplitude vector.
    pub fn outer(ket: &[C64]) -> Result<Self> {
        let dim = ket.len();
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = ket[i] * ket[j].conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qubits(&self) -> usize {
        qubits_for_dim(self.dim)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
            }
        }
        out
    }

    /// Entrywise max-norm distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "mul_vec: dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// `<u| A |v>`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let av = self.mul_vec(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul: dimension mismatch");
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// `A X A†`.
    pub fn conjugate(&self, x: &Self) -> Self {
        self.matmul(x).matmul(&self.adjoint())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim * b.dim;
    if dim > MAX_DIM {
        return Err(Error::DimensionOverflow(dim));
    }
    let mut out = ComplexMatrix::zeros(dim)?;
    for ai in 0..a.dim {
        for aj in 0..a.dim {
            let x = a.get(ai, aj);
            for bi in 0..b.dim {
                for bj in 0..b.dim {
                    out.set(ai * b.dim + bi, aj * b.dim + bj, x * b.get(bi, bj));
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

/// Normalized state vector of a register of 1..=4 qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let dim = amplitudes.len();
        check_dim(dim)?;
        if dim < 2 {
            return Err(Error::UnsupportedRegister(0));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("state vector has squared norm {norm_sqr}")));
        }
        Ok(Self {
            qubits: qubits_for_dim(dim),
            amplitudes,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        PureState::new(kron_vec(&self.amplitudes, &other.amplitudes))
    }

    pub fn projector(&self) -> DensityMatrix {
        let m = ComplexMatrix::outer(&self.amplitudes).expect("state dimension already checked");
        DensityMatrix {
            qubits: self.qubits,
            matrix: m.hermitian_part(),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix of a 1..=4 qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity to [`STATE_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::UnsupportedRegister(0));
        }
        let residual = matrix.hermiticity_residual();
        if residual > STATE_TOL {
            return Err(Error::NotHermitian(residual));
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = eigvals_hermitian(&matrix)?[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self {
            qubits: matrix.qubits(),
            matrix,
        })
    }

    /// Divides a positive operator by its trace. Eigenvalues in
    /// `[-STATE_TOL, 0)` are clamped to zero; anything more negative is an error.
    pub fn normalized(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr.abs() < f64::MIN_POSITIVE {
            return Err(Error::InvalidState("zero trace".into()));
        }
        let m = matrix.hermitian_part().scale(re(1.0 / tr));
        let eig = eig_hermitian(&m)?;
        if eig.values[0] < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {:e}", eig.values[0])));
        }
        let m = if eig.values[0] < 0.0 {
            let clamped: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
            let total: f64 = clamped.iter().sum();
            let scaled: Vec<f64> = clamped.iter().map(|v| v / total).collect();
            eig.reconstruct_with(&scaled)
        } else {
            m
        };
        Ok(Self {
            qubits: m.qubits(),
            matrix: m,
        })
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        if !(1..=4).contains(&qubits) {
            return Err(Error::UnsupportedRegister(qubits));
        }
        let dim = 1 << qubits;
        let m = ComplexMatrix::identity(dim)?.scale(re(1.0 / dim as f64));
        Ok(Self { qubits, matrix: m })
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            qubits: matrix.qubits(),
            matrix,
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix.get(row, col)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvals_hermitian(&self.matrix).expect("density matrices are Hermitian")
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(Self::from_trusted(kron(&self.matrix, &other.matrix)?))
    }
}

fn bit_position(qubits: usize, index: usize) -> Result<usize> {
    if index == 0 || index > qubits {
        return Err(Error::QubitIndex { index, qubits });
    }
    Ok(qubits - index)
}

/// Inserts `bit` at position `pos` of `value` (positions counted from the LSB).
fn insert_bit(value: usize, pos: usize, bit: usize) -> usize {
    let low = value & ((1 << pos) - 1);
    let high = value >> pos;
    (high << (pos + 1)) | (bit << pos) | low
}

/// Partial trace of an arbitrary operator over qubit `drop` (1-based).
pub fn partial_trace_matrix(m: &ComplexMatrix, drop: usize) -> Result<ComplexMatrix> {
    let qubits = m.qubits();
    if qubits < 2 {
        return Err(Error::UnsupportedRegister(qubits));
    }
    let pos = bit_position(qubits, drop)?;
    let dim = m.dim() / 2;
    let mut out = ComplexMatrix::zeros(dim)?;
    for i in 0..dim {
        for j in 0..dim {
            let sum = (0..2)
                .map(|a| m.get(insert_bit(i, pos, a), insert_bit(j, pos, a)))
                .sum();
            out.set(i, j, sum);
        }
    }
    Ok(out)
}

/// Traces qubit `drop` (1-based, qubit 1 is the most significant bit) out of `rho`.
pub fn partial_trace(rho: &DensityMatrix, drop: usize) -> Result<DensityMatrix> {
    let m = partial_trace_matrix(&rho.matrix, drop)?;
    Ok(DensityMatrix::from_trusted(m.hermitian_part()))
}

/// Transpose on the indices of qubit `qubit` of a two-qubit state.
pub fn partial_transpose(rho: &DensityMatrix, qubit: usize) -> Result<ComplexMatrix> {
    if rho.qubits != 2 {
        return Err(Error::UnsupportedRegister(rho.qubits));
    }
    partial_transpose_matrix(&rho.matrix, qubit)
}

pub(crate) fn partial_transpose_matrix(m: &ComplexMatrix, qubit: usize) -> Result<ComplexMatrix> {
    let pos = bit_position(m.qubits(), qubit)?;
    let mask = 1 << pos;
    let mut out = m.clone();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            // swap the chosen qubit's bit between row and column labels
            let (bi, bj) = (i & mask, j & mask);
            let ii = (i & !mask) | bj;
            let jj = (j & !mask) | bi;
            out.set(ii, jj, m.get(i, j));
        }
    }
    Ok(out)
}

/// Eigen-decomposition `A = V Λ V†` with eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(&self.values)
    }

    fn reconstruct_with(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.vectors.dim();
        let mut out = ComplexMatrix::zeros(n).expect("dimension already checked");
        for i in 0..n {
            for j in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for (k, &lambda) in values.iter().enumerate() {
                    s += self.vectors.get(i, k) * self.vectors.get(j, k).conj() * lambda;
                }
                out.set(i, j, s);
            }
        }
        out.hermitian_part()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim()).map(|i| self.vectors.get(i, k)).collect()
    }
}

/// Cyclic complex Jacobi sweeps on a dense `n×n` Hermitian matrix in place.
/// On return the diagonal of `a` holds the eigenvalues and `v` (if given)
/// the accumulated unitary.
fn jacobi_hermitian(n: usize, a: &mut [C64], mut v: Option<&mut [C64]>) {
    let off = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(a) <= JACOBI_OFF_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                // Phase-rotate a_pq onto the real axis, then a real Givens rotation.
                let phase = apq / mag;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = 0.5 * (2.0 * mag).atan2(aqq - app);
                let (s, cth) = theta.sin_cos();
                // U restricted to (p,q): [[c, s], [-s e^{-iα}, c e^{-iα}]]
                let e = phase.conj();
                let u = [[re(cth), re(s)], [-e * s, e * cth]];

                // A <- A U (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * u[0][0] + akq * u[1][0];
                    a[k * n + q] = akp * u[0][1] + akq * u[1][1];
                }
                // A <- U† A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = u[0][0].conj() * apk + u[1][0].conj() * aqk;
                    a[q * n + k] = u[0][1].conj() * apk + u[1][1].conj() * aqk;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;

                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * u[0][0] + vkq * u[1][0];
                        v[k * n + q] = vkp * u[0][1] + vkq * u[1][1];
                    }
                }
            }
        }
    }
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian(residual));
    }
    let n = m.dim();
    let mut a = m.hermitian_part().data;
    let mut v = ComplexMatrix::identity(n)?.data;
    jacobi_hermitian(n, &mut a, Some(&mut v));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut vectors = ComplexMatrix::zeros(n)?;
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, col, v[row * n + k]);
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian(residual));
    }
    let n = m.dim();
    let mut a = m.hermitian_part().data;
    jacobi_hermitian(n, &mut a, None);
    let mut values: Vec<f64> = (0..n).map(|k| a[k * n + k].re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub type Real3 = [[f64; 3]; 3];

/// Singular values of a real 3×3 matrix with the sign of its determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularValues3 {
    /// Descending, non-negative.
    pub values: [f64; 3],
    /// `-1`, `0` or `+1`; `|det| <= 1e-12` counts as zero.
    pub det_sign: i8,
}

pub fn det3(r: &Real3) -> f64 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

/// Singular values via the eigenvalues of `RᵀR`.
pub fn singular_values_3x3(r: &Real3) -> SingularValues3 {
    let mut gram = [C64::new(0.0, 0.0); 9];
    for i in 0..3 {
        for j in 0..3 {
            let s: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
            gram[i * 3 + j] = re(s);
        }
    }
    jacobi_hermitian(3, &mut gram, None);
    let mut values = [0.0; 3];
    for (k, v) in values.iter_mut().enumerate() {
        *v = gram[k * 3 + k].re.max(0.0).sqrt();
    }
    values.sort_by(|a, b| b.total_cmp(a));

    let det = det3(r);
    let det_sign = if det.abs() <= DET_ZERO_TOL {
        0
    } else if det > 0.0 {
        1
    } else {
        -1
    };
    SingularValues3 { values, det_sign }
}
