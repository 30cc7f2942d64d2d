//! Complex linear-algebra kernels shared by the rest of the crate.
//!
//! Gates are applied to amplitude arrays by strided iteration over the
//! target bits; no full `2^n x 2^n` operator is built for a circuit. Dense
//! matrices appear only for small operators (gate blocks, Hamiltonians) and
//! in tests as oracles.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, StateVector};

pub type C64 = Complex64;

/// Tolerance for validating caller-supplied unitaries and Hermitian matrices.
pub const INPUT_TOL: f64 = 1e-10;
/// Tolerance for checking computed outputs.
pub const OUTPUT_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix(DMatrix<C64>);

impl DenseMatrix {
    /// Builds a `dim x dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidOperand("matrix entries must be finite".into()));
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_major(dim, &entries)
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub(crate) fn from_nalgebra(m: DMatrix<C64>) -> Self {
        debug_assert!(m.is_square());
        Self(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.0[(row, col)] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self(&self.0 * &rhs.0)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self(&self.0 + &rhs.0)
    }

    /// Kronecker product `self ⊗ rhs`; `rhs` varies fastest in the row index.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self(self.0.kronecker(&rhs.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.0[(r, c)] * v[c]).sum())
            .collect()
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise deviation of `U†U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.adjoint().mul(self);
        prod.max_abs_diff(&Self::identity(self.dim()))
    }

    /// Max entrywise deviation of `H` from `H†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Distance to `target` after removing the best global phase.
    pub fn phase_aligned_distance(&self, target: &Self) -> f64 {
        let overlap = target.adjoint().mul(self).trace();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        self.scale(phase.conj()).max_abs_diff(target)
    }
}

fn validate_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::TargetOutOfRange { index: t, n_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateTarget(t));
        }
    }
    Ok(())
}

pub(crate) fn check_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    validate_targets(targets, n_qubits)
}

/// Applies `u` to the joint subspace of `targets`.
///
/// Bit `m` of the local row/column index of `u` addresses `targets[m]`, so
/// for `u = A ⊗ B` the factor `B` acts on `targets[0]`.
pub fn apply_k_local_unitary(
    state: &StateVector,
    u: &DenseMatrix,
    targets: &[usize],
) -> Result<StateVector> {
    let n = state.n_qubits();
    if targets.is_empty() || u.dim() != 1 << targets.len() {
        return Err(Error::DimensionMismatch {
            expected: 1 << targets.len(),
            found: u.dim(),
        });
    }
    validate_targets(targets, n)?;
    let deviation = u.unitarity_deviation();
    if deviation > INPUT_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    let mut amps = state.amplitudes().to_vec();
    apply_unitary_in_place(&mut amps, u, targets);
    Ok(StateVector::from_raw(n, amps))
}

/// Unchecked kernel behind [`apply_k_local_unitary`].
pub(crate) fn apply_unitary_in_place(amps: &mut [C64], u: &DenseMatrix, targets: &[usize]) {
    let entries = u.to_row_major();
    if let [t] = targets {
        apply_single(amps, [entries[0], entries[1], entries[2], entries[3]], *t);
        return;
    }
    let d = u.dim();
    let offsets: Vec<usize> = (0..d)
        .map(|j| {
            targets
                .iter()
                .enumerate()
                .filter(|(m, _)| j >> m & 1 == 1)
                .map(|(_, &t)| 1usize << t)
                .sum()
        })
        .collect();
    let mask: usize = targets.iter().map(|&t| 1usize << t).sum();
    let mut buf = vec![ZERO; d];
    for base in (0..amps.len()).filter(|b| b & mask == 0) {
        for (slot, off) in buf.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let row = &entries[r * d..(r + 1) * d];
            amps[base | off] = row.iter().zip(&buf).map(|(a, b)| a * b).sum();
        }
    }
}

fn apply_single(amps: &mut [C64], m: [C64; 4], target: usize) {
    let stride = 1usize << target;
    for block in amps.chunks_mut(stride << 1) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a0, *a1);
            *a0 = m[0] * x + m[1] * y;
            *a1 = m[2] * x + m[3] * y;
        }
    }
}

/// `exp(-i h t)` for Hermitian `h`, via eigendecomposition.
pub fn matrix_exp_hermitian(h: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    let deviation = h.hermiticity_deviation();
    if deviation > INPUT_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    // symmetrize so the solver sees an exactly Hermitian input
    let sym = (h.as_nalgebra() + h.as_nalgebra().adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| (-I * e * t).exp()));
    Ok(DenseMatrix::from_nalgebra(v * phases * v.adjoint()))
}

/// Reduced density matrix on `keep`.
///
/// Qubit `keep[m]` becomes qubit `m` of the result. Tracing out every qubit
/// (`keep` empty) yields the 1x1 matrix holding the trace.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    validate_targets(keep, n)?;
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let spread = |bits: usize, qubits: &[usize]| -> usize {
        qubits
            .iter()
            .enumerate()
            .filter(|(m, _)| bits >> m & 1 == 1)
            .map(|(_, &q)| 1usize << q)
            .sum()
    };
    let keep_dim = 1usize << keep.len();
    let env: Vec<usize> = (0..1usize << traced.len())
        .map(|e| spread(e, &traced))
        .collect();
    let kept: Vec<usize> = (0..keep_dim).map(|k| spread(k, keep)).collect();
    let full = rho.matrix();
    let out = DenseMatrix::from_fn(keep_dim, |r, c| {
        env.iter()
            .map(|&e| full.get(kept[r] | e, kept[c] | e))
            .sum()
    });
    Ok(DensityMatrix::from_matrix_unchecked(keep.len(), out))
}

/// `|<a|b>|^2` for two pure states.
pub fn fidelity_pure(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: a.n_qubits(),
            found: b.n_qubits(),
        });
    }
    Ok(a.inner(b).norm_sqr().min(1.0))
}
