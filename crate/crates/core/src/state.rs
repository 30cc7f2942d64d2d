//! Pure and mixed state containers, measurement, and entanglement checks.
//!
//! Qubit `i` carries binary weight `2^i`: a register of qubits `q0..qk`
//! holding the integer `v` has `q_i = (v >> i) & 1`. Ket labels such as
//! `|01>` list qubit 0 first, so `|01>` is amplitude index `2`.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{check_targets, DenseMatrix, C64, INPUT_TOL, ONE, ZERO};
use crate::rng;

/// Hard cap on the simulated register size.
pub const MAX_QUBITS: usize = 24;

/// Second Schmidt coefficients below this count as zero.
pub const SCHMIDT_TOL: f64 = 1e-8;

/// Normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

fn check_width(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::WidthOutOfRange {
            width: 0,
            min: 1,
            max: MAX_QUBITS,
        })
    } else if n > MAX_QUBITS {
        Err(Error::TooManyQubits(n))
    } else {
        Ok(())
    }
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    ///
    /// Panics if `n` is zero or above [`MAX_QUBITS`].
    pub fn zero(n: usize) -> Self {
        Self::basis_state(n, 0).expect("qubit count within range")
    }

    /// Computational basis state holding `value`.
    pub fn basis_state(n: usize, value: u64) -> Result<Self> {
        check_width(n)?;
        if value >> n != 0 {
            return Err(Error::ValueOutOfRange { value, n_qubits: n });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[value as usize] = ONE;
        Ok(Self { n_qubits: n, amps })
    }

    /// Equal superposition of all `2^n` basis states.
    pub fn uniform(n: usize) -> Self {
        check_width(n).expect("qubit count within range");
        let a = C64::new((1.0 / (1u64 << n) as f64).sqrt(), 0.0);
        Self {
            n_qubits: n,
            amps: vec![a; 1 << n],
        }
    }

    /// Takes amplitudes that must already be normalized.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n = Self::width_of(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > INPUT_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// Takes arbitrary nonzero amplitudes and rescales them to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let n = Self::width_of(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized(norm * norm));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n_qubits: n, amps })
    }

    /// Random state with Gaussian amplitudes.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let amps = (0..1usize << n)
            .map(|_| {
                let u: f64 = rng.sample(rand_distr::StandardNormal);
                let v: f64 = rng.sample(rand_distr::StandardNormal);
                C64::new(u, v)
            })
            .collect();
        Self::normalized(amps).expect("nonzero Gaussian sample")
    }

    fn width_of(len: usize) -> Result<usize> {
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(2),
                found: len,
            });
        }
        let n = len.trailing_zeros() as usize;
        check_width(n)?;
        Ok(n)
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Product state whose low qubits are `self` and high qubits `high`.
    pub fn extend_with(&self, high: &Self) -> Result<Self> {
        check_width(self.n_qubits + high.n_qubits)?;
        let mut amps = Vec::with_capacity(self.dim() * high.dim());
        for h in &high.amps {
            amps.extend(self.amps.iter().map(|l| l * h));
        }
        Ok(Self::from_raw(self.n_qubits + high.n_qubits, amps))
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let f = C64::from_polar(1.0, phase);
        Self::from_raw(self.n_qubits, self.amps.iter().map(|a| a * f).collect())
    }

    /// Largest amplitude deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest amplitude deviation from `other` after removing the relative
    /// global phase.
    pub fn phase_aligned_distance(&self, other: &Self) -> f64 {
        let overlap = self.inner(other);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }

    /// Indices with probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.probability(i) > tol).collect()
    }

    /// If the state is a computational basis state within `tol`, its index.
    pub fn as_basis_state(&self, tol: f64) -> Option<usize> {
        let idx = (0..self.dim()).max_by(|&a, &b| self.probability(a).total_cmp(&self.probability(b)))?;
        ((self.probability(idx) - 1.0).abs() <= tol).then_some(idx)
    }

    /// Integer held by `qubits` in basis index `index`.
    pub fn register_value(index: usize, qubits: &[usize]) -> u64 {
        qubits
            .iter()
            .enumerate()
            .map(|(m, &q)| ((index >> q & 1) as u64) << m)
            .sum()
    }

    /// Marginal outcome distribution of `qubits`; entry `v` is the
    /// probability that the measured register reads `v`.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        check_targets(qubits, self.n_qubits)?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[Self::register_value(i, qubits) as usize] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Projects `qubits` onto `outcome` and renormalizes.
    pub fn project(&self, qubits: &[usize], outcome: usize) -> Result<MeasurementRecord> {
        let probs = self.marginal(qubits)?;
        let probability = *probs
            .get(outcome)
            .ok_or(Error::ValueOutOfRange {
                value: outcome as u64,
                n_qubits: qubits.len(),
            })?;
        if probability <= 0.0 {
            return Err(Error::ZeroProbability { outcome });
        }
        let scale = 1.0 / probability.sqrt();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if Self::register_value(i, qubits) as usize == outcome {
                    a * scale
                } else {
                    ZERO
                }
            })
            .collect();
        Ok(MeasurementRecord {
            measured_qubits: qubits.to_vec(),
            outcome,
            probability,
            post_state: Self::from_raw(self.n_qubits, amps),
        })
    }

    /// Samples a projective measurement of `qubits` from `rng`.
    pub fn measure_with(&self, qubits: &[usize], rng: &mut impl Rng) -> Result<MeasurementRecord> {
        let probs = self.marginal(qubits)?;
        let total: f64 = probs.iter().sum();
        let mut draw = rng.random::<f64>() * total;
        let mut outcome = probs.len() - 1;
        for (v, &p) in probs.iter().enumerate() {
            if p > 0.0 && draw < p {
                outcome = v;
                break;
            }
            draw -= p;
        }
        // guard against rounding past the last nonzero bin
        while probs[outcome] <= 0.0 {
            outcome -= 1;
        }
        self.project(qubits, outcome)
    }

    /// Reduced density matrix on `keep`, computed without forming `|ψ><ψ|`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_targets(keep, self.n_qubits)?;
        let m = self.bipartite_matrix(keep);
        let rho = &m * m.adjoint();
        Ok(DensityMatrix::from_matrix_unchecked(
            keep.len(),
            DenseMatrix::from_nalgebra(rho),
        ))
    }

    /// Amplitudes reshaped to a `2^|side| x 2^|rest|` matrix.
    fn bipartite_matrix(&self, side: &[usize]) -> DMatrix<C64> {
        let rest: Vec<usize> = (0..self.n_qubits).filter(|q| !side.contains(q)).collect();
        let mut m = DMatrix::zeros(1 << side.len(), 1 << rest.len());
        for (i, a) in self.amps.iter().enumerate() {
            let r = Self::register_value(i, side) as usize;
            let c = Self::register_value(i, &rest) as usize;
            m[(r, c)] = *a;
        }
        m
    }

    /// Ket label with qubit 0 leftmost, e.g. `|011>` for index 6 on 3 qubits.
    pub fn ket_label(index: usize, n_qubits: usize) -> String {
        let bits: String = (0..n_qubits)
            .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
            .collect();
        format!("|{bits}>")
    }
}

/// Result of a projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub measured_qubits: Vec<usize>,
    /// Register value read out; `measured_qubits[m]` carries weight `2^m`.
    pub outcome: usize,
    pub probability: f64,
    pub post_state: StateVector,
}

impl MeasurementRecord {
    /// Outcome bits in the order the qubits were listed.
    pub fn bits(&self) -> String {
        (0..self.measured_qubits.len())
            .map(|m| if self.outcome >> m & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Measures `qubits` of `state` with a fresh stream seeded by `seed`.
pub fn measure(state: &StateVector, qubits: &[usize], seed: u64) -> Result<MeasurementRecord> {
    state.measure_with(qubits, &mut rng::seeded(seed))
}

/// Schmidt coefficients of a bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Descending singular values of the bipartite amplitude matrix.
    pub coefficients: Vec<f64>,
}

impl SchmidtDecomposition {
    pub fn is_product(&self) -> bool {
        self.coefficients.get(1).copied().unwrap_or(0.0) < SCHMIDT_TOL
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c >= tol).count()
    }
}

/// Schmidt decomposition of `state` across `side | complement`.
pub fn schmidt(state: &StateVector, side: &[usize]) -> Result<SchmidtDecomposition> {
    check_targets(side, state.n_qubits())?;
    if side.is_empty() || side.len() == state.n_qubits() {
        return Err(Error::EmptyPartition);
    }
    let mut m = state.bipartite_matrix(side);
    if m.nrows() > m.ncols() {
        m = m.transpose();
    }
    let mut coefficients: Vec<f64> = m.singular_values().iter().copied().collect();
    coefficients.sort_by(|a, b| b.total_cmp(a));
    Ok(SchmidtDecomposition { coefficients })
}

/// Whether `state` factorizes across `side | complement`, with the Schmidt
/// coefficients backing the verdict.
pub fn is_product_across(state: &StateVector, side: &[usize]) -> Result<(bool, Vec<f64>)> {
    let d = schmidt(state, side)?;
    Ok((d.is_product(), d.coefficients))
}

/// Mixed state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: DenseMatrix,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let matrix = DenseMatrix::from_fn(a.len(), |r, c| a[r] * a[c].conj());
        Self {
            n_qubits: state.n_qubits(),
            matrix,
        }
    }

    /// Validates Hermiticity, unit trace, and positivity.
    pub fn from_matrix(matrix: DenseMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two(),
                found: dim,
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > INPUT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > INPUT_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = matrix.hermitian_eigenvalues()[0];
        if min < -1e-9 {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, matrix: DenseMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << n_qubits);
        Self { n_qubits, matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        Self {
            n_qubits,
            matrix: DenseMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)),
        }
    }

    /// Equal-weight mixture of pure states.
    pub fn mixture(states: &[StateVector]) -> Result<Self> {
        let first = states.first().ok_or(Error::InvalidDensityMatrix("empty mixture".into()))?;
        let w = C64::new(1.0 / states.len() as f64, 0.0);
        let mut acc = DenseMatrix::zeros(first.dim());
        for s in states {
            if s.n_qubits() != first.n_qubits() {
                return Err(Error::DimensionMismatch {
                    expected: first.n_qubits(),
                    found: s.n_qubits(),
                });
            }
            acc = acc.add(&Self::from_pure(s).matrix.scale(w));
        }
        Ok(Self::from_matrix_unchecked(first.n_qubits(), acc))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix.get(row, col)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.hermitian_eigenvalues()[0]
    }

    /// `<ψ|ρ|ψ>`.
    pub fn fidelity_with_pure(&self, psi: &StateVector) -> f64 {
        let rho_psi = self.matrix.mul_vec(psi.amplitudes());
        psi.amplitudes()
            .iter()
            .zip(&rho_psi)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re
    }
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
    rho.matrix.as_nalgebra().iter().map(|z| z.norm_sqr()).sum()
}
