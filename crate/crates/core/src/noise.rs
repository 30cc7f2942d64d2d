//! Pauli errors, dephasing, environment entanglement and the 3-qubit codes.
//!
//! The Pauli matrices are
//!
//! ```text
//! s0 = [[1, 0], [0, 1]]   sx = [[0, 1], [1, 0]]
//! sy = [[0, i], [-i, 0]]  sz = [[1, 0], [0, -1]]
//! ```
//!
//! with `sy` carrying `+i` in the upper-right entry.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate};
use crate::numerics::{apply_k_local_unitary, DenseMatrix, C64, I, ONE, ZERO};
use crate::rng;
use crate::state::{DensityMatrix, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Self; 4] = [Self::I, Self::X, Self::Y, Self::Z];

    pub fn entries(self) -> [C64; 4] {
        match self {
            Self::I => [ONE, ZERO, ZERO, ONE],
            Self::X => [ZERO, ONE, ONE, ZERO],
            Self::Y => [ZERO, I, -I, ZERO],
            Self::Z => [ONE, ZERO, ZERO, -ONE],
        }
    }

    pub fn matrix(self) -> DenseMatrix {
        DenseMatrix::from_row_major(2, &self.entries()).expect("2x2")
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::X => "X",
            Self::Y => "Y",
            Self::Z => "Z",
        }
    }
}

impl std::str::FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "id" | "none" => Ok(Self::I),
            "x" => Ok(Self::X),
            "y" => Ok(Self::Y),
            "z" => Ok(Self::Z),
            _ => Err(Error::InvalidOperand(format!("unknown Pauli `{s}`; expected i, x, y or z"))),
        }
    }
}

/// A Pauli operator on one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliError {
    pub kind: Pauli,
    pub qubit: usize,
}

impl PauliError {
    pub fn new(kind: Pauli, qubit: usize) -> Self {
        Self { kind, qubit }
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        apply_k_local_unitary(state, &self.kind.matrix(), &[self.qubit])
    }
}

impl fmt::Display for PauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.qubit)
    }
}

/// Independent phase collisions at rate `gamma` for time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingChannel {
    gamma: f64,
    t: f64,
}

impl DephasingChannel {
    pub fn new(gamma: f64, t: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite() && t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidChannel(format!(
                "gamma = {gamma} and t = {t} must be finite and nonnegative"
            )));
        }
        Ok(Self { gamma, t })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Factor `exp(-gamma t)` applied to each coherence.
    pub fn coherence_factor(&self) -> f64 {
        (-self.gamma * self.t).exp()
    }

    /// Weight `p = (1 + exp(-gamma t)) / 2` of the identity Kraus branch.
    pub fn keep_probability(&self) -> f64 {
        (1.0 + self.coherence_factor()) / 2.0
    }

    /// Kraus operators `sqrt(p) I` and `sqrt(1 - p) sz`.
    pub fn kraus(&self) -> [DenseMatrix; 2] {
        let p = self.keep_probability();
        [
            Pauli::I.matrix().scale(C64::new(p.sqrt(), 0.0)),
            Pauli::Z.matrix().scale(C64::new((1.0 - p).sqrt(), 0.0)),
        ]
    }
}

fn check_qubits(qubits: &[usize], n: usize) -> Result<()> {
    crate::numerics::check_targets(qubits, n)
}

/// Dephases each listed qubit: `rho -> p rho + (1 - p) sz rho sz`.
pub fn apply_dephasing(
    rho: &DensityMatrix,
    channel: &DephasingChannel,
    qubits: &[usize],
) -> Result<DensityMatrix> {
    check_qubits(qubits, rho.n_qubits())?;
    let mask: usize = qubits.iter().map(|q| 1 << q).sum();
    let s = channel.coherence_factor();
    let m = DenseMatrix::from_fn(1 << rho.n_qubits(), |r, c| {
        rho.entry(r, c) * s.powi(((r ^ c) & mask).count_ones() as i32)
    });
    Ok(DensityMatrix::from_matrix_unchecked(rho.n_qubits(), m))
}

/// `sum_k K_k rho K_k^dagger` with the `K_k` acting on `qubit`.
pub fn apply_single_qubit_kraus(
    rho: &DensityMatrix,
    kraus: &[DenseMatrix],
    qubit: usize,
) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    check_qubits(&[qubit], n)?;
    let mut out = DenseMatrix::zeros(1 << n);
    for k in kraus {
        if k.dim() != 2 {
            return Err(Error::InvalidChannel(format!("Kraus operator of dimension {}", k.dim())));
        }
        let full = DenseMatrix::identity(1 << (n - qubit - 1))
            .kron(k)
            .kron(&DenseMatrix::identity(1 << qubit));
        out = out.add(&full.mul(rho.matrix()).mul(&full.adjoint()));
    }
    Ok(DensityMatrix::from_matrix_unchecked(n, out))
}

/// `(|0...0> + |1...1>) / sqrt 2`.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = ONE;
    amps[(1 << n) - 1] += ONE;
    StateVector::normalized(amps)
}

/// Ensemble average over pure-state trajectories in which each listed qubit
/// suffers `sz` kicks at the jump times of a Poisson process of rate
/// `gamma / 2`.
pub fn dephasing_trajectories(
    state: &StateVector,
    channel: &DephasingChannel,
    qubits: &[usize],
    trajectories: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    check_qubits(qubits, state.n_qubits())?;
    if trajectories == 0 {
        return Err(Error::InvalidOperand("at least one trajectory".into()));
    }
    let mut rng = rng::seeded(seed);
    let rate = channel.gamma() / 2.0;
    let waiting = (rate > 0.0)
        .then(|| Exp::new(rate).map_err(|e| Error::InvalidChannel(e.to_string())))
        .transpose()?;
    let dim = state.dim();
    let mut acc = vec![ZERO; dim * dim];
    for _ in 0..trajectories {
        let mut flips = 0usize;
        for &q in qubits {
            let mut kicks = 0u32;
            if let Some(w) = &waiting {
                let mut clock = w.sample(&mut rng);
                while clock <= channel.t() {
                    kicks += 1;
                    clock += w.sample(&mut rng);
                }
            }
            if kicks % 2 == 1 {
                flips |= 1 << q;
            }
        }
        let psi: Vec<C64> = state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| if (i & flips).count_ones() % 2 == 1 { -a } else { *a })
            .collect();
        for r in 0..dim {
            for c in 0..dim {
                acc[r * dim + c] += psi[r] * psi[c].conj();
            }
        }
    }
    let scale = C64::new(1.0 / trajectories as f64, 0.0);
    let m = DenseMatrix::from_fn(dim, |r, c| acc[r * dim + c] * scale);
    Ok(DensityMatrix::from_matrix_unchecked(state.n_qubits(), m))
}

/// System qubit entangled with a two-qubit environment.
#[derive(Debug, Clone)]
pub struct EnvironmentOutcome {
    /// Probabilities of the `s0, sx, sy, sz` branches.
    pub weights: [f64; 4],
    /// Qubit 0 is the system; qubits 1 and 2 hold the environment record.
    pub joint: StateVector,
    pub reduced: DensityMatrix,
    pub joint_purity: f64,
    pub reduced_purity: f64,
}

/// `|psi>|e> -> sum_i sqrt(w_i) s_i |psi> |i>` for seeded random weights.
pub fn entangle_with_environment(psi: &StateVector, seed: u64) -> Result<EnvironmentOutcome> {
    let mut rng = rng::seeded(seed);
    let raw: [f64; 4] = std::array::from_fn(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln());
    let total: f64 = raw.iter().sum();
    entangle_with_weights(psi, raw.map(|w| w / total))
}

/// As [`entangle_with_environment`] with explicit branch weights.
pub fn entangle_with_weights(psi: &StateVector, weights: [f64; 4]) -> Result<EnvironmentOutcome> {
    if psi.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: psi.n_qubits(),
        });
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|w| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidChannel(format!("weights {weights:?} must be a distribution")));
    }
    // Householder reflection taking |00> to sum_i sqrt(w_i) |i>.
    let v: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let u: Vec<f64> = (0..4).map(|i| f64::from(i == 0) - v[i]).collect();
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let prepare = DenseMatrix::from_fn(4, |r, c| {
        let id = f64::from(r == c);
        let refl = if uu < 1e-300 { 0.0 } else { 2.0 * u[r] * u[c] / uu };
        C64::new(id - refl, 0.0)
    });
    // Pauli s_i on the system when the environment reads i.
    let mut controlled = DenseMatrix::zeros(8);
    for (i, p) in Pauli::ALL.iter().enumerate() {
        let m = p.entries();
        for s_out in 0..2 {
            for s_in in 0..2 {
                controlled.set(s_out | i << 1, s_in | i << 1, m[s_out * 2 + s_in]);
            }
        }
    }
    let start = psi.extend_with(&StateVector::zero(2))?;
    let env_ready = apply_k_local_unitary(&start, &prepare, &[1, 2])?;
    let joint = apply_k_local_unitary(&env_ready, &controlled, &[0, 1, 2])?;
    let reduced = joint.reduced_density(&[0])?;
    Ok(EnvironmentOutcome {
        weights,
        joint_purity: joint.reduced_density(&[0, 1, 2])?.purity(),
        reduced_purity: reduced.purity(),
        joint,
        reduced,
    })
}

/// `(c0, cz)` with `diag(1, e^{i phi}) = c0 s0 + cz sz`.
pub fn phase_decomposition(phi: f64) -> (C64, C64) {
    let e = C64::from_polar(1.0, phi);
    ((ONE + e) / 2.0, (ONE - e) / 2.0)
}

/// Largest entry of `|H sx H - sz|`.
pub fn hadamard_conjugation_deviation() -> f64 {
    let h = Gate::H(0).matrix();
    h.mul(&Pauli::X.matrix())
        .mul(&h)
        .max_abs_diff(&Pauli::Z.matrix())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    /// Bit-flip code: `|0> -> |000>`, `|1> -> |111>`.
    Amplitude3,
    /// The bit-flip code in the Hadamard basis.
    Phase3,
}

impl CodeKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Amplitude3 => "amplitude",
            Self::Phase3 => "phase",
        }
    }

    /// The single-qubit error the code is built to correct.
    pub fn corrects(self) -> Pauli {
        match self {
            Self::Amplitude3 => Pauli::X,
            Self::Phase3 => Pauli::Z,
        }
    }
}

impl std::str::FromStr for CodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(Self::Amplitude3),
            "phase" => Ok(Self::Phase3),
            _ => Err(Error::InvalidOperand(format!("unknown code `{s}`; expected amplitude or phase"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recovery {
    /// Toffoli controlled by the two decoded ancillas.
    UnitaryToffoli,
    /// Read the ancillas and flip the data qubit on syndrome `11`.
    MeasureAndFlip,
}

impl Recovery {
    pub fn name(self) -> &'static str {
        match self {
            Self::UnitaryToffoli => "toffoli",
            Self::MeasureAndFlip => "measure",
        }
    }
}

impl std::str::FromStr for Recovery {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toffoli" => Ok(Self::UnitaryToffoli),
            "measure" => Ok(Self::MeasureAndFlip),
            _ => Err(Error::InvalidOperand(format!("unknown recovery `{s}`; expected toffoli or measure"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Corrected,
    Uncorrectable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Corrected => "corrected",
            Self::Uncorrectable => "uncorrectable",
        })
    }
}

/// Fidelity below `1 - QEC_TOL` counts as a failed correction.
pub const QEC_TOL: f64 = 1e-10;

/// One encode, error, decode, correct cycle. Qubit 0 carries the data;
/// qubits 1 and 2 are the ancillas.
#[derive(Debug, Clone)]
pub struct QecOutcome {
    pub code: CodeKind,
    pub recovery: Recovery,
    pub input: StateVector,
    pub encoded: StateVector,
    /// State after decoding, before the correction step.
    pub pre_correction: StateVector,
    /// Ancilla readout; qubit 1 is bit 0, qubit 2 is bit 1.
    pub syndrome: usize,
    pub recovered: StateVector,
    pub fidelity: f64,
    pub verdict: Verdict,
}

impl QecOutcome {
    /// Syndrome as two characters, qubit 1 first.
    pub fn syndrome_bits(&self) -> String {
        format!("{}{}", self.syndrome & 1, self.syndrome >> 1 & 1)
    }
}

fn code_circuits(code: CodeKind) -> Result<(Circuit, Circuit)> {
    let copies = [Gate::cnot(0, 1), Gate::cnot(0, 2)];
    let hadamards = [Gate::H(0), Gate::H(1), Gate::H(2)];
    match code {
        CodeKind::Amplitude3 => Ok((
            Circuit::from_gates(3, copies.clone())?,
            Circuit::from_gates(3, copies)?,
        )),
        CodeKind::Phase3 => Ok((
            Circuit::from_gates(3, copies.iter().chain(&hadamards).cloned())?,
            Circuit::from_gates(3, hadamards.iter().chain(&copies).cloned())?,
        )),
    }
}

/// Encodes `input`, applies `errors` in order, decodes, corrects, reads the
/// syndrome and resets the ancillas.
pub fn qec_cycle(
    code: CodeKind,
    input: &StateVector,
    errors: &[PauliError],
    recovery: Recovery,
    seed: u64,
) -> Result<QecOutcome> {
    if input.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: input.n_qubits(),
        });
    }
    let (encode, decode) = code_circuits(code)?;
    let encoded = encode.run(&input.extend_with(&StateVector::zero(2))?)?;
    let mut noisy = encoded.clone();
    for e in errors {
        if e.qubit >= 3 {
            return Err(Error::TargetOutOfRange {
                index: e.qubit,
                n_qubits: 3,
            });
        }
        noisy = e.apply(&noisy)?;
    }
    let pre_correction = decode.run(&noisy)?;
    let mut rng = rng::seeded(seed);
    let (syndrome, corrected) = match recovery {
        Recovery::UnitaryToffoli => {
            let fixed = Circuit::from_gates(3, [Gate::toffoli(1, 2, 0)])?.run(&pre_correction)?;
            let read = fixed.measure_with(&[1, 2], &mut rng)?;
            (read.outcome, read.post_state)
        }
        Recovery::MeasureAndFlip => {
            let read = pre_correction.measure_with(&[1, 2], &mut rng)?;
            let state = if read.outcome == 0b11 {
                Circuit::from_gates(3, [Gate::X(0)])?.run(&read.post_state)?
            } else {
                read.post_state
            };
            (read.outcome, state)
        }
    };
    let reset: Vec<Gate> = [1, 2]
        .into_iter()
        .enumerate()
        .filter(|(b, _)| syndrome >> b & 1 == 1)
        .map(|(_, q)| Gate::X(q))
        .collect();
    let clean = Circuit::from_gates(3, reset)?.run(&corrected)?;
    let recovered = StateVector::normalized(clean.amplitudes()[..2].to_vec())?;
    let fidelity = input.inner(&recovered).norm_sqr();
    let verdict = if fidelity < 1.0 - QEC_TOL {
        Verdict::Uncorrectable
    } else {
        Verdict::Corrected
    };
    Ok(QecOutcome {
        code,
        recovery,
        input: input.clone(),
        encoded,
        pre_correction,
        syndrome,
        recovered,
        fidelity,
        verdict,
    })
}

/// Largest deviation between `X(control)` then CNOT and CNOT then
/// `X(control) X(target)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationReport {
    pub basis_deviation: f64,
    pub random_deviation: f64,
    pub random_states: usize,
}

impl PropagationReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.basis_deviation <= tol && self.random_deviation <= tol
    }
}

/// The two sides of the error-propagation identity, control 0, target 1.
pub fn propagation_circuits() -> Result<(Circuit, Circuit)> {
    Ok((
        Circuit::from_gates(2, [Gate::X(0), Gate::cnot(0, 1)])?,
        Circuit::from_gates(2, [Gate::cnot(0, 1), Gate::X(0), Gate::X(1)])?,
    ))
}

/// Checks the identity on all basis states and `random_states` seeded
/// random states.
pub fn cnot_error_propagation_check(random_states: usize, seed: u64) -> Result<PropagationReport> {
    let (lhs, rhs) = propagation_circuits()?;
    let dev = |s: &StateVector| -> Result<f64> { Ok(lhs.run(s)?.max_abs_diff(&rhs.run(s)?)) };
    let mut basis_deviation: f64 = 0.0;
    for b in 0..4 {
        basis_deviation = basis_deviation.max(dev(&StateVector::basis_state(2, b)?)?);
    }
    let mut rng = rng::seeded(seed);
    let mut random_deviation: f64 = 0.0;
    for _ in 0..random_states {
        random_deviation = random_deviation.max(dev(&StateVector::random(2, &mut rng))?);
    }
    Ok(PropagationReport {
        basis_deviation,
        random_deviation,
        random_states,
    })
}
