//! Elementary gates and a reversible circuit representation.
//!
//! # Circuit text format
//!
//! One gate per line, whitespace separated, `#` starts a comment:
//!
//! ```text
//! qubits 3                 # optional header; defaults to max index + 1
//! X 0
//! H 1
//! CNOT 0 1                 # control, target
//! TOFFOLI 0 1 2            # control, control, target
//! PHASE 2 0.785398         # target, angle in radians
//! CPHASE 0 1 1.5707963     # control, target, angle
//! U1 0 re00 im00 re01 im01 re10 im10 re11 im11
//! ```
//!
//! Angles and matrix entries are written with shortest round-trip float
//! formatting, so `parse(to_text(c)) == c`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{apply_unitary_in_place, check_targets, DenseMatrix, C64, INPUT_TOL, ONE, ZERO};
use crate::state::{StateVector, MAX_QUBITS};

/// Validated 2x2 unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2([C64; 4]);

impl Unitary2 {
    /// Row-major entries `[u00, u01, u10, u11]`.
    pub fn new(entries: [C64; 4]) -> Result<Self> {
        let m = DenseMatrix::from_row_major(2, &entries)?;
        let deviation = m.unitarity_deviation();
        if deviation > INPUT_TOL {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> [C64; 4] {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.0;
        Self([a.conj(), c.conj(), b.conj(), d.conj()])
    }
}

/// One of the enumerated gate kinds with its qubits.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    Cnot { control: usize, target: usize },
    Toffoli { controls: [usize; 2], target: usize },
    /// `diag(1, e^{iθ})` on the target.
    Phase { target: usize, theta: f64 },
    /// Multiplies the `|11>` component by `e^{iθ}`.
    CPhase { control: usize, target: usize, theta: f64 },
    Unitary1 { target: usize, matrix: Unitary2 },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Gate::Toffoli {
            controls: [c0, c1],
            target,
        }
    }

    pub fn cphase(control: usize, target: usize, theta: f64) -> Self {
        Gate::CPhase {
            control,
            target,
            theta,
        }
    }

    /// Qubits touched, controls before target.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::H(q) => vec![q],
            Gate::Phase { target, .. } | Gate::Unitary1 { target, .. } => vec![target],
            Gate::Cnot { control, target } | Gate::CPhase { control, target, .. } => {
                vec![control, target]
            }
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], target],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::H(_) => "H",
            Gate::Cnot { .. } => "CNOT",
            Gate::Toffoli { .. } => "TOFFOLI",
            Gate::Phase { .. } => "PHASE",
            Gate::CPhase { .. } => "CPHASE",
            Gate::Unitary1 { .. } => "U1",
        }
    }

    /// Checks qubit range, distinctness, and finite angles.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        check_targets(&self.qubits(), n_qubits)?;
        match self {
            Gate::Phase { theta, .. } | Gate::CPhase { theta, .. } if !theta.is_finite() => {
                Err(Error::InvalidOperand(format!("non-finite angle {theta}")))
            }
            _ => Ok(()),
        }
    }

    /// Exact inverse.
    pub fn inverse(&self) -> Self {
        match self {
            Gate::Phase { target, theta } => Gate::Phase {
                target: *target,
                theta: -theta,
            },
            Gate::CPhase {
                control,
                target,
                theta,
            } => Gate::CPhase {
                control: *control,
                target: *target,
                theta: -theta,
            },
            Gate::Unitary1 { target, matrix } => Gate::Unitary1 {
                target: *target,
                matrix: matrix.adjoint(),
            },
            self_inverse => self_inverse.clone(),
        }
    }

    /// Permutation gates map basis states to basis states.
    pub fn is_classical(&self) -> bool {
        matches!(self, Gate::X(_) | Gate::Cnot { .. } | Gate::Toffoli { .. })
    }

    /// Image of a basis index under a permutation gate; `None` otherwise.
    pub fn apply_to_index(&self, index: usize) -> Option<usize> {
        let bit = |q: usize| index >> q & 1 == 1;
        match *self {
            Gate::X(q) => Some(index ^ 1 << q),
            Gate::Cnot { control, target } => Some(if bit(control) {
                index ^ 1 << target
            } else {
                index
            }),
            Gate::Toffoli { controls, target } => Some(if bit(controls[0]) && bit(controls[1]) {
                index ^ 1 << target
            } else {
                index
            }),
            _ => None,
        }
    }

    /// Local matrix; bit `m` of its index addresses `self.qubits()[m]`.
    pub fn matrix(&self) -> DenseMatrix {
        match self {
            Gate::H(_) => {
                let h = FRAC_1_SQRT_2;
                DenseMatrix::from_real(2, &[h, h, h, -h]).expect("2x2")
            }
            Gate::Phase { theta, .. } => {
                DenseMatrix::from_row_major(2, &[ONE, ZERO, ZERO, C64::from_polar(1.0, *theta)])
                    .expect("2x2")
            }
            Gate::CPhase { theta, .. } => {
                let mut m = DenseMatrix::identity(4);
                m.set(3, 3, C64::from_polar(1.0, *theta));
                m
            }
            Gate::Unitary1 { matrix, .. } => {
                DenseMatrix::from_row_major(2, &matrix.entries()).expect("2x2")
            }
            classical => {
                let d = 1usize << classical.qubits().len();
                // relabel the gate onto local qubits 0..k
                let local = classical.on_qubits(&(0..classical.qubits().len()).collect::<Vec<_>>());
                let mut m = DenseMatrix::zeros(d);
                for c in 0..d {
                    let r = local.apply_to_index(c).expect("classical gate");
                    m.set(r, c, ONE);
                }
                m
            }
        }
    }

    /// Same gate acting on `qubits` (in [`Gate::qubits`] order).
    pub fn on_qubits(&self, qubits: &[usize]) -> Self {
        let q = |i: usize| qubits[i];
        match self {
            Gate::X(_) => Gate::X(q(0)),
            Gate::H(_) => Gate::H(q(0)),
            Gate::Cnot { .. } => Gate::cnot(q(0), q(1)),
            Gate::Toffoli { .. } => Gate::toffoli(q(0), q(1), q(2)),
            Gate::Phase { theta, .. } => Gate::Phase {
                target: q(0),
                theta: *theta,
            },
            Gate::CPhase { theta, .. } => Gate::cphase(q(0), q(1), *theta),
            Gate::Unitary1 { matrix, .. } => Gate::Unitary1 {
                target: q(0),
                matrix: *matrix,
            },
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        match self {
            Gate::Phase { theta, .. } | Gate::CPhase { theta, .. } => write!(f, " {theta:?}"),
            Gate::Unitary1 { matrix, .. } => {
                for z in matrix.entries() {
                    write!(f, " {:?} {:?}", z.re, z.im)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl FromStr for Gate {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, String> {
        let mut tokens = line.split_whitespace();
        let name = tokens.next().ok_or("empty gate line")?.to_ascii_uppercase();
        let rest: Vec<&str> = tokens.collect();
        let (n_idx, n_real) = match name.as_str() {
            "X" | "H" => (1, 0),
            "CNOT" => (2, 0),
            "TOFFOLI" => (3, 0),
            "PHASE" => (1, 1),
            "CPHASE" => (2, 1),
            "U1" => (1, 8),
            other => return Err(format!("unknown gate `{other}`")),
        };
        if rest.len() != n_idx + n_real {
            return Err(format!(
                "{name} takes {} arguments, found {}",
                n_idx + n_real,
                rest.len()
            ));
        }
        let idx = rest[..n_idx]
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| format!("bad qubit index `{t}`")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let reals = rest[n_idx..]
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| format!("bad number `{t}`")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(match name.as_str() {
            "X" => Gate::X(idx[0]),
            "H" => Gate::H(idx[0]),
            "CNOT" => Gate::cnot(idx[0], idx[1]),
            "TOFFOLI" => Gate::toffoli(idx[0], idx[1], idx[2]),
            "PHASE" => Gate::Phase {
                target: idx[0],
                theta: reals[0],
            },
            "CPHASE" => Gate::cphase(idx[0], idx[1], reals[0]),
            _ => {
                let z = |k: usize| C64::new(reals[2 * k], reals[2 * k + 1]);
                let matrix = Unitary2::new([z(0), z(1), z(2), z(3)]).map_err(|e| e.to_string())?;
                Gate::Unitary1 {
                    target: idx[0],
                    matrix,
                }
            }
        })
    }
}

/// Applies `gate` in place. The gate must already be validated.
pub(crate) fn apply_in_place(amps: &mut [C64], gate: &Gate) {
    let flip_where = |amps: &mut [C64], mask: usize, target: usize| {
        let t = 1usize << target;
        for i in 0..amps.len() {
            if i & mask == mask && i & t == 0 {
                amps.swap(i, i | t);
            }
        }
    };
    match *gate {
        Gate::X(q) => flip_where(amps, 0, q),
        Gate::Cnot { control, target } => flip_where(amps, 1 << control, target),
        Gate::Toffoli { controls, target } => {
            flip_where(amps, 1 << controls[0] | 1 << controls[1], target)
        }
        Gate::Phase { target, theta } => {
            let f = C64::from_polar(1.0, theta);
            let mask = 1usize << target;
            amps.iter_mut()
                .enumerate()
                .filter(|(i, _)| i & mask == mask)
                .for_each(|(_, a)| *a *= f);
        }
        Gate::CPhase {
            control,
            target,
            theta,
        } => {
            let f = C64::from_polar(1.0, theta);
            let mask = 1usize << control | 1 << target;
            amps.iter_mut()
                .enumerate()
                .filter(|(i, _)| i & mask == mask)
                .for_each(|(_, a)| *a *= f);
        }
        Gate::H(q) | Gate::Unitary1 { target: q, .. } => {
            apply_unitary_in_place(amps, &gate.matrix(), &[q])
        }
    }
}

/// Applies one gate to a state.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    gate.validate(state.n_qubits())?;
    let mut out = state.clone();
    apply_in_place(out.amplitudes_mut(), gate);
    Ok(out)
}

/// Ordered gate list over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.ops.push(gate);
        Ok(self)
    }

    /// Appends all gates of `other`, which may act on fewer qubits.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        for g in &other.ops {
            self.push(g.clone())?;
        }
        Ok(self)
    }

    /// Copy of this circuit with qubit `q` relabelled to `map[q]`, inside a
    /// register of `n_qubits`.
    pub fn remapped(&self, map: &[usize], n_qubits: usize) -> Result<Circuit> {
        if map.len() < self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: map.len(),
            });
        }
        Circuit::from_gates(
            n_qubits,
            self.ops.iter().map(|g| {
                let qs: Vec<usize> = g.qubits().iter().map(|&q| map[q]).collect();
                g.on_qubits(&qs)
            }),
        )
    }

    /// Gates in reverse order, each replaced by its inverse.
    pub fn reversed(&self) -> Circuit {
        reverse_circuit(self)
    }

    pub fn run(&self, state: &StateVector) -> Result<StateVector> {
        run_circuit(state, self)
    }

    pub fn is_classical(&self) -> bool {
        self.ops.iter().all(Gate::is_classical)
    }

    /// Runs a permutation circuit on one basis index.
    pub fn apply_to_index(&self, index: usize) -> Result<usize> {
        self.ops.iter().try_fold(index, |i, g| {
            g.apply_to_index(i)
                .ok_or_else(|| Error::NonClassical(format!("gate `{g}` is not a permutation")))
        })
    }

    /// Text form, header line included.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.n_qubits);
        for g in &self.ops {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text form.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut declared = None;
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            if let Some(rest) = line.strip_prefix("qubits") {
                if declared.is_some() || !gates.is_empty() {
                    return Err(err("`qubits` header must come first".into()));
                }
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad qubit count `{}`", rest.trim())))?;
                if n == 0 || n > MAX_QUBITS {
                    return Err(err(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
                }
                declared = Some(n);
                continue;
            }
            let gate: Gate = line.parse().map_err(err)?;
            gates.push((lineno + 1, gate));
        }
        let n = declared.unwrap_or_else(|| {
            gates
                .iter()
                .flat_map(|(_, g)| g.qubits())
                .max()
                .map_or(1, |m| m + 1)
        });
        let mut c = Circuit::new(n);
        for (line, g) in gates {
            c.push(g).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(c)
    }
}

/// Runs every gate of `circuit` in order.
pub fn run_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    if circuit.n_qubits > state.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits,
            found: state.n_qubits(),
        });
    }
    let mut out = state.clone();
    for g in &circuit.ops {
        apply_in_place(out.amplitudes_mut(), g);
    }
    Ok(out)
}

/// Reverse-order circuit of inverse gates.
pub fn reverse_circuit(circuit: &Circuit) -> Circuit {
    Circuit {
        n_qubits: circuit.n_qubits,
        ops: circuit.ops.iter().rev().map(Gate::inverse).collect(),
    }
}
