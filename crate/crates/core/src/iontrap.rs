//! Pulse-level model of two-qubit gates in a linear ion trap.
//!
//! Each ion has levels `|0>`, `|1>` and an auxiliary `|2>`; all ions share
//! one center-of-mass phonon mode truncated at `phonon_cutoff`. Pulses act
//! through interaction-picture Hamiltonians: a NODE pulse drives the red
//! sideband `|upper, n> <-> |0, n+1>`, an ANTINODE pulse drives the carrier
//! `|1, n> <-> |0, n>`.
//!
//! Basis index: `phonon + (cutoff + 1) * sum_i level_i * 3^i`. Ion `i`
//! holds qubit `i`; ion 0 is the control of the two-ion gates.

use std::f64::consts::PI;

use log::warn;

use crate::defaults;
use crate::error::{Error, Result};
use crate::numerics::{matrix_exp_hermitian, DenseMatrix, C64, ZERO};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// Ion at a node of the standing wave: red sideband.
    Node,
    /// Ion at an antinode: carrier.
    Antinode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    ZeroOne,
    ZeroTwo,
}

impl Transition {
    fn upper(self) -> usize {
        match self {
            Self::ZeroOne => 1,
            Self::ZeroTwo => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub ion: usize,
    pub coupling: Coupling,
    pub transition: Transition,
    pub phase: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IonTrapSystem {
    n_ions: usize,
    phonon_cutoff: usize,
    rabi: f64,
    eta: f64,
}

/// Amplitudes over ion levels and phonon number.
#[derive(Debug, Clone, PartialEq)]
pub struct IonTrapState {
    amps: Vec<C64>,
}

impl IonTrapState {
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

impl IonTrapSystem {
    pub fn new(n_ions: usize, phonon_cutoff: usize, rabi: f64, eta: f64) -> Result<Self> {
        if !(1..=3).contains(&n_ions) {
            return Err(Error::InvalidOperand(format!("{n_ions} ions; 1 to 3 supported")));
        }
        if !(rabi > 0.0 && rabi.is_finite()) {
            return Err(Error::InvalidOperand(format!("Rabi frequency {rabi} must be positive")));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidOperand(format!("Lamb-Dicke parameter {eta} must be positive")));
        }
        if eta > defaults::ETA_WARN {
            warn!("Lamb-Dicke parameter {eta} is outside the eta << 1 regime");
        }
        Ok(Self {
            n_ions,
            phonon_cutoff,
            rabi,
            eta,
        })
    }

    /// Two ions with the default cutoff, Rabi frequency and Lamb-Dicke
    /// parameter.
    pub fn pair() -> Self {
        Self::new(2, defaults::PHONON_CUTOFF, defaults::RABI, defaults::ETA).expect("valid defaults")
    }

    pub fn with_cutoff(&self, phonon_cutoff: usize) -> Self {
        Self {
            phonon_cutoff,
            ..self.clone()
        }
    }

    pub fn n_ions(&self) -> usize {
        self.n_ions
    }

    pub fn phonon_cutoff(&self) -> usize {
        self.phonon_cutoff
    }

    pub fn rabi(&self) -> f64 {
        self.rabi
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn phonon_dim(&self) -> usize {
        self.phonon_cutoff + 1
    }

    pub fn dim(&self) -> usize {
        3usize.pow(self.n_ions as u32) * self.phonon_dim()
    }

    pub fn index(&self, levels: &[usize], phonon: usize) -> usize {
        let ion_part: usize = levels
            .iter()
            .rev()
            .fold(0, |acc, &l| acc * 3 + l);
        phonon + self.phonon_dim() * ion_part
    }

    /// `(levels, phonon)` of a basis index.
    pub fn decode(&self, index: usize) -> (Vec<usize>, usize) {
        let phonon = index % self.phonon_dim();
        let mut rest = index / self.phonon_dim();
        let levels = (0..self.n_ions)
            .map(|_| {
                let l = rest % 3;
                rest /= 3;
                l
            })
            .collect();
        (levels, phonon)
    }

    pub fn basis_state(&self, levels: &[usize], phonon: usize) -> Result<IonTrapState> {
        if levels.len() != self.n_ions {
            return Err(Error::DimensionMismatch {
                expected: self.n_ions,
                found: levels.len(),
            });
        }
        if levels.iter().any(|&l| l > 2) || phonon > self.phonon_cutoff {
            return Err(Error::InvalidOperand(format!(
                "levels {levels:?} with phonon {phonon} not in the model"
            )));
        }
        let mut amps = vec![ZERO; self.dim()];
        amps[self.index(levels, phonon)] = C64::new(1.0, 0.0);
        Ok(IonTrapState { amps })
    }

    /// Embeds a qubit register (qubit `i` on ion `i`) with the phonon mode
    /// in `|phonon>`.
    pub fn from_qubits(&self, qubits: &StateVector, phonon: usize) -> Result<IonTrapState> {
        if qubits.n_qubits() != self.n_ions {
            return Err(Error::DimensionMismatch {
                expected: self.n_ions,
                found: qubits.n_qubits(),
            });
        }
        if phonon > self.phonon_cutoff {
            return Err(Error::InvalidOperand(format!("phonon {phonon} above cutoff")));
        }
        let mut amps = vec![ZERO; self.dim()];
        for (b, a) in qubits.amplitudes().iter().enumerate() {
            amps[self.index(&self.qubit_levels(b), phonon)] = *a;
        }
        Ok(IonTrapState { amps })
    }

    fn qubit_levels(&self, b: usize) -> Vec<usize> {
        (0..self.n_ions).map(|i| b >> i & 1).collect()
    }

    /// Duration of a red-sideband pi pulse between phonon numbers 0 and 1.
    pub fn sideband_pi_time(&self) -> f64 {
        PI / (self.rabi * self.eta / (self.n_ions as f64).sqrt())
    }

    /// Duration of a carrier pulse of area `theta`.
    pub fn carrier_time(&self, theta: f64) -> f64 {
        theta / self.rabi
    }

    fn validate(&self, pulse: &Pulse) -> Result<()> {
        if pulse.ion >= self.n_ions {
            return Err(Error::InvalidPulse(format!(
                "ion {} out of range for {} ions",
                pulse.ion, self.n_ions
            )));
        }
        if !(pulse.duration > 0.0 && pulse.duration.is_finite()) {
            return Err(Error::InvalidPulse(format!("duration {} must be positive", pulse.duration)));
        }
        if !pulse.phase.is_finite() {
            return Err(Error::InvalidPulse("phase must be finite".into()));
        }
        if pulse.transition == Transition::ZeroTwo && pulse.coupling == Coupling::Antinode {
            return Err(Error::InvalidPulse("the 0-2 transition is driven only at the node".into()));
        }
        Ok(())
    }

    /// Hamiltonian of `pulse` on the full ion-phonon space.
    pub fn build_hamiltonian(&self, pulse: &Pulse) -> Result<DenseMatrix> {
        self.validate(pulse)?;
        let upper = pulse.transition.upper();
        let phase = C64::from_polar(1.0, pulse.phase);
        let mut h = DenseMatrix::zeros(self.dim());
        for col in 0..self.dim() {
            let (levels, n) = self.decode(col);
            if levels[pulse.ion] != 0 {
                continue;
            }
            let mut raised = levels.clone();
            raised[pulse.ion] = upper;
            let (row, element) = match pulse.coupling {
                // <upper, n-1| H |0, n> = g sqrt(n) e^{i phi}
                Coupling::Node => {
                    if n == 0 {
                        continue;
                    }
                    let g = self.eta * self.rabi / (2.0 * (self.n_ions as f64).sqrt());
                    (self.index(&raised, n - 1), phase * g * (n as f64).sqrt())
                }
                Coupling::Antinode => (self.index(&raised, n), phase * (self.rabi / 2.0)),
            };
            h.set(row, col, element);
            h.set(col, row, element.conj());
        }
        Ok(h)
    }

    /// Population on states whose sideband partner lies above the cutoff.
    fn truncation_population(&self, state: &IonTrapState, pulse: &Pulse) -> f64 {
        if pulse.coupling != Coupling::Node {
            return 0.0;
        }
        let upper = pulse.transition.upper();
        state
            .amps
            .iter()
            .enumerate()
            .filter(|&(i, _)| {
                let (levels, n) = self.decode(i);
                levels[pulse.ion] == upper && n == self.phonon_cutoff
            })
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Evolves `state` under the pulse for its duration.
    pub fn apply_pulse(&self, state: &IonTrapState, pulse: &Pulse) -> Result<IonTrapState> {
        if state.amps.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.amps.len(),
            });
        }
        let h = self.build_hamiltonian(pulse)?;
        let leak_before = self.truncation_population(state, pulse);
        if leak_before > defaults::LEAKAGE_TOL {
            return Err(Error::PhononLeakage {
                population: leak_before,
            });
        }
        let u = matrix_exp_hermitian(&h, pulse.duration)?;
        let out = IonTrapState {
            amps: u.mul_vec(&state.amps),
        };
        let leak_after = self.truncation_population(&out, pulse);
        if leak_after > defaults::LEAKAGE_TOL {
            return Err(Error::PhononLeakage {
                population: leak_after,
            });
        }
        Ok(out)
    }

    pub fn run_sequence(&self, state: &IonTrapState, pulses: &[Pulse]) -> Result<IonTrapState> {
        pulses
            .iter()
            .try_fold(state.clone(), |s, p| self.apply_pulse(&s, p))
    }

    fn sideband(&self, ion: usize, transition: Transition, area: f64) -> Pulse {
        Pulse {
            ion,
            coupling: Coupling::Node,
            transition,
            phase: 0.0,
            duration: area / PI * self.sideband_pi_time(),
        }
    }

    fn carrier(&self, ion: usize, theta: f64, phase: f64) -> Pulse {
        Pulse {
            ion,
            coupling: Coupling::Antinode,
            transition: Transition::ZeroOne,
            phase,
            duration: self.carrier_time(theta),
        }
    }

    fn check_pair(&self) -> Result<()> {
        if self.n_ions == 2 {
            Ok(())
        } else {
            Err(Error::InvalidOperand(format!(
                "two-qubit sequences need 2 ions, have {}",
                self.n_ions
            )))
        }
    }

    /// Sideband pi on the control, 2 pi on the target's 0-2 transition,
    /// sideband pi on the control.
    pub fn controlled_phase_sequence(&self) -> Result<Vec<Pulse>> {
        self.check_pair()?;
        Ok(vec![
            self.sideband(0, Transition::ZeroOne, PI),
            self.sideband(1, Transition::ZeroTwo, 2.0 * PI),
            self.sideband(0, Transition::ZeroOne, PI),
        ])
    }

    /// Carrier pi/2 on the target, the controlled phase, carrier 3 pi/2 on
    /// the target; both carrier pulses at phase -pi/2.
    pub fn cnot_sequence(&self) -> Result<Vec<Pulse>> {
        let mut pulses = vec![self.carrier(1, PI / 2.0, -PI / 2.0)];
        pulses.extend(self.controlled_phase_sequence()?);
        pulses.push(self.carrier(1, 3.0 * PI / 2.0, -PI / 2.0));
        Ok(pulses)
    }

    /// Projection onto the qubit subspace with the phonon mode in `|phonon>`.
    pub fn qubit_amplitudes(&self, state: &IonTrapState, phonon: usize) -> Vec<C64> {
        (0..1usize << self.n_ions)
            .map(|b| state.amps[self.index(&self.qubit_levels(b), phonon)])
            .collect()
    }

    /// Matrix of the sequence on the qubit subspace, phonon mode starting
    /// and ending in `|phonon>`.
    pub fn qubit_map(&self, pulses: &[Pulse], phonon: usize) -> Result<DenseMatrix> {
        let d = 1usize << self.n_ions;
        let mut m = DenseMatrix::zeros(d);
        for col in 0..d {
            let input = self.basis_state(&self.qubit_levels(col), phonon)?;
            let out = self.run_sequence(&input, pulses)?;
            for (row, a) in self.qubit_amplitudes(&out, phonon).into_iter().enumerate() {
                m.set(row, col, a);
            }
        }
        Ok(m)
    }

    /// Total population with any ion in the auxiliary level.
    pub fn aux_population(&self, state: &IonTrapState) -> f64 {
        state
            .amps
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.decode(i).0.contains(&2))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Total population with at least one phonon.
    pub fn phonon_excited_population(&self, state: &IonTrapState) -> f64 {
        state
            .amps
            .iter()
            .enumerate()
            .filter(|&(i, _)| i % self.phonon_dim() != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Overlap `<target| rho_ions |target>` of the ions' reduced state with
    /// a qubit state, the phonon mode traced out.
    pub fn qubit_fidelity(&self, state: &IonTrapState, target: &StateVector) -> f64 {
        (0..self.phonon_dim())
            .map(|n| {
                self.qubit_amplitudes(state, n)
                    .iter()
                    .zip(target.amplitudes())
                    .map(|(a, t)| t.conj() * a)
                    .sum::<C64>()
                    .norm_sqr()
            })
            .sum()
    }
}
