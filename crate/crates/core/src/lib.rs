//! Desk-scale quantum computation simulator.
//!
//! The crate covers elementary gates and entanglement, reversible arithmetic
//! networks, Deutsch's algorithm, Shor factoring of small numbers, a
//! pulse-level trapped-ion CNOT, dephasing and Pauli error channels, and the
//! 3-qubit bit-flip and phase-flip codes.
//!
//! Qubit `i` of a register carries binary weight `2^i`; ket labels such as
//! `|01>` list qubit 0 first.

pub mod algorithms;
pub mod arithmetic;
pub mod defaults;
pub mod error;
pub mod gates;
pub mod iontrap;
pub mod noise;
pub mod numerics;
pub mod report;
pub mod rng;
pub mod state;

pub use error::{Error, Result};
pub use gates::{Circuit, Gate};
pub use numerics::{DenseMatrix, C64};
pub use state::{DensityMatrix, MeasurementRecord, StateVector};
