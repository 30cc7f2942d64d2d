//! Default parameters shared by the library and the command-line front end.

/// Seed used when none is given.
pub const SEED: u64 = 0;

/// Attempts a Shor run makes before giving up.
pub const SHOR_MAX_ATTEMPTS: usize = 16;

/// Lamb-Dicke parameter.
pub const ETA: f64 = 0.1;

/// Values of the Lamb-Dicke parameter above this trigger a warning.
pub const ETA_WARN: f64 = 0.3;

/// Highest phonon number kept in the center-of-mass mode.
pub const PHONON_CUTOFF: usize = 2;

/// Rabi frequency; times are measured in units of its inverse.
pub const RABI: f64 = 1.0;

/// Largest population tolerated on the top phonon level during a pulse.
pub const LEAKAGE_TOL: f64 = 1e-6;

/// Dimensionless dephasing exponents `gamma * t` swept by the demos.
pub const GAMMA_T_GRID: [f64; 8] = [0.0, 0.1, 0.25, 0.5, std::f64::consts::LN_2, 1.0, 2.0, 5.0];

/// Monte Carlo trajectories per dephasing estimate.
pub const TRAJECTORIES: usize = 10_000;

/// Bit width of the adder demos.
pub const ADDER_WIDTH: usize = 3;

/// Number of qubits needed to hold every value below `n`.
pub fn bit_width(n: u64) -> usize {
    (64 - n.saturating_sub(1).leading_zeros()) as usize
}

/// First-register width for period finding modulo `n`: `2 * ceil(log2 n) + 3`,
/// which gives 11 for `n = 15`.
pub fn first_register_width(n: u64) -> usize {
    2 * bit_width(n) + 3
}
