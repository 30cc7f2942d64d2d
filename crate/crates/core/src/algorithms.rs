//! Deutsch's algorithm, the quantum Fourier transform and Shor factoring.

use std::cell::Cell;
use std::f64::consts::PI;
use std::fmt;

use log::debug;
use rand::Rng;

use crate::defaults;
use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate};
use crate::numerics::{apply_k_local_unitary, check_targets, DenseMatrix, C64, ZERO};
use crate::report::Record;
use crate::rng;
use crate::state::{MeasurementRecord, StateVector, MAX_QUBITS};

/// Euclid's algorithm.
pub fn gcd(a: u64, b: u64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(Error::BothZero);
    }
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    Ok(a)
}

/// `y / m` in lowest terms as `(j, r)`.
pub fn reduce_fraction(y: u64, m: u64) -> Result<(u64, u64)> {
    let g = gcd(y, m)?;
    Ok((y / g, m / g))
}

/// `base^exp mod modulus`.
pub fn modpow(base: u64, exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let (mut b, mut e, mut acc) = (base as u128 % m, exp, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Continued-fraction convergents `p/q` of `y/m`.
pub fn convergents(y: u64, m: u64) -> Vec<(u64, u64)> {
    let (mut num, mut den) = (y as u128, m as u128);
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    let mut out = Vec::new();
    while den != 0 {
        let a = num / den;
        (num, den) = (den, num - a * den);
        (p0, p1) = (p1, a * p1 + p0);
        (q0, q1) = (q1, a * q1 + q0);
        out.push((p1 as u64, q1 as u64));
    }
    out
}

/// One of the four functions `{0,1} -> {0,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryFunction {
    Const0,
    Const1,
    Identity,
    Negation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Constant,
    Varying,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Constant => "CONSTANT",
            Self::Varying => "VARYING",
        })
    }
}

impl BinaryFunction {
    pub const ALL: [Self; 4] = [Self::Const0, Self::Const1, Self::Identity, Self::Negation];

    pub fn eval(self, x: u8) -> u8 {
        match self {
            Self::Const0 => 0,
            Self::Const1 => 1,
            Self::Identity => x & 1,
            Self::Negation => (x & 1) ^ 1,
        }
    }

    /// `(f(0), f(1))`.
    pub fn table(self) -> (u8, u8) {
        (self.eval(0), self.eval(1))
    }

    pub fn classification(self) -> Classification {
        let (f0, f1) = self.table();
        if f0 == f1 {
            Classification::Constant
        } else {
            Classification::Varying
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Const0 => "const0",
            Self::Const1 => "const1",
            Self::Identity => "identity",
            Self::Negation => "negation",
        }
    }

    /// Permutation matrix of `|x>|y> -> |x>|y ^ f(x)>` with `x` as local
    /// qubit 0.
    pub fn oracle_matrix(self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(4);
        for x in 0..2u8 {
            for y in 0..2u8 {
                let col = (x | y << 1) as usize;
                let row = (x | (y ^ self.eval(x)) << 1) as usize;
                m.set(row, col, C64::new(1.0, 0.0));
            }
        }
        m
    }
}

impl std::str::FromStr for BinaryFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::InvalidOperand(format!(
                    "unknown function `{s}`; expected const0, const1, identity or negation"
                ))
            })
    }
}

/// Black-box access to `f` that counts its uses.
#[derive(Debug)]
pub struct Oracle {
    f: BinaryFunction,
    calls: Cell<usize>,
}

impl Oracle {
    pub fn new(f: BinaryFunction) -> Self {
        Self {
            f,
            calls: Cell::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.get()
    }

    /// Applies `|x>|y> -> |x>|y ^ f(x)>`.
    pub fn apply(&self, state: &StateVector, x: usize, y: usize) -> Result<StateVector> {
        self.calls.set(self.calls.get() + 1);
        apply_k_local_unitary(state, &self.f.oracle_matrix(), &[x, y])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeutschOutcome {
    pub classification: Classification,
    pub measured: usize,
    pub probability: f64,
    pub oracle_calls: usize,
}

/// Decides whether `f` is constant with a single oracle call.
///
/// Qubit 0 holds `x` and qubit 1 holds `y`; the register starts in `|01>`.
pub fn deutsch(f: BinaryFunction, seed: u64) -> Result<DeutschOutcome> {
    let oracle = Oracle::new(f);
    let start = StateVector::basis_state(2, 0b10)?;
    let prepared = Circuit::from_gates(2, [Gate::H(0), Gate::H(1)])?.run(&start)?;
    let queried = oracle.apply(&prepared, 0, 1)?;
    let finished = Circuit::from_gates(2, [Gate::H(0)])?.run(&queried)?;
    let record = crate::state::measure(&finished, &[0], seed)?;
    let classification = if record.outcome == 0 {
        Classification::Constant
    } else {
        Classification::Varying
    };
    Ok(DeutschOutcome {
        classification,
        measured: record.outcome,
        probability: record.probability,
        oracle_calls: oracle.calls(),
    })
}

/// QFT circuit on `register` (least significant qubit first) inside an
/// `n_qubits` state: Hadamards and controlled phase rotations from the top
/// qubit down, then a bit-order reversal.
pub fn qft_circuit(register: &[usize], n_qubits: usize) -> Result<Circuit> {
    check_targets(register, n_qubits)?;
    let m = register.len();
    let mut c = Circuit::new(n_qubits);
    for j in (0..m).rev() {
        c.push(Gate::H(register[j]))?;
        for k in (0..j).rev() {
            let theta = 2.0 * PI / (1u64 << (j - k + 1)) as f64;
            c.push(Gate::cphase(register[k], register[j], theta))?;
        }
    }
    for i in 0..m / 2 {
        let (p, q) = (register[i], register[m - 1 - i]);
        c.push(Gate::cnot(p, q))?;
        c.push(Gate::cnot(q, p))?;
        c.push(Gate::cnot(p, q))?;
    }
    Ok(c)
}

/// `|x> -> M^{-1/2} sum_y exp(2 pi i x y / M) |y>` on `register`.
pub fn qft(state: &StateVector, register: &[usize]) -> Result<StateVector> {
    qft_circuit(register, state.n_qubits())?.run(state)
}

/// `|n>|z> -> |n>|z ^ (a^n mod N)>` on the amplitude array.
pub fn modexp_oracle(
    state: &StateVector,
    reg1: &[usize],
    reg2: &[usize],
    a: u64,
    modulus: u64,
) -> Result<StateVector> {
    let all: Vec<usize> = reg1.iter().chain(reg2).copied().collect();
    check_targets(&all, state.n_qubits())?;
    if modulus < 2 {
        return Err(Error::InvalidOperand(format!("modulus {modulus} < 2")));
    }
    if reg2.len() < defaults::bit_width(modulus) {
        return Err(Error::RegisterTooNarrow {
            width: reg2.len(),
            max_value: modulus - 1,
        });
    }
    if gcd(a, modulus)? != 1 {
        return Err(Error::NotCoprime { a, modulus });
    }
    let table: Vec<u64> = (0..1u64 << reg1.len())
        .map(|n| modpow(a, n, modulus))
        .collect();
    let mut out = vec![ZERO; state.dim()];
    for (i, amp) in state.amplitudes().iter().enumerate() {
        let n = StateVector::register_value(i, reg1) as usize;
        let f = table[n];
        let mask: usize = reg2
            .iter()
            .enumerate()
            .map(|(b, &q)| ((f >> b & 1) as usize) << q)
            .sum();
        out[i ^ mask] = *amp;
    }
    Ok(StateVector::from_raw(state.n_qubits(), out))
}

/// Stage-by-stage period finding for `a` modulo `N`.
///
/// Register 1 is qubits `0..m`, register 2 the next `bit_width(N)` qubits.
#[derive(Debug, Clone)]
pub struct ShorPipeline {
    n: u64,
    a: u64,
    m: usize,
    reg2_width: usize,
}

impl ShorPipeline {
    pub fn new(n: u64, a: u64, m: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOperand(format!("modulus {n} < 2")));
        }
        if a == 0 || a >= n || gcd(a, n)? != 1 {
            return Err(Error::NotCoprime { a, modulus: n });
        }
        let reg2_width = defaults::bit_width(n);
        if m == 0 {
            return Err(Error::InvalidOperand("first register needs at least one qubit".into()));
        }
        if m + reg2_width > MAX_QUBITS {
            return Err(Error::TooManyQubits(m + reg2_width));
        }
        Ok(Self {
            n,
            a,
            m,
            reg2_width,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn base(&self) -> u64 {
        self.a
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn big_m(&self) -> u64 {
        1 << self.m
    }

    pub fn n_qubits(&self) -> usize {
        self.m + self.reg2_width
    }

    pub fn reg1(&self) -> Vec<usize> {
        (0..self.m).collect()
    }

    pub fn reg2(&self) -> Vec<usize> {
        (self.m..self.n_qubits()).collect()
    }

    /// `M^{-1/2} sum_n |n>|a^n mod N>`.
    pub fn prepare(&self) -> Result<StateVector> {
        let hadamards = Circuit::from_gates(self.n_qubits(), self.reg1().into_iter().map(Gate::H))?;
        let uniform = hadamards.run(&StateVector::zero(self.n_qubits()))?;
        modexp_oracle(&uniform, &self.reg1(), &self.reg2(), self.a, self.n)
    }

    pub fn measure_reg2(&self, state: &StateVector, rng: &mut impl Rng) -> Result<MeasurementRecord> {
        state.measure_with(&self.reg2(), rng)
    }

    /// Projects register 2 onto `value`.
    pub fn post_select_reg2(&self, state: &StateVector, value: u64) -> Result<MeasurementRecord> {
        state.project(&self.reg2(), value as usize)
    }

    pub fn apply_qft(&self, state: &StateVector) -> Result<StateVector> {
        qft(state, &self.reg1())
    }

    pub fn measure_reg1(&self, state: &StateVector, rng: &mut impl Rng) -> Result<MeasurementRecord> {
        state.measure_with(&self.reg1(), rng)
    }

    /// Period candidate from a register-1 reading.
    pub fn infer_period(&self, y: u64) -> Option<PeriodEstimate> {
        infer_period(y, self.big_m(), self.a, self.n)
    }
}

/// A period candidate and whether it needed continued fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodEstimate {
    pub r: u64,
    pub fallback: bool,
}

/// Reduces `y/M` and accepts the denominator if `a^r = 1 mod N`; otherwise
/// scans the continued-fraction convergents with denominator below `N`.
pub fn infer_period(y: u64, big_m: u64, a: u64, n: u64) -> Option<PeriodEstimate> {
    if y == 0 {
        return None;
    }
    let (_, r) = reduce_fraction(y, big_m).ok()?;
    if modpow(a, r, n) == 1 {
        return Some(PeriodEstimate { r, fallback: false });
    }
    convergents(y, big_m)
        .into_iter()
        .map(|(_, q)| q)
        .filter(|&q| q > 0 && q < n)
        .find(|&q| modpow(a, q, n) == 1)
        .map(|r| PeriodEstimate { r, fallback: true })
}

/// `gcd(a^{r/2} +- 1, N)` when `r` is even and `a^{r/2} != -1 mod N`.
pub fn factors_from_period(a: u64, r: u64, n: u64) -> Option<(u64, u64)> {
    if r % 2 != 0 {
        return None;
    }
    let x = modpow(a, r / 2, n);
    if x == n - 1 {
        return None;
    }
    let p = gcd((x + n - 1) % n, n).ok()?;
    let q = gcd(x + 1, n).ok()?;
    [p, q]
        .into_iter()
        .find(|&d| d > 1 && d < n)
        .map(|d| (d.min(n / d), d.max(n / d)))
}

/// Parameters of a factoring run.
#[derive(Debug, Clone, PartialEq)]
pub struct ShorConfig {
    pub n: u64,
    /// Fixed base; a fresh random coprime base is drawn per attempt if absent.
    pub base: Option<u64>,
    /// First-register width; see [`defaults::first_register_width`].
    pub m: Option<usize>,
    pub seed: u64,
    pub max_attempts: usize,
}

impl ShorConfig {
    pub fn new(n: u64, seed: u64) -> Self {
        Self {
            n,
            base: None,
            m: None,
            seed,
            max_attempts: defaults::SHOR_MAX_ATTEMPTS,
        }
    }
}

/// A successful factoring run.
#[derive(Debug, Clone, PartialEq)]
pub struct ShorRun {
    pub n: u64,
    pub a: u64,
    pub m: usize,
    pub big_m: u64,
    pub measured_reg2: u64,
    pub measured_y: u64,
    pub inferred_r: u64,
    pub used_fallback: bool,
    pub factors: (u64, u64),
    pub seed: u64,
    pub attempts: usize,
    pub log: Vec<Record>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Rejects inputs the quantum routine cannot factor: primes, even numbers
/// and prime powers.
pub fn check_factorable(n: u64) -> Result<()> {
    if n < 4 || is_prime(n) {
        return Err(Error::NotComposite(n));
    }
    if n % 2 == 0 {
        return Err(Error::InvalidOperand(format!("{n} is even; 2 is a factor")));
    }
    for exponent in 2..64 {
        let base = (n as f64).powf(1.0 / exponent as f64).round() as u64;
        for b in base.saturating_sub(1)..=base + 1 {
            if b >= 2 && b.checked_pow(exponent) == Some(n) {
                return Err(Error::PrimePower {
                    n,
                    base: b,
                    exponent,
                });
            }
        }
        if base < 2 {
            break;
        }
    }
    Ok(())
}

fn random_coprime(n: u64, rng: &mut impl Rng) -> u64 {
    loop {
        let a = rng.random_range(2..n);
        if gcd(a, n) == Ok(1) {
            return a;
        }
    }
}

/// Factors `N` by period finding, retrying with fresh randomness until a
/// nontrivial factor pair is found or the attempt budget runs out.
pub fn shor_factor(cfg: &ShorConfig) -> Result<ShorRun> {
    check_factorable(cfg.n)?;
    let n = cfg.n;
    let m = cfg.m.unwrap_or_else(|| defaults::first_register_width(n));
    if let Some(a) = cfg.base {
        ShorPipeline::new(n, a, m)?;
    }
    let mut log = vec![Record::new("config")
        .with("n", n)
        .with("m", m)
        .with("big_m", 1u64 << m)
        .with("seed", cfg.seed)
        .with("rng", rng::RNG_ALGORITHM)
        .with("max_attempts", cfg.max_attempts)];
    for attempt in 0..cfg.max_attempts {
        let mut rng = rng::stream(cfg.seed, attempt as u64);
        let a = match cfg.base {
            Some(a) => a,
            None => random_coprime(n, &mut rng),
        };
        let pipeline = ShorPipeline::new(n, a, m)?;
        log.push(Record::new("attempt").with("index", attempt).with("a", a));

        let state = pipeline.prepare()?;
        log.push(
            Record::new("state_prepared")
                .with("qubits", pipeline.n_qubits())
                .with("reg1_width", m)
                .with("reg2_width", pipeline.reg2().len()),
        );
        let reg2 = pipeline.measure_reg2(&state, &mut rng)?;
        log.push(
            Record::new("reg2_measured")
                .with("value", reg2.outcome)
                .with("probability", format!("{:.6}", reg2.probability)),
        );
        let transformed = pipeline.apply_qft(&reg2.post_state)?;
        log.push(Record::new("qft_applied").with("register", format!("0..{m}")));
        let reg1 = pipeline.measure_reg1(&transformed, &mut rng)?;
        let y = reg1.outcome as u64;
        log.push(
            Record::new("reg1_measured")
                .with("y", y)
                .with("probability", format!("{:.6}", reg1.probability)),
        );
        if y == 0 {
            log.push(Record::new("fraction_reduced").with("outcome", "indeterminate"));
            debug!("attempt {attempt}: y = 0");
            continue;
        }
        let (j, r0) = reduce_fraction(y, pipeline.big_m())?;
        log.push(Record::new("fraction_reduced").with("j", j).with("r", r0));
        let Some(est) = pipeline.infer_period(y) else {
            log.push(Record::new("period").with("outcome", "not_found"));
            continue;
        };
        log.push(
            Record::new("period")
                .with("r", est.r)
                .with("fallback", est.fallback),
        );
        match factors_from_period(a, est.r, n) {
            Some((p, q)) => {
                log.push(Record::new("factors").with("p", p).with("q", q));
                return Ok(ShorRun {
                    n,
                    a,
                    m,
                    big_m: pipeline.big_m(),
                    measured_reg2: reg2.outcome as u64,
                    measured_y: y,
                    inferred_r: est.r,
                    used_fallback: est.fallback,
                    factors: (p, q),
                    seed: cfg.seed,
                    attempts: attempt + 1,
                    log,
                });
            }
            None => log.push(Record::new("factors").with("outcome", "trivial")),
        }
    }
    Err(Error::RetriesExhausted {
        attempts: cfg.max_attempts,
        log,
    })
}
