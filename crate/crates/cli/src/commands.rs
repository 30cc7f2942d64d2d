//! One function per subcommand. Each returns prose lines and the same facts
//! as run records.

use std::path::Path;

use qdesk::algorithms::{self, BinaryFunction, ShorConfig};
use qdesk::arithmetic::{self, GarbagePipeline};
use qdesk::defaults;
use qdesk::gates::{Circuit, Gate};
use qdesk::iontrap::IonTrapSystem;
use qdesk::noise::{self, CodeKind, DephasingChannel, Pauli, PauliError, Recovery, Verdict};
use qdesk::report::{render, Record};
use qdesk::rng::RNG_ALGORITHM;
use qdesk::state::{measure, schmidt, DensityMatrix, StateVector};
use qdesk::{Error, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Retries exhausted or an uncorrectable error.
    Failed,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub seed: u64,
    pub lines: Vec<String>,
    pub records: Vec<Record>,
    pub status: Status,
}

impl Outcome {
    fn new() -> Self {
        Self {
            seed: 0,
            lines: Vec::new(),
            records: Vec::new(),
            status: Status::Ok,
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn record(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn render(&self, records: bool) -> String {
        if records {
            let mut all = vec![Record::new("config")
                .with("seed", self.seed)
                .with("rng", RNG_ALGORITHM)];
            all.extend(self.records.iter().cloned());
            render(&all)
        } else {
            let mut out = format!("seed: {} ({RNG_ALGORITHM})\n", self.seed);
            for l in &self.lines {
                out.push_str(l);
                out.push('\n');
            }
            out
        }
    }
}

type CmdResult = Result<Outcome, String>;

fn fail(e: Error) -> String {
    e.to_string()
}

fn fmt_amp(a: C64) -> String {
    format!("{:+.6}{:+.6}i", a.re, a.im)
}

fn describe_state(state: &StateVector) -> Vec<String> {
    state
        .support(1e-12)
        .into_iter()
        .map(|i| {
            format!(
                "  {}  {}  p={:.6}",
                StateVector::ket_label(i, state.n_qubits()),
                fmt_amp(state.amplitude(i)),
                state.probability(i)
            )
        })
        .collect()
}

pub fn epr(seed: u64) -> CmdResult {
    let mut o = Outcome::new();
    let circuit = Circuit::from_gates(2, [Gate::H(0), Gate::cnot(0, 1), Gate::X(1)]).map_err(fail)?;
    let state = circuit.run(&StateVector::zero(2)).map_err(fail)?;
    let sc = schmidt(&state, &[0]).map_err(fail)?;
    let rec = measure(&state, &[0, 1], seed).map_err(fail)?;
    o.line("circuit: H 0; CNOT 0 1; X 1");
    o.line("state:");
    o.lines.extend(describe_state(&state));
    o.line(format!(
        "schmidt coefficients: {}",
        sc.coefficients.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>().join(", ")
    ));
    o.line(format!("entangled: {}", !sc.is_product()));
    o.line(format!(
        "measured: |{}> with probability {:.6}",
        rec.bits(),
        rec.probability
    ));
    o.record(
        Record::new("state")
            .with("qubits", 2)
            .with("support", state.support(1e-12).iter().map(|i| StateVector::ket_label(*i, 2)).collect::<Vec<_>>().join(",")),
    );
    o.record(
        Record::new("schmidt")
            .with("c0", format!("{:.6}", sc.coefficients[0]))
            .with("c1", format!("{:.6}", sc.coefficients[1]))
            .with("entangled", !sc.is_product()),
    );
    o.record(
        Record::new("measured")
            .with("bits", rec.bits())
            .with("probability", format!("{:.6}", rec.probability)),
    );
    Ok(o)
}

pub fn deutsch(function: &str, seed: u64) -> CmdResult {
    let f: BinaryFunction = function.parse().map_err(fail)?;
    let out = algorithms::deutsch(f, seed).map_err(fail)?;
    let (f0, f1) = f.table();
    let mut o = Outcome::new();
    o.line(format!("function: {} (f(0)={f0}, f(1)={f1})", f.name()));
    o.line(format!("oracle queries: {}", out.oracle_calls));
    o.line(format!(
        "{} (measured {}, probability {:.6})",
        out.classification, out.measured, out.probability
    ));
    o.record(
        Record::new("function")
            .with("name", f.name())
            .with("f0", f0)
            .with("f1", f1),
    );
    o.record(
        Record::new("result")
            .with("oracle_calls", out.oracle_calls)
            .with("measured", out.measured)
            .with("probability", format!("{:.6}", out.probability))
            .with("classification", out.classification),
    );
    Ok(o)
}

fn carries(clean: bool) -> &'static str {
    if clean {
        "carries clean"
    } else {
        "carries NOT clean"
    }
}

pub fn add(a: u64, b: u64, bits: usize) -> CmdResult {
    let net = arithmetic::build_adder(bits).map_err(fail)?;
    let out = net.run_basis(a, b).map_err(fail)?;
    let mut o = Outcome::new();
    o.line(format!(
        "adder: {bits} bits, {} qubits, {} gates",
        net.layout.total_qubits(),
        net.circuit.len()
    ));
    o.line(format!("({a}, {b}) -> ({}, {}), {}", out.a, out.b, carries(out.scratch_clean)));
    o.record(
        Record::new("adder")
            .with("bits", bits)
            .with("qubits", net.layout.total_qubits())
            .with("gates", net.circuit.len()),
    );
    o.record(
        Record::new("result")
            .with("a", out.a)
            .with("b", out.b)
            .with("carries_clean", out.scratch_clean),
    );
    Ok(o)
}

pub fn sub(a: u64, b: u64, bits: usize) -> CmdResult {
    let d = arithmetic::run_reversed_adder(bits, a, b).map_err(fail)?;
    let mut o = Outcome::new();
    o.line(format!("reversed adder: {bits} bits"));
    o.line(format!(
        "{a} - {b} -> {} (overflow {}), {}",
        d.result,
        u8::from(d.overflow),
        carries(d.scratch_clean)
    ));
    if d.overflow {
        o.line(format!("negative: {} = 2^{} - {}", d.result, bits + 1, b - a));
    }
    o.record(
        Record::new("result")
            .with("a", a)
            .with("b", b)
            .with("value", d.result)
            .with("overflow", d.overflow)
            .with("carries_clean", d.scratch_clean),
    );
    Ok(o)
}

pub fn modexp(a: u64, x: u64, n: u64) -> CmdResult {
    let value = arithmetic::modexp_by_repeated_mul(a, x, n).map_err(fail)?;
    let classical = algorithms::modpow(a, x, n);
    let mut o = Outcome::new();
    o.line(format!("{a}^{x} mod {n} = {value} (classical {classical})"));
    let seq: Vec<String> = (0..8.min(x + 1))
        .map(|k| arithmetic::modexp_by_repeated_mul(a, k, n).map(|v| v.to_string()))
        .collect::<qdesk::Result<_>>()
        .map_err(fail)?;
    o.line(format!("{a}^k mod {n} for k = 0..{}: {}", seq.len() - 1, seq.join(", ")));
    o.record(
        Record::new("result")
            .with("a", a)
            .with("x", x)
            .with("n", n)
            .with("value", value)
            .with("classical", classical),
    );
    Ok(o)
}

pub fn garbage(input: u64) -> CmdResult {
    let f = arithmetic::increment_network(3).map_err(fail)?;
    let pipeline = GarbagePipeline::new(&f, 3, 4).map_err(fail)?;
    let registers = |s: &StateVector| -> Result<Vec<u64>, String> {
        let idx = s
            .as_basis_state(1e-12)
            .ok_or_else(|| "state is not a basis state".to_string())?;
        Ok((0..6)
            .map(|k| StateVector::register_value(idx, &pipeline.register(k).collect::<Vec<_>>()))
            .collect())
    };
    let basis = StateVector::basis_state(3, input).map_err(fail)?;
    let trace = pipeline.run(&basis).map_err(fail)?;
    let fmt = |v: &[u64]| v.iter().map(|x| format!("|{x}>")).collect::<Vec<_>>().join("");
    let computed = registers(&trace.after_compute)?;
    let copied = registers(&trace.after_copy)?;
    let cleaned = registers(&trace.output)?;

    let uniform = pipeline.run(&StateVector::uniform(3)).map_err(fail)?;
    let garbage = pipeline.garbage_qubits();
    let clean = uniform.output.marginal(&garbage).map_err(fail)?[0];
    let second = schmidt(&uniform.output, &garbage)
        .map_err(fail)?
        .coefficients
        .get(1)
        .copied()
        .unwrap_or(0.0);
    let mixed = uniform
        .after_copy
        .reduced_density(&pipeline.kept_qubits())
        .map_err(fail)?
        .purity();

    let mut o = Outcome::new();
    o.line("f(x) = x + 1 mod 8, four stages, registers x r1 r2 r3 r4 copy");
    o.line(format!("after compute:   {}", fmt(&computed)));
    o.line(format!("after copy:      {}", fmt(&copied)));
    o.line(format!("after uncompute: {}", fmt(&cleaned)));
    o.line("uniform input:");
    o.line(format!("  garbage reads zero with probability {clean:.6}"));
    o.line(format!("  second Schmidt coefficient across garbage {second:.3e}"));
    o.line(format!("  purity of (x, copy) without uncompute {mixed:.6}"));
    o.record(Record::new("after_compute").with("registers", fmt(&computed)));
    o.record(Record::new("after_copy").with("registers", fmt(&copied)));
    o.record(Record::new("after_uncompute").with("registers", fmt(&cleaned)));
    o.record(
        Record::new("uniform")
            .with("garbage_zero_probability", format!("{clean:.6}"))
            .with("second_schmidt", format!("{second:.3e}"))
            .with("purity_without_uncompute", format!("{mixed:.6}")),
    );
    Ok(o)
}

fn describe_log(o: &mut Outcome, log: &[Record]) {
    for r in log {
        let facts: Vec<String> = r.fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        o.line(format!("{:<16} {}", r.stage, facts.join(" ")));
    }
    o.records.extend(log.iter().cloned());
}

pub fn shor(n: u64, base: Option<u64>, m: Option<usize>, attempts: usize, seed: u64) -> CmdResult {
    let mut cfg = ShorConfig::new(n, seed);
    cfg.base = base;
    cfg.m = m;
    cfg.max_attempts = attempts;
    let mut o = Outcome::new();
    match algorithms::shor_factor(&cfg) {
        Ok(run) => {
            describe_log(&mut o, &run.log);
            o.line(format!("factors: {} × {}", run.factors.0, run.factors.1));
        }
        Err(Error::RetriesExhausted { attempts, log }) => {
            describe_log(&mut o, &log);
            o.line(format!("no factors after {attempts} attempts"));
            o.record(Record::new("result").with("status", "retries_exhausted"));
            o.status = Status::Failed;
        }
        Err(e) => return Err(fail(e)),
    }
    Ok(o)
}

pub fn iontrap_cnot(eta: f64, rabi: f64, cutoff: usize, phonon: usize) -> CmdResult {
    let sys = IonTrapSystem::new(2, cutoff, rabi, eta).map_err(fail)?;
    let cz_pulses = sys.controlled_phase_sequence().map_err(fail)?;
    let cnot_pulses = sys.cnot_sequence().map_err(fail)?;
    let cz_ideal = Circuit::from_gates(2, [Gate::cphase(0, 1, std::f64::consts::PI)]).map_err(fail)?;
    let cnot_ideal = Circuit::from_gates(2, [Gate::cnot(0, 1)]).map_err(fail)?;
    let mut o = Outcome::new();
    o.line(format!(
        "two ions, eta={eta}, rabi={rabi}, phonon cutoff {cutoff}, initial phonon {phonon}"
    ));
    o.line(format!("sideband pi time {:.6}", sys.sideband_pi_time()));
    let mut aux: f64 = 0.0;
    for (name, pulses, ideal) in [("cphase", &cz_pulses, &cz_ideal), ("cnot", &cnot_pulses, &cnot_ideal)] {
        o.line(format!("{name} ({} pulses): input -> achieved | target | fidelity", pulses.len()));
        for b in 0..4 {
            let input = StateVector::basis_state(2, b).map_err(fail)?;
            let start = sys.from_qubits(&input, phonon).map_err(fail)?;
            let out = sys.run_sequence(&start, pulses).map_err(fail)?;
            aux = aux.max(sys.aux_population(&out));
            let target = ideal.run(&input).map_err(fail)?;
            let fidelity = sys.qubit_fidelity(&out, &target);
            let achieved = sys.qubit_amplitudes(&out, phonon);
            let best = (0..4)
                .max_by(|&x, &y| achieved[x].norm().total_cmp(&achieved[y].norm()))
                .unwrap_or(0);
            let target_idx = target.as_basis_state(1e-12).unwrap_or(best);
            let label = |i| StateVector::ket_label(i, 2);
            o.line(format!(
                "  {} -> {} {} | {} | {fidelity:.9}",
                label(b as usize),
                fmt_amp(achieved[best]),
                label(best),
                label(target_idx)
            ));
            o.record(
                Record::new(name)
                    .with("input", label(b as usize))
                    .with("output", label(best))
                    .with("amplitude", fmt_amp(achieved[best]))
                    .with("fidelity", format!("{fidelity:.9}")),
            );
        }
    }
    o.line(format!("auxiliary level population at end: {aux:.3e}"));
    o.record(Record::new("leakage").with("aux_population", format!("{aux:.3e}")));
    Ok(o)
}

pub fn dephase(qubits: usize, gamma: f64, t: Option<f64>, trajectories: usize, seed: u64) -> CmdResult {
    if !(1..=5).contains(&qubits) {
        return Err(format!("--qubits {qubits}: expected 1 to 5"));
    }
    if !(gamma > 0.0) && t.is_none() {
        return Err("--gamma must be positive to sweep the gamma*t grid".into());
    }
    let times: Vec<f64> = match t {
        Some(t) => vec![t],
        None => defaults::GAMMA_T_GRID.iter().map(|gt| gt / gamma).collect(),
    };
    let ghz = noise::ghz_state(qubits).map_err(fail)?;
    let rho = DensityMatrix::from_pure(&ghz);
    let all: Vec<usize> = (0..qubits).collect();
    let corner = (1 << qubits) - 1;
    let mut o = Outcome::new();
    o.line(format!(
        "{qubits}-qubit GHZ state, gamma={gamma}, {trajectories} trajectories per point"
    ));
    o.line(format!("{:>10} {:>14} {:>14} {:>14}", "t", "channel", "expected", "trajectories"));
    for (k, &t) in times.iter().enumerate() {
        let ch = DephasingChannel::new(gamma, t).map_err(fail)?;
        let exact = noise::apply_dephasing(&rho, &ch, &all).map_err(fail)?;
        let mc = noise::dephasing_trajectories(&ghz, &ch, &all, trajectories, seed.wrapping_add(k as u64))
            .map_err(|e| e.to_string())?;
        let expected = 0.5 * (-(qubits as f64) * gamma * t).exp();
        let c = exact.entry(0, corner).norm();
        let m = mc.entry(0, corner).norm();
        o.line(format!("{t:>10.4} {c:>14.8} {expected:>14.8} {m:>14.8}"));
        o.record(
            Record::new("coherence")
                .with("t", format!("{t:.6}"))
                .with("channel", format!("{c:.10}"))
                .with("expected", format!("{expected:.10}"))
                .with("trajectories", format!("{m:.6}")),
        );
    }
    Ok(o)
}

fn parse_error(s: &str) -> Result<PauliError, String> {
    let mut chars = s.chars();
    let kind: Pauli = chars
        .next()
        .ok_or_else(|| "empty --error".to_string())?
        .to_string()
        .parse()
        .map_err(fail)?;
    let qubit: usize = chars
        .as_str()
        .parse()
        .map_err(|_| format!("--error {s}: expected a Pauli letter and a qubit, e.g. x0"))?;
    if qubit >= 3 {
        return Err(format!("--error {s}: qubit must be 0, 1 or 2"));
    }
    Ok(PauliError::new(kind, qubit))
}

pub fn qec(code: &str, errors: &[String], recovery: &str, alpha: f64, beta: f64, seed: u64) -> CmdResult {
    let code: CodeKind = code.parse().map_err(fail)?;
    let recovery: Recovery = recovery.parse().map_err(fail)?;
    let errors: Vec<PauliError> = errors.iter().map(|e| parse_error(e)).collect::<Result<_, _>>()?;
    let psi = StateVector::normalized(vec![C64::new(alpha, 0.0), C64::new(beta, 0.0)]).map_err(fail)?;
    let out = noise::qec_cycle(code, &psi, &errors, recovery, seed).map_err(fail)?;
    let error_text = if errors.is_empty() {
        "none".to_string()
    } else {
        errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    };
    let mut o = Outcome::new();
    o.line(format!(
        "code {}, recovery {}, input {}|0> {}|1>",
        code.name(),
        recovery.name(),
        fmt_amp(psi.amplitude(0)),
        fmt_amp(psi.amplitude(1))
    ));
    o.line(format!("errors: {error_text}"));
    o.line("before correction:");
    o.lines.extend(describe_state(&out.pre_correction));
    o.line(format!("syndrome: {}", out.syndrome_bits()));
    o.line(format!("fidelity: {:.12}", out.fidelity));
    o.line(format!("verdict: {}", out.verdict));
    o.record(
        Record::new("cycle")
            .with("code", code.name())
            .with("recovery", recovery.name())
            .with("errors", &error_text)
            .with("syndrome", out.syndrome_bits())
            .with("fidelity", format!("{:.12}", out.fidelity))
            .with("verdict", out.verdict),
    );

    o.line("fidelity by error location (syndrome):");
    o.line(format!("{:>6} {:>16} {:>16} {:>16}", "error", "qubit 0", "qubit 1", "qubit 2"));
    for kind in [Pauli::X, Pauli::Y, Pauli::Z] {
        let mut row = format!("{:>6}", kind.symbol());
        for q in 0..3 {
            let cell = noise::qec_cycle(code, &psi, &[PauliError::new(kind, q)], recovery, seed).map_err(fail)?;
            row.push_str(&format!(" {:>11.6} ({})", cell.fidelity, cell.syndrome_bits()));
            o.record(
                Record::new("table")
                    .with("error", PauliError::new(kind, q))
                    .with("syndrome", cell.syndrome_bits())
                    .with("fidelity", format!("{:.12}", cell.fidelity)),
            );
        }
        o.line(row);
    }
    if out.verdict == Verdict::Uncorrectable {
        o.status = Status::Failed;
    }
    Ok(o)
}

pub fn error_prop(samples: usize, seed: u64) -> CmdResult {
    let (lhs, rhs) = noise::propagation_circuits().map_err(fail)?;
    let mut o = Outcome::new();
    o.line("X on control then CNOT  vs  CNOT then X on control and target (control 0, target 1)");
    for b in 0..4 {
        let input = StateVector::basis_state(2, b).map_err(fail)?;
        let l = lhs.run(&input).map_err(fail)?.as_basis_state(1e-12);
        let r = rhs.run(&input).map_err(fail)?.as_basis_state(1e-12);
        let label = |i: Option<usize>| i.map_or("?".into(), |i| StateVector::ket_label(i, 2));
        o.line(format!(
            "  {} -> {} | {}",
            StateVector::ket_label(b as usize, 2),
            label(l),
            label(r)
        ));
        o.record(
            Record::new("basis")
                .with("input", StateVector::ket_label(b as usize, 2))
                .with("lhs", label(l))
                .with("rhs", label(r)),
        );
    }
    let report = noise::cnot_error_propagation_check(samples, seed).map_err(fail)?;
    let holds = report.holds(1e-12);
    o.line(format!(
        "max deviation: basis {:.3e}, {} random states {:.3e}",
        report.basis_deviation, report.random_states, report.random_deviation
    ));
    o.line(format!("identity holds: {holds}"));
    o.record(
        Record::new("check")
            .with("basis_deviation", format!("{:.3e}", report.basis_deviation))
            .with("random_states", report.random_states)
            .with("random_deviation", format!("{:.3e}", report.random_deviation))
            .with("holds", holds),
    );
    Ok(o)
}

pub fn circuit(path: &Path, seed: u64) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let circuit = Circuit::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let n = circuit.n_qubits();
    let state = circuit.run(&StateVector::zero(n)).map_err(fail)?;
    let all: Vec<usize> = (0..n).collect();
    let rec = measure(&state, &all, seed).map_err(fail)?;
    let mut o = Outcome::new();
    o.line(format!("{} qubits, {} gates", n, circuit.len()));
    o.line("state:");
    o.lines.extend(describe_state(&state));
    o.line(format!("measured: |{}> with probability {:.6}", rec.bits(), rec.probability));
    o.record(Record::new("circuit").with("qubits", n).with("gates", circuit.len()));
    for i in state.support(1e-12) {
        o.record(
            Record::new("amplitude")
                .with("ket", StateVector::ket_label(i, n))
                .with("value", fmt_amp(state.amplitude(i))),
        );
    }
    o.record(
        Record::new("measured")
            .with("bits", rec.bits())
            .with("probability", format!("{:.6}", rec.probability)),
    );
    Ok(o)
}
