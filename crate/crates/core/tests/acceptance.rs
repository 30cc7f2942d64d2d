//! Acceptance checks, one line per criterion.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qdesk::algorithms::{deutsch, qft, shor_factor, BinaryFunction, ShorConfig, ShorPipeline};
use qdesk::arithmetic::{
    build_adder, build_modadd, increment_network, modexp_by_repeated_mul, modmul_by_repeated_add,
    run_reversed_adder, GarbagePipeline,
};
use qdesk::gates::{Circuit, Gate};
use qdesk::iontrap::IonTrapSystem;
use qdesk::noise::{
    apply_dephasing, cnot_error_propagation_check, dephasing_trajectories, ghz_state, qec_cycle,
    CodeKind, DephasingChannel, Pauli, PauliError, Recovery,
};
use qdesk::numerics::{apply_k_local_unitary, matrix_exp_hermitian, DenseMatrix, ZERO};
use qdesk::rng;
use qdesk::state::{schmidt, DensityMatrix, StateVector};
use qdesk::{Error, C64};
use rand::Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn shor_end_to_end() -> Check {
    let start = Instant::now();
    let mut successes = 0;
    for seed in 0..200 {
        let mut cfg = ShorConfig::new(15, seed);
        cfg.base = Some(2);
        match shor_factor(&cfg) {
            Ok(run) => {
                ensure(run.factors == (3, 5), format!("seed {seed} gave {:?}", run.factors))?;
                successes += 1;
            }
            Err(Error::RetriesExhausted { .. }) => {}
            Err(e) => return Err(err(e)),
        }
    }
    let rate = successes as f64 / 200.0;
    let elapsed = start.elapsed();
    ensure(rate >= 0.4, format!("success rate {rate}"))?;
    ensure(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"))?;
    Ok(format!("success rate {rate:.3}, every success {{3,5}}, {:.1} s", elapsed.as_secs_f64()))
}

fn dft_probabilities(amps: &[C64]) -> Vec<f64> {
    let m = amps.len();
    (0..m)
        .map(|y| {
            amps.iter()
                .enumerate()
                .map(|(x, a)| a * C64::from_polar(1.0 / (m as f64).sqrt(), 2.0 * PI * (x * y) as f64 / m as f64))
                .sum::<C64>()
                .norm_sqr()
        })
        .collect()
}

fn shor_intermediate_states() -> Check {
    let pipeline = ShorPipeline::new(15, 2, 4).map_err(err)?;
    let state = pipeline.prepare().map_err(err)?;
    let rec = pipeline.post_select_reg2(&state, 4).map_err(err)?;
    let reg1 = rec.post_state.marginal(&pipeline.reg1()).map_err(err)?;
    let support: Vec<usize> = (0..16).filter(|&i| reg1[i] > 1e-12).collect();
    ensure(
        support.windows(2).all(|w| w[1] - w[0] == 4) && support.len() == 4,
        format!("reg1 support {support:?}"),
    )?;
    // reg1 amplitudes after post-selection, reg2 fixed at 4
    let amps: Vec<C64> = (0..16).map(|n| rec.post_state.amplitude(n | 4 << 4)).collect();
    let oracle = dft_probabilities(&amps);
    let after = pipeline.apply_qft(&rec.post_state).map_err(err)?;
    let probs = after.marginal(&pipeline.reg1()).map_err(err)?;
    for y in 0..16 {
        let expected = if y % 4 == 0 { 0.25 } else { 0.0 };
        ensure((probs[y] - expected).abs() < 1e-9, format!("P(y={y}) = {}", probs[y]))?;
        ensure((probs[y] - oracle[y]).abs() < 1e-9, format!("DFT oracle disagrees at y={y}"))?;
    }
    Ok(format!("reg1 support {support:?}, post-QFT support {{0,4,8,12}} uniform"))
}

fn deutsch_check() -> Check {
    for f in BinaryFunction::ALL {
        let out = deutsch(f, 0).map_err(err)?;
        ensure(out.classification == f.classification(), format!("{} misclassified", f.name()))?;
        ensure((out.probability - 1.0).abs() < 1e-12, format!("{} probability {}", f.name(), out.probability))?;
        ensure(out.oracle_calls == 1, format!("{} used {} queries", f.name(), out.oracle_calls))?;
    }
    Ok("4/4 functions classified with probability 1 and one query".into())
}

fn adder_check() -> Check {
    let start = Instant::now();
    for n in 1..=4 {
        let add = build_adder(n).map_err(err)?;
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                let out = if n <= 3 {
                    add.run_statevector(a, b).map_err(err)?
                } else {
                    add.run_basis(a, b).map_err(err)?
                };
                ensure(out.b == a + b && out.scratch_clean, format!("n={n}: {a}+{b} gave {out:?}"))?;
                let d = run_reversed_adder(n, a, b).map_err(err)?;
                let expected = if a >= b { a - b } else { (1 << (n + 1)) - (b - a) };
                ensure(
                    d.result == expected && d.overflow == (a < b) && d.scratch_clean,
                    format!("n={n}: {a}-{b} gave {d:?}"),
                )?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("n = 1..4 exhaustive, subtraction and overflow exact, {:.2} s", elapsed.as_secs_f64()))
}

fn modular_check() -> Check {
    for modulus in [3u64, 5, 7, 15] {
        let n = (64 - modulus.leading_zeros()) as usize;
        let add = build_modadd(n, modulus).map_err(err)?;
        for a in 0..modulus {
            for b in 0..modulus {
                let out = add.run_basis(a, b).map_err(err)?;
                ensure(
                    out.b == (a + b) % modulus && out.scratch_clean,
                    format!("{a}+{b} mod {modulus} gave {out:?}"),
                )?;
                let p = modmul_by_repeated_add(a, b, modulus).map_err(err)?;
                ensure(p == a * b % modulus, format!("{a}*{b} mod {modulus} gave {p}"))?;
            }
            let mut expected = 1;
            for x in 0..modulus {
                let e = modexp_by_repeated_mul(a, x, modulus).map_err(err)?;
                ensure(e == expected, format!("{a}^{x} mod {modulus} gave {e}"))?;
                expected = expected * a % modulus;
            }
        }
    }
    let seq: Vec<u64> = (0..8)
        .map(|x| modexp_by_repeated_mul(2, x, 15))
        .collect::<qdesk::Result<_>>()
        .map_err(err)?;
    ensure(seq == [1, 2, 4, 8, 1, 2, 4, 8], format!("2^x mod 15 = {seq:?}"))?;
    Ok(format!("N in {{3,5,7,15}} exhaustive, 2^x mod 15 = {seq:?}"))
}

fn garbage_check() -> Check {
    let f = increment_network(3).map_err(err)?;
    let pipeline = GarbagePipeline::new(&f, 3, 4).map_err(err)?;
    let trace = pipeline.run(&StateVector::uniform(3)).map_err(err)?;
    let garbage = pipeline.garbage_qubits();
    let p0 = trace.output.marginal(&garbage).map_err(err)?[0];
    ensure((p0 - 1.0).abs() < 1e-12, format!("garbage reads zero with probability {p0}"))?;
    let second = schmidt(&trace.output, &garbage)
        .map_err(err)?
        .coefficients
        .get(1)
        .copied()
        .unwrap_or(0.0);
    ensure(second < 1e-8, format!("second Schmidt coefficient {second:e}"))?;
    let purity = trace
        .after_copy
        .reduced_density(&pipeline.kept_qubits())
        .map_err(err)?
        .purity();
    ensure(purity < 1.0, format!("purity without uncompute {purity}"))?;
    Ok(format!("garbage clean, second Schmidt coefficient {second:.1e}, purity without uncompute {purity:.3}"))
}

fn iontrap_check() -> Check {
    let sys = IonTrapSystem::pair();
    let cz_target = DenseMatrix::from_real(4, &[
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, -1.0,
    ])
    .map_err(err)?;
    let cz = sys
        .qubit_map(&sys.controlled_phase_sequence().map_err(err)?, 0)
        .map_err(err)?;
    let cz_dev = cz.phase_aligned_distance(&cz_target);
    ensure(cz_dev < 1e-6, format!("controlled phase deviation {cz_dev:e}"))?;
    let pulses = sys.cnot_sequence().map_err(err)?;
    let cnot = sys.qubit_map(&pulses, 0).map_err(err)?;
    let cnot_dev = cnot.phase_aligned_distance(&Gate::cnot(0, 1).matrix());
    ensure(cnot_dev < 1e-6, format!("CNOT deviation {cnot_dev:e}"))?;
    let mut aux: f64 = 0.0;
    for b in 0..4 {
        let input = StateVector::basis_state(2, b).map_err(err)?;
        let out = sys
            .run_sequence(&sys.from_qubits(&input, 0).map_err(err)?, &pulses)
            .map_err(err)?;
        aux = aux.max(sys.aux_population(&out));
    }
    ensure(aux < 1e-9, format!("auxiliary population {aux:e}"))?;
    let wide = sys.with_cutoff(4);
    let wide_map = wide
        .qubit_map(&wide.cnot_sequence().map_err(err)?, 0)
        .map_err(err)?;
    let cutoff_dev = cnot.max_abs_diff(&wide_map);
    ensure(cutoff_dev < 1e-8, format!("cutoff 2 vs 4 deviation {cutoff_dev:e}"))?;
    let ideal = Circuit::from_gates(2, [Gate::cnot(0, 1)]).map_err(err)?;
    let mut worst: f64 = 1.0;
    for b in 0..4 {
        let input = StateVector::basis_state(2, b).map_err(err)?;
        let out = sys
            .run_sequence(&sys.from_qubits(&input, 1).map_err(err)?, &pulses)
            .map_err(err)?;
        worst = worst.min(sys.qubit_fidelity(&out, &ideal.run(&input).map_err(err)?));
    }
    ensure(worst < 0.99, format!("warm-mode worst fidelity {worst}"))?;
    Ok(format!(
        "CZ dev {cz_dev:.1e}, CNOT dev {cnot_dev:.1e}, aux {aux:.1e}, cutoff dev {cutoff_dev:.1e}, warm-mode worst fidelity {worst:.3}"
    ))
}

fn dephasing_check() -> Check {
    let plus = DensityMatrix::from_pure(&StateVector::uniform(1));
    let mut worst: f64 = 0.0;
    for gamma in [0.1, 0.5, 1.0, 2.0] {
        for t in [0.0, 0.2, 0.5, 1.0, 3.0] {
            let ch = DephasingChannel::new(gamma, t).map_err(err)?;
            let out = apply_dephasing(&plus, &ch, &[0]).map_err(err)?;
            worst = worst.max((out.entry(0, 1).norm() - 0.5 * (-gamma * t).exp()).abs());
        }
    }
    ensure(worst < 1e-10, format!("single-qubit deviation {worst:e}"))?;
    let ch = DephasingChannel::new(0.7, 0.9).map_err(err)?;
    for n in 1..=5 {
        let rho = DensityMatrix::from_pure(&ghz_state(n).map_err(err)?);
        let all: Vec<usize> = (0..n).collect();
        let out = apply_dephasing(&rho, &ch, &all).map_err(err)?;
        let dev = (out.entry(0, (1 << n) - 1).norm() - 0.5 * (-(n as f64) * 0.63).exp()).abs();
        ensure(dev < 1e-10, format!("GHZ n={n} deviation {dev:e}"))?;
    }
    let psi = StateVector::uniform(1);
    let avg = dephasing_trajectories(&psi, &ch, &[0], 10_000, 1).map_err(err)?;
    let exact = apply_dephasing(&plus, &ch, &[0]).map_err(err)?;
    let mc = avg.matrix().max_abs_diff(exact.matrix());
    ensure(mc < 0.02, format!("trajectory deviation {mc}"))?;
    Ok(format!("grid deviation {worst:.1e}, GHZ n = 1..5 exact, trajectory deviation {mc:.4}"))
}

fn qec_check() -> Check {
    let mut rng = rng::seeded(2024);
    for code in [CodeKind::Amplitude3, CodeKind::Phase3] {
        let mut cases = vec![vec![]];
        cases.extend((0..3).map(|q| vec![PauliError::new(code.corrects(), q)]));
        for errors in &cases {
            for i in 0..100 {
                let psi = StateVector::random(1, &mut rng);
                let u = qec_cycle(code, &psi, errors, Recovery::UnitaryToffoli, i).map_err(err)?;
                let m = qec_cycle(code, &psi, errors, Recovery::MeasureAndFlip, i).map_err(err)?;
                ensure(
                    (u.fidelity - 1.0).abs() < 1e-10 && (m.fidelity - 1.0).abs() < 1e-10,
                    format!("{} with {errors:?}: fidelity {} / {}", code.name(), u.fidelity, m.fidelity),
                )?;
                ensure(u.recovered.max_abs_diff(&m.recovered) < 1e-10, "recovery variants disagree")?;
            }
        }
    }
    let (a, b) = (0.6, 0.8);
    let psi = StateVector::from_amplitudes(vec![C64::new(a, 0.0), C64::new(b, 0.0)]).map_err(err)?;
    // X on qubit 0: (a|1> + b|0>)|11>; X on qubit 1: (a|0> + b|1>)|10>
    for (q, index_a, index_b) in [(0usize, 0b111, 0b110), (1, 0b010, 0b011)] {
        let out = qec_cycle(
            CodeKind::Amplitude3,
            &psi,
            &[PauliError::new(Pauli::X, q)],
            Recovery::UnitaryToffoli,
            0,
        )
        .map_err(err)?;
        let mut amps = vec![ZERO; 8];
        amps[index_a] = C64::new(a, 0.0);
        amps[index_b] = C64::new(b, 0.0);
        let expected = StateVector::from_amplitudes(amps).map_err(err)?;
        ensure(
            out.pre_correction.max_abs_diff(&expected) < 1e-12,
            format!("pre-correction state for X on qubit {q}"),
        )?;
    }
    let half = StateVector::uniform(1);
    let fail = qec_cycle(
        CodeKind::Amplitude3,
        &half,
        &[PauliError::new(Pauli::Z, 0)],
        Recovery::UnitaryToffoli,
        0,
    )
    .map_err(err)?;
    ensure(fail.fidelity < 1.0, format!("bit-flip code under Z fidelity {}", fail.fidelity))?;
    Ok(format!(
        "800 corrected cycles per code and recovery, pre-correction states exact, bit-flip code under Z fidelity {:.3}",
        fail.fidelity
    ))
}

fn propagation_check() -> Check {
    let report = cnot_error_propagation_check(50, 7).map_err(err)?;
    ensure(report.holds(1e-12), format!("{report:?}"))?;
    Ok(format!(
        "basis deviation {:.1e}, random deviation {:.1e} over {} states",
        report.basis_deviation, report.random_deviation, report.random_states
    ))
}

fn random_unitary(dim: usize, rng: &mut impl Rng) -> DenseMatrix {
    let a = DenseMatrix::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    matrix_exp_hermitian(&a.add(&a.adjoint()), 1.0).expect("Hermitian")
}

fn numerics_check() -> Check {
    let mut rng = rng::seeded(99);
    let mut norm_dev: f64 = 0.0;
    let mut rev_dev: f64 = 0.0;
    let mut oracle_dev: f64 = 0.0;
    let target_lists: Vec<Vec<usize>> = {
        let mut v = vec![];
        for a in 0..3 {
            v.push(vec![a]);
            for b in 0..3 {
                if b != a {
                    v.push(vec![a, b]);
                    for c in 0..3 {
                        if c != a && c != b {
                            v.push(vec![a, b, c]);
                        }
                    }
                }
            }
        }
        v
    };
    for targets in &target_lists {
        let u = random_unitary(1 << targets.len(), &mut rng);
        let mask: usize = targets.iter().map(|t| 1 << t).sum();
        let local = |i: usize| -> usize { targets.iter().enumerate().map(|(m, &t)| (i >> t & 1) << m).sum() };
        let full = DenseMatrix::from_fn(8, |r, c| if r & !mask == c & !mask { u.get(local(r), local(c)) } else { ZERO });
        for _ in 0..10 {
            let psi = StateVector::random(3, &mut rng);
            let out = apply_k_local_unitary(&psi, &u, targets).map_err(err)?;
            norm_dev = norm_dev.max((out.norm_sqr().sqrt() - 1.0).abs());
            let back = apply_k_local_unitary(&out, &u.adjoint(), targets).map_err(err)?;
            rev_dev = rev_dev.max(back.max_abs_diff(&psi));
            let slow = full.mul_vec(psi.amplitudes());
            for (a, b) in out.amplitudes().iter().zip(&slow) {
                oracle_dev = oracle_dev.max((a - b).norm());
            }
        }
    }
    let gates = [Gate::H(0), Gate::cnot(0, 2), Gate::toffoli(2, 0, 1), Gate::cphase(1, 2, 0.7), Gate::X(1)];
    let circuit = Circuit::from_gates(3, gates).map_err(err)?;
    for _ in 0..20 {
        let psi = StateVector::random(3, &mut rng);
        let back = circuit.reversed().run(&circuit.run(&psi).map_err(err)?).map_err(err)?;
        rev_dev = rev_dev.max(back.max_abs_diff(&psi));
    }
    let mut qft_dev: f64 = 0.0;
    for m in 1..=6 {
        let register: Vec<usize> = (0..m).collect();
        for _ in 0..10 {
            let psi = StateVector::random(m, &mut rng);
            qft_dev = qft_dev.max((qft(&psi, &register).map_err(err)?.norm_sqr() - 1.0).abs());
        }
    }
    ensure(norm_dev < 1e-12, format!("norm deviation {norm_dev:e}"))?;
    ensure(rev_dev < 1e-10, format!("reversibility deviation {rev_dev:e}"))?;
    ensure(oracle_dev < 1e-12, format!("kernel vs dense oracle {oracle_dev:e}"))?;
    ensure(qft_dev < 1e-10, format!("QFT norm deviation {qft_dev:e}"))?;
    let distinct: HashSet<_> = target_lists.iter().collect();
    Ok(format!(
        "norm {norm_dev:.1e}, reversal {rev_dev:.1e}, dense oracle {oracle_dev:.1e} over {} target lists, QFT norm {qft_dev:.1e}",
        distinct.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("shor end-to-end", shor_end_to_end),
        ("shor intermediate states", shor_intermediate_states),
        ("deutsch", deutsch_check),
        ("adder", adder_check),
        ("modular arithmetic", modular_check),
        ("garbage disposal", garbage_check),
        ("ion trap", iontrap_check),
        ("dephasing", dephasing_check),
        ("error correction", qec_check),
        ("error propagation", propagation_check),
        ("numerics properties", numerics_check),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
