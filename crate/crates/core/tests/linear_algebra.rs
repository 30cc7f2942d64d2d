use proptest::prelude::*;
use qdesk::gates::{apply_gate, Circuit, Gate};
use qdesk::numerics::{apply_k_local_unitary, matrix_exp_hermitian, partial_trace, DenseMatrix, C64};
use qdesk::rng;
use qdesk::state::{is_product_across, measure, DensityMatrix, StateVector};
use rand::Rng;

fn random_hermitian(dim: usize, rng: &mut impl Rng) -> DenseMatrix {
    let a = DenseMatrix::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    a.add(&a.adjoint())
}

fn random_unitary(dim: usize, rng: &mut impl Rng) -> DenseMatrix {
    matrix_exp_hermitian(&random_hermitian(dim, rng), 1.0).unwrap()
}

/// Full `2^n x 2^n` matrix of `u` acting on `targets`, built entry by entry.
fn dense_oracle(u: &DenseMatrix, targets: &[usize], n: usize) -> DenseMatrix {
    let mask: usize = targets.iter().map(|t| 1 << t).sum();
    let local = |i: usize| -> usize {
        targets
            .iter()
            .enumerate()
            .map(|(m, &t)| (i >> t & 1) << m)
            .sum()
    };
    DenseMatrix::from_fn(1 << n, |r, c| {
        if r & !mask == c & !mask {
            u.get(local(r), local(c))
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn ordered_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        let next: Vec<Vec<usize>> = out
            .iter()
            .flat_map(|s| {
                (0..n)
                    .filter(|q| !s.contains(q))
                    .map(|q| {
                        let mut t = s.clone();
                        t.push(q);
                        t
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        out.extend(next);
    }
    out.sort();
    out.dedup();
    out.retain(|s| !s.is_empty());
    out
}

#[test]
fn kernel_matches_dense_oracle_on_every_three_qubit_target_list() {
    let mut rng = rng::seeded(11);
    let lists = ordered_subsets(3);
    assert_eq!(lists.len(), 15);
    for targets in lists {
        let u = random_unitary(1 << targets.len(), &mut rng);
        let full = dense_oracle(&u, &targets, 3);
        for _ in 0..4 {
            let psi = StateVector::random(3, &mut rng);
            let fast = apply_k_local_unitary(&psi, &u, &targets).unwrap();
            let slow = full.mul_vec(psi.amplitudes());
            let dev = fast
                .amplitudes()
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-12, "targets {targets:?}: {dev}");
        }
    }
}

#[test]
fn entangled_pair_reduces_to_two_branch_mixture() {
    // (|000> + |111>)/sqrt 2, third register traced out
    let psi = StateVector::normalized(
        (0..8)
            .map(|i| C64::new(if i == 0 || i == 7 { 1.0 } else { 0.0 }, 0.0))
            .collect(),
    )
    .unwrap();
    let rho = partial_trace(&DensityMatrix::from_pure(&psi), &[0, 1]).unwrap();
    for r in 0..4 {
        for c in 0..4 {
            let expected = if r == c && (r == 0 || r == 3) { 0.5 } else { 0.0 };
            assert!((rho.entry(r, c) - C64::new(expected, 0.0)).norm() < 1e-12);
        }
    }
    assert!((rho.purity() - 0.5).abs() < 1e-12);
}

#[test]
fn epr_measurement_frequencies() {
    let epr = Circuit::from_gates(2, [Gate::H(0), Gate::cnot(0, 1), Gate::X(1)])
        .unwrap()
        .run(&StateVector::zero(2))
        .unwrap();
    let mut hits = 0;
    for seed in 0..10_000 {
        let rec = measure(&epr, &[0, 1], seed).unwrap();
        assert!(rec.outcome == 0b01 || rec.outcome == 0b10);
        hits += usize::from(rec.outcome == 0b10);
    }
    let freq = hits as f64 / 10_000.0;
    assert!((freq - 0.5).abs() < 0.02, "{freq}");
}

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    prop_oneof![
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::H),
        (q.clone(), q.clone())
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(a, b)| Gate::cnot(a, b)),
        (q.clone(), q.clone(), q.clone())
            .prop_filter("distinct", |(a, b, c)| a != b && b != c && a != c)
            .prop_map(|(a, b, c)| Gate::toffoli(a, b, c)),
        (q.clone(), -7.0..7.0f64).prop_map(|(t, theta)| Gate::Phase { target: t, theta }),
        (q.clone(), q, -7.0..7.0f64)
            .prop_filter("distinct", |(a, b, _)| a != b)
            .prop_map(|(a, b, theta)| Gate::cphase(a, b, theta)),
    ]
}

proptest! {
    #[test]
    fn kernel_preserves_norm(seed in any::<u64>(), n in 1usize..7, k in 1usize..4) {
        let mut rng = rng::seeded(seed);
        let k = k.min(n);
        let mut targets: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = rng.random_range(i..n);
            targets.swap(i, j);
        }
        targets.truncate(k);
        let u = random_unitary(1 << k, &mut rng);
        let psi = StateVector::random(n, &mut rng);
        let out = apply_k_local_unitary(&psi, &u, &targets).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let back = apply_k_local_unitary(&out, &u.adjoint(), &targets).unwrap();
        prop_assert!(back.max_abs_diff(&psi) < 1e-10);
    }

    #[test]
    fn exponential_semigroup(seed in any::<u64>(), t1 in -3.0..3.0f64, t2 in -3.0..3.0f64) {
        let mut rng = rng::seeded(seed);
        let h = random_hermitian(6, &mut rng);
        let a = matrix_exp_hermitian(&h, t1).unwrap().mul(&matrix_exp_hermitian(&h, t2).unwrap());
        let b = matrix_exp_hermitian(&h, t1 + t2).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-9);
        prop_assert!(b.is_unitary(1e-9));
    }

    #[test]
    fn tracing_everything_leaves_unit_trace(seed in any::<u64>(), n in 1usize..5) {
        let psi = StateVector::random(n, &mut rng::seeded(seed));
        let rho = partial_trace(&DensityMatrix::from_pure(&psi), &[]).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_factors_are_pure(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut rng = rng::seeded(seed);
        let psi = StateVector::random(n, &mut rng);
        let phi = StateVector::random(m, &mut rng);
        let joint = DensityMatrix::from_pure(&psi.extend_with(&phi).unwrap());
        let low: Vec<usize> = (0..n).collect();
        let high: Vec<usize> = (n..n + m).collect();
        prop_assert!((partial_trace(&joint, &low).unwrap().purity() - 1.0).abs() < 1e-10);
        prop_assert!((partial_trace(&joint, &high).unwrap().purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn schmidt_symmetry_and_phase_invariance(seed in any::<u64>(), n in 2usize..6, phase in -4.0..4.0f64) {
        let mut rng = rng::seeded(seed);
        let psi = StateVector::random(n, &mut rng);
        let cut = rng.random_range(1..n);
        let side: Vec<usize> = (0..cut).collect();
        let rest: Vec<usize> = (cut..n).collect();
        let pa = psi.reduced_density(&side).unwrap().purity();
        let pb = psi.reduced_density(&rest).unwrap().purity();
        prop_assert!((pa - pb).abs() < 1e-10);
        let (p1, c1) = is_product_across(&psi, &side).unwrap();
        let (p2, c2) = is_product_across(&psi.with_global_phase(phase), &side).unwrap();
        prop_assert_eq!(p1, p2);
        for (a, b) in c1.iter().zip(&c2) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn circuits_are_reversible(seed in any::<u64>(), gates in proptest::collection::vec(gate_strategy(4), 0..30)) {
        let circuit = Circuit::from_gates(4, gates).unwrap();
        let psi = StateVector::random(4, &mut rng::seeded(seed));
        let out = circuit.run(&psi).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        let back = circuit.reversed().run(&out).unwrap();
        prop_assert!(back.max_abs_diff(&psi) < 1e-10);
    }

    #[test]
    fn circuit_text_round_trips(gates in proptest::collection::vec(gate_strategy(4), 0..30)) {
        let circuit = Circuit::from_gates(4, gates).unwrap();
        let parsed = Circuit::parse(&circuit.to_text()).unwrap();
        prop_assert_eq!(parsed, circuit);
    }

    #[test]
    fn gate_kernel_matches_gate_matrix(seed in any::<u64>(), gate in gate_strategy(3)) {
        let psi = StateVector::random(3, &mut rng::seeded(seed));
        let fast = apply_gate(&psi, &gate).unwrap();
        let slow = apply_k_local_unitary(&psi, &gate.matrix(), &gate.qubits()).unwrap();
        prop_assert!(fast.max_abs_diff(&slow) < 1e-12);
    }
}
