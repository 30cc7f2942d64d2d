//! Reversible arithmetic networks built from NOT, CNOT and Toffoli gates.
//!
//! The plain adder follows the ripple-carry construction: a forward sweep of
//! CARRY blocks writes the top carry into the most significant qubit of
//! `reg_b`, then the carries are undone in reverse while SUM blocks write the
//! low bits of `a + b`. Subtraction and comparison come from running the
//! same network backwards; modular addition is an adder, a reversed adder
//! against a classically loaded modulus, and an overflow-controlled
//! correction; modular multiplication and exponentiation repeat it.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate};
use crate::state::{StateVector, MAX_QUBITS};

pub const MAX_ADDER_WIDTH: usize = 6;
pub const MAX_MODULAR_WIDTH: usize = 5;

/// Named, disjoint qubit ranges of an arithmetic network.
///
/// Carry slot `c_i` for `i < n` is a qubit of `reg_carry`; the top slot
/// `c_n` is the most significant qubit of `reg_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterLayout {
    width: usize,
    reg_a: Range<usize>,
    reg_b: Range<usize>,
    reg_carry: Range<usize>,
    ancillas: Vec<(&'static str, Range<usize>)>,
    total_qubits: usize,
}

impl RegisterLayout {
    /// `reg_a` (n), `reg_b` (n+1), `reg_carry` (n), then the named ancillas.
    pub fn new(width: usize, ancillas: &[(&'static str, usize)]) -> Result<Self> {
        if width == 0 {
            return Err(Error::WidthOutOfRange {
                width,
                min: 1,
                max: MAX_ADDER_WIDTH,
            });
        }
        let reg_a = 0..width;
        let reg_b = width..2 * width + 1;
        let reg_carry = reg_b.end..reg_b.end + width;
        let mut next = reg_carry.end;
        let ancillas: Vec<_> = ancillas
            .iter()
            .map(|&(name, len)| {
                let r = next..next + len;
                next += len;
                (name, r)
            })
            .collect();
        if next > MAX_QUBITS {
            return Err(Error::TooManyQubits(next));
        }
        Ok(Self {
            width,
            reg_a,
            reg_b,
            reg_carry,
            ancillas,
            total_qubits: next,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn reg_a(&self) -> Range<usize> {
        self.reg_a.clone()
    }

    pub fn reg_b(&self) -> Range<usize> {
        self.reg_b.clone()
    }

    pub fn reg_carry(&self) -> Range<usize> {
        self.reg_carry.clone()
    }

    pub fn ancilla(&self, name: &str) -> Option<Range<usize>> {
        self.ancillas
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, r)| r.clone())
    }

    /// Carry slot `c_i`, `i <= n`.
    pub fn carry(&self, i: usize) -> usize {
        if i == self.width {
            self.reg_b.end - 1
        } else {
            self.reg_carry.start + i
        }
    }

    /// Qubits that must be `|0>` before and after the network.
    pub fn scratch_qubits(&self) -> Vec<usize> {
        self.reg_carry
            .clone()
            .chain(self.ancillas.iter().flat_map(|(_, r)| r.clone()))
            .collect()
    }

    /// Basis index with `reg_a = a`, `reg_b = b`, scratch zero.
    pub fn encode(&self, a: u64, b: u64) -> Result<usize> {
        if a >> self.width != 0 {
            return Err(Error::ValueOutOfRange {
                value: a,
                n_qubits: self.width,
            });
        }
        if b >> (self.width + 1) != 0 {
            return Err(Error::ValueOutOfRange {
                value: b,
                n_qubits: self.width + 1,
            });
        }
        Ok((a as usize) << self.reg_a.start | (b as usize) << self.reg_b.start)
    }

    /// Reads `(a, b, scratch)` out of a basis index.
    pub fn decode(&self, index: usize) -> (u64, u64, u64) {
        let read = |r: Range<usize>| StateVector::register_value(index, &r.collect::<Vec<_>>());
        (
            read(self.reg_a()),
            read(self.reg_b()),
            StateVector::register_value(index, &self.scratch_qubits()),
        )
    }
}

/// What a network computes on `(reg_a, reg_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    /// `(a, b) -> (a, a + b)`.
    Add,
    /// `(a, b) -> (a, (a + b) mod N)` for `a, b < N`.
    ModAdd { modulus: u64 },
    /// `(x, 0) -> (x, multiplier * x mod N)` for `x < N`.
    ModMul { multiplier: u64, modulus: u64 },
}

/// Result of running a network on one basis input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisOutcome {
    pub a: u64,
    pub b: u64,
    /// All carry and ancilla qubits read zero.
    pub scratch_clean: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArithmeticNetwork {
    pub layout: RegisterLayout,
    pub circuit: Circuit,
    pub semantics: Semantics,
}

impl ArithmeticNetwork {
    /// Runs the permutation on the basis input `(a, b)` bit by bit.
    pub fn run_basis(&self, a: u64, b: u64) -> Result<BasisOutcome> {
        let out = self.circuit.apply_to_index(self.layout.encode(a, b)?)?;
        Ok(outcome(&self.layout, out))
    }

    /// Same as [`Self::run_basis`] but through the state-vector simulator;
    /// fails unless the output is a single basis state with probability 1.
    pub fn run_statevector(&self, a: u64, b: u64) -> Result<BasisOutcome> {
        let input = StateVector::basis_state(
            self.layout.total_qubits(),
            self.layout.encode(a, b)? as u64,
        )?;
        let out = self.circuit.run(&input)?;
        let idx = out
            .as_basis_state(1e-12)
            .ok_or_else(|| Error::NonClassical("output is not a basis state".into()))?;
        Ok(outcome(&self.layout, idx))
    }

    /// Runs the reversed network on the basis input `(a, b)`.
    pub fn run_reversed_basis(&self, a: u64, b: u64) -> Result<BasisOutcome> {
        let out = self
            .circuit
            .reversed()
            .apply_to_index(self.layout.encode(a, b)?)?;
        Ok(outcome(&self.layout, out))
    }
}

fn outcome(layout: &RegisterLayout, index: usize) -> BasisOutcome {
    let (a, b, scratch) = layout.decode(index);
    BasisOutcome {
        a,
        b,
        scratch_clean: scratch == 0,
    }
}

fn carry_gates(a: usize, b: usize, c: usize, c_next: usize) -> [Gate; 3] {
    [
        Gate::toffoli(a, b, c_next),
        Gate::cnot(a, b),
        Gate::toffoli(c, b, c_next),
    ]
}

fn sum_gates(a: usize, b: usize, c: usize) -> [Gate; 2] {
    [Gate::cnot(a, b), Gate::cnot(c, b)]
}

/// Ripple-carry adder `b <- a + b (mod 2^{n+1})`; `b` has one more qubit
/// than `a` and doubles as the top carry slot.
fn adder_gates(a: &[usize], b: &[usize], c: &[usize]) -> Vec<Gate> {
    let n = a.len();
    debug_assert!(b.len() == n + 1 && c.len() == n);
    let slot = |i: usize| if i == n { b[n] } else { c[i] };
    let mut gates = Vec::new();
    for i in 0..n {
        gates.extend(carry_gates(a[i], b[i], slot(i), slot(i + 1)));
    }
    gates.push(Gate::cnot(a[n - 1], b[n - 1]));
    gates.extend(sum_gates(a[n - 1], b[n - 1], slot(n - 1)));
    for i in (0..n - 1).rev() {
        gates.extend(carry_gates(a[i], b[i], slot(i), slot(i + 1)).iter().rev().map(Gate::inverse));
        gates.extend(sum_gates(a[i], b[i], slot(i)));
    }
    gates
}

fn qubits(r: Range<usize>) -> Vec<usize> {
    r.collect()
}

/// CARRY block `i`: `c_{i+1} ^= maj(a_i, b_i, c_i)`, `b_i ^= a_i`.
pub fn build_carry_block(layout: &RegisterLayout, i: usize) -> Result<Circuit> {
    if i >= layout.width() {
        return Err(Error::IndexOutOfRange {
            index: i,
            width: layout.width(),
        });
    }
    Circuit::from_gates(
        layout.total_qubits(),
        carry_gates(
            layout.reg_a.start + i,
            layout.reg_b.start + i,
            layout.carry(i),
            layout.carry(i + 1),
        ),
    )
}

/// SUM block `i`: `b_i ^= a_i ^ c_i`.
pub fn build_sum_block(layout: &RegisterLayout, i: usize) -> Result<Circuit> {
    if i >= layout.width() {
        return Err(Error::IndexOutOfRange {
            index: i,
            width: layout.width(),
        });
    }
    Circuit::from_gates(
        layout.total_qubits(),
        sum_gates(layout.reg_a.start + i, layout.reg_b.start + i, layout.carry(i)),
    )
}

fn check_adder_width(n: usize, max: usize) -> Result<()> {
    if (1..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::WidthOutOfRange {
            width: n,
            min: 1,
            max,
        })
    }
}

/// Plain adder `(a, b) -> (a, a + b)` on `3n + 1` qubits.
pub fn build_adder(n: usize) -> Result<ArithmeticNetwork> {
    check_adder_width(n, MAX_ADDER_WIDTH)?;
    let layout = RegisterLayout::new(n, &[])?;
    let carries: Vec<usize> = (0..n).map(|i| layout.carry(i)).collect();
    let circuit = Circuit::from_gates(
        layout.total_qubits(),
        adder_gates(&qubits(layout.reg_a()), &qubits(layout.reg_b()), &carries),
    )?;
    Ok(ArithmeticNetwork {
        layout,
        circuit,
        semantics: Semantics::Add,
    })
}

/// Output of the reversed adder used as a subtractor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Difference {
    pub a: u64,
    pub b: u64,
    /// `a - b` if `a >= b`, else `2^{n+1} - (b - a)`.
    pub result: u64,
    /// Most significant qubit of `reg_b`; set exactly when `a < b`.
    pub overflow: bool,
    pub scratch_clean: bool,
}

/// Computes `a - b` with the adder run backwards.
///
/// The reversed network maps `(x, y) -> (x, y - x)`, so the minuend `a` is
/// loaded into `reg_b` and the subtrahend `b` into `reg_a`.
pub fn run_reversed_adder(n: usize, a: u64, b: u64) -> Result<Difference> {
    let adder = build_adder(n)?;
    for v in [a, b] {
        if v >> n != 0 {
            return Err(Error::ValueOutOfRange {
                value: v,
                n_qubits: n,
            });
        }
    }
    let out = adder.run_reversed_basis(b, a)?;
    debug_assert_eq!(out.a, b);
    Ok(Difference {
        a,
        b,
        result: out.b,
        overflow: out.b >> n & 1 == 1,
        scratch_clean: out.scratch_clean,
    })
}

fn modulus_width(modulus: u64) -> usize {
    (64 - modulus.leading_zeros()) as usize
}

/// Modular adder `(a, b) -> (a, (a + b) mod N)` for `a, b < N < 2^n`.
///
/// Ancillas: `reg_n` (n qubits, loaded with `N` on demand) and a one-qubit
/// `flag` recording whether `a + b < N`.
pub fn build_modadd(n: usize, modulus: u64) -> Result<ArithmeticNetwork> {
    check_adder_width(n, MAX_MODULAR_WIDTH)?;
    if modulus < 2 {
        return Err(Error::InvalidOperand(format!("modulus {modulus} < 2")));
    }
    if modulus >> n != 0 {
        return Err(Error::ModulusTooLarge { modulus, width: n });
    }
    let layout = RegisterLayout::new(n, &[("reg_n", n), ("flag", 1)])?;
    let a = qubits(layout.reg_a());
    let b = qubits(layout.reg_b());
    let c: Vec<usize> = (0..n).map(|i| layout.carry(i)).collect();
    let reg_n = qubits(layout.ancilla("reg_n").expect("declared"));
    let flag = layout.ancilla("flag").expect("declared").start;
    let top = b[n];
    let n_bits: Vec<usize> = (0..n).filter(|i| modulus >> i & 1 == 1).map(|i| reg_n[i]).collect();

    let add_ab = adder_gates(&a, &b, &c);
    let add_nb = adder_gates(&reg_n, &b, &c);
    let inverse = |gs: &[Gate]| gs.iter().rev().map(Gate::inverse).collect::<Vec<_>>();

    let mut gates = add_ab.clone();
    // b <- a + b - N
    gates.extend(n_bits.iter().map(|&q| Gate::X(q)));
    gates.extend(inverse(&add_nb));
    gates.extend(n_bits.iter().map(|&q| Gate::X(q)));
    // overflow bit set iff a + b < N
    gates.push(Gate::cnot(top, flag));
    // add N back when it overflowed
    gates.extend(n_bits.iter().map(|&q| Gate::cnot(flag, q)));
    gates.extend(add_nb);
    gates.extend(n_bits.iter().map(|&q| Gate::cnot(flag, q)));
    // clear the flag: b - a underflows exactly when the flag is 0
    gates.extend(inverse(&add_ab));
    gates.push(Gate::X(top));
    gates.push(Gate::cnot(top, flag));
    gates.push(Gate::X(top));
    gates.extend(add_ab);

    let circuit = Circuit::from_gates(layout.total_qubits(), gates)?;
    Ok(ArithmeticNetwork {
        layout,
        circuit,
        semantics: Semantics::ModAdd { modulus },
    })
}

/// `(x, 0) -> (x, multiplier * x mod N)` by repeating the modular adder
/// `multiplier` times.
pub fn build_modmul(n: usize, multiplier: u64, modulus: u64) -> Result<ArithmeticNetwork> {
    let add = build_modadd(n, modulus)?;
    let mut circuit = Circuit::new(add.layout.total_qubits());
    for _ in 0..multiplier {
        circuit.append(&add.circuit)?;
    }
    Ok(ArithmeticNetwork {
        layout: add.layout,
        circuit,
        semantics: Semantics::ModMul {
            multiplier,
            modulus,
        },
    })
}

fn check_operand(name: &str, v: u64, modulus: u64) -> Result<()> {
    if v >= modulus {
        Err(Error::InvalidOperand(format!("{name} = {v} is not below {modulus}")))
    } else {
        Ok(())
    }
}

fn scratch_error() -> Error {
    Error::NonClassical("scratch qubits were not restored to |0>".into())
}

/// `a * b mod N` as `a + a + ... + a` (`b` times) on the modular adder.
pub fn modmul_by_repeated_add(a: u64, b: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::InvalidOperand(format!("modulus {modulus} < 2")));
    }
    check_operand("a", a, modulus)?;
    check_operand("b", b, modulus)?;
    let net = build_modmul(modulus_width(modulus), b, modulus)?;
    let out = net.run_basis(a, 0)?;
    if !out.scratch_clean || out.a != a {
        return Err(scratch_error());
    }
    Ok(out.b)
}

/// `a^x mod N` as `x` successive multiplications by `a`.
pub fn modexp_by_repeated_mul(a: u64, x: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::InvalidOperand(format!("modulus {modulus} < 2")));
    }
    check_operand("a", a, modulus)?;
    let net = build_modmul(modulus_width(modulus), a, modulus)?;
    let mut acc = 1;
    for _ in 0..x {
        let out = net.run_basis(acc, 0)?;
        if !out.scratch_clean {
            return Err(scratch_error());
        }
        acc = out.b;
    }
    Ok(acc)
}

/// `|x>|0> -> |x>|x + 1 mod 2^w>` for `w <= 3`, as CNOT copies followed by
/// an in-place increment of the output register.
pub fn increment_network(width: usize) -> Result<Circuit> {
    check_adder_width(width, 3)?;
    let mut c = copy_network(width)?;
    let y = |i: usize| width + i;
    if width == 3 {
        c.push(Gate::toffoli(y(0), y(1), y(2)))?;
    }
    if width >= 2 {
        c.push(Gate::cnot(y(0), y(1)))?;
    }
    c.push(Gate::X(y(0)))?;
    Ok(c)
}

/// `|x>|0> -> |x>|x>`.
pub fn copy_network(width: usize) -> Result<Circuit> {
    Circuit::from_gates(2 * width, (0..width).map(|i| Gate::cnot(i, width + i)))
}

/// Register-level plan for computing `f^k(x)` with garbage cleanup.
///
/// Registers, each `width` qubits, in order: the input `x`, the `stages`
/// intermediate results `f(x) .. f^k(x)`, and the copy register.
#[derive(Debug, Clone)]
pub struct GarbagePipeline {
    width: usize,
    stages: usize,
    compute: Circuit,
    copy: Circuit,
}

/// States after each phase of the pipeline.
#[derive(Debug, Clone)]
pub struct PipelineTrace {
    pub after_compute: StateVector,
    pub after_copy: StateVector,
    pub output: StateVector,
}

impl GarbagePipeline {
    /// Verifies that `f_network` maps `|x>|0> -> |x>|f(x)>` on `2 * width`
    /// qubits for every `x`, then chains it `stages` times.
    pub fn new(f_network: &Circuit, width: usize, stages: usize) -> Result<Self> {
        if f_network.n_qubits() != 2 * width {
            return Err(Error::DimensionMismatch {
                expected: 2 * width,
                found: f_network.n_qubits(),
            });
        }
        if stages == 0 {
            return Err(Error::InvalidOperand("at least one stage".into()));
        }
        let total = (stages + 2) * width;
        if total > MAX_QUBITS {
            return Err(Error::TooManyQubits(total));
        }
        for x in 0..1usize << width {
            let out = f_network.apply_to_index(x)?;
            if out & ((1 << width) - 1) != x {
                return Err(Error::NotAFunctionNetwork(format!("input register changed for x = {x}")));
            }
        }
        let mut compute = Circuit::new(total);
        for k in 0..stages {
            let map: Vec<usize> = (k * width..(k + 2) * width).collect();
            compute.append(&f_network.remapped(&map, total)?)?;
        }
        let copy = Circuit::from_gates(
            total,
            (0..width).map(|i| Gate::cnot(stages * width + i, (stages + 1) * width + i)),
        )?;
        Ok(Self {
            width,
            stages,
            compute,
            copy,
        })
    }

    pub fn total_qubits(&self) -> usize {
        (self.stages + 2) * self.width
    }

    /// Register `k`: 0 is the input, `1..=stages` hold `f^k(x)`, and
    /// `stages + 1` is the copy.
    pub fn register(&self, k: usize) -> Range<usize> {
        k * self.width..(k + 1) * self.width
    }

    /// Qubits of the `stages` intermediate registers.
    pub fn garbage_qubits(&self) -> Vec<usize> {
        (self.width..(self.stages + 1) * self.width).collect()
    }

    /// Qubits of the input and copy registers.
    pub fn kept_qubits(&self) -> Vec<usize> {
        self.register(0)
            .chain(self.register(self.stages + 1))
            .collect()
    }

    /// Full circuit: compute, copy, uncompute.
    pub fn circuit(&self) -> Circuit {
        let mut c = self.compute.clone();
        c.append(&self.copy).expect("same width");
        c.append(&self.compute.reversed()).expect("same width");
        c
    }

    /// Runs the pipeline with `input` (a `width`-qubit state) in register 0.
    pub fn run(&self, input: &StateVector) -> Result<PipelineTrace> {
        if input.n_qubits() != self.width {
            return Err(Error::DimensionMismatch {
                expected: self.width,
                found: input.n_qubits(),
            });
        }
        let rest = StateVector::zero(self.total_qubits() - self.width);
        let start = input.extend_with(&rest)?;
        let after_compute = self.compute.run(&start)?;
        let after_copy = self.copy.run(&after_compute)?;
        let output = self.compute.reversed().run(&after_copy)?;
        Ok(PipelineTrace {
            after_compute,
            after_copy,
            output,
        })
    }
}

/// Four-stage compute, copy, uncompute run of `f_network` on `input`.
pub fn compute_copy_uncompute(
    f_network: &Circuit,
    width: usize,
    input: &StateVector,
) -> Result<PipelineTrace> {
    GarbagePipeline::new(f_network, width, 4)?.run(input)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout_1bit() -> RegisterLayout {
        RegisterLayout::new(1, &[]).unwrap()
    }

    #[test]
    fn carry_block_example() {
        // c_0 = 0, a_0 = 1, b_0 = 1, c_1 = 0
        let l = layout_1bit();
        let block = build_carry_block(&l, 0).unwrap();
        let input = l.encode(1, 1).unwrap();
        let out = block.apply_to_index(input).unwrap();
        assert_eq!(out >> l.carry(1) & 1, 1);
        assert_eq!(out >> l.reg_b().start & 1, 0);
    }

    #[test]
    fn sum_block_example() {
        // c_0 = 1, a_0 = 1, b_0 = 0 -> b_0 = 0
        let l = layout_1bit();
        let block = build_sum_block(&l, 0).unwrap();
        let input = l.encode(1, 0).unwrap() | 1 << l.carry(0);
        let out = block.apply_to_index(input).unwrap();
        assert_eq!(out >> l.reg_b().start & 1, 0);
    }

    #[test]
    fn block_index_checked() {
        let l = RegisterLayout::new(3, &[]).unwrap();
        assert!(matches!(
            build_carry_block(&l, 3),
            Err(Error::IndexOutOfRange { index: 3, width: 3 })
        ));
        assert!(build_sum_block(&l, 3).is_err());
    }

    #[test]
    fn adder_examples() {
        let add = build_adder(3).unwrap();
        assert_eq!(add.layout.total_qubits(), 10);
        let out = add.run_basis(3, 4).unwrap();
        assert_eq!((out.a, out.b, out.scratch_clean), (3, 7, true));
        let out = add.run_basis(0, 0).unwrap();
        assert_eq!((out.a, out.b), (0, 0));
    }

    #[test]
    fn adder_width_bounds() {
        assert!(matches!(build_adder(0), Err(Error::WidthOutOfRange { .. })));
        assert!(matches!(build_adder(7), Err(Error::WidthOutOfRange { .. })));
        assert_eq!(build_adder(6).unwrap().layout.total_qubits(), 19);
    }

    #[test]
    fn reversed_adder_examples() {
        let d = run_reversed_adder(3, 5, 2).unwrap();
        assert_eq!((d.result, d.overflow), (3, false));
        let d = run_reversed_adder(3, 2, 5).unwrap();
        assert_eq!((d.result, d.overflow), (13, true));
        let d = run_reversed_adder(3, 6, 6).unwrap();
        assert_eq!((d.result, d.overflow, d.scratch_clean), (0, false, true));
    }

    #[test]
    fn modular_examples() {
        let net = build_modadd(4, 15).unwrap();
        let out = net.run_basis(9, 8).unwrap();
        assert_eq!((out.a, out.b, out.scratch_clean), (9, 2, true));
        assert_eq!(modmul_by_repeated_add(2, 4, 15).unwrap(), 8);
        assert_eq!(modexp_by_repeated_mul(2, 4, 15).unwrap(), 1);
    }

    #[test]
    fn modular_errors() {
        assert!(matches!(
            build_modadd(3, 8),
            Err(Error::ModulusTooLarge { modulus: 8, width: 3 })
        ));
        assert!(matches!(build_modadd(6, 15), Err(Error::WidthOutOfRange { .. })));
        assert!(matches!(
            modmul_by_repeated_add(15, 2, 15),
            Err(Error::InvalidOperand(_))
        ));
        assert!(modexp_by_repeated_mul(2, 3, 1).is_err());
    }

    #[test]
    fn increment_pipeline_registers() {
        let f = increment_network(3).unwrap();
        let pipeline = GarbagePipeline::new(&f, 3, 4).unwrap();
        let trace = pipeline.run(&StateVector::basis_state(3, 3).unwrap()).unwrap();
        let read = |s: &StateVector, k: usize| {
            let idx = s.as_basis_state(1e-12).unwrap();
            StateVector::register_value(idx, &pipeline.register(k).collect::<Vec<_>>())
        };
        let before: Vec<u64> = (0..6).map(|k| read(&trace.after_compute, k)).collect();
        assert_eq!(before, [3, 4, 5, 6, 7, 0]);
        let after: Vec<u64> = (0..6).map(|k| read(&trace.output, k)).collect();
        assert_eq!(after, [3, 0, 0, 0, 0, 7]);
    }

    #[test]
    fn identity_pipeline_copies_input() {
        let pipeline = GarbagePipeline::new(&copy_network(2).unwrap(), 2, 4).unwrap();
        let trace = pipeline.run(&StateVector::basis_state(2, 2).unwrap()).unwrap();
        let idx = trace.output.as_basis_state(1e-12).unwrap();
        assert_eq!(idx, 2 | 2 << 10);
    }

    #[test]
    fn pipeline_rejects_non_function_network() {
        let bad = Circuit::from_gates(2, [Gate::cnot(1, 0)]).unwrap();
        let ok_shape = Circuit::from_gates(2, [Gate::X(0)]).unwrap();
        assert!(GarbagePipeline::new(&bad, 1, 4).is_ok()); // y = 0 leaves x alone
        assert!(matches!(
            GarbagePipeline::new(&ok_shape, 1, 4),
            Err(Error::NotAFunctionNetwork(_))
        ));
        let quantum = Circuit::from_gates(2, [Gate::H(1)]).unwrap();
        assert!(matches!(
            GarbagePipeline::new(&quantum, 1, 4),
            Err(Error::NonClassical(_))
        ));
    }
}
