//! Full circuits on `n` search wires plus the `|1−⟩` ancilla pair.

use std::sync::Arc;

use serde::Serialize;

use super::program::{Boundary, PhaseProgram};
use super::{GroverError, GroverSchedule, OracleSpec};
use crate::circuit::{Circuit, Gate, InputSpec, WireInit};
use crate::gadgets::phase_flip_gadget;
use crate::permutation::Permutation;
use crate::statevec::StateVector;

/// Wire holding `|−⟩` after `hadamards` layers of `H^∞`.
pub fn minus_wire(n: usize, hadamards: usize) -> usize {
    if hadamards.is_multiple_of(2) {
        n + 1
    } else {
        n
    }
}

/// `G_x` kicked back from `minus`. For the default `f` this is a phase-flip
/// gadget whose central Toffoli carries the oracle flag; a tabulated `f`
/// becomes one flagged permutation on the search wires and `minus`.
pub fn build_oracle(spec: &OracleSpec, x: usize, minus: usize) -> Result<Vec<Gate>, GroverError> {
    spec.check_hidden(x)?;
    let n = spec.width();
    if minus < n {
        return Err(GroverError::InvalidOracle(format!(
            "wire {minus} belongs to the search register"
        )));
    }
    match spec.range_bits() {
        Some(bits) => {
            let predicate: Vec<(usize, bool)> = (0..bits).map(|i| (i, (x >> i) & 1 == 1)).collect();
            let mut gates = phase_flip_gadget(&predicate, minus)
                .map_err(|e| GroverError::InvalidOracle(e.to_string()))?;
            let centre = gates.len() / 2;
            gates[centre] = gates[centre].clone().with_oracle(true);
            Ok(gates)
        }
        None => {
            let perm = Permutation::from_fn(format!("ORACLE {x}"), n + 1, |label| {
                let z = label & ((1 << n) - 1);
                if spec.eval(z) == x {
                    label ^ (1 << n)
                } else {
                    label
                }
            })?;
            let register: Vec<usize> = (0..n).chain([minus]).collect();
            Ok(vec![
                Gate::permutation_on(Arc::new(perm), vec![], register).with_oracle(true)
            ])
        }
    }
}

/// `H^∞ · D₀ · H^∞` on the search register, with `D₀` kicked back from the
/// current `|−⟩` wire. Returns the new Hadamard count.
fn push_diffusion(circuit: &mut Circuit, n: usize, hadamards: usize) -> Result<usize, GroverError> {
    circuit.push(Gate::GlobalHadamard);
    let predicate: Vec<(usize, bool)> = (0..n).map(|i| (i, false)).collect();
    let flip = phase_flip_gadget(&predicate, minus_wire(n, hadamards + 1))
        .map_err(|e| GroverError::InvalidOracle(e.to_string()))?;
    circuit.extend(flip);
    circuit.push(Gate::GlobalHadamard);
    Ok(hadamards + 2)
}

#[derive(Debug, Clone)]
pub struct GroverCircuit {
    pub circuit: Circuit,
    /// Phase separators, `T − 1`. Each diffusion separator holds two `H^∞`.
    pub interior_boundaries: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GroverMetrics {
    pub oracle_calls: usize,
    pub quantum_depth: usize,
    pub interior_boundaries: usize,
}

impl GroverCircuit {
    pub fn metrics(&self) -> Result<GroverMetrics, GroverError> {
        let m = self.circuit.metrics()?;
        Ok(GroverMetrics {
            oracle_calls: m.oracle_calls,
            quantum_depth: m.quantum_depth,
            interior_boundaries: self.interior_boundaries,
        })
    }
}

/// Search circuit for hidden datum `x`. Wires `0..n` start in `|+⟩`, wire
/// `n` in `|1⟩` and wire `n + 1` in `|−⟩`.
pub fn build_grover_circuit(
    spec: &OracleSpec,
    schedule: &GroverSchedule,
    x: usize,
) -> Result<GroverCircuit, GroverError> {
    let program = PhaseProgram::new(spec, schedule)?;
    build_from_program(&program, x)
}

pub fn build_from_program(program: &PhaseProgram, x: usize) -> Result<GroverCircuit, GroverError> {
    let spec = program.spec();
    spec.check_hidden(x)?;
    let n = spec.width();
    let mut wires = vec![WireInit::Plus; n];
    wires.extend([WireInit::One, WireInit::Minus]);
    let mut circuit = Circuit::new(n + 2)
        .with_input(InputSpec::Wires(wires))
        .with_readout(program.readout());
    let mut hadamards = 0;
    let phases = program.phases();
    for (t, phase) in phases.iter().enumerate() {
        let steps = phase.steps();
        for (j, step) in steps.iter().enumerate() {
            if !step.is_identity() {
                circuit.push(Gate::permutation_on(
                    step.clone(),
                    vec![],
                    (0..n).collect::<Vec<_>>(),
                ));
            }
            if j < phase.k() {
                circuit.extend(build_oracle(spec, x, minus_wire(n, hadamards))?);
            }
        }
        if t + 1 < phases.len() {
            match program.boundary() {
                Boundary::Hadamard => {
                    circuit.push(Gate::GlobalHadamard);
                    hadamards += 1;
                }
                Boundary::Diffusion => hadamards = push_diffusion(&mut circuit, n, hadamards)?,
            }
        }
    }
    circuit.check()?;
    Ok(GroverCircuit {
        circuit,
        interior_boundaries: phases.len() - 1,
    })
}

/// Probability that the search register reads a preimage of `x`, with the
/// ancilla wires marginalised.
pub fn success_probability(
    spec: &OracleSpec,
    x: usize,
    circuit: &Circuit,
    max_width: usize,
) -> Result<f64, GroverError> {
    spec.check_hidden(x)?;
    let n = spec.width();
    if circuit.width < n {
        return Err(crate::statevec::SimError::WidthMismatch(circuit.width, n).into());
    }
    let mut state = StateVector::init(circuit.width, &circuit.input, max_width)?;
    state.run(circuit)?;
    let search: Vec<usize> = (0..n).collect();
    let marginal = state.distribution().marginal(&search);
    Ok(spec
        .preimages(x)
        .into_iter()
        .map(|z| marginal.prob(z))
        .sum())
}
