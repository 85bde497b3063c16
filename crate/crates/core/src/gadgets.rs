//! Named circuit fragments built from the restricted gate set.
//!
//! Fragments are plain gate lists; splice them into a [`Circuit`] with
//! [`Circuit::extend`].

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, InputSpec, Toffoli};
use crate::statevec::{StateVector, DEFAULT_MAX_WIDTH};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("wires {0:?} must be distinct")]
    NotDistinct(Vec<usize>),
    #[error("the |−⟩ wire {0} is also a predicate wire")]
    MinusWireOverlap(usize),
    #[error("controls and targets overlap")]
    ControlTargetOverlap,
    #[error("empty target set")]
    EmptyTargets,
}

fn distinct(wires: &[usize]) -> Result<(), GadgetError> {
    for (i, w) in wires.iter().enumerate() {
        if wires[..i].contains(w) {
            return Err(GadgetError::NotDistinct(wires.to_vec()));
        }
    }
    Ok(())
}

/// Where the `c`/`d` swap sits relative to the five-gate core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwapPlacement {
    #[default]
    After,
    Before,
}

/// `Λ_cd(X_b) · H^∞ · Λ_cd(X_a) · H^∞ · Λ_cd(X_b)`, listed in application
/// order. With `a, b` in `|1−⟩` it maps `|c d⟩` to `H|d⟩ ⊗ H|c⟩` on `(c, d)`.
pub fn local_hadamard_core(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> Result<Vec<Gate>, GadgetError> {
    distinct(&[a, b, c, d])?;
    Ok(vec![
        Gate::toffoli(vec![c, d], vec![b]),
        Gate::GlobalHadamard,
        Gate::toffoli(vec![c, d], vec![a]),
        Gate::GlobalHadamard,
        Gate::toffoli(vec![c, d], vec![b]),
    ])
}

pub fn swap_from_cnots(p: usize, q: usize) -> Result<Vec<Gate>, GadgetError> {
    distinct(&[p, q])?;
    Ok(vec![Gate::cnot(p, q), Gate::cnot(q, p), Gate::cnot(p, q)])
}

/// Core plus a `c`/`d` swap. With `a, b` in `|1−⟩` this is a Hadamard on `d`
/// that restores the ancilla; wire `c` also receives a Hadamard, which is
/// harmless only when its state is fully mixed.
pub fn local_hadamard_gadget(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    placement: SwapPlacement,
) -> Result<Vec<Gate>, GadgetError> {
    let core = local_hadamard_core(a, b, c, d)?;
    let swap = swap_from_cnots(c, d)?;
    Ok(match placement {
        SwapPlacement::After => core.into_iter().chain(swap).collect(),
        SwapPlacement::Before => swap.into_iter().chain(core).collect(),
    })
}

/// Sign flip on basis states where every `(wire, polarity)` holds, kicked
/// back from `minus_wire` (which must hold `|−⟩`). Negative polarities are
/// X-conjugated. The central Toffoli is the middle gate of the result.
pub fn phase_flip_gadget(
    predicate: &[(usize, bool)],
    minus_wire: usize,
) -> Result<Vec<Gate>, GadgetError> {
    let wires: Vec<usize> = predicate.iter().map(|&(w, _)| w).collect();
    distinct(&wires)?;
    if wires.contains(&minus_wire) {
        return Err(GadgetError::MinusWireOverlap(minus_wire));
    }
    let negated: Vec<Gate> = predicate
        .iter()
        .filter(|&&(_, positive)| !positive)
        .map(|&(w, _)| Gate::not(w))
        .collect();
    let mut gates = negated.clone();
    gates.push(Gate::toffoli(wires, vec![minus_wire]));
    gates.extend(negated);
    Ok(gates)
}

/// `H^∞ · Λ_C(X_T) · H^∞`.
pub fn conjugated_toffoli(controls: &[usize], targets: &[usize]) -> Result<Vec<Gate>, GadgetError> {
    if targets.is_empty() {
        return Err(GadgetError::EmptyTargets);
    }
    if controls.iter().any(|c| targets.contains(c)) {
        return Err(GadgetError::ControlTargetOverlap);
    }
    distinct(&[controls, targets].concat())?;
    Ok(vec![
        Gate::GlobalHadamard,
        Gate::Toffoli(Toffoli::new(controls.to_vec(), targets.to_vec())),
        Gate::GlobalHadamard,
    ])
}

/// Outcome of one equivalence check run by [`verify_gadgets`].
#[derive(Debug, Clone, Serialize)]
pub struct GadgetCheck {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl GadgetCheck {
    fn new(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_error,
            tolerance,
            passed: max_error <= tolerance,
        }
    }
}

fn max_diff(x: &StateVector, y: &StateVector) -> f64 {
    x.amplitudes()
        .iter()
        .zip(y.amplitudes())
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
}

fn run_fragment(width: usize, input: &str, gates: &[Gate]) -> StateVector {
    let mut c = Circuit::new(width).with_input(InputSpec::parse(input).expect("valid symbols"));
    c.extend(gates.iter().cloned());
    let mut s = StateVector::init(width, &c.input, DEFAULT_MAX_WIDTH).expect("small width");
    s.run(&c).expect("fragment validates");
    s
}

fn product(input: &str) -> StateVector {
    StateVector::init(
        input.chars().count(),
        &InputSpec::parse(input).unwrap(),
        DEFAULT_MAX_WIDTH,
    )
    .unwrap()
}

/// Runs every gadget equivalence check on wires `a, b, c, d = 0, 1, 2, 3`.
pub fn verify_gadgets() -> Vec<GadgetCheck> {
    const TOL: f64 = 1e-12;
    let mut checks = Vec::new();
    let core = local_hadamard_core(0, 1, 2, 3).unwrap();

    for (input, output) in [
        ("1-00", "1-++"),
        ("1-01", "1--+"),
        ("1-10", "1-+-"),
        ("1-11", "1---"),
    ] {
        let got = run_fragment(4, input, &core);
        checks.push(GadgetCheck::new(
            format!("core |{input}> -> |{output}>"),
            max_diff(&got, &product(output)),
            TOL,
        ));
    }

    for placement in [SwapPlacement::After, SwapPlacement::Before] {
        let gadget = local_hadamard_gadget(0, 1, 2, 3, placement).unwrap();
        let mut worst = 0.0f64;
        for sc in ['0', '1', '+', '-'] {
            for sd in ['0', '1', '+', '-'] {
                let input = format!("1-{sc}{sd}");
                let got = run_fragment(4, &input, &gadget);
                let mut want = product(&input);
                want.apply_single_hadamard(3);
                want.apply_single_hadamard(2);
                worst = worst.max(max_diff(&got, &want));
            }
        }
        checks.push(GadgetCheck::new(
            format!("gadget ({placement:?} swap) = H on c and d, ancilla restored"),
            worst,
            TOL,
        ));
    }

    let mut worst = 0.0f64;
    let swap = swap_from_cnots(1, 4).unwrap();
    let s = StateVector::random(6, 11);
    let mut got = s.clone();
    for g in &swap {
        got.apply_gate(g);
    }
    for z in 0..64usize {
        let swapped = (z & !0b10010) | ((z >> 1) & 1) << 4 | ((z >> 4) & 1) << 1;
        worst = worst.max((got.amplitude(swapped) - s.amplitude(z)).norm());
    }
    checks.push(GadgetCheck::new("swap from three CNOTs", worst, 0.0));

    let mut worst = 0.0f64;
    for mask in 0..4usize {
        let predicate = [(0, mask & 1 == 1), (1, mask & 2 == 2)];
        let gates = phase_flip_gadget(&predicate, 4).unwrap();
        let data = StateVector::random(4, mask as u64);
        let minus = product("-");
        let mut got = data.tensor(&minus);
        for g in &gates {
            got.apply_gate(g);
        }
        let mut want = data.clone();
        want.apply_sign(|z| predicate.iter().all(|&(w, pol)| ((z >> w) & 1 == 1) == pol));
        worst = worst.max(max_diff(&got, &want.tensor(&minus)));
    }
    checks.push(GadgetCheck::new("phase flip = diagonal sign", worst, TOL));

    let conj = conjugated_toffoli(&[0, 1], &[2]).unwrap();
    let mut worst = 0.0f64;
    for z in 0..8usize {
        // the X-basis image of |z⟩ is H^∞|z⟩
        let mut input = StateVector::basis(3, z);
        input.apply_global_hadamard();
        for g in &conj {
            input.apply_gate(g);
        }
        let image = if z & 3 == 3 { z ^ 4 } else { z };
        let mut want = StateVector::basis(3, image);
        want.apply_global_hadamard();
        worst = worst.max(max_diff(&input, &want));
    }
    checks.push(GadgetCheck::new(
        "conjugated Toffoli is Toffoli in the X basis",
        worst,
        TOL,
    ));

    checks
}

/// `|ψ⟩` on wires `c, d` (and `|1−⟩` on `a, b`) whose `c` wire is changed by
/// the full gadget: `|0⟩` on `c` comes back as `|+⟩`.
pub fn caveat_witness() -> (StateVector, StateVector) {
    let gadget = local_hadamard_gadget(0, 1, 2, 3, SwapPlacement::After).unwrap();
    let input = "1-00";
    (product(input), run_fragment(4, input, &gadget))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gadget_counts() {
        let mut c = Circuit::new(4);
        c.extend(local_hadamard_core(0, 1, 2, 3).unwrap());
        let m = c.metrics().unwrap();
        assert_eq!((m.size, m.quantum_depth), (3, 2));
        let mut c = Circuit::new(4);
        c.extend(local_hadamard_gadget(0, 1, 2, 3, SwapPlacement::After).unwrap());
        assert_eq!(c.metrics().unwrap().size, 6);
    }

    #[test]
    fn rejects_repeated_wires() {
        assert!(local_hadamard_core(0, 1, 1, 3).is_err());
        assert!(swap_from_cnots(2, 2).is_err());
        assert_eq!(
            phase_flip_gadget(&[(0, true)], 0),
            Err(GadgetError::MinusWireOverlap(0))
        );
        assert_eq!(
            conjugated_toffoli(&[0], &[]),
            Err(GadgetError::EmptyTargets)
        );
        assert_eq!(
            conjugated_toffoli(&[0], &[0]),
            Err(GadgetError::ControlTargetOverlap)
        );
    }

    #[test]
    fn every_check_passes() {
        for check in verify_gadgets() {
            assert!(check.passed, "{} failed: {:e}", check.name, check.max_error);
        }
    }

    #[test]
    fn wire_c_is_not_restored() {
        let (before, after) = caveat_witness();
        let ip = before.inner_product(&after).unwrap();
        assert!(ip.norm() < 0.99);
        let want = product("1-++");
        assert!(max_diff(&after, &want) < 1e-12);
    }
}
