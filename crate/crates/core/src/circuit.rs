//! Circuit representation for the restricted gate set: generalised Toffoli
//! gates, the global Hadamard layer `H^∞`, and black-box basis permutations.
//!
//! Wire `i` is bit `i` of a basis label (little-endian), so the input string
//! `"10"` is the label `1`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::permutation::Permutation;

/// Per-wire initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WireInit {
    Zero,
    One,
    Plus,
    Minus,
}

impl WireInit {
    pub fn symbol(self) -> char {
        match self {
            WireInit::Zero => '0',
            WireInit::One => '1',
            WireInit::Plus => '+',
            WireInit::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '0' => Some(WireInit::Zero),
            '1' => Some(WireInit::One),
            '+' => Some(WireInit::Plus),
            '-' | '−' => Some(WireInit::Minus),
            _ => None,
        }
    }

    pub fn is_x_basis(self) -> bool {
        matches!(self, WireInit::Plus | WireInit::Minus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSpec {
    /// Computational basis state `|label⟩`.
    Basis(u64),
    /// One symbol per wire, wire 0 first.
    Wires(Vec<WireInit>),
}

impl Default for InputSpec {
    fn default() -> Self {
        InputSpec::Basis(0)
    }
}

impl InputSpec {
    pub fn parse(symbols: &str) -> Option<Self> {
        symbols
            .chars()
            .map(WireInit::from_symbol)
            .collect::<Option<Vec<_>>>()
            .map(InputSpec::Wires)
    }

    /// Symbols for every wire of an `n`-wire circuit.
    pub fn wires(&self, n: usize) -> Vec<WireInit> {
        match self {
            InputSpec::Basis(label) => (0..n)
                .map(|i| {
                    if i < 64 && (label >> i) & 1 == 1 {
                        WireInit::One
                    } else {
                        WireInit::Zero
                    }
                })
                .collect(),
            InputSpec::Wires(w) => w.clone(),
        }
    }

    pub fn to_symbols(&self, n: usize) -> String {
        self.wires(n).into_iter().map(WireInit::symbol).collect()
    }

    /// `1` when some wire starts in the X basis: realising it from a
    /// computational-basis input costs one leading `H^∞`.
    pub fn prep_depth(&self) -> usize {
        match self {
            InputSpec::Basis(_) => 0,
            InputSpec::Wires(w) => usize::from(w.iter().any(|s| s.is_x_basis())),
        }
    }

    /// Computational-basis relabelling of the input (every `+` as `0`, every
    /// `−` as `1`) which a leading `H^∞` turns into the X-basis wires.
    ///
    /// Only meaningful when all wires are X-basis symbols; mixed inputs need
    /// their Z-basis wires pre-rotated as well, which this does not model.
    pub fn desugared(&self, n: usize) -> Self {
        let label = self
            .wires(n)
            .into_iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, WireInit::One | WireInit::Minus))
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        InputSpec::Basis(label)
    }
}

/// Basis in which the output register is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Readout {
    /// Computational-basis measurement.
    #[default]
    Z,
    /// Hadamard-basis measurement; simulated as one trailing `H^∞` that is not
    /// counted towards quantum-depth.
    X,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Toffoli {
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
    pub oracle: bool,
}

impl Toffoli {
    pub fn new(controls: impl Into<Vec<usize>>, targets: impl Into<Vec<usize>>) -> Self {
        Self {
            controls: controls.into(),
            targets: targets.into(),
            oracle: false,
        }
    }

    pub fn not(wire: usize) -> Self {
        Self::new(vec![], vec![wire])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(vec![control], vec![target])
    }
}

/// A permutation applied to an ordered register of wires (register wire `i`
/// is bit `i` of the permutation label), conditioned on `controls`.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationGate {
    pub perm: Arc<Permutation>,
    pub controls: Vec<usize>,
    pub register: Vec<usize>,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Toffoli(Toffoli),
    GlobalHadamard,
    Permutation(PermutationGate),
}

impl Gate {
    pub fn toffoli(controls: impl Into<Vec<usize>>, targets: impl Into<Vec<usize>>) -> Self {
        Gate::Toffoli(Toffoli::new(controls, targets))
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Toffoli(Toffoli::cnot(control, target))
    }

    pub fn not(wire: usize) -> Self {
        Gate::Toffoli(Toffoli::not(wire))
    }

    /// Uncontrolled permutation over the first `perm.bits()` wires.
    pub fn permutation(perm: Arc<Permutation>) -> Self {
        let register = (0..perm.bits()).collect();
        Gate::Permutation(PermutationGate {
            perm,
            controls: vec![],
            register,
            oracle: false,
        })
    }

    pub fn permutation_on(
        perm: Arc<Permutation>,
        controls: impl Into<Vec<usize>>,
        register: impl Into<Vec<usize>>,
    ) -> Self {
        Gate::Permutation(PermutationGate {
            perm,
            controls: controls.into(),
            register: register.into(),
            oracle: false,
        })
    }

    pub fn with_oracle(mut self, flag: bool) -> Self {
        match &mut self {
            Gate::Toffoli(t) => t.oracle = flag,
            Gate::Permutation(p) => p.oracle = flag,
            Gate::GlobalHadamard => {}
        }
        self
    }

    pub fn is_oracle(&self) -> bool {
        match self {
            Gate::Toffoli(t) => t.oracle,
            Gate::Permutation(p) => p.oracle,
            Gate::GlobalHadamard => false,
        }
    }

    fn wires(&self) -> Vec<usize> {
        match self {
            Gate::Toffoli(t) => t.controls.iter().chain(&t.targets).copied().collect(),
            Gate::Permutation(p) => p.controls.iter().chain(&p.register).copied().collect(),
            Gate::GlobalHadamard => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    ControlTargetOverlap,
    EmptyTargets,
    DuplicateWire(usize),
    WireOutOfRange(usize),
    RegisterWidthMismatch { register: usize, perm_bits: usize },
    InverseMismatch,
    InputLengthMismatch { symbols: usize, width: usize },
    InputLabelOutOfRange,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::ControlTargetOverlap => write!(f, "controls and targets overlap"),
            Rule::EmptyTargets => write!(f, "empty target set"),
            Rule::DuplicateWire(w) => write!(f, "wire {w} listed twice"),
            Rule::WireOutOfRange(w) => write!(f, "wire {w} out of range"),
            Rule::RegisterWidthMismatch {
                register,
                perm_bits,
            } => write!(
                f,
                "register of {register} wires for a {perm_bits}-bit permutation"
            ),
            Rule::InverseMismatch => write!(f, "forward and inverse tables disagree"),
            Rule::InputLengthMismatch { symbols, width } => {
                write!(f, "input has {symbols} symbols for {width} wires")
            }
            Rule::InputLabelOutOfRange => write!(f, "input label exceeds circuit width"),
        }
    }
}

/// A rule broken by a circuit. `gate` is `None` for circuit-level rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub gate: Option<usize>,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gate {
            Some(i) => write!(f, "gate {i}: {}", self.rule),
            None => write!(f, "circuit: {}", self.rule),
        }
    }
}

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("circuit is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("cannot concatenate circuits of width {0} and {1}")]
    WidthMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CircuitMetrics {
    pub width: usize,
    /// Generalised Toffoli gates; black-box permutations are excluded
    /// because their Toffoli size is unspecified.
    pub size: usize,
    /// Number of `H^∞` gates.
    pub quantum_depth: usize,
    pub oracle_calls: usize,
    pub permutation_gates: usize,
    /// Extra leading `H^∞` needed to realise X-basis input wires.
    pub input_prep_depth: usize,
}

impl std::ops::Add for CircuitMetrics {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            width: self.width.max(rhs.width),
            size: self.size + rhs.size,
            quantum_depth: self.quantum_depth + rhs.quantum_depth,
            oracle_calls: self.oracle_calls + rhs.oracle_calls,
            permutation_gates: self.permutation_gates + rhs.permutation_gates,
            input_prep_depth: self.input_prep_depth.max(rhs.input_prep_depth),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub width: usize,
    pub gates: Vec<Gate>,
    pub input: InputSpec,
    pub readout: Readout,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            input: InputSpec::default(),
            readout: Readout::Z,
        }
    }

    pub fn with_input(mut self, input: InputSpec) -> Self {
        self.input = input;
        self
    }

    pub fn with_readout(mut self, readout: Readout) -> Self {
        self.readout = readout;
        self
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> &mut Self {
        self.gates.extend(gates);
        self
    }

    /// Appends `other`'s gates; the input spec and readout of `self` are kept.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self, CircuitError> {
        if self.width != other.width {
            return Err(CircuitError::WidthMismatch(self.width, other.width));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        match &self.input {
            InputSpec::Wires(w) if w.len() != self.width => out.push(Violation {
                gate: None,
                rule: Rule::InputLengthMismatch {
                    symbols: w.len(),
                    width: self.width,
                },
            }),
            InputSpec::Basis(label) if self.width < 64 && label >> self.width != 0 => {
                out.push(Violation {
                    gate: None,
                    rule: Rule::InputLabelOutOfRange,
                })
            }
            _ => {}
        }
        for (i, gate) in self.gates.iter().enumerate() {
            let mut flag = |rule| {
                out.push(Violation {
                    gate: Some(i),
                    rule,
                })
            };
            let mut seen = BTreeSet::new();
            for w in gate.wires() {
                if w >= self.width {
                    flag(Rule::WireOutOfRange(w));
                }
                if !seen.insert(w) {
                    flag(Rule::DuplicateWire(w));
                }
            }
            match gate {
                Gate::Toffoli(t) => {
                    if t.targets.is_empty() {
                        flag(Rule::EmptyTargets);
                    }
                    if t.controls.iter().any(|c| t.targets.contains(c)) {
                        flag(Rule::ControlTargetOverlap);
                    }
                }
                Gate::Permutation(p) => {
                    if p.register.len() != p.perm.bits() {
                        flag(Rule::RegisterWidthMismatch {
                            register: p.register.len(),
                            perm_bits: p.perm.bits(),
                        });
                    }
                    if p.controls.iter().any(|c| p.register.contains(c)) {
                        flag(Rule::ControlTargetOverlap);
                    }
                    if !p.perm.check_inverse() {
                        flag(Rule::InverseMismatch);
                    }
                }
                Gate::GlobalHadamard => {}
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), CircuitError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(CircuitError::Invalid(v))
        }
    }

    pub fn metrics(&self) -> Result<CircuitMetrics, CircuitError> {
        self.check()?;
        let mut m = CircuitMetrics {
            width: self.width,
            input_prep_depth: self.input.prep_depth(),
            ..Default::default()
        };
        for gate in &self.gates {
            match gate {
                Gate::Toffoli(_) => m.size += 1,
                Gate::GlobalHadamard => m.quantum_depth += 1,
                Gate::Permutation(_) => m.permutation_gates += 1,
            }
            if gate.is_oracle() {
                m.oracle_calls += 1;
            }
        }
        Ok(m)
    }

    /// Every distinct permutation used by the circuit, keyed by name.
    pub fn permutations(&self) -> Vec<Arc<Permutation>> {
        let mut seen = BTreeSet::new();
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::Permutation(p) if seen.insert(p.perm.name().to_string()) => {
                    Some(p.perm.clone())
                }
                _ => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_controls_and_targets() {
        let mut c = Circuit::new(2);
        c.push(Gate::toffoli(vec![0], vec![0]));
        let v = c.validate();
        assert!(v
            .iter()
            .any(|v| v.rule == Rule::ControlTargetOverlap && v.gate == Some(0)));
        assert_eq!(
            v.iter()
                .find(|v| v.rule == Rule::ControlTargetOverlap)
                .unwrap()
                .rule
                .to_string(),
            "controls and targets overlap"
        );
    }

    #[test]
    fn empty_target_set() {
        let mut c = Circuit::new(2);
        c.push(Gate::toffoli(vec![0], vec![]));
        let v = c.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule.to_string(), "empty target set");
    }

    #[test]
    fn cnot_is_valid() {
        let mut c = Circuit::new(2);
        c.push(Gate::cnot(0, 1));
        assert!(c.validate().is_empty());
    }

    #[test]
    fn out_of_range_and_register_mismatch() {
        let mut c = Circuit::new(3);
        c.push(Gate::cnot(0, 3));
        let p = Arc::new(Permutation::identity(2));
        c.push(Gate::permutation_on(p, vec![], vec![0, 1, 2]));
        let v = c.validate();
        assert!(v.contains(&Violation {
            gate: Some(0),
            rule: Rule::WireOutOfRange(3)
        }));
        assert!(v.iter().any(|v| matches!(
            v.rule,
            Rule::RegisterWidthMismatch {
                register: 3,
                perm_bits: 2
            }
        )));
        assert!(c.metrics().is_err());
    }

    #[test]
    fn empty_circuit_metrics() {
        let m = Circuit::new(4).metrics().unwrap();
        assert_eq!(
            m,
            CircuitMetrics {
                width: 4,
                ..Default::default()
            }
        );
    }

    #[test]
    fn input_prep_depth() {
        let c = Circuit::new(3).with_input(InputSpec::parse("+1-").unwrap());
        assert_eq!(c.metrics().unwrap().input_prep_depth, 1);
        assert_eq!(c.input.desugared(3), InputSpec::Basis(0b110));
        let c = Circuit::new(3).with_input(InputSpec::parse("101").unwrap());
        assert_eq!(c.metrics().unwrap().input_prep_depth, 0);
    }
}
