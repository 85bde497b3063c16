//! Line-oriented text format for circuits.
//!
//! ```text
//! # comment
//! WIDTH 4
//! INPUT 1-00
//! READOUT X
//! H*
//! TOF c2 c3 t1
//! PERM MODMUL 2 15 c0 w1 w2 w3 w4
//! PERM FLIPZERO w0 w1 w2 !oracle
//! ```
//!
//! `PERM` takes a catalog entry (`MODMUL g M`, `XORCONST k`, `FLIPZERO`,
//! `RANDOM seed`) or a name registered in a [`PermutationRegistry`], then
//! optional controls `c<i>` and register wires `w<j>`. Without `w` tokens the
//! register is wires `0..n`. A trailing `!oracle` marks an oracle call.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, InputSpec, PermutationGate, Readout, Toffoli};
use crate::permutation::{Permutation, PermutationError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: wire {wire} out of range for width {width}")]
    WireOutOfRange {
        line: usize,
        wire: usize,
        width: usize,
    },
    #[error("line {line}: unknown gate `{name}`")]
    UnknownGate { line: usize, name: String },
    #[error("line {line}: unknown permutation `{name}`")]
    UnknownPermutation { line: usize, name: String },
    #[error("line {line}: {source}")]
    Permutation {
        line: usize,
        source: PermutationError,
    },
    #[error("missing WIDTH header")]
    MissingWidth,
}

/// Named permutations available to the parser beyond the built-in catalog.
#[derive(Debug, Clone, Default)]
pub struct PermutationRegistry {
    entries: BTreeMap<String, Arc<Permutation>>,
}

impl PermutationRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `perm` under its own name.
    pub fn register(&mut self, perm: Arc<Permutation>) {
        self.entries.insert(perm.name().to_string(), perm);
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Permutation>> {
        self.entries.get(name)
    }

    /// Registry holding every permutation a circuit uses.
    pub fn from_circuit(circuit: &Circuit) -> Self {
        let mut r = Self::new();
        for p in circuit.permutations() {
            r.register(p);
        }
        r
    }
}

pub fn serialize(circuit: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "WIDTH {}", circuit.width).unwrap();
    if circuit.input != InputSpec::Basis(0) {
        writeln!(out, "INPUT {}", circuit.input.to_symbols(circuit.width)).unwrap();
    }
    if circuit.readout == Readout::X {
        writeln!(out, "READOUT X").unwrap();
    }
    for gate in &circuit.gates {
        match gate {
            Gate::GlobalHadamard => out.push_str("H*"),
            Gate::Toffoli(t) => {
                out.push_str("TOF");
                for c in &t.controls {
                    write!(out, " c{c}").unwrap();
                }
                for t in &t.targets {
                    write!(out, " t{t}").unwrap();
                }
            }
            Gate::Permutation(p) => {
                write!(out, "PERM {}", p.perm.name()).unwrap();
                for c in &p.controls {
                    write!(out, " c{c}").unwrap();
                }
                let default_register = p.register.iter().copied().eq(0..circuit.width)
                    && p.register.len() == circuit.width;
                if !default_register {
                    for w in &p.register {
                        write!(out, " w{w}").unwrap();
                    }
                }
            }
        }
        if gate.is_oracle() {
            out.push_str(" !oracle");
        }
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    parse_with(text, &PermutationRegistry::default())
}

pub fn parse_with(text: &str, registry: &PermutationRegistry) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens: Vec<&str> = content.split_whitespace().collect();
        let keyword = tokens[0];
        if keyword == "WIDTH" {
            if circuit.is_some() {
                return Err(syntax(line, "duplicate WIDTH header"));
            }
            let width = match tokens.as_slice() {
                [_, n] => n
                    .parse()
                    .map_err(|_| syntax(line, "WIDTH expects an integer"))?,
                _ => return Err(syntax(line, "WIDTH expects one argument")),
            };
            circuit = Some(Circuit::new(width));
            continue;
        }
        let c = circuit.as_mut().ok_or(ParseError::MissingWidth)?;
        let width = c.width;
        match keyword {
            "INPUT" => {
                let [_, symbols] = tokens.as_slice() else {
                    return Err(syntax(line, "INPUT expects one argument"));
                };
                let spec = InputSpec::parse(symbols)
                    .ok_or_else(|| syntax(line, "INPUT symbols must be 0, 1, + or -"))?;
                if spec.wires(width).len() != width {
                    return Err(syntax(line, "INPUT length must equal WIDTH"));
                }
                c.input = spec;
            }
            "READOUT" => {
                c.readout = match tokens.as_slice() {
                    [_, "X"] => Readout::X,
                    [_, "Z"] => Readout::Z,
                    _ => return Err(syntax(line, "READOUT expects X or Z")),
                };
            }
            "H*" => {
                if tokens.len() != 1 {
                    return Err(syntax(line, "H* takes no arguments"));
                }
                c.gates.push(Gate::GlobalHadamard);
            }
            "TOF" => {
                let oracle = strip_oracle(&mut tokens);
                let mut controls = Vec::new();
                let mut targets = Vec::new();
                for tok in &tokens[1..] {
                    match wire_token(tok, line, width)? {
                        ('c', w) if targets.is_empty() => controls.push(w),
                        ('t', w) => targets.push(w),
                        _ => {
                            return Err(syntax(
                                line,
                                &format!("unexpected token `{tok}` (controls come before targets)"),
                            ))
                        }
                    }
                }
                c.gates.push(Gate::Toffoli(Toffoli {
                    controls,
                    targets,
                    oracle,
                }));
            }
            "PERM" => {
                let oracle = strip_oracle(&mut tokens);
                let (name, rest) = perm_name(&tokens[1..], line)?;
                let mut controls = Vec::new();
                let mut register = Vec::new();
                for tok in rest {
                    match wire_token(tok, line, width)? {
                        ('c', w) if register.is_empty() => controls.push(w),
                        ('w', w) => register.push(w),
                        _ => return Err(syntax(line, &format!("unexpected token `{tok}`"))),
                    }
                }
                if register.is_empty() {
                    register = (0..width).collect();
                }
                let perm = resolve(&name, register.len(), registry, line)?;
                c.gates.push(Gate::Permutation(PermutationGate {
                    perm,
                    controls,
                    register,
                    oracle,
                }));
            }
            other => {
                return Err(ParseError::UnknownGate {
                    line,
                    name: other.to_string(),
                })
            }
        }
    }
    circuit.ok_or(ParseError::MissingWidth)
}

fn syntax(line: usize, message: &str) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.to_string(),
    }
}

fn strip_oracle(tokens: &mut Vec<&str>) -> bool {
    if tokens.last() == Some(&"!oracle") {
        tokens.pop();
        true
    } else {
        false
    }
}

fn wire_token(tok: &str, line: usize, width: usize) -> Result<(char, usize), ParseError> {
    let mut chars = tok.chars();
    let kind = chars.next().unwrap_or(' ');
    let wire: usize = chars
        .as_str()
        .parse()
        .map_err(|_| syntax(line, &format!("malformed wire token `{tok}`")))?;
    if !matches!(kind, 'c' | 't' | 'w') {
        return Err(syntax(line, &format!("malformed wire token `{tok}`")));
    }
    if wire >= width {
        return Err(ParseError::WireOutOfRange { line, wire, width });
    }
    Ok((kind, wire))
}

/// Splits the permutation name from the wire tokens that follow. The name runs
/// up to the first `cN` or `wN` token, so it may hold spaces (`MODMUL 2 15`,
/// `ORACLE 3`).
fn perm_name<'a>(
    tokens: &'a [&'a str],
    line: usize,
) -> Result<(String, &'a [&'a str]), ParseError> {
    let is_wire = |tok: &&str| {
        let mut chars = tok.chars();
        matches!(chars.next(), Some('c' | 'w'))
            && !chars.as_str().is_empty()
            && chars.all(|c| c.is_ascii_digit())
    };
    let split = tokens.iter().position(is_wire).unwrap_or(tokens.len());
    if split == 0 {
        return Err(syntax(line, "PERM expects a permutation name"));
    }
    Ok((tokens[..split].join(" "), &tokens[split..]))
}

fn resolve(
    name: &str,
    bits: usize,
    registry: &PermutationRegistry,
    line: usize,
) -> Result<Arc<Permutation>, ParseError> {
    let args: Vec<&str> = name.split(' ').collect();
    let num = |s: &str| -> Result<u64, ParseError> {
        s.parse()
            .map_err(|_| syntax(line, &format!("expected an integer, found `{s}`")))
    };
    let wrap = |source| ParseError::Permutation { line, source };
    let perm = match args.as_slice() {
        ["MODMUL", g, m] => Permutation::modmul(bits, num(g)?, num(m)?).map_err(wrap)?,
        ["XORCONST", k] => Permutation::xor_const(bits, num(k)?).map_err(wrap)?,
        ["RANDOM", s] => Permutation::random(bits, num(s)?).map_err(wrap)?,
        ["FLIPZERO"] if bits >= 1 => Permutation::flip_zero(bits),
        ["IDENTITY"] => Permutation::identity(bits),
        _ => {
            return registry
                .get(name)
                .cloned()
                .ok_or_else(|| ParseError::UnknownPermutation {
                    line,
                    name: name.to_string(),
                })
        }
    };
    Ok(Arc::new(perm))
}

/// Catalog permutation from its canonical name, e.g. `"MODMUL 2 15"`.
pub fn catalog_permutation(name: &str, bits: usize) -> Result<Arc<Permutation>, ParseError> {
    resolve(name.trim(), bits, &PermutationRegistry::default(), 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn global_hadamard_line() {
        let c = parse("WIDTH 2\nH*\n").unwrap();
        assert_eq!(c.gates, vec![Gate::GlobalHadamard]);
    }

    #[test]
    fn toffoli_line() {
        let c = parse("WIDTH 3\nTOF c0 c1 t2").unwrap();
        assert_eq!(c.gates, vec![Gate::toffoli(vec![0, 1], vec![2])]);
    }

    #[test]
    fn comments_input_and_oracle() {
        let text = "# header\nWIDTH 4 # four wires\nINPUT 1-00\nTOF c2 c3 t1 !oracle\n";
        let c = parse(text).unwrap();
        assert_eq!(c.input, InputSpec::parse("1-00").unwrap());
        assert!(c.gates[0].is_oracle());
        assert_eq!(serialize(&c), "WIDTH 4\nINPUT 1-00\nTOF c2 c3 t1 !oracle\n");
    }

    #[test]
    fn catalog_permutations() {
        let c = parse("WIDTH 5\nPERM MODMUL 2 15 c0 w1 w2 w3 w4\nPERM XORCONST 3\n").unwrap();
        let Gate::Permutation(p) = &c.gates[0] else {
            panic!()
        };
        assert_eq!(p.controls, vec![0]);
        assert_eq!(p.register, vec![1, 2, 3, 4]);
        assert_eq!(p.perm.apply(7), 14);
        let Gate::Permutation(p) = &c.gates[1] else {
            panic!()
        };
        assert_eq!(p.register, vec![0, 1, 2, 3, 4]);
        assert_eq!(p.perm.apply(1), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(
            parse("WIDTH 2\nH*\nFOO c0"),
            Err(ParseError::UnknownGate { line: 3, .. })
        ));
        assert!(matches!(
            parse("WIDTH 2\nTOF c0 t2"),
            Err(ParseError::WireOutOfRange {
                line: 2,
                wire: 2,
                ..
            })
        ));
        assert!(matches!(
            parse("WIDTH 2\nTOF c0 tx"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse("WIDTH 2\nPERM mystery"),
            Err(ParseError::UnknownPermutation { line: 2, .. })
        ));
        assert!(matches!(parse("H*"), Err(ParseError::MissingWidth)));
    }

    #[test]
    fn registered_permutation_round_trip() {
        let perm = Arc::new(Permutation::random(3, 9).unwrap().with_name("scramble"));
        let mut c = Circuit::new(4);
        c.push(Gate::permutation_on(perm.clone(), vec![3], vec![0, 1, 2]).with_oracle(true));
        let text = serialize(&c);
        assert_eq!(text, "WIDTH 4\nPERM scramble c3 w0 w1 w2 !oracle\n");
        let mut reg = PermutationRegistry::new();
        reg.register(perm);
        assert_eq!(parse_with(&text, &reg).unwrap(), c);
    }
}
