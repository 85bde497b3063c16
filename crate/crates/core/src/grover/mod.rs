//! Grover search with a restricted number of global Hadamard layers.
//!
//! A schedule `(k_1, …, k_T)` splits the oracle calls into `T` phases. Inside
//! phase `t` the oracle is interleaved with fixed basis permutations
//! `T_{t,0}, …, T_{t,k_t}`; phases are separated by `H^∞`. How the
//! permutations and separators are chosen is a [`Policy`]:
//!
//! - `Diffusion`: textbook Grover. Separators are `H^∞ · D₀ · H^∞` with `D₀`
//!   the phase flip about `|0…0⟩`; in-phase permutations are the identity and
//!   the output is read in the computational basis.
//! - `Identity` and `Random`: single `H^∞` separators, identity or seeded
//!   random permutations, output read in the Hadamard basis.
//! - `Parity`: one phase whose `k` calls are conjugated by permutations built
//!   from the trace form of `GF(2^n)`, so the `k` flipped labels of every
//!   nonzero `x` lie on the same side of the hyperplane `x·z = 1`. Its success
//!   is `(2k/N)²` for `x ≠ 0`.
//!
//! [`program::PhaseProgram`] evaluates schedules exactly on the search
//! register alone; [`builder`] emits the full circuit with its `|1−⟩` ancilla
//! for validation and cross-checks.

pub mod builder;
pub mod gf2n;
pub mod lemmas;
pub mod program;
pub mod proof;
pub mod tradeoff;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::CircuitError;
use crate::permutation::PermutationError;
use crate::statevec::SimError;

#[derive(Debug, Error)]
pub enum GroverError {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid oracle: {0}")]
    InvalidOracle(String),
    #[error("{policy} policy does not support this schedule: {reason}")]
    Unsupported { policy: Policy, reason: String },
    #[error("search register of {0} wires exceeds the limit of {1}")]
    TooWide(usize, usize),
    #[error("hidden datum {x} outside the range of size {range}")]
    HiddenOutOfRange { x: usize, range: usize },
    #[error("t = {t} is outside 1..={phases}")]
    PhaseIndex { t: usize, phases: usize },
    #[error("proof diagnostics need single-H separators and Hadamard-basis readout")]
    NotPaperForm,
    #[error(transparent)]
    Permutation(#[from] PermutationError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// The function `f` behind the oracle `G_x|z⟩ = (−1)^{[f(z) = x]}|z⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    n: usize,
    range: usize,
    /// `None` means `f(z)` is the low `log₂ N` bits of `z`.
    table: Option<Arc<Vec<u32>>>,
}

impl OracleSpec {
    /// `f(z) = z mod 2^range_bits`, i.e. the first `range_bits` wires.
    pub fn first_bits(n: usize, range_bits: usize) -> Result<Self, GroverError> {
        if n == 0 || range_bits == 0 || range_bits > n {
            return Err(GroverError::InvalidOracle(format!(
                "need 1 ≤ range bits ({range_bits}) ≤ search wires ({n})"
            )));
        }
        Ok(Self {
            n,
            range: 1 << range_bits,
            table: None,
        })
    }

    /// `f = id` on `n` wires.
    pub fn standard(n: usize) -> Result<Self, GroverError> {
        Self::first_bits(n, n)
    }

    /// Arbitrary `f` given by its table over all `2^n` labels; the range is
    /// `0..=max`.
    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self, GroverError> {
        if table.len() != 1 << n {
            return Err(GroverError::InvalidOracle(format!(
                "table has {} entries for {n} wires",
                table.len()
            )));
        }
        let range = table.iter().copied().max().unwrap_or(0) as usize + 1;
        Ok(Self {
            n,
            range,
            table: Some(Arc::new(table)),
        })
    }

    pub fn width(&self) -> usize {
        self.n
    }

    /// `N`, the number of possible hidden data.
    pub fn range_size(&self) -> usize {
        self.range
    }

    /// Number of low wires `f` inspects, when it is the default bit check.
    pub fn range_bits(&self) -> Option<usize> {
        match self.table {
            None => Some(self.range.trailing_zeros() as usize),
            Some(_) => None,
        }
    }

    pub fn table(&self) -> Option<&[u32]> {
        self.table.as_deref().map(|t| t.as_slice())
    }

    #[inline]
    pub fn eval(&self, z: usize) -> usize {
        match &self.table {
            None => z & (self.range - 1),
            Some(t) => t[z] as usize,
        }
    }

    pub fn preimages(&self, x: usize) -> Vec<usize> {
        match &self.table {
            None => (0..1usize << self.n).skip(x).step_by(self.range).collect(),
            Some(_) => (0..1usize << self.n)
                .filter(|&z| self.eval(z) == x)
                .collect(),
        }
    }

    pub(crate) fn check_hidden(&self, x: usize) -> Result<(), GroverError> {
        if x >= self.range {
            return Err(GroverError::HiddenOutOfRange {
                x,
                range: self.range,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Diffusion,
    Identity,
    Random,
    Parity,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Diffusion => "diffusion",
            Policy::Identity => "identity",
            Policy::Random => "random",
            Policy::Parity => "parity",
        })
    }
}

impl FromStr for Policy {
    type Err = GroverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "diffusion" => Ok(Policy::Diffusion),
            "identity" => Ok(Policy::Identity),
            "random" => Ok(Policy::Random),
            "parity" => Ok(Policy::Parity),
            other => Err(GroverError::InvalidSchedule(format!(
                "unknown policy `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroverSchedule {
    pub k: Vec<usize>,
    pub policy: Policy,
    pub seed: u64,
}

impl GroverSchedule {
    pub fn new(k: Vec<usize>, policy: Policy, seed: u64) -> Result<Self, GroverError> {
        if k.is_empty() {
            return Err(GroverError::InvalidSchedule(
                "at least one phase is required".into(),
            ));
        }
        if k.contains(&0) {
            return Err(GroverError::InvalidSchedule(
                "every phase needs k ≥ 1".into(),
            ));
        }
        Ok(Self { k, policy, seed })
    }

    /// `R` textbook Grover iterations: `R + 1` single-call phases joined by
    /// diffusion separators.
    pub fn standard(iterations: usize) -> Self {
        Self {
            k: vec![1; iterations + 1],
            policy: Policy::Diffusion,
            seed: 0,
        }
    }

    /// Parses `TxK` terms joined by `|`, e.g. `1x32|4x8` is one phase of 32
    /// calls followed by four phases of 8.
    pub fn parse(text: &str, policy: Policy, seed: u64) -> Result<Self, GroverError> {
        let mut k = Vec::new();
        for term in text.split('|') {
            let (t, calls) = term
                .trim()
                .split_once('x')
                .ok_or_else(|| GroverError::InvalidSchedule(format!("term `{term}` is not TxK")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| GroverError::InvalidSchedule(format!("`{s}` is not a count")))
            };
            let (t, calls) = (parse(t)?, parse(calls)?);
            if t == 0 {
                return Err(GroverError::InvalidSchedule(format!(
                    "term `{term}` has no phases"
                )));
            }
            k.extend(std::iter::repeat_n(calls, t));
        }
        Self::new(k, policy, seed)
    }

    pub fn phases(&self) -> usize {
        self.k.len()
    }

    pub fn total_calls(&self) -> usize {
        self.k.iter().sum()
    }

    pub fn sum_sqrt_k(&self) -> f64 {
        self.k.iter().map(|&k| (k as f64).sqrt()).sum()
    }

    /// Run-length form in the `TxK|…` grammar.
    pub fn label(&self) -> String {
        let mut terms: Vec<(usize, usize)> = Vec::new();
        for &k in &self.k {
            match terms.last_mut() {
                Some((t, prev)) if *prev == k => *t += 1,
                _ => terms.push((1, k)),
            }
        }
        terms
            .iter()
            .map(|(t, k)| format!("{t}x{k}"))
            .collect::<Vec<_>>()
            .join("|")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_grammar() {
        let s = GroverSchedule::parse("1x32|4x8", Policy::Random, 0).unwrap();
        assert_eq!(s.k, vec![32, 8, 8, 8, 8]);
        assert_eq!(s.label(), "1x32|4x8");
        assert_eq!(s.total_calls(), 64);
        assert!((s.sum_sqrt_k() - (32f64.sqrt() + 4.0 * 8f64.sqrt())).abs() < 1e-12);
        assert!(GroverSchedule::parse("3x0", Policy::Random, 0).is_err());
        assert!(GroverSchedule::parse("3y2", Policy::Random, 0).is_err());
        assert!(GroverSchedule::parse("0x2", Policy::Random, 0).is_err());
    }

    #[test]
    fn default_oracle_checks_low_bits() {
        let spec = OracleSpec::first_bits(4, 2).unwrap();
        assert_eq!(spec.range_size(), 4);
        assert_eq!(spec.eval(0b1110), 0b10);
        assert_eq!(spec.preimages(1), vec![1, 5, 9, 13]);
        assert!(OracleSpec::first_bits(3, 4).is_err());
    }
}
