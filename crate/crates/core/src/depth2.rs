//! Closed form for quantum-depth-2 circuits `H^∞ · T · H^∞` on `|a⟩`, `a ≠ 0`.
//!
//! The amplitude at `c ≠ 0` is `2^{1−n} Σ_{b : a·b = 0} (−1)^{T(b)·c}` and the
//! amplitude at `0` vanishes. The sum is signed, so it is an amplitude rather
//! than a probability; probabilities are its square.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, InputSpec};
use crate::permutation::Permutation;
use crate::statevec::{Distribution, SimError, StateVector};

#[derive(Debug, Error)]
pub enum Depth2Error {
    #[error("input label must be nonzero")]
    ZeroInput,
    #[error("input label {a} does not fit in {n} wires")]
    InputOutOfRange { a: usize, n: usize },
    #[error("permutation acts on {perm_bits} bits but the circuit has {n} wires")]
    WidthMismatch { perm_bits: usize, n: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone)]
pub struct Depth2Instance {
    n: usize,
    a: usize,
    perm: Arc<Permutation>,
}

fn parity(x: usize) -> bool {
    x.count_ones() & 1 == 1
}

impl Depth2Instance {
    pub fn new(a: usize, perm: Arc<Permutation>) -> Result<Self, Depth2Error> {
        let n = perm.bits();
        if a == 0 {
            return Err(Depth2Error::ZeroInput);
        }
        if a >> n != 0 {
            return Err(Depth2Error::InputOutOfRange { a, n });
        }
        Ok(Self { n, a, perm })
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn input(&self) -> usize {
        self.a
    }

    pub fn permutation(&self) -> &Arc<Permutation> {
        &self.perm
    }

    /// Direct evaluation of the signed sum, `O(2^n)` per label.
    pub fn amplitude(&self, c: usize) -> f64 {
        if c == 0 {
            return 0.0;
        }
        let sum: i64 = (0..1usize << self.n)
            .filter(|&b| !parity(self.a & b))
            .map(|b| {
                if parity(self.perm.apply(b) & c) {
                    -1
                } else {
                    1
                }
            })
            .sum();
        sum as f64 * 2f64.powi(1 - self.n as i32)
    }

    /// All amplitudes by one Walsh–Hadamard transform of the indicator of
    /// `T({b : a·b = 0})`.
    pub fn amplitudes(&self) -> Vec<f64> {
        let size = 1usize << self.n;
        let mut v = vec![0.0; size];
        for b in (0..size).filter(|&b| !parity(self.a & b)) {
            v[self.perm.apply(b)] = 1.0;
        }
        fwht(&mut v);
        let scale = 2f64.powi(1 - self.n as i32);
        v.iter_mut().for_each(|x| *x *= scale);
        v[0] = 0.0;
        v
    }

    pub fn distribution(&self) -> Distribution {
        Distribution::new(
            self.n,
            self.amplitudes().into_iter().map(|x| x * x).collect(),
        )
    }

    /// Label-by-label evaluation of [`amplitude`](Self::amplitude), squared.
    pub fn distribution_direct(&self) -> Distribution {
        let probs = (0..1usize << self.n)
            .into_par_iter()
            .map(|c| self.amplitude(c).powi(2))
            .collect();
        Distribution::new(self.n, probs)
    }

    pub fn circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.n).with_input(InputSpec::Basis(self.a as u64));
        c.push(Gate::GlobalHadamard);
        c.push(Gate::permutation(self.perm.clone()));
        c.push(Gate::GlobalHadamard);
        c
    }

    pub fn simulate(&self, max_width: usize) -> Result<Distribution, Depth2Error> {
        let mut s = StateVector::init(self.n, &InputSpec::Basis(self.a as u64), max_width)?;
        s.run(&self.circuit())?;
        Ok(s.distribution())
    }

    pub fn compare(&self, max_width: usize) -> Result<Comparison, Depth2Error> {
        let formula = self.distribution();
        let sim = self.simulate(max_width)?;
        let max_abs = formula
            .probabilities()
            .iter()
            .zip(sim.probabilities())
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        Ok(Comparison {
            max_abs_deviation: max_abs,
            total_variation: formula.total_variation(&sim),
            prob_zero: formula.prob(0),
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Comparison {
    pub max_abs_deviation: f64,
    pub total_variation: f64,
    pub prob_zero: f64,
}

/// Unnormalised in-place Walsh–Hadamard transform.
fn fwht(v: &mut [f64]) {
    let mut half = 1;
    while half < v.len() {
        for block in v.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                (*x, *y) = (*x + *y, *x - *y);
            }
        }
        half *= 2;
    }
}
