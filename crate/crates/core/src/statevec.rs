//! Dense state-vector simulation.
//!
//! Toffoli and permutation gates are pure index moves, so they are exact. The
//! global Hadamard is an in-place Walsh–Hadamard transform applied one wire at
//! a time in order `0..n`, which fixes the floating-point summation order.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{
    Circuit, CircuitError, Gate, InputSpec, PermutationGate, Readout, Toffoli, WireInit,
};

pub const DEFAULT_MAX_WIDTH: usize = 24;

/// Below this many amplitudes the kernels stay single-threaded.
const PARALLEL_THRESHOLD: usize = 1 << 14;

/// Probabilities at or below this are omitted from tabular output.
pub const OUTPUT_CUTOFF: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("width {width} exceeds the configured maximum of {max}")]
    TooWide { width: usize, max: usize },
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("shots must be positive")]
    ZeroShots,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Product state for `input` on `n` wires. `+`/`−` wires are written
    /// directly as `±1/√2` amplitudes.
    pub fn init(n: usize, input: &InputSpec, max_width: usize) -> Result<Self, SimError> {
        if n > max_width {
            return Err(SimError::TooWide {
                width: n,
                max: max_width,
            });
        }
        let wires = input.wires(n);
        if wires.len() != n {
            return Err(SimError::WidthMismatch(wires.len(), n));
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for w in wires {
            let (a0, a1) = match w {
                WireInit::Zero => (1.0, 0.0),
                WireInit::One => (0.0, 1.0),
                WireInit::Plus => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
                WireInit::Minus => (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
            };
            let mut next = Vec::with_capacity(amps.len() * 2);
            next.extend(amps.iter().map(|a| a * a0));
            next.extend(amps.iter().map(|a| a * a1));
            amps = next;
        }
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, label: usize) -> Self {
        assert!(label < 1 << n, "label {label} does not fit in {n} wires");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[label] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    /// Wraps raw amplitudes without normalising them.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(
            amps.len().is_power_of_two(),
            "length must be a power of two"
        );
        let n = amps.len().trailing_zeros() as usize;
        Self { n, amps }
    }

    /// Haar-ish random state: i.i.d. Gaussian real and imaginary parts, normalised.
    pub fn random(n: usize, seed: u64) -> Self {
        use rand_distr::StandardNormal;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..1usize << n)
            .map(|_| {
                let re: f64 = rand::Rng::sample(&mut rng, StandardNormal);
                let im: f64 = rand::Rng::sample(&mut rng, StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let mut s = Self { n, amps };
        s.normalize().expect("gaussian sample is nonzero");
        s
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, label: usize) -> Complex64 {
        self.amps[label]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<(), SimError> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(SimError::ZeroNorm);
        }
        self.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64, SimError> {
        if self.n != other.n {
            return Err(SimError::WidthMismatch(self.n, other.n));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self ⊗ high`: `self` occupies the low wires.
    pub fn tensor(&self, high: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * high.amps.len());
        for h in &high.amps {
            amps.extend(self.amps.iter().map(|l| l * h));
        }
        StateVector {
            n: self.n + high.n,
            amps,
        }
    }

    pub fn apply_toffoli(&mut self, gate: &Toffoli) {
        let cmask = mask(&gate.controls);
        let tmask = mask(&gate.targets);
        let low = tmask & tmask.wrapping_neg();
        for z in 0..self.amps.len() {
            if z & cmask == cmask && z & low == 0 {
                self.amps.swap(z, z ^ tmask);
            }
        }
    }

    pub fn apply_global_hadamard(&mut self) {
        for wire in 0..self.n {
            self.butterfly(wire);
        }
    }

    /// Hadamard on one wire. Not a gate of the circuit model; used as a
    /// reference when checking constructions.
    pub fn apply_single_hadamard(&mut self, wire: usize) {
        assert!(wire < self.n);
        self.butterfly(wire);
    }

    fn butterfly(&mut self, wire: usize) {
        let half = 1usize << wire;
        let kernel = |block: &mut [Complex64]| {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * FRAC_1_SQRT_2;
                *b = (x - y) * FRAC_1_SQRT_2;
            }
        };
        if self.amps.len() < PARALLEL_THRESHOLD {
            self.amps.chunks_mut(2 * half).for_each(kernel);
        } else if 2 * half <= self.amps.len() / 64 {
            self.amps.par_chunks_mut(2 * half).for_each(kernel);
        } else {
            for block in self.amps.chunks_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                lo.par_iter_mut().zip(hi.par_iter_mut()).for_each(|(a, b)| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * FRAC_1_SQRT_2;
                    *b = (x - y) * FRAC_1_SQRT_2;
                });
            }
        }
    }

    /// `out[π(z)] = in[z]` on the gate's register whenever all controls are set.
    pub fn apply_permutation(&mut self, gate: &PermutationGate) {
        let cmask = mask(&gate.controls);
        let perm = &gate.perm;
        let contiguous = gate.register.iter().copied().eq(0..gate.register.len());
        let src = |z: usize| -> usize {
            if z & cmask != cmask {
                return z;
            }
            if contiguous {
                let rmask = (1usize << gate.register.len()) - 1;
                (z & !rmask) | perm.apply_inverse(z & rmask)
            } else {
                let r = gather(z, &gate.register);
                scatter(z, &gate.register, perm.apply_inverse(r))
            }
        };
        let old = std::mem::take(&mut self.amps);
        self.amps = if old.len() < PARALLEL_THRESHOLD {
            (0..old.len()).map(|z| old[src(z)]).collect()
        } else {
            (0..old.len())
                .into_par_iter()
                .map(|z| old[src(z)])
                .collect()
        };
    }

    /// Multiplies each amplitude by `±1` according to `negate(label)`.
    pub fn apply_sign(&mut self, negate: impl Fn(usize) -> bool + Sync) {
        self.amps.par_iter_mut().enumerate().for_each(|(z, a)| {
            if negate(z) {
                *a = -*a;
            }
        });
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match gate {
            Gate::Toffoli(t) => self.apply_toffoli(t),
            Gate::GlobalHadamard => self.apply_global_hadamard(),
            Gate::Permutation(p) => self.apply_permutation(p),
        }
    }

    /// Applies the circuit's gates in order; the readout basis change is not
    /// applied.
    pub fn run_gates(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.width != self.n {
            return Err(SimError::WidthMismatch(circuit.width, self.n));
        }
        circuit.check()?;
        for gate in &circuit.gates {
            self.apply_gate(gate);
        }
        Ok(())
    }

    /// Applies the gates and then rotates into the readout basis, so the
    /// result's computational-basis distribution is the measured one.
    pub fn run(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        self.run_gates(circuit)?;
        if circuit.readout == Readout::X {
            self.apply_global_hadamard();
        }
        Ok(())
    }

    pub fn distribution(&self) -> Distribution {
        Distribution {
            n: self.n,
            probs: self.amps.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    pub fn sample(&self, shots: usize, seed: u64) -> Result<Counts, SimError> {
        self.distribution().sample(shots, seed)
    }
}

/// Initialises `circuit.input`, runs the circuit and returns the state in the
/// readout basis.
pub fn simulate(circuit: &Circuit, max_width: usize) -> Result<StateVector, SimError> {
    let mut s = StateVector::init(circuit.width, &circuit.input, max_width)?;
    s.run(circuit)?;
    Ok(s)
}

fn mask(wires: &[usize]) -> usize {
    wires.iter().fold(0, |m, &w| m | 1 << w)
}

/// Bits of `z` at `wires`, packed with `wires[i]` as bit `i`.
#[inline]
pub fn gather(z: usize, wires: &[usize]) -> usize {
    wires
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &w)| acc | ((z >> w) & 1) << i)
}

/// `z` with the bits at `wires` replaced by `value`.
#[inline]
pub fn scatter(z: usize, wires: &[usize], value: usize) -> usize {
    wires.iter().enumerate().fold(z, |acc, (i, &w)| {
        (acc & !(1 << w)) | ((value >> i) & 1) << w
    })
}

/// Bitstring with wire 0 first.
pub fn label_string(label: usize, n: usize) -> String {
    (0..n)
        .map(|i| if (label >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n: usize,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(n: usize, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), 1 << n);
        Self { n, probs }
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, label: usize) -> f64 {
        self.probs[label]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Distribution of the bits at `wires` (wire `wires[i]` becomes bit `i`).
    pub fn marginal(&self, wires: &[usize]) -> Distribution {
        let mut probs = vec![0.0; 1 << wires.len()];
        for (z, p) in self.probs.iter().enumerate() {
            probs[gather(z, wires)] += p;
        }
        Distribution {
            n: wires.len(),
            probs,
        }
    }

    pub fn total_variation(&self, other: &Distribution) -> f64 {
        assert_eq!(self.n, other.n);
        0.5 * self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    pub fn sample(&self, shots: usize, seed: u64) -> Result<Counts, SimError> {
        if shots == 0 {
            return Err(SimError::ZeroShots);
        }
        let index = WeightedIndex::new(&self.probs).map_err(|_| SimError::ZeroNorm)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(index.sample(&mut rng)).or_insert(0) += 1;
        }
        Ok(Counts { n: self.n, counts })
    }

    /// `label,probability` rows for every probability above [`OUTPUT_CUTOFF`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,probability\n");
        for (z, p) in self.probs.iter().enumerate() {
            if *p > OUTPUT_CUTOFF {
                out.push_str(&format!("{},{:.15}\n", label_string(z, self.n), p));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, f64> = self
            .probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > OUTPUT_CUTOFF)
            .map(|(z, p)| (label_string(z, self.n), *p))
            .collect();
        serde_json::json!({ "width": self.n, "probabilities": map })
    }
}

/// Measurement counts keyed by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub n: usize,
    pub counts: BTreeMap<usize, usize>,
}

impl Counts {
    pub fn get(&self, label: usize) -> usize {
        self.counts.get(&label).copied().unwrap_or(0)
    }

    pub fn shots(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,count\n");
        for (z, c) in &self.counts {
            out.push_str(&format!("{},{c}\n", label_string(*z, self.n)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, usize> = self
            .counts
            .iter()
            .map(|(z, c)| (label_string(*z, self.n), *c))
            .collect();
        serde_json::json!({ "width": self.n, "counts": map })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::Permutation;
    use std::sync::Arc;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn init_product_states() {
        let s = StateVector::init(2, &InputSpec::parse("00").unwrap(), 24).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let s = StateVector::init(1, &InputSpec::parse("-").unwrap(), 24).unwrap();
        assert!((s.amplitude(0) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.amplitude(1) + c(FRAC_1_SQRT_2)).norm() < 1e-15);
        let s = StateVector::init(2, &InputSpec::parse("+-").unwrap(), 24).unwrap();
        // kets listed as |w0 w1⟩ in lexicographic order
        for (ket, want) in [("00", 0.5), ("01", -0.5), ("10", 0.5), ("11", -0.5)] {
            let z = (0..4).find(|&z| label_string(z, 2) == ket).unwrap();
            assert!((s.amplitude(z) - c(want)).norm() < 1e-15);
        }
        assert!(matches!(
            StateVector::init(25, &InputSpec::Basis(0), 24),
            Err(SimError::TooWide { .. })
        ));
    }

    #[test]
    fn toffoli_truth_table() {
        let mut s = StateVector::basis(2, 0b01);
        s.apply_toffoli(&Toffoli::cnot(0, 1));
        assert_eq!(s, StateVector::basis(2, 0b11));
        let mut s = StateVector::basis(3, 0b011);
        s.apply_toffoli(&Toffoli::new(vec![0, 1], vec![2]));
        assert_eq!(s, StateVector::basis(3, 0b111));
        let mut r = StateVector::random(5, 1);
        let orig = r.clone();
        let t = Toffoli::new(vec![1, 3], vec![0, 4]);
        r.apply_toffoli(&t);
        r.apply_toffoli(&t);
        assert_eq!(r, orig);
    }

    #[test]
    fn hadamard_basics() {
        let mut s = StateVector::basis(3, 0);
        s.apply_global_hadamard();
        for p in s.distribution().probabilities() {
            assert!((p - 0.125).abs() < 1e-15);
        }
        let mut s = StateVector::basis(1, 1);
        s.apply_global_hadamard();
        assert!((s.amplitude(1) + c(FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn permutation_moves_labels() {
        let g = PermutationGate {
            perm: Arc::new(Permutation::modmul(4, 2, 15).unwrap()),
            controls: vec![],
            register: vec![0, 1, 2, 3],
            oracle: false,
        };
        let mut s = StateVector::basis(4, 7);
        s.apply_permutation(&g);
        assert_eq!(s, StateVector::basis(4, 14));
    }

    #[test]
    fn permutation_on_scattered_register_with_control() {
        let perm = Arc::new(Permutation::xor_const(2, 0b11).unwrap());
        let g = PermutationGate {
            perm,
            controls: vec![1],
            register: vec![3, 0],
            oracle: false,
        };
        let mut s = StateVector::basis(4, 0b0010);
        s.apply_permutation(&g);
        assert_eq!(s, StateVector::basis(4, 0b1011));
        let mut s = StateVector::basis(4, 0b0000);
        s.apply_permutation(&g);
        assert_eq!(s, StateVector::basis(4, 0));
    }

    #[test]
    fn sampling_is_seeded() {
        let mut s = StateVector::basis(3, 0);
        s.apply_global_hadamard();
        let a = s.sample(1000, 7).unwrap();
        let b = s.sample(1000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.shots(), 1000);
        assert!(matches!(s.sample(0, 7), Err(SimError::ZeroShots)));
    }

    #[test]
    fn gather_scatter_roundtrip() {
        let wires = [4, 1, 2];
        for z in 0..32 {
            let v = gather(z, &wires);
            assert_eq!(scatter(z, &wires, v), z);
        }
        assert_eq!(label_string(0b011, 4), "1100");
    }
}
