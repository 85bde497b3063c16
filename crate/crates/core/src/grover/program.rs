//! Exact evaluation of a schedule on the search register alone.
//!
//! The `|1−⟩` ancilla only turns oracle calls into sign flips, so a phase
//! `T_{t,k}·G_x·…·G_x·T_{t,0}` acts on the search register as a sign flip on
//! the labels whose path parity is odd followed by the total permutation
//! `τ_t = T_{t,k}∘…∘T_{t,0}`. The odd labels are tabulated once per phase
//! for every `x`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::gf2n::Gf2n;
use super::{GroverError, GroverSchedule, OracleSpec, Policy};
use crate::circuit::Readout;
use crate::permutation::Permutation;
use crate::statevec::{StateVector, DEFAULT_MAX_WIDTH};

/// What separates consecutive phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// One `H^∞`.
    Hadamard,
    /// `H^∞ · D₀ · H^∞`, where `D₀` negates `|0…0⟩`.
    Diffusion,
}

#[derive(Debug, Clone)]
enum PhaseMaps {
    Identity,
    /// `steps[j] = T_j`; `cumulative[j − 1] = T_{j−1}∘…∘T_0`.
    Tables {
        steps: Vec<Arc<Permutation>>,
        cumulative: Vec<Vec<u32>>,
    },
    /// `π_j(z) = L(c_j · z⁻¹)` with `L` the trace-coordinate map.
    Parity {
        field: Arc<Gf2n>,
        coords: Arc<Vec<u32>>,
        consts: Vec<u32>,
    },
}

#[derive(Debug, Clone)]
pub struct Phase {
    k: usize,
    bits: usize,
    maps: PhaseMaps,
    total: Option<Vec<u32>>,
    offsets: Vec<usize>,
    flipped: Vec<u32>,
}

impl Phase {
    fn new(spec: &OracleSpec, k: usize, maps: PhaseMaps) -> Self {
        let bits = spec.width();
        let size = 1usize << bits;
        let total = match &maps {
            PhaseMaps::Identity | PhaseMaps::Parity { .. } => None,
            PhaseMaps::Tables { steps, cumulative } => {
                let last = &steps[k];
                let table: Vec<u32> = cumulative[k - 1]
                    .iter()
                    .map(|&z| last.apply(z as usize) as u32)
                    .collect();
                (!table.iter().enumerate().all(|(z, &y)| z == y as usize)).then_some(table)
            }
        };
        let mut phase = Self {
            k,
            bits,
            maps,
            total,
            offsets: Vec::new(),
            flipped: Vec::new(),
        };
        let odd: Vec<Vec<u32>> = (0..size)
            .into_par_iter()
            .map(|z| {
                let mut xs: Vec<usize> = (0..k).map(|j| spec.eval(phase.hit(j, z))).collect();
                xs.sort_unstable();
                let mut out = Vec::new();
                let mut i = 0;
                while i < xs.len() {
                    let run = xs[i..].iter().take_while(|&&x| x == xs[i]).count();
                    if run % 2 == 1 {
                        out.push(xs[i] as u32);
                    }
                    i += run;
                }
                out
            })
            .collect();
        let range = spec.range_size();
        let mut offsets = vec![0usize; range + 1];
        for xs in &odd {
            for &x in xs {
                offsets[x as usize + 1] += 1;
            }
        }
        for x in 0..range {
            offsets[x + 1] += offsets[x];
        }
        let mut cursor = offsets.clone();
        let mut flipped = vec![0u32; offsets[range]];
        for (z, xs) in odd.iter().enumerate() {
            for &x in xs {
                flipped[cursor[x as usize]] = z as u32;
                cursor[x as usize] += 1;
            }
        }
        phase.offsets = offsets;
        phase.flipped = flipped;
        phase
    }

    /// Label fed to the `(j + 1)`-th oracle call of the phase when the phase
    /// starts on `z`.
    #[inline]
    fn hit(&self, j: usize, z: usize) -> usize {
        match &self.maps {
            PhaseMaps::Identity => z,
            PhaseMaps::Tables { cumulative, .. } => cumulative[j][z] as usize,
            PhaseMaps::Parity {
                field,
                coords,
                consts,
            } => coords[field.mul(consts[j], field.inv(z as u32)) as usize] as usize,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Labels with odd path parity for hidden datum `x`, ascending.
    pub fn flipped(&self, x: usize) -> &[u32] {
        &self.flipped[self.offsets[x]..self.offsets[x + 1]]
    }

    /// `τ = T_k∘…∘T_0`, or `None` when it is the identity.
    pub fn total(&self) -> Option<&[u32]> {
        self.total.as_deref()
    }

    /// The interleaved permutations `T_0, …, T_k`.
    pub fn steps(&self) -> Vec<Arc<Permutation>> {
        match &self.maps {
            PhaseMaps::Identity => {
                let id = Arc::new(Permutation::identity(self.bits));
                vec![id; self.k + 1]
            }
            PhaseMaps::Tables { steps, .. } => steps.clone(),
            PhaseMaps::Parity {
                field,
                coords,
                consts,
            } => {
                let sigma: Vec<Permutation> = consts
                    .iter()
                    .map(|&c| {
                        Permutation::from_fn(format!("TRACE {c}"), self.bits, |z| {
                            coords[field.mul(c, field.inv(z as u32)) as usize] as usize
                        })
                        .expect("trace map of an inverse is a bijection")
                    })
                    .collect();
                let mut steps = Vec::with_capacity(self.k + 1);
                steps.push(Arc::new(sigma[0].clone()));
                for j in 1..self.k {
                    steps.push(Arc::new(
                        sigma[j].compose_after(&sigma[j - 1].inverse_permutation()),
                    ));
                }
                steps.push(Arc::new(sigma[self.k - 1].inverse_permutation()));
                steps
            }
        }
    }

    /// `P_{x,t}` followed by `τ_t`.
    pub fn apply(&self, x: usize, amps: &mut Vec<Complex64>) {
        for &z in self.flipped(x) {
            amps[z as usize] = -amps[z as usize];
        }
        if let Some(tau) = &self.total {
            let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
            for (z, &y) in tau.iter().enumerate() {
                out[y as usize] = amps[z];
            }
            *amps = out;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub per_x: Vec<f64>,
    pub average: f64,
    pub min: f64,
    pub max: f64,
}

impl Evaluation {
    fn new(per_x: Vec<f64>) -> Self {
        let average = per_x.iter().sum::<f64>() / per_x.len() as f64;
        let min = per_x.iter().copied().fold(f64::INFINITY, f64::min);
        let max = per_x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            per_x,
            average,
            min,
            max,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhaseProgram {
    spec: OracleSpec,
    schedule: GroverSchedule,
    phases: Vec<Phase>,
    boundary: Boundary,
    readout: Readout,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the random permutation `T_{t,j}` (`t` counted from 1).
pub fn step_seed(seed: u64, t: usize, j: usize) -> u64 {
    splitmix64(seed ^ splitmix64(((t as u64) << 32) | j as u64))
}

impl PhaseProgram {
    pub fn new(spec: &OracleSpec, schedule: &GroverSchedule) -> Result<Self, GroverError> {
        let n = spec.width();
        if n > DEFAULT_MAX_WIDTH {
            return Err(GroverError::TooWide(n, DEFAULT_MAX_WIDTH));
        }
        let unsupported = |reason: &str| GroverError::Unsupported {
            policy: schedule.policy,
            reason: reason.to_string(),
        };
        let mut phases = Vec::with_capacity(schedule.phases());
        match schedule.policy {
            Policy::Diffusion | Policy::Identity => {
                for &k in &schedule.k {
                    phases.push(Phase::new(spec, k, PhaseMaps::Identity));
                }
            }
            Policy::Random => {
                for (t, &k) in schedule.k.iter().enumerate() {
                    let steps = (0..=k)
                        .map(|j| {
                            Permutation::random(n, step_seed(schedule.seed, t + 1, j)).map(Arc::new)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let mut cumulative: Vec<Vec<u32>> = Vec::with_capacity(k);
                    cumulative.push(steps[0].forward_table().to_vec());
                    for step in &steps[1..k] {
                        let prev = cumulative.last().expect("nonempty");
                        cumulative.push(
                            prev.iter()
                                .map(|&z| step.apply(z as usize) as u32)
                                .collect(),
                        );
                    }
                    phases.push(Phase::new(spec, k, PhaseMaps::Tables { steps, cumulative }));
                }
            }
            Policy::Parity => {
                if schedule.phases() != 1 {
                    return Err(unsupported("exactly one phase is required"));
                }
                if spec.range_bits() != Some(n) {
                    return Err(unsupported("the oracle must check every search wire"));
                }
                let k = schedule.k[0];
                let field = Arc::new(Gf2n::new(n as u32));
                let consts: Vec<u32> = field.trace_one_elements().into_iter().take(k).collect();
                if consts.len() < k {
                    return Err(unsupported(&format!(
                        "at most {} calls fit in one phase",
                        consts.len()
                    )));
                }
                let coords = Arc::new((0..1u32 << n).map(|w| field.trace_coordinates(w)).collect());
                phases.push(Phase::new(
                    spec,
                    k,
                    PhaseMaps::Parity {
                        field,
                        coords,
                        consts,
                    },
                ));
            }
        }
        let (boundary, readout) = match schedule.policy {
            Policy::Diffusion => (Boundary::Diffusion, Readout::Z),
            _ => (Boundary::Hadamard, Readout::X),
        };
        Ok(Self {
            spec: spec.clone(),
            schedule: schedule.clone(),
            phases,
            boundary,
            readout,
        })
    }

    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }

    pub fn schedule(&self) -> &GroverSchedule {
        &self.schedule
    }

    pub fn width(&self) -> usize {
        self.spec.width()
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn readout(&self) -> Readout {
        self.readout
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    /// Phase `t`, counted from 1.
    pub fn phase(&self, t: usize) -> Result<&Phase, GroverError> {
        if t == 0 || t > self.phases.len() {
            return Err(GroverError::PhaseIndex {
                t,
                phases: self.phases.len(),
            });
        }
        Ok(&self.phases[t - 1])
    }

    /// `path_{x,t}(z)`: parity of the number of oracle calls in phase `t`
    /// that see a preimage of `x` when the phase starts on `z`.
    pub fn path_parity(&self, t: usize, x: usize, z: usize) -> Result<bool, GroverError> {
        self.spec.check_hidden(x)?;
        Ok(self.phase(t)?.flipped(x).binary_search(&(z as u32)).is_ok())
    }

    /// `W_{x,t}`: mass of `state` on labels with odd path parity.
    pub fn w_diagnostic(
        &self,
        t: usize,
        x: usize,
        state: &[Complex64],
    ) -> Result<f64, GroverError> {
        self.spec.check_hidden(x)?;
        Ok(self
            .phase(t)?
            .flipped(x)
            .iter()
            .map(|&z| state[z as usize].norm_sqr())
            .sum())
    }

    pub fn apply_boundary(&self, amps: &mut Vec<Complex64>) {
        hadamard(amps);
        if self.boundary == Boundary::Diffusion {
            amps[0] = -amps[0];
            hadamard(amps);
        }
    }

    /// State of the search register in the readout basis.
    pub fn final_state(&self, x: usize, initial: &[Complex64]) -> Vec<Complex64> {
        let mut amps = initial.to_vec();
        for (t, phase) in self.phases.iter().enumerate() {
            phase.apply(x, &mut amps);
            if t + 1 < self.phases.len() {
                self.apply_boundary(&mut amps);
            }
        }
        if self.readout == Readout::X {
            hadamard(&mut amps);
        }
        amps
    }

    pub fn success(&self, x: usize, initial: &[Complex64]) -> f64 {
        let amps = self.final_state(x, initial);
        self.marked_mass(x, &amps)
    }

    /// `Σ_{f(z) = x} |amps[z]|²`.
    pub fn marked_mass(&self, x: usize, amps: &[Complex64]) -> f64 {
        match self.spec.range_bits() {
            Some(_) => amps
                .iter()
                .skip(x)
                .step_by(self.spec.range_size())
                .map(|a| a.norm_sqr())
                .sum(),
            None => amps
                .iter()
                .enumerate()
                .filter(|(z, _)| self.spec.eval(*z) == x)
                .map(|(_, a)| a.norm_sqr())
                .sum(),
        }
    }

    /// Success for every `x` from the uniform superposition.
    pub fn evaluate(&self) -> Evaluation {
        let size = 1usize << self.width();
        let uniform = vec![Complex64::new((size as f64).sqrt().recip(), 0.0); size];
        self.evaluate_amplitudes(&uniform)
    }

    pub fn evaluate_from(&self, initial: &StateVector) -> Result<Evaluation, GroverError> {
        if initial.width() != self.width() {
            return Err(
                crate::statevec::SimError::WidthMismatch(initial.width(), self.width()).into(),
            );
        }
        Ok(self.evaluate_amplitudes(initial.amplitudes()))
    }

    fn evaluate_amplitudes(&self, initial: &[Complex64]) -> Evaluation {
        let per_x = (0..self.spec.range_size())
            .into_par_iter()
            .map(|x| self.success(x, initial))
            .collect();
        Evaluation::new(per_x)
    }
}

pub(crate) fn hadamard(amps: &mut Vec<Complex64>) {
    let mut s = StateVector::from_amplitudes(std::mem::take(amps));
    s.apply_global_hadamard();
    *amps = s.into_amplitudes();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity_by_walking(program: &PhaseProgram, t: usize, x: usize, z: usize) -> bool {
        let steps = program.phase(t).unwrap().steps();
        let mut label = z;
        let mut odd = false;
        for step in &steps[..steps.len() - 1] {
            label = step.apply(label);
            odd ^= program.spec().eval(label) == x;
        }
        odd
    }

    #[test]
    fn single_call_parity_is_preimage_of_first_step() {
        let spec = OracleSpec::first_bits(5, 3).unwrap();
        let schedule = GroverSchedule::new(vec![1, 1], Policy::Random, 4).unwrap();
        let program = PhaseProgram::new(&spec, &schedule).unwrap();
        let t0 = program.phase(2).unwrap().steps()[0].clone();
        for x in 0..8 {
            for z in 0..32 {
                assert_eq!(
                    program.path_parity(2, x, z).unwrap(),
                    spec.eval(t0.apply(z)) == x
                );
            }
        }
    }

    #[test]
    fn tabulated_parity_matches_walk() {
        let spec = OracleSpec::first_bits(5, 3).unwrap();
        for (policy, k) in [(Policy::Random, vec![3, 4]), (Policy::Identity, vec![2, 3])] {
            let program =
                PhaseProgram::new(&spec, &GroverSchedule::new(k.clone(), policy, 9).unwrap())
                    .unwrap();
            for t in 1..=k.len() {
                for x in 0..8 {
                    for z in 0..32 {
                        assert_eq!(
                            program.path_parity(t, x, z).unwrap(),
                            parity_by_walking(&program, t, x, z)
                        );
                    }
                }
            }
        }
        let spec = OracleSpec::standard(4).unwrap();
        let program = PhaseProgram::new(
            &spec,
            &GroverSchedule::new(vec![5], Policy::Parity, 0).unwrap(),
        )
        .unwrap();
        for x in 0..16 {
            for z in 0..16 {
                assert_eq!(
                    program.path_parity(1, x, z).unwrap(),
                    parity_by_walking(&program, 1, x, z)
                );
            }
        }
    }

    #[test]
    fn parity_steps_compose_to_identity() {
        let spec = OracleSpec::standard(5).unwrap();
        let program = PhaseProgram::new(
            &spec,
            &GroverSchedule::new(vec![6], Policy::Parity, 0).unwrap(),
        )
        .unwrap();
        let steps = program.phase(1).unwrap().steps();
        let total = steps[1..]
            .iter()
            .fold((*steps[0]).clone(), |acc, s| s.compose_after(&acc));
        assert!(total.is_identity());
    }

    #[test]
    fn parity_success_closed_form() {
        let n = 6;
        let size = 64.0;
        let spec = OracleSpec::standard(n).unwrap();
        for k in [1, 5, 16, 32] {
            let program = PhaseProgram::new(
                &spec,
                &GroverSchedule::new(vec![k], Policy::Parity, 0).unwrap(),
            )
            .unwrap();
            let eval = program.evaluate();
            let want = (2.0 * k as f64 / size).powi(2);
            for x in 1..64 {
                assert!((eval.per_x[x] - want).abs() < 1e-12, "k={k} x={x}");
            }
        }
        assert!(PhaseProgram::new(
            &spec,
            &GroverSchedule::new(vec![33], Policy::Parity, 0).unwrap()
        )
        .is_err());
        assert!(PhaseProgram::new(
            &spec,
            &GroverSchedule::new(vec![1, 1], Policy::Parity, 0).unwrap()
        )
        .is_err());
    }

    #[test]
    fn single_phase_single_call() {
        // One flip on |+⟩ read in the Hadamard basis: amplitude at x is
        // −(2/N)(−1)^{x·x} for x ≠ 0 and 1 − 2/N at 0.
        let spec = OracleSpec::standard(4).unwrap();
        let program = PhaseProgram::new(
            &spec,
            &GroverSchedule::new(vec![1], Policy::Identity, 0).unwrap(),
        )
        .unwrap();
        let eval = program.evaluate();
        assert!((eval.per_x[0] - (1.0 - 2.0 / 16.0f64).powi(2)).abs() < 1e-14);
        for x in 1..16 {
            assert!((eval.per_x[x] - (2.0 / 16.0f64).powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn textbook_grover_four_items() {
        let spec = OracleSpec::standard(2).unwrap();
        let program = PhaseProgram::new(&spec, &GroverSchedule::standard(1)).unwrap();
        for p in program.evaluate().per_x {
            assert!((p - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_indices() {
        let spec = OracleSpec::standard(3).unwrap();
        let program = PhaseProgram::new(&spec, &GroverSchedule::standard(1)).unwrap();
        assert!(matches!(
            program.path_parity(0, 0, 0),
            Err(GroverError::PhaseIndex { .. })
        ));
        assert!(matches!(
            program.path_parity(3, 0, 0),
            Err(GroverError::PhaseIndex { .. })
        ));
        assert!(matches!(
            program.path_parity(1, 8, 0),
            Err(GroverError::HiddenOutOfRange { .. })
        ));
    }
}
