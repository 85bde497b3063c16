//! Order finding by phase kickback, and a factoring driver on top of it.
//!
//! Layout of the order-finding circuit: input wires `0..a·b` start in `|+⟩`,
//! block `j` occupies wires `j·b..(j+1)·b`, and each of its wires controls one
//! application of `U^{c_j}` (multiplication by `g^{c_j} mod M`) on the ancilla
//! register `a·b..a·b+m`. A trailing `H^∞` moves the kicked-back phases into
//! the computational basis.
//!
//! Two backends produce the same outcome distribution. `Dense` simulates the
//! circuit. `Eigenbasis` uses the decomposition of a basis ancilla `|y⟩` into
//! eigenvectors of `U` on the cycle through `y`: every eigenvector is equally
//! likely and yields independent wires reading 1 with probability
//! `sin²(π k c_j / L)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{bits_for, gcd, is_prime, mod_pow, multiplicative_order, prime_power_base};
use crate::circuit::{Circuit, Gate, InputSpec, WireInit};
use crate::eigenest::{self, binomial, CjSchedule, Sample, SampleSet};
use crate::permutation::{Permutation, PermutationError};
use crate::statevec::{Distribution, SimError, StateVector};

/// Circuits up to this width run densely under [`Backend::Auto`].
pub const AUTO_DENSE_WIDTH: usize = 16;

#[derive(Debug, Error)]
pub enum OrderError {
    #[error("generator {g} is not a unit modulo {modulus}")]
    NotUnit { g: u64, modulus: u64 },
    #[error("generator must satisfy 1 < g < M (got g = {g}, M = {modulus})")]
    GeneratorRange { g: u64, modulus: u64 },
    #[error("eigenvector index {k} out of range for order {r}")]
    EigenIndex { k: u64, r: u64 },
    #[error("circuit needs {width} wires, above the limit of {max}")]
    TooWide { width: usize, max: usize },
    #[error("plan needs at least one power and one wire per power")]
    EmptyPlan,
    #[error("ancilla label {0} does not fit in the register")]
    AncillaLabel(u64),
    #[error(transparent)]
    Permutation(#[from] PermutationError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    pub modulus: u64,
    pub generator: u64,
    /// Ancilla register width `⌈log₂ M⌉`.
    pub bits: usize,
}

impl GroupSpec {
    pub fn new(modulus: u64, generator: u64) -> Result<Self, OrderError> {
        if generator <= 1 || generator >= modulus {
            return Err(OrderError::GeneratorRange {
                g: generator,
                modulus,
            });
        }
        if gcd(generator, modulus) != 1 {
            return Err(OrderError::NotUnit {
                g: generator,
                modulus,
            });
        }
        Ok(Self {
            modulus,
            generator,
            bits: bits_for(modulus),
        })
    }

    /// Classical order of `g`; the experiment never consults it.
    pub fn order(&self) -> u64 {
        multiplicative_order(self.generator, self.modulus).expect("generator is a unit")
    }

    pub fn modmul_permutation(&self, power: u64) -> Result<Permutation, OrderError> {
        Ok(Permutation::modmul_power(
            self.bits,
            self.generator,
            self.modulus,
            power,
        )?)
    }

    fn is_group_label(&self, y: u64) -> bool {
        y >= 1 && y < self.modulus && gcd(y, self.modulus) == 1
    }

    /// Length of the cycle of `U` through label `y`.
    pub fn cycle_length(&self, y: u64) -> u64 {
        if self.is_group_label(y) {
            self.order()
        } else {
            1
        }
    }

    /// `r^{−1/2} Σ_j ω^{−j} |g^j mod M⟩` with `ω = e^{2πik/r}`.
    pub fn eigenvector(&self, k: u64) -> Result<StateVector, OrderError> {
        let r = self.order();
        if k >= r {
            return Err(OrderError::EigenIndex { k, r });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.bits];
        let norm = (r as f64).sqrt().recip();
        for j in 0..r {
            let label = mod_pow(self.generator, j, self.modulus) as usize;
            let angle = -2.0 * PI * ((k * j) % r) as f64 / r as f64;
            amps[label] = Complex64::from_polar(norm, angle);
        }
        Ok(StateVector::from_amplitudes(amps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AncillaMode {
    /// Computational basis label.
    Label(u64),
    /// A uniformly random label drawn afresh for each trial.
    Mixed,
    /// Eigenvector `k` of `U` (simulation-only preparation).
    Eigenvector(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderFindingPlan {
    pub b: usize,
    pub c_js: Vec<u64>,
    pub ancilla: AncillaMode,
}

impl OrderFindingPlan {
    pub fn new(b: usize, c_js: Vec<u64>, ancilla: AncillaMode) -> Self {
        Self { b, c_js, ancilla }
    }

    pub fn from_schedule(schedule: &CjSchedule, ancilla: AncillaMode) -> Self {
        Self::new(schedule.b, schedule.c_js.clone(), ancilla)
    }

    pub fn a(&self) -> usize {
        self.c_js.len()
    }

    pub fn input_width(&self) -> usize {
        self.a() * self.b
    }

    pub fn total_width(&self, spec: &GroupSpec) -> usize {
        self.input_width() + spec.bits
    }

    fn check(&self, spec: &GroupSpec) -> Result<(), OrderError> {
        if self.b == 0 || self.c_js.is_empty() || self.c_js.contains(&0) {
            return Err(OrderError::EmptyPlan);
        }
        if let AncillaMode::Label(y) = self.ancilla {
            if y >> spec.bits != 0 {
                return Err(OrderError::AncillaLabel(y));
            }
        }
        Ok(())
    }
}

/// The order-finding circuit. Its ancilla input is the plan's label, or `|1⟩`
/// for the other modes, which the runners prepare themselves.
pub fn build_order_finding_circuit(
    spec: &GroupSpec,
    plan: &OrderFindingPlan,
    max_width: usize,
) -> Result<Circuit, OrderError> {
    plan.check(spec)?;
    let width = plan.total_width(spec);
    if width > max_width {
        return Err(OrderError::TooWide {
            width,
            max: max_width,
        });
    }
    let ab = plan.input_width();
    let label = match plan.ancilla {
        AncillaMode::Label(y) => y,
        _ => 1,
    };
    let mut wires = vec![WireInit::Plus; ab];
    wires.extend((0..spec.bits).map(|i| {
        if (label >> i) & 1 == 1 {
            WireInit::One
        } else {
            WireInit::Zero
        }
    }));
    let mut circuit = Circuit::new(width).with_input(InputSpec::Wires(wires));
    let register: Vec<usize> = (ab..width).collect();
    for (j, &c) in plan.c_js.iter().enumerate() {
        let perm = Arc::new(spec.modmul_permutation(c)?);
        for w in 0..plan.b {
            circuit.push(Gate::permutation_on(
                perm.clone(),
                vec![j * plan.b + w],
                register.clone(),
            ));
        }
    }
    circuit.push(Gate::GlobalHadamard);
    Ok(circuit)
}

fn dense_input_distribution(
    spec: &GroupSpec,
    plan: &OrderFindingPlan,
    ancilla: &StateVector,
    max_width: usize,
) -> Result<Distribution, OrderError> {
    let circuit = build_order_finding_circuit(spec, plan, max_width)?;
    let ab = plan.input_width();
    let inputs = StateVector::init(ab, &InputSpec::Wires(vec![WireInit::Plus; ab]), max_width)?;
    let mut state = inputs.tensor(ancilla);
    state.run(&circuit)?;
    Ok(state.distribution().marginal(&(0..ab).collect::<Vec<_>>()))
}

fn ancilla_labels(spec: &GroupSpec, mode: AncillaMode) -> Vec<u64> {
    match mode {
        AncillaMode::Label(y) => vec![y],
        AncillaMode::Mixed => (0..1u64 << spec.bits).collect(),
        AncillaMode::Eigenvector(_) => vec![],
    }
}

/// Exact outcome distribution of the input register by dense simulation.
/// Mixed ancillas average over every label.
pub fn input_distribution(
    spec: &GroupSpec,
    plan: &OrderFindingPlan,
    max_width: usize,
) -> Result<Distribution, OrderError> {
    plan.check(spec)?;
    if let AncillaMode::Eigenvector(k) = plan.ancilla {
        return dense_input_distribution(spec, plan, &spec.eigenvector(k)?, max_width);
    }
    let labels = ancilla_labels(spec, plan.ancilla);
    let parts: Vec<Distribution> = labels
        .iter()
        .map(|&y| {
            dense_input_distribution(
                spec,
                plan,
                &StateVector::basis(spec.bits, y as usize),
                max_width,
            )
        })
        .collect::<Result<_, _>>()?;
    Ok(average(&parts))
}

fn average(parts: &[Distribution]) -> Distribution {
    let n = parts[0].width();
    let mut probs = vec![0.0; 1 << n];
    for d in parts {
        for (acc, p) in probs.iter_mut().zip(d.probabilities()) {
            *acc += p;
        }
    }
    let w = parts.len() as f64;
    probs.iter_mut().for_each(|p| *p /= w);
    Distribution::new(n, probs)
}

/// Eigenvector indices and cycle lengths an ancilla mode decomposes into, each
/// entry equally weighted within its label and labels equally weighted.
fn eigen_components(spec: &GroupSpec, mode: AncillaMode) -> Vec<Vec<(u64, u64)>> {
    match mode {
        AncillaMode::Eigenvector(k) => vec![vec![(k, spec.order())]],
        _ => ancilla_labels(spec, mode)
            .into_iter()
            .map(|y| {
                let l = spec.cycle_length(y);
                (0..l).map(|k| (k, l)).collect()
            })
            .collect(),
    }
}

/// The same distribution as [`input_distribution`], built from the
/// eigenvector decomposition of the ancilla instead of simulation.
pub fn eigenbasis_distribution(
    spec: &GroupSpec,
    plan: &OrderFindingPlan,
    max_width: usize,
) -> Result<Distribution, OrderError> {
    plan.check(spec)?;
    let ab = plan.input_width();
    if ab > max_width {
        return Err(OrderError::TooWide {
            width: ab,
            max: max_width,
        });
    }
    let components = eigen_components(spec, plan.ancilla);
    let mut probs = vec![0.0; 1 << ab];
    for label_parts in &components {
        let weight = 1.0 / (components.len() * label_parts.len()) as f64;
        for &(k, l) in label_parts {
            let per_wire: Vec<f64> = (0..ab)
                .map(|w| eigenest::kick_probability(k as f64 / l as f64, plan.c_js[w / plan.b]))
                .collect();
            for (z, acc) in probs.iter_mut().enumerate() {
                let p: f64 = per_wire
                    .iter()
                    .enumerate()
                    .map(|(w, &p1)| if (z >> w) & 1 == 1 { p1 } else { 1.0 - p1 })
                    .product();
                *acc += weight * p;
            }
        }
    }
    Ok(Distribution::new(ab, probs))
}

/// `P(wire w reads 1)` for every input wire, from the eigenvector
/// decomposition. Works at any width.
pub fn wire_marginals(spec: &GroupSpec, plan: &OrderFindingPlan) -> Result<Vec<f64>, OrderError> {
    plan.check(spec)?;
    let components = eigen_components(spec, plan.ancilla);
    let mut marginals = vec![0.0; plan.input_width()];
    for label_parts in &components {
        let weight = 1.0 / (components.len() * label_parts.len()) as f64;
        for &(k, l) in label_parts {
            for (w, m) in marginals.iter_mut().enumerate() {
                *m +=
                    weight * eigenest::kick_probability(k as f64 / l as f64, plan.c_js[w / plan.b]);
            }
        }
    }
    Ok(marginals)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Backend {
    Dense,
    Eigenbasis,
    #[default]
    Auto,
}

impl Backend {
    fn resolve(self, width: usize) -> Backend {
        match self {
            Backend::Auto if width <= AUTO_DENSE_WIDTH => Backend::Dense,
            Backend::Auto => Backend::Eigenbasis,
            b => b,
        }
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

fn draw_label(spec: &GroupSpec, mode: AncillaMode, rng: &mut impl Rng) -> u64 {
    match mode {
        AncillaMode::Label(y) => y,
        AncillaMode::Mixed => rng.random_range(0..1u64 << spec.bits),
        AncillaMode::Eigenvector(_) => 0,
    }
}

/// Runs `trials` independent experiments. Each returns one sample per power:
/// the number of ones measured in that power's block.
pub fn run_order_finding(
    spec: &GroupSpec,
    plan: &OrderFindingPlan,
    backend: Backend,
    seed: u64,
    trials: usize,
    max_width: usize,
) -> Result<Vec<SampleSet>, OrderError> {
    plan.check(spec)?;
    match backend.resolve(plan.total_width(spec)) {
        Backend::Dense => run_dense(spec, plan, seed, trials, max_width),
        _ => Ok(run_eigenbasis(spec, plan, seed, trials)),
    }
}

fn block_counts(plan: &OrderFindingPlan, outcome: usize) -> SampleSet {
    let samples = plan
        .c_js
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let block = (outcome >> (j * plan.b)) & ((1 << plan.b) - 1);
            Sample {
                c,
                x: block.count_ones() as usize,
                b: plan.b,
            }
        })
        .collect();
    SampleSet { samples }
}

fn run_dense(
    spec: &GroupSpec,
    plan: &OrderFindingPlan,
    seed: u64,
    trials: usize,
    max_width: usize,
) -> Result<Vec<SampleSet>, OrderError> {
    let mut tables: BTreeMap<u64, WeightedIndex<f64>> = BTreeMap::new();
    let ancillas: Vec<(u64, StateVector)> = match plan.ancilla {
        AncillaMode::Eigenvector(k) => vec![(0, spec.eigenvector(k)?)],
        mode => ancilla_labels(spec, mode)
            .into_iter()
            .map(|y| (y, StateVector::basis(spec.bits, y as usize)))
            .collect(),
    };
    for (y, anc) in &ancillas {
        let d = dense_input_distribution(spec, plan, anc, max_width)?;
        let index = WeightedIndex::new(d.probabilities()).map_err(|_| SimError::ZeroNorm)?;
        tables.insert(*y, index);
    }
    Ok((0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let y = draw_label(spec, plan.ancilla, &mut rng);
            let outcome = tables[&y].sample(&mut rng);
            block_counts(plan, outcome)
        })
        .collect())
}

fn run_eigenbasis(
    spec: &GroupSpec,
    plan: &OrderFindingPlan,
    seed: u64,
    trials: usize,
) -> Vec<SampleSet> {
    let order = spec.order();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let (k, l) = match plan.ancilla {
                AncillaMode::Eigenvector(k) => (k, order),
                mode => {
                    let y = draw_label(spec, mode, &mut rng);
                    let l = spec.cycle_length(y);
                    (rng.random_range(0..l), l)
                }
            };
            let theta = k as f64 / l as f64;
            let samples = plan
                .c_js
                .iter()
                .map(|&c| Sample {
                    c,
                    x: binomial(plan.b, eigenest::kick_probability(theta, c), &mut rng),
                    b: plan.b,
                })
                .collect();
            SampleSet { samples }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttemptOutcome {
    /// The random generator already shares a factor with `M`.
    SharedFactor,
    Success,
    /// No candidate order satisfied `g^r ≡ 1`.
    OrderNotFound,
    OddOrder,
    /// `g^{r/2} ≡ −1 (mod M)`.
    TrivialSquareRoot,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attempt {
    pub attempt: usize,
    pub generator: u64,
    pub theta_hat: Option<f64>,
    pub candidate_order: Option<u64>,
    pub outcome: AttemptOutcome,
    pub factor: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorMethod {
    Even,
    PrimePower,
    OrderFinding,
    /// `M` is prime or below 4; there is nothing to split.
    NoFactor,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorReport {
    pub modulus: u64,
    pub factor: Option<u64>,
    pub method: FactorMethod,
    pub attempts: Vec<Attempt>,
}

#[derive(Debug, Clone, Copy)]
pub struct FactorConfig {
    pub max_attempts: usize,
    pub ancilla: AncillaMode,
    pub backend: Backend,
    pub max_width: usize,
    /// Multiples of the continued-fraction denominator tried as the order.
    pub multiples: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            max_attempts: 10,
            ancilla: AncillaMode::Label(1),
            backend: Backend::Auto,
            max_width: crate::statevec::DEFAULT_MAX_WIDTH,
            multiples: 3,
        }
    }
}

pub fn factor(modulus: u64, seed: u64) -> Result<FactorReport, OrderError> {
    factor_with(modulus, seed, &FactorConfig::default())
}

pub fn factor_with(
    modulus: u64,
    seed: u64,
    config: &FactorConfig,
) -> Result<FactorReport, OrderError> {
    let report = |factor, method, attempts| FactorReport {
        modulus,
        factor,
        method,
        attempts,
    };
    if modulus < 4 || is_prime(modulus) {
        return Ok(report(None, FactorMethod::NoFactor, vec![]));
    }
    if modulus.is_multiple_of(2) {
        return Ok(report(Some(2), FactorMethod::Even, vec![]));
    }
    if let Some(p) = prime_power_base(modulus) {
        return Ok(report(Some(p), FactorMethod::PrimePower, vec![]));
    }

    let k = 1u64 << eigenest::log2_ceil(modulus * modulus);
    let schedule = eigenest::make_schedule(k).expect("K ≥ 16 for M ≥ 4");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = Vec::new();
    for attempt in 1..=config.max_attempts {
        let g = rng.random_range(2..modulus);
        let shared = gcd(g, modulus);
        if shared > 1 {
            attempts.push(Attempt {
                attempt,
                generator: g,
                theta_hat: None,
                candidate_order: None,
                outcome: AttemptOutcome::SharedFactor,
                factor: Some(shared),
            });
            return Ok(report(Some(shared), FactorMethod::OrderFinding, attempts));
        }
        let spec = GroupSpec::new(modulus, g)?;
        let plan = OrderFindingPlan::from_schedule(&schedule, config.ancilla);
        let samples = run_order_finding(
            &spec,
            &plan,
            config.backend,
            rng.random(),
            1,
            config.max_width,
        )?
        .pop()
        .expect("one trial");
        let estimate = eigenest::estimate_theta(&samples, k).expect("schedule is nonempty");
        let q = estimate.rational(modulus).q;
        let order = (1..=config.multiples)
            .map(|m| m * q)
            .find(|&r| mod_pow(g, r, modulus) == 1);
        let (outcome, found) = match order {
            None => (AttemptOutcome::OrderNotFound, None),
            Some(r) if r % 2 == 1 => (AttemptOutcome::OddOrder, None),
            Some(r) => {
                let half = mod_pow(g, r / 2, modulus);
                if half == modulus - 1 {
                    (AttemptOutcome::TrivialSquareRoot, None)
                } else {
                    let f = [gcd(half + 1, modulus), gcd(half + modulus - 1, modulus)]
                        .into_iter()
                        .find(|&f| f > 1 && f < modulus);
                    match f {
                        Some(f) => (AttemptOutcome::Success, Some(f)),
                        None => (AttemptOutcome::TrivialSquareRoot, None),
                    }
                }
            }
        };
        attempts.push(Attempt {
            attempt,
            generator: g,
            theta_hat: Some(estimate.theta_hat),
            candidate_order: order,
            outcome,
            factor: found,
        });
        if found.is_some() {
            return Ok(report(found, FactorMethod::OrderFinding, attempts));
        }
    }
    Ok(report(None, FactorMethod::OrderFinding, attempts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec15() -> GroupSpec {
        GroupSpec::new(15, 2).unwrap()
    }

    #[test]
    fn order_of_two_mod_fifteen() {
        assert_eq!(spec15().order(), 4);
        assert_eq!(spec15().bits, 4);
    }

    #[test]
    fn eigen_relation() {
        let spec = spec15();
        let u = PermutationGateFixture::new(&spec);
        for k in 0..4 {
            let v = spec.eigenvector(k).unwrap();
            let mut uv = v.clone();
            uv.apply_permutation(&u.0);
            let omega = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 4.0);
            for z in 0..16 {
                assert!((uv.amplitude(z) - omega * v.amplitude(z)).norm() < 1e-12);
            }
        }
        assert!(spec.eigenvector(4).is_err());
    }

    struct PermutationGateFixture(crate::circuit::PermutationGate);

    impl PermutationGateFixture {
        fn new(spec: &GroupSpec) -> Self {
            Self(crate::circuit::PermutationGate {
                perm: Arc::new(spec.modmul_permutation(1).unwrap()),
                controls: vec![],
                register: (0..spec.bits).collect(),
                oracle: false,
            })
        }
    }

    #[test]
    fn circuit_metrics() {
        let plan = OrderFindingPlan::new(2, vec![1, 2], AncillaMode::Label(1));
        let c = build_order_finding_circuit(&spec15(), &plan, 24).unwrap();
        let m = c.metrics().unwrap();
        assert_eq!(m.width, 8);
        assert_eq!(m.quantum_depth, 1);
        assert_eq!(m.input_prep_depth, 1);
        assert_eq!(m.permutation_gates, 4);
        assert!(matches!(
            build_order_finding_circuit(&spec15(), &plan, 7),
            Err(OrderError::TooWide { width: 8, max: 7 })
        ));
    }

    #[test]
    fn power_equal_to_order_never_kicks() {
        let plan = OrderFindingPlan::new(1, vec![4], AncillaMode::Label(1));
        let d = input_distribution(&spec15(), &plan, 24).unwrap();
        assert!((d.prob(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn backends_agree_exactly_on_small_mixed_plan() {
        let plan = OrderFindingPlan::new(2, vec![1, 3], AncillaMode::Mixed);
        let dense = input_distribution(&spec15(), &plan, 24).unwrap();
        let eigen = eigenbasis_distribution(&spec15(), &plan, 24).unwrap();
        assert!(dense.total_variation(&eigen) < 1e-12);
    }

    #[test]
    fn wire_marginals_match_dense() {
        for ancilla in [
            AncillaMode::Mixed,
            AncillaMode::Label(1),
            AncillaMode::Eigenvector(1),
        ] {
            let plan = OrderFindingPlan::new(2, vec![1, 3, 4], ancilla);
            let dense = input_distribution(&spec15(), &plan, 24).unwrap();
            for (w, m) in wire_marginals(&spec15(), &plan)
                .unwrap()
                .into_iter()
                .enumerate()
            {
                assert!((dense.marginal(&[w]).prob(1) - m).abs() < 1e-12);
            }
        }
        let wide = OrderFindingPlan::new(
            6,
            vec![1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 16],
            AncillaMode::Eigenvector(1),
        );
        assert!(matches!(
            eigenbasis_distribution(&spec15(), &wide, 24),
            Err(OrderError::TooWide { width: 66, max: 24 })
        ));
        assert!((wire_marginals(&spec15(), &wide).unwrap()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn classical_prechecks() {
        assert_eq!(factor(9, 0).unwrap().factor, Some(3));
        assert_eq!(factor(9, 0).unwrap().method, FactorMethod::PrimePower);
        assert_eq!(factor(22, 0).unwrap().factor, Some(2));
        assert_eq!(factor(13, 0).unwrap().factor, None);
    }

    #[test]
    fn factors_fifteen() {
        let r = factor(15, 1).unwrap();
        let f = r.factor.unwrap();
        assert!(f == 3 || f == 5);
    }
}
