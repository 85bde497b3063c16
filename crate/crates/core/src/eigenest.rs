//! Classical eigenvalue estimation from order-finding samples.
//!
//! Phases are measured in units of `θ/π ∈ [0, 1)`. A sample `(c, x, b)` counts
//! `x` ones among `b` wires that each read 1 with probability `sin²(π θ c)`.
//! Because `sin²` cannot tell `θ` from `1 − θ`, estimates are reported as the
//! representative in `[0, 1/2]`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution as _};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

const BEAM_WIDTH: usize = 64;
const P_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    #[error("resolution target K = {0} must be at least 4")]
    ResolutionTooSmall(u64),
    #[error("sample set is empty")]
    EmptySamples,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CjSchedule {
    pub k: u64,
    pub b: usize,
    pub c_js: Vec<u64>,
}

impl CjSchedule {
    /// Samples drawn per experiment, `a · b`.
    pub fn budget(&self) -> usize {
        self.c_js.len() * self.b
    }
}

/// `⌈log₂ K⌉`.
pub fn log2_ceil(k: u64) -> u32 {
    if k <= 1 {
        0
    } else {
        64 - (k - 1).leading_zeros()
    }
}

/// Repetitions per power: `⌈3 log₂ log₂ K⌉`, at least 3.
pub fn default_b(k: u64) -> usize {
    let v = 3.0 * (k as f64).log2().log2();
    (v.ceil() as usize).max(3)
}

/// Every `c ∈ [1, K]` with one set bit, or two set bits at most `b/2` apart.
pub fn make_schedule(k: u64) -> Result<CjSchedule, EigenError> {
    if k < 4 {
        return Err(EigenError::ResolutionTooSmall(k));
    }
    Ok(schedule_with_b(k, default_b(k)))
}

/// Same rule as [`make_schedule`] with an explicit `b`.
pub fn schedule_with_b(k: u64, b: usize) -> CjSchedule {
    let mut c_js = Vec::new();
    for hi in 0..64u32 {
        let top = 1u64 << hi;
        if top > k {
            break;
        }
        c_js.push(top);
        for lo in 0..hi {
            if 2 * (hi - lo) as usize <= b {
                let c = top | 1 << lo;
                if c <= k {
                    c_js.push(c);
                }
            }
        }
    }
    c_js.sort_unstable();
    CjSchedule { k, b, c_js }
}

/// Powers of two only, sized to spend at least `budget` samples.
pub fn one_bit_schedule(k: u64, budget: usize) -> CjSchedule {
    let c_js: Vec<u64> = (0..=log2_ceil(k))
        .map(|i| 1u64 << i)
        .filter(|&c| c <= k)
        .collect();
    let b = budget.div_ceil(c_js.len()).max(1);
    CjSchedule { k, b, c_js }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub c: u64,
    pub x: usize,
    pub b: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
}

impl SampleSet {
    pub fn total_wires(&self) -> usize {
        self.samples.iter().map(|s| s.b).sum()
    }
}

/// Probability that one wire reads 1 when probing power `c` of a phase.
pub fn kick_probability(theta_over_pi: f64, c: u64) -> f64 {
    // reduce first so large c keeps precision
    let phase = (theta_over_pi * c as f64).rem_euclid(1.0);
    (PI * phase).sin().powi(2)
}

pub fn simulate_samples(theta_over_pi: f64, schedule: &CjSchedule, seed: u64) -> SampleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_samples_with(theta_over_pi, &schedule.c_js, schedule.b, &mut rng)
}

pub fn simulate_samples_with(
    theta_over_pi: f64,
    c_js: &[u64],
    b: usize,
    rng: &mut impl Rng,
) -> SampleSet {
    let samples = c_js
        .iter()
        .map(|&c| {
            let p = kick_probability(theta_over_pi, c);
            Sample {
                c,
                x: binomial(b, p, rng),
                b,
            }
        })
        .collect();
    SampleSet { samples }
}

pub(crate) fn binomial(b: usize, p: f64, rng: &mut impl Rng) -> usize {
    let p = p.clamp(0.0, 1.0);
    Binomial::new(b as u64, p)
        .expect("p is clamped to [0, 1]")
        .sample(rng) as usize
}

/// Binomial log-likelihood of `theta_over_pi`, omitting the constant
/// `log C(b, x)` terms; only samples with `c ≤ max_c` contribute.
pub fn log_likelihood(samples: &SampleSet, theta_over_pi: f64, max_c: u64) -> f64 {
    samples
        .samples
        .iter()
        .filter(|s| s.c <= max_c)
        .map(|s| {
            let p = kick_probability(theta_over_pi, s.c).clamp(P_CLAMP, 1.0 - P_CLAMP);
            s.x as f64 * p.ln() + (s.b - s.x) as f64 * (1.0 - p).ln()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaEstimate {
    /// Representative in `[0, 1/2]`, on the grid of pitch `1/(4K)`.
    pub theta_hat: f64,
    pub resolution: f64,
    /// `1 − theta_hat` explains the samples equally well and differs from it.
    pub reflected_ambiguity: bool,
    pub log_likelihood: f64,
}

impl ThetaEstimate {
    pub fn rational(&self, q_max: u64) -> Rational {
        continued_fractions(self.theta_hat, q_max)
    }
}

/// Coarse-to-fine maximum-likelihood search over `[0, 1/2]`.
///
/// Level `ℓ` keeps up to 64 intervals of width `2^{−ℓ}` ranked by the
/// likelihood of their midpoints under the samples with `c ≤ 2^ℓ`, then
/// splits each in two. After the last level every grid point of pitch
/// `1/(4K)` touching a surviving interval is scored with all samples.
pub fn estimate_theta(samples: &SampleSet, k: u64) -> Result<ThetaEstimate, EigenError> {
    if samples.samples.is_empty() {
        return Err(EigenError::EmptySamples);
    }
    let depth = log2_ceil(k.max(4)) + 2;
    // intervals are [i, i+1] · 2^{−ℓ}
    let mut beam: Vec<u64> = vec![0, 1];
    for level in 2..=depth {
        if level > 2 {
            beam = beam.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
        }
        let width = 0.5f64.powi(level as i32);
        let max_c = 1u64 << level.min(63);
        let mut scored: Vec<(f64, u64)> = beam
            .iter()
            .map(|&i| (log_likelihood(samples, (i as f64 + 0.5) * width, max_c), i))
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        scored.truncate(BEAM_WIDTH);
        beam = scored.into_iter().map(|(_, i)| i).collect();
    }
    let pitch = 1.0 / (4 * k.max(4)) as f64;
    let grid_max = ((0.5 / pitch).round()) as u64;
    let leaf = 0.5f64.powi(depth as i32);
    let mut points: Vec<u64> = beam
        .iter()
        .flat_map(|&i| {
            let lo = (i as f64 * leaf / pitch).floor() as u64;
            let hi = ((i + 1) as f64 * leaf / pitch).ceil() as u64;
            lo.saturating_sub(1)..=(hi + 1).min(grid_max)
        })
        .collect();
    points.sort_unstable();
    points.dedup();
    Ok(best_on_grid(samples, &points, pitch, k))
}

/// Maximum-likelihood point over the whole `1/(4K)` grid on `[0, 1/2]`.
pub fn estimate_theta_exhaustive(samples: &SampleSet, k: u64) -> Result<ThetaEstimate, EigenError> {
    if samples.samples.is_empty() {
        return Err(EigenError::EmptySamples);
    }
    let pitch = 1.0 / (4 * k.max(4)) as f64;
    let grid_max = ((0.5 / pitch).round()) as u64;
    let points: Vec<u64> = (0..=grid_max).collect();
    Ok(best_on_grid(samples, &points, pitch, k))
}

fn best_on_grid(samples: &SampleSet, points: &[u64], pitch: f64, k: u64) -> ThetaEstimate {
    let mut best = (f64::NEG_INFINITY, 0u64);
    for &g in points {
        let ll = log_likelihood(samples, g as f64 * pitch, u64::MAX);
        if ll > best.0 {
            best = (ll, g);
        }
    }
    let theta_hat = best.1 as f64 * pitch;
    ThetaEstimate {
        theta_hat,
        resolution: 1.0 / k as f64,
        reflected_ambiguity: theta_hat > 0.0 && (theta_hat - 0.5).abs() > pitch / 2.0,
        log_likelihood: best.0,
    }
}

/// `min(θ, 1 − θ)` for `θ` reduced into `[0, 1)`.
pub fn representative(theta_over_pi: f64) -> f64 {
    let t = theta_over_pi.rem_euclid(1.0);
    t.min(1.0 - t)
}

/// Whether an estimate lies within one part in `K` of the truth's representative.
pub fn is_success(estimate: f64, truth: f64, k: u64) -> bool {
    (estimate - representative(truth)).abs() <= 1.0 / k as f64 + 1e-12
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub p: u64,
    pub q: u64,
    /// `|x − p/q| > 1/(2Q²)`: no fraction with denominator `≤ Q` is pinned down.
    pub low_confidence: bool,
}

impl Rational {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// Convergent of `x` with the largest denominator `≤ q_max`.
pub fn continued_fractions(x: f64, q_max: u64) -> Rational {
    let q_max = q_max.max(1);
    let (mut h_prev, mut h) = (1u64, x.floor() as u64);
    let (mut k_prev, mut k) = (0u64, 1u64);
    let mut rem = x - x.floor();
    while rem > 1e-12 {
        let inv = 1.0 / rem;
        let a = inv.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let k_next = a.saturating_mul(k).saturating_add(k_prev);
        if k_next > q_max {
            break;
        }
        let h_next = a.saturating_mul(h).saturating_add(h_prev);
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        rem = inv - inv.floor();
    }
    let err = (x - h as f64 / k as f64).abs();
    Rational {
        p: h,
        q: k,
        low_confidence: err > 1.0 / (2.0 * (q_max as f64).powi(2)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolutionReport {
    pub k: u64,
    pub trials: usize,
    pub budget: usize,
    pub full_schedule_success: f64,
    pub single_power_success: f64,
}

/// Success rates of the full schedule against `c = 1` alone with the same
/// number of samples, over uniformly random phases.
pub fn classical_resolution_demo(
    k: u64,
    trials: usize,
    seed: u64,
) -> Result<ResolutionReport, EigenError> {
    let schedule = make_schedule(k)?;
    let budget = schedule.budget();
    let single = CjSchedule {
        k,
        b: budget,
        c_js: vec![1],
    };
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let theta: f64 = rng.random_range(0.0..1.0);
            let full = simulate_samples_with(theta, &schedule.c_js, schedule.b, &mut rng);
            let one = simulate_samples_with(theta, &single.c_js, single.b, &mut rng);
            let full_ok = is_success(estimate_theta(&full, k).unwrap().theta_hat, theta, k);
            let one_ok = is_success(estimate_theta(&one, k).unwrap().theta_hat, theta, k);
            (full_ok, one_ok)
        })
        .collect();
    let rate = |f: fn(&(bool, bool)) -> bool| {
        outcomes.iter().filter(|o| f(o)).count() as f64 / trials.max(1) as f64
    };
    Ok(ResolutionReport {
        k,
        trials,
        budget,
        full_schedule_success: rate(|o| o.0),
        single_power_success: rate(|o| o.1),
    })
}

/// Dyadic phase `t / 2^bits` whose binary expansion carries a run of `run`
/// equal bits starting after a random prefix, the case where single powers
/// of two struggle to place the boundary.
pub fn run_of_bits_phase(bits: u32, run: u32, rng: &mut impl Rng) -> f64 {
    assert!(
        run + 2 <= bits,
        "need room for a prefix bit and a terminating bit"
    );
    let prefix_len = rng.random_range(1..=bits - run - 1);
    let bit: u64 = rng.random_range(0..2);
    let mut t: u64 = 0;
    for i in 0..bits {
        // i = 0 is the most significant fractional bit
        let v = if i < prefix_len {
            rng.random_range(0..2)
        } else if i < prefix_len + run {
            bit
        } else if i == prefix_len + run {
            1 - bit
        } else {
            rng.random_range(0..2)
        };
        t = (t << 1) | v;
    }
    t as f64 / (1u64 << bits) as f64
}
