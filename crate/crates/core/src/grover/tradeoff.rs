//! Sweeps of success probability against `Σ√k_t`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::builder::build_from_program;
use super::program::PhaseProgram;
use super::{GroverError, GroverSchedule, OracleSpec, Policy};

#[derive(Debug, Clone, Serialize)]
pub struct TradeoffRow {
    pub schedule: String,
    pub policy: Policy,
    pub phases: usize,
    pub sum_sqrt_k: f64,
    pub total_calls: usize,
    pub quantum_depth: usize,
    pub interior_boundaries: usize,
    pub avg_success: f64,
    pub min_success: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TradeoffReport {
    pub n: usize,
    pub range: usize,
    /// Sorted by `sum_sqrt_k`.
    pub rows: Vec<TradeoffRow>,
}

/// Exact average and minimum success over every hidden datum.
pub fn tradeoff_experiment(
    spec: &OracleSpec,
    schedules: &[GroverSchedule],
) -> Result<TradeoffReport, GroverError> {
    let mut rows = Vec::with_capacity(schedules.len());
    for schedule in schedules {
        let program = PhaseProgram::new(spec, schedule)?;
        let eval = program.evaluate();
        let metrics = build_from_program(&program, 0)?.metrics()?;
        rows.push(TradeoffRow {
            schedule: schedule.label(),
            policy: schedule.policy,
            phases: schedule.phases(),
            sum_sqrt_k: schedule.sum_sqrt_k(),
            total_calls: schedule.total_calls(),
            quantum_depth: metrics.quantum_depth,
            interior_boundaries: metrics.interior_boundaries,
            avg_success: eval.average,
            min_success: eval.min,
        });
    }
    rows.sort_by(|a, b| a.sum_sqrt_k.total_cmp(&b.sum_sqrt_k));
    Ok(TradeoffReport {
        n: spec.width(),
        range: spec.range_size(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Constant `k ∈ {1, 4, 9, 16}` per phase at fixed `Σ√k`, for the
    /// diffusion and random policies.
    Serial,
    /// Textbook Grover for every iteration count up to `⌊π√N/4⌋`.
    Frontier,
    /// One phase of parity-conjugated calls, `k` up to `N/2`.
    SinglePhase,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Serial => "serial",
            Family::Frontier => "frontier",
            Family::SinglePhase => "single-phase",
        })
    }
}

impl FromStr for Family {
    type Err = GroverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "serial" => Ok(Family::Serial),
            "frontier" => Ok(Family::Frontier),
            "single-phase" => Ok(Family::SinglePhase),
            other => Err(GroverError::InvalidSchedule(format!(
                "unknown family `{other}`"
            ))),
        }
    }
}

pub fn optimal_iterations(range: usize) -> usize {
    (std::f64::consts::FRAC_PI_4 * (range as f64).sqrt()).floor() as usize
}

/// Schedules of `family` for an `n`-wire search with `f = id`.
pub fn family_schedules(
    family: Family,
    n: usize,
    seed: u64,
) -> Result<Vec<GroverSchedule>, GroverError> {
    let range = 1usize << n;
    let mut out = Vec::new();
    match family {
        Family::Serial => {
            for sum in [12, 24] {
                for root in 1..=4usize {
                    let phases = sum / root;
                    for policy in [Policy::Diffusion, Policy::Random] {
                        out.push(GroverSchedule::new(
                            vec![root * root; phases],
                            policy,
                            seed,
                        )?);
                    }
                }
            }
        }
        Family::Frontier => {
            out.extend((0..=optimal_iterations(range)).map(GroverSchedule::standard));
        }
        Family::SinglePhase => {
            let half = range / 2;
            let mut ks: Vec<usize> = [1, half / 8, half / 4, half / 2, 3 * half / 4, half]
                .into_iter()
                .filter(|&k| k >= 1)
                .collect();
            ks.dedup();
            for k in ks {
                out.push(GroverSchedule::new(vec![k], Policy::Parity, seed)?);
            }
        }
    }
    Ok(out)
}

/// Smallest `k` for which one parity phase on `n` wires reaches average
/// success `threshold`, or `None` if `k = N/2` does not.
pub fn single_phase_k_min(n: usize, threshold: f64) -> Result<Option<usize>, GroverError> {
    let spec = OracleSpec::standard(n)?;
    let success = |k: usize| -> Result<f64, GroverError> {
        let schedule = GroverSchedule::new(vec![k], Policy::Parity, 0)?;
        Ok(PhaseProgram::new(&spec, &schedule)?.evaluate().average)
    };
    let (mut lo, mut hi) = (1usize, 1usize << (n - 1));
    if success(hi)? < threshold {
        return Ok(None);
    }
    if success(lo)? >= threshold {
        return Ok(Some(lo));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if success(mid)? >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub range: usize,
    pub k_min: Option<usize>,
}

/// `k_min` for every `n` in `bits` and the fitted exponent of `k_min` in `N`.
pub fn single_phase_scaling(
    bits: impl IntoIterator<Item = usize>,
    threshold: f64,
) -> Result<(Vec<ScalingPoint>, Option<f64>), GroverError> {
    let points = bits
        .into_iter()
        .map(|n| {
            Ok(ScalingPoint {
                n,
                range: 1 << n,
                k_min: single_phase_k_min(n, threshold)?,
            })
        })
        .collect::<Result<Vec<_>, GroverError>>()?;
    let fit: Option<Vec<(f64, f64)>> = points
        .iter()
        .map(|p| p.k_min.map(|k| (p.range as f64, k as f64)))
        .collect();
    let slope = fit.filter(|f| f.len() >= 2).map(|f| log_log_slope(&f));
    Ok((points, slope))
}
