//! The three elementary inequalities used by the lower bound, with
//! randomized suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum LemmaError {
    #[error("entry {value} at ({row}, {col}) is negative")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("vector {index} has norm {norm}, not 1")]
    NotUnit { index: usize, norm: f64 },
    #[error("vectors have dimensions {0:?}")]
    DimensionMismatch([usize; 3]),
    #[error("Σt² = {sum_sq} exceeds Np = {bound}")]
    Precondition { sum_sq: f64, bound: f64 },
}

/// `(R, C)` for a non-negative array `w[t][x]`: `R = Σ_t ‖w[t]‖₂` and
/// `C = ‖(Σ_t w[t][x])_x‖₂`. Always `R ≥ C`.
pub fn lemma1_check(rows: &[Vec<f64>]) -> Result<(f64, f64), LemmaError> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut col_sums = vec![0.0; cols];
    let mut r = 0.0;
    for (t, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(LemmaError::Ragged {
                row: t,
                len: row.len(),
                expected: cols,
            });
        }
        if let Some((x, &value)) = row.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(LemmaError::Negative {
                row: t,
                col: x,
                value,
            });
        }
        r += row.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (s, v) in col_sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    let c = col_sums.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok((r, c))
}

fn abs_sin(a: &[f64], b: &[f64]) -> f64 {
    let c: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (1.0 - c * c).max(0.0).sqrt()
}

/// `(|sin(u,v)| + |sin(v,w)|, |sin(u,w)|)` for unit vectors.
pub fn lemma2_check(u: &[f64], v: &[f64], w: &[f64]) -> Result<(f64, f64), LemmaError> {
    let dims = [u.len(), v.len(), w.len()];
    if dims[0] != dims[1] || dims[1] != dims[2] {
        return Err(LemmaError::DimensionMismatch(dims));
    }
    for (index, vec) in [u, v, w].into_iter().enumerate() {
        let norm = vec.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(LemmaError::NotUnit { index, norm });
        }
    }
    Ok((abs_sin(u, v) + abs_sin(v, w), abs_sin(u, w)))
}

/// `(Σt, N√p)` given `Σt² ≤ Np`.
pub fn lemma3_check(t: &[f64], p: f64) -> Result<(f64, f64), LemmaError> {
    let n = t.len() as f64;
    let sum_sq: f64 = t.iter().map(|x| x * x).sum();
    let bound = n * p;
    if sum_sq > bound + TOLERANCE {
        return Err(LemmaError::Precondition { sum_sq, bound });
    }
    Ok((t.iter().sum(), n * p.max(0.0).sqrt()))
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub lemma: usize,
    pub trials: usize,
    pub violations: usize,
    /// Largest amount by which the smaller side exceeded the larger one.
    pub max_excess: f64,
}

fn tally(lemma: usize, excesses: impl Iterator<Item = f64>) -> SuiteReport {
    let mut trials = 0;
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    for e in excesses {
        trials += 1;
        if e > TOLERANCE {
            violations += 1;
        }
        max_excess = max_excess.max(e);
    }
    SuiteReport {
        lemma,
        trials,
        violations,
        max_excess,
    }
}

fn unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Random 8×8 arrays, about a quarter of the entries zero.
pub fn lemma1_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    tally(
        1,
        (0..trials).map(|_| {
            let rows: Vec<Vec<f64>> = (0..8)
                .map(|_| {
                    (0..8)
                        .map(|_| {
                            if rng.random_bool(0.25) {
                                0.0
                            } else {
                                rng.random::<f64>()
                            }
                        })
                        .collect()
                })
                .collect();
            let (r, c) = lemma1_check(&rows).expect("entries are non-negative");
            c - r
        }),
    )
}

/// Random unit triples in dimensions 2 to 10; every rotation of the triple
/// is checked.
pub fn lemma2_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    tally(
        2,
        (0..trials).map(|_| {
            let dim = rng.random_range(2..=10);
            let u = unit_vector(&mut rng, dim);
            let v = unit_vector(&mut rng, dim);
            let w = unit_vector(&mut rng, dim);
            [(&u, &v, &w), (&v, &w, &u), (&w, &u, &v)]
                .into_iter()
                .map(|(a, b, c)| {
                    let (lhs, rhs) = lemma2_check(a, b, c).expect("unit vectors");
                    rhs - lhs
                })
                .fold(f64::NEG_INFINITY, f64::max)
        }),
    )
}

/// Random lists of length 1 to 20 with `p` at or above `Σt²/N`.
pub fn lemma3_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    tally(
        3,
        (0..trials).map(|_| {
            let len = rng.random_range(1..=20);
            let t: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mean_sq = t.iter().map(|x| x * x).sum::<f64>() / len as f64;
            let p = if rng.random_bool(0.2) {
                mean_sq
            } else {
                mean_sq * (1.0 + rng.random::<f64>())
            };
            let (lhs, rhs) = lemma3_check(&t, p).expect("precondition holds by construction");
            lhs - rhs
        }),
    )
}

pub fn run_suites(trials: usize, seed: u64) -> [SuiteReport; 3] {
    [
        lemma1_suite(trials, seed),
        lemma2_suite(trials, seed.wrapping_add(1)),
        lemma3_suite(trials, seed.wrapping_add(2)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma1_degenerate_cases() {
        assert_eq!(lemma1_check(&vec![vec![0.0; 4]; 3]).unwrap(), (0.0, 0.0));
        let (r, c) = lemma1_check(&[vec![3.0, 4.0]]).unwrap();
        assert_eq!((r, c), (5.0, 5.0));
        assert!(matches!(
            lemma1_check(&[vec![1.0, -1.0]]),
            Err(LemmaError::Negative { .. })
        ));
        assert!(matches!(
            lemma1_check(&[vec![1.0], vec![1.0, 2.0]]),
            Err(LemmaError::Ragged { .. })
        ));
    }

    #[test]
    fn lemma2_right_angles() {
        let e = |i: usize| {
            (0..3)
                .map(|j| if i == j { 1.0 } else { 0.0 })
                .collect::<Vec<f64>>()
        };
        let (lhs, rhs) = lemma2_check(&e(0), &e(1), &e(2)).unwrap();
        assert!((lhs - 2.0).abs() < 1e-15 && (rhs - 1.0).abs() < 1e-15);
        assert!(matches!(
            lemma2_check(&[1.0, 1.0], &e(0)[..2], &e(1)[..2]),
            Err(LemmaError::NotUnit { index: 0, .. })
        ));
    }

    #[test]
    fn lemma3_constant_list_is_tight() {
        let (lhs, rhs) = lemma3_check(&[0.5; 4], 0.25).unwrap();
        assert!((lhs - rhs).abs() < 1e-15);
        assert!(lemma3_check(&[1.0, 1.0], 0.5).is_err());
    }

    #[test]
    fn suites_find_nothing() {
        for report in run_suites(500, 7) {
            assert_eq!(report.violations, 0, "lemma {}", report.lemma);
            assert_eq!(report.trials, 500);
        }
    }
}
