//! Numerical check of the chain of inequalities behind the search lower
//! bound, for schedules with single-`H^∞` separators and Hadamard-basis
//! readout.
//!
//! Notation, with `U_t = H^∞ τ_t` and `P_{x,t}` the sign flip on odd-parity
//! labels of phase `t`:
//!
//! - `ψ_t = U_t ψ_{t−1}` is the run with every oracle call removed;
//! - `ψ_{x,T,s} = U_T P_{x,T} ⋯ U_{s+1} P_{x,s+1} ψ_s` switches the oracle on
//!   from phase `s + 1` onwards, so `ψ_{x,T,0}` is the real final state and
//!   `ψ_{x,T,T} = ψ_T`;
//! - `F = Σ_x sin²(ψ_T, ψ_{x,T,0})`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::program::{hadamard, Boundary, PhaseProgram};
use super::{GroverError, GroverSchedule, OracleSpec, Policy};
use crate::circuit::Readout;
use crate::statevec::StateVector;

pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct PhaseCheck {
    pub t: usize,
    pub k: usize,
    /// `Σ_x W_{x,t}(ψ_{t−1})`, bounded by `k`.
    pub sum_w: f64,
    /// Largest `|⟨ψ_{x,T,t}|ψ_{x,T,t−1}⟩ − (1 − 2W_{x,t})|` over `x`.
    pub identity_error: f64,
    /// Largest `1 − |⟨ψ_{x,T,t}|ψ_{x,T,t−1}⟩|² − 4W_{x,t}` over `x`.
    pub w_bound_excess: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofReport {
    pub n: usize,
    pub range: usize,
    pub schedule: String,
    pub phases: Vec<PhaseCheck>,
    pub f_value: f64,
    pub f_bound: f64,
    /// Largest `sin²(ψ_T, ψ_{x,T,0}) − 4(Σ_t √W_{x,t})²` over `x`.
    pub per_x_excess: f64,
    /// `N⁻¹ Σ_x cos²(ψ_{x,T,0}, C_x)`.
    pub p_born: f64,
    pub p_evaluator: f64,
    pub final_lhs: f64,
    pub final_rhs: f64,
    pub violations: Vec<String>,
}

struct PerX {
    w: Vec<f64>,
    identity_error: Vec<f64>,
    w_excess: Vec<f64>,
    sin2: f64,
    sqrt_w_sum: f64,
    born: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(u, v)| u.conj() * v).sum()
}

fn permute(amps: &mut Vec<Complex64>, tau: Option<&[u32]>) {
    if let Some(tau) = tau {
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (z, &y) in tau.iter().enumerate() {
            out[y as usize] = amps[z];
        }
        *amps = out;
    }
}

pub fn proof_diagnostics(
    program: &PhaseProgram,
    initial: &StateVector,
) -> Result<ProofReport, GroverError> {
    if program.boundary() != Boundary::Hadamard || program.readout() != Readout::X {
        return Err(GroverError::NotPaperForm);
    }
    let n = program.width();
    if initial.width() != n {
        return Err(crate::statevec::SimError::WidthMismatch(initial.width(), n).into());
    }
    let phases = program.phases();
    let big_t = phases.len();
    let range = program.spec().range_size();

    let mut psi = vec![initial.amplitudes().to_vec()];
    for phase in phases {
        let mut next = psi.last().expect("nonempty").clone();
        permute(&mut next, phase.total());
        hadamard(&mut next);
        psi.push(next);
    }

    let per_x: Vec<PerX> = (0..range)
        .into_par_iter()
        .map(|x| {
            // switched[s] = ψ_{x,T,s}
            let switched: Vec<Vec<Complex64>> = (0..=big_t)
                .map(|s| {
                    let mut a = psi[s].clone();
                    for phase in &phases[s..] {
                        phase.apply(x, &mut a);
                        hadamard(&mut a);
                    }
                    a
                })
                .collect();
            let mut out = PerX {
                w: Vec::with_capacity(big_t),
                identity_error: Vec::with_capacity(big_t),
                w_excess: Vec::with_capacity(big_t),
                sin2: 0.0,
                sqrt_w_sum: 0.0,
                born: 0.0,
            };
            for t in 1..=big_t {
                let w = program
                    .w_diagnostic(t, x, &psi[t - 1])
                    .expect("index in range");
                let ip = dot(&switched[t], &switched[t - 1]);
                out.identity_error
                    .push((ip - Complex64::new(1.0 - 2.0 * w, 0.0)).norm());
                out.w_excess.push(1.0 - ip.norm_sqr() - 4.0 * w);
                out.sqrt_w_sum += w.sqrt();
                out.w.push(w);
            }
            out.sin2 = 1.0 - dot(&psi[big_t], &switched[0]).norm_sqr();
            out.born = program.marked_mass(x, &switched[0]);
            out
        })
        .collect();

    let mut violations = Vec::new();
    let mut checks = Vec::with_capacity(big_t);
    for (i, phase) in phases.iter().enumerate() {
        let sum_w: f64 = per_x.iter().map(|r| r.w[i]).sum();
        let identity_error = per_x
            .iter()
            .map(|r| r.identity_error[i])
            .fold(0.0, f64::max);
        let w_bound_excess = per_x
            .iter()
            .map(|r| r.w_excess[i])
            .fold(f64::NEG_INFINITY, f64::max);
        let t = i + 1;
        if sum_w > phase.k() as f64 + TOLERANCE {
            violations.push(format!(
                "phase {t}: Σ_x W = {sum_w} exceeds k = {}",
                phase.k()
            ));
        }
        if identity_error > TOLERANCE {
            violations.push(format!(
                "phase {t}: overlap differs from 1 − 2W by {identity_error:e}"
            ));
        }
        if w_bound_excess > TOLERANCE {
            violations.push(format!(
                "phase {t}: 1 − |overlap|² exceeds 4W by {w_bound_excess:e}"
            ));
        }
        checks.push(PhaseCheck {
            t,
            k: phase.k(),
            sum_w,
            identity_error,
            w_bound_excess,
        });
    }

    let f_value: f64 = per_x.iter().map(|r| r.sin2).sum();
    let f_bound = 4.0 * program.schedule().sum_sqrt_k().powi(2);
    if f_value > f_bound + TOLERANCE {
        violations.push(format!("F = {f_value} exceeds 4(Σ√k)² = {f_bound}"));
    }
    let per_x_excess = per_x
        .iter()
        .map(|r| r.sin2 - 4.0 * r.sqrt_w_sum.powi(2))
        .fold(f64::NEG_INFINITY, f64::max);
    if per_x_excess > TOLERANCE {
        violations.push(format!(
            "sin² to the oracle-free run exceeds 4(Σ√W)² by {per_x_excess:e}"
        ));
    }

    let p_born = per_x.iter().map(|r| r.born).sum::<f64>() / range as f64;
    let p_evaluator = program.evaluate_from(initial)?.average;
    if (p_born - p_evaluator).abs() > TOLERANCE {
        violations.push(format!(
            "Born-rule p = {p_born} but evaluator gives {p_evaluator}"
        ));
    }
    let big_n = range as f64;
    let final_lhs = (big_n * f_value).sqrt() + big_n * (1.0 - p_born).max(0.0).sqrt();
    let final_rhs = big_n - 1.0;
    if final_lhs < final_rhs - TOLERANCE {
        violations.push(format!(
            "√(NF) + N√(1−p) = {final_lhs} is below N − 1 = {final_rhs}"
        ));
    }

    Ok(ProofReport {
        n,
        range,
        schedule: program.schedule().label(),
        phases: checks,
        f_value,
        f_bound,
        per_x_excess,
        p_born,
        p_evaluator,
        final_lhs,
        final_rhs,
        violations,
    })
}

/// A random schedule on at most `max_n` wires together with a random complex
/// initial state.
pub fn random_instance(
    seed: u64,
    max_n: usize,
) -> Result<(PhaseProgram, StateVector), GroverError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n.max(2));
    let range_bits = rng.random_range(1..=n);
    let spec = OracleSpec::first_bits(n, range_bits)?;
    let phases = rng.random_range(1..=4);
    let k: Vec<usize> = (0..phases).map(|_| rng.random_range(1..=6)).collect();
    let policy = match rng.random_range(0..4) {
        0 => Policy::Identity,
        1 if phases == 1 && range_bits == n => Policy::Parity,
        _ => Policy::Random,
    };
    let k = if policy == Policy::Parity {
        vec![k[0].min(1 << (n - 1))]
    } else {
        k
    };
    let schedule = GroverSchedule::new(k, policy, rng.random())?;
    let program = PhaseProgram::new(&spec, &schedule)?;
    let state = StateVector::random(n, rng.random());
    Ok((program, state))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diffusion_is_rejected() {
        let spec = OracleSpec::standard(3).unwrap();
        let program = PhaseProgram::new(&spec, &GroverSchedule::standard(1)).unwrap();
        assert!(matches!(
            proof_diagnostics(&program, &StateVector::random(3, 0)),
            Err(GroverError::NotPaperForm)
        ));
    }

    #[test]
    fn chain_holds_on_random_instances() {
        for seed in 0..20 {
            let (program, state) = random_instance(seed, 6).unwrap();
            let report = proof_diagnostics(&program, &state).unwrap();
            assert!(
                report.violations.is_empty(),
                "seed {seed}: {:?}",
                report.violations
            );
        }
    }

    #[test]
    fn uniform_start_matches_plain_evaluation() {
        let spec = OracleSpec::first_bits(5, 3).unwrap();
        let program = PhaseProgram::new(
            &spec,
            &GroverSchedule::new(vec![2, 3], Policy::Random, 8).unwrap(),
        )
        .unwrap();
        let uniform =
            StateVector::from_amplitudes(vec![Complex64::new(32f64.sqrt().recip(), 0.0); 32]);
        let report = proof_diagnostics(&program, &uniform).unwrap();
        assert!((report.p_born - program.evaluate().average).abs() < 1e-12);
    }
}
