use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdepth::eigenest::{self, CjSchedule};

#[test]
fn full_schedule_beats_single_power() {
    let r = eigenest::classical_resolution_demo(1024, 400, 3).unwrap();
    println!("{r:?}");
    assert!(r.full_schedule_success >= 0.5, "{r:?}");
    assert!(r.full_schedule_success > r.single_power_success, "{r:?}");
}

#[test]
fn single_power_success_is_at_most_five_percent() {
    let r = eigenest::classical_resolution_demo(1024, 1000, 3).unwrap();
    assert!(
        r.single_power_success <= 0.05,
        "power 1 alone succeeded in {:.3} of trials with {} samples",
        r.single_power_success,
        r.budget
    );
}

#[test]
fn tiny_resolution_is_easy_for_both() {
    let r = eigenest::classical_resolution_demo(4, 200, 1).unwrap();
    assert!(r.full_schedule_success >= 0.95, "{r:?}");
    assert!(r.single_power_success >= 0.95, "{r:?}");
}

#[test]
fn one_third_is_located() {
    const K: u64 = 1024;
    let schedule = eigenest::make_schedule(K).unwrap();
    let hits = (0..200)
        .filter(|&seed| {
            let s = eigenest::simulate_samples(1.0 / 3.0, &schedule, seed);
            let est = eigenest::estimate_theta(&s, K).unwrap();
            (est.theta_hat - 1.0 / 3.0).abs() <= 1.0 / K as f64
        })
        .count();
    assert!(hits >= 100, "{hits}/200");
}

#[test]
fn sample_means_match_binomial() {
    let schedule = CjSchedule {
        k: 64,
        b: 5,
        c_js: vec![1, 3, 8],
    };
    let theta = 0.137;
    let seeds = 100_000;
    let mut sums = [0usize; 3];
    for seed in 0..seeds {
        let s = eigenest::simulate_samples(theta, &schedule, seed);
        for (acc, x) in sums.iter_mut().zip(&s.samples) {
            *acc += x.x;
        }
    }
    for (j, &c) in schedule.c_js.iter().enumerate() {
        let p = (std::f64::consts::PI * theta * c as f64).sin().powi(2);
        let mean = 5.0 * p;
        let sigma = (5.0 * p * (1.0 - p) / seeds as f64).sqrt();
        let got = sums[j] as f64 / seeds as f64;
        assert!(
            (got - mean).abs() <= 3.0 * sigma,
            "c = {c}: {got} vs {mean}"
        );
    }
}

#[test]
fn schedule_size_grows_like_b_log_k() {
    for log_k in [8u32, 12, 16, 20, 24] {
        let k = 1u64 << log_k;
        let s = eigenest::make_schedule(k).unwrap();
        let half_gap = (s.b / 2) as u32;
        // one-bit values plus pairs (hi, lo) with 1 ≤ hi − lo ≤ b/2; pairs
        // under the top bit of K itself exceed K
        let expected: u32 = (0..log_k).map(|hi| 1 + hi.min(half_gap)).sum::<u32>() + 1;
        assert_eq!(s.c_js.len() as u32, expected, "K = 2^{log_k}");
        assert!(s.c_js.len() <= (s.b / 2 + 1) * (log_k as usize + 1));
    }
}

#[test]
fn two_bit_values_help_on_long_runs() {
    const K: u64 = 1024;
    let schedule = eigenest::make_schedule(K).unwrap();
    let one_bit = eigenest::one_bit_schedule(K, schedule.budget());
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let trials = 300;
    let (mut full, mut single) = (0, 0);
    for _ in 0..trials {
        let theta = eigenest::run_of_bits_phase(10, schedule.b as u32 / 2, &mut rng);
        let s = eigenest::simulate_samples_with(theta, &schedule.c_js, schedule.b, &mut rng);
        let o = eigenest::simulate_samples_with(theta, &one_bit.c_js, one_bit.b, &mut rng);
        full += eigenest::is_success(eigenest::estimate_theta(&s, K).unwrap().theta_hat, theta, K)
            as usize;
        single += eigenest::is_success(eigenest::estimate_theta(&o, K).unwrap().theta_hat, theta, K)
            as usize;
    }
    let (pf, po) = (full as f64 / trials as f64, single as f64 / trials as f64);
    let pooled = (pf + po) / 2.0;
    let z = (pf - po) / (pooled * (1.0 - pooled) * 2.0 / trials as f64).sqrt();
    assert!(z > 2.326, "two-bit {pf:.3} vs one-bit {po:.3}, z = {z:.2}");
}

#[test]
fn beam_matches_exhaustive_search() {
    const K: u64 = 256;
    let schedule = eigenest::make_schedule(K).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut agree = 0;
    for _ in 0..200 {
        let theta: f64 = rng.random_range(0.0..1.0);
        let s = eigenest::simulate_samples_with(theta, &schedule.c_js, schedule.b, &mut rng);
        let beam = eigenest::estimate_theta(&s, K).unwrap();
        let full = eigenest::estimate_theta_exhaustive(&s, K).unwrap();
        assert!(beam.log_likelihood <= full.log_likelihood + 1e-9);
        agree += (beam.theta_hat == full.theta_hat) as usize;
    }
    assert!(agree >= 190, "{agree}/200");
}
