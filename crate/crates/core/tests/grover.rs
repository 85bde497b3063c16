use qdepth::grover::tradeoff::{self, Family};
use qdepth::grover::{GroverSchedule, OracleSpec, Policy};

#[test]
fn serial_blocks_peak_at_single_calls() {
    let n = 8;
    let spec = OracleSpec::standard(n).unwrap();
    for sum in [4usize, 8, 12] {
        let schedules: Vec<GroverSchedule> = (1..=4usize)
            .filter(|root| sum % root == 0)
            .map(|root| GroverSchedule::new(vec![root * root; sum / root], Policy::Diffusion, 0))
            .collect::<Result<_, _>>()
            .unwrap();
        let report = tradeoff::tradeoff_experiment(&spec, &schedules).unwrap();
        let single = report
            .rows
            .iter()
            .find(|r| r.total_calls == r.phases)
            .unwrap()
            .avg_success;
        for row in &report.rows {
            assert!(
                row.avg_success <= single + 1e-12,
                "Σ√k = {sum}: {} gives {} over {single}",
                row.schedule,
                row.avg_success
            );
        }
    }
}

#[test]
fn frontier_past_quarter_pi_root_n_is_near_certain() {
    let n = 10;
    let spec = OracleSpec::standard(n).unwrap();
    let bound = (std::f64::consts::FRAC_PI_4 + 0.01) * ((1usize << n) as f64).sqrt();
    let schedules = tradeoff::family_schedules(Family::Frontier, n, 0).unwrap();
    let report = tradeoff::tradeoff_experiment(&spec, &schedules).unwrap();
    let above: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.sum_sqrt_k >= bound)
        .collect();
    assert!(!above.is_empty());
    for row in above {
        assert!(
            row.avg_success >= 0.9,
            "{}: {}",
            row.schedule,
            row.avg_success
        );
    }
}

#[test]
fn tradeoff_rows_are_sorted_probabilities() {
    let spec = OracleSpec::standard(6).unwrap();
    let schedules = tradeoff::family_schedules(Family::Serial, 6, 3).unwrap();
    let report = tradeoff::tradeoff_experiment(&spec, &schedules).unwrap();
    for pair in report.rows.windows(2) {
        assert!(pair[0].sum_sqrt_k <= pair[1].sum_sqrt_k);
    }
    for row in &report.rows {
        assert!((0.0..=1.0 + 1e-12).contains(&row.avg_success));
        assert!(row.min_success <= row.avg_success + 1e-12);
    }
}
