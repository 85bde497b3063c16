use qdepth::order_finding::{
    self, AncillaMode, Backend, FactorMethod, GroupSpec, OrderFindingPlan,
};
use qdepth::statevec::Distribution;
use qdepth::StateVector;

const MAX_WIDTH: usize = 24;

#[test]
fn eigenvectors_are_orthonormal() {
    for (m, g) in [(15, 2), (21, 2), (21, 5)] {
        let spec = GroupSpec::new(m, g).unwrap();
        let r = spec.order();
        let vs: Vec<StateVector> = (0..r).map(|k| spec.eigenvector(k).unwrap()).collect();
        for (i, u) in vs.iter().enumerate() {
            for (j, v) in vs.iter().enumerate() {
                let ip = u.inner_product(v).unwrap().norm();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (ip - want).abs() < 1e-12,
                    "M = {m}, g = {g}, ({i}, {j}): {ip}"
                );
            }
        }
    }
}

#[test]
fn modmul_fixes_non_group_labels() {
    let spec = GroupSpec::new(15, 2).unwrap();
    let p = spec.modmul_permutation(1).unwrap();
    assert_eq!(p.apply(7), 14);
    for x in [0, 3, 5, 6, 9, 10, 12, 15] {
        assert_eq!(p.apply(x), x);
    }
    assert!(spec.modmul_permutation(0).unwrap().is_identity());
}

#[test]
fn trivial_eigenvector_never_kicks() {
    let spec = GroupSpec::new(21, 2).unwrap();
    let plan = OrderFindingPlan::new(3, vec![1, 2, 5], AncillaMode::Eigenvector(0));
    let sets =
        order_finding::run_order_finding(&spec, &plan, Backend::Dense, 4, 50, MAX_WIDTH).unwrap();
    assert!(sets.iter().flat_map(|s| &s.samples).all(|s| s.x == 0));
}

#[test]
fn order_finding_metrics() {
    let spec = GroupSpec::new(15, 7).unwrap();
    let plan = OrderFindingPlan::new(2, vec![1, 2], AncillaMode::Label(1));
    let c = order_finding::build_order_finding_circuit(&spec, &plan, MAX_WIDTH).unwrap();
    let m = c.metrics().unwrap();
    assert_eq!(m.quantum_depth, 1);
    assert_eq!(m.quantum_depth + m.input_prep_depth, 2);
    assert_eq!(m.permutation_gates, 4);
}

/// Mixed-ancilla distribution from the coset structure: each unit label sits
/// on an `r`-cycle of `x ↦ g·x` and splits evenly over the `r` eigenvalues,
/// every other label is a fixed point and never kicks.
fn mixture_by_cosets(spec: &GroupSpec, plan: &OrderFindingPlan) -> Distribution {
    let n = plan.input_width();
    let labels = 1u64 << spec.bits;
    let units = (1..spec.modulus)
        .filter(|&y| gcd(y, spec.modulus) == 1)
        .count() as f64;
    let unit_share = units / labels as f64;
    let r = spec.order();
    let mut probs = vec![0.0; 1 << n];
    for k in 0..r {
        let eigen_plan =
            OrderFindingPlan::new(plan.b, plan.c_js.clone(), AncillaMode::Eigenvector(k));
        let d = order_finding::input_distribution(spec, &eigen_plan, MAX_WIDTH).unwrap();
        for (acc, p) in probs.iter_mut().zip(d.probabilities()) {
            *acc += unit_share / r as f64 * p;
        }
    }
    probs[0] += 1.0 - unit_share;
    Distribution::new(n, probs)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn mixed_ancilla_is_a_mixture_of_eigenvector_runs() {
    for (m, g) in [(15, 2), (15, 4), (15, 7), (21, 2), (21, 4)] {
        let spec = GroupSpec::new(m, g).unwrap();
        let plan = OrderFindingPlan::new(2, vec![1, 3, 5], AncillaMode::Mixed);
        let direct = order_finding::input_distribution(&spec, &plan, MAX_WIDTH).unwrap();
        let want = mixture_by_cosets(&spec, &plan);
        assert!(direct.total_variation(&want) < 1e-12, "M = {m}, g = {g}");
    }
}

#[test]
fn eigenbasis_sampling_matches_dense_sampling() {
    let spec = GroupSpec::new(15, 2).unwrap();
    let plan = OrderFindingPlan::new(3, vec![1, 2, 3], AncillaMode::Mixed);
    let trials = 20_000;
    let count = |backend| {
        let sets =
            order_finding::run_order_finding(&spec, &plan, backend, 9, trials, MAX_WIDTH).unwrap();
        let mut ones = [0usize; 3];
        for s in &sets {
            for (acc, x) in ones.iter_mut().zip(&s.samples) {
                *acc += x.x;
            }
        }
        ones.map(|o| o as f64 / (3 * trials) as f64)
    };
    let (dense, eigen) = (count(Backend::Dense), count(Backend::Eigenbasis));
    let exact = order_finding::wire_marginals(&spec, &plan).unwrap();
    for j in 0..3 {
        let p = exact[3 * j];
        let sigma = (p * (1.0 - p) / (3 * trials) as f64).sqrt().max(1e-9);
        assert!(
            (dense[j] - p).abs() < 5.0 * sigma,
            "dense block {j}: {} vs {p}",
            dense[j]
        );
        assert!(
            (eigen[j] - p).abs() < 5.0 * sigma,
            "eigen block {j}: {} vs {p}",
            eigen[j]
        );
    }
}

#[test]
fn factors_twenty_one_and_prime_powers() {
    let r = order_finding::factor(21, 2).unwrap();
    assert!(matches!(r.factor, Some(3) | Some(7)), "{r:?}");
    assert_eq!(r.method, FactorMethod::OrderFinding);
    let r = order_finding::factor(9, 0).unwrap();
    assert_eq!((r.factor, r.method), (Some(3), FactorMethod::PrimePower));
    assert_eq!(order_finding::factor(23, 0).unwrap().factor, None);
}
