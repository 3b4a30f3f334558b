//! Edge-set distributions of every generator against exact enumeration.

use polypa_core::par::{generate_par_with, Executor};
use polypa_core::verify::{
    chi_square_counts, edge_set_distribution, exact_edge_set_distribution, standard_configs,
    tv_to_exact, Algorithm, SIGNIFICANCE,
};
use polypa_core::{GenConfig, Graph, Result};

const RUNS: u64 = 200_000;
// Roughly four standard errors of the TV estimate for up to 150 outcomes.
const TOLERANCE: f64 = 0.02;

fn check(name: &str, generator: impl Fn(&Graph, &GenConfig) -> Result<Graph> + Sync, workers: usize) {
    for sc in standard_configs() {
        let seed = sc.seed_graph().unwrap();
        let cfg = sc.gen_config().unwrap().with_workers(workers);
        let exact = exact_edge_set_distribution(&seed, &cfg).unwrap();
        let h = edge_set_distribution(&generator, &seed, &cfg, RUNS, 77).unwrap();
        let tv = tv_to_exact(&h, &exact);
        let observed: Vec<u64> = exact.keys().map(|k| h.count(k)).collect();
        let probs: Vec<f64> = exact.values().copied().collect();
        let chi = chi_square_counts(&observed, &probs).unwrap();
        println!(
            "{name} {} tv={tv:.5} outcomes={} p={:.4}",
            sc.id,
            exact.len(),
            chi.p_value
        );
        assert!(tv < TOLERANCE, "{name} config {}: tv {tv}", sc.id);
        assert_eq!(observed.iter().sum::<u64>(), RUNS, "{name} config {}: unexpected outcome", sc.id);
        assert!(chi.p_value > SIGNIFICANCE, "{name} config {}: p {}", sc.id, chi.p_value);
    }
}

#[test]
fn reference_matches_exact() {
    check("ref", |g, c| Algorithm::Ref.generate(g, c), 1);
}

#[test]
fn sequential_matches_exact() {
    check("seq", |g, c| Algorithm::Seq.generate(g, c), 1);
}

#[test]
fn em_matches_exact() {
    check("em", |g, c| Algorithm::Em.generate(g, c), 1);
}

#[test]
fn parallel_matches_exact() {
    for workers in [1, 2, 4] {
        check(
            &format!("par{workers}"),
            |g, c| generate_par_with(g, c, Executor::Inline).map(|(g, _)| g),
            workers,
        );
    }
}

#[test]
fn parallel_threads_match_exact() {
    check("par2-threads", |g, c| Algorithm::Par.generate(g, c), 2);
}
