mod common;

use std::collections::BTreeSet;

use gkc_core::classical;
use gkc_core::grover::{assemble, build_diffusion, optimal_iterations, success_probability};
use gkc_core::sim::{distance_up_to_global_phase, run, top_states, unitary_of, Initial};
use gkc_core::{build_grover, build_oracle, Graph, Instance, OracleMode};

fn solution_mass(job: &gkc_core::GroverJob, solutions: &BTreeSet<String>) -> f64 {
    let data: Vec<usize> = job.layout().data.clone().collect();
    let dist = run(&job.circuit, Initial::Declared).unwrap().probabilities(&data);
    dist.iter()
        .enumerate()
        .filter(|(i, _)| solutions.contains(&gkc_core::sim::bitstring(*i, data.len())))
        .map(|(_, p)| p)
        .sum()
}

#[test]
fn diffusion_matches_reflection_formula() {
    for m in 1..=4 {
        let u = unitary_of(&build_diffusion(m)).unwrap();
        let want = common::diff_matrix(1 << m);
        let err = distance_up_to_global_phase(&common::flat(&want), &common::flat(&u));
        assert!(err < 1e-9, "m={m}: deviation {err}");
    }
}

#[test]
fn iteration_count_examples() {
    assert_eq!(optimal_iterations(64, 6).unwrap(), 2);
    assert_eq!(optimal_iterations(4, 1).unwrap(), 1);
    assert_eq!(optimal_iterations(8, 8).unwrap(), 0);
}

#[test]
fn k3_amplification() {
    let inst = Instance::new(Graph::complete(3).unwrap(), 3).unwrap();
    let sols = classical::solutions(&inst).unwrap();
    let job = build_grover(&inst, OracleMode::Strict, None).unwrap();
    assert_eq!((job.iterations, job.solution_count), (2, Some(6)));
    let mass = solution_mass(&job, &sols.bitstrings);
    let closed = success_probability(64, 6, 2);
    assert!(mass >= 0.99);
    assert!((mass - closed).abs() < 1e-6, "simulated {mass}, closed form {closed}");

    let data: Vec<usize> = job.layout().data.clone().collect();
    let dist = run(&job.circuit, Initial::Declared).unwrap().probabilities(&data);
    let top: BTreeSet<String> = top_states(&dist, data.len(), 6).into_iter().map(|(s, _)| s).collect();
    assert_eq!(top, sols.bitstrings);
}

#[test]
fn path_two_coloring_is_certain_after_one_round() {
    let inst = Instance::new(Graph::path(3).unwrap(), 2).unwrap();
    let sols = classical::solutions(&inst).unwrap();
    let job = build_grover(&inst, OracleMode::Strict, None).unwrap();
    assert_eq!(job.iterations, 1);
    assert!((solution_mass(&job, &sols.bitstrings) - 1.0).abs() < 1e-9);
}

#[test]
fn simulation_matches_closed_form() {
    let mut checked = 0;
    for n in 1..=3 {
        for g in common::all_graphs(n) {
            for k in [2, 3, 4] {
                let inst = Instance::new(g.clone(), k).unwrap();
                let sols = classical::solutions(&inst).unwrap();
                if sols.count() == 0 {
                    continue;
                }
                for t in 0..=3 {
                    let job = build_grover(&inst, OracleMode::Strict, Some(t)).unwrap();
                    let mass = solution_mass(&job, &sols.bitstrings);
                    let closed = success_probability(sols.search_space, sols.count(), t);
                    assert!((mass - closed).abs() < 1e-6, "{g} k={k} t={t}: {mass} vs {closed}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn one_round_amplifies_when_solutions_are_rare() {
    for n in 1..=3 {
        for g in common::all_graphs(n) {
            for k in [2, 3] {
                let inst = Instance::new(g.clone(), k).unwrap();
                let sols = classical::solutions(&inst).unwrap();
                let (m, big_n) = (sols.count(), sols.search_space);
                if m == 0 || 2 * m >= big_n {
                    continue;
                }
                let oracle = build_oracle(&inst, OracleMode::Strict);
                let before = {
                    let job = gkc_core::GroverJob {
                        circuit: assemble(&oracle, 0),
                        oracle: oracle.clone(),
                        iterations: 0,
                        solution_count: None,
                    };
                    solution_mass(&job, &sols.bitstrings)
                };
                let after = {
                    let job = gkc_core::GroverJob {
                        circuit: assemble(&oracle, 1),
                        oracle: oracle.clone(),
                        iterations: 1,
                        solution_count: None,
                    };
                    solution_mass(&job, &sols.bitstrings)
                };
                assert!(after > before, "{g} k={k}: {before} -> {after}");
            }
        }
    }
}

#[test]
fn zero_rounds_is_uniform() {
    let inst = Instance::new(Graph::complete(3).unwrap(), 3).unwrap();
    let job = build_grover(&inst, OracleMode::Paper, Some(0)).unwrap();
    let data: Vec<usize> = job.layout().data.clone().collect();
    let dist = run(&job.circuit, Initial::Declared).unwrap().probabilities(&data);
    assert!(dist.iter().all(|p| (p - 1.0 / 64.0).abs() < 1e-12));
}
