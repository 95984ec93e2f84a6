mod common;

use std::path::PathBuf;

use common::*;
use emms_core::claiming::{cut_and_choose, run_bc, PartitionSource};
use emms_core::experiment::run_experiment;
use emms_core::fairness::{check_allocation, EmmsMode};
use emms_core::generate::{ExperimentConfig, Strategy};
use emms_core::io::{instance_to_json, parse_instance, read_instance, write_instance};
use emms_core::{ExactInstance, Partition};

const CAP: u64 = 1_000_000;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

#[test]
fn figure_one_influence_vectors() {
    let inst = read_instance(data("figure1.json")).unwrap();
    assert_eq!(inst.influence_vector(3).unwrap().into_entries(), vec![q(0, 1), q(0, 1), q(1, 10), q(2, 5), q(1, 2)]);
    assert_eq!(inst.influence_vector(4).unwrap().into_entries(), vec![q(0, 1), q(0, 1), q(1, 5), q(1, 4), q(11, 20)]);
    // agent 0 keeps 0.8 of its own bundle and gets 0.2 of agent 1's
    assert_eq!(inst.bundle_value(0, 0, &[0]) + inst.bundle_value(1, 0, &[1]), q(9, 1));
}

#[test]
fn figure_one_round_trips_through_a_file() {
    let inst = read_instance(data("figure1.json")).unwrap();
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("figure1-roundtrip.json");
    write_instance(&inst, &path).unwrap();
    assert_eq!(read_instance(&path).unwrap(), inst);
    assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
}

#[test]
fn pair_fixture_allocation_verifies_at_alpha_point_four() {
    let inst = read_instance(data("pair.json")).unwrap();
    let outcome = run_bc(&inst, PartitionSource::Exact { cap: CAP }).unwrap();
    let report = check_allocation(
        &inst,
        &outcome.partition,
        &outcome.allocation.assignment,
        &q(2, 5),
        EmmsMode::Exact { cap: CAP },
    )
    .unwrap();
    assert!(report.all_pass());
    assert_eq!(outcome.allocation.utilities, vec![q(22, 5), q(28, 5)]);
}

fn check_cut_and_choose(inst: &ExactInstance) {
    let (partition, allocation) = cut_and_choose(inst, CAP).unwrap();
    for i in 0..2 {
        let oracle = emms_by_enumeration(inst, i);
        assert!(allocation.utilities[i] >= oracle, "agent {i}: {} < {oracle}", allocation.utilities[i]);
        assert_eq!(allocation.utilities[i], utility(inst, partition.bundles(), &allocation.assignment, i));
    }
}

#[test]
fn cut_and_choose_single_item_without_cross_value() {
    let inst = ExactInstance::independent(vec![ints(&[5]), ints(&[3])]).unwrap();
    check_cut_and_choose(&inst);
    let (partition, allocation) = cut_and_choose(&inst, CAP).unwrap();
    // agent 1 takes the non-empty bundle
    let k = allocation.assignment.iter().position(|&a| a == 1).unwrap();
    assert_eq!(partition.bundles()[k], vec![0]);
}

#[test]
fn cut_and_choose_asymmetric_values() {
    let values = vec![ints(&[6, 1, 1]), ints(&[2, 2, 2])];
    check_cut_and_choose(&ExactInstance::independent(values.clone()).unwrap());
    let weights = vec![vec![q(4, 5), q(1, 5)], vec![q(1, 5), q(4, 5)]];
    check_cut_and_choose(&ExactInstance::network(values, weights).unwrap());
}

#[test]
fn experiment_ratio_columns_respect_the_bounds() {
    let base = ExperimentConfig {
        seed: 21,
        instances: 100,
        agents: (2, 4),
        items: (4, 7),
        beta: q(7, 10),
        alpha: Some(q(7, 10)),
        ..ExperimentConfig::default()
    };
    for (strategy, floor) in [(Strategy::BcExact, q(7, 20)), (Strategy::BcLpt, q(7, 40))] {
        let report = run_experiment(&ExperimentConfig { strategies: vec![strategy], ..base.clone() }).unwrap();
        assert!(report.all_pass());
        for row in &report.rows {
            if let Some(r) = row.ratio() {
                assert!(r >= floor, "{row:?}");
            }
        }
        assert!(report.summary[0].min_ratio.unwrap() >= 0.35 / if strategy == Strategy::BcLpt { 2.0 } else { 1.0 });
    }
}

#[test]
fn experiment_emms_column_matches_the_oracle() {
    let config = ExperimentConfig { seed: 4, instances: 12, agents: (2, 3), items: (3, 6), ..ExperimentConfig::default() };
    let report = run_experiment(&config).unwrap();
    let instances: Vec<ExactInstance> = emms_core::generate_random(&config).unwrap().collect();
    for row in &report.rows {
        assert_eq!(row.emms, NetworkOracle::new(&instances[row.instance], row.agent).emms());
    }
}

#[test]
fn partition_rejects_overlap_and_gaps() {
    assert!(Partition::new(vec![vec![0, 1], vec![1]], 2).is_err());
    assert!(Partition::new(vec![vec![0], vec![]], 2).is_err());
}
