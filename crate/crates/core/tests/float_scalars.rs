mod common;

use common::*;
use emms_core::claiming::{run_bc, PartitionSource};
use emms_core::fairness::{average_share, emms, EmmsMode};
use emms_core::generate::{generate_random, ExperimentConfig};
use emms_core::scalar::Scalar;
use emms_core::{ExactInstance, FloatInstance, Rational, SingleInstance};
use num_rational::Ratio;

const CAP: u64 = 1_000_000;

fn to_f64(inst: &ExactInstance) -> FloatInstance {
    inst.convert(Scalar::to_f64_lossy).unwrap()
}

#[test]
fn float_emms_tracks_the_exact_value() {
    let config = ExperimentConfig { seed: 9, instances: 30, agents: (2, 4), items: (2, 6), ..ExperimentConfig::default() };
    for inst in generate_random(&config).unwrap() {
        let float = to_f64(&inst);
        for i in 0..inst.agents() {
            let exact = emms(&inst, i, EmmsMode::Exact { cap: CAP }).unwrap().value.to_f64_lossy();
            let approx = emms(&float, i, EmmsMode::Exact { cap: CAP }).unwrap().value;
            assert!((exact - approx).abs() <= 1e-9 * exact.max(1.0), "{exact} vs {approx}");
            let avg = average_share(&inst, i).to_f64_lossy();
            assert!((avg - average_share(&float, i)).abs() <= 1e-9 * avg.max(1.0));
        }
    }
}

#[test]
fn bundle_claiming_runs_on_f64_and_f32() {
    let exact = ExactInstance::network(
        vec![ints(&[4, 3, 2, 1]), ints(&[4, 3, 2, 1])],
        vec![vec![q(4, 5), q(1, 5)], vec![q(1, 5), q(4, 5)]],
    )
    .unwrap();
    let float = run_bc(&to_f64(&exact), PartitionSource::Exact { cap: CAP }).unwrap();
    assert!((float.allocation.utilities[0] - 4.4).abs() < 1e-12);
    assert!((float.allocation.utilities[1] - 5.6).abs() < 1e-12);

    let single: SingleInstance = exact.convert(|x: &Rational| x.to_f64_lossy() as f32).unwrap();
    let outcome = run_bc(&single, PartitionSource::Lpt).unwrap();
    assert!(outcome.trace.all_checks_hold());
}

#[test]
fn machine_rationals_agree_with_big_rationals() {
    let exact = gap_instance_exact();
    let small = exact
        .convert(|x: &Rational| Ratio::new(x.numer().try_into().unwrap(), x.denom().try_into().unwrap()))
        .unwrap();
    let a = emms(&exact, 0, EmmsMode::Exact { cap: CAP }).unwrap().value;
    let b: Ratio<i64> = emms(&small, 0, EmmsMode::Exact { cap: CAP }).unwrap().value;
    assert_eq!((a.numer().try_into().unwrap(), a.denom().try_into().unwrap()), (*b.numer(), *b.denom()));
}

fn gap_instance_exact() -> ExactInstance {
    emms_core::fairness::gap_instance(q(10, 1), q(1, 10)).unwrap()
}
