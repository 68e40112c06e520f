use isac_relay::bounds::{cd_class_c4, min_distortion_certified, BoundKind, BoundProblem, Cardinalities};
use isac_relay::channel::json::{spec_from_json, spec_to_json};
use isac_relay::channel::{make_example5, make_example6, names::*};
use isac_relay::estimator::optimal_estimator;
use isac_relay::montecarlo::{exact_distortion, simulate_distortion, SimConfig};
use isac_relay::optimizer::{AuxCardinalities, OptimizerConfig};
use isac_relay::Error;

#[test]
fn json_channel_gives_the_same_bound() {
    let spec = make_example5(0.5, 0.2).unwrap();
    let back = spec_from_json(&spec_to_json(&spec)).unwrap();
    let cfg = OptimizerConfig::default();
    let a = cd_class_c4(&spec, 0.2, &cfg).unwrap();
    let b = cd_class_c4(&back, 0.2, &cfg).unwrap();
    assert_eq!(a.best_value, b.best_value);
    assert!(a.distortion.unwrap() <= 0.2 + 1e-9);
}

#[test]
fn certificate_distortion_is_reproduced_by_simulation() {
    let spec = make_example6(0.9, 0.8, 0.5).unwrap();
    let cfg = OptimizerConfig {
        random_samples: 2_000,
        cardinalities: AuxCardinalities {
            v: Some(2),
            ..Default::default()
        },
        ..OptimizerConfig::default()
    };
    let res = min_distortion_certified(&spec, &cfg).unwrap();
    assert!(res.feasible);
    // observing X as well can only help the estimator
    let probe = isac_relay::estimator::EstimatorTable::constant(vec![], SD, spec.shat().clone(), 0).unwrap();
    let joint = isac_relay::montecarlo::simulation_joint(&spec, &res.best_input, &probe).unwrap();
    let est = optimal_estimator(&joint, &[X, X1, Y, V], SD, spec.distortion()).unwrap();
    let exact = exact_distortion(&spec, &res.best_input, &est).unwrap();
    assert!(exact <= res.distortion.unwrap() + 1e-12);
    let (mean, ci) = simulate_distortion(
        &spec,
        &res.best_input,
        &est,
        &SimConfig {
            samples: 100_000,
            rng_seed: 4,
            batches: 20,
        },
    )
    .unwrap();
    assert!((mean - exact).abs() <= ci + 1e-12, "{mean} +- {ci} vs {exact}");
}

#[test]
fn class_kinds_refuse_untagged_channels() {
    let spec = make_example5(0.5, 0.2).unwrap();
    let cards = Cardinalities::resolve(&spec, &AuxCardinalities::default());
    let err = BoundProblem::new(&spec, BoundKind::CdC5, Some(0.1), cards).unwrap_err();
    assert!(matches!(err, Error::Spec(_)));
}
