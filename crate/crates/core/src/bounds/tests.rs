use super::*;
use crate::channel::{
    hamming, make_appendix_c_counterexample, make_example1, make_example4, make_example5,
    make_example6, make_sensing_mac, StructureTags,
};
use crate::prob::ConditionalKernel;

fn quick() -> OptimizerConfig {
    OptimizerConfig {
        random_samples: 2_000,
        refine_iterations: 300,
        ..OptimizerConfig::default()
    }
}

fn small_aux(cfg: OptimizerConfig, n: usize) -> OptimizerConfig {
    OptimizerConfig {
        cardinalities: AuxCardinalities {
            t: Some(n),
            v: Some(n),
            u: Some(n),
            a: Some(n),
        },
        ..cfg
    }
}

fn bern(p: f64) -> Vec<f64> {
    vec![1.0 - p, p]
}

fn nlog(ps: &[f64]) -> f64 {
    ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

fn input_for(spec: &RelayChannelSpec, kind: BoundKind, rows: Vec<Vec<f64>>) -> FactoredInput {
    let cards = Cardinalities::resolve(spec, &AuxCardinalities::default());
    let (t, _) = template(spec, kind, cards).unwrap();
    t.with_theta(rows.concat()).unwrap()
}

fn problem(spec: &RelayChannelSpec, kind: BoundKind, d: Option<f64>) -> BoundProblem {
    let cards = Cardinalities::resolve(spec, &AuxCardinalities::default());
    BoundProblem::new_unseeded(spec, kind, d, cards).unwrap()
}

#[test]
fn kinds_round_trip_through_names() {
    for k in BoundKind::ALL {
        assert_eq!(BoundKind::parse(k.name()).unwrap(), k);
    }
    assert!(BoundKind::parse("nope").is_err());
    assert!(BoundKind::UpperThm1.label().contains("estimate"));
}

#[test]
fn default_cardinalities() {
    let c = Cardinalities::resolve(&make_example1(0.9, 0.1, 0.9).unwrap(), &AuxCardinalities::default());
    assert_eq!((c.t, c.v, c.u, c.a), (8, 8, 4, 4));
    let c = Cardinalities::resolve(
        &make_example5(0.5, 0.2).unwrap(),
        &AuxCardinalities {
            v: Some(3),
            ..Default::default()
        },
    );
    assert_eq!((c.t, c.v, c.u, c.a), (8, 3, 4, 4));
}

#[test]
fn class_kinds_need_tags() {
    let spec = make_example1(0.9, 0.1, 0.9).unwrap();
    let cards = Cardinalities::resolve(&spec, &AuxCardinalities::default());
    for k in [BoundKind::CdC3, BoundKind::CdC4, BoundKind::CdC5, BoundKind::DminProp1] {
        let d = (!k.is_dmin()).then_some(0.1);
        assert!(matches!(BoundProblem::new(&spec, k, d, cards), Err(Error::Spec(_))), "{k:?}");
    }
    assert!(BoundProblem::new(&spec, BoundKind::LowerThm2, None, cards).is_err());
    assert!(BoundProblem::new(&spec, BoundKind::LowerThm2, Some(-0.1), cards).is_err());
    assert!(BoundProblem::new(&spec, BoundKind::DminThm3, Some(0.1), cards).is_err());
}

#[test]
fn example4_closed_form_matches_tensor_terms() {
    let (ps1, ps2, ps3) = (0.4, 0.2, 0.6);
    let spec = make_example4(ps1, ps2, ps3).unwrap();
    let p = problem(&spec, BoundKind::CdC3, Some(1.0));
    let pts = [
        [0.3, 0.4, 0.4, 0.5, 0.4],
        [0.0, 0.2, 0.9, 1.0, 0.0],
        [1.0, 1.0, 0.0, 0.25, 0.75],
        [0.61, 0.13, 0.77, 0.05, 0.98],
    ];
    for [a, b, c, d, e] in pts {
        let input = input_for(&spec, BoundKind::CdC3, vec![bern(a), bern(c), bern(b), bern(e), bern(d)]);
        let joint = p.joint(&input).unwrap();
        let mut iv = joint.info();
        let alpha = iv.mi("Xd X1", "Y", "").unwrap();
        let beta = iv.mi("Xr", "Y1", "X1").unwrap() + iv.mi("Xd", "Y", "X1").unwrap();
        let dist = bayes_risk(&joint, &[XD, X1, Y], SD, spec.distortion()).unwrap();
        let (ca, cb, cd) = example4_closed_form(a, b, c, d, e, ps1, ps2, ps3).unwrap();
        assert!((ca - alpha).abs() < 1e-10, "alpha {ca} vs {alpha}");
        assert!((cb - beta).abs() < 1e-10, "beta {cb} vs {beta}");
        assert!((cd - dist).abs() < 1e-10, "distortion {cd} vs {dist}");
    }
}

#[test]
fn example4_distortion_corner() {
    // (a, d) = (1, 1): min{0.8 * 0.6, 0.2 * 0.4}
    let (_, _, dist) = example4_closed_form(1.0, 0.3, 0.3, 1.0, 0.3, 0.4, 0.2, 0.6).unwrap();
    assert!((dist - 0.08).abs() < 1e-15);
    assert!(example4_closed_form(1.2, 0.0, 0.0, 0.0, 0.0, 0.4, 0.2, 0.6).is_err());
}

#[test]
fn example5_closed_form_matches_tensor_terms() {
    let (ps, pn) = (0.5, 0.2);
    let spec = make_example5(ps, pn).unwrap();
    let p = problem(&spec, BoundKind::CdC4, Some(1.0));
    for (a, b) in [(0.5, 0.5), (0.0, 0.3), (1.0, 0.9), (0.27, 0.64)] {
        let input = input_for(&spec, BoundKind::CdC4, vec![bern(a), bern(b)]);
        let joint = p.joint(&input).unwrap();
        let mut iv = joint.info();
        let r1 = iv.mi("X", "Y1 Yd", "").unwrap();
        let r2 = iv.mi("X1", "Yr", "").unwrap() + iv.mi("X", "Yd", "").unwrap();
        let dist = bayes_risk(&joint, &[X, YD], SD, spec.distortion()).unwrap();
        let (c1, c2, cd) = example5_closed_form(a, b, ps, pn).unwrap();
        assert!((c1 - r1).abs() < 1e-10 && (c2 - r2).abs() < 1e-10 && (cd - dist).abs() < 1e-10);
    }
}

#[test]
fn example5_hand_values() {
    let (r1, r2, dist) = example5_closed_form(1.0, 0.5, 0.5, 0.2).unwrap();
    assert_eq!((r1, dist), (0.0, 0.0));
    assert!(r2 > 0.0);
    // b = a = 1/2: 1 - H(0.2) + H(0.25) - 1/2 from raw entropy sums
    let want = 1.0 - nlog(&[0.2, 0.8]) + nlog(&[0.25, 0.75]) - 0.5;
    let (_, r2, _) = example5_closed_form(0.5, 0.5, 0.5, 0.2).unwrap();
    assert!((r2 - want).abs() < 1e-12);
    assert!((r2 - 0.5894).abs() < 1e-4);
}

#[test]
fn example6_closed_form_matches_tensor_terms() {
    let (ps1, ps2, ps3) = (0.9, 0.8, 0.5);
    let spec = make_example6(ps1, ps2, ps3).unwrap();
    let p = problem(&spec, BoundKind::CdC5, Some(1.0));
    let pts = [
        [0.5, 0.5, 0.5, 0.2, 0.3, 0.9],
        [1.0, 0.4, 0.6, 0.5, 0.0, 1.0],
        [0.0, 1.0, 0.0, 0.7, 0.1, 0.2],
        [0.33, 0.71, 0.18, 0.95, 0.41, 0.62],
    ];
    for [a, b, c, d, e, f] in pts {
        let input = input_for(
            &spec,
            BoundKind::CdC5,
            vec![bern(a), bern(b), bern(c), bern(d), bern(d), bern(e), bern(f)],
        );
        let joint = p.joint(&input).unwrap();
        let mut iv = joint.info();
        let alpha = iv.mi("Xd", "Yd", "").unwrap();
        let beta = iv.mi("Xr", "Y1", "").unwrap();
        let gamma = iv.mi("X1", "Yr", "").unwrap();
        let eta = iv.mi("Shat", "Y1", "Xr").unwrap();
        let dist = distortion_of_variable(&joint, SD, SHAT, spec.distortion()).unwrap();
        let got = example6_closed_form(a, b, c, d, e, f, ps1, ps2, ps3).unwrap();
        for (x, y) in [(got.0, alpha), (got.1, beta), (got.2, gamma), (got.3, eta), (got.4, dist)] {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }
}

#[test]
fn example6_hand_values() {
    let (alpha, ..) = example6_closed_form(0.3, 0.5, 0.5, 0.0, 0.0, 0.0, 0.9, 0.8, 0.5).unwrap();
    let want = nlog(&[0.25, 0.75]) - 0.5;
    assert!((alpha - want).abs() < 1e-12 && (alpha - 0.3113).abs() < 1e-4);
    let (.., dist) = example6_closed_form(1.0, 0.5, 0.5, 0.37, 0.0, 1.0, 0.9, 0.8, 0.5).unwrap();
    assert_eq!(dist, 0.0);
}

#[test]
fn gaussian_formulas() {
    assert_eq!(gaussian_dmin_example2(1.0, 1.0, 1.0).unwrap(), 1.0 / 3.0);
    let mut prev = f64::INFINITY;
    for k in 0..30 {
        let v = gaussian_dmin_example3(10f64.powi(k - 5), 2.0, 3.0).unwrap();
        assert!(v < prev);
        prev = v;
    }
    assert!(prev < 1e-20);
    for (p1, s1, s2) in [(0.1, 2.0, 3.0), (5.0, 0.5, 0.1), (1e3, 1.0, 1.0)] {
        assert!(gaussian_dmin_example2(p1, s1, s2).unwrap() <= s1 * s2 / (s1 + s2));
    }
    assert!(gaussian_dmin_example2(0.0, 1.0, 1.0).is_err());
    assert!(gaussian_dmin_example3(1.0, -1.0, 1.0).is_err());
}

#[test]
fn class_c4_reaches_capacity_and_zero_at_perfect_sensing() {
    let spec = make_example5(0.5, 0.2).unwrap();
    let cfg = OptimizerConfig::default();
    let top = cd_class_c4(&spec, 0.5, &cfg).unwrap();
    assert!(top.feasible && (top.best_value - 0.6).abs() < 1e-3, "{}", top.best_value);
    let closed = maximize(&ClosedFormProblem::new(ClosedFormExample::Example5, &[0.5, 0.2], 0.5).unwrap(), &cfg);
    assert!((closed.best_value - top.best_value).abs() < 1e-4);
    // slack 1e-9 lets a = 1 - 2e-9 through, and h2 is steep there
    let zero = cd_class_c4(&spec, 0.0, &cfg).unwrap();
    assert!(zero.feasible && zero.best_value.abs() < 1e-6, "{}", zero.best_value);
}

#[test]
fn class_c3_agrees_with_its_closed_form() {
    let spec = make_example4(0.4, 0.2, 0.6).unwrap();
    let cfg = OptimizerConfig::default();
    let general = cd_class_c3(&spec, 0.2, &cfg).unwrap();
    let closed = maximize(
        &ClosedFormProblem::new(ClosedFormExample::Example4, &[0.4, 0.2, 0.6], 0.2).unwrap(),
        &cfg,
    );
    assert!(general.feasible && closed.feasible);
    assert!((general.best_value - closed.best_value).abs() < 1e-4, "{} vs {}", general.best_value, closed.best_value);
    let zero = cd_class_c3(&spec, 0.0, &cfg).unwrap();
    assert!(zero.feasible && zero.best_value.abs() < 1e-6);
}

#[test]
fn class_c5_sensing_point() {
    let spec = make_example6(0.9, 0.8, 0.5).unwrap();
    let cfg = quick();
    let r = cd_class_c5(&spec, 0.0, &cfg).unwrap();
    // a = 1, Shat = Y1: rate max_b H2(b/2) - b = log2(5/4)
    let want = (1.25f64).log2();
    assert!(r.feasible && (r.best_value - want).abs() < 1e-4, "{}", r.best_value);
    let closed = maximize(
        &ClosedFormProblem::new(ClosedFormExample::Example6, &[0.9, 0.8, 0.5], 0.0).unwrap(),
        &cfg,
    );
    assert!((closed.best_value - r.best_value).abs() < 1e-4);
}

#[test]
fn sensing_optimal_minimum_distortion() {
    let cfg = quick();
    let ex1 = make_example1(0.9, 0.1, 0.9).unwrap();
    assert!(min_distortion(&ex1, &cfg).unwrap() < 1e-6);
    let ex6 = make_example6(0.9, 0.8, 0.5).unwrap();
    assert!(min_distortion(&ex6, &cfg).unwrap() < 1e-6);
    assert!(dmin_class_c2(&ex6, &cfg).unwrap() < 1e-6);
    assert!(dmin_class_c2(&ex1, &cfg).unwrap() < 1e-6);
}

#[test]
fn dead_relay_link_leaves_prior_risk() {
    let spec = make_example6(0.9, 0.0, 0.5).unwrap();
    let d = dmin_class_c2(&spec, &quick()).unwrap();
    assert!((d - 0.1).abs() < 1e-6, "{d}");
}

#[test]
fn independent_state_gives_prior_risk() {
    // Y, Y1 ignore the state entirely.
    let kernel = ConditionalKernel::deterministic(
        vec![Alphabet::binary(X), Alphabet::binary(X1), Alphabet::binary(S)],
        vec![Alphabet::binary(Y), Alphabet::binary(Y1)],
        |g| vec![g[0] ^ g[1], g[0]],
    )
    .unwrap();
    let law = JointDistribution::from_fn(vec![Alphabet::binary(S), Alphabet::binary(SD)], |t| {
        if t[0] == t[1] {
            [0.7, 0.3][t[0]]
        } else {
            0.0
        }
    })
    .unwrap();
    let spec = RelayChannelSpec::new(kernel, law, hamming(2), StructureTags::default()).unwrap();
    let d = min_distortion(&spec, &quick()).unwrap();
    assert!((d - 0.3).abs() < 1e-9 && (spec.prior_risk() - 0.3).abs() < 1e-15);
}

#[test]
fn class_c1_exhaustive_search() {
    let mac = make_sensing_mac(0.5, 0.5, 0.5, 0.5).unwrap();
    assert_eq!(dmin_class_c1(&mac).unwrap(), (0.0, 1, 0));
    let ex4 = make_example4(0.4, 0.2, 0.6).unwrap();
    let (d, x, x1) = dmin_class_c1(&ex4).unwrap();
    assert_eq!(d, 0.0);
    assert_eq!((x % 2, x1), (1, 0));
    // all-zero inputs: nothing observed, prior risk min(P, 1 - P)
    let p = problem(&mac, BoundKind::DminProp1, None);
    let zero = input_for(&mac, BoundKind::DminProp1, vec![vertex(4, 0)]);
    assert!((p.evaluate(&zero).distortion.unwrap() - 0.5).abs() < 1e-15);
    // brute force agreement
    let brute = (0..4)
        .map(|i| p.evaluate(&input_for(&mac, BoundKind::DminProp1, vec![vertex(4, i)])).distortion.unwrap())
        .fold(f64::INFINITY, f64::min);
    assert_eq!(brute, dmin_class_c1(&mac).unwrap().0);
}

#[test]
fn minimum_distortion_agrees_with_class_results() {
    let cfg = quick();
    for spec in [make_sensing_mac(0.3, 0.6, 0.2, 0.7).unwrap(), make_example4(0.4, 0.2, 0.6).unwrap()] {
        let a = min_distortion(&spec, &cfg).unwrap();
        let b = dmin_class_c1(&spec).unwrap().0;
        assert!((a - b).abs() < 1e-4, "{a} vs {b}");
    }
}

#[test]
fn appendix_c_assignment_is_the_separation_point() {
    let spec = make_appendix_c_counterexample().unwrap();
    let cards = Cardinalities::resolve(&spec, &AuxCardinalities::default());
    let input = appendix_c_assignment(&spec, cards).unwrap();
    let ours = certify(&spec, BoundKind::LowerThm2, Some(0.0), &input).unwrap();
    assert!((ours.objective - 0.5).abs() < 1e-9, "{}", ours.objective);
    assert!(ours.feasible(1e-9));
    assert!(ours.distortion.unwrap().abs() < 1e-15);
    let cmg = certify(&spec, BoundKind::LowerCmg, Some(0.0), &input).unwrap();
    assert!(!cmg.feasible(1e-9));
}

#[test]
fn collapsed_auxiliaries_give_direct_transmission() {
    let spec = make_example1(0.9, 0.1, 0.9).unwrap();
    let cards = Cardinalities {
        t: 2,
        v: 2,
        u: 2,
        a: 2,
    };
    let (t, _) = template(&spec, BoundKind::LowerThm2, cards).unwrap();
    let input = collapsed_scheme(&t, &[0.4, 0.6], &[0.0, 1.0], |_| 0).unwrap();
    let terms = scheme_terms(&spec, &input).unwrap();
    let pxx1 = FactoredInput::new(vec![InputFactor::joint(
        "P_XX1",
        vec![spec.x().clone(), spec.x1().clone()],
    )])
    .with_theta(vec![0.0, 0.4, 0.0, 0.6])
    .unwrap();
    let direct = spec.assemble_joint(&pxx1).unwrap().info().mi("X", "Y", "X1").unwrap();
    assert!((terms.rate_ours() - direct).abs() < 1e-12);
    assert!(terms.constraint_ours().abs() < 1e-12);
}

#[test]
fn lifted_inputs_dominate() {
    let spec = make_example1(0.9, 0.1, 0.9).unwrap();
    let cards = Cardinalities {
        t: 1,
        v: 2,
        u: 2,
        a: 2,
    };
    let (t, _) = template(&spec, BoundKind::LowerThm2, cards).unwrap();
    let lower = BoundProblem::new_unseeded(&spec, BoundKind::LowerThm2, Some(0.2), cards).unwrap();
    for i in 0..40 {
        let input = random_scheme_input(&t, 1000 + i).unwrap();
        let lo = lower.try_evaluate(&input).unwrap();
        let lifted = lift_lower_to_upper(&spec, &input).unwrap();
        let up = certify(&spec, BoundKind::UpperThm1, Some(0.2), &lifted).unwrap();
        assert!(up.objective >= lo.objective - 1e-10, "{} < {}", up.objective, lo.objective);
        assert!(up.constraints[0] >= lo.constraints[0].min(0.0) - 1e-10 || lo.constraints[0] < 0.0);
        assert!(up.distortion.unwrap() <= lo.distortion.unwrap() + 1e-12);
    }
}

#[test]
fn split_rates_eliminate_to_the_reduced_region() {
    let spec = make_example1(0.9, 0.1, 0.9).unwrap();
    let cards = Cardinalities {
        t: 1,
        v: 3,
        u: 2,
        a: 2,
    };
    let (t, _) = template(&spec, BoundKind::LowerThm2, cards).unwrap();
    let mut compared = 0;
    for i in 0..200 {
        let terms = scheme_terms(&spec, &random_scheme_input(&t, i).unwrap()).unwrap();
        if let Some(r) = pre_fme_rate(&terms) {
            assert!((r - terms.rate_ours()).abs() < 1e-9, "{r} vs {}", terms.rate_ours());
            compared += 1;
        } else {
            assert!(terms.constraint_ours() < 1e-9 || terms.rate_ours() < 1e-9 || terms.rate_b() < 1e-9 + terms.a_y1);
        }
    }
    assert!(compared > 20, "{compared}");
}

#[test]
fn inclusion_check_finds_no_violations() {
    let spec = make_example1(0.9, 0.1, 0.9).unwrap();
    let cfg = small_aux(quick(), 2);
    let report = region_inclusion_check(&spec, 200, &cfg).unwrap();
    assert!(report.passed(), "{report:?}");
    assert!(report.cmg_feasible > 0);
}

#[test]
fn example1_family_maps_into_the_scheme() {
    let spec = make_example1(0.9, 0.1, 0.9).unwrap();
    let input = example1_family_to_scheme(&spec, &[0.3, 0.2, 0.1, 0.6, 0.5]).unwrap();
    let joint = spec.assemble(&input, JointLayout::default()).unwrap();
    // V = N Y1: no V = 1 without Y1 = 1
    let vy = joint.marginalize(&[Y1, V]).unwrap();
    assert_eq!(vy.prob(&[0, 1]), 0.0);
    // A = U xor Sigma
    let ua = joint.marginalize(&[U, A]).unwrap();
    assert!((ua.prob(&[1, 1]) - 0.3 * 0.8).abs() < 1e-15);
    let fam = Example1FamilyProblem::new(&spec, 1.0).unwrap();
    let probe = example1_family().with_theta(vec![0.7, 0.3, 0.8, 0.2, 0.9, 0.1, 0.4, 0.6, 0.5, 0.5]).unwrap();
    assert_eq!(fam.evaluate(&probe), fam.inner().evaluate(&input));
}

#[test]
fn point_mass_input_gives_zero_outer_rate() {
    let spec = make_example5(0.5, 0.2).unwrap();
    let cards = Cardinalities {
        t: 2,
        v: 2,
        u: 2,
        a: 2,
    };
    let (t, _) = template(&spec, BoundKind::UpperThm1, cards).unwrap();
    let mut theta = vertex(4, 3);
    theta.extend(deterministic_rows(&t.factors()[1].given, 2, |_| 0));
    let e = certify(&spec, BoundKind::UpperThm1, Some(1.0), &t.with_theta(theta).unwrap()).unwrap();
    assert!(e.objective.abs() < 1e-12);
}

#[test]
fn outer_bound_without_sensing_is_the_cutset_value() {
    let spec = make_example5(0.5, 0.2).unwrap();
    let cfg = small_aux(quick(), 2);
    let r = upper_bound_cd(&spec, spec.d_max(), &cfg).unwrap();
    assert!(r.feasible && (r.best_value - 0.6).abs() < 1e-3, "{}", r.best_value);
}

#[test]
fn sandwich_and_joint_decoding_dominance() {
    let spec = make_example1(0.9, 0.1, 0.9).unwrap();
    let cfg = small_aux(
        OptimizerConfig {
            random_samples: 500,
            refine_iterations: 150,
            seeds: 2,
            ..OptimizerConfig::default()
        },
        2,
    );
    for d in [0.0, 0.05, 0.2] {
        let cmg = lower_bound_cmg(&spec, d, &cfg).unwrap();
        let lower = lower_bound_cd_seeded(&spec, d, &cfg, &[cmg.best_input.clone()]).unwrap();
        assert!(lower.best_value >= cmg.best_value - 1e-6, "D={d}: {} < {}", lower.best_value, cmg.best_value);
        let upper = upper_bound_cd_seeded(&spec, d, &cfg, &[lower.best_input.clone()]).unwrap();
        assert!(lower.best_value <= upper.best_value + 1e-6, "D={d}: {} > {}", lower.best_value, upper.best_value);
    }
}

#[test]
fn curves_are_monotone() {
    let spec = make_example5(0.5, 0.2).unwrap();
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.05).collect();
    let curve = tradeoff_curve(&spec, BoundKind::CdC4, &grid, &OptimizerConfig::default()).unwrap();
    assert!(curve.is_nondecreasing(1e-12));
    assert_eq!(curve.kind, "c4");
    assert!(tradeoff_curve(&spec, BoundKind::CdC4, &[], &OptimizerConfig::default()).is_err());
    assert!(tradeoff_curve(&spec, BoundKind::DminThm3, &grid, &OptimizerConfig::default()).is_err());
}

#[test]
fn seeded_search_is_deterministic() {
    let spec = make_example6(0.9, 0.8, 0.5).unwrap();
    let cfg = quick();
    let a = cd_class_c5(&spec, 0.05, &cfg).unwrap();
    let b = cd_class_c5(&spec, 0.05, &cfg).unwrap();
    assert_eq!(a, b);
}
