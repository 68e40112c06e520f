//! Property suites: information identities, estimator optimality, region
//! inclusion, simulation agreement and curve monotonicity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::region_inclusion_check;
use crate::channel::{
    make_appendix_c_counterexample, make_example1, make_example4, make_example5, make_example6,
    make_sensing_mac, names::*, RelayChannelSpec,
};
use crate::error::Result;
use crate::estimator::{bayes_risk, expected_distortion, optimal_estimator, EstimatorTable};
use crate::montecarlo::{exact_distortion, simulate_distortion, SimConfig};
use crate::optimizer::{stream_seed, FactoredInput, InputFactor, OptimizerConfig, TradeoffCurve};
use crate::prob::{compose, Alphabet, ConditionalKernel, Factor, JointDistribution};

/// Tolerance of the identity suite.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

/// Every factory channel at its reference parameters.
pub fn factory_channels() -> Result<Vec<(&'static str, RelayChannelSpec)>> {
    Ok(vec![
        ("example1", make_example1(0.9, 0.1, 0.9)?),
        ("example4", make_example4(0.4, 0.2, 0.6)?),
        ("example5", make_example5(0.5, 0.2)?),
        ("example6", make_example6(0.9, 0.8, 0.5)?),
        ("appendixC", make_appendix_c_counterexample()?),
        ("sensing-mac", make_sensing_mac(0.3, 0.6, 0.2, 0.7)?),
    ])
}

fn random_row(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    // occasional exact zeros exercise the 0 log 0 convention
    let mut row: Vec<f64> = (0..k)
        .map(|_| {
            if rng.gen_bool(0.15) {
                0.0
            } else {
                -(1.0 - rng.gen::<f64>()).ln()
            }
        })
        .collect();
    if row.iter().all(|&v| v == 0.0) {
        row[rng.gen_range(0..k)] = 1.0;
    }
    let s: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= s);
    row
}

fn random_kernel(rng: &mut ChaCha8Rng, given: Vec<Alphabet>, output: Vec<Alphabet>) -> Result<ConditionalKernel> {
    let rows: usize = given.iter().map(Alphabet::size).product();
    let width: usize = output.iter().map(Alphabet::size).product();
    let theta: Vec<f64> = (0..rows).flat_map(|_| random_row(rng, width)).collect();
    ConditionalKernel::new(given, output, theta)
}

/// A random joint over `A`, `B`, `C`, `D` with alphabet sizes in 1..=3.
pub fn random_joint(seed: u64) -> Result<JointDistribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<Alphabet> = ["A", "B", "C", "D"]
        .iter()
        .map(|n| Alphabet::new(*n, rng.gen_range(1..=3)))
        .collect::<Result<_>>()?;
    let width: usize = vars.iter().map(Alphabet::size).product();
    JointDistribution::new(vars, random_row(&mut rng, width))
}

/// A random Markov chain `A - B - C`.
pub fn random_markov_chain(seed: u64) -> Result<JointDistribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Alphabet::new("A", rng.gen_range(2..=4))?;
    let b = Alphabet::new("B", rng.gen_range(2..=4))?;
    let c = Alphabet::new("C", rng.gen_range(2..=4))?;
    let pa = JointDistribution::new(vec![a.clone()], random_row(&mut rng, a.size()))?;
    let pb = random_kernel(&mut rng, vec![a], vec![b.clone()])?;
    let pc = random_kernel(&mut rng, vec![b], vec![c])?;
    compose(&[Factor::from(pa), pb.into(), pc.into()])
}

fn identities_at(seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("identities");
    let tol = IDENTITY_TOL;
    let joint = random_joint(seed)?;
    let mut iv = joint.info();
    for (a, b, c) in [("A", "B", ""), ("A", "B", "C"), ("A B", "C", "D"), ("A", "D", "B C")] {
        let v = iv.mi(a, b, c)?;
        r.check(v >= -tol, || format!("seed {seed}: I({a};{b}|{c}) = {v:e}"));
    }
    for (a, c) in [("A", ""), ("A B", "C"), ("D", "A B C")] {
        let v = iv.entropy(&a.split_whitespace().collect::<Vec<_>>(), &c.split_whitespace().collect::<Vec<_>>())?;
        r.check(v >= -tol, || format!("seed {seed}: H({a}|{c}) = {v:e}"));
    }
    // chain rule for entropy and for mutual information
    let h_ab = iv.entropy(&["A", "B"], &[])?;
    let split = iv.entropy(&["A"], &[])? + iv.entropy(&["B"], &["A"])?;
    r.check((h_ab - split).abs() <= tol, || format!("seed {seed}: H(AB) chain off by {:e}", h_ab - split));
    let whole = iv.mi("A", "B C", "D")?;
    let parts = iv.mi("A", "B", "D")? + iv.mi("A", "C", "B D")?;
    r.check((whole - parts).abs() <= tol, || format!("seed {seed}: I chain off by {:e}", whole - parts));
    // data processing on an explicit chain
    let chain = random_markov_chain(seed)?;
    let mut cv = chain.info();
    let (ab, ac) = (cv.mi("A", "B", "")?, cv.mi("A", "C", "")?);
    let markov = cv.mi("A", "C", "B")?;
    r.check(ac <= ab + tol, || format!("seed {seed}: I(A;C) = {ac} > I(A;B) = {ab}"));
    r.check(markov.abs() <= tol, || format!("seed {seed}: I(A;C|B) = {markov:e}"));
    Ok(r)
}

/// Nonnegativity, chain rules and data processing over `fuzz` random joints.
pub fn identity_suite(fuzz: usize, seed: u64) -> Result<SuiteReport> {
    let parts: Vec<Result<SuiteReport>> = (0..fuzz as u64)
        .into_par_iter()
        .map(|i| identities_at(stream_seed(seed, i)))
        .collect();
    let mut r = SuiteReport::new("identities");
    for p in parts {
        r.merge(p?);
    }
    Ok(r)
}

fn xx1_input(spec: &RelayChannelSpec, rng: &mut ChaCha8Rng) -> Result<FactoredInput> {
    let k = spec.x().size() * spec.x1().size();
    FactoredInput::new(vec![InputFactor::joint("P_XX1", vec![spec.x().clone(), spec.x1().clone()])])
        .with_theta(random_row(rng, k))
}

/// Largest conditioning table the exhaustive enumeration accepts.
const MAX_ROWS: usize = 10;

/// Compares the Bayes estimator with every deterministic estimator, on
/// conditioning sets with at most `MAX_ROWS` tuples.
pub fn estimator_suite(channels: &[(&str, RelayChannelSpec)], seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("estimator");
    let sets: [&[&str]; 5] = [&[], &[Y], &[Y1], &[X1, Y], &[X, Y]];
    for (ci, (name, spec)) in channels.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, ci as u64));
        for _ in 0..3 {
            let input = xx1_input(spec, &mut rng)?;
            let joint = spec.assemble_joint(&input)?;
            for cond in sets {
                let alph: Vec<Alphabet> = cond
                    .iter()
                    .map(|n| joint.alphabet(n).cloned())
                    .collect::<Result<_>>()?;
                let rows: usize = alph.iter().map(Alphabet::size).product();
                if rows > MAX_ROWS {
                    continue;
                }
                let d = spec.distortion();
                let width = d[0].len();
                let bayes = optimal_estimator(&joint, cond, SD, d)?;
                let best_table = expected_distortion(&joint, &bayes, d)?;
                let risk = bayes_risk(&joint, cond, SD, d)?;
                let mut brute = f64::INFINITY;
                let mut map = vec![0usize; rows];
                loop {
                    let est = EstimatorTable::new(alph.clone(), SD, Alphabet::new(SHAT, width)?, map.clone())?;
                    brute = brute.min(expected_distortion(&joint, &est, d)?);
                    let mut k = 0;
                    while k < rows {
                        map[k] += 1;
                        if map[k] < width {
                            break;
                        }
                        map[k] = 0;
                        k += 1;
                    }
                    if k == rows {
                        break;
                    }
                }
                r.check((brute - best_table).abs() <= 1e-12 && (brute - risk).abs() <= 1e-12, || {
                    format!("{name} {cond:?}: exhaustive {brute}, table {best_table}, risk {risk}")
                });
            }
        }
    }
    Ok(r)
}

/// Inclusion fuzz on every channel; a channel contributes one check.
pub fn inclusion_suite(
    channels: &[(&str, RelayChannelSpec)],
    samples: usize,
    cfg: &OptimizerConfig,
) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("inclusion");
    for (name, spec) in channels {
        let rep = region_inclusion_check(spec, samples, cfg)?;
        r.check(rep.passed(), || {
            format!(
                "{name}: {} violations, {} elimination mismatches over {} samples",
                rep.violations, rep.elimination_mismatches, rep.samples
            )
        });
    }
    Ok(r)
}

/// Simulated vs exact distortion of the Bayes estimator from `(X1, Y)` at a
/// random input, one check per channel.
pub fn montecarlo_suite(channels: &[(&str, RelayChannelSpec)], sim: &SimConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("montecarlo");
    for (ci, (name, spec)) in channels.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(sim.rng_seed, ci as u64));
        let input = xx1_input(spec, &mut rng)?;
        let joint = spec.assemble_joint(&input)?;
        let est = optimal_estimator(&joint, &[X1, Y], SD, spec.distortion())?;
        let exact = exact_distortion(spec, &input, &est)?;
        let (mean, half) = simulate_distortion(spec, &input, &est, sim)?;
        r.check((mean - exact).abs() <= half + 1e-12, || {
            format!("{name}: simulated {mean} +- {half}, exact {exact}")
        });
    }
    Ok(r)
}

/// Every curve nondecreasing in `D` (within `tol`).
pub fn monotonicity_suite(curves: &[TradeoffCurve], tol: f64) -> SuiteReport {
    let mut r = SuiteReport::new("monotonicity");
    for c in curves {
        r.check(c.is_nondecreasing(tol), || format!("{} curve decreases", c.kind));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identities_hold_on_fuzzed_joints() {
        let r = identity_suite(200, 7).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.checked, 200 * 11);
    }

    #[test]
    fn markov_chain_really_is_one() {
        let j = random_markov_chain(3).unwrap();
        assert_eq!(j.names(), vec!["A", "B", "C"]);
    }

    #[test]
    fn estimator_suite_covers_every_channel() {
        let ch = factory_channels().unwrap();
        let r = estimator_suite(&ch, 1).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.checked >= 3 * ch.len() * 2);
    }

    #[test]
    fn a_wrong_estimator_is_caught_by_enumeration() {
        // sanity of the harness itself: a constant estimator is not optimal here
        let spec = make_example1(0.9, 0.1, 0.9).unwrap();
        let input = FactoredInput::new(vec![InputFactor::joint("P_XX1", vec![spec.x().clone(), spec.x1().clone()])])
            .with_theta(vec![0.0, 0.0, 0.0, 1.0])
            .unwrap();
        let joint = spec.assemble_joint(&input).unwrap();
        let y1 = joint.alphabet(Y1).unwrap().clone();
        let c = EstimatorTable::constant(vec![y1], SD, Alphabet::binary(SHAT), 0).unwrap();
        let risk = bayes_risk(&joint, &[Y1], SD, spec.distortion()).unwrap();
        assert!(expected_distortion(&joint, &c, spec.distortion()).unwrap() > risk + 0.05);
    }

    #[test]
    fn monotonicity_flags_a_dip() {
        let spec = make_example5(0.5, 0.2).unwrap();
        let curve = crate::bounds::tradeoff_curve(
            &spec,
            crate::bounds::BoundKind::CdC4,
            &[0.0, 0.25, 0.5],
            &OptimizerConfig::default(),
        )
        .unwrap();
        assert!(monotonicity_suite(&[curve.clone()], 1e-12).passed());
        let mut bent = curve;
        bent.points[2].rate = bent.points[1].rate - 0.01;
        assert!(!monotonicity_suite(&[bent], 1e-12).passed());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn conditioning_reduces_entropy(seed in any::<u64>()) {
            let j = random_joint(seed).unwrap();
            let mut iv = j.info();
            let h = iv.entropy(&["A"], &[]).unwrap();
            let hc = iv.entropy(&["A"], &["B", "C"]).unwrap();
            prop_assert!(hc <= h + IDENTITY_TOL);
        }

        #[test]
        fn mutual_information_is_symmetric(seed in any::<u64>()) {
            let j = random_joint(seed).unwrap();
            let mut iv = j.info();
            let ab = iv.mi("A", "B C", "D").unwrap();
            let ba = iv.mi("B C", "A", "D").unwrap();
            prop_assert!((ab - ba).abs() <= IDENTITY_TOL);
        }
    }
}
