//! I.i.d. symbol-level simulation of the estimation distortion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{names::*, JointLayout, RelayChannelSpec};
use crate::error::{Error, Result};
use crate::estimator::{expected_distortion, EstimatorTable};
use crate::optimizer::{stream_seed, FactoredInput};
use crate::prob::JointDistribution;

/// Normal quantile for the two-sided 95% interval.
const Z95: f64 = 1.96;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub samples: usize,
    pub rng_seed: u64,
    /// Batch count for the batch-means interval.
    pub batches: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            rng_seed: 0,
            batches: 100,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batches < 2 || self.samples < self.batches {
            return Err(Error::Domain(format!(
                "need samples >= batches >= 2, got samples = {}, batches = {}",
                self.samples, self.batches
            )));
        }
        Ok(())
    }
}

/// Joint over channel variables, input auxiliaries and whatever split the
/// estimator reads.
pub fn simulation_joint(
    spec: &RelayChannelSpec,
    input: &FactoredInput,
    est: &EstimatorTable,
) -> Result<JointDistribution> {
    let uses = |n: &str| est.conditioning().iter().any(|a| a.name() == n);
    let produces = |n: &str| input.factors().iter().any(|f| f.output.iter().any(|a| a.name() == n));
    let reads = |n: &str| input.factors().iter().any(|f| f.given.iter().any(|a| a.name() == n));
    let layout = JointLayout {
        split_x: produces(XR) || uses(XR) || uses(XD),
        split_y: reads(YR) || reads(YD) || uses(YR) || uses(YD),
    };
    spec.assemble(input, layout)
}

/// Exact counterpart of [`simulate_distortion`].
pub fn exact_distortion(spec: &RelayChannelSpec, input: &FactoredInput, est: &EstimatorTable) -> Result<f64> {
    let joint = simulation_joint(spec, input, est)?;
    expected_distortion(&joint, est, spec.distortion())
}

/// Per flat index of `joint`, the distortion the estimator incurs there.
fn loss_table(joint: &JointDistribution, est: &EstimatorTable, distortion: &[Vec<f64>]) -> Result<Vec<f64>> {
    let vars = joint.variables();
    let cond: Vec<usize> = est
        .conditioning()
        .iter()
        .map(|a| {
            let p = joint.position(a.name())?;
            if vars[p].size() != a.size() {
                return Err(Error::Domain(format!("{} has a different size in the joint", a.name())));
            }
            Ok(p)
        })
        .collect::<Result<_>>()?;
    let target = joint.position(est.target())?;
    if distortion.len() != vars[target].size()
        || distortion.iter().any(|r| r.len() != est.reconstruction().size())
    {
        return Err(Error::Domain("distortion table does not fit the estimator".into()));
    }
    let n = joint.probabilities().len();
    let mut tuple = vec![0usize; vars.len()];
    let mut sub = vec![0usize; cond.len()];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        for (s, &p) in sub.iter_mut().zip(&cond) {
            *s = tuple[p];
        }
        out.push(distortion[tuple[target]][est.estimate(&sub)]);
        // last variable fastest
        for k in (0..vars.len()).rev() {
            tuple[k] += 1;
            if tuple[k] < vars[k].size() {
                break;
            }
            tuple[k] = 0;
        }
    }
    Ok(out)
}

/// Empirical mean distortion of `est` over `cfg.samples` i.i.d. draws of the
/// joint, and the half-width of an approximate 95% batch-means interval.
pub fn simulate_distortion(
    spec: &RelayChannelSpec,
    input: &FactoredInput,
    est: &EstimatorTable,
    cfg: &SimConfig,
) -> Result<(f64, f64)> {
    cfg.validate()?;
    let joint = simulation_joint(spec, input, est)?;
    let loss = loss_table(&joint, est, spec.distortion())?;
    let mut cdf = Vec::with_capacity(loss.len());
    let mut acc = 0.0;
    for &p in joint.probabilities() {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let last = cdf.iter().rposition(|&c| c > 0.0).map_or(0, |i| i);

    let (b, n) = (cfg.batches, cfg.samples);
    let sums: Vec<(usize, f64)> = (0..b)
        .into_par_iter()
        .map(|i| {
            let len = n / b + usize::from(i < n % b);
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.rng_seed, i as u64));
            let mut sum = 0.0;
            for _ in 0..len {
                let u = rng.gen::<f64>() * total;
                let k = cdf.partition_point(|&c| c <= u).min(last);
                sum += loss[k];
            }
            (len, sum)
        })
        .collect();

    let mean = sums.iter().map(|s| s.1).sum::<f64>() / n as f64;
    let means: Vec<f64> = sums.iter().map(|&(len, s)| s / len as f64).collect();
    let bm = means.iter().sum::<f64>() / b as f64;
    let var = means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (b - 1) as f64;
    Ok((mean, Z95 * (var / b as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{template, BoundKind, Cardinalities};
    use crate::channel::{make_example1, make_example5};
    use crate::estimator::optimal_estimator;
    use crate::optimizer::{AuxCardinalities, InputFactor};
    use crate::prob::Alphabet;

    fn xx1_input(spec: &RelayChannelSpec, p: Vec<f64>) -> FactoredInput {
        FactoredInput::new(vec![InputFactor::joint("P_XX1", vec![spec.x().clone(), spec.x1().clone()])])
            .with_theta(p)
            .unwrap()
    }

    #[test]
    fn config_bounds() {
        assert!(SimConfig { samples: 10, rng_seed: 0, batches: 1 }.validate().is_err());
        assert!(SimConfig { samples: 3, rng_seed: 0, batches: 4 }.validate().is_err());
        assert!(SimConfig { samples: 4, rng_seed: 0, batches: 4 }.validate().is_ok());
    }

    #[test]
    fn perfect_observation_is_exactly_zero() {
        let spec = make_example1(0.9, 0.1, 0.9).unwrap();
        let input = xx1_input(&spec, vec![0.0, 0.0, 0.0, 1.0]);
        let joint = spec.assemble_joint(&input).unwrap();
        let est = optimal_estimator(&joint, &[X, X1, Y, Y1], SD, spec.distortion()).unwrap();
        let cfg = SimConfig { samples: 100_000, rng_seed: 3, batches: 20 };
        let (mean, ci) = simulate_distortion(&spec, &input, &est, &cfg).unwrap();
        assert_eq!((mean, ci), (0.0, 0.0));
    }

    #[test]
    fn constant_estimator_matches_prior_risk() {
        let spec = make_example5(0.3, 0.2).unwrap();
        let input = xx1_input(&spec, vec![0.25; 4]);
        let est = EstimatorTable::constant(vec![spec.y().clone()], SD, Alphabet::binary(SHAT), 0).unwrap();
        let exact = exact_distortion(&spec, &input, &est).unwrap();
        assert!((exact - 0.3).abs() < 1e-12);
        let cfg = SimConfig { samples: 200_000, rng_seed: 11, batches: 50 };
        let (mean, ci) = simulate_distortion(&spec, &input, &est, &cfg).unwrap();
        assert!((mean - exact).abs() <= ci, "{mean} +- {ci}");
        assert!(ci > 0.0 && ci < 0.01);
    }

    #[test]
    fn seeded_runs_repeat() {
        let spec = make_example1(0.9, 0.1, 0.9).unwrap();
        let input = xx1_input(&spec, vec![0.1, 0.2, 0.3, 0.4]);
        let joint = spec.assemble_joint(&input).unwrap();
        let est = optimal_estimator(&joint, &[Y], SD, spec.distortion()).unwrap();
        let cfg = SimConfig { samples: 50_001, rng_seed: 5, batches: 7 };
        let a = simulate_distortion(&spec, &input, &est, &cfg).unwrap();
        let b = simulate_distortion(&spec, &input, &est, &cfg).unwrap();
        assert_eq!(a, b);
        let c = simulate_distortion(&spec, &input, &est, &SimConfig { rng_seed: 6, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn interval_coverage() {
        let spec = make_example1(0.9, 0.1, 0.9).unwrap();
        let input = xx1_input(&spec, vec![0.1, 0.2, 0.3, 0.4]);
        let joint = spec.assemble_joint(&input).unwrap();
        let est = optimal_estimator(&joint, &[Y, X1], SD, spec.distortion()).unwrap();
        let exact = exact_distortion(&spec, &input, &est).unwrap();
        let hits = (0..100u64)
            .filter(|&seed| {
                let cfg = SimConfig { samples: 20_000, rng_seed: seed, batches: 40 };
                let (m, ci) = simulate_distortion(&spec, &input, &est, &cfg).unwrap();
                (m - exact).abs() <= ci
            })
            .count();
        assert!(hits >= 90, "{hits}");
    }

    #[test]
    fn auxiliaries_can_be_observed() {
        // relay-side Shat kernel: estimator reads V directly
        let spec = make_example1(0.9, 0.1, 0.9).unwrap();
        let cards = Cardinalities::resolve(&spec, &AuxCardinalities::default());
        let (t, _) = template(&spec, BoundKind::DminThm3, cards).unwrap();
        let n = t.dimension();
        let mut theta = Vec::with_capacity(n);
        theta.extend([0.0, 0.0, 0.0, 1.0]);
        let nv = t.factors()[1].width();
        for g in 0..t.factors()[1].rows() {
            let mut row = vec![0.0; nv];
            row[g % 2] = 1.0;
            theta.extend(row);
        }
        let input = t.with_theta(theta).unwrap();
        let joint = simulation_joint(&spec, &input, &EstimatorTable::constant(vec![], SD, Alphabet::binary(SHAT), 0).unwrap())
            .unwrap();
        let est = optimal_estimator(&joint, &[V, Y], SD, spec.distortion()).unwrap();
        let exact = exact_distortion(&spec, &input, &est).unwrap();
        let cfg = SimConfig { samples: 100_000, rng_seed: 1, batches: 20 };
        let (m, ci) = simulate_distortion(&spec, &input, &est, &cfg).unwrap();
        assert!((m - exact).abs() <= ci.max(1e-12), "{m} vs {exact}");
    }
}
