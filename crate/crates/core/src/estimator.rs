//! Symbol-by-symbol Bayes estimators of the sensing state.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::{advance, encode, product_size, Alphabet, JointDistribution};

/// Deterministic map from conditioning tuples to reconstruction symbols.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorTable {
    conditioning: Vec<Alphabet>,
    target: String,
    reconstruction: Alphabet,
    map: Vec<usize>,
}

impl EstimatorTable {
    pub fn new(
        conditioning: Vec<Alphabet>,
        target: &str,
        reconstruction: Alphabet,
        map: Vec<usize>,
    ) -> Result<Self> {
        if map.len() != product_size(&conditioning) {
            return Err(Error::Domain(format!(
                "estimator needs {} entries, got {}",
                product_size(&conditioning),
                map.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&s| s >= reconstruction.size()) {
            return Err(Error::Domain(format!("reconstruction symbol {bad} out of range")));
        }
        if conditioning.iter().any(|a| a.name() == target) {
            return Err(Error::Name(format!("{target} is both target and conditioning")));
        }
        Ok(Self {
            conditioning,
            target: target.to_string(),
            reconstruction,
            map,
        })
    }

    pub fn constant(
        conditioning: Vec<Alphabet>,
        target: &str,
        reconstruction: Alphabet,
        symbol: usize,
    ) -> Result<Self> {
        let n = product_size(&conditioning);
        Self::new(conditioning, target, reconstruction, vec![symbol; n])
    }

    pub fn conditioning(&self) -> &[Alphabet] {
        &self.conditioning
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn reconstruction(&self) -> &Alphabet {
        &self.reconstruction
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn estimate(&self, tuple: &[usize]) -> usize {
        self.map[encode(&self.conditioning, tuple)]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Accumulates `P(conditioning tuple, target)` as a `rows x |target|` matrix.
fn joint_table(
    joint: &JointDistribution,
    conditioning: &[&str],
    target: &str,
) -> Result<(Vec<Alphabet>, usize, Vec<f64>)> {
    let tpos = joint.position(target)?;
    let mut cpos = Vec::with_capacity(conditioning.len());
    for c in conditioning {
        let p = joint.position(c)?;
        if p == tpos || cpos.contains(&p) {
            return Err(Error::Name(format!("{c} repeated or equal to the target")));
        }
        cpos.push(p);
    }
    let vars = joint.variables();
    let cond: Vec<Alphabet> = cpos.iter().map(|&p| vars[p].clone()).collect();
    let nt = vars[tpos].size();
    let mut acc = vec![0.0; product_size(&cond) * nt];
    let mut digits = vec![0; vars.len()];
    for &p in joint.probabilities() {
        if p > 0.0 {
            let row = cpos
                .iter()
                .fold(0usize, |a, &i| a * vars[i].size() + digits[i]);
            acc[row * nt + digits[tpos]] += p;
        }
        advance(vars, &mut digits);
    }
    Ok((cond, nt, acc))
}

fn check_table(distortion: &[Vec<f64>], nt: usize) -> Result<usize> {
    let width = distortion.first().map_or(0, Vec::len);
    if distortion.len() != nt || width == 0 || distortion.iter().any(|r| r.len() != width) {
        return Err(Error::Domain(format!(
            "distortion table must have {nt} rows of equal positive width"
        )));
    }
    Ok(width)
}

/// Lowest-index minimizer of the posterior risk for one conditioning row.
fn best_symbol(row: &[f64], distortion: &[Vec<f64>], width: usize) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for j in 0..width {
        let r: f64 = row.iter().zip(distortion).map(|(p, d)| p * d[j]).sum();
        if r < best.1 {
            best = (j, r);
        }
    }
    best
}

/// Per-tuple Bayes estimator of `target` from `conditioning`. Ties go to the
/// lowest symbol; zero-mass tuples map to symbol 0.
pub fn optimal_estimator(
    joint: &JointDistribution,
    conditioning: &[&str],
    target: &str,
    distortion: &[Vec<f64>],
) -> Result<EstimatorTable> {
    let (cond, nt, acc) = joint_table(joint, conditioning, target)?;
    let width = check_table(distortion, nt)?;
    let map = acc
        .chunks(nt)
        .map(|row| {
            if row.iter().all(|&p| p == 0.0) {
                0
            } else {
                best_symbol(row, distortion, width).0
            }
        })
        .collect();
    EstimatorTable::new(cond, target, Alphabet::sized("Shat", width), map)
}

/// Expected distortion of the optimal estimator, without building the table.
pub fn bayes_risk(
    joint: &JointDistribution,
    conditioning: &[&str],
    target: &str,
    distortion: &[Vec<f64>],
) -> Result<f64> {
    let (_, nt, acc) = joint_table(joint, conditioning, target)?;
    let width = check_table(distortion, nt)?;
    Ok(acc
        .chunks(nt)
        .map(|row| best_symbol(row, distortion, width).1)
        .sum::<f64>()
        .max(0.0))
}

/// Exact `E[d(target, est(conditioning))]` under `joint`.
pub fn expected_distortion(
    joint: &JointDistribution,
    est: &EstimatorTable,
    distortion: &[Vec<f64>],
) -> Result<f64> {
    let names: Vec<&str> = est.conditioning.iter().map(Alphabet::name).collect();
    let (cond, nt, acc) = joint_table(joint, &names, &est.target)?;
    if cond != est.conditioning {
        return Err(Error::Domain("estimator alphabets differ from the joint".into()));
    }
    let width = check_table(distortion, nt)?;
    if width != est.reconstruction.size() {
        return Err(Error::Domain("distortion width differs from reconstruction alphabet".into()));
    }
    Ok(acc
        .chunks(nt)
        .zip(&est.map)
        .map(|(row, &s)| row.iter().zip(distortion).map(|(p, d)| p * d[s]).sum::<f64>())
        .sum())
}

/// Expected distortion when the reconstruction is itself a variable of the
/// joint (a randomized estimate such as a relay-side `Shat`).
pub fn distortion_of_variable(
    joint: &JointDistribution,
    target: &str,
    estimate: &str,
    distortion: &[Vec<f64>],
) -> Result<f64> {
    let m = joint.marginalize(&[target, estimate])?;
    let m = if m.variables()[0].name() == target {
        m
    } else {
        m.permute(&[target, estimate])?
    };
    let (nt, ne) = (m.variables()[0].size(), m.variables()[1].size());
    let width = check_table(distortion, nt)?;
    if width != ne {
        return Err(Error::Domain("distortion width differs from the estimate alphabet".into()));
    }
    let p = m.probabilities();
    Ok((0..nt)
        .flat_map(|s| (0..ne).map(move |e| (s, e)))
        .map(|(s, e)| p[s * ne + e] * distortion[s][e])
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{hamming, make_example1, make_example4, names::*};
    use crate::optimizer::{FactoredInput, InputFactor};

    fn fixed_inputs(spec: &crate::channel::RelayChannelSpec, x: usize, x1: usize) -> JointDistribution {
        let nx = spec.x().size();
        let mut cells = vec![0.0; nx * 2];
        cells[x * 2 + x1] = 1.0;
        let input = FactoredInput::new(vec![InputFactor::joint(
            "P_XX1",
            vec![spec.x().clone(), spec.x1().clone()],
        )])
        .with_theta(cells)
        .unwrap();
        spec.assemble_joint(&input).unwrap()
    }

    #[test]
    fn independent_state_gives_prior_mode() {
        let j = JointDistribution::bernoulli_product(&["Z", "Sd"], &[0.6, 0.3]).unwrap();
        let est = optimal_estimator(&j, &["Z"], "Sd", &hamming(2)).unwrap();
        assert_eq!(est.map(), &[0, 0]);
        assert!((expected_distortion(&j, &est, &hamming(2)).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn observed_state_gives_zero_distortion() {
        let j = JointDistribution::from_fn(
            vec![Alphabet::binary("Z"), Alphabet::binary("Sd")],
            |t| if t[0] == t[1] { 0.5 } else { 0.0 },
        )
        .unwrap();
        let est = optimal_estimator(&j, &["Z"], "Sd", &hamming(2)).unwrap();
        assert_eq!(est.map(), &[0, 1]);
        assert_eq!(expected_distortion(&j, &est, &hamming(2)).unwrap(), 0.0);
    }

    #[test]
    fn example1_uninformative_output_uses_prior_mode() {
        // (X, X1) = (1, 0): Y = S2 says nothing about S1 ~ Bern(0.9).
        let spec = make_example1(0.9, 0.1, 0.9).unwrap();
        let j = fixed_inputs(&spec, 1, 0);
        let est = optimal_estimator(&j, &[X, X1, Y], SD, spec.distortion()).unwrap();
        for y in 0..2 {
            assert_eq!(est.estimate(&[1, 0, y]), 1);
        }
        let risk = bayes_risk(&j, &[X, X1, Y], SD, spec.distortion()).unwrap();
        assert!((risk - 0.1).abs() < 1e-12);
    }

    #[test]
    fn example4_destination_sees_its_state() {
        // Xd = 1, X1 = 0: Y = S2 = Sd.
        let spec = make_example4(0.4, 0.2, 0.6).unwrap();
        let j = fixed_inputs(&spec, 1, 0);
        let risk = bayes_risk(&j, &[X, X1, Y], SD, spec.distortion()).unwrap();
        assert!(risk.abs() < 1e-15);
    }

    #[test]
    fn zero_mass_rows_map_to_zero() {
        let spec = make_example1(0.9, 0.1, 0.9).unwrap();
        let j = fixed_inputs(&spec, 1, 1);
        let est = optimal_estimator(&j, &[X, X1, Y], SD, spec.distortion()).unwrap();
        assert_eq!(est.estimate(&[0, 0, 2]), 0);
    }

    #[test]
    fn risk_matches_table_evaluation() {
        let spec = make_example1(0.9, 0.1, 0.9).unwrap();
        let j = fixed_inputs(&spec, 1, 1);
        let est = optimal_estimator(&j, &[X, X1, Y], SD, spec.distortion()).unwrap();
        let a = expected_distortion(&j, &est, spec.distortion()).unwrap();
        let b = bayes_risk(&j, &[X, X1, Y], SD, spec.distortion()).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn table_round_trips_through_json() {
        let j = JointDistribution::bernoulli_product(&["Z", "Sd"], &[0.6, 0.3]).unwrap();
        let est = optimal_estimator(&j, &["Z"], "Sd", &hamming(2)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&est.to_json()).unwrap();
        assert_eq!(v["map"], serde_json::json!([0, 0]));
        assert_eq!(v["target"], "Sd");
    }
}
