//! Information terms of the hybrid scheme, the split-rate cross-check, and
//! the inclusion check against the joint-decoding region.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{template, vertex, BoundKind, Cardinalities};
use crate::channel::{JointLayout, RelayChannelSpec};
use crate::error::Result;
use crate::optimizer::{stream_seed, FactoredInput, OptimizerConfig};
use crate::prob::InfoView;

/// Every information quantity the hybrid scheme's rate region uses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchemeTerms {
    /// `I(A;Y1|U X1)`
    pub a_y1: f64,
    /// `I(X;V Y|U A X1)`
    pub x_vy: f64,
    /// `I(X X1;Y)`
    pub xx1_y: f64,
    /// `I(X X1;Y|U A)`
    pub xx1_y_ua: f64,
    /// `I(V;Y1|U A X X1 Y)`
    pub v_y1_all: f64,
    /// `I(X1;Y|U A X)`
    pub x1_y_uax: f64,
    /// `I(X1;Y|U A)`
    pub x1_y_ua: f64,
    /// `I(V;Y1|U A X1 Y)`
    pub v_y1_ux1y: f64,
    /// `I(V;Y1|U A X1)`
    pub v_y1_uax1: f64,
    /// `I(V;X Y|U A X1)`
    pub v_xy: f64,
    /// `H(U A X1 Y1)`
    pub h_uax1y1: f64,
}

impl SchemeTerms {
    pub fn from_view(iv: &mut InfoView<'_>) -> Result<Self> {
        Ok(Self {
            a_y1: iv.mi("A", "Y1", "U X1")?,
            x_vy: iv.mi("X", "V Y", "U A X1")?,
            xx1_y: iv.mi("X X1", "Y", "")?,
            xx1_y_ua: iv.mi("X X1", "Y", "U A")?,
            v_y1_all: iv.mi("V", "Y1", "U A X X1 Y")?,
            x1_y_uax: iv.mi("X1", "Y", "U A X")?,
            x1_y_ua: iv.mi("X1", "Y", "U A")?,
            v_y1_ux1y: iv.mi("V", "Y1", "U A X1 Y")?,
            v_y1_uax1: iv.mi("V", "Y1", "U A X1")?,
            v_xy: iv.mi("V", "X Y", "U A X1")?,
            h_uax1y1: iv.entropy(&["U", "A", "X1", "Y1"], &[])?,
        })
    }

    pub fn rate_a(&self) -> f64 {
        self.a_y1 + self.x_vy
    }

    pub fn rate_b(&self) -> f64 {
        self.a_y1 + self.xx1_y_ua - self.v_y1_all
    }

    pub fn rate_c(&self) -> f64 {
        self.xx1_y - self.v_y1_all
    }

    pub fn rate_ours(&self) -> f64 {
        self.rate_a().min(self.rate_b()).min(self.rate_c())
    }

    /// Slack of the relay-description constraint of the hybrid scheme.
    pub fn constraint_ours(&self) -> f64 {
        self.x1_y_uax - self.v_y1_all
    }

    pub fn rate_cmg(&self) -> f64 {
        self.rate_a().min(self.rate_c())
    }

    /// Slack of the stricter joint-decoding constraint.
    pub fn constraint_cmg(&self) -> f64 {
        self.x1_y_ua - self.v_y1_ux1y
    }
}

/// Terms of the hybrid scheme at one input of its family.
pub fn scheme_terms(spec: &RelayChannelSpec, input: &FactoredInput) -> Result<SchemeTerms> {
    let joint = spec.assemble(input, JointLayout::default())?;
    SchemeTerms::from_view(&mut joint.info())
}

/// Largest `Rc + Rp` over the split-rate polytope in `(Rc, Rp, Rv) >= 0`
/// before any elimination, by vertex enumeration. `None` when empty.
pub fn pre_fme_rate(t: &SchemeTerms) -> Option<f64> {
    // rows: coefficients on (Rc, Rp, Rv) and the bound, meaning row . r <= b
    let rows: [([f64; 3], f64); 10] = [
        ([1.0, 0.0, 0.0], t.a_y1),
        ([0.0, 0.0, -1.0], -t.v_y1_uax1),
        ([0.0, 0.0, 1.0], 2.0 * t.h_uax1y1),
        ([1.0, 1.0, 1.0], t.xx1_y + t.v_xy),
        ([0.0, 1.0, 1.0], t.xx1_y_ua + t.v_xy),
        ([0.0, 1.0, 0.0], t.x_vy),
        ([0.0, 0.0, 1.0], t.x1_y_uax + t.v_xy),
        ([-1.0, 0.0, 0.0], 0.0),
        ([0.0, -1.0, 0.0], 0.0),
        ([0.0, 0.0, -1.0], 0.0),
    ];
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let tol = 1e-11;
    let mut best: Option<f64> = None;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            for k in j + 1..rows.len() {
                let m = [rows[i].0, rows[j].0, rows[k].0];
                let b = [rows[i].1, rows[j].1, rows[k].1];
                let d = det(m);
                if d.abs() < 1e-12 {
                    continue;
                }
                let mut r = [0.0; 3];
                for (c, rc) in r.iter_mut().enumerate() {
                    let mut mc = m;
                    for row in 0..3 {
                        mc[row][c] = b[row];
                    }
                    *rc = det(mc) / d;
                }
                let ok = rows
                    .iter()
                    .all(|(a, bound)| a[0] * r[0] + a[1] * r[1] + a[2] * r[2] <= bound + tol);
                if ok {
                    let v = r[0] + r[1];
                    best = Some(best.map_or(v, |b: f64| b.max(v)));
                }
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionReport {
    pub samples: usize,
    /// Inputs meeting the joint-decoding constraint.
    pub cmg_feasible: usize,
    /// Of those, inputs where the hybrid constraint fails or the hybrid rate
    /// falls below the joint-decoding rate (beyond 1e-10).
    pub violations: usize,
    /// Inputs where the split-rate polytope disagrees with the reduced region.
    pub elimination_mismatches: usize,
    pub max_rate_gap: f64,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.elimination_mismatches == 0
    }
}

fn random_row(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= s);
    row
}

/// A random point of the hybrid family: per factor, independent random
/// rows, random vertices, or one shared random row.
pub fn random_scheme_input(t: &FactoredInput, seed: u64) -> Result<FactoredInput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta = Vec::with_capacity(t.dimension());
    for f in t.factors() {
        let (rows, k) = (f.rows(), f.width());
        match rng.gen_range(0..4) {
            0 => (0..rows).for_each(|_| theta.extend(random_row(&mut rng, k))),
            1 => (0..rows).for_each(|_| {
                let s = rng.gen_range(0..k);
                theta.extend(vertex(k, s))
            }),
            2 => {
                let row = random_row(&mut rng, k);
                (0..rows).for_each(|_| theta.extend_from_slice(&row));
            }
            _ => {
                let s = rng.gen_range(0..k);
                (0..rows).for_each(|_| theta.extend(vertex(k, s)));
            }
        }
    }
    t.with_theta(theta)
}

fn elimination_agrees(t: &SchemeTerms) -> bool {
    let reduced = t.rate_ours();
    let p_bound = (t.xx1_y_ua - t.v_y1_all).min(t.x_vy);
    match pre_fme_rate(t) {
        Some(r) => t.constraint_ours() >= -1e-9 && (r - reduced).abs() <= 1e-9,
        None => t.constraint_ours() < 1e-9 || p_bound < 1e-9 || t.rate_c() < 1e-9,
    }
}

/// Samples inputs of the hybrid family and checks, at each input meeting the
/// joint-decoding constraint, that the hybrid constraint holds and the
/// hybrid rate is at least the joint-decoding rate. Every sample is also
/// checked against the split-rate polytope.
pub fn region_inclusion_check(
    spec: &RelayChannelSpec,
    samples: usize,
    cfg: &OptimizerConfig,
) -> Result<InclusionReport> {
    let cards = Cardinalities::resolve(spec, &cfg.cardinalities);
    let (t, _) = template(spec, BoundKind::LowerThm2, cards)?;
    let results: Vec<Result<(bool, bool, bool, f64)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let input = random_scheme_input(&t, stream_seed(cfg.rng_seed, i as u64))?;
            let terms = scheme_terms(spec, &input)?;
            let cmg_ok = terms.constraint_cmg() >= 0.0;
            let gap = terms.rate_cmg() - terms.rate_ours();
            let violated = cmg_ok && (terms.constraint_ours() < -1e-10 || gap > 1e-10);
            Ok((cmg_ok, violated, !elimination_agrees(&terms), if cmg_ok { gap } else { f64::NEG_INFINITY }))
        })
        .collect();
    let mut report = InclusionReport {
        samples,
        cmg_feasible: 0,
        violations: 0,
        elimination_mismatches: 0,
        max_rate_gap: f64::NEG_INFINITY,
    };
    for r in results {
        let (ok, bad, mismatch, gap) = r?;
        report.cmg_feasible += ok as usize;
        report.violations += bad as usize;
        report.elimination_mismatches += mismatch as usize;
        report.max_rate_gap = report.max_rate_gap.max(gap);
    }
    Ok(report)
}
