//! Constrained maximization over products of probability simplices.
//!
//! The search variable is a [`FactoredInput`]: a chain of pmf factors, each
//! row of each factor one simplex block. [`maximize`] probes a coarse lattice
//! (or deterministic structured samples when the lattice is too large), then
//! refines the best starts with Nelder-Mead under a quadratic penalty, and
//! finally re-certifies the winner from scratch.

mod lattice;
mod refine;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{product_size, Alphabet, ConditionalKernel, Factor, JointDistribution};

pub(crate) use lattice::{composition_count, compositions, stream_seed};
use lattice::{structured_sample, Lattice, Shape};
pub use refine::project_simplex;
use refine::{nelder_mead, Reduced};

/// One factor of an input chain: `P(output | given)`, or a joint pmf when
/// `given` is empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputFactor {
    pub name: String,
    pub given: Vec<Alphabet>,
    pub output: Vec<Alphabet>,
}

impl InputFactor {
    pub fn joint(name: &str, output: Vec<Alphabet>) -> Self {
        Self {
            name: name.to_string(),
            given: Vec::new(),
            output,
        }
    }

    pub fn kernel(name: &str, given: Vec<Alphabet>, output: Vec<Alphabet>) -> Self {
        Self {
            name: name.to_string(),
            given,
            output,
        }
    }

    pub fn rows(&self) -> usize {
        product_size(&self.given)
    }

    pub fn width(&self) -> usize {
        product_size(&self.output)
    }
}

/// A factored pmf family together with a concrete parameter vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactoredInput {
    factors: Vec<InputFactor>,
    theta: Vec<f64>,
}

const BLOCK_DRIFT: f64 = 1e-9;

impl FactoredInput {
    /// Family with every row uniform.
    pub fn new(factors: Vec<InputFactor>) -> Self {
        let theta = factors
            .iter()
            .flat_map(|f| std::iter::repeat(1.0 / f.width() as f64).take(f.rows() * f.width()))
            .collect();
        Self { factors, theta }
    }

    /// Same family at a new parameter point. Each block must be nonnegative
    /// and sum to one within 1e-9; it is renormalized exactly.
    pub fn with_theta(&self, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != self.theta.len() {
            return Err(Error::Domain(format!(
                "parameter vector of length {} for a family of dimension {}",
                theta.len(),
                self.theta.len()
            )));
        }
        let mut theta = theta;
        let mut off = 0;
        for k in self.block_widths() {
            let block = &mut theta[off..off + k];
            if block.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::Domain("negative or non-finite parameter".into()));
            }
            let s: f64 = block.iter().sum();
            if (s - 1.0).abs() > BLOCK_DRIFT {
                return Err(Error::Normalization(s));
            }
            if (s - 1.0).abs() > crate::prob::ROUNDOFF {
                block.iter_mut().for_each(|v| *v /= s);
            }
            off += k;
        }
        Ok(Self {
            factors: self.factors.clone(),
            theta,
        })
    }

    pub(crate) fn with_theta_unchecked(&self, theta: Vec<f64>) -> Self {
        debug_assert_eq!(theta.len(), self.theta.len());
        Self {
            factors: self.factors.clone(),
            theta,
        }
    }

    pub fn factors(&self) -> &[InputFactor] {
        &self.factors
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn dimension(&self) -> usize {
        self.theta.len()
    }

    /// Row widths of every simplex block in parameter order.
    pub fn block_widths(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|f| std::iter::repeat(f.width()).take(f.rows()))
            .collect()
    }

    fn offset(&self, i: usize) -> usize {
        self.factors[..i].iter().map(|f| f.rows() * f.width()).sum()
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::Name(name.to_string()))
    }

    /// Parameters of factor `i`, row-major.
    pub fn factor_rows(&self, i: usize) -> &[f64] {
        let off = self.offset(i);
        &self.theta[off..off + self.factors[i].rows() * self.factors[i].width()]
    }

    /// Overwrites the named factor's rows (validated on the whole vector).
    pub fn set_factor(&self, name: &str, rows: &[f64]) -> Result<Self> {
        let i = self.position(name)?;
        let f = &self.factors[i];
        if rows.len() != f.rows() * f.width() {
            return Err(Error::Domain(format!("{name} needs {} entries", f.rows() * f.width())));
        }
        let mut theta = self.theta.clone();
        let off = self.offset(i);
        theta[off..off + rows.len()].copy_from_slice(rows);
        self.with_theta(theta)
    }

    /// Factor `i` as a probability object ready for composition.
    pub fn factor(&self, i: usize) -> Result<Factor> {
        let f = &self.factors[i];
        let rows = self.factor_rows(i).to_vec();
        Ok(if f.given.is_empty() {
            JointDistribution::new(f.output.clone(), rows)?.into()
        } else {
            ConditionalKernel::new(f.given.clone(), f.output.clone(), rows)?.into()
        })
    }

    /// Sizes of the auxiliary alphabets appearing in the family.
    pub fn cardinalities(&self) -> BTreeMap<String, usize> {
        self.factors
            .iter()
            .flat_map(|f| f.output.iter())
            .filter(|a| matches!(a.name(), "U" | "A" | "V" | "T"))
            .map(|a| (a.name().to_string(), a.size()))
            .collect()
    }

    fn shape(&self) -> Shape {
        Shape {
            factors: self.factors.iter().map(|f| (f.rows(), f.width())).collect(),
        }
    }
}

/// Auxiliary alphabet sizes; `None` selects the built-in heuristic.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AuxCardinalities {
    pub t: Option<usize>,
    pub v: Option<usize>,
    pub u: Option<usize>,
    pub a: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub grid_points_per_dim: usize,
    /// Largest full lattice that is enumerated.
    pub max_grid_points: usize,
    /// Structured random samples drawn when the lattice is larger than that.
    pub random_samples: usize,
    pub refine_iterations: usize,
    /// Extra Nelder-Mead runs from the previous optimum while it improves.
    pub refine_restarts: usize,
    pub refine_step_init: f64,
    pub seeds: usize,
    pub rng_seed: u64,
    pub feasibility_slack: f64,
    pub penalty_weight: f64,
    pub cardinalities: AuxCardinalities,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_points_per_dim: 11,
            max_grid_points: 200_000,
            random_samples: 20_000,
            refine_iterations: 400,
            refine_restarts: 0,
            refine_step_init: 0.1,
            seeds: 8,
            rng_seed: 0x1cac_5eed,
            feasibility_slack: 1e-9,
            penalty_weight: 1e4,
            cardinalities: AuxCardinalities::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.grid_points_per_dim >= 2
            && self.max_grid_points > 0
            && self.random_samples > 0
            && self.seeds > 0
            && self.refine_step_init > 0.0
            && self.feasibility_slack > 0.0
            && self.penalty_weight > 0.0;
        let card_ok = [
            self.cardinalities.t,
            self.cardinalities.v,
            self.cardinalities.u,
            self.cardinalities.a,
        ]
        .iter()
        .all(|c| c.map_or(true, |c| c > 0));
        if ok && card_ok {
            Ok(())
        } else {
            Err(Error::Domain("optimizer settings must be positive (grid >= 2)".into()))
        }
    }
}

/// Objective value and constraint slacks (`>= 0` means satisfied).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub objective: f64,
    pub constraints: Vec<f64>,
    /// Expected distortion at this input, when the problem has one.
    pub distortion: Option<f64>,
}

impl Evaluation {
    pub fn invalid() -> Self {
        Self {
            objective: f64::NEG_INFINITY,
            constraints: vec![f64::NEG_INFINITY],
            distortion: None,
        }
    }

    pub fn feasible(&self, slack: f64) -> bool {
        self.objective.is_finite() && self.constraints.iter().all(|&g| g >= -slack)
    }

    pub fn violation(&self) -> f64 {
        self.constraints
            .iter()
            .map(|&g| if g < 0.0 { g * g } else { 0.0 })
            .sum()
    }
}

/// A maximization problem over a factored input family.
pub trait Problem: Sync {
    fn template(&self) -> FactoredInput;
    fn evaluate(&self, input: &FactoredInput) -> Evaluation;
    /// Extra starting points probed before the lattice.
    fn seeds(&self) -> Vec<FactoredInput> {
        Vec::new()
    }
}

/// Adapter turning a closure into a [`Problem`].
pub struct FnProblem<F> {
    template: FactoredInput,
    f: F,
}

impl<F> FnProblem<F>
where
    F: Fn(&FactoredInput) -> Evaluation + Sync,
{
    pub fn new(template: FactoredInput, f: F) -> Self {
        Self { template, f }
    }
}

impl<F> Problem for FnProblem<F>
where
    F: Fn(&FactoredInput) -> Evaluation + Sync,
{
    fn template(&self) -> FactoredInput {
        self.template.clone()
    }

    fn evaluate(&self, input: &FactoredInput) -> Evaluation {
        (self.f)(input)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptResult {
    pub best_value: f64,
    pub best_input: FactoredInput,
    pub feasible: bool,
    pub evaluations: usize,
    pub constraints: Vec<f64>,
    pub distortion: Option<f64>,
}

#[derive(Clone)]
struct Scored {
    theta: Vec<f64>,
    eval: Evaluation,
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// True when `a` should replace `b` as the incumbent feasible point.
fn better(a: &Scored, b: &Scored) -> bool {
    a.eval.objective > b.eval.objective
        || (a.eval.objective == b.eval.objective && lex_less(&a.theta, &b.theta))
}

/// Maximizes `problem` under `cfg`.
pub fn maximize<P: Problem + ?Sized>(problem: &P, cfg: &OptimizerConfig) -> OptResult {
    maximize_from(problem, &[], cfg)
}

/// As [`maximize`], with additional starting points.
pub fn maximize_from<P: Problem + ?Sized>(
    problem: &P,
    extra_seeds: &[FactoredInput],
    cfg: &OptimizerConfig,
) -> OptResult {
    let template = problem.template();
    let shape = template.shape();
    let slack = cfg.feasibility_slack;
    let eval = |theta: &[f64]| problem.evaluate(&template.with_theta_unchecked(theta.to_vec()));

    let seeds: Vec<Vec<f64>> = problem
        .seeds()
        .iter()
        .chain(extra_seeds)
        .filter(|s| s.factors == template.factors)
        .map(|s| s.theta.clone())
        .collect();
    let g = cfg.grid_points_per_dim.max(2) - 1;
    let lattice_size = shape.lattice_size(g);
    let full = lattice_size <= cfg.max_grid_points;
    let n_grid = if full { lattice_size } else { cfg.random_samples };
    let lattice = full.then(|| Lattice::new(&shape, g));
    let candidate = |i: usize| -> Vec<f64> {
        if i < seeds.len() {
            seeds[i].clone()
        } else if let Some(l) = &lattice {
            l.point(i - seeds.len())
        } else {
            structured_sample(&shape, g, stream_seed(cfg.rng_seed, (i - seeds.len()) as u64))
        }
    };
    let total = seeds.len() + n_grid;

    // Phase 1: probe every candidate, keeping only scores.
    let scores: Vec<(f64, f64, bool)> = (0..total)
        .into_par_iter()
        .map(|i| {
            let e = eval(&candidate(i));
            (e.objective, e.violation(), e.feasible(slack))
        })
        .collect();
    let mut evaluations = total;

    let mut best: Option<Scored> = None;
    for (i, &(obj, _, feas)) in scores.iter().enumerate() {
        if !feas {
            continue;
        }
        let replace = match &best {
            None => true,
            Some(b) => obj > b.eval.objective || (obj == b.eval.objective && lex_less(&candidate(i), &b.theta)),
        };
        if replace {
            let theta = candidate(i);
            let e = eval(&theta);
            best = Some(Scored { theta, eval: e });
        }
    }

    // Phase 2: refine the leading starts.
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by(|&a, &b| {
        let (oa, va, fa) = scores[a];
        let (ob, vb, fb) = scores[b];
        fb.cmp(&fa)
            .then_with(|| if fa { ob.total_cmp(&oa) } else { va.total_cmp(&vb) })
            .then_with(|| a.cmp(&b))
    });
    // spread the starts: first pass skips candidates near a chosen one
    let radius = 1.5 / g as f64;
    let far = |a: &[f64], b: &[f64]| a.iter().zip(b).any(|(x, y)| (x - y).abs() > radius);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for spread in [true, false] {
        for &i in &order {
            if starts.len() >= cfg.seeds {
                break;
            }
            let th = candidate(i);
            let ok = if spread {
                starts.iter().all(|s| far(s, &th))
            } else {
                !starts.iter().any(|s| s == &th)
            };
            if ok {
                starts.push(th);
            }
        }
    }
    let refined: Vec<(Scored, usize)> = starts
        .par_iter()
        .map(|start| refine_start(problem, &template, start, cfg))
        .collect();
    for (s, n) in refined {
        evaluations += n;
        if s.eval.feasible(slack) && best.as_ref().map_or(true, |b| better(&s, b)) {
            best = Some(s);
        }
    }

    // Final certificate: rebuild the input and re-evaluate everything.
    let fallback = || {
        let i = order[0];
        candidate(i)
    };
    let theta = best.as_ref().map(|b| b.theta.clone()).unwrap_or_else(fallback);
    let input = template
        .with_theta(theta)
        .expect("candidates stay on the simplex");
    let e = problem.evaluate(&input);
    evaluations += 1;
    let feasible = best.is_some() && e.feasible(slack);
    OptResult {
        best_value: if feasible { e.objective } else { 0.0 },
        best_input: input,
        feasible,
        evaluations,
        constraints: e.constraints,
        distortion: e.distortion,
    }
}

fn refine_start<P: Problem + ?Sized>(
    problem: &P,
    template: &FactoredInput,
    start: &[f64],
    cfg: &OptimizerConfig,
) -> (Scored, usize) {
    let slack = cfg.feasibility_slack;
    let reduced = Reduced::new(template.block_widths());
    let eval = |theta: Vec<f64>| problem.evaluate(&template.with_theta_unchecked(theta));
    let start_eval = eval(start.to_vec());
    let mut evaluations = 1;
    if reduced.dimension() == 0 || cfg.refine_iterations == 0 {
        return (
            Scored {
                theta: start.to_vec(),
                eval: start_eval,
            },
            evaluations,
        );
    }
    let penalized = |z: &[f64]| {
        let e = eval(reduced.expand(z));
        if !e.objective.is_finite() {
            return f64::INFINITY;
        }
        -(e.objective - cfg.penalty_weight * e.violation())
    };
    let z0 = reduced.reduce(start);
    let x0 = reduced.expand(&z0);
    let same = |z: &[f64]| {
        reduced
            .expand(z)
            .iter()
            .zip(&x0)
            .all(|(a, b)| (a - b).abs() < 1e-15)
    };
    let mut out = nelder_mead(&penalized, &z0, cfg.refine_step_init, cfg.refine_iterations, &same);
    evaluations += out.evaluations;
    // restart from the collapsed simplex; helps on min(., .) ridges
    let mut value = penalized(&out.point);
    for _ in 0..cfg.refine_restarts {
        let again = nelder_mead(&penalized, &out.point, cfg.refine_step_init, cfg.refine_iterations, &|_| false);
        evaluations += again.evaluations + 1;
        let v = penalized(&again.point);
        if !(v < value - 1e-12) {
            break;
        }
        value = v;
        out = again;
    }
    let theta = reduced.expand(&out.point);
    let e = eval(theta.clone());
    evaluations += 1;
    let mut result = Scored { theta, eval: e };
    if !result.eval.feasible(slack) && start_eval.feasible(slack) {
        // Pull back toward the feasible start along the segment.
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mix = |t: f64| -> Vec<f64> {
            start
                .iter()
                .zip(&result.theta)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect()
        };
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            let e = eval(mix(mid));
            evaluations += 1;
            if e.feasible(slack) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let theta = mix(lo);
        let e = eval(theta.clone());
        evaluations += 1;
        result = Scored { theta, eval: e };
    }
    let start_scored = Scored {
        theta: start.to_vec(),
        eval: start_eval,
    };
    if start_scored.eval.feasible(slack)
        && (!result.eval.feasible(slack) || better(&start_scored, &result))
    {
        result = start_scored;
    }
    (result, evaluations)
}

/// One point of a capacity-distortion curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub d: f64,
    pub rate: f64,
    pub feasible: bool,
    pub certificate: OptResult,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffCurve {
    pub kind: String,
    pub points: Vec<CurvePoint>,
}

impl TradeoffCurve {
    pub fn is_nondecreasing(&self, tol: f64) -> bool {
        self.points.windows(2).all(|w| w[1].rate >= w[0].rate - tol)
    }

    pub fn max_rate(&self) -> f64 {
        self.points.iter().map(|p| p.rate).fold(0.0, f64::max)
    }
}

/// Maximizes `make(D)` for each `D` in the ascending grid. Each point is
/// warm-started from the previous optimum, and an earlier certificate that
/// beats the current one is carried forward (it stays feasible at larger D).
pub fn sweep_distortion<P, F>(make: F, d_grid: &[f64], kind: &str, cfg: &OptimizerConfig) -> Result<TradeoffCurve>
where
    P: Problem,
    F: Fn(f64) -> Result<P>,
{
    if d_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("distortion grid must be ascending".into()));
    }
    let mut points: Vec<CurvePoint> = Vec::with_capacity(d_grid.len());
    let mut carried: Option<FactoredInput> = None;
    for &d in d_grid {
        let problem = make(d)?;
        let extra: Vec<FactoredInput> = carried.iter().cloned().collect();
        let mut res = maximize_from(&problem, &extra, cfg);
        if let (Some(prev), Some(prev_pt)) = (&carried, points.last()) {
            if !res.feasible || res.best_value < prev_pt.rate {
                let e = problem.evaluate(prev);
                res.evaluations += 1;
                if e.feasible(cfg.feasibility_slack) && (!res.feasible || e.objective > res.best_value) {
                    res = OptResult {
                        best_value: e.objective,
                        best_input: prev.clone(),
                        feasible: true,
                        evaluations: res.evaluations,
                        constraints: e.constraints,
                        distortion: e.distortion,
                    };
                }
            }
        }
        if res.feasible {
            carried = Some(res.best_input.clone());
        }
        points.push(CurvePoint {
            d,
            rate: if res.feasible { res.best_value.max(0.0) } else { 0.0 },
            feasible: res.feasible,
            certificate: res,
        });
    }
    Ok(TradeoffCurve {
        kind: kind.to_string(),
        points,
    })
}
