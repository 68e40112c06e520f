//! Capacity-distortion bounds as optimizer problems, plus closed forms.
//!
//! Every general bound is a [`BoundProblem`]: a factored input template, the
//! layout the channel is assembled in, and an objective/constraint bundle.

mod closed_form;
mod families;
mod inclusion;

pub use closed_form::*;
pub use families::*;
pub use inclusion::*;

use serde::{Deserialize, Serialize};

use crate::channel::{names::*, ChannelClass, JointLayout, RelayChannelSpec};
use crate::error::{Error, Result};
use crate::estimator::{bayes_risk, distortion_of_variable};
use crate::optimizer::{
    compositions, composition_count, maximize, maximize_from, AuxCardinalities, Evaluation, FactoredInput,
    InputFactor, OptResult, OptimizerConfig, Problem, TradeoffCurve,
};
use crate::prob::{Alphabet, JointDistribution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    UpperThm1,
    LowerThm2,
    LowerCmg,
    DminThm3,
    DminProp1,
    DminProp2,
    CdC3,
    CdC4,
    CdC5,
}

impl BoundKind {
    pub const ALL: [BoundKind; 9] = [
        BoundKind::UpperThm1,
        BoundKind::LowerThm2,
        BoundKind::LowerCmg,
        BoundKind::DminThm3,
        BoundKind::DminProp1,
        BoundKind::DminProp2,
        BoundKind::CdC3,
        BoundKind::CdC4,
        BoundKind::CdC5,
    ];

    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::UpperThm1 => "upper",
            BoundKind::LowerThm2 => "lower",
            BoundKind::LowerCmg => "cmg",
            BoundKind::DminThm3 => "dmin",
            BoundKind::DminProp1 => "dmin-c1",
            BoundKind::DminProp2 => "dmin-c2",
            BoundKind::CdC3 => "c3",
            BoundKind::CdC4 => "c4",
            BoundKind::CdC5 => "c5",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown bound kind {s:?}")))
    }

    /// Human-readable description. The general upper bound is computed at a
    /// fixed auxiliary cardinality, so it is only an estimate.
    pub fn label(self) -> &'static str {
        match self {
            BoundKind::UpperThm1 => "upper-bound estimate at fixed cardinality",
            BoundKind::LowerThm2 => "achievable (hybrid partial-decode and compress-forward)",
            BoundKind::LowerCmg => "achievable (Chong-Motani-Garg decoding)",
            BoundKind::DminThm3 => "minimum distortion",
            BoundKind::DminProp1 => "minimum distortion, class C1",
            BoundKind::DminProp2 => "minimum distortion, class C2",
            BoundKind::CdC3 => "capacity-distortion, class C3",
            BoundKind::CdC4 => "capacity-distortion, class C4",
            BoundKind::CdC5 => "capacity-distortion, class C5",
        }
    }

    pub fn is_dmin(self) -> bool {
        matches!(self, BoundKind::DminThm3 | BoundKind::DminProp1 | BoundKind::DminProp2)
    }

    pub fn required_class(self) -> Option<ChannelClass> {
        match self {
            BoundKind::DminProp1 => Some(ChannelClass::C1),
            BoundKind::DminProp2 => Some(ChannelClass::C2),
            BoundKind::CdC3 => Some(ChannelClass::C3),
            BoundKind::CdC4 => Some(ChannelClass::C4),
            BoundKind::CdC5 => Some(ChannelClass::C5),
            _ => None,
        }
    }
}

/// Resolved auxiliary alphabet sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cardinalities {
    pub t: usize,
    pub v: usize,
    pub u: usize,
    pub a: usize,
}

impl Cardinalities {
    /// Config overrides, else `|T| = |V| = min(|X||X1||Y1| + 1, 8)` and
    /// `|U| = |A| = min(|X||X1| + 1, 4)`.
    pub fn resolve(spec: &RelayChannelSpec, cfg: &AuxCardinalities) -> Self {
        let xx1 = spec.x().size() * spec.x1().size();
        let tv = (xx1 * spec.y1().size() + 1).min(8);
        let ua = (xx1 + 1).min(4);
        Self {
            t: cfg.t.unwrap_or(tv),
            v: cfg.v.unwrap_or(tv),
            u: cfg.u.unwrap_or(ua),
            a: cfg.a.unwrap_or(ua),
        }
    }
}

fn aux(name: &str, size: usize) -> Alphabet {
    Alphabet::sized(name, size)
}

/// Input family and channel layout mandated for `kind`.
pub fn template(
    spec: &RelayChannelSpec,
    kind: BoundKind,
    cards: Cardinalities,
) -> Result<(FactoredInput, JointLayout)> {
    let (x, x1, y1) = (spec.x().clone(), spec.x1().clone(), spec.y1().clone());
    let plain = JointLayout::default();
    let scheme = || {
        let (u, a, v) = (aux(U, cards.u), aux(A, cards.a), aux(V, cards.v));
        vec![
            InputFactor::joint("P_U", vec![u.clone()]),
            InputFactor::kernel("P_A|U", vec![u.clone()], vec![a.clone()]),
            InputFactor::kernel("P_X|UA", vec![u.clone(), a.clone()], vec![x.clone()]),
            InputFactor::kernel("P_X1|U", vec![u.clone()], vec![x1.clone()]),
            InputFactor::kernel("P_V|UAX1Y1", vec![u, a, x1.clone(), y1.clone()], vec![v]),
        ]
    };
    let pxx1 = || InputFactor::joint("P_XX1", vec![x.clone(), x1.clone()]);
    let parts = |what: &str| {
        spec.x_parts()
            .ok_or_else(|| Error::Spec(format!("{what} needs a declared X split")))
    };
    Ok(match kind {
        BoundKind::UpperThm1 => (
            FactoredInput::new(vec![
                pxx1(),
                InputFactor::kernel(
                    "P_T|XX1Y1",
                    vec![x.clone(), x1.clone(), y1.clone()],
                    vec![aux(T, cards.t)],
                ),
            ]),
            plain,
        ),
        BoundKind::LowerThm2 | BoundKind::LowerCmg => (FactoredInput::new(scheme()), plain),
        BoundKind::DminThm3 => (
            FactoredInput::new(vec![
                pxx1(),
                InputFactor::kernel(
                    "P_V|XX1Y1",
                    vec![x.clone(), x1.clone(), y1.clone()],
                    vec![aux(V, cards.v)],
                ),
            ]),
            plain,
        ),
        BoundKind::DminProp1 => (FactoredInput::new(vec![pxx1()]), plain),
        BoundKind::DminProp2 => (
            FactoredInput::new(vec![
                pxx1(),
                InputFactor::kernel(
                    "P_Shat|XX1Y1",
                    vec![x.clone(), x1.clone(), y1.clone()],
                    vec![spec.shat().clone()],
                ),
            ]),
            plain,
        ),
        BoundKind::CdC3 => {
            let (xr, xd) = parts("class C3")?;
            (
                FactoredInput::new(vec![
                    InputFactor::joint("P_X1", vec![x1.clone()]),
                    InputFactor::kernel("P_Xr|X1", vec![x1.clone()], vec![xr]),
                    InputFactor::kernel("P_Xd|X1", vec![x1.clone()], vec![xd]),
                ]),
                JointLayout {
                    split_x: true,
                    split_y: false,
                },
            )
        }
        BoundKind::CdC4 => {
            spec.y_parts()
                .ok_or_else(|| Error::Spec("class C4 needs a declared Y split".into()))?;
            (
                FactoredInput::new(vec![
                    InputFactor::joint("P_X", vec![x.clone()]),
                    InputFactor::joint("P_X1", vec![x1.clone()]),
                ]),
                JointLayout {
                    split_x: false,
                    split_y: true,
                },
            )
        }
        BoundKind::CdC5 => {
            let (xr, xd) = parts("class C5")?;
            spec.y_parts()
                .ok_or_else(|| Error::Spec("class C5 needs a declared Y split".into()))?;
            (
                FactoredInput::new(vec![
                    InputFactor::joint("P_Xr", vec![xr.clone()]),
                    InputFactor::joint("P_Xd", vec![xd]),
                    InputFactor::joint("P_X1", vec![x1.clone()]),
                    InputFactor::kernel("P_Shat|XrY1", vec![xr, y1.clone()], vec![spec.shat().clone()]),
                ]),
                JointLayout {
                    split_x: true,
                    split_y: true,
                },
            )
        }
    })
}

/// One bound of one channel at one target distortion, ready for the optimizer.
#[derive(Clone, Debug, Serialize)]
pub struct BoundProblem {
    spec: RelayChannelSpec,
    kind: BoundKind,
    target_distortion: Option<f64>,
    cardinalities: Cardinalities,
    #[serde(skip)]
    template: FactoredInput,
    #[serde(skip)]
    layout: JointLayout,
    #[serde(skip)]
    seeds: Vec<FactoredInput>,
}

impl BoundProblem {
    /// `d` is required for rate kinds and ignored (must be `None`) for the
    /// minimum-distortion kinds. Class kinds require the matching tag.
    pub fn new(
        spec: &RelayChannelSpec,
        kind: BoundKind,
        d: Option<f64>,
        cards: Cardinalities,
    ) -> Result<Self> {
        let mut problem = Self::new_unseeded(spec, kind, d, cards)?;
        problem.seeds = default_seeds(&problem)?;
        Ok(problem)
    }

    /// As [`BoundProblem::new`] without the corner-strategy seeds.
    pub fn new_unseeded(
        spec: &RelayChannelSpec,
        kind: BoundKind,
        d: Option<f64>,
        cards: Cardinalities,
    ) -> Result<Self> {
        match (kind.is_dmin(), d) {
            (true, Some(_)) => {
                return Err(Error::Domain(format!("{} takes no target distortion", kind.name())))
            }
            (false, None) => {
                return Err(Error::Domain(format!("{} needs a target distortion", kind.name())))
            }
            (false, Some(d)) if !(d >= 0.0 && d.is_finite()) => {
                return Err(Error::Domain(format!("target distortion {d} must be finite and >= 0")))
            }
            _ => {}
        }
        if let Some(c) = kind.required_class() {
            if !spec.tags().has(c) {
                return Err(Error::Spec(format!("{} needs a channel tagged {c:?}", kind.name())));
            }
        }
        let (template, layout) = template(spec, kind, cards)?;
        Ok(Self {
            spec: spec.clone(),
            kind,
            target_distortion: d,
            cardinalities: cards,
            template,
            layout,
            seeds: Vec::new(),
        })
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn spec(&self) -> &RelayChannelSpec {
        &self.spec
    }

    pub fn target_distortion(&self) -> Option<f64> {
        self.target_distortion
    }

    pub fn cardinalities(&self) -> Cardinalities {
        self.cardinalities
    }

    pub fn layout(&self) -> JointLayout {
        self.layout
    }

    /// The input family searched over.
    pub fn family(&self) -> &FactoredInput {
        &self.template
    }

    /// Joint of channel and input variables with `S` summed out.
    pub fn joint(&self, input: &FactoredInput) -> Result<JointDistribution> {
        if input.factors() != self.template.factors() {
            return Err(Error::Factorization("input does not match the bound's template".into()));
        }
        let full = self.spec.assemble(input, self.layout)?;
        let keep: Vec<&str> = full.names().into_iter().filter(|&n| n != S).collect();
        full.marginalize(&keep)
    }

    fn distortion_slack(&self, dist: f64) -> Vec<f64> {
        match self.target_distortion {
            Some(d) => vec![d - dist],
            None => Vec::new(),
        }
    }

    pub fn try_evaluate(&self, input: &FactoredInput) -> Result<Evaluation> {
        let joint = self.joint(input)?;
        let dtab = self.spec.distortion();
        let mut iv = joint.info();
        let eval = |objective: f64, mut constraints: Vec<f64>, dist: f64| {
            constraints.extend(self.distortion_slack(dist));
            Evaluation {
                objective,
                constraints,
                distortion: Some(dist),
            }
        };
        Ok(match self.kind {
            BoundKind::UpperThm1 => {
                let cut = iv.mi("X", "Y Y1", "X1")?;
                let t_term = iv.mi("T", "Y1", "X X1 Y")?;
                let mac = iv.mi("X X1", "Y", "")? - t_term;
                let c = iv.mi("X1", "Y", "X")? - t_term;
                let dist = bayes_risk(&joint, &[X, X1, Y, T], SD, dtab)?;
                eval(cut.min(mac), vec![c], dist)
            }
            BoundKind::LowerThm2 | BoundKind::LowerCmg => {
                let terms = SchemeTerms::from_view(&mut iv)?;
                let dist = bayes_risk(&joint, &[X, X1, Y, V], SD, dtab)?;
                if self.kind == BoundKind::LowerThm2 {
                    eval(terms.rate_ours(), vec![terms.constraint_ours()], dist)
                } else {
                    eval(terms.rate_cmg(), vec![terms.constraint_cmg()], dist)
                }
            }
            BoundKind::DminThm3 => {
                let c = iv.mi("X1", "Y", "X")? - iv.mi("V", "Y1", "X X1 Y")?;
                let dist = bayes_risk(&joint, &[X, X1, Y, V], SD, dtab)?;
                eval(-dist, vec![c], dist)
            }
            BoundKind::DminProp1 => {
                let dist = bayes_risk(&joint, &[X, X1, Y], SD, dtab)?;
                eval(-dist, Vec::new(), dist)
            }
            BoundKind::DminProp2 => {
                let c = iv.mi("X1", "Y", "X")? - iv.mi("Shat", "Y1", "X X1")?;
                let dist = distortion_of_variable(&joint, SD, SHAT, dtab)?;
                eval(-dist, vec![c], dist)
            }
            BoundKind::CdC3 => {
                let mac = iv.mi("Xd X1", "Y", "")?;
                let split = iv.mi("Xr", "Y1", "X1")? + iv.mi("Xd", "Y", "X1")?;
                let dist = bayes_risk(&joint, &[XD, X1, Y], SD, dtab)?;
                eval(mac.min(split), Vec::new(), dist)
            }
            BoundKind::CdC4 => {
                let bc = iv.mi("X", "Y1 Yd", "")?;
                let relay = iv.mi("X1", "Yr", "")? + iv.mi("X", "Yd", "")?;
                let dist = bayes_risk(&joint, &[X, YD], SD, dtab)?;
                eval(bc.min(relay), Vec::new(), dist)
            }
            BoundKind::CdC5 => {
                let direct = iv.mi("Xd", "Yd", "")?;
                let hop = iv.mi("Xr", "Y1", "")?;
                let link = iv.mi("X1", "Yr", "")?;
                let desc = iv.mi("Shat", "Y1", "Xr")?;
                let dist = distortion_of_variable(&joint, SD, SHAT, dtab)?;
                eval(direct + hop.min(link - desc), vec![link - desc], dist)
            }
        })
    }
}

impl Problem for BoundProblem {
    fn template(&self) -> FactoredInput {
        self.template.clone()
    }

    fn evaluate(&self, input: &FactoredInput) -> Evaluation {
        self.try_evaluate(input).unwrap_or_else(|_| Evaluation::invalid())
    }

    fn seeds(&self) -> Vec<FactoredInput> {
        self.seeds.clone()
    }
}

/// Point mass on symbol `k` of a `width`-symbol row.
pub(crate) fn vertex(width: usize, k: usize) -> Vec<f64> {
    (0..width).map(|i| if i == k { 1.0 } else { 0.0 }).collect()
}

/// Lattice points of a `k`-simplex, as coarse as needed to stay below ~400.
pub(crate) fn coarse_simplex(k: usize) -> Vec<Vec<f64>> {
    let g = (1..=10).rev().find(|&g| composition_count(g, k) <= 400).unwrap_or(1);
    compositions(g, k)
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as f64 / g as f64).collect())
        .collect()
}

/// Rows of a kernel over `given` whose output is `f(given tuple)`.
pub(crate) fn deterministic_rows(given: &[Alphabet], width: usize, f: impl Fn(&[usize]) -> usize) -> Vec<f64> {
    let mut rows = Vec::new();
    let mut digits = vec![0; given.len()];
    let n: usize = given.iter().map(Alphabet::size).product();
    for _ in 0..n {
        rows.extend(vertex(width, f(&digits)));
        crate::prob::advance(given, &mut digits);
    }
    rows
}

/// Starting points that make well-known corner strategies reachable.
fn default_seeds(p: &BoundProblem) -> Result<Vec<FactoredInput>> {
    let t = &p.template;
    let f = t.factors();
    let mut out = Vec::new();
    match p.kind {
        BoundKind::UpperThm1 | BoundKind::DminThm3 | BoundKind::DminProp2 => {
            // Auxiliary constant, or a copy of Y1 where it fits.
            let aux_f = &f[1];
            let width = aux_f.width();
            let ny1 = p.spec.y1().size();
            let maps: Vec<Box<dyn Fn(&[usize]) -> usize>> = {
                let mut m: Vec<Box<dyn Fn(&[usize]) -> usize>> =
                    (0..width.min(2)).map(|s| Box::new(move |_: &[usize]| s) as Box<_>).collect();
                m.push(Box::new(move |g: &[usize]| g[2] % width));
                if width < ny1 {
                    m.push(Box::new(move |g: &[usize]| g[2].min(width - 1)));
                }
                m
            };
            for pxx1 in coarse_simplex(f[0].width()) {
                for map in &maps {
                    let rows = deterministic_rows(&aux_f.given, width, map);
                    let mut theta = pxx1.clone();
                    theta.extend(rows);
                    out.push(t.with_theta(theta)?);
                }
            }
        }
        BoundKind::LowerThm2 | BoundKind::LowerCmg => {
            out.extend(direct_transmission_seeds(p)?);
            out.extend(compress_seeds(t, &p.spec)?);
        }
        _ => {}
    }
    Ok(out)
}

fn cards_for(spec: &RelayChannelSpec, cfg: &OptimizerConfig) -> Cardinalities {
    Cardinalities::resolve(spec, &cfg.cardinalities)
}

/// Maximizes `kind` at target distortion `d` (or the minimum-distortion
/// problem when `d` is `None`).
pub fn solve(
    spec: &RelayChannelSpec,
    kind: BoundKind,
    d: Option<f64>,
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    cfg.validate()?;
    let problem = BoundProblem::new(spec, kind, d, cards_for(spec, cfg))?;
    Ok(maximize(&problem, cfg))
}

/// General outer bound at fixed `|T|`.
pub fn upper_bound_cd(spec: &RelayChannelSpec, d: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    solve(spec, BoundKind::UpperThm1, Some(d), cfg)
}

/// The outer bound, also probing the lifts of the given inner-bound inputs
/// (with `T = (U, A, V)`). The larger certified value wins.
pub fn upper_bound_cd_seeded(
    spec: &RelayChannelSpec,
    d: f64,
    cfg: &OptimizerConfig,
    lower_inputs: &[FactoredInput],
) -> Result<OptResult> {
    let mut best = upper_bound_cd(spec, d, cfg)?;
    for li in lower_inputs {
        let lifted = lift_lower_to_upper(spec, li)?;
        let t = lifted.factors()[1].output[0].size();
        let cards = Cardinalities {
            t,
            ..cards_for(spec, cfg)
        };
        let problem = BoundProblem::new(spec, BoundKind::UpperThm1, Some(d), cards)?;
        let e = problem.evaluate(&lifted);
        best.evaluations += 1;
        if e.feasible(cfg.feasibility_slack) && (!best.feasible || e.objective > best.best_value) {
            best = OptResult {
                best_value: e.objective,
                best_input: lifted,
                feasible: true,
                evaluations: best.evaluations,
                constraints: e.constraints,
                distortion: e.distortion,
            };
        }
    }
    Ok(best)
}

/// General inner bound; also covers the direct-transmission family.
pub fn lower_bound_cd(spec: &RelayChannelSpec, d: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    solve(spec, BoundKind::LowerThm2, Some(d), cfg)
}

/// General inner bound, with extra starting points for the local search
/// (e.g. the joint-decoding optimum, which is always feasible here too).
pub fn lower_bound_cd_seeded(
    spec: &RelayChannelSpec,
    d: f64,
    cfg: &OptimizerConfig,
    starts: &[FactoredInput],
) -> Result<OptResult> {
    cfg.validate()?;
    let problem = BoundProblem::new(spec, BoundKind::LowerThm2, Some(d), cards_for(spec, cfg))?;
    let mut best = maximize_from(&problem, starts, cfg);
    for s in starts {
        let e = problem.evaluate(s);
        best.evaluations += 1;
        if e.feasible(cfg.feasibility_slack) && (!best.feasible || e.objective > best.best_value) {
            best = OptResult {
                best_value: e.objective,
                best_input: s.clone(),
                feasible: true,
                evaluations: best.evaluations,
                constraints: e.constraints,
                distortion: e.distortion,
            };
        }
    }
    Ok(best)
}

/// Inner bound under the stricter joint-decoding constraint.
pub fn lower_bound_cmg(spec: &RelayChannelSpec, d: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    solve(spec, BoundKind::LowerCmg, Some(d), cfg)
}

fn dmin_value(res: &OptResult) -> Result<f64> {
    if !res.feasible {
        return Err(Error::Domain("no feasible input for the minimum-distortion problem".into()));
    }
    Ok((-res.best_value).max(0.0))
}

/// Minimum distortion with its certificate (objective is minus the distortion).
pub fn min_distortion_certified(spec: &RelayChannelSpec, cfg: &OptimizerConfig) -> Result<OptResult> {
    solve(spec, BoundKind::DminThm3, None, cfg)
}

pub fn min_distortion(spec: &RelayChannelSpec, cfg: &OptimizerConfig) -> Result<f64> {
    dmin_value(&min_distortion_certified(spec, cfg)?)
}

/// Exhaustive search over deterministic inputs; returns `(D_min, x, x1)`,
/// the lowest-index pair on ties.
pub fn dmin_class_c1(spec: &RelayChannelSpec) -> Result<(f64, usize, usize)> {
    let cards = Cardinalities::resolve(spec, &AuxCardinalities::default());
    let problem = BoundProblem::new(spec, BoundKind::DminProp1, None, cards)?;
    let (nx, nx1) = (spec.x().size(), spec.x1().size());
    let mut best = (f64::INFINITY, 0, 0);
    for x in 0..nx {
        for x1 in 0..nx1 {
            let input = problem.template.with_theta(vertex(nx * nx1, x * nx1 + x1))?;
            let e = problem.try_evaluate(&input)?;
            let dist = e.distortion.unwrap_or(f64::INFINITY);
            if dist < best.0 {
                best = (dist, x, x1);
            }
        }
    }
    Ok(best)
}

/// Minimum distortion for class C2, with a randomized relay-side estimate.
pub fn dmin_class_c2(spec: &RelayChannelSpec, cfg: &OptimizerConfig) -> Result<f64> {
    dmin_value(&solve(spec, BoundKind::DminProp2, None, cfg)?)
}

pub fn cd_class_c3(spec: &RelayChannelSpec, d: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    solve(spec, BoundKind::CdC3, Some(d), cfg)
}

pub fn cd_class_c4(spec: &RelayChannelSpec, d: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    solve(spec, BoundKind::CdC4, Some(d), cfg)
}

pub fn cd_class_c5(spec: &RelayChannelSpec, d: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    solve(spec, BoundKind::CdC5, Some(d), cfg)
}

/// Sweeps a rate kind over an ascending, nonempty distortion grid.
pub fn tradeoff_curve(
    spec: &RelayChannelSpec,
    kind: BoundKind,
    d_grid: &[f64],
    cfg: &OptimizerConfig,
) -> Result<TradeoffCurve> {
    if kind.is_dmin() {
        return Err(Error::Domain(format!("{} is not a rate bound", kind.name())));
    }
    if d_grid.is_empty() {
        return Err(Error::Domain("empty distortion grid".into()));
    }
    cfg.validate()?;
    let cards = cards_for(spec, cfg);
    crate::optimizer::sweep_distortion(
        |d| BoundProblem::new(spec, kind, Some(d), cards),
        d_grid,
        kind.name(),
        cfg,
    )
}

#[cfg(test)]
mod tests;
