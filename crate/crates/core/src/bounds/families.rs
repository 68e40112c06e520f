//! Hand-picked input families: corner strategies used as seeds, the
//! restricted family of the binary multiplicative example, the explicit
//! separation assignment, and the inner-to-outer lift.

use super::{coarse_simplex, deterministic_rows, template, vertex, BoundKind, BoundProblem, Cardinalities};
use crate::channel::{names::*, JointLayout, RelayChannelSpec};
use crate::error::{Error, Result};
use crate::estimator::bayes_risk;
use crate::optimizer::{
    maximize, sweep_distortion, Evaluation, FactoredInput, FnProblem, InputFactor, OptResult,
    OptimizerConfig, Problem, TradeoffCurve,
};

/// Concatenates factor rows in template order.
fn build(t: &FactoredInput, rows: Vec<Vec<f64>>) -> Result<FactoredInput> {
    t.with_theta(rows.into_iter().flatten().collect())
}

fn repeat_row(row: &[f64], times: usize) -> Vec<f64> {
    row.iter().copied().cycle().take(row.len() * times).collect()
}

/// Scheme input with `U`, `A` fixed at 0, `X ~ px`, `X1 ~ px1` independent,
/// and `V = vmap(u, a, x1, y1)`.
pub(crate) fn collapsed_scheme(
    t: &FactoredInput,
    px: &[f64],
    px1: &[f64],
    vmap: impl Fn(&[usize]) -> usize,
) -> Result<FactoredInput> {
    let f = t.factors();
    let (nu, na) = (f[0].width(), f[1].width());
    build(
        t,
        vec![
            vertex(nu, 0),
            repeat_row(&vertex(na, 0), nu),
            repeat_row(px, nu * na),
            repeat_row(px1, nu),
            deterministic_rows(&f[4].given, f[4].width(), vmap),
        ],
    )
}

/// Direct transmission: the relay sends a fixed symbol and `V` is constant.
/// For each relay symbol the source pmf maximizes `I(X;Y|x1)` under the
/// distortion target.
pub(crate) fn direct_transmission_seeds(p: &BoundProblem) -> Result<Vec<FactoredInput>> {
    let spec = p.spec();
    let d = p.target_distortion().unwrap_or(f64::INFINITY);
    let (x, x1) = (spec.x().clone(), spec.x1().clone());
    let nx1 = x1.size();
    let pxx1 = FactoredInput::new(vec![InputFactor::joint("P_XX1", vec![x.clone(), x1.clone()])]);
    let px_family = FactoredInput::new(vec![InputFactor::joint("P_X", vec![x])]);
    let cfg = OptimizerConfig {
        seeds: 2,
        refine_iterations: 200,
        ..OptimizerConfig::default()
    };
    let t = p.template.clone();
    let mut out = Vec::with_capacity(nx1);
    for sym in 0..nx1 {
        let inner = FnProblem::new(px_family.clone(), |inp: &FactoredInput| {
            let theta: Vec<f64> = inp
                .theta()
                .iter()
                .flat_map(|&q| (0..nx1).map(move |j| if j == sym { q } else { 0.0 }))
                .collect();
            let run = || -> Result<Evaluation> {
                let joint = spec.assemble_joint(&pxx1.with_theta(theta)?)?;
                let rate = joint.info().mi("X", "Y", "X1")?;
                let dist = bayes_risk(&joint, &[X, X1, Y], SD, spec.distortion())?;
                Ok(Evaluation {
                    objective: rate,
                    constraints: vec![d - dist],
                    distortion: Some(dist),
                })
            };
            run().unwrap_or_else(|_| Evaluation::invalid())
        });
        let best = maximize(&inner, &cfg);
        out.push(collapsed_scheme(&t, best.best_input.theta(), &vertex(nx1, sym), |_| 0)?);
    }
    Ok(out)
}

fn few_points(k: usize) -> Vec<Vec<f64>> {
    if k == 2 {
        return coarse_simplex(2);
    }
    let mut pts: Vec<Vec<f64>> = (0..k).map(|i| vertex(k, i)).collect();
    pts.push(vec![1.0 / k as f64; k]);
    pts
}

/// Pure compress-forward corners: `V` copies `Y1` (or `(X1, Y1)` when it fits).
pub(crate) fn compress_seeds(t: &FactoredInput, spec: &RelayChannelSpec) -> Result<Vec<FactoredInput>> {
    let nv = t.factors()[4].width();
    let (nx1, ny1) = (spec.x1().size(), spec.y1().size());
    let mut out = Vec::new();
    for px in few_points(spec.x().size()) {
        for px1 in few_points(nx1) {
            out.push(collapsed_scheme(t, &px, &px1, |g| g[3] % nv)?);
            if nx1 * ny1 <= nv {
                out.push(collapsed_scheme(t, &px, &px1, |g| g[2] * ny1 + g[3])?);
            }
        }
    }
    Ok(out)
}

/// The separating assignment of the strictness example: `U`, `A` constant,
/// `X`, `X1` fair, `V = X1 xor Y1` (the relay state). Needs binary `X`,
/// `X1`, `Y1` and `|V| >= 2`.
pub fn appendix_c_assignment(spec: &RelayChannelSpec, cards: Cardinalities) -> Result<FactoredInput> {
    if spec.x().size() != 2 || spec.x1().size() != 2 || spec.y1().size() != 2 || cards.v < 2 {
        return Err(Error::Domain("assignment needs binary X, X1, Y1 and |V| >= 2".into()));
    }
    let (t, _) = template(spec, BoundKind::LowerThm2, cards)?;
    collapsed_scheme(&t, &[0.5, 0.5], &[0.5, 0.5], |g| g[2] ^ g[3])
}

/// Re-expresses an inner-bound input as an outer-bound input with
/// `T = (U, A, V)` (index `(u |A| + a) |V| + v`), `P_XX1` the induced
/// marginal and `P_T|XX1Y1` the induced conditional (uniform on null rows).
/// The lifted point is feasible with an objective no smaller.
pub fn lift_lower_to_upper(spec: &RelayChannelSpec, lower: &FactoredInput) -> Result<FactoredInput> {
    let cards_map = lower.cardinalities();
    let get = |n: &str| {
        cards_map
            .get(n)
            .copied()
            .ok_or_else(|| Error::Factorization(format!("inner-bound input lacks {n}")))
    };
    let (nu, na, nv) = (get(U)?, get(A)?, get(V)?);
    let lower_cards = Cardinalities {
        t: 1,
        v: nv,
        u: nu,
        a: na,
    };
    let (lt, _) = template(spec, BoundKind::LowerThm2, lower_cards)?;
    if lt.factors() != lower.factors() {
        return Err(Error::Factorization("input is not an inner-bound family".into()));
    }
    let joint = spec.assemble(lower, JointLayout::default())?;
    let m = joint
        .marginalize(&[U, A, X, X1, Y1, V])?
        .permute(&[X, X1, Y1, U, A, V])?;
    let nt = nu * na * nv;
    let head: usize = [spec.x(), spec.x1(), spec.y1()].iter().map(|a| a.size()).product();
    let cells = m.probabilities();
    let mut rows = Vec::with_capacity(head * nt);
    for r in 0..head {
        let row = &cells[r * nt..(r + 1) * nt];
        let mass: f64 = row.iter().sum();
        if mass > 0.0 {
            rows.extend(row.iter().map(|p| p / mass));
        } else {
            rows.extend(std::iter::repeat(1.0 / nt as f64).take(nt));
        }
    }
    let pxx1 = joint.marginalize(&[X, X1])?.probabilities().to_vec();
    let (ut, _) = template(
        spec,
        BoundKind::UpperThm1,
        Cardinalities {
            t: nt,
            ..lower_cards
        },
    )?;
    ut.with_theta([pxx1, rows].concat())
}

const FAMILY: [&str; 5] = ["U", "Sigma", "Theta", "Delta", "N"];

/// Five-parameter family `A = U xor Sigma`, `X = A xor Theta`,
/// `X1 = U xor Delta`, `V = N Y1` with independent Bernoulli
/// `U, Sigma, Theta, Delta, N`.
pub fn example1_family() -> FactoredInput {
    super::bernoulli_family(&FAMILY)
}

/// Maps family parameters `(pU, pSigma, pTheta, pDelta, pN)` to the general
/// inner-bound input with binary `U, A, V`.
pub fn example1_family_to_scheme(spec: &RelayChannelSpec, p: &[f64]) -> Result<FactoredInput> {
    if p.len() != 5 || spec.x().size() != 2 || spec.x1().size() != 2 || spec.y1().size() != 2 {
        return Err(Error::Domain("family needs five parameters and binary X, X1, Y1".into()));
    }
    let cards = Cardinalities {
        t: 1,
        v: 2,
        u: 2,
        a: 2,
    };
    let (t, _) = template(spec, BoundKind::LowerThm2, cards)?;
    let flip = |q: f64, bit: usize| if bit == 1 { [q, 1.0 - q] } else { [1.0 - q, q] };
    let (pu, ps, pt, pd, pn) = (p[0], p[1], p[2], p[3], p[4]);
    let mut pa = Vec::new();
    for u in 0..2 {
        pa.extend(flip(ps, u));
    }
    let mut px = Vec::new();
    for _u in 0..2 {
        for a in 0..2 {
            px.extend(flip(pt, a));
        }
    }
    let mut px1 = Vec::new();
    for u in 0..2 {
        px1.extend(flip(pd, u));
    }
    // V given (u, a, x1, y1): V = N y1.
    let mut pv = Vec::new();
    for _ in 0..8 {
        for y1 in 0..2 {
            pv.extend(if y1 == 1 { [1.0 - pn, pn] } else { [1.0, 0.0] });
        }
    }
    build(&t, vec![vec![1.0 - pu, pu], pa, px, px1, pv])
}

/// The general inner bound restricted to [`example1_family`].
pub struct Example1FamilyProblem {
    inner: BoundProblem,
    family: FactoredInput,
}

impl Example1FamilyProblem {
    pub fn new(spec: &RelayChannelSpec, d: f64) -> Result<Self> {
        let cards = Cardinalities {
            t: 1,
            v: 2,
            u: 2,
            a: 2,
        };
        let inner = BoundProblem::new_unseeded(spec, BoundKind::LowerThm2, Some(d), cards)?;
        Ok(Self {
            inner,
            family: example1_family(),
        })
    }

    pub fn to_scheme(&self, input: &FactoredInput) -> Result<FactoredInput> {
        example1_family_to_scheme(self.inner.spec(), &super::bernoulli_params(input))
    }

    pub fn inner(&self) -> &BoundProblem {
        &self.inner
    }
}

impl Problem for Example1FamilyProblem {
    fn template(&self) -> FactoredInput {
        self.family.clone()
    }

    fn evaluate(&self, input: &FactoredInput) -> Evaluation {
        match self.to_scheme(input) {
            Ok(s) => self.inner.evaluate(&s),
            Err(_) => Evaluation::invalid(),
        }
    }
}

/// Best rate of the restricted family at distortion `d`, with the optimal
/// family point mapped back to a general inner-bound input.
pub fn lower_bound_example1_family(
    spec: &RelayChannelSpec,
    d: f64,
    cfg: &OptimizerConfig,
) -> Result<(OptResult, FactoredInput)> {
    cfg.validate()?;
    let problem = Example1FamilyProblem::new(spec, d)?;
    let res = maximize(&problem, cfg);
    let scheme = problem.to_scheme(&res.best_input)?;
    Ok((res, scheme))
}

/// Trade-off curve of the restricted family.
pub fn example1_family_curve(
    spec: &RelayChannelSpec,
    d_grid: &[f64],
    cfg: &OptimizerConfig,
) -> Result<TradeoffCurve> {
    cfg.validate()?;
    sweep_distortion(|d| Example1FamilyProblem::new(spec, d), d_grid, "lower-family", cfg)
}

/// Evaluates `kind` at one explicit input from scratch.
pub fn certify(
    spec: &RelayChannelSpec,
    kind: BoundKind,
    d: Option<f64>,
    input: &FactoredInput,
) -> Result<Evaluation> {
    let cards = Cardinalities {
        t: input.cardinalities().get(T).copied().unwrap_or(1),
        v: input.cardinalities().get(V).copied().unwrap_or(1),
        u: input.cardinalities().get(U).copied().unwrap_or(1),
        a: input.cardinalities().get(A).copied().unwrap_or(1),
    };
    let problem = BoundProblem::new_unseeded(spec, kind, d, cards)?;
    problem.try_evaluate(input)
}
