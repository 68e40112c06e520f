//! Scalar parametrizations of the binary examples and the Gaussian D_min formulas.

use crate::error::{Error, Result};
use crate::optimizer::{Evaluation, FactoredInput, InputFactor, Problem};
use crate::prob::{conv, h2, h3, Alphabet};

fn check_unit(params: &[(&str, f64)]) -> Result<()> {
    for &(name, p) in params {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("{name} = {p} outside [0, 1]")));
        }
    }
    Ok(())
}

/// Class C3 example: `a = P_X1(1)`, `b, c = P_Xr|X1(1|1), (1|0)`,
/// `d, e = P_Xd|X1(1|1), (1|0)`. Returns `(alpha, beta, distortion)` with
/// `alpha = I(Xd X1; Y)` and `beta = I(Xr; Y1|X1) + I(Xd; Y|X1)`.
#[allow(clippy::too_many_arguments)]
pub fn example4_closed_form(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    ps1: f64,
    ps2: f64,
    ps3: f64,
) -> Result<(f64, f64, f64)> {
    check_unit(&[
        ("a", a),
        ("b", b),
        ("c", c),
        ("d", d),
        ("e", e),
        ("ps1", ps1),
        ("ps2", ps2),
        ("ps3", ps3),
    ])?;
    let (p1, p2, p3) = (ps1, ps2, ps3);
    let p23 = conv(p2, p3)?;
    let common = a * d * h3(p2 * p3, p23)? + (1.0 - a) * e * h2(p2)? + a * (1.0 - d) * h2(p3)?;
    let alpha = h3(a * d * p2 * p3, a * d * p23 + (1.0 - a) * e * p2 + a * (1.0 - d) * p3)? - common;
    let beta = (1.0 - a) * h2(c * p1)? + a * h2(b * p1)? - (a * b + (1.0 - a) * c) * h2(p1)?
        + a * h3(d * p2 * p3, (1.0 - p3) * (1.0 - d * p2))?
        + (1.0 - a) * h2(e * p2)?
        - common;
    let distortion = ((1.0 - a) * (1.0 - e) + a * (1.0 - d)) * p2.min(1.0 - p2)
        + a * d * ((1.0 - p2) * p3).min(p2 * (1.0 - p3));
    Ok((alpha, beta, distortion))
}

/// Class C4 example: `a = P_X(1)`, `b = P_X1(1)`. Returns
/// `(I(X; Y1 Yd), I(X1; Yr) + I(X; Yd), distortion)`.
pub fn example5_closed_form(a: f64, b: f64, ps: f64, pn: f64) -> Result<(f64, f64, f64)> {
    check_unit(&[("a", a), ("b", b), ("ps", ps), ("pn", pn)])?;
    let rate1 = h2(a)?;
    let rate2 = h2(conv(b, pn)?)? - h2(pn)? + h2(a * ps)? - a * h2(ps)?;
    let distortion = (1.0 - a) * ps.min(1.0 - ps);
    Ok((rate1, rate2, distortion))
}

/// Class C5 example: `a, b, c = P_Xr(1), P_Xd(1), P_X1(1)` and
/// `d, e, f = P_Shat|XrY1(1|00), (1|10), (1|11)`. Returns
/// `(alpha, beta, gamma, eta, distortion)`; the rate is
/// `alpha + min(beta, gamma - eta)` subject to `gamma >= eta`.
#[allow(clippy::too_many_arguments)]
pub fn example6_closed_form(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    f: f64,
    ps1: f64,
    ps2: f64,
    ps3: f64,
) -> Result<(f64, f64, f64, f64, f64)> {
    check_unit(&[
        ("a", a),
        ("b", b),
        ("c", c),
        ("d", d),
        ("e", e),
        ("f", f),
        ("ps1", ps1),
        ("ps2", ps2),
        ("ps3", ps3),
    ])?;
    let (p1, p2, p3) = (ps1, ps2, ps3);
    let alpha = h2(b * p3)? - b * h2(p3)?;
    let beta = h2(a * p1)? - a * h2(p1)?;
    let gamma = h2(c * p2)? - c * h2(p2)?;
    let eta = a * h2(e * (1.0 - p1) + f * p1)? - a * (1.0 - p1) * h2(e)? - a * p1 * h2(f)?;
    let distortion = (1.0 - a) * ((1.0 - d) * p1 + d * (1.0 - p1)) + a * e * (1.0 - p1) + a * (1.0 - f) * p1;
    Ok((alpha, beta, gamma, eta, distortion))
}

fn check_positive(params: &[(&str, f64)]) -> Result<()> {
    for &(name, v) in params {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} = {v} must be positive")));
        }
    }
    Ok(())
}

/// Gaussian relay example with the state seen at both relay and destination.
pub fn gaussian_dmin_example2(p1: f64, s1sq: f64, s2sq: f64) -> Result<f64> {
    check_positive(&[("p1", p1), ("s1sq", s1sq), ("s2sq", s2sq)])?;
    Ok(s1sq * s2sq / (p1 + s1sq + s2sq))
}

/// Gaussian relay example where only the relay link carries the state.
pub fn gaussian_dmin_example3(p1: f64, s1sq: f64, s2sq: f64) -> Result<f64> {
    check_positive(&[("p1", p1), ("s1sq", s1sq), ("s2sq", s2sq)])?;
    Ok(s1sq * s2sq / (p1 + s2sq))
}

/// Family of independent Bernoulli parameters, one binary block each.
pub fn bernoulli_family(names: &[&str]) -> FactoredInput {
    FactoredInput::new(
        names
            .iter()
            .map(|n| InputFactor::joint(&format!("P_{n}"), vec![Alphabet::binary(n)]))
            .collect(),
    )
}

/// `P(1)` of every block of a Bernoulli family.
pub fn bernoulli_params(input: &FactoredInput) -> Vec<f64> {
    input.theta().chunks(2).map(|c| c[1]).collect()
}

/// Which parametrized example a [`ClosedFormProblem`] maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormExample {
    Example4,
    Example5,
    Example6,
}

/// Maximizes one of the parametrized examples under `distortion <= d`.
#[derive(Clone, Debug)]
pub struct ClosedFormProblem {
    which: ClosedFormExample,
    ps: Vec<f64>,
    d: f64,
    template: FactoredInput,
}

impl ClosedFormProblem {
    /// `ps` holds the channel parameters: three for examples 4 and 6,
    /// `(ps, pn)` for example 5.
    pub fn new(which: ClosedFormExample, ps: &[f64], d: f64) -> Result<Self> {
        let (need, names): (usize, &[&str]) = match which {
            ClosedFormExample::Example4 => (3, &["a", "b", "c", "d", "e"]),
            ClosedFormExample::Example5 => (2, &["a", "b"]),
            ClosedFormExample::Example6 => (3, &["a", "b", "c", "d", "e", "f"]),
        };
        if ps.len() != need {
            return Err(Error::Domain(format!("{which:?} takes {need} channel parameters")));
        }
        if !(d >= 0.0) {
            return Err(Error::Domain(format!("target distortion {d} must be >= 0")));
        }
        Ok(Self {
            which,
            ps: ps.to_vec(),
            d,
            template: bernoulli_family(names),
        })
    }

    /// `(objective, constraint slacks, distortion)` at a parameter point.
    pub fn terms(&self, p: &[f64]) -> Result<(f64, Vec<f64>, f64)> {
        let ps = &self.ps;
        Ok(match self.which {
            ClosedFormExample::Example4 => {
                let (al, be, dist) = example4_closed_form(p[0], p[1], p[2], p[3], p[4], ps[0], ps[1], ps[2])?;
                (al.min(be), vec![], dist)
            }
            ClosedFormExample::Example5 => {
                let (r1, r2, dist) = example5_closed_form(p[0], p[1], ps[0], ps[1])?;
                (r1.min(r2), vec![], dist)
            }
            ClosedFormExample::Example6 => {
                let (al, be, ga, eta, dist) =
                    example6_closed_form(p[0], p[1], p[2], p[3], p[4], p[5], ps[0], ps[1], ps[2])?;
                (al + be.min(ga - eta), vec![ga - eta], dist)
            }
        })
    }
}

impl Problem for ClosedFormProblem {
    fn template(&self) -> FactoredInput {
        self.template.clone()
    }

    fn evaluate(&self, input: &FactoredInput) -> Evaluation {
        let p: Vec<f64> = bernoulli_params(input).iter().map(|v| v.clamp(0.0, 1.0)).collect();
        match self.terms(&p) {
            Ok((objective, mut constraints, dist)) => {
                constraints.push(self.d - dist);
                Evaluation {
                    objective,
                    constraints,
                    distortion: Some(dist),
                }
            }
            Err(_) => Evaluation::invalid(),
        }
    }
}
