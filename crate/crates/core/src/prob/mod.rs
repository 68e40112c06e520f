//! Finite-alphabet probability algebra.
//!
//! A [`JointDistribution`] is a dense row-major tensor over an ordered list of
//! named [`Alphabet`]s; the last variable varies fastest. [`ConditionalKernel`]s
//! attach new variables to an existing joint, and [`compose`] chains them into
//! a single joint. Entropies and mutual informations live in [`info`], the
//! scalar helpers `h2`, `h3` and binary convolution in [`scalar`].

pub mod info;
pub mod scalar;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use info::{entropy, mutual_information, InfoView};
pub use scalar::{conv, h2, h2_inverse, h3};

/// Drift below this is renormalized away, above it is an error.
pub const NORMALIZATION_DRIFT: f64 = 1e-9;

/// Sums this close to one are left untouched so reconstruction is idempotent.
pub(crate) const ROUNDOFF: f64 = 8.0 * f64::EPSILON;

/// A named finite alphabet with symbols `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    name: String,
    size: usize,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, size: usize) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::Domain(format!("alphabet {name} has size 0")));
        }
        if name.is_empty() {
            return Err(Error::Name("empty alphabet name".into()));
        }
        Ok(Self { name, size })
    }

    /// Infallible constructor for alphabets whose size is known to be positive.
    pub(crate) fn sized(name: &str, size: usize) -> Self {
        debug_assert!(size > 0);
        Self {
            name: name.to_string(),
            size: size.max(1),
        }
    }

    pub fn binary(name: &str) -> Self {
        Self::sized(name, 2)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn renamed(&self, name: &str) -> Self {
        Self::sized(name, self.size)
    }
}

pub(crate) fn product_size(vars: &[Alphabet]) -> usize {
    vars.iter().map(Alphabet::size).product()
}

/// Row-major strides for `vars` (last variable has stride 1).
pub(crate) fn strides(vars: &[Alphabet]) -> Vec<usize> {
    let mut out = vec![1; vars.len()];
    for i in (0..vars.len().saturating_sub(1)).rev() {
        out[i] = out[i + 1] * vars[i + 1].size();
    }
    out
}

/// Mixed-radix index of `tuple` under `vars`.
pub(crate) fn encode(vars: &[Alphabet], tuple: &[usize]) -> usize {
    tuple
        .iter()
        .zip(vars)
        .fold(0, |acc, (&d, a)| acc * a.size() + d)
}

#[allow(dead_code)]
pub(crate) fn decode(vars: &[Alphabet], mut index: usize, out: &mut [usize]) {
    for i in (0..vars.len()).rev() {
        let s = vars[i].size();
        out[i] = index % s;
        index /= s;
    }
}

/// Advance a mixed-radix odometer; returns false after the last tuple.
pub(crate) fn advance(vars: &[Alphabet], digits: &mut [usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < vars[i].size() {
            return true;
        }
        digits[i] = 0;
    }
    false
}

fn check_unique(vars: &[Alphabet]) -> Result<()> {
    for (i, a) in vars.iter().enumerate() {
        if vars[..i].iter().any(|b| b.name == a.name) {
            return Err(Error::Name(format!("{} appears twice", a.name)));
        }
    }
    Ok(())
}

fn check_cells(cells: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &p in cells {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::Domain(format!("probability cell {p} is not a nonnegative real")));
        }
        sum += p;
    }
    Ok(sum)
}

/// Labeled probability tensor over an ordered list of finite alphabets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointDistribution {
    vars: Vec<Alphabet>,
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Builds a joint from row-major cells. Sums within [`NORMALIZATION_DRIFT`]
    /// of one are renormalized; anything further off is rejected.
    pub fn new(vars: Vec<Alphabet>, probs: Vec<f64>) -> Result<Self> {
        check_unique(&vars)?;
        if probs.len() != product_size(&vars) {
            return Err(Error::Factorization(format!(
                "{} cells supplied for a tensor of {} cells",
                probs.len(),
                product_size(&vars)
            )));
        }
        let sum = check_cells(&probs)?;
        if (sum - 1.0).abs() > NORMALIZATION_DRIFT {
            return Err(Error::Normalization(sum));
        }
        let mut probs = probs;
        if (sum - 1.0).abs() > ROUNDOFF {
            probs.iter_mut().for_each(|p| *p /= sum);
        }
        Ok(Self { vars, probs })
    }

    pub fn from_fn(vars: Vec<Alphabet>, f: impl Fn(&[usize]) -> f64) -> Result<Self> {
        let n = product_size(&vars);
        let mut digits = vec![0; vars.len()];
        let mut probs = Vec::with_capacity(n);
        for _ in 0..n {
            probs.push(f(&digits));
            advance(&vars, &mut digits);
        }
        Self::new(vars, probs)
    }

    pub fn uniform(vars: Vec<Alphabet>) -> Result<Self> {
        let n = product_size(&vars);
        Self::new(vars, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(vars: Vec<Alphabet>, tuple: &[usize]) -> Result<Self> {
        if tuple.len() != vars.len() || tuple.iter().zip(&vars).any(|(&d, a)| d >= a.size()) {
            return Err(Error::Domain(format!("tuple {tuple:?} outside the alphabets")));
        }
        let mut probs = vec![0.0; product_size(&vars)];
        probs[encode(&vars, tuple)] = 1.0;
        Self::new(vars, probs)
    }

    /// Independent product of binary variables with the given `P(=1)` values.
    pub fn bernoulli_product(names: &[&str], ones: &[f64]) -> Result<Self> {
        if names.len() != ones.len() {
            return Err(Error::Domain("one probability per variable".into()));
        }
        for &p in ones {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("Bernoulli parameter {p}")));
            }
        }
        let vars = names.iter().map(|n| Alphabet::binary(n)).collect();
        Self::from_fn(vars, |t| {
            t.iter()
                .zip(ones)
                .map(|(&b, &p)| if b == 1 { p } else { 1.0 - p })
                .product()
        })
    }

    pub fn variables(&self) -> &[Alphabet] {
        &self.vars
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(Alphabet::name).collect()
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::Name(name.to_string()))
    }

    pub fn alphabet(&self, name: &str) -> Result<&Alphabet> {
        Ok(&self.vars[self.position(name)?])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vars.iter().any(|a| a.name == name)
    }

    pub fn prob(&self, tuple: &[usize]) -> f64 {
        self.probs[encode(&self.vars, tuple)]
    }

    /// Sums out every variable not named in `keep`; kept variables retain
    /// their original order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<Self> {
        let mut flags = vec![false; self.vars.len()];
        for name in keep {
            let p = self.position(name)?;
            if flags[p] {
                return Err(Error::Name(format!("{name} listed twice")));
            }
            flags[p] = true;
        }
        let kept: Vec<Alphabet> = self
            .vars
            .iter()
            .zip(&flags)
            .filter(|(_, &k)| k)
            .map(|(a, _)| a.clone())
            .collect();
        let kstrides = strides(&kept);
        let mut map_stride = vec![0; self.vars.len()];
        let mut j = 0;
        for (i, &k) in flags.iter().enumerate() {
            if k {
                map_stride[i] = kstrides[j];
                j += 1;
            }
        }
        let mut out = vec![0.0; product_size(&kept)];
        let mut digits = vec![0; self.vars.len()];
        for &p in &self.probs {
            if p > 0.0 {
                let idx: usize = digits.iter().zip(&map_stride).map(|(d, s)| d * s).sum();
                out[idx] += p;
            }
            advance(&self.vars, &mut digits);
        }
        Ok(Self {
            vars: kept,
            probs: out,
        })
    }

    /// Bayes-normalized slice given a partial assignment.
    pub fn condition(&self, on: &[(&str, usize)]) -> Result<Self> {
        let mut fixed: Vec<Option<usize>> = vec![None; self.vars.len()];
        for &(name, value) in on {
            let p = self.position(name)?;
            if value >= self.vars[p].size {
                return Err(Error::Domain(format!("{name}={value} outside alphabet")));
            }
            if fixed[p].is_some() {
                return Err(Error::Name(format!("{name} assigned twice")));
            }
            fixed[p] = Some(value);
        }
        let rest: Vec<Alphabet> = self
            .vars
            .iter()
            .zip(&fixed)
            .filter(|(_, f)| f.is_none())
            .map(|(a, _)| a.clone())
            .collect();
        let mut out = Vec::with_capacity(product_size(&rest));
        let mut digits = vec![0; self.vars.len()];
        let mut mass = 0.0;
        for &p in &self.probs {
            if digits.iter().zip(&fixed).all(|(d, f)| f.map_or(true, |v| v == *d)) {
                out.push(p);
                mass += p;
            }
            advance(&self.vars, &mut digits);
        }
        if mass <= 1e-15 {
            return Err(Error::Conditioning(mass));
        }
        out.iter_mut().for_each(|p| *p /= mass);
        Ok(Self {
            vars: rest,
            probs: out,
        })
    }

    /// Replaces one variable by consecutive sub-variables whose sizes multiply
    /// to the original size. Row-major layout makes this a pure relabel.
    pub fn split_variable(&self, name: &str, parts: &[Alphabet]) -> Result<Self> {
        let p = self.position(name)?;
        let vars = split_vars(&self.vars, p, parts)?;
        Ok(Self {
            vars,
            probs: self.probs.clone(),
        })
    }

    pub fn rename(&self, from: &str, to: &str) -> Result<Self> {
        let p = self.position(from)?;
        let mut vars = self.vars.clone();
        vars[p] = vars[p].renamed(to);
        check_unique(&vars)?;
        Ok(Self {
            vars,
            probs: self.probs.clone(),
        })
    }

    /// Reorders variables to match `order` (which must be a permutation).
    pub fn permute(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.vars.len() {
            return Err(Error::Name(format!("permutation {order:?} of {:?}", self.names())));
        }
        let pos: Vec<usize> = order.iter().map(|n| self.position(n)).collect::<Result<_>>()?;
        let vars: Vec<Alphabet> = pos.iter().map(|&p| self.vars[p].clone()).collect();
        check_unique(&vars)?;
        let old_strides = strides(&self.vars);
        let mut digits = vec![0; vars.len()];
        let mut probs = Vec::with_capacity(self.probs.len());
        for _ in 0..self.probs.len() {
            let idx: usize = digits.iter().zip(&pos).map(|(d, &p)| d * old_strides[p]).sum();
            probs.push(self.probs[idx]);
            advance(&vars, &mut digits);
        }
        Ok(Self { vars, probs })
    }

    pub fn info(&self) -> InfoView<'_> {
        InfoView::new(self)
    }
}

pub(crate) fn split_vars(vars: &[Alphabet], p: usize, parts: &[Alphabet]) -> Result<Vec<Alphabet>> {
    if product_size(parts) != vars[p].size {
        return Err(Error::Domain(format!(
            "split of {} (size {}) into parts of total size {}",
            vars[p].name,
            vars[p].size,
            product_size(parts)
        )));
    }
    let mut out = Vec::with_capacity(vars.len() + parts.len());
    out.extend_from_slice(&vars[..p]);
    out.extend_from_slice(parts);
    out.extend_from_slice(&vars[p + 1..]);
    check_unique(&out)?;
    Ok(out)
}

/// Conditional pmf `P(output | given)`: one row per given-tuple.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionalKernel {
    given: Vec<Alphabet>,
    output: Vec<Alphabet>,
    rows: Vec<f64>,
}

impl ConditionalKernel {
    pub fn new(given: Vec<Alphabet>, output: Vec<Alphabet>, rows: Vec<f64>) -> Result<Self> {
        let mut all = given.clone();
        all.extend(output.iter().cloned());
        check_unique(&all)?;
        if output.is_empty() {
            return Err(Error::Factorization("kernel without output variables".into()));
        }
        let width = product_size(&output);
        let n = product_size(&given);
        if rows.len() != n * width {
            return Err(Error::Factorization(format!(
                "{} entries supplied for a {}x{} kernel",
                rows.len(),
                n,
                width
            )));
        }
        check_cells(&rows)?;
        let mut rows = rows;
        for r in rows.chunks_mut(width) {
            let s: f64 = r.iter().sum();
            if (s - 1.0).abs() > NORMALIZATION_DRIFT {
                return Err(Error::Normalization(s));
            }
            if (s - 1.0).abs() > ROUNDOFF {
                r.iter_mut().for_each(|p| *p /= s);
            }
        }
        Ok(Self {
            given,
            output,
            rows,
        })
    }

    pub fn from_fn(
        given: Vec<Alphabet>,
        output: Vec<Alphabet>,
        f: impl Fn(&[usize], &[usize]) -> f64,
    ) -> Result<Self> {
        let mut rows = Vec::with_capacity(product_size(&given) * product_size(&output));
        let mut g = vec![0; given.len()];
        for _ in 0..product_size(&given) {
            let mut o = vec![0; output.len()];
            for _ in 0..product_size(&output) {
                rows.push(f(&g, &o));
                advance(&output, &mut o);
            }
            advance(&given, &mut g);
        }
        Self::new(given, output, rows)
    }

    /// Kernel placing all mass on `f(given)`.
    pub fn deterministic(
        given: Vec<Alphabet>,
        output: Vec<Alphabet>,
        f: impl Fn(&[usize]) -> Vec<usize>,
    ) -> Result<Self> {
        let out_vars = output.clone();
        Self::from_fn(given, output, |g, o| {
            let target = f(g);
            debug_assert_eq!(target.len(), out_vars.len());
            if target.as_slice() == o {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn given(&self) -> &[Alphabet] {
        &self.given
    }

    pub fn output(&self) -> &[Alphabet] {
        &self.output
    }

    pub fn num_rows(&self) -> usize {
        product_size(&self.given)
    }

    pub fn width(&self) -> usize {
        product_size(&self.output)
    }

    pub fn row(&self, given_index: usize) -> &[f64] {
        let w = self.width();
        &self.rows[given_index * w..(given_index + 1) * w]
    }

    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    /// `P(output = out | given = g)` for full tuples.
    pub fn prob(&self, given: &[usize], out: &[usize]) -> f64 {
        self.row(encode(&self.given, given))[encode(&self.output, out)]
    }

    pub fn split_given(&self, name: &str, parts: &[Alphabet]) -> Result<Self> {
        let p = self
            .given
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::Name(name.into()))?;
        Ok(Self {
            given: split_vars(&self.given, p, parts)?,
            output: self.output.clone(),
            rows: self.rows.clone(),
        })
    }

    pub fn split_output(&self, name: &str, parts: &[Alphabet]) -> Result<Self> {
        let p = self
            .output
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::Name(name.into()))?;
        Ok(Self {
            given: self.given.clone(),
            output: split_vars(&self.output, p, parts)?,
            rows: self.rows.clone(),
        })
    }
}

/// One link of a chain factorization.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Joint(JointDistribution),
    Kernel(ConditionalKernel),
}

impl From<JointDistribution> for Factor {
    fn from(j: JointDistribution) -> Self {
        Factor::Joint(j)
    }
}

impl From<ConditionalKernel> for Factor {
    fn from(k: ConditionalKernel) -> Self {
        Factor::Kernel(k)
    }
}

/// Multiplies a chain of factors into one joint. Each kernel's given
/// variables must already be produced by earlier factors; new variables are
/// appended in chain order.
pub fn compose(factors: &[Factor]) -> Result<JointDistribution> {
    let mut vars: Vec<Alphabet> = Vec::new();
    let mut probs = vec![1.0];
    for f in factors {
        match f {
            Factor::Joint(j) => {
                for a in &j.vars {
                    if vars.iter().any(|b| b.name == a.name) {
                        return Err(Error::Factorization(format!("{} produced twice", a.name)));
                    }
                }
                let mut next = Vec::with_capacity(probs.len() * j.probs.len());
                for &p in &probs {
                    next.extend(j.probs.iter().map(|q| p * q));
                }
                probs = next;
                vars.extend(j.vars.iter().cloned());
            }
            Factor::Kernel(k) => {
                probs = apply_kernel(&vars, &probs, k)?;
                vars.extend(k.output.iter().cloned());
            }
        }
    }
    JointDistribution::new(vars, probs)
}

fn apply_kernel(vars: &[Alphabet], probs: &[f64], k: &ConditionalKernel) -> Result<Vec<f64>> {
    let mut gpos = Vec::with_capacity(k.given.len());
    for g in &k.given {
        let p = vars.iter().position(|a| a.name == g.name).ok_or_else(|| {
            Error::Factorization(format!("conditioning variable {} is not yet defined", g.name))
        })?;
        if vars[p].size != g.size {
            return Err(Error::Factorization(format!(
                "{} has size {} in the chain but {} in the kernel",
                g.name, vars[p].size, g.size
            )));
        }
        gpos.push(p);
    }
    for o in &k.output {
        if vars.iter().any(|a| a.name == o.name) {
            return Err(Error::Factorization(format!("{} produced twice", o.name)));
        }
    }
    let gstr = strides(&k.given);
    let w = k.width();
    let mut next = vec![0.0; probs.len() * w];
    let mut digits = vec![0; vars.len()];
    for (c, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            let gi: usize = gpos.iter().zip(&gstr).map(|(&pos, s)| digits[pos] * s).sum();
            let row = k.row(gi);
            for (dst, &q) in next[c * w..(c + 1) * w].iter_mut().zip(row) {
                *dst = p * q;
            }
        }
        advance(vars, &mut digits);
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(names: &[&str]) -> Vec<Alphabet> {
        names.iter().map(|n| Alphabet::binary(n)).collect()
    }

    #[test]
    fn marginal_of_uniform_is_uniform() {
        let j = JointDistribution::uniform(bits(&["X", "Y"])).unwrap();
        let m = j.marginalize(&["X"]).unwrap();
        assert_eq!(m.probabilities(), &[0.5, 0.5]);
    }

    #[test]
    fn marginal_of_point_mass() {
        let j = JointDistribution::point_mass(bits(&["X", "Y"]), &[0, 0]).unwrap();
        let m = j.marginalize(&["Y"]).unwrap();
        assert_eq!(m.probabilities(), &[1.0, 0.0]);
    }

    #[test]
    fn marginalize_keeps_original_order() {
        let vars = vec![
            Alphabet::new("A", 2).unwrap(),
            Alphabet::new("B", 3).unwrap(),
            Alphabet::new("C", 2).unwrap(),
        ];
        let j = JointDistribution::from_fn(vars, |t| (1 + t[0] + 2 * t[1] + 3 * t[2]) as f64 / 60.0)
            .unwrap();
        let m = j.marginalize(&["C", "A"]).unwrap();
        assert_eq!(m.names(), vec!["A", "C"]);
        // P(A=1, C=1) = sum_b (1+1+2b+3)/60 = (5+7+9)/60
        assert!((m.prob(&[1, 1]) - 21.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_names_are_rejected() {
        let j = JointDistribution::uniform(bits(&["X"])).unwrap();
        assert!(matches!(j.marginalize(&["Z"]), Err(Error::Name(_))));
        assert!(matches!(j.condition(&[("Z", 0)]), Err(Error::Name(_))));
    }

    #[test]
    fn conditioning_independent_leaves_marginal() {
        let j = JointDistribution::bernoulli_product(&["X", "Y"], &[0.3, 0.8]).unwrap();
        let c = j.condition(&[("X", 0)]).unwrap();
        assert!((c.prob(&[1]) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn conditioning_copy_gives_point_mass() {
        let j = JointDistribution::from_fn(bits(&["X", "Y"]), |t| if t[0] == t[1] { 0.5 } else { 0.0 })
            .unwrap();
        let c = j.condition(&[("X", 1)]).unwrap();
        assert_eq!(c.probabilities(), &[0.0, 1.0]);
    }

    #[test]
    fn conditioning_on_null_event_fails() {
        let j = JointDistribution::point_mass(bits(&["X", "Y"]), &[0, 0]).unwrap();
        assert!(matches!(j.condition(&[("X", 1)]), Err(Error::Conditioning(_))));
    }

    #[test]
    fn compose_copy_kernel_is_diagonal() {
        let px = JointDistribution::uniform(bits(&["X"])).unwrap();
        let copy = ConditionalKernel::deterministic(bits(&["X"]), bits(&["Y"]), |g| vec![g[0]]).unwrap();
        let j = compose(&[px.into(), copy.into()]).unwrap();
        assert_eq!(j.probabilities(), &[0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn compose_product_channel() {
        // Y1 = S * X with fair S and X: P(Y1 = 1) = 1/4.
        let ps = JointDistribution::bernoulli_product(&["S"], &[0.5]).unwrap();
        let px = JointDistribution::bernoulli_product(&["X"], &[0.5]).unwrap();
        let k = ConditionalKernel::deterministic(bits(&["S", "X"]), bits(&["Y1"]), |g| vec![g[0] * g[1]])
            .unwrap();
        let j = compose(&[ps.into(), px.into(), k.into()]).unwrap();
        let m = j.marginalize(&["Y1"]).unwrap();
        assert!((m.prob(&[1]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn compose_rejects_dangling_and_duplicate_variables() {
        let px = JointDistribution::uniform(bits(&["X"])).unwrap();
        let k = ConditionalKernel::deterministic(bits(&["W"]), bits(&["Y"]), |g| vec![g[0]]).unwrap();
        assert!(matches!(
            compose(&[px.clone().into(), k.into()]),
            Err(Error::Factorization(_))
        ));
        assert!(matches!(
            compose(&[px.clone().into(), px.into()]),
            Err(Error::Factorization(_))
        ));
    }

    #[test]
    fn normalization_drift_policy() {
        let vars = bits(&["X"]);
        let ok = JointDistribution::new(vars.clone(), vec![0.5, 0.5 + 1e-11]).unwrap();
        assert!((ok.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(matches!(
            JointDistribution::new(vars, vec![0.5, 0.6]),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn split_and_permute_relabel_cells() {
        let vars = vec![Alphabet::new("X", 4).unwrap(), Alphabet::binary("Y")];
        let j = JointDistribution::from_fn(vars, |t| (t[0] * 2 + t[1] + 1) as f64 / 36.0).unwrap();
        let s = j
            .split_variable("X", &[Alphabet::binary("Xr"), Alphabet::binary("Xd")])
            .unwrap();
        assert_eq!(s.names(), vec!["Xr", "Xd", "Y"]);
        assert_eq!(s.prob(&[1, 0, 1]), j.prob(&[2, 1]));
        let p = s.permute(&["Y", "Xd", "Xr"]).unwrap();
        assert_eq!(p.prob(&[1, 0, 1]), s.prob(&[1, 0, 1]));
        assert_eq!(p.prob(&[0, 1, 1]), s.prob(&[1, 1, 0]));
    }
}
