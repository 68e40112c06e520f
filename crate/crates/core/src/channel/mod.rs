//! Relay-channel problem instances.
//!
//! A [`RelayChannelSpec`] holds the kernel `P(Y,Y1|X,X1,S)`, the state law
//! `P(S,Sd)` and a distortion table `d(sd, shat)`. Variables use the fixed
//! names in [`names`]; orthogonal-component channels additionally expose the
//! split names `Xr`, `Xd`, `Yr`, `Yd`.

pub mod factories;
pub mod json;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::FactoredInput;
use crate::prob::{compose, Alphabet, ConditionalKernel, Factor, InfoView, JointDistribution};

pub use factories::{
    make_appendix_c_counterexample, make_example1, make_example4, make_example5, make_example6,
    make_sensing_mac,
};

/// Variable names shared by every channel and bound.
pub mod names {
    pub const X: &str = "X";
    pub const XR: &str = "Xr";
    pub const XD: &str = "Xd";
    pub const X1: &str = "X1";
    pub const S: &str = "S";
    pub const SD: &str = "Sd";
    pub const Y: &str = "Y";
    pub const YR: &str = "Yr";
    pub const YD: &str = "Yd";
    pub const Y1: &str = "Y1";
    pub const SHAT: &str = "Shat";
    pub const U: &str = "U";
    pub const A: &str = "A";
    pub const V: &str = "V";
    pub const T: &str = "T";
}

use names::*;

const AUDIT_TOL: f64 = 1e-10;

/// Structural channel classes with closed-form or simplified results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelClass {
    C1,
    C2,
    C3,
    C4,
    C5,
}

/// Declared class memberships plus the orthogonal-component layout they rely on.
///
/// `s_components` lists the sizes of the state components in row-major order;
/// component 0 is the relay-side state. `relay_map[x][yd]` is the C4 map `f`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StructureTags {
    #[serde(default)]
    pub classes: Vec<ChannelClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_split: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_split: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_components: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relay_map: Option<Vec<Vec<usize>>>,
}

impl StructureTags {
    pub fn has(&self, class: ChannelClass) -> bool {
        self.classes.contains(&class)
    }
}

/// Which composite variables appear split in an assembled joint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct JointLayout {
    pub split_x: bool,
    pub split_y: bool,
}

/// One relay-channel instance. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelayChannelSpec {
    kernel: ConditionalKernel,
    state_law: JointDistribution,
    distortion: Vec<Vec<f64>>,
    shat: Alphabet,
    tags: StructureTags,
}

/// Hamming distortion on an alphabet of size `n`.
pub fn hamming(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
        .collect()
}

impl RelayChannelSpec {
    /// Validates the pieces and machine-checks every declared class tag.
    pub fn new(
        kernel: ConditionalKernel,
        state_law: JointDistribution,
        distortion: Vec<Vec<f64>>,
        tags: StructureTags,
    ) -> Result<Self> {
        let given: Vec<&str> = kernel.given().iter().map(Alphabet::name).collect();
        let output: Vec<&str> = kernel.output().iter().map(Alphabet::name).collect();
        if given != [X, X1, S] || output != [Y, Y1] {
            return Err(Error::Spec(format!(
                "kernel must be P(Y,Y1|X,X1,S), got P({output:?}|{given:?})"
            )));
        }
        if state_law.names() != [S, SD] {
            return Err(Error::Spec(format!(
                "state law must be over (S,Sd), got {:?}",
                state_law.names()
            )));
        }
        if state_law.alphabet(S)?.size() != kernel.given()[2].size() {
            return Err(Error::Spec("state alphabet differs between kernel and state law".into()));
        }
        let sd = state_law.alphabet(SD)?.size();
        if distortion.len() != sd {
            return Err(Error::Spec(format!("distortion table needs {sd} rows")));
        }
        let width = distortion.first().map_or(0, Vec::len);
        if width == 0 || distortion.iter().any(|r| r.len() != width) {
            return Err(Error::Spec("distortion rows must share a positive width".into()));
        }
        if distortion.iter().flatten().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::Spec("distortion entries must be finite and nonnegative".into()));
        }
        let spec = Self {
            kernel,
            state_law,
            distortion,
            shat: Alphabet::sized(SHAT, width),
            tags,
        };
        spec.check_layout()?;
        spec.audit()?;
        Ok(spec)
    }

    /// Replaces the distortion table, possibly with a different reconstruction alphabet.
    pub fn with_distortion(&self, distortion: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            self.kernel.clone(),
            self.state_law.clone(),
            distortion,
            self.tags.clone(),
        )
    }

    pub fn kernel(&self) -> &ConditionalKernel {
        &self.kernel
    }

    pub fn state_law(&self) -> &JointDistribution {
        &self.state_law
    }

    pub fn distortion(&self) -> &[Vec<f64>] {
        &self.distortion
    }

    pub fn tags(&self) -> &StructureTags {
        &self.tags
    }

    pub fn x(&self) -> &Alphabet {
        &self.kernel.given()[0]
    }

    pub fn x1(&self) -> &Alphabet {
        &self.kernel.given()[1]
    }

    pub fn s(&self) -> &Alphabet {
        &self.kernel.given()[2]
    }

    pub fn sd(&self) -> &Alphabet {
        &self.state_law.variables()[1]
    }

    pub fn y(&self) -> &Alphabet {
        &self.kernel.output()[0]
    }

    pub fn y1(&self) -> &Alphabet {
        &self.kernel.output()[1]
    }

    /// Reconstruction alphabet; its size is the distortion table's width.
    pub fn shat(&self) -> &Alphabet {
        &self.shat
    }

    pub fn x_parts(&self) -> Option<(Alphabet, Alphabet)> {
        self.tags
            .x_split
            .map(|(r, d)| (Alphabet::sized(XR, r), Alphabet::sized(XD, d)))
    }

    pub fn y_parts(&self) -> Option<(Alphabet, Alphabet)> {
        self.tags
            .y_split
            .map(|(r, d)| (Alphabet::sized(YR, r), Alphabet::sized(YD, d)))
    }

    /// Bayes risk of the best constant reconstruction, the distortion reachable
    /// without any observation.
    pub fn prior_risk(&self) -> f64 {
        let psd = self
            .state_law
            .marginalize(&[SD])
            .expect("state law holds Sd");
        (0..self.shat.size())
            .map(|j| {
                psd.probabilities()
                    .iter()
                    .zip(&self.distortion)
                    .map(|(p, row)| p * row[j])
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest entry of the distortion table.
    pub fn d_max(&self) -> f64 {
        self.distortion.iter().flatten().copied().fold(0.0, f64::max)
    }

    fn check_layout(&self) -> Result<()> {
        if let Some((r, d)) = self.tags.x_split {
            if r * d != self.x().size() {
                return Err(Error::Spec(format!("x_split {r}x{d} vs |X|={}", self.x().size())));
            }
        }
        if let Some((r, d)) = self.tags.y_split {
            if r * d != self.y().size() {
                return Err(Error::Spec(format!("y_split {r}x{d} vs |Y|={}", self.y().size())));
            }
        }
        if let Some(c) = &self.tags.s_components {
            if c.is_empty() || c.contains(&0) || c.iter().product::<usize>() != self.s().size() {
                return Err(Error::Spec(format!("s_components {c:?} vs |S|={}", self.s().size())));
            }
        }
        if let Some(f) = &self.tags.relay_map {
            let yd = self.tags.y_split.map(|(_, d)| d).unwrap_or(0);
            if f.len() != self.x().size()
                || f.iter().any(|r| r.len() != yd || r.iter().any(|&v| v >= self.y1().size()))
            {
                return Err(Error::Spec("relay_map must be |X| x |Yd| with values in Y1".into()));
            }
        }
        Ok(())
    }

    /// State law and kernel with the requested composite variables split.
    pub fn channel_factors(&self, layout: JointLayout) -> Result<(JointDistribution, ConditionalKernel)> {
        let mut kernel = self.kernel.clone();
        if layout.split_x {
            let (r, d) = self
                .x_parts()
                .ok_or_else(|| Error::Factorization("channel declares no X split".into()))?;
            kernel = kernel.split_given(X, &[r, d])?;
        }
        if layout.split_y {
            let (r, d) = self
                .y_parts()
                .ok_or_else(|| Error::Factorization("channel declares no Y split".into()))?;
            kernel = kernel.split_output(Y, &[r, d])?;
        }
        Ok((self.state_law.clone(), kernel))
    }

    /// Full joint of channel variables and the auxiliaries in `input`. `X` is
    /// split when the input produces `Xr`/`Xd`; `Y` when an input factor reads
    /// `Yr` or `Yd`.
    pub fn assemble_joint(&self, input: &FactoredInput) -> Result<JointDistribution> {
        let produces = |n: &str| {
            input
                .factors()
                .iter()
                .any(|f| f.output.iter().any(|a| a.name() == n))
        };
        let reads = |n: &str| {
            input
                .factors()
                .iter()
                .any(|f| f.given.iter().any(|a| a.name() == n))
        };
        let layout = JointLayout {
            split_x: produces(XR),
            split_y: reads(YR) || reads(YD),
        };
        self.assemble(input, layout)
    }

    /// Joint under an explicit layout. The channel factors are inserted right
    /// before the first input factor that conditions on a channel output.
    pub fn assemble(&self, input: &FactoredInput, layout: JointLayout) -> Result<JointDistribution> {
        let (law, kernel) = self.channel_factors(layout)?;
        let channel_vars: Vec<String> = law
            .variables()
            .iter()
            .chain(kernel.output())
            .map(|a| a.name().to_string())
            .collect();
        let mut chain: Vec<Factor> = Vec::with_capacity(input.factors().len() + 2);
        let mut inserted = false;
        for (i, f) in input.factors().iter().enumerate() {
            if !inserted && f.given.iter().any(|a| channel_vars.iter().any(|c| c == a.name())) {
                chain.push(law.clone().into());
                chain.push(kernel.clone().into());
                inserted = true;
            }
            chain.push(input.factor(i)?);
        }
        if !inserted {
            chain.push(law.into());
            chain.push(kernel.into());
        }
        compose(&chain)
    }

    /// Machine-checks every declared class tag.
    pub fn audit(&self) -> Result<()> {
        for &c in &self.tags.classes {
            self.audit_class(c)?;
        }
        Ok(())
    }

    fn state_split(&self, parts: usize) -> Result<Vec<Alphabet>> {
        let comps = self
            .tags
            .s_components
            .as_ref()
            .ok_or_else(|| Error::Audit("class tag needs s_components".into()))?;
        let sizes: Vec<usize> = if parts == 2 {
            vec![comps[0], comps[1..].iter().product()]
        } else if comps.len() == parts {
            comps.clone()
        } else {
            return Err(Error::Audit(format!("need {parts} state components, got {comps:?}")));
        };
        Ok(sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| Alphabet::sized(&format!("S{}", i + 1), s))
            .collect())
    }

    /// Channel joint with uniform inputs and split state, used to test which
    /// inputs each output depends on.
    fn uniform_kernel_joint(&self, layout: JointLayout, s_parts: &[Alphabet]) -> Result<JointDistribution> {
        let (_, mut kernel) = self.channel_factors(layout)?;
        if !s_parts.is_empty() {
            kernel = kernel.split_given(S, s_parts)?;
        }
        let inputs = JointDistribution::uniform(kernel.given().to_vec())?;
        compose(&[inputs.into(), kernel.into()])
    }

    fn audit_class(&self, class: ChannelClass) -> Result<()> {
        let ctx = format!("{class:?}");
        match class {
            ChannelClass::C1 | ChannelClass::C2 | ChannelClass::C3 => {
                let parts = self.state_split(2)?;
                let law = self.state_law.split_variable(S, &parts)?;
                let mut lv = law.info();
                if class == ChannelClass::C2 {
                    check(&mut lv, "S1 Sd", "S2", "", &ctx)?;
                } else {
                    check(&mut lv, "S1", "S2 Sd", "", &ctx)?;
                }
                let split_x = class == ChannelClass::C3;
                let j = self.uniform_kernel_joint(
                    JointLayout {
                        split_x,
                        split_y: false,
                    },
                    &parts,
                )?;
                let mut v = j.info();
                let xs = if split_x { "Xr Xd" } else { "X" };
                check(&mut v, "Y", "Y1", &format!("{xs} X1 S1 S2"), &ctx)?;
                check(&mut v, "Y1", "S2", &format!("{xs} X1 S1"), &ctx)?;
                check(&mut v, "Y", "S1", &format!("{xs} X1 S2"), &ctx)?;
                if split_x {
                    check(&mut v, "Y1", "Xd", "Xr X1 S1", &ctx)?;
                    check(&mut v, "Y", "Xr", "Xd X1 S2", &ctx)?;
                }
                Ok(())
            }
            ChannelClass::C4 => {
                let j = self.uniform_kernel_joint(
                    JointLayout {
                        split_x: false,
                        split_y: true,
                    },
                    &[],
                )?;
                let mut v = j.info();
                check(&mut v, "Yr", "Yd Y1", "X X1 S", &ctx)?;
                check(&mut v, "Yr", "X S", "X1", &ctx)?;
                check(&mut v, "Yd Y1", "X1", "X S", &ctx)?;
                let f = self
                    .tags
                    .relay_map
                    .as_ref()
                    .ok_or_else(|| Error::Audit("C4 needs a relay_map".into()))?;
                let (_, yd) = self.tags.y_split.expect("checked by split layout");
                let ny1 = self.y1().size();
                let rows = self.kernel.num_rows();
                let per_x = rows / self.x().size();
                for r in 0..rows {
                    let x = r / per_x;
                    for (o, &p) in self.kernel.row(r).iter().enumerate() {
                        let (y, y1) = (o / ny1, o % ny1);
                        if p > 0.0 && f[x][y % yd] != y1 {
                            return Err(Error::Audit(format!(
                                "C4: Y1={y1} but f(x={x}, yd={}) = {}",
                                y % yd,
                                f[x][y % yd]
                            )));
                        }
                    }
                }
                Ok(())
            }
            ChannelClass::C5 => {
                let parts = self.state_split(3)?;
                let law = self.state_law.split_variable(S, &parts)?;
                let mut lv = law.info();
                check(&mut lv, "S1 Sd", "S2 S3", "", &ctx)?;
                check(&mut lv, "S2", "S3", "", &ctx)?;
                let j = self.uniform_kernel_joint(
                    JointLayout {
                        split_x: true,
                        split_y: true,
                    },
                    &parts,
                )?;
                let mut v = j.info();
                let all = "Xr Xd X1 S1 S2 S3";
                check(&mut v, "Y1", "Yr Yd", all, &ctx)?;
                check(&mut v, "Yr", "Yd", all, &ctx)?;
                check(&mut v, "Y1", "Xd X1 S2 S3", "Xr S1", &ctx)?;
                check(&mut v, "Yr", "Xr Xd S1 S3", "X1 S2", &ctx)?;
                check(&mut v, "Yd", "Xr X1 S1 S2", "Xd S3", &ctx)?;
                Ok(())
            }
        }
    }
}

fn check(v: &mut InfoView<'_>, a: &str, b: &str, c: &str, ctx: &str) -> Result<()> {
    let i = v.mi(a, b, c)?;
    if i > AUDIT_TOL {
        return Err(Error::Audit(format!("{ctx}: I({a};{b}|{c}) = {i:e}")));
    }
    Ok(())
}
