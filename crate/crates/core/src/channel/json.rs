//! JSON document form of a channel.
//!
//! ```json
//! {
//!   "variables": [{"name": "X", "size": 2}, {"name": "X1", "size": 2}, ...],
//!   "kernel": [...],       // rows over (X, X1, S), columns over (Y, Y1), row-major
//!   "state_law": [...],    // cells over (S, Sd), row-major
//!   "distortion": [[...]], // |Sd| rows, one column per reconstruction symbol
//!   "tags": {"classes": ["C4"], "y_split": [2, 2], "relay_map": [[0, 1], [1, 2]]}
//! }
//! ```

use serde::{Deserialize, Serialize};

use super::names::*;
use super::{RelayChannelSpec, StructureTags};
use crate::error::{Error, Result};
use crate::prob::{Alphabet, ConditionalKernel, JointDistribution};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableDecl {
    pub name: String,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub variables: Vec<VariableDecl>,
    pub kernel: Vec<f64>,
    pub state_law: Vec<f64>,
    pub distortion: Vec<Vec<f64>>,
    #[serde(default)]
    pub tags: StructureTags,
}

impl ChannelDocument {
    pub fn from_spec(spec: &RelayChannelSpec) -> Self {
        let decl = |a: &Alphabet| VariableDecl {
            name: a.name().to_string(),
            size: a.size(),
        };
        Self {
            variables: [spec.x(), spec.x1(), spec.s(), spec.sd(), spec.y(), spec.y1()]
                .into_iter()
                .map(decl)
                .collect(),
            kernel: spec.kernel().rows().to_vec(),
            state_law: spec.state_law().probabilities().to_vec(),
            distortion: spec.distortion().to_vec(),
            tags: spec.tags().clone(),
        }
    }

    pub fn to_spec(&self) -> Result<RelayChannelSpec> {
        let find = |name: &str| -> Result<Alphabet> {
            let mut hits = self.variables.iter().filter(|v| v.name == name);
            let v = hits
                .next()
                .ok_or_else(|| Error::Spec(format!("variable {name} not declared")))?;
            if hits.next().is_some() {
                return Err(Error::Spec(format!("variable {name} declared twice")));
            }
            Alphabet::new(name, v.size)
        };
        if let Some(v) = self
            .variables
            .iter()
            .find(|v| ![X, X1, S, SD, Y, Y1].contains(&v.name.as_str()))
        {
            return Err(Error::Spec(format!("unexpected variable {}", v.name)));
        }
        let kernel = ConditionalKernel::new(
            vec![find(X)?, find(X1)?, find(S)?],
            vec![find(Y)?, find(Y1)?],
            self.kernel.clone(),
        )?;
        let law = JointDistribution::new(vec![find(S)?, find(SD)?], self.state_law.clone())?;
        RelayChannelSpec::new(kernel, law, self.distortion.clone(), self.tags.clone())
    }
}

pub fn spec_from_json(text: &str) -> Result<RelayChannelSpec> {
    let doc: ChannelDocument =
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("channel JSON: {e}")))?;
    doc.to_spec()
}

pub fn spec_to_json(spec: &RelayChannelSpec) -> String {
    serde_json::to_string_pretty(&ChannelDocument::from_spec(spec)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{make_example5, make_example6};

    #[test]
    fn document_reproduces_factory_channels() {
        for spec in [make_example5(0.5, 0.2).unwrap(), make_example6(0.9, 0.8, 0.5).unwrap()] {
            let back = spec_from_json(&spec_to_json(&spec)).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn missing_variable_is_a_spec_error() {
        let spec = make_example5(0.5, 0.2).unwrap();
        let mut doc = ChannelDocument::from_spec(&spec);
        doc.variables.retain(|v| v.name != "Sd");
        assert!(matches!(doc.to_spec(), Err(Error::Spec(_))));
    }

    #[test]
    fn unnormalized_kernel_is_rejected() {
        let spec = make_example5(0.5, 0.2).unwrap();
        let mut doc = ChannelDocument::from_spec(&spec);
        doc.kernel[0] += 0.1;
        assert!(doc.to_spec().is_err());
    }
}
