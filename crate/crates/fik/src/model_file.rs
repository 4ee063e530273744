//! JSON model documents: `{worlds, leq, r, val}`, plus the annotated variant
//! written for extracted countermodels.

use std::collections::BTreeMap;

use fik_core::{ExtractionReport, Model};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    #[serde(default)]
    pub r: Vec<(String, String)>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("malformed model document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] fik_core::kripke::ModelError),
}

impl ModelDoc {
    pub fn parse(text: &str) -> Result<ModelDoc, ModelFileError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the model exactly as written; with `close_leq` the reflexive
    /// pairs are added first.
    pub fn to_model(&self, close_leq: bool) -> Result<Model, ModelFileError> {
        let names: Vec<&str> = self.worlds.iter().map(String::as_str).collect();
        let mut m = Model::from_named(
            &names,
            self.leq.iter().map(|(a, b)| (a.as_str(), b.as_str())),
            self.r.iter().map(|(a, b)| (a.as_str(), b.as_str())),
            self.val.iter().flat_map(|(w, ps)| ps.iter().map(move |p| (w.as_str(), p.as_str()))),
        )?;
        if close_leq {
            m.close_leq_reflexive();
        }
        Ok(m)
    }

    pub fn from_model(m: &Model) -> ModelDoc {
        let name = |w: usize| m.name(w).to_string();
        let pairs = |rel: &fik_core::kripke::Relation| rel.pairs().map(|(a, b)| (name(a), name(b))).collect();
        ModelDoc {
            worlds: m.names().to_vec(),
            leq: pairs(m.leq()),
            r: pairs(m.acc()),
            val: (0..m.len())
                .filter(|&w| !m.val(w).is_empty())
                .map(|w| (name(w), m.val(w).iter().map(|p| p.to_string()).collect()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents serialise")
    }
}

/// A countermodel together with the sequent each world was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountermodelDoc {
    #[serde(flatten)]
    pub model: ModelDoc,
    pub root: String,
    pub sequents: BTreeMap<String, String>,
}

impl CountermodelDoc {
    pub fn from_report(report: &ExtractionReport) -> CountermodelDoc {
        let m = &report.model;
        CountermodelDoc {
            model: ModelDoc::from_model(m),
            root: m.name(report.root).to_string(),
            sequents: report.worlds.iter().enumerate().map(|(w, s)| (m.name(w).to_string(), s.render())).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents serialise")
    }
}
