//! Derivation output: an indented text tree and a JSON tree document.

use std::fmt::Write;

use fik_core::calculus::{LeafStatus, Principal};
use fik_core::{Derivation, RuleInstance};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedDoc {
    pub rule: String,
    pub at: String,
    pub principal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusDoc {
    Inner,
    Axiomatic { axiom: String, at: String },
    GlobalSaturated,
    Open,
}

/// One node of the derivation tree, mirroring the in-memory derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationDoc {
    pub node: String,
    pub applied: Option<AppliedDoc>,
    pub status: StatusDoc,
    pub children: Vec<DerivationDoc>,
}

fn principal_text(p: &[Principal]) -> String {
    p.iter().map(Principal::to_string).collect::<Vec<_>>().join(", ")
}

fn applied(i: &RuleInstance) -> AppliedDoc {
    AppliedDoc { rule: i.rule.name().to_string(), at: i.at.to_string(), principal: i.principal.iter().map(Principal::to_string).collect() }
}

fn status(s: &LeafStatus) -> StatusDoc {
    match s {
        LeafStatus::Inner => StatusDoc::Inner,
        LeafStatus::Axiomatic { axiom, at } => StatusDoc::Axiomatic { axiom: axiom.name().to_string(), at: at.to_string() },
        LeafStatus::GlobalSaturated => StatusDoc::GlobalSaturated,
        LeafStatus::Open => StatusDoc::Open,
    }
}

impl DerivationDoc {
    pub fn from_derivation(d: &Derivation) -> DerivationDoc {
        Self::build(d, d.root())
    }

    fn build(d: &Derivation, id: usize) -> DerivationDoc {
        let n = d.node(id);
        DerivationDoc {
            node: n.sequent.render(),
            applied: n.rule.as_ref().map(applied),
            status: status(&n.status),
            children: n.children.iter().map(|&c| Self::build(d, c)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("derivation documents serialise")
    }
}

/// Text form: one sequent per line, children indented under the rule that
/// produced them. Leaves end with their status.
pub fn render_text(d: &Derivation) -> String {
    let mut out = String::new();
    let mut stack = vec![(d.root(), 0usize)];
    while let Some((id, depth)) = stack.pop() {
        let n = d.node(id);
        let pad = "  ".repeat(depth);
        write!(out, "{pad}{}", n.sequent).unwrap();
        match (&n.status, &n.rule) {
            (LeafStatus::Inner, Some(r)) => write!(out, "    by {} on {} at {}", r.rule.name(), principal_text(&r.principal), r.at),
            (LeafStatus::Axiomatic { axiom, at }, _) => write!(out, "    [{} at {at}]", axiom.name()),
            (LeafStatus::GlobalSaturated, _) => write!(out, "    [global-saturated]"),
            _ => write!(out, "    [open]"),
        }
        .unwrap();
        out.push('\n');
        stack.extend(n.children.iter().rev().map(|&c| (c, depth + 1)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use fik_core::{prove, Formula};

    #[test]
    fn text_and_json_agree_on_shape() {
        let r = prove(&Formula::parse("p & q -> q & p").unwrap()).unwrap();
        let d = r.derivation();
        let text = render_text(d);
        assert_eq!(text.lines().count(), d.len());
        assert!(text.starts_with("p & q => q & p    by andL on p & q at /"));
        let doc = DerivationDoc::from_derivation(d);
        let back: DerivationDoc = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.children.len(), 1);
    }
}
