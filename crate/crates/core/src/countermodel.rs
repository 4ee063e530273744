//! Countermodel extraction from global-saturated leaves, and its independent
//! verification.
//!
//! Worlds are the distinct nested occurrences of the leaf; `x ≤ y` holds when
//! the sequent of `x` is structurally included in that of `y`, `R x y` when
//! `y` is a modal block directly inside `x`, and the atoms true at a world are
//! the atoms of its antecedent.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::calculus::{global_saturated, Goal};
use crate::formula::Formula;
use crate::kripke::{Model, Violation};
use crate::sequent::{structurally_included, Address, Sequent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionReport {
    pub model: Model,
    /// The sequent each world stands for, by world index.
    pub worlds: Vec<Sequent>,
    /// World of every nested occurrence, in canonical pre-order.
    pub world_of: Vec<(Address, usize)>,
    /// World of the leaf itself.
    pub root: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("sequent is not global-saturated")]
    NotSaturated,
}

/// Builds the model of a global-saturated sequent.
pub fn extract_model(leaf: &Sequent) -> Result<ExtractionReport, ExtractError> {
    if !global_saturated(leaf) {
        return Err(ExtractError::NotSaturated);
    }
    Ok(extract_unchecked(leaf))
}

/// The same construction without the saturation precondition.
pub fn extract_unchecked(leaf: &Sequent) -> ExtractionReport {
    let mut worlds: Vec<Sequent> = Vec::new();
    let mut index: BTreeMap<&Sequent, usize> = BTreeMap::new();
    let mut world_of = Vec::new();
    let occurrences = leaf.occurrences();
    for o in &occurrences {
        let w = *index.entry(o.sequent).or_insert_with(|| {
            worlds.push(o.sequent.clone());
            worlds.len() - 1
        });
        world_of.push((o.address.clone(), w));
    }
    let n = worlds.len();
    let mut model = Model::new((0..n).map(|i| alloc::format!("x{i}")).collect()).expect("distinct names");
    for a in 0..n {
        for b in 0..n {
            if structurally_included(&worlds[a], &worlds[b]) {
                model.add_leq(a, b).expect("in range");
            }
        }
        for m in &worlds[a].succedent.modal {
            model.add_acc(a, index[m]).expect("in range");
        }
        for p in &worlds[a].antecedent {
            if let Formula::Atom(name) = p {
                model.add_val(a, name).expect("atom names are valid");
            }
        }
    }
    ExtractionReport { model, worlds, world_of, root: 0 }
}

/// A formula on the wrong side of the truth lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthFailure {
    pub world: usize,
    pub formula: Formula,
    /// True if the formula is in the antecedent (and so should be forced).
    pub in_antecedent: bool,
}

/// Outcome of the five checks run on an extracted model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub preorder: Vec<Violation>,
    pub hereditary: Vec<Violation>,
    pub confluence: Vec<Violation>,
    pub truth: Vec<TruthFailure>,
    pub root_refuted: bool,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.preorder.is_empty()
            && self.hereditary.is_empty()
            && self.confluence.is_empty()
            && self.truth.is_empty()
            && self.root_refuted
    }

    /// Pass/fail per check, in order: pre-order, hereditary, forward
    /// confluence, truth lemma, root refutation.
    pub fn checks(&self) -> [(&'static str, bool); 5] {
        [
            ("pre-order", self.preorder.is_empty()),
            ("hereditary", self.hereditary.is_empty()),
            ("forward confluence", self.confluence.is_empty()),
            ("truth lemma", self.truth.is_empty()),
            ("root refutes goal", self.root_refuted),
        ]
    }

    pub fn summary(&self) -> String {
        let failed: Vec<&str> = self.checks().iter().filter(|c| !c.1).map(|c| c.0).collect();
        if failed.is_empty() {
            String::from("all checks passed")
        } else {
            alloc::format!("failed: {}", failed.join(", "))
        }
    }
}

impl From<Formula> for Goal {
    fn from(a: Formula) -> Goal {
        Goal::Formula(a)
    }
}

impl From<Sequent> for Goal {
    fn from(s: Sequent) -> Goal {
        Goal::Sequent(s)
    }
}

/// Re-checks an extraction against the frame conditions, the truth lemma at
/// every world, and refutation of `goal` at the root world.
pub fn verify_countermodel(report: &ExtractionReport, goal: &Goal) -> Verification {
    let m = &report.model;
    let mut v = Verification::default();
    for violation in m.validate() {
        match violation {
            Violation::NotReflexive { .. } | Violation::NotTransitive { .. } => v.preorder.push(violation),
            Violation::Hereditary { .. } => v.hereditary.push(violation),
            Violation::ForwardConfluence { .. } => v.confluence.push(violation),
        }
    }
    let mut truth: BTreeMap<&Formula, Vec<bool>> = BTreeMap::new();
    for s in &report.worlds {
        for a in s.antecedent.iter().chain(&s.succedent.formulas) {
            truth.entry(a).or_insert_with(|| m.truth_set(a));
        }
    }
    for (w, s) in report.worlds.iter().enumerate() {
        for a in &s.antecedent {
            if !truth[a][w] {
                v.truth.push(TruthFailure { world: w, formula: a.clone(), in_antecedent: true });
            }
        }
        for a in &s.succedent.formulas {
            if truth[a][w] {
                v.truth.push(TruthFailure { world: w, formula: a.clone(), in_antecedent: false });
            }
        }
    }
    v.root_refuted = match goal {
        Goal::Formula(a) => !m.truth_set(a)[report.root],
        Goal::Sequent(s) => !m.sequent_truth_set(s)[report.root],
    };
    v
}
