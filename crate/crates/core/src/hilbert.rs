//! Axiom recognition and derivation checking for the Hilbert system of FIK.
//!
//! The propositional base is a fixed ten-schema intuitionistic system; the
//! modal part adds `K□`, `K◇`, `N`, `DP` and `wCD`, closed under modus ponens
//! and necessitation. Schema atoms `p`, `q`, `r` are metavariables.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::Formula;

/// Metavariable assignment produced by schema matching.
pub type Substitution = BTreeMap<Arc<str>, Formula>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomSchema {
    Ipl1,
    Ipl2,
    Ipl3,
    Ipl4,
    Ipl5,
    Ipl6,
    Ipl7,
    Ipl8,
    Ipl9,
    Ipl10,
    KBox,
    KDia,
    N,
    Dp,
    Wcd,
}

impl AxiomSchema {
    /// Matching order; the first matching schema wins.
    pub const ALL: [AxiomSchema; 15] = [
        AxiomSchema::Ipl1,
        AxiomSchema::Ipl2,
        AxiomSchema::Ipl3,
        AxiomSchema::Ipl4,
        AxiomSchema::Ipl5,
        AxiomSchema::Ipl6,
        AxiomSchema::Ipl7,
        AxiomSchema::Ipl8,
        AxiomSchema::Ipl9,
        AxiomSchema::Ipl10,
        AxiomSchema::KBox,
        AxiomSchema::KDia,
        AxiomSchema::N,
        AxiomSchema::Dp,
        AxiomSchema::Wcd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomSchema::Ipl1 => "IPL1",
            AxiomSchema::Ipl2 => "IPL2",
            AxiomSchema::Ipl3 => "IPL3",
            AxiomSchema::Ipl4 => "IPL4",
            AxiomSchema::Ipl5 => "IPL5",
            AxiomSchema::Ipl6 => "IPL6",
            AxiomSchema::Ipl7 => "IPL7",
            AxiomSchema::Ipl8 => "IPL8",
            AxiomSchema::Ipl9 => "IPL9",
            AxiomSchema::Ipl10 => "IPL10",
            AxiomSchema::KBox => "K_box",
            AxiomSchema::KDia => "K_dia",
            AxiomSchema::N => "N",
            AxiomSchema::Dp => "DP",
            AxiomSchema::Wcd => "wCD",
        }
    }

    pub fn from_name(name: &str) -> Option<AxiomSchema> {
        AxiomSchema::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Schema text in the concrete syntax.
    pub fn text(self) -> &'static str {
        match self {
            AxiomSchema::Ipl1 => "p -> q -> p",
            AxiomSchema::Ipl2 => "(p -> q -> r) -> (p -> q) -> p -> r",
            AxiomSchema::Ipl3 => "p & q -> p",
            AxiomSchema::Ipl4 => "p & q -> q",
            AxiomSchema::Ipl5 => "p -> q -> p & q",
            AxiomSchema::Ipl6 => "p -> p \\/ q",
            AxiomSchema::Ipl7 => "q -> p \\/ q",
            AxiomSchema::Ipl8 => "(p -> r) -> (q -> r) -> p \\/ q -> r",
            AxiomSchema::Ipl9 => "bot -> p",
            AxiomSchema::Ipl10 => "top",
            AxiomSchema::KBox => "[](p -> q) -> []p -> []q",
            AxiomSchema::KDia => "[](p -> q) -> <>p -> <>q",
            AxiomSchema::N => "~<>bot",
            AxiomSchema::Dp => "<>(p \\/ q) -> <>p \\/ <>q",
            AxiomSchema::Wcd => "[](p \\/ q) -> (<>p -> []q) -> []q",
        }
    }

    /// The schema as a formula whose atoms are metavariables.
    pub fn shape(self) -> Formula {
        Formula::parse(self.text()).expect("schema text parses")
    }

    pub fn instantiate(self, subst: &Substitution) -> Formula {
        substitute(&self.shape(), subst)
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Replaces atoms bound in `subst`; unbound atoms stay as they are.
pub fn substitute(a: &Formula, subst: &Substitution) -> Formula {
    match a {
        Formula::Atom(p) => subst.get(p).cloned().unwrap_or_else(|| a.clone()),
        Formula::Top | Formula::Bot => a.clone(),
        Formula::And(l, r) => Formula::and(substitute(l, subst), substitute(r, subst)),
        Formula::Or(l, r) => Formula::or(substitute(l, subst), substitute(r, subst)),
        Formula::Imp(l, r) => Formula::imp(substitute(l, subst), substitute(r, subst)),
        Formula::Box(b) => Formula::boxed(substitute(b, subst)),
        Formula::Dia(b) => Formula::dia(substitute(b, subst)),
    }
}

/// First-order matching of `pattern` against `f`, extending `subst`.
fn matches(pattern: &Formula, f: &Formula, subst: &mut Substitution) -> bool {
    match (pattern, f) {
        (Formula::Atom(x), _) => match subst.get(x) {
            Some(bound) => bound == f,
            None => {
                subst.insert(x.clone(), f.clone());
                true
            }
        },
        (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Imp(a, b), Formula::Imp(c, d)) => matches(a, c, subst) && matches(b, d, subst),
        (Formula::Box(a), Formula::Box(c)) | (Formula::Dia(a), Formula::Dia(c)) => matches(a, c, subst),
        _ => false,
    }
}

/// Matches `f` against one schema, starting from a partial substitution.
pub fn match_schema(schema: AxiomSchema, f: &Formula, partial: &Substitution) -> Option<Substitution> {
    let mut subst = partial.clone();
    matches(&schema.shape(), f, &mut subst).then_some(subst)
}

/// The first schema (in [`AxiomSchema::ALL`] order) that `f` instantiates.
pub fn match_axiom(f: &Formula) -> Option<(AxiomSchema, Substitution)> {
    AxiomSchema::ALL
        .into_iter()
        .find_map(|s| match_schema(s, f, &Substitution::new()).map(|m| (s, m)))
}

/// How a step is justified. Step indices are 1-based, as in derivation files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// An axiom instance. Without a schema any schema may match; the
    /// substitution may be partial and is completed by matching.
    Axiom { schema: Option<AxiomSchema>, subst: Substitution },
    /// From `i: A` and `j: A -> B` infer `B`.
    Mp(usize, usize),
    /// From `i: A` infer `[]A`.
    Nec(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertStep {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HilbertDerivation {
    pub steps: Vec<HilbertStep>,
}

impl HilbertDerivation {
    pub fn push(&mut self, formula: Formula, justification: Justification) -> &mut Self {
        self.steps.push(HilbertStep { formula, justification });
        self
    }

    /// The formula derived by the last step.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("not an instance of any axiom schema")]
    NoSchema,
    #[error("not an instance of {0} under the given substitution")]
    NotInstance(AxiomSchema),
    #[error("`{0}` is not a metavariable of {1}")]
    UnknownVariable(String, AxiomSchema),
    #[error("step {0} does not precede this step")]
    ForwardReference(usize),
    #[error("step {j} is not an implication from step {i} to this formula")]
    BadModusPonens { i: usize, j: usize },
    #[error("this formula is not the necessitation of step {0}")]
    BadNecessitation(usize),
}

/// The first failing step (1-based) and why it fails.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("step {step}: {error}")]
pub struct CheckFailure {
    pub step: usize,
    pub error: StepError,
}

fn check_step(d: &HilbertDerivation, k: usize) -> Result<(), StepError> {
    let step = &d.steps[k - 1];
    let earlier = |i: usize| {
        if i >= 1 && i < k {
            Ok(&d.steps[i - 1].formula)
        } else {
            Err(StepError::ForwardReference(i))
        }
    };
    match &step.justification {
        Justification::Axiom { schema: None, subst } => {
            let found = AxiomSchema::ALL
                .into_iter()
                .any(|s| match_schema(s, &step.formula, subst).is_some());
            if found {
                Ok(())
            } else {
                Err(StepError::NoSchema)
            }
        }
        Justification::Axiom { schema: Some(s), subst } => {
            let vars = s.shape().atoms();
            if let Some(x) = subst.keys().find(|x| !vars.contains(*x)) {
                return Err(StepError::UnknownVariable(String::from(&**x), *s));
            }
            match_schema(*s, &step.formula, subst)
                .map(|_| ())
                .ok_or(StepError::NotInstance(*s))
        }
        Justification::Mp(i, j) => {
            let (a, imp) = (earlier(*i)?, earlier(*j)?);
            match imp {
                Formula::Imp(l, r) if **l == *a && **r == step.formula => Ok(()),
                _ => Err(StepError::BadModusPonens { i: *i, j: *j }),
            }
        }
        Justification::Nec(i) => {
            let a = earlier(*i)?;
            match &step.formula {
                Formula::Box(b) if **b == *a => Ok(()),
                _ => Err(StepError::BadNecessitation(*i)),
            }
        }
    }
}

/// Checks every step in order and reports the first failure.
pub fn check_derivation(d: &HilbertDerivation) -> Result<(), CheckFailure> {
    (1..=d.steps.len()).try_for_each(|k| check_step(d, k).map_err(|error| CheckFailure { step: k, error }))
}
