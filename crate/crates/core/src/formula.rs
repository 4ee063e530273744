//! Formulas of the modal language: abstract syntax, concrete syntax and
//! structural measures.
//!
//! Concrete syntax (whitespace insignificant):
//!
//! ```text
//! atom     [a-z][a-z0-9_]*          (except the keywords `bot`, `top`)
//! prefix   ~A   []A   <>A           tightest, right-stacking
//! infix    A & B                    left-associative
//!          A \/ B   (or A | B)      left-associative
//!          A -> B                   right-associative
//!          A <-> B                  sugar for (A -> B) & (B -> A), weakest
//! ```
//!
//! `~A` is sugar for `A -> bot`; neither negation nor equivalence is an AST
//! constructor.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// A formula of the language. Children are reference counted so that clones
/// are cheap and formulas can be shared between sequents and threads.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Arc<str>),
    Bot,
    Top,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
    Dia(Arc<Formula>),
}

impl Formula {
    /// Builds an atom. Panics if `name` is not a valid atom identifier; use
    /// [`Formula::parse`] for untrusted input.
    pub fn atom(name: &str) -> Formula {
        assert!(is_atom_name(name), "invalid atom name {name:?}");
        Formula::Atom(Arc::from(name))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    /// `¬A`, i.e. `A ⊃ ⊥`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// `A ≡ B`, i.e. `(A ⊃ B) ∧ (B ⊃ A)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Arc::new(a))
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::Dia(Arc::new(a))
    }

    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        crate::parse::parse_formula(text)
    }

    /// Minimal-parenthesis rendering in the concrete syntax.
    pub fn render(&self) -> String {
        alloc::format!("{self}")
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Modal degree: nesting depth of `[]`/`<>`.
    pub fn modal_degree(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.modal_degree().max(b.modal_degree())
            }
            Formula::Box(a) | Formula::Dia(a) => a.modal_degree() + 1,
        }
    }

    /// Number of AST nodes (connective and atom occurrences).
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Box(a) | Formula::Dia(a) => 1 + a.size(),
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> impl Iterator<Item = &Formula> {
        let (a, b): (Option<&Formula>, Option<&Formula>) = match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => (None, None),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => (Some(a), Some(b)),
            Formula::Box(a) | Formula::Dia(a) => (Some(a), None),
        };
        a.into_iter().chain(b)
    }

    /// All subformulas, including `self`.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = alloc::vec![self];
        while let Some(f) = stack.pop() {
            if out.insert(f.clone()) {
                stack.extend(f.children());
            }
        }
        out
    }

    /// Atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(a) | Formula::Dia(a) => a.collect_atoms(out),
        }
    }

    /// Splits `B1 -> (B2 -> ... -> C)` into `([B1, B2, ...], C)`.
    pub fn split_implications(&self) -> (Vec<Formula>, Formula) {
        let mut premises = Vec::new();
        let mut cur = self;
        while let Formula::Imp(a, b) = cur {
            premises.push((**a).clone());
            cur = b;
        }
        (premises, cur.clone())
    }
}

pub(crate) fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
        && name != "bot"
        && name != "top"
}

// Binding strength used by the printer; higher binds tighter.
const PREC_IFF_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_PREFIX: u8 = 4;

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(_, b) if **b == Formula::Bot => PREC_PREFIX,
            Formula::Imp(..) => PREC_IFF_IMP,
            Formula::Or(..) => PREC_OR,
            Formula::And(..) => PREC_AND,
            _ => PREC_PREFIX,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::Atom(p) => f.write_str(p),
            Formula::Bot => f.write_str("bot"),
            Formula::Top => f.write_str("top"),
            Formula::And(a, b) => {
                a.fmt_at(f, PREC_AND)?;
                f.write_str(" & ")?;
                b.fmt_at(f, PREC_AND + 1)
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, PREC_OR)?;
                f.write_str(" \\/ ")?;
                b.fmt_at(f, PREC_OR + 1)
            }
            Formula::Imp(a, b) if **b == Formula::Bot => {
                f.write_str("~")?;
                a.fmt_at(f, PREC_PREFIX)
            }
            Formula::Imp(a, b) => {
                a.fmt_at(f, PREC_IFF_IMP + 1)?;
                f.write_str(" -> ")?;
                b.fmt_at(f, PREC_IFF_IMP)
            }
            Formula::Box(a) => {
                f.write_str("[]")?;
                a.fmt_at(f, PREC_PREFIX)
            }
            Formula::Dia(a) => {
                f.write_str("<>")?;
                a.fmt_at(f, PREC_PREFIX)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl core::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

/// Syntax error with the byte offset where parsing failed and the tokens
/// that would have been accepted there.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected_list(.expected))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

fn expected_list(expected: &[&'static str]) -> String {
    let mut out = String::new();
    for (i, e) in expected.iter().enumerate() {
        if i > 0 {
            out.push_str(if i + 1 == expected.len() { " or " } else { ", " });
        }
        out.push_str(e);
    }
    out
}
