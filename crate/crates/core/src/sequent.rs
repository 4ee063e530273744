//! Set-based bi-nested sequents and the structural operators used by the
//! calculus: addresses into nested occurrences, `*`, `♯`, structural
//! inclusion, block-equivalence and modal degree.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, ParseError};

/// The right-hand side `Δ` of a sequent: formulas, modal blocks `[S]` and
/// implication blocks `<S>`, each kept as a canonically ordered set.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Succedent {
    pub formulas: BTreeSet<Formula>,
    pub modal: BTreeSet<Sequent>,
    pub imp: BTreeSet<Sequent>,
}

/// A set-based bi-nested sequent `Γ ⇒ Δ`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub antecedent: BTreeSet<Formula>,
    pub succedent: Succedent,
}

/// One member of a succedent, for callers that want a single stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry<'a> {
    Formula(&'a Formula),
    Modal(&'a Sequent),
    Imp(&'a Sequent),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    Modal,
    Imp,
}

/// One descent step: the `index`-th block (in canonical order) of the given
/// kind in the current succedent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub kind: BlockKind,
    pub index: usize,
}

/// Path from a host sequent down to one of its nested occurrences. The empty
/// path addresses the host itself. Indices are positional in canonical order,
/// so an address is only meaningful against the sequent it was computed from.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(pub Vec<Step>);

impl Address {
    pub fn root() -> Address {
        Address(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, kind: BlockKind, index: usize) -> Address {
        let mut steps = self.0.clone();
        steps.push(Step { kind, index });
        Address(steps)
    }

    pub fn join(&self, tail: &Address) -> Address {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&tail.0);
        Address(steps)
    }

    pub fn last_kind(&self) -> Option<BlockKind> {
        self.0.last().map(|s| s.kind)
    }

    /// True iff `self` is reachable from `ancestor` through one or more
    /// implication blocks and nothing else.
    pub fn is_imp_descendant_of(&self, ancestor: &Address) -> bool {
        self.0.len() > ancestor.0.len()
            && self.0.starts_with(&ancestor.0)
            && self.0[ancestor.0.len()..].iter().all(|s| s.kind == BlockKind::Imp)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for s in &self.0 {
            match s.kind {
                BlockKind::Modal => write!(f, "/[{}]", s.index)?,
                BlockKind::Imp => write!(f, "/<{}>", s.index)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OccurrenceKind {
    Root,
    Imp,
    Modal,
}

/// A nested occurrence `T ∈⁺ S` together with where it sits.
#[derive(Clone, Debug)]
pub struct Occurrence<'a> {
    pub address: Address,
    pub sequent: &'a Sequent,
    pub kind: OccurrenceKind,
}

impl Succedent {
    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty() && self.modal.is_empty() && self.imp.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = Entry<'_>> {
        self.formulas
            .iter()
            .map(Entry::Formula)
            .chain(self.modal.iter().map(Entry::Modal))
            .chain(self.imp.iter().map(Entry::Imp))
    }

    pub fn blocks(&self, kind: BlockKind) -> &BTreeSet<Sequent> {
        match kind {
            BlockKind::Modal => &self.modal,
            BlockKind::Imp => &self.imp,
        }
    }

    fn blocks_mut(&mut self, kind: BlockKind) -> &mut BTreeSet<Sequent> {
        match kind {
            BlockKind::Modal => &mut self.modal,
            BlockKind::Imp => &mut self.imp,
        }
    }
}

/// `Θ*`: keeps only the modal blocks, recursively starred; formulas and
/// implication blocks are dropped at every depth.
pub fn star(delta: &Succedent) -> Succedent {
    Succedent {
        formulas: BTreeSet::new(),
        modal: delta
            .modal
            .iter()
            .map(|b| Sequent {
                antecedent: b.antecedent.clone(),
                succedent: star(&b.succedent),
            })
            .collect(),
        imp: BTreeSet::new(),
    }
}

/// `Θ♯`: removes implication blocks at every depth, keeping formulas and
/// (recursively sharped) modal blocks.
pub fn sharp(delta: &Succedent) -> Succedent {
    Succedent {
        formulas: delta.formulas.clone(),
        modal: delta.modal.iter().map(Sequent::sharp).collect(),
        imp: BTreeSet::new(),
    }
}

/// Structural inclusion `s1 ⊆^S s2`: `Γ1 ⊆ Γ2` and every modal block of `s1`
/// is structurally included in some modal block of `s2`.
pub fn structurally_included(s1: &Sequent, s2: &Sequent) -> bool {
    s1.antecedent.is_subset(&s2.antecedent)
        && s1
            .succedent
            .modal
            .iter()
            .all(|b1| s2.succedent.modal.iter().any(|b2| structurally_included(b1, b2)))
}

/// Block-equivalence `s1 ≃ s2`: equal antecedents and equal `♯`-images.
pub fn block_equivalent(s1: &Sequent, s2: &Sequent) -> bool {
    s1.antecedent == s2.antecedent && sharp_eq(&s1.succedent, &s2.succedent)
}

fn sharp_eq(d1: &Succedent, d2: &Succedent) -> bool {
    if d1.formulas != d2.formulas || d1.modal.len() != d2.modal.len() {
        return false;
    }
    if d1.modal.iter().all(|b| b.succedent.imp.is_empty() && sharp_free(b))
        && d2.modal.iter().all(|b| b.succedent.imp.is_empty() && sharp_free(b))
    {
        return d1.modal == d2.modal;
    }
    sharp(d1) == sharp(d2)
}

fn sharp_free(s: &Sequent) -> bool {
    s.succedent.imp.is_empty() && s.succedent.modal.iter().all(sharp_free)
}

/// The tree `T_S` of a sequent: children are the contents of its top-level
/// modal blocks, recursively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModalTree {
    pub node: Sequent,
    pub children: Vec<ModalTree>,
}

impl ModalTree {
    /// Height in edges; a single node has height 0.
    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ModalTree::node_count).sum::<usize>()
    }
}

impl Sequent {
    pub fn empty() -> Sequent {
        Sequent::default()
    }

    /// `⇒ A`.
    pub fn goal(a: Formula) -> Sequent {
        let mut s = Sequent::empty();
        s.succedent.formulas.insert(a);
        s
    }

    pub fn new(
        antecedent: impl IntoIterator<Item = Formula>,
        succedent: impl IntoIterator<Item = Formula>,
    ) -> Sequent {
        Sequent {
            antecedent: antecedent.into_iter().collect(),
            succedent: Succedent {
                formulas: succedent.into_iter().collect(),
                ..Succedent::default()
            },
        }
    }

    pub fn with_modal(mut self, block: Sequent) -> Sequent {
        self.succedent.modal.insert(block);
        self
    }

    pub fn with_imp(mut self, block: Sequent) -> Sequent {
        self.succedent.imp.insert(block);
        self
    }

    pub fn parse(text: &str) -> Result<Sequent, ParseError> {
        crate::parse::parse_sequent(text)
    }

    pub fn antecedent_mut(&mut self) -> &mut BTreeSet<Formula> {
        &mut self.antecedent
    }

    pub fn succedent(&self) -> &Succedent {
        &self.succedent
    }

    pub fn succedent_mut(&mut self) -> &mut Succedent {
        &mut self.succedent
    }

    /// `Γ ⇒ Δ♯`.
    pub fn sharp(&self) -> Sequent {
        Sequent {
            antecedent: self.antecedent.clone(),
            succedent: sharp(&self.succedent),
        }
    }

    pub fn resolve(&self, addr: &Address) -> Option<&Sequent> {
        let mut cur = self;
        for step in &addr.0 {
            cur = cur.succedent.blocks(step.kind).iter().nth(step.index)?;
        }
        Some(cur)
    }

    /// `G{new}` where `G{}` is `self` with the occurrence at `addr` punched
    /// out. Sibling sets are re-canonicalised, so an inserted block equal to a
    /// sibling merges with it.
    pub fn replace_at(&self, addr: &Address, new: Sequent) -> Option<Sequent> {
        self.replace_steps(&addr.0, new)
    }

    fn replace_steps(&self, steps: &[Step], new: Sequent) -> Option<Sequent> {
        let Some((first, rest)) = steps.split_first() else {
            return Some(new);
        };
        let old = self.succedent.blocks(first.kind).iter().nth(first.index)?;
        let replaced = old.replace_steps(rest, new)?;
        let mut out = self.clone();
        let set = out.succedent.blocks_mut(first.kind);
        set.remove(old);
        set.insert(replaced);
        Some(out)
    }

    /// Every `T ∈⁺ self` in canonical pre-order (node, then its modal blocks,
    /// then its implication blocks), each exactly once, starting with `self`.
    pub fn occurrences(&self) -> Vec<Occurrence<'_>> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![(Address::root(), self, OccurrenceKind::Root)];
        while let Some((address, sequent, kind)) = stack.pop() {
            for (i, b) in sequent.succedent.imp.iter().enumerate().rev() {
                stack.push((address.child(BlockKind::Imp, i), b, OccurrenceKind::Imp));
            }
            for (i, b) in sequent.succedent.modal.iter().enumerate().rev() {
                stack.push((address.child(BlockKind::Modal, i), b, OccurrenceKind::Modal));
            }
            out.push(Occurrence { address, sequent, kind });
        }
        out
    }

    /// Modal degree: modal blocks add one, implication blocks add nothing.
    pub fn modal_degree(&self) -> usize {
        let formulas = self
            .antecedent
            .iter()
            .chain(&self.succedent.formulas)
            .map(Formula::modal_degree)
            .max()
            .unwrap_or(0);
        let modal = self.succedent.modal.iter().map(|b| b.modal_degree() + 1).max().unwrap_or(0);
        let imp = self.succedent.imp.iter().map(Sequent::modal_degree).max().unwrap_or(0);
        formulas.max(modal).max(imp)
    }

    pub fn modal_tree(&self) -> ModalTree {
        ModalTree {
            node: self.clone(),
            children: self.succedent.modal.iter().map(Sequent::modal_tree).collect(),
        }
    }

    /// Symbol count: formula sizes plus one per block, at every depth.
    pub fn size(&self) -> usize {
        let formulas: usize = self
            .antecedent
            .iter()
            .chain(&self.succedent.formulas)
            .map(Formula::size)
            .sum();
        let blocks: usize = self
            .succedent
            .modal
            .iter()
            .chain(&self.succedent.imp)
            .map(|b| 1 + b.size())
            .sum();
        formulas + blocks
    }

    /// Nesting depth of blocks of either kind.
    pub fn depth(&self) -> usize {
        self.succedent
            .modal
            .iter()
            .chain(&self.succedent.imp)
            .map(|b| b.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Every formula occurring anywhere in the sequent, on either side.
    pub fn all_formulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        for occ in self.occurrences() {
            out.extend(occ.sequent.antecedent.iter().cloned());
            out.extend(occ.sequent.succedent.formulas.iter().cloned());
        }
        out
    }

    pub fn render(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.antecedent {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{a}")?;
        }
        f.write_str(if self.antecedent.is_empty() { "=>" } else { " =>" })?;
        let mut first = true;
        for e in self.succedent.entries() {
            f.write_str(if first { " " } else { ", " })?;
            first = false;
            match e {
                Entry::Formula(a) => write!(f, "{a}")?,
                Entry::Modal(b) => write!(f, "[{b}]")?,
                Entry::Imp(b) => write!(f, "<{b}>")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl fmt::Debug for Succedent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = Sequent { antecedent: BTreeSet::new(), succedent: self.clone() };
        write!(f, "`{s}`")
    }
}

impl core::str::FromStr for Sequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sequent::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn seq(text: &str) -> Sequent {
        Sequent::parse(text).unwrap()
    }

    fn succ(text: &str) -> Succedent {
        seq(text).succedent
    }

    const WORKED: &str = "=> b, [c => d, [e => f], <g => h>], <t => [p => q]>, [m => n]";

    #[test]
    fn star_examples() {
        assert_eq!(star(&succ("=> b, <t => [p => q]>")), Succedent::default());
        assert_eq!(star(&succ(WORKED)), succ("=> [c => [e =>]], [m =>]"));
        assert_eq!(star(&succ("=> [x =>]")), succ("=> [x =>]"));
    }

    #[test]
    fn sharp_examples() {
        assert_eq!(sharp(&succ(WORKED)), succ("=> b, [c => d, [e => f]], [m => n]"));
        let free = succ("=> a, b -> c");
        assert_eq!(sharp(&free), free);
        let s = sharp(&succ(WORKED));
        assert_eq!(sharp(&s), s);
    }

    #[test]
    fn rendering_is_canonical() {
        assert_eq!(seq(WORKED).to_string(), "=> b, [c => d, [e => f], <g => h>], [m => n], <t => [p => q]>");
        assert_eq!(seq("q, p => ").to_string(), "p, q =>");
        assert_eq!(seq("=>").to_string(), "=>");
        assert_eq!(seq("=> [=>]").to_string(), "=> [=>]");
        let s = seq(WORKED);
        assert_eq!(seq(&s.to_string()), s);
    }

    #[test]
    fn structural_inclusion_examples() {
        let s = seq(WORKED);
        assert!(structurally_included(&s, &s));
        let lt = seq("c => d, [e => f]");
        let starred = Sequent { antecedent: lt.antecedent.clone(), succedent: star(&lt.succedent) };
        assert_eq!(starred, seq("c => [e =>]"));
        assert!(structurally_included(&lt, &starred));
        assert!(!structurally_included(&seq("p =>"), &seq("q =>")));
        // succedent formulas and implication blocks are ignored
        assert!(structurally_included(&seq("=> a, <p => q>"), &seq("=> b")));
        assert!(!structurally_included(&seq("=> [p =>]"), &seq("=> [q =>]")));
    }

    #[test]
    fn block_equivalence_examples() {
        let s = seq(WORKED);
        assert!(block_equivalent(&s, &s));
        let g = "[]a -> bot, []b -> bot";
        let s1 = seq(&alloc::format!("{g} => []a, []b, [=> a]"));
        let s2 = seq(&alloc::format!(
            "{g} => []a, []b, [=> a], <{g} => []a, []b, [=> b], <{g} => []a, []b, [=> a]>>"
        ));
        assert!(block_equivalent(&s1, &s2));
        assert!(!block_equivalent(&seq("=> [p =>]"), &seq("=> [q =>]")));
        assert!(block_equivalent(&seq("=> [p => <a => b>]"), &seq("=> [p =>]")));
        assert!(!block_equivalent(&seq("p => "), &seq("=> p")));
    }

    #[test]
    fn occurrences_examples() {
        assert_eq!(seq("=> a").occurrences().len(), 1);
        let s = seq("=> <p => [q =>]>");
        let occ = s.occurrences();
        assert_eq!(occ.len(), 3);
        assert_eq!(occ[0].kind, OccurrenceKind::Root);
        assert_eq!(*occ[1].sequent, seq("p => [q =>]"));
        assert_eq!(occ[1].kind, OccurrenceKind::Imp);
        assert_eq!(*occ[2].sequent, seq("q =>"));
        assert_eq!(occ[2].kind, OccurrenceKind::Modal);
        for o in &occ {
            assert_eq!(s.resolve(&o.address), Some(o.sequent));
        }
        let g = "[]a -> bot, []b -> bot";
        let loop1 = seq(&alloc::format!(
            "{g} => p, []a, []b, <{g} => []a, []b, [=> a]>, <{g} => []a, []b, [=> b]>"
        ));
        assert_eq!(loop1.occurrences().len(), 5);
    }

    #[test]
    fn imp_descendant_paths() {
        let s = seq("=> <a => <b => [c => <d =>>]>>");
        let occ = s.occurrences();
        let addr: Vec<_> = occ.iter().map(|o| o.address.clone()).collect();
        // root, <a>, <b>, [c], <d>
        assert!(addr[1].is_imp_descendant_of(&addr[0]));
        assert!(addr[2].is_imp_descendant_of(&addr[0]));
        assert!(!addr[3].is_imp_descendant_of(&addr[0]));
        assert!(!addr[4].is_imp_descendant_of(&addr[2]));
        assert!(addr[4].is_imp_descendant_of(&addr[3]));
        assert!(!addr[0].is_imp_descendant_of(&addr[0]));
    }

    #[test]
    fn modal_degree_examples() {
        assert_eq!(seq("=> p").modal_degree(), 0);
        assert_eq!(seq("=> [=> p]").modal_degree(), 1);
        assert_eq!(seq("=> <=> [=> p]>").modal_degree(), 1);
        assert_eq!(seq("[]p => [=> <>q]").modal_degree(), 2);
    }

    #[test]
    fn modal_tree_examples() {
        assert_eq!(seq("p => q").modal_tree().node_count(), 1);
        let t = seq("=> [p => [q =>]]").modal_tree();
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn replace_merges_equal_siblings() {
        let s = seq("=> [a =>], [b =>]");
        let addr = Address::root().child(BlockKind::Modal, 0);
        let t = s.replace_at(&addr, seq("b =>")).unwrap();
        assert_eq!(t, seq("=> [b =>]"));
        assert!(s.replace_at(&Address::root().child(BlockKind::Imp, 0), Sequent::empty()).is_none());
    }
}
