//! The cumulative set-based calculus: rules, saturation levels, blocking,
//! the three expansion macros and the proof-search procedure.
//!
//! Rules fall into three groups. R1 holds the basic propositional and modal
//! rules, R2 the block-transfer rules `trans` and `inter`, R3 the
//! block-creating rules `⊃R` and `□R`. A nested occurrence is R1-saturated
//! when no R1 rule applies non-redundantly to it, R2-saturated when in
//! addition `trans`/`inter` are saturated for its direct children, and
//! R3-saturated when in addition every `□A` and `A ⊃ B` on its right is
//! witnessed.
//!
//! The search repeatedly picks the leftmost open leaf and expands the first
//! eligible occurrence at the lowest unsaturated level, until every leaf is
//! an axiom or some leaf is global-saturated.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::countermodel::{self, ExtractionReport, Verification};
use crate::formula::Formula;
use crate::sequent::{block_equivalent, star, structurally_included, Address, BlockKind, Sequent, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    BotL,
    TopR,
    Id,
    AndL,
    AndR,
    OrL,
    OrR,
    ImpL,
    ImpR1,
    ImpR2,
    BoxL,
    BoxR,
    DiaL,
    DiaR,
    Trans,
    Inter,
}

impl RuleId {
    pub const ALL: [RuleId; 16] = [
        RuleId::BotL,
        RuleId::TopR,
        RuleId::Id,
        RuleId::AndL,
        RuleId::AndR,
        RuleId::OrL,
        RuleId::OrR,
        RuleId::ImpL,
        RuleId::ImpR1,
        RuleId::ImpR2,
        RuleId::BoxL,
        RuleId::BoxR,
        RuleId::DiaL,
        RuleId::DiaR,
        RuleId::Trans,
        RuleId::Inter,
    ];

    pub const R1: [RuleId; 8] = [
        RuleId::AndL,
        RuleId::AndR,
        RuleId::OrL,
        RuleId::OrR,
        RuleId::ImpL,
        RuleId::BoxL,
        RuleId::DiaL,
        RuleId::DiaR,
    ];

    pub const R2: [RuleId; 2] = [RuleId::Trans, RuleId::Inter];

    pub const R3: [RuleId; 3] = [RuleId::ImpR1, RuleId::ImpR2, RuleId::BoxR];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::BotL => "botL",
            RuleId::TopR => "topR",
            RuleId::Id => "id",
            RuleId::AndL => "andL",
            RuleId::AndR => "andR",
            RuleId::OrL => "orL",
            RuleId::OrR => "orR",
            RuleId::ImpL => "impL",
            RuleId::ImpR1 => "impR1",
            RuleId::ImpR2 => "impR2",
            RuleId::BoxL => "boxL",
            RuleId::BoxR => "boxR",
            RuleId::DiaL => "diaL",
            RuleId::DiaR => "diaR",
            RuleId::Trans => "trans",
            RuleId::Inter => "inter",
        }
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, RuleId::BotL | RuleId::TopR | RuleId::Id)
    }

    /// Saturation level of the rule's group; `None` for axioms.
    pub fn level(self) -> Option<Level> {
        if RuleId::R1.contains(&self) {
            Some(Level::R1)
        } else if RuleId::R2.contains(&self) {
            Some(Level::R2)
        } else if RuleId::R3.contains(&self) {
            Some(Level::R3)
        } else {
            None
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    R1,
    R2,
    R3,
}

/// A principal formula or block of a rule instance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Principal {
    Formula(Formula),
    Block(BlockKind, Sequent),
}

impl fmt::Display for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Principal::Formula(a) => write!(f, "{a}"),
            Principal::Block(BlockKind::Modal, s) => write!(f, "[{s}]"),
            Principal::Block(BlockKind::Imp, s) => write!(f, "<{s}>"),
        }
    }
}

/// A rule applied at the occurrence `at` of some host sequent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub at: Address,
    pub principal: Vec<Principal>,
}

impl RuleInstance {
    fn local(rule: RuleId, principal: Vec<Principal>) -> RuleInstance {
        RuleInstance { rule, at: Address::root(), principal }
    }

    fn rebased(mut self, base: &Address) -> RuleInstance {
        self.at = base.join(&self.at);
        self
    }

    /// The principal formula, or `⊤` as a placeholder for block-only rules.
    fn formula_or_block(&self) -> &Formula {
        match &self.principal[0] {
            Principal::Formula(a) => a,
            Principal::Block(..) => &Formula::Top,
        }
    }

    fn block(&self, i: usize) -> &Sequent {
        match &self.principal[i] {
            Principal::Block(_, s) => s,
            Principal::Formula(_) => unreachable!("principal {i} is a block"),
        }
    }
}

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.rule, self.at)?;
        for (i, p) in self.principal.iter().enumerate() {
            f.write_str(if i == 0 { " on " } else { ", " })?;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ApplyError {
    #[error("address {0} does not resolve")]
    Unresolved(Address),
    #[error("{0} is an axiom and has no premises")]
    Axiom(RuleId),
    #[error("the side condition of {0} fails or the application is redundant")]
    NotApplicable(RuleId),
}

/// The axiom closing this occurrence itself, ignoring nested blocks.
fn local_axiom(t: &Sequent) -> Option<RuleId> {
    if t.antecedent.contains(&Formula::Bot) {
        Some(RuleId::BotL)
    } else if t.succedent.formulas.contains(&Formula::Top) {
        Some(RuleId::TopR)
    } else if t.antecedent.iter().any(|a| t.succedent.formulas.contains(a)) {
        Some(RuleId::Id)
    } else {
        None
    }
}

/// The first occurrence (in canonical pre-order) closed by an axiom.
pub fn is_axiomatic(s: &Sequent) -> Option<(Address, RuleId)> {
    s.occurrences()
        .into_iter()
        .find_map(|o| local_axiom(o.sequent).map(|r| (o.address, r)))
}

fn f(a: &Formula) -> Principal {
    Principal::Formula(a.clone())
}

fn modal(b: &Sequent) -> Principal {
    Principal::Block(BlockKind::Modal, b.clone())
}

fn imp(b: &Sequent) -> Principal {
    Principal::Block(BlockKind::Imp, b.clone())
}

fn imp_right_witnessed(t: &Sequent, a: &Formula, b: &Formula) -> bool {
    (t.antecedent.contains(a) && t.succedent.formulas.contains(b))
        || t
            .succedent
            .imp
            .iter()
            .any(|s| s.antecedent.contains(a) && s.succedent.formulas.contains(b))
}

fn box_right_witnessed(t: &Sequent, a: &Formula) -> bool {
    let direct = |d: &crate::sequent::Succedent| d.modal.iter().any(|m| m.succedent.formulas.contains(a));
    direct(&t.succedent) || t.succedent.imp.iter().any(|s| direct(&s.succedent))
}

/// Every non-redundant instance of `rule` at the top level of `t`, in
/// canonical principal order. Addresses are relative to `t`.
fn local_violations(rule: RuleId, t: &Sequent) -> Vec<RuleInstance> {
    let gamma = &t.antecedent;
    let delta = &t.succedent.formulas;
    let mut out = Vec::new();
    let mut push = |p: Vec<Principal>| out.push(RuleInstance::local(rule, p));
    match rule {
        RuleId::BotL | RuleId::TopR | RuleId::Id => {}
        RuleId::AndL => {
            for x in gamma {
                if let Formula::And(a, b) = x {
                    if !(gamma.contains(a) && gamma.contains(b)) {
                        push(vec![f(x)]);
                    }
                }
            }
        }
        RuleId::AndR => {
            for x in delta {
                if let Formula::And(a, b) = x {
                    if !(delta.contains(a) || delta.contains(b)) {
                        push(vec![f(x)]);
                    }
                }
            }
        }
        RuleId::OrL => {
            for x in gamma {
                if let Formula::Or(a, b) = x {
                    if !(gamma.contains(a) || gamma.contains(b)) {
                        push(vec![f(x)]);
                    }
                }
            }
        }
        RuleId::OrR => {
            for x in delta {
                if let Formula::Or(a, b) = x {
                    if !(delta.contains(a) && delta.contains(b)) {
                        push(vec![f(x)]);
                    }
                }
            }
        }
        RuleId::ImpL => {
            for x in gamma {
                if let Formula::Imp(a, b) = x {
                    if !(delta.contains(a) || gamma.contains(b)) {
                        push(vec![f(x)]);
                    }
                }
            }
        }
        RuleId::ImpR1 | RuleId::ImpR2 => {
            for x in delta {
                if let Formula::Imp(a, b) = x {
                    let first = gamma.contains(a);
                    if (first == (rule == RuleId::ImpR1)) && !imp_right_witnessed(t, a, b) {
                        push(vec![f(x)]);
                    }
                }
            }
        }
        RuleId::BoxL => {
            for x in gamma {
                if let Formula::Box(a) = x {
                    for m in &t.succedent.modal {
                        if !m.antecedent.contains(a) {
                            push(vec![f(x), modal(m)]);
                        }
                    }
                }
            }
        }
        RuleId::BoxR => {
            for x in delta {
                if let Formula::Box(a) = x {
                    if !box_right_witnessed(t, a) {
                        push(vec![f(x)]);
                    }
                }
            }
        }
        RuleId::DiaL => {
            for x in gamma {
                if let Formula::Dia(a) = x {
                    if !t.succedent.modal.iter().any(|m| m.antecedent.contains(a)) {
                        push(vec![f(x)]);
                    }
                }
            }
        }
        RuleId::DiaR => {
            for x in delta {
                if let Formula::Dia(a) = x {
                    for m in &t.succedent.modal {
                        if !m.succedent.formulas.contains(a) {
                            push(vec![f(x), modal(m)]);
                        }
                    }
                }
            }
        }
        RuleId::Trans => {
            for b in &t.succedent.imp {
                if !gamma.is_subset(&b.antecedent) {
                    push(vec![imp(b)]);
                }
            }
        }
        RuleId::Inter => {
            for b in &t.succedent.imp {
                for m in &t.succedent.modal {
                    if !b.succedent.modal.iter().any(|w| structurally_included(m, w)) {
                        push(vec![imp(b), modal(m)]);
                    }
                }
            }
        }
    }
    out
}

fn first_violation(rules: &[RuleId], t: &Sequent) -> Option<RuleInstance> {
    rules.iter().find_map(|&r| local_violations(r, t).into_iter().next())
}

/// The level up to which `t` (not an axiom) is saturated: `None` when not even
/// R1-saturated.
fn saturation_level(t: &Sequent) -> Option<Level> {
    if first_violation(&RuleId::R1, t).is_some() {
        None
    } else if first_violation(&RuleId::R2, t).is_some() {
        Some(Level::R1)
    } else if first_violation(&RuleId::R3, t).is_some() {
        Some(Level::R2)
    } else {
        Some(Level::R3)
    }
}

fn at_least(level: Option<Level>, wanted: Level) -> bool {
    level.is_some_and(|l| l >= wanted)
}

pub fn r1_saturated(t: &Sequent) -> bool {
    at_least(saturation_level(t), Level::R1)
}

pub fn r2_saturated(t: &Sequent) -> bool {
    at_least(saturation_level(t), Level::R2)
}

pub fn r3_saturated(t: &Sequent) -> bool {
    at_least(saturation_level(t), Level::R3)
}

/// Non-redundant instances of `rule` anywhere in `s`, occurrence by
/// occurrence in canonical pre-order.
pub fn applicable(rule: RuleId, s: &Sequent) -> Vec<RuleInstance> {
    s.occurrences()
        .into_iter()
        .flat_map(|o| {
            local_violations(rule, o.sequent)
                .into_iter()
                .map(move |i| i.rebased(&o.address))
        })
        .collect()
}

fn with_antecedent(t: &Sequent, extra: impl IntoIterator<Item = Formula>) -> Sequent {
    let mut t = t.clone();
    t.antecedent.extend(extra);
    t
}

fn with_succedent(t: &Sequent, extra: impl IntoIterator<Item = Formula>) -> Sequent {
    let mut t = t.clone();
    t.succedent.formulas.extend(extra);
    t
}

fn replace_block(t: &Sequent, kind: BlockKind, old: &Sequent, new: Sequent) -> Sequent {
    let mut t = t.clone();
    let set = match kind {
        BlockKind::Modal => &mut t.succedent.modal,
        BlockKind::Imp => &mut t.succedent.imp,
    };
    set.remove(old);
    set.insert(new);
    t
}

/// Premises of a local instance whose address is the root of `t`.
fn local_premises(i: &RuleInstance, t: &Sequent) -> Vec<Sequent> {
    let x = i.formula_or_block();
    match (i.rule, x) {
        (RuleId::AndL, Formula::And(a, b)) => vec![with_antecedent(t, [(**a).clone(), (**b).clone()])],
        (RuleId::AndR, Formula::And(a, b)) => {
            vec![with_succedent(t, [(**a).clone()]), with_succedent(t, [(**b).clone()])]
        }
        (RuleId::OrL, Formula::Or(a, b)) => {
            vec![with_antecedent(t, [(**a).clone()]), with_antecedent(t, [(**b).clone()])]
        }
        (RuleId::OrR, Formula::Or(a, b)) => vec![with_succedent(t, [(**a).clone(), (**b).clone()])],
        (RuleId::ImpL, Formula::Imp(a, b)) => {
            vec![with_succedent(t, [(**a).clone()]), with_antecedent(t, [(**b).clone()])]
        }
        (RuleId::ImpR1, Formula::Imp(_, b)) => vec![with_succedent(t, [(**b).clone()])],
        (RuleId::ImpR2, Formula::Imp(a, b)) => {
            let block = Sequent::new([(**a).clone()], [(**b).clone()]);
            vec![t.clone().with_imp(block)]
        }
        (RuleId::BoxL, Formula::Box(a)) => {
            let m = i.block(1);
            vec![replace_block(t, BlockKind::Modal, m, with_antecedent(m, [(**a).clone()]))]
        }
        (RuleId::BoxR, Formula::Box(a)) => {
            let inner = Sequent::goal((**a).clone());
            vec![t.clone().with_imp(Sequent::empty().with_modal(inner))]
        }
        (RuleId::DiaL, Formula::Dia(a)) => vec![t.clone().with_modal(Sequent::new([(**a).clone()], []))],
        (RuleId::DiaR, Formula::Dia(a)) => {
            let m = i.block(1);
            vec![replace_block(t, BlockKind::Modal, m, with_succedent(m, [(**a).clone()]))]
        }
        (RuleId::Trans, _) => {
            let b = i.block(0);
            vec![replace_block(t, BlockKind::Imp, b, with_antecedent(b, t.antecedent.iter().cloned()))]
        }
        (RuleId::Inter, _) => {
            let (b, m) = (i.block(0), i.block(1));
            let starred = Sequent { antecedent: m.antecedent.clone(), succedent: star(&m.succedent) };
            vec![replace_block(t, BlockKind::Imp, b, b.clone().with_modal(starred))]
        }
        _ => unreachable!("instance shape checked against the violation list"),
    }
}

/// Backward application: the premises of `instance` applied to `s`.
pub fn apply(instance: &RuleInstance, s: &Sequent) -> Result<Vec<Sequent>, ApplyError> {
    if instance.rule.is_axiom() {
        return Err(ApplyError::Axiom(instance.rule));
    }
    let (hole, t) = Hole::open(s, &instance.at).ok_or_else(|| ApplyError::Unresolved(instance.at.clone()))?;
    let local = RuleInstance::local(instance.rule, instance.principal.clone());
    if !local_violations(instance.rule, &t).contains(&local) {
        return Err(ApplyError::NotApplicable(instance.rule));
    }
    Ok(local_premises(&local, &t).into_iter().map(|p| hole.plug(p).0).collect())
}

/// A sequent with one nested occurrence punched out, so that the occurrence
/// can be rewritten repeatedly while the context stays fixed.
#[derive(Clone, Debug)]
struct Hole {
    frames: Vec<(Sequent, BlockKind)>,
}

impl Hole {
    fn open(s: &Sequent, addr: &Address) -> Option<(Hole, Sequent)> {
        let mut frames = Vec::with_capacity(addr.0.len());
        let mut cur = s.clone();
        for step in &addr.0 {
            let child = cur.succedent.blocks(step.kind).iter().nth(step.index)?.clone();
            let parent = replace_block_remove(&cur, step.kind, &child);
            frames.push((parent, step.kind));
            cur = child;
        }
        Some((Hole { frames }, cur))
    }

    /// `G{t}`, together with the address of `t` inside it.
    fn plug(&self, t: Sequent) -> (Sequent, Address) {
        let mut steps = Vec::with_capacity(self.frames.len());
        let mut cur = t;
        for (parent, kind) in self.frames.iter().rev() {
            let mut p = parent.clone();
            let set = match kind {
                BlockKind::Modal => &mut p.succedent.modal,
                BlockKind::Imp => &mut p.succedent.imp,
            };
            let index = set.range(..&cur).count();
            set.insert(cur);
            steps.push(Step { kind: *kind, index });
            cur = p;
        }
        steps.reverse();
        (cur, Address(steps))
    }
}

fn replace_block_remove(t: &Sequent, kind: BlockKind, old: &Sequent) -> Sequent {
    let mut t = t.clone();
    match kind {
        BlockKind::Modal => t.succedent.modal.remove(old),
        BlockKind::Imp => t.succedent.imp.remove(old),
    };
    t
}

/// Saturation facts about one nested occurrence of a leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceStatus {
    pub address: Address,
    pub level: Option<Level>,
    /// Address of the occurrence blocking this one, if any.
    pub blocked_by: Option<Address>,
}

impl OccurrenceStatus {
    fn done(&self, wanted: Level) -> bool {
        self.blocked_by.is_some() || at_least(self.level, wanted)
    }
}

/// Saturation level and blocking status of every occurrence of `s`, in
/// canonical pre-order. `s` must not be axiomatic.
pub fn occurrence_statuses(s: &Sequent) -> Vec<OccurrenceStatus> {
    let occ = s.occurrences();
    let levels: Vec<Option<Level>> = occ.iter().map(|o| saturation_level(o.sequent)).collect();
    occ.iter()
        .map(|o| {
            let blocked_by = occ
                .iter()
                .zip(&levels)
                .find(|(s1, level)| {
                    **level == Some(Level::R3)
                        && o.address.is_imp_descendant_of(&s1.address)
                        && block_equivalent(s1.sequent, o.sequent)
                })
                .map(|(s1, _)| s1.address.clone());
            OccurrenceStatus {
                address: o.address.clone(),
                level: saturation_level(o.sequent),
                blocked_by,
            }
        })
        .collect()
}

/// The occurrence blocking the one at `t`, if any.
pub fn blocked(t: &Address, s: &Sequent) -> Option<Address> {
    occurrence_statuses(s)
        .into_iter()
        .find(|st| st.address == *t)
        .and_then(|st| st.blocked_by)
}

fn global(s: &Sequent, wanted: Level) -> bool {
    is_axiomatic(s).is_none() && occurrence_statuses(s).iter().all(|st| st.done(wanted))
}

pub fn global_r1(s: &Sequent) -> bool {
    global(s, Level::R1)
}

pub fn global_r2(s: &Sequent) -> bool {
    global(s, Level::R2)
}

pub fn global_saturated(s: &Sequent) -> bool {
    global(s, Level::R3)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeafStatus {
    /// The node has premises.
    Inner,
    /// Closed by an axiom at the given occurrence.
    Axiomatic { axiom: RuleId, at: Address },
    GlobalSaturated,
    /// Left unexpanded because the search stopped early.
    Open,
}

#[derive(Clone, Debug)]
pub struct DerivationNode {
    pub sequent: Sequent,
    pub rule: Option<RuleInstance>,
    pub children: Vec<usize>,
    pub status: LeafStatus,
}

/// A derivation stored as an arena; node 0 is the root and every child id is
/// larger than its parent's.
#[derive(Clone, Debug)]
pub struct Derivation {
    nodes: Vec<DerivationNode>,
}

impl Derivation {
    pub fn new(root: Sequent) -> Derivation {
        Derivation {
            nodes: vec![DerivationNode { sequent: root, rule: None, children: Vec::new(), status: LeafStatus::Open }],
        }
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, id: usize) -> &DerivationNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[DerivationNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty())
    }

    /// Node ids in depth-first order, left premise first.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[id].children.iter().rev());
        }
        out
    }

    /// Depth of the deepest node; the root has depth 0.
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for id in 0..self.nodes.len() {
            for &c in &self.nodes[id].children {
                depth[c] = depth[id] + 1;
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    fn push_child(&mut self, parent: usize, sequent: Sequent) -> usize {
        self.nodes.push(DerivationNode { sequent, rule: None, children: Vec::new(), status: LeafStatus::Open });
        let id = self.nodes.len() - 1;
        self.nodes[parent].children.push(id);
        self.nodes[parent].status = LeafStatus::Inner;
        id
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub rule_applications: u64,
    /// Expansion macros run by the main loop.
    pub expansions: u64,
    /// Times an unsaturated occurrence was skipped because it was blocked.
    pub blocking: u64,
    pub max_sequent_size: usize,
    pub nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Provable,
    Unprovable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Provable => "PROVABLE",
            Verdict::Unprovable => "UNPROVABLE",
        })
    }
}

/// What a countermodel must refute at its root world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Formula(Formula),
    Sequent(Sequent),
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum ProofResult {
    Provable {
        derivation: Derivation,
        stats: Stats,
    },
    Unprovable {
        derivation: Derivation,
        /// Node id of the global-saturated leaf.
        leaf: usize,
        report: ExtractionReport,
        verification: Verification,
        stats: Stats,
    },
}

impl ProofResult {
    pub fn verdict(&self) -> Verdict {
        match self {
            ProofResult::Provable { .. } => Verdict::Provable,
            ProofResult::Unprovable { .. } => Verdict::Unprovable,
        }
    }

    pub fn is_provable(&self) -> bool {
        self.verdict() == Verdict::Provable
    }

    pub fn derivation(&self) -> &Derivation {
        match self {
            ProofResult::Provable { derivation, .. } | ProofResult::Unprovable { derivation, .. } => derivation,
        }
    }

    pub fn stats(&self) -> &Stats {
        match self {
            ProofResult::Provable { stats, .. } | ProofResult::Unprovable { stats, .. } => stats,
        }
    }

    pub fn countermodel(&self) -> Option<&ExtractionReport> {
        match self {
            ProofResult::Unprovable { report, .. } => Some(report),
            ProofResult::Provable { .. } => None,
        }
    }

    pub fn verification(&self) -> Option<&Verification> {
        match self {
            ProofResult::Unprovable { verification, .. } => Some(verification),
            ProofResult::Provable { .. } => None,
        }
    }

    /// The global-saturated leaf sequent of an unprovable result.
    pub fn leaf(&self) -> Option<&Sequent> {
        match self {
            ProofResult::Unprovable { derivation, leaf, .. } => Some(&derivation.node(*leaf).sequent),
            ProofResult::Provable { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProveError {
    #[error("step budget of {0} rule applications exceeded")]
    BudgetExceeded(u64),
    #[error("extracted countermodel failed verification: {0}")]
    CountermodelRejected(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProveOptions {
    /// Maximum number of rule applications; `None` means unbounded.
    pub budget: Option<u64>,
}

/// The root sequent used for a formula: leading implications are moved to
/// the antecedent, so `B1 -> ... -> Bn -> C` starts from `B1, ..., Bn => C`.
pub fn initial_sequent(a: &Formula) -> Sequent {
    let (premises, goal) = a.split_implications();
    Sequent::new(premises, [goal])
}

pub fn prove(a: &Formula) -> Result<ProofResult, ProveError> {
    prove_with(a, &ProveOptions::default())
}

pub fn prove_with(a: &Formula, options: &ProveOptions) -> Result<ProofResult, ProveError> {
    search(initial_sequent(a), Goal::Formula(a.clone()), options)
}

/// Proof search from an arbitrary root sequent.
pub fn prove_sequent(s: &Sequent, options: &ProveOptions) -> Result<ProofResult, ProveError> {
    search(s.clone(), Goal::Sequent(s.clone()), options)
}

struct Search<'o> {
    d: Derivation,
    stats: Stats,
    options: &'o ProveOptions,
}

impl Search<'_> {
    fn count_rule(&mut self) -> Result<(), ProveError> {
        self.stats.rule_applications += 1;
        match self.options.budget {
            Some(b) if self.stats.rule_applications > b => Err(ProveError::BudgetExceeded(b)),
            _ => Ok(()),
        }
    }

    fn note(&mut self, id: usize) {
        let size = self.d.nodes[id].sequent.size();
        self.stats.max_sequent_size = self.stats.max_sequent_size.max(size);
    }

    /// Runs one expansion macro on the occurrence at `at` of leaf `leaf`.
    /// Returns the resulting open leaves, leftmost first.
    fn expand(&mut self, leaf: usize, level: Level, at: &Address) -> Result<Vec<usize>, ProveError> {
        self.stats.expansions += 1;
        let (hole, t) = Hole::open(&self.d.nodes[leaf].sequent, at).expect("address resolves in its leaf");
        let mut open = Vec::new();
        // The R3 macro handles the violations present when it starts, once each.
        let mut pending: Vec<RuleInstance> = match level {
            Level::R3 => RuleId::R3.iter().flat_map(|&r| local_violations(r, &t)).collect(),
            _ => Vec::new(),
        };
        pending.reverse();
        let mut work = vec![(leaf, t)];
        while let Some((node, t)) = work.pop() {
            if let Some((addr, axiom)) = is_axiomatic(&t) {
                let (_, base) = hole.plug(t);
                self.d.nodes[node].status = LeafStatus::Axiomatic { axiom, at: base.join(&addr) };
                continue;
            }
            let next = match level {
                Level::R1 => first_violation(&RuleId::R1, &t),
                Level::R2 => first_violation(&RuleId::R2, &t),
                Level::R3 => loop {
                    match pending.pop() {
                        Some(i) if local_violations(i.rule, &t).contains(&i) => break Some(i),
                        Some(_) => continue,
                        None => break None,
                    }
                },
            };
            let Some(instance) = next else {
                open.push(node);
                continue;
            };
            self.count_rule()?;
            let premises = local_premises(&instance, &t);
            if level == Level::R1 {
                debug_assert!(premises.iter().all(|p| p.modal_degree() == t.modal_degree()));
            }
            let (_, base) = hole.plug(t);
            self.d.nodes[node].rule = Some(instance.rebased(&base));
            let mut children = Vec::with_capacity(premises.len());
            for p in premises {
                let (full, _) = hole.plug(p.clone());
                let id = self.d.push_child(node, full);
                self.note(id);
                children.push((id, p));
            }
            work.extend(children.into_iter().rev());
        }
        Ok(open)
    }

    /// Chooses the level and occurrence to expand next in a non-axiomatic
    /// leaf, or `None` if the leaf is global-saturated.
    fn choose(&mut self, s: &Sequent) -> Option<(Level, Address)> {
        let statuses = occurrence_statuses(s);
        self.stats.blocking += statuses
            .iter()
            .filter(|st| st.blocked_by.is_some() && !at_least(st.level, Level::R3))
            .count() as u64;
        let level = [Level::R1, Level::R2, Level::R3]
            .into_iter()
            .find(|&l| !statuses.iter().all(|st| st.done(l)))?;
        let eligible = |st: &&OccurrenceStatus| {
            !st.done(level)
                && (level != Level::R3
                    || statuses
                        .iter()
                        .filter(|anc| st.address.is_imp_descendant_of(&anc.address))
                        .all(|anc| anc.done(Level::R3)))
        };
        let target = statuses.iter().find(eligible).expect("an outermost unsaturated occurrence exists");
        Some((level, target.address.clone()))
    }
}

fn search(root: Sequent, goal: Goal, options: &ProveOptions) -> Result<ProofResult, ProveError> {
    let mut run = Search { d: Derivation::new(root), stats: Stats::default(), options };
    run.note(0);
    let mut stack = vec![0usize];
    while let Some(leaf) = stack.pop() {
        let s = run.d.nodes[leaf].sequent.clone();
        if let Some((at, axiom)) = is_axiomatic(&s) {
            run.d.nodes[leaf].status = LeafStatus::Axiomatic { axiom, at };
            continue;
        }
        match run.choose(&s) {
            Some((level, at)) => {
                let open = run.expand(leaf, level, &at)?;
                stack.extend(open.into_iter().rev());
            }
            None => {
                run.d.nodes[leaf].status = LeafStatus::GlobalSaturated;
                run.stats.nodes = run.d.len();
                let report = countermodel::extract_model(&s).expect("leaf is global-saturated");
                let verification = countermodel::verify_countermodel(&report, &goal);
                if !verification.passed() {
                    return Err(ProveError::CountermodelRejected(verification.summary()));
                }
                return Ok(ProofResult::Unprovable {
                    derivation: run.d,
                    leaf,
                    report,
                    verification,
                    stats: run.stats,
                });
            }
        }
    }
    run.stats.nodes = run.d.len();
    Ok(ProofResult::Provable { derivation: run.d, stats: run.stats })
}

/// One expansion macro on leaf `leaf` at occurrence `at`, exposed for tests
/// and tooling. Returns the new open leaves.
pub fn expand_leaf(d: &mut Derivation, leaf: usize, level: Level, at: &Address) -> Vec<usize> {
    let options = ProveOptions::default();
    let mut run = Search { d: core::mem::replace(d, Derivation { nodes: Vec::new() }), stats: Stats::default(), options: &options };
    let open = run.expand(leaf, level, at).expect("no budget");
    *d = run.d;
    open
}

pub fn exp1(d: &mut Derivation, leaf: usize, at: &Address) -> Vec<usize> {
    expand_leaf(d, leaf, Level::R1, at)
}

pub fn exp2(d: &mut Derivation, leaf: usize, at: &Address) -> Vec<usize> {
    expand_leaf(d, leaf, Level::R2, at)
}

pub fn exp3(d: &mut Derivation, leaf: usize, at: &Address) -> Vec<usize> {
    expand_leaf(d, leaf, Level::R3, at)
}

/// Every formula on either side of any occurrence, with its subformulas.
pub fn subformula_closure(s: &Sequent) -> BTreeSet<Formula> {
    s.all_formulas().iter().flat_map(Formula::subformulas).collect()
}
