//! Finite bi-relational models, forcing, frame-condition checks and a
//! brute-force countermodel oracle.
//!
//! A model is `(W, ≤, R, V)` where `≤` is a pre-order, `V` is hereditary along
//! `≤`, and forward confluence holds: whenever `z ≤ x` and `R z y` there is
//! some `t` with `R x t` and `y ≤ t`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::Formula;
use crate::sequent::{Sequent, Succedent};

/// Largest world count the enumerator supports; relation masks are `u64`.
pub const MAX_ENUMERATED_WORLDS: usize = 7;

/// Square boolean matrix over world indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation { n, bits: vec![false; n * n] }
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = true;
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = false;
    }

    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&b| self.contains(a, b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| self.successors(a).map(move |b| (a, b)))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A finite bi-relational model. Worlds are indexed `0..len()` and carry
/// display names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Model {
    names: Vec<String>,
    leq: Relation,
    acc: Relation,
    val: Vec<BTreeSet<Arc<str>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world index {0} out of range")]
    WorldOutOfRange(usize),
    #[error("duplicate world name `{0}`")]
    DuplicateWorld(String),
    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),
}

/// One failed frame condition, with the offending worlds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    NotReflexive { world: usize },
    /// `x ≤ y` and `y ≤ z` but not `x ≤ z`.
    NotTransitive { x: usize, y: usize, z: usize },
    /// `x ≤ y` but the atom numbered `atom` (in the model's atom order) is
    /// true at `x` and false at `y`.
    Hereditary { x: usize, y: usize, atom: usize },
    /// `z ≤ x` and `R z y` but no `t` has `R x t` and `y ≤ t`.
    ForwardConfluence { x: usize, y: usize, z: usize },
}

impl Violation {
    pub fn describe(&self, m: &Model) -> String {
        let n = |i: usize| m.names[i].as_str();
        match *self {
            Violation::NotReflexive { world } => alloc::format!("pre-order: {} ≤ {} missing", n(world), n(world)),
            Violation::NotTransitive { x, y, z } => alloc::format!(
                "pre-order: {} ≤ {} and {} ≤ {} but not {} ≤ {}",
                n(x), n(y), n(y), n(z), n(x), n(z)
            ),
            Violation::Hereditary { x, y, atom } => {
                let atom = m.atoms().into_iter().nth(atom).unwrap_or_else(|| Arc::from("?"));
                alloc::format!("hereditary: {} ≤ {} and {atom} true at {} only", n(x), n(y), n(x))
            }
            Violation::ForwardConfluence { x, y, z } => alloc::format!(
                "forward confluence: {} ≤ {} and R {} {} but no t with R {} t and {} ≤ t",
                n(z), n(x), n(z), n(y), n(x), n(y)
            ),
        }
    }
}

impl Model {
    /// A model over the given world names with empty relations and valuation.
    pub fn new(names: Vec<String>) -> Result<Model, ModelError> {
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateWorld(name.clone()));
            }
        }
        let n = names.len();
        Ok(Model {
            names,
            leq: Relation::empty(n),
            acc: Relation::empty(n),
            val: vec![BTreeSet::new(); n],
        })
    }

    /// Worlds `w0 .. w{n-1}` with empty relations.
    pub fn with_worlds(n: usize) -> Model {
        Model::new((0..n).map(|i| alloc::format!("w{i}")).collect()).expect("names are distinct")
    }

    /// Builds a model from named pairs. Nothing is closed or repaired.
    pub fn from_named<'a>(
        names: &[&str],
        leq: impl IntoIterator<Item = (&'a str, &'a str)>,
        acc: impl IntoIterator<Item = (&'a str, &'a str)>,
        val: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Model, ModelError> {
        let mut m = Model::new(names.iter().map(|s| String::from(*s)).collect())?;
        for (a, b) in leq {
            let (a, b) = (m.index_of(a)?, m.index_of(b)?);
            m.leq.insert(a, b);
        }
        for (a, b) in acc {
            let (a, b) = (m.index_of(a)?, m.index_of(b)?);
            m.acc.insert(a, b);
        }
        for (w, p) in val {
            let w = m.index_of(w)?;
            m.add_val(w, p)?;
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ModelError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ModelError::UnknownWorld(String::from(name)))
    }

    pub fn leq(&self) -> &Relation {
        &self.leq
    }

    pub fn acc(&self) -> &Relation {
        &self.acc
    }

    pub fn val(&self, w: usize) -> &BTreeSet<Arc<str>> {
        &self.val[w]
    }

    /// Every atom true somewhere, in name order.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        self.val.iter().flatten().cloned().collect()
    }

    fn check(&self, w: usize) -> Result<(), ModelError> {
        if w < self.len() {
            Ok(())
        } else {
            Err(ModelError::WorldOutOfRange(w))
        }
    }

    pub fn add_leq(&mut self, a: usize, b: usize) -> Result<(), ModelError> {
        self.check(a)?;
        self.check(b)?;
        self.leq.insert(a, b);
        Ok(())
    }

    pub fn remove_leq(&mut self, a: usize, b: usize) -> Result<(), ModelError> {
        self.check(a)?;
        self.check(b)?;
        self.leq.remove(a, b);
        Ok(())
    }

    pub fn add_acc(&mut self, a: usize, b: usize) -> Result<(), ModelError> {
        self.check(a)?;
        self.check(b)?;
        self.acc.insert(a, b);
        Ok(())
    }

    pub fn add_val(&mut self, w: usize, atom: &str) -> Result<(), ModelError> {
        self.check(w)?;
        if !crate::formula::is_atom_name(atom) {
            return Err(ModelError::InvalidAtom(String::from(atom)));
        }
        self.val[w].insert(Arc::from(atom));
        Ok(())
    }

    /// Adds every missing `w ≤ w` pair.
    pub fn close_leq_reflexive(&mut self) {
        for w in 0..self.len() {
            self.leq.insert(w, w);
        }
    }

    /// All frame-condition violations, in a fixed order: reflexivity,
    /// transitivity, hereditary condition, forward confluence.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.len();
        let mut out = Vec::new();
        for w in 0..n {
            if !self.leq.contains(w, w) {
                out.push(Violation::NotReflexive { world: w });
            }
        }
        for x in 0..n {
            for y in self.leq.successors(x) {
                for z in self.leq.successors(y) {
                    if !self.leq.contains(x, z) {
                        out.push(Violation::NotTransitive { x, y, z });
                    }
                }
            }
        }
        let atoms: Vec<_> = self.atoms().into_iter().collect();
        for (x, y) in self.leq.pairs() {
            for (i, p) in atoms.iter().enumerate() {
                if self.val[x].contains(p) && !self.val[y].contains(p) {
                    out.push(Violation::Hereditary { x, y, atom: i });
                }
            }
        }
        for (z, x) in self.leq.pairs() {
            for y in self.acc.successors(z) {
                if !self.acc.successors(x).any(|t| self.leq.contains(y, t)) {
                    out.push(Violation::ForwardConfluence { x, y, z });
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn is_valid_frame(&self) -> bool {
        self.validate().is_empty()
    }

    /// The set of worlds forcing `a`, indexed by world.
    pub fn truth_set(&self, a: &Formula) -> Vec<bool> {
        let mut memo = BTreeMap::new();
        self.eval(a, &mut memo)
    }

    fn eval<'f>(&self, a: &'f Formula, memo: &mut BTreeMap<&'f Formula, Vec<bool>>) -> Vec<bool> {
        if let Some(v) = memo.get(a) {
            return v.clone();
        }
        let n = self.len();
        let out: Vec<bool> = match a {
            Formula::Atom(p) => (0..n).map(|w| self.val[w].contains(p)).collect(),
            Formula::Top => vec![true; n],
            Formula::Bot => vec![false; n],
            Formula::And(l, r) => {
                let (l, r) = (self.eval(l, memo), self.eval(r, memo));
                l.iter().zip(&r).map(|(a, b)| *a && *b).collect()
            }
            Formula::Or(l, r) => {
                let (l, r) = (self.eval(l, memo), self.eval(r, memo));
                l.iter().zip(&r).map(|(a, b)| *a || *b).collect()
            }
            Formula::Imp(l, r) => {
                let (l, r) = (self.eval(l, memo), self.eval(r, memo));
                (0..n).map(|w| self.leq.successors(w).all(|v| !l[v] || r[v])).collect()
            }
            Formula::Box(b) => {
                let b = self.eval(b, memo);
                (0..n)
                    .map(|w| self.leq.successors(w).all(|u| self.acc.successors(u).all(|v| b[v])))
                    .collect()
            }
            Formula::Dia(b) => {
                let b = self.eval(b, memo);
                (0..n).map(|w| self.acc.successors(w).any(|v| b[v])).collect()
            }
        };
        memo.insert(a, out.clone());
        out
    }

    /// Truth sets of every subformula of `a`.
    pub fn subformula_truth(&self, a: &Formula) -> BTreeMap<Formula, Vec<bool>> {
        let mut memo = BTreeMap::new();
        self.eval(a, &mut memo);
        memo.into_iter().map(|(k, v)| (k.clone(), v)).collect()
    }

    pub fn forces(&self, w: usize, a: &Formula) -> Result<bool, ModelError> {
        self.check(w)?;
        Ok(self.truth_set(a)[w])
    }

    /// True iff `a` is forced at every world.
    pub fn valid(&self, a: &Formula) -> bool {
        self.truth_set(a).into_iter().all(|b| b)
    }

    /// The worlds forcing a sequent, with `[T]` read over `R`-successors and
    /// `<T>` over `≤`-successors.
    pub fn sequent_truth_set(&self, s: &Sequent) -> Vec<bool> {
        let n = self.len();
        let mut out: Vec<bool> = self.succedent_truth_set(&s.succedent);
        for a in &s.antecedent {
            let t = self.truth_set(a);
            for w in 0..n {
                out[w] |= !t[w];
            }
        }
        out
    }

    /// The worlds forcing some entry of a succedent; empty succedents are
    /// forced nowhere.
    pub fn succedent_truth_set(&self, delta: &Succedent) -> Vec<bool> {
        let n = self.len();
        let mut out = vec![false; n];
        for a in &delta.formulas {
            let t = self.truth_set(a);
            for w in 0..n {
                out[w] |= t[w];
            }
        }
        for b in &delta.modal {
            let t = self.sequent_truth_set(b);
            for (w, o) in out.iter_mut().enumerate() {
                *o |= self.acc.successors(w).all(|v| t[v]);
            }
        }
        for b in &delta.imp {
            let t = self.sequent_truth_set(b);
            for (w, o) in out.iter_mut().enumerate() {
                *o |= self.leq.successors(w).all(|v| t[v]);
            }
        }
        out
    }

    pub fn forces_sequent(&self, w: usize, s: &Sequent) -> Result<bool, ModelError> {
        self.check(w)?;
        Ok(self.sequent_truth_set(s)[w])
    }

    pub fn forces_succedent(&self, w: usize, delta: &Succedent) -> Result<bool, ModelError> {
        self.check(w)?;
        Ok(self.succedent_truth_set(delta)[w])
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "worlds: {}", self.names.join(", "))?;
        let pairs = |r: &Relation| {
            r.pairs()
                .map(|(a, b)| alloc::format!("{}≤{}", self.names[a], self.names[b]))
                .collect::<Vec<_>>()
        };
        writeln!(f, "leq: {}", pairs(&self.leq).join(" "))?;
        let acc: Vec<_> = self
            .acc
            .pairs()
            .map(|(a, b)| alloc::format!("R{}{}", self.names[a], self.names[b]))
            .collect();
        writeln!(f, "r: {}", acc.join(" "))?;
        for (w, v) in self.val.iter().enumerate() {
            let atoms: Vec<&str> = v.iter().map(|p| &**p).collect();
            writeln!(f, "V({}) = {{{}}}", self.names[w], atoms.join(", "))?;
        }
        Ok(())
    }
}

/// A frame from the enumerator: `up[w]` is the mask of `≤`-successors of `w`,
/// `acc[w]` the mask of `R`-successors.
#[derive(Clone, Debug)]
struct Frame {
    n: usize,
    up: Vec<u64>,
    acc: Vec<u64>,
    upsets: Vec<u64>,
}

fn preorders(n: usize) -> Vec<Vec<u64>> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << off.len()) {
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for (k, &(i, j)) in off.iter().enumerate() {
            if mask >> k & 1 == 1 {
                up[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| up[i] >> j & 1 == 0 || up[j] & !up[i] == 0));
        if transitive {
            out.push(up);
        }
    }
    out
}

fn forward_confluent(n: usize, up: &[u64], acc: &[u64]) -> bool {
    (0..n).all(|z| {
        (0..n).filter(|&x| x != z && up[z] >> x & 1 == 1).all(|x| {
            (0..n)
                .filter(|&y| acc[z] >> y & 1 == 1)
                .all(|y| acc[x] & up[y] != 0)
        })
    })
}

fn upsets(n: usize, up: &[u64]) -> Vec<u64> {
    (0u64..(1 << n))
        .filter(|&s| (0..n).all(|w| s >> w & 1 == 0 || up[w] & !s == 0))
        .collect()
}

/// Deterministic stream of FC frames: world count ascending, then pre-orders
/// by off-diagonal bitmask, then `R` by bitmask.
struct Frames {
    max: usize,
    n: usize,
    orders: Vec<Vec<u64>>,
    order: usize,
    acc_mask: u64,
}

impl Frames {
    fn new(max: usize) -> Frames {
        assert!(max <= MAX_ENUMERATED_WORLDS, "at most {MAX_ENUMERATED_WORLDS} worlds can be enumerated");
        Frames { max, n: 0, orders: Vec::new(), order: 0, acc_mask: 0 }
    }
}

impl Iterator for Frames {
    type Item = Frame;

    fn next(&mut self) -> Option<Frame> {
        loop {
            if self.order >= self.orders.len() {
                self.n += 1;
                if self.n > self.max {
                    return None;
                }
                self.orders = preorders(self.n);
                self.order = 0;
                self.acc_mask = 0;
                continue;
            }
            let n = self.n;
            if self.acc_mask >= 1u64 << (n * n) {
                self.order += 1;
                self.acc_mask = 0;
                continue;
            }
            let mask = self.acc_mask;
            self.acc_mask += 1;
            let full = (1u64 << n) - 1;
            let acc: Vec<u64> = (0..n).map(|i| mask >> (i * n) & full).collect();
            let up = &self.orders[self.order];
            if forward_confluent(n, up, &acc) {
                return Some(Frame { n, up: up.clone(), acc, upsets: upsets(n, up) });
            }
        }
    }
}

fn frame_model(frame: &Frame, atoms: &[Arc<str>], choice: &[usize]) -> Model {
    let mut m = Model::with_worlds(frame.n);
    for a in 0..frame.n {
        for b in 0..frame.n {
            if frame.up[a] >> b & 1 == 1 {
                m.leq.insert(a, b);
            }
            if frame.acc[a] >> b & 1 == 1 {
                m.acc.insert(a, b);
            }
        }
    }
    for (p, &c) in atoms.iter().zip(choice) {
        let set = frame.upsets[c];
        for w in 0..frame.n {
            if set >> w & 1 == 1 {
                m.val[w].insert(p.clone());
            }
        }
    }
    m
}

/// Advances a mixed-radix counter; false once it wraps around.
fn advance(choice: &mut [usize], radix: usize) -> bool {
    for c in choice.iter_mut() {
        *c += 1;
        if *c < radix {
            return true;
        }
        *c = 0;
    }
    false
}

/// Iterator returned by [`enumerate_models`].
pub struct Models {
    frames: Frames,
    atoms: Vec<Arc<str>>,
    current: Option<Frame>,
    choice: Vec<usize>,
}

impl Iterator for Models {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        if self.current.is_none() {
            self.current = Some(self.frames.next()?);
            self.choice = vec![0; self.atoms.len()];
        }
        let frame = self.current.as_ref().expect("frame present");
        let model = frame_model(frame, &self.atoms, &self.choice);
        if !advance(&mut self.choice, frame.upsets.len()) {
            self.current = None;
        }
        Some(model)
    }
}

/// Every valid model with `1..=max_worlds` worlds whose valuation ranges over
/// `atoms`, each exactly once, in a fixed order. No isomorphism reduction is
/// done. Panics if `max_worlds` exceeds [`MAX_ENUMERATED_WORLDS`].
pub fn enumerate_models<I, S>(max_worlds: usize, atoms: I) -> Models
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let atoms: BTreeSet<Arc<str>> = atoms.into_iter().map(|s| Arc::from(s.as_ref())).collect();
    Models {
        frames: Frames::new(max_worlds),
        atoms: atoms.into_iter().collect(),
        current: None,
        choice: Vec::new(),
    }
}

/// A formula flattened into a DAG of distinct subformulas, children first.
enum Node {
    Atom(usize),
    Top,
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Box(usize),
    Dia(usize),
}

fn compile(a: &Formula, atoms: &[Arc<str>], ids: &mut BTreeMap<Formula, usize>, nodes: &mut Vec<Node>) -> usize {
    if let Some(&i) = ids.get(a) {
        return i;
    }
    let mut sub = |b: &Formula, nodes: &mut Vec<Node>| compile(b, atoms, ids, nodes);
    let node = match a {
        Formula::Atom(p) => Node::Atom(atoms.iter().position(|q| q == p).expect("atom collected")),
        Formula::Top => Node::Top,
        Formula::Bot => Node::Bot,
        Formula::And(l, r) => Node::And(sub(l, nodes), sub(r, nodes)),
        Formula::Or(l, r) => Node::Or(sub(l, nodes), sub(r, nodes)),
        Formula::Imp(l, r) => Node::Imp(sub(l, nodes), sub(r, nodes)),
        Formula::Box(b) => Node::Box(sub(b, nodes)),
        Formula::Dia(b) => Node::Dia(sub(b, nodes)),
    };
    nodes.push(node);
    let i = nodes.len() - 1;
    ids.insert(a.clone(), i);
    i
}

fn eval_masks(nodes: &[Node], frame: &Frame, vals: &[u64], out: &mut Vec<u64>) {
    let n = frame.n;
    let full = (1u64 << n) - 1;
    out.clear();
    for node in nodes {
        let m = match *node {
            Node::Atom(p) => vals[p],
            Node::Top => full,
            Node::Bot => 0,
            Node::And(l, r) => out[l] & out[r],
            Node::Or(l, r) => out[l] | out[r],
            Node::Imp(l, r) => {
                let bad = out[l] & !out[r];
                (0..n).filter(|&w| frame.up[w] & bad == 0).fold(0, |m, w| m | 1 << w)
            }
            Node::Box(b) => {
                let bad = (0..n).filter(|&w| frame.acc[w] & !out[b] != 0).fold(0, |m, w| m | 1 << w);
                (0..n).filter(|&w| frame.up[w] & bad == 0).fold(0, |m, w| m | 1 << w)
            }
            Node::Dia(b) => (0..n).filter(|&w| frame.acc[w] & out[b] != 0).fold(0, |m, w| m | 1 << w),
        };
        out.push(m);
    }
}

/// The first enumerated `(model, world)` with the world not forcing `a`,
/// searching models of up to `max_worlds` worlds over the atoms of `a`.
/// `None` only means no countermodel exists within that bound.
pub fn find_countermodel_bruteforce(a: &Formula, max_worlds: usize) -> Option<(Model, usize)> {
    let atoms: Vec<Arc<str>> = a.atoms().into_iter().collect();
    let mut ids = BTreeMap::new();
    let mut nodes = Vec::new();
    let root = compile(a, &atoms, &mut ids, &mut nodes);
    let mut masks = Vec::with_capacity(nodes.len());
    let mut vals = vec![0u64; atoms.len()];
    for frame in Frames::new(max_worlds) {
        let full = (1u64 << frame.n) - 1;
        let mut choice = vec![0usize; atoms.len()];
        loop {
            for (v, &c) in vals.iter_mut().zip(&choice) {
                *v = frame.upsets[c];
            }
            eval_masks(&nodes, &frame, &vals, &mut masks);
            let truth = masks[root];
            if truth != full {
                let world = (!truth & full).trailing_zeros() as usize;
                return Some((frame_model(&frame, &atoms, &choice), world));
            }
            if !advance(&mut choice, frame.upsets.len()) {
                break;
            }
        }
    }
    None
}

/// The two four-world models from the argument that `□` and `◇` cannot be
/// defined from each other, as `(box model, diamond model)`. Both use worlds
/// `a, b, c, d` with `a ≤ c`, `b ≤ d` and `V(p) = {d}`.
pub fn interdefinability_fixtures() -> (Model, Model) {
    let names = ["a", "b", "c", "d"];
    let leq = [("a", "a"), ("b", "b"), ("c", "c"), ("d", "d"), ("a", "c"), ("b", "d")];
    let first = Model::from_named(&names, leq, [("a", "b"), ("a", "d"), ("c", "d")], [("d", "p")])
        .expect("fixture is well formed");
    let second = Model::from_named(&names, leq, [("a", "b"), ("c", "b"), ("c", "d")], [("d", "p")])
        .expect("fixture is well formed");
    (first, second)
}
