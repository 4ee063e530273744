//! Graphviz rendering of models: solid edges for `R`, dashed edges for `≤`.

use std::fmt::Write;

use fik_core::Model;

#[derive(Clone, Copy, Debug, Default)]
pub struct DotOptions {
    /// Drop reflexive `≤` edges and those implied by transitivity.
    pub elide_preorder_closure: bool,
}

/// `≤` edges to draw: all pairs, or the transitive reduction of the strict part.
fn leq_edges(m: &Model, elide: bool) -> Vec<(usize, usize)> {
    let leq = m.leq();
    if !elide {
        return leq.pairs().collect();
    }
    let strict = |a: usize, b: usize| a != b && leq.contains(a, b);
    leq.pairs()
        .filter(|&(a, b)| strict(a, b))
        // Mutually related worlds keep their edges; only genuine detours count.
        .filter(|&(a, b)| !(0..m.len()).any(|c| strict(a, c) && strict(c, b) && !leq.contains(c, a) && !leq.contains(b, c)))
        .collect()
}

/// DOT text for `m`. `labels` optionally adds a second line per world, such
/// as the sequent it came from.
pub fn render(m: &Model, labels: Option<&[String]>, options: DotOptions) -> String {
    let mut out = String::from("digraph model {\n  node [shape=box, fontname=\"monospace\"];\n");
    for w in 0..m.len() {
        let mut label = m.name(w).to_string();
        let atoms: Vec<&str> = m.val(w).iter().map(|p| &**p).collect();
        if !atoms.is_empty() {
            write!(label, " : {}", atoms.join(", ")).unwrap();
        }
        if let Some(text) = labels.and_then(|l| l.get(w)) {
            write!(label, "\\n{text}").unwrap();
        }
        writeln!(out, "  w{w} [label=\"{}\"];", label.replace('"', "\\\"")).unwrap();
    }
    for (a, b) in m.acc().pairs() {
        writeln!(out, "  w{a} -> w{b} [label=\"R\"];").unwrap();
    }
    for (a, b) in leq_edges(m, options.elide_preorder_closure) {
        writeln!(out, "  w{a} -> w{b} [style=dashed, arrowhead=empty];").unwrap();
    }
    out.push_str("}\n");
    out
}
