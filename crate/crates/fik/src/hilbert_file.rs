//! Line-oriented Hilbert derivation files.
//!
//! ```text
//! 1. top ; ax IPL10
//! 2. top -> q -> top ; ax IPL1 {p:=top}
//! 3. q -> top ; mp 1 2
//! ```
//!
//! Each line is `INDEX. FORMULA ; JUSTIFICATION` with the justification one
//! of `ax [SCHEMA] [{x:=FORMULA, ...}]`, `mp I J` or `nec I`. Blank lines and
//! lines starting with `#` are skipped.

use std::sync::Arc;

use fik_core::hilbert::Substitution;
use fik_core::{AxiomSchema, Formula, HilbertDerivation, Justification};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct HilbertFileError {
    pub line: usize,
    pub message: String,
}

pub fn parse(text: &str) -> Result<HilbertDerivation, HilbertFileError> {
    let mut d = HilbertDerivation::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| HilbertFileError { line: i + 1, message };
        let (index, rest) = line.split_once('.').ok_or_else(|| err("expected `INDEX.`".into()))?;
        let index: usize = index.trim().parse().map_err(|_| err(format!("bad step index `{}`", index.trim())))?;
        if index != d.steps.len() + 1 {
            return Err(err(format!("step {index} out of sequence, expected {}", d.steps.len() + 1)));
        }
        let (formula, just) = rest.split_once(';').ok_or_else(|| err("expected `; JUSTIFICATION`".into()))?;
        let formula = Formula::parse(formula.trim()).map_err(|e| err(e.to_string()))?;
        let justification = parse_justification(just.trim()).map_err(err)?;
        d.push(formula, justification);
    }
    Ok(d)
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let indices = |n: usize| -> Result<Vec<usize>, String> {
        let v: Vec<usize> = rest
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("bad step reference `{t}`")))
            .collect::<Result<_, _>>()?;
        if v.len() == n {
            Ok(v)
        } else {
            Err(format!("`{head}` takes {n} step reference(s)"))
        }
    };
    match head {
        "mp" => indices(2).map(|v| Justification::Mp(v[0], v[1])),
        "nec" => indices(1).map(|v| Justification::Nec(v[0])),
        "ax" => {
            let (name, subst) = match rest.find('{') {
                Some(k) => (rest[..k].trim(), Some(&rest[k..])),
                None => (rest, None),
            };
            let schema = match name {
                "" => None,
                n => Some(AxiomSchema::from_name(n).ok_or_else(|| format!("unknown axiom schema `{n}`"))?),
            };
            let subst = subst.map(parse_substitution).transpose()?.unwrap_or_default();
            Ok(Justification::Axiom { schema, subst })
        }
        other => Err(format!("unknown justification `{other}`")),
    }
}

fn parse_substitution(text: &str) -> Result<Substitution, String> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| String::from("substitution must be `{x:=FORMULA, ...}`"))?;
    let mut subst = Substitution::new();
    for binding in inner.split(',').map(str::trim).filter(|b| !b.is_empty()) {
        let (var, f) = binding.split_once(":=").ok_or_else(|| format!("expected `x:=FORMULA`, found `{binding}`"))?;
        let f = Formula::parse(f.trim()).map_err(|e| e.to_string())?;
        if subst.insert(Arc::from(var.trim()), f).is_some() {
            return Err(format!("`{}` bound twice", var.trim()));
        }
    }
    Ok(subst)
}

/// Renders a derivation back into the file format.
pub fn render(d: &HilbertDerivation) -> String {
    let mut out = String::new();
    for (i, step) in d.steps.iter().enumerate() {
        let just = match &step.justification {
            Justification::Mp(a, b) => format!("mp {a} {b}"),
            Justification::Nec(a) => format!("nec {a}"),
            Justification::Axiom { schema, subst } => {
                let mut s = String::from("ax");
                if let Some(schema) = schema {
                    s.push(' ');
                    s.push_str(schema.name());
                }
                if !subst.is_empty() {
                    let b: Vec<String> = subst.iter().map(|(x, f)| format!("{x}:={f}")).collect();
                    s.push_str(&format!(" {{{}}}", b.join(", ")));
                }
                s
            }
        };
        out.push_str(&format!("{}. {} ; {just}\n", i + 1, step.formula));
    }
    out
}
