//! Formula corpora and the benchmark runner.
//!
//! A corpus has one formula per line, optionally annotated with the expected
//! verdict: `FORMULA # expect: provable`. Blank lines and lines starting with
//! `#` are skipped.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use fik_core::{prove_with, Formula, ProveOptions, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    /// 1-based line number in the corpus file.
    pub line: usize,
    pub formula: Formula,
    pub expect: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("corpus line {line}: {message}")]
pub struct CorpusError {
    pub line: usize,
    pub message: String,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| CorpusError { line: i + 1, message };
        let (formula, note) = match line.split_once('#') {
            Some((f, n)) => (f.trim(), Some(n.trim())),
            None => (line, None),
        };
        let expect = match note {
            None => None,
            Some(n) => {
                let v = n.strip_prefix("expect:").ok_or_else(|| err(format!("expected `# expect: ...`, found `# {n}`")))?;
                Some(match v.trim() {
                    "provable" => Verdict::Provable,
                    "unprovable" => Verdict::Unprovable,
                    other => return Err(err(format!("unknown verdict `{other}`"))),
                })
            }
        };
        let formula = Formula::parse(formula).map_err(|e| err(e.to_string()))?;
        out.push(Entry { line: i + 1, formula, expect });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub entry: Entry,
    /// The verdict, or the error that stopped the search.
    pub verdict: Result<Verdict, String>,
    pub elapsed: Duration,
    pub rule_applications: u64,
    pub max_sequent_size: usize,
}

impl Outcome {
    /// True when the search finished and matched any expectation.
    pub fn ok(&self) -> bool {
        match (&self.verdict, self.entry.expect) {
            (Ok(v), Some(e)) => *v == e,
            (Ok(_), None) => true,
            (Err(_), _) => false,
        }
    }
}

fn run_one(entry: &Entry, options: &ProveOptions) -> Outcome {
    let start = Instant::now();
    let result = prove_with(&entry.formula, options);
    let elapsed = start.elapsed();
    match result {
        Ok(r) => Outcome {
            entry: entry.clone(),
            verdict: Ok(r.verdict()),
            elapsed,
            rule_applications: r.stats().rule_applications,
            max_sequent_size: r.stats().max_sequent_size,
        },
        Err(e) => Outcome {
            entry: entry.clone(),
            verdict: Err(e.to_string()),
            elapsed,
            rule_applications: 0,
            max_sequent_size: 0,
        },
    }
}

/// Proves every entry using up to `jobs` threads. Results come back in
/// corpus order whatever the thread count.
pub fn bench(entries: &[Entry], options: &ProveOptions, jobs: usize) -> Vec<Outcome> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Outcome>>> = entries.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, entries.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(entry) = entries.get(i) else { break };
                *slots[i].lock().unwrap() = Some(run_one(entry, options));
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().unwrap().expect("every entry ran")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_annotations() {
        let entries = parse("# header\n\np -> p # expect: provable\n[]p -> p # expect: unprovable\ntop\n").unwrap();
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].line, 3);
        assert_eq!(entries[1].expect, Some(Verdict::Unprovable));
        assert_eq!(entries[2].expect, None);
        assert_eq!(parse("p # expect: maybe").unwrap_err().line, 1);
        assert_eq!(parse("p ->").unwrap_err().line, 1);
    }

    #[test]
    fn bench_is_order_preserving() {
        let entries = parse("p -> p # expect: provable\n[]p -> p # expect: provable\n").unwrap();
        for jobs in [1, 4] {
            let out = bench(&entries, &ProveOptions::default(), jobs);
            assert!(out[0].ok());
            assert!(!out[1].ok());
            assert_eq!(out[1].entry.line, 2);
        }
        assert!(bench(&[], &ProveOptions::default(), 2).is_empty());
    }
}
