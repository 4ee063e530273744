//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::path::PathBuf;
use std::time::Instant;

use fik::random::{self, FormulaShape};
use fik::{corpus, hilbert_file};
use fik_core::calculus::{applicable, apply, Goal};
use fik_core::kripke::interdefinability_fixtures;
use fik_core::sequent::{block_equivalent, sharp, star, structurally_included};
use fik_core::{
    check_derivation, enumerate_models, find_countermodel_bruteforce, prove, prove_sequent, prove_with,
    verify_countermodel, Formula, Model, ProveError, ProveOptions, RuleId, Sequent, Succedent,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 0x5EED_F1C0;
/// Rule applications after which a search counts as non-terminating.
const RUNAWAY: u64 = 2_000_000;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn f(text: &str) -> Formula {
    Formula::parse(text).unwrap()
}

fn seq(text: &str) -> Sequent {
    Sequent::parse(text).unwrap()
}

fn random_suite(n: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shape = FormulaShape::default();
    (0..n).map(|_| random::formula(&mut rng, &shape)).collect()
}

fn shipped_corpus() -> Vec<corpus::Entry> {
    corpus::parse(&std::fs::read_to_string(data("paper.fik")).unwrap()).unwrap()
}

fn golden_verdicts() -> Outcome {
    let provable = [
        "[](p -> q) -> []p -> []q",
        "[](p -> q) -> <>p -> <>q",
        "~<>bot",
        "<>(p \\/ q) -> <>p \\/ <>q",
        "[](p \\/ q) -> (<>p -> []q) -> []q",
        "[](p \\/ q) -> ((<>p -> []q) -> []q)",
        "(~[]bot -> []bot) -> []bot",
    ];
    let unprovable = ["(<>p -> []q) -> [](p -> q)", "~~[]~p -> []~p"];
    let mut wrong = Vec::new();
    let mut total = 0;
    for (texts, want) in [(&provable[..], true), (&unprovable[..], false)] {
        for text in texts {
            total += 1;
            if prove(&f(text)).map_err(|e| e.to_string())?.is_provable() != want {
                wrong.push(*text);
            }
        }
    }
    // The sequent the wCD example reduces to.
    total += 1;
    let s = seq("<>p -> []q, [](p \\/ q) => []q");
    if !prove_sequent(&s, &ProveOptions::default()).map_err(|e| e.to_string())?.is_provable() {
        wrong.push("<>p -> []q, [](p \\/ q) => []q");
    }
    if wrong.is_empty() {
        Ok(format!("{total}/{total} verdicts"))
    } else {
        Err(format!("wrong verdicts: {}", wrong.join("; ")))
    }
}

fn countermodel_fidelity() -> Outcome {
    let check = |goal: &str, worlds: usize, valued: &str| -> Result<(), String> {
        let a = f(goal);
        let r = prove(&a).map_err(|e| e.to_string())?;
        let report = r.countermodel().ok_or(format!("{goal} was proved"))?;
        let v = verify_countermodel(report, &Goal::Formula(a));
        if !v.passed() {
            return Err(format!("{goal}: {}", v.summary()));
        }
        let m = &report.model;
        if m.len() != worlds {
            return Err(format!("{goal}: {} worlds, expected {worlds}", m.len()));
        }
        let with_val: Vec<usize> = (0..m.len()).filter(|&w| !m.val(w).is_empty()).collect();
        let atoms: Vec<&str> = with_val.iter().flat_map(|&w| m.val(w).iter().map(|p| &**p)).collect();
        if with_val.len() != 1 || report.worlds[with_val[0]] != seq(valued) || atoms != ["p"] {
            return Err(format!("{goal}: valuation {atoms:?} at worlds {with_val:?}"));
        }
        Ok(())
    };
    check("(<>p -> []q) -> [](p -> q)", 4, "p => q")?;
    check("~~[]~p -> []~p", 7, "p => bot")?;
    Ok("4 and 7 worlds, V = {p} at the expected world, all five checks pass".into())
}

fn oracle_agreement() -> Outcome {
    let suite = random_suite(500);
    let (mut provable, mut violations) = (0, Vec::new());
    for a in &suite {
        let r = prove(a).map_err(|e| format!("{a}: {e}"))?;
        let oracle = find_countermodel_bruteforce(a, 3);
        if r.is_provable() {
            provable += 1;
            if oracle.is_some() {
                violations.push(format!("{a}: provable but the oracle refutes it"));
            }
        } else {
            let report = r.countermodel().expect("unprovable results carry a model");
            if !verify_countermodel(report, &Goal::Formula(a.clone())).passed() {
                violations.push(format!("{a}: extracted model fails verification"));
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("{} formulas, {provable} provable, 0 violations", suite.len()))
    } else {
        Err(violations.join("; "))
    }
}

fn disjunction_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let shape = FormulaShape { max_size: 6, ..FormulaShape::default() };
    let (mut provable, mut violations) = (0, Vec::new());
    for _ in 0..300 {
        let (a, b) = (random::formula(&mut rng, &shape), random::formula(&mut rng, &shape));
        let ok = |x: &Formula| prove(x).map(|r| r.is_provable()).map_err(|e| e.to_string());
        if ok(&Formula::or(a.clone(), b.clone()))? {
            provable += 1;
            if !ok(&a)? && !ok(&b)? {
                violations.push(format!("{a} \\/ {b}"));
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("300 disjunctions, {provable} provable, 0 violations"))
    } else {
        Err(format!("neither disjunct provable: {}", violations.join("; ")))
    }
}

fn forcing_preservation() -> Outcome {
    let models: Vec<Model> = enumerate_models(3, ["p", "q"]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let shape = FormulaShape { max_size: 5, ..FormulaShape::default() };
    let rules: Vec<RuleId> = RuleId::ALL.into_iter().filter(|r| !r.is_axiom()).collect();
    let (mut triples, mut premises_forced) = (0, 0);
    let mut per_rule = vec![0usize; rules.len()];
    while triples < 2000 {
        let s = random::sequent(&mut rng, &shape, 2);
        let k = rng.random_range(0..rules.len());
        let instances = applicable(rules[k], &s);
        let Some(instance) = instances.choose(&mut rng) else { continue };
        let premises = apply(instance, &s).map_err(|e| e.to_string())?;
        let m = models.choose(&mut rng).unwrap();
        let w = rng.random_range(0..m.len());
        triples += 1;
        per_rule[k] += 1;
        if premises.iter().all(|p| m.forces_sequent(w, p).unwrap()) {
            premises_forced += 1;
            if !m.forces_sequent(w, &s).unwrap() {
                return Err(format!("{instance} on {s} at {} in {m}", m.name(w)));
            }
        }
    }
    let unsampled: Vec<&str> = rules.iter().zip(&per_rule).filter(|(_, &n)| n == 0).map(|(r, _)| r.name()).collect();
    if !unsampled.is_empty() {
        return Err(format!("rules never sampled: {}", unsampled.join(", ")));
    }
    Ok(format!("{triples} triples over all {} rules, {premises_forced} with premises forced, 0 violations", rules.len()))
}

fn semantics_fixtures() -> Outcome {
    let (first, second) = interdefinability_fixtures();
    let at = |m: &Model, w: &str, a: &str| m.forces(m.index_of(w).unwrap(), &f(a)).unwrap();
    if at(&first, "a", "[]p") || !at(&first, "c", "[]p") || at(&second, "a", "<>p") || !at(&second, "c", "<>p") {
        return Err("interdefinability models do not reproduce".into());
    }
    // All corpus formulas at once, so shared subformulas are evaluated once per model.
    let all = shipped_corpus().into_iter().map(|e| e.formula).reduce(Formula::and).unwrap();
    let atoms: Vec<String> = all.atoms().iter().map(|p| p.to_string()).collect();
    let (mut models, mut checked) = (0usize, 0usize);
    for m in enumerate_models(3, &atoms) {
        models += 1;
        for (sub, truth) in m.subformula_truth(&all) {
            checked += 1;
            if let Some((x, y)) = m.leq().pairs().find(|&(x, y)| truth[x] && !truth[y]) {
                return Err(format!("{sub} holds at {} but not at {} in {m}", m.name(x), m.name(y)));
            }
        }
    }
    Ok(format!("interdefinability models reproduce; monotonicity on {models} models, {checked} truth sets"))
}

fn termination() -> Outcome {
    let options = ProveOptions { budget: Some(RUNAWAY) };
    let formulas = shipped_corpus().into_iter().map(|e| e.formula).chain(random_suite(500));
    let mut n = 0;
    for a in formulas {
        n += 1;
        match prove_with(&a, &options) {
            Ok(_) => {}
            Err(ProveError::BudgetExceeded(_)) => return Err(format!("budget fired on {a}")),
            Err(e) => return Err(format!("{a}: {e}")),
        }
    }
    let r = prove_sequent(&seq("[]a -> bot, []b -> bot => p"), &options).map_err(|e| e.to_string())?;
    if r.stats().blocking == 0 {
        return Err("loop example finished without blocking".into());
    }
    Ok(format!("{n} formulas finished; loop example blocked {} times", r.stats().blocking))
}

fn with_succedent(s: &Sequent, succedent: Succedent) -> Sequent {
    Sequent { antecedent: s.antecedent.clone(), succedent }
}

fn merge(a: &Sequent, b: &Sequent) -> Sequent {
    let mut out = a.clone();
    out.antecedent.extend(b.antecedent.iter().cloned());
    out.succedent.formulas.extend(b.succedent.formulas.iter().cloned());
    out.succedent.modal.extend(b.succedent.modal.iter().cloned());
    out.succedent.imp.extend(b.succedent.imp.iter().cloned());
    out
}

fn structural_operators() -> Outcome {
    let delta = seq("=> b, [c => d, [e => f], <g => h>], <t => [p => q]>, [m => n]");
    let sh = with_succedent(&delta, sharp(&delta.succedent)).to_string();
    let st = with_succedent(&delta, star(&delta.succedent)).to_string();
    if sh != "=> b, [c => d, [e => f]], [m => n]" || st != "=> [c => [e =>]], [m =>]" {
        return Err(format!("sharp gave `{sh}`, star gave `{st}`"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let shape = FormulaShape { max_size: 4, ..FormulaShape::default() };
    let mut chains = 0;
    for i in 0..1000 {
        let a = random::sequent(&mut rng, &shape, 2);
        let b = random::sequent(&mut rng, &shape, 2);
        let c = random::sequent(&mut rng, &shape, 2);
        let fail = |what: &str| Err(format!("{what} fails on sample {i}: {a} | {b} | {c}"));
        if !structurally_included(&a, &a) {
            return fail("inclusion reflexivity");
        }
        let (ab, abc) = (merge(&a, &b), merge(&merge(&a, &b), &c));
        for (x, y, z) in [(&a, &ab, &abc), (&a, &b, &c), (&b, &c, &a)] {
            if structurally_included(x, y) && structurally_included(y, z) {
                chains += 1;
                if !structurally_included(x, z) {
                    return fail("inclusion transitivity");
                }
            }
        }
        // Variants differing only in implication blocks are equivalent to `a`.
        let a1 = with_succedent(&a, Succedent { imp: b.succedent.imp.clone(), ..a.succedent.clone() });
        let a2 = with_succedent(&a, Succedent { imp: c.succedent.imp.clone(), ..a.succedent.clone() });
        if !block_equivalent(&a, &a) || !block_equivalent(&a, &a1) || !block_equivalent(&a1, &a2) {
            return fail("block-equivalence on variants");
        }
        for (x, y) in [(&a, &b), (&a1, &a), (&b, &c)] {
            if block_equivalent(x, y) != block_equivalent(y, x) {
                return fail("block-equivalence symmetry");
            }
        }
        for (x, y, z) in [(&a, &a1, &a2), (&a, &b, &c), (&a1, &a, &b)] {
            if block_equivalent(x, y) && block_equivalent(y, z) && !block_equivalent(x, z) {
                return fail("block-equivalence transitivity");
            }
        }
    }
    Ok(format!("worked example exact; 1000 random triples, {chains} inclusion chains, 0 violations"))
}

fn hilbert_checker() -> Outcome {
    let load = |name: &str| hilbert_file::parse(&std::fs::read_to_string(data(name)).unwrap()).map_err(|e| e.to_string());
    let dia_bot = load("dia_bot.hd")?;
    check_derivation(&dia_bot).map_err(|e| format!("dia_bot.hd: {e}"))?;
    if dia_bot.conclusion() != Some(&f("<>bot -> bot")) {
        return Err("dia_bot.hd does not conclude <>bot -> bot".into());
    }
    let exercise = load("mp_exercise.hd")?;
    check_derivation(&exercise).map_err(|e| format!("mp_exercise.hd: {e}"))?;
    match check_derivation(&load("mp_exercise_corrupted.hd")?) {
        Err(e) if e.step == 3 => {}
        Err(e) => return Err(format!("corrupted file failed at the wrong step: {e}")),
        Ok(()) => return Err("corrupted file was accepted".into()),
    }
    Ok("both derivations check; corrupted file rejected at step 3".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden verdicts", golden_verdicts),
        ("countermodel fidelity", countermodel_fidelity),
        ("oracle agreement", oracle_agreement),
        ("disjunction property", disjunction_property),
        ("forcing preservation", forcing_preservation),
        ("semantics fixtures and monotonicity", semantics_fixtures),
        ("termination", termination),
        ("structural operators", structural_operators),
        ("hilbert checker", hilbert_checker),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
