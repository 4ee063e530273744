//! Seeded random formulas and sequents for property checks and fuzzing.

use fik_core::{Formula, Sequent};
use rand::Rng;

/// Settings for [`formula`]: atom pool and an upper bound on node count.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    pub atoms: Vec<String>,
    pub max_size: usize,
}

impl Default for FormulaShape {
    fn default() -> Self {
        FormulaShape { atoms: vec!["p".into(), "q".into()], max_size: 9 }
    }
}

/// A random formula with at most `shape.max_size` nodes.
pub fn formula<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape) -> Formula {
    let size = rng.random_range(1..=shape.max_size.max(1));
    sized(rng, shape, size)
}

/// A random formula with exactly `size` nodes.
fn sized<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape, size: usize) -> Formula {
    if size <= 1 {
        return match rng.random_range(0..8) {
            0 => Formula::Bot,
            1 => Formula::Top,
            _ => Formula::atom(&shape.atoms[rng.random_range(0..shape.atoms.len())]),
        };
    }
    if size == 2 || rng.random_bool(0.3) {
        let a = sized(rng, shape, size - 1);
        return if rng.random_bool(0.5) { Formula::boxed(a) } else { Formula::dia(a) };
    }
    let left = rng.random_range(1..size - 1);
    let (a, b) = (sized(rng, shape, left), sized(rng, shape, size - 1 - left));
    match rng.random_range(0..3) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        _ => Formula::imp(a, b),
    }
}

/// A random sequent with blocks nested at most `depth` deep.
pub fn sequent<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape, depth: usize) -> Sequent {
    let formulas = |rng: &mut R| (0..rng.random_range(0..3)).map(|_| formula(rng, shape)).collect::<Vec<_>>();
    let ante = formulas(rng);
    let succ = formulas(rng);
    let mut s = Sequent::new(ante, succ);
    if depth > 0 {
        for _ in 0..rng.random_range(0..3) {
            s = s.with_modal(sequent(rng, shape, depth - 1));
        }
        for _ in 0..rng.random_range(0..2) {
            s = s.with_imp(sequent(rng, shape, depth - 1));
        }
    }
    s
}
