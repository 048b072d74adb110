//! Seeded random formulas of an exact node count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;

const ATOM_NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

/// A formula with exactly `size` nodes over the first `atoms` of
/// `p, q, r, ...`, reproducible from `seed`.
///
/// Each node picks uniformly among the constructors that can still reach the
/// requested size. `atoms` is clamped to `1..=8`.
pub fn random_formula(seed: u64, size: usize, atoms: usize) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_formula_from(&mut rng, size, atoms)
}

pub fn random_formula_from<R: Rng + ?Sized>(rng: &mut R, size: usize, atoms: usize) -> Formula {
    let atoms = atoms.clamp(1, ATOM_NAMES.len());
    build(rng, size.max(1), atoms)
}

fn build<R: Rng + ?Sized>(rng: &mut R, size: usize, atoms: usize) -> Formula {
    if size == 1 {
        return match rng.random_range(0..3) {
            0 => Formula::atom(ATOM_NAMES[rng.random_range(0..atoms)]),
            1 => Formula::top(),
            _ => Formula::bottom(),
        };
    }
    // Four unary constructors always fit; the five binary ones need room for
    // two children.
    let choices = if size >= 3 { 9 } else { 4 };
    let pick = rng.random_range(0..choices);
    if pick < 4 {
        let a = build(rng, size - 1, atoms);
        return match pick {
            0 => a.not(),
            1 => a.next(),
            2 => a.finally(),
            _ => a.globally(),
        };
    }
    let left = rng.random_range(1..size - 1);
    let a = build(rng, left, atoms);
    let b = build(rng, size - 1 - left, atoms);
    match pick {
        4 => a.and(b),
        5 => a.or(b),
        6 => a.implies(b),
        7 => a.iff(b),
        _ => a.until(b),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;
    use std::mem::discriminant;

    use super::*;

    #[test]
    fn exact_sizes() {
        for size in 1..20 {
            for seed in 0..20 {
                assert_eq!(random_formula(seed, size, 3).length(), size);
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(random_formula(7, 11, 3), random_formula(7, 11, 3));
    }

    #[test]
    fn every_constructor_appears() {
        let mut kinds = HashSet::new();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            for g in random_formula_from(&mut rng, 9, 3).subformulas() {
                kinds.insert(discriminant(g.kind()));
            }
        }
        assert_eq!(kinds.len(), 12);
    }
}
