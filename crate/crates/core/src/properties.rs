//! Seeded randomized checks of the algebraic identities the engine relies
//! on: ring axioms in tower Chow rings, additivity and multiplicativity of
//! `ch`, the Whitney formula, the λ-ring sum rule, and integrality of HRR
//! Euler characteristics.

use std::sync::Arc;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chowcore::{to_integer, ChowClass, ChowPresentation, KClass};
use crate::invariants::hrr;
use crate::tower::{Space, SplitBundle};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub seed: u64,
    pub cases: usize,
    /// Individual identities checked across all cases.
    pub checks: usize,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A random tower of total dimension at most 5: one or two projective
/// factors, optionally a projectivized rank-2 bundle, optionally a zero locus.
pub fn random_space(rng: &mut impl Rng) -> Space {
    let k = rng.random_range(1..=2);
    let dims: Vec<u32> = (0..k).map(|_| rng.random_range(1..=2)).collect();
    let mut space = Space::build_base(&dims).expect("valid base");
    if rng.random_bool(0.5) {
        let n = space.num_generators();
        let summands = (0..2).map(|_| (0..n).map(|_| rng.random_range(-2..=2)).collect()).collect();
        space = space.add_proj_bundle(&SplitBundle::new(summands)).expect("valid bundle");
    }
    if space.dim() >= 2 && rng.random_bool(0.4) {
        let n = space.num_generators();
        let summand = (0..n).map(|_| rng.random_range(0..=2)).collect();
        space = space.cut_zero_locus(&SplitBundle::new(vec![summand])).expect("valid zero locus");
    }
    space
}

pub fn random_kclass(ring: &Arc<ChowPresentation>, rng: &mut impl Rng) -> KClass {
    let n = ring.num_generators();
    let terms: Vec<(Vec<i64>, BigInt)> = (0..rng.random_range(1..=3))
        .map(|_| {
            let s = (0..n).map(|_| rng.random_range(-3..=3)).collect();
            let m: i64 = *[-2, -1, 1, 2, 3].get(rng.random_range(0..5)).unwrap();
            (s, BigInt::from(m))
        })
        .collect();
    KClass::from_terms(ring, terms)
}

pub fn random_chow(ring: &Arc<ChowPresentation>, rng: &mut impl Rng) -> ChowClass {
    let n = ring.num_generators();
    let mut out = ChowClass::constant(ring, BigRational::from_integer(rng.random_range(-3..=3).into()));
    for _ in 0..3 {
        let mut term = ChowClass::constant(ring, BigRational::new(rng.random_range(-4..=4).into(), rng.random_range(1..=3).into()));
        for _ in 0..rng.random_range(1..=2) {
            term = &term * &ChowClass::generator(ring, rng.random_range(0..n));
        }
        out = &out + &term;
    }
    out
}

/// Runs `cases` random cases from `ChaCha8Rng(seed)`.
pub fn run_properties(cases: usize, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut checks = 0;
    for case in 0..cases {
        let space = random_space(&mut rng);
        let ring = space.ring().clone();
        let mut check = |ok: bool, what: &str| {
            checks += 1;
            if !ok {
                failures.push(format!("case {case} on {space}: {what}"));
            }
        };

        let (x, y, z) = (random_chow(&ring, &mut rng), random_chow(&ring, &mut rng), random_chow(&ring, &mut rng));
        check(&(&x * &y) * &z == &x * &(&y * &z), "associativity");
        check(&x * &y == &y * &x, "commutativity");
        check(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), "distributivity");

        let a = random_kclass(&ring, &mut rng);
        let b = random_kclass(&ring, &mut rng);
        let sum = a.add(&b).expect("same ring");
        let prod = a.tensor(&b).expect("same ring");
        check(sum.chern_character() == &a.chern_character() + &b.chern_character(), "ch additive");
        check(prod.chern_character() == &a.chern_character() * &b.chern_character(), "ch multiplicative");
        check(sum.total_chern() == &a.total_chern() * &b.total_chern(), "Whitney formula");
        check(sum.todd() == &a.todd() * &b.todd(), "todd multiplicative");

        let l = |c: &KClass, k| c.exterior_power(k).expect("k ≥ 0");
        let lhs = l(&sum, 2);
        let rhs = l(&a, 2).add(&l(&a, 1).tensor(&l(&b, 1)).unwrap()).unwrap().add(&l(&b, 2)).unwrap();
        check(lhs == rhs, "λ² of a sum");
        let r = a.rank();
        check(l(&a, 2).rank() == &r * (&r - BigInt::from(1)) / BigInt::from(2), "rank of λ²");
        check(l(&a, 1) == a, "λ¹ is the identity");

        let value = hrr(&space, &a);
        check(to_integer(&value).is_some(), "HRR Euler characteristic is an integer");
        let dual = hrr(&space, &prod.dual());
        check(to_integer(&dual).is_some(), "HRR of a dual tensor product is an integer");
    }
    PropertyReport { seed, cases, checks, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let a = run_properties(40, 7);
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(a, run_properties(40, 7));
        assert_eq!(a.checks, 40 * 12);
    }
}
