//! Property tests over small towers: ring laws, degree integrality and the
//! agreement of HRR with Bott–Künneth cohomology on products of projective
//! spaces.

use chowkit_core::invariants::{binomial, chi, degree};
use chowkit_core::properties::{random_chow, random_kclass, random_space};
use chowkit_core::{ChowClass, Space};
use num::{BigInt, BigRational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chow_ring_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = random_space(&mut rng);
        let ring = space.ring().clone();
        let (x, y, z) = (random_chow(&ring, &mut rng), random_chow(&ring, &mut rng), random_chow(&ring, &mut rng));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &ChowClass::one(&ring), x.clone());
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn duality_is_an_involution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = random_space(&mut rng);
        let a = random_kclass(space.ring(), &mut rng);
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!(a.dual().rank(), a.rank());
    }

    /// χ(P^a × P^b, O(d, e)) = C(a+d, a)·C(b+e, b) for d, e ≥ −a, −b.
    #[test]
    fn hrr_matches_kunneth(a in 1u32..=3, b in 1u32..=3, d in -3i64..=4, e in -3i64..=4) {
        let space = Space::build_base(&[a, b]).unwrap();
        let expected = |n: u32, k: i64| -> BigInt {
            if k >= 0 {
                binomial((n as i64 + k) as u64, n as u64)
            } else if k < -(n as i64) {
                // Serre duality: h^n(O(k)) = h^0(O(−k−n−1)).
                let sign = if n.is_multiple_of(2) { 1 } else { -1 };
                BigInt::from(sign) * binomial((-k - 1) as u64, n as u64)
            } else {
                BigInt::from(0)
            }
        };
        prop_assert_eq!(chi(&space, &[d, e]).unwrap(), expected(a, d) * expected(b, e));
    }

    #[test]
    fn degrees_on_products_are_multinomial(a in 1u32..=3, b in 1u32..=3, d in 0i64..=3, e in 0i64..=3) {
        let space = Space::build_base(&[a, b]).unwrap();
        let n = (a + b) as i64;
        let expected = binomial(n as u64, a as u64) * BigInt::from(d).pow(a) * BigInt::from(e).pow(b);
        prop_assert_eq!(degree(&space, &[d, e]).unwrap(), expected);
        // Only top-degree classes integrate to something nonzero.
        let h = space.line_class(&[d, e]);
        prop_assert_eq!(space.integrate(&h.pow(n as u32 - 1)), BigRational::from_integer(0.into()));
    }
}
