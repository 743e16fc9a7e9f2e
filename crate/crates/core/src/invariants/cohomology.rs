//! Line-bundle cohomology on split projective towers, and `h⁰` of zero loci
//! through their Koszul resolutions.
//!
//! On a product of projective spaces, Künneth and Bott give every line
//! bundle cohomology in at most one degree. On `P(B)` (lines in a split `B`
//! of rank `r`) the pushforward of `O(k) ⊗ π*A` is
//!
//! * `Sym^k(B^∨) ⊗ A` in degree 0 when `k ≥ 0`,
//! * `Sym^{-k-r}(B) ⊗ det B ⊗ A` in degree `r-1` when `k ≤ -r`,
//! * zero otherwise,
//!
//! and both are split again, so Leray reduces a tower to the base.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};

use super::InvariantError;
use crate::chowcore::Symbol;
use crate::tower::{Space, SplitBundle};

/// Nonzero cohomology dimensions by degree.
pub type Cohomology = BTreeMap<u32, BigInt>;

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `H^*(P^n, O(d))`.
pub fn projective_space_cohomology(n: u32, d: i64) -> Option<(u32, BigInt)> {
    let n64 = n as i64;
    if d >= 0 {
        Some((0, binomial((n64 + d) as u64, n as u64)))
    } else if d < -n64 {
        Some((n, binomial((-d - 1) as u64, n as u64)))
    } else {
        None
    }
}

/// All vectors of `len` non-negative integers summing to `total`.
fn compositions(total: u64, len: usize) -> Vec<Vec<u64>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if len == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Shape of an ambient tower: base dimensions and the projectivized bundles.
#[derive(Debug, Clone)]
pub struct TowerShape {
    pub base: Vec<u32>,
    pub bundles: Vec<SplitBundle>,
}

impl TowerShape {
    pub fn of(space: &Space) -> Self {
        TowerShape {
            base: space.base_dims().to_vec(),
            bundles: space.proj_bundles().into_iter().cloned().collect(),
        }
    }

    pub fn num_generators(&self) -> usize {
        self.base.len() + self.bundles.len()
    }

    /// `H^*(ambient, O(degrees))`.
    pub fn line_cohomology(&self, degrees: &[i64]) -> Cohomology {
        assert_eq!(degrees.len(), self.num_generators(), "degree vector arity");
        let mut out = Cohomology::new();
        self.accumulate(degrees, 0, &BigInt::one(), &mut out);
        out
    }

    fn accumulate(&self, deg: &[i64], shift: u32, mult: &BigInt, out: &mut Cohomology) {
        let nbase = self.base.len();
        let level = deg.len();
        if level == nbase {
            let mut degree = shift;
            let mut dim = mult.clone();
            for (&n, &d) in self.base.iter().zip(deg) {
                match projective_space_cohomology(n, d) {
                    Some((q, h)) => {
                        degree += q;
                        dim *= h;
                    }
                    None => return,
                }
            }
            *out.entry(degree).or_insert_with(BigInt::zero) += dim;
            return;
        }
        let bundle = &self.bundles[level - 1 - nbase];
        let r = bundle.rank();
        let k = deg[level - 1];
        let below = &deg[..level - 1];
        if k >= 0 {
            for a in compositions(k as u64, r) {
                let mut v = below.to_vec();
                for (ai, b) in a.iter().zip(&bundle.summands) {
                    for (vj, bj) in v.iter_mut().zip(b) {
                        *vj -= *ai as i64 * bj;
                    }
                }
                self.accumulate(&v, shift, mult, out);
            }
        } else if k <= -(r as i64) {
            for a in compositions((-k - r as i64) as u64, r) {
                let mut v = below.to_vec();
                for (ai, b) in a.iter().zip(&bundle.summands) {
                    for (vj, bj) in v.iter_mut().zip(b) {
                        *vj += (*ai as i64 + 1) * bj;
                    }
                }
                self.accumulate(&v, shift + r as u32 - 1, mult, out);
            }
        }
    }

    /// `h⁰` of a split bundle on the ambient tower.
    pub fn h0_split(&self, bundle: &SplitBundle) -> BigInt {
        bundle
            .summands
            .iter()
            .map(|s| self.line_cohomology(s).get(&0).cloned().unwrap_or_default())
            .sum()
    }
}

/// Outcome of [`h0_via_koszul`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H0Result {
    pub value: BigInt,
    pub certified: bool,
    /// `E₁` contributions of the Koszul spectral sequence, by total degree.
    pub contributions: BTreeMap<i64, BigInt>,
}

impl H0Result {
    /// `Σ (-1)^t · contributions(t)`, the Euler characteristic seen by the resolution.
    pub fn koszul_euler_characteristic(&self) -> BigInt {
        self.contributions
            .iter()
            .map(|(t, v)| if t.rem_euclid(2) == 0 { v.clone() } else { -v.clone() })
            .sum()
    }
}

const KOSZUL_TERM_LIMIT: usize = 1 << 12;

/// `h⁰(s, O(L))` from the Koszul resolution of `O_s` in its ambient tower.
///
/// `H^q` of the `j`-th Koszul term `Λ^j N^∨ ⊗ L` lands in total degree
/// `q - j`. If total degrees `-1` and `1` receive nothing, no differential
/// can touch total degree 0 and `h⁰` is the sum found there (certified).
/// Otherwise the HRR value of `χ` is returned uncertified.
pub fn h0_via_koszul(space: &Space, line: &[i64]) -> Result<H0Result, InvariantError> {
    let n = space.num_generators();
    if line.len() != n {
        return Err(InvariantError::Arity { expected: n, found: line.len() });
    }
    let normal = &space.normal().summands;
    if normal.len() > 12 || (1usize << normal.len()) > KOSZUL_TERM_LIMIT {
        return Err(InvariantError::UnsupportedShape(format!(
            "Koszul complex with {} normal summands is too large",
            normal.len()
        )));
    }
    let shape = TowerShape::of(space);
    let mut contributions: BTreeMap<i64, BigInt> = BTreeMap::new();
    for mask in 0u32..(1u32 << normal.len()) {
        let j = mask.count_ones() as i64;
        let mut twist: Symbol = line.to_vec();
        for (i, s) in normal.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for (t, d) in twist.iter_mut().zip(s) {
                    *t -= d;
                }
            }
        }
        for (q, dim) in shape.line_cohomology(&twist) {
            if !dim.is_zero() {
                *contributions.entry(q as i64 - j).or_insert_with(BigInt::zero) += dim;
            }
        }
    }
    let quiet = |t: i64| contributions.get(&t).is_none_or(|v| v.is_zero());
    if quiet(-1) && quiet(1) {
        let value = contributions.get(&0).cloned().unwrap_or_default();
        Ok(H0Result { value, certified: true, contributions })
    } else {
        let value = super::chi(space, line)?;
        Ok(H0Result { value, certified: false, contributions })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::Preset;

    #[test]
    fn bott_on_p2() {
        assert_eq!(projective_space_cohomology(2, 2), Some((0, 6.into())));
        assert_eq!(projective_space_cohomology(2, -1), None);
        assert_eq!(projective_space_cohomology(2, -2), None);
        assert_eq!(projective_space_cohomology(2, -3), Some((2, 1.into())));
        assert_eq!(projective_space_cohomology(2, -4), Some((2, 3.into())));
    }

    #[test]
    fn monomial_counts_on_p2() {
        let p2 = Space::build_base(&[2]).unwrap();
        for d in 0..8i64 {
            let r = h0_via_koszul(&p2, &[d]).unwrap();
            assert!(r.certified);
            assert_eq!(r.value, binomial(d as u64 + 2, 2));
        }
    }

    #[test]
    fn trivial_projectivization_matches_product() {
        let pe = TowerShape::of(&Preset::PE.build());
        let p222 = TowerShape::of(&Space::build_base(&[2, 2, 2]).unwrap());
        for deg in [[1, 2, 1], [0, -3, 2], [2, 0, -4], [-3, -3, -3], [1, 1, -1]] {
            assert_eq!(pe.line_cohomology(&deg), p222.line_cohomology(&deg), "{deg:?}");
        }
    }

    #[test]
    fn relative_duality_on_pfdual() {
        // O_ξ(-3) on P(F^∨): R¹π_* = F^∨ ⊗ det F^∨ = O(-4,-2) ⊕ O(-2,-4); both
        // have vanishing cohomology on P²×P² because O(-2) on P² is acyclic.
        let pf = TowerShape::of(&Preset::PFdual.build());
        assert!(pf.line_cohomology(&[0, 0, -3]).is_empty());
        // O_ξ(-4) ⊗ O(-1,-1): R¹π_* = Sym²(F^∨) ⊗ det F^∨ ⊗ O(-1,-1)
        // = O(-7,-3) ⊕ O(-5,-5) ⊕ O(-3,-7), all in H⁴ of the base:
        // 15·1 + 6·6 + 1·15 = 66, shifted to degree 5.
        let c = pf.line_cohomology(&[-1, -1, -4]);
        assert_eq!(c, [(5, BigInt::from(66))].into_iter().collect());
        // π_* O_ξ(1) = F, twelve sections.
        assert_eq!(pf.line_cohomology(&[0, 0, 1]), [(0, BigInt::from(12))].into_iter().collect());
    }

    #[test]
    fn anticanonical_sections_of_y() {
        let y = Preset::Y.build();
        let r = h0_via_koszul(&y, &[1, 1, 1]).unwrap();
        assert!(r.certified);
        assert_eq!(r.value, BigInt::from(27));
        assert_eq!(r.contributions, [(0, BigInt::from(27))].into_iter().collect());
    }

    #[test]
    fn structure_sheaf_of_s() {
        let s = Preset::S.build();
        let r = h0_via_koszul(&s, &[0, 0, 0]).unwrap();
        assert!(r.certified);
        assert_eq!(r.value, BigInt::from(1));
    }

    #[test]
    fn uncertified_falls_back_to_chi() {
        // O(-2) on a line in P²: H¹(O_{P¹}(-2)) = 1 arrives in total degree 1.
        let line = Space::build_base(&[2]).unwrap().cut_zero_locus(&SplitBundle::new(vec![vec![1]])).unwrap();
        let r = h0_via_koszul(&line, &[-2]).unwrap();
        assert!(!r.certified);
        assert_eq!(r.value, BigInt::from(-1));
        assert_eq!(r.koszul_euler_characteristic(), BigInt::from(-1));
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(h0_via_koszul(&Preset::Y.build(), &[1, 1]), Err(InvariantError::Arity { .. })));
    }
}
