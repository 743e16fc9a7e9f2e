//! The line-bundle-generated part of K-theory.
//!
//! A `KClass` is a finite integer combination of line-bundle symbols. A
//! symbol is the degree vector of its first Chern class over the generators
//! of a Chow presentation. Everything the towers need (tangent bundles,
//! normal bundles, exterior powers of cotangent bundles) lives here because
//! every bundle in sight is split.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::ring::{ChowClass, ChowPresentation};
use super::series::Series;
use super::ChowError;

pub type Symbol = Vec<i64>;

#[derive(Debug, Clone)]
pub struct KClass {
    ring: Arc<ChowPresentation>,
    terms: BTreeMap<Symbol, BigInt>,
}

impl PartialEq for KClass {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for KClass {}

impl KClass {
    pub fn zero(ring: &Arc<ChowPresentation>) -> Self {
        KClass { ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// `n·[O]`.
    pub fn trivial(ring: &Arc<ChowPresentation>, n: i64) -> Self {
        Self::line(ring, vec![0; ring.num_generators()]).scale(n)
    }

    pub fn line(ring: &Arc<ChowPresentation>, degrees: Symbol) -> Self {
        assert_eq!(degrees.len(), ring.num_generators(), "line bundle arity");
        let mut terms = BTreeMap::new();
        terms.insert(degrees, BigInt::one());
        KClass { ring: ring.clone(), terms }
    }

    pub fn from_terms(ring: &Arc<ChowPresentation>, terms: impl IntoIterator<Item = (Symbol, BigInt)>) -> Self {
        let mut out = Self::zero(ring);
        for (s, m) in terms {
            assert_eq!(s.len(), ring.num_generators(), "line bundle arity");
            out.add_term(s, m);
        }
        out
    }

    fn add_term(&mut self, s: Symbol, m: BigInt) {
        if m.is_zero() {
            return;
        }
        let slot = self.terms.entry(s.clone()).or_insert_with(BigInt::zero);
        *slot += m;
        if slot.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn ring(&self) -> &Arc<ChowPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Symbol, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ring(&self, other: &Self) -> Result<(), ChowError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(ChowError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ChowError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (s, m) in &other.terms {
            out.add_term(s.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ChowError> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut out = Self::zero(&self.ring);
        for (s, m) in &self.terms {
            out.add_term(s.clone(), m * BigInt::from(n));
        }
        out
    }

    /// Virtual rank: the sum of multiplicities.
    pub fn rank(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Degree vector of the determinant line bundle.
    pub fn det(&self) -> Symbol {
        let mut d = vec![0i64; self.ring.num_generators()];
        for (s, m) in &self.terms {
            let m = m.to_i64().expect("multiplicity fits in i64");
            for (di, si) in d.iter_mut().zip(s) {
                *di += m * si;
            }
        }
        d
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, ChowError> {
        self.same_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (sa, ma) in &self.terms {
            for (sb, mb) in &other.terms {
                let s = sa.iter().zip(sb).map(|(a, b)| a + b).collect();
                out.add_term(s, ma * mb);
            }
        }
        Ok(out)
    }

    pub fn dual(&self) -> Self {
        let terms = self.terms.iter().map(|(s, m)| (s.iter().map(|d| -d).collect(), m.clone()));
        Self::from_terms(&self.ring, terms)
    }

    /// `λ^p` via `λ_t([L]) = 1 + t[L]` extended multiplicatively to virtual
    /// classes, `λ_t(x - y) = λ_t(x) λ_t(y)^{-1}`.
    pub fn exterior_power(&self, p: i64) -> Result<Self, ChowError> {
        if p < 0 {
            return Err(ChowError::NegativeExteriorPower(p));
        }
        let p = p as usize;
        let n = self.ring.num_generators();
        let mut series: Vec<KClass> = (0..=p).map(|_| Self::zero(&self.ring)).collect();
        series[0] = Self::trivial(&self.ring, 1);
        for (sym, mult) in &self.terms {
            // (1 + tL)^m = Σ_k binom(m, k) t^k L^k, valid for negative m too.
            let m = mult.clone();
            let mut factor: Vec<KClass> = Vec::with_capacity(p + 1);
            let mut binom = BigInt::one();
            for k in 0..=p {
                if k > 0 {
                    binom = binom * (&m - BigInt::from(k - 1)) / BigInt::from(k);
                }
                let power: Symbol = sym.iter().map(|d| d * k as i64).collect();
                let mut term = Self::zero(&self.ring);
                term.add_term(power, binom.clone());
                factor.push(term);
            }
            let mut next: Vec<KClass> = (0..=p).map(|_| Self::zero(&self.ring)).collect();
            for i in 0..=p {
                if series[i].is_zero() {
                    continue;
                }
                for j in 0..=(p - i) {
                    if factor[j].is_zero() {
                        continue;
                    }
                    let prod = series[i].tensor(&factor[j])?;
                    next[i + j] = next[i + j].add(&prod)?;
                }
            }
            series = next;
        }
        debug_assert!(series.iter().all(|c| c.ring.num_generators() == n));
        Ok(series.swap_remove(p))
    }

    /// `Σ m_L · e^{c₁(L)}`.
    pub fn chern_character(&self) -> ChowClass {
        let len = self.ring.total_dimension() as usize + 1;
        let exp = Series::exp(len);
        let mut out = ChowClass::zero(&self.ring);
        for (s, m) in &self.terms {
            let l = ChowClass::linear(&self.ring, s);
            let e = exp.substitute(&l).scale(&BigRational::from_integer(m.clone()));
            out = &out + &e;
        }
        out
    }

    /// `Π td(L)^{m_L}` with `td(L) = ℓ / (1 - e^{-ℓ})`.
    pub fn todd(&self) -> ChowClass {
        self.multiplicative(&Series::todd(self.ring.total_dimension() as usize + 1))
    }

    /// `Π (1 + ℓ)^{m_L}`.
    pub fn total_chern(&self) -> ChowClass {
        self.multiplicative(&Series::one_plus_x(self.ring.total_dimension() as usize + 1))
    }

    fn multiplicative(&self, f: &Series) -> ChowClass {
        let mut out = ChowClass::one(&self.ring);
        for (s, m) in &self.terms {
            if s.iter().all(|&d| d == 0) {
                continue;
            }
            let m = m.to_i64().expect("multiplicity fits in i64");
            let l = ChowClass::linear(&self.ring, s);
            out = &out * &f.pow(m).substitute(&l);
        }
        out
    }

    /// Pulls the class back along a tower projection: the ring must extend
    /// this class's ring by appended generators.
    pub fn pullback(&self, ring: &Arc<ChowPresentation>) -> Self {
        let n = ring.num_generators();
        assert!(n >= self.ring.num_generators());
        let terms = self.terms.iter().map(|(s, m)| {
            let mut s = s.clone();
            s.resize(n, 0);
            (s, m.clone())
        });
        Self::from_terms(ring, terms)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, m)) in self.terms.iter().enumerate() {
            let neg = m.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mag = m.abs();
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            let degs: Vec<String> = s.iter().map(|d| d.to_string()).collect();
            write!(f, "[O({})]", degs.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(dims: &[u32]) -> Arc<ChowPresentation> {
        Arc::new(ChowPresentation::product(dims).unwrap())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn tensor_and_dual_of_lines() {
        let r = ring(&[2, 2]);
        let a = KClass::line(&r, vec![1, 0]);
        let b = KClass::line(&r, vec![2, -1]);
        assert_eq!(a.tensor(&b).unwrap(), KClass::line(&r, vec![3, -1]));
        let f = KClass::line(&r, vec![2, 0]).add(&KClass::line(&r, vec![0, 2])).unwrap();
        let fdual = KClass::line(&r, vec![-2, 0]).add(&KClass::line(&r, vec![0, -2])).unwrap();
        assert_eq!(f.dual(), fdual);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = KClass::line(&ring(&[2]), vec![1]);
        let b = KClass::line(&ring(&[3]), vec![1]);
        assert_eq!(a.tensor(&b), Err(ChowError::RingMismatch));
    }

    #[test]
    fn exterior_powers_by_hand() {
        let r = ring(&[2, 2]);
        let x = KClass::line(&r, vec![1, 0]).add(&KClass::line(&r, vec![0, 3])).unwrap();
        assert_eq!(x.exterior_power(2).unwrap(), KClass::line(&r, vec![1, 3]));
        assert_eq!(x.exterior_power(1).unwrap(), x);
        assert_eq!(x.exterior_power(0).unwrap(), KClass::trivial(&r, 1));
        assert_eq!(x.exterior_power(3).unwrap(), KClass::zero(&r));
        assert_eq!(x.exterior_power(-1), Err(ChowError::NegativeExteriorPower(-1)));
    }

    #[test]
    fn exterior_square_of_p2_tangent() {
        // λ_t(3[O(1)]) λ_t([O])^{-1} = (1 + 3tL + 3t²L² + ...)(1 - t + t² - ...),
        // whose t² coefficient is 3L² - 3L + 1.
        let r = ring(&[2]);
        let t = KClass::line(&r, vec![1]).scale(3).sub(&KClass::trivial(&r, 1)).unwrap();
        let l2 = t.exterior_power(2).unwrap();
        let expected = KClass::from_terms(&r, [(vec![2], 3.into()), (vec![1], (-3).into()), (vec![0], 1.into())]);
        assert_eq!(l2, expected);
        assert_eq!(l2.rank(), BigInt::from(1));
        // Λ²T_{P²} = O(3): same Chern character modulo h³.
        assert_eq!(l2.chern_character(), KClass::line(&r, vec![3]).chern_character());
    }

    #[test]
    fn chern_character_of_line_on_p2() {
        let r = ring(&[2]);
        let ch = KClass::line(&r, vec![5]).chern_character();
        let h = ChowClass::generator(&r, 0);
        let expected = &(&ChowClass::one(&r) + &h.scale(&q(5, 1))) + &h.pow(2).scale(&q(25, 2));
        assert_eq!(ch, expected);
    }

    #[test]
    fn p2_tangent_todd_and_euler() {
        let r = ring(&[2]);
        let t = KClass::line(&r, vec![1]).scale(3).sub(&KClass::trivial(&r, 1)).unwrap();
        assert_eq!(t.todd().integrate(), q(1, 1));
        assert_eq!(t.total_chern().homogeneous_part(2).integrate(), q(3, 1));
    }
}
