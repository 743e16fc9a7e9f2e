//! Truncated quotient Chow rings of split projective towers.
//!
//! A presentation is a list of codimension-one generators. Hyperplane
//! generators come from the factors of the base product of projective spaces
//! and satisfy `h^{n+1} = 0`. Relative generators come from projectivized
//! split bundles `P(B)` (lines in `B`, `ξ = c₁(O(1))`) and satisfy
//!
//! ```text
//! ξ^r + c₁(B) ξ^{r-1} + ... + c_r(B) = 0
//! ```
//!
//! with `c_i(B)` expressed in the earlier generators. Normal-form monomials
//! have `h_i`-exponent at most `n_i` and `ξ_j`-exponent below `r_j`, so the
//! unique monomial of top degree is `h₁^{n₁}···ξ_m^{r_m-1}` and integration
//! reads off its coefficient.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::ChowError;

pub type Exponent = Vec<u32>;
pub type Terms = BTreeMap<Exponent, BigRational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Hyperplane class of a `P^dim` factor: `h^{dim+1} = 0`.
    Hyperplane { dim: u32 },
    /// Relative hyperplane class of `P(B)` for a rank-`rank` split bundle.
    /// `reduction` is the polynomial that `ξ^rank` equals, in normal form.
    Relative { rank: u32, reduction: Vec<(Exponent, BigRational)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
}

impl Generator {
    /// Smallest exponent that is reducible.
    fn bound(&self) -> u32 {
        match &self.kind {
            GeneratorKind::Hyperplane { dim } => dim + 1,
            GeneratorKind::Relative { rank, .. } => *rank,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowPresentation {
    generators: Vec<Generator>,
    total_dimension: u32,
}

impl ChowPresentation {
    /// Chow ring of `P^{n_1} × ... × P^{n_k}` with generators `h1..hk`.
    pub fn product(dims: &[u32]) -> Result<Self, ChowError> {
        if dims.is_empty() {
            return Err(ChowError::EmptyBase);
        }
        if dims.contains(&0) {
            return Err(ChowError::ZeroDimensionalFactor);
        }
        let generators = dims
            .iter()
            .enumerate()
            .map(|(i, &dim)| Generator {
                name: format!("h{}", i + 1),
                kind: GeneratorKind::Hyperplane { dim },
            })
            .collect();
        Ok(ChowPresentation { generators, total_dimension: dims.iter().sum() })
    }

    /// Presentation of `P(B)` over this ring, `B = ⊕ O(b_i)` given by first
    /// Chern class vectors over the current generators.
    pub fn with_proj_bundle(self: &Arc<Self>, summands: &[Vec<i64>]) -> Result<Self, ChowError> {
        if summands.is_empty() {
            return Err(ChowError::RankZero);
        }
        let n = self.num_generators();
        for s in summands {
            if s.len() != n {
                return Err(ChowError::Arity { expected: n, found: s.len() });
            }
        }
        // c(B) = Π (1 + b_i), computed in this ring.
        let mut total = ChowClass::one(self);
        for s in summands {
            total = &total * &(&ChowClass::one(self) + &ChowClass::linear(self, s));
        }
        let rank = summands.len() as u32;
        let mut reduction = Vec::new();
        for i in 1..=rank {
            let ci = total.homogeneous_part(i);
            for (exp, coeff) in ci.terms() {
                let mut e = exp.clone();
                e.push(rank - i);
                reduction.push((e, -coeff.clone()));
            }
        }
        let mut generators: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                kind: match &g.kind {
                    GeneratorKind::Hyperplane { dim } => GeneratorKind::Hyperplane { dim: *dim },
                    GeneratorKind::Relative { rank, reduction } => GeneratorKind::Relative {
                        rank: *rank,
                        reduction: reduction
                            .iter()
                            .map(|(e, c)| {
                                let mut e = e.clone();
                                e.push(0);
                                (e, c.clone())
                            })
                            .collect(),
                    },
                },
            })
            .collect();
        let relative_count = generators
            .iter()
            .filter(|g| matches!(g.kind, GeneratorKind::Relative { .. }))
            .count();
        let name = if relative_count == 0 { "xi".to_string() } else { format!("xi{}", relative_count + 1) };
        generators.push(Generator { name, kind: GeneratorKind::Relative { rank, reduction } });
        Ok(ChowPresentation { generators, total_dimension: self.total_dimension + rank - 1 })
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn total_dimension(&self) -> u32 {
        self.total_dimension
    }

    /// Exponent vector of the point class.
    pub fn fundamental_monomial(&self) -> Exponent {
        self.generators.iter().map(|g| g.bound() - 1).collect()
    }

    /// Reduces a raw term map modulo the relations and drops everything above
    /// the total dimension.
    pub fn normal_form(&self, raw: Terms) -> Terms {
        let mut out = Terms::new();
        let mut work: Vec<(Exponent, BigRational)> = raw.into_iter().collect();
        while let Some((exp, coeff)) = work.pop() {
            if coeff.is_zero() {
                continue;
            }
            debug_assert_eq!(exp.len(), self.generators.len());
            let degree: u32 = exp.iter().sum();
            if degree > self.total_dimension {
                continue;
            }
            // The last reducible generator is rewritten first; its reduction
            // only involves earlier generators and lower powers of itself.
            let mut dead = false;
            let mut reducible = None;
            for (i, g) in self.generators.iter().enumerate() {
                if exp[i] >= g.bound() {
                    match g.kind {
                        GeneratorKind::Hyperplane { .. } => {
                            dead = true;
                            break;
                        }
                        GeneratorKind::Relative { .. } => reducible = Some(i),
                    }
                }
            }
            if dead {
                continue;
            }
            match reducible {
                None => {
                    let slot = out.entry(exp).or_insert_with(BigRational::zero);
                    *slot += coeff;
                }
                Some(i) => {
                    let GeneratorKind::Relative { rank, reduction } = &self.generators[i].kind else {
                        unreachable!()
                    };
                    let mut base = exp.clone();
                    base[i] -= rank;
                    for (rexp, rcoeff) in reduction {
                        let e: Exponent = base.iter().zip(rexp).map(|(a, b)| a + b).collect();
                        work.push((e, &coeff * rcoeff));
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Degree map: the coefficient of the fundamental monomial.
    pub fn integrate_terms(&self, terms: &Terms) -> BigRational {
        terms.get(&self.fundamental_monomial()).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// An element of a Chow presentation, always stored in normal form.
#[derive(Debug, Clone)]
pub struct ChowClass {
    ring: Arc<ChowPresentation>,
    terms: Terms,
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for ChowClass {}

impl ChowClass {
    pub fn zero(ring: &Arc<ChowPresentation>) -> Self {
        ChowClass { ring: ring.clone(), terms: Terms::new() }
    }

    pub fn one(ring: &Arc<ChowPresentation>) -> Self {
        Self::constant(ring, BigRational::one())
    }

    pub fn constant(ring: &Arc<ChowPresentation>, c: BigRational) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            terms.insert(vec![0; ring.num_generators()], c);
        }
        ChowClass { ring: ring.clone(), terms }
    }

    pub fn generator(ring: &Arc<ChowPresentation>, index: usize) -> Self {
        let mut e = vec![0; ring.num_generators()];
        e[index] = 1;
        Self::from_terms(ring, [(e, BigRational::one())].into_iter().collect())
    }

    /// The first Chern class `Σ d_i g_i` of the line bundle with degree vector `d`.
    pub fn linear(ring: &Arc<ChowPresentation>, degrees: &[i64]) -> Self {
        assert_eq!(degrees.len(), ring.num_generators(), "degree vector arity");
        let mut terms = Terms::new();
        for (i, &d) in degrees.iter().enumerate() {
            if d != 0 {
                let mut e = vec![0; ring.num_generators()];
                e[i] = 1;
                terms.insert(e, BigRational::from_integer(d.into()));
            }
        }
        Self::from_terms(ring, terms)
    }

    pub fn monomial(ring: &Arc<ChowPresentation>, exp: Exponent, coeff: BigRational) -> Self {
        Self::from_terms(ring, [(exp, coeff)].into_iter().collect())
    }

    /// Builds a class from arbitrary terms, reducing them to normal form.
    pub fn from_terms(ring: &Arc<ChowPresentation>, raw: Terms) -> Self {
        ChowClass { ring: ring.clone(), terms: ring.normal_form(raw) }
    }

    pub fn ring(&self) -> &Arc<ChowPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-reduces the stored terms. Stored classes are already reduced, so
    /// this is the identity; kept as the public face of the reduction.
    pub fn normal_form(&self) -> Self {
        Self::from_terms(&self.ring, self.terms.clone())
    }

    pub fn integrate(&self) -> BigRational {
        self.ring.integrate_terms(&self.terms)
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == degree)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        ChowClass { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        ChowClass { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "Chow classes from different rings"
        );
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ChowError> {
        if !(Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) {
            return Err(ChowError::RingMismatch);
        }
        Ok(self * other)
    }
}

impl Add for &ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: &ChowClass) -> ChowClass {
        self.check_ring(rhs);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            *terms.entry(e.clone()).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        ChowClass { ring: self.ring.clone(), terms }
    }
}

impl Neg for &ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        ChowClass { ring: self.ring.clone(), terms }
    }
}

impl Sub for &ChowClass {
    type Output = ChowClass;
    fn sub(self, rhs: &ChowClass) -> ChowClass {
        self + &(-rhs)
    }
}

impl Mul for &ChowClass {
    type Output = ChowClass;
    fn mul(self, rhs: &ChowClass) -> ChowClass {
        self.check_ring(rhs);
        let top = self.ring.total_dimension();
        let mut raw = Terms::new();
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &rhs.terms {
                if da + eb.iter().sum::<u32>() > top {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *raw.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        ChowClass::from_terms(&self.ring, raw)
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = &self.ring.generators()[i].name;
                    if k == 1 { name.clone() } else { format!("{name}^{k}") }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == BigRational::one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Exact conversion of an integral rational; `None` if a denominator remains.
pub fn to_integer(q: &BigRational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn pfdual() -> Arc<ChowPresentation> {
        let base = Arc::new(ChowPresentation::product(&[2, 2]).unwrap());
        Arc::new(base.with_proj_bundle(&[vec![-2, 0], vec![0, -2]]).unwrap())
    }

    #[test]
    fn hyperplane_nilpotency() {
        let p2 = Arc::new(ChowPresentation::product(&[2]).unwrap());
        let h = ChowClass::generator(&p2, 0);
        assert!(h.pow(3).is_zero());
        assert_eq!(h.pow(2).integrate(), q(1));
    }

    #[test]
    fn grothendieck_relation_for_fdual() {
        let ring = pfdual();
        let xi = ChowClass::generator(&ring, 2);
        let h1 = ChowClass::generator(&ring, 0);
        let h2 = ChowClass::generator(&ring, 1);
        let expected = &(&(&h1 + &h2).scale(&q(2)) * &xi) - &(&h1 * &h2).scale(&q(4));
        assert_eq!(xi.pow(2), expected);
        let point = &h1.pow(2) * &h2.pow(2);
        assert_eq!((&xi * &point).integrate(), q(1));
    }

    #[test]
    fn segre_numbers_of_fdual() {
        // ξ^{1+k} pushes forward to the degree-k part of 1/c(F^∨) =
        // Σ (2h1)^a (2h2)^b; for k = 4 only a = b = 2 survives: 16.
        let ring = pfdual();
        let xi = ChowClass::generator(&ring, 2);
        assert_eq!(xi.pow(5).integrate(), q(16));
    }

    #[test]
    fn empty_and_zero_factor_rejected() {
        assert_eq!(ChowPresentation::product(&[]), Err(ChowError::EmptyBase));
        assert_eq!(ChowPresentation::product(&[2, 0]), Err(ChowError::ZeroDimensionalFactor));
    }
}
