//! Truncated univariate power series with rational coefficients.
//!
//! Every characteristic class in this crate is a multiplicative sequence
//! `Π f(ℓ_i)^{m_i}` for a fixed one-variable series `f`, so the only series
//! machinery needed is products, inverses, integer powers and substitution
//! of a Chow class for the variable.

use num::{BigInt, BigRational, One, Zero};

use super::ring::ChowClass;

/// Coefficients `a_0, a_1, ..., a_n` of a series truncated after degree `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series(pub Vec<BigRational>);

impl Series {
    pub fn one(len: usize) -> Self {
        let mut c = vec![BigRational::zero(); len.max(1)];
        c[0] = BigRational::one();
        Series(c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.0.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }

    /// Multiplicative inverse; panics if the constant term vanishes.
    pub fn inverse(&self) -> Series {
        let n = self.len();
        assert!(!self.0[0].is_zero(), "series with zero constant term is not invertible");
        let inv0 = self.0[0].recip();
        let mut out = vec![BigRational::zero(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.0[j] * &out[k - j];
            }
            out[k] = -acc * &inv0;
        }
        Series(out)
    }

    pub fn pow(&self, m: i64) -> Series {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = Series::one(self.len());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// `exp(x)`.
    pub fn exp(len: usize) -> Series {
        let mut c = Vec::with_capacity(len);
        let mut fact = BigInt::one();
        for k in 0..len {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            c.push(BigRational::new(BigInt::one(), fact.clone()));
        }
        Series(c)
    }

    /// `1 + x`.
    pub fn one_plus_x(len: usize) -> Series {
        let mut s = Series::one(len);
        if len > 1 {
            s.0[1] = BigRational::one();
        }
        s
    }

    /// The Todd series `x / (1 - e^{-x})`.
    pub fn todd(len: usize) -> Series {
        // (1 - e^{-x}) / x = Σ_k (-1)^k x^k / (k+1)!
        let mut c = Vec::with_capacity(len);
        let mut fact = BigInt::one();
        for k in 0..len {
            fact *= BigInt::from(k + 1);
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            c.push(BigRational::new(sign, fact.clone()));
        }
        Series(c).inverse()
    }

    /// Evaluates the series at a Chow class by Horner's rule.
    pub fn substitute(&self, x: &ChowClass) -> ChowClass {
        let ring = x.ring().clone();
        let mut acc = ChowClass::zero(&ring);
        for c in self.0.iter().rev() {
            acc = &acc * x;
            if !c.is_zero() {
                acc = &acc + &ChowClass::constant(&ring, c.clone());
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn todd_coefficients() {
        let t = Series::todd(5);
        assert_eq!(t.0, vec![q(1, 1), q(1, 2), q(1, 12), q(0, 1), q(-1, 720)]);
    }

    #[test]
    fn inverse_and_negative_power() {
        let s = Series::one_plus_x(6);
        let inv = s.pow(-1);
        assert_eq!(inv.0, vec![q(1, 1), q(-1, 1), q(1, 1), q(-1, 1), q(1, 1), q(-1, 1)]);
        assert_eq!(s.pow(3).mul(&s.pow(-3)), Series::one(6));
    }
}
