//! Rational points of products of projective spaces over `F_p`.

use super::field::projective_count;
use super::OracleError;

/// Default ceiling on the number of ambient points enumerated.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// `P^{n_1}(F_p) × … × P^{n_k}(F_p)` with random access by index.
///
/// Each factor's points are normalised so the first nonzero coordinate is 1;
/// a point is the concatenation of its factors' coordinates.
#[derive(Debug, Clone)]
pub struct ProductPoints {
    dims: Vec<u32>,
    factors: Vec<Vec<Vec<u32>>>,
    total: u64,
}

fn factor_points(n: u32, p: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    // Leading 1 at position `lead`, zeros before it, anything after.
    for lead in 0..=n as usize {
        let free = n as usize - lead;
        let count = (p as u64).pow(free as u32);
        for mut code in 0..count {
            let mut v = vec![0u32; n as usize + 1];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = (code % p as u64) as u32;
                code /= p as u64;
            }
            out.push(v);
        }
    }
    out
}

impl ProductPoints {
    pub fn new(dims: &[u32], p: u32, budget: u64) -> Result<Self, OracleError> {
        if !super::field::is_prime(p) {
            return Err(OracleError::NotPrime(p));
        }
        let mut total: u64 = 1;
        for &n in dims {
            total = total.saturating_mul(projective_count(n as i64, p));
        }
        if total > budget {
            return Err(OracleError::BudgetExceeded { points: total, budget });
        }
        let factors = dims.iter().map(|&n| factor_points(n, p)).collect();
        Ok(ProductPoints { dims: dims.to_vec(), factors, total })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// The `index`-th point, flattened.
    pub fn get(&self, mut index: u64) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.dims.iter().map(|&n| n as usize + 1).sum());
        for f in &self.factors {
            let k = f.len() as u64;
            out.extend_from_slice(&f[(index % k) as usize]);
            index /= k;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.total).map(|i| self.get(i))
    }
}

/// Streams every point of `P^{dims}(F_p)` once, subject to a budget.
pub fn enumerate_points(dims: &[u32], p: u32, budget: u64) -> Result<impl Iterator<Item = Vec<u32>>, OracleError> {
    let pts = ProductPoints::new(dims, p, budget)?;
    Ok((0..pts.len()).map(move |i| pts.get(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        assert_eq!(enumerate_points(&[2], 2, DEFAULT_BUDGET).unwrap().count(), 7);
        assert_eq!(enumerate_points(&[2, 2], 2, DEFAULT_BUDGET).unwrap().count(), 49);
        assert_eq!(enumerate_points(&[2, 2, 2], 3, DEFAULT_BUDGET).unwrap().count(), 2197);
        assert!(matches!(enumerate_points(&[2, 2], 3, 100), Err(OracleError::BudgetExceeded { points: 169, .. })));
        assert!(matches!(enumerate_points(&[2], 4, DEFAULT_BUDGET), Err(OracleError::NotPrime(4))));
    }

    #[test]
    fn points_are_distinct_and_normalised() {
        let pts: Vec<_> = enumerate_points(&[1, 2], 5, DEFAULT_BUDGET).unwrap().collect();
        let set: HashSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), pts.len());
        for pt in &pts {
            for block in [&pt[..2], &pt[2..]] {
                assert_eq!(block.iter().find(|&&c| c != 0), Some(&1));
            }
        }
    }
}
