//! Multihomogeneous forms over `F_p` and matrices of them.

use rand::Rng;
use serde::Serialize;

use super::field;
use super::OracleError;

/// A form on `P^{n_1} × … × P^{n_k}` of fixed multidegree. Exponent vectors
/// run over the concatenated homogeneous coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiForm {
    pub dims: Vec<u32>,
    pub degree: Vec<u32>,
    pub p: u32,
    pub terms: Vec<(Vec<u32>, u32)>,
}

/// Exponent vectors of `n+1` variables with total degree `d`.
fn exponents(n: u32, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponents(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All monomials of multidegree `degree` on `P^{dims}`, concatenated.
pub fn monomials(dims: &[u32], degree: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for (&n, &d) in dims.iter().zip(degree) {
        let block = exponents(n, d);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                block.iter().map(move |b| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(b);
                    v
                })
            })
            .collect();
    }
    out
}

impl MultiForm {
    pub fn zero(dims: &[u32], degree: &[u32], p: u32) -> Self {
        MultiForm { dims: dims.to_vec(), degree: degree.to_vec(), p, terms: Vec::new() }
    }

    /// Checks that every monomial has the form's multidegree.
    pub fn new(dims: &[u32], degree: &[u32], p: u32, terms: Vec<(Vec<u32>, u32)>) -> Result<Self, OracleError> {
        let nvars: usize = dims.iter().map(|&n| n as usize + 1).sum();
        if degree.len() != dims.len() {
            return Err(OracleError::Malformed(format!("multidegree {degree:?} for {} factors", dims.len())));
        }
        for (exp, _) in &terms {
            if exp.len() != nvars {
                return Err(OracleError::Malformed(format!("monomial {exp:?} needs {nvars} exponents")));
            }
            let mut offset = 0;
            for (&n, &d) in dims.iter().zip(degree) {
                let block: u32 = exp[offset..offset + n as usize + 1].iter().sum();
                if block != d {
                    return Err(OracleError::Malformed(format!("monomial {exp:?} is not of multidegree {degree:?}")));
                }
                offset += n as usize + 1;
            }
        }
        let terms = terms.into_iter().map(|(e, c)| (e, c % p)).filter(|(_, c)| *c != 0).collect();
        Ok(MultiForm { dims: dims.to_vec(), degree: degree.to_vec(), p, terms })
    }

    /// Uniformly random coefficients over the full monomial basis.
    pub fn random(dims: &[u32], degree: &[u32], p: u32, rng: &mut impl Rng) -> Self {
        let terms = monomials(dims, degree)
            .into_iter()
            .map(|e| (e, rng.random_range(0..p)))
            .filter(|(_, c)| *c != 0)
            .collect();
        MultiForm { dims: dims.to_vec(), degree: degree.to_vec(), p, terms }
    }

    pub fn eval(&self, x: &[u32]) -> u32 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, (exp, c)| {
            let m = exp.iter().zip(x).fold(*c, |m, (&e, &xi)| field::mul(m, field::pow(xi, e, p), p));
            field::add(acc, m, p)
        })
    }

    /// `∂F/∂x_j` evaluated at `x`, for every coordinate `j`.
    pub fn gradient(&self, x: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut g = vec![0u32; x.len()];
        for (exp, c) in &self.terms {
            for (j, &ej) in exp.iter().enumerate() {
                if ej == 0 {
                    continue;
                }
                let mut m = field::mul(*c, ej % p, p);
                for (k, (&e, &xk)) in exp.iter().zip(x).enumerate() {
                    let e = if k == j { e - 1 } else { e };
                    m = field::mul(m, field::pow(xk, e, p), p);
                }
                g[j] = field::add(g[j], m, p);
            }
        }
        g
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `φ: O^e → ⊕ O(row_degree_i)` as an `f × e` matrix of forms on `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismMatrix {
    pub p: u32,
    pub dims: Vec<u32>,
    pub row_degrees: Vec<Vec<u32>>,
    pub entries: Vec<Vec<MultiForm>>,
}

impl MorphismMatrix {
    pub fn new(p: u32, dims: &[u32], row_degrees: Vec<Vec<u32>>, entries: Vec<Vec<MultiForm>>) -> Result<Self, OracleError> {
        if !field::is_prime(p) {
            return Err(OracleError::NotPrime(p));
        }
        if entries.len() != row_degrees.len() || entries.is_empty() {
            return Err(OracleError::Malformed("row count differs from the number of row degrees".into()));
        }
        let e = entries[0].len();
        if e == 0 {
            return Err(OracleError::Malformed("matrix has no columns".into()));
        }
        for (row, deg) in entries.iter().zip(&row_degrees) {
            if row.len() != e {
                return Err(OracleError::Malformed("ragged matrix".into()));
            }
            for form in row {
                if &form.degree != deg || form.dims != dims || form.p != p {
                    return Err(OracleError::Malformed(format!("entry of multidegree {:?} in a row of degree {deg:?}", form.degree)));
                }
            }
        }
        Ok(MorphismMatrix { p, dims: dims.to_vec(), row_degrees, entries })
    }

    /// A uniformly random `O³ → O(2,0) ⊕ O(0,2)` on `P² × P²`.
    pub fn random_enriques(p: u32, rng: &mut impl Rng) -> Self {
        let dims = [2, 2];
        let row_degrees = vec![vec![2, 0], vec![0, 2]];
        let entries = row_degrees.iter().map(|d| (0..3).map(|_| MultiForm::random(&dims, d, p, rng)).collect()).collect();
        MorphismMatrix { p, dims: dims.to_vec(), row_degrees, entries }
    }

    /// Rows `x₀²·a` and `y₀²·a` for a random constant vector `a`: rank ≤ 1
    /// everywhere, so the degeneracy locus is all of `X`.
    pub fn degenerate_enriques(p: u32, rng: &mut impl Rng) -> Self {
        let dims = [2u32, 2];
        let row_degrees = vec![vec![2, 0], vec![0, 2]];
        let a: Vec<u32> = (0..3).map(|_| rng.random_range(1..p)).collect();
        let x0 = vec![2, 0, 0, 0, 0, 0];
        let y0 = vec![0, 0, 0, 2, 0, 0];
        let entries = [(&row_degrees[0], x0), (&row_degrees[1], y0)]
            .into_iter()
            .map(|(deg, mono)| {
                a.iter().map(|&c| MultiForm::new(&dims, deg, p, vec![(mono.clone(), c)]).expect("valid monomial")).collect()
            })
            .collect();
        MorphismMatrix { p, dims: dims.to_vec(), row_degrees, entries }
    }

    pub fn zero(p: u32, dims: &[u32], row_degrees: Vec<Vec<u32>>, e: usize) -> Self {
        let entries = row_degrees.iter().map(|d| vec![MultiForm::zero(dims, d, p); e]).collect();
        MorphismMatrix { p, dims: dims.to_vec(), row_degrees, entries }
    }

    pub fn e(&self) -> usize {
        self.entries[0].len()
    }

    pub fn f(&self) -> usize {
        self.entries.len()
    }

    pub fn eval(&self, x: &[u32]) -> Vec<Vec<u32>> {
        self.entries.iter().map(|row| row.iter().map(|form| form.eval(x)).collect()).collect()
    }

    pub fn rank_at(&self, x: &[u32]) -> usize {
        field::rank(self.eval(x), self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(&[2, 2], &[2, 0]).len(), 6);
        assert_eq!(monomials(&[2, 2], &[1, 1]).len(), 9);
        assert_eq!(monomials(&[1], &[3]).len(), 4);
    }

    #[test]
    fn eval_and_gradient() {
        // F = x0² + 2 x0 x1 on P¹ over F_5.
        let f = MultiForm::new(&[1], &[2], 5, vec![(vec![2, 0], 1), (vec![1, 1], 2)]).unwrap();
        assert_eq!(f.eval(&[1, 1]), 3);
        assert_eq!(f.gradient(&[1, 1]), vec![4, 2]);
        assert!(MultiForm::new(&[1], &[2], 5, vec![(vec![1, 0], 1)]).is_err());
    }

    #[test]
    fn random_instances_are_seeded() {
        let a = MorphismMatrix::random_enriques(3, &mut ChaCha8Rng::seed_from_u64(7));
        let b = MorphismMatrix::random_enriques(3, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        assert_eq!((a.f(), a.e()), (2, 3));
    }
}
