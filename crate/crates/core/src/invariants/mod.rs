//! Numerical invariants of towers through Hirzebruch–Riemann–Roch, plus the
//! dimension bookkeeping for degeneracy loci and their stratifications.

mod cohomology;
mod degeneracy;

pub use cohomology::{binomial, h0_via_koszul, projective_space_cohomology, Cohomology, H0Result, TowerShape};
pub use degeneracy::{
    expected_degeneracy_dim, fano_host_check, section_space_dim, stratum_dimensions, DegeneracyInstance,
    DegeneracyQuery, FanoHostVerdict, SectionModel, StratumCase, StratumRow, StratumTable,
};

use num::{BigInt, BigRational};
use thiserror::Error;

use crate::chowcore::{to_integer, ChowError, KClass};
use crate::ledger::HodgeDiamond;
use crate::tower::{Space, TowerError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("degree vector has {found} entries, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("{what} is not an integer: {value}")]
    NonIntegral { what: String, value: String },
    #[error("unsupported tower shape: {0}")]
    UnsupportedShape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed Hodge diamond: {0}")]
    MalformedDiamond(String),
}

fn integral(what: &str, q: BigRational) -> Result<BigInt, InvariantError> {
    to_integer(&q).ok_or_else(|| InvariantError::NonIntegral { what: what.to_string(), value: q.to_string() })
}

fn check_arity(space: &Space, line: &[i64]) -> Result<(), InvariantError> {
    let n = space.num_generators();
    if line.len() != n {
        return Err(InvariantError::Arity { expected: n, found: line.len() });
    }
    Ok(())
}

/// `∫ c_top(T)`.
pub fn euler_number(space: &Space) -> Result<BigInt, InvariantError> {
    let c = space.tangent().total_chern().homogeneous_part(space.dim());
    integral("Euler number", space.integrate(&c))
}

/// `∫ ch(x) td(T)` for any K-class on the ambient.
pub fn hrr(space: &Space, x: &KClass) -> BigRational {
    let integrand = &x.chern_character() * &space.tangent().todd();
    space.integrate(&integrand)
}

/// `χ(O(L))`.
pub fn chi(space: &Space, line: &[i64]) -> Result<BigInt, InvariantError> {
    check_arity(space, line)?;
    let l = KClass::line(space.ring(), line.to_vec());
    integral("Euler characteristic", hrr(space, &l))
}

/// `∫ c₁(L)^dim`.
pub fn degree(space: &Space, line: &[i64]) -> Result<BigInt, InvariantError> {
    check_arity(space, line)?;
    let l = space.line_class(line);
    integral("degree", space.integrate(&l.pow(space.dim())))
}

/// `χ^p = χ(Ω^p)` for `p = 0..=dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiYProfile {
    pub chi_p: Vec<BigInt>,
}

impl ChiYProfile {
    pub fn dim(&self) -> usize {
        self.chi_p.len().saturating_sub(1)
    }

    /// `χ_y` at `y = -1`, i.e. `Σ_p (-1)^p χ^p`; equals the Euler number.
    pub fn at_minus_one(&self) -> BigInt {
        self.chi_p
            .iter()
            .enumerate()
            .map(|(p, c)| if p % 2 == 0 { c.clone() } else { -c.clone() })
            .sum()
    }

    /// `χ^p = (-1)^dim χ^{dim-p}`.
    pub fn serre_symmetric(&self) -> bool {
        let n = self.dim();
        (0..=n).all(|p| {
            let mirrored = &self.chi_p[n - p];
            if n.is_multiple_of(2) { &self.chi_p[p] == mirrored } else { self.chi_p[p] == -mirrored.clone() }
        })
    }
}

/// `χ_y`-genus coefficients via `Ω^p = λ^p(T^∨)` and HRR.
pub fn chi_y(space: &Space) -> Result<ChiYProfile, InvariantError> {
    let cotangent = space.tangent().dual();
    let todd = space.tangent().todd();
    let mut chi_p = Vec::with_capacity(space.dim() as usize + 1);
    for p in 0..=space.dim() {
        let omega = cotangent.exterior_power(p as i64)?;
        let value = space.integrate(&(&omega.chern_character() * &todd));
        chi_p.push(integral(&format!("χ(Ω^{p})"), value)?);
    }
    let profile = ChiYProfile { chi_p };
    if !profile.serre_symmetric() {
        return Err(InvariantError::Precondition(format!(
            "χ_y profile {:?} violates Serre duality",
            profile.chi_p.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        )));
    }
    Ok(profile)
}

/// `dim HH₀ = Σ_p h^{p,p}`.
pub fn hh0_from_diamond(diamond: &HodgeDiamond) -> Result<u64, InvariantError> {
    diamond.validate().map_err(InvariantError::MalformedDiamond)?;
    Ok((0..=diamond.dim()).map(|p| diamond.get(p, p)).sum())
}
