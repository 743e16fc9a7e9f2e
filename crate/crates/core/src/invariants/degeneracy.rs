//! Degeneracy loci of general bundle maps `φ: E → F`: expected dimensions,
//! the rank stratification of `X` and its preimages, the chain of section
//! spaces that all encode the same `φ`, and the Fano-host criterion.

use num::BigInt;

use super::cohomology::TowerShape;
use super::InvariantError;
use crate::chowcore::Symbol;
use crate::tower::{Space, SplitBundle};

/// `D_r(φ) ⊂ X` for `φ: E → F`, `dim X = dim_x`, `rk E = e`, `rk F = f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegeneracyQuery {
    pub dim_x: i64,
    pub e: i64,
    pub f: i64,
    pub r: i64,
}

impl DegeneracyQuery {
    pub fn new(dim_x: i64, e: i64, f: i64, r: i64) -> Result<Self, InvariantError> {
        if r < 0 || r > e.min(f) {
            return Err(InvariantError::Precondition(format!("need 0 ≤ r ≤ min(e, f), got r = {r}, e = {e}, f = {f}")));
        }
        Ok(DegeneracyQuery { dim_x, e, f, r })
    }
}

/// `m_r = dim X - (e - r)(f - r)`; negative means expected empty.
pub fn expected_degeneracy_dim(q: &DegeneracyQuery) -> i64 {
    q.dim_x - (q.e - q.r) * (q.f - q.r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratumCase {
    /// `V(φ_E) ⊂ Gr_X(e-f, E)`: fibre `Gr(e-f, e-f+i)` over `X_i`.
    GrassBirational,
    /// `V(φ_E) ⊂ P_X(E)`: fibre `P^{e-f+i-1}` over `X_i`.
    ProjBundle,
    /// `V(φ_{F^∨}) ⊂ P_X(F^∨)`: fibre `P^{i-1}` over `X_i`, empty over `X_0`.
    ZSide,
}

/// One stratum `X_i = D_{f-i}(φ) \ D_{f-i-1}(φ)` and its preimage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumRow {
    pub i: i64,
    /// Expected `dim X_i = dim X - i(e - f + i)`.
    pub stratum_dim: i64,
    /// Fibre dimension; `None` where the fibre is empty.
    pub fiber_dim: Option<i64>,
    /// Closed-form preimage dimension; `None` where the fibre is empty.
    pub preimage_dim: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumTable {
    pub case: StratumCase,
    pub rows: Vec<StratumRow>,
    pub notes: Vec<String>,
}

pub fn stratum_dimensions(dim_x: i64, e: i64, f: i64, case: StratumCase) -> Result<StratumTable, InvariantError> {
    if !(e > f && f >= 1) {
        return Err(InvariantError::Precondition(format!("need e > f ≥ 1, got e = {e}, f = {f}")));
    }
    let k = e - f;
    let mut notes = Vec::new();
    let rows = (0..=f)
        .map(|i| {
            let stratum_dim = dim_x - i * (k + i);
            let (fiber_dim, preimage_dim) = match case {
                StratumCase::GrassBirational => (Some(k * i), Some(dim_x - i * i)),
                StratumCase::ProjBundle => (Some(k + i - 1), Some(dim_x + (k - 1) - i * (k + i - 1))),
                StratumCase::ZSide if i == 0 => (None, None),
                StratumCase::ZSide => {
                    let d_top = dim_x - (k + 1);
                    (Some(i - 1), Some(d_top + (1 - i) * (k + i)))
                }
            };
            StratumRow { i, stratum_dim, fiber_dim, preimage_dim }
        })
        .collect();
    if case == StratumCase::ProjBundle {
        notes.push(format!(
            "open stratum has dimension dim X + e - f - 1 = {}; a bound of dim X + e - f + 1 = {} \
             quoted for this case looks like a sign typo",
            dim_x + k - 1,
            dim_x + k + 1
        ));
    }
    Ok(StratumTable { case, rows, notes })
}

/// A bundle map `φ: E → F` over a product of projective spaces, both split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyInstance {
    pub base: Vec<u32>,
    pub e: Vec<Symbol>,
    pub f: Vec<Symbol>,
}

impl DegeneracyInstance {
    /// `O³ → O(2,0) ⊕ O(0,2)` on `P² × P²`.
    pub fn enriques() -> Self {
        DegeneracyInstance { base: vec![2, 2], e: vec![vec![0, 0]; 3], f: vec![vec![2, 0], vec![0, 2]] }
    }

    fn e_is_trivial(&self) -> bool {
        self.e.iter().all(|s| s.iter().all(|&d| d == 0))
    }
}

/// The four spaces whose sections all encode `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionModel {
    /// `H⁰(X, E^∨ ⊗ F)`.
    HomBundle,
    /// `H⁰(P_X(E), p*F ⊗ O_E(1))`.
    ProjESide,
    /// `H⁰(P(W) × X, O(1) ⊠ F)` for trivial `E = O ⊗ W`.
    ProductSide,
    /// `H⁰(P_X(F^∨), q*E^∨ ⊗ O_{F^∨}(1))`.
    ProjFdualSide,
}

impl SectionModel {
    pub const ALL: [SectionModel; 4] =
        [SectionModel::HomBundle, SectionModel::ProjESide, SectionModel::ProductSide, SectionModel::ProjFdualSide];
}

pub fn section_space_dim(model: SectionModel, inst: &DegeneracyInstance) -> Result<BigInt, InvariantError> {
    let nb = inst.base.len();
    for s in inst.e.iter().chain(&inst.f) {
        if s.len() != nb {
            return Err(InvariantError::Arity { expected: nb, found: s.len() });
        }
    }
    let base = Space::build_base(&inst.base)?;
    let with_xi = |s: &Symbol, xi: i64| {
        let mut v = s.clone();
        v.push(xi);
        v
    };
    match model {
        SectionModel::HomBundle => {
            let summands = inst
                .e
                .iter()
                .flat_map(|a| inst.f.iter().map(move |b| b.iter().zip(a).map(|(x, y)| x - y).collect()))
                .collect();
            Ok(TowerShape::of(&base).h0_split(&SplitBundle::new(summands)))
        }
        SectionModel::ProjESide => {
            if inst.e.is_empty() || inst.f.is_empty() {
                return Ok(BigInt::from(0));
            }
            let pe = base.add_proj_bundle(&SplitBundle::new(inst.e.clone()))?;
            let bundle = SplitBundle::new(inst.f.iter().map(|b| with_xi(b, 1)).collect());
            Ok(TowerShape::of(&pe).h0_split(&bundle))
        }
        SectionModel::ProductSide => {
            if !inst.e_is_trivial() {
                return Err(InvariantError::UnsupportedShape("product model needs a trivial E".into()));
            }
            if inst.e.is_empty() || inst.f.is_empty() {
                return Ok(BigInt::from(0));
            }
            let mut dims = inst.base.clone();
            dims.push(inst.e.len() as u32 - 1);
            if inst.e.len() == 1 {
                // P⁰ factor: X itself.
                return section_space_dim(SectionModel::HomBundle, inst);
            }
            let prod = Space::build_base(&dims)?;
            let bundle = SplitBundle::new(inst.f.iter().map(|b| with_xi(b, 1)).collect());
            Ok(TowerShape::of(&prod).h0_split(&bundle))
        }
        SectionModel::ProjFdualSide => {
            if inst.e.is_empty() || inst.f.is_empty() {
                return Ok(BigInt::from(0));
            }
            let fdual = SplitBundle::new(inst.f.clone()).dual();
            let pf = base.add_proj_bundle(&fdual)?;
            let bundle = SplitBundle::new(inst.e.iter().map(|a| with_xi(&a.iter().map(|d| -d).collect(), 1)).collect());
            Ok(TowerShape::of(&pf).h0_split(&bundle))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FanoHostVerdict {
    /// `D_{f-2}(φ)` expected empty.
    pub cond_a: bool,
    /// `p*(K_X ⊗ det E ⊗ det F) ⊗ O_E(f - e)` anti-ample.
    pub cond_b: bool,
    pub fano_host: bool,
}

/// Checks both conditions of the Fano-host criterion.
///
/// With `index_mode` the base has Picard rank one, `K_X = O(-ι)`,
/// `det E = O(α)`, `det F = O(β)`, and (b) reads `ι - α - β > 0`. Otherwise
/// the base is a product of projective spaces with trivial-type `E`, and (b)
/// is checked as strict positivity of every component of
/// `-(K_X + det E + det F)`.
pub fn fano_host_check(
    dim_x: i64,
    e: i64,
    f: i64,
    k_x: &[i64],
    det_e: &[i64],
    det_f: &[i64],
    index_mode: bool,
) -> Result<FanoHostVerdict, InvariantError> {
    if e <= f {
        return Err(InvariantError::Precondition(format!("need e > f, got e = {e}, f = {f}")));
    }
    if f < 1 {
        return Err(InvariantError::Precondition("need f ≥ 1".into()));
    }
    if k_x.len() != det_e.len() || k_x.len() != det_f.len() {
        return Err(InvariantError::Arity { expected: k_x.len(), found: det_e.len().max(det_f.len()) });
    }
    if index_mode && k_x.len() != 1 {
        return Err(InvariantError::UnsupportedShape("index mode needs Picard rank one data".into()));
    }
    let cond_a = if f < 2 {
        true
    } else {
        expected_degeneracy_dim(&DegeneracyQuery::new(dim_x, e, f, f - 2)?) < 0
    };
    let cond_b = if index_mode {
        let iota = -k_x[0];
        iota - det_e[0] - det_f[0] > 0 && f < e
    } else {
        k_x.iter().zip(det_e).zip(det_f).all(|((k, a), b)| -(k + a + b) > 0) && e - f >= 1
    };
    Ok(FanoHostVerdict { cond_a, cond_b, fano_host: cond_a && cond_b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_dimensions() {
        let m = |x, e, f, r| expected_degeneracy_dim(&DegeneracyQuery::new(x, e, f, r).unwrap());
        assert_eq!(m(4, 3, 2, 1), 2);
        assert_eq!(m(4, 3, 2, 0), -2);
        for n in 0..6 {
            assert_eq!(m(n, 3, 2, 2), n);
            assert_eq!(m(n, 4, 5, 4), n);
        }
        assert!(DegeneracyQuery::new(4, 3, 2, 3).is_err());
        assert!(DegeneracyQuery::new(4, 3, 2, -1).is_err());
    }

    #[test]
    fn monotone_in_r() {
        for (x, e, f) in [(4, 3, 2), (10, 5, 3), (6, 4, 4), (3, 1, 7)] {
            let dims: Vec<i64> = (0..=e.min(f))
                .map(|r| expected_degeneracy_dim(&DegeneracyQuery::new(x, e, f, r).unwrap()))
                .collect();
            assert!(dims.windows(2).all(|w| w[0] < w[1]), "{dims:?}");
        }
    }

    #[test]
    fn strata_for_the_enriques_instance() {
        let g = stratum_dimensions(4, 3, 2, StratumCase::GrassBirational).unwrap();
        assert_eq!(g.rows.iter().map(|r| r.preimage_dim.unwrap()).collect::<Vec<_>>(), vec![4, 3, 0]);
        let p = stratum_dimensions(4, 3, 2, StratumCase::ProjBundle).unwrap();
        assert_eq!(p.rows.iter().map(|r| r.preimage_dim.unwrap()).collect::<Vec<_>>(), vec![4, 3, 0]);
        assert_eq!(p.notes.len(), 1);
        let z = stratum_dimensions(4, 3, 2, StratumCase::ZSide).unwrap();
        assert_eq!(z.rows[0].preimage_dim, None);
        assert_eq!(z.rows[1].preimage_dim, Some(2));
        assert!(stratum_dimensions(4, 2, 2, StratumCase::ZSide).is_err());
    }

    #[test]
    fn closed_forms_match_base_plus_fiber() {
        for dim_x in 0..12 {
            for f in 1..5 {
                for e in (f + 1)..(f + 5) {
                    for case in [StratumCase::GrassBirational, StratumCase::ProjBundle, StratumCase::ZSide] {
                        let t = stratum_dimensions(dim_x, e, f, case).unwrap();
                        for row in &t.rows {
                            if let (Some(fd), Some(pd)) = (row.fiber_dim, row.preimage_dim) {
                                assert_eq!(pd, row.stratum_dim + fd, "{case:?} {dim_x} {e} {f} {row:?}");
                            }
                        }
                        if case == StratumCase::GrassBirational {
                            assert!(t.rows.iter().skip(1).all(|r| r.preimage_dim.unwrap() < dim_x));
                        }
                        if case == StratumCase::ProjBundle {
                            assert_eq!(t.rows[0].preimage_dim, Some(dim_x + e - f - 1));
                        }
                        if case == StratumCase::ZSide {
                            assert_eq!(t.rows[1].preimage_dim, Some(dim_x - (e - f + 1)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn section_spaces_agree() {
        let inst = DegeneracyInstance::enriques();
        for m in SectionModel::ALL {
            assert_eq!(section_space_dim(m, &inst).unwrap(), BigInt::from(36), "{m:?}");
        }
        let empty_f = DegeneracyInstance { f: vec![], ..inst.clone() };
        for m in SectionModel::ALL {
            assert_eq!(section_space_dim(m, &empty_f).unwrap(), BigInt::from(0), "{m:?}");
        }
        let twisted = DegeneracyInstance { e: vec![vec![1, 0], vec![0, 0]], ..inst };
        assert!(section_space_dim(SectionModel::ProductSide, &twisted).is_err());
        let a = section_space_dim(SectionModel::HomBundle, &twisted).unwrap();
        assert_eq!(section_space_dim(SectionModel::ProjESide, &twisted).unwrap(), a);
        assert_eq!(section_space_dim(SectionModel::ProjFdualSide, &twisted).unwrap(), a);
    }

    #[test]
    fn fano_host() {
        let v = fano_host_check(4, 3, 2, &[-3, -3], &[0, 0], &[2, 2], false).unwrap();
        assert_eq!(v, FanoHostVerdict { cond_a: true, cond_b: true, fano_host: true });
        let idx = fano_host_check(6, 3, 2, &[-4], &[1], &[2], true).unwrap();
        assert!(idx.cond_b);
        let not_ample = fano_host_check(4, 3, 2, &[-3, -3], &[0, 0], &[3, 2], false).unwrap();
        assert!(!not_ample.cond_b && !not_ample.fano_host);
        let big_degeneracy = fano_host_check(20, 3, 2, &[-3, -3], &[0, 0], &[2, 2], false).unwrap();
        assert!(!big_degeneracy.cond_a);
        assert!(fano_host_check(4, 2, 2, &[-3, -3], &[0, 0], &[2, 2], false).is_err());
        assert!(fano_host_check(4, 3, 2, &[-3, -3], &[0, 0], &[2, 2], true).is_err());
    }
}
