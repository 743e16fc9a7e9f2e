//! Additive bookkeeping: blow-up formulas for integral cohomology and Hodge
//! diamonds, K₀ accounting along semiorthogonal decompositions, the torsion
//! obstruction to full exceptional collections, and the exclusion of Fano
//! threefold hosts by Picard rank.

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("table line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("cannot read table {path}: {message}")]
    Io { path: String, message: String },
}

/// One integral cohomology group `Z^{free_rank} ⊕ torsion`, with optional
/// names for distinguished sublattices of the free part.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub free_rank: u64,
    pub torsion: Vec<String>,
    pub lattices: Vec<(String, u64)>,
}

impl CohomologyGroup {
    fn absorb(&mut self, other: &CohomologyGroup) {
        self.free_rank += other.free_rank;
        self.torsion.extend(other.torsion.iter().cloned());
        self.torsion.sort();
        self.lattices.extend(other.lattices.iter().cloned());
    }
}

/// `H^k(-, Z)` for `k = 0..=2·dim` of a complex variety of dimension `dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyLedger {
    pub dim: u32,
    pub groups: Vec<CohomologyGroup>,
    pub smooth_proper: bool,
    /// Entries taken as input rather than derived.
    pub assumptions: Vec<String>,
}

impl CohomologyLedger {
    /// The empty variety.
    pub fn empty() -> Self {
        CohomologyLedger { dim: 0, groups: Vec::new(), smooth_proper: true, assumptions: Vec::new() }
    }

    pub fn from_ranks(dim: u32, ranks: &[u64]) -> Result<Self, LedgerError> {
        if ranks.len() != 2 * dim as usize + 1 {
            return Err(LedgerError::ShapeMismatch(format!(
                "dimension {dim} needs {} ranks, got {}",
                2 * dim + 1,
                ranks.len()
            )));
        }
        let groups = ranks.iter().map(|&r| CohomologyGroup { free_rank: r, ..Default::default() }).collect();
        Ok(CohomologyLedger { dim, groups, smooth_proper: true, assumptions: Vec::new() })
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Torsion-free, even-degree cohomology of `P^{n_1} × … × P^{n_k}`.
    pub fn projective_product(dims: &[u32]) -> Self {
        let poly = projective_product_poly(dims);
        let dim = poly.len() as u32 - 1;
        let mut ranks = vec![0; 2 * dim as usize + 1];
        for (p, c) in poly.into_iter().enumerate() {
            ranks[2 * p] = c;
        }
        Self::from_ranks(dim, &ranks).expect("consistent shape")
    }

    /// An Enriques surface: ranks `1, 0, 10, 0, 1`, `H²` carrying the lattice
    /// `Λ` of rank 10 and the 2-torsion class.
    ///
    /// Only the net effect on a blow-up along the surface is modelled: the
    /// torsion is stored in `H²`, where the blow-up formula moves it to `H⁴`
    /// of the blow-up. Topologically `H³` carries a `Z/2` as well; that copy
    /// is not recorded.
    pub fn enriques() -> Self {
        let mut l = Self::from_ranks(2, &[1, 0, 10, 0, 1]).expect("consistent shape");
        l.groups[2].torsion.push("Z/2".into());
        l.groups[2].lattices.push(("Λ".into(), 10));
        l.assumptions.push("Enriques 2-torsion placed in H² (net effect on blow-ups); H³ torsion not recorded".into());
        l
    }

    pub fn free_ranks(&self) -> Vec<u64> {
        self.groups.iter().map(|g| g.free_rank).collect()
    }

    pub fn euler(&self) -> i64 {
        self.groups.iter().enumerate().map(|(k, g)| if k % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum()
    }

    /// `rank_k = rank_{2·dim-k}`.
    pub fn poincare_symmetric(&self) -> bool {
        let r = self.free_ranks();
        r.iter().eq(r.iter().rev())
    }
}

fn projective_product_poly(dims: &[u32]) -> Vec<u64> {
    let mut poly = vec![1u64];
    for &n in dims {
        let mut next = vec![0u64; poly.len() + n as usize];
        for (i, c) in poly.iter().enumerate() {
            for j in 0..=n as usize {
                next[i + j] += c;
            }
        }
        poly = next;
    }
    poly
}

/// `H^k(Bl_S X) = H^k(X) ⊕ ⊕_{i=1}^{codim-1} H^{k-2i}(S)`.
pub fn blowup_cohomology(
    x: &CohomologyLedger,
    s: &CohomologyLedger,
    codim: u32,
) -> Result<CohomologyLedger, LedgerError> {
    if codim < 2 {
        return Err(LedgerError::Precondition(format!("blow-up centre needs codimension ≥ 2, got {codim}")));
    }
    let mut out = x.clone();
    if s.is_empty() {
        return Ok(out);
    }
    if s.dim + codim != x.dim {
        return Err(LedgerError::ShapeMismatch(format!(
            "centre of dimension {} and codimension {codim} in a variety of dimension {}",
            s.dim, x.dim
        )));
    }
    for i in 1..codim as usize {
        for (k, g) in s.groups.iter().enumerate() {
            out.groups[k + 2 * i].absorb(g);
        }
    }
    out.smooth_proper = x.smooth_proper && s.smooth_proper;
    out.assumptions.extend(s.assumptions.iter().cloned());
    Ok(out)
}

/// Hodge numbers `h^{p,q}` for `0 ≤ p, q ≤ dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeDiamond {
    dim: u32,
    entries: Vec<Vec<u64>>,
}

impl HodgeDiamond {
    pub fn zero(dim: u32) -> Self {
        let n = dim as usize + 1;
        HodgeDiamond { dim, entries: vec![vec![0; n]; n] }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn get(&self, p: u32, q: u32) -> u64 {
        self.entries.get(p as usize).and_then(|row| row.get(q as usize)).copied().unwrap_or(0)
    }

    /// Panics if `(p, q)` lies outside the diamond.
    pub fn set(&mut self, p: u32, q: u32, value: u64) {
        self.entries[p as usize][q as usize] = value;
    }

    pub fn projective_product(dims: &[u32]) -> Self {
        let poly = projective_product_poly(dims);
        let mut d = Self::zero(poly.len() as u32 - 1);
        for (p, c) in poly.into_iter().enumerate() {
            d.set(p as u32, p as u32, c);
        }
        d
    }

    pub fn enriques() -> Self {
        let mut d = Self::zero(2);
        d.set(0, 0, 1);
        d.set(1, 1, 10);
        d.set(2, 2, 1);
        d
    }

    /// Checks Hodge symmetry `h^{p,q} = h^{q,p}` and Serre symmetry
    /// `h^{p,q} = h^{n-p,n-q}`.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.dim;
        for p in 0..=n {
            for q in 0..=n {
                let v = self.get(p, q);
                if v != self.get(q, p) {
                    return Err(format!("h^{{{p},{q}}} = {v} but h^{{{q},{p}}} = {}", self.get(q, p)));
                }
                if v != self.get(n - p, n - q) {
                    return Err(format!("h^{{{p},{q}}} = {v} but h^{{{},{}}} = {}", n - p, n - q, self.get(n - p, n - q)));
                }
            }
        }
        Ok(())
    }

    /// `b_k = Σ_{p+q=k} h^{p,q}`.
    pub fn betti(&self) -> Vec<u64> {
        let n = self.dim;
        (0..=2 * n).map(|k| (0..=n).filter(|&p| k >= p && k - p <= n).map(|p| self.get(p, k - p)).sum()).collect()
    }

    pub fn euler(&self) -> i64 {
        self.betti().iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// `χ^p = Σ_q (-1)^q h^{p,q}`.
    pub fn chi_p(&self) -> Vec<i64> {
        (0..=self.dim)
            .map(|p| (0..=self.dim).map(|q| if q % 2 == 0 { self.get(p, q) as i64 } else { -(self.get(p, q) as i64) }).sum())
            .collect()
    }
}

/// `h^{p,q}(Bl_S X) = h^{p,q}(X) + Σ_{i=1}^{codim-1} h^{p-i,q-i}(S)`.
pub fn blowup_hodge(x: &HodgeDiamond, s: &HodgeDiamond, codim: u32) -> Result<HodgeDiamond, LedgerError> {
    if codim < 1 || s.dim + codim != x.dim {
        return Err(LedgerError::ShapeMismatch(format!(
            "centre of dimension {} and codimension {codim} in a variety of dimension {}",
            s.dim, x.dim
        )));
    }
    let mut out = x.clone();
    for i in 1..codim {
        for p in 0..=s.dim {
            for q in 0..=s.dim {
                out.entries[(p + i) as usize][(q + i) as usize] += s.get(p, q);
            }
        }
    }
    Ok(out)
}

/// Additive shadow of `K₀`: free rank plus named finite torsion summands.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct K0Summary {
    pub free_rank: u64,
    pub torsion: Vec<String>,
}

impl K0Summary {
    pub fn new(free_rank: u64, torsion: &[&str]) -> Self {
        let mut torsion: Vec<String> = torsion.iter().map(|s| s.to_string()).collect();
        torsion.sort();
        K0Summary { free_rank, torsion }
    }

    pub fn enriques() -> Self {
        K0Summary::new(12, &["Z/2"])
    }
}

/// A piece of a semiorthogonal decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SodPart {
    Component(K0Summary),
    /// `n` exceptional objects, each contributing a copy of `Z`.
    Exceptional(u64),
}

/// `K₀` of `⟨A₁, …, A_k⟩` is `⊕ K₀(A_i)`.
pub fn sod_compose(parts: &[SodPart]) -> K0Summary {
    let mut out = K0Summary::default();
    for part in parts {
        match part {
            SodPart::Component(k) => {
                out.free_rank += k.free_rank;
                out.torsion.extend(k.torsion.iter().cloned());
            }
            SodPart::Exceptional(n) => out.free_rank += n,
        }
    }
    out.torsion.sort();
    out
}

/// A full exceptional collection forces `K₀` to be free, so any torsion
/// obstructs one.
pub fn fec_obstruction(k: &K0Summary) -> bool {
    !k.torsion.is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoFamily {
    pub id: String,
    pub rho: u32,
    pub fec: bool,
}

/// Fano threefold families with large Picard rank; complete for
/// `rho ≥ coverage_min_rho`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoTable {
    pub version: u32,
    pub coverage_min_rho: u32,
    pub families: Vec<FanoFamily>,
}

const BUILTIN_FANO_TABLE: &str = include_str!("../data/fano3_high_picard.txt");

impl FanoTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_FANO_TABLE).expect("shipped table parses")
    }

    pub fn load(path: &Path) -> Result<Self, LedgerError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LedgerError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LedgerError> {
        let mut version = None;
        let mut coverage = None;
        let mut families = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| LedgerError::Table { line, message };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let number = |s: &str| s.parse::<u32>().map_err(|_| err(format!("expected an integer, found {s:?}")));
            match fields.as_slice() {
                ["version", v] => version = Some(number(v)?),
                ["coverage_min_rho", v] => coverage = Some(number(v)?),
                [id, rho, fec] => {
                    let fec = match *fec {
                        "true" => true,
                        "false" => false,
                        other => return Err(err(format!("expected true or false, found {other:?}"))),
                    };
                    families.push(FanoFamily { id: id.to_string(), rho: number(rho)?, fec });
                }
                _ => return Err(err(format!("expected `id rho fec`, found {content:?}"))),
            }
        }
        let coverage_min_rho =
            coverage.ok_or(LedgerError::Table { line: 0, message: "missing coverage_min_rho header".into() })?;
        if let Some(f) = families.iter().find(|f| f.rho < coverage_min_rho) {
            return Err(LedgerError::Table {
                line: 0,
                message: format!("family {} has rho {} below the coverage bound {coverage_min_rho}", f.id, f.rho),
            });
        }
        Ok(FanoTable { version: version.unwrap_or(1), coverage_min_rho, families })
    }
}

/// Outcome of [`threefold_exclusion`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExclusionReport {
    pub hh0_required: u64,
    /// Least `ρ` with `2 + 2ρ ≥ hh0_required`.
    pub min_rho: u32,
    pub table_covers: bool,
    pub families: Vec<FanoFamily>,
    pub all_admit_fec: bool,
    /// Every candidate host has free `K₀`, while the visitor's torsion would
    /// have to embed in it.
    pub excluded: bool,
}

/// Can a Fano threefold host a category whose `HH₀` has dimension
/// `hh0_required` together with `K₀` torsion?
///
/// A Fano threefold has `h^{p,q} = 0` for `p ≠ q` except `h^{1,2}`, so
/// `dim HH₀ = 2 + 2ρ`. A host needs `dim HH₀ ≥ hh0_required`; if every
/// surviving family has a full exceptional collection, its `K₀` is free and
/// the torsion cannot embed.
pub fn threefold_exclusion(table: &FanoTable, hh0_required: u64) -> Result<ExclusionReport, LedgerError> {
    if hh0_required < 2 {
        return Err(LedgerError::Precondition(format!("dim HH₀ of a visitor is at least 2, got {hh0_required}")));
    }
    let min_rho = (hh0_required - 2).div_ceil(2) as u32;
    let families: Vec<FanoFamily> = table.families.iter().filter(|f| f.rho >= min_rho).cloned().collect();
    let table_covers = min_rho >= table.coverage_min_rho;
    let all_admit_fec = families.iter().all(|f| f.fec);
    Ok(ExclusionReport {
        hh0_required,
        min_rho,
        table_covers,
        families,
        all_admit_fec,
        excluded: table_covers && all_admit_fec,
    })
}

/// Summary of the ledger for the blow-up `Bl_S(P² × P²)` along the
/// Enriques surface.
pub fn enriques_blowup() -> (CohomologyLedger, HodgeDiamond) {
    let x = CohomologyLedger::projective_product(&[2, 2]);
    let s = CohomologyLedger::enriques();
    let coh = blowup_cohomology(&x, &s, 2).expect("shapes match");
    let hodge = blowup_hodge(&HodgeDiamond::projective_product(&[2, 2]), &HodgeDiamond::enriques(), 2)
        .expect("shapes match");
    (coh, hodge)
}
