//! Varieties as towers: a product of projective spaces, then projectivized
//! split bundles, then zero loci of split bundles.
//!
//! Zero-locus steps are recorded through their normal bundle only. A
//! projective bundle over a zero locus `Z ⊂ A` is the zero locus of the
//! pulled-back section inside the projective bundle over `A`, so every space
//! is represented as (ambient tower, normal bundle) no matter how the steps
//! interleave. Integration over the space is integration over the ambient
//! against the top Chern class of the normal bundle.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::BigRational;
use thiserror::Error;

use crate::chowcore::{ChowClass, ChowError, ChowPresentation, KClass, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error("zero locus of a rank-{rank} bundle in a {dim}-dimensional space")]
    RankExceedsDimension { rank: usize, dim: u32 },
    #[error("unknown preset `{0}` (expected one of X, Y, S, T, PE, PFdual)")]
    UnknownPreset(String),
}

/// `⊕ O(d_i)`, one first-Chern-class vector per summand.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitBundle {
    pub summands: Vec<Symbol>,
}

impl SplitBundle {
    pub fn new(summands: Vec<Symbol>) -> Self {
        SplitBundle { summands }
    }

    /// `n` copies of the trivial line bundle over `gens` generators.
    pub fn trivial(rank: usize, gens: usize) -> Self {
        SplitBundle { summands: vec![vec![0; gens]; rank] }
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn det(&self, gens: usize) -> Symbol {
        let mut d = vec![0; gens];
        for s in &self.summands {
            for (a, b) in d.iter_mut().zip(s) {
                *a += b;
            }
        }
        d
    }

    pub fn dual(&self) -> Self {
        SplitBundle { summands: self.summands.iter().map(|s| s.iter().map(|d| -d).collect()).collect() }
    }

    /// Pullback to a tower with `gens` generators (appended generators get 0).
    pub fn padded(&self, gens: usize) -> Self {
        SplitBundle {
            summands: self
                .summands
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.resize(gens, 0);
                    s
                })
                .collect(),
        }
    }

    fn check_arity(&self, gens: usize) -> Result<(), ChowError> {
        for s in &self.summands {
            if s.len() != gens {
                return Err(ChowError::Arity { expected: gens, found: s.len() });
            }
        }
        Ok(())
    }

    pub fn to_kclass(&self, ring: &Arc<ChowPresentation>) -> KClass {
        KClass::from_terms(ring, self.summands.iter().map(|s| (s.clone(), 1.into())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Base(Vec<u32>),
    ProjBundle(SplitBundle),
    ZeroLocus(SplitBundle),
}

#[derive(Debug, Clone)]
pub struct Space {
    steps: Vec<Step>,
    ring: Arc<ChowPresentation>,
    normal: SplitBundle,
    tangent: KClass,
    canonical: Symbol,
    dim: u32,
    top_normal: ChowClass,
    warnings: Vec<String>,
}

impl Space {
    /// `P^{n_1} × ... × P^{n_k}`.
    pub fn build_base(dims: &[u32]) -> Result<Self, TowerError> {
        let ring = Arc::new(ChowPresentation::product(dims)?);
        let k = dims.len();
        let mut tangent = KClass::trivial(&ring, -(k as i64));
        let mut canonical = vec![0; k];
        for (i, &n) in dims.iter().enumerate() {
            let mut h = vec![0; k];
            h[i] = 1;
            tangent = tangent.add(&KClass::line(&ring, h).scale(n as i64 + 1))?;
            canonical[i] = -(n as i64) - 1;
        }
        Ok(Space {
            steps: vec![Step::Base(dims.to_vec())],
            top_normal: ChowClass::one(&ring),
            ring,
            normal: SplitBundle::default(),
            tangent,
            canonical,
            dim: dims.iter().sum(),
            warnings: Vec::new(),
        })
    }

    /// `P(B)`, the bundle of lines in `B`, with `ξ = c₁(O(1))` appended as a
    /// new generator. Relative tangent bundle `Σ O(ξ) ⊗ b_i - O`, so the
    /// canonical class becomes `K - det B - rank·ξ`.
    pub fn add_proj_bundle(&self, bundle: &SplitBundle) -> Result<Self, TowerError> {
        let n = self.ring.num_generators();
        bundle.check_arity(n)?;
        let ring = Arc::new(self.ring.with_proj_bundle(&bundle.summands)?);
        let r = bundle.rank() as i64;
        let lifted = bundle.padded(n + 1);
        let mut tangent = self.tangent.pullback(&ring).sub(&KClass::trivial(&ring, 1))?;
        for s in &lifted.summands {
            let mut t = s.clone();
            t[n] = 1;
            tangent = tangent.add(&KClass::line(&ring, t))?;
        }
        let mut canonical = self.canonical.clone();
        for (c, d) in canonical.iter_mut().zip(bundle.det(n)) {
            *c -= d;
        }
        canonical.push(-r);
        let normal = self.normal.padded(n + 1);
        let top_normal = top_chern(&ring, &normal);
        let mut steps = self.steps.clone();
        steps.push(Step::ProjBundle(bundle.clone()));
        Ok(Space {
            steps,
            ring,
            normal,
            tangent,
            canonical,
            dim: self.dim + r as u32 - 1,
            top_normal,
            warnings: self.warnings.clone(),
        })
    }

    /// Zero locus of a (general) section of `B`. Transversality is assumed.
    pub fn cut_zero_locus(&self, bundle: &SplitBundle) -> Result<Self, TowerError> {
        let n = self.ring.num_generators();
        bundle.check_arity(n)?;
        if bundle.rank() as u32 > self.dim {
            return Err(TowerError::RankExceedsDimension { rank: bundle.rank(), dim: self.dim });
        }
        if bundle.rank() == 0 {
            return Ok(self.clone());
        }
        let mut warnings = self.warnings.clone();
        for s in &bundle.summands {
            if s.iter().any(|&d| d < 0) {
                let msg = format!("zero locus of O({}) which has a negative degree", join(s));
                log::warn!("{msg}");
                warnings.push(msg);
            }
        }
        let tangent = self.tangent.sub(&bundle.to_kclass(&self.ring))?;
        let mut canonical = self.canonical.clone();
        for (c, d) in canonical.iter_mut().zip(bundle.det(n)) {
            *c += d;
        }
        let mut normal = self.normal.clone();
        normal.summands.extend(bundle.summands.iter().cloned());
        let top_normal = top_chern(&self.ring, &normal);
        let mut steps = self.steps.clone();
        steps.push(Step::ZeroLocus(bundle.clone()));
        Ok(Space {
            steps,
            ring: self.ring.clone(),
            normal,
            tangent,
            canonical,
            dim: self.dim - bundle.rank() as u32,
            top_normal,
            warnings,
        })
    }

    pub fn preset(name: Preset) -> Self {
        name.build()
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Chow presentation of the ambient tower (base and projective bundles).
    pub fn ring(&self) -> &Arc<ChowPresentation> {
        &self.ring
    }

    pub fn num_generators(&self) -> usize {
        self.ring.num_generators()
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.ring.generators().iter().map(|g| g.name.clone()).collect()
    }

    /// Normal bundle of the space inside its ambient tower.
    pub fn normal(&self) -> &SplitBundle {
        &self.normal
    }

    /// Virtual tangent class, restricted implicitly from the ambient.
    pub fn tangent(&self) -> &KClass {
        &self.tangent
    }

    pub fn canonical(&self) -> &Symbol {
        &self.canonical
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn has_zero_locus(&self) -> bool {
        !self.normal.summands.is_empty()
    }

    /// Dimensions of the base factors.
    pub fn base_dims(&self) -> &[u32] {
        match &self.steps[0] {
            Step::Base(d) => d,
            _ => unreachable!("towers start with a base"),
        }
    }

    /// The projectivized bundles in order, one per relative generator.
    pub fn proj_bundles(&self) -> Vec<&SplitBundle> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::ProjBundle(b) => Some(b),
                _ => None,
            })
            .collect()
    }

    /// `∫_space c`: ambient integration against `c_top` of the normal bundle.
    pub fn integrate(&self, c: &ChowClass) -> BigRational {
        (c * &self.top_normal).integrate()
    }

    pub fn line_class(&self, degrees: &[i64]) -> ChowClass {
        ChowClass::linear(&self.ring, degrees)
    }

    /// Sufficient ampleness test for a line bundle on the ambient tower.
    ///
    /// On `P(B)` (lines in `B`) the bundle `c·ξ + A` is ample iff `c > 0` and
    /// `B^∨ ⊗ A/c` is ample, i.e. `c·(-b_i) + A` is ample for every summand.
    /// On the base, ample means every degree positive. Ample on the ambient
    /// implies ample on every zero locus inside it.
    pub fn is_ample_on_ambient(&self, degrees: &[i64]) -> bool {
        let bundles = self.proj_bundles();
        let nbase = self.base_dims().len();
        fn rec(deg: &[i64], nbase: usize, bundles: &[&SplitBundle]) -> bool {
            let level = deg.len();
            if level == nbase {
                return deg.iter().all(|&d| d > 0);
            }
            let c = deg[level - 1];
            if c <= 0 {
                return false;
            }
            let below = &deg[..level - 1];
            bundles[level - 1 - nbase].summands.iter().all(|b| {
                let v: Vec<i64> = below.iter().zip(b).map(|(a, bi)| a - c * bi).collect();
                rec(&v, nbase, bundles)
            })
        }
        degrees.len() == self.num_generators() && rec(degrees, nbase, &bundles)
    }

    /// Whether `-K` is ample on the ambient tower (a sufficient Fano test).
    pub fn anticanonical_ample(&self) -> bool {
        let minus_k: Vec<i64> = self.canonical.iter().map(|d| -d).collect();
        self.is_ample_on_ambient(&minus_k)
    }
}

fn top_chern(ring: &Arc<ChowPresentation>, normal: &SplitBundle) -> ChowClass {
    let mut c = ChowClass::one(ring);
    for s in &normal.summands {
        c = &c * &ChowClass::linear(ring, s);
    }
    c
}

fn join(v: &[i64]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, " -> ")?;
            }
            match step {
                Step::Base(d) => {
                    let parts: Vec<String> = d.iter().map(|n| format!("P{n}")).collect();
                    write!(f, "{}", parts.join(" x "))?
                }
                Step::ProjBundle(b) => write!(f, "P({})", bundle_str(b))?,
                Step::ZeroLocus(b) => write!(f, "Z({})", bundle_str(b))?,
            }
        }
        Ok(())
    }
}

fn bundle_str(b: &SplitBundle) -> String {
    b.summands.iter().map(|s| format!("O({})", join(s))).collect::<Vec<_>>().join(" + ")
}

/// The named spaces of the Enriques construction.
///
/// Coordinates: `X = P(V₃) × P(V₃')` with classes `h1, h2`;
/// `F = O(2,0) ⊕ O(0,2)`, `E = O ⊗ W₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `P² × P²`.
    X,
    /// `Z(O(1,2,0) ⊕ O(1,0,2)) ⊂ P(W₃) × P(V₃) × P(V₃')`.
    Y,
    /// `Z(O_ξ(1)^{⊕3}) ⊂ P_X(F^∨)`, the Enriques surface.
    S,
    /// `Z(O_ξ(1) ⊠ O(1)) ⊂ P_X(F^∨) × P(W₃)`, the sixfold.
    T,
    /// `P_X(E) = X × P²`.
    PE,
    /// `P_X(F^∨)`.
    PFdual,
}

impl Preset {
    pub const ALL: [Preset; 6] = [Preset::X, Preset::Y, Preset::S, Preset::T, Preset::PE, Preset::PFdual];

    pub fn name(self) -> &'static str {
        match self {
            Preset::X => "X",
            Preset::Y => "Y",
            Preset::S => "S",
            Preset::T => "T",
            Preset::PE => "PE",
            Preset::PFdual => "PFdual",
        }
    }

    /// Number of Chow generators of the preset's ambient tower.
    pub fn num_generators(self) -> usize {
        match self {
            Preset::X => 2,
            Preset::Y | Preset::S | Preset::PE | Preset::PFdual => 3,
            Preset::T => 4,
        }
    }

    /// Whether the variety is Fano.
    pub fn is_fano(self) -> bool {
        !matches!(self, Preset::S)
    }

    pub fn build(self) -> Space {
        let x = || Space::build_base(&[2, 2]).expect("valid base");
        let fdual = SplitBundle::new(vec![vec![-2, 0], vec![0, -2]]);
        let built = match self {
            Preset::X => Ok(x()),
            Preset::Y => Space::build_base(&[2, 2, 2])
                .and_then(|s| s.cut_zero_locus(&SplitBundle::new(vec![vec![1, 2, 0], vec![1, 0, 2]]))),
            Preset::PE => x().add_proj_bundle(&SplitBundle::trivial(3, 2)),
            Preset::PFdual => x().add_proj_bundle(&fdual),
            Preset::S => x()
                .add_proj_bundle(&fdual)
                .and_then(|s| s.cut_zero_locus(&SplitBundle::new(vec![vec![0, 0, 1]; 3]))),
            Preset::T => Space::build_base(&[2, 2, 2])
                .and_then(|s| s.add_proj_bundle(&fdual.padded(3)))
                .and_then(|s| s.cut_zero_locus(&SplitBundle::new(vec![vec![0, 0, 1, 1]]))),
        };
        built.expect("preset towers are well formed")
    }
}

impl FromStr for Preset {
    type Err = TowerError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| TowerError::UnknownPreset(s.to_string()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
