//! Brute-force checks over small prime fields: random bundle maps
//! `φ: O³ → O(2,0) ⊕ O(0,2)` on `P² × P²`, exact point counts of `X`,
//! `D₁(φ)` and `Y = {(w, x) : φ(x)·w = 0}`, the counting identities linking
//! them, and Jacobian sampling for smoothness.

mod counts;
mod field;
mod forms;
mod instance;
mod points;

pub use counts::{
    blowup_identity, count_y_direct, count_y_via_fibers, jacobian_sample, locus_points, rank_profile,
    stratified_count_identity, stratified_identity_from_counts, BlowupCheck, JacobianReport, Locus, RankProfile,
};
pub use field::{is_prime, projective_count};
pub use forms::{monomials, MorphismMatrix, MultiForm};
pub use instance::{from_text, to_text};
pub use points::{enumerate_points, ProductPoints, DEFAULT_BUDGET};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{points} points exceed the budget of {budget}")]
    BudgetExceeded { points: u64, budget: u64 },
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("instance line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Settings shared by [`draw_generic`] and [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub retry_cap: u32,
    pub jacobian_trials: u64,
    pub budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { retry_cap: 100, jacobian_trials: 100, budget: DEFAULT_BUDGET }
    }
}

/// Everything measured on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub p: u32,
    pub seed: u64,
    pub attempt: u32,
    pub points_x: u64,
    pub rank_profile: Vec<u64>,
    pub d1_points: u64,
    pub y_direct: u64,
    pub y_fibers: u64,
    pub blowup: BlowupCheck,
    pub stratified_identity: bool,
    pub jacobian_y: JacobianReport,
    pub jacobian_d1: JacobianReport,
}

impl InstanceReport {
    /// `N₀ = 0` and no singular Jacobian sample on `Y` or `D₁`.
    pub fn generic(&self) -> bool {
        self.rank_profile[0] == 0 && self.jacobian_y.singular_hits == 0 && self.jacobian_d1.singular_hits == 0
    }

    fn failure_reason(&self) -> String {
        let mut reasons = Vec::new();
        if self.rank_profile[0] != 0 {
            reasons.push(format!("N0 = {}", self.rank_profile[0]));
        }
        if self.jacobian_y.singular_hits != 0 {
            reasons.push(format!("{} singular points on Y", self.jacobian_y.singular_hits));
        }
        if self.jacobian_d1.singular_hits != 0 {
            reasons.push(format!("{} singular points on D1", self.jacobian_d1.singular_hits));
        }
        reasons.join(", ")
    }
}

pub fn analyze(
    m: &MorphismMatrix,
    seed: u64,
    attempt: u32,
    rng: &mut ChaCha8Rng,
    cfg: &OracleConfig,
) -> Result<InstanceReport, OracleError> {
    let profile = rank_profile(m, cfg.budget)?;
    let y_direct = count_y_direct(m, cfg.budget)?;
    Ok(InstanceReport {
        p: m.p,
        seed,
        attempt,
        points_x: profile.total(),
        rank_profile: profile.counts.clone(),
        d1_points: profile.d1(),
        y_direct,
        y_fibers: count_y_via_fibers(&profile),
        blowup: blowup_identity(&profile, y_direct),
        stratified_identity: stratified_identity_from_counts(y_direct, &profile),
        jacobian_y: jacobian_sample(m, Locus::Y, cfg.jacobian_trials, rng, cfg.budget)?,
        jacobian_d1: jacobian_sample(m, Locus::D1, cfg.jacobian_trials, rng, cfg.budget)?,
    })
}

/// Outcome of drawing instances from one seed until a generic one appears.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericDraw {
    pub p: u32,
    pub seed: u64,
    /// Every instance drawn, rejected ones included, in order.
    pub attempts: Vec<InstanceReport>,
    pub generic: bool,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub instance: MorphismMatrix,
}

impl GenericDraw {
    pub fn first_draw_generic(&self) -> bool {
        self.attempts.first().is_some_and(|a| a.generic())
    }

    pub fn accepted(&self) -> &InstanceReport {
        self.attempts.last().expect("at least one attempt")
    }
}

/// Draws random instances from `ChaCha8Rng(seed)` until one is
/// generic or `retry_cap` redraws are spent; each rejection is logged.
pub fn draw_generic(p: u32, seed: u64, cfg: &OracleConfig) -> Result<GenericDraw, OracleError> {
    if !is_prime(p) {
        return Err(OracleError::NotPrime(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = Vec::new();
    let mut notes = Vec::new();
    for attempt in 0..=cfg.retry_cap {
        let m = MorphismMatrix::random_enriques(p, &mut rng);
        let report = analyze(&m, seed, attempt, &mut rng, cfg)?;
        let generic = report.generic();
        if !generic {
            let note = format!("p={p} seed={seed} attempt={attempt}: redrawn ({})", report.failure_reason());
            log::info!("{note}");
            notes.push(note);
        }
        attempts.push(report);
        if generic {
            return Ok(GenericDraw { p, seed, attempts, generic: true, notes, instance: m });
        }
        if attempt == cfg.retry_cap {
            let note = format!("p={p} seed={seed}: retry cap {} reached", cfg.retry_cap);
            log::warn!("{note}");
            notes.push(note);
            return Ok(GenericDraw { p, seed, attempts, generic: false, notes, instance: m });
        }
    }
    unreachable!("loop returns on its last iteration")
}

/// Aggregate over many seeds for one prime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeSummary {
    pub p: u32,
    pub seeds: Vec<u64>,
    pub instances_drawn: usize,
    /// Fraction of seeds whose draws reached a generic instance.
    pub generic_rate: f64,
    /// Fraction of seeds whose first draw was already generic.
    pub first_draw_rate: f64,
    /// Blow-up identity on every drawn instance with `N₀ = 0`.
    pub blowup_identity_all: bool,
    pub blowup_identity_checked: usize,
    /// Stratified count identity on every drawn instance.
    pub stratified_identity_all: bool,
    /// Direct and fibre-wise counts of `Y` agree on every drawn instance.
    pub fibre_count_all: bool,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub draws: Vec<GenericDraw>,
}

impl PrimeSummary {
    pub fn passes(&self, min_generic_rate: f64) -> bool {
        self.blowup_identity_all && self.stratified_identity_all && self.fibre_count_all && self.generic_rate >= min_generic_rate
    }
}

pub fn run_suite(p: u32, seeds: impl IntoIterator<Item = u64>, cfg: &OracleConfig) -> Result<PrimeSummary, OracleError> {
    let seeds: Vec<u64> = seeds.into_iter().collect();
    let draws = seeds.iter().map(|&s| draw_generic(p, s, cfg)).collect::<Result<Vec<_>, _>>()?;
    let all: Vec<&InstanceReport> = draws.iter().flat_map(|d| &d.attempts).collect();
    let n = draws.len().max(1) as f64;
    let applicable: Vec<_> = all.iter().filter(|a| a.blowup.applicable).collect();
    Ok(PrimeSummary {
        p,
        instances_drawn: all.len(),
        generic_rate: draws.iter().filter(|d| d.generic).count() as f64 / n,
        first_draw_rate: draws.iter().filter(|d| d.first_draw_generic()).count() as f64 / n,
        blowup_identity_all: applicable.iter().all(|a| a.blowup.holds),
        blowup_identity_checked: applicable.len(),
        stratified_identity_all: all.iter().all(|a| a.stratified_identity),
        fibre_count_all: all.iter().all(|a| a.y_direct == a.y_fibers),
        notes: draws.iter().flat_map(|d| d.notes.iter().cloned()).collect(),
        seeds,
        draws,
    })
}
