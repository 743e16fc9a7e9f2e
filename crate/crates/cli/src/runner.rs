//! Executes a parsed script against the core library.

use std::collections::HashMap;
use std::time::Instant;

use chowkit_core::fforacle::{self, jacobian_sample, Locus, MorphismMatrix, OracleConfig};
use chowkit_core::invariants::{chi, chi_y, degree, euler_number, h0_via_koszul};
use chowkit_core::{Space, SplitBundle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ast::*;
use crate::report::{Entry, Provenance, Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("statement {index} (line {line}): {message}")]
pub struct RunError {
    pub index: usize,
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub p: u32,
    pub budget: u64,
    /// Treat uncertified `h⁰` values as failures.
    pub strict: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 42, p: 3, budget: fforacle::DEFAULT_BUDGET, strict: false }
    }
}

#[derive(Default)]
struct State {
    spaces: HashMap<String, Space>,
    /// Bundles with the space they were declared on.
    bundles: HashMap<String, (String, SplitBundle)>,
    current: Option<String>,
}

const MIN_GENERIC_RATE: f64 = 0.9;

pub fn run(script: &Script, opts: &RunOptions) -> Result<Report, RunError> {
    let start = Instant::now();
    let mut report = Report::new(opts.seed);
    let mut state = State::default();
    for (index, located) in script.statements.iter().enumerate() {
        let err = |message: String| RunError { index, line: located.line, message };
        execute(index, located, &mut state, &mut report, opts).map_err(err)?;
    }
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn space<'s>(state: &'s State, name: &str) -> Result<&'s Space, String> {
    state.spaces.get(name).ok_or_else(|| format!("undeclared space `{name}`"))
}

fn resolve_line(space: &Space, line: &LineExpr) -> Result<Vec<i64>, String> {
    let n = space.num_generators();
    match line {
        LineExpr::Trivial => Ok(vec![0; n]),
        LineExpr::Canonical { sign } => Ok(space.canonical().iter().map(|d| d * sign).collect()),
        LineExpr::Degrees(d) if d.len() == n => Ok(d.clone()),
        LineExpr::Degrees(d) => Err(format!("degree vector has {} entries, expected {n}", d.len())),
        LineExpr::Generator { name, degree } => {
            let idx = space.ring().generator_index(name).ok_or_else(|| format!("no generator `{name}`"))?;
            let mut v = vec![0; n];
            v[idx] = *degree;
            Ok(v)
        }
    }
}

fn resolve_bundle(state: &State, space: &Space, expr: &BundleExpr) -> Result<SplitBundle, String> {
    let n = space.num_generators();
    let mut summands = Vec::new();
    for term in &expr.terms {
        let part: Vec<Vec<i64>> = match &term.atom {
            Atom::Line(l) => vec![resolve_line(space, l)?],
            Atom::Named(b) | Atom::Dual(b) => {
                let (_, bundle) = state.bundles.get(b).ok_or_else(|| format!("undeclared bundle `{b}`"))?;
                let bundle = if matches!(term.atom, Atom::Dual(_)) { bundle.dual() } else { bundle.clone() };
                if bundle.summands.first().is_some_and(|s| s.len() > n) {
                    return Err(format!("bundle `{b}` has more generators than the target space"));
                }
                bundle.padded(n).summands
            }
        };
        for _ in 0..term.copies {
            summands.extend(part.iter().cloned());
        }
    }
    Ok(SplitBundle::new(summands))
}

fn strs<T: ToString>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn execute(index: usize, located: &Located, state: &mut State, report: &mut Report, opts: &RunOptions) -> Result<(), String> {
    let line = located.line;
    let entry = |subject: &str, name: String, value: Value, provenance: Provenance, t: Instant| Entry {
        statement: index,
        line,
        subject: subject.to_string(),
        name,
        value,
        provenance,
        seed: None,
        passed: None,
        runtime_ms: t.elapsed().as_millis() as u64,
    };
    match &located.stmt {
        Statement::Base { name, dims } => {
            let s = Space::build_base(dims).map_err(|e| e.to_string())?;
            declare(state, name, s);
        }
        Statement::Bundle { name, over, expr } => {
            let ctx = over.clone().or_else(|| state.current.clone()).ok_or("no space declared")?;
            let s = space(state, &ctx)?;
            let b = resolve_bundle(state, s, expr)?;
            state.bundles.insert(name.clone(), (ctx, b));
        }
        Statement::Proj { name, over, expr } => {
            let ctx = match over {
                Some(s) => s.clone(),
                None => implicit_context(state, expr)?,
            };
            let base = space(state, &ctx)?;
            let b = resolve_bundle(state, base, expr)?;
            let s = base.add_proj_bundle(&b).map_err(|e| e.to_string())?;
            declare(state, name, s);
        }
        Statement::Zero { name, over, expr } => {
            let ambient = space(state, over)?;
            let b = resolve_bundle(state, ambient, expr)?;
            let s = ambient.cut_zero_locus(&b).map_err(|e| e.to_string())?;
            report.assume(format!("{name}: zero locus of a general section, assumed smooth of the expected dimension"));
            for w in s.warnings() {
                report.warnings.push(format!("{name}: {w}"));
            }
            declare(state, name, s);
        }
        Statement::Preset { name, preset } => {
            let s = preset.build();
            if s.has_zero_locus() {
                report.assume(format!("{name}: zero locus of a general section, assumed smooth of the expected dimension"));
            }
            declare(state, name, s);
        }
        Statement::Query { space: name, items } => {
            let s = space(state, name)?.clone();
            for item in items {
                let t = Instant::now();
                let label = item.to_string();
                let e = match item {
                    QueryItem::Dim => entry(name, label, Value::String(s.dim().to_string()), Provenance::Exact, t),
                    QueryItem::Canonical => entry(name, label, strs(s.canonical()), Provenance::Exact, t),
                    QueryItem::Euler => {
                        let v = euler_number(&s).map_err(|e| e.to_string())?;
                        entry(name, label, Value::String(v.to_string()), Provenance::Exact, t)
                    }
                    QueryItem::Chiy => {
                        let v = chi_y(&s).map_err(|e| e.to_string())?;
                        entry(name, label, strs(&v.chi_p), Provenance::Exact, t)
                    }
                    QueryItem::Fano => {
                        let ample = s.anticanonical_ample();
                        // Ampleness on the ambient is sufficient but not necessary.
                        let prov = if ample { Provenance::Certified } else { Provenance::Uncertified };
                        entry(name, label, Value::Bool(ample), prov, t)
                    }
                    QueryItem::Degree(l) => {
                        let v = degree(&s, &resolve_line(&s, l)?).map_err(|e| e.to_string())?;
                        entry(name, label, Value::String(v.to_string()), Provenance::Exact, t)
                    }
                    QueryItem::Chi(l) => {
                        let v = chi(&s, &resolve_line(&s, l)?).map_err(|e| e.to_string())?;
                        entry(name, label, Value::String(v.to_string()), Provenance::Exact, t)
                    }
                    QueryItem::H0(l) => {
                        let r = h0_via_koszul(&s, &resolve_line(&s, l)?).map_err(|e| e.to_string())?;
                        if !r.certified {
                            let msg = format!("{name}: {label} = {} is χ, not a certified h⁰", r.value);
                            if opts.strict {
                                report.failures.push(msg);
                            } else {
                                report.warnings.push(msg);
                            }
                        }
                        let prov = if r.certified { Provenance::Certified } else { Provenance::Uncertified };
                        let mut e = entry(name, label, Value::String(r.value.to_string()), prov, t);
                        if opts.strict {
                            e.passed = Some(r.certified);
                        }
                        e
                    }
                };
                report.results.push(e);
            }
        }
        Statement::FfCheck(check) => ffcheck(index, line, check, report, opts)?,
    }
    Ok(())
}

fn declare(state: &mut State, name: &str, s: Space) {
    state.spaces.insert(name.to_string(), s);
    state.current = Some(name.to_string());
}

fn implicit_context(state: &State, expr: &BundleExpr) -> Result<String, String> {
    // `proj(F)` projectivizes F over the space F was declared on.
    if let [BundleTerm { atom: Atom::Named(b) | Atom::Dual(b), copies: 1 }] = expr.terms.as_slice() {
        if let Some((home, _)) = state.bundles.get(b) {
            return Ok(home.clone());
        }
    }
    state.current.clone().ok_or_else(|| "no space declared".to_string())
}

fn ffcheck(index: usize, line: usize, check: &FfCheck, report: &mut Report, opts: &RunOptions) -> Result<(), String> {
    let t = Instant::now();
    let p = check.p.unwrap_or(opts.p);
    let seed = check.seed.unwrap_or(opts.seed);
    let seeds = check.seeds.unwrap_or(1);
    let cfg = OracleConfig { jacobian_trials: check.trials.unwrap_or(100), budget: opts.budget, ..OracleConfig::default() };
    let summary = fforacle::run_suite(p, seed..seed + seeds, &cfg).map_err(|e| e.to_string())?;
    report.assume("finite-field checks: reduction mod p of a uniformly random instance stands in for a general morphism");
    let kinds: Vec<FfKind> = if check.checks.is_empty() { FfKind::ALL.to_vec() } else { check.checks.clone() };
    for kind in kinds {
        let (value, passed) = match kind {
            FfKind::BlowupIdentity => (
                json!({"instances_with_n0_zero": summary.blowup_identity_checked.to_string(), "holds": summary.blowup_identity_all}),
                summary.blowup_identity_all && summary.blowup_identity_checked > 0,
            ),
            FfKind::Stratified => (
                json!({"instances": summary.instances_drawn.to_string(), "holds": summary.stratified_identity_all, "fibre_count_agrees": summary.fibre_count_all}),
                summary.stratified_identity_all && summary.fibre_count_all,
            ),
            FfKind::Jacobian => {
                let accepted: Vec<_> = summary.draws.iter().filter(|d| d.generic).map(|d| d.accepted()).collect();
                let checked: u64 = accepted.iter().map(|a| a.jacobian_y.checked + a.jacobian_d1.checked).sum();
                // Negative control: rows x0²·a and y0²·a make Y singular.
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let degenerate = MorphismMatrix::degenerate_enriques(p, &mut rng);
                let control = jacobian_sample(&degenerate, Locus::Y, cfg.jacobian_trials, &mut rng, cfg.budget)
                    .map_err(|e| e.to_string())?;
                (
                    json!({"generic_instances": accepted.len().to_string(), "points_checked": checked.to_string(),
                           "degenerate_control_singular_hits": control.singular_hits.to_string()}),
                    !accepted.is_empty() && control.singular_hits > 0,
                )
            }
            FfKind::Generic => (
                json!({"seeds": seeds.to_string(), "generic_rate": summary.generic_rate, "first_draw_rate": summary.first_draw_rate,
                       "instances_drawn": summary.instances_drawn.to_string()}),
                summary.generic_rate >= MIN_GENERIC_RATE,
            ),
        };
        if !passed {
            report.failures.push(format!("ffcheck p={p} seed={seed}: {} failed", kind.keyword()));
        }
        report.results.push(Entry {
            statement: index,
            line,
            subject: "ffcheck".into(),
            name: format!("{}(p={p})", kind.keyword()),
            value,
            provenance: Provenance::Stochastic,
            seed: Some(seed),
            passed: Some(passed),
            runtime_ms: t.elapsed().as_millis() as u64,
        });
    }
    Ok(())
}
