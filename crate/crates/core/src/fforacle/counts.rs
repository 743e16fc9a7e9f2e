//! Point counts of `X`, `D₁(φ)` and `Y`, the counting identities relating
//! them, and Jacobian smoothness sampling.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::field::{self, projective_count};
use super::forms::MorphismMatrix;
use super::points::ProductPoints;
use super::OracleError;

/// `N_ρ`: number of points of `X(F_p)` where `φ` has rank `ρ`, `ρ = 0..=f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub p: u32,
    pub e: usize,
    pub f: usize,
    pub counts: Vec<u64>,
}

impl RankProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `|D_r(φ)(F_p)| = Σ_{ρ ≤ r} N_ρ`.
    pub fn degeneracy_count(&self, r: usize) -> u64 {
        self.counts.iter().take(r + 1).sum()
    }

    /// `|D_{f-1}(φ)(F_p)|`.
    pub fn d1(&self) -> u64 {
        if self.f == 0 {
            0
        } else {
            self.degeneracy_count(self.f - 1)
        }
    }

    pub fn n0(&self) -> u64 {
        self.counts[0]
    }
}

/// Partitioned over disjoint index ranges and merged by addition.
pub fn rank_profile(m: &MorphismMatrix, budget: u64) -> Result<RankProfile, OracleError> {
    let pts = ProductPoints::new(&m.dims, m.p, budget)?;
    let f = m.f();
    let counts = (0..pts.len())
        .into_par_iter()
        .fold(
            || vec![0u64; f + 1],
            |mut acc, i| {
                acc[m.rank_at(&pts.get(i))] += 1;
                acc
            },
        )
        .reduce(|| vec![0u64; f + 1], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    Ok(RankProfile { p: m.p, e: m.e(), f, counts })
}

/// `|Y(F_p)|` by enumerating `P^{e-1} × X` and testing `φ(x)·w = 0`, i.e.
/// the `f` equations of multidegree `(1, row degree)`.
pub fn count_y_direct(m: &MorphismMatrix, budget: u64) -> Result<u64, OracleError> {
    let x_pts = ProductPoints::new(&m.dims, m.p, budget)?;
    let w_pts = ProductPoints::new(&[m.e() as u32 - 1], m.p, budget)?;
    let ambient = x_pts.len().saturating_mul(w_pts.len());
    if ambient > budget {
        return Err(OracleError::BudgetExceeded { points: ambient, budget });
    }
    let p = m.p;
    Ok((0..x_pts.len())
        .into_par_iter()
        .map(|i| {
            let x = x_pts.get(i);
            w_pts
                .iter()
                .filter(|w| {
                    m.entries.iter().all(|row| {
                        row.iter().zip(w).fold(0, |acc, (form, &wj)| field::add(acc, field::mul(form.eval(&x), wj, p), p)) == 0
                    })
                })
                .count() as u64
        })
        .sum())
}

/// `|Y(F_p)| = Σ_ρ N_ρ · |P^{e-1-ρ}(F_p)|`: the fibre over `x` is `P(ker φ_x)`.
pub fn count_y_via_fibers(profile: &RankProfile) -> u64 {
    profile
        .counts
        .iter()
        .enumerate()
        .map(|(rho, n)| n * projective_count(profile.e as i64 - 1 - rho as i64, profile.p))
        .sum()
}

/// The blow-up identity `|Y| = |X| + p·|D₁|`, meaningful when `N₀ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlowupCheck {
    pub applicable: bool,
    pub holds: bool,
}

pub fn blowup_identity(profile: &RankProfile, y_count: u64) -> BlowupCheck {
    let rhs = profile.total() + profile.p as u64 * profile.d1();
    BlowupCheck { applicable: profile.n0() == 0, holds: y_count == rhs }
}

/// `|Y| = Σ_{i=0}^{f} N_{f-i} · |P^{e-f+i-1}|` from supplied counts.
pub fn stratified_identity_from_counts(y_count: u64, profile: &RankProfile) -> bool {
    let (e, f) = (profile.e as i64, profile.f as i64);
    let rhs: u64 = (0..=f)
        .map(|i| profile.counts[(f - i) as usize] * projective_count(e - f + i - 1, profile.p))
        .sum();
    y_count == rhs
}

/// Enumerates both sides of the stratified-bundle count.
pub fn stratified_count_identity(m: &MorphismMatrix, budget: u64) -> Result<bool, OracleError> {
    let profile = rank_profile(m, budget)?;
    let y = count_y_direct(m, budget)?;
    Ok(stratified_identity_from_counts(y, &profile))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Locus {
    /// `Y ⊂ P^{e-1} × X`, cut by `f` equations.
    Y,
    /// `D_{f-1}(φ) ⊂ X`, cut by the maximal minors.
    D1,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianReport {
    pub locus: Locus,
    pub locus_points: u64,
    pub checked: u64,
    /// Every rational point was checked rather than a sample.
    pub exhaustive: bool,
    pub smooth_hits: u64,
    pub singular_hits: u64,
}

impl JacobianReport {
    pub fn empty_locus(&self) -> bool {
        self.locus_points == 0
    }
}

fn determinant(mut a: Vec<Vec<u32>>, p: u32) -> u32 {
    let n = a.len();
    let mut det = 1u32;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            a.swap(pivot, col);
            det = field::sub(0, det, p);
        }
        det = field::mul(det, a[col][col], p);
        let inv = field::inv(a[col][col], p);
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest.iter_mut() {
            let factor = field::mul(row[col], inv, p);
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = field::sub(*x, field::mul(factor, y, p), p);
            }
        }
    }
    det
}

fn column_subsets(e: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if e < k {
        return vec![];
    }
    let mut out = column_subsets(e - 1, k);
    for mut s in column_subsets(e - 1, k - 1) {
        s.push(e - 1);
        out.push(s);
    }
    out
}

/// Jacobian of the defining equations at `pt`; rows are equations.
fn jacobian(m: &MorphismMatrix, locus: Locus, pt: &[u32]) -> Vec<Vec<u32>> {
    let p = m.p;
    match locus {
        Locus::Y => {
            let e = m.e();
            let (w, x) = pt.split_at(e);
            m.entries
                .iter()
                .map(|row| {
                    let mut g: Vec<u32> = row.iter().map(|form| form.eval(x)).collect();
                    let mut gx = vec![0u32; x.len()];
                    for (form, &wj) in row.iter().zip(w) {
                        for (acc, d) in gx.iter_mut().zip(form.gradient(x)) {
                            *acc = field::add(*acc, field::mul(wj, d, p), p);
                        }
                    }
                    g.extend(gx);
                    g
                })
                .collect()
        }
        Locus::D1 => {
            let f = m.f();
            let vals = m.eval(pt);
            let grads: Vec<Vec<Vec<u32>>> =
                m.entries.iter().map(|row| row.iter().map(|form| form.gradient(pt)).collect()).collect();
            // ∇det A = Σ_{i,j} C_{ij} ∇A_{ij} with C the cofactor matrix.
            column_subsets(m.e(), f)
                .into_iter()
                .map(|cols| {
                    let mut g = vec![0u32; pt.len()];
                    for (i, grad_row) in grads.iter().enumerate().take(f) {
                        for (jj, &j) in cols.iter().enumerate() {
                            let sub: Vec<Vec<u32>> = (0..f)
                                .filter(|&r| r != i)
                                .map(|r| cols.iter().enumerate().filter(|&(c, _)| c != jj).map(|(_, &c)| vals[r][c]).collect())
                                .collect();
                            let mut cof = determinant(sub, p);
                            if (i + jj) % 2 == 1 {
                                cof = field::sub(0, cof, p);
                            }
                            if cof == 0 {
                                continue;
                            }
                            for (acc, d) in g.iter_mut().zip(&grad_row[j]) {
                                *acc = field::add(*acc, field::mul(cof, *d, p), p);
                            }
                        }
                    }
                    g
                })
                .collect()
        }
    }
}

/// Rational points of `Y` or `D₁`.
pub fn locus_points(m: &MorphismMatrix, locus: Locus, budget: u64) -> Result<Vec<Vec<u32>>, OracleError> {
    let x_pts = ProductPoints::new(&m.dims, m.p, budget)?;
    match locus {
        Locus::D1 => Ok(x_pts.iter().filter(|x| m.rank_at(x) < m.f()).collect()),
        Locus::Y => {
            let w_pts = ProductPoints::new(&[m.e() as u32 - 1], m.p, budget)?;
            let mut out = Vec::new();
            for x in x_pts.iter() {
                let vals = m.eval(&x);
                for w in w_pts.iter() {
                    let zero = vals.iter().all(|row| {
                        row.iter().zip(&w).fold(0, |acc, (&a, &b)| field::add(acc, field::mul(a, b, m.p), m.p)) == 0
                    });
                    if zero {
                        let mut pt = w.clone();
                        pt.extend_from_slice(&x);
                        out.push(pt);
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Checks the Jacobian rank at up to `trials` rational points of the locus.
///
/// The expected rank is the codimension: `f` for `Y`, `e - f + 1` for
/// `D₁`. By the Euler relations the homogeneous Jacobian has the same rank
/// as the Jacobian in any affine chart.
pub fn jacobian_sample(
    m: &MorphismMatrix,
    locus: Locus,
    trials: u64,
    rng: &mut impl Rng,
    budget: u64,
) -> Result<JacobianReport, OracleError> {
    if trials == 0 {
        return Err(OracleError::Precondition("jacobian_sample needs at least one trial".into()));
    }
    let expected = match locus {
        Locus::Y => m.f(),
        Locus::D1 => m.e() - m.f() + 1,
    };
    let pts = locus_points(m, locus, budget)?;
    let exhaustive = pts.len() as u64 <= trials;
    let chosen: Vec<usize> = if exhaustive {
        (0..pts.len()).collect()
    } else {
        rand::seq::index::sample(rng, pts.len(), trials as usize).into_vec()
    };
    let singular = chosen.iter().filter(|&&i| field::rank(jacobian(m, locus, &pts[i]), m.p) < expected).count() as u64;
    Ok(JacobianReport {
        locus,
        locus_points: pts.len() as u64,
        checked: chosen.len() as u64,
        exhaustive,
        smooth_hits: chosen.len() as u64 - singular,
        singular_hits: singular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fforacle::points::DEFAULT_BUDGET;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn instance(p: u32, seed: u64) -> MorphismMatrix {
        MorphismMatrix::random_enriques(p, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn profiles_sum_to_ambient() {
        for p in [2, 3, 5] {
            let m = instance(p, 1);
            let prof = rank_profile(&m, DEFAULT_BUDGET).unwrap();
            assert_eq!(prof.total(), projective_count(2, p).pow(2));
        }
    }

    #[test]
    fn direct_count_matches_fibres() {
        for p in [2, 3] {
            for seed in 0..5 {
                let m = instance(p, seed);
                let prof = rank_profile(&m, DEFAULT_BUDGET).unwrap();
                let y = count_y_direct(&m, DEFAULT_BUDGET).unwrap();
                assert_eq!(y, count_y_via_fibers(&prof));
                assert!(stratified_identity_from_counts(y, &prof));
                let b = blowup_identity(&prof, y);
                if b.applicable {
                    assert!(b.holds);
                    assert_eq!((y - prof.total()) % p as u64, 0);
                }
                assert_eq!(y as usize, locus_points(&m, Locus::Y, DEFAULT_BUDGET).unwrap().len());
            }
        }
    }

    #[test]
    fn zero_matrix() {
        let m = MorphismMatrix::zero(3, &[2, 2], vec![vec![2, 0], vec![0, 2]], 3);
        let prof = rank_profile(&m, DEFAULT_BUDGET).unwrap();
        assert_eq!(prof.n0(), 169);
        let y = count_y_direct(&m, DEFAULT_BUDGET).unwrap();
        assert_eq!(y, 169 * 13);
        assert!(stratified_count_identity(&m, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn zero_column_gives_nonempty_fibres() {
        let mut m = instance(3, 9);
        for row in m.entries.iter_mut() {
            row[0].terms.clear();
        }
        let prof = rank_profile(&m, DEFAULT_BUDGET).unwrap();
        assert!(count_y_direct(&m, DEFAULT_BUDGET).unwrap() >= prof.total());
    }

    #[test]
    fn corrupted_count_is_caught() {
        let m = instance(2, 3);
        let mut prof = rank_profile(&m, DEFAULT_BUDGET).unwrap();
        let y = count_y_direct(&m, DEFAULT_BUDGET).unwrap();
        assert!(stratified_identity_from_counts(y, &prof));
        prof.counts[2] += 1;
        assert!(!stratified_identity_from_counts(y, &prof));
    }

    #[test]
    fn jacobian_on_degenerate_instance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = MorphismMatrix::degenerate_enriques(5, &mut rng);
        let r = jacobian_sample(&m, Locus::Y, 200, &mut rng, DEFAULT_BUDGET).unwrap();
        assert!(r.singular_hits > 0, "{r:?}");
        assert!(jacobian_sample(&m, Locus::Y, 0, &mut rng, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(vec![vec![1, 2], vec![3, 4]], 7), 5);
        assert_eq!(determinant(vec![vec![0, 1], vec![1, 0]], 5), 4);
        assert_eq!(column_subsets(3, 2).len(), 3);
    }
}
