//! The fourteen acceptance criteria, each asserted directly against the core
//! library, plus end-to-end runs of the `chowkit` binary.

use std::path::PathBuf;
use std::process::Command;

use chowkit::report::Report;
use chowkit_core::fforacle::{run_suite, OracleConfig};
use chowkit_core::invariants::{
    chi, chi_y, degree, euler_number, expected_degeneracy_dim, fano_host_check, h0_via_koszul, section_space_dim,
    DegeneracyInstance, DegeneracyQuery, SectionModel,
};
use chowkit_core::ledger::{
    blowup_cohomology, blowup_hodge, fec_obstruction, sod_compose, threefold_exclusion, CohomologyLedger, FanoTable,
    HodgeDiamond, K0Summary, SodPart,
};
use chowkit_core::properties::run_properties;
use chowkit_core::{Preset, Space};
use num::BigInt;

fn verdict(id: u32, ok: bool, detail: String) {
    println!("criterion {id:>2}: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn criterion_01_euler_number_of_y() {
    let e = euler_number(&Preset::Y.build()).unwrap();
    verdict(1, e == 21.into(), format!("e(Y) = {e}"));
}

#[test]
fn criterion_02_anticanonical_degree_of_y() {
    let d = degree(&Preset::Y.build(), &[1, 1, 1]).unwrap();
    // Same integral on P2×P2×P2, computed in the ambient ring.
    let z = Space::build_base(&[2, 2, 2]).unwrap();
    let h = z.line_class(&[1, 1, 1]);
    let product = &(&(&(&h * &h) * &h) * &h) * &(&z.line_class(&[1, 2, 0]) * &z.line_class(&[1, 0, 2]));
    let ambient = z.integrate(&product);
    let oracle = 6 + 24 + 24 + 48;
    let ok = d == 102.into() && ambient == BigInt::from(oracle).into() && chowkit::suite::multinomial_degree_oracle().1 == oracle;
    verdict(2, ok, format!("(-K_Y)^4 = {d}, ambient integral {ambient}, multinomial {oracle}"));
}

#[test]
fn criterion_03_anticanonical_sections_of_y() {
    let r = h0_via_koszul(&Preset::Y.build(), &[1, 1, 1]).unwrap();
    verdict(3, r.value == 27.into() && r.certified, format!("h0 = {}, certified {}", r.value, r.certified));
}

#[test]
fn criterion_04_chi_y_of_y() {
    let p = chi_y(&Preset::Y.build()).unwrap().chi_p;
    // χ_p = Σ_q (−1)^q h^{p,q}; with only h^{p,p} nonzero this is (−1)^p h^{p,p}.
    let diamond = [1i64, 3, 13, 3, 1];
    let from_diamond: Vec<BigInt> = diamond.iter().enumerate().map(|(k, &h)| BigInt::from(if k % 2 == 0 { h } else { -h })).collect();
    verdict(4, p == ints(&[1, -3, 13, -3, 1]) && p == from_diamond, format!("chi_y(Y) = {p:?}"));
}

#[test]
fn criterion_05_blowup_of_p2xp2_along_enriques() {
    let x = CohomologyLedger::projective_product(&[2, 2]);
    let coh = blowup_cohomology(&x, &CohomologyLedger::enriques(), 2).unwrap();
    let hodge = blowup_hodge(&HodgeDiamond::projective_product(&[2, 2]), &HodgeDiamond::enriques(), 2).unwrap();
    let ranks = coh.free_ranks();
    let torsion: Vec<(usize, &Vec<String>)> =
        coh.groups.iter().enumerate().filter(|(_, g)| !g.torsion.is_empty()).map(|(k, g)| (k, &g.torsion)).collect();
    let ok = ranks == [1, 0, 3, 0, 13, 0, 3, 0, 1]
        && hodge.betti() == ranks
        && torsion.len() == 1
        && torsion[0].0 == 4
        && torsion[0].1 == &["Z/2".to_string()];
    verdict(5, ok, format!("ranks {ranks:?}, torsion {torsion:?}"));
}

#[test]
fn criterion_06_enriques_surface() {
    let s = Preset::S.build();
    let e = euler_number(&s).unwrap();
    let chi0 = chi(&s, &[0, 0, 0]).unwrap();
    let p = chi_y(&s).unwrap().chi_p;
    let d = HodgeDiamond::enriques();
    let mut alternating = 0i64;
    for a in 0..=2 {
        for b in 0..=2 {
            alternating += if (a + b) % 2 == 0 { 1 } else { -1 } * d.get(a, b) as i64;
        }
    }
    let ok = e == 12.into() && chi0 == 1.into() && p == ints(&[1, -10, 1]) && BigInt::from(alternating) == e;
    verdict(6, ok, format!("e = {e}, chi(O) = {chi0}, chi_y = {p:?}, Σ(−1)^(p+q) h^(p,q) = {alternating}"));
}

#[test]
fn criterion_07_expected_degeneracy_dimensions() {
    let m1 = expected_degeneracy_dim(&DegeneracyQuery::new(4, 3, 2, 1).unwrap());
    let m0 = expected_degeneracy_dim(&DegeneracyQuery::new(4, 3, 2, 0).unwrap());
    verdict(7, m1 == 2 && m0 == -2, format!("m_1 = {m1}, m_0 = {m0}"));
}

#[test]
fn criterion_08_section_space_models_agree() {
    let inst = DegeneracyInstance::enriques();
    let dims: Vec<BigInt> = SectionModel::ALL.iter().map(|&m| section_space_dim(m, &inst).unwrap()).collect();
    verdict(8, dims.len() == 4 && dims.iter().all(|d| *d == 36.into()), format!("{dims:?}"));
}

#[test]
fn criterion_09_fano_host() {
    let v = fano_host_check(4, 3, 2, &[-3, -3], &[0, 0], &[2, 2], false).unwrap();
    verdict(9, v.cond_a && v.cond_b && v.fano_host, format!("{v:?}"));
}

#[test]
fn criterion_10_k0_of_y() {
    let k = sod_compose(&[SodPart::Component(K0Summary::enriques()), SodPart::Exceptional(9)]);
    let ok = k.free_rank == 21 && k.torsion == ["Z/2"] && fec_obstruction(&k);
    verdict(10, ok, format!("{k:?}"));
}

#[test]
fn criterion_11_sixfold() {
    let e = euler_number(&Preset::T.build()).unwrap();
    let e_pf = euler_number(&Preset::PFdual.build()).unwrap();
    let pf = K0Summary::new(18, &[]);
    let sod = sod_compose(&[SodPart::Component(K0Summary::enriques()), SodPart::Component(pf.clone()), SodPart::Component(pf)]);
    let ok = e == 48.into() && e_pf == 18.into() && sod.free_rank == 48;
    verdict(11, ok, format!("e(T) = {e}, e(P_X(F^dual)) = {e_pf}, SOD rank {}", sod.free_rank));
}

#[test]
fn criterion_12_threefold_exclusion() {
    let r = threefold_exclusion(&FanoTable::builtin(), 12).unwrap();
    verdict(12, r.min_rho == 5 && r.families.len() == 8 && r.excluded, format!("rho ≥ {}, {} families", r.min_rho, r.families.len()));
}

#[test]
fn criterion_13_finite_field_cross_checks() {
    let cfg = OracleConfig::default();
    let mut details = Vec::new();
    let mut ok = true;
    for p in [2, 3, 5] {
        let s = run_suite(p, 0..20, &cfg).unwrap();
        ok &= s.seeds.len() >= 20
            && s.blowup_identity_all
            && s.blowup_identity_checked > 0
            && s.stratified_identity_all
            && s.fibre_count_all
            && s.generic_rate >= 0.9;
        details.push(format!("p={p}: generic {:.2}, blow-up checked {}", s.generic_rate, s.blowup_identity_checked));
    }
    verdict(13, ok, details.join("; "));
}

#[test]
fn criterion_14_property_suites() {
    let r = run_properties(1000, 2024);
    verdict(14, r.passed() && r.cases == 1000, format!("{} identities, failures {:?}", r.checks, r.failures.first()));
}

fn chowkit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chowkit"))
}

fn golden() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scripts/paper_instance.chow")
}

#[test]
fn check_paper_exits_zero() {
    let out = chowkit().arg("check-paper").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    println!("{text}");
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 14);
}

#[test]
fn eval_golden_script_as_json() {
    let out = chowkit().arg("eval").arg(golden()).args(["--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = Report::from_json(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let value = |name: &str| report.find("Y", name).unwrap().value.as_str().unwrap().to_string();
    assert_eq!(value("euler"), "21");
    assert_eq!(value("degree(-K)"), "102");
    assert_eq!(value("h0(-K)"), "27");
    assert!(report.results.iter().filter(|e| e.subject == "ffcheck").all(|e| e.seed.is_some() && e.passed == Some(true)));
    assert!(!report.assumptions.is_empty());
}

#[test]
fn parse_error_exits_two_with_location() {
    let dir = std::env::temp_dir().join(format!("chowkit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.chow");
    std::fs::write(&bad, "base P2 * P2\nbundle F = O(2,0,0)\n").unwrap();
    let out = chowkit().arg("eval").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2:12"));

    let empty = dir.join("empty.chow");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let out = chowkit().arg("eval").arg(&empty).args(["--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(Report::from_json(&String::from_utf8_lossy(&out.stdout)).unwrap().results.is_empty());

    let out = chowkit().args(["eval", "--format", "yaml"]).arg(&empty).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fmt_output_reparses_to_the_same_script() {
    let out = chowkit().arg("fmt").arg(golden()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let printed = String::from_utf8(out.stdout).unwrap();
    let original = chowkit::parse(&std::fs::read_to_string(golden()).unwrap()).unwrap();
    let reparsed = chowkit::parse(&printed).unwrap();
    let strip = |s: &chowkit::ast::Script| s.statements.iter().map(|l| l.stmt.clone()).collect::<Vec<_>>();
    assert_eq!(strip(&original), strip(&reparsed));
}

#[test]
fn ffcount_reports_counts_for_an_instance_file() {
    use chowkit_core::fforacle::{to_text, MorphismMatrix};
    use rand::SeedableRng;
    let dir = std::env::temp_dir().join(format!("chowkit-ffcount-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("phi.txt");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    std::fs::write(&path, to_text(&MorphismMatrix::random_enriques(3, &mut rng))).unwrap();
    let out = chowkit().arg("ffcount").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // |P2 × P2 (F_3)| = 13².
    assert_eq!(json["report"]["points_x"], 169);
    assert_eq!(json["report"]["y_direct"], json["report"]["y_fibers"]);

    std::fs::write(&path, "p 4\n").unwrap();
    assert_eq!(chowkit().arg("ffcount").arg(&path).output().unwrap().status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
