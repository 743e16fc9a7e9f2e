//! Parser round trips, error locations and runner determinism.

use chowkit::report::Provenance;
use chowkit::{parse, run, RunOptions};
use proptest::prelude::*;

fn degrees(n: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(-2i64..=3, n).prop_map(|v| format!("O({})", v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")))
}

fn line(n: usize) -> impl Strategy<Value = String> {
    prop_oneof![Just("O".to_string()), Just("K".to_string()), Just("-K".to_string()), degrees(n)]
}

/// A well-formed script over a two-factor base with a projective bundle on top.
fn script() -> impl Strategy<Value = String> {
    (1u32..=3, 1u32..=3, prop::collection::vec(degrees(2), 1..=3), 1u32..=2, line(3), line(3), any::<bool>(), 2u64..=9)
        .prop_map(|(a, b, summands, copies, l1, l2, dual, seed)| {
            let bundle = summands.join(" + ");
            let atom = if dual { "dual(F)" } else { "F" };
            format!(
                "# generated\nbase X = P{a} * P{b}\nbundle F = {bundle} + O(1,1)^{copies}\n\
                 space P = proj({atom})\nquery P dim euler chi({l1}) degree({l2}) h0(O{{xi}}(1))\n\
                 query X canonical\nffcheck p=3 seed={seed} seeds=1 stratified\n"
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_fixpoint(text in script()) {
        let first = parse(&text).unwrap();
        let printed = first.to_string();
        let second = parse(&printed).unwrap();
        let strip = |s: &chowkit::ast::Script| s.statements.iter().map(|l| l.stmt.clone()).collect::<Vec<_>>();
        prop_assert_eq!(strip(&first), strip(&second));
        prop_assert_eq!(second.to_string(), printed);
    }

    #[test]
    fn parser_never_panics(text in "\\PC{0,80}") {
        let _ = parse(&text);
    }
}

#[test]
fn errors_carry_locations() {
    let cases = [
        ("base P2 * P2\nbundle F = O(2,0,0)\n", (2, 12)),
        ("query Y euler\n", (1, 7)),
        ("base P2 * P2\nbundle F = O(1,0) $ O(0,1)\n", (2, 19)),
        ("base P2 * P2\nspace P = proj(G)\n", (2, 16)),
    ];
    for (text, (line, col)) in cases {
        let e = parse(text).unwrap_err();
        assert_eq!((e.line, e.col), (line, col), "{text:?}: {e}");
    }
}

#[test]
fn runs_are_deterministic_given_the_seed() {
    let text = "base X = P2 * P2\nbundle F = O(2,0) + O(0,2)\nspace P = proj(dual(F))\n\
                space S = zero(P, O{xi}(1)^3)\nquery S euler chi(O)\nffcheck p=2 seed=7 seeds=2\n";
    let script = parse(text).unwrap();
    let opts = RunOptions::default();
    let mut a = run(&script, &opts).unwrap();
    let mut b = run(&script, &opts).unwrap();
    for r in [&mut a, &mut b] {
        r.runtime_ms = 0;
        r.results.iter_mut().for_each(|e| e.runtime_ms = 0);
    }
    assert_eq!(a, b);
    assert_eq!(a.find("S", "euler").unwrap().value, "12");
    assert!(a.failures.is_empty(), "{:?}", a.failures);
}

#[test]
fn strict_mode_fails_uncertified_sections() {
    // The Koszul resolution leaves χ = −1 here, which cannot be an h⁰.
    let text = "base Z = P2 * P2 * P2\nspace Y = zero(Z, O(1,2,0) + O(1,0,2))\nquery Y h0(O(1,-1,0)) h0(-K)\n";
    let script = parse(text).unwrap();
    let relaxed = run(&script, &RunOptions::default()).unwrap();
    let strict = run(&script, &RunOptions { strict: true, ..RunOptions::default() }).unwrap();
    let first = &relaxed.results[0];
    assert_eq!(first.provenance, Provenance::Uncertified);
    assert_eq!(first.value, "-1");
    assert_eq!(relaxed.results[1].provenance, Provenance::Certified);
    assert!(relaxed.failures.is_empty());
    assert_eq!(relaxed.warnings.len(), 1);
    assert_eq!(strict.failures.len(), 1);
    assert_eq!((strict.results[0].passed, strict.results[1].passed), (Some(false), Some(true)));
}
