//! Acceptance suite: one test per criterion, each printing a pass/fail line.

use std::time::{Duration, Instant};

use cext::report::Report;
use cext::repro::{self, Params};

/// Prints the criterion line and returns the report on failure.
fn check(id: usize, name: &str, limit: Duration, r: &Report, extra: &[(&str, bool)], start: Instant) -> Result<(), String> {
    let elapsed = start.elapsed();
    let mut failed: Vec<String> = Vec::new();
    if r.get_bool("pass") != Some(true) {
        failed.push("pass".into());
    }
    failed.extend(extra.iter().filter(|(_, ok)| !ok).map(|(k, _)| k.to_string()));
    if elapsed > limit {
        failed.push(format!("runtime {:.1}s", elapsed.as_secs_f64()));
    }
    let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {name:<18} {verdict} ({:.2}s)", elapsed.as_secs_f64());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(format!("criterion {id} ({name}) failed on {failed:?}\n{r}"))
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// Brute-force `|H²(V4, Z₂)|` from normalized bar cochains with trivial action.
fn bar_h2_klein() -> usize {
    let mul = |x: usize, y: usize| x ^ y;
    let nz = [1usize, 2, 3];
    let cells: Vec<(usize, usize)> = nz.iter().flat_map(|&x| nz.iter().map(move |&y| (x, y))).collect();
    let f_of = |bits: usize, x: usize, y: usize| -> usize {
        if x == 0 || y == 0 {
            return 0;
        }
        let i = cells.iter().position(|&c| c == (x, y)).unwrap();
        (bits >> i) & 1
    };
    let mut cocycles = 0;
    for bits in 0..1usize << cells.len() {
        let ok = (0..4).all(|x| {
            (0..4).all(|y| (0..4).all(|z| (f_of(bits, y, z) + f_of(bits, x, mul(y, z))) % 2 == (f_of(bits, mul(x, y), z) + f_of(bits, x, y)) % 2))
        });
        cocycles += usize::from(ok);
    }
    let mut boundaries = std::collections::BTreeSet::new();
    for h in 0..8usize {
        let hv = |x: usize| if x == 0 { 0 } else { (h >> (x - 1)) & 1 };
        let table: Vec<usize> = cells.iter().map(|&(x, y)| (hv(x) + hv(y) + hv(mul(x, y))) % 2).collect();
        boundaries.insert(table);
    }
    cocycles / boundaries.len()
}

#[test]
fn criterion_01_unary_counterexample() {
    let mut outcomes = Vec::new();
    for (n, m, k) in [(2, 3, 2), (2, 5, 3)] {
        let start = Instant::now();
        let r = repro::unary_counterexample(n, m, k).unwrap();
        let extra = [
            ("s_nonzero", r.get_bool("s_nonzero") == Some(true)),
            ("im_delta", r.get("im_delta") == Some("0")),
            ("h_witness_valid", r.get_bool("h_witness_valid") == Some(true)),
            ("ker_sigma_contains_S", r.get_bool("ker_sigma_contains_S") == Some(true)),
            ("exact_at_4", r.get_bool("exact_at_4") == Some(false)),
        ];
        outcomes.push(check(1, &format!("counterexample ({n},{m},{k})"), secs(30), &r, &extra, start));
    }
    let errors: Vec<String> = outcomes.into_iter().filter_map(Result::err).collect();
    assert!(errors.is_empty(), "{}", errors.join("\n"));
}

#[test]
fn criterion_02_hs_z4() -> Result<(), String> {
    let start = Instant::now();
    let r = repro::hs_z4().unwrap();
    let mut extra: Vec<(&str, bool)> = ["hom_q_e", "hom_a_e", "hom_b_e", "h2_q_e", "h2_a_e"]
        .iter()
        .map(|g| (*g, r.get(&format!("order.{g}")) == Some("2")))
        .collect();
    for i in 1..=4 {
        extra.push(("complex", r.get_bool(&format!("complex_{i}")) == Some(true)));
        extra.push(("exact", r.get_bool(&format!("exact_at_{i}")) == Some(true)));
    }
    check(2, "hs-z4", secs(60), &r, &extra, start)
}

#[test]
fn criterion_03_h2_groups() -> Result<(), String> {
    let start = Instant::now();
    let r = repro::h2_groups().unwrap();
    let bar = bar_h2_klein();
    let extra = [
        ("z2.invariant_factors", r.get("z2.invariant_factors") == Some("[2]")),
        ("bar oracle", bar == 8),
        ("klein.order", r.get("klein.order") == Some(bar.to_string().as_str())),
    ];
    check(3, "h2-groups", secs(300), &r, &extra, start)
}

#[test]
fn criterion_04_commutator_oracle() -> Result<(), String> {
    let start = Instant::now();
    let r = repro::commutator_oracle().unwrap();
    let extra = [("agree", r.get("agree") == r.get("pairs"))];
    check(4, "commutator-oracle", secs(60), &r, &extra, start)
}

#[test]
fn criterion_05_meet_with_r1() -> Result<(), String> {
    let start = Instant::now();
    let r = repro::meet_with_r1_random(repro::DEFAULT_SEED, 100).unwrap();
    let extra = [("samples", r.get("samples") == Some("100")), ("violations", r.get("violations") == Some("0"))];
    check(5, "commbase-random", secs(120), &r, &extra, start)
}

#[test]
fn criterion_06_idempotent_ideal() -> Result<(), String> {
    let start = Instant::now();
    let r = repro::idempotent_ideal().unwrap();
    let extra = [
        ("z4.ideal", r.get("z4.ideal") == Some("[0,2]")),
        ("d4.ideal", r.get("d4.ideal").map(|s| s.split(',').count()) == Some(2)),
    ];
    check(6, "idemideal", secs(10), &r, &extra, start)
}

#[test]
fn criterion_07_round_trip() -> Result<(), String> {
    let start = Instant::now();
    let r = repro::round_trip().unwrap();
    let extra = [("failures", r.get("failures") == Some("0"))];
    check(7, "round-trip", secs(120), &r, &extra, start)
}

#[test]
fn criterion_08_schur_invariance() -> Result<(), String> {
    let start = Instant::now();
    let r = repro::schur_invariance().unwrap();
    let extra = [
        ("factors", r.get("invariant_factors_1") == r.get("invariant_factors_2")),
        ("inverse_pair", r.get_bool("inverse_pair") == Some(true)),
    ];
    check(8, "schur-invariance", secs(120), &r, &extra, start)
}

#[test]
fn criterion_09_schur_hopf_s3() -> Result<(), String> {
    let start = Instant::now();
    let r = repro::schur_hopf_s3().unwrap();
    let reported = r.get("hypothesis_failed").is_some() || r.get_bool("im_matches_hom") == Some(true);
    check(9, "schur-hopf-s3", secs(600), &r, &[("im_matches_hom", reported)], start)
}

#[test]
fn criterion_10_perfect_a5() -> Result<(), String> {
    let start = Instant::now();
    let r = repro::perfect_a5().unwrap();
    let extra = [("is_perfect", r.get_bool("is_perfect") == Some(true)), ("size", r.get("size") == Some("60"))];
    check(10, "perfect-a5", secs(600), &r, &extra, start)
}

#[test]
fn repro_names_dispatch() {
    assert_eq!(repro::NAMES.len(), 10);
    let r = repro::run("idemideal", &Params::default()).unwrap();
    assert_eq!(r.command(), "repro idemideal");
}
