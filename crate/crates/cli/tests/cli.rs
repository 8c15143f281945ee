use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cext::algebra::groups;
use cext::algebra::io::write_algebra;
use cext::termlang::write_variety;
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let f = Fixture { dir };
        f.write("groups.var", &write_variety(&groups::group_variety()));
        f.write("z2.alg", &write_algebra(&groups::cyclic(2)));
        f.write("z4.alg", &write_algebra(&groups::cyclic(4)));
        f.write("s3.alg", &write_algebra(&groups::symmetric(3)));
        f
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) {
        std::fs::write(self.path(name), text).unwrap();
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_cext")).current_dir(self.dir.path()).args(args).output().unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

#[test]
fn h2_of_z2_over_z2() {
    let f = Fixture::new();
    let o = f.run(&["h2", "--q", "z2.alg", "--b", "z2.alg", "--variety", "groups.var", "--reps", "reps"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "invariant_factors"), Some("[2]"));
    assert!(field(&out, "input.q").is_some_and(|d| d.len() == 64));
    assert!(Path::new(&f.path("reps/class_1.coc")).exists());
}

#[test]
fn extending_by_the_nontrivial_class_gives_z4() {
    let f = Fixture::new();
    f.run(&["h2", "--q", "z2.alg", "--b", "z2.alg", "--variety", "groups.var", "--reps", "reps"]);
    let o = f.run(&[
        "extend", "--b", "z2.alg", "--q", "z2.alg", "--cocycle", "reps/class_1.coc", "--variety", "groups.var", "--write", "ext.alg",
    ]);
    assert_eq!(field(&stdout(&o), "in_variety"), Some("true"));
    let ext = cext::algebra::io::parse_algebra(&std::fs::read_to_string(f.path("ext.alg")).unwrap()).unwrap();
    assert!(cext::algebra::find_isomorphism(&ext, &groups::cyclic(4)).is_some());
}

#[test]
fn derived_subgroup_of_s3() {
    let f = Fixture::new();
    let o = f.run(&["comm", "--algebra", "s3.alg", "--alpha", "full", "--beta", "full"]);
    let blocks: Vec<Vec<usize>> = field(&stdout(&o), "commutator")
        .unwrap()
        .split('|')
        .map(|b| b.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(blocks.len(), 2);
    assert!(blocks.iter().all(|b| b.len() == 3));
}

#[test]
fn hs_on_z4() {
    let f = Fixture::new();
    let o = f.run(&["hs", "--algebra", "z4.alg", "--alpha", "0,2|1,3", "--e", "z2.alg", "--variety", "groups.var"]);
    let out = stdout(&o);
    for i in 1..=4 {
        assert_eq!(field(&out, &format!("exact_at_{i}")), Some("true"));
    }
}

#[test]
fn counterexample_repro_reports_verdict_fields() {
    let f = Fixture::new();
    let o = f.run(&["repro", "sec4-example", "--n", "2", "--m", "3", "--k", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "im_delta"), Some("0"));
    for key in ["s_nonzero", "ker_sigma_contains_S", "exact_at_4", "h_witness_valid", "pass"] {
        assert!(field(&out, key).is_some(), "{key}");
    }
}

#[test]
fn reports_are_deterministic_and_saved() {
    let f = Fixture::new();
    let args = ["con", "--algebra", "s3.alg", "--out", "con.txt"];
    let (a, b) = (f.run(&args), f.run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(f.path("con.txt")).unwrap(), a.stdout);
    assert_eq!(field(&stdout(&a), "count"), Some("3"));
}

#[test]
fn exit_codes() {
    let f = Fixture::new();
    assert_eq!(f.run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(f.run(&["repro", "no-such-check"]).status.code(), Some(1));
    assert_eq!(f.run(&["validate", "--algebra", "missing.alg"]).status.code(), Some(1));
    let budget = f.run(&["comm", "--algebra", "s3.alg", "--alpha", "full", "--beta", "full", "--budget", "2"]);
    assert_eq!(budget.status.code(), Some(3));
    let noncentral = f.run(&["kernel", "--algebra", "s3.alg", "--alpha", "0,1,2|3,4,5", "--variety", "groups.var"]);
    assert_eq!(noncentral.status.code(), Some(2), "{}", String::from_utf8_lossy(&noncentral.stderr));
}

#[test]
fn validate_checks_axioms() {
    let f = Fixture::new();
    f.write("abelian.var", "signature: mul/2, inv/1, e/0\naxioms:\nmul(x,y) = mul(y,x)\ndifference_term: m(x,y,z) = mul(mul(x,inv(y)),z)\n");
    let o = f.run(&["validate", "--algebra", "s3.alg", "--variety", "abelian.var"]);
    assert_eq!(field(&stdout(&o), "in_variety"), Some("false"));
    let o = f.run(&["validate", "--algebra", "z4.alg", "--variety", "abelian.var"]);
    assert_eq!(field(&stdout(&o), "in_variety"), Some("true"));
}

#[test]
fn schur_and_cover_of_z2_in_z4() {
    let f = Fixture::new();
    let common = ["--variety", "groups.var", "--generator", "z4.alg", "--target", "z2.alg", "--k", "1", "--images", "1"];
    let o = f.run(&[&["schur"][..], &common].concat());
    assert_eq!(field(&stdout(&o), "multiplier_order"), Some("1"));
    let o = f.run(&[&["cover"][..], &common].concat());
    assert_eq!(field(&stdout(&o), "cover_size"), Some("2"));
    assert_eq!(field(&stdout(&o), "is_cover"), Some("true"));
}
