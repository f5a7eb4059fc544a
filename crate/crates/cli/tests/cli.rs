use std::process::Command;

use billiard_monodromy::construct::{ClassificationReport, CompositeWitness};
use billiard_monodromy::oracle::StructureReport;
use billiard_monodromy::serde_int;
use billiard_monodromy::{GroupDescriptor, Int, PolygonTuple};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_billiard-monodromy"));
    cmd.args(args).env_remove("BILLIARD_MONODROMY_MAX_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleSummary {
    order: u64,
    ok: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupOutput {
    tuple: PolygonTuple,
    group: GroupDescriptor,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    oracle: Option<OracleSummary>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    tuple: PolygonTuple,
    group: GroupDescriptor,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnfOutput {
    #[serde(with = "serde_int::big_int_list")]
    divisors: Vec<Int>,
    #[serde(with = "serde_int::big_int_rows")]
    u: Vec<Vec<Int>>,
    #[serde(with = "serde_int::big_int_rows")]
    d: Vec<Vec<Int>>,
    #[serde(with = "serde_int::big_int_rows")]
    v: Vec<Vec<Int>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorJson {
    coeffs: Vec<u64>,
    multiplicity: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorOutput {
    k: usize,
    p: u64,
    factors: Vec<FactorJson>,
}

/// Parses stdout as `T`, reprints it, and requires identical bytes.
fn round_trip<T: Serialize + DeserializeOwned>(args: &[&str]) -> T {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    let line = out.trim_end();
    let parsed: T = serde_json::from_str(line).unwrap_or_else(|e| panic!("{args:?}: {e}\n{line}"));
    assert_eq!(serde_json::to_string(&parsed).unwrap(), line, "{args:?}");
    parsed
}

#[test]
fn group_text() {
    let (code, out, _) = run(&["group", "--n", "5", "--tuple", "2,2,2,4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(C5 x C5 x C5) : C4, order 500\n");
    let (code, out, _) = run(&["group", "--n", "5", "--tuple", "2,2,2,4", "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(C5 x C5 x C5) : C4, order 500\noracle: OK (|G|=500)\n");
}

#[test]
fn classify_triangle_81() {
    let r: ClassificationReport = round_trip(&["classify-triangle", "--n", "81", "--json"]);
    let w: Vec<Vec<u64>> = r.witnesses.iter().map(|w| w.tuple.entries().to_vec()).collect();
    assert_eq!(w, vec![vec![1, 2, 78], vec![1, 1, 79]]);
    assert_eq!(r.achievable.len(), 2);
}

#[test]
fn json_round_trips_for_every_subcommand() {
    let g: GroupOutput = round_trip(&["group", "--n", "5", "--tuple", "2,2,2,4", "--json"]);
    assert_eq!(g.group.deltas(), &[5, 5, 5]);
    let g: GroupOutput = round_trip(&["group", "--n", "7", "--tuple", "1,2,4", "--verify", "--json"]);
    assert!(g.oracle.unwrap().ok);
    let s: SnfOutput = round_trip(&["snf", "--n", "5", "--tuple", "2,2,2,4", "--json"]);
    assert_eq!(s.divisors, [2, 2, 2, 10].map(Int::from).to_vec());
    let _: SnfOutput = round_trip(&["snf", "--matrix", "2,4;-6,8", "--json"]);
    let r: StructureReport = round_trip(&["verify", "--n", "5", "--tuple", "2,2,2,4", "--json"]);
    assert!(r.all_passed());
    let f: FactorOutput = round_trip(&["factor", "--k", "6", "--p", "2", "--json"]);
    assert_eq!(f.factors.len(), 2);
    let e: Vec<Entry> = round_trip(&["enumerate", "--k", "3", "--n", "7", "--json"]);
    assert_eq!(e.len(), 15);
    let _: Vec<Entry> = round_trip(&["enumerate", "--k", "3", "--n", "4", "--algebraic", "--json"]);
    let r: ClassificationReport = round_trip(&["classify-prime", "--k", "4", "--p", "5", "--json"]);
    assert_eq!(r.achievable.len(), 3);
    let _: ClassificationReport = round_trip(&["classify-triangle", "--n", "35", "--json"]);
    let c: Entry = round_trip(&["construct", "--k", "4", "--p", "5", "--d", "2", "--json"]);
    assert_eq!(c.tuple.entries(), &[4, 4, 1, 1]);
    let c: Entry = round_trip(&[
        "combine", "--n1", "5", "--tuple1", "1,4,4,1", "--n2", "6", "--tuple2", "2,3,4,3", "--json",
    ]);
    assert_eq!(c.tuple.entries(), &[26, 9, 4, 21]);
    let p: Entry = round_trip(&["project", "--n", "6", "--tuple", "1,1,4", "--n1", "2", "--json"]);
    assert_eq!(p.tuple.entries(), &[1, 1, 0]);
    let l: Entry = round_trip(&["lift", "--n", "7", "--tuple", "3,4", "--ell", "4", "--json"]);
    assert_eq!(l.group.deltas(), &[7]);
    let w: CompositeWitness = round_trip(&["composite", "--k", "3", "--n", "6", "--deltas", "6,2", "--json"]);
    assert_eq!(w.group.deltas(), &[6, 2]);
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["group", "--n", "7", "--tuple", "1,2,4"], 0),
        (&["group", "--n", "5", "--tuple", "1,1,1"], 1),
        (&["group", "--n", "6", "--tuple", "2,2,2"], 1),
        (&["group", "--n", "5", "--tuple", "2,2,2,4", "--verify", "--max-group", "10"], 2),
        (&["verify", "--n", "5", "--tuple", "2,2,2,4", "--max-span", "5"], 2),
        (&["group", "--n", "5"], 3),
        (&["group", "--n", "5", "--tuple", "a,b"], 3),
        (&["frobnicate"], 3),
        (&[], 3),
        (&["--help"], 0),
        (&["--version"], 0),
        (&["group", "--help"], 0),
        (&["factor", "--k", "4", "--p", "6"], 1),
        (&["factor", "--k", "4", "--p", "5"], 0),
        (&["classify-prime", "--k", "5", "--p", "5"], 1),
        (&["classify-triangle", "--n", "2"], 1),
        (&["construct", "--k", "3", "--p", "5", "--d", "2"], 1),
        (&["combine", "--n1", "7", "--tuple1", "1,2,4", "--n2", "7", "--tuple2", "1,2,4"], 1),
        (&["project", "--n", "6", "--tuple", "1,1,4", "--n1", "4"], 1),
        (&["lift", "--n", "7", "--tuple", "1,2,4", "--ell", "5"], 1),
        (&["composite", "--k", "3", "--n", "35", "--deltas", "35"], 1),
        (&["composite", "--k", "3", "--n", "35", "--deltas", "35,7"], 1),
        (&["composite", "--k", "3", "--n", "10", "--deltas", "10,10"], 0),
        (&["composite", "--k", "8", "--n", "30", "--deltas", "30", "--max-group", "1000"], 2),
        (&["enumerate", "--k", "9", "--n", "30"], 2),
        (&["snf", "--matrix", "1,2;3"], 1),
    ];
    for (args, want) in cases {
        let (code, _, err) = run(args);
        assert_eq!(code, *want, "{args:?}: {err}");
    }
}

#[test]
fn cap_environment_variable() {
    let args = ["group", "--n", "5", "--tuple", "2,2,2,4", "--verify"];
    let (code, _, _) = run_env(&args, &[("BILLIARD_MONODROMY_MAX_CAP", "10")]);
    assert_eq!(code, 2);
    let (code, _, _) = run_env(&args, &[("BILLIARD_MONODROMY_MAX_CAP", "1000")]);
    assert_eq!(code, 0);
    // an explicit flag wins over the environment
    let mut with_flag = args.to_vec();
    with_flag.extend(["--max-group", "1000"]);
    let (code, _, _) = run_env(&with_flag, &[("BILLIARD_MONODROMY_MAX_CAP", "10")]);
    assert_eq!(code, 0);
}

#[test]
fn error_json() {
    let (code, out, _) = run(&["group", "--n", "5", "--tuple", "1,1,1", "--json"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["code"], 1);
}

#[test]
fn text_outputs() {
    let (_, out, _) = run(&["factor", "--k", "3", "--p", "5"]);
    assert_eq!(out.trim(), "(x+4) (x^2+x+1) (mod 5)");
    let (_, out, _) = run(&["construct", "--k", "4", "--p", "5", "--d", "2"]);
    assert_eq!(out, "[4,4,1,1] mod 5\n(C5 x C5) : C4, order 100\n");
    let (_, out, _) = run(&["project", "--n", "25", "--tuple", "1,2,24,23", "--n1", "5"]);
    assert_eq!(out, "[1,2,4,3] mod 5\nC5 : C4, order 20\n");
}
