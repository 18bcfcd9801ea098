use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use hyperkube::grid::examples as grids;
use hyperkube::hypercube::examples::{hopf_table_as_printed, standard_torus};
use hyperkube::hypercube::{CollapseAxis, Markings};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyperkube-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperkube")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path_str(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_standard_torus() {
    let out = run(&["validate", path_str(&fixture("standard_torus.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["class"], "EmbeddedLagrangian");
    let text = run(&["--text", "validate", path_str(&fixture("standard_torus.json"))]);
    assert!(String::from_utf8(text.stdout).unwrap().starts_with("valid, class=EmbeddedLagrangian"));
}

#[test]
fn homology_of_standard_torus() {
    let v = json_of(&run(&["homology", path_str(&fixture("standard_torus.json"))]));
    assert_eq!(v["tildeRank"], 4);
    assert_eq!(v["hatRank"], 1);
    assert_eq!(v["hat"][0]["maslov"], 0);
    assert_eq!(v["hat"][0]["alexander"], serde_json::json!([0]));
}

#[test]
fn euler_of_hopf_linked_tori() {
    let v = json_of(&run(&["euler", path_str(&fixture("hopf_linked.json"))]));
    let terms: Vec<(Vec<i64>, i64)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (serde_json::from_value(t["exponents"].clone()).unwrap(), t["coefficient"].as_i64().unwrap()))
        .collect();
    let sign = terms.iter().find(|(e, _)| e == &vec![0, 0]).unwrap().1.signum();
    let mut expected = Vec::new();
    for (a, ca) in [(2, 1), (0, -2), (-2, 1)] {
        for (b, cb) in [(2, 1), (0, -2), (-2, 1)] {
            expected.push((vec![a, b], sign * ca * cb));
        }
    }
    expected.sort();
    let mut got = terms;
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn truncated_file_is_a_parse_error() {
    let p = scratch_file("truncated.json", "{\"size\": 2, \"W\": [[0,0");
    let out = run(&["validate", path_str(&p)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["error"].as_str().unwrap().contains("parse error"));
}

#[test]
fn marking_invalid_file_names_the_condition() {
    let p = scratch_file("printed.json", &serde_json::to_string(&hopf_table_as_printed()).unwrap());
    let out = run(&["validate", path_str(&p)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["valid"], false);
    assert!(v["error"].as_str().unwrap().contains("markings"), "{v}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["validate"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--size", "3", "--class", "wobbly"]).status.code(), Some(2));
}

#[test]
fn kinds_are_inferred_from_fields() {
    let grid = scratch_file("trefoil.json", &serde_json::to_string(&grids::trefoil5()).unwrap());
    assert_eq!(json_of(&run(&["validate", path_str(&grid)]))["kind"], "grid");
    let cube = standard_torus().project_cube(CollapseAxis::W).unwrap();
    let cube = scratch_file("cube.json", &serde_json::to_string(&cube).unwrap());
    assert_eq!(json_of(&run(&["validate", path_str(&cube)]))["kind"], "cube");
    let other = scratch_file("other.json", "{\"size\": 3}");
    assert_eq!(run(&["validate", path_str(&other)]).status.code(), Some(1));
}

#[test]
fn projections_are_grid_files() {
    let out = run(&["project", path_str(&fixture("trefoil_five_two.json")), "--plane", "yz"]);
    assert_eq!(out.status.code(), Some(0));
    let g: hyperkube::grid::GridDiagram = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(hyperkube::floer::grid_alexander_polynomial(&g), vec![2, -3, 2]);
    assert_eq!(run(&["project", path_str(&fixture("trefoil.json")), "--plane", "qq"]).status.code(), Some(1));
}

#[test]
fn render_matches_golden_schematic() {
    let out = run(&["--text", "render", path_str(&fixture("standard_torus.json"))]);
    let golden = std::fs::read_to_string(fixture("golden/standard_torus.schematic.txt")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn swap_move_exchanges_projections() {
    let out = run(&["move", path_str(&fixture("trefoil_five_two.json")), "--apply", "{\"kind\":\"swap\"}"]);
    assert_eq!(out.status.code(), Some(0));
    let m: Markings = serde_json::from_slice(&out.stdout).unwrap();
    let swapped = scratch_file("swapped.json", &serde_json::to_string(&m).unwrap());
    let v = json_of(&run(&["fixture-report", path_str(&swapped)]));
    assert_eq!(v["projections"][0]["alexanderPolynomial"], serde_json::json!([2, -3, 2]));
    assert_eq!(v["projections"][1]["alexanderPolynomial"], serde_json::json!([1, -1, 1]));
    let list = json_of(&run(&["move", path_str(&fixture("standard_torus.json"))]));
    assert!(list["moves"].as_array().unwrap().iter().any(|m| m["kind"] == "swap"));
}

#[test]
fn search_output_is_deterministic_json_lines() {
    let args = ["search", "--size", "4", "--wx", "hopf", "--yz", "split2", "--class", "embedded", "--budget", "5000"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<Value> =
        String::from_utf8(a.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    let m: Markings = serde_json::from_value(lines[0]["hit"]["markings"].clone()).unwrap();
    assert!(m.validate().is_ok());
    assert_eq!(lines[1]["hits"], 1);
    let jobs = run(&["--jobs", "2", "search", "--size", "4", "--wx", "hopf", "--yz", "split2", "--class", "embedded", "--budget", "5000"]);
    assert_eq!(jobs.stdout, b.stdout);
}

#[test]
fn exhausted_search_exits_with_one() {
    let out = run(&["search", "--size", "3", "--wx", "trefoil", "--budget", "200"]);
    assert_eq!(out.status.code(), Some(1));
    let first: Value = serde_json::from_str(String::from_utf8(out.stdout).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(first["stats"]["candidatesTried"], 200);
}

#[test]
fn generate_and_repair() {
    let v = json_of(&run(&["generate", "--size", "4", "--seed", "3"]));
    let m: Markings = serde_json::from_value(v["markings"].clone()).unwrap();
    assert!(m.check_marking_conditions().is_ok());
    assert_eq!(v["valid"], m.validate().is_ok());
    let p = scratch_file("printed_for_repair.json", &serde_json::to_string(&hopf_table_as_printed()).unwrap());
    let r = json_of(&run(&["repair", path_str(&p), "--budget", "3"]));
    assert_eq!(r["repairs"].as_array().unwrap().len(), 1);
    assert_eq!(r["repairs"][0]["edits"].as_array().unwrap().len(), 3);
    assert_eq!(run(&["repair", path_str(&p), "--budget", "2"]).status.code(), Some(1));
}
