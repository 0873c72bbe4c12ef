use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn wbf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbf")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn build_emits_every_edge() {
    let out = wbf(&["build", "--m", "3"]);
    assert_eq!(code(&out), 0);
    // 24 nodes, two outgoing edges each
    assert_eq!(stdout(&out).lines().filter(|l| !l.starts_with('#')).count(), 48);
    let doc = json(&wbf(&["build", "--m", "3", "--format", "json"]));
    assert_eq!(doc["edges"].as_array().unwrap().len(), 48);
    assert!(stdout(&wbf(&["build", "--m", "2", "--format", "dot"])).starts_with("digraph"));
    assert_eq!(code(&wbf(&["build", "--m", "1"])), 2);
}

#[test]
fn route_follows_bit_fixing() {
    let doc = json(&wbf(&["route", "--m", "7", "--w", "(6,0110111)"]));
    let r = &doc[0];
    assert_eq!(r["length"], 13);
    assert_eq!(r["hops"][0], "(0,0000000)");
    assert_eq!(r["hops"][13], "(6,0110111)");
}

#[test]
fn multipath_exit_codes() {
    let doc = json(&wbf(&["multipath", "--m", "7", "--h", "2", "--w", "(6,0110111)"]));
    assert_eq!(doc["routes"].as_array().unwrap().len(), 4);
    assert_eq!(doc["verdict"]["passed"], true);

    let near = wbf(&["multipath", "--m", "6", "--h", "2", "--w", "(1,000001)"]);
    assert_eq!(code(&near), 3);
    assert!(String::from_utf8_lossy(&near.stderr).contains("distance"));

    let literal = wbf(&["multipath", "--m", "4", "--h", "1", "--w", "(2,0001)", "--literal", "--format", "text"]);
    assert_eq!(code(&literal), 4);
    assert!(stdout(&literal).contains("independent: NO"));

    assert_eq!(code(&wbf(&["multipath", "--m", "6", "--h", "4", "--w", "(3,011011)"])), 2);
    assert_eq!(code(&wbf(&["multipath", "--m", "6", "--h", "1", "--w", "(3,0110)"])), 2);
}

#[test]
fn redundancy_of_edge_list_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.txt");
    fs::write(&path, "# a path\na b\nb c\nc d\nd e\n").unwrap();
    let p = path.to_str().unwrap();
    let doc = json(&wbf(&["redundancy", "--graph", p, "--h", "1", "--v", "a", "--w", "e"]));
    assert_eq!(doc["delta"], 1);

    let split = dir.path().join("split.txt");
    fs::write(&split, "a b\nc d\nlonely\n").unwrap();
    let s = split.to_str().unwrap();
    let doc = json(&wbf(&["redundancy", "--graph", s, "--h", "1", "--v", "a", "--w", "d"]));
    assert_eq!(doc["delta"], 0);

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "a b\na b c\n").unwrap();
    let out = wbf(&["redundancy", "--graph", bad.to_str().unwrap(), "--h", "1", "--v", "a", "--w", "b"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = dir.path().join("missing.txt");
    let out = wbf(&["redundancy", "--graph", missing.to_str().unwrap(), "--h", "1", "--v", "a", "--w", "b"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn redundancy_on_butterfly_respects_bounds() {
    let doc = json(&wbf(&["redundancy", "--butterfly", "6", "--h", "2", "--w", "(3,011011)"]));
    let delta = doc["delta"].as_u64().unwrap();
    assert!(delta >= 4);
    assert_eq!(doc["lower_bound"], 4);
    assert_eq!(doc["lower_bound_holds"], true);
    assert_eq!(doc["min_cut"].as_array().unwrap().len() as u64, delta);
}

#[test]
fn sweep_csv_is_exact_and_reproducible() {
    let args = ["sweep", "--delta", "4", "--trials", "2000", "--seed", "7"];
    let first = wbf(&args);
    assert_eq!(code(&first), 0);
    let text = stdout(&first);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20);
    for r in &rows {
        let (k, c): (u32, u32) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        let exact: f64 = r[3].parse().unwrap();
        if (k, c) == (2, 3) {
            assert!((exact - 0.5).abs() < 1e-12);
        }
        if k > c {
            assert_eq!(exact, 0.0);
            assert_eq!(r[4].parse::<f64>().unwrap(), 0.0);
        }
    }
    assert_eq!(stdout(&wbf(&args)), text);
}

#[test]
fn simulate_reports_and_rejects() {
    let doc = json(&wbf(&["simulate", "--m", "6", "--h", "2", "--w", "(3,011011)", "--k", "2", "--c", "0", "--trials", "500"]));
    assert_eq!(doc["report"]["undetected_failure"], 0);
    assert_eq!(doc["cut"].as_array().unwrap().len(), 4);
    let too_many = wbf(&["simulate", "--m", "6", "--h", "2", "--w", "(3,011011)", "--k", "5", "--c", "0"]);
    assert_eq!(code(&too_many), 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    let out = wbf(&["build", "--m", "3", "--format", "dot", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(&path).unwrap().starts_with("digraph"));

    let unwritable = dir.path().join("no/such/dir/g.dot");
    assert_eq!(code(&wbf(&["build", "--m", "3", "--out", unwritable.to_str().unwrap()])), 1);
}

#[test]
fn verify_passes_small_grid() {
    let out = wbf(&["verify", "--min-m", "4", "--max-m", "5", "--samples", "5"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let lit = wbf(&["verify", "--min-m", "4", "--max-m", "5", "--samples", "20", "--literal"]);
    assert_eq!(code(&lit), 4);
}
