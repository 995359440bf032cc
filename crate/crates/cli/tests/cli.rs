use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tropmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropmod"))
        .args(args)
        .env_remove("TROPMOD_CACHE")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = tropmod(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn euler_of_x_2_4_is_zero() {
    let out = tropmod(&["space", "--genus", "2", "--n", "4", "--euler"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn genus_four_has_43_classes() {
    let rows = json(&["enumerate", "--genus", "4"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 43);
    for r in rows {
        for key in ["canonical", "vertices", "edges", "autOrder", "depth"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        let v = r["vertices"].as_u64().unwrap();
        let e = r["edges"].as_array().unwrap().len() as u64;
        assert_eq!(e + 1 - v, 4);
    }
    let text = tropmod(&["enumerate", "--genus", "4", "--format", "text"]);
    assert_eq!(stdout(&text).lines().count(), 43);
}

#[test]
fn filtered_classes_count_the_simplices() {
    let rows = json(&["enumerate", "--genus", "3", "--filtered"]);
    let mut by_depth = [0usize; 5];
    for r in rows.as_array().unwrap() {
        by_depth[r["depth"].as_u64().unwrap() as usize] += 1;
    }
    assert_eq!(by_depth, [0, 8, 23, 26, 10]);
}

#[test]
fn genus_three_collapses() {
    let v = json(&["delta", "--genus", "3", "--check", "--collapse", "--seed", "0"]);
    assert_eq!(v["collapse"]["verdict"], "collapsible");
    assert_eq!(v["pure"], true);
    assert_eq!(v["connected"], true);
    assert_eq!(v["euler"], 1);
    assert_eq!(v["identities"], "ok");
    let cells: i64 = v["cells"].as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).sum();
    assert_eq!(v["collapse"]["steps"].as_i64().unwrap(), (cells - 1) / 2);
}

#[test]
fn fibers_of_enumerated_classes() {
    let rows = json(&["enumerate", "--genus", "2"]);
    let mut polys = Vec::new();
    for r in rows.as_array().unwrap() {
        let class = r["canonical"].as_str().unwrap();
        let v = json(&["fiber", "--genus", "2", "--class", class, "--n", "2", "--orbits"]);
        let poly: Vec<i64> = v["poly"].as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).collect();
        let orbits = v["orbits"].as_array().unwrap();
        assert_eq!(orbits.len() as i64, poly.iter().sum::<i64>());
        for (d, &count) in poly.iter().enumerate() {
            let listed = orbits.iter().filter(|o| o["dim"] == d).count() as i64;
            assert_eq!(listed, count);
        }
        polys.push(poly);
    }
    polys.sort();
    assert_eq!(polys, vec![vec![5, 6, 3], vec![6, 8, 4]]);
}

#[test]
fn full_space_record() {
    let v = json(&["space", "--genus", "2", "--n", "2"]);
    assert_eq!(v["cells"], serde_json::json!([11, 25, 25, 10]));
    assert_eq!(v["poly"], v["cells"]);
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0, 0]));
    assert_eq!(v["euler"], 1);
    let a = json(&["space", "--genus", "2", "--n", "0", "--asymptotic"]);
    assert_eq!(a["tm"], "-1/24");
}

#[test]
fn sweep_is_a_csv_table() {
    let out = tropmod(&["space", "--genus", "2", "--n", "5", "--sweep"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,euler,poly");
    let euler: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(euler, ["1", "1", "1", "1", "0", "-4"]);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(tropmod(&["space", "--genus", "2"]).status.code(), Some(1));
    assert_eq!(tropmod(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(tropmod(&["enumerate", "--genus", "0"]).status.code(), Some(1));
    assert_eq!(tropmod(&["fiber", "--genus", "2", "--class", "xyz", "--n", "1"]).status.code(), Some(1));
    assert_eq!(tropmod(&["space", "--genus", "2", "--n", "1", "--format", "dot"]).status.code(), Some(1));
    assert_eq!(tropmod(&["--help"]).status.code(), Some(0));
}

#[test]
fn genus_guard_and_override() {
    let refused = tropmod(&["enumerate", "--genus", "2", "--max-genus", "1"]);
    assert_eq!(refused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("--allow-large-genus"));
    let allowed = tropmod(&["enumerate", "--genus", "2", "--max-genus", "1", "--allow-large-genus"]);
    assert_eq!(allowed.status.code(), Some(0));
    assert_eq!(tropmod(&["enumerate", "--genus", "6"]).status.code(), Some(1));
}

#[test]
fn reproduce_passes_and_toggles_json() {
    let out = tropmod(&["reproduce"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("FAIL"));
    let rows = json(&["reproduce", "--json"]);
    let rows = rows.as_array().unwrap();
    assert!(rows.iter().all(|r| r["status"] != "fail"));
    for id in 1..=10 {
        assert!(rows.iter().any(|r| r["id"] == id.to_string() && r["status"] == "pass"), "criterion {id}");
    }
}

fn cache_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

#[test]
fn cache_reruns_are_identical_and_corruption_recomputes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["space", "--genus", "2", "--n", "3", "--cache-dir", d];
    let cold = stdout(&tropmod(&args));
    let files = cache_files(dir.path());
    assert_eq!(files.len(), 1);
    let entry: Value = serde_json::from_str(&fs::read_to_string(&files[0]).unwrap()).unwrap();
    for key in ["key", "toolVersion", "sha256", "payload"] {
        assert!(entry.get(key).is_some(), "missing {key}");
    }
    assert_eq!(stdout(&tropmod(&args)), cold);

    let tampered = fs::read_to_string(&files[0]).unwrap().replace("\"euler\":1", "\"euler\":7");
    assert!(tampered.contains("\"euler\":7"));
    fs::write(&files[0], tampered).unwrap();
    assert_eq!(stdout(&tropmod(&args)), cold);
    let repaired: Value = serde_json::from_str(&fs::read_to_string(&files[0]).unwrap()).unwrap();
    assert_eq!(repaired["payload"]["euler"], 1);

    fs::write(&files[0], "not json").unwrap();
    assert_eq!(stdout(&tropmod(&args)), cold);

    let stale = fs::read_to_string(&files[0]).unwrap().replace(env!("CARGO_PKG_VERSION"), "0.0.0-old");
    fs::write(&files[0], stale).unwrap();
    assert_eq!(stdout(&tropmod(&args)), cold);
    let entry: Value = serde_json::from_str(&fs::read_to_string(&files[0]).unwrap()).unwrap();
    assert_eq!(entry["toolVersion"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tropmod"))
        .args(["enumerate", "--genus", "3"])
        .env("TROPMOD_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(cache_files(dir.path()).len(), 1);
    let out2 = Command::new(env!("CARGO_BIN_EXE_tropmod"))
        .args(["enumerate", "--genus", "3", "--no-cache"])
        .env("TROPMOD_CACHE", dir.path().join("unused"))
        .output()
        .unwrap();
    assert_eq!(out.stdout, out2.stdout);
    assert!(!dir.path().join("unused").exists());
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let one = tropmod(&["delta", "--genus", "3", "--collapse", "--threads", "1"]);
    let many = tropmod(&["delta", "--genus", "3", "--collapse", "--threads", "4"]);
    assert_eq!(one.stdout, many.stdout);
    let fiber_a = tropmod(&["fiber", "--genus", "2", "--class", "020103000100000100000100", "--n", "3", "--orbits", "--threads", "1"]);
    let fiber_b = tropmod(&["fiber", "--genus", "2", "--class", "020103000100000100000100", "--n", "3", "--orbits"]);
    assert_eq!(fiber_a.stdout, fiber_b.stdout);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("delta.dot");
    let out = tropmod(&["delta", "--genus", "2", "--format", "dot", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let dot = fs::read_to_string(path).unwrap();
    assert!(dot.starts_with("graph delta_2 {"));
    assert_eq!(dot.matches(" -- ").count(), 1);
}
