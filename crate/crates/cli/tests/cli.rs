use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn cdz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdz"))
        .args(args)
        .env_remove("CDZ_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let out = cdz(&a);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn coset_counts() {
    for (n, count) in [(1, 1), (3, 8), (4, 12)] {
        let d = json(&["cosets", "--N", &n.to_string()]);
        assert_eq!(d["schema_version"], 1);
        assert_eq!(d["count"], count);
        assert_eq!(d["cosets"].as_array().unwrap().len(), count);
    }
}

#[test]
fn level_one_weight_twelve_relations_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = cdz(&["relations", "--N", "1", "--k", "12", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    let d: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(d["schema_version"], 1);
    let rels = d["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 2);
    for r in rels {
        assert!(!r["certificate"].is_null());
        assert!(!r["odd_certificate"].is_null());
        assert!(r["q"].as_array().is_some_and(|q| !q.is_empty()));
        assert!(r["latex"].as_str().unwrap().contains("Z_{"));
    }
}

#[test]
fn json_is_byte_identical_across_runs_and_cache_states() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let run = |name: &str, with_cache: bool| {
        let p = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_cdz"));
        cmd.args(["relations", "--N", "3", "--k", "4", "--json", p.to_str().unwrap()]);
        if with_cache {
            cmd.env("CDZ_CACHE_DIR", &cache);
        } else {
            cmd.env_remove("CDZ_CACHE_DIR");
        }
        assert!(cmd.output().unwrap().status.success());
        fs::read(p).unwrap()
    };
    let a = run("a.json", false);
    let b = run("b.json", false);
    let cold = run("c.json", true);
    assert!(fs::read_dir(&cache).unwrap().count() > 0, "cache populated");
    let warm = run("d.json", true);
    assert_eq!(a, b);
    assert_eq!(a, cold);
    assert_eq!(a, warm);
}

#[test]
fn dims_recover_the_genus_of_x1_11() {
    let d = json(&["dims", "--N", "11", "--w", "0"]);
    assert_eq!(d["dim_s"], 1);
    assert_eq!(d["classical"], 1);
    let d = json(&["dims", "--N", "1", "--k", "12"]);
    assert_eq!(d["dim_s"], 1);
}

#[test]
fn period_basis_of_level_one_weight_twelve() {
    let d = json(&["period-basis", "--N", "1", "--w", "10", "--sign", "minus"]);
    assert_eq!(d["dim"], 1);
    let plus = json(&["period-basis", "--N", "1", "--w", "10", "--sign", "plus"]);
    // X^10 - Y^10 plus the cusp form
    assert_eq!(plus["dim"], 2);
}

#[test]
fn verify_passes_where_denominators_fit() {
    for (n, k) in [("3", "4"), ("4", "5")] {
        let d = json(&["verify", "--N", n, "--k", k]);
        assert_eq!(d["passed"], true);
        for r in d["relations"].as_array().unwrap() {
            assert!(r["odd"]["rational"].is_string());
            assert_eq!(r["odd"]["rational"], r["odd"]["predicted"]);
        }
    }
}

#[test]
fn verify_exit_code_tracks_max_den() {
    // the level one odd parts have denominators near 1e12
    let out = cdz(&["verify", "--N", "1", "--k", "12"]);
    assert_eq!(out.status.code(), Some(1));
    let out = cdz(&["verify", "--N", "1", "--k", "12", "--max-den", "1e13", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let d: Value = serde_json::from_slice(&out.stdout).unwrap();
    let odd: Vec<&str> = d["relations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["odd"]["rational"].as_str().unwrap())
        .collect();
    assert_eq!(odd, ["691/3487131648000", "5197/1743565824000"]);
}

#[test]
fn numeric_checks() {
    let d = json(&["dsh-check", "--r", "2", "--s", "1", "--a", "1", "--b", "0", "--N", "3"]);
    assert_eq!(d["passed"], true);
    let d = json(&["dsh-check", "--r", "1", "--s", "2", "--a", "-1", "--b", "2", "--N", "4"]);
    assert_eq!(d["passed"], true);
    let d = json(&["euler-check", "--k", "2", "--N", "1", "--a", "0"]);
    assert_eq!(d["passed"], true);
    let d = json(&["euler-check", "--k", "1", "--N", "3", "--a", "1"]);
    assert_eq!(d["passed"], true);
}

#[test]
fn invalid_combinations_print_usage() {
    for args in [
        &["relations", "--N", "1", "--k", "2"][..],
        &["verify", "--N", "1", "--k", "2"],
        &["dims", "--N", "3", "--w", "2", "--k", "5"],
        &["dims", "--N", "1", "--w", "0"],
        &["cosets", "--N", "0"],
        &["euler-check", "--k", "1", "--N", "2", "--a", "0"],
        &["dsh-check", "--r", "1", "--s", "1", "--a", "0", "--b", "0", "--N", "3"],
        &["verify", "--N", "3", "--k", "4", "--max-den", "ten"],
    ] {
        let out = cdz(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("--help"), "{args:?}");
    }
}

#[test]
fn points_outside_the_coset_space_are_runtime_errors() {
    let out = cdz(&["dsh-check", "--r", "1", "--s", "2", "--a", "2", "--b", "2", "--N", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("A(4)"));
}
