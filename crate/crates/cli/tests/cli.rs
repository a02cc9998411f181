use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stp(args: &[&str]) -> Output {
    stp_env(args, &[])
}

fn stp_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stp"));
    cmd.args(args).env_remove("STP_MAX_SUBSETS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn facets_json_for_ce() {
    let o = stp(&["facets", &data("ce.txt")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["inequalities"].as_array().unwrap().len(), 12);
    assert_eq!(v["equalities"].as_array().unwrap().len(), 1);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 8);
}

#[test]
fn facets_verify_reports_on_stderr() {
    let o = stp(&["facets", &data("ce.txt"), "--format", "text", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("verdict: PASS"));
    assert!(stderr(&o).contains("hull comparison ok"));
    assert!(!stdout(&o).contains("verdict"));
}

#[test]
fn facets_ine_for_c4() {
    let o = stp(&["facets", &data("c4.txt"), "--format", "ine"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "H-representation\nlinearity 1 5\nbegin\n5 5 integer\n\
         1 -1 0 0 0\n1 0 -1 0 0\n1 0 0 -1 0\n1 0 0 0 -1\n3 -1 -1 -1 -1\nend\n"
    );
}

#[test]
fn facets_for_a_path_are_bridge_equalities() {
    let o = stp(&["facets", &data("path.txt")]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["inequalities"].as_array().unwrap().is_empty());
    let eqs = v["equalities"].as_array().unwrap();
    assert_eq!(eqs.len(), 2);
    for eq in eqs {
        assert_eq!(eq["rhs"], 1);
        assert_eq!(eq["provenance"]["kind"], "bridge");
    }
}

#[test]
fn lp_output() {
    let o = stp(&["facets", &data("c4.txt"), "--format", "lp"]);
    let lp = stdout(&o);
    assert!(lp.contains(" eq0: x_ab + x_bc + x_cd + x_da = 3\n"));
    assert!(lp.contains(" -inf <= x_ab <= 1\n"));
    let o = stp(&["facets", &data("c4.txt"), "--format", "lp", "--relaxed-bounds"]);
    assert!(stdout(&o).contains(" 0 <= x_ab <= 1\n"));
}

#[test]
fn locked_verbose_shows_the_rejection() {
    let o = stp(&["locked", &data("ce.txt"), "--verbose"]);
    let text = stdout(&o);
    assert!(text.contains("locked {a,b,f}"));
    assert!(text.contains("locked {c,d,e}"));
    assert!(text.contains("rejected {b,c,e,f}: outside-disconnected; L1={ab,af} L2={cd,de}: n_H + n = 10 >= 10"));

    let o = stp(&["locked", &data("ce.txt"), "--json", "--verbose"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["blocks"][0]["locked"].as_array().unwrap().len(), 2);
    let bcef = v["blocks"][0]["rejected"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["vertices"] == serde_json::json!(["b", "c", "e", "f"]))
        .unwrap();
    assert_eq!(bcef["witness"]["lhs"], 10);
    assert_eq!(bcef["witness"]["rhs"], 10);
}

#[test]
fn closures_of_ce() {
    let o = stp(&["closures", &data("ce.txt"), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let block = &v["blocks"][0];
    assert_eq!(block["parallel"].as_array().unwrap().len(), 8);
    assert_eq!(block["coparallel"].as_array().unwrap().len(), 5);
    let nonessential: Vec<&Value> = block["coparallel"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["essential"] == false)
        .map(|c| &c["edges"])
        .collect();
    assert_eq!(nonessential, vec![&serde_json::json!(["bc", "ef"])]);
}

#[test]
fn blocks_of_bowtie() {
    let o = stp(&["blocks", &data("bowtie.txt")]);
    assert!(stdout(&o).starts_with("2 blocks; cut vertices {c}"));
}

#[test]
fn alt_flips() {
    let o = stp(&["alt", &data("c4.txt"), "--flip-parallel", "all", "--format", "text"]);
    let text = stdout(&o);
    assert_eq!(text.matches(">= 2").count(), 4);
    assert!(text.contains("x(bc) + x(cd) + x(da) >= 2"));

    let plain = stp(&["facets", &data("ce.txt")]);
    let alt = stp(&["alt", &data("ce.txt")]);
    assert_eq!(stdout(&plain), stdout(&alt));

    let o = stp(&["alt", &data("k4.txt"), "--flip-locked", "all", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = stp(&["alt", &data("ce.txt"), "--flip-coparallel", "ab+af", "--flip-locked", "a+b+f", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("x(bf) + x(bc) + x(cd) + x(ce) + x(de) + x(ef) <= 4"));
    assert!(text.contains("x(bc) + x(cd) + x(ce) + x(de) + x(ef) >= 3"));
}

#[test]
fn alt_rejects_unknown_references() {
    for bad in [["--flip-parallel", "99"], ["--flip-parallel", "zz"], ["--flip-locked", "b+c+e+f"]] {
        let o = stp(&["alt", &data("ce.txt"), bad[0], bad[1]]);
        assert_eq!(o.status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn verify_command() {
    let dir = tempfile::tempdir().unwrap();
    let sys = stdout(&stp(&["facets", &data("ce.txt")]));
    let good = write_temp(&dir, "good.json", &sys);
    let o = stp(&["verify", &data("ce.txt"), &good]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: PASS"));

    let mut v: Value = serde_json::from_str(&sys).unwrap();
    v["inequalities"].as_array_mut().unwrap().push(serde_json::json!({
        "coeffs": {"bc": 1, "bf": 1, "ce": 1, "ef": 1},
        "sense": "<=",
        "rhs": 3,
        "provenance": {"kind": "rank-bound", "subset": ["b", "c", "e", "f"]}
    }));
    let bad = write_temp(&dir, "bad.json", &v.to_string());
    let o = stp(&["verify", &data("ce.txt"), &bad]);
    assert_eq!(o.status.code(), Some(5));
    let text = stdout(&o);
    assert!(text.contains("row 12: x(bf) + x(bc) + x(ce) + x(ef) <= 3: valid"));
    assert!(text.contains("NOT a facet"));
    assert!(text.contains("redundant row 12"));

    let sys = stdout(&stp(&["facets", &data("k4.txt")]));
    let mut v: Value = serde_json::from_str(&sys).unwrap();
    let rows = v["inequalities"].as_array_mut().unwrap();
    let tri = rows.iter().position(|r| r["provenance"]["kind"] == "locked-subgraph").unwrap();
    rows.remove(tri);
    let missing = write_temp(&dir, "missing.json", &v.to_string());
    let o = stp(&["verify", &data("k4.txt"), &missing]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("missing facet"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write_temp(&dir, "garbage.txt", "a b c d\n");
    assert_eq!(stp(&["facets", &garbage]).status.code(), Some(2));
    assert_eq!(stp(&["facets", "/nonexistent/graph.txt"]).status.code(), Some(2));

    let split = write_temp(&dir, "split.txt", "a b\nc d\n");
    let o = stp(&["facets", &split]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("disconnected"));

    assert_eq!(stp(&["facets", &data("ce.txt"), "--max-n", "4"]).status.code(), Some(4));
    let o = stp_env(&["facets", &data("ce.txt")], &[("STP_MAX_SUBSETS", "16")]);
    assert_eq!(o.status.code(), Some(4));
    let o = stp_env(&["facets", &data("ce.txt")], &[("STP_MAX_SUBSETS", "64")]);
    assert_eq!(o.status.code(), Some(0));
    let o = stp_env(&["facets", &data("ce.txt"), "--verify"], &[("STP_MAX_SUBSETS", "64")]);
    assert_eq!(o.status.code(), Some(0));
    let o = stp_env(&["facets", &data("k4.txt"), "--verify"], &[("STP_MAX_SUBSETS", "64")]);
    assert_eq!(o.status.code(), Some(0));
    let o = stp_env(&["facets", &data("ce.txt"), "--verify"], &[("STP_MAX_SUBSETS", "many")]);
    assert_eq!(o.status.code(), Some(2));

    let loops = write_temp(&dir, "loops.txt", "a b\nb b\nb c\nc a\n");
    let o = stp(&["facets", &loops]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("loop"));
}
