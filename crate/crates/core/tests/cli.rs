use std::process::{Command, Output};

fn el(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_el"))
        .args(args)
        .output()
        .expect("el runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_prints_seven_entries() {
    let o = el(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        text.lines().filter(|l| l.contains(")  diagonal")).count(),
        7
    );
    assert!(text.contains("3)  diagonal (2,2,2,0,2)"));
}

#[test]
fn list_json_is_an_array_of_matrices() {
    let o = el(&["list", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 7);
    assert_eq!(arr[0]["p"], 5);
    assert_eq!(arr[0]["matrix"][2][2], 0);
    assert_eq!(arr[0]["parity"][2], "odd");
}

#[test]
fn list_unknown_id() {
    let o = el(&["list", "-m", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown registry matrix id 9"));
}

#[test]
fn build_reports_superdimension_and_maximal_root() {
    let text = stdout(&el(&["build", "-m", "1"]));
    assert!(text.contains("superdimension (55|32)"));
    assert!(text.contains("positive roots 41 (even 25, odd 16)"));
    assert!(text.contains("maximal root (2,2,3,3,4) height 14 weight mod 5 (1,0,0,0,0)"));
    let text = stdout(&el(&["build", "-m", "5"]));
    assert!(text.contains("maximal root (5,2,6,3,4) height 20 weight mod 5 (4,0,0,0,0)"));
}

#[test]
fn build_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sl2.json");
    std::fs::write(&path, r#"{"p": 5, "n": 1, "matrix": [[2]]}"#).unwrap();
    let o = el(&["build", "-f", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("superdimension (3|0)"));

    let o = el(&["build", "-f", path.to_str().unwrap(), "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let o = el(&["build", "-f", path.to_str().unwrap(), "--p", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = el(&["build", "-m", "1", "--p", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("singular.json");
    std::fs::write(&path, r#"{"p": 5, "n": 2, "matrix": [[2, -2], [-2, 2]]}"#).unwrap();
    assert_eq!(
        el(&["build", "-f", path.to_str().unwrap()]).status.code(),
        Some(3)
    );
    assert_eq!(
        el(&["build", "-m", "1", "--max-height", "13"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        el(&["build", "-m", "1", "--max-height", "14"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn build_json_lists_roots() {
    let v: serde_json::Value =
        serde_json::from_slice(&el(&["build", "-m", "2", "--json"]).stdout).unwrap();
    assert_eq!(v["superdimension"]["even"], 55);
    assert_eq!(v["root_count"], 41);
    assert_eq!(v["roots"].as_array().unwrap().len(), 41);
    assert_eq!(
        v["maximal_root"]["coeffs"],
        serde_json::json!([2, 2, 6, 3, 4])
    );
}

#[test]
fn invert_prints_residues() {
    let text = stdout(&el(&["invert", "-m", "6"]));
    assert_eq!(
        text,
        "2 0 3 3 4\n0 0 0 2 0\n3 0 1 1 3\n3 2 1 3 4\n4 0 3 4 2\n"
    );
}

#[test]
fn reflect_finds_the_class() {
    let o = el(&["reflect", "-m", "1", "-i", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("class 2 via permutation"));
    let v: serde_json::Value =
        serde_json::from_slice(&el(&["reflect", "-m", "1", "-i", "3", "--json"]).stdout).unwrap();
    assert_eq!(v["class"], 2);
}

#[test]
fn reflect_at_even_root_exits_four() {
    let o = el(&["reflect", "-m", "1", "-i", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not applicable"));
    assert_eq!(
        el(&["reflect", "-m", "1", "-i", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn table_matches_the_published_one() {
    let expected = "     1 2 3 4 5\n 1)  - - 2 3 4\n 2)  5 - 1 - -\n 3)  - - - 1 -\n 4)  - 6 - - 1\n 5)  2 - - - -\n 6)  - 4 - 7 -\n 7)  - - - 6 -\n";
    assert_eq!(stdout(&el(&["table"])), expected);
    assert_eq!(stdout(&el(&["table", "-m", "5"])), expected);
}

#[test]
fn table_json_shape() {
    let v: serde_json::Value = serde_json::from_slice(&el(&["table", "--json"]).stdout).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 7);
    assert_eq!(v["cells"][5], serde_json::json!([null, 4, null, 7, null]));
}

#[test]
fn json_output_is_stable() {
    let a = el(&["table", "--json"]).stdout;
    let b = el(&["table", "--json"]).stdout;
    assert_eq!(a, b);
    let a = el(&["orbit", "--format", "json"]).stdout;
    let b = el(&["orbit", "--format", "json"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn orbit_dot() {
    let text = stdout(&el(&["orbit", "-m", "1", "--format", "dot"]));
    assert!(text.starts_with("digraph orbit {"));
    assert_eq!(text.matches(" -> ").count(), 12);
}

#[test]
fn verify_listed_and_serre() {
    let o = el(&["verify", "-m", "4", "--relations", "paper:4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3/3 relations vanish"));
    let o = el(&["verify", "-m", "1", "--relations", "serre"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_file_with_nonzero_residual() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.rel");
    std::fs::write(&path, "[x1,x3]\n").unwrap();
    let arg = format!("file:{}", path.display());
    let o = el(&["verify", "-m", "1", "--relations", &arg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("nonzero residual (1)"));
    let v: serde_json::Value =
        serde_json::from_slice(&el(&["verify", "-m", "1", "--relations", &arg, "--json"]).stdout)
            .unwrap();
    assert_eq!(v[0]["zero"], false);
    assert_eq!(v[0]["weight"], serde_json::json!([1, 0, 1, 0, 0]));
    assert_eq!(v[0]["residual"], serde_json::json!([1]));
}

#[test]
fn verify_bad_sources() {
    assert_eq!(
        el(&["verify", "-m", "1", "--relations", "paper:8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        el(&["verify", "-m", "1", "--relations", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        el(&[
            "verify",
            "-m",
            "1",
            "--relations",
            "file:/nonexistent/x.rel"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn render_formats() {
    let dot = stdout(&el(&["render", "-m", "1", "--format", "dot"]));
    assert!(dot.contains("n3 -- n4 [style=dotted];"));
    let ascii = stdout(&el(&["render", "-m", "3", "--format", "ascii"]));
    assert_eq!(ascii.matches("(x)").count(), 1);
    assert!(ascii.contains("4(x)"));
    let o = el(&["render", "-m", "1", "--format", "svg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn discover_lists_relations() {
    let o = el(&["discover", "-m", "1", "--height", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("weight (0,0,1,1,1)  free 2  model 1  ideal 0  new 1"));
    assert_eq!(
        el(&["discover", "-m", "1", "--height", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn dump_registry_round_trips() {
    let o = el(&["--dump-registry"]);
    let v: Vec<elduque::cartan::CartanFile> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.len(), 7);
    for (k, f) in v.iter().enumerate() {
        let spec = elduque::cartan::CartanSpec::from_file(f).unwrap();
        assert_eq!(
            spec,
            elduque::cartan::CartanSpec::registry(k as u32 + 1).unwrap()
        );
    }
}

#[test]
fn missing_source_is_a_usage_error() {
    assert_eq!(el(&["build"]).status.code(), Some(2));
    assert_eq!(el(&[]).status.code(), Some(2));
    assert_eq!(
        el(&["build", "-m", "1", "-f", "x.json"]).status.code(),
        Some(2)
    );
}
