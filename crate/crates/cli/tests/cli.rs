use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_keller-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn bundled_catalog() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/catalog.json")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

const ONE: &str = r#"{"i": 1, "j": 0, "re": ["1", "1"], "im": ["0", "1"]}"#;

fn entry(name: &str, tags: &str, first: &str, second: &str) -> String {
    format!(
        r#"{{"name": "{name}", "tags": [{tags}], "map": {{"first": {{"terms": [{first}]}}, "second": {{"terms": [{second}]}}}}}}"#
    )
}

fn term(i: u32, j: u32) -> String {
    format!(r#"{{"i": {i}, "j": {j}, "re": ["1", "1"], "im": ["0", "1"]}}"#)
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn validate_bundled_catalog() {
    let o = run(&["validate", path_str(&bundled_catalog())]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("12 maps, tags consistent"));
}

#[test]
fn validate_rejects_bad_catalogs() {
    let dir = tempfile::tempdir().unwrap();
    let square = entry("square", r#""keller""#, &term(2, 0), &term(0, 1));
    let p = write(&dir, "mismatch.json", &format!(r#"{{"maps": [{square}]}}"#));
    let o = run(&["validate", path_str(&p)]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("square"), "{}", stderr(&o));

    let id = entry("shear", r#""keller""#, ONE, &term(0, 1));
    let p = write(&dir, "dup.json", &format!(r#"{{"maps": [{id}, {id}]}}"#));
    let o = run(&["validate", path_str(&p)]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("shear"));

    let p = write(&dir, "junk.json", "{\"maps\": [\n  {\"name\": 3}\n]}");
    let o = run(&["validate", path_str(&p)]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn compose_decompose_invert() {
    let o = run(&["compose", "shear_x", "shear_y"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("keller: true"));

    let o = run(&["decompose", "swap_square"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("reproduces the map: true"));

    let o = run(&["invert", "shear_x"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("(-1*Y^2 + X, Y)"), "{}", stdout(&o));

    let o = run(&["invert", "shear_x", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.get("first").is_some());
}

#[test]
fn decomposing_a_non_automorphism_is_a_module_error() {
    let o = run(&["decompose", "power_x2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not Keller"));
}

#[test]
fn degree_of_power_map() {
    let o = run(&["degree", "power_x2y3", "--trials", "8", "--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("geometric degree of power_x2y3: 6"));
}

#[test]
fn input_errors_exit_3() {
    assert_eq!(code(&run(&["compose", "nope", "identity"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&["rho", "identity", "translate", "--samples", "10"])), 3);
    assert_eq!(code(&run(&["rho", "identity", "translate", "--domain", "disk:2"])), 3);
    assert_eq!(code(&run(&["compose", "identity", "identity", "--workers", "0"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn rho_writes_a_measurement() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rho.json");
    let o = run(&["rho", "identity", "translate", "--samples", "20000", "--seed", "4", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for field in ["operation", "inputs", "seed", "samples", "value", "stderr", "wall_time_ms"] {
        assert!(v.get(field).is_some(), "missing {field}");
    }
    // At most 12 significant digits on the terminal.
    let line = stdout(&o).lines().next().unwrap().to_string();
    let value = line.split(" = ").nth(1).unwrap().split(' ').next().unwrap();
    assert!(value.chars().filter(|c| c.is_ascii_digit()).count() <= 12, "{line}");
    assert_eq!(value.parse::<f64>().unwrap(), format!("{:.11e}", v["value"].as_f64().unwrap()).parse::<f64>().unwrap());
}

#[test]
fn experiment_report_replays_with_other_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"kind": "contraction", "seed": 3, "samples": 20000, "domain": "ball:1", "scales": [1, 2], "outer": ["identity"]}"#,
    );
    let (r1, r2, csv) = (dir.path().join("r1.json"), dir.path().join("r2.json"), dir.path().join("r.csv"));
    let o = run(&[
        "experiment", "contraction", "--config", path_str(&cfg), "--out", path_str(&r1), "--csv", path_str(&csv),
        "--workers", "3",
    ]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("assertions: "));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 3);
    assert!(rows.lines().skip(1).all(|r| r.split(',').nth(4) == Some("1")), "{rows}");

    let o = run(&["experiment", "contraction", "--config", path_str(&r1), "--out", path_str(&r2), "--workers", "1"]);
    assert_eq!(code(&o), 0);
    let load = |p: &Path| {
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(load(&r1), load(&r2));
}

#[test]
fn experiment_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let no_seed = write(&dir, "a.json", r#"{"kind": "contraction"}"#);
    assert_eq!(code(&run(&["experiment", "contraction", "--config", path_str(&no_seed)])), 3);
    let other = write(&dir, "b.json", r#"{"kind": "tract_survey", "seed": 0}"#);
    assert_eq!(code(&run(&["experiment", "contraction", "--config", path_str(&other)])), 3);
    let unknown = write(&dir, "c.json", r#"{"kind": "contraction", "seed": 0, "colour": 1}"#);
    assert_eq!(code(&run(&["experiment", "contraction", "--config", path_str(&unknown)])), 3);
    assert_eq!(code(&run(&["experiment", "nonsense", "--config", path_str(&other)])), 3);
}

#[test]
fn failed_assertion_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // (XY, Y) has geometric degree 1; the catalog claims 2.
    let xy = entry("xy", r#""exploratory""#, &term(1, 1), &term(0, 1)).replacen('{', r#"{"expected_degree": 2, "#, 1);
    let catalog = write(&dir, "cat.json", &format!(r#"{{"maps": [{xy}]}}"#));
    let cfg = write(&dir, "d.json", r#"{"kind": "degree_multiplicativity", "seed": 0, "maps": ["xy"], "pairs": []}"#);
    let out = dir.path().join("d-report.json");
    let o = run(&[
        "--catalog", path_str(&catalog), "experiment", "degree_multiplicativity", "--config", path_str(&cfg), "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&o), 2, "{}{}", stdout(&o), stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["exit_code"], 2);
    assert_eq!(report["passed"], false);

    let o = run(&["--catalog", path_str(&catalog), "degree", "xy"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn tract_search_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tracts.json");
    let o = run(&["tracts", "search", "xy", "--alpha-max", "2", "--beta-max", "2", "--phi-deg", "1", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("(α=1, β=1, Φ=0)  →  xy∘R = (Y, X*Y)"), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["tracts"].as_array().unwrap().len(), 3);

    let o = run(&["tracts", "search", "shear_x", "--alpha-max", "2", "--beta-max", "3", "--phi-deg", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("0 tracts"));
}

#[test]
fn charset_build_feeds_rho() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.json");
    let o = run(&["charset", "build", "--out", path_str(&set), "--radius", "2", "--slices", "2", "--bundles", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("volume 78.9568352087"), "{}", stdout(&o));
    let domain = format!("charset:{}", path_str(&set));
    let o = run(&["rho", "identity", "identity", "--domain", &domain, "--samples", "10000"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("rho(identity, identity) = 0 ± 0"), "{}", stdout(&o));

    assert_eq!(code(&run(&["charset", "build", "--out", path_str(&set), "--radius", "0.5"])), 3);
}
