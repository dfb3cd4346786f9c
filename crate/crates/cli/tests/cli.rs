use std::path::{Path, PathBuf};
use std::process::{Command as Process, Output};

use cocompact_cli::config::Arithmetic;
use cocompact_cli::{parse_spec, run, Command, Overrides};
use serde_json::Value;

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/specs").join(name)
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn cocompact(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_cocompact")).args(args).output().unwrap()
}

const MINIMAL: &str = r#"{
  "group": {"family": "sl", "n": 2},
  "generators": [{"matrix": [[2, 0], ["0", "1/2"]]}],
  "isotropy": {"kind": "wall_union", "theta": ["alpha1"]}
}"#;

#[test]
fn minimal_spec_gets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_spec(&write_spec(dir.path(), "min.json", MINIMAL), &Overrides::default()).unwrap();
    assert_eq!(cfg.radius, 10);
    assert_eq!(cfg.seed, 0);
    assert_eq!(cfg.arithmetic, Arithmetic::Exact);
    assert_eq!(cfg.tolerances.validation, 1e-8);
    assert_eq!(cfg.tolerances.dedup, 1e-8);
    assert_eq!(cfg.scan.intercept_cap, 0.0);
    assert_eq!(cfg.resolved.elements.len(), 1);
    assert_eq!(cfg.resolved.elements[0].0, "g0");
    assert!(cfg.resolved.elements[0].1.is_exact());

    let over = Overrides { radius: Some(3), tolerance: Some(1e-6), seed: Some(9) };
    let cfg = parse_spec(&dir.path().join("min.json"), &over).unwrap();
    assert_eq!((cfg.radius, cfg.tolerances.validation, cfg.seed), (3, 1e-6, 9));
}

#[test]
fn determinant_two_is_rejected_with_its_residual() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(
        dir.path(),
        "det2.json",
        r#"{"group": {"family": "sl", "n": 2},
            "generators": [{"name": "ok", "matrix": [[1, 1], [0, 1]]}, {"name": "bad", "matrix": [[2, 0], [0, 1]]}]}"#,
    );
    let err = format!("{:#}", parse_spec(&p, &Overrides::default()).unwrap_err());
    assert!(err.contains("generator 1 (bad)"), "{err}");
    assert!(err.contains("residual 1.0"), "{err}");
}

#[test]
fn schema_violations_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"group": {"family": "sp", "n": 2}}"#, "unknown variant `sp`"),
        (r#"{"group": {"family": "sl", "n": 2}, "radiuss": 3}"#, "radiuss"),
        (r#"{"group": {"family": "sl", "n": 2}, "tolerances": {"dedup": -1}}"#, "tolerances.dedup"),
        (r#"{"catalog": "missing.json"}"#, "does not exist"),
        (r#"{"root_system": [{"family": "A", "rank": 2, "multiplicities": {"pm": 1, "single": 1, "double": 1}}],
            "points": [[1, 1, 1]]}"#, "Cartan subspace"),
        (r#"{"group": {"family": "sl", "n": 2},
            "generators": [{"matrix": [[1, 0], [0, 1]], "blocks": [[[1, 0], [0, 1]]]}]}"#, "exactly one"),
        (r#"{"generators": [{"matrix": [[1, 0], [0, 1]]}]}"#, "need a `group`"),
        (r#"{"group": {"family": "sl", "n": 2}, "isotropy": {"kind": "wall_union", "theta": ["alpha4"]}}"#, "isotropy"),
        (r#"{"group": {"family": "sl", "n": 2}, "generators": [{"matrix": [["x", 0], [0, 1]]}]}"#, "rational"),
    ];
    for (i, (body, needle)) in cases.iter().enumerate() {
        let p = write_spec(dir.path(), &format!("bad{i}.json"), body);
        let err = format!("{:#}", parse_spec(&p, &Overrides::default()).unwrap_err());
        assert!(err.contains(needle), "case {i}: {err}");
    }
}

#[test]
fn radius_zero_ball_is_one_identity_row() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "min.json", MINIMAL);
    let out = dir.path().join("out");
    let o = cocompact(&["ball", "--spec", spec.to_str().unwrap(), "--radius", "0", "--out", out.to_str().unwrap(), "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("ball.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines, ["index,length,word,mu_1,mu_2,norm", "0,0,e,0.0,0.0,0.0"]);
    assert!(!out.join("ball.json").exists());
}

#[test]
fn verdicts_are_not_exit_codes() {
    let o = cocompact(&["sharpness", "--spec", shipped("sl3_wall_cyclic.json").to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["verdict"], "VIOLATION");

    let dir = tempfile::tempdir().unwrap();
    let bad = write_spec(dir.path(), "bad.json", r#"{"group": {"family": "sl", "n": 1}}"#);
    let o = cocompact(&["mu", "--spec", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert!(!cocompact(&["mu"]).status.success());
    // a subcommand missing its inputs is an error too
    let o = cocompact(&["anosov", "--spec", shipped("divxa_a2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn catalog_file_works_as_a_spec() {
    let catalog = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/catalog/nonexistence.json");
    let o = cocompact(&["obstruction", "--spec", catalog.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let series = v["result"]["series"].as_array().unwrap();
    assert_eq!(series.len(), 7);
    assert!(series.iter().all(|r| r["status"] == "NO_COMPACT_QUOTIENTS"));
    assert_eq!(v["config"]["catalog"], "nonexistence.json");
}

#[test]
fn builtin_catalogs_resolve() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(dir.path(), "known.json", r#"{"catalog": "builtin:known_quotients.json"}"#);
    let cfg = parse_spec(&p, &Overrides::default()).unwrap();
    let r = run(Command::Obstruction, &cfg).unwrap();
    for v in r.json["result"]["verdicts"].as_array().unwrap() {
        assert_eq!(v["status"], "NOT_OBSTRUCTED_BY_THIS_METHOD", "{}", v["case"]);
    }
    let csv = &r.tables[0];
    assert_eq!(csv.header[0], "series");
    assert_eq!(csv.rows.len(), 6);
}

#[test]
fn every_report_echoes_the_effective_config() {
    let cfg = parse_spec(&shipped("sl3_sharp_cyclic.json"), &Overrides { radius: Some(4), ..Default::default() }).unwrap();
    for command in [Command::Mu, Command::Jordan, Command::Ball, Command::Sharpness, Command::Anosov, Command::LimitCone, Command::Chambers, Command::TauGap] {
        let r = run(command, &cfg).unwrap();
        assert_eq!(r.json["command"], command.name());
        let c = &r.json["config"];
        assert_eq!(c["radius"], 4);
        assert_eq!(c["spec_file"], "sl3_sharp_cyclic.json");
        assert_eq!(c["tolerances"]["validation"], 1e-8);
        assert_eq!(c["scan"]["stability_rel"], 0.25);
        assert!(c.get("resolved").is_none());
    }
}

#[test]
fn stdout_csv_and_float_formatting() {
    let o = cocompact(&["mu", "--spec", shipped("sl3_sharp_cyclic.json").to_str().unwrap(), "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text, "name,mu_1,mu_2,mu_3,norm\ng,0.69314718056,0.69314718056,-1.38629436112,1.69785690902\n");
}

#[test]
fn float_arithmetic_matches_exact() {
    let mut cfg = parse_spec(&shipped("sl2_schottky.json"), &Overrides { radius: Some(4), ..Default::default() }).unwrap();
    let exact = run(Command::Ball, &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(shipped("sl2_schottky.json")).unwrap();
    let float = text.replacen('{', "{\"arithmetic\": \"float\",", 1);
    cfg = parse_spec(&write_spec(dir.path(), "f.json", &float), &Overrides { radius: Some(4), ..Default::default() }).unwrap();
    assert!(!cfg.resolved.elements[0].1.is_exact());
    let approx = run(Command::Ball, &cfg).unwrap();
    assert_eq!(exact.json["result"]["sphere_sizes"], serde_json::json!([1, 4, 12, 36, 108]));
    assert_eq!(exact.json["result"]["sphere_sizes"], approx.json["result"]["sphere_sizes"]);
}

#[test]
fn seeded_sampling_is_reproducible_and_seed_sensitive() {
    let path = shipped("a3_middle_walls.json");
    let sampling = |seed| {
        let cfg = parse_spec(&path, &Overrides { seed: Some(seed), ..Default::default() }).unwrap();
        run(Command::Chambers, &cfg).unwrap().json["result"]["sampling"].clone()
    };
    assert_eq!(sampling(7), sampling(7));
    assert_ne!(sampling(7)["per_component"], sampling(8)["per_component"]);
    let total: u64 = sampling(3)["per_component"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(total + sampling(3)["on_wall"].as_u64().unwrap(), 200);
}

#[test]
fn tau_gap_points_and_crosscheck() {
    let cfg = parse_spec(&shipped("sl3_tau_gap.json"), &Overrides::default()).unwrap();
    let r = run(Command::TauGap, &cfg).unwrap().json["result"].clone();
    let taus: Vec<&str> = r["points"].as_array().unwrap().iter().map(|p| p["tau_exact"].as_str().unwrap()).collect();
    // tau is the smaller of the facet form 2x1 - x2 - x3 (or its mirror) and
    // the simple root it shares a sign with; (1,0,-1) lies on a wall
    assert_eq!(taus, ["3", "3", "3/2", "0"]);
    assert_eq!(r["crosscheck"]["agree"], true);
    assert!(r["crosscheck"]["mismatches"].as_array().unwrap().is_empty());
}
