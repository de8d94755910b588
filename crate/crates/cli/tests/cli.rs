use std::process::{Command, Output};

use serde_json::Value;
use species_forge_cli::{cmd_check, suite_checks, validate_max_n, RunConfig, Status, Suite};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_species-forge")).args(args).env_remove("SPECIES_FORGE_CEILING").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn status_of<'a>(report: &'a Value, check: &str) -> &'a str {
    report["checks"].as_array().unwrap().iter().find(|c| c["check"] == check).unwrap()["status"].as_str().unwrap()
}

#[test]
fn partitions_pass_the_full_suite() {
    let r = cmd_check(&RunConfig::new("Pi", Suite::Full, 4)).unwrap();
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.checks.len(), suite_checks(Suite::Full).len());
    for c in &r.checks {
        assert!(!c.unexpected(), "{}: {:?}", c.check, c.witness);
        assert_ne!(c.status, Status::Fatal);
    }
    // order and bases checks all run on Pi
    for name in ["order_closure", "lower_lattice", "reconstruct_pi", "basis_theorem", "duality"] {
        assert_eq!(r.checks.iter().find(|c| c.check == name).unwrap().status, Status::Pass, "{name}");
    }
}

#[test]
fn linear_orders_fail_as_expected() {
    let o = forge(&["check", "--species", "L", "--suite", "full", "--max-n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    for check in ["commutative", "selfcompat_direct", "selfcompat_local"] {
        let c = r["checks"].as_array().unwrap().iter().find(|c| c["check"] == check).unwrap();
        assert_eq!(c["status"], "fail", "{check}");
        assert_eq!(c["expected"], "fail", "{check}");
        assert!(c["witness"].is_object());
    }
    assert_eq!(status_of(&r, "selfcompat_agree"), "pass");
    assert_eq!(status_of(&r, "order_closure"), "skip");
}

#[test]
fn free_monoid_on_colored_maps_is_strongly_self_dual() {
    let o = forge(&["check", "--species", "S(E_C:2)", "--suite", "ssd", "--max-n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    for check in ["selfcompat_direct", "selfcompat_local", "fsd", "primitives", "fmu", "decomposition"] {
        assert_eq!(status_of(&r, check), "pass", "{check}");
    }
}

#[test]
fn reports_are_byte_stable_and_seeded() {
    let args = ["check", "--species", "E_C:2", "--suite", "ssd", "--max-n", "3", "--seed", "11"];
    let (a, b) = (forge(&args), forge(&args));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["seed"], 11);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["elapsed_ms"].is_null()));
    let timed = json(&forge(&["check", "--species", "E", "--checks", "associative", "--max-n", "2", "--timings"]));
    assert!(timed["checks"][0]["elapsed_ms"].is_u64());
}

#[test]
fn dimension_tables() {
    let dims = |spec: &str, n: &str| {
        let r = json(&forge(&["table", "--species", spec, "--max-n", n]));
        r["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(dims("Pi", "5"), vec![1, 1, 2, 5, 15, 52]);
    assert_eq!(dims("Perm", "5"), vec![1, 1, 2, 6, 24, 120]);
    assert_eq!(dims("E_C:3", "4"), vec![1, 3, 9, 27, 81]);
}

#[test]
fn structure_constants_of_sets() {
    let r = json(&forge(&["table", "--species", "E", "--max-n", "2", "--constants"]));
    // one block per ordered decomposition (S, T) of {1..n}, n <= 2
    let blocks = r["constants"].as_array().unwrap();
    assert_eq!(blocks.len(), 1 + 2 + 4);
    for b in blocks {
        assert_eq!(b["product"].as_array().unwrap().len(), 1);
        assert_eq!(b["coproduct"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn hasse_diagrams() {
    let dot = |spec: &str, n: &str| String::from_utf8(forge(&["hasse", "--species", spec, "--max-n", n, "--output", "dot"]).stdout).unwrap();
    let edges = |d: &str| d.lines().filter(|l| l.contains("->")).count();
    let nodes = |d: &str| d.lines().filter(|l| l.trim_end().ends_with("\";") && !l.contains("->")).count();
    let pi = dot("Pi", "3");
    assert!(pi.starts_with("digraph"));
    assert_eq!((nodes(&pi), edges(&pi)), (5, 6));
    let maps = dot("E_C:2", "2");
    assert_eq!((nodes(&maps), edges(&maps)), (4, 0));
    let perm = dot("Perm", "3");
    assert_eq!(nodes(&perm), 6);
    let cycles: Vec<&str> = perm.lines().filter(|l| l.contains("-> \"(1 2 3)\"") || l.contains("-> \"(1 3 2)\"")).collect();
    assert_eq!(cycles.len(), 6);
    let l = forge(&["hasse", "--species", "L", "--max-n", "3"]);
    assert_eq!(l.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&l.stderr).contains("not commutative"));
}

#[test]
fn configuration_errors_exit_three() {
    assert_eq!(forge(&["check", "--species", "Foo"]).status.code(), Some(3));
    let bad = forge(&["check", "--species", "Pi", "--checks", "associative,nonsense"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("nonsense"));
    assert!(bad.stdout.is_empty());
    assert_eq!(forge(&["check", "--species", "Pi", "--max-n", "6"]).status.code(), Some(3));
    assert_eq!(forge(&["--version"]).status.code(), Some(0));
    assert!(validate_max_n(6, Some("6")).is_ok());
    assert!(validate_max_n(6, None).is_err());
    assert!(validate_max_n(2, Some("x")).is_err());
}

#[test]
fn named_checks_run_in_the_given_order() {
    let mut cfg = RunConfig::new("Perm", Suite::Axioms, 3);
    cfg.checks = Some(vec!["counital".into(), "associative".into()]);
    let r = cmd_check(&cfg).unwrap();
    let names: Vec<&str> = r.checks.iter().map(|c| c.check.as_str()).collect();
    assert_eq!(names, vec!["counital", "associative"]);
}

#[test]
fn unexpected_failures_exit_one() {
    // Pi's coproduct is not bijective, so f^pi cannot be built
    let o = forge(&["fpi", "--species", "Pi", "--max-n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["status"], "fail");
}

#[test]
fn fail_fast_ignores_declared_failures() {
    let mut cfg = RunConfig::new("L", Suite::Full, 3);
    cfg.checks = Some(vec!["primitives".into(), "commutative".into(), "associative".into()]);
    cfg.fail_fast = true;
    let r = cmd_check(&cfg).unwrap();
    let got: Vec<Status> = r.checks.iter().map(|c| c.status).collect();
    assert_eq!(got, vec![Status::Skip, Status::Fail, Status::Pass]);
    assert_eq!(r.exit_code, 0);
}

#[test]
fn connected_species_without_product_skip() {
    let r = cmd_check(&RunConfig::new("X_C:2", Suite::Axioms, 2)).unwrap();
    assert!(r.checks.iter().all(|c| c.status == Status::Skip));
    assert_eq!(r.exit_code, 0);
}

#[test]
fn construction_commands() {
    let a = json(&forge(&["antipode", "--species", "Pi", "--max-n", "2", "--variant", "mu-mu"]));
    let rows = a["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1 + 1 + 2);
    assert!(rows.iter().any(|r| r["input"] == "{{1,2}}" && r["output"] == "-1*{{1,2}}"));
    let p = json(&forge(&["primitives", "--species", "Perm", "--max-n", "3"]));
    assert_eq!(p["rows"].as_array().unwrap().iter().filter(|r| r["n"] == 3).count(), 2);
    let f = forge(&["fmu", "--species", "Perm", "--max-n", "3"]);
    assert_eq!(f.status.code(), Some(0));
    assert_eq!(json(&f)["rows"].as_array().unwrap().len(), 1 + 1 + 2 + 6);
    let g = forge(&["fpi", "--species", "S(X_C:2)", "--max-n", "2"]);
    assert_eq!(json(&g)["status"], "pass");
    let rp = forge(&["reconstruct-pi", "--species", "Perm", "--max-n", "3", "--output", "md"]);
    assert_eq!(rp.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&rp.stdout).contains("status: pass"));
}

#[test]
fn markdown_report() {
    let o = forge(&["check", "--species", "E", "--suite", "axioms", "--max-n", "2", "--output", "md"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# E"));
    assert!(text.contains("| associative | pass | pass |"));
    assert!(text.trim_end().ends_with("exit code 0"));
}
