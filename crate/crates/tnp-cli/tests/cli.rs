use serde_json::Value;
use std::path::PathBuf;
use tnp_cli::run_with_io;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tnp").chain(args.iter().copied());
    let code = run_with_io(argv, &mut out, &mut err);
    let doc = serde_json::from_slice(&out).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out)));
    (code, doc, String::from_utf8(err).unwrap())
}

/// Writes a catalog entry to an algebra file.
fn catalog_file(spec: &str, field: Option<&str>) -> String {
    let mut args = vec!["catalog", "show", spec];
    if let Some(f) = field {
        args.extend(["--field", f]);
    }
    let (code, doc, _) = run(&args);
    assert_eq!(code, 0, "{doc}");
    let safe: String = spec.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{safe}_{}.json", field.unwrap_or("q")));
    std::fs::write(&path, serde_json::to_string_pretty(&doc["algebra"]).unwrap()).unwrap();
    path.display().to_string()
}

#[test]
fn check_fixture_exit_codes() {
    let (code, doc, _) = run(&["check", &fixture("n1_tnp.json"), "--axiom", "TNP"]);
    assert_eq!(code, 0);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["command"], "check");
    assert_eq!(doc["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let (code, doc, _) = run(&["check", &fixture("n4_bad.json"), "--axiom", "TNP"]);
    assert_eq!(code, 1);
    assert_eq!(doc["pass"], false);
    assert!(!doc["report"]["witness"].is_null());
}

#[test]
fn usage_errors_exit_2() {
    let (code, doc, _) = run(&["check", &fixture("n1_tnp.json"), "--bogus"]);
    assert_eq!(code, 2);
    assert!(doc["error"].is_string());
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, doc, err) = run(&["check", "/nonexistent/a.json", "--axiom", "TNP"]);
    assert_eq!(code, 2);
    assert!(doc["error"].as_str().unwrap().contains("cannot read"));
    assert!(err.contains("error"));
    let (code, _, _) = run(&["check", &fixture("n1_tnp.json"), "--axiom", "NOPE"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["catalog", "show", "NoSuchThing"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["construct", "--kind", "kantor", &fixture("n1_tnp.json")]);
    assert_eq!(code, 2);
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn repeat_runs_are_byte_identical() {
    let n1 = fixture("n1_tnp.json");
    let sn = catalog_file("SimpleNovikov(p=3,n=1,a=1,b=2)", Some("3"));
    for args in [
        vec!["check", n1.as_str(), "--axiom", "TNP"],
        vec!["identities", n1.as_str()],
        vec!["simple", sn.as_str(), "--jobs", "2"],
        vec!["search-compatible", sn.as_str(), "--enumerate"],
        vec!["catalog", "list"],
    ] {
        let mut a = Vec::new();
        let mut b = Vec::new();
        let argv = || std::iter::once("tnp").chain(args.iter().copied());
        run_with_io(argv(), &mut a, &mut Vec::new());
        run_with_io(argv(), &mut b, &mut Vec::new());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn identities_verb() {
    let (code, doc, _) = run(&["identities", &fixture("n1_tnp.json")]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = doc["reports"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"TID1") && ids.contains(&"TID4"));
    let f = catalog_file("N1-tnp", Some("3"));
    let (code, doc, _) = run(&["identities", &f, "--identity", "TID4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["reports"][0]["status"], "not-applicable");
    let e = catalog_file("Ex2.5(alpha=1)", None);
    let (code, doc, _) = run(&["identities", &e, "--identity", "HOM_NOVIKOV", "--p", "e"]);
    assert_eq!(code, 0, "{doc}");
}

#[test]
fn derivations_and_centroid_verbs() {
    let s = catalog_file("SimpleNovikov(p=3,n=1,a=0,b=0)", Some("3"));
    let (code, doc, _) = run(&["derivations", &s, "--delta", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["space"]["dim"], 1);
    let c = catalog_file("CyclicConv", None);
    let (_, doc, _) = run(&["derivations", &c]);
    assert_eq!(doc["space"]["dim"], 0);
    let e = catalog_file("Ex2.11", None);
    let (code, doc, _) = run(&["centroid", &e, "--op", "dot"]);
    assert_eq!(code, 0);
    assert_eq!(doc["space"]["dim"], 3);
}

#[test]
fn ann_solvable_simple_verbs() {
    let a = catalog_file("Ex3.17", None);
    let (code, doc, _) = run(&["ann", &a]);
    assert_eq!(code, 0);
    assert_eq!(doc["two_sided"]["dim"], 1);
    let (_, doc, _) = run(&["solvable", &a]);
    assert_eq!(doc["solvable"], true);
    assert_eq!(doc["derived_length"], 2);
    let (_, doc, _) = run(&["simple", &a, "--op", "circ"]);
    assert_eq!(doc["simple"], false);
    assert_eq!(doc["method"], "generator-spin");
    assert!(!doc["witness"].is_null());
    let b = catalog_file("Ex3.19", None);
    assert_eq!(run(&["solvable", &b]).1["solvable"], false);
    let s = catalog_file("SimpleNovikov(p=3,n=1)", Some("3"));
    let (_, doc, _) = run(&["simple", &s]);
    assert_eq!(doc["simple"], true);
    assert_eq!(doc["method"], "exhaustive");
}

#[test]
fn construct_verb() {
    let n1 = fixture("n1_tnp.json");
    let ex = catalog_file("Ex2.5(alpha=1)", None);
    let ex11 = catalog_file("Ex2.11", None);
    let eu = catalog_file("EulerRDNP(N=2)", None);
    let s17 = catalog_file("Ex3.17", None);
    let t3 = catalog_file("T3-tnp", None);
    let cases: Vec<Vec<&str>> = vec![
        vec!["--kind", "commutator", &n1],
        vec!["--kind", "centroid-product", &ex11],
        vec!["--kind", "rdnp", &t3],
        vec!["--kind", "tensor", &n1, &ex],
        vec!["--kind", "tensor-mixed", &n1, &eu],
        vec!["--kind", "deform", &ex, "--p", "e", "--q", "2"],
        vec!["--kind", "kantor", &ex11, "--u", "e3"],
        vec!["--kind", "solvable-tnp", &s17],
    ];
    for c in cases {
        let mut args = vec!["construct"];
        args.extend(c.iter().copied());
        let (code, doc, _) = run(&args);
        assert_eq!(code, 0, "{c:?}: {doc}");
        assert_eq!(doc["result"]["pass"], true);
    }
    let (code, doc, _) = run(&["construct", "--kind", "twisted", &n1]);
    assert_eq!(code, 2);
    assert!(doc["error"].as_str().unwrap().contains("dimension 0"));
    let ex21 = catalog_file("Ex3.21", None);
    let (code, doc, _) = run(&["construct", "--kind", "square-ann-tnp", &ex21, "--w", "0,0,0"]);
    assert_eq!(code, 2);
    assert!(doc["error"].as_str().unwrap().contains("hypothesis"));
    let (code, _, _) = run(&["construct", "--kind", "tensor", &n1]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["construct", "--kind", "nope", &n1]);
    assert_eq!(code, 2);
}

#[test]
fn affinize_check_verb() {
    let ex = catalog_file("Ex2.5(alpha=2)", None);
    let (code, doc, _) = run(&["affinize-check", &ex, "--window", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["agree"], true);
    assert_eq!(doc["tnp_pass"], true);
    let (code, doc, _) = run(&["affinize-check", &fixture("n4_bad.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["windowed_tp_pass"], false);
    assert_eq!(run(&["affinize-check", &ex, "--window", "1"]).0, 2);
}

#[test]
fn search_compatible_verb() {
    let n1 = catalog_file("N1", Some("3"));
    let (code, doc, _) = run(&["search-compatible", &n1, "--enumerate", "--jobs", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["solution_count"], 9);
    let t3 = catalog_file("T3", None);
    let (_, doc, _) = run(&["search-compatible", &t3]);
    assert_eq!(doc["linear_dim"], 0);
    assert_eq!(doc["only_zero_certified"], true);
    assert!(doc.get("solutions").is_none());
    let (code, _, _) = run(&["search-compatible", &n1, "--enumerate", "--max", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn catalog_verb() {
    let (code, doc, _) = run(&["catalog", "list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = doc["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"N1-tnp") && names.contains(&"Ex3.21"));
    let (code, doc, _) = run(&["catalog", "show", "N6", "--params", "l=2", "--field", "5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["algebra"]["dim"], 2);
    assert_eq!(run(&["catalog", "show", "N6", "--params", "l=1"]).0, 2);
    assert_eq!(run(&["catalog", "show", "N1", "--field", "4"]).0, 2);
}

#[test]
fn verify_classification_verb() {
    let (code, doc, _) = run(&["verify-classification", "--primes", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["pass"], true);
    assert!(doc["rows"].as_array().unwrap().iter().all(|r| r["pass"] == true));
}
