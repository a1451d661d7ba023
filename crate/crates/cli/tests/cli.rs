use std::io::Write;
use std::process::Command;

use ksa_cli::run_args;
use ksa_core::superalgebra::{super_jacobi_check, GeometryLabel, StructureConstantsDoc};
use ksa_core::StructureConstants;
use serde_json::Value;

fn ksa(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ksa")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn config_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn default_verify_passes() {
    let (code, out, _) = ksa(&["verify"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for n in ["gamma_identities", "fierz", "cohomology_dimension", "integrability", "super_jacobi"] {
        assert!(names.contains(&n), "{names:?}");
    }
}

#[test]
fn corrupted_fixture_fails_jacobi() {
    let cfg = config_file("fixture = \"corrupted-bracket\"\n");
    let (code, out, _) = ksa(&["verify", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let jacobi = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "super_jacobi").unwrap();
    assert_eq!(jacobi["passed"], false);
}

#[test]
fn chiral_with_nonzero_b_is_a_config_error() {
    let (code, out, err) = ksa(&["verify", "--module", "chiral", "-b", "1/2"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("H²,² = 0"), "{err}");
    let (code, _, _) = ksa(&["verify", "--module", "chiral", "-b", "0"]);
    assert_eq!(code, 0);
}

#[test]
fn malformed_inputs_exit_two() {
    let cfg = config_file("signature = \n");
    assert_eq!(ksa(&["verify", "--config", cfg.path().to_str().unwrap()]).0, 2);
    assert_eq!(ksa(&["verify", "--config", "/nonexistent/ksa.toml"]).0, 2);
    assert_eq!(ksa(&["verify", "--signature", "3,1"]).0, 2);
    assert_eq!(ksa(&["verify", "--tolerance", "rd"]).0, 2);
    assert_eq!(ksa(&["verify", "--tolerance", "bogus=1"]).0, 2);
    assert_eq!(ksa(&["frobnicate"]).0, 2);
    assert_eq!(ksa(&["verify", "--bilinear", "1,0;0,0"]).0, 2);
}

#[test]
fn flags_override_file() {
    let cfg = config_file("signature = \"(0,2)\"\nbilinear = \"+\"\nb = \"1/2\"\n");
    let path = cfg.path().to_str().unwrap();
    let (_, out, _) = ksa(&["deform", "--config", path]);
    let doc: StructureConstantsDoc = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.sigma_b, 1);
    assert_eq!(doc.deformation_parameter, "1/2");
    let (_, out, _) = ksa(&["deform", "--config", path, "--bilinear", "-", "-b", "3"]);
    let doc: StructureConstantsDoc = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.sigma_b, -1);
    assert_eq!(doc.deformation_parameter, "3");
}

#[test]
fn deform_ads2_example() {
    let (code, out, _) = ksa(&["deform", "--signature", "1,1", "--bilinear", "-", "-b", "1"]);
    assert_eq!(code, 0);
    let doc: StructureConstantsDoc = serde_json::from_str(&out).unwrap();
    let pp = doc.brackets.iter().find(|e| e.left == "P_0" && e.right == "P_1").unwrap();
    assert_eq!(pp.result.len(), 1);
    assert_eq!(pp.result["L_*"], "4");
    assert_eq!(doc.geometry.as_ref().unwrap().label, GeometryLabel::AdS2);
    assert!(out.contains("\"AdS2\""));
}

#[test]
fn deform_h2_label_and_curvature() {
    let (_, out, _) = ksa(&["deform", "--signature", "0,2", "--bilinear", "+", "-b", "1/2"]);
    let doc: StructureConstantsDoc = serde_json::from_str(&out).unwrap();
    let g = doc.geometry.unwrap();
    assert_eq!(g.label, GeometryLabel::H2);
    assert_eq!(g.scalar_curvature, "-2");
}

#[test]
fn deform_zero_is_flat() {
    let (_, out, _) = ksa(&["deform", "-b", "0"]);
    let doc: StructureConstantsDoc = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.geometry.as_ref().unwrap().label, GeometryLabel::Flat);
    assert!(ksa_cli::commands::is_flat_doc(&doc));
    let (_, out, _) = ksa(&["deform", "-b", "1"]);
    let doc: StructureConstantsDoc = serde_json::from_str(&out).unwrap();
    assert!(!ksa_cli::commands::is_flat_doc(&doc));
}

#[test]
fn deformation_json_round_trips_through_jacobi() {
    for args in [
        ["deform", "--signature", "1,1", "--bilinear", "+", "-b", "2"],
        ["deform", "--signature", "1,1", "--bilinear", "-", "-b", "-1/3"],
        ["deform", "--signature", "0,2", "--bilinear", "+", "-b", "5/2"],
        ["deform", "--signature", "0,2", "--bilinear", "-", "-b", "7"],
    ] {
        let (_, out, _) = run_args(std::iter::once("ksa").chain(args));
        let doc: StructureConstantsDoc = serde_json::from_str(&out).unwrap();
        let sc = StructureConstants::from_doc(&doc).unwrap();
        assert!(super_jacobi_check(&sc).is_empty(), "{args:?}");
        assert_eq!(sc.to_doc().brackets, doc.brackets);
    }
}

#[test]
fn tables_are_byte_stable() {
    let a = ksa(&["tables"]);
    let b = ksa(&["tables"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    assert!(a.1.contains("| εᵀΩε′ | − | − | − | + | + |"));
    for fmt in ["csv", "json"] {
        assert_eq!(ksa(&["tables", "--format", fmt]).1, ksa(&["tables", "--format", fmt]).1);
    }
    let json: Value = serde_json::from_str(&ksa(&["tables", "--format", "json"]).1).unwrap();
    assert_eq!(json["summary"]["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn cohomology_command() {
    let (code, out, _) = ksa(&["cohomology", "--signature", "0,2", "--bilinear", "-"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["canonical_rep"]["b_tensor"], serde_json::json!([["1", "0"], ["0", "1"]]));
    let (_, out, _) = ksa(&["cohomology", "--module", "chiral", "-b", "0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dimension"], 0);
    let (_, md, _) = ksa(&["cohomology", "--format", "markdown"]);
    assert!(md.starts_with("dim H²,² = 1"));
}

#[test]
fn geometry_command() {
    let (code, out, _) = ksa(&["geometry", "--signature", "0,2", "--bilinear", "-", "-b", "1/2", "--geometry", "H2"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["killing_spinors"]["dimension"], 2);
    assert_eq!(v["scalar_curvature_target"], -2.0);

    let (code, _, _) = ksa(&["geometry", "--signature", "1,1", "--bilinear", "+", "--geometry", "dS2"]);
    assert_eq!(code, 0);
    // dS₂ does not carry σ_B = − Killing spinors
    let (code, out, _) = ksa(&["geometry", "--signature", "1,1", "--bilinear", "-", "--geometry", "dS2", "--format", "csv"]);
    assert_eq!(code, 1);
    assert!(out.contains("rd_vanishes,false"));

    let (code, _, _) = ksa(&["geometry"]);
    assert_eq!(code, 2);
    let (code, _, _) = ksa(&["geometry", "--geometry", "H2"]);
    assert_eq!(code, 2);
}

#[test]
fn perturbed_metric_fixture() {
    let cfg = config_file(
        "signature = \"0,2\"\nbilinear = \"-\"\nb = 0.5\ngeometry = \"H2\"\nfixture = \"perturbed-metric\"\n",
    );
    let (code, out, _) = ksa(&["verify", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let dim = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "geometry.killing_spinor_dimension").unwrap();
    assert_eq!(dim["passed"], false);
}

#[test]
fn tolerance_flag_is_applied() {
    // an absurdly tight tolerance makes the numeric Jacobi check fail
    let (code, out, _) = ksa(&[
        "verify", "--signature", "0,2", "-b", "1/2", "--geometry", "H2", "--tolerance", "jacobi=1e-300", "--format", "csv",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("geometry.killing_jacobi,false"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = ksa(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("tables"));
}
