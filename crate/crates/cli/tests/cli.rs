use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn trinoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinoid")).args(args).output().expect("run trinoid")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn classify_statuses() {
    for (angles, status) in [
        ("2/3,2/3,2/3", "IrreducibleUnique"),
        ("1/2,1/2,1/2", "IrreducibleUnique"),
        ("2,1/2,1/2", "ReducibleC1"),
        ("3,3,3", "ReducibleC2"),
        ("2,1/3,1/3", "Empty"),
        ("1,0.5,0.7", "ExcludedAngleIsPi"),
    ] {
        let v = json(&trinoid(&["classify", "--angles", angles]));
        assert_eq!(v["status"], status, "{angles}");
        assert_eq!(v["schema_version"], 1);
    }
    let v = json(&trinoid(&["classify", "--angles", "5,1,1", "--target", "s2"]));
    assert_eq!(v["status"], "Empty");
}

#[test]
fn radians_match_pi_multiples() {
    let a = json(&trinoid(&["classify", "--angles", "0.5,0.5,0.5"]));
    let r = std::f64::consts::FRAC_PI_2.to_string();
    let b = json(&trinoid(&["classify", "--angles", &format!("{r},{r},{r}"), "--units", "rad"]));
    assert_eq!(a["status"], b["status"]);
    assert_eq!(a["hanbetu"]["holds"], b["hanbetu"]["holds"]);
}

#[test]
fn classify_and_monodromy_are_byte_identical_across_runs() {
    for args in [
        &["classify", "--angles", "2/3,2/3,2/3"][..],
        &["monodromy", "--angles", "2/3,2/3,2/3"][..],
        &["monodromy", "--angles", "3,3,3", "--seed", "5"][..],
    ] {
        let a = trinoid(args);
        let b = trinoid(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn monodromy_report() {
    let v = json(&trinoid(&["monodromy", "--angles", "2/3,2/3,2/3"]));
    for g in v["matrix"]["generators"].as_array().unwrap() {
        assert!(g["trace_error"].as_f64().unwrap() < 1e-8);
    }
    assert_eq!(v["equivalence"]["scalar_vs_matrix"], true);
    assert_eq!(v["equivalence"]["hypergeometric_vs_matrix"], true);
    assert_eq!(v["unitarizer"]["kind"], "SinglePoint");
    assert!(v["unitarizer"]["max_sampled_su2_residual"].as_f64().unwrap() < 1e-6);

    let v = json(&trinoid(&["monodromy", "--angles", "3,3,3"]));
    assert_eq!(v["unitarizer"]["kind"], "AllOfH3");
    assert_eq!(v["unitarizer"]["dimension"], 3);
}

#[test]
fn json_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = trinoid(&["classify", "--angles", "3,3,3", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["dimension"], 3);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| trinoid(args).status.code();
    assert_eq!(code(&["classify", "--angles", "1,2"]), Some(2));
    assert_eq!(code(&["classify", "--angles", "x,1,1"]), Some(2));
    assert_eq!(code(&["classify", "--angles", "-1,1,1"]), Some(2));
    assert_eq!(code(&["fh", "--angles", "3,3,3", "--op", "bigon", "--edge", "1,2"]), Some(2));
    assert_eq!(code(&["fh", "--angles", "3,3,3", "--op", "hemisphere", "--edge", "1,1"]), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.obj");
    let out = out.to_str().unwrap();
    assert_eq!(code(&["mesh", "--angles", "2,1/3,1/3", "--out", out]), Some(4));
    assert_eq!(code(&["mesh", "--angles", "1,1/2,1/2", "--out", out]), Some(4));
    assert_eq!(code(&["mesh", "--angles", "3,3,3", "--deform", "0.1", "--out", out]), Some(2));
    assert!(!Path::new(out).exists());
}

#[test]
fn fh_operations() {
    let v = json(&trinoid(&["fh", "--angles", "3,3,3", "--op", "hemisphere", "--edge", "1,2"]));
    let s = v.to_string();
    assert!(s.contains("ReducibleC2"));
    let v = json(&trinoid(&["fh", "--angles", "1/2,2,1/3", "--op", "bigon", "--edge", "1,2"]));
    assert!(v.to_string().contains("pi_multiples"));
}

#[test]
fn mesh_writes_obj_ply_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("t.obj");
    let csv = dir.path().join("p.csv");
    let v = json(&trinoid(&[
        "mesh",
        "--angles",
        "2/3,2/3,2/3",
        "--rings",
        "4",
        "--sectors",
        "24",
        "--out",
        obj.to_str().unwrap(),
        "--profile",
        csv.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&obj).unwrap();
    let verts = text.lines().filter(|l| l.starts_with("v ")).count();
    let faces = text.lines().filter(|l| l.starts_with("f ")).count();
    assert!(verts > 100 && faces > verts);
    let profile = std::fs::read_to_string(&csv).unwrap();
    assert!(profile.starts_with("t,x,y"));
    assert!(profile.lines().count() > 10);
    assert!(v["well_definedness"].to_string().contains("max_discrepancy"));

    let ply = dir.path().join("t.ply");
    json(&trinoid(&["mesh", "--angles", "3,3,3", "--rings", "4", "--sectors", "24", "--deform", "0.3,0.1,-0.2", "--out", ply.to_str().unwrap()]));
    let bytes = std::fs::read(&ply).unwrap();
    assert!(bytes.starts_with(b"ply\nformat binary_little_endian 1.0\n"));
}
