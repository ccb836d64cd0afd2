use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};
use trinoid_core::fuchsian::{
    eigenvalue_errors, hypergeometric_monodromy, monodromy as run_monodromy, plan_loops, projective_equivalence,
    MonodromyResult, MonodromySource, OdeOptions, PlanOptions,
};
use trinoid_core::moduli::{
    classify as run_classify, conical_data, fh_attach_bigon, fh_attach_hemisphere, hanbetu_defect, hanbetu_holds,
    irreducibility_form, irreducible_exists, irreducible_exists_reduced, reduce_angles, type_signature, C1Witness,
};
use trinoid_core::pipeline::monodromy_tol;
use trinoid_core::surface::{profile, write_obj, write_ply, write_profile_csv, GridOptions};
use trinoid_core::trinoid_data::hypergeometric_params;
use trinoid_core::unitarize::{su2_residual, unitarizer_space};
use trinoid_core::{eigenvalues_2x2, AngleTriple, Mat2C, ModuliClass, Target, Trinoid, TrinoidData};

use crate::json::{complex, matrix, num, nums, SCHEMA_VERSION};
use crate::{input_error, RunConfig};

/// Number of sampled unitarizers checked in the monodromy report.
const UNITARIZER_SAMPLES: usize = 20;
/// Number of doubled-path vertices in the mesh report.
const BRANCH_TESTS: usize = 10;
const BRANCH_TOL: f64 = 1e-6;

fn header(command: &str, cfg: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("angles".into(), angles_json(&cfg.angles));
    m
}

fn angles_json(a: &AngleTriple) -> Value {
    json!({ "pi_multiples": nums(&a.pi_multiples()), "radians": nums(&a.radians()) })
}

fn class_json(c: &ModuliClass) -> Value {
    let c1 = c.c1_match.map(|m| {
        json!({
            "integer_angle": m.integer_index + 1,
            "m": m.m,
            "witness": match m.witness { C1Witness::Difference => "difference", C1Witness::Sum => "sum" },
        })
    });
    json!({
        "target": c.target.to_string(),
        "status": c.status.name(),
        "dimension": c.dimension,
        "c1_match": c1,
        "two_integer_angles": c.two_integer_angles,
    })
}

pub fn classify(cfg: &RunConfig) -> Value {
    let a = &cfg.angles;
    let conical = conical_data(a);
    let sig = type_signature(&conical).ok().map(|s| {
        json!({
            "raw": s.raw.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "canonical": s.to_string(),
        })
    });
    let hyper = hypergeometric_params(a);
    let h3 = run_classify(a, Target::H3, &cfg.tol);
    let s2 = run_classify(a, Target::S2, &cfg.tol);
    let selected = if cfg.target == Target::H3 { h3 } else { s2 };
    let mut m = header("classify", cfg);
    m.insert("beta".into(), nums(&conical.beta));
    m.insert("c".into(), nums(&conical.c));
    m.insert(
        "hanbetu".into(),
        json!({ "holds": hanbetu_holds(&conical, cfg.tol.hanbetu), "defect": num(hanbetu_defect(&conical)) }),
    );
    m.insert(
        "irreducibility".into(),
        json!({
            "cosine_form": num(irreducibility_form(a)),
            "cosine_form_below_one": irreducible_exists(a),
            "reduced_angles_pi": nums(&reduce_angles(a).map(|x| x / std::f64::consts::PI)),
            "reduced_sum_exceeds_pi": irreducible_exists_reduced(a),
        }),
    );
    m.insert("moduli".into(), json!({ "h3": class_json(&h3), "s2": class_json(&s2) }));
    m.insert("status".into(), json!(selected.status.name()));
    m.insert("dimension".into(), json!(selected.dimension));
    m.insert("type_signature".into(), sig.unwrap_or(Value::Null));
    m.insert(
        "hypergeometric".into(),
        json!({ "a": num(hyper.a), "b": num(hyper.b), "c": num(hyper.c), "signs": hyper.signs }),
    );
    Value::Object(m)
}

fn rep_json(res: &MonodromyResult, angles: &AngleTriple) -> Value {
    let b = angles.radians();
    let gens: Vec<Value> = res
        .rep
        .rho
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let (l1, l2) = eigenvalues_2x2(r);
            let expected = -2.0 * b[j].cos();
            json!({
                "matrix": matrix(r),
                "eigenvalues": [complex(l1), complex(l2)],
                "expected_eigenvalues": [complex(-num_complex::Complex64::from_polar(1.0, b[j])), complex(-num_complex::Complex64::from_polar(1.0, -b[j]))],
                "trace": complex(r.trace()),
                "expected_trace": num(expected),
                "trace_error": num((r.trace() - expected).norm()),
                "det_defect": num((r.det() - 1.0).norm()),
            })
        })
        .collect();
    let d = &res.diagnostics;
    json!({
        "source": res.rep.source.name(),
        "generators": gens,
        "eigenvalue_errors": nums(&d.eigen_errors),
        "relation_defect": num(d.relation_defect),
        "max_det_drift": num(d.max_det_drift),
        "steps": { "accepted": d.stats.accepted, "rejected": d.stats.rejected, "evaluations": d.stats.evaluations },
        "warnings": d.warnings,
    })
}

pub fn monodromy(cfg: &RunConfig) -> Result<Value> {
    let data = TrinoidData::new(cfg.angles, &cfg.tol)?;
    let plan = plan_loops(&data.singular_points(), &PlanOptions { base_point: cfg.base_point, ..Default::default() })?;
    let opts = OdeOptions::new(monodromy_tol(&cfg.tol));
    let matrix_res = run_monodromy(&data, &plan, MonodromySource::MatrixOde, &opts)?;
    let scalar_res = run_monodromy(&data, &plan, MonodromySource::ScalarOde, &opts)?;
    let hyper_res = hypergeometric_monodromy(&data.hyper, &cfg.angles, &plan, opts.tol)?;
    let eq = cfg.tol.equivalence;
    let unitarizer = match unitarizer_space(&matrix_res.rep, &cfg.angles, &cfg.tol) {
        Ok(space) => {
            let samples = space.sample(UNITARIZER_SAMPLES, 1.0, cfg.seed)?;
            let worst = samples.iter().map(|(_, a)| su2_residual(a, &matrix_res.rep)).fold(0.0, f64::max);
            let base = space.conjugator(&vec![0.0; space.dimension()])?;
            json!({
                "unitarizable": true,
                "kind": space.kind.name(),
                "dimension": space.dimension(),
                "base_conjugator": matrix(&base),
                "base_point_h3": nums(&space.point(&vec![0.0; space.dimension()])?.minkowski),
                "sampled": samples.len(),
                "max_sampled_su2_residual": num(worst),
            })
        }
        Err(e) => json!({ "unitarizable": false, "kind": Value::Null, "reason": e.to_string() }),
    };
    let mut m = header("monodromy", cfg);
    m.insert("base_point".into(), complex(plan.base_point));
    m.insert("tol_ode".into(), num(opts.tol));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("matrix".into(), rep_json(&matrix_res, &cfg.angles));
    m.insert("scalar".into(), rep_json(&scalar_res, &cfg.angles));
    m.insert(
        "hypergeometric".into(),
        json!({
            "params": { "a": num(data.hyper.a), "b": num(data.hyper.b), "c": num(data.hyper.c) },
            "eigenvalue_errors": nums(&eigenvalue_errors(&hyper_res.rep, &cfg.angles, true)),
        }),
    );
    m.insert(
        "equivalence".into(),
        json!({
            "tolerance": num(eq),
            "scalar_vs_matrix": projective_equivalence(&scalar_res.rep, &matrix_res.rep, eq),
            "hypergeometric_vs_matrix": projective_equivalence(&hyper_res.rep, &matrix_res.rep, eq),
        }),
    );
    m.insert("unitarizer".into(), unitarizer);
    Ok(Value::Object(m))
}

pub struct MeshOptions {
    pub rings: usize,
    pub sectors: usize,
    pub deform: Vec<f64>,
    pub out: PathBuf,
    pub ply: bool,
    pub profile: Option<PathBuf>,
    pub plane: [f64; 3],
}

pub fn mesh(cfg: &RunConfig, opts: &MeshOptions) -> Result<Value> {
    let t = Trinoid::new(cfg.angles, &cfg.tol, cfg.base_point)?;
    let dim = t.unitarizer.dimension();
    if !opts.deform.is_empty() && opts.deform.len() != dim {
        return Err(input_error(format!(
            "--deform has {} values but the moduli space of {} has dimension {dim}",
            opts.deform.len(),
            cfg.angles
        )));
    }
    let deform = if opts.deform.is_empty() { vec![0.0; dim] } else { opts.deform.clone() };
    let grid = GridOptions { rings: opts.rings, sectors: opts.sectors, ..Default::default() };
    let surface = t.surface(&grid, &deform)?;
    let a = t.conjugator(&deform)?;
    let branches = t.well_definedness(&surface, &a, BRANCH_TESTS)?;
    let control = t.well_definedness(&surface, &Mat2C::identity(), BRANCH_TESTS)?;
    let d = surface.diagnostics(&t.data);

    let file = File::create(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
    let w = BufWriter::new(file);
    if opts.ply {
        write_ply(&surface.mesh, true, w)
    } else {
        write_obj(&surface.mesh, w)
    }
    .with_context(|| format!("writing {}", opts.out.display()))?;

    let profile_report = match &opts.profile {
        Some(path) => {
            let pts = profile::profile_curve(&surface.mesh, opts.plane, 0)?;
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_profile_csv(&pts, BufWriter::new(f)).with_context(|| format!("writing {}", path.display()))?;
            json!({ "path": path.display().to_string(), "points": pts.len(), "plane_normal": nums(&opts.plane) })
        }
        None => Value::Null,
    };
    let symmetry = match profile::threefold_symmetry_defect(&t.data, t.plan.base_point, &a, t.tol.ode)? {
        Some(d) => num(d),
        None => Value::Null,
    };
    let summary = |s: &trinoid_core::surface::ResidualSummary| {
        json!({ "max": num(s.max), "median": num(s.median), "fraction_below": num(s.fraction_below), "threshold": num(s.threshold) })
    };
    let tests: Vec<Value> = branches
        .tests
        .iter()
        .map(|b| json!({ "vertex": b.vertex, "generator": b.generator + 1, "winding": b.winding, "discrepancy": num(b.discrepancy) }))
        .collect();
    let mut m = header("mesh", cfg);
    m.insert("status".into(), json!(t.class.status.name()));
    m.insert("unitarizer_kind".into(), json!(t.unitarizer.kind.name()));
    m.insert("deformation".into(), nums(&deform));
    m.insert("conjugator".into(), matrix(&a));
    m.insert("base_point".into(), complex(t.plan.base_point));
    m.insert(
        "mesh".into(),
        json!({
            "path": opts.out.display().to_string(),
            "format": if opts.ply { "ply" } else { "obj" },
            "vertices": surface.mesh.positions.len(),
            "faces": surface.mesh.faces.len(),
            "rings": opts.rings,
            "sectors": opts.sectors,
            "max_ball_norm": num(d.max_ball_norm),
        }),
    );
    m.insert(
        "weierstrass".into(),
        json!({
            "hopf_residual": summary(&d.hopf),
            "gauss_map_residual": summary(&d.gauss),
            "conformal_residual": summary(&d.conformal),
            "max_null_defect": num(d.max_null_defect),
            "end_hopf_limits": nums(&d.end_hopf_limits),
            "expected_end_hopf_limits": nums(&t.data.conical.c.map(|c| c.abs() / 2.0)),
            "total_curvature": num(d.total_curvature),
        }),
    );
    m.insert("max_det_drift".into(), num(d.max_det_drift));
    m.insert(
        "well_definedness".into(),
        json!({
            "tolerance": num(BRANCH_TOL),
            "passes": branches.passes(BRANCH_TOL),
            "max_discrepancy": num(branches.max_discrepancy()),
            "tests": tests,
            "identity_conjugator_max_discrepancy": num(control.max_discrepancy()),
        }),
    );
    m.insert("threefold_symmetry_defect".into(), symmetry);
    m.insert("profile".into(), profile_report);
    Ok(Value::Object(m))
}

pub fn fh(cfg: &RunConfig, bigon: bool, i: usize, j: usize) -> Result<Value> {
    let after = if bigon { fh_attach_bigon(&cfg.angles, i, j)? } else { fh_attach_hemisphere(&cfg.angles, i, j)? };
    let before_class = run_classify(&cfg.angles, cfg.target, &cfg.tol);
    let after_class = run_classify(&after, cfg.target, &cfg.tol);
    let mut m = header("fh", cfg);
    m.insert("operation".into(), json!(if bigon { "bigon" } else { "hemisphere" }));
    m.insert("edge".into(), json!([i + 1, j + 1]));
    m.insert("before".into(), json!({ "angles": angles_json(&cfg.angles), "class": class_json(&before_class) }));
    m.insert("after".into(), json!({ "angles": angles_json(&after), "class": class_json(&after_class) }));
    Ok(Value::Object(m))
}
