//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion,
//! with one indented line per case, and exits non-zero if any criterion
//! fails that is not listed in `KNOWN_RED`.
//!
//! Run alone with `cargo test --release -p trinoid-core --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trinoid_core::fuchsian::{
    eigenvalue_errors, hypergeometric_monodromy, monodromy, plan_loops, projective_equivalence, MonodromyResult,
    MonodromySource, OdeOptions, PathPlan, PlanOptions,
};
use trinoid_core::moduli::{
    classify, fh_attach_bigon, fh_attach_hemisphere, irreducibility_form, irreducible_exists,
    irreducible_exists_reduced, reduce_angles,
};
use trinoid_core::pipeline::monodromy_tol;
use trinoid_core::surface::GridOptions;
use trinoid_core::unitarize::{su2_residual, unitarizer_space};
use trinoid_core::{AngleTriple, Error, Mat2C, ModuliStatus, Target, Tolerances, Trinoid, TrinoidData};

/// Cases that stay red. The ends with `B = 2π` carry a logarithmic term, so
/// the computed local monodromy is a Jordan block: it is neither
/// unitarizable nor conjugate to the log-free hypergeometric monodromy.
const KNOWN_RED: &[(u32, &str)] = &[(5, "(2, 1/2, 1/2)"), (6, "(2, 1/2, 1/2)")];

const MONODROMY_TRIPLES: [(&str, [f64; 3]); 4] = [
    ("(2/3, 2/3, 2/3)", [2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0]),
    ("(1/2, 1/2, 1/2)", [0.5, 0.5, 0.5]),
    ("(2, 1/2, 1/2)", [2.0, 0.5, 0.5]),
    ("(3, 3, 3)", [3.0, 3.0, 3.0]),
];

struct Case {
    label: String,
    pass: bool,
    detail: String,
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    elapsed: Duration,
    cases: Vec<Case>,
}

impl Criterion {
    fn in_time(&self) -> bool {
        self.limit.is_none_or(|l| self.elapsed < l)
    }

    fn pass(&self) -> bool {
        self.in_time() && self.cases.iter().all(|c| c.pass)
    }

    fn red_cases(&self) -> Vec<&str> {
        self.cases.iter().filter(|c| !c.pass).map(|c| c.label.as_str()).collect()
    }
}

fn run(id: u32, name: &'static str, limit: Option<f64>, f: impl FnOnce() -> Vec<Case>) -> Criterion {
    let t = Instant::now();
    let cases = f();
    Criterion { id, name, limit: limit.map(Duration::from_secs_f64), elapsed: t.elapsed(), cases }
}

fn case(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Case {
    Case { label: label.into(), pass, detail: detail.into() }
}

fn angles(m: [f64; 3]) -> AngleTriple {
    AngleTriple::from_pi_multiples(m[0], m[1], m[2]).expect("valid angles")
}

struct Monodromies {
    angles: AngleTriple,
    data: TrinoidData,
    plan: PathPlan,
    matrix: MonodromyResult,
    scalar: MonodromyResult,
    hyper: MonodromyResult,
}

fn monodromies(m: [f64; 3], tol: &Tolerances) -> trinoid_core::Result<Monodromies> {
    let angles = angles(m);
    let data = TrinoidData::new(angles, tol)?;
    let plan = plan_loops(&data.singular_points(), &PlanOptions::default())?;
    let opts = OdeOptions::new(monodromy_tol(tol));
    let matrix = monodromy(&data, &plan, MonodromySource::MatrixOde, &opts)?;
    let scalar = monodromy(&data, &plan, MonodromySource::ScalarOde, &opts)?;
    let hyper = hypergeometric_monodromy(&data.hyper, &angles, &plan, opts.tol)?;
    Ok(Monodromies { angles, data, plan, matrix, scalar, hyper })
}

fn per_triple(
    all: &[(&str, trinoid_core::Result<Monodromies>)],
    check: impl Fn(&Monodromies) -> (bool, String),
) -> Vec<Case> {
    all.iter()
        .map(|(label, m)| match m {
            Ok(m) => {
                let (pass, detail) = check(m);
                case(*label, pass, detail)
            }
            Err(e) => case(*label, false, format!("monodromy failed: {e}")),
        })
        .collect()
}

/// Label, half-angles over π, target, expected status and dimension.
type Expectation = (String, [f64; 3], Target, ModuliStatus, Option<usize>);

fn classification_table(tol: &Tolerances) -> Vec<Case> {
    let mut suite: Vec<Expectation> = vec![
        ("(2/3, 2/3, 2/3)".into(), [2.0 / 3.0; 3], Target::H3, ModuliStatus::IrreducibleUnique, Some(0)),
        ("(1/2, 1/2, 1/2)".into(), [0.5; 3], Target::H3, ModuliStatus::IrreducibleUnique, Some(0)),
        ("(2, 1/2, 1/2)".into(), [2.0, 0.5, 0.5], Target::H3, ModuliStatus::ReducibleC1, Some(1)),
        ("(3, 3, 3)".into(), [3.0; 3], Target::H3, ModuliStatus::ReducibleC2, Some(3)),
        ("(2, 1/3, 1/3)".into(), [2.0, 1.0 / 3.0, 1.0 / 3.0], Target::H3, ModuliStatus::Empty, None),
        ("(1, 1/2, 7/10)".into(), [1.0, 0.5, 0.7], Target::H3, ModuliStatus::ExcludedAngleIsPi, None),
        ("(1/4, 1/4, 1/4) in S2".into(), [0.25; 3], Target::S2, ModuliStatus::Empty, None),
        ("(5, 1, 1) in S2".into(), [5.0, 1.0, 1.0], Target::S2, ModuliStatus::Empty, None),
    ];
    // first reducible family by construction: integer n ≥ 2, two non-integers
    // whose sum m has the opposite parity and satisfies m ≤ n − 1
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..4 {
        let n: i64 = rng.random_range(2..=7);
        let choices: Vec<i64> = (1..n).filter(|m| (m - n).rem_euclid(2) == 1).collect();
        let m = choices[rng.random_range(0..choices.len())] as f64;
        let x = loop {
            let x: f64 = rng.random_range(0.05..m - 0.05);
            if (x - x.round()).abs() > 0.05 && ((m - x) - (m - x).round()).abs() > 0.05 {
                break x;
            }
        };
        let triple = [n as f64, x, m - x];
        suite.push((
            format!("C1 n={n} m={m} ({:.4}, {:.4})", triple[1], triple[2]),
            triple,
            Target::H3,
            ModuliStatus::ReducibleC1,
            Some(1),
        ));
    }
    suite
        .into_iter()
        .map(|(label, m, target, status, dim)| {
            let c = classify(&angles(m), target, tol);
            let pass = c.status == status && c.dimension == dim;
            case(label, pass, format!("{} dim {:?} (expected {status} dim {dim:?})", c.status, c.dimension))
        })
        .collect()
}

fn criterion_equivalence() -> Vec<Case> {
    const BAND: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut checked, mut skipped, mut disagree) = (0usize, 0usize, 0usize);
    while checked < 10_000 {
        let b: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..4.0 * PI));
        let Ok(a) = AngleTriple::new(b[0], b[1], b[2]) else { continue };
        let near_boundary = (irreducibility_form(&a) - 1.0).abs() < BAND
            || (reduce_angles(&a).iter().sum::<f64>() - PI).abs() < BAND;
        if near_boundary {
            skipped += 1;
            continue;
        }
        checked += 1;
        if irreducible_exists(&a) != irreducible_exists_reduced(&a) {
            disagree += 1;
        }
    }
    vec![case(
        "10^4 uniform triples in (0, 4π)^3",
        disagree == 0,
        format!("{disagree} disagreements, {skipped} skipped in the boundary band"),
    )]
}

fn weierstrass_oracle(tol: &Tolerances) -> Vec<Case> {
    let t = match Trinoid::new(angles([2.0 / 3.0; 3]), tol, None) {
        Ok(t) => t,
        Err(e) => return vec![case("(2/3, 2/3, 2/3)", false, e.to_string())],
    };
    let s = match t.surface(&GridOptions { rings: 8, sectors: 48, ..Default::default() }, &[]) {
        Ok(s) => s,
        Err(e) => return vec![case("(2/3, 2/3, 2/3)", false, e.to_string())],
    };
    let d = s.diagnostics(&t.data);
    let n = s.grid.vertices.len();
    vec![
        case(
            "Hopf differential ω·dg = Q̂",
            d.hopf.fraction_below >= 0.95,
            format!("{:.2}% of {n} vertices below 1e-6, median {:.1e}", 100.0 * d.hopf.fraction_below, d.hopf.median),
        ),
        case(
            "Gauss map dF11/dF21 = G",
            d.gauss.fraction_below >= 0.95,
            format!("{:.2}% of {n} vertices below 1e-6, median {:.1e}", 100.0 * d.gauss.fraction_below, d.gauss.median),
        ),
        case("det F drift", d.max_det_drift < 1e-9, format!("max {:.2e}", d.max_det_drift)),
    ]
}

fn well_definedness(tol: &Tolerances) -> Vec<Case> {
    let mut out = Vec::new();
    for (label, m) in [("(2/3, 2/3, 2/3)", [2.0 / 3.0; 3]), ("(1/2, 1/2, 1/2)", [0.5; 3])] {
        let r = Trinoid::new(angles(m), tol, None).and_then(|t| {
            let s = t.surface(&GridOptions::default(), &[])?;
            let a = t.conjugator(&[])?;
            let with = t.well_definedness(&s, &a, 10)?;
            let without = t.well_definedness(&s, &Mat2C::identity(), 10)?;
            Ok((with, without))
        });
        match r {
            Ok((with, without)) => {
                out.push(case(
                    format!("{label} unitarized"),
                    with.tests.len() == 10 && with.passes(1e-6),
                    format!("{} tests, max discrepancy {:.2e}", with.tests.len(), with.max_discrepancy()),
                ));
                out.push(case(
                    format!("{label} without unitarization"),
                    without.max_discrepancy() > 1e-2,
                    format!("max discrepancy {:.3}", without.max_discrepancy()),
                ));
            }
            Err(e) => out.push(case(label, false, e.to_string())),
        }
    }
    out
}

fn fh_closure(tol: &Tolerances) -> Vec<Case> {
    let mut c2 = Vec::new();
    for a in 1..=9 {
        for b in 1..=9 {
            for c in 1..=9 {
                let t = angles([a as f64, b as f64, c as f64]);
                if classify(&t, Target::S2, tol).status == ModuliStatus::ReducibleC2 {
                    c2.push(t);
                }
            }
        }
    }
    let edges = [(0, 1), (0, 2), (1, 2)];
    let mut bad = Vec::new();
    let mut gated = 0;
    for t in &c2 {
        for &(i, j) in &edges {
            match fh_attach_hemisphere(t, i, j) {
                Ok(u) if classify(&u, Target::S2, tol).status == ModuliStatus::ReducibleC2 => {}
                other => bad.push(format!("{t} edge ({}, {}): {other:?}", i + 1, j + 1)),
            }
            if matches!(fh_attach_bigon(t, i, j), Err(Error::BigonRequiresAcute(_))) {
                gated += 1;
            }
        }
    }
    let acute = angles([0.5, 2.0, 0.3]);
    let bigon = fh_attach_bigon(&acute, 0, 1).map(|u| u.pi_multiples());
    let bigon_ok = matches!(bigon, Ok(p) if (p[0] - 0.5).abs() < 1e-12 && (p[1] - 3.0).abs() < 1e-12 && p[2] == 0.3);
    vec![
        case(
            "hemisphere closure on C2 triples ≤ 9π",
            !c2.is_empty() && bad.is_empty(),
            format!("{} triples × 3 edges, {} failures {:?}", c2.len(), bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
        ),
        case(
            "bigon gate B_i < π",
            gated == 3 * c2.len() && bigon_ok,
            format!("{gated} of {} obtuse attachments rejected; acute result {bigon:?}", 3 * c2.len()),
        ),
    ]
}

fn determinism(tol: &Tolerances) -> Vec<Case> {
    let fingerprint = |m: [f64; 3]| {
        let a = angles(m);
        let class = format!("{:?} {:?}", classify(&a, Target::H3, tol), classify(&a, Target::S2, tol));
        let mono = monodromies(m, tol).map(|x| format!("{:?} {:?} {:?}", x.matrix, x.scalar, x.hyper));
        (class, format!("{mono:?}"))
    };
    MONODROMY_TRIPLES
        .iter()
        .map(|(label, m)| {
            let (c1, m1) = fingerprint(*m);
            let (c2, m2) = fingerprint(*m);
            case(*label, c1 == c2 && m1 == m2, format!("classify equal {}, monodromy equal {}", c1 == c2, m1 == m2))
        })
        .collect()
}

fn main() -> ExitCode {
    let tol = Tolerances::default();
    let mut results = Vec::new();

    results.push(run(1, "classification truth table", Some(1.0), || classification_table(&tol)));
    results.push(run(2, "irreducibility criteria agree", Some(5.0), criterion_equivalence));

    let t = Instant::now();
    let all: Vec<_> = MONODROMY_TRIPLES.iter().map(|(l, m)| (*l, monodromies(*m, &tol))).collect();
    let shared = t.elapsed();

    let mut c3 = run(3, "monodromy eigenvalues, determinant and relation", Some(30.0), || {
        per_triple(&all, |m| {
            let err = eigenvalue_errors(&m.matrix.rep, &m.angles, false);
            let worst = err.iter().copied().fold(0.0, f64::max);
            let det = m.matrix.rep.max_det_defect();
            let rel = m.matrix.rep.relation_defect();
            (worst < 1e-6 && det < 1e-8 && rel < 1e-7, format!("eigenvalue errors [{:.1e}, {:.1e}, {:.1e}], det {det:.1e}, ρ1ρ2ρ3 − I {rel:.1e}", err[0], err[1], err[2]))
        })
    });
    c3.elapsed += shared;
    results.push(c3);

    let mut c4 = run(4, "scalar and matrix monodromy projectively equivalent", Some(60.0), || {
        per_triple(&all, |m| {
            let ok = projective_equivalence(&m.scalar.rep, &m.matrix.rep, 1e-6);
            (ok, format!("equivalent at 1e-6: {ok}"))
        })
    });
    c4.elapsed += shared;
    results.push(c4);

    let mut c5 = run(5, "hypergeometric monodromy projectively equivalent", Some(60.0), || {
        per_triple(&all, |m| {
            let ok = projective_equivalence(&m.hyper.rep, &m.matrix.rep, tol.equivalence);
            let h = &m.data.hyper;
            (ok, format!("(a, b, c) = ({}, {}, {}), equivalent: {ok}", h.a, h.b, h.c))
        })
    });
    c5.elapsed += shared;
    results.push(c5);

    results.push(run(6, "unitarizer dimension and sampled SU(2) residuals", None, || {
        per_triple(&all, |m| {
            let expected = classify(&m.angles, Target::H3, &tol).dimension;
            match unitarizer_space(&m.matrix.rep, &m.angles, &tol) {
                Ok(space) => {
                    let samples = space.sample(20, 1.0, 0).unwrap_or_default();
                    let worst = samples.iter().map(|(_, a)| su2_residual(a, &m.matrix.rep)).fold(0.0, f64::max);
                    let dim_ok = Some(space.dimension()) == expected;
                    (
                        dim_ok && samples.len() == 20 && worst < 1e-6,
                        format!(
                            "{} dim {} (moduli {expected:?}), max residual of {} samples {worst:.1e}",
                            space.kind.name(),
                            space.dimension(),
                            samples.len()
                        ),
                    )
                }
                Err(e) => (false, format!("moduli dim {expected:?}; {e} (base point {})", m.plan.base_point)),
            }
        })
    }));

    results.push(run(7, "Weierstrass oracle on the 8×48 grid", Some(120.0), || weierstrass_oracle(&tol)));
    results.push(run(8, "well-definedness with negative control", None, || well_definedness(&tol)));
    results.push(run(9, "hemisphere and bigon attachment", None, || fh_closure(&tol)));
    results.push(run(10, "determinism", None, || determinism(&tol)));

    let mut unexpected = Vec::new();
    for r in &results {
        let limit = r.limit.map(|l| format!(" / {:.0} s", l.as_secs_f64())).unwrap_or_default();
        let verdict = if r.pass() { "PASS" } else { "FAIL" };
        println!("{verdict} [{:>2}] {} ({:.2} s{limit})", r.id, r.name, r.elapsed.as_secs_f64());
        for c in &r.cases {
            let known = !c.pass && KNOWN_RED.contains(&(r.id, c.label.as_str()));
            let mark = if c.pass { "ok  " } else if known { "red*" } else { "FAIL" };
            println!("       {mark} {}: {}", c.label, c.detail);
        }
        if !r.in_time() {
            unexpected.push(format!("criterion {} over its time limit", r.id));
        }
        for label in r.red_cases() {
            if !KNOWN_RED.contains(&(r.id, label)) {
                unexpected.push(format!("criterion {} case {label}", r.id));
            }
        }
    }
    let passed = results.iter().filter(|r| r.pass()).count();
    println!("{passed} of {} criteria pass", results.len());
    if KNOWN_RED.iter().any(|(id, _)| results.iter().any(|r| r.id == *id && !r.pass())) {
        println!("red* = known failure: ends with B = 2π have a Jordan-block local monodromy");
    }
    for (id, label) in KNOWN_RED {
        let still_red = results.iter().any(|r| r.id == *id && r.red_cases().contains(label));
        if !still_red {
            unexpected.push(format!("criterion {id} case {label} is listed as red but passes"));
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("unexpected: {u}");
        }
        ExitCode::FAILURE
    }
}
