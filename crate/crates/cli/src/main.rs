mod commands;
mod json;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use trinoid_core::{AngleTriple, Complex64, Error as CoreError, Target, Tolerances};

/// CMC-1 trinoids in hyperbolic space from three conical half-angles.
#[derive(Debug, Parser)]
#[command(name = "trinoid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Existence, moduli dimension and derived data of an angle triple.
    Classify(Common),
    /// Monodromy of the trinoid equations and its unitarizability.
    Monodromy(Common),
    /// Sample the surface and write a mesh plus diagnostics.
    Mesh(MeshArgs),
    /// Apply a hemisphere or bigon attachment to the angle triple.
    Fh(FhArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Pi,
    Rad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    H3,
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeshFormat {
    Obj,
    Ply,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FhOp {
    Hemisphere,
    Bigon,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Three half-angles, e.g. `2/3,2/3,2/3`.
    #[arg(long, allow_hyphen_values = true)]
    angles: String,
    /// Unit of `--angles`: multiples of π or radians.
    #[arg(long, value_enum, default_value = "pi")]
    units: Units,
    #[arg(long, value_enum, default_value = "h3")]
    target: TargetArg,
    /// Integration tolerance of the frame transport.
    #[arg(long)]
    tol_ode: Option<f64>,
    /// Base point of the loops and the grid tree, `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    base_point: Option<String>,
    /// Seed for sampled unitarizers.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct MeshArgs {
    #[command(flatten)]
    common: Common,
    /// Rings per end annulus.
    #[arg(long, default_value_t = 8)]
    rings: usize,
    /// Angular samples per ring.
    #[arg(long, default_value_t = 48)]
    sectors: usize,
    /// Deformation parameters: 1 for a one-parameter family, 3 for the
    /// three-parameter family; empty for the normalized member.
    #[arg(long, allow_hyphen_values = true)]
    deform: Option<String>,
    /// Mesh file to write.
    #[arg(long, default_value = "trinoid.obj")]
    out: PathBuf,
    /// Mesh format; inferred from the extension of `--out` when omitted.
    #[arg(long, value_enum)]
    format: Option<MeshFormat>,
    /// Also write the profile curve in the plane with normal `--plane` as CSV.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Normal of the profile plane through the ball origin, `x,y,z`.
    #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
    plane: String,
}

#[derive(Debug, Clone, Args)]
struct FhArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    op: FhOp,
    /// The edge `(i, j)` as 1-based labels of the half-angles, e.g. `1,2`.
    #[arg(long)]
    edge: String,
}

/// Marker attached to failures caused by the command line rather than by
/// the computation.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub(crate) fn input_error(msg: impl std::fmt::Display) -> anyhow::Error {
    anyhow!(InputError(msg.to_string()))
}

fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| input_error(format!("bad number `{s}`")))?;
            let q: f64 = q.trim().parse().map_err(|_| input_error(format!("bad number `{s}`")))?;
            p / q
        }
        None => s.parse().map_err(|_| input_error(format!("bad number `{s}`")))?,
    };
    if !v.is_finite() {
        return Err(input_error(format!("`{s}` is not finite")));
    }
    Ok(v)
}

pub(crate) fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_number).collect::<Result<_>>().with_context(|| format!("parsing {what}"))
}

fn parse_fixed<const N: usize>(s: &str, what: &str) -> Result<[f64; N]> {
    let v = parse_list(s, what)?;
    v.try_into().map_err(|v: Vec<f64>| input_error(format!("{what} needs {N} comma-separated values, got {}", v.len())))
}

/// Configuration shared by every command.
pub(crate) struct RunConfig {
    pub angles: AngleTriple,
    pub target: Target,
    pub tol: Tolerances,
    pub base_point: Option<Complex64>,
    pub seed: u64,
}

impl RunConfig {
    fn from_common(c: &Common) -> Result<Self> {
        let [a, b, cc] = parse_fixed::<3>(&c.angles, "--angles")?;
        let angles = match c.units {
            Units::Pi => AngleTriple::from_pi_multiples(a, b, cc),
            Units::Rad => AngleTriple::new(a, b, cc),
        }
        .map_err(input_error)?;
        let mut tol = Tolerances::default();
        if let Ok(s) = std::env::var("TRINOID_TOL_SCALE") {
            let f = parse_number(&s).context("TRINOID_TOL_SCALE")?;
            if f <= 0.0 {
                bail!(input_error("TRINOID_TOL_SCALE must be positive"));
            }
            tol = tol.scaled(f);
        }
        if let Some(t) = c.tol_ode {
            if !(t > 0.0 && t.is_finite()) {
                bail!(input_error("--tol-ode must be positive"));
            }
            tol = tol.with_ode(t);
        }
        let base_point = c
            .base_point
            .as_deref()
            .map(|s| parse_fixed::<2>(s, "--base-point").map(|[re, im]| Complex64::new(re, im)))
            .transpose()?;
        let target = match c.target {
            TargetArg::H3 => Target::H3,
            TargetArg::S2 => Target::S2,
        };
        Ok(Self { angles, target, tol, base_point, seed: c.seed })
    }
}

fn emit(report: &serde_json::Value, path: Option<&PathBuf>) -> Result<()> {
    let text = json::to_string(report);
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// 0 success, 2 input error, 3 numerical failure, 4 empty moduli.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.chain().any(|e| e.is::<InputError>()) {
        return 2;
    }
    for e in err.chain() {
        if let Some(core) = e.downcast_ref::<CoreError>() {
            return match core {
                CoreError::InvalidAngles(_)
                | CoreError::BadEdge(..)
                | CoreError::BigonRequiresAcute(_)
                | CoreError::DeformationArity { .. } => 2,
                CoreError::ExcludedAngleIsPi | CoreError::DegenerateHanbetu | CoreError::EmptyModuli(_) => 4,
                _ => 3,
            };
        }
    }
    3
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Classify(c) => {
            let cfg = RunConfig::from_common(c)?;
            emit(&commands::classify(&cfg), c.json.as_ref())
        }
        Command::Monodromy(c) => {
            let cfg = RunConfig::from_common(c)?;
            emit(&commands::monodromy(&cfg)?, c.json.as_ref())
        }
        Command::Mesh(m) => {
            let cfg = RunConfig::from_common(&m.common)?;
            if cfg.target != Target::H3 {
                bail!(input_error("mesh generation needs --target h3"));
            }
            let deform = m.deform.as_deref().map(|s| parse_list(s, "--deform")).transpose()?.unwrap_or_default();
            if ![0, 1, 3].contains(&deform.len()) {
                bail!(input_error(format!("--deform takes 1 or 3 values, got {}", deform.len())));
            }
            let format = match m.format {
                Some(f) => f,
                None => match m.out.extension().and_then(|e| e.to_str()) {
                    Some(e) if e.eq_ignore_ascii_case("ply") => MeshFormat::Ply,
                    _ => MeshFormat::Obj,
                },
            };
            let plane = parse_fixed::<3>(&m.plane, "--plane")?;
            let opts = commands::MeshOptions {
                rings: m.rings,
                sectors: m.sectors,
                deform,
                out: m.out.clone(),
                ply: format == MeshFormat::Ply,
                profile: m.profile.clone(),
                plane,
            };
            emit(&commands::mesh(&cfg, &opts)?, m.common.json.as_ref())
        }
        Command::Fh(f) => {
            let cfg = RunConfig::from_common(&f.common)?;
            let [i, j] = parse_fixed::<2>(&f.edge, "--edge")?;
            let idx = |x: f64| -> Result<usize> {
                if x.fract() != 0.0 || !(1.0..=3.0).contains(&x) {
                    bail!(input_error(format!("edge labels are 1, 2 or 3, got {x}")));
                }
                Ok(x as usize - 1)
            };
            let (i, j) = (idx(i)?, idx(j)?);
            emit(&commands::fh(&cfg, f.op == FhOp::Bigon, i, j)?, f.common.json.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
