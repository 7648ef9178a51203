//! Command line front end for `qutrit-orbit`.
//!
//! Exit codes: 0 success, 1 a check failed or a point lies outside, 2 usage
//! or IO error.

pub mod gradcheck;
pub mod io;
pub mod molien_cmd;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qutrit_orbit::invariants::{casimirs, local_point};
use qutrit_orbit::membership::{
    in_global_orbit_space, in_local_orbit_space, is_physical_bloch, slice, MembershipVerdict,
};
use qutrit_orbit::molien::{Group, Space};
use qutrit_orbit::sampling::Ensemble;
use qutrit_orbit::su3::{bloch_of, BlochVector};
use qutrit_orbit::LocalInvariantPoint;

use crate::io::{parse_bloch, read_density, write_slice, InvariantRecord, SliceFormat, SCHEMA_VERSION};
use crate::molien_cmd::Method;
use crate::verify::{DFault, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qutrit-orbit", version, about = "Orbit spaces of qutrit density matrices")]
pub struct Cli {
    /// Base seed of every random stream.
    #[arg(long, env = "QUTRIT_SEED", default_value_t = 1, global = true)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Tolerance for slacks and closed-form comparisons.
    #[arg(long, default_value_t = 1e-10, global = true)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants and membership verdicts of one state.
    Invariants(StateArgs),
    /// Membership of an invariant point or a state.
    Membership(MembershipArgs),
    /// Fixed-f1 slice of the local orbit space.
    Slice(SliceArgs),
    /// Invariant counts per degree.
    Molien(MolienArgs),
    /// Closed-form local Grad matrix against direct gradients.
    Gradcheck(GradcheckArgs),
    /// The full property suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// Eight comma-separated Bloch components.
    #[arg(long, allow_hyphen_values = true)]
    pub bloch: Option<String>,
    /// JSON file `{"re": [[..]], "im": [[..]]}`.
    #[arg(long)]
    pub density: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RecordFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub source: StateSource,
    #[arg(long, value_enum, default_value = "json")]
    pub format: RecordFormat,
}

#[derive(Debug, Args)]
pub struct MembershipArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["c2", "c3", "f1", "f2", "density"])]
    pub bloch: Option<String>,
    #[arg(long, conflicts_with_all = ["c2", "c3", "f1", "f2"])]
    pub density: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true, requires = "c3")]
    pub c2: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "c2")]
    pub c3: Option<f64>,
    /// With `--f2`, test the local orbit space instead of the global one.
    #[arg(long, allow_hyphen_values = true, requires_all = ["f2", "c2"])]
    pub f1: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["f1", "c2"])]
    pub f2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub f1: f64,
    /// Grid cells per axis.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: RecordFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    Su3,
    U2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Bloch8,
    Matrix9,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Series,
    Quadrature,
    Kernel,
    All,
}

#[derive(Debug, Args)]
pub struct MolienArgs {
    #[arg(long, value_enum, default_value = "u2")]
    pub group: GroupArg,
    #[arg(long, value_enum, default_value = "bloch8")]
    pub space: SpaceArg,
    #[arg(long, default_value_t = 6)]
    pub max_degree: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,
    /// Write the exact invariant basis (up to degree 6) to this file.
    #[arg(long)]
    pub emit_basis: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
}

/// `hs`, `pure`, `rank<r>` or `rank<r>-equal`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnsembleArg(pub Ensemble);

impl FromStr for EnsembleArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let e = match s {
            "hs" | "hilbert-schmidt" => Ensemble::HilbertSchmidt,
            "pure" => Ensemble::PureHaar,
            _ => {
                let rest = s.strip_prefix("rank").ok_or_else(|| format!("unknown ensemble {s:?}"))?;
                let (r, equal_weights) = match rest.strip_suffix("-equal") {
                    Some(r) => (r, true),
                    None => (rest, false),
                };
                let rank: usize = r.parse().map_err(|_| format!("bad rank in {s:?}"))?;
                if !(1..=3).contains(&rank) {
                    return Err(format!("rank must be 1, 2 or 3, got {rank}"));
                }
                Ensemble::RankDeficient { rank, equal_weights }
            }
        };
        Ok(EnsembleArg(e))
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// State ensemble for inclusion and identity checks.
    #[arg(long, default_value = "hs")]
    pub ensemble: EnsembleArg,
    /// Grid size of the triangle-slice check.
    #[arg(long, default_value_t = 100)]
    pub slice_n: usize,
    /// Perturb one d constant so that the product identity must fail.
    #[arg(long)]
    pub inject_fault: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
}

#[derive(Serialize)]
struct SlackJson {
    name: &'static str,
    value: f64,
}

#[derive(Serialize)]
struct VerdictJson {
    inside: bool,
    binding: Vec<&'static str>,
    slacks: Vec<SlackJson>,
}

impl From<&MembershipVerdict> for VerdictJson {
    fn from(v: &MembershipVerdict) -> Self {
        VerdictJson {
            inside: v.inside,
            binding: v.binding.clone(),
            slacks: v.slacks.iter().map(|s| SlackJson { name: s.name, value: s.value }).collect(),
        }
    }
}

#[derive(Serialize)]
struct StateReport {
    schema_version: u32,
    bloch: [f64; 8],
    invariants: InvariantRecord,
    physical: VerdictJson,
    global: VerdictJson,
    local: VerdictJson,
}

fn load_state(bloch: Option<&str>, density: Option<&PathBuf>) -> Result<BlochVector> {
    match (bloch, density) {
        (Some(b), None) => parse_bloch(b),
        (None, Some(p)) => Ok(bloch_of(&read_density(p)?)),
        _ => bail!("exactly one of --bloch and --density is required"),
    }
}

fn state_verdicts(xi: &BlochVector, tol: f64) -> [MembershipVerdict; 3] {
    let c = casimirs(xi);
    [is_physical_bloch(xi, tol), in_global_orbit_space(c.c2, c.c3, tol), in_local_orbit_space(&local_point(xi), tol)]
}

fn state_report(xi: &BlochVector, tol: f64) -> StateReport {
    let [p, g, l] = state_verdicts(xi, tol);
    StateReport {
        schema_version: SCHEMA_VERSION,
        bloch: xi.0,
        invariants: InvariantRecord::of(xi),
        physical: (&p).into(),
        global: (&g).into(),
        local: (&l).into(),
    }
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_invariants(a: &StateArgs, tol: f64, out: &mut dyn Write) -> Result<i32> {
    let xi = load_state(a.source.bloch.as_deref(), a.source.density.as_ref())?;
    match a.format {
        RecordFormat::Json => json_line(out, &state_report(&xi, tol))?,
        RecordFormat::Csv => {
            writeln!(out, "{}", InvariantRecord::CSV_HEADER)?;
            writeln!(out, "{}", InvariantRecord::of(&xi).csv_row())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_membership(a: &MembershipArgs, tol: f64, out: &mut dyn Write) -> Result<i32> {
    let inside = if a.bloch.is_some() || a.density.is_some() {
        let xi = load_state(a.bloch.as_deref(), a.density.as_ref())?;
        let r = state_report(&xi, tol);
        json_line(out, &r)?;
        r.physical.inside && r.global.inside && r.local.inside
    } else {
        let (Some(c2), Some(c3)) = (a.c2, a.c3) else {
            bail!("give --bloch, --density, or --c2 and --c3");
        };
        let v = match (a.f1, a.f2) {
            (Some(f1), Some(f2)) => in_local_orbit_space(&LocalInvariantPoint::new(f1, f2, c2, c3), tol),
            _ => in_global_orbit_space(c2, c3, tol),
        };
        json_line(out, &VerdictJson::from(&v))?;
        v.inside
    };
    Ok(if inside { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_slice(a: &SliceArgs, out: &mut dyn Write) -> Result<i32> {
    let mesh = slice(a.f1, a.n)?;
    let format = match a.format {
        RecordFormat::Csv => SliceFormat::Csv,
        RecordFormat::Json => SliceFormat::Json,
    };
    let path = write_slice(&mesh, &a.out, format)?;
    writeln!(
        out,
        "f1={} n={} cells={} projection_area={:.6} -> {}",
        a.f1,
        a.n,
        mesh.cells.len(),
        mesh.projection_area(),
        path.display()
    )?;
    Ok(EXIT_OK)
}

fn cmd_molien(a: &MolienArgs, out: &mut dyn Write) -> Result<i32> {
    let group = match a.group {
        GroupArg::Su3 => Group::Su3,
        GroupArg::U2 => Group::Su2U1,
    };
    let space = match a.space {
        SpaceArg::Bloch8 => Space::Bloch8,
        SpaceArg::Matrix9 => Space::Matrix9,
    };
    let method = match a.method {
        MethodArg::Series => Method::Series,
        MethodArg::Quadrature => Method::Quadrature,
        MethodArg::Kernel => Method::Kernel,
        MethodArg::All => Method::All,
    };
    let r = molien_cmd::run_molien(group, space, a.max_degree, method)?;
    if let Some(path) = &a.emit_basis {
        let text = molien_cmd::basis_text(group, a.max_degree)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    match a.format {
        ReportFormat::Json => json_line(out, &r)?,
        ReportFormat::Text => write!(out, "{}", molien_cmd::render_text(&r))?,
    }
    Ok(if r.agree { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_gradcheck(a: &GradcheckArgs, seed: u64, tol: f64, out: &mut dyn Write) -> Result<i32> {
    let r = gradcheck::run_gradcheck(a.samples, seed, tol);
    match a.format {
        ReportFormat::Json => json_line(out, &r)?,
        ReportFormat::Text => write!(out, "{}", gradcheck::render_text(&r))?,
    }
    Ok(if r.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_verify(a: &VerifyArgs, seed: u64, tol: f64, command: Vec<String>, out: &mut dyn Write) -> Result<i32> {
    let opts = VerifyOptions {
        samples: a.samples,
        seed,
        tol,
        ensemble: a.ensemble.0,
        fault: a.inject_fault.then(DFault::default),
        slice_n: a.slice_n,
    };
    let r = verify::run_verify(&opts, command);
    if let Some(path) = &a.report {
        let text = serde_json::to_string_pretty(&r)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    match a.format {
        ReportFormat::Json => json_line(out, &r)?,
        ReportFormat::Text => {
            for c in &r.checks {
                writeln!(
                    out,
                    "{} {:<22} worst {:.3e} limit {:.1e} ({} samples)",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.worst,
                    c.limit,
                    c.samples
                )?;
            }
            match &r.worst_offender {
                Some(name) => writeln!(out, "FAILED: {name}")?,
                None => writeln!(out, "all {} checks passed in {:.2}s", r.checks.len(), r.wall_time_s)?,
            }
        }
    }
    Ok(if r.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn dispatch(cli: &Cli, command: Vec<String>, out: &mut dyn Write) -> Result<i32> {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        bail!("--tol must be a finite non-negative number");
    }
    match &cli.command {
        Command::Invariants(a) => cmd_invariants(a, cli.tol, out),
        Command::Membership(a) => cmd_membership(a, cli.tol, out),
        Command::Slice(a) => cmd_slice(a, out),
        Command::Molien(a) => cmd_molien(a, out),
        Command::Gradcheck(a) => cmd_gradcheck(a, cli.seed, cli.tol, out),
        Command::Verify(a) => cmd_verify(a, cli.seed, cli.tol, command, out),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let command: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    // buffered so the command can run inside a worker pool
    let mut buf: Vec<u8> = Vec::new();
    let result = match cli.jobs {
        Some(0) => Err(anyhow!("--jobs must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(anyhow::Error::from)
            .and_then(|pool| pool.install(|| dispatch(&cli, command, &mut buf))),
        None => dispatch(&cli, command, &mut buf),
    };
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("qutrit-orbit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ensemble_names() {
        assert_eq!("hs".parse::<EnsembleArg>().unwrap().0, Ensemble::HilbertSchmidt);
        assert_eq!(
            "rank2-equal".parse::<EnsembleArg>().unwrap().0,
            Ensemble::RankDeficient { rank: 2, equal_weights: true }
        );
        assert!("rank4".parse::<EnsembleArg>().is_err());
        assert!("gauss".parse::<EnsembleArg>().is_err());
    }

    #[test]
    fn membership_exit_codes() {
        assert_eq!(run_capture(&["membership", "--c2", "0.25", "--c3", "-0.125"]).0, EXIT_OK);
        assert_eq!(run_capture(&["membership", "--c2", "0.5", "--c3", "0.9"]).0, EXIT_CHECK_FAILED);
        assert_eq!(run_capture(&["membership", "--c2", "0.5"]).0, EXIT_USAGE);
    }

    #[test]
    fn invariants_of_a_pure_state() {
        let (code, out, _) = run_capture(&["invariants", "--bloch", "0,0,1,0,0,0,0,0", "--format", "csv"]);
        assert_eq!(code, EXIT_OK);
        let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        // ξ = e₃: c2 = f2 = 1
        assert_eq!(row[0], 1.0);
        assert_eq!(row[3], 1.0);
    }

    #[test]
    fn bad_input_is_usage_error() {
        let (code, _, err) = run_capture(&["invariants", "--bloch", "1,2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("8"));
        assert_eq!(run_capture(&["verify", "--jobs", "0", "--samples", "1"]).0, EXIT_USAGE);
    }
}
