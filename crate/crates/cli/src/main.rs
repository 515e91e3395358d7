//! `hgstate`: hypergeometric-state data on the command line.

mod job;
mod presets;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hgstate::verify::run_all;
use hgstate::{Error, GridKind, GridSpec, HgsParams};
use serde_json::json;

use job::{Format, Job, LValues, StateSel};

#[cfg(test)]
const ADMISSIBILITY: &str = "L ≥ max(M/η, M/(1−η))";

#[derive(Parser, Debug)]
#[command(
    name = "hgstate",
    version,
    about = "Hypergeometric states |L, M, η⟩: amplitudes, statistics, squeezing, Q and Wigner grids",
    after_help = "Admissible parameters satisfy L ≥ max(M/η, M/(1−η)) with 0 < η < 1 and M ≥ 1.\n\
                  `--L min` picks the smallest admissible L, `--L inf` the binomial-state limit.\n\
                  HGSTATE_THREADS caps the worker threads; output does not depend on it."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fock amplitudes of a state
    Amplitudes(StateCmd),
    /// Photon statistics and squeezing indices
    Stats(StateCmd),
    /// Squeezing indices S_x, S_p along a list of L values
    SqueezingScan(ScanCmd),
    /// Husimi Q function on a grid
    Qfunc(GridCmd),
    /// Wigner function on a grid
    Wigner(GridCmd),
    /// Ladder-equation and deformed-algebra diagnostics
    AlgebraCheck(AlgebraCmd),
    /// Run the invariant suite; exits 1 if any check fails
    Verify(VerifyCmd),
    /// Regenerate the data behind a figure
    Preset(PresetCmd),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum LArg {
    Value(f64),
    Min,
    Inf,
}

impl FromStr for LArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "min" => Ok(LArg::Min),
            "inf" | "infinity" => Ok(LArg::Inf),
            _ => s
                .parse::<f64>()
                .map(LArg::Value)
                .map_err(|_| format!("expected a number, `min` or `inf`, got {s:?}")),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file; stdout when omitted. A sidecar `<file>.meta.json` records the run.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Pot size L: a number, `min` or `inf`; must satisfy L ≥ max(M/η, M/(1−η))
    #[arg(long = "L")]
    l: Option<LArg>,
    /// Number of photons drawn, M ≥ 1
    #[arg(long = "M")]
    m: Option<u32>,
    /// Probability parameter, 0 < η < 1
    #[arg(long)]
    eta: Option<f64>,
}

#[derive(Args, Debug)]
struct StateCmd {
    #[command(flatten)]
    params: ParamArgs,
    /// Use the number state |n⟩ instead (amplitudes only)
    #[arg(long, conflicts_with_all = ["l", "m", "eta"])]
    fock: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ScanCmd {
    /// Number of photons drawn, M ≥ 1
    #[arg(long = "M")]
    m: u32,
    /// Probability parameter, 0 < η < 1
    #[arg(long)]
    eta: f64,
    /// L values as `start:stop:step` (inclusive, start may be `min`) or a comma list;
    /// entries violating L ≥ max(M/η, M/(1−η)) are skipped
    #[arg(long = "L-values", default_value = "min:200:1")]
    l_values: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct GridCmd {
    #[command(flatten)]
    params: ParamArgs,
    /// Use the number state |n⟩ instead of an HGS
    #[arg(long, conflicts_with_all = ["l", "m", "eta"])]
    fock: Option<usize>,
    /// Grid `xmin:xmax:ymin:ymax:NXxNY` over β = x + iy
    #[arg(long, allow_hyphen_values = true, default_value = "-4:4:-4:4:161x161")]
    grid: GridSpec,
    /// Tolerance of the Wigner series (ignored for Q)
    #[arg(long, default_value_t = hgstate::phasespace::DEFAULT_WIGNER_TOL)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct AlgebraCmd {
    #[command(flatten)]
    params: ParamArgs,
    /// Instead of the diagnostics, tabulate max|A⁻ − J⁺| over these
    /// comma-separated L values (needs --M and --eta only)
    #[arg(long)]
    contraction: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyCmd {
    /// Report format: `csv` prints one line per check, `json` an array
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct PresetCmd {
    /// Preset name, e.g. fig3a; see --list
    #[arg(required_unless_present = "list")]
    name: Option<String>,
    /// List the available presets
    #[arg(long)]
    list: bool,
    /// Tolerance of the Wigner series
    #[arg(long, default_value_t = hgstate::phasespace::DEFAULT_WIGNER_TOL)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

fn params_err(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidParams(msg.into()).into()
}

impl ParamArgs {
    fn m_eta(&self) -> Result<(u32, f64)> {
        let m = self.m.ok_or_else(|| params_err("--M is required"))?;
        let eta = self.eta.ok_or_else(|| params_err("--eta is required"))?;
        Ok((m, eta))
    }

    fn state(&self) -> Result<StateSel> {
        let (m, eta) = self.m_eta()?;
        let l = self.l.ok_or_else(|| params_err("--L is required"))?;
        Ok(match l {
            LArg::Value(l) => StateSel::Hgs(HgsParams::new(l, m, eta)?),
            LArg::Min => StateSel::Hgs(HgsParams::with_min_l(m, eta)?),
            LArg::Inf => {
                hgstate::states::binomial_amplitudes(m, eta)?;
                StateSel::Binomial { m, eta }
            }
        })
    }

    fn finite(&self) -> Result<HgsParams> {
        match self.state()? {
            StateSel::Hgs(p) => Ok(p),
            _ => Err(params_err("this command needs a finite L")),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| params_err(format!("bad L value {t:?}")))
        })
        .collect()
}

fn parse_l_values(s: &str, m: u32, eta: f64) -> Result<LValues> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 1 {
        return Ok(LValues::List(parse_list(s)?));
    }
    if parts.len() != 3 {
        return Err(params_err(format!(
            "--L-values {s:?} is neither start:stop:step nor a list"
        )));
    }
    let start = if parts[0] == "min" {
        HgsParams::l_min(m, eta)
    } else {
        parts[0]
            .parse()
            .map_err(|_| params_err(format!("bad start {:?}", parts[0])))?
    };
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| params_err(format!("bad stop {:?}", parts[1])))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|_| params_err(format!("bad step {:?}", parts[2])))?;
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(params_err(format!(
            "--L-values {s:?} must have step > 0 and stop ≥ start"
        )));
    }
    if (stop - start) / step > 1e6 {
        return Err(params_err(
            "--L-values expands to more than a million entries",
        ));
    }
    Ok(LValues::Range { start, stop, step })
}

fn check_tol(tol: f64) -> Result<f64> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(params_err(format!("--tol must be positive, got {tol}")))
    }
}

fn grid_job(kind: GridKind, cmd: &GridCmd) -> Result<Job> {
    let state = match cmd.fock {
        Some(n) => StateSel::Fock(n),
        None => cmd.params.state()?,
    };
    Ok(Job::Grid {
        kind,
        state,
        spec: cmd.grid,
        tol: check_tol(cmd.tol)?,
    })
}

fn format_of(f: FormatArg) -> Format {
    match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    }
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn emit(job: &Job, out: &OutputArgs, preset: Option<&str>) -> Result<()> {
    let format = format_of(out.format);
    let rendered = job.run(format)?;
    for note in &rendered.notes {
        eprintln!("hgstate: {note}");
    }
    match &out.output {
        None => io::stdout().lock().write_all(&rendered.data)?,
        Some(path) => {
            fs::write(path, &rendered.data)
                .with_context(|| format!("writing {}", path.display()))?;
            let meta = json!({
                "tool": "hgstate",
                "version": env!("CARGO_PKG_VERSION"),
                "command": job.command(),
                "preset": preset,
                "format": match format { Format::Csv => "csv", Format::Json => "json" },
                "parameters": job.describe(),
                "notes": rendered.notes,
            });
            let meta_path = sidecar(path);
            let mut bytes = serde_json::to_vec_pretty(&meta)?;
            bytes.push(b'\n');
            fs::write(&meta_path, bytes)
                .with_context(|| format!("writing {}", meta_path.display()))?;
        }
    }
    Ok(())
}

fn verify(cmd: &VerifyCmd) -> Result<bool> {
    let reports = run_all();
    let all_passed = reports.iter().all(|r| r.passed);
    let mut stdout = io::stdout().lock();
    match cmd.format {
        FormatArg::Csv => {
            for r in &reports {
                writeln!(stdout, "{r}")?;
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            writeln!(stdout, "{passed}/{} checks passed", reports.len())?;
        }
        FormatArg::Json => {
            let rows: Vec<_> = reports
                .iter()
                .map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail}))
                .collect();
            hgstate::output::write_json(&rows, &mut stdout)?;
        }
    }
    Ok(all_passed)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("HGSTATE_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            params_err(format!(
                "HGSTATE_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Amplitudes(cmd) => {
            let state = match cmd.fock {
                Some(n) => StateSel::Fock(n),
                None => cmd.params.state()?,
            };
            emit(&Job::Amplitudes { state }, &cmd.out, None)?;
        }
        Command::Stats(cmd) => {
            if cmd.fock.is_some() {
                return Err(params_err("stats needs a hypergeometric or binomial state"));
            }
            emit(
                &Job::Stats {
                    state: cmd.params.state()?,
                },
                &cmd.out,
                None,
            )?;
        }
        Command::SqueezingScan(cmd) => {
            let l_values = parse_l_values(&cmd.l_values, cmd.m, cmd.eta)?;
            emit(
                &Job::Scan {
                    m: cmd.m,
                    eta: cmd.eta,
                    l_values,
                },
                &cmd.out,
                None,
            )?;
        }
        Command::Qfunc(cmd) => emit(&grid_job(GridKind::Q, &cmd)?, &cmd.out, None)?,
        Command::Wigner(cmd) => emit(&grid_job(GridKind::Wigner, &cmd)?, &cmd.out, None)?,
        Command::AlgebraCheck(cmd) => {
            let job = match &cmd.contraction {
                Some(list) => {
                    let (m, eta) = cmd.params.m_eta()?;
                    Job::Contraction {
                        m,
                        eta,
                        l_values: parse_list(list)?,
                    }
                }
                None => Job::AlgebraCheck {
                    params: cmd.params.finite()?,
                },
            };
            emit(&job, &cmd.out, None)?;
        }
        Command::Verify(cmd) => return verify(&cmd),
        Command::Preset(cmd) => {
            if cmd.list {
                let mut stdout = io::stdout().lock();
                for p in presets::PRESETS {
                    writeln!(stdout, "{:<6} {}", p.name, p.summary)?;
                }
                return Ok(true);
            }
            let name = cmd.name.as_deref().unwrap_or_default();
            let job = presets::resolve(name, check_tol(cmd.tol)?)?;
            emit(&job, &cmd.out, Some(name))?;
        }
    }
    Ok(true)
}

/// 2 for bad input, 3 for a series that did not converge, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Convergence { .. }) => 3,
        Some(_) => 2,
        None => 1,
    }
}

/// A closed downstream pipe (`| head`) is not an error of ours.
fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.downcast_ref::<io::Error>()
        .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hgstate: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
impl Cli {
    fn command_help() -> String {
        use clap::CommandFactory;
        Cli::command().render_long_help().to_string()
    }
}
