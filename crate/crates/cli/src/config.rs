//! Command-line parsing and the resolved [`RunConfig`].

use std::fmt;
use std::fs;
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nhssh::{validate_spec, DefectSpec, DefectVariant, LatticeSpec};

use crate::figures::Figure;

pub const DEFAULT_N: usize = 25;
pub const DEFAULT_K: f64 = 0.5;
pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_M: usize = 5;
pub const DEFAULT_Z_MAX: f64 = 30.0;
pub const DEFAULT_STEPS: usize = 600;
pub const DEFAULT_TOL: f64 = 1e-9;

/// SSH coupled-resonator lattices with a single non-Hermitian defect.
#[derive(Parser, Debug)]
#[command(name = "nhssh", version, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sorted eigenvalues and residuals of the lattice Hamiltonian.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Normalized zero-mode profile.
    Mode {
        #[command(flatten)]
        common: Common,
    },
    /// Spectrum and site intensities over a range of defect strengths.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Defect strengths as start:stop:count [default: 0:1.5c:151].
        #[arg(long, value_name = "START:STOP:COUNT")]
        range: Option<RangeArg>,
    },
    /// Exceptional point of the defect-bound pair inside a strength bracket.
    Ep {
        #[command(flatten)]
        common: Common,
        /// Search bracket as start:stop, optionally :count for the coarse scan [default: 0.8c:1.2c:41].
        #[arg(long, value_name = "START:STOP[:COUNT]")]
        range: Option<RangeArg>,
        /// Width at which the golden-section refinement stops [default: 1e-9].
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Propagates a single-site excitation along z.
    Propagate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        evolution: Evolution,
        /// Also write the dense z-by-site intensity grid to this file.
        #[arg(long, value_name = "PATH")]
        grid: Option<PathBuf>,
    },
    /// Regenerates the data behind one figure panel.
    Reproduce {
        #[command(flatten)]
        common: Common,
        /// Figure panel.
        #[arg(long, value_enum)]
        figure: Figure,
        /// Override the strength range of a sweep panel (2a, 2b, 3a, 3b).
        #[arg(long, value_name = "START:STOP:COUNT")]
        range: Option<RangeArg>,
        #[command(flatten)]
        evolution: Evolution,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Number of sites, odd [default: 25].
    #[arg(long)]
    n: Option<usize>,
    /// Weak (intra-dimer) coupling k [default: 0.5].
    #[arg(long)]
    k: Option<f64>,
    /// Strong (inter-dimer) coupling c [default: 1].
    #[arg(long)]
    c: Option<f64>,
    /// Defect type [default: none].
    #[arg(long, value_enum)]
    defect: Option<DefectArg>,
    /// Defect dimer index; the defect couples sites 2m and 2m+1 [default: 5].
    #[arg(long)]
    m: Option<usize>,
    /// Defect strength, g for asym and gamma for pt [default: 0].
    #[arg(long)]
    strength: Option<f64>,
    /// Output file, written atomically; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// JSON lattice spec to start from; explicit flags override its fields.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads for parallel sweeps [default: number of processors].
    #[arg(long)]
    jobs: Option<NonZeroUsize>,
}

#[derive(Args, Debug, Default)]
struct Evolution {
    /// Propagation length in units of 1/c [default: 30].
    #[arg(long)]
    z_max: Option<f64>,
    /// Number of output intervals along z [default: 600].
    #[arg(long)]
    steps: Option<usize>,
    /// 1-based site receiving the delta excitation [default: 1].
    #[arg(long)]
    site: Option<usize>,
}

impl Evolution {
    fn is_empty(&self) -> bool {
        self.z_max.is_none() && self.steps.is_none() && self.site.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DefectArg {
    None,
    Asym,
    Pt,
}

impl From<DefectArg> for DefectVariant {
    fn from(d: DefectArg) -> Self {
        match d {
            DefectArg::None => DefectVariant::None,
            DefectArg::Asym => DefectVariant::Asym,
            DefectArg::Pt => DefectVariant::Pt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// `start:stop[:count]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeArg {
    pub start: f64,
    pub stop: f64,
    pub count: Option<usize>,
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err("expected start:stop or start:stop:count".into());
        }
        let num = |p: &str| -> Result<f64, String> {
            let x: f64 = p.trim().parse().map_err(|_| format!("'{p}' is not a number"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("'{p}' is not finite"))
            }
        };
        let count = match parts.get(2) {
            Some(p) => Some(p.trim().parse().map_err(|_| format!("'{p}' is not a point count"))?),
            None => None,
        };
        Ok(RangeArg {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            count,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Spectrum,
    Mode,
    Sweep,
    Ep,
    Propagate,
    Reproduce,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::Mode => "mode",
            CommandKind::Sweep => "sweep",
            CommandKind::Ep => "ep",
            CommandKind::Propagate => "propagate",
            CommandKind::Reproduce => "reproduce",
        }
    }
}

/// How a propagation run lays out its main output in CSV form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvolutionLayout {
    /// `z,site,norm_intensity` rows.
    Long,
    /// Dense grid with a `# zsteps=.. nsites=..` header.
    Grid,
}

/// The pipeline a run executes.
#[derive(Clone, Debug, PartialEq)]
pub enum CommandParams {
    Spectrum,
    Mode,
    Sweep {
        start: f64,
        stop: f64,
        count: usize,
    },
    Ep {
        bracket: (f64, f64),
        scan_points: usize,
        tol: f64,
    },
    Propagate {
        z_max: f64,
        steps: usize,
        site: usize,
        layout: EvolutionLayout,
        grid: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub lattice: LatticeSpec,
    pub command: CommandKind,
    pub params: CommandParams,
    /// Set for `reproduce`; `params` then holds the panel's pipeline.
    pub figure: Option<Figure>,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub jobs: Option<NonZeroUsize>,
}

#[derive(Debug)]
pub enum ParseError {
    /// Rejected by the argument parser, including `--help` and `--version`.
    Clap(clap::Error),
    Invalid(String),
}

impl ParseError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ParseError::Clap(e) => e.exit_code(),
            ParseError::Invalid(_) => 2,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Clap(e) => write!(f, "{e}"),
            ParseError::Invalid(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn invalid(msg: impl Into<String>) -> ParseError {
    ParseError::Invalid(msg.into())
}

pub fn default_lattice() -> LatticeSpec {
    LatticeSpec::clean(DEFAULT_N, DEFAULT_K, DEFAULT_C).with_defect(DefectSpec {
        variant: DefectVariant::None,
        m: DEFAULT_M,
        strength: 0.0,
    })
}

/// Parses `argv` (program name first) into a validated [`RunConfig`].
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, ParseError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(ParseError::Clap)?;
    resolve(cli.command)
}

fn resolve(cmd: Cmd) -> Result<RunConfig, ParseError> {
    let (common, command, figure, params_for) = match cmd {
        Cmd::Spectrum { common } => (common, CommandKind::Spectrum, None, Pending::Spectrum),
        Cmd::Mode { common } => (common, CommandKind::Mode, None, Pending::Mode),
        Cmd::Sweep { common, range } => (common, CommandKind::Sweep, None, Pending::Sweep(range)),
        Cmd::Ep { common, range, tol } => (common, CommandKind::Ep, None, Pending::Ep(range, tol)),
        Cmd::Propagate {
            common,
            evolution,
            grid,
        } => (common, CommandKind::Propagate, None, Pending::Propagate(evolution, grid)),
        Cmd::Reproduce {
            common,
            figure,
            range,
            evolution,
        } => (
            common,
            CommandKind::Reproduce,
            Some(figure),
            Pending::Reproduce(figure, range, evolution),
        ),
    };

    let base = match figure {
        Some(f) => f.lattice(),
        None => default_lattice(),
    };
    let lattice = merge_lattice(base, &common)?;
    let violations = validate_spec(&lattice);
    if !violations.is_empty() {
        return Err(invalid(violations.join("; ")));
    }
    let params = params_for.resolve(&lattice)?;

    Ok(RunConfig {
        lattice,
        command,
        params,
        figure,
        output_path: common.out,
        output_format: common.format,
        jobs: common.jobs,
    })
}

fn merge_lattice(base: LatticeSpec, common: &Common) -> Result<LatticeSpec, ParseError> {
    let mut spec = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| invalid(format!("--config: cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<LatticeSpec>(&text)
                .map_err(|e| invalid(format!("--config: {}: {e}", path.display())))?
        }
        None => base,
    };
    if let Some(n) = common.n {
        spec.n_sites = n;
    }
    if let Some(k) = common.k {
        spec.k = k;
    }
    if let Some(c) = common.c {
        spec.c = c;
    }
    if let Some(d) = common.defect {
        spec.defect.variant = d.into();
    }
    if let Some(m) = common.m {
        spec.defect.m = m;
    }
    if let Some(s) = common.strength {
        spec.defect.strength = s;
    }
    Ok(spec)
}

enum Pending {
    Spectrum,
    Mode,
    Sweep(Option<RangeArg>),
    Ep(Option<RangeArg>, Option<f64>),
    Propagate(Evolution, Option<PathBuf>),
    Reproduce(Figure, Option<RangeArg>, Evolution),
}

impl Pending {
    fn resolve(self, lattice: &LatticeSpec) -> Result<CommandParams, ParseError> {
        match self {
            Pending::Spectrum => Ok(CommandParams::Spectrum),
            Pending::Mode => Ok(CommandParams::Mode),
            Pending::Sweep(range) => sweep_params(lattice, range),
            Pending::Ep(range, tol) => ep_params(lattice, range, tol),
            Pending::Propagate(evolution, grid) => propagate_params(lattice, &evolution, EvolutionLayout::Long, grid),
            Pending::Reproduce(figure, range, evolution) => {
                let preset = figure.params();
                match preset {
                    CommandParams::Sweep { start, stop, count } => {
                        if !evolution.is_empty() {
                            return Err(invalid(format!(
                                "--z-max/--steps/--site do not apply to figure {figure}"
                            )));
                        }
                        let range = range.unwrap_or(RangeArg {
                            start,
                            stop,
                            count: Some(count),
                        });
                        sweep_params(lattice, Some(range))
                    }
                    CommandParams::Propagate {
                        z_max, steps, site, ..
                    } => {
                        if range.is_some() {
                            return Err(invalid(format!("--range does not apply to figure {figure}")));
                        }
                        let evolution = Evolution {
                            z_max: evolution.z_max.or(Some(z_max)),
                            steps: evolution.steps.or(Some(steps)),
                            site: evolution.site.or(Some(site)),
                        };
                        propagate_params(lattice, &evolution, EvolutionLayout::Grid, None)
                    }
                    other => {
                        if range.is_some() {
                            return Err(invalid(format!("--range does not apply to figure {figure}")));
                        }
                        if !evolution.is_empty() {
                            return Err(invalid(format!(
                                "--z-max/--steps/--site do not apply to figure {figure}"
                            )));
                        }
                        Ok(other)
                    }
                }
            }
        }
    }
}

fn require_defect(lattice: &LatticeSpec, what: &str) -> Result<(), ParseError> {
    if lattice.defect.is_present() {
        Ok(())
    } else {
        Err(invalid(format!("--defect: {what} needs asym or pt")))
    }
}

fn sweep_params(lattice: &LatticeSpec, range: Option<RangeArg>) -> Result<CommandParams, ParseError> {
    require_defect(lattice, "sweep")?;
    let r = range.unwrap_or(RangeArg {
        start: 0.0,
        stop: 1.5 * lattice.c,
        count: Some(151),
    });
    let count = r.count.ok_or_else(|| invalid("--range: sweep needs start:stop:count"))?;
    if count == 0 {
        return Err(invalid("--range: count must be at least 1"));
    }
    if r.start < 0.0 || r.stop < 0.0 {
        return Err(invalid("--range: defect strengths must be non-negative"));
    }
    Ok(CommandParams::Sweep {
        start: r.start,
        stop: r.stop,
        count,
    })
}

fn ep_params(lattice: &LatticeSpec, range: Option<RangeArg>, tol: Option<f64>) -> Result<CommandParams, ParseError> {
    require_defect(lattice, "ep")?;
    let r = range.unwrap_or(RangeArg {
        start: 0.8 * lattice.c,
        stop: 1.2 * lattice.c,
        count: None,
    });
    if !(r.start < r.stop) || r.start < 0.0 {
        return Err(invalid("--range: bracket needs 0 <= start < stop"));
    }
    let scan_points = r.count.unwrap_or(nhssh::spectral::SCAN_POINTS);
    if scan_points < 3 {
        return Err(invalid("--range: the coarse scan needs at least 3 points"));
    }
    let tol = tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid("--tol must be positive"));
    }
    Ok(CommandParams::Ep {
        bracket: (r.start, r.stop),
        scan_points,
        tol,
    })
}

fn propagate_params(
    lattice: &LatticeSpec,
    evolution: &Evolution,
    layout: EvolutionLayout,
    grid: Option<PathBuf>,
) -> Result<CommandParams, ParseError> {
    let z_max = evolution.z_max.unwrap_or(DEFAULT_Z_MAX);
    if !(z_max > 0.0 && z_max.is_finite()) {
        return Err(invalid("--z-max must be positive"));
    }
    let steps = evolution.steps.unwrap_or(DEFAULT_STEPS);
    if steps == 0 {
        return Err(invalid("--steps must be at least 1"));
    }
    let site = evolution.site.unwrap_or(1);
    if site < 1 || site > lattice.n_sites {
        return Err(invalid(format!("--site must lie in 1..={}", lattice.n_sites)));
    }
    Ok(CommandParams::Propagate {
        z_max,
        steps,
        site,
        layout,
        grid,
    })
}
