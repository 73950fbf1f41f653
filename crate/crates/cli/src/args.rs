use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CliResult};

/// Seed used when neither `--seed` nor `BOXDOS_SEED` is set.
pub const DEFAULT_SEED: u64 = 1;
pub const SEED_ENV: &str = "BOXDOS_SEED";
/// Cutoff used when a spectrum is asked for without `--e-max` or `--k-max`.
pub const DEFAULT_E_MAX: f64 = 1024.0;
/// Sphere default: the cutoff is on the Bessel zero, `k <= 95`.
pub const DEFAULT_SPHERE_K_MAX: f64 = 95.0;

#[derive(Parser, Debug)]
#[command(
    name = "boxdos",
    version,
    about = "Level counting, densities of states and N-boson power laws for particles in rigid boxes"
)]
pub struct Cli {
    /// Run the configuration stored in FILE (written by --save-config).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Store the effective configuration in FILE, then run it.
    #[arg(long, global = true, value_name = "FILE")]
    pub save_config: Option<PathBuf>,

    /// Seed for random spectra.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Field separator of tabular output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; the output directory for `reproduce`. Standard output
    /// when omitted (`figures/` for `reproduce`).
    #[arg(short, long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

/// Everything a run depends on; stored as TOML by `--save-config`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub command: Command,
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Tsv,
}

#[derive(Subcommand, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Single-particle levels: `energy,degeneracy[,labels]`.
    Spectrum(SpectrumArgs),
    /// Cumulative state number at each level: `energy,N`.
    Staircase(SourceArgs),
    /// Windowed density of states: `center,g`.
    Dos(DosArgs),
    /// N-boson levels built on a single-particle spectrum.
    Nboson(NbosonArgs),
    /// Closed forms: Weyl laws, N-boson power laws, numerical convolution.
    Analytic(AnalyticArgs),
    /// Log-log power-law fit of a staircase, one report row.
    Fit(FitArgs),
    /// Fits across a family of box shapes.
    Sweep(SweepArgs),
    /// Data series (and plot-script stubs) for a figure or table.
    Reproduce(ReproduceArgs),
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// Unit cube.
    Cube,
    /// Unit square.
    Square2d,
    /// Unit-volume box with sides 1, 2/e, e/2.
    Rectangle,
    /// 1-D box of unit length.
    Line,
    /// Box with --lengths.
    Hyperbox,
    Sphere,
    /// Cylinder with --aspect, or --height and --radius.
    Cylinder,
    /// Square with energy pc, side --side.
    Relativistic,
    /// Seeded random spectrum with density (pi/4) e^exponent.
    Random,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Cube => "cube",
            Shape::Square2d => "square2d",
            Shape::Rectangle => "rectangle",
            Shape::Line => "line",
            Shape::Hyperbox => "hyperbox",
            Shape::Sphere => "sphere",
            Shape::Cylinder => "cylinder",
            Shape::Relativistic => "relativistic",
            Shape::Random => "random",
        }
    }
}

/// Where single-particle levels come from.
#[derive(Args, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Source {
    /// Box shape.
    #[arg(long = "geometry", visible_alias = "base", value_enum, default_value_t = Shape::Cube)]
    pub shape: Shape,

    /// Side lengths of a hyperbox, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(default)]
    pub lengths: Vec<f64>,

    /// Sphere or cylinder radius (only with --raw-lengths).
    #[arg(long, allow_negative_numbers = true)]
    pub radius: Option<f64>,

    /// Cylinder height (only with --raw-lengths).
    #[arg(long, allow_negative_numbers = true)]
    pub height: Option<f64>,

    /// Cylinder height-to-radius ratio [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub aspect: Option<f64>,

    /// Side of the relativistic square [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub side: Option<f64>,

    /// Keep the given lengths instead of rescaling the box to unit volume.
    #[arg(long)]
    #[serde(default)]
    pub raw_lengths: bool,

    /// Number of levels of a random spectrum.
    #[arg(long, default_value_t = 500)]
    pub levels: usize,

    /// Density exponent of a random spectrum.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub exponent: f64,

    /// Energy cutoff [default: 1024; spheres use --k-max 95].
    #[arg(long, allow_negative_numbers = true)]
    pub e_max: Option<f64>,

    /// Sphere cutoff on the Bessel zero k instead of the energy.
    #[arg(long, allow_negative_numbers = true)]
    pub k_max: Option<f64>,

    /// Read levels from a spectrum CSV instead of enumerating a geometry.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
}

fn positive(flag: &str, v: f64) -> CliResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(flag, format!("must be a positive number, got {v}")))
    }
}

fn positive_opt(flag: &str, v: Option<f64>) -> CliResult<()> {
    v.map_or(Ok(()), |v| positive(flag, v))
}

fn only_for(flag: &str, present: bool, allowed: bool, shapes: &str) -> CliResult<()> {
    if present && !allowed {
        return Err(invalid(flag, format!("only applies to {shapes}")));
    }
    Ok(())
}

impl Source {
    pub fn validate(&self) -> CliResult<()> {
        use Shape::*;
        let s = self.shape;
        positive_opt("--e-max", self.e_max)?;
        positive_opt("--k-max", self.k_max)?;
        positive_opt("--radius", self.radius)?;
        positive_opt("--height", self.height)?;
        positive_opt("--aspect", self.aspect)?;
        positive_opt("--side", self.side)?;
        for &l in &self.lengths {
            positive("--lengths", l)?;
        }
        if self.input.is_some() {
            return only_for("--k-max", self.k_max.is_some(), false, "enumerated spheres");
        }
        if self.e_max.is_some() && self.k_max.is_some() {
            return Err(invalid("--k-max", "give either --e-max or --k-max, not both"));
        }
        only_for("--k-max", self.k_max.is_some(), s == Sphere, "sphere")?;
        only_for("--lengths", !self.lengths.is_empty(), s == Hyperbox, "hyperbox")?;
        only_for("--radius", self.radius.is_some(), matches!(s, Sphere | Cylinder), "sphere and cylinder")?;
        only_for("--height", self.height.is_some(), s == Cylinder, "cylinder")?;
        only_for("--aspect", self.aspect.is_some(), s == Cylinder, "cylinder")?;
        only_for("--side", self.side.is_some(), s == Relativistic, "relativistic")?;
        if s == Hyperbox && self.lengths.is_empty() {
            return Err(invalid("--lengths", "hyperbox needs at least one length"));
        }
        if s == Cylinder {
            if self.aspect.is_some() && (self.height.is_some() || self.radius.is_some()) {
                return Err(invalid("--aspect", "give either --aspect or --height with --radius"));
            }
            if self.height.is_some() != self.radius.is_some() {
                return Err(invalid("--height", "--height and --radius go together"));
            }
        }
        if s == Random {
            if self.levels < 1 {
                return Err(invalid("--levels", "must be at least 1"));
            }
            if !(self.exponent.is_finite() && self.exponent > -1.0) {
                return Err(invalid("--exponent", format!("must exceed -1, got {}", self.exponent)));
            }
        }
        Ok(())
    }

    /// Label used in fit reports.
    pub fn label(&self) -> String {
        match &self.input {
            Some(path) => path
                .file_stem()
                .map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned()),
            None => self.shape.name().into(),
        }
    }
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SourceArgs {
    #[command(flatten)]
    pub source: Source,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: Source,

    /// Add the quantum numbers of every state.
    #[arg(long)]
    #[serde(default)]
    pub labels: bool,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DosArgs {
    #[command(flatten)]
    pub source: Source,

    /// Window width [default: 10 up to e-max 200, else 60 in 2-D and 50 otherwise].
    #[arg(long, allow_negative_numbers = true)]
    pub window: Option<f64>,

    /// First window center [default: half a window].
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,

    /// Last window center [default: e-max minus half a window].
    #[arg(long, allow_negative_numbers = true)]
    pub end: Option<f64>,

    /// Disjoint windows (a histogram divided by the width) instead of half-overlapping ones.
    #[arg(long)]
    #[serde(default)]
    pub tiling: bool,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NbosonArgs {
    #[command(flatten)]
    pub source: Source,

    /// Number of bosons.
    #[arg(long)]
    pub n: u32,

    /// Without --e-max, the cutoff is chosen so the build holds about this many states.
    #[arg(long, default_value_t = 200_000)]
    pub states: u64,

    /// Refuse builds above this many states.
    #[arg(long, default_value_t = 20_000_000)]
    pub max_states: u64,

    /// List individual configurations (at most this many) instead of levels.
    #[arg(long, value_name = "LIMIT")]
    pub configs: Option<usize>,
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticForm {
    /// `energy,N,g` of the D-dimensional Weyl law.
    Weyl,
    /// `N,coefficient,exponent,alpha,beta,ln_alpha` for N = 1..n.
    ClosedForm,
    /// `energy,numeric,closed_form,rel_error` of the iterated convolution.
    Convolution,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AnalyticArgs {
    #[arg(long, value_enum, default_value_t = AnalyticForm::ClosedForm)]
    pub form: AnalyticForm,

    /// Dimension of the Weyl law.
    #[arg(long, default_value_t = 3)]
    pub dim: u32,

    /// Single-particle DOS amplitude a in g = a e^b.
    #[arg(long, default_value_t = 0.4, allow_negative_numbers = true)]
    pub a: f64,

    /// Single-particle DOS exponent b (a half-integer).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub b: f64,

    /// Particle number (largest N for closed-form).
    #[arg(long, default_value_t = 5)]
    pub n: u32,

    /// Energy grid START:END[:lin|log].
    #[arg(long, default_value = "1:100:log")]
    pub energies: Range,

    /// Points on the energy grid.
    #[arg(long, default_value_t = 12)]
    pub steps: usize,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FitArgs {
    #[command(flatten)]
    pub source: Source,

    /// Label column of the report [default: geometry or input file stem].
    #[arg(long)]
    pub label: Option<String>,

    /// Particle number column of the report.
    #[arg(long, default_value_t = 1)]
    pub n: u32,

    /// Drop staircase corners with fewer states.
    #[arg(long, default_value_t = boxdos_core::fitlab::DEFAULT_MIN_COUNT)]
    pub min_count: u64,

    /// Lowest energy entering the fit.
    #[arg(long, allow_negative_numbers = true)]
    pub e_lo: Option<f64>,

    /// Highest energy entering the fit.
    #[arg(long, allow_negative_numbers = true)]
    pub e_hi: Option<f64>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    /// `hyperbox` sweeps L_z of a box with L_x = L_y = 1; `cylinder` sweeps H/R at unit volume.
    #[arg(long, value_enum, default_value_t = Shape::Hyperbox)]
    pub geometry: Shape,

    /// L_z range START:END[:lin|log].
    #[arg(long, default_value = "0.01:100:log")]
    pub lz: Range,

    /// Cylinder H/R range START:END[:lin|log].
    #[arg(long, default_value = "0.01:1:log")]
    pub ratio: Range,

    /// Points in the sweep.
    #[arg(long, default_value_t = 21)]
    pub steps: usize,

    /// States enumerated at each point. Few states keep the fit inside
    /// the lowest transverse gap, where the reduced dimension shows.
    #[arg(long, default_value_t = 200)]
    pub states: u64,

    /// Drop staircase corners with fewer states.
    #[arg(long, default_value_t = boxdos_core::fitlab::DEFAULT_MIN_COUNT)]
    pub min_count: u64,
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Table1,
    Table2,
    Table3,
    All,
}

impl Target {
    pub fn name(self) -> String {
        format!("{self:?}").to_lowercase()
    }

    pub fn each() -> Vec<Target> {
        Target::value_variants()
            .iter()
            .copied()
            .filter(|&t| t != Target::All)
            .collect()
    }
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub target: Target,

    /// N-boson builds hold about this many states.
    #[arg(long, default_value_t = 200_000)]
    pub states: u64,

    /// Random spectra in the ensemble.
    #[arg(long, default_value_t = 100)]
    pub ensemble: usize,

    /// Levels per random spectrum.
    #[arg(long, default_value_t = 500)]
    pub levels: usize,
}

/// `START:END[:lin|log]`.
#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq)]
#[serde(try_from = "String", into = "String")]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub log: bool,
}

impl Range {
    pub fn validate(&self, flag: &str) -> CliResult<()> {
        if !(self.start.is_finite() && self.end.is_finite() && self.start <= self.end) {
            return Err(invalid(flag, "needs finite START <= END"));
        }
        if self.log && !(self.start > 0.0) {
            return Err(invalid(flag, "log spacing needs START > 0"));
        }
        Ok(())
    }

    pub fn points(&self, steps: usize) -> Vec<f64> {
        if steps == 1 {
            return vec![self.start];
        }
        (0..steps)
            .map(|i| {
                let t = i as f64 / (steps - 1) as f64;
                if self.log {
                    (self.start.ln() + t * (self.end.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.end - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number"));
        let log = match parts.get(2).map(|p| p.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(other) => return Err(format!("spacing `{other}` is neither lin nor log")),
        };
        if !(2..=3).contains(&parts.len()) {
            return Err("expected START:END[:lin|log]".into());
        }
        Ok(Range {
            start: num(parts[0])?,
            end: num(parts[1])?,
            log,
        })
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = if self.log { "log" } else { "lin" };
        write!(f, "{:?}:{:?}:{spacing}", self.start, self.end)
    }
}

impl TryFrom<String> for Range {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Range> for String {
    fn from(r: Range) -> String {
        r.to_string()
    }
}
