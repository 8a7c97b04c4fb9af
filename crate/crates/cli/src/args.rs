use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lifshitz_core::ZeroFrequencyPolicy;

/// Thermal Casimir-Polder and Casimir computations from the Lifshitz theory.
///
/// Relative `--config` paths that do not exist are looked up in
/// `$LIFSHITZ_CONFIG_DIR`, which also supplies the default files.
#[derive(Debug, Parser)]
#[command(name = "lifshitz", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Low-temperature coefficient C_D for a list of static permittivities.
    CdTable(CdTableArgs),
    /// Atom-plate entropy at low temperature and the Nernst verdict (JSON).
    Nernst(NernstArgs),
    /// Sphere-plate difference force between bright and dark plate phases.
    DiffForce(DiffForceArgs),
    /// Atom-plate free energy, entropy or T = 0 energy on a grid.
    Sweep(SweepArgs),
    /// Metallic sphere: standard versus screened zero-frequency term.
    AuCheck(AuCheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output file (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Relative tolerance for quadratures and Matsubara sums.
    #[arg(long, value_name = "REL", default_value_t = 1e-10, value_parser = parse_tol)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CdTableArgs {
    /// Comma-separated static permittivities; an empty string gives an
    /// empty table.
    #[arg(long, value_name = "LIST", default_value = "1.5,3.81,11.67,16")]
    pub eps: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct NernstArgs {
    /// System file (atom, plate, separation). Default: rb_sio2.toml.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "neglect-dc")]
    pub policy: ZeroFrequencyPolicy,
    /// Overrides the separation of the system file, nm.
    #[arg(long, value_name = "NM")]
    pub separation: Option<f64>,
    /// Temperature grid in K (geometric). Default: 16 points over
    /// [1e-4, 1e-1] T_eff.
    #[arg(long, value_name = "MIN:MAX:N")]
    pub grid: Option<Range>,
    /// Where to write the S(T) table. Defaults to the JSON path with a
    /// `.csv` extension when `--out` is given.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiffPolicy {
    NeglectDc,
    Screened,
    Both,
}

#[derive(Debug, Args)]
pub struct DiffForceArgs {
    /// Experiment file. Default: experiment.toml.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Zero-frequency treatment of the plate phases.
    #[arg(long, value_enum, default_value = "both")]
    pub policy: DiffPolicy,
    /// Separation grid in nm (geometric), overriding the file.
    #[arg(long, value_name = "MIN:MAX:N")]
    pub grid: Option<Range>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    FreeEnergy,
    Entropy,
    Energy0,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub quantity: Quantity,
    /// System file (atom, plate, separation). Default: rb_sio2.toml.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "neglect-dc")]
    pub policy: ZeroFrequencyPolicy,
    /// Separation grid in nm (geometric). Default: the file's separation.
    #[arg(long, value_name = "MIN:MAX:N")]
    pub separations: Option<Range>,
    /// Temperature grid in K (geometric). Default: 16 points over
    /// [1e-4, 1e-1] T_eff at each separation.
    #[arg(long, value_name = "MIN:MAX:N")]
    pub grid: Option<Range>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct AuCheckArgs {
    /// Experiment file. Default: experiment.toml.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Separation grid in nm (geometric), overriding the file.
    #[arg(long, value_name = "MIN:MAX:N")]
    pub grid: Option<Range>,
    #[command(flatten)]
    pub common: Common,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("tolerance must lie in (0, 1), got {v}"))
    }
}

/// Geometric range `MIN:MAX:N`. A single point needs `MIN = MAX` and `N = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        lifshitz_core::atom_plate::geometric_grid(self.min, self.max, self.n)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.n)
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("expected MIN:MAX:N, got '{s}'"));
        };
        let min: f64 = lo.trim().parse().map_err(|e| format!("MIN '{lo}': {e}"))?;
        let max: f64 = hi.trim().parse().map_err(|e| format!("MAX '{hi}': {e}"))?;
        let n: usize = n.trim().parse().map_err(|e| format!("N '{n}': {e}"))?;
        if !(min > 0.0 && min.is_finite() && max.is_finite()) {
            return Err(format!(
                "range bounds must be positive and finite, got {min}:{max}"
            ));
        }
        if n == 0 {
            return Err("range needs at least one point".into());
        }
        if n == 1 && min != max {
            return Err(format!(
                "a single-point range needs MIN = MAX, got {min}:{max}"
            ));
        }
        if n > 1 && max <= min {
            return Err(format!("range needs MIN < MAX for N > 1, got {min}:{max}"));
        }
        Ok(Range { min, max, n })
    }
}
