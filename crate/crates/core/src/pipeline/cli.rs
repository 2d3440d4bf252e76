use std::path::PathBuf;

use clap::{Args, Parser, ValueEnum};

use crate::error::{Error, Result};
use crate::lrt::{FilterKind, SinogramKind};
use crate::phantoms::{ElasticConstants, PlaneMode};

use super::config::{AngleScheme, PhantomKind, Route, RunConfig, Subcommand};

/// Strain tomography from longitudinal ray transform data.
#[derive(Debug, Parser)]
#[command(name = "strain-tomo", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Log more (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, clap::Subcommand)]
pub enum Command {
    /// Generate a phantom strain field and its boundary polygon.
    Phantom {
        #[arg(value_enum, default_value_t = PhantomArg::Airy)]
        kind: PhantomArg,
        #[command(flatten)]
        flags: Flags,
    },
    /// Forward-project a strain field to an LRT sinogram.
    Project(Flags),
    /// Reconstruct the strain field from a sinogram.
    Reconstruct(Flags),
    /// Saint-Venant incompatibility map of a strain field.
    Incompat(Flags),
    /// Trace of the solenoidal part from a sinogram.
    Trace(Flags),
    /// Reconstruction error against projection count, with and without noise.
    NoiseSweep(Flags),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhantomArg {
    Airy,
    Axisym,
    File,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemeArg {
    #[value(name = "uniform_360")]
    Uniform360,
    #[value(name = "golden_50")]
    Golden50,
    #[value(name = "explicit_list")]
    ExplicitList,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RouteArg {
    Hooke,
    Fem,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FilterArg {
    RamLak,
    Cosine,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InputKindArg {
    Lrt,
    Average,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Input field (.stf) or sinogram (.sgm or .csv).
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Output directory.
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
    /// Ground-truth strain field for error metrics.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Boundary polygon CSV (`loop,x,y`).
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Number of projections [default: 200, or 50 for golden_50].
    #[arg(long)]
    pub n_angles: Option<usize>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Uniform360)]
    pub angle_scheme: SchemeArg,
    /// Comma-separated angles in degrees, for explicit_list.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub angles: Vec<f64>,
    /// Golden-angle start in degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub golden_start: f64,
    /// Noise standard deviation as a fraction of max |LRT|.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Young's modulus.
    #[arg(long = "E", default_value_t = 1.0, allow_hyphen_values = true)]
    pub e: f64,
    /// Poisson ratio.
    #[arg(long, default_value_t = 0.34, allow_hyphen_values = true)]
    pub nu: f64,
    #[arg(long)]
    pub plane_strain: bool,
    /// Spectral cutoff as a fraction of the maximum wavenumber.
    #[arg(long, default_value_t = 1.0)]
    pub cutoff: f64,
    /// Zero-padding factor for spectral derivatives.
    #[arg(long, default_value_t = 2)]
    pub pad: usize,
    #[arg(long, value_enum, default_value_t = RouteArg::Hooke)]
    pub route: RouteArg,
    #[arg(long, value_enum, default_value_t = FilterArg::RamLak)]
    pub filter: FilterArg,
    /// FEM element size [default: 0.5% of the domain size].
    #[arg(long)]
    pub target_h: Option<f64>,
    #[arg(long, default_value_t = 15.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Samples per side [default: 400, or 200 for noise-sweep].
    #[arg(long)]
    pub nx: Option<usize>,
    /// Sample spacing [default: 2.4 / nx].
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Uniform hydrostatic strain added inside the phantom.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub hydrostatic: f64,
    #[arg(long, value_enum, default_value_t = InputKindArg::Lrt)]
    pub input_kind: InputKindArg,
    /// Write path-averaged strain instead of the LRT.
    #[arg(long)]
    pub as_average: bool,
    /// Comma-separated projection counts for noise-sweep.
    #[arg(long, value_delimiter = ',')]
    pub ladder: Vec<usize>,
    /// Floor from 50,000 noiseless projections.
    #[arg(long)]
    pub full_floor: bool,
    #[arg(long, default_value_t = 5000)]
    pub floor_projections: usize,
    /// Exterior ratio above which a traction violation is flagged.
    #[arg(long, default_value_t = super::config::DEFAULT_TRACTION_THRESHOLD)]
    pub traction_threshold: f64,
    #[arg(long)]
    pub no_plots: bool,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let (sub, flags, phantom) = match self.command {
            Command::Phantom { kind, flags } => {
                let k = match kind {
                    PhantomArg::Airy => PhantomKind::Airy,
                    PhantomArg::Axisym => PhantomKind::Axisym,
                    PhantomArg::File => PhantomKind::File,
                };
                (Subcommand::Phantom, flags, k)
            }
            Command::Project(f) => (Subcommand::Project, f, PhantomKind::Airy),
            Command::Reconstruct(f) => (Subcommand::Reconstruct, f, PhantomKind::Airy),
            Command::Incompat(f) => (Subcommand::Incompat, f, PhantomKind::Airy),
            Command::Trace(f) => (Subcommand::Trace, f, PhantomKind::Airy),
            Command::NoiseSweep(f) => (Subcommand::NoiseSweep, f, PhantomKind::Airy),
        };
        flags.into_config(sub, phantom)
    }
}

impl Flags {
    pub fn into_config(self, sub: Subcommand, phantom: PhantomKind) -> Result<RunConfig> {
        let mut c = RunConfig::new(sub, self.out);
        c.phantom = phantom;
        c.input = self.input;
        c.reference = self.reference;
        c.mask = self.mask;
        c.angle_scheme = match self.angle_scheme {
            SchemeArg::Uniform360 => AngleScheme::Uniform360,
            SchemeArg::Golden50 => AngleScheme::Golden50,
            SchemeArg::ExplicitList => {
                if self.angles.is_empty() {
                    return Err(Error::param("explicit_list needs --angles"));
                }
                AngleScheme::ExplicitList(self.angles.iter().map(|d| d.to_radians()).collect())
            }
        };
        let default_n = if matches!(c.angle_scheme, AngleScheme::Golden50) { 50 } else { 200 };
        c.n_angles = self.n_angles.unwrap_or(default_n);
        c.golden_start = self.golden_start.to_radians();
        c.noise_sigma_fraction = self.noise;
        c.seed = self.seed;
        let mode = if self.plane_strain { PlaneMode::PlaneStrain } else { PlaneMode::PlaneStress };
        c.constants = ElasticConstants::new(self.e, self.nu, mode)?;
        c.cutoff_fraction = self.cutoff;
        c.pad_factor = self.pad;
        c.route = match self.route {
            RouteArg::Hooke => Route::Hooke,
            RouteArg::Fem => Route::Fem,
            RouteArg::Both => Route::Both,
        };
        c.filter = match self.filter {
            FilterArg::RamLak => FilterKind::RamLak,
            FilterArg::Cosine => FilterKind::Cosine,
        };
        c.target_h = self.target_h;
        c.alpha = self.alpha;
        c.nx = self
            .nx
            .unwrap_or(if sub == Subcommand::NoiseSweep { 200 } else { 400 });
        c.spacing = self.spacing.unwrap_or(2.4 / c.nx as f64);
        c.hydrostatic = self.hydrostatic;
        c.input_kind = match self.input_kind {
            InputKindArg::Lrt => SinogramKind::LrtIntegral,
            InputKindArg::Average => SinogramKind::AverageStrain,
        };
        c.as_average = self.as_average;
        if !self.ladder.is_empty() {
            c.ladder = self.ladder;
        }
        c.full_floor = self.full_floor;
        c.floor_projections = self.floor_projections;
        c.traction_threshold = self.traction_threshold;
        c.plots = !self.no_plots;
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        let mut v = vec!["strain-tomo"];
        v.extend_from_slice(args);
        Cli::try_parse_from(v).unwrap().into_config()
    }

    #[test]
    fn phantom_flags() {
        let c = parse(&["phantom", "airy", "--alpha", "15", "--nu", "0.34", "--E", "1", "--nx", "400"])
            .unwrap();
        assert_eq!(c.subcommand, Subcommand::Phantom);
        assert_eq!(c.nx, 400);
        assert!((c.spacing - 0.006).abs() < 1e-15);
        assert!(parse(&["phantom", "airy", "--alpha", "0"]).is_err());
    }

    #[test]
    fn golden_defaults_to_fifty() {
        let c = parse(&["project", "--angle-scheme", "golden_50", "--golden-start", "10"]).unwrap();
        assert_eq!(c.n_angles, 50);
        assert!((c.golden_start - 10f64.to_radians()).abs() < 1e-15);
    }

    #[test]
    fn sweep_defaults_to_small_grid() {
        let c = parse(&["noise-sweep", "--noise", "0.1", "--ladder", "25,50"]).unwrap();
        assert_eq!(c.nx, 200);
        assert_eq!(c.ladder, vec![25, 50]);
        assert!(parse(&["noise-sweep", "--noise", "-1"]).is_err());
    }

    #[test]
    fn explicit_angles_in_degrees() {
        let c = parse(&["project", "--angle-scheme", "explicit_list", "--angles", "0,90,-45"]).unwrap();
        let a = c.angles().unwrap();
        assert_eq!(a.len(), 3);
        assert!((a[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(parse(&["project", "--angle-scheme", "explicit_list"]).is_err());
    }
}
