use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Grid2;
use crate::lrt::{golden_angles, uniform_angles, FilterKind, SinogramKind};
use crate::phantoms::ElasticConstants;
use crate::spectral::SpectralPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Phantom,
    Project,
    Reconstruct,
    Incompat,
    Trace,
    NoiseSweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleScheme {
    /// `n_angles` equally spaced angles over 360 degrees.
    Uniform360,
    /// `n_angles` golden-angle increments from `golden_start`, sorted.
    Golden50,
    /// Explicit angles in radians.
    ExplicitList(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    #[default]
    Hooke,
    Fem,
    Both,
}

impl Route {
    pub fn hooke(self) -> bool {
        matches!(self, Route::Hooke | Route::Both)
    }

    pub fn fem(self) -> bool {
        matches!(self, Route::Fem | Route::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhantomKind {
    #[default]
    Airy,
    Axisym,
    /// Validate and re-emit an existing field file.
    File,
}

/// Parameters of one command-line run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub input: Option<PathBuf>,
    pub output: PathBuf,
    /// Ground-truth strain field for error metrics.
    pub reference: Option<PathBuf>,
    /// Sample boundary as written by `phantom` (`loop,x,y` CSV).
    pub mask: Option<PathBuf>,
    pub n_angles: usize,
    pub angle_scheme: AngleScheme,
    /// Radians.
    pub golden_start: f64,
    pub noise_sigma_fraction: f64,
    pub seed: u64,
    pub constants: ElasticConstants,
    pub cutoff_fraction: f64,
    pub pad_factor: usize,
    pub route: Route,
    pub filter: FilterKind,
    pub target_h: Option<f64>,
    pub phantom: PhantomKind,
    pub alpha: f64,
    pub nx: usize,
    pub spacing: f64,
    pub hydrostatic: f64,
    /// How to read `input` sinograms: `lrt` or `average`.
    pub input_kind: SinogramKind,
    /// `project`: emit path-averaged strain instead of the LRT.
    pub as_average: bool,
    pub ladder: Vec<usize>,
    pub full_floor: bool,
    pub floor_projections: usize,
    pub traction_threshold: f64,
    pub plots: bool,
}

pub const DEFAULT_LADDER: [usize; 6] = [25, 50, 100, 200, 400, 800];
pub const DEFAULT_TRACTION_THRESHOLD: f64 = 0.1;

impl RunConfig {
    /// Defaults: 400x400 grid of spacing 0.006, 200 uniform
    /// angles, `E = 1`, `nu = 0.34`, plane stress, noiseless.
    pub fn new(subcommand: Subcommand, output: impl Into<PathBuf>) -> Self {
        Self {
            subcommand,
            input: None,
            output: output.into(),
            reference: None,
            mask: None,
            n_angles: 200,
            angle_scheme: AngleScheme::Uniform360,
            golden_start: 0.0,
            noise_sigma_fraction: 0.0,
            seed: 0,
            constants: ElasticConstants {
                e: 1.0,
                nu: 0.34,
                mode: Default::default(),
            },
            cutoff_fraction: 1.0,
            pad_factor: 2,
            route: Route::Hooke,
            filter: FilterKind::RamLak,
            target_h: None,
            phantom: PhantomKind::Airy,
            alpha: 15.0,
            nx: 400,
            spacing: 0.006,
            hydrostatic: 0.0,
            input_kind: SinogramKind::LrtIntegral,
            as_average: false,
            ladder: DEFAULT_LADDER.to_vec(),
            full_floor: false,
            floor_projections: 5000,
            traction_threshold: DEFAULT_TRACTION_THRESHOLD,
            plots: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sigma_fraction >= 0.0 && self.noise_sigma_fraction.is_finite()) {
            return Err(Error::param(format!(
                "noise_sigma_fraction must be >= 0, got {}",
                self.noise_sigma_fraction
            )));
        }
        if !matches!(self.angle_scheme, AngleScheme::ExplicitList(_)) && self.n_angles < 2 {
            return Err(Error::param(format!("n_angles must be >= 2, got {}", self.n_angles)));
        }
        if !(self.cutoff_fraction > 0.0 && self.cutoff_fraction <= 1.0) {
            return Err(Error::param(format!(
                "cutoff_fraction must lie in (0, 1], got {}",
                self.cutoff_fraction
            )));
        }
        if self.pad_factor < 1 {
            return Err(Error::param("pad_factor must be >= 1"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::param(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.nx < 2 {
            return Err(Error::param(format!("nx must be >= 2, got {}", self.nx)));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::param(format!("spacing must be positive, got {}", self.spacing)));
        }
        if let Some(h) = self.target_h {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::param(format!("target_h must be positive, got {h}")));
            }
        }
        if self.ladder.is_empty() || self.ladder.iter().any(|&n| n < 2) {
            return Err(Error::param("ladder entries must be >= 2"));
        }
        if self.floor_projections < 2 {
            return Err(Error::param("floor_projections must be >= 2"));
        }
        if !(self.traction_threshold > 0.0) {
            return Err(Error::param("traction_threshold must be positive"));
        }
        ElasticConstants::new(self.constants.e, self.constants.nu, self.constants.mode)?;
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid2> {
        Grid2::centered(self.nx, self.nx, self.spacing, self.spacing)
    }

    pub fn angles(&self) -> Result<Vec<f64>> {
        self.angles_n(self.n_angles)
    }

    /// Angles of the configured scheme with `n` entries (explicit lists
    /// ignore `n`).
    pub fn angles_n(&self, n: usize) -> Result<Vec<f64>> {
        match &self.angle_scheme {
            AngleScheme::Uniform360 => uniform_angles(n),
            AngleScheme::Golden50 => golden_angles(n, self.golden_start),
            AngleScheme::ExplicitList(list) => {
                let mut a: Vec<f64> = list
                    .iter()
                    .map(|t| t.rem_euclid(2.0 * std::f64::consts::PI))
                    .collect();
                a.sort_by(f64::total_cmp);
                a.dedup();
                if a.len() < 2 {
                    return Err(Error::param("explicit angle list needs >= 2 distinct angles"));
                }
                Ok(a)
            }
        }
    }

    pub fn plan(&self, grid: Grid2) -> Result<SpectralPlan> {
        SpectralPlan::new(grid, self.pad_factor, self.cutoff_fraction)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = RunConfig::new(Subcommand::Phantom, "out");
        c.validate().unwrap();
        assert_eq!(c.grid().unwrap(), crate::phantoms::standard_grid());
        assert_eq!(c.angles().unwrap().len(), 200);
    }

    #[test]
    fn rejects_bad_values() {
        let base = RunConfig::new(Subcommand::Project, "out");
        let mut c = base.clone();
        c.noise_sigma_fraction = -0.1;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.n_angles = 1;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.alpha = 0.0;
        assert!(c.validate().is_err());
        let mut c = base;
        c.cutoff_fraction = 1.5;
        assert!(c.validate().is_err());
    }

    #[test]
    fn golden_scheme() {
        let mut c = RunConfig::new(Subcommand::Project, "out");
        c.angle_scheme = AngleScheme::Golden50;
        c.n_angles = 50;
        let a = c.angles().unwrap();
        assert_eq!(a.len(), 50);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn explicit_list_is_wrapped_and_sorted() {
        let mut c = RunConfig::new(Subcommand::Project, "out");
        c.angle_scheme = AngleScheme::ExplicitList(vec![1.0, -0.5, 0.0]);
        let a = c.angles().unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a[0], 0.0);
        assert!((a[2] - (2.0 * std::f64::consts::PI - 0.5)).abs() < 1e-15);
    }
}
