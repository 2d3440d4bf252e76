use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elasticity::{hooke_recover, reconstruct_fem_detailed, FemOptions};
use crate::error::{Error, Result};
use crate::fields::{rel_rms_error, Mask2, TensorField2};
use crate::lrt::{add_noise, lrt_forward, tensor_fbp, DetectorSpec, FbpOptions, Sinogram};
use crate::phantoms::AirySpec;

use super::config::{Route, RunConfig};

/// Projection count of the reference floor run behind `--full-floor`.
pub const FULL_FLOOR_PROJECTIONS: usize = 50_000;
/// The default floor run is only made on grids up to this size.
pub const FLOOR_MAX_NX: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub noisy_error: f64,
    pub noiseless_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Discretization floor: noiseless error at `floor_projections`, or the
    /// smallest noiseless ladder error when no floor run was made.
    pub floor: f64,
    pub floor_projections: Option<usize>,
    pub fit: Option<SlopeFit>,
    /// `(max - min) / min` of the noiseless errors.
    pub noiseless_variation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Ladder entries used in the fit.
    pub points: Vec<usize>,
}

/// Least-squares line through `(ln n, ln e)`.
pub fn loglog_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .map(|p| (p.0.ln(), p.1.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Slope of the noise-driven error before the floor.
///
/// Noise and discretization errors are independent, so the noise part is
/// taken as `sqrt(e^2 - floor^2)`. Only entries with `e >= 2 floor` are
/// used; with fewer than three such entries every entry above the floor is.
pub fn fit_noise_slope(rows: &[SweepRow], floor: f64) -> Option<SlopeFit> {
    let select = |factor: f64| -> Vec<&SweepRow> {
        rows.iter().filter(|r| r.noisy_error > factor * floor).collect()
    };
    let mut chosen = select(2.0);
    if chosen.len() < 3 {
        chosen = select(1.0);
    }
    let pts: Vec<(f64, f64)> = chosen
        .iter()
        .map(|r| (r.n as f64, (r.noisy_error.powi(2) - floor * floor).max(0.0).sqrt()))
        .collect();
    let (slope, intercept) = loglog_fit(&pts)?;
    Some(SlopeFit {
        slope,
        intercept,
        points: chosen.iter().map(|r| r.n).collect(),
    })
}

struct Setup {
    truth: TensorField2,
    mask: Mask2,
    detector: DetectorSpec,
}

fn reconstruct(config: &RunConfig, setup: &Setup, sg: &Sinogram) -> Result<TensorField2> {
    let grid = setup.truth.grid();
    let sf = tensor_fbp(sg, grid, &FbpOptions { filter: config.filter })?;
    if config.route == Route::Fem {
        let opts = FemOptions { target_h: config.target_h };
        let plan = config.plan(*grid)?;
        Ok(reconstruct_fem_detailed(&sf, &setup.mask, &config.constants, &plan, &opts)?.strain)
    } else {
        Ok(hooke_recover(&sf, &config.constants))
    }
}

fn noiseless_error(config: &RunConfig, setup: &Setup, n: usize) -> Result<f64> {
    let sg = lrt_forward(&setup.truth, &config.angles_n(n)?, &setup.detector)?;
    rel_rms_error(&reconstruct(config, setup, &sg)?, &setup.truth, &setup.mask)
}

/// Error against the Airy phantom over a ladder of projection counts, with
/// and without noise. Each entry uses seed `config.seed + n`.
pub fn noise_sweep(config: &RunConfig) -> Result<SweepResult> {
    config.validate()?;
    let grid = config.grid()?;
    let spec = AirySpec::new(config.alpha, config.constants, grid)?;
    let setup = Setup {
        truth: spec.strain(),
        mask: Mask2::disk(grid, 0.0, 0.0, 1.0)?,
        detector: DetectorSpec::for_grid(&grid),
    };

    let rows: Vec<SweepRow> = config
        .ladder
        .par_iter()
        .map(|&n| -> Result<SweepRow> {
            let clean = lrt_forward(&setup.truth, &config.angles_n(n)?, &setup.detector)?;
            let noiseless = rel_rms_error(&reconstruct(config, &setup, &clean)?, &setup.truth, &setup.mask)?;
            let noisy = if config.noise_sigma_fraction > 0.0 {
                let sg = add_noise(&clean, config.noise_sigma_fraction, config.seed.wrapping_add(n as u64))?;
                rel_rms_error(&reconstruct(config, &setup, &sg)?, &setup.truth, &setup.mask)?
            } else {
                noiseless
            };
            log::info!("n = {n}: noisy {noisy:.4e}, noiseless {noiseless:.4e}");
            Ok(SweepRow {
                n,
                noisy_error: noisy,
                noiseless_error: noiseless,
            })
        })
        .collect::<Result<_>>()?;

    let floor_projections = if config.full_floor {
        Some(FULL_FLOOR_PROJECTIONS)
    } else if config.nx <= FLOOR_MAX_NX {
        Some(config.floor_projections)
    } else {
        None
    };
    let min_noiseless = rows
        .iter()
        .map(|r| r.noiseless_error)
        .fold(f64::INFINITY, f64::min);
    let floor = match floor_projections {
        Some(n) => noiseless_error(config, &setup, n)?,
        None => min_noiseless,
    };
    if !floor.is_finite() {
        return Err(Error::Numerical("non-finite discretization floor".into()));
    }
    let max_noiseless = rows.iter().map(|r| r.noiseless_error).fold(0.0, f64::max);
    let fit = if config.noise_sigma_fraction > 0.0 {
        fit_noise_slope(&rows, floor)
    } else {
        None
    };
    Ok(SweepResult {
        rows,
        floor,
        floor_projections,
        fit,
        noiseless_variation: (max_noiseless - min_noiseless) / min_noiseless,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = [25.0, 50.0, 100.0, 200.0]
            .iter()
            .map(|&n: &f64| (n, 3.0 * n.powf(-0.5)))
            .collect();
        let (s, b) = loglog_fit(&pts).unwrap();
        assert!((s + 0.5).abs() < 1e-12);
        assert!((b - 3f64.ln()).abs() < 1e-12);
        assert!(loglog_fit(&pts[..1]).is_none());
    }

    #[test]
    fn floor_is_removed_in_quadrature() {
        let floor = 0.01;
        let rows: Vec<SweepRow> = [25usize, 50, 100, 200, 400, 800]
            .iter()
            .map(|&n| {
                let noise = 0.5 / (n as f64).sqrt();
                SweepRow {
                    n,
                    noisy_error: (noise * noise + floor * floor).sqrt(),
                    noiseless_error: floor,
                }
            })
            .collect();
        let fit = fit_noise_slope(&rows, floor).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-9, "{}", fit.slope);
        assert_eq!(fit.points, vec![25, 50, 100, 200, 400, 800]);
    }

    #[test]
    fn small_sweep_runs() {
        let mut c = RunConfig::new(super::super::config::Subcommand::NoiseSweep, "out");
        c.nx = 48;
        c.spacing = 0.05;
        c.ladder = vec![20, 40];
        c.floor_projections = 80;
        c.noise_sigma_fraction = 0.1;
        let r = noise_sweep(&c).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows[1].noisy_error < r.rows[0].noisy_error);
        assert!(r.floor > 0.0 && r.floor < 0.2);
        assert_eq!(r, noise_sweep(&c).unwrap());
    }

    proptest! {
        #[test]
        fn fit_is_exact_on_power_laws(p in -2.0f64..0.0, a in 0.01f64..10.0) {
            let pts: Vec<(f64, f64)> = (1..6).map(|k| {
                let n = 10.0 * 2f64.powi(k);
                (n, a * n.powf(p))
            }).collect();
            let (s, _) = loglog_fit(&pts).unwrap();
            prop_assert!((s - p).abs() < 1e-9);
        }
    }
}
