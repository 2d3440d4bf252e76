use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::elasticity::{
    helmholtz_check, hooke_recover, reconstruct_fem_detailed, FemOptions, HelmholtzReport,
};
use crate::error::{Error, Result};
use crate::fields::io::{read_mask_loops, write_field_csv, write_mask_csv};
use crate::fields::{
    exterior_ratio, mask_from_support, read_tensor, rel_rms_error, rel_rms_error_scalar,
    write_field, Field, Grid2, Mask2, ReconReport, ScalarField2, TensorField2,
};
use crate::lrt::{
    add_noise, average_to_lrt, lrt_forward, lrt_to_average, read_sinogram, read_sinogram_csv,
    tensor_fbp, trace_fbp, write_sinogram, write_sinogram_csv, DetectorSpec, FbpOptions, Sinogram,
    SinogramKind,
};
use crate::phantoms::{
    add_hydrostatic, airy_potential, axisym_phantom, axisym_polar, AirySpec, PlaneMode,
};
use crate::spectral::saint_venant;

use super::config::{PhantomKind, RunConfig, Subcommand};
use super::plot::{write_loglog_png, write_scalar_png, write_sinogram_png, write_tensor_png};
use super::sweep::noise_sweep;

/// Support threshold for masks derived from a reference field.
const SUPPORT_TOL: f64 = 1e-6;

/// Record written next to every command's outputs as `manifest.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub subcommand: Subcommand,
    pub version: String,
    pub config: RunConfig,
    /// File names relative to the output directory.
    pub outputs: Vec<String>,
    pub metrics: BTreeMap<String, Value>,
}

struct Outputs<'a> {
    config: &'a RunConfig,
    files: Vec<String>,
    metrics: BTreeMap<String, Value>,
}

impl<'a> Outputs<'a> {
    fn new(config: &'a RunConfig) -> Result<Self> {
        fs::create_dir_all(&config.output).map_err(|e| Error::io(&config.output, e))?;
        Ok(Self {
            config,
            files: Vec::new(),
            metrics: BTreeMap::new(),
        })
    }

    fn path(&mut self, name: String) -> PathBuf {
        let p = self.config.output.join(&name);
        self.files.push(name);
        p
    }

    fn field(&mut self, stem: &str, field: impl Into<Field>) -> Result<()> {
        let field = field.into();
        write_field_csv(&field, self.path(format!("{stem}.csv")))?;
        if self.config.plots {
            let p = self.path(format!("{stem}.png"));
            match &field {
                Field::Tensor(t) => write_tensor_png(t, p)?,
                Field::Scalar(s) => write_scalar_png(s, p)?,
            }
        }
        write_field(field, self.path(format!("{stem}.stf")))
    }

    fn sinogram(&mut self, stem: &str, sg: &Sinogram) -> Result<()> {
        write_sinogram(sg, self.path(format!("{stem}.sgm")))?;
        write_sinogram_csv(sg, self.path(format!("{stem}.csv")))?;
        if self.config.plots {
            write_sinogram_png(sg, self.path(format!("{stem}.png")))?;
        }
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let path = self.path(name.to_string());
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| Error::Numerical(format!("cannot serialize {name}: {e}")))?;
        fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }

    fn metric(&mut self, key: &str, value: impl Serialize) {
        self.metrics.insert(key.to_string(), json!(value));
    }

    fn finish(mut self) -> Result<Manifest> {
        self.files.push("manifest.json".into());
        let manifest = Manifest {
            subcommand: self.config.subcommand,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.config.clone(),
            outputs: self.files,
            metrics: self.metrics,
        };
        let path = self.config.output.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Error::Numerical(format!("cannot serialize manifest: {e}")))?;
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(manifest)
    }
}

/// Runs the configured subcommand.
pub fn run(config: &RunConfig) -> Result<Manifest> {
    config.validate()?;
    match config.subcommand {
        Subcommand::Phantom => cmd_phantom(config),
        Subcommand::Project => cmd_project(config),
        Subcommand::Reconstruct => cmd_reconstruct(config),
        Subcommand::Incompat => cmd_incompat(config),
        Subcommand::Trace => cmd_trace(config),
        Subcommand::NoiseSweep => cmd_noise_sweep(config),
    }
}

fn require_input(config: &RunConfig) -> Result<&Path> {
    config
        .input
        .as_deref()
        .ok_or_else(|| Error::param("--input is required for this command"))
}

fn load_mask(config: &RunConfig, grid: Grid2) -> Result<Option<Mask2>> {
    config
        .mask
        .as_ref()
        .map(|p| Mask2::from_loops(grid, read_mask_loops(p)?))
        .transpose()
}

fn load_reference(config: &RunConfig) -> Result<Option<TensorField2>> {
    config.reference.as_ref().map(read_tensor).transpose()
}

/// Mask from `--mask`, else the support of the reference field.
fn domain_mask(config: &RunConfig, grid: Grid2, reference: Option<&TensorField2>) -> Result<Option<Mask2>> {
    if let Some(m) = load_mask(config, grid)? {
        return Ok(Some(m));
    }
    reference.map(|r| mask_from_support(r, SUPPORT_TOL)).transpose()
}

/// Reads an LRT sinogram, converting path-averaged data with the mask.
fn load_lrt(config: &RunConfig, grid: Grid2) -> Result<Sinogram> {
    let path = require_input(config)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let mut sg = if is_csv {
        read_sinogram_csv(path, config.input_kind)?
    } else {
        read_sinogram(path)?
    };
    if config.input_kind == SinogramKind::AverageStrain {
        sg = sg.with_kind(SinogramKind::AverageStrain);
    }
    if sg.kind() == SinogramKind::AverageStrain {
        let mask = load_mask(config, grid)?
            .ok_or_else(|| Error::param("average-strain input needs --mask for chord lengths"))?;
        sg = average_to_lrt(&sg, &mask)?;
    }
    Ok(sg)
}

fn recon_grid(config: &RunConfig, reference: Option<&TensorField2>) -> Result<Grid2> {
    match reference {
        Some(r) => Ok(*r.grid()),
        None => config.grid(),
    }
}

/// Writes a phantom strain field and its boundary polygon.
pub fn cmd_phantom(config: &RunConfig) -> Result<Manifest> {
    let mut out = Outputs::new(config)?;
    let (strain, mask) = match config.phantom {
        PhantomKind::File => {
            let f = read_tensor(require_input(config)?)?;
            let mask = match load_mask(config, *f.grid())? {
                Some(m) => m,
                None => mask_from_support(&f, SUPPORT_TOL)?,
            };
            (f, mask)
        }
        kind => {
            let grid = config.grid()?;
            let half = 0.5 * (grid.nx - 1) as f64 * grid.dx;
            if half <= 1.0 {
                return Err(Error::param(format!(
                    "grid half-width {half} does not contain the unit disk"
                )));
            }
            let mask = Mask2::disk(grid, 0.0, 0.0, 1.0)?;
            let strain = if kind == PhantomKind::Airy {
                let spec = AirySpec::new(config.alpha, config.constants, grid)?;
                out.field("psi", airy_potential(&spec))?;
                out.metric("alpha", config.alpha);
                spec.strain()
            } else {
                let nu = config.constants.nu;
                let (err, ett) = axisym_polar(nu, 1.0);
                let c = config.constants.e / (1.0 - nu * nu);
                out.metric("boundary_radial_stress", c * (err + nu * ett));
                axisym_phantom(nu, grid)?
            };
            (strain, mask)
        }
    };
    let strain = if config.hydrostatic != 0.0 {
        add_hydrostatic(&strain, &mask, config.hydrostatic)?
    } else {
        strain
    };
    write_mask_csv(&mask, out.path("mask.csv".into()))?;
    out.field("strain", strain.clone())?;
    out.metric("grid", [strain.grid().nx, strain.grid().ny]);
    out.metric("max_frobenius", strain.max_frobenius());
    out.metric("mask_area", mask.area());
    out.finish()
}

/// Forward LRT of a strain field, with optional noise.
pub fn cmd_project(config: &RunConfig) -> Result<Manifest> {
    let eps = read_tensor(require_input(config)?)?;
    let grid = *eps.grid();
    let angles = config.angles()?;
    let clean = lrt_forward(&eps, &angles, &DetectorSpec::for_grid(&grid))?;
    let mut out = Outputs::new(config)?;
    let mut sg = clean.clone();
    if config.noise_sigma_fraction > 0.0 {
        sg = add_noise(&clean, config.noise_sigma_fraction, config.seed)?;
        let diff = sg.sub(&clean)?;
        let n = diff.data().len() as f64;
        let mean = diff.data().iter().sum::<f64>() / n;
        let var = diff.data().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        out.metric("noise_sigma", config.noise_sigma_fraction * clean.max_abs());
        out.metric("noise_sample_std", var.sqrt());
    }
    out.metric("max_abs_lrt", clean.max_abs());
    if config.as_average {
        let mask = load_mask(config, grid)?
            .ok_or_else(|| Error::param("--as-average needs --mask for chord lengths"))?;
        sg = lrt_to_average(&sg, &mask)?;
    }
    out.metric("n_angles", sg.n_angles());
    out.metric("n_s", sg.n_s());
    out.metric("ds", sg.ds());
    out.sinogram("sinogram", &sg)?;
    out.finish()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconstructReport {
    pub exterior_ratio: Option<f64>,
    pub traction_violation_suspected: Option<bool>,
    pub hooke: Option<ReconReport>,
    pub fem: Option<ReconReport>,
    pub helmholtz: Option<HelmholtzReport>,
    pub fem_residual: Option<f64>,
    /// Relative RMS difference between the two routes over the mask.
    pub route_difference: Option<f64>,
}

/// Tensor FBP followed by Hooke and/or FEM recovery of the full strain.
pub fn cmd_reconstruct(config: &RunConfig) -> Result<Manifest> {
    let reference = load_reference(config)?;
    let grid = recon_grid(config, reference.as_ref())?;
    let sg = load_lrt(config, grid)?;
    let mask = domain_mask(config, grid, reference.as_ref())?;
    let sf = tensor_fbp(&sg, &grid, &FbpOptions { filter: config.filter })?;
    let mut out = Outputs::new(config)?;
    out.field("solenoidal", sf.clone())?;

    let mut report = ReconstructReport {
        exterior_ratio: None,
        traction_violation_suspected: None,
        hooke: None,
        fem: None,
        helmholtz: None,
        fem_residual: None,
        route_difference: None,
    };
    if let Some(m) = &mask {
        let r = exterior_ratio(&sf, m)?;
        report.exterior_ratio = Some(r);
        report.traction_violation_suspected = Some(r > config.traction_threshold);
        if r > config.traction_threshold {
            log::warn!(
                "exterior ratio {r:.3e} exceeds {:.1e}: the field may not be traction free",
                config.traction_threshold
            );
        }
    }
    let compare = |eps: &TensorField2| -> Result<Option<ReconReport>> {
        match (&reference, &mask) {
            (Some(r), Some(m)) => Ok(Some(ReconReport::compare(eps, r, m)?)),
            _ => Ok(None),
        }
    };

    let hooke = if config.route.hooke() {
        let eps = hooke_recover(&sf, &config.constants);
        report.hooke = compare(&eps)?;
        out.field("strain_hooke", eps.clone())?;
        Some(eps)
    } else {
        None
    };
    if config.route.fem() {
        let mask = mask
            .as_ref()
            .ok_or_else(|| Error::param("the FEM route needs --mask or --reference"))?;
        let plan = config.plan(grid)?;
        let opts = FemOptions { target_h: config.target_h };
        let rec = reconstruct_fem_detailed(&sf, mask, &config.constants, &plan, &opts)?;
        report.fem = compare(&rec.strain)?;
        report.helmholtz = Some(helmholtz_check(&sf, &rec.potential, mask)?);
        report.fem_residual = Some(rec.solution.residual);
        out.metric("mesh_vertices", rec.solution.mesh.vertices.len());
        out.metric("mesh_triangles", rec.solution.mesh.triangles.len());
        if let Some(h) = &hooke {
            report.route_difference = Some(rel_rms_error(&rec.strain, h, mask)?);
        }
        out.field("potential_fem", rec.potential)?;
        out.field("strain_fem", rec.strain)?;
    }
    out.json("report.json", &report)?;
    out.metric("report", &report);
    out.finish()
}

/// Saint-Venant incompatibility of a strain field.
pub fn cmd_incompat(config: &RunConfig) -> Result<Manifest> {
    let eps = read_tensor(require_input(config)?)?;
    let grid = *eps.grid();
    let plan = config.plan(grid)?;
    let w = saint_venant(&eps, &plan)?;
    let mut out = Outputs::new(config)?;
    out.metric("max_abs", w.max_abs());
    if let Some(reference) = load_reference(config)? {
        let w_ref = saint_venant(&reference, &plan)?;
        let mask = load_mask(config, grid)?;
        out.metric("rel_rms_vs_reference", rel_rms_error_scalar(&w, &w_ref, mask.as_ref())?);
    }
    out.field("incompat", w)?;
    out.finish()
}

/// Trace of the solenoidal part straight from the sinogram.
pub fn cmd_trace(config: &RunConfig) -> Result<Manifest> {
    let reference = load_reference(config)?;
    let grid = recon_grid(config, reference.as_ref())?;
    let sg = load_lrt(config, grid)?;
    let tr = trace_fbp(&sg, &grid, &FbpOptions { filter: config.filter })?;
    let mut out = Outputs::new(config)?;
    if let Some(r) = &reference {
        let target = stress_trace_target(r, config);
        let mask = load_mask(config, grid)?;
        out.metric("rel_rms_vs_stress_trace", rel_rms_error_scalar(&tr, &target, mask.as_ref())?);
        out.field("trace_target", target)?;
    }
    out.field("trace", tr)?;
    out.finish()
}

/// `sigma_kk / E` in plane stress, `(1 - nu^2) sigma_kk / E` in plane strain.
pub fn stress_trace_target(strain: &TensorField2, config: &RunConfig) -> ScalarField2 {
    let c = config.constants;
    let scale = match c.mode {
        PlaneMode::PlaneStress => 1.0 / c.e,
        PlaneMode::PlaneStrain => (1.0 - c.nu * c.nu) / c.e,
    };
    strain.map(|e| c.stress(e)).trace().scale(scale)
}

/// Error against projection count with and without noise.
pub fn cmd_noise_sweep(config: &RunConfig) -> Result<Manifest> {
    let result = noise_sweep(config)?;
    let mut out = Outputs::new(config)?;
    let path = out.path("sweep.csv".into());
    let wrap = |e: csv::Error| Error::io(&path, e.into());
    let mut w = csv::Writer::from_path(&path).map_err(wrap)?;
    w.write_record(["n", "noisy_error", "noiseless_error"]).map_err(wrap)?;
    for r in &result.rows {
        w.write_record([r.n.to_string(), r.noisy_error.to_string(), r.noiseless_error.to_string()])
            .map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    if config.plots {
        let noisy = result.rows.iter().map(|r| (r.n as f64, r.noisy_error)).collect();
        let clean = result.rows.iter().map(|r| (r.n as f64, r.noiseless_error)).collect();
        let (lo, hi) = (result.rows[0].n as f64, result.rows[result.rows.len() - 1].n as f64);
        let floor = vec![(lo, result.floor), (hi, result.floor)];
        write_loglog_png(&[noisy, clean, floor], out.path("sweep.png".into()))?;
    }
    out.metric("floor", result.floor);
    out.metric("floor_projections", result.floor_projections);
    out.metric("noiseless_variation", result.noiseless_variation);
    out.metric("fit", &result.fit);
    out.metric("rows", &result.rows);
    out.finish()
}
