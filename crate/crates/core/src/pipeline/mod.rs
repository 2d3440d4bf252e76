//! Batch orchestration behind the `strain-tomo` command line.
//!
//! Every subcommand reads a [`RunConfig`], writes its outputs (binary field
//! or sinogram files, CSV tables, PNG renderings) into the output directory
//! and records a JSON [`Manifest`] there.

mod cli;
mod commands;
mod config;
mod plot;
mod sweep;

pub use cli::{Cli, Command, Flags};
pub use commands::{
    cmd_incompat, cmd_noise_sweep, cmd_phantom, cmd_project, cmd_reconstruct, cmd_trace, run,
    stress_trace_target, Manifest, ReconstructReport,
};
pub use config::{
    AngleScheme, PhantomKind, Route, RunConfig, Subcommand, DEFAULT_LADDER,
    DEFAULT_TRACTION_THRESHOLD,
};
pub use plot::{diverging, write_loglog_png, write_scalar_png, write_sinogram_png, write_tensor_png};
pub use sweep::{
    fit_noise_slope, loglog_fit, noise_sweep, SlopeFit, SweepResult, SweepRow,
    FULL_FLOOR_PROJECTIONS,
};

/// Applies `STRAIN_TOMO_THREADS` to the global thread pool, if set.
pub fn init_threads() -> crate::Result<Option<usize>> {
    let Ok(v) = std::env::var("STRAIN_TOMO_THREADS") else {
        return Ok(None);
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| crate::Error::param(format!("STRAIN_TOMO_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| crate::Error::param(format!("cannot configure thread pool: {e}")))?;
    Ok(Some(n))
}
