//! Exterior leakage flags a boundary traction the tomography cannot see.

use strain_tomo::fields::{exterior_ratio, Grid2, Mask2};
use strain_tomo::lrt::{lrt_forward, tensor_fbp, uniform_angles, DetectorSpec, FbpOptions};
use strain_tomo::phantoms::{add_hydrostatic, axisym_phantom};
use strain_tomo::pipeline::DEFAULT_TRACTION_THRESHOLD;

fn main() -> strain_tomo::Result<()> {
    let grid = Grid2::square(200, 1.2)?;
    let mask = Mask2::disk(grid, 0.0, 0.0, 1.0)?;
    let angles = uniform_angles(400)?;
    let det = DetectorSpec::for_grid(&grid);
    let free = axisym_phantom(0.34, grid)?;

    for (name, field) in [("traction-free", free.clone()), ("hydrostatic", add_hydrostatic(&free, &mask, 0.2)?)] {
        let sf = tensor_fbp(&lrt_forward(&field, &angles, &det)?, &grid, &FbpOptions::default())?;
        let r = exterior_ratio(&sf, &mask)?;
        let flag = if r > DEFAULT_TRACTION_THRESHOLD { "  <- traction suspected" } else { "" };
        println!("{name:>14}: exterior ratio {r:.2e}{flag}");
    }
    Ok(())
}
