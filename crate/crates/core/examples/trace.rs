//! Trace of the solenoidal part straight from the sinogram.

use strain_tomo::fields::{rel_rms_error_scalar, Grid2, Mask2};
use strain_tomo::lrt::{lrt_forward, trace_fbp, uniform_angles, DetectorSpec, FbpOptions};
use strain_tomo::phantoms::AirySpec;

fn main() -> strain_tomo::Result<()> {
    let spec = AirySpec::standard().with_grid(Grid2::square(200, 1.2)?);
    let mask = Mask2::disk(spec.grid, 0.0, 0.0, 1.0)?;
    let sino = lrt_forward(&spec.strain(), &uniform_angles(200)?, &DetectorSpec::for_grid(&spec.grid))?;
    let tr = trace_fbp(&sino, &spec.grid, &FbpOptions::default())?;

    let c = spec.constants;
    let target = spec.stress().trace().scale(1.0 / c.e);
    println!("trace vs sigma_kk / E: {:.4}", rel_rms_error_scalar(&tr, &target, Some(&mask))?);
    Ok(())
}
