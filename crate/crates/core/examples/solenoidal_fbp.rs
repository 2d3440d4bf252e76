//! Tensor filtered back projection recovers the solenoidal part only.

use strain_tomo::fields::{rel_rms_error, Grid2, Mask2};
use strain_tomo::lrt::{lrt_forward, tensor_fbp, uniform_angles, DetectorSpec, FbpOptions};
use strain_tomo::phantoms::AirySpec;

fn main() -> strain_tomo::Result<()> {
    let spec = AirySpec::standard().with_grid(Grid2::square(200, 1.2)?);
    let mask = Mask2::disk(spec.grid, 0.0, 0.0, 1.0)?;
    let sino = lrt_forward(&spec.strain(), &uniform_angles(200)?, &DetectorSpec::for_grid(&spec.grid))?;
    let sf = tensor_fbp(&sino, &spec.grid, &FbpOptions::default())?;

    println!("vs solenoidal part: {:.4}", rel_rms_error(&sf, &spec.solenoidal(), &mask)?);
    println!("vs full strain:     {:.4}", rel_rms_error(&sf, &spec.strain(), &mask)?);
    Ok(())
}
