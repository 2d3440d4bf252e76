//! Longitudinal ray transform of a phantom, with and without noise.

use strain_tomo::lrt::{add_noise, lrt_forward, uniform_angles, DetectorSpec};
use strain_tomo::phantoms::AirySpec;
use strain_tomo::fields::Grid2;

fn main() -> strain_tomo::Result<()> {
    let spec = AirySpec::standard().with_grid(Grid2::square(200, 1.2)?);
    let det = DetectorSpec::for_grid(&spec.grid);
    let sino = lrt_forward(&spec.strain(), &uniform_angles(90)?, &det)?;
    println!("{} angles x {} bins, ds = {}", sino.n_angles(), sino.n_s(), sino.ds());
    println!("peak |I| = {:.5}", sino.max_abs());

    let noisy = add_noise(&sino, 0.05, 1)?;
    let diff = noisy.sub(&sino)?;
    let rms = (diff.data().iter().map(|v| v * v).sum::<f64>() / diff.data().len() as f64).sqrt();
    println!("noise rms / peak = {:.4}", rms / sino.max_abs());
    Ok(())
}
