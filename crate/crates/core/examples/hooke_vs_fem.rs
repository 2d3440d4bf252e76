//! Completes a reconstruction with Hooke's law and with the FEM route.

use strain_tomo::elasticity::{hooke_recover, reconstruct_fem_detailed, FemOptions};
use strain_tomo::fields::{rel_rms_error, Grid2, Mask2};
use strain_tomo::lrt::{lrt_forward, tensor_fbp, uniform_angles, DetectorSpec, FbpOptions};
use strain_tomo::phantoms::AirySpec;
use strain_tomo::spectral::SpectralPlan;

fn main() -> strain_tomo::Result<()> {
    let spec = AirySpec::standard().with_grid(Grid2::square(200, 1.2)?);
    let truth = spec.strain();
    let mask = Mask2::disk(spec.grid, 0.0, 0.0, 1.0)?;
    let sino = lrt_forward(&truth, &uniform_angles(200)?, &DetectorSpec::for_grid(&spec.grid))?;
    let sf = tensor_fbp(&sino, &spec.grid, &FbpOptions::default())?;

    let hooke = hooke_recover(&sf, &spec.constants);
    println!("hooke error {:.4}", rel_rms_error(&hooke, &truth, &mask)?);

    let plan = SpectralPlan::noiseless(spec.grid);
    let opts = FemOptions { target_h: Some(0.02) };
    let fem = reconstruct_fem_detailed(&sf, &mask, &spec.constants, &plan, &opts)?;
    println!(
        "fem error   {:.4} ({} triangles)",
        rel_rms_error(&fem.strain, &truth, &mask)?,
        fem.solution.mesh.triangles.len()
    );
    println!("potential part {:.4}", rel_rms_error(&fem.potential, &spec.potential_part(), &mask)?);
    Ok(())
}
