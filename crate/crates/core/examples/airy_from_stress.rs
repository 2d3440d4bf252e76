//! Recovers the Airy potential from a stress field and maps it back.

use strain_tomo::fields::{rel_rms_error, rel_rms_error_scalar, Grid2, Mask2};
use strain_tomo::phantoms::{airy_potential, AirySpec};
use strain_tomo::spectral::{airy_from_stress, perp_hessian, SpectralPlan};

fn main() -> strain_tomo::Result<()> {
    let spec = AirySpec::standard().with_grid(Grid2::square(200, 1.2)?);
    let sigma = spec.stress();
    let psi = airy_from_stress(&sigma)?;
    let back = perp_hessian(&psi, &SpectralPlan::noiseless(spec.grid))?;

    println!("psi vs analytic: {:.2e}", rel_rms_error_scalar(&psi, &airy_potential(&spec), None)?);
    println!("stress roundtrip: {:.2e}", rel_rms_error(&back, &sigma, &Mask2::full(spec.grid))?);
    Ok(())
}
