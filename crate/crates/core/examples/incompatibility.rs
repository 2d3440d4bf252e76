//! Saint-Venant incompatibility of a compatible and an incompatible strain.

use strain_tomo::fields::{Grid2, TensorField2};
use strain_tomo::phantoms::AirySpec;
use strain_tomo::spectral::{saint_venant, SpectralPlan};

fn main() -> strain_tomo::Result<()> {
    let grid = Grid2::square(160, 2.0)?;
    let plan = SpectralPlan::noiseless(grid);

    // Symmetric gradient of u = (x e^{-r^2}, y^2 e^{-r^2}).
    let compatible = TensorField2::from_fn(grid, |x, y| {
        let g = (-4.0 * (x * x + y * y)).exp();
        let u1x = g * (1.0 - 8.0 * x * x);
        let u1y = -8.0 * x * y * g;
        let u2x = -8.0 * x * y * y * g;
        let u2y = g * (2.0 * y - 8.0 * y * y * y);
        [u1x, u2y, 0.5 * (u1y + u2x)]
    });
    println!("max |W| compatible:   {:.2e}", saint_venant(&compatible, &plan)?.max_abs());

    let airy = AirySpec::standard().with_grid(grid);
    println!("max |W| Airy strain: {:.2e}", saint_venant(&airy.strain(), &plan)?.max_abs());
    Ok(())
}
