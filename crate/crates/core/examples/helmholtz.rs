//! The two parts of an Airy strain are orthogonal, and the solenoidal one is
//! divergence free.

use strain_tomo::elasticity::helmholtz_check;
use strain_tomo::fields::{Grid2, Mask2};
use strain_tomo::phantoms::AirySpec;

fn main() -> strain_tomo::Result<()> {
    let spec = AirySpec::standard().with_grid(Grid2::square(240, 1.2)?);
    let mask = Mask2::full(spec.grid);
    let r = helmholtz_check(&spec.solenoidal(), &spec.potential_part(), &mask)?;
    println!("normalized inner product {:.2e}", r.normalized_inner_product);
    println!("divergence / gradient    {:.2e}", r.divergence_ratio());
    Ok(())
}
