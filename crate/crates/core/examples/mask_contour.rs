//! Boundary polygon of a field's support, and chord lengths through it.

use strain_tomo::fields::{mask_from_support, Grid2};
use strain_tomo::phantoms::axisym_phantom;

fn main() -> strain_tomo::Result<()> {
    let grid = Grid2::square(120, 1.2)?;
    let mask = mask_from_support(&axisym_phantom(0.3, grid)?, 1e-9)?;
    let poly = mask.boundary_polygon();
    println!("{} loop(s), outer polygon {} vertices, area {:.4}", mask.loops().len(), poly.len(), mask.area());
    for s in [0.0, 0.5, 0.9] {
        println!("chord at s = {s}: {:.4}", mask.chord_length([1.0, 0.0], s));
    }
    Ok(())
}
