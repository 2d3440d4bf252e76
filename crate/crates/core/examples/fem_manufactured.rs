//! FEM solve on the unit square against a known displacement.

use strain_tomo::elasticity::{build_mesh, fem_solve_with};
use strain_tomo::fields::{Grid2, Mask2};
use strain_tomo::phantoms::ElasticConstants;

fn main() -> strain_tomo::Result<()> {
    let c = ElasticConstants::plane_stress(1.0, 0.3)?;
    let k = c.e / (1.0 - c.nu * c.nu);
    let g = c.e / (2.0 * (1.0 + c.nu));
    let grid = Grid2::new(61, 61, 0.02, 0.02, -0.1, -0.1)?;
    let square = Mask2::from_loops(grid, vec![vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]])?;

    for h in [0.1, 0.05, 0.025] {
        let mesh = build_mesh(&square, h)?;
        let loads: Vec<[f64; 2]> = (0..mesh.triangles.len())
            .map(|t| {
                let [x, y] = mesh.centroid(t);
                let uxx = -2.0 * y * (1.0 - y);
                let uyy = -2.0 * x * (1.0 - x);
                let uxy = (1.0 - 2.0 * x) * (1.0 - 2.0 * y);
                [k * uxx + g * uyy, (g + k * c.nu) * uxy]
            })
            .collect();
        let sol = fem_solve_with(&mesh, &loads, &c, |_| [0.0, 0.0])?;
        let err = sol
            .omega
            .iter()
            .zip(&mesh.vertices)
            .map(|(w, &[x, y])| (w[0] - x * (1.0 - x) * y * (1.0 - y)).abs() + w[1].abs())
            .fold(0.0, f64::max);
        println!("h = {h:<6} vertices {:>5}  max error {err:.2e}", mesh.vertices.len());
    }
    Ok(())
}
