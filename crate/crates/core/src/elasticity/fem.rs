use crate::error::{Error, Result};
use crate::fields::{Grid2, TensorField2, VectorField2};
use crate::phantoms::ElasticConstants;

use super::mesh::TriMesh;
use super::skyline::Skyline;

/// Largest acceptable `|K w - F| / |F|` after the direct solve.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Nodal displacements solving `Div(C : d omega) = b`.
#[derive(Debug, Clone)]
pub struct FemSolution {
    pub mesh: TriMesh,
    pub omega: Vec<[f64; 2]>,
    pub constants: ElasticConstants,
    /// Relative residual of the linear solve.
    pub residual: f64,
}

/// Voigt stiffness `D` with engineering shear: `[s11, s22, s12] = D [e11, e22, 2 e12]`.
pub fn stiffness_matrix(c: &ElasticConstants) -> [[f64; 3]; 3] {
    let cols = [
        c.stress([1.0, 0.0, 0.0]),
        c.stress([0.0, 1.0, 0.0]),
        c.stress([0.0, 0.0, 0.5]),
    ];
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))
}

/// Shape-function gradients of a linear triangle: `dN_i/dx = b_i / 2A`,
/// `dN_i/dy = c_i / 2A`.
fn shape_gradients(mesh: &TriMesh, t: usize) -> ([f64; 3], [f64; 3], f64) {
    let [p1, p2, p3] = mesh.triangles[t].map(|v| mesh.vertices[v]);
    let d = mesh.double_area(t);
    let b = [p2[1] - p3[1], p3[1] - p1[1], p1[1] - p2[1]].map(|v| v / d);
    let c = [p3[0] - p2[0], p1[0] - p3[0], p2[0] - p1[0]].map(|v| v / d);
    (b, c, 0.5 * d)
}

/// 6x6 element stiffness `A B^T D B`, dof order `(u1, v1, u2, v2, u3, v3)`.
fn element_stiffness(mesh: &TriMesh, t: usize, d: &[[f64; 3]; 3]) -> [[f64; 6]; 6] {
    let (b, c, area) = shape_gradients(mesh, t);
    let mut bm = [[0.0; 6]; 3];
    for i in 0..3 {
        bm[0][2 * i] = b[i];
        bm[1][2 * i + 1] = c[i];
        bm[2][2 * i] = c[i];
        bm[2][2 * i + 1] = b[i];
    }
    let mut db = [[0.0; 6]; 3];
    for r in 0..3 {
        for k in 0..6 {
            db[r][k] = (0..3).map(|s| d[r][s] * bm[s][k]).sum();
        }
    }
    std::array::from_fn(|i| std::array::from_fn(|j| area * (0..3).map(|r| bm[r][i] * db[r][j]).sum::<f64>()))
}

/// Constant strain `[e11, e22, e12]` of element `t` under nodal displacements.
pub fn element_strain(mesh: &TriMesh, t: usize, omega: &[[f64; 2]]) -> [f64; 3] {
    let (b, c, _) = shape_gradients(mesh, t);
    let u = mesh.triangles[t].map(|v| omega[v]);
    let mut e = [0.0; 3];
    for i in 0..3 {
        e[0] += b[i] * u[i][0];
        e[1] += c[i] * u[i][1];
        e[2] += 0.5 * (c[i] * u[i][0] + b[i] * u[i][1]);
    }
    e
}

/// Solves `Div(C : d omega) = b` with `omega = 0` on the boundary, for `b`
/// sampled bilinearly at element centroids.
pub fn fem_solve(mesh: &TriMesh, b: &VectorField2, constants: &ElasticConstants) -> Result<FemSolution> {
    if !b.is_finite() {
        return Err(Error::param("body force has non-finite values"));
    }
    let loads: Vec<[f64; 2]> = (0..mesh.triangles.len())
        .map(|t| {
            let [x, y] = mesh.centroid(t);
            b.sample(x, y)
        })
        .collect();
    fem_solve_with(mesh, &loads, constants, |_| [0.0, 0.0])
}

/// General form of [`fem_solve`]: per-element constant body force and
/// prescribed boundary displacements `boundary(x)`.
pub fn fem_solve_with(
    mesh: &TriMesh,
    loads: &[[f64; 2]],
    constants: &ElasticConstants,
    boundary: impl Fn([f64; 2]) -> [f64; 2],
) -> Result<FemSolution> {
    if loads.len() != mesh.triangles.len() {
        return Err(Error::param("one load per element is required"));
    }
    if loads.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::param("body force has non-finite values"));
    }
    let nv = mesh.vertices.len();
    let is_bnd = mesh.is_boundary();
    let mut free = vec![usize::MAX; nv];
    let mut n_free = 0;
    for v in 0..nv {
        if !is_bnd[v] {
            free[v] = n_free;
            n_free += 1;
        }
    }
    let mut omega: Vec<[f64; 2]> = (0..nv)
        .map(|v| if is_bnd[v] { boundary(mesh.vertices[v]) } else { [0.0, 0.0] })
        .collect();
    let ndof = 2 * n_free;
    let d = stiffness_matrix(constants);
    let dof = |v: usize, comp: usize| (free[v] != usize::MAX).then(|| 2 * free[v] + comp);

    let mut first: Vec<usize> = (0..ndof).collect();
    for tri in &mesh.triangles {
        let dofs: Vec<usize> = tri.iter().flat_map(|&v| [dof(v, 0), dof(v, 1)]).flatten().collect();
        if let Some(&m) = dofs.iter().min() {
            for &g in &dofs {
                first[g] = first[g].min(m);
            }
        }
    }

    let mut k = Skyline::new(first);
    let mut f = vec![0.0; ndof];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let ke = element_stiffness(mesh, t, &d);
        let area = mesh.area(t);
        for (a, &va) in tri.iter().enumerate() {
            for ca in 0..2 {
                let Some(r) = dof(va, ca) else { continue };
                // Weak form of Div(C : d omega) = b: K omega = -int b phi.
                f[r] -= loads[t][ca] * area / 3.0;
                for (bb, &vb) in tri.iter().enumerate() {
                    for cb in 0..2 {
                        let kv = ke[2 * a + ca][2 * bb + cb];
                        match dof(vb, cb) {
                            Some(c) if c <= r => k.add(r, c, kv),
                            Some(_) => {}
                            None => f[r] -= kv * omega[vb][cb],
                        }
                    }
                }
            }
        }
    }

    let f_norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    if ndof > 0 && f_norm > 0.0 {
        k.factor()?;
        let x = k.solve(&f);
        for v in 0..nv {
            if let Some(i) = dof(v, 0) {
                omega[v] = [x[i], x[i + 1]];
            }
        }
    }

    let mut sol = FemSolution {
        mesh: mesh.clone(),
        omega,
        constants: *constants,
        residual: 0.0,
    };
    if ndof > 0 && f_norm > 0.0 {
        let kw = apply_stiffness(&sol, &free);
        let r: f64 = kw.iter().zip(&f).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        sol.residual = r / f_norm;
        if !(sol.residual <= RESIDUAL_TOL) {
            return Err(Error::Numerical(format!(
                "FEM residual {:.3e} exceeds {RESIDUAL_TOL:.0e}",
                sol.residual
            )));
        }
    }
    Ok(sol)
}

/// `K_ff omega_f` (boundary columns dropped), element by element.
fn apply_stiffness(sol: &FemSolution, free: &[usize]) -> Vec<f64> {
    let mesh = &sol.mesh;
    let d = stiffness_matrix(&sol.constants);
    let n_free = free.iter().filter(|&&f| f != usize::MAX).count();
    let mut out = vec![0.0; 2 * n_free];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let ke = element_stiffness(mesh, t, &d);
        let u: Vec<f64> = tri
            .iter()
            .flat_map(|&v| if free[v] == usize::MAX { [0.0; 2] } else { sol.omega[v] })
            .collect();
        for (a, &va) in tri.iter().enumerate() {
            if free[va] == usize::MAX {
                continue;
            }
            for ca in 0..2 {
                let row = &ke[2 * a + ca];
                out[2 * free[va] + ca] += row.iter().zip(&u).map(|(k, u)| k * u).sum::<f64>();
            }
        }
    }
    out
}

/// Strain energy `omega^T K omega` of a nodal displacement field.
pub fn strain_energy(mesh: &TriMesh, omega: &[[f64; 2]], constants: &ElasticConstants) -> f64 {
    let d = stiffness_matrix(constants);
    (0..mesh.triangles.len())
        .map(|t| {
            let ke = element_stiffness(mesh, t, &d);
            let u: Vec<f64> = mesh.triangles[t].iter().flat_map(|&v| omega[v]).collect();
            (0..6)
                .map(|i| (0..6).map(|j| u[i] * ke[i][j] * u[j]).sum::<f64>())
                .sum::<f64>()
        })
        .sum()
}

/// Samples the per-element strain `d omega` onto grid points.
///
/// Points in no triangle but inside the domain (slivers between the mesh and
/// the boundary) take the nearest element; points outside the domain get 0.
pub fn sym_gradient(sol: &FemSolution, grid: &Grid2) -> TensorField2 {
    let mesh = &sol.mesh;
    let strains: Vec<[f64; 3]> = (0..mesh.triangles.len())
        .map(|t| element_strain(mesh, t, &sol.omega))
        .collect();
    TensorField2::from_fn(*grid, |x, y| {
        match mesh.locate([x, y]) {
            Some(t) => strains[t],
            None if mesh.domain().contains_point(x, y) => strains[mesh.nearest([x, y])],
            None => [0.0; 3],
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elasticity::build_mesh;
    use crate::fields::Mask2;

    fn square_mesh(h: f64) -> TriMesh {
        let g = Grid2::new(60, 60, 0.02, 0.02, -0.1, -0.1).unwrap();
        let sq = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        build_mesh(&Mask2::from_loops(g, vec![sq]).unwrap(), h).unwrap()
    }

    fn constants() -> ElasticConstants {
        ElasticConstants::plane_stress(2.0, 0.3).unwrap()
    }

    #[test]
    fn zero_load_gives_zero() {
        let mesh = square_mesh(0.1);
        let g = Grid2::square(8, 1.0).unwrap();
        let sol = fem_solve(&mesh, &VectorField2::zeros(g), &constants()).unwrap();
        assert!(sol.omega.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn linear_patch_is_exact() {
        let mesh = square_mesh(0.05);
        let u = |[x, y]: [f64; 2]| [0.1 + 0.3 * x - 0.2 * y, -0.05 + 0.4 * x + 0.25 * y];
        for c in [constants(), ElasticConstants::plane_strain(1.0, 0.34).unwrap()] {
            let loads = vec![[0.0, 0.0]; mesh.triangles.len()];
            let sol = fem_solve_with(&mesh, &loads, &c, u).unwrap();
            for (v, w) in sol.omega.iter().enumerate() {
                let e = u(mesh.vertices[v]);
                assert!((w[0] - e[0]).abs() < 1e-10 && (w[1] - e[1]).abs() < 1e-10);
            }
            for t in 0..mesh.triangles.len() {
                let s = element_strain(&mesh, t, &sol.omega);
                assert!((s[0] - 0.3).abs() < 1e-10);
                assert!((s[1] - 0.25).abs() < 1e-10);
                assert!((s[2] - 0.1).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rigid_rotation_has_no_strain() {
        let mesh = square_mesh(0.1);
        let omega: Vec<[f64; 2]> = mesh.vertices.iter().map(|&[x, y]| [-0.3 * y, 0.3 * x]).collect();
        for t in 0..mesh.triangles.len() {
            let s = element_strain(&mesh, t, &omega);
            assert!(s.iter().all(|v| v.abs() < 1e-14));
        }
        let omega: Vec<[f64; 2]> = mesh.vertices.iter().map(|&[x, _]| [x, 0.0]).collect();
        let s = element_strain(&mesh, 3, &omega);
        assert!((s[0] - 1.0).abs() < 1e-14 && s[1].abs() < 1e-14 && s[2].abs() < 1e-14);
    }

    #[test]
    fn energy_is_positive() {
        let mesh = square_mesh(0.1);
        let c = constants();
        let on_boundary = mesh.is_boundary();
        for seed in 0..5u64 {
            let omega: Vec<[f64; 2]> = mesh
                .vertices
                .iter()
                .enumerate()
                .map(|(v, &[x, y])| {
                    if on_boundary[v] {
                        [0.0, 0.0]
                    } else {
                        let s = seed as f64;
                        [(3.0 * x + s).sin() * y, (x * y * 7.0 - s).cos()]
                    }
                })
                .collect();
            assert!(strain_energy(&mesh, &omega, &c) > 0.0);
        }
    }

    #[test]
    fn stiffness_matches_constants() {
        let c = constants();
        let d = stiffness_matrix(&c);
        let k = c.e / (1.0 - c.nu * c.nu);
        assert!((d[0][0] - k).abs() < 1e-14 && (d[0][1] - k * c.nu).abs() < 1e-14);
        assert!((d[2][2] - k * (1.0 - c.nu) / 2.0).abs() < 1e-14);
        assert_eq!(d[0][2], 0.0);
    }

    #[test]
    fn coarse_solve_and_nonfinite_load() {
        let mesh = square_mesh(0.25);
        let loads = vec![[1.0, 0.0]; mesh.triangles.len()];
        assert!(fem_solve_with(&mesh, &loads, &constants(), |_| [0.0; 2]).is_ok());
        let bad = vec![[f64::NAN, 0.0]; mesh.triangles.len()];
        assert!(fem_solve_with(&mesh, &bad, &constants(), |_| [0.0; 2]).is_err());
    }
}
