use proptest::prelude::*;

use strain_tomo::elasticity::{build_mesh, fem_solve_with, hooke_inverse, hooke_recover};
use strain_tomo::fields::{exterior_ratio, mask_from_support, rel_rms_error, Grid2, Mask2, TensorField2};
use strain_tomo::lrt::{lrt_forward, tensor_fbp, trace_fbp, uniform_angles, DetectorSpec, FbpOptions};
use strain_tomo::phantoms::ElasticConstants;
use strain_tomo::spectral::{saint_venant, SpectralPlan};

/// Gaussian bump `a exp(-b |x - c|^2)` with its first and second derivatives.
#[derive(Debug, Clone, Copy)]
struct Bump {
    a: f64,
    b: f64,
    c: [f64; 2],
}

impl Bump {
    fn eval(&self, x: f64, y: f64) -> [f64; 6] {
        let (dx, dy) = (x - self.c[0], y - self.c[1]);
        let g = self.a * (-self.b * (dx * dx + dy * dy)).exp();
        let b2 = 2.0 * self.b;
        [
            g,
            -b2 * dx * g,
            -b2 * dy * g,
            (b2 * b2 * dx * dx - b2) * g,
            (b2 * b2 * dy * dy - b2) * g,
            b2 * b2 * dx * dy * g,
        ]
    }
}

fn bump() -> impl Strategy<Value = Bump> {
    (-1.0f64..1.0, 15.0f64..40.0, -0.4f64..0.4, -0.4f64..0.4).prop_map(|(a, b, x, y)| Bump { a, b, c: [x, y] })
}

fn tensor_of(grid: Grid2, bumps: &[Bump; 3]) -> TensorField2 {
    TensorField2::from_fn(grid, |x, y| [bumps[0].eval(x, y)[0], bumps[1].eval(x, y)[0], bumps[2].eval(x, y)[0]])
}

fn symmetric_gradient(grid: Grid2, u1: Bump, u2: Bump) -> TensorField2 {
    TensorField2::from_fn(grid, |x, y| {
        let (p, q) = (u1.eval(x, y), u2.eval(x, y));
        [p[1], q[2], 0.5 * (p[2] + q[1])]
    })
}

fn norm(f: &TensorField2) -> f64 {
    f.inner_masked(f, |_| true).unwrap().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn lrt_is_linear(f in prop::array::uniform3(bump()), g in prop::array::uniform3(bump()), s in -3.0f64..3.0) {
        let grid = Grid2::square(48, 1.2).unwrap();
        let (f, g) = (tensor_of(grid, &f), tensor_of(grid, &g));
        let angles = uniform_angles(9).unwrap();
        let det = DetectorSpec::for_grid(&grid);
        let lhs = lrt_forward(&f.add(&g.scale(s)).unwrap(), &angles, &det).unwrap();
        let a = lrt_forward(&f, &angles, &det).unwrap();
        let b = lrt_forward(&g, &angles, &det).unwrap();
        let scale = a.max_abs() + s.abs() * b.max_abs() + 1e-300;
        for ((l, x), y) in lhs.data().iter().zip(a.data()).zip(b.data()) {
            prop_assert!((l - x - s * y).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn potential_fields_are_invisible(u1 in bump(), u2 in bump()) {
        let grid = Grid2::square(160, 1.2).unwrap();
        let du = symmetric_gradient(grid, u1, u2);
        let sg = lrt_forward(&du, &uniform_angles(12).unwrap(), &DetectorSpec::for_grid(&grid)).unwrap();
        // Chord integrals of a potential field telescope to zero.
        let row_scale = du.max_frobenius() * 2.0;
        prop_assert!(sg.max_abs() <= 1e-3 * row_scale, "{} vs {}", sg.max_abs(), row_scale);
    }

    #[test]
    fn saint_venant_kills_potential_fields(u1 in bump(), u2 in bump()) {
        let grid = Grid2::square(128, 2.0).unwrap();
        let w = saint_venant(&symmetric_gradient(grid, u1, u2), &SpectralPlan::noiseless(grid)).unwrap();
        let second: f64 = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.point(k);
                let (p, q) = (u1.eval(x, y), u2.eval(x, y));
                p[3].abs().max(p[4].abs()).max(q[3].abs()).max(q[4].abs())
            })
            .fold(0.0, f64::max);
        // Third derivatives of a Gaussian of width b scale like sqrt(b) times the second.
        let scale = second * u1.b.max(u2.b).sqrt();
        prop_assert!(w.max_abs() <= 1e-6 * scale, "{} vs {}", w.max_abs(), scale);
    }

    #[test]
    fn trace_identity(f in prop::array::uniform3(bump()), n in 8usize..40) {
        let grid = Grid2::square(48, 1.2).unwrap();
        let sg = lrt_forward(&tensor_of(grid, &f), &uniform_angles(n).unwrap(), &DetectorSpec::for_grid(&grid)).unwrap();
        let opts = FbpOptions::default();
        let tr = trace_fbp(&sg, &grid, &opts).unwrap();
        let full = tensor_fbp(&sg, &grid, &opts).unwrap().trace();
        let scale = tr.max_abs().max(1e-300);
        for (a, b) in tr.values().iter().zip(full.values()) {
            prop_assert!((a - b).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn hooke_inverse_roundtrip(f in prop::array::uniform3(bump()), nu in -0.9f64..0.49, strain in any::<bool>()) {
        let grid = Grid2::square(16, 1.0).unwrap();
        let c = if strain { ElasticConstants::plane_strain(2.0, nu) } else { ElasticConstants::plane_stress(2.0, nu) }.unwrap();
        let sf = tensor_of(grid, &f);
        let back = hooke_inverse(&hooke_recover(&sf, &c), &c);
        let d = back.sub(&sf).unwrap();
        prop_assert!(norm(&d) <= 1e-10 * norm(&sf).max(1e-300));
    }

    #[test]
    fn error_metric_is_scale_covariant(f in prop::array::uniform3(bump()), g in prop::array::uniform3(bump()), s in 0.01f64..100.0, neg in any::<bool>()) {
        let grid = Grid2::square(24, 1.0).unwrap();
        let (a, b) = (tensor_of(grid, &f), tensor_of(grid, &g));
        let mask = Mask2::disk(grid, 0.0, 0.0, 0.8).unwrap();
        let s = if neg { -s } else { s };
        let e1 = rel_rms_error(&a, &b, &mask).unwrap();
        let e2 = rel_rms_error(&a.scale(s), &b.scale(s), &mask).unwrap();
        prop_assert!((e1 - e2).abs() <= 1e-12 * e1.max(1.0));
    }
}

#[test]
fn fbp_commutes_with_quarter_turns() {
    let grid = Grid2::square(64, 1.2).unwrap();
    let f = tensor_of(
        grid,
        &[
            Bump { a: 1.0, b: 20.0, c: [0.2, -0.1] },
            Bump { a: -0.5, b: 30.0, c: [-0.3, 0.2] },
            Bump { a: 0.7, b: 25.0, c: [0.1, 0.3] },
        ],
    );
    let angles = uniform_angles(40).unwrap();
    let det = DetectorSpec::for_grid(&grid);
    let opts = FbpOptions::default();
    let rec = |g: &TensorField2| tensor_fbp(&lrt_forward(g, &angles, &det).unwrap(), &grid, &opts).unwrap();
    let a = rec(&f.rotate90().unwrap());
    let b = rec(&f).rotate90().unwrap();
    let d = norm(&a.sub(&b).unwrap()) / norm(&b);
    assert!(d < 1e-10, "{d}");
}

#[test]
fn support_mask_has_no_exterior() {
    let grid = Grid2::square(80, 1.2).unwrap();
    let f = TensorField2::from_fn(grid, |x, y| {
        let r2 = x * x + y * y;
        if r2 < 0.5 { [1.0 - r2, 0.5, 0.1 * x] } else { [0.0; 3] }
    });
    let mask = mask_from_support(&f, 1e-12).unwrap();
    assert_eq!(exterior_ratio(&f, &mask).unwrap(), 0.0);
    assert!(exterior_ratio(&f, &Mask2::disk(grid, 0.0, 0.0, 0.3).unwrap()).unwrap() > 0.0);
}

#[test]
fn fem_error_falls_with_refinement() {
    let c = ElasticConstants::plane_stress(1.0, 0.3).unwrap();
    let k = c.e / (1.0 - c.nu * c.nu);
    let g = c.e / (2.0 * (1.0 + c.nu));
    let grid = Grid2::new(61, 61, 0.02, 0.02, -0.1, -0.1).unwrap();
    let square = Mask2::from_loops(grid, vec![vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]]).unwrap();
    let mut errors = Vec::new();
    for h in [0.2, 0.1, 0.05, 0.025] {
        let mesh = build_mesh(&square, h).unwrap();
        let loads: Vec<[f64; 2]> = (0..mesh.triangles.len())
            .map(|t| {
                let [x, y] = mesh.centroid(t);
                let uxy = (1.0 - 2.0 * x) * (1.0 - 2.0 * y);
                [-2.0 * k * y * (1.0 - y) - 2.0 * g * x * (1.0 - x), (g + k * c.nu) * uxy]
            })
            .collect();
        let sol = fem_solve_with(&mesh, &loads, &c, |_| [0.0, 0.0]).unwrap();
        let err = sol
            .omega
            .iter()
            .zip(&mesh.vertices)
            .map(|(w, &[x, y])| (w[0] - x * (1.0 - x) * y * (1.0 - y)).powi(2) + w[1].powi(2))
            .sum::<f64>()
            / mesh.vertices.len() as f64;
        errors.push(err.sqrt());
    }
    for w in errors.windows(2) {
        assert!(w[1] < w[0], "{errors:?}");
    }
}
