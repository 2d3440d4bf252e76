//! Recovery of the full strain from its solenoidal part.
//!
//! The longitudinal ray transform only sees the solenoidal part `sf` of the
//! strain. For a traction-free elastic body the missing potential part
//! `d omega` follows either pointwise from Hooke's law or from the boundary
//! value problem `Div(C : d omega) = -Div(C : sf)` with `omega = 0` on the
//! boundary.

mod fem;
mod mesh;
mod skyline;

use serde::{Deserialize, Serialize};

pub use fem::{
    element_strain, fem_solve, fem_solve_with, stiffness_matrix, strain_energy, sym_gradient,
    FemSolution, RESIDUAL_TOL,
};
pub use mesh::{build_mesh, default_target_h, TriMesh};

use crate::error::Result;
use crate::fields::{Mask2, TensorField2, VectorField2};
use crate::phantoms::{ElasticConstants, PlaneMode};
use crate::spectral::{divergence, gradients, SpectralPlan};

/// Full strain from the solenoidal part by Hooke's law.
///
/// Plane stress: `e11 = s11 - nu s22`, `e22 = s22 - nu s11`,
/// `e12 = (1 + nu) s12`. Plane strain: `e11 = s11 - nu/(1-nu) s22`,
/// `e22 = s22 - nu/(1-nu) s11`, `e12 = s12 / (1 - nu)`.
pub fn hooke_recover(sf: &TensorField2, constants: &ElasticConstants) -> TensorField2 {
    let [a, b] = hooke_coefficients(constants);
    sf.map(|[s11, s22, s12]| [s11 + a * s22, s22 + a * s11, b * s12])
}

/// Inverse of [`hooke_recover`]: the solenoidal part of a strain field.
pub fn hooke_inverse(eps: &TensorField2, constants: &ElasticConstants) -> TensorField2 {
    let [a, b] = hooke_coefficients(constants);
    let det = 1.0 - a * a;
    eps.map(|[e11, e22, e12]| [(e11 - a * e22) / det, (e22 - a * e11) / det, e12 / b])
}

fn hooke_coefficients(c: &ElasticConstants) -> [f64; 2] {
    let nu = c.nu;
    match c.mode {
        PlaneMode::PlaneStress => [-nu, 1.0 + nu],
        PlaneMode::PlaneStrain => [-nu / (1.0 - nu), 1.0 / (1.0 - nu)],
    }
}

/// `b = -Div(C : sf)` by spectral differentiation with the plan's cutoff.
pub fn body_force(
    sf: &TensorField2,
    constants: &ElasticConstants,
    plan: &SpectralPlan,
) -> Result<VectorField2> {
    let stress = sf.map(|e| constants.stress(e));
    let div = divergence(&stress, plan)?;
    let neg = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
    VectorField2::new(*sf.grid(), neg(div.x()), neg(div.y()))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FemOptions {
    /// Element size; defaults to 0.5% of the larger domain dimension.
    pub target_h: Option<f64>,
}

/// Output of [`reconstruct_fem_detailed`].
#[derive(Debug, Clone)]
pub struct FemReconstruction {
    pub strain: TensorField2,
    pub potential: TensorField2,
    pub solution: FemSolution,
}

/// Full strain `sf + d omega` via the finite-element potential solve.
pub fn reconstruct_fem(
    sf: &TensorField2,
    mask: &Mask2,
    constants: &ElasticConstants,
    plan: &SpectralPlan,
) -> Result<TensorField2> {
    Ok(reconstruct_fem_detailed(sf, mask, constants, plan, &FemOptions::default())?.strain)
}

pub fn reconstruct_fem_detailed(
    sf: &TensorField2,
    mask: &Mask2,
    constants: &ElasticConstants,
    plan: &SpectralPlan,
    opts: &FemOptions,
) -> Result<FemReconstruction> {
    sf.grid().check_same(mask.grid())?;
    let b = body_force(sf, constants, plan)?;
    let h = opts.target_h.unwrap_or_else(|| default_target_h(mask));
    let mesh = build_mesh(mask, h)?;
    log::info!(
        "FEM mesh: {} vertices, {} triangles, h = {h:.4}",
        mesh.vertices.len(),
        mesh.triangles.len()
    );
    let solution = fem_solve(&mesh, &b, constants)?;
    let potential = sym_gradient(&solution, sf.grid());
    let strain = sf.add(&potential)?;
    Ok(FemReconstruction {
        strain,
        potential,
        solution,
    })
}

/// Orthogonality and divergence diagnostics of a Helmholtz decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelmholtzReport {
    /// `<sf, d omega> / (|sf| |d omega|)` over the mask (Frobenius).
    pub normalized_inner_product: f64,
    /// RMS of the spectral divergence of `sf`.
    pub divergence_rms: f64,
    /// RMS of all first derivatives of `sf`.
    pub gradient_scale: f64,
}

impl HelmholtzReport {
    pub fn divergence_ratio(&self) -> f64 {
        if self.gradient_scale > 0.0 {
            self.divergence_rms / self.gradient_scale
        } else {
            0.0
        }
    }
}

pub fn helmholtz_check(
    sf: &TensorField2,
    domega: &TensorField2,
    mask: &Mask2,
) -> Result<HelmholtzReport> {
    sf.grid().check_same(domega.grid())?;
    sf.grid().check_same(mask.grid())?;
    let inside = |k: usize| mask.is_inside(k);
    let cross = sf.inner_masked(domega, inside)?;
    let ns = sf.inner_masked(sf, inside)?.sqrt();
    let nd = domega.inner_masked(domega, inside)?.sqrt();
    let normalized_inner_product = if ns > 0.0 && nd > 0.0 { cross / (ns * nd) } else { 0.0 };

    let plan = SpectralPlan::noiseless(*sf.grid());
    let divergence_rms = divergence(sf, &plan)?.rms();
    let grads = gradients(sf, &plan)?;
    let n = grads.iter().flatten().map(|v| v.len()).sum::<usize>();
    let sum: f64 = grads.iter().flatten().flatten().map(|v| v * v).sum();
    Ok(HelmholtzReport {
        normalized_inner_product,
        divergence_rms,
        gradient_scale: (sum / n as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{rel_rms_error, Grid2};
    use crate::phantoms::AirySpec;
    use proptest::prelude::*;

    #[test]
    fn hooke_examples() {
        let g = Grid2::square(4, 1.0).unwrap();
        let c = ElasticConstants::plane_stress(1.0, 0.34).unwrap();
        let sf = TensorField2::from_fn(g, |_, _| [1.0, 0.0, 0.0]);
        let e = hooke_recover(&sf, &c);
        assert_eq!(e.at(0), [1.0, -0.34, 0.0]);
        let c = ElasticConstants::plane_strain(1.0, 0.34).unwrap();
        let sf = TensorField2::from_fn(g, |_, _| [0.0, 0.0, 1.0]);
        assert!((hooke_recover(&sf, &c).at(0)[2] - 1.0 / 0.66).abs() < 1e-15);
        let c0 = ElasticConstants::plane_stress(3.0, 0.0).unwrap();
        let f = TensorField2::from_fn(g, |x, y| [x, y, x * y]);
        assert_eq!(hooke_recover(&f, &c0), f);
    }

    #[test]
    fn hooke_matches_analytic_airy_strain() {
        for c in [
            ElasticConstants::plane_stress(1.0, 0.34).unwrap(),
            ElasticConstants::plane_strain(2.0, 0.3).unwrap(),
        ] {
            let spec = AirySpec::standard()
                .with_grid(Grid2::centered(50, 50, 0.05, 0.05).unwrap())
                .with_constants(c);
            let e = hooke_recover(&spec.solenoidal(), &c);
            let exact = spec.strain();
            for k in 0..e.grid().len() {
                for i in 0..3 {
                    assert!((e.at(k)[i] - exact.at(k)[i]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn body_force_examples() {
        let g = Grid2::square(128, 3.0).unwrap();
        let plan = SpectralPlan::noiseless(g);
        let c = ElasticConstants::plane_stress(1.0, 0.0).unwrap();
        let taper = |x: f64, y: f64| (-((x * x + y * y) / 2.0).powi(4)).exp();
        let sf = TensorField2::from_fn(g, |x, y| [x * taper(x, y), 0.0, 0.0]);
        let b = body_force(&sf, &c, &plan).unwrap();
        for k in 0..g.len() {
            let (x, y) = g.point(k);
            if x.hypot(y) < 0.4 {
                assert!((b.x()[k] + 1.0).abs() < 1e-3 && b.y()[k].abs() < 1e-6);
            }
        }
        let spec = AirySpec::standard()
            .with_grid(Grid2::centered(160, 160, 0.015, 0.015).unwrap())
            .with_constants(c);
        let b = body_force(&spec.solenoidal(), &c, &SpectralPlan::noiseless(spec.grid)).unwrap();
        assert!(b.rms() < 1e-6 * 2.0 * spec.alpha * spec.stress().max_frobenius());
    }

    #[test]
    fn airy_analytic_parts_are_orthogonal() {
        let spec = AirySpec::standard().with_grid(Grid2::centered(200, 200, 0.012, 0.012).unwrap());
        let mask = Mask2::disk(spec.grid, 0.0, 0.0, 1.0).unwrap();
        let r = helmholtz_check(&spec.solenoidal(), &spec.potential_part(), &mask).unwrap();
        assert!(r.normalized_inner_product.abs() <= 0.02, "{}", r.normalized_inner_product);
        assert!(r.divergence_ratio() < 1e-4, "{}", r.divergence_ratio());
        let z = TensorField2::zeros(spec.grid);
        assert_eq!(helmholtz_check(&spec.solenoidal(), &z, &mask).unwrap().normalized_inner_product, 0.0);
    }

    #[test]
    fn fem_recovers_airy_potential_part() {
        let spec = AirySpec::standard().with_grid(Grid2::centered(120, 120, 0.02, 0.02).unwrap());
        let mask = Mask2::disk(spec.grid, 0.0, 0.0, 1.0).unwrap();
        let plan = SpectralPlan::noiseless(spec.grid);
        let opts = FemOptions { target_h: Some(0.02) };
        let rec =
            reconstruct_fem_detailed(&spec.solenoidal(), &mask, &spec.constants, &plan, &opts).unwrap();
        let err = rel_rms_error(&rec.potential, &spec.potential_part(), &mask).unwrap();
        assert!(err < 0.1, "{err}");
        assert!(rec.solution.residual <= RESIDUAL_TOL);
    }

    #[test]
    fn fem_is_inert_for_nu_zero() {
        let c = ElasticConstants::plane_stress(1.0, 0.0).unwrap();
        let spec = AirySpec::standard()
            .with_grid(Grid2::centered(100, 100, 0.024, 0.024).unwrap())
            .with_constants(c);
        let mask = Mask2::disk(spec.grid, 0.0, 0.0, 1.0).unwrap();
        let sf = spec.solenoidal();
        let plan = SpectralPlan::noiseless(spec.grid);
        let opts = FemOptions { target_h: Some(0.04) };
        let rec = reconstruct_fem_detailed(&sf, &mask, &c, &plan, &opts).unwrap();
        assert!(rec.potential.max_frobenius() < 1e-4 * sf.max_frobenius());
    }

    proptest! {
        #[test]
        fn hooke_roundtrip_and_stress(
            nu in -0.9f64..0.49, e in 0.1f64..100.0, strain in any::<bool>(),
            a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0,
        ) {
            let k = if strain {
                ElasticConstants::plane_strain(e, nu).unwrap()
            } else {
                ElasticConstants::plane_stress(e, nu).unwrap()
            };
            let g = Grid2::square(2, 1.0).unwrap();
            let sf = TensorField2::from_fn(g, |_, _| [a, b, c]);
            let eps = hooke_recover(&sf, &k);
            let back = hooke_inverse(&eps, &k);
            for i in 0..3 {
                prop_assert!((back.at(0)[i] - sf.at(0)[i]).abs() < 1e-12);
            }
            // sigma = sf / solenoidal_scale, i.e. E sf in plane stress.
            let sigma = k.stress(eps.at(0));
            let s = k.solenoidal_scale();
            for i in 0..3 {
                prop_assert!((sigma[i] * s - sf.at(0)[i]).abs() < 1e-12 * (1.0 + sigma[i].abs() * s));
            }
        }
    }
}
