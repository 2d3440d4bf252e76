//! Closed-form test strain fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Grid2, Mask2, ScalarField2, TensorField2};
use crate::spectral::{hessian, SpectralPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PlaneMode {
    #[default]
    PlaneStress,
    PlaneStrain,
}

/// Isotropic linear-elastic constants for a 2D body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticConstants {
    pub e: f64,
    pub nu: f64,
    pub mode: PlaneMode,
}

impl ElasticConstants {
    pub fn new(e: f64, nu: f64, mode: PlaneMode) -> Result<Self> {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::param(format!("Young's modulus must be positive, got {e}")));
        }
        if !(nu > -1.0 && nu < 0.5) {
            return Err(Error::param(format!("Poisson ratio must lie in (-1, 0.5), got {nu}")));
        }
        Ok(Self { e, nu, mode })
    }

    pub fn plane_stress(e: f64, nu: f64) -> Result<Self> {
        Self::new(e, nu, PlaneMode::PlaneStress)
    }

    pub fn plane_strain(e: f64, nu: f64) -> Result<Self> {
        Self::new(e, nu, PlaneMode::PlaneStrain)
    }

    /// Stress from strain, `sigma = C : eps`, components `[11, 22, 12]`.
    pub fn stress(&self, [e11, e22, e12]: [f64; 3]) -> [f64; 3] {
        let (e, nu) = (self.e, self.nu);
        match self.mode {
            PlaneMode::PlaneStress => {
                let c = e / (1.0 - nu * nu);
                [c * (e11 + nu * e22), c * (e22 + nu * e11), e / (1.0 + nu) * e12]
            }
            PlaneMode::PlaneStrain => {
                let lam = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
                let mu2 = e / (1.0 + nu);
                let tr = e11 + e22;
                [lam * tr + mu2 * e11, lam * tr + mu2 * e22, mu2 * e12]
            }
        }
    }

    /// Factor `k` with `solenoidal part = k * stress`: `1/E` or `(1 - nu^2)/E`.
    pub fn solenoidal_scale(&self) -> f64 {
        match self.mode {
            PlaneMode::PlaneStress => 1.0 / self.e,
            PlaneMode::PlaneStrain => (1.0 - self.nu * self.nu) / self.e,
        }
    }

    /// Factor `k` with `omega = k * grad psi`: `-nu/E` or `-nu(1 + nu)/E`.
    pub fn potential_scale(&self) -> f64 {
        match self.mode {
            PlaneMode::PlaneStress => -self.nu / self.e,
            PlaneMode::PlaneStrain => -self.nu * (1.0 + self.nu) / self.e,
        }
    }

    /// Strain from the Hessian `[psi_xx, psi_yy, psi_xy]` of an Airy potential.
    pub fn strain_from_hessian(&self, h: [f64; 3]) -> [f64; 3] {
        let s = self.solenoidal_from_hessian(h);
        let p = self.potential_from_hessian(h);
        [s[0] + p[0], s[1] + p[1], s[2] + p[2]]
    }

    /// Solenoidal part `k (d_perp)^2 psi`.
    pub fn solenoidal_from_hessian(&self, [xx, yy, xy]: [f64; 3]) -> [f64; 3] {
        let k = self.solenoidal_scale();
        [k * yy, k * xx, -k * xy]
    }

    /// Potential part `d omega = k d^2 psi`.
    pub fn potential_from_hessian(&self, [xx, yy, xy]: [f64; 3]) -> [f64; 3] {
        let k = self.potential_scale();
        [k * xx, k * yy, k * xy]
    }
}

/// Two-Gaussian Airy phantom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AirySpec {
    pub alpha: f64,
    pub constants: ElasticConstants,
    pub grid: Grid2,
}

/// Value and derivatives of the Airy potential at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryDerivs {
    pub psi: f64,
    pub x: f64,
    pub y: f64,
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
    pub laplacian: f64,
    pub bilaplacian: f64,
}

impl AirySpec {
    pub fn new(alpha: f64, constants: ElasticConstants, grid: Grid2) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self {
            alpha,
            constants,
            grid,
        })
    }

    /// `alpha = 15`, `E = 1`, `nu = 0.34`, plane stress, on a 400x400 grid of
    /// spacing 0.006 centred at the origin.
    pub fn standard() -> Self {
        Self {
            alpha: 15.0,
            constants: ElasticConstants {
                e: 1.0,
                nu: 0.34,
                mode: PlaneMode::PlaneStress,
            },
            grid: standard_grid(),
        }
    }

    pub fn with_grid(mut self, grid: Grid2) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_constants(mut self, constants: ElasticConstants) -> Self {
        self.constants = constants;
        self
    }

    /// Analytic derivatives of
    /// `psi = exp(-a((x + 1/4)^2 + y^2)) - exp(-a((x - 1/4)^2 + y^2))`.
    pub fn derivs(&self, x: f64, y: f64) -> AiryDerivs {
        let a = self.alpha;
        let gauss = |c: f64| {
            let u = x - c;
            let r2 = u * u + y * y;
            let g = (-a * r2).exp();
            AiryDerivs {
                psi: g,
                x: -2.0 * a * u * g,
                y: -2.0 * a * y * g,
                xx: (4.0 * a * a * u * u - 2.0 * a) * g,
                yy: (4.0 * a * a * y * y - 2.0 * a) * g,
                xy: 4.0 * a * a * u * y * g,
                laplacian: (4.0 * a * a * r2 - 4.0 * a) * g,
                bilaplacian: (16.0 * a.powi(4) * r2 * r2 - 64.0 * a.powi(3) * r2
                    + 32.0 * a * a)
                    * g,
            }
        };
        let p = gauss(-0.25);
        let m = gauss(0.25);
        AiryDerivs {
            psi: p.psi - m.psi,
            x: p.x - m.x,
            y: p.y - m.y,
            xx: p.xx - m.xx,
            yy: p.yy - m.yy,
            xy: p.xy - m.xy,
            laplacian: p.laplacian - m.laplacian,
            bilaplacian: p.bilaplacian - m.bilaplacian,
        }
    }

    fn hessian_at(&self, x: f64, y: f64) -> [f64; 3] {
        let d = self.derivs(x, y);
        [d.xx, d.yy, d.xy]
    }

    /// Full elastic strain from closed-form derivatives.
    pub fn strain(&self) -> TensorField2 {
        let c = self.constants;
        TensorField2::from_fn(self.grid, |x, y| c.strain_from_hessian(self.hessian_at(x, y)))
    }

    /// Stress `(d_perp)^2 psi`.
    pub fn stress(&self) -> TensorField2 {
        TensorField2::from_fn(self.grid, |x, y| {
            let [xx, yy, xy] = self.hessian_at(x, y);
            [yy, xx, -xy]
        })
    }

    /// Solenoidal part of the strain.
    pub fn solenoidal(&self) -> TensorField2 {
        let c = self.constants;
        TensorField2::from_fn(self.grid, |x, y| c.solenoidal_from_hessian(self.hessian_at(x, y)))
    }

    /// Potential part `d omega` of the strain.
    pub fn potential_part(&self) -> TensorField2 {
        let c = self.constants;
        TensorField2::from_fn(self.grid, |x, y| c.potential_from_hessian(self.hessian_at(x, y)))
    }

    /// `sigma_kk` scaled to the solenoidal trace: `k * Laplacian psi`.
    pub fn solenoidal_trace(&self) -> ScalarField2 {
        let k = self.constants.solenoidal_scale();
        ScalarField2::from_fn(self.grid, |x, y| k * self.derivs(x, y).laplacian)
    }

    pub fn bilaplacian(&self) -> ScalarField2 {
        ScalarField2::from_fn(self.grid, |x, y| self.derivs(x, y).bilaplacian)
    }
}

/// 400x400 samples of spacing 0.006 centred on the origin.
pub fn standard_grid() -> Grid2 {
    Grid2::centered(400, 400, 0.006, 0.006).expect("valid standard grid")
}

pub fn airy_potential(spec: &AirySpec) -> ScalarField2 {
    ScalarField2::from_fn(spec.grid, |x, y| spec.derivs(x, y).psi)
}

/// Strain of an arbitrary sampled Airy potential using spectral second
/// derivatives (no cutoff, padding 2).
pub fn strain_from_airy(psi: &ScalarField2, constants: &ElasticConstants) -> Result<TensorField2> {
    let h = hessian(psi, &SpectralPlan::noiseless(*psi.grid()))?;
    Ok(h.map(|v| constants.strain_from_hessian(v)))
}

/// Polar strain components `(eps_rr, eps_tt)` of the traction-free
/// axisymmetric field at radius `r <= 1`.
pub fn axisym_polar(nu: f64, r: f64) -> (f64, f64) {
    let q = (1.0 - r) * (1.0 - r);
    let err = (7.0 + 5.0 * nu + (1.0 + nu) * (9.0 * r - 16.0) * r) / 12.0 - q;
    let ett = (7.0 + 5.0 * nu + (1.0 + nu) * (3.0 * r - 8.0) * r) / 12.0 - q;
    (err, ett)
}

/// Traction-free axisymmetric plane-stress strain on the unit disk, zero outside.
pub fn axisym_phantom(nu: f64, grid: Grid2) -> Result<TensorField2> {
    if !(nu > -1.0 && nu < 0.5) {
        return Err(Error::param(format!("Poisson ratio must lie in (-1, 0.5), got {nu}")));
    }
    Ok(TensorField2::from_fn(grid, |x, y| {
        let r = x.hypot(y);
        if r > 1.0 {
            return [0.0; 3];
        }
        let (err, ett) = axisym_polar(nu, r);
        let (c, s) = if r > 0.0 { (x / r, y / r) } else { (1.0, 0.0) };
        [
            err * c * c + ett * s * s,
            err * s * s + ett * c * c,
            (err - ett) * s * c,
        ]
    }))
}

/// Adds `magnitude * I` inside the mask.
pub fn add_hydrostatic(f: &TensorField2, mask: &Mask2, magnitude: f64) -> Result<TensorField2> {
    f.grid().check_same(mask.grid())?;
    if !magnitude.is_finite() {
        return Err(Error::param("hydrostatic magnitude must be finite"));
    }
    let bump = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .enumerate()
            .map(|(k, &x)| if mask.is_inside(k) { x + magnitude } else { x })
            .collect()
    };
    TensorField2::new(*f.grid(), bump(f.c11()), bump(f.c22()), f.c12().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{divergence, perp_hessian};

    fn small_spec() -> AirySpec {
        AirySpec::standard().with_grid(Grid2::centered(160, 160, 0.015, 0.015).unwrap())
    }

    #[test]
    fn constants_validation() {
        assert!(ElasticConstants::plane_stress(0.0, 0.3).is_err());
        assert!(ElasticConstants::plane_stress(1.0, 0.5).is_err());
        assert!(ElasticConstants::plane_stress(1.0, -1.0).is_err());
        assert!(AirySpec::new(0.0, AirySpec::standard().constants, standard_grid()).is_err());
    }

    #[test]
    fn potential_symmetries() {
        let spec = small_spec();
        for &y in &[-0.7, 0.0, 0.3] {
            assert_eq!(spec.derivs(0.0, y).psi, 0.0);
            for &x in &[0.1, 0.25, 0.6] {
                assert!((spec.derivs(x, y).psi + spec.derivs(-x, y).psi).abs() < 1e-15);
            }
        }
        let expected = 1.0 - (-15.0f64 / 4.0).exp();
        assert!((spec.derivs(-0.25, 0.0).psi - expected).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let spec = small_spec();
        let h = 1e-4;
        for &(x, y) in &[(-0.25, 0.0), (0.1, 0.2), (0.4, -0.3)] {
            let d = spec.derivs(x, y);
            let p = |x: f64, y: f64| spec.derivs(x, y).psi;
            let fxx = (p(x + h, y) - 2.0 * p(x, y) + p(x - h, y)) / (h * h);
            let fyy = (p(x, y + h) - 2.0 * p(x, y) + p(x, y - h)) / (h * h);
            let fxy = (p(x + h, y + h) - p(x + h, y - h) - p(x - h, y + h) + p(x - h, y - h))
                / (4.0 * h * h);
            assert!((d.xx - fxx).abs() < 1e-3, "{} {}", d.xx, fxx);
            assert!((d.yy - fyy).abs() < 1e-3);
            assert!((d.xy - fxy).abs() < 1e-3);
            assert!((d.laplacian - d.xx - d.yy).abs() < 1e-9);
            let l = |x: f64, y: f64| spec.derivs(x, y).laplacian;
            let bi = (l(x + h, y) + l(x - h, y) + l(x, y + h) + l(x, y - h) - 4.0 * l(x, y))
                / (h * h);
            assert!((d.bilaplacian - bi).abs() < 1e-2 * d.bilaplacian.abs().max(1.0));
        }
    }

    #[test]
    fn strain_at_left_centre() {
        // At (-1/4, 0) only the first Gaussian's curvature and a tail of the
        // second contribute.
        let spec = small_spec();
        let a: f64 = 15.0;
        let nu = 0.34;
        let g2 = (-a * 0.25).exp();
        let xx = -2.0 * a - (4.0 * a * a * 0.25 - 2.0 * a) * g2;
        let yy = -2.0 * a + 2.0 * a * g2;
        let eps = spec.constants.strain_from_hessian(spec.hessian_at(-0.25, 0.0));
        assert!((eps[0] - (yy - nu * xx)).abs() < 1e-12);
        assert!((eps[1] - (xx - nu * yy)).abs() < 1e-12);
        assert!(eps[2].abs() < 1e-12);
    }

    #[test]
    fn strain_from_airy_quadratic_swaps_axes() {
        let g = Grid2::square(64, 1.0).unwrap();
        // x^2/2 is not compactly supported, so test the pointwise map instead.
        let c = ElasticConstants::plane_stress(1.0, 0.0).unwrap();
        assert_eq!(c.strain_from_hessian([1.0, 0.0, 0.0]), [0.0, 1.0, 0.0]);
        let zero = strain_from_airy(&ScalarField2::zeros(g), &c).unwrap();
        assert_eq!(zero.max_frobenius(), 0.0);
    }

    #[test]
    fn spectral_strain_matches_analytic() {
        let spec = small_spec();
        let psi = airy_potential(&spec);
        let num = strain_from_airy(&psi, &spec.constants).unwrap();
        let exact = spec.strain();
        let mask = Mask2::full(spec.grid);
        let err = crate::fields::rel_rms_error(&num, &exact, &mask).unwrap();
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn analytic_stress_is_equilibrated() {
        let spec = small_spec();
        let sigma = spec.stress();
        let plan = SpectralPlan::noiseless(spec.grid);
        let div = divergence(&sigma, &plan).unwrap();
        let scale = 2.0 * spec.alpha * sigma.max_frobenius();
        assert!(div.rms() < 1e-6 * scale, "{}", div.rms() / scale);
        let num = perp_hessian(&airy_potential(&spec), &plan).unwrap();
        let mask = Mask2::full(spec.grid);
        assert!(crate::fields::rel_rms_error(&num, &sigma, &mask).unwrap() < 1e-4);
    }

    #[test]
    fn nu_zero_strain_is_solenoidal() {
        let c = ElasticConstants::plane_stress(2.0, 0.0).unwrap();
        let spec = small_spec().with_constants(c);
        assert_eq!(spec.strain(), spec.solenoidal());
    }

    #[test]
    fn plane_strain_hooke_consistency() {
        let c = ElasticConstants::plane_strain(1.0, 0.3).unwrap();
        let h = [0.7, -0.2, 0.4];
        let eps = c.strain_from_hessian(h);
        let sigma = [h[1], h[0], -h[2]];
        let back = c.stress(eps);
        for k in 0..3 {
            assert!((back[k] - sigma[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn axisym_closed_form_values() {
        let nu = 0.34;
        let (err, ett) = axisym_polar(nu, 1.0);
        assert!((err + nu / 6.0).abs() < 1e-15);
        assert!((ett - 1.0 / 6.0).abs() < 1e-15);
        let srr = (err + nu * ett) / (1.0 - nu * nu);
        assert!(srr.abs() < 1e-15);
        let (e0r, e0t) = axisym_polar(nu, 0.0);
        assert_eq!(e0r, e0t);
        assert!((e0r - ((7.0 + 5.0 * nu) / 12.0 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn axisym_is_rotationally_symmetric() {
        let g = Grid2::centered(101, 101, 0.02, 0.02).unwrap();
        let f = axisym_phantom(0.34, g).unwrap();
        let centre = g.index(50, 50);
        assert_eq!(f.c12()[centre], 0.0);
        assert_eq!(f.c11()[centre], f.c22()[centre]);
        let r = f.rotate90().unwrap();
        for k in 0..g.len() {
            for c in 0..3 {
                assert!((r.at(k)[c] - f.at(k)[c]).abs() < 1e-12);
            }
        }
        let k = g.index(50 + 20, 50 + 20);
        let (x, y) = g.point(k);
        let (err, ett) = axisym_polar(0.34, x.hypot(y));
        let [a, b, c] = f.at(k);
        // At 45 degrees: c11 = c22 = (err + ett)/2, c12 = (err - ett)/2.
        assert!((a - 0.5 * (err + ett)).abs() < 1e-12 && (b - a).abs() < 1e-12);
        assert!((c - 0.5 * (err - ett)).abs() < 1e-12);
    }

    #[test]
    fn axisym_interior_equilibrium() {
        // Radial equilibrium d(r s_rr)/dr = s_tt by finite differences.
        let nu = 0.34;
        let c = ElasticConstants::plane_stress(1.0, nu).unwrap();
        let s = |r: f64| {
            let (err, ett) = axisym_polar(nu, r);
            let st = c.stress([err, ett, 0.0]);
            (st[0], st[1])
        };
        let h = 1e-5;
        for &r in &[0.2, 0.5, 0.9] {
            let d = ((r + h) * s(r + h).0 - (r - h) * s(r - h).0) / (2.0 * h);
            assert!((d - s(r).1).abs() < 1e-8, "r={r}: {d} vs {}", s(r).1);
        }
    }

    #[test]
    fn hydrostatic_addition() {
        let g = Grid2::centered(41, 41, 0.06, 0.06).unwrap();
        let f = axisym_phantom(0.3, g).unwrap();
        let m = Mask2::disk(g, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(add_hydrostatic(&f, &m, 0.0).unwrap(), f);
        let h = add_hydrostatic(&TensorField2::zeros(g), &m, 0.2).unwrap();
        for k in 0..g.len() {
            let expect = if m.is_inside(k) { 0.2 } else { 0.0 };
            assert_eq!(h.at(k), [expect, expect, 0.0]);
        }
        let t0 = f.trace();
        let t1 = add_hydrostatic(&f, &m, 0.2).unwrap().trace();
        for k in (0..g.len()).filter(|&k| m.is_inside(k)) {
            assert!((t1.values()[k] - t0.values()[k] - 0.4).abs() < 1e-15);
        }
        let other = Grid2::centered(40, 40, 0.06, 0.06).unwrap();
        assert!(add_hydrostatic(&TensorField2::zeros(other), &m, 0.2).is_err());
    }
}
