//! Fourier-domain differential operators on zero-padded grids.
//!
//! Fields are compactly supported, so padding by `pad_factor` before the
//! transform suppresses periodic wrap-around. A brick-wall cutoff removes
//! every mode with `|kappa| > cutoff_fraction * kappa_max`, where
//! `kappa_max` is the largest wavenumber magnitude on the padded grid.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::fields::{Grid2, ScalarField2, TensorField2, VectorField2};

/// Relative divergence above which [`airy_from_stress`] warns that the result
/// depends on the integration path.
const AIRY_DIVERGENCE_WARN: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPlan {
    pub pad_factor: usize,
    pub cutoff_fraction: f64,
    pub grid: Grid2,
}

impl SpectralPlan {
    pub fn new(grid: Grid2, pad_factor: usize, cutoff_fraction: f64) -> Result<Self> {
        if pad_factor < 1 {
            return Err(Error::param("pad_factor must be >= 1"));
        }
        if !(cutoff_fraction > 0.0 && cutoff_fraction <= 1.0) {
            return Err(Error::param(format!(
                "cutoff_fraction must lie in (0, 1], got {cutoff_fraction}"
            )));
        }
        Ok(Self {
            pad_factor,
            cutoff_fraction,
            grid,
        })
    }

    /// Padding 2, no cutoff: the setting for noiseless data.
    pub fn noiseless(grid: Grid2) -> Self {
        Self {
            pad_factor: 2,
            cutoff_fraction: 1.0,
            grid,
        }
    }

    /// Padding 2, cutoff at 0.7 of the maximum wavenumber: for noisy data.
    pub fn noisy(grid: Grid2) -> Self {
        Self {
            pad_factor: 2,
            cutoff_fraction: 0.7,
            grid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Row-major 2D complex FFT of size `nx * ny`.
pub(crate) struct Fft2 {
    nx: usize,
    ny: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub(crate) fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            ny,
            row_fwd: planner.plan_fft_forward(nx),
            row_inv: planner.plan_fft_inverse(nx),
            col_fwd: planner.plan_fft_forward(ny),
            col_inv: planner.plan_fft_inverse(ny),
        }
    }

    fn run(&self, data: &mut [Complex64], inverse: bool) {
        let (rows, cols) = if inverse {
            (&self.row_inv, &self.col_inv)
        } else {
            (&self.row_fwd, &self.col_fwd)
        };
        rows.process(data);
        let mut t = transpose(data, self.nx, self.ny);
        cols.process(&mut t);
        let back = transpose(&t, self.ny, self.nx);
        data.copy_from_slice(&back);
        if inverse {
            let s = 1.0 / (self.nx * self.ny) as f64;
            data.iter_mut().for_each(|v| *v *= s);
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, true);
    }
}

/// Transposes a row-major `rows x cols` (`cols` contiguous) buffer.
fn transpose(src: &[Complex64], cols: usize, rows: usize) -> Vec<Complex64> {
    let mut dst = vec![Complex64::new(0.0, 0.0); src.len()];
    const B: usize = 32;
    for jb in (0..rows).step_by(B) {
        for ib in (0..cols).step_by(B) {
            for j in jb..(jb + B).min(rows) {
                for i in ib..(ib + B).min(cols) {
                    dst[i * rows + j] = src[j * cols + i];
                }
            }
        }
    }
    dst
}

/// Signed angular wavenumbers for an `n`-point periodic axis of spacing `d`.
pub(crate) fn wavenumbers(n: usize, d: f64) -> Vec<f64> {
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * d);
    (0..n)
        .map(|m| {
            let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            signed * dk
        })
        .collect()
}

/// Padded transform workspace bound to a plan.
pub(crate) struct Spectrum {
    grid: Grid2,
    px: usize,
    py: usize,
    kx: Vec<f64>,
    ky: Vec<f64>,
    /// Wavenumbers with the Nyquist mode zeroed, for odd derivative orders.
    kx_odd: Vec<f64>,
    ky_odd: Vec<f64>,
    keep: Vec<bool>,
    fft: Fft2,
}

impl Spectrum {
    pub(crate) fn new(plan: &SpectralPlan) -> Self {
        let g = plan.grid;
        let px = g.nx * plan.pad_factor;
        let py = g.ny * plan.pad_factor;
        let kx = wavenumbers(px, g.dx);
        let ky = wavenumbers(py, g.dy);
        let odd = |k: &[f64], n: usize| {
            let mut k = k.to_vec();
            if n % 2 == 0 {
                k[n / 2] = 0.0;
            }
            k
        };
        let kx_max = kx.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let ky_max = ky.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let limit = plan.cutoff_fraction * kx_max.hypot(ky_max) * (1.0 + 1e-12);
        let mut keep = vec![true; px * py];
        for (m, ky_m) in ky.iter().enumerate() {
            for (l, kx_l) in kx.iter().enumerate() {
                keep[m * px + l] = kx_l.hypot(*ky_m) <= limit;
            }
        }
        Self {
            grid: g,
            px,
            py,
            kx_odd: odd(&kx, px),
            ky_odd: odd(&ky, py),
            kx,
            ky,
            keep,
            fft: Fft2::new(px, py),
        }
    }

    pub(crate) fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let g = &self.grid;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.px * self.py];
        for j in 0..g.ny {
            for i in 0..g.nx {
                buf[j * self.px + i] = Complex64::new(values[j * g.nx + i], 0.0);
            }
        }
        self.fft.forward(&mut buf);
        buf
    }

    fn inverse_crop(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        for (v, keep) in spec.iter_mut().zip(&self.keep) {
            if !keep {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        self.fft.inverse(&mut spec);
        let g = &self.grid;
        let mut out = vec![0.0; g.len()];
        for j in 0..g.ny {
            for i in 0..g.nx {
                out[j * g.nx + i] = spec[j * self.px + i].re;
            }
        }
        out
    }

    /// Angular wavevector of mode `(l, m)`.
    #[inline]
    pub(crate) fn wavevector(&self, l: usize, m: usize) -> (f64, f64) {
        (self.kx[l], self.ky[m])
    }

    /// Symbol of `d^ox/dx^ox d^oy/dy^oy` at mode `(l, m)`.
    #[inline]
    pub(crate) fn deriv_symbol(&self, l: usize, m: usize, ox: u32, oy: u32) -> Complex64 {
        let kx = if ox % 2 == 1 { self.kx_odd[l] } else { self.kx[l] };
        let ky = if oy % 2 == 1 { self.ky_odd[m] } else { self.ky[m] };
        let i = Complex64::new(0.0, 1.0);
        (i * kx).powu(ox) * (i * ky).powu(oy)
    }

    /// Inverse transform of `sum_n symbol_n(l, m) * F[input_n]`.
    pub(crate) fn combine(
        &self,
        terms: &[(&[Complex64], &dyn Fn(usize, usize) -> Complex64)],
    ) -> Vec<f64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.px * self.py];
        for (spec, symbol) in terms {
            for m in 0..self.py {
                for l in 0..self.px {
                    let k = m * self.px + l;
                    acc[k] += spec[k] * symbol(l, m);
                }
            }
        }
        self.inverse_crop(acc)
    }

    pub(crate) fn derivative(&self, spec: &[Complex64], ox: u32, oy: u32) -> Vec<f64> {
        self.combine(&[(spec, &|l, m| self.deriv_symbol(l, m, ox, oy))])
    }
}

fn check_plan(plan: &SpectralPlan, grid: &Grid2) -> Result<()> {
    plan.grid.check_same(grid)
}

/// Spectral derivative of order 1 or 2 along one axis.
pub fn fft_derivative(
    f: &ScalarField2,
    axis: Axis,
    order: u32,
    plan: &SpectralPlan,
) -> Result<ScalarField2> {
    check_plan(plan, f.grid())?;
    if !(1..=2).contains(&order) {
        return Err(Error::param(format!("derivative order must be 1 or 2, got {order}")));
    }
    let sp = Spectrum::new(plan);
    let spec = sp.forward(f.values());
    let (ox, oy) = match axis {
        Axis::X => (order, 0),
        Axis::Y => (0, order),
    };
    Ok(ScalarField2::from_vec_unchecked(*f.grid(), sp.derivative(&spec, ox, oy)))
}

/// Mixed derivative `d^2 f / dx dy`.
pub fn fft_mixed_derivative(f: &ScalarField2, plan: &SpectralPlan) -> Result<ScalarField2> {
    check_plan(plan, f.grid())?;
    let sp = Spectrum::new(plan);
    let spec = sp.forward(f.values());
    Ok(ScalarField2::from_vec_unchecked(*f.grid(), sp.derivative(&spec, 1, 1)))
}

/// Row divergence `(Div f)_i = d f_i1 / dx + d f_i2 / dy`.
pub fn divergence(f: &TensorField2, plan: &SpectralPlan) -> Result<VectorField2> {
    check_plan(plan, f.grid())?;
    let sp = Spectrum::new(plan);
    let s11 = sp.forward(f.c11());
    let s22 = sp.forward(f.c22());
    let s12 = sp.forward(f.c12());
    let dx = |l: usize, m: usize| sp.deriv_symbol(l, m, 1, 0);
    let dy = |l: usize, m: usize| sp.deriv_symbol(l, m, 0, 1);
    let x = sp.combine(&[(&s11, &dx), (&s12, &dy)]);
    let y = sp.combine(&[(&s12, &dx), (&s22, &dy)]);
    Ok(VectorField2::from_vecs_unchecked(*f.grid(), x, y))
}

/// All first derivatives of all components: `[d/dx, d/dy]` of `c11, c22, c12`.
pub fn gradients(f: &TensorField2, plan: &SpectralPlan) -> Result<[[Vec<f64>; 2]; 3]> {
    check_plan(plan, f.grid())?;
    let sp = Spectrum::new(plan);
    let grad = |c: &[f64]| {
        let s = sp.forward(c);
        [sp.derivative(&s, 1, 0), sp.derivative(&s, 0, 1)]
    };
    Ok([grad(f.c11()), grad(f.c22()), grad(f.c12())])
}

/// The single independent 2D Saint-Venant component
/// `d2 f11/dy2 + d2 f22/dx2 - 2 d2 f12/dxdy`.
pub fn saint_venant(f: &TensorField2, plan: &SpectralPlan) -> Result<ScalarField2> {
    check_plan(plan, f.grid())?;
    let sp = Spectrum::new(plan);
    let s11 = sp.forward(f.c11());
    let s22 = sp.forward(f.c22());
    let s12 = sp.forward(f.c12());
    let d_yy = |l: usize, m: usize| sp.deriv_symbol(l, m, 0, 2);
    let d_xx = |l: usize, m: usize| sp.deriv_symbol(l, m, 2, 0);
    let d_xy2 = |l: usize, m: usize| -2.0 * sp.deriv_symbol(l, m, 1, 1);
    let w = sp.combine(&[(&s11, &d_yy), (&s22, &d_xx), (&s12, &d_xy2)]);
    Ok(ScalarField2::from_vec_unchecked(*f.grid(), w))
}

/// Spectral Laplacian.
pub fn laplacian(f: &ScalarField2, plan: &SpectralPlan) -> Result<ScalarField2> {
    check_plan(plan, f.grid())?;
    let sp = Spectrum::new(plan);
    let s = sp.forward(f.values());
    let sym = |l: usize, m: usize| sp.deriv_symbol(l, m, 2, 0) + sp.deriv_symbol(l, m, 0, 2);
    Ok(ScalarField2::from_vec_unchecked(*f.grid(), sp.combine(&[(&s, &sym)])))
}

/// Spectral biharmonic `Laplacian^2`.
pub fn bilaplacian(f: &ScalarField2, plan: &SpectralPlan) -> Result<ScalarField2> {
    check_plan(plan, f.grid())?;
    let sp = Spectrum::new(plan);
    let s = sp.forward(f.values());
    let sym = |l: usize, m: usize| {
        sp.deriv_symbol(l, m, 4, 0) + 2.0 * sp.deriv_symbol(l, m, 2, 2) + sp.deriv_symbol(l, m, 0, 4)
    };
    Ok(ScalarField2::from_vec_unchecked(*f.grid(), sp.combine(&[(&s, &sym)])))
}

/// Second symmetric gradient `d^2 psi = (psi_xx, psi_yy, psi_xy)`.
pub fn hessian(psi: &ScalarField2, plan: &SpectralPlan) -> Result<TensorField2> {
    check_plan(plan, psi.grid())?;
    let sp = Spectrum::new(plan);
    let s = sp.forward(psi.values());
    Ok(TensorField2::from_vecs_unchecked(
        *psi.grid(),
        sp.derivative(&s, 2, 0),
        sp.derivative(&s, 0, 2),
        sp.derivative(&s, 1, 1),
    ))
}

/// Perpendicular second gradient `(d_perp)^2 psi = (psi_yy, psi_xx, -psi_xy)`.
///
/// For an Airy potential this is the (automatically equilibrated) stress.
pub fn perp_hessian(psi: &ScalarField2, plan: &SpectralPlan) -> Result<TensorField2> {
    let h = hessian(psi, plan)?;
    Ok(h.map(|[xx, yy, xy]| [yy, xx, -xy]))
}

/// Airy potential of a divergence-free, compactly supported stress field:
/// `psi(x, y) = integral of sigma12 over {s < x, t > y}`.
///
/// Evaluated by trapezoidal cumulative sums starting from the left and top
/// edges of the grid, where the field vanishes. If `Div sigma` is not small
/// the result depends on the integration path and a warning is logged.
pub fn airy_from_stress(sigma: &TensorField2) -> Result<ScalarField2> {
    let g = *sigma.grid();
    let plan = SpectralPlan::noiseless(g);
    let div = divergence(sigma, &plan)?;
    let grads = gradients(sigma, &plan)?;
    let grad_scale = {
        let s: f64 = grads
            .iter()
            .flat_map(|c| c.iter())
            .flat_map(|v| v.iter())
            .map(|v| v * v)
            .sum();
        (s / g.len() as f64).sqrt()
    };
    if grad_scale > 0.0 && div.rms() > AIRY_DIVERGENCE_WARN * grad_scale {
        log::warn!(
            "stress divergence is {:.3e} of its gradient scale; Airy potential is path dependent",
            div.rms() / grad_scale
        );
    }

    let s12 = sigma.c12();
    let (nx, ny) = (g.nx, g.ny);
    // Cumulative trapezoid in y from the top edge: rows above j, half of row j.
    let mut col = vec![0.0; nx * ny];
    for i in 0..nx {
        let mut above = 0.0;
        for j in (0..ny).rev() {
            let v = s12[j * nx + i];
            col[j * nx + i] = (above + 0.5 * v) * g.dy;
            above += v;
        }
    }
    // Then in x from the left edge.
    let mut psi = vec![0.0; nx * ny];
    for j in 0..ny {
        let mut left = 0.0;
        for i in 0..nx {
            let v = col[j * nx + i];
            psi[j * nx + i] = (left + 0.5 * v) * g.dx;
            left += v;
        }
    }
    Ok(ScalarField2::from_vec_unchecked(g, psi))
}

/// Diagnostic residual of the compatibility equation for an Airy potential:
/// `Laplacian^2 psi - E * (d2 sf11/dy2 - 2 d2 sf12/dxdy + d2 sf22/dx2)`.
pub fn biharmonic_residual(
    psi: &ScalarField2,
    sf: &TensorField2,
    modulus: f64,
    plan: &SpectralPlan,
) -> Result<ScalarField2> {
    psi.grid().check_same(sf.grid())?;
    let lhs = bilaplacian(psi, plan)?;
    let w = saint_venant(sf, plan)?;
    lhs.sub(&w.scale(modulus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn gaussian(g: Grid2, a: f64, cx: f64, cy: f64) -> ScalarField2 {
        ScalarField2::from_fn(g, |x, y| (-a * ((x - cx).powi(2) + (y - cy).powi(2))).exp())
    }

    fn rms(v: &[f64]) -> f64 {
        (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
    }

    #[test]
    fn constant_has_zero_derivative() {
        let g = Grid2::square(32, 1.0).unwrap();
        let plan = SpectralPlan::new(g, 1, 1.0).unwrap();
        let f = ScalarField2::from_fn(g, |_, _| 3.5);
        let d = fft_derivative(&f, Axis::X, 1, &plan).unwrap();
        assert!(d.max_abs() < 1e-12 * 32.0);
    }

    #[test]
    fn periodic_sine_derivative() {
        // 64 samples over exactly one period (no padding) is periodic-friendly.
        let n = 64;
        let p = 2.0;
        let d = p / n as f64;
        let g = Grid2::new(n, n, d, d, 0.0, 0.0).unwrap();
        let plan = SpectralPlan::new(g, 1, 1.0).unwrap();
        let f = ScalarField2::from_fn(g, |x, _| (2.0 * PI * x / p).sin());
        let df = fft_derivative(&f, Axis::X, 1, &plan).unwrap();
        for k in 0..g.len() {
            let (x, _) = g.point(k);
            let exact = 2.0 * PI / p * (2.0 * PI * x / p).cos();
            assert!((df.values()[k] - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn gaussian_derivatives_match_analytic() {
        let g = Grid2::square(128, 1.2).unwrap();
        let plan = SpectralPlan::noiseless(g);
        let a = 15.0;
        let f = gaussian(g, a, 0.25, 0.0);
        let dx = fft_derivative(&f, Axis::X, 1, &plan).unwrap();
        let dyy = fft_derivative(&f, Axis::Y, 2, &plan).unwrap();
        let ex = ScalarField2::from_fn(g, |x, y| {
            -2.0 * a * (x - 0.25) * (-a * ((x - 0.25).powi(2) + y * y)).exp()
        });
        let eyy = ScalarField2::from_fn(g, |x, y| {
            (4.0 * a * a * y * y - 2.0 * a) * (-a * ((x - 0.25).powi(2) + y * y)).exp()
        });
        let r1 = rms(dx.sub(&ex).unwrap().values()) / rms(ex.values());
        let r2 = rms(dyy.sub(&eyy).unwrap().values()) / rms(eyy.values());
        assert!(r1 < 1e-4 && r2 < 1e-4, "{r1} {r2}");
    }

    #[test]
    fn divergence_of_polynomial_gradient() {
        // u = (x^2, 0) on a grid wide enough that the Gaussian taper is flat
        // in the interior: d(u) = diag(2x, 0), Div = (2, 0).
        let g = Grid2::square(96, 3.0).unwrap();
        let plan = SpectralPlan::noiseless(g);
        let taper = |x: f64, y: f64| (-((x * x + y * y) / 2.0).powi(4)).exp();
        let f = TensorField2::from_fn(g, |x, y| [2.0 * x * taper(x, y), 0.0, 0.0]);
        let d = divergence(&f, &plan).unwrap();
        for k in 0..g.len() {
            let (x, y) = g.point(k);
            if x.hypot(y) < 0.4 {
                assert!((d.x()[k] - 2.0).abs() < 1e-3, "{}", d.x()[k]);
                assert!(d.y()[k].abs() < 1e-6);
            }
        }
    }

    #[test]
    fn perp_hessian_is_divergence_free() {
        let g = Grid2::square(160, 2.0).unwrap();
        let plan = SpectralPlan::noiseless(g);
        let psi = gaussian(g, 15.0, 0.25, 0.0).sub(&gaussian(g, 15.0, -0.25, 0.0)).unwrap();
        let sigma = perp_hessian(&psi, &plan).unwrap();
        let div = divergence(&sigma, &plan).unwrap();
        assert!(div.rms() < 1e-6 * sigma.max_frobenius(), "{}", div.rms() / sigma.max_frobenius());
    }

    #[test]
    fn saint_venant_of_perp_hessian_is_bilaplacian() {
        let g = Grid2::square(160, 2.0).unwrap();
        let plan = SpectralPlan::noiseless(g);
        let a = 15.0;
        let psi = gaussian(g, a, 0.0, 0.1);
        let w = saint_venant(&perp_hessian(&psi, &plan).unwrap(), &plan).unwrap();
        let exact = ScalarField2::from_fn(g, |x, y| {
            let u = x * x + (y - 0.1).powi(2);
            (16.0 * a.powi(4) * u * u - 64.0 * a.powi(3) * u + 32.0 * a * a) * (-a * u).exp()
        });
        let rel = rms(w.sub(&exact).unwrap().values()) / rms(exact.values());
        assert!(rel < 1e-6, "{rel}");
    }

    #[test]
    fn airy_from_stress_recovers_potential() {
        let g = Grid2::square(200, 1.2).unwrap();
        let plan = SpectralPlan::noiseless(g);
        let psi = gaussian(g, 15.0, 0.25, 0.0).sub(&gaussian(g, 15.0, -0.25, 0.0)).unwrap();
        let sigma = perp_hessian(&psi, &plan).unwrap();
        let back = airy_from_stress(&sigma).unwrap();
        let rel = rms(back.sub(&psi).unwrap().values()) / rms(psi.values());
        assert!(rel < 1e-2, "{rel}");
        assert_eq!(airy_from_stress(&TensorField2::zeros(g)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn biharmonic_residual_of_harmonic_is_zero() {
        let g = Grid2::square(64, 1.0).unwrap();
        let plan = SpectralPlan::new(g, 1, 1.0).unwrap();
        let zero = TensorField2::zeros(g);
        let r = biharmonic_residual(&ScalarField2::zeros(g), &zero, 1.0, &plan).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn plan_validation() {
        let g = Grid2::square(8, 1.0).unwrap();
        assert!(SpectralPlan::new(g, 0, 1.0).is_err());
        assert!(SpectralPlan::new(g, 2, 0.0).is_err());
        assert!(SpectralPlan::new(g, 2, 1.5).is_err());
        let f = ScalarField2::zeros(g);
        assert!(fft_derivative(&f, Axis::X, 3, &SpectralPlan::noiseless(g)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn operators_are_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, cx in -0.3f64..0.3) {
            let g = Grid2::square(48, 1.2).unwrap();
            let plan = SpectralPlan::new(g, 2, 0.7).unwrap();
            let f = gaussian(g, 10.0, cx, 0.0);
            let h = gaussian(g, 6.0, 0.0, -cx);
            let combo = f.scale(a).add(&h.scale(b)).unwrap();
            let lhs = fft_derivative(&combo, Axis::Y, 2, &plan).unwrap();
            let rhs = fft_derivative(&f, Axis::Y, 2, &plan).unwrap().scale(a)
                .add(&fft_derivative(&h, Axis::Y, 2, &plan).unwrap().scale(b)).unwrap();
            let scale = lhs.max_abs().max(1.0);
            prop_assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12 * scale);
        }

        #[test]
        fn mixed_partials_commute(cx in -0.3f64..0.3, cy in -0.3f64..0.3) {
            let g = Grid2::square(64, 1.2).unwrap();
            let plan = SpectralPlan::noiseless(g);
            let f = gaussian(g, 12.0, cx, cy);
            let xy = fft_derivative(&fft_derivative(&f, Axis::X, 1, &plan).unwrap(), Axis::Y, 1, &plan).unwrap();
            let yx = fft_derivative(&fft_derivative(&f, Axis::Y, 1, &plan).unwrap(), Axis::X, 1, &plan).unwrap();
            prop_assert!(xy.sub(&yx).unwrap().max_abs() < 1e-10 * xy.max_abs());
        }
    }
}
