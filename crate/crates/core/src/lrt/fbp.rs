use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Grid2, ScalarField2, TensorField2};
use crate::spectral::{SpectralPlan, Spectrum};

use super::angles::angle_weights;
use super::sinogram::{Sinogram, SinogramKind};

const SHAR_C0: f64 = 0.75;
const SHAR_C1: f64 = -0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    /// Band-limited ramp `|k|`.
    #[default]
    RamLak,
    /// Ramp apodized by `cos(pi k / (2 k_max))`.
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FbpOptions {
    pub filter: FilterKind,
}

/// Ramp-filters every projection along `s`.
///
/// The filter is the spatial Ram-Lak kernel `h[0] = 1/(4 ds^2)`,
/// `h[n odd] = -1/(pi n ds)^2`, applied by FFT convolution with at least
/// twofold zero padding. Building it in the spatial domain keeps the zero
/// frequency response exact, which a sampled `|k|` does not.
pub fn ramp_filter(sg: &Sinogram, filter: FilterKind) -> Sinogram {
    let n = sg.n_s();
    let ds = sg.ds();
    let len = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    let mut kernel = vec![Complex64::new(0.0, 0.0); len];
    kernel[0].re = 1.0 / (4.0 * ds * ds);
    for k in (1..n).step_by(2) {
        let v = -1.0 / (PI * k as f64 * ds).powi(2);
        kernel[k].re = v;
        kernel[len - k].re = v;
    }
    fwd.process(&mut kernel);
    if filter == FilterKind::Cosine {
        for (m, h) in kernel.iter_mut().enumerate() {
            let nu = m.min(len - m) as f64 / len as f64;
            *h *= (PI * nu).cos();
        }
    }
    // Forward and inverse transforms contribute 1/len; the convolution
    // integral contributes ds.
    let scale = ds / len as f64;

    let data: Vec<f64> = (0..sg.n_angles())
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for (b, v) in buf.iter_mut().zip(sg.row(a)) {
                b.re = *v;
            }
            fwd.process(&mut buf);
            for (b, h) in buf.iter_mut().zip(&kernel) {
                *b *= h;
            }
            inv.process(&mut buf);
            buf.into_iter().take(n).map(move |c| c.re * scale)
        })
        .collect();
    Sinogram::from_parts_unchecked(sg.kind(), sg.angles().to_vec(), *sg.detector(), data)
}

/// Weighted back projection of all rows, one output per weight column:
/// `out_c(x) = sum_a weights[a][c] * row_a(x . xi_perp(a))`.
fn backproject_weighted<const K: usize>(
    sg: &Sinogram,
    weights: &[[f64; K]],
    grid: &Grid2,
) -> [Vec<f64>; K] {
    let n_s = sg.n_s();
    let inv_ds = 1.0 / sg.ds();
    let centre = sg.detector().centre();
    let trig: Vec<(f64, f64)> = sg.angles().iter().map(|a| a.sin_cos()).collect();
    let nx = grid.nx;

    let rows: Vec<Vec<f64>> = (0..grid.ny)
        .into_par_iter()
        .map(|j| {
            let y = grid.y(j);
            let mut acc = vec![0.0; K * nx];
            for (a, &(sin, cos)) in trig.iter().enumerate() {
                let row = sg.row(a);
                let w = &weights[a];
                // u(i) = (s(x_i) / ds) + centre, linear in i.
                let u0 = (-grid.x(0) * sin + y * cos) * inv_ds + centre;
                let du = -grid.dx * sin * inv_ds;
                for i in 0..nx {
                    let u = u0 + du * i as f64;
                    if !(u >= 0.0) {
                        continue;
                    }
                    let k = u as usize;
                    if k + 1 >= n_s {
                        continue;
                    }
                    let f = u - k as f64;
                    let v = row[k] + (row[k + 1] - row[k]) * f;
                    for c in 0..K {
                        acc[c * nx + i] += w[c] * v;
                    }
                }
            }
            acc
        })
        .collect();

    std::array::from_fn(|c| {
        let mut out = vec![0.0; grid.len()];
        for (j, acc) in rows.iter().enumerate() {
            out[j * nx..(j + 1) * nx].copy_from_slice(&acc[c * nx..(c + 1) * nx]);
        }
        out
    })
}

/// Angle-weighted back projection `sum_theta w_theta g(theta, x . xi_perp)`.
///
/// With sinogram inner product `sum w_theta ds g h` and field inner product
/// `sum dx dy f g`, this is the adjoint of [`radon_forward`](super::radon_forward).
pub fn backproject(sg: &Sinogram, grid: &Grid2) -> Result<ScalarField2> {
    let w: Vec<[f64; 1]> = angle_weights(sg.angles())?.into_iter().map(|v| [v]).collect();
    let [out] = backproject_weighted(sg, &w, grid);
    Ok(ScalarField2::from_vec_unchecked(*grid, out))
}

fn require_integral(sg: &Sinogram) -> Result<()> {
    match sg.kind() {
        SinogramKind::AverageStrain => Err(Error::param(
            "average-strain sinogram must be converted to LRT form before inversion",
        )),
        _ => Ok(()),
    }
}

fn require_lrt(sg: &Sinogram) -> Result<()> {
    if sg.kind() != SinogramKind::LrtIntegral {
        return Err(Error::param(format!(
            "expected an LRT sinogram, got kind `{}`",
            sg.kind().token()
        )));
    }
    Ok(())
}

/// Rejects angle sets leaving a gap of a quarter turn or more in direction.
fn require_coverage(angles: &[f64]) -> Result<()> {
    let mut folded: Vec<f64> = angles.iter().map(|a| a.rem_euclid(PI)).collect();
    folded.sort_by(f64::total_cmp);
    let mut gap = folded[0] + PI - folded[folded.len() - 1];
    for w in folded.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    if gap >= 0.5 * PI {
        return Err(Error::param(format!(
            "angles leave a {:.1} degree gap; tensor inversion needs directions over 180 degrees",
            gap.to_degrees()
        )));
    }
    Ok(())
}

/// Scalar filtered back projection, calibrated so that
/// `fbp_scalar(radon_forward(f)) ~ f`.
pub fn fbp_scalar(sg: &Sinogram, grid: &Grid2, opts: &FbpOptions) -> Result<ScalarField2> {
    require_integral(sg)?;
    let w: Vec<[f64; 1]> = angle_weights(sg.angles())?.into_iter().map(|v| [v]).collect();
    let q = ramp_filter(sg, opts.filter);
    let [out] = backproject_weighted(&q, &w, grid);
    Ok(ScalarField2::from_vec_unchecked(*grid, out))
}

fn tensor_and_trace(
    sg: &Sinogram,
    grid: &Grid2,
    opts: &FbpOptions,
) -> Result<(TensorField2, Vec<f64>)> {
    require_lrt(sg)?;
    let w = angle_weights(sg.angles())?;
    require_coverage(sg.angles())?;
    let weights: Vec<[f64; 4]> = sg
        .angles()
        .iter()
        .zip(&w)
        .map(|(a, w)| {
            let (s, c) = a.sin_cos();
            [w * c * c, w * s * s, w * s * c, *w]
        })
        .collect();
    let q = ramp_filter(sg, opts.filter);
    let [c11, c22, c12, tr] = backproject_weighted(&q, &weights, grid);
    Ok((TensorField2::from_vecs_unchecked(*grid, c11, c22, c12), tr))
}

/// Solenoidal part of the strain by component-wise filtered back projection
/// with weights `xi (x) xi`.
pub fn tensor_fbp(sg: &Sinogram, grid: &Grid2, opts: &FbpOptions) -> Result<TensorField2> {
    Ok(tensor_and_trace(sg, grid, opts)?.0)
}

/// Scalar filtered back projection of an LRT sinogram: the trace of the
/// solenoidal part.
pub fn trace_fbp(sg: &Sinogram, grid: &Grid2, opts: &FbpOptions) -> Result<ScalarField2> {
    require_lrt(sg)?;
    fbp_scalar(sg, grid, opts)
}

/// Solenoidal part by unfiltered tensor back projection followed by
/// `(1/2pi) |kappa| [c0 + c1 (I - kappa kappa^T / |kappa|^2) tr]` in Fourier
/// space, with `c0 = 3/4`, `c1 = -1/4`.
///
/// The back projection decays only like `1/r`, so it is formed on a grid
/// twice the size of `grid` (same spacing and centre) and cropped afterwards.
pub fn sharafutdinov_inverse(sg: &Sinogram, grid: &Grid2) -> Result<TensorField2> {
    require_lrt(sg)?;
    let w = angle_weights(sg.angles())?;
    require_coverage(sg.angles())?;
    let (px, py) = (grid.nx / 2, grid.ny / 2);
    let ext = Grid2::new(
        grid.nx + 2 * px,
        grid.ny + 2 * py,
        grid.dx,
        grid.dy,
        grid.ox - px as f64 * grid.dx,
        grid.oy - py as f64 * grid.dy,
    )?;
    // Full-circle measure: the folded weights sum to pi.
    let weights: Vec<[f64; 3]> = sg
        .angles()
        .iter()
        .zip(&w)
        .map(|(a, w)| {
            let (s, c) = a.sin_cos();
            let w = 2.0 * w;
            [w * c * c, w * s * s, w * s * c]
        })
        .collect();
    let [g11, g22, g12] = backproject_weighted(sg, &weights, &ext);

    let sp = Spectrum::new(&SpectralPlan::noiseless(ext));
    let (f11, f22, f12) = (sp.forward(&g11), sp.forward(&g22), sp.forward(&g12));
    let zero = Complex64::new(0.0, 0.0);
    // Projector P = I - kappa kappa^T / |kappa|^2 as (P11, P22, P12).
    let proj = |l: usize, m: usize| -> Option<(f64, [f64; 3])> {
        let (kx, ky) = sp.wavevector(l, m);
        let k2 = kx * kx + ky * ky;
        (k2 > 0.0).then(|| {
            let k = k2.sqrt();
            (k / (2.0 * PI), [ky * ky / k2, kx * kx / k2, -kx * ky / k2])
        })
    };
    let diag = |c: usize, own: bool| {
        move |l: usize, m: usize| match proj(l, m) {
            None => zero,
            Some((s, p)) => {
                let v = SHAR_C1 * p[c] + if own { SHAR_C0 } else { 0.0 };
                Complex64::new(s * v, 0.0)
            }
        }
    };
    let off_tr = |l: usize, m: usize| match proj(l, m) {
        None => zero,
        Some((s, p)) => Complex64::new(s * SHAR_C1 * p[2], 0.0),
    };
    let off_own = |l: usize, m: usize| match proj(l, m) {
        None => zero,
        Some((s, _)) => Complex64::new(s * SHAR_C0, 0.0),
    };
    let (d11_11, d11_22) = (diag(0, true), diag(0, false));
    let (d22_11, d22_22) = (diag(1, false), diag(1, true));
    let e11 = sp.combine(&[(&f11, &d11_11), (&f22, &d11_22)]);
    let e22 = sp.combine(&[(&f11, &d22_11), (&f22, &d22_22)]);
    let e12 = sp.combine(&[(&f12, &off_own), (&f11, &off_tr), (&f22, &off_tr)]);

    let crop = |v: &[f64]| -> Vec<f64> {
        let mut out = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            let start = (j + py) * ext.nx + px;
            out.extend_from_slice(&v[start..start + grid.nx]);
        }
        out
    };
    Ok(TensorField2::from_vecs_unchecked(*grid, crop(&e11), crop(&e22), crop(&e12)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrt::{lrt_forward, radon_forward, uniform_angles, DetectorSpec};

    fn rms(v: &[f64]) -> f64 {
        (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
    }

    #[test]
    fn zero_sinogram_reconstructs_zero() {
        let g = Grid2::square(32, 1.0).unwrap();
        let d = DetectorSpec::for_grid(&g);
        let sg = Sinogram::zeros(SinogramKind::LrtIntegral, uniform_angles(8).unwrap(), d).unwrap();
        let o = FbpOptions::default();
        assert_eq!(fbp_scalar(&sg, &g, &o).unwrap().max_abs(), 0.0);
        assert_eq!(tensor_fbp(&sg, &g, &o).unwrap().max_frobenius(), 0.0);
        assert_eq!(sharafutdinov_inverse(&sg, &g).unwrap().max_frobenius(), 0.0);
    }

    #[test]
    fn ramp_kernel_has_zero_dc() {
        // A constant row (not compactly supported) filters to ~0 away from the ends.
        let d = DetectorSpec::new(201, 0.01).unwrap();
        let sg = Sinogram::new(SinogramKind::ScalarIntegral, vec![0.0], d, vec![1.0; 201]).unwrap();
        let q = ramp_filter(&sg, FilterKind::RamLak);
        // Truncating the kernel at 100 bins leaves about 0.1 of the 1/ds scale.
        assert!(q.row(0)[100].abs() < 0.2);
    }

    #[test]
    fn gaussian_fbp_roundtrip() {
        let g = Grid2::square(160, 1.2).unwrap();
        let f = ScalarField2::from_fn(g, |x, y| (-15.0 * (x * x + y * y)).exp());
        let d = DetectorSpec::for_grid(&g);
        let sg = radon_forward(&f, &uniform_angles(200).unwrap(), &d).unwrap();
        let r = fbp_scalar(&sg, &g, &FbpOptions::default()).unwrap();
        let err = rms(r.sub(&f).unwrap().values());
        assert!(err < 0.01, "{err}");
    }

    #[test]
    fn disk_indicator_interior() {
        let g = Grid2::square(200, 1.0).unwrap();
        let f = ScalarField2::from_fn(g, |x, y| if x.hypot(y) <= 0.5 { 1.0 } else { 0.0 });
        let d = DetectorSpec::for_grid(&g);
        let sg = radon_forward(&f, &uniform_angles(400).unwrap(), &d).unwrap();
        let r = fbp_scalar(&sg, &g, &FbpOptions::default()).unwrap();
        let mut worst = (0.0f64, 0.0, 0.0);
        for k in 0..g.len() {
            let (x, y) = g.point(k);
            if x.hypot(y) < 0.4 && (r.values()[k] - 1.0).abs() > worst.0.abs() {
                worst = (r.values()[k] - 1.0, x, y);
            }
        }
        assert!(worst.0.abs() < 0.02, "{worst:?}");
    }

    #[test]
    fn cosine_window_also_reconstructs() {
        let g = Grid2::square(120, 1.2).unwrap();
        let f = ScalarField2::from_fn(g, |x, y| (-15.0 * (x * x + y * y)).exp());
        let sg = radon_forward(&f, &uniform_angles(120).unwrap(), &DetectorSpec::for_grid(&g)).unwrap();
        let o = FbpOptions { filter: FilterKind::Cosine };
        let r = fbp_scalar(&sg, &g, &o).unwrap();
        assert!(rms(r.sub(&f).unwrap().values()) < 0.02);
    }

    #[test]
    fn kind_and_coverage_checks() {
        let g = Grid2::square(16, 1.0).unwrap();
        let d = DetectorSpec::for_grid(&g);
        let avg = Sinogram::zeros(SinogramKind::AverageStrain, vec![0.0, 1.0], d).unwrap();
        assert!(fbp_scalar(&avg, &g, &FbpOptions::default()).is_err());
        let scalar = Sinogram::zeros(SinogramKind::ScalarIntegral, vec![0.0, 1.0], d).unwrap();
        assert!(tensor_fbp(&scalar, &g, &FbpOptions::default()).is_err());
        let narrow = Sinogram::zeros(SinogramKind::LrtIntegral, vec![0.0, 0.1, 0.2], d).unwrap();
        assert!(tensor_fbp(&narrow, &g, &FbpOptions::default()).is_err());
        let one = Sinogram::zeros(SinogramKind::LrtIntegral, vec![0.0], d).unwrap();
        assert!(fbp_scalar(&one, &g, &FbpOptions::default()).is_err());
    }

    #[test]
    fn trace_matches_tensor_trace() {
        let g = Grid2::square(64, 1.2).unwrap();
        let eps = TensorField2::from_fn(g, |x, y| {
            let e = (-12.0 * (x * x + y * y)).exp();
            [e * (1.0 + x), e * y, 0.5 * e * x * y]
        });
        let sg = lrt_forward(&eps, &uniform_angles(60).unwrap(), &DetectorSpec::for_grid(&g)).unwrap();
        let o = FbpOptions::default();
        let (t, tr) = tensor_and_trace(&sg, &g, &o).unwrap();
        let direct = trace_fbp(&sg, &g, &o).unwrap();
        let scale = direct.max_abs();
        for k in 0..g.len() {
            assert!((t.trace().values()[k] - direct.values()[k]).abs() < 1e-12 * scale);
            assert!((tr[k] - direct.values()[k]).abs() < 1e-12 * scale);
        }
    }
}
