use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{Grid2, Mask2, ScalarField2, TensorField2};

use super::sinogram::{DetectorSpec, Sinogram, SinogramKind};

/// Edge detector bins above this fraction of the peak mean the field extends
/// past the detector.
const COVERAGE_TOL: f64 = 1e-6;

/// Ray direction `xi = (cos theta, sin theta)` and offset axis
/// `xi_perp = (-sin theta, cos theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayGeometry {
    pub theta: f64,
    pub dir: [f64; 2],
    pub perp: [f64; 2],
}

impl RayGeometry {
    pub fn new(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            theta,
            dir: [c, s],
            perp: [-s, c],
        }
    }

    /// Point on the ray at offset `s` and arc length `t`.
    #[inline]
    pub fn point(&self, s: f64, t: f64) -> [f64; 2] {
        [
            s * self.perp[0] + t * self.dir[0],
            s * self.perp[1] + t * self.dir[1],
        ]
    }

    /// Offset of the ray through `(x, y)`.
    #[inline]
    pub fn offset_of(&self, x: f64, y: f64) -> f64 {
        x * self.perp[0] + y * self.perp[1]
    }

    /// LRT weights `(xi_1^2, xi_2^2, 2 xi_1 xi_2)` for `(c11, c22, c12)`.
    pub fn lrt_weights(&self) -> [f64; 3] {
        let [c, s] = self.dir;
        [c * c, s * s, 2.0 * s * c]
    }

    /// Chord length `L(s, theta)` of the ray through the mask's domain.
    pub fn chord_length(&self, mask: &Mask2, s: f64) -> f64 {
        mask.chord_length(self.dir, s)
    }
}

/// Parameter interval where the ray lies inside the grid's bounding box.
fn clip_to_box(grid: &Grid2, ray: &RayGeometry, s: f64) -> Option<(f64, f64)> {
    let o = ray.point(s, 0.0);
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (p, d, min, max) in [
        (o[0], ray.dir[0], grid.ox, grid.x_max()),
        (o[1], ray.dir[1], grid.oy, grid.y_max()),
    ] {
        if d.abs() < 1e-15 {
            if p < min || p > max {
                return None;
            }
        } else {
            let (a, b) = ((min - p) / d, (max - p) / d);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
    }
    (hi > lo).then_some((lo, hi))
}

fn line_integral(grid: &Grid2, values: &[f64], ray: &RayGeometry, s: f64, dt: f64) -> f64 {
    let Some((lo, hi)) = clip_to_box(grid, ray, s) else {
        return 0.0;
    };
    let m0 = (lo / dt).ceil() as i64;
    let m1 = (hi / dt).floor() as i64;
    let mut sum = 0.0;
    for m in m0..=m1 {
        let [x, y] = ray.point(s, m as f64 * dt);
        sum += grid.bilinear(values, x, y);
    }
    sum * dt
}

fn project_with(
    grid: &Grid2,
    angles: &[f64],
    detector: &DetectorSpec,
    kind: SinogramKind,
    weighted: impl Fn(&RayGeometry) -> Vec<f64> + Sync,
) -> Result<Sinogram> {
    DetectorSpec::new(detector.n_s, detector.ds)?;
    let dt = 0.5 * grid.dx.min(grid.dy);
    let rows: Vec<Vec<f64>> = angles
        .par_iter()
        .map(|&theta| {
            let ray = RayGeometry::new(theta);
            let values = weighted(&ray);
            (0..detector.n_s)
                .map(|k| line_integral(grid, &values, &ray, detector.s(k), dt))
                .collect()
        })
        .collect();
    let data: Vec<f64> = rows.into_iter().flatten().collect();
    let sg = Sinogram::new(kind, angles.to_vec(), *detector, data)?;
    check_coverage(&sg)?;
    Ok(sg)
}

fn check_coverage(sg: &Sinogram) -> Result<()> {
    let peak = sg.max_abs();
    if peak == 0.0 {
        return Ok(());
    }
    let n = sg.n_s();
    let edge = (0..sg.n_angles())
        .flat_map(|a| [sg.row(a)[0], sg.row(a)[n - 1]])
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if edge > COVERAGE_TOL * peak {
        return Err(Error::param(format!(
            "detector half-width {} does not cover the field support (edge/peak = {:.2e})",
            sg.detector().half_width(),
            edge / peak
        )));
    }
    Ok(())
}

/// Line integrals `int f(s xi_perp + t xi) dt` of a scalar field.
pub fn radon_forward(
    f: &ScalarField2,
    angles: &[f64],
    detector: &DetectorSpec,
) -> Result<Sinogram> {
    project_with(f.grid(), angles, detector, SinogramKind::ScalarIntegral, |_| {
        f.values().to_vec()
    })
}

/// Longitudinal ray transform: line integrals of `xi^T eps xi`.
pub fn lrt_forward(
    eps: &TensorField2,
    angles: &[f64],
    detector: &DetectorSpec,
) -> Result<Sinogram> {
    project_with(eps.grid(), angles, detector, SinogramKind::LrtIntegral, |ray| {
        let [w11, w22, w12] = ray.lrt_weights();
        eps.c11()
            .iter()
            .zip(eps.c22())
            .zip(eps.c12())
            .map(|((a, b), c)| w11 * a + w22 * b + w12 * c)
            .collect()
    })
}
