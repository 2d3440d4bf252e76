use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::fields::Mask2;

use super::project::RayGeometry;
use super::sinogram::{Sinogram, SinogramKind};

/// Chord lengths `L(s, theta)` through the mask domain, same layout as `sg`.
pub fn chord_lengths(sg: &Sinogram, mask: &Mask2) -> Result<Vec<f64>> {
    if mask.boundary_polygon().len() < 3 {
        return Err(Error::Degenerate("mask boundary polygon is degenerate".into()));
    }
    let d = sg.detector();
    let mut out = Vec::with_capacity(sg.data().len());
    for &theta in sg.angles() {
        let ray = RayGeometry::new(theta);
        out.extend((0..d.n_s).map(|k| ray.chord_length(mask, d.s(k))));
    }
    Ok(out)
}

/// Converts path-averaged strain to ray integrals by multiplying each ray by
/// its chord length through the domain. Rays missing the domain become 0.
pub fn average_to_lrt(avg: &Sinogram, mask: &Mask2) -> Result<Sinogram> {
    if avg.kind() != SinogramKind::AverageStrain {
        return Err(Error::param(format!(
            "expected an average-strain sinogram, got kind `{}`",
            avg.kind().token()
        )));
    }
    let lengths = chord_lengths(avg, mask)?;
    let data = avg.data().iter().zip(&lengths).map(|(v, l)| v * l).collect();
    Sinogram::new(SinogramKind::LrtIntegral, avg.angles().to_vec(), *avg.detector(), data)
}

/// Divides ray integrals by chord length, the inverse of [`average_to_lrt`]
/// wherever `L > 0`. Rays missing the domain become 0.
pub fn lrt_to_average(sg: &Sinogram, mask: &Mask2) -> Result<Sinogram> {
    if sg.kind() != SinogramKind::LrtIntegral {
        return Err(Error::param("expected an LRT sinogram"));
    }
    let lengths = chord_lengths(sg, mask)?;
    let data = sg
        .data()
        .iter()
        .zip(&lengths)
        .map(|(v, &l)| if l > 0.0 { v / l } else { 0.0 })
        .collect();
    Sinogram::new(SinogramKind::AverageStrain, sg.angles().to_vec(), *sg.detector(), data)
}

/// Adds i.i.d. Gaussian noise with standard deviation
/// `sigma_fraction * max|data|`, reproducible from `seed`.
pub fn add_noise(sg: &Sinogram, sigma_fraction: f64, seed: u64) -> Result<Sinogram> {
    if !(sigma_fraction >= 0.0 && sigma_fraction.is_finite()) {
        return Err(Error::param(format!(
            "noise fraction must be >= 0, got {sigma_fraction}"
        )));
    }
    let sigma = sigma_fraction * sg.max_abs();
    if sigma == 0.0 {
        return Ok(sg.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::param(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = sg.data().iter().map(|v| v + normal.sample(&mut rng)).collect();
    Sinogram::new(sg.kind(), sg.angles().to_vec(), *sg.detector(), data)
}
