use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::grid::{ScalarField2, TensorComponent, TensorField2};
use super::mask::Mask2;

/// Relative RMS error of `a` against the reference `b` over the mask.
///
/// Sums run over all three components with `c12` counted twice, so this is
/// the ratio of Frobenius norms of `a - b` and `b` restricted to the mask.
pub fn rel_rms_error(a: &TensorField2, b: &TensorField2, mask: &Mask2) -> Result<f64> {
    a.grid().check_same(b.grid())?;
    a.grid().check_same(mask.grid())?;
    let (mut num, mut den) = (0.0, 0.0);
    for k in (0..a.grid().len()).filter(|&k| mask.is_inside(k)) {
        let [a11, a22, a12] = a.at(k);
        let [b11, b22, b12] = b.at(k);
        let (d11, d22, d12) = (a11 - b11, a22 - b22, a12 - b12);
        num += d11 * d11 + d22 * d22 + 2.0 * d12 * d12;
        den += b11 * b11 + b22 * b22 + 2.0 * b12 * b12;
    }
    if den == 0.0 {
        return Err(Error::Degenerate(
            "reference field is identically zero inside the mask".into(),
        ));
    }
    Ok((num / den).sqrt())
}

/// Relative RMS error of scalar `a` against `b`, over the mask if given.
pub fn rel_rms_error_scalar(a: &ScalarField2, b: &ScalarField2, mask: Option<&Mask2>) -> Result<f64> {
    a.grid().check_same(b.grid())?;
    if let Some(m) = mask {
        a.grid().check_same(m.grid())?;
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (k, (x, y)) in a.values().iter().zip(b.values()).enumerate() {
        if mask.map_or(true, |m| m.is_inside(k)) {
            num += (x - y) * (x - y);
            den += y * y;
        }
    }
    if den == 0.0 {
        return Err(Error::Degenerate(
            "reference field is identically zero inside the mask".into(),
        ));
    }
    Ok((num / den).sqrt())
}

/// RMS Frobenius magnitude outside the mask over the maximum magnitude inside.
///
/// A reconstruction of a traction-free field should essentially vanish
/// outside the sample; a large value flags a harmonic component.
pub fn exterior_ratio(f: &TensorField2, mask: &Mask2) -> Result<f64> {
    f.grid().check_same(mask.grid())?;
    let mut max_in: f64 = 0.0;
    let mut sum_out = 0.0;
    let mut n_out = 0usize;
    let mut n_in = 0usize;
    for k in 0..f.grid().len() {
        let m2 = f.frobenius_sq(k);
        if mask.is_inside(k) {
            max_in = max_in.max(m2);
            n_in += 1;
        } else {
            sum_out += m2;
            n_out += 1;
        }
    }
    if n_in == 0 {
        return Err(Error::Degenerate("mask has an empty interior".into()));
    }
    if max_in == 0.0 {
        return Err(Error::Degenerate("field vanishes inside the mask".into()));
    }
    if n_out == 0 {
        return Ok(0.0);
    }
    Ok((sum_out / n_out as f64).sqrt() / max_in.sqrt())
}

/// Largest absolute per-component difference inside the mask, each divided by
/// the reference's maximum Frobenius magnitude inside the mask.
pub fn per_component_max_error(
    a: &TensorField2,
    b: &TensorField2,
    mask: &Mask2,
) -> Result<[f64; 3]> {
    a.grid().check_same(b.grid())?;
    a.grid().check_same(mask.grid())?;
    let mut scale: f64 = 0.0;
    let mut out = [0.0f64; 3];
    for k in (0..a.grid().len()).filter(|&k| mask.is_inside(k)) {
        scale = scale.max(b.frobenius_sq(k));
        for (slot, c) in out.iter_mut().zip(TensorComponent::ALL) {
            *slot = slot.max((a.component(c)[k] - b.component(c)[k]).abs());
        }
    }
    if scale == 0.0 {
        return Err(Error::Degenerate(
            "reference field is identically zero inside the mask".into(),
        ));
    }
    let scale = scale.sqrt();
    Ok(out.map(|v| v / scale))
}

/// Summary of one reconstruction run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ReconReport {
    pub rel_rms_error: f64,
    pub exterior_interior_ratio: f64,
    pub per_component_max_error: [f64; 3],
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl ReconReport {
    /// Compares a reconstruction against ground truth over `mask`.
    pub fn compare(
        reconstruction: &TensorField2,
        truth: &TensorField2,
        mask: &Mask2,
    ) -> Result<Self> {
        Ok(Self {
            rel_rms_error: rel_rms_error(reconstruction, truth, mask)?,
            exterior_interior_ratio: exterior_ratio(reconstruction, mask)?,
            per_component_max_error: per_component_max_error(reconstruction, truth, mask)?,
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_meta(mut self, key: &str, value: impl Serialize) -> Self {
        if let Ok(v) = serde_json::to_value(value) {
            self.metadata.insert(key.to_string(), v);
        }
        self
    }
}
