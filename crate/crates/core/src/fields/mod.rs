//! Grid data model shared by every other module: sampled scalar, vector and
//! symmetric-tensor fields, sample-domain masks, error metrics and file I/O.

mod contour;
mod grid;
pub mod io;
mod mask;
mod metrics;

pub use grid::{Grid2, ScalarField2, TensorComponent, TensorField2, VectorField2};
pub use io::{read_field, read_scalar, read_tensor, write_field, Field};
pub use mask::{mask_from_support, Mask2};
pub use metrics::{
    exterior_ratio, per_component_max_error, rel_rms_error, rel_rms_error_scalar, ReconReport,
};

/// Default relative tolerance for [`mask_from_support`].
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-9;
