//! Ray transforms and their inversion.
//!
//! Rays travel along `xi = (cos theta, sin theta)` and are indexed by their
//! offset `s` along `xi_perp = (-sin theta, cos theta)`. The longitudinal ray
//! transform integrates `xi^T eps xi` along each ray; it is blind to the
//! potential part of `eps`, so inversion yields the solenoidal part.

mod angles;
mod fbp;
mod measured;
mod project;
mod sinogram;

pub use angles::{angle_weights, golden_angle, golden_angles, uniform_angles};
pub use fbp::{
    backproject, fbp_scalar, ramp_filter, sharafutdinov_inverse, tensor_fbp, trace_fbp,
    FbpOptions, FilterKind,
};
pub use measured::{add_noise, average_to_lrt, chord_lengths, lrt_to_average};
pub use project::{lrt_forward, radon_forward, RayGeometry};
pub use sinogram::{
    decode_sinogram, encode_sinogram, read_sinogram, read_sinogram_csv, write_sinogram,
    write_sinogram_csv, DetectorSpec, Sinogram, SinogramKind,
};
