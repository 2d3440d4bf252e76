//! Two-dimensional tensor strain tomography.
//!
//! Elastic strain is reconstructed from its longitudinal ray transform in two
//! parts: the solenoidal component by tensor filtered back projection, and the
//! potential component from elasticity (Hooke's law or a finite-element solve
//! for a displacement field with zero boundary values).
//!
//! ```no_run
//! use strain_tomo::prelude::*;
//!
//! let spec = AirySpec::standard();
//! let truth = spec.strain();
//! let angles = uniform_angles(200)?;
//! let sino = lrt_forward(&truth, &angles, &DetectorSpec::for_grid(&spec.grid))?;
//! let sf = tensor_fbp(&sino, &spec.grid, &FbpOptions::default())?;
//! let eps = hooke_recover(&sf, &spec.constants);
//! # Ok::<(), strain_tomo::Error>(())
//! ```

pub mod elasticity;
pub mod error;
pub mod fields;
pub mod lrt;
pub mod phantoms;
pub mod pipeline;
pub mod spectral;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::elasticity::{
        body_force, build_mesh, fem_solve, helmholtz_check, hooke_recover, reconstruct_fem,
        sym_gradient, FemOptions,
    };
    pub use crate::error::{Error, Result};
    pub use crate::fields::{
        exterior_ratio, mask_from_support, read_field, rel_rms_error, write_field, Grid2, Mask2,
        ReconReport, ScalarField2, TensorField2, VectorField2,
    };
    pub use crate::lrt::{
        golden_angles, lrt_forward, radon_forward, sharafutdinov_inverse, tensor_fbp, trace_fbp,
        uniform_angles, DetectorSpec, FbpOptions, Sinogram, SinogramKind,
    };
    pub use crate::phantoms::{
        add_hydrostatic, airy_potential, axisym_phantom, AirySpec, ElasticConstants, PlaneMode,
    };
    pub use crate::spectral::{airy_from_stress, divergence, saint_venant, SpectralPlan};
}
