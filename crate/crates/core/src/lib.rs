// Tensor assembly reads better with explicit index loops, and dimension
// parities are clearer as `% 2` than as is_multiple_of.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::manual_is_multiple_of)]

//! Numerical verification engine for the tensor identities of
//! contact-complex Riemannian submersions.
//!
//! The engine evaluates connections, curvature, the O'Neill tensors T and
//! A, the mixing tensor B, and frame-sum codifferentials on a catalog of
//! closed-form manifolds, and checks the identities relating them
//! pointwise against tight tolerances. Derivatives come from second-order
//! forward-mode automatic differentiation, so residuals are limited only
//! by rounding, not by differencing steps.

pub mod ad;
pub mod catalog;
pub mod chart;
pub mod conn;
pub mod contact;
pub mod error;
pub mod fields;
pub mod forms;
pub mod frame;
pub mod identities;
pub mod linalg;
pub mod report;
pub mod sample;
pub mod submersion;

pub use ad::{Jet1, Scalar, D2};
pub use chart::ChartPatch;
pub use contact::{ContactStructure, HermitianStructure};
pub use error::{GeomError, Result};
pub use fields::{
    EndoField, MapField, MatrixField, OneFormField, ScalarField, TwoFormField, VectorField,
};
pub use frame::OrthoFrame;
pub use identities::IdentityCheck;
pub use report::{run, Report, RunConfig};
pub use submersion::SubmersionInstance;
