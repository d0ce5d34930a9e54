//! Exact computation with affine interval exchange transformations.

// exact scalars make error and report enums large; they are not on hot paths
#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod config;
pub mod distortion;
pub mod dynamics;
pub mod map;
pub mod normalform;
pub mod numbers;
pub mod sample;
pub mod twoslope;
pub mod walker;

pub use config::Config;
pub use map::{Aiet, MapError, Piece};
pub use numbers::Scalar;
