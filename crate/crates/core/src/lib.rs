//! Exact-rational convex geometry for coding finite metric spaces into the
//! affine structure of polytopes, and decoding them back.
//!
//! Every coordinate is a [`Rational`]; hull, face and extreme-point decisions
//! go through an exact simplex solver, so nothing here carries a tolerance.

pub mod codec;
pub mod cone;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod metric;
pub mod rational;
pub mod rng;
pub mod sext;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
