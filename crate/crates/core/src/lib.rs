//! Reversible chaos game representation.
//!
//! Sequences are mapped to exact rational path traces that can be decoded
//! back to the original symbols, rendered to images, and summarized into
//! occupancy-grid features.

pub mod analysis;
pub mod cgr;
pub mod datagen;
pub mod error;
pub mod raster;
pub mod rational;

pub use cgr::{decode, encode, Alphabet, PathTrace, RationalPoint};
pub use error::{Error, Result};
pub use rational::{PrecisionBound, Rational};
