//! Dense and banded complex matrices with LU solvers.

mod band;
mod dense;

pub use band::{BandLu, BandMatrix};
pub use dense::{Lu, Matrix};
