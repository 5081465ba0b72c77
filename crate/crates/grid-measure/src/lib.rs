//! Measures on periodic Euclidean grids, stored as per-cell masses.
//!
//! Densities are cell mass divided by cell volume. Vector and matrix values are
//! measured with the Euclidean and Frobenius norms respectively.

pub mod error;
pub mod grid;
pub mod io;
pub mod measure;
pub mod norms;
pub mod ops;
pub mod spectral;

pub use error::{GridError, Result};
pub use grid::Grid;
pub use measure::{GridMeasure, Kind, MatrixGridMeasure, ScalarGridMeasure, SignedGridMeasure, VectorGridMeasure};
pub use norms::{norm, NormSpec};
pub use ops::{
    ball_mask, ball_mass, boundary_mass, bump, deposit_smooth, mollify, outside_central_box, rasterize,
    rasterize_vector, restrict, Mollified, PointMass, PointMassList,
};
pub use spectral::{matrix_divergence, vector_divergence, DerivativeMode, Spectral};
