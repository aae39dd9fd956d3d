//! Lattice Liouville first passage percolation (LFPP) laboratory.
//!
//! The crate samples Gaussian free fields on a square lattice, builds the
//! random metric `exp(xi * h_eps)` on the 8-neighbor grid, and provides the
//! geometric machinery used to study geodesic roughness: annulus
//! across/around distances, balanced disk families, annulus-crossing events,
//! straight-run detection and sparsity certificates, plus seeded Monte Carlo
//! harnesses around all of it.

pub mod error;
pub mod experiments;
pub mod field;
pub mod geom;
pub mod jsonfmt;
pub mod metric;
pub mod roughness;

pub use error::Error;
