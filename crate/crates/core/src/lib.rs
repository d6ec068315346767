pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod json;
pub mod modes;
pub mod newton_wigner;
pub mod specfun;
pub mod symmetry;

pub use error::{Error, Result};
pub use geometry::{DeSitterParams, NuBranch, Series, SpacetimePoint};
pub use modes::{ModeBasis, Sector, SphereGrid, StateCoefficients};
