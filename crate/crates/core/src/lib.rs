//! Exact face lattices, discrete groups, moment-map retraction and
//! stratification reports for toric spaces built from convex polytopes
//! that may be nonrational and nonsimple.

pub mod error;
pub mod instances;
pub mod io;
pub mod lattice;
pub mod moment;
pub mod orbit;
pub mod polytope;
pub mod linalg;
pub mod scalars;
pub mod space;
pub mod strata;
pub mod verify;

pub use error::{Error, Result};
pub use scalars::{NumberField, Scalar, Shadow};
pub use space::ToricSpace;
