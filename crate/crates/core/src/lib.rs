//! Exact solver for the 1.5D terrain guarding problem.
//!
//! The continuous problem (guards anywhere on the terrain) is reduced to a
//! finite set cover instance: guard candidates are the vertices plus the
//! extremal points of the vertices' visibility regions, and witnesses are the
//! inclusion-minimal cells of the candidates' visibility overlay. Filters shrink
//! both sets before the set cover is solved by branch and bound.
//!
//! Everything geometric is generic over [`Scalar`]; [`Rational`] (exact, with
//! a floating-point filter) is the default and the aliases below fix it.

pub mod bench;
pub mod discretization;
pub mod error;
pub mod filters;
pub mod generators;
pub mod geometry;
pub mod oracles;
pub mod pipeline;
pub mod render;
pub mod scalar;
pub mod setcover;
pub mod terrain;
pub mod visibility;

pub use error::{DiscretizationError, GeneratorError, TerrainError};
pub use geometry::Point;
pub use scalar::{Rational, Scalar};
pub use terrain::{Location, Terrain, TerrainPoint};
pub use visibility::{visibility_region, Interval, VisibilityRegion};

/// Default exact coordinate type.
pub type Exact = Rational;
pub type ExactTerrain = Terrain<Rational>;
pub type ExactPoint = TerrainPoint<Rational>;
pub type ExactRegion = VisibilityRegion<Rational>;

/// Plain big-rational instantiation, without the floating-point filter.
pub type BigRationalTerrain = Terrain<num_rational::BigRational>;

/// Floating-point instantiations (inexact predicates).
pub type F64Terrain = Terrain<f64>;
pub type F32Terrain = Terrain<f32>;
