//! Computational origami engine.
//!
//! Two pipelines share the geometric core:
//!
//! * **fold-and-cut** — compute the straight skeleton of a planar drawing,
//!   generate a crease pattern (skeleton lines plus propagated
//!   perpendiculars), fold it flat on paper and verify that every drawing
//!   edge lands on a single line, ready for one straight cut.
//! * **wrapping** — accordion-fold a square into a strip and plan a sequence
//!   of strip folds that exactly covers a polygonal silhouette.
//!
//! All geometry is generic over the scalar type (`f32` or `f64`) through the
//! [`geom::Real`] trait; the aliases below fix `f64` for ordinary use.

pub mod drawing;
pub mod error;
pub mod fixtures;
pub mod foldcut;
pub mod foldmap;
pub mod geom;
pub mod io;
pub mod offset;
pub mod skeleton;
pub mod subdivision;
pub mod wrap;

pub use error::{Error, Result};
pub use geom::{Real, Tolerance};

/// Default-precision aliases.
pub type Point = geom::Point2<f64>;
pub type Vector = geom::Vec2<f64>;
pub type Segment = geom::Segment2<f64>;
pub type Line = geom::Line2<f64>;
pub type Paper = geom::Rect<f64>;
pub type Tol = geom::Tolerance<f64>;
