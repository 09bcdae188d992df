//! Polygonal knots and links: the data model, relaxation dynamics, invariants,
//! crossing codes, constructors and file formats.

pub mod codes;
pub mod construct;
pub mod dynamics;
pub mod error;
pub mod geom;
pub mod io;
pub mod measures;
pub mod polylink;
pub mod spline;

pub use error::{KnotError, Result};
pub use geom::{Mat3, Vec2, Vec3};
pub use polylink::{Color, Component, PolyLink};
