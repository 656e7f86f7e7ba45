//! Planar geometry: robust predicates, Delaunay triangulation and distance
//! transforms.

mod delaunay;
mod edt;
mod predicates;

pub use delaunay::{triangulate, Triangle, Triangulation};
pub use edt::{distance_transform, squared_distance_transform};
pub use predicates::{incircle, orient2d};
