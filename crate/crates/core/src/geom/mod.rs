//! Hyperbolic-plane geometry in the upper half-plane model.

pub mod mobius;
pub mod pants;
pub mod spectrum;

pub use mobius::{a_of_l, centroid, geodesic_distance, l_of_a, point_distance, Geodesic, Isometry, Motion};
pub use pants::{build_pants, ideal_triangle, Hexagon, SurfaceModel, SurfaceSpec};
pub use spectrum::{
    enumerate_classes, enumerate_orthospectrum, enumerate_orthospectrum_with, EnumerationOptions, OrthoClass,
    OrthoSpectrum,
};
