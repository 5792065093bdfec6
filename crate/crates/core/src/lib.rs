//! Statics of inhomogeneous convex polyhedra: which faces a body can rest
//! on, how it tips from face to face, the loading zones of centre-of-mass
//! positions realizing each falling pattern, and the two-material
//! (light frame + dense core) design computations that place a centre of
//! mass inside a chosen zone.

pub mod cli;
pub mod design;
pub mod geometry;
pub mod pattern;
pub mod report;
pub mod scene;
pub mod shapes;
pub mod tipping;
pub mod zones;

pub use geometry::{
    convex_hull, halfspace_intersection, ConvexPolytope, Edge, GeometryError, HalfSpace,
    HalfspaceIntersection, Label, Plane, Point3, Tetrahedron, Vec3,
};
pub use pattern::{parse_pattern, FaceOutcome, FallingPattern};
pub use tipping::{falling_pattern, obtuse_paths, ObtusePath, Stability, TipOutcome};
pub use zones::{enumerate_zones, loading_zone, LoadingZone, ZoneReport, ZoneType};
