//! Canonical reference shapes used across tests and examples.

use crate::geometry::{Point3, Tetrahedron};

/// Regular tetrahedron with the given edge length, centered at the origin.
pub fn regular_tetrahedron(edge: f64) -> Tetrahedron {
    let s = edge / (2.0 * 2f64.sqrt());
    Tetrahedron::new([
        Point3::new(s, s, s),
        Point3::new(s, -s, -s),
        Point3::new(-s, s, -s),
        Point3::new(-s, -s, s),
    ])
    .expect("regular tetrahedron is nondegenerate")
}

/// Corner tetrahedron with vertices at the origin and on the three axes at
/// distance `leg`. Its three right dihedral angles make it a tie-handling
/// fixture: 90° edges are not obtuse.
pub fn corner_tetrahedron(leg: f64) -> Tetrahedron {
    Tetrahedron::new([
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(leg, 0.0, 0.0),
        Point3::new(0.0, leg, 0.0),
        Point3::new(0.0, 0.0, leg),
    ])
    .expect("corner tetrahedron is nondegenerate")
}
