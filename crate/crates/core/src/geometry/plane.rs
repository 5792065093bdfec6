use serde::{Deserialize, Serialize};

use super::vec3::{Point3, Vec3};
use super::GeometryError;

/// An oriented plane `{ p : normal · p = offset }` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    normal: Vec3,
    offset: f64,
}

impl Plane {
    /// Builds a plane from a (not necessarily unit) normal and offset,
    /// normalizing both. Fails on a near-zero normal.
    pub fn new(normal: Vec3, offset: f64) -> Result<Plane, GeometryError> {
        let n = normal.norm();
        if n < 1e-12 || !normal.is_finite() || !offset.is_finite() {
            return Err(GeometryError::DegeneratePlane);
        }
        Ok(Plane {
            normal: normal / n,
            offset: offset / n,
        })
    }

    /// Plane with the given normal passing through `point`.
    pub fn from_normal_point(normal: Vec3, point: Point3) -> Result<Plane, GeometryError> {
        let unit = normal.normalized().ok_or(GeometryError::DegeneratePlane)?;
        Ok(Plane {
            normal: unit,
            offset: unit.dot(point),
        })
    }

    /// Plane through three points, normal oriented by the right-hand rule
    /// on `(b - a) × (c - a)`. Fails when the points are near-collinear.
    pub fn through_points(a: Point3, b: Point3, c: Point3) -> Result<Plane, GeometryError> {
        let n = (b - a).cross(c - a);
        let scale = (b - a).norm().max((c - a).norm());
        if n.norm() < 1e-12 * scale * scale {
            return Err(GeometryError::CollinearPoints);
        }
        Plane::from_normal_point(n, a)
    }

    pub fn normal(&self) -> Vec3 {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed distance of `p` from the plane; positive on the side the
    /// normal points into.
    pub fn signed_distance(&self, p: Point3) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Orthogonal projection of `p` onto the plane.
    pub fn project(&self, p: Point3) -> Point3 {
        p - self.normal * self.signed_distance(p)
    }

    /// The same plane with the normal reversed.
    pub fn flipped(&self) -> Plane {
        Plane {
            normal: -self.normal,
            offset: -self.offset,
        }
    }

    /// An orthonormal basis `(u, v)` of the plane with `u × v = normal`.
    pub fn basis(&self) -> (Vec3, Vec3) {
        let n = self.normal;
        let seed = if n.x.abs() < 0.9 {
            Vec3::new(1.0, 0.0, 0.0)
        } else {
            Vec3::new(0.0, 1.0, 0.0)
        };
        let u = n
            .cross(seed)
            .normalized()
            .expect("unit normal has a perpendicular");
        let v = n.cross(u);
        (u, v)
    }
}

/// A closed half-space `{ p : normal · p ≤ offset }`; the interior lies on
/// the side the normal points away from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub plane: Plane,
}

impl HalfSpace {
    pub fn new(plane: Plane) -> HalfSpace {
        HalfSpace { plane }
    }

    /// Half-space `normal · p ≤ normal · point` (point on the boundary).
    pub fn boundary_through(normal: Vec3, point: Point3) -> Result<HalfSpace, GeometryError> {
        Ok(HalfSpace {
            plane: Plane::from_normal_point(normal, point)?,
        })
    }

    /// Violation of the constraint at `p`: negative inside, positive outside.
    pub fn excess(&self, p: Point3) -> f64 {
        self.plane.signed_distance(p)
    }

    pub fn contains(&self, p: Point3, tol: f64) -> bool {
        self.excess(p) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn through_points_orientation() {
        let p = Plane::through_points(
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        )
        .unwrap();
        assert!((p.normal() - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
        assert!(p.signed_distance(Point3::new(0.0, 0.0, 2.0)) > 0.0);
    }

    #[test]
    fn collinear_points_rejected() {
        let r = Plane::through_points(
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 1.0),
            Point3::new(2.0, 2.0, 2.0),
        );
        assert!(r.is_err());
    }

    #[test]
    fn project_lands_on_plane() {
        let p = Plane::new(Vec3::new(1.0, 2.0, -0.5), 3.0).unwrap();
        let q = p.project(Point3::new(10.0, -4.0, 2.0));
        assert!(p.signed_distance(q).abs() < 1e-12);
    }

    #[test]
    fn basis_is_orthonormal() {
        let p = Plane::new(Vec3::new(0.3, -0.7, 0.2), 1.0).unwrap();
        let (u, v) = p.basis();
        assert!((u.norm() - 1.0).abs() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!(u.dot(v).abs() < 1e-12);
        assert!((u.cross(v) - p.normal()).norm() < 1e-12);
    }
}
