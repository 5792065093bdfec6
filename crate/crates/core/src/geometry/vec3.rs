use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A 3-vector of `f64` coordinates. Lengths are in millimetres throughout.
///
/// Used both for points and for directions; [`Point3`] is an alias kept for
/// readability at call sites that mean a position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A position in space, in millimetres.
pub type Point3 = Vec3;

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the same direction, or `None` when the norm is too
    /// small to normalize reliably.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n < 1e-300 {
            None
        } else {
            Some(self / n)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest coordinate magnitude.
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn lerp(self, other: Vec3, t: f64) -> Vec3 {
        self + (other - self) * t
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, rhs: Vec3) {
        *self = *self + rhs;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Scalar triple product `a · (b × c)`; six times the signed volume of the
/// tetrahedron spanned by the three vectors.
pub fn triple(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    a.dot(b.cross(c))
}

/// Solves the 3x3 linear system with rows `(a, b, c)` and right-hand side
/// `rhs` by Cramer's rule, with one step of iterative refinement.
///
/// Returns `None` when the determinant magnitude is below `det_floor`.
pub fn solve3(a: Vec3, b: Vec3, c: Vec3, rhs: Vec3, det_floor: f64) -> Option<Vec3> {
    let det = triple(a, b, c);
    if det.abs() < det_floor {
        return None;
    }
    // Cramer's rule over the matrix columns.
    let c1 = Vec3::new(a.x, b.x, c.x);
    let c2 = Vec3::new(a.y, b.y, c.y);
    let c3 = Vec3::new(a.z, b.z, c.z);
    let solve = |r: Vec3| -> Vec3 {
        Vec3::new(
            triple(r, c2, c3) / det,
            triple(c1, r, c3) / det,
            triple(c1, c2, r) / det,
        )
    };
    let x0 = solve(rhs);
    // One refinement step knocks the residual down to ~machine precision
    // even when the system is poorly scaled.
    let residual = Vec3::new(rhs.x - a.dot(x0), rhs.y - b.dot(x0), rhs.z - c.dot(x0));
    let dx = solve(residual);
    Some(x0 + dx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_perpendicular() {
        let a = Vec3::new(1.0, 2.0, 3.0);
        let b = Vec3::new(-4.0, 0.5, 2.0);
        let c = a.cross(b);
        assert!(c.dot(a).abs() < 1e-12);
        assert!(c.dot(b).abs() < 1e-12);
    }

    #[test]
    fn solve3_recovers_solution() {
        let a = Vec3::new(2.0, 1.0, -1.0);
        let b = Vec3::new(-3.0, -1.0, 2.0);
        let c = Vec3::new(-2.0, 1.0, 2.0);
        let x = Vec3::new(8.0, -11.0, -3.0);
        let rhs = Vec3::new(a.dot(x), b.dot(x), c.dot(x));
        let got = solve3(a, b, c, rhs, 1e-12).unwrap();
        assert!((got - x).norm() < 1e-9);
    }

    #[test]
    fn solve3_rejects_singular() {
        let a = Vec3::new(1.0, 0.0, 0.0);
        let b = Vec3::new(2.0, 0.0, 0.0);
        let c = Vec3::new(0.0, 1.0, 0.0);
        assert!(solve3(a, b, c, Vec3::ZERO, 1e-12).is_none());
    }
}
