use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::plane::Plane;
use super::vec3::{triple, Point3, Vec3};
use super::{GeometryError, VOLUME_FLOOR_MM3};

/// One face of a polytope: its outward supporting plane and the vertex
/// indices walking the boundary counter-clockwise seen from outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub plane: Plane,
    pub vertices: Vec<usize>,
}

/// A bounded convex polytope in vertex + facet representation.
///
/// Invariants enforced at construction: every vertex satisfies every facet
/// half-space (within a scale-aware on-plane tolerance), facet cycles are
/// oriented outward, every edge is shared by exactly two facets, and the
/// Euler relation V - E + F = 2 holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolytope {
    vertices: Vec<Point3>,
    facets: Vec<Facet>,
}

/// Volume and centroid of a polytope, with a degeneracy flag instead of a
/// silent zero when the volume is at or below the floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeCentroid {
    pub volume_mm3: f64,
    pub centroid: Point3,
    pub degenerate: bool,
}

impl VolumeCentroid {
    pub fn volume_cm3(&self) -> f64 {
        self.volume_mm3 / 1000.0
    }
}

/// On-plane tolerance for a body of the given diameter: 1e-9 mm at bench
/// scale, relative beyond it.
pub fn on_plane_tolerance(diameter: f64) -> f64 {
    (1e-9_f64).max(1e-12 * diameter)
}

impl ConvexPolytope {
    /// Validating constructor from explicit vertices and facets.
    pub fn from_parts(vertices: Vec<Point3>, facets: Vec<Facet>) -> Result<Self, GeometryError> {
        let poly = ConvexPolytope { vertices, facets };
        poly.validate()?;
        Ok(poly)
    }

    /// Convex hull of a point set; see [`super::convex_hull`].
    pub fn from_points(points: &[Point3]) -> Result<Self, GeometryError> {
        super::hull::convex_hull(points)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet_polygon(&self, facet: usize) -> Vec<Point3> {
        self.facets[facet]
            .vertices
            .iter()
            .map(|&i| self.vertices[i])
            .collect()
    }

    /// Longest distance between two vertices' bounding box corners.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    pub fn bounding_box(&self) -> (Point3, Point3) {
        let mut lo = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            lo.z = lo.z.min(v.z);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
            hi.z = hi.z.max(v.z);
        }
        (lo, hi)
    }

    /// Signed distance of `p` to the boundary, positive inside: the minimum
    /// over facets of the distance to the facet plane. For interior points
    /// of a convex polytope this is the exact Euclidean distance to the
    /// boundary.
    pub fn interior_distance(&self, p: Point3) -> f64 {
        self.facets
            .iter()
            .map(|f| -f.plane.signed_distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Point3, tol: f64) -> bool {
        self.interior_distance(p) >= -tol
    }

    /// Volume (mm³) and centroid by signed decomposition of the facet fans
    /// against an interior reference point. Degenerate (below-floor) volumes
    /// are flagged, not zeroed.
    pub fn volume_centroid(&self) -> VolumeCentroid {
        // Working relative to the vertex mean keeps the signed tetrahedra
        // well scaled even when the body is a thin sliver far from the
        // origin.
        let mut shift = Vec3::ZERO;
        for v in &self.vertices {
            shift += *v;
        }
        shift = shift / self.vertices.len() as f64;

        let mut volume6 = 0.0;
        let mut moment = Vec3::ZERO;
        for facet in &self.facets {
            let cycle = &facet.vertices;
            let p0 = self.vertices[cycle[0]] - shift;
            for w in cycle[1..].windows(2) {
                let p1 = self.vertices[w[0]] - shift;
                let p2 = self.vertices[w[1]] - shift;
                let v6 = triple(p0, p1, p2);
                volume6 += v6;
                moment += (p0 + p1 + p2) * (v6 / 4.0);
            }
        }
        let volume = volume6 / 6.0;
        if volume.abs() <= VOLUME_FLOOR_MM3 {
            return VolumeCentroid {
                volume_mm3: volume.abs(),
                centroid: shift,
                degenerate: true,
            };
        }
        let centroid = shift + moment / volume6;
        VolumeCentroid {
            volume_mm3: volume,
            centroid,
            degenerate: false,
        }
    }

    /// The polytope scaled uniformly about the origin by `s > 0`.
    pub fn scaled_about_origin(&self, s: f64) -> Result<ConvexPolytope, GeometryError> {
        let vertices = self.vertices.iter().map(|v| *v * s).collect();
        let facets = self
            .facets
            .iter()
            .map(|f| {
                Ok(Facet {
                    plane: Plane::new(f.plane.normal(), f.plane.offset() * s)?,
                    vertices: f.vertices.clone(),
                })
            })
            .collect::<Result<Vec<_>, GeometryError>>()?;
        ConvexPolytope::from_parts(vertices, facets)
    }

    /// All undirected edges as index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for f in &self.facets {
            for k in 0..f.vertices.len() {
                let a = f.vertices[k];
                let b = f.vertices[(k + 1) % f.vertices.len()];
                let e = (a.min(b), a.max(b));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// For every undirected edge, the indices of the two facets sharing it.
    pub fn edge_facets(&self) -> BTreeMap<(usize, usize), (usize, usize)> {
        let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, f) in self.facets.iter().enumerate() {
            for k in 0..f.vertices.len() {
                let a = f.vertices[k];
                let b = f.vertices[(k + 1) % f.vertices.len()];
                map.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        map.into_iter()
            .map(|(e, fs)| {
                debug_assert_eq!(fs.len(), 2);
                (e, (fs[0], fs[1]))
            })
            .collect()
    }

    /// Draws a point uniformly from the interior by picking a tetrahedron of
    /// the centroid-fan decomposition with probability proportional to its
    /// volume, then sampling uniform barycentric coordinates.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point3 {
        let vc = self.volume_centroid();
        let apex = vc.centroid;
        let mut tets: Vec<([Point3; 3], f64)> = Vec::new();
        let mut total = 0.0;
        for facet in &self.facets {
            let cycle = &facet.vertices;
            let p0 = self.vertices[cycle[0]];
            for w in cycle[1..].windows(2) {
                let p1 = self.vertices[w[0]];
                let p2 = self.vertices[w[1]];
                let v = triple(p0 - apex, p1 - apex, p2 - apex).abs();
                total += v;
                tets.push(([p0, p1, p2], v));
            }
        }
        let mut pick = rng.random_range(0.0..total);
        let mut chosen = tets.len() - 1;
        for (i, (_, v)) in tets.iter().enumerate() {
            if pick < *v {
                chosen = i;
                break;
            }
            pick -= v;
        }
        let (tri, _) = &tets[chosen];
        // Dirichlet(1,1,1,1) barycentric coordinates over (apex, tri).
        let mut w = [0.0_f64; 4];
        let mut sum = 0.0;
        for wi in &mut w {
            let u: f64 = rng.random_range(1e-12..1.0);
            *wi = -u.ln();
            sum += *wi;
        }
        (apex * w[0] + tri[0] * w[1] + tri[1] * w[2] + tri[2] * w[3]) / sum
    }

    fn validate(&self) -> Result<(), GeometryError> {
        if self.vertices.len() < 4 || self.facets.len() < 4 {
            return Err(GeometryError::NotFullDimensional);
        }
        for v in &self.vertices {
            if !v.is_finite() {
                return Err(GeometryError::NonFiniteCoordinate);
            }
        }
        let tol = on_plane_tolerance(self.diameter());

        // Convexity: every vertex inside or on every facet half-space.
        for (fi, f) in self.facets.iter().enumerate() {
            if f.vertices.len() < 3 {
                return Err(GeometryError::BadFacet { facet: fi });
            }
            for (vi, v) in self.vertices.iter().enumerate() {
                let d = f.plane.signed_distance(*v);
                if d > tol {
                    return Err(GeometryError::NotConvex {
                        facet: fi,
                        vertex: vi,
                        excess: d,
                    });
                }
            }
            // Facet vertices must lie on the facet plane.
            for &vi in &f.vertices {
                if f.plane.signed_distance(self.vertices[vi]).abs() > tol {
                    return Err(GeometryError::BadFacet { facet: fi });
                }
            }
            // Outward orientation: the cycle's Newell normal agrees with the
            // stored plane normal.
            let mut newell = Vec3::ZERO;
            for k in 0..f.vertices.len() {
                let p = self.vertices[f.vertices[k]];
                let q = self.vertices[f.vertices[(k + 1) % f.vertices.len()]];
                newell += Vec3::new(
                    (p.y - q.y) * (p.z + q.z),
                    (p.z - q.z) * (p.x + q.x),
                    (p.x - q.x) * (p.y + q.y),
                );
            }
            if newell.dot(f.plane.normal()) <= 0.0 {
                return Err(GeometryError::BadFacet { facet: fi });
            }
        }

        // Closed 2-manifold: every edge appears in exactly two facet cycles,
        // and Euler's relation holds.
        let mut edge_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in &self.facets {
            for k in 0..f.vertices.len() {
                let a = f.vertices[k];
                let b = f.vertices[(k + 1) % f.vertices.len()];
                if a == b {
                    return Err(GeometryError::BadFacet { facet: 0 });
                }
                *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        if edge_count.values().any(|&c| c != 2) {
            return Err(GeometryError::NotClosed);
        }
        let v = self.vertices.len() as i64;
        let e = edge_count.len() as i64;
        let f = self.facets.len() as i64;
        if v - e + f != 2 {
            return Err(GeometryError::EulerViolation { v, e, f });
        }
        Ok(())
    }
}
