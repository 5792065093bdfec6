use std::fmt;

use serde::{Deserialize, Serialize};

use super::plane::Plane;
use super::polytope::ConvexPolytope;
use super::vec3::{triple, Point3};
use super::{GeometryError, VOLUME_FLOOR_MM3};

/// Label shared by a vertex and the face opposite it: face `A` is the face
/// not containing vertex `a`, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
    C,
    D,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::A, Label::B, Label::C, Label::D];

    pub fn index(self) -> usize {
        match self {
            Label::A => 0,
            Label::B => 1,
            Label::C => 2,
            Label::D => 3,
        }
    }

    pub fn from_index(i: usize) -> Label {
        Label::ALL[i]
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "A" | "a" => Some(Label::A),
            "B" | "b" => Some(Label::B),
            "C" | "c" => Some(Label::C),
            "D" | "d" => Some(Label::D),
            _ => None,
        }
    }

    /// The three labels other than `self`, in ascending order.
    pub fn others(self) -> [Label; 3] {
        let mut out = [Label::A; 3];
        let mut k = 0;
        for l in Label::ALL {
            if l != self {
                out[k] = l;
                k += 1;
            }
        }
        out
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::A => "A",
            Label::B => "B",
            Label::C => "C",
            Label::D => "D",
        };
        f.write_str(s)
    }
}

/// An unordered pair of vertex labels naming one of the six edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge(Label, Label);

impl Edge {
    pub fn new(u: Label, v: Label) -> Result<Edge, GeometryError> {
        if u == v {
            return Err(GeometryError::InvalidEdge);
        }
        if u.index() < v.index() {
            Ok(Edge(u, v))
        } else {
            Ok(Edge(v, u))
        }
    }

    pub fn endpoints(self) -> (Label, Label) {
        (self.0, self.1)
    }

    /// The two labels not on the edge; the faces adjacent to the edge are
    /// the faces opposite these.
    pub fn opposite_pair(self) -> (Label, Label) {
        let mut rest = Label::ALL
            .iter()
            .copied()
            .filter(|l| *l != self.0 && *l != self.1);
        (rest.next().unwrap(), rest.next().unwrap())
    }

    pub const ALL: [Edge; 6] = [
        Edge(Label::A, Label::B),
        Edge(Label::A, Label::C),
        Edge(Label::A, Label::D),
        Edge(Label::B, Label::C),
        Edge(Label::B, Label::D),
        Edge(Label::C, Label::D),
    ];
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            self.0.to_string().to_lowercase(),
            self.1.to_string().to_lowercase()
        )
    }
}

/// A labeled, nondegenerate tetrahedron with vertices `a, b, c, d` (mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrahedron {
    verts: [Point3; 4],
}

impl Tetrahedron {
    /// Vertices in label order `a, b, c, d`. Rejects non-finite input and
    /// volumes at or below the degeneracy floor.
    pub fn new(verts: [Point3; 4]) -> Result<Tetrahedron, GeometryError> {
        for v in &verts {
            if !v.is_finite() {
                return Err(GeometryError::NonFiniteCoordinate);
            }
        }
        let t = Tetrahedron { verts };
        let vol = t.signed_volume().abs();
        if vol <= VOLUME_FLOOR_MM3 {
            return Err(GeometryError::DegenerateVolume { volume: vol });
        }
        Ok(t)
    }

    pub fn vertex(&self, v: Label) -> Point3 {
        self.verts[v.index()]
    }

    pub fn vertices(&self) -> [Point3; 4] {
        self.verts
    }

    /// The three vertex positions of the face opposite `face`, in ascending
    /// label order of the remaining vertices.
    pub fn face_vertices(&self, face: Label) -> [Point3; 3] {
        let o = face.others();
        [self.vertex(o[0]), self.vertex(o[1]), self.vertex(o[2])]
    }

    pub fn signed_volume(&self) -> f64 {
        let [a, b, c, d] = self.verts;
        triple(b - a, c - a, d - a) / 6.0
    }

    pub fn volume_mm3(&self) -> f64 {
        self.signed_volume().abs()
    }

    pub fn centroid(&self) -> Point3 {
        let [a, b, c, d] = self.verts;
        (a + b + c + d) / 4.0
    }

    /// Longest edge length; used to scale tolerances.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                d = d.max(self.verts[i].distance(self.verts[j]));
            }
        }
        d
    }

    /// Supporting plane of a face, normal pointing away from the opposite
    /// vertex (outward).
    pub fn face_plane(&self, face: Label) -> Result<Plane, GeometryError> {
        let [p, q, r] = self.face_vertices(face);
        let plane = Plane::through_points(p, q, r)?;
        let opposite = self.vertex(face);
        if plane.signed_distance(opposite) > 0.0 {
            Ok(plane.flipped())
        } else {
            Ok(plane)
        }
    }

    /// Interior dihedral angle at an edge, in degrees: π minus the angle
    /// between the outward normals of the two adjacent faces.
    pub fn dihedral_angle_deg(&self, edge: Edge) -> Result<f64, GeometryError> {
        let (f, g) = edge.opposite_pair();
        let n1 = self.face_plane(f)?.normal();
        let n2 = self.face_plane(g)?.normal();
        let between = n1.cross(n2).norm().atan2(n1.dot(n2));
        Ok((std::f64::consts::PI - between).to_degrees())
    }

    /// All six dihedral angles keyed by edge, in `Edge::ALL` order.
    pub fn dihedral_angles(&self) -> Result<[(Edge, f64); 6], GeometryError> {
        let mut out = [(Edge::ALL[0], 0.0); 6];
        for (i, e) in Edge::ALL.iter().enumerate() {
            out[i] = (*e, self.dihedral_angle_deg(*e)?);
        }
        Ok(out)
    }

    /// Face with the vertices of `face` as a facet polytope representation.
    pub fn to_polytope(&self) -> Result<ConvexPolytope, GeometryError> {
        ConvexPolytope::from_points(&self.verts)
    }

    /// Same tetrahedron with every vertex mapped through `f`.
    pub fn map_vertices(&self, f: impl Fn(Point3) -> Point3) -> Result<Tetrahedron, GeometryError> {
        Tetrahedron::new([
            f(self.verts[0]),
            f(self.verts[1]),
            f(self.verts[2]),
            f(self.verts[3]),
        ])
    }

    /// Applies a relabeling permutation: new vertex `a` is old `perm[0]`, etc.
    pub fn relabeled(&self, perm: [Label; 4]) -> Tetrahedron {
        Tetrahedron {
            verts: [
                self.vertex(perm[0]),
                self.vertex(perm[1]),
                self.vertex(perm[2]),
                self.vertex(perm[3]),
            ],
        }
    }
}
