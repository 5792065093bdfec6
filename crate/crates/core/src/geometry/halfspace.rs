use super::hull::convex_hull;
use super::plane::HalfSpace;
use super::polytope::ConvexPolytope;
use super::vec3::{solve3, triple, Point3, Vec3};
use super::GeometryError;

/// Result of intersecting half-spaces: either a full-dimensional bounded
/// polytope or nothing. Intersections of measure zero (points, segments,
/// flat polygons) report as `Empty`.
#[derive(Debug, Clone)]
pub enum HalfspaceIntersection {
    Empty,
    Bounded(ConvexPolytope),
}

impl HalfspaceIntersection {
    pub fn polytope(&self) -> Option<&ConvexPolytope> {
        match self {
            HalfspaceIntersection::Bounded(p) => Some(p),
            HalfspaceIntersection::Empty => None,
        }
    }
}

/// Intersects closed half-spaces `{ p : nᵢ · p ≤ oᵢ }`.
///
/// Vertex enumeration over plane triples with iterative-refinement solves,
/// followed by a convex hull of the surviving vertices. An unbounded
/// intersection is an error distinct from the empty result; callers that
/// need a guaranteed bounded output include enclosing constraints (the
/// tetrahedron facets, in the loading-zone construction).
pub fn halfspace_intersection(
    halfspaces: &[HalfSpace],
) -> Result<HalfspaceIntersection, GeometryError> {
    if halfspaces.is_empty() {
        return Err(GeometryError::NoHalfSpaces);
    }
    let hs = dedupe(halfspaces);
    let scale = 1.0
        + hs.iter()
            .map(|h| h.plane.offset().abs())
            .fold(0.0, f64::max);
    let feas_tol = 1e-7 * scale;

    // Candidate vertices from all plane triples.
    let mut candidates: Vec<(Point3, f64)> = Vec::new(); // (vertex, |det| of its triple)
    let n = hs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (ni, nj, nk) = (
                    hs[i].plane.normal(),
                    hs[j].plane.normal(),
                    hs[k].plane.normal(),
                );
                let det = triple(ni, nj, nk).abs();
                let rhs = Vec3::new(
                    hs[i].plane.offset(),
                    hs[j].plane.offset(),
                    hs[k].plane.offset(),
                );
                if let Some(p) = solve3(ni, nj, nk, rhs, 1e-12) {
                    if p.is_finite() && hs.iter().all(|h| h.excess(p) <= feas_tol) {
                        candidates.push((p, det));
                    }
                }
            }
        }
    }

    if candidates.is_empty() {
        return if positively_spans(&hs) {
            Ok(HalfspaceIntersection::Empty)
        } else if find_feasible_point(&hs, scale).is_some() {
            Err(GeometryError::UnboundedIntersection)
        } else {
            Ok(HalfspaceIntersection::Empty)
        };
    }
    if !positively_spans(&hs) {
        return Err(GeometryError::UnboundedIntersection);
    }

    // Merge duplicate candidates and hull them. Clusters of nearly
    // concurrent planes create vertex micro-structure the hull cannot
    // resolve; escalate the merge tolerance until assembly succeeds.
    candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let mut last_err = GeometryError::HullFailure;
    for merge_mult in [1.0, 30.0, 300.0, 3000.0] {
        let merge_tol = 1e-7 * scale * merge_mult;
        let mut vertices: Vec<Point3> = Vec::new();
        for (p, _) in &candidates {
            if !vertices.iter().any(|q| (*q - *p).max_abs() <= merge_tol) {
                vertices.push(*p);
            }
        }
        polish(&mut vertices, &hs, scale, feas_tol);
        if vertices.len() < 4 {
            return Ok(HalfspaceIntersection::Empty);
        }
        match convex_hull(&vertices) {
            Ok(poly) => return Ok(HalfspaceIntersection::Bounded(poly)),
            // Lower-dimensional vertex sets mean a measure-zero intersection.
            Err(GeometryError::CoplanarPoints) | Err(GeometryError::CollinearPoints) => {
                return Ok(HalfspaceIntersection::Empty)
            }
            Err(GeometryError::HullFailure) => {
                last_err = GeometryError::HullFailure;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

/// Re-solves each vertex from its best-conditioned triple of active planes.
fn polish(vertices: &mut [Point3], hs: &[HalfSpace], scale: f64, feas_tol: f64) {
    let act_tol = 1e-6 * scale;
    let n = hs.len();
    for v in vertices.iter_mut() {
        let active: Vec<usize> = (0..n)
            .filter(|&i| hs[i].excess(*v).abs() <= act_tol)
            .collect();
        let mut best: Option<(f64, Point3)> = None;
        for a in 0..active.len() {
            for b in (a + 1)..active.len() {
                for c in (b + 1)..active.len() {
                    let (i, j, k) = (active[a], active[b], active[c]);
                    let det = triple(
                        hs[i].plane.normal(),
                        hs[j].plane.normal(),
                        hs[k].plane.normal(),
                    )
                    .abs();
                    if best.as_ref().is_none_or(|(d, _)| det > *d) {
                        let rhs = Vec3::new(
                            hs[i].plane.offset(),
                            hs[j].plane.offset(),
                            hs[k].plane.offset(),
                        );
                        if let Some(p) = solve3(
                            hs[i].plane.normal(),
                            hs[j].plane.normal(),
                            hs[k].plane.normal(),
                            rhs,
                            1e-12,
                        ) {
                            best = Some((det, p));
                        }
                    }
                }
            }
        }
        if let Some((_, p)) = best {
            if hs.iter().all(|h| h.excess(p) <= feas_tol) {
                *v = p;
            }
        }
    }
}

/// Drops half-spaces whose plane duplicates an earlier one (same normal;
/// the tighter offset wins). Near-identical planes otherwise break the
/// facet topology downstream.
fn dedupe(halfspaces: &[HalfSpace]) -> Vec<HalfSpace> {
    let mut out: Vec<HalfSpace> = Vec::with_capacity(halfspaces.len());
    for h in halfspaces {
        let mut absorbed = false;
        for kept in &mut out {
            let same_dir = kept.plane.normal().dot(h.plane.normal()) > 1.0 - 1e-12;
            if same_dir && (kept.plane.offset() - h.plane.offset()).abs() < 1e-9 {
                if h.plane.offset() < kept.plane.offset() {
                    *kept = *h;
                }
                absorbed = true;
                break;
            }
        }
        if !absorbed {
            out.push(*h);
        }
    }
    out
}

/// True iff the outward normals positively span R³, i.e. the recession cone
/// of the (nonempty) intersection is trivial and the region is bounded.
fn positively_spans(halfspaces: &[HalfSpace]) -> bool {
    // The origin must be strictly inside the convex hull of the normals.
    // Equivalently: for every direction d, some normal has n · d > 0. We
    // test the directions that matter: the hull facet normals of the normal
    // cloud. A cheap sufficient test via hull construction:
    let normals: Vec<Point3> = halfspaces.iter().map(|h| h.plane.normal()).collect();
    match convex_hull(&normals) {
        Ok(hull) => hull
            .facets()
            .iter()
            .all(|f| f.plane.signed_distance(Point3::ZERO) < -1e-12),
        // Degenerate normal clouds cannot positively span 3-space.
        Err(_) => false,
    }
}

/// Motzkin-style relaxation: repeatedly project onto the most violated
/// half-space boundary. Converges to a feasible point when the region is
/// full-dimensional; used only to tell unbounded regions from empty ones
/// when no vertices exist.
fn find_feasible_point(halfspaces: &[HalfSpace], scale: f64) -> Option<Point3> {
    let mut x = Point3::ZERO;
    let tol = 1e-9 * scale;
    for _ in 0..20_000 {
        let (worst, excess) = halfspaces
            .iter()
            .map(|h| (h, h.excess(x)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
        if excess <= tol {
            return Some(x);
        }
        x = x - worst.plane.normal() * (excess * 1.5);
    }
    None
}
