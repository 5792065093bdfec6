use std::collections::BTreeMap;

use super::plane::Plane;
use super::polytope::{on_plane_tolerance, ConvexPolytope, Facet};
use super::vec3::{Point3, Vec3};
use super::GeometryError;

/// Convex hull of a 3D point set.
///
/// Incremental insertion with scale-aware epsilon visibility tests; coplanar
/// hull triangles are merged into polygonal facets so that hulls of boxy
/// meshes expose their true faces (an edge between merged triangles is not a
/// rolling edge). Points on facet interiors or edges are absorbed, so the
/// returned vertex set is minimal.
pub fn convex_hull(points: &[Point3]) -> Result<ConvexPolytope, GeometryError> {
    if points.len() < 4 {
        return Err(GeometryError::TooFewPoints { got: points.len() });
    }
    for p in points {
        if !p.is_finite() {
            return Err(GeometryError::NonFiniteCoordinate);
        }
    }
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        lo.z = lo.z.min(p.z);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
        hi.z = hi.z.max(p.z);
    }
    let scale = (hi - lo).norm();
    if scale <= 0.0 {
        return Err(GeometryError::CollinearPoints);
    }
    let eps = on_plane_tolerance(scale).max(1e-12 * scale);

    let (seed, interior) = initial_simplex(points, scale)?;
    let mut faces: Vec<[usize; 3]> = seed.to_vec();

    // Farthest-first insertion keeps the intermediate hulls fat, which makes
    // the epsilon visibility tests far better conditioned.
    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut key: Vec<f64> = points.iter().map(|p| (*p - interior).norm()).collect();
    order.sort_by(|&i, &j| key[j].partial_cmp(&key[i]).unwrap().then(i.cmp(&j)));
    key.clear();

    for &pi in &order {
        if seed.iter().any(|f| f.contains(&pi)) {
            continue;
        }
        let p = points[pi];
        let mut visible: Vec<usize> = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            let plane = face_plane(points, *f, interior)?;
            if plane.signed_distance(p) > eps {
                visible.push(fi);
            }
        }
        if visible.is_empty() {
            continue;
        }
        // Horizon: directed edges of visible faces whose twin belongs to an
        // invisible face.
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &fi in &visible {
            let [a, b, c] = faces[fi];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                directed.insert((u, v), fi);
            }
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &(u, v) in directed.keys() {
            if !directed.contains_key(&(v, u)) {
                horizon.push((u, v));
            }
        }
        if horizon.is_empty() {
            return Err(GeometryError::HullFailure);
        }
        let mut keep: Vec<[usize; 3]> = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            if !visible.contains(&fi) {
                keep.push(*f);
            }
        }
        for (u, v) in horizon {
            keep.push([u, v, pi]);
        }
        faces = keep;
    }

    assemble(points, &faces, interior, eps, scale)
}

/// Finds four affinely independent seed points and returns the four outward
/// oriented faces plus an interior reference point.
fn initial_simplex(
    points: &[Point3],
    scale: f64,
) -> Result<([[usize; 3]; 4], Point3), GeometryError> {
    let i0 = 0;
    let mut i1 = 0;
    let mut best = 0.0;
    for (i, p) in points.iter().enumerate() {
        let d = (*p - points[i0]).norm();
        if d > best {
            best = d;
            i1 = i;
        }
    }
    if best < 1e-12 * scale {
        return Err(GeometryError::CollinearPoints);
    }
    let dir = (points[i1] - points[i0]) / best;
    let mut i2 = 0;
    best = 0.0;
    for (i, p) in points.iter().enumerate() {
        let r = *p - points[i0];
        let d = (r - dir * r.dot(dir)).norm();
        if d > best {
            best = d;
            i2 = i;
        }
    }
    if best < 1e-12 * scale {
        return Err(GeometryError::CollinearPoints);
    }
    let base = Plane::through_points(points[i0], points[i1], points[i2])?;
    let mut i3 = 0;
    best = 0.0;
    for (i, p) in points.iter().enumerate() {
        let d = base.signed_distance(*p).abs();
        if d > best {
            best = d;
            i3 = i;
        }
    }
    if best < 1e-9 * scale {
        return Err(GeometryError::CoplanarPoints);
    }
    let interior = (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;
    let faces = [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]];
    let mut oriented = [[0usize; 3]; 4];
    for (k, f) in faces.iter().enumerate() {
        let plane = Plane::through_points(points[f[0]], points[f[1]], points[f[2]])?;
        oriented[k] = if plane.signed_distance(interior) > 0.0 {
            [f[0], f[2], f[1]]
        } else {
            *f
        };
    }
    Ok((oriented, interior))
}

fn face_plane(points: &[Point3], f: [usize; 3], interior: Point3) -> Result<Plane, GeometryError> {
    let plane = Plane::through_points(points[f[0]], points[f[1]], points[f[2]])?;
    if plane.signed_distance(interior) > 0.0 {
        Ok(plane.flipped())
    } else {
        Ok(plane)
    }
}

/// Merges coplanar triangles into polygonal facets, drops absorbed points,
/// and builds the validated polytope.
fn assemble(
    points: &[Point3],
    faces: &[[usize; 3]],
    interior: Point3,
    eps: f64,
    scale: f64,
) -> Result<ConvexPolytope, GeometryError> {
    let planes: Vec<Plane> = faces
        .iter()
        .map(|f| face_plane(points, *f, interior))
        .collect::<Result<_, _>>()?;

    // Union-find over faces adjacent across an edge with near-identical
    // planes.
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for (u, v) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            by_edge.entry((u.min(v), u.max(v))).or_default().push(fi);
        }
    }
    for fs in by_edge.values() {
        if fs.len() != 2 {
            return Err(GeometryError::HullFailure);
        }
        let (a, b) = (fs[0], fs[1]);
        let coplanar = planes[a].normal().dot(planes[b].normal()) > 1.0 - 1e-10
            && (planes[a].offset() - planes[b].offset()).abs() <= eps.max(1e-9 * scale);
        if coplanar {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for fi in 0..faces.len() {
        let r = find(&mut parent, fi);
        groups.entry(r).or_default().push(fi);
    }

    let mut facet_cycles: Vec<Vec<usize>> = Vec::new();
    let mut facet_planes: Vec<Plane> = Vec::new();
    for (_, group) in groups {
        // Boundary of the group: directed edges without a twin inside the
        // group.
        let mut dir_edges: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        for &fi in &group {
            let [a, b, c] = faces[fi];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                if dir_edges.remove(&(v, u)).is_none() {
                    dir_edges.insert((u, v), ());
                }
            }
        }
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for &(u, v) in dir_edges.keys() {
            if next.insert(u, v).is_some() {
                return Err(GeometryError::HullFailure);
            }
        }
        let &start = next.keys().next().ok_or(GeometryError::HullFailure)?;
        let mut cycle = vec![start];
        let mut cur = next[&start];
        while cur != start {
            cycle.push(cur);
            cur = *next.get(&cur).ok_or(GeometryError::HullFailure)?;
            if cycle.len() > next.len() {
                return Err(GeometryError::HullFailure);
            }
        }
        if cycle.len() != next.len() {
            return Err(GeometryError::HullFailure);
        }

        // Drop vertices interior to a straight boundary run.
        let mut trimmed: Vec<usize> = Vec::with_capacity(cycle.len());
        let n = cycle.len();
        for k in 0..n {
            let prev = points[cycle[(k + n - 1) % n]];
            let here = points[cycle[k]];
            let nxt = points[cycle[(k + 1) % n]];
            let area2 = (here - prev).cross(nxt - here).norm();
            if area2 > eps * scale {
                trimmed.push(cycle[k]);
            }
        }
        if trimmed.len() < 3 {
            return Err(GeometryError::HullFailure);
        }

        // Refit the plane over the merged polygon (Newell), keeping the
        // outward side.
        let mut newell = Vec3::ZERO;
        let mut mean = Vec3::ZERO;
        for k in 0..trimmed.len() {
            let p = points[trimmed[k]];
            let q = points[trimmed[(k + 1) % trimmed.len()]];
            newell += Vec3::new(
                (p.y - q.y) * (p.z + q.z),
                (p.z - q.z) * (p.x + q.x),
                (p.x - q.x) * (p.y + q.y),
            );
            mean += p;
        }
        mean = mean / trimmed.len() as f64;
        let mut plane = Plane::from_normal_point(newell, mean)?;
        if plane.signed_distance(interior) > 0.0 {
            plane = plane.flipped();
            trimmed.reverse();
        }
        facet_cycles.push(trimmed);
        facet_planes.push(plane);
    }

    // Reindex to the vertices that survived.
    let mut used: Vec<usize> = facet_cycles.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let remap: BTreeMap<usize, usize> = used
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let vertices: Vec<Point3> = used.iter().map(|&i| points[i]).collect();
    let facets: Vec<Facet> = facet_cycles
        .into_iter()
        .zip(facet_planes)
        .map(|(cycle, plane)| Facet {
            plane,
            vertices: cycle.into_iter().map(|i| remap[&i]).collect(),
        })
        .collect();

    ConvexPolytope::from_parts(vertices, facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn cube_with_interior_points() {
        let mut pts: Vec<Point3> = (0..8)
            .map(|i| Point3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
            .collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            pts.push(Point3::new(
                rng.random_range(0.05..0.95),
                rng.random_range(0.05..0.95),
                rng.random_range(0.05..0.95),
            ));
        }
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices().len(), 8);
        assert_eq!(hull.facets().len(), 6);
        let vc = hull.volume_centroid();
        assert!((vc.volume_mm3 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn four_points_give_tetrahedron() {
        let pts = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(4.0, 0.0, 0.0),
            Point3::new(0.0, 5.0, 0.0),
            Point3::new(0.0, 0.0, 6.0),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices().len(), 4);
        assert_eq!(hull.facets().len(), 4);
        assert!((hull.volume_centroid().volume_mm3 - 20.0).abs() < 1e-9);
    }

    #[test]
    fn coplanar_input_named() {
        let pts = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.3, 0.3, 0.0),
        ];
        assert!(matches!(
            convex_hull(&pts),
            Err(GeometryError::CoplanarPoints)
        ));
    }

    #[test]
    fn collinear_input_named() {
        let pts = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 1.0),
            Point3::new(2.0, 2.0, 2.0),
            Point3::new(3.0, 3.0, 3.0),
        ];
        assert!(matches!(
            convex_hull(&pts),
            Err(GeometryError::CollinearPoints)
        ));
    }

    #[test]
    fn random_cloud_contains_all_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Point3> = (0..400)
            .map(|_| {
                Point3::new(
                    rng.random_range(-30.0..30.0),
                    rng.random_range(-20.0..20.0),
                    rng.random_range(-10.0..10.0),
                )
            })
            .collect();
        let hull = convex_hull(&pts).unwrap();
        let tol = on_plane_tolerance(hull.diameter());
        for p in &pts {
            assert!(hull.contains(*p, tol * 10.0));
        }
    }

    #[test]
    fn hull_is_idempotent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<Point3> = (0..60)
            .map(|_| {
                Point3::new(
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                )
            })
            .collect();
        let hull = convex_hull(&pts).unwrap();
        let again = convex_hull(hull.vertices()).unwrap();
        assert_eq!(hull.vertices().len(), again.vertices().len());
        let mut a: Vec<_> = hull.vertices().to_vec();
        let mut b: Vec<_> = again.vertices().to_vec();
        let key = |p: &Point3| (p.x, p.y, p.z);
        a.sort_by(|p, q| key(p).partial_cmp(&key(q)).unwrap());
        b.sort_by(|p, q| key(p).partial_cmp(&key(q)).unwrap());
        for (p, q) in a.iter().zip(b.iter()) {
            assert!((*p - *q).norm() < 1e-12);
        }
    }
}
