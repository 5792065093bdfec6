//! Two-material design: a light tube frame along the edges plus a dense
//! core cut off by a planar interface, composed so the centre of mass lands
//! inside a chosen loading zone.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    halfspace_intersection, ConvexPolytope, GeometryError, HalfSpace, HalfspaceIntersection, Label,
    Plane, Point3, Tetrahedron, Vec3,
};
use crate::pattern::FallingPattern;
use crate::tipping::{falling_pattern, TippingError};
use crate::zones::LoadingZone;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    pub name: String,
    pub density_g_cm3: f64,
}

impl MaterialSpec {
    pub fn new(name: impl Into<String>, density_g_cm3: f64) -> Result<Self, DesignError> {
        if !density_g_cm3.is_finite() || density_g_cm3 <= 0.0 {
            return Err(DesignError::NonPositiveDensity);
        }
        Ok(MaterialSpec {
            name: name.into(),
            density_g_cm3,
        })
    }
}

/// How the light part is modeled: mass on the edge tubes (the physical
/// skeleton), or the same mass spread homogeneously over the body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameModel {
    #[default]
    EdgeTubes,
    Homogeneous,
}

/// Hollow-tube skeleton along the six edges, with optional point masses at
/// the joints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub tube_outer_diameter_mm: f64,
    pub tube_inner_diameter_mm: f64,
    pub material: MaterialSpec,
    /// Point mass per vertex, grams. Joint adhesive has a known density but
    /// no known volume, so it defaults to zero.
    pub joint_mass_g: f64,
    pub model: FrameModel,
}

impl FrameSpec {
    pub fn validate(&self) -> Result<(), DesignError> {
        if !self.tube_outer_diameter_mm.is_finite()
            || !self.tube_inner_diameter_mm.is_finite()
            || self.tube_outer_diameter_mm <= 0.0
            || self.tube_inner_diameter_mm < 0.0
            || self.tube_inner_diameter_mm >= self.tube_outer_diameter_mm
        {
            return Err(DesignError::BadTubeDiameters);
        }
        if self.joint_mass_g < 0.0 {
            return Err(DesignError::NegativeJointMass);
        }
        Ok(())
    }

    /// Tube linear density in g/mm from the annulus cross-section.
    pub fn linear_density_g_mm(&self) -> f64 {
        let area_mm2 = PI / 4.0
            * (self.tube_outer_diameter_mm * self.tube_outer_diameter_mm
                - self.tube_inner_diameter_mm * self.tube_inner_diameter_mm);
        area_mm2 * self.material.density_g_cm3 / 1000.0
    }
}

/// Dense region: the tetrahedron cut by a planar interface; the half-space
/// interior is the core side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreSpec {
    pub interface: HalfSpace,
    pub material: MaterialSpec,
}

impl CoreSpec {
    /// The same interface on a body uniformly scaled about the origin.
    pub fn scaled_about_origin(&self, s: f64) -> CoreSpec {
        let p = self.interface.plane;
        CoreSpec {
            interface: HalfSpace::new(
                Plane::new(p.normal(), p.offset() * s).expect("unit normal stays valid"),
            ),
            material: self.material.clone(),
        }
    }
}

/// Masses and centres of the two parts plus the composite centre of mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MassModel {
    pub frame_mass_g: f64,
    pub frame_com: Point3,
    pub core_mass_g: f64,
    pub core_com: Point3,
    pub com: Point3,
}

impl MassModel {
    pub fn total_mass_g(&self) -> f64 {
        self.frame_mass_g + self.core_mass_g
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameProperties {
    pub mass_g: f64,
    pub com: Point3,
}

#[derive(Debug, Clone)]
pub struct CoreProperties {
    pub mass_g: f64,
    pub com: Point3,
    pub volume_mm3: f64,
    pub region: ConvexPolytope,
}

/// A fitted interface plane and the margin by which the composite com sits
/// inside the target zone (negative when the best attempt still misses).
#[derive(Debug, Clone)]
pub struct FitResult {
    pub core: CoreSpec,
    pub margin_mm: f64,
    pub mass_model: MassModel,
}

/// Outcome of a density threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityThreshold {
    /// Minimal density (g/cm³) with a functional design, within 0.5%.
    Reachable(f64),
    /// No density up to 10⁶ g/cm³ works.
    Unreachable,
}

#[derive(Debug, Clone, Error)]
pub enum DesignError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tipping(#[from] TippingError),
    #[error("material density must be positive")]
    NonPositiveDensity,
    #[error("tube diameters must satisfy 0 ≤ inner < outer")]
    BadTubeDiameters,
    #[error("joint mass must be nonnegative")]
    NegativeJointMass,
    #[error("frame has zero total mass")]
    ZeroFrameMass,
    #[error("interface cuts off an empty core")]
    EmptyCore,
    #[error("target loading zone is empty")]
    EmptyZone,
    #[error("no functional scale in [1e-3, 1e3]")]
    NoFunctionalScale,
}

/// Mass and centre of mass of the skeleton.
pub fn frame_model(t: &Tetrahedron, f: &FrameSpec) -> Result<FrameProperties, DesignError> {
    f.validate()?;
    let lambda = f.linear_density_g_mm();
    let mut mass = 0.0;
    let mut moment = Vec3::ZERO;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let a = t.vertex(Label::from_index(i));
            let b = t.vertex(Label::from_index(j));
            let m = lambda * a.distance(b);
            mass += m;
            moment += (a + b) * (0.5 * m);
        }
    }
    for l in Label::ALL {
        mass += f.joint_mass_g;
        moment += t.vertex(l) * f.joint_mass_g;
    }
    if mass <= 0.0 {
        return Err(DesignError::ZeroFrameMass);
    }
    let com = match f.model {
        FrameModel::EdgeTubes => moment / mass,
        FrameModel::Homogeneous => t.centroid(),
    };
    Ok(FrameProperties { mass_g: mass, com })
}

/// Cuts the core region `t ∩ interface` and measures it.
pub fn core_from_plane(t: &Tetrahedron, c: &CoreSpec) -> Result<CoreProperties, DesignError> {
    let mut hs: Vec<HalfSpace> = Vec::with_capacity(5);
    for l in Label::ALL {
        hs.push(HalfSpace::new(t.face_plane(l)?));
    }
    hs.push(c.interface);
    let region = match halfspace_intersection(&hs)? {
        HalfspaceIntersection::Empty => return Err(DesignError::EmptyCore),
        HalfspaceIntersection::Bounded(r) => r,
    };
    let vc = region.volume_centroid();
    if vc.degenerate {
        return Err(DesignError::EmptyCore);
    }
    Ok(CoreProperties {
        mass_g: vc.volume_cm3() * c.material.density_g_cm3,
        com: vc.centroid,
        volume_mm3: vc.volume_mm3,
        region,
    })
}

/// Composite mass model of frame + core.
pub fn mass_model(t: &Tetrahedron, f: &FrameSpec, c: &CoreSpec) -> Result<MassModel, DesignError> {
    let frame = frame_model(t, f)?;
    let core = core_from_plane(t, c)?;
    Ok(compose(&frame, core.mass_g, core.com))
}

fn compose(frame: &FrameProperties, core_mass: f64, core_com: Point3) -> MassModel {
    let total = frame.mass_g + core_mass;
    let com = (frame.com * frame.mass_g + core_com * core_mass) / total;
    MassModel {
        frame_mass_g: frame.mass_g,
        frame_com: frame.com,
        core_mass_g: core_mass,
        core_com,
        com,
    }
}

/// Near-uniform unit directions (Fibonacci sphere).
fn sphere_directions(n: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let y = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - y * y).sqrt();
            let th = golden * i as f64;
            Vec3::new(r * th.cos(), y, r * th.sin())
        })
        .collect()
}

fn rotate_about(v: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c))
}

/// Shared geometry for the interface-plane searches: planes are anchored
/// at fraction `s` along the segment from the heavy-corner vertex (the
/// tetrahedron vertex nearest the zone centroid) to the zone centroid, with
/// a free unit normal oriented so the core side contains the heavy vertex.
struct PlaneSearch<'a> {
    frame: FrameProperties,
    zone_region: &'a ConvexPolytope,
    heavy_vertex: Point3,
    zone_centroid: Point3,
    face_halfspaces: [HalfSpace; 4],
}

/// A candidate core cut: its interface, volume and centroid.
struct CoreCut {
    interface: HalfSpace,
    volume_cm3: f64,
    com: Point3,
}

impl<'a> PlaneSearch<'a> {
    fn new(t: &Tetrahedron, f: &FrameSpec, zone: &'a LoadingZone) -> Result<Self, DesignError> {
        let zone_region = zone.region.as_ref().ok_or(DesignError::EmptyZone)?;
        let frame = frame_model(t, f)?;
        let zone_centroid = zone_region.volume_centroid().centroid;
        let heavy_vertex = Label::ALL
            .iter()
            .map(|&l| t.vertex(l))
            .min_by(|a, b| {
                a.distance(zone_centroid)
                    .partial_cmp(&b.distance(zone_centroid))
                    .unwrap()
            })
            .unwrap();
        let mut face_halfspaces = [HalfSpace::new(t.face_plane(Label::A)?); 4];
        for l in Label::ALL {
            face_halfspaces[l.index()] = HalfSpace::new(t.face_plane(l)?);
        }
        Ok(PlaneSearch {
            frame,
            zone_region,
            heavy_vertex,
            zone_centroid,
            face_halfspaces,
        })
    }

    fn cut(&self, s: f64, dir: Vec3) -> Option<CoreCut> {
        let anchor = self.heavy_vertex.lerp(self.zone_centroid, s);
        let mut normal = dir;
        if normal.dot(self.heavy_vertex - anchor) > 0.0 {
            normal = -normal;
        }
        let interface = HalfSpace::boundary_through(normal, anchor).ok()?;
        let mut hs: Vec<HalfSpace> = self.face_halfspaces.to_vec();
        hs.push(interface);
        let region = match halfspace_intersection(&hs).ok()? {
            HalfspaceIntersection::Empty => return None,
            HalfspaceIntersection::Bounded(r) => r,
        };
        let vc = region.volume_centroid();
        if vc.degenerate {
            return None;
        }
        Some(CoreCut {
            interface,
            volume_cm3: vc.volume_cm3(),
            com: vc.centroid,
        })
    }

    /// Margin of the composite com inside the zone at the given density.
    fn margin(&self, density: f64, s: f64, dir: Vec3) -> Option<(f64, HalfSpace, MassModel)> {
        let cut = self.cut(s, dir)?;
        let model = compose(&self.frame, cut.volume_cm3 * density, cut.com);
        let margin = self.zone_region.interior_distance(model.com);
        Some((margin, cut.interface, model))
    }

    /// Entry density of the plane, or a miss score (ranked by how closely
    /// the com path approaches the zone) when the path never enters it.
    /// Any hit scores below any miss.
    fn entry_score(&self, s: f64, dir: Vec3) -> Option<f64> {
        const MISS_BASE: f64 = 1e9;
        let cut = self.cut(s, dir)?;
        match entry_density(self.zone_region, &self.frame, cut.com, cut.volume_cm3) {
            Some(rho) => Some(rho),
            None => {
                let seg = cut.com - self.frame.com;
                let mut best = f64::INFINITY;
                for k in 0..=64 {
                    let p = self.frame.com + seg * (k as f64 / 64.0);
                    best = best.min(-self.zone_region.interior_distance(p));
                }
                Some(MISS_BASE + best)
            }
        }
    }
}

const ANCHOR_GRID: [f64; 13] = [
    0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95, 1.05, 1.15, 1.25,
];

/// Coarse deterministic sweep of (anchor, normal) pairs scored by `score`
/// (lower is better), returning a few distinct starts for refinement.
fn grid_starts(score: &impl Fn(f64, Vec3) -> Option<f64>, dirs: usize) -> Vec<(f64, f64, Vec3)> {
    let mut grid: Vec<(f64, f64, Vec3)> = Vec::new();
    for dir in sphere_directions(dirs) {
        for &s in &ANCHOR_GRID {
            if let Some(v) = score(s, dir) {
                grid.push((v, s, dir));
            }
        }
    }
    grid.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut starts: Vec<(f64, f64, Vec3)> = Vec::new();
    for cand in grid {
        let distinct = starts
            .iter()
            .all(|(_, s0, d0)| (cand.1 - s0).abs() > 0.15 || d0.dot(cand.2) < 0.9);
        if distinct {
            starts.push(cand);
        }
        if starts.len() >= 4 {
            break;
        }
    }
    starts
}

/// Pattern search over (anchor fraction, two tangent rotations of the
/// normal) minimizing `score`. Improvements below noise level do not count,
/// so flat landscapes terminate quickly.
fn pattern_search(
    score: &impl Fn(f64, Vec3) -> Option<f64>,
    s0: f64,
    dir0: Vec3,
) -> Option<(f64, f64, Vec3)> {
    let mut s = s0;
    let mut dir = dir0;
    let mut cur = score(s, dir)?;
    let mut ds = 0.05;
    let mut da = 0.2;
    let mut iterations = 0;
    while (ds > 1e-5 || da > 1e-5) && iterations < 1000 {
        iterations += 1;
        let seed = if dir.x.abs() < 0.9 {
            Vec3::new(1.0, 0.0, 0.0)
        } else {
            Vec3::new(0.0, 1.0, 0.0)
        };
        let e1 = dir.cross(seed).normalized().unwrap();
        let e2 = dir.cross(e1);
        let moves: [(f64, Vec3); 6] = [
            (s + ds, dir),
            ((s - ds).max(1e-3), dir),
            (s, rotate_about(dir, e1, da)),
            (s, rotate_about(dir, e1, -da)),
            (s, rotate_about(dir, e2, da)),
            (s, rotate_about(dir, e2, -da)),
        ];
        let mut improved = false;
        for (ns, ndir) in moves {
            if let Some(cand) = score(ns, ndir) {
                if cand < cur - 1e-10 * (1.0 + cur.abs()) {
                    cur = cand;
                    s = ns;
                    dir = ndir;
                    improved = true;
                }
            }
        }
        if !improved {
            ds *= 0.5;
            da *= 0.5;
        }
    }
    Some((cur, s, dir))
}

/// Searches interface planes (anchor along the heavy-vertex → zone-centroid
/// segment, free unit normal) maximizing the margin of the composite com
/// inside the zone. A coarse deterministic grid feeds a pattern-search
/// refinement; `margin_mm > 0` means the design is functional.
pub fn fit_core(
    t: &Tetrahedron,
    f: &FrameSpec,
    material: &MaterialSpec,
    zone: &LoadingZone,
) -> Result<FitResult, DesignError> {
    let space = PlaneSearch::new(t, f, zone)?;
    let density = material.density_g_cm3;
    let score = |s: f64, dir: Vec3| space.margin(density, s, dir).map(|(m, _, _)| -m);
    let starts = grid_starts(&score, 320);
    let mut best: Option<(f64, f64, Vec3)> = None;
    for (_, s0, dir0) in starts {
        if let Some(refined) = pattern_search(&score, s0, dir0) {
            if best.as_ref().is_none_or(|b| refined.0 < b.0) {
                best = Some(refined);
            }
        }
    }
    let (_, s, dir) = best.ok_or(DesignError::EmptyCore)?;
    let (margin, interface, model) = space
        .margin(density, s, dir)
        .ok_or(DesignError::EmptyCore)?;
    Ok(FitResult {
        core: CoreSpec {
            interface,
            material: material.clone(),
        },
        margin_mm: margin,
        mass_model: model,
    })
}

const DENSITY_CEILING: f64 = 1e6;
const THRESHOLD_REL_TOL: f64 = 0.005;

/// Minimal density at which a given (frame com, core com, core volume)
/// triple can place the composite com inside the zone.
///
/// As density grows, the composite com slides along the segment from the
/// frame com toward the core com: `com(w) = c_f + w (c_c − c_f)` with
/// `w = m_c / (m_f + m_c)`. The zone is convex, so the feasible `w` form an
/// interval whose entry value gives the minimal density in closed form.
fn entry_density(
    zone: &ConvexPolytope,
    frame: &FrameProperties,
    core_com: Point3,
    core_volume_cm3: f64,
) -> Option<f64> {
    let dir = core_com - frame.com;
    let mut w_lo: f64 = 0.0;
    let mut w_hi: f64 = 1.0;
    for facet in zone.facets() {
        let n = facet.plane.normal();
        let base = n.dot(frame.com) - facet.plane.offset();
        let slope = n.dot(dir);
        // Constraint: base + w·slope ≤ 0.
        if slope.abs() < 1e-300 {
            if base > 0.0 {
                return None;
            }
            continue;
        }
        let w_cross = -base / slope;
        if slope > 0.0 {
            w_hi = w_hi.min(w_cross);
        } else {
            w_lo = w_lo.max(w_cross);
        }
        if w_lo >= w_hi {
            return None;
        }
    }
    // Strict interior needs w inside [w_lo, w_hi); w = 1 is the infinite
    // density limit.
    if w_lo >= 1.0 {
        return None;
    }
    if w_lo <= 0.0 {
        return Some(0.0);
    }
    Some(frame.mass_g * w_lo / ((1.0 - w_lo) * core_volume_cm3))
}

/// Minimal core density realizing the zone, with the interface plane free.
///
/// The per-plane threshold is exact (entry density of the com path into the
/// zone), so the search optimizes planes directly instead of bisecting
/// densities. Because small zones make thin feasibility basins, the search
/// is additionally seeded from margin fits on a doubling density ladder.
pub fn min_core_density(
    t: &Tetrahedron,
    f: &FrameSpec,
    zone: &LoadingZone,
) -> Result<DensityThreshold, DesignError> {
    let space = PlaneSearch::new(t, f, zone)?;
    let score = |s: f64, dir: Vec3| space.entry_score(s, dir);

    let mut starts = grid_starts(&score, 320);

    // Seed from feasible margin fits: climb a density ladder until one
    // margin fit succeeds, then reuse its plane (and the planes of a few
    // denser fits, which may favor smaller cores).
    let mut ladder = Vec::new();
    let mut rho = 1.0;
    while rho <= DENSITY_CEILING {
        let mscore = |s: f64, dir: Vec3| space.margin(rho, s, dir).map(|(m, _, _)| -m);
        let mut found = None;
        for (neg_margin, s0, dir0) in grid_starts(&mscore, 160) {
            if neg_margin < 0.0 {
                found = Some((s0, dir0));
                break;
            }
            if let Some((neg_m, s1, dir1)) = pattern_search(&mscore, s0, dir0) {
                if neg_m < 0.0 {
                    found = Some((s1, dir1));
                    break;
                }
            }
        }
        if let Some((s0, dir0)) = found {
            ladder.push((rho, s0, dir0));
            if ladder.len() >= 3 {
                break;
            }
        }
        rho *= 2.0;
    }
    for (_, s0, dir0) in ladder {
        starts.push((f64::INFINITY, s0, dir0));
    }

    let mut best = f64::INFINITY;
    for (_, s0, dir0) in starts {
        if let Some((v, _, _)) = pattern_search(&score, s0, dir0) {
            best = best.min(v);
        }
    }
    if best > DENSITY_CEILING {
        return Ok(DensityThreshold::Unreachable);
    }
    Ok(DensityThreshold::Reachable(best))
}

/// Minimal core density with a fixed interface plane: the entry density of
/// that single plane, exactly. Reported alongside the re-optimized
/// threshold because the two answer different design questions.
pub fn min_density_fixed_interface(
    t: &Tetrahedron,
    f: &FrameSpec,
    interface: HalfSpace,
    zone: &LoadingZone,
) -> Result<DensityThreshold, DesignError> {
    let zone_region = zone.region.as_ref().ok_or(DesignError::EmptyZone)?;
    let frame = frame_model(t, f)?;
    let core = core_from_plane(
        t,
        &CoreSpec {
            interface,
            material: MaterialSpec::new("core", 1.0)?,
        },
    )?;
    match entry_density(zone_region, &frame, core.com, core.volume_mm3 / 1000.0) {
        Some(rho) if rho <= DENSITY_CEILING => Ok(DensityThreshold::Reachable(rho)),
        _ => Ok(DensityThreshold::Unreachable),
    }
}

/// Minimal uniform scale (relative to the given geometry) at which the
/// design still functions. Frame mass grows linearly with scale (fixed tube
/// cross-section) while core mass grows cubically, so the normalized
/// composite com slides monotonically from the frame com toward the core
/// com as the body grows; the feasible scales form an interval.
pub fn min_scale(
    t: &Tetrahedron,
    f: &FrameSpec,
    core: &CoreSpec,
    zone: &LoadingZone,
) -> Result<f64, DesignError> {
    let zone_region = zone.region.as_ref().ok_or(DesignError::EmptyZone)?;
    let feasible = |s: f64| -> Result<bool, DesignError> {
        let ts = t.map_vertices(|p| p * s)?;
        let cs = core.scaled_about_origin(s);
        let model = mass_model(&ts, f, &cs)?;
        let zs = zone_region.scaled_about_origin(s)?;
        Ok(zs.interior_distance(model.com) > 0.0)
    };

    let lo_bound = 1e-3_f64;
    let hi_bound = 1e3_f64;
    let steps = 73;
    let mut first_feasible = None;
    let mut prev = lo_bound;
    for k in 0..steps {
        let s = lo_bound * (hi_bound / lo_bound).powf(k as f64 / (steps - 1) as f64);
        if feasible(s)? {
            first_feasible = Some((if k == 0 { lo_bound } else { prev }, s));
            break;
        }
        prev = s;
    }
    let Some((mut lo, mut hi)) = first_feasible else {
        return Err(DesignError::NoFunctionalScale);
    };
    if lo == hi {
        return Ok(lo_bound);
    }
    while hi - lo > THRESHOLD_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// End-to-end check: composite com of the full design, then its falling
/// pattern.
pub fn verify_design(
    t: &Tetrahedron,
    f: &FrameSpec,
    core: &CoreSpec,
) -> Result<(MassModel, FallingPattern), DesignError> {
    let model = mass_model(t, f, core)?;
    let pattern = falling_pattern(t, model.com)?;
    Ok((model, pattern))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{corner_tetrahedron, regular_tetrahedron};

    fn fig_frame() -> FrameSpec {
        FrameSpec {
            tube_outer_diameter_mm: 1.0,
            tube_inner_diameter_mm: 0.5,
            material: MaterialSpec::new("carbon fibre", 1.36).unwrap(),
            joint_mass_g: 0.0,
            model: FrameModel::EdgeTubes,
        }
    }

    #[test]
    fn tube_linear_density_matches_annulus_arithmetic() {
        // π/4 · (1.0² − 0.5²) mm² × 1.36 g/cm³ ≈ 0.000801 g/mm.
        let f = fig_frame();
        let expect = PI / 4.0 * 0.75 * 1.36 / 1000.0;
        assert!((f.linear_density_g_mm() - expect).abs() < 1e-15);
        assert!((f.linear_density_g_mm() * 10.0 - 0.00801).abs() < 5e-6);
    }

    #[test]
    fn symmetric_frame_com_is_centroid() {
        let t = regular_tetrahedron(80.0);
        let frame = frame_model(&t, &fig_frame()).unwrap();
        assert!((frame.com - t.centroid()).norm() < 1e-9);
    }

    #[test]
    fn joints_only_frame_com_is_vertex_centroid() {
        let t = corner_tetrahedron(40.0);
        let mut spec = fig_frame();
        // Zero tube mass is rejected, so make it negligible instead.
        spec.tube_inner_diameter_mm = spec.tube_outer_diameter_mm * (1.0 - 1e-12);
        spec.joint_mass_g = 5.0;
        let frame = frame_model(&t, &spec).unwrap();
        let vertex_centroid = t.centroid();
        assert!((frame.com - vertex_centroid).norm() < 1e-6);
    }

    #[test]
    fn full_core_when_interface_clears_the_body() {
        let t = corner_tetrahedron(30.0);
        let core = CoreSpec {
            interface: HalfSpace::boundary_through(
                Vec3::new(1.0, 0.0, 0.0),
                Point3::new(100.0, 0.0, 0.0),
            )
            .unwrap(),
            material: MaterialSpec::new("dense", 10.0).unwrap(),
        };
        let props = core_from_plane(&t, &core).unwrap();
        assert!((props.volume_mm3 - t.volume_mm3()).abs() / t.volume_mm3() < 1e-9);
        assert!((props.mass_g - t.volume_mm3() / 1000.0 * 10.0).abs() < 1e-9);
    }

    #[test]
    fn empty_core_is_an_error() {
        let t = corner_tetrahedron(30.0);
        let core = CoreSpec {
            interface: HalfSpace::boundary_through(
                Vec3::new(-1.0, 0.0, 0.0),
                Point3::new(100.0, 0.0, 0.0),
            )
            .unwrap(),
            material: MaterialSpec::new("dense", 10.0).unwrap(),
        };
        assert!(matches!(
            core_from_plane(&t, &core),
            Err(DesignError::EmptyCore)
        ));
    }

    #[test]
    fn corner_cut_volume_matches_monte_carlo() {
        use rand::Rng;
        use rand::SeedableRng;
        let t = corner_tetrahedron(10.0);
        let core = CoreSpec {
            interface: HalfSpace::boundary_through(
                Vec3::new(1.0, 0.0, 0.0),
                Point3::new(5.0, 0.0, 0.0),
            )
            .unwrap(),
            material: MaterialSpec::new("dense", 1.0).unwrap(),
        };
        let props = core_from_plane(&t, &core).unwrap();

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(40);
        let n = 400_000;
        let mut hits = 0u64;
        for _ in 0..n {
            let p = Point3::new(
                rng.random_range(0.0..10.0),
                rng.random_range(0.0..10.0),
                rng.random_range(0.0..10.0),
            );
            if p.x + p.y + p.z <= 10.0 && p.x <= 5.0 {
                hits += 1;
            }
        }
        let box_vol = 1000.0;
        let p_hat = hits as f64 / n as f64;
        let est = box_vol * p_hat;
        let sigma = box_vol * (p_hat * (1.0 - p_hat) / n as f64).sqrt();
        assert!(
            (props.volume_mm3 - est).abs() < 3.0 * sigma,
            "volume {} vs MC {} ± {}",
            props.volume_mm3,
            est,
            sigma
        );
    }

    #[test]
    fn scaling_slides_the_com_between_frame_and_core() {
        // Frame mass grows linearly with scale, core mass cubically, so in
        // normalized coordinates the composite com approaches the frame com
        // as the body shrinks and the core com as it grows.
        let t = corner_tetrahedron(30.0);
        let core = CoreSpec {
            interface: HalfSpace::boundary_through(
                Vec3::new(1.0, 0.0, 0.0),
                Point3::new(8.0, 0.0, 0.0),
            )
            .unwrap(),
            material: MaterialSpec::new("dense", 14.15).unwrap(),
        };
        let frame = fig_frame();
        let base = mass_model(&t, &frame, &core).unwrap();
        for (s, toward_core) in [(1e-3, false), (1e3, true)] {
            let ts = t.map_vertices(|p| p * s).unwrap();
            let cs = core.scaled_about_origin(s);
            let model = mass_model(&ts, &frame, &cs).unwrap();
            let com_n = model.com / s;
            let target = if toward_core {
                base.core_com
            } else {
                base.frame_com
            };
            let other = if toward_core {
                base.frame_com
            } else {
                base.core_com
            };
            assert!(
                com_n.distance(target) < 0.01 * other.distance(target),
                "scale {s}: com {com_n:?}"
            );
        }
    }

    #[test]
    fn mass_additivity_is_exact() {
        let t = corner_tetrahedron(30.0);
        let core = CoreSpec {
            interface: HalfSpace::boundary_through(
                Vec3::new(1.0, 0.0, 0.0),
                Point3::new(9.0, 0.0, 0.0),
            )
            .unwrap(),
            material: MaterialSpec::new("dense", 14.15).unwrap(),
        };
        let model = mass_model(&t, &fig_frame(), &core).unwrap();
        let total = model.total_mass_g();
        assert!(((model.frame_mass_g + model.core_mass_g) - total).abs() <= 1e-12 * total);
        // Composite com is the mass-weighted average.
        let expect =
            (model.frame_com * model.frame_mass_g + model.core_com * model.core_mass_g) / total;
        assert!((model.com - expect).norm() < 1e-12);
    }
}
