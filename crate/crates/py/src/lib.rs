//! Python bindings: labeled tetrahedra, tipping, loading zones, hulls and
//! the two-material design searches.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use monotet::design::{
    self, DensityThreshold, FrameModel, FrameSpec as CoreFrameSpec, MaterialSpec,
};
use monotet::geometry::{self, Label, Point3, Tetrahedron as CoreTetra};
use monotet::pattern::parse_pattern;
use monotet::scene;
use monotet::tipping::{self, Stability, TumbleEnd};
use monotet::zones;

fn point(t: (f64, f64, f64)) -> Point3 {
    Point3::new(t.0, t.1, t.2)
}

fn tuple3(p: Point3) -> (f64, f64, f64) {
    (p.x, p.y, p.z)
}

fn parse_label(s: &str) -> PyResult<Label> {
    Label::parse(s).ok_or_else(|| PyValueError::new_err(format!("bad face label {s:?}")))
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// A labeled tetrahedron with vertices a, b, c, d in millimetres.
#[pyclass]
#[derive(Clone)]
struct Tetrahedron {
    inner: CoreTetra,
}

#[pymethods]
impl Tetrahedron {
    #[new]
    fn new(
        a: (f64, f64, f64),
        b: (f64, f64, f64),
        c: (f64, f64, f64),
        d: (f64, f64, f64),
    ) -> PyResult<Self> {
        let inner = CoreTetra::new([point(a), point(b), point(c), point(d)]).map_err(value_err)?;
        Ok(Tetrahedron { inner })
    }

    fn vertices(&self) -> Vec<(f64, f64, f64)> {
        self.inner.vertices().into_iter().map(tuple3).collect()
    }

    fn volume_mm3(&self) -> f64 {
        self.inner.volume_mm3()
    }

    fn volume_cm3(&self) -> f64 {
        self.inner.volume_mm3() / 1000.0
    }

    fn centroid(&self) -> (f64, f64, f64) {
        tuple3(self.inner.centroid())
    }

    /// Dihedral angles in degrees, keyed by edge name ("ab", "ac", ...).
    fn dihedral_angles(&self, py: Python<'_>) -> PyResult<Py<PyDict>> {
        let out = PyDict::new(py);
        for (edge, angle) in self.inner.dihedral_angles().map_err(value_err)? {
            out.set_item(edge.to_string(), angle)?;
        }
        Ok(out.into())
    }

    /// Obtuse paths as vertex strings like "a-b-c-d".
    fn obtuse_paths(&self) -> PyResult<Vec<String>> {
        Ok(tipping::obtuse_paths(&self.inner)
            .map_err(value_err)?
            .iter()
            .map(|p| p.to_string())
            .collect())
    }

    fn __repr__(&self) -> String {
        let v = self.inner.vertices();
        format!(
            "Tetrahedron(a={:?}, b={:?}, c={:?}, d={:?})",
            tuple3(v[0]),
            tuple3(v[1]),
            tuple3(v[2]),
            tuple3(v[3])
        )
    }
}

/// Hollow-tube frame specification (diameters in mm, density in g/cm³).
#[pyclass]
#[derive(Clone)]
struct FrameSpec {
    inner: CoreFrameSpec,
}

#[pymethods]
impl FrameSpec {
    #[new]
    #[pyo3(signature = (tube_outer_diameter, tube_inner_diameter, density, joint_mass = 0.0))]
    fn new(
        tube_outer_diameter: f64,
        tube_inner_diameter: f64,
        density: f64,
        joint_mass: f64,
    ) -> PyResult<Self> {
        let inner = CoreFrameSpec {
            tube_outer_diameter_mm: tube_outer_diameter,
            tube_inner_diameter_mm: tube_inner_diameter,
            material: MaterialSpec::new("tube", density).map_err(value_err)?,
            joint_mass_g: joint_mass,
            model: FrameModel::EdgeTubes,
        };
        inner.validate().map_err(value_err)?;
        Ok(FrameSpec { inner })
    }

    fn linear_density_g_mm(&self) -> f64 {
        self.inner.linear_density_g_mm()
    }
}

/// Falling pattern of a tetrahedron with the given centre of mass, in
/// arrow notation (raises on marginal configurations).
#[pyfunction]
fn falling_pattern(t: &Tetrahedron, com: (f64, f64, f64)) -> PyResult<String> {
    Ok(tipping::falling_pattern(&t.inner, point(com))
        .map_err(runtime_err)?
        .to_string())
}

/// Faces that support rest for the given centre of mass.
#[pyfunction]
fn stable_faces(t: &Tetrahedron, com: (f64, f64, f64)) -> PyResult<Vec<String>> {
    let mut out = Vec::new();
    for face in Label::ALL {
        if tipping::face_stability(&t.inner, point(com), face).map_err(runtime_err)?
            == Stability::Stable
        {
            out.push(face.to_string());
        }
    }
    Ok(out)
}

/// Quasi-static tumble from a starting face: list of (face, com height mm).
#[pyfunction]
fn tumble(t: &Tetrahedron, com: (f64, f64, f64), start: &str) -> PyResult<Vec<(String, f64)>> {
    let trace =
        tipping::tumble_tetra(&t.inner, point(com), parse_label(start)?).map_err(runtime_err)?;
    if trace.end == TumbleEnd::Ambiguous {
        return Err(PyRuntimeError::new_err(
            "tumble hit an ambiguous configuration",
        ));
    }
    Ok(trace
        .steps
        .into_iter()
        .map(|s| (s.face.to_string(), s.height_mm))
        .collect())
}

/// Loading zones of all chain patterns along obtuse paths. Each entry is a
/// dict with pattern, type, volume_cm3 and the zone's vertices.
#[pyfunction]
fn loading_zones(py: Python<'_>, t: &Tetrahedron) -> PyResult<Vec<Py<PyDict>>> {
    let report = zones::enumerate_zones(&t.inner).map_err(runtime_err)?;
    let mut out = Vec::new();
    for zone in &report.zones {
        let d = PyDict::new(py);
        d.set_item("pattern", zone.pattern.to_string())?;
        d.set_item("type", zone.zone_type.map(|t| t.to_string()))?;
        d.set_item("volume_cm3", zone.volume_cm3())?;
        if let Some(region) = &zone.region {
            let verts: Vec<(f64, f64, f64)> =
                region.vertices().iter().copied().map(tuple3).collect();
            d.set_item("vertices", verts)?;
        }
        out.push(d.into());
    }
    Ok(out)
}

/// Convex hull of a point cloud: dict with vertices, facets (vertex index
/// cycles), volume_mm3 and centroid.
#[pyfunction]
fn convex_hull(py: Python<'_>, points: Vec<(f64, f64, f64)>) -> PyResult<Py<PyDict>> {
    let pts: Vec<Point3> = points.into_iter().map(point).collect();
    let hull = geometry::convex_hull(&pts).map_err(value_err)?;
    let vc = hull.volume_centroid();
    let d = PyDict::new(py);
    let verts: Vec<(f64, f64, f64)> = hull.vertices().iter().copied().map(tuple3).collect();
    d.set_item("vertices", verts)?;
    let facets: Vec<Vec<usize>> = hull.facets().iter().map(|f| f.vertices.clone()).collect();
    d.set_item("facets", facets)?;
    d.set_item("volume_mm3", vc.volume_mm3)?;
    d.set_item("centroid", tuple3(vc.centroid))?;
    Ok(d.into())
}

/// Fits a planar-interface core of the given density into the loading zone
/// of `pattern`. Returns a dict with the margin, interface plane, masses,
/// composite com and the verified falling pattern.
#[pyfunction]
fn fit_core(
    py: Python<'_>,
    t: &Tetrahedron,
    frame: &FrameSpec,
    density: f64,
    pattern: &str,
) -> PyResult<Py<PyDict>> {
    let p = parse_pattern(pattern).map_err(value_err)?;
    let zone = zones::loading_zone(&t.inner, &p).map_err(runtime_err)?;
    let material = MaterialSpec::new("core", density).map_err(value_err)?;
    let fit = design::fit_core(&t.inner, &frame.inner, &material, &zone).map_err(runtime_err)?;
    let (model, verified) =
        design::verify_design(&t.inner, &frame.inner, &fit.core).map_err(runtime_err)?;
    let d = PyDict::new(py);
    d.set_item("margin_mm", fit.margin_mm)?;
    d.set_item("functional", fit.margin_mm > 0.0)?;
    d.set_item(
        "interface_normal",
        tuple3(fit.core.interface.plane.normal()),
    )?;
    d.set_item("interface_offset_mm", fit.core.interface.plane.offset())?;
    d.set_item("frame_mass_g", model.frame_mass_g)?;
    d.set_item("core_mass_g", model.core_mass_g)?;
    d.set_item("com", tuple3(model.com))?;
    d.set_item("pattern", verified.to_string())?;
    Ok(d.into())
}

/// Minimal core density (g/cm³) realizing the pattern's loading zone, or
/// None when no density up to 1e6 works.
#[pyfunction]
fn min_core_density(t: &Tetrahedron, frame: &FrameSpec, pattern: &str) -> PyResult<Option<f64>> {
    let p = parse_pattern(pattern).map_err(value_err)?;
    let zone = zones::loading_zone(&t.inner, &p).map_err(runtime_err)?;
    match design::min_core_density(&t.inner, &frame.inner, &zone).map_err(runtime_err)? {
        DensityThreshold::Reachable(d) => Ok(Some(d)),
        DensityThreshold::Unreachable => Ok(None),
    }
}

/// Minimal functional scale of a fitted design relative to its given size.
#[pyfunction]
fn min_scale(t: &Tetrahedron, frame: &FrameSpec, density: f64, pattern: &str) -> PyResult<f64> {
    let p = parse_pattern(pattern).map_err(value_err)?;
    let zone = zones::loading_zone(&t.inner, &p).map_err(runtime_err)?;
    let material = MaterialSpec::new("core", density).map_err(value_err)?;
    let fit = design::fit_core(&t.inner, &frame.inner, &material, &zone).map_err(runtime_err)?;
    design::min_scale(&t.inner, &frame.inner, &fit.core, &zone).map_err(runtime_err)
}

/// Loads a scene file; returns a dict with the tetrahedron, optional frame
/// spec, optional core density, and optional com.
#[pyfunction]
fn load_scene(py: Python<'_>, path: &str) -> PyResult<Py<PyDict>> {
    let scene = scene::load_scene(std::path::Path::new(path)).map_err(value_err)?;
    let d = PyDict::new(py);
    if let Some(t) = scene.tetrahedron {
        d.set_item("tetrahedron", Tetrahedron { inner: t }.into_pyobject(py)?)?;
    }
    if let Some(f) = scene.frame {
        d.set_item("frame", FrameSpec { inner: f }.into_pyobject(py)?)?;
    }
    if let Some(c) = &scene.core {
        d.set_item("core_density", c.material.density_g_cm3)?;
        d.set_item("core_material", c.material.name.clone())?;
    }
    if let Some(com) = scene.com {
        d.set_item("com", tuple3(com))?;
    }
    if let Some(mesh) = &scene.mesh {
        let verts: Vec<(f64, f64, f64)> = mesh.vertices.iter().copied().map(tuple3).collect();
        d.set_item("mesh_vertices", verts)?;
    }
    Ok(d.into())
}

#[pymodule]
fn monotet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tetrahedron>()?;
    m.add_class::<FrameSpec>()?;
    m.add_function(wrap_pyfunction!(falling_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(stable_faces, m)?)?;
    m.add_function(wrap_pyfunction!(tumble, m)?)?;
    m.add_function(wrap_pyfunction!(loading_zones, m)?)?;
    m.add_function(wrap_pyfunction!(convex_hull, m)?)?;
    m.add_function(wrap_pyfunction!(fit_core, m)?)?;
    m.add_function(wrap_pyfunction!(min_core_density, m)?)?;
    m.add_function(wrap_pyfunction!(min_scale, m)?)?;
    m.add_function(wrap_pyfunction!(load_scene, m)?)?;
    Ok(())
}
