//! Scene files: a human-editable TOML description of a tetrahedron (or a
//! mesh reference), an optional centre of mass, and material/frame specs.
//! Units are explicit: lengths in mm, densities in g/cm³.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::design::{CoreSpec, DesignError, FrameModel, FrameSpec, MaterialSpec};
use crate::geometry::{GeometryError, HalfSpace, Plane, Point3, Tetrahedron, Vec3};

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("scene parse error: {0}")]
    Toml(String),
    #[error("scene must declare units = {{ length = \"mm\", density = \"g/cm3\" }}, got {got}")]
    BadUnits { got: String },
    #[error("scene needs either [tetrahedron] or [mesh]")]
    MissingBody,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("mesh parse error in {path}: line {line}: {message}")]
    Mesh {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

/// Parsed scene contents.
#[derive(Debug, Clone)]
pub struct Scene {
    pub tetrahedron: Option<Tetrahedron>,
    pub mesh: Option<Mesh>,
    pub com: Option<Point3>,
    pub frame: Option<FrameSpec>,
    pub core: Option<CoreSpecified>,
}

/// Core material, with the interface plane optional: design searches find
/// one when it is absent.
#[derive(Debug, Clone)]
pub struct CoreSpecified {
    pub material: MaterialSpec,
    pub interface: Option<HalfSpace>,
}

impl CoreSpecified {
    pub fn with_interface(&self, interface: HalfSpace) -> CoreSpec {
        CoreSpec {
            interface,
            material: self.material.clone(),
        }
    }
}

/// A triangle/polygon mesh in mm. Faces are optional (hull workflows only
/// need the points) but enable enclosed-volume computations when they form
/// a closed, consistently oriented surface.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub path: PathBuf,
    pub vertices: Vec<Point3>,
    pub faces: Vec<Vec<usize>>,
}

impl Mesh {
    /// Signed enclosed volume (mm³) and centroid via the divergence theorem,
    /// when the face list forms a closed oriented surface.
    pub fn enclosed_volume_centroid(&self) -> Option<(f64, Point3)> {
        if self.faces.is_empty() {
            return None;
        }
        // Closedness: every undirected edge used exactly twice.
        let mut counts = std::collections::BTreeMap::new();
        for f in &self.faces {
            if f.len() < 3 {
                return None;
            }
            for k in 0..f.len() {
                let a = f[k];
                let b = f[(k + 1) % f.len()];
                *counts.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
            }
        }
        if counts.values().any(|&c| c != 2) {
            return None;
        }
        let mut shift = Vec3::ZERO;
        for v in &self.vertices {
            shift += *v;
        }
        shift = shift / self.vertices.len() as f64;
        let mut volume6 = 0.0;
        let mut moment = Vec3::ZERO;
        for f in &self.faces {
            let p0 = self.vertices[f[0]] - shift;
            for w in f[1..].windows(2) {
                let p1 = self.vertices[w[0]] - shift;
                let p2 = self.vertices[w[1]] - shift;
                let v6 = crate::geometry::vec3::triple(p0, p1, p2);
                volume6 += v6;
                moment += (p0 + p1 + p2) * (v6 / 4.0);
            }
        }
        if volume6.abs() < 1e-9 {
            return None;
        }
        let centroid = shift + moment / volume6;
        Some((volume6.abs() / 6.0, centroid))
    }
}

// --- raw TOML shape -------------------------------------------------------

#[derive(Deserialize)]
struct RawScene {
    units: RawUnits,
    tetrahedron: Option<RawTetra>,
    mesh: Option<RawMesh>,
    com: Option<RawCom>,
    frame: Option<RawFrame>,
    core: Option<RawCore>,
}

#[derive(Deserialize)]
struct RawUnits {
    length: String,
    density: String,
}

#[derive(Deserialize)]
struct RawTetra {
    a: [f64; 3],
    b: [f64; 3],
    c: [f64; 3],
    d: [f64; 3],
}

#[derive(Deserialize)]
struct RawMesh {
    path: String,
}

#[derive(Deserialize)]
struct RawCom {
    position: [f64; 3],
}

#[derive(Deserialize)]
struct RawMaterial {
    name: String,
    density: f64,
}

#[derive(Deserialize)]
struct RawFrame {
    tube_outer_diameter: f64,
    tube_inner_diameter: f64,
    material: RawMaterial,
    #[serde(default)]
    joint_mass: f64,
    #[serde(default)]
    model: Option<String>,
}

#[derive(Deserialize)]
struct RawCore {
    material: RawMaterial,
    interface: Option<RawPlane>,
}

#[derive(Deserialize)]
struct RawPlane {
    normal: [f64; 3],
    offset: f64,
}

fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

/// Loads and validates a scene file. Mesh references resolve relative to
/// the scene file's directory.
pub fn load_scene(path: &Path) -> Result<Scene, SceneError> {
    let text = fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: RawScene = toml::from_str(&text).map_err(|e| SceneError::Toml(e.to_string()))?;

    if raw.units.length != "mm" || raw.units.density != "g/cm3" {
        return Err(SceneError::BadUnits {
            got: format!(
                "length = {:?}, density = {:?}",
                raw.units.length, raw.units.density
            ),
        });
    }

    let tetrahedron = match &raw.tetrahedron {
        Some(t) => Some(Tetrahedron::new([
            vec3(t.a),
            vec3(t.b),
            vec3(t.c),
            vec3(t.d),
        ])?),
        None => None,
    };
    let mesh = match &raw.mesh {
        Some(m) => {
            let mesh_path = path.parent().unwrap_or(Path::new(".")).join(&m.path);
            Some(load_mesh(&mesh_path)?)
        }
        None => None,
    };
    if tetrahedron.is_none() && mesh.is_none() {
        return Err(SceneError::MissingBody);
    }

    let frame = match raw.frame {
        Some(f) => {
            let model = match f.model.as_deref() {
                None | Some("edge-tubes") => FrameModel::EdgeTubes,
                Some("homogeneous") => FrameModel::Homogeneous,
                Some(other) => {
                    return Err(SceneError::Toml(format!(
                        "frame.model must be \"edge-tubes\" or \"homogeneous\", got {other:?}"
                    )))
                }
            };
            let spec = FrameSpec {
                tube_outer_diameter_mm: f.tube_outer_diameter,
                tube_inner_diameter_mm: f.tube_inner_diameter,
                material: MaterialSpec::new(f.material.name, f.material.density)?,
                joint_mass_g: f.joint_mass,
                model,
            };
            spec.validate()?;
            Some(spec)
        }
        None => None,
    };

    let core = match raw.core {
        Some(c) => {
            let interface = match c.interface {
                Some(p) => Some(HalfSpace::new(Plane::new(vec3(p.normal), p.offset)?)),
                None => None,
            };
            Some(CoreSpecified {
                material: MaterialSpec::new(c.material.name, c.material.density)?,
                interface,
            })
        }
        None => None,
    };

    Ok(Scene {
        tetrahedron,
        mesh,
        com: raw.com.map(|c| vec3(c.position)),
        frame,
        core,
    })
}

/// Loads an OFF or OBJ mesh (chosen by file extension; OFF when ambiguous).
pub fn load_mesh(path: &Path) -> Result<Mesh, SceneError> {
    let text = fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    let (vertices, faces) = if ext == "obj" {
        parse_obj(&text, path)?
    } else {
        parse_off(&text, path)?
    };
    Ok(Mesh {
        path: path.to_path_buf(),
        vertices,
        faces,
    })
}

fn mesh_err(path: &Path, line: usize, message: impl Into<String>) -> SceneError {
    SceneError::Mesh {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_off(text: &str, path: &Path) -> Result<(Vec<Point3>, Vec<Vec<usize>>), SceneError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines
        .next()
        .ok_or_else(|| mesh_err(path, 0, "empty file"))?;
    if header != "OFF" {
        return Err(mesh_err(
            path,
            ln,
            format!("expected OFF header, got {header:?}"),
        ));
    }
    let (ln, counts) = lines
        .next()
        .ok_or_else(|| mesh_err(path, ln, "missing counts"))?;
    let nums: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| mesh_err(path, ln, e.to_string()))?;
    if nums.len() < 2 {
        return Err(mesh_err(path, ln, "counts line needs at least V and F"));
    }
    let (nv, nf) = (nums[0], nums[1]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| mesh_err(path, 0, "unexpected end of file"))?;
        let coords: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| mesh_err(path, ln, e.to_string()))?;
        if coords.len() != 3 {
            return Err(mesh_err(path, ln, "vertex line needs 3 coordinates"));
        }
        vertices.push(Point3::new(coords[0], coords[1], coords[2]));
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| mesh_err(path, 0, "unexpected end of file"))?;
        let idx: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| mesh_err(path, ln, e.to_string()))?;
        if idx.is_empty() || idx.len() != idx[0] + 1 {
            return Err(mesh_err(path, ln, "face line count mismatch"));
        }
        let face: Vec<usize> = idx[1..].to_vec();
        if face.iter().any(|&i| i >= vertices.len()) {
            return Err(mesh_err(path, ln, "face index out of bounds"));
        }
        faces.push(face);
    }
    Ok((vertices, faces))
}

fn parse_obj(text: &str, path: &Path) -> Result<(Vec<Point3>, Vec<Vec<usize>>), SceneError> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let coords: Vec<f64> = tokens
                    .map(|t| t.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| mesh_err(path, ln, e.to_string()))?;
                if coords.len() < 3 {
                    return Err(mesh_err(path, ln, "v line needs 3 coordinates"));
                }
                vertices.push(Point3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let mut face = Vec::new();
                for tok in tokens {
                    let first = tok.split('/').next().unwrap_or("");
                    let idx: i64 = first
                        .parse()
                        .map_err(|_| mesh_err(path, ln, "bad face index"))?;
                    let resolved = if idx > 0 {
                        (idx - 1) as usize
                    } else if idx < 0 {
                        let back = vertices.len() as i64 + idx;
                        if back < 0 {
                            return Err(mesh_err(path, ln, "face index out of bounds"));
                        }
                        back as usize
                    } else {
                        return Err(mesh_err(path, ln, "face index cannot be 0"));
                    };
                    if resolved >= vertices.len() {
                        return Err(mesh_err(path, ln, "face index out of bounds"));
                    }
                    face.push(resolved);
                }
                if face.len() < 3 {
                    return Err(mesh_err(path, ln, "face needs at least 3 vertices"));
                }
                faces.push(face);
            }
            _ => {} // normals, texcoords, groups, materials: ignored
        }
    }
    Ok((vertices, faces))
}
