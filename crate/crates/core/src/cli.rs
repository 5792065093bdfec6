//! Command-line surface: `analyze`, `zones`, `simulate`, `design`, `hull`.
//! Reports are deterministic key/value trees (or tables where a table reads
//! better); exit codes distinguish geometric degeneracy (1), parse errors
//! (2) and infeasible designs (3).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::design::{
    fit_core, mass_model, min_core_density, min_density_fixed_interface, min_scale, verify_design,
    CoreSpec, DensityThreshold, DesignError, MaterialSpec,
};
use crate::geometry::{convex_hull, GeometryError, Label, Point3, Tetrahedron};
use crate::pattern::parse_pattern;
use crate::report::{fmt_f, fmt_point, fmt_volume_cm3, render_table, Node, Report};
use crate::scene::{load_scene, Scene, SceneError};
use crate::tipping::{
    facet_stability, falling_pattern, obtuse_paths, tumble_sequence, tumble_tetra, Stability,
    TippingError, TumbleEnd,
};
use crate::zones::{enumerate_all_pattern_zones, enumerate_zones, loading_zone, LoadingZone};

#[derive(Debug, Parser)]
#[command(
    name = "monotet",
    about = "Stability, tipping and two-material design for convex polyhedra",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dihedral angles, obtuse paths and loadability of a tetrahedron scene.
    Analyze(SceneArgs),
    /// Loading zones per falling pattern, with volumes in cm³.
    Zones(ZonesArgs),
    /// Quasi-static tumble traces from each starting face.
    Simulate(SimulateArgs),
    /// Fit a dense core behind a planar interface into a loading zone.
    Design(DesignArgs),
    /// Convex hull of a mesh and tumble outcomes on the hull.
    Hull(SceneArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tree,
    Table,
}

#[derive(Debug, Args)]
pub struct SceneArgs {
    /// Scene file (TOML with a `[tetrahedron]` or `[mesh]` block).
    #[arg(long)]
    pub scene: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Tree)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ZonesArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Enumerate every successor map, not only chain patterns along obtuse
    /// paths.
    #[arg(long)]
    pub all_patterns: bool,
    /// Validate each zone with this many uniform interior samples.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Seed for all Monte Carlo paths.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Starting face (A, B, C, D); all four when omitted.
    #[arg(long)]
    pub start: Option<String>,
    /// Centre of mass "x,y,z" in mm; defaults to the scene com, then the
    /// centroid.
    #[arg(long)]
    pub com: Option<String>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Target falling pattern, e.g. "B->A->D<-C"; defaults to the largest
    /// Type I zone.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Core density in g/cm³, overriding the scene's core material.
    #[arg(long)]
    pub density: Option<f64>,
}

/// CLI failure modes, keyed to exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: unreadable or unparseable input.
    Parse(String),
    /// Exit 1: geometric degeneracy.
    Geometry(String),
    /// Exit 3: no functional design.
    Infeasible(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Geometry(m) => write!(f, "geometry error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible design: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Geometry(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl From<SceneError> for CliError {
    fn from(e: SceneError) -> Self {
        match e {
            SceneError::Geometry(g) => CliError::Geometry(g.to_string()),
            SceneError::Design(d) => design_error(d),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Geometry(e.to_string())
    }
}

impl From<TippingError> for CliError {
    fn from(e: TippingError) -> Self {
        CliError::Geometry(e.to_string())
    }
}

impl From<crate::zones::ZoneError> for CliError {
    fn from(e: crate::zones::ZoneError) -> Self {
        CliError::Geometry(e.to_string())
    }
}

fn design_error(e: DesignError) -> CliError {
    match e {
        DesignError::Geometry(g) => CliError::Geometry(g.to_string()),
        DesignError::Tipping(t) => CliError::Geometry(t.to_string()),
        DesignError::EmptyZone | DesignError::NoFunctionalScale | DesignError::EmptyCore => {
            CliError::Infeasible(e.to_string())
        }
        other => CliError::Parse(other.to_string()),
    }
}

/// Runs a parsed command and returns the rendered report.
pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Zones(args) => zones(args),
        Command::Simulate(args) => simulate(args),
        Command::Design(args) => design(args),
        Command::Hull(args) => hull(args),
    }
}

fn require_tetra(scene: &Scene) -> Result<Tetrahedron, CliError> {
    scene
        .tetrahedron
        .ok_or_else(|| CliError::Parse("scene has no [tetrahedron] block".into()))
}

fn analyze(args: SceneArgs) -> Result<String, CliError> {
    let scene = load_scene(&args.scene)?;
    let t = require_tetra(&scene)?;
    let mut report = Report::new();

    let mut body = Node::group("tetrahedron");
    for l in Label::ALL {
        body.add(
            format!("vertex_{}", l.to_string().to_lowercase()),
            fmt_point(t.vertex(l)),
        );
    }
    body.add("volume_mm3", fmt_f(t.volume_mm3(), 4));
    body.add("volume_cm3", fmt_volume_cm3(t.volume_mm3()));
    body.add("centroid_mm", fmt_point(t.centroid()));
    report.push(body);

    let mut angles = Node::group("dihedral_angles_deg");
    for (edge, angle) in t.dihedral_angles()? {
        angles.add(edge.to_string(), fmt_f(angle, 4));
    }
    report.push(angles);

    let paths = obtuse_paths(&t)?;
    let mut pnode = Node::group("obtuse_paths");
    pnode.add("count", paths.len().to_string());
    for (i, p) in paths.iter().enumerate() {
        pnode.add(format!("path_{i}"), p.to_string());
    }
    pnode.add("loadable", (!paths.is_empty()).to_string());
    report.push(pnode);

    Ok(report.render())
}

fn zone_node(i: usize, zone: &LoadingZone) -> Node {
    let mut n = Node::group(format!("zone_{i}"));
    n.add("pattern", zone.pattern.to_string());
    n.add(
        "type",
        zone.zone_type
            .map_or_else(|| "-".to_string(), |t| t.to_string()),
    );
    n.add("volume_cm3", fmt_volume_cm3(zone.volume_mm3));
    n.add("volume_mm3", fmt_f(zone.volume_mm3, 4));
    if let Some(region) = &zone.region {
        n.add("region_vertices", region.vertices().len().to_string());
        for (k, v) in region.vertices().iter().enumerate() {
            n.add(format!("vertex_{k}"), fmt_point(*v));
        }
    }
    n
}

fn zones(args: ZonesArgs) -> Result<String, CliError> {
    let scene = load_scene(&args.scene.scene)?;
    let t = require_tetra(&scene)?;
    let report_data = enumerate_zones(&t)?;

    let zones: Vec<LoadingZone> = if args.all_patterns {
        enumerate_all_pattern_zones(&t)?
    } else {
        report_data.zones.clone()
    };

    if args.scene.format == Format::Table {
        let rows: Vec<Vec<String>> = zones
            .iter()
            .map(|z| {
                vec![
                    z.pattern.to_string(),
                    z.zone_type
                        .map_or_else(|| "-".to_string(), |t| t.to_string()),
                    format!("{} cm3", fmt_volume_cm3(z.volume_mm3)),
                ]
            })
            .collect();
        let mut out = render_table(
            &["Falling pattern", "Type", "Volume of loading zone"],
            &rows,
        );
        if rows.is_empty() {
            out.push_str("(no loading zones: the tetrahedron is not loadable)\n");
        }
        out.push_str(&format!(
            "Volume of entire tetrahedron is {} cm3\n",
            fmt_volume_cm3(report_data.tetra_volume_mm3)
        ));
        return Ok(out);
    }

    let mut report = Report::new();
    let mut head = Node::group("tetrahedron");
    head.add("volume_cm3", fmt_volume_cm3(report_data.tetra_volume_mm3));
    head.add("loadable", report_data.loadable.to_string());
    let mut paths = String::new();
    for (i, p) in report_data.paths.iter().enumerate() {
        if i > 0 {
            paths.push_str(", ");
        }
        paths.push_str(&p.to_string());
    }
    head.add(
        "obtuse_paths",
        if paths.is_empty() { "-".into() } else { paths },
    );
    report.push(head);

    let mut znode = Node::group("zones");
    znode.add("count", zones.len().to_string());
    for (i, zone) in zones.iter().enumerate() {
        znode.push(zone_node(i, zone));
    }
    report.push(znode);

    if let Some(samples) = args.samples {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let mut vnode = Node::group("validation");
        vnode.add("samples_per_zone", samples.to_string());
        vnode.add("seed", args.seed.to_string());
        for (i, zone) in zones.iter().enumerate() {
            let Some(region) = &zone.region else { continue };
            let mut agree = 0u64;
            let mut marginal = 0u64;
            for _ in 0..samples {
                let p = region.sample_uniform(&mut rng);
                if region.interior_distance(p) < 1e-7 * t.diameter() {
                    marginal += 1;
                    continue;
                }
                match falling_pattern(&t, p) {
                    Ok(got) if got == zone.pattern => agree += 1,
                    Ok(_) => {}
                    Err(_) => marginal += 1,
                }
            }
            let mut sub = Node::group(format!("zone_{i}"));
            sub.add("agree", agree.to_string());
            sub.add("marginal_skipped", marginal.to_string());
            sub.add("disagree", (samples - agree - marginal).to_string());
            vnode.push(sub);
        }
        report.push(vnode);
    }
    Ok(report.render())
}

fn parse_com(s: &str) -> Result<Point3, CliError> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Parse(format!("bad --com: {e}")))?;
    if parts.len() != 3 {
        return Err(CliError::Parse(
            "--com needs three comma-separated numbers".into(),
        ));
    }
    Ok(Point3::new(parts[0], parts[1], parts[2]))
}

fn simulate(args: SimulateArgs) -> Result<String, CliError> {
    let scene = load_scene(&args.scene.scene)?;
    let t = require_tetra(&scene)?;
    let com = match &args.com {
        Some(s) => parse_com(s)?,
        None => scene.com.unwrap_or_else(|| t.centroid()),
    };
    let starts: Vec<Label> = match &args.start {
        Some(s) => vec![Label::parse(s)
            .ok_or_else(|| CliError::Parse(format!("bad --start {s:?}; use A, B, C or D")))?],
        None => Label::ALL.to_vec(),
    };

    let mut report = Report::new();
    let mut head = Node::group("simulate");
    head.add("com_mm", fmt_point(com));
    report.push(head);
    for start in starts {
        let trace = tumble_tetra(&t, com, start)?;
        let mut node = Node::group(format!("from_{start}"));
        let faces: Vec<String> = trace.steps.iter().map(|s| s.face.to_string()).collect();
        node.add("faces", faces.join(" -> "));
        for (i, step) in trace.steps.iter().enumerate() {
            node.add(format!("height_{i}_mm"), fmt_f(step.height_mm, 4));
        }
        node.add(
            "end",
            match trace.end {
                TumbleEnd::Rested => "rested",
                TumbleEnd::Ambiguous => "ambiguous",
            },
        );
        report.push(node);
    }
    Ok(report.render())
}

fn design(args: DesignArgs) -> Result<String, CliError> {
    let scene = load_scene(&args.scene.scene)?;
    let t = require_tetra(&scene)?;
    let frame = scene
        .frame
        .clone()
        .ok_or_else(|| CliError::Parse("scene has no [frame] block".into()))?;
    let core_material = match (&scene.core, args.density) {
        (Some(c), None) => c.material.clone(),
        (Some(c), Some(d)) => {
            MaterialSpec::new(c.material.name.clone(), d).map_err(design_error)?
        }
        (None, Some(d)) => MaterialSpec::new("core", d).map_err(design_error)?,
        (None, None) => {
            return Err(CliError::Parse(
                "scene has no [core] block and no --density given".into(),
            ))
        }
    };

    let zone_report = enumerate_zones(&t)?;
    let target: LoadingZone = match &args.pattern {
        Some(s) => {
            let p = parse_pattern(s).map_err(|e| CliError::Parse(format!("bad --pattern: {e}")))?;
            loading_zone(&t, &p)?
        }
        None => zone_report
            .zones
            .iter()
            .find(|z| z.zone_type == Some(crate::zones::ZoneType::I))
            .cloned()
            .ok_or_else(|| CliError::Infeasible("no nonempty Type I zone".into()))?,
    };
    if target.is_empty() {
        return Err(CliError::Infeasible(format!(
            "loading zone of {} is empty",
            target.pattern
        )));
    }

    // A scene-specified interface plane is verified as given; otherwise the
    // interface is fitted to maximize the margin.
    let fixed_interface = scene.core.as_ref().and_then(|c| c.interface);
    let (core, margin, interface_source) = match fixed_interface {
        Some(interface) => {
            let core = CoreSpec {
                interface,
                material: core_material.clone(),
            };
            let model = mass_model(&t, &frame, &core).map_err(design_error)?;
            let margin = target
                .region
                .as_ref()
                .map(|r| r.interior_distance(model.com))
                .unwrap_or(f64::NEG_INFINITY);
            (core, margin, "scene")
        }
        None => {
            let fit = fit_core(&t, &frame, &core_material, &target).map_err(design_error)?;
            (fit.core, fit.margin_mm, "fitted")
        }
    };
    let (model, pattern) = verify_design(&t, &frame, &core).map_err(design_error)?;

    let mut report = Report::new();
    let mut head = Node::group("design");
    head.add("target_pattern", target.pattern.to_string());
    head.add("target_zone_cm3", fmt_volume_cm3(target.volume_mm3));
    head.add("core_material", core_material.name.clone());
    head.add("core_density_g_cm3", fmt_f(core_material.density_g_cm3, 4));
    report.push(head);

    let mut fnode = Node::group("fit");
    fnode.add("interface_source", interface_source);
    fnode.add("margin_mm", fmt_f(margin, 6));
    fnode.add("functional", (margin > 0.0).to_string());
    fnode.add("interface_normal", fmt_point(core.interface.plane.normal()));
    fnode.add(
        "interface_offset_mm",
        fmt_f(core.interface.plane.offset(), 6),
    );
    report.push(fnode);

    let mut mnode = Node::group("mass_model");
    mnode.add("frame_mass_g", fmt_f(model.frame_mass_g, 4));
    mnode.add("frame_com_mm", fmt_point(model.frame_com));
    mnode.add("core_mass_g", fmt_f(model.core_mass_g, 4));
    mnode.add("core_com_mm", fmt_point(model.core_com));
    mnode.add("total_mass_g", fmt_f(model.total_mass_g(), 4));
    mnode.add("com_mm", fmt_point(model.com));
    report.push(mnode);

    let mut vnode = Node::group("verify");
    vnode.add("pattern", pattern.to_string());
    let stable: Vec<String> = pattern
        .stable_faces()
        .iter()
        .map(|l| l.to_string())
        .collect();
    vnode.add("stable_faces", stable.join(", "));
    vnode.add("monostable", pattern.is_monostable().to_string());
    vnode.add("matches_target", (pattern == target.pattern).to_string());
    report.push(vnode);

    let mut tnode = Node::group("thresholds");
    match min_core_density(&t, &frame, &target).map_err(design_error)? {
        DensityThreshold::Reachable(d) => {
            tnode.add("min_core_density_g_cm3", fmt_f(d, 4));
        }
        DensityThreshold::Unreachable => {
            tnode.add("min_core_density_g_cm3", "unreachable");
        }
    }
    match min_density_fixed_interface(&t, &frame, core.interface, &target).map_err(design_error)? {
        DensityThreshold::Reachable(d) => {
            tnode.add("min_density_fixed_interface_g_cm3", fmt_f(d, 4));
        }
        DensityThreshold::Unreachable => {
            tnode.add("min_density_fixed_interface_g_cm3", "unreachable");
        }
    }
    match min_scale(&t, &frame, &core, &target) {
        Ok(s) => {
            tnode.add("min_scale", fmt_f(s, 4));
        }
        Err(DesignError::NoFunctionalScale) => {
            tnode.add("min_scale", "none in [1e-3, 1e3]");
        }
        Err(e) => return Err(design_error(e)),
    }
    report.push(tnode);

    if margin <= 0.0 {
        return Err(CliError::Infeasible(format!(
            "best margin {} mm; report:\n{}",
            fmt_f(margin, 6),
            report.render()
        )));
    }
    Ok(report.render())
}

fn hull(args: SceneArgs) -> Result<String, CliError> {
    let scene = load_scene(&args.scene)?;
    let (points, source): (Vec<Point3>, String) = match (&scene.mesh, &scene.tetrahedron) {
        (Some(mesh), _) => (mesh.vertices.clone(), format!("{}", mesh.path.display())),
        (None, Some(t)) => (t.vertices().to_vec(), "tetrahedron".into()),
        (None, None) => {
            return Err(CliError::Parse(
                "scene has no [mesh] or [tetrahedron]".into(),
            ))
        }
    };
    let hull = convex_hull(&points)?;
    let hull_vc = hull.volume_centroid();

    let (com, com_source) = if let Some(c) = scene.com {
        (c, "scene")
    } else if let Some((_, c)) = scene
        .mesh
        .as_ref()
        .and_then(|m| m.enclosed_volume_centroid())
    {
        (c, "mesh volume centroid")
    } else {
        (hull_vc.centroid, "hull centroid")
    };

    let mut report = Report::new();
    let mut head = Node::group("hull");
    head.add("source", source);
    head.add("input_points", points.len().to_string());
    head.add("hull_vertices", hull.vertices().len().to_string());
    head.add("hull_facets", hull.facets().len().to_string());
    head.add("hull_volume_mm3", fmt_f(hull_vc.volume_mm3, 4));
    head.add("hull_volume_cm3", fmt_volume_cm3(hull_vc.volume_mm3));
    head.add("hull_centroid_mm", fmt_point(hull_vc.centroid));
    if let Some((v, c)) = scene
        .mesh
        .as_ref()
        .and_then(|m| m.enclosed_volume_centroid())
    {
        head.add("mesh_volume_mm3", fmt_f(v, 4));
        head.add("mesh_centroid_mm", fmt_point(c));
    }
    head.add("com_mm", fmt_point(com));
    head.add("com_source", com_source);
    report.push(head);

    let mut stable_count = 0;
    let mut tumbles = Node::group("tumble");
    for facet in 0..hull.facets().len() {
        if facet_stability(&hull, com, facet)? == Stability::Stable {
            stable_count += 1;
        }
        let trace = tumble_sequence(&hull, com, facet)?;
        let mut node = Node::group(format!("from_facet_{facet}"));
        let faces: Vec<String> = trace.steps.iter().map(|s| s.face.to_string()).collect();
        node.add("facets", faces.join(" -> "));
        node.add(
            "rest",
            match trace.end {
                TumbleEnd::Rested => trace.steps.last().unwrap().face.to_string(),
                TumbleEnd::Ambiguous => "ambiguous".into(),
            },
        );
        node.add(
            "final_height_mm",
            fmt_f(trace.steps.last().unwrap().height_mm, 4),
        );
        tumbles.push(node);
    }
    let mut snode = Node::group("stability");
    snode.add("stable_facets", stable_count.to_string());
    snode.add("total_facets", hull.facets().len().to_string());
    report.push(snode);
    report.push(tumbles);
    Ok(report.render())
}
