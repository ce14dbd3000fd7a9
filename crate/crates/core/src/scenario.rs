//! Scenario-driven pipeline: declarative JSON input, dependency-ordered task
//! execution, a versioned deterministic JSON report, and plot-ready CSV
//! traces.

use crate::convgeo::{face_lattice, weyl_orbit_polytope, Polytope};
use crate::error::{Error, Result};
use crate::faceatlas::{casselman_correspondence, enumerate_mu_connected, face_from_subset, sandwich_check};
use crate::flowlab::{integrate_norm_flow, stratification_probe, DEFAULT_GRAD_TOL, DEFAULT_STEP, DEFAULT_T_MAX};
use crate::gradmap::{
    beta_profile, flow_limit, flow_point, gradient_map, integrate_beta_flow, mu_a, stratum_index, FlowTrace,
    ProjectivePoint,
};
use crate::liealg::{
    beta_for_subset, cartan_split, families, maximal_abelian, restricted_roots, weyl_group, LieAlgebraRep,
};
use crate::matkernel::{norm, Matrix};
use crate::repspace::{adjoint_rep, sym_power_rep, weights};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Built-in group/representation presets.
pub const PRESETS: [(&str, &str); 7] = [
    ("sl2-std", "special linear rank one, standard action on R^2"),
    ("sl2-sym2", "special linear rank one, symmetric square on R^3"),
    ("sl3-std", "special linear rank two, standard action on R^3"),
    ("sl3-sym2", "special linear rank two, symmetric square on R^6"),
    ("sl3-adj", "special linear rank two, adjoint action on R^8"),
    ("so21-std", "indefinite orthogonal signature (2,1), standard action on R^3"),
    ("sp4-std", "symplectic rank two, standard action on R^4"),
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Preset(String),
    Explicit { generators: Vec<Vec<Vec<f64>>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepSpec {
    Kind(String),
    SymPower { sym_power: usize },
}

impl Default for RepSpec {
    fn default() -> Self {
        RepSpec::Kind("standard".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Roots,
    Weights,
    Polytope,
    Faces,
    Atlas,
    Flow,
    Normflow,
    Strata,
}

impl Task {
    pub const ALL: [Task; 8] = [
        Task::Roots,
        Task::Weights,
        Task::Polytope,
        Task::Faces,
        Task::Atlas,
        Task::Flow,
        Task::Normflow,
        Task::Strata,
    ];

    /// Tasks this task cannot run without.
    fn dependencies(self) -> &'static [Task] {
        match self {
            Task::Roots => &[],
            Task::Weights => &[Task::Roots],
            Task::Polytope => &[Task::Weights],
            Task::Faces => &[Task::Polytope],
            Task::Atlas => &[Task::Polytope],
            Task::Flow => &[Task::Weights],
            Task::Normflow => &[Task::Weights],
            Task::Strata => &[Task::Weights],
        }
    }
}

fn default_samples() -> usize {
    200
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub group: GroupSpec,
    #[serde(default)]
    pub representation: RepSpec,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output_dir: Option<String>,
}

impl Scenario {
    pub fn from_json(text: &str) -> std::result::Result<Scenario, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tasks.is_empty() {
            return Err(Error::InvalidInput("scenario lists no tasks".into()));
        }
        if let GroupSpec::Preset(name) = &self.group {
            if !PRESETS.iter().any(|(p, _)| p == name) {
                return Err(Error::InvalidInput(format!("unknown preset '{}'", name)));
            }
        }
        if self.samples == 0 {
            return Err(Error::InvalidInput("samples must be positive".into()));
        }
        Ok(())
    }

    fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    pub fn group_label(&self) -> String {
        match &self.group {
            GroupSpec::Preset(name) => name.clone(),
            GroupSpec::Explicit { generators } => format!("explicit({} generators)", generators.len()),
        }
    }

    pub fn representation_label(&self) -> String {
        match &self.representation {
            RepSpec::Kind(k) => k.clone(),
            RepSpec::SymPower { sym_power } => format!("sym_power {}", sym_power),
        }
    }
}

/// Build the preset realization by name.
pub fn preset_algebra(name: &str) -> Result<LieAlgebraRep> {
    match name {
        "sl2-std" => LieAlgebraRep::new(2, families::sl(2)),
        "sl2-sym2" => sym_power_rep(&LieAlgebraRep::new(2, families::sl(2))?, 2),
        "sl3-std" => LieAlgebraRep::new(3, families::sl(3)),
        "sl3-sym2" => sym_power_rep(&LieAlgebraRep::new(3, families::sl(3))?, 2),
        "sl3-adj" => adjoint_rep(&LieAlgebraRep::new(3, families::sl(3))?),
        "so21-std" => LieAlgebraRep::new(3, families::so21()),
        "sp4-std" => LieAlgebraRep::new(4, families::sp4()),
        _ => Err(Error::InvalidInput(format!("unknown preset '{}'", name))),
    }
}

/// Realize the scenario's algebra: preset or explicit generators, then the
/// requested representation on top.
pub fn build_algebra(scenario: &Scenario) -> Result<LieAlgebraRep> {
    let base = match &scenario.group {
        GroupSpec::Preset(name) => preset_algebra(name)?,
        GroupSpec::Explicit { generators } => {
            if generators.is_empty() {
                return Err(Error::InvalidInput("explicit group needs generators".into()));
            }
            let n = generators[0].len();
            let mats: Vec<Matrix> = generators.iter().map(|g| Matrix::from_rows(g)).collect();
            LieAlgebraRep::new(n, mats)?
        }
    };
    match &scenario.representation {
        RepSpec::Kind(k) if k == "standard" => Ok(base),
        RepSpec::Kind(k) => Err(Error::InvalidInput(format!("unknown representation kind '{}'", k))),
        RepSpec::SymPower { sym_power } => sym_power_rep(&base, *sym_power),
    }
}

/// One named pass/fail verdict inside a report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootsSection {
    pub count: usize,
    pub zero_space_dim: usize,
    pub base_size: usize,
    pub weyl_order: usize,
    pub multiplicities: Vec<usize>,
    pub root_functionals: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightsSection {
    pub count: usize,
    pub multiplicities: Vec<usize>,
    pub mu_rho: Vec<f64>,
    pub weights: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetOut {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolytopeSection {
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<FacetOut>,
    pub face_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceSubsetOut {
    pub subset: Vec<usize>,
    pub saturation: Vec<usize>,
    pub y0: Vec<f64>,
    pub y1: Vec<f64>,
    pub face_vertex_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasClassOut {
    pub subset: Vec<usize>,
    pub face_vertices: Vec<usize>,
    pub orbit_size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichOut {
    pub subset: Vec<usize>,
    pub saturation: Vec<usize>,
    pub dim_lower: usize,
    pub dim_stab: usize,
    pub dim_upper: usize,
    pub lower_residual: f64,
    pub upper_residual: f64,
    pub irreducible: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasSection {
    pub matched: bool,
    pub class_count: usize,
    pub classes: Vec<AtlasClassOut>,
    pub sandwiches: Vec<SandwichOut>,
    pub diff: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowSection {
    pub beta_coords: Vec<f64>,
    pub start: Vec<f64>,
    pub stratum: usize,
    pub limit: Vec<f64>,
    pub endpoint_distance: f64,
    pub reading_start: f64,
    pub reading_limit: f64,
    pub trace_csv: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormFlowSection {
    pub start: Vec<f64>,
    pub converged: bool,
    pub t_final: f64,
    pub limit: Vec<f64>,
    pub limit_norm: f64,
    pub trace_csv: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrataSection {
    pub samples: usize,
    pub min_value: f64,
    pub min_fraction: f64,
    pub non_converged: usize,
    pub histogram: Vec<(f64, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioEcho {
    pub group: String,
    pub representation: String,
    pub tasks: Vec<Task>,
    pub seed: u64,
    pub samples: usize,
}

/// The versioned scenario report. Field order is the serialization order.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub scenario: ScenarioEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<FaceSubsetOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atlas: Option<AtlasSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normflow: Option<NormFlowSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strata: Option<StrataSection>,
    pub checks: Vec<Check>,
    pub status: String,
}

/// Write a trace as CSV: header `t,value,x0..x{n-1}`, one row per step,
/// 17 significant digits, LF endings.
pub fn emit_plot_data(trace: &FlowTrace, path: &Path) -> Result<()> {
    if trace.times.is_empty() {
        return Err(Error::InvalidInput("empty trace".into()));
    }
    let n = trace.points[0].len();
    let mut out = String::new();
    out.push_str("t,value");
    for i in 0..n {
        out.push_str(&format!(",x{}", i));
    }
    out.push('\n');
    for ((t, v), p) in trace.times.iter().zip(&trace.values).zip(&trace.points) {
        out.push_str(&format!("{:.16e},{:.16e}", t, v));
        for c in p {
            out.push_str(&format!(",{:.16e}", c));
        }
        out.push('\n');
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

fn seeded_unit_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<f64> = (0..n)
            .map(|_| {
                let u1: f64 = rng.random_range(1e-12..1.0);
                let u2: f64 = rng.random();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        if norm(&v) > 1e-6 {
            return v;
        }
    }
}

fn expand_tasks(requested: &[Task]) -> Vec<Task> {
    let mut set: Vec<Task> = Vec::new();
    fn add(t: Task, set: &mut Vec<Task>) {
        for d in t.dependencies() {
            add(*d, set);
        }
        if !set.contains(&t) {
            set.push(t);
        }
    }
    for t in requested {
        add(*t, &mut set);
    }
    let mut ordered: Vec<Task> = Task::ALL.iter().copied().filter(|t| set.contains(t)).collect();
    ordered.sort();
    ordered
}

/// Execute a validated scenario, writing CSV traces into `out_dir`.
/// The report is returned, not yet written.
pub fn execute(scenario: &Scenario, out_dir: &Path) -> Result<Report> {
    scenario.validate()?;
    let alg = build_algebra(scenario)?;
    let tasks = expand_tasks(&scenario.tasks);
    let mut checks: Vec<Check> = Vec::new();
    let mut report = Report {
        schema: 1,
        scenario: ScenarioEcho {
            group: scenario.group_label(),
            representation: scenario.representation_label(),
            tasks: scenario.tasks.clone(),
            seed: scenario.seed,
            samples: scenario.samples,
        },
        roots: None,
        weights: None,
        polytope: None,
        faces: None,
        atlas: None,
        flow: None,
        normflow: None,
        strata: None,
        checks: Vec::new(),
        status: String::new(),
    };

    let cluster_tol = scenario.tolerance("cluster", 1e-8);
    let split = cartan_split(&alg)?;
    let a = maximal_abelian(&split, scenario.seed)?;
    let rs = restricted_roots(&alg, &a, cluster_tol)?;
    let w = weyl_group(&rs)?;

    if tasks.contains(&Task::Roots) {
        report.roots = Some(RootsSection {
            count: rs.roots.len(),
            zero_space_dim: rs.zero_space.len(),
            base_size: rs.base.len(),
            weyl_order: w.elements.len(),
            multiplicities: rs.roots.iter().map(|r| r.space.len()).collect(),
            root_functionals: rs.roots.iter().map(|r| r.functional.clone()).collect(),
        });
        let even = rs.roots.len() % 2 == 0;
        checks.push(Check {
            name: "roots-structure".into(),
            passed: even && !rs.base.is_empty(),
            detail: format!("{} roots, base {}, Weyl order {}", rs.roots.len(), rs.base.len(), w.elements.len()),
        });
    }

    let wd = if tasks.contains(&Task::Weights) { Some(weights(&alg, &a, &rs)?) } else { None };
    if let Some(wd) = &wd {
        report.weights = Some(WeightsSection {
            count: wd.weights.len(),
            multiplicities: wd.multiplicities(),
            mu_rho: wd.mu_rho.clone(),
            weights: wd.weights.clone(),
        });
        let dominant = rs
            .base_functionals()
            .iter()
            .all(|alpha| crate::matkernel::dot(alpha, &wd.mu_rho) >= -1e-9);
        checks.push(Check {
            name: "weights-dominant".into(),
            passed: dominant,
            detail: format!("{} weights, highest index {}", wd.weights.len(), wd.highest),
        });
    }

    let polytope: Option<Polytope> = if tasks.contains(&Task::Polytope) {
        let wd = wd.as_ref().expect("dependency order");
        Some(weyl_orbit_polytope(&w, &wd.mu_rho)?)
    } else {
        None
    };
    if let Some(p) = &polytope {
        let lattice = face_lattice(p);
        report.polytope = Some(PolytopeSection {
            ambient_dim: p.ambient_dim,
            dim: p.dim,
            vertices: p.vertices.clone(),
            facets: p.facets.iter().map(|f| FacetOut { normal: f.normal.clone(), offset: f.offset }).collect(),
            face_count: lattice.len(),
        });
        // Readings of random points must fall inside the hull.
        let mut worst: f64 = 0.0;
        let mut inside = true;
        for i in 0..50 {
            let v = seeded_unit_vector(alg.n, scenario.seed.wrapping_add(0x706f6c79).wrapping_add(i));
            let x = ProjectivePoint::new(&v)?;
            let reading = mu_a(&a, &x);
            if !p.contains(&reading, 1e-8) {
                inside = false;
            }
            for f in &p.facets {
                worst = worst.max(crate::matkernel::dot(&reading, &f.normal) - f.offset);
            }
        }
        checks.push(Check {
            name: "polytope-contains-readings".into(),
            passed: inside,
            detail: format!("worst facet excess {:.3e}", worst),
        });
    }

    if tasks.contains(&Task::Faces) {
        let wd = wd.as_ref().expect("dependency order");
        let subsets = enumerate_mu_connected(&rs, &wd.mu_rho)?;
        let mut out = Vec::new();
        for ms in &subsets {
            let face = face_from_subset(ms, &w, &rs)?;
            out.push(FaceSubsetOut {
                subset: ms.subset.clone(),
                saturation: ms.saturation.clone(),
                y0: ms.y0.clone(),
                y1: ms.y1.clone(),
                face_vertex_count: face.vertices.len(),
            });
        }
        checks.push(Check {
            name: "faces-verified".into(),
            passed: !out.is_empty(),
            detail: format!("{} connected subsets, all faces of the hull", out.len()),
        });
        report.faces = Some(out);
    }

    if tasks.contains(&Task::Atlas) {
        let wd = wd.as_ref().expect("dependency order");
        let p = polytope.as_ref().expect("dependency order");
        let atlas = casselman_correspondence(&rs, &w, &wd.mu_rho, p)?;
        let mut sandwiches = Vec::new();
        let mut all_ok = true;
        for class in &atlas.classes {
            let sw = sandwich_check(&alg, &rs, &class.subset, wd)?;
            all_ok &= sw.ok;
            sandwiches.push(SandwichOut {
                subset: sw.subset,
                saturation: sw.saturation,
                dim_lower: sw.dim_lower,
                dim_stab: sw.dim_stab,
                dim_upper: sw.dim_upper,
                lower_residual: sw.lower_residual,
                upper_residual: sw.upper_residual,
                irreducible: sw.irreducible,
                ok: sw.ok,
            });
        }
        checks.push(Check {
            name: "atlas-matched".into(),
            passed: atlas.matched,
            detail: format!("{} classes", atlas.classes.len()),
        });
        checks.push(Check {
            name: "atlas-sandwich".into(),
            passed: all_ok,
            detail: format!("{} subsets checked", sandwiches.len()),
        });
        report.atlas = Some(AtlasSection {
            matched: atlas.matched,
            class_count: atlas.classes.len(),
            classes: atlas
                .classes
                .iter()
                .map(|c| AtlasClassOut {
                    subset: c.subset.subset.clone(),
                    face_vertices: c.face.vertex_indices.clone(),
                    orbit_size: c.orbit_size,
                })
                .collect(),
            sandwiches,
            diff: atlas.diff.clone(),
        });
    }

    if tasks.contains(&Task::Flow) {
        let (coords, beta) = beta_for_subset(&rs, &[])?;
        let bp = beta_profile(&split, &beta, cluster_tol)?;
        let x0 = ProjectivePoint::new(&seeded_unit_vector(alg.n, scenario.seed ^ 0x666c_6f77))?;
        let t_end = scenario.tolerance("flow_t_end", 10.0);
        let trace = integrate_beta_flow(&beta, &x0, 0.01, t_end)?;
        let endpoint = ProjectivePoint::new(trace.points.last().unwrap())?;
        let spectral = flow_point(&bp, t_end, &x0)?;
        let endpoint_distance = endpoint.dist(&spectral);
        let limit = flow_limit(&bp, &x0)?;
        let stratum = stratum_index(&bp, &x0)?;
        let csv_name = "flow_trace.csv".to_string();
        emit_plot_data(&trace, &out_dir.join(&csv_name))?;
        let ascent = trace.values.windows(2).all(|win| win[1] >= win[0] - 1e-12);
        checks.push(Check {
            name: "flow-spectral-agreement".into(),
            passed: endpoint_distance <= 1e-6,
            detail: format!("endpoint distance {:.3e}", endpoint_distance),
        });
        checks.push(Check {
            name: "flow-ascent".into(),
            passed: ascent,
            detail: "reading nondecreasing along the flow".into(),
        });
        report.flow = Some(FlowSection {
            beta_coords: coords,
            start: x0.coords().to_vec(),
            stratum,
            limit: limit.coords().to_vec(),
            endpoint_distance,
            reading_start: crate::gradmap::mu_beta(&bp, &x0),
            reading_limit: crate::gradmap::mu_beta(&bp, &limit),
            trace_csv: csv_name,
        });
    }

    if tasks.contains(&Task::Normflow) {
        let x0 = ProjectivePoint::new(&seeded_unit_vector(alg.n, scenario.seed ^ 0x6e6f726d))?;
        let out = integrate_norm_flow(&split, &x0, DEFAULT_STEP, DEFAULT_GRAD_TOL, DEFAULT_T_MAX)?;
        let csv_name = "norm_trace.csv".to_string();
        emit_plot_data(&out.trace, &out_dir.join(&csv_name))?;
        let descent = out.trace.values.windows(2).all(|win| win[1] <= win[0] + 1e-12);
        checks.push(Check {
            name: "normflow-descent".into(),
            passed: descent,
            detail: format!("converged: {}, t = {:.2}", out.converged, out.t_final),
        });
        report.normflow = Some(NormFlowSection {
            start: x0.coords().to_vec(),
            converged: out.converged,
            t_final: out.t_final,
            limit: out.x_inf.coords().to_vec(),
            limit_norm: gradient_map(&split, &out.x_inf).frob_norm(),
            trace_csv: csv_name,
        });
    }

    if tasks.contains(&Task::Strata) {
        let n_samples = scenario.samples.max(100);
        let probe = stratification_probe(&split, n_samples, scenario.seed, scenario.tolerance("strata_cluster", 1e-4))?;
        let total: usize = probe.histogram.iter().map(|(_, c)| c).sum();
        checks.push(Check {
            name: "strata-histogram".into(),
            passed: total == probe.samples && (0.0..=1.0).contains(&probe.min_fraction),
            detail: format!("min fraction {:.3}", probe.min_fraction),
        });
        report.strata = Some(StrataSection {
            samples: probe.samples,
            min_value: probe.min_value,
            min_fraction: probe.min_fraction,
            non_converged: probe.non_converged,
            histogram: probe.histogram,
        });
    }

    report.status = if checks.iter().all(|c| c.passed) { "pass".into() } else { "fail".into() };
    report.checks = checks;
    Ok(report)
}

/// Command-line overrides applied on top of the scenario file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerances: Vec<(String, f64)>,
    pub verify: bool,
}

/// Run a scenario file end to end: parse, execute, write report.json and
/// traces, print a summary. Returns the process exit code: 0 all checks
/// passed, 1 input error, 2 check or computation failure.
pub fn run_scenario(path: &Path, overrides: &Overrides) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", path.display(), e);
            return 1;
        }
    };
    let mut scenario = match Scenario::from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {} at line {}, column {}", path.display(), e.line(), e.column());
            return 1;
        }
    };
    if let Some(seed) = overrides.seed {
        scenario.seed = seed;
    }
    if let Some(samples) = overrides.samples {
        scenario.samples = samples;
    }
    for (k, v) in &overrides.tolerances {
        scenario.tolerances.insert(k.clone(), *v);
    }
    if overrides.verify {
        scenario.tasks = Task::ALL.to_vec();
    }
    if let Err(e) = scenario.validate() {
        eprintln!("error: {}", e);
        return 1;
    }
    let out_dir = overrides
        .out
        .clone()
        .or_else(|| scenario.output_dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("error: cannot create {}: {}", out_dir.display(), e);
        return 1;
    }
    let report = match execute(&scenario, &out_dir) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return 2;
        }
    };
    let json = match serde_json::to_string_pretty(&report) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: cannot serialize report: {}", e);
            return 2;
        }
    };
    if let Err(e) = std::fs::write(out_dir.join("report.json"), json + "\n") {
        eprintln!("error: cannot write report: {}", e);
        return 1;
    }
    for c in &report.checks {
        println!("{} {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("status: {}", report.status);
    if report.status == "pass" {
        0
    } else {
        2
    }
}
