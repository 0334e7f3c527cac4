//! Task drivers. Every driver returns the files to write, in order, so that the
//! caller controls all I/O and outputs depend only on the configuration.

use std::fmt::Write as _;

use log::info;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use wavex_core::bessel::bessel_j_prime;
use wavex_core::branch::{branch_sqrt, eta_bound, mobius, BranchParam, Bound};
use wavex_core::coupled::{
    assemble_coupled, solve_diffraction, solve_resonance, transverse_modes, Backend, CoupledSystem, ExteriorKind,
    IncidentField, ResonanceSearch, Waveguide, Window,
};
use wavex_core::fem1d::Mesh1d;
use wavex_core::hardy::{exact_hardy_coefficients, select_pole, solve_mode_hsm, HardyBlock};
use wavex_core::interior::{assemble_interior, EndCondition, IndexProfile, InteriorMesh, InteriorModel, InteriorSystem};
use wavex_core::oracles::{IntervalModes, ModalSeries};
use wavex_core::pml::{default_rho, PmlLayer};
use wavex_core::spectrum::{disk_neumann_spectrum, interval_spectrum, BoundaryKind, ModeLabel, Spectrum};
use wavex_core::C64;

use crate::config::{self, Boundary, ConfigError, CrossSection, Geometry, Index, MethodKind, Modified, Parameter, RunConfig};

/// A failed run, mapped to an exit status by the caller.
#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Solver(String),
}

impl From<wavex_core::Error> for Failure {
    fn from(e: wavex_core::Error) -> Self {
        Failure::Solver(e.to_string())
    }
}

fn config_err(path: &str, message: impl Into<String>) -> Failure {
    Failure::Config(ConfigError {
        path: path.into(),
        message: message.into(),
    })
}

pub struct Artifact {
    pub name: String,
    pub contents: String,
}

pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// Acceptance-residual violations found in `--check` mode.
    pub violations: Vec<String>,
}

/// Residual threshold for solves and eigenpairs in `--check` mode.
pub const CHECK_RESIDUAL: f64 = 1e-8;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn fmt_f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.15e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn boundary_kind(b: Boundary) -> BoundaryKind {
    match b {
        Boundary::Neumann => BoundaryKind::Neumann,
        Boundary::Dirichlet => BoundaryKind::Dirichlet,
    }
}

pub fn cross_section_spectrum(cfg: &RunConfig, count: usize) -> Result<Spectrum, Failure> {
    let kind = boundary_kind(cfg.problem.boundary);
    Ok(match cfg.problem.cross_section {
        CrossSection::Interval { length } => interval_spectrum(kind, length, count)?,
        CrossSection::Disk { radius } => {
            if kind != BoundaryKind::Neumann {
                return Err(config_err("problem.boundary", "disk cross sections support Neumann walls only"));
            }
            disk_neumann_spectrum(radius, count)?
        }
    })
}

fn profile(cfg: &RunConfig) -> IndexProfile {
    match &cfg.problem.index {
        Index::Uniform => IndexProfile::Uniform,
        Index::Layers { layers } => IndexProfile::Layers(layers.iter().map(|l| (l[0], l[1], l[2])).collect()),
        Index::Inclusions { inclusions } => IndexProfile::Inclusions(inclusions.clone()),
    }
}

/// Uniform nodes on `[a, b]` merged with the material breakpoints inside.
fn axis_mesh(a: f64, b: f64, elements: usize, breaks: &[f64]) -> Result<Mesh1d, Failure> {
    let mut nodes: Vec<f64> = (0..=elements).map(|i| a + (b - a) * i as f64 / elements as f64).collect();
    nodes.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    nodes.sort_by(f64::total_cmp);
    let tol = 1e-12 * (b - a);
    nodes.dedup_by(|x, y| (*x - *y).abs() <= tol);
    Ok(Mesh1d::from_nodes(nodes)?)
}

fn x_breaks(index: &Index) -> Vec<f64> {
    match index {
        Index::Uniform => vec![],
        Index::Layers { layers } => layers.iter().flat_map(|l| [l[0], l[1]]).collect(),
        Index::Inclusions { inclusions } => inclusions.iter().flat_map(|q| [q[0], q[1]]).collect(),
    }
}

fn y_breaks(index: &Index) -> Vec<f64> {
    match index {
        Index::Inclusions { inclusions } => inclusions.iter().flat_map(|q| [q[2], q[3]]).collect(),
        _ => vec![],
    }
}

pub fn build_interior(cfg: &RunConfig, elements: usize, order: usize) -> Result<InteriorSystem, Failure> {
    let p = &cfg.problem;
    let index = &p.index;
    let (model, mesh) = match p.geometry {
        Geometry::Interval { a, b } => (
            InteriorModel::interval(a, b, profile(cfg), EndCondition::Interface, EndCondition::Interface),
            InteriorMesh::interval(axis_mesh(a, b, elements, &x_breaks(index))?),
        ),
        Geometry::Rectangle { a, b, height } => {
            let ny = cfg
                .discretization
                .elements_y
                .map_or(elements, |e| e.max(1) * elements / cfg.discretization.elements.max(1));
            (
                InteriorModel::duct(a, b, height, boundary_kind(p.boundary), profile(cfg)),
                InteriorMesh::rectangle(
                    axis_mesh(a, b, elements, &x_breaks(index))?,
                    axis_mesh(0.0, height, ny.max(1), &y_breaks(index))?,
                ),
            )
        }
    };
    assemble_interior(&model, &mesh, order).map_err(|e| match e {
        wavex_core::Error::InvalidParameter { name: "profile", reason } => config_err("problem.index", reason),
        e => e.into(),
    })
}

/// Exteriors for both interfaces. `kappa` selects the pole of modified Hardy
/// blocks and is ignored otherwise.
pub fn build_waveguides(cfg: &RunConfig, interior: &InteriorSystem, n: usize, kappa: Option<f64>) -> Result<Vec<Waveguide>, Failure> {
    let m = &cfg.method;
    let count = interior.traces.interfaces.len();
    let mut out = Vec::with_capacity(count);
    for w in 0..count {
        let kind = match m.kind {
            MethodKind::Hsm => {
                let [re, im] = cfg.kappa0(w);
                let k0 = c(re, im);
                let mut block = HardyBlock::new(k0, n)?;
                if let (Modified::Auto, Some(kappa)) = (m.modified, kappa) {
                    let modes = transverse_modes(&interior.traces.interfaces[w].transverse)?;
                    let branch = BranchParam::from_kappa0(k0)?;
                    let zetas: Vec<C64> = modes
                        .lambdas
                        .iter()
                        .map(|&l| mobius(branch_sqrt(c(kappa * kappa - l, 0.0), &branch), k0))
                        .collect();
                    if let Some(z) = select_pole(&zetas, m.pole_threshold).zeta {
                        info!("waveguide {w}: pole basis with zeta = {z}");
                        block = HardyBlock::modified(k0, n, z)?;
                    }
                }
                ExteriorKind::Hardy(block)
            }
            MethodKind::Pml => {
                let [re, im] = cfg.sigma(w);
                let sigma = BranchParam::new(c(re, im))?;
                let rho = m.rho.unwrap_or_else(|| default_rho(n));
                ExteriorKind::Pml(PmlLayer::new(sigma, rho, n, m.pml_order, m.pml_grading)?)
            }
        };
        out.push(Waveguide { interface: w, kind });
    }
    Ok(out)
}

fn transverse_height(cfg: &RunConfig) -> Option<f64> {
    match cfg.problem.geometry {
        Geometry::Rectangle { height, .. } => Some(height),
        Geometry::Interval { .. } => None,
    }
}

fn interval_modes(cfg: &RunConfig) -> IntervalModes {
    IntervalModes {
        length: transverse_height(cfg).unwrap_or(1.0),
        dirichlet: transverse_height(cfg).is_some() && cfg.problem.boundary == Boundary::Dirichlet,
    }
}

/// Incident superposition of the configured duct modes (the single plane wave
/// for interval geometries).
fn incident_field(cfg: &RunConfig, sys: &CoupledSystem, kappa: f64) -> Result<IncidentField, Failure> {
    let inc = &cfg.problem.incident;
    let w = inc.waveguide;
    if w >= sys.waveguides.len() {
        return Err(config_err("problem.incident.waveguide", "no such waveguide"));
    }
    let branch = sys.waveguides[w].kind.branch()?;
    let coords = &sys.traces().interfaces[sys.layouts[w].interface].transverse.coordinates;
    let modes = interval_modes(cfg);
    let list: Vec<(C64, C64, Vec<f64>)> = match transverse_height(cfg) {
        None => vec![(c(1.0, 0.0), branch_sqrt(c(kappa * kappa, 0.0), &branch), vec![1.0])],
        Some(_) => inc
            .modes
            .iter()
            .zip(inc.amplitudes())
            .map(|(&n, a)| {
                let kn = branch_sqrt(c(kappa * kappa - modes.lambda(n), 0.0), &branch);
                (c(a, 0.0), kn, coords.iter().map(|&y| modes.mode(n, y).0).collect())
            })
            .collect(),
    };
    Ok(IncidentField::from_modes(w, &list)?)
}

/// Exact total field of the uniform duct fed from the left, if available.
fn exact_series(cfg: &RunConfig, sys: &CoupledSystem, kappa: f64) -> Option<ModalSeries> {
    let (a, _) = match cfg.problem.geometry {
        Geometry::Interval { a, b } | Geometry::Rectangle { a, b, .. } => (a, b),
    };
    if cfg.problem.index != Index::Uniform || cfg.problem.incident.waveguide != 0 {
        return None;
    }
    let arg = sys.waveguides[0].kind.branch().ok()?.arg_sigma();
    let amps: Vec<C64> = match transverse_height(cfg) {
        None => vec![c(1.0, 0.0)],
        Some(_) => {
            let inc = &cfg.problem.incident;
            let top = inc.modes.iter().copied().max().unwrap_or(0);
            let mut v = vec![c(0.0, 0.0); top];
            for (&n, amp) in inc.modes.iter().zip(inc.amplitudes()) {
                v[n - 1] += amp;
            }
            v
        }
    };
    // The local incoming wave e^{-i k xi}, xi = a - x, is e^{i k (x - a)}.
    Some(ModalSeries::new(&amps, c(kappa, 0.0), interval_modes(cfg), arg, a))
}

fn relative_error(interior: &InteriorSystem, u: &[C64], exact: &ModalSeries) -> Result<(f64, f64), Failure> {
    let f = |x: f64, y: f64| exact.value_grad(x, y);
    let err = interior.relative_h1_error(u, &f);
    let best = interior.h1_projection(&f)?;
    Ok((err, interior.relative_h1_error(&best, &f)))
}

fn params_json(cfg: &RunConfig, task: &str) -> serde_json::Value {
    json!({
        "program": "wavex",
        "version": env!("CARGO_PKG_VERSION"),
        "task": task,
        "config": cfg,
    })
}

fn json_artifact(name: &str, value: &serde_json::Value) -> Artifact {
    let mut contents = serde_json::to_string_pretty(value).expect("json serializes");
    contents.push('\n');
    Artifact {
        name: name.into(),
        contents,
    }
}

pub fn run_spectrum(cfg: &RunConfig, check: bool) -> Result<Outcome, Failure> {
    let sp = cross_section_spectrum(cfg, cfg.task.spectrum.count)?;
    let mut buf = Vec::new();
    sp.write_csv(&mut buf).map_err(|e| Failure::Solver(e.to_string()))?;
    let mut violations = Vec::new();
    if check {
        if let CrossSection::Disk { radius } = cfg.problem.cross_section {
            for (i, e) in sp.entries().iter().enumerate() {
                if let ModeLabel::Disk { m, .. } = e.label {
                    let d = bessel_j_prime(m, e.lambda.sqrt() * radius).abs();
                    if d > 1e-10 {
                        violations.push(format!("spectrum entry {}: |J_{m}'| = {d:e}", i + 1));
                    }
                }
            }
        }
    }
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                name: "spectrum.csv".into(),
                contents: String::from_utf8(buf).expect("ascii"),
            },
            json_artifact("params.json", &params_json(cfg, "spectrum")),
        ],
        violations,
    })
}

pub fn run_diffract(cfg: &RunConfig, check: bool) -> Result<Outcome, Failure> {
    let d = &cfg.discretization;
    let kappa = cfg.problem.kappa;
    let interior = build_interior(cfg, d.elements, d.order)?;
    let wgs = build_waveguides(cfg, &interior, cfg.method.n, Some(kappa))?;
    let sys = assemble_coupled(&interior, &wgs)?;
    let inc = incident_field(cfg, &sys, kappa)?;
    let rep = solve_diffraction(&sys, c(kappa, 0.0), &[inc], None)?;
    info!("diffraction solve: {} DOFs in {:.3} s", rep.dofs.total, rep.wall_time);
    let mut csv = String::from("waveguide,mode,lambda,amplitude_re,amplitude_im\n");
    for (w, amps) in rep.amplitudes.iter().enumerate() {
        for (k, a) in amps.iter().enumerate() {
            let lambda = sys.modes[w].lambdas[k];
            writeln!(csv, "{w},{},{},{},{}", k + 1, fmt_f(lambda), fmt_f(a.re), fmt_f(a.im)).unwrap();
        }
    }
    let exact = exact_series(cfg, &sys, kappa);
    let errors = match &exact {
        Some(ex) => Some(relative_error(&interior, sys.interior_part(&rep.solution), ex)?),
        None => None,
    };
    let mut violations = Vec::new();
    if check && !(rep.residual < CHECK_RESIDUAL) {
        violations.push(format!("diffraction residual {:e} exceeds {CHECK_RESIDUAL:e}", rep.residual));
    }
    let summary = json!({
        "params": params_json(cfg, "diffract"),
        "dofs": { "interior": rep.dofs.interior, "exterior": rep.dofs.exterior, "total": rep.dofs.total },
        "residual": rep.residual,
        "condition": rep.condition,
        "relative_h1_error": errors.map(|e| e.0),
        "best_approximation_error": errors.map(|e| e.1),
        "warnings": rep.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                name: "amplitudes.csv".into(),
                contents: csv,
            },
            json_artifact("diffraction.json", &summary),
        ],
        violations,
    })
}

#[derive(Serialize)]
struct ResonanceRecord {
    kappa: [f64; 2],
    kappa_sq: [f64; 2],
    alternate: Option<[f64; 2]>,
    residual: f64,
    admissible: bool,
    artifact: bool,
    ray_distance: f64,
}

pub fn run_resonate(cfg: &RunConfig, check: bool) -> Result<Outcome, Failure> {
    let d = &cfg.discretization;
    let r = &cfg.task.resonate;
    let interior = build_interior(cfg, d.elements, d.order)?;
    let wgs = build_waveguides(cfg, &interior, cfg.method.n, None)?;
    let sys = assemble_coupled(&interior, &wgs)?;
    let mut search = ResonanceSearch::new(c(r.shift[0], r.shift[1]), r.count);
    search.window = Some(Window {
        re: (r.window_re[0], r.window_re[1]),
        im: (r.window_im[0], r.window_im[1]),
    });
    search.backend = match r.backend.as_str() {
        "dense" => Backend::Dense,
        "arnoldi" => Backend::Arnoldi,
        _ => Backend::Auto,
    };
    search.artifact_tube = r.artifact_tube;
    let rep = solve_resonance(&sys, &search)?;
    let records: Vec<ResonanceRecord> = rep
        .results
        .iter()
        .map(|x| ResonanceRecord {
            kappa: [x.kappa.re, x.kappa.im],
            kappa_sq: [x.kappa_sq.re, x.kappa_sq.im],
            alternate: x.alternate.map(|a| [a.re, a.im]),
            residual: x.residual,
            admissible: x.admissible,
            artifact: x.artifact,
            ray_distance: x.ray_distance,
        })
        .collect();
    let mut violations = Vec::new();
    if check {
        for x in &rep.results {
            if !(x.residual < CHECK_RESIDUAL) {
                violations.push(format!("eigenpair at kappa = {} has residual {:e}", x.kappa, x.residual));
            }
        }
    }
    let out = json!({
        "params": params_json(cfg, "resonate"),
        "dofs": sys.ndofs(),
        "backend": format!("{:?}", rep.backend).to_lowercase(),
        "orthogonality_defect": rep.orthogonality_defect,
        "resonances": records,
        "warnings": rep.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        artifacts: vec![json_artifact("resonances.json", &out)],
        violations,
    })
}

/// Squared modal error of a discrete Hardy solve against `c e^{i kappa_n x}`,
/// in the norm `(1 + lambda) |u0|^2 + (3 + 2 lambda) sum |U_j|^2` with the
/// discarded tail added in closed form.
pub fn hsm_mode_error_sq(kappa: f64, lambda: f64, block: &HardyBlock, amplitude: C64) -> Result<f64, Failure> {
    let k0 = block.kappa0();
    let branch = BranchParam::from_kappa0(k0)?;
    let kn = branch_sqrt(c(kappa * kappa - lambda, 0.0), &branch);
    let g = C64::i() * kn * amplitude;
    let sol = solve_mode_hsm(c(kappa, 0.0), lambda, block, g)?;
    let n = block.degree();
    let exact = exact_hardy_coefficients(amplitude, kn, k0, n);
    let z2 = mobius(kn, k0).norm_sqr();
    let head: f64 = sol.hardy_coeffs.iter().zip(&exact).map(|(a, b)| (a - b).norm_sqr()).sum();
    let tail = amplitude.norm_sqr() * z2.powi(n as i32 + 2) / (1.0 - z2);
    Ok((1.0 + lambda) * (sol.u0 - amplitude).norm_sqr() + (3.0 + 2.0 * lambda) * (head + tail))
}

pub fn run_sweep(cfg: &RunConfig, check: bool) -> Result<Outcome, Failure> {
    let s = &cfg.task.sweep;
    let n = cfg.method.n;
    let kappa = cfg.problem.kappa;
    let top = s.modes.iter().copied().max().unwrap_or(1);
    let sp = cross_section_spectrum(cfg, top)?;
    let lambdas = sp.eigenvalues();
    let weights = s.weights.clone().unwrap_or_else(|| vec![1.0; s.modes.len()]);
    let modes: Vec<(f64, C64)> = s.modes.iter().zip(&weights).map(|(&i, &w)| (lambdas[i - 1], c(w, 0.0))).collect();
    let [nr, ni] = s.points;
    let grid: Vec<C64> = (0..ni)
        .flat_map(|j| {
            (0..nr).map(move |i| {
                c(
                    s.re[0] + (s.re[1] - s.re[0]) * i as f64 / (nr - 1) as f64,
                    s.im[0] + (s.im[1] - s.im[0]) * j as f64 / (ni - 1) as f64,
                )
            })
        })
        .collect();
    let rows: Vec<Result<(Bound, Option<f64>), Failure>> = grid
        .par_iter()
        .map(|&k0| {
            let eta = eta_bound(k0, c(kappa, 0.0), n, &modes)?;
            let numeric = if s.numeric {
                let block = HardyBlock::new(k0, n)?;
                let mut total = 0.0;
                for &(l, w) in &modes {
                    total += hsm_mode_error_sq(kappa, l, &block, w)?;
                }
                Some(total.sqrt())
            } else {
                None
            };
            Ok((eta, numeric))
        })
        .collect();
    let mut csv = String::from(if s.numeric {
        "kappa0_re,kappa0_im,eta,status,numeric_error\n"
    } else {
        "kappa0_re,kappa0_im,eta,status\n"
    });
    let mut best: Option<(f64, C64)> = None;
    for (k0, row) in grid.iter().zip(rows) {
        let (eta, numeric) = row?;
        let (value, status) = match eta {
            Bound::Finite(v) => (v, "finite"),
            Bound::Unbounded { .. } => (f64::INFINITY, "unbounded"),
        };
        if value.is_finite() && best.is_none_or(|b| value < b.0) {
            best = Some((value, *k0));
        }
        write!(csv, "{},{},{},{status}", fmt_f(k0.re), fmt_f(k0.im), fmt_f(value)).unwrap();
        if let Some(e) = numeric {
            write!(csv, ",{}", fmt_f(e)).unwrap();
        }
        csv.push('\n');
    }
    let mut violations = Vec::new();
    if check && best.is_none() {
        violations.push("eta is unbounded on the whole grid".into());
    }
    let summary = json!({
        "params": params_json(cfg, "sweep-kappa0"),
        "lambdas": modes.iter().map(|m| m.0).collect::<Vec<_>>(),
        "argmin": best.map(|b| json!({ "kappa0": [b.1.re, b.1.im], "eta": b.0 })),
    });
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                name: "eta_map.csv".into(),
                contents: csv,
            },
            json_artifact("params.json", &summary),
        ],
        violations,
    })
}

struct ConvergencePoint {
    value: usize,
    dofs: usize,
    error: f64,
    best: f64,
    residual: f64,
}

pub fn run_convergence(cfg: &RunConfig, check: bool) -> Result<Outcome, Failure> {
    let conv = &cfg.task.convergence;
    let d = &cfg.discretization;
    let kappa = cfg.problem.kappa;
    if cfg.problem.index != Index::Uniform {
        return Err(config_err("problem.index", "convergence studies need the uniform duct (exact solution)"));
    }
    if cfg.problem.incident.waveguide != 0 {
        return Err(config_err("problem.incident.waveguide", "convergence studies feed the duct from waveguide 0"));
    }
    let points: Vec<Result<ConvergencePoint, Failure>> = conv
        .values
        .par_iter()
        .map(|&v| {
            let (elements, order, n) = match conv.parameter {
                Parameter::N => (d.elements, d.order, v),
                Parameter::P => (d.elements, v, cfg.method.n),
                Parameter::Elements => (v, d.order, cfg.method.n),
            };
            if !(1..=6).contains(&order) {
                return Err(config_err("task.convergence.values", "orders must be between 1 and 6"));
            }
            let interior = build_interior(cfg, elements, order)?;
            let wgs = build_waveguides(cfg, &interior, n, Some(kappa))?;
            let sys = assemble_coupled(&interior, &wgs)?;
            let inc = incident_field(cfg, &sys, kappa)?;
            let rep = solve_diffraction(&sys, c(kappa, 0.0), &[inc], None)?;
            let exact = exact_series(cfg, &sys, kappa).expect("uniform duct fed from the left");
            let (error, best) = relative_error(&interior, sys.interior_part(&rep.solution), &exact)?;
            Ok(ConvergencePoint {
                value: v,
                dofs: rep.dofs.total,
                error,
                best,
                residual: rep.residual,
            })
        })
        .collect();
    let name = match conv.parameter {
        Parameter::N => "n",
        Parameter::P => "p",
        Parameter::Elements => "elements",
    };
    let mut csv = format!("{name},dofs,relative_h1_error,best_approximation_error,quasi_optimality\n");
    let mut violations = Vec::new();
    for p in points {
        let p = p?;
        writeln!(
            csv,
            "{},{},{},{},{}",
            p.value,
            p.dofs,
            fmt_f(p.error),
            fmt_f(p.best),
            fmt_f(p.error / p.best)
        )
        .unwrap();
        if check && !(p.residual < CHECK_RESIDUAL) {
            violations.push(format!("{name} = {}: solve residual {:e}", p.value, p.residual));
        }
    }
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                name: "convergence.csv".into(),
                contents: csv,
            },
            json_artifact("params.json", &params_json(cfg, "convergence")),
        ],
        violations,
    })
}

pub fn run(cfg: &RunConfig, task: config::TaskKind, check: bool) -> Result<Outcome, Failure> {
    match task {
        config::TaskKind::Spectrum => run_spectrum(cfg, check),
        config::TaskKind::Diffract => run_diffract(cfg, check),
        config::TaskKind::Resonate => run_resonate(cfg, check),
        config::TaskKind::SweepKappa0 => run_sweep(cfg, check),
        config::TaskKind::Convergence => run_convergence(cfg, check),
    }
}

pub const OUTPUT_HELP: &str = "\
Output files (comma-separated, one header row, complex values as _re/_im column pairs):

spectrum.csv      index,lambda,multiplicity,label
                  index is 1-based; label is n=<k> for intervals, m=<m>;n=<n>;angular=<+-m> for disks
eta_map.csv       kappa0_re,kappa0_im,eta,status[,numeric_error]
                  status is finite or unbounded (eta is then inf); the grid runs over kappa0_re fastest
convergence.csv   <n|p|elements>,dofs,relative_h1_error,best_approximation_error,quasi_optimality
amplitudes.csv    waveguide,mode,lambda,amplitude_re,amplitude_im (outgoing scattered amplitudes)
resonances.json   eigenvalues in the search window with kappa, kappa_sq, residual and admissibility flags
diffraction.json  solve summary: DOF counts, residual, condition estimate, errors against the exact field
params.json       the full configuration and program version of the run
";
