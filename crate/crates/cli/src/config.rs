//! Run configuration, read from TOML.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: Problem,
    pub method: Method,
    pub discretization: Discretization,
    pub task: Task,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Problem {
    pub geometry: Geometry,
    pub cross_section: CrossSection,
    /// Wall condition of the waveguides and of the duct.
    pub boundary: Boundary,
    pub index: Index,
    /// Real frequency for diffraction, sweeps and convergence studies.
    pub kappa: f64,
    pub incident: Incident,
}

impl Default for Problem {
    fn default() -> Self {
        Self {
            geometry: Geometry::Rectangle { a: 0.0, b: 1.0, height: 1.0 },
            cross_section: CrossSection::Interval { length: 1.0 },
            boundary: Boundary::Neumann,
            index: Index::Uniform,
            kappa: 3.5,
            incident: Incident::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Geometry {
    Interval { a: f64, b: f64 },
    Rectangle { a: f64, b: f64, height: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CrossSection {
    Interval { length: f64 },
    Disk { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Index {
    Uniform,
    /// Rows `[x0, x1, n]`.
    Layers { layers: Vec<[f64; 3]> },
    /// Rows `[x0, x1, y0, y1, n]`.
    Inclusions { inclusions: Vec<[f64; 5]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Incident {
    /// Waveguide the field comes from (0 = left, 1 = right).
    pub waveguide: usize,
    /// 1-based indices into the cross-section spectrum.
    pub modes: Vec<usize>,
    /// Defaults to one per mode.
    pub amplitudes: Option<Vec<f64>>,
}

impl Default for Incident {
    fn default() -> Self {
        Self {
            waveguide: 0,
            modes: vec![1, 2, 3, 4, 5],
            amplitudes: None,
        }
    }
}

impl Incident {
    pub fn amplitudes(&self) -> Vec<f64> {
        self.amplitudes.clone().unwrap_or_else(|| vec![1.0; self.modes.len()])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Hsm,
    Pml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modified {
    Off,
    /// Enrich with the pole of the mode with the largest `|zeta|` above the threshold.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Method {
    pub kind: MethodKind,
    /// Möbius parameter `[re, im]`, one per waveguide or one for all.
    pub kappa0: Vec<[f64; 2]>,
    /// Complex scaling `[re, im]`, one per waveguide or one for all.
    pub sigma: Vec<[f64; 2]>,
    /// Hardy degree or layer element count.
    pub n: usize,
    /// Layer length; defaults to `2 + n/2`.
    pub rho: Option<f64>,
    pub pml_order: usize,
    pub pml_grading: f64,
    pub modified: Modified,
    pub pole_threshold: f64,
}

impl Default for Method {
    fn default() -> Self {
        Self {
            kind: MethodKind::Hsm,
            kappa0: vec![[2.0, 2.0]],
            sigma: vec![[1.0, 1.0]],
            n: 20,
            rho: None,
            pml_order: 4,
            pml_grading: 1.2,
            modified: Modified::Off,
            pole_threshold: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Discretization {
    /// Elements along the axis.
    pub elements: usize,
    /// Elements across the duct; defaults to `elements`.
    pub elements_y: Option<usize>,
    pub order: usize,
}

impl Default for Discretization {
    fn default() -> Self {
        Self {
            elements: 16,
            elements_y: None,
            order: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Spectrum,
    Diffract,
    Resonate,
    SweepKappa0,
    Convergence,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Spectrum => "spectrum",
            TaskKind::Diffract => "diffract",
            TaskKind::Resonate => "resonate",
            TaskKind::SweepKappa0 => "sweep-kappa0",
            TaskKind::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Task {
    /// Task run by `check`; the other verbs name their task themselves.
    pub kind: TaskKind,
    pub spectrum: SpectrumTask,
    pub resonate: ResonateTask,
    pub sweep: SweepTask,
    pub convergence: ConvergenceTask,
}

impl Default for Task {
    fn default() -> Self {
        Self {
            kind: TaskKind::Diffract,
            spectrum: SpectrumTask::default(),
            resonate: ResonateTask::default(),
            sweep: SweepTask::default(),
            convergence: ConvergenceTask::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumTask {
    pub count: usize,
}

impl Default for SpectrumTask {
    fn default() -> Self {
        Self { count: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResonateTask {
    /// `[re, im]` in the kappa plane.
    pub shift: [f64; 2],
    pub count: usize,
    pub window_re: [f64; 2],
    pub window_im: [f64; 2],
    /// `auto`, `dense` or `arnoldi`.
    pub backend: String,
    pub artifact_tube: f64,
}

impl Default for ResonateTask {
    fn default() -> Self {
        Self {
            shift: [5.0, -0.5],
            count: 10,
            window_re: [0.0, 10.0],
            window_im: [-2.0, 0.0],
            backend: "auto".into(),
            artifact_tube: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepTask {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub points: [usize; 2],
    /// 1-based indices into the cross-section spectrum.
    pub modes: Vec<usize>,
    pub weights: Option<Vec<f64>>,
    /// Also compute the discrete modal error of the Hardy solve.
    pub numeric: bool,
}

impl Default for SweepTask {
    fn default() -> Self {
        Self {
            re: [0.1, 8.0],
            im: [0.1, 8.0],
            points: [60, 60],
            modes: vec![1, 2, 4, 6, 7],
            weights: None,
            numeric: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    N,
    P,
    Elements,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceTask {
    pub parameter: Parameter,
    pub values: Vec<usize>,
}

impl Default for ConvergenceTask {
    fn default() -> Self {
        Self {
            parameter: Parameter::N,
            values: vec![2, 4, 6, 8, 10, 12, 14, 16],
        }
    }
}

/// A configuration error with the path of the offending field.
#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config field `{}`: {}", self.path, self.message)
        }
    }
}

fn err(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        path: path.into(),
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
    let de = toml::Deserializer::new(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        err(&path, e.into_inner().message().trim().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn positive(path: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(err(path, format!("must be positive, got {v}")))
    }
}

fn first_quadrant(path: &str, v: &[[f64; 2]]) -> Result<(), ConfigError> {
    if v.is_empty() || v.len() > 2 {
        return Err(err(path, "give one value or one per waveguide"));
    }
    for (i, z) in v.iter().enumerate() {
        if !(z[0] > 0.0 && z[1] > 0.0) {
            return Err(err(&format!("{path}[{i}]"), "real and imaginary parts must be positive"));
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = &self.problem;
        match p.geometry {
            Geometry::Interval { a, b } | Geometry::Rectangle { a, b, .. } if !(b > a) => {
                return Err(err("problem.geometry", format!("need a < b, got a = {a}, b = {b}")))
            }
            Geometry::Rectangle { height, .. } => positive("problem.geometry.height", height)?,
            _ => {}
        }
        match p.cross_section {
            CrossSection::Interval { length } => positive("problem.cross_section.length", length)?,
            CrossSection::Disk { radius } => positive("problem.cross_section.radius", radius)?,
        }
        positive("problem.kappa", p.kappa)?;
        if p.incident.waveguide > 1 {
            return Err(err("problem.incident.waveguide", "must be 0 or 1"));
        }
        if p.incident.modes.contains(&0) {
            return Err(err("problem.incident.modes", "mode indices are 1-based"));
        }
        if let Some(a) = &p.incident.amplitudes {
            if a.len() != p.incident.modes.len() {
                return Err(err("problem.incident.amplitudes", "length must match problem.incident.modes"));
            }
        }
        if let Index::Layers { layers } = &p.index {
            for (i, l) in layers.iter().enumerate() {
                if !(l[1] > l[0] && l[2] > 0.0) {
                    return Err(err(&format!("problem.index.layers[{i}]"), "need x0 < x1 and n > 0"));
                }
            }
        }
        let m = &self.method;
        first_quadrant("method.kappa0", &m.kappa0)?;
        if m.sigma.is_empty() || m.sigma.len() > 2 {
            return Err(err("method.sigma", "give one value or one per waveguide"));
        }
        for (i, s) in m.sigma.iter().enumerate() {
            if !(s[0] > 0.0 && s[1] > 0.0) {
                return Err(err(&format!("method.sigma[{i}]"), "real and imaginary parts must be positive"));
            }
        }
        if m.n == 0 {
            return Err(err("method.n", "must be at least 1"));
        }
        if let Some(r) = m.rho {
            positive("method.rho", r)?;
        }
        if !(1..=6).contains(&m.pml_order) {
            return Err(err("method.pml_order", "must be between 1 and 6"));
        }
        positive("method.pml_grading", m.pml_grading)?;
        if !(m.pole_threshold > 0.0 && m.pole_threshold < 1.0) {
            return Err(err("method.pole_threshold", "must lie in (0, 1)"));
        }
        let d = &self.discretization;
        if d.elements == 0 || d.elements_y == Some(0) {
            return Err(err("discretization.elements", "must be at least 1"));
        }
        if !(1..=6).contains(&d.order) {
            return Err(err("discretization.order", "must be between 1 and 6"));
        }
        let t = &self.task;
        if t.spectrum.count == 0 {
            return Err(err("task.spectrum.count", "must be at least 1"));
        }
        let r = &t.resonate;
        if !["auto", "dense", "arnoldi"].contains(&r.backend.as_str()) {
            return Err(err("task.resonate.backend", "expected auto, dense or arnoldi"));
        }
        if !(r.window_re[0] < r.window_re[1] && r.window_im[0] < r.window_im[1]) {
            return Err(err("task.resonate.window_re", "window bounds must be increasing"));
        }
        let s = &t.sweep;
        if !(s.re[0] > 0.0 && s.re[1] > s.re[0]) {
            return Err(err("task.sweep.re", "need 0 < lower < upper"));
        }
        if !(s.im[0] > 0.0 && s.im[1] > s.im[0]) {
            return Err(err("task.sweep.im", "need 0 < lower < upper"));
        }
        if s.points[0] < 2 || s.points[1] < 2 {
            return Err(err("task.sweep.points", "need at least 2 points per direction"));
        }
        if s.modes.is_empty() || s.modes.contains(&0) {
            return Err(err("task.sweep.modes", "need 1-based mode indices"));
        }
        if let Some(w) = &s.weights {
            if w.len() != s.modes.len() {
                return Err(err("task.sweep.weights", "length must match task.sweep.modes"));
            }
        }
        if t.convergence.values.is_empty() || t.convergence.values.contains(&0) {
            return Err(err("task.convergence.values", "need positive values"));
        }
        Ok(())
    }

    pub fn kappa0(&self, w: usize) -> [f64; 2] {
        let v = &self.method.kappa0;
        v[w.min(v.len() - 1)]
    }

    pub fn sigma(&self, w: usize) -> [f64; 2] {
        let v = &self.method.sigma;
        v[w.min(v.len() - 1)]
    }
}

pub fn defaults_toml() -> String {
    toml::to_string_pretty(&RunConfig::default()).expect("default config serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let text = defaults_toml();
        assert_eq!(parse(&text).unwrap(), RunConfig::default());
    }

    #[test]
    fn errors_carry_field_paths() {
        let e = parse("[method]\nn = \"many\"\n").unwrap_err();
        assert_eq!(e.path, "method.n");
        let e = parse("[method]\nkappa0 = [[-1.0, 1.0]]\n").unwrap_err();
        assert_eq!(e.path, "method.kappa0[0]");
        let e = parse("[problem]\nbogus = 1\n").unwrap_err();
        assert!(e.path.starts_with("problem"), "{}", e.path);
    }
}
