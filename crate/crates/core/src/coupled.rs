//! Global interior plus exterior pencils, diffraction solves and resonances.
//!
//! Each waveguide contributes a tensor block `radial (x) transverse` whose
//! radial DOF 0 is identified with the interior DOFs on its interface. The
//! exterior part of the trace is therefore never duplicated. With the radial
//! pair `(S_r, M_r)` (Hardy: `(S, M)`, PML: `(K/sigma, sigma M)`) and the
//! transverse pair `(M_y, K_y)` the exterior contributes
//! `A += S_r (x) M_y + M_r (x) K_y` and `B += M_r (x) M_y`.

use std::time::Instant;

use faer::Side as FaerSide;

use crate::branch::{admissible_set_classify_complete, arg, BranchParam, Membership};
use crate::diagnostics::Warning;
use crate::eigen::{dense_pencil_eigen, polish, shift_invert_arnoldi, ArnoldiOptions, EigenPair, DENSE_LIMIT};
use crate::error::{invalid, Error, Result};
use crate::hardy::HardyBlock;
use crate::interior::{InteriorSystem, TraceMaps, TransverseBasis};
use crate::linalg::{dot_t, inverse_norm1_estimate, norm2, DenseMatrix, Factorization, SparseLu, SparseMatrix, Triplets, C64, I};
use crate::pml::PmlLayer;

/// Condition estimates above this are reported as near-resonant failures.
pub const SINGULAR_CONDITION: f64 = 1e14;
/// Condition estimates above this produce a warning.
pub const WARN_CONDITION: f64 = 1e10;
/// Default relative tube width around the continuous-spectrum rays.
pub const DEFAULT_ARTIFACT_TUBE: f64 = 1e-2;

#[derive(Debug, Clone)]
pub enum ExteriorKind {
    Hardy(HardyBlock),
    Pml(PmlLayer),
}

impl ExteriorKind {
    pub fn branch(&self) -> Result<BranchParam> {
        match self {
            ExteriorKind::Hardy(h) => BranchParam::from_kappa0(h.kappa0()),
            ExteriorKind::Pml(p) => Ok(*p.sigma()),
        }
    }

    fn radial_dofs(&self) -> usize {
        match self {
            ExteriorKind::Hardy(h) => h.radial_dofs(),
            ExteriorKind::Pml(p) => p.radial_dofs(),
        }
    }

    /// Radial `(S_r, M_r)` as entry lists.
    fn radial_pair(&self) -> (Entries, Entries) {
        match self {
            ExteriorKind::Hardy(h) => (dense_entries(h.stiffness()), dense_entries(h.mass())),
            ExteriorKind::Pml(p) => {
                let s = p.sigma().sigma();
                (
                    p.stiffness().iter().map(|(i, j, v)| (i, j, v / s)).collect(),
                    p.mass().iter().map(|(i, j, v)| (i, j, v * s)).collect(),
                )
            }
        }
    }

    /// Radial coefficients of the incident extension with unit trace.
    fn extension_profile(&self) -> Vec<C64> {
        match self {
            ExteriorKind::Hardy(h) => h.trace_extension(C64::new(1.0, 0.0)),
            ExteriorKind::Pml(p) => p.extension_profile(),
        }
    }
}

fn dense_entries(a: &DenseMatrix) -> Vec<(usize, usize, C64)> {
    let mut e = Vec::new();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if a[(i, j)] != C64::new(0.0, 0.0) {
                e.push((i, j, a[(i, j)]));
            }
        }
    }
    e
}

/// An exterior attached to interior interface `interface`.
type Entries = Vec<(usize, usize, C64)>;

#[derive(Debug, Clone)]
pub struct Waveguide {
    pub interface: usize,
    pub kind: ExteriorKind,
}

/// Eigenpairs of the discrete cross section, `K_y phi = lambda M_y phi`,
/// with `phi^T M_y phi = 1` and the largest entry of each vector positive.
#[derive(Debug, Clone)]
pub struct TransverseModes {
    pub lambdas: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

pub fn transverse_modes(basis: &TransverseBasis) -> Result<TransverseModes> {
    let m = basis.len();
    if m == 0 {
        return Err(Error::Coupling("interface has no free transverse degrees of freedom".into()));
    }
    let real = |a: &SparseMatrix| {
        let d = a.to_dense();
        faer::Mat::<f64>::from_fn(m, m, |i, j| d[(i, j)].re)
    };
    let (k, mm) = (real(&basis.stiffness), real(&basis.mass));
    let llt = mm
        .llt(FaerSide::Lower)
        .map_err(|_| Error::Coupling("transverse mass is not positive definite".into()))?;
    let l = llt.L();
    let mut c = k.clone();
    l.solve_lower_triangular_in_place(c.as_mut());
    let mut ct = c.transpose().to_owned();
    l.solve_lower_triangular_in_place(ct.as_mut());
    let eig = ct
        .self_adjoint_eigen(FaerSide::Lower)
        .map_err(|e| Error::Eigen(format!("transverse eigensolver failed: {e:?}")))?;
    let mut u = eig.U().to_owned();
    l.transpose().solve_upper_triangular_in_place(u.as_mut());
    let s = eig.S().column_vector();
    let mut lambdas = Vec::with_capacity(m);
    let mut vectors = Vec::with_capacity(m);
    for j in 0..m {
        let mut v: Vec<f64> = (0..m).map(|i| u[(i, j)]).collect();
        let big = v.iter().copied().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
        if big < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        lambdas.push(s[j].max(0.0));
        vectors.push(v.into_iter().map(|x| C64::new(x, 0.0)).collect());
    }
    Ok(TransverseModes { lambdas, vectors })
}

#[derive(Debug, Clone)]
pub struct ExteriorLayout {
    pub interface: usize,
    /// First global index of radial shells `1..`.
    pub offset: usize,
    pub radial: usize,
    pub transverse: usize,
}

/// The assembled pencil `A - kappa^2 B`.
#[derive(Debug, Clone)]
pub struct CoupledSystem {
    pub a: SparseMatrix,
    pub b: SparseMatrix,
    pub interior_dofs: usize,
    pub layouts: Vec<ExteriorLayout>,
    pub waveguides: Vec<Waveguide>,
    pub modes: Vec<TransverseModes>,
    traces: TraceMaps,
    /// Exterior blocks in local numbering `r * m + t`.
    ext_blocks: Vec<(SparseMatrix, SparseMatrix)>,
    pub warnings: Vec<Warning>,
}

impl CoupledSystem {
    pub fn ndofs(&self) -> usize {
        self.a.nrows()
    }

    pub fn traces(&self) -> &TraceMaps {
        &self.traces
    }

    /// Global index of exterior DOF `(r, t)` of waveguide `w`.
    pub fn global_index(&self, w: usize, r: usize, t: usize) -> usize {
        let l = &self.layouts[w];
        if r == 0 {
            self.traces.interfaces[l.interface].dofs[t]
        } else {
            l.offset + (r - 1) * l.transverse + t
        }
    }

    /// `A - kappa^2 B`.
    pub fn operator(&self, kappa: C64) -> SparseMatrix {
        self.a.combine(C64::new(1.0, 0.0), &self.b, -kappa * kappa)
    }

    /// Interior part of a global vector.
    pub fn interior_part<'a>(&self, x: &'a [C64]) -> &'a [C64] {
        &x[..self.interior_dofs]
    }

    /// Radial-by-transverse coefficients of waveguide `w` in `x`.
    pub fn exterior_part(&self, x: &[C64], w: usize) -> Vec<Vec<C64>> {
        let l = &self.layouts[w];
        (0..l.radial)
            .map(|r| (0..l.transverse).map(|t| x[self.global_index(w, r, t)]).collect())
            .collect()
    }
}

pub fn assemble_coupled(interior: &InteriorSystem, waveguides: &[Waveguide]) -> Result<CoupledSystem> {
    let traces = interior.traces.clone();
    let n_int = interior.ndofs();
    let mut seen = vec![false; traces.interfaces.len()];
    let mut layouts = Vec::new();
    let mut offset = n_int;
    for w in waveguides {
        let itf = traces
            .interfaces
            .get(w.interface)
            .ok_or_else(|| Error::Coupling(format!("no interface {}", w.interface)))?;
        if std::mem::replace(&mut seen[w.interface], true) {
            return Err(Error::Coupling(format!("interface {} has two exteriors", w.interface)));
        }
        let m = itf.transverse.len();
        if m != itf.dofs.len() {
            return Err(Error::Coupling("transverse basis does not match the interface trace".into()));
        }
        let radial = w.kind.radial_dofs();
        layouts.push(ExteriorLayout {
            interface: w.interface,
            offset,
            radial,
            transverse: m,
        });
        offset += (radial - 1) * m;
    }
    let n = offset;
    let mut at = Triplets::square(n);
    let mut bt = Triplets::square(n);
    for (i, j, v) in interior.stiffness.iter() {
        at.push(i, j, v);
    }
    for (i, j, v) in interior.mass.iter() {
        bt.push(i, j, v);
    }
    let mut modes = Vec::new();
    let mut ext_blocks = Vec::new();
    for (wi, w) in waveguides.iter().enumerate() {
        let lay = &layouts[wi];
        let tb = &traces.interfaces[w.interface].transverse;
        let m = lay.transverse;
        let glob = |r: usize, t: usize| {
            if r == 0 {
                traces.interfaces[w.interface].dofs[t]
            } else {
                lay.offset + (r - 1) * m + t
            }
        };
        let (sr, mr) = w.kind.radial_pair();
        let my: Vec<_> = tb.mass.iter().collect();
        let ky: Vec<_> = tb.stiffness.iter().collect();
        let nl = lay.radial * m;
        let mut la = Triplets::square(nl);
        let mut lb = Triplets::square(nl);
        for &(r, q, s) in &sr {
            for &(t, u, v) in &my {
                la.push(r * m + t, q * m + u, s * v);
            }
        }
        for &(r, q, s) in &mr {
            for &(t, u, v) in &ky {
                la.push(r * m + t, q * m + u, s * v);
            }
            for &(t, u, v) in &my {
                lb.push(r * m + t, q * m + u, s * v);
            }
        }
        let (la, lb) = (la.build(), lb.build());
        for (i, j, v) in la.iter() {
            at.push(glob(i / m, i % m), glob(j / m, j % m), v);
        }
        for (i, j, v) in lb.iter() {
            bt.push(glob(i / m, i % m), glob(j / m, j % m), v);
        }
        ext_blocks.push((la, lb));
        modes.push(transverse_modes(tb)?);
    }
    let warnings = waveguides
        .iter()
        .flat_map(|w| match &w.kind {
            ExteriorKind::Hardy(h) => h.warnings().to_vec(),
            ExteriorKind::Pml(_) => vec![],
        })
        .collect();
    Ok(CoupledSystem {
        a: at.build(),
        b: bt.build(),
        interior_dofs: n_int,
        layouts,
        waveguides: waveguides.to_vec(),
        modes,
        traces,
        ext_blocks,
        warnings,
    })
}

/// Incident data on the interface of waveguide `waveguide`, as nodal values
/// of the trace and of the normal derivative (normal pointing out of the
/// interior) on the transverse DOFs.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidentField {
    pub waveguide: usize,
    pub trace: Vec<C64>,
    pub normal_derivative: Vec<C64>,
}

impl IncidentField {
    /// `sum_n a_n e^{-i kappa_n xi} phi_n` in the local coordinate `xi >= 0`
    /// of the waveguide; `modes` holds `(a_n, kappa_n, nodal phi_n)`.
    pub fn from_modes(waveguide: usize, modes: &[(C64, C64, Vec<f64>)]) -> Result<Self> {
        let m = modes.first().map_or(0, |x| x.2.len());
        let mut trace = vec![C64::new(0.0, 0.0); m];
        let mut normal_derivative = vec![C64::new(0.0, 0.0); m];
        for (a, kn, phi) in modes {
            if phi.len() != m {
                return Err(invalid("incident", "mode vectors of different lengths"));
            }
            for t in 0..m {
                trace[t] += a * phi[t];
                normal_derivative[t] += -I * kn * a * phi[t];
            }
        }
        Ok(Self {
            waveguide,
            trace,
            normal_derivative,
        })
    }
}

#[derive(Debug, Clone)]
pub struct DofCounts {
    pub interior: usize,
    pub exterior: usize,
    pub total: usize,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Interior: total field. Exterior: scattered field plus the incident
    /// extension.
    pub solution: Vec<C64>,
    /// `||(A - kappa^2 B) x - F|| / ||F||`.
    pub residual: f64,
    /// Scattered trace per waveguide.
    pub scattered_traces: Vec<Vec<C64>>,
    /// Outgoing amplitudes per waveguide against the discrete transverse modes.
    pub amplitudes: Vec<Vec<C64>>,
    pub condition: f64,
    pub dofs: DofCounts,
    pub wall_time: f64,
    pub warnings: Vec<Warning>,
}

/// Solves `(A - kappa^2 B) x = F` for the given incident fields and an
/// optional interior load (already integrated against the test functions).
pub fn solve_diffraction(
    system: &CoupledSystem,
    kappa: C64,
    incident: &[IncidentField],
    source: Option<&[C64]>,
) -> Result<SolveReport> {
    let start = Instant::now();
    let n = system.ndofs();
    let mut f = vec![C64::new(0.0, 0.0); n];
    if let Some(src) = source {
        if src.len() != system.interior_dofs {
            return Err(invalid("source", format!("expected {} entries, got {}", system.interior_dofs, src.len())));
        }
        f[..src.len()].iter_mut().zip(src).for_each(|(a, b)| *a += b);
    }
    let mut g_all: Vec<Option<Vec<C64>>> = vec![None; system.waveguides.len()];
    for inc in incident {
        let w = inc.waveguide;
        let lay = system
            .layouts
            .get(w)
            .ok_or_else(|| invalid("incident", format!("no waveguide {w}")))?;
        let m = lay.transverse;
        if inc.trace.len() != m || inc.normal_derivative.len() != m {
            return Err(invalid("incident", format!("expected {m} trace values")));
        }
        let tb = &system.traces.interfaces[lay.interface].transverse;
        let flux = tb.mass.matvec(&inc.normal_derivative);
        for t in 0..m {
            f[system.global_index(w, 0, t)] += flux[t];
        }
        let profile = system.waveguides[w].kind.extension_profile();
        let ext: Vec<C64> = (0..lay.radial * m).map(|i| profile[i / m] * inc.trace[i % m]).collect();
        let (la, lb) = &system.ext_blocks[w];
        let la_e = la.matvec(&ext);
        let lb_e = lb.matvec(&ext);
        let k2 = kappa * kappa;
        for i in 0..lay.radial * m {
            f[system.global_index(w, i / m, i % m)] += la_e[i] - k2 * lb_e[i];
        }
        g_all[w] = Some(inc.trace.clone());
    }
    let op = system.operator(kappa);
    let lu = SparseLu::factor(&op).map_err(|_| Error::Singular {
        context: format!("coupled system at kappa = {kappa} (resonance nearby?)"),
        condition: f64::INFINITY,
    })?;
    let condition = inverse_norm1_estimate(&lu) * op.norm1();
    let mut warnings = system.warnings.clone();
    if !(condition < SINGULAR_CONDITION) {
        return Err(Error::Singular {
            context: format!("coupled system at kappa = {kappa} (resonance nearby?)"),
            condition,
        });
    }
    if condition > WARN_CONDITION {
        warnings.push(
            Warning::IllConditioned {
                context: format!("coupled system at kappa = {kappa}"),
                condition,
            }
            .emit(),
        );
    }
    let x = lu.solve(&f);
    let fnorm = norm2(&f);
    let r: Vec<C64> = op.matvec(&x).iter().zip(&f).map(|(a, b)| a - b).collect();
    let residual = if fnorm > 0.0 { norm2(&r) / fnorm } else { norm2(&r) };
    let mut scattered_traces = Vec::new();
    let mut amplitudes = Vec::new();
    for (w, lay) in system.layouts.iter().enumerate() {
        let mut tr = system.traces.trace(&x, lay.interface);
        if let Some(g) = &g_all[w] {
            tr.iter_mut().zip(g).for_each(|(a, b)| *a -= b);
        }
        let tb = &system.traces.interfaces[lay.interface].transverse;
        amplitudes.push(project_modes(&tr, &system.modes[w].vectors, &tb.mass));
        scattered_traces.push(tr);
    }
    Ok(SolveReport {
        solution: x,
        residual,
        scattered_traces,
        amplitudes,
        condition,
        dofs: DofCounts {
            interior: system.interior_dofs,
            exterior: n - system.interior_dofs,
            total: n,
        },
        wall_time: start.elapsed().as_secs_f64(),
        warnings,
    })
}

/// Coefficients `phi_n^T M_y v` of a trace against mass-normalized modes.
pub fn project_modes(trace: &[C64], modes: &[Vec<C64>], mass: &SparseMatrix) -> Vec<C64> {
    let mv = mass.matvec(trace);
    modes.iter().map(|phi| dot_t(phi, &mv)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Dense below [`DENSE_LIMIT`] DOFs, Krylov above.
    Auto,
    Dense,
    Arnoldi,
}

/// Rectangle `re.0 < Re kappa < re.1`, `im.0 < Im kappa <= im.1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Window {
    pub fn contains(&self, k: C64) -> bool {
        self.re.0 < k.re && k.re < self.re.1 && self.im.0 < k.im && k.im <= self.im.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceSearch {
    /// Target in the `kappa` plane.
    pub shift: C64,
    /// Number of eigenvalues nearest the shift (when no window is given, or
    /// requested from the Krylov backend).
    pub count: usize,
    pub window: Option<Window>,
    pub backend: Backend,
    pub artifact_tube: f64,
    pub polish_steps: usize,
}

impl ResonanceSearch {
    pub fn new(shift: C64, count: usize) -> Self {
        Self {
            shift,
            count,
            window: None,
            backend: Backend::Auto,
            artifact_tube: DEFAULT_ARTIFACT_TUBE,
            polish_steps: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResonanceResult {
    pub kappa: C64,
    pub kappa_sq: C64,
    /// The other root when `kappa^2` lies on the negative real axis.
    pub alternate: Option<C64>,
    pub eigenvector: Vec<C64>,
    pub residual: f64,
    pub admissible: bool,
    /// Per waveguide component index of the admissible set.
    pub components: Vec<Option<usize>>,
    /// Relative distance of `kappa^2` to the nearest rotated ray.
    pub ray_distance: f64,
    pub artifact: bool,
}

impl ResonanceResult {
    pub fn is_resonance(&self) -> bool {
        self.admissible && !self.artifact
    }
}

#[derive(Debug, Clone)]
pub struct ResonanceReport {
    pub results: Vec<ResonanceResult>,
    pub backend: Backend,
    /// Largest `|x_i^T B x_j|` over distinct reported pairs, normalized.
    pub orthogonality_defect: f64,
    pub warnings: Vec<Warning>,
}

/// `kappa` with `Re kappa > 0` from `kappa^2`, plus the second candidate on
/// the ambiguous negative real axis.
pub fn kappa_from_square(k2: C64) -> (C64, Option<C64>) {
    let k = k2.sqrt();
    let k = if k.re < 0.0 { -k } else { k };
    if k2.re < 0.0 && k2.im.abs() <= 1e-12 * k2.norm() {
        let a = C64::new(0.0, (-k2.re).sqrt());
        return (-a, Some(a));
    }
    (k, None)
}

fn ray_distance(k2: C64, lambda: f64, direction: C64) -> f64 {
    let p = k2 - lambda;
    let t = (p * direction.conj()).re.max(0.0);
    (p - direction * t).norm()
}

fn classify_pair(system: &CoupledSystem, pair: EigenPair, tube: f64) -> Result<ResonanceResult> {
    let (kappa, alternate) = kappa_from_square(pair.value);
    let mut admissible = true;
    let mut components = Vec::new();
    let mut dist = f64::INFINITY;
    for (w, wg) in system.waveguides.iter().enumerate() {
        let sigma = wg.kind.branch()?;
        let lambdas = &system.modes[w].lambdas;
        let member = if kappa.re > 0.0 {
            admissible_set_classify_complete(kappa, lambdas, &sigma)?
        } else {
            Membership {
                inside: false,
                component_index: None,
            }
        };
        admissible &= member.inside;
        components.push(member.component_index);
        let dir = C64::from_polar(1.0, -2.0 * sigma.arg_sigma());
        for &l in lambdas {
            dist = dist.min(ray_distance(pair.value, l, dir));
        }
    }
    let ray = dist / pair.value.norm().max(f64::MIN_POSITIVE);
    Ok(ResonanceResult {
        kappa,
        kappa_sq: pair.value,
        alternate,
        eigenvector: pair.vector,
        residual: pair.residual,
        admissible: admissible && kappa.im <= 0.0,
        components,
        ray_distance: ray,
        artifact: ray < tube,
    })
}

pub fn solve_resonance(system: &CoupledSystem, search: &ResonanceSearch) -> Result<ResonanceReport> {
    let n = system.ndofs();
    let backend = match search.backend {
        Backend::Auto if n < DENSE_LIMIT => Backend::Dense,
        Backend::Auto => Backend::Arnoldi,
        b => b,
    };
    let (a, b) = (&system.a, &system.b);
    let raw = match backend {
        Backend::Dense => dense_pencil_eigen(a, b)?,
        _ => shift_invert_arnoldi(a, b, search.shift * search.shift, search.count.max(1), ArnoldiOptions::default())?,
    };
    let mut candidates: Vec<(C64, EigenPair)> = raw
        .into_iter()
        .filter(|p| p.value.is_finite())
        .map(|p| (kappa_from_square(p.value).0, p))
        .collect();
    candidates.sort_by(|x, y| {
        (x.0 - search.shift)
            .norm()
            .total_cmp(&(y.0 - search.shift).norm())
            .then(x.0.re.total_cmp(&y.0.re))
    });
    match search.window {
        Some(w) => candidates.retain(|(k, _)| w.contains(*k)),
        None => candidates.truncate(search.count),
    }
    let mut results = Vec::with_capacity(candidates.len());
    let mut warnings = Vec::new();
    for (_, pair) in candidates {
        let pair = polish(a, b, &pair, search.polish_steps);
        if pair.residual > 1e-8 {
            warnings.push(
                Warning::IllConditioned {
                    context: format!("eigenpair residual {:.3e} at kappa^2 = {}", pair.residual, pair.value),
                    condition: pair.residual,
                }
                .emit(),
            );
        }
        results.push(classify_pair(system, pair, search.artifact_tube)?);
    }
    results.sort_by(|x, y| x.kappa.re.total_cmp(&y.kappa.re).then(x.kappa.im.total_cmp(&y.kappa.im)));
    let bx: Vec<Vec<C64>> = results.iter().map(|r| b.matvec(&r.eigenvector)).collect();
    let mut defect = 0.0f64;
    for i in 0..results.len() {
        let dii = dot_t(&results[i].eigenvector, &bx[i]).norm();
        for j in 0..i {
            let djj = dot_t(&results[j].eigenvector, &bx[j]).norm();
            let dij = dot_t(&results[i].eigenvector, &bx[j]).norm();
            defect = defect.max(dij / (dii * djj).sqrt().max(f64::MIN_POSITIVE));
        }
    }
    Ok(ResonanceReport {
        results,
        backend,
        orthogonality_defect: defect,
        warnings,
    })
}

/// The rotated rays `lambda_n + t e^{-2 i arg sigma}` in the `kappa` plane,
/// sampled at `t` in `ts` (for plotting).
pub fn spectrum_rays(lambdas: &[f64], sigma: &BranchParam, ts: &[f64]) -> Vec<Vec<C64>> {
    let dir = C64::from_polar(1.0, -2.0 * sigma.arg_sigma());
    lambdas
        .iter()
        .map(|&l| ts.iter().map(|&t| kappa_from_square(l + dir * t).0).collect())
        .collect()
}

/// Principal argument of `kappa` relative to the artifact ray of the
/// lowest mode, `arg kappa + arg sigma`; negative values lie beyond the ray.
pub fn angle_to_first_ray(kappa: C64, sigma: &BranchParam) -> f64 {
    arg(kappa) + sigma.arg_sigma()
}
