//! Transverse spectra of waveguide cross sections.
//!
//! Three providers are available: analytic interval spectra, the Neumann
//! spectrum of a disk (through zeros of `J_m'`), and a finite element
//! eigensolver on an interval whose eigenvectors span the discrete trace space
//! of a tensor-product interior mesh.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use faer::{Mat, Side};

use crate::bessel::{bessel_j, bessel_j_prime_zeros_below};
use crate::diagnostics::Warning;
use crate::error::{invalid, Error, Result};
use crate::fem1d::{gauss_legendre, Mesh1d, Space1d};
use crate::linalg::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Dirichlet,
    Neumann,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Neumann => "neumann",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossSection {
    Interval { length: f64 },
    Disk { radius: f64 },
    /// Eigenpairs of a discretization; modes are nodal vectors.
    Discrete { length: f64 },
}

/// Descriptor of one eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeLabel {
    /// 1-based index of an interval mode.
    Interval { index: usize },
    /// Disk mode `J_m(mu_{m,n} r / R)` times `cos(m theta)` (`angular = +m`)
    /// or `sin(m theta)` (`angular = -m`).
    Disk { m: usize, n: usize, angular: i64 },
    /// 1-based index of a discrete eigenpair.
    Discrete { index: usize },
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeLabel::Interval { index } => write!(f, "n={index}"),
            ModeLabel::Disk { m, n, angular } => write!(f, "m={m};n={n};angular={angular}"),
            ModeLabel::Discrete { index } => write!(f, "h{index}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub lambda: f64,
    /// Multiplicity of `lambda`; degenerate eigenfunctions are separate entries.
    pub multiplicity: usize,
    pub label: ModeLabel,
}

/// Ascending transverse eigenvalues of `-Delta` on a cross section,
/// one entry per eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kind: BoundaryKind,
    geometry: CrossSection,
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    pub fn geometry(&self) -> CrossSection {
        self.geometry
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.lambda).collect()
    }

    /// Indices of the first entry of each of the first `count` distinct eigenvalues.
    pub fn distinct_representatives(&self, count: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(count);
        let mut i = 0;
        while i < self.entries.len() && out.len() < count {
            out.push(i);
            i += self.entries[i].multiplicity.max(1);
        }
        out
    }

    /// Sub-spectrum containing the selected entries, in the given order.
    pub fn select(&self, indices: &[usize]) -> Spectrum {
        Spectrum {
            kind: self.kind,
            geometry: self.geometry,
            entries: indices.iter().map(|&i| self.entries[i]).collect(),
        }
    }

    /// `L^2`-normalized interval eigenfunction and its derivative at `y`.
    pub fn interval_mode(&self, index: usize, y: f64) -> (f64, f64) {
        let length = match self.geometry {
            CrossSection::Interval { length } => length,
            _ => panic!("interval_mode on a non-interval spectrum"),
        };
        let n = match self.entries[index].label {
            ModeLabel::Interval { index } => index,
            _ => unreachable!(),
        };
        interval_eigenfunction(self.kind, length, n, y)
    }

    /// `L^2`-normalized disk eigenfunction at polar coordinates `(r, theta)`.
    pub fn disk_mode(&self, index: usize, r: f64, theta: f64) -> f64 {
        let radius = match self.geometry {
            CrossSection::Disk { radius } => radius,
            _ => panic!("disk_mode on a non-disk spectrum"),
        };
        let (m, mu, angular) = match self.entries[index].label {
            ModeLabel::Disk { m, angular, .. } => (m, self.entries[index].lambda.sqrt() * radius, angular),
            _ => unreachable!(),
        };
        let radial = bessel_j(m, mu * r / radius);
        let norm = disk_normalization(m, mu, radius);
        let ang = match angular {
            0 => 1.0,
            a if a > 0 => (m as f64 * theta).cos(),
            _ => (m as f64 * theta).sin(),
        };
        norm * radial * ang
    }

    /// CSV with columns `index,lambda,multiplicity,label` (1-based index).
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "index,lambda,multiplicity,label")?;
        for (i, e) in self.entries.iter().enumerate() {
            writeln!(w, "{},{:.15e},{},{}", i + 1, e.lambda, e.multiplicity, e.label)?;
        }
        Ok(())
    }
}

fn interval_eigenfunction(kind: BoundaryKind, length: f64, n: usize, y: f64) -> (f64, f64) {
    match kind {
        BoundaryKind::Neumann if n == 1 => (1.0 / length.sqrt(), 0.0),
        BoundaryKind::Neumann => {
            let k = (n - 1) as f64 * PI / length;
            let a = (2.0 / length).sqrt();
            (a * (k * y).cos(), -a * k * (k * y).sin())
        }
        BoundaryKind::Dirichlet => {
            let k = n as f64 * PI / length;
            let a = (2.0 / length).sqrt();
            (a * (k * y).sin(), a * k * (k * y).cos())
        }
    }
}

fn disk_normalization(m: usize, mu: f64, radius: f64) -> f64 {
    if mu == 0.0 {
        return 1.0 / (PI * radius * radius).sqrt();
    }
    let mf = m as f64;
    let radial = radius * radius / 2.0 * (1.0 - mf * mf / (mu * mu)) * bessel_j(m, mu).powi(2);
    let angular = if m == 0 { 2.0 * PI } else { PI };
    1.0 / (radial * angular).sqrt()
}

fn group_multiplicities(entries: &mut [SpectrumEntry], rel_tol: f64) {
    let mut i = 0;
    while i < entries.len() {
        let mut j = i + 1;
        while j < entries.len() && (entries[j].lambda - entries[i].lambda).abs() <= rel_tol * entries[i].lambda.max(1.0) {
            j += 1;
        }
        for e in &mut entries[i..j] {
            e.multiplicity = j - i;
        }
        i = j;
    }
}

/// Eigenvalues `((n-1) pi / L)^2` (Neumann) or `(n pi / L)^2` (Dirichlet), `n = 1..=count`.
pub fn interval_spectrum(kind: BoundaryKind, length: f64, count: usize) -> Result<Spectrum> {
    if !(length > 0.0) {
        return Err(invalid("length", format!("must be positive, got {length}")));
    }
    if count == 0 {
        return Err(invalid("count", "at least one eigenvalue required"));
    }
    let entries = (1..=count)
        .map(|n| {
            let k = match kind {
                BoundaryKind::Neumann => (n - 1) as f64,
                BoundaryKind::Dirichlet => n as f64,
            };
            SpectrumEntry {
                lambda: (k * PI / length).powi(2),
                multiplicity: 1,
                label: ModeLabel::Interval { index: n },
            }
        })
        .collect();
    Ok(Spectrum {
        kind,
        geometry: CrossSection::Interval { length },
        entries,
    })
}

/// The first `count` Neumann eigenvalues `(mu_{m,n}/R)^2` of a disk of radius `R`.
///
/// Entries with `m >= 1` appear twice (cosine then sine), so the returned
/// list may end in the middle of a degenerate pair.
pub fn disk_neumann_spectrum(radius: f64, count: usize) -> Result<Spectrum> {
    if !(radius > 0.0) {
        return Err(invalid("radius", format!("must be positive, got {radius}")));
    }
    if count == 0 {
        return Err(invalid("count", "at least one eigenvalue required"));
    }
    // each m contributes zeros above m, so a bound on the count-th value
    // limits the angular orders that need scanning
    let mut bound = f64::INFINITY;
    let mut found: Vec<(f64, usize, usize)> = Vec::new();
    let mut m = 0usize;
    while (m as f64) < bound {
        let scan = if bound.is_finite() { bound } else { PI * (count as f64 + 2.0) };
        let zeros = bessel_j_prime_zeros_below(m, scan + 1e-9)?;
        for (n, mu) in zeros.into_iter().enumerate() {
            let copies = if m == 0 { 1 } else { 2 };
            for _ in 0..copies {
                found.push((mu, m, n + 1));
            }
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        if found.len() >= count {
            bound = bound.min(found[count - 1].0);
        }
        m += 1;
        if m > 10_000 {
            return Err(Error::RootFinding("disk spectrum scan did not terminate".into()));
        }
    }
    found.truncate(count);
    let mut entries: Vec<SpectrumEntry> = Vec::with_capacity(count);
    let mut last: Option<(usize, usize)> = None;
    for (mu, m, n) in found {
        let angular = if m == 0 {
            0
        } else if last == Some((m, n)) {
            -(m as i64)
        } else {
            m as i64
        };
        last = Some((m, n));
        entries.push(SpectrumEntry {
            lambda: (mu / radius).powi(2),
            // accidental degeneracies between different (m, n) are not merged
            multiplicity: if m == 0 { 1 } else { 2 },
            label: ModeLabel::Disk { m, n, angular },
        });
    }
    Ok(Spectrum {
        kind: BoundaryKind::Neumann,
        geometry: CrossSection::Disk { radius },
        entries,
    })
}

/// Finite element eigenpairs of `-d^2/dy^2` on an interval.
#[derive(Debug, Clone)]
pub struct FemSpectrum {
    pub spectrum: Spectrum,
    pub space: Space1d,
    /// Mass-orthonormal eigenvectors over all DOFs (zero on Dirichlet ends).
    pub eigenvectors: Vec<Vec<f64>>,
    /// Dense mass matrix over all DOFs.
    pub mass: Vec<f64>,
}

impl FemSpectrum {
    /// Coefficients `v_n^T M g` of a nodal vector.
    pub fn project_nodal(&self, values: &[C64]) -> TraceVector {
        let n = self.space.ndofs();
        let mg: Vec<C64> = (0..n)
            .map(|i| (0..n).map(|j| values[j] * self.mass[i * n + j]).sum())
            .collect();
        TraceVector {
            coefficients: self
                .eigenvectors
                .iter()
                .map(|v| v.iter().zip(&mg).map(|(a, b)| b * *a).sum())
                .collect(),
            norm_order: 0.0,
        }
    }
}

/// Solves `K v = lambda M v` on the given mesh and keeps the lowest `count` pairs.
pub fn fem_cross_section_spectrum(mesh: &Mesh1d, kind: BoundaryKind, order: usize, count: usize) -> Result<FemSpectrum> {
    let space = Space1d::new(mesh.clone(), order)?;
    let n = space.ndofs();
    let (k, m) = space.assemble_plain();
    let active: Vec<usize> = match kind {
        BoundaryKind::Neumann => (0..n).collect(),
        BoundaryKind::Dirichlet => (1..n - 1).collect(),
    };
    let na = active.len();
    if count == 0 || count > na {
        return Err(invalid("count", format!("must be in 1..={na}, got {count}")));
    }
    let kd = Mat::<f64>::from_fn(na, na, |i, j| k.get(active[i], active[j]).re);
    let md = Mat::<f64>::from_fn(na, na, |i, j| m.get(active[i], active[j]).re);
    let llt = md
        .llt(Side::Lower)
        .map_err(|e| Error::Assembly(format!("mass matrix not positive definite: {e:?}")))?;
    let l = llt.L().to_owned();
    let mut x = kd.clone();
    l.solve_lower_triangular_in_place(x.as_mut());
    let mut cmat = x.transpose().to_owned();
    l.solve_lower_triangular_in_place(cmat.as_mut());
    let sym = Mat::<f64>::from_fn(na, na, |i, j| 0.5 * (cmat[(i, j)] + cmat[(j, i)]));
    let evd = sym
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("cross-section eigensolve failed: {e:?}")))?;
    let mut y = evd.U().to_owned();
    l.transpose().solve_upper_triangular_in_place(y.as_mut());
    let values = evd.S().column_vector();
    let mut entries = Vec::with_capacity(count);
    let mut eigenvectors = Vec::with_capacity(count);
    for col in 0..count {
        let mut v = vec![0.0; n];
        for (i, &dof) in active.iter().enumerate() {
            v[dof] = y[(i, col)];
        }
        // fix the sign so that the first significant entry is positive
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
            if *first < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        eigenvectors.push(v);
        entries.push(SpectrumEntry {
            lambda: values[col].max(0.0),
            multiplicity: 1,
            label: ModeLabel::Discrete { index: col + 1 },
        });
    }
    group_multiplicities(&mut entries, 1e-10);
    let mass = (0..n * n).map(|idx| m.get(idx / n, idx % n).re).collect();
    Ok(FemSpectrum {
        spectrum: Spectrum {
            kind,
            geometry: CrossSection::Discrete {
                length: mesh.end() - mesh.start(),
            },
            entries,
        },
        space,
        eigenvectors,
        mass,
    })
}

/// Coefficients of a trace against the eigenfunctions of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceVector {
    pub coefficients: Vec<C64>,
    /// Sobolev exponent of the norm this vector is measured in.
    pub norm_order: f64,
}

impl TraceVector {
    pub fn zeros(count: usize) -> Self {
        Self {
            coefficients: vec![C64::new(0.0, 0.0); count],
            norm_order: 0.5,
        }
    }

    /// `(sum (1 + lambda_n)^s |c_n|^2)^{1/2}` with `s = norm_order`.
    pub fn norm(&self, lambdas: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .zip(lambdas)
            .map(|(c, l)| (1.0 + l).powf(self.norm_order) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Sampled trace data.
pub enum TraceSamples<'a> {
    Interval(&'a dyn Fn(f64) -> C64),
    /// Function of polar coordinates `(r, theta)`.
    Disk(&'a dyn Fn(f64, f64) -> C64),
}

#[derive(Debug, Clone)]
pub struct Projection {
    pub trace: TraceVector,
    /// `||g||^2_{L^2}` by the same quadrature.
    pub norm_sq: f64,
    /// `(||g||^2 - sum |c_n|^2) / ||g||^2`; zero when `g` lies in the span.
    pub parseval_defect: f64,
    pub warnings: Vec<Warning>,
}

/// Minimum quadrature points per transverse oscillation.
pub const POINTS_PER_OSCILLATION: f64 = 10.0;

/// Coefficients `<g, phi_n>` for the first `count` entries by composite
/// Gauss quadrature. `points` overrides the number of points per direction.
pub fn project_trace(spectrum: &Spectrum, count: usize, samples: TraceSamples<'_>, points: Option<usize>) -> Result<Projection> {
    if count == 0 || count > spectrum.len() {
        return Err(invalid("count", format!("must be in 1..={}, got {count}", spectrum.len())));
    }
    let lambda_max = spectrum.entries[count - 1].lambda;
    let (extent, per_unit) = match spectrum.geometry {
        CrossSection::Interval { length } => (length, 1.0),
        CrossSection::Disk { radius } => (radius, 1.0),
        CrossSection::Discrete { .. } => {
            return Err(invalid("spectrum", "use FemSpectrum::project_nodal for discrete spectra"))
        }
    };
    let oscillations = (lambda_max.sqrt() * extent * per_unit / (2.0 * PI)).max(1.0);
    let needed = (POINTS_PER_OSCILLATION * oscillations).ceil() as usize;
    let npts = points.unwrap_or_else(|| needed.max(64));
    let coeffs = |npts: usize| -> (Vec<C64>, f64) { quad_project(spectrum, count, &samples, npts) };
    let (c, norm_sq) = coeffs(npts);
    let mut warnings = Vec::new();
    if (npts as f64) < POINTS_PER_OSCILLATION * oscillations {
        let (c_half, _) = coeffs((npts / 2).max(2));
        let aliasing_bound = c
            .iter()
            .zip(&c_half)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        warnings.push(
            Warning::UnderResolved {
                points_per_oscillation: npts as f64 / oscillations,
                aliasing_bound,
            }
            .emit(),
        );
    }
    let captured: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    let parseval_defect = if norm_sq > 0.0 { (norm_sq - captured) / norm_sq } else { 0.0 };
    log::debug!("trace projection: {count} modes, Parseval defect {parseval_defect:e}");
    Ok(Projection {
        trace: TraceVector {
            coefficients: c,
            norm_order: 0.0,
        },
        norm_sq,
        parseval_defect,
        warnings,
    })
}

fn composite_gauss(a: f64, b: f64, npts: usize) -> Vec<(f64, f64)> {
    let per = 8usize;
    let segments = npts.div_ceil(per).max(1);
    let (x, w) = gauss_legendre(per);
    let h = (b - a) / segments as f64;
    let mut out = Vec::with_capacity(segments * per);
    for s in 0..segments {
        let a0 = a + s as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((a0 + h * (xi + 1.0) / 2.0, wi * h / 2.0));
        }
    }
    out
}

fn quad_project(spectrum: &Spectrum, count: usize, samples: &TraceSamples<'_>, npts: usize) -> (Vec<C64>, f64) {
    let mut c = vec![C64::new(0.0, 0.0); count];
    let mut norm_sq = 0.0;
    match (spectrum.geometry, samples) {
        (CrossSection::Interval { length }, TraceSamples::Interval(g)) => {
            for (y, w) in composite_gauss(0.0, length, npts) {
                let gy = g(y);
                norm_sq += w * gy.norm_sqr();
                for (n, cn) in c.iter_mut().enumerate() {
                    *cn += gy * (w * spectrum.interval_mode(n, y).0);
                }
            }
        }
        (CrossSection::Disk { radius }, TraceSamples::Disk(g)) => {
            let max_m = spectrum.entries[..count]
                .iter()
                .map(|e| match e.label {
                    ModeLabel::Disk { m, .. } => m,
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
            let ntheta = npts.max(4 * max_m + 8);
            for (r, wr) in composite_gauss(0.0, radius, npts) {
                for k in 0..ntheta {
                    let theta = 2.0 * PI * k as f64 / ntheta as f64;
                    let w = wr * r * 2.0 * PI / ntheta as f64;
                    let gv = g(r, theta);
                    norm_sq += w * gv.norm_sqr();
                    for (n, cn) in c.iter_mut().enumerate() {
                        *cn += gv * (w * spectrum.disk_mode(n, r, theta));
                    }
                }
            }
        }
        _ => panic!("trace samples do not match the cross-section geometry"),
    }
    (c, norm_sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_examples() {
        let s = interval_spectrum(BoundaryKind::Neumann, 1.0, 3).unwrap();
        let l = s.eigenvalues();
        assert_eq!(l[0], 0.0);
        assert!((l[1] - PI * PI).abs() < 1e-14 && (l[2] - 4.0 * PI * PI).abs() < 1e-13);
        let d = interval_spectrum(BoundaryKind::Dirichlet, 1.0, 1).unwrap();
        assert!((d.eigenvalues()[0] - PI * PI).abs() < 1e-14);
        let s2 = interval_spectrum(BoundaryKind::Neumann, 2.0, 2).unwrap();
        assert!((s2.eigenvalues()[1] - (PI / 2.0).powi(2)).abs() < 1e-15);
        assert!(interval_spectrum(BoundaryKind::Neumann, 0.0, 2).is_err());
    }

    #[test]
    fn disk_ordering_and_multiplicity() {
        let s = disk_neumann_spectrum(1.0, 8).unwrap();
        let l = s.eigenvalues();
        assert_eq!(l[0], 0.0);
        assert_eq!(l[1], l[2]);
        assert_eq!(l[3], l[4]);
        assert!(l[5] > l[4] && l[6] > l[5]);
        assert_eq!(l[6], l[7]);
        assert!((l[5].sqrt() - 3.83170597021).abs() < 1e-10);
        assert_eq!(s.distinct_representatives(5), vec![0, 1, 3, 5, 6]);
        assert_eq!(s.entries()[1].multiplicity, 2);
    }

    #[test]
    fn disk_modes_are_orthonormal() {
        let s = disk_neumann_spectrum(1.0, 8).unwrap();
        for i in 0..8 {
            let f = |r: f64, t: f64| C64::new(s.disk_mode(i, r, t), 0.0);
            let p = project_trace(&s, 8, TraceSamples::Disk(&f), Some(64)).unwrap();
            for (j, c) in p.trace.coefficients.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((c.re - expect).abs() < 1e-10 && c.im.abs() < 1e-12, "{i} {j} {c}");
            }
        }
    }

    #[test]
    fn project_single_and_superposed_modes() {
        let s = interval_spectrum(BoundaryKind::Neumann, 1.0, 10).unwrap();
        let phi3 = |y: f64| C64::new(s.interval_mode(2, y).0, 0.0);
        let p = project_trace(&s, 10, TraceSamples::Interval(&phi3), None).unwrap();
        for (j, c) in p.trace.coefficients.iter().enumerate() {
            assert!((c.norm() - if j == 2 { 1.0 } else { 0.0 }).abs() < 1e-10);
        }
        let sel = [0usize, 1, 3, 5, 6];
        let g = |y: f64| C64::new(sel.iter().map(|&n| s.interval_mode(n, y).0).sum(), 0.0);
        let p = project_trace(&s, 10, TraceSamples::Interval(&g), None).unwrap();
        for (j, c) in p.trace.coefficients.iter().enumerate() {
            assert!((c.re - if sel.contains(&j) { 1.0 } else { 0.0 }).abs() < 1e-10);
        }
        assert!(p.parseval_defect.abs() < 1e-10);
    }

    #[test]
    fn under_resolved_projection_warns() {
        let s = interval_spectrum(BoundaryKind::Neumann, 1.0, 40).unwrap();
        let g = |y: f64| C64::new(y.exp(), 0.0);
        let p = project_trace(&s, 40, TraceSamples::Interval(&g), Some(16)).unwrap();
        assert!(matches!(p.warnings[0], Warning::UnderResolved { .. }));
    }

    #[test]
    fn fem_spectrum_neumann() {
        let mesh = Mesh1d::uniform(0.0, 1.0, 64).unwrap();
        let f = fem_cross_section_spectrum(&mesh, BoundaryKind::Neumann, 1, 4).unwrap();
        let l = f.spectrum.eigenvalues();
        assert!(l[0].abs() < 1e-10);
        assert!((l[1] - PI * PI).abs() < 1e-2);
        let rate = |ne: usize| {
            let m = Mesh1d::uniform(0.0, 1.0, ne).unwrap();
            let f = fem_cross_section_spectrum(&m, BoundaryKind::Dirichlet, 1, 1).unwrap();
            f.spectrum.eigenvalues()[0] - PI * PI
        };
        let ratio = rate(16) / rate(32);
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
        // mass orthonormality
        let n = f.space.ndofs();
        for a in 0..4 {
            for b in 0..4 {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += f.eigenvectors[a][i] * f.mass[i * n + j] * f.eigenvectors[b][j];
                    }
                }
                assert!((s - if a == b { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn csv_export() {
        let s = disk_neumann_spectrum(1.0, 3).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,lambda,multiplicity,label");
        assert!(lines[2].starts_with("2,3.38995"));
        assert!(lines[2].ends_with(",2,m=1;n=1;angular=1"));
    }
}
