//! Reference solutions built from closed forms, independent of the
//! discretizations: they use their own square-root branch, mode formulas,
//! quadrature and root finding.

use std::f64::consts::PI;

use log::debug;

use crate::bessel::bessel_j_prime_zeros;
use crate::error::{invalid, Error, Result};
use crate::linalg::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const IU: C64 = C64 { re: 0.0, im: 1.0 };

/// `sqrt(z)` with the cut along `arg z = -2 arg sigma`, written as a rotated
/// principal root: rotate the cut onto the positive axis, take the root with
/// argument in `[0, pi)`, rotate back.
pub fn rotated_sqrt(z: C64, arg_sigma: f64) -> C64 {
    let w = z * C64::from_polar(1.0, 2.0 * arg_sigma);
    let mut phi = w.im.atan2(w.re);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    if phi >= 2.0 * PI {
        phi -= 2.0 * PI;
    }
    C64::from_polar(w.norm().sqrt(), phi / 2.0) * C64::from_polar(1.0, -arg_sigma)
}

/// Normalized modes of an interval `(0, length)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalModes {
    pub length: f64,
    pub dirichlet: bool,
}

impl IntervalModes {
    /// `lambda_n`, `n >= 1`.
    pub fn lambda(&self, n: usize) -> f64 {
        let k = if self.dirichlet { n } else { n - 1 } as f64;
        (k * PI / self.length).powi(2)
    }

    /// `(phi_n(y), phi_n'(y))`.
    pub fn mode(&self, n: usize, y: f64) -> (f64, f64) {
        let l = self.length;
        if self.dirichlet {
            let k = n as f64 * PI / l;
            let c = (2.0 / l).sqrt();
            (c * (k * y).sin(), c * k * (k * y).cos())
        } else if n == 1 {
            (1.0 / l.sqrt(), 0.0)
        } else {
            let k = (n - 1) as f64 * PI / l;
            let c = (2.0 / l).sqrt();
            (c * (k * y).cos(), -c * k * (k * y).sin())
        }
    }

    pub fn sup(&self, n: usize) -> f64 {
        if !self.dirichlet && n == 1 {
            1.0 / self.length.sqrt()
        } else {
            (2.0 / self.length).sqrt()
        }
    }
}

/// `u(x, y) = sum_n c_n e^{i kappa_n (x - origin)} phi_n(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalSeries {
    pub coefficients: Vec<C64>,
    pub wavenumbers: Vec<C64>,
    pub lambdas: Vec<f64>,
    pub modes: IntervalModes,
    pub origin: f64,
}

impl ModalSeries {
    /// Series of prescribed amplitudes `a_n` for modes `1..=a.len()`.
    pub fn new(amplitudes: &[C64], kappa: C64, modes: IntervalModes, arg_sigma: f64, origin: f64) -> Self {
        let lambdas: Vec<f64> = (1..=amplitudes.len()).map(|n| modes.lambda(n)).collect();
        Self {
            coefficients: amplitudes.to_vec(),
            wavenumbers: lambdas.iter().map(|&l| rotated_sqrt(kappa * kappa - l, arg_sigma)).collect(),
            lambdas,
            modes,
            origin,
        }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Value and gradient.
    pub fn value_grad(&self, x: f64, y: f64) -> (C64, [C64; 2]) {
        let mut u = ZERO;
        let mut gx = ZERO;
        let mut gy = ZERO;
        for (k, (&c, &kn)) in self.coefficients.iter().zip(&self.wavenumbers).enumerate() {
            let (p, dp) = self.modes.mode(k + 1, y);
            let e = c * (IU * kn * (x - self.origin)).exp();
            u += e * p;
            gx += IU * kn * e * p;
            gy += e * dp;
        }
        (u, [gx, gy])
    }

    pub fn value(&self, x: f64, y: f64) -> C64 {
        self.value_grad(x, y).0
    }

    /// Complex-scaled field `sum c_n e^{i kappa_n sigma (x - origin)} phi_n(y)`.
    pub fn scaled_value(&self, x: f64, y: f64, sigma: C64) -> C64 {
        self.coefficients
            .iter()
            .zip(&self.wavenumbers)
            .enumerate()
            .map(|(k, (&c, &kn))| c * (IU * kn * sigma * (x - self.origin)).exp() * self.modes.mode(k + 1, y).0)
            .sum()
    }

    /// Smallest number of leading terms whose omitted remainder at `x` is
    /// bounded by `tol`, with that bound.
    pub fn truncation(&self, x: f64, tol: f64) -> (usize, f64) {
        let mags: Vec<f64> = (0..self.len())
            .map(|k| {
                self.coefficients[k].norm()
                    * (IU * self.wavenumbers[k] * (x - self.origin)).exp().norm()
                    * self.modes.sup(k + 1)
            })
            .collect();
        let mut tail = 0.0;
        let mut count = self.len();
        while count > 0 && tail + mags[count - 1] <= tol {
            tail += mags[count - 1];
            count -= 1;
        }
        (count, tail)
    }

    /// Value at `(x, y)` with the truncation certified to `tol`.
    pub fn value_certified(&self, x: f64, y: f64, tol: f64) -> (C64, f64) {
        let (count, tail) = self.truncation(x, tol);
        let mut s = self.clone();
        s.coefficients.truncate(count);
        s.wavenumbers.truncate(count);
        (s.value(x, y), tail)
    }
}

/// Outgoing half-waveguide solution with Neumann data `g = sum g_n phi_n`:
/// `c_n = g_n / (i kappa_n)`.
pub fn exact_diffraction(g: &[C64], kappa: C64, modes: IntervalModes, arg_sigma: f64) -> Result<ModalSeries> {
    let mut s = ModalSeries::new(g, kappa, modes, arg_sigma, 0.0);
    for (n, kn) in s.wavenumbers.iter().enumerate() {
        if kn.norm() < 1e-12 * kappa.norm().max(1.0) {
            return Err(Error::WoodAnomaly {
                index: n,
                distance: kn.norm(),
            });
        }
    }
    for (c, kn) in s.coefficients.iter_mut().zip(&s.wavenumbers) {
        *c /= IU * kn;
    }
    Ok(s)
}

/// `a e^{i k x} + b e^{-i k x}` on `[0, rho]`, `k = sigma kappa_n`, with
/// `u'(0) = sigma g` and `u(rho) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedPml {
    pub a: C64,
    pub b: C64,
    pub k: C64,
    pub rho: f64,
}

impl TruncatedPml {
    pub fn value(&self, x: f64) -> C64 {
        self.a * (IU * self.k * x).exp() + self.b * (-IU * self.k * x).exp()
    }

    pub fn derivative(&self, x: f64) -> C64 {
        IU * self.k * (self.a * (IU * self.k * x).exp() - self.b * (-IU * self.k * x).exp())
    }
}

pub fn pml_truncated_exact(kappa: C64, lambda: f64, sigma: C64, rho: f64, g: C64) -> Result<TruncatedPml> {
    if !(sigma.im > 0.0 && sigma.re > 0.0) {
        return Err(invalid("sigma", "must lie in the open first quadrant"));
    }
    let arg_sigma = sigma.im.atan2(sigma.re);
    let k = sigma * rotated_sqrt(kappa * kappa - lambda, arg_sigma);
    let e = (2.0 * IU * k * rho).exp();
    let det = IU * k * (1.0 + e);
    if det.norm() < 1e-14 * (1.0 + k.norm()) {
        return Err(Error::Singular {
            context: "truncated layer resonance".into(),
            condition: f64::INFINITY,
        });
    }
    let a = sigma * g / det;
    Ok(TruncatedPml { a, b: -a * e, k, rho })
}

/// One-dimensional medium: layers `(x0, x1, n)` in increasing order, `n = 1`
/// outside.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredMedium {
    pub layers: Vec<(f64, f64, f64)>,
}

impl LayeredMedium {
    /// Outgoing-matching determinant: start with `e^{-i kappa x}` on the left,
    /// propagate through the layers, and measure `u' - i kappa u` on the right.
    pub fn determinant(&self, kappa: C64) -> C64 {
        let left = self.layers.first().map_or(0.0, |l| l.0);
        let mut u = C64::new(1.0, 0.0);
        let mut du = -IU * kappa;
        let mut x = left;
        let propagate = |k: C64, d: f64, u: &mut C64, du: &mut C64| {
            if d <= 0.0 {
                return;
            }
            let (c, s) = ((k * d).cos(), (k * d).sin());
            let sk = if k.norm() < 1e-8 { C64::new(d, 0.0) * (1.0 - (k * d).powi(2) / 6.0) } else { s / k };
            let nu = c * *u + sk * *du;
            let ndu = -k * s * *u + c * *du;
            *u = nu;
            *du = ndu;
        };
        for &(x0, x1, n) in &self.layers {
            propagate(kappa, x0 - x, &mut u, &mut du);
            propagate(kappa * n, x1 - x0, &mut u, &mut du);
            x = x1;
        }
        du - IU * kappa * u
    }

    fn derivative(&self, kappa: C64) -> C64 {
        let h = 1e-6 * kappa.norm().max(1.0);
        (self.determinant(kappa + h) - self.determinant(kappa - h)) / (2.0 * h)
    }
}

/// Rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Rect {
    fn contains(&self, z: C64, pad: f64) -> bool {
        self.re.0 - pad <= z.re && z.re <= self.re.1 + pad && self.im.0 - pad <= z.im && z.im <= self.im.1 + pad
    }

    fn size(&self) -> f64 {
        (self.re.1 - self.re.0).max(self.im.1 - self.im.0)
    }

    fn inset(&self, d: f64) -> Rect {
        Rect {
            re: (self.re.0 + d, self.re.1 - d),
            im: (self.im.0 + d, self.im.1 - d),
        }
    }

    fn quadrants(&self) -> [Rect; 4] {
        let mr = 0.5 * (self.re.0 + self.re.1);
        let mi = 0.5 * (self.im.0 + self.im.1);
        [
            Rect { re: (self.re.0, mr), im: (self.im.0, mi) },
            Rect { re: (mr, self.re.1), im: (self.im.0, mi) },
            Rect { re: (self.re.0, mr), im: (mi, self.im.1) },
            Rect { re: (mr, self.re.1), im: (mi, self.im.1) },
        ]
    }
}

const EDGE_POINTS: usize = 512;

/// Winding number of `f` around the boundary of `r`; `None` if `f` nearly
/// vanishes on the contour.
fn winding(f: &dyn Fn(C64) -> C64, r: &Rect) -> Option<i64> {
    let corners = [
        C64::new(r.re.0, r.im.0),
        C64::new(r.re.1, r.im.0),
        C64::new(r.re.1, r.im.1),
        C64::new(r.re.0, r.im.1),
    ];
    let mut total = 0.0;
    let mut scale = 0.0f64;
    let mut small = f64::INFINITY;
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        let mut prev = f(a);
        for k in 1..=EDGE_POINTS {
            let z = a + (b - a) * (k as f64 / EDGE_POINTS as f64);
            let cur = f(z);
            let step = edge_angle(f, a + (b - a) * ((k - 1) as f64 / EDGE_POINTS as f64), z, prev, cur, 0)?;
            total += step;
            scale = scale.max(cur.norm());
            small = small.min(cur.norm());
            prev = cur;
        }
    }
    if small < 1e-9 * scale {
        return None;
    }
    Some((total / (2.0 * PI)).round() as i64)
}

/// Argument increment of `f` from `z0` to `z1`, bisecting while the
/// increment is large.
fn edge_angle(f: &dyn Fn(C64) -> C64, z0: C64, z1: C64, f0: C64, f1: C64, depth: usize) -> Option<f64> {
    if f0.norm() == 0.0 || f1.norm() == 0.0 {
        return None;
    }
    let d = (f1 / f0).arg();
    if d.abs() < 0.5 || depth > 24 {
        return Some(d);
    }
    let zm = 0.5 * (z0 + z1);
    let fm = f(zm);
    Some(edge_angle(f, z0, zm, f0, fm, depth + 1)? + edge_angle(f, zm, z1, fm, f1, depth + 1)?)
}

/// Resonances of a layered medium in `window`, certified by `|D| < 1e-10`
/// (relative to the determinant scale) and a winding-number count.
pub fn transfer_matrix_resonances(medium: &LayeredMedium, window: Rect) -> Result<Vec<C64>> {
    let f = |z: C64| medium.determinant(z);
    let mut box_ = window;
    let mut count = None;
    for attempt in 0..4 {
        count = winding(&f, &box_);
        if count.is_some() {
            break;
        }
        debug!("root on the window contour; shrinking (attempt {attempt})");
        box_ = box_.inset(1e-4 * window.size());
    }
    let count = count.ok_or_else(|| Error::RootFinding("determinant vanishes on the window contour".into()))?;
    let mut roots = Vec::new();
    isolate(medium, &box_, count, 0, &mut roots)?;
    if roots.len() as i64 != count {
        return Err(Error::RootFinding(format!(
            "argument principle counted {count} roots, polishing found {}",
            roots.len()
        )));
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn isolate(medium: &LayeredMedium, r: &Rect, count: i64, depth: usize, out: &mut Vec<C64>) -> Result<()> {
    if count <= 0 {
        return Ok(());
    }
    if count == 1 || depth > 40 {
        let root = newton(medium, C64::new(0.5 * (r.re.0 + r.re.1), 0.5 * (r.im.0 + r.im.1)), r)?;
        for _ in 0..count {
            out.push(root);
        }
        return Ok(());
    }
    let f = |z: C64| medium.determinant(z);
    let mut quads = r.quadrants();
    for attempt in 0..6 {
        let counts: Option<Vec<i64>> = quads.iter().map(|q| winding(&f, q)).collect();
        if let Some(cs) = counts {
            if cs.iter().sum::<i64>() == count {
                for (q, c) in quads.iter().zip(cs) {
                    isolate(medium, q, c, depth + 1, out)?;
                }
                return Ok(());
            }
        }
        // Split line hit a root or counts disagree: move the split point.
        let t = 0.5 + 0.031 * (attempt as f64 + 1.0);
        let mr = r.re.0 + t * (r.re.1 - r.re.0);
        let mi = r.im.0 + (1.0 - t) * (r.im.1 - r.im.0);
        quads = [
            Rect { re: (r.re.0, mr), im: (r.im.0, mi) },
            Rect { re: (mr, r.re.1), im: (r.im.0, mi) },
            Rect { re: (r.re.0, mr), im: (mi, r.im.1) },
            Rect { re: (mr, r.re.1), im: (mi, r.im.1) },
        ];
    }
    Err(Error::RootFinding("could not subdivide the window consistently".into()))
}

fn newton(medium: &LayeredMedium, start: C64, r: &Rect) -> Result<C64> {
    let mut z = start;
    let scale = medium.determinant(start).norm().max(1.0);
    for _ in 0..100 {
        let d = medium.determinant(z);
        let dz = d / medium.derivative(z);
        z -= dz;
        if !z.is_finite() {
            break;
        }
        if dz.norm() < 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    let res = medium.determinant(z).norm();
    if !(res < 1e-10 * scale) || !r.contains(z, 1e-6 * r.size().max(1.0)) {
        return Err(Error::RootFinding(format!("Newton failed near {start} (|D| = {res:.3e})")));
    }
    Ok(z)
}

/// `sum_{j=N+1}^{J} |zeta|^{2(j+1)}`, summed from the small end, with the
/// bound `|zeta|^{2(J+2)} / (1 - |zeta|^2)` on the omitted remainder.
pub fn hardy_tail_bruteforce(zeta: C64, n: usize, j: usize) -> Result<(f64, f64)> {
    let r2 = zeta.norm_sqr();
    if !(r2 < 1.0) {
        return Err(invalid("zeta", "must lie inside the unit disk"));
    }
    if j < n + 1 {
        return Err(invalid("J", "must be at least N + 1"));
    }
    let mut sum = 0.0;
    for k in (n + 1..=j).rev() {
        sum += r2.powi(k as i32 + 1);
    }
    Ok((sum, r2.powi(j as i32 + 2) / (1.0 - r2)))
}

/// Eigenvalue `kappa_{m,n,l} = sqrt((mu_{m,n}/2)^2 + (l pi)^2)` of the closed
/// cylinder `(0, 1) x B_{1/2}` with Neumann walls; `n >= 1` counts the zeros
/// of `J_m'` including the trivial one for `m = 0`.
pub fn closed_cylinder_eigenvalue(m: usize, n: usize, l: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "radial index starts at 1"));
    }
    let mu = bessel_j_prime_zeros(m, n)?[n - 1];
    Ok(((mu / 2.0).powi(2) + (l as f64 * PI).powi(2)).sqrt())
}

/// Hausdorff distance between finite point sets (`0` if both are empty,
/// infinite if exactly one is).
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let directed = |p: &[C64], q: &[C64]| {
        p.iter()
            .map(|x| q.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Admissibility by path tracing: follow `kappa(t) = Re kappa + i t Im kappa`
/// from the real axis and reject if any `kappa(t)^2 - lambda_n` crosses its
/// cut `arg = -2 arg sigma`. Real non-threshold frequencies are admissible.
pub fn traced_admissible(kappa: C64, lambdas: &[f64], arg_sigma: f64, steps: usize) -> bool {
    if !(kappa.re > 0.0) || kappa.im > 0.0 {
        return false;
    }
    let rot = C64::from_polar(1.0, 2.0 * arg_sigma);
    for &l in lambdas {
        if (kappa.re * kappa.re - l).abs() < 1e-14 && kappa.im == 0.0 {
            return false;
        }
        let mut prev: Option<C64> = None;
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let k = C64::new(kappa.re, t * kappa.im);
            let w = (k * k - l) * rot;
            if let Some(p) = prev {
                let crosses = (p.im > 0.0) != (w.im > 0.0) && p.re + w.re > 0.0;
                if crosses {
                    return false;
                }
            }
            prev = Some(w);
        }
        let end = prev.unwrap();
        if end.im == 0.0 && end.re > 0.0 && kappa.im != 0.0 {
            return false;
        }
    }
    true
}
