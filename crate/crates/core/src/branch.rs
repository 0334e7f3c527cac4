//! Branch-cut square roots, longitudinal wavenumbers, admissible frequencies
//! and the closed-form error and coercivity bounds shared by both exterior
//! discretizations.
//!
//! A complex scaling `sigma` (PML) and a Hardy parameter `kappa0` (HSM) select
//! the same branch through `sigma = i / kappa0`, so every function here is
//! parametrized by a [`BranchParam`].

use std::f64::consts::PI;

use crate::diagnostics::Warning;
use crate::error::{invalid, Error, Result};
use crate::linalg::{C64, I};

/// Default soft Wood-anomaly threshold on `|kappa^2 - lambda_n|`.
pub const DEFAULT_WOOD_SOFT: f64 = 1e-3;

/// Relative hard threshold: closer than this counts as an exact anomaly.
pub const WOOD_HARD_REL: f64 = 1e-12;

/// Principal argument in `[-pi, pi)`.
pub fn arg(z: C64) -> f64 {
    let a = z.im.atan2(z.re);
    if a >= PI {
        -PI
    } else {
        a
    }
}

/// A complex scaling parameter with `0 < arg(sigma) < pi/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchParam {
    sigma: C64,
    arg_sigma: f64,
}

impl BranchParam {
    pub fn new(sigma: C64) -> Result<Self> {
        let a = arg(sigma);
        if !(a > 0.0 && a < PI / 2.0) || !sigma.re.is_finite() || !sigma.im.is_finite() {
            return Err(invalid(
                "sigma",
                format!("arg(sigma) = {a} must lie in (0, pi/2), got sigma = {sigma}"),
            ));
        }
        Ok(Self { sigma, arg_sigma: a })
    }

    /// The branch used by the Hardy method with parameter `kappa0`.
    pub fn from_kappa0(kappa0: C64) -> Result<Self> {
        if !(kappa0.re > 0.0 && kappa0.im > 0.0) {
            return Err(invalid(
                "kappa0",
                format!("real and imaginary parts must be positive, got {kappa0}"),
            ));
        }
        Self::new(I / kappa0)
    }

    pub fn sigma(&self) -> C64 {
        self.sigma
    }

    pub fn arg_sigma(&self) -> f64 {
        self.arg_sigma
    }

    /// `kappa0 = i / sigma`.
    pub fn kappa0(&self) -> C64 {
        I / self.sigma
    }
}

/// `sqrt(|z|) e^{i phi/2}` with `phi` taken in `[-2 arg sigma, 2 pi - 2 arg sigma)`.
///
/// Points exactly on the cut take the lower edge of the window.
pub fn branch_sqrt(z: C64, sigma: &BranchParam) -> C64 {
    if z == C64::new(0.0, 0.0) {
        return z;
    }
    let lower = -2.0 * sigma.arg_sigma;
    let mut phi = arg(z);
    if phi < lower {
        phi += 2.0 * PI;
    }
    C64::from_polar(z.norm().sqrt(), phi / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalWavenumber {
    pub lambda: f64,
    pub kappa_n: C64,
    /// `(kappa_n - kappa0) / (kappa_n + kappa0)` with `kappa0 = i / sigma`.
    pub zeta: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wavenumbers {
    pub modes: Vec<ModalWavenumber>,
    pub warnings: Vec<Warning>,
}

pub fn mobius(kappa_n: C64, kappa0: C64) -> C64 {
    (kappa_n - kappa0) / (kappa_n + kappa0)
}

/// `kappa_n = sqrt(kappa^2 - lambda_n)^sigma` for every eigenvalue, with the
/// default Wood-proximity warning threshold.
pub fn longitudinal_wavenumbers(kappa: C64, lambdas: &[f64], sigma: &BranchParam) -> Result<Wavenumbers> {
    longitudinal_wavenumbers_with(kappa, lambdas, sigma, DEFAULT_WOOD_SOFT)
}

pub fn longitudinal_wavenumbers_with(
    kappa: C64,
    lambdas: &[f64],
    sigma: &BranchParam,
    wood_soft: f64,
) -> Result<Wavenumbers> {
    let k2 = kappa * kappa;
    let hard = WOOD_HARD_REL * kappa.norm_sqr().max(1.0);
    let kappa0 = sigma.kappa0();
    let mut warnings = Vec::new();
    let mut modes = Vec::with_capacity(lambdas.len());
    let mut closest: Option<(usize, f64)> = None;
    for (index, &lambda) in lambdas.iter().enumerate() {
        let distance = (k2 - lambda).norm();
        if distance < hard {
            return Err(Error::WoodAnomaly { index, distance });
        }
        if distance < wood_soft && closest.is_none_or(|(_, d)| distance < d) {
            closest = Some((index, distance));
        }
        let kappa_n = branch_sqrt(k2 - lambda, sigma);
        modes.push(ModalWavenumber {
            lambda,
            kappa_n,
            zeta: mobius(kappa_n, kappa0),
        });
    }
    if let Some((index, distance)) = closest {
        warnings.push(Warning::NearWoodAnomaly { index, distance }.emit());
    }
    Ok(Wavenumbers { modes, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub inside: bool,
    /// Number of eigenvalues (with multiplicity) below `Re(kappa)^2`.
    pub component_index: Option<usize>,
}

fn check_sorted(lambdas: &[f64]) -> Result<()> {
    if lambdas.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("spectrum", "eigenvalues must be non-decreasing"));
    }
    Ok(())
}

/// Decides membership of `kappa` in the admissible set through the component
/// inequalities
/// `sqrt(l_n0) < Re k < sqrt(l_{n0+1})` and
/// `arg(k^2 - l_{n0+1}) < -2 arg sigma < arg(k^2 - l_n0)`.
///
/// The spectrum must extend beyond `Re(kappa)^2`.
pub fn admissible_set_classify(kappa: C64, lambdas: &[f64], sigma: &BranchParam) -> Result<Membership> {
    classify(kappa, lambdas, sigma, false)
}

/// As [`admissible_set_classify`], with `lambdas` taken as the entire
/// (finite) transverse spectrum, as for discrete or one-dimensional cross
/// sections; the upper inequality is void above the last eigenvalue.
pub fn admissible_set_classify_complete(kappa: C64, lambdas: &[f64], sigma: &BranchParam) -> Result<Membership> {
    classify(kappa, lambdas, sigma, true)
}

fn classify(kappa: C64, lambdas: &[f64], sigma: &BranchParam, complete: bool) -> Result<Membership> {
    if !(kappa.re > 0.0) {
        return Err(Error::Domain(format!("Re(kappa) must be positive, got {kappa}")));
    }
    check_sorted(lambdas)?;
    let outside = Membership {
        inside: false,
        component_index: None,
    };
    if kappa.im > 0.0 {
        return Ok(outside);
    }
    let re = kappa.re;
    let n0 = lambdas.iter().take_while(|&&l| l.max(0.0).sqrt() < re).count();
    if n0 == lambdas.len() && !complete {
        return Err(Error::InsufficientSpectrum(format!(
            "no stored eigenvalue exceeds Re(kappa)^2 = {}",
            re * re
        )));
    }
    if n0 < lambdas.len() && lambdas[n0].max(0.0).sqrt() <= re {
        return Ok(outside);
    }
    let k2 = kappa * kappa;
    let cut = -2.0 * sigma.arg_sigma();
    let upper_ok = n0 == lambdas.len() || arg(k2 - lambdas[n0]) < cut;
    let lower_ok = n0 == 0 || cut < arg(k2 - lambdas[n0 - 1]);
    if upper_ok && lower_ok {
        Ok(Membership {
            inside: true,
            component_index: Some(n0),
        })
    } else {
        Ok(outside)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoercivityData {
    /// Number of rotated modes.
    pub m: usize,
    /// Unit rotations for the first `m` modes.
    pub theta: Vec<C64>,
    /// Per-mode constants for all evaluated modes.
    pub alpha_n: Vec<f64>,
    /// `min{1/Re sigma, Re sigma/2}`, the limit of `alpha_n`.
    pub alpha_tail: f64,
    /// Minimum of `alpha_n` and `alpha_tail`.
    pub alpha: f64,
    pub c_s: f64,
}

/// Rotations `theta_n`, constants `alpha_n` and the continuity bound of the
/// complex-scaled modal forms `s_n(u,v) = <u',v'>/sigma + sigma (lambda_n - kappa^2) <u,v>`.
///
/// `M` is evaluated at the given `kappa` rather than uniformly over its
/// component. At most `n_max` modes are evaluated; `None` uses all of them.
pub fn coercivity_constants(
    kappa: C64,
    lambdas: &[f64],
    sigma: &BranchParam,
    n_max: Option<usize>,
) -> Result<CoercivityData> {
    let membership = admissible_set_classify(kappa, lambdas, sigma)?;
    let n0 = match membership {
        Membership {
            inside: true,
            component_index: Some(n0),
        } => n0,
        _ => return Err(Error::Domain(format!("kappa = {kappa} is not admissible"))),
    };
    let s = sigma.sigma();
    let a_s = sigma.arg_sigma();
    let k2 = kappa * kappa;
    let threshold = 2.0 * (s * k2).re / s.re;
    let j = (0..lambdas.len())
        .find(|&j| lambdas.get(j).is_none_or(|&l| l > threshold))
        .unwrap_or(lambdas.len());
    let m = n0.max(j);
    let n_eval = n_max.unwrap_or(lambdas.len()).min(lambdas.len()).max(m.min(lambdas.len()));

    let rotated_alpha = |theta: C64, lambda: f64| -> f64 {
        let a = (theta / s).re;
        let b = (theta * s * (lambda - k2)).re / (2.0 + lambda);
        a.min(b)
    };

    let mut theta = Vec::with_capacity(m);
    let mut alpha_n = Vec::with_capacity(n_eval);
    for (n, &lambda) in lambdas.iter().enumerate().take(n_eval) {
        if n < n0 {
            let t = C64::from_polar(1.0, (PI + a_s - arg(s * (k2 - lambda))) / 2.0);
            theta.push(t);
            alpha_n.push(rotated_alpha(t, lambda));
        } else if n < m {
            let t = C64::from_polar(1.0, (a_s - arg(s * (lambda - k2))) / 2.0);
            theta.push(t);
            alpha_n.push(rotated_alpha(t, lambda));
        } else {
            alpha_n.push((1.0 / s.re).min(s.re * lambda / (4.0 + 2.0 * lambda)));
        }
    }
    let alpha_tail = (1.0 / s.re).min(s.re / 2.0);
    let alpha = alpha_n.iter().copied().fold(alpha_tail, f64::min);
    let c_s = (1.0 / s.norm() + (s * k2).norm()).max(s.norm());
    Ok(CoercivityData {
        m,
        theta,
        alpha_n,
        alpha_tail,
        alpha,
        c_s,
    })
}

/// An error bound that is either finite or provably unavailable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    /// The bound does not exist; `mode` names the offending mode if any.
    Unbounded { mode: Option<usize> },
}

impl Bound {
    pub fn value(&self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(*v),
            Bound::Unbounded { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    /// Finite value or `f64::INFINITY`, for plotting.
    pub fn saturate(&self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }
}

/// Explicit Hardy error indicator for a superposition of modes with weights `w_n`:
///
/// `eta = C/alpha * sqrt(sum (3+2 l_n) |w_n|^2 |e^{i k_n}|^2 |d_n|^{2(N+2)} / (1-|d_n|))`
///
/// with `C = 4/pi max{|k0| + |k^2/k0|, 1/|k0|}`, `d_n = (k_n-k0)/(k_n+k0)` and
/// `alpha = min alpha_n`, where with `w = (l_n^2 - k^2)/(k0 (1+l_n))`,
/// `alpha_n = min{Re k0, Re w}/pi` if `Re w > 0` and `min{Im k0, Im w}/pi` otherwise.
pub fn eta_bound(kappa0: C64, kappa: C64, n: usize, modes: &[(f64, C64)]) -> Result<Bound> {
    let branch = BranchParam::from_kappa0(kappa0)?;
    let k2 = kappa * kappa;
    let c = 4.0 / PI * (kappa0.norm() + (k2 / kappa0).norm()).max(1.0 / kappa0.norm());
    let mut alpha = f64::INFINITY;
    let mut sum = 0.0;
    for (index, &(lambda, weight)) in modes.iter().enumerate() {
        let w = (lambda * lambda - k2) / (kappa0 * (1.0 + lambda));
        let alpha_n = if w.re > 0.0 {
            kappa0.re.min(w.re)
        } else {
            kappa0.im.min(w.im)
        } / PI;
        alpha = alpha.min(alpha_n);
        let kappa_n = branch_sqrt(k2 - lambda, &branch);
        let d = mobius(kappa_n, kappa0).norm();
        if !(d < 1.0) {
            return Ok(Bound::Unbounded { mode: Some(index) });
        }
        sum += (3.0 + 2.0 * lambda) * weight.norm_sqr() * (I * kappa_n).exp().norm_sqr() * d.powi(2 * (n as i32 + 2))
            / (1.0 - d);
    }
    if !(alpha > 0.0) {
        return Ok(Bound::Unbounded { mode: None });
    }
    Ok(Bound::Finite(c / alpha * sum.sqrt()))
}

/// Squared exterior error of one Hardy mode:
/// `(3 + 2 lambda) |c|^2 |zeta|^{2(N+2)} / (1 - |zeta|^2)`.
pub fn hsm_modal_error(c_n: C64, lambda_n: f64, zeta_n: C64, n: usize) -> Bound {
    let z = zeta_n.norm();
    if !(z < 1.0) {
        return Bound::Unbounded { mode: None };
    }
    Bound::Finite((3.0 + 2.0 * lambda_n) * c_n.norm_sqr() * z.powi(2 * (n as i32 + 2)) / (1.0 - z * z))
}

/// Bound on the squared `H^1((rho, inf) x Gamma)` norm of the complex-scaled
/// field beyond the truncation point:
/// `sum |c_n|^2 (|k_n s|^2 + (1+l_n)/(-2 Re(i k_n s))) e^{2 Re(i k_n s) rho}`.
///
/// The gradient term is integrated without the factor `1/(-2 Re(i k_n s))`, so
/// the bound dominates the exact tail norm only where that factor is at most one.
pub fn pml_truncation_bound(coeffs: &[(C64, f64)], kappa: C64, sigma: &BranchParam, rho: f64) -> Result<Bound> {
    if !(rho > 0.0) {
        return Err(invalid("rho", format!("must be positive, got {rho}")));
    }
    let s = sigma.sigma();
    let k2 = kappa * kappa;
    let mut total = 0.0;
    for (index, &(c, lambda)) in coeffs.iter().enumerate() {
        let ks = branch_sqrt(k2 - lambda, sigma) * s;
        let decay = (I * ks).re;
        if !(decay < 0.0) {
            return Ok(Bound::Unbounded { mode: Some(index) });
        }
        total += c.norm_sqr() * (ks.norm_sqr() + (1.0 + lambda) / (-2.0 * decay)) * (2.0 * decay * rho).exp();
    }
    Ok(Bound::Finite(total))
}
