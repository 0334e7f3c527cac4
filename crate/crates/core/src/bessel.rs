//! Integer-order Bessel functions of the first kind and the zeros of their
//! derivatives, as needed for Neumann spectra of the disk.

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 1e-3;

/// `J_0(x) .. J_{m_max+1}(x)` for `x >= 0`.
///
/// Uses Miller's backward recurrence normalized by `J_0 + 2 sum J_{2k} = 1`,
/// and the ascending series for tiny arguments.
pub fn bessel_j_orders(m_max: usize, x: f64) -> Vec<f64> {
    let len = m_max + 2;
    let x = x.abs();
    if x < SERIES_LIMIT {
        let mut out = Vec::with_capacity(len);
        let mut lead = 1.0;
        for m in 0..len {
            if m > 0 {
                lead *= x / (2.0 * m as f64);
            }
            let q = x * x / 4.0;
            out.push(lead * (1.0 - q / (m as f64 + 1.0) + q * q / (2.0 * (m as f64 + 1.0) * (m as f64 + 2.0))));
        }
        return out;
    }
    let top = (len as f64).max(x);
    let mut start = (top + 20.0 + 8.0 * top.sqrt()) as usize;
    start += start % 2;
    let mut values = vec![0.0; start + 2];
    values[start + 1] = 0.0;
    values[start] = 1e-300;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        values[k - 1] = 2.0 * k as f64 / x * values[k] - values[k + 1];
        if values[k - 1].abs() > 1e250 {
            for v in values.iter_mut().take(start + 2).skip(k - 1) {
                *v *= 1e-250;
            }
            norm *= 1e-250;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * values[k - 1];
        }
    }
    norm += values[0];
    values.truncate(len);
    values.iter_mut().for_each(|v| *v /= norm);
    values
}

pub fn bessel_j(m: usize, x: f64) -> f64 {
    let v = bessel_j_orders(m, x);
    if x < 0.0 && m % 2 == 1 {
        -v[m]
    } else {
        v[m]
    }
}

/// `J_m'(x)` for `x >= 0`.
pub fn bessel_j_prime(m: usize, x: f64) -> f64 {
    let v = bessel_j_orders(m, x);
    if m == 0 {
        -v[1]
    } else {
        0.5 * (v[m - 1] - v[m + 1])
    }
}

/// `(J_m, J_m', J_m'')` at `x > 0`, the second derivative from Bessel's equation.
fn jet(m: usize, x: f64) -> (f64, f64, f64) {
    let v = bessel_j_orders(m, x);
    let j = v[m];
    let dj = if m == 0 { -v[1] } else { 0.5 * (v[m - 1] - v[m + 1]) };
    let mf = m as f64;
    let ddj = -dj / x - (1.0 - mf * mf / (x * x)) * j;
    (j, dj, ddj)
}

/// The first `count` non-negative zeros `mu_{m,1} < mu_{m,2} < ...` of `J_m'`.
///
/// For `m = 0` the list starts with the trivial zero `mu_{0,1} = 0`.
pub fn bessel_j_prime_zeros(m: usize, count: usize) -> Result<Vec<f64>> {
    let limit = (m as f64 + 10.0) + 4.0 * count as f64 + 50.0;
    let roots = scan_zeros(m, limit, count)?;
    if roots.len() < count {
        return Err(Error::RootFinding(format!(
            "no bracket for zero ({m},{}) of J_m' below {limit}",
            roots.len() + 1
        )));
    }
    Ok(roots)
}

/// All zeros of `J_m'` in `[0, bound)`, including `0` for `m = 0`.
pub fn bessel_j_prime_zeros_below(m: usize, bound: f64) -> Result<Vec<f64>> {
    scan_zeros(m, bound, usize::MAX)
}

fn scan_zeros(m: usize, bound: f64, count: usize) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    if count == 0 || bound <= 0.0 {
        return Ok(roots);
    }
    if m == 0 {
        roots.push(0.0);
    }
    let step = 0.05;
    let mut a = (0.5 * m as f64).max(0.1);
    let mut fa = bessel_j_prime(m, a);
    while roots.len() < count && a < bound {
        let b = a + step;
        let fb = bessel_j_prime(m, b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            let root = refine(m, a, b).ok_or_else(|| {
                Error::RootFinding(format!("zero ({m},{}) of J_m' failed to converge", roots.len() + 1))
            })?;
            if root >= bound {
                break;
            }
            roots.push(root);
        }
        a = b;
        fa = fb;
    }
    Ok(roots)
}

fn refine(m: usize, mut lo: f64, mut hi: f64) -> Option<f64> {
    let flo = bessel_j_prime(m, lo);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if bessel_j_prime(m, mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..20 {
        let (_, d, dd) = jet(m, x);
        let dx = d / dd;
        x -= dx;
        if dx.abs() < 1e-15 * x.max(1.0) {
            break;
        }
    }
    (x.is_finite() && (x - 0.5 * (lo + hi)).abs() < 1e-6).then_some(x)
}
