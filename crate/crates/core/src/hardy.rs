//! Hardy space infinite elements for a single waveguide mode.
//!
//! The radial unknown of a mode is a pair `(f0, F)` with `f0` the trace value
//! and `F` in the Hardy space of the unit disk, expanded in monomials
//! `z^0..z^N` and optionally the pole function `b_zeta(z) = 1/(1 - zeta z)`.
//! DOFs are ordered `(f0, F_0, .., F_N[, beta])`, so a block has
//! `N + 2` (plain) or `N + 3` (modified) radial DOFs.
//!
//! The operators `T_pm(f0, F) = (f0 + (z +- 1) F) / 2` are assembled including
//! the factor 1/2. For the pole column, the partial fraction
//! `(z +- 1)/(1 - zeta z) = -1/zeta + (1/zeta +- 1)/(1 - zeta z)`
//! gives the entries `-1/zeta` (row `z^0`) and `1/zeta +- 1` (row `b_zeta`).
//!
//! The Gram form `q(U, V) = -i k0/pi int U(z) V(conj z) |dz|` is bilinear:
//! complex-symmetric matrices are never conjugated.

use crate::branch::mobius;
use crate::diagnostics::Warning;
use crate::error::{invalid, Error, Result};
use crate::linalg::{dense_norm1, inverse_norm1_estimate, DenseLu, DenseMatrix, Factorization, C64, I};

/// Below this `|zeta|` the pole basis is nearly dependent on the monomials.
pub const SMALL_POLE: f64 = 0.2;

/// Condition estimates above this are rejected as singular.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// Condition estimates above this produce a warning.
pub const WARN_CONDITION: f64 = 1e10;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// `(T+, T-)` for monomial degree `N`, each `(N+2) x (N+2)`.
pub fn build_t_matrices(n: usize) -> (DenseMatrix, DenseMatrix) {
    let dim = n + 2;
    let build = |sign: f64| {
        let mut t = DenseMatrix::zeros(dim, dim);
        t[(0, 0)] = C64::new(0.5, 0.0);
        for j in 0..=n {
            // F_j contributes +-F_j to z^j and F_j to z^{j+1}
            t[(j, j + 1)] += C64::new(0.5 * sign, 0.0);
            t[(j + 1, j + 1)] += C64::new(0.5, 0.0);
        }
        t
    };
    (build(1.0), build(-1.0))
}

/// `(T~+, T~-)` with the pole basis `b_zeta` appended, each `(N+3) x (N+3)`.
pub fn build_modified_t_matrices(n: usize, zeta: C64) -> Result<(DenseMatrix, DenseMatrix)> {
    let r = zeta.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid("zeta", format!("need 0 < |zeta| < 1, got {r}")));
    }
    let (tp, tm) = build_t_matrices(n);
    let dim = n + 3;
    let extend = |t: &DenseMatrix, sign: f64| {
        let mut out = DenseMatrix::zeros(dim, dim);
        for i in 0..dim - 1 {
            for j in 0..dim - 1 {
                out[(i, j)] = t[(i, j)];
            }
        }
        out[(0, dim - 1)] = -0.5 / zeta;
        out[(dim - 1, dim - 1)] = 0.5 * (1.0 / zeta + sign);
        out
    };
    Ok((extend(&tp, 1.0), extend(&tm, -1.0)))
}

/// Gram matrix of `q` on `z^0..z^{N+1}` and, if given, `b_zeta`.
pub fn gram_q(kappa0: C64, n: usize, zeta: Option<C64>) -> Result<DenseMatrix> {
    let scale = -2.0 * I * kappa0;
    let mono = n + 2;
    match zeta {
        None => Ok(DenseMatrix::from_fn(mono, mono, |i, j| if i == j { scale } else { zero() })),
        Some(z) => {
            if !(z.norm() < 1.0) {
                return Err(invalid("zeta", format!("need |zeta| < 1, got {}", z.norm())));
            }
            let corner = 1.0 - z * z;
            if corner.norm() == 0.0 {
                return Err(invalid("zeta", "zeta^2 = 1 makes the Gram matrix singular"));
            }
            let dim = mono + 1;
            Ok(DenseMatrix::from_fn(dim, dim, |i, j| {
                if i == dim - 1 && j == dim - 1 {
                    scale / corner
                } else if i == dim - 1 {
                    scale * z.powi(j as i32)
                } else if j == dim - 1 {
                    scale * z.powi(i as i32)
                } else if i == j {
                    scale
                } else {
                    zero()
                }
            }))
        }
    }
}

/// Radial Hardy discretization for one waveguide.
#[derive(Debug, Clone)]
pub struct HardyBlock {
    kappa0: C64,
    n: usize,
    pole: Option<C64>,
    t_plus: DenseMatrix,
    t_minus: DenseMatrix,
    gram: DenseMatrix,
    stiffness: DenseMatrix,
    mass: DenseMatrix,
    warnings: Vec<Warning>,
}

impl HardyBlock {
    /// A plain block with monomials up to degree `n`.
    pub fn new(kappa0: C64, n: usize) -> Result<Self> {
        Self::build(kappa0, n, None)
    }

    /// A block enriched by `b_zeta`.
    pub fn modified(kappa0: C64, n: usize, zeta: C64) -> Result<Self> {
        Self::build(kappa0, n, Some(zeta))
    }

    fn build(kappa0: C64, n: usize, pole: Option<C64>) -> Result<Self> {
        if !(kappa0.re > 0.0 && kappa0.im > 0.0) {
            return Err(invalid("kappa0", format!("real and imaginary parts must be positive, got {kappa0}")));
        }
        let mut warnings = Vec::new();
        let (t_plus, t_minus) = match pole {
            None => build_t_matrices(n),
            Some(z) => {
                let t = build_modified_t_matrices(n, z)?;
                if z.norm() < SMALL_POLE {
                    warnings.push(Warning::SmallPole { zeta_abs: z.norm() }.emit());
                }
                t
            }
        };
        let gram = gram_q(kappa0, n, pole)?;
        let stiffness = t_plus.transpose() * (&gram * &t_plus);
        let mass = (t_minus.transpose() * (&gram * &t_minus)) * faer::Scale(1.0 / ((I * kappa0) * (I * kappa0)));
        Ok(Self {
            kappa0,
            n,
            pole,
            t_plus,
            t_minus,
            gram,
            stiffness,
            mass,
            warnings,
        })
    }

    pub fn kappa0(&self) -> C64 {
        self.kappa0
    }

    /// Highest monomial degree.
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn pole(&self) -> Option<C64> {
        self.pole
    }

    /// `N + 2` for a plain block, `N + 3` with the pole basis.
    pub fn radial_dofs(&self) -> usize {
        self.n + 2 + usize::from(self.pole.is_some())
    }

    pub fn t_plus(&self) -> &DenseMatrix {
        &self.t_plus
    }

    pub fn t_minus(&self) -> &DenseMatrix {
        &self.t_minus
    }

    pub fn gram(&self) -> &DenseMatrix {
        &self.gram
    }

    /// `S = T+^T Q T+`, the radial stiffness.
    pub fn stiffness(&self) -> &DenseMatrix {
        &self.stiffness
    }

    /// `M = T-^T Q T- / (i k0)^2`, the radial mass.
    pub fn mass(&self) -> &DenseMatrix {
        &self.mass
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// `S + (lambda - kappa^2) M`.
    pub fn mode_matrix(&self, kappa: C64, lambda: f64) -> DenseMatrix {
        let shift = lambda - kappa * kappa;
        DenseMatrix::from_fn(self.radial_dofs(), self.radial_dofs(), |i, j| {
            self.stiffness[(i, j)] + shift * self.mass[(i, j)]
        })
    }

    /// Radial coefficients of `g e^{i kappa0 x}` (trace `g`, vanishing Hardy part).
    pub fn trace_extension(&self, g: C64) -> Vec<C64> {
        let mut v = vec![zero(); self.radial_dofs()];
        v[0] = g;
        v
    }
}

/// `(S, M)` of a block.
pub fn assemble_mode_matrices(block: &HardyBlock) -> (DenseMatrix, DenseMatrix) {
    (block.stiffness.clone(), block.mass.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardySolution {
    /// Trace value at the interface.
    pub u0: C64,
    /// Monomial coefficients `F_0..F_N`.
    pub hardy_coeffs: Vec<C64>,
    /// Coefficient of `b_zeta` for modified blocks.
    pub pole_coeff: Option<C64>,
    pub condition: f64,
    pub warnings: Vec<Warning>,
}

impl HardySolution {
    /// The full radial vector `(f0, F, [beta])`.
    pub fn radial_vector(&self) -> Vec<C64> {
        let mut v = vec![self.u0];
        v.extend_from_slice(&self.hardy_coeffs);
        v.extend(self.pole_coeff);
        v
    }
}

/// Solves the outgoing problem `-u'' + (lambda - kappa^2) u = 0`, `u'(0) = g`,
/// i.e. `(S + (lambda - kappa^2) M) x = -g e_0`.
pub fn solve_mode_hsm(kappa: C64, lambda: f64, block: &HardyBlock, g: C64) -> Result<HardySolution> {
    let a = block.mode_matrix(kappa, lambda);
    let lu = DenseLu::factor(&a)?;
    let condition = inverse_norm1_estimate(&lu) * dense_norm1(&a);
    let mut warnings = block.warnings.clone();
    if !(condition < SINGULAR_CONDITION) {
        return Err(Error::Singular {
            context: format!("Hardy mode system at kappa = {kappa}, lambda = {lambda}"),
            condition,
        });
    }
    if condition > WARN_CONDITION {
        warnings.push(
            Warning::IllConditioned {
                context: "Hardy mode system".into(),
                condition,
            }
            .emit(),
        );
    }
    let mut rhs = vec![zero(); block.radial_dofs()];
    rhs[0] = -g;
    let x = lu.solve(&rhs);
    let n_mono = block.degree() + 1;
    Ok(HardySolution {
        u0: x[0],
        hardy_coeffs: x[1..=n_mono].to_vec(),
        pole_coeff: block.pole.map(|_| x[n_mono + 1]),
        condition,
        warnings,
    })
}

/// Outgoing amplitude `c_n` of `c_n e^{i kappa_n x}`; it equals the trace value.
pub fn hardy_mode_evaluate(sol: &HardySolution, _kappa_n: C64, _kappa0: C64) -> C64 {
    sol.u0
}

/// Exact Hardy coefficients `c zeta^{j+1}`, `j = 0..=n`, of `c e^{i kappa_n x}`.
pub fn exact_hardy_coefficients(c: C64, kappa_n: C64, kappa0: C64, n: usize) -> Vec<C64> {
    let zeta = mobius(kappa_n, kappa0);
    (0..=n).map(|j| c * zeta.powi(j as i32 + 1)).collect()
}

/// Time-averaged flux `Im(conj(u) u')` of `c e^{i kappa_n x}` at `x = 0`.
pub fn outgoing_flux(c: C64, kappa_n: C64) -> f64 {
    (c.conj() * I * kappa_n * c).im
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleChoice {
    pub index: Option<usize>,
    pub zeta: Option<C64>,
    pub warnings: Vec<Warning>,
}

/// Picks the mode with the largest `|zeta_n|` among those at or above
/// `threshold`. Several qualifying modes produce a warning.
pub fn select_pole(zetas: &[C64], threshold: f64) -> PoleChoice {
    let critical: Vec<usize> = (0..zetas.len()).filter(|&i| zetas[i].norm() >= threshold).collect();
    let mut warnings = Vec::new();
    if critical.len() > 1 {
        warnings.push(
            Warning::MultipleCriticalModes {
                indices: critical.clone(),
            }
            .emit(),
        );
    }
    let index = critical
        .iter()
        .copied()
        .max_by(|&a, &b| zetas[a].norm().total_cmp(&zetas[b].norm()));
    PoleChoice {
        index,
        zeta: index.map(|i| zetas[i]),
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, dense_symmetry_defect};

    #[test]
    fn t_pattern_small() {
        let (tp, tm) = build_t_matrices(1);
        let expect_p = [[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]];
        let expect_m = [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(tp[(i, j)], c(0.5 * expect_p[i][j], 0.0));
                assert_eq!(tm[(i, j)], c(0.5 * expect_m[i][j], 0.0));
            }
        }
    }

    #[test]
    fn t_difference_is_identity_on_hardy_part() {
        let (tp, tm) = build_t_matrices(4);
        for i in 0..6 {
            for j in 1..6 {
                let d = tp[(i, j)] - tm[(i, j)];
                assert_eq!(d, c(if i + 1 == j { 1.0 } else { 0.0 }, 0.0));
            }
        }
    }

    #[test]
    fn modified_blocks_contain_plain_ones() {
        let z = c(0.3, 0.4);
        let (tp, _) = build_t_matrices(3);
        let (mp, mm) = build_modified_t_matrices(3, z).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(mp[(i, j)], tp[(i, j)]);
            }
        }
        assert!((mm[(0, 5)] + 0.5 / z).norm() < 1e-15);
        assert!((mm[(5, 5)] - 0.5 * (1.0 / z - 1.0)).norm() < 1e-15);
        assert!(build_modified_t_matrices(3, c(0.0, 0.0)).is_err());
        assert!(build_modified_t_matrices(3, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn partial_fraction_on_circle() {
        let z0 = c(0.3, 0.4);
        for k in 0..100 {
            let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 100.0);
            for s in [1.0, -1.0] {
                let lhs = (z + s) / (1.0 - z0 * z);
                let rhs = -1.0 / z0 + (1.0 / z0 + s) / (1.0 - z0 * z);
                assert!((lhs - rhs).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn stiffness_corner_and_symmetry() {
        let k0 = c(2.0, 2.0);
        let b = HardyBlock::new(k0, 6).unwrap();
        assert!((b.stiffness()[(0, 0)] + I * k0 / 2.0).norm() < 1e-15);
        assert!(dense_symmetry_defect(b.stiffness()) < 1e-14);
        assert!(dense_symmetry_defect(b.mass()) < 1e-14);
        let mb = HardyBlock::modified(k0, 6, c(0.5, 0.1)).unwrap();
        assert!(dense_symmetry_defect(mb.stiffness()) < 1e-14);
        assert!(dense_symmetry_defect(mb.mass()) < 1e-14);
        for i in 0..8 {
            for j in 0..8 {
                assert!((mb.stiffness()[(i, j)] - b.stiffness()[(i, j)]).norm() < 1e-14);
                assert!((mb.mass()[(i, j)] - b.mass()[(i, j)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn small_pole_warns() {
        let b = HardyBlock::modified(c(2.0, 2.0), 4, c(0.1, 0.0)).unwrap();
        assert!(matches!(b.warnings()[0], Warning::SmallPole { .. }));
    }

    #[test]
    fn mode_solves() {
        let k0 = c(2.0, 2.0);
        let kappa = c(3.5, 0.0);
        let b = HardyBlock::new(k0, 30).unwrap();
        let zero_sol = solve_mode_hsm(kappa, 0.0, &b, zero()).unwrap();
        assert!(zero_sol.radial_vector().iter().all(|v| v.norm() == 0.0));
        let g = c(0.7, -0.2);
        let sol = solve_mode_hsm(kappa, 0.0, &b, g).unwrap();
        let exact = g / (I * kappa);
        assert!((sol.u0 - exact).norm() < 1e-8 * exact.norm());

        let zeta = mobius(kappa, k0);
        let mb = HardyBlock::modified(k0, 2, zeta).unwrap();
        let sol = solve_mode_hsm(kappa, 0.0, &mb, g).unwrap();
        assert!((sol.u0 - exact).norm() < 1e-12 * exact.norm());
        assert!(sol.hardy_coeffs.iter().all(|v| v.norm() < 1e-12));
        assert!((sol.pole_coeff.unwrap() - exact * zeta).norm() < 1e-12);
    }

    #[test]
    fn amplitude_and_flux() {
        let k0 = c(2.0, 2.0);
        let kappa = c(3.5, 0.0);
        let b = HardyBlock::new(k0, 30).unwrap();
        let g = c(1.0, 0.0);
        let sol = solve_mode_hsm(kappa, 0.0, &b, g).unwrap();
        let amp = hardy_mode_evaluate(&sol, kappa, k0);
        assert!((amp - g / (I * kappa)).norm() < 1e-8);
        assert!(outgoing_flux(amp, kappa) > 0.0);
        assert_eq!(hardy_mode_evaluate(&solve_mode_hsm(kappa, 0.0, &b, zero()).unwrap(), kappa, k0), zero());
    }

    #[test]
    fn pole_selection() {
        let z = [c(0.2, 0.0), c(0.5, 0.5), c(-0.95, 0.0), c(0.0, 0.92)];
        let p = select_pole(&z, 0.9);
        assert_eq!(p.index, Some(2));
        assert!(matches!(&p.warnings[0], Warning::MultipleCriticalModes { indices } if indices == &vec![2, 3]));
        assert_eq!(select_pole(&z, 0.99).index, None);
    }
}
