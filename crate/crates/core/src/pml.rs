//! Complex-scaled layers truncated by a homogeneous Dirichlet condition.
//!
//! In local coordinates `x in (0, rho)` a mode satisfies
//! `-(1/sigma) u'' + sigma (lambda - kappa^2) u = 0` with the scaled Neumann
//! datum `u'(0) = sigma g` and `u(rho) = 0`. The weak form reads
//! `(1/sigma) <u', v'> + sigma (lambda - kappa^2) <u, v> = -g v(0)`.

use std::io::{self, Write};

use crate::branch::{branch_sqrt, BranchParam};
use crate::diagnostics::Warning;
use crate::error::{invalid, Error, Result};
use crate::fem1d::{Mesh1d, Space1d};
use crate::linalg::{inverse_norm1_estimate, Factorization, SparseLu, SparseMatrix, C64, I};

/// Default geometric grading ratio of layer meshes.
pub const DEFAULT_GRADING: f64 = 1.2;

/// Condition estimates above this produce a warning.
pub const WARN_CONDITION: f64 = 1e10;

/// Default layer length for radial resolution `n`: `rho_N = 2 + N/2`.
pub fn default_rho(n: usize) -> f64 {
    2.0 + n as f64 / 2.0
}

#[derive(Debug, Clone)]
pub struct PmlLayer {
    sigma: BranchParam,
    space: Space1d,
    stiffness: SparseMatrix,
    mass: SparseMatrix,
}

impl PmlLayer {
    /// Layer on `[0, rho]` with `elements` geometrically graded elements.
    pub fn new(sigma: BranchParam, rho: f64, elements: usize, order: usize, grading: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(invalid("rho", format!("must be positive, got {rho}")));
        }
        Self::from_mesh(sigma, Mesh1d::graded(0.0, rho, elements, grading)?, order)
    }

    pub fn from_mesh(sigma: BranchParam, mesh: Mesh1d, order: usize) -> Result<Self> {
        if mesh.start() != 0.0 {
            return Err(Error::Mesh(format!("layer mesh must start at 0, starts at {}", mesh.start())));
        }
        let space = Space1d::new(mesh, order)?;
        let (k, m) = space.assemble_plain();
        let free = space.ndofs() - 1;
        Ok(Self {
            sigma,
            stiffness: restrict(&k, free),
            mass: restrict(&m, free),
            space,
        })
    }

    pub fn sigma(&self) -> &BranchParam {
        &self.sigma
    }

    pub fn rho(&self) -> f64 {
        self.space.mesh().end()
    }

    pub fn space(&self) -> &Space1d {
        &self.space
    }

    /// Unknowns per mode; the Dirichlet node at `rho` is eliminated.
    pub fn radial_dofs(&self) -> usize {
        self.space.ndofs() - 1
    }

    /// Radial stiffness on the free DOFs.
    pub fn stiffness(&self) -> &SparseMatrix {
        &self.stiffness
    }

    /// Radial mass on the free DOFs.
    pub fn mass(&self) -> &SparseMatrix {
        &self.mass
    }

    /// Nested refinement: every element bisected.
    pub fn refined(&self) -> Result<Self> {
        Self::from_mesh(self.sigma, self.space.mesh().refined(), self.space.order())
    }

    /// Nodal values of the cubic bump `(1-t)^2 (1+2t)`, `t = x/x_2`, where
    /// `x_2` is the end of the second element; the bump is one at `x = 0`.
    pub fn extension_profile(&self) -> Vec<C64> {
        let mesh = self.space.mesh();
        let x2 = mesh.nodes()[2.min(mesh.elements())];
        let coords = self.space.dof_coordinates();
        coords[..self.radial_dofs()]
            .iter()
            .map(|&x| {
                let t = x / x2;
                C64::new(if t < 1.0 { (1.0 - t).powi(2) * (1.0 + 2.0 * t) } else { 0.0 }, 0.0)
            })
            .collect()
    }
}

fn restrict(a: &SparseMatrix, n: usize) -> SparseMatrix {
    let entries: Vec<_> = a.iter().filter(|&(r, c, _)| r < n && c < n).collect();
    SparseMatrix::from_entries(n, n, &entries)
}

/// Mode system `A_n = K/sigma + sigma (lambda - kappa^2) M` and the load
/// vector per unit Neumann datum (`-e_0`).
#[derive(Debug, Clone)]
pub struct PmlModeSystem {
    pub matrix: SparseMatrix,
    pub load: Vec<C64>,
}

pub fn assemble_pml_mode(kappa: C64, lambda: f64, layer: &PmlLayer) -> PmlModeSystem {
    let s = layer.sigma.sigma();
    let matrix = layer.stiffness.combine(1.0 / s, &layer.mass, s * (lambda - kappa * kappa));
    let mut load = vec![C64::new(0.0, 0.0); layer.radial_dofs()];
    load[0] = C64::new(-1.0, 0.0);
    PmlModeSystem { matrix, load }
}

#[derive(Debug, Clone)]
pub struct PmlModeSolution {
    /// Values at all layer DOFs, including the zero at `rho`.
    pub values: Vec<C64>,
    pub trace: C64,
    /// Outgoing amplitude `c` of `c e^{i kappa_n x}`.
    pub amplitude: C64,
    pub condition: f64,
    pub warnings: Vec<Warning>,
}

pub fn solve_mode_pml(kappa: C64, lambda: f64, layer: &PmlLayer, g: C64) -> Result<PmlModeSolution> {
    let sys = assemble_pml_mode(kappa, lambda, layer);
    let lu = SparseLu::factor(&sys.matrix)?;
    let condition = inverse_norm1_estimate(&lu) * sys.matrix.norm1();
    let mut warnings = Vec::new();
    if condition > WARN_CONDITION {
        warnings.push(
            Warning::IllConditioned {
                context: format!("PML mode system at kappa = {kappa}, lambda = {lambda}"),
                condition,
            }
            .emit(),
        );
    }
    let rhs: Vec<C64> = sys.load.iter().map(|l| l * g).collect();
    let mut values = lu.solve(&rhs);
    values.push(C64::new(0.0, 0.0));
    Ok(PmlModeSolution {
        trace: values[0],
        amplitude: values[0],
        values,
        condition,
        warnings,
    })
}

/// Smallest `rho` for which the truncation bound of a field with the given
/// `(c_n, lambda_n)` stays below `tol`, estimated from the slowest decay rate.
pub fn rho_for_tolerance(coeffs: &[(C64, f64)], kappa: C64, sigma: &BranchParam, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {tol}")));
    }
    let s = sigma.sigma();
    let mut prefactor = 0.0;
    let mut slowest = f64::NEG_INFINITY;
    for &(c, lambda) in coeffs {
        let ks = branch_sqrt(kappa * kappa - lambda, sigma) * s;
        let decay = (I * ks).re;
        if !(decay < 0.0) {
            return Err(Error::Domain(format!("mode lambda = {lambda} does not decay in the layer")));
        }
        slowest = slowest.max(decay);
        prefactor += c.norm_sqr() * (ks.norm_sqr() + (1.0 + lambda) / (-2.0 * decay));
    }
    if prefactor <= tol {
        return Ok(0.0);
    }
    Ok((tol / prefactor).ln() / (2.0 * slowest))
}

/// CSV with columns `x,re,im`.
pub fn write_layer_csv<W: Write>(mut w: W, layer: &PmlLayer, sol: &PmlModeSolution) -> io::Result<()> {
    writeln!(w, "x,re,im")?;
    for (x, u) in layer.space.dof_coordinates().iter().zip(&sol.values) {
        writeln!(w, "{:.15e},{:.15e},{:.15e}", x, u.re, u.im)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn sigma(s: C64) -> BranchParam {
        BranchParam::new(s).unwrap()
    }

    #[test]
    fn single_element_reduces_to_laplace() {
        let mesh = Mesh1d::uniform(0.0, 0.5, 1).unwrap();
        let layer = PmlLayer::from_mesh(sigma(c(1.0, 1e-12)), mesh, 1).unwrap();
        let space = layer.space();
        let (k, _) = space.assemble_plain();
        assert!((k.get(0, 0).re - 2.0).abs() < 1e-14 && (k.get(0, 1).re + 2.0).abs() < 1e-14);
        let sys = assemble_pml_mode(c(2.0, 0.0), 4.0, &layer);
        assert!((sys.matrix.get(0, 0) - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn complex_symmetric() {
        let layer = PmlLayer::new(sigma(c(1.0, 1.0)), 4.0, 12, 3, DEFAULT_GRADING).unwrap();
        let sys = assemble_pml_mode(c(3.5, -0.1), 2.0, &layer);
        assert!(sys.matrix.symmetry_defect() < 1e-13 * sys.matrix.max_abs());
    }

    #[test]
    fn trace_matches_outgoing_solution() {
        let layer = PmlLayer::new(sigma(c(1.0, 1.0)), 8.0, 64, 3, 1.0).unwrap();
        let kappa = c(3.5, 0.0);
        let g = c(1.0, 0.0);
        let sol = solve_mode_pml(kappa, 0.0, &layer, g).unwrap();
        let exact = g / (I * kappa);
        assert!((sol.trace - exact).norm() < 1e-6, "{}", (sol.trace - exact).norm());
        assert_eq!(*sol.values.last().unwrap(), c(0.0, 0.0));
        let zero = solve_mode_pml(kappa, 0.0, &layer, c(0.0, 0.0)).unwrap();
        assert!(zero.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn extension_profile_shape() {
        let layer = PmlLayer::new(sigma(c(1.0, 1.0)), 4.0, 8, 2, 1.0).unwrap();
        let e = layer.extension_profile();
        assert_eq!(e[0], c(1.0, 0.0));
        assert!(e[5..].iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn rho_helper_inverts_bound() {
        let s = sigma(c(1.0, 1.0));
        let coeffs = [(c(1.0, 0.0), 0.0), (c(0.5, 0.0), 9.0)];
        let rho = rho_for_tolerance(&coeffs, c(3.5, 0.0), &s, 1e-8).unwrap();
        let b = crate::branch::pml_truncation_bound(&coeffs, c(3.5, 0.0), &s, rho).unwrap();
        assert!(b.value().unwrap() <= 1e-8 * (1.0 + 1e-9));
        assert_eq!(default_rho(10), 7.0);
    }
}
