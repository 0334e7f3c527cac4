//! One-dimensional high-order Lagrange finite elements: quadrature, meshes,
//! nodal bases and assembly of stiffness and weighted mass matrices.

use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, Triplets, C64};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = if (x * x - 1.0).abs() < 1e-300 {
        0.5 * (n * (n + 1)) as f64 * x.powi(n as i32 + 1)
    } else {
        n as f64 * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, d)
}

/// Gauss–Lobatto–Legendre points on `[-1, 1]` (`n >= 2`, endpoints included).
pub fn gauss_lobatto_points(n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let deg = n - 1;
    let mut pts = vec![-1.0; n];
    pts[n - 1] = 1.0;
    #[allow(clippy::needless_range_loop)]
    for i in 1..n - 1 {
        // Chebyshev–Gauss–Lobatto initial guess, Newton on P'_deg
        let mut x = -(std::f64::consts::PI * i as f64 / deg as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(deg, x);
            let ddp = (2.0 * x * dp - (deg * (deg + 1)) as f64 * p) / (1.0 - x * x);
            let dx = dp / ddp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        pts[i] = x;
    }
    pts
}

/// Lagrange basis on `[-1, 1]` interpolating at Gauss–Lobatto points.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
    denominators: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let nodes = gauss_lobatto_points(order + 1);
        let denominators = (0..=order)
            .map(|i| {
                (0..=order)
                    .filter(|&j| j != i)
                    .map(|j| nodes[i] - nodes[j])
                    .product()
            })
            .collect();
        Self { nodes, denominators }
    }

    pub fn order(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Basis values and derivatives at reference coordinate `t`.
    pub fn eval(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.nodes.len();
        let mut values = vec![0.0; n];
        let mut derivs = vec![0.0; n];
        for i in 0..n {
            let mut v = 1.0;
            let mut d = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let f = t - self.nodes[j];
                d = d * f + v;
                v *= f;
            }
            values[i] = v / self.denominators[i];
            derivs[i] = d / self.denominators[i];
        }
        (values, derivs)
    }
}

/// A mesh of an interval given by strictly increasing nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1d {
    nodes: Vec<f64>,
}

impl Mesh1d {
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Mesh("a mesh needs at least two nodes".into()));
        }
        if let Some(w) = nodes.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Mesh(format!("element {w} has non-positive length")));
        }
        Ok(Self { nodes })
    }

    pub fn uniform(a: f64, b: f64, elements: usize) -> Result<Self> {
        if elements == 0 {
            return Err(Error::Mesh("at least one element required".into()));
        }
        Self::from_nodes(
            (0..=elements)
                .map(|i| a + (b - a) * i as f64 / elements as f64)
                .collect(),
        )
    }

    /// Geometric mesh of `[a, b]` whose element lengths grow by `ratio` away from `a`.
    pub fn graded(a: f64, b: f64, elements: usize, ratio: f64) -> Result<Self> {
        if !(ratio >= 1.0) {
            return Err(Error::Mesh(format!("grading ratio {ratio} must be at least 1")));
        }
        if elements == 0 {
            return Err(Error::Mesh("at least one element required".into()));
        }
        let total: f64 = (0..elements).map(|k| ratio.powi(k as i32)).sum();
        let mut nodes = Vec::with_capacity(elements + 1);
        let mut x = a;
        nodes.push(a);
        for k in 0..elements {
            x += (b - a) * ratio.powi(k as i32) / total;
            nodes.push(x);
        }
        nodes[elements] = b;
        Self::from_nodes(nodes)
    }

    /// Bisects every element; the result contains this mesh.
    pub fn refined(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(*self.nodes.last().unwrap());
        Self { nodes }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn start(&self) -> f64 {
        self.nodes[0]
    }

    pub fn end(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    /// Index of the element containing `x` (clamped to the mesh).
    pub fn locate(&self, x: f64) -> usize {
        let k = self.nodes.partition_point(|&n| n <= x);
        k.clamp(1, self.elements()) - 1
    }
}

/// Continuous piecewise polynomials of a fixed order on a [`Mesh1d`].
///
/// Degrees of freedom are numbered left to right; element `e` owns
/// `e*p ..= e*p + p`, so DOF 0 and the last DOF are the interval endpoints.
#[derive(Debug, Clone)]
pub struct Space1d {
    mesh: Mesh1d,
    basis: LagrangeBasis,
}

impl Space1d {
    pub fn new(mesh: Mesh1d, order: usize) -> Result<Self> {
        if !(1..=12).contains(&order) {
            return Err(Error::Mesh(format!("polynomial order {order} outside 1..=12")));
        }
        Ok(Self {
            mesh,
            basis: LagrangeBasis::new(order),
        })
    }

    pub fn mesh(&self) -> &Mesh1d {
        &self.mesh
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn basis(&self) -> &LagrangeBasis {
        &self.basis
    }

    pub fn ndofs(&self) -> usize {
        self.mesh.elements() * self.order() + 1
    }

    pub fn last_dof(&self) -> usize {
        self.ndofs() - 1
    }

    pub fn element_dofs(&self, e: usize) -> std::ops::RangeInclusive<usize> {
        let p = self.order();
        e * p..=e * p + p
    }

    /// Physical coordinates of all DOFs.
    pub fn dof_coordinates(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.ndofs()];
        for e in 0..self.mesh.elements() {
            let (a, b) = self.mesh.element(e);
            for (k, dof) in self.element_dofs(e).enumerate() {
                x[dof] = a + (b - a) * (self.basis.nodes()[k] + 1.0) / 2.0;
            }
        }
        x
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(f64) -> C64) -> Vec<C64> {
        self.dof_coordinates().into_iter().map(f).collect()
    }

    /// Value and derivative of the finite element function `u` at `x`.
    pub fn evaluate(&self, u: &[C64], x: f64) -> (C64, C64) {
        let e = self.mesh.locate(x);
        let (a, b) = self.mesh.element(e);
        let t = 2.0 * (x - a) / (b - a) - 1.0;
        let (v, d) = self.basis.eval(t);
        let mut val = C64::new(0.0, 0.0);
        let mut der = C64::new(0.0, 0.0);
        for (k, dof) in self.element_dofs(e).enumerate() {
            val += u[dof] * v[k];
            der += u[dof] * d[k] * 2.0 / (b - a);
        }
        (val, der)
    }

    /// Element stiffness `int phi_i' phi_j'` and weighted mass `int w phi_i phi_j`.
    pub fn element_matrices(&self, e: usize, weight: &dyn Fn(f64) -> f64, qpoints: usize) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = self.mesh.element(e);
        let n = self.order() + 1;
        let jac = (b - a) / 2.0;
        let (qx, qw) = gauss_legendre(qpoints);
        let mut k = vec![0.0; n * n];
        let mut m = vec![0.0; n * n];
        for (&t, &w) in qx.iter().zip(&qw) {
            let (v, d) = self.basis.eval(t);
            let x = a + jac * (t + 1.0);
            let rho = weight(x);
            for i in 0..n {
                for j in 0..n {
                    k[i * n + j] += w * d[i] * d[j] / jac;
                    m[i * n + j] += w * rho * v[i] * v[j] * jac;
                }
            }
        }
        (k, m)
    }

    /// Global stiffness and `weight`-weighted mass matrices.
    pub fn assemble(&self, weight: &dyn Fn(f64) -> f64) -> (SparseMatrix, SparseMatrix) {
        let n = self.ndofs();
        let q = self.order() + 3;
        let mut kt = Triplets::square(n);
        let mut mt = Triplets::square(n);
        for e in 0..self.mesh.elements() {
            let (ke, me) = self.element_matrices(e, weight, q);
            let dofs: Vec<usize> = self.element_dofs(e).collect();
            let nl = dofs.len();
            for i in 0..nl {
                for j in 0..nl {
                    kt.push(dofs[i], dofs[j], C64::new(ke[i * nl + j], 0.0));
                    mt.push(dofs[i], dofs[j], C64::new(me[i * nl + j], 0.0));
                }
            }
        }
        (kt.build(), mt.build())
    }

    /// Unweighted stiffness and mass.
    pub fn assemble_plain(&self) -> (SparseMatrix, SparseMatrix) {
        self.assemble(&|_| 1.0)
    }

    /// `(L2 error^2, H1-seminorm error^2)` of `u` against `exact(x) -> (value, derivative)`.
    pub fn error_sq(&self, u: &[C64], exact: &dyn Fn(f64) -> (C64, C64), qpoints: usize) -> (f64, f64) {
        let (qx, qw) = gauss_legendre(qpoints);
        let mut l2 = 0.0;
        let mut h1 = 0.0;
        for e in 0..self.mesh.elements() {
            let (a, b) = self.mesh.element(e);
            let jac = (b - a) / 2.0;
            for (&t, &w) in qx.iter().zip(&qw) {
                let x = a + jac * (t + 1.0);
                let (uh, duh) = self.evaluate(u, x);
                let (ue, due) = exact(x);
                l2 += w * jac * (uh - ue).norm_sqr();
                h1 += w * jac * (duh - due).norm_sqr();
            }
        }
        (l2, h1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_integrate_polynomials() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let num: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((num - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn lobatto_points_are_symmetric() {
        let p = gauss_lobatto_points(5);
        assert!((p[1] + (3.0f64 / 7.0).sqrt()).abs() < 1e-15);
        assert!(p[2].abs() < 1e-15);
    }

    #[test]
    fn basis_is_nodal_and_partitions_unity() {
        let b = LagrangeBasis::new(4);
        for (i, &t) in b.nodes().iter().enumerate() {
            let (v, _) = b.eval(t);
            for (j, vj) in v.iter().enumerate() {
                assert!((vj - if i == j { 1.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
        let (v, d) = b.eval(0.3);
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(d.iter().sum::<f64>().abs() < 1e-13);
    }

    #[test]
    fn graded_mesh_ratio() {
        let m = Mesh1d::graded(0.0, 8.0, 10, 1.2).unwrap();
        let h: Vec<f64> = m.nodes().windows(2).map(|w| w[1] - w[0]).collect();
        for k in 1..h.len() {
            assert!((h[k] / h[k - 1] - 1.2).abs() < 1e-12);
        }
        assert_eq!(m.end(), 8.0);
        assert!(Mesh1d::from_nodes(vec![0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn linear_element_stiffness() {
        let s = Space1d::new(Mesh1d::uniform(0.0, 0.5, 1).unwrap(), 1).unwrap();
        let (k, m) = s.assemble_plain();
        assert!((k.get(0, 0).re - 2.0).abs() < 1e-14 && (k.get(0, 1).re + 2.0).abs() < 1e-14);
        assert!((m.get(0, 0).re - 0.5 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn interpolation_exact_for_polynomials() {
        let s = Space1d::new(Mesh1d::uniform(0.0, 1.0, 3).unwrap(), 3).unwrap();
        let f = |x: f64| C64::new(x * x * x - x, 0.0);
        let u = s.interpolate(f);
        let (l2, h1) = s.error_sq(&u, &|x| (f(x), C64::new(3.0 * x * x - 1.0, 0.0)), 6);
        assert!(l2 < 1e-28 && h1 < 1e-26);
    }
}
