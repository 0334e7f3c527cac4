//! Interior discretizations on intervals and rectangles.
//!
//! The rectangle uses tensor-product Lagrange elements; DOF `(ix, iy)` of the
//! full tensor grid has index `ix * ny + iy`. Dirichlet DOFs are eliminated
//! and the remaining ones renumbered in the same order, so the DOFs on an
//! interface `x = a` or `x = b` appear in increasing `y` and coincide with the
//! free DOFs of the transverse space built on the `y` mesh.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::fem1d::{gauss_legendre, Mesh1d, Space1d};
use crate::linalg::{Factorization, SparseLu, SparseMatrix, Triplets, C64};
use crate::spectrum::BoundaryKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Interval { a: f64, b: f64 },
    /// `(a, b) x (0, height)`.
    Rectangle { a: f64, b: f64, height: f64 },
}

/// Condition imposed at `x = a` or `x = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndCondition {
    /// Coupling interface to a waveguide.
    Interface,
    Dirichlet,
    Neumann,
}

/// Piecewise-constant refractive index; `n = 1` outside the listed regions.
#[derive(Debug, Clone, PartialEq)]
pub enum IndexProfile {
    Uniform,
    /// Layers `(x0, x1, n)` spanning the full cross section.
    Layers(Vec<(f64, f64, f64)>),
    /// Rectangular inclusions `(x0, x1, y0, y1, n)`.
    Inclusions(Vec<[f64; 5]>),
}

impl IndexProfile {
    pub fn n(&self, x: f64, y: f64) -> f64 {
        match self {
            IndexProfile::Uniform => 1.0,
            IndexProfile::Layers(l) => l
                .iter()
                .find(|&&(x0, x1, _)| x0 <= x && x < x1)
                .map_or(1.0, |&(_, _, n)| n),
            IndexProfile::Inclusions(r) => r
                .iter()
                .find(|q| q[0] <= x && x < q[1] && q[2] <= y && y < q[3])
                .map_or(1.0, |q| q[4]),
        }
    }

    fn x_breaks(&self) -> Vec<f64> {
        match self {
            IndexProfile::Uniform => vec![],
            IndexProfile::Layers(l) => l.iter().flat_map(|&(a, b, _)| [a, b]).collect(),
            IndexProfile::Inclusions(r) => r.iter().flat_map(|q| [q[0], q[1]]).collect(),
        }
    }

    fn y_breaks(&self) -> Vec<f64> {
        match self {
            IndexProfile::Inclusions(r) => r.iter().flat_map(|q| [q[2], q[3]]).collect(),
            _ => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteriorModel {
    pub geometry: Geometry,
    pub profile: IndexProfile,
    pub left: EndCondition,
    pub right: EndCondition,
    /// Condition on `y = 0` and `y = height` for rectangles.
    pub transverse: BoundaryKind,
}

impl InteriorModel {
    pub fn interval(a: f64, b: f64, profile: IndexProfile, left: EndCondition, right: EndCondition) -> Self {
        Self {
            geometry: Geometry::Interval { a, b },
            profile,
            left,
            right,
            transverse: BoundaryKind::Neumann,
        }
    }

    /// A straight duct section with interfaces at both ends.
    pub fn duct(a: f64, b: f64, height: f64, transverse: BoundaryKind, profile: IndexProfile) -> Self {
        Self {
            geometry: Geometry::Rectangle { a, b, height },
            profile,
            left: EndCondition::Interface,
            right: EndCondition::Interface,
            transverse,
        }
    }

    fn x_range(&self) -> (f64, f64) {
        match self.geometry {
            Geometry::Interval { a, b } | Geometry::Rectangle { a, b, .. } => (a, b),
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = self.x_range();
        if !(a < b) {
            return Err(invalid("geometry", format!("empty interval ({a}, {b})")));
        }
        if let Geometry::Rectangle { height, .. } = self.geometry {
            if !(height > 0.0) {
                return Err(invalid("height", format!("must be positive, got {height}")));
            }
        }
        let touches = |x: f64, end: f64| (x - end).abs() < 1e-12 * (1.0 + end.abs());
        for x in self.profile.x_breaks() {
            if (self.left == EndCondition::Interface && touches(x, a))
                || (self.right == EndCondition::Interface && touches(x, b))
            {
                return Err(invalid("profile", "index must equal 1 next to coupling interfaces"));
            }
        }
        Ok(())
    }
}

/// `x` mesh and, for rectangles, `y` mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorMesh {
    pub x: Mesh1d,
    pub y: Option<Mesh1d>,
}

impl InteriorMesh {
    pub fn interval(x: Mesh1d) -> Self {
        Self { x, y: None }
    }

    pub fn rectangle(x: Mesh1d, y: Mesh1d) -> Self {
        Self { x, y: Some(y) }
    }

    pub fn refined(&self) -> Self {
        Self {
            x: self.x.refined(),
            y: self.y.as_ref().map(Mesh1d::refined),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Cross-section matrices of an interface, restricted to its free DOFs.
#[derive(Debug, Clone)]
pub struct TransverseBasis {
    pub mass: SparseMatrix,
    pub stiffness: SparseMatrix,
    /// `y` coordinate of each trace DOF (`0` for a point interface).
    pub coordinates: Vec<f64>,
}

impl TransverseBasis {
    /// The trivial cross section of a 1D model.
    pub fn point() -> Self {
        Self {
            mass: SparseMatrix::from_entries(1, 1, &[(0, 0, C64::new(1.0, 0.0))]),
            stiffness: SparseMatrix::zeros(1, 1),
            coordinates: vec![0.0],
        }
    }

    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct InterfaceTrace {
    pub side: Side,
    /// Interior (free) DOF indices in transverse order.
    pub dofs: Vec<usize>,
    pub transverse: TransverseBasis,
}

/// Trace selectors and the factorized lifting problem `-Delta v + v = 0`.
#[derive(Clone)]
pub struct TraceMaps {
    pub interfaces: Vec<InterfaceTrace>,
    h1: SparseMatrix,
    inner: Vec<usize>,
    on_gamma: Vec<Option<usize>>,
    lift_lu: Option<Arc<SparseLu>>,
}

impl fmt::Debug for TraceMaps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TraceMaps")
            .field("interfaces", &self.interfaces)
            .field("inner_dofs", &self.inner.len())
            .finish()
    }
}

impl TraceMaps {
    /// Total number of trace DOFs over all interfaces.
    pub fn trace_len(&self) -> usize {
        self.interfaces.iter().map(|i| i.dofs.len()).sum()
    }

    /// Restriction of `u` to interface `l`.
    pub fn trace(&self, u: &[C64], l: usize) -> Vec<C64> {
        self.interfaces[l].dofs.iter().map(|&d| u[d]).collect()
    }

    /// Concatenated traces on all interfaces.
    pub fn trace_all(&self, u: &[C64]) -> Vec<C64> {
        (0..self.interfaces.len()).flat_map(|l| self.trace(u, l)).collect()
    }
}

/// Assembled interior pencil blocks.
#[derive(Debug, Clone)]
pub struct InteriorSystem {
    model: InteriorModel,
    x_space: Space1d,
    y_space: Option<Space1d>,
    /// Stiffness `int grad u . grad v`.
    pub stiffness: SparseMatrix,
    /// Mass weighted by `n^2`.
    pub mass: SparseMatrix,
    /// Unweighted mass.
    pub plain_mass: SparseMatrix,
    free_to_full: Vec<usize>,
    pub traces: TraceMaps,
}

fn aligned(breaks: &[f64], mesh: &Mesh1d) -> bool {
    breaks.iter().all(|&x| {
        x <= mesh.start()
            || x >= mesh.end()
            || mesh.nodes().iter().any(|&n| (n - x).abs() <= 1e-12 * (1.0 + x.abs()))
    })
}

pub fn assemble_interior(model: &InteriorModel, mesh: &InteriorMesh, order: usize) -> Result<InteriorSystem> {
    model.validate()?;
    if !(1..=6).contains(&order) {
        return Err(invalid("order", format!("interior order {order} outside 1..=6")));
    }
    let (a, b) = model.x_range();
    let close = |u: f64, v: f64| (u - v).abs() <= 1e-12 * (1.0 + v.abs());
    if !close(mesh.x.start(), a) || !close(mesh.x.end(), b) {
        return Err(Error::Mesh(format!("x mesh does not span ({a}, {b})")));
    }
    if !aligned(&model.profile.x_breaks(), &mesh.x) {
        return Err(Error::Assembly("index discontinuities are not aligned with x mesh nodes".into()));
    }
    let x_space = Space1d::new(mesh.x.clone(), order)?;
    match model.geometry {
        Geometry::Interval { .. } => assemble_1d(model, x_space),
        Geometry::Rectangle { height, .. } => {
            let ym = mesh
                .y
                .as_ref()
                .ok_or_else(|| Error::Mesh("rectangle requires a y mesh".into()))?;
            if !close(ym.start(), 0.0) || !close(ym.end(), height) {
                return Err(Error::Mesh(format!("y mesh does not span (0, {height})")));
            }
            if !aligned(&model.profile.y_breaks(), ym) {
                return Err(Error::Assembly("index discontinuities are not aligned with y mesh nodes".into()));
            }
            assemble_2d(model, x_space, Space1d::new(ym.clone(), order)?)
        }
    }
}

fn end_removed(cond: EndCondition) -> bool {
    cond == EndCondition::Dirichlet
}

fn renumber(full: usize, removed: &[bool]) -> (Vec<usize>, Vec<Option<usize>>) {
    let mut free_to_full = Vec::new();
    let mut full_to_free = vec![None; full];
    for i in 0..full {
        if !removed[i] {
            full_to_free[i] = Some(free_to_full.len());
            free_to_full.push(i);
        }
    }
    (free_to_full, full_to_free)
}

fn restrict(a: &SparseMatrix, map: &[Option<usize>], n: usize) -> SparseMatrix {
    let entries: Vec<_> = a
        .iter()
        .filter_map(|(r, c, v)| Some((map[r]?, map[c]?, v)))
        .collect();
    SparseMatrix::from_entries(n, n, &entries)
}

fn assemble_1d(model: &InteriorModel, x_space: Space1d) -> Result<InteriorSystem> {
    let nx = x_space.ndofs();
    let profile = &model.profile;
    let (k, m) = x_space.assemble(&|x| profile.n(x, 0.0).powi(2));
    let (_, m0) = x_space.assemble_plain();
    let mut removed = vec![false; nx];
    removed[0] = end_removed(model.left);
    removed[nx - 1] = end_removed(model.right);
    let (free_to_full, full_to_free) = renumber(nx, &removed);
    let n = free_to_full.len();
    let mut interfaces = Vec::new();
    for (side, cond, dof) in [(Side::Left, model.left, 0), (Side::Right, model.right, nx - 1)] {
        if cond == EndCondition::Interface {
            interfaces.push(InterfaceTrace {
                side,
                dofs: vec![full_to_free[dof].unwrap()],
                transverse: TransverseBasis::point(),
            });
        }
    }
    finish(
        model,
        x_space,
        None,
        restrict(&k, &full_to_free, n),
        restrict(&m, &full_to_free, n),
        restrict(&m0, &full_to_free, n),
        free_to_full,
        interfaces,
    )
}

/// Element matrices of the tensor element `(ex, ey)`: stiffness, `n^2` mass
/// and plain mass, flattened over local indices `i * (p+1) + j`.
fn tensor_element(
    xs: &Space1d,
    ys: &Space1d,
    ex: usize,
    ey: usize,
    profile: &IndexProfile,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let p = xs.order();
    let nl = (p + 1) * (p + 1);
    let (qx, qw) = gauss_legendre(p + 3);
    let (xa, xb) = xs.mesh().element(ex);
    let (ya, yb) = ys.mesh().element(ey);
    let (jx, jy) = ((xb - xa) / 2.0, (yb - ya) / 2.0);
    let bx: Vec<_> = qx.iter().map(|&t| xs.basis().eval(t)).collect();
    let by: Vec<_> = qx.iter().map(|&t| ys.basis().eval(t)).collect();
    let mut k = vec![0.0; nl * nl];
    let mut m = vec![0.0; nl * nl];
    let mut m0 = vec![0.0; nl * nl];
    let mut val = vec![0.0; nl];
    let mut gx = vec![0.0; nl];
    let mut gy = vec![0.0; nl];
    for (qi, &wx) in qw.iter().enumerate() {
        let x = xa + jx * (qx[qi] + 1.0);
        for (qj, &wy) in qw.iter().enumerate() {
            let y = ya + jy * (qx[qj] + 1.0);
            let w = wx * wy * jx * jy;
            let n2 = profile.n(x, y).powi(2);
            for i in 0..=p {
                for j in 0..=p {
                    let l = i * (p + 1) + j;
                    val[l] = bx[qi].0[i] * by[qj].0[j];
                    gx[l] = bx[qi].1[i] / jx * by[qj].0[j];
                    gy[l] = bx[qi].0[i] * by[qj].1[j] / jy;
                }
            }
            for r in 0..nl {
                for s in 0..nl {
                    let vv = val[r] * val[s] * w;
                    k[r * nl + s] += (gx[r] * gx[s] + gy[r] * gy[s]) * w;
                    m[r * nl + s] += n2 * vv;
                    m0[r * nl + s] += vv;
                }
            }
        }
    }
    (k, m, m0)
}

fn assemble_2d(model: &InteriorModel, x_space: Space1d, y_space: Space1d) -> Result<InteriorSystem> {
    let (nx, ny) = (x_space.ndofs(), y_space.ndofs());
    let p = x_space.order();
    let full = nx * ny;
    let mut removed = vec![false; full];
    let y_dirichlet = model.transverse == BoundaryKind::Dirichlet;
    for ix in 0..nx {
        for iy in 0..ny {
            let x_end = (ix == 0 && end_removed(model.left)) || (ix == nx - 1 && end_removed(model.right));
            let y_end = y_dirichlet && (iy == 0 || iy == ny - 1);
            removed[ix * ny + iy] = x_end || y_end;
        }
    }
    let (free_to_full, full_to_free) = renumber(full, &removed);
    let n = free_to_full.len();
    let mut kt = Triplets::square(n);
    let mut mt = Triplets::square(n);
    let mut m0t = Triplets::square(n);
    for ex in 0..x_space.mesh().elements() {
        for ey in 0..y_space.mesh().elements() {
            let (ke, me, m0e) = tensor_element(&x_space, &y_space, ex, ey, &model.profile);
            let dofs: Vec<Option<usize>> = (0..=p)
                .flat_map(|i| (0..=p).map(move |j| (i, j)))
                .map(|(i, j)| full_to_free[(ex * p + i) * ny + ey * p + j])
                .collect();
            let nl = dofs.len();
            for r in 0..nl {
                let Some(gr) = dofs[r] else { continue };
                for s in 0..nl {
                    let Some(gs) = dofs[s] else { continue };
                    kt.push(gr, gs, C64::new(ke[r * nl + s], 0.0));
                    mt.push(gr, gs, C64::new(me[r * nl + s], 0.0));
                    m0t.push(gr, gs, C64::new(m0e[r * nl + s], 0.0));
                }
            }
        }
    }
    let transverse = transverse_basis(&y_space, model.transverse);
    let mut interfaces = Vec::new();
    for (side, cond, ix) in [(Side::Left, model.left, 0), (Side::Right, model.right, nx - 1)] {
        if cond == EndCondition::Interface {
            let dofs: Vec<usize> = (0..ny).filter_map(|iy| full_to_free[ix * ny + iy]).collect();
            if dofs.len() != transverse.len() {
                return Err(Error::Coupling("interface DOFs do not match the transverse space".into()));
            }
            interfaces.push(InterfaceTrace {
                side,
                dofs,
                transverse: transverse.clone(),
            });
        }
    }
    finish(
        model,
        x_space,
        Some(y_space),
        kt.build(),
        mt.build(),
        m0t.build(),
        free_to_full,
        interfaces,
    )
}

/// Cross-section mass and stiffness on the free DOFs of `space`.
pub fn transverse_basis(space: &Space1d, kind: BoundaryKind) -> TransverseBasis {
    let (k, m) = space.assemble_plain();
    let nd = space.ndofs();
    let coords = space.dof_coordinates();
    let keep: Vec<bool> = (0..nd)
        .map(|i| kind == BoundaryKind::Neumann || (i != 0 && i != nd - 1))
        .collect();
    let removed: Vec<bool> = keep.iter().map(|k| !k).collect();
    let (free, map) = renumber(nd, &removed);
    TransverseBasis {
        mass: restrict(&m, &map, free.len()),
        stiffness: restrict(&k, &map, free.len()),
        coordinates: free.iter().map(|&i| coords[i]).collect(),
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    model: &InteriorModel,
    x_space: Space1d,
    y_space: Option<Space1d>,
    stiffness: SparseMatrix,
    mass: SparseMatrix,
    plain_mass: SparseMatrix,
    free_to_full: Vec<usize>,
    interfaces: Vec<InterfaceTrace>,
) -> Result<InteriorSystem> {
    let n = free_to_full.len();
    let h1 = stiffness.combine(C64::new(1.0, 0.0), &plain_mass, C64::new(1.0, 0.0));
    let mut on_gamma = vec![None; n];
    let mut k = 0;
    for itf in &interfaces {
        for &d in &itf.dofs {
            on_gamma[d] = Some(k);
            k += 1;
        }
    }
    let inner: Vec<usize> = (0..n).filter(|&i| on_gamma[i].is_none()).collect();
    let lift_lu = if interfaces.is_empty() || inner.is_empty() {
        None
    } else {
        let mut pos = vec![None; n];
        for (k, &i) in inner.iter().enumerate() {
            pos[i] = Some(k);
        }
        Some(Arc::new(SparseLu::factor(&restrict(&h1, &pos, inner.len()))?))
    };
    Ok(InteriorSystem {
        model: model.clone(),
        x_space,
        y_space,
        stiffness,
        mass,
        plain_mass,
        free_to_full,
        traces: TraceMaps {
            interfaces,
            h1,
            inner,
            on_gamma,
            lift_lu,
        },
    })
}

/// Discrete `H^1` extension of the concatenated interface data `g`.
pub fn trace_lift(g: &[C64], maps: &TraceMaps) -> Result<Vec<C64>> {
    if g.len() != maps.trace_len() {
        return Err(invalid("g", format!("expected {} trace values, got {}", maps.trace_len(), g.len())));
    }
    let n = maps.on_gamma.len();
    let mut v = vec![C64::new(0.0, 0.0); n];
    for (i, slot) in maps.on_gamma.iter().enumerate() {
        if let Some(k) = slot {
            v[i] = g[*k];
        }
    }
    if let Some(lu) = &maps.lift_lu {
        let r = maps.h1.matvec(&v);
        let rhs: Vec<C64> = maps.inner.iter().map(|&i| -r[i]).collect();
        for (&i, x) in maps.inner.iter().zip(lu.solve(&rhs)) {
            v[i] = x;
        }
    }
    Ok(v)
}

/// `(y, weight, basis values, basis derivatives)` at a transverse quadrature point.
type YPoint = (f64, f64, Vec<f64>, Vec<f64>);

/// Exact field: value and gradient at `(x, y)`.
pub type ExactField<'a> = &'a dyn Fn(f64, f64) -> (C64, [C64; 2]);

impl InteriorSystem {
    pub fn model(&self) -> &InteriorModel {
        &self.model
    }

    pub fn ndofs(&self) -> usize {
        self.free_to_full.len()
    }

    pub fn order(&self) -> usize {
        self.x_space.order()
    }

    pub fn x_space(&self) -> &Space1d {
        &self.x_space
    }

    pub fn y_space(&self) -> Option<&Space1d> {
        self.y_space.as_ref()
    }

    fn ny(&self) -> usize {
        self.y_space.as_ref().map_or(1, Space1d::ndofs)
    }

    /// Coordinates of the free DOFs.
    pub fn dof_coordinates(&self) -> Vec<(f64, f64)> {
        let xc = self.x_space.dof_coordinates();
        let yc = self.y_space.as_ref().map_or(vec![0.0], Space1d::dof_coordinates);
        let ny = yc.len();
        self.free_to_full.iter().map(|&f| (xc[f / ny], yc[f % ny])).collect()
    }

    pub fn interpolate(&self, f: impl Fn(f64, f64) -> C64) -> Vec<C64> {
        self.dof_coordinates().into_iter().map(|(x, y)| f(x, y)).collect()
    }

    fn full_vector(&self, u: &[C64]) -> Vec<C64> {
        let mut full = vec![C64::new(0.0, 0.0); self.x_space.ndofs() * self.ny()];
        for (&f, &v) in self.free_to_full.iter().zip(u) {
            full[f] = v;
        }
        full
    }

    fn eval_full(&self, full: &[C64], x: f64, y: f64) -> (C64, [C64; 2]) {
        let xs = &self.x_space;
        let p = xs.order();
        let ex = xs.mesh().locate(x);
        let (xa, xb) = xs.mesh().element(ex);
        let (vx, dx) = xs.basis().eval(2.0 * (x - xa) / (xb - xa) - 1.0);
        let Some(ys) = &self.y_space else {
            let mut val = C64::new(0.0, 0.0);
            let mut der = C64::new(0.0, 0.0);
            for i in 0..=p {
                val += full[ex * p + i] * vx[i];
                der += full[ex * p + i] * dx[i] * 2.0 / (xb - xa);
            }
            return (val, [der, C64::new(0.0, 0.0)]);
        };
        let ny = ys.ndofs();
        let ey = ys.mesh().locate(y);
        let (ya, yb) = ys.mesh().element(ey);
        let (vy, dy) = ys.basis().eval(2.0 * (y - ya) / (yb - ya) - 1.0);
        let mut val = C64::new(0.0, 0.0);
        let mut gx = C64::new(0.0, 0.0);
        let mut gy = C64::new(0.0, 0.0);
        for i in 0..=p {
            for j in 0..=p {
                let u = full[(ex * p + i) * ny + ey * p + j];
                val += u * vx[i] * vy[j];
                gx += u * dx[i] * 2.0 / (xb - xa) * vy[j];
                gy += u * vx[i] * dy[j] * 2.0 / (yb - ya);
            }
        }
        (val, [gx, gy])
    }

    /// Value and gradient of the discrete field `u` at `(x, y)`.
    pub fn evaluate(&self, u: &[C64], x: f64, y: f64) -> (C64, [C64; 2]) {
        self.eval_full(&self.full_vector(u), x, y)
    }

    /// Tensor Gauss points and weights covering the domain.
    fn quadrature(&self, q: usize) -> Vec<(f64, f64, f64)> {
        let (qx, qw) = gauss_legendre(q);
        let xs = self.x_space.mesh();
        let mut pts = Vec::new();
        let ys: Vec<(f64, f64)> = match &self.y_space {
            Some(s) => (0..s.mesh().elements()).map(|e| s.mesh().element(e)).collect(),
            None => vec![(0.0, 0.0)],
        };
        for ex in 0..xs.elements() {
            let (xa, xb) = xs.element(ex);
            let jx = (xb - xa) / 2.0;
            for &(ya, yb) in &ys {
                let jy = (yb - ya) / 2.0;
                for (i, &wx) in qw.iter().enumerate() {
                    let x = xa + jx * (qx[i] + 1.0);
                    if self.y_space.is_none() {
                        pts.push((x, 0.0, wx * jx));
                        continue;
                    }
                    for (j, &wy) in qw.iter().enumerate() {
                        pts.push((x, ya + jy * (qx[j] + 1.0), wx * wy * jx * jy));
                    }
                }
            }
        }
        pts
    }

    /// `(L2 error^2, H1-seminorm error^2)` of `u` against `exact`.
    pub fn error_sq(&self, u: &[C64], exact: ExactField<'_>) -> (f64, f64) {
        let full = self.full_vector(u);
        let mut l2 = 0.0;
        let mut semi = 0.0;
        for (x, y, w) in self.quadrature(self.order() + 4) {
            let (uh, gh) = self.eval_full(&full, x, y);
            let (ue, ge) = exact(x, y);
            l2 += w * (uh - ue).norm_sqr();
            semi += w * ((gh[0] - ge[0]).norm_sqr() + (gh[1] - ge[1]).norm_sqr());
        }
        (l2, semi)
    }

    /// `||exact||_{H^1}^2` by the same quadrature.
    pub fn h1_norm_sq(&self, exact: ExactField<'_>) -> f64 {
        self.quadrature(self.order() + 4)
            .into_iter()
            .map(|(x, y, w)| {
                let (u, g) = exact(x, y);
                w * (u.norm_sqr() + g[0].norm_sqr() + g[1].norm_sqr())
            })
            .sum()
    }

    /// Relative `H^1` error of `u`.
    pub fn relative_h1_error(&self, u: &[C64], exact: ExactField<'_>) -> f64 {
        let (l2, semi) = self.error_sq(u, exact);
        ((l2 + semi) / self.h1_norm_sq(exact)).sqrt()
    }

    /// `H^1` norm of a discrete field.
    pub fn h1_norm(&self, u: &[C64]) -> f64 {
        let au = self.traces.h1.matvec(u);
        u.iter().zip(&au).map(|(a, b)| (a.conj() * b).re).sum::<f64>().max(0.0).sqrt()
    }

    /// `H^1`-orthogonal projection of `exact` onto the discrete space.
    pub fn h1_projection(&self, exact: ExactField<'_>) -> Result<Vec<C64>> {
        let xs = &self.x_space;
        let p = xs.order();
        let (qx, qw) = gauss_legendre(p + 4);
        let mut load = vec![C64::new(0.0, 0.0); self.x_space.ndofs() * self.ny()];
        let ny = self.ny();
        let y_elems: Vec<Option<usize>> = match &self.y_space {
            Some(s) => (0..s.mesh().elements()).map(Some).collect(),
            None => vec![None],
        };
        for ex in 0..xs.mesh().elements() {
            let (xa, xb) = xs.mesh().element(ex);
            let jx = (xb - xa) / 2.0;
            for &ey in &y_elems {
                for (i, &wx) in qw.iter().enumerate() {
                    let x = xa + jx * (qx[i] + 1.0);
                    let (vx, dx) = xs.basis().eval(qx[i]);
                    let ys_pts: Vec<YPoint> = match (ey, &self.y_space) {
                        (Some(ey), Some(ys)) => {
                            let (ya, yb) = ys.mesh().element(ey);
                            let jy = (yb - ya) / 2.0;
                            qx.iter()
                                .zip(&qw)
                                .map(|(&t, &w)| {
                                    let (v, d) = ys.basis().eval(t);
                                    (ya + jy * (t + 1.0), w * jy, v, d.iter().map(|d| d / jy).collect())
                                })
                                .collect()
                        }
                        _ => vec![(0.0, 1.0, vec![1.0], vec![0.0])],
                    };
                    for (y, wy, vy, dy) in ys_pts {
                        let (u, g) = exact(x, y);
                        let w = wx * jx * wy;
                        for a in 0..=p {
                            for (bidx, (&vyb, &dyb)) in vy.iter().zip(&dy).enumerate() {
                                let full = match ey {
                                    Some(ey) => (ex * p + a) * ny + ey * p + bidx,
                                    None => ex * p + a,
                                };
                                let phi = vx[a] * vyb;
                                let gxp = dx[a] / jx * vyb;
                                let gyp = vx[a] * dyb;
                                load[full] += w * (u * phi + g[0] * gxp + g[1] * gyp);
                            }
                        }
                    }
                }
            }
        }
        let rhs: Vec<C64> = self.free_to_full.iter().map(|&f| load[f]).collect();
        Ok(SparseLu::factor(&self.traces.h1)?.solve(&rhs))
    }

    /// Nodal values of the coarse field `u` on the DOFs of a nested refinement.
    pub fn prolongate(&self, u: &[C64], fine: &InteriorSystem) -> Vec<C64> {
        let full = self.full_vector(u);
        fine.dof_coordinates()
            .into_iter()
            .map(|(x, y)| self.eval_full(&full, x, y).0)
            .collect()
    }
}
