//! Multi-element plate models: local/global transformation, splicing of
//! coincident nodes into shared global dofs, constraints, solution and
//! post-processing.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, Matrix3, Point2};

use crate::element::classical::{classical_distributed_load, classical_element_stiffness, ClassicalShapes};
use crate::element::{distributed_load, element_stiffness, lump_load, Material};
use crate::error::{Error, Result};
use crate::geometry::{NaturalPoint, QuadGeometry};
use crate::quadrature::{GaussRule, DEFAULT_ORDER};
use crate::shape_basis::{MraBasis, ResolutionLevel};

/// Relative node-coincidence tolerance (times the model bounding-box diagonal).
pub const COINCIDENCE_TOLERANCE: f64 = 1e-9;

/// Residual bound `|Ka - f| <= RESIDUAL_TOLERANCE |f|` enforced after solving.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Pivots whose square falls below this fraction of their diagonal entry are
/// treated as singular.
const PIVOT_TOLERANCE: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dof {
    W,
    ThetaX,
    ThetaY,
}

impl Dof {
    pub const ALL: [Dof; 3] = [Dof::W, Dof::ThetaX, Dof::ThetaY];

    pub fn offset(self) -> usize {
        match self {
            Dof::W => 0,
            Dof::ThetaX => 1,
            Dof::ThetaY => 2,
        }
    }
}

/// How the element interpolates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    /// Scaled/shifted basis at the given resolution level.
    Multiresolution(ResolutionLevel),
    /// Classical 4-node element (independent implementation).
    Classical,
}

impl ElementKind {
    /// Natural node positions in local dof order.
    pub fn node_points(&self) -> Vec<NaturalPoint> {
        match self {
            ElementKind::Multiresolution(rl) => rl.nodes().map(|n| rl.node_point(n)).collect(),
            ElementKind::Classical => vec![
                NaturalPoint::new(0.0, 0.0),
                NaturalPoint::new(1.0, 0.0),
                NaturalPoint::new(1.0, 1.0),
                NaturalPoint::new(0.0, 1.0),
            ],
        }
    }

    /// Nodes along a side, counted for splice compatibility.
    fn side_node_count(&self, side: Side) -> usize {
        match (self, side) {
            (ElementKind::Classical, _) => 2,
            (ElementKind::Multiresolution(rl), Side::Xi0 | Side::Xi1) => rl.n() + 1,
            (ElementKind::Multiresolution(rl), Side::Eta0 | Side::Eta1) => rl.m() + 1,
        }
    }
}

/// Element sides in natural coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `xi = 0` (corners 1-4).
    Xi0,
    /// `xi = 1` (corners 2-3).
    Xi1,
    /// `eta = 0` (corners 1-2).
    Eta0,
    /// `eta = 1` (corners 4-3).
    Eta1,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Xi0, Side::Xi1, Side::Eta0, Side::Eta1];

    fn contains(self, p: NaturalPoint) -> bool {
        match self {
            Side::Xi0 => p.xi == 0.0,
            Side::Xi1 => p.xi == 1.0,
            Side::Eta0 => p.eta == 0.0,
            Side::Eta1 => p.eta == 1.0,
        }
    }

    /// 0-based corner indices of the side's endpoints.
    fn corners(self) -> (usize, usize) {
        match self {
            Side::Xi0 => (0, 3),
            Side::Xi1 => (1, 2),
            Side::Eta0 => (0, 1),
            Side::Eta1 => (3, 2),
        }
    }
}

/// Orientation of an element's local axes, as direction cosines: row `i`
/// holds local axis `i` (x, y, z) in global `(X, Y, Z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    cosines: [[f64; 3]; 3],
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        cosines: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    pub fn new(cosines: [[f64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| cosines[i][k] * cosines[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > 1e-9 {
                    return Err(Error::InvalidFrame(format!(
                        "local axes {i} and {j} are not orthonormal (dot = {dot})"
                    )));
                }
            }
        }
        Ok(Self { cosines })
    }

    /// Local axes rotated by `angle` (radians) about global Z.
    pub fn in_plane(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            cosines: [[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn cosines(&self) -> &[[f64; 3]; 3] {
        &self.cosines
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Per-node block `lambda` relating `(w, theta_x, theta_y)` local to global.
    pub fn lambda(&self) -> Matrix3<f64> {
        let c = &self.cosines;
        #[rustfmt::skip]
        let lambda = Matrix3::new(
            c[2][2], 0.0, 0.0,
            0.0, c[0][0], c[0][1],
            0.0, c[1][0], c[1][1],
        );
        lambda
    }

    /// Local in-plane coordinates of a global point.
    fn to_local(self, p: Point2<f64>) -> [f64; 2] {
        let c = &self.cosines;
        [c[0][0] * p.x + c[0][1] * p.y, c[1][0] * p.x + c[1][1] * p.y]
    }

    fn check_coplanar(&self) -> Result<()> {
        let c = &self.cosines;
        if (c[2][2] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidFrame(
                "local z must coincide with global Z for a coplanar plate model".into(),
            ));
        }
        Ok(())
    }
}

/// Block-diagonal transformation `T` with one `lambda` block per node.
pub fn transformation_matrix(frame: &Frame, node_count: usize) -> DMatrix<f64> {
    let lambda = frame.lambda();
    let mut t = DMatrix::zeros(3 * node_count, 3 * node_count);
    for k in 0..node_count {
        t.fixed_view_mut::<3, 3>(3 * k, 3 * k).copy_from(&lambda);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateElement {
    /// Corners in the global frame.
    pub geometry: QuadGeometry,
    pub kind: ElementKind,
    pub material: Material,
    pub frame: Frame,
}

impl PlateElement {
    pub fn multiresolution(geometry: QuadGeometry, rl: ResolutionLevel, material: Material) -> Self {
        Self {
            geometry,
            kind: ElementKind::Multiresolution(rl),
            material,
            frame: Frame::IDENTITY,
        }
    }

    pub fn classical(geometry: QuadGeometry, material: Material) -> Self {
        Self {
            geometry,
            kind: ElementKind::Classical,
            material,
            frame: Frame::IDENTITY,
        }
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    fn local_geometry(&self) -> Result<QuadGeometry> {
        if self.frame.is_identity() {
            return Ok(self.geometry.clone());
        }
        self.frame.check_coplanar()?;
        self.geometry.transformed(|p| self.frame.to_local(p))
    }
}

/// Node selection for constraints.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeSelector {
    Global(usize),
    /// The node at a physical location (within the coincidence tolerance).
    At([f64; 2]),
    /// All nodes on one side of an element.
    Edge {
        element: usize,
        side: Side,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub nodes: NodeSelector,
    pub dofs: Vec<Dof>,
    /// Prescribed value per dof; zeros when empty.
    pub values: Vec<f64>,
}

impl Constraint {
    pub fn fixed(nodes: NodeSelector, dofs: &[Dof]) -> Self {
        Self {
            nodes,
            dofs: dofs.to_vec(),
            values: Vec::new(),
        }
    }

    pub fn prescribed(nodes: NodeSelector, dof: Dof, value: f64) -> Self {
        Self {
            nodes,
            dofs: vec![dof],
            values: vec![value],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointLoad {
    pub element: usize,
    pub at: NaturalPoint,
    pub force: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateModel {
    pub elements: Vec<PlateElement>,
    pub constraints: Vec<Constraint>,
    /// Uniform pressure per element (same length as `elements`).
    pub pressure: Vec<f64>,
    pub point_loads: Vec<PointLoad>,
    pub quad_order: usize,
}

impl Default for PlateModel {
    fn default() -> Self {
        Self {
            elements: Vec::new(),
            constraints: Vec::new(),
            pressure: Vec::new(),
            point_loads: Vec::new(),
            quad_order: DEFAULT_ORDER,
        }
    }
}

impl PlateModel {
    pub fn add_element(&mut self, element: PlateElement, pressure: f64) -> usize {
        self.elements.push(element);
        self.pressure.push(pressure);
        self.elements.len() - 1
    }

    /// Bounding-box diagonal of all corners.
    pub fn scale(&self) -> f64 {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for c in self.elements.iter().flat_map(|e| e.geometry.corners()) {
            lo = [lo[0].min(c.x), lo[1].min(c.y)];
            hi = [hi[0].max(c.x), hi[1].max(c.y)];
        }
        ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt()
    }
}

/// Per-element data kept with the assembled system.
#[derive(Debug, Clone)]
pub struct ElementDofs {
    pub kind: ElementKind,
    /// Geometry in the element's local frame.
    pub local_geometry: QuadGeometry,
    pub frame: Frame,
    pub natural_points: Vec<NaturalPoint>,
    /// Global node id of each local node.
    pub nodes: Vec<usize>,
}

impl ElementDofs {
    fn global_dofs(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().flat_map(|n| (0..3).map(move |k| 3 * n + k))
    }
}

/// Assembled but unconstrained global system.
#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub stiffness: DMatrix<f64>,
    pub load: DVector<f64>,
    pub nodes: Vec<Point2<f64>>,
    pub elements: Vec<ElementDofs>,
    tolerance: f64,
}

impl GlobalSystem {
    pub fn dof_count(&self) -> usize {
        3 * self.nodes.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Global node ids picked by a selector.
    pub fn select(&self, selector: &NodeSelector) -> Result<Vec<usize>> {
        match selector {
            NodeSelector::Global(id) => {
                if *id < self.nodes.len() {
                    Ok(vec![*id])
                } else {
                    Err(Error::UnknownNode(format!("global node {id}")))
                }
            }
            NodeSelector::At([x, y]) => {
                let hits: Vec<usize> = self
                    .nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| (p.x - x).hypot(p.y - y) <= self.tolerance)
                    .map(|(i, _)| i)
                    .collect();
                match hits.len() {
                    0 => Err(Error::UnknownNode(format!("at ({x}, {y})"))),
                    1 => Ok(hits),
                    _ => Err(Error::AmbiguousNode { x: *x, y: *y }),
                }
            }
            NodeSelector::Edge { element, side } => {
                let e = self
                    .elements
                    .get(*element)
                    .ok_or_else(|| Error::UnknownNode(format!("element {element}")))?;
                Ok(e.natural_points
                    .iter()
                    .zip(&e.nodes)
                    .filter(|(p, _)| side.contains(**p))
                    .map(|(_, n)| *n)
                    .collect())
            }
        }
    }
}

struct NodeIndexer {
    nodes: Vec<Point2<f64>>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    tol: f64,
    bucket: f64,
}

impl NodeIndexer {
    fn new(tol: f64) -> Self {
        Self {
            nodes: Vec::new(),
            buckets: HashMap::new(),
            tol,
            bucket: 4.0 * tol,
        }
    }

    fn key(&self, p: Point2<f64>) -> (i64, i64) {
        ((p.x / self.bucket).floor() as i64, (p.y / self.bucket).floor() as i64)
    }

    fn find(&self, p: Point2<f64>) -> Result<Option<usize>> {
        let (kx, ky) = self.key(p);
        let mut hit = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &i in self.buckets.get(&(kx + dx, ky + dy)).into_iter().flatten() {
                    let q = self.nodes[i];
                    if (q.x - p.x).hypot(q.y - p.y) <= self.tol {
                        if hit.is_some_and(|h| h != i) {
                            return Err(Error::AmbiguousNode { x: p.x, y: p.y });
                        }
                        hit = Some(i);
                    }
                }
            }
        }
        Ok(hit)
    }

    fn insert(&mut self, p: Point2<f64>) -> Result<usize> {
        if let Some(i) = self.find(p)? {
            return Ok(i);
        }
        let i = self.nodes.len();
        self.nodes.push(p);
        let key = self.key(p);
        self.buckets.entry(key).or_default().push(i);
        Ok(i)
    }
}

fn check_shared_edges(model: &PlateModel, tol: f64) -> Result<()> {
    let close = |a: Point2<f64>, b: Point2<f64>| (a.x - b.x).hypot(a.y - b.y) <= tol;
    for (i, a) in model.elements.iter().enumerate() {
        for (j, b) in model.elements.iter().enumerate().skip(i + 1) {
            for sa in Side::ALL {
                let (a0, a1) = sa.corners();
                let (pa0, pa1) = (a.geometry.corners()[a0], a.geometry.corners()[a1]);
                for sb in Side::ALL {
                    let (b0, b1) = sb.corners();
                    let (pb0, pb1) = (b.geometry.corners()[b0], b.geometry.corners()[b1]);
                    let shared = (close(pa0, pb0) && close(pa1, pb1)) || (close(pa0, pb1) && close(pa1, pb0));
                    if !shared {
                        continue;
                    }
                    let (na, nb) = (a.kind.side_node_count(sa), b.kind.side_node_count(sb));
                    if na != nb {
                        return Err(Error::ResolutionMismatch {
                            first: i,
                            first_nodes: na,
                            second: j,
                            second_nodes: nb,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Element matrices in the element's local frame.
fn local_matrices(
    e: &PlateElement,
    geom: &QuadGeometry,
    pressure: f64,
    rule: &GaussRule,
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    match e.kind {
        ElementKind::Multiresolution(rl) => Ok((
            element_stiffness(geom, rl, &e.material, rule)?.into_matrix(),
            distributed_load(geom, rl, pressure, rule)?,
        )),
        ElementKind::Classical => Ok((
            classical_element_stiffness(geom, &e.material, rule)?,
            classical_distributed_load(geom, pressure, rule)?,
        )),
    }
}

/// Interpolation row (values only) of an element at `p`, in local dof order.
fn value_row(kind: ElementKind, geom: &QuadGeometry, p: NaturalPoint) -> Vec<f64> {
    match kind {
        ElementKind::Multiresolution(rl) => MraBasis::new(geom, rl).row(p).iter().map(|s| s.value).collect(),
        ElementKind::Classical => ClassicalShapes::new(geom).values(p).to_vec(),
    }
}

/// Assembles the global stiffness and load by merging coincident nodes.
pub fn splice(model: &PlateModel) -> Result<GlobalSystem> {
    if model.pressure.len() != model.elements.len() {
        return Err(Error::Model("one pressure value per element is required".into()));
    }
    let tol = COINCIDENCE_TOLERANCE * model.scale();
    check_shared_edges(model, tol)?;

    let mut indexer = NodeIndexer::new(tol);
    let mut elements = Vec::with_capacity(model.elements.len());
    for e in &model.elements {
        let natural_points = e.kind.node_points();
        let nodes = natural_points
            .iter()
            .map(|p| indexer.insert(e.geometry.map_to_physical(*p)))
            .collect::<Result<Vec<_>>>()?;
        elements.push(ElementDofs {
            kind: e.kind,
            local_geometry: e.local_geometry()?,
            frame: e.frame,
            natural_points,
            nodes,
        });
    }

    let rule = GaussRule::new(model.quad_order);
    let n = 3 * indexer.nodes.len();
    let mut stiffness = DMatrix::zeros(n, n);
    let mut load = DVector::zeros(n);
    for pl in &model.point_loads {
        if pl.element >= model.elements.len() {
            return Err(Error::Model(format!("point load on unknown element {}", pl.element)));
        }
    }
    for (idx, ((e, dofs), q)) in model.elements.iter().zip(&elements).zip(&model.pressure).enumerate() {
        let (mut k, mut f) = local_matrices(e, &dofs.local_geometry, *q, &rule)?;
        for pl in model.point_loads.iter().filter(|pl| pl.element == idx) {
            f += point_load_vector(dofs, pl)?;
        }
        if !e.frame.is_identity() {
            let t = transformation_matrix(&e.frame, dofs.nodes.len());
            k = t.transpose() * k * &t;
            f = t.transpose() * f;
        }
        let global: Vec<usize> = dofs.global_dofs().collect();
        for (a, &ga) in global.iter().enumerate() {
            load[ga] += f[a];
            for (b, &gb) in global.iter().enumerate() {
                stiffness[(ga, gb)] += k[(a, b)];
            }
        }
    }
    Ok(GlobalSystem {
        stiffness,
        load,
        nodes: indexer.nodes,
        elements,
        tolerance: tol,
    })
}

fn point_load_vector(dofs: &ElementDofs, pl: &PointLoad) -> Result<DVector<f64>> {
    match dofs.kind {
        ElementKind::Multiresolution(rl) => lump_load(&dofs.local_geometry, rl, pl.force, pl.at),
        ElementKind::Classical => {
            let row = value_row(dofs.kind, &dofs.local_geometry, pl.at);
            Ok(DVector::from_iterator(12, row.iter().map(|v| v * pl.force)))
        }
    }
}

/// System with constraints eliminated in place: constrained rows and columns
/// are zeroed with a unit diagonal and the prescribed value on the right.
#[derive(Debug, Clone)]
pub struct ConstrainedSystem {
    pub system: GlobalSystem,
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    /// Constrained global dofs and their prescribed values, sorted by dof.
    pub prescribed: Vec<(usize, f64)>,
}

impl ConstrainedSystem {
    pub fn free_dof_count(&self) -> usize {
        self.system.dof_count() - self.prescribed.len()
    }
}

pub fn apply_constraints(system: GlobalSystem, constraints: &[Constraint]) -> Result<ConstrainedSystem> {
    let mut fixed: HashMap<usize, f64> = HashMap::new();
    for c in constraints {
        if !c.values.is_empty() && c.values.len() != c.dofs.len() {
            return Err(Error::Model("constraint values must match its dofs".into()));
        }
        for node in system.select(&c.nodes)? {
            for (k, dof) in c.dofs.iter().enumerate() {
                let value = c.values.get(k).copied().unwrap_or(0.0);
                let g = 3 * node + dof.offset();
                if let Some(&old) = fixed.get(&g) {
                    if old != value {
                        return Err(Error::ConflictingConstraint {
                            dof: g,
                            first: old,
                            second: value,
                        });
                    }
                }
                fixed.insert(g, value);
            }
        }
    }
    let mut prescribed: Vec<(usize, f64)> = fixed.into_iter().collect();
    prescribed.sort_by_key(|(g, _)| *g);

    let mut matrix = system.stiffness.clone();
    let mut rhs = system.load.clone();
    for &(g, v) in &prescribed {
        if v != 0.0 {
            for i in 0..rhs.len() {
                rhs[i] -= matrix[(i, g)] * v;
            }
        }
    }
    for &(g, v) in &prescribed {
        matrix.row_mut(g).fill(0.0);
        matrix.column_mut(g).fill(0.0);
        matrix[(g, g)] = 1.0;
        rhs[g] = v;
    }
    Ok(ConstrainedSystem {
        system,
        matrix,
        rhs,
        prescribed,
    })
}

/// Nodal displacements in global dof order.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub displacements: DVector<f64>,
}

impl Solution {
    pub fn node(&self, id: usize) -> [f64; 3] {
        [
            self.displacements[3 * id],
            self.displacements[3 * id + 1],
            self.displacements[3 * id + 2],
        ]
    }
}

/// Cholesky solve of the constrained system.
pub fn solve(cs: &ConstrainedSystem) -> Result<Solution> {
    let n = cs.matrix.nrows();
    if n == 0 {
        return Ok(Solution {
            displacements: DVector::zeros(0),
        });
    }
    let chol = nalgebra::Cholesky::new(cs.matrix.clone()).ok_or_else(|| {
        let dof = (0..n)
            .min_by(|&a, &b| cs.matrix[(a, a)].total_cmp(&cs.matrix[(b, b)]))
            .unwrap_or(0);
        Error::SingularSystem { dof, pivot: 0.0 }
    })?;
    let l = chol.l_dirty();
    for i in 0..n {
        let pivot = l[(i, i)] * l[(i, i)];
        if pivot <= PIVOT_TOLERANCE * cs.matrix[(i, i)].abs() {
            return Err(Error::SingularSystem { dof: i, pivot });
        }
    }
    let mut a = chol.solve(&cs.rhs);
    // one refinement step recovers the round-off lost on fine meshes
    a += chol.solve(&(&cs.rhs - &cs.matrix * &a));
    let residual = (&cs.matrix * &a - &cs.rhs).norm();
    let scale = cs.rhs.norm();
    if residual > RESIDUAL_TOLERANCE * scale.max(f64::MIN_POSITIVE) && scale > 0.0 {
        return Err(Error::SingularSystem {
            dof: 0,
            pivot: residual / scale,
        });
    }
    Ok(Solution { displacements: a })
}

/// Convenience: splice, constrain and solve a model.
pub fn solve_model(model: &PlateModel) -> Result<(ConstrainedSystem, Solution)> {
    let system = splice(model)?;
    let cs = apply_constraints(system, &model.constraints)?;
    let sol = solve(&cs)?;
    Ok((cs, sol))
}

/// Transverse deflection inside `element` at natural point `p`.
pub fn deflection_at(system: &GlobalSystem, solution: &Solution, element: usize, p: NaturalPoint) -> Result<f64> {
    let e = system
        .elements
        .get(element)
        .ok_or_else(|| Error::UnknownNode(format!("element {element}")))?;
    let global = DVector::from_iterator(3 * e.nodes.len(), e.global_dofs().map(|g| solution.displacements[g]));
    let local = if e.frame.is_identity() {
        global
    } else {
        transformation_matrix(&e.frame, e.nodes.len()) * global
    };
    let row = value_row(e.kind, &e.local_geometry, p);
    Ok(row.iter().zip(local.iter()).map(|(a, b)| a * b).sum())
}

/// `a^T K a / 2` with the unconstrained stiffness.
pub fn strain_energy(system: &GlobalSystem, solution: &Solution) -> f64 {
    let a = &solution.displacements;
    0.5 * a.dot(&(&system.stiffness * a))
}

/// `f^T a / 2`.
pub fn external_work(system: &GlobalSystem, solution: &Solution) -> f64 {
    0.5 * system.load.dot(&solution.displacements)
}

/// `K a - f`: nonzero only on constrained dofs at equilibrium.
pub fn reactions(system: &GlobalSystem, solution: &Solution) -> DVector<f64> {
    &system.stiffness * &solution.displacements - &system.load
}
