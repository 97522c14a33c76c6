//! Shape functions: the classical 12-dof bending element on `[0,1]²`, the basic
//! node shape functions obtained by extending the node-1 shapes into the four
//! quadrants around a node, and their scaled/shifted versions on an element at
//! a given resolution level.
//!
//! All derivatives are exact: shapes are built from [`ShapeEval`] values, which
//! carry natural first and second partials through polynomial arithmetic.

use std::io::Write;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::geometry::{NaturalPoint, QuadGeometry};

/// A value together with its natural partial derivatives up to second order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ShapeEval {
    pub value: f64,
    pub d_xi: f64,
    pub d_eta: f64,
    pub d_xixi: f64,
    pub d_etaeta: f64,
    pub d_xieta: f64,
}

impl ShapeEval {
    pub const ZERO: Self = Self::constant(0.0);

    pub const fn constant(value: f64) -> Self {
        Self {
            value,
            d_xi: 0.0,
            d_eta: 0.0,
            d_xixi: 0.0,
            d_etaeta: 0.0,
            d_xieta: 0.0,
        }
    }

    fn linear(value: f64, d_xi: f64, d_eta: f64) -> Self {
        Self {
            value,
            d_xi,
            d_eta,
            ..Self::ZERO
        }
    }

    /// Chain rule for the argument map `(xi, eta) -> (sx * xi - r, sy * eta - s)`,
    /// followed by multiplication with `factor`.
    fn rescaled(self, sx: f64, sy: f64, factor: f64) -> Self {
        Self {
            value: factor * self.value,
            d_xi: factor * sx * self.d_xi,
            d_eta: factor * sy * self.d_eta,
            d_xixi: factor * sx * sx * self.d_xixi,
            d_etaeta: factor * sy * sy * self.d_etaeta,
            d_xieta: factor * sx * sy * self.d_xieta,
        }
    }

    pub fn is_finite(&self) -> bool {
        [
            self.value,
            self.d_xi,
            self.d_eta,
            self.d_xixi,
            self.d_etaeta,
            self.d_xieta,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

impl Add for ShapeEval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            d_xi: self.d_xi + o.d_xi,
            d_eta: self.d_eta + o.d_eta,
            d_xixi: self.d_xixi + o.d_xixi,
            d_etaeta: self.d_etaeta + o.d_etaeta,
            d_xieta: self.d_xieta + o.d_xieta,
        }
    }
}

impl Sub for ShapeEval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for ShapeEval {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul for ShapeEval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            value: self.value * o.value,
            d_xi: self.d_xi * o.value + self.value * o.d_xi,
            d_eta: self.d_eta * o.value + self.value * o.d_eta,
            d_xixi: self.d_xixi * o.value + 2.0 * self.d_xi * o.d_xi + self.value * o.d_xixi,
            d_etaeta: self.d_etaeta * o.value + 2.0 * self.d_eta * o.d_eta + self.value * o.d_etaeta,
            d_xieta: self.d_xieta * o.value + self.d_xi * o.d_eta + self.d_eta * o.d_xi + self.value * o.d_xieta,
        }
    }
}

impl Mul<f64> for ShapeEval {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self {
            value: k * self.value,
            d_xi: k * self.d_xi,
            d_eta: k * self.d_eta,
            d_xixi: k * self.d_xixi,
            d_etaeta: k * self.d_etaeta,
            d_xieta: k * self.d_xieta,
        }
    }
}

/// Scaling parameters `(m, n)`: the element carries an `(m+1) x (n+1)` node grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResolutionLevel {
    m: usize,
    n: usize,
}

impl ResolutionLevel {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidResolution { m, n });
        }
        Ok(Self { m, n })
    }

    /// From node counts, e.g. `9 x 9` nodes is `(m, n) = (8, 8)`.
    pub fn from_node_counts(nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx.saturating_sub(1), ny.saturating_sub(1))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        (self.m + 1) * (self.n + 1)
    }

    pub fn dof_count(&self) -> usize {
        3 * self.node_count()
    }

    /// Canonical node order: `r` slow, `s` fast.
    pub fn node_position(&self, node: NodeIndex) -> usize {
        node.r * (self.n + 1) + node.s
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeIndex> + '_ {
        (0..=self.m).flat_map(move |r| (0..=self.n).map(move |s| NodeIndex { r, s }))
    }

    pub fn check(&self, node: NodeIndex) -> Result<()> {
        if node.r > self.m || node.s > self.n {
            return Err(Error::InvalidNode {
                r: node.r,
                s: node.s,
                m: self.m,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn node_point(&self, node: NodeIndex) -> NaturalPoint {
        NaturalPoint::new(node.r as f64 / self.m as f64, node.s as f64 / self.n as f64)
    }

    /// Cell `(i, j)` of the `m x n` sub-grid containing `p`; points on a seam
    /// belong to the cell on their upper side except on the last row/column.
    pub fn cell_of(&self, p: NaturalPoint) -> (usize, usize) {
        let locate = |t: f64, k: usize| ((t * k as f64).floor().max(0.0) as usize).min(k - 1);
        (locate(p.xi, self.m), locate(p.eta, self.n))
    }
}

impl std::fmt::Display for ResolutionLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.m + 1, self.n + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeIndex {
    pub r: usize,
    pub s: usize,
}

impl NodeIndex {
    pub const fn new(r: usize, s: usize) -> Self {
        Self { r, s }
    }
}

/// Corner-difference constants entering the rotational shapes.
#[derive(Debug, Clone, Copy)]
struct RotationConstants {
    x21: f64,
    x41: f64,
    x32: f64,
    x34: f64,
    y21: f64,
    y41: f64,
    y32: f64,
    y34: f64,
}

impl RotationConstants {
    fn of(g: &QuadGeometry) -> Self {
        Self {
            x21: g.dx(2, 1),
            x41: g.dx(4, 1),
            x32: g.dx(3, 2),
            x34: g.dx(3, 4),
            y21: g.dy(2, 1),
            y41: g.dy(4, 1),
            y32: g.dy(3, 2),
            y34: g.dy(3, 4),
        }
    }
}

/// The `(N, N_x, N_y)` triple of classical corner `corner` (0-based) at `(u, v)`.
fn classical_triple(k: &RotationConstants, corner: usize, u: f64, v: f64) -> [ShapeEval; 3] {
    let x1 = ShapeEval::linear(1.0 - u, -1.0, 0.0);
    let x2 = ShapeEval::linear(u, 1.0, 0.0);
    let y1 = ShapeEval::linear(1.0 - v, 0.0, -1.0);
    let y2 = ShapeEval::linear(v, 0.0, 1.0);
    let bubble = (x1 * x2) * 2.0 + (y1 * y2) * 2.0;
    let xx = x1 * x2;
    let yy = y1 * y2;
    match corner {
        0 => {
            let base = x1 * y1;
            [
                base * (base - x2 * y2 + bubble),
                base * (xx * k.y21 + yy * k.y41),
                base * (xx * -k.x21 - yy * k.x41),
            ]
        }
        1 => {
            let base = x2 * y1;
            [
                base * (base - x1 * y2 + bubble),
                base * (xx * -k.y21 + yy * k.y32),
                base * (xx * k.x21 - yy * k.x32),
            ]
        }
        2 => {
            let base = x2 * y2;
            [
                base * (base - x1 * y1 + bubble),
                base * (xx * -k.y34 - yy * k.y32),
                base * (xx * k.x34 + yy * k.x32),
            ]
        }
        3 => {
            let base = x1 * y2;
            [
                base * (base - x2 * y1 + bubble),
                base * (xx * k.y34 - yy * k.y41),
                base * (xx * -k.x34 + yy * k.x41),
            ]
        }
        _ => unreachable!("quadrilateral corner index {corner}"),
    }
}

/// Classical shapes `(N_i, N_xi, N_yi)` for corners `i = 1..4`, flattened in
/// that order, at `p` in `[0,1]²`.
pub fn classical_shapes(geom: &QuadGeometry, p: NaturalPoint) -> [ShapeEval; 12] {
    let k = RotationConstants::of(geom);
    let mut out = [ShapeEval::ZERO; 12];
    for corner in 0..4 {
        let t = classical_triple(&k, corner, p.xi, p.eta);
        out[3 * corner..3 * corner + 3].copy_from_slice(&t);
    }
    out
}

/// Which classical corner a quadrant around the basic node borrows, and the
/// shift applied to the argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quadrant {
    /// `xi >= 0, eta >= 0`: corner 1 at `(xi, eta)`.
    UpperRight,
    /// `xi <= 0, eta >= 0`: corner 2 at `(1 + xi, eta)`.
    UpperLeft,
    /// `xi <= 0, eta <= 0`: corner 3 at `(1 + xi, 1 + eta)`.
    LowerLeft,
    /// `xi >= 0, eta <= 0`: corner 4 at `(xi, 1 + eta)`.
    LowerRight,
}

impl Quadrant {
    fn of(u: f64, v: f64) -> Self {
        match (u >= 0.0, v >= 0.0) {
            (true, true) => Self::UpperRight,
            (false, true) => Self::UpperLeft,
            (false, false) => Self::LowerLeft,
            (true, false) => Self::LowerRight,
        }
    }

    fn eval(self, k: &RotationConstants, u: f64, v: f64) -> [ShapeEval; 3] {
        match self {
            Self::UpperRight => classical_triple(k, 0, u, v),
            Self::UpperLeft => classical_triple(k, 1, 1.0 + u, v),
            Self::LowerLeft => classical_triple(k, 2, 1.0 + u, 1.0 + v),
            Self::LowerRight => classical_triple(k, 3, u, 1.0 + v),
        }
    }
}

/// Basic node shapes `(phi1, phi2, phi3)` of the node at the origin of
/// `[-1,1]²`. Zero outside the square. On the seams `xi = 0` / `eta = 0` the
/// non-negative side is used.
pub fn basic_node_shapes(geom: &QuadGeometry, p: NaturalPoint) -> [ShapeEval; 3] {
    let (u, v) = (p.xi, p.eta);
    if !(-1.0..=1.0).contains(&u) || !(-1.0..=1.0).contains(&v) {
        return [ShapeEval::ZERO; 3];
    }
    Quadrant::of(u, v).eval(&RotationConstants::of(geom), u, v)
}

/// Evaluates the scaled/shifted basis of an element cell by cell.
///
/// The four nodes of cell `(i, j)` see the cell through four different
/// quadrants of their basic shape; inside one cell all of them are smooth
/// polynomials, so quadrature is always performed per cell.
#[derive(Debug, Clone, Copy)]
pub struct MraBasis {
    rl: ResolutionLevel,
    consts: RotationConstants,
}

impl MraBasis {
    pub fn new(geom: &QuadGeometry, rl: ResolutionLevel) -> Self {
        Self {
            rl,
            consts: RotationConstants::of(geom),
        }
    }

    pub fn resolution(&self) -> ResolutionLevel {
        self.rl
    }

    /// Triples of the four corner nodes of cell `(i, j)` at `p`, ordered
    /// `(i,j), (i+1,j), (i+1,j+1), (i,j+1)`.
    pub fn cell_triples(&self, cell: (usize, usize), p: NaturalPoint) -> [(NodeIndex, [ShapeEval; 3]); 4] {
        let (i, j) = cell;
        let nodes = [
            (NodeIndex::new(i, j), Quadrant::UpperRight),
            (NodeIndex::new(i + 1, j), Quadrant::UpperLeft),
            (NodeIndex::new(i + 1, j + 1), Quadrant::LowerLeft),
            (NodeIndex::new(i, j + 1), Quadrant::LowerRight),
        ];
        nodes.map(|(node, quadrant)| (node, self.triple_in(node, quadrant, p)))
    }

    fn triple_in(&self, node: NodeIndex, quadrant: Quadrant, p: NaturalPoint) -> [ShapeEval; 3] {
        let (m, n) = (self.rl.m as f64, self.rl.n as f64);
        let u = m * p.xi - node.r as f64;
        let v = n * p.eta - node.s as f64;
        let [phi1, phi2, phi3] = quadrant.eval(&self.consts, u, v);
        [
            phi1.rescaled(m, n, 1.0),
            phi2.rescaled(m, n, 1.0 / n),
            phi3.rescaled(m, n, 1.0 / m),
        ]
    }

    /// Scaled/shifted triple `(phi1, phi2 / n, phi3 / m)` of `node` at `p`.
    pub fn node_triple(&self, node: NodeIndex, p: NaturalPoint) -> [ShapeEval; 3] {
        let (i, j) = self.rl.cell_of(p);
        let quadrant = match (node.r.checked_sub(i), node.s.checked_sub(j)) {
            (Some(0), Some(0)) => Quadrant::UpperRight,
            (Some(1), Some(0)) => Quadrant::UpperLeft,
            (Some(1), Some(1)) => Quadrant::LowerLeft,
            (Some(0), Some(1)) => Quadrant::LowerRight,
            _ => return [ShapeEval::ZERO; 3],
        };
        self.triple_in(node, quadrant, p)
    }

    /// Full row in canonical dof order.
    pub fn row(&self, p: NaturalPoint) -> Vec<ShapeEval> {
        let mut row = vec![ShapeEval::ZERO; self.rl.dof_count()];
        for (node, triple) in self.cell_triples(self.rl.cell_of(p), p) {
            let at = 3 * self.rl.node_position(node);
            row[at..at + 3].copy_from_slice(&triple);
        }
        row
    }
}

/// Scaled/shifted node triple of `node` at `p` in `[0,1]²`.
pub fn mra_node_shapes(
    geom: &QuadGeometry,
    rl: ResolutionLevel,
    node: NodeIndex,
    p: NaturalPoint,
) -> Result<[ShapeEval; 3]> {
    rl.check(node)?;
    Ok(MraBasis::new(geom, rl).node_triple(node, p))
}

/// Row of `3 (m+1)(n+1)` basis values and derivatives at `p`, canonical order.
pub fn mra_basis_row(geom: &QuadGeometry, rl: ResolutionLevel, p: NaturalPoint) -> Vec<ShapeEval> {
    MraBasis::new(geom, rl).row(p)
}

/// Writes `xi,eta,phi1,phi2,phi3` on a `k x k` lattice over `[-1,1]²`.
pub fn write_basic_samples<W: Write>(geom: &QuadGeometry, k: usize, out: &mut W) -> Result<()> {
    writeln!(out, "xi,eta,phi1,phi2,phi3")?;
    for (xi, eta) in lattice(k, -1.0, 1.0) {
        let [a, b, c] = basic_node_shapes(geom, NaturalPoint::new(xi, eta));
        writeln!(out, "{xi},{eta},{},{},{}", a.value + 0.0, b.value + 0.0, c.value + 0.0)?;
    }
    Ok(())
}

/// Writes the scaled/shifted triple of one node on a `k x k` lattice over `[0,1]²`.
pub fn write_mra_samples<W: Write>(
    geom: &QuadGeometry,
    rl: ResolutionLevel,
    node: NodeIndex,
    k: usize,
    out: &mut W,
) -> Result<()> {
    rl.check(node)?;
    let basis = MraBasis::new(geom, rl);
    writeln!(out, "xi,eta,phi1,phi2,phi3")?;
    for (xi, eta) in lattice(k, 0.0, 1.0) {
        let [a, b, c] = basis.node_triple(node, NaturalPoint::new(xi, eta));
        writeln!(out, "{xi},{eta},{},{},{}", a.value + 0.0, b.value + 0.0, c.value + 0.0)?;
    }
    Ok(())
}

fn lattice(k: usize, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> {
    let step = if k > 1 { (hi - lo) / (k - 1) as f64 } else { 0.0 };
    (0..k).flat_map(move |a| (0..k).map(move |b| (lo + a as f64 * step, lo + b as f64 * step)))
}
