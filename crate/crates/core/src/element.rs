//! Multiresolution element stiffness and load vectors.
//!
//! Every integral is evaluated cell by cell on the `m x n` natural sub-grid:
//! the shapes are polynomials inside a cell but have derivative kinks across
//! cell seams. Node `(r, s)` is supported by at most four cells, so the 3x3
//! coupling block between nodes `(c, d)` and `(r, s)` vanishes identically
//! once `|c - r| > 1` or `|d - s| > 1` and is never formed.

pub mod appendix;
pub mod classical;

use nalgebra::{DMatrix, DVector, Matrix3, SMatrix};

use crate::error::{Error, Result};
use crate::geometry::{NaturalPoint, PointMapping, QuadGeometry};
use crate::quadrature::GaussRule;
use crate::shape_basis::{MraBasis, ShapeEval};
pub use crate::shape_basis::{NodeIndex, ResolutionLevel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub youngs_modulus: f64,
    pub thickness: f64,
    pub poisson: f64,
}

impl Material {
    pub fn new(youngs_modulus: f64, thickness: f64, poisson: f64) -> Result<Self> {
        if !(youngs_modulus > 0.0 && youngs_modulus.is_finite()) {
            return Err(Error::InvalidMaterial(format!("E = {youngs_modulus} must be positive")));
        }
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(Error::InvalidMaterial(format!("h = {thickness} must be positive")));
        }
        if !(0.0..0.5).contains(&poisson) {
            return Err(Error::InvalidMaterial(format!("mu = {poisson} must lie in [0, 0.5)")));
        }
        Ok(Self {
            youngs_modulus,
            thickness,
            poisson,
        })
    }

    /// Flexural rigidity `E h^3 / (12 (1 - mu^2))`.
    pub fn flexural_rigidity(&self) -> f64 {
        self.youngs_modulus * self.thickness.powi(3) / (12.0 * (1.0 - self.poisson * self.poisson))
    }
}

/// Bending rigidity matrix `D_b` and its scalar factor `C_b`.
pub fn bending_rigidity(mat: &Material) -> (Matrix3<f64>, f64) {
    let cb = mat.flexural_rigidity();
    let mu = mat.poisson;
    #[rustfmt::skip]
    let d = Matrix3::new(
        1.0, mu, 0.0,
        mu, 1.0, 0.0,
        0.0, 0.0, 0.5 * (1.0 - mu),
    ) * cb;
    (d, cb)
}

/// Curvature columns `-[w_xx, w_yy, 2 w_xy]` of a shape triple.
pub(crate) fn curvature_columns(map: &PointMapping, triple: &[ShapeEval; 3]) -> Matrix3<f64> {
    let mut b = Matrix3::zeros();
    for (j, s) in triple.iter().enumerate() {
        let [wxx, wyy, wxy] = map.hessian(s.d_xi, s.d_eta, s.d_xixi, s.d_etaeta, s.d_xieta);
        b[(0, j)] = -wxx;
        b[(1, j)] = -wyy;
        b[(2, j)] = -2.0 * wxy;
    }
    b
}

/// Dense element stiffness in canonical dof order.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementStiffness {
    rl: ResolutionLevel,
    matrix: DMatrix<f64>,
}

impl ElementStiffness {
    pub fn resolution(&self) -> ResolutionLevel {
        self.rl
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// Node block `k_{cd,rs}`: rows belong to `cd`, columns to `rs`.
    pub fn block(&self, cd: NodeIndex, rs: NodeIndex) -> Matrix3<f64> {
        let i = 3 * self.rl.node_position(cd);
        let j = 3 * self.rl.node_position(rs);
        self.matrix.fixed_view::<3, 3>(i, j).into_owned()
    }
}

/// Element-level integration context shared by stiffness and loads.
struct Integrator<'a> {
    geom: &'a QuadGeometry,
    basis: MraBasis,
    rule: &'a GaussRule,
}

impl<'a> Integrator<'a> {
    fn new(geom: &'a QuadGeometry, rl: ResolutionLevel, rule: &'a GaussRule) -> Self {
        Self {
            geom,
            basis: MraBasis::new(geom, rl),
            rule,
        }
    }

    fn rl(&self) -> ResolutionLevel {
        self.basis.resolution()
    }

    /// Gauss points of cell `(i, j)` as natural points with weights that
    /// include the cell's share of the natural square.
    fn cell_points(&self, cell: (usize, usize)) -> impl Iterator<Item = (NaturalPoint, f64)> + '_ {
        let (m, n) = (self.rl().m() as f64, self.rl().n() as f64);
        let (i, j) = (cell.0 as f64, cell.1 as f64);
        self.rule
            .tensor()
            .map(move |(s, t, w)| (NaturalPoint::new((i + s) / m, (j + t) / n), w / (m * n)))
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize)> {
        let (m, n) = (self.rl().m(), self.rl().n());
        (0..m).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }

    /// 12x12 stiffness of one cell over its four corner nodes, in
    /// `cell_triples` order.
    fn cell_stiffness(&self, cell: (usize, usize), d: &Matrix3<f64>) -> Result<(SMatrix<f64, 12, 12>, [NodeIndex; 4])> {
        let mut k = SMatrix::<f64, 12, 12>::zeros();
        let mut nodes = [NodeIndex::new(0, 0); 4];
        for (p, w) in self.cell_points(cell) {
            let map = self.geom.point_mapping(p)?;
            let mut b = SMatrix::<f64, 3, 12>::zeros();
            for (slot, (node, triple)) in self.basis.cell_triples(cell, p).iter().enumerate() {
                nodes[slot] = *node;
                b.fixed_view_mut::<3, 3>(0, 3 * slot)
                    .copy_from(&curvature_columns(&map, triple));
            }
            k += b.transpose() * (d * b) * (w * map.j1.det);
        }
        Ok((0.5 * (k + k.transpose()), nodes))
    }
}

/// `B_rs` at `p`: zero when `p` lies outside the node's support.
pub fn strain_block(
    geom: &QuadGeometry,
    rl: ResolutionLevel,
    node: NodeIndex,
    p: NaturalPoint,
) -> Result<Matrix3<f64>> {
    rl.check(node)?;
    let triple = MraBasis::new(geom, rl).node_triple(node, p);
    let map = geom.point_mapping(p)?;
    Ok(curvature_columns(&map, &triple))
}

/// Coupling block `k_{cd,rs}`, integrated over the cells both nodes support.
pub fn node_coupling_stiffness(
    geom: &QuadGeometry,
    rl: ResolutionLevel,
    mat: &Material,
    cd: NodeIndex,
    rs: NodeIndex,
    rule: &GaussRule,
) -> Result<Matrix3<f64>> {
    rl.check(cd)?;
    rl.check(rs)?;
    if cd.r.abs_diff(rs.r) > 1 || cd.s.abs_diff(rs.s) > 1 {
        return Ok(Matrix3::zeros());
    }
    let (d, _) = bending_rigidity(mat);
    let integ = Integrator::new(geom, rl, rule);
    let span = |a: usize, b: usize, k: usize| {
        let lo = a.max(b).saturating_sub(1);
        let hi = a.min(b).min(k - 1);
        lo..=hi
    };
    let mut k = Matrix3::zeros();
    for i in span(cd.r, rs.r, rl.m()) {
        for j in span(cd.s, rs.s, rl.n()) {
            for (p, w) in integ.cell_points((i, j)) {
                let map = geom.point_mapping(p)?;
                let triples = integ.basis.cell_triples((i, j), p);
                let find = |node: NodeIndex| {
                    triples
                        .iter()
                        .find(|(n, _)| *n == node)
                        .map(|(_, t)| curvature_columns(&map, t))
                        .expect("node is a corner of the shared cell")
                };
                let (bc, br) = (find(cd), find(rs));
                k += bc.transpose() * d * br * (w * map.j1.det);
            }
        }
    }
    Ok(k)
}

/// Full element stiffness.
pub fn element_stiffness(
    geom: &QuadGeometry,
    rl: ResolutionLevel,
    mat: &Material,
    rule: &GaussRule,
) -> Result<ElementStiffness> {
    let (d, _) = bending_rigidity(mat);
    let integ = Integrator::new(geom, rl, rule);
    let size = rl.dof_count();
    let mut matrix = DMatrix::zeros(size, size);
    for cell in integ.cells() {
        let (kc, nodes) = integ.cell_stiffness(cell, &d)?;
        for (a, na) in nodes.iter().enumerate() {
            let ia = 3 * rl.node_position(*na);
            for (b, nb) in nodes.iter().enumerate() {
                let ib = 3 * rl.node_position(*nb);
                let mut dst = matrix.fixed_view_mut::<3, 3>(ia, ib);
                dst += kc.fixed_view::<3, 3>(3 * a, 3 * b);
            }
        }
    }
    Ok(ElementStiffness { rl, matrix })
}

/// Consistent load vector of a per-cell constant pressure `q(i, j)`.
pub fn distributed_load_with(
    geom: &QuadGeometry,
    rl: ResolutionLevel,
    q: impl Fn((usize, usize)) -> f64,
    rule: &GaussRule,
) -> Result<DVector<f64>> {
    let integ = Integrator::new(geom, rl, rule);
    let mut f = DVector::zeros(rl.dof_count());
    for cell in integ.cells() {
        let qc = q(cell);
        if qc == 0.0 {
            continue;
        }
        for (p, w) in integ.cell_points(cell) {
            let det = geom.jacobian_first(p)?.det;
            for (node, triple) in integ.basis.cell_triples(cell, p) {
                let at = 3 * rl.node_position(node);
                for (k, s) in triple.iter().enumerate() {
                    f[at + k] += s.value * qc * w * det;
                }
            }
        }
    }
    Ok(f)
}

/// Consistent load vector of a uniform pressure.
pub fn distributed_load(geom: &QuadGeometry, rl: ResolutionLevel, q: f64, rule: &GaussRule) -> Result<DVector<f64>> {
    distributed_load_with(geom, rl, |_| q, rule)
}

/// `Psi(p)^T P` for a transverse point force at `p`.
pub fn lump_load(geom: &QuadGeometry, rl: ResolutionLevel, force: f64, p: NaturalPoint) -> Result<DVector<f64>> {
    if !(0.0..=1.0).contains(&p.xi) || !(0.0..=1.0).contains(&p.eta) {
        return Err(Error::InvalidGeometry(format!(
            "load point ({}, {}) is outside the natural square",
            p.xi, p.eta
        )));
    }
    let row = MraBasis::new(geom, rl).row(p);
    Ok(DVector::from_iterator(row.len(), row.iter().map(|s| s.value * force)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mat() -> Material {
        Material::new(1.0, 1.0, 0.3).unwrap()
    }

    fn general() -> QuadGeometry {
        QuadGeometry::new([[0.1, -0.2], [1.3, 0.1], [1.1, 0.9], [-0.2, 1.4]]).unwrap()
    }

    #[test]
    fn rigidity_examples() {
        let (d, cb) = bending_rigidity(&Material::new(1.0, 1.0, 0.0).unwrap());
        assert_relative_eq!(cb, 1.0 / 12.0);
        assert_relative_eq!(d, Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, 0.5)) / 12.0);
        let (d, cb) = bending_rigidity(&mat());
        assert_relative_eq!(cb, 1.0 / 10.92, epsilon = 1e-15);
        assert_eq!(d, d.transpose());
    }

    #[test]
    fn material_validation() {
        assert!(Material::new(0.0, 1.0, 0.3).is_err());
        assert!(Material::new(1.0, -1.0, 0.3).is_err());
        assert!(Material::new(1.0, 1.0, 0.5).is_err());
        assert!(Material::new(1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn strain_block_rectangle_scaling() {
        let (a, b) = (2.0, 0.5);
        let g = QuadGeometry::new([[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]]).unwrap();
        let rl = ResolutionLevel::new(2, 3).unwrap();
        let node = NodeIndex::new(1, 1);
        let p = NaturalPoint::new(0.61, 0.44);
        let blk = strain_block(&g, rl, node, p).unwrap();
        let t = crate::shape_basis::mra_node_shapes(&g, rl, node, p).unwrap();
        for j in 0..3 {
            assert_relative_eq!(blk[(0, j)], -t[j].d_xixi / (a * a), epsilon = 1e-12);
            assert_relative_eq!(blk[(1, j)], -t[j].d_etaeta / (b * b), epsilon = 1e-12);
            assert_relative_eq!(blk[(2, j)], -2.0 * t[j].d_xieta / (a * b), epsilon = 1e-12);
        }
        let outside = strain_block(&g, rl, node, NaturalPoint::new(0.95, 0.95)).unwrap();
        assert_eq!(outside, Matrix3::zeros());
    }

    #[test]
    fn coupling_blocks_match_assembled_matrix() {
        let g = general();
        let rl = ResolutionLevel::new(3, 2).unwrap();
        let rule = GaussRule::default();
        let k = element_stiffness(&g, rl, &mat(), &rule).unwrap();
        let scale = k.matrix().amax();
        for cd in rl.nodes() {
            for rs in rl.nodes() {
                let blk = node_coupling_stiffness(&g, rl, &mat(), cd, rs, &rule).unwrap();
                let diff = (blk - k.block(cd, rs)).amax();
                assert!(diff <= 1e-12 * scale, "{cd:?} {rs:?}: {diff}");
                let back = node_coupling_stiffness(&g, rl, &mat(), rs, cd, &rule).unwrap();
                assert!((blk - back.transpose()).amax() <= 1e-12 * scale);
            }
        }
        let far = node_coupling_stiffness(&g, rl, &mat(), NodeIndex::new(0, 0), NodeIndex::new(2, 0), &rule).unwrap();
        assert_eq!(far, Matrix3::zeros());
    }

    #[test]
    fn distributed_load_force_balance() {
        let g = general();
        for (m, n) in [(1, 1), (3, 2), (5, 5)] {
            let rl = ResolutionLevel::new(m, n).unwrap();
            let f = distributed_load(&g, rl, 2.5, &GaussRule::default()).unwrap();
            let total: f64 = (0..rl.node_count()).map(|i| f[3 * i]).sum();
            assert_relative_eq!(total, 2.5 * g.area(), max_relative = 1e-12);
        }
    }

    #[test]
    fn square_load_is_symmetric() {
        let g = QuadGeometry::new([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let rl = ResolutionLevel::new(1, 1).unwrap();
        let f = distributed_load(&g, rl, 1.0, &GaussRule::default()).unwrap();
        // corners 1 (0,0) and 3 (1,1): w equal, rotations opposite
        let (c1, c3) = (0, 9);
        assert_relative_eq!(f[c1], f[c3], epsilon = 1e-15);
        assert_relative_eq!(f[c1 + 1], -f[c3 + 1], epsilon = 1e-15);
        assert_relative_eq!(f[c1 + 2], -f[c3 + 2], epsilon = 1e-15);
        assert_relative_eq!(f[c1], 0.25, epsilon = 1e-15);
        // reflection x <-> y swaps theta_x with -theta_y
        assert_relative_eq!(f[c1 + 1], -f[c1 + 2], epsilon = 1e-15);
    }

    #[test]
    fn lump_load_examples() {
        let g = general();
        let rl = ResolutionLevel::new(4, 4).unwrap();
        let node = NodeIndex::new(2, 3);
        let f = lump_load(&g, rl, 7.0, rl.node_point(node)).unwrap();
        let at = 3 * rl.node_position(node);
        for (k, v) in f.iter().enumerate() {
            assert_eq!(*v, if k == at { 7.0 } else { 0.0 });
        }
        // center of cell (1, 2)
        let f = lump_load(&g, rl, 4.0, NaturalPoint::new(1.5 / 4.0, 2.5 / 4.0)).unwrap();
        let corners = [(1, 2), (2, 2), (2, 3), (1, 3)].map(|(r, s)| rl.node_position(NodeIndex::new(r, s)));
        for pos in 0..rl.node_count() {
            let w = f[3 * pos];
            if corners.contains(&pos) {
                assert_relative_eq!(w, 1.0, epsilon = 1e-14);
            } else {
                assert_eq!([w, f[3 * pos + 1], f[3 * pos + 2]], [0.0; 3]);
            }
        }
        assert!(lump_load(&g, rl, 1.0, NaturalPoint::new(1.1, 0.5)).is_err());
    }
}
