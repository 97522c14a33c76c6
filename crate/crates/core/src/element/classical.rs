//! Classical 4-node, 12-dof quadrilateral bending element.
//!
//! Written independently of the multiresolution path: the shapes are expanded
//! into bivariate monomial coefficients and differentiated coefficient-wise.
//! Dof order is corner 1..4, each `(w, theta_x, theta_y)`.

use nalgebra::{DMatrix, DVector, SMatrix};

use super::{bending_rigidity, Material};
use crate::error::Result;
use crate::geometry::{NaturalPoint, QuadGeometry};
use crate::quadrature::GaussRule;

const DEG: usize = 7;

/// Polynomial `sum c[a][b] xi^a eta^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Poly([[f64; DEG]; DEG]);

impl Poly {
    fn zero() -> Self {
        Self([[0.0; DEG]; DEG])
    }

    fn term(c: f64, a: usize, b: usize) -> Self {
        let mut p = Self::zero();
        p.0[a][b] = c;
        p
    }

    fn add(&self, o: &Self) -> Self {
        let mut p = *self;
        for a in 0..DEG {
            for b in 0..DEG {
                p.0[a][b] += o.0[a][b];
            }
        }
        p
    }

    fn scale(&self, k: f64) -> Self {
        let mut p = *self;
        p.0.iter_mut().flatten().for_each(|c| *c *= k);
        p
    }

    fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for a in 0..DEG {
            for b in 0..DEG {
                let c = self.0[a][b];
                if c == 0.0 {
                    continue;
                }
                for e in 0..DEG {
                    for f in 0..DEG {
                        let d = o.0[e][f];
                        if d != 0.0 {
                            assert!(a + e < DEG && b + f < DEG, "polynomial degree overflow");
                            p.0[a + e][b + f] += c * d;
                        }
                    }
                }
            }
        }
        p
    }

    fn d_xi(&self) -> Self {
        let mut p = Self::zero();
        for a in 1..DEG {
            for b in 0..DEG {
                p.0[a - 1][b] = a as f64 * self.0[a][b];
            }
        }
        p
    }

    fn d_eta(&self) -> Self {
        let mut p = Self::zero();
        for a in 0..DEG {
            for b in 1..DEG {
                p.0[a][b - 1] = b as f64 * self.0[a][b];
            }
        }
        p
    }

    fn eval(&self, xi: f64, eta: f64) -> f64 {
        // Horner in both variables
        self.0.iter().rev().fold(0.0, |acc, row| {
            acc * xi + row.iter().rev().fold(0.0, |r, c| r * eta + c)
        })
    }
}

/// The twelve shapes with their second derivatives, precomputed as polynomials.
#[derive(Debug, Clone)]
pub struct ClassicalShapes {
    shapes: [[Poly; 6]; 12],
}

impl ClassicalShapes {
    pub fn new(geom: &QuadGeometry) -> Self {
        let one = Poly::term(1.0, 0, 0);
        let x2 = Poly::term(1.0, 1, 0);
        let y2 = Poly::term(1.0, 0, 1);
        let x1 = one.add(&x2.scale(-1.0));
        let y1 = one.add(&y2.scale(-1.0));
        let xx = x1.mul(&x2);
        let yy = y1.mul(&y2);
        let two = xx.scale(2.0).add(&yy.scale(2.0));
        let (dx, dy) = (|i, j| geom.dx(i, j), |i, j| geom.dy(i, j));

        // (base, opposite-diagonal product, rotation coefficients)
        let corner = |base: Poly, opposite: Poly, tx: (f64, f64), ty: (f64, f64)| {
            let w = base.mul(&base.add(&opposite.scale(-1.0)).add(&two));
            let rx = base.mul(&xx.scale(tx.0).add(&yy.scale(tx.1)));
            let ry = base.mul(&xx.scale(ty.0).add(&yy.scale(ty.1)));
            [w, rx, ry]
        };
        let polys = [
            corner(x1.mul(&y1), x2.mul(&y2), (dy(2, 1), dy(4, 1)), (-dx(2, 1), -dx(4, 1))),
            corner(x2.mul(&y1), x1.mul(&y2), (-dy(2, 1), dy(3, 2)), (dx(2, 1), -dx(3, 2))),
            corner(x2.mul(&y2), x1.mul(&y1), (-dy(3, 4), -dy(3, 2)), (dx(3, 4), dx(3, 2))),
            corner(x1.mul(&y2), x2.mul(&y1), (dy(3, 4), -dy(4, 1)), (-dx(3, 4), dx(4, 1))),
        ];
        let mut shapes = [[Poly::zero(); 6]; 12];
        for (c, triple) in polys.iter().enumerate() {
            for (k, p) in triple.iter().enumerate() {
                let (pxi, peta) = (p.d_xi(), p.d_eta());
                shapes[3 * c + k] = [*p, pxi, peta, pxi.d_xi(), peta.d_eta(), pxi.d_eta()];
            }
        }
        Self { shapes }
    }

    /// `[value, d_xi, d_eta, d_xixi, d_etaeta, d_xieta]` of shape `k` at `p`.
    pub fn eval(&self, k: usize, p: NaturalPoint) -> [f64; 6] {
        self.shapes[k].map(|poly| poly.eval(p.xi, p.eta))
    }

    pub fn values(&self, p: NaturalPoint) -> [f64; 12] {
        std::array::from_fn(|k| self.shapes[k][0].eval(p.xi, p.eta))
    }
}

/// Classical element stiffness (12x12) by Gauss quadrature on `[0,1]²`.
pub fn classical_element_stiffness(geom: &QuadGeometry, mat: &Material, rule: &GaussRule) -> Result<DMatrix<f64>> {
    let shapes = ClassicalShapes::new(geom);
    let (d, _) = bending_rigidity(mat);
    let mut k = SMatrix::<f64, 12, 12>::zeros();
    for (xi, eta, w) in rule.tensor() {
        let p = NaturalPoint::new(xi, eta);
        let map = geom.point_mapping(p)?;
        let mut b = SMatrix::<f64, 3, 12>::zeros();
        for j in 0..12 {
            let [_, a1, a2, a11, a22, a12] = shapes.eval(j, p);
            let [wxx, wyy, wxy] = map.hessian(a1, a2, a11, a22, a12);
            b[(0, j)] = -wxx;
            b[(1, j)] = -wyy;
            b[(2, j)] = -2.0 * wxy;
        }
        k += b.transpose() * d * b * (w * map.j1.det);
    }
    let k = 0.5 * (k + k.transpose());
    Ok(DMatrix::from_iterator(12, 12, k.iter().copied()))
}

/// Classical consistent load vector of a uniform pressure `q`.
pub fn classical_distributed_load(geom: &QuadGeometry, q: f64, rule: &GaussRule) -> Result<DVector<f64>> {
    let shapes = ClassicalShapes::new(geom);
    let mut f = DVector::zeros(12);
    for (xi, eta, w) in rule.tensor() {
        let p = NaturalPoint::new(xi, eta);
        let det = geom.jacobian_first(p)?.det;
        for (k, v) in shapes.values(p).iter().enumerate() {
            f[k] += v * q * w * det;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape_basis::classical_shapes;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_route_matches_jet_route() {
        let g = QuadGeometry::new([[0.1, -0.2], [1.3, 0.1], [1.1, 0.9], [-0.2, 1.4]]).unwrap();
        let poly = ClassicalShapes::new(&g);
        for p in [NaturalPoint::new(0.3, 0.7), NaturalPoint::new(0.91, 0.05)] {
            let jets = classical_shapes(&g, p);
            for (k, j) in jets.iter().enumerate() {
                let e = poly.eval(k, p);
                for (a, b) in e
                    .iter()
                    .zip([j.value, j.d_xi, j.d_eta, j.d_xixi, j.d_etaeta, j.d_xieta])
                {
                    assert_relative_eq!(*a, b, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn translation_invariance() {
        let corners = [[0.1, -0.2], [1.3, 0.1], [1.1, 0.9], [-0.2, 1.4]];
        let shifted = corners.map(|[x, y]| [x + 12.5, y - 3.25]);
        let mat = Material::new(210.0, 0.1, 0.3).unwrap();
        let rule = GaussRule::default();
        let a = classical_element_stiffness(&QuadGeometry::new(corners).unwrap(), &mat, &rule).unwrap();
        let b = classical_element_stiffness(&QuadGeometry::new(shifted).unwrap(), &mat, &rule).unwrap();
        assert!((a - b).amax() < 1e-10);
    }
}
