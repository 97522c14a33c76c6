//! Bilinear isoparametric mapping of the natural square `[0,1]²` onto a
//! straight-sided quadrilateral.
//!
//! Corners are numbered counterclockwise:
//!
//! ```text
//!  4 ----------- 3        eta
//!  |             |         ^
//!  |             |         |
//!  1 ----------- 2         +--> xi
//! ```
//!
//! Besides the mapping itself this module provides the first-order Jacobian
//! `J1 = [[x_xi, y_xi], [x_eta, y_eta]]` and the second-order transform used to
//! turn natural second derivatives into Cartesian curvatures. For a bilinear
//! map the only nonvanishing second derivative of the mapping is the mixed one,
//! `(x_xieta, y_xieta) = (alpha, beta)`, which produces the first-derivative
//! correction terms `alpha'` and `beta'`.

use nalgebra::{Matrix2, Matrix3, Point2, Vector3};

use crate::error::{Error, Result};

/// Relative guard on `det(J1)`, scaled by the squared bounding-box diagonal.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalPoint {
    pub xi: f64,
    pub eta: f64,
}

impl NaturalPoint {
    pub const fn new(xi: f64, eta: f64) -> Self {
        Self { xi, eta }
    }
}

/// A planar straight-sided quadrilateral given by four counterclockwise corners.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadGeometry {
    corners: [Point2<f64>; 4],
    alpha: f64,
    beta: f64,
    scale: f64,
    det_floor: f64,
}

impl QuadGeometry {
    /// Builds the geometry and checks that the mapping is orientation
    /// preserving everywhere on the natural square.
    ///
    /// `det(J1)` of a bilinear map is affine in `xi` and `eta`, so checking the
    /// four natural corners covers the whole domain (and with it every
    /// quadrature point).
    pub fn new(corners: [[f64; 2]; 4]) -> Result<Self> {
        let corners = corners.map(|[x, y]| Point2::new(x, y));
        if corners.iter().any(|c| !c.x.is_finite() || !c.y.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite corner coordinate".into()));
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                if corners[i] == corners[j] {
                    return Err(Error::InvalidGeometry(format!(
                        "corners {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let (lo, hi) = corners
            .iter()
            .fold(([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]), |(lo, hi), c| {
                ([lo[0].min(c.x), lo[1].min(c.y)], [hi[0].max(c.x), hi[1].max(c.y)])
            });
        let scale = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();
        let geom = Self {
            alpha: corners[0].x - corners[1].x + corners[2].x - corners[3].x,
            beta: corners[0].y - corners[1].y + corners[2].y - corners[3].y,
            corners,
            scale,
            det_floor: DEGENERACY_TOLERANCE * scale * scale,
        };
        for (xi, eta) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)] {
            geom.jacobian_first(NaturalPoint::new(xi, eta))?;
        }
        Ok(geom)
    }

    /// Bounding-box diagonal.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn corners(&self) -> &[Point2<f64>; 4] {
        &self.corners
    }

    /// Corner `i` with 1-based numbering.
    pub fn corner(&self, i: usize) -> Point2<f64> {
        self.corners[i - 1]
    }

    /// `x_ij = x_i - x_j` (1-based corner indices).
    pub fn dx(&self, i: usize, j: usize) -> f64 {
        self.corners[i - 1].x - self.corners[j - 1].x
    }

    /// `y_ij = y_i - y_j` (1-based corner indices).
    pub fn dy(&self, i: usize, j: usize) -> f64 {
        self.corners[i - 1].y - self.corners[j - 1].y
    }

    /// `x1 - x2 + x3 - x4`, the mixed derivative `x_xieta` of the map.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `y1 - y2 + y3 - y4`, the mixed derivative `y_xieta` of the map.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_parallelogram(&self) -> bool {
        self.alpha.abs() <= 1e-12 * self.scale && self.beta.abs() <= 1e-12 * self.scale
    }

    /// Area by the shoelace formula.
    pub fn area(&self) -> f64 {
        let c = &self.corners;
        0.5 * ((c[2].x - c[0].x) * (c[3].y - c[1].y) - (c[3].x - c[1].x) * (c[2].y - c[0].y))
    }

    pub fn map_to_physical(&self, p: NaturalPoint) -> Point2<f64> {
        let n = bilinear_shapes(p);
        let mut x = 0.0;
        let mut y = 0.0;
        for (ni, c) in n.iter().zip(&self.corners) {
            x += ni * c.x;
            y += ni * c.y;
        }
        Point2::new(x, y)
    }

    /// First-order Jacobian `[[x_xi, y_xi], [x_eta, y_eta]]` and its determinant.
    pub fn jacobian_first(&self, p: NaturalPoint) -> Result<Jacobian1> {
        let c = &self.corners;
        let (xi, eta) = (p.xi, p.eta);
        let x_xi = (1.0 - eta) * (c[1].x - c[0].x) + eta * (c[2].x - c[3].x);
        let y_xi = (1.0 - eta) * (c[1].y - c[0].y) + eta * (c[2].y - c[3].y);
        let x_eta = (1.0 - xi) * (c[3].x - c[0].x) + xi * (c[2].x - c[1].x);
        let y_eta = (1.0 - xi) * (c[3].y - c[0].y) + xi * (c[2].y - c[1].y);
        let det = x_xi * y_eta - y_xi * x_eta;
        if det <= self.det_floor {
            return Err(Error::DegenerateJacobian { det, xi, eta });
        }
        Ok(Jacobian1 {
            matrix: Matrix2::new(x_xi, y_xi, x_eta, y_eta),
            det,
        })
    }

    /// Second-order Jacobian and the first-derivative correction scalars.
    pub fn jacobian_second(&self, p: NaturalPoint) -> Result<Jacobian2> {
        let j1 = self.jacobian_first(p)?;
        Ok(self.second_from_first(&j1))
    }

    fn second_from_first(&self, j1: &Jacobian1) -> Jacobian2 {
        let (a, b) = (j1.matrix[(0, 0)], j1.matrix[(0, 1)]);
        let (c, d) = (j1.matrix[(1, 0)], j1.matrix[(1, 1)]);
        #[rustfmt::skip]
        let matrix = Matrix3::new(
            a * a, b * b, 2.0 * a * b,
            c * c, d * d, 2.0 * c * d,
            a * c, b * d, a * d + b * c,
        );
        Jacobian2 {
            matrix,
            alpha_prime: (self.alpha * d - self.beta * c) / j1.det,
            beta_prime: (self.alpha * b - self.beta * a) / j1.det,
        }
    }

    /// Everything needed to transform natural derivatives at `p`.
    pub fn point_mapping(&self, p: NaturalPoint) -> Result<PointMapping> {
        let j1 = self.jacobian_first(p)?;
        let j2 = self.second_from_first(&j1);
        // det(J2) = det(J1)^3, nonzero once J1 passed the guard
        let j2_inv = j2.matrix.try_inverse().ok_or(Error::DegenerateJacobian {
            det: j1.det,
            xi: p.xi,
            eta: p.eta,
        })?;
        Ok(PointMapping { j1, j2, j2_inv })
    }

    /// Translated and rotated copy, used to express an element in a local frame.
    pub(crate) fn transformed(&self, f: impl Fn(Point2<f64>) -> [f64; 2]) -> Result<Self> {
        Self::new(self.corners.map(f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian1 {
    pub matrix: Matrix2<f64>,
    pub det: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian2 {
    pub matrix: Matrix3<f64>,
    pub alpha_prime: f64,
    pub beta_prime: f64,
}

/// Precomputed first- and second-order transforms at one natural point.
#[derive(Debug, Clone, Copy)]
pub struct PointMapping {
    pub j1: Jacobian1,
    pub j2: Jacobian2,
    j2_inv: Matrix3<f64>,
}

impl PointMapping {
    /// `(w_x, w_y)` from `(w_xi, w_eta)`.
    pub fn gradient(&self, d_xi: f64, d_eta: f64) -> [f64; 2] {
        let m = &self.j1.matrix;
        let det = self.j1.det;
        [
            (m[(1, 1)] * d_xi - m[(0, 1)] * d_eta) / det,
            (-m[(1, 0)] * d_xi + m[(0, 0)] * d_eta) / det,
        ]
    }

    /// `(w_xx, w_yy, w_xy)` from natural first and second derivatives.
    pub fn hessian(&self, d_xi: f64, d_eta: f64, d_xixi: f64, d_etaeta: f64, d_xieta: f64) -> [f64; 3] {
        let rhs = Vector3::new(
            d_xixi,
            d_etaeta,
            d_xieta - self.j2.alpha_prime * d_xi + self.j2.beta_prime * d_eta,
        );
        let h = self.j2_inv * rhs;
        [h[0], h[1], h[2]]
    }
}

/// Bilinear corner shapes `N1..N4` on `[0,1]²`.
pub fn bilinear_shapes(p: NaturalPoint) -> [f64; 4] {
    let (xi, eta) = (p.xi, p.eta);
    [(1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), xi * eta, (1.0 - xi) * eta]
}
