//! Closed-form equivalent nodal loads of a single cell (4-node subdomain).
//!
//! These printed forms serve only as a cross-check of the quadrature in
//! [`super::distributed_load`], which is the reference. The uniform-load forms
//! carry a number of transcription errors; the entries listed in
//! [`KNOWN_MISPRINTS`] are evaluated exactly as printed and are not expected to
//! agree with quadrature. Vector order is corner 1..4, each `(w, theta_x, theta_y)`.

use crate::geometry::QuadGeometry;

/// Entry labels in vector order.
pub const ENTRY_NAMES: [&str; 12] = [
    "Z1", "Tx1", "Ty1", "Z2", "Tx2", "Ty2", "Z3", "Tx3", "Ty3", "Z4", "Tx4", "Ty4",
];

/// Uniform-load entries whose printed expression disagrees with the integral,
/// with the expression that does agree (in terms of `A`, `B`, `C' = C/2`).
pub const KNOWN_MISPRINTS: [(usize, &str); 7] = [
    (1, "Tx1 = y21(3A - 5B + 30C') + y41(5A - 3B + 30C')"),
    (2, "Ty1 = -x21(3A - 5B + 30C') - x41(5A - 3B + 30C')"),
    (5, "Ty2 = -x21(3A + 5B - 30C') + x32(5A + 3B - 30C')"),
    (7, "Tx3 = y34(3A - 5B - 30C') + y32(5A - 3B - 30C')"),
    (9, "Z4 = 36A + 36B + 180C' (printed identical to Z3)"),
    (10, "Tx4 = y34(3A + 5B + 30C') - y41(5A + 3B + 30C')"),
    (
        11,
        "Ty4 = -x34(3A + 5B + 30C') + x41(5A + 3B + 30C') (printed as a y-expression)",
    ),
];

/// Entries that agree with quadrature once `C` enters at half its printed value.
pub fn consistent_entries() -> impl Iterator<Item = usize> {
    (0..12).filter(|k| KNOWN_MISPRINTS.iter().all(|(m, _)| m != k))
}

/// The constants `A`, `B`, `C` exactly as defined with the printed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn appendix_constants(cell: &QuadGeometry) -> AppendixConstants {
    let (x, y) = (|i, j| cell.dx(i, j), |i, j| cell.dy(i, j));
    AppendixConstants {
        a: (x(3, 4) * y(2, 1) - x(2, 1) * y(3, 4)) / 4.0,
        b: (x(3, 2) * y(4, 1) - x(4, 1) * y(3, 2)) / 4.0,
        c: (x(3, 1) * y(4, 2) - x(4, 2) * y(3, 1)) / 4.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellLoad {
    /// Uniform pressure `q0` over the cell.
    Uniform(f64),
    /// Transverse force `P` at the cell center.
    CenterPoint(f64),
}

/// Evaluates the printed closed forms.
///
/// The printed center-point vector lists corner 4 before corner 3; the entries
/// are placed here by the corner their subscripts refer to.
///
/// For the uniform load `C` is used at half its printed value: with the
/// printed `C` (half the cell area) none of the entries balance the applied
/// force, with `C / 2` the `Z` entries sum to `q0` times the area.
pub fn appendix_cell_loads(cell: &QuadGeometry, load: CellLoad) -> [f64; 12] {
    let (x, y) = (|i, j| cell.dx(i, j), |i, j| cell.dy(i, j));
    match load {
        CellLoad::CenterPoint(p) => [
            0.25,
            (y(2, 1) + y(4, 1)) / 16.0,
            (-x(2, 1) - x(4, 1)) / 16.0,
            0.25,
            (-y(2, 1) + y(3, 2)) / 16.0,
            (x(2, 1) - x(3, 2)) / 16.0,
            0.25,
            (-y(3, 4) - y(3, 2)) / 16.0,
            (x(3, 4) + x(3, 2)) / 16.0,
            0.25,
            (y(3, 4) - y(4, 1)) / 16.0,
            (-x(3, 4) + x(4, 1)) / 16.0,
        ]
        .map(|v| v * p),
        CellLoad::Uniform(q0) => {
            let AppendixConstants { a, b, c } = appendix_constants(cell);
            let c = 0.5 * c;
            [
                36.0 * a - 36.0 * b + 180.0 * c,
                y(2, 1) * (3.0 * a - 5.0 * b - 30.0 * c) + y(4, 1) * (5.0 * a - 3.0 * b - 30.0 * c),
                -x(2, 1) * (3.0 * a - 5.0 * b - 30.0 * c) - x(4, 1) * (5.0 * a - 3.0 * b - 30.0 * c),
                -36.0 * a - 36.0 * b + 180.0 * c,
                y(2, 1) * (3.0 * a + 5.0 * b - 30.0 * c) - y(3, 2) * (5.0 * a + 3.0 * b - 30.0 * c),
                -x(2, 1) * (3.0 * a + 5.0 * b - 30.0 * c) - x(3, 2) * (5.0 * a + 3.0 * b - 30.0 * c),
                -36.0 * a + 36.0 * b + 180.0 * c,
                -y(3, 4) * (3.0 * a - 5.0 * b - 30.0 * c) + y(3, 2) * (5.0 * a - 3.0 * b - 30.0 * c),
                -x(3, 4) * (3.0 * a - 5.0 * b - 30.0 * c) - x(3, 2) * (5.0 * a - 3.0 * b - 30.0 * c),
                -36.0 * a + 36.0 * b + 180.0 * c,
                -y(3, 4) * (3.0 * a + 5.0 * b + 30.0 * c) - y(4, 1) * (5.0 * a + 3.0 * b + 30.0 * c),
                y(3, 4) * (3.0 * a - 5.0 * b - 30.0 * c) + y(3, 2) * (5.0 * a - 3.0 * b - 30.0 * c),
            ]
            .map(|v| v * q0 / 180.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parallelogram_constants() {
        let g = QuadGeometry::new([[0.0, 0.0], [2.0, 0.0], [2.5, 1.0], [0.5, 1.0]]).unwrap();
        let k = appendix_constants(&g);
        assert_eq!((k.a, k.b), (0.0, 0.0));
        assert_relative_eq!(k.c, g.area() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn point_load_w_entries_are_quarters() {
        let g = QuadGeometry::new([[0.1, -0.2], [1.3, 0.1], [1.1, 0.9], [-0.2, 1.4]]).unwrap();
        let f = appendix_cell_loads(&g, CellLoad::CenterPoint(3.0));
        for k in [0, 3, 6, 9] {
            assert_eq!(f[k], 0.75);
        }
    }

    #[test]
    fn misprint_list_partitions_entries() {
        assert_eq!(consistent_entries().collect::<Vec<_>>(), vec![0, 3, 4, 6, 8]);
    }
}
