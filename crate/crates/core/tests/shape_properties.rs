mod common;

use approx::assert_relative_eq;
use common::*;
use mrplate::shape_basis::{basic_node_shapes, classical_shapes, mra_basis_row, mra_node_shapes, ShapeEval};
use mrplate::{NaturalPoint, NodeIndex, QuadGeometry, ResolutionLevel};
use proptest::prelude::*;

fn fd_check<const K: usize>(f: impl Fn(f64, f64) -> [ShapeEval; K], xi: f64, eta: f64) {
    let h = 1e-5;
    let at = f(xi, eta);
    let (xp, xm, ep, em) = (f(xi + h, eta), f(xi - h, eta), f(xi, eta + h), f(xi, eta - h));
    for k in 0..K {
        let s = at[k];
        let scale = [s.value, s.d_xi, s.d_eta, s.d_xixi, s.d_etaeta, s.d_xieta]
            .iter()
            .fold(1e-12_f64, |m, v| m.max(v.abs()));
        let c = |a: f64, b: f64| (a - b) / (2.0 * h);
        let checks = [
            (s.d_xi, c(xp[k].value, xm[k].value)),
            (s.d_eta, c(ep[k].value, em[k].value)),
            (s.d_xixi, c(xp[k].d_xi, xm[k].d_xi)),
            (s.d_etaeta, c(ep[k].d_eta, em[k].d_eta)),
            (s.d_xieta, c(ep[k].d_xi, em[k].d_xi)),
        ];
        for (closed, fd) in checks {
            assert!((closed - fd).abs() <= 1e-6 * scale, "shape {k}: {closed} vs {fd}");
        }
    }
}

/// Interpolation error of a tilted plane, relative to its range over the element.
fn plane_error(g: &QuadGeometry, rl: ResolutionLevel, xi: f64, eta: f64) -> f64 {
    let p = NaturalPoint::new(xi, eta);
    let row = mra_basis_row(g, rl, p);
    let x = g.map_to_physical(p);
    let (b, c) = (0.7, -0.4);
    let dofs = nodal_field(g, rl, |x, y| [0.2 + b * x + c * y, b, c]);
    let w: f64 = row.iter().zip(dofs.iter()).map(|(s, d)| s.value * d).sum();
    (w - (0.2 + b * x.x + c * x.y)).abs() / g.scale()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classical_derivatives_match_differences(g in convex_quad(), xi in 0.01f64..0.99, eta in 0.01f64..0.99) {
        fd_check(|a, b| classical_shapes(&g, NaturalPoint::new(a, b)), xi, eta);
    }

    #[test]
    fn basic_derivatives_match_differences(g in convex_quad(), u in 0.01f64..0.99, v in 0.01f64..0.99, q in 0usize..4) {
        let (su, sv) = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)][q];
        fd_check(|a, b| basic_node_shapes(&g, NaturalPoint::new(a, b)), su * u, sv * v);
    }

    #[test]
    fn scaled_derivatives_match_differences(
        g in convex_quad(),
        m in 1usize..5,
        n in 1usize..5,
        cell in (0usize..4, 0usize..4),
        local in (0.02f64..0.98, 0.02f64..0.98),
        corner in 0usize..4,
    ) {
        let rl = ResolutionLevel::new(m, n).unwrap();
        let (i, j) = (cell.0 % m, cell.1 % n);
        let xi = (i as f64 + local.0) / m as f64;
        let eta = (j as f64 + local.1) / n as f64;
        let node = NodeIndex::new(i + corner % 2, j + corner / 2);
        fd_check(|a, b| mra_node_shapes(&g, rl, node, NaturalPoint::new(a, b)).unwrap(), xi, eta);
    }

    /// Tilted planes are interpolated exactly on parallelograms at equal levels.
    #[test]
    fn planes_reproduced_on_parallelograms(g in parallelogram(), k in 1usize..5, xi in 0.0f64..1.0, eta in 0.0f64..1.0) {
        prop_assert!(plane_error(&g, ResolutionLevel::new(k, k).unwrap(), xi, eta) <= 1e-10);
    }

    #[test]
    fn planes_reproduced_on_rectangles(g in rectangle(), m in 1usize..5, n in 1usize..5, xi in 0.0f64..1.0, eta in 0.0f64..1.0) {
        prop_assert!(plane_error(&g, ResolutionLevel::new(m, n).unwrap(), xi, eta) <= 1e-10);
    }

    #[test]
    fn planes_reproduced_by_single_cell(g in convex_quad(), xi in 0.0f64..1.0, eta in 0.0f64..1.0) {
        prop_assert!(plane_error(&g, ResolutionLevel::new(1, 1).unwrap(), xi, eta) <= 1e-10);
    }

    #[test]
    fn translation_reproduced(g in convex_quad(), m in 1usize..5, n in 1usize..5, xi in 0.0f64..1.0, eta in 0.0f64..1.0) {
        let rl = ResolutionLevel::new(m, n).unwrap();
        let row = mra_basis_row(&g, rl, NaturalPoint::new(xi, eta));
        let dofs = nodal_field(&g, rl, |_, _| [1.0, 0.0, 0.0]);
        let w: f64 = row.iter().zip(dofs.iter()).map(|(s, d)| s.value * d).sum();
        prop_assert!((w - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn values_are_kronecker(g in convex_quad(), m in 1usize..5, n in 1usize..5) {
        let rl = ResolutionLevel::new(m, n).unwrap();
        for node in rl.nodes() {
            let row = mra_basis_row(&g, rl, rl.node_point(node));
            let own = 3 * rl.node_position(node);
            for (k, s) in row.iter().enumerate() {
                prop_assert_eq!(s.value, if k == own { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn slopes_are_kronecker_on_parallelograms_at_equal_levels(g in parallelogram(), k in 1usize..5) {
        let rl = ResolutionLevel::new(k, k).unwrap();
        for node in rl.nodes() {
            let p = rl.node_point(node);
            let map = g.point_mapping(p).unwrap();
            let own = 3 * rl.node_position(node);
            for (i, s) in mra_basis_row(&g, rl, p).iter().enumerate() {
                let [wx, wy] = map.gradient(s.d_xi, s.d_eta);
                let e = match i as isize - own as isize { 1 => [0.0, 1.0], 2 => [-1.0, 0.0], _ => [0.0, 0.0] };
                prop_assert!((wx - e[0]).abs() < 1e-9 && (wy - e[1]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn slopes_are_kronecker_on_rectangles(g in rectangle(), m in 1usize..5, n in 1usize..5) {
        let rl = ResolutionLevel::new(m, n).unwrap();
        for node in rl.nodes() {
            let p = rl.node_point(node);
            let map = g.point_mapping(p).unwrap();
            let row = mra_basis_row(&g, rl, p);
            let own = 3 * rl.node_position(node);
            let [_, wy] = map.gradient(row[own + 1].d_xi, row[own + 1].d_eta);
            let [wx, _] = map.gradient(row[own + 2].d_xi, row[own + 2].d_eta);
            prop_assert!((wy - 1.0).abs() < 1e-9 && (wx + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn level_one_is_classical(g in convex_quad(), xi in 0.0f64..1.0, eta in 0.0f64..1.0) {
        let p = NaturalPoint::new(xi, eta);
        let row = mra_basis_row(&g, ResolutionLevel::new(1, 1).unwrap(), p);
        let classical = classical_shapes(&g, p);
        for (pos, corner) in CORNER_OF_NODE.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (row[3 * pos + k], classical[3 * corner + k]);
                prop_assert!((a.value - b.value).abs() < 1e-12);
                prop_assert!((a.d_xixi - b.d_xixi).abs() < 1e-10 * (1.0 + b.d_xixi.abs()));
            }
        }
    }

    #[test]
    fn support_is_one_cell_around_the_node(g in convex_quad(), xi in 0.0f64..1.0, eta in 0.0f64..1.0) {
        let rl = ResolutionLevel::new(4, 3).unwrap();
        let node = NodeIndex::new(2, 1);
        let triple = mra_node_shapes(&g, rl, node, NaturalPoint::new(xi, eta)).unwrap();
        if (4.0 * xi - 2.0).abs() >= 1.0 || (3.0 * eta - 1.0).abs() >= 1.0 {
            prop_assert_eq!(triple, [ShapeEval::ZERO; 3]);
        }
    }
}

/// The rotation shapes reuse the parent edge vectors with one scale factor
/// each, which is exact only when every cell is the parent scaled by the same
/// factor in both directions.
#[test]
fn planes_not_reproduced_on_trapezoids_beyond_one_cell() {
    let g = QuadGeometry::new([[0.0, 0.0], [2.0, 0.0], [1.5, 1.0], [0.5, 1.0]]).unwrap();
    assert!(plane_error(&g, ResolutionLevel::new(2, 2).unwrap(), 0.3, 0.7) > 1e-3);
}

#[test]
fn unequal_levels_break_slope_kronecker_on_sheared_elements() {
    let g = QuadGeometry::new([[0.0, 0.0], [2.0, 0.0], [2.6, 1.0], [0.6, 1.0]]).unwrap();
    let rl = ResolutionLevel::new(2, 1).unwrap();
    let node = NodeIndex::new(1, 0);
    let p = rl.node_point(node);
    let t = mra_node_shapes(&g, rl, node, p).unwrap();
    let map = g.point_mapping(p).unwrap();
    let [wx, wy] = map.gradient(t[2].d_xi, t[2].d_eta);
    assert_relative_eq!(wx, -1.0, epsilon = 1e-12);
    assert!(wy.abs() > 0.1, "dw/dy of the theta_y shape is {wy}");
}
