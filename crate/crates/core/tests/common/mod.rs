#![allow(dead_code)]

use mrplate::assembly::Dof;
use mrplate::{QuadGeometry, ResolutionLevel};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

fn place(corners: [[f64; 2]; 4], angle: f64, shift: [f64; 2]) -> [[f64; 2]; 4] {
    let (s, c) = angle.sin_cos();
    corners.map(|[x, y]| [c * x - s * y + shift[0], s * x + c * y + shift[1]])
}

/// Convex quadrilaterals of moderate distortion, anywhere in the plane.
pub fn convex_quad() -> impl Strategy<Value = QuadGeometry> {
    (
        0.5f64..4.0,
        0.5f64..2.0,
        prop::array::uniform8(-0.3f64..0.3),
        -3.2f64..3.2,
        prop::array::uniform2(-10.0f64..10.0),
    )
        .prop_filter_map("degenerate quadrilateral", |(size, aspect, d, angle, shift)| {
            let (a, b) = (size, size * aspect);
            let base = [[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]];
            let mut c = base;
            for (k, p) in c.iter_mut().enumerate() {
                p[0] += d[2 * k] * a;
                p[1] += d[2 * k + 1] * b;
            }
            QuadGeometry::new(place(c, angle, shift)).ok()
        })
}

pub fn parallelogram() -> impl Strategy<Value = QuadGeometry> {
    (
        0.5f64..3.0,
        0.5f64..3.0,
        -0.8f64..0.8,
        -3.2f64..3.2,
        prop::array::uniform2(-10.0f64..10.0),
    )
        .prop_map(|(a, b, shear, angle, shift)| {
            let t = [shear * b, b];
            QuadGeometry::new(place([[0.0, 0.0], [a, 0.0], [a + t[0], t[1]], t], angle, shift))
                .expect("parallelogram is valid")
        })
}

/// Axis-aligned rectangles.
pub fn rectangle() -> impl Strategy<Value = QuadGeometry> {
    (0.3f64..3.0, 0.3f64..3.0, prop::array::uniform2(-5.0f64..5.0)).prop_map(|(a, b, [x, y])| {
        QuadGeometry::new([[x, y], [x + a, y], [x + a, y + b], [x, y + b]]).expect("rectangle is valid")
    })
}

/// `count` deterministic draws from a strategy.
pub fn draw<S: Strategy>(strategy: S, count: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..count)
        .map(|_| {
            strategy
                .new_tree(&mut runner)
                .expect("strategy produces values")
                .current()
        })
        .collect()
}

/// Element dof vector of the displacement field `w(x, y)` with gradient `(w_x, w_y)`.
pub fn nodal_field(geom: &QuadGeometry, rl: ResolutionLevel, field: impl Fn(f64, f64) -> [f64; 3]) -> DVector<f64> {
    let mut a = DVector::zeros(rl.dof_count());
    for node in rl.nodes() {
        let p = geom.map_to_physical(rl.node_point(node));
        let [w, wx, wy] = field(p.x, p.y);
        let at = 3 * rl.node_position(node);
        a[at + Dof::W.offset()] = w;
        a[at + Dof::ThetaX.offset()] = wy;
        a[at + Dof::ThetaY.offset()] = -wx;
    }
    a
}

/// Rigid-body fields: translation and the two tilts.
pub fn rigid_modes(geom: &QuadGeometry, rl: ResolutionLevel) -> [DVector<f64>; 3] {
    [
        nodal_field(geom, rl, |_, _| [1.0, 0.0, 0.0]),
        nodal_field(geom, rl, |x, _| [x, 1.0, 0.0]),
        nodal_field(geom, rl, |_, y| [y, 0.0, 1.0]),
    ]
}

pub fn asymmetry(k: &DMatrix<f64>) -> f64 {
    (k - k.transpose()).amax() / k.amax()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// Classical corner index of each dof block of a level-(1,1) element.
pub const CORNER_OF_NODE: [usize; 4] = [0, 3, 1, 2];

/// Reorders a level-(1,1) matrix into classical corner order.
pub fn to_corner_order(k: &DMatrix<f64>) -> DMatrix<f64> {
    let map = |i: usize| 3 * CORNER_OF_NODE[i / 3] + i % 3;
    let mut out = DMatrix::zeros(12, 12);
    for i in 0..12 {
        for j in 0..12 {
            out[(map(i), map(j))] = k[(i, j)];
        }
    }
    out
}
