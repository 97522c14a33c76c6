mod common;

use common::*;
use mrplate::assembly::{
    apply_constraints, external_work, reactions, solve, splice, strain_energy, Constraint, Dof, Frame, NodeSelector,
    PlateElement, PlateModel, PointLoad, Side,
};
use mrplate::cases::{run_case, Case, Discretization, RingSlab, SkewPlate, SquareSs};
use mrplate::quadrature::DEFAULT_ORDER;
use mrplate::{solve_model, Error, Material, NaturalPoint, QuadGeometry, ResolutionLevel};
use proptest::prelude::*;

fn mat() -> Material {
    Material::new(3.0, 0.2, 0.3).unwrap()
}

fn strip(angle: Option<f64>, rl: ResolutionLevel) -> PlateModel {
    let mut m = PlateModel::default();
    let quads = [
        [[0.0, 0.0], [1.2, 0.1], [1.1, 1.0], [0.0, 0.9]],
        [[1.2, 0.1], [2.0, 0.0], [2.2, 1.1], [1.1, 1.0]],
    ];
    for c in quads {
        let mut e = PlateElement::multiresolution(QuadGeometry::new(c).unwrap(), rl, mat());
        if let Some(a) = angle {
            e = e.with_frame(Frame::in_plane(a));
        }
        m.add_element(e, 1.5);
    }
    m.constraints.push(Constraint::fixed(
        NodeSelector::Edge {
            element: 0,
            side: Side::Xi0,
        },
        &Dof::ALL,
    ));
    m.point_loads.push(PointLoad {
        element: 1,
        at: NaturalPoint::new(0.7, 0.4),
        force: -2.0,
    });
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Local axes rotated in plane change nothing in the global response.
    #[test]
    fn local_frames_do_not_change_the_response(angle in -3.1f64..3.1, k in 1usize..4) {
        let rl = ResolutionLevel::new(k, k).unwrap();
        let (_, a) = solve_model(&strip(None, rl)).unwrap();
        let (_, b) = solve_model(&strip(Some(angle), rl)).unwrap();
        let d = &a.displacements - &b.displacements;
        prop_assert!(d.amax() <= 1e-9 * a.displacements.amax());
    }

    /// Single element at level (k, k) and a k x k classical mesh of a
    /// parallelogram give the same nodal solution.
    #[test]
    fn single_element_matches_classical_mesh(g in parallelogram(), k in 1usize..5) {
        let rl = ResolutionLevel::new(k, k).unwrap();
        let mut multi = PlateModel::default();
        multi.add_element(PlateElement::multiresolution(g.clone(), rl, mat()), 1.0);
        multi.constraints.push(Constraint::fixed(NodeSelector::Edge { element: 0, side: Side::Eta0 }, &Dof::ALL));

        let mut mono = PlateModel::default();
        let at = |u: f64, v: f64| {
            let p = g.map_to_physical(NaturalPoint::new(u, v));
            [p.x, p.y]
        };
        let h = 1.0 / k as f64;
        for i in 0..k {
            for j in 0..k {
                let (u, v) = (i as f64 * h, j as f64 * h);
                let cell = QuadGeometry::new([at(u, v), at(u + h, v), at(u + h, v + h), at(u, v + h)]).unwrap();
                let e = mono.add_element(PlateElement::classical(cell, mat()), 1.0);
                if j == 0 {
                    mono.constraints.push(Constraint::fixed(NodeSelector::Edge { element: e, side: Side::Eta0 }, &Dof::ALL));
                }
            }
        }
        let (ca, sa) = solve_model(&multi).unwrap();
        let (cb, sb) = solve_model(&mono).unwrap();
        prop_assert_eq!(ca.system.node_count(), cb.system.node_count());
        let scale = sa.displacements.amax();
        for (id, p) in ca.system.nodes.iter().enumerate() {
            let other = cb.system.select(&NodeSelector::At([p.x, p.y])).unwrap()[0];
            for (x, y) in sa.node(id).iter().zip(sb.node(other)) {
                prop_assert!((x - y).abs() <= 1e-9 * scale);
            }
        }
    }

    /// Coefficients are unchanged when E, h, q and the length scale change together.
    #[test]
    fn coefficients_are_dimensionless(e in 0.5f64..300.0, h in 0.01f64..0.5, q in 0.1f64..50.0, l in 0.2f64..20.0) {
        let material = Material::new(e, h, 0.3).unwrap();
        let rl = |a, b| Discretization::Multiresolution(ResolutionLevel::from_node_counts(a, b).unwrap());
        let pairs = [
            (Case::Skew(SkewPlate::default()), Case::Skew(SkewPlate { side: l, q, material, ..SkewPlate::default() }), rl(5, 5)),
            (Case::SquareSs(SquareSs::default()), Case::SquareSs(SquareSs { side: l, q, material }), rl(5, 5)),
            (Case::Ring(RingSlab::default()), Case::Ring(RingSlab { outer_radius: l, q, material, ..RingSlab::default() }), rl(5, 3)),
        ];
        for (unit, scaled, disc) in pairs {
            let (a, _) = run_case(&unit, disc, DEFAULT_ORDER).unwrap();
            let (b, _) = run_case(&scaled, disc, DEFAULT_ORDER).unwrap();
            prop_assert!(rel_diff(a.coefficient, b.coefficient) <= 1e-9, "{} vs {}", a.coefficient, b.coefficient);
        }
    }
}

/// The two rotation shapes carry different scale factors at unequal levels,
/// so the response then depends on the orientation of the element axes.
#[test]
fn unequal_levels_depend_on_axis_orientation() {
    let rl = ResolutionLevel::new(2, 3).unwrap();
    let (_, a) = solve_model(&strip(None, rl)).unwrap();
    let (_, b) = solve_model(&strip(Some(0.8), rl)).unwrap();
    assert!((&a.displacements - &b.displacements).amax() > 1e-6 * a.displacements.amax());
}

#[test]
fn splicing_is_deterministic() {
    let rl = ResolutionLevel::new(3, 2).unwrap();
    let a = splice(&strip(None, rl)).unwrap();
    let b = splice(&strip(None, rl)).unwrap();
    assert_eq!(a.nodes, b.nodes);
    assert_eq!(a.stiffness, b.stiffness);
    assert_eq!(a.load, b.load);
}

#[test]
fn shared_edge_nodes_are_merged() {
    let rl = ResolutionLevel::new(3, 2).unwrap();
    let sys = splice(&strip(None, rl)).unwrap();
    // 4 x 3 nodes each, 3 shared on the common edge
    assert_eq!(sys.node_count(), 2 * 12 - 3);
}

#[test]
fn mismatched_levels_on_a_shared_edge_are_rejected() {
    let mut m = strip(None, ResolutionLevel::new(3, 2).unwrap());
    m.elements[1].kind = mrplate::assembly::ElementKind::Multiresolution(ResolutionLevel::new(3, 3).unwrap());
    assert!(matches!(splice(&m), Err(Error::ResolutionMismatch { .. })));
}

#[test]
fn energy_and_equilibrium() {
    let m = strip(None, ResolutionLevel::new(3, 3).unwrap());
    let (cs, sol) = solve_model(&m).unwrap();
    let u = strain_energy(&cs.system, &sol);
    assert!((u - external_work(&cs.system, &sol)).abs() <= 1e-10 * u.abs());
    // vertical reactions balance the applied load
    let applied: f64 = cs.system.load.iter().step_by(3).sum();
    let r: f64 = reactions(&cs.system, &sol).iter().step_by(3).sum();
    assert!((r + applied).abs() <= 1e-9 * applied.abs());
}

#[test]
fn clamped_nodes_stay_put() {
    let m = strip(None, ResolutionLevel::new(2, 4).unwrap());
    let (cs, sol) = solve_model(&m).unwrap();
    for id in cs
        .system
        .select(&NodeSelector::Edge {
            element: 0,
            side: Side::Xi0,
        })
        .unwrap()
    {
        assert_eq!(sol.node(id), [0.0; 3]);
    }
}

#[test]
fn conflicting_constraints_are_rejected() {
    let mut m = strip(None, ResolutionLevel::new(2, 2).unwrap());
    m.constraints
        .push(Constraint::prescribed(NodeSelector::At([0.0, 0.0]), Dof::W, 0.1));
    let sys = splice(&m).unwrap();
    assert!(matches!(
        apply_constraints(sys, &m.constraints),
        Err(Error::ConflictingConstraint { .. })
    ));
}

#[test]
fn unsupported_model_is_singular() {
    let mut m = strip(None, ResolutionLevel::new(2, 2).unwrap());
    m.constraints.clear();
    let cs = apply_constraints(splice(&m).unwrap(), &[]).unwrap();
    assert!(matches!(solve(&cs), Err(Error::SingularSystem { .. })));
}

#[test]
fn unknown_node_location_is_reported() {
    let sys = splice(&strip(None, ResolutionLevel::new(2, 2).unwrap())).unwrap();
    assert!(sys.select(&NodeSelector::At([5.0, 5.0])).is_err());
}
