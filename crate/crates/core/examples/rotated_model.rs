//! The same clamped plate built once in global axes and once with element
//! local axes rotated in plane: the global response is unchanged.

use mrplate::assembly::{deflection_at, Constraint, Dof, Frame, NodeSelector, PlateElement, PlateModel, Side};
use mrplate::{solve_model, Material, NaturalPoint, QuadGeometry, ResolutionLevel};

fn model(angle: Option<f64>) -> mrplate::Result<PlateModel> {
    let mat = Material::new(1.0, 0.1, 0.3)?;
    let rl = ResolutionLevel::new(4, 4)?;
    let mut m = PlateModel::default();
    for x0 in [0.0, 1.0] {
        let g = QuadGeometry::new([[x0, 0.0], [x0 + 1.0, 0.0], [x0 + 1.0, 1.0], [x0, 1.0]])?;
        let mut e = PlateElement::multiresolution(g, rl, mat);
        if let Some(a) = angle {
            e = e.with_frame(Frame::in_plane(a));
        }
        m.add_element(e, 1.0);
    }
    m.constraints.push(Constraint::fixed(
        NodeSelector::Edge {
            element: 0,
            side: Side::Xi0,
        },
        &Dof::ALL,
    ));
    Ok(m)
}

fn main() -> mrplate::Result<()> {
    let tip = NaturalPoint::new(1.0, 0.5);
    for angle in [None, Some(0.4), Some(-1.1)] {
        let (cs, sol) = solve_model(&model(angle)?)?;
        let w = deflection_at(&cs.system, &sol, 1, tip)?;
        let label = angle.map_or("global axes".to_string(), |a| format!("local axes at {a:+.1} rad"));
        println!("{label:>22}: tip deflection {w:.10e}");
    }
    Ok(())
}
