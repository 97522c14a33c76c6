//! Element stiffness at several levels: size, symmetry, the banded node-block
//! structure and the three rigid-body modes.

use mrplate::assembly::Dof;
use mrplate::element::{element_stiffness, node_coupling_stiffness};
use mrplate::{GaussRule, Material, NodeIndex, QuadGeometry, ResolutionLevel};
use nalgebra::DVector;

fn main() -> mrplate::Result<()> {
    let geom = QuadGeometry::new([[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]])?;
    let mat = Material::new(210e9, 0.01, 0.3)?;
    let rule = GaussRule::default();

    for (m, n) in [(1, 1), (2, 2), (4, 4)] {
        let rl = ResolutionLevel::new(m, n)?;
        let k = element_stiffness(&geom, rl, &mat, &rule)?;
        let k = k.matrix();
        let asym = (k - k.transpose()).amax() / k.amax();
        let zero_blocks = rl
            .nodes()
            .flat_map(|a| rl.nodes().map(move |b| (a, b)))
            .filter(|(a, b)| {
                let (ia, ib) = (3 * rl.node_position(*a), 3 * rl.node_position(*b));
                k.view((ia, ib), (3, 3)).iter().all(|v| *v == 0.0)
            })
            .count();
        println!(
            "RL {rl}: {}x{} matrix, asymmetry {asym:.1e}, {zero_blocks} of {} node blocks exactly zero",
            k.nrows(),
            k.ncols(),
            rl.node_count().pow(2)
        );
    }

    // rigid modes: w = 1, w = y (theta_x = 1), w = x (theta_y = -1)
    let rl = ResolutionLevel::new(4, 4)?;
    let k = element_stiffness(&geom, rl, &mat, &rule)?.into_matrix();
    type Mode = (&'static str, fn(f64, f64) -> [f64; 3]);
    let modes: [Mode; 3] = [
        ("translation", |_, _| [1.0, 0.0, 0.0]),
        ("rotation about x", |_, y| [y, 1.0, 0.0]),
        ("rotation about y", |x, _| [x, 0.0, -1.0]),
    ];
    for (name, mode) in modes {
        let mut a = DVector::zeros(rl.dof_count());
        for node in rl.nodes() {
            let p = geom.map_to_physical(rl.node_point(node));
            let at = 3 * rl.node_position(node);
            for dof in Dof::ALL {
                a[at + dof.offset()] = mode(p.x, p.y)[dof.offset()];
            }
        }
        println!("{name:>17}: |K a| / |K| = {:.1e}", (&k * a).amax() / k.amax());
    }

    let kb = node_coupling_stiffness(
        &geom,
        rl,
        &mat,
        NodeIndex { r: 2, s: 2 },
        NodeIndex { r: 3, s: 2 },
        &rule,
    )?;
    println!("coupling block k(2,2)-(3,2):\n{kb:.4e}");
    Ok(())
}
