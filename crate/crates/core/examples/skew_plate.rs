//! Skew (rhombic) plate with two opposite edges simply supported: center
//! deflection coefficient at increasing resolution, against a classical mesh.

use mrplate::cases::{run_case, Case, Discretization, SkewPlate};
use mrplate::quadrature::DEFAULT_ORDER;
use mrplate::ResolutionLevel;

fn main() -> mrplate::Result<()> {
    let case = Case::Skew(SkewPlate::default());
    for nodes in [5, 9, 13, 17] {
        let rl = ResolutionLevel::from_node_counts(nodes, nodes)?;
        let (r, _) = run_case(&case, Discretization::Multiresolution(rl), DEFAULT_ORDER)?;
        println!(
            "{:>12}  dofs {:>4}  coefficient {:.5}",
            r.discretization, r.dofs, r.coefficient
        );
    }
    let (r, _) = run_case(&case, Discretization::Classical(16, 16), DEFAULT_ORDER)?;
    println!(
        "{:>12}  dofs {:>4}  coefficient {:.5}",
        r.discretization, r.dofs, r.coefficient
    );
    Ok(())
}
