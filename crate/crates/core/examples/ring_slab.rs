//! Annular slab clamped on the outer edge, free on the inner edge, uniform
//! load. A quarter is modelled with symmetry conditions on the cut edges.

use mrplate::analytic::annular_inner_edge_coefficient;
use mrplate::cases::{run_case, Case, Discretization, RingSlab};
use mrplate::quadrature::DEFAULT_ORDER;
use mrplate::ResolutionLevel;

fn main() -> mrplate::Result<()> {
    let slab = RingSlab::default();
    let case = Case::Ring(slab.clone());
    let exact = annular_inner_edge_coefficient(slab.ratio, slab.material.poisson);
    println!("axisymmetric solution   {exact:.5}");
    let rl = ResolutionLevel::from_node_counts(5, 3)?;
    let (r, _) = run_case(&case, Discretization::Multiresolution(rl), DEFAULT_ORDER)?;
    println!(
        "4 elements, {}  dofs {:>4}  coefficient {:.5}",
        r.discretization, r.dofs, r.coefficient
    );
    for (nr, nc) in [(4, 8), (8, 16), (16, 32)] {
        let (r, _) = run_case(&case, Discretization::Classical(nr, nc), DEFAULT_ORDER)?;
        println!(
            "classical {:>11}  dofs {:>4}  coefficient {:.5}",
            r.discretization, r.dofs, r.coefficient
        );
    }
    Ok(())
}
