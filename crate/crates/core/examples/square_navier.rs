//! Simply supported square under uniform load against the Navier series.

use mrplate::analytic::navier_series_deflection;
use mrplate::cases::{run_case, Case, Discretization, SquareSs};
use mrplate::quadrature::DEFAULT_ORDER;
use mrplate::ResolutionLevel;

fn main() -> mrplate::Result<()> {
    let exact = navier_series_deflection(1.0, 1.0, 1.0, 200);
    println!("Navier  {exact:.8}");
    let case = Case::SquareSs(SquareSs::default());
    for nodes in [5, 9, 13, 17] {
        let rl = ResolutionLevel::from_node_counts(nodes, nodes)?;
        let (r, _) = run_case(&case, Discretization::Multiresolution(rl), DEFAULT_ORDER)?;
        let err = (r.coefficient - exact) / exact;
        println!(
            "{:>10}  dofs {:>4}  {:.8}  rel. error {:+.3e}",
            r.discretization, r.dofs, r.coefficient, err
        );
    }
    Ok(())
}
