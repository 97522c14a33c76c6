//! Convergence tables for the three benchmarks, written as CSV.

use mrplate::cases::{convergence_study, Case, Discretization, RingSlab, SkewPlate, SquareSs};
use mrplate::io::write_table_csv;
use mrplate::quadrature::DEFAULT_ORDER;
use mrplate::ResolutionLevel;

fn levels(counts: &[usize]) -> mrplate::Result<Vec<Discretization>> {
    counts
        .iter()
        .map(|&c| {
            Ok(Discretization::Multiresolution(ResolutionLevel::from_node_counts(
                c, c,
            )?))
        })
        .collect()
}

fn main() -> mrplate::Result<()> {
    let mut out = std::io::stdout().lock();
    let studies = [
        (Case::Skew(SkewPlate::default()), levels(&[5, 9, 13, 17])?),
        (Case::SquareSs(SquareSs::default()), levels(&[5, 9, 13, 17])?),
        (
            Case::Ring(RingSlab::default()),
            [(4, 8), (8, 16), (16, 32)]
                .map(|(a, b)| Discretization::Classical(a, b))
                .to_vec(),
        ),
    ];
    for (case, discs) in studies {
        let outcome = convergence_study(&case, &discs, DEFAULT_ORDER);
        write_table_csv(&outcome.table, &mut out)?;
        if let Some((at, e)) = outcome.failure {
            eprintln!("{} stopped at {at}: {e}", case.id());
        }
    }
    Ok(())
}
