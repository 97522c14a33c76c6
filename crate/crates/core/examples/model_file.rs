//! Loads a JSON model (two spliced elements clamped on one edge), solves it
//! and prints the nodal field as CSV.
//!
//! Usage: `cargo run --example model_file [path]`

use std::path::PathBuf;

use mrplate::assembly::{external_work, strain_energy};
use mrplate::io::{write_field_csv, ModelFile};
use mrplate::solve_model;

fn main() -> mrplate::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/cantilever.json")));
    let model = ModelFile::read(&path)?.to_model()?;
    let (cs, sol) = solve_model(&model)?;
    eprintln!(
        "{} nodes, {} free dofs, strain energy {:.6e}, external work {:.6e}",
        cs.system.node_count(),
        cs.free_dof_count(),
        strain_energy(&cs.system, &sol),
        external_work(&cs.system, &sol)
    );
    write_field_csv(&cs.system, &sol, None, &mut std::io::stdout().lock())
}
