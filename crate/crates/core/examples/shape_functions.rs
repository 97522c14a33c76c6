//! Samples the node shape functions: the basic triple over its support and the
//! scaled/shifted triple of one node at a finer level. Writes CSV to stdout.

use mrplate::shape_basis::{write_basic_samples, write_mra_samples};
use mrplate::{NodeIndex, QuadGeometry, ResolutionLevel};

fn main() -> mrplate::Result<()> {
    let geom = QuadGeometry::new([[0.0, 0.0], [2.0, 0.2], [2.3, 1.6], [0.1, 1.2]])?;
    let mut out = std::io::stdout().lock();

    println!("# basic triple on [-1,1]^2");
    write_basic_samples(&geom, 9, &mut out)?;

    let rl = ResolutionLevel::new(4, 4)?;
    println!("# node (2,1) at level {rl}");
    write_mra_samples(&geom, rl, NodeIndex { r: 2, s: 1 }, 9, &mut out)?;
    Ok(())
}
