//! Plot-ready capacity curves written as CSV.
//!
//! Usage: `cargo run --release --example capacity_sweep [path]`; prints to
//! stdout when no path is given.

use spherical_perceptron::capacity_solver::{sweep, DEFAULT_TOL};
use spherical_perceptron::cli::{parse_kappa_grid, render, write_atomic, Artifact, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = parse_kappa_grid("-1.5:0.05:0.5")?;
    let records = sweep(&grid, DEFAULT_TOL)?.into_iter().collect::<Result<Vec<_>, _>>()?;
    let csv = render(&Artifact::Records(records), Format::Csv);
    match std::env::args().nth(1) {
        Some(path) => write_atomic(path.as_ref(), &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
