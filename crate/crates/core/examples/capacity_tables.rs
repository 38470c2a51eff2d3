//! Recomputes the ten reference rows and prints the deviations.

use spherical_perceptron::capacity_solver::reproduce_tables;

fn main() {
    let report = reproduce_tables();
    for row in &report.rows {
        match &row.error {
            Some(e) => println!("kappa = {:>5}: failed: {e}", row.kappa),
            None => {
                let cells: Vec<String> = row
                    .deviations
                    .iter()
                    .map(|d| format!("{} {:.4} (ref {}, dev {:.1e})", d.quantity, d.computed, d.reference, d.abs_dev))
                    .collect();
                println!("kappa = {:>5}: {}", row.kappa, cells.join(", "));
            }
        }
    }
}
