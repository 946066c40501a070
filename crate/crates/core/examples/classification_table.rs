//! Verified classification table over a grid of Boeckx invariants.

use kappa_mu::models::{Tolerances, DEFAULT_SEED};
use kappa_mu::report::{classification_table, classify};

fn main() -> kappa_mu::Result<()> {
    let grid = [-5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.5, 5.0];
    let table = classification_table(&grid, 2, &Tolerances::default(), DEFAULT_SEED)?;
    print!("{}", table.to_text());

    let c = classify(2.0, 3)?;
    println!("{}", c.to_json());
    Ok(())
}
