//! Full verification over a small parameter grid, printing failing checks.

use kappa_mu::cli::verify_grid;
use kappa_mu::models::{Bound, Family, ModelSpec, Tolerances, DEFAULT_SEED};

fn main() -> kappa_mu::Result<()> {
    let mut specs = Vec::new();
    for f in Family::ALL {
        for n in [1, 3] {
            for alpha in [0.3, 1.0, 1.7] {
                specs.push(ModelSpec::new(f, n, alpha)?);
            }
        }
    }
    let reports = verify_grid(&specs, &Tolerances::default(), DEFAULT_SEED);
    for r in &reports {
        let worst = r
            .checks
            .iter()
            .filter(|c| c.bound == Bound::AtMost && c.value.is_finite())
            .map(|c| c.value / c.threshold)
            .fold(0.0, f64::max);
        println!(
            "{:<16} n={} alpha={:<4} checks {:>2}  worst residual/tol {worst:.1e}  {}",
            r.spec.family.model_label(r.spec.n),
            r.spec.n,
            r.spec.alpha,
            r.checks.len(),
            if r.pass() { "PASS" } else { "FAIL" }
        );
        for name in r.failures() {
            println!("    failed: {name}");
        }
    }
    Ok(())
}
