//! Build one model and inspect its contact metric structure and h.

use kappa_mu::contact::{compute_h, h_residuals, verify_contact_metric};
use kappa_mu::homspace::decomposition_residuals;
use kappa_mu::models::{build_model, Family, ModelSpec};

fn main() -> kappa_mu::Result<()> {
    let bundle = build_model(ModelSpec::new(Family::Sphere, 2, 0.5)?)?;
    let (d, s) = (&bundle.decomposition, &bundle.contact);
    println!("dim h = {}, dim m = {}", d.dim_h(), d.dim_m());
    println!("decomposition residual {:.2e}", decomposition_residuals(d).max());
    println!("contact metric residual {:.2e}", verify_contact_metric(s, d).max());

    let h = compute_h(s, d)?;
    println!("h checks {:?}, lambda = {}", h_residuals(&h, s), h.lambda);
    println!("phi =\n{:.4}", s.phi);
    println!("h =\n{:.4}", h.matrix);
    Ok(())
}
