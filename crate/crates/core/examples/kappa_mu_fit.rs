//! Fit (κ, μ) from the Levi-Civita curvature and compare with d-homothetic
//! deformations.

use kappa_mu::contact::{compute_h, d_homothetic, fit_kappa_mu};
use kappa_mu::homspace::{levi_civita_connection, levi_civita_curvature};
use kappa_mu::models::{build_model, closed_form_invariant, deformed_refit, Family, ModelSpec};

fn main() -> kappa_mu::Result<()> {
    for family in Family::ALL {
        let spec = ModelSpec::new(family, 2, 0.5)?;
        let bundle = build_model(spec)?;
        let (d, s) = (&bundle.decomposition, &bundle.contact);
        let h = compute_h(s, d)?;
        let r = levi_civita_curvature(&levi_civita_connection(d, &s.g)?, d);
        let km = fit_kappa_mu(&r, s, &h);
        println!(
            "{}: kappa {:.6} mu {:.6} I {:.6} (closed form {:.6}), fit residual {:.1e}",
            family.model_label(2),
            km.kappa,
            km.mu,
            km.boeckx.unwrap_or(f64::NAN),
            closed_form_invariant(&spec)?,
            km.fit_residual
        );
        for a in [0.5, 2.0] {
            let dk = d_homothetic(&km, a)?;
            println!(
                "  a = {a}: kappa {:.6} mu {:.6} I {:.6}, refit residual {:.1e}",
                dk.kappa,
                dk.mu,
                dk.boeckx.unwrap_or(f64::NAN),
                deformed_refit(&bundle, &km, a)?
            );
        }
    }
    Ok(())
}
