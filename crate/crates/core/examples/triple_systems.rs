//! Base Lie triple system, the involution τ and the Jordan extension on b₊.

use kappa_mu::contact::{compute_h, fit_kappa_mu};
use kappa_mu::homspace::{levi_civita_connection, levi_civita_curvature};
use kappa_mu::models::{build_model, Family, ModelSpec};
use kappa_mu::triple::{
    axiom_residual, base_lts, jordan_extension, jordan_shape, sphere_lts,
    standard_structure_solve, tau_and_fixed_subsystem, BaseGeometry,
};
use nalgebra::DMatrix;

fn main() -> kappa_mu::Result<()> {
    let bundle = build_model(ModelSpec::new(Family::Sphere, 2, 0.5)?)?;
    let (d, s) = (&bundle.decomposition, &bundle.contact);
    let h = compute_h(s, d)?;
    let km = fit_kappa_mu(&levi_civita_curvature(&levi_civita_connection(d, &s.g)?, d), s, &h);
    let base = BaseGeometry::new(s, &h, d)?;
    let lts = base_lts(d)?;
    println!("base LTS on b (dim {}): axiom residual {:.2e}", lts.dim(), axiom_residual(&lts));

    let st = standard_structure_solve(&km, &base)?;
    let tau = tau_and_fixed_subsystem(&lts, &base, Some(&st.operator.matrix))?;
    println!(
        "tau: square {:.1e}, automorphism {:.1e}, anticommutes with J {:.1e}",
        tau.tau_square,
        tau.automorphism,
        tau.anti_commutation.unwrap_or(0.0)
    );
    let n = tau.fixed.dim();
    let sphere = sphere_lts(&DMatrix::identity(n, n));
    let c = 2.0 * base.lambda * (km.boeckx.unwrap() + 1.0);
    println!(
        "fixed subsystem = {c:.4} x sphere LTS, residual {:.1e}",
        tau.fixed.product.max_abs_diff(&sphere.product.scaled(c))
    );

    let jts = jordan_extension(&lts, &st.operator, &base)?;
    let shape = jordan_shape(&DMatrix::identity(n, n));
    let scale = jts.product.get(0, 0, 0, 0) / shape.get(0, 0, 0, 0);
    println!(
        "Jordan extension: axiom residual {:.1e}, = {scale:.4} x shape (residual {:.1e})",
        axiom_residual(&jts),
        jts.product.max_abs_diff(&shape.scaled(scale))
    );
    Ok(())
}
