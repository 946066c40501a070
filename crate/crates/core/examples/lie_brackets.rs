//! Structure constants of so(p,q) and the Jacobi identity.

use kappa_mu::liecore::{bracket, jacobi_residual, so_basis, structure_constants, Signature};

fn main() -> kappa_mu::Result<()> {
    for (p, q) in [(3, 0), (2, 2), (4, 1)] {
        let basis = so_basis(Signature::new(p, q))?;
        let c = structure_constants(&basis)?;
        println!(
            "so({p},{q}): dim {}, jacobi residual {:.2e}",
            basis.len(),
            jacobi_residual(&c)
        );
    }

    let so3 = so_basis(Signature::new(3, 0))?;
    let (e, labels) = (so3.elements(), so3.labels());
    let ab = bracket(&e[0], &e[1])?;
    println!("[{}, {}] =\n{ab}", labels[0], labels[1]);
    Ok(())
}
