//! The standard (para-)complex structure on the base for a range of invariants.

use kappa_mu::triple::{classify_base, standard_constant};

fn main() -> kappa_mu::Result<()> {
    for i in [-4.0, -1.25, -0.5, 0.0, 0.6, 1.5, 3.0] {
        let (kind, a) = standard_constant(i)?;
        let base = classify_base(i)?;
        println!("I = {i:>5}: {:<14} a = {a:.6}  base {}", kind.name(), base.label(3));
    }
    println!("I = 1 gives {:?}", standard_constant(1.0).unwrap_err());
    Ok(())
}
