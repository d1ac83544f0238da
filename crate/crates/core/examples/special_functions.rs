//! Log-Gamma and Beta, the building blocks of every closed form.

use blowup::specfun::{beta, ln_beta, log_gamma};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>22}", "x", "ln Gamma(x)");
    for x in [0.1, 0.5, 1.0, 2.5, 10.0, 171.5] {
        println!("{x:>6} {:>22.15e}", log_gamma(x)?);
    }
    println!();
    println!("B(1/2, 1/2) = {:.17} (pi = {:.17})", beta(0.5, 0.5)?, std::f64::consts::PI);
    println!("B(1/4, 3/4) = {:.17}", beta(0.25, 0.75)?);
    // Large arguments overflow Beta itself but not its logarithm.
    println!("ln B(400, 500) = {:.12}", ln_beta(400.0, 500.0)?);
    Ok(())
}
