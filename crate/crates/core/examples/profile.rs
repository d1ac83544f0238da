//! The blow-up profile U_p of u'' = u^p on (-1, 1).

use blowup::timemap::{Profile, ProfileGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 3.0;
    let prof = Profile::new(p)?;
    println!("p = {p}: mu_p = {:.15}, L_p = {:.15}", prof.mu_p(), prof.l_p());

    let grid = ProfileGrid::uniform(9, 0.01)?;
    let sample = prof.sample(&grid)?;
    println!("{:>8} {:>20} {:>20}", "x", "U_p(x)", "U_p'(x)");
    for i in 0..sample.grid.len() {
        println!("{:>8.4} {:>20.12e} {:>20.12e}", sample.grid[i], sample.values[i], sample.derivs[i]);
    }

    // F(U(x)/mu_p) = L_p x is the defining time-map identity.
    let x = 0.7;
    let y = prof.eval_u(x)? / prof.mu_p();
    println!("F(U(0.7)/mu_p) - 0.7 L_p = {:.3e}", prof.f(y)? - x * prof.l_p());
    println!("max ODE residual on [-0.9, 0.9]: {:.3e}", prof.ode_residual(0.1)?);
    Ok(())
}
