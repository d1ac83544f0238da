//! The exponential problem A(||u'||_r1) u'' = lambda B(||u'||_r2) e^u.

use blowup::expcase::{exp_prime_norm, solve_exp, ExpProblemSpec};
use blowup::exprdsl::ParamBinding;
use blowup::timemap::ProfileGrid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for r in [0.2, 0.5, 0.8] {
        println!("||U'||_{r} = {:.15e}", exp_prime_norm(r)?);
    }
    let grid = ProfileGrid::uniform(7, 0.05)?;
    for lambda in [0.1, 1.0, 10.0] {
        let spec = ExpProblemSpec::parse((0.3, 0.6), "1+t", "2+t", ParamBinding::new(), lambda)?;
        let sol = solve_exp(&spec, &grid)?;
        println!(
            "lambda {lambda:>5}: shift {:.12}, residual {:.1e}, u(0) = {:.12}",
            sol.shift,
            sol.residual(grid.points())?,
            sol.eval_u(0.0)?
        );
    }
    Ok(())
}
