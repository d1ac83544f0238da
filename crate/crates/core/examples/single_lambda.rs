//! All solutions for user-supplied coefficients at one value of lambda.

use blowup::bifurcation::{ProblemSpec, SolveOptions, Window};
use blowup::exprdsl::ParamBinding;
use blowup::timemap::{Profile, ProfileGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ProblemSpec::parse(
        3.0,
        (0.5, 0.7, 0.3, 0.25),
        "1 + t^2*(2 + sin(log(s)))",
        "s + t",
        ParamBinding::new(),
    )?;
    let reduced = spec.reduce()?;
    let opts = SolveOptions::new(Window::around(reduced.table()));

    for lambda in [1e2, 1e4, 1e6] {
        let roots = reduced.solve(lambda, &opts)?;
        println!("lambda = {lambda:e}: {} solution(s)", roots.count());
        for r in &roots.roots {
            let q = r.quadruple;
            println!(
                "  s = {:.12e} ({:?}), quadruple ({:.4e}, {:.4e}, {:.4e}, {:.4e}), residual {:.1e}",
                r.s, r.kind, q.s1, q.s2, q.t1, q.t2, r.residual
            );
        }
    }

    // The solution itself is a multiple of the profile.
    let roots = reduced.solve(1e4, &opts)?;
    if let Some(root) = roots.roots.first() {
        let grid = ProfileGrid::uniform(5, 0.1)?;
        let prof = Profile::new(spec.p)?;
        let u = blowup::bifurcation::reconstruct(&prof, reduced.table(), root.s, &grid)?;
        println!("u on {:?}: {:?}", u.grid, u.values);
        println!("nonlocal residual {:.1e}", reduced.nonlocal_residual(&prof, 1e4, root.s, &grid)?);
    }
    Ok(())
}
