//! The built-in catalog: each problem's analytic count against the solver.

use blowup::bifurcation::SolveOptions;
use blowup::scenarios::{catalog, check_scenario};
use blowup::verify::default_exponents;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 3.0;
    for sc in catalog() {
        let reduced = sc.spec(p, default_exponents(p))?.reduce()?;
        let t = reduced.table();
        let opts = SolveOptions::new(sc.recommended_window(t));
        let thr = sc.thresholds(t);
        println!("{}: A = {}, B = {}, thresholds {:?}", sc.name, sc.a_src, sc.b_src, thr);
        let mut probes = vec![0.5 * thr[0]];
        probes.extend(thr.windows(2).map(|w| (w[0] * w[1]).sqrt()));
        probes.push(2.0 * thr[thr.len() - 1]);
        for lambda in probes {
            let c = check_scenario(&sc, &reduced, lambda, &opts)?;
            println!(
                "  lambda {:>12.5e}: expected {:<9} found {:>2}{}  {}",
                lambda,
                format!("{:?}", c.expected),
                c.found,
                if c.overflow { "+" } else { " " },
                if c.passed { "ok" } else { &c.message }
            );
        }
    }
    Ok(())
}
