//! A bifurcation diagram: root counts over a lambda grid and the located
//! thresholds, for A = s^p((t-a)^2 + b), B = s + t.

use blowup::bifurcation::SolveOptions;
use blowup::scenarios::Scenario;
use blowup::verify::default_exponents;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 3.0;
    let sc = Scenario::cor2(1.0, 1.0);
    let reduced = sc.spec(p, default_exponents(p))?.reduce()?;
    let opts = SolveOptions::new(sc.recommended_window(reduced.table()));

    let lambdas: Vec<f64> = (0..=24).map(|i| 10f64.powf(1.0 + i as f64 / 12.0)).collect();
    let threads = std::env::var("BLOWUP_THREADS").ok().and_then(|v| v.parse().ok()).unwrap_or(0);
    let diagram = reduced.sweep(&lambdas, &opts, threads)?;

    for r in &diagram.roots_per_lambda {
        let s: Vec<String> = r.roots.iter().map(|x| format!("{:.6e}", x.s)).collect();
        println!("{:>12.4} {:>2}  {}", r.lambda, r.count(), s.join(" "));
    }
    println!();
    let expected = sc.thresholds(reduced.table());
    for (t, want) in diagram.thresholds.iter().zip(&expected) {
        println!(
            "threshold {:.12e}: {} -> {} (analytic {:.12e})",
            t.lambda, t.count_below, t.count_above, want
        );
    }
    Ok(())
}
