//! Large-lambda behaviour of the two roots for A = e^s, B = 1.

use blowup::scenarios::{cor4_sample, Scenario, ScenarioName};
use blowup::verify::default_exponents;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // q1 close to its upper bound keeps ||U_p||_{q1} near 1, where the
    // second-order terms are small.
    let (p, q1) = (9.0, 3.5);
    let (_, q2, r1, r2) = default_exponents(p);
    let reduced = Scenario::new(ScenarioName::Cor4).spec(p, (q1, q2, r1, r2))?.reduce()?;
    println!("{:>8} {:>14} {:>14} {:>10} {:>14} {:>10}", "lambda", "s1", "s1 pred", "rel err", "s2", "s2 ratio");
    for k in [4, 6, 8, 10, 12, 16] {
        let a = cor4_sample(&reduced, 10f64.powi(k))?;
        println!(
            "{:>8} {:>14.6e} {:>14.6e} {:>10.2e} {:>14.6} {:>10.5}",
            format!("1e{k}"),
            a.s1,
            a.s1_pred,
            a.s1_rel_error,
            a.s2,
            a.s2_ratio
        );
    }
    Ok(())
}
