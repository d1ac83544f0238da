//! Closed-form Lebesgue norms of U_p and U_p', checked against quadrature.

use blowup::norms::{make_norm_table, validate_exponents};
use blowup::oracle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p, q1, q2, r1, r2) = (3.0, 0.5, 0.9, 0.3, 0.45);
    let t = make_norm_table(p, q1, q2, r1, r2)?;
    println!("{t:#?}");

    let checks = [
        ("||U||_q1", t.n_q1, oracle::norm_u_tspace(p, q1)),
        ("||U||_q2", t.n_q2, oracle::norm_u_tspace(p, q2)),
        ("||U'||_r1", t.m_r1, oracle::norm_u_prime_tspace(p, r1)),
        ("||U'||_r2", t.m_r2, oracle::norm_u_prime_tspace(p, r2)),
    ];
    for (name, closed, quad) in checks {
        println!("{name:<10} closed {closed:.15e}  quadrature {quad:.15e}  rel {:.1e}", ((closed - quad) / quad).abs());
    }

    if let Err(report) = validate_exponents(p, 1.0, q2, r1, 0.6) {
        println!("\nrejected: {report}");
    }
    Ok(())
}
