//! Coefficient expressions: parsing, printing, evaluation and diagnostics.

use blowup::exprdsl::{positivity_scan, CoeffExpr, ParamBinding};

fn main() {
    let mut params = ParamBinding::new();
    params.insert("a".into(), 1.0);
    params.insert("b".into(), 2.0);
    params.insert("p".into(), 3.0);

    let e: CoeffExpr = "s^p*((t-a)^2+b)".parse().unwrap();
    println!("parsed   {e}");
    println!("params   {:?}", e.params());
    println!("A(1, 1) = {}", e.eval(1.0, 1.0, &params).unwrap());

    let bound = e.bind(&params).unwrap();
    match positivity_scan(&bound, (1e-3, 1e3), (1e-3, 1e3), 50) {
        Ok(()) => println!("positive on the scanned box"),
        Err(c) => println!("counterexample at ({}, {}): {}", c.s, c.t, c.reason),
    }

    for bad in ["s + * t", "2s", "1 + tan(s)", "(s"] {
        let err = CoeffExpr::parse(bad).unwrap_err();
        println!("{bad:<12} -> {err}");
        println!("{:<12}    {}^", "", " ".repeat(err.offset()));
    }

    let e = CoeffExpr::parse("1 + log(s - t)").unwrap();
    println!("{}", e.eval(1.0, 2.0, &ParamBinding::new()).unwrap_err());
}
