use blowup::exprdsl::{parse_expr, BinOp, CoeffExpr, Expr, Func, ParamBinding, Var};
use proptest::prelude::*;

const RESERVED: [&str; 8] = ["s", "t", "sin", "cos", "exp", "log", "sqrt", "abs"];

fn param_name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,3}".prop_filter("reserved", |n| !RESERVED.contains(&n.as_str()))
}

fn number() -> impl Strategy<Value = f64> {
    prop_oneof![
        (0u32..1000).prop_map(f64::from),
        (0.0f64..1e6),
        (-300i32..300).prop_map(|k| 10f64.powi(k)),
        any::<f64>().prop_filter("finite, non-negative", |v| v.is_finite() && v.is_sign_positive()),
    ]
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        number().prop_map(Expr::Num),
        Just(Expr::Var(Var::S)),
        Just(Expr::Var(Var::T)),
        param_name().prop_map(Expr::Param),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(8, 64, 2, |inner| {
        let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div), Just(BinOp::Pow)];
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::bin(op, a, b)),
            (prop::sample::select(Func::ALL.to_vec()), inner).prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 512,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn print_then_parse_is_identity(e in expr()) {
        prop_assume!(e.depth() <= 8);
        let printed = e.to_string();
        let back = parse_expr(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        prop_assert_eq!(back, e, "{}", printed);
    }

    #[test]
    fn printing_is_stable(e in expr()) {
        let once = CoeffExpr::from_ast(e).to_string();
        let twice = CoeffExpr::parse(&once).unwrap().to_string();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn parser_never_panics(src in "[ -~]{0,40}") {
        if let Err(err) = parse_expr(&src) {
            prop_assert!(err.offset() <= src.len());
        }
    }

    #[test]
    fn sums_of_squares_plus_one_are_positive(a in 0.0f64..10.0, s in 1e-3f64..1e3, t in 1e-3f64..1e3) {
        let e = CoeffExpr::parse("1 + (s - a)^2 + t^2").unwrap();
        let mut params = ParamBinding::new();
        params.insert("a".into(), a);
        prop_assert!(e.eval(s, t, &params).unwrap() >= 1.0);
    }
}
