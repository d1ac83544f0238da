//! Text expressions for the nonlocal coefficients `A(s, t)` and `B(s, t)`.
//!
//! ```text
//! s^(p-1)*(1+t)      2+sin(s)      s^p*((t-a)^2+b)      exp(s)
//! ```
//!
//! `s` and `t` are the two arguments; any other identifier is a parameter that
//! must be bound before evaluation. Functions: `sin cos exp log sqrt abs`.
//! `^` binds tighter than unary minus and is right-associative. There is no
//! implicit multiplication, so `2s` is rejected.

mod ast;
mod eval;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use ast::{BinOp, Expr, Func, Var};
pub use eval::{positivity_scan, BoundExpr, Counterexample, EvalError, ParamBinding};
pub use parse::{parse_expr, ParseError};

/// A parsed coefficient expression.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffExpr {
    ast: Expr,
}

impl CoeffExpr {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        Ok(Self { ast: parse_expr(src)? })
    }

    pub fn from_ast(ast: Expr) -> Self {
        Self { ast }
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn params(&self) -> std::collections::BTreeSet<String> {
        self.ast.params()
    }

    pub fn mentions(&self, var: Var) -> bool {
        self.ast.mentions(var)
    }

    pub fn bind(&self, params: &ParamBinding) -> Result<BoundExpr, EvalError> {
        BoundExpr::new(&self.ast, params)
    }

    /// One-off evaluation; bind once and reuse the [`BoundExpr`] in loops.
    pub fn eval(&self, s: f64, t: f64, params: &ParamBinding) -> Result<f64, EvalError> {
        self.bind(params)?.eval(s, t)
    }
}

impl FromStr for CoeffExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CoeffExpr::parse(s)
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str) -> f64 {
        CoeffExpr::parse(src).unwrap().eval(0.0, 0.0, &ParamBinding::new()).unwrap()
    }

    fn binding(pairs: &[(&str, f64)]) -> ParamBinding {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn precedence_ladder() {
        assert_eq!(ev("2+3*4^2"), 50.0);
        assert_eq!(ev("-2^2"), -4.0);
        assert_eq!(ev("2^3^2"), 512.0);
        assert_eq!(ev("2^-1"), 0.5);
        assert_eq!(ev("8/4/2"), 1.0);
        assert_eq!(ev("1-2-3"), -4.0);
        assert_eq!(ev("--3"), 3.0);
        assert_eq!(ev("-2*3"), -6.0);
        assert_eq!(ev("1.5e2 + .5"), 150.5);
    }

    #[test]
    fn coefficient_trees() {
        let e = CoeffExpr::parse("s^(p-1)*(1+t)").unwrap();
        let expect = Expr::bin(
            BinOp::Mul,
            Expr::bin(
                BinOp::Pow,
                Expr::Var(Var::S),
                Expr::bin(BinOp::Sub, Expr::Param("p".into()), Expr::Num(1.0)),
            ),
            Expr::bin(BinOp::Add, Expr::Num(1.0), Expr::Var(Var::T)),
        );
        assert_eq!(e.ast(), &expect);
        let e = CoeffExpr::parse("2+sin(s)").unwrap();
        assert_eq!(
            e.ast(),
            &Expr::bin(BinOp::Add, Expr::Num(2.0), Expr::Call(Func::Sin, Box::new(Expr::Var(Var::S))))
        );
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = CoeffExpr::parse("s + * t").unwrap_err();
        assert_eq!(err.offset(), 4);
        match err {
            ParseError::Syntax { expected, .. } => assert!(expected.contains(&"number")),
            other => panic!("{other:?}"),
        }
        assert_eq!(CoeffExpr::parse("2s").unwrap_err().offset(), 1);
        assert_eq!(CoeffExpr::parse("(s").unwrap_err().offset(), 2);
        assert_eq!(CoeffExpr::parse("s $ t").unwrap_err().offset(), 2);
        assert!(matches!(
            CoeffExpr::parse("1 + tan(s)").unwrap_err(),
            ParseError::UnknownFunction { offset: 4, .. }
        ));
        assert_eq!(CoeffExpr::parse("").unwrap_err().offset(), 0);
        assert!(CoeffExpr::parse("sin + 1").is_err());
    }

    #[test]
    fn evaluation() {
        let e = CoeffExpr::parse("s+t").unwrap();
        assert_eq!(e.eval(2.0, 3.0, &ParamBinding::new()).unwrap(), 5.0);
        let e = CoeffExpr::parse("s^p*((t-a)^2+b)").unwrap();
        let params = binding(&[("a", 1.0), ("b", 2.0), ("p", 3.0)]);
        assert_eq!(e.eval(1.0, 1.0, &params).unwrap(), 2.0);
        assert_eq!(
            e.params().into_iter().collect::<Vec<_>>(),
            vec!["a".to_string(), "b".to_string(), "p".to_string()]
        );
    }

    #[test]
    fn evaluation_errors() {
        let e = CoeffExpr::parse("1 + log(s)").unwrap();
        match e.eval(0.0, 1.0, &ParamBinding::new()).unwrap_err() {
            EvalError::Domain { subexpr, .. } => assert_eq!(subexpr, "log(s)"),
            other => panic!("{other:?}"),
        }
        let e = CoeffExpr::parse("s*a").unwrap();
        assert_eq!(e.bind(&ParamBinding::new()).unwrap_err(), EvalError::Unbound("a".into()));
        let e = CoeffExpr::parse("s^(0-1)").unwrap();
        assert!(e.eval(0.0, 0.0, &ParamBinding::new()).is_err());
        let e = CoeffExpr::parse("s^0.5").unwrap();
        assert!(e.eval(-1.0, 0.0, &ParamBinding::new()).is_err());
        assert_eq!(CoeffExpr::parse("exp(s)").unwrap().eval(1e4, 0.0, &ParamBinding::new()).unwrap(), f64::INFINITY);
    }

    #[test]
    fn printing_round_trips() {
        for src in ["s^(p-1)*(1+t)", "-2^2", "(-2)^2", "2^3^2", "(2^3)^2", "a-(b-c)", "a/(b*c)", "-(s+t)", "2^-s", "1e-300*s"] {
            let e = CoeffExpr::parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(CoeffExpr::parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
        assert_eq!(CoeffExpr::parse("((s))+(t*2)").unwrap().to_string(), "s + t*2");
    }

    #[test]
    fn scan() {
        let none = ParamBinding::new();
        let e = CoeffExpr::parse("2+sin(s)").unwrap().bind(&none).unwrap();
        assert!(positivity_scan(&e, (1e-3, 1e3), (1e-3, 1e3), 40).is_ok());
        let e = CoeffExpr::parse("t-5").unwrap().bind(&none).unwrap();
        let cx = positivity_scan(&e, (1.0, 10.0), (1.0, 10.0), 10).unwrap_err();
        assert!(cx.t < 5.0);
        let e = CoeffExpr::parse("exp(s)").unwrap().bind(&none).unwrap();
        assert!(positivity_scan(&e, (1e-3, 1e2), (1e-3, 1e2), 10).is_ok());
    }
}
