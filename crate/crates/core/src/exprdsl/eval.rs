use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::{BinOp, Expr, Func, Var};

/// Values for the free parameters of an expression.
pub type ParamBinding = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("parameter `{0}` is not bound")]
    Unbound(String),
    #[error("`{subexpr}` is undefined at s = {s}, t = {t}: {detail}")]
    Domain {
        subexpr: String,
        detail: &'static str,
        s: f64,
        t: f64,
    },
}

#[derive(Debug, Clone)]
enum Node {
    Const(f64),
    S,
    T,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    // Nodes that can leave their domain keep their source text for the error.
    Div(Box<Node>, Box<Node>, Box<str>),
    Pow(Box<Node>, Box<Node>, Box<str>),
    Call(Func, Box<Node>, Box<str>),
}

fn lower(e: &Expr, params: &ParamBinding) -> Result<Node, EvalError> {
    let b = |x: &Expr| lower(x, params).map(Box::new);
    Ok(match e {
        Expr::Num(v) => Node::Const(*v),
        Expr::Var(Var::S) => Node::S,
        Expr::Var(Var::T) => Node::T,
        Expr::Param(name) => Node::Const(*params.get(name).ok_or_else(|| EvalError::Unbound(name.clone()))?),
        Expr::Neg(a) => Node::Neg(b(a)?),
        Expr::Bin(op, l, r) => match op {
            BinOp::Add => Node::Add(b(l)?, b(r)?),
            BinOp::Sub => Node::Sub(b(l)?, b(r)?),
            BinOp::Mul => Node::Mul(b(l)?, b(r)?),
            BinOp::Div => Node::Div(b(l)?, b(r)?, e.to_string().into()),
            BinOp::Pow => Node::Pow(b(l)?, b(r)?, e.to_string().into()),
        },
        Expr::Call(f, a) => Node::Call(*f, b(a)?, e.to_string().into()),
    })
}

/// An expression with every parameter replaced by its value.
#[derive(Debug, Clone)]
pub struct BoundExpr {
    root: Node,
}

impl BoundExpr {
    pub fn new(expr: &Expr, params: &ParamBinding) -> Result<Self, EvalError> {
        Ok(Self { root: lower(expr, params)? })
    }

    /// Evaluates at `(s, t)`.
    ///
    /// Overflow to ±∞ is returned as a value. Operations outside their real
    /// domain (log of a non-positive number, square root of a negative one,
    /// division by zero, zero to a negative power, a negative base to a
    /// fractional power) and any NaN are errors naming the subexpression.
    pub fn eval(&self, s: f64, t: f64) -> Result<f64, EvalError> {
        eval_node(&self.root, s, t)
    }
}

fn eval_node(n: &Node, s: f64, t: f64) -> Result<f64, EvalError> {
    let domain = |src: &str, detail: &'static str| EvalError::Domain {
        subexpr: src.to_string(),
        detail,
        s,
        t,
    };
    let v = match n {
        Node::Const(v) => *v,
        Node::S => s,
        Node::T => t,
        Node::Neg(a) => -eval_node(a, s, t)?,
        Node::Add(a, b) => eval_node(a, s, t)? + eval_node(b, s, t)?,
        Node::Sub(a, b) => eval_node(a, s, t)? - eval_node(b, s, t)?,
        Node::Mul(a, b) => eval_node(a, s, t)? * eval_node(b, s, t)?,
        Node::Div(a, b, src) => {
            let den = eval_node(b, s, t)?;
            if den == 0.0 {
                return Err(domain(src, "division by zero"));
            }
            eval_node(a, s, t)? / den
        }
        Node::Pow(a, b, src) => {
            let base = eval_node(a, s, t)?;
            let ex = eval_node(b, s, t)?;
            if base == 0.0 && ex < 0.0 {
                return Err(domain(src, "zero raised to a negative power"));
            }
            if base < 0.0 && ex.fract() != 0.0 {
                return Err(domain(src, "negative base with non-integer exponent"));
            }
            base.powf(ex)
        }
        Node::Call(f, a, src) => {
            let x = eval_node(a, s, t)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Abs => x.abs(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(domain(src, "logarithm of a non-positive number"));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(domain(src, "square root of a negative number"));
                    }
                    x.sqrt()
                }
            }
        }
    };
    if v.is_nan() {
        let src = match n {
            Node::Div(.., src) | Node::Pow(.., src) | Node::Call(.., src) => src.to_string(),
            _ => "expression".to_string(),
        };
        return Err(domain(&src, "result is not a number"));
    }
    Ok(v)
}

/// A point where an expression is not positive (or fails to evaluate).
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub s: f64,
    pub t: f64,
    /// `None` when evaluation failed.
    pub value: Option<f64>,
    pub reason: String,
}

/// Evaluates on an `n × n` log-spaced grid over `s_range × t_range` and
/// returns the first point (s-major order) where the value is not a positive
/// finite number. Passing says nothing about points off the grid.
pub fn positivity_scan(
    expr: &BoundExpr,
    s_range: (f64, f64),
    t_range: (f64, f64),
    n: usize,
) -> Result<(), Counterexample> {
    assert!(n >= 2, "positivity_scan needs at least two points per axis");
    assert!(s_range.0 > 0.0 && t_range.0 > 0.0, "scan ranges must be positive");
    let axis = |(lo, hi): (f64, f64), i: usize| {
        if i == n - 1 {
            hi
        } else {
            (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()
        }
    };
    for i in 0..n {
        let s = axis(s_range, i);
        for j in 0..n {
            let t = axis(t_range, j);
            match expr.eval(s, t) {
                Ok(v) if v > 0.0 && v.is_finite() => {}
                Ok(v) => {
                    return Err(Counterexample {
                        s,
                        t,
                        value: Some(v),
                        reason: if v.is_finite() { "not positive".into() } else { "not finite".into() },
                    })
                }
                Err(e) => {
                    return Err(Counterexample {
                        s,
                        t,
                        value: None,
                        reason: e.to_string(),
                    })
                }
            }
        }
    }
    Ok(())
}
