//! The exponential problem `A(‖u'‖_{r1}) u'' = λ B(‖u'‖_{r2}) e^u` on
//! `(−1, 1)` with `u → +∞` at both ends.
//!
//! The local problem `U'' = λ e^U` has the explicit solution
//! `U_λ(x) = ln(π²/(2λ)) − 2 ln cos(πx/2)`, and every nonlocal solution is the
//! shift `u = U_λ − c` with `c = ln(B(‖U_λ'‖_{r2}) / A(‖U_λ'‖_{r1}))`.
//! There is exactly one for each λ > 0.
//!
//! Since `U_λ` already absorbs λ, the shift carries no `ln λ` term:
//! `A u'' = A λ e^{U_λ} = A λ e^{u + c} = λ B e^u`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use thiserror::Error;

use crate::exprdsl::{CoeffExpr, EvalError, ParamBinding, ParseError, Var};
use crate::specfun::{ln_beta, SpecfunError};
use crate::timemap::{ProfileGrid, ProfileSample};

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("lambda must be positive and finite, got {0}")]
    BadLambda(f64),
    #[error("x = {0} is outside (-1, 1)")]
    OutsideInterval(f64),
    #[error("{name} = {value} must lie in (0, 1)")]
    Exponent { name: &'static str, value: f64 },
    #[error("cannot parse {which}: {source}")]
    Parse {
        which: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("{which} mentions `s`; in the exponential problem the coefficients depend on t = ‖u'‖ only")]
    MentionsS { which: &'static str },
    #[error("parameter `{0}` is reserved")]
    ReservedParam(String),
    #[error("{which} at t = {t}: {source}")]
    Eval {
        which: &'static str,
        t: f64,
        #[source]
        source: EvalError,
    },
    #[error("{which}({t}) = {value} is not a finite positive number")]
    NotPositive { which: &'static str, t: f64, value: f64 },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Distance-aware `cos(πx/2)` for `|x| < 1`: uses `sin(π(1−|x|)/2)` near the
/// ends, where `1 − |x|` is exact and the cosine would lose digits.
fn cos_half_pi(x: f64) -> f64 {
    let a = x.abs();
    if a > 0.5 {
        (FRAC_PI_2 * (1.0 - a)).sin()
    } else {
        (FRAC_PI_2 * a).cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpProfile {
    pub lambda: f64,
    /// `U_λ(0) = ln(π²/(2λ))`
    pub mu_lambda: f64,
}

impl ExpProfile {
    pub fn new(lambda: f64) -> Result<Self, ExpError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ExpError::BadLambda(lambda));
        }
        Ok(Self {
            lambda,
            mu_lambda: (PI * PI / (2.0 * lambda)).ln(),
        })
    }

    fn check(x: f64) -> Result<(), ExpError> {
        if x.abs() < 1.0 {
            Ok(())
        } else {
            Err(ExpError::OutsideInterval(x))
        }
    }

    pub fn eval_u(&self, x: f64) -> Result<f64, ExpError> {
        Self::check(x)?;
        Ok(self.mu_lambda - 2.0 * cos_half_pi(x).ln())
    }

    /// `π tan(πx/2)`, independent of λ.
    pub fn eval_u_prime(&self, x: f64) -> Result<f64, ExpError> {
        Self::check(x)?;
        let a = x.abs();
        let t = if a > 0.5 {
            1.0 / (FRAC_PI_2 * (1.0 - a)).tan()
        } else {
            (FRAC_PI_2 * a).tan()
        };
        Ok(PI * t.copysign(x))
    }

    /// `sign(x)·√(2λ(e^{U_λ} − e^{μ_λ}))`.
    pub fn eval_u_prime_energy(&self, x: f64) -> Result<f64, ExpError> {
        let u = self.eval_u(x)?;
        let gap = (u - self.mu_lambda).exp_m1() * self.mu_lambda.exp();
        Ok((2.0 * self.lambda * gap).sqrt().copysign(x))
    }

    /// `π² / (2 cos²(πx/2))`, which equals `λ e^{U_λ}`.
    pub fn eval_u_second(&self, x: f64) -> Result<f64, ExpError> {
        Self::check(x)?;
        let c = cos_half_pi(x);
        Ok(PI * PI / (2.0 * c * c))
    }
}

pub fn eval_u_lambda(profile: &ExpProfile, x: f64) -> Result<f64, ExpError> {
    profile.eval_u(x)
}

pub fn eval_u_lambda_prime(profile: &ExpProfile, x: f64) -> Result<f64, ExpError> {
    profile.eval_u_prime(x)
}

/// `‖U_λ'‖_r = (2π^{r−1} B((1−r)/2, (r+1)/2))^{1/r}` for `0 < r < 1`.
pub fn exp_prime_norm(r: f64) -> Result<f64, ExpError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(ExpError::Exponent { name: "r", value: r });
    }
    let ln_pow = 2f64.ln() + (r - 1.0) * PI.ln() + ln_beta((1.0 - r) / 2.0, (r + 1.0) / 2.0)?;
    Ok((ln_pow / r).exp())
}

/// Coefficients depend on `t` only; `r1` and `r2` are bound automatically.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpProblemSpec {
    pub r1: f64,
    pub r2: f64,
    pub a: CoeffExpr,
    pub b: CoeffExpr,
    pub params: ParamBinding,
    pub lambda: f64,
}

const EXP_RESERVED: [&str; 2] = ["r1", "r2"];

impl ExpProblemSpec {
    pub fn new(
        (r1, r2): (f64, f64),
        a: CoeffExpr,
        b: CoeffExpr,
        params: ParamBinding,
        lambda: f64,
    ) -> Result<Self, ExpError> {
        for (name, value) in [("r1", r1), ("r2", r2)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(ExpError::Exponent { name, value });
            }
        }
        for (which, e) in [("A", &a), ("B", &b)] {
            if e.mentions(Var::S) {
                return Err(ExpError::MentionsS { which });
            }
        }
        if let Some(name) = params.keys().find(|k| EXP_RESERVED.contains(&k.as_str())) {
            return Err(ExpError::ReservedParam(name.clone()));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ExpError::BadLambda(lambda));
        }
        Ok(Self {
            r1,
            r2,
            a,
            b,
            params,
            lambda,
        })
    }

    pub fn parse(r: (f64, f64), a: &str, b: &str, params: ParamBinding, lambda: f64) -> Result<Self, ExpError> {
        let a = CoeffExpr::parse(a).map_err(|source| ExpError::Parse { which: "A", source })?;
        let b = CoeffExpr::parse(b).map_err(|source| ExpError::Parse { which: "B", source })?;
        Self::new(r, a, b, params, lambda)
    }

    fn coefficient(&self, which: &'static str, t: f64) -> Result<f64, ExpError> {
        let mut binding = self.params.clone();
        binding.insert("r1".into(), self.r1);
        binding.insert("r2".into(), self.r2);
        let e = if which == "A" { &self.a } else { &self.b };
        let value = e
            .eval(0.0, t, &binding)
            .map_err(|source| ExpError::Eval { which, t, source })?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(ExpError::NotPositive { which, t, value });
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpSolution {
    pub profile: ExpProfile,
    /// `‖U_λ'‖_{r1}`, `‖U_λ'‖_{r2}`
    pub norms: (f64, f64),
    /// `A(‖U_λ'‖_{r1})`, `B(‖U_λ'‖_{r2})`
    pub coefficients: (f64, f64),
    /// `c` in `u = U_λ − c`.
    pub shift: f64,
    pub sample: ProfileSample,
}

impl ExpSolution {
    pub fn eval_u(&self, x: f64) -> Result<f64, ExpError> {
        Ok(self.profile.eval_u(x)? - self.shift)
    }

    /// Max over `grid` of `|A u'' − λ B e^u| / |A u''|`.
    pub fn residual(&self, grid: &[f64]) -> Result<f64, ExpError> {
        let (a, b) = self.coefficients;
        let mut worst: f64 = 0.0;
        for &x in grid {
            let lhs = a * self.profile.eval_u_second(x)?;
            let rhs = self.profile.lambda * b * self.eval_u(x)?.exp();
            worst = worst.max(((lhs - rhs) / lhs).abs());
        }
        Ok(worst)
    }
}

/// The unique solution, sampled on `grid`.
pub fn solve_exp(spec: &ExpProblemSpec, grid: &ProfileGrid) -> Result<ExpSolution, ExpError> {
    let profile = ExpProfile::new(spec.lambda)?;
    let norms = (exp_prime_norm(spec.r1)?, exp_prime_norm(spec.r2)?);
    let a = spec.coefficient("A", norms.0)?;
    let b = spec.coefficient("B", norms.1)?;
    let shift = b.ln() - a.ln();
    let mut values = Vec::with_capacity(grid.points().len());
    let mut derivs = Vec::with_capacity(grid.points().len());
    for &x in grid.points() {
        values.push(profile.eval_u(x)? - shift);
        derivs.push(profile.eval_u_prime(x)?);
    }
    Ok(ExpSolution {
        profile,
        norms,
        coefficients: (a, b),
        shift,
        sample: ProfileSample {
            grid: grid.points().to_vec(),
            values,
            derivs,
            delta: grid.delta(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_values() {
        let pr = ExpProfile::new(PI * PI / 2.0).unwrap();
        assert!(pr.eval_u(0.0).unwrap().abs() < 1e-15);
        let pr = ExpProfile::new(3.0).unwrap();
        let half = pr.eval_u(0.5).unwrap();
        assert!((half - (pr.mu_lambda + 2f64.ln())).abs() < 1e-14);
        assert_eq!(pr.eval_u(0.5).unwrap(), pr.eval_u(-0.5).unwrap());
        assert_eq!(pr.eval_u_prime(0.3).unwrap(), -pr.eval_u_prime(-0.3).unwrap());
        assert!(pr.eval_u(1.0).is_err());
    }

    #[test]
    fn second_derivative_by_differences() {
        let pr = ExpProfile::new(2.0).unwrap();
        let (x, h) = (0.3, 1e-4);
        let fd = (pr.eval_u(x + h).unwrap() - 2.0 * pr.eval_u(x).unwrap() + pr.eval_u(x - h).unwrap()) / (h * h);
        let want = 2.0 * pr.eval_u(x).unwrap().exp();
        assert!((fd / want - 1.0).abs() < 1e-6);
    }

    #[test]
    fn half_norm() {
        let v = exp_prime_norm(0.5).unwrap().sqrt();
        assert!((v / (2.0 * (2.0 * PI).sqrt()) - 1.0).abs() < 1e-13);
        assert!(exp_prime_norm(1.0).is_err());
        let near: Vec<f64> = (1..5).map(|k| exp_prime_norm(1.0 - 10f64.powi(-k)).unwrap()).collect();
        assert!(near.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn shift_rules() {
        let grid = ProfileGrid::uniform(11, 0.05).unwrap();
        let sol = solve_exp(&ExpProblemSpec::parse((0.5, 0.5), "1", "1", ParamBinding::new(), 1.0).unwrap(), &grid).unwrap();
        assert_eq!(sol.shift, 0.0);
        let sol = solve_exp(
            &ExpProblemSpec::parse((0.4, 0.4), "2+t^2", "2+t^2", ParamBinding::new(), 7.0).unwrap(),
            &grid,
        )
        .unwrap();
        assert_eq!(sol.shift, 0.0);
        let sol = solve_exp(&ExpProblemSpec::parse((0.3, 0.6), "1+t", "2+t", ParamBinding::new(), 5.0).unwrap(), &grid)
            .unwrap();
        assert!(sol.residual(grid.points()).unwrap() < 1e-12);
        assert!(matches!(
            ExpProblemSpec::parse((0.5, 0.5), "s", "1", ParamBinding::new(), 1.0),
            Err(ExpError::MentionsS { which: "A" })
        ));
    }
}
