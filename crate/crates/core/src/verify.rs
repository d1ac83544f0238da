//! Runs every closed form against an independent numerical route and reports
//! each comparison with its measured and allowed error.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::bifurcation::{BifurcationError, ProblemSpec, Reduced, SolveOptions};
use crate::expcase::{exp_prime_norm, solve_exp, ExpError, ExpProblemSpec};
use crate::exprdsl::ParamBinding;
use crate::norms::{norm_u, norm_u_prime, NormError};
use crate::oracle;
use crate::scenarios::{check_scenario, cor4_sample, Count, Scenario, ScenarioName};
use crate::specfun::beta;
use crate::timemap::{Profile, ProfileGrid, TimemapError};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Timemap(#[from] TimemapError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Bifurcation(#[from] BifurcationError),
    #[error(transparent)]
    Exp(#[from] ExpError),
    #[error(transparent)]
    Specfun(#[from] crate::specfun::SpecfunError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub measured: f64,
    pub allowed: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured ≤ allowed` (NaN fails).
    pub fn within(group: &'static str, name: impl Into<String>, measured: f64, allowed: f64) -> Self {
        Self {
            group,
            name: name.into(),
            measured,
            allowed,
            passed: measured <= allowed,
        }
    }

    /// A yes/no check, recorded as measured 0 (held) or 1 (failed) against 0.
    pub fn holds(group: &'static str, name: impl Into<String>, ok: bool) -> Self {
        Self::within(group, name, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub ps: Vec<f64>,
    /// Multiplies every closed-form norm by `1 + ε` before comparison.
    pub perturb_norms: f64,
    /// Restricts the scenario checks; `None` runs all four.
    pub scenario: Option<ScenarioName>,
    /// Adds the large-λ cor4 trend checks.
    pub asymptotics: bool,
    /// `(p, q1)` for the trend checks.
    pub asymptotic_exponents: (f64, f64),
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            ps: vec![2.0, 3.0],
            perturb_norms: 0.0,
            scenario: None,
            asymptotics: false,
            asymptotic_exponents: (9.0, 3.5),
        }
    }
}

/// `(q1, q2, r1, r2)` strictly inside the admissible range for `p`.
pub fn default_exponents(p: f64) -> (f64, f64, f64, f64) {
    let qb = (p - 1.0) / 2.0;
    let rb = (p - 1.0) / (p + 1.0);
    (0.5 * qb, 0.7 * qb, 2.0 * rb / 3.0, 0.5 * rb)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Fractions `k/6`, `k = 1..=5`, of the admissible exponent range.
fn fractions() -> impl Iterator<Item = f64> {
    (1..=5).map(|k| k as f64 / 6.0)
}

pub fn run(opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    let mut checks = Vec::new();
    special_functions(&mut checks)?;
    for &p in &opts.ps {
        profile_checks(p, &mut checks)?;
        norm_checks(p, opts.perturb_norms, &mut checks)?;
        scenario_checks(p, opts, &mut checks)?;
    }
    exp_checks(&mut checks)?;
    if opts.asymptotics {
        asymptotic_checks(opts.asymptotic_exponents, &mut checks)?;
    }
    Ok(VerifyReport { checks })
}

fn special_functions(out: &mut Vec<Check>) -> Result<(), VerifyError> {
    let g = "specfun";
    out.push(Check::within(g, "B(1/2,1/2) = pi", rel(beta(0.5, 0.5)?, PI), 1e-13));
    out.push(Check::within(g, "B(1,1) = 1", rel(beta(1.0, 1.0)?, 1.0), 1e-13));
    out.push(Check::within(g, "B(1/4,3/4) = pi*sqrt(2)", rel(beta(0.25, 0.75)?, PI * SQRT_2), 1e-12));
    Ok(())
}

fn profile_checks(p: f64, out: &mut Vec<Check>) -> Result<(), VerifyError> {
    let g = "profile";
    let prof = Profile::new(p)?;
    out.push(Check::within(
        g,
        format!("p={p} L_p closed form vs quadrature"),
        rel(prof.l_p(), oracle::time_map_length(p)),
        1e-9,
    ));
    out.push(Check::within(g, format!("p={p} ODE residual, delta=0.1"), prof.ode_residual(0.1)?, 1e-5));
    let mut worst: f64 = 0.0;
    for i in 0..=200 {
        let x = 0.999 * i as f64 / 200.0;
        let y = prof.eval_u(x)? / prof.mu_p();
        worst = worst.max((prof.f(y)? - prof.l_p() * x).abs() / prof.l_p());
    }
    out.push(Check::within(g, format!("p={p} F(U(x)/mu_p) = L_p x on [0, 0.999]"), worst, 1e-9));
    out.push(Check::within(
        g,
        format!("p={p} Runge-Kutta vs U(0.9)"),
        oracle::compare_with_integration(&prof, &[0.9])?,
        1e-7,
    ));
    let z = 0.9 * prof.l_p();
    out.push(Check::within(
        g,
        format!("p={p} F inverse vs bisection at 0.9 L_p"),
        rel(prof.f_inverse(z)?, oracle::f_inverse_bisect(p, z)),
        1e-9,
    ));
    Ok(())
}

fn norm_checks(p: f64, eps: f64, out: &mut Vec<Check>) -> Result<(), VerifyError> {
    let g = "norms";
    let prof = Profile::new(p)?;
    let (qb, rb) = ((p - 1.0) / 2.0, (p - 1.0) / (p + 1.0));
    let (mut tq, mut xq, mut tr, mut xr) = (0f64, 0f64, 0f64, 0f64);
    for f in fractions() {
        let (q, r) = (qb * f, rb * f);
        let n = norm_u(p, q)? * (1.0 + eps);
        let m = norm_u_prime(p, r)? * (1.0 + eps);
        tq = tq.max(rel(n, oracle::norm_u_tspace(p, q)));
        xq = xq.max(rel(n, oracle::norm_u_xspace(&prof, q, 1e-3)));
        tr = tr.max(rel(m, oracle::norm_u_prime_tspace(p, r)));
        xr = xr.max(rel(m, oracle::norm_u_prime_xspace(&prof, r, 1e-3)));
    }
    out.push(Check::within(g, format!("p={p} ||U||_q vs t-space quadrature"), tq, 1e-7));
    out.push(Check::within(g, format!("p={p} ||U||_q vs x-space quadrature"), xq, 1e-7));
    out.push(Check::within(g, format!("p={p} ||U'||_r vs t-space quadrature"), tr, 1e-7));
    out.push(Check::within(g, format!("p={p} ||U'||_r vs x-space quadrature"), xr, 1e-7));
    Ok(())
}

fn scenario_checks(p: f64, opts: &VerifyOptions, out: &mut Vec<Check>) -> Result<(), VerifyError> {
    let g = "scenarios";
    let exps = default_exponents(p);
    for sc in crate::scenarios::catalog() {
        if opts.scenario.is_some_and(|n| n != sc.name) {
            continue;
        }
        let spec = sc.spec(p, exps)?;
        let mut table = spec.norm_table()?;
        if opts.perturb_norms != 0.0 {
            table = table.perturbed(opts.perturb_norms);
        }
        let reduced = Reduced::new(&spec, table.clone())?;
        let window = sc.recommended_window(&table);
        let th = sc.thresholds(&table);
        let mut lambdas = vec![0.5 * th[0], th[0]];
        if th.len() > 1 {
            lambdas.extend([(th[0] * th[1]).sqrt(), th[1], 2.0 * th[1]]);
        } else {
            lambdas.push(2.0 * th[0]);
        }
        let solve = SolveOptions::new(window);
        for lambda in lambdas {
            let c = check_scenario(&sc, &reduced, lambda, &solve)?;
            out.push(Check::holds(
                g,
                format!("p={p} {} lambda={lambda:.6e}: expected {}, found {} ({})", sc.name, c.expected, c.found, c.message),
                c.passed,
            ));
        }
        if sc.name != ScenarioName::Cor3 {
            let (lo, hi) = (0.25 * th[0], 4.0 * th[th.len() - 1]);
            let grid: Vec<f64> = (0..=12).map(|k| lo * (hi / lo).powf(k as f64 / 12.0)).collect();
            let diagram = reduced.sweep(&grid, &solve, 0)?;
            let found: Vec<f64> = diagram.thresholds.iter().map(|t| t.lambda).collect();
            let worst = if found.len() == th.len() {
                found.iter().zip(&th).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            out.push(Check::within(g, format!("p={p} {} sweep thresholds", sc.name), worst, 1e-7));
        } else {
            let inside = reduced.solve(2.0 * th[0], &solve)?;
            out.push(Check::holds(
                g,
                format!("p={p} cor3 inside band reaches the count cap"),
                inside.overflow && matches!(sc.count(&table, 2.0 * th[0]), Count::Infinite),
            ));
        }
    }
    Ok(())
}

fn exp_checks(out: &mut Vec<Check>) -> Result<(), VerifyError> {
    let g = "exponential";
    let half = exp_prime_norm(0.5)?.sqrt();
    out.push(Check::within(g, "||U'||_{1/2}^{1/2} = 2 sqrt(2 pi)", rel(half, 2.0 * (2.0 * PI).sqrt()), 1e-10));
    let mut worst: f64 = 0.0;
    for lambda in [0.1, 1.0, 10.0] {
        for r in [0.2, 0.5, 0.8] {
            worst = worst.max(rel(oracle::exp_prime_norm_xspace(lambda, r), exp_prime_norm(r)?));
        }
    }
    out.push(Check::within(g, "||U'||_r independent of lambda (x-space)", worst, 1e-7));
    let grid = ProfileGrid::uniform(181, 0.1)?;
    let spec = ExpProblemSpec::parse((0.3, 0.6), "1+t", "2+t", ParamBinding::new(), 2.0)?;
    let sol = solve_exp(&spec, &grid)?;
    out.push(Check::within(g, "A=1+t, B=2+t residual on [-0.9, 0.9]", sol.residual(grid.points())?, 1e-7));
    let mut back: f64 = 0.0;
    for (x, u) in grid.points().iter().zip(&sol.sample.values) {
        let want = sol.profile.eval_u(*x)?;
        back = back.max((u + sol.shift - want).abs() / want.abs().max(1.0));
    }
    out.push(Check::within(g, "u + c reproduces U_lambda", back, 1e-10));
    Ok(())
}

/// Trend checks for the cor4 roots as λ grows, at the given `(p, q1)`.
pub fn asymptotic_checks((p, q1): (f64, f64), out: &mut Vec<Check>) -> Result<(), VerifyError> {
    let g = "asymptotics";
    let (_, q2, r1, r2) = default_exponents(p);
    let spec: ProblemSpec = Scenario::new(ScenarioName::Cor4).spec(p, (q1, q2, r1, r2))?;
    let reduced = spec.reduce()?;
    let s1: Vec<_> = [1e4, 1e6, 1e8]
        .into_iter()
        .map(|l| cor4_sample(&reduced, l))
        .collect::<Result<_, _>>()?;
    let errs: Vec<f64> = s1.iter().map(|s| s.s1_rel_error).collect();
    out.push(Check::holds(
        g,
        format!("p={p} q1={q1} s1 two-term error decreasing {}", fmt_list(&errs)),
        errs.windows(2).all(|w| w[1] < w[0]),
    ));
    let lead: Vec<f64> = s1.iter().map(|s| (s.s1_leading_ratio - 1.0).abs()).collect();
    out.push(Check::holds(
        g,
        format!("p={p} q1={q1} s1 lambda^(1/(p-1))/n -> 1 {}", fmt_list(&lead)),
        lead.windows(2).all(|w| w[1] < w[0]),
    ));
    let r4 = cor4_sample(&reduced, 1e4)?.s2_ratio;
    let r16 = cor4_sample(&reduced, 1e16)?.s2_ratio;
    out.push(Check::within(g, format!("p={p} q1={q1} s2 ratio at 1e4 in [0.5, 2]"), (r4 - 1.25).abs(), 0.75));
    out.push(Check::within(g, format!("p={p} q1={q1} s2 ratio at 1e16 in [0.9, 1.1]"), (r16 - 1.0).abs(), 0.1));
    Ok(())
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}
