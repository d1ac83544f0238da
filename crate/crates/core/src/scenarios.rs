//! Four coefficient pairs with known answers, used as golden checks of the
//! generic solver.
//!
//! | name | A(s, t)           | B(s, t)   | roots as λ grows |
//! |------|-------------------|-----------|------------------|
//! | cor1 | `s^(p-1)*(1+t)`   | `s+t`     | 0, 1             |
//! | cor2 | `s^p*((t-a)^2+b)` | `s+t`     | 0, 1, 2, 1       |
//! | cor3 | `2+sin(s)`        | `t^(1-p)` | 0, ∞, 0          |
//! | cor4 | `exp(s)`          | `1`       | 0, 1, 2          |
//!
//! Throughout, `n = ‖U_p‖_{q1}`, `n2 = ‖U_p‖_{q2}`, `m1 = ‖U_p'‖_{r1}`,
//! `m2 = ‖U_p'‖_{r2}` and `D = n2 + m2`.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bifurcation::{BifurcationError, ProblemSpec, Reduced, RootKind, Roots, SolveOptions, Window};
use crate::exprdsl::ParamBinding;
use crate::norms::NormTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioName {
    Cor1,
    Cor2,
    Cor3,
    Cor4,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 4] = [ScenarioName::Cor1, ScenarioName::Cor2, ScenarioName::Cor3, ScenarioName::Cor4];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Cor1 => "cor1",
            ScenarioName::Cor2 => "cor2",
            ScenarioName::Cor3 => "cor3",
            ScenarioName::Cor4 => "cor4",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| format!("unknown scenario `{s}` (expected cor1, cor2, cor3 or cor4)"))
    }
}

/// Number of roots predicted for one λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Count {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: ScenarioName,
    pub a_src: &'static str,
    pub b_src: &'static str,
    /// `a` and `b` for cor2 (both 1 by default); empty otherwise.
    pub params: ParamBinding,
}

pub fn catalog() -> Vec<Scenario> {
    ScenarioName::ALL.into_iter().map(Scenario::new).collect()
}

fn ratio_gap(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

impl Scenario {
    pub fn new(name: ScenarioName) -> Self {
        let (a_src, b_src) = match name {
            ScenarioName::Cor1 => ("s^(p-1)*(1+t)", "s+t"),
            ScenarioName::Cor2 => ("s^p*((t-a)^2+b)", "s+t"),
            ScenarioName::Cor3 => ("2+sin(s)", "t^(1-p)"),
            ScenarioName::Cor4 => ("exp(s)", "1"),
        };
        let mut params = ParamBinding::new();
        if name == ScenarioName::Cor2 {
            params.insert("a".into(), 1.0);
            params.insert("b".into(), 1.0);
        }
        Self {
            name,
            a_src,
            b_src,
            params,
        }
    }

    /// cor2 with other `a, b`.
    pub fn cor2(a: f64, b: f64) -> Self {
        let mut sc = Self::new(ScenarioName::Cor2);
        sc.params.insert("a".into(), a);
        sc.params.insert("b".into(), b);
        sc
    }

    fn param(&self, key: &str) -> f64 {
        self.params.get(key).copied().unwrap_or(f64::NAN)
    }

    pub fn spec(&self, p: f64, exponents: (f64, f64, f64, f64)) -> Result<ProblemSpec, BifurcationError> {
        ProblemSpec::parse(p, exponents, self.a_src, self.b_src, self.params.clone())
    }

    /// λ values at which the predicted count changes, ascending.
    ///
    /// cor1 uses `‖U_p'‖_{r1}` in the numerator; one intermediate display of
    /// the closed-form root writes `‖U_p‖_{r1}` instead, which the
    /// derivation does not support.
    pub fn thresholds(&self, t: &NormTable) -> Vec<f64> {
        let p = t.p;
        let d = t.n_q2 + t.m_r2;
        match self.name {
            ScenarioName::Cor1 => vec![t.n_q1.powf(p - 1.0) * t.m_r1 / d],
            ScenarioName::Cor2 => {
                let (a, b) = (self.param("a"), self.param("b"));
                vec![b * t.n_q1.powf(p) / d, (a * a + b) * t.n_q1.powf(p) / d]
            }
            ScenarioName::Cor3 => {
                let base = t.m_r2.powf(p - 1.0);
                vec![base, 3.0 * base]
            }
            ScenarioName::Cor4 => vec![(E / (p - 1.0)).powf(p - 1.0) * t.n_q1.powf(p - 1.0)],
        }
    }

    /// Predicted number of roots on all of `(0, ∞)`.
    pub fn count(&self, t: &NormTable, lambda: f64) -> Count {
        let th = self.thresholds(t);
        Count::Finite(match self.name {
            ScenarioName::Cor1 => usize::from(lambda > th[0]),
            ScenarioName::Cor2 => {
                if lambda < th[0] {
                    0
                } else if lambda == th[0] {
                    1
                } else if lambda < th[1] {
                    2
                } else {
                    1
                }
            }
            ScenarioName::Cor3 => {
                return if (th[0]..=th[1]).contains(&lambda) {
                    Count::Infinite
                } else {
                    Count::Finite(0)
                }
            }
            ScenarioName::Cor4 => {
                if lambda < th[0] {
                    0
                } else if lambda == th[0] {
                    1
                } else {
                    2
                }
            }
        })
    }

    /// Closed-form roots inside `window`, ascending, at most `limit` of them.
    /// `None` for cor4, whose roots have no elementary closed form.
    pub fn roots(&self, t: &NormTable, lambda: f64, window: Window, limit: usize) -> Option<Vec<f64>> {
        let p = t.p;
        let d = t.n_q2 + t.m_r2;
        let mut out: Vec<f64> = match self.name {
            ScenarioName::Cor1 => {
                let den = lambda * d - t.n_q1.powf(p - 1.0) * t.m_r1;
                if den > 0.0 {
                    vec![t.n_q1.powf(p) / den]
                } else {
                    vec![]
                }
            }
            ScenarioName::Cor2 => {
                // ((m1/n) s − a)² + b = λ D / n^p
                let (a, b) = (self.param("a"), self.param("b"));
                let alpha = t.m_r1 / t.n_q1;
                let disc = lambda * d / t.n_q1.powf(p) - b;
                if disc < 0.0 {
                    vec![]
                } else if disc == 0.0 {
                    vec![a / alpha]
                } else {
                    let w = disc.sqrt();
                    [(a - w) / alpha, (a + w) / alpha].into_iter().filter(|&s| s > 0.0).collect()
                }
            }
            ScenarioName::Cor3 => {
                // m2^{p-1} (2 + sin s) = λ
                let sigma = lambda / t.m_r2.powf(p - 1.0) - 2.0;
                if !(-1.0..=1.0).contains(&sigma) {
                    vec![]
                } else {
                    let base = sigma.asin();
                    let mut v = Vec::new();
                    let first = ((window.s_min - PI) / (2.0 * PI)).floor() as i64;
                    let mut k = first.max(-1);
                    while v.len() <= limit + 1 {
                        let turn = 2.0 * PI * k as f64;
                        for s in [base + turn, PI - base + turn] {
                            if s > 0.0 && s >= window.s_min {
                                v.push(s);
                            }
                        }
                        if turn > window.s_max {
                            break;
                        }
                        k += 1;
                    }
                    v.sort_by(f64::total_cmp);
                    v.dedup();
                    v
                }
            }
            ScenarioName::Cor4 => return None,
        };
        out.retain(|&s| s >= window.s_min && s <= window.s_max);
        out.truncate(limit);
        Some(out)
    }

    /// A scan window wide enough that the thresholds above are resolved to
    /// better than `1e-9` relative by the sweep.
    pub fn recommended_window(&self, t: &NormTable) -> Window {
        let n = t.n_q1;
        let (lo, hi) = match self.name {
            // g(s) → m1/D from above like n/(D s): the count change moves by ~n/(m1 s_max).
            ScenarioName::Cor1 => (1e-6 * n, 1e12 * n),
            // The smaller root leaves through s = 0 at the upper threshold.
            ScenarioName::Cor2 => (1e-12 * n, 1e6 * n),
            ScenarioName::Cor3 => (1e-3, 1e5),
            // s1 ~ λ^{-1/(p-1)} n becomes small for large λ.
            ScenarioName::Cor4 => (1e-15 * n, 1e6 * n.max(1.0)),
        };
        Window { s_min: lo, s_max: hi }
    }
}

/// Comparison of the solver with the closed forms at one λ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioCheck {
    pub scenario: ScenarioName,
    pub lambda: f64,
    pub expected: Count,
    pub found: usize,
    pub overflow: bool,
    pub kinds: Vec<RootKind>,
    /// Relative error of each numeric root against the closed form, in order.
    pub root_errors: Vec<f64>,
    pub passed: bool,
    pub message: String,
}

/// Roots within this relative distance of the closed form count as matching.
pub const ROOT_RTOL: f64 = 1e-8;
/// Inside the cor3 band the solver must report at least this many roots.
pub const INFINITE_MIN_ROOTS: usize = 10;

pub fn check_scenario(
    scenario: &Scenario,
    reduced: &Reduced,
    lambda: f64,
    opts: &SolveOptions,
) -> Result<ScenarioCheck, BifurcationError> {
    let table = reduced.table();
    let roots: Roots = reduced.solve(lambda, opts)?;
    let expected = scenario.count(table, lambda);
    let kinds: Vec<RootKind> = roots.roots.iter().map(|r| r.kind).collect();
    let mut problems = Vec::new();
    match expected {
        Count::Finite(n) if roots.count() != n => problems.push(format!("expected {n} roots, found {}", roots.count())),
        Count::Infinite if !(roots.overflow || roots.count() >= INFINITE_MIN_ROOTS) => {
            problems.push(format!("expected many roots, found {}", roots.count()))
        }
        _ => {}
    }
    let mut root_errors = Vec::new();
    if let Some(exact) = scenario.roots(table, lambda, opts.window, opts.count_cap) {
        for (r, e) in roots.roots.iter().zip(&exact) {
            let err = ratio_gap(r.s, *e);
            root_errors.push(err);
            if r.kind == RootKind::Transversal && err > ROOT_RTOL {
                problems.push(format!("root {} differs from {} by {err:e}", r.s, e));
            }
        }
    }
    Ok(ScenarioCheck {
        scenario: scenario.name,
        lambda,
        expected,
        found: roots.count(),
        overflow: roots.overflow,
        kinds,
        root_errors,
        passed: problems.is_empty(),
        message: if problems.is_empty() { "ok".into() } else { problems.join("; ") },
    })
}

/// Large-λ predictions for the two cor4 roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticPrediction {
    pub lambda: f64,
    /// `λ^{-1/(p-1)} n (1 + λ^{-1/(p-1)} n / (p−1))`
    pub s1: f64,
    /// `ln λ + (p−1) ln ln λ`
    pub s2: f64,
}

pub fn cor4_asymptotics(t: &NormTable, lambda: f64) -> AsymptoticPrediction {
    let p = t.p;
    let lead = lambda.powf(-1.0 / (p - 1.0)) * t.n_q1;
    let ll = lambda.ln();
    AsymptoticPrediction {
        lambda,
        s1: lead * (1.0 + lead / (p - 1.0)),
        s2: ll + (p - 1.0) * ll.ln(),
    }
}

/// Numeric cor4 roots against the asymptotic formulas at one λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticSample {
    pub lambda: f64,
    pub s1: f64,
    pub s2: f64,
    pub s1_pred: f64,
    pub s2_pred: f64,
    /// `|s1 − s1_pred| / s1`
    pub s1_rel_error: f64,
    /// `(s2 − ln λ) / ((p−1) ln ln λ)`
    pub s2_ratio: f64,
    /// `s1 λ^{1/(p-1)} / n`
    pub s1_leading_ratio: f64,
}

pub fn cor4_sample(reduced: &Reduced, lambda: f64) -> Result<AsymptoticSample, BifurcationError> {
    let t = reduced.table();
    let p = t.p;
    let window = Scenario::new(ScenarioName::Cor4).recommended_window(t);
    let roots = reduced.solve(lambda, &SolveOptions::new(window))?;
    let pick = |i: usize| roots.roots.get(i).map(|r| r.s).unwrap_or(f64::NAN);
    let (s1, s2) = if roots.count() == 2 { (pick(0), pick(1)) } else { (f64::NAN, f64::NAN) };
    let pred = cor4_asymptotics(t, lambda);
    let ll = lambda.ln();
    Ok(AsymptoticSample {
        lambda,
        s1,
        s2,
        s1_pred: pred.s1,
        s2_pred: pred.s2,
        s1_rel_error: ((s1 - pred.s1) / s1).abs(),
        s2_ratio: (s2 - ll) / ((p - 1.0) * ll.ln()),
        s1_leading_ratio: s1 * lambda.powf(1.0 / (p - 1.0)) / t.n_q1,
    })
}
