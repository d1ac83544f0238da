//! Run configuration: a flat JSON document whose fields can each be
//! overridden by the command-line flag of the same name.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::bifurcation::{ProblemSpec, Window, DEFAULT_COUNT_CAP, DEFAULT_GRID_POINTS};
use crate::exprdsl::ParamBinding;
use crate::scenarios::{Scenario, ScenarioName};
use crate::timemap::{ProfileGrid, DEFAULT_DELTA};
use crate::verify::default_exponents;

pub const DEFAULT_P: f64 = 3.0;
pub const DEFAULT_LAMBDA_N: usize = 33;
pub const DEFAULT_SAMPLE_POINTS: usize = 201;
pub const DEFAULT_EXP_R: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    Power,
    Exp,
}

/// Every setting a subcommand may read. Unset fields fall back to the
/// documented defaults when resolved.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<Spacing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Not echoed into JSON output, so results do not depend on where they are written.
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturb_norms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotics: Option<bool>,
}

fn parse_param(src: &str) -> Result<(String, f64), String> {
    let (k, v) = src.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{src}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value in `{src}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Flags shared by all subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON configuration file; flags override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Power case or exponential case (eval only).
    #[arg(long, value_enum)]
    pub case: Option<Case>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q1: Option<f64>,
    #[arg(long)]
    pub q2: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    /// Coefficient A(s, t).
    #[arg(long = "A", value_name = "EXPR")]
    pub a: Option<String>,
    /// Coefficient B(s, t).
    #[arg(long = "B", value_name = "EXPR")]
    pub b: Option<String>,
    /// Named parameter, repeatable: `--param a=1`.
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Built-in problem: cor1, cor2, cor3 or cor4.
    #[arg(long)]
    pub scenario: Option<ScenarioName>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub lambda_n: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    #[arg(long)]
    pub s_min: Option<f64>,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub count_cap: Option<usize>,
    /// Points of the log-spaced root scan.
    #[arg(long)]
    pub scan_points: Option<usize>,
    /// Points of the x-grid for sampled solutions.
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Distance of the x-grid from the blow-up points ±1.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub root_index: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// norms: add quadrature values and relative deviations.
    #[arg(long)]
    pub oracle: bool,
    /// verify: scale every closed-form norm by 1 + EPS.
    #[arg(long, value_name = "EPS")]
    pub perturb_norms: Option<f64>,
    /// verify: add the large-lambda trend checks.
    #[arg(long)]
    pub asymptotics: bool,
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))
}

impl ConfigArgs {
    /// The config file (if any) with every given flag applied on top.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! over {
            ($($f:ident),*) => { $( if self.$f.is_some() { c.$f = self.$f.clone(); } )* };
        }
        over!(case, p, q1, q2, r1, r2, a, b, scenario, lambda, lambda_min, lambda_max, lambda_n, spacing);
        over!(s_min, s_max, count_cap, scan_points, grid_n, delta, root_index, format, output, perturb_norms);
        if self.oracle {
            c.oracle = Some(true);
        }
        if self.asymptotics {
            c.asymptotics = Some(true);
        }
        if !self.params.is_empty() {
            let map = c.params.get_or_insert_with(BTreeMap::new);
            for (k, v) in &self.params {
                map.insert(k.clone(), *v);
            }
        }
        Ok(c)
    }
}

/// What the power-case commands solve: a catalog scenario or user coefficients.
pub enum Problem {
    Scenario(Scenario),
    Custom,
}

impl RunConfig {
    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn p(&self) -> f64 {
        self.p.unwrap_or(DEFAULT_P)
    }

    /// `(q1, q2, r1, r2)`, each defaulting to an interior point for `p`.
    pub fn exponents(&self) -> (f64, f64, f64, f64) {
        let d = default_exponents(self.p());
        (self.q1.unwrap_or(d.0), self.q2.unwrap_or(d.1), self.r1.unwrap_or(d.2), self.r2.unwrap_or(d.3))
    }

    pub fn binding(&self) -> ParamBinding {
        self.params.clone().unwrap_or_default()
    }

    fn problem(&self) -> Result<Problem, CliError> {
        let custom = self.a.is_some() || self.b.is_some();
        match (self.scenario, custom) {
            (Some(_), true) => Err(CliError::usage("give either a scenario or A/B, not both")),
            (None, false) => Err(CliError::usage("a problem needs either --scenario or --A and --B")),
            (Some(ScenarioName::Cor2), false) => {
                let params = self.binding();
                let get = |k: &str| params.get(k).copied().unwrap_or(1.0);
                Ok(Problem::Scenario(Scenario::cor2(get("a"), get("b"))))
            }
            (Some(name), false) => Ok(Problem::Scenario(Scenario::new(name))),
            (None, true) => Ok(Problem::Custom),
        }
    }

    /// The problem instance plus the scenario it came from, if any.
    pub fn problem_spec(&self) -> Result<(ProblemSpec, Option<Scenario>), CliError> {
        let p = self.p();
        let exps = self.exponents();
        match self.problem()? {
            Problem::Scenario(sc) => Ok((sc.spec(p, exps)?, Some(sc))),
            Problem::Custom => {
                let (Some(a), Some(b)) = (&self.a, &self.b) else {
                    return Err(CliError::usage("both --A and --B are required"));
                };
                Ok((ProblemSpec::parse(p, exps, a, b, self.binding())?, None))
            }
        }
    }

    /// The scan window: explicit bounds win, then the scenario's
    /// recommendation, then `(1e-6, 1e6)·‖U_p‖_{q1}`.
    pub fn window(&self, spec: &ProblemSpec, scenario: Option<&Scenario>) -> Result<Window, CliError> {
        let table = spec.norm_table()?;
        let base = match scenario {
            Some(sc) => sc.recommended_window(&table),
            None => Window::around(&table),
        };
        Ok(Window::new(self.s_min.unwrap_or(base.s_min), self.s_max.unwrap_or(base.s_max))?)
    }

    pub fn count_cap(&self) -> usize {
        self.count_cap.unwrap_or(DEFAULT_COUNT_CAP)
    }

    pub fn scan_points(&self) -> usize {
        self.scan_points.unwrap_or(DEFAULT_GRID_POINTS)
    }

    pub fn lambda(&self) -> Result<f64, CliError> {
        let l = self.lambda.ok_or_else(|| CliError::usage("--lambda is required"))?;
        if !(l > 0.0 && l.is_finite()) {
            return Err(CliError::usage(format!("lambda must be positive, got {l}")));
        }
        Ok(l)
    }

    pub fn lambda_grid(&self) -> Result<Vec<f64>, CliError> {
        let (Some(lo), Some(hi)) = (self.lambda_min, self.lambda_max) else {
            return Err(CliError::usage("--lambda-min and --lambda-max are required"));
        };
        let n = self.lambda_n.unwrap_or(DEFAULT_LAMBDA_N);
        lambda_grid(lo, hi, n, self.spacing.unwrap_or(Spacing::Log))
    }

    pub fn sample_grid(&self) -> Result<ProfileGrid, CliError> {
        let n = self.grid_n.unwrap_or(DEFAULT_SAMPLE_POINTS);
        Ok(ProfileGrid::uniform(n, self.delta.unwrap_or(DEFAULT_DELTA))?)
    }
}

/// `n` values from `lo` to `hi` inclusive. Log spacing is uniform in
/// `log10 λ`; exponents that land on integers give exact powers of ten.
pub fn lambda_grid(lo: f64, hi: f64, n: usize, spacing: Spacing) -> Result<Vec<f64>, CliError> {
    if !(lo > 0.0 && hi.is_finite() && hi > lo) {
        return Err(CliError::usage(format!("need 0 < lambda-min < lambda-max, got [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(CliError::usage("lambda-n must be at least 2"));
    }
    let step = |a: f64, b: f64, i: usize| a + (b - a) * i as f64 / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n)
        .map(|i| match spacing {
            Spacing::Linear => step(lo, hi, i),
            Spacing::Log => {
                let e = step(lo.log10(), hi.log10(), i);
                let k = e.round();
                if (e - k).abs() < 1e-12 {
                    format!("1e{k}").parse().unwrap_or(10f64.powf(e))
                } else {
                    10f64.powf(e)
                }
            }
        })
        .collect();
    out[0] = lo;
    out[n - 1] = hi;
    if out.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CliError::usage("lambda grid is not strictly increasing; use fewer points"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_hits_powers_of_ten() {
        let g = lambda_grid(1e-2, 1e2, 5, Spacing::Log).unwrap();
        assert_eq!(g, vec![1e-2, 1e-1, 1.0, 1e1, 1e2]);
        let g = lambda_grid(1.0, 2.0, 3, Spacing::Linear).unwrap();
        assert_eq!(g, vec![1.0, 1.5, 2.0]);
        assert!(lambda_grid(2.0, 1.0, 3, Spacing::Log).is_err());
    }

    #[test]
    fn flags_override_file_fields() {
        let file: RunConfig = serde_json::from_str(r#"{"p": 2, "A": "1", "lambda": 3, "params": {"a": 1}}"#).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        let args = ConfigArgs {
            config: Some(path),
            lambda: Some(5.0),
            params: vec![("b".into(), 2.0)],
            ..Default::default()
        };
        let c = args.resolve().unwrap();
        assert_eq!((c.p, c.lambda, c.a.as_deref()), (Some(2.0), Some(5.0), Some("1")));
        assert_eq!(c.params.unwrap().len(), 2);
        assert!(serde_json::from_str::<RunConfig>(r#"{"lamda": 1}"#).is_err());
    }
}
