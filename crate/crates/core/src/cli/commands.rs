use serde::Serialize;

use super::config::{Case, Format, RunConfig, DEFAULT_EXP_R};
use super::output::{emit, fmt_num, render_json, Csv};
use super::CliError;
use crate::bifurcation::{reconstruct, ProblemSpec, Reduced, Root, RootKind, Roots, SolveOptions, Threshold};
use crate::expcase::{solve_exp, ExpProblemSpec};
use crate::norms::{make_norm_table, validate_exponents};
use crate::oracle;
use crate::scenarios::Scenario;
use crate::timemap::Profile;
use crate::verify::{self, VerifyOptions};

fn finish(cfg: &RunConfig, csv: impl FnOnce() -> Csv, json: impl FnOnce() -> Result<String, CliError>) -> Result<(), CliError> {
    let text = match cfg.format() {
        Format::Csv => csv().render(),
        Format::Json => json()?,
    };
    emit(&text, cfg.output.as_deref())
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[derive(Serialize)]
struct NormValues {
    mu_p: f64,
    #[serde(rename = "L_p")]
    l_p: f64,
    n_q1: f64,
    n_q2: f64,
    m_r1: f64,
    m_r2: f64,
}

impl NormValues {
    fn cells(&self) -> [f64; 6] {
        [self.mu_p, self.l_p, self.n_q1, self.n_q2, self.m_r1, self.m_r2]
    }
}

const NORM_KEYS: [&str; 6] = ["mu_p", "L_p", "n_q1", "n_q2", "m_r1", "m_r2"];

#[derive(Serialize)]
struct NormsResult {
    p: f64,
    q1: f64,
    q2: f64,
    r1: f64,
    r2: f64,
    #[serde(flatten)]
    values: NormValues,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<NormValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<NormValues>,
}

pub fn norms(cfg: &RunConfig) -> Result<(), CliError> {
    let p = cfg.p();
    let (q1, q2, r1, r2) = cfg.exponents();
    validate_exponents(p, q1, q2, r1, r2).map_err(|v| CliError::usage(v.to_string()))?;
    let t = make_norm_table(p, q1, q2, r1, r2)?;
    let values = NormValues {
        mu_p: t.mu_p,
        l_p: t.l_p,
        n_q1: t.n_q1,
        n_q2: t.n_q2,
        m_r1: t.m_r1,
        m_r2: t.m_r2,
    };
    let (oracle, deviation) = if cfg.oracle.unwrap_or(false) {
        let o = NormValues {
            mu_p: oracle::profile_minimum(p),
            l_p: oracle::time_map_length(p),
            n_q1: oracle::norm_u_tspace(p, q1),
            n_q2: oracle::norm_u_tspace(p, q2),
            m_r1: oracle::norm_u_prime_tspace(p, r1),
            m_r2: oracle::norm_u_prime_tspace(p, r2),
        };
        let d = NormValues {
            mu_p: rel(values.mu_p, o.mu_p),
            l_p: rel(values.l_p, o.l_p),
            n_q1: rel(values.n_q1, o.n_q1),
            n_q2: rel(values.n_q2, o.n_q2),
            m_r1: rel(values.m_r1, o.m_r1),
            m_r2: rel(values.m_r2, o.m_r2),
        };
        (Some(o), Some(d))
    } else {
        (None, None)
    };
    let result = NormsResult {
        p,
        q1,
        q2,
        r1,
        r2,
        values,
        oracle,
        deviation,
    };
    finish(
        cfg,
        || {
            let mut header: Vec<String> = ["p", "q1", "q2", "r1", "r2"].iter().map(|s| s.to_string()).collect();
            header.extend(NORM_KEYS.iter().map(|s| s.to_string()));
            let mut row: Vec<f64> = vec![p, q1, q2, r1, r2];
            row.extend(result.values.cells());
            if let (Some(o), Some(d)) = (&result.oracle, &result.deviation) {
                header.extend(NORM_KEYS.iter().map(|k| format!("oracle_{k}")));
                header.extend(NORM_KEYS.iter().map(|k| format!("dev_{k}")));
                row.extend(o.cells());
                row.extend(d.cells());
            }
            let refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut csv = Csv::new(&refs);
            csv.comment("blowup norms");
            csv.row(row.into_iter().map(fmt_num).collect());
            csv
        },
        || render_json(cfg, &result, serde_json::json!({})),
    )
}

struct Setup {
    spec: ProblemSpec,
    reduced: Reduced,
    opts: SolveOptions,
    warning: Option<String>,
}

fn setup(cfg: &RunConfig) -> Result<Setup, CliError> {
    let (spec, scenario): (ProblemSpec, Option<Scenario>) = cfg.problem_spec()?;
    let window = cfg.window(&spec, scenario.as_ref())?;
    let reduced = spec.reduce()?;
    let opts = SolveOptions {
        count_cap: cfg.count_cap(),
        grid_points: cfg.scan_points(),
        ..SolveOptions::new(window)
    };
    // Overflow to +inf is handled by the log-form scan, so only real sign or
    // domain problems are reported.
    let warning = reduced.positivity(window, 32).err().filter(|(_, c)| c.value != Some(f64::INFINITY)).map(|(which, c)| {
        format!(
            "positivity scan: {which}(s, t) at (s, t) = ({}, {}) is {}",
            fmt_num(c.s),
            fmt_num(c.t),
            c.reason
        )
    });
    Ok(Setup {
        spec,
        reduced,
        opts,
        warning,
    })
}

fn describe(spec: &ProblemSpec) -> String {
    format!(
        "A = {}, B = {}, p = {}, q1 = {}, q2 = {}, r1 = {}, r2 = {}",
        spec.a,
        spec.b,
        fmt_num(spec.p),
        fmt_num(spec.q1),
        fmt_num(spec.q2),
        fmt_num(spec.r1),
        fmt_num(spec.r2)
    )
}

#[derive(Serialize)]
struct RootRow {
    s: f64,
    s1: f64,
    s2: f64,
    t1: f64,
    t2: f64,
    kind: RootKind,
    residual: f64,
}

impl From<&Root> for RootRow {
    fn from(r: &Root) -> Self {
        let q = r.quadruple;
        Self {
            s: r.s,
            s1: q.s1,
            s2: q.s2,
            t1: q.t1,
            t2: q.t2,
            kind: r.kind,
            residual: r.residual,
        }
    }
}

#[derive(Serialize)]
struct RootFlags<'a> {
    overflow: bool,
    edge_low: bool,
    edge_high: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<&'a str>,
}

fn flag_line(r: &Roots) -> String {
    format!(
        "count={} overflow={} edge_low={} edge_high={}",
        r.count(),
        r.overflow,
        r.edge_low,
        r.edge_high
    )
}

pub fn roots(cfg: &RunConfig) -> Result<(), CliError> {
    let lambda = cfg.lambda()?;
    let st = setup(cfg)?;
    let roots = st.reduced.solve(lambda, &st.opts)?;
    let w = st.opts.window;
    finish(
        cfg,
        || {
            let mut csv = Csv::new(&["s", "s1", "s2", "t1", "t2", "kind", "residual"]);
            csv.comment(format!("blowup roots: {}", describe(&st.spec)));
            csv.comment(format!(
                "lambda={} window=[{}, {}] count_cap={}",
                fmt_num(lambda),
                fmt_num(w.s_min),
                fmt_num(w.s_max),
                st.opts.count_cap
            ));
            if let Some(msg) = &st.warning {
                csv.comment(format!("warning: {msg}"));
            }
            for r in &roots.roots {
                let q = r.quadruple;
                let mut cells: Vec<String> = [r.s, q.s1, q.s2, q.t1, q.t2].into_iter().map(fmt_num).collect();
                cells.push(r.kind.as_str().into());
                cells.push(fmt_num(r.residual));
                csv.row(cells);
            }
            csv.trailer(flag_line(&roots));
            csv
        },
        || {
            let rows: Vec<RootRow> = roots.roots.iter().map(RootRow::from).collect();
            render_json(
                cfg,
                serde_json::json!({ "lambda": lambda, "count": roots.count(), "roots": rows }),
                RootFlags {
                    overflow: roots.overflow,
                    edge_low: roots.edge_low,
                    edge_high: roots.edge_high,
                    warning: st.warning.as_deref(),
                },
            )
        },
    )
}

#[derive(Serialize)]
struct SweepPoint {
    lambda: f64,
    count: usize,
    overflow: bool,
    edge_low: bool,
    edge_high: bool,
    roots: Vec<BranchPoint>,
}

#[derive(Serialize)]
struct BranchPoint {
    s: f64,
    kind: RootKind,
}

pub fn sweep(cfg: &RunConfig, threads: usize) -> Result<(), CliError> {
    let lambdas = cfg.lambda_grid()?;
    let st = setup(cfg)?;
    let diagram = st.reduced.sweep(&lambdas, &st.opts, threads)?;
    let w = st.opts.window;
    let threshold_cells = |t: &Threshold| {
        format!("{},{},{},{}", fmt_num(t.lambda), t.count_below, t.count_above, t.reliable)
    };
    finish(
        cfg,
        || {
            let mut csv = Csv::new(&["lambda", "branch_index", "s", "kind"]);
            csv.comment(format!("blowup sweep: {}", describe(&st.spec)));
            csv.comment(format!(
                "window=[{}, {}] count_cap={} points={}",
                fmt_num(w.s_min),
                fmt_num(w.s_max),
                st.opts.count_cap,
                lambdas.len()
            ));
            if let Some(msg) = &st.warning {
                csv.comment(format!("warning: {msg}"));
            }
            for r in &diagram.roots_per_lambda {
                for (i, root) in r.roots.iter().enumerate() {
                    csv.row(vec![fmt_num(r.lambda), i.to_string(), fmt_num(root.s), root.kind.as_str().into()]);
                }
            }
            csv.trailer("counts");
            csv.trailer("lambda,count,overflow,edge_low,edge_high");
            for r in &diagram.roots_per_lambda {
                csv.trailer(format!("{},{},{},{},{}", fmt_num(r.lambda), r.count(), r.overflow, r.edge_low, r.edge_high));
            }
            csv.trailer("thresholds");
            csv.trailer("lambda,count_below,count_above,reliable");
            for t in &diagram.thresholds {
                csv.trailer(threshold_cells(t));
            }
            csv
        },
        || {
            let points: Vec<SweepPoint> = diagram
                .roots_per_lambda
                .iter()
                .map(|r| SweepPoint {
                    lambda: r.lambda,
                    count: r.count(),
                    overflow: r.overflow,
                    edge_low: r.edge_low,
                    edge_high: r.edge_high,
                    roots: r.roots.iter().map(|x| BranchPoint { s: x.s, kind: x.kind }).collect(),
                })
                .collect();
            let any_overflow = points.iter().any(|p| p.overflow);
            let any_edge = points.iter().any(|p| p.edge_low || p.edge_high);
            render_json(
                cfg,
                serde_json::json!({ "points": points, "thresholds": diagram.thresholds }),
                serde_json::json!({ "any_overflow": any_overflow, "any_edge": any_edge, "warning": st.warning }),
            )
        },
    )
}

#[derive(Serialize)]
struct Sampled<'a> {
    x: &'a [f64],
    u: &'a [f64],
    u_prime: &'a [f64],
}

fn sample_csv(csv: &mut Csv, x: &[f64], u: &[f64], du: &[f64]) {
    for i in 0..x.len() {
        csv.row(vec![fmt_num(x[i]), fmt_num(u[i]), fmt_num(du[i])]);
    }
}

pub fn eval(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.case == Some(Case::Exp) {
        return exp(cfg);
    }
    let lambda = cfg.lambda()?;
    let st = setup(cfg)?;
    let roots = st.reduced.solve(lambda, &st.opts)?;
    let counted: Vec<&Root> = roots.roots.iter().filter(|r| r.kind != RootKind::WindowEdge).collect();
    let index = cfg.root_index.unwrap_or(0);
    let Some(root) = counted.get(index) else {
        let list: Vec<String> = counted.iter().enumerate().map(|(i, r)| format!("{i}: s = {}", fmt_num(r.s))).collect();
        let avail = if list.is_empty() { "none".to_string() } else { list.join(", ") };
        return Err(CliError::usage(format!("root index {index} out of range; available roots: {avail}")));
    };
    let grid = cfg.sample_grid()?;
    let profile = Profile::new(st.spec.p)?;
    let sample = reconstruct(&profile, st.reduced.table(), root.s, &grid)?;
    finish(
        cfg,
        || {
            let mut csv = Csv::new(&["x", "u", "u_prime"]);
            csv.comment(format!("blowup eval: {}", describe(&st.spec)));
            csv.comment(format!(
                "lambda={} root_index={} s={} kind={}",
                fmt_num(lambda),
                index,
                fmt_num(root.s),
                root.kind.as_str()
            ));
            sample_csv(&mut csv, &sample.grid, &sample.values, &sample.derivs);
            csv
        },
        || {
            render_json(
                cfg,
                serde_json::json!({
                    "lambda": lambda,
                    "root_index": index,
                    "root": RootRow::from(*root),
                    "sample": Sampled { x: &sample.grid, u: &sample.values, u_prime: &sample.derivs },
                }),
                serde_json::json!({}),
            )
        },
    )
}

pub fn exp(cfg: &RunConfig) -> Result<(), CliError> {
    let lambda = cfg.lambda()?;
    let r = (cfg.r1.unwrap_or(DEFAULT_EXP_R), cfg.r2.unwrap_or(DEFAULT_EXP_R));
    let a = cfg.a.as_deref().unwrap_or("1");
    let b = cfg.b.as_deref().unwrap_or("1");
    if cfg.scenario.is_some() {
        return Err(CliError::usage("scenarios do not apply to the exponential case"));
    }
    let spec = ExpProblemSpec::parse(r, a, b, cfg.binding(), lambda)?;
    let grid = cfg.sample_grid()?;
    let sol = solve_exp(&spec, &grid)?;
    let residual = sol.residual(grid.points())?;
    let s = &sol.sample;
    finish(
        cfg,
        || {
            let mut csv = Csv::new(&["x", "u", "u_prime"]);
            csv.comment(format!(
                "blowup exp: A = {}, B = {}, r1 = {}, r2 = {}, lambda = {}",
                spec.a,
                spec.b,
                fmt_num(spec.r1),
                fmt_num(spec.r2),
                fmt_num(lambda)
            ));
            csv.comment(format!(
                "shift={} norm_r1={} norm_r2={} A={} B={} residual={}",
                fmt_num(sol.shift),
                fmt_num(sol.norms.0),
                fmt_num(sol.norms.1),
                fmt_num(sol.coefficients.0),
                fmt_num(sol.coefficients.1),
                fmt_num(residual)
            ));
            sample_csv(&mut csv, &s.grid, &s.values, &s.derivs);
            csv
        },
        || {
            render_json(
                cfg,
                serde_json::json!({
                    "lambda": lambda,
                    "shift": sol.shift,
                    "mu_lambda": sol.profile.mu_lambda,
                    "norm_r1": sol.norms.0,
                    "norm_r2": sol.norms.1,
                    "A": sol.coefficients.0,
                    "B": sol.coefficients.1,
                    "residual": residual,
                    "sample": Sampled { x: &s.grid, u: &s.values, u_prime: &s.derivs },
                }),
                serde_json::json!({}),
            )
        },
    )
}

/// Returns whether every check passed.
pub fn verify(cfg: &RunConfig) -> Result<bool, CliError> {
    let mut opts = VerifyOptions::default();
    if let Some(p) = cfg.p {
        opts.ps = vec![p];
    }
    opts.perturb_norms = cfg.perturb_norms.unwrap_or(0.0);
    opts.scenario = cfg.scenario;
    opts.asymptotics = cfg.asymptotics.unwrap_or(false);
    let report = verify::run(&opts)?;
    let passed = report.passed();
    for c in report.failures() {
        eprintln!("FAILED [{}] {}: {} > {}", c.group, c.name, fmt_num(c.measured), fmt_num(c.allowed));
    }
    finish(
        cfg,
        || {
            let mut csv = Csv::new(&["group", "name", "measured", "allowed", "passed"]);
            csv.comment("blowup verify");
            for c in &report.checks {
                csv.row(vec![
                    c.group.into(),
                    format!("\"{}\"", c.name.replace('"', "\"\"")),
                    fmt_num(c.measured),
                    fmt_num(c.allowed),
                    c.passed.to_string(),
                ]);
            }
            csv.trailer(format!(
                "passed={} checks={} failures={}",
                passed,
                report.checks.len(),
                report.failures().count()
            ));
            csv
        },
        || {
            render_json(
                cfg,
                &report.checks,
                serde_json::json!({ "passed": passed, "failures": report.failures().count() }),
            )
        },
    )?;
    Ok(passed)
}
