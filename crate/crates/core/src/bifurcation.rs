//! Reduction of the nonlocal problem to one scalar equation in `s`.
//!
//! A solution is `u = (s/‖U_p‖_{q1})·U_p` where `s > 0` solves
//!
//! ```text
//! g(s) = s^{1-p} A(s, (m_r1/n_q1) s) / B((n_q2/n_q1) s, (m_r2/n_q1) s) = λ n_q1^{1-p}
//! ```
//!
//! with `n_q = ‖U_p‖_q` and `m_r = ‖U_p'‖_r`. Roots are searched on a finite
//! window `[s_min, s_max]` in the variable `u = ln s`, using
//! `h(u) = ln A − ln B + (1−p)u − ln(λ n_q1^{1-p})`, which stays finite over
//! many more decades than `g` itself.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exprdsl::{positivity_scan, BoundExpr, CoeffExpr, Counterexample, EvalError, ParamBinding, ParseError};
use crate::norms::{make_norm_table, validate_exponents, NormError, NormTable, ViolationReport};
use crate::roots::{brent, minimize};
use crate::timemap::{Profile, ProfileGrid, ProfileSample, TimemapError};

/// Names bound automatically from the problem data.
pub const RESERVED_PARAMS: [&str; 5] = ["p", "q1", "q2", "r1", "r2"];

#[derive(Debug, Error)]
pub enum BifurcationError {
    #[error(transparent)]
    Exponents(#[from] ViolationReport),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Timemap(#[from] TimemapError),
    #[error("cannot parse {which}: {source}")]
    Parse {
        which: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("{which}: {source}")]
    Eval {
        which: &'static str,
        #[source]
        source: EvalError,
    },
    #[error("{which} = {value} at (s, t) = ({s}, {t}) is not positive")]
    NotPositive { which: &'static str, s: f64, t: f64, value: f64 },
    #[error("A and B both overflow at s = {s}; g(s) is indeterminate")]
    Indeterminate { s: f64 },
    #[error("g({s}) = {value} is not a finite positive number")]
    NonFinite { s: f64, value: f64 },
    #[error("parameter `{0}` is reserved and bound from the exponents")]
    ReservedParam(String),
    #[error("invalid window [{0}, {1}]: need 0 < s_min < s_max")]
    BadWindow(f64, f64),
    #[error("lambda must be positive and finite, got {0}")]
    BadLambda(f64),
    #[error("lambda grid must be strictly increasing and positive")]
    BadLambdaGrid,
    #[error("count cap and grid size must be at least 1 and 3")]
    BadOptions,
    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
}

/// One instance of the nonlocal problem, without λ.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub p: f64,
    pub q1: f64,
    pub q2: f64,
    pub r1: f64,
    pub r2: f64,
    pub a: CoeffExpr,
    pub b: CoeffExpr,
    /// User parameters; `p, q1, q2, r1, r2` are added on binding.
    pub params: ParamBinding,
}

impl ProblemSpec {
    pub fn new(
        p: f64,
        (q1, q2, r1, r2): (f64, f64, f64, f64),
        a: CoeffExpr,
        b: CoeffExpr,
        params: ParamBinding,
    ) -> Result<Self, BifurcationError> {
        validate_exponents(p, q1, q2, r1, r2)?;
        if let Some(name) = params.keys().find(|k| RESERVED_PARAMS.contains(&k.as_str())) {
            return Err(BifurcationError::ReservedParam(name.clone()));
        }
        Ok(Self {
            p,
            q1,
            q2,
            r1,
            r2,
            a,
            b,
            params,
        })
    }

    pub fn parse(
        p: f64,
        exponents: (f64, f64, f64, f64),
        a: &str,
        b: &str,
        params: ParamBinding,
    ) -> Result<Self, BifurcationError> {
        let a = CoeffExpr::parse(a).map_err(|source| BifurcationError::Parse { which: "A", source })?;
        let b = CoeffExpr::parse(b).map_err(|source| BifurcationError::Parse { which: "B", source })?;
        Self::new(p, exponents, a, b, params)
    }

    pub fn binding(&self) -> ParamBinding {
        let mut all = self.params.clone();
        for (k, v) in RESERVED_PARAMS.iter().zip([self.p, self.q1, self.q2, self.r1, self.r2]) {
            all.insert(k.to_string(), v);
        }
        all
    }

    pub fn norm_table(&self) -> Result<NormTable, BifurcationError> {
        Ok(make_norm_table(self.p, self.q1, self.q2, self.r1, self.r2)?)
    }

    /// Binds the coefficients and computes the norm table.
    pub fn reduce(&self) -> Result<Reduced, BifurcationError> {
        let table = self.norm_table()?;
        Reduced::new(self, table)
    }
}

/// `(s1, s2, t1, t2)` with `s1/n_q1 = s2/n_q2 = t1/m_r1 = t2/m_r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadruple {
    pub s1: f64,
    pub s2: f64,
    pub t1: f64,
    pub t2: f64,
}

pub fn lift_quadruple(table: &NormTable, s: f64) -> Quadruple {
    let k = s / table.n_q1;
    Quadruple {
        s1: s,
        s2: k * table.n_q2,
        t1: k * table.m_r1,
        t2: k * table.m_r2,
    }
}

/// Samples `u = (s/n_q1)·U_p` and its derivative.
pub fn reconstruct(
    profile: &Profile,
    table: &NormTable,
    s: f64,
    grid: &ProfileGrid,
) -> Result<ProfileSample, TimemapError> {
    Ok(profile.sample(grid)?.scaled(s / table.n_q1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootKind {
    /// `g − target` changes sign.
    Transversal,
    /// `g − target` touches zero without a resolvable sign change.
    Tangential,
    /// `g − target` is within tolerance at a window endpoint; the actual root
    /// may lie outside.
    WindowEdge,
}

impl RootKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RootKind::Transversal => "transversal",
            RootKind::Tangential => "tangential",
            RootKind::WindowEdge => "window-edge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub s: f64,
    pub kind: RootKind,
    /// `|g(s)/(λ n_q1^{1-p}) − 1|`.
    pub residual: f64,
    pub quadruple: Quadruple,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub s_min: f64,
    pub s_max: f64,
}

impl Window {
    pub fn new(s_min: f64, s_max: f64) -> Result<Self, BifurcationError> {
        if !(s_min > 0.0 && s_max > s_min && s_max.is_finite()) {
            return Err(BifurcationError::BadWindow(s_min, s_max));
        }
        Ok(Self { s_min, s_max })
    }

    /// `(1e-6, 1e6)·n_q1`.
    pub fn around(table: &NormTable) -> Self {
        Self {
            s_min: 1e-6 * table.n_q1,
            s_max: 1e6 * table.n_q1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub window: Window,
    pub count_cap: usize,
    pub grid_points: usize,
    /// Largest `|h|` accepted as a touching root.
    pub tangential_tol: f64,
}

pub const DEFAULT_COUNT_CAP: usize = 64;
pub const DEFAULT_GRID_POINTS: usize = 4096;
pub const DEFAULT_TANGENTIAL_TOL: f64 = 1e-8;

impl SolveOptions {
    pub fn new(window: Window) -> Self {
        Self {
            window,
            count_cap: DEFAULT_COUNT_CAP,
            grid_points: DEFAULT_GRID_POINTS,
            tangential_tol: DEFAULT_TANGENTIAL_TOL,
        }
    }

    fn check(&self) -> Result<(), BifurcationError> {
        Window::new(self.window.s_min, self.window.s_max)?;
        if self.count_cap < 1 || self.grid_points < 3 {
            return Err(BifurcationError::BadOptions);
        }
        Ok(())
    }
}

/// Roots for one λ, ascending in `s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Roots {
    pub lambda: f64,
    pub roots: Vec<Root>,
    /// More roots were found than `count_cap`; only the smallest are kept.
    pub overflow: bool,
    /// `g − target` changes sign between `s_min/10` and `s_min`.
    pub edge_low: bool,
    /// `g − target` changes sign between `s_max` and `10·s_max`.
    pub edge_high: bool,
}

impl Roots {
    /// Number of roots, not counting window-edge candidates.
    pub fn count(&self) -> usize {
        self.roots.iter().filter(|r| r.kind != RootKind::WindowEdge).count()
    }
}

/// A problem with bound coefficients and its norm table.
#[derive(Debug, Clone)]
pub struct Reduced {
    p: f64,
    table: NormTable,
    a: BoundExpr,
    b: BoundExpr,
}

fn sign(x: f64) -> bool {
    x >= 0.0
}

impl Reduced {
    /// Uses `table` as given, so a perturbed table can be injected.
    pub fn new(spec: &ProblemSpec, table: NormTable) -> Result<Self, BifurcationError> {
        let binding = spec.binding();
        let a = spec.a.bind(&binding).map_err(|source| BifurcationError::Eval { which: "A", source })?;
        let b = spec.b.bind(&binding).map_err(|source| BifurcationError::Eval { which: "B", source })?;
        Ok(Self {
            p: spec.p,
            table,
            a,
            b,
        })
    }

    pub fn table(&self) -> &NormTable {
        &self.table
    }

    /// `λ ‖U_p‖_{q1}^{1-p}`.
    pub fn target(&self, lambda: f64) -> f64 {
        lambda * self.table.n_q1.powf(1.0 - self.p)
    }

    /// `(A(s1, t1), B(s2, t2))` at the lifted quadruple. Overflow to `+∞` is
    /// passed through; non-positive values are errors.
    pub fn coefficients(&self, quad: &Quadruple) -> Result<(f64, f64), BifurcationError> {
        let a = self
            .a
            .eval(quad.s1, quad.t1)
            .map_err(|source| BifurcationError::Eval { which: "A", source })?;
        let b = self
            .b
            .eval(quad.s2, quad.t2)
            .map_err(|source| BifurcationError::Eval { which: "B", source })?;
        if a <= 0.0 {
            return Err(BifurcationError::NotPositive {
                which: "A",
                s: quad.s1,
                t: quad.t1,
                value: a,
            });
        }
        if b <= 0.0 {
            return Err(BifurcationError::NotPositive {
                which: "B",
                s: quad.s2,
                t: quad.t2,
                value: b,
            });
        }
        Ok((a, b))
    }

    /// `g(s)` by the direct formula; errors unless the result is finite and
    /// positive.
    pub fn g(&self, s: f64) -> Result<f64, BifurcationError> {
        let (a, b) = self.coefficients(&lift_quadruple(&self.table, s))?;
        let value = s.powf(1.0 - self.p) * a / b;
        if !(value.is_finite() && value > 0.0) {
            return Err(BifurcationError::NonFinite { s, value });
        }
        Ok(value)
    }

    /// `ln g(e^u)`, allowed to be `±∞` when one coefficient overflows.
    pub fn ln_g(&self, u: f64) -> Result<f64, BifurcationError> {
        let s = u.exp();
        let (a, b) = self.coefficients(&lift_quadruple(&self.table, s))?;
        if a.is_infinite() && b.is_infinite() {
            return Err(BifurcationError::Indeterminate { s });
        }
        Ok(a.ln() - b.ln() + (1.0 - self.p) * u)
    }

    /// The λ for which `s` is a root: `g(s)·n_q1^{p-1}`.
    pub fn lambda_for_root(&self, s: f64) -> Result<f64, BifurcationError> {
        Ok(self.g(s)? * self.table.n_q1.powf(self.p - 1.0))
    }

    /// Relative residuals of the four equations
    /// `x^{1-p} = λ (B(s2,t2)/A(s1,t1)) N^{1-p}` for
    /// `(x, N) ∈ {(s1, n_q1), (s2, n_q2), (t1, m_r1), (t2, m_r2)}`.
    pub fn system_residuals(&self, lambda: f64, quad: &Quadruple) -> Result<[f64; 4], BifurcationError> {
        let (a, b) = self.coefficients(quad)?;
        let common = lambda.ln() + b.ln() - a.ln();
        let t = &self.table;
        let pairs = [(quad.s1, t.n_q1), (quad.s2, t.n_q2), (quad.t1, t.m_r1), (quad.t2, t.m_r2)];
        Ok(pairs.map(|(x, n)| ((1.0 - self.p) * (x.ln() - n.ln()) - common).exp_m1().abs()))
    }

    /// Max over `grid` of `|A u'' − λ B u^p| / max(|A u''|, |λ B u^p|)` for
    /// `u = (s/n_q1)·U_p`, with the norms of `u` taken from the table by
    /// homogeneity and `u'' = (s/n_q1)·U_p^p`.
    pub fn nonlocal_residual(
        &self,
        profile: &Profile,
        lambda: f64,
        s: f64,
        grid: &ProfileGrid,
    ) -> Result<f64, BifurcationError> {
        let quad = lift_quadruple(&self.table, s);
        let (a, b) = self.coefficients(&quad)?;
        let k = s / self.table.n_q1;
        let mut worst: f64 = 0.0;
        for &x in grid.points() {
            let big_u = profile.eval_u(x)?;
            let upp = k * big_u.powf(self.p);
            let lhs = a * upp;
            let rhs = lambda * b * (k * big_u).powf(self.p);
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
        }
        Ok(worst)
    }

    /// Advisory positivity check of `A` and `B` at the arguments the solver
    /// visits for `s` in `window`.
    pub fn positivity(&self, window: Window, n: usize) -> Result<(), (&'static str, Counterexample)> {
        let t = &self.table;
        let (lo, hi) = (window.s_min, window.s_max);
        let r = |c: f64| (lo * c, hi * c);
        positivity_scan(&self.a, (lo, hi), r(t.m_r1 / t.n_q1), n).map_err(|c| ("A", c))?;
        positivity_scan(&self.b, r(t.n_q2 / t.n_q1), r(t.m_r2 / t.n_q1), n).map_err(|c| ("B", c))?;
        Ok(())
    }

    fn make_root(&self, u: f64, kind: RootKind, ln_c: f64) -> Result<Root, BifurcationError> {
        let s = u.exp();
        let residual = (self.ln_g(u)? - ln_c).exp_m1().abs();
        Ok(Root {
            s,
            kind,
            residual,
            quadruple: lift_quadruple(&self.table, s),
        })
    }

    /// All roots of `g(s) = λ n_q1^{1-p}` in the window.
    ///
    /// Works with `h(u) = ln g(e^u) − ln target` on a log-spaced grid. Sign
    /// changes are refined by Brent's method to `|Δs|/s ≤ 1e-12`. At grid-local
    /// extrema of `h` that do not change sign, the extremum is located; if `h`
    /// crosses there, two transversal roots are refined on either side, and if
    /// it only comes within `tangential_tol` of zero, one tangential root is
    /// reported. A run of grid points with `|h| ≤ tangential_tol` counts as one
    /// root, or as a window-edge candidate when the run reaches the window
    /// boundary.
    pub fn solve(&self, lambda: f64, opts: &SolveOptions) -> Result<Roots, BifurcationError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(BifurcationError::BadLambda(lambda));
        }
        opts.check()?;
        let ln_c = self.target(lambda).ln();
        let (u0, u1) = (opts.window.s_min.ln(), opts.window.s_max.ln());
        let n = opts.grid_points;
        let du = (u1 - u0) / (n - 1) as f64;
        let us: Vec<f64> = (0..n).map(|i| if i == n - 1 { u1 } else { u0 + du * i as f64 }).collect();
        let hs = us
            .iter()
            .map(|&u| Ok(self.ln_g(u)? - ln_c))
            .collect::<Result<Vec<f64>, BifurcationError>>()?;

        let mut failure: Option<BifurcationError> = None;
        let mut h = |u: f64| match self.ln_g(u) {
            Ok(v) => v - ln_c,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        let tol = opts.tangential_tol;
        let refine = |h: &mut dyn FnMut(f64) -> f64, a: f64, b: f64| brent(h, a, b, 1e-13).ok();

        // Grid points with |h| ≤ tol are "flat": their sign is noise. Each
        // maximal flat run is resolved from its non-flat neighbours.
        let flat: Vec<bool> = hs.iter().map(|v| v.abs() <= tol).collect();
        let mut merged: Vec<(f64, RootKind)> = Vec::new();
        let mut i = 0;
        while i < n {
            if !flat[i] {
                i += 1;
                continue;
            }
            let start = i;
            while i + 1 < n && flat[i + 1] {
                i += 1;
            }
            let end = i;
            i += 1;
            if start == 0 {
                merged.push((us[0], RootKind::WindowEdge));
            }
            if end == n - 1 {
                merged.push((us[n - 1], RootKind::WindowEdge));
            }
            if start == 0 || end == n - 1 {
                continue;
            }
            let (l, r) = (start - 1, end + 1);
            if sign(hs[l]) != sign(hs[r]) {
                if let Some(u) = refine(&mut h, us[l], us[r]) {
                    merged.push((u, RootKind::Transversal));
                }
                continue;
            }
            let sigma = if sign(hs[l]) { 1.0 } else { -1.0 };
            let (um, vm) = minimize(|u| sigma * h(u), us[l], us[r], 1e-12);
            if vm < -tol {
                for (a, b) in [(us[l], um), (um, us[r])] {
                    if let Some(u) = refine(&mut h, a, b) {
                        merged.push((u, RootKind::Transversal));
                    }
                }
            } else if vm <= tol {
                merged.push((um, RootKind::Tangential));
            } else {
                let best = (start..=end).min_by(|&x, &y| hs[x].abs().total_cmp(&hs[y].abs())).unwrap_or(start);
                merged.push((us[best], RootKind::Tangential));
            }
        }

        for i in 0..n - 1 {
            if !flat[i] && !flat[i + 1] && sign(hs[i]) != sign(hs[i + 1]) {
                if let Some(u) = refine(&mut h, us[i], us[i + 1]) {
                    merged.push((u, RootKind::Transversal));
                }
            }
        }

        for i in 1..n - 1 {
            if flat[i - 1] || flat[i] || flat[i + 1] {
                continue;
            }
            let same = sign(hs[i - 1]) == sign(hs[i]) && sign(hs[i]) == sign(hs[i + 1]);
            if !same || !(hs[i].abs() < hs[i - 1].abs() && hs[i].abs() <= hs[i + 1].abs()) {
                continue;
            }
            let sigma = if sign(hs[i]) { 1.0 } else { -1.0 };
            let (um, vm) = minimize(|u| sigma * h(u), us[i - 1], us[i + 1], 1e-12);
            if vm.abs() <= tol {
                merged.push((um, RootKind::Tangential));
            } else if vm < 0.0 {
                for (a, b) in [(us[i - 1], um), (um, us[i + 1])] {
                    if let Some(u) = refine(&mut h, a, b) {
                        merged.push((u, RootKind::Transversal));
                    }
                }
            }
        }

        if let Some(e) = failure {
            return Err(e);
        }

        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        let overflow = merged.len() > opts.count_cap;
        merged.truncate(opts.count_cap);
        let roots = merged
            .into_iter()
            .map(|(u, kind)| self.make_root(u, kind, ln_c))
            .collect::<Result<Vec<_>, _>>()?;

        let probe = |edge: usize, inner: usize, outward: f64| -> bool {
            let beyond = us[edge] + outward * std::f64::consts::LN_10;
            let value = match self.ln_g(beyond) {
                Ok(v) if !v.is_nan() => v - ln_c,
                // Not evaluable outside: extrapolate linearly in ln s.
                _ => hs[edge] + (hs[edge] - hs[inner]) / du * std::f64::consts::LN_10,
            };
            sign(value) != sign(hs[edge])
        };
        Ok(Roots {
            lambda,
            roots,
            overflow,
            edge_low: probe(0, 1, -1.0),
            edge_high: probe(n - 1, n - 2, 1.0),
        })
    }

    /// Solves on every λ of an increasing grid and locates each count change
    /// by bisection in `ln λ` to relative accuracy `1e-9`.
    ///
    /// `threads == 0` uses rayon's default pool size. Results do not depend on
    /// the thread count.
    pub fn sweep(&self, lambdas: &[f64], opts: &SolveOptions, threads: usize) -> Result<BifurcationDiagram, BifurcationError> {
        if lambdas.is_empty() || lambdas.windows(2).any(|w| !(w[1] > w[0])) || !(lambdas[0] > 0.0) {
            return Err(BifurcationError::BadLambdaGrid);
        }
        opts.check()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| BifurcationError::ThreadPool(e.to_string()))?;
        pool.install(|| {
            let per_lambda = lambdas
                .par_iter()
                .map(|&l| self.solve(l, opts))
                .collect::<Result<Vec<_>, _>>()?;
            let pairs: Vec<usize> = (0..lambdas.len().saturating_sub(1))
                .filter(|&i| per_lambda[i].count() != per_lambda[i + 1].count())
                .collect();
            let found = pairs
                .par_iter()
                .map(|&i| {
                    let (lo, hi) = (&per_lambda[i], &per_lambda[i + 1]);
                    let mut out = Vec::new();
                    self.bisect_counts(lo.lambda, lo.count(), hi.lambda, hi.count(), opts, &mut out)?;
                    let reliable = !(lo.overflow || hi.overflow);
                    Ok(out
                        .into_iter()
                        .map(|(lambda, count_below, count_above)| Threshold {
                            lambda,
                            count_below,
                            count_above,
                            reliable,
                        })
                        .collect::<Vec<_>>())
                })
                .collect::<Result<Vec<_>, BifurcationError>>()?;
            Ok(BifurcationDiagram {
                lambda_grid: lambdas.to_vec(),
                roots_per_lambda: per_lambda,
                thresholds: merge_thresholds(found.into_iter().flatten().collect()),
                window: opts.window,
                count_cap: opts.count_cap,
            })
        })
    }

    fn bisect_counts(
        &self,
        lo: f64,
        c_lo: usize,
        hi: f64,
        c_hi: usize,
        opts: &SolveOptions,
        out: &mut Vec<(f64, usize, usize)>,
    ) -> Result<(), BifurcationError> {
        if hi / lo - 1.0 <= THRESHOLD_RTOL {
            out.push(((lo * hi).sqrt(), c_lo, c_hi));
            return Ok(());
        }
        let mid = (lo * hi).sqrt();
        let c_mid = self.solve(mid, opts)?.count();
        if c_mid != c_lo {
            self.bisect_counts(lo, c_lo, mid, c_mid, opts, out)?;
        }
        if c_mid != c_hi {
            self.bisect_counts(mid, c_mid, hi, c_hi, opts, out)?;
        }
        Ok(())
    }
}

pub const THRESHOLD_RTOL: f64 = 1e-9;
/// Count changes closer than this (relative) are reported as one threshold.
pub const THRESHOLD_MERGE_RTOL: f64 = 1e-7;

fn merge_thresholds(mut list: Vec<Threshold>) -> Vec<Threshold> {
    list.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut out: Vec<Threshold> = Vec::new();
    for t in list {
        match out.last_mut() {
            Some(last) if t.lambda / last.lambda - 1.0 <= THRESHOLD_MERGE_RTOL => {
                last.count_above = t.count_above;
                last.reliable &= t.reliable;
            }
            _ => out.push(t),
        }
    }
    out
}

/// A λ at which the number of roots changes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub lambda: f64,
    pub count_below: usize,
    pub count_above: usize,
    /// False when a neighbouring grid λ hit the count cap.
    pub reliable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationDiagram {
    pub lambda_grid: Vec<f64>,
    pub roots_per_lambda: Vec<Roots>,
    pub thresholds: Vec<Threshold>,
    pub window: Window,
    pub count_cap: usize,
}

impl BifurcationDiagram {
    pub fn counts(&self) -> Vec<usize> {
        self.roots_per_lambda.iter().map(Roots::count).collect()
    }
}

/// `g(s)` for `spec` with the given table.
pub fn g_of_s(spec: &ProblemSpec, table: &NormTable, s: f64) -> Result<f64, BifurcationError> {
    Reduced::new(spec, table.clone())?.g(s)
}

pub fn solve_single(
    spec: &ProblemSpec,
    table: &NormTable,
    lambda: f64,
    window: Window,
    count_cap: usize,
) -> Result<Roots, BifurcationError> {
    let opts = SolveOptions {
        count_cap,
        ..SolveOptions::new(window)
    };
    Reduced::new(spec, table.clone())?.solve(lambda, &opts)
}

pub fn sweep(
    spec: &ProblemSpec,
    table: &NormTable,
    lambdas: &[f64],
    window: Window,
    count_cap: usize,
    threads: usize,
) -> Result<BifurcationDiagram, BifurcationError> {
    let opts = SolveOptions {
        count_cap,
        ..SolveOptions::new(window)
    };
    Reduced::new(spec, table.clone())?.sweep(lambdas, &opts, threads)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: &str, b: &str) -> ProblemSpec {
        ProblemSpec::parse(3.0, (0.5, 0.5, 1.0 / 3.0, 1.0 / 3.0), a, b, ParamBinding::new()).unwrap()
    }

    #[test]
    fn constant_coefficients() {
        let r = spec("1", "1").reduce().unwrap();
        let n = r.table().n_q1;
        for s in [1e-3, 0.7, 12.0] {
            assert!((r.g(s).unwrap() / s.powi(-2) - 1.0).abs() < 1e-15);
        }
        let lambda = 2.5;
        let roots = r.solve(lambda, &SolveOptions::new(Window::around(r.table()))).unwrap();
        assert_eq!(roots.count(), 1);
        let want = lambda.powf(-0.5) * n;
        assert!((roots.roots[0].s / want - 1.0).abs() < 1e-12);
        assert_eq!(roots.roots[0].kind, RootKind::Transversal);
        assert!(!roots.overflow && !roots.edge_low && !roots.edge_high);
    }

    #[test]
    fn reserved_and_unbound_params() {
        let mut params = ParamBinding::new();
        params.insert("p".into(), 2.0);
        assert!(matches!(
            ProblemSpec::parse(3.0, (0.5, 0.5, 0.3, 0.3), "s", "1", params),
            Err(BifurcationError::ReservedParam(_))
        ));
        assert!(matches!(spec("s*a", "1").reduce(), Err(BifurcationError::Eval { .. })));
        assert!(matches!(
            ProblemSpec::parse(3.0, (1.0, 0.5, 0.3, 0.3), "s", "1", ParamBinding::new()),
            Err(BifurcationError::Exponents(_))
        ));
    }

    #[test]
    fn lift_is_linear() {
        let t = spec("1", "1").norm_table().unwrap();
        let q = lift_quadruple(&t, t.n_q1);
        assert_eq!((q.s1, q.s2, q.t1, q.t2), (t.n_q1, t.n_q2, t.m_r1, t.m_r2));
        let (a, b) = (lift_quadruple(&t, 0.3), lift_quadruple(&t, 0.6));
        assert_eq!((2.0 * a.s2, 2.0 * a.t1, 2.0 * a.t2), (b.s2, b.t1, b.t2));
    }

    #[test]
    fn exact_touching_is_one_root() {
        // g(s) = e^s s^{-2}: minimum e²/4 at s = 2.
        let r = spec("exp(s)", "1").reduce().unwrap();
        let n = r.table().n_q1;
        let lambda = (std::f64::consts::E / 2.0).powi(2) * n * n;
        let roots = r.solve(lambda, &SolveOptions::new(Window::new(1e-3, 100.0).unwrap())).unwrap();
        assert_eq!(roots.count(), 1, "{roots:?}");
        assert_eq!(roots.roots[0].kind, RootKind::Tangential);
        assert!((roots.roots[0].s - 2.0).abs() < 1e-3);
        let above = r.solve(lambda * (1.0 + 1e-6), &SolveOptions::new(Window::new(1e-3, 100.0).unwrap())).unwrap();
        assert_eq!(above.count(), 2);
        assert!(above.roots.iter().all(|r| r.kind == RootKind::Transversal));
    }

    #[test]
    fn edge_flag_when_root_is_outside() {
        let r = spec("1", "1").reduce().unwrap();
        let n = r.table().n_q1;
        // Root at s = n/√λ = 5n, just beyond s_max = 4n.
        let roots = r.solve(0.04, &SolveOptions::new(Window::new(0.1 * n, 4.0 * n).unwrap())).unwrap();
        assert_eq!(roots.count(), 0);
        assert!(roots.edge_high && !roots.edge_low);
    }
}
