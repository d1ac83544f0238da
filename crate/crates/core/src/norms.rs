//! Closed-form Lebesgue norms of `U_p` and `U_p'` on I = (−1, 1).
//!
//! ```text
//! ‖U_p‖_q^q  = √(2/(p+1)) · μ_p^{(2q−p+1)/2} · B((p−2q−1)/(2(p+1)), 1/2)
//! ‖U_p'‖_r^r = (2/(p+1))^{(r+1)/2} · μ_p^{(p+1)(r−1)/2 + 1} · B(((1−r)(p+1)−2)/(2(p+1)), (r+1)/2)
//! ```
//!
//! Both are finite exactly on `0 < q < (p−1)/2` and `0 < r < (p−1)/(p+1)`.
//! The functions here return the plain norms (the 1/q and 1/r powers of the
//! expressions above).

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::specfun::{ln_beta, SpecfunError};
use crate::timemap::{time_map_length, profile_minimum, TimemapError};

/// One failed exponent bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub name: &'static str,
    pub value: f64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// p ≤ 1 or not finite.
    ExponentP,
    /// q or r ≤ 0 or not finite.
    NotPositive,
    /// q ≥ (p−1)/2.
    UAboveBound,
    /// r ≥ (p−1)/(p+1).
    UPrimeAboveBound,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::ExponentP => write!(f, "p = {} must satisfy p > 1", self.value),
            ViolationKind::NotPositive => write!(f, "{} = {} must be > 0", self.name, self.value),
            ViolationKind::UAboveBound => {
                write!(f, "{} ≥ (p−1)/2 ({} = {})", self.name, self.name, self.value)
            }
            ViolationKind::UPrimeAboveBound => {
                write!(f, "{} ≥ (p−1)/(p+1) ({} = {})", self.name, self.name, self.value)
            }
        }
    }
}

/// Every violated bound of `0 < q1, q2 < (p−1)/2`, `0 < r1, r2 < (p−1)/(p+1)`.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "exponent bounds violated: {}", parts.join("; "))
    }
}

impl ViolationReport {
    pub fn names(&self) -> Vec<&'static str> {
        self.violations.iter().map(|v| v.name).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error(transparent)]
    Violation(#[from] ViolationReport),
    #[error(transparent)]
    Timemap(#[from] TimemapError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

fn p_ok(p: f64) -> bool {
    p.is_finite() && p > 1.0
}

fn check_q(name: &'static str, p: f64, q: f64, out: &mut Vec<Violation>) {
    if !(q.is_finite() && q > 0.0) {
        out.push(Violation { name, value: q, kind: ViolationKind::NotPositive });
    } else if p_ok(p) && q >= (p - 1.0) / 2.0 {
        out.push(Violation { name, value: q, kind: ViolationKind::UAboveBound });
    }
}

fn check_r(name: &'static str, p: f64, r: f64, out: &mut Vec<Violation>) {
    if !(r.is_finite() && r > 0.0) {
        out.push(Violation { name, value: r, kind: ViolationKind::NotPositive });
    } else if p_ok(p) && r >= (p - 1.0) / (p + 1.0) {
        out.push(Violation { name, value: r, kind: ViolationKind::UPrimeAboveBound });
    }
}

fn check_p(p: f64, out: &mut Vec<Violation>) {
    if !p_ok(p) {
        out.push(Violation { name: "p", value: p, kind: ViolationKind::ExponentP });
    }
}

/// Accepts iff all four exponents lie strictly inside their integrability
/// ranges. Equality with a bound is rejected.
pub fn validate_exponents(p: f64, q1: f64, q2: f64, r1: f64, r2: f64) -> Result<(), ViolationReport> {
    let mut violations = Vec::new();
    check_p(p, &mut violations);
    check_q("q1", p, q1, &mut violations);
    check_q("q2", p, q2, &mut violations);
    check_r("r1", p, r1, &mut violations);
    check_r("r2", p, r2, &mut violations);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ViolationReport { violations })
    }
}

fn single(check: impl FnOnce(&mut Vec<Violation>)) -> Result<(), NormError> {
    let mut violations = Vec::new();
    check(&mut violations);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ViolationReport { violations }.into())
    }
}

/// ln μ_p, from the Beta closed form of L_p.
fn ln_mu(p: f64) -> Result<f64, NormError> {
    Ok(profile_minimum(p, time_map_length(p)?).ln())
}

/// ln ‖U_p‖_q^q.
pub fn ln_norm_u_pow(p: f64, q: f64) -> Result<f64, NormError> {
    single(|v| {
        check_p(p, v);
        check_q("q", p, q, v);
    })?;
    let p1 = p + 1.0;
    Ok(0.5 * (2.0 / p1).ln()
        + 0.5 * (2.0 * q - p + 1.0) * ln_mu(p)?
        + ln_beta((p - 2.0 * q - 1.0) / (2.0 * p1), 0.5)?)
}

/// ln ‖U_p'‖_r^r.
pub fn ln_norm_u_prime_pow(p: f64, r: f64) -> Result<f64, NormError> {
    single(|v| {
        check_p(p, v);
        check_r("r", p, r, v);
    })?;
    let p1 = p + 1.0;
    Ok(0.5 * (r + 1.0) * (2.0 / p1).ln()
        + (0.5 * p1 * (r - 1.0) + 1.0) * ln_mu(p)?
        + ln_beta(((1.0 - r) * p1 - 2.0) / (2.0 * p1), 0.5 * (r + 1.0))?)
}

/// ‖U_p‖_{L^q(I)} for `0 < q < (p−1)/2`.
pub fn norm_u(p: f64, q: f64) -> Result<f64, NormError> {
    Ok((ln_norm_u_pow(p, q)? / q).exp())
}

/// ‖U_p'‖_{L^r(I)} for `0 < r < (p−1)/(p+1)`.
pub fn norm_u_prime(p: f64, r: f64) -> Result<f64, NormError> {
    Ok((ln_norm_u_prime_pow(p, r)? / r).exp())
}

/// The constants that enter the scalar reduction.
///
/// Entries are plain norms ‖·‖, not the powers ‖·‖^q, ‖·‖^r: the reduction
/// function `g(s)` consumes plain norms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormTable {
    pub p: f64,
    pub q1: f64,
    pub q2: f64,
    pub r1: f64,
    pub r2: f64,
    pub mu_p: f64,
    #[serde(rename = "L_p")]
    pub l_p: f64,
    /// ‖U_p‖_{q1}
    pub n_q1: f64,
    /// ‖U_p‖_{q2}
    pub n_q2: f64,
    /// ‖U_p'‖_{r1}
    pub m_r1: f64,
    /// ‖U_p'‖_{r2}
    pub m_r2: f64,
}

pub fn make_norm_table(p: f64, q1: f64, q2: f64, r1: f64, r2: f64) -> Result<NormTable, NormError> {
    validate_exponents(p, q1, q2, r1, r2)?;
    let l_p = time_map_length(p)?;
    Ok(NormTable {
        p,
        q1,
        q2,
        r1,
        r2,
        mu_p: profile_minimum(p, l_p),
        l_p,
        n_q1: norm_u(p, q1)?,
        n_q2: norm_u(p, q2)?,
        m_r1: norm_u_prime(p, r1)?,
        m_r2: norm_u_prime(p, r2)?,
    })
}

impl NormTable {
    /// Copy with the four norms multiplied by `1 + eps`; used for fault
    /// injection in the verification suite.
    pub fn perturbed(&self, eps: f64) -> Self {
        let f = 1.0 + eps;
        Self {
            n_q1: self.n_q1 * f,
            n_q2: self.n_q2 * f,
            m_r1: self.m_r1 * f,
            m_r2: self.m_r2 * f,
            ..self.clone()
        }
    }

    /// (n_q2/n_q1, m_r1/n_q1, m_r2/n_q1), the common-ratio factors.
    pub fn ratios(&self) -> (f64, f64, f64) {
        (self.n_q2 / self.n_q1, self.m_r1 / self.n_q1, self.m_r2 / self.n_q1)
    }
}
