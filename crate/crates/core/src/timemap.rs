//! The canonical blow-up profile `U_p`, the even solution of `U'' = U^p` on
//! (−1, 1) with `U → +∞` at both ends, evaluated through its time map.
//!
//! With `y = U/μ_p` the profile satisfies `F_p(y) = L_p·|x|`, where
//!
//! ```text
//! F_p(y) = ∫₁^y ds / √(s^{p+1} − 1),      F_p(∞) = L_p.
//! ```
//!
//! `F_p` is computed in two pieces, each after a substitution that makes the
//! integrand regular:
//!
//! * head, `1 ≤ s ≤ 2`: `s = 1 + w²`, integrand `2w / √((1+w²)^{p+1} − 1)`,
//!   which tends to `2/√(p+1)` as `w → 0`;
//! * tail, `s ≥ 2`: `s = v^{−k}` with `k = 2/(p−1)`, integrand
//!   `k / √(1 − v^{k(p+1)})`, which tends to `k` as `v → 0`.
//!
//! The tail form is what makes the inverse well conditioned close to the
//! blow-up: `L_p − F_p(y)` is computed directly instead of by cancellation.

use thiserror::Error;

use crate::quad::{integrate, QuadOptions};
use crate::roots::{brent, RootError};
use crate::specfun::{beta, SpecfunError};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum TimemapError {
    #[error("exponent p must satisfy p > 1, got {0}")]
    ExponentDomain(f64),
    #[error("F_p is defined for y >= 1, got {0}")]
    BelowOne(f64),
    #[error("F_p^-1 needs 0 <= z < (1 - 1e-9)·L_p = {limit}, got {z}")]
    InverseRange { z: f64, limit: f64 },
    #[error("the profile is only defined on |x| < 1, got {0}")]
    OutsideInterval(f64),
    #[error("profile value overflows at x = {0}")]
    Overflow(f64),
    #[error("boundary offset delta must lie in (0, 1), got {0}")]
    BadDelta(f64),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Largest admissible `z/L_p` for [`Profile::f_inverse`].
pub const INVERSE_CAP: f64 = 1.0 - 1e-9;

/// Split point of `F_p` between the head and tail substitutions.
const SPLIT_Y: f64 = 2.0;

/// `U_p` together with its constants `μ_p = U_p(0)` and `L_p = F_p(∞)`.
///
/// Immutable after construction; every evaluation method is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    p: f64,
    mu_p: f64,
    l_p: f64,
    /// 2/(p−1), the blow-up exponent.
    k: f64,
    /// F_p(2), computed by the head quadrature.
    head_total: f64,
    /// 2^{−1/k}, the tail variable at the split point.
    v_split: f64,
    quad: QuadOptions,
}

/// A point `y = F_p^{-1}(z)` with `y^{p+1} − 1` kept to full relative precision.
#[derive(Debug, Clone, Copy)]
struct Inverted {
    y: f64,
    y_pow_m1: f64,
}

/// L_p = B((p−1)/(2(p+1)), 1/2) / (p+1).
pub fn time_map_length(p: f64) -> Result<f64, TimemapError> {
    check_p(p)?;
    Ok(beta((p - 1.0) / (2.0 * (p + 1.0)), 0.5)? / (p + 1.0))
}

/// μ_p = (√((p+1)/2)·L_p)^{2/(p−1)}.
pub fn profile_minimum(p: f64, l_p: f64) -> f64 {
    (((p + 1.0) / 2.0).sqrt() * l_p).powf(2.0 / (p - 1.0))
}

fn check_p(p: f64) -> Result<(), TimemapError> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(TimemapError::ExponentDomain(p))
    }
}

/// Builds the profile for exponent `p > 1`.
pub fn make_profile(p: f64) -> Result<Profile, TimemapError> {
    Profile::new(p)
}

impl Profile {
    pub fn new(p: f64) -> Result<Self, TimemapError> {
        let l_p = time_map_length(p)?;
        let mut profile = Self {
            p,
            mu_p: profile_minimum(p, l_p),
            l_p,
            k: 2.0 / (p - 1.0),
            head_total: 0.0,
            v_split: SPLIT_Y.powf(-(p - 1.0) / 2.0),
            quad: QuadOptions::default(),
        };
        profile.head_total = profile.head(1.0);
        Ok(profile)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// μ_p = min U_p = U_p(0).
    pub fn mu_p(&self) -> f64 {
        self.mu_p
    }

    /// L_p = F_p(∞).
    pub fn l_p(&self) -> f64 {
        self.l_p
    }

    // ∫₁^{1+w²} ds/√(s^{p+1}−1)
    fn head(&self, w: f64) -> f64 {
        let p1 = self.p + 1.0;
        let integrand = |omega: f64| {
            if omega == 0.0 {
                return 2.0 / p1.sqrt();
            }
            let w2 = omega * omega;
            2.0 * omega / (p1 * w2.ln_1p()).exp_m1().sqrt()
        };
        integrate(integrand, 0.0, w, self.quad).value
    }

    // ∫_{v^{-k}}^∞ ds/√(s^{p+1}−1)
    fn tail(&self, v: f64) -> f64 {
        let k = self.k;
        let power = k * (self.p + 1.0);
        let integrand = |nu: f64| k / (1.0 - nu.powf(power)).sqrt();
        integrate(integrand, 0.0, v, self.quad).value
    }

    /// F_p(y) = ∫₁^y ds/√(s^{p+1}−1) for y ≥ 1; `F_p(∞) = L_p`.
    pub fn f(&self, y: f64) -> Result<f64, TimemapError> {
        if y.is_nan() || y < 1.0 {
            return Err(TimemapError::BelowOne(y));
        }
        if y == f64::INFINITY {
            return Ok(self.l_p);
        }
        if y <= SPLIT_Y {
            Ok(self.head((y - 1.0).sqrt()))
        } else {
            let v = y.powf(-1.0 / self.k);
            Ok(self.l_p - self.tail(v))
        }
    }

    /// Solves `F_p(y) = z` given both `z` and `gap = L_p − z`.
    fn invert(&self, z: f64, gap: f64) -> Result<Inverted, TimemapError> {
        if z == 0.0 {
            return Ok(Inverted { y: 1.0, y_pow_m1: 0.0 });
        }
        let p1 = self.p + 1.0;
        if z <= self.head_total {
            let w = brent(|w| self.head(w) - z, 0.0, 1.0, 0.0)?;
            let w2 = w * w;
            Ok(Inverted {
                y: 1.0 + w2,
                y_pow_m1: (p1 * w2.ln_1p()).exp_m1(),
            })
        } else {
            let v_split = self.v_split;
            let tail_split = self.tail(v_split);
            let v = if gap >= tail_split {
                v_split
            } else {
                brent(|v| self.tail(v) - gap, 0.0, v_split, 0.0)?
            };
            let y = v.powf(-self.k);
            Ok(Inverted {
                y,
                y_pow_m1: v.powf(-self.k * p1) - 1.0,
            })
        }
    }

    /// F_p^{-1}(z) for `0 ≤ z ≤ (1 − 1e-9)·L_p`.
    pub fn f_inverse(&self, z: f64) -> Result<f64, TimemapError> {
        let limit = INVERSE_CAP * self.l_p;
        if !(z >= 0.0 && z <= limit) {
            return Err(TimemapError::InverseRange { z, limit });
        }
        Ok(self.invert(z, self.l_p - z)?.y)
    }

    fn invert_at(&self, x: f64) -> Result<Inverted, TimemapError> {
        if !(x.abs() < 1.0) {
            return Err(TimemapError::OutsideInterval(x));
        }
        let ax = x.abs();
        let inv = self.invert(self.l_p * ax, self.l_p * (1.0 - ax))?;
        if !inv.y.is_finite() || !inv.y_pow_m1.is_finite() {
            return Err(TimemapError::Overflow(x));
        }
        Ok(inv)
    }

    /// U_p(x) = μ_p·F_p^{-1}(L_p|x|).
    pub fn eval_u(&self, x: f64) -> Result<f64, TimemapError> {
        let inv = self.invert_at(x)?;
        let u = self.mu_p * inv.y;
        if u.is_finite() {
            Ok(u)
        } else {
            Err(TimemapError::Overflow(x))
        }
    }

    /// U_p'(x) = sign(x)·μ_p·L_p·√((F_p^{-1}(L_p|x|))^{p+1} − 1).
    pub fn eval_u_prime(&self, x: f64) -> Result<f64, TimemapError> {
        let inv = self.invert_at(x)?;
        Ok(self.sign(x) * self.mu_p * self.l_p * inv.y_pow_m1.sqrt())
    }

    /// U_p'(x) from the first integral `U'² = (2/(p+1))(U^{p+1} − μ_p^{p+1})`.
    ///
    /// Algebraically identical to [`Profile::eval_u_prime`]; kept as a
    /// cross-check.
    pub fn eval_u_prime_energy(&self, x: f64) -> Result<f64, TimemapError> {
        let inv = self.invert_at(x)?;
        let p1 = self.p + 1.0;
        let scale = (2.0 / p1).sqrt() * self.mu_p.powf(p1 / 2.0);
        Ok(self.sign(x) * scale * inv.y_pow_m1.sqrt())
    }

    /// (U_p(x), U_p'(x)) from a single inversion.
    pub fn eval_pair(&self, x: f64) -> Result<(f64, f64), TimemapError> {
        let inv = self.invert_at(x)?;
        let u = self.mu_p * inv.y;
        let du = self.sign(x) * self.mu_p * self.l_p * inv.y_pow_m1.sqrt();
        if u.is_finite() && du.is_finite() {
            Ok((u, du))
        } else {
            Err(TimemapError::Overflow(x))
        }
    }

    fn sign(&self, x: f64) -> f64 {
        if x < 0.0 {
            -1.0
        } else if x > 0.0 {
            1.0
        } else {
            0.0
        }
    }

    /// Samples `U_p` and `U_p'` on `grid`.
    pub fn sample(&self, grid: &ProfileGrid) -> Result<ProfileSample, TimemapError> {
        let mut values = Vec::with_capacity(grid.points.len());
        let mut derivs = Vec::with_capacity(grid.points.len());
        for &x in &grid.points {
            let (u, du) = self.eval_pair(x)?;
            values.push(u);
            derivs.push(du);
        }
        Ok(ProfileSample {
            grid: grid.points.clone(),
            values,
            derivs,
            delta: grid.delta,
        })
    }

    /// Max relative residual `|U''_h − U^p| / U^p` over 1001 points of
    /// `[−1+δ, 1−δ]`, with `U''_h` the centered second difference (h = 1e-4).
    pub fn ode_residual(&self, delta: f64) -> Result<f64, TimemapError> {
        const H: f64 = 1e-4;
        let grid = ProfileGrid::uniform(1001, delta)?;
        let mut worst: f64 = 0.0;
        for &x in &grid.points {
            let um = self.eval_u(x - H)?;
            let u0 = self.eval_u(x)?;
            let up = self.eval_u(x + H)?;
            let second = (up - 2.0 * u0 + um) / (H * H);
            let rhs = u0.powf(self.p);
            worst = worst.max(((second - rhs) / rhs).abs());
        }
        Ok(worst)
    }
}

/// Symmetric evaluation grid on `[−1+δ, 1−δ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileGrid {
    points: Vec<f64>,
    delta: f64,
}

/// Default distance kept from the blow-up boundary.
pub const DEFAULT_DELTA: f64 = 1e-3;

impl ProfileGrid {
    /// `n` equispaced points, mirrored so that `x[n−1−i] == −x[i]` exactly.
    pub fn uniform(n: usize, delta: f64) -> Result<Self, TimemapError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(TimemapError::BadDelta(delta));
        }
        let edge = 1.0 - delta;
        let points = match n {
            0 => Vec::new(),
            1 => vec![0.0],
            _ => {
                let step = 2.0 * edge / (n - 1) as f64;
                let mut pts = vec![0.0; n];
                for i in 0..n / 2 {
                    let x = -edge + step * i as f64;
                    pts[i] = x;
                    pts[n - 1 - i] = -x;
                }
                pts
            }
        };
        Ok(Self { points, delta })
    }

    /// Arbitrary abscissae; each must satisfy `|x| ≤ 1 − δ`.
    pub fn from_points(points: Vec<f64>, delta: f64) -> Result<Self, TimemapError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(TimemapError::BadDelta(delta));
        }
        if let Some(&bad) = points.iter().find(|x| !(x.abs() <= 1.0 - delta)) {
            return Err(TimemapError::OutsideInterval(bad));
        }
        Ok(Self { points, delta })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Tabulated `u(x)` and `u'(x)` away from the blow-up boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSample {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    pub delta: f64,
}

impl ProfileSample {
    /// Multiplies values and derivatives by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            derivs: self.derivs.iter().map(|v| c * v).collect(),
            delta: self.delta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Reference constants computed with mpmath (40 digits): L_p from the Beta
    // closed form, cross-checked by direct quadrature of ∫₁^∞ dt/√(t^{p+1}−1).
    const L2: f64 = 2.428_650_647_887_581_611_8;
    const MU2: f64 = 8.847_515_954_227_154_882_1;
    const L3: f64 = 1.311_028_777_146_059_905_2;
    const MU3: f64 = 1.854_074_677_301_371_918_4;
    const L5: f64 = 0.701_091_052_662_727_130_59;
    const MU5: f64 = 1.101_964_302_481_614_331_7;

    #[test]
    fn constants() {
        for (p, l, mu) in [(2.0, L2, MU2), (3.0, L3, MU3), (5.0, L5, MU5)] {
            let prof = make_profile(p).unwrap();
            assert!(rel(prof.l_p(), l) < 1e-13, "L_{p}");
            assert!(rel(prof.mu_p(), mu) < 1e-13, "mu_{p}");
        }
        // μ_3 = √2·L_3
        let prof = make_profile(3.0).unwrap();
        assert!(rel(prof.mu_p(), 2f64.sqrt() * prof.l_p()) < 1e-15);
    }

    #[test]
    fn rejects_bad_exponent() {
        for p in [1.0, 0.5, -3.0, f64::NAN] {
            assert!(matches!(make_profile(p), Err(TimemapError::ExponentDomain(_))));
        }
    }

    #[test]
    fn f_endpoints() {
        let prof = make_profile(3.0).unwrap();
        assert_eq!(prof.f(1.0).unwrap(), 0.0);
        assert_eq!(prof.f(f64::INFINITY).unwrap(), prof.l_p());
        assert!(rel(prof.f(1e12).unwrap(), prof.l_p()) < 1e-12);
        assert!(prof.f(0.999).is_err());
    }

    #[test]
    fn f_at_two_matches_reference() {
        // mpmath quad of ∫₁² ds/√(s⁴−1).
        let prof = make_profile(3.0).unwrap();
        assert!(rel(prof.f(2.0).unwrap(), 0.807_819_333_968_729_018_36) < 1e-13);
    }

    #[test]
    fn head_and_tail_agree_at_split() {
        for p in [1.2, 2.0, 3.0, 5.0, 9.0] {
            let prof = make_profile(p).unwrap();
            let below = prof.f(2.0).unwrap();
            let above = prof.l_p() - prof.tail(prof.v_split);
            assert!((below - above).abs() < 1e-13 * prof.l_p(), "p={p}: {below} vs {above}");
        }
    }

    #[test]
    fn f_is_monotone() {
        let prof = make_profile(2.0).unwrap();
        let mut last = -1.0;
        for i in 0..200 {
            let y = 1.0 + 0.05 * i as f64 + (i as f64 / 20.0).exp() - 1.0;
            let v = prof.f(y).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn inverse_basics() {
        let prof = make_profile(3.0).unwrap();
        assert_eq!(prof.f_inverse(0.0).unwrap(), 1.0);
        // mpmath findroot on the defining integral.
        let y = prof.f_inverse(0.9 * L3).unwrap();
        assert!(rel(y, 7.627_822_975_289_048_646_2) < 1e-11, "{y}");
        assert!(prof.f_inverse(-1e-3).is_err());
        assert!(prof.f_inverse(prof.l_p()).is_err());
        assert!(prof.f_inverse(prof.l_p() * (1.0 - 1e-10)).is_err());
        assert!(prof.f_inverse(prof.l_p() * (1.0 - 1e-8)).is_ok());
    }

    #[test]
    fn inverse_round_trip() {
        let prof = make_profile(3.0).unwrap();
        for i in 0..100 {
            let z = 0.999 * prof.l_p() * i as f64 / 99.0;
            let y = prof.f_inverse(z).unwrap();
            assert!((prof.f(y).unwrap() - z).abs() <= 1e-12 * prof.l_p(), "z={z}");
        }
    }

    #[test]
    fn u_symmetry_and_minimum() {
        let prof = make_profile(3.0).unwrap();
        assert_eq!(prof.eval_u(0.0).unwrap(), prof.mu_p());
        assert_eq!(prof.eval_u(0.5).unwrap(), prof.eval_u(-0.5).unwrap());
        assert_eq!(prof.eval_u_prime(0.0).unwrap(), 0.0);
        assert_eq!(prof.eval_u_prime(0.3).unwrap(), -prof.eval_u_prime(-0.3).unwrap());
        assert!(prof.eval_u(1.0).is_err());
        assert!(prof.eval_u_prime(-1.0).is_err());
    }

    #[test]
    fn derivative_formulas_agree() {
        for p in [2.0, 3.0, 5.0] {
            let prof = make_profile(p).unwrap();
            for x in [0.05, 0.3, 0.7, 0.95, 0.999] {
                let a = prof.eval_u_prime(x).unwrap();
                let b = prof.eval_u_prime_energy(x).unwrap();
                assert!(rel(a, b) < 1e-11, "p={p} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn monotone_in_abs_x() {
        let prof = make_profile(5.0).unwrap();
        let mut last = 0.0;
        for i in 0..100 {
            let x = i as f64 / 100.0;
            let u = prof.eval_u(x).unwrap();
            assert!(u > last || i == 0);
            assert!(prof.eval_u_prime(x).unwrap() >= 0.0);
            last = u;
        }
    }

    #[test]
    fn blow_up_rate_is_bounded() {
        for p in [2.0, 3.0, 5.0] {
            let prof = make_profile(p).unwrap();
            let k = 2.0 / (p - 1.0);
            let scaled: Vec<f64> = (1..=6)
                .map(|j| {
                    let x = 1.0 - 10f64.powi(-j);
                    prof.eval_u(x).unwrap() * (1.0 - x).powf(k)
                })
                .collect();
            // Limit is (√(2(p+1))/(p−1))^{2/(p−1)}.
            let limit = ((2.0 * (p + 1.0)).sqrt() / (p - 1.0)).powf(k);
            // Eventually monotone: successive differences keep one sign.
            let diffs: Vec<f64> = scaled.windows(2).map(|w| w[1] - w[0]).collect();
            let tail = &diffs[2..];
            assert!(tail.iter().all(|d| *d >= -1e-12 * limit) || tail.iter().all(|d| *d <= 1e-12 * limit));
            assert!(rel(*scaled.last().unwrap(), limit) < 1e-6, "p={p}: {scaled:?} vs {limit}");
            assert!(scaled.iter().all(|v| v.is_finite() && *v <= 2.0 * limit));
        }
    }

    #[test]
    fn ode_residual_small_in_interior() {
        let prof = make_profile(3.0).unwrap();
        let r01 = prof.ode_residual(0.1).unwrap();
        let r05 = prof.ode_residual(0.5).unwrap();
        assert!(r01 <= 1e-5, "{r01}");
        assert!(r05 <= r01 * 1.5 + 1e-9, "{r05} vs {r01}");
    }

    #[test]
    fn grid_is_exactly_symmetric() {
        for n in [2, 7, 100, 1001] {
            let g = ProfileGrid::uniform(n, 0.01).unwrap();
            let pts = g.points();
            for i in 0..n {
                assert_eq!(pts[i], -pts[n - 1 - i]);
            }
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(ProfileGrid::uniform(10, 0.0).is_err());
        assert!(ProfileGrid::from_points(vec![0.995], 0.01).is_err());
    }
}
