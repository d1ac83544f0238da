//! Independent numerical routes used to check the closed forms and the
//! time-map evaluation.
//!
//! Nothing in here calls the Beta function, the Gauss–Kronrod integrator or
//! Brent's method: quadrature is double-exponential (tanh-sinh), inversion is
//! plain bisection, and the ODE route is an embedded Runge–Kutta 5(4)
//! integrator. The verification suite and the test targets compare the
//! production paths against these.

use std::f64::consts::FRAC_PI_2;

use crate::timemap::{Profile, TimemapError};

/// Tanh-sinh quadrature of `f` over `[a, b]`.
///
/// `f` receives `(x, x − a, b − x)` with both distances computed without
/// cancellation, so integrands with algebraic endpoint singularities can be
/// written in terms of the distance to the singular end.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    const T_MAX: f64 = 6.5;
    const MAX_LEVEL: u32 = 12;
    let half = 0.5 * (b - a);
    let node = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let cs = s.cosh();
        let weight = FRAC_PI_2 * t.cosh() / (cs * cs);
        if weight == 0.0 || !weight.is_finite() {
            return 0.0;
        }
        let e = (-2.0 * s.abs()).exp();
        let near = half * 2.0 * e / (1.0 + e);
        if near < f64::MIN_POSITIVE {
            return 0.0;
        }
        let far = 2.0 * half - near;
        let (x, da, db) = if t < 0.0 { (a + near, near, far) } else { (b - near, far, near) };
        f(x, da, db) * weight
    };

    let mut h = 1.0;
    let mut sum = node(0.0);
    let mut k = 1.0;
    while k * h <= T_MAX {
        sum += node(k * h) + node(-k * h);
        k += 1.0;
    }
    let mut estimate = h * half * sum;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        while t <= T_MAX {
            sum += node(t) + node(-t);
            t += 2.0 * h;
        }
        let next = h * half * sum;
        if level >= 4 && (next - estimate).abs() <= rel_tol * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

const ORACLE_TOL: f64 = 1e-13;

/// `∫₁^∞ t^α (t^{p+1} − 1)^β dt` by tanh-sinh, for `β > −1` and
/// `α + (p+1)β < −1`.
///
/// `[1, 2]` is integrated directly (tanh-sinh absorbs the `(t−1)^β` end);
/// `[2, ∞)` is mapped by `t = 2/u`, `u = w^m` with `m` chosen so the
/// algebraic decay becomes a bounded integrand on `w ∈ [0, 1]`.
pub fn t_space_integral(p: f64, alpha: f64, beta: f64) -> f64 {
    let p1 = p + 1.0;
    let head = tanh_sinh(
        |t, da, _| t.powf(alpha) * (p1 * da.ln_1p()).exp_m1().powf(beta),
        1.0,
        2.0,
        ORACLE_TOL,
    );
    // t^α (t^{p+1}−1)^β dt = 2^{α+1+(p+1)β} u^e (1 − (u/2)^{p+1})^β du
    let e = -alpha - 2.0 - p1 * beta;
    let m = 1.0 / (e + 1.0);
    let c = 2f64.powf(alpha + 1.0 + p1 * beta) * m;
    let tail = tanh_sinh(
        |w, _, _| {
            let u = w.powf(m);
            c * (1.0 - (0.5 * u).powf(p1)).powf(beta)
        },
        0.0,
        1.0,
        ORACLE_TOL,
    );
    head + tail
}

/// L_p = ∫₁^∞ dt/√(t^{p+1} − 1) by quadrature.
pub fn time_map_length(p: f64) -> f64 {
    t_space_integral(p, 0.0, -0.5)
}

/// μ_p from the quadrature value of L_p.
pub fn profile_minimum(p: f64) -> f64 {
    (((p + 1.0) / 2.0).sqrt() * time_map_length(p)).powf(2.0 / (p - 1.0))
}

/// ‖U_p‖_q via `2∫_{μ_p}^∞ s^q / U'(s) ds` rescaled to `t = s/μ_p`.
pub fn norm_u_tspace(p: f64, q: f64) -> f64 {
    let mu = profile_minimum(p);
    let p1 = p + 1.0;
    let integral = t_space_integral(p, q, -0.5);
    let pow = 2.0 * (p1 / 2.0).sqrt() * mu.powf(q + 1.0 - p1 / 2.0) * integral;
    pow.powf(1.0 / q)
}

/// ‖U_p'‖_r via `2(2/(p+1))^{(r−1)/2} μ_p^{(r−1)(p+1)/2+1} ∫₁^∞ (t^{p+1}−1)^{(r−1)/2} dt`.
pub fn norm_u_prime_tspace(p: f64, r: f64) -> f64 {
    let mu = profile_minimum(p);
    let p1 = p + 1.0;
    let integral = t_space_integral(p, 0.0, 0.5 * (r - 1.0));
    let pow = 2.0 * (2.0 / p1).powf(0.5 * (r - 1.0)) * mu.powf(0.5 * (r - 1.0) * p1 + 1.0) * integral;
    pow.powf(1.0 / r)
}

/// F_p(y) by tanh-sinh, no substitution.
pub fn f_direct(p: f64, y: f64) -> f64 {
    let p1 = p + 1.0;
    let g = |_: f64, da: f64, _: f64| 1.0 / (p1 * da.ln_1p()).exp_m1().sqrt();
    if y <= 2.0 {
        tanh_sinh(g, 1.0, y, ORACLE_TOL)
    } else {
        tanh_sinh(g, 1.0, 2.0, ORACLE_TOL)
            + tanh_sinh(|t, _, _| 1.0 / (t.powf(p1) - 1.0).sqrt(), 2.0, y, ORACLE_TOL)
    }
}

/// F_p^{-1}(z) by bisection on [`f_direct`].
pub fn f_inverse_bisect(p: f64, z: f64) -> f64 {
    let mut lo = 1.0;
    let mut hi = 2.0;
    while f_direct(p, hi) < z {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f_direct(p, mid) < z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `2∫₀^{1−δ} f(x)^power dx` plus a power-law tail `f ≈ C(1−x)^{−κ}` fitted at
/// `x = 1 − δ`. Needs `κ·power < 1`.
///
/// For `U_p` the relative error of the fitted tail is `O(δ^{2(p+1)/(p−1)})`.
pub fn even_norm_with_tail<F: Fn(f64) -> f64>(f: F, power: f64, kappa: f64, delta: f64) -> f64 {
    let edge = 1.0 - delta;
    let body = tanh_sinh(|x, _, _| f(x).abs().powf(power), 0.0, edge, 1e-12);
    let c = f(edge).abs() * delta.powf(kappa);
    let expo = 1.0 - kappa * power;
    let tail = c.powf(power) * delta.powf(expo) / expo;
    (2.0 * (body + tail)).powf(1.0 / power)
}

/// ‖U_p‖_q from samples of [`Profile::eval_u`] in x-space.
pub fn norm_u_xspace(profile: &Profile, q: f64, delta: f64) -> f64 {
    let kappa = 2.0 / (profile.p() - 1.0);
    even_norm_with_tail(|x| profile.eval_u(x).unwrap_or(f64::NAN), q, kappa, delta)
}

/// ‖U_p'‖_r from samples of [`Profile::eval_u_prime`] in x-space.
pub fn norm_u_prime_xspace(profile: &Profile, r: f64, delta: f64) -> f64 {
    let kappa = (profile.p() + 1.0) / (profile.p() - 1.0);
    even_norm_with_tail(|x| profile.eval_u_prime(x).unwrap_or(f64::NAN), r, kappa, delta)
}

/// `(2∫₀¹ |f|^r dx)^{1/r}` for an even integrand whose singularity at `x = 1`
/// is integrable; `f` receives `(x, 1 − x)`.
pub fn even_norm_open<F: Fn(f64, f64) -> f64>(f: F, r: f64) -> f64 {
    let body = tanh_sinh(|x, _, db| f(x, db).abs().powf(r), 0.0, 1.0, 1e-13);
    (2.0 * body).powf(1.0 / r)
}

/// `‖U_λ'‖_r` for the exponential profile from the energy identity
/// `U'² = 2λ(e^U − e^{μ_λ})` with `e^U = e^{μ_λ}/cos²(πx/2)`, integrated in x.
pub fn exp_prime_norm_xspace(lambda: f64, r: f64) -> f64 {
    let e_mu = std::f64::consts::PI.powi(2) / (2.0 * lambda);
    even_norm_open(
        |_, db| {
            let c = (FRAC_PI_2 * db).sin();
            // √(1/c² − 1) without squaring c.
            (2.0 * lambda * e_mu).sqrt() * ((1.0 - c) * (1.0 + c)).sqrt() / c
        },
        r,
    )
}

/// Dormand–Prince 5(4) integration of `y' = f(x, y)` for a 2-vector state.
pub fn dopri5<F: Fn(f64, [f64; 2]) -> [f64; 2]>(
    f: F,
    x0: f64,
    y0: [f64; 2],
    x_end: f64,
    rtol: f64,
    atol: f64,
) -> [f64; 2] {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let mut x = x0;
    let mut y = y0;
    let mut h = (x_end - x0) * 1e-3;
    while x < x_end {
        if x + h > x_end {
            h = x_end - x;
        }
        let mut k = [[0.0; 2]; 7];
        for stage in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                for d in 0..2 {
                    ys[d] += h * A[stage][j] * kj[d];
                }
            }
            k[stage] = f(x + C[stage] * h, ys);
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for d in 0..2 {
            let mut hi = 0.0;
            let mut lo = 0.0;
            for s in 0..7 {
                hi += B5[s] * k[s][d];
                lo += B4[s] * k[s][d];
            }
            y5[d] += h * hi;
            let scale = atol + rtol * y[d].abs().max(y5[d].abs());
            err = err.max((h * (hi - lo)).abs() / scale);
        }
        if err <= 1.0 {
            x += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    y
}

/// U_p(x_end) by integrating `U'' = U^p` from `(U, U')(0) = (μ_p, 0)`.
pub fn u_by_integration(p: f64, mu_p: f64, x_end: f64) -> f64 {
    dopri5(|_, y| [y[1], y[0].powf(p)], 0.0, [mu_p, 0.0], x_end, 1e-13, 1e-300)[0]
}

/// Evaluates `U_p` on `[0, x_end]` through the production route and the ODE
/// route and returns the largest relative difference at `points`.
pub fn compare_with_integration(profile: &Profile, points: &[f64]) -> Result<f64, TimemapError> {
    let mut worst: f64 = 0.0;
    for &x in points {
        let direct = profile.eval_u(x)?;
        let ode = u_by_integration(profile.p(), profile.mu_p(), x);
        worst = worst.max(((direct - ode) / ode).abs());
    }
    Ok(worst)
}
