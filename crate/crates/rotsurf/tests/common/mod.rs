//! Independent numerical oracles for the integration tests.
//!
//! Nothing in here calls into the library's special-function code: the
//! Jacobi functions are reproduced by RK4 integration of their defining
//! ODE system and the elliptic integrals by adaptive Simpson quadrature
//! of their defining integrands.

#![allow(dead_code)]

/// State of the defining ODE system at one argument. The system is
/// integrated with the squared modulus `m = p^2` as coefficient, so
/// reciprocal moduli (m > 1) and imaginary moduli (m < 0) are reached
/// directly, without any transformation formula.
///
/// Accumulators:
/// - `am`: amplitude, am' = dn
/// - `e`: second kind, E' = dn^2
/// - `pi`: third kind, Pi' = 1/(1 - k sn^2)
/// - `pi_im`: third kind along the imaginary axis,
///   d/ds Pi(k; p | i s)/i = cn^2/(cn^2 + k sn^2)
#[derive(Clone, Copy, Debug)]
pub struct JacobiState {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    pub am: f64,
    pub e: f64,
    pub pi: f64,
    pub pi_im: f64,
}

fn derivative(y: &[f64; 7], m: f64, k: f64) -> [f64; 7] {
    let [sn, cn, dn, _, _, _, _] = *y;
    [
        cn * dn,
        -sn * dn,
        -m * sn * cn,
        dn,
        dn * dn,
        1.0 / (1.0 - k * sn * sn),
        cn * cn / (cn * cn + k * sn * sn),
    ]
}

/// RK4 integration of sn' = cn dn, cn' = -sn dn, dn' = -m sn cn from
/// (0, 1, 1) with fixed step of roughly `h`; global error O(h^4).
pub fn rk4_jacobi_m(s: f64, m: f64, k: f64, h: f64) -> JacobiState {
    let n = ((s.abs() / h).ceil() as usize).max(1);
    let step = s / n as f64;
    let mut y = [0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
    for _ in 0..n {
        let k1 = derivative(&y, m, k);
        let mut y2 = y;
        for i in 0..7 {
            y2[i] = y[i] + 0.5 * step * k1[i];
        }
        let k2 = derivative(&y2, m, k);
        let mut y3 = y;
        for i in 0..7 {
            y3[i] = y[i] + 0.5 * step * k2[i];
        }
        let k3 = derivative(&y3, m, k);
        let mut y4 = y;
        for i in 0..7 {
            y4[i] = y[i] + step * k3[i];
        }
        let k4 = derivative(&y4, m, k);
        for i in 0..7 {
            y[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    JacobiState { sn: y[0], cn: y[1], dn: y[2], am: y[3], e: y[4], pi: y[5], pi_im: y[6] }
}

/// Oracle values for a real modulus `p` with the default step.
pub fn oracle_jacobi(s: f64, p: f64) -> JacobiState {
    rk4_jacobi_m(s, p * p, 0.0, 2e-4)
}

/// Oracle values carrying the third-kind accumulators for a real
/// modulus `p` and characteristic `k`.
pub fn oracle_jacobi_pi(s: f64, p: f64, k: f64) -> JacobiState {
    rk4_jacobi_m(s, p * p, k, 2e-4)
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn quad<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let c = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fc = f(c);
    let whole = simpson(a, b, fa, fc, fb);
    adaptive(f, a, b, fa, fb, fc, whole, tol, 40)
}

fn simpson(a: f64, b: f64, fa: f64, fc: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fc + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let fd = f(d);
    let fe = f(e);
    let left = simpson(a, c, fa, fd, fc);
    let right = simpson(c, b, fc, fe, fb);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        return left + right + err / 15.0;
    }
    adaptive(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
        + adaptive(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
}

/// Quadrature reference for the Legendre-form incomplete integral of
/// the first kind F(phi, p) (principal range |phi| <= pi/2).
pub fn quad_f(phi: f64, p: f64) -> f64 {
    quad(&|u: f64| 1.0 / (1.0 - (p * u.sin()).powi(2)).sqrt(), 0.0, phi, 1e-14)
}

/// Quadrature reference for E(phi, p).
pub fn quad_e(phi: f64, p: f64) -> f64 {
    quad(&|u: f64| (1.0 - (p * u.sin()).powi(2)).sqrt(), 0.0, phi, 1e-14)
}

/// Quadrature reference for Pi(k; phi, p).
pub fn quad_pi(k: f64, phi: f64, p: f64) -> f64 {
    quad(
        &|u: f64| {
            let s2 = u.sin() * u.sin();
            1.0 / ((1.0 - k * s2) * (1.0 - p * p * s2).sqrt())
        },
        0.0,
        phi,
        1e-14,
    )
}

use rotsurf::profile::{classify, Branch, CaseId, CaseParams, SpaceForm};

/// The full solution catalogue: every branch of every curvature regime,
/// instantiated on an 11-point interior parameter grid.
pub fn catalogue() -> Vec<(String, CaseParams)> {
    let regimes: &[(SpaceForm, f64)] = &[
        (SpaceForm::s3(), -2.0),
        (SpaceForm::s3(), -1.0),
        (SpaceForm::s3(), -0.4),
        (SpaceForm::s3(), 1.0),
        (SpaceForm::h3_elliptic(), -1.0),
        (SpaceForm::h3_elliptic(), 0.4),
        (SpaceForm::h3_elliptic(), 1.0),
        (SpaceForm::h3_elliptic(), 2.0),
        (SpaceForm::h3_hyperbolic(), -1.0),
        (SpaceForm::h3_hyperbolic(), 0.4),
        (SpaceForm::h3_hyperbolic(), 1.0),
        (SpaceForm::h3_hyperbolic(), 2.0),
        (SpaceForm::h3_parabolic(), -1.0),
        (SpaceForm::h3_parabolic(), 0.4),
        (SpaceForm::h3_parabolic(), 1.0),
        (SpaceForm::h3_parabolic(), 2.0),
    ];
    let mut out = Vec::new();
    for &(space, k) in regimes {
        for case in classify(space, k).expect("regime is valid") {
            for i in 0..11 {
                let frac = (i as f64 + 1.0) / 12.0;
                let label = format!("{} K={} {} #{i}", space.name(), k, case.branch().name());
                let params = instantiate(case, frac)
                    .unwrap_or_else(|e| panic!("{label}: construction failed: {e}"));
                out.push((label, params));
            }
        }
    }
    out
}

/// Build one row instance from an interior grid fraction in (0, 1).
fn instantiate(
    case: CaseId,
    frac: f64,
) -> Result<CaseParams, rotsurf::profile::ProfileError> {
    if case.parametrised_by_c() && case.branch() != Branch::Flat {
        let (lo, hi) = case.c_bounds();
        let c = match (lo, hi) {
            (Some(_), None) => 3.0 * frac,          // C > 0 rows
            (None, Some(_)) => -3.0 * frac,         // C < 0 rows
            _ => unreachable!("parabolic rows bound C on one side"),
        };
        return CaseParams::from_c(case, c);
    }
    let (lo, hi) = case.modulus_interval();
    let p = if hi.is_finite() { lo + (hi - lo) * frac } else { 3.0 * frac };
    CaseParams::from_modulus(case, p)
}
