//! Independent verification machinery: the analytic Gauss-curvature
//! formulas in Moutard-lift polar coordinates, finite-difference
//! curvature estimation of embedded surfaces, and a suite runner that
//! composes the checks into a machine-readable report.
//!
//! The finite-difference path deliberately shares nothing with the
//! closed-form derivative code: fundamental forms are assembled from
//! central differences of the raw embedding, so agreement with the
//! lemma formulas is a genuine cross-check.

use crate::elliptic::{jacobi, Modulus};
use crate::geometry::{
    alternating_covector, default_theta_range, embed, lw_fit, offset_normal, parallel_offset,
    period_solve, period_value, AmbientPoint, GeometryError,
};
use crate::profile::{
    classify, ode_residual, ode_rhs_psi, ode_rhs_r, profile, Branch, CaseId, CaseParams,
    ProfileError, Rotation, SpaceForm,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("singular profile speed (v^2 = {0}) in the curvature formula")]
    SingularSpeed(f64),
    #[error("ill-conditioned first fundamental form (det = {0})")]
    IllConditioned(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Which curvature lemma applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MoutardVariant {
    /// Non-isotropic rotation (S^3, and elliptic/hyperbolic rotation in
    /// H^3), with the multiplier triple (kappa, kappa1, kappa2).
    NonIsotropic,
    /// Parabolic rotation in H^3.
    Parabolic,
    /// Surfaces of revolution in Euclidean space.
    Euclidean,
}

/// Moutard-lift polar data of a profile point: the lift coefficients
/// R (along the space-form vector) and D (polar radius), the rotation
/// angle derivative, and their s-derivatives, with R = 1/(kappa r) in
/// the non-isotropic and parabolic cases and D = 1/r in the Euclidean
/// one.
#[derive(Clone, Copy, Debug)]
pub struct MoutardPolarData {
    variant: MoutardVariant,
    kappa: f64,
    kappa1: f64,
    kappa2: f64,
    big_r: f64,
    big_r1: f64,
    big_r2: f64,
    d_sq: f64,
    big_d1: f64,
    big_d2: f64,
    dpsi: f64,
    ddpsi: f64,
}

/// d/dr of the quartic right-hand side of the first-order profile ODE.
fn quartic_derivative(space: SpaceForm, k: f64, c: f64, r: f64) -> f64 {
    let r2 = r * r;
    match (space.kappa() as i8, space.rotation()) {
        (0, _) => 2.0 * k * r * (2.0 * c - 1.0 - 2.0 * k * r2),
        (-1, Rotation::Parabolic) => {
            2.0 * r * ((2.0 * k - 1.0) * c - 2.0 * k * (k - 1.0) * r2)
        }
        _ => {
            let kap = space.kappa();
            let k1 = space.kappa1().expect("non-parabolic");
            let k2 = space.kappa2().expect("non-parabolic");
            let f1 = (1.0 - c) + k1 * k * r2;
            let f2 = c - k1 * (k + kap) * r2;
            (2.0 * k1 * k * r * f2 - f1 * 2.0 * k1 * (k + kap) * r)
                / (kap * k1 * k2)
        }
    }
}

/// d(psi')/dr along the profile.
fn dpsi_dr(space: SpaceForm, k: f64, c: f64, r: f64) -> f64 {
    match (space.kappa() as i8, space.rotation()) {
        (0, _) => 2.0 * k * r,
        (-1, Rotation::Parabolic) => 2.0 * c / (r * r * r),
        _ => {
            let kap = space.kappa();
            let k1 = space.kappa1().expect("non-parabolic");
            let k2 = space.kappa2().expect("non-parabolic");
            let den = 1.0 - kap * k1 * r * r;
            2.0 * k1 * r * (k + kap * (1.0 - c)) / (k2 * den * den)
        }
    }
}

impl MoutardPolarData {
    /// Build the polar data from a phase-space state (r, r') of the
    /// profile equations with curvature K and constant C.
    pub fn from_state(space: SpaceForm, k: f64, c: f64, r: f64, dr: f64) -> Self {
        let ddr = 0.5 * quartic_derivative(space, k, c, r);
        let dpsi = ode_rhs_psi(space, k, c, r);
        let ddpsi = dpsi_dr(space, k, c, r) * dr;
        if space.is_euclidean() {
            // D = 1/r carries the polar radius; R is not used.
            let big_d1 = -dr / (r * r);
            let big_d2 = (2.0 * dr * dr / r - ddr) / (r * r);
            return MoutardPolarData {
                variant: MoutardVariant::Euclidean,
                kappa: 0.0,
                kappa1: 1.0,
                kappa2: 0.0,
                big_r: 0.0,
                big_r1: 0.0,
                big_r2: 0.0,
                d_sq: 1.0 / (r * r),
                big_d1,
                big_d2,
                dpsi,
                ddpsi,
            };
        }
        let kap = space.kappa();
        let big_r = 1.0 / (kap * r);
        let big_r1 = -dr / (kap * r * r);
        let big_r2 = (2.0 * dr * dr / r - ddr) / (kap * r * r);
        if space.is_parabolic() {
            return MoutardPolarData {
                variant: MoutardVariant::Parabolic,
                kappa: kap,
                kappa1: 0.0,
                kappa2: 0.0,
                big_r,
                big_r1,
                big_r2,
                d_sq: 0.0,
                big_d1: 0.0,
                big_d2: 0.0,
                dpsi,
                ddpsi,
            };
        }
        let k1 = space.kappa1().expect("non-parabolic");
        let k2 = space.kappa2().expect("non-parabolic");
        let d_sq = (kap * big_r * big_r - k1) / k2;
        MoutardPolarData {
            variant: MoutardVariant::NonIsotropic,
            kappa: kap,
            kappa1: k1,
            kappa2: k2,
            big_r,
            big_r1,
            big_r2,
            d_sq,
            big_d1: 0.0,
            big_d2: 0.0,
            dpsi,
            ddpsi,
        }
    }

    /// Build the polar data at a parameter value of a catalogue row.
    pub fn from_profile(params: &CaseParams, s: f64) -> Result<Self, VerifyError> {
        let sample = profile(params, s)?;
        let case = params.case();
        Ok(Self::from_state(
            case.space(),
            case.k_target(),
            params.c_constant(),
            sample.r,
            sample.dr,
        ))
    }
}

/// Gauss curvature from the Moutard polar data, by the analytic formula
/// of the applicable rotation class.
pub fn gauss_from_moutard(data: &MoutardPolarData) -> Result<f64, VerifyError> {
    let (dpsi, ddpsi) = (data.dpsi, data.ddpsi);
    match data.variant {
        MoutardVariant::NonIsotropic => {
            let (kap, k1, k2) = (data.kappa, data.kappa1, data.kappa2);
            let (r, r1, r2) = (data.big_r, data.big_r1, data.big_r2);
            let d2 = data.d_sq;
            let d4 = d2 * d2;
            let mix = k1 * kap * r1 * r1 + k2.powi(3) * dpsi * dpsi * d4;
            let v2 = mix / (k2 * d2);
            if v2.abs() < 1e-300 {
                return Err(VerifyError::SingularSpeed(v2));
            }
            let num = kap * k2 * d2 * r * (dpsi * r2 - ddpsi * r1)
                - 2.0 * dpsi * (kap * r * r1).powi(2)
                - dpsi * mix;
            Ok(kap * k2 * dpsi * num / (v2 * v2))
        }
        MoutardVariant::Parabolic => {
            let kap = data.kappa;
            let (r, r1, r2) = (data.big_r, data.big_r1, data.big_r2);
            let v2 = dpsi * dpsi - kap * r1 * r1;
            if v2.abs() < 1e-300 {
                return Err(VerifyError::SingularSpeed(v2));
            }
            let num = kap * r * (dpsi * r2 - ddpsi * r1) - dpsi * v2;
            Ok(dpsi / kap * num / (v2 * v2))
        }
        MoutardVariant::Euclidean => {
            let k1 = data.kappa1;
            let (d1, d2v) = (data.big_d1, data.big_d2);
            let d_sq = data.d_sq;
            let d = d_sq.sqrt();
            let v2 = (k1 * d1 * d1 + dpsi * dpsi * d_sq * d_sq) / d_sq;
            if v2.abs() < 1e-300 {
                return Err(VerifyError::SingularSpeed(v2));
            }
            let num = d * (dpsi * d2v - ddpsi * d1) - 2.0 * d1 * d1 * dpsi;
            Ok(d_sq * dpsi * num / (v2 * v2))
        }
    }
}

/// Curvature estimate with an attached Richardson error indicator.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureEstimate {
    pub k: f64,
    pub h_mean: f64,
    /// Step-halving error estimate for k.
    pub k_error: f64,
}

type Sampler<'a> = dyn Fn(f64, f64) -> Result<AmbientPoint, GeometryError> + 'a;

fn fd_forms(
    sampler: &Sampler,
    s: f64,
    theta: f64,
    h: f64,
    reference_normal: Option<&[f64; 4]>,
) -> Result<(f64, f64), VerifyError> {
    let f = sampler(s, theta)?;
    let sig = f.signature;
    let fp = sampler(s + h, theta)?.x;
    let fm = sampler(s - h, theta)?.x;
    let gp = sampler(s, theta + h)?.x;
    let gm = sampler(s, theta - h)?.x;
    let fpp = sampler(s + h, theta + h)?.x;
    let fpm = sampler(s + h, theta - h)?.x;
    let fmp = sampler(s - h, theta + h)?.x;
    let fmm = sampler(s - h, theta - h)?.x;
    let mut fs = [0.0; 4];
    let mut ft = [0.0; 4];
    let mut fss = [0.0; 4];
    let mut ftt = [0.0; 4];
    let mut fst = [0.0; 4];
    for i in 0..4 {
        fs[i] = (fp[i] - fm[i]) / (2.0 * h);
        ft[i] = (gp[i] - gm[i]) / (2.0 * h);
        fss[i] = (fp[i] - 2.0 * f.x[i] + fm[i]) / (h * h);
        ftt[i] = (gp[i] - 2.0 * f.x[i] + gm[i]) / (h * h);
        fst[i] = (fpp[i] - fpm[i] - fmp[i] + fmm[i]) / (4.0 * h * h);
    }
    // Unit normal from the same finite-difference frame.
    let w = alternating_covector(&f.x, &fs, &ft);
    let mut n = sig.raise(&w);
    let nn = sig.inner(&n, &n);
    if !(nn.is_finite() && nn > 1e-18) {
        return Err(VerifyError::IllConditioned(nn));
    }
    let mut inv = 1.0 / nn.sqrt();
    // The raw covector normal has no orientation continuity across
    // singular collars; a caller-supplied reference pins the sign so
    // the mean curvature stays comparable between samples.
    if let Some(reference) = reference_normal {
        if sig.inner(&n, reference) < 0.0 {
            inv = -inv;
        }
    }
    for v in &mut n {
        *v *= inv;
    }
    let e1 = sig.inner(&fs, &fs);
    let f1 = sig.inner(&fs, &ft);
    let g1 = sig.inner(&ft, &ft);
    let det1 = e1 * g1 - f1 * f1;
    if det1.abs() < 1e-12 * (e1.abs() + g1.abs()).max(1e-12) {
        return Err(VerifyError::IllConditioned(det1));
    }
    let e2 = sig.inner(&fss, &n);
    let f2 = sig.inner(&fst, &n);
    let g2 = sig.inner(&ftt, &n);
    let k_ext = (e2 * g2 - f2 * f2) / det1;
    let h_mean = (e2 * g1 - 2.0 * f2 * f1 + g2 * e1) / (2.0 * det1);
    Ok((k_ext, h_mean))
}

/// Extrinsic Gauss and mean curvature by finite differences of an
/// embedding sampler, with Richardson extrapolation over h and h/2.
pub fn curvature_fd(
    sampler: &Sampler,
    s: f64,
    theta: f64,
    h: f64,
) -> Result<CurvatureEstimate, VerifyError> {
    curvature_fd_oriented(sampler, s, theta, h, None)
}

/// As `curvature_fd`, with the finite-difference normal aligned to a
/// reference so the sign of the mean curvature is well defined across
/// the whole sampled patch.
pub fn curvature_fd_oriented(
    sampler: &Sampler,
    s: f64,
    theta: f64,
    h: f64,
    reference_normal: Option<&[f64; 4]>,
) -> Result<CurvatureEstimate, VerifyError> {
    let (k_h, _) = fd_forms(sampler, s, theta, h, reference_normal)?;
    let (k_h2, h_mean) = fd_forms(sampler, s, theta, 0.5 * h, reference_normal)?;
    let k = (4.0 * k_h2 - k_h) / 3.0;
    Ok(CurvatureEstimate { k, h_mean, k_error: (k_h2 - k_h).abs() / 3.0 })
}

/// Convenience wrapper: curvature of the embedded table surface itself.
pub fn surface_curvature(
    params: &CaseParams,
    s: f64,
    theta: f64,
    h: f64,
) -> Result<CurvatureEstimate, VerifyError> {
    curvature_fd(&|a, b| embed(params, a, b), s, theta, h)
}

/// (K, H) samples of a parallel offset surface over a small regular
/// grid, for feeding the linear Weingarten fit. Samples falling on
/// singular collars, or whose step-halving error indicator exceeds
/// `max_error`, are dropped.
pub fn offset_curvature_samples(
    params: &CaseParams,
    t: f64,
    n: usize,
    h: f64,
    max_error: f64,
) -> Result<Vec<(f64, f64)>, VerifyError> {
    let (lo, hi) = params.default_window();
    let width = hi - lo;
    let sampler = |a: f64, b: f64| parallel_offset(params, t, a, b);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let s = lo + width * (0.15 + 0.7 * i as f64 / n as f64);
        let theta = 0.2 + 0.1 * i as f64;
        let reference = match offset_normal(params, t, s, theta) {
            Ok(r) => r,
            Err(_) => continue,
        };
        match curvature_fd_oriented(&sampler, s, theta, h, Some(&reference.x)) {
            Ok(est) if est.k_error <= max_error => out.push((est.k, est.h_mean)),
            Ok(_) => {}
            Err(VerifyError::IllConditioned(_)) | Err(VerifyError::SingularSpeed(_)) => {}
            Err(VerifyError::Geometry(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// One executed check of the verification suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub n_samples: usize,
}

/// Machine-readable result of `run_suite`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Configuration of the verification suite. All tolerances are
/// engineering defaults; the suite is deterministic for a fixed config.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub samples_per_case: usize,
    pub moduli_per_row: usize,
    pub fd_step: f64,
    pub tol_identity: f64,
    pub tol_residual: f64,
    pub tol_quadric: f64,
    pub tol_curvature: f64,
    pub tol_lw: f64,
    pub tol_period: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples_per_case: 60,
            moduli_per_row: 3,
            // Balances truncation against roundoff in the second
            // differences when the ambient coordinates reach O(100).
            fd_step: 3e-4,
            tol_identity: 1e-12,
            tol_residual: 1e-8,
            tol_quadric: 1e-11,
            tol_curvature: 5e-4,
            tol_lw: 1e-6,
            tol_period: 1e-7,
        }
    }
}

/// Deterministic grid of cases covering every rotation class.
fn suite_cases(moduli_per_row: usize) -> Vec<CaseParams> {
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
        for case in classify(space, k).expect("valid regime") {
            for i in 0..moduli_per_row {
                let frac = (i as f64 + 1.0) / (moduli_per_row as f64 + 1.0);
                let params = if case.parametrised_by_c() && case.branch() != Branch::Flat {
                    let (lo, _) = case.c_bounds();
                    let c = if lo.is_some() { 2.5 * frac } else { -2.5 * frac };
                    CaseParams::from_c(case, c)
                } else {
                    let (lo, hi) = case.modulus_interval();
                    let p = if hi.is_finite() { lo + (hi - lo) * frac } else { 2.5 * frac };
                    CaseParams::from_modulus(case, p)
                };
                if let Ok(params) = params {
                    out.push(params);
                }
            }
        }
    }
    out
}

fn window_samples(params: &CaseParams, n: usize) -> Vec<f64> {
    let (lo, hi) = params.default_window();
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
        .collect()
}

fn check_elliptic_identities(config: &SuiteConfig) -> CheckResult {
    let mut max = 0.0f64;
    let mut n = 0;
    for i in 0..20 {
        let p = (i as f64 + 0.5) / 20.0;
        let m = Modulus::standard(p).unwrap();
        for j in 0..config.samples_per_case {
            let s = -4.0 + 8.0 * (j as f64 + 0.5) / config.samples_per_case as f64;
            let ev = jacobi(s, &m).unwrap();
            let r1 = ev.sn * ev.sn + ev.cn * ev.cn - 1.0;
            let r2 = ev.dn * ev.dn + p * p * ev.sn * ev.sn - 1.0;
            let r3 = ev.sn - ev.am.sin();
            max = max.max(r1.abs()).max(r2.abs()).max(r3.abs());
            n += 1;
        }
    }
    CheckResult {
        name: "elliptic-identities".into(),
        max_residual: max,
        tolerance: config.tol_identity,
        pass: max <= config.tol_identity,
        n_samples: n,
    }
}

fn check_ode_residuals(config: &SuiteConfig, cases: &[CaseParams]) -> CheckResult {
    let mut max = 0.0f64;
    let mut n = 0;
    for params in cases {
        for s in window_samples(params, config.samples_per_case) {
            if let Ok((res_r, res_psi)) = ode_residual(params, s) {
                let rhs = ode_rhs_r(
                    params.case().space(),
                    params.case().k_target(),
                    params.c_constant(),
                    profile(params, s).map(|p| p.r).unwrap_or(f64::NAN),
                );
                max = max.max(res_r.abs() / (1.0 + rhs.abs())).max(res_psi.abs());
                n += 1;
            }
        }
    }
    CheckResult {
        name: "ode-residuals".into(),
        max_residual: max,
        tolerance: config.tol_residual,
        pass: max <= config.tol_residual,
        n_samples: n,
    }
}

fn check_quadric(config: &SuiteConfig, cases: &[CaseParams]) -> CheckResult {
    let mut max = 0.0f64;
    let mut n = 0;
    for params in cases {
        let (t_lo, t_hi) = default_theta_range(params.case().space());
        for s in window_samples(params, 20) {
            for j in 0..6 {
                let theta = t_lo + (t_hi - t_lo) * (j as f64 + 0.5) / 6.0;
                if let Ok(pt) = embed(params, s, theta) {
                    max = max.max(pt.quadric_residual().abs());
                    n += 1;
                }
            }
        }
    }
    CheckResult {
        name: "quadric-constraints".into(),
        max_residual: max,
        tolerance: config.tol_quadric,
        pass: max <= config.tol_quadric,
        n_samples: n,
    }
}

/// One representative case per rotation class.
fn rotation_class_cases() -> Vec<CaseParams> {
    let mut out = Vec::new();
    let picks: &[(SpaceForm, f64, Branch)] = &[
        (SpaceForm::s3(), 1.0, Branch::Dn),
        (SpaceForm::h3_elliptic(), 2.0, Branch::Cn),
        (SpaceForm::h3_hyperbolic(), -1.0, Branch::Dn),
        (SpaceForm::h3_parabolic(), 2.0, Branch::Dn),
    ];
    for &(space, k, branch) in picks {
        let case = CaseId::new(space, k, branch).expect("valid row");
        let params = if case.parametrised_by_c() {
            CaseParams::from_c(case, 1.5)
        } else {
            let (lo, hi) = case.modulus_interval();
            CaseParams::from_modulus(case, lo + 0.5 * (hi - lo))
        };
        out.push(params.expect("representative case constructs"));
    }
    out
}

fn check_curvature(config: &SuiteConfig) -> CheckResult {
    let mut max = 0.0f64;
    let mut n = 0;
    for params in rotation_class_cases() {
        let k_target = params.case().k_target();
        let (lo, hi) = params.default_window();
        for i in 1..6 {
            let s = lo + (hi - lo) * (0.2 + 0.12 * i as f64);
            let theta = 0.3 + 0.2 * i as f64;
            let est = match surface_curvature(&params, s, theta, config.fd_step) {
                Ok(est) => est,
                Err(_) => continue,
            };
            let lemma = gauss_from_moutard(
                &MoutardPolarData::from_profile(&params, s).expect("regular point"),
            )
            .expect("non-singular speed");
            max = max.max((est.k - k_target).abs());
            max = max.max((est.k - lemma).abs());
            n += 1;
        }
    }
    CheckResult {
        name: "curvature-lemma-vs-fd".into(),
        max_residual: max,
        tolerance: config.tol_curvature,
        pass: max <= config.tol_curvature && n > 0,
        n_samples: n,
    }
}

fn check_lw_offsets(config: &SuiteConfig) -> CheckResult {
    let mut max = 0.0f64;
    let mut n = 0;
    let picks: &[(SpaceForm, f64, Branch, f64)] = &[
        (SpaceForm::s3(), 1.0, Branch::Dn, 0.4),
        (SpaceForm::h3_elliptic(), 2.0, Branch::Cn, 0.3),
    ];
    for &(space, k, branch, t) in picks {
        let case = CaseId::new(space, k, branch).expect("valid row");
        let (lo, hi) = case.modulus_interval();
        let params = CaseParams::from_modulus(case, lo + 0.5 * (hi - lo))
            .expect("representative case constructs");
        let samples = match offset_curvature_samples(&params, t, 24, config.fd_step, 1e-7) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if samples.len() < 3 {
            continue;
        }
        if let Ok(fit) = lw_fit(&samples) {
            max = max.max(fit.residual);
            n += samples.len();
        }
    }
    CheckResult {
        name: "lw-parallel-offsets".into(),
        max_residual: max,
        tolerance: config.tol_lw,
        pass: max <= config.tol_lw && n > 0,
        n_samples: n,
    }
}

fn check_period(config: &SuiteConfig) -> CheckResult {
    let k = -1.0_f64;
    let mut max = 0.0f64;
    let mut n_samples = 0;
    // Zero of P at the end of the modulus interval.
    let p_star = (1.0 / (1.0 - k)).sqrt();
    max = max.max(period_value(14, k, p_star).map(|v| v.abs()).unwrap_or(f64::NAN));
    n_samples += 1;
    // Smallest n with a root, then the closure of the profile.
    let mut solved = None;
    for n in 1..=40 {
        if let Ok(p) = period_solve(k, n) {
            solved = Some((n, p));
            break;
        }
    }
    if let Some((n, p)) = solved {
        let target = 2.0 * std::f64::consts::PI;
        max = max.max((period_value(n, k, p.p()).unwrap() - target).abs());
        n_samples += 1;
        let case = CaseId::new(SpaceForm::h3_hyperbolic(), k, Branch::Dn).expect("dn row");
        if let Ok(params) = CaseParams::from_modulus(case, p.p()) {
            let period = params.profile_period().expect("dn rows are periodic");
            for i in 0..10 {
                let s = 0.13 * i as f64;
                let a = profile(&params, s).expect("regular");
                let b = profile(&params, s + f64::from(n) * period).expect("regular");
                max = max.max((a.r - b.r).abs());
                max = max.max((a.psi.cos() - b.psi.cos()).abs());
                n_samples += 1;
            }
        }
    } else {
        max = f64::NAN;
    }
    CheckResult {
        name: "period-closure".into(),
        max_residual: max,
        tolerance: config.tol_period,
        pass: max <= config.tol_period,
        n_samples,
    }
}

/// Run the full verification suite. Deterministic for a fixed config.
pub fn run_suite(config: &SuiteConfig) -> VerificationReport {
    let cases = suite_cases(config.moduli_per_row);
    let checks = vec![
        check_elliptic_identities(config),
        check_ode_residuals(config, &cases),
        check_quadric(config, &cases),
        check_curvature(config),
        check_lw_offsets(config),
        check_period(config),
    ];
    VerificationReport { checks }
}
