//! Ambient geometry of the rotational surfaces: embeddings into the
//! quadrics S^3 in R^4 and H^3 in R^{3,1}, projections to displayable
//! models, unit normals and parallel offsets, linear Weingarten fits,
//! and the closed-profile period equation.
//!
//! Three ambient coordinate conventions are used. The sphere sits in
//! Euclidean R^4. The hyperboloid is either written in an orthonormal
//! basis with inner product -x0 y0 + x1 y1 + x2 y2 + x3 y3 (elliptic
//! and hyperbolic rotation), or, for parabolic rotation, in a
//! pseudo-orthonormal basis with inner product
//! -x0 y1 - x1 y0 + x2 y2 + x3 y3. The basis change between the two is
//! the symmetric one, T = (x0 + x1)/sqrt(2), X = (x0 - x1)/sqrt(2).

use crate::elliptic::{complete_f, complete_pi, EllipticError, Modulus};
use crate::profile::{profile, CaseParams, ProfileError, ProfileSample, Rotation, SpaceForm};
use thiserror::Error;

/// Quadric tolerance for embedded and offset points.
const QUADRIC_EPS: f64 = 1e-9;

/// Denominators smaller than this abort a projection.
const POLE_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("embedded point violates its quadric by {residual}")]
    QuadricViolation { residual: f64 },
    #[error("projection pole: denominator {denom} too small")]
    ProjectionPole { denom: f64 },
    #[error("model {model} is not defined for signature {signature}")]
    IncompatibleModel { model: &'static str, signature: &'static str },
    #[error("singular surface point at (s, theta) = ({s}, {theta})")]
    SingularPoint { s: f64, theta: f64 },
    #[error("no closed profile for n = {n} at K = {k}: sup P = {p_sup} < 2 pi")]
    NoClosedCurve { n: u32, k: f64, p_sup: f64 },
    #[error("period equation requires K < 0, got {0}")]
    PeriodCurvature(f64),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// Ambient inner-product convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    /// R^4 with the Euclidean inner product; quadric <x,x> = 1.
    Euclidean4,
    /// R^{3,1} with -x0 y0 + x1 y1 + x2 y2 + x3 y3; quadric <x,x> = -1,
    /// upper sheet x0 > 0.
    LorentzOrthonormal,
    /// R^{3,1} with -x0 y1 - x1 y0 + x2 y2 + x3 y3; quadric <x,x> = -1.
    LorentzPseudo,
}

impl Signature {
    pub fn name(&self) -> &'static str {
        match self {
            Signature::Euclidean4 => "euclidean4",
            Signature::LorentzOrthonormal => "lorentz-orthonormal",
            Signature::LorentzPseudo => "lorentz-pseudo",
        }
    }

    /// Inner product of two 4-vectors under this signature.
    pub fn inner(&self, a: &[f64; 4], b: &[f64; 4]) -> f64 {
        match self {
            Signature::Euclidean4 => a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3],
            Signature::LorentzOrthonormal => {
                -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
            }
            Signature::LorentzPseudo => {
                -a[0] * b[1] - a[1] * b[0] + a[2] * b[2] + a[3] * b[3]
            }
        }
    }

    /// Target value of <x,x> on the quadric.
    pub fn quadric_target(&self) -> f64 {
        match self {
            Signature::Euclidean4 => 1.0,
            _ => -1.0,
        }
    }

    /// The metric is involutive in all three conventions, so raising an
    /// index is the same linear map as lowering one.
    pub(crate) fn raise(&self, w: &[f64; 4]) -> [f64; 4] {
        match self {
            Signature::Euclidean4 => *w,
            Signature::LorentzOrthonormal => [-w[0], w[1], w[2], w[3]],
            Signature::LorentzPseudo => [-w[1], -w[0], w[2], w[3]],
        }
    }
}

/// The ambient convention used for a given space form.
pub fn signature_of(space: SpaceForm) -> Signature {
    if space.kappa() > 0.0 {
        Signature::Euclidean4
    } else if space.is_parabolic() {
        Signature::LorentzPseudo
    } else {
        Signature::LorentzOrthonormal
    }
}

/// A point of (or tangent/normal vector at) the ambient quadric.
#[derive(Clone, Copy, Debug)]
pub struct AmbientPoint {
    pub x: [f64; 4],
    pub signature: Signature,
}

impl AmbientPoint {
    /// Signed deviation of <x,x> from the quadric target.
    pub fn quadric_residual(&self) -> f64 {
        self.signature.inner(&self.x, &self.x) - self.signature.quadric_target()
    }
}

/// Projection models for 3D display.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Stereographic,
    PoincareBall,
    HalfSpace,
    Raw4,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Stereographic => "stereo",
            Model::PoincareBall => "ball",
            Model::HalfSpace => "halfspace",
            Model::Raw4 => "raw4",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "stereo" | "stereographic" => Model::Stereographic,
            "ball" => Model::PoincareBall,
            "halfspace" | "half-space" => Model::HalfSpace,
            "raw4" => Model::Raw4,
            _ => return None,
        })
    }
}

fn embed_sample(space: SpaceForm, sample: &ProfileSample, theta: f64) -> AmbientPoint {
    let (r, psi, d) = (sample.r, sample.psi, sample.d);
    let signature = signature_of(space);
    let x = match (space.kappa() as i8, space.rotation()) {
        (1, _) => [
            r * theta.cos(),
            r * theta.sin(),
            d * psi.cos(),
            d * psi.sin(),
        ],
        (-1, Rotation::Elliptic) => [
            d * psi.cosh(),
            d * psi.sinh(),
            r * theta.cos(),
            r * theta.sin(),
        ],
        (-1, Rotation::Hyperbolic) => [
            r * theta.cosh(),
            r * theta.sinh(),
            d * psi.cos(),
            d * psi.sin(),
        ],
        (-1, Rotation::Parabolic) => {
            let q = theta * theta + psi * psi;
            [0.5 * r * q + d, r, r * theta, r * psi]
        }
        _ => unreachable!("Euclidean profiles are not embedded in a quadric"),
    };
    AmbientPoint { x, signature }
}

/// Embed a profile point into the ambient quadric of its space form.
pub fn embed(params: &CaseParams, s: f64, theta: f64) -> Result<AmbientPoint, GeometryError> {
    let sample = profile(params, s)?;
    let pt = embed_sample(params.case().space(), &sample, theta);
    let residual = pt.quadric_residual().abs();
    if residual > QUADRIC_EPS {
        return Err(GeometryError::QuadricViolation { residual });
    }
    Ok(pt)
}

/// Convert a pseudo-orthonormal point to the orthonormal basis.
fn pseudo_to_orthonormal(x: &[f64; 4]) -> [f64; 4] {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    [
        (x[0] + x[1]) * inv_sqrt2,
        (x[0] - x[1]) * inv_sqrt2,
        x[2],
        x[3],
    ]
}

/// Project an ambient point to a 3D display model.
pub fn project(pt: &AmbientPoint, model: Model) -> Result<[f64; 3], GeometryError> {
    match (model, pt.signature) {
        (Model::Stereographic, Signature::Euclidean4) => {
            let denom = 1.0 + pt.x[0];
            if denom.abs() < POLE_EPS {
                return Err(GeometryError::ProjectionPole { denom });
            }
            Ok([pt.x[1] / denom, pt.x[2] / denom, pt.x[3] / denom])
        }
        (Model::PoincareBall | Model::HalfSpace, sig)
            if sig != Signature::Euclidean4 =>
        {
            let x = if sig == Signature::LorentzPseudo {
                pseudo_to_orthonormal(&pt.x)
            } else {
                pt.x
            };
            if model == Model::PoincareBall {
                let denom = 1.0 + x[0];
                if denom.abs() < POLE_EPS {
                    return Err(GeometryError::ProjectionPole { denom });
                }
                Ok([x[1] / denom, x[2] / denom, x[3] / denom])
            } else {
                let denom = x[0] + x[1];
                if denom.abs() < POLE_EPS {
                    return Err(GeometryError::ProjectionPole { denom });
                }
                Ok([x[2] / denom, x[3] / denom, 1.0 / denom])
            }
        }
        (model, sig) => Err(GeometryError::IncompatibleModel {
            model: model.name(),
            signature: sig.name(),
        }),
    }
}

/// Covector w with w(x) = det[x; a; b; c], i.e. the Levi-Civita
/// contraction of three 4-vectors.
pub(crate) fn alternating_covector(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> [f64; 4] {
    let minor = |i: usize, j: usize, k: usize| -> f64 {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    [
        minor(1, 2, 3),
        -minor(0, 2, 3),
        minor(0, 1, 3),
        -minor(0, 1, 2),
    ]
}

/// Tangent data of the embedding at one point: the point itself and the
/// analytic partial derivatives.
struct Frame {
    f: AmbientPoint,
    fs: [f64; 4],
    ftheta: [f64; 4],
}

fn frame(params: &CaseParams, s: f64, theta: f64) -> Result<Frame, GeometryError> {
    let space = params.case().space();
    let sample = profile(params, s)?;
    let f = embed_sample(space, &sample, theta);
    let (r, psi, d, dr, dpsi) = (sample.r, sample.psi, sample.d, sample.dr, sample.dpsi);
    // d'(s) from the quadric identity of each signature.
    let dd = match (space.kappa() as i8, space.rotation()) {
        (1, _) => -r * dr / d,
        (-1, Rotation::Elliptic) | (-1, Rotation::Hyperbolic) => r * dr / d,
        _ => -dr / (2.0 * r * r),
    };
    if !dd.is_finite() {
        return Err(GeometryError::SingularPoint { s, theta });
    }
    let (fs, ftheta) = match (space.kappa() as i8, space.rotation()) {
        (1, _) => (
            [
                dr * theta.cos(),
                dr * theta.sin(),
                dd * psi.cos() - d * dpsi * psi.sin(),
                dd * psi.sin() + d * dpsi * psi.cos(),
            ],
            [-r * theta.sin(), r * theta.cos(), 0.0, 0.0],
        ),
        (-1, Rotation::Elliptic) => (
            [
                dd * psi.cosh() + d * dpsi * psi.sinh(),
                dd * psi.sinh() + d * dpsi * psi.cosh(),
                dr * theta.cos(),
                dr * theta.sin(),
            ],
            [0.0, 0.0, -r * theta.sin(), r * theta.cos()],
        ),
        (-1, Rotation::Hyperbolic) => (
            [
                dr * theta.cosh(),
                dr * theta.sinh(),
                dd * psi.cos() - d * dpsi * psi.sin(),
                dd * psi.sin() + d * dpsi * psi.cos(),
            ],
            [r * theta.sinh(), r * theta.cosh(), 0.0, 0.0],
        ),
        (-1, Rotation::Parabolic) => {
            let q = theta * theta + psi * psi;
            (
                [
                    0.5 * dr * q + r * psi * dpsi + dd,
                    dr,
                    dr * theta,
                    dr * psi + r * dpsi,
                ],
                [r * theta, 0.0, r, 0.0],
            )
        }
        _ => unreachable!(),
    };
    Ok(Frame { f, fs, ftheta })
}

/// Direction of increasing d at a profile point, used to orient the
/// normal field.
fn d_direction(space: SpaceForm, sample: &ProfileSample, theta: f64) -> [f64; 4] {
    let psi = sample.psi;
    match (space.kappa() as i8, space.rotation()) {
        (1, _) => [0.0, 0.0, psi.cos(), psi.sin()],
        (-1, Rotation::Elliptic) => [psi.cosh(), psi.sinh(), 0.0, 0.0],
        (-1, Rotation::Hyperbolic) => [0.0, 0.0, psi.cos(), psi.sin()],
        (-1, Rotation::Parabolic) => [1.0, 0.0, 0.0, 0.0],
        _ => unreachable!(),
    }
    .map(|v| {
        // theta only enters the elliptic-rotation planes that d does not
        // touch, so the direction is theta-independent.
        let _ = theta;
        v
    })
}

fn raw_normal(fr: &Frame) -> Result<[f64; 4], GeometryError> {
    let sig = fr.f.signature;
    let w = alternating_covector(&fr.f.x, &fr.fs, &fr.ftheta);
    let n = sig.raise(&w);
    let norm2 = sig.inner(&n, &n);
    if !(norm2.is_finite() && norm2 > 1e-18) {
        return Err(GeometryError::SingularPoint { s: f64::NAN, theta: f64::NAN });
    }
    let inv = 1.0 / norm2.sqrt();
    Ok(n.map(|v| v * inv))
}

/// Orientation sign making the profile normal point toward increasing d
/// at s = 0 (or at the first regular point of the window when s = 0 is
/// singular, as for profiles through r = 0).
fn orientation_sign(params: &CaseParams) -> Result<f64, GeometryError> {
    let space = params.case().space();
    let (lo, hi) = params.default_window();
    let width = hi - lo;
    for i in 0..8 {
        let s_ref = 0.07 * i as f64 * width;
        let fr = match frame(params, s_ref, 0.0) {
            Ok(fr) => fr,
            Err(_) => continue,
        };
        let n = match raw_normal(&fr) {
            Ok(n) => n,
            Err(_) => continue,
        };
        let sample = profile(params, s_ref)?;
        let u = d_direction(space, &sample, 0.0);
        let along = fr.f.signature.inner(&n, &u);
        if along.abs() > 1e-9 {
            return Ok(along.signum());
        }
    }
    Err(GeometryError::SingularPoint { s: 0.0, theta: 0.0 })
}

/// Unit normal of the embedded surface, orthogonal to the point and to
/// both coordinate tangents under the ambient metric.
pub fn unit_normal(params: &CaseParams, s: f64, theta: f64) -> Result<AmbientPoint, GeometryError> {
    let fr = frame(params, s, theta).map_err(|e| match e {
        GeometryError::SingularPoint { .. } => GeometryError::SingularPoint { s, theta },
        other => other,
    })?;
    let gss = fr.f.signature.inner(&fr.fs, &fr.fs);
    let gtt = fr.f.signature.inner(&fr.ftheta, &fr.ftheta);
    let gst = fr.f.signature.inner(&fr.fs, &fr.ftheta);
    if (gss * gtt - gst * gst).abs() < 1e-14 {
        return Err(GeometryError::SingularPoint { s, theta });
    }
    let n = raw_normal(&fr).map_err(|_| GeometryError::SingularPoint { s, theta })?;
    let sign = orientation_sign(params)?;
    Ok(AmbientPoint { x: n.map(|v| v * sign), signature: fr.f.signature })
}

/// Default orbit-parameter range: a full turn for compact rotations, a
/// symmetric unit-scale band for the non-compact ones (the orbit is an
/// unbounded curve there, and wide bands leave the render frame and the
/// floating-point headroom of the quadric constraint).
pub fn default_theta_range(space: SpaceForm) -> (f64, f64) {
    match space.rotation() {
        Rotation::Elliptic => (0.0, 2.0 * std::f64::consts::PI),
        Rotation::Hyperbolic | Rotation::Parabolic => {
            (-0.5 * std::f64::consts::PI, 0.5 * std::f64::consts::PI)
        }
    }
}

/// Parallel surface at normal distance t: the circular combination in
/// the sphere, the hyperbolic one in hyperbolic space.
pub fn parallel_offset(
    params: &CaseParams,
    t: f64,
    s: f64,
    theta: f64,
) -> Result<AmbientPoint, GeometryError> {
    let f = embed(params, s, theta)?;
    let n = unit_normal(params, s, theta)?;
    let (cf, cn) = if params.case().space().kappa() > 0.0 {
        let t = t.rem_euclid(2.0 * std::f64::consts::PI);
        (t.cos(), t.sin())
    } else {
        (t.cosh(), t.sinh())
    };
    let x = [
        cf * f.x[0] + cn * n.x[0],
        cf * f.x[1] + cn * n.x[1],
        cf * f.x[2] + cn * n.x[2],
        cf * f.x[3] + cn * n.x[3],
    ];
    let pt = AmbientPoint { x, signature: f.signature };
    let residual = pt.quadric_residual().abs();
    if residual > QUADRIC_EPS {
        return Err(GeometryError::QuadricViolation { residual });
    }
    Ok(pt)
}

/// Unit normal of the parallel surface at distance t, transported from
/// the base surface along the same geodesic.
pub fn offset_normal(
    params: &CaseParams,
    t: f64,
    s: f64,
    theta: f64,
) -> Result<AmbientPoint, GeometryError> {
    let f = embed(params, s, theta)?;
    let n = unit_normal(params, s, theta)?;
    let (cf, cn) = if params.case().space().kappa() > 0.0 {
        let t = t.rem_euclid(2.0 * std::f64::consts::PI);
        (-t.sin(), t.cos())
    } else {
        (t.sinh(), t.cosh())
    };
    let x = [
        cf * f.x[0] + cn * n.x[0],
        cf * f.x[1] + cn * n.x[1],
        cf * f.x[2] + cn * n.x[2],
        cf * f.x[3] + cn * n.x[3],
    ];
    Ok(AmbientPoint { x, signature: f.signature })
}

/// Result of fitting a linear Weingarten relation aK + 2bH + c = 0.
#[derive(Clone, Debug)]
pub struct LwFit {
    /// Unit coefficient vector (a, b, c).
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Root-mean-square residual of the fitted relation.
    pub residual: f64,
    /// Tubularity indicator ac - b^2 (zero for tubular relations).
    pub tubularity: f64,
    /// For rank-deficient data (constant K and H), the second null
    /// direction spanning the solution family.
    pub family: Option<[f64; 3]>,
}

/// Jacobi eigensolver for a symmetric 3x3 matrix. Returns eigenvalues
/// ascending with matching column eigenvectors.
#[allow(clippy::needless_range_loop)]
fn symmetric_eigen3(mut m: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..64 {
        // Largest off-diagonal element.
        let (mut p, mut q, mut big) = (0usize, 1usize, 0.0f64);
        for i in 0..3 {
            for j in (i + 1)..3 {
                if m[i][j].abs() > big {
                    big = m[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if big < 1e-30 {
            break;
        }
        let theta = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        for k in 0..3 {
            let (mkp, mkq) = (m[k][p], m[k][q]);
            m[k][p] = c * mkp - s * mkq;
            m[k][q] = s * mkp + c * mkq;
        }
        for k in 0..3 {
            let (mpk, mqk) = (m[p][k], m[q][k]);
            m[p][k] = c * mpk - s * mqk;
            m[q][k] = s * mpk + c * mqk;
        }
        for k in 0..3 {
            let (vkp, vkq) = (v[k][p], v[k][q]);
            v[k][p] = c * vkp - s * vkq;
            v[k][q] = s * vkp + c * vkq;
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap());
    let vals = [m[order[0]][order[0]], m[order[1]][order[1]], m[order[2]][order[2]]];
    let mut vecs = [[0.0; 3]; 3];
    for (slot, &idx) in order.iter().enumerate() {
        for k in 0..3 {
            vecs[slot][k] = v[k][idx];
        }
    }
    (vals, vecs)
}

/// Least-squares fit of aK + 2bH + c = 0 through (K, H) samples: the
/// smallest eigenvector of the normal matrix of [K, 2H, 1] rows.
pub fn lw_fit(samples: &[(f64, f64)]) -> Result<LwFit, GeometryError> {
    if samples.len() < 3 {
        return Err(GeometryError::SingularPoint { s: f64::NAN, theta: f64::NAN });
    }
    let mut m = [[0.0f64; 3]; 3];
    for &(k, h) in samples {
        let row = [k, 2.0 * h, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
        }
    }
    let (vals, vecs) = symmetric_eigen3(m);
    let n = samples.len() as f64;
    let residual = (vals[0].max(0.0) / n).sqrt();
    let [a, b2, c] = vecs[0];
    let b = b2; // the eigenvector is in (a, 2b-slot, c); slot carries b
    let fit_scale: f64 = (vals[2].max(1.0)).sqrt();
    let family = if (vals[1].max(0.0) / n).sqrt() <= 1e-8 * fit_scale.max(1.0) {
        Some([vecs[1][0], vecs[1][1], vecs[1][2]])
    } else {
        None
    };
    Ok(LwFit { a, b, c, residual, tubularity: a * c - b * b, family })
}

/// The rotation angle accumulated by a closed-profile candidate of
/// hyperbolic rotation over n half-periods: P(n, p) with K < 0.
pub fn period_value(n: u32, k: f64, p: f64) -> Result<f64, GeometryError> {
    if k >= 0.0 {
        return Err(GeometryError::PeriodCurvature(k));
    }
    let den = 1.0 + (k - 1.0) * p * p;
    if den <= 0.0 {
        return Ok(0.0);
    }
    let scale = (k * (k - 1.0) / den).sqrt();
    let m = Modulus::standard(p)?;
    let char_k = 1.0 / (1.0 - k);
    let f = complete_f(&m)?;
    let pi = complete_pi(char_k, &m)?;
    Ok(f64::from(n) * k.abs() / scale * (pi - f))
}

/// Solve P(n, p) = 2 pi for the modulus p of a closed profile of
/// hyperbolic rotation with Gauss curvature K < 0.
pub fn period_solve(k: f64, n: u32) -> Result<Modulus, GeometryError> {
    if k >= 0.0 {
        return Err(GeometryError::PeriodCurvature(k));
    }
    let target = 2.0 * std::f64::consts::PI;
    let p_max = (1.0 / (1.0 - k)).sqrt();
    let mut lo = 1e-9;
    let mut hi = p_max * (1.0 - 1e-12);
    let p_sup = period_value(n, k, lo)?;
    if p_sup <= target {
        return Err(GeometryError::NoClosedCurve { n, k, p_sup });
    }
    // P decreases from its supremum at p -> 0 to the zero at p_max.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let val = period_value(n, k, mid)?;
        if (val - target).abs() < 1e-13 {
            return Ok(Modulus::standard(mid)?);
        }
        if val > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Modulus::standard(0.5 * (lo + hi))?)
}

/// Mesh quality indicators gathered during assembly.
#[derive(Clone, Copy, Debug, Default)]
pub struct MeshQuality {
    pub max_quadric_violation: f64,
    pub max_k_error: f64,
    pub skipped_singular: usize,
}

/// A sampled surface patch with projected vertices and per-vertex
/// curvature estimates.
#[derive(Clone, Debug)]
pub struct SurfaceMesh {
    pub ns: usize,
    pub ntheta: usize,
    pub model: Model,
    /// Projected 3D vertices (zero-padded fourth slot for raw4 export).
    pub vertices: Vec<[f64; 4]>,
    pub k_est: Vec<f64>,
    pub h_est: Vec<f64>,
    pub faces: Vec<[usize; 4]>,
    pub quality: MeshQuality,
}

/// Assemble a mesh over an (s, theta) grid. Curvature estimates come
/// from the supplied estimator (None marks a skipped singular vertex).
#[allow(clippy::too_many_arguments)]
pub fn build_mesh(
    params: &CaseParams,
    s_range: (f64, f64),
    theta_range: (f64, f64),
    ns: usize,
    ntheta: usize,
    model: Model,
    wrap_theta: bool,
    estimator: &dyn Fn(f64, f64) -> Option<(f64, f64)>,
    k_target: f64,
) -> Result<SurfaceMesh, GeometryError> {
    build_mesh_with(
        &|s, theta| embed(params, s, theta),
        s_range,
        theta_range,
        ns,
        ntheta,
        model,
        wrap_theta,
        estimator,
        k_target,
    )
}

/// As `build_mesh`, over an arbitrary point sampler (e.g. a parallel
/// offset of a catalogue surface).
#[allow(clippy::too_many_arguments)]
pub fn build_mesh_with(
    point: &dyn Fn(f64, f64) -> Result<AmbientPoint, GeometryError>,
    s_range: (f64, f64),
    theta_range: (f64, f64),
    ns: usize,
    ntheta: usize,
    model: Model,
    wrap_theta: bool,
    estimator: &dyn Fn(f64, f64) -> Option<(f64, f64)>,
    k_target: f64,
) -> Result<SurfaceMesh, GeometryError> {
    let mut mesh = SurfaceMesh {
        ns,
        ntheta,
        model,
        vertices: Vec::with_capacity(ns * ntheta),
        k_est: Vec::with_capacity(ns * ntheta),
        h_est: Vec::with_capacity(ns * ntheta),
        faces: Vec::new(),
        quality: MeshQuality::default(),
    };
    for i in 0..ns {
        let s = s_range.0 + (s_range.1 - s_range.0) * i as f64 / (ns - 1).max(1) as f64;
        for j in 0..ntheta {
            let denom = if wrap_theta { ntheta } else { (ntheta - 1).max(1) };
            let theta = theta_range.0 + (theta_range.1 - theta_range.0) * j as f64 / denom as f64;
            let pt = point(s, theta)?;
            let violation = pt.quadric_residual().abs();
            if violation > mesh.quality.max_quadric_violation {
                mesh.quality.max_quadric_violation = violation;
            }
            let v3 = match model {
                Model::Raw4 => pt.x,
                _ => {
                    let [a, b, c] = project(&pt, model)?;
                    [a, b, c, 0.0]
                }
            };
            mesh.vertices.push(v3);
            match estimator(s, theta) {
                Some((k, h)) => {
                    let err = (k - k_target).abs();
                    if err > mesh.quality.max_k_error {
                        mesh.quality.max_k_error = err;
                    }
                    mesh.k_est.push(k);
                    mesh.h_est.push(h);
                }
                None => {
                    mesh.quality.skipped_singular += 1;
                    mesh.k_est.push(f64::NAN);
                    mesh.h_est.push(f64::NAN);
                }
            }
        }
    }
    for i in 0..ns - 1 {
        let j_max = if wrap_theta { ntheta } else { ntheta - 1 };
        for j in 0..j_max {
            let jn = (j + 1) % ntheta;
            mesh.faces.push([
                i * ntheta + j,
                i * ntheta + jn,
                (i + 1) * ntheta + jn,
                (i + 1) * ntheta + j,
            ]);
        }
    }
    Ok(mesh)
}
