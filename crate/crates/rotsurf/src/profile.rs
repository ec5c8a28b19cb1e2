//! Profile curves of rotational constant-Gauss-curvature surfaces.
//!
//! A surface of rotation in a space form of curvature `kappa` is swept
//! out by a profile curve with polar-type coordinates (r, psi, d). With
//! the profile speed normalised as in the classification, r satisfies a
//! quartic first-order ODE and psi is determined by r:
//!
//! ```text
//! r'^2  = 1/(kappa kappa1 kappa2) ((1-C) + kappa1 K r^2)(C - kappa1 (K+kappa) r^2)
//! psi'  = (kappa1 K r^2 + 1 - C) / (kappa2 (1 - kappa kappa1 r^2))
//! d^2   = (1 - kappa kappa1 r^2) / (kappa kappa2)
//! ```
//!
//! and, for parabolic rotation (kappa = -1):
//!
//! ```text
//! r'^2 = (C - K r^2)((K - 1) r^2 - C),   psi' = K - C/r^2,   d = 1/(2r).
//! ```
//!
//! The closed-form solutions are catalogued per curvature regime as
//! Jacobi-elliptic branches (`cn`, `dn`, `cd`, `sc`, `nc`, `dc`) with a
//! modulus p, an argument scale A, an amplitude, and a psi built from a
//! third-kind integral, a second-kind integral, or elementary functions.
//! All branches are normalised so that psi(0) = 0 and r(0) sits at an
//! extremum of the branch; the remaining rotation phase is an isometry.
//!
//! Conventions: K is the extrinsic Gauss curvature (K = 0, which gives
//! tubular surfaces, is excluded); C is the integration constant of the
//! quartic ODE, recovered from p by a linear solve of the psi equation
//! at s = 0. Branches are signed: sc- and sinh-type profiles cross
//! r = 0 and are kept signed so the embedding stays smooth there.

use crate::elliptic::{complete_f, e_am, jacobi, pi_am, EllipticError, Modulus, MODULUS_SNAP};
use thiserror::Error;

/// Tolerance for "at the boundary" parameter checks.
const PARAM_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("K = 0 yields tubular surfaces and is excluded")]
    TubularExcluded,
    #[error("unsupported rotation for this space form: {0}")]
    UnsupportedRotation(&'static str),
    #[error("Euclidean profiles have no closed form here; use integrate_ode")]
    EuclideanClosedForm,
    #[error("branch {branch} is not defined for K = {k}")]
    BranchRegimeMismatch { branch: &'static str, k: f64 },
    #[error("modulus {p} outside the admissible interval [{lo}, {hi}]")]
    ModulusOutOfRange { p: f64, lo: f64, hi: f64 },
    #[error("constant C = {c} violates {bound}")]
    ConstantOutOfBounds { c: f64, bound: String },
    #[error("no modulus in [{lo}, {hi}] attains C = {c}; achievable range is [{c_lo}, {c_hi}]")]
    ConstantUnattainable { c: f64, lo: f64, hi: f64, c_lo: f64, c_hi: f64 },
    #[error("degenerate limit: {0}")]
    DegenerateLimit(&'static str),
    #[error("third-kind characteristic {k} reaches 1 at this modulus")]
    CharacteristicTooLarge { k: f64 },
    #[error("hyperbolic-rotation profile needs r^2 > 1, violated at s = {s} (r = {r})")]
    RadiusBelowAxis { s: f64, r: f64 },
    #[error("parabolic profile needs r > 0, violated at s = {s}")]
    NonPositiveRadius { s: f64 },
    #[error("ODE right-hand side is negative at r0 = {r0}")]
    BadInitialRadius { r0: f64 },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// Rotation type of the isometry subgroup sweeping the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

impl Rotation {
    pub fn name(&self) -> &'static str {
        match self {
            Rotation::Elliptic => "elliptic",
            Rotation::Hyperbolic => "hyperbolic",
            Rotation::Parabolic => "parabolic",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "elliptic" => Some(Rotation::Elliptic),
            "hyperbolic" => Some(Rotation::Hyperbolic),
            "parabolic" => Some(Rotation::Parabolic),
            _ => None,
        }
    }
}

/// A space form (curvature kappa in {-1, 0, +1}) together with the
/// rotation type. Hyperbolic and parabolic rotations exist only in H^3;
/// kappa = 0 is Euclidean 3-space, supported only through the ODE
/// integrator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceForm {
    kappa: i8,
    rotation: Rotation,
}

impl SpaceForm {
    pub fn new(kappa: i8, rotation: Rotation) -> Result<Self, ProfileError> {
        match (kappa, rotation) {
            (1, Rotation::Elliptic)
            | (-1, Rotation::Elliptic)
            | (-1, Rotation::Hyperbolic)
            | (-1, Rotation::Parabolic)
            | (0, Rotation::Elliptic) => Ok(SpaceForm { kappa, rotation }),
            (1, Rotation::Hyperbolic) => {
                Err(ProfileError::UnsupportedRotation("no hyperbolic rotations in S^3"))
            }
            (1, Rotation::Parabolic) => {
                Err(ProfileError::UnsupportedRotation("no parabolic rotations in S^3"))
            }
            (0, _) => Err(ProfileError::UnsupportedRotation(
                "Euclidean space is only supported with elliptic rotation",
            )),
            _ => Err(ProfileError::UnsupportedRotation("kappa must be -1, 0 or +1")),
        }
    }

    pub fn s3() -> Self {
        SpaceForm { kappa: 1, rotation: Rotation::Elliptic }
    }

    pub fn h3_elliptic() -> Self {
        SpaceForm { kappa: -1, rotation: Rotation::Elliptic }
    }

    pub fn h3_hyperbolic() -> Self {
        SpaceForm { kappa: -1, rotation: Rotation::Hyperbolic }
    }

    pub fn h3_parabolic() -> Self {
        SpaceForm { kappa: -1, rotation: Rotation::Parabolic }
    }

    pub fn euclidean() -> Self {
        SpaceForm { kappa: 0, rotation: Rotation::Elliptic }
    }

    pub fn kappa(&self) -> f64 {
        f64::from(self.kappa)
    }

    pub fn rotation(&self) -> Rotation {
        self.rotation
    }

    pub fn is_euclidean(&self) -> bool {
        self.kappa == 0
    }

    pub fn is_parabolic(&self) -> bool {
        self.rotation == Rotation::Parabolic
    }

    /// Sign of the rotation-plane metric. `None` for the isotropic
    /// (parabolic) and Euclidean splittings where the pair
    /// (kappa1, kappa2) is not used.
    pub fn kappa1(&self) -> Option<f64> {
        match (self.kappa, self.rotation) {
            (1, Rotation::Elliptic) => Some(1.0),
            (-1, Rotation::Elliptic) => Some(1.0),
            (-1, Rotation::Hyperbolic) => Some(-1.0),
            _ => None,
        }
    }

    /// Sign of the complement-plane metric; kappa*kappa1*kappa2 > 0.
    pub fn kappa2(&self) -> Option<f64> {
        match (self.kappa, self.rotation) {
            (1, Rotation::Elliptic) => Some(1.0),
            (-1, Rotation::Elliptic) => Some(-1.0),
            (-1, Rotation::Hyperbolic) => Some(1.0),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.kappa, self.rotation) {
            (1, _) => "s3",
            (0, _) => "euclidean",
            (_, Rotation::Elliptic) => "h3-elliptic",
            (_, Rotation::Hyperbolic) => "h3-hyperbolic",
            (_, Rotation::Parabolic) => "h3-parabolic",
        }
    }
}

/// Function-shape tag of one catalogue row. Numbered tags distinguish
/// rows of the same Jacobi ratio within one curvature regime, in the
/// order they are catalogued.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Cn,
    Dn,
    Cd1,
    Cd2,
    Nc1,
    Nc2,
    Sc1,
    Sc2,
    Dc1,
    Dc2,
    /// Flat trigonometric row in S^3 (K = -1) or the parabolic flat
    /// front (K = 1).
    Flat,
    /// Clifford tori: r constant, psi = s (S^3, K = -1, C = 0).
    Clifford,
    Snowman,
    Hourglass,
    Peach,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Cn => "cn",
            Branch::Dn => "dn",
            Branch::Cd1 => "cd1",
            Branch::Cd2 => "cd2",
            Branch::Nc1 => "nc1",
            Branch::Nc2 => "nc2",
            Branch::Sc1 => "sc1",
            Branch::Sc2 => "sc2",
            Branch::Dc1 => "dc1",
            Branch::Dc2 => "dc2",
            Branch::Flat => "flat",
            Branch::Clifford => "clifford",
            Branch::Snowman => "snowman",
            Branch::Hourglass => "hourglass",
            Branch::Peach => "peach",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "cn" => Branch::Cn,
            "dn" => Branch::Dn,
            "cd1" => Branch::Cd1,
            "cd2" => Branch::Cd2,
            "nc1" => Branch::Nc1,
            "nc2" => Branch::Nc2,
            "sc1" => Branch::Sc1,
            "sc2" => Branch::Sc2,
            "dc1" => Branch::Dc1,
            "dc2" => Branch::Dc2,
            "flat" => Branch::Flat,
            "clifford" => Branch::Clifford,
            "snowman" => Branch::Snowman,
            "hourglass" => Branch::Hourglass,
            "peach" => Branch::Peach,
            _ => return None,
        })
    }
}

/// One row of the solution catalogue: space form, target curvature K
/// and function branch, validated for regime consistency.
#[derive(Clone, Copy, Debug)]
pub struct CaseId {
    space: SpaceForm,
    k: f64,
    branch: Branch,
}

impl CaseId {
    pub fn new(space: SpaceForm, k: f64, branch: Branch) -> Result<Self, ProfileError> {
        if !k.is_finite() {
            return Err(ProfileError::BranchRegimeMismatch { branch: branch.name(), k });
        }
        if k == 0.0 {
            return Err(ProfileError::TubularExcluded);
        }
        if space.is_euclidean() {
            return Err(ProfileError::EuclideanClosedForm);
        }
        let valid = classify(space, k)?;
        if valid.iter().any(|c| c.branch == branch) {
            Ok(CaseId { space, k, branch })
        } else {
            Err(ProfileError::BranchRegimeMismatch { branch: branch.name(), k })
        }
    }

    pub fn space(&self) -> SpaceForm {
        self.space
    }

    pub fn k_target(&self) -> f64 {
        self.k
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// Whether this row is parametrised by the integration constant C
    /// directly (the parabolic rows, whose modulus is pinned by K).
    pub fn parametrised_by_c(&self) -> bool {
        self.space.is_parabolic()
    }

    /// Admissible closed interval for the modulus p. For the Clifford
    /// row the "modulus" slot carries the constant radius r0; for
    /// parabolic rows other than the flat front it is the single pinned
    /// modulus value.
    pub fn modulus_interval(&self) -> (f64, f64) {
        let k = self.k;
        match (self.space.kappa, self.space.rotation, self.branch) {
            (-1, Rotation::Elliptic, Branch::Dn) if k < 0.0 => ((1.0 / (1.0 - k)).sqrt(), 1.0),
            (-1, Rotation::Elliptic, Branch::Dn) if k > 1.0 => ((1.0 / k).sqrt(), 1.0),
            (-1, Rotation::Elliptic, Branch::Nc1) => ((1.0 - k).sqrt(), 1.0),
            (-1, Rotation::Elliptic, Branch::Nc2) => (k.sqrt(), 1.0),
            (-1, Rotation::Hyperbolic, Branch::Dn) if k < 0.0 => (0.0, (1.0 / (1.0 - k)).sqrt()),
            (-1, Rotation::Hyperbolic, Branch::Dn) if k > 1.0 => (0.0, (1.0 / k).sqrt()),
            (-1, Rotation::Hyperbolic, Branch::Nc1) => (0.0, k.sqrt()),
            (-1, Rotation::Hyperbolic, Branch::Nc2) => (0.0, (1.0 - k).sqrt()),
            (-1, Rotation::Hyperbolic, Branch::Peach) => (0.0, f64::INFINITY),
            (-1, Rotation::Parabolic, Branch::Flat) => (0.0, f64::INFINITY),
            (-1, Rotation::Parabolic, Branch::Dn) if k < 0.0 => {
                let p = (1.0 / (1.0 - k)).sqrt();
                (p, p)
            }
            (-1, Rotation::Parabolic, Branch::Dn) => {
                let p = (1.0 / k).sqrt();
                (p, p)
            }
            (-1, Rotation::Parabolic, Branch::Nc1) => {
                let p = (1.0 - k).sqrt();
                (p, p)
            }
            (-1, Rotation::Parabolic, Branch::Nc2) => {
                let p = k.sqrt();
                (p, p)
            }
            _ => (0.0, 1.0),
        }
    }

    /// Bounds on the integration constant C for this regime, as
    /// (lower, upper) with `None` for an unbounded side.
    pub fn c_bounds(&self) -> (Option<f64>, Option<f64>) {
        let k = self.k;
        match (self.space.kappa, self.space.rotation) {
            (1, _) => {
                if k > 0.0 {
                    (Some(0.0), Some(k + 1.0))
                } else if k + 1.0 < 0.0 {
                    (Some(k + 1.0), Some(1.0))
                } else {
                    // -1 <= K < 0, including the flat boundary row.
                    (Some(0.0), Some(1.0))
                }
            }
            (-1, Rotation::Elliptic) => {
                if k > 1.0 {
                    (Some(0.0), None)
                } else if k < 0.0 {
                    (None, Some(1.0))
                } else {
                    (None, None)
                }
            }
            (-1, Rotation::Hyperbolic) => {
                if k > 1.0 {
                    (None, Some(1.0 - k))
                } else if k < 0.0 {
                    (Some(1.0 - k), None)
                } else if k == 1.0 {
                    // Peach fronts: C = -p^2 with p in (0, inf).
                    (None, Some(0.0))
                } else {
                    (None, None)
                }
            }
            (-1, Rotation::Parabolic) => {
                if k >= 1.0 {
                    (Some(0.0), None)
                } else if k < 0.0 {
                    (None, Some(0.0))
                } else {
                    match self.branch {
                        Branch::Nc1 => (None, Some(0.0)),
                        _ => (Some(0.0), None),
                    }
                }
            }
            _ => (None, None),
        }
    }
}

/// Enumerate all catalogue rows valid for the given space form and
/// curvature.
pub fn classify(space: SpaceForm, k: f64) -> Result<Vec<CaseId>, ProfileError> {
    if !k.is_finite() || k == 0.0 {
        return Err(ProfileError::TubularExcluded);
    }
    if space.is_euclidean() {
        return Err(ProfileError::EuclideanClosedForm);
    }
    let mk = |branch| CaseId { space, k, branch };
    let branches: &[Branch] = match (space.kappa, space.rotation) {
        (1, _) => {
            if k > 0.0 {
                &[Branch::Cn, Branch::Dn]
            } else if k == -1.0 {
                &[Branch::Flat, Branch::Clifford]
            } else if k > -1.0 {
                &[Branch::Cd1, Branch::Cd2]
            } else {
                &[Branch::Cn, Branch::Dn]
            }
        }
        (-1, Rotation::Elliptic) => {
            if k < 0.0 {
                &[Branch::Cn, Branch::Dn]
            } else if k < 1.0 {
                &[Branch::Nc1, Branch::Sc1, Branch::Sc2, Branch::Nc2]
            } else if k == 1.0 {
                &[Branch::Snowman, Branch::Hourglass]
            } else {
                &[Branch::Cn, Branch::Dn]
            }
        }
        (-1, Rotation::Hyperbolic) => {
            if k < 0.0 {
                &[Branch::Dn]
            } else if k < 1.0 {
                &[Branch::Nc1, Branch::Dc1, Branch::Dc2, Branch::Nc2]
            } else if k == 1.0 {
                &[Branch::Peach]
            } else {
                &[Branch::Dn]
            }
        }
        (-1, Rotation::Parabolic) => {
            if k < 0.0 {
                &[Branch::Dn]
            } else if k < 1.0 {
                &[Branch::Nc1, Branch::Nc2]
            } else if k == 1.0 {
                &[Branch::Flat]
            } else {
                &[Branch::Dn]
            }
        }
        _ => return Err(ProfileError::UnsupportedRotation("unrecognised space form")),
    };
    Ok(branches.iter().map(|&b| mk(b)).collect())
}

/// How psi is assembled for a row. `coeff` multiplies the special
/// function of the scaled argument A*s; `linear` multiplies s itself.
#[derive(Clone, Copy, Debug)]
enum PsiSpec {
    ThirdKind { k: f64, coeff: f64, linear: f64 },
    SecondKind { coeff: f64, linear: f64 },
    Elementary,
}

/// A fully resolved catalogue row: modulus, amplitude, argument scale,
/// psi assembly and the recovered integration constant.
#[derive(Clone, Debug)]
pub struct CaseParams {
    case: CaseId,
    modulus: Modulus,
    amp: f64,
    scale: f64,
    psi: PsiSpec,
    c: f64,
}

impl CaseParams {
    /// Build a row from its modulus (for the Clifford row, from the
    /// constant radius r0; for the parabolic flat front p = sqrt(C)).
    /// Parabolic Jacobi rows pin p by K and must be built via `from_c`.
    pub fn from_modulus(case: CaseId, p: f64) -> Result<Self, ProfileError> {
        if case.parametrised_by_c() && case.branch != Branch::Flat {
            let (lo, hi) = case.modulus_interval();
            if (p - lo).abs() > 1e-9 {
                return Err(ProfileError::ModulusOutOfRange { p, lo, hi });
            }
            // The modulus alone does not determine the row; C does.
            return Err(ProfileError::ConstantOutOfBounds {
                c: f64::NAN,
                bound: "parabolic rows are parametrised by C, use from_c".into(),
            });
        }
        if case.space.is_parabolic() && case.branch == Branch::Flat {
            return Self::from_c(case, p * p);
        }
        Self::build(case, p, f64::NAN)
    }

    /// Build a row from the integration constant C.
    pub fn from_c(case: CaseId, c: f64) -> Result<Self, ProfileError> {
        check_c_bounds(case, c)?;
        if case.space.is_parabolic() {
            let p = if case.branch == Branch::Flat { c.sqrt() } else { case.modulus_interval().0 };
            return Self::build(case, p, c);
        }
        if case.branch == Branch::Clifford {
            if c.abs() > PARAM_EPS {
                return Err(ProfileError::ConstantOutOfBounds {
                    c,
                    bound: "C = 0 (Clifford tori)".into(),
                });
            }
            // C = 0 leaves r0 free; pick the square Clifford torus.
            return Self::build(case, 0.5_f64.sqrt(), f64::NAN);
        }
        let p = modulus_from_c(case, c)?;
        Self::build(case, p.p(), f64::NAN)
    }

    /// Assemble coefficients; `c_in` is used only for parabolic rows.
    fn build(case: CaseId, p: f64, c_in: f64) -> Result<Self, ProfileError> {
        let (lo, hi) = case.modulus_interval();
        if !(p.is_finite() && p >= lo - PARAM_EPS && p <= hi + PARAM_EPS) {
            return Err(ProfileError::ModulusOutOfRange { p, lo, hi });
        }
        let p = p.clamp(lo, hi);
        let k = case.k;
        let q2 = (1.0 - p) * (1.0 + p);
        // (amplitude, scale, psi).
        let (amp, scale, psi) = match (case.space.kappa, case.space.rotation, case.branch) {
            // --- S^3, elliptic rotation ---
            (1, _, Branch::Cn) if k < -1.0 => {
                let den = p * p - (k + 1.0);
                let a = (k * (k + 1.0) / den).sqrt();
                row_pi(p * p / den, a, p * p / (k + 1.0), k / a, -k)
            }
            (1, _, Branch::Dn) if k < -1.0 => {
                let den = 1.0 - (k + 1.0) * p * p;
                let a = (k * (k + 1.0) / den).sqrt();
                row_pi(1.0 / den, a, 1.0 / (k + 1.0), k / a, -k)
            }
            (1, _, Branch::Cd1) => {
                let den = (k + 1.0) * p * p - k;
                let a = ((-k) * (k + 1.0) / den).sqrt();
                row_pi(p * p / den, a, (k + 1.0) * p * p / k, 1.0 / a, 0.0)
            }
            (1, _, Branch::Cd2) => {
                let den = k + 1.0 - k * p * p;
                let a = ((-k) * (k + 1.0) / den).sqrt();
                row_pi(p * p / den, a, k * p * p / (k + 1.0), -1.0 / a, 1.0)
            }
            (1, _, Branch::Cn) => {
                let den = k + p * p;
                let a = (k * (k + 1.0) / den).sqrt();
                row_pi(p * p / den, a, -p * p / k, (k + 1.0) / a, -k)
            }
            (1, _, Branch::Dn) => {
                let den = k * p * p + 1.0;
                let a = (k * (k + 1.0) / den).sqrt();
                row_pi(1.0 / den, a, -1.0 / k, (k + 1.0) / a, -k)
            }
            (1, _, Branch::Flat) => (q2.sqrt(), p, PsiSpec::Elementary),
            (1, _, Branch::Clifford) => (p, 1.0, PsiSpec::Elementary),
            // --- H^3, elliptic rotation ---
            (-1, Rotation::Elliptic, Branch::Cn) if k < 0.0 => {
                let den = 1.0 - k - p * p;
                let a = ((-k) * (1.0 - k) / den).sqrt();
                row_pi(p * p / den, a, p * p / (1.0 - k), k / a, -k)
            }
            (-1, Rotation::Elliptic, Branch::Dn) if k < 0.0 => {
                let den = (1.0 - k) * p * p - 1.0;
                let a = ((-k) * (1.0 - k) / den).sqrt();
                row_pi(1.0 / den, a, 1.0 / (1.0 - k), k / a, -k)
            }
            (-1, Rotation::Elliptic, Branch::Nc1) => {
                let den = k - 1.0 + p * p;
                let a = (k * (1.0 - k) / den).sqrt();
                row_pi(q2 / den, a, (1.0 - k) / (a * a), a * q2 / k, -a * a * p * p / (1.0 - k))
            }
            (-1, Rotation::Elliptic, Branch::Sc1) => {
                let den = 1.0 + p * p * (k - 1.0);
                let a = (k * (1.0 - k) / den).sqrt();
                row_pi(q2 / den, a, a * a * p * p / (1.0 - k), a * q2 / k, -1.0)
            }
            (-1, Rotation::Elliptic, Branch::Sc2) => {
                let den = 1.0 - k * p * p;
                let a = (k * (1.0 - k) / den).sqrt();
                row_pi(q2 / den, a, a * a * p * p / k, a * q2 / (k - 1.0), 0.0)
            }
            (-1, Rotation::Elliptic, Branch::Nc2) => {
                let den = p * p - k;
                let a = (k * (1.0 - k) / den).sqrt();
                row_pi(q2 / den, a, k / (a * a), a * q2 / (k - 1.0), a * a * q2 / (1.0 - k))
            }
            (-1, Rotation::Elliptic, Branch::Snowman) => {
                (q2.sqrt() / p, 1.0 / p, PsiSpec::Elementary)
            }
            (-1, Rotation::Elliptic, Branch::Hourglass) => (q2.sqrt(), p, PsiSpec::Elementary),
            (-1, Rotation::Elliptic, Branch::Cn) => {
                let den = k - p * p;
                let a = (k * (k - 1.0) / den).sqrt();
                row_pi(p * p / den, a, p * p / k, (k - 1.0) / a, -k)
            }
            (-1, Rotation::Elliptic, Branch::Dn) => {
                let den = k * p * p - 1.0;
                let a = (k * (k - 1.0) / den).sqrt();
                row_pi(1.0 / den, a, 1.0 / k, (k - 1.0) / a, -k)
            }
            // --- H^3, hyperbolic rotation ---
            (-1, Rotation::Hyperbolic, Branch::Dn) if k < 0.0 => {
                let den = 1.0 + (k - 1.0) * p * p;
                let a = (k * (k - 1.0) / den).sqrt();
                row_pi(1.0 / den, a, 1.0 / (1.0 - k), -k / a, k)
            }
            (-1, Rotation::Hyperbolic, Branch::Nc1) => {
                let den = k - p * p;
                let a = (k * (1.0 - k) / den).sqrt();
                row_pi(q2 / den, a, -k / (a * a), a * q2 / (k - 1.0), a * a * q2 / (1.0 - k))
            }
            (-1, Rotation::Hyperbolic, Branch::Dc1) => {
                let den = k - p * p * (k - 1.0);
                let a = (k * (1.0 - k) / den).sqrt();
                row_pi(1.0 / den, a, k / (k - 1.0), -1.0 / a, 1.0)
            }
            (-1, Rotation::Hyperbolic, Branch::Dc2) => {
                let den = 1.0 - k * q2;
                let a = (k * (1.0 - k) / den).sqrt();
                row_pi(1.0 / den, a, (k - 1.0) / k, 1.0 / a, 0.0)
            }
            (-1, Rotation::Hyperbolic, Branch::Nc2) => {
                let den = 1.0 - k - p * p;
                let a = (k * (1.0 - k) / den).sqrt();
                row_pi(q2 / den, a, (k - 1.0) / (a * a), a * q2 / k, a * a * p * p / (k - 1.0))
            }
            (-1, Rotation::Hyperbolic, Branch::Peach) => {
                ((1.0 + p * p).sqrt(), p, PsiSpec::Elementary)
            }
            (-1, Rotation::Hyperbolic, Branch::Dn) => {
                let den = 1.0 - k * p * p;
                let a = (k * (k - 1.0) / den).sqrt();
                row_pi(1.0 / den, a, 1.0 / k, (1.0 - k) / a, k)
            }
            // --- H^3, parabolic rotation ---
            (-1, Rotation::Parabolic, Branch::Dn) if k < 0.0 => {
                let a = ((k - 1.0) * c_in).sqrt();
                row_pi(c_in / k, a, p * p, -k / a, k)
            }
            (-1, Rotation::Parabolic, Branch::Nc1) => {
                let a = (-c_in).sqrt();
                ((c_in / (k - 1.0)).sqrt(), a, PsiSpec::SecondKind { coeff: 1.0 / a, linear: 0.0 })
            }
            (-1, Rotation::Parabolic, Branch::Nc2) => {
                let a = c_in.sqrt();
                ((c_in / k).sqrt(), a, PsiSpec::SecondKind { coeff: -1.0 / a, linear: 1.0 })
            }
            (-1, Rotation::Parabolic, Branch::Flat) => (p, p, PsiSpec::Elementary),
            (-1, Rotation::Parabolic, Branch::Dn) => {
                let a = (k * c_in).sqrt();
                row_pi(c_in / (k - 1.0), a, p * p, -(k - 1.0) / a, k)
            }
            _ => return Err(ProfileError::BranchRegimeMismatch { branch: case.branch.name(), k }),
        };
        if !amp.is_finite() || !scale.is_finite() {
            return Err(ProfileError::DegenerateLimit(
                "amplitude or argument scale diverges at this parameter boundary",
            ));
        }
        if amp.abs() < 1e-10 && case.branch != Branch::Clifford {
            return Err(ProfileError::DegenerateLimit(
                "amplitude vanishes: the surface collapses to an orbit of the axis (point or geodesic limit)",
            ));
        }
        if scale.abs() < 1e-10 {
            return Err(ProfileError::DegenerateLimit(
                "argument scale vanishes: constant-radius (Clifford-type) limit",
            ));
        }
        if let PsiSpec::ThirdKind { k: char_k, .. } = psi {
            if char_k >= 1.0 - PARAM_EPS && p < 1.0 - MODULUS_SNAP {
                return Err(ProfileError::CharacteristicTooLarge { k: char_k });
            }
        }
        // Elementary rows (peach, parabolic flat front) admit p > 1.
        let modulus = Modulus::new(if case.branch == Branch::Clifford { 0.0 } else { p })?;
        let mut params = CaseParams { case, modulus, amp, scale, psi, c: c_in };
        if !case.space.is_parabolic() {
            // Recover C by a linear solve of the psi equation at s = 0.
            let at0 = params.eval(0.0)?;
            let k1 = case.space.kappa1().expect("non-parabolic");
            let k2 = case.space.kappa2().expect("non-parabolic");
            let kap = case.space.kappa();
            let r2 = at0.r * at0.r;
            params.c = k1 * k * r2 + 1.0 - at0.dpsi * k2 * (1.0 - kap * k1 * r2);
        }
        Ok(params)
    }

    pub fn case(&self) -> CaseId {
        self.case
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Amplitude prefactor of r (for the Clifford row, the radius r0).
    pub fn amplitude(&self) -> f64 {
        self.amp
    }

    /// Argument scale A multiplying s inside the Jacobi functions.
    pub fn argument_scale(&self) -> f64 {
        self.scale
    }

    pub fn c_constant(&self) -> f64 {
        self.c
    }

    /// Period of the profile data (r, psi') in s, when it exists.
    /// nc/dc/sc rows are pole-limited and the fronts are non-periodic.
    pub fn profile_period(&self) -> Option<f64> {
        match self.case.branch {
            Branch::Cn | Branch::Cd1 | Branch::Cd2 => {
                complete_f(&self.modulus).ok().map(|f| 4.0 * f / self.scale)
            }
            Branch::Dn => complete_f(&self.modulus).ok().map(|f| 2.0 * f / self.scale),
            Branch::Flat if self.case.space.kappa == 1 => {
                Some(2.0 * std::f64::consts::PI / self.scale)
            }
            Branch::Clifford => Some(2.0 * std::f64::consts::PI),
            _ => None,
        }
    }

    /// Default sampling window: one period for periodic rows, the
    /// pole-free window (shrunk 2%) for nc/dc rows, a few amplitude
    /// scales for the fronts. Non-periodic windows are additionally
    /// clamped so the profile data stays in a plot-friendly range
    /// (hyperbolic growth otherwise ruins both renders and the
    /// floating-point headroom of the quadric constraint).
    pub fn default_window(&self) -> (f64, f64) {
        if let Some(t) = self.profile_period() {
            return (0.0, t);
        }
        let candidate = match self.case.branch {
            Branch::Nc1 | Branch::Nc2 | Branch::Dc1 | Branch::Dc2 | Branch::Sc1 | Branch::Sc2 => {
                match complete_f(&self.modulus) {
                    Ok(f) => 0.98 * f / self.scale,
                    Err(_) => 5.0 / self.scale,
                }
            }
            _ => 2.5 / self.scale,
        };
        let lim = self.clamp_half_width(candidate);
        (-lim, lim)
    }

    /// Largest half-width not exceeding `candidate` at which the profile
    /// data is still moderate: |r|, d <= 12 and |psi| <= 2.5.
    fn clamp_half_width(&self, candidate: f64) -> f64 {
        let moderate = |w: f64| -> bool {
            for s in [w, -w] {
                match profile(self, s) {
                    Ok(sample) => {
                        if sample.r.abs() > 12.0 || sample.d > 12.0 || sample.psi.abs() > 2.5 {
                            return false;
                        }
                    }
                    Err(_) => return false,
                }
            }
            true
        };
        if moderate(candidate) {
            return candidate;
        }
        let (mut lo, mut hi) = (0.0, candidate);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if moderate(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Evaluate r, psi and their derivatives (no quadric data).
    fn eval(&self, s: f64) -> Result<RawSample, ProfileError> {
        let p = self.modulus.p();
        let a = self.scale;
        let u = a * s;
        let (r, dr) = match self.case.branch {
            Branch::Flat if self.case.space.kappa == 1 => {
                (self.amp * u.cos(), -self.amp * a * u.sin())
            }
            Branch::Flat => (self.amp * u.cosh(), self.amp * a * u.sinh()),
            Branch::Clifford => (self.amp, 0.0),
            Branch::Snowman | Branch::Peach => (self.amp * u.cosh(), self.amp * a * u.sinh()),
            Branch::Hourglass => (self.amp * u.sinh(), self.amp * a * u.cosh()),
            _ => {
                let ev = jacobi(u, &self.modulus)?;
                let q2 = (1.0 - p) * (1.0 + p);
                let (val, deriv) = match self.case.branch {
                    Branch::Cn => (ev.cn, -ev.sn * ev.dn),
                    Branch::Dn => (ev.dn, -p * p * ev.sn * ev.cn),
                    Branch::Cd1 | Branch::Cd2 => {
                        (ev.cn / ev.dn, -q2 * ev.sn / (ev.dn * ev.dn))
                    }
                    Branch::Sc1 | Branch::Sc2 => {
                        if ev.cn.abs() < 1e-13 {
                            return Err(EllipticError::Pole {
                                function: "sc",
                                pole: s,
                            }
                            .into());
                        }
                        (ev.sn / ev.cn, ev.dn / (ev.cn * ev.cn))
                    }
                    Branch::Nc1 | Branch::Nc2 => {
                        if ev.cn.abs() < 1e-13 {
                            return Err(EllipticError::Pole {
                                function: "nc",
                                pole: s,
                            }
                            .into());
                        }
                        (1.0 / ev.cn, ev.sn * ev.dn / (ev.cn * ev.cn))
                    }
                    Branch::Dc1 | Branch::Dc2 => {
                        if ev.cn.abs() < 1e-13 {
                            return Err(EllipticError::Pole {
                                function: "dc",
                                pole: s,
                            }
                            .into());
                        }
                        (ev.dn / ev.cn, q2 * ev.sn / (ev.cn * ev.cn))
                    }
                    _ => unreachable!("elementary rows handled above"),
                };
                (self.amp * val, self.amp * a * deriv)
            }
        };
        let (psi, dpsi) = match self.psi {
            PsiSpec::ThirdKind { k, coeff, linear } => {
                let pi_val = pi_am(k, u, &self.modulus)?;
                let sn = jacobi(u, &self.modulus)?.sn;
                (coeff * pi_val + linear * s, coeff * a / (1.0 - k * sn * sn) + linear)
            }
            PsiSpec::SecondKind { coeff, linear } => {
                let e_val = e_am(u, &self.modulus)?;
                let dn = jacobi(u, &self.modulus)?.dn;
                (coeff * e_val + linear * s, coeff * a * dn * dn + linear)
            }
            PsiSpec::Elementary => self.elementary_psi(s),
        };
        Ok(RawSample { r, dr, psi, dpsi })
    }

    fn elementary_psi(&self, s: f64) -> (f64, f64) {
        let p = self.modulus.p();
        match (self.case.space.kappa, self.case.space.rotation, self.case.branch) {
            (1, _, Branch::Flat) => {
                let u = p * s;
                let (sin, cos) = u.sin_cos();
                let dpsi = 1.0 - p * p / (p * p * cos * cos + sin * sin);
                (s - atan_scaled_tan(1.0 / p, u), dpsi)
            }
            (1, _, Branch::Clifford) => (s, 1.0),
            (-1, Rotation::Elliptic, Branch::Snowman) => {
                let u = s / p;
                let den = u.cosh().powi(2) - p * p * u.sinh().powi(2);
                ((p * u.tanh()).atanh() - s, 1.0 / den - 1.0)
            }
            (-1, Rotation::Elliptic, Branch::Hourglass) => {
                let u = p * s;
                let den = u.cosh().powi(2) - p * p * u.sinh().powi(2);
                ((p * u.tanh()).atanh() - s, p * p / den - 1.0)
            }
            (-1, Rotation::Hyperbolic, Branch::Peach) => {
                let u = p * s;
                let den = p * p * u.cosh().powi(2) + u.sinh().powi(2);
                (s - (u.tanh() / p).atan(), 1.0 - p * p / den)
            }
            (-1, Rotation::Parabolic, Branch::Flat) => {
                let u = p * s;
                (s - u.tanh() / p, u.tanh().powi(2))
            }
            _ => unreachable!("no elementary psi for this branch"),
        }
    }
}

struct RawSample {
    r: f64,
    dr: f64,
    psi: f64,
    dpsi: f64,
}

fn row_pi(amp_sq: f64, a: f64, k: f64, coeff: f64, linear: f64) -> (f64, f64, PsiSpec) {
    (amp_sq.sqrt(), a, PsiSpec::ThirdKind { k, coeff, linear })
}

/// Continuous extension of arctan(c tan(x)) across the tangent poles
/// (valid for c > 0): x plus a bounded correction.
fn atan_scaled_tan(c: f64, x: f64) -> f64 {
    let (sin, cos) = x.sin_cos();
    x + ((c - 1.0) * sin * cos / (cos * cos + c * sin * sin)).atan()
}

/// One evaluated profile point with analytic derivatives. `d` is the
/// complement-plane coordinate from the quadric constraint.
#[derive(Clone, Copy, Debug)]
pub struct ProfileSample {
    pub s: f64,
    pub r: f64,
    pub psi: f64,
    pub d: f64,
    pub dr: f64,
    pub dpsi: f64,
}

/// Evaluate the closed-form profile at s.
pub fn profile(params: &CaseParams, s: f64) -> Result<ProfileSample, ProfileError> {
    let raw = params.eval(s)?;
    let space = params.case.space;
    let r2 = raw.r * raw.r;
    let d = match (space.kappa, space.rotation) {
        (1, _) => {
            debug_assert!(r2 <= 1.0 + 1e-9, "S^3 profile radius exceeds 1");
            (1.0 - r2).max(0.0).sqrt()
        }
        (-1, Rotation::Elliptic) => (1.0 + r2).sqrt(),
        (-1, Rotation::Hyperbolic) => {
            if r2 < 1.0 - 1e-9 {
                return Err(ProfileError::RadiusBelowAxis { s, r: raw.r });
            }
            (r2 - 1.0).max(0.0).sqrt()
        }
        (-1, Rotation::Parabolic) => {
            if raw.r <= 0.0 {
                return Err(ProfileError::NonPositiveRadius { s });
            }
            1.0 / (2.0 * raw.r)
        }
        _ => return Err(ProfileError::EuclideanClosedForm),
    };
    Ok(ProfileSample { s, r: raw.r, psi: raw.psi, d, dr: raw.dr, dpsi: raw.dpsi })
}

fn check_c_bounds(case: CaseId, c: f64) -> Result<(), ProfileError> {
    if !c.is_finite() {
        return Err(ProfileError::ConstantOutOfBounds { c, bound: "C must be finite".into() });
    }
    let (lo, hi) = case.c_bounds();
    if let Some(lo) = lo {
        if c < lo - PARAM_EPS {
            return Err(ProfileError::ConstantOutOfBounds {
                c,
                bound: format!("C >= {lo} for this regime"),
            });
        }
    }
    if let Some(hi) = hi {
        if c > hi + PARAM_EPS {
            return Err(ProfileError::ConstantOutOfBounds {
                c,
                bound: format!("C <= {hi} for this regime"),
            });
        }
    }
    Ok(())
}

/// Integration constant of a row, recovered from its modulus.
pub fn c_from_modulus(case: CaseId, p: f64) -> Result<f64, ProfileError> {
    Ok(CaseParams::from_modulus(case, p)?.c_constant())
}

/// Invert `c_from_modulus` on the row's p-interval by bracketed
/// bisection (C is monotone along every row, but only a sign change is
/// assumed).
pub fn modulus_from_c(case: CaseId, c: f64) -> Result<Modulus, ProfileError> {
    check_c_bounds(case, c)?;
    if case.space.is_parabolic() {
        let p = if case.branch == Branch::Flat {
            if c <= 0.0 {
                return Err(ProfileError::ConstantOutOfBounds {
                    c,
                    bound: "C > 0 for the parabolic flat front".into(),
                });
            }
            c.sqrt()
        } else {
            case.modulus_interval().0
        };
        return Ok(Modulus::new(p)?);
    }
    if case.branch == Branch::Clifford {
        return Ok(Modulus::standard(0.0)?);
    }
    let (lo, hi) = case.modulus_interval();
    let hi = if hi.is_finite() { hi } else { 50.0 };
    let width = hi - lo;
    let n = 512;
    let mut prev: Option<(f64, f64)> = None;
    let mut c_min = f64::INFINITY;
    let mut c_max = f64::NEG_INFINITY;
    let mut bracket = None;
    for i in 0..=n {
        let frac = i as f64 / n as f64;
        let p = lo + width * (1e-7 + (1.0 - 2e-7) * frac);
        let cv = match c_from_modulus(case, p) {
            Ok(v) => v,
            Err(_) => continue,
        };
        c_min = c_min.min(cv);
        c_max = c_max.max(cv);
        if let Some((pp, pc)) = prev {
            if (pc - c) * (cv - c) <= 0.0 {
                bracket = Some((pp, p));
                break;
            }
        }
        prev = Some((p, cv));
    }
    let (mut a, mut b) = bracket.ok_or(ProfileError::ConstantUnattainable {
        c,
        lo,
        hi,
        c_lo: c_min,
        c_hi: c_max,
    })?;
    let fa = c_from_modulus(case, a)? - c;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() < 1e-15 * (1.0 + mid.abs()) {
            break;
        }
        let fm = match c_from_modulus(case, mid) {
            Ok(v) => v - c,
            Err(_) => break,
        };
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Modulus::new(0.5 * (a + b))?)
}

/// Right-hand side of the quartic ODE for r'^2 in the given space form.
pub fn ode_rhs_r(space: SpaceForm, k: f64, c: f64, r: f64) -> f64 {
    let r2 = r * r;
    match (space.kappa, space.rotation) {
        (0, _) => ((1.0 - c) + k * r2) * (c - k * r2),
        (-1, Rotation::Parabolic) => (c - k * r2) * ((k - 1.0) * r2 - c),
        _ => {
            let k1 = space.kappa1().expect("non-parabolic");
            let k2 = space.kappa2().expect("non-parabolic");
            let kap = space.kappa();
            1.0 / (kap * k1 * k2)
                * ((1.0 - c) + k1 * k * r2)
                * (c - k1 * (k + kap) * r2)
        }
    }
}

/// Right-hand side of the psi equation.
pub fn ode_rhs_psi(space: SpaceForm, k: f64, c: f64, r: f64) -> f64 {
    let r2 = r * r;
    match (space.kappa, space.rotation) {
        (0, _) => (1.0 - c) + k * r2,
        (-1, Rotation::Parabolic) => k - c / r2,
        _ => {
            let k1 = space.kappa1().expect("non-parabolic");
            let k2 = space.kappa2().expect("non-parabolic");
            let kap = space.kappa();
            (k1 * k * r2 + 1.0 - c) / (k2 * (1.0 - kap * k1 * r2))
        }
    }
}

/// Residuals of the governing ODEs at s, from analytic derivatives:
/// (r'^2 - RHS, psi' - RHS).
pub fn ode_residual(params: &CaseParams, s: f64) -> Result<(f64, f64), ProfileError> {
    let sample = profile(params, s)?;
    let space = params.case.space;
    let (k, c) = (params.case.k, params.c);
    let res_r = sample.dr * sample.dr - ode_rhs_r(space, k, c, sample.r);
    let res_psi = sample.dpsi - ode_rhs_psi(space, k, c, sample.r);
    Ok((res_r, res_psi))
}

/// One point of an integrated trajectory.
#[derive(Clone, Copy, Debug)]
pub struct OdeSample {
    pub s: f64,
    pub r: f64,
    pub dr: f64,
    pub psi: f64,
}

/// Fixed-step RK4 integration of the profile ODEs from r(s0) = r0 at a
/// branch extremum. The quartic first-order equation is advanced in its
/// second-order form r'' = Q'(r)/2, which passes smoothly through the
/// square-root turning points; the initial slope is +sqrt(Q(r0)).
/// Also the only generation path for the Euclidean space form.
pub fn integrate_ode(
    space: SpaceForm,
    k: f64,
    c: f64,
    r0: f64,
    s_span: (f64, f64),
    steps: usize,
) -> Result<Vec<OdeSample>, ProfileError> {
    if k == 0.0 {
        return Err(ProfileError::TubularExcluded);
    }
    let q0 = ode_rhs_r(space, k, c, r0);
    if q0 < -1e-9 {
        return Err(ProfileError::BadInitialRadius { r0 });
    }
    // d(r'^2)/dr / 2, from the factored quartic pref*(a+b r^2)(c+e r^2).
    let (pref, qa, qb, qc, qe) = quartic_coeffs(space, k, c);
    let accel = |r: f64| pref * (qb * r * (qc + qe * r * r) + (qa + qb * r * r) * qe * r);
    let dpsi = |r: f64| ode_rhs_psi(space, k, c, r);

    let (s0, s1) = s_span;
    let steps = steps.max(1);
    let h = (s1 - s0) / steps as f64;
    let mut state = [r0, q0.max(0.0).sqrt(), 0.0];
    let mut out = Vec::with_capacity(steps + 1);
    out.push(OdeSample { s: s0, r: state[0], dr: state[1], psi: state[2] });
    let deriv = |y: &[f64; 3]| [y[1], accel(y[0]), dpsi(y[0])];
    for i in 0..steps {
        let k1 = deriv(&state);
        let mut y = state;
        for j in 0..3 {
            y[j] = state[j] + 0.5 * h * k1[j];
        }
        let k2 = deriv(&y);
        for j in 0..3 {
            y[j] = state[j] + 0.5 * h * k2[j];
        }
        let k3 = deriv(&y);
        for j in 0..3 {
            y[j] = state[j] + h * k3[j];
        }
        let k4 = deriv(&y);
        for j in 0..3 {
            state[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let s = s0 + (i + 1) as f64 * h;
        out.push(OdeSample { s, r: state[0], dr: state[1], psi: state[2] });
    }
    Ok(out)
}

/// Factor the r'^2 right-hand side as pref*(a + b r^2)(c + e r^2).
fn quartic_coeffs(space: SpaceForm, k: f64, c: f64) -> (f64, f64, f64, f64, f64) {
    match (space.kappa, space.rotation) {
        (0, _) => (1.0, 1.0 - c, k, c, -k),
        (-1, Rotation::Parabolic) => (1.0, c, -k, -c, k - 1.0),
        _ => {
            let k1 = space.kappa1().expect("non-parabolic");
            let k2 = space.kappa2().expect("non-parabolic");
            let kap = space.kappa();
            (1.0 / (kap * k1 * k2), 1.0 - c, k1 * k, c, -k1 * (k + kap))
        }
    }
}
