//! Jacobi elliptic functions and elliptic integrals.
//!
//! Conventions: the modulus is `p` (not the parameter `m = p^2`), with
//! complementary modulus `q = sqrt(1 - p^2)`. Incomplete integrals of
//! the first, second and third kind are exposed in the Legendre (angle)
//! convention `F(phi, p)`, `E(phi, p)`, `Pi(k; phi, p)` and, for the
//! second and third kind, additionally composed with the Jacobi
//! amplitude: `e_am(s) = E(am(s), p)` and `pi_am(k; s) = Pi(k; am(s), p)`.
//! In the composed convention the quasi-periodicity
//! `pi_am(k; s + 2n F_p) = pi_am(k; s) + 2n Pi^k_p` holds.
//!
//! Evaluation of `sn`, `cn`, `dn`, `am` uses the descending Landen/AGM
//! recursion; the integrals use Carlson symmetric forms. Both paths are
//! accurate to roughly 1e-12 in the interior of the standard domains
//! (degrading near `p = 1` and near poles of the ratio functions).

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

/// Moduli closer than this to 0 or 1 are snapped to the exact
/// trigonometric or hyperbolic degeneration.
pub const MODULUS_SNAP: f64 = 1e-12;

/// Denominators smaller than this (in absolute value) are treated as
/// poles of the ratio functions.
const POLE_EPS: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum EllipticError {
    #[error("argument must be finite, got {0}")]
    NonFiniteArgument(f64),
    #[error("modulus {0} outside the admissible range")]
    ModulusOutOfRange(f64),
    #[error("operation requires a standard modulus in [0,1], got regime {0:?}")]
    NonStandardModulus(ModulusRegime),
    #[error("{function} has a pole near s = {pole}")]
    Pole { function: &'static str, pole: f64 },
    #[error("complete elliptic integral of the first kind diverges at p = 1")]
    DivergentAtUnitModulus,
    #[error("characteristic k = {0} is not admissible here (requires k < 1)")]
    CharacteristicOutOfRange(f64),
    #[error("integrand pole of Pi crossed near amplitude {0}")]
    PiPoleCrossed(f64),
}

/// How a raw modulus is reduced to a standard one in [0,1].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusRegime {
    /// p in [0,1]; no transformation needed.
    Standard,
    /// p > 1; reduced via the real (reciprocal-modulus) transformation.
    Reciprocal,
    /// purely imaginary modulus i*p, stored by its magnitude p > 0;
    /// reduced via the imaginary-modulus transformation.
    Imaginary,
}

/// An elliptic modulus together with the transformation regime that
/// maps it onto a standard modulus in [0,1].
#[derive(Clone, Copy, Debug)]
pub struct Modulus {
    raw: f64,
    regime: ModulusRegime,
}

impl Modulus {
    /// A modulus on the real axis: standard for p in [0,1], reciprocal
    /// regime for p > 1.
    pub fn new(p: f64) -> Result<Self, EllipticError> {
        if !p.is_finite() || p < 0.0 {
            return Err(EllipticError::ModulusOutOfRange(p));
        }
        let regime = if p <= 1.0 {
            ModulusRegime::Standard
        } else {
            ModulusRegime::Reciprocal
        };
        Ok(Self { raw: snap(p), regime })
    }

    /// A modulus required to be standard (p in [0,1]).
    pub fn standard(p: f64) -> Result<Self, EllipticError> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(EllipticError::ModulusOutOfRange(p));
        }
        Ok(Self { raw: snap(p), regime: ModulusRegime::Standard })
    }

    /// A purely imaginary modulus i*magnitude, magnitude > 0.
    pub fn imaginary(magnitude: f64) -> Result<Self, EllipticError> {
        if !magnitude.is_finite() || magnitude <= 0.0 {
            return Err(EllipticError::ModulusOutOfRange(magnitude));
        }
        Ok(Self { raw: magnitude, regime: ModulusRegime::Imaginary })
    }

    pub fn regime(&self) -> ModulusRegime {
        self.regime
    }

    /// The stored magnitude (the standard modulus itself in the
    /// standard regime).
    pub fn p(&self) -> f64 {
        self.raw
    }

    /// Complementary modulus q = sqrt(1 - p^2); standard regime only.
    pub fn q(&self) -> f64 {
        debug_assert_eq!(self.regime, ModulusRegime::Standard);
        // (1-p)(1+p) avoids cancellation for p near 1.
        ((1.0 - self.raw) * (1.0 + self.raw)).sqrt()
    }

    fn require_standard(&self) -> Result<f64, EllipticError> {
        match self.regime {
            ModulusRegime::Standard => Ok(self.raw),
            other => Err(EllipticError::NonStandardModulus(other)),
        }
    }
}

fn snap(p: f64) -> f64 {
    if p.abs() < MODULUS_SNAP {
        0.0
    } else if (p - 1.0).abs() < MODULUS_SNAP {
        1.0
    } else {
        p
    }
}

/// Values of the pole-type-n Jacobi functions and the amplitude at one
/// argument.
#[derive(Clone, Copy, Debug)]
pub struct JacobiEval {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    pub am: f64,
}

/// The twelve Jacobi ratio functions en/fn and 1/en.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioCode {
    Sn,
    Cn,
    Dn,
    Sc,
    Cd,
    Dc,
    Nc,
    Nd,
    Sd,
    Ns,
    Cs,
    Ds,
}

impl RatioCode {
    pub const ALL: [RatioCode; 12] = [
        RatioCode::Sn,
        RatioCode::Cn,
        RatioCode::Dn,
        RatioCode::Sc,
        RatioCode::Cd,
        RatioCode::Dc,
        RatioCode::Nc,
        RatioCode::Nd,
        RatioCode::Sd,
        RatioCode::Ns,
        RatioCode::Cs,
        RatioCode::Ds,
    ];

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "sn" => RatioCode::Sn,
            "cn" => RatioCode::Cn,
            "dn" => RatioCode::Dn,
            "sc" => RatioCode::Sc,
            "cd" => RatioCode::Cd,
            "dc" => RatioCode::Dc,
            "nc" => RatioCode::Nc,
            "nd" => RatioCode::Nd,
            "sd" => RatioCode::Sd,
            "ns" => RatioCode::Ns,
            "cs" => RatioCode::Cs,
            "ds" => RatioCode::Ds,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            RatioCode::Sn => "sn",
            RatioCode::Cn => "cn",
            RatioCode::Dn => "dn",
            RatioCode::Sc => "sc",
            RatioCode::Cd => "cd",
            RatioCode::Dc => "dc",
            RatioCode::Nc => "nc",
            RatioCode::Nd => "nd",
            RatioCode::Sd => "sd",
            RatioCode::Ns => "ns",
            RatioCode::Cs => "cs",
            RatioCode::Ds => "ds",
        }
    }

    /// (numerator, denominator) with 'n' meaning the constant 1.
    fn parts(&self) -> (char, char) {
        let s = self.name().as_bytes();
        (s[0] as char, s[1] as char)
    }
}

/// A real magnitude together with a flag marking a purely imaginary
/// value. Every formula in scope recombines such intermediates into
/// real outputs, so no full complex arithmetic is carried.
#[derive(Clone, Copy, Debug)]
pub struct MaybeImaginary {
    pub value: f64,
    pub imaginary: bool,
}

impl MaybeImaginary {
    pub fn real(value: f64) -> Self {
        Self { value, imaginary: false }
    }

    pub fn imag(value: f64) -> Self {
        Self { value, imaginary: true }
    }
}

/// sn, cn, dn and am at argument `s` for a standard modulus.
pub fn jacobi(s: f64, m: &Modulus) -> Result<JacobiEval, EllipticError> {
    if !s.is_finite() {
        return Err(EllipticError::NonFiniteArgument(s));
    }
    let p = m.require_standard()?;
    if p == 0.0 {
        return Ok(JacobiEval { sn: s.sin(), cn: s.cos(), dn: 1.0, am: s });
    }
    if p == 1.0 {
        let sech = 1.0 / s.cosh();
        return Ok(JacobiEval { sn: s.tanh(), cn: sech, dn: sech, am: s.sinh().atan() });
    }
    let am = amplitude_agm(s, p, m.q());
    let sn = am.sin();
    let cn = am.cos();
    // dn >= q > 0 for a standard interior modulus, so the square root
    // carries no sign ambiguity.
    let dn = (1.0 - (p * sn) * (p * sn)).sqrt();
    Ok(JacobiEval { sn, cn, dn, am })
}

/// Jacobi amplitude via the descending Landen/AGM recursion.
fn amplitude_agm(s: f64, p: f64, q: f64) -> f64 {
    const MAX_LEVELS: usize = 32;
    let mut a = [0.0f64; MAX_LEVELS + 1];
    let mut c = [0.0f64; MAX_LEVELS + 1];
    a[0] = 1.0;
    c[0] = p;
    let mut an = 1.0f64;
    let mut bn = q;
    let mut n = 0;
    while c[n].abs() > f64::EPSILON * an && n < MAX_LEVELS {
        let next_a = 0.5 * (an + bn);
        let next_c = 0.5 * (an - bn);
        bn = (an * bn).sqrt();
        an = next_a;
        n += 1;
        a[n] = an;
        c[n] = next_c;
    }
    let mut phi = (1u64 << n) as f64 * an * s;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] * phi.sin() / a[k]).asin());
    }
    phi
}

/// A Jacobi ratio function at a general (real or imaginary) modulus,
/// reduced to a standard modulus via the real and imaginary-modulus
/// transformations.
pub fn jacobi_general(s: f64, m: &Modulus, code: RatioCode) -> Result<f64, EllipticError> {
    if !s.is_finite() {
        return Err(EllipticError::NonFiniteArgument(s));
    }
    match m.regime {
        ModulusRegime::Standard => {
            let ev = jacobi(s, m)?;
            ratio(&ev, m.p(), code, s)
        }
        ModulusRegime::Reciprocal => {
            // sn_{1/p}(s) = p sn_p(s/p), cn_{1/p}(s) = dn_p(s/p),
            // dn_{1/p}(s) = cn_p(s/p), applied here with the roles
            // swapped: the stored magnitude is 1/p > 1.
            let p = 1.0 / m.raw;
            let inner = Modulus::standard(p)?;
            let ev = jacobi(s * m.raw, &inner)?;
            let reduced = JacobiEval { sn: p * ev.sn, cn: ev.dn, dn: ev.cn, am: ev.am };
            general_ratio(&reduced, code, s)
        }
        ModulusRegime::Imaginary => {
            // sn_{ip}(s) = q' sd_{p'}(s/q'), cn_{ip}(s) = cd_{p'}(s/q'),
            // dn_{ip}(s) = nd_{p'}(s/q') with p' = p/sqrt(1+p^2) and
            // q' = 1/sqrt(1+p^2).
            let scale = (1.0 + m.raw * m.raw).sqrt();
            let qp = 1.0 / scale;
            let pp = m.raw / scale;
            let inner = Modulus::standard(pp)?;
            let ev = jacobi(s * scale, &inner)?;
            if ev.dn.abs() < POLE_EPS {
                return Err(EllipticError::Pole { function: code.name(), pole: s });
            }
            let reduced = JacobiEval {
                sn: qp * ev.sn / ev.dn,
                cn: ev.cn / ev.dn,
                dn: 1.0 / ev.dn,
                am: ev.am,
            };
            general_ratio(&reduced, code, s)
        }
    }
}

/// Build any of the twelve ratios from already-transformed sn, cn, dn.
fn general_ratio(ev: &JacobiEval, code: RatioCode, s: f64) -> Result<f64, EllipticError> {
    let pick = |c: char| match c {
        's' => ev.sn,
        'c' => ev.cn,
        'd' => ev.dn,
        _ => 1.0,
    };
    let (num, den) = code.parts();
    let d = pick(den);
    if d.abs() < POLE_EPS {
        return Err(EllipticError::Pole { function: code.name(), pole: s });
    }
    Ok(pick(num) / d)
}

/// A ratio at a standard modulus, with the pole position located for
/// the error report.
fn ratio(ev: &JacobiEval, p: f64, code: RatioCode, s: f64) -> Result<f64, EllipticError> {
    let (num, den) = code.parts();
    let pick = |c: char| match c {
        's' => ev.sn,
        'c' => ev.cn,
        'd' => ev.dn,
        _ => 1.0,
    };
    let d = pick(den);
    if d.abs() < POLE_EPS {
        let fp = complete_f(&Modulus::standard(p)?)?;
        let pole = match den {
            // cn vanishes at odd multiples of F_p.
            'c' => {
                let k = ((s / fp - 1.0) / 2.0).round();
                (2.0 * k + 1.0) * fp
            }
            // sn vanishes at even multiples of F_p.
            's' => 2.0 * fp * (s / (2.0 * fp)).round(),
            _ => s,
        };
        return Err(EllipticError::Pole { function: code.name(), pole });
    }
    Ok(pick(num) / d)
}

/// A Jacobi ratio at imaginary argument i*s, evaluated through Jacobi's
/// imaginary transformations: sn_p(is) = i sc_q(s), cn_p(is) = nc_q(s),
/// dn_p(is) = dc_q(s). The result carries an imaginary flag whenever an
/// odd number of `s`-type factors is involved.
pub fn jacobi_imaginary_argument(
    s: f64,
    m: &Modulus,
    code: RatioCode,
) -> Result<MaybeImaginary, EllipticError> {
    if !s.is_finite() {
        return Err(EllipticError::NonFiniteArgument(s));
    }
    let p = m.require_standard()?;
    let comp = Modulus::standard(Modulus::standard(p)?.q())?;
    let ev = jacobi(s, &comp)?;
    if ev.cn.abs() < POLE_EPS {
        // sc, nc and dc of the complementary modulus all blow up where
        // cn_q vanishes, i.e. at odd multiples of F_q.
        let fq = complete_f(&comp)?;
        let k = ((s / fq - 1.0) / 2.0).round();
        return Err(EllipticError::Pole { function: code.name(), pole: (2.0 * k + 1.0) * fq });
    }
    // Transformed building blocks at argument is: values and imaginary
    // flags of sn, cn, dn.
    let blocks = |c: char| -> (f64, bool) {
        match c {
            's' => (ev.sn / ev.cn, true),
            'c' => (1.0 / ev.cn, false),
            'd' => (ev.dn / ev.cn, false),
            _ => (1.0, false),
        }
    };
    let (num, den) = code.parts();
    let (nv, ni) = blocks(num);
    let (dv, di) = blocks(den);
    if dv.abs() < POLE_EPS {
        return Err(EllipticError::Pole { function: code.name(), pole: s });
    }
    let raw = nv / dv;
    Ok(match (ni, di) {
        (false, false) => MaybeImaginary::real(raw),
        (true, false) => MaybeImaginary::imag(raw),
        // 1/i = -i
        (false, true) => MaybeImaginary::imag(-raw),
        // i/i = 1
        (true, true) => MaybeImaginary::real(raw),
    })
}

/// Complete elliptic integral of the first kind F_p.
pub fn complete_f(m: &Modulus) -> Result<f64, EllipticError> {
    let p = m.require_standard()?;
    if p == 1.0 {
        return Err(EllipticError::DivergentAtUnitModulus);
    }
    let q = m.q();
    Ok(carlson::rf(0.0, q * q, 1.0))
}

/// Complete elliptic integral of the second kind E_p.
pub fn complete_e(m: &Modulus) -> Result<f64, EllipticError> {
    let p = m.require_standard()?;
    if p == 1.0 {
        return Ok(1.0);
    }
    let q2 = m.q() * m.q();
    Ok(carlson::rf(0.0, q2, 1.0) - (p * p / 3.0) * carlson::rd(0.0, q2, 1.0))
}

/// Complete elliptic integral of the third kind Pi^k_p, k < 1.
pub fn complete_pi(k: f64, m: &Modulus) -> Result<f64, EllipticError> {
    let p = m.require_standard()?;
    if p == 1.0 {
        return Err(EllipticError::DivergentAtUnitModulus);
    }
    if k >= 1.0 {
        return Err(EllipticError::CharacteristicOutOfRange(k));
    }
    let q2 = m.q() * m.q();
    Ok(carlson::rf(0.0, q2, 1.0) + (k / 3.0) * carlson::rj(0.0, q2, 1.0, 1.0 - k))
}

/// Incomplete elliptic integral of the first kind in the Legendre
/// (angle) convention, extended to all real amplitudes by
/// F(phi + n pi) = F(phi) + 2n F_p.
pub fn incomplete_f(phi: f64, m: &Modulus) -> Result<f64, EllipticError> {
    if !phi.is_finite() {
        return Err(EllipticError::NonFiniteArgument(phi));
    }
    let p = m.require_standard()?;
    if p == 1.0 {
        if phi.abs() >= FRAC_PI_2 {
            return Err(EllipticError::DivergentAtUnitModulus);
        }
        return Ok(phi.sin().atanh());
    }
    let (n, phir) = reduce_amplitude(phi);
    let sp = phir.sin();
    let cp = phir.cos();
    let val = sp * carlson::rf(cp * cp, 1.0 - (p * sp) * (p * sp), 1.0);
    if n == 0 {
        return Ok(val);
    }
    Ok(val + 2.0 * n as f64 * complete_f(m)?)
}

/// Incomplete elliptic integral of the second kind in the Legendre
/// (angle) convention, extended by E(phi + n pi) = E(phi) + 2n E_p.
pub fn incomplete_e(phi: f64, m: &Modulus) -> Result<f64, EllipticError> {
    if !phi.is_finite() {
        return Err(EllipticError::NonFiniteArgument(phi));
    }
    let p = m.require_standard()?;
    if p == 1.0 {
        // E(phi, 1) = sin(phi) on the principal branch; the extension
        // adds 2n E_1 = 2n.
        let (n, phir) = reduce_amplitude(phi);
        return Ok(phir.sin() + 2.0 * n as f64);
    }
    let (n, phir) = reduce_amplitude(phi);
    let sp = phir.sin();
    let cp = phir.cos();
    let y = 1.0 - (p * sp) * (p * sp);
    let val = sp * carlson::rf(cp * cp, y, 1.0)
        - (p * p / 3.0) * sp * sp * sp * carlson::rd(cp * cp, y, 1.0);
    if n == 0 {
        return Ok(val);
    }
    Ok(val + 2.0 * n as f64 * complete_e(m)?)
}

/// Incomplete elliptic integral of the third kind in the Legendre
/// (angle) convention with characteristic `k` (integrand factor
/// 1/(1 - k sin^2)). Reports a pole error instead of a principal value
/// whenever the integration path meets k sin^2 = 1.
pub fn incomplete_pi(k: f64, phi: f64, m: &Modulus) -> Result<f64, EllipticError> {
    if !phi.is_finite() {
        return Err(EllipticError::NonFiniteArgument(phi));
    }
    let p = m.require_standard()?;
    if p == 1.0 {
        return Err(EllipticError::DivergentAtUnitModulus);
    }
    let (n, phir) = reduce_amplitude(phi);
    if k >= 1.0 {
        // The integrand pole sits at |sin| = 1/sqrt(k); with k >= 1 it
        // is met on any path leaving the principal quadrant.
        let reach = (1.0 / k.sqrt()).asin();
        if n != 0 || phir.abs() >= reach {
            return Err(EllipticError::PiPoleCrossed(reach.copysign(phi)));
        }
    }
    let sp = phir.sin();
    let cp = phir.cos();
    let rho = 1.0 - k * sp * sp;
    if rho <= POLE_EPS {
        return Err(EllipticError::PiPoleCrossed(phir));
    }
    let y = 1.0 - (p * sp) * (p * sp);
    let val = sp * carlson::rf(cp * cp, y, 1.0)
        + (k / 3.0) * sp * sp * sp * carlson::rj(cp * cp, y, 1.0, rho);
    if n == 0 {
        return Ok(val);
    }
    Ok(val + 2.0 * n as f64 * complete_pi(k, m)?)
}

/// Split an amplitude as phi = n pi + phir with phir in [-pi/2, pi/2].
fn reduce_amplitude(phi: f64) -> (i64, f64) {
    let n = (phi / PI).round();
    (n as i64, phi - n * PI)
}

/// E composed with the amplitude: the Jacobi-argument form of the
/// second-kind integral, E(am_p(s), p).
pub fn e_am(s: f64, m: &Modulus) -> Result<f64, EllipticError> {
    let ev = jacobi(s, m)?;
    incomplete_e(ev.am, m)
}

/// Pi composed with the amplitude: the Jacobi-argument form
/// `int_0^s du / (1 - k sn_p^2(u))` of the third-kind integral.
pub fn pi_am(k: f64, s: f64, m: &Modulus) -> Result<f64, EllipticError> {
    let p = m.require_standard()?;
    if p == 0.0 {
        // Closed form of int du/(1 - k sin^2 u), continued across the
        // quadrant boundaries.
        return pi_trig(k, s);
    }
    if p == 1.0 {
        // sn = tanh: int du/(1 - k tanh^2 u) has an elementary form.
        if (1.0 - k).abs() < POLE_EPS {
            // int du/(1 - tanh^2 u) = int cosh^2 u du
            return Ok(0.5 * (s.sinh() * s.cosh() + s));
        }
        // Partial fractions of 1/((1-t^2)(1-k t^2)) for t = tanh u.
        let t = s.tanh();
        if k > 1.0 && (1.0 - k * t * t) <= 0.0 {
            return Err(EllipticError::PiPoleCrossed((1.0 / k.sqrt()).atanh()));
        }
        let g = if k > 0.0 {
            let r = k.sqrt();
            (r * t).atanh() / r
        } else if k < 0.0 {
            let r = (-k).sqrt();
            (r * t).atan() / r
        } else {
            0.0
        };
        return Ok((s - k * g) / (1.0 - k));
    }
    let ev = jacobi(s, m)?;
    incomplete_pi(k, ev.am, m)
}

/// int_0^s du/(1 - k sin^2 u), continued to all real s.
fn pi_trig(k: f64, s: f64) -> Result<f64, EllipticError> {
    let (n, sr) = reduce_amplitude(s);
    if k >= 1.0 {
        let reach = (1.0 / k.sqrt()).asin();
        if n != 0 || sr.abs() >= reach {
            return Err(EllipticError::PiPoleCrossed(reach.copysign(s)));
        }
    }
    let omk = 1.0 - k;
    if omk <= 0.0 && n != 0 {
        return Err(EllipticError::PiPoleCrossed(s));
    }
    let principal = if omk > 0.0 {
        (omk.sqrt() * sr.tan()).atan() / omk.sqrt()
    } else {
        // k > 1 inside the pole-free window: arctanh branch.
        let g = (-omk).sqrt();
        (g * sr.tan()).atanh() / g
    };
    let complete = if n != 0 { PI / omk.sqrt() } else { 0.0 };
    Ok(principal + n as f64 * complete)
}

/// Reciprocal-modulus transformation of the third-kind integral:
/// Pi(k; 1/p | a s) = p Pi(k p^2; p | a s / p) for a standard p.
pub fn pi_reciprocal_modulus(k: f64, p: f64, a: f64, s: f64) -> Result<f64, EllipticError> {
    if a == 0.0 {
        return Err(EllipticError::NonFiniteArgument(a));
    }
    let m = Modulus::standard(p)?;
    Ok(p * pi_am(k * p * p, a * s / p, &m)?)
}

/// Imaginary-argument transformation of the third-kind integral,
/// Pi(k; p | i a s). The result is purely imaginary:
/// for k = 1, Pi(1; p | i u) = (i/q^2) (E(u|q) - p^2 u);
/// for k != 1, Pi(k; p | i u) = i u/(1-k) - (i k/(1-k)) Pi(1-k; q | u).
pub fn pi_imaginary_argument(
    k: f64,
    p: f64,
    a: f64,
    s: f64,
) -> Result<MaybeImaginary, EllipticError> {
    if a == 0.0 {
        return Err(EllipticError::NonFiniteArgument(a));
    }
    let m = Modulus::standard(p)?;
    let comp = Modulus::standard(m.q())?;
    let u = a * s;
    if (k - 1.0).abs() < POLE_EPS {
        let q2 = m.q() * m.q();
        let val = (e_am(u, &comp)? - p * p * u) / q2;
        return Ok(MaybeImaginary::imag(val));
    }
    let val = u / (1.0 - k) - (k / (1.0 - k)) * pi_am(1.0 - k, u, &comp)?;
    Ok(MaybeImaginary::imag(val))
}

/// Imaginary-modulus transformation of the third-kind integral:
/// Pi(k; ip | a s) = (p'^2/k') a s + (k q'^3/k') Pi(k'; p' | a s / q')
/// with p' = p/sqrt(1+p^2), q' = 1/sqrt(1+p^2), k' = p'^2 + k q'^2.
pub fn pi_imaginary_modulus(k: f64, p: f64, a: f64, s: f64) -> Result<f64, EllipticError> {
    if a == 0.0 || !p.is_finite() || p <= 0.0 {
        return Err(EllipticError::NonFiniteArgument(a));
    }
    let scale = (1.0 + p * p).sqrt();
    let pp = p / scale;
    let qp = 1.0 / scale;
    let kp = pp * pp + k * qp * qp;
    let m = Modulus::standard(pp)?;
    Ok((pp * pp / kp) * a * s + (k * qp * qp * qp / kp) * pi_am(kp, a * s / qp, &m)?)
}

mod carlson {
    //! Carlson symmetric elliptic integrals RF, RC, RD, RJ by the
    //! standard duplication algorithm with fifth-order series tails.
    //! The error tolerances are chosen so that the truncation error is
    //! below double-precision roundoff.

    pub fn rf(x: f64, y: f64, z: f64) -> f64 {
        const ERRTOL: f64 = 0.0025;
        let (mut x, mut y, mut z) = (x, y, z);
        let (ave, dx, dy, dz) = loop {
            let sx = x.sqrt();
            let sy = y.sqrt();
            let sz = z.sqrt();
            let lam = sx * (sy + sz) + sy * sz;
            x = 0.25 * (x + lam);
            y = 0.25 * (y + lam);
            z = 0.25 * (z + lam);
            let ave = (x + y + z) / 3.0;
            let dx = (ave - x) / ave;
            let dy = (ave - y) / ave;
            let dz = (ave - z) / ave;
            if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
                break (ave, dx, dy, dz);
            }
        };
        let e2 = dx * dy - dz * dz;
        let e3 = dx * dy * dz;
        (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt()
    }

    pub fn rc(x: f64, y: f64) -> f64 {
        const ERRTOL: f64 = 0.0012;
        debug_assert!(y > 0.0, "rc requires y > 0, got {y}");
        let (mut x, mut y) = (x, y);
        let (ave, s) = loop {
            let lam = 2.0 * (x * y).sqrt() + y;
            x = 0.25 * (x + lam);
            y = 0.25 * (y + lam);
            let ave = (x + y + y) / 3.0;
            let s = (y - ave) / ave;
            if s.abs() < ERRTOL {
                break (ave, s);
            }
        };
        (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / ave.sqrt()
    }

    pub fn rd(x: f64, y: f64, z: f64) -> f64 {
        const ERRTOL: f64 = 0.0015;
        const C1: f64 = 3.0 / 14.0;
        const C2: f64 = 1.0 / 6.0;
        const C3: f64 = 9.0 / 22.0;
        const C4: f64 = 3.0 / 26.0;
        let (mut x, mut y, mut z) = (x, y, z);
        let mut sum = 0.0;
        let mut fac = 1.0;
        let (ave, dx, dy, dz) = loop {
            let sx = x.sqrt();
            let sy = y.sqrt();
            let sz = z.sqrt();
            let lam = sx * (sy + sz) + sy * sz;
            sum += fac / (sz * (z + lam));
            fac *= 0.25;
            x = 0.25 * (x + lam);
            y = 0.25 * (y + lam);
            z = 0.25 * (z + lam);
            let ave = 0.2 * (x + y + 3.0 * z);
            let dx = (ave - x) / ave;
            let dy = (ave - y) / ave;
            let dz = (ave - z) / ave;
            if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
                break (ave, dx, dy, dz);
            }
        };
        let ea = dx * dy;
        let eb = dz * dz;
        let ec = ea - eb;
        let ed = ea - 6.0 * eb;
        let ee = ed + ec + ec;
        3.0 * sum
            + fac
                * (1.0
                    + ed * (-C1 + 0.25 * C3 * ed - 1.5 * C4 * dz * ee)
                    + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea)))
                / (ave * ave.sqrt())
    }

    /// RJ for strictly positive fourth argument (no principal values).
    pub fn rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
        const ERRTOL: f64 = 0.0015;
        const C1: f64 = 3.0 / 14.0;
        const C2: f64 = 1.0 / 3.0;
        const C3: f64 = 3.0 / 22.0;
        const C4: f64 = 3.0 / 26.0;
        debug_assert!(p > 0.0, "rj requires p > 0, got {p}");
        let (mut x, mut y, mut z, mut p) = (x, y, z, p);
        let mut sum = 0.0;
        let mut fac = 1.0;
        let (ave, dx, dy, dz, dp) = loop {
            let sx = x.sqrt();
            let sy = y.sqrt();
            let sz = z.sqrt();
            let lam = sx * (sy + sz) + sy * sz;
            let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
            let beta = p * (p + lam) * (p + lam);
            sum += fac * rc(alpha, beta);
            fac *= 0.25;
            x = 0.25 * (x + lam);
            y = 0.25 * (y + lam);
            z = 0.25 * (z + lam);
            p = 0.25 * (p + lam);
            let ave = 0.2 * (x + y + z + 2.0 * p);
            let dx = (ave - x) / ave;
            let dy = (ave - y) / ave;
            let dz = (ave - z) / ave;
            let dp = (ave - p) / ave;
            if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < ERRTOL {
                break (ave, dx, dy, dz, dp);
            }
        };
        let ea = dx * (dy + dz) + dy * dz;
        let eb = dx * dy * dz;
        let ec = dp * dp;
        let ed = ea - 3.0 * ec;
        let ee = eb + 2.0 * dp * (ea - ec);
        3.0 * sum
            + fac
                * (1.0
                    + ed * (-C1 + 0.75 * C3 * ed - 1.5 * C4 * ee)
                    + eb * (0.5 * C2 + dp * (-C3 - C3 + dp * C4))
                    + dp * ea * (C2 - dp * C3)
                    - C2 * dp * ec)
                / (ave * ave.sqrt())
    }
}
