//! The Laplace-domain kernel `M(s)` and the transfer functions built on it.
//!
//! With the exponential weights `a^α`, `b^α` the constitutive law becomes, after
//! a Laplace transform in time,
//!
//! ```text
//! M(s)^2 = ln(bs)/ln(as) * (as - 1)/(bs - 1)
//! ```
//!
//! on the cut plane `C \ (-inf, 0]`. Displacement and stress transfer functions are
//!
//! ```text
//! P(x, s) = sinh(x s M) / sinh(s M)
//! T(x, s) = cosh(x s M) / (M sinh(s M))
//! ```
//!
//! Points on the cut are addressed explicitly through [`CutPlanePoint`], so the two
//! boundary values `M(q e^{+iπ})` and `M(q e^{-iπ})` are exact rather than limits.

use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{expm1, ln_1p, ln_1p_over_series};

/// Radius (in `|cs - 1|`) inside which `ln(cs)/(cs - 1)` is taken from its power series.
pub const REMOVABLE_RADIUS: f64 = 1e-4;

/// Cap applied to the pole-proximity diagnostic `|sinh(sM)|^-1`.
pub const CONDITION_CAP: f64 = 1e16;

/// Weight bases of the exponential constitutive weights `φ1 = a^α`, `φ2 = b^α`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawParams"))]
pub struct MaterialParams {
    a: f64,
    b: f64,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<RawParams> for MaterialParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.a, raw.b)
    }
}

impl MaterialParams {
    /// `0 < a <= b`; `a == b` is the elastic (Hooke) limit.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a <= 0.0 || a > b {
            return Err(Error::InvalidParams { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_hooke(&self) -> bool {
        self.a == self.b
    }

    /// `ln(b/a) >= 0`.
    pub fn log_ratio(&self) -> f64 {
        (self.b / self.a).ln()
    }

    /// High-frequency limit of `M`, `sqrt(a/b)`.
    pub fn glassy_speed_ratio(&self) -> f64 {
        (self.a / self.b).sqrt()
    }
}

/// Which side of the negative real axis a cut point sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    /// `q e^{+iπ}`
    Upper,
    /// `q e^{-iπ}`
    Lower,
}

/// A point of `C \ (-inf, 0]` in log-polar form, or a point on one side of the cut.
///
/// The modulus is stored as its logarithm so that the limits `|s| -> 0` and
/// `|s| -> inf` can be probed far beyond the range of `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPlanePoint {
    ln_modulus: f64,
    argument: f64,
    side: Option<CutSide>,
}

impl CutPlanePoint {
    /// An ordinary point of the cut plane.
    pub fn new(s: Complex64) -> Result<Self> {
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::Domain("non-finite point"));
        }
        if s.re == 0.0 && s.im == 0.0 {
            return Err(Error::Domain("s = 0 is the branch point"));
        }
        if s.im == 0.0 && s.re < 0.0 {
            return Err(Error::Domain("negative real axis needs an explicit cut side"));
        }
        Ok(Self { ln_modulus: s.norm().ln(), argument: s.im.atan2(s.re), side: None })
    }

    /// `r e^{iθ}` with `θ ∈ (-π, π)`.
    pub fn from_polar(modulus: f64, argument: f64) -> Result<Self> {
        if !(modulus > 0.0) || !modulus.is_finite() {
            return Err(Error::Domain("modulus must be positive and finite"));
        }
        Self::from_log_polar(modulus.ln(), argument)
    }

    /// `e^{ln_modulus + iθ}`; permits moduli that over- or underflow `f64`.
    pub fn from_log_polar(ln_modulus: f64, argument: f64) -> Result<Self> {
        if !ln_modulus.is_finite() || !argument.is_finite() {
            return Err(Error::Domain("non-finite log-polar coordinates"));
        }
        if argument.abs() >= PI {
            return Err(Error::Domain("argument ±π needs an explicit cut side"));
        }
        Ok(Self { ln_modulus, argument, side: None })
    }

    /// `q e^{+iπ}`, the upper boundary value on the cut.
    pub fn upper_cut(q: f64) -> Result<Self> {
        Self::on_cut(q, CutSide::Upper)
    }

    /// `q e^{-iπ}`, the lower boundary value on the cut.
    pub fn lower_cut(q: f64) -> Result<Self> {
        Self::on_cut(q, CutSide::Lower)
    }

    pub fn on_cut(q: f64, side: CutSide) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::Domain("cut abscissa must be positive and finite"));
        }
        Self::on_cut_log(q.ln(), side)
    }

    /// `e^{ln_q} e^{±iπ}`; lets quadrature reach `q` far below the `f64` range.
    pub fn on_cut_log(ln_q: f64, side: CutSide) -> Result<Self> {
        if !ln_q.is_finite() {
            return Err(Error::Domain("non-finite cut abscissa"));
        }
        let argument = match side {
            CutSide::Upper => PI,
            CutSide::Lower => -PI,
        };
        Ok(Self { ln_modulus: ln_q, argument, side: Some(side) })
    }

    pub fn modulus(&self) -> f64 {
        self.ln_modulus.exp()
    }

    pub fn ln_modulus(&self) -> f64 {
        self.ln_modulus
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn side(&self) -> Option<CutSide> {
        self.side
    }

    pub fn on_upper_cut(&self) -> bool {
        self.side == Some(CutSide::Upper)
    }

    pub fn on_lower_cut(&self) -> bool {
        self.side == Some(CutSide::Lower)
    }

    /// The complex value of `s`; exactly `-q` on either cut side.
    pub fn value(&self) -> Complex64 {
        let r = self.ln_modulus.exp();
        match self.side {
            Some(_) => Complex64::new(-r, 0.0),
            None => Complex64::from_polar(r, self.argument),
        }
    }

    /// Principal logarithm with the explicit `±iπ` on the cut.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.ln_modulus, self.argument)
    }

    /// `1/s`, computed from the log-polar form.
    pub fn recip(&self) -> Complex64 {
        Complex64::from_polar((-self.ln_modulus).exp(), -self.argument)
    }

    /// Mirror image; swaps the cut sides.
    pub fn conj(&self) -> Self {
        Self {
            ln_modulus: self.ln_modulus,
            argument: -self.argument,
            side: self.side.map(|s| match s {
                CutSide::Upper => CutSide::Lower,
                CutSide::Lower => CutSide::Upper,
            }),
        }
    }
}

/// A transfer-function value and its pole-proximity diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferValue {
    pub value: Complex64,
    /// `|sinh(sM(s))|^-1`, clamped to [`CONDITION_CAP`].
    pub condition_estimate: f64,
}

/// `ln(cs)/(cs - 1)` for a positive weight base `c`.
fn log_quotient(c: f64, s: &CutPlanePoint) -> Complex64 {
    let ln_cs = s.ln() + c.ln();
    if s.side.is_none() && s.ln_modulus.abs() < 600.0 {
        let w = c * s.value() - 1.0;
        let r = w.norm();
        if r < REMOVABLE_RADIUS {
            return ln_1p_over_series(w);
        }
        if r < 0.5 {
            return ln_1p(w) / w;
        }
    }
    if s.ln_modulus > 0.0 {
        // (cs - 1) = s (c - 1/s); keeps huge moduli finite
        let inv = s.recip();
        return ln_cs * inv / (c - inv);
    }
    ln_cs / (c * s.value() - 1.0)
}

/// `M(s)^2`.
pub fn eval_m_squared(s: &CutPlanePoint, params: &MaterialParams) -> Complex64 {
    if params.is_hooke() {
        return Complex64::new(1.0, 0.0);
    }
    log_quotient(params.b, s) / log_quotient(params.a, s)
}

/// `M(s)` on the principal branch of the outer square root.
pub fn eval_m(s: &CutPlanePoint, params: &MaterialParams) -> Complex64 {
    eval_m_squared(s, params).sqrt()
}

/// Large-|Im s| asymptotic form of `M(p ± iR)`; `upper` selects `+iR`.
pub fn eval_m_asymptotic(p: f64, r: f64, upper: bool, params: &MaterialParams) -> Complex64 {
    let _ = p; // the leading term does not depend on the real offset
    let la = (params.a * r).ln();
    let lb = (params.b * r).ln();
    let x = la * lb;
    let y = 0.5 * PI * params.log_ratio();
    let modulus = params.glassy_speed_ratio() / la * (x * x + y * y).sqrt().sqrt();
    let phase = 0.5 * y.atan2(x);
    let sign = if upper { -1.0 } else { 1.0 };
    Complex64::from_polar(modulus, sign * phase)
}

/// `D(s) = 1 - ln(b/a)/(2 ln(as) ln(bs)) + (b - a)s/(2(as - 1)(bs - 1))`,
/// so that `d/ds [s M(s)] = M(s) D(s)`.
pub fn eval_log_derivative_factor(s: &CutPlanePoint, params: &MaterialParams) -> Complex64 {
    if params.is_hooke() {
        return Complex64::new(1.0, 0.0);
    }
    let (a, b) = (params.a, params.b);
    let ln_s = s.ln();
    let ln_as = ln_s + a.ln();
    let ln_bs = ln_s + b.ln();
    let inv = s.recip();
    // (b - a)s / ((as - 1)(bs - 1)) = (b - a)(1/s) / ((a - 1/s)(b - 1/s))
    let rational = (b - a) * inv / ((a - inv) * (b - inv));
    Complex64::new(1.0, 0.0) - params.log_ratio() / (2.0 * ln_as * ln_bs) + 0.5 * rational
}

/// `d/ds [s M(s)]`.
pub fn eval_sm_derivative(s: &CutPlanePoint, params: &MaterialParams) -> Complex64 {
    eval_m(s, params) * eval_log_derivative_factor(s, params)
}

/// Below this `|sM|` the hyperbolic ratios come from their Taylor series.
const SMALL_ARGUMENT: f64 = 1e-3;

/// `sinh(xz)/sinh(z)` and `z cosh(xz)/sinh(z)` for `x ∈ [0, 1]`, with the dominant
/// exponential factored out so neither overflows. The second ratio carries the
/// factor `z` so that it stays finite at `z = 0`.
pub(crate) fn hyperbolic_ratios(x: f64, z: Complex64) -> (Complex64, Complex64, f64) {
    let one = Complex64::new(1.0, 0.0);
    if z.norm() < SMALL_ARGUMENT {
        let z2 = z * z;
        let x2 = x * x;
        let den = one + z2 / 6.0 + z2 * z2 / 120.0;
        let sinh_ratio = x * (one + x2 * z2 / 6.0 + x2 * x2 * z2 * z2 / 120.0) / den;
        let scaled_cosh = (one + x2 * z2 / 2.0 + x2 * x2 * z2 * z2 / 24.0) / den;
        let condition = if z.norm() * CONDITION_CAP < 1.0 { CONDITION_CAP } else { z.norm().recip() };
        return (sinh_ratio, scaled_cosh, condition);
    }
    // Both ratios are even in z, so work with Re z >= 0.
    let w = if z.re < 0.0 { -z } else { z };
    let den = -expm1(-2.0 * w); // 1 - e^{-2w}
    let lead = (-(1.0 - x) * w).exp();
    let e2x = (-2.0 * x * w).exp();
    let sinh_ratio = lead * (-expm1(-2.0 * x * w)) / den;
    let scaled_cosh = w * lead * (one + e2x) / den;
    // |sinh w| = e^{Re w} |1 - e^{-2w}| / 2
    let log_sinh = w.re + (0.5 * den.norm()).ln();
    let condition = if log_sinh < -(CONDITION_CAP.ln()) { CONDITION_CAP } else { (-log_sinh).exp() };
    (sinh_ratio, scaled_cosh, condition)
}

/// True when `sM` sits so close to a nonzero multiple of `iπ` that the transfer
/// functions are not trustworthy. `sM = 0` (the branch point) is not a pole.
fn near_pole(z: Complex64, condition: f64) -> bool {
    z.norm() >= SMALL_ARGUMENT && condition * POLE_FLOOR > 1.0
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument("x must lie in [0, 1]"));
    }
    Ok(())
}

/// Floor on `|sinh(sM)|` below which transfer functions refuse to evaluate.
pub const POLE_FLOOR: f64 = 1e-12;

/// `P(x, s) = sinh(x s M(s)) / sinh(s M(s))`.
pub fn eval_p_tilde(x: f64, s: &CutPlanePoint, params: &MaterialParams) -> Result<TransferValue> {
    check_x(x)?;
    let z = s.value() * eval_m(s, params);
    let (ratio, _, condition) = hyperbolic_ratios(x, z);
    if near_pole(z, condition) {
        return Err(Error::NearPole { sinh_abs: condition.recip() });
    }
    // x = 1 and x = 0 are exact identities; keep them exact.
    let value = if x == 1.0 {
        Complex64::new(1.0, 0.0)
    } else if x == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        ratio
    };
    Ok(TransferValue { value, condition_estimate: condition })
}

/// `T(x, s) = cosh(x s M(s)) / (M(s) sinh(s M(s)))`.
pub fn eval_t_tilde(x: f64, s: &CutPlanePoint, params: &MaterialParams) -> Result<TransferValue> {
    let scaled = eval_s_t_tilde(x, s, params)?;
    let value = scaled.value * s.recip();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite { at: s.modulus() });
    }
    Ok(TransferValue { value, condition_estimate: scaled.condition_estimate })
}

/// `s T(x, s) = sM cosh(x s M) / (M^2 sinh(s M))`, finite as `s -> 0` where it tends to 1.
pub fn eval_s_t_tilde(x: f64, s: &CutPlanePoint, params: &MaterialParams) -> Result<TransferValue> {
    check_x(x)?;
    let m2 = eval_m_squared(s, params);
    let z = s.value() * m2.sqrt();
    let (_, scaled_cosh, condition) = hyperbolic_ratios(x, z);
    if near_pole(z, condition) {
        return Err(Error::NearPole { sinh_abs: condition.recip() });
    }
    Ok(TransferValue { value: scaled_cosh / m2, condition_estimate: condition })
}
