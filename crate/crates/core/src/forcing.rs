//! Boundary displacement `Υ(t) = Υ0 H(t) + F(t)` at the loaded end.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// The extra forcing `F` on top of the Heaviside step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ForcingKind {
    #[default]
    None,
    /// `F(t) = c (1 - e^{-t/τ})`, `F̃(s) = c / (s (τ s + 1))`.
    ExpSaturation { c: f64, tau: f64 },
    /// `F(t) = c t e^{-t/τ}`, `F̃(s) = c τ² / (1 + τ s)²`.
    PolyExp { c: f64, tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ForcingSpec {
    /// Heaviside amplitude `Υ0`.
    pub upsilon0: f64,
    pub f_kind: ForcingKind,
}

impl Default for ForcingSpec {
    fn default() -> Self {
        Self { upsilon0: 1.0, f_kind: ForcingKind::None }
    }
}

impl ForcingSpec {
    pub fn new(upsilon0: f64, f_kind: ForcingKind) -> Result<Self> {
        let spec = Self { upsilon0, f_kind };
        spec.validate()?;
        Ok(spec)
    }

    pub fn heaviside(upsilon0: f64) -> Result<Self> {
        Self::new(upsilon0, ForcingKind::None)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.upsilon0 >= 0.0 && self.upsilon0.is_finite()) {
            return Err(Error::InvalidArgument("upsilon0 must be nonnegative and finite"));
        }
        match self.f_kind {
            ForcingKind::None => Ok(()),
            ForcingKind::ExpSaturation { c, tau } | ForcingKind::PolyExp { c, tau } => {
                if !c.is_finite() {
                    return Err(Error::InvalidArgument("forcing amplitude must be finite"));
                }
                if !(tau > 0.0 && tau.is_finite()) {
                    return Err(Error::InvalidArgument("forcing time constant must be positive"));
                }
                Ok(())
            }
        }
    }

    pub fn has_extra(&self) -> bool {
        !matches!(self.f_kind, ForcingKind::None)
    }

    /// Checks the hypotheses under which the contour representation of `u_F` holds:
    /// `F̃` analytic off the cut, `|F̃| = O(|s|^-α)` with `α > 1`, and `s F̃(s) -> 0` at 0.
    pub fn check_admissible(&self) -> Result<()> {
        match self.f_kind {
            ForcingKind::None | ForcingKind::PolyExp { .. } => Ok(()),
            ForcingKind::ExpSaturation { .. } => {
                Err(Error::InadmissibleForcing("exp_saturation: s F(s) tends to c, not 0, at the origin"))
            }
        }
    }

    /// `F(t)`, zero for `t <= 0`.
    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self.f_kind {
            ForcingKind::None => 0.0,
            ForcingKind::ExpSaturation { c, tau } => -c * (-t / tau).exp_m1(),
            ForcingKind::PolyExp { c, tau } => c * t * (-t / tau).exp(),
        }
    }

    /// `F'(t)` for `t > 0`.
    pub fn derivative(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self.f_kind {
            ForcingKind::None => 0.0,
            ForcingKind::ExpSaturation { c, tau } => c / tau * (-t / tau).exp(),
            ForcingKind::PolyExp { c, tau } => c * (-t / tau).exp() * (1.0 - t / tau),
        }
    }

    /// `F̃(s)`.
    pub fn laplace(&self, s: Complex64) -> Complex64 {
        match self.f_kind {
            ForcingKind::None => Complex64::new(0.0, 0.0),
            ForcingKind::ExpSaturation { c, tau } => c / (s * (tau * s + 1.0)),
            ForcingKind::PolyExp { c, tau } => {
                let d = tau * s + 1.0;
                c * tau * tau / (d * d)
            }
        }
    }

    /// Abscissa `q` of a pole of `F̃` sitting on the cut at `s = -q`.
    pub fn cut_pole(&self) -> Option<f64> {
        match self.f_kind {
            ForcingKind::None => None,
            ForcingKind::ExpSaturation { tau, .. } | ForcingKind::PolyExp { tau, .. } => Some(tau.recip()),
        }
    }
}
