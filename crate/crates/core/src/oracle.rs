//! Numerical inverse Laplace transform on a vertical line.
//!
//! Used only to validate the field assembly. It evaluates transforms on
//! `Re s = c > 0` and never touches poles or cut integrals.
//!
//! With step `h` the trapezoid rule for the Bromwich integral gives
//!
//! ```text
//! f(t) ≈ (h e^{ct} / π) Re[ F(c)/2 + Σ_{k≥1} F(c + ikh) e^{ikht} ]
//! ```
//!
//! whose aliasing error is about `e^{-c P} f(t + P)` with period `P = 2π/h`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::kernel::{eval_p_tilde, eval_t_tilde, CutPlanePoint, MaterialParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OracleMethod {
    /// Plain trapezoid sum, truncated once the transform has decayed.
    #[default]
    BromwichTrapezoid,
    /// The same nodes with period `2t`, summed to a fixed count and finished by
    /// Euler (binomial) averaging of the partial sums. Handles transforms that do
    /// not decay along the line.
    EulerSummation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Precision {
    /// Straight `f64` accumulation.
    Double,
    /// Neumaier-compensated accumulation of the node sums.
    #[default]
    Compensated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleConfig {
    pub method: OracleMethod,
    /// Abscissa `c` of the line; `None` picks `2/t` (trapezoid) or `15/t` (Euler).
    pub abscissa: Option<f64>,
    /// Node budget for one trapezoid pass (trapezoid) or the count summed before
    /// Euler averaging (Euler).
    pub nodes: usize,
    pub precision: Precision,
    /// Target aliasing level for the trapezoid period.
    pub aliasing_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            method: OracleMethod::BromwichTrapezoid,
            abscissa: None,
            nodes: 400_000,
            precision: Precision::Compensated,
            aliasing_tol: 1e-13,
        }
    }
}

impl OracleConfig {
    pub fn euler() -> Self {
        Self { method: OracleMethod::EulerSummation, nodes: 4000, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    /// Node-doubling difference plus the truncated tail and rounding.
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Accumulator {
    sum: f64,
    carry: f64,
    abs: f64,
    compensated: bool,
}

impl Accumulator {
    fn new(compensated: bool) -> Self {
        Self { sum: 0.0, carry: 0.0, abs: 0.0, compensated }
    }

    fn add(&mut self, v: f64) {
        self.abs += v.abs();
        if !self.compensated {
            self.sum += v;
            return;
        }
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

fn abscissa(cfg: &OracleConfig, t: f64) -> Result<f64> {
    let default = match cfg.method {
        // small abscissa keeps the e^{ct} amplification of the truncated sum low
        OracleMethod::BromwichTrapezoid => 2.0 / t,
        OracleMethod::EulerSummation => 15.0 / t,
    };
    let c = cfg.abscissa.unwrap_or(default);
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument("oracle abscissa must be positive"));
    }
    Ok(c)
}

/// `f(t)` from its transform `F(s)`, analytic for `Re s > 0`.
pub fn invert<F>(mut f_hat: F, t: f64, cfg: &OracleConfig) -> Result<OracleValue>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument("oracle needs t > 0"));
    }
    if cfg.nodes < 16 {
        return Err(Error::InvalidArgument("oracle node budget too small"));
    }
    let c = abscissa(cfg, t)?;
    match cfg.method {
        OracleMethod::BromwichTrapezoid => {
            // period a multiple of 2t long enough that e^{-cP} reaches the aliasing target
            let j = ((-cfg.aliasing_tol.ln() / c) / (2.0 * t)).ceil().max(1.0) as usize;
            let period = 2.0 * t * j as f64;
            let coarse = trapezoid(&mut f_hat, t, c, 2 * j, period, cfg)?;
            let fine = trapezoid(&mut f_hat, t, c, 4 * j, 2.0 * period, cfg)?;
            Ok(OracleValue {
                value: fine.value,
                error_estimate: (fine.value - coarse.value).abs() + fine.error_estimate,
                evaluations: coarse.evaluations + fine.evaluations,
            })
        }
        OracleMethod::EulerSummation => {
            let a = euler(&mut f_hat, t, c, cfg.nodes / 2, cfg)?;
            let b = euler(&mut f_hat, t, c, cfg.nodes, cfg)?;
            Ok(OracleValue {
                value: b.value,
                error_estimate: (b.value - a.value).abs() + b.error_estimate,
                evaluations: a.evaluations + b.evaluations,
            })
        }
    }
}

const BLOCK: usize = 64;

fn trapezoid<F>(f_hat: &mut F, t: f64, c: f64, cycle: usize, period: f64, cfg: &OracleConfig) -> Result<OracleValue>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    // e^{ikht} repeats every `cycle` nodes; when the transform decays slowly the
    // partial sums are averaged over the last full cycle
    let h = 2.0 * PI / period;
    let scale = h * (c * t).exp() / PI;
    let mut acc = Accumulator::new(cfg.precision == Precision::Compensated);
    acc.add(0.5 * f_hat(Complex64::new(c, 0.0))?.re);
    let budget = cfg.nodes.max(4 * cycle);
    let mut k = 1usize;
    let mut quiet_blocks = 0;
    let mut last_block = f64::INFINITY;
    let mut window: Vec<f64> = Vec::with_capacity(cycle);
    let mut half_average = None;
    while k < budget {
        let mut block = 0.0;
        for _ in 0..BLOCK {
            let w = k as f64 * h;
            let v = (f_hat(Complex64::new(c, w))? * Complex64::from_polar(1.0, w * t)).re;
            if !v.is_finite() {
                return Err(Error::OracleFailure("transform not finite on the line"));
            }
            acc.add(v);
            block += v.abs();
            if window.len() == cycle {
                window.remove(0);
            }
            if k + 2 * cycle >= budget / 2 {
                window.push(acc.total());
            }
            if k == budget / 2 {
                half_average = Some(window.iter().sum::<f64>() / window.len() as f64);
            }
            k += 1;
        }
        last_block = block;
        if block <= 1e-16 * acc.abs.max(1e-300) {
            quiet_blocks += 1;
            if quiet_blocks >= 3 {
                break;
            }
        } else {
            quiet_blocks = 0;
        }
    }
    let rounding = 16.0 * f64::EPSILON * acc.abs * scale;
    if quiet_blocks >= 3 {
        return Ok(OracleValue {
            value: acc.total() * scale,
            error_estimate: last_block * scale + rounding,
            evaluations: k,
        });
    }
    let average = window.iter().sum::<f64>() / window.len() as f64;
    let half = half_average.ok_or(Error::OracleFailure("node budget too small for the period"))?;
    Ok(OracleValue {
        value: average * scale,
        error_estimate: (average - half).abs() * scale + rounding,
        evaluations: k,
    })
}

/// Abate–Whitt style: nodes `c + ikπ/t`, partial sums `S_n ... S_{n+m}` averaged
/// with binomial weights.
fn euler<F>(f_hat: &mut F, t: f64, c: f64, n: usize, cfg: &OracleConfig) -> Result<OracleValue>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    const M: usize = 14;
    let h = PI / t;
    let scale = h * (c * t).exp() / PI;
    let mut acc = Accumulator::new(cfg.precision == Precision::Compensated);
    acc.add(0.5 * f_hat(Complex64::new(c, 0.0))?.re);
    let mut partial: Vec<f64> = Vec::with_capacity(M + 1);
    for k in 1..=n + M {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let v = sign * f_hat(Complex64::new(c, k as f64 * h))?.re;
        if !v.is_finite() {
            return Err(Error::OracleFailure("transform not finite on the line"));
        }
        acc.add(v);
        if k >= n {
            partial.push(acc.total());
        }
    }
    // binomial average of S_n .. S_{n+M}
    let mut weight = 1.0;
    let mut value = 0.0;
    for (j, s) in partial.iter().enumerate() {
        value += weight * s;
        weight *= (M - j) as f64 / (j + 1) as f64;
    }
    value /= 2f64.powi(M as i32);
    // aliasing at period 2t is e^{-2ct}; add it as a floor
    let aliasing = (-2.0 * c * t).exp();
    let rounding = 16.0 * f64::EPSILON * acc.abs * scale;
    Ok(OracleValue { value: value * scale, error_estimate: aliasing + rounding, evaluations: n + M + 1 })
}

fn point(s: Complex64) -> Result<CutPlanePoint> {
    CutPlanePoint::new(s)
}

/// `Υ̃(s) P̃(x, s)` with `Υ̃ = Υ0/s + F̃`: the transform of the total displacement.
pub fn displacement_transform<'a>(
    x: f64,
    forcing: &'a ForcingSpec,
    params: &'a MaterialParams,
) -> impl FnMut(Complex64) -> Result<Complex64> + 'a {
    move |s| {
        let p = eval_p_tilde(x, &point(s)?, params)?.value;
        Ok((forcing.upsilon0 / s + forcing.laplace(s)) * p)
    }
}

/// `s Υ̃(s) T̃(x, s)`: the transform of the total stress.
pub fn stress_transform<'a>(
    x: f64,
    forcing: &'a ForcingSpec,
    params: &'a MaterialParams,
) -> impl FnMut(Complex64) -> Result<Complex64> + 'a {
    move |s| {
        let tt = eval_t_tilde(x, &point(s)?, params)?.value;
        Ok((forcing.upsilon0 + s * forcing.laplace(s)) * tt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_pairs() {
        for cfg in [OracleConfig::default(), OracleConfig::euler()] {
            let step = invert(|s| Ok(s.inv()), 1.0, &cfg).unwrap();
            assert!((step.value - 1.0).abs() < 1e-8, "{cfg:?} {step:?}");
            let ramp = invert(|s| Ok((s * s).inv()), 3.0, &cfg).unwrap();
            assert!((ramp.value - 3.0).abs() < 1e-7, "{cfg:?} {ramp:?}");
        }
    }

    #[test]
    fn decaying_exponential() {
        let cfg = OracleConfig::default();
        let v = invert(|s| Ok((s + 2.0).inv()), 0.7, &cfg).unwrap();
        assert!((v.value - (-1.4f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = OracleConfig::default();
        assert!(invert(|s| Ok(s.inv()), 0.0, &cfg).is_err());
        let bad = OracleConfig { abscissa: Some(-1.0), ..cfg };
        assert!(invert(|s| Ok(s.inv()), 1.0, &bad).is_err());
        assert!(invert(|_| Ok(Complex64::new(f64::NAN, 0.0)), 1.0, &cfg).is_err());
    }
}
