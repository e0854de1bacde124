//! Branch-cut integrals over `q ∈ (0, ∞)`.
//!
//! Integrals are taken in `u = ln q`. The piece `u ∈ (-∞, u0]` is folded onto
//! `(0, 1]` by `u = u0 - (1 - v)/v`, which turns the slow `1/(q ln² q)` endpoint
//! behaviour of the stress integrand into a smooth function of `v`.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::kernel::{eval_p_tilde, eval_s_t_tilde, CutPlanePoint, CutSide, MaterialParams};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureConfig {
    /// Upper end of the cut integral.
    pub q_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { q_max: 1000.0, rel_tol: 1e-10, abs_tol: 1e-13, max_subdivisions: 4000 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.q_max > 0.0 && self.q_max.is_finite()) {
            return Err(Error::InvalidArgument("q_max must be positive and finite"));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidArgument("max_subdivisions must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// Estimate of the discarded part beyond `q_max`.
    pub truncation_estimate: f64,
}

impl IntegralResult {
    /// Quadrature and truncation error together.
    pub fn total_error(&self) -> f64 {
        self.error_estimate + self.truncation_estimate
    }
}

/// Time weight multiplying the cut integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutWeight {
    /// `e^{-qt}`
    Decay,
    /// `(1 - e^{-qt})/q`, equal to `t` at `q = 0`
    Accumulated,
    /// `1/q`
    Reciprocal,
}

impl CutWeight {
    fn eval(self, q: f64, t: f64) -> f64 {
        match self {
            CutWeight::Decay => (-q * t).exp(),
            CutWeight::Accumulated => {
                if q * t < 1e-300 {
                    t
                } else {
                    -(-q * t).exp_m1() / q
                }
            }
            CutWeight::Reciprocal => q.recip(),
        }
    }
}

// 21-point Kronrod rule with its embedded 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_351_996,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> Result<f64>>(f: &mut F, lo: f64, hi: f64) -> Result<Segment> {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre)?;
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut absolute = (WGK[10] * fc).abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx)?;
        let f2 = f(centre + dx)?;
        kron += WGK[j] * (f1 + f2);
        absolute += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !kron.is_finite() {
        return Err(Error::NonFinite { at: centre });
    }
    let value = kron * half;
    let rounding = 50.0 * f64::EPSILON * absolute * half.abs();
    let error = ((kron - gauss) * half).abs().max(rounding);
    Ok(Segment { lo, hi, value, error })
}

/// Global adaptive Gauss–Kronrod (G10/K21) integration over the consecutive
/// panels `[edges[i], edges[i+1]]`. Returns `(value, error, evaluations)`.
pub fn adaptive_integrate<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    edges: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<(f64, f64, usize)> {
    if edges.len() < 2 {
        return Err(Error::InvalidArgument("need at least one panel"));
    }
    let mut heap = BinaryHeap::with_capacity(edges.len() + max_subdivisions);
    for w in edges.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(&mut f, w[0], w[1])?);
        }
    }
    let mut evaluations = 21 * heap.len();
    let mut splits = 0;
    loop {
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok((value, error, evaluations));
        }
        if splits >= max_subdivisions {
            return Err(Error::QuadratureTolerance { error, subdivisions: splits });
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => return Ok((0.0, 0.0, evaluations)),
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // cannot split further; accept what we have
            heap.push(Segment { error: 0.0, ..worst });
            let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
            return Ok((value, error + worst.error, evaluations));
        }
        heap.push(kronrod(&mut f, worst.lo, mid)?);
        heap.push(kronrod(&mut f, mid, worst.hi)?);
        evaluations += 42;
        splits += 1;
    }
}

/// Start of the folded left tail, in `ln q`.
fn tail_start(breakpoints: &[f64]) -> f64 {
    let smallest = breakpoints.iter().copied().filter(|b| *b > 0.0).fold(f64::INFINITY, f64::min);
    (1e-3f64).ln().min(smallest.ln() - 2.3)
}

/// `∫₀^{q_max} f(q) w(q, t) dq` where `density(ln q)` returns `q f(q)`.
///
/// `breakpoints` are abscissae (in `q`) where the integrand changes character.
pub fn integrate_cut<F>(
    mut density: F,
    weight: CutWeight,
    t: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    match weight {
        CutWeight::Decay if !(t > 0.0) => return Err(Error::InvalidArgument("decay weight needs t > 0")),
        CutWeight::Accumulated if !(t >= 0.0) => return Err(Error::InvalidArgument("accumulated weight needs t >= 0")),
        _ => {}
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument("t must be finite"));
    }
    let u0 = tail_start(breakpoints);
    let u_max = cfg.q_max.ln();
    if !(u_max > u0) {
        return Err(Error::InvalidArgument("q_max below the start of the integration range"));
    }

    let mut weighted = |u: f64| -> Result<f64> {
        let g = density(u)?;
        if g == 0.0 {
            return Ok(0.0);
        }
        let q = u.exp();
        let value = match weight {
            CutWeight::Reciprocal => g / q,
            _ => g * weight.eval(q, t),
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite { at: q })
        }
    };

    // v in (0, 1] covers the folded tail, v >= 1 is u - u0 + 1.
    let mut edges: Vec<f64> = Vec::new();
    edges.push(0.0);
    edges.push(1.0);
    let mut interior: Vec<f64> = breakpoints.iter().filter(|b| **b > 0.0).map(|b| b.ln()).collect();
    if weight != CutWeight::Reciprocal && t > 0.0 {
        interior.push(-t.ln());
    }
    let mut u = u0 + core::f64::consts::LN_10;
    while u < u_max {
        interior.push(u);
        u += core::f64::consts::LN_10;
    }
    interior.retain(|u| *u > u0 && *u < u_max);
    interior.sort_by(f64::total_cmp);
    interior.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    edges.extend(interior.iter().map(|u| u - u0 + 1.0));
    edges.push(u_max - u0 + 1.0);

    let (value, error_estimate, evaluations) = adaptive_integrate(
        |v| {
            if v < 1.0 {
                let u = u0 - (1.0 - v) / v;
                Ok(weighted(u)? / (v * v))
            } else {
                weighted(u0 + (v - 1.0))
            }
        },
        &edges,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_subdivisions,
    )?;

    let truncation_estimate = tail_beyond(&mut weighted, cfg.q_max)?;
    Ok(IntegralResult { value, error_estimate, evaluations: evaluations + 2, truncation_estimate })
}

/// Exponential-fit estimate of `∫_{q_max}^∞ |f w| dq` from two samples.
fn tail_beyond<F: FnMut(f64) -> Result<f64>>(weighted: &mut F, q_max: f64) -> Result<f64> {
    // weighted() returns q f w; divide back to f w
    let h1 = (weighted(q_max.ln())? / q_max).abs();
    if h1 == 0.0 {
        return Ok(0.0);
    }
    let h2 = (weighted((2.0 * q_max).ln())? / (2.0 * q_max)).abs();
    let rate = if h2 == 0.0 {
        f64::INFINITY
    } else if h2 < h1 {
        (h1 / h2).ln() / q_max
    } else {
        0.0
    };
    Ok(h1 / rate.max(q_max.recip()))
}

/// Same as [`integrate_cut`] for an integrand given directly as `f(q)`.
pub fn integrate_cut_linear<F>(
    mut f: F,
    weight: CutWeight,
    t: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_cut(
        |u| {
            let q = u.exp();
            if q == 0.0 {
                return Ok(0.0);
            }
            Ok(q * f(q)?)
        },
        weight,
        t,
        breakpoints,
        cfg,
    )
}

/// Abscissae `1/b` and `1/a` where the logarithms in `M` change sign.
pub fn kernel_breakpoints(params: &MaterialParams) -> [f64; 2] {
    [params.b().recip(), params.a().recip()]
}

/// `-(1/π) Im P(x, q e^{iπ})`: the displacement cut integrand, so that the cut term of
/// `P(x, t)` is its integral against `e^{-qt}`.
pub fn cut_integrand_p(x: f64, q: f64, params: &MaterialParams) -> Result<f64> {
    let s = CutPlanePoint::upper_cut(q)?;
    Ok(-eval_p_tilde(x, &s, params)?.value.im / PI)
}

/// `-(1/π) Im T(x, q e^{iπ})`, the stress cut integrand.
pub fn cut_integrand_t(x: f64, q: f64, params: &MaterialParams) -> Result<f64> {
    let s = CutPlanePoint::upper_cut(q)?;
    // q T = -(sT) on the upper side
    Ok(eval_s_t_tilde(x, &s, params)?.value.im / (PI * q))
}

/// `q` times [`cut_integrand_p`], as a function of `ln q`.
pub fn cut_density_p(x: f64, ln_q: f64, params: &MaterialParams) -> Result<f64> {
    let s = CutPlanePoint::on_cut_log(ln_q, CutSide::Upper)?;
    let q = ln_q.exp();
    if q == 0.0 {
        return Ok(0.0);
    }
    Ok(-q * eval_p_tilde(x, &s, params)?.value.im / PI)
}

/// `q` times [`cut_integrand_t`], as a function of `ln q`; finite as `q -> 0`.
pub fn cut_density_t(x: f64, ln_q: f64, params: &MaterialParams) -> Result<f64> {
    let s = CutPlanePoint::on_cut_log(ln_q, CutSide::Upper)?;
    Ok(eval_s_t_tilde(x, &s, params)?.value.im / PI)
}
