//! Time-domain fields assembled from a cut integral and a residue series.
//!
//! | field     | transform            | constant | cut weight            |
//! |-----------|----------------------|----------|-----------------------|
//! | `P`       | `P̃`                  | 0        | `e^{-qt}`             |
//! | `u_H`     | `Υ0 P̃ / s`           | 0        | `(1 - e^{-qt})/q`     |
//! | `T`       | `T̃`                  | 1        | `e^{-qt}`             |
//! | `σ_H`     | `Υ0 T̃`               | `Υ0`     | `e^{-qt}`             |
//! | `u_F`     | `F̃ P̃`                | 0        | `e^{-qt}`, indented   |
//! | `σ_F`     | `σ_H + s F̃ T̃`        | `Υ0`     | `e^{-qt}`, indented   |
//!
//! "Indented" means the upper cut path is lifted over the pole of `F̃` that sits
//! on the negative axis; the lift stays well below the first pole pair.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::kernel::{eval_p_tilde, eval_s_t_tilde, CutPlanePoint, MaterialParams};
use crate::poles::{pair_sum, residue_p, residue_t, Pole, PoleSet, RootConfig};
use crate::quadrature::{
    cut_density_p, cut_density_t, integrate_cut, kernel_breakpoints, CutWeight, IntegralResult, QuadratureConfig,
};

/// Uniformly spaced, inclusive time axis.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimeAxis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl TimeAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            return alloc::vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.end } else { self.start + step * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    pub xs: Vec<f64>,
    pub times: TimeAxis,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.xs.is_empty() || self.times.count == 0 {
            return Err(Error::InvalidArgument("grid is empty"));
        }
        if self.xs.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidArgument("grid x values must lie in [0, 1]"));
        }
        if self.xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("grid x values must be strictly increasing"));
        }
        let t = &self.times;
        if !(t.start.is_finite() && t.end.is_finite()) || (t.count > 1 && t.end <= t.start) {
            return Err(Error::InvalidArgument("time axis must be finite and increasing"));
        }
        Ok(())
    }
}

/// Numerical controls and sampling grids of a run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SolverConfig {
    pub quadrature: QuadratureConfig,
    /// Number of pole pairs in every residue sum.
    pub n_residues: usize,
    pub roots: RootConfig,
    /// Grid for displacement fields.
    pub displacement_grid: GridSpec,
    /// Grid for stress fields.
    pub stress_grid: GridSpec,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            n_residues: 400,
            roots: RootConfig::default(),
            displacement_grid: GridSpec {
                xs: alloc::vec![0.25, 0.75],
                times: TimeAxis { start: 1.0, end: 10.0, count: 181 },
            },
            stress_grid: GridSpec {
                xs: alloc::vec![0.25, 0.75],
                times: TimeAxis { start: 1.0, end: 15.0, count: 281 },
            },
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        if self.n_residues == 0 {
            return Err(Error::InvalidArgument("n_residues must be at least 1"));
        }
        if !(self.roots.tol > 0.0) || self.roots.max_iter == 0 {
            return Err(Error::InvalidArgument("root tolerance and iteration cap must be positive"));
        }
        self.displacement_grid.validate()?;
        self.stress_grid.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Field {
    #[cfg_attr(feature = "serde", serde(rename = "P"))]
    P,
    #[cfg_attr(feature = "serde", serde(rename = "u_H"))]
    UH,
    #[cfg_attr(feature = "serde", serde(rename = "T"))]
    T,
    #[cfg_attr(feature = "serde", serde(rename = "sigma_H"))]
    SigmaH,
    #[cfg_attr(feature = "serde", serde(rename = "u_F"))]
    UF,
    #[cfg_attr(feature = "serde", serde(rename = "sigma_F"))]
    SigmaF,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::P => "P",
            Field::UH => "u_H",
            Field::T => "T",
            Field::SigmaH => "sigma_H",
            Field::UF => "u_F",
            Field::SigmaF => "sigma_F",
        }
    }

    pub fn is_stress(self) -> bool {
        matches!(self, Field::T | Field::SigmaH | Field::SigmaF)
    }
}

/// One field value with its decomposition `value = constant_part + cut_part + residue_part`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FieldSample {
    pub x: f64,
    pub t: f64,
    pub value: f64,
    /// The `1` of `T` (times `Υ0` for stresses).
    pub constant_part: f64,
    pub cut_part: f64,
    pub residue_part: f64,
    /// Pole pairs summed.
    pub n_terms: usize,
    pub error_estimate: f64,
}

impl FieldSample {
    fn zero(x: f64, t: f64) -> Self {
        Self { x, t, ..Self::default() }
    }

    fn scaled(mut self, k: f64) -> Self {
        self.value *= k;
        self.constant_part *= k;
        self.cut_part *= k;
        self.residue_part *= k;
        self.error_estimate *= k.abs();
        self
    }

    fn plus(mut self, other: &FieldSample) -> Self {
        self.value += other.value;
        self.constant_part += other.constant_part;
        self.cut_part += other.cut_part;
        self.residue_part += other.residue_part;
        self.n_terms = self.n_terms.max(other.n_terms);
        self.error_estimate += other.error_estimate;
        self
    }
}

/// Samples of one field on an `xs × ts` grid, stored x-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FieldGrid {
    pub field: Field,
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub samples: Vec<FieldSample>,
    pub config: SolverConfig,
}

impl FieldGrid {
    pub fn get(&self, ix: usize, it: usize) -> Option<&FieldSample> {
        if ix >= self.xs.len() || it >= self.ts.len() {
            return None;
        }
        self.samples.get(ix * self.ts.len() + it)
    }

    pub fn is_complete(&self) -> bool {
        self.samples.len() == self.xs.len() * self.ts.len()
    }
}

struct SeriesSum {
    sum: f64,
    abs_sum: f64,
    tail: f64,
    n_terms: usize,
}

/// `Σ 2 Re(term(pole))`, with a geometric tail estimate built from the envelope
/// `amplitude(pole) e^{Re(s) t}` of the last two terms.
fn residue_series<T, A>(poles: &[Pole], t: f64, mut term: T, mut amplitude: A) -> Result<SeriesSum>
where
    T: FnMut(&Pole) -> Result<Complex64>,
    A: FnMut(&Pole) -> f64,
{
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for pole in poles {
        let v = pair_sum(term(pole)?);
        sum += v;
        abs_sum += v.abs();
    }
    if !sum.is_finite() {
        return Err(Error::NonFinite { at: t });
    }
    let tail = match poles {
        [] => 0.0,
        [.., last] => {
            let envelope = amplitude(last) * (last.location.re * t).exp();
            let decay = match poles {
                [.., prev, _] => (prev.location.re - last.location.re) * t,
                _ => 0.0,
            };
            let ratio = if decay > 0.0 { decay.exp_m1().recip() } else { f64::INFINITY };
            envelope * ratio.min(poles.len() as f64)
        }
    };
    Ok(SeriesSum { sum, abs_sum, tail, n_terms: poles.len() })
}

fn assemble(x: f64, t: f64, constant: f64, cut: &IntegralResult, extra_cut_error: f64, series: &SeriesSum) -> FieldSample {
    let residue_part = series.sum;
    let rounding = 8.0 * f64::EPSILON * (series.abs_sum + constant.abs());
    FieldSample {
        x,
        t,
        value: constant + cut.value + residue_part,
        constant_part: constant,
        cut_part: cut.value,
        residue_part,
        n_terms: series.n_terms,
        error_estimate: cut.total_error() + extra_cut_error + series.tail + rounding,
    }
}

fn active_poles<'a>(params: &MaterialParams, poles: &'a PoleSet, cfg: &SolverConfig) -> Result<&'a [Pole]> {
    if poles.params != *params {
        return Err(Error::InvalidArgument("pole set was built for different material parameters"));
    }
    if cfg.n_residues == 0 {
        return Err(Error::InvalidArgument("n_residues must be at least 1"));
    }
    if poles.len() < cfg.n_residues {
        return Err(Error::InvalidArgument("pole set is shorter than n_residues"));
    }
    Ok(&poles.poles[..cfg.n_residues])
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument("x must lie in [0, 1]"));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if t.is_nan() || t.is_infinite() {
        return Err(Error::InvalidArgument("t must be finite"));
    }
    Ok(())
}

/// `|2 / (d/ds sinh(sM))|`; since `|M| = nπ/|s|` at a pole this equals
/// `2|s| / (nπ |D|)`, the size of `2 Res P / (s e^{st} (-1)^n sin(nπx))`.
fn displacement_amplitude(pole: &Pole) -> f64 {
    2.0 / pole.derivative_at_pole.norm()
}

fn stress_amplitude(pole: &Pole) -> f64 {
    2.0 * pole.location.norm() / (pole.index as f64 * PI * pole.derivative_at_pole.norm())
}

/// Displacement response to an impulse at the loaded end, `P(x, t)`.
pub fn compute_p(x: f64, t: f64, params: &MaterialParams, poles: &PoleSet, cfg: &SolverConfig) -> Result<FieldSample> {
    check_x(x)?;
    check_t(t)?;
    if x == 1.0 {
        return Err(Error::InvalidArgument("P(1, t) is a Dirac delta"));
    }
    if t < 0.0 {
        return Ok(FieldSample::zero(x, t));
    }
    if t == 0.0 {
        return Err(Error::InvalidArgument("P is evaluated for t != 0"));
    }
    let active = active_poles(params, poles, cfg)?;
    let cut = integrate_cut(
        |u| cut_density_p(x, u, params),
        CutWeight::Decay,
        t,
        &kernel_breakpoints(params),
        &cfg.quadrature,
    )?;
    let series = residue_series(active, t, |p| residue_p(x, p, t, params), displacement_amplitude)?;
    Ok(assemble(x, t, 0.0, &cut, 0.0, &series))
}

/// Displacement under the step `Υ0 H(t)`.
///
/// The cut term uses the weight `(1 - e^{-qt})/q`. The residue part is
/// `Σ 2 Re(c_n (e^{s_n t} - 1)/s_n)` with the `t`-independent constants
/// `-Σ 2 Re(c_n / s_n)` summed to infinity in closed form: they equal
/// `x - ∫ f_P(q)/q dq`, the value that makes `u_H(x, 0+) = 0`.
pub fn compute_u_h(
    x: f64,
    t: f64,
    upsilon0: f64,
    params: &MaterialParams,
    poles: &PoleSet,
    cfg: &SolverConfig,
) -> Result<FieldSample> {
    check_x(x)?;
    check_t(t)?;
    if t <= 0.0 || x == 0.0 {
        return Ok(FieldSample::zero(x, t));
    }
    let active = active_poles(params, poles, cfg)?;
    let bps = kernel_breakpoints(params);
    let density = |u| cut_density_p(x, u, params);
    let cut = integrate_cut(density, CutWeight::Accumulated, t, &bps, &cfg.quadrature)?;
    let constant = integrate_cut(density, CutWeight::Reciprocal, 0.0, &bps, &cfg.quadrature)?;
    let mut series = residue_series(
        active,
        t,
        |p| Ok(residue_p(x, p, t, params)? / p.location),
        |p| displacement_amplitude(p) / p.location.norm(),
    )?;
    series.sum += x - constant.value;
    series.abs_sum += x.abs() + constant.value.abs();
    Ok(assemble(x, t, 0.0, &cut, constant.total_error(), &series).scaled(upsilon0))
}

/// Stress response to a unit step, `T(x, t) = 1 + cut + residues`.
pub fn compute_t(x: f64, t: f64, params: &MaterialParams, poles: &PoleSet, cfg: &SolverConfig) -> Result<FieldSample> {
    check_x(x)?;
    check_t(t)?;
    if t < 0.0 {
        return Ok(FieldSample::zero(x, t));
    }
    if t == 0.0 {
        // right limit; the jump happens at the wave front, which has not reached x < 1
        if x < 1.0 {
            return Ok(FieldSample::zero(x, t));
        }
        return Err(Error::InvalidArgument("T(1, t) jumps at t = 0"));
    }
    let active = active_poles(params, poles, cfg)?;
    let cut = integrate_cut(
        |u| cut_density_t(x, u, params),
        CutWeight::Decay,
        t,
        &kernel_breakpoints(params),
        &cfg.quadrature,
    )?;
    let series = residue_series(active, t, |p| residue_t(x, p, t, params), stress_amplitude)?;
    Ok(assemble(x, t, 1.0, &cut, 0.0, &series))
}

/// Stress under the step `Υ0 H(t)`, `σ_H = Υ0 T`.
pub fn compute_sigma_h(
    x: f64,
    t: f64,
    upsilon0: f64,
    params: &MaterialParams,
    poles: &PoleSet,
    cfg: &SolverConfig,
) -> Result<FieldSample> {
    Ok(compute_t(x, t, params, poles, cfg)?.scaled(upsilon0))
}

/// Upper cut path `s(q) = -q + i h(q)`, lifted by a quartic bump around the
/// forcing pole at `q0`. Returns the point and `e^{i h t}(1 - i h'(q))`.
struct IndentedPath {
    q0: f64,
    half_width: f64,
    height: f64,
}

impl IndentedPath {
    fn new(q0: f64, first_pole: &Pole) -> Self {
        let half_width = 0.5 * q0;
        let height = half_width.min(0.25 * first_pole.location.im);
        Self { q0, half_width, height }
    }

    fn breakpoints(&self) -> [f64; 3] {
        [self.q0 - self.half_width, self.q0, self.q0 + self.half_width]
    }

    fn point(&self, ln_q: f64, t: f64) -> Result<(CutPlanePoint, Complex64)> {
        let q = ln_q.exp();
        let r = (q - self.q0) / self.half_width;
        if r.abs() >= 1.0 {
            return Ok((CutPlanePoint::on_cut_log(ln_q, crate::kernel::CutSide::Upper)?, Complex64::new(1.0, 0.0)));
        }
        let w = 1.0 - r * r;
        let h = self.height * w * w;
        let dh = -4.0 * self.height * r * w / self.half_width;
        let s = CutPlanePoint::new(Complex64::new(-q, h))?;
        Ok((s, Complex64::new(0.0, h * t).exp() * Complex64::new(1.0, -dh)))
    }
}

/// Cut integral of `-(1/π) Im[F̃(s) G(s) e^{st}]` along the indented path.
fn forced_cut<G>(t: f64, forcing: &ForcingSpec, params: &MaterialParams, first: &Pole, cfg: &SolverConfig, mut g: G) -> Result<IntegralResult>
where
    G: FnMut(&CutPlanePoint) -> Result<Complex64>,
{
    let mut bps: Vec<f64> = kernel_breakpoints(params).to_vec();
    let path = forcing.cut_pole().map(|q0| IndentedPath::new(q0, first));
    if let Some(p) = &path {
        bps.extend_from_slice(&p.breakpoints());
    }
    integrate_cut(
        |u| {
            let q = u.exp();
            if q == 0.0 {
                return Ok(0.0);
            }
            let (s, factor) = match &path {
                Some(p) => p.point(u, t)?,
                None => (CutPlanePoint::on_cut_log(u, crate::kernel::CutSide::Upper)?, Complex64::new(1.0, 0.0)),
            };
            let v = forcing.laplace(s.value()) * g(&s)? * factor;
            Ok(-q * v.im / PI)
        },
        CutWeight::Decay,
        t,
        &bps,
        &cfg.quadrature,
    )
}

/// Displacement due to the extra forcing `F`, from `F̃ P̃`.
pub fn compute_u_f(
    x: f64,
    t: f64,
    forcing: &ForcingSpec,
    params: &MaterialParams,
    poles: &PoleSet,
    cfg: &SolverConfig,
) -> Result<FieldSample> {
    check_x(x)?;
    check_t(t)?;
    forcing.validate()?;
    if !forcing.has_extra() {
        return Ok(FieldSample::zero(x, t));
    }
    forcing.check_admissible()?;
    if t <= 0.0 || x == 0.0 {
        return Ok(FieldSample::zero(x, t));
    }
    let active = active_poles(params, poles, cfg)?;
    let cut = forced_cut(t, forcing, params, &active[0], cfg, |s| Ok(eval_p_tilde(x, s, params)?.value))?;
    let series = residue_series(
        active,
        t,
        |p| Ok(forcing.laplace(p.location) * residue_p(x, p, t, params)?),
        |p| displacement_amplitude(p) * forcing.laplace(p.location).norm(),
    )?;
    Ok(assemble(x, t, 0.0, &cut, 0.0, &series))
}

/// Stress under `Υ0 H(t) + F(t)`: `σ_H` plus the inverse transform of `s F̃ T̃`.
pub fn compute_sigma_f(
    x: f64,
    t: f64,
    forcing: &ForcingSpec,
    params: &MaterialParams,
    poles: &PoleSet,
    cfg: &SolverConfig,
) -> Result<FieldSample> {
    forcing.validate()?;
    let base = compute_sigma_h(x, t, forcing.upsilon0, params, poles, cfg)?;
    if !forcing.has_extra() || t <= 0.0 {
        return Ok(base);
    }
    forcing.check_admissible()?;
    let active = active_poles(params, poles, cfg)?;
    let cut = forced_cut(t, forcing, params, &active[0], cfg, |s| Ok(eval_s_t_tilde(x, s, params)?.value))?;
    let series = residue_series(
        active,
        t,
        |p| Ok(p.location * forcing.laplace(p.location) * residue_t(x, p, t, params)?),
        |p| stress_amplitude(p) * (p.location * forcing.laplace(p.location)).norm(),
    )?;
    Ok(base.plus(&assemble(x, t, 0.0, &cut, 0.0, &series)))
}

/// Dispatch by field name.
pub fn compute_field(
    field: Field,
    x: f64,
    t: f64,
    forcing: &ForcingSpec,
    params: &MaterialParams,
    poles: &PoleSet,
    cfg: &SolverConfig,
) -> Result<FieldSample> {
    match field {
        Field::P => compute_p(x, t, params, poles, cfg),
        Field::UH => compute_u_h(x, t, forcing.upsilon0, params, poles, cfg),
        Field::T => compute_t(x, t, params, poles, cfg),
        Field::SigmaH => compute_sigma_h(x, t, forcing.upsilon0, params, poles, cfg),
        Field::UF => compute_u_f(x, t, forcing, params, poles, cfg),
        Field::SigmaF => compute_sigma_f(x, t, forcing, params, poles, cfg),
    }
}

/// Sequential evaluation of one field over a grid.
pub fn compute_grid(
    field: Field,
    grid: &GridSpec,
    forcing: &ForcingSpec,
    params: &MaterialParams,
    poles: &PoleSet,
    cfg: &SolverConfig,
) -> Result<FieldGrid> {
    grid.validate()?;
    let ts = grid.times.values();
    let mut samples = Vec::with_capacity(grid.xs.len() * ts.len());
    for &x in &grid.xs {
        for &t in &ts {
            samples.push(compute_field(field, x, t, forcing, params, poles, cfg)?);
        }
    }
    Ok(FieldGrid { field, xs: grid.xs.clone(), ts, samples, config: cfg.clone() })
}

/// Physical quantities of a rod of length `L`, density `ρ` and modulus `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalRecord {
    pub length: f64,
    pub density: f64,
    pub modulus: f64,
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub sigma: f64,
    pub upsilon: f64,
    /// Weight base of the stress side, in units of time.
    pub a: f64,
    /// Weight base of the strain side, in units of time.
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DimensionlessRecord {
    /// `L sqrt(ρ/E)`.
    pub time_unit: f64,
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub sigma: f64,
    pub upsilon: f64,
    pub a: f64,
    pub b: f64,
}

fn time_unit(length: f64, density: f64, modulus: f64) -> Result<f64> {
    for v in [length, density, modulus] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument("L, rho and E must be positive and finite"));
        }
    }
    Ok(length * (density / modulus).sqrt())
}

/// Scales lengths by `L`, times by `L sqrt(ρ/E)`, stresses by `E`.
pub fn nondimensionalize(p: &PhysicalRecord) -> Result<DimensionlessRecord> {
    let tu = time_unit(p.length, p.density, p.modulus)?;
    Ok(DimensionlessRecord {
        time_unit: tu,
        x: p.x / p.length,
        t: p.t / tu,
        u: p.u / p.length,
        sigma: p.sigma / p.modulus,
        upsilon: p.upsilon / p.length,
        a: p.a / tu,
        b: p.b / tu,
    })
}

/// Inverse of [`nondimensionalize`] for the given rod.
pub fn redimensionalize(d: &DimensionlessRecord, length: f64, density: f64, modulus: f64) -> Result<PhysicalRecord> {
    let tu = time_unit(length, density, modulus)?;
    Ok(PhysicalRecord {
        length,
        density,
        modulus,
        x: d.x * length,
        t: d.t * tu,
        u: d.u * length,
        sigma: d.sigma * modulus,
        upsilon: d.upsilon * length,
        a: d.a * tu,
        b: d.b * tu,
    })
}
