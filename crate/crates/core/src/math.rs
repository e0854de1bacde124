//! Small complex and special-function helpers that `num-complex` does not provide.

use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// `e^w - 1` without cancellation for small `|w|`.
pub fn expm1(w: Complex64) -> Complex64 {
    if w.norm() > 0.5 {
        return w.exp() - 1.0;
    }
    let (sin_im, cos_im) = w.im.sin_cos();
    let half = (0.5 * w.im).sin();
    // cos(im) - 1 = -2 sin^2(im / 2)
    let re = w.re.exp_m1() * cos_im - 2.0 * half * half;
    Complex64::new(re, w.re.exp() * sin_im)
}

/// `ln(1 + w)` on the principal branch, accurate for small `|w|`.
pub fn ln_1p(w: Complex64) -> Complex64 {
    if w.norm() > 0.5 {
        return (w + 1.0).ln();
    }
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    Complex64::new(re, w.im.atan2(1.0 + w.re))
}

/// `ln(1 + w) / w` by its power series; only valid for `|w|` well inside the unit disc.
pub fn ln_1p_over_series(w: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..12 {
        sum += term / (k as f64 + 1.0);
        term *= -w;
        if term.norm() < 1e-18 {
            break;
        }
    }
    sum
}

/// `(-1)^n` as a float.
pub fn alternating_sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `sin(n pi x)` with the argument reduced modulo 2 before scaling, exact at integer `n x`.
pub fn sin_n_pi(n: usize, x: f64) -> f64 {
    let mut r = reduce_mod2(n as f64 * x);
    let mut sign = 1.0;
    if r >= 1.0 {
        r -= 1.0;
        sign = -1.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    }
    sign * (PI * r).sin()
}

/// `cos(n pi x)` with the same argument reduction as [`sin_n_pi`].
pub fn cos_n_pi(n: usize, x: f64) -> f64 {
    let mut r = reduce_mod2(n as f64 * x);
    if r > 1.0 {
        r = 2.0 - r;
    }
    if r == 0.5 {
        0.0
    } else if r > 0.5 {
        -(PI * (1.0 - r)).cos()
    } else {
        (PI * r).cos()
    }
}

fn reduce_mod2(v: f64) -> f64 {
    v - 2.0 * (0.5 * v).floor()
}
