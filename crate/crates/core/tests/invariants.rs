use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rodwave_core::fields::{
    compute_field, compute_u_h, nondimensionalize, redimensionalize, PhysicalRecord,
};
use rodwave_core::kernel::{eval_m, eval_p_tilde, eval_sm_derivative, eval_t_tilde};
use rodwave_core::poles::{build_pole_set, residue_p};
use rodwave_core::quadrature::{cut_density_p, integrate_cut, kernel_breakpoints};
use rodwave_core::{
    CutPlanePoint, CutWeight, Field, ForcingKind, ForcingSpec, MaterialParams, PoleSet, QuadratureConfig, RootConfig,
    SolverConfig,
};

fn damped() -> MaterialParams {
    MaterialParams::new(0.045, 0.5).unwrap()
}

fn damped_poles() -> &'static PoleSet {
    static SET: OnceLock<PoleSet> = OnceLock::new();
    SET.get_or_init(|| build_pole_set(400, &damped(), &RootConfig::default()).unwrap())
}

fn hooke_poles() -> &'static PoleSet {
    static SET: OnceLock<PoleSet> = OnceLock::new();
    SET.get_or_init(|| build_pole_set(400, &MaterialParams::new(0.1, 0.1).unwrap(), &RootConfig::default()).unwrap())
}

fn off_axis() -> impl Strategy<Value = Complex64> {
    (-6.0f64..6.0, 0.01f64..30.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn transfer_functions_are_conjugate_symmetric(s in off_axis(), x in 0.0f64..1.0) {
        let p = damped();
        let up = CutPlanePoint::new(s).unwrap();
        let down = CutPlanePoint::new(s.conj()).unwrap();
        let a = eval_m(&up, &p);
        let b = eval_m(&down, &p);
        prop_assert!((a - b.conj()).norm() <= 1e-14 * a.norm());
        if let (Ok(a), Ok(b)) = (eval_p_tilde(x, &up, &p), eval_p_tilde(x, &down, &p)) {
            prop_assert!((a.value - b.value.conj()).norm() <= 1e-12 * a.value.norm().max(1.0));
        }
        if let (Ok(a), Ok(b)) = (eval_t_tilde(x, &up, &p), eval_t_tilde(x, &down, &p)) {
            prop_assert!((a.value - b.value.conj()).norm() <= 1e-12 * a.value.norm().max(1.0));
        }
    }

    #[test]
    fn equal_bases_give_the_elastic_rod(s in off_axis(), x in 0.0f64..1.0, a in 0.01f64..5.0) {
        let p = MaterialParams::new(a, a).unwrap();
        let pt = CutPlanePoint::new(s).unwrap();
        prop_assert!((eval_m(&pt, &p) - 1.0).norm() < 1e-14);
        if let Ok(v) = eval_p_tilde(x, &pt, &p) {
            let want = (s * x).sinh() / s.sinh();
            prop_assert!((v.value - want).norm() <= 1e-11 * want.norm().max(1.0));
        }
    }

    #[test]
    fn conjugate_poles_carry_conjugate_residues(n in 1usize..400) {
        // residues are built from s_n and d(sM)/ds at s_n; both mirror under conjugation,
        // so Res at the lower pole is the conjugate and pair_sum = 2 Re is exact
        let p = damped();
        let pole = damped_poles().poles[n - 1];
        let up = CutPlanePoint::new(pole.location).unwrap();
        let down = CutPlanePoint::new(pole.location.conj()).unwrap();
        let du = eval_sm_derivative(&up, &p);
        let dd = eval_sm_derivative(&down, &p);
        prop_assert!((du - dd.conj()).norm() <= 1e-13 * du.norm());
        prop_assert!((du.norm() - pole.derivative_at_pole.norm()).abs() <= 1e-12 * du.norm());
        let g = pole.location.conj() * eval_m(&down, &p);
        prop_assert!((g - Complex64::new(0.0, -(n as f64) * PI)).norm() < 1e-9);
    }

    #[test]
    fn residues_decay_like_exp_root_n(n in 1usize..400, x in 0.0f64..1.0, t in 0.5f64..15.0) {
        // |Res_n| <= K e^{-C t sqrt(n)} with C = 1/2 and K = 2
        let pole = damped_poles().poles[n - 1];
        let r = residue_p(x, &pole, t, &damped()).unwrap().norm();
        prop_assert!(r <= 2.0 * (-0.5 * t * (n as f64).sqrt()).exp(), "n={} r={}", n, r);
    }

    #[test]
    fn cut_weights_satisfy_fubini(x in 0.05f64..0.95, t in 0.5f64..6.0) {
        // ∫ f (e^{-q t0} - e^{-q t})/q dq equals ∫_{t0}^t (∫ f e^{-qτ} dq) dτ
        let p = damped();
        let cfg = QuadratureConfig::default();
        let bps = kernel_breakpoints(&p);
        let t0 = 0.25;
        let acc = |tt: f64| integrate_cut(|u| cut_density_p(x, u, &p), CutWeight::Accumulated, tt, &bps, &cfg).unwrap().value;
        let lhs = acc(t) - acc(t0);
        // 10-point Gauss-Legendre in τ on 24 panels
        let (nodes, weights) = gauss_legendre_10();
        let mut rhs = 0.0;
        let panels = 24;
        let w = (t - t0) / panels as f64;
        for k in 0..panels {
            let mid = t0 + (k as f64 + 0.5) * w;
            for (z, wt) in nodes.iter().zip(weights.iter()) {
                for sign in [-1.0, 1.0] {
                    let tau = mid + sign * z * 0.5 * w;
                    rhs += 0.5 * w * wt * integrate_cut(|u| cut_density_p(x, u, &p), CutWeight::Decay, tau, &bps, &cfg).unwrap().value;
                }
            }
        }
        prop_assert!((lhs - rhs).abs() < 1e-9, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn doubling_q_max_stays_within_tail_estimate(x in 0.05f64..0.95, t in 0.2f64..10.0) {
        let p = damped();
        let bps = kernel_breakpoints(&p);
        let base = QuadratureConfig::default();
        let wide = QuadratureConfig { q_max: 2.0 * base.q_max, ..base };
        let a = integrate_cut(|u| cut_density_p(x, u, &p), CutWeight::Decay, t, &bps, &base).unwrap();
        let b = integrate_cut(|u| cut_density_p(x, u, &p), CutWeight::Decay, t, &bps, &wide).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.total_error() + b.total_error());
    }

    #[test]
    fn nondimensional_round_trip(
        length in 1e-3f64..1e3, density in 1e-2f64..1e5, modulus in 1e3f64..1e12,
        x in 0.0f64..1.0, t in 0.0f64..100.0, u in -1.0f64..1.0, sigma in -1e9f64..1e9,
        a in 1e-6f64..1.0, b in 1e-6f64..1.0,
    ) {
        let rec = PhysicalRecord { length, density, modulus, x: x * length, t, u, sigma, upsilon: u, a, b };
        let back = redimensionalize(&nondimensionalize(&rec).unwrap(), length, density, modulus).unwrap();
        for (p, q) in [(rec.x, back.x), (rec.t, back.t), (rec.u, back.u), (rec.sigma, back.sigma), (rec.a, back.a), (rec.b, back.b)] {
            prop_assert!((p - q).abs() <= 4.0 * f64::EPSILON * p.abs());
        }
    }

    #[test]
    fn every_field_vanishes_before_the_load(x in 0.0f64..0.999, t in -50.0f64..-1e-9) {
        let forcing = ForcingSpec::new(1.0, ForcingKind::PolyExp { c: 0.1, tau: 1.0 }).unwrap();
        let cfg = SolverConfig::default();
        for f in [Field::P, Field::UH, Field::T, Field::SigmaH, Field::UF, Field::SigmaF] {
            let v = compute_field(f, x, t, &forcing, &damped(), damped_poles(), &cfg).unwrap();
            prop_assert_eq!(v.value, 0.0);
        }
    }
}

fn gauss_legendre_10() -> ([f64; 5], [f64; 5]) {
    (
        [0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845, 0.9739065285171717],
        [0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806, 0.0666713443086881],
    )
}

#[test]
fn boundary_identities_at_random_times() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let cfg = SolverConfig::default();
    let p = damped();
    for _ in 0..1000 {
        let t = (1e-3f64..15.0).new_tree(&mut runner).unwrap().current();
        let at0 = compute_u_h(0.0, t, 1.0, &p, damped_poles(), &cfg).unwrap();
        assert!(at0.value.abs() <= at0.error_estimate.max(1e-15));
        let at1 = compute_u_h(1.0, t, 1.0, &p, damped_poles(), &cfg).unwrap();
        assert!((at1.value - 1.0).abs() <= at1.error_estimate.max(1e-15), "t={t}: {at1:?}");
    }
}

/// `x + Σ_{n≤N} 2(-1)^n sin(nπx) cos(nπt)/(nπ)`, the elastic step response.
fn fourier_step(x: f64, t: f64, terms: usize) -> f64 {
    let mut sum = x;
    for n in 1..=terms {
        let k = n as f64 * PI;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += 2.0 * sign * (k * x).sin() * (k * t).cos() / k;
    }
    sum
}

#[test]
fn elastic_limit_reproduces_the_fourier_series() {
    let p = MaterialParams::new(0.1, 0.1).unwrap();
    let cfg = SolverConfig::default();
    for i in 0..5 {
        for j in 0..5 {
            let x = 0.1 + 0.2 * i as f64;
            let t = 0.5 + 1.125 * j as f64;
            let v = compute_u_h(x, t, 1.0, &p, hooke_poles(), &cfg).unwrap();
            assert!(v.cut_part.abs() < 1e-15);
            let want = fourier_step(x, t, cfg.n_residues);
            assert!((v.value - want).abs() < 1e-6, "x={x} t={t}: {} vs {want}", v.value);
        }
    }
}

#[test]
fn long_time_limits() {
    let p = damped();
    let cfg = SolverConfig::default();
    for &x in &[0.25, 0.5, 0.75] {
        let dev = |t: f64| (compute_u_h(x, t, 1.0, &p, damped_poles(), &cfg).unwrap().value - x).abs();
        assert!(dev(10.0) < dev(5.0) && dev(20.0) < dev(10.0) && dev(20.0) < 1e-4);
    }
    // the stress settles to a common plateau; it decreases monotonically after the last overshoot
    let mut prev = f64::INFINITY;
    for k in 0..20 {
        let t = 8.0 + k as f64;
        let v = compute_field(Field::SigmaH, 0.5, t, &ForcingSpec::default(), &p, damped_poles(), &cfg).unwrap().value;
        assert!(v <= prev + 1e-12, "t={t}");
        prev = v;
    }
}
