use num_complex::Complex64;
use rodwave_core::fields::{compute_p, compute_sigma_f, compute_t, compute_u_f, compute_u_h};
use rodwave_core::kernel::{eval_p_tilde, eval_t_tilde};
use rodwave_core::oracle::{displacement_transform, invert, stress_transform, OracleConfig, OracleMethod, Precision};
use rodwave_core::poles::build_pole_set;
use rodwave_core::{CutPlanePoint, ForcingKind, ForcingSpec, MaterialParams, PoleSet, RootConfig, SolverConfig};

fn setup() -> (MaterialParams, PoleSet, SolverConfig) {
    let params = MaterialParams::new(0.045, 0.5).unwrap();
    let cfg = SolverConfig::default();
    let poles = build_pole_set(cfg.n_residues, &params, &RootConfig::default()).unwrap();
    (params, poles, cfg)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn impulse_response_matches_inversion() {
    let (params, poles, cfg) = setup();
    let f = |s: Complex64| Ok(eval_p_tilde(0.5, &CutPlanePoint::new(s)?, &params)?.value);
    let o = invert(f, 2.0, &OracleConfig::default()).unwrap();
    let v = compute_p(0.5, 2.0, &params, &poles, &cfg).unwrap();
    assert!(rel(v.value, o.value) < 1e-4, "{} vs {}", v.value, o.value);
}

#[test]
fn unit_step_stress_matches_inversion() {
    let (params, poles, cfg) = setup();
    let f = |s: Complex64| Ok(eval_t_tilde(0.25, &CutPlanePoint::new(s)?, &params)?.value);
    let o = invert(f, 5.0, &OracleConfig::default()).unwrap();
    let v = compute_t(0.25, 5.0, &params, &poles, &cfg).unwrap();
    assert!(rel(v.value, o.value) < 1e-4);
}

#[test]
fn forced_fields_match_inversion() {
    let (params, poles, cfg) = setup();
    let forcing = ForcingSpec::new(1.0, ForcingKind::PolyExp { c: 0.1, tau: 1.0 }).unwrap();
    let extra = ForcingSpec { upsilon0: 0.0, ..forcing };
    let o = invert(displacement_transform(0.5, &extra, &params), 1.0, &OracleConfig::default()).unwrap();
    let v = compute_u_f(0.5, 1.0, &forcing, &params, &poles, &cfg).unwrap();
    assert!(rel(v.value, o.value) < 1e-6);

    let o = invert(stress_transform(0.25, &forcing, &params), 2.0, &OracleConfig::default()).unwrap();
    let v = compute_sigma_f(0.25, 2.0, &forcing, &params, &poles, &cfg).unwrap();
    assert!((v.value - o.value).abs() < 1e-3);
}

#[test]
fn both_methods_agree_within_estimates() {
    let (params, poles, cfg) = setup();
    let heav = ForcingSpec::heaviside(1.0).unwrap();
    for &(x, t) in &[(0.25, 1.0), (0.75, 5.0)] {
        let a = invert(displacement_transform(x, &heav, &params), t, &OracleConfig::default()).unwrap();
        let b = invert(displacement_transform(x, &heav, &params), t, &OracleConfig::euler()).unwrap();
        assert!((a.value - b.value).abs() <= a.error_estimate + b.error_estimate);
        let v = compute_u_h(x, t, 1.0, &params, &poles, &cfg).unwrap();
        assert!((v.value - a.value).abs() <= a.error_estimate + v.error_estimate + 1e-14);
    }
}

fn pairs() -> Vec<(fn(Complex64) -> rodwave_core::Result<Complex64>, f64, f64)> {
    vec![
        (|s| Ok(s.inv()), 1.0, 1.0),
        (|s| Ok((s * s).inv()), 3.0, 3.0),
        (|s| Ok((s + 1.0).inv()), 2.0, (-2.0f64).exp()),
        (|s| Ok((s * s + 4.0).inv() * s), 1.3, (2.6f64).cos()),
    ]
}

#[test]
fn node_doubling_stays_within_estimate() {
    for method in [OracleMethod::BromwichTrapezoid, OracleMethod::EulerSummation] {
        let base = OracleConfig { method, nodes: if method == OracleMethod::EulerSummation { 2000 } else { 200_000 }, ..OracleConfig::default() };
        let doubled = OracleConfig { nodes: 2 * base.nodes, ..base };
        for (f, t, exact) in pairs() {
            let a = invert(f, t, &base).unwrap();
            let b = invert(f, t, &doubled).unwrap();
            assert!((a.value - b.value).abs() <= a.error_estimate + b.error_estimate, "{method:?} t={t}");
            assert!((b.value - exact).abs() < 1e-7, "{method:?} t={t}: {} vs {exact}", b.value);
        }
    }
}

#[test]
fn abscissa_does_not_matter() {
    let params = MaterialParams::new(0.045, 0.5).unwrap();
    let heav = ForcingSpec::heaviside(1.0).unwrap();
    for method in [OracleMethod::BromwichTrapezoid, OracleMethod::EulerSummation] {
        let nodes = if method == OracleMethod::EulerSummation { 4000 } else { 1_000_000 };
        let at = |c: f64| {
            let cfg = OracleConfig { method, abscissa: Some(c), nodes, ..OracleConfig::default() };
            invert(displacement_transform(0.5, &heav, &params), 4.0, &cfg).unwrap()
        };
        let (a, b) = (at(0.5), at(1.0));
        assert!((a.value - b.value).abs() <= a.error_estimate + b.error_estimate, "{method:?}: {a:?} {b:?}");
    }
}

#[test]
fn plain_and_compensated_sums_agree() {
    let plain = OracleConfig { precision: Precision::Double, ..OracleConfig::default() };
    let comp = OracleConfig::default();
    let a = invert(|s| Ok((s * s).inv()), 3.0, &plain).unwrap();
    let b = invert(|s| Ok((s * s).inv()), 3.0, &comp).unwrap();
    assert!((a.value - b.value).abs() < 1e-9);
}
