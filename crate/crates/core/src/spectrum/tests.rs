#![allow(clippy::excessive_precision)]

use super::*;
use crate::potential::{default_registry, find_molecule, BetaVariant};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn hydrogen() -> (PotentialConfig, DerivedCoefficients) {
    let reg = default_registry();
    let c = PotentialConfig::new(find_molecule(&reg, "H2").unwrap().clone(), 0.5, BetaVariant::default()).unwrap();
    let d = derive_coefficients(&c, &UnitSystem::default()).unwrap();
    (c, d)
}

/// Bound-state momentum on the negative axis, assembled without the
/// `ζ₀² − ζ₁²` cancellation: `cP = |β|(ζ₀ − ζ₁)(ζ₀ + ζ₁)` where
/// `ζ₀ − ζ₁` comes from factoring the quantisation condition by hand.
fn negative_axis_oracle(c: &PotentialConfig, beta: f64, n: usize) -> f64 {
    let m = &c.molecule;
    let eps: f64 = c.e_te() / m.q;
    let g = (m.de / beta.abs()).sqrt();
    let w = (g * g * (1.0 - eps).powi(2) + 0.25).sqrt();
    let nf = n as f64;
    let big_n = nf + 0.5 - w;
    let z0 = -g * eps;
    let f_small = nf + 0.5 - 0.25 / (w + g * (1.0 - eps));
    let f_big = big_n + z0 - g;
    let diff = f_small * f_big / (2.0 * big_n);
    beta.abs() * diff * (2.0 * z0 - diff)
}

/// Unit-interval instance with `β = −1`, `2A − C = 90`, `w² = 25.25`.
fn synthetic() -> DerivedCoefficients {
    DerivedCoefficients::from_dimensionless(-1.0, -5.0, -100.0, -120.0, SolutionDomain::UnitInterval).unwrap()
}

/// `ζ₁ = P/(2N)`, `P = 2A − C − n² − (2n + 1)ν₊`, `N = n + ν₊`.
fn unit_interval_zeta1(d: &DerivedCoefficients, n: usize) -> f64 {
    let nf = n as f64;
    let nu = d.inv_r();
    (2.0 * d.a - d.c - nf * nf - (2.0 * nf + 1.0) * nu) / (2.0 * (nf + nu))
}

fn solved(d: &DerivedCoefficients, n: usize) -> QuantizedLevel {
    solve_quantization(d, n).unwrap().unwrap()
}

#[test]
fn hydrogen_quantization_root() {
    let (c, d) = hydrogen();
    let golden = [
        3.535_323_314_614_418_5e-11,
        1.060_596_994_381_665_3e-10,
        1.767_661_657_297_773_4e-10,
        2.474_726_320_209_766_2e-10,
        3.181_790_983_117_643_7e-10,
    ];
    for (n, g) in golden.into_iter().enumerate() {
        let cp = momentum_eigenvalue(&d, n, EigenvalueVariant::QuantizationRoot).unwrap().unwrap();
        // f64 bisection on M ~ 1e11 against ζ₁² ~ 1e23 resolves about 1e-4.
        assert!(rel(cp, g) < 1e-3, "n = {n}: {cp:e} vs {g:e}");
        assert!(rel(cp, negative_axis_oracle(&c, d.beta, n)) < 1e-3);
    }
    let q = solved(&d, 0);
    assert!(rel(q.level.zeta1, 313_323_353_213.935) < 1e-12);
    assert!(q.nu < 0.0);
    assert!(q.reduction.branch().tau_slope() > 0.0);
}

#[test]
fn hydrogen_literal_readings() {
    let (_, d) = hydrogen();
    let golden = [
        -3.535_323_314_628_97e-11,
        -1.060_596_994_394_84e-10,
        -1.767_661_657_330_89e-10,
        -2.474_726_320_271_07e-10,
        -3.181_790_983_215_35e-10,
    ];
    let mut prev = 0.0;
    for (n, g) in golden.into_iter().enumerate() {
        let cp = momentum_eigenvalue(&d, n, EigenvalueVariant::BetaTimesA).unwrap().unwrap();
        // βA ≈ 45 eV cancels down to ~1e-10 eV.
        assert!(rel(cp, g) < 1e-3, "n = {n}: {cp:e} vs {g:e}");
        assert!(cp < prev);
        prev = cp;
        let printed = momentum_eigenvalue(&d, n, EigenvalueVariant::AsPrintedEq22).unwrap().unwrap();
        assert!(rel(printed, d.a) < 1e-15);
    }
}

#[test]
fn vanishing_bracket_gives_a() {
    // 2A − C = 1/R = 3 at n = 0.
    let d = DerivedCoefficients::from_dimensionless(-1.0, -1.0, -5.0, -10.0, SolutionDomain::UnitInterval).unwrap();
    assert!((d.inv_r() - 3.0).abs() < 1e-15);
    let cp = momentum_eigenvalue(&d, 0, EigenvalueVariant::AsPrintedEq22).unwrap().unwrap();
    assert!((cp - d.a).abs() < 1e-14);
}

#[test]
fn pole_in_printed_bracket() {
    let mut d = synthetic();
    d.r_inv_minus_half = -1.5;
    assert!(matches!(
        momentum_eigenvalue(&d, 1, EigenvalueVariant::BetaTimesA),
        Err(Error::Pole { n: 1 })
    ));
}

#[test]
fn unit_interval_roots_match_factored_condition() {
    let d = synthetic();
    for n in 0..6 {
        let q = solved(&d, n);
        let z = unit_interval_zeta1(&d, n);
        assert!((q.level.zeta1 - z).abs() < 1e-9 * z.max(1.0), "n = {n}: {} vs {z}", q.level.zeta1);
        assert!((q.nu - d.inv_r()).abs() < 1e-12);
        assert!(q.reduction.branch().tau_slope() < 0.0);
    }
    // P < 0 from n = 6 on.
    assert!(unit_interval_zeta1(&d, 6) < 0.0);
    assert!(matches!(solve_quantization(&d, 6).unwrap(), Err(Exclusion::NoRoot { .. })));
}

#[test]
fn spectrum_reports_cutoff() {
    let d = synthetic();
    let (c, hd) = hydrogen();
    let res = compute_spectrum(&c, &UnitSystem::default(), [3, 1, 0, 2, 1, 4], EigenvalueVariant::QuantizationRoot).unwrap();
    assert_eq!(res.levels.iter().map(|l| l.n).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    assert!(res.excluded.is_empty());
    assert_eq!(res.realness_cutoff, Some(4));
    assert_eq!(res.levels[2].cpn, res.levels[2].pn);
    assert_eq!(
        res.levels[0].cpn,
        momentum_eigenvalue(&hd, 0, EigenvalueVariant::QuantizationRoot).unwrap().unwrap()
    );
    // Excluded levels stay visible.
    let outcomes: Vec<_> = (0..9).map(|n| solve_quantization(&d, n).unwrap().is_ok()).collect();
    assert_eq!(outcomes, [true, true, true, true, true, true, false, false, false]);
}

#[test]
fn variant_labels_round_trip() {
    for v in EigenvalueVariant::ALL {
        assert_eq!(v.label().parse::<EigenvalueVariant>().unwrap(), v);
    }
    assert!("eq22".parse::<EigenvalueVariant>().is_err());
    assert_eq!(EigenvalueVariant::default(), EigenvalueVariant::QuantizationRoot);
}

/// `C(x, k)` for real `x`.
fn binom(x: f64, k: usize) -> f64 {
    (0..k).map(|j| (x - j as f64) / (j as f64 + 1.0)).product()
}

fn jacobi_sum(n: usize, a: f64, b: f64, x: f64) -> f64 {
    (0..=n)
        .map(|s| {
            binom(n as f64 + a, n - s)
                * binom(n as f64 + b, s)
                * ((x - 1.0) / 2.0).powi(s as i32)
                * ((x + 1.0) / 2.0).powi((n - s) as i32)
        })
        .sum()
}

#[test]
fn jacobi_low_degrees() {
    for (a, b, x) in [(0.3, -0.7, 0.1), (2.0, 5.0, -0.9), (-0.5, -0.5, 1.0)] {
        assert_eq!(jacobi(0, a, b, x).unwrap(), 1.0);
        let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
        assert!((jacobi(1, a, b, x).unwrap() - p1).abs() < 1e-15);
    }
    let v = jacobi(3, 2.0, 1.0, 0.3).unwrap();
    assert!((v - jacobi_sum(3, 2.0, 1.0, 0.3)).abs() < 1e-14);
    assert!((v + 0.9515).abs() < 1e-13, "{v}");
    assert!(matches!(jacobi(2, -1.0, 0.0, 0.0), Err(Error::InvalidParameter { .. })));
    assert!(jacobi(2, 0.0, -1.5, 0.0).is_err());
    assert!(jacobi(2, f64::NAN, 0.0, 0.0).is_err());
}

#[test]
fn jacobi_matches_finite_sum_grid() {
    let params = [-0.5, 0.0, 1.0, 2.5];
    for n in 0..=5 {
        for &a in &params {
            for &b in &params {
                for i in 0..50 {
                    let x = -1.0 + 2.0 * i as f64 / 49.0;
                    let got = jacobi(n, a, b, x).unwrap();
                    let want = jacobi_sum(n, a, b, x);
                    assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "n={n} a={a} b={b} x={x}");
                }
            }
        }
    }
}

#[test]
fn jacobi_orthogonality() {
    // x = cos θ turns (1 − x)^a (1 + x)^b dx into a smooth integrand in θ
    // for these parameters.
    let rule = GaussLegendre::new(200);
    for &a in &[-0.5, 0.0, 1.0, 2.5] {
        for &b in &[-0.5, 0.0, 1.0, 2.5] {
            for m in 0..=4 {
                for n in 0..m {
                    let v = rule.integrate(0.0, std::f64::consts::PI, |t| {
                        let x = t.cos();
                        let w = (1.0 - x).powf(a) * (1.0 + x).powf(b) * t.sin();
                        w * jacobi_unchecked(m, a, b, x) * jacobi_unchecked(n, a, b, x)
                    });
                    assert!(v.abs() < 1e-8, "a={a} b={b} m={m} n={n}: {v}");
                }
            }
        }
    }
}

#[test]
fn wavefunction_examples() {
    let spec = WavefunctionSpec::new(0, 1.0, 1.0).unwrap();
    assert!((wavefunction(&spec, 0.25).unwrap() - 0.1875).abs() < 1e-16);
    assert!(wavefunction(&spec, 1e-12).unwrap().abs() < 1e-11);
    for s in [0.0, 1.0, -0.3, 1.5, f64::NAN] {
        assert!(matches!(wavefunction(&spec, s), Err(Error::Domain { .. })));
    }
    assert!(WavefunctionSpec::new(1, -0.6, 1.0).is_err());
    assert!(WavefunctionSpec::new(1, 0.2, 0.0).is_err());
}

#[test]
fn normalization_constants() {
    let spec = WavefunctionSpec::new(0, 1.0, 1.0).unwrap();
    let b0 = normalize(&spec, 32).unwrap();
    assert!(rel(b0, 30f64.sqrt()) < 1e-12, "{b0}");
    let v = normalization_constant(|_| 3.0, 16).unwrap();
    assert!(rel(v, 1.0 / 3.0) < 1e-10);
    assert!(matches!(normalization_constant(|_| 0.0, 16), Err(Error::Integrability(_))));
    assert!(normalization_constant(|s| 1.0 / s, 16).is_ok_and(|b| b.is_finite()));
    assert!(normalization_constant(|_| f64::NAN, 16).is_err());
    for (n, z, nu) in [(2, 1.5, 2.0), (3, 2.0, 3.0), (4, 3.0, 1.0)] {
        let spec = WavefunctionSpec::new(n, z, nu).unwrap();
        let a = normalize(&spec, 64).unwrap();
        let b = normalize(&spec, 128).unwrap();
        assert!(rel(a, b) < 1e-10);
        let s = spec.normalized(64).unwrap();
        let total = integrate_unit_interval(|x| wavefunction(&s, x).unwrap().powi(2), 128);
        assert!((total - 1.0).abs() < 1e-10);
    }
}

fn residual_sup(level: &LevelCoefficients, spec: &WavefunctionSpec) -> f64 {
    let grid: Vec<f64> = (0..200).map(|i| 0.01 + 0.98 * i as f64 / 199.0).collect();
    let max_psi = grid.iter().map(|&s| spec.derivatives(s).0.abs()).fold(0.0, f64::max);
    let scale = residual_scale(level) * max_psi;
    grid.iter().map(|&s| transformed_residual(level, spec, s).abs()).fold(0.0, f64::max) / scale
}

#[test]
fn quantized_levels_solve_transformed_equation() {
    let d = synthetic();
    for n in 0..6 {
        let q = solved(&d, n);
        let spec = WavefunctionSpec::for_level(&q, DEFAULT_QUADRATURE_ORDER).unwrap();
        let r = residual_sup(&q.level, &spec);
        assert!(r < 1e-8, "n = {n}: {r:e}");
    }
    // Off the quantised M the residual is O(1).
    let q = solved(&d, 2);
    let off = LevelCoefficients::from_m(&d, 2, q.level.m - 3.0).unwrap();
    let spec = WavefunctionSpec::new(2, q.level.zeta1, q.nu).unwrap();
    assert!(residual_sup(&off, &spec) > 1e-3);
}

#[test]
fn analytic_derivatives_match_finite_differences() {
    let spec = WavefunctionSpec::new(3, 1.7, 2.4).unwrap().normalized(64).unwrap();
    for i in 1..40 {
        let s = i as f64 / 40.0;
        let (_, d1, d2) = spec.derivatives(s);
        let f = |x: f64| spec.derivatives(x).0;
        // Richardson-extrapolated central differences.
        let fd = |h: f64| ((f(s + h) - f(s - h)) / (2.0 * h), (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h));
        let h = 1e-3 * s.min(1.0 - s);
        let (a1, a2) = fd(h);
        let (b1, b2) = fd(h / 2.0);
        let e1 = (4.0 * b1 - a1) / 3.0;
        let e2 = (4.0 * b2 - a2) / 3.0;
        let scale = d2.abs().max(d1.abs()).max(1.0);
        assert!((e1 - d1).abs() < 1e-7 * scale, "s = {s}");
        assert!((e2 - d2).abs() < 1e-5 * scale, "s = {s}: {e2} vs {d2}");
    }
}

#[test]
fn shared_exponents_are_orthogonal_under_jacobi_measure() {
    // Weight s^{2ζ₁}(1 − s)^{2ν − 1} = ψₘψₙ/(1 − s) up to the polynomials.
    let (z, nu) = (1.0, 1.5);
    let specs: Vec<_> = (0..5).map(|n| WavefunctionSpec::new(n, z, nu).unwrap().normalized(96).unwrap()).collect();
    for m in 0..5 {
        for n in 0..m {
            let v = integrate_unit_interval(
                |s| specs[m].derivatives(s).0 * specs[n].derivatives(s).0 / (1.0 - s),
                200,
            );
            assert!(v.abs() < 1e-10, "{m} {n}: {v}");
        }
    }
}

#[test]
fn quantized_levels_are_orthogonal_under_time_measure() {
    // dt ∝ ds/s, where the operator of the transformed equation is symmetric.
    let d = synthetic();
    let specs: Vec<_> = (0..5)
        .map(|n| WavefunctionSpec::for_level(&solved(&d, n), 96).unwrap())
        .collect();
    for m in 0..5 {
        for n in 0..m {
            let v = integrate_unit_interval(|s| specs[m].derivatives(s).0 * specs[n].derivatives(s).0 / s, 400);
            assert!(v.abs() < 1e-8, "{m} {n}: {v}");
        }
    }
}

proptest! {
    #[test]
    fn jacobi_recurrence_matches_sum(n in 0usize..=10, a in -0.95f64..4.0, b in -0.95f64..4.0, x in -1.0f64..1.0) {
        let want = jacobi_sum(n, a, b, x);
        prop_assert!((jacobi(n, a, b, x).unwrap() - want).abs() <= 1e-9 * want.abs().max(1.0));
    }

    #[test]
    fn synthetic_roots_follow_closed_form(
        a in -20.0f64..-0.5, gap in 1.0f64..60.0, extra in 0.1f64..30.0, n in 0usize..4,
    ) {
        // 2A − C = gap + something positive so level 0 is admitted.
        let c = 2.0 * a - gap;
        let l = c - a - extra;
        let d = DerivedCoefficients::from_dimensionless(-1.0, a, c, l, SolutionDomain::UnitInterval).unwrap();
        let z = unit_interval_zeta1(&d, n);
        match solve_quantization(&d, n).unwrap() {
            Ok(q) => prop_assert!((q.level.zeta1 - z).abs() < 1e-8 * z.max(1.0)),
            Err(_) => prop_assert!(z < 1e-6),
        }
        for v in EigenvalueVariant::ALL {
            let first = momentum_eigenvalue(&d, n, v).unwrap();
            prop_assert_eq!(first, momentum_eigenvalue(&d, n, v).unwrap());
        }
    }
}
