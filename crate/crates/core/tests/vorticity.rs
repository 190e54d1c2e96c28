use fluxlab_core::grids::{Domain, ScalarField};
use fluxlab_core::vorticity::*;
use fluxlab_core::Error;
use fluxlab_oracle::kernel as oracle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

fn shear(d: &Domain) -> CylinderState {
    initial_state(
        d,
        &VorticityPreset::Shear {
            amplitude: 1.0,
            mode: 1,
        },
        &MeanFlowPreset::Zero,
    )
    .unwrap()
}

fn random_state(d: &Domain, seed: u64, amplitude: f64) -> CylinderState {
    let w = VorticityPreset::Random {
        seed,
        amplitude,
        packets: 6,
        max_mode: 3,
        width: 1.0,
    };
    initial_state(d, &w, &MeanFlowPreset::Zero).unwrap()
}

fn run(state: &mut CylinderState, dt: f64, t_end: f64, mut each: impl FnMut(&CylinderState)) {
    let st = CylinderStepper::new(state.domain(), dt).unwrap();
    let n = (t_end / dt).round() as usize;
    each(state);
    for k in 1..=n {
        st.step(state).unwrap();
        state.set_time(k as f64 * dt);
        each(state);
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn shear_mode_decays_at_the_analytic_rate() {
    let d = Domain::cylinder(8.0, 256, 64).unwrap();
    let mut s = shear(&d);
    assert!(max_abs(&advection_term(&s).unwrap().values) < 1e-10);
    let w0 = s.omega.clone();
    run(&mut s, 1e-3, 0.1, |_| {});
    let decay = (-4.0 * PI * PI * 0.1f64).exp();
    let err = s
        .omega
        .values
        .iter()
        .zip(&w0.values)
        .map(|(a, b)| (a - decay * b).abs())
        .fold(0.0, f64::max);
    assert!(err / decay < 1e-6, "relative error {}", err / decay);
    assert!(s.m.max_abs() < 1e-15);
    assert!(max_abs(&advection_term(&s).unwrap().values) < 1e-10);
}

#[test]
fn mean_flow_alone_is_a_heat_flow() {
    let d = Domain::cylinder(8.0, 128, 16).unwrap();
    let m = MeanFlowPreset::Sine {
        amplitude: 0.7,
        mode: 1,
    };
    let mut s = initial_state(&d, &VorticityPreset::Zero, &m).unwrap();
    let m0 = s.m.clone();
    run(&mut s, 0.01, 1.0, |_| {});
    let decay = (-(TAU / 8.0).powi(2)).exp();
    let err =
        s.m.values
            .iter()
            .zip(&m0.values)
            .map(|(a, b)| (a - decay * b).abs())
            .fold(0.0, f64::max);
    assert!(err < 1e-12, "{err}");
    assert_eq!(s.omega.max_abs(), 0.0);
}

#[test]
fn stepper_rejects_bad_input() {
    let plane = Domain::plane(1.0, 8, 1.0, 8, fluxlab_core::grids::Boundary::Periodic).unwrap();
    assert!(matches!(
        CylinderStepper::new(&plane, 0.1),
        Err(Error::Domain(_))
    ));
    let d = Domain::cylinder(8.0, 64, 16).unwrap();
    assert!(CylinderStepper::new(&d, 0.0).is_err());
    let mut s = random_state(&d, 1, 50.0);
    let st = CylinderStepper::new(&d, 0.1).unwrap();
    assert!(matches!(st.step(&mut s), Err(Error::Instability { .. })));
    let wrong_m = ScalarField::zeros(&Domain::cylinder(4.0, 64, 16).unwrap().first_axis_line());
    assert!(CylinderState::new(s.omega.clone(), wrong_m).is_err());
}

#[test]
fn biot_savart_single_mode_and_zero() {
    let d = Domain::cylinder(4.0, 32, 32).unwrap();
    let w = ScalarField::from_fn(&d, |_, y| (TAU * y).sin());
    let bs = biot_savart(&w).unwrap();
    for k in 0..d.len() {
        let y = d.point(k)[1];
        assert!((bs.u_hat.components[0][k] - (TAU * y).cos() / TAU).abs() < 1e-14);
        assert!(bs.u_hat.components[1][k].abs() < 1e-14);
        assert!((bs.v.values[k] + (TAU * y).sin() / (4.0 * PI * PI)).abs() < 1e-14);
    }
    let z = biot_savart(&ScalarField::zeros(&d)).unwrap();
    assert_eq!(z.u_hat.max_norm(), 0.0);
    assert_eq!(z.v.max_abs(), 0.0);
}

#[test]
fn biot_savart_rejects_a_vertical_mean() {
    let d = Domain::cylinder(4.0, 32, 16).unwrap();
    let w = ScalarField::from_fn(&d, |x, y| (TAU * y).sin() + 1e-3 * (-x * x).exp());
    assert!(matches!(biot_savart(&w), Err(Error::Precondition(_))));
    assert!(biot_savart(&oscillating_part(&w)).is_ok());
}

fn random_modes(rng: &mut ChaCha8Rng) -> oracle::GaussianModes {
    let n = rng.gen_range(1..=3);
    oracle::GaussianModes {
        modes: (0..n)
            .map(|_| {
                (
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.7..1.2),
                    rng.gen_range(1..=4),
                    rng.gen_range(0.0..TAU),
                )
            })
            .collect(),
    }
}

#[test]
fn biot_savart_matches_direct_convolution() {
    let d = Domain::cylinder(16.0, 256, 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let g = random_modes(&mut rng);
        let bs = biot_savart(&ScalarField::from_fn(&d, |a, b| g.value(a, b))).unwrap();
        let scale = bs.u_hat.max_norm();
        for _ in 0..2 {
            let k = rng.gen_range(112..144) * 64 + rng.gen_range(0..64);
            let p = d.point(k);
            let o = g.biot_savart(p[0], p[1], 8.0, 1e-9);
            for c in 0..2 {
                let rel = (bs.u_hat.components[c][k] - o[c]).abs() / scale;
                assert!(rel < 1e-4, "component {c} at {p:?}: {rel:.2e}");
            }
            assert!((bs.v.values[k] - o[2]).abs() < 1e-4 * bs.v.max_abs());
        }
    }
}

#[test]
fn biot_savart_is_divergence_free_with_zero_means() {
    let d = Domain::cylinder(16.0, 128, 32).unwrap();
    for seed in 0..5 {
        let s = random_state(&d, seed, 1.0);
        let bs = biot_savart(&oscillating_part(&s.omega)).unwrap();
        let g1 = spectral_gradient(&s.omega.with_values(bs.u_hat.components[0].clone()));
        let g2 = spectral_gradient(&s.omega.with_values(bs.u_hat.components[1].clone()));
        let div: Vec<f64> = (0..d.len())
            .map(|k| g1.components[0][k] + g2.components[1][k])
            .collect();
        assert!(max_abs(&div) < 1e-10);
        for c in &bs.u_hat.components {
            assert!(max_abs(&vertical_mean(&s.omega.with_values(c.clone()))) < 1e-12);
        }
        assert!(max_abs(&vertical_mean(&bs.v)) < 1e-12);
    }
}

#[test]
fn kernel_constants_match_the_oracle() {
    let c = kernel_constants(12.0, 16).unwrap();
    let o = oracle::kernel_norms(12.0, 1e-10);
    assert!((c.norm_grad_k_l1 - o[0]).abs() < 1e-5 * o[0]);
    assert!((c.norm_k_l1 - o[1]).abs() < 1e-5 * o[1]);
    // ∫|K(x₁, 0)| dx₁ = (1/π²)ζ(2)/2
    assert!((c.m0 - 1.0 / 12.0).abs() < 1e-9);
    assert!((o[2] - 1.0 / 12.0).abs() < 1e-9);
    assert_eq!(c.c1, 2.0 * c.norm_grad_k_l1);
    assert_eq!(c.c2, (c.m0 * c.norm_k_l1).sqrt());
    assert_eq!(c.c3, 4.0);
}

#[test]
fn kernel_constants_converge_and_truncate() {
    let a = kernel_constants(10.0, 8).unwrap();
    let b = kernel_constants(20.0, 16).unwrap();
    for (x, y) in [
        (a.norm_grad_k_l1, b.norm_grad_k_l1),
        (a.norm_k_l1, b.norm_k_l1),
        (a.m0, b.m0),
    ] {
        assert!((x - y).abs() < 1e-3 * y);
    }
    assert!(tail_bound(10.0) < 1e-20 * b.norm_k_l1);
    assert!(matches!(kernel_constants(5.0, 16), Err(Error::Domain(_))));
    assert!(kernel_constants(12.0, 2).is_err());
}

#[test]
fn kernel_far_field_and_harmonicity() {
    for x in [2.0, 4.0, 8.0] {
        let far = ((2.0 * (TAU * x).cosh()).ln() / (4.0 * PI) - 0.5 * x).abs();
        assert!(far <= 1.1 * (-TAU * x).exp() / TAU);
        assert!(kernel(x, 0.3).abs() <= 1.1 * (-TAU * x).exp() / TAU);
    }
    let h = 1e-3;
    for (x, y) in [(0.3, 0.2), (-0.7, 0.45), (0.05, 0.3)] {
        let lap = (kernel(x + h, y) + kernel(x - h, y) + kernel(x, y + h) + kernel(x, y - h)
            - 4.0 * kernel(x, y))
            / (h * h);
        assert!(lap.abs() < 1e-4, "{lap}");
    }
    // zero vertical mean away from x₁ = 0
    for x in [0.1, 0.5, 1.5] {
        let n = 256;
        let m: f64 = (0..n).map(|j| kernel(x, j as f64 / n as f64)).sum::<f64>() / n as f64;
        assert!(m.abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_matches_the_oracle_and_is_even(x in -6.0f64..6.0, y in -1.0f64..1.0) {
        prop_assume!(x.abs() + y.rem_euclid(1.0).min(1.0 - y.rem_euclid(1.0)) > 1e-3);
        let k = kernel(x, y);
        prop_assert!((k - oracle::kernel(x, y)).abs() < 1e-12 * k.abs().max(1e-3));
        prop_assert_eq!(k, kernel(-x, y));
        prop_assert!((k - kernel(x, -y)).abs() < 1e-15);
        prop_assert!((k - kernel(x, y + 1.0)).abs() < 1e-12);
        let g = kernel_gradient(x, y);
        let o = oracle::kernel_gradient(x, y);
        for c in 0..2 {
            prop_assert!((g[c] - o[c]).abs() < 1e-10 * o[c].abs().max(1e-3));
        }
    }

    #[test]
    fn velocity_bounds_hold_for_random_fields(seed in any::<u64>(), amp in 0.01f64..5.0) {
        let c = kernel_constants(10.0, 8).unwrap();
        let d = Domain::cylinder(16.0, 128, 32).unwrap();
        let s = random_state(&d, seed, amp);
        let smp = sample(&s).unwrap();
        prop_assert!(smp.u_hat_sup <= c.c1 * smp.omega_sup);
        prop_assert!(smp.v_sup <= c.c2 * smp.omega_hat_l2_sup);
        let p = enstrophy_profile(&s, amp, c.c3).unwrap();
        let scale = p.f.iter().fold(0.0f64, |m, f| m.max(f * f));
        prop_assert!(flux_budget_excess(&p, c.c3) <= 1e-12 * scale.max(1e-300));
        prop_assert!(p.e.iter().chain(&p.d).all(|v| *v >= 0.0));
    }
}

#[test]
fn enstrophy_profile_examples() {
    let d = Domain::cylinder(4.0, 32, 64).unwrap();
    let p = enstrophy_profile(&shear(&d), 1.0, 4.0).unwrap();
    for i in 0..32 {
        assert!((p.e[i] - 0.25).abs() < 1e-14);
        assert!((p.d[i] - 2.0 * PI * PI).abs() < 1e-10);
        assert!(p.f[i].abs() < 1e-14);
    }
    assert_eq!((p.e0, p.beta), (0.5, 3.0));
    let z = enstrophy_profile(
        &CylinderState::at_rest(ScalarField::zeros(&d)).unwrap(),
        0.0,
        4.0,
    )
    .unwrap();
    assert!(z.e.iter().chain(&z.f).chain(&z.d).all(|v| *v == 0.0));
    assert_eq!(e0_beta(2.0, 4.0), (2.0, 24.0));
}

fn balance_residual(dt: f64) -> (f64, f64) {
    let d = Domain::cylinder(16.0, 128, 32).unwrap();
    let mut s = random_state(&d, 3, 2.0);
    let mut profiles = Vec::new();
    run(&mut s, dt, 0.2, |st| {
        profiles.push(enstrophy_profile(st, 2.0, 4.0).unwrap())
    });
    let scale: f64 = profiles
        .iter()
        .map(|p| p.d.iter().sum::<f64>())
        .sum::<f64>()
        * dt
        * 0.125;
    (
        enstrophy_balance_residual(&profiles, -2.0, 2.5).abs(),
        scale,
    )
}

#[test]
fn enstrophy_balance_closes_at_second_order_in_time() {
    // vertical mode 3 decays like e^{−36π²t}; dt must resolve it
    let (r1, scale) = balance_residual(0.002);
    let (r2, _) = balance_residual(0.001);

    assert!(r1 < 5e-2 * scale, "{r1} vs {scale}");
    assert!(r2 < r1 / 3.0, "{r1} -> {r2}");
}

#[test]
fn generic_run_satisfies_every_bound() {
    let c = kernel_constants(10.0, 8).unwrap();
    let d = Domain::cylinder(32.0, 256, 32).unwrap();
    let mut s = random_state(&d, 11, 2.0);
    s.m = MeanFlowPreset::Sine {
        amplitude: 0.3,
        mode: 2,
    }
    .field(&d.first_axis_line());
    let w0 = s.omega.max_abs();
    let m0 = s.m.max_abs();
    let (e0, beta) = e0_beta(w0, c.c3);
    let mut hist = DissipationHistory::new(&[1.0, 2.0, 4.0, 8.0]);
    let mut prev = w0;
    let (mut times, mut msup) = (Vec::new(), Vec::new());
    run(&mut s, 0.01, 3.0, |st| {
        let w = st.omega.max_abs();
        assert!(
            w <= prev * (1.0 + 1e-8),
            "max principle at t = {}: {prev} -> {w}",
            st.time
        );
        prev = w;
        let round = (st.time * 100.0).round() as usize;
        if round % 5 == 0 {
            let smp = sample(st).unwrap();
            assert!(smp.u_hat_sup <= c.c1 * smp.omega_sup);
            assert!(smp.v_sup <= c.c2 * smp.omega_hat_l2_sup);
            let p = enstrophy_profile(st, w0, c.c3).unwrap();
            assert!(flux_budget_excess(&p, c.c3) <= 0.0);
            hist.push(st, &p).unwrap();
            times.push(st.time);
            msup.push(smp.m_sup);
        }
    });
    let reports = omconv1_reports(&hist, e0, beta, 1e-9);
    assert!(!reports.is_empty() && reports.iter().all(|r| r.passed));
    let checks = mean_flow_bound_check(&times, &msup, m0, c.c1, w0);
    assert!(checks.iter().all(|c| c.passed));
}

#[test]
fn mean_flow_bound_trivial_cases() {
    let z = mean_flow_bound_check(&[0.0, 1.0], &[0.0, 0.0], 0.0, 0.74, 0.0);
    assert!(z.iter().all(|c| c.passed && c.bound == 0.0));
    let s = mean_flow_bound_check(&[0.0, 1.0], &[0.0, 0.0], 0.0, 0.74, 1.0);
    assert!(s[1].passed && s[1].bound > 0.0);
    let bad = mean_flow_bound_check(&[0.0, 1.0], &[0.0, 5.0], 0.0, 0.74, 1.0);
    assert!(!bad[1].passed);
}

fn history(times: &[f64], nx: usize, f: impl Fn(f64, f64) -> (f64, f64)) -> DecayHistory {
    let x1: Vec<f64> = (0..nx)
        .map(|i| -8.0 + (i as f64 + 0.5) * 16.0 / nx as f64)
        .collect();
    let (d, s) = times
        .iter()
        .map(|&t| x1.iter().map(|&x| f(t, x)).unzip())
        .unzip();
    DecayHistory {
        times: times.to_vec(),
        x1,
        dissipation: d,
        column_sup: s,
    }
}

#[test]
fn decay_measure_examples() {
    let times: Vec<f64> = (0..=400).map(|k| k as f64 * 0.25).collect();
    let zero = history(&times, 64, |_, _| (0.0, 0.0));
    let r = decay_measure(&zero, 0.25, 0.0, 1.0, 1.0, 100.0, 0.0, 0.0).unwrap();
    assert_eq!((r.j_measure, r.excursion_measure, r.k0), (0.0, 0.0, 0.0));

    // shear decay: sup|ω| = e^{−4π²t}, d = 2π²e^{−8π²t}
    let sh = history(&times, 64, |t, _| {
        (
            2.0 * PI * PI * (-8.0 * PI * PI * t).exp(),
            (-4.0 * PI * PI * t).exp(),
        )
    });
    let r = decay_measure(&sh, 0.25, 0.0, 1.0, 1.0, 100.0, 0.5, 3.0).unwrap();
    assert!(r.excursion_measure <= r.k0 * 100f64.powf(0.75) * (1.0 + 1e-9));
    assert!(r.excursion_measure > 0.0 && r.excursion_measure < 0.25);
    assert!(r.j_measure <= r.j_bound);
    assert_eq!(r.c4, 2.0 * (1.5f64).sqrt() + 1.0);

    // constant column sup c: K₀ = min(T/cap, c/scale) up to bisection accuracy
    let c = 0.3;
    let flat = history(&times, 64, |_, _| (0.0, c));
    let r = decay_measure(&flat, 0.5, 0.25, 1.0, 1.0, 100.0, 0.5, 3.0).unwrap();
    let scale = 100f64.powf(-0.25 / 3.0);
    let expect = (100.0 / 100f64.powf(1.0)).min(c / scale);
    assert!((r.k0 - expect).abs() < 1e-9, "{} vs {expect}", r.k0);

    assert!(decay_measure(&zero, 0.6, 0.0, 1.0, 1.0, 10.0, 0.0, 0.0).is_err());
    assert!(decay_measure(&zero, 0.2, 0.3, 1.0, 1.0, 10.0, 0.0, 0.0).is_err());
    assert!(decay_measure(&zero, 0.2, 0.1, 1.0, 1.0, 200.0, 0.0, 0.0).is_err());
}

#[test]
fn exponent_and_m1_helpers() {
    let t: Vec<f64> = (0..50).map(|k| k as f64).collect();
    let m: Vec<f64> = t.iter().map(|s| 2.0 * (1.0 + s).powf(0.3)).collect();
    assert!((certified_mean_flow_exponent(&t, &m, 2.0).unwrap() - 0.3).abs() < 1e-12);
    assert_eq!(certified_mean_flow_exponent(&t, &m, 100.0), Some(0.0));
    let fast: Vec<f64> = t.iter().map(|s| (1.0 + s).powf(0.7)).collect();
    assert_eq!(certified_mean_flow_exponent(&t, &fast, 1.0), None);
    assert_eq!(
        measured_m1(&[0.0, 0.5, 1.0, 2.0], &[100.0, 9.0, 4.0, 1.0], 1.0),
        Some(2.0)
    );
}

#[test]
fn interpolation_examples() {
    let c = 1.7;
    let g = vec![c; 101];
    let r = sup_bound_mean_gradient(&g, 2.0, 0.0, c * 2.0).unwrap();
    assert!((r.bound - c).abs() < 1e-15 && r.observed_sup == c);
    let x: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let r = sup_bound_mean_gradient(&x, 1.0, 1.0, 0.5).unwrap();
    assert_eq!((r.bound, r.observed_sup), (1.5, 1.0));
    let r = sup_bound_l2_lipschitz(&g, 2.0, c * c * 2.0, 0.0).unwrap();
    assert!((r.bound - 3f64.sqrt() * c).abs() < 1e-14);
    let r = sup_bound_l2_lipschitz(&[0.0; 10], 1.0, 0.0, 0.0).unwrap();
    assert_eq!(r.bound, 0.0);
    assert!(matches!(
        sup_bound_mean_gradient(&x, 1.0, 0.5, 0.5),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        sup_bound_l2_lipschitz(&x, 1.0, 1.0, 0.5),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn interpolation_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let p = TrigPoly::random(&mut rng, 8);
        let s = p.samples(513);
        let (eps, m) = p.mean_gradient_data();
        let r = sup_bound_mean_gradient(&s, p.length, eps, m).unwrap();
        assert!(r.bound >= r.observed_sup, "{p:?}");
        let (eps, m) = p.l2_lipschitz_data();
        let r = sup_bound_l2_lipschitz(&s, p.length, eps, m).unwrap();
        assert!(r.bound >= r.observed_sup, "{p:?}");
    }
}
