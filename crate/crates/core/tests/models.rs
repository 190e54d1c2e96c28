use fluxlab_core::diagnostics::FluxRecorder;
use fluxlab_core::grids::*;
use fluxlab_core::models::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn rd(potential: Potential) -> Model {
    Model::ReactionDiffusion { potential }
}

fn advance(state: &mut ModelState, dt: f64, t_end: f64) {
    let st = Stepper::new(state, dt).unwrap();
    let n = (t_end / dt).round() as usize;
    for k in 1..=n {
        st.step(state).unwrap();
        state.set_time(k as f64 * dt);
    }
}

#[test]
fn heat_eigenmode_decays_at_the_continuum_rate() {
    let d = Domain::line(1.0, 256, Boundary::Periodic).unwrap();
    let mut s = Preset::Eigenmode {
        modes: vec![1],
        amplitude: 1.0,
    }
    .state(&rd(Potential::Flat), &d)
    .unwrap();
    let u0 = s.u().clone();
    let t = 0.02;
    advance(&mut s, 1e-3, t);
    let decay = (-4.0 * PI * PI * t).exp();
    let err = s
        .u()
        .values
        .iter()
        .zip(&u0.values)
        .map(|(a, b)| (a - decay * b).abs())
        .fold(0.0, f64::max);
    // second-order stencil: |λ_h − λ| t ≈ (2π)⁴ h² t / 12
    let h = 1.0 / 256.0;
    assert!(
        err < 2.0 * (2.0 * PI).powi(4) * h * h * t / 12.0,
        "err = {err}"
    );
}

#[test]
fn neumann_eigenmode_is_an_exact_discrete_eigenvector() {
    let d = Domain::plane(3.0, 24, 2.0, 16, Boundary::Neumann).unwrap();
    let mut s = Preset::Eigenmode {
        modes: vec![2, 1],
        amplitude: 0.5,
    }
    .state(&rd(Potential::Flat), &d)
    .unwrap();
    let u0 = s.u().clone();
    advance(&mut s, 0.01, 0.1);
    let lam = |n: usize, m: f64, l: f64| {
        -4.0 * (n as f64 / l).powi(2) * (PI * m / (2.0 * n as f64)).sin().powi(2)
    };
    let g = ((lam(24, 2.0, 3.0) + lam(16, 1.0, 2.0)) * 0.1).exp();
    for (a, b) in s.u().values.iter().zip(&u0.values) {
        assert!((a - g * b).abs() < 1e-12);
    }
}

#[test]
fn uniform_minima_are_fixed_points() {
    let d = Domain::plane(8.0, 16, 8.0, 16, Boundary::Periodic).unwrap();
    let models = [
        rd(Potential::DoubleWell),
        Model::DampedWave {
            alpha: 1.5,
            potential: Potential::DoubleWell,
        },
        Model::GinzburgLandau { alpha: 0.8 },
        rd(Potential::QuadraticTail { m: 3.0 }),
    ];
    for m in models {
        let mut s = Preset::Constant { value: 1.0 }.state(&m, &d).unwrap();
        advance(&mut s, 0.05, 5.0);
        for (i, f) in s.fields.iter().enumerate() {
            let target = if i == 0 { 1.0 } else { 0.0 };
            let dev = f
                .values
                .iter()
                .map(|v| (v - target).abs())
                .fold(0.0, f64::max);
            assert!(dev < 1e-10 * 5.0, "{m:?}: {dev}");
        }
        assert!(is_near_equilibrium(&s, 1e-20, 3.0).unwrap());
    }
}

#[test]
fn nonlinear_diffusion_with_unit_diffusivity_is_the_heat_flow() {
    let d = Domain::line(20.0, 200, Boundary::Neumann).unwrap();
    let p = Preset::RandomSmooth {
        seed: 11,
        amplitude: 1.0,
        correlation_length: 1.5,
        background: 0.2,
        envelope_radius: None,
    };
    let mut a = p.state(&rd(Potential::Flat), &d).unwrap();
    let mut b = p
        .state(
            &Model::NonlinearDiffusion {
                diffusivity: Diffusivity { a0: 1.0, a2: 0.0 },
            },
            &d,
        )
        .unwrap();
    advance(&mut a, 0.01, 2.0);
    advance(&mut b, 0.01, 2.0);
    let dev = a
        .u()
        .values
        .iter()
        .zip(&b.u().values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(dev < 1e-10, "{dev}");
}

#[test]
fn kink_is_steady() {
    let d = Domain::line(40.0, 800, Boundary::Neumann).unwrap();
    let s = Preset::Kink {
        center: 0.0,
        anti: false,
    }
    .state(&rd(Potential::DoubleWell), &d)
    .unwrap();
    let t = rd_energy_triple(&s).unwrap();
    let h = 0.05f64;
    // u_t = Δ_h ψ − V′(ψ) = O(h²)
    assert!(t.d.max() < (0.5f64 * h * h).powi(2), "{}", t.d.max());
    // e(0) = ½ψ′(0)² + V(0) = ¼ + ¼
    // e = ½ψ′² + V(ψ) = ½ sech⁴(x/√2)
    let i = 400;
    let x = d.axes[0].coord(i);
    assert!(x.abs() <= h);
    let sech2 = 1.0 - (x / 2f64.sqrt()).tanh().powi(2);
    assert!((t.e.values[i] - 0.5 * sech2 * sech2).abs() < 2e-3);
    assert!((t.e.values[i] - 0.5).abs() < 2e-3);
    assert!(is_near_equilibrium(&s, 1e-6, 10.0).unwrap());
}

#[test]
fn kink_pair_is_not_near_equilibrium() {
    let d = Domain::line(40.0, 400, Boundary::Neumann).unwrap();
    let s = Preset::KinkPair { a: 1.5 }
        .state(&rd(Potential::DoubleWell), &d)
        .unwrap();
    let lam = ball_integral(&rd_energy_triple(&s).unwrap().d, 5.0, [0.0, 0.0]).unwrap();
    assert!(lam > 1e-3);
    assert!(!is_near_equilibrium(&s, lam / 2.0, 5.0).unwrap());
    assert!(is_near_equilibrium(&s, lam * 2.0, 5.0).unwrap());
}

#[test]
fn triple_special_cases() {
    let d = Domain::line(4.0, 32, Boundary::Periodic).unwrap();
    // u ≡ 0 under the double well: e = ¼, f = d = 0
    let s = Preset::Constant { value: 0.0 }
        .state(&rd(Potential::DoubleWell), &d)
        .unwrap();
    let t = rd_energy_triple(&s).unwrap();
    assert!(t.e.values.iter().all(|v| (v - 0.25).abs() < 1e-15));
    assert_eq!(t.f.max_norm(), 0.0);
    assert_eq!(t.d.max(), 0.0);
    // damped wave at a zero of V with u_t ≡ 0
    let s = Preset::Constant { value: -1.0 }
        .state(
            &Model::DampedWave {
                alpha: 2.0,
                potential: Potential::DoubleWell,
            },
            &d,
        )
        .unwrap();
    let t = dw_energy_triple(&s).unwrap();
    assert_eq!(
        (t.e.max_abs(), t.f.max_norm(), t.d.max_abs()),
        (0.0, 0.0, 0.0)
    );
    // v ≡ 1
    let s = Preset::Constant { value: 1.0 }
        .state(&Model::GinzburgLandau { alpha: 3.0 }, &d)
        .unwrap();
    let t = cgl_energy_triple(&s).unwrap();
    assert_eq!(
        (t.e.max_abs(), t.f.max_norm(), t.d.max_abs()),
        (0.0, 0.0, 0.0)
    );
    // u ≡ c for nonlinear diffusion
    let s = Preset::Constant { value: 0.7 }
        .state(
            &Model::NonlinearDiffusion {
                diffusivity: Diffusivity { a0: 1.0, a2: 1.0 },
            },
            &d,
        )
        .unwrap();
    let t = nld_energy_triple(&s).unwrap();
    assert!(t.e.values.iter().all(|v| (v - 0.245).abs() < 1e-15));
    assert_eq!((t.f.max_norm(), t.d.max_abs()), (0.0, 0.0));
    // a ≡ 1 budget is 2e
    let s = Preset::Constant { value: 0.7 }
        .state(
            &Model::NonlinearDiffusion {
                diffusivity: Diffusivity { a0: 1.0, a2: 0.0 },
            },
            &d,
        )
        .unwrap();
    let t = nld_energy_triple(&s).unwrap();
    for e in [0.0, 0.1, 0.245] {
        assert!((t.budget.eval(e) - 2.0 * e).abs() < 1e-15);
    }
}

#[test]
fn damped_wave_without_viscosity_has_the_gradient_flow_shapes() {
    let d = Domain::line(10.0, 64, Boundary::Neumann).unwrap();
    let p = Preset::RandomSmooth {
        seed: 5,
        amplitude: 0.8,
        correlation_length: 1.0,
        background: 0.0,
        envelope_radius: None,
    };
    let u = p.field(&d).unwrap();
    let w = Preset::RandomSmooth {
        seed: 6,
        amplitude: 0.8,
        correlation_length: 1.0,
        background: 0.0,
        envelope_radius: None,
    }
    .field(&d)
    .unwrap();
    let s = ModelState::new(
        Model::DampedWave {
            alpha: 0.0,
            potential: Potential::DoubleWell,
        },
        vec![u.clone(), w.clone()],
    )
    .unwrap();
    let t = dw_energy_triple(&s).unwrap();
    let g = gradient(&u);
    for k in 0..d.len() {
        assert!((t.f.components[0][k] - w.values[k] * g.components[0][k]).abs() < 1e-14);
        assert!((t.d.values[k] - w.values[k].powi(2)).abs() < 1e-14);
    }
}

#[test]
fn diffusivity_must_stay_positive() {
    let d = Domain::line(10.0, 64, Boundary::Neumann).unwrap();
    let m = Model::NonlinearDiffusion {
        diffusivity: Diffusivity { a0: 1.0, a2: -1.0 },
    };
    let s = Preset::Constant { value: 2.0 }.state(&m, &d).unwrap();
    assert!(matches!(
        nld_energy_triple(&s),
        Err(fluxlab_core::Error::Precondition(_))
    ));
    assert!(Stepper::new(&s, 0.01).is_err());
}

#[test]
fn blow_up_is_reported() {
    let d = Domain::line(10.0, 64, Boundary::Periodic).unwrap();
    let s = Preset::Constant { value: 1.0 }
        .state(&rd(Potential::DoubleWell), &d)
        .unwrap();
    let mut st = Stepper::new(&s, 0.1).unwrap();
    st.amplitude_ceiling = 0.5;
    let mut s2 = s.clone();
    assert!(matches!(
        st.step(&mut s2),
        Err(fluxlab_core::Error::Instability { .. })
    ));
}

fn random_state(model: &Model, seed: u64, amplitude: f64, plane: bool) -> ModelState {
    let d = if plane {
        Domain::plane(12.0, 24, 12.0, 24, Boundary::Neumann).unwrap()
    } else {
        Domain::line(12.0, 48, Boundary::Periodic).unwrap()
    };
    let p = |s: u64| Preset::RandomSmooth {
        seed: s,
        amplitude,
        correlation_length: 1.5,
        background: 0.0,
        envelope_radius: None,
    };
    match model {
        Model::DampedWave { .. } => ModelState::new(
            model.clone(),
            vec![
                p(seed).field(&d).unwrap(),
                p(seed ^ 0xabc).field(&d).unwrap(),
            ],
        )
        .unwrap(),
        _ => p(seed).state(model, &d).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn a2_holds_pointwise(seed in any::<u64>(), amp in 0.05f64..2.0, alpha in 0.0f64..3.0, plane in any::<bool>()) {
        let models = [
            rd(Potential::DoubleWell),
            Model::DampedWave { alpha, potential: Potential::QuadraticTail { m: 2.0 } },
            Model::GinzburgLandau { alpha },
            Model::NonlinearDiffusion { diffusivity: Diffusivity { a0: 1.0, a2: 1.0 } },
        ];
        for m in &models {
            let s = random_state(m, seed, amp, plane);
            let t = energy_triple(&s).unwrap();
            let rep = t.check_a2(1e-9, 0.0);
            prop_assert!(rep.holds(), "{:?}: {:?}", m.id(), rep);
        }
    }

    #[test]
    fn maximum_principle(seed in any::<u64>(), amp in 0.1f64..2.5) {
        for m in [rd(Potential::DoubleWell), Model::NonlinearDiffusion { diffusivity: Diffusivity { a0: 1.0, a2: 1.0 } }] {
            let mut s = random_state(&m, seed, amp, false);
            let bound = s.u().max_abs().max(1.0);
            let dt = s.max_stable_dt().min(0.05);
            let st = Stepper::new(&s, dt).unwrap();
            for _ in 0..40 {
                st.step(&mut s).unwrap();
                prop_assert!(s.u().max_abs() <= bound * (1.0 + 1e-12));
            }
        }
    }
}

/// Worst balance residual per unit (R^N + R^{N−1})·T over a short run.
fn balance_residual(model: &Model, n: usize, plane: bool) -> f64 {
    let l = 16.0;
    let d = if plane {
        Domain::plane(l, n, l, n, Boundary::Neumann).unwrap()
    } else {
        Domain::line(l, n, Boundary::Neumann).unwrap()
    };
    let dx = l / n as f64;
    let p = Preset::RandomSmooth {
        seed: 3,
        amplitude: 0.6,
        correlation_length: 2.0,
        background: 0.0,
        envelope_radius: Some(3.0),
    };
    let mut s = p.state(model, &d).unwrap();
    let dt = if matches!(model, Model::NonlinearDiffusion { .. }) {
        0.1 * dx * dx
    } else {
        0.1 * dx
    };
    let st = Stepper::new(&s, dt).unwrap();
    let mut rec = FluxRecorder::new(&d, &[1.0, 2.0, 4.0], false).unwrap();
    rec.record(0.0, &energy_triple(&s).unwrap()).unwrap();
    let steps = (0.5 / dt).round() as usize;
    for k in 1..=steps {
        st.step(&mut s).unwrap();
        s.set_time(k as f64 * dt);
        rec.record(s.time, &energy_triple(&s).unwrap()).unwrap();
    }
    rec.series(d.radial_dim()).unwrap().worst_scaled_residual()
}

#[test]
fn energy_balance_converges_at_second_order() {
    let models = [
        rd(Potential::DoubleWell),
        Model::DampedWave {
            alpha: 0.5,
            potential: Potential::DoubleWell,
        },
        Model::GinzburgLandau { alpha: 0.7 },
        Model::NonlinearDiffusion {
            diffusivity: Diffusivity { a0: 1.0, a2: 1.0 },
        },
    ];
    for m in &models {
        for plane in [false, true] {
            let coarse = balance_residual(m, 64, plane);
            let fine = balance_residual(m, 128, plane);
            let order = (coarse / fine).log2();
            assert!(
                order >= 1.8,
                "{:?} plane={plane}: {coarse:.3e} -> {fine:.3e}, order {order:.2}",
                m.id()
            );
        }
    }
}
