use fluxlab_core::diagnostics::*;
use fluxlab_core::grids::*;
use fluxlab_core::models::*;
use fluxlab_core::specfun::h_n;
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn flux_bound_examples() {
    // per point √(βTe₀), segment twice that
    assert!((pointwise_flux_bound(4.0, 1.0, 1.0) - 2.0).abs() < 1e-15);
    assert!((flux_bound(1, 3.0, 4.0, 1.0, 1.0).unwrap() - 4.0).abs() < 1e-15);
    assert!((flux_bound(3, 1.0, 1.0, 1.0, 1.0).unwrap() - 8.0 * PI).abs() < 1e-12);
    let f = flux_bound(2, 1.0, 1e4, 1.0, 1.0).unwrap() / (2.0 * PI);
    let asym = 2e4 / 1e4f64.ln();
    assert!((f / asym - 1.0).abs() < 0.15, "{f} vs {asym}");
}

#[test]
fn flux_bound_large_time_in_three_dimensions() {
    // √(βTe₀) h₃(R√(e₀/βT)) ~ βT/R
    let (r, t) = (2.0, 1e8);
    let per_area = flux_bound(3, r, t, 1.0, 1.0).unwrap() / (4.0 * PI * r * r);
    assert!((per_area * r / t - 1.0).abs() < 1e-3);
}

#[test]
fn flux_bound_zero_energy_limit() {
    for n in [1u32, 3, 4] {
        let exact = flux_bound(n, 1.5, 3.0, 0.0, 2.0).unwrap();
        let near = flux_bound(n, 1.5, 3.0, 1e-14, 2.0).unwrap();
        assert!(
            (exact - near).abs() <= 1e-5 * exact.max(1.0),
            "N={n}: {exact} vs {near}"
        );
    }
    // N = 2 tends to zero only like 1/log(1/e₀)
    assert_eq!(flux_bound(2, 1.5, 3.0, 0.0, 2.0).unwrap(), 0.0);
    let mut prev = f64::INFINITY;
    for k in 1..=12 {
        let v = flux_bound(2, 1.5, 3.0, 10f64.powi(-4 * k), 2.0).unwrap();
        assert!(v < prev);
        prev = v;
    }
    let asym = 2.0 * PI * 2.0 * 6.0 / (6.0f64 / (1e-48 * 2.25)).ln();
    assert!((prev / asym - 1.0).abs() < 0.05, "{prev} vs {asym}");
    assert_eq!(flux_bound(2, 1.0, 1.0, 1.0, 0.0).unwrap(), 0.0);
}

#[test]
fn dissipation_bound_adds_the_ball_energy() {
    let n = 2;
    let fb = flux_bound(n, 3.0, 5.0, 0.4, 1.1).unwrap();
    let db = dissipation_bound(n, 3.0, 5.0, 0.4, 1.1).unwrap();
    assert!((db - fb - PI * 9.0 * 0.4).abs() < 1e-12);
}

proptest! {
    #[test]
    fn flux_bound_is_monotone(n in 1u32..=4, r in 0.1f64..30.0, t in 0.01f64..1e4, e0 in 0.01f64..5.0, beta in 0.01f64..5.0, k in 1.0f64..3.0) {
        let base = flux_bound(n, r, t, e0, beta).unwrap();
        let tol = 1e-12 * base;
        prop_assert!(flux_bound(n, r, k * t, e0, beta).unwrap() >= base - tol);
        prop_assert!(flux_bound(n, r, t, k * e0, beta).unwrap() >= base - tol);
        prop_assert!(flux_bound(n, r, t, e0, k * beta).unwrap() >= base - tol);
    }
}

#[test]
fn flux_bound_is_monotone_on_a_grid() {
    for n in 1..=4u32 {
        for &r in &[0.5, 1.0, 5.0, 20.0] {
            let mut prev = 0.0;
            for k in 0..60 {
                let t = 1e-2 * 1.3f64.powi(k);
                let v = flux_bound(n, r, t, 0.5, 1.0).unwrap();
                assert!(v >= prev * (1.0 - 1e-13), "N={n} R={r} T={t}");
                prev = v;
            }
        }
    }
}

#[test]
fn flux_bound_in_terms_of_h() {
    let (n, r, t, e0, b) = (4u32, 2.5f64, 7.0f64, 0.3f64, 1.7f64);
    let s = (b * t * e0).sqrt();
    let expected = 2.0 * PI * PI * r.powi(3) * s * h_n(n, r * (e0 / (b * t)).sqrt()).unwrap();
    assert!((flux_bound(n, r, t, e0, b).unwrap() - expected).abs() < 1e-12 * expected);
}

#[test]
fn time_integrals() {
    let t = [0.0, 0.5, 1.0, 2.0];
    assert_eq!(integrated_flux(&t, &[0.0; 4]), 0.0);
    assert!((integrated_flux(&t, &[3.0; 4]) - 6.0).abs() < 1e-15);
    assert!((dissipation_integral(&t, &[0.0, 1.0, 2.0, 4.0]) - 4.0).abs() < 1e-15);
}

#[test]
fn stationary_gradient_flux_integrates_linearly() {
    let d = Domain::plane(20.0, 200, 20.0, 200, Boundary::Neumann).unwrap();
    let phi = ScalarField::from_fn(&d, |x, y| (-(x * x + y * y) / 4.0).exp());
    let g = gradient(&phi);
    let rate = sphere_flux(&g, 3.0).unwrap();
    let triple = EnergyTriple {
        e: phi.clone(),
        f: g,
        d: ScalarField::zeros(&d),
        budget: Budget::Linear { factor: 2.0 },
    };
    let mut rec = FluxRecorder::new(&d, &[3.0], false).unwrap();
    for k in 0..=8 {
        rec.record(0.25 * k as f64, &triple).unwrap();
    }
    let s = rec.series(2).unwrap();
    assert!((s.flux[8][0] - 2.0 * rate).abs() < 1e-12 * rate.abs());
    // outward-decaying bump: ∮∇φ·ν = 2πR φ′(R) < 0
    let exact = 2.0 * PI * 3.0 * (-1.5) * (-9.0f64 / 4.0).exp();
    assert!((rate / exact - 1.0).abs() < 1e-2, "{rate} vs {exact}");
}

fn heat_run(record_every: usize) -> FluxSeries {
    let d = Domain::line(60.0, 600, Boundary::Neumann).unwrap();
    let u0 = ScalarField::from_fn(&d, |x, _| (-x * x / 2.0).exp());
    let mut s = ModelState::from_primary(
        Model::ReactionDiffusion {
            potential: Potential::Flat,
        },
        u0,
    )
    .unwrap();
    let dt = 0.005;
    let st = Stepper::new(&s, dt).unwrap();
    let mut rec = FluxRecorder::new(&d, &[1.0, 2.0, 4.0], false).unwrap();
    rec.record(0.0, &energy_triple(&s).unwrap()).unwrap();
    for k in 1..=400 {
        st.step(&mut s).unwrap();
        if k % record_every == 0 {
            rec.record(k as f64 * dt, &energy_triple(&s).unwrap())
                .unwrap();
        }
    }
    rec.series(1).unwrap()
}

#[test]
fn heat_flux_is_resolved_in_time() {
    let dense = heat_run(1);
    let sparse = heat_run(2);
    let (a, b) = (dense.flux.last().unwrap(), sparse.flux.last().unwrap());
    for r in 0..3 {
        // Richardson-extrapolated trapezoid as the dense-time reference
        let oracle = (4.0 * a[r] - b[r]) / 3.0;
        assert!(
            ((a[r] - oracle) / oracle).abs() < 1e-4,
            "R index {r}: {} vs {oracle}",
            a[r]
        );
        assert!(((a[r] - b[r]) / a[r]).abs() < 1e-3);
    }
    // D is nondecreasing in R and T
    for it in 1..dense.times.len() {
        for ir in 0..3 {
            assert!(dense.dissipation[it][ir] >= dense.dissipation[it - 1][ir]);
            if ir > 0 {
                assert!(dense.dissipation[it][ir] >= dense.dissipation[it][ir - 1]);
            }
        }
    }
}

#[test]
fn heat_mode_dissipation_matches_closed_form() {
    // u = e^{λt} sin(2πx) on one period: ∫₀^T∫ u_t² = λ²/2 · (e^{2λT} − 1)/(2λ)
    let n = 256;
    let d = Domain::line(2.0, n, Boundary::Periodic).unwrap();
    let mut s = Preset::Eigenmode {
        modes: vec![2],
        amplitude: 1.0,
    }
    .state(
        &Model::ReactionDiffusion {
            potential: Potential::Flat,
        },
        &d,
    )
    .unwrap();
    let dt = 1e-4;
    let st = Stepper::new(&s, dt).unwrap();
    let mut rec = FluxRecorder::new(&d, &[0.5], false).unwrap();
    rec.record(0.0, &energy_triple(&s).unwrap()).unwrap();
    for k in 1..=500 {
        st.step(&mut s).unwrap();
        rec.record(k as f64 * dt, &energy_triple(&s).unwrap())
            .unwrap();
    }
    let lam = -4.0 * PI * PI;
    let t = 0.05;
    let exact = lam * lam / 2.0 * ((2.0 * lam * t).exp() - 1.0) / (2.0 * lam);
    let got = rec.series(1).unwrap().dissipation.last().unwrap()[0];
    assert!((got / exact - 1.0).abs() < 1e-3, "{got} vs {exact}");
}

#[test]
fn zero_trajectory_passes_every_bound_with_full_margin() {
    let times: Vec<f64> = (0..=30).map(|k| k as f64).collect();
    let nr = 3;
    for dim in 1..=3u32 {
        let series = FluxSeries {
            dim,
            radii: vec![1.0, 2.0, 4.0],
            times: times.clone(),
            flux: vec![vec![0.0; nr]; times.len()],
            dissipation: vec![vec![0.0; nr]; times.len()],
            energy: vec![vec![0.0; nr]; times.len()],
            e0: 0.0,
            beta: 0.0,
            pointwise_max: (dim == 1).then(|| vec![0.0; times.len()]),
        };
        let reports = check_dissipation_bounds(&series, &BoundOptions::default()).unwrap();
        assert!(!reports.is_empty());
        for r in &reports {
            assert!(r.passed);
            assert_eq!(r.margin, r.rhs);
        }
        assert!(reports.iter().any(|r| r.context.asymptotic));
    }
}

#[test]
fn bound_report_margin_convention() {
    let ctx = BoundContext {
        n: 1,
        r: 1.0,
        t: 1.0,
        slack: 1.0,
        asymptotic: false,
    };
    let r = BoundReport::new(BoundKind::FNbd, 2.0, 1.0, 1e-9, ctx.clone());
    assert_eq!(r.margin, -1.0);
    assert!(!r.passed);
    assert!(BoundReport::new(BoundKind::FNbd, 1.0 + 1e-10, 1.0, 1e-9, ctx).passed);
    assert_eq!(
        serde_json::to_string(&BoundKind::Cor43Gamma).unwrap(),
        "\"cor43_gamma\""
    );
    assert_eq!(BoundKind::TimeN.as_str(), "timeN");
}

#[test]
fn contamination_rule() {
    let d = Domain::line(400.0, 4000, Boundary::Neumann).unwrap();
    assert!((admissible_radius(&d, 100.0, DEFAULT_PAD) - 180.0).abs() < 1e-12);
    assert!(check_ladder(&d, &[10.0, 100.0, 180.0], 100.0, DEFAULT_PAD).is_ok());
    let err = check_ladder(&d, &[10.0, 100.0, 200.0], 100.0, DEFAULT_PAD).unwrap_err();
    assert!(matches!(err, fluxlab_core::Error::Geometry(_)));
    assert!(err.to_string().contains("contamination"));
    assert!(check_ladder(&d, &[10.0, 5.0], 1.0, DEFAULT_PAD).is_err());
}

fn energy_field(d: &Domain, f: impl Fn(f64) -> f64, t: f64) -> ScalarField {
    ScalarField::new(d.clone(), ScalarField::from_fn(d, |x, _| f(x)).values, t).unwrap()
}

#[test]
fn jt_for_decay_and_equilibrium() {
    let d = Domain::line(100.0, 1000, Boundary::Neumann).unwrap();
    let radii: Vec<f64> = (1..=40).map(|k| k as f64).collect();
    let e0 = energy_field(&d, |x| 1.0 + (-x * x).exp(), 0.0);
    let decayed = energy_field(&d, |x| 1.0 + 0.5 * (-x * x).exp(), 5.0);
    let rec = jt_sparsity(&e0, &decayed, &radii, DEFAULT_TOL_E).unwrap();
    assert!(rec.in_jt.iter().all(|b| !b));
    assert_eq!(rec.sparsity_integral, 0.0);
    assert_eq!(rec.t, 5.0);

    let same = energy_field(&d, |x| 1.0 + (-x * x).exp(), 5.0);
    let rec = jt_sparsity(&e0, &same, &radii, DEFAULT_TOL_E).unwrap();
    assert!(rec.in_jt.iter().all(|b| *b));
    assert!((rec.sparsity_integral - 39.0).abs() < 1e-12);
}

#[test]
fn sparsity_integral_in_the_plane() {
    let radii: Vec<f64> = (0..=100).map(|k| 1.0 + k as f64 * 0.1).collect();
    let all = vec![true; radii.len()];
    let v = sparsity_integral(&radii, &all, 2, 11.0);
    assert!((v - 11f64.ln()).abs() < 1e-3);
    // segments reaching outside [1, R_max] are dropped
    assert!(sparsity_integral(&radii, &all, 2, 5.0) < v);
    let mut some = all.clone();
    some.iter_mut().skip(50).for_each(|b| *b = false);
    let part = sparsity_integral(&radii, &some, 2, 11.0);
    assert!(part < v && part > 0.0);
    // nondecreasing in R_max
    let mut prev = 0.0;
    for k in 1..=10 {
        let s = sparsity_integral(&radii, &some, 2, 1.0 + k as f64);
        assert!(s >= prev);
        prev = s;
    }
}

#[test]
fn occupancy_trivial_cases() {
    let d = Domain::line(50.0, 500, Boundary::Neumann).unwrap();
    let m = Model::ReactionDiffusion {
        potential: Potential::DoubleWell,
    };
    let a = Preset::KinkPair { a: 5.0 }.state(&m, &d).unwrap();
    assert_eq!(
        state_distance(&a, &a, Metric::SupOnBall, DEFAULT_OBSERVATION_RADIUS).unwrap(),
        0.0
    );
    let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.5).collect();
    let rec = occupancy(
        &times,
        &vec![0.0; times.len()],
        0.1,
        Metric::SupOnBall,
        20.0,
        1,
    )
    .unwrap();
    assert_eq!(rec.occupied_time, 50.0);
    assert!((rec.weighted - 50f64.sqrt()).abs() < 1e-12);
    let rec = occupancy(
        &times,
        &vec![0.2; times.len()],
        0.1,
        Metric::L2OnBall,
        20.0,
        2,
    )
    .unwrap();
    assert_eq!(rec.occupied_time, 0.0);
    assert!(occupancy(
        &times,
        &vec![0.0; times.len()],
        0.0,
        Metric::SupOnBall,
        20.0,
        1
    )
    .is_err());
}

#[test]
fn occupancy_interpolates_crossings() {
    // distance 0 → 2 linearly over [0, 1]: below 1 for half the time
    assert!((occupied_time(&[0.0, 1.0], &[0.0, 2.0], 1.0) - 0.5).abs() < 1e-15);
    assert!((occupied_time(&[0.0, 1.0, 3.0], &[2.0, 0.0, 0.0], 1.0) - 2.5).abs() < 1e-15);
    assert_eq!(psi(2, std::f64::consts::E), 1.0);
    assert_eq!(psi(1, 9.0), 3.0);
}

proptest! {
    #[test]
    fn occupied_time_never_exceeds_the_horizon(ds in proptest::collection::vec(0.0f64..3.0, 2..50), r in 0.01f64..3.0) {
        let times: Vec<f64> = (0..ds.len()).map(|k| k as f64 * 0.3).collect();
        let occ = occupied_time(&times, &ds, r);
        prop_assert!(occ >= 0.0 && occ <= times[times.len() - 1] + 1e-12);
    }
}

#[test]
fn state_distance_metrics() {
    let d = Domain::line(100.0, 1000, Boundary::Neumann).unwrap();
    let m = Model::ReactionDiffusion {
        potential: Potential::DoubleWell,
    };
    let one = Preset::Constant { value: 1.0 }.state(&m, &d).unwrap();
    let half = Preset::Constant { value: 0.5 }.state(&m, &d).unwrap();
    assert!((state_distance(&one, &half, Metric::SupOnBall, 20.0).unwrap() - 0.5).abs() < 1e-15);
    // ‖0.5‖ on a segment of length 40
    assert!(
        (state_distance(&one, &half, Metric::L2OnBall, 20.0).unwrap() - 0.5 * 40f64.sqrt()).abs()
            < 1e-9
    );
}

#[test]
fn census_examples() {
    let d = Domain::line(100.0, 2000, Boundary::Neumann).unwrap();
    let m = Model::ReactionDiffusion {
        potential: Potential::DoubleWell,
    };
    let one = Preset::Constant { value: 1.0 }.state(&m, &d).unwrap();
    assert_eq!(kink_census(one.u(), 0.0).count, 0);
    let pair = Preset::KinkPair { a: 12.0 }.state(&m, &d).unwrap();
    let c = kink_census(pair.u(), 0.0);
    assert_eq!(c.count, 2);
    assert!(
        (c.positions[0] + 12.0).abs() < 1e-3 && (c.positions[1] - 12.0).abs() < 1e-3,
        "{:?}",
        c.positions
    );
    let kink = Preset::Kink {
        center: 3.3,
        anti: true,
    }
    .state(&m, &d)
    .unwrap();
    let c = kink_census(kink.u(), 0.0);
    assert_eq!(c.count, 1);
    assert!((c.positions[0] - 3.3).abs() < 1e-3);
}

#[test]
fn census_ignores_excursions_inside_the_band() {
    let d = Domain::line(20.0, 400, Boundary::Neumann).unwrap();
    let u = ScalarField::from_fn(&d, |x, _| {
        1.0 - 0.9 * (-x * x).exp() + 0.02 * (37.0 * x).sin()
    });
    assert_eq!(kink_census(&u, 0.0).count, 0);
    let u = ScalarField::from_fn(&d, |x, _| 0.3 * (5.0 * x).sin());
    assert_eq!(kink_census(&u, 0.0).count, 0);
}

#[test]
fn lattice_census_after_smoothing() {
    let b: Vec<f64> = (0..6).map(|k| 4.0 * 2f64.powi(k)).collect();
    let d = Domain::line(120.0, 1200, Boundary::Neumann).unwrap();
    let mut s = Preset::KinkLattice { b: b.clone() }
        .state(
            &Model::ReactionDiffusion {
                potential: Potential::DoubleWell,
            },
            &d,
        )
        .unwrap();
    let st = Stepper::new(&s, 0.05).unwrap();
    for _ in 0..20 {
        st.step(&mut s).unwrap();
    }
    let inside = b.iter().filter(|x| **x < 60.0).count();
    let c = kink_census(s.u(), 0.0);
    assert_eq!(c.count, 2 * inside);
    let right: Vec<f64> = c.positions.iter().copied().filter(|p| *p > 0.0).collect();
    for (p, q) in right.iter().zip(&b) {
        assert!((p - q).abs() < 0.1, "{p} vs {q}");
    }
}

#[test]
fn tracker_counts_pair_removals() {
    let mut tr = KinkTracker::new();
    let census = |p: &[f64]| KinkCensus {
        count: p.len(),
        positions: p.to_vec(),
    };
    tr.push(0.0, census(&[-9.0, -2.0, 2.0, 9.0]));
    tr.push(1.0, census(&[-9.0, -1.0, 1.0, 9.0]));
    tr.push(4.0, census(&[-8.5, 8.5]));
    tr.push(16.0, census(&[]));
    assert_eq!(tr.events.len(), 2);
    assert_eq!(tr.events[0].removed, vec![-1.0, 1.0]);
    assert_eq!(tr.events[1].t, 16.0);
    assert_eq!(tr.cumulative(3.9), 0);
    assert_eq!(tr.cumulative(4.0), 1);
    let c = tr.fit_sqrt_constant(10.0);
    assert!((c - 0.5).abs() < 1e-15);
    assert_eq!(tr.sqrt_violations(c, 0.0, 20.0), Vec::<f64>::new());
    assert_eq!(tr.sqrt_violations(0.4, 0.0, 20.0), vec![4.0, 16.0]);
}
