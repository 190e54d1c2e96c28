//! Trajectories of the four gradient-like models and their flux diagnostics.

use crate::config::{steps_in, ScenarioConfig};
use crate::output::{num, Csv};
use crate::run::{
    save_checkpoint, save_snapshot, snapshot_name, Cadence, Outputs, Progress, RunError,
    RunResult, FINAL_SNAPSHOT,
};
use fluxlab_core::diagnostics::{
    check_dissipation_bounds, flux_bound, jt_sparsity, kink_census, psi, sparsity_integral,
    state_distance, BoundKind, BoundOptions, FluxRecorder, KinkTracker, RecorderState,
};
use fluxlab_core::grids::ScalarField;
use fluxlab_core::models::{energy_triple, ModelState, Stepper};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelProgress {
    pub trajectory: String,
    pub step: u64,
    pub state: ModelState,
    pub recorder: RecorderState,
    pub e_initial: ScalarField,
    /// energy density at each J_T horizon reached so far, keyed by step
    pub jt_energy: Vec<(u64, ScalarField)>,
    /// distance to the occupancy reference at each record
    pub distances: Vec<f64>,
    pub kinks: Option<KinkTracker>,
    pub kink_positions0: Vec<f64>,
    /// (checked, failed, worst margin) of the pointwise A2 check
    pub a2: (usize, usize, f64),
}

fn initial_state(cfg: &ScenarioConfig) -> RunResult<ModelState> {
    let model = cfg.model.clone().expect("model scenario");
    let domain = cfg.domain.build()?;
    Ok(cfg
        .seeded_initial()
        .expect("validated")
        .state(&model, &domain)?)
}

fn reference_state(cfg: &ScenarioConfig) -> RunResult<Option<ModelState>> {
    let Some(oc) = &cfg.diagnostics.occupancy else {
        return Ok(None);
    };
    let model = cfg.model.clone().expect("model scenario");
    Ok(Some(oc.reference.state(&model, &cfg.domain.build()?)?))
}

fn jt_steps(cfg: &ScenarioConfig) -> Vec<u64> {
    let Some(jt) = &cfg.diagnostics.jt else {
        return Vec::new();
    };
    match &jt.horizons {
        Some(h) => h.iter().map(|t| steps_in(*t, cfg.time.dt)).collect(),
        None => vec![steps_in(cfg.time.t_final, cfg.time.dt)],
    }
}

pub fn start(cfg: &ScenarioConfig) -> RunResult<ModelProgress> {
    let state = initial_state(cfg)?;
    let triple = energy_triple(&state)?;
    let mut p = ModelProgress {
        trajectory: cfg.trajectory_hash(),
        step: 0,
        recorder: FluxRecorder::new(
            state.domain(),
            &cfg.diagnostics.radii,
            cfg.diagnostics.pointwise && state.domain().radial_dim() == 1,
        )?
        .state(),
        e_initial: triple.e.clone(),
        jt_energy: Vec::new(),
        distances: Vec::new(),
        kinks: cfg.diagnostics.kinks.as_ref().map(|_| KinkTracker::new()),
        kink_positions0: Vec::new(),
        a2: (0, 0, f64::INFINITY),
        state,
    };
    if let Some(k) = &cfg.diagnostics.kinks {
        p.kink_positions0 = kink_census(p.state.u(), k.level).positions;
    }
    let mut rec = FluxRecorder::restore(p.state.domain(), p.recorder.clone())?;
    sample(&p, &mut rec)?;
    observe(cfg, &mut p, reference_state(cfg)?.as_ref())?;
    p.recorder = rec.state();
    Ok(p)
}

/// Feed the flux recorder; it samples every step so the time integrals
/// resolve the dynamics independently of the output cadence.
fn sample(p: &ModelProgress, rec: &mut FluxRecorder) -> RunResult<()> {
    rec.record(p.state.time, &energy_triple(&p.state)?)?;
    Ok(())
}

/// Pointwise checks and trackers at the record cadence.
fn observe(
    cfg: &ScenarioConfig,
    p: &mut ModelProgress,
    reference: Option<&ModelState>,
) -> RunResult<()> {
    let triple = energy_triple(&p.state)?;
    let dt = if p.step == 0 { 0.0 } else { cfg.time.dt };
    let a2 = triple.check_a2(cfg.tolerances.kappa, dt);
    p.a2.0 += 1;
    if !a2.holds() {
        p.a2.1 += 1;
    }
    p.a2.2 = p.a2.2.min(-a2.worst_excess);
    if let (Some(oc), Some(reference)) = (&cfg.diagnostics.occupancy, reference) {
        p.distances.push(state_distance(
            &p.state,
            reference,
            oc.metric,
            oc.observation_radius,
        )?);
    }
    if let (Some(k), Some(tr)) = (&cfg.diagnostics.kinks, &mut p.kinks) {
        tr.push(p.state.time, kink_census(p.state.u(), k.level));
    }
    Ok(())
}

pub fn advance(cfg: &ScenarioConfig, dir: &Path, mut p: ModelProgress) -> RunResult<ModelProgress> {
    let cad = Cadence::new(cfg);
    let dt = cfg.time.dt;
    let mut stepper = Stepper::new(&p.state, dt)?;
    stepper.amplitude_ceiling = cfg.tolerances.amplitude_ceiling;
    let mut rec = FluxRecorder::restore(p.state.domain(), p.recorder.clone())?;
    let names = p.state.model.field_names();
    let jt = jt_steps(cfg);
    let reference = reference_state(cfg)?;
    if p.step == 0 && jt.contains(&0) {
        p.jt_energy.push((0, p.e_initial.clone()));
    }
    if p.step == 0 && cad.snapshots(0) {
        save_snapshot(&dir.join(snapshot_name(0)), names, &p.state.fields.iter().collect::<Vec<_>>())?;
    }
    while p.step < cad.total {
        stepper.step(&mut p.state)?;
        p.step += 1;
        p.state.set_time(p.step as f64 * dt);
        sample(&p, &mut rec)?;
        if cad.records(p.step) {
            observe(cfg, &mut p, reference.as_ref())?;
        }
        if jt.contains(&p.step) && !p.jt_energy.iter().any(|(s, _)| *s == p.step) {
            p.jt_energy.push((p.step, energy_triple(&p.state)?.e));
        }
        if cad.snapshots(p.step) {
            save_snapshot(
                &dir.join(snapshot_name(p.step)),
                names,
                &p.state.fields.iter().collect::<Vec<_>>(),
            )?;
        }
        if cad.checkpoints(p.step) && p.step < cad.total {
            p.recorder = rec.state();
            save_checkpoint(dir, &Progress::Model(p.clone()))?;
        }
    }
    p.recorder = rec.state();
    save_snapshot(&dir.join(FINAL_SNAPSHOT), names, &p.state.fields.iter().collect::<Vec<_>>())?;
    Ok(p)
}

fn wanted(cfg: &ScenarioConfig, kind: BoundKind) -> bool {
    cfg.checked_kinds().map_or(true, |k| k.contains(&kind))
}

pub fn outputs(cfg: &ScenarioConfig, p: &ModelProgress) -> RunResult<Outputs> {
    let mut out = Outputs::default();
    let domain = p.state.domain().clone();
    let dim = domain.radial_dim();
    let rec = FluxRecorder::restore(&domain, p.recorder.clone())?;
    let series = rec.series(dim)?.subsample(Cadence::new(cfg).record as usize);
    let tol = &cfg.tolerances;
    let opts = BoundOptions {
        asymptotic_slack: tol.asymptotic_slack,
        report_tol: tol.report_tol,
        asymptotic_from: tol.asymptotic_from,
        gamma: tol.gamma,
    };

    let mut kc = Csv::new(&["name", "value"]);
    kc.row(&["N".into(), num(dim as f64)]);
    kc.row(&["e0".into(), num(series.e0)]);
    kc.row(&["beta".into(), num(series.beta)]);
    out.file("constants.csv", kc.as_str());

    let mut flux = Csv::new(&["T", "R", "F", "bound", "margin"]);
    for (it, &t) in series.times.iter().enumerate() {
        for (ir, &r) in series.radii.iter().enumerate() {
            let f = series.flux[it][ir];
            let b = flux_bound(dim, r, t, series.e0, series.beta)?;
            flux.row(&[num(t), num(r), num(f), num(b), num(b - f)]);
        }
    }
    out.file("flux.csv", flux.as_str());

    let reports = check_dissipation_bounds(&series, &opts)?;
    let mut diss = Csv::new(&["T", "R", "D", "bound_kind", "bound", "margin"]);
    let mut pointwise = Csv::new(&["T", "max_abs_F", "bound", "margin"]);
    for r in &reports {
        match r.kind {
            BoundKind::F1bd => {
                pointwise.row(&[num(r.context.t), num(r.lhs), num(r.rhs), num(r.margin)])
            }
            BoundKind::FNbd => {}
            k => diss.row(&[
                num(r.context.t),
                num(r.context.r),
                num(r.lhs),
                k.as_str().to_string(),
                num(r.rhs),
                num(r.margin),
            ]),
        }
        if wanted(cfg, r.kind) {
            out.kind(r.kind.as_str(), r.kind.is_asymptotic())
                .add(r.passed, r.margin);
        }
    }
    out.file("dissipation.csv", diss.as_str());
    if series.pointwise_max.is_some() {
        out.file("pointwise_flux.csv", pointwise.as_str());
    }

    // energy balance per (R, T) sample against C_bal(dx² + dt²)
    let h = domain.max_spacing();
    let tol_balance = tol.c_balance * (h * h + cfg.time.dt * cfg.time.dt);
    let mut bal = Csv::new(&["T", "R", "residual", "scaled", "tol_balance"]);
    for it in 1..series.times.len() {
        let t = series.times[it];
        for (ir, &r) in series.radii.iter().enumerate() {
            let res = series.balance_residual(it, ir);
            let scaled = res.abs() / ((r.powi(dim as i32) + r.powi(dim as i32 - 1)) * t);
            bal.row(&[num(t), num(r), num(res), num(scaled), num(tol_balance)]);
            out.kind("balance", false)
                .add(scaled <= tol_balance, tol_balance - scaled);
        }
    }
    out.file("balance.csv", bal.as_str());
    let a2 = out.kind("a2", false);
    a2.checked = p.a2.0;
    a2.failed = p.a2.1;
    a2.worst_margin = Some(p.a2.2);

    if let Some(jt) = &cfg.diagnostics.jt {
        let mut csv = Csv::new(&["T", "r", "in_JT", "sparsity_integral"]);
        let mut steps = jt_steps(cfg);
        steps.sort_unstable();
        steps.dedup();
        for s in steps {
            let Some((_, e)) = p.jt_energy.iter().find(|(k, _)| *k == s) else {
                return Err(RunError::Input(format!(
                    "J_T horizon at step {s} was not captured by this trajectory"
                )));
            };
            let r = jt_sparsity(&p.e_initial, e, &jt.radii, jt.tol_e)?;
            for (k, &radius) in r.radii.iter().enumerate() {
                let running = sparsity_integral(&r.radii, &r.in_jt, dim, radius);
                csv.row(&[
                    num(r.t),
                    num(radius),
                    u8::from(r.in_jt[k]).to_string(),
                    num(running),
                ]);
            }
        }
        out.file("jt.csv", csv.as_str());
    }

    if let Some(oc) = &cfg.diagnostics.occupancy {
        let mut csv = Csv::new(&["T", "occupied", "weighted"]);
        let times = &series.times;
        let mut occupied = 0.0;
        for k in 1..times.len() {
            occupied += fluxlab_core::diagnostics::occupied_time(
                &times[k - 1..=k],
                &p.distances[k - 1..=k],
                oc.radius,
            );
            let t = times[k] - times[0];
            csv.row(&[num(t), num(occupied), num(psi(dim, t) / t * occupied)]);
        }
        out.file("occupancy.csv", csv.as_str());
    }

    if let (Some(k), Some(tr)) = (&cfg.diagnostics.kinks, &p.kinks) {
        let mut csv = Csv::new(&["t", "count"]);
        for (t, c) in tr.times.iter().zip(&tr.counts) {
            csv.row(&[num(*t), c.to_string()]);
        }
        out.file("kinks.csv", csv.as_str());
        let c = tr.fit_sqrt_constant(k.fit_horizon);
        let s = out.kind("kink_sqrt", false);
        for &t in tr.times.iter().filter(|t| **t >= k.fit_horizon) {
            let n = tr.cumulative(t) as f64;
            s.add(n <= c * t.sqrt(), c * t.sqrt() - n);
        }
        let s = out.kind("kink_order", false);
        for (ok, margin) in order_checks(tr, &p.kink_positions0) {
            s.add(ok, margin);
        }
    }

    let mut events = Csv::new(&["t", "left", "right", "initial_separation"]);
    if let Some(tr) = &p.kinks {
        let seps = pair_separations(tr, &p.kink_positions0);
        for (e, s) in tr.events.iter().zip(&seps) {
            let (a, b) = (e.removed[0], *e.removed.last().expect("nonempty"));
            events.row(&[num(e.t), num(a), num(b), num(*s)]);
        }
        out.file("kink_events.csv", events.as_str());
    }
    Ok(out)
}

/// Per event: the removed kinks were adjacent survivors of the initial census
/// and strictly the closest such pair. Margin is the gap to the runner-up.
pub fn order_checks(tr: &KinkTracker, initial: &[f64]) -> Vec<(bool, f64)> {
    let mut alive = initial.to_vec();
    let mut out = Vec::new();
    for e in &tr.events {
        let nearest = |x: f64| {
            (0..alive.len()).min_by(|&i, &j| (alive[i] - x).abs().total_cmp(&(alive[j] - x).abs()))
        };
        let (Some(i), Some(j)) = (nearest(e.removed[0]), nearest(*e.removed.last().expect("nonempty")))
        else {
            out.push((false, f64::NEG_INFINITY));
            continue;
        };
        let (i, j) = (i.min(j), i.max(j));
        if j != i + 1 {
            out.push((false, f64::NEG_INFINITY));
            continue;
        }
        let gap = alive[j] - alive[i];
        let others = (1..alive.len())
            .filter(|&k| k != j)
            .map(|k| alive[k] - alive[k - 1])
            .fold(f64::INFINITY, f64::min);
        out.push((gap < others, others - gap));
        alive.drain(i..=j);
    }
    out
}

/// Initial separation of each annihilated pair, matching every removed kink
/// to the nearest kink of the initial census.
pub fn pair_separations(tr: &KinkTracker, initial: &[f64]) -> Vec<f64> {
    let nearest = |x: f64| {
        initial
            .iter()
            .copied()
            .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
            .unwrap_or(x)
    };
    tr.events
        .iter()
        .map(|e| {
            let a = nearest(e.removed[0]);
            let b = nearest(*e.removed.last().expect("nonempty"));
            (b - a).abs()
        })
        .collect()
}
