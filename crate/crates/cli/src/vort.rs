//! Vorticity runs on the cylinder: enstrophy profiles, dissipation bounds and decay.

use crate::config::{steps_in, ScenarioConfig};
use crate::output::{num, Csv};
use crate::run::{
    save_checkpoint, save_snapshot, snapshot_name, Cadence, Outputs, Progress, RunResult,
    FINAL_SNAPSHOT,
};
use fluxlab_core::grids::ScalarField;
use fluxlab_core::vorticity::{
    certified_mean_flow_exponent, decay_measure, e0_beta, enstrophy_balance_residual,
    enstrophy_profile, flux_budget_excess, initial_state, kernel_constants, mean_flow_bound_check,
    measured_m1, omconv1_reports, sample, CylinderState, CylinderStepper, DecayHistory,
    DissipationHistory, EnstrophyProfile, KernelConstants,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

const NAMES: [&str; 1] = ["omega"];

/// Per-record scalars of the velocity and mean-flow checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Record {
    pub t: f64,
    pub omega_sup: f64,
    pub u_hat_sup: f64,
    pub v_sup: f64,
    pub omega_hat_l2_sup: f64,
    pub m_sup: f64,
    pub mixed_sq_sup: f64,
    pub budget_excess: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VortProgress {
    pub trajectory: String,
    pub step: u64,
    pub omega: ScalarField,
    pub m: ScalarField,
    pub omega0_sup: f64,
    pub m0_sup: f64,
    pub constants: KernelConstants,
    pub history: DissipationHistory,
    pub records: Vec<Record>,
    pub column_sup: Vec<Vec<f64>>,
    /// rows of profiles.csv, every record unless a profile cadence is set
    pub profiles: Vec<EnstrophyProfile>,
    pub last: EnstrophyProfile,
    /// cumulative enstrophy balance residual over [−R_max, R_max], per step
    pub balance: f64,
    /// largest relative growth of sup|ω| between records
    pub max_growth: f64,
}

impl VortProgress {
    pub fn state(&self) -> RunResult<CylinderState> {
        let mut s = CylinderState::new(self.omega.clone(), self.m.clone())?;
        s.set_time(self.omega.time);
        Ok(s)
    }
}

fn profile_steps(cfg: &ScenarioConfig) -> Option<u64> {
    cfg.vorticity
        .as_ref()
        .and_then(|v| v.profile_every)
        .map(|p| steps_in(p, cfg.time.dt))
}

pub fn start(cfg: &ScenarioConfig) -> RunResult<VortProgress> {
    let v = cfg.vorticity.as_ref().expect("vorticity scenario");
    let domain = cfg.domain.build()?;
    let state = initial_state(&domain, &cfg.seeded_omega().expect("validated"), &v.mean_flow)?;
    let constants = kernel_constants(v.truncation, v.quad_points)?;
    let w0 = state.omega.max_abs();
    let last = enstrophy_profile(&state, w0, constants.c3)?;
    let mut p = VortProgress {
        trajectory: cfg.trajectory_hash(),
        step: 0,
        omega0_sup: w0,
        m0_sup: state.m.max_abs(),
        history: DissipationHistory::new(&cfg.diagnostics.radii),
        records: Vec::new(),
        column_sup: Vec::new(),
        profiles: Vec::new(),
        balance: 0.0,
        max_growth: 0.0,
        omega: state.omega.clone(),
        m: state.m.clone(),
        constants,
        last: last.clone(),
    };
    observe(cfg, &mut p, &state, last)?;
    Ok(p)
}

fn observe(
    cfg: &ScenarioConfig,
    p: &mut VortProgress,
    state: &CylinderState,
    profile: EnstrophyProfile,
) -> RunResult<()> {
    let s = sample(state)?;
    if let Some(prev) = p.records.last() {
        if prev.omega_sup > 0.0 {
            p.max_growth = p.max_growth.max(s.omega_sup / prev.omega_sup - 1.0);
        }
    }
    p.history.push(state, &profile)?;
    p.records.push(Record {
        t: s.t,
        omega_sup: s.omega_sup,
        u_hat_sup: s.u_hat_sup,
        v_sup: s.v_sup,
        omega_hat_l2_sup: s.omega_hat_l2_sup,
        m_sup: s.m_sup,
        mixed_sq_sup: s.mixed_sq_sup,
        budget_excess: flux_budget_excess(&profile, p.constants.c3),
    });
    p.column_sup.push(s.column_sup);
    let every = profile_steps(cfg);
    if every.map_or(true, |k| p.step % k == 0) {
        p.profiles.push(profile);
    }
    Ok(())
}

/// Enstrophy balance over [−R_max, R_max], accumulated step by step.
fn accumulate(cfg: &ScenarioConfig, p: &mut VortProgress, profile: &EnstrophyProfile) {
    let rmax = cfg.diagnostics.radii.last().copied().unwrap_or(0.0);
    p.balance += enstrophy_balance_residual(&[p.last.clone(), profile.clone()], -rmax, rmax);
    p.last = profile.clone();
}

pub fn advance(cfg: &ScenarioConfig, dir: &Path, mut p: VortProgress) -> RunResult<VortProgress> {
    let cad = Cadence::new(cfg);
    let dt = cfg.time.dt;
    let mut state = p.state()?;
    let stepper = CylinderStepper::new(state.domain(), dt)?;
    if p.step == 0 && cad.snapshots(0) {
        save_snapshot(&dir.join(snapshot_name(0)), &NAMES, &[&state.omega])?;
    }
    while p.step < cad.total {
        stepper.step(&mut state)?;
        p.step += 1;
        state.set_time(p.step as f64 * dt);
        let prof = enstrophy_profile(&state, p.omega0_sup, p.constants.c3)?;
        accumulate(cfg, &mut p, &prof);
        if cad.records(p.step) {
            observe(cfg, &mut p, &state, prof)?;
        }
        if cad.snapshots(p.step) {
            save_snapshot(&dir.join(snapshot_name(p.step)), &NAMES, &[&state.omega])?;
        }
        if cad.checkpoints(p.step) && p.step < cad.total {
            p.omega = state.omega.clone();
            p.m = state.m.clone();
            save_checkpoint(dir, &Progress::Vorticity(p.clone()))?;
        }
    }
    p.omega = state.omega.clone();
    p.m = state.m.clone();
    save_snapshot(&dir.join(FINAL_SNAPSHOT), &NAMES, &[&state.omega])?;
    save_snapshot(&dir.join("final_mean_flow.flx"), &["m"], &[&state.m])?;
    Ok(p)
}

pub fn outputs(cfg: &ScenarioConfig, p: &VortProgress) -> RunResult<Outputs> {
    let v = cfg.vorticity.as_ref().expect("vorticity scenario");
    let tol = &cfg.tolerances;
    let c = &p.constants;
    let mut out = Outputs::default();

    let mut prof = Csv::new(&["t", "x1", "e", "f", "d"]);
    for pr in &p.profiles {
        for i in 0..pr.x1.len() {
            prof.row(&[num(pr.t), num(pr.x1[i]), num(pr.e[i]), num(pr.f[i]), num(pr.d[i])]);
        }
    }
    out.file("profiles.csv", prof.as_str());

    let (e0, beta) = e0_beta(p.omega0_sup, c.c3);
    let mut bounds = Csv::new(&["t", "R", "lhs", "rhs", "margin"]);
    for r in omconv1_reports(&p.history, e0, beta, tol.report_tol) {
        bounds.row(&[
            num(r.context.t),
            num(r.context.r),
            num(r.lhs),
            num(r.rhs),
            num(r.margin),
        ]);
        out.kind("omconv1", false).add(r.passed, r.margin);
    }
    out.file("bounds.csv", bounds.as_str());

    for r in &p.records {
        let m1 = c.c1 * r.omega_sup - r.u_hat_sup;
        out.kind("biot_savart_u", false)
            .add(m1 >= -tol.report_tol * r.omega_sup.max(1.0), m1);
        let m2 = c.c2 * r.omega_hat_l2_sup - r.v_sup;
        out.kind("biot_savart_v", false)
            .add(m2 >= -tol.report_tol * r.omega_hat_l2_sup.max(1.0), m2);
        out.kind("flux_budget", false)
            .add(r.budget_excess <= tol.report_tol, -r.budget_excess);
    }
    let growth = out.kind("max_principle", false);
    growth.add(p.max_growth <= 1e-8, 1e-8 - p.max_growth);

    let times: Vec<f64> = p.records.iter().map(|r| r.t).collect();
    let m_sup: Vec<f64> = p.records.iter().map(|r| r.m_sup).collect();
    for chk in mean_flow_bound_check(&times, &m_sup, p.m0_sup, c.c1, p.omega0_sup) {
        out.kind("mean_flow", false)
            .add(chk.passed, chk.bound - chk.m_sup);
    }

    // enstrophy balance against C_bal(dx² + dt²) per unit window length and time
    let h = cfg.domain.build()?.max_spacing();
    let t_end = times.last().copied().unwrap_or(0.0) - times.first().copied().unwrap_or(0.0);
    let rmax = cfg.diagnostics.radii.last().copied().unwrap_or(0.0);
    let tol_balance = tol.c_balance * (h * h + cfg.time.dt * cfg.time.dt);
    let scaled = if t_end > 0.0 {
        p.balance.abs() / (2.0 * rmax * t_end)
    } else {
        0.0
    };
    out.kind("enstrophy_balance", false)
        .add(scaled <= tol_balance, tol_balance - scaled);

    let mixed: Vec<f64> = p.records.iter().map(|r| r.mixed_sq_sup).collect();
    let m2 = v
        .m2
        .unwrap_or(p.m0_sup + 2.0 / PI.sqrt() * c.c1 * c.c1 * p.omega0_sup * p.omega0_sup)
        .max(f64::MIN_POSITIVE);
    let beta_exp = certified_mean_flow_exponent(&times, &m_sup, m2).unwrap_or(0.5);
    let history = DecayHistory {
        times: times.clone(),
        x1: p.history.x1.clone(),
        dissipation: p.history.profiles.clone(),
        column_sup: p.column_sup.clone(),
    };
    let mut decay = Csv::new(&["T", "alpha", "beta", "J_measure", "excursion_measure", "K0"]);
    let horizons = v
        .decay_horizons
        .clone()
        .unwrap_or_else(|| vec![cfg.time.t_final]);
    if let Some(m1) = measured_m1(&times, &mixed, v.burn_in).filter(|m| *m > 0.0) {
        for &t in &horizons {
            for &alpha in v.alphas.iter().filter(|a| **a >= beta_exp) {
                let r = decay_measure(&history, alpha, beta_exp, m1, m2, t, e0, beta)?;
                decay.row(&[
                    num(r.horizon),
                    num(r.alpha),
                    num(r.beta_exp),
                    num(r.j_measure),
                    num(r.excursion_measure),
                    num(r.k0),
                ]);
                out.kind("decay_j", false)
                    .add(r.j_measure <= r.j_bound, r.j_bound - r.j_measure);
            }
        }
    }
    out.file("decay.csv", decay.as_str());

    let mut sups = Csv::new(&[
        "t",
        "omega_sup",
        "u_hat_sup",
        "v_sup",
        "omega_hat_l2_sup",
        "m_sup",
    ]);
    for r in &p.records {
        sups.row(&[
            num(r.t),
            num(r.omega_sup),
            num(r.u_hat_sup),
            num(r.v_sup),
            num(r.omega_hat_l2_sup),
            num(r.m_sup),
        ]);
    }
    out.file("sup_norms.csv", sups.as_str());

    let constants: BTreeMap<&str, f64> = [
        ("c1", c.c1),
        ("c2", c.c2),
        ("c3", c.c3),
        ("norm_grad_k_l1", c.norm_grad_k_l1),
        ("norm_k_l1", c.norm_k_l1),
        ("m0", c.m0),
        ("e0", e0),
        ("beta", beta),
        ("beta_exp", beta_exp),
        ("m2", m2),
    ]
    .into_iter()
    .collect();
    let mut kc = Csv::new(&["name", "value"]);
    for (k, val) in constants {
        kc.row(&[k.to_string(), num(val)]);
    }
    out.file("constants.csv", kc.as_str());
    Ok(out)
}
