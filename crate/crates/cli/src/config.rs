//! Scenario configuration: TOML schema and aggregated validation.

use fluxlab_core::diagnostics::{check_ladder, BoundKind, Metric, DEFAULT_OBSERVATION_RADIUS};
use fluxlab_core::grids::{Boundary, Domain, DomainKind};
use fluxlab_core::models::{Model, Preset};
use fluxlab_core::vorticity::{initial_state, CylinderStepper, MeanFlowPreset, VorticityPreset};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    /// Replaces the seed of random presets when set.
    #[serde(default)]
    pub seed: Option<u64>,
    pub domain: DomainSpec,
    #[serde(default)]
    pub model: Option<Model>,
    #[serde(default)]
    pub initial: Option<Preset>,
    #[serde(default)]
    pub vorticity: Option<VorticitySpec>,
    pub time: TimeSpec,
    pub diagnostics: DiagnosticsSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub length: f64,
    pub points: usize,
    /// second axis of a plane; the cylinder's vertical period is always 1
    #[serde(default)]
    pub length2: Option<f64>,
    #[serde(default)]
    pub points2: Option<usize>,
    #[serde(default = "neumann")]
    pub boundary: Boundary,
}

fn neumann() -> Boundary {
    Boundary::Neumann
}

impl DomainSpec {
    pub fn build(&self) -> fluxlab_core::Result<Domain> {
        match self.kind {
            DomainKind::Line => Domain::line(self.length, self.points, self.boundary),
            DomainKind::Plane => Domain::plane(
                self.length,
                self.points,
                self.length2.unwrap_or(self.length),
                self.points2.unwrap_or(self.points),
                self.boundary,
            ),
            DomainKind::Cylinder => Domain::cylinder(
                self.length,
                self.points,
                self.points2.unwrap_or(self.points),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VorticitySpec {
    pub omega: VorticityPreset,
    #[serde(default)]
    pub mean_flow: MeanFlowPreset,
    /// x₁ truncation and points per unit length for the kernel constants
    #[serde(default = "default_truncation")]
    pub truncation: f64,
    #[serde(default = "default_quad_points")]
    pub quad_points: usize,
    /// exponents α of the decay measure
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    /// horizons of the decay CSV; the final time when absent
    #[serde(default)]
    pub decay_horizons: Option<Vec<f64>>,
    #[serde(default = "one")]
    pub burn_in: f64,
    /// M₂ of the mean-flow growth law; the a-priori constant when absent
    #[serde(default)]
    pub m2: Option<f64>,
    /// cadence of rows in profiles.csv
    #[serde(default)]
    pub profile_every: Option<f64>,
}

fn default_truncation() -> f64 {
    10.0
}

fn default_quad_points() -> usize {
    8
}

fn default_alphas() -> Vec<f64> {
    vec![0.25, 0.5]
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub dt: f64,
    pub t_final: f64,
    /// diagnostics cadence; every step when absent
    #[serde(default)]
    pub record_every: Option<f64>,
    #[serde(default)]
    pub checkpoint_every: Option<f64>,
    #[serde(default)]
    pub snapshot_every: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSpec {
    pub radii: Vec<f64>,
    #[serde(default = "default_pad")]
    pub pad: f64,
    /// kinds that decide pass/fail; every applicable kind when absent
    #[serde(default)]
    pub bounds: Option<Vec<String>>,
    #[serde(default = "yes")]
    pub pointwise: bool,
    #[serde(default)]
    pub jt: Option<JtSpec>,
    #[serde(default)]
    pub occupancy: Option<OccupancySpec>,
    #[serde(default)]
    pub kinks: Option<KinkSpec>,
}

fn default_pad() -> f64 {
    fluxlab_core::diagnostics::DEFAULT_PAD
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JtSpec {
    pub radii: Vec<f64>,
    /// horizons T at which J_T is evaluated; the final time when absent
    #[serde(default)]
    pub horizons: Option<Vec<f64>>,
    #[serde(default = "default_tol_e")]
    pub tol_e: f64,
}

fn default_tol_e() -> f64 {
    fluxlab_core::diagnostics::DEFAULT_TOL_E
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupancySpec {
    pub reference: Preset,
    pub radius: f64,
    #[serde(default = "sup_on_ball")]
    pub metric: Metric,
    #[serde(default = "default_observation")]
    pub observation_radius: f64,
}

fn sup_on_ball() -> Metric {
    Metric::SupOnBall
}

fn default_observation() -> f64 {
    DEFAULT_OBSERVATION_RADIUS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KinkSpec {
    #[serde(default)]
    pub level: f64,
    /// C in N(T) ≤ C√T is fitted on T ≤ fit_horizon
    #[serde(default = "ten")]
    pub fit_horizon: f64,
}

fn ten() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// κ in slack_tol = κ(dx² + dt)(1 + |∇e|)
    #[serde(default = "ten")]
    pub kappa: f64,
    /// C_bal in tol_balance = C_bal(dx² + dt²)
    #[serde(default = "one")]
    pub c_balance: f64,
    #[serde(default = "default_slack")]
    pub asymptotic_slack: f64,
    #[serde(default = "default_report_tol")]
    pub report_tol: f64,
    #[serde(default = "ten")]
    pub asymptotic_from: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// any model field above this magnitude stops the run as unstable
    #[serde(default = "default_ceiling")]
    pub amplitude_ceiling: f64,
}

fn default_ceiling() -> f64 {
    fluxlab_core::models::DEFAULT_AMPLITUDE_CEILING
}

fn default_slack() -> f64 {
    1.5
}

fn default_report_tol() -> f64 {
    1e-9
}

fn default_gamma() -> f64 {
    0.25
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            kappa: 10.0,
            c_balance: 1.0,
            asymptotic_slack: default_slack(),
            report_tol: default_report_tol(),
            asymptotic_from: 10.0,
            gamma: default_gamma(),
            amplitude_ceiling: default_ceiling(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// run directory; `<out root>/<name>` when absent
    #[serde(default)]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub key: String,
    pub rule: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.rule)
    }
}

const KIND_NAMES: &[&str] = &[
    "F1bd",
    "FNbd",
    "dissip0",
    "dissip1",
    "dissip2",
    "dissip3",
    "dissip4",
    "cor43_gamma",
    "cor43_log",
    "omconv1",
    "timeN",
];

pub fn kind_from_str(s: &str) -> Option<BoundKind> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).ok()
}

struct Errors(Vec<ConfigError>);

impl Errors {
    fn push(&mut self, key: &str, rule: impl Into<String>) {
        self.0.push(ConfigError {
            key: key.to_string(),
            rule: rule.into(),
        });
    }

    fn positive(&mut self, key: &str, v: f64) {
        if !(v > 0.0) || !v.is_finite() {
            self.push(key, format!("must be positive and finite, got {v}"));
        }
    }

    /// `every` must be a whole number of steps of length dt.
    fn multiple(&mut self, key: &str, every: f64, dt: f64) {
        if !(every > 0.0) {
            self.push(key, format!("must be positive, got {every}"));
            return;
        }
        let k = every / dt;
        if k.round() < 1.0 || (k - k.round()).abs() > 1e-9 * k.max(1.0) {
            self.push(key, format!("must be a whole multiple of dt = {dt}"));
        }
    }
}

/// Whole number of steps of length dt in `span`.
pub fn steps_in(span: f64, dt: f64) -> u64 {
    (span / dt).round() as u64
}

impl ScenarioConfig {
    pub fn is_vorticity(&self) -> bool {
        self.vorticity.is_some()
    }

    /// Initial preset with the scenario seed applied.
    pub fn seeded_initial(&self) -> Option<Preset> {
        let mut p = self.initial.clone()?;
        if let (Some(s), Preset::RandomSmooth { seed, .. }) = (self.seed, &mut p) {
            *seed = s;
        }
        Some(p)
    }

    pub fn seeded_omega(&self) -> Option<VorticityPreset> {
        let mut p = self.vorticity.as_ref()?.omega.clone();
        if let (Some(s), VorticityPreset::Random { seed, .. }) = (self.seed, &mut p) {
            *seed = s;
        }
        Some(p)
    }

    /// Seed the trajectory actually uses, if any.
    pub fn effective_seed(&self) -> Option<u64> {
        match (self.seeded_initial(), self.seeded_omega()) {
            (Some(Preset::RandomSmooth { seed, .. }), _) => Some(seed),
            (_, Some(VorticityPreset::Random { seed, .. })) => Some(seed),
            _ => self.seed,
        }
    }

    pub fn record_every(&self) -> f64 {
        self.time.record_every.unwrap_or(self.time.dt)
    }

    pub fn checked_kinds(&self) -> Option<Vec<BoundKind>> {
        self.diagnostics
            .bounds
            .as_ref()
            .map(|v| v.iter().filter_map(|s| kind_from_str(s)).collect())
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(
            serde_json::to_vec(self).expect("config serializes"),
        ))
    }

    /// Digest of everything that determines the recorded trajectory; horizons,
    /// cadences of files and tolerances are excluded so a longer run can resume
    /// from a shorter one.
    pub fn trajectory_hash(&self) -> String {
        let key = serde_json::json!({
            "domain": self.domain,
            "model": self.model,
            "initial": self.seeded_initial(),
            "omega": self.seeded_omega(),
            "mean_flow": self.vorticity.as_ref().map(|v| &v.mean_flow),
            "dt": self.time.dt,
            "record_every": self.record_every(),
            "radii": self.diagnostics.radii,
            "pointwise": self.diagnostics.pointwise,
            "occupancy": self.diagnostics.occupancy,
            "kinks": self.diagnostics.kinks.as_ref().map(|k| k.level),
            "kappa": self.tolerances.kappa,
        });
        hex::encode(Sha256::digest(key.to_string().as_bytes()))
    }
}

/// Parse and check every invariant; all violations are reported together.
pub fn validate_config(text: &str) -> Result<ScenarioConfig, Vec<ConfigError>> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| {
        vec![ConfigError {
            key: "<document>".into(),
            rule: e.message().trim().to_string(),
        }]
    })?;
    let errs = check(&cfg);
    if errs.is_empty() {
        Ok(cfg)
    } else {
        Err(errs)
    }
}

pub fn check(cfg: &ScenarioConfig) -> Vec<ConfigError> {
    let mut e = Errors(Vec::new());
    if cfg.schema_version != SCHEMA_VERSION {
        e.push(
            "schema_version",
            format!("must equal {SCHEMA_VERSION}, got {}", cfg.schema_version),
        );
    }
    if cfg.name.is_empty()
        || !cfg
            .name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        e.push("name", "must be nonempty and use only [A-Za-z0-9_-]");
    }

    let t = &cfg.time;
    e.positive("time.dt", t.dt);
    e.positive("time.t_final", t.t_final);
    let dt_ok = t.dt > 0.0 && t.dt.is_finite();
    if dt_ok && t.t_final > 0.0 {
        e.multiple("time.t_final", t.t_final, t.dt);
        for (key, v) in [
            ("time.record_every", t.record_every),
            ("time.checkpoint_every", t.checkpoint_every),
            ("time.snapshot_every", t.snapshot_every),
            (
                "vorticity.profile_every",
                cfg.vorticity.as_ref().and_then(|v| v.profile_every),
            ),
        ] {
            if let Some(v) = v {
                e.multiple(key, v, t.dt);
            }
        }
        if let Some(r) = t.record_every.filter(|r| *r > 0.0) {
            let k = t.t_final / r;
            if (k - k.round()).abs() > 1e-9 * k.max(1.0) {
                e.push("time.t_final", format!("must be a whole multiple of record_every = {r}"));
            }
        }
    }

    let tol = &cfg.tolerances;
    e.positive("tolerances.kappa", tol.kappa);
    e.positive("tolerances.c_balance", tol.c_balance);
    e.positive("tolerances.asymptotic_slack", tol.asymptotic_slack);
    e.positive("tolerances.report_tol", tol.report_tol);
    e.positive("tolerances.asymptotic_from", tol.asymptotic_from);
    e.positive("tolerances.amplitude_ceiling", tol.amplitude_ceiling);
    if !(tol.gamma > 0.0 && tol.gamma < 0.5) {
        e.push("tolerances.gamma", format!("must lie in (0, 1/2), got {}", tol.gamma));
    }

    let dg = &cfg.diagnostics;
    if !(dg.pad >= 0.0) {
        e.push("diagnostics.pad", format!("must be nonnegative, got {}", dg.pad));
    }
    if let Some(b) = &dg.bounds {
        for k in b {
            if !KIND_NAMES.contains(&k.as_str()) {
                e.push(
                    "diagnostics.bounds",
                    format!("unknown bound kind {k:?}; expected one of {KIND_NAMES:?}"),
                );
            }
        }
    }

    let domain = match cfg.domain.build() {
        Ok(d) => Some(d),
        Err(err) => {
            e.push("domain", err.to_string());
            None
        }
    };
    if let Some(d) = &domain {
        if t.t_final > 0.0 {
            if let Err(err) = check_ladder(d, &dg.radii, t.t_final, dg.pad) {
                e.push("diagnostics.radii", err.to_string());
            }
            if let Some(jt) = &dg.jt {
                if let Err(err) = check_ladder(d, &jt.radii, t.t_final, dg.pad) {
                    e.push("diagnostics.jt.radii", err.to_string());
                }
            }
        }
    }
    if let Some(jt) = &dg.jt {
        e.positive("diagnostics.jt.tol_e", jt.tol_e);
        for &h in jt.horizons.iter().flatten() {
            if !(h > 0.0 && h <= t.t_final) {
                e.push(
                    "diagnostics.jt.horizons",
                    format!("horizon {h} must lie in (0, t_final]"),
                );
            } else if t.dt > 0.0 {
                e.multiple("diagnostics.jt.horizons", h, t.dt);
            }
        }
    }
    if let Some(oc) = &dg.occupancy {
        e.positive("diagnostics.occupancy.radius", oc.radius);
        e.positive(
            "diagnostics.occupancy.observation_radius",
            oc.observation_radius,
        );
        if let Err(err) = oc.reference.validate() {
            e.push("diagnostics.occupancy.reference", err.to_string());
        }
    }
    if let Some(k) = &dg.kinks {
        e.positive("diagnostics.kinks.fit_horizon", k.fit_horizon);
        if cfg.domain.kind != DomainKind::Line {
            e.push("diagnostics.kinks", "kink census needs a line domain");
        }
    }

    match (&cfg.model, &cfg.vorticity) {
        (Some(_), Some(_)) | (None, None) => {
            e.push("model", "exactly one of [model] or [vorticity] is required")
        }
        (Some(model), None) => check_model(cfg, model, domain.as_ref(), &mut e),
        (None, Some(v)) => check_vorticity(cfg, v, domain.as_ref(), &mut e),
    }
    e.0
}

fn check_model(cfg: &ScenarioConfig, model: &Model, domain: Option<&Domain>, e: &mut Errors) {
    if cfg.domain.kind == DomainKind::Cylinder {
        e.push("domain.kind", "cylinder domains are for [vorticity] runs");
    }
    if let Err(err) = model.validate() {
        e.push("model", err.to_string());
    }
    let Some(preset) = cfg.seeded_initial() else {
        e.push("initial", "an initial-data preset is required");
        return;
    };
    if let Err(err) = preset.validate() {
        e.push("initial", err.to_string());
        return;
    }
    let Some(d) = domain else { return };
    match preset.state(model, d) {
        Ok(s) => {
            let limit = s.max_stable_dt();
            if cfg.time.dt > limit {
                e.push(
                    "time.dt",
                    format!(
                        "{} exceeds the stability limit {limit:.6e} of {}",
                        cfg.time.dt,
                        model.id().as_str()
                    ),
                );
            }
        }
        Err(err) => e.push("initial", err.to_string()),
    }
}

fn check_vorticity(cfg: &ScenarioConfig, v: &VorticitySpec, domain: Option<&Domain>, e: &mut Errors) {
    if cfg.initial.is_some() {
        e.push("initial", "vorticity runs take their data from [vorticity]");
    }
    if cfg.domain.kind != DomainKind::Cylinder {
        e.push("domain.kind", "vorticity runs need a cylinder domain");
    }
    e.positive("vorticity.truncation", v.truncation);
    e.positive("vorticity.burn_in", v.burn_in);
    if v.quad_points == 0 {
        e.push("vorticity.quad_points", "must be positive");
    }
    if let Some(m2) = v.m2 {
        e.positive("vorticity.m2", m2);
    }
    if v.alphas.is_empty() || v.alphas.iter().any(|a| !(*a > 0.0 && *a <= 0.5)) {
        e.push("vorticity.alphas", "each exponent must lie in (0, 1/2]");
    }
    for &h in v.decay_horizons.iter().flatten() {
        if !(h > 0.0 && h <= cfg.time.t_final) {
            e.push(
                "vorticity.decay_horizons",
                format!("horizon {h} must lie in (0, t_final]"),
            );
        }
    }
    let Some(d) = domain.filter(|d| d.kind == DomainKind::Cylinder) else {
        return;
    };
    let omega = cfg.seeded_omega().expect("vorticity spec present");
    let state = match initial_state(d, &omega, &v.mean_flow) {
        Ok(s) => s,
        Err(err) => {
            e.push("vorticity.omega", err.to_string());
            return;
        }
    };
    if !(cfg.time.dt > 0.0) {
        return;
    }
    if let Ok(st) = CylinderStepper::new(d, cfg.time.dt) {
        let h = d.spacing().into_iter().fold(f64::INFINITY, f64::min);
        let limit = st.cfl * h / st.max_speed(&state).max(1.0);
        if cfg.time.dt > limit {
            e.push(
                "time.dt",
                format!(
                    "{} exceeds the advective stability limit {limit:.6e}",
                    cfg.time.dt
                ),
            );
        }
    }
}
