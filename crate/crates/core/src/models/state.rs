use super::potential::{Diffusivity, Potential};
use crate::grids::{Domain, ScalarField};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    ReactionDiffusion,
    DampedWave,
    GinzburgLandau,
    NonlinearDiffusion,
}

impl ModelId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelId::ReactionDiffusion => "reaction_diffusion",
            ModelId::DampedWave => "damped_wave",
            ModelId::GinzburgLandau => "ginzburg_landau",
            ModelId::NonlinearDiffusion => "nonlinear_diffusion",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    /// u_t = Δu − V′(u)
    ReactionDiffusion { potential: Potential },
    /// u_tt + u_t − αΔu_t = Δu − V′(u)
    DampedWave { alpha: f64, potential: Potential },
    /// v_t = (1 + iα)(Δv + v − |v|²v)
    GinzburgLandau { alpha: f64 },
    /// u_t = div(a(u)∇u)
    NonlinearDiffusion { diffusivity: Diffusivity },
}

impl Model {
    pub fn id(&self) -> ModelId {
        match self {
            Model::ReactionDiffusion { .. } => ModelId::ReactionDiffusion,
            Model::DampedWave { .. } => ModelId::DampedWave,
            Model::GinzburgLandau { .. } => ModelId::GinzburgLandau,
            Model::NonlinearDiffusion { .. } => ModelId::NonlinearDiffusion,
        }
    }

    pub fn field_names(&self) -> &'static [&'static str] {
        match self {
            Model::ReactionDiffusion { .. } | Model::NonlinearDiffusion { .. } => &["u"],
            Model::DampedWave { .. } => &["u", "u_t"],
            Model::GinzburgLandau { .. } => &["re", "im"],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Model::ReactionDiffusion { potential } => potential.validate(4.0),
            Model::DampedWave { alpha, potential } => {
                if !(*alpha >= 0.0) {
                    return Err(Error::Domain(format!(
                        "damped_wave needs alpha >= 0, got {alpha}"
                    )));
                }
                potential.validate(4.0)
            }
            Model::GinzburgLandau { alpha } if !alpha.is_finite() => {
                Err(Error::Domain("ginzburg_landau alpha must be finite".into()))
            }
            Model::NonlinearDiffusion { diffusivity } if !(diffusivity.a0 > 0.0) => {
                Err(Error::Precondition(format!(
                    "diffusivity a(0) = {} must be positive",
                    diffusivity.a0
                )))
            }
            _ => Ok(()),
        }
    }

    /// Largest step the split scheme tolerates for states with sup|u| ≤ amplitude.
    pub fn max_stable_dt(&self, domain: &Domain, amplitude: f64) -> f64 {
        let range = 1.25 * amplitude.max(1.0);
        match self {
            Model::ReactionDiffusion { potential } | Model::DampedWave { potential, .. } => {
                0.5 / potential.curvature_bound(range).max(1.0)
            }
            Model::GinzburgLandau { alpha } => {
                0.5 / ((1.0 + alpha * alpha).sqrt() * 3.0 * range * range)
            }
            Model::NonlinearDiffusion { diffusivity } => {
                let excess = diffusivity.max_on(range) - diffusivity.min_on(range);
                if excess <= 0.0 {
                    return 1.0;
                }
                let h = domain.spacing().into_iter().fold(f64::INFINITY, f64::min);
                (0.25 * h * h / (domain.dim() as f64 * excess)).min(1.0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelState {
    pub model: Model,
    pub fields: Vec<ScalarField>,
    pub time: f64,
}

impl ModelState {
    pub fn new(model: Model, fields: Vec<ScalarField>) -> Result<Self> {
        model.validate()?;
        let names = model.field_names();
        if fields.len() != names.len() {
            return Err(Error::Domain(format!(
                "{} expects {} fields, got {}",
                model.id().as_str(),
                names.len(),
                fields.len()
            )));
        }
        let domain = &fields[0].domain;
        for f in &fields {
            if &f.domain != domain {
                return Err(Error::Domain("all model fields must share one grid".into()));
            }
            if !f.is_finite() {
                return Err(Error::Domain("model fields must be finite".into()));
            }
        }
        let time = fields[0].time;
        Ok(Self {
            model,
            fields,
            time,
        })
    }

    /// Damped wave with u_t ≡ 0, or the complex field with zero imaginary part.
    pub fn from_primary(model: Model, u: ScalarField) -> Result<Self> {
        let fields = match model.id() {
            ModelId::DampedWave | ModelId::GinzburgLandau => {
                let z = u.with_values(vec![0.0; u.values.len()]);
                vec![u, z]
            }
            _ => vec![u],
        };
        Self::new(model, fields)
    }

    pub fn domain(&self) -> &Domain {
        &self.fields[0].domain
    }

    pub fn u(&self) -> &ScalarField {
        &self.fields[0]
    }

    pub fn sup_amplitude(&self) -> f64 {
        match self.model.id() {
            ModelId::GinzburgLandau => {
                let (re, im) = (&self.fields[0].values, &self.fields[1].values);
                re.iter()
                    .zip(im)
                    .map(|(a, b)| a.hypot(*b))
                    .fold(0.0, f64::max)
            }
            _ => self.fields[0].max_abs(),
        }
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
        for f in &mut self.fields {
            f.time = t;
        }
    }

    pub fn max_stable_dt(&self) -> f64 {
        self.model
            .max_stable_dt(self.domain(), self.sup_amplitude())
    }
}
