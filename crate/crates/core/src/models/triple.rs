use super::state::{Model, ModelId, ModelState};
use crate::grids::stencil::{div_a_grad, gradient, laplacian_values};
use crate::grids::{ball_integral, Budget, EnergyTriple, ScalarField, VectorField};
use crate::{Error, Result};

fn expect(state: &ModelState, id: ModelId) -> Result<()> {
    if state.model.id() != id {
        return Err(Error::Domain(format!(
            "expected a {} state, got {}",
            id.as_str(),
            state.model.id().as_str()
        )));
    }
    Ok(())
}

fn scalar(like: &ScalarField, values: Vec<f64>) -> ScalarField {
    like.with_values(values)
}

fn vector(like: &ScalarField, components: Vec<Vec<f64>>) -> VectorField {
    VectorField {
        domain: like.domain.clone(),
        components,
        time: like.time,
    }
}

/// Right-hand side of the evolution for the primary field(s).
pub fn time_derivative(state: &ModelState) -> Result<Vec<Vec<f64>>> {
    let d = state.domain();
    Ok(match &state.model {
        Model::ReactionDiffusion { potential } => {
            let u = &state.fields[0].values;
            let lap = laplacian_values(d, u);
            vec![lap
                .iter()
                .zip(u)
                .map(|(l, x)| l - potential.derivative(*x))
                .collect()]
        }
        Model::DampedWave { alpha, potential } => {
            let (u, w) = (&state.fields[0].values, &state.fields[1].values);
            let (lu, lw) = (laplacian_values(d, u), laplacian_values(d, w));
            let wt = (0..u.len())
                .map(|k| lu[k] - w[k] + alpha * lw[k] - potential.derivative(u[k]))
                .collect();
            vec![w.clone(), wt]
        }
        Model::GinzburgLandau { alpha } => {
            let (re, im) = (&state.fields[0].values, &state.fields[1].values);
            let (lr, li) = (laplacian_values(d, re), laplacian_values(d, im));
            let mut vt_re = Vec::with_capacity(re.len());
            let mut vt_im = Vec::with_capacity(re.len());
            for k in 0..re.len() {
                let s = 1.0 - re[k] * re[k] - im[k] * im[k];
                let (gr, gi) = (lr[k] + s * re[k], li[k] + s * im[k]);
                vt_re.push(gr - alpha * gi);
                vt_im.push(gi + alpha * gr);
            }
            vec![vt_re, vt_im]
        }
        Model::NonlinearDiffusion { .. } => {
            let a = positive_diffusivity(state)?;
            vec![div_a_grad(d, &a, &state.fields[0].values)]
        }
    })
}

fn positive_diffusivity(state: &ModelState) -> Result<Vec<f64>> {
    let Model::NonlinearDiffusion { diffusivity } = &state.model else {
        unreachable!()
    };
    let a: Vec<f64> = state.fields[0]
        .values
        .iter()
        .map(|&u| diffusivity.eval(u))
        .collect();
    if let Some(k) = a.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::Precondition(format!(
            "diffusivity a(u) = {} is not positive at cell {k} (u = {})",
            a[k], state.fields[0].values[k]
        )));
    }
    Ok(a)
}

pub fn rd_energy_triple(state: &ModelState) -> Result<EnergyTriple> {
    expect(state, ModelId::ReactionDiffusion)?;
    let Model::ReactionDiffusion { potential } = &state.model else {
        unreachable!()
    };
    let u = &state.fields[0];
    let ut = time_derivative(state)?.remove(0);
    let g = gradient(u);
    let n = u.values.len();
    let e = (0..n)
        .map(|k| 0.5 * g.norm_sq_at(k) + potential.value(u.values[k]))
        .collect();
    let f = g
        .components
        .iter()
        .map(|c| c.iter().zip(&ut).map(|(a, b)| a * b).collect())
        .collect();
    let d = ut.iter().map(|v| v * v).collect();
    Ok(EnergyTriple {
        e: scalar(u, e),
        f: vector(u, f),
        d: scalar(u, d),
        budget: Budget::Linear { factor: 2.0 },
    })
}

pub fn dw_energy_triple(state: &ModelState) -> Result<EnergyTriple> {
    expect(state, ModelId::DampedWave)?;
    let Model::DampedWave { alpha, potential } = &state.model else {
        unreachable!()
    };
    let (u, w) = (&state.fields[0], &state.fields[1]);
    let (gu, gw) = (gradient(u), gradient(w));
    let n = u.values.len();
    let e = (0..n)
        .map(|k| 0.5 * w.values[k].powi(2) + 0.5 * gu.norm_sq_at(k) + potential.value(u.values[k]))
        .collect();
    let f = (0..gu.components.len())
        .map(|c| {
            (0..n)
                .map(|k| w.values[k] * (gu.components[c][k] + alpha * gw.components[c][k]))
                .collect()
        })
        .collect();
    let d = (0..n)
        .map(|k| w.values[k].powi(2) + alpha * gw.norm_sq_at(k))
        .collect();
    Ok(EnergyTriple {
        e: scalar(u, e),
        f: vector(u, f),
        d: scalar(u, d),
        budget: Budget::Linear {
            factor: 2.0 * alpha.max(1.0),
        },
    })
}

pub fn cgl_energy_triple(state: &ModelState) -> Result<EnergyTriple> {
    expect(state, ModelId::GinzburgLandau)?;
    let Model::GinzburgLandau { alpha } = &state.model else {
        unreachable!()
    };
    let (re, im) = (&state.fields[0], &state.fields[1]);
    let vt = time_derivative(state)?;
    let (gr, gi) = (gradient(re), gradient(im));
    let n = re.values.len();
    let e = (0..n)
        .map(|k| {
            let m = re.values[k].powi(2) + im.values[k].powi(2);
            0.5 * (gr.norm_sq_at(k) + gi.norm_sq_at(k)) + 0.25 * (1.0 - m).powi(2)
        })
        .collect();
    // Re(v_t ∇v̄) = Re v_t ∇Re v + Im v_t ∇Im v
    let f = (0..gr.components.len())
        .map(|c| {
            (0..n)
                .map(|k| vt[0][k] * gr.components[c][k] + vt[1][k] * gi.components[c][k])
                .collect()
        })
        .collect();
    let scale = 1.0 / (1.0 + alpha * alpha);
    let d = (0..n)
        .map(|k| scale * (vt[0][k].powi(2) + vt[1][k].powi(2)))
        .collect();
    Ok(EnergyTriple {
        e: scalar(re, e),
        f: vector(re, f),
        d: scalar(re, d),
        budget: Budget::Linear {
            factor: 2.0 * (1.0 + alpha * alpha),
        },
    })
}

/// Number of samples used for the cached sup-of-a budget.
pub const DIFFUSIVITY_SAMPLES: usize = 2049;

pub fn nld_energy_triple(state: &ModelState) -> Result<EnergyTriple> {
    expect(state, ModelId::NonlinearDiffusion)?;
    let Model::NonlinearDiffusion { diffusivity } = &state.model else {
        unreachable!()
    };
    let u = &state.fields[0];
    let a = positive_diffusivity(state)?;
    let n = u.values.len();
    let grads = gradient(u).components;
    let e = u.values.iter().map(|v| 0.5 * v * v).collect();
    let f = grads
        .iter()
        .map(|g| (0..n).map(|k| u.values[k] * a[k] * g[k]).collect())
        .collect();
    let d = (0..n)
        .map(|k| a[k] * grads.iter().map(|g| g[k] * g[k]).sum::<f64>())
        .collect();
    let range = u.max_abs() * (1.0 + 1e-9) + 1e-12;
    let us: Vec<f64> = (0..DIFFUSIVITY_SAMPLES)
        .map(|i| -range + 2.0 * range * i as f64 / (DIFFUSIVITY_SAMPLES - 1) as f64)
        .collect();
    let as_: Vec<f64> = us.iter().map(|&x| diffusivity.eval(x)).collect();
    if as_.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Precondition(format!(
            "diffusivity is not positive on [-{range}, {range}]"
        )));
    }
    Ok(EnergyTriple {
        e: scalar(u, e),
        f: vector(u, f),
        d: scalar(u, d),
        budget: Budget::SampledSup { u: us, a: as_ },
    })
}

pub fn energy_triple(state: &ModelState) -> Result<EnergyTriple> {
    match state.model.id() {
        ModelId::ReactionDiffusion => rd_energy_triple(state),
        ModelId::DampedWave => dw_energy_triple(state),
        ModelId::GinzburgLandau => cgl_energy_triple(state),
        ModelId::NonlinearDiffusion => nld_energy_triple(state),
    }
}

/// Λ_R(d) < ε for the ball of radius R at the origin.
pub fn is_near_equilibrium(state: &ModelState, epsilon: f64, radius: f64) -> Result<bool> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let t = energy_triple(state)?;
    Ok(ball_integral(&t.d, radius, [0.0, 0.0])? < epsilon)
}
