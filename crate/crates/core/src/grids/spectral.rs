//! Eigenbasis transforms of the discrete Laplacian: FFT on periodic axes,
//! DCT-II on Neumann axes (cell-centered mirror boundary).

use super::domain::{Boundary, Domain};
use num_complex::Complex64;
use rustdct::{DctPlanner, TransformType2And3};
use rustfft::{Fft, FftPlanner};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

#[derive(Clone)]
enum AxisPlan {
    Fourier {
        fwd: Arc<dyn Fft<f64>>,
        inv: Arc<dyn Fft<f64>>,
    },
    Cosine(Arc<dyn TransformType2And3<f64>>),
}

#[derive(Clone)]
pub struct Transform {
    shape: (usize, usize),
    plans: Vec<AxisPlan>,
    domain: Domain,
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform")
            .field("shape", &self.shape)
            .finish()
    }
}

impl Transform {
    pub fn new(domain: &Domain) -> Self {
        let mut fft = FftPlanner::new();
        let mut dct = DctPlanner::new();
        let plans = domain
            .axes
            .iter()
            .map(|a| match a.boundary {
                Boundary::Periodic => AxisPlan::Fourier {
                    fwd: fft.plan_fft_forward(a.points),
                    inv: fft.plan_fft_inverse(a.points),
                },
                Boundary::Neumann => AxisPlan::Cosine(dct.plan_dct2(a.points)),
            })
            .collect();
        Self {
            shape: domain.shape(),
            plans,
            domain: domain.clone(),
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.shape.0 * self.shape.1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn line(
        &self,
        plan: &AxisPlan,
        buf: &mut [Complex64],
        forward: bool,
        re: &mut [f64],
        im: &mut [f64],
    ) {
        let n = buf.len();
        match plan {
            AxisPlan::Fourier { fwd, inv } => {
                if forward {
                    fwd.process(buf);
                } else {
                    inv.process(buf);
                    let s = 1.0 / n as f64;
                    buf.iter_mut().for_each(|c| *c *= s);
                }
            }
            AxisPlan::Cosine(p) => {
                for (k, c) in buf.iter().enumerate() {
                    re[k] = c.re;
                    im[k] = c.im;
                }
                if forward {
                    p.process_dct2(re);
                    p.process_dct2(im);
                    for k in 0..n {
                        buf[k] = Complex64::new(re[k], im[k]);
                    }
                } else {
                    p.process_dct3(re);
                    p.process_dct3(im);
                    let s = 2.0 / n as f64;
                    for k in 0..n {
                        buf[k] = Complex64::new(re[k] * s, im[k] * s);
                    }
                }
            }
        }
    }

    fn apply(&self, data: &mut [Complex64], forward: bool) {
        let (nx, ny) = self.shape;
        assert_eq!(data.len(), nx * ny);
        if self.plans.len() == 2 {
            let mut re = vec![0.0; ny];
            let mut im = vec![0.0; ny];
            for row in data.chunks_mut(ny) {
                self.line(&self.plans[1], row, forward, &mut re, &mut im);
            }
        }
        let mut col = vec![Complex64::new(0.0, 0.0); nx];
        let mut re = vec![0.0; nx];
        let mut im = vec![0.0; nx];
        for j in 0..ny {
            for i in 0..nx {
                col[i] = data[i * ny + j];
            }
            self.line(&self.plans[0], &mut col, forward, &mut re, &mut im);
            for i in 0..nx {
                data[i * ny + j] = col[i];
            }
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.apply(data, true);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.apply(data, false);
    }

    pub fn forward_real(&self, values: &[f64]) -> Vec<Complex64> {
        let mut d: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut d);
        d
    }

    /// Symbol of the compact 3-point Laplacian for each flat mode index.
    pub fn laplacian_symbol(&self) -> Vec<f64> {
        let per_axis: Vec<Vec<f64>> = self
            .domain
            .axes
            .iter()
            .map(|a| {
                let n = a.points;
                let h2 = a.spacing().powi(2);
                (0..n)
                    .map(|k| {
                        let arg = match a.boundary {
                            Boundary::Periodic => PI * k as f64 / n as f64,
                            Boundary::Neumann => PI * k as f64 / (2 * n) as f64,
                        };
                        -4.0 / h2 * arg.sin().powi(2)
                    })
                    .collect()
            })
            .collect();
        combine(&per_axis, self.shape)
    }
}

fn combine(per_axis: &[Vec<f64>], shape: (usize, usize)) -> Vec<f64> {
    let (nx, ny) = shape;
    let mut out = vec![0.0; nx * ny];
    for i in 0..nx {
        for j in 0..ny {
            out[i * ny + j] = per_axis[0][i] + per_axis.get(1).map_or(0.0, |v| v[j]);
        }
    }
    out
}

/// Angular wavenumbers 2πk/L in FFT order; the Nyquist entry is reported
/// separately so odd derivatives can drop it.
pub fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let kk = if k <= n / 2 {
                k as f64
            } else {
                k as f64 - n as f64
            };
            TAU * kk / length
        })
        .collect()
}

/// Wavenumbers for first derivatives: the Nyquist mode of even n is zeroed.
pub fn derivative_wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let mut k = wavenumbers(n, length);
    if n % 2 == 0 {
        k[n / 2] = 0.0;
    }
    k
}
