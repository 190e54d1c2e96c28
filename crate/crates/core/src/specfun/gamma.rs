use crate::{Error, Result};
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument whose Γ is representable as f64.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// Γ(α) for α > 0 by the Lanczos approximation (g = 7, n = 9).
pub fn gamma_fn(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || alpha.is_nan() {
        return Err(Error::Domain(format!("gamma needs alpha > 0, got {alpha}")));
    }
    if alpha > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("gamma({alpha}) exceeds f64 range")));
    }
    if alpha == alpha.floor() && alpha <= 30.0 {
        let mut f = 1.0;
        for k in 2..(alpha as u64) {
            f *= k as f64;
        }
        return Ok(f);
    }
    Ok(lanczos(alpha))
}

fn lanczos(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * lanczos(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let half = ((x + 0.5) * 0.5) * t.ln() - 0.5 * t;
    let e = half.exp();
    (2.0 * PI).sqrt() * e * e * a
}
