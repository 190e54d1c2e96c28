//! Adaptive Dormand–Prince 5(4) for scalar ODEs, forward or backward in t.

#[derive(Debug, Clone, Copy)]
pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step magnitude; 0 picks one from the interval length.
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 0.0,
            h_max: f64::INFINITY,
            h_min: 1e-14,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Halt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndReason {
    Reached,
    Halted,
    StepUnderflow,
    NonFinite,
}

#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub t: f64,
    pub y: f64,
    pub reason: EndReason,
    /// Suggested magnitude for the next step.
    pub h_next: f64,
    pub steps: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One step; returns (y_new, f(t+h, y_new), error estimate).
fn step<F: Fn(f64, f64) -> f64>(f: &F, t: f64, y: f64, k1: f64, h: f64) -> (f64, f64, f64) {
    let k2 = f(t + C2 * h, y + h * A21 * k1);
    let k3 = f(t + C3 * h, y + h * (A31 * k1 + A32 * k2));
    let k4 = f(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
    let k5 = f(
        t + C5 * h,
        y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4),
    );
    let k6 = f(
        t + h,
        y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
    );
    let y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    let k7 = f(t + h, y_new);
    let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    (y_new, k7, err)
}

/// Integrates `y' = f(t, y)` from `(t0, y0)` to `t_end`, landing on `t_end`
/// exactly. `observe` sees every accepted point and may halt the run.
pub fn integrate<F, O>(
    f: F,
    t0: f64,
    y0: f64,
    t_end: f64,
    opts: &Dopri5Options,
    mut observe: O,
) -> Segment
where
    F: Fn(f64, f64) -> f64,
    O: FnMut(f64, f64) -> Control,
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut h = if opts.h_init > 0.0 {
        opts.h_init
    } else {
        (span * 1e-3).max(opts.h_min)
    };
    h = h.min(opts.h_max).min(span.max(opts.h_min));
    let mut k1 = f(t, y);
    let mut steps = 0;
    if span == 0.0 {
        return Segment {
            t,
            y,
            reason: EndReason::Reached,
            h_next: h,
            steps,
        };
    }
    loop {
        let remaining = (t_end - t).abs();
        let last = h >= remaining;
        let h_try = if last { remaining } else { h };
        if !k1.is_finite() || !y.is_finite() {
            return Segment {
                t,
                y,
                reason: EndReason::NonFinite,
                h_next: h,
                steps,
            };
        }
        let (y_new, k_new, err) = step(&f, t, y, k1, dir * h_try);
        let scale = opts.atol + opts.rtol * y.abs().max(y_new.abs());
        let ratio = if y_new.is_finite() && err.is_finite() {
            err.abs() / scale
        } else {
            f64::INFINITY
        };
        if ratio <= 1.0 {
            t = if last { t_end } else { t + dir * h_try };
            y = y_new;
            k1 = k_new;
            steps += 1;
            let grow = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            if !last || h_try == h {
                h = (h_try * grow).min(opts.h_max);
            }
            if observe(t, y) == Control::Halt {
                return Segment {
                    t,
                    y,
                    reason: EndReason::Halted,
                    h_next: h,
                    steps,
                };
            }
            if last {
                return Segment {
                    t,
                    y,
                    reason: EndReason::Reached,
                    h_next: h,
                    steps,
                };
            }
        } else {
            let shrink = if ratio.is_finite() {
                (0.9 * ratio.powf(-0.25)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h = h_try * shrink;
            if h < opts.h_min {
                return Segment {
                    t,
                    y,
                    reason: EndReason::StepUnderflow,
                    h_next: h,
                    steps,
                };
            }
        }
    }
}
