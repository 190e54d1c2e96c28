//! Slow, independent reference computations for tests.
//!
//! Nothing here shares code with `fluxlab-core`; every routine is a direct,
//! brute-force evaluation of a defining formula.

pub mod frozen;
pub mod kernel;

/// Adaptive Simpson with Richardson correction.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Γ(α) from its defining integral, split at t = 1 and substituted to
/// remove the endpoint singularity for α < 1.
pub fn gamma_integral(alpha: f64) -> f64 {
    // ∫₀¹ t^{α−1}e^{−t} dt with t = s^{1/α}: (1/α)∫₀¹ e^{−s^{1/α}} ds
    let head = simpson(&|s: f64| (-(s.powf(1.0 / alpha))).exp(), 0.0, 1.0, 1e-15) / alpha;
    let tail = simpson(
        &|t: f64| t.powf(alpha - 1.0) * (-t).exp(),
        1.0,
        200.0,
        1e-15,
    );
    head + tail
}

/// K_ν(r) = ∫₀^∞ e^{−r cosh t} cosh(νt) dt by the trapezoid rule, which is
/// spectrally accurate for this doubly-exponentially decaying integrand.
pub fn bessel_k_trapezoid(nu: f64, r: f64) -> f64 {
    let step = 1e-3;
    let mut sum = 0.5 * (-r).exp();
    let mut k = 1;
    loop {
        let t = k as f64 * step;
        let v = (-r * t.cosh()).exp() * (nu * t).cosh();
        sum += v;
        if t > 1.0 && v < 1e-40 * sum {
            break;
        }
        k += 1;
    }
    sum * step
}

/// Spectral derivative of periodic samples on [0, L) by a direct O(n²) DFT.
pub fn dft_derivative(values: &[f64], length: f64, order: u32) -> Vec<f64> {
    let n = values.len();
    let tau = std::f64::consts::TAU;
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    for k in 0..n {
        for (j, v) in values.iter().enumerate() {
            let ang = -tau * (k * j) as f64 / n as f64;
            re[k] += v * ang.cos();
            im[k] += v * ang.sin();
        }
    }
    let mut out = vec![0.0; n];
    for (k, (ar, ai)) in re.iter().zip(&im).enumerate() {
        let kk = if k <= n / 2 {
            k as f64
        } else {
            k as f64 - n as f64
        };
        if n % 2 == 0 && k == n / 2 && order % 2 == 1 {
            continue;
        }
        let w = tau * kk / length;
        // (i w)^order
        let (mut cr, mut ci) = (1.0, 0.0);
        for _ in 0..order {
            let t = -ci * w;
            ci = cr * w;
            cr = t;
        }
        let br = ar * cr - ai * ci;
        let bi = ar * ci + ai * cr;
        for (j, o) in out.iter_mut().enumerate() {
            let ang = tau * (k * j) as f64 / n as f64;
            *o += (br * ang.cos() - bi * ang.sin()) / n as f64;
        }
    }
    out
}

/// ∫ over the disc |x − c| < R of f by a dense midpoint subgrid.
pub fn disc_integral_subgrid<F: Fn(f64, f64) -> f64>(
    f: &F,
    cx: f64,
    cy: f64,
    radius: f64,
    m: usize,
) -> f64 {
    let h = 2.0 * radius / m as f64;
    let mut s = 0.0;
    for i in 0..m {
        let x = -radius + (i as f64 + 0.5) * h;
        for j in 0..m {
            let y = -radius + (j as f64 + 0.5) * h;
            if x * x + y * y < radius * radius {
                s += f(cx + x, cy + y);
            }
        }
    }
    s * h * h
}

/// ∮_{|x|=R} F·x/|x| dσ by a dense trapezoid rule on the exact field.
pub fn circle_flux<F: Fn(f64, f64) -> (f64, f64)>(f: &F, radius: f64, m: usize) -> f64 {
    let mut s = 0.0;
    for k in 0..m {
        let th = std::f64::consts::TAU * k as f64 / m as f64;
        let (c, sn) = (th.cos(), th.sin());
        let (fx, fy) = f(radius * c, radius * sn);
        s += fx * c + fy * sn;
    }
    s * std::f64::consts::TAU * radius / m as f64
}
