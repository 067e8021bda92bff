//! Adaptive Dormand-Prince 5(4) integration for matrix-valued linear ODEs.
//!
//! The master equation dX/dt = L[X] is autonomous and linear, so the only
//! state is the matrix itself. The integrator works on raw complex matrices;
//! the right-hand side is supplied as a closure, which lets the Liouvillian
//! apply its generator in d x d matrix form instead of multiplying by the
//! d^2 x d^2 superoperator.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::{Error, Result};

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;
const MAX_STEPS: usize = 50_000_000;

// Dormand-Prince 5(4) tableau.
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
// Fifth-order solution weights (row 7 of A; the method is FSAL).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn lin_comb(base: &Array2<C64>, h: f64, terms: &[(f64, &Array2<C64>)]) -> Array2<C64> {
    let mut out = base.clone();
    for &(w, k) in terms {
        out.zip_mut_with(k, |o, &v| *o += C64::new(h * w, 0.0) * v);
    }
    out
}

/// Integrate dX/dt = rhs(X) from `x0` over `t_span >= 0`.
///
/// The error per step is controlled against `atol + rtol * |x|` elementwise.
/// `atol` is derived from the initial magnitude so that matrix elements far
/// below the working scale do not throttle the step size.
pub fn integrate<F>(rhs: F, x0: &Array2<C64>, t_span: f64, rtol: f64) -> Result<Array2<C64>>
where
    F: Fn(&Array2<C64>) -> Array2<C64>,
{
    let mut observer = |_t: f64, _x: &Array2<C64>| {};
    integrate_observed(rhs, x0, &[t_span], rtol, &mut observer).map(|mut v| v.pop().expect("one output"))
}

/// Integrate through an increasing list of output times, returning the state
/// at each of them. Steps are clipped to land exactly on the requested times.
pub fn integrate_observed<F, O>(
    rhs: F,
    x0: &Array2<C64>,
    times: &[f64],
    rtol: f64,
    observer: &mut O,
) -> Result<Vec<Array2<C64>>>
where
    F: Fn(&Array2<C64>) -> Array2<C64>,
    O: FnMut(f64, &Array2<C64>),
{
    assert!(!times.is_empty(), "need at least one output time");
    assert!(times.windows(2).all(|w| w[1] >= w[0]), "output times must be nondecreasing");
    assert!(times[0] >= 0.0, "output times must be nonnegative");

    let scale_ref = x0.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let atol = (rtol * scale_ref * 1e-3).max(f64::MIN_POSITIVE);
    let t_end = *times.last().expect("nonempty");

    let mut outputs = Vec::with_capacity(times.len());
    let mut x = x0.clone();
    let mut t = 0.0f64;
    let mut k1 = rhs(&x);
    let mut next_out = 0usize;

    // Initial step from the magnitude of the derivative.
    let d0 = x.iter().map(|z| z.norm()).fold(0.0, f64::max).max(atol);
    let d1 = k1.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut h_nat = if d1 > 0.0 { (0.01 * d0 / d1).min(t_end - t) } else { t_end - t };
    h_nat = h_nat.max(f64::MIN_POSITIVE);

    let mut steps = 0usize;
    loop {
        // Emit outputs the integration has reached (handles duplicates).
        while next_out < times.len() && times[next_out] <= t + f64::EPSILON * t.max(1.0) {
            observer(t, &x);
            outputs.push(x.clone());
            next_out += 1;
        }
        if next_out == times.len() {
            break;
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::StepSizeUnderflow { t, h: h_nat });
        }
        let h = h_nat.min(times[next_out] - t);
        if h < 1e-15 * t_end {
            return Err(Error::StepSizeUnderflow { t, h });
        }

        let k2 = rhs(&lin_comb(&x, h, &[(A21, &k1)]));
        let k3 = rhs(&lin_comb(&x, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(&lin_comb(&x, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(&lin_comb(&x, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = rhs(&lin_comb(&x, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let x_next = lin_comb(&x, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(&x_next);

        // Elementwise error estimate against the mixed tolerance.
        let mut err_sq = 0.0f64;
        let n = x.len() as f64;
        {
            let xs = x.as_slice().expect("contiguous");
            let x1s = x_next.as_slice().expect("contiguous");
            let (k1s, k3s, k4s, k5s, k6s, k7s) = (
                k1.as_slice().expect("contiguous"),
                k3.as_slice().expect("contiguous"),
                k4.as_slice().expect("contiguous"),
                k5.as_slice().expect("contiguous"),
                k6.as_slice().expect("contiguous"),
                k7.as_slice().expect("contiguous"),
            );
            for i in 0..xs.len() {
                let err = C64::new(h, 0.0)
                    * (C64::new(E1, 0.0) * k1s[i]
                        + C64::new(E3, 0.0) * k3s[i]
                        + C64::new(E4, 0.0) * k4s[i]
                        + C64::new(E5, 0.0) * k5s[i]
                        + C64::new(E6, 0.0) * k6s[i]
                        + C64::new(E7, 0.0) * k7s[i]);
                let sc = atol + rtol * xs[i].norm().max(x1s[i].norm());
                let r = err.norm() / sc;
                err_sq += r * r;
            }
        }
        let err_norm = (err_sq / n).sqrt();

        if err_norm <= 1.0 {
            t += h;
            x = x_next;
            k1 = k7; // FSAL
        }
        let scale = if err_norm > 0.0 {
            SAFETY * err_norm.powf(-0.2)
        } else {
            MAX_SCALE
        };
        h_nat = h * scale.clamp(MIN_SCALE, MAX_SCALE);
    }

    Ok(outputs)
}
