use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`.
///
/// Power series for `x <= 1`, modified-Lentz continued fraction above.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain(format!("E1 requires x > 0, got {x}")));
    }
    Ok(if x <= 1.0 { series(x) } else { continued_fraction(x) })
}

fn series(x: f64) -> f64 {
    // E1(x) = -γ - ln x - Σ_{k>=1} (-x)^k / (k k!)
    let mut sum = 0.0;
    let mut term = 1.0; // (-x)^k / k!
    for k in 1..64 {
        term *= -x / k as f64;
        let contrib = term / k as f64;
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

fn continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}
