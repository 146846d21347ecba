//! Exponential integral `E₁(x) = ∫ₓ^∞ e^(−s)/s ds` for real `x > 0`.
//!
//! Power series below `x = 1`, modified Lentz evaluation of the continued
//! fraction above. Both branches reach ~1e-15 relative accuracy.

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const MAX_TERMS: usize = 400;
const TINY: f64 = 1e-300;

pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain {
            func: "E1",
            arg: x,
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x <= 1.0 {
        Ok(series(x))
    } else if x > 740.0 {
        // e^(−x) underflows; E₁ < e^(−x)/x.
        Ok(0.0)
    } else {
        Ok(continued_fraction(x))
    }
}

// E₁(x) = −γ − ln x − Σ_{k≥1} (−x)^k / (k·k!)
fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0; // (−x)^k / k!
    for k in 1..MAX_TERMS {
        term *= -x / k as f64;
        let contrib = term / k as f64;
        sum += contrib;
        if contrib.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// E₁(x) = e^(−x) · 1/(x+1− 1²/(x+3− 2²/(x+5− …)))
fn continued_fraction(x: f64) -> f64 {
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}
