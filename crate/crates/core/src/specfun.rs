//! Special functions: associated Laguerre polynomials, log-factorials,
//! upper incomplete gamma at non-positive integer order and the Meijer-G
//! density `G^{2,0}_{1,2}(x | n; 0, 0)` of the completeness measure.
//!
//! All functions are pure and allocation-free.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Binary exponent step used when rescaling the Laguerre recurrence.
const RESCALE_BITS: i32 = 600;

/// Associated Laguerre polynomial `L^k_n(y)` by the three-term recurrence
/// `(j+1) L_{j+1} = (2j+k+1-y) L_j - (j+k) L_{j-1}`.
///
/// Overflows only when the true value exceeds `f64::MAX`; use
/// [`laguerre_scaled`] or [`laguerre_ratio`] for large degrees and arguments.
pub fn laguerre_assoc(n: usize, k: usize, y: f64) -> f64 {
    let (m, e) = laguerre_scaled(n, k, y);
    if e == 0 {
        m
    } else {
        m * 2f64.powi(e)
    }
}

/// `L^k_n(y)` as `mantissa * 2^exp2`, so that values far beyond the `f64`
/// range can still be divided into each other.
pub fn laguerre_scaled(n: usize, k: usize, y: f64) -> (f64, i32) {
    if n == 0 {
        return (1.0, 0);
    }
    let kf = k as f64;
    let mut prev = 1.0;
    let mut cur = 1.0 + kf - y;
    let mut exp2 = 0;
    let threshold = 2f64.powi(RESCALE_BITS);
    let shrink = 2f64.powi(-RESCALE_BITS);
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + kf + 1.0 - y) * cur - (jf + kf) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > threshold {
            cur *= shrink;
            prev *= shrink;
            exp2 += RESCALE_BITS;
        }
    }
    (cur, exp2)
}

/// Ratio `L^{k1}_{n1}(y) / L^{k2}_{n2}(y)` evaluated without forming either
/// value in full.
pub fn laguerre_ratio(n1: usize, k1: usize, n2: usize, k2: usize, y: f64) -> f64 {
    let (m1, e1) = laguerre_scaled(n1, k1, y);
    let (m2, e2) = laguerre_scaled(n2, k2, y);
    (m1 / m2) * 2f64.powi(e1 - e2)
}

/// Natural log of `L^k_n(-x)` for `x >= 0`, where the polynomial is a sum of
/// positive terms.
pub fn ln_laguerre_neg(n: usize, k: usize, x: f64) -> f64 {
    let (m, e) = laguerre_scaled(n, k, -x);
    m.ln() + e as f64 * std::f64::consts::LN_2
}

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(171);
        let mut fact = 1.0f64;
        t.push(0.0);
        for k in 1..=170u32 {
            fact *= k as f64;
            t.push(fact.ln());
        }
        t
    })
}

/// `ln(n!)`.
pub fn log_factorial(n: usize) -> f64 {
    let table = ln_factorial_table();
    if n < table.len() {
        return table[n];
    }
    // Stirling series for ln Γ(x), x = n + 1 > 171.
    let x = n as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// `n!` as a float (exact for `n <= 22`).
pub fn factorial(n: usize) -> f64 {
    if n <= 170 {
        (1..=n).fold(1.0, |acc, k| acc * k as f64)
    } else {
        f64::INFINITY
    }
}

/// Binomial coefficient `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exponential integral `E1(x) = Γ(0, x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> f64 {
    if x <= 1.0 {
        e1_series(x)
    } else {
        scaled_upper_gamma_cf(0.0, x) * (-x).exp()
    }
}

fn e1_series(x: f64) -> f64 {
    // E1(x) = -γ - ln x - Σ_{k≥1} (-x)^k / (k k!)
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -x / kf;
        let add = term / kf;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// `e^x x^{-a} Γ(a, x)` by the Legendre continued fraction (modified Lentz).
/// Converges quickly for `x > 1` whenever `a <= 1`.
fn scaled_upper_gamma_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let fi = i as f64;
        let an = -fi * (fi - a);
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
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// `e^x Γ(-j, x)` for `x > 0`; the exponential scaling keeps the value
/// representable for large `x`.
pub fn upper_gamma_nonpos_scaled(j: usize, x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "upper incomplete gamma of order -{j} needs x > 0, got {x}"
        )));
    }
    if x > 1.0 {
        // The continued fraction returns e^x x^{-a} Γ(a, x) with a = -j.
        let a = -(j as f64);
        return Ok(scaled_upper_gamma_cf(a, x) * x.powf(a));
    }
    // Small x: Γ(-j, x) = (x^{-j} e^{-x} - Γ(1-j, x)) / j, seeded by E1.
    // Each step damps the error by x / j <= 1.
    let mut g = e1_series(x) * x.exp();
    let mut xpow = 1.0;
    for i in 1..=j {
        xpow /= x;
        g = (xpow - g) / i as f64;
    }
    Ok(g)
}

/// Upper incomplete gamma `Γ(-j, x) = ∫_x^∞ t^{-j-1} e^{-t} dt`, `x > 0`.
pub fn upper_gamma_nonpos(j: usize, x: f64) -> Result<f64> {
    Ok(upper_gamma_nonpos_scaled(j, x)? * (-x).exp())
}

/// `e^x G^{2,0}_{1,2}(x | n; 0, 0)`.
///
/// For `n >= 1` the Mellin transform `Γ(s)² / Γ(n+s)` splits into partial
/// fractions, giving `Σ_{j<n} A_j x^j Γ(-j, x)` with
/// `A_j = (-1)^j / (j! (n-1-j)!)`.
pub fn meijer_density_scaled(n: usize, x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "Meijer density needs x >= 0, got {x}"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    if x == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut sum = 0.0;
    let mut xpow = 1.0;
    for j in 0..n {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign / (factorial(j) * factorial(n - 1 - j));
        sum += coeff * xpow * upper_gamma_nonpos_scaled(j, x)?;
        xpow *= x;
    }
    Ok(sum)
}

/// `G^{2,0}_{1,2}(x | n; 0, 0)`: the function whose Mellin transform is
/// `Γ(s)² / Γ(n+s)`. Equals `e^{-x}` for `n = 0` and `Γ(0, x)` for `n = 1`.
/// Diverges logarithmically at `x = 0` for `n >= 1`.
pub fn meijer_density(n: usize, x: f64) -> Result<f64> {
    Ok(meijer_density_scaled(n, x)? * (-x).exp())
}
