//! State families and their closed-form scalars.
//!
//! - displaced number states `|α⟩^b_n = |n⟩_a ⊗ |α⟩_b`,
//! - two-variable coherent states `|β, α⟩ = |β⟩_a ⊗ |α⟩_b`,
//! - photon-added states `|β, α; n⟩ ∝ (a†)^n |β, α⟩`.
//!
//! Constructors fill the grid from closed-form coefficients. They do not
//! renormalize: the squared norm falls short of one by exactly the reported
//! tail mass, and construction fails if that tail exceeds [`MAX_TAIL`].

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::fock::{Cutoffs, Ladder, Mode, PhysicalScales, TwoModeState, MAX_TAIL};
use crate::specfun::{ln_laguerre_neg, log_factorial};
use crate::C64;

/// The triple `(β, α, n)` labelling a photon-added state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateLabel {
    pub beta: C64,
    pub alpha: C64,
    pub n_exc: usize,
}

impl StateLabel {
    pub fn new(beta: C64, alpha: C64, n_exc: usize) -> Result<Self> {
        for (name, z) in [("beta", beta), ("alpha", alpha)] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be finite, got {z}")));
            }
        }
        Ok(Self { beta, alpha, n_exc })
    }

    /// Cutoffs from the truncation rule for this label.
    pub fn cutoffs(&self) -> Cutoffs {
        Cutoffs::for_parameters(self.beta.norm(), self.alpha.norm(), self.n_exc)
    }
}

/// Parse `a+bi`, `a-bi`, `bi` or a plain real `a`. No whitespace.
pub fn parse_complex(s: &str) -> Result<C64> {
    let err = || Error::ComplexParse(s.to_string());
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(err());
    }
    let num = |t: &str| -> Result<f64> {
        if t.is_empty() || t == "+" || t == "-" {
            return Err(err());
        }
        let v: f64 = t.parse().map_err(|_| err())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(err())
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(C64::new(num(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(num(&body[..k])?, num(&body[k..])?)),
        None => Ok(C64::new(0.0, num(body)?)),
    }
}

fn check_tail(what: &'static str, lost: f64) -> Result<()> {
    if lost > MAX_TAIL {
        Err(Error::Truncation { what, lost, allowed: MAX_TAIL })
    } else {
        Ok(())
    }
}

/// Sum of `|c_k|²` for `k > cutoff`, continuing the ratio recurrence
/// `c_{k} = c_{k-1}·r(k)` until the terms are negligible.
fn tail_mass<F: Fn(usize) -> f64>(mut last: f64, cutoff: usize, ratio_sq: F) -> f64 {
    let mut sum = 0.0;
    let mut k = cutoff + 1;
    loop {
        last *= ratio_sq(k);
        sum += last;
        if last <= 1e-17 * sum.max(1e-300) && ratio_sq(k + 1) < 0.5 || last == 0.0 || k > cutoff + 100_000 {
            return sum;
        }
        k += 1;
    }
}

/// Coherent amplitudes `e^{-|z|²/2} z^k / √k!` for `k = 0..=cutoff`, with the
/// Poisson mass beyond the cutoff.
pub fn coherent_amplitudes(z: C64, cutoff: usize) -> (Vec<C64>, f64) {
    let x = z.norm_sqr();
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut cur = C64::new((-0.5 * x).exp(), 0.0);
    amps.push(cur);
    for k in 1..=cutoff {
        cur = cur * z / (k as f64).sqrt();
        amps.push(cur);
    }
    let tail = if x == 0.0 { 0.0 } else { tail_mass(cur.norm_sqr(), cutoff, |k| x / k as f64) };
    (amps, tail)
}

/// Mode-a amplitudes of the normalized photon-added state, indexed by
/// `n_a = 0..=cutoff` (zero below `n`): at `n_a = n + k` the coefficient is
/// `e^{-x/2} β^k √((n+k)!) / (k! √(n! L_n(-x)))`, `x = |β|²`.
pub fn pacs_mode_a_amplitudes(beta: C64, n: usize, cutoff: usize) -> (Vec<C64>, f64) {
    let x = beta.norm_sqr();
    let mut amps = vec![C64::new(0.0, 0.0); cutoff + 1];
    let a0 = (-0.5 * x - 0.5 * ln_laguerre_neg(n, 0, x)).exp();
    if cutoff < n {
        return (amps, 1.0);
    }
    let mut cur = C64::new(a0, 0.0);
    amps[n] = cur;
    for k in 1..=(cutoff - n) {
        cur = cur * beta * ((n + k) as f64).sqrt() / k as f64;
        amps[n + k] = cur;
    }
    let tail = if x == 0.0 {
        0.0
    } else {
        tail_mass(cur.norm_sqr(), cutoff, |na| x * na as f64 / ((na - n) as f64).powi(2))
    };
    (amps, tail)
}

fn outer(a: &[C64], b: &[C64], tail_a: f64, tail_b: f64) -> TwoModeState {
    let amps = Array2::from_shape_fn((a.len(), b.len()), |(i, j)| a[i] * b[j]);
    TwoModeState::from_parts(amps, tail_a + tail_b - tail_a * tail_b).expect("finite amplitudes")
}

/// `|α⟩^b_n`: Fock state `n` in mode a times coherent `α` in mode b.
pub fn displaced_number_state(alpha: C64, n: usize, cutoffs: Cutoffs) -> Result<TwoModeState> {
    if n > cutoffs.a {
        return Err(Error::Truncation { what: "displaced number state level", lost: 1.0, allowed: MAX_TAIL });
    }
    let (b, tail_b) = coherent_amplitudes(alpha, cutoffs.b);
    check_tail("displaced number state", tail_b)?;
    let mut a = vec![C64::new(0.0, 0.0); cutoffs.a + 1];
    a[n] = C64::new(1.0, 0.0);
    Ok(outer(&a, &b, 0.0, tail_b))
}

/// `|β, α⟩`.
pub fn two_variable_cs(beta: C64, alpha: C64, cutoffs: Cutoffs) -> Result<TwoModeState> {
    let (a, tail_a) = coherent_amplitudes(beta, cutoffs.a);
    let (b, tail_b) = coherent_amplitudes(alpha, cutoffs.b);
    let s = outer(&a, &b, tail_a, tail_b);
    check_tail("two-variable coherent state", s.tail_bound())?;
    Ok(s)
}

/// Normalized `|β, α; n⟩`.
pub fn pacs_state(label: &StateLabel, cutoffs: Cutoffs) -> Result<TwoModeState> {
    let (a, tail_a) = pacs_mode_a_amplitudes(label.beta, label.n_exc, cutoffs.a);
    let (b, tail_b) = coherent_amplitudes(label.alpha, cutoffs.b);
    let s = outer(&a, &b, tail_a, tail_b);
    check_tail("photon-added state", s.tail_bound())?;
    Ok(s)
}

/// `(a†)^n |β, α⟩` built by repeated ladder action, without normalization.
pub fn photon_added_by_ladder(label: &StateLabel, cutoffs: Cutoffs) -> Result<TwoModeState> {
    let mut s = two_variable_cs(label.beta, label.alpha, cutoffs)?;
    for _ in 0..label.n_exc {
        s = s.apply_ladder(Mode::A, Ladder::Raise)?;
    }
    Ok(s)
}

/// `⟨β, α| a^n a†^n |β, α⟩ = n! L_n(-|β|²)`.
pub fn pacs_norm_analytic(beta: C64, n_exc: usize) -> f64 {
    (log_factorial(n_exc) + ln_laguerre_neg(n_exc, 0, beta.norm_sqr())).exp()
}

/// `⟨β, α; n2 | β, α; n1⟩`.
///
/// For `n1 >= n2` this is `β̄^{n1-n2} n2! L^{n1-n2}_{n2}(-x) / √(n1! L_{n1}(-x) n2! L_{n2}(-x))`;
/// the other order follows by conjugation.
pub fn overlap_analytic(beta: C64, n1: usize, n2: usize) -> C64 {
    if n1 < n2 {
        return overlap_analytic(beta, n2, n1).conj();
    }
    let d = n1 - n2;
    let x = beta.norm_sqr();
    if d == 0 {
        return C64::new(1.0, 0.0);
    }
    if x == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let ln_mag = d as f64 * beta.norm().ln() + log_factorial(n2) + ln_laguerre_neg(n2, d, x)
        - 0.5 * (log_factorial(n1) + ln_laguerre_neg(n1, 0, x) + log_factorial(n2) + ln_laguerre_neg(n2, 0, x));
    C64::from_polar(ln_mag.exp(), -(d as f64) * beta.arg())
}

/// Free evolution of a photon-added state: `e^{-iHt/ħ}|β, α; n⟩` equals
/// `phase · |β e^{-iωt}, α; n⟩` with `phase = e^{-i(n+½)ωt}`.
pub fn evolve_label(label: &StateLabel, t: f64, scales: &PhysicalScales) -> (C64, StateLabel) {
    let wt = scales.omega * t;
    let phase = C64::from_polar(1.0, -(label.n_exc as f64 + 0.5) * wt);
    let new = StateLabel {
        beta: label.beta * C64::from_polar(1.0, -wt),
        ..*label
    };
    (phase, new)
}

/// `‖(1 − n/(N+1)) a ψ − β ψ‖` for an arbitrary state.
pub fn nonlinear_residual_of(state: &TwoModeState, beta: C64, n_exc: usize) -> Result<f64> {
    let lowered = state.apply_ladder(Mode::A, Ladder::Lower)?;
    let f = lowered.map_diagonal(|i, _| C64::new(1.0 - n_exc as f64 / (i as f64 + 1.0), 0.0));
    Ok(f.sub(&state.scaled(beta)).norm())
}

/// Residual of the nonlinear eigenvalue equation on the constructed state.
pub fn nonlinear_residual(label: &StateLabel, cutoffs: Cutoffs) -> Result<f64> {
    nonlinear_residual_of(&pacs_state(label, cutoffs)?, label.beta, label.n_exc)
}
