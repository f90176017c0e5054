//! Position-space wavefunctions in polar coordinates.
//!
//! With `c = Mω/2ħ` and `u = c r²` every state of the toolkit has the form
//! `e^{-u/2} × (polynomial in √u e^{±iφ})` or an entire function thereof,
//! so norms reduce to Gauss–Laguerre integrals in `u` (`r dr = du / 2c`)
//! and trapezoid sums in `φ`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{PhysicalScales, TwoModeState};
use crate::quad::{uniform_angles, GaussLaguerre};
use crate::specfun::{laguerre_assoc, log_factorial};
use crate::states::{pacs_mode_a_amplitudes, StateLabel};
use crate::C64;

/// `(r, φ)` with `r >= 0` and `φ` wrapped into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarPoint {
    r: f64,
    phi: f64,
}

impl PolarPoint {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) || !phi.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid polar point (r={r}, phi={phi})")));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { r, phi })
    }

    pub fn r(self) -> f64 {
        self.r
    }

    pub fn phi(self) -> f64 {
        self.phi
    }
}

/// `√c r e^{-iφ}`, the combination every closed form is built from.
fn zeta(p: PolarPoint, c: f64) -> C64 {
    C64::from_polar(c.sqrt() * p.r, -p.phi)
}

/// Landau level `⟨r, φ | n, m⟩`.
///
/// For `m >= 0`: `√(c/π) √(n!/(n+m)!) u^{m/2} e^{imφ} e^{-u/2} L^m_n(u)`.
/// For `m = -k < 0` the negative-superscript Laguerre function is rewritten
/// as `(-1)^k √(c/π) √((n-k)!/n!) u^{k/2} e^{imφ} e^{-u/2} L^k_{n-k}(u)`.
pub fn landau_psi(n: usize, m: i64, p: PolarPoint, scales: &PhysicalScales) -> Result<C64> {
    if n as i64 + m < 0 {
        return Err(Error::InvalidLevel { n, m });
    }
    let c = scales.radial_scale();
    let u = c * p.r * p.r;
    let k = m.unsigned_abs() as usize;
    let (ln_ratio, lag, sign) = if m >= 0 {
        (log_factorial(n) - log_factorial(n + k), laguerre_assoc(n, k, u), 1.0)
    } else {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        (log_factorial(n - k) - log_factorial(n), laguerre_assoc(n - k, k, u), sign)
    };
    let radial = sign * (c / PI).sqrt() * (0.5 * ln_ratio).exp() * u.powf(k as f64 / 2.0) * (-u / 2.0).exp() * lag;
    Ok(C64::from_polar(radial, m as f64 * p.phi))
}

/// `⟨r, φ | α⟩^b_n` in closed form:
/// `√(c/π) (α − ζ)^n / √n! · exp(−|α|²/2 + α ζ̄ − u/2)` with `ζ = √c r e^{-iφ}`.
pub fn displaced_number_psi(alpha: C64, n: usize, p: PolarPoint, scales: &PhysicalScales) -> C64 {
    let c = scales.radial_scale();
    let z = zeta(p, c);
    let w = alpha - z;
    let expo = -alpha.norm_sqr() / 2.0 + alpha * z.conj() - z.norm_sqr() / 2.0;
    (c / PI).sqrt() * w.powu(n as u32) * (-0.5 * log_factorial(n)).exp() * expo.exp()
}

/// `⟨r, φ | β, α⟩ = √(c/π) exp(−(|α|²+|β|²)/2 + αβ + α ζ̄ − β ζ − u/2)`.
pub fn two_variable_psi(beta: C64, alpha: C64, p: PolarPoint, scales: &PhysicalScales) -> C64 {
    let c = scales.radial_scale();
    let z = zeta(p, c);
    let expo = -(alpha.norm_sqr() + beta.norm_sqr()) / 2.0 + alpha * beta + alpha * z.conj() - beta * z
        - z.norm_sqr() / 2.0;
    (c / PI).sqrt() * expo.exp()
}

/// Photon-added state `⟨r, φ | β, α; n⟩`.
///
/// `n = 0` and `n = 1` use the closed forms (the latter multiplies the
/// two-variable wavefunction by `(α − ζ)/√(1+|β|²)`); higher orders sum
/// the displaced-number wavefunctions with the mode-a coefficients.
pub fn pacs_psi(label: &StateLabel, p: PolarPoint, scales: &PhysicalScales) -> C64 {
    match label.n_exc {
        0 => two_variable_psi(label.beta, label.alpha, p, scales),
        1 => {
            let w = label.alpha - zeta(p, scales.radial_scale());
            w / (1.0 + label.beta.norm_sqr()).sqrt() * two_variable_psi(label.beta, label.alpha, p, scales)
        }
        n => pacs_psi_series(label.beta, label.alpha, n, p, scales),
    }
}

/// `Σ_k c_k ⟨r, φ | α⟩^b_{n+k}` with the photon-added mode-a coefficients,
/// truncated by the standard cutoff rule.
pub fn pacs_psi_series(beta: C64, alpha: C64, n: usize, p: PolarPoint, scales: &PhysicalScales) -> C64 {
    let cut = StateLabel { beta, alpha, n_exc: n }.cutoffs();
    let (coef, _) = pacs_mode_a_amplitudes(beta, n, cut.a);
    let c = scales.radial_scale();
    let z = zeta(p, c);
    let w = alpha - z;
    let envelope = (c / PI).sqrt() * (-alpha.norm_sqr() / 2.0 + alpha * z.conj() - z.norm_sqr() / 2.0).exp();
    // w^{n_a}/√(n_a!) by recurrence.
    let mut term = C64::new(1.0, 0.0);
    let mut acc = C64::new(0.0, 0.0);
    for (na, ck) in coef.iter().enumerate() {
        if na > 0 {
            term = term * w / (na as f64).sqrt();
        }
        if na >= n {
            acc += ck * term;
        }
    }
    envelope * acc
}

/// `Σ_{n_a, n_b} ψ(n_a, n_b) ⟨r, φ | n_a, n_b − n_a⟩` over a Fock grid.
pub fn basis_sum_psi(state: &TwoModeState, p: PolarPoint, scales: &PhysicalScales) -> C64 {
    state
        .amplitudes()
        .indexed_iter()
        .filter(|(_, z)| z.norm_sqr() > 0.0)
        .map(|((na, nb), z)| z * landau_psi(na, nb as i64 - na as i64, p, scales).expect("valid grid level"))
        .sum()
}

/// Tensor-product rule over the plane: Gauss–Laguerre in `u = c r²` and a
/// uniform grid in `φ`.
#[derive(Clone, Debug)]
pub struct PlaneQuadrature {
    radial: GaussLaguerre,
    angles: Vec<(f64, f64)>,
}

impl PlaneQuadrature {
    pub fn new(radial_nodes: usize, angular_nodes: usize) -> Self {
        Self {
            radial: GaussLaguerre::new(radial_nodes),
            angles: uniform_angles(angular_nodes),
        }
    }

    /// Points and weights `w` with `Σ w f(p) ≈ ∫∫ f r dr dφ`, for `f`
    /// decaying like `e^{-u}`.
    pub fn nodes(&self, scales: &PhysicalScales) -> Vec<(PolarPoint, f64)> {
        let c = scales.radial_scale();
        let mut out = Vec::with_capacity(self.radial.nodes().len() * self.angles.len());
        for (&u, &w) in self.radial.nodes().iter().zip(self.radial.weights()) {
            let r = (u / c).sqrt();
            let wr = w * u.exp() / (2.0 * c);
            out.extend(self.angles.iter().map(|&(phi, wphi)| (PolarPoint { r, phi }, wr * wphi)));
        }
        out
    }

    /// `∫∫ f(r, φ) r dr dφ`.
    pub fn integrate<F: Fn(PolarPoint) -> C64>(&self, scales: &PhysicalScales, f: F) -> C64 {
        self.nodes(scales).into_iter().map(|(p, w)| w * f(p)).sum()
    }

    /// `∫∫ ψ̄ χ r dr dφ`.
    pub fn overlap<F, G>(&self, scales: &PhysicalScales, psi: F, chi: G) -> C64
    where
        F: Fn(PolarPoint) -> C64,
        G: Fn(PolarPoint) -> C64,
    {
        self.integrate(scales, |p| psi(p).conj() * chi(p))
    }

    pub fn norm_sqr<F: Fn(PolarPoint) -> C64>(&self, scales: &PhysicalScales, psi: F) -> f64 {
        self.integrate(scales, |p| C64::new(psi(p).norm_sqr(), 0.0)).re
    }
}

impl Default for PlaneQuadrature {
    /// 128 radial Gauss–Laguerre nodes × 256 angles.
    fn default() -> Self {
        Self::new(128, 256)
    }
}

/// Gram matrix `⟨n, m | n', m'⟩` over the levels `n <= n_max`,
/// `-n <= m <= m_max`, computed by quadrature.
pub fn landau_gram(
    n_max: usize,
    m_max: i64,
    quad: &PlaneQuadrature,
    scales: &PhysicalScales,
) -> (Vec<(usize, i64)>, Vec<Vec<C64>>) {
    let levels: Vec<(usize, i64)> = (0..=n_max)
        .flat_map(|n| (-(n as i64)..=m_max).map(move |m| (n, m)))
        .collect();
    let nodes = quad.nodes(scales);
    let samples: Vec<Vec<C64>> = levels
        .par_iter()
        .map(|&(n, m)| {
            nodes
                .iter()
                .map(|&(p, _)| landau_psi(n, m, p, scales).expect("valid level"))
                .collect()
        })
        .collect();
    let gram = samples
        .iter()
        .map(|u| {
            samples
                .iter()
                .map(|v| nodes.iter().zip(u.iter().zip(v)).map(|((_, w), (a, b))| *w * a.conj() * b).sum())
                .collect()
        })
        .collect();
    (levels, gram)
}
