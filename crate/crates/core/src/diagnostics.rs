//! Nonclassicality diagnostics of photon-added states: number distribution,
//! Mandel Q, first and second moments of the ladder operators, quadrature
//! covariances and squeezing scans.
//!
//! Closed forms are expressed through the Laguerre ratios
//! `r1 = L_{n+1}/L_n`, `q1 = L¹_n/L_n`, `q2 = L²_n/L_n` at `−|β|²`, so they stay
//! finite for large `|β|`. Each has a grid counterpart (`grid_*`) acting
//! with the actual operators on a constructed state.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{inner, Ladder, Mode, PhysicalScales, TwoModeState};
use crate::format::g12;
use crate::specfun::{laguerre_ratio, ln_laguerre_neg, log_factorial};
use crate::states::StateLabel;
use crate::C64;

/// `ln(x^k / k!)`-style Poisson log-weight, `ln(e^{-x} x^k / k!)`.
fn ln_poisson(x: f64, k: usize) -> f64 {
    if x == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -x + k as f64 * x.ln() - log_factorial(k)
}

/// Mode-a factor of the distribution: probability of `n_a = n` in the
/// photon-added state, `n! x^{n-𝐧} e^{-x} / (𝐧! (n-𝐧)!² L_𝐧(-x))`.
fn mode_a_probability(beta: C64, n_exc: usize, n: usize) -> f64 {
    if n < n_exc {
        return 0.0;
    }
    let x = beta.norm_sqr();
    let k = n - n_exc;
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (log_factorial(n) - log_factorial(n_exc) - log_factorial(k) + ln_poisson(x, k) - ln_laguerre_neg(n_exc, 0, x)).exp()
}

/// Probability of the Landau level `(n, m)` in `|β, α; 𝐧⟩`; zero outside
/// the support `n >= 𝐧`, `n + m >= 0`.
pub fn photon_probability(label: &StateLabel, n: usize, m: i64) -> f64 {
    if n as i64 + m < 0 {
        return 0.0;
    }
    let nb = (n as i64 + m) as usize;
    mode_a_probability(label.beta, label.n_exc, n) * ln_poisson(label.alpha.norm_sqr(), nb).exp()
}

/// The product of two Poisson laws `P_{|β|²}(n) P_{|α|²}(n+m)`: the
/// distribution of the unexcited state.
pub fn poissonian_product(beta: C64, alpha: C64, n: usize, m: i64) -> f64 {
    if n as i64 + m < 0 {
        return 0.0;
    }
    (ln_poisson(beta.norm_sqr(), n) + ln_poisson(alpha.norm_sqr(), (n as i64 + m) as usize)).exp()
}

/// Distribution restricted to `n = 𝐧`: `[e^{-x} / L_𝐧(-x)] P_{|α|²}(𝐧+m)`.
pub fn level_floor_probability(label: &StateLabel, m: i64) -> f64 {
    let n = label.n_exc;
    if n as i64 + m < 0 {
        return 0.0;
    }
    let x = label.beta.norm_sqr();
    let first = (-x - ln_laguerre_neg(n, 0, x)).exp();
    first * ln_poisson(label.alpha.norm_sqr(), (n as i64 + m) as usize).exp()
}

/// Distribution restricted to `m = -n` (lowest angular momentum):
/// `e^{-|α|²}` times the mode-a factor.
pub fn lowest_angular_probability(label: &StateLabel, n: usize) -> f64 {
    (-label.alpha.norm_sqr()).exp() * mode_a_probability(label.beta, label.n_exc, n)
}

/// The value `e^{-|β|²} P_{|α|²}(m)` sometimes quoted for the lowest Landau
/// level `n = 0`. It agrees with [`photon_probability`] only for `𝐧 = 0`;
/// for `𝐧 >= 1` the level `n = 0` lies outside the support.
pub fn lowest_level_poisson_claim(label: &StateLabel, m: i64) -> f64 {
    if m < 0 {
        return 0.0;
    }
    (-label.beta.norm_sqr()).exp() * ln_poisson(label.alpha.norm_sqr(), m as usize).exp()
}

/// `Σ p(n, m)` over `n <= n_max`, `0 <= n + m <= nb_max`.
pub fn distribution_total(label: &StateLabel, n_max: usize, nb_max: usize) -> f64 {
    let mut total = 0.0;
    for n in label.n_exc..=n_max {
        for nb in 0..=nb_max {
            total += photon_probability(label, n, nb as i64 - n as i64);
        }
    }
    total
}

/// `d = x L¹_𝐧(-x) / L_𝐧(-x)`, so that `⟨N⟩ = 𝐧 + d`.
fn excess(x: f64, n: usize) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * laguerre_ratio(n, 1, n, 0, -x)
    }
}

/// `(⟨N⟩, ⟨N²⟩)` of mode a from the ratio formulas
/// `⟨N⟩ = (𝐧+1) L_{𝐧+1}/L_𝐧 − 1` and
/// `⟨N²⟩ = (𝐧+1)(𝐧+2) L_{𝐧+2}/L_𝐧 − 3(𝐧+1) L_{𝐧+1}/L_𝐧 + 1`.
pub fn number_moments(beta: C64, n_exc: usize) -> (f64, f64) {
    let y = -beta.norm_sqr();
    let n = n_exc as f64;
    let r1 = laguerre_ratio(n_exc + 1, 0, n_exc, 0, y);
    let r2 = laguerre_ratio(n_exc + 2, 0, n_exc, 0, y);
    ((n + 1.0) * r1 - 1.0, (n + 1.0) * (n + 2.0) * r2 - 3.0 * (n + 1.0) * r1 + 1.0)
}

/// Mandel `Q = Var(N)/⟨N⟩ − 1` of mode a.
///
/// Evaluated as `(x(𝐧+1) + d(x−d) − 𝐧 − d)/(𝐧+d)`, algebraically equal to
/// the moment formulas but free of their cancellation. At `β = 0` it is −1
/// for `𝐧 >= 1` (Fock state) and 0 for `𝐧 = 0` by continuity.
pub fn mandel_q(beta: C64, n_exc: usize) -> f64 {
    let x = beta.norm_sqr();
    if x == 0.0 {
        return if n_exc == 0 { 0.0 } else { -1.0 };
    }
    let n = n_exc as f64;
    let d = excess(x, n_exc);
    (x * (n + 1.0) + d * (x - d) - n - d) / (n + d)
}

/// Mandel Q straight from the moment formulas (reference implementation).
pub fn mandel_q_from_moments(beta: C64, n_exc: usize) -> f64 {
    let (m1, m2) = number_moments(beta, n_exc);
    (m2 - m1 * m1) / m1 - 1.0
}

/// First and second moments of the ladder operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpectationTable {
    pub b: C64,
    pub b2: C64,
    pub bdb: f64,
    pub a: C64,
    pub a2: C64,
    pub ada: f64,
}

impl ExpectationTable {
    /// Largest absolute difference between corresponding entries.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        [
            (self.b - other.b).norm(),
            (self.b2 - other.b2).norm(),
            (self.bdb - other.bdb).abs(),
            (self.a - other.a).norm(),
            (self.a2 - other.a2).norm(),
            (self.ada - other.ada).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn expectation_table(label: &StateLabel) -> ExpectationTable {
    let beta = label.beta;
    let y = -beta.norm_sqr();
    let n = label.n_exc;
    ExpectationTable {
        b: label.alpha,
        b2: label.alpha * label.alpha,
        bdb: label.alpha.norm_sqr(),
        a: beta * laguerre_ratio(n, 1, n, 0, y),
        a2: beta * beta * laguerre_ratio(n, 2, n, 0, y),
        ada: n as f64 + excess(beta.norm_sqr(), n),
    }
}

/// The same table measured on a state with explicit ladder operators.
pub fn grid_expectations(state: &TwoModeState) -> Result<ExpectationTable> {
    let s = state.padded(2, 2);
    let a1 = s.apply_ladder(Mode::A, Ladder::Lower)?;
    let a2 = a1.apply_ladder(Mode::A, Ladder::Lower)?;
    let b1 = s.apply_ladder(Mode::B, Ladder::Lower)?;
    let b2 = b1.apply_ladder(Mode::B, Ladder::Lower)?;
    Ok(ExpectationTable {
        b: inner(&s, &b1),
        b2: inner(&s, &b2),
        bdb: b1.norm_sqr(),
        a: inner(&s, &a1),
        a2: inner(&s, &a2),
        ada: a1.norm_sqr(),
    })
}

/// Quadrature covariances and their verdicts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceReport {
    pub sigma_xx: f64,
    pub sigma_pp: f64,
    pub sigma_xp: f64,
    /// `σ_xx σ_pp − σ_xp²`.
    pub delta: f64,
    /// `σ_pp < reference_pp`.
    pub squeezed_p: bool,
    pub reference_pp: f64,
    /// `Mħω/4`, the value for any unexcited coherent state.
    pub vacuum_pp: f64,
}

/// Default squeezing threshold in natural units.
pub const DEFAULT_REFERENCE_PP: f64 = 0.5;

/// Covariances of `x = √(ħ/2Mω)(b + b† − a − a†)` and
/// `p = (i/2)√(Mħω/2)(b† − b + a − a†)` in `|β, α; 𝐧⟩`, with `θ = arg β`.
pub fn covariance_report(label: &StateLabel, scales: &PhysicalScales) -> CovarianceReport {
    covariance_report_with_reference(label, scales, DEFAULT_REFERENCE_PP)
}

pub fn covariance_report_with_reference(label: &StateLabel, scales: &PhysicalScales, reference_pp: f64) -> CovarianceReport {
    let PhysicalScales { hbar, mass, omega } = *scales;
    let x = label.beta.norm_sqr();
    let theta = label.beta.arg();
    let n = label.n_exc;
    let y = -x;
    let r1 = laguerre_ratio(n + 1, 0, n, 0, y);
    let q1 = laguerre_ratio(n, 1, n, 0, y);
    let q2 = laguerre_ratio(n, 2, n, 0, y);
    let np1 = (n + 1) as f64;
    let c2 = (2.0 * theta).cos();
    let sigma_xx = hbar / (mass * omega) * (np1 * r1 + x * c2 * q2 - 2.0 * x * theta.cos().powi(2) * q1 * q1);
    let sigma_pp = mass * hbar * omega / 4.0 * (np1 * r1 - x * c2 * q2 - 2.0 * x * theta.sin().powi(2) * q1 * q1);
    let sigma_xp = hbar / 2.0 * x * (2.0 * theta).sin() * (q2 - q1 * q1);
    CovarianceReport {
        sigma_xx,
        sigma_pp,
        sigma_xp,
        delta: sigma_xx * sigma_pp - sigma_xp * sigma_xp,
        squeezed_p: sigma_pp < reference_pp,
        reference_pp,
        vacuum_pp: mass * hbar * omega / 4.0,
    }
}

/// `(x ψ, p ψ)` on a padded copy of the state.
fn quadrature_images(state: &TwoModeState, scales: &PhysicalScales) -> Result<(TwoModeState, TwoModeState, TwoModeState)> {
    let PhysicalScales { hbar, mass, omega } = *scales;
    let s = state.padded(2, 2);
    let a = s.apply_ladder(Mode::A, Ladder::Lower)?;
    let ad = s.apply_ladder(Mode::A, Ladder::Raise)?;
    let b = s.apply_ladder(Mode::B, Ladder::Lower)?;
    let bd = s.apply_ladder(Mode::B, Ladder::Raise)?;
    let kx = (hbar / (2.0 * mass * omega)).sqrt();
    let kp = 0.5 * (mass * hbar * omega / 2.0).sqrt();
    let xs = b.add(&bd).sub(&a).sub(&ad).scaled(C64::new(kx, 0.0));
    let ps = bd.sub(&b).add(&a).sub(&ad).scaled(C64::new(0.0, kp));
    Ok((s, xs, ps))
}

/// `(σ_xx, σ_pp, σ_xp)` measured on a state with the quadrature operators.
pub fn grid_covariance(state: &TwoModeState, scales: &PhysicalScales) -> Result<(f64, f64, f64)> {
    let (s, xs, ps) = quadrature_images(state, scales)?;
    let mx = inner(&s, &xs).re;
    let mp = inner(&s, &ps).re;
    let sxx = xs.norm_sqr() - mx * mx;
    let spp = ps.norm_sqr() - mp * mp;
    let sxp = inner(&xs, &ps).re - mx * mp;
    Ok((sxx, spp, sxp))
}

/// `⟨[x, p]⟩`, which must equal `iħ ⟨ψ|ψ⟩` away from the cutoff.
pub fn commutator_xp(state: &TwoModeState, scales: &PhysicalScales) -> Result<C64> {
    let (_, xs, ps) = quadrature_images(state, scales)?;
    Ok(inner(&xs, &ps) - inner(&ps, &xs))
}

/// `steps` equally spaced points on `[min, max]`.
pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(min.is_finite() && max.is_finite()) || max <= min {
        return Err(Error::InvalidArgument(format!(
            "grid needs steps >= 2 and min < max, got [{min}, {max}] with {steps} steps"
        )));
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { max } else { min + h * i as f64 }).collect())
}

/// Several series sharing one abscissa, written as CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTable {
    pub x_name: String,
    pub x: Vec<f64>,
    pub names: Vec<String>,
    /// `#`-prefixed description of each series, parallel to `names`.
    pub descriptions: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
}

impl SeriesTable {
    pub fn new(x_name: &str, x: Vec<f64>) -> Self {
        Self {
            x_name: x_name.to_string(),
            x,
            names: Vec::new(),
            descriptions: Vec::new(),
            columns: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, description: &str, column: Vec<f64>) {
        assert_eq!(column.len(), self.x.len(), "series length mismatch");
        self.names.push(name.to_string());
        self.descriptions.push(description.to_string());
        self.columns.push(column);
    }

    pub fn meta(&mut self, key: &str, value: &str) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|i| self.columns[i].as_slice())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        for (n, d) in self.names.iter().zip(&self.descriptions) {
            let _ = writeln!(out, "# series {n}: {d}");
        }
        out.push_str(&self.x_name);
        for n in &self.names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for (i, x) in self.x.iter().enumerate() {
            out.push_str(&g12(*x));
            for col in &self.columns {
                out.push(',');
                out.push_str(&g12(col[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// `Q_𝐧(|β|)` series; `θ` does not enter.
pub fn mandel_scan(n_list: &[usize], beta_grid: &[f64]) -> SeriesTable {
    let mut table = SeriesTable::new("beta_abs", beta_grid.to_vec());
    for &n in n_list {
        let col = beta_grid.par_iter().map(|&b| mandel_q(C64::new(b, 0.0), n)).collect();
        table.push(&format!("Q_n{n}"), &format!("n={n}"), col);
    }
    table
}

/// `σ_pp` series for every `(𝐧, θ)` pair, `𝐧` varying slowest.
pub fn squeezing_scan(n_list: &[usize], theta_list: &[f64], beta_grid: &[f64], scales: &PhysicalScales) -> SeriesTable {
    let mut table = SeriesTable::new("beta_abs", beta_grid.to_vec());
    for &n in n_list {
        for (ti, &theta) in theta_list.iter().enumerate() {
            let col = beta_grid
                .par_iter()
                .map(|&b| {
                    let label = StateLabel { beta: C64::from_polar(b, theta), alpha: C64::new(0.0, 0.0), n_exc: n };
                    covariance_report(&label, scales).sigma_pp
                })
                .collect();
            let name = if theta_list.len() == 1 { format!("sigma_pp_n{n}") } else { format!("sigma_pp_n{n}_t{ti}") };
            table.push(&name, &format!("n={n} theta={}", g12(theta)), col);
        }
    }
    table
}
