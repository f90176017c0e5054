//! Resolution of identity for photon-added states.
//!
//! With `x = |β|²` the density is
//! `K_𝐧(x) = (𝐧!/π) e^{x} L_𝐧(−x) G^{2,0}_{1,2}(x | 𝐧; 0, 0)` and
//! `∫ d²β K_𝐧 |β; 𝐧⟩⟨β; 𝐧|` is the mode-a projector onto levels `>= 𝐧`.
//! After the angular integral the statement reduces to the moment law
//! `∫_0^∞ x^k G dx = k!² / (𝐧+k)!`.
//!
//! `G` diverges like `−ln x / (𝐧−1)!` at the origin for `𝐧 >= 1`, so the
//! radial integrals use the graded composite rule of [`crate::quad`].
//! Plain Gauss–Laguerre remains selectable and visibly under-resolves.

use std::f64::consts::PI;

use crate::diagnostics::SeriesTable;
use crate::error::{Error, Result};
use crate::format::g12;
use crate::quad::{uniform_angles, RadialRule};
use crate::specfun::{ln_laguerre_neg, log_factorial, meijer_density_scaled};
use crate::C64;

/// `K_𝐧(|β|)`. Infinite at `|β| = 0` for `𝐧 >= 1`.
pub fn density_k(n_exc: usize, beta_abs: f64) -> Result<f64> {
    if !beta_abs.is_finite() || beta_abs < 0.0 {
        return Err(Error::InvalidArgument(format!("|beta| must be >= 0, got {beta_abs}")));
    }
    let x = beta_abs * beta_abs;
    let g = meijer_density_scaled(n_exc, x)?;
    if g.is_infinite() {
        return Ok(g);
    }
    Ok((log_factorial(n_exc) + ln_laguerre_neg(n_exc, 0, x)).exp() / PI * g)
}

/// Samples `(x, K)` of one density.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureDensity {
    pub n_exc: usize,
    pub samples: Vec<(f64, f64)>,
}

impl MeasureDensity {
    pub fn sample(n_exc: usize, beta_abs: &[f64]) -> Result<Self> {
        let samples = beta_abs
            .iter()
            .map(|&b| density_k(n_exc, b).map(|k| (b * b, k)))
            .collect::<Result<_>>()?;
        Ok(Self { n_exc, samples })
    }

    pub fn all_positive_finite(&self) -> bool {
        self.samples.iter().all(|&(_, k)| k > 0.0 && k.is_finite())
    }
}

/// `K_𝐧(|β|)` series for the listed orders.
pub fn density_scan(n_list: &[usize], beta_grid: &[f64]) -> Result<SeriesTable> {
    let mut table = SeriesTable::new("beta_abs", beta_grid.to_vec());
    for &n in n_list {
        let col = beta_grid.iter().map(|&b| density_k(n, b)).collect::<Result<Vec<_>>>()?;
        table.push(&format!("K_n{n}"), &format!("n={n}"), col);
    }
    Ok(table)
}

/// Upper integration limit and panel orders used for the moment law.
const MOMENT_X_MAX: f64 = 150.0;
const MOMENT_COARSE: usize = 16;
const MOMENT_FINE: usize = 24;
/// Coarse/fine disagreement that counts as non-convergence.
const CONVERGENCE_TOL: f64 = 1e-9;

fn moments(n_exc: usize, k_max: usize, rule: &RadialRule) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; k_max + 1];
    for (x, w) in rule.weighted_nodes() {
        let h = meijer_density_scaled(n_exc, x)?;
        let mut xp = 1.0;
        for a in acc.iter_mut() {
            *a += w * h * xp;
            xp *= x;
        }
    }
    Ok(acc)
}

/// `k!² / (𝐧+k)!`.
pub fn moment_law(n_exc: usize, k: usize) -> f64 {
    (2.0 * log_factorial(k) - log_factorial(n_exc + k)).exp()
}

/// Worst relative deviation from the moment law over `k = 0..=k_max`.
///
/// Integrates with two panel orders; if they disagree by more than `1e-9`
/// relative the result is reported as [`Error::QuadratureNotConverged`].
pub fn verify_moments(n_exc: usize, k_max: usize) -> Result<f64> {
    if k_max > 20 {
        return Err(Error::InvalidArgument(format!("k_max must be <= 20, got {k_max}")));
    }
    let coarse = moments(n_exc, k_max, &RadialRule::graded(MOMENT_X_MAX, MOMENT_COARSE))?;
    let fine = moments(n_exc, k_max, &RadialRule::graded(MOMENT_X_MAX, MOMENT_FINE))?;
    let mut worst = 0.0f64;
    for k in 0..=k_max {
        let drift = ((coarse[k] - fine[k]) / fine[k]).abs();
        if drift > CONVERGENCE_TOL {
            return Err(Error::QuadratureNotConverged(drift));
        }
        let want = moment_law(n_exc, k);
        worst = worst.max(((fine[k] - want) / want).abs());
    }
    Ok(worst)
}

/// Quadrature for the projector integral.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorQuadrature {
    pub radial: RadialRule,
    pub angular: usize,
}

impl Default for ProjectorQuadrature {
    fn default() -> Self {
        Self {
            radial: RadialRule::graded(MOMENT_X_MAX, MOMENT_FINE),
            angular: 256,
        }
    }
}

/// Reconstructed mode-a operator and its comparison with the projector
/// onto levels `>= 𝐧`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorReport {
    pub n_exc: usize,
    /// `dim × dim`, rows and columns indexed by the mode-a occupation.
    pub matrix: Vec<Vec<C64>>,
    pub diagonal: Vec<f64>,
    /// Largest entry-wise deviation from the step projector.
    pub max_deviation: f64,
    pub max_off_diagonal: f64,
}

/// Integrate `K_𝐧(|β|) |β; 𝐧⟩⟨β; 𝐧|` over the β plane on the mode-a levels
/// `0..dim`.
///
/// The mode-b factor of `|β, α; 𝐧⟩` is the fixed coherent projector
/// `|α⟩⟨α|`, independent of β, so it factors out of the integral; `alpha`
/// is only validated.
pub fn reconstruct_projector(n_exc: usize, alpha: C64, quadrature: &ProjectorQuadrature, dim: usize) -> Result<ProjectorReport> {
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::InvalidArgument("alpha must be finite".into()));
    }
    if dim == 0 || quadrature.angular == 0 {
        return Err(Error::InvalidArgument("projector needs dim >= 1 and at least one angle".into()));
    }
    // Angular factors S_d = Σ_θ w e^{idθ} for d = j - j'.
    let angles = uniform_angles(quadrature.angular);
    let span = dim as i64;
    let angular: Vec<C64> = (-span..=span)
        .map(|d| angles.iter().map(|&(t, w)| C64::from_polar(w, d as f64 * t)).sum())
        .collect();

    // Radial factors: coefficient of level j is e^{-x/2} β^{j-𝐧} √(j!)/((j-𝐧)! √(𝐧! L_𝐧(-x))).
    // With d²β = ½ dx dθ and the e^{-x} carried by the weighted rule, the
    // radial integrand of entry (j, j') is
    // ½ K(x) x^{(j+j')/2 - 𝐧} √(j! j'!) / ((j-𝐧)! (j'-𝐧)! 𝐧! L_𝐧(-x)).
    let mut radial = vec![vec![0.0f64; dim]; dim];
    for (x, w) in quadrature.radial.weighted_nodes() {
        let k = density_k(n_exc, x.sqrt())?;
        let base = 0.5 * w * k / (log_factorial(n_exc) + ln_laguerre_neg(n_exc, 0, x)).exp();
        for (j, row) in radial.iter_mut().enumerate().skip(n_exc) {
            for (jp, cell) in row.iter_mut().enumerate().skip(n_exc) {
                let p = (j + jp) as f64 / 2.0 - n_exc as f64;
                let ln_f = 0.5 * (log_factorial(j) + log_factorial(jp))
                    - log_factorial(j - n_exc)
                    - log_factorial(jp - n_exc);
                *cell += base * x.powf(p) * ln_f.exp();
            }
        }
    }

    let mut matrix = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    let mut max_dev = 0.0f64;
    let mut max_off = 0.0f64;
    for j in 0..dim {
        for jp in 0..dim {
            let d = j as i64 - jp as i64;
            let v = angular[(d + span) as usize] * radial[j][jp];
            matrix[j][jp] = v;
            let want = if j == jp && j >= n_exc { 1.0 } else { 0.0 };
            max_dev = max_dev.max((v - want).norm());
            if j != jp {
                max_off = max_off.max(v.norm());
            }
        }
    }
    let diagonal = (0..dim).map(|j| matrix[j][j].re).collect();
    Ok(ProjectorReport {
        n_exc,
        matrix,
        diagonal,
        max_deviation: max_dev,
        max_off_diagonal: max_off,
    })
}

impl ProjectorReport {
    /// `j,diag` lines with a metadata header.
    pub fn diagonal_csv(&self) -> String {
        let mut out = format!(
            "# n={} max_deviation={} max_off_diagonal={}\nlevel,diagonal\n",
            self.n_exc,
            g12(self.max_deviation),
            g12(self.max_off_diagonal)
        );
        for (j, d) in self.diagonal.iter().enumerate() {
            out.push_str(&format!("{j},{}\n", g12(*d)));
        }
        out
    }
}
