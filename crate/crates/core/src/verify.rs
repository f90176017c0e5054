//! Runtime self-check suite: every closed form against its oracle, at fixed
//! tolerances that a caller may loosen (never tighten) with a floor.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cavity::{self, Atom, CavityParams};
use crate::diagnostics::{self, covariance_report, expectation_table, grid_covariance, grid_expectations, linspace};
use crate::error::Result;
use crate::fock::{inner, Cutoffs, Mode, PhysicalScales};
use crate::format::g12;
use crate::measure::{self, ProjectorQuadrature};
use crate::specfun::{factorial, laguerre_assoc};
use crate::states::{self, overlap_analytic, pacs_state, photon_added_by_ladder, StateLabel};
use crate::wavefun::{self, PlaneQuadrature, PolarPoint};
use crate::C64;

const SEED: u64 = 0x5eed_1a4d_a0c5;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Measured deviation (or, for lower-bound checks, the measured margin).
    pub deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `deviation <= tolerance`.
    fn upper(name: &'static str, deviation: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self { name, passed: deviation <= tolerance, deviation, tolerance, detail: detail.into() }
    }

    /// Passes when `value > bound`.
    fn lower(name: &'static str, value: f64, bound: f64, detail: impl Into<String>) -> Self {
        Self { name, passed: value > bound, deviation: value, tolerance: bound, detail: detail.into() }
    }

    fn failed(name: &'static str, err: crate::Error) -> Self {
        Self { name, passed: false, deviation: f64::NAN, tolerance: f64::NAN, detail: format!("error: {err}") }
    }

    /// `name,status,deviation,tolerance,detail`.
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.name,
            if self.passed { "pass" } else { "FAIL" },
            g12(self.deviation),
            g12(self.tolerance),
            self.detail.replace(',', ";")
        )
    }
}

type Runner = fn(f64) -> Result<Check>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn tol(intrinsic: f64, floor: f64) -> f64 {
    intrinsic.max(floor)
}

fn label(beta: C64, alpha: C64, n: usize) -> Result<StateLabel> {
    StateLabel::new(beta, alpha, n)
}

fn random_labels(n_exc: usize, count: usize, salt: u64) -> Result<Vec<StateLabel>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ salt);
    (0..count)
        .map(|_| {
            let beta = C64::from_polar(rng.random_range(0.0..2.5), rng.random_range(0.0..2.0 * PI));
            let alpha = C64::from_polar(rng.random_range(0.0..2.0), rng.random_range(0.0..2.0 * PI));
            label(beta, alpha, n_exc)
        })
        .collect()
}

fn random_points(count: usize, salt: u64) -> Result<Vec<PolarPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ salt);
    (0..count)
        .map(|_| PolarPoint::new(rng.random_range(0.0..3.0), rng.random_range(0.0..2.0 * PI)))
        .collect()
}

fn beta_grid() -> Vec<f64> {
    linspace(0.0, 5.0, 200).expect("static grid")
}

// ---- photon statistics ----

fn mandel_flat(floor: f64) -> Result<Check> {
    let dev = beta_grid().iter().map(|&b| diagnostics::mandel_q(c(b, 0.0), 0).abs()).fold(0.0, f64::max);
    Ok(Check::upper("mandel_q0_flat", dev, tol(1e-10, floor), "max |Q_0| on [0,5]"))
}

fn mandel_band(floor: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut shape = true;
    for n in 1..=5 {
        let q: Vec<f64> = beta_grid().iter().map(|&b| diagnostics::mandel_q(c(b, 0.0), n)).collect();
        for v in &q {
            worst = worst.max(v - 0.0).max(-1.0 - v);
        }
        shape &= diagnostics::mandel_q(c(5.0, 0.0), n) > diagnostics::mandel_q(c(0.5, 0.0), n);
    }
    let dev = if shape { worst.max(0.0) } else { f64::INFINITY };
    Ok(Check::upper("mandel_band", dev, tol(1e-12, floor), "Q_n in [-1,0], rising, n=1..5"))
}

fn mandel_origin(floor: f64) -> Result<Check> {
    let dev = (1..=5).map(|n| (diagnostics::mandel_q(c(0.0, 0.0), n) + 1.0).abs()).fold(0.0, f64::max);
    Ok(Check::upper("mandel_q_origin", dev, tol(1e-10, floor), "Q_n(0) = -1"))
}

fn mandel_spot(floor: f64) -> Result<Check> {
    let lab = label(c(1.0, 0.0), c(0.0, 0.0), 1)?;
    let s = pacs_state(&lab, lab.cutoffs())?;
    let m1 = s.number_moment(Mode::A, 1);
    let m2 = s.number_moment(Mode::A, 2);
    let grid = (m2 - m1 * m1) / m1 - 1.0;
    let dev = (diagnostics::mandel_q(lab.beta, 1) + 0.5).abs().max((grid + 0.5).abs());
    Ok(Check::upper("mandel_q1_spot", dev, tol(1e-10, floor), format!("grid Q_1(1) = {}", g12(grid))))
}

fn mandel_forms(floor: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    for n in 0..=5 {
        for &b in beta_grid().iter().skip(1).step_by(7) {
            let (a, m) = (diagnostics::mandel_q(c(b, 0.0), n), diagnostics::mandel_q_from_moments(c(b, 0.0), n));
            worst = worst.max((a - m).abs() / (1.0 + a.abs()));
        }
    }
    Ok(Check::upper("mandel_stable_vs_moments", worst, tol(1e-9, floor), "cancellation-free form"))
}

fn distribution_sum(floor: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    for lab in random_labels(2, 4, 1)? {
        let c = lab.cutoffs();
        worst = worst.max((diagnostics::distribution_total(&lab, c.a, c.b) - 1.0).abs());
    }
    Ok(Check::upper("distribution_total", worst, tol(1e-10, floor), "sum of p(n,m)"))
}

fn distribution_restrictions(floor: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    for n_exc in 0..=3 {
        let lab = label(c(0.9, 0.4), c(1.1, -0.2), n_exc)?;
        for m in -(n_exc as i64)..8 {
            let full = diagnostics::photon_probability(&lab, n_exc, m);
            worst = worst.max((full - diagnostics::level_floor_probability(&lab, m)).abs());
        }
        for n in n_exc..12 {
            let full = diagnostics::photon_probability(&lab, n, -(n as i64));
            worst = worst.max((full - diagnostics::lowest_angular_probability(&lab, n)).abs());
        }
    }
    Ok(Check::upper("distribution_restrictions", worst, tol(1e-15, floor), "n = n_exc and m = -n slices"))
}

fn lowest_level_claim(_floor: f64) -> Result<Check> {
    let lab0 = label(c(0.8, 0.0), c(0.6, 0.0), 0)?;
    let agree = (0..6)
        .map(|m| (diagnostics::photon_probability(&lab0, 0, m) - diagnostics::lowest_level_poisson_claim(&lab0, m)).abs())
        .fold(0.0, f64::max);
    let mut support_ok = true;
    for n_exc in 1..=5 {
        let lab = label(c(0.8, 0.0), c(0.6, 0.0), n_exc)?;
        support_ok &= (0..6).all(|m| diagnostics::photon_probability(&lab, 0, m) == 0.0);
        support_ok &= diagnostics::lowest_level_poisson_claim(&lab, 0) > 0.0;
    }
    let dev = if support_ok { agree } else { f64::INFINITY };
    Ok(Check::upper("lowest_level_support", dev, 1e-15, "n=0 level empty for n_exc>=1; Poisson form only at n_exc=0"))
}

// ---- uncertainty and squeezing ----

fn minimum_uncertainty(floor: f64) -> Result<Check> {
    let sc = PhysicalScales::natural();
    let mut worst = 0.0f64;
    for lab in random_labels(0, 10, 2)? {
        let r = covariance_report(&lab, &sc);
        worst = worst.max((r.sigma_pp - 0.25).abs()).max((r.delta - 0.25).abs());
    }
    Ok(Check::upper("minimum_uncertainty_n0", worst, tol(1e-12, floor), "sigma_pp = Delta = 1/4"))
}

fn uncertainty_excess(_floor: f64) -> Result<Check> {
    let sc = PhysicalScales::natural();
    let margin = (1..=5)
        .map(|n| label(c(1.0, 0.0), c(0.3, 0.0), n).map(|l| covariance_report(&l, &sc).delta - 0.25))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(Check::lower("uncertainty_excess", margin, 0.0, "min Delta - 1/4 over n=1..5 at |beta|=1"))
}

fn sigma_pp_first(floor: f64) -> Result<Check> {
    let sc = PhysicalScales::natural();
    let mut worst = 0.0f64;
    for &b in &beta_grid() {
        let x = b * b;
        let got = covariance_report(&label(c(b, 0.0), c(0.0, 0.0), 1)?, &sc).sigma_pp;
        worst = worst.max((got - (2.0 + x) / (4.0 * (1.0 + x))).abs());
    }
    Ok(Check::upper("sigma_pp_n1_closed", worst, tol(1e-12, floor), "(2+x)/(4(1+x))"))
}

fn sigma_pp_spots(floor: f64) -> Result<Check> {
    let sc = PhysicalScales::natural();
    let a = covariance_report(&label(c(1.0, 0.0), c(0.0, 0.0), 2)?, &sc).sigma_pp;
    let b = covariance_report(&label(c(0.0, 1.0), c(0.0, 0.0), 2)?, &sc).sigma_pp;
    let dev = (a - 0.464286).abs().max((b - 0.239796).abs());
    Ok(Check::upper("sigma_pp_n2_spots", dev, tol(1e-5, floor), format!("theta=0: {}; theta=pi/2: {}", g12(a), g12(b))))
}

fn sigma_pp_bound(_floor: f64) -> Result<Check> {
    let sc = PhysicalScales::natural();
    let mut worst = f64::NEG_INFINITY;
    let mut equality_elsewhere = false;
    for n in 0..=1 {
        for th in [0.0, PI / 6.0, PI / 4.0, PI / 3.0, FRAC_PI_2] {
            for &b in &beta_grid() {
                let s = covariance_report(&label(C64::from_polar(b, th), c(0.0, 0.0), n)?, &sc).sigma_pp;
                worst = worst.max(s - 0.5);
                if (s - 0.5).abs() < 1e-14 && !(n == 1 && b == 0.0) {
                    equality_elsewhere = true;
                }
            }
        }
    }
    let margin = if equality_elsewhere { f64::INFINITY } else { worst };
    Ok(Check::upper("sigma_pp_at_most_half", margin, 1e-14, "n in {0,1}; equality only at n=1, beta=0"))
}

fn covariance_oracle(floor: f64) -> Result<Check> {
    let sc = PhysicalScales::new(1.3, 0.7, 1.9)?;
    let mut worst = 0.0f64;
    for n in 0..=4 {
        for lab in random_labels(n, 2, 3 + n as u64)? {
            let r = covariance_report(&lab, &sc);
            let (xx, pp, xp) = grid_covariance(&pacs_state(&lab, lab.cutoffs())?, &sc)?;
            worst = worst.max((xx - r.sigma_xx).abs()).max((pp - r.sigma_pp).abs()).max((xp - r.sigma_xp).abs());
        }
    }
    Ok(Check::upper("covariance_grid_oracle", worst, tol(1e-9, floor), "closed form vs operator action"))
}

fn expectations_oracle(floor: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    for n in 0..=5 {
        for lab in random_labels(n, 2, 20 + n as u64)? {
            let g = grid_expectations(&pacs_state(&lab, lab.cutoffs())?)?;
            worst = worst.max(g.max_deviation(&expectation_table(&lab)));
        }
    }
    Ok(Check::upper("ladder_moments_oracle", worst, tol(1e-9, floor), "<a>, <a^2>, <a+a>, mode b"))
}

fn commutator(floor: f64) -> Result<Check> {
    let sc = PhysicalScales::new(0.9, 1.4, 2.2)?;
    let lab = label(c(0.6, -0.8), c(0.5, 0.5), 2)?;
    let s = pacs_state(&lab, lab.cutoffs())?;
    let dev = (diagnostics::commutator_xp(&s, &sc)? - c(0.0, sc.hbar) * s.norm_sqr()).norm();
    Ok(Check::upper("commutator_xp", dev, tol(1e-10, floor), "<[x,p]> = i hbar"))
}

// ---- state algebra ----

fn normalization_law(floor: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    for n in 0..=5 {
        for &b in &[0.0, 0.7, 1.5, 3.0] {
            let lab = label(C64::from_polar(b, 0.4), c(0.3, 0.1), n)?;
            let raw = photon_added_by_ladder(&lab, lab.cutoffs())?;
            let want = states::pacs_norm_analytic(lab.beta, n);
            worst = worst.max((raw.norm_sqr() - want).abs() / want);
        }
    }
    Ok(Check::upper("normalization_law", worst, tol(1e-10, floor), "||a+^n|beta,alpha>||^2 = n! L_n(-x)"))
}

fn overlap_law(floor: f64) -> Result<Check> {
    let beta = c(0.8, 0.6);
    let alpha = c(0.4, -0.1);
    let cut = Cutoffs::for_parameters(beta.norm(), alpha.norm(), 5);
    let st = (0..=5).map(|n| pacs_state(&label(beta, alpha, n)?, cut)).collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for n1 in 0..=5 {
        for n2 in 0..=5 {
            worst = worst.max((inner(&st[n2], &st[n1]) - overlap_analytic(beta, n1, n2)).norm());
        }
    }
    worst = worst.max((overlap_analytic(c(1.0, 0.0), 1, 0) - c(FRAC_1_SQRT_2, 0.0)).norm());
    Ok(Check::upper("overlap_law", worst, tol(1e-10, floor), "grid inner products and 1/sqrt2 spot"))
}

fn temporal_stability(floor: f64) -> Result<Check> {
    let sc = PhysicalScales::new(0.8, 1.3, 1.7)?;
    let mut worst = 0.0f64;
    for lab in [label(c(1.0, -0.5), c(0.2, 0.9), 3)?, label(c(0.3, 0.0), c(1.0, 0.0), 0)?, label(c(-1.2, 0.4), c(0.0, 0.5), 5)?] {
        let cut = lab.cutoffs();
        let psi = pacs_state(&lab, cut)?;
        for k in 0..10 {
            let t = 0.37 * k as f64;
            let (phase, new) = states::evolve_label(&lab, t, &sc);
            let target = pacs_state(&new, cut)?.scaled(phase);
            worst = worst.max(1.0 - inner(&target, &psi.free_evolution(t, &sc)).re);
        }
    }
    Ok(Check::upper("temporal_stability", worst, tol(1e-12, floor), "1 - Re<label evolution|propagated>"))
}

fn nonlinear_eigen(floor: f64) -> Result<Check> {
    let beta = c(1.0, 0.5);
    let alpha = c(0.7, 0.0);
    let cut = Cutoffs::for_parameters(beta.norm(), alpha.norm(), 5);
    let worst = (0..=5)
        .map(|n| states::nonlinear_residual(&label(beta, alpha, n)?, cut))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(Check::upper("nonlinear_eigenvalue", worst, tol(1e-10, floor), "(1 - n/(N+1)) a psi = beta psi"))
}

fn nonlinear_control(_floor: f64) -> Result<Check> {
    let beta = c(1.0, 0.5);
    let cut = Cutoffs::for_parameters(beta.norm(), 0.7, 3);
    let s = pacs_state(&label(beta, c(0.7, 0.0), 2)?, cut)?;
    let r = states::nonlinear_residual_of(&s, beta, 1)?;
    Ok(Check::lower("nonlinear_negative_control", r, 1e-3, "wrong nonlinearity must leave a residual"))
}

// ---- completeness measure ----

fn moment_law(floor: f64) -> Result<Check> {
    let worst = (0..=5).map(|n| measure::verify_moments(n, 20)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    Ok(Check::upper("measure_moment_law", worst, tol(1e-8, floor), "int x^k G_n = k!^2/(n+k)!, k<=20"))
}

fn density_constant(floor: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    for &b in &[0.0, 0.5, 1.0, 2.5, 5.0] {
        worst = worst.max((measure::density_k(0, b)? - 1.0 / PI).abs());
    }
    Ok(Check::upper("density_k0_constant", worst, tol(1e-14, floor), "K_0 = 1/pi"))
}

fn density_positive(_floor: f64) -> Result<Check> {
    let grid: Vec<f64> = linspace(0.05, 5.0, 100)?;
    let mut min = f64::INFINITY;
    for n in 0..=5 {
        let d = measure::MeasureDensity::sample(n, &grid)?;
        if !d.all_positive_finite() {
            return Ok(Check::lower("density_positive", 0.0, 0.0, format!("n={n} has a non-positive or non-finite value")));
        }
        for &b in &grid {
            min = min.min(measure::density_k(n, b)?);
        }
    }
    Ok(Check::lower("density_positive", min, 0.0, "min K_n on [0.05,5]"))
}

fn projector(floor: f64) -> Result<Check> {
    let q = ProjectorQuadrature::default();
    let worst = (0..=5)
        .into_par_iter()
        .map(|n| measure::reconstruct_projector(n, c(0.5, 0.0), &q, 12).map(|r| r.max_deviation))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(Check::upper("projector_step", worst, tol(1e-6, floor), "mode-a diagonal (0..0,1,1..) with step at n"))
}

// ---- wavefunctions ----

fn wavefunction_closed_forms(floor: f64) -> Result<Check> {
    let sc = PhysicalScales::new(1.2, 0.8, 1.5)?;
    let pts = random_points(20, 4)?;
    let alpha = c(0.7, -0.3);
    let beta = c(1.0, 0.5);
    let mut worst = 0.0f64;
    for n in 0..=3 {
        let s = states::displaced_number_state(alpha, n, Cutoffs::for_parameters(0.0, alpha.norm(), n))?;
        let lab = label(beta, alpha, n)?;
        let g = pacs_state(&lab, lab.cutoffs())?;
        for &p in &pts {
            worst = worst.max((wavefun::displaced_number_psi(alpha, n, p, &sc) - wavefun::basis_sum_psi(&s, p, &sc)).norm());
            worst = worst.max((wavefun::pacs_psi(&lab, p, &sc) - wavefun::basis_sum_psi(&g, p, &sc)).norm());
        }
    }
    let tv = states::two_variable_cs(beta, alpha, Cutoffs::for_parameters(beta.norm(), alpha.norm(), 0))?;
    for &p in &pts {
        worst = worst.max((wavefun::two_variable_psi(beta, alpha, p, &sc) - wavefun::basis_sum_psi(&tv, p, &sc)).norm());
    }
    Ok(Check::upper("wavefunction_closed_forms", worst, tol(1e-8, floor), "20 random points"))
}

fn orthonormality(floor: f64) -> Result<Check> {
    let sc = PhysicalScales::new(1.0, 2.0, 0.75)?;
    let (_, gram) = wavefun::landau_gram(4, 4, &PlaneQuadrature::default(), &sc);
    let mut worst = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).norm());
        }
    }
    Ok(Check::upper("landau_orthonormality", worst, tol(1e-8, floor), "Gram matrix n<=4, m<=4"))
}

// ---- special functions ----

fn laguerre_explicit(floor: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    for n in 0..=8 {
        for k in 0..=3 {
            for &y in &[-2.5, -0.3, 0.0, 0.7, 3.1] {
                let explicit: f64 = (0..=n)
                    .map(|i| {
                        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                        s * factorial(n + k) / (factorial(n - i) * factorial(k + i) * factorial(i)) * f64::powi(y, i as i32)
                    })
                    .sum();
                worst = worst.max((laguerre_assoc(n, k, y) - explicit).abs() / (1.0 + explicit.abs()));
            }
        }
    }
    Ok(Check::upper("laguerre_explicit_sum", worst, tol(1e-12, floor), "recurrence vs explicit sum"))
}

// ---- cavity schemes ----

fn cavity_closed_form(floor: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    for &(g, o1, o2, phi, t) in &[(10.0, 1.0, 0.5, 0.3, 1.0), (3.0, 0.7, 1.3, 2.1, 1.5), (50.0, 2.0, 1.0, PI, 0.8), (1.0, 0.0, 0.9, 4.0, 2.0)] {
        let p = CavityParams::new(g, o1, o2, phi, 0.0, t)?;
        let cut = p.cutoffs();
        worst = worst.max(cavity::effective_evolve(&p, cut)?.max_abs_diff(&cavity::closed_form_superposition(&p, cut)?));
    }
    Ok(Check::upper("cavity_effective_closed_form", worst, tol(1e-10, floor), "entry-wise"))
}

fn cavity_limits(floor: f64) -> Result<Check> {
    let g = 4.0;
    let t = 2.0 * PI / g;
    let mut worst = 0.0f64;
    for (phi, sign) in [(2.0 * PI, 1.0), (PI, -1.0)] {
        let p = CavityParams::new(g, 1.0, 0.6, phi, 0.0, t)?;
        let cut = p.cutoffs();
        let (beta, alpha) = p.labels();
        let target = states::two_variable_cs(beta * sign, alpha * sign, cut)?;
        let s = cavity::effective_evolve(&p, cut)?;
        for atom in [Atom::Ground, Atom::Excited] {
            worst = worst.max(1.0 - cavity::field_fidelity(&target, s.component(atom)));
        }
    }
    Ok(Check::upper("cavity_phase_limits", worst, tol(1e-12, floor), "phi=2pi -> |b,a>, phi=pi -> |-b,-a>"))
}

fn cavity_revival(floor: f64) -> Result<Check> {
    let g = 2.0;
    let p = CavityParams::new(g, 0.8, 1.1, 1.2, 0.0, 4.0 * PI / g)?;
    let cut = p.cutoffs();
    let s = cavity::closed_form_superposition(&p, cut)?;
    let (pg, pe) = cavity::revival_branch_fields(&p, cut)?;
    let r2 = c(std::f64::consts::SQRT_2, 0.0);
    let dev = pg.distance(&s.ground_component.scaled(r2)).max(pe.distance(&s.excited_component.scaled(r2)));
    Ok(Check::upper("cavity_revival_branches", dev, tol(1e-12, floor), "N = sqrt2 at gt = 2k pi"))
}

fn cavity_strong_drive(_floor: f64) -> Result<Check> {
    let omega = 0.5;
    let mut inf = Vec::new();
    for ratio in [10.0, 100.0] {
        let p = CavityParams::new(ratio * omega, omega, omega, 0.9, 0.0, 1.0)?;
        let cut = p.cutoffs();
        let h = cavity::strong_drive_hamiltonian(&p, cut)?;
        let exact = cavity::exact_evolve(&h, p.t, &cavity::initial_superposition(cut))?;
        inf.push(1.0 - exact.fidelity(&cavity::effective_evolve(&p, cut)?));
    }
    Ok(Check::lower(
        "cavity_strong_drive_monotone",
        inf[0] - inf[1],
        0.0,
        format!("1-F at g/Omega=10: {}; at 100: {}", g12(inf[0]), g12(inf[1])),
    ))
}

fn cavity_unitarity(floor: f64) -> Result<Check> {
    let p = CavityParams::new(20.0, 0.5, 0.3, 0.4, 0.0, 1.0)?;
    let cut = p.cutoffs();
    let h = cavity::strong_drive_hamiltonian(&p, cut)?;
    let s = cavity::exact_evolve(&h, p.t, &cavity::initial_superposition(cut))?;
    Ok(Check::upper("cavity_unitarity", (s.norm_sqr() - 1.0).abs(), tol(1e-10, floor), "exact propagator norm"))
}

fn addition_fidelity(_floor: f64) -> Result<Check> {
    let cut = Cutoffs::for_parameters(1.0, 0.5, 2);
    let (fg, _) = cavity::photon_addition_protocol(c(1.0, 0.0), c(0.5, 0.0), 1.0, 0.05, cut)?;
    Ok(Check::lower("photon_addition_fidelity", fg, 0.99 - 1e-15, "ground branch at mu t = 0.05"))
}

type ScalingRows = (Vec<f64>, Vec<(f64, f64, f64)>);

fn scaling_rows() -> Result<ScalingRows> {
    let ts: Vec<f64> = (0..7).map(|k| 1e-3 * 10f64.powf(k as f64 / 3.0)).collect();
    let rows = cavity::addition_scaling(c(1.0, 0.0), c(0.5, 0.0), &ts, Cutoffs::for_parameters(1.0, 0.5, 2))?;
    Ok((ts, rows))
}

fn addition_infidelity_slope(floor: f64) -> Result<Check> {
    let (ts, rows) = scaling_rows()?;
    let s = cavity::log_log_slope(&ts, &rows.iter().map(|r| r.1).collect::<Vec<_>>());
    Ok(Check::upper("photon_addition_infidelity_slope4", (s - 4.0).abs(), tol(0.1, floor), format!("slope {}", g12(s))))
}

fn addition_distance_slope(floor: f64) -> Result<Check> {
    let (ts, rows) = scaling_rows()?;
    let s = cavity::log_log_slope(&ts, &rows.iter().map(|r| r.2).collect::<Vec<_>>());
    Ok(Check::upper("photon_addition_distance_slope2", (s - 2.0).abs(), tol(0.1, floor), format!("slope {}", g12(s))))
}

fn iterated_addition(floor: f64) -> Result<Check> {
    let beta = c(0.6, 0.2);
    let alpha = c(0.3, 0.0);
    let cut = Cutoffs::for_parameters(beta.norm(), alpha.norm(), 4);
    let (f, _) = cavity::iterated_photon_addition(beta, alpha, 3, 1.0, 0.01, cut)?;
    Ok(Check::upper("iterated_photon_addition", 1.0 - f, tol(1e-6, floor), "3 rounds at mu t = 0.01"))
}

const SUITE: &[(&str, Runner)] = &[
    ("mandel_q0_flat", mandel_flat),
    ("mandel_band", mandel_band),
    ("mandel_q_origin", mandel_origin),
    ("mandel_q1_spot", mandel_spot),
    ("mandel_stable_vs_moments", mandel_forms),
    ("distribution_total", distribution_sum),
    ("distribution_restrictions", distribution_restrictions),
    ("lowest_level_support", lowest_level_claim),
    ("minimum_uncertainty_n0", minimum_uncertainty),
    ("uncertainty_excess", uncertainty_excess),
    ("sigma_pp_n1_closed", sigma_pp_first),
    ("sigma_pp_n2_spots", sigma_pp_spots),
    ("sigma_pp_at_most_half", sigma_pp_bound),
    ("covariance_grid_oracle", covariance_oracle),
    ("ladder_moments_oracle", expectations_oracle),
    ("commutator_xp", commutator),
    ("normalization_law", normalization_law),
    ("overlap_law", overlap_law),
    ("temporal_stability", temporal_stability),
    ("nonlinear_eigenvalue", nonlinear_eigen),
    ("nonlinear_negative_control", nonlinear_control),
    ("measure_moment_law", moment_law),
    ("density_k0_constant", density_constant),
    ("density_positive", density_positive),
    ("projector_step", projector),
    ("wavefunction_closed_forms", wavefunction_closed_forms),
    ("landau_orthonormality", orthonormality),
    ("laguerre_explicit_sum", laguerre_explicit),
    ("cavity_effective_closed_form", cavity_closed_form),
    ("cavity_phase_limits", cavity_limits),
    ("cavity_revival_branches", cavity_revival),
    ("cavity_strong_drive_monotone", cavity_strong_drive),
    ("cavity_unitarity", cavity_unitarity),
    ("photon_addition_fidelity", addition_fidelity),
    ("photon_addition_infidelity_slope4", addition_infidelity_slope),
    ("photon_addition_distance_slope2", addition_distance_slope),
    ("iterated_photon_addition", iterated_addition),
];

/// Names of every check, in report order.
pub fn check_names() -> Vec<&'static str> {
    SUITE.iter().map(|(n, _)| *n).collect()
}

/// Run the whole suite. Each tolerance is `max(intrinsic, tol_floor)`;
/// errors raised inside a check turn into a failed entry.
pub fn run_all(tol_floor: f64) -> Vec<Check> {
    SUITE
        .par_iter()
        .map(|&(name, f)| f(tol_floor).unwrap_or_else(|e| Check::failed(name, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_large_and_names_are_unique() {
        let names = check_names();
        assert!(names.len() >= 25);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }

    #[test]
    fn every_check_passes() {
        let checks = run_all(0.0);
        for (ch, name) in checks.iter().zip(check_names()) {
            assert_eq!(ch.name, name);
            assert!(ch.passed, "{}", ch.csv_line());
        }
    }

    #[test]
    fn floor_only_loosens() {
        let strict = mandel_flat(0.0).unwrap();
        let loose = mandel_flat(1e-3).unwrap();
        assert_eq!(strict.tolerance, 1e-10);
        assert_eq!(loose.tolerance, 1e-3);
        assert_eq!(mandel_flat(1e-30).unwrap().tolerance, 1e-10);
    }
}
