//! Acceptance criteria 1–13. Prints one line per criterion and exits
//! nonzero if any of them fails.
//!
//! Independent oracles live here: grid moments, operator-level covariances,
//! explicit Laguerre sums and factorial ratios are recomputed without the
//! closed-form helpers they check.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use landau_pacs::cavity::{self, Atom};
use landau_pacs::diagnostics::{self, covariance_report, grid_covariance, linspace};
use landau_pacs::fock::inner;
use landau_pacs::measure::{self, ProjectorQuadrature};
use landau_pacs::states::{self, pacs_state, photon_added_by_ladder, two_variable_cs};
use landau_pacs::wavefun::{self, PlaneQuadrature};
use landau_pacs::{CavityParams, Cutoffs, Mode, PhysicalScales, PolarPoint, Result, StateLabel, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn label(beta: C64, alpha: C64, n: usize) -> StateLabel {
    StateLabel::new(beta, alpha, n).expect("valid label")
}

/// Sub-checks of one criterion: `(description, passed)`.
struct Outcome {
    parts: Vec<(String, bool)>,
}

impl Outcome {
    fn new() -> Self {
        Self { parts: Vec::new() }
    }

    fn at_most(&mut self, what: &str, value: f64, tol: f64) {
        self.parts.push((format!("{what}: {value:.3e} <= {tol:.0e}"), value <= tol));
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.parts.push((what.to_string(), ok));
    }

    fn passed(&self) -> bool {
        self.parts.iter().all(|p| p.1)
    }
}

/// `(⟨N⟩, ⟨N²⟩)` of mode a summed straight off the grid.
fn grid_number_moments(lab: &StateLabel) -> (f64, f64) {
    let s = pacs_state(lab, lab.cutoffs()).unwrap();
    (s.number_moment(Mode::A, 1), s.number_moment(Mode::A, 2))
}

fn grid_mandel(lab: &StateLabel) -> f64 {
    let (m1, m2) = grid_number_moments(lab);
    (m2 - m1 * m1) / m1 - 1.0
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `L_n(y)` from the explicit sum.
fn laguerre_sum(n: usize, y: f64) -> f64 {
    (0..=n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * factorial(n) / (factorial(n - i) * factorial(i) * factorial(i)) * y.powi(i as i32)
        })
        .sum()
}

fn criterion_1() -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = linspace(0.0, 5.0, 200)?;
    let closed = grid.iter().map(|&b| diagnostics::mandel_q(c(b, 0.0), 0).abs()).fold(0.0, f64::max);
    o.at_most("max |Q_0| closed form", closed, 1e-10);
    let oracle = grid.iter().skip(1).step_by(11).map(|&b| grid_mandel(&label(c(b, 0.0), c(0.0, 0.0), 0)).abs()).fold(0.0, f64::max);
    o.at_most("max |Q_0| grid oracle", oracle, 1e-10);
    Ok(o)
}

fn criterion_2() -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = linspace(0.0, 5.0, 200)?;
    for n in 1..=5 {
        let q: Vec<f64> = grid.iter().map(|&b| diagnostics::mandel_q(c(b, 0.0), n)).collect();
        let inside = q.iter().all(|&v| (-1.0..=0.0).contains(&v));
        o.holds(&format!("Q_{n} in [-1, 0]"), inside);
        o.at_most(&format!("|Q_{n}(0) + 1|"), (q[0] + 1.0).abs(), 1e-10);
        let (q5, q05) = (diagnostics::mandel_q(c(5.0, 0.0), n), diagnostics::mandel_q(c(0.5, 0.0), n));
        o.holds(&format!("Q_{n}(5) > Q_{n}(0.5)"), q5 > q05);
    }
    Ok(o)
}

fn criterion_3() -> Result<Outcome> {
    let mut o = Outcome::new();
    let lab = label(c(1.0, 0.0), c(0.0, 0.0), 1);
    o.at_most("|Q_1(1) + 1/2| closed form", (diagnostics::mandel_q(lab.beta, 1) + 0.5).abs(), 1e-10);
    o.at_most("|Q_1(1) + 1/2| grid oracle", (grid_mandel(&lab) + 0.5).abs(), 1e-10);
    Ok(o)
}

fn criterion_4() -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_pp = 0.0f64;
    let mut worst_delta = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for _ in 0..10 {
        let sc = PhysicalScales::new(rng.random_range(0.5..2.0), rng.random_range(0.5..2.0), rng.random_range(0.5..2.0))?;
        let beta = C64::from_polar(rng.random_range(0.0..2.5), rng.random_range(0.0..2.0 * PI));
        let alpha = C64::from_polar(rng.random_range(0.0..2.0), rng.random_range(0.0..2.0 * PI));
        let lab = label(beta, alpha, 0);
        let r = covariance_report(&lab, &sc);
        let (pp0, d0) = (sc.mass * sc.hbar * sc.omega / 4.0, sc.hbar * sc.hbar / 4.0);
        worst_pp = worst_pp.max((r.sigma_pp - pp0).abs());
        worst_delta = worst_delta.max((r.delta - d0).abs());
        let (xx, pp, xp) = grid_covariance(&pacs_state(&lab, lab.cutoffs())?, &sc)?;
        worst_oracle = worst_oracle.max((pp - pp0).abs()).max((xx * pp - xp * xp - d0).abs());
    }
    o.at_most("max |sigma_pp - M hbar w/4|", worst_pp, 1e-12);
    o.at_most("max |Delta - hbar^2/4|", worst_delta, 1e-12);
    o.at_most("grid oracle, same quantities", worst_oracle, 1e-10);
    let sc = PhysicalScales::natural();
    for n in 1..=5 {
        let lab = label(c(1.0, 0.0), c(0.4, 0.0), n);
        let (xx, pp, xp) = grid_covariance(&pacs_state(&lab, lab.cutoffs())?, &sc)?;
        let d = covariance_report(&lab, &sc).delta;
        o.holds(&format!("Delta_{n}(|beta|=1) > 1/4"), d > 0.25 && xx * pp - xp * xp > 0.25);
    }
    Ok(o)
}

fn criterion_5() -> Result<Outcome> {
    let mut o = Outcome::new();
    let sc = PhysicalScales::natural();
    let grid = linspace(0.0, 5.0, 200)?;
    let mut worst = 0.0f64;
    for &b in &grid {
        let x = b * b;
        worst = worst.max((covariance_report(&label(c(b, 0.0), c(0.0, 0.0), 1), &sc).sigma_pp - (2.0 + x) / (4.0 * (1.0 + x))).abs());
    }
    o.at_most("sigma_pp(n=1, theta=0) vs (2+x)/(4(1+x))", worst, 1e-12);
    let a = covariance_report(&label(c(1.0, 0.0), c(0.0, 0.0), 2), &sc).sigma_pp;
    let b = covariance_report(&label(c(0.0, 1.0), c(0.0, 0.0), 2), &sc).sigma_pp;
    o.at_most("|sigma_pp(n=2, theta=0, 1) - 0.464286|", (a - 0.464286).abs(), 1e-5);
    o.at_most("|sigma_pp(n=2, theta=pi/2, 1) - 0.239796|", (b - 0.239796).abs(), 1e-5);
    let mut bound = true;
    let mut equality_only_at_origin = true;
    for n in 0..=1 {
        for th in [0.0, PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0] {
            for &bb in &grid {
                let s = covariance_report(&label(C64::from_polar(bb, th), c(0.0, 0.0), n), &sc).sigma_pp;
                bound &= s <= 0.5 + 1e-14;
                if (s - 0.5).abs() <= 1e-14 {
                    equality_only_at_origin &= n == 1 && bb == 0.0;
                }
            }
        }
    }
    o.holds("sigma_pp <= 1/2 for n in {0,1}", bound);
    o.holds("equality only at (n=1, beta=0)", equality_only_at_origin);
    // At theta = 0, n = 0 is flat at 1/4 and every higher n sits above it.
    let ordering = grid.iter().skip(1).all(|&bb| {
        let s: Vec<f64> = (0..=5).map(|n| covariance_report(&label(c(bb, 0.0), c(0.0, 0.0), n), &sc).sigma_pp).collect();
        s.iter().skip(1).all(|&v| v > s[0])
    });
    o.holds("sigma_pp(n>=1) > sigma_pp(n=0) at theta=0", ordering);
    Ok(o)
}

fn criterion_6() -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut worst = 0.0f64;
    for n in 0..=5 {
        for &b in &[0.0, 0.5, 1.0, 1.7, 2.4, 3.0] {
            let lab = label(C64::from_polar(b, 0.9), c(0.2, -0.3), n);
            let raw = photon_added_by_ladder(&lab, lab.cutoffs())?;
            let want = factorial(n) * laguerre_sum(n, -b * b);
            worst = worst.max((raw.norm_sqr() - want).abs() / want);
        }
    }
    o.at_most("relative |norm^2 - n! L_n(-x)|", worst, 1e-10);
    Ok(o)
}

fn criterion_7() -> Result<Outcome> {
    let mut o = Outcome::new();
    let beta = c(0.9, -0.4);
    let alpha = c(0.3, 0.2);
    let cut = Cutoffs::for_parameters(beta.norm(), alpha.norm(), 5);
    let st: Vec<_> = (0..=5).map(|n| pacs_state(&label(beta, alpha, n), cut)).collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for n1 in 0..=5 {
        for n2 in 0..=5 {
            worst = worst.max((inner(&st[n2], &st[n1]) - states::overlap_analytic(beta, n1, n2)).norm());
        }
    }
    o.at_most("closed-form overlap vs grid", worst, 1e-10);
    o.at_most("|overlap(1; 1, 0) - 1/sqrt2|", (states::overlap_analytic(c(1.0, 0.0), 1, 0) - FRAC_1_SQRT_2).norm(), 1e-15);
    Ok(o)
}

fn criterion_8() -> Result<Outcome> {
    let mut o = Outcome::new();
    let worst = (0..=5).map(|n| measure::verify_moments(n, 20)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    o.at_most("moment law, n<=5, k<=20 (relative)", worst, 1e-8);
    let law = (0..=5).flat_map(|n| (0..=20).map(move |k| (n, k))).map(|(n, k)| {
        let want = factorial(k).powi(2) / factorial(n + k);
        ((measure::moment_law(n, k) - want) / want).abs()
    });
    o.at_most("moment targets vs k!^2/(n+k)!", law.fold(0.0, f64::max), 1e-13);
    let k0 = [0.0, 0.3, 1.0, 2.0, 5.0].iter().map(|&b| (measure::density_k(0, b).unwrap() - 1.0 / PI).abs()).fold(0.0, f64::max);
    o.at_most("|K_0 - 1/pi|", k0, 1e-14);
    let q = ProjectorQuadrature::default();
    let mut dev = 0.0f64;
    for n in 0..=5 {
        let rep = measure::reconstruct_projector(n, c(0.5, 0.0), &q, 12)?;
        for (j, d) in rep.diagonal.iter().enumerate() {
            dev = dev.max((d - if j >= n { 1.0 } else { 0.0 }).abs());
        }
        dev = dev.max(rep.max_off_diagonal);
    }
    o.at_most("projector diagonal step deviation", dev, 1e-6);
    Ok(o)
}

fn criterion_9() -> Result<Outcome> {
    let mut o = Outcome::new();
    let sc = PhysicalScales::new(1.1, 0.9, 1.4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pts: Vec<PolarPoint> = (0..20).map(|_| PolarPoint::new(rng.random_range(0.0..3.0), rng.random_range(0.0..2.0 * PI)).unwrap()).collect();
    let beta = c(0.8, -0.6);
    let alpha = c(-0.5, 0.4);
    let mut landau = 0.0f64;
    let mut displaced = 0.0f64;
    let mut pacs = 0.0f64;
    let mut tv = 0.0f64;
    let tv_state = two_variable_cs(beta, alpha, Cutoffs::for_parameters(beta.norm(), alpha.norm(), 0))?;
    for &p in &pts {
        for (n, m) in [(0usize, 0i64), (1, 2), (3, -2), (2, 1)] {
            let cut = Cutoffs::new(n + 1, (n as i64 + m) as usize + 1);
            let s = landau_pacs::TwoModeState::basis(cut, landau_pacs::LevelIndex::new(n, m)?)?;
            landau = landau.max((wavefun::landau_psi(n, m, p, &sc)? - wavefun::basis_sum_psi(&s, p, &sc)).norm());
        }
        for n in 0..=3 {
            let s = states::displaced_number_state(alpha, n, Cutoffs::for_parameters(0.0, alpha.norm(), n))?;
            displaced = displaced.max((wavefun::displaced_number_psi(alpha, n, p, &sc) - wavefun::basis_sum_psi(&s, p, &sc)).norm());
            let lab = label(beta, alpha, n);
            let g = pacs_state(&lab, lab.cutoffs())?;
            pacs = pacs.max((wavefun::pacs_psi(&lab, p, &sc) - wavefun::basis_sum_psi(&g, p, &sc)).norm());
        }
        tv = tv.max((wavefun::two_variable_psi(beta, alpha, p, &sc) - wavefun::basis_sum_psi(&tv_state, p, &sc)).norm());
    }
    o.at_most("Landau level closed form vs basis", landau, 1e-8);
    o.at_most("displaced number state", displaced, 1e-8);
    o.at_most("two-variable coherent state", tv, 1e-8);
    o.at_most("photon-added state", pacs, 1e-8);
    let (_, gram) = wavefun::landau_gram(4, 4, &PlaneQuadrature::default(), &sc);
    let mut g = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            g = g.max((v - if i == j { 1.0 } else { 0.0 }).norm());
        }
    }
    o.at_most("orthonormality matrix", g, 1e-8);
    Ok(o)
}

fn criterion_10() -> Result<Outcome> {
    let mut o = Outcome::new();
    let sc = PhysicalScales::new(1.0, 1.0, 1.3)?;
    let mut worst = 0.0f64;
    for lab in [label(c(1.0, 0.5), c(0.7, 0.0), 0), label(c(-0.4, 1.1), c(0.0, 0.6), 2), label(c(1.5, -0.2), c(0.9, 0.9), 5)] {
        let cut = lab.cutoffs();
        let psi = pacs_state(&lab, cut)?;
        for k in 0..10 {
            let t = 0.61 * k as f64;
            // Oracle: diagonal propagation, phase e^{-i(n_a+1/2)wt} per level.
            let exact = psi.map_diagonal(|na, _| C64::from_polar(1.0, -(na as f64 + 0.5) * sc.omega * t));
            let (phase, new) = states::evolve_label(&lab, t, &sc);
            let target = pacs_state(&new, cut)?.scaled(phase);
            let f = inner(&target, &exact).norm_sqr() / (target.norm_sqr() * exact.norm_sqr());
            worst = worst.max(1.0 - f);
        }
    }
    o.at_most("1 - fidelity over 10 times x 3 labels", worst, 1e-12);
    Ok(o)
}

fn criterion_11() -> Result<Outcome> {
    let mut o = Outcome::new();
    let beta = c(1.0, 0.5);
    let alpha = c(0.7, 0.0);
    let cut = Cutoffs::for_parameters(beta.norm(), alpha.norm(), 5);
    let mut worst = 0.0f64;
    for n in 0..=5 {
        worst = worst.max(states::nonlinear_residual(&label(beta, alpha, n), cut)?);
    }
    o.at_most("residual, n <= 5", worst, 1e-10);
    let s = pacs_state(&label(beta, alpha, 3), cut)?;
    let control = states::nonlinear_residual_of(&s, beta, 0)?;
    o.holds(&format!("negative control residual {control:.3e} > 1e-3"), control > 1e-3);
    Ok(o)
}

fn criterion_12() -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..6 {
        let p = CavityParams::new(
            rng.random_range(0.5..40.0),
            rng.random_range(0.0..2.0),
            rng.random_range(0.0..2.0),
            rng.random_range(0.0..2.0 * PI),
            0.0,
            rng.random_range(0.1..1.5),
        )?;
        let cut = p.cutoffs();
        worst = worst.max(cavity::effective_evolve(&p, cut)?.max_abs_diff(&cavity::closed_form_superposition(&p, cut)?));
    }
    o.at_most("effective evolution vs superposition closed form", worst, 1e-10);

    let g = 3.0;
    let t = 2.0 * PI / g;
    for (phi, sign, name) in [(2.0 * PI, 1.0, "phi = 2pi -> |beta,alpha>"), (PI, -1.0, "phi = pi -> |-beta,-alpha>")] {
        let p = CavityParams::new(g, 0.9, 0.4, phi, 0.0, t)?;
        let cut = p.cutoffs();
        let (beta, alpha) = p.labels();
        let target = two_variable_cs(sign * beta, sign * alpha, cut)?;
        let s = cavity::effective_evolve(&p, cut)?;
        let inf = [Atom::Ground, Atom::Excited].iter().map(|&a| 1.0 - cavity::field_fidelity(&target, s.component(a))).fold(0.0, f64::max);
        o.at_most(name, inf, 1e-10);
    }

    let beta = c(1.0, 0.0);
    let alpha = c(0.5, 0.0);
    let cut = Cutoffs::for_parameters(1.0, 0.5, 2);
    let (fg, _) = cavity::photon_addition_protocol(beta, alpha, 1.0, 0.05, cut)?;
    o.holds(&format!("ground-branch fidelity {fg:.6} >= 0.99 at mu t = 0.05"), fg >= 0.99);
    let ts: Vec<f64> = (0..=6).map(|k| 1e-3 * 10f64.powf(k as f64 / 3.0)).collect();
    let rows = cavity::addition_scaling(beta, alpha, &ts, cut)?;
    let inf: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let slope = cavity::log_log_slope(&ts, &inf);
    o.holds(&format!("infidelity log-log slope {slope:.4} within 2 +/- 0.1"), (slope - 2.0).abs() <= 0.1);
    Ok(o)
}

fn criterion_13() -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut total = 0.0f64;
    for n in 0..=5 {
        let lab = label(c(1.2, 0.3), c(0.8, -0.5), n);
        let cut = lab.cutoffs();
        total = total.max((diagnostics::distribution_total(&lab, cut.a, cut.b) - 1.0).abs());
    }
    o.at_most("|sum p(n,m) - 1|", total, 1e-10);
    let mut floor = 0.0f64;
    let mut angular = 0.0f64;
    for n_exc in 0..=5 {
        let lab = label(c(0.7, -0.2), c(1.0, 0.4), n_exc);
        for m in -(n_exc as i64)..10 {
            floor = floor.max((diagnostics::photon_probability(&lab, n_exc, m) - diagnostics::level_floor_probability(&lab, m)).abs());
        }
        for n in n_exc..15 {
            angular = angular.max((diagnostics::photon_probability(&lab, n, -(n as i64)) - diagnostics::lowest_angular_probability(&lab, n)).abs());
        }
    }
    o.at_most("n = n_exc restriction", floor, 1e-15);
    o.at_most("m = -n restriction", angular, 1e-15);
    let mut empty = true;
    let mut claim_positive = true;
    for n_exc in 1..=5 {
        let lab = label(c(0.7, -0.2), c(1.0, 0.4), n_exc);
        empty &= (0..8).all(|m| diagnostics::photon_probability(&lab, 0, m) == 0.0);
        claim_positive &= diagnostics::lowest_level_poisson_claim(&lab, 0) > 0.0;
    }
    o.holds("n = 0 level has probability 0 for n_exc >= 1", empty);
    o.holds("the Poisson lowest-level form is nonzero there (inconsistent)", claim_positive);
    let lab0 = label(c(0.7, -0.2), c(1.0, 0.4), 0);
    let agree = (0..8).map(|m| (diagnostics::photon_probability(&lab0, 0, m) - diagnostics::lowest_level_poisson_claim(&lab0, m)).abs()).fold(0.0, f64::max);
    o.at_most("Poisson lowest-level form at n_exc = 0", agree, 1e-15);
    Ok(o)
}

type Criterion = fn() -> Result<Outcome>;

fn main() {
    let criteria: [(usize, Criterion, Duration); 13] = [
        (1, criterion_1, Duration::from_secs(1)),
        (2, criterion_2, Duration::from_secs(5)),
        (3, criterion_3, Duration::from_secs(60)),
        (4, criterion_4, Duration::from_secs(60)),
        (5, criterion_5, Duration::from_secs(60)),
        (6, criterion_6, Duration::from_secs(60)),
        (7, criterion_7, Duration::from_secs(60)),
        (8, criterion_8, Duration::from_secs(60)),
        (9, criterion_9, Duration::from_secs(60)),
        (10, criterion_10, Duration::from_secs(60)),
        (11, criterion_11, Duration::from_secs(60)),
        (12, criterion_12, Duration::from_secs(120)),
        (13, criterion_13, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    for (id, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, notes) = match result {
            Ok(o) => {
                let notes: Vec<String> = o.parts.iter().filter(|p| !p.1).map(|p| p.0.clone()).collect();
                (o.passed(), notes)
            }
            Err(e) => (false, vec![format!("error: {e}")]),
        };
        let in_time = elapsed <= budget;
        let pass = ok && in_time;
        let mut line = format!("criterion {id:>2}: {} ({:.2}s)", if pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
        if !in_time {
            line.push_str(&format!(" [over budget {}s]", budget.as_secs()));
        }
        for n in &notes {
            line.push_str(&format!(" [failed: {n}]"));
        }
        println!("{line}");
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: 13/13 criteria passed");
    } else {
        println!("acceptance: {}/13 criteria passed; failing: {failed:?}", 13 - failed.len());
        std::process::exit(1);
    }
}
