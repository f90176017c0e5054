//! Cavity generation schemes.
//!
//! Atomic blocks are ordered (ground, excited); `σ₊ = |e⟩⟨g|` maps the
//! ground block into the excited block and `σz = diag(−1, +1)`. Flat vectors
//! on the atom⊗field space are `[ground grid, excited grid]`, each grid in
//! row-major Fock order.
//!
//! Two propagation routes are provided: the factorised strong-drive
//! propagator `R† T†(t) U_eff T(0) R` applied operator by operator, and an
//! exact propagator for an arbitrary Hermitian Hamiltonian on the truncated
//! space. The photon-addition protocol uses the latter.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::fock::{inner, Cutoffs, Ladder, LevelIndex, Mode, TwoModeState, MAX_TAIL};
use crate::linalg::{self, SparseOperator};
use crate::states::{pacs_state, two_variable_cs, StateLabel};
use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Allowed drift of the total norm under a propagator.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Smallest post-selection probability accepted.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-14;

/// Relative Hermiticity defect above which a Hamiltonian is rejected.
const HERMITIAN_TOL: f64 = 1e-12;

/// Atomic level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Ground,
    Excited,
}

/// Joint atom–field state: one two-mode field component per atomic level.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomFieldState {
    pub ground_component: TwoModeState,
    pub excited_component: TwoModeState,
}

impl AtomFieldState {
    pub fn new(ground: TwoModeState, excited: TwoModeState) -> Result<Self> {
        if ground.cutoffs() != excited.cutoffs() {
            return Err(Error::InvalidArgument("atomic components live on different grids".into()));
        }
        Ok(Self { ground_component: ground, excited_component: excited })
    }

    /// `field ⊗ |atom⟩`.
    pub fn product(field: &TwoModeState, atom: Atom) -> Self {
        let zero = TwoModeState::zeros(field.cutoffs());
        match atom {
            Atom::Ground => Self { ground_component: field.clone(), excited_component: zero },
            Atom::Excited => Self { ground_component: zero, excited_component: field.clone() },
        }
    }

    pub fn cutoffs(&self) -> Cutoffs {
        self.ground_component.cutoffs()
    }

    pub fn component(&self, atom: Atom) -> &TwoModeState {
        match atom {
            Atom::Ground => &self.ground_component,
            Atom::Excited => &self.excited_component,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ground_component.norm_sqr() + self.excited_component.norm_sqr()
    }

    pub fn tail_bound(&self) -> f64 {
        self.ground_component.tail_bound() + self.excited_component.tail_bound()
    }

    /// Probability of detecting the atom in `atom`.
    pub fn probability(&self, atom: Atom) -> f64 {
        self.component(atom).norm_sqr() / self.norm_sqr()
    }

    /// Normalized field state conditioned on detecting `atom`.
    pub fn post_select(&self, atom: Atom) -> Result<TwoModeState> {
        let p = self.probability(atom);
        if p.is_nan() || p < MIN_BRANCH_PROBABILITY {
            return Err(Error::PostSelection(p));
        }
        Ok(self.component(atom).normalized())
    }

    /// `[ground, excited]` flattened.
    pub fn to_vec(&self) -> Vec<C64> {
        let mut v = self.ground_component.to_vec();
        v.extend(self.excited_component.to_vec());
        v
    }

    pub fn from_vec(cutoffs: Cutoffs, v: &[C64], tail: f64) -> Result<Self> {
        let d = cutoffs.dim();
        if v.len() != 2 * d {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} does not match atom-field dimension {}",
                v.len(),
                2 * d
            )));
        }
        Ok(Self {
            ground_component: TwoModeState::from_vec(cutoffs, &v[..d], 0.5 * tail)?,
            excited_component: TwoModeState::from_vec(cutoffs, &v[d..], 0.5 * tail)?,
        })
    }

    /// Largest entry-wise difference, after embedding both in common cutoffs.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let diff = |u: &TwoModeState, v: &TwoModeState| {
            u.sub(v).amplitudes().iter().map(|z| z.norm()).fold(0.0, f64::max)
        };
        diff(&self.ground_component, &other.ground_component)
            .max(diff(&self.excited_component, &other.excited_component))
    }

    /// `|⟨self|other⟩|² / (‖self‖² ‖other‖²)`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let ov = inner(&self.ground_component, &other.ground_component)
            + inner(&self.excited_component, &other.excited_component);
        ov.norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    /// Apply a 2×2 atomic matrix (rows/columns ordered ground, excited).
    fn apply_atomic(&self, m: [[C64; 2]; 2]) -> Self {
        let (g, e) = (&self.ground_component, &self.excited_component);
        Self {
            ground_component: g.scaled(m[0][0]).add(&e.scaled(m[0][1])),
            excited_component: g.scaled(m[1][0]).add(&e.scaled(m[1][1])),
        }
    }
}

/// Couplings and timing of the two cavity schemes (`ħ = 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityParams {
    /// Classical-drive coupling.
    pub g: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// Drive phase φ.
    pub phi: f64,
    /// Photon-addition coupling μ.
    pub mu: f64,
    pub t: f64,
}

impl CavityParams {
    pub fn new(g: f64, omega1: f64, omega2: f64, phi: f64, mu: f64, t: f64) -> Result<Self> {
        for (name, v) in [("g", g), ("omega1", omega1), ("omega2", omega2), ("phi", phi), ("mu", mu), ("t", t)] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self { g, omega1, omega2, phi, mu, t })
    }

    /// Whether the classical drive dominates the cavity couplings by at
    /// least a factor of ten.
    pub fn strong_drive(&self) -> bool {
        self.g.abs() >= 10.0 * self.omega1.abs().max(self.omega2.abs())
    }

    /// `(β, α) = (iΩ₁t e^{−iφ}/2, iΩ₂t e^{−iφ}/2)`: the displacements the
    /// excited block acquires under `U_eff`.
    pub fn labels(&self) -> (C64, C64) {
        let rot = I * C64::from_polar(0.5 * self.t, -self.phi);
        (rot * self.omega1, rot * self.omega2)
    }

    /// Cutoffs large enough for both `|±β, ±α⟩`.
    pub fn cutoffs(&self) -> Cutoffs {
        let (b, a) = self.labels();
        Cutoffs::for_parameters(b.norm(), a.norm(), 0)
    }
}

fn check_hermitian(err: f64, scale: f64) -> Result<()> {
    if err > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NonHermitian(err));
    }
    Ok(())
}

fn check_drift(before: f64, after: f64) -> Result<()> {
    let drift = (after - before).abs() / before.max(f64::MIN_POSITIVE);
    if drift > UNITARITY_TOL {
        return Err(Error::UnitarityDrift(drift));
    }
    Ok(())
}

/// Probability mass on the outermost Fock layer of either mode, used as the
/// spill estimate after exact propagation.
fn edge_mass(s: &AtomFieldState) -> f64 {
    let c = s.cutoffs();
    let layer = |f: &TwoModeState| {
        f.amplitudes()
            .indexed_iter()
            .filter(|((i, j), _)| *i == c.a || *j == c.b)
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
    };
    layer(&s.ground_component) + layer(&s.excited_component)
}

fn finish_exact(initial: &AtomFieldState, v: &[C64]) -> Result<AtomFieldState> {
    let c = initial.cutoffs();
    let before = initial.norm_sqr();
    let out = AtomFieldState::from_vec(c, v, 0.0)?;
    check_drift(before, out.norm_sqr())?;
    let spill = edge_mass(&out);
    let tail = initial.tail_bound() + spill;
    if spill > MAX_TAIL {
        return Err(Error::Truncation { what: "exact propagation edge", lost: spill, allowed: MAX_TAIL });
    }
    AtomFieldState::from_vec(c, v, tail)
}

/// `e^{−iHt} ψ` with a dense Hamiltonian, through the matrix exponential.
pub fn exact_evolve_dense(h: &Array2<C64>, t: f64, initial: &AtomFieldState) -> Result<AtomFieldState> {
    let d = 2 * initial.cutoffs().dim();
    if h.dim() != (d, d) {
        return Err(Error::InvalidArgument(format!("Hamiltonian is {:?}, state needs {d}x{d}", h.dim())));
    }
    check_hermitian(linalg::hermiticity_error(h), linalg::norm_1(h))?;
    let u = linalg::expm(&h.mapv(|z| z * C64::new(0.0, -t)))?;
    finish_exact(initial, &linalg::matvec(&u, &initial.to_vec()))
}

/// `e^{−iHt} ψ` with a sparse Hamiltonian, through its action on the vector.
pub fn exact_evolve(h: &SparseOperator, t: f64, initial: &AtomFieldState) -> Result<AtomFieldState> {
    let d = 2 * initial.cutoffs().dim();
    if h.dim() != d {
        return Err(Error::InvalidArgument(format!("Hamiltonian has dimension {}, state needs {d}", h.dim())));
    }
    check_hermitian(h.hermiticity_error(), h.norm_1())?;
    finish_exact(initial, &linalg::expm_multiply(h, &initial.to_vec(), t))
}

fn block_index(c: Cutoffs, atom: Atom, na: usize, nb: usize) -> usize {
    let off = match atom {
        Atom::Ground => 0,
        Atom::Excited => c.dim(),
    };
    off + c.flat_index(na, nb)
}

/// Triplets of `coef · (mode σ₊ + h.c.)`, i.e. `coef(a σ₊ + a† σ₋)`.
fn jaynes_cummings_triplets(c: Cutoffs, mode: Mode, coef: C64, out: &mut Vec<(usize, usize, C64)>) {
    for na in 0..=c.a {
        for nb in 0..=c.b {
            // a|na, nb⟩|g⟩ → √na |na−1, nb⟩|e⟩
            let (ok, ta, tb, amp) = match mode {
                Mode::A => (na > 0, na.wrapping_sub(1), nb, (na as f64).sqrt()),
                Mode::B => (nb > 0, na, nb.wrapping_sub(1), (nb as f64).sqrt()),
            };
            if !ok {
                continue;
            }
            let from = block_index(c, Atom::Ground, na, nb);
            let to = block_index(c, Atom::Excited, ta, tb);
            out.push((to, from, coef * amp));
            out.push((from, to, coef.conj() * amp));
        }
    }
}

/// Lab-frame Hamiltonian whose strong-drive limit is the factorised
/// propagator:
/// `H = g(σ₊e^{−iφ} + σ₋e^{iφ}) − Ω₁(aσ₊ + a†σ₋) − Ω₂(bσ₊ + b†σ₋)`.
pub fn strong_drive_hamiltonian(params: &CavityParams, cutoffs: Cutoffs) -> Result<SparseOperator> {
    let mut trip = Vec::new();
    let drive = C64::from_polar(params.g, -params.phi);
    for na in 0..=cutoffs.a {
        for nb in 0..=cutoffs.b {
            let gi = block_index(cutoffs, Atom::Ground, na, nb);
            let ei = block_index(cutoffs, Atom::Excited, na, nb);
            trip.push((ei, gi, drive));
            trip.push((gi, ei, drive.conj()));
        }
    }
    jaynes_cummings_triplets(cutoffs, Mode::A, C64::new(-params.omega1, 0.0), &mut trip);
    jaynes_cummings_triplets(cutoffs, Mode::B, C64::new(-params.omega2, 0.0), &mut trip);
    SparseOperator::from_triplets(2 * cutoffs.dim(), trip)
}

/// `H_int = μ(σ₊a + σ₋a†)`.
pub fn photon_addition_hamiltonian(mu: f64, cutoffs: Cutoffs) -> Result<SparseOperator> {
    let mut trip = Vec::new();
    jaynes_cummings_triplets(cutoffs, Mode::A, C64::new(mu, 0.0), &mut trip);
    SparseOperator::from_triplets(2 * cutoffs.dim(), trip)
}

/// `ħω(a†a + ½) ⊗ 1_atom`.
pub fn free_field_hamiltonian(omega: f64, cutoffs: Cutoffs) -> Result<SparseOperator> {
    let mut trip = Vec::new();
    for atom in [Atom::Ground, Atom::Excited] {
        for na in 0..=cutoffs.a {
            for nb in 0..=cutoffs.b {
                let k = block_index(cutoffs, atom, na, nb);
                trip.push((k, k, C64::new(omega * (na as f64 + 0.5), 0.0)));
            }
        }
    }
    SparseOperator::from_triplets(2 * cutoffs.dim(), trip)
}

/// `R = e^{(π/4)(σ₊−σ₋)} e^{(iφ/2)σz}`.
fn rotation(phi: f64) -> [[C64; 2]; 2] {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let (bg, be) = (C64::from_polar(1.0, -0.5 * phi), C64::from_polar(1.0, 0.5 * phi));
    [[h * bg, -h * be], [h * bg, h * be]]
}

fn dagger(m: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

/// `e^{igσz t}`.
fn drive_phase(g: f64, t: f64) -> [[C64; 2]; 2] {
    [[C64::from_polar(1.0, -g * t), ZERO], [ZERO, C64::from_polar(1.0, g * t)]]
}

/// `exp(s·iΩt/2 (x† e^{−iφ} + x e^{iφ}))` on one mode truncated at `dim`.
fn quadrature_propagator(coupling: f64, t: f64, phi: f64, sign: f64, dim: usize) -> Result<Array2<C64>> {
    let z = I * C64::from_polar(sign * 0.5 * coupling * t, -phi);
    let mut gen = Array2::<C64>::zeros((dim, dim));
    for k in 1..dim {
        let s = (k as f64).sqrt();
        gen[[k, k - 1]] = z * s;
        gen[[k - 1, k]] = -z.conj() * s;
    }
    linalg::expm(&gen)
}

fn apply_mode(state: &TwoModeState, mode: Mode, m: &Array2<C64>) -> Result<TwoModeState> {
    let amps = state.amplitudes();
    let out = match mode {
        Mode::A => m.dot(amps),
        Mode::B => amps.dot(&m.t()),
    };
    TwoModeState::from_parts(out, state.tail_bound())
}

/// `(|g⟩ + |e⟩)/√2 ⊗ |0,0⟩`.
pub fn initial_superposition(cutoffs: Cutoffs) -> AtomFieldState {
    let vac = TwoModeState::basis(cutoffs, LevelIndex::new(0, 0).expect("ground level")).expect("vacuum fits any grid");
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    AtomFieldState { ground_component: vac.scaled(h), excited_component: vac.scaled(h) }
}

/// Cut a padded state back to `cutoffs`, moving the discarded mass into the
/// tail bound.
fn restrict(s: &TwoModeState, cutoffs: Cutoffs) -> Result<(TwoModeState, f64)> {
    let amps = s.amplitudes();
    let lost: f64 = amps
        .indexed_iter()
        .filter(|((i, j), _)| *i > cutoffs.a || *j > cutoffs.b)
        .map(|(_, z)| z.norm_sqr())
        .sum();
    let kept = Array2::from_shape_fn((cutoffs.a + 1, cutoffs.b + 1), |(i, j)| amps[[i, j]]);
    Ok((TwoModeState::from_parts(kept, s.tail_bound() + lost)?, lost))
}

/// `ψ(t) = R† T†(t) U_eff T(0) R ψ(0)` from the equal-weight atom and field
/// vacuum, applied operator by operator.
///
/// The field propagators are exponentiated on a grid twice as deep as
/// `cutoffs` and the result cut back, so the truncation of the generator
/// does not leak into the retained amplitudes.
pub fn effective_evolve(params: &CavityParams, cutoffs: Cutoffs) -> Result<AtomFieldState> {
    let pad = Cutoffs::new(2 * cutoffs.a + 20, 2 * cutoffs.b + 20);
    let mut s = initial_superposition(pad);
    let before = s.norm_sqr();
    let r = rotation(params.phi);
    s = s.apply_atomic(r);
    s = s.apply_atomic(drive_phase(params.g, 0.0));
    let (p, t) = (params.phi, params.t);
    let ea = quadrature_propagator(params.omega1, t, p, 1.0, pad.a + 1)?;
    let eb = quadrature_propagator(params.omega2, t, p, 1.0, pad.b + 1)?;
    let ga = quadrature_propagator(params.omega1, t, p, -1.0, pad.a + 1)?;
    let gb = quadrature_propagator(params.omega2, t, p, -1.0, pad.b + 1)?;
    s.excited_component = apply_mode(&apply_mode(&s.excited_component, Mode::A, &ea)?, Mode::B, &eb)?;
    s.ground_component = apply_mode(&apply_mode(&s.ground_component, Mode::A, &ga)?, Mode::B, &gb)?;
    s = s.apply_atomic(dagger(drive_phase(params.g, t)));
    s = s.apply_atomic(dagger(r));
    check_drift(before, s.norm_sqr())?;
    let (g, lg) = restrict(&s.ground_component, cutoffs)?;
    let (e, le) = restrict(&s.excited_component, cutoffs)?;
    if lg + le > MAX_TAIL {
        return Err(Error::Truncation { what: "effective cavity evolution", lost: lg + le, allowed: MAX_TAIL });
    }
    AtomFieldState::new(g, e)
}

/// Closed form of the factorised evolution:
///
/// `ψ(t) = e^{iφ/2}(A|β,α⟩ + B|−β,−α⟩)/√2 |g⟩ + e^{−iφ/2}(A|β,α⟩ − B|−β,−α⟩)/√2 |e⟩`
///
/// with `A = cos(φ/2) e^{−igt}`, `B = −i sin(φ/2) e^{igt}` and `(β, α)` from
/// [`CavityParams::labels`].
pub fn closed_form_superposition(params: &CavityParams, cutoffs: Cutoffs) -> Result<AtomFieldState> {
    let (beta, alpha) = params.labels();
    let plus = two_variable_cs(beta, alpha, cutoffs)?;
    let minus = two_variable_cs(-beta, -alpha, cutoffs)?;
    let (p, gt) = (params.phi, params.g * params.t);
    let a = C64::from_polar((0.5 * p).cos(), -gt);
    let b = -I * C64::from_polar((0.5 * p).sin(), gt);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let fa = plus.scaled(a);
    let fb = minus.scaled(b);
    AtomFieldState::new(
        fa.add(&fb).scaled(C64::from_polar(h, 0.5 * p)),
        fa.sub(&fb).scaled(C64::from_polar(h, -0.5 * p)),
    )
}

/// Field states left after detecting the atom at a revival `gt = 2kπ`, with
/// the conventional factor `N = √2` (not a true normalization: it ignores
/// the overlap of `|β,α⟩` and `|−β,−α⟩`). Returns `(ψ_g, ψ_e)`.
pub fn revival_branch_fields(params: &CavityParams, cutoffs: Cutoffs) -> Result<(TwoModeState, TwoModeState)> {
    let (beta, alpha) = params.labels();
    let plus = two_variable_cs(beta, alpha, cutoffs)?;
    let minus = two_variable_cs(-beta, -alpha, cutoffs)?;
    let p = params.phi;
    let fa = plus.scaled(C64::new((0.5 * p).cos(), 0.0));
    let fb = minus.scaled(-I * (0.5 * p).sin());
    Ok((
        fa.add(&fb).scaled(C64::from_polar(1.0, 0.5 * p)),
        fa.sub(&fb).scaled(C64::from_polar(1.0, -0.5 * p)),
    ))
}

/// Field fidelity `|⟨u|v⟩|²/(‖u‖²‖v‖²)`.
pub fn field_fidelity(u: &TwoModeState, v: &TwoModeState) -> f64 {
    inner(u, v).norm_sqr() / (u.norm_sqr() * v.norm_sqr())
}

/// `1 − F` computed as the squared residual `‖v̂ − ⟨û|v̂⟩û‖²`, which keeps
/// full relative accuracy when the fidelity is close to one.
pub fn field_infidelity(u: &TwoModeState, v: &TwoModeState) -> f64 {
    let (u, v) = (u.normalized(), v.normalized());
    v.sub(&u.scaled(inner(&u, &v))).norm_sqr()
}

/// Outcome of one photon-addition run.
#[derive(Clone, Debug, PartialEq)]
pub struct AdditionOutcome {
    pub ground_probability: f64,
    pub ground_fidelity: f64,
    pub ground_infidelity: f64,
    pub excited_fidelity: f64,
    pub ground_field: TwoModeState,
}

fn one_round(field: &TwoModeState, mu: f64, t: f64) -> Result<(AtomFieldState, TwoModeState)> {
    let c = field.cutoffs();
    let h = photon_addition_hamiltonian(mu, c)?;
    let out = exact_evolve(&h, t, &AtomFieldState::product(field, Atom::Excited))?;
    let ground = out.post_select(Atom::Ground)?;
    Ok((out, ground))
}

/// Evolve `|β,α⟩|e⟩` under `H_int = μ(σ₊a + σ₋a†)` for time `t`, then
/// post-select on the atom. The ground branch is compared with
/// `|β,α;1⟩`, the excited branch with `|β,α⟩`.
pub fn photon_addition(beta: C64, alpha: C64, mu: f64, t: f64, cutoffs: Cutoffs) -> Result<AdditionOutcome> {
    let cs = two_variable_cs(beta, alpha, cutoffs)?;
    let target = pacs_state(&StateLabel::new(beta, alpha, 1)?, cutoffs)?;
    let (out, ground) = one_round(&cs, mu, t)?;
    let excited = out.post_select(Atom::Excited)?;
    Ok(AdditionOutcome {
        ground_probability: out.probability(Atom::Ground),
        ground_fidelity: field_fidelity(&target, &ground),
        ground_infidelity: field_infidelity(&target, &ground),
        excited_fidelity: field_fidelity(&cs, &excited),
        ground_field: ground,
    })
}

/// `(ground_branch_fidelity, excited_branch_fidelity)` of [`photon_addition`].
pub fn photon_addition_protocol(beta: C64, alpha: C64, mu: f64, t: f64, cutoffs: Cutoffs) -> Result<(f64, f64)> {
    let o = photon_addition(beta, alpha, mu, t, cutoffs)?;
    Ok((o.ground_fidelity, o.excited_fidelity))
}

/// `rounds` repetitions of the protocol, re-preparing the atom in `|e⟩` and
/// keeping only ground detections. Returns the fidelity of the final field
/// with `|β,α;rounds⟩` and the joint success probability.
pub fn iterated_photon_addition(
    beta: C64,
    alpha: C64,
    rounds: usize,
    mu: f64,
    t: f64,
    cutoffs: Cutoffs,
) -> Result<(f64, f64)> {
    let mut field = two_variable_cs(beta, alpha, cutoffs)?;
    let mut success = 1.0;
    for _ in 0..rounds {
        let (out, ground) = one_round(&field, mu, t)?;
        success *= out.probability(Atom::Ground);
        field = ground;
    }
    let target = pacs_state(&StateLabel::new(beta, alpha, rounds)?, cutoffs)?;
    Ok((field_fidelity(&target, &field), success))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Ground-branch infidelities and trace distances `√(1 − F)` over a grid of
/// interaction times (fixed `μ = 1`).
pub fn addition_scaling(beta: C64, alpha: C64, mu_ts: &[f64], cutoffs: Cutoffs) -> Result<Vec<(f64, f64, f64)>> {
    mu_ts
        .iter()
        .map(|&mt| {
            let o = photon_addition(beta, alpha, 1.0, mt, cutoffs)?;
            Ok((mt, o.ground_infidelity, o.ground_infidelity.sqrt()))
        })
        .collect()
}

/// `a†|β,α⟩` normalized: the field predicted at first order in `μt`.
pub fn first_order_prediction(beta: C64, alpha: C64, cutoffs: Cutoffs) -> Result<TwoModeState> {
    Ok(two_variable_cs(beta, alpha, cutoffs)?.apply_ladder(Mode::A, Ladder::Raise)?.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn params(g: f64, o1: f64, o2: f64, phi: f64, t: f64) -> CavityParams {
        CavityParams::new(g, o1, o2, phi, 0.0, t).unwrap()
    }

    #[test]
    fn effective_matches_closed_form() {
        for &(g, o1, o2, phi, t) in &[
            (10.0, 1.0, 0.5, 0.3, 1.0),
            (3.0, 0.7, 1.3, 2.1, 1.5),
            (50.0, 2.0, 1.0, PI, 0.8),
            (1.0, 0.0, 0.9, 4.0, 2.0),
        ] {
            let p = params(g, o1, o2, phi, t);
            let cut = p.cutoffs();
            let eff = effective_evolve(&p, cut).unwrap();
            let cf = closed_form_superposition(&p, cut).unwrap();
            let d = eff.max_abs_diff(&cf);
            assert!(d < 1e-12, "diff {d} at {p:?}");
            assert!((eff.norm_sqr() - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn drive_phase_limits() {
        let g = 4.0;
        let t = 2.0 * PI / g;
        let p = params(g, 1.0, 0.6, 2.0 * PI, t);
        let cut = p.cutoffs();
        let (beta, alpha) = p.labels();
        let cs = two_variable_cs(beta, alpha, cut).unwrap();
        let s = effective_evolve(&p, cut).unwrap();
        for atom in [Atom::Ground, Atom::Excited] {
            assert!(1.0 - field_fidelity(&cs, s.component(atom)) < 1e-12);
        }
        let p = params(g, 1.0, 0.6, PI, t);
        let (beta, alpha) = p.labels();
        let flipped = two_variable_cs(-beta, -alpha, cut).unwrap();
        let s = effective_evolve(&p, cut).unwrap();
        for atom in [Atom::Ground, Atom::Excited] {
            assert!(1.0 - field_fidelity(&flipped, s.component(atom)) < 1e-12);
        }
    }

    #[test]
    fn revival_branches_are_root_two_blocks() {
        let g = 2.0;
        let p = params(g, 0.8, 1.1, 1.2, 4.0 * PI / g);
        let cut = p.cutoffs();
        let s = closed_form_superposition(&p, cut).unwrap();
        let (pg, pe) = revival_branch_fields(&p, cut).unwrap();
        let r2 = c(std::f64::consts::SQRT_2, 0.0);
        assert!(pg.distance(&s.ground_component.scaled(r2)) < 1e-13);
        assert!(pe.distance(&s.excited_component.scaled(r2)) < 1e-13);
    }

    #[test]
    fn exact_identity_at_zero_time_and_free_phases() {
        let cut = Cutoffs::new(16, 12);
        let cs = two_variable_cs(c(0.4, 0.1), c(0.2, 0.0), cut).unwrap();
        let s = AtomFieldState::product(&cs, Atom::Ground);
        let h = photon_addition_hamiltonian(0.7, cut).unwrap();
        let out = exact_evolve(&h, 0.0, &s).unwrap();
        assert!(out.max_abs_diff(&s) < 1e-15);

        let cut = Cutoffs::new(5, 3);
        let v: Vec<C64> = (0..2 * cut.dim()).map(|k| c(1.0 / (k as f64 + 1.0), 0.1 * k as f64)).collect();
        let nrm = linalg::norm_sqr(&v).sqrt();
        let v: Vec<C64> = v.iter().map(|z| z / nrm).collect();
        let s = AtomFieldState::from_vec(cut, &v, 0.0).unwrap();
        let h = free_field_hamiltonian(1.3, cut).unwrap();
        let t = 0.9;
        let expect = AtomFieldState {
            ground_component: s.ground_component.map_diagonal(|i, _| C64::from_polar(1.0, -1.3 * t * (i as f64 + 0.5))),
            excited_component: s.excited_component.map_diagonal(|i, _| C64::from_polar(1.0, -1.3 * t * (i as f64 + 0.5))),
        };
        // Raw propagators: this state fills the grid up to its edge.
        let u = linalg::expm(&h.to_dense().mapv(|z| z * c(0.0, -t))).unwrap();
        let got = AtomFieldState::from_vec(cut, &linalg::matvec(&u, &s.to_vec()), 0.0).unwrap();
        assert!(got.max_abs_diff(&expect) < 1e-13);
        let got = linalg::expm_multiply(&h, &s.to_vec(), t);
        let got = AtomFieldState::from_vec(cut, &got, 0.0).unwrap();
        assert!(got.max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let cut = Cutoffs::new(12, 3);
        let s = AtomFieldState::product(&two_variable_cs(c(0.1, 0.0), c(0.0, 0.0), cut).unwrap(), Atom::Excited);
        let d = 2 * cut.dim();
        let h = SparseOperator::from_triplets(d, vec![(0, 1, c(1.0, 0.0))]).unwrap();
        assert!(matches!(exact_evolve(&h, 1.0, &s), Err(Error::NonHermitian(_))));
        assert!(matches!(exact_evolve_dense(&h.to_dense(), 1.0, &s), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn hamiltonians_are_hermitian() {
        let cut = Cutoffs::new(4, 5);
        let p = params(3.0, 0.5, 0.25, 0.7, 1.0);
        assert!(strong_drive_hamiltonian(&p, cut).unwrap().hermiticity_error() < 1e-15);
        assert!(photon_addition_hamiltonian(0.3, cut).unwrap().hermiticity_error() < 1e-15);
    }

    #[test]
    fn dense_and_sparse_propagators_agree() {
        let p = params(5.0, 0.2, 0.1, 0.4, 0.6);
        let cut = Cutoffs::new(8, 7);
        let h = strong_drive_hamiltonian(&p, cut).unwrap();
        let s = initial_superposition(cut);
        let a = exact_evolve(&h, p.t, &s).unwrap();
        let b = exact_evolve_dense(&h.to_dense(), p.t, &s).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-11);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn strong_drive_limit_improves_with_coupling_ratio() {
        let omega = 0.5;
        let t = 1.0;
        let mut infid = Vec::new();
        for ratio in [10.0, 100.0] {
            let p = params(ratio * omega, omega, omega, 0.9, t);
            let cut = p.cutoffs();
            let h = strong_drive_hamiltonian(&p, cut).unwrap();
            let exact = exact_evolve(&h, t, &initial_superposition(cut)).unwrap();
            let eff = effective_evolve(&p, cut).unwrap();
            infid.push(1.0 - exact.fidelity(&eff));
        }
        assert!(infid[1] < infid[0], "{infid:?}");
        assert!(infid[1] < 1e-3, "{infid:?}");
    }

    #[test]
    fn photon_addition_short_time() {
        let (beta, alpha) = (c(1.0, 0.0), c(0.5, 0.0));
        let cut = Cutoffs::for_parameters(1.0, 0.5, 2);
        let (fg, fe) = photon_addition_protocol(beta, alpha, 1.0, 0.05, cut).unwrap();
        assert!(fg >= 0.99, "{fg}");
        assert!(fe > 0.99, "{fe}");
        let (fg_small, _) = photon_addition_protocol(beta, alpha, 1.0, 1e-3, cut).unwrap();
        assert!(1.0 - fg_small < 1e-9);
        let pred = first_order_prediction(beta, alpha, cut).unwrap();
        let o = photon_addition(beta, alpha, 1.0, 1e-3, cut).unwrap();
        assert!(field_infidelity(&pred, &o.ground_field) < 1e-9);
    }

    #[test]
    fn infidelity_is_quartic_and_trace_distance_quadratic() {
        let (beta, alpha) = (c(1.0, 0.0), c(0.5, 0.0));
        let cut = Cutoffs::for_parameters(1.0, 0.5, 2);
        let ts: Vec<f64> = (0..7).map(|k| 1e-3 * 10f64.powf(k as f64 / 3.0)).collect();
        let rows = addition_scaling(beta, alpha, &ts, cut).unwrap();
        let inf: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let td: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let s4 = log_log_slope(&ts, &inf);
        let s2 = log_log_slope(&ts, &td);
        assert!((s4 - 4.0).abs() < 0.1, "infidelity slope {s4}");
        assert!((s2 - 2.0).abs() < 0.1, "trace-distance slope {s2}");
    }

    #[test]
    fn iterated_addition_approaches_target() {
        let (beta, alpha) = (c(0.6, 0.2), c(0.3, 0.0));
        let cut = Cutoffs::for_parameters(beta.norm(), alpha.norm(), 4);
        let (f_big, _) = iterated_photon_addition(beta, alpha, 3, 1.0, 0.1, cut).unwrap();
        let (f_small, p) = iterated_photon_addition(beta, alpha, 3, 1.0, 0.01, cut).unwrap();
        assert!(f_small > f_big);
        assert!(1.0 - f_small < 1e-6, "{f_small}");
        assert!(p > 0.0);
    }

    #[test]
    fn post_selection_on_empty_branch_fails() {
        let cut = Cutoffs::new(14, 4);
        let s = AtomFieldState::product(&two_variable_cs(c(0.3, 0.0), c(0.0, 0.0), cut).unwrap(), Atom::Excited);
        assert!(matches!(s.post_select(Atom::Ground), Err(Error::PostSelection(_))));
    }

    #[test]
    fn regime_flag() {
        assert!(params(10.0, 1.0, 0.5, 0.0, 1.0).strong_drive());
        assert!(!params(5.0, 1.0, 0.5, 0.0, 1.0).strong_drive());
    }
}
