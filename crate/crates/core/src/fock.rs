//! Truncated two-mode Fock space.
//!
//! A Landau level `|n, m⟩` is the product state `|n_a⟩ ⊗ |n_b⟩` with
//! `n_a = n`, `n_b = n + m`. Mode `a` lowers the Landau level at fixed
//! `n + m`; mode `b` lowers `n + m` at fixed level. Amplitudes live on a
//! dense `(cutoff_a + 1) × (cutoff_b + 1)` grid; every flattened view is
//! row-major in `(n_a, n_b)`.

use std::fmt::Write as _;

use ndarray::{Array2, Zip};

use crate::error::{Error, Result};
use crate::format::g12;
use crate::C64;

/// Largest neglected probability a state may carry.
pub const MAX_TAIL: f64 = 1e-12;

/// Landau quantum numbers `(n, m)` with `n + m >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelIndex {
    n: usize,
    m: i64,
}

impl LevelIndex {
    pub fn new(n: usize, m: i64) -> Result<Self> {
        if n as i64 + m < 0 {
            return Err(Error::InvalidLevel { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn m(self) -> i64 {
        self.m
    }
}

/// Occupations of the two independent modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeOccupation {
    pub n_a: usize,
    pub n_b: usize,
}

/// `(n, m) ↦ (n, n + m)`.
pub fn index_map(idx: LevelIndex) -> ModeOccupation {
    ModeOccupation {
        n_a: idx.n,
        n_b: (idx.n as i64 + idx.m) as usize,
    }
}

/// Inverse of [`index_map`].
pub fn level_of(occ: ModeOccupation) -> LevelIndex {
    LevelIndex {
        n: occ.n_a,
        m: occ.n_b as i64 - occ.n_a as i64,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Lower,
    Raise,
}

/// Largest retained occupation of each mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cutoffs {
    pub a: usize,
    pub b: usize,
}

impl Cutoffs {
    pub fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }

    /// Cutoffs large enough that the neglected Poisson tail of a state with
    /// mode-a label `β` excited `n_exc` times and mode-b label `α` is far
    /// below [`MAX_TAIL`]: `n_exc + x + 10√(x+1) + 10` with `x = |β|²`, and the
    /// same without `n_exc` for mode b.
    pub fn for_parameters(beta_abs: f64, alpha_abs: f64, n_exc: usize) -> Self {
        let rule = |x: f64| x + 10.0 * (x + 1.0).sqrt() + 10.0;
        Self {
            a: (n_exc as f64 + rule(beta_abs * beta_abs)).ceil() as usize,
            b: rule(alpha_abs * alpha_abs).ceil() as usize,
        }
    }

    pub fn max(self, other: Cutoffs) -> Cutoffs {
        Cutoffs::new(self.a.max(other.a), self.b.max(other.b))
    }

    /// Number of grid points `(a+1)(b+1)`.
    pub fn dim(self) -> usize {
        (self.a + 1) * (self.b + 1)
    }

    /// Row-major position of `(n_a, n_b)`.
    pub fn flat_index(self, n_a: usize, n_b: usize) -> usize {
        n_a * (self.b + 1) + n_b
    }
}

/// `ħ`, `M`, `ω`, all strictly positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalScales {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl PhysicalScales {
    pub fn new(hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("omega", omega)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { hbar, mass, omega })
    }

    /// `ħ = M = ω = 1`.
    pub fn natural() -> Self {
        Self { hbar: 1.0, mass: 1.0, omega: 1.0 }
    }

    /// `Mω / 2ħ`, the inverse squared magnetic length scale of the
    /// wavefunctions.
    pub fn radial_scale(&self) -> f64 {
        self.mass * self.omega / (2.0 * self.hbar)
    }
}

impl Default for PhysicalScales {
    fn default() -> Self {
        Self::natural()
    }
}

/// Amplitudes on the truncated grid plus a bound on the probability mass
/// lying outside it.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    amps: Array2<C64>,
    tail: f64,
}

impl TwoModeState {
    pub fn zeros(cutoffs: Cutoffs) -> Self {
        Self {
            amps: Array2::zeros((cutoffs.a + 1, cutoffs.b + 1)),
            tail: 0.0,
        }
    }

    pub fn from_parts(amps: Array2<C64>, tail: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidArgument("empty amplitude grid".into()));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        if tail.is_nan() || tail < 0.0 {
            return Err(Error::InvalidArgument(format!("tail bound must be >= 0, got {tail}")));
        }
        Ok(Self { amps, tail })
    }

    /// The Landau level `|n, m⟩`.
    pub fn basis(cutoffs: Cutoffs, idx: LevelIndex) -> Result<Self> {
        let occ = index_map(idx);
        if occ.n_a > cutoffs.a || occ.n_b > cutoffs.b {
            return Err(Error::InvalidArgument(format!(
                "level (n={}, m={}) lies outside cutoffs ({}, {})",
                idx.n, idx.m, cutoffs.a, cutoffs.b
            )));
        }
        let mut s = Self::zeros(cutoffs);
        s.amps[[occ.n_a, occ.n_b]] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn cutoffs(&self) -> Cutoffs {
        let (ra, rb) = self.amps.dim();
        Cutoffs::new(ra - 1, rb - 1)
    }

    pub fn amplitudes(&self) -> &Array2<C64> {
        &self.amps
    }

    pub fn amp(&self, n_a: usize, n_b: usize) -> C64 {
        self.amps
            .get([n_a, n_b])
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    /// Amplitude of `|n, m⟩`; zero outside the grid.
    pub fn level_amp(&self, idx: LevelIndex) -> C64 {
        let occ = index_map(idx);
        self.amp(occ.n_a, occ.n_b)
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Row-major amplitude vector.
    pub fn to_vec(&self) -> Vec<C64> {
        self.amps.iter().copied().collect()
    }

    pub fn from_vec(cutoffs: Cutoffs, v: &[C64], tail: f64) -> Result<Self> {
        if v.len() != cutoffs.dim() {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} does not match grid of size {}",
                v.len(),
                cutoffs.dim()
            )));
        }
        let amps = Array2::from_shape_vec((cutoffs.a + 1, cutoffs.b + 1), v.to_vec())
            .expect("shape checked above");
        Self::from_parts(amps, tail)
    }

    /// Copy onto larger cutoffs (zero-padding). Shrinking is allowed only if
    /// the discarded amplitudes are exactly zero.
    pub fn embed(&self, cutoffs: Cutoffs) -> Result<Self> {
        let own = self.cutoffs();
        let mut out = Self::zeros(cutoffs);
        out.tail = self.tail;
        for ((i, j), z) in self.amps.indexed_iter() {
            if i <= cutoffs.a && j <= cutoffs.b {
                out.amps[[i, j]] = *z;
            } else if *z != C64::new(0.0, 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "cannot shrink ({}, {}) grid to ({}, {}) without dropping amplitudes",
                    own.a, own.b, cutoffs.a, cutoffs.b
                )));
            }
        }
        Ok(out)
    }

    /// Zero-pad by `extra_a`, `extra_b` levels so ladder operators can act
    /// without spilling.
    pub fn padded(&self, extra_a: usize, extra_b: usize) -> Self {
        let c = self.cutoffs();
        self.embed(Cutoffs::new(c.a + extra_a, c.b + extra_b))
            .expect("padding never shrinks")
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            amps: self.amps.mapv(|z| z * c),
            tail: self.tail * c.norm_sqr(),
        }
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            amps: self.amps.mapv(|z| z / n),
            tail: self.tail / (n * n),
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let c = self.cutoffs().max(other.cutoffs());
        let mut out = self.embed(c).expect("embedding into max cutoffs");
        let rhs = other.embed(c).expect("embedding into max cutoffs");
        Zip::from(&mut out.amps).and(&rhs.amps).for_each(|x, &y| *x += y * sign);
        out.tail = (self.tail.sqrt() + other.tail.sqrt()).powi(2);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    /// Apply `a`, `a†`, `b` or `b†`.
    ///
    /// Amplitude pushed past the cutoff by a raising operator is lost; the
    /// operation fails with [`Error::Truncation`] when that loss (plus the
    /// growth of the pre-existing tail) exceeds [`MAX_TAIL`].
    pub fn apply_ladder(&self, mode: Mode, dir: Ladder) -> Result<Self> {
        let c = self.cutoffs();
        let mut out = Self::zeros(c);
        let edge = match mode {
            Mode::A => c.a,
            Mode::B => c.b,
        };
        let mut spill = 0.0;
        for ((i, j), &z) in self.amps.indexed_iter() {
            let k = match mode {
                Mode::A => i,
                Mode::B => j,
            };
            match dir {
                Ladder::Lower => {
                    if k == 0 {
                        continue;
                    }
                    let f = (k as f64).sqrt();
                    match mode {
                        Mode::A => out.amps[[i - 1, j]] += z * f,
                        Mode::B => out.amps[[i, j - 1]] += z * f,
                    }
                }
                Ladder::Raise => {
                    let f = ((k + 1) as f64).sqrt();
                    if k == edge {
                        spill += z.norm_sqr() * (k + 1) as f64;
                        continue;
                    }
                    match mode {
                        Mode::A => out.amps[[i + 1, j]] += z * f,
                        Mode::B => out.amps[[i, j + 1]] += z * f,
                    }
                }
            }
        }
        // Beyond the cutoff the ladder factor is at least √(edge+1); for the
        // super-geometrically decaying tails produced by the constructors the
        // moved mass stays within (edge+2)·tail.
        let tail = spill + (edge + 2) as f64 * self.tail;
        if tail > MAX_TAIL {
            return Err(Error::Truncation {
                what: match (mode, dir) {
                    (Mode::A, Ladder::Raise) => "a† near cutoff",
                    (Mode::A, Ladder::Lower) => "a near cutoff",
                    (Mode::B, Ladder::Raise) => "b† near cutoff",
                    (Mode::B, Ladder::Lower) => "b near cutoff",
                },
                lost: tail,
                allowed: MAX_TAIL,
            });
        }
        out.tail = tail;
        Ok(out)
    }

    /// Multiply each amplitude by `f(n_a, n_b)`.
    pub fn map_diagonal<F: Fn(usize, usize) -> C64>(&self, f: F) -> Self {
        let mut out = self.clone();
        for ((i, j), z) in out.amps.indexed_iter_mut() {
            *z *= f(i, j);
        }
        out
    }

    /// `⟨(mode number)^k⟩` (unnormalized expectation).
    pub fn number_moment(&self, mode: Mode, k: u32) -> f64 {
        self.amps
            .indexed_iter()
            .map(|((i, j), z)| {
                let n = match mode {
                    Mode::A => i,
                    Mode::B => j,
                };
                z.norm_sqr() * (n as f64).powi(k as i32)
            })
            .sum()
    }

    /// `H = ħω(a†a + ½)`.
    pub fn apply_hamiltonian(&self, scales: &PhysicalScales) -> Self {
        let e = scales.hbar * scales.omega;
        self.map_diagonal(|i, _| C64::new(e * (i as f64 + 0.5), 0.0))
    }

    /// `L₃ = ħ(b†b − a†a)`, eigenvalue `ħm`.
    pub fn apply_angular_momentum(&self, scales: &PhysicalScales) -> Self {
        self.map_diagonal(|i, j| C64::new(scales.hbar * (j as f64 - i as f64), 0.0))
    }

    /// The alternative form `ħω(b†b + ½) − ωL₃` of the Hamiltonian.
    pub fn apply_hamiltonian_b_form(&self, scales: &PhysicalScales) -> Self {
        let e = scales.hbar * scales.omega;
        let first = self.map_diagonal(|_, j| C64::new(e * (j as f64 + 0.5), 0.0));
        let l3 = self.apply_angular_momentum(scales).scaled(C64::new(scales.omega, 0.0));
        first.sub(&l3)
    }

    /// Exact free evolution `e^{-iHt/ħ}` under `H = ħω(a†a + ½)`.
    pub fn free_evolution(&self, t: f64, scales: &PhysicalScales) -> Self {
        self.map_diagonal(|i, _| C64::from_polar(1.0, -scales.omega * t * (i as f64 + 0.5)))
    }

    /// Text dump: header `# cutoff_a=.. cutoff_b=.. tail=..` followed by
    /// `n_a,n_b,re,im` lines in row-major order.
    pub fn to_dump(&self) -> String {
        let c = self.cutoffs();
        let mut out = format!("# cutoff_a={} cutoff_b={} tail={}\n", c.a, c.b, g12(self.tail));
        for ((i, j), z) in self.amps.indexed_iter() {
            let _ = writeln!(out, "{i},{j},{},{}", g12(z.re), g12(z.im));
        }
        out
    }
}

/// `⟨u|v⟩`, conjugate-linear in `u`. Grids of different size are compared on
/// their common superset.
pub fn inner(u: &TwoModeState, v: &TwoModeState) -> C64 {
    let ca = u.amps.nrows().min(v.amps.nrows());
    let cb = u.amps.ncols().min(v.amps.ncols());
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..ca {
        for j in 0..cb {
            acc += u.amps[[i, j]].conj() * v.amps[[i, j]];
        }
    }
    acc
}

/// Parse the format written by [`TwoModeState::to_dump`]. Missing grid
/// points are zero.
pub fn parse_dump(text: &str) -> Result<TwoModeState> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Dump { line: 1, reason: "empty input".into() })?;
    let header = header
        .strip_prefix('#')
        .ok_or(Error::Dump { line: 1, reason: "missing '#' header".into() })?;
    let mut cut_a = None;
    let mut cut_b = None;
    let mut tail = None;
    for field in header.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or(Error::Dump {
            line: 1,
            reason: format!("malformed header field {field:?}"),
        })?;
        let bad = |_| Error::Dump { line: 1, reason: format!("bad value for {key}") };
        match key {
            "cutoff_a" => cut_a = Some(value.parse::<usize>().map_err(bad)?),
            "cutoff_b" => cut_b = Some(value.parse::<usize>().map_err(bad)?),
            "tail" => tail = Some(value.parse::<f64>().map_err(|_| Error::Dump { line: 1, reason: "bad value for tail".into() })?),
            _ => {}
        }
    }
    let (Some(a), Some(b), Some(tail)) = (cut_a, cut_b, tail) else {
        return Err(Error::Dump { line: 1, reason: "header needs cutoff_a, cutoff_b and tail".into() });
    };
    let mut state = TwoModeState::zeros(Cutoffs::new(a, b));
    state.tail = tail;
    for (ln, line) in lines {
        let line_no = ln + 1;
        let err = |reason: &str| Error::Dump { line: line_no, reason: reason.into() };
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 4 {
            return Err(err("expected n_a,n_b,re,im"));
        }
        let i: usize = parts[0].trim().parse().map_err(|_| err("bad n_a"))?;
        let j: usize = parts[1].trim().parse().map_err(|_| err("bad n_b"))?;
        let re: f64 = parts[2].trim().parse().map_err(|_| err("bad real part"))?;
        let im: f64 = parts[3].trim().parse().map_err(|_| err("bad imaginary part"))?;
        if i > a || j > b {
            return Err(err("index outside declared cutoffs"));
        }
        state.amps[[i, j]] = C64::new(re, im);
    }
    Ok(state)
}
