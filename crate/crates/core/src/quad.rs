//! Quadrature rules: Gauss–Legendre, Gauss–Laguerre, a graded composite
//! rule for `∫_0^∞` with a logarithmic endpoint singularity, and the uniform
//! angular grid.

use std::f64::consts::PI;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut pp = 1.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (1.0, 0.0);
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
                }
                pp = nf * (z * p1 - p2) / (z * z - 1.0);
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Gauss–Laguerre rule for `∫_0^∞ e^{-x} f(x) dx`.
///
/// Nodes come from the eigenvalues of the Jacobi matrix (implicit QL),
/// polished by Newton steps on `L_n`; weights use
/// `w_i = x_i / ((n+1) L_{n+1}(x_i))²` evaluated in log space so the tiny
/// weights of the outer nodes keep full relative precision.
#[derive(Clone, Debug)]
pub struct GaussLaguerre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Laguerre needs at least one node");
        let mut diag: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64).collect();
        let mut off: Vec<f64> = (0..n).map(|i| if i + 1 < n { (i + 1) as f64 } else { 0.0 }).collect();
        tridiagonal_eigenvalues(&mut diag, &mut off);
        diag.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for mut x in diag {
            for _ in 0..4 {
                let (ln, lnm1, _) = laguerre_pair_scaled(n, x);
                let deriv = n as f64 * (ln - lnm1) / x;
                let dx = ln / deriv;
                x -= dx;
                if dx.abs() <= 1e-15 * x {
                    break;
                }
            }
            let (lnp1, _, e) = laguerre_pair_scaled(n + 1, x);
            let ln_abs = lnp1.abs().ln() + e as f64 * std::f64::consts::LN_2;
            let ln_w = x.ln() - 2.0 * ((n + 1) as f64).ln() - 2.0 * ln_abs;
            nodes.push(x);
            weights.push(ln_w.exp());
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_0^∞ e^{-x} f(x) dx`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `(L_n(x), L_{n-1}(x), exp2)`: both mantissas share the scale `2^exp2`.
fn laguerre_pair_scaled(n: usize, x: f64) -> (f64, f64, i32) {
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    let mut exp2 = 0;
    if n == 0 {
        return (1.0, 0.0, 0);
    }
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 - x) * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 2f64.powi(800) {
            cur *= 2f64.powi(-800);
            prev *= 2f64.powi(-800);
            exp2 += 800;
        }
    }
    (cur, prev, exp2)
}

/// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with Wilkinson
/// shifts). `off[i]` couples `diag[i]` and `diag[i+1]`; `off[n-1]` is unused.
fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 200, "tridiagonal QL failed to converge");
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
}

/// Radial rule for integrals over `x ∈ (0, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub enum RadialRule {
    /// Composite Gauss–Legendre on geometrically graded panels
    /// `[2^{-60}, 2^{-59}], …, [1/2, 1]` followed by width-2 panels up to
    /// `x_max`. Resolves `ln x` endpoint behaviour.
    Graded { x_max: f64, per_panel: usize },
    /// Plain Gauss–Laguerre with the given number of nodes.
    GaussLaguerre(usize),
}

/// The graded rule starts at `2^{-GRADED_LEVELS}`.
const GRADED_LEVELS: i32 = 60;
const GRADED_WIDTH: f64 = 2.0;

impl RadialRule {
    pub fn graded(x_max: f64, per_panel: usize) -> Self {
        RadialRule::Graded { x_max, per_panel }
    }

    /// `(x, w)` pairs with `Σ w f(x) ≈ ∫_0^∞ f(x) dx`.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        self.weighted_nodes()
            .into_iter()
            .map(|(x, w)| (x, w * x.exp()))
            .collect()
    }

    /// `(x, ω)` pairs with `Σ ω h(x) ≈ ∫_0^∞ e^{-x} h(x) dx`; lets callers
    /// keep `e^{x}`-scaled integrands in range.
    pub fn weighted_nodes(&self) -> Vec<(f64, f64)> {
        match *self {
            RadialRule::GaussLaguerre(n) => {
                let gl = GaussLaguerre::new(n);
                gl.nodes().iter().copied().zip(gl.weights().iter().copied()).collect()
            }
            RadialRule::Graded { x_max, per_panel } => {
                let gl = GaussLegendre::new(per_panel);
                let mut out = Vec::new();
                let mut lo = 2f64.powi(-GRADED_LEVELS);
                for level in (0..GRADED_LEVELS).rev() {
                    let hi = 2f64.powi(-level);
                    out.extend(gl.mapped(lo, hi).map(|(x, w)| (x, w * (-x).exp())));
                    lo = hi;
                }
                while lo < x_max {
                    let hi = (lo + GRADED_WIDTH).min(x_max);
                    out.extend(gl.mapped(lo, hi).map(|(x, w)| (x, w * (-x).exp())));
                    lo = hi;
                }
                out
            }
        }
    }
}

/// Uniform trapezoid grid on `[0, 2π)`: `(φ_j, 2π/m)`. Exact for
/// trigonometric polynomials of degree below `m`.
pub fn uniform_angles(m: usize) -> Vec<(f64, f64)> {
    let w = 2.0 * PI / m as f64;
    (0..m).map(|j| (j as f64 * w, w)).collect()
}
