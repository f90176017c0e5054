//! Small propagator toolkit: dense `expm` (Padé 13 with scaling and
//! squaring) and the action `e^{-iHt} v` of a sparse Hermitian operator by
//! sub-stepped Taylor series.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Padé-13 coefficients and the associated scaling threshold.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

pub fn norm_1(a: &Array2<C64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `max |A_ij − conj(A_ji)|`.
pub fn hermiticity_error(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    worst
}

/// Solve `A X = B` by LU with partial pivoting.
fn solve(mut a: Array2<C64>, mut b: Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[[i, k]].norm().partial_cmp(&a[[j, k]].norm()).unwrap())
            .unwrap();
        if a[[p, k]].norm() == 0.0 {
            return Err(Error::InvalidArgument("singular matrix in Padé solve".into()));
        }
        if p != k {
            for j in 0..n {
                a.swap([p, j], [k, j]);
            }
            for j in 0..b.ncols() {
                b.swap([p, j], [k, j]);
            }
        }
        let pivot = a[[k, k]];
        for i in (k + 1)..n {
            let f = a[[i, k]] / pivot;
            if f == ZERO {
                continue;
            }
            for j in k..n {
                let v = a[[k, j]];
                a[[i, j]] -= f * v;
            }
            for j in 0..b.ncols() {
                let v = b[[k, j]];
                b[[i, j]] -= f * v;
            }
        }
    }
    for k in (0..n).rev() {
        for j in 0..b.ncols() {
            let mut s = b[[k, j]];
            for i in (k + 1)..n {
                s -= a[[k, i]] * b[[i, j]];
            }
            b[[k, j]] = s / a[[k, k]];
        }
    }
    Ok(b)
}

/// Matrix exponential `e^A` of a square matrix.
pub fn expm(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::InvalidArgument("expm needs a square matrix".into()));
    }
    let norm = norm_1(a);
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.mapv(|z| z / 2f64.powi(s));
    let id = Array2::<C64>::eye(n);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let b = |k: usize| C64::new(PADE13[k], 0.0);
    let u_inner = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u_tail = &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = a.dot(&(a6.dot(&u_inner) + u_tail));
    let v_inner = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = a6.dot(&v_inner) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);
    let mut r = solve(&v - &u, &v + &u)?;
    for _ in 0..s {
        r = r.dot(&r);
    }
    Ok(r)
}

/// Square sparse matrix in compressed-row form.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseOperator {
    /// Build from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|t| t.0 >= dim || t.1 >= dim) {
            return Err(Error::InvalidArgument(format!("entry ({r}, {c}) outside dimension {dim}")));
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0; dim + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
                continue;
            }
            cols.push(c);
            vals.push(v);
            row_ptr[r + 1] += 1;
            last = Some((r, c));
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { dim, row_ptr, cols, vals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k])))
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        (0..self.dim)
            .map(|r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(|k| self.vals[k] * v[self.cols[k]]).sum())
            .collect()
    }

    pub fn norm_1(&self) -> f64 {
        let mut col = vec![0.0; self.dim];
        for (_, c, v) in self.entries() {
            col[c] += v.norm();
        }
        col.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Array2<C64> {
        let mut m = Array2::zeros((self.dim, self.dim));
        for (r, c, v) in self.entries() {
            m[[r, c]] += v;
        }
        m
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut map = std::collections::HashMap::with_capacity(self.nnz());
        for (r, c, v) in self.entries() {
            map.insert((r, c), v);
        }
        map.iter()
            .map(|(&(r, c), &v)| (v - map.get(&(c, r)).copied().unwrap_or(ZERO).conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// `e^{-iHt} v` by Taylor series on sub-steps with `‖H τ‖₁ <= 1`.
pub fn expm_multiply(h: &SparseOperator, v: &[C64], t: f64) -> Vec<C64> {
    let steps = (h.norm_1() * t.abs()).ceil().max(1.0) as usize;
    let tau = t / steps as f64;
    let coef = C64::new(0.0, -tau);
    let mut out = v.to_vec();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        let scale = acc.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for k in 1..60 {
            let hv = h.apply(&term);
            let f = coef / k as f64;
            term = hv.into_iter().map(|z| z * f).collect();
            let mut biggest = 0.0f64;
            for (a, z) in acc.iter_mut().zip(&term) {
                *a += z;
                biggest = biggest.max(z.norm());
            }
            if biggest <= 1e-17 * scale {
                break;
            }
        }
        out = acc;
    }
    out
}

/// Dense matrix–vector product.
pub fn matvec(a: &Array2<C64>, v: &[C64]) -> Vec<C64> {
    a.rows().into_iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// `‖v‖²`.
pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `⟨u|v⟩`.
pub fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<C64>()
}

pub fn identity(n: usize) -> Array2<C64> {
    Array2::from_diag_elem(n, ONE)
}
