//! Complex polynomial arithmetic, root finding, and dense complex linear
//! algebra used by every other module.
//!
//! Root finding is Aberth–Ehrlich simultaneous iteration followed by a
//! Newton polish of each root; the polish target is a residual bound
//! relative to the largest coefficient magnitude. Rank and least-squares
//! questions are answered through singular values.

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::C64;
use nalgebra::{DMatrix, DVector};

/// Dense polynomial with complex coefficients in ascending degree order.
///
/// Trailing zero coefficients are trimmed on construction; the identically
/// zero polynomial is the empty coefficient list with degree −1.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// Degree, with the convention that the zero polynomial has degree −1.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * (k as f64))
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (k, slot) in out.iter_mut().enumerate() {
            if k < self.coeffs.len() {
                *slot += self.coeffs[k];
            }
            if k < other.coeffs.len() {
                *slot += other.coeffs[k];
            }
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Coefficient convolution.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// All roots of `p`, with multiplicity, each satisfying
/// `|p(ζ)| ≤ cfg.root_residual · max|coeff|`.
///
/// Aberth–Ehrlich iteration from a staggered circle of initial guesses,
/// then a per-root Newton polish down to the residual target.
pub fn poly_roots(p: &Polynomial, cfg: &ToleranceConfig) -> Result<Vec<C64>> {
    let d = p.degree();
    if d < 1 {
        return Err(Error::InvalidInput(format!(
            "poly_roots requires degree >= 1, got {d}"
        )));
    }
    let d = d as usize;
    let coeffs = p.coeffs();
    let max_abs = p.max_coeff_abs();
    let target = cfg.root_residual * max_abs;

    if d == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }

    let dp = p.derivative();
    let lead = coeffs[d].norm();
    // Cauchy bound on root moduli.
    let bound = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max);
    let radius = 0.5 * bound.min(4.0) + 0.1;
    let mut z: Vec<C64> = (0..d)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (d as f64) + 0.43;
            C64::from_polar(radius, theta)
        })
        .collect();

    let mut deltas = vec![C64::new(0.0, 0.0); d];
    for _ in 0..600 {
        let mut settled = true;
        for j in 0..d {
            let pv = p.eval(z[j]);
            let dv = dp.eval(z[j]);
            if dv.norm() == 0.0 {
                // Sitting on a critical point: nudge off it.
                z[j] += C64::new(1e-6, 1e-6);
                settled = false;
                continue;
            }
            let w = pv / dv;
            let mut s = C64::new(0.0, 0.0);
            for (k, &zk) in z.iter().enumerate() {
                if k != j {
                    let diff = z[j] - zk;
                    if diff.norm() > 0.0 {
                        s += C64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - w * s;
            let delta = if denom.norm() < 1e-300 { w } else { w / denom };
            deltas[j] = delta;
            z[j] -= delta;
            if delta.norm() > 1e-14 * (1.0 + z[j].norm()) {
                settled = false;
            }
        }
        if settled {
            break;
        }
    }

    // Newton polish to the residual target.
    for zj in z.iter_mut() {
        let mut cur = *zj;
        for _ in 0..100 {
            let pv = p.eval(cur);
            if pv.norm() <= target {
                break;
            }
            let dv = dp.eval(cur);
            if dv.norm() == 0.0 {
                break;
            }
            let step = pv / dv;
            // Clusters around a multiple root repel Newton; damp huge steps.
            let capped = if step.norm() > 1.0 {
                step / step.norm()
            } else {
                step
            };
            cur -= capped;
        }
        if p.eval(cur).norm() > target {
            return Err(Error::NonConvergence(format!(
                "root residual {:.3e} above target {:.3e}",
                p.eval(cur).norm(),
                target
            )));
        }
        *zj = cur;
    }
    Ok(z)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row-major entry data; the invariant `rows·cols == len`
    /// is checked.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::InvalidInput(format!(
                "matrix shape {rows}x{cols} does not match {} entries",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn conj_transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        CMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    /// Largest entry magnitude (max norm).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub fn from_dmatrix(m: &DMatrix<C64>) -> CMatrix {
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Singular values of `m`, in nalgebra's descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let svd = m.to_dmatrix().svd(false, false);
    svd.singular_values.iter().copied().collect()
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = singular_values(m);
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Ratio of extreme singular values; `f64::INFINITY` for singular matrices.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Minimal-norm least-squares solution of `A x = b` plus the residual norm.
///
/// Singular values below `1e-13` times the largest are truncated, which is
/// what makes the returned solution the minimal-norm one on rank-deficient
/// systems.
pub fn lstsq_min_norm(a: &CMatrix, b: &[C64]) -> Result<(Vec<C64>, f64)> {
    if a.is_empty() {
        return Err(Error::InvalidInput("empty least-squares matrix".into()));
    }
    if a.rows() != b.len() {
        return Err(Error::InvalidInput(format!(
            "lstsq shapes: {}x{} matrix vs rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let da = a.to_dmatrix();
    let db = DVector::from_column_slice(b);
    let svd = da.clone().svd(true, true);
    let smax = svd
        .singular_values
        .iter()
        .copied()
        .fold(0.0_f64, f64::max);
    let eps = if smax == 0.0 { 1.0 } else { 1e-13 * smax };
    let x = svd
        .solve(&db, eps)
        .map_err(|e| Error::NonConvergence(format!("svd solve: {e}")))?;
    let residual = (&da * &x - &db).norm();
    Ok((x.iter().copied().collect(), residual))
}

/// Solves the Hermitian positive-definite system `G x = rhs` by Cholesky
/// factorization, failing loudly when the condition number exceeds `1e12`.
pub fn solve_hermitian(g: &CMatrix, rhs: &[C64]) -> Result<Vec<C64>> {
    if g.rows() != g.cols() || g.rows() != rhs.len() {
        return Err(Error::InvalidInput(format!(
            "hermitian solve shapes: {}x{} matrix vs rhs of length {}",
            g.rows(),
            g.cols(),
            rhs.len()
        )));
    }
    let cond = condition_number(g);
    if cond > 1e12 {
        return Err(Error::IllConditioned { cond });
    }
    let dg = g.to_dmatrix();
    let chol = dg
        .clone()
        .cholesky()
        .ok_or(Error::IllConditioned { cond })?;
    let x = chol.solve(&DVector::from_column_slice(rhs));
    Ok(x.iter().copied().collect())
}
