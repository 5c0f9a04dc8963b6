//! Independent brute-force verification path: boundary-grid sampling,
//! FFT-based Szegő and model-space projections, direct computation of
//! `A_φ f = P_β(φ f)`, and grid inner products.
//!
//! Nothing here reuses the closed-form operator construction; agreement
//! between [`oracle_matrix`] and the `operator` module constructors is the
//! crate's strongest correctness evidence.

use crate::blaschke::BlaschkeProduct;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::modelspace::{BasisSpec, ModelVector, ResolvedBasis};
use crate::numerics::{solve_hermitian, CMatrix};
use crate::operator::AttoMatrix;
use crate::C64;
use rustfft::FftPlanner;

/// Default node count; large enough that aliasing is a non-issue for the
/// degree budgets this crate targets.
pub const DEFAULT_GRID: usize = 4096;

/// Samples of a function at the `N` roots of unity, `N` a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGrid {
    samples: Vec<C64>,
}

impl BoundaryGrid {
    /// Wraps existing samples; the length must be a power of two.
    pub fn from_samples(samples: Vec<C64>) -> Result<Self> {
        let n = samples.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "grid length {n} must be a power of two (at least 4)"
            )));
        }
        Ok(Self { samples })
    }

    /// The nodes `e^{2πik/N}`.
    pub fn nodes(n: usize) -> Vec<C64> {
        (0..n)
            .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64) / (n as f64)))
            .collect()
    }

    /// Samples `f` at the grid nodes.
    pub fn sample(n: usize, mut f: impl FnMut(C64) -> Result<C64>) -> Result<Self> {
        let samples = Self::nodes(n)
            .into_iter()
            .map(&mut f)
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(samples)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    /// Pointwise product with another grid.
    pub fn pointwise_mul(&self, other: &BoundaryGrid) -> Result<BoundaryGrid> {
        if self.len() != other.len() {
            return Err(Error::InvalidInput("grid lengths differ".into()));
        }
        Ok(BoundaryGrid {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| a * b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &BoundaryGrid) -> Result<BoundaryGrid> {
        if self.len() != other.len() {
            return Err(Error::InvalidInput("grid lengths differ".into()));
        }
        Ok(BoundaryGrid {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn fft(data: &mut [C64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let f = if inverse {
        planner.plan_fft_inverse(data.len())
    } else {
        planner.plan_fft_forward(data.len())
    };
    f.process(data);
}

/// Orthogonal projection onto the analytic half: transform, drop the
/// negative-frequency bins (upper half including Nyquist), transform back.
pub fn szego_project(g: &BoundaryGrid) -> BoundaryGrid {
    let n = g.len();
    let mut coeffs = g.samples.clone();
    fft(&mut coeffs, false);
    for c in coeffs.iter_mut().take(n).skip(n / 2) {
        *c = C64::new(0.0, 0.0);
    }
    fft(&mut coeffs, true);
    let scale = 1.0 / n as f64;
    BoundaryGrid {
        samples: coeffs.into_iter().map(|c| c * scale).collect(),
    }
}

fn check_margin(n: usize, degree_budget: usize) -> Result<()> {
    let required = 4 * (degree_budget + 2);
    if n < required {
        return Err(Error::AliasingRisk { n, required });
    }
    Ok(())
}

/// Projection onto `K_β` through the identity `P_β g = P g - β P(conj(β) g)`,
/// two Szegő passes and no singular integrands.
pub fn model_project(beta: &BlaschkeProduct, g: &BoundaryGrid) -> Result<BoundaryGrid> {
    check_margin(g.len(), beta.degree())?;
    let beta_samples = BoundaryGrid::sample(g.len(), |z| beta.eval(z))?;
    let pg = szego_project(g);
    let conj_beta_g = BoundaryGrid {
        samples: beta_samples
            .samples
            .iter()
            .zip(&g.samples)
            .map(|(&b, &x)| b.conj() * x)
            .collect(),
    };
    let inner = szego_project(&conj_beta_g);
    let correction = beta_samples.pointwise_mul(&inner)?;
    pg.sub(&correction)
}

/// Trapezoidal pairing `(1/N) Σ f conj(g)`, exact for band-limited data.
pub fn grid_inner(f: &BoundaryGrid, g: &BoundaryGrid) -> C64 {
    let n = f.len().min(g.len());
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        acc += f.samples[k] * g.samples[k].conj();
    }
    acc / (n as f64)
}

pub fn grid_norm(f: &BoundaryGrid) -> f64 {
    grid_inner(f, f).re.max(0.0).sqrt()
}

/// Samples of the conjugation `C_θ f = θ · conj(z) · conj(f)` on the grid.
pub fn conjugation_samples(
    theta: &BlaschkeProduct,
    f: &BoundaryGrid,
) -> Result<BoundaryGrid> {
    let n = f.len();
    let nodes = BoundaryGrid::nodes(n);
    let samples = nodes
        .iter()
        .zip(&f.samples)
        .map(|(&z, &v)| Ok(theta.eval(z)? * z.conj() * v.conj()))
        .collect::<Result<Vec<_>>>()?;
    BoundaryGrid::from_samples(samples)
}

/// Samples of one basis function.
pub fn sample_basis_fn(
    generator: &BlaschkeProduct,
    rb: &ResolvedBasis,
    idx: usize,
    n: usize,
) -> Result<BoundaryGrid> {
    BoundaryGrid::sample(n, |z| rb.eval_fn(generator, idx, z))
}

/// Samples of a coefficient vector.
pub fn sample_model_vector(v: &ModelVector, n: usize, cfg: &ToleranceConfig) -> Result<BoundaryGrid> {
    let rb = ResolvedBasis::resolve(&v.generator, &v.basis, cfg)?;
    let mut acc = vec![C64::new(0.0, 0.0); n];
    for (idx, c) in v.coeffs.iter().enumerate() {
        if c.norm() == 0.0 {
            continue;
        }
        let g = sample_basis_fn(&v.generator, &rb, idx, n)?;
        for (slot, s) in acc.iter_mut().zip(g.samples()) {
            *slot += c * s;
        }
    }
    BoundaryGrid::from_samples(acc)
}

/// Samples of the two-sided symbol `conj(χ) + ψ`.
pub fn sample_symbol_pair(
    sym: &crate::operator::SymbolPair,
    n: usize,
    cfg: &ToleranceConfig,
) -> Result<BoundaryGrid> {
    let chi = sample_model_vector(&sym.chi, n, cfg)?;
    let psi = sample_model_vector(&sym.psi, n, cfg)?;
    let samples = chi
        .samples()
        .iter()
        .zip(psi.samples())
        .map(|(&x, &p)| x.conj() + p)
        .collect();
    BoundaryGrid::from_samples(samples)
}

/// Brute-force matrix of `A_φ: f ↦ P_β(φ f)` from symbol samples.
///
/// Each input basis function is sampled, multiplied pointwise by the
/// symbol, projected onto `K_β`, and expanded in the output basis through
/// the grid Gram system. Everything is computed on the grid, independent
/// of the closed-form path.
pub fn oracle_matrix(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    symbol: &BoundaryGrid,
    basis_in: &BasisSpec,
    basis_out: &BasisSpec,
    cfg: &ToleranceConfig,
) -> Result<AttoMatrix> {
    let n_grid = symbol.len();
    check_margin(n_grid, alpha.degree() + beta.degree())?;
    let rb_in = ResolvedBasis::resolve(alpha, basis_in, cfg)?;
    let rb_out = ResolvedBasis::resolve(beta, basis_out, cfg)?;
    let m = rb_in.len();
    let n = rb_out.len();

    let out_samples: Vec<BoundaryGrid> = (0..n)
        .map(|i| sample_basis_fn(beta, &rb_out, i, n_grid))
        .collect::<Result<_>>()?;
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = grid_inner(&out_samples[j], &out_samples[i]);
        }
    }

    let mut entries = CMatrix::zeros(n, m);
    for p in 0..m {
        let f = sample_basis_fn(alpha, &rb_in, p, n_grid)?;
        let prod = symbol.pointwise_mul(&f)?;
        let image = model_project(beta, &prod)?;
        let rhs: Vec<C64> = (0..n)
            .map(|i| grid_inner(&image, &out_samples[i]))
            .collect();
        let coeffs = solve_hermitian(&g, &rhs)?;
        for (i, &c) in coeffs.iter().enumerate() {
            entries[(i, p)] = c;
        }
    }
    AttoMatrix::new(
        alpha.clone(),
        beta.clone(),
        *basis_in,
        *basis_out,
        entries,
        cfg,
    )
}
