//! Model spaces `K_α` as coefficient spaces: reproducing kernels, conjugate
//! kernels, Clark and modified Clark bases, Gram matrices, change of basis,
//! and the conjugation `C_α f = α · conj(z) · conj(f)`.
//!
//! Every inner product used here reduces to four closed forms built from
//! kernel evaluations:
//!
//! ```text
//! ⟨k_w,  k_v⟩  = k_w(v)            ⟨k̃_w, k_v⟩  = k̃_w(v)
//! ⟨k_w,  k̃_v⟩ = conj(k̃_v(w))      ⟨k̃_w, k̃_v⟩ = k_v(w)
//! ```
//!
//! Boundary points are admissible throughout because finite Blaschke
//! products extend analytically across the unit circle.

use crate::blaschke::{BlaschkeProduct, DISK_SLACK};
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::numerics::{solve_hermitian, CMatrix};
use crate::C64;

/// Below this distance of `1 - conj(w)z` from zero the kernel refuses to
/// evaluate unless a boundary limit form applies.
const NEAR_DIAG: f64 = 1e-8;
/// A point counts as a boundary point when its modulus is this close to 1.
const BOUNDARY_TOL: f64 = 1e-8;
/// Within this distance of the removable singularity, difference quotients
/// are summed as a derivative series instead of divided directly; the
/// direct form loses `eps/|z-w|` digits to cancellation.
const SERIES_RANGE: f64 = 1e-3;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Reproducing kernel `k_w^α(z) = (1 - conj(α(w)) α(z)) / (1 - conj(w) z)`.
///
/// For boundary `w` the evaluation switches to the cancellation-free form
/// `conj(α(w)) w (α(z) - α(w))/(z - w)` as soon as the denominator gets
/// small, reducing to the derivative value at `z = w`. A near-singular
/// pair with interior `w` is an error: no limit form applies there.
pub fn kernel_eval(alpha: &BlaschkeProduct, w: C64, z: C64) -> Result<C64> {
    let denom = one() - w.conj() * z;
    if denom.norm() < SERIES_RANGE && (w.norm() - 1.0).abs() <= BOUNDARY_TOL {
        let aw = alpha.eval(w)?;
        return Ok(aw.conj() * w * conj_kernel_eval(alpha, w, z)?);
    }
    if denom.norm() < NEAR_DIAG {
        return Err(Error::NearSingular { dist: denom.norm() });
    }
    let aw = alpha.eval(w)?;
    let az = alpha.eval(z)?;
    Ok((one() - aw.conj() * az) / denom)
}

/// Conjugate kernel `k̃_w^α(z) = (α(z) - α(w)) / (z - w)`, evaluated as a
/// derivative series near the removable singularity (`α'(w)` exactly at
/// `z = w`).
pub fn conj_kernel_eval(alpha: &BlaschkeProduct, w: C64, z: C64) -> Result<C64> {
    let h = z - w;
    if h.norm() < SERIES_RANGE {
        // (α(z) - α(w))/(z - w) = Σ_{k≥1} α^{(k)}(w) h^{k-1} / k!
        let order = 16;
        let ds = alpha.derivatives(w, order)?;
        let mut acc = C64::new(0.0, 0.0);
        let mut h_pow = C64::new(1.0, 0.0);
        let mut factorial = 1.0;
        for (k, &d) in ds.iter().enumerate().skip(1) {
            factorial *= k as f64;
            let term = d * h_pow / factorial;
            acc += term;
            if term.norm() < 1e-17 * (1.0 + acc.norm()) {
                break;
            }
            h_pow *= h;
        }
        return Ok(acc);
    }
    let aw = alpha.eval(w)?;
    let az = alpha.eval(z)?;
    Ok((az - aw) / h)
}

/// Which family of basis functions a coefficient vector refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Kernels at the zeros, `k_{a_1}, …, k_{a_m}`; needs distinct zeros.
    Kernel,
    /// Conjugate kernels at the zeros; needs distinct zeros.
    ConjugateKernel,
    /// Normalized boundary kernels at the Clark points of a parameter λ.
    Clark,
    /// Clark basis rotated by half-angle phases so the conjugation fixes
    /// each element.
    ModifiedClark,
}

/// A basis choice: the kind plus, for the Clark kinds, the unimodular
/// parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub lambda: Option<C64>,
}

impl BasisSpec {
    pub fn kernel() -> Self {
        Self {
            kind: BasisKind::Kernel,
            lambda: None,
        }
    }

    pub fn conjugate_kernel() -> Self {
        Self {
            kind: BasisKind::ConjugateKernel,
            lambda: None,
        }
    }

    pub fn clark(lambda: C64) -> Self {
        Self {
            kind: BasisKind::Clark,
            lambda: Some(lambda),
        }
    }

    pub fn modified_clark(lambda: C64) -> Self {
        Self {
            kind: BasisKind::ModifiedClark,
            lambda: Some(lambda),
        }
    }

    pub fn is_clark_kind(&self) -> bool {
        matches!(self.kind, BasisKind::Clark | BasisKind::ModifiedClark)
    }

    /// Admissibility for a given generator: kernel kinds need distinct
    /// zeros and no λ; Clark kinds need a unimodular λ.
    pub fn validate(&self, generator: &BlaschkeProduct, cfg: &ToleranceConfig) -> Result<()> {
        if self.is_clark_kind() {
            let lambda = self.lambda.ok_or_else(|| {
                Error::BasisInadmissible("Clark basis kinds need a lambda parameter".into())
            })?;
            if (lambda.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::BasisInadmissible(format!(
                    "lambda must be unimodular, |lambda| = {:.17}",
                    lambda.norm()
                )));
            }
        } else {
            if self.lambda.is_some() {
                return Err(Error::BasisInadmissible(
                    "lambda is only meaningful for Clark basis kinds".into(),
                ));
            }
            generator
                .require_distinct_zeros(cfg.sep)
                .map_err(|e| Error::BasisInadmissible(e.to_string()))?;
        }
        Ok(())
    }
}

/// The `m` unimodular solutions of `α(η) = α_λ` with their weights and
/// half-angle phases, sorted by principal argument.
#[derive(Debug, Clone, PartialEq)]
pub struct ClarkSystem {
    pub lambda: C64,
    /// Möbius shift `(λ + α(0)) / (1 + conj(α(0)) λ)` of the parameter.
    pub alpha_lambda: C64,
    pub points: Vec<C64>,
    /// `|α'(η_j)|`, the squared norms of the boundary kernels.
    pub weights: Vec<f64>,
    /// Unimodular `ω_j` with `ω_j² η_j = α_λ`; rotating the normalized
    /// kernel by `ω_j` produces a conjugation-fixed basis element.
    pub phases: Vec<C64>,
}

/// Solves `α(η) = α_λ` on the unit circle and assembles the Clark system.
///
/// Roots of `P - α_λ Q` (the rational form of the equation) are polished
/// by the polynomial root finder and then projected radially onto the
/// circle, where the solutions live exactly.
pub fn clark_system(
    alpha: &BlaschkeProduct,
    lambda: C64,
    cfg: &ToleranceConfig,
) -> Result<ClarkSystem> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "clark parameter must be unimodular, |lambda| = {:.17}",
            lambda.norm()
        )));
    }
    let alpha0 = alpha.eval(C64::new(0.0, 0.0))?;
    let mobius = (lambda + alpha0) / (one() + alpha0.conj() * lambda);
    let (p, q) = alpha.rational_form();
    let equation = p.sub(&q.scale(mobius));
    let roots = crate::numerics::poly_roots(&equation, cfg)?;

    // Polish on the rational equation itself: the polynomial residual
    // divided by |Q| can be orders of magnitude larger than the residual
    // of α(η) = α_λ, and downstream identities feel every digit of it.
    let mut points = Vec::with_capacity(roots.len());
    for r in roots {
        let mut eta = r / r.norm();
        for _ in 0..8 {
            let value = alpha.eval(eta)? - mobius;
            if value.norm() <= 1e-14 {
                break;
            }
            let slope = alpha.deriv(eta)?;
            if slope.norm() == 0.0 {
                break;
            }
            eta -= value / slope;
            eta /= eta.norm();
        }
        points.push(eta);
    }
    points.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());

    for (i, &eta) in points.iter().enumerate() {
        let residual = (alpha.eval(eta)? - mobius).norm();
        if residual > 1e-10 {
            return Err(Error::NonConvergence(format!(
                "clark point {i} has residual {residual:.3e}"
            )));
        }
        for (j, &other) in points.iter().enumerate().skip(i + 1) {
            let dist = (eta - other).norm();
            if dist <= cfg.sep {
                return Err(Error::DegenerateSystem { i, j, dist });
            }
        }
    }

    let mut weights = Vec::with_capacity(points.len());
    let mut phases = Vec::with_capacity(points.len());
    for &eta in &points {
        weights.push(alpha.deriv(eta)?.norm());
        // Half-angle phase with principal arguments; the square is pinned
        // to alpha_lambda * conj(eta) so that C_α fixes each basis element.
        let half = -0.5 * (eta.arg() - mobius.arg());
        phases.push(C64::from_polar(1.0, half));
    }
    Ok(ClarkSystem {
        lambda,
        alpha_lambda: mobius,
        points,
        weights,
        phases,
    })
}

/// The parameter λ whose Clark system for `alpha` passes through the
/// boundary point `eta`.
pub fn clark_parameter_through(alpha: &BlaschkeProduct, eta: C64) -> Result<C64> {
    if (eta.norm() - 1.0).abs() > DISK_SLACK {
        return Err(Error::InvalidInput(format!(
            "clark points are unimodular, |eta| = {:.17}",
            eta.norm()
        )));
    }
    let mu = alpha.eval(eta / eta.norm())?;
    let alpha0 = alpha.eval(C64::new(0.0, 0.0))?;
    let lambda = (mu - alpha0) / (one() - alpha0.conj() * mu);
    Ok(lambda / lambda.norm())
}

/// A kernel-type function: `k_w` or its conjugate `k̃_w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum KernelSide {
    Plain(C64),
    Tilde(C64),
}

/// A scalar multiple of a kernel-type function; every basis element and
/// rank-one factor in the crate has this shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BasisFn {
    pub base: KernelSide,
    pub scale: C64,
}

impl BasisFn {
    pub(crate) fn plain(w: C64) -> Self {
        Self {
            base: KernelSide::Plain(w),
            scale: one(),
        }
    }

    pub(crate) fn tilde(w: C64) -> Self {
        Self {
            base: KernelSide::Tilde(w),
            scale: one(),
        }
    }

    pub(crate) fn eval(&self, theta: &BlaschkeProduct, z: C64) -> Result<C64> {
        let base = match self.base {
            KernelSide::Plain(w) => kernel_eval(theta, w, z)?,
            KernelSide::Tilde(w) => conj_kernel_eval(theta, w, z)?,
        };
        Ok(self.scale * base)
    }
}

/// Closed-form inner product of two kernel-type functions of `K_θ`.
pub(crate) fn inner_sides(theta: &BlaschkeProduct, f: KernelSide, g: KernelSide) -> Result<C64> {
    use KernelSide::*;
    match (f, g) {
        (Plain(w), Plain(v)) => kernel_eval(theta, w, v),
        (Tilde(w), Plain(v)) => conj_kernel_eval(theta, w, v),
        (Plain(w), Tilde(v)) => Ok(conj_kernel_eval(theta, v, w)?.conj()),
        (Tilde(w), Tilde(v)) => kernel_eval(theta, v, w),
    }
}

pub(crate) fn inner_fns(theta: &BlaschkeProduct, f: &BasisFn, g: &BasisFn) -> Result<C64> {
    Ok(f.scale * g.scale.conj() * inner_sides(theta, f.base, g.base)?)
}

/// A basis spec instantiated for one generator: the ordered list of basis
/// functions, plus the Clark system when the kind requires one.
///
/// Kernel-kind functions are enumerated in the generator's stored zero
/// order; Clark-kind functions follow the argument-sorted Clark points.
#[derive(Debug, Clone)]
pub struct ResolvedBasis {
    pub spec: BasisSpec,
    pub(crate) fns: Vec<BasisFn>,
    clark: Option<ClarkSystem>,
}

impl ResolvedBasis {
    pub fn resolve(
        generator: &BlaschkeProduct,
        spec: &BasisSpec,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        spec.validate(generator, cfg)?;
        match spec.kind {
            BasisKind::Kernel => Ok(Self {
                spec: *spec,
                fns: generator
                    .zeros()
                    .iter()
                    .map(|&a| BasisFn::plain(a))
                    .collect(),
                clark: None,
            }),
            BasisKind::ConjugateKernel => Ok(Self {
                spec: *spec,
                fns: generator
                    .zeros()
                    .iter()
                    .map(|&a| BasisFn::tilde(a))
                    .collect(),
                clark: None,
            }),
            BasisKind::Clark | BasisKind::ModifiedClark => {
                let system = clark_system(generator, spec.lambda.unwrap(), cfg)?;
                let fns = system
                    .points
                    .iter()
                    .zip(system.weights.iter().zip(&system.phases))
                    .map(|(&eta, (&w, &omega))| BasisFn {
                        base: KernelSide::Plain(eta),
                        scale: if spec.kind == BasisKind::Clark {
                            C64::new(1.0 / w.sqrt(), 0.0)
                        } else {
                            omega / w.sqrt()
                        },
                    })
                    .collect();
                Ok(Self {
                    spec: *spec,
                    fns,
                    clark: Some(system),
                })
            }
        }
    }

    pub fn len(&self) -> usize {
        self.fns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fns.is_empty()
    }

    pub fn clark(&self) -> Option<&ClarkSystem> {
        self.clark.as_ref()
    }

    /// Index points of the basis: the zeros for kernel kinds, the Clark
    /// points otherwise.
    pub fn points(&self) -> Vec<C64> {
        self.fns
            .iter()
            .map(|f| match f.base {
                KernelSide::Plain(w) | KernelSide::Tilde(w) => w,
            })
            .collect()
    }

    pub fn eval_fn(&self, generator: &BlaschkeProduct, idx: usize, z: C64) -> Result<C64> {
        self.fns[idx].eval(generator, z)
    }
}

/// Gram matrix `G[i][j] = ⟨φ_j, φ_i⟩` of a basis; Hermitian positive
/// definite, and the identity for the orthonormal Clark kinds.
pub fn gram(
    generator: &BlaschkeProduct,
    basis: &BasisSpec,
    cfg: &ToleranceConfig,
) -> Result<CMatrix> {
    let rb = ResolvedBasis::resolve(generator, basis, cfg)?;
    gram_resolved(generator, &rb)
}

pub(crate) fn gram_resolved(generator: &BlaschkeProduct, rb: &ResolvedBasis) -> Result<CMatrix> {
    let m = rb.len();
    let mut g = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            g[(i, j)] = inner_fns(generator, &rb.fns[j], &rb.fns[i])?;
        }
    }
    Ok(g)
}

/// Mixed Gram `M[i][j] = ⟨from_j, to_i⟩` between two bases of the same
/// model space.
pub(crate) fn mixed_gram(
    generator: &BlaschkeProduct,
    from: &ResolvedBasis,
    to: &ResolvedBasis,
) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(to.len(), from.len());
    for i in 0..to.len() {
        for j in 0..from.len() {
            m[(i, j)] = inner_fns(generator, &from.fns[j], &to.fns[i])?;
        }
    }
    Ok(m)
}

/// Coefficient transition matrix: `coeffs_to = T · coeffs_from`.
pub(crate) fn transition(
    generator: &BlaschkeProduct,
    from: &ResolvedBasis,
    to: &ResolvedBasis,
) -> Result<CMatrix> {
    let g_to = gram_resolved(generator, to)?;
    let mix = mixed_gram(generator, from, to)?;
    let mut t = CMatrix::zeros(to.len(), from.len());
    for j in 0..from.len() {
        let rhs: Vec<C64> = (0..to.len()).map(|i| mix[(i, j)]).collect();
        let col = solve_hermitian(&g_to, &rhs)?;
        for i in 0..to.len() {
            t[(i, j)] = col[i];
        }
    }
    Ok(t)
}

/// Coefficients of `u` (a scaled kernel-type function of `K_θ`) with
/// respect to a resolved basis.
pub(crate) fn coeffs_of_fn(
    generator: &BlaschkeProduct,
    rb: &ResolvedBasis,
    u: &BasisFn,
) -> Result<Vec<C64>> {
    let g = gram_resolved(generator, rb)?;
    let rhs: Vec<C64> = rb
        .fns
        .iter()
        .map(|phi| inner_fns(generator, u, phi))
        .collect::<Result<_>>()?;
    solve_hermitian(&g, &rhs)
}

/// An element of a model space as coefficients with respect to a declared
/// basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelVector {
    pub generator: BlaschkeProduct,
    pub basis: BasisSpec,
    pub coeffs: Vec<C64>,
}

impl ModelVector {
    pub fn new(
        generator: BlaschkeProduct,
        basis: BasisSpec,
        coeffs: Vec<C64>,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        basis.validate(&generator, cfg)?;
        if coeffs.len() != generator.degree() {
            return Err(Error::InvalidInput(format!(
                "coefficient count {} does not match degree {}",
                coeffs.len(),
                generator.degree()
            )));
        }
        Ok(Self {
            generator,
            basis,
            coeffs,
        })
    }

    pub fn zero(
        generator: BlaschkeProduct,
        basis: BasisSpec,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let m = generator.degree();
        Self::new(generator, basis, vec![C64::new(0.0, 0.0); m], cfg)
    }
}

/// Re-expresses the same model-space element in another basis by solving
/// the target Gram system.
pub fn change_basis(
    v: &ModelVector,
    target: &BasisSpec,
    cfg: &ToleranceConfig,
) -> Result<ModelVector> {
    if *target == v.basis {
        return Ok(v.clone());
    }
    let from = ResolvedBasis::resolve(&v.generator, &v.basis, cfg)?;
    let to = ResolvedBasis::resolve(&v.generator, target, cfg)?;
    let t = transition(&v.generator, &from, &to)?;
    ModelVector::new(v.generator.clone(), *target, t.mul_vec(&v.coeffs), cfg)
}

/// Applies the conjugation `C_α` to a coefficient vector.
///
/// Kernel coefficients map to conjugated conjugate-kernel coefficients and
/// back; the Clark basis picks up the unimodular factors `α_λ conj(η_j)`;
/// the modified Clark basis is fixed elementwise, so only the antilinearity
/// acts there.
pub fn conjugate_vector(v: &ModelVector, cfg: &ToleranceConfig) -> Result<ModelVector> {
    let conj_coeffs: Vec<C64> = v.coeffs.iter().map(|c| c.conj()).collect();
    match v.basis.kind {
        BasisKind::Kernel => ModelVector::new(
            v.generator.clone(),
            BasisSpec::conjugate_kernel(),
            conj_coeffs,
            cfg,
        ),
        BasisKind::ConjugateKernel => {
            ModelVector::new(v.generator.clone(), BasisSpec::kernel(), conj_coeffs, cfg)
        }
        BasisKind::Clark => {
            let system = clark_system(&v.generator, v.basis.lambda.unwrap(), cfg)?;
            let coeffs = conj_coeffs
                .iter()
                .zip(&system.points)
                .map(|(&c, &eta)| c * system.alpha_lambda * eta.conj())
                .collect();
            ModelVector::new(v.generator.clone(), v.basis, coeffs, cfg)
        }
        BasisKind::ModifiedClark => {
            ModelVector::new(v.generator.clone(), v.basis, conj_coeffs, cfg)
        }
    }
}

/// Pointwise value `Σ c_i φ_i(z)`.
pub fn eval_vector(v: &ModelVector, z: C64, cfg: &ToleranceConfig) -> Result<C64> {
    let rb = ResolvedBasis::resolve(&v.generator, &v.basis, cfg)?;
    let mut acc = C64::new(0.0, 0.0);
    for (c, f) in v.coeffs.iter().zip(&rb.fns) {
        acc += c * f.eval(&v.generator, z)?;
    }
    Ok(acc)
}

/// Inner product `⟨u, v⟩` of two elements of the same model space, through
/// the closed-form mixed Gram matrix.
pub fn inner(u: &ModelVector, v: &ModelVector, cfg: &ToleranceConfig) -> Result<C64> {
    if u.generator != v.generator {
        return Err(Error::BasisMismatch(
            "inner product requires the same generator".into(),
        ));
    }
    let from = ResolvedBasis::resolve(&u.generator, &u.basis, cfg)?;
    let to = ResolvedBasis::resolve(&v.generator, &v.basis, cfg)?;
    let mix = mixed_gram(&u.generator, &from, &to)?;
    let mixed = mix.mul_vec(&u.coeffs);
    Ok(mixed
        .iter()
        .zip(&v.coeffs)
        .map(|(&a, &d)| d.conj() * a)
        .sum())
}
