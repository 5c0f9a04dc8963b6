//! Construction, representation, membership testing, completion, adjoints,
//! dimension, and symbol recovery for asymmetric truncated Toeplitz
//! operators `A_φ: K_α → K_β`.
//!
//! A matrix is stored in the canonical enumeration of its bases (the
//! generator's zero order, or argument-sorted Clark points). The paper
//! convention "common index points come first and aligned" is realized by
//! an index view: the pair context carries permutations `conv_in`,
//! `conv_out` placing the `l` matched points first, and every membership
//! and completion formula reads entries through that view. Entry layouts,
//! serialization, and [`apply`] all stay canonical.

use crate::blaschke::{match_point_lists, match_zeros, BlaschkeProduct, DISK_SLACK};
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::modelspace::{
    self, coeffs_of_fn, gram_resolved, inner_fns, transition, BasisFn, BasisKind, BasisSpec,
    ModelVector, ResolvedBasis,
};
use crate::numerics::{lstsq_min_norm, numerical_rank, CMatrix};
use crate::C64;

/// A symbol `φ = conj(χ) + ψ` with `χ ∈ K_α`, `ψ ∈ K_β`, both given by
/// conjugate-kernel-basis coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPair {
    pub chi: ModelVector,
    pub psi: ModelVector,
}

impl SymbolPair {
    pub fn new(chi: ModelVector, psi: ModelVector) -> Result<Self> {
        if chi.basis.kind != BasisKind::ConjugateKernel
            || psi.basis.kind != BasisKind::ConjugateKernel
        {
            return Err(Error::BasisInadmissible(
                "symbol pairs are stated in conjugate-kernel coefficients".into(),
            ));
        }
        Ok(Self { chi, psi })
    }

    pub fn alpha(&self) -> &BlaschkeProduct {
        &self.chi.generator
    }

    pub fn beta(&self) -> &BlaschkeProduct {
        &self.psi.generator
    }

    /// The symbol pair of the compression of the identity, `φ ≡ 1`:
    /// `χ = 0` and `ψ = k_0^β`, whose conjugate-kernel coefficients are
    /// `1/β'(b_s)`.
    pub fn one(
        alpha: &BlaschkeProduct,
        beta: &BlaschkeProduct,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let chi = ModelVector::zero(alpha.clone(), BasisSpec::conjugate_kernel(), cfg)?;
        let mut d = Vec::with_capacity(beta.degree());
        for &b in beta.zeros() {
            d.push(C64::new(1.0, 0.0) / beta.deriv(b)?);
        }
        let psi = ModelVector::new(beta.clone(), BasisSpec::conjugate_kernel(), d, cfg)?;
        Self::new(chi, psi)
    }
}

/// A finite combination `Σ c_i k_{ξ_i}^β ⊗ k_{ξ_i}^α` of boundary rank-one
/// generators.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCombo {
    pub points: Vec<C64>,
    pub coeffs: Vec<C64>,
}

impl BoundaryCombo {
    pub fn new(points: Vec<C64>, coeffs: Vec<C64>, cfg: &ToleranceConfig) -> Result<Self> {
        if points.len() != coeffs.len() {
            return Err(Error::InvalidInput(format!(
                "{} points vs {} coefficients",
                points.len(),
                coeffs.len()
            )));
        }
        for (i, xi) in points.iter().enumerate() {
            if (xi.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "combo point {i} is not unimodular: |ξ| = {:.17}",
                    xi.norm()
                )));
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let dist = (points[i] - points[j]).norm();
                if dist <= cfg.sep {
                    return Err(Error::DuplicateZeros { i, j, dist });
                }
            }
        }
        Ok(Self { points, coeffs })
    }
}

/// The three rank-one generator shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankOneKind {
    /// `k̃_w^β ⊗ k_w^α`, the operator of the symbol `β(z)/(z-w)`.
    TildeOutKIn,
    /// `k_w^β ⊗ k̃_w^α`, the operator of the symbol `conj(α(z))/(conj(z)-conj(w))`.
    KOutTildeIn,
    /// `k_η^β ⊗ k_η^α` at a boundary point, the operator of
    /// `k_η^β + conj(k_η^α) - 1`.
    BoundaryKK,
}

/// Matrix of an operator `K_α → K_β` tagged with its basis pair and the
/// common-index count of the active convention.
#[derive(Debug, Clone, PartialEq)]
pub struct AttoMatrix {
    pub alpha: BlaschkeProduct,
    pub beta: BlaschkeProduct,
    pub basis_in: BasisSpec,
    pub basis_out: BasisSpec,
    /// `n × m` entries: column `p` holds the output coefficients of the
    /// `p`-th input basis function.
    pub entries: CMatrix,
    /// Number of common index points (zeros or Clark points) between the
    /// two sides; 0 for mixed basis families.
    pub l: usize,
}

impl AttoMatrix {
    /// Tags an entry matrix with its pair data, recomputing the
    /// common-index count from the generators and bases.
    pub fn new(
        alpha: BlaschkeProduct,
        beta: BlaschkeProduct,
        basis_in: BasisSpec,
        basis_out: BasisSpec,
        entries: CMatrix,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let ctx = PairContext::new(&alpha, &beta, &basis_in, &basis_out, cfg)?;
        if entries.rows() != beta.degree() || entries.cols() != alpha.degree() {
            return Err(Error::InvalidInput(format!(
                "entry matrix is {}x{}, expected {}x{}",
                entries.rows(),
                entries.cols(),
                beta.degree(),
                alpha.degree()
            )));
        }
        Ok(Self {
            alpha,
            beta,
            basis_in,
            basis_out,
            entries,
            l: ctx.l,
        })
    }

    /// Row-major flattening, the vectorization used for rank questions.
    pub fn vectorize(&self) -> Vec<C64> {
        self.entries.data().to_vec()
    }
}

/// Common-index count for a basis pair without building a matrix.
pub fn common_index_count(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    basis_in: &BasisSpec,
    basis_out: &BasisSpec,
    cfg: &ToleranceConfig,
) -> Result<usize> {
    Ok(PairContext::new(alpha, beta, basis_in, basis_out, cfg)?.l)
}

/// Result of a membership test.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub is_member: bool,
    /// Largest formula residual, relative to `1 + max|entry|`.
    pub max_residual: f64,
    /// Canonical `(row, col)` of the worst residual.
    pub worst_entry: (usize, usize),
}

/// Ranks of the analytic-symbol span, the coanalytic-symbol span, and
/// their intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubspaceDims {
    pub analytic: usize,
    pub coanalytic: usize,
    pub intersection: usize,
}

/// Output of [`recover_symbol`].
#[derive(Debug, Clone)]
pub struct RecoveredSymbol {
    pub symbol: SymbolPair,
    /// Least-squares residual of the recovery system.
    pub residual: f64,
    /// Dimension of the numerical null space of the recovery system; the
    /// minimal-norm solution quotients this gauge freedom out.
    pub null_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    KernelLike { conjugated: bool },
    ClarkLike { modified: bool },
    Mixed,
}

/// Everything a pair of resolved bases pins down: the formula family, the
/// matching, and the convention permutations.
struct PairContext {
    rb_in: ResolvedBasis,
    rb_out: ResolvedBasis,
    family: Family,
    l: usize,
    /// `conv_in[k]` = canonical input index in convention position `k`.
    conv_in: Vec<usize>,
    conv_out: Vec<usize>,
}

impl PairContext {
    fn new(
        alpha: &BlaschkeProduct,
        beta: &BlaschkeProduct,
        basis_in: &BasisSpec,
        basis_out: &BasisSpec,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let rb_in = ResolvedBasis::resolve(alpha, basis_in, cfg)?;
        let rb_out = ResolvedBasis::resolve(beta, basis_out, cfg)?;
        let family = match (basis_in.kind, basis_out.kind) {
            (BasisKind::Kernel, BasisKind::Kernel) => Family::KernelLike { conjugated: true },
            (BasisKind::ConjugateKernel, BasisKind::ConjugateKernel) => {
                Family::KernelLike { conjugated: false }
            }
            (BasisKind::Clark, BasisKind::Clark) => Family::ClarkLike { modified: false },
            (BasisKind::ModifiedClark, BasisKind::ModifiedClark) => {
                Family::ClarkLike { modified: true }
            }
            _ => Family::Mixed,
        };
        let (l, conv_in, conv_out) = match family {
            Family::KernelLike { .. } => {
                let m = match_zeros(alpha, beta, cfg.sep)?;
                (m.l, m.perm_alpha, m.perm_beta)
            }
            Family::ClarkLike { .. } => {
                let m = match_point_lists(&rb_in.points(), &rb_out.points(), cfg.sep)?;
                (m.l, m.perm_alpha, m.perm_beta)
            }
            Family::Mixed => (0, (0..rb_in.len()).collect(), (0..rb_out.len()).collect()),
        };
        Ok(Self {
            rb_in,
            rb_out,
            family,
            l,
            conv_in,
            conv_out,
        })
    }

    fn m(&self) -> usize {
        self.rb_in.len()
    }

    fn n(&self) -> usize {
        self.rb_out.len()
    }

    /// Moves the convention positions of `base = (row, col)` (canonical
    /// indices) to the front, so completion can anchor on any admissible
    /// row/column pair.
    fn rebase(&mut self, base_row: usize, base_col: usize) -> Result<()> {
        let pos_out = self
            .conv_out
            .iter()
            .position(|&i| i == base_row)
            .ok_or_else(|| Error::InvalidInput(format!("base row {base_row} out of range")))?;
        let pos_in = self
            .conv_in
            .iter()
            .position(|&i| i == base_col)
            .ok_or_else(|| Error::InvalidInput(format!("base col {base_col} out of range")))?;
        if self.l > 0 {
            // The anchor row and column must cross on the common diagonal.
            if pos_out != pos_in || pos_out >= self.l {
                return Err(Error::InvalidInput(
                    "with common index points the base row and column must meet on the \
                     leading diagonal of the common block"
                        .into(),
                ));
            }
        }
        self.conv_out.swap(0, pos_out);
        self.conv_in.swap(0, pos_in);
        Ok(())
    }
}

/// Data for the kernel-basis and conjugate-kernel-basis criteria, in
/// convention order. For the kernel bases all quantities are conjugated.
struct PointData {
    x: Vec<C64>,
    y: Vec<C64>,
    w: Vec<C64>,
}

impl PointData {
    fn build(
        alpha: &BlaschkeProduct,
        beta: &BlaschkeProduct,
        ctx: &PairContext,
        conjugated: bool,
    ) -> Result<Self> {
        let tw = |c: C64| if conjugated { c.conj() } else { c };
        let x = ctx
            .conv_in
            .iter()
            .map(|&i| tw(alpha.zeros()[i]))
            .collect();
        let (y, w): (Vec<C64>, Vec<C64>) = ctx
            .conv_out
            .iter()
            .map(|&s| {
                let b = beta.zeros()[s];
                Ok((tw(b), tw(beta.deriv(b)?)))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Ok(Self { x, y, w })
    }

    fn predict(
        &self,
        l: usize,
        r: &dyn Fn(usize, usize) -> C64,
        s: usize,
        p: usize,
        sep: f64,
    ) -> Result<C64> {
        let den = self.w[s] * (self.x[p] - self.y[s]);
        if (self.x[p] - self.y[s]).norm() <= sep {
            return Err(Error::FormulaInapplicable {
                row: s,
                col: p,
                reason: "index points coincide but the matching declared them distinct".into(),
            });
        }
        let num = if l == 0 {
            self.w[s] * (self.x[0] - self.y[s]) * r(s, 0)
                + self.w[0] * (self.y[0] - self.x[0]) * r(0, 0)
                + self.w[0] * (self.x[p] - self.y[0]) * r(0, p)
        } else if s < l {
            self.w[0] * (self.x[0] - self.y[s]) * r(0, s)
                + self.w[0] * (self.x[p] - self.y[0]) * r(0, p)
        } else {
            self.w[s] * (self.x[0] - self.y[s]) * r(s, 0)
                + self.w[0] * (self.x[p] - self.y[0]) * r(0, p)
        };
        Ok(num / den)
    }
}

/// Data for the Clark-basis criteria in convention order. `g` and `h`
/// carry the gauge that distinguishes the plain from the modified basis:
/// ratios of `g` reproduce the point ratios for the plain Clark basis and
/// inverse phase ratios for the modified one.
struct ClarkData {
    eta: Vec<C64>,
    zeta: Vec<C64>,
    a: Vec<f64>,
    b: Vec<f64>,
    g: Vec<C64>,
    h: Vec<C64>,
}

impl ClarkData {
    fn build(ctx: &PairContext, modified: bool) -> Result<Self> {
        let sys_in = ctx.rb_in.clark().expect("clark family has a system");
        let sys_out = ctx.rb_out.clark().expect("clark family has a system");
        let eta: Vec<C64> = ctx.conv_in.iter().map(|&i| sys_in.points[i]).collect();
        let zeta: Vec<C64> = ctx.conv_out.iter().map(|&s| sys_out.points[s]).collect();
        let a = ctx
            .conv_in
            .iter()
            .map(|&i| sys_in.weights[i].sqrt())
            .collect();
        let b = ctx
            .conv_out
            .iter()
            .map(|&s| sys_out.weights[s].sqrt())
            .collect();
        let g = if modified {
            ctx.conv_in
                .iter()
                .map(|&i| C64::new(1.0, 0.0) / sys_in.phases[i])
                .collect()
        } else {
            eta.clone()
        };
        let h = if modified {
            ctx.conv_out
                .iter()
                .map(|&s| C64::new(1.0, 0.0) / sys_out.phases[s])
                .collect()
        } else {
            vec![C64::new(1.0, 0.0); zeta.len()]
        };
        Ok(Self {
            eta,
            zeta,
            a,
            b,
            g,
            h,
        })
    }

    fn predict(
        &self,
        l: usize,
        r: &dyn Fn(usize, usize) -> C64,
        s: usize,
        p: usize,
        sep: f64,
    ) -> Result<C64> {
        let den = self.eta[p] - self.zeta[s];
        if den.norm() <= sep {
            return Err(Error::FormulaInapplicable {
                row: s,
                col: p,
                reason: "clark points coincide but the matching declared them distinct".into(),
            });
        }
        let v = if l == 0 {
            (self.a[0] / self.a[p]) * (self.g[p] / self.g[0]) * ((self.eta[0] - self.zeta[s]) / den)
                * r(s, 0)
                + (self.a[0] * self.b[0] / (self.a[p] * self.b[s]))
                    * (self.g[p] / self.g[0])
                    * (self.h[s] / self.h[0])
                    * ((self.zeta[0] - self.eta[0]) / den)
                    * r(0, 0)
                + (self.b[0] / self.b[s])
                    * (self.h[s] / self.h[0])
                    * ((self.eta[p] - self.zeta[0]) / den)
                    * r(0, p)
        } else if s < l {
            (self.a[s] * self.b[0] / (self.a[p] * self.b[s]))
                * (self.g[p] / self.g[s])
                * (self.h[s] / self.h[0])
                * ((self.eta[0] - self.zeta[s]) / den)
                * r(0, s)
                + (self.b[0] / self.b[s])
                    * (self.h[s] / self.h[0])
                    * ((self.eta[p] - self.zeta[0]) / den)
                    * r(0, p)
        } else {
            (self.a[0] / self.a[p]) * (self.g[p] / self.g[0]) * ((self.eta[0] - self.zeta[s]) / den)
                * r(s, 0)
                + (self.b[0] / self.b[s])
                    * (self.h[s] / self.h[0])
                    * ((self.eta[p] - self.zeta[0]) / den)
                    * r(0, p)
        };
        Ok(v)
    }
}

enum FamilyData {
    Points(PointData),
    Clark(ClarkData),
}

impl FamilyData {
    fn build(
        alpha: &BlaschkeProduct,
        beta: &BlaschkeProduct,
        ctx: &PairContext,
    ) -> Result<Self> {
        match ctx.family {
            Family::KernelLike { conjugated } => Ok(FamilyData::Points(PointData::build(
                alpha, beta, ctx, conjugated,
            )?)),
            Family::ClarkLike { modified } => Ok(FamilyData::Clark(ClarkData::build(ctx, modified)?)),
            Family::Mixed => Err(Error::BasisInadmissible(
                "membership criteria need both bases from the same family".into(),
            )),
        }
    }

    fn predict(
        &self,
        l: usize,
        r: &dyn Fn(usize, usize) -> C64,
        s: usize,
        p: usize,
        sep: f64,
    ) -> Result<C64> {
        match self {
            FamilyData::Points(d) => d.predict(l, r, s, p, sep),
            FamilyData::Clark(d) => d.predict(l, r, s, p, sep),
        }
    }
}

/// Convention positions that are NOT determined by the others: for `l = 0`
/// the first row and column; for `l > 0` the first row, the diagonal of
/// the common block, and the tail of the first column.
fn is_determining_conv(l: usize, s: usize, p: usize) -> bool {
    if s == 0 {
        return true;
    }
    if l > 0 && s < l {
        return s == p;
    }
    p == 0
}

/// Matrix entries of the rank-one operator `u ⊗ v` (mapping
/// `f ↦ ⟨f, v⟩ u`) in the given resolved bases.
fn rank_one_entries(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    rb_in: &ResolvedBasis,
    rb_out: &ResolvedBasis,
    u: &BasisFn,
    v: &BasisFn,
) -> Result<CMatrix> {
    let ucoef = coeffs_of_fn(beta, rb_out, u)?;
    let vcomp: Vec<C64> = rb_in
        .fns
        .iter()
        .map(|phi| inner_fns(alpha, phi, v))
        .collect::<Result<_>>()?;
    Ok(CMatrix::from_fn(rb_out.len(), rb_in.len(), |s, p| {
        ucoef[s] * vcomp[p]
    }))
}

/// Matrix of a rank-one generator in the requested bases.
///
/// The two interior kinds accept any point of the closed unit disk (the
/// boundary case is the ADC limit); `BoundaryKK` requires a unimodular
/// point.
pub fn rank_one_matrix(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    w: C64,
    kind: RankOneKind,
    basis_in: &BasisSpec,
    basis_out: &BasisSpec,
    cfg: &ToleranceConfig,
) -> Result<AttoMatrix> {
    if w.norm() > 1.0 + DISK_SLACK {
        return Err(Error::InvalidInput(format!(
            "rank-one point {w} lies outside the closed unit disk"
        )));
    }
    if kind == RankOneKind::BoundaryKK && (w.norm() - 1.0).abs() > DISK_SLACK {
        return Err(Error::InvalidInput(format!(
            "boundary rank-one point must be unimodular, |w| = {:.17}",
            w.norm()
        )));
    }
    let ctx = PairContext::new(alpha, beta, basis_in, basis_out, cfg)?;
    let (u, v) = match kind {
        RankOneKind::TildeOutKIn => (BasisFn::tilde(w), BasisFn::plain(w)),
        RankOneKind::KOutTildeIn => (BasisFn::plain(w), BasisFn::tilde(w)),
        RankOneKind::BoundaryKK => (BasisFn::plain(w), BasisFn::plain(w)),
    };
    let entries = rank_one_entries(alpha, beta, &ctx.rb_in, &ctx.rb_out, &u, &v)?;
    AttoMatrix::new(
        alpha.clone(),
        beta.clone(),
        *basis_in,
        *basis_out,
        entries,
        cfg,
    )
}

/// Matrix of `A_{conj(χ)+ψ}` in the requested bases, as the closed-form
/// rank-one sum `Σ conj(c_i) k_{a_i}^β ⊗ k̃_{a_i}^α + Σ d_j k̃_{b_j}^β ⊗ k_{b_j}^α`.
pub fn matrix_from_symbol(
    sym: &SymbolPair,
    basis_in: &BasisSpec,
    basis_out: &BasisSpec,
    cfg: &ToleranceConfig,
) -> Result<AttoMatrix> {
    let alpha = sym.alpha();
    let beta = sym.beta();
    let ctx = PairContext::new(alpha, beta, basis_in, basis_out, cfg)?;
    let mut entries = CMatrix::zeros(ctx.n(), ctx.m());
    for (i, &a) in alpha.zeros().iter().enumerate() {
        let coef = sym.chi.coeffs[i].conj();
        if coef.norm() == 0.0 {
            continue;
        }
        let term = rank_one_entries(
            alpha,
            beta,
            &ctx.rb_in,
            &ctx.rb_out,
            &BasisFn::plain(a),
            &BasisFn::tilde(a),
        )?;
        entries = entries.add(&term.scale(coef));
    }
    for (j, &b) in beta.zeros().iter().enumerate() {
        let coef = sym.psi.coeffs[j];
        if coef.norm() == 0.0 {
            continue;
        }
        let term = rank_one_entries(
            alpha,
            beta,
            &ctx.rb_in,
            &ctx.rb_out,
            &BasisFn::tilde(b),
            &BasisFn::plain(b),
        )?;
        entries = entries.add(&term.scale(coef));
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

/// Matrix of a boundary rank-one combination.
///
/// When a Clark basis is in play the combo points must stay clear of that
/// system's Clark points.
pub fn matrix_from_boundary_combo(
    combo: &BoundaryCombo,
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    basis_in: &BasisSpec,
    basis_out: &BasisSpec,
    cfg: &ToleranceConfig,
) -> Result<AttoMatrix> {
    let ctx = PairContext::new(alpha, beta, basis_in, basis_out, cfg)?;
    for rb in [&ctx.rb_in, &ctx.rb_out] {
        if rb.spec.is_clark_kind() {
            for (i, xi) in combo.points.iter().enumerate() {
                for pt in rb.points() {
                    let dist = (xi - pt).norm();
                    if dist <= cfg.sep {
                        return Err(Error::PointCollision { index: i, dist });
                    }
                }
            }
        }
    }
    let mut entries = CMatrix::zeros(ctx.n(), ctx.m());
    for (xi, coef) in combo.points.iter().zip(&combo.coeffs) {
        let term = rank_one_entries(
            alpha,
            beta,
            &ctx.rb_in,
            &ctx.rb_out,
            &BasisFn::plain(*xi),
            &BasisFn::plain(*xi),
        )?;
        entries = entries.add(&term.scale(*coef));
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

fn run_membership(
    matrix: &AttoMatrix,
    ctx: &PairContext,
    cfg: &ToleranceConfig,
) -> Result<MembershipReport> {
    let data = FamilyData::build(&matrix.alpha, &matrix.beta, ctx)?;
    let entries = &matrix.entries;
    let view = |s: usize, p: usize| entries[(ctx.conv_out[s], ctx.conv_in[p])];
    let scale = 1.0 + entries.max_abs();

    let mut max_abs_residual = 0.0_f64;
    let mut worst = (0usize, 0usize);
    for s in 0..ctx.n() {
        for p in 0..ctx.m() {
            if is_determining_conv(ctx.l, s, p) {
                continue;
            }
            let predicted = data.predict(ctx.l, &view, s, p, cfg.sep)?;
            let residual = (predicted - view(s, p)).norm();
            if residual > max_abs_residual {
                max_abs_residual = residual;
                worst = (ctx.conv_out[s], ctx.conv_in[p]);
            }
        }
    }
    Ok(MembershipReport {
        is_member: max_abs_residual <= cfg.membership_rel * scale,
        max_residual: max_abs_residual / scale,
        worst_entry: worst,
    })
}

/// Decides whether the matrix satisfies the structure criteria of its
/// basis family, reporting the worst relative residual.
///
/// For the conjugate-kernel family with common zeros, the verdict is also
/// cross-checked through the kernel-basis criteria after a basis
/// conversion; a disagreement raises a diagnostic instead of silently
/// trusting either path.
pub fn membership_check(matrix: &AttoMatrix, cfg: &ToleranceConfig) -> Result<MembershipReport> {
    let ctx = PairContext::new(
        &matrix.alpha,
        &matrix.beta,
        &matrix.basis_in,
        &matrix.basis_out,
        cfg,
    )?;
    if ctx.l != matrix.l {
        return Err(Error::InvalidInput(format!(
            "stored common-index count {} disagrees with the recomputed matching {}",
            matrix.l, ctx.l
        )));
    }
    let report = run_membership(matrix, &ctx, cfg)?;

    if matrix.basis_in.kind == BasisKind::ConjugateKernel
        && matrix.basis_out.kind == BasisKind::ConjugateKernel
        && ctx.l > 0
    {
        let in_kernel = convert_basis(matrix, &BasisSpec::kernel(), &BasisSpec::kernel(), cfg)?;
        let cross = membership_check(&in_kernel, cfg)?;
        if cross.is_member != report.is_member {
            return Err(Error::CrossCheck(format!(
                "conjugate-kernel criteria say member={}, kernel-basis criteria say member={} \
                 (residuals {:.3e} vs {:.3e})",
                report.is_member, cross.is_member, report.max_residual, cross.max_residual
            )));
        }
    }
    Ok(report)
}

/// The canonical `(row, col)` positions from which the whole matrix is
/// reconstructed; `m + n - 1` of them.
///
/// `base` moves the anchor to another row/column (which must cross the
/// leading common diagonal when `l > 0`).
pub fn determining_positions(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    basis_in: &BasisSpec,
    basis_out: &BasisSpec,
    cfg: &ToleranceConfig,
    base: Option<(usize, usize)>,
) -> Result<Vec<(usize, usize)>> {
    let mut ctx = PairContext::new(alpha, beta, basis_in, basis_out, cfg)?;
    if let Some((r, c)) = base {
        ctx.rebase(r, c)?;
    }
    let mut out = Vec::new();
    for s in 0..ctx.n() {
        for p in 0..ctx.m() {
            if is_determining_conv(ctx.l, s, p) {
                out.push((ctx.conv_out[s], ctx.conv_in[p]));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Reconstructs the full matrix from its determining entries.
///
/// `partial` supplies exactly the positions reported by
/// [`determining_positions`] (canonical coordinates); everything else is
/// filled through the membership formulas, so the result passes the
/// membership test by construction.
pub fn complete_matrix(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    basis_in: &BasisSpec,
    basis_out: &BasisSpec,
    partial: &[(usize, usize, C64)],
    cfg: &ToleranceConfig,
    base: Option<(usize, usize)>,
) -> Result<AttoMatrix> {
    let mut ctx = PairContext::new(alpha, beta, basis_in, basis_out, cfg)?;
    if let Some((r, c)) = base {
        ctx.rebase(r, c)?;
    }
    let data = FamilyData::build(alpha, beta, &ctx)?;
    let (n, m) = (ctx.n(), ctx.m());

    // Canonical -> convention position maps.
    let mut pos_out = vec![0usize; n];
    for (k, &i) in ctx.conv_out.iter().enumerate() {
        pos_out[i] = k;
    }
    let mut pos_in = vec![0usize; m];
    for (k, &i) in ctx.conv_in.iter().enumerate() {
        pos_in[i] = k;
    }

    let mut work = CMatrix::zeros(n, m);
    let mut given = vec![vec![false; m]; n];
    for &(row, col, value) in partial {
        if row >= n || col >= m {
            return Err(Error::InvalidInput(format!(
                "entry ({row},{col}) outside a {n}x{m} matrix"
            )));
        }
        let (s, p) = (pos_out[row], pos_in[col]);
        if !is_determining_conv(ctx.l, s, p) {
            return Err(Error::UnexpectedEntry { row, col });
        }
        if given[s][p] {
            return Err(Error::InvalidInput(format!(
                "entry ({row},{col}) supplied twice"
            )));
        }
        given[s][p] = true;
        work[(s, p)] = value;
    }
    for s in 0..n {
        for p in 0..m {
            if is_determining_conv(ctx.l, s, p) && !given[s][p] {
                return Err(Error::MissingEntry {
                    row: ctx.conv_out[s],
                    col: ctx.conv_in[p],
                });
            }
        }
    }

    let snapshot = work.clone();
    let view = |s: usize, p: usize| snapshot[(s, p)];
    for s in 0..n {
        for p in 0..m {
            if !is_determining_conv(ctx.l, s, p) {
                work[(s, p)] = data.predict(ctx.l, &view, s, p, cfg.sep)?;
            }
        }
    }

    let mut entries = CMatrix::zeros(n, m);
    for s in 0..n {
        for p in 0..m {
            entries[(ctx.conv_out[s], ctx.conv_in[p])] = work[(s, p)];
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

/// Re-expresses the same operator with respect to another basis pair.
pub fn convert_basis(
    matrix: &AttoMatrix,
    new_in: &BasisSpec,
    new_out: &BasisSpec,
    cfg: &ToleranceConfig,
) -> Result<AttoMatrix> {
    let old_in = ResolvedBasis::resolve(&matrix.alpha, &matrix.basis_in, cfg)?;
    let old_out = ResolvedBasis::resolve(&matrix.beta, &matrix.basis_out, cfg)?;
    let to_in = ResolvedBasis::resolve(&matrix.alpha, new_in, cfg)?;
    let to_out = ResolvedBasis::resolve(&matrix.beta, new_out, cfg)?;
    // coeffs_new_out = T_out · M · (new-in -> old-in) · coeffs_new_in
    let t_out = transition(&matrix.beta, &old_out, &to_out)?;
    let s_in = transition(&matrix.alpha, &to_in, &old_in)?;
    let entries = t_out.mul(&matrix.entries).mul(&s_in);
    AttoMatrix::new(
        matrix.alpha.clone(),
        matrix.beta.clone(),
        *new_in,
        *new_out,
        entries,
        cfg,
    )
}

/// Kernel-basis matrix of the adjoint `A*: K_β → K_α`, via the Gram
/// matrices of the two kernel bases.
pub fn adjoint_matrix(matrix: &AttoMatrix, cfg: &ToleranceConfig) -> Result<AttoMatrix> {
    if matrix.basis_in.kind != BasisKind::Kernel || matrix.basis_out.kind != BasisKind::Kernel {
        return Err(Error::BasisInadmissible(
            "adjoint matrices are computed in kernel bases".into(),
        ));
    }
    let rb_a = ResolvedBasis::resolve(&matrix.alpha, &BasisSpec::kernel(), cfg)?;
    let rb_b = ResolvedBasis::resolve(&matrix.beta, &BasisSpec::kernel(), cfg)?;
    let g_a = gram_resolved(&matrix.alpha, &rb_a)?;
    let g_b = gram_resolved(&matrix.beta, &rb_b)?;
    let rhs = matrix.entries.conj_transpose().mul(&g_b);
    // Solve G_α X = Mᴴ G_β column by column.
    let m = rhs.rows();
    let n = rhs.cols();
    let mut x = CMatrix::zeros(m, n);
    for j in 0..n {
        let col: Vec<C64> = (0..m).map(|i| rhs[(i, j)]).collect();
        let sol = crate::numerics::solve_hermitian(&g_a, &col)?;
        for i in 0..m {
            x[(i, j)] = sol[i];
        }
    }
    AttoMatrix::new(
        matrix.beta.clone(),
        matrix.alpha.clone(),
        BasisSpec::kernel(),
        BasisSpec::kernel(),
        x,
        cfg,
    )
}

/// Conjugate-kernel-basis representation of a kernel-basis matrix.
pub fn conjugate_kernel_matrix(matrix: &AttoMatrix, cfg: &ToleranceConfig) -> Result<AttoMatrix> {
    if matrix.basis_in.kind != BasisKind::Kernel || matrix.basis_out.kind != BasisKind::Kernel {
        return Err(Error::BasisInadmissible(
            "expected a kernel-basis matrix".into(),
        ));
    }
    convert_basis(
        matrix,
        &BasisSpec::conjugate_kernel(),
        &BasisSpec::conjugate_kernel(),
        cfg,
    )
}

/// Applies the operator to a coefficient vector.
pub fn apply(matrix: &AttoMatrix, v: &ModelVector, cfg: &ToleranceConfig) -> Result<ModelVector> {
    if v.generator != matrix.alpha {
        return Err(Error::BasisMismatch(
            "vector generator differs from the operator's input space".into(),
        ));
    }
    if v.basis != matrix.basis_in {
        return Err(Error::BasisMismatch(
            "vector basis differs from the operator's input basis".into(),
        ));
    }
    ModelVector::new(
        matrix.beta.clone(),
        matrix.basis_out,
        matrix.entries.mul_vec(&v.coeffs),
        cfg,
    )
}

/// Vectorized stack of `k̃_w^β ⊗ k_w^α` generators at the trial points,
/// in Clark bases with λ = 1 (admissible for any zero configuration).
fn generator_stack(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    points: &[C64],
    cfg: &ToleranceConfig,
) -> Result<CMatrix> {
    let spec = BasisSpec::clark(C64::new(1.0, 0.0));
    let rb_in = ResolvedBasis::resolve(alpha, &spec, cfg)?;
    let rb_out = ResolvedBasis::resolve(beta, &spec, cfg)?;
    let cols = rb_in.len() * rb_out.len();
    let mut stack = CMatrix::zeros(points.len(), cols);
    for (r, &w) in points.iter().enumerate() {
        let entries = rank_one_entries(
            alpha,
            beta,
            &rb_in,
            &rb_out,
            &BasisFn::tilde(w),
            &BasisFn::plain(w),
        )?;
        for (k, &e) in entries.data().iter().enumerate() {
            stack[(r, k)] = e;
        }
    }
    Ok(stack)
}

/// Numerical dimension of the operator space sampled through rank-one
/// generators at the trial points.
pub fn dimension_estimate(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    trial_points: &[C64],
    cfg: &ToleranceConfig,
) -> Result<usize> {
    let needed = alpha.degree() + beta.degree() - 1;
    if trial_points.len() < needed {
        return Err(Error::InvalidInput(format!(
            "need at least {needed} trial points, got {}",
            trial_points.len()
        )));
    }
    for i in 0..trial_points.len() {
        if trial_points[i].norm() > 1.0 + DISK_SLACK {
            return Err(Error::InvalidInput(format!(
                "trial point {i} outside the closed unit disk"
            )));
        }
        for j in (i + 1)..trial_points.len() {
            let dist = (trial_points[i] - trial_points[j]).norm();
            if dist <= cfg.sep {
                return Err(Error::DuplicateZeros { i, j, dist });
            }
        }
    }
    let stack = generator_stack(alpha, beta, trial_points, cfg)?;
    Ok(numerical_rank(&stack, cfg.rank_rel))
}

/// Boundary trial points: rotated roots of unity kept away from the Clark
/// points (λ = 1) of both generators.
pub fn default_trial_points(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    count: usize,
    rng: &mut impl rand::Rng,
    cfg: &ToleranceConfig,
) -> Result<Vec<C64>> {
    let spec = C64::new(1.0, 0.0);
    let mut avoid = modelspace::clark_system(alpha, spec, cfg)?.points;
    avoid.extend(modelspace::clark_system(beta, spec, cfg)?.points);
    let margin = 1e-6_f64.max(cfg.sep);
    for _ in 0..64 {
        let phase = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
        let pts: Vec<C64> = (0..count)
            .map(|k| {
                C64::from_polar(
                    1.0,
                    phase + 2.0 * std::f64::consts::PI * (k as f64) / (count as f64),
                )
            })
            .collect();
        let clear = pts
            .iter()
            .all(|p| avoid.iter().all(|q| (p - q).norm() > margin));
        if clear {
            return Ok(pts);
        }
    }
    Err(Error::NonConvergence(
        "could not place trial points away from the Clark points".into(),
    ))
}

/// Ranks of the two symbol-type spans and of their intersection, computed
/// from rank identities on stacked generators.
pub fn subspace_dims(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    cfg: &ToleranceConfig,
) -> Result<SubspaceDims> {
    alpha.require_distinct_zeros(cfg.sep)?;
    beta.require_distinct_zeros(cfg.sep)?;
    let spec = BasisSpec::kernel();
    let rb_in = ResolvedBasis::resolve(alpha, &spec, cfg)?;
    let rb_out = ResolvedBasis::resolve(beta, &spec, cfg)?;
    let cols = rb_in.len() * rb_out.len();

    let analytic_rows: Vec<CMatrix> = beta
        .zeros()
        .iter()
        .map(|&b| {
            rank_one_entries(
                alpha,
                beta,
                &rb_in,
                &rb_out,
                &BasisFn::tilde(b),
                &BasisFn::plain(b),
            )
        })
        .collect::<Result<_>>()?;
    let coanalytic_rows: Vec<CMatrix> = alpha
        .zeros()
        .iter()
        .map(|&a| {
            rank_one_entries(
                alpha,
                beta,
                &rb_in,
                &rb_out,
                &BasisFn::plain(a),
                &BasisFn::tilde(a),
            )
        })
        .collect::<Result<_>>()?;

    let stack = |groups: &[&[CMatrix]]| -> CMatrix {
        let total: usize = groups.iter().map(|g| g.len()).sum();
        let mut s = CMatrix::zeros(total, cols);
        let mut r = 0;
        for g in groups {
            for mat in *g {
                for (k, &e) in mat.data().iter().enumerate() {
                    s[(r, k)] = e;
                }
                r += 1;
            }
        }
        s
    };

    let r_analytic = numerical_rank(&stack(&[&analytic_rows]), cfg.rank_rel);
    let r_coanalytic = numerical_rank(&stack(&[&coanalytic_rows]), cfg.rank_rel);
    let r_joint = numerical_rank(&stack(&[&analytic_rows, &coanalytic_rows]), cfg.rank_rel);
    Ok(SubspaceDims {
        analytic: r_analytic,
        coanalytic: r_coanalytic,
        intersection: r_analytic + r_coanalytic - r_joint,
    })
}

/// Recovers a symbol pair whose operator reproduces the matrix.
///
/// The linear system is solved in the minimal-norm sense; its null space
/// is the one-dimensional gauge along which symbols can shift without
/// changing the operator.
pub fn recover_symbol(matrix: &AttoMatrix, cfg: &ToleranceConfig) -> Result<RecoveredSymbol> {
    let report = membership_check(matrix, cfg)?;
    if !report.is_member {
        return Err(Error::NotAMember {
            residual: report.max_residual,
        });
    }
    let alpha = &matrix.alpha;
    let beta = &matrix.beta;
    let ctx = PairContext::new(alpha, beta, &matrix.basis_in, &matrix.basis_out, cfg)?;
    let (m, n) = (alpha.degree(), beta.degree());
    let rows = ctx.n() * ctx.m();
    let mut system = CMatrix::zeros(rows, m + n);
    for (i, &a) in alpha.zeros().iter().enumerate() {
        let col = rank_one_entries(
            alpha,
            beta,
            &ctx.rb_in,
            &ctx.rb_out,
            &BasisFn::plain(a),
            &BasisFn::tilde(a),
        )?;
        for (k, &e) in col.data().iter().enumerate() {
            system[(k, i)] = e;
        }
    }
    for (j, &b) in beta.zeros().iter().enumerate() {
        let col = rank_one_entries(
            alpha,
            beta,
            &ctx.rb_in,
            &ctx.rb_out,
            &BasisFn::tilde(b),
            &BasisFn::plain(b),
        )?;
        for (k, &e) in col.data().iter().enumerate() {
            system[(k, m + j)] = e;
        }
    }
    let (x, residual) = lstsq_min_norm(&system, matrix.entries.data())?;
    let chi_coeffs: Vec<C64> = x[..m].iter().map(|c| c.conj()).collect();
    let psi_coeffs: Vec<C64> = x[m..].to_vec();
    let symbol = SymbolPair::new(
        ModelVector::new(
            alpha.clone(),
            BasisSpec::conjugate_kernel(),
            chi_coeffs,
            cfg,
        )?,
        ModelVector::new(beta.clone(), BasisSpec::conjugate_kernel(), psi_coeffs, cfg)?,
    )?;
    let null_dim = (m + n) - numerical_rank(&system, 1e-10);
    Ok(RecoveredSymbol {
        symbol,
        residual,
        null_dim,
    })
}
