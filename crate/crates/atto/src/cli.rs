//! JSON-in/JSON-out command layer consumed by the `atto` binary.
//!
//! Each command takes a JSON payload (from a file or standard input),
//! returns a JSON document for standard output plus a process exit code,
//! and reports failures as machine-readable error objects. Identical
//! payload, options, and seed always produce byte-identical output.

use crate::blaschke::BlaschkeProduct;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::json::*;
use crate::modelspace::{self, BasisSpec, ModelVector};
use crate::numerics::{condition_number, CMatrix};
use crate::operator::{self, AttoMatrix, BoundaryCombo, RankOneKind, SymbolPair};
use crate::oracle;
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The seven commands of the tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Clark,
    Matrix,
    Check,
    Complete,
    Dim,
    Verify,
    Gram,
}

/// Global options shared by all commands; defaults mirror
/// [`ToleranceConfig`].
#[derive(Debug, Clone, Copy)]
pub struct CliOptions {
    pub tol_membership: f64,
    pub tol_rank: f64,
    pub grid: usize,
    pub seed: u64,
}

impl Default for CliOptions {
    fn default() -> Self {
        Self {
            tol_membership: 1e-8,
            tol_rank: 1e-8,
            grid: oracle::DEFAULT_GRID,
            seed: 0,
        }
    }
}

impl CliOptions {
    fn tolerance_config(&self) -> Result<ToleranceConfig> {
        let cfg = ToleranceConfig {
            membership_rel: self.tol_membership,
            rank_rel: self.tol_rank,
            ..ToleranceConfig::default()
        };
        cfg.validate()?;
        if self.grid < 4 || !self.grid.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "--grid must be a power of two >= 4, got {}",
                self.grid
            )));
        }
        Ok(cfg)
    }
}

fn parse_payload<'a, T: Deserialize<'a>>(payload: &'a str) -> Result<T> {
    serde_json::from_str(payload).map_err(|e| Error::InvalidInput(format!("payload: {e}")))
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClarkPayload {
    alpha: BlaschkeJson,
    lambda: CArr,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolPairJson {
    chi: Vec<CArr>,
    psi: Vec<CArr>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryComboJson {
    points: Vec<CArr>,
    coeffs: Vec<CArr>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixPayload {
    alpha: BlaschkeJson,
    beta: BlaschkeJson,
    basis_in: BasisSpecJson,
    basis_out: BasisSpecJson,
    #[serde(default)]
    symbol: Option<SymbolPairJson>,
    #[serde(default)]
    boundary_combo: Option<BoundaryComboJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialEntryJson {
    row: usize,
    col: usize,
    value: CArr,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompletePayload {
    alpha: BlaschkeJson,
    beta: BlaschkeJson,
    basis_in: BasisSpecJson,
    basis_out: BasisSpecJson,
    entries: Vec<PartialEntryJson>,
    #[serde(default)]
    base: Option<[usize; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimPayload {
    alpha: BlaschkeJson,
    beta: BlaschkeJson,
    #[serde(default)]
    points: Option<Vec<CArr>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyPayload {
    alpha: BlaschkeJson,
    beta: BlaschkeJson,
    #[serde(default = "default_trials")]
    trials: usize,
}

fn default_trials() -> usize {
    25
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GramPayload {
    alpha: BlaschkeJson,
    basis: BasisSpecJson,
}

#[derive(Debug, Serialize)]
struct DimOutput {
    rank: usize,
    expected: usize,
    subspace_dims: Option<SubspaceDimsJson>,
}

#[derive(Debug, Serialize)]
struct SubspaceDimsJson {
    analytic: usize,
    coanalytic: usize,
    intersection: usize,
}

#[derive(Debug, Serialize)]
struct GramOutput {
    gram: Vec<Vec<CArr>>,
    condition_number: f64,
}

/// One line of the verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// Worst observed value across trials.
    pub observed: f64,
    pub threshold: f64,
    /// `"<="` when observed must stay below the threshold, `">"` when it
    /// must exceed it.
    pub comparison: String,
    pub pass: bool,
}

impl CheckReport {
    fn upper(name: &str, observed: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            observed,
            threshold,
            comparison: "<=".into(),
            pass: observed <= threshold,
        }
    }

    fn lower(name: &str, observed: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            observed,
            threshold,
            comparison: ">".into(),
            pass: observed > threshold,
        }
    }
}

/// Full property-suite report for a generator pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub grid: usize,
    pub checks: Vec<CheckReport>,
    pub all_pass: bool,
}

/// Runs one command against a JSON payload.
///
/// Returns the rendered JSON output and the process exit code.
pub fn run(kind: CommandKind, payload: &str, opts: &CliOptions) -> Result<(String, i32)> {
    let cfg = opts.tolerance_config()?;
    match kind {
        CommandKind::Clark => {
            let p: ClarkPayload = parse_payload(payload)?;
            let alpha = p.alpha.to_domain()?;
            let system = modelspace::clark_system(&alpha, to_c(p.lambda), &cfg)?;
            Ok((render(&ClarkSystemJson::from_domain(&system)), 0))
        }
        CommandKind::Matrix => {
            let p: MatrixPayload = parse_payload(payload)?;
            let alpha = p.alpha.to_domain()?;
            let beta = p.beta.to_domain()?;
            let basis_in = p.basis_in.to_domain()?;
            let basis_out = p.basis_out.to_domain()?;
            let matrix = match (&p.symbol, &p.boundary_combo) {
                (Some(sym), None) => {
                    let chi = ModelVector::new(
                        alpha.clone(),
                        BasisSpec::conjugate_kernel(),
                        to_c_vec(&sym.chi),
                        &cfg,
                    )?;
                    let psi = ModelVector::new(
                        beta.clone(),
                        BasisSpec::conjugate_kernel(),
                        to_c_vec(&sym.psi),
                        &cfg,
                    )?;
                    operator::matrix_from_symbol(
                        &SymbolPair::new(chi, psi)?,
                        &basis_in,
                        &basis_out,
                        &cfg,
                    )?
                }
                (None, Some(combo)) => {
                    let combo = BoundaryCombo::new(
                        to_c_vec(&combo.points),
                        to_c_vec(&combo.coeffs),
                        &cfg,
                    )?;
                    operator::matrix_from_boundary_combo(
                        &combo, &alpha, &beta, &basis_in, &basis_out, &cfg,
                    )?
                }
                _ => {
                    return Err(Error::InvalidInput(
                        "provide exactly one of `symbol` or `boundary_combo`".into(),
                    ))
                }
            };
            Ok((render(&AttoMatrixJson::from_domain(&matrix)), 0))
        }
        CommandKind::Check => {
            let p: AttoMatrixJson = parse_payload(payload)?;
            let matrix = p.to_domain(&cfg)?;
            let report = operator::membership_check(&matrix, &cfg)?;
            let code = if report.is_member { 0 } else { 1 };
            Ok((render(&MembershipReportJson::from_domain(&report)), code))
        }
        CommandKind::Complete => {
            let p: CompletePayload = parse_payload(payload)?;
            let alpha = p.alpha.to_domain()?;
            let beta = p.beta.to_domain()?;
            let partial: Vec<(usize, usize, C64)> = p
                .entries
                .iter()
                .map(|e| (e.row, e.col, to_c(e.value)))
                .collect();
            let matrix = operator::complete_matrix(
                &alpha,
                &beta,
                &p.basis_in.to_domain()?,
                &p.basis_out.to_domain()?,
                &partial,
                &cfg,
                p.base.map(|b| (b[0], b[1])),
            )?;
            Ok((render(&AttoMatrixJson::from_domain(&matrix)), 0))
        }
        CommandKind::Dim => {
            let p: DimPayload = parse_payload(payload)?;
            let alpha = p.alpha.to_domain()?;
            let beta = p.beta.to_domain()?;
            let points = match p.points {
                Some(pts) => to_c_vec(&pts),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                    operator::default_trial_points(
                        &alpha,
                        &beta,
                        alpha.degree() + beta.degree(),
                        &mut rng,
                        &cfg,
                    )?
                }
            };
            let rank = operator::dimension_estimate(&alpha, &beta, &points, &cfg)?;
            let subspace_dims = operator::subspace_dims(&alpha, &beta, &cfg)
                .ok()
                .map(|d| SubspaceDimsJson {
                    analytic: d.analytic,
                    coanalytic: d.coanalytic,
                    intersection: d.intersection,
                });
            let out = DimOutput {
                rank,
                expected: alpha.degree() + beta.degree() - 1,
                subspace_dims,
            };
            Ok((render(&out), 0))
        }
        CommandKind::Verify => {
            let p: VerifyPayload = parse_payload(payload)?;
            let alpha = p.alpha.to_domain()?;
            let beta = p.beta.to_domain()?;
            let report = run_verify(&alpha, &beta, p.trials, opts.seed, opts.grid, &cfg)?;
            let code = if report.all_pass { 0 } else { 1 };
            Ok((render(&report), code))
        }
        CommandKind::Gram => {
            let p: GramPayload = parse_payload(payload)?;
            let alpha = p.alpha.to_domain()?;
            let g = modelspace::gram(&alpha, &p.basis.to_domain()?, &cfg)?;
            let out = GramOutput {
                condition_number: condition_number(&g),
                gram: cmatrix_to_rows(&g),
            };
            Ok((render(&out), 0))
        }
    }
}

fn unimodular(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU)
}

fn centered(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
}

fn random_symbol(
    rng: &mut ChaCha8Rng,
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    cfg: &ToleranceConfig,
) -> Result<SymbolPair> {
    let chi = ModelVector::new(
        alpha.clone(),
        BasisSpec::conjugate_kernel(),
        (0..alpha.degree()).map(|_| centered(rng)).collect(),
        cfg,
    )?;
    let psi = ModelVector::new(
        beta.clone(),
        BasisSpec::conjugate_kernel(),
        (0..beta.degree()).map(|_| centered(rng)).collect(),
        cfg,
    )?;
    SymbolPair::new(chi, psi)
}

fn basis_families(lam1: C64, lam2: C64) -> [(BasisSpec, BasisSpec); 4] {
    [
        (BasisSpec::kernel(), BasisSpec::kernel()),
        (BasisSpec::conjugate_kernel(), BasisSpec::conjugate_kernel()),
        (BasisSpec::clark(lam1), BasisSpec::clark(lam2)),
        (BasisSpec::modified_clark(lam1), BasisSpec::modified_clark(lam2)),
    ]
}

/// Deterministic property suite for one generator pair: Clark-system
/// integrity, membership in all four basis families, rejection of random
/// matrices, completion round trips, oracle agreement, rank-one
/// identities, dimension counts, and adjoint relations.
pub fn run_verify(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    trials: usize,
    seed: u64,
    grid: usize,
    cfg: &ToleranceConfig,
) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let distinct = alpha.require_distinct_zeros(cfg.sep).is_ok()
        && beta.require_distinct_zeros(cfg.sep).is_ok();
    let (m, n) = (alpha.degree(), beta.degree());

    // Clark-system integrity on both generators.
    {
        let mut point_residual = 0.0_f64;
        let mut gram_dev = 0.0_f64;
        let mut norm_dev = 0.0_f64;
        let mut conj_dev = 0.0_f64;
        for _ in 0..2 {
            let lam = unimodular(&mut rng);
            for gen in [alpha, beta] {
                let sys = modelspace::clark_system(gen, lam, cfg)?;
                for (j, &eta) in sys.points.iter().enumerate() {
                    point_residual =
                        point_residual.max((gen.eval(eta)? - sys.alpha_lambda).norm());
                    norm_dev = norm_dev.max(
                        (modelspace::kernel_eval(gen, eta, eta)?.norm() - sys.weights[j]).abs(),
                    );
                }
                for kind in [BasisSpec::clark(lam), BasisSpec::modified_clark(lam)] {
                    let g = modelspace::gram(gen, &kind, cfg)?;
                    gram_dev = gram_dev.max(g.sub(&CMatrix::identity(gen.degree())).max_abs());
                }
                let rb =
                    modelspace::ResolvedBasis::resolve(gen, &BasisSpec::modified_clark(lam), cfg)?;
                for idx in 0..rb.len() {
                    let e = oracle::sample_basis_fn(gen, &rb, idx, grid)?;
                    let ce = oracle::conjugation_samples(gen, &e)?;
                    conj_dev = conj_dev.max(ce.sub(&e)?.max_abs());
                }
            }
        }
        checks.push(CheckReport::upper("clark_point_residual", point_residual, 1e-10));
        checks.push(CheckReport::upper("clark_gram_identity", gram_dev, 1e-10));
        checks.push(CheckReport::upper("boundary_kernel_norm", norm_dev, 1e-9));
        checks.push(CheckReport::upper("conjugation_fixes_modified_clark", conj_dev, 1e-9));
    }

    // Constructed operators pass membership in every family.
    if distinct {
        let mut worst = 0.0_f64;
        let mut all_member = true;
        for _ in 0..trials {
            let sym = random_symbol(&mut rng, alpha, beta, cfg)?;
            let (lam1, lam2) = (unimodular(&mut rng), unimodular(&mut rng));
            for (bin, bout) in basis_families(lam1, lam2) {
                let mat = operator::matrix_from_symbol(&sym, &bin, &bout, cfg)?;
                let rep = operator::membership_check(&mat, cfg)?;
                worst = worst.max(rep.max_residual);
                all_member &= rep.is_member;
            }
        }
        let mut check = CheckReport::upper("membership_constructed", worst, cfg.membership_rel);
        check.pass &= all_member;
        checks.push(check);
    }

    // Random matrices are rejected (only meaningful when the operator
    // space is a proper subspace of all n x m matrices).
    if distinct && m > 1 && n > 1 {
        let mut min_residual = f64::INFINITY;
        for _ in 0..trials {
            let entries = CMatrix::from_fn(n, m, |_, _| centered(&mut rng));
            let mat = AttoMatrix::new(
                alpha.clone(),
                beta.clone(),
                BasisSpec::kernel(),
                BasisSpec::kernel(),
                entries,
                cfg,
            )?;
            let rep = operator::membership_check(&mat, cfg)?;
            min_residual = min_residual.min(rep.max_residual);
        }
        checks.push(CheckReport::lower("membership_rejects_random", min_residual, 1e-3));
    }

    // Erase-and-complete round trip.
    if distinct {
        let mut worst = 0.0_f64;
        for t in 0..trials {
            let sym = random_symbol(&mut rng, alpha, beta, cfg)?;
            let (lam1, lam2) = (unimodular(&mut rng), unimodular(&mut rng));
            let (bin, bout) = basis_families(lam1, lam2)[t % 4];
            let mat = operator::matrix_from_symbol(&sym, &bin, &bout, cfg)?;
            let dets = operator::determining_positions(alpha, beta, &bin, &bout, cfg, None)?;
            let partial: Vec<(usize, usize, C64)> = dets
                .iter()
                .map(|&(r, c)| (r, c, mat.entries[(r, c)]))
                .collect();
            let rebuilt =
                operator::complete_matrix(alpha, beta, &bin, &bout, &partial, cfg, None)?;
            worst = worst.max(
                rebuilt.entries.sub(&mat.entries).max_abs() / (1.0 + mat.entries.max_abs()),
            );
        }
        checks.push(CheckReport::upper("completion_round_trip", worst, 1e-9));
    }

    // Closed-form matrices match the grid oracle.
    if distinct {
        let mut worst = 0.0_f64;
        for t in 0..trials.min(8) {
            let sym = random_symbol(&mut rng, alpha, beta, cfg)?;
            let (lam1, lam2) = (unimodular(&mut rng), unimodular(&mut rng));
            let (bin, bout) = basis_families(lam1, lam2)[t % 4];
            let closed = operator::matrix_from_symbol(&sym, &bin, &bout, cfg)?;
            let samples = oracle::sample_symbol_pair(&sym, grid, cfg)?;
            let brute = oracle::oracle_matrix(alpha, beta, &samples, &bin, &bout, cfg)?;
            worst = worst.max(closed.entries.sub(&brute.entries).max_abs());
        }
        checks.push(CheckReport::upper("oracle_symbol_agreement", worst, 1e-7));
    }

    // Rank-one identities, both interior and boundary, against the oracle.
    {
        let mut interior = 0.0_f64;
        let mut boundary = 0.0_f64;
        let mut proportionality = 0.0_f64;
        for _ in 0..2 {
            let (lam1, lam2) = (unimodular(&mut rng), unimodular(&mut rng));
            let (bin, bout) = (BasisSpec::clark(lam1), BasisSpec::clark(lam2));

            let w = C64::from_polar(0.6 * rng.gen::<f64>(), rng.gen::<f64>() * 6.28);
            let closed =
                operator::rank_one_matrix(alpha, beta, w, RankOneKind::TildeOutKIn, &bin, &bout, cfg)?;
            let symbol = oracle::BoundaryGrid::sample(grid, |z| Ok(beta.eval(z)? / (z - w)))?;
            let brute = oracle::oracle_matrix(alpha, beta, &symbol, &bin, &bout, cfg)?;
            interior = interior.max(closed.entries.sub(&brute.entries).max_abs());

            let eta = unimodular(&mut rng);
            let kk =
                operator::rank_one_matrix(alpha, beta, eta, RankOneKind::BoundaryKK, &bin, &bout, cfg)?;
            let symbol = oracle::BoundaryGrid::sample(grid, |z| {
                Ok(modelspace::kernel_eval(beta, eta, z)?
                    + modelspace::kernel_eval(alpha, eta, z)?.conj()
                    - C64::new(1.0, 0.0))
            })?;
            let brute = oracle::oracle_matrix(alpha, beta, &symbol, &bin, &bout, cfg)?;
            boundary = boundary.max(kk.entries.sub(&brute.entries).max_abs());

            let tilde_out = operator::rank_one_matrix(
                alpha,
                beta,
                eta,
                RankOneKind::TildeOutKIn,
                &bin,
                &bout,
                cfg,
            )?;
            let factor = beta.eval(eta)? * eta.conj();
            proportionality = proportionality
                .max(tilde_out.entries.sub(&kk.entries.scale(factor)).max_abs());
        }
        checks.push(CheckReport::upper("rank_one_interior_vs_oracle", interior, 1e-8));
        checks.push(CheckReport::upper("rank_one_boundary_vs_oracle", boundary, 1e-7));
        checks.push(CheckReport::upper(
            "boundary_proportionality",
            proportionality,
            1e-9,
        ));
    }

    // Dimension of the operator space and of its two symbol-type spans.
    {
        let expected = m + n - 1;
        let pts = operator::default_trial_points(alpha, beta, m + n, &mut rng, cfg)?;
        let rank = operator::dimension_estimate(alpha, beta, &pts, cfg)?;
        let mut deviation = (rank as f64 - expected as f64).abs();
        if distinct {
            let dims = operator::subspace_dims(alpha, beta, cfg)?;
            deviation += (dims.analytic as f64 - n as f64).abs()
                + (dims.coanalytic as f64 - m as f64).abs()
                + (dims.intersection as f64 - 1.0).abs();
        }
        checks.push(CheckReport::upper("dimension_counts", deviation, 0.0));
    }

    // Adjoint involution and the conjugate-kernel relation.
    if distinct {
        let mut relation = 0.0_f64;
        let mut involution = 0.0_f64;
        for _ in 0..trials.min(8) {
            let sym = random_symbol(&mut rng, alpha, beta, cfg)?;
            let mat = operator::matrix_from_symbol(
                &sym,
                &BasisSpec::kernel(),
                &BasisSpec::kernel(),
                cfg,
            )?;
            let adj = operator::adjoint_matrix(&mat, cfg)?;
            let back = operator::adjoint_matrix(&adj, cfg)?;
            involution = involution.max(back.entries.sub(&mat.entries).max_abs());
            let t = operator::conjugate_kernel_matrix(&mat, cfg)?;
            let scale = 1.0 + t.entries.max_abs();
            for s in 0..n {
                for p in 0..m {
                    let factor =
                        alpha.deriv(alpha.zeros()[p])? / beta.deriv(beta.zeros()[s])?;
                    let expect = factor * adj.entries[(p, s)].conj();
                    relation = relation.max((t.entries[(s, p)] - expect).norm() / scale);
                }
            }
        }
        checks.push(CheckReport::upper("adjoint_involution", involution, 1e-9));
        checks.push(CheckReport::upper("adjoint_entry_relation", relation, 1e-9));
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        seed,
        trials,
        grid,
        checks,
        all_pass,
    })
}
