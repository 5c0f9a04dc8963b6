//! Serde representations of the exchange formats.
//!
//! Complex numbers are always two-element `[re, im]` arrays; matrices are
//! row-major nested arrays. Domain types validate on the way in, so a
//! deserialized value is as trustworthy as a constructed one.

use crate::blaschke::BlaschkeProduct;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::modelspace::{BasisKind, BasisSpec, ClarkSystem};
use crate::numerics::CMatrix;
use crate::operator::{AttoMatrix, MembershipReport};
use crate::C64;
use serde::{Deserialize, Serialize};

pub type CArr = [f64; 2];

pub fn to_c(a: CArr) -> C64 {
    C64::new(a[0], a[1])
}

pub fn from_c(c: C64) -> CArr {
    [c.re, c.im]
}

pub fn to_c_vec(v: &[CArr]) -> Vec<C64> {
    v.iter().map(|&a| to_c(a)).collect()
}

pub fn from_c_vec(v: &[C64]) -> Vec<CArr> {
    v.iter().map(|&c| from_c(c)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlaschkeJson {
    pub zeros: Vec<CArr>,
}

impl BlaschkeJson {
    pub fn to_domain(&self) -> Result<BlaschkeProduct> {
        BlaschkeProduct::new(to_c_vec(&self.zeros))
    }

    pub fn from_domain(b: &BlaschkeProduct) -> Self {
        Self {
            zeros: from_c_vec(b.zeros()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisSpecJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<CArr>,
}

impl BasisSpecJson {
    pub fn to_domain(&self) -> Result<BasisSpec> {
        let kind = match self.kind.as_str() {
            "kernel" => BasisKind::Kernel,
            "conjugate_kernel" => BasisKind::ConjugateKernel,
            "clark" => BasisKind::Clark,
            "modified_clark" => BasisKind::ModifiedClark,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown basis kind `{other}` (expected kernel, conjugate_kernel, clark, \
                     or modified_clark)"
                )))
            }
        };
        Ok(BasisSpec {
            kind,
            lambda: self.lambda.map(to_c),
        })
    }

    pub fn from_domain(spec: &BasisSpec) -> Self {
        let kind = match spec.kind {
            BasisKind::Kernel => "kernel",
            BasisKind::ConjugateKernel => "conjugate_kernel",
            BasisKind::Clark => "clark",
            BasisKind::ModifiedClark => "modified_clark",
        };
        Self {
            kind: kind.to_string(),
            lambda: spec.lambda.map(from_c),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClarkSystemJson {
    pub lambda: CArr,
    pub alpha_lambda: CArr,
    pub points: Vec<CArr>,
    pub weights: Vec<f64>,
    pub phases: Vec<CArr>,
}

impl ClarkSystemJson {
    pub fn from_domain(s: &ClarkSystem) -> Self {
        Self {
            lambda: from_c(s.lambda),
            alpha_lambda: from_c(s.alpha_lambda),
            points: from_c_vec(&s.points),
            weights: s.weights.clone(),
            phases: from_c_vec(&s.phases),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttoMatrixJson {
    pub alpha: BlaschkeJson,
    pub beta: BlaschkeJson,
    pub basis_in: BasisSpecJson,
    pub basis_out: BasisSpecJson,
    pub l: usize,
    /// Row-major `n × m` complex entries.
    pub entries: Vec<Vec<CArr>>,
}

impl AttoMatrixJson {
    pub fn to_domain(&self, cfg: &ToleranceConfig) -> Result<AttoMatrix> {
        let alpha = self.alpha.to_domain()?;
        let beta = self.beta.to_domain()?;
        let n = beta.degree();
        let m = alpha.degree();
        if self.entries.len() != n || self.entries.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidInput(format!(
                "entry matrix must be {n} rows of {m} columns"
            )));
        }
        let data: Vec<C64> = self
            .entries
            .iter()
            .flat_map(|row| row.iter().map(|&a| to_c(a)))
            .collect();
        let matrix = AttoMatrix::new(
            alpha,
            beta,
            self.basis_in.to_domain()?,
            self.basis_out.to_domain()?,
            CMatrix::from_row_major(n, m, data)?,
            cfg,
        )?;
        if matrix.l != self.l {
            return Err(Error::InvalidInput(format!(
                "stored common-index count {} disagrees with the matching ({})",
                self.l, matrix.l
            )));
        }
        Ok(matrix)
    }

    pub fn from_domain(m: &AttoMatrix) -> Self {
        let entries = (0..m.entries.rows())
            .map(|i| (0..m.entries.cols()).map(|j| from_c(m.entries[(i, j)])).collect())
            .collect();
        Self {
            alpha: BlaschkeJson::from_domain(&m.alpha),
            beta: BlaschkeJson::from_domain(&m.beta),
            basis_in: BasisSpecJson::from_domain(&m.basis_in),
            basis_out: BasisSpecJson::from_domain(&m.basis_out),
            l: m.l,
            entries,
        }
    }
}

pub fn cmatrix_to_rows(m: &CMatrix) -> Vec<Vec<CArr>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| from_c(m[(i, j)])).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipReportJson {
    pub is_member: bool,
    pub max_residual: f64,
    pub worst_entry: [usize; 2],
}

impl MembershipReportJson {
    pub fn from_domain(r: &MembershipReport) -> Self {
        Self {
            is_member: r.is_member,
            max_residual: r.max_residual,
            worst_entry: [r.worst_entry.0, r.worst_entry.1],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorJson {
    pub error: ErrorBody,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl ErrorJson {
    pub fn from_error(e: &Error) -> Self {
        let kind = match e {
            Error::NonConvergence(_) => "non_convergence",
            Error::PoleProximity { .. } => "pole_proximity",
            Error::NearSingular { .. } => "near_singular",
            Error::DuplicateZeros { .. } => "duplicate_zeros",
            Error::AmbiguousMatching { .. } => "ambiguous_matching",
            Error::DegenerateSystem { .. } => "degenerate_system",
            Error::IllConditioned { .. } => "ill_conditioned",
            Error::BasisInadmissible(_) => "basis_inadmissible",
            Error::BasisMismatch(_) => "basis_mismatch",
            Error::FormulaInapplicable { .. } => "formula_inapplicable",
            Error::MissingEntry { .. } => "missing_entry",
            Error::UnexpectedEntry { .. } => "unexpected_entry",
            Error::PointCollision { .. } => "point_collision",
            Error::NotAMember { .. } => "not_a_member",
            Error::AliasingRisk { .. } => "aliasing_risk",
            Error::CrossCheck(_) => "cross_check",
            Error::InvalidInput(_) => "invalid_input",
        };
        Self {
            error: ErrorBody {
                kind: kind.to_string(),
                message: e.to_string(),
                exit_code: e.exit_code(),
            },
        }
    }
}
