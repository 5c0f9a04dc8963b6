//! Crate-wide error type.

/// Everything that can go wrong across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Iteration budget exhausted before reaching the residual target.
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    /// Evaluation point too close to a pole `1/ā_i` of a Blaschke factor.
    #[error("evaluation point within {dist:.3e} of a Blaschke factor pole")]
    PoleProximity { dist: f64 },

    /// Kernel evaluation at a near-singular pair with no boundary limit form.
    #[error("kernel evaluation near-singular: |1 - conj(w)z| = {dist:.3e} with interior w")]
    NearSingular { dist: f64 },

    /// A zero list that must be pairwise distinct is not.
    #[error("zeros {i} and {j} coincide within separation tolerance ({dist:.3e})")]
    DuplicateZeros { i: usize, j: usize, dist: f64 },

    /// A zero matches more than one partner within the separation tolerance.
    #[error("ambiguous zero matching: zero {index} has multiple partners within tolerance")]
    AmbiguousMatching { index: usize },

    /// Two Clark points of one system coincide.
    #[error("degenerate Clark system: points {i} and {j} coincide ({dist:.3e} apart)")]
    DegenerateSystem { i: usize, j: usize, dist: f64 },

    /// Gram or recovery system too ill-conditioned to solve reliably.
    #[error("linear system ill-conditioned: condition number {cond:.3e}")]
    IllConditioned { cond: f64 },

    /// Requested basis cannot be built for the given Blaschke product.
    #[error("basis inadmissible: {0}")]
    BasisInadmissible(String),

    /// Vector basis does not match the operator's input basis.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    /// A membership/completion formula denominator vanished for a pair the
    /// matching declared non-common; the stored common-index count is wrong.
    #[error("membership formula inapplicable at entry ({row},{col}): {reason}")]
    FormulaInapplicable {
        row: usize,
        col: usize,
        reason: String,
    },

    /// Completion input misses a determining entry.
    #[error("missing determining entry at ({row},{col})")]
    MissingEntry { row: usize, col: usize },

    /// Completion input carries an entry outside the determining set.
    #[error("entry ({row},{col}) is not a determining entry for this configuration")]
    UnexpectedEntry { row: usize, col: usize },

    /// A boundary point collides with a Clark point of one of the systems.
    #[error("boundary point {index} collides with a Clark point (distance {dist:.3e})")]
    PointCollision { index: usize, dist: f64 },

    /// Symbol recovery requested on a matrix that fails the membership test.
    #[error("matrix is not an operator representation (membership residual {residual:.3e})")]
    NotAMember { residual: f64 },

    /// Grid too short for the degrees involved.
    #[error("grid of {n} nodes risks aliasing for degree budget {required}")]
    AliasingRisk { n: usize, required: usize },

    /// Two independent criteria paths disagree on the same matrix.
    #[error("cross-check disagreement: {0}")]
    CrossCheck(String),

    /// Malformed request, shape mismatch, or invalid parameter.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code class: 2 for schema/shape problems, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::MissingEntry { .. }
            | Error::UnexpectedEntry { .. }
            | Error::BasisMismatch(_) => 2,
            _ => 3,
        }
    }
}
