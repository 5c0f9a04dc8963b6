//! Deciding whether a matrix represents a truncated-Toeplitz-type operator.
//!
//! A matrix in any of the four basis families (kernel, conjugate kernel,
//! Clark, modified Clark) belongs to the operator space exactly when its
//! entries satisfy a family of three-term recurrences anchored at the
//! determining entries. Constructed operators pass in every family; a
//! single corrupted entry is caught immediately.
//!
//! Run with `cargo run --example membership`.

use atto::modelspace::{BasisSpec, ModelVector};
use atto::operator::{matrix_from_symbol, membership_check, AttoMatrix};
use atto::{BlaschkeProduct, SymbolPair, ToleranceConfig, C64};

fn main() -> atto::Result<()> {
    let cfg = ToleranceConfig::default();
    let shared = C64::new(0.25, -0.3);
    let alpha = BlaschkeProduct::new(vec![shared, C64::new(0.5, 0.1), C64::new(-0.4, 0.2)])?;
    let beta = BlaschkeProduct::new(vec![shared, C64::new(0.0, 0.6)])?;

    let sym = SymbolPair::new(
        ModelVector::new(
            alpha.clone(),
            BasisSpec::conjugate_kernel(),
            vec![C64::new(0.8, -0.1), C64::new(0.0, 0.4), C64::new(-0.5, 0.2)],
            &cfg,
        )?,
        ModelVector::new(
            beta.clone(),
            BasisSpec::conjugate_kernel(),
            vec![C64::new(1.0, 0.0), C64::new(0.3, -0.7)],
            &cfg,
        )?,
    )?;

    let lam1 = C64::from_polar(1.0, 0.4);
    let lam2 = C64::from_polar(1.0, 2.7);
    for (bin, bout) in [
        (BasisSpec::kernel(), BasisSpec::kernel()),
        (BasisSpec::conjugate_kernel(), BasisSpec::conjugate_kernel()),
        (BasisSpec::clark(lam1), BasisSpec::clark(lam2)),
        (BasisSpec::modified_clark(lam1), BasisSpec::modified_clark(lam2)),
    ] {
        let matrix = matrix_from_symbol(&sym, &bin, &bout, &cfg)?;
        let report = membership_check(&matrix, &cfg)?;
        println!(
            "{:?}/{:?} (l = {}): member = {}, residual = {:.2e}",
            bin.kind, bout.kind, matrix.l, report.is_member, report.max_residual
        );

        // Corrupt one entry and test again.
        let mut entries = matrix.entries.clone();
        entries[(beta.degree() - 1, alpha.degree() - 1)] += C64::new(1e-3, 0.0);
        let corrupted = AttoMatrix::new(
            alpha.clone(),
            beta.clone(),
            bin,
            bout,
            entries,
            &cfg,
        )?;
        let report = membership_check(&corrupted, &cfg)?;
        println!(
            "  after corrupting one entry: member = {}, residual = {:.2e} at {:?}",
            report.is_member, report.max_residual, report.worst_entry
        );
    }
    Ok(())
}
