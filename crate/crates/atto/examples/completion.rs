//! Reconstructing an operator matrix from its determining entries.
//!
//! An `n × m` operator matrix carries only `m + n - 1` degrees of freedom.
//! With no common index points these are the first row and column; with
//! `l` common points the pattern becomes first row, leading diagonal of
//! the common block, and the tail of the first column. Everything else
//! follows from the membership recurrences.
//!
//! Run with `cargo run --example completion`.

use atto::modelspace::{BasisSpec, ModelVector};
use atto::operator::{complete_matrix, determining_positions, matrix_from_symbol};
use atto::{BlaschkeProduct, SymbolPair, ToleranceConfig, C64};

fn main() -> atto::Result<()> {
    let cfg = ToleranceConfig::default();
    let shared = C64::new(-0.35, 0.15);
    let alpha = BlaschkeProduct::new(vec![
        shared,
        C64::new(0.5, 0.1),
        C64::new(0.1, -0.55),
        C64::new(-0.6, -0.2),
    ])?;
    let beta = BlaschkeProduct::new(vec![shared, C64::new(0.3, 0.45), C64::new(-0.1, 0.7)])?;
    let (m, n) = (alpha.degree(), beta.degree());

    let sym = SymbolPair::new(
        ModelVector::new(
            alpha.clone(),
            BasisSpec::conjugate_kernel(),
            (0..m).map(|k| C64::new(0.3 * k as f64 - 0.4, 0.2)).collect(),
            &cfg,
        )?,
        ModelVector::new(
            beta.clone(),
            BasisSpec::conjugate_kernel(),
            (0..n).map(|k| C64::new(0.9 - 0.5 * k as f64, -0.1)).collect(),
            &cfg,
        )?,
    )?;

    let (bin, bout) = (BasisSpec::kernel(), BasisSpec::kernel());
    let full = matrix_from_symbol(&sym, &bin, &bout, &cfg)?;
    println!(
        "{}x{} matrix with {} common zero(s); {} of {} entries determine it",
        n,
        m,
        full.l,
        m + n - 1,
        m * n
    );

    let dets = determining_positions(&alpha, &beta, &bin, &bout, &cfg, None)?;
    println!("determining positions (row, col): {dets:?}");

    let partial: Vec<(usize, usize, C64)> = dets
        .iter()
        .map(|&(r, c)| (r, c, full.entries[(r, c)]))
        .collect();
    let rebuilt = complete_matrix(&alpha, &beta, &bin, &bout, &partial, &cfg, None)?;
    let err = rebuilt.entries.sub(&full.entries).max_abs();
    println!("max reconstruction error: {err:.2e}");

    // Any other row/column anchor works as long as it crosses the common
    // diagonal; here we anchor on the common point itself (it sits at
    // canonical position 0 in both zero lists).
    let dets2 = determining_positions(&alpha, &beta, &bin, &bout, &cfg, Some((0, 0)))?;
    let partial2: Vec<(usize, usize, C64)> = dets2
        .iter()
        .map(|&(r, c)| (r, c, full.entries[(r, c)]))
        .collect();
    let rebuilt2 = complete_matrix(&alpha, &beta, &bin, &bout, &partial2, &cfg, Some((0, 0)))?;
    println!(
        "max reconstruction error from the alternative anchor: {:.2e}",
        rebuilt2.entries.sub(&full.entries).max_abs()
    );
    Ok(())
}
