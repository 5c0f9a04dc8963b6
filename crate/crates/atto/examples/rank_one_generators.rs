//! The rank-one generators of the operator space and their symbols.
//!
//! Three families of rank-one operators have closed-form symbols:
//!
//! * `k̃_w^β ⊗ k_w^α` is the operator of `β(z)/(z-w)`;
//! * `k_w^β ⊗ k̃_w^α` is the operator of `conj(α(z)/(z-w))`;
//! * at a boundary point `η`, `k_η^β ⊗ k_η^α` is the operator of
//!   `k_η^β + conj(k_η^α) - 1`, and the first kind becomes
//!   `β(η) conj(η)` times it.
//!
//! Each identity is checked against the FFT boundary-grid oracle.
//!
//! Run with `cargo run --example rank_one_generators`.

use atto::modelspace::{kernel_eval, BasisSpec};
use atto::operator::{rank_one_matrix, RankOneKind};
use atto::oracle::{oracle_matrix, BoundaryGrid};
use atto::{BlaschkeProduct, ToleranceConfig, C64};

fn main() -> atto::Result<()> {
    let cfg = ToleranceConfig::default();
    let grid = 4096;
    let alpha = BlaschkeProduct::new(vec![C64::new(0.4, 0.2), C64::new(-0.3, 0.1)])?;
    let beta = BlaschkeProduct::new(vec![C64::new(0.1, -0.5), C64::new(0.6, 0.0)])?;
    let (bin, bout) = (
        BasisSpec::clark(C64::from_polar(1.0, 0.3)),
        BasisSpec::clark(C64::from_polar(1.0, 1.9)),
    );

    let w = C64::new(0.35, 0.2);
    let closed = rank_one_matrix(&alpha, &beta, w, RankOneKind::TildeOutKIn, &bin, &bout, &cfg)?;
    let symbol = BoundaryGrid::sample(grid, |z| Ok(beta.eval(z)? / (z - w)))?;
    let brute = oracle_matrix(&alpha, &beta, &symbol, &bin, &bout, &cfg)?;
    println!(
        "interior tilde-out generator vs oracle of beta(z)/(z-w): {:.2e}",
        closed.entries.sub(&brute.entries).max_abs()
    );

    let closed = rank_one_matrix(&alpha, &beta, w, RankOneKind::KOutTildeIn, &bin, &bout, &cfg)?;
    let symbol = BoundaryGrid::sample(grid, |z| Ok((alpha.eval(z)? / (z - w)).conj()))?;
    let brute = oracle_matrix(&alpha, &beta, &symbol, &bin, &bout, &cfg)?;
    println!(
        "interior k-out generator vs oracle of conj(alpha(z)/(z-w)): {:.2e}",
        closed.entries.sub(&brute.entries).max_abs()
    );

    let eta = C64::from_polar(1.0, 2.4);
    let kk = rank_one_matrix(&alpha, &beta, eta, RankOneKind::BoundaryKK, &bin, &bout, &cfg)?;
    let symbol = BoundaryGrid::sample(grid, |z| {
        Ok(kernel_eval(&beta, eta, z)? + kernel_eval(&alpha, eta, z)?.conj() - C64::new(1.0, 0.0))
    })?;
    let brute = oracle_matrix(&alpha, &beta, &symbol, &bin, &bout, &cfg)?;
    println!(
        "boundary kernel-pair generator vs its two-sided symbol: {:.2e}",
        kk.entries.sub(&brute.entries).max_abs()
    );

    let tilde = rank_one_matrix(&alpha, &beta, eta, RankOneKind::TildeOutKIn, &bin, &bout, &cfg)?;
    let factor = beta.eval(eta)? * eta.conj();
    println!(
        "boundary proportionality (factor beta(eta) conj(eta)): {:.2e}",
        tilde.entries.sub(&kk.entries.scale(factor)).max_abs()
    );
    Ok(())
}
