//! The space of operators `K_α → K_β` compressible from a boundary symbol
//! has dimension `m + n - 1`, where `m`, `n` are the degrees.
//!
//! Sampling rank-one generators `k̃_w^β ⊗ k_w^α` at distinct points of the
//! closed disk and counting the numerical rank of their vectorized stack
//! reproduces the count, and splitting by symbol type gives the analytic
//! span (dimension `n`), the coanalytic span (dimension `m`), and their
//! one-dimensional intersection.
//!
//! Run with `cargo run --example dimension_count`.

use atto::operator::{default_trial_points, dimension_estimate, subspace_dims};
use atto::{BlaschkeProduct, ToleranceConfig, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_product(rng: &mut StdRng, degree: usize) -> atto::Result<BlaschkeProduct> {
    BlaschkeProduct::new(
        (0..degree)
            .map(|_| C64::from_polar(0.2 + 0.6 * rng.gen::<f64>(), rng.gen::<f64>() * 6.28))
            .collect(),
    )
}

fn main() -> atto::Result<()> {
    let cfg = ToleranceConfig::default();
    let mut rng = StdRng::seed_from_u64(7);

    println!("degrees  expected  rank  analytic  coanalytic  intersection");
    for (m, n) in [(1, 1), (2, 3), (4, 2), (5, 5), (6, 3)] {
        let alpha = random_product(&mut rng, m)?;
        let beta = random_product(&mut rng, n)?;
        let points = default_trial_points(&alpha, &beta, m + n, &mut rng, &cfg)?;
        let rank = dimension_estimate(&alpha, &beta, &points, &cfg)?;
        let dims = subspace_dims(&alpha, &beta, &cfg)?;
        println!(
            "({m}, {n})   {:>8}  {rank:>4}  {:>8}  {:>10}  {:>12}",
            m + n - 1,
            dims.analytic,
            dims.coanalytic,
            dims.intersection
        );
    }
    Ok(())
}
