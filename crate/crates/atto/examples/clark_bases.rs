//! Clark systems and the two orthonormal bases they induce.
//!
//! For a finite Blaschke product `α` and a unimodular parameter `λ`, the
//! equation `α(η) = α_λ` has exactly `deg α` solutions on the unit circle.
//! The normalized boundary kernels at those points form an orthonormal
//! basis; rotating each by a half-angle phase makes every element fixed by
//! the conjugation `C_α f = α conj(z) conj(f)`.
//!
//! Run with `cargo run --example clark_bases`.

use atto::modelspace::{clark_system, gram, BasisSpec, ResolvedBasis};
use atto::numerics::CMatrix;
use atto::oracle::{conjugation_samples, sample_basis_fn};
use atto::{BlaschkeProduct, ToleranceConfig, C64};

fn main() -> atto::Result<()> {
    let cfg = ToleranceConfig::default();
    let alpha = BlaschkeProduct::new(vec![
        C64::new(0.5, 0.0),
        C64::new(0.3, 0.2),
        C64::new(-0.1, -0.4),
    ])?;
    let lambda = C64::from_polar(1.0, 0.9);

    let sys = clark_system(&alpha, lambda, &cfg)?;
    println!("Clark system for degree-{} product, lambda = {:.4}", alpha.degree(), lambda);
    println!("  alpha_lambda = {:.6}", sys.alpha_lambda);
    for (j, ((eta, w), omega)) in sys
        .points
        .iter()
        .zip(&sys.weights)
        .zip(&sys.phases)
        .enumerate()
    {
        let residual = (alpha.eval(*eta)? - sys.alpha_lambda).norm();
        println!(
            "  point {j}: eta = {:+.6}  weight |alpha'(eta)| = {w:.6}  phase = {:+.6}  residual = {residual:.2e}",
            eta, omega
        );
    }

    for spec in [BasisSpec::clark(lambda), BasisSpec::modified_clark(lambda)] {
        let g = gram(&alpha, &spec, &cfg)?;
        let dev = g.sub(&CMatrix::identity(alpha.degree())).max_abs();
        println!("{:?} basis Gram deviation from identity: {dev:.2e}", spec.kind);
    }

    // The conjugation fixes each modified Clark element; verify on a grid.
    let rb = ResolvedBasis::resolve(&alpha, &BasisSpec::modified_clark(lambda), &cfg)?;
    for idx in 0..rb.len() {
        let e = sample_basis_fn(&alpha, &rb, idx, 2048)?;
        let ce = conjugation_samples(&alpha, &e)?;
        println!(
            "  |C e_{idx} - e_{idx}| on the boundary grid: {:.2e}",
            ce.sub(&e)?.max_abs()
        );
    }
    Ok(())
}
