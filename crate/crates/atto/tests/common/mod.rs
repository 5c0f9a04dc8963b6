//! Shared generators for the integration suites: well-separated random
//! Blaschke products, symbol pairs, and basis choices.

#![allow(dead_code)]

use atto::modelspace::BasisSpec;
use atto::operator::SymbolPair;
use atto::{BlaschkeProduct, ModelVector, ToleranceConfig, C64};
use rand::Rng;

pub fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

pub fn unimodular(rng: &mut impl Rng) -> C64 {
    C64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU)
}

pub fn centered(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
}

/// Random zeros in the disk of radius 0.85, kept pairwise at least 0.08
/// apart (and away from `avoid`) so Gram systems stay well conditioned.
pub fn separated_zeros(rng: &mut impl Rng, count: usize, avoid: &[C64]) -> Vec<C64> {
    let mut zeros: Vec<C64> = Vec::with_capacity(count);
    while zeros.len() < count {
        let z = C64::from_polar(0.85 * rng.gen::<f64>(), rng.gen::<f64>() * std::f64::consts::TAU);
        let clear = zeros
            .iter()
            .chain(avoid.iter())
            .all(|w| (z - w).norm() > 0.08);
        if clear {
            zeros.push(z);
        }
    }
    zeros
}

pub fn random_product(rng: &mut impl Rng, degree: usize) -> BlaschkeProduct {
    BlaschkeProduct::new(separated_zeros(rng, degree, &[])).unwrap()
}

/// A pair of products of the given degrees sharing exactly `shared` zeros.
pub fn random_pair(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    shared: usize,
) -> (BlaschkeProduct, BlaschkeProduct) {
    assert!(shared <= m.min(n));
    let common = separated_zeros(rng, shared, &[]);
    let mut za = separated_zeros(rng, m - shared, &common);
    let mut zb = separated_zeros(rng, n - shared, &[&common[..], &za[..]].concat());
    za.extend(common.iter().copied());
    zb.extend(common.iter().copied());
    (
        BlaschkeProduct::new(za).unwrap(),
        BlaschkeProduct::new(zb).unwrap(),
    )
}

pub fn random_symbol(
    rng: &mut impl Rng,
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
) -> SymbolPair {
    let chi = ModelVector::new(
        alpha.clone(),
        BasisSpec::conjugate_kernel(),
        (0..alpha.degree()).map(|_| centered(rng)).collect(),
        &cfg(),
    )
    .unwrap();
    let psi = ModelVector::new(
        beta.clone(),
        BasisSpec::conjugate_kernel(),
        (0..beta.degree()).map(|_| centered(rng)).collect(),
        &cfg(),
    )
    .unwrap();
    SymbolPair::new(chi, psi).unwrap()
}

/// The four matched basis families for a pair of Clark parameters.
pub fn families(lam1: C64, lam2: C64) -> [(BasisSpec, BasisSpec); 4] {
    [
        (BasisSpec::kernel(), BasisSpec::kernel()),
        (BasisSpec::conjugate_kernel(), BasisSpec::conjugate_kernel()),
        (BasisSpec::clark(lam1), BasisSpec::clark(lam2)),
        (BasisSpec::modified_clark(lam1), BasisSpec::modified_clark(lam2)),
    ]
}
