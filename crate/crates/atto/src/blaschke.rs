//! Finite Blaschke products, their evaluation, derivatives, rational form,
//! and zero-set bookkeeping.
//!
//! The normalization is fixed to factors `(a_i - z)/(1 - conj(a_i) z)` with
//! no extra unimodular constant, so a single zero at the origin gives
//! `α(z) = -z`.

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::numerics::Polynomial;
use crate::C64;

/// How far outside the closed unit disk an evaluation point may sit.
pub(crate) const DISK_SLACK: f64 = 1e-9;
/// Zeros must stay at least this far inside the unit circle.
const ZERO_MARGIN: f64 = 1e-12;
/// Distance to a factor pole below which evaluation refuses to proceed.
const POLE_GUARD: f64 = 1e-14;

/// A finite Blaschke product given by its ordered zero list.
///
/// Multiplicities are allowed by repetition; the zero order fixes the
/// enumeration of kernel and conjugate-kernel basis functions downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<C64>,
}

impl BlaschkeProduct {
    /// Builds a product of degree `zeros.len() >= 1` with every zero
    /// strictly inside the unit disk.
    pub fn new(zeros: Vec<C64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::InvalidInput(
                "a Blaschke product needs at least one zero".into(),
            ));
        }
        for (i, a) in zeros.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::InvalidInput(format!("zero {i} is not finite")));
            }
            if a.norm() > 1.0 - ZERO_MARGIN {
                return Err(Error::InvalidInput(format!(
                    "zero {i} has modulus {:.17} too close to the unit circle",
                    a.norm()
                )));
            }
        }
        Ok(Self { zeros })
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    fn check_point(z: C64) -> Result<()> {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() > 1.0 + DISK_SLACK {
            return Err(Error::InvalidInput(format!(
                "evaluation point {z} lies outside the closed unit disk"
            )));
        }
        Ok(())
    }

    /// Product of the Möbius factors at `z` in the closed unit disk.
    pub fn eval(&self, z: C64) -> Result<C64> {
        Self::check_point(z)?;
        let mut acc = C64::new(1.0, 0.0);
        for &a in &self.zeros {
            let denom = C64::new(1.0, 0.0) - a.conj() * z;
            if denom.norm() < POLE_GUARD {
                return Err(Error::PoleProximity { dist: denom.norm() });
            }
            acc *= (a - z) / denom;
        }
        Ok(acc)
    }

    /// Derivative at `z`, by the product rule over factors.
    ///
    /// Each factor has derivative `(|a|^2 - 1)/(1 - conj(a) z)^2`; summing
    /// factor derivatives times the remaining product stays valid at the
    /// zeros themselves, where the logarithmic form would divide by zero.
    pub fn deriv(&self, z: C64) -> Result<C64> {
        Self::check_point(z)?;
        let m = self.zeros.len();
        let mut factors = Vec::with_capacity(m);
        let mut dfactors = Vec::with_capacity(m);
        for &a in &self.zeros {
            let denom = C64::new(1.0, 0.0) - a.conj() * z;
            if denom.norm() < POLE_GUARD {
                return Err(Error::PoleProximity { dist: denom.norm() });
            }
            factors.push((a - z) / denom);
            dfactors.push(C64::new(a.norm_sqr() - 1.0, 0.0) / (denom * denom));
        }
        // prefix[i] = f_0 .. f_{i-1}, suffix[i] = f_i .. f_{m-1}
        let mut prefix = vec![C64::new(1.0, 0.0); m + 1];
        for i in 0..m {
            prefix[i + 1] = prefix[i] * factors[i];
        }
        let mut suffix = vec![C64::new(1.0, 0.0); m + 1];
        for i in (0..m).rev() {
            suffix[i] = suffix[i + 1] * factors[i];
        }
        let mut sum = C64::new(0.0, 0.0);
        for i in 0..m {
            sum += dfactors[i] * prefix[i] * suffix[i + 1];
        }
        Ok(sum)
    }

    /// Derivatives `α(z), α'(z), …, α^{(order)}(z)` by Leibniz combination
    /// of the factor derivatives `f^{(k)} = k! conj(a)^{k-1}(|a|^2-1)/(1-conj(a)z)^{k+1}`.
    ///
    /// Used for series evaluation of difference quotients near their
    /// removable singularity, where direct cancellation would cost digits.
    pub fn derivatives(&self, z: C64, order: usize) -> Result<Vec<C64>> {
        Self::check_point(z)?;
        let mut acc = vec![C64::new(0.0, 0.0); order + 1];
        acc[0] = C64::new(1.0, 0.0);
        for &a in &self.zeros {
            let denom = C64::new(1.0, 0.0) - a.conj() * z;
            if denom.norm() < POLE_GUARD {
                return Err(Error::PoleProximity { dist: denom.norm() });
            }
            // Factor derivative list f^{(0..=order)}.
            let mut f = Vec::with_capacity(order + 1);
            f.push((a - z) / denom);
            let top = C64::new(a.norm_sqr() - 1.0, 0.0);
            let mut pow_conj_a = C64::new(1.0, 0.0);
            let mut pow_denom = denom * denom;
            let mut factorial = 1.0;
            for k in 1..=order {
                factorial *= k as f64;
                f.push(factorial * pow_conj_a * top / pow_denom);
                pow_conj_a *= a.conj();
                pow_denom *= denom;
            }
            // Leibniz: (g f)^{(k)} = Σ_j C(k,j) g^{(j)} f^{(k-j)}.
            let prev = acc.clone();
            for (k, slot) in acc.iter_mut().enumerate() {
                let mut c = 1.0;
                let mut sum = C64::new(0.0, 0.0);
                for j in 0..=k {
                    if j > 0 {
                        c = c * ((k - j + 1) as f64) / (j as f64);
                    }
                    sum += c * prev[j] * f[k - j];
                }
                *slot = sum;
            }
        }
        Ok(acc)
    }

    /// Numerator/denominator polynomials with `α = P/Q`, `deg P = deg Q = m`,
    /// and `Q(0) = 1`, by coefficient convolution of the factors.
    pub fn rational_form(&self) -> (Polynomial, Polynomial) {
        let mut p = Polynomial::constant(C64::new(1.0, 0.0));
        let mut q = Polynomial::constant(C64::new(1.0, 0.0));
        for &a in &self.zeros {
            p = p.mul(&Polynomial::new(vec![a, C64::new(-1.0, 0.0)]));
            q = q.mul(&Polynomial::new(vec![C64::new(1.0, 0.0), -a.conj()]));
        }
        (p, q)
    }

    /// Errors with [`Error::DuplicateZeros`] unless all zeros are pairwise
    /// farther apart than `sep`.
    pub fn require_distinct_zeros(&self, sep: f64) -> Result<()> {
        for i in 0..self.zeros.len() {
            for j in (i + 1)..self.zeros.len() {
                let dist = (self.zeros[i] - self.zeros[j]).norm();
                if dist <= sep {
                    return Err(Error::DuplicateZeros { i, j, dist });
                }
            }
        }
        Ok(())
    }
}

/// Pairing of the common zeros of two Blaschke products.
///
/// `perm_alpha` and `perm_beta` order the zero indices so that the `l`
/// matched pairs come first and aligned: position `k < l` pairs
/// `alpha.zeros()[perm_alpha[k]]` with `beta.zeros()[perm_beta[k]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroMatching {
    pub l: usize,
    pub perm_alpha: Vec<usize>,
    pub perm_beta: Vec<usize>,
}

/// Matches zeros of `alpha` against zeros of `beta` at distance `sep`.
///
/// Both zero lists must be pairwise distinct; a zero with more than one
/// partner inside the tolerance is an error.
pub fn match_zeros(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    sep: f64,
) -> Result<ZeroMatching> {
    alpha.require_distinct_zeros(sep)?;
    beta.require_distinct_zeros(sep)?;
    match_point_lists(alpha.zeros(), beta.zeros(), sep)
}

/// Core pairing of two lists of pairwise-distinct points; also used for
/// matching Clark points between two systems.
pub(crate) fn match_point_lists(
    pts_a: &[C64],
    pts_b: &[C64],
    sep: f64,
) -> Result<ZeroMatching> {
    let m = pts_a.len();
    let n = pts_b.len();

    let mut partner_of_alpha = vec![None::<usize>; m];
    let mut claimed_beta = vec![false; n];
    for (i, &a) in pts_a.iter().enumerate() {
        let close: Vec<usize> = pts_b
            .iter()
            .enumerate()
            .filter(|(_, &b)| (a - b).norm() <= sep)
            .map(|(j, _)| j)
            .collect();
        match close.as_slice() {
            [] => {}
            [j] => {
                if claimed_beta[*j] {
                    return Err(Error::AmbiguousMatching { index: *j });
                }
                claimed_beta[*j] = true;
                partner_of_alpha[i] = Some(*j);
            }
            _ => return Err(Error::AmbiguousMatching { index: i }),
        }
    }

    let mut perm_alpha = Vec::with_capacity(m);
    let mut perm_beta = Vec::with_capacity(n);
    for (i, partner) in partner_of_alpha.iter().enumerate() {
        if let Some(j) = partner {
            perm_alpha.push(i);
            perm_beta.push(*j);
        }
    }
    let l = perm_alpha.len();
    perm_alpha.extend((0..m).filter(|i| partner_of_alpha[*i].is_none()));
    perm_beta.extend((0..n).filter(|j| !claimed_beta[*j]));
    Ok(ZeroMatching {
        l,
        perm_alpha,
        perm_beta,
    })
}

/// Convenience constructor for matching with the configured separation.
pub fn match_zeros_cfg(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    cfg: &ToleranceConfig,
) -> Result<ZeroMatching> {
    match_zeros(alpha, beta, cfg.sep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::poly_roots;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bp(zs: &[(f64, f64)]) -> BlaschkeProduct {
        BlaschkeProduct::new(zs.iter().map(|&(re, im)| c(re, im)).collect()).unwrap()
    }

    // Deterministic low-discrepancy angles for boundary sampling in tests.
    fn boundary_points(n: usize) -> Vec<C64> {
        (0..n)
            .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * ((k as f64) * 0.618 % 1.0)))
            .collect()
    }

    #[test]
    fn eval_at_own_zero_vanishes() {
        let b = bp(&[(0.5, 0.0)]);
        assert!(b.eval(c(0.5, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn zero_at_origin_gives_minus_z() {
        let b = bp(&[(0.0, 0.0)]);
        let v = b.eval(c(0.3, 0.0)).unwrap();
        assert!((v - c(-0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unimodular_on_boundary() {
        let b = bp(&[(0.5, 0.0), (0.0, 0.3)]);
        let z = C64::from_polar(1.0, 0.7);
        assert!((b.eval(z).unwrap().norm() - 1.0).abs() < 1e-12);

        let big = bp(&[
            (0.1, 0.2),
            (-0.4, 0.3),
            (0.7, 0.0),
            (0.0, -0.6),
            (0.25, 0.25),
            (-0.1, -0.1),
            (0.33, -0.47),
            (-0.52, 0.18),
        ]);
        for z in boundary_points(100) {
            assert!((big.eval(z).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn all_listed_zeros_are_zeros() {
        let b = bp(&[(0.1, 0.2), (-0.4, 0.3), (0.7, 0.0), (0.0, -0.6)]);
        for &a in b.zeros() {
            assert!(b.eval(a).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn deriv_of_minus_z_is_minus_one() {
        let b = bp(&[(0.0, 0.0)]);
        for z in [c(0.0, 0.0), c(0.5, 0.2), C64::from_polar(1.0, 1.1)] {
            assert!((b.deriv(z).unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn deriv_of_minus_z_cubed_at_one() {
        let b = bp(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!((b.deriv(c(1.0, 0.0)).unwrap() - c(-3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn deriv_matches_central_differences() {
        let b = bp(&[(0.5, 0.0), (-0.2, 0.0)]);
        let z = c(0.1, 0.0);
        let h = 1e-6;
        let fd = (b.eval(z + c(h, 0.0)).unwrap() - b.eval(z - c(h, 0.0)).unwrap()) / (2.0 * h);
        assert!((b.deriv(z).unwrap() - fd).norm() < 1e-7);

        let b2 = bp(&[(0.3, 0.4), (-0.1, -0.5), (0.6, 0.1)]);
        for z in [c(0.2, -0.3), c(-0.5, 0.1), c(0.0, 0.0)] {
            let fd = (b2.eval(z + c(h, 0.0)).unwrap() - b2.eval(z - c(h, 0.0)).unwrap())
                / (2.0 * h);
            let d = b2.deriv(z).unwrap();
            assert!((d - fd).norm() / (1.0 + d.norm()) < 1e-6);
        }
    }

    #[test]
    fn rational_form_simple_cases() {
        let (p, q) = bp(&[(0.0, 0.0)]).rational_form();
        assert_eq!(p.coeffs(), &[c(0.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(q.coeffs(), &[c(1.0, 0.0)]);

        let (p, q) = bp(&[(0.5, 0.0)]).rational_form();
        assert_eq!(p.coeffs(), &[c(0.5, 0.0), c(-1.0, 0.0)]);
        assert_eq!(q.coeffs(), &[c(1.0, 0.0), c(-0.5, 0.0)]);
    }

    #[test]
    fn rational_form_matches_eval() {
        let b = bp(&[(0.1, 0.2), (-0.4, 0.3), (0.7, 0.0), (0.0, -0.6), (0.2, 0.5)]);
        let (p, q) = b.rational_form();
        for k in 0..50 {
            let r = 0.99 * ((k as f64) * 0.137 % 1.0);
            let z = C64::from_polar(r, (k as f64) * 0.71);
            let lhs = p.eval(z) / q.eval(z);
            assert!((lhs - b.eval(z).unwrap()).norm() < 1e-12);
        }
        assert!((q.eval(c(0.0, 0.0)) - c(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn rational_form_roots_recover_zeros() {
        let b = bp(&[(0.1, 0.2), (-0.4, 0.3), (0.7, 0.0), (0.0, -0.6)]);
        let (p, _) = b.rational_form();
        let mut roots = poly_roots(&p, &ToleranceConfig::default()).unwrap();
        for &a in b.zeros() {
            let (best, dist) = roots
                .iter()
                .enumerate()
                .map(|(k, r)| (k, (r - a).norm()))
                .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                .unwrap();
            assert!(dist < 1e-9, "zero {a} recovered with error {dist}");
            roots.remove(best);
        }
    }

    #[test]
    fn rejects_zero_on_circle() {
        assert!(BlaschkeProduct::new(vec![c(1.0, 0.0)]).is_err());
        assert!(BlaschkeProduct::new(vec![c(1.0 - 1e-13, 0.0)]).is_err());
        assert!(BlaschkeProduct::new(vec![]).is_err());
    }

    #[test]
    fn rejects_points_outside_disk() {
        let b = bp(&[(0.5, 0.0)]);
        assert!(b.eval(c(1.1, 0.0)).is_err());
    }

    #[test]
    fn matching_finds_common_zero_first() {
        let alpha = bp(&[(0.5, 0.0), (0.2, 0.0)]);
        let beta = bp(&[(0.2, 0.0)]);
        let m = match_zeros(&alpha, &beta, 1e-10).unwrap();
        assert_eq!(m.l, 1);
        assert_eq!(m.perm_alpha, vec![1, 0]);
        assert_eq!(m.perm_beta, vec![0]);
    }

    #[test]
    fn matching_disjoint_zeros() {
        let alpha = bp(&[(0.5, 0.0)]);
        let beta = bp(&[(-0.5, 0.0)]);
        let m = match_zeros(&alpha, &beta, 1e-10).unwrap();
        assert_eq!(m.l, 0);
    }

    #[test]
    fn matching_counts_perturbed_common_zeros() {
        let a0 = c(0.31, -0.22);
        let alpha = BlaschkeProduct::new(vec![a0, c(0.6, 0.1)]).unwrap();
        let beta = BlaschkeProduct::new(vec![c(-0.5, 0.0), a0 + c(1e-12, 0.0)]).unwrap();
        let m = match_zeros(&alpha, &beta, 1e-10).unwrap();
        assert_eq!(m.l, 1);
        assert_eq!(m.perm_alpha[0], 0);
        assert_eq!(m.perm_beta[0], 1);
    }

    #[test]
    fn matching_rejects_duplicates() {
        let alpha = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.5, 0.0)]).unwrap();
        let beta = bp(&[(0.2, 0.0)]);
        assert!(matches!(
            match_zeros(&alpha, &beta, 1e-10),
            Err(Error::DuplicateZeros { .. })
        ));
    }
}
