//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

mod common;

use atto::modelspace::{self, BasisSpec, ResolvedBasis};
use atto::numerics::CMatrix;
use atto::operator::{self, AttoMatrix, RankOneKind};
use atto::oracle::{self, BoundaryGrid};
use atto::{BlaschkeProduct, C64};
use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

fn pass(number: u32, name: &str) {
    println!("acceptance criterion {number} ({name}): PASS");
}

fn mixed_points(rng: &mut StdRng, count: usize) -> Vec<C64> {
    let mut pts: Vec<C64> = Vec::with_capacity(count);
    while pts.len() < count {
        let z = if pts.len() % 2 == 0 {
            C64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU)
        } else {
            C64::from_polar(0.9 * rng.gen::<f64>(), rng.gen::<f64>() * std::f64::consts::TAU)
        };
        if pts.iter().all(|p| (p - z).norm() > 1e-3) {
            pts.push(z);
        }
    }
    pts
}

#[test]
fn criterion_01_dimension_theorem() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(101);
    let tol = cfg();
    assert_eq!(tol.rank_rel, 1e-8);
    for _ in 0..50 {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=6);
        let shared = if m.min(n) > 1 && rng.gen_bool(0.3) {
            rng.gen_range(0..=m.min(n) - 1)
        } else {
            0
        };
        let (alpha, beta) = random_pair(&mut rng, m, n, shared);
        let expected = m + n - 1;
        let pts = mixed_points(&mut rng, expected);
        let rank = operator::dimension_estimate(&alpha, &beta, &pts, &tol).unwrap();
        assert_eq!(rank, expected, "degrees {m},{n}");

        let dims = operator::subspace_dims(&alpha, &beta, &tol).unwrap();
        assert_eq!((dims.analytic, dims.coanalytic, dims.intersection), (n, m, 1));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(1, "dimension of the operator space");
}

#[test]
fn criterion_02_rank_one_bases() {
    let mut rng = StdRng::seed_from_u64(102);
    let tol = cfg();
    for _ in 0..50 {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=6);
        let (alpha, beta) = random_pair(&mut rng, m, n, 0);
        let expected = m + n - 1;
        let mut pts = mixed_points(&mut rng, expected + 1);
        let extra = pts.pop().unwrap();
        let rank = operator::dimension_estimate(&alpha, &beta, &pts, &tol).unwrap();
        assert_eq!(rank, expected, "generators at {expected} points span");
        pts.push(extra);
        let rank_plus = operator::dimension_estimate(&alpha, &beta, &pts, &tol).unwrap();
        assert_eq!(rank_plus, expected, "an extra generator stays in the span");
    }
    pass(2, "rank-one generators form bases");
}

fn membership_protocol(
    seed: u64,
    family: fn(C64, C64, &mut StdRng) -> (BasisSpec, BasisSpec),
    engineered_clark: bool,
) -> (f64, f64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let tol = cfg();
    let mut worst_accept = 0.0_f64;
    let mut best_reject = f64::INFINITY;
    for t in 0..200 {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=6);
        let shared = if m.min(n) > 1 && t % 3 == 1 {
            rng.gen_range(1..=m.min(n) - 1)
        } else if t % 3 == 2 {
            0
        } else {
            rng.gen_range(0..=(m.min(n) as usize).saturating_sub(1))
        };
        let (alpha, beta) = random_pair(&mut rng, m, n, shared);

        let (bin, mut bout) = family(
            unimodular(&mut rng),
            unimodular(&mut rng),
            &mut rng,
        );
        if engineered_clark && t % 4 == 0 {
            // Choose the second parameter so the systems share a point.
            let lam1 = bin.lambda.unwrap();
            let sys1 = modelspace::clark_system(&alpha, lam1, &tol).unwrap();
            let idx = rng.gen_range(0..sys1.points.len());
            let lam2 = modelspace::clark_parameter_through(&beta, sys1.points[idx]).unwrap();
            bout.lambda = Some(lam2);
            let l = operator::common_index_count(&alpha, &beta, &bin, &bout, &tol).unwrap();
            assert!(l >= 1, "engineered common point not detected");
        }

        let sym = random_symbol(&mut rng, &alpha, &beta);
        let mat = operator::matrix_from_symbol(&sym, &bin, &bout, &tol).unwrap();
        let rep = operator::membership_check(&mat, &tol).unwrap();
        assert!(
            rep.is_member,
            "constructed operator rejected: residual {:.3e} (m={m}, n={n}, l={})",
            rep.max_residual, mat.l
        );
        worst_accept = worst_accept.max(rep.max_residual);

        // Rejection half: i.i.d. entries on pairs with a proper subspace.
        if m > 1 && n > 1 {
            let junk = AttoMatrix::new(
                alpha.clone(),
                beta.clone(),
                bin,
                bout,
                CMatrix::from_fn(n, m, |_, _| centered(&mut rng)),
                &tol,
            )
            .unwrap();
            let rep = operator::membership_check(&junk, &tol).unwrap();
            assert!(!rep.is_member, "random matrix accepted");
            best_reject = best_reject.min(rep.max_residual);
        }
    }
    (worst_accept, best_reject)
}

#[test]
fn criterion_03_kernel_basis_membership() {
    let start = Instant::now();
    let (worst, best_reject) = membership_protocol(
        103,
        |_, _, _| (BasisSpec::kernel(), BasisSpec::kernel()),
        false,
    );
    assert!(worst <= 1e-8, "worst accepted residual {worst:.3e}");
    assert!(best_reject > 1e-3, "weakest rejection {best_reject:.3e}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(3, "kernel-basis membership criteria");
}

#[test]
fn criterion_04_conjugate_kernel_membership_and_adjoint() {
    let (worst, best_reject) = membership_protocol(
        104,
        |_, _, _| (BasisSpec::conjugate_kernel(), BasisSpec::conjugate_kernel()),
        false,
    );
    assert!(worst <= 1e-8, "worst accepted residual {worst:.3e}");
    assert!(best_reject > 1e-3, "weakest rejection {best_reject:.3e}");

    // Adjoint relation between the two representations.
    let mut rng = StdRng::seed_from_u64(1040);
    let tol = cfg();
    for _ in 0..25 {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=6);
        let (alpha, beta) = random_pair(&mut rng, m, n, 0);
        let sym = random_symbol(&mut rng, &alpha, &beta);
        let mat = operator::matrix_from_symbol(
            &sym,
            &BasisSpec::kernel(),
            &BasisSpec::kernel(),
            &tol,
        )
        .unwrap();
        let t = operator::conjugate_kernel_matrix(&mat, &tol).unwrap();
        let adj = operator::adjoint_matrix(&mat, &tol).unwrap();
        let scale = 1.0 + t.entries.max_abs();
        for s in 0..n {
            for p in 0..m {
                let factor = alpha.deriv(alpha.zeros()[p]).unwrap()
                    / beta.deriv(beta.zeros()[s]).unwrap();
                let expect = factor * adj.entries[(p, s)].conj();
                let dev = (t.entries[(s, p)] - expect).norm() / scale;
                assert!(dev <= 1e-9, "adjoint relation deviation {dev:.3e}");
            }
        }
    }
    pass(4, "conjugate-kernel membership and adjoint relation");
}

#[test]
fn criterion_05_clark_membership() {
    let (worst, best_reject) = membership_protocol(
        105,
        |l1, l2, _| (BasisSpec::clark(l1), BasisSpec::clark(l2)),
        true,
    );
    assert!(worst <= 1e-8, "worst accepted residual {worst:.3e}");
    assert!(best_reject > 1e-3, "weakest rejection {best_reject:.3e}");

    let (worst, best_reject) = membership_protocol(
        1050,
        |l1, l2, _| (BasisSpec::modified_clark(l1), BasisSpec::modified_clark(l2)),
        true,
    );
    assert!(worst <= 1e-8, "worst accepted residual {worst:.3e}");
    assert!(best_reject > 1e-3, "weakest rejection {best_reject:.3e}");
    pass(5, "Clark and modified-Clark membership criteria");
}

#[test]
fn criterion_06_completion() {
    let mut rng = StdRng::seed_from_u64(106);
    let tol = cfg();
    let mut worst = 0.0_f64;
    for t in 0..24 {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=6);
        let shared = if m.min(n) > 1 && t % 2 == 0 {
            rng.gen_range(0..=m.min(n) - 1)
        } else {
            0
        };
        let (alpha, beta) = random_pair(&mut rng, m, n, shared);
        let sym = random_symbol(&mut rng, &alpha, &beta);
        for (bin, bout) in families(unimodular(&mut rng), unimodular(&mut rng)) {
            let mat = operator::matrix_from_symbol(&sym, &bin, &bout, &tol).unwrap();
            let dets =
                operator::determining_positions(&alpha, &beta, &bin, &bout, &tol, None).unwrap();
            assert_eq!(dets.len(), m + n - 1, "determining count");
            let partial: Vec<(usize, usize, C64)> = dets
                .iter()
                .map(|&(r, c)| (r, c, mat.entries[(r, c)]))
                .collect();
            let rebuilt =
                operator::complete_matrix(&alpha, &beta, &bin, &bout, &partial, &tol, None)
                    .unwrap();
            let err =
                rebuilt.entries.sub(&mat.entries).max_abs() / (1.0 + mat.entries.max_abs());
            assert!(err <= 1e-9, "completion error {err:.3e}");
            worst = worst.max(err);
            assert!(operator::membership_check(&rebuilt, &tol).unwrap().is_member);
        }
    }

    // Equal generators: the determining count collapses to 2m - 1.
    for m in [1usize, 3, 5] {
        let alpha = random_product(&mut rng, m);
        let beta = alpha.clone();
        for (bin, bout) in families(C64::new(1.0, 0.0), C64::new(1.0, 0.0)) {
            let dets =
                operator::determining_positions(&alpha, &beta, &bin, &bout, &tol, None).unwrap();
            assert_eq!(dets.len(), 2 * m - 1, "square case determining count");
        }
        let sym = random_symbol(&mut rng, &alpha, &beta);
        let mat = operator::matrix_from_symbol(
            &sym,
            &BasisSpec::kernel(),
            &BasisSpec::kernel(),
            &tol,
        )
        .unwrap();
        assert_eq!(mat.l, m);
        let dets = operator::determining_positions(
            &alpha,
            &beta,
            &BasisSpec::kernel(),
            &BasisSpec::kernel(),
            &tol,
            None,
        )
        .unwrap();
        let partial: Vec<(usize, usize, C64)> = dets
            .iter()
            .map(|&(r, c)| (r, c, mat.entries[(r, c)]))
            .collect();
        let rebuilt = operator::complete_matrix(
            &alpha,
            &beta,
            &BasisSpec::kernel(),
            &BasisSpec::kernel(),
            &partial,
            &tol,
            None,
        )
        .unwrap();
        let err = rebuilt.entries.sub(&mat.entries).max_abs() / (1.0 + mat.entries.max_abs());
        assert!(err <= 1e-9, "square completion error {err:.3e}");
    }
    println!("  worst completion error: {worst:.3e}");
    pass(6, "matrix completion from determining entries");
}

#[test]
fn criterion_07_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(107);
    let tol = cfg();
    let grid = 4096;
    let mut worst = 0.0_f64;
    for t in 0..50 {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=6);
        let shared = if m.min(n) > 1 && t % 5 == 0 { 1 } else { 0 };
        let (alpha, beta) = random_pair(&mut rng, m, n, shared);
        let (bin, bout) =
            families(unimodular(&mut rng), unimodular(&mut rng))[t % 4];

        let (closed, samples) = match t % 3 {
            0 => {
                let sym = random_symbol(&mut rng, &alpha, &beta);
                let closed = operator::matrix_from_symbol(&sym, &bin, &bout, &tol).unwrap();
                let samples = oracle::sample_symbol_pair(&sym, grid, &tol).unwrap();
                (closed, samples)
            }
            1 => {
                let w = C64::from_polar(0.7 * rng.gen::<f64>(), rng.gen::<f64>() * 6.28);
                if rng.gen_bool(0.5) {
                    let closed = operator::rank_one_matrix(
                        &alpha,
                        &beta,
                        w,
                        RankOneKind::TildeOutKIn,
                        &bin,
                        &bout,
                        &tol,
                    )
                    .unwrap();
                    let samples =
                        BoundaryGrid::sample(grid, |z| Ok(beta.eval(z)? / (z - w))).unwrap();
                    (closed, samples)
                } else {
                    let closed = operator::rank_one_matrix(
                        &alpha,
                        &beta,
                        w,
                        RankOneKind::KOutTildeIn,
                        &bin,
                        &bout,
                        &tol,
                    )
                    .unwrap();
                    let samples = BoundaryGrid::sample(grid, |z| {
                        Ok((alpha.eval(z)? / (z - w)).conj())
                    })
                    .unwrap();
                    (closed, samples)
                }
            }
            _ => {
                let count = rng.gen_range(1..=m + n - 1);
                let points = mixed_points(&mut rng, count)
                    .into_iter()
                    .map(|p| p / p.norm())
                    .collect::<Vec<_>>();
                let coeffs: Vec<C64> = (0..count).map(|_| centered(&mut rng)).collect();
                let combo = match operator::BoundaryCombo::new(points, coeffs, &tol) {
                    Ok(cb) => cb,
                    Err(_) => continue,
                };
                let closed = match operator::matrix_from_boundary_combo(
                    &combo, &alpha, &beta, &bin, &bout, &tol,
                ) {
                    Ok(mtx) => mtx,
                    Err(_) => continue, // combo point hit a Clark point
                };
                let samples = BoundaryGrid::sample(grid, |z| {
                    let mut acc = C64::new(0.0, 0.0);
                    for (xi, ci) in combo.points.iter().zip(&combo.coeffs) {
                        acc += ci
                            * (modelspace::kernel_eval(&beta, *xi, z)?
                                + modelspace::kernel_eval(&alpha, *xi, z)?.conj()
                                - C64::new(1.0, 0.0));
                    }
                    Ok(acc)
                })
                .unwrap();
                (closed, samples)
            }
        };
        let brute = oracle::oracle_matrix(&alpha, &beta, &samples, &bin, &bout, &tol).unwrap();
        let dev = closed.entries.sub(&brute.entries).max_abs();
        assert!(dev <= 1e-7, "config {t}: oracle deviation {dev:.3e}");
        worst = worst.max(dev);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("  worst oracle deviation: {worst:.3e} in {elapsed:?}");
    pass(7, "closed forms agree with the boundary-integral oracle");
}

#[test]
fn criterion_08_clark_system_integrity() {
    let mut rng = StdRng::seed_from_u64(108);
    let tol = cfg();
    let grid = 4096;
    for _ in 0..12 {
        let degree = rng.gen_range(1..=6);
        let alpha = random_product(&mut rng, degree);
        let lam = unimodular(&mut rng);
        let sys = modelspace::clark_system(&alpha, lam, &tol).unwrap();

        for (j, &eta) in sys.points.iter().enumerate() {
            let res = (alpha.eval(eta).unwrap() - sys.alpha_lambda).norm();
            assert!(res <= 1e-10, "point residual {res:.3e}");
            let norm_sq = modelspace::kernel_eval(&alpha, eta, eta).unwrap();
            assert!(
                (norm_sq.norm() - sys.weights[j]).abs() <= 1e-9,
                "norm identity"
            );
        }

        for spec in [BasisSpec::clark(lam), BasisSpec::modified_clark(lam)] {
            let g = modelspace::gram(&alpha, &spec, &tol).unwrap();
            let dev = g.sub(&CMatrix::identity(degree)).max_abs();
            assert!(dev <= 1e-10, "gram deviation {dev:.3e}");
        }

        // The conjugation fixes each modified Clark element on the grid;
        // this pins the half-angle phase branch.
        let rb =
            ResolvedBasis::resolve(&alpha, &BasisSpec::modified_clark(lam), &tol).unwrap();
        for idx in 0..rb.len() {
            let e = oracle::sample_basis_fn(&alpha, &rb, idx, grid).unwrap();
            let ce = oracle::conjugation_samples(&alpha, &e).unwrap();
            let dev = ce.sub(&e).unwrap().max_abs();
            assert!(dev <= 1e-9, "conjugation moved element {idx} by {dev:.3e}");
        }
    }
    pass(8, "Clark system integrity");
}

#[test]
fn criterion_09_rank_one_identities() {
    let mut rng = StdRng::seed_from_u64(109);
    let tol = cfg();
    let grid = 4096;
    for _ in 0..6 {
        let dm = rng.gen_range(1..=4);
        let dn = rng.gen_range(1..=4);
        let (alpha, beta) = random_pair(&mut rng, dm, dn, 0);
        let (bin, bout) = (
            BasisSpec::clark(unimodular(&mut rng)),
            BasisSpec::clark(unimodular(&mut rng)),
        );

        // Interior identity: the tilde-out generator is the operator of
        // the analytic single-pole symbol.
        let w = C64::from_polar(0.6 * rng.gen::<f64>(), rng.gen::<f64>() * 6.28);
        let closed = operator::rank_one_matrix(
            &alpha,
            &beta,
            w,
            RankOneKind::TildeOutKIn,
            &bin,
            &bout,
            &tol,
        )
        .unwrap();
        let samples = BoundaryGrid::sample(grid, |z| Ok(beta.eval(z)? / (z - w))).unwrap();
        let brute = oracle::oracle_matrix(&alpha, &beta, &samples, &bin, &bout, &tol).unwrap();
        let dev = closed.entries.sub(&brute.entries).max_abs();
        assert!(dev <= 1e-8, "interior identity deviation {dev:.3e}");

        // Boundary identity: k_η ⊗ k_η is the operator of
        // k_η^β + conj(k_η^α) - 1.
        let eta = unimodular(&mut rng);
        let kk = operator::rank_one_matrix(
            &alpha,
            &beta,
            eta,
            RankOneKind::BoundaryKK,
            &bin,
            &bout,
            &tol,
        )
        .unwrap();
        let samples = BoundaryGrid::sample(grid, |z| {
            Ok(modelspace::kernel_eval(&beta, eta, z)?
                + modelspace::kernel_eval(&alpha, eta, z)?.conj()
                - C64::new(1.0, 0.0))
        })
        .unwrap();
        let brute = oracle::oracle_matrix(&alpha, &beta, &samples, &bin, &bout, &tol).unwrap();
        let dev = kk.entries.sub(&brute.entries).max_abs();
        assert!(dev <= 1e-7, "boundary identity deviation {dev:.3e}");

        // Boundary proportionality carries the β(η) factor.
        let tilde_out = operator::rank_one_matrix(
            &alpha,
            &beta,
            eta,
            RankOneKind::TildeOutKIn,
            &bin,
            &bout,
            &tol,
        )
        .unwrap();
        let factor = beta.eval(eta).unwrap() * eta.conj();
        let dev = tilde_out.entries.sub(&kk.entries.scale(factor)).max_abs();
        assert!(dev <= 1e-9, "proportionality deviation {dev:.3e}");
    }
    pass(9, "rank-one generator identities");
}

#[test]
fn criterion_10_cli_determinism_and_round_trips() {
    use std::io::Write;
    use std::process::{Command, Stdio};

    let bin = env!("CARGO_BIN_EXE_atto");
    let run_cmd = |args: &[&str], payload: &str| {
        let mut child = Command::new(bin)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .expect("spawn atto");
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(payload.as_bytes())
            .unwrap();
        let out = child.wait_with_output().unwrap();
        (
            out.status.code().unwrap_or(-1),
            String::from_utf8(out.stdout).unwrap(),
            String::from_utf8(out.stderr).unwrap(),
        )
    };

    // Byte-identical verification reports for a fixed seed.
    let verify_payload = r#"{
        "alpha": {"zeros": [[0.3, 0.1], [-0.2, 0.4]]},
        "beta": {"zeros": [[0.5, -0.2]]},
        "trials": 4
    }"#;
    let args = ["--seed", "42", "--grid", "1024", "verify"];
    let (code1, out1, _) = run_cmd(&args, verify_payload);
    let (code2, out2, _) = run_cmd(&args, verify_payload);
    assert_eq!(code1, 0, "verify failed:\n{out1}");
    assert_eq!(code1, code2);
    assert_eq!(out1, out2, "verify output must be byte-identical");

    // matrix -> check round trips exit 0 for randomized inputs.
    let mut rng = StdRng::seed_from_u64(110);
    for t in 0..100 {
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=4);
        let (alpha, beta) = random_pair(&mut rng, m, n, 0);
        let zeros_json = |b: &BlaschkeProduct| {
            let list: Vec<String> = b
                .zeros()
                .iter()
                .map(|z| format!("[{:.17}, {:.17}]", z.re, z.im))
                .collect();
            format!("{{\"zeros\": [{}]}}", list.join(", "))
        };
        let coeff_list = |k: usize, rng: &mut StdRng| {
            let list: Vec<String> = (0..k)
                .map(|_| {
                    format!(
                        "[{:.17}, {:.17}]",
                        rng.gen::<f64>() - 0.5,
                        rng.gen::<f64>() - 0.5
                    )
                })
                .collect();
            format!("[{}]", list.join(", "))
        };
        let basis = match t % 4 {
            0 => r#"{"kind": "kernel"}"#.to_string(),
            1 => r#"{"kind": "conjugate_kernel"}"#.to_string(),
            2 => format!(
                r#"{{"kind": "clark", "lambda": [{:.17}, {:.17}]}}"#,
                (t as f64).cos(),
                (t as f64).sin()
            ),
            _ => format!(
                r#"{{"kind": "modified_clark", "lambda": [{:.17}, {:.17}]}}"#,
                (t as f64).cos(),
                (t as f64).sin()
            ),
        };
        let payload = format!(
            r#"{{
                "alpha": {a},
                "beta": {b},
                "basis_in": {basis},
                "basis_out": {basis},
                "symbol": {{"chi": {chi}, "psi": {psi}}}
            }}"#,
            a = zeros_json(&alpha),
            b = zeros_json(&beta),
            chi = coeff_list(m, &mut rng),
            psi = coeff_list(n, &mut rng),
        );
        let (code, matrix_json, stderr) = run_cmd(&["matrix"], &payload);
        assert_eq!(code, 0, "matrix failed at trial {t}: {stderr}");
        let (code, _, stderr) = run_cmd(&["check"], &matrix_json);
        assert_eq!(code, 0, "check failed at trial {t}: {stderr}");
    }
    pass(10, "CLI determinism and matrix/check round trips");
}
