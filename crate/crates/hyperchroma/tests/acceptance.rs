//! Acceptance suite: one test per criterion, each printing a pass line
//! (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use std::time::Instant;

use num::rational::BigRational;
use num::FromPrimitive;

use hyperchroma::experiment::{
    bad_edge_experiment, isolated_vertex_experiment, run_sweep, ModelKind, SweepConfig,
};
use hyperchroma::lemmas;
use hyperchroma::models::Seed;
use hyperchroma::moments::{
    asymptotic_z2_ln, block_gram_det, block_gram_det_dense, expected_z, expected_z2,
    hessian_numeric_det, laplace_constants,
};
use hyperchroma::threshold::{c_threshold, stationarity_gap};

fn pass(id: u32, what: &str) {
    println!("[PASS] criterion {id}: {what}");
}

/// The nineteen numerically handled pairs: (r, k, u_low, c, u_high),
/// four decimals.
const WINDOW_TABLE: &[(usize, usize, f64, f64, f64)] = &[
    (5, 2, 0.0000, 9.8771, 11.0904),
    (6, 2, 0.0000, 21.2990, 22.1807),
    (7, 2, 0.0000, 43.7678, 44.3614),
    (8, 2, 0.0000, 88.3486, 88.7228),
    (3, 3, 2.7726, 8.1566, 9.8875),
    (4, 3, 5.5452, 27.9595, 29.6625),
    (5, 3, 11.0904, 87.4703, 88.9876),
    (3, 4, 9.8875, 20.0491, 22.1807),
    (4, 4, 29.6625, 86.6829, 88.7228),
    (3, 5, 22.1807, 37.8417, 40.2359),
    (3, 6, 40.2359, 61.8958, 64.5033),
    (3, 7, 64.5033, 92.5637, 95.3496),
    (3, 8, 95.3496, 130.1457, 133.0843),
    (3, 9, 133.0843, 174.9034, 177.9752),
    (3, 10, 177.9752, 227.0688, 230.2585),
    (3, 11, 230.2585, 286.8499, 290.1453),
    (3, 12, 290.1453, 354.4353, 357.8266),
    (3, 13, 357.8266, 429.9977, 433.4764),
    (3, 14, 433.4764, 513.6960, 517.2552),
];

#[test]
fn acceptance_01_window_table_reproduction() {
    let t0 = Instant::now();
    const TOL: f64 = 5e-5;
    for &(r, k, u_low, c, u_high) in WINDOW_TABLE {
        let rep = c_threshold(r, k).unwrap();
        assert!(
            (rep.c_rk - c).abs() < TOL,
            "c at (r={r}, k={k}): {} vs {c}",
            rep.c_rk
        );
        assert!((rep.u_low - u_low).abs() < TOL, "u_low at (r={r}, k={k})");
        assert!((rep.u_high - u_high).abs() < TOL, "u_high at (r={r}, k={k})");
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 2.0, "took {elapsed:?}, budget 2 s");
    pass(1, &format!("19-pair window table reproduced to 5e-5 in {elapsed:?}"));
}

#[test]
fn acceptance_02_closed_forms() {
    assert!((c_threshold(2, 2).unwrap().c_rk - 0.5).abs() < 1e-12);
    assert!((c_threshold(3, 2).unwrap().c_rk - 1.5).abs() < 1e-12);
    assert!((c_threshold(4, 2).unwrap().c_rk - 49.0 / 12.0).abs() < 1e-12);
    for k in 3..=50usize {
        let kf = k as f64;
        let closed = (kf - 1.0).powi(3) * (kf - 1.0).ln() / (kf * (kf - 2.0));
        let got = c_threshold(2, k).unwrap().c_rk;
        assert!((got - closed).abs() < 1e-12, "k={k}: {got} vs {closed}");
        // Stationarity of the r=2 minimiser xi = 1/k.
        let s = stationarity_gap(1.0 / kf, 2, k).unwrap();
        assert!(s.abs() < 1e-10, "k={k}: s(1/k) = {s}");
    }
    pass(2, "closed forms exact to 1e-12; r=2 stationarity at xi=1/k within 1e-10");
}

#[test]
fn acceptance_03_sandwich_and_bound() {
    let t0 = Instant::now();
    for r in 2..=8usize {
        for k in 2..=15usize {
            let rep = c_threshold(r, k).unwrap();
            assert!(
                rep.u_low < rep.c_rk && rep.c_rk < rep.u_high,
                "sandwich fails at (r={r}, k={k}): {} {} {}",
                rep.u_low,
                rep.c_rk,
                rep.u_high
            );
            let kr1 = (k as f64).powi(r as i32 - 1);
            let cap = (kr1 - 1.0) * (kr1 - 1.0) / (r * (r - 1)) as f64;
            assert!(rep.c_rk <= cap * (1.0 + 1e-12), "cap fails at (r={r}, k={k})");
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    pass(3, &format!("sandwich and density cap on r in 2..8, k in 2..15 in {elapsed:?}"));
}

#[test]
fn acceptance_04_moment_oracle_equivalence() {
    let t0 = Instant::now();
    // Worked case first.
    let z = expected_z(4, 2, 2, 1).unwrap();
    let z2 = expected_z2(4, 2, 2, 1).unwrap();
    assert_eq!(z.exact.as_rational().unwrap(), &BigRational::from_i64(3).unwrap());
    assert_eq!(z2.exact.as_rational().unwrap(), &BigRational::from_i64(12).unwrap());

    let mut instances = 0usize;
    for n in 1..=4usize {
        let ks: Vec<usize> = (1..=n).filter(|k| n % k == 0).collect();
        for r in 2..=8usize {
            for m in 0..=8usize {
                if r * m > 8 {
                    continue;
                }
                let oracle = common::oracle_moments(n, r, m, &ks);
                for (i, &k) in ks.iter().enumerate() {
                    let ez = expected_z(n, r, k, m).unwrap();
                    let ez2 = expected_z2(n, r, k, m).unwrap();
                    assert_eq!(
                        ez.exact.as_rational().unwrap(),
                        &oracle[i].0,
                        "E[Z] mismatch at n={n} r={r} k={k} m={m}"
                    );
                    assert_eq!(
                        ez2.exact.as_rational().unwrap(),
                        &oracle[i].1,
                        "E[Z^2] mismatch at n={n} r={r} k={k} m={m}"
                    );
                    instances += 1;
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    pass(4, &format!("exact rational equality with full enumeration on {instances} instances in {elapsed:?}"));
}

#[test]
fn acceptance_05_laplace_convergence() {
    let t0 = Instant::now();
    let (r, k, c) = (3usize, 2usize, 1.0f64);
    let ratio_at = |n: usize| -> f64 {
        let exact = expected_z2(n, r, k, n).unwrap().exact_ln();
        let asym = asymptotic_z2_ln(n, r, k, c).unwrap();
        (exact - asym).exp()
    };
    let r1000 = ratio_at(1000);
    let r2000 = ratio_at(2000);
    assert!((0.9..=1.1).contains(&r1000), "ratio at n=1000: {r1000}");
    assert!(
        (r2000 - 1.0).abs() < (r1000 - 1.0).abs(),
        "no convergence: {r1000} -> {r2000}"
    );

    let n = 2000usize;
    let second_moment_ratio =
        (2.0 * expected_z(n, r, k, n).unwrap().exact_ln() - expected_z2(n, r, k, n).unwrap().exact_ln()).exp();
    let limit = laplace_constants(r, k, c).unwrap().ratio_limit;
    assert!(
        (second_moment_ratio - limit).abs() < 0.05,
        "E[Z]^2/E[Z^2] = {second_moment_ratio} vs alpha^(1/2) = {limit}"
    );
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30 s");
    pass(
        5,
        &format!(
            "exact/asymptotic ratio {r1000:.4} -> {r2000:.4}; E[Z]^2/E[Z^2] = {second_moment_ratio:.4} vs {limit:.4} in {elapsed:?}"
        ),
    );
}

#[test]
fn acceptance_06_determinants() {
    for p in 1..=6usize {
        for q in 1..=6usize {
            assert_eq!(
                block_gram_det(p, q),
                block_gram_det_dense(p, q),
                "block Gram mismatch at p={p}, q={q}"
            );
        }
    }
    for r in 2..=4usize {
        for k in 2..=3usize {
            let kr1 = (k as f64).powi(r as i32 - 1);
            let c = 0.5 * (kr1 - 1.0) * (kr1 - 1.0) / (r * (r - 1)) as f64;
            // Step at the f64 roundoff/truncation balance point for
            // second differences (~eps^(1/4)); 1e-5 leaves ~1e-4 of
            // roundoff at the largest c on this grid.
            let numeric = hessian_numeric_det(r, k, c, 1e-4);
            let closed = laplace_constants(r, k, c).unwrap().hessian_det;
            let rel = (numeric - closed).abs() / closed;
            assert!(rel < 1e-4, "Hessian det at (r={r}, k={k}): rel err {rel}");
        }
    }
    pass(6, "block Gram dets exact on p,q in 1..6; numeric Hessian dets within 1e-4");
}

#[test]
fn acceptance_07_lemma_suite() {
    let t0 = Instant::now();
    let checks = lemmas::run_all();
    assert_eq!(checks.len(), 17);
    for c in &checks {
        assert!(
            c.passed && c.worst_margin > -1e-12,
            "{} failed with margin {}",
            c.lemma_id,
            c.worst_margin
        );
    }
    for id in ["app:lem009", "app:lem012"] {
        assert!(checks.iter().any(|c| c.lemma_id == id), "{id} missing");
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    pass(7, &format!("all 17 inequality checks passed in {elapsed:?}"));
}

#[test]
fn acceptance_08_stochastic_laws() {
    let t0 = Instant::now();
    let (n, trials) = (10_000usize, 10_000u32);
    for (r, c) in [(3usize, 1.0f64), (2, 1.0)] {
        let s = bad_edge_experiment(r, c, n, trials, Seed::new(101, 0)).unwrap();
        let p = s.p_no_bad_asymptotic;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!(
            (s.p_no_bad - p).abs() < 3.0 * sigma,
            "r={r}: empirical {} vs {} (3 sigma = {})",
            s.p_no_bad,
            p,
            3.0 * sigma
        );
        assert!(s.frac_exceeding_2ln_n < 0.01, "r={r}: {}", s.frac_exceeding_2ln_n);
    }
    let iso = isolated_vertex_experiment(2, 1.0, 1000, 2000, Seed::new(103, 0)).unwrap();
    let rel = (iso.mean_isolated / iso.expected_mean - 1.0).abs();
    assert!(rel < 0.02, "isolated mean off by {rel}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}, budget 5 min");
    pass(8, &format!("bad-edge laws within 3 sigma, isolated mean within 2% in {elapsed:?}"));
}

#[test]
fn acceptance_09_sweep_properties() {
    let t0 = Instant::now();
    let config = SweepConfig {
        r: 3,
        k: 2,
        n: 30,
        c_grid: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0],
        trials: 500,
        model: ModelKind::Uniform,
        seed: Seed::new(1105, 0),
    };
    let result = run_sweep(&config).unwrap();
    let first = &result.points[0];
    let last = result.points.last().unwrap();
    assert!(first.p_hat >= 0.9, "p_hat(0.5) = {}", first.p_hat);
    assert!(last.p_hat <= 0.1, "p_hat(6.0) = {}", last.p_hat);
    for w in result.points.windows(2) {
        let hw = |p: &hyperchroma::experiment::SweepPoint| (p.wilson_high - p.wilson_low) / 2.0;
        let slack = hw(&w[0]).max(hw(&w[1]));
        assert!(
            w[1].p_hat <= w[0].p_hat + slack,
            "monotonicity violated beyond slack at c={}: {} -> {}",
            w[1].c,
            w[0].p_hat,
            w[1].p_hat
        );
    }
    assert!(result.points.iter().all(|p| !p.censored));
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}, budget 10 min");
    pass(9, &format!("sweep extremes and monotonicity within Wilson slack in {elapsed:?}"));
}

#[test]
fn acceptance_10_determinism() {
    let bin = env!("CARGO_BIN_EXE_hyperchroma");
    let run = |args: &[&str]| -> (Vec<u8>, Option<i32>) {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        (out.stdout, out.status.code())
    };
    let commands: Vec<Vec<&str>> = vec![
        vec!["sample", "--n", "5", "--r", "3", "--m", "2", "--model", "multi", "--seed", "7"],
        vec!["sample", "--n", "6", "--r", "2", "--m", "5", "--model", "uniform", "--seed", "11"],
        vec![
            "sweep", "--r", "3", "--k", "2", "--n", "16", "--c-grid", "0.5,1,2", "--trials", "40",
            "--model", "uniform", "--seed", "5",
        ],
        vec!["thresholds", "--r-range", "3..4", "--k-range", "3..4", "--format", "json"],
        vec!["thresholds", "--r-range", "2..5", "--k-range", "2..5", "--refined"],
        vec!["verify", "--lemma", "app:lem009", "--format", "csv"],
        vec!["badedges", "--r", "3", "--c", "1.0", "--n", "500", "--trials", "300", "--seed", "3"],
        vec!["moments", "--n", "4", "--r", "2", "--k", "2", "--m", "1", "--exact-z2", "--asymptotic"],
    ];
    for args in &commands {
        let (out1, code1) = run(args);
        let (out2, code2) = run(args);
        assert_eq!(code1, Some(0), "command failed: {args:?}");
        assert_eq!(code1, code2);
        assert!(!out1.is_empty());
        assert_eq!(out1, out2, "stdout differs across reruns for {args:?}");
    }
    // Worker count must not affect results either.
    let sweep = &commands[2];
    let single: Vec<&str> = sweep.iter().copied().chain(["--threads", "1"]).collect();
    let many: Vec<&str> = sweep.iter().copied().chain(["--threads", "4"]).collect();
    assert_eq!(run(&single).0, run(&many).0, "thread count changed sweep output");
    pass(10, "seeded commands byte-identical across reruns and worker counts");
}
