//! Executable numeric checks for the supporting analytic inequalities.
//!
//! Each check evaluates its inequality on a declared deterministic grid
//! and reports the worst margin observed (minimum slack; equality points
//! contribute margin zero). These are falsification harnesses, not
//! proofs: a failing margin indicates an implementation bug somewhere.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiment::isolated_vertex_experiment;
use crate::models::Seed;
use crate::moments::{block_gram_det, block_gram_det_dense};
use crate::threshold::{
    check_regularity, find_xi, lambda0, regularity_margin, Classification, UnivariateFns,
};

/// Pass floor: strict inequalities may touch zero at declared equality
/// points, so anything above -1e-12 passes.
pub const PASS_FLOOR: f64 = -1e-12;

/// Result of one check.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaCheck {
    pub lemma_id: String,
    pub domain: String,
    pub grid_size: usize,
    pub worst_margin: f64,
    pub passed: bool,
}

fn finish(id: &str, domain: &str, grid_size: usize, worst_margin: f64) -> LemmaCheck {
    LemmaCheck {
        lemma_id: id.to_string(),
        domain: domain.to_string(),
        grid_size,
        worst_margin,
        passed: worst_margin > PASS_FLOOR,
    }
}

/// Minimum of `margin` over a linear grid on [lo, hi] with `n` points.
fn grid_min(lo: f64, hi: f64, n: usize, margin: impl Fn(f64) -> f64) -> f64 {
    let mut worst = f64::INFINITY;
    for i in 0..n {
        let z = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        worst = worst.min(margin(z));
    }
    worst
}

fn check_log_upper_bound() -> LemmaCheck {
    // ln(1+z) <= z on z > -1; equality only at z = 0 (on the grid).
    let n = 10_000;
    let mut worst = grid_min(-1.0 + 1e-6, 10.0, n, |z| z - z.ln_1p());
    worst = worst.min(0.0 - 0.0f64.ln_1p()); // include the equality point
    finish("app:lem001", "z in [-1+1e-6, 10], linear + z=0", n + 1, worst)
}

fn check_log_lower_bound() -> LemmaCheck {
    // ln(1-z) >= -3z/2 on [0, 1/2]; equality at z = 0.
    let n = 10_000;
    let worst = grid_min(0.0, 0.5, n, |z| (-z).ln_1p() + 1.5 * z);
    finish("app:lem002", "z in [0, 1/2], linear", n, worst)
}

fn check_xlnx_bounds() -> LemmaCheck {
    // (1-z) ln(1-z) > -z and (1 - z/2) ln(1-z) < -z on (0,1).
    let n = 10_000;
    let worst = grid_min(1e-4, 1.0 - 1e-6, n, |z| {
        let l = (-z).ln_1p();
        let m1 = (1.0 - z) * l + z;
        let m2 = -z - (1.0 - 0.5 * z) * l;
        m1.min(m2)
    });
    finish("app:lem004", "z in [1e-4, 1-1e-6], linear", n, worst)
}

fn check_geometric_series_bounds() -> LemmaCheck {
    // 1+z <= 1/(1-z) <= 1+z+2z^2 <= 1+2z on [0, 1/2]; equalities at the
    // endpoints.
    let n = 10_000;
    let worst = grid_min(0.0, 0.5, n, |z| {
        let inv = 1.0 / (1.0 - z);
        let m1 = inv - (1.0 + z);
        let m2 = 1.0 + z + 2.0 * z * z - inv;
        let m3 = z - 2.0 * z * z;
        m1.min(m2).min(m3)
    });
    finish("app:lem005", "z in [0, 1/2], linear", n, worst)
}

fn check_bernoulli_power_bounds() -> LemmaCheck {
    // 1 - pz <= (1-z)^p <= 1 - pz + (pz)^2/2, and (1-z)^p <= 1/(1+pz),
    // for integer p >= 1 and z in [0, 1].
    let grid = 2_001;
    let mut worst = f64::INFINITY;
    for p in 1..=30i32 {
        let w = grid_min(0.0, 1.0, grid, |z| {
            let pow = (1.0 - z).powi(p);
            let pz = p as f64 * z;
            let m1 = pow - (1.0 - pz);
            let m2 = 1.0 - pz + 0.5 * pz * pz - pow;
            let m3 = 1.0 / (1.0 + pz) - pow;
            m1.min(m2).min(m3)
        });
        worst = worst.min(w);
    }
    finish("app:lem006", "p in [1..30], z in [0,1], linear", 30 * grid, worst)
}

fn check_isolated_vertices_statistical() -> LemmaCheck {
    // Statistical: mean isolated count tracks n(1-1/n)^(rm) and every
    // trial retains at least k-1 isolated vertices for k <= 5.
    let (r, c, n, trials) = (3usize, 1.0f64, 2000usize, 300u32);
    let summary = isolated_vertex_experiment(r, c, n, trials, Seed::new(20_24, 0))
        .expect("valid parameters");
    let mean_margin = 0.03 - (summary.mean_isolated / summary.expected_mean - 1.0).abs();
    let min_margin = summary.min_isolated as f64 - 4.0;
    finish(
        "app:lem007",
        "multiset model, r=3, c=1, n=2000, 300 seeded trials",
        trials as usize,
        mean_margin.min(min_margin),
    )
}

/// Count strict sign changes of `values`, ignoring exact zeros.
fn sign_changes(values: impl Iterator<Item = f64>) -> usize {
    let mut changes = 0;
    let mut prev = 0.0f64;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if prev != 0.0 && v.signum() != prev.signum() {
            changes += 1;
        }
        prev = v;
    }
    changes
}

fn check_root_count() -> LemmaCheck {
    // x(1-x)^(r-1) + (1-x)x^(r-1)/(k-1)^(r-1) = 1/(lambda r(r-1)) has at
    // most two solutions: on [0,1] when r <= 2k, on [0,1-1/k] when
    // r >= 2k+1 and lambda < lambda_0. 50 seeded lambdas per pair,
    // 1e5-point grids.
    use rand::Rng;
    use rand::SeedableRng;
    let grid = 100_000usize;
    let mut worst = f64::INFINITY;
    let mut evaluations = 0usize;

    let phi = |x: f64, r: usize, k: usize| -> f64 {
        let kappa = 1.0 / (k as f64 - 1.0).powi(r as i32 - 1);
        x * (1.0 - x).powi(r as i32 - 1) + kappa * (1.0 - x) * x.powi(r as i32 - 1)
    };

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(97);
    for k in 2..=8usize {
        for r in 2..=12usize {
            let upper = if r <= 2 * k { 1.0 } else { 1.0 - 1.0 / k as f64 };
            let values: Vec<f64> =
                (0..grid).map(|i| phi(upper * i as f64 / (grid - 1) as f64, r, k)).collect();
            for _ in 0..50 {
                let lambda = if r <= 2 * k {
                    // Any positive lambda; log-uniform over a wide band.
                    (rng.gen::<f64>() * (100.0f64.ln() - 0.01f64.ln()) + 0.01f64.ln()).exp()
                } else {
                    lambda0(r, k).unwrap() * (0.01 + 0.989 * rng.gen::<f64>())
                };
                let level = 1.0 / (lambda * (r * (r - 1)) as f64);
                let changes = sign_changes(values.iter().map(|&v| v - level));
                worst = worst.min(2.0 - changes as f64);
                evaluations += grid;
            }
        }
    }
    finish(
        "app:lem009",
        "k in [2..8], r in [2..12], 50 seeded lambdas, 1e5-point grids",
        evaluations,
        worst,
    )
}

fn check_power_comparison() -> LemmaCheck {
    // (r-2) 2^(r-1) + (r/2)^r < (r-1)^(r-1) for r >= 5; normalized margin.
    let mut worst = f64::INFINITY;
    for r in 5..=30i32 {
        let rf = r as f64;
        let lhs = (rf - 2.0) * 2f64.powi(r - 1) + (rf / 2.0).powi(r);
        let rhs = (rf - 1.0).powi(r - 1);
        worst = worst.min(1.0 - lhs / rhs);
    }
    finish("app:lem010", "r in [5..30]", 26, worst)
}

fn check_eta_ordering() -> LemmaCheck {
    // eta(0) < eta(1-1/k) < lambda_0 whenever r >= 2k+1; normalized.
    let mut worst = f64::INFINITY;
    let mut count = 0usize;
    for k in 2..=9usize {
        for r in (2 * k + 1)..=20usize {
            let fns = UnivariateFns::new(r, k).unwrap();
            let eta0 = fns.eta(0.0);
            let eta_b = fns.eta_at_upper();
            let l0 = lambda0(r, k).unwrap();
            worst = worst.min((eta_b - eta0) / eta_b).min((l0 - eta_b) / l0);
            count += 1;
        }
    }
    finish("app:lem011", "r >= 2k+1, r <= 20, k <= 9", count, worst)
}

fn check_midpoint_curvature() -> LemmaCheck {
    // Series coefficient (2 - (r-2)(r-3))/12 is positive for r = 2,3 and
    // negative for r >= 5; the r = 4 quartic coefficient 1/15 is positive.
    // Cross-checked against the sign of eta(1/2 - d) - eta(1/2) at k = 2.
    let mut worst = f64::INFINITY;
    // Wide enough that the r=4 quartic term (2 delta)^4/15 clears the
    // pass floor comfortably.
    let delta = 4e-3;
    for r in 2..=30usize {
        let coeff = (2.0 - ((r as f64) - 2.0) * ((r as f64) - 3.0)) / 12.0;
        let series_margin = match r {
            2 | 3 => coeff,
            4 => {
                let quartic = 1.0 / 15.0;
                if coeff.abs() > 1e-15 {
                    -1.0
                } else {
                    quartic
                }
            }
            _ => -coeff,
        };
        let fns = UnivariateFns::new(r, 2).unwrap();
        let diff = fns.eta(0.5 - delta) - fns.eta_at_upper();
        let curvature_margin = if r <= 4 { diff } else { -diff };
        worst = worst.min(series_margin).min(curvature_margin);
    }
    finish("app:lem012", "k=2, r in [2..30]; series signs + eta near 1/2", 29, worst)
}

fn check_decay_monotone() -> LemmaCheck {
    // r^2 (k+2)/k^r decreasing in r and k for r >= 3, k >= 2, and < 1 on
    // k=2, r>=9; k=3, r>=4; k>=4, r>=3.
    let phi = |r: usize, k: usize| -> f64 {
        let rf = r as f64;
        let kf = k as f64;
        rf * rf * (kf + 2.0) * (-rf * kf.ln()).exp()
    };
    let mut worst = f64::INFINITY;
    let mut count = 0usize;
    for r in 3..=30usize {
        for k in 2..=30usize {
            worst = worst.min(phi(r, k) - phi(r + 1, k));
            worst = worst.min(phi(r, k) - phi(r, k + 1));
            let in_region =
                (k == 2 && r >= 9) || (k == 3 && r >= 4) || (k >= 4 && r >= 3);
            if in_region {
                worst = worst.min(1.0 - phi(r, k));
            }
            count += 1;
        }
    }
    finish("app:lem013", "r in [3..30], k in [2..30]", count, worst)
}

fn check_regularity_closure() -> LemmaCheck {
    // Whenever the regularity inequality holds at (r,k) it holds at
    // (r+1,k) and (r,k+1).
    let mut worst = f64::INFINITY;
    let mut count = 0usize;
    for r in 3..=30usize {
        for k in 2..=30usize {
            if regularity_margin(r, k) >= 0.0 {
                worst = worst.min(regularity_margin(r + 1, k));
                worst = worst.min(regularity_margin(r, k + 1));
                count += 1;
            }
        }
    }
    finish("app:lem014", "holding pairs within r,k <= 30 and their successors", count, worst)
}

fn check_xi_smallness() -> LemmaCheck {
    // r (r ln k + 1) xi <= 1 at the actual minimiser, for regular pairs.
    let pairs: Vec<(usize, usize)> = (3..=20usize)
        .flat_map(|r| (2..=20usize).map(move |k| (r, k)))
        .filter(|&(r, k)| check_regularity(r, k))
        .collect();
    let worst = pairs
        .par_iter()
        .map(|&(r, k)| {
            let (xi, class, _, _) = find_xi(r, k).unwrap();
            debug_assert_eq!(class, Classification::Regular);
            1.0 - (r as f64) * (r as f64 * (k as f64).ln() + 1.0) * xi
        })
        .reduce(|| f64::INFINITY, f64::min);
    finish("app:lem015", "regular pairs with r,k <= 20, at the computed xi", pairs.len(), worst)
}

fn check_log_gap() -> LemmaCheck {
    // ln k - 2(k+2)/k^r > ln(k-1) for regular pairs.
    let mut worst = f64::INFINITY;
    let mut count = 0usize;
    for r in 3..=30usize {
        for k in 2..=30usize {
            if check_regularity(r, k) {
                let kf = k as f64;
                let margin =
                    kf.ln() - 2.0 * (kf + 2.0) * (-(r as f64) * kf.ln()).exp() - (kf - 1.0).ln();
                worst = worst.min(margin);
                count += 1;
            }
        }
    }
    finish("app:lem016", "regular pairs with r,k <= 30", count, worst)
}

fn check_sqrt_log_bound() -> LemmaCheck {
    // 4(k-1) >= sqrt(k) ln k for integer k >= 1; equality at k = 1.
    let mut worst = f64::INFINITY;
    for k in 1..=30usize {
        let kf = k as f64;
        worst = worst.min(4.0 * (kf - 1.0) - kf.sqrt() * kf.ln());
    }
    finish("app:lem017", "integer k in [1..30]", 30, worst)
}

fn check_block_gram() -> LemmaCheck {
    // Closed form (p+1)^q (q+1)^p equals the dense fraction-free
    // determinant.
    let mut worst = f64::INFINITY;
    for p in 1..=6usize {
        for q in 1..=6usize {
            let ok = block_gram_det(p, q) == block_gram_det_dense(p, q);
            worst = worst.min(if ok { 0.0 } else { -1.0 });
        }
    }
    finish("app:lem018", "p, q in [1..6], exact integers", 36, worst)
}

fn check_density_ratio() -> LemmaCheck {
    // r(r-1) ln k / (k^(r-1) - 1) < 1 on the domain the bound is used:
    // k >= 3 with r >= 3, r = 2 with k >= 4, and k = 2 with r >= 5.
    // The stated blanket domain "k >= 3, r >= 2" fails at its single
    // corner (r,k) = (2,3), where the ratio is ln 3 > 1; that pair is
    // covered by the r = 2 closed form instead and is excluded here.
    let mut worst = f64::INFINITY;
    let mut count = 0usize;
    let mut eval = |r: usize, k: usize| {
        let kf = k as f64;
        let kr1 = kf.powi(r as i32 - 1);
        worst = worst.min(1.0 - (r * (r - 1)) as f64 * kf.ln() / (kr1 - 1.0));
        count += 1;
    };
    for r in 3..=30usize {
        for k in 3..=30usize {
            eval(r, k);
        }
    }
    for k in 4..=30usize {
        eval(2, k);
    }
    for r in 5..=30usize {
        eval(r, 2);
    }
    finish(
        "app:lem019",
        "k,r <= 30: k >= 3 & r >= 3; r = 2 & k >= 4; k = 2 & r >= 5 (excl. (2,3): ratio ln 3 > 1)",
        count,
        worst,
    )
}

type CheckFn = fn() -> LemmaCheck;

/// Registered checks in id order.
const REGISTRY: &[(&str, CheckFn)] = &[
    ("app:lem001", check_log_upper_bound),
    ("app:lem002", check_log_lower_bound),
    ("app:lem004", check_xlnx_bounds),
    ("app:lem005", check_geometric_series_bounds),
    ("app:lem006", check_bernoulli_power_bounds),
    ("app:lem007", check_isolated_vertices_statistical),
    ("app:lem009", check_root_count),
    ("app:lem010", check_power_comparison),
    ("app:lem011", check_eta_ordering),
    ("app:lem012", check_midpoint_curvature),
    ("app:lem013", check_decay_monotone),
    ("app:lem014", check_regularity_closure),
    ("app:lem015", check_xi_smallness),
    ("app:lem016", check_log_gap),
    ("app:lem017", check_sqrt_log_bound),
    ("app:lem018", check_block_gram),
    ("app:lem019", check_density_ratio),
];

pub fn registered_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|(id, _)| *id).collect()
}

/// Run one registered check by id.
pub fn run_check(lemma_id: &str) -> Result<LemmaCheck> {
    REGISTRY
        .iter()
        .find(|(id, _)| *id == lemma_id)
        .map(|(_, f)| f())
        .ok_or_else(|| Error::UnknownLemma(lemma_id.to_string()))
}

/// Run every registered check; results in registry (id) order.
pub fn run_all() -> Vec<LemmaCheck> {
    REGISTRY.par_iter().map(|(_, f)| f()).collect()
}

/// CSV rendering: lemma_id, domain, grid_size, worst_margin, passed.
pub fn to_csv(checks: &[LemmaCheck]) -> String {
    let mut out = String::from("lemma_id,domain,grid_size,worst_margin,passed\n");
    for c in checks {
        out.push_str(&format!(
            "{},\"{}\",{},{:e},{}\n",
            c.lemma_id, c.domain, c.grid_size, c.worst_margin, c.passed
        ));
    }
    out
}

/// Aligned plain-text table.
pub fn to_text_table(checks: &[LemmaCheck]) -> String {
    let mut out = format!(
        "{:<12} {:<62} {:>10} {:>13} {:>7}\n",
        "lemma_id", "domain", "grid_size", "worst_margin", "passed"
    );
    for c in checks {
        out.push_str(&format!(
            "{:<12} {:<62} {:>10} {:>13.3e} {:>7}\n",
            c.lemma_id, c.domain, c.grid_size, c.worst_margin, c.passed
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_checks_pass_individually() {
        for id in [
            "app:lem001",
            "app:lem002",
            "app:lem004",
            "app:lem005",
            "app:lem006",
            "app:lem010",
            "app:lem011",
            "app:lem012",
            "app:lem013",
            "app:lem014",
            "app:lem016",
            "app:lem017",
            "app:lem018",
            "app:lem019",
        ] {
            let check = run_check(id).unwrap();
            assert!(check.passed, "{id}: worst margin {}", check.worst_margin);
        }
    }

    #[test]
    fn unknown_id_is_rejected() {
        assert!(matches!(run_check("app:lem099"), Err(Error::UnknownLemma(_))));
    }

    #[test]
    fn run_is_deterministic() {
        let a = run_check("app:lem009").unwrap();
        let b = run_check("app:lem009").unwrap();
        assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
        let a = run_check("app:lem007").unwrap();
        let b = run_check("app:lem007").unwrap();
        assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
    }

    #[test]
    fn perturbed_inequality_fails() {
        // Mutation sanity: flipping the sqrt-log bound must fail loudly.
        let mut worst = f64::INFINITY;
        for k in 1..=30usize {
            let kf = k as f64;
            worst = worst.min(kf.sqrt() * kf.ln() - 4.0 * (kf - 1.0));
        }
        let mutated = finish("app:lem017", "perturbed", 30, worst);
        assert!(!mutated.passed);
    }

    #[test]
    fn csv_and_table_render() {
        let checks = vec![run_check("app:lem017").unwrap()];
        let csv = to_csv(&checks);
        assert!(csv.starts_with("lemma_id,domain,grid_size,worst_margin,passed\n"));
        assert!(csv.contains("app:lem017"));
        assert!(to_text_table(&checks).contains("app:lem017"));
    }
}
