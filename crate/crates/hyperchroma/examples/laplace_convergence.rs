//! Laplace-method asymptotics of E[Z^2]: for k = 2 the overlap sum is
//! one-dimensional and can be evaluated exactly in log domain at n in
//! the thousands, so the asymptotic formula and its Hessian constant
//! alpha can be watched converging.
//!
//! Run with: cargo run --release --example laplace_convergence

use hyperchroma::moments::{asymptotic_z2_ln, expected_z, expected_z2, laplace_constants};

fn main() {
    let (r, k, c) = (3usize, 2usize, 1.0f64);
    let consts = laplace_constants(r, k, c).unwrap();
    println!("r={r}, k={k}, c={c}: alpha = {:.6}, lattice det = {}, ratio limit alpha^(1/2) = {:.6}", consts.alpha, consts.lattice_det, consts.ratio_limit);
    println!();
    println!(
        "{:>6} {:>22} {:>22} {:>12} {:>14}",
        "n", "ln E[Z^2] (exact sum)", "ln E[Z^2] (asymptotic)", "ratio", "E[Z]^2/E[Z^2]"
    );
    for n in [100usize, 200, 500, 1000, 2000, 4000] {
        let m = n; // m = c n with c = 1
        let exact = expected_z2(n, r, k, m).unwrap().exact_ln();
        let asym = asymptotic_z2_ln(n, r, k, c).unwrap();
        let second = (2.0 * expected_z(n, r, k, m).unwrap().exact_ln() - exact).exp();
        println!(
            "{:>6} {:>22.6} {:>22.6} {:>12.6} {:>14.6}",
            n,
            exact,
            asym,
            (exact - asym).exp(),
            second,
        );
    }
    println!();
    println!("The exact/asymptotic ratio drifts to 1 like 1/n and the");
    println!("second-moment ratio approaches alpha^(1/2).");
}
