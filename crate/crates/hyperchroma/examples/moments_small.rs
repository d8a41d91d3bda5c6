//! Exact first and second moments of the balanced-coloring count Z at
//! desk scale, with the overlap-matrix family that indexes the E[Z^2]
//! sum.
//!
//! Run with: cargo run --example moments_small

use hyperchroma::moments::{enumerate_overlap_matrices, expected_z, expected_z2};

fn main() {
    println!("Overlap matrices for n=4, k=2 (a = diagonal entry):");
    for m in enumerate_overlap_matrices(4, 2).unwrap() {
        println!("  [[{}, {}], [{}, {}]]", m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    }

    println!();
    println!(
        "{:>3} {:>3} {:>3} {:>3} {:>14} {:>14} {:>16}",
        "n", "r", "k", "m", "E[Z]", "E[Z^2]", "E[Z]^2/E[Z^2]"
    );
    for (n, r, k, m) in [
        (4usize, 2usize, 2usize, 0usize),
        (4, 2, 2, 1),
        (4, 2, 2, 2),
        (6, 3, 2, 2),
        (6, 3, 3, 2),
        (8, 3, 2, 4),
    ] {
        let z = expected_z(n, r, k, m).unwrap();
        let z2 = expected_z2(n, r, k, m).unwrap();
        let ratio = (2.0 * z.exact_ln() - z2.exact_ln()).exp();
        println!(
            "{:>3} {:>3} {:>3} {:>3} {:>14} {:>14} {:>16.6}",
            n,
            r,
            k,
            m,
            z.exact.as_rational().unwrap().to_string(),
            z2.exact.as_rational().unwrap().to_string(),
            ratio,
        );
    }
    println!();
    println!("E[Z]^2 <= E[Z^2] always (Cauchy-Schwarz); the ratio lower-bounds");
    println!("the probability that a balanced coloring exists.");
}
