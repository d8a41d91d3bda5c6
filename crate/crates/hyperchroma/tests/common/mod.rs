//! Brute-force moment oracle, independent of the moment engine: exact
//! averages of Z and Z^2 over every label vector v in [n]^(rm), where
//! each consecutive block of r labels forms one edge and Z counts the
//! balanced k-colorings of the resulting multiset hypergraph.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use hyperchroma::coloring::count_balanced_colorings;
use hyperchroma::models::Hypergraph;

/// Mixed-radix increment over [1..n]^len; false when the odometer wraps.
fn next_vector(v: &mut [u32], n: u32) -> bool {
    for d in v.iter_mut().rev() {
        if *d < n {
            *d += 1;
            return true;
        }
        *d = 1;
    }
    false
}

/// Exact (E[Z], E[Z^2]) for every divisor k of n at once, by full
/// enumeration of the n^(rm) label vectors.
pub fn oracle_moments(
    n: usize,
    r: usize,
    m: usize,
    ks: &[usize],
) -> Vec<(BigRational, BigRational)> {
    let digits = r * m;
    let mut v = vec![1u32; digits];
    let mut sums: Vec<(BigInt, BigInt)> =
        ks.iter().map(|_| (BigInt::zero(), BigInt::zero())).collect();
    loop {
        let edges: Vec<Vec<u32>> = v.chunks(r).map(|c| c.to_vec()).collect();
        let h = Hypergraph::new(n, r, edges, false).unwrap();
        for (i, &k) in ks.iter().enumerate() {
            let z = BigInt::from(count_balanced_colorings(&h, k).unwrap().0);
            sums[i].0 += &z;
            sums[i].1 += &z * &z;
        }
        if !next_vector(&mut v, n as u32) {
            break;
        }
    }
    let denom = BigInt::from(n as u64).pow(digits as u32);
    sums.into_iter()
        .map(|(s, s2)| (BigRational::new(s, denom.clone()), BigRational::new(s2, denom.clone())))
        .collect()
}
