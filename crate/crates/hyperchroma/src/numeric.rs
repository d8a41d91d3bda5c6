//! Shared numeric kernels: compensated summation, log-sum-exp, root
//! bracketing, golden-section refinement, exact determinants.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};

/// Neumaier-compensated accumulator. The running compensation term keeps
/// the effective precision of the sum well beyond a bare f64.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sum of a slice with Neumaier compensation.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// ln(sum_i exp(ln_terms[i])) with a shared maximum shift and compensated
/// accumulation. Returns -inf for an empty slice.
pub fn log_sum_exp(ln_terms: &[f64]) -> f64 {
    let m = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let mut acc = CompensatedSum::new();
    for &t in ln_terms {
        acc.add((t - m).exp());
    }
    m + acc.value().ln()
}

/// Cumulative table of ln(j!) for j = 0..=n, built with compensated sums.
pub fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = CompensatedSum::new();
    table.push(0.0);
    for j in 1..=n {
        acc.add((j as f64).ln());
        table.push(acc.value());
    }
    table
}

/// Binomial coefficient as f64 (exact until the product exceeds 2^53,
/// then correctly rounded to ~1 ulp).
pub fn binomial_f64(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Binomial coefficient as an exact big integer.
pub fn binomial_bigint(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1u32);
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Binomial coefficient as u128, for subset counting guards.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.checked_mul((n - j) as u128)?;
        acc /= (j + 1) as u128;
    }
    Some(acc)
}

/// Exact factorial.
pub fn factorial_bigint(n: u64) -> BigInt {
    let mut acc = BigInt::from(1u32);
    for j in 2..=n {
        acc *= BigInt::from(j);
    }
    acc
}

/// ln of a positive big integer, accurate to ~1e-15 relative regardless of
/// magnitude (the top 64 bits carry the mantissa, the rest is an exponent).
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln_bigint needs a positive argument");
    let bits = x.bits();
    if bits <= 63 {
        let (_, digits) = x.to_u64_digits();
        return (digits[0] as f64).ln();
    }
    let shift = bits - 63;
    let top: BigInt = x >> shift;
    let (_, digits) = top.to_u64_digits();
    (digits[0] as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// ln of a positive big rational.
pub fn ln_bigrational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Outcome of a bisection run.
#[derive(Debug, Clone, Copy)]
pub struct BisectResult {
    pub root: f64,
    pub iterations: u32,
}

/// Bisection for a sign change of `f` on [lo, hi]. `f(lo)` and `f(hi)` must
/// have strictly opposite signs. Stops when the bracket width drops below
/// `rel_tol * |hi|` (plus a tiny absolute floor) or after `max_iter` halvings.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    max_iter: u32,
) -> BisectResult {
    let f_lo = f(lo);
    let f_hi = f(hi);
    assert!(
        f_lo * f_hi < 0.0,
        "bisect: no sign change on bracket [{lo}, {hi}] (f: {f_lo}, {f_hi})"
    );
    let sign_lo = f_lo.signum();
    let tol = rel_tol * hi.abs() + f64::MIN_POSITIVE;
    let mut iterations = 0;
    while hi - lo > tol && iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket exhausted at f64 resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return BisectResult { root: mid, iterations };
        }
        if fm.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    BisectResult { root: 0.5 * (lo + hi), iterations }
}

/// Golden-section minimisation of a unimodal function on [lo, hi].
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    max_iter: u32,
) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let tol = rel_tol * hi.abs() + f64::MIN_POSITIVE;
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Determinant of a dense integer matrix by fraction-free (Bareiss)
/// elimination. Exact for any size; intermediate entries stay integral.
pub fn bareiss_det(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::from(1u32);
    }
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1u32);
    for p in 0..n - 1 {
        if m[p][p].is_zero() {
            let swap = (p + 1..n).find(|&i| !m[i][p].is_zero());
            match swap {
                Some(i) => {
                    m.swap(p, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in p + 1..n {
            for j in p + 1..n {
                let num = &m[i][j] * &m[p][p] - &m[i][p] * &m[p][j];
                m[i][j] = num / &prev;
            }
            m[i][p] = BigInt::zero();
        }
        prev = m[p][p].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Determinant of a dense f64 matrix by partial-pivot Gaussian elimination.
pub fn det_f64(matrix: &[Vec<f64>]) -> f64 {
    let n = matrix.len();
    if n == 0 {
        return 1.0;
    }
    let mut m: Vec<Vec<f64>> = matrix.to_vec();
    let mut det = 1.0f64;
    for p in 0..n {
        let (pivot_row, pivot) = (p..n)
            .map(|i| (i, m[i][p]))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != p {
            m.swap(p, pivot_row);
            det = -det;
        }
        det *= m[p][p];
        let pivot_row: Vec<f64> = m[p][p..].to_vec();
        for row in m.iter_mut().skip(p + 1) {
            let factor = row[p] / pivot_row[0];
            for (x, pv) in row[p..].iter_mut().zip(&pivot_row) {
                *x -= factor * pv;
            }
        }
    }
    det
}
