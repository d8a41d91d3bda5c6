//! First and second moments of the balanced-coloring count Z, and the
//! Laplace-method constants governing E[Z^2] as n grows.
//!
//! Exact values use big rationals (the summand of E[Z^2] is a multinomial
//! times a rational power, so small instances are exactly representable).
//! Larger instances switch to log-domain summation with compensated
//! accumulation, since the summands span hundreds of orders of magnitude.
//!
//! With s = n/k, the second-moment sum runs over all k x k nonnegative
//! integer matrices L with every row and column sum equal to s:
//!
//!   E[Z^2] = sum_L  n! / prod(l_ij!) * (1 - 2/k^(r-1) + sum (l_ij/n)^r)^m
//!
//! The exponent function F and its Hessian at the doubly stochastic
//! center J0 = (1/k^2) determine the asymptotics.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{
    bareiss_det, binomial_u128, det_f64, factorial_bigint, ln_bigrational, ln_factorial_table,
    CompensatedSum,
};

/// k x k nonnegative integer matrix with all row and column sums equal to
/// `line_sum` (= n/k). Indexes the second-moment sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapMatrix {
    k: usize,
    line_sum: u64,
    entries: Vec<u64>, // row-major, len k*k
}

impl OverlapMatrix {
    pub fn new(k: usize, line_sum: u64, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != k * k {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                k * k,
                entries.len()
            )));
        }
        let m = Self { k, line_sum, entries };
        for i in 0..k {
            if m.row(i).iter().sum::<u64>() != line_sum {
                return Err(Error::InvalidParameter(format!("row {i} sum != {line_sum}")));
            }
            if (0..k).map(|j| m.get(j, i)).sum::<u64>() != line_sum {
                return Err(Error::InvalidParameter(format!("column {i} sum != {line_sum}")));
            }
        }
        Ok(m)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn line_sum(&self) -> u64 {
        self.line_sum
    }

    pub fn n(&self) -> u64 {
        self.k as u64 * self.line_sum
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }
}

/// Exact value of a moment: a big rational for enumerable instances, or
/// the natural log of the value when only log-domain evaluation fits.
#[derive(Debug, Clone)]
pub enum ExactMoment {
    Rational(BigRational),
    LogValue(f64),
}

impl ExactMoment {
    pub fn ln(&self) -> f64 {
        match self {
            ExactMoment::Rational(x) => {
                if x.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    ln_bigrational(x)
                }
            }
            ExactMoment::LogValue(l) => *l,
        }
    }

    /// f64 value; +inf when the value exceeds f64 range.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactMoment::Rational(x) => x.to_f64().unwrap_or(f64::INFINITY),
            ExactMoment::LogValue(l) => l.exp(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactMoment::Rational(x) => Some(x),
            ExactMoment::LogValue(_) => None,
        }
    }
}

/// A moment of Z together with its asymptotic counterpart (as a log, since
/// the value itself often overflows f64).
#[derive(Debug, Clone)]
pub struct MomentEstimate {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub m: usize,
    pub exact: ExactMoment,
    /// ln of the asymptotic formula; None when the Laplace method does not
    /// apply (alpha <= 0 for the second moment).
    pub asymptotic_ln: Option<f64>,
}

impl MomentEstimate {
    pub fn exact_ln(&self) -> f64 {
        self.exact.ln()
    }
}

/// Hessian and lattice constants of the Laplace evaluation of E[Z^2].
#[derive(Debug, Clone, Copy)]
pub struct LaplaceConstants {
    /// alpha = 1 - c r(r-1) / (k^(r-1) - 1)^2; must be positive.
    pub alpha: f64,
    /// Determinant of the overlap lattice: k^(k-1).
    pub lattice_det: f64,
    /// det of the negated restricted Hessian: (k^2 alpha)^((k-1)^2).
    pub hessian_det: f64,
    /// Limit of E[Z]^2 / E[Z^2]: alpha^((k-1)^2 / 2).
    pub ratio_limit: f64,
}

fn check_divides(n: usize, k: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !n.is_multiple_of(k) {
        return Err(Error::InvalidParameter(format!("k={k} does not divide n={n}")));
    }
    Ok((n / k) as u64)
}

const EXPECTED_Z_GUARD_N: usize = 20_000;

/// Exact first moment: E[Z] = n!/((n/k)!)^k * (1 - 1/k^(r-1))^m,
/// with the Stirling-form asymptotic alongside.
pub fn expected_z(n: usize, r: usize, k: usize, m: usize) -> Result<MomentEstimate> {
    let s = check_divides(n, k)?;
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r={r} must be >= 2")));
    }
    if n > EXPECTED_Z_GUARD_N {
        return Err(Error::GuardExceeded(format!(
            "n={n} above the exact first-moment guard ({EXPECTED_Z_GUARD_N})"
        )));
    }
    let k_pow = BigInt::from(k).pow((r - 1) as u32);
    let not_mono = BigRational::new(&k_pow - BigInt::one(), k_pow);
    let balanced = BigRational::from_integer(
        factorial_bigint(n as u64) / factorial_bigint(s).pow(k as u32),
    );
    let exact = balanced * pow_rational(&not_mono, m);

    let nf = n as f64;
    let kf = k as f64;
    let ln_not_mono = (-kf.powi(1 - r as i32)).ln_1p();
    let edge_term = if m == 0 { 0.0 } else { m as f64 * ln_not_mono };
    let asymptotic_ln = 0.5 * kf * kf.ln() - 0.5 * (kf - 1.0) * (2.0 * std::f64::consts::PI * nf).ln()
        + nf * kf.ln() + edge_term;

    Ok(MomentEstimate { n, r, k, m, exact: ExactMoment::Rational(exact), asymptotic_ln: Some(asymptotic_ln) })
}

fn pow_rational(x: &BigRational, m: usize) -> BigRational {
    // Exponentiation by squaring; Ratio::pow takes i32 which can overflow
    // for large m, so do it directly.
    let mut base = x.clone();
    let mut exp = m;
    let mut acc = BigRational::one();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &base;
        }
        exp >>= 1;
        if exp > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Visit every k x k table with all line sums equal to `s`, in a fixed
/// lexicographic order of the free (k-1) x (k-1) block. `scratch` receives
/// the full matrix row-major. Returns Err if more than `cap` tables exist.
fn visit_tables(
    k: usize,
    s: u64,
    cap: u64,
    f: &mut impl FnMut(&[u64]),
) -> Result<u64> {
    assert!(k >= 1);
    if k == 1 {
        f(&[s]);
        return Ok(1);
    }
    let d = k - 1;
    let mut free = vec![0u64; d * d];
    let mut row_used = vec![0u64; d];
    let mut col_used = vec![0u64; d];
    let mut scratch = vec![0u64; k * k];
    let mut count = 0u64;

    // Recursive digit placement. At the last digit the corner constraint
    // sum(B) >= (k-2)s gives a lower bound that prunes dead ends.
    #[allow(clippy::too_many_arguments)]
    fn rec(
        p: usize,
        k: usize,
        s: u64,
        free: &mut [u64],
        row_used: &mut [u64],
        col_used: &mut [u64],
        placed: u64,
        scratch: &mut [u64],
        cap: u64,
        count: &mut u64,
        f: &mut impl FnMut(&[u64]),
    ) -> Result<()> {
        let d = k - 1;
        if p == d * d {
            let need = (k as u64 - 2) * s;
            if placed < need {
                return Ok(());
            }
            *count += 1;
            if *count > cap {
                return Err(Error::GuardExceeded(format!(
                    "overlap enumeration exceeds the {cap}-table guard"
                )));
            }
            // Assemble the full matrix.
            for i in 0..d {
                for j in 0..d {
                    scratch[i * k + j] = free[i * d + j];
                }
                scratch[i * k + d] = s - row_used[i];
            }
            for j in 0..d {
                scratch[d * k + j] = s - col_used[j];
            }
            scratch[d * k + d] = placed - need;
            f(scratch);
            return Ok(());
        }
        let i = p / d;
        let j = p % d;
        let hi = (s - row_used[i]).min(s - col_used[j]);
        let lo = if p == d * d - 1 {
            ((k as u64 - 2) * s).saturating_sub(placed)
        } else {
            0
        };
        for v in lo..=hi {
            free[p] = v;
            row_used[i] += v;
            col_used[j] += v;
            rec(p + 1, k, s, free, row_used, col_used, placed + v, scratch, cap, count, f)?;
            row_used[i] -= v;
            col_used[j] -= v;
        }
        free[p] = 0;
        Ok(())
    }

    rec(0, k, s, &mut free, &mut row_used, &mut col_used, 0, &mut scratch, cap, &mut count, f)?;
    Ok(count)
}

const TABLE_CAP: u64 = 10_000_000;

fn enumeration_guard(n: usize, k: usize) -> Result<u64> {
    let s = check_divides(n, k)?;
    // Cheap a-priori bound: compositions of s into k parts, per free row.
    let per_row = binomial_u128(s + k as u64 - 1, k as u64 - 1)
        .ok_or_else(|| Error::GuardExceeded("composition count overflow".into()))?;
    let mut estimate: u128 = 1;
    for _ in 0..k.saturating_sub(1) {
        estimate = estimate.saturating_mul(per_row);
    }
    if estimate > 4 * TABLE_CAP as u128 {
        return Err(Error::GuardExceeded(format!(
            "overlap family for n={n}, k={k} estimated at {estimate} tables (cap {TABLE_CAP})"
        )));
    }
    Ok(s)
}

/// All overlap matrices for the given (n, k), eagerly enumerated in a
/// fixed order. Guarded: errors out when the family is too large.
pub fn enumerate_overlap_matrices(n: usize, k: usize) -> Result<Vec<OverlapMatrix>> {
    let s = enumeration_guard(n, k)?;
    let mut out = Vec::new();
    visit_tables(k, s, TABLE_CAP, &mut |entries| {
        out.push(OverlapMatrix { k, line_sum: s, entries: entries.to_vec() });
    })?;
    Ok(out)
}

/// Number of overlap matrices without materialising them.
pub fn count_overlap_matrices(n: usize, k: usize) -> Result<u64> {
    let s = enumeration_guard(n, k)?;
    visit_tables(k, s, TABLE_CAP, &mut |_| {})
}

const EXACT_Z2_GUARD_N: usize = 16;
const EXACT_Z2_GUARD_M: usize = 64;

/// Exact second moment E[Z^2]. Small instances (n <= 16, m <= 64) are
/// summed in big rationals; larger ones in compensated log domain with a
/// fixed-chunk parallel reduction. The asymptotic counterpart is attached
/// when alpha > 0.
pub fn expected_z2(n: usize, r: usize, k: usize, m: usize) -> Result<MomentEstimate> {
    let s = enumeration_guard(n, k)?;
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r={r} must be >= 2")));
    }
    let c = m as f64 / n as f64;
    let asymptotic_ln = asymptotic_z2_ln(n, r, k, c).ok();

    if n <= EXACT_Z2_GUARD_N && m <= EXACT_Z2_GUARD_M {
        let exact = expected_z2_rational(n, r, k, m, s)?;
        return Ok(MomentEstimate { n, r, k, m, exact: ExactMoment::Rational(exact), asymptotic_ln });
    }
    let ln = expected_z2_log(n, r, k, m, s)?;
    Ok(MomentEstimate { n, r, k, m, exact: ExactMoment::LogValue(ln), asymptotic_ln })
}

fn expected_z2_rational(n: usize, r: usize, k: usize, m: usize, s: u64) -> Result<BigRational> {
    let n_fact = factorial_bigint(n as u64);
    let mut factorials: Vec<BigInt> = Vec::with_capacity(s as usize + 1);
    for j in 0..=s {
        factorials.push(factorial_bigint(j));
    }
    let n_pow_r = BigInt::from(n).pow(r as u32);
    let k_pow = BigInt::from(k).pow((r - 1) as u32);
    // 1 - 2/k^(r-1) as a rational over k^(r-1).
    let base_const = BigRational::new(&k_pow - BigInt::from(2), k_pow);

    let mut total = BigRational::zero();
    visit_tables(k, s, TABLE_CAP, &mut |entries| {
        let mut denom = BigInt::one();
        let mut power_sum = BigInt::zero();
        for &l in entries {
            denom *= &factorials[l as usize];
            power_sum += BigInt::from(l).pow(r as u32);
        }
        let multinomial = BigRational::from_integer(&n_fact / denom);
        let base = &base_const + BigRational::new(power_sum, n_pow_r.clone());
        total += multinomial * pow_rational(&base, m);
    })?;
    Ok(total)
}

fn expected_z2_log(n: usize, r: usize, k: usize, m: usize, s: u64) -> Result<f64> {
    let ln_fact = ln_factorial_table(n);
    let two_over_kr = 2.0 * (k as f64).powi(1 - r as i32);
    let nf = n as f64;
    let mf = m as f64;
    let ri = r as i32;

    let mut ln_terms: Vec<f64> = Vec::new();
    visit_tables(k, s, TABLE_CAP, &mut |entries| {
        let mut ln_multinomial = ln_fact[n];
        let mut power_sum = 0.0f64;
        for &l in entries {
            ln_multinomial -= ln_fact[l as usize];
            power_sum += (l as f64 / nf).powi(ri);
        }
        let base = 1.0 - two_over_kr + power_sum;
        let edge_term = if m == 0 { 0.0 } else { mf * base.ln() };
        ln_terms.push(ln_multinomial + edge_term);
    })?;

    // Fixed-chunk parallel reduction: each chunk is summed sequentially
    // with compensation, chunks combine in index order, so the result is
    // independent of the worker count.
    const CHUNK: usize = 65_536;
    let partials: Vec<(f64, f64)> = ln_terms
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mx = chunk.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut acc = CompensatedSum::new();
            for &t in chunk {
                acc.add((t - mx).exp());
            }
            (mx, acc.value())
        })
        .collect();
    let global_max = partials.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mut acc = CompensatedSum::new();
    for (mx, sum) in partials {
        acc.add(sum * (mx - global_max).exp());
    }
    Ok(global_max + acc.value().ln())
}

/// The exponent function F(X) = -sum x_ij ln x_ij
/// + c ln(1 - 2/k^(r-1) + sum x_ij^r), with x ln x = 0 at x = 0.
///
/// `entries` is row-major of length k*k with nonnegative entries.
pub fn eval_f(entries: &[f64], k: usize, r: usize, c: f64) -> f64 {
    assert_eq!(entries.len(), k * k);
    let mut entropy = CompensatedSum::new();
    let mut power_sum = CompensatedSum::new();
    for &x in entries {
        debug_assert!(x >= 0.0);
        if x > 0.0 {
            entropy.add(-x * x.ln());
        }
        power_sum.add(x.powi(r as i32));
    }
    let two_over_kr = 2.0 * (k as f64).powi(1 - r as i32);
    entropy.value() + c * (1.0 - two_over_kr + power_sum.value()).ln()
}

/// Hessian coefficient alpha and the derived determinants. Errors when
/// alpha <= 0 (Laplace method inapplicable at this density).
pub fn laplace_constants(r: usize, k: usize, c: f64) -> Result<LaplaceConstants> {
    if r < 2 || k < 2 {
        return Err(Error::InvalidParameter(format!("need r, k >= 2 (got r={r}, k={k})")));
    }
    let kf = k as f64;
    let k_r1 = kf.powi(r as i32 - 1);
    let alpha = 1.0 - c * (r * (r - 1)) as f64 / ((k_r1 - 1.0) * (k_r1 - 1.0));
    if alpha <= 0.0 {
        return Err(Error::AlphaNotPositive { alpha });
    }
    let sq = ((k - 1) * (k - 1)) as f64;
    Ok(LaplaceConstants {
        alpha,
        lattice_det: kf.powi(k as i32 - 1),
        hessian_det: (kf * kf * alpha).powf(sq),
        ratio_limit: alpha.powf(sq / 2.0),
    })
}

/// Finite-difference determinant of the negated Hessian of F at J0,
/// restricted to the zero-line-sum subspace: det(U^T (-H) U) / det(U^T U)
/// where the columns of U are the basis matrices
/// U_ij = E_ij - E_ik - E_kj + E_kk. Central differences at step h with
/// one Richardson refinement at h/2.
pub fn hessian_numeric_det(r: usize, k: usize, c: f64, h: f64) -> f64 {
    let d = k * k;
    let x0 = vec![1.0 / (k * k) as f64; d];
    let f = |x: &[f64]| eval_f(x, k, r, c);

    let hess = |step: f64| -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0f64; d]; d];
        let f0 = f(&x0);
        let mut x = x0.clone();
        for a in 0..d {
            // Diagonal second difference.
            x[a] += step;
            let fp = f(&x);
            x[a] -= 2.0 * step;
            let fm = f(&x);
            x[a] += step;
            m[a][a] = (fp - 2.0 * f0 + fm) / (step * step);
            for b in a + 1..d {
                x[a] += step;
                x[b] += step;
                let fpp = f(&x);
                x[b] -= 2.0 * step;
                let fpm = f(&x);
                x[a] -= 2.0 * step;
                let fmm = f(&x);
                x[b] += 2.0 * step;
                let fmp = f(&x);
                x[a] += step;
                x[b] -= step;
                let v = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
                m[a][b] = v;
                m[b][a] = v;
            }
        }
        m
    };

    let h1 = hess(h);
    let h2 = hess(h / 2.0);
    // Central differences carry O(h^2) error; (4 D(h/2) - D(h)) / 3 kills it.
    let mut hessian = vec![vec![0.0f64; d]; d];
    for a in 0..d {
        for b in 0..d {
            hessian[a][b] = (4.0 * h2[a][b] - h1[a][b]) / 3.0;
        }
    }

    // Basis of the zero-line-sum subspace, as columns.
    let dim = (k - 1) * (k - 1);
    let mut u = vec![vec![0.0f64; dim]; d];
    for i in 0..k - 1 {
        for j in 0..k - 1 {
            let col = i * (k - 1) + j;
            u[i * k + j][col] += 1.0;
            u[i * k + (k - 1)][col] -= 1.0;
            u[(k - 1) * k + j][col] -= 1.0;
            u[(k - 1) * k + (k - 1)][col] += 1.0;
        }
    }

    let ut_neg_h_u = sandwich(&u, &hessian, true, d, dim);
    let ut_u = gram(&u, d, dim);
    det_f64(&ut_neg_h_u) / det_f64(&ut_u)
}

fn sandwich(u: &[Vec<f64>], m: &[Vec<f64>], negate: bool, d: usize, dim: usize) -> Vec<Vec<f64>> {
    // U^T (+-M) U
    let mut mu = vec![vec![0.0f64; dim]; d];
    for a in 0..d {
        for col in 0..dim {
            let mut acc = 0.0;
            for b in 0..d {
                acc += m[a][b] * u[b][col];
            }
            mu[a][col] = if negate { -acc } else { acc };
        }
    }
    let mut out = vec![vec![0.0f64; dim]; dim];
    for row in 0..dim {
        for col in 0..dim {
            out[row][col] = (0..d).map(|a| u[a][row] * mu[a][col]).sum();
        }
    }
    out
}

fn gram(u: &[Vec<f64>], d: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0f64; dim]; dim];
    for row in 0..dim {
        for col in 0..dim {
            out[row][col] = (0..d).map(|a| u[a][row] * u[a][col]).sum();
        }
    }
    out
}

/// Closed form (p+1)^q (q+1)^p for the Gram determinant of the block
/// matrix with diagonal blocks 2B and off-diagonal blocks B, where
/// B = I + ones (q x q), p blocks per side.
pub fn block_gram_det(p: usize, q: usize) -> BigInt {
    assert!(p >= 1 && q >= 1);
    BigInt::from(p + 1).pow(q as u32) * BigInt::from(q + 1).pow(p as u32)
}

/// Cross-check path: build the pq x pq matrix explicitly and evaluate the
/// determinant by fraction-free elimination.
pub fn block_gram_det_dense(p: usize, q: usize) -> BigInt {
    assert!(p >= 1 && q >= 1);
    let size = p * q;
    let mut m = vec![vec![BigInt::zero(); size]; size];
    for a in 0..p {
        for b in 0..q {
            for c in 0..p {
                for e in 0..q {
                    let block = if a == c { 2 } else { 1 };
                    let inner = if b == e { 2 } else { 1 };
                    m[a * q + b][c * q + e] = BigInt::from(block * inner);
                }
            }
        }
    }
    bareiss_det(&m)
}

/// ln of the asymptotic second moment:
/// E[Z^2] ~ k^k / ((2 pi n)^(k-1) alpha^((k-1)^2/2)) * (k (1-1/k^(r-1))^c)^(2n).
pub fn asymptotic_z2_ln(n: usize, r: usize, k: usize, c: f64) -> Result<f64> {
    let consts = laplace_constants(r, k, c)?;
    let nf = n as f64;
    let kf = k as f64;
    let ln_not_mono = (-kf.powi(1 - r as i32)).ln_1p();
    Ok(kf * kf.ln()
        - (kf - 1.0) * (2.0 * std::f64::consts::PI * nf).ln()
        - ((k - 1) * (k - 1)) as f64 / 2.0 * consts.alpha.ln()
        + 2.0 * nf * (kf.ln() + c * ln_not_mono))
}

/// Value form of [`asymptotic_z2_ln`]; +inf if out of f64 range.
pub fn asymptotic_z2(n: usize, r: usize, k: usize, c: f64) -> Result<f64> {
    asymptotic_z2_ln(n, r, k, c).map(f64::exp)
}

/// ln of the second-moment summand at a given overlap matrix, with
/// exponent m. Used for the center-term diagnostics.
pub fn ln_summand_at(l: &OverlapMatrix, n: usize, r: usize, m: usize) -> f64 {
    let ln_fact = ln_factorial_table(n);
    let k = l.k();
    let two_over_kr = 2.0 * (k as f64).powi(1 - r as i32);
    let mut ln_multinomial = ln_fact[n];
    let mut power_sum = 0.0f64;
    for &e in l.entries() {
        ln_multinomial -= ln_fact[e as usize];
        power_sum += (e as f64 / n as f64).powi(r as i32);
    }
    let edge_term = if m == 0 { 0.0 } else { m as f64 * (1.0 - two_over_kr + power_sum).ln() };
    ln_multinomial + edge_term
}
