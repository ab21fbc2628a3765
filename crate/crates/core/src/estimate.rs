//! Analytical engine: truncated power-series coefficients, degree formulas,
//! residual-size and complexity estimates for XL, hybrid XL, hybrid
//! Wiedemann XL and polynomial XL, plus the recursive worst-case degree
//! bound used to justify termination.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Hard cap for degree scans; series that stay positive this long are
/// reported as non-terminating.
pub const DEGREE_SCAN_CAP: u32 = 200;

/// Default matrix-multiplication exponent for cost formulas.
pub const OMEGA_DEFAULT: f64 = 2.37;

/// Candidate exponents tried by the calibration in the acceptance run.
pub const OMEGA_CANDIDATES: [f64; 4] = [2.0, 2.37, 2.8074, 3.0];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EstimateError {
    /// Series coefficients stayed positive up to the scan cap (e.g. m = nvars).
    NonTerminating { nvars: usize, m: usize },
    KOutOfRange { k: usize, n: usize, m: usize },
    Underdetermined { nvars: usize, m: usize },
}

impl fmt::Display for EstimateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimateError::NonTerminating { nvars, m } => write!(
                f,
                "degree scan did not terminate for nvars={nvars}, m={m} (cap {DEGREE_SCAN_CAP})"
            ),
            EstimateError::KOutOfRange { k, n, m } => {
                write!(f, "k={k} out of range for n={n}, m={m}")
            }
            EstimateError::Underdetermined { nvars, m } => {
                write!(f, "need m >= nvars, got nvars={nvars}, m={m}")
            }
        }
    }
}

impl std::error::Error for EstimateError {}

/// Exact binomial coefficient.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial with a big top argument.
pub fn binom_big(n: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= i + 1;
    }
    acc
}

/// Coefficient of t^d in (1-t)^a (1+t)^m. Negative `a` is handled through
/// the geometric expansion of (1-t)^{-|a|}; every coefficient is then
/// positive, which is what makes the square case non-terminating.
pub fn series_coefficient(a: i64, m: u64, d: usize) -> BigInt {
    if a >= 0 {
        let a = a as u64;
        let mut acc = BigInt::zero();
        let hi = (a as usize).min(d);
        for i in 0..=hi {
            let term = BigInt::from(binom(a, i as u64) * binom(m, (d - i) as u64));
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    } else {
        let b = (-a) as u64; // (1-t)^{-b} = sum C(b-1+i, i) t^i
        let mut acc = BigInt::zero();
        for i in 0..=d {
            acc += BigInt::from(binom(b - 1 + i as u64, i as u64) * binom(m, (d - i) as u64));
        }
        acc
    }
}

/// Convenience conversion for row-budget arithmetic at construction scale.
pub fn series_coefficient_i128(a: i64, m: u64, d: usize) -> i128 {
    let c = series_coefficient(a, m, d);
    c.to_i128().unwrap_or_else(|| {
        if c.is_negative() {
            i128::MIN / 4
        } else {
            i128::MAX / 4
        }
    })
}

/// The truncated coefficient sequence of (1-t)^a (1+t)^m.
#[derive(Debug, Clone)]
pub struct SeriesCoeffs {
    pub a: i64,
    pub m: u64,
    pub coeffs: Vec<BigInt>,
}

impl SeriesCoeffs {
    pub fn truncated(a: i64, m: u64, bound: usize) -> Self {
        let coeffs = (0..=bound).map(|d| series_coefficient(a, m, d)).collect();
        SeriesCoeffs { a, m, coeffs }
    }
}

fn degree_scan<F: Fn(&BigInt, u32) -> bool>(
    nvars: usize,
    m: usize,
    stop: F,
) -> Result<u32, EstimateError> {
    if m < nvars {
        return Err(EstimateError::Underdetermined { nvars, m });
    }
    if nvars == 0 {
        // Fully guessed system: degree formulas degenerate; scanning is a
        // consistency check, not an XL run.
        return Ok(0);
    }
    let a = m as i64 - nvars as i64 - 1;
    for d in 0..=DEGREE_SCAN_CAP {
        let c = series_coefficient(a, m as u64, d as usize);
        if stop(&c, d) {
            return Ok(d);
        }
    }
    Err(EstimateError::NonTerminating { nvars, m })
}

/// Degree of regularity: least d with a nonpositive series coefficient.
pub fn degree_of_regularity(nvars: usize, m: usize) -> Result<u32, EstimateError> {
    degree_scan(nvars, m, |c, _| !c.is_positive())
}

/// XL solving degree: least d with the series coefficient at most d.
pub fn xl_solving_degree(nvars: usize, m: usize) -> Result<u32, EstimateError> {
    degree_scan(nvars, m, |c, d| *c <= BigInt::from(d))
}

/// Predicted residual size after the one-time partial elimination: the sum
/// of the clamped coefficients of (1-t)^{m-(n-k)} (1+t)^m up to t^D.
pub fn alpha_estimate(n: usize, m: usize, k: usize, degree: u32) -> Result<BigUint, EstimateError> {
    if k > n || n - k > m {
        return Err(EstimateError::KOutOfRange { k, n, m });
    }
    let a = m as i64 - (n - k) as i64;
    let mut acc = BigUint::zero();
    for d in 0..=degree as usize {
        let c = series_coefficient(a, m as u64, d);
        if c.is_positive() {
            acc += c.to_biguint().expect("positive");
        }
    }
    Ok(acc)
}

/// log2 of a big integer, accurate to f64 precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 53 {
        return x.to_f64().expect("fits").log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53 bits");
    top.log2() + shift as f64
}

/// log2 of a sum given the log2 of each addend.
pub fn log2_sum(logs: &[f64]) -> f64 {
    let mx = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return mx;
    }
    mx + logs.iter().map(|l| (l - mx).exp2()).sum::<f64>().log2()
}

/// One k of an XL / hybrid-XL / hybrid-WXL sweep.
#[derive(Debug, Clone, Serialize)]
pub struct HybridCostRow {
    pub k: usize,
    pub degree: u32,
    pub log2_total: f64,
}

/// One k of a PXL sweep: the five cost terms, their sum, and the rough
/// three-term form.
#[derive(Debug, Clone, Serialize)]
pub struct PxlCostRow {
    pub k: usize,
    pub degree: u32,
    #[serde(serialize_with = "ser_biguint")]
    pub alpha: BigUint,
    pub log2_c_d1: f64,
    pub log2_c_d2: f64,
    pub log2_c_d3: f64,
    pub log2_c_fix: f64,
    pub log2_c_li2: f64,
    pub log2_total: f64,
    pub log2_rough: f64,
}

fn ser_biguint<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Algorithm {
    Xl,
    HybridXl,
    HybridWxl,
    Pxl,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algorithm::Xl => "xl",
            Algorithm::HybridXl => "hxl",
            Algorithm::HybridWxl => "hwxl",
            Algorithm::Pxl => "pxl",
        };
        write!(f, "{s}")
    }
}

/// Hybrid XL cost at one k: q^k * C(n-k+D, D)^omega with D the XL solving
/// degree of the fixed system. k = 0 is plain XL.
pub fn cost_hxl_at(n: usize, m: usize, q: u64, k: usize, omega: f64) -> Result<HybridCostRow, EstimateError> {
    let nv = n - k;
    let d = xl_solving_degree(nv, m)?;
    let total = k as f64 * (q as f64).log2() + omega * log2_big(&binom((nv + d as usize) as u64, d as u64));
    Ok(HybridCostRow { k, degree: d, log2_total: total })
}

/// Hybrid Wiedemann-XL cost at one k. The sparse-solver formula carries its
/// customary constant 3, which the published comparison numbers include.
pub fn cost_hwxl_at(n: usize, m: usize, q: u64, k: usize) -> Result<HybridCostRow, EstimateError> {
    let nv = n - k;
    if nv < 2 {
        return Err(EstimateError::KOutOfRange { k, n, m });
    }
    let d = xl_solving_degree(nv, m)?;
    let total = 3f64.log2()
        + k as f64 * (q as f64).log2()
        + log2_big(&binom(nv as u64, 2))
        + 2.0 * log2_big(&binom((nv + d as usize) as u64, d as u64));
    Ok(HybridCostRow { k, degree: d, log2_total: total })
}

/// PXL cost terms at one k, with D the degree of regularity of the fixed
/// system:
///   C_(d)1 = C(n-k+D, D)^omega
///   C_(d)2 = k^2 (n-k) C(n-k+D, D)^2
///   C_(d)3 = k^2 alpha C(n-k+D, D) C(n+D, D)
///   C_fix  = q^k alpha^2 C(k+D, D)
///   C_li2  = q^k alpha^omega
pub fn cost_pxl_at(n: usize, m: usize, q: u64, k: usize, omega: f64) -> Result<PxlCostRow, EstimateError> {
    if k == 0 || k >= n {
        return Err(EstimateError::KOutOfRange { k, n, m });
    }
    let nv = n - k;
    let d = degree_of_regularity(nv, m)?;
    let alpha = alpha_estimate(n, m, k, d)?;
    if alpha.is_zero() {
        return Err(EstimateError::KOutOfRange { k, n, m });
    }
    let lq = (q as f64).log2();
    let la = log2_big(&alpha);
    let l_nkd = log2_big(&binom((nv + d as usize) as u64, d as u64));
    let l_nd = log2_big(&binom((n + d as usize) as u64, d as u64));
    let l_kd = log2_big(&binom((k + d as usize) as u64, d as u64));
    let c1 = omega * l_nkd;
    let c2 = ((k * k * nv) as f64).log2() + 2.0 * l_nkd;
    let c3 = ((k * k) as f64).log2() + la + l_nkd + l_nd;
    let cfix = k as f64 * lq + 2.0 * la + l_kd;
    let cli2 = k as f64 * lq + omega * la;
    let total = log2_sum(&[c1, c2, c3, cfix, cli2]);
    let rough = log2_sum(&[c3, cfix, cli2]);
    Ok(PxlCostRow {
        k,
        degree: d,
        alpha,
        log2_c_d1: c1,
        log2_c_d2: c2,
        log2_c_d3: c3,
        log2_c_fix: cfix,
        log2_c_li2: cli2,
        log2_total: total,
        log2_rough: rough,
    })
}

/// Selection objective for the PXL k sweep. Over binary extension fields the
/// Fix term is taken at its enumeration-based refinement q^k alpha^2 r D,
/// which matches how the published optima were picked; the reported terms
/// always keep the naive Fix form.
fn pxl_selection_objective(row: &PxlCostRow, q: u64) -> f64 {
    let mut cfix = row.log2_c_fix;
    if q.is_power_of_two() && q > 2 {
        let r = q.trailing_zeros() as f64;
        let la = log2_big(&row.alpha);
        let gray = row.k as f64 * (q as f64).log2() + 2.0 * la + (r * row.degree as f64).log2();
        cfix = cfix.min(gray);
    }
    log2_sum(&[row.log2_c_d1, row.log2_c_d2, row.log2_c_d3, cfix, row.log2_c_li2])
}

/// Full k sweep for one algorithm.
#[derive(Debug, Clone, Serialize)]
pub struct CostReport {
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub q: u64,
    pub omega: f64,
    pub hybrid_rows: Vec<HybridCostRow>,
    pub pxl_rows: Vec<PxlCostRow>,
    /// index into the row list of the selected optimum
    pub best: Option<usize>,
}

impl CostReport {
    pub fn best_hybrid(&self) -> Option<&HybridCostRow> {
        self.best.and_then(|i| self.hybrid_rows.get(i))
    }
    pub fn best_pxl(&self) -> Option<&PxlCostRow> {
        self.best.and_then(|i| self.pxl_rows.get(i))
    }

    pub fn best_log2(&self) -> Option<f64> {
        match self.algorithm {
            Algorithm::Pxl => self.best_pxl().map(|r| r.log2_total),
            _ => self.best_hybrid().map(|r| r.log2_total),
        }
    }
}

pub fn cost_xl(n: usize, m: usize, q: u64, omega: f64) -> Result<CostReport, EstimateError> {
    let row = cost_hxl_at(n, m, q, 0, omega)?;
    Ok(CostReport {
        algorithm: Algorithm::Xl,
        n,
        m,
        q,
        omega,
        hybrid_rows: vec![row],
        pxl_rows: Vec::new(),
        best: Some(0),
    })
}

fn k_min(n: usize, m: usize) -> usize {
    (n + 1).saturating_sub(m)
}

pub fn cost_hxl(n: usize, m: usize, q: u64, omega: f64) -> CostReport {
    let mut rows = Vec::new();
    for k in k_min(n, m)..n {
        if let Ok(r) = cost_hxl_at(n, m, q, k, omega) {
            rows.push(r);
        }
    }
    let best = argmin(rows.iter().map(|r| r.log2_total));
    CostReport { algorithm: Algorithm::HybridXl, n, m, q, omega, hybrid_rows: rows, pxl_rows: Vec::new(), best }
}

pub fn cost_hwxl(n: usize, m: usize, q: u64) -> CostReport {
    let mut rows = Vec::new();
    for k in k_min(n, m)..n {
        if let Ok(r) = cost_hwxl_at(n, m, q, k) {
            rows.push(r);
        }
    }
    let best = argmin(rows.iter().map(|r| r.log2_total));
    CostReport {
        algorithm: Algorithm::HybridWxl,
        n,
        m,
        q,
        omega: 2.0,
        hybrid_rows: rows,
        pxl_rows: Vec::new(),
        best,
    }
}

pub fn cost_pxl(n: usize, m: usize, q: u64, omega: f64) -> CostReport {
    let mut rows = Vec::new();
    for k in k_min(n, m).max(1)..n {
        if let Ok(r) = cost_pxl_at(n, m, q, k, omega) {
            rows.push(r);
        }
    }
    let best = argmin(rows.iter().map(|r| pxl_selection_objective(r, q)));
    CostReport { algorithm: Algorithm::Pxl, n, m, q, omega, hybrid_rows: Vec::new(), pxl_rows: rows, best }
}

fn argmin<I: Iterator<Item = f64>>(it: I) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in it.enumerate() {
        if best.map_or(true, |(_, bv)| v < bv) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// One row of the 24-entry comparison: min-over-k bit complexities of the
/// three hybrid pipelines at q = 2^8.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub n: usize,
    pub m: usize,
    pub hxl_bits: i64,
    pub hwxl_bits: i64,
    pub pxl_bits: i64,
}

/// The full comparison grid: n in {20, 40, 60, 80}, m in {n, 3n/2}, q = 2^8.
pub fn reproduce_table1(omega: f64) -> Vec<ComparisonRow> {
    let q = 256u64;
    let mut rows = Vec::new();
    for &m_factor in &[1.0f64, 1.5] {
        for &n in &[20usize, 40, 60, 80] {
            let m = (n as f64 * m_factor).floor() as usize;
            let hxl = cost_hxl(n, m, q, omega).best_log2().unwrap();
            let hwxl = cost_hwxl(n, m, q).best_log2().unwrap();
            let pxl = cost_pxl(n, m, q, omega).best_log2().unwrap();
            rows.push(ComparisonRow {
                n,
                m,
                hxl_bits: hxl.round() as i64,
                hwxl_bits: hwxl.round() as i64,
                pxl_bits: pxl.round() as i64,
            });
        }
    }
    rows
}

/// Recursive worst-case degree bound guaranteeing that the linearization
/// step produces a Groebner basis. Returns the value at every argument
/// 0 < j <= n-1; the headline value is taken at j = 1 (the largest).
#[derive(Debug, Clone)]
pub struct DubeBound {
    pub n: usize,
    pub d: usize,
    /// values[j - 1] is the bound at argument j.
    pub values: Vec<BigUint>,
}

impl DubeBound {
    pub fn at(&self, j: usize) -> &BigUint {
        &self.values[j - 1]
    }
    pub fn headline(&self) -> &BigUint {
        self.at(1)
    }
}

pub fn dube_bound(n: usize, d: usize) -> DubeBound {
    assert!(n >= 2 && d >= 1);
    let mut vals: Vec<BigUint> = vec![BigUint::zero(); n];
    vals[n - 1] = BigUint::from(2 * d);
    if n >= 3 {
        vals[n - 2] = BigUint::from(d * d + 2 * d);
    }
    for j in (1..=n.saturating_sub(3)).rev() {
        let mut s = BigUint::from(2u32) + binom_big(&vals[j + 1], 2);
        for i in (j + 3)..n {
            s += binom_big(&vals[i], (i - j + 1) as u64);
        }
        vals[j] = s;
    }
    DubeBound { n, d, values: vals[1..].to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_matches_naive_polynomial_multiplication() {
        // multiply out (1-t)^a (1+t)^m with plain convolution and compare
        for (a, m) in [(0i64, 11u64), (1, 4), (5, 12), (26, 30)] {
            let bound = 20usize;
            let mut poly = vec![BigInt::from(1)];
            for _ in 0..a {
                // multiply by (1 - t)
                let mut next = vec![BigInt::zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i] += c;
                    next[i + 1] -= c;
                }
                poly = next;
            }
            for _ in 0..m {
                let mut next = vec![BigInt::zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i] += c;
                    next[i + 1] += c;
                }
                poly = next;
            }
            let s = SeriesCoeffs::truncated(a, m, bound);
            for d in 0..=bound {
                let expect = poly.get(d).cloned().unwrap_or_else(BigInt::zero);
                assert_eq!(s.coeffs[d], expect, "a={a} m={m} d={d}");
            }
        }
    }

    #[test]
    fn degree_formulas_reference_points() {
        assert_eq!(degree_of_regularity(10, 11).unwrap(), 12);
        assert_eq!(xl_solving_degree(10, 11).unwrap(), 11);
        // independent expansion: (1+t)^4 has coefficients 1,4,6,4,1,0 so the
        // first nonpositive is at d = 5 and the first with c <= d at d = 4
        assert_eq!(degree_of_regularity(3, 4).unwrap(), 5);
        assert_eq!(xl_solving_degree(3, 4).unwrap(), 4);
        // heavily overdetermined: coeff at t^2 of (1-t)^26 (1+t)^30 is -20
        assert_eq!(xl_solving_degree(3, 30).unwrap(), 2);
        assert_eq!(degree_of_regularity(3, 30).unwrap(), 2);
        // degenerate nvars = 0 convention
        assert_eq!(degree_of_regularity(0, 5).unwrap(), 0);
    }

    #[test]
    fn square_case_degree_formulas() {
        assert_eq!(
            degree_of_regularity(6, 6).err(),
            Some(EstimateError::NonTerminating { nvars: 6, m: 6 })
        );
        // The geometric handling makes the partial sums cap at 2^m, so the
        // solving-degree condition c <= d first holds exactly at d = 2^m.
        assert_eq!(xl_solving_degree(6, 6).unwrap(), 64);
        assert_eq!(
            degree_of_regularity(8, 8).err(),
            Some(EstimateError::NonTerminating { nvars: 8, m: 8 })
        );
    }

    #[test]
    fn dreg_nonincreasing_in_m() {
        for nv in 2..=12usize {
            let mut prev = u32::MAX;
            for m in (nv + 1)..(nv + 16) {
                let d = degree_of_regularity(nv, m).unwrap();
                assert!(d <= prev, "nv={nv} m={m}: {d} > {prev}");
                prev = d;
            }
        }
    }

    #[test]
    fn solving_degree_at_most_dreg() {
        for nv in 2..=12usize {
            for m in (nv + 1)..(nv + 10) {
                let ds = xl_solving_degree(nv, m).unwrap();
                let dr = degree_of_regularity(nv, m).unwrap();
                assert!(ds <= dr);
            }
        }
    }

    #[test]
    fn alpha_examples() {
        // expand (1-t)(1+t)^4 = 1 + 3t + 2t^2 - 2t^3 - 3t^4 - t^5
        assert_eq!(alpha_estimate(4, 4, 1, 3).unwrap(), BigUint::from(6u32));
        // k = n - m: exponent zero, alpha = sum of binomials
        let a = alpha_estimate(6, 4, 2, 3).unwrap();
        let expect: BigUint = (0..=3u64).map(|d| binom(4, d)).sum();
        assert_eq!(a, expect);
        assert!(alpha_estimate(8, 4, 1, 3).is_err());
    }

    #[test]
    fn cost_terms_monotone_in_degree() {
        // evaluate the raw term formulas at D and D+1
        let (n, m, q, k) = (20usize, 20usize, 256u64, 3usize);
        let nv = n - k;
        for d in 3u32..10 {
            let terms = |d: u32| {
                let alpha = alpha_estimate(n, m, k, d).unwrap();
                let la = log2_big(&alpha);
                let l_nkd = log2_big(&binom((nv + d as usize) as u64, d as u64));
                let l_nd = log2_big(&binom((n + d as usize) as u64, d as u64));
                let l_kd = log2_big(&binom((k + d as usize) as u64, d as u64));
                [
                    2.37 * l_nkd,
                    ((k * k * nv) as f64).log2() + 2.0 * l_nkd,
                    ((k * k) as f64).log2() + la + l_nkd + l_nd,
                    k as f64 * 8.0 + 2.0 * la + l_kd,
                    k as f64 * 8.0 + 2.37 * la,
                ]
            };
            let lo = terms(d);
            let hi = terms(d + 1);
            for (a, b) in lo.iter().zip(&hi) {
                assert!(a <= b, "term fell from {a} to {b} at D={d}");
            }
        }
    }

    #[test]
    fn xl_equals_hybrid_at_k_zero() {
        let x = cost_xl(20, 30, 2, 2.37).unwrap();
        let h = cost_hxl_at(20, 30, 2, 0, 2.37).unwrap();
        assert_eq!(x.hybrid_rows[0].log2_total, h.log2_total);
        assert_eq!(x.hybrid_rows[0].degree, h.degree);
    }

    #[test]
    fn cfix_direct_value() {
        // q=7, k=1, alpha=6, D=3: 7 * 36 * C(4,3) = 1008
        let v = 7u64 * 36 * 4;
        assert_eq!(v, 1008);
        let log = 1.0 * (7f64).log2() + 2.0 * (6f64).log2() + log2_big(&binom(4, 3));
        assert!((log - (1008f64).log2()).abs() < 1e-9);
    }

    #[test]
    fn dube_base_cases_and_reference() {
        let b = dube_bound(5, 2);
        assert_eq!(*b.at(4), BigUint::from(4u32)); // 2d
        assert_eq!(*b.at(3), BigUint::from(8u32)); // d^2 + 2d
        let b = dube_bound(11, 2);
        assert_eq!(*b.at(10), BigUint::from(4u32));
        assert_eq!(*b.at(9), BigUint::from(8u32));
        assert_eq!(*b.at(8), BigUint::from(30u32));
        assert_eq!(*b.at(7), BigUint::from(438u32));
        assert_eq!(*b.at(6), BigUint::from(95775u32));
        assert_eq!(*b.at(5), BigUint::from(4586404888u64));
        // the j = 2 value has 76 decimal digits; the j = 1 headline has 151
        assert_eq!(b.at(2).to_string().len(), 76);
        assert_eq!(b.headline().to_string().len(), 151);
    }

    #[test]
    fn big_log2_accuracy() {
        let x = BigUint::from(1u32) << 200;
        assert!((log2_big(&x) - 200.0).abs() < 1e-9);
        assert_eq!(log2_big(&BigUint::zero()), f64::NEG_INFINITY);
    }
}
