//! Scaling benchmark for the front end of the polynomial-XL pipeline: wall
//! time of Multiply + Linearize(1) on square systems over GF(2^4), next to
//! the operation-count prediction used for the same step.

use std::time::Instant;

use serde::Serialize;

use crate::estimate::{self, log2_big};
use crate::field::FieldContext;
use crate::instance::gen_planted;
use crate::macaulay::{build_block_macaulay, RowSelection};
use crate::pxl::{linearize1, Linearize1Options};

#[derive(Debug, Clone, Serialize)]
pub struct BenchPoint {
    pub n: usize,
    pub k: usize,
    pub degree: u32,
    pub alpha_estimate: String,
    pub seconds: f64,
    /// log2 of k^2 * alpha * C(n-k+D, D) * C(n+D, D)
    pub log2_predicted_ops: f64,
    pub timed_out: bool,
}

#[derive(Debug)]
pub enum BenchError {
    Estimate(estimate::EstimateError),
    Build(String),
}

impl std::fmt::Display for BenchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchError::Estimate(e) => write!(f, "{e}"),
            BenchError::Build(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for BenchError {}

/// Time Multiply + Linearize(1) for one square instance over GF(2^4) with
/// the estimator-chosen k.
pub fn bench_front_point(n: usize, seed: u64, timeout_secs: f64) -> Result<BenchPoint, BenchError> {
    let q = 16u64;
    let report = estimate::cost_pxl(n, n, q, estimate::OMEGA_DEFAULT);
    let row = report.best_pxl().ok_or_else(|| BenchError::Build("no feasible k".into()))?;
    let (k, degree) = (row.k, row.degree);
    let nv = n - k;
    let predicted = ((k * k) as f64).log2()
        + log2_big(&row.alpha)
        + log2_big(&estimate::binom((nv + degree as usize) as u64, degree as u64))
        + log2_big(&estimate::binom((n + degree as usize) as u64, degree as u64));

    let ctx = FieldContext::new(2, 4, None).map_err(|e| BenchError::Build(e.to_string()))?;
    let (sys, _z) = gen_planted(&ctx, n, n, seed);

    let start = Instant::now();
    let block = build_block_macaulay(&sys, k, degree, &RowSelection::default(), seed)
        .map_err(|e| BenchError::Build(e.to_string()))?;
    let res = linearize1(block, &Linearize1Options::default());
    let seconds = start.elapsed().as_secs_f64();
    let timed_out = seconds > timeout_secs;
    let _ = res.alpha_actual;

    Ok(BenchPoint {
        n,
        k,
        degree,
        alpha_estimate: row.alpha.to_string(),
        seconds,
        log2_predicted_ops: predicted,
        timed_out,
    })
}

/// Sweep n over a range of square systems and collect one point per n.
pub fn bench_front_sweep(
    lo: usize,
    hi: usize,
    seed: u64,
    timeout_secs: f64,
) -> Vec<Result<BenchPoint, BenchError>> {
    (lo..=hi).map(|n| bench_front_point(n, seed.wrapping_add(n as u64), timeout_secs)).collect()
}

pub fn csv_header() -> &'static str {
    "n,k,D,seconds,log2_predicted_ops"
}

pub fn csv_row(p: &BenchPoint) -> String {
    format!("{},{},{},{:.3},{:.2}", p.n, p.k, p.degree, p.seconds, p.log2_predicted_ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_point_runs() {
        let p = bench_front_point(8, 1, 60.0).unwrap();
        assert_eq!(p.n, 8);
        assert!(p.seconds >= 0.0);
        assert!(p.log2_predicted_ops > 0.0);
    }
}
