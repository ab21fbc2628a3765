//! The XL pipeline and its hybrid variants: multiply, linearize over the
//! elimination column order, extract a trailing univariate row, scan its
//! roots, substitute, repeat. Hybrids enumerate guesses for a prefix of the
//! variables; the Wiedemann variant solves the linearized system as a
//! squared sparse system instead of running dense elimination.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use crate::estimate::{self, EstimateError};
use crate::field::{Fe, FieldContext};
use crate::linalg::{rref, EchelonResult, SparseMatrix};
use crate::macaulay::{build_macaulay, build_shift};
use crate::poly::{enumerate_monomials, Monomial, MonomialOrder, Polynomial, QuadraticSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolverAlgorithm {
    Xl,
    HybridXl,
    HybridWxl,
    Pxl,
}

impl fmt::Display for SolverAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolverAlgorithm::Xl => "xl",
            SolverAlgorithm::HybridXl => "hxl",
            SolverAlgorithm::HybridWxl => "hwxl",
            SolverAlgorithm::Pxl => "pxl",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    pub algorithm: SolverAlgorithm,
    /// Guessed-variable count for the hybrids; None picks the estimator optimum.
    pub k: Option<usize>,
    /// Linearization degree; None derives it from the degree formulas.
    pub degree: Option<u32>,
    pub seed: u64,
    /// Variable eliminated last (global index); None means the last one.
    pub elim_var: Option<usize>,
    /// Worker threads for the guess loop; 1 keeps runs deterministic.
    pub jobs: usize,
    /// How far past the derived degree the solver may escalate.
    pub degree_escalation: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            algorithm: SolverAlgorithm::Xl,
            k: None,
            degree: None,
            seed: 0,
            elim_var: None,
            jobs: 1,
            degree_escalation: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Solved,
    NoSolution,
    DegreeTooLow,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SolveStats {
    pub guesses_tried: u64,
    pub degree: u32,
    pub escalations: u32,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    pub alpha: Option<usize>,
    pub wall_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub solution: Option<Vec<Fe>>,
    pub stats: SolveStats,
}

impl SolveOutcome {
    fn solved(solution: Vec<Fe>, stats: SolveStats) -> Self {
        SolveOutcome { status: SolveStatus::Solved, solution: Some(solution), stats }
    }
    fn status(status: SolveStatus, stats: SolveStats) -> Self {
        SolveOutcome { status, solution: None, stats }
    }
}

#[derive(Debug)]
pub enum SolveError {
    Config(String),
    Estimate(EstimateError),
    ZeroPolynomial,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Config(s) => write!(f, "configuration error: {s}"),
            SolveError::Estimate(e) => write!(f, "estimator error: {e}"),
            SolveError::ZeroPolynomial => write!(f, "root finding on the zero polynomial"),
        }
    }
}

impl std::error::Error for SolveError {}

impl From<EstimateError> for SolveError {
    fn from(e: EstimateError) -> Self {
        SolveError::Estimate(e)
    }
}

/// Exact root set of a univariate polynomial by exhaustive evaluation
/// (q <= 2^16 keeps the scan trivial).
pub fn find_univariate_roots(p: &Polynomial, var: usize) -> Result<Vec<Fe>, SolveError> {
    if p.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    assert!(p.is_univariate_in(var), "polynomial has support outside x{}", var + 1);
    let ctx = p.ctx().clone();
    let coeffs: BTreeMap<u32, Fe> = p.terms_desc().map(|(m, c)| (m.degree(), c)).collect();
    Ok(scan_roots(&ctx, &coeffs))
}

fn scan_roots(ctx: &FieldContext, coeffs: &BTreeMap<u32, Fe>) -> Vec<Fe> {
    let mut out = Vec::new();
    for v in 0..ctx.q() {
        let x = Fe(v as u16);
        let mut acc = Fe(0);
        for (&d, &c) in coeffs {
            acc = ctx.add(acc, ctx.mul(c, ctx.pow(x, d as u64)));
        }
        if acc.0 == 0 {
            out.push(x);
        }
    }
    out
}

/// What the trailing block of an echelonized matrix says about x_e.
pub(crate) enum TrailingRow {
    /// A row reading c = 0 with c nonzero constant: the system is inconsistent.
    Contradiction,
    /// A univariate polynomial, coefficients keyed by degree.
    Univariate(BTreeMap<u32, Fe>),
    /// No row confined to the trailing block: degree too low.
    NoRow,
}

/// Inspect the last nonzero row of an RREF whose columns end with the pure
/// powers of one variable.
pub(crate) fn extract_trailing_univariate(
    ech: &EchelonResult,
    columns: &[Monomial],
    var: usize,
) -> TrailingRow {
    if ech.rank == 0 {
        return TrailingRow::NoRow;
    }
    let mut trailing_start = columns.len();
    while trailing_start > 0 && columns[trailing_start - 1].is_pure_power_of(var) {
        trailing_start -= 1;
    }
    let last = ech.rank - 1;
    let pivot = ech.pivots[last];
    if pivot < trailing_start {
        return TrailingRow::NoRow;
    }
    let row = ech.matrix.row(last);
    let mut coeffs = BTreeMap::new();
    for (j, c) in columns.iter().enumerate().skip(trailing_start) {
        if row[j].0 != 0 {
            coeffs.insert(c.degree(), row[j]);
        }
    }
    if coeffs.keys().all(|&d| d == 0) {
        TrailingRow::Contradiction
    } else {
        TrailingRow::Univariate(coeffs)
    }
}

/// Solve with plain XL. Requires n <= m. Square systems (n = m) have no
/// finite generic solving degree, so the first variable is specialized and
/// each value is handled as an overdetermined run.
pub fn xl_solve(sys: &QuadraticSystem, cfg: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    if sys.n() > sys.m() {
        return Err(SolveError::Config(format!(
            "xl needs n <= m, got n={} m={}",
            sys.n(),
            sys.m()
        )));
    }
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let sol = if sys.n() > 0 && sys.n() == sys.m() {
        let mut found = None;
        for (idx, guess) in GuessIter::new(sys.ctx().q() as u64, 1, cfg.seed).enumerate() {
            stats.guesses_tried = idx as u64 + 1;
            let reduced = sys.substitute_prefix(&[Fe(guess[0] as u16)]);
            if let Some(mut s) = xl_search(&reduced, cfg, &mut stats)? {
                let mut full = vec![Fe(guess[0] as u16)];
                full.append(&mut s);
                if sys.is_root(&full) {
                    found = Some(full);
                    break;
                }
            }
        }
        found
    } else {
        xl_search(sys, cfg, &mut stats)?
    };
    stats.wall_ms = start.elapsed().as_millis();
    match sol {
        Some(s) => {
            debug_assert!(sys.is_root(&s));
            Ok(SolveOutcome::solved(s, stats))
        }
        None => {
            let status = if stats.escalations >= cfg.degree_escalation && stats.degree > 0 {
                SolveStatus::DegreeTooLow
            } else {
                SolveStatus::NoSolution
            };
            Ok(SolveOutcome::status(status, stats))
        }
    }
}

/// Every solution found by exploring all univariate roots at every level;
/// used by the oracle-equivalence tests.
pub fn xl_enumerate(sys: &QuadraticSystem, cfg: &SolverConfig) -> Result<Vec<Vec<Fe>>, SolveError> {
    let mut stats = SolveStats::default();
    let mut out = Vec::new();
    if sys.n() > 0 && sys.n() == sys.m() {
        for guess in GuessIter::new(sys.ctx().q() as u64, 1, cfg.seed) {
            let g = Fe(guess[0] as u16);
            let reduced = sys.substitute_prefix(&[g]);
            for s in xl_search_all(&reduced, cfg, &mut stats)? {
                let mut full = vec![g];
                full.extend(s);
                if sys.is_root(&full) && !out.contains(&full) {
                    out.push(full);
                }
            }
        }
    } else {
        out = xl_search_all(sys, cfg, &mut stats)?
            .into_iter()
            .filter(|s| sys.is_root(s))
            .collect();
    }
    Ok(out)
}

/// First solution of an overdetermined (n < m) or tiny system, or None.
fn xl_search(
    sys: &QuadraticSystem,
    cfg: &SolverConfig,
    stats: &mut SolveStats,
) -> Result<Option<Vec<Fe>>, SolveError> {
    let mut sols = xl_core(sys, cfg, stats, false)?;
    Ok(sols.pop())
}

fn xl_search_all(
    sys: &QuadraticSystem,
    cfg: &SolverConfig,
    stats: &mut SolveStats,
) -> Result<Vec<Vec<Fe>>, SolveError> {
    xl_core(sys, cfg, stats, true)
}

fn xl_core(
    sys: &QuadraticSystem,
    cfg: &SolverConfig,
    stats: &mut SolveStats,
    want_all: bool,
) -> Result<Vec<Vec<Fe>>, SolveError> {
    let ctx = sys.ctx().clone();
    let n = sys.n();
    if n == 0 {
        let consistent = sys.polys().iter().all(|p| p.is_zero());
        return Ok(if consistent { vec![Vec::new()] } else { Vec::new() });
    }
    if n == 1 {
        // Intersect the root sets of the univariate polynomials directly.
        let mut roots = Vec::new();
        'vals: for v in 0..ctx.q() {
            let x = [Fe(v as u16)];
            for p in sys.polys() {
                if p.evaluate(&x).0 != 0 {
                    continue 'vals;
                }
            }
            roots.push(vec![Fe(v as u16)]);
            if !want_all {
                break;
            }
        }
        return Ok(roots);
    }
    // Overdetermined multivariate case.
    debug_assert!(sys.m() > n);
    let elim = cfg.elim_var.filter(|&e| e < n).unwrap_or(n - 1);
    let base_degree = match cfg.degree {
        Some(d) => d.max(2),
        None => estimate::xl_solving_degree(n, sys.m())?.max(2),
    };
    let mut out = Vec::new();
    for bump in 0..=cfg.degree_escalation {
        let degree = base_degree + bump;
        if bump > 0 {
            stats.escalations += 1;
        }
        stats.degree = stats.degree.max(degree);
        let shift = build_shift(sys, degree).map_err(|e| SolveError::Config(e.to_string()))?;
        let columns = enumerate_monomials(n, 0, degree, &MonomialOrder::XlElimination { var: elim });
        let mac = build_macaulay(sys, &shift, &columns).map_err(|e| SolveError::Config(e.to_string()))?;
        stats.matrix_rows = stats.matrix_rows.max(mac.matrix.rows());
        stats.matrix_cols = stats.matrix_cols.max(mac.matrix.cols());
        let ech = rref(&mac.matrix);
        match extract_trailing_univariate(&ech, &columns, elim) {
            TrailingRow::Contradiction => return Ok(Vec::new()),
            TrailingRow::NoRow => continue,
            TrailingRow::Univariate(coeffs) => {
                for root in scan_roots(&ctx, &coeffs) {
                    let reduced = sys.substitute_remove(elim, root);
                    let sub = xl_core(&reduced, &child_cfg(cfg), stats, want_all)?;
                    for mut s in sub {
                        s.insert(elim, root);
                        if sys.is_root(&s) {
                            if !want_all {
                                return Ok(vec![s]);
                            }
                            if !out.contains(&s) {
                                out.push(s);
                            }
                        }
                    }
                }
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Child recursion keeps everything except an explicit degree, which must be
/// recomputed for the reduced system.
fn child_cfg(cfg: &SolverConfig) -> SolverConfig {
    SolverConfig { degree: None, elim_var: None, ..cfg.clone() }
}

/// Iterate all of F_q^k starting from a seeded offset, lexicographic with
/// wraparound. Yields little-endian digit vectors.
pub struct GuessIter {
    q: u64,
    k: usize,
    total: u64,
    start: u64,
    next: u64,
}

impl GuessIter {
    pub fn new(q: u64, k: usize, seed: u64) -> Self {
        let total = q.checked_pow(k as u32).expect("guess space overflow");
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0ff5);
        let start = if total == 0 { 0 } else { rng.gen_range(0..total) };
        GuessIter { q, k, total, start, next: 0 }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn decode(&self, index: u64) -> Vec<u64> {
        let mut digits = Vec::with_capacity(self.k);
        let mut t = (self.start + index) % self.total;
        for _ in 0..self.k {
            digits.push(t % self.q);
            t /= self.q;
        }
        digits
    }
}

impl Iterator for GuessIter {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        if self.next >= self.total {
            return None;
        }
        let g = self.decode(self.next);
        self.next += 1;
        Some(g)
    }
}

/// Hybrid solve: enumerate guesses for x_1..x_k and run the chosen inner
/// solver on each reduced system. The first verified solution wins.
pub fn hybrid_solve(sys: &QuadraticSystem, cfg: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    if sys.n() > sys.m() {
        return Err(SolveError::Config(format!(
            "hybrid needs n <= m, got n={} m={}",
            sys.n(),
            sys.m()
        )));
    }
    let n = sys.n();
    let q = sys.ctx().q() as u64;
    let wiedemann = cfg.algorithm == SolverAlgorithm::HybridWxl;
    let k = match cfg.k {
        Some(k) => k,
        None => {
            let rep = if wiedemann {
                estimate::cost_hwxl(n, sys.m(), q)
            } else {
                estimate::cost_hxl(n, sys.m(), q, estimate::OMEGA_DEFAULT)
            };
            rep.best_hybrid().map(|r| r.k).unwrap_or(1).max(1)
        }
    };
    if k == 0 || k >= n {
        return Err(SolveError::Config(format!("hybrid needs 1 <= k < n, got k={k}, n={n}")));
    }
    let start = Instant::now();
    let jobs = cfg.jobs.max(1);
    let iter = GuessIter::new(q, k, cfg.seed);
    let total = iter.total();

    let run_guess = |index: u64, stats: &mut SolveStats| -> Result<Option<Vec<Fe>>, SolveError> {
        let digits = iter.decode(index);
        let guess: Vec<Fe> = digits.iter().map(|&d| Fe(d as u16)).collect();
        let reduced = sys.substitute_prefix(&guess);
        let inner = if wiedemann {
            wxl_guess_solve(&reduced, cfg, index, stats)?
        } else {
            xl_search(&reduced, cfg, stats)?
        };
        if let Some(tail) = inner {
            let mut full = guess;
            full.extend(tail);
            if sys.is_root(&full) {
                return Ok(Some(full));
            }
        }
        Ok(None)
    };

    if jobs == 1 {
        let mut stats = SolveStats::default();
        for index in 0..total {
            stats.guesses_tried += 1;
            if let Some(sol) = run_guess(index, &mut stats)? {
                stats.wall_ms = start.elapsed().as_millis();
                return Ok(SolveOutcome::solved(sol, stats));
            }
        }
        let mut stats = stats;
        stats.wall_ms = start.elapsed().as_millis();
        return Ok(SolveOutcome::status(SolveStatus::NoSolution, stats));
    }

    // Worker pool over disjoint guess slices; the first verified solution
    // cancels the rest.
    let found = AtomicBool::new(false);
    let result: Mutex<Option<(Vec<Fe>, SolveStats)>> = Mutex::new(None);
    let tried = std::sync::atomic::AtomicU64::new(0);
    std::thread::scope(|scope| {
        for w in 0..jobs {
            let found = &found;
            let result = &result;
            let tried = &tried;
            let run_guess = &run_guess;
            scope.spawn(move || {
                let mut stats = SolveStats::default();
                let mut index = w as u64;
                while index < total && !found.load(AtomicOrdering::Relaxed) {
                    tried.fetch_add(1, AtomicOrdering::Relaxed);
                    match run_guess(index, &mut stats) {
                        Ok(Some(sol)) => {
                            let mut slot = result.lock().unwrap();
                            if slot.is_none() {
                                *slot = Some((sol, stats.clone()));
                            }
                            found.store(true, AtomicOrdering::Relaxed);
                            break;
                        }
                        Ok(None) => {}
                        Err(_) => break,
                    }
                    index += jobs as u64;
                }
            });
        }
    });
    let mut stats = SolveStats::default();
    stats.guesses_tried = tried.load(AtomicOrdering::Relaxed);
    stats.wall_ms = start.elapsed().as_millis();
    match result.into_inner().unwrap() {
        Some((sol, mut s)) => {
            s.guesses_tried = stats.guesses_tried;
            s.wall_ms = stats.wall_ms;
            Ok(SolveOutcome::solved(sol, s))
        }
        None => Ok(SolveOutcome::status(SolveStatus::NoSolution, stats)),
    }
}

/// One Wiedemann-XL guess: linearize the fixed system, square it by moving
/// the constant column to the right-hand side and sampling N rows, then read
/// the candidate assignment off the degree-one monomial values.
fn wxl_guess_solve(
    sub: &QuadraticSystem,
    cfg: &SolverConfig,
    guess_index: u64,
    stats: &mut SolveStats,
) -> Result<Option<Vec<Fe>>, SolveError> {
    let nv = sub.n();
    if nv == 0 {
        return Ok(if sub.polys().iter().all(|p| p.is_zero()) { Some(Vec::new()) } else { None });
    }
    if nv == 1 {
        return xl_search(sub, cfg, stats);
    }
    let ctx = sub.ctx().clone();
    let m = sub.m();
    let base_degree = match cfg.degree {
        Some(d) => d.max(2),
        None => estimate::xl_solving_degree(nv, m)?.max(2),
    };
    for bump in 0..=cfg.degree_escalation {
        let degree = base_degree + bump;
        if bump > 0 {
            stats.escalations += 1;
        }
        stats.degree = stats.degree.max(degree);
        let columns = enumerate_monomials(nv, 0, degree, &MonomialOrder::GradedLex);
        let ncols = columns.len();
        let nsq = ncols - 1; // constant column becomes the right-hand side
        let shift = build_shift(sub, degree).map_err(|e| SolveError::Config(e.to_string()))?;
        if shift.len() < nsq {
            continue;
        }
        // Stratified row sample: per-degree targets from the series rule,
        // topped up from the highest degrees.
        let sel = select_rows_stratified(nv, m, &shift, nsq, cfg.seed ^ guess_index);
        if sel.len() < nsq {
            continue;
        }
        let mut a = SparseMatrix::new(ctx.clone(), nsq, nsq);
        let mut b = vec![Fe(0); nsq];
        let col_of = |mono: &Monomial| columns.iter().position(|c| c == mono).unwrap();
        for (row_idx, &si) in sel.iter().enumerate().take(nsq) {
            let (t, pi) = &shift[si];
            let prod = sub.polys()[*pi].mul_monomial(t);
            let mut cols: Vec<(u32, Fe)> = Vec::new();
            for (mono, c) in prod.terms_desc() {
                let j = col_of(mono);
                if j == ncols - 1 {
                    b[row_idx] = ctx.neg(c);
                } else {
                    cols.push((j as u32, c));
                }
            }
            cols.sort_unstable_by_key(|&(j, _)| j);
            for (j, c) in cols {
                a.push_entry(row_idx, j as usize, c);
            }
        }
        stats.matrix_rows = stats.matrix_rows.max(nsq);
        stats.matrix_cols = stats.matrix_cols.max(nsq);
        match crate::linalg::wiedemann_solve(&a, &b, cfg.seed ^ guess_index ^ 0xabcd) {
            Ok(x) => {
                // Monomial values of x_1..x_nv sit at the degree-one columns.
                let mut candidate = vec![Fe(0); nv];
                for (j, mono) in columns.iter().enumerate().take(nsq) {
                    if mono.degree() == 1 {
                        let var = (0..nv).find(|&i| mono.exp(i) == 1).unwrap();
                        candidate[var] = x[j];
                    }
                }
                if sub.is_root(&candidate) {
                    return Ok(Some(candidate));
                }
                return Ok(None);
            }
            Err(_) => continue, // singular or unlucky: escalate / give up on this guess
        }
    }
    Ok(None)
}

/// Pick `want` rows of the shift with per-degree budgets matching the
/// generic-rank rule, topping up from the top degree.
fn select_rows_stratified(
    nv: usize,
    m: usize,
    shift: &[(Monomial, usize)],
    want: usize,
    seed: u64,
) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x0dd5_eed5);
    // bucket row indices by product degree
    let mut buckets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, (t, _)) in shift.iter().enumerate() {
        buckets.entry(t.degree() + 2).or_default().push(i);
    }
    let a = m as i64 - nv as i64;
    let mut chosen: Vec<usize> = Vec::new();
    let mut leftover: Vec<usize> = Vec::new();
    for (&d, rows) in buckets.iter() {
        let td = estimate::binom((nv + d as usize - 1) as u64, d as u64);
        let coeff = estimate::series_coefficient_i128(a, m as u64, d as usize);
        let td = td.to_string().parse::<i128>().unwrap_or(i128::MAX / 4);
        let target = ((td - coeff).max(0) as usize).min(rows.len());
        let mut rows = rows.clone();
        rows.shuffle(&mut rng);
        chosen.extend(rows.drain(..target));
        leftover.extend(rows);
    }
    // top up from the highest degrees first
    leftover.sort_unstable_by_key(|&i| std::cmp::Reverse(shift[i].0.degree()));
    leftover.reverse(); // pop() now yields the highest degrees first
    while chosen.len() < want {
        match leftover.pop() {
            Some(i) => chosen.push(i),
            None => break,
        }
    }
    chosen.truncate(want);
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use crate::instance::{brute_force_roots, gen_planted};
    use crate::poly::Polynomial;

    fn gf7() -> std::sync::Arc<FieldContext> {
        FieldContext::prime(7).unwrap()
    }

    #[test]
    fn univariate_roots_examples() {
        let ctx = gf7();
        // x^2 + 5x + 6 over GF(7): scan says 4 and 5
        let p = Polynomial::from_terms(
            ctx.clone(),
            1,
            [
                (Monomial::new(vec![2]), Fe(1)),
                (Monomial::new(vec![1]), Fe(5)),
                (Monomial::new(vec![0]), Fe(6)),
            ],
        );
        assert_eq!(find_univariate_roots(&p, 0).unwrap(), vec![Fe(4), Fe(5)]);
        // x^q - x vanishes everywhere
        let mut xq = Polynomial::zero(ctx.clone(), 1);
        xq.add_term(Monomial::new(vec![7]), Fe(1));
        xq.add_term(Monomial::new(vec![1]), Fe(6));
        assert_eq!(find_univariate_roots(&xq, 0).unwrap().len(), 7);
        // constants have no roots; zero polynomial is an error
        let c = Polynomial::constant(ctx.clone(), 1, Fe(3));
        assert!(find_univariate_roots(&c, 0).unwrap().is_empty());
        assert!(find_univariate_roots(&Polynomial::zero(ctx, 1), 0).is_err());
    }

    #[test]
    fn planted_square_instance_solved() {
        let ctx = gf7();
        let (sys, z) = gen_planted(&ctx, 4, 4, 11);
        let cfg = SolverConfig { algorithm: SolverAlgorithm::Xl, seed: 3, ..Default::default() };
        let out = xl_solve(&sys, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::Solved);
        let sol = out.solution.unwrap();
        assert!(sys.is_root(&sol));
        let _ = z;
    }

    #[test]
    fn inconsistent_constant_system() {
        let ctx = gf7();
        let one = Polynomial::constant(ctx.clone(), 2, Fe(1));
        let z = Polynomial::zero(ctx.clone(), 2);
        let sys = crate::poly::QuadraticSystem::new(ctx, 2, vec![one, z.clone(), z]).unwrap();
        let cfg = SolverConfig::default();
        let out = xl_solve(&sys, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::NoSolution);
    }

    #[test]
    fn hybrid_finds_planted_and_order_independent() {
        let ctx = gf7();
        let (sys, _z) = gen_planted(&ctx, 5, 6, 21);
        for seed in [0u64, 9, 100] {
            let cfg = SolverConfig {
                algorithm: SolverAlgorithm::HybridXl,
                k: Some(2),
                seed,
                ..Default::default()
            };
            let out = hybrid_solve(&sys, &cfg).unwrap();
            assert_eq!(out.status, SolveStatus::Solved);
            assert!(sys.is_root(&out.solution.unwrap()));
        }
    }

    #[test]
    fn hybrid_reports_no_solution_when_unsatisfiable() {
        let ctx = FieldContext::prime(3).unwrap();
        let (sys, _z) = gen_planted(&ctx, 3, 4, 2);
        // flip one equation to a nonzero constant shift, then check against
        // brute force that nothing survives
        let mut polys: Vec<Polynomial> = sys.polys().to_vec();
        polys[0].add_term(Monomial::one(3), Fe(1));
        let bad = crate::poly::QuadraticSystem::new(ctx.clone(), 3, polys).unwrap();
        if brute_force_roots(&bad).is_empty() {
            let cfg = SolverConfig {
                algorithm: SolverAlgorithm::HybridXl,
                k: Some(1),
                ..Default::default()
            };
            let out = hybrid_solve(&bad, &cfg).unwrap();
            assert_eq!(out.status, SolveStatus::NoSolution);
        }
    }

    #[test]
    fn wxl_hybrid_solves_planted() {
        let ctx = FieldContext::new(2, 4, None).unwrap();
        let (sys, _z) = gen_planted(&ctx, 4, 5, 7);
        let cfg = SolverConfig {
            algorithm: SolverAlgorithm::HybridWxl,
            k: Some(1),
            seed: 5,
            ..Default::default()
        };
        let out = hybrid_solve(&sys, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::Solved);
        assert!(sys.is_root(&out.solution.unwrap()));
    }

    #[test]
    fn enumeration_matches_brute_force_small() {
        let ctx = gf7();
        for seed in 0..3u64 {
            let (sys, _z) = gen_planted(&ctx, 3, 4, seed);
            let cfg = SolverConfig::default();
            let mut found = xl_enumerate(&sys, &cfg).unwrap();
            let mut expect = brute_force_roots(&sys);
            found.sort();
            expect.sort();
            assert_eq!(found, expect, "seed {seed}");
        }
    }
}
