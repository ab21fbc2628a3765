//! Polynomial XL: build the Macaulay matrix over F_q[x_1..x_k], eliminate
//! most of it once while the guessed variables are still symbolic, and run
//! only a small residual system per guess.
//!
//! The one-time pass works block by block from the top degree down: the
//! constant diagonal block is echelonized over F_q, the same row operations
//! are applied to the two polynomial blocks to its right, and the resulting
//! unit pivots clear their columns out of every row that did not receive a
//! pivot. What survives is an approximately alpha x alpha matrix of
//! polynomials in the guessed variables; each guess only evaluates and
//! echelonizes that residual.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;
use std::time::Instant;

use crate::estimate::{self, EstimateError};
use crate::field::{Fe, FieldContext};
use crate::linalg::{rref, rref_in, DenseMatrix, EchelonResult};
use crate::macaulay::{build_block_macaulay, BlockMacaulay, RowSelection};
use crate::poly::{Monomial, MonomialOrder, Polynomial, QuadraticSystem};
use crate::xl::{
    extract_trailing_univariate, GuessIter, SolveError, SolveOutcome, SolveStats, SolveStatus,
    SolverConfig, TrailingRow,
};

/// Index table for monomials in the k guessed variables up to a degree cap,
/// with a precomputed product table.
pub struct KTable {
    k: usize,
    cap: u32,
    monos: Vec<Monomial>,
    index: HashMap<Vec<u8>, u32>,
    mul: Vec<u32>,
}

const MUL_OVERFLOW: u32 = u32::MAX;

impl KTable {
    pub fn new(k: usize, cap: u32) -> Self {
        let mut monos = crate::poly::enumerate_monomials(k, 0, cap, &MonomialOrder::GradedLex);
        monos.reverse(); // ascending: index 0 is the constant monomial
        let index: HashMap<Vec<u8>, u32> =
            monos.iter().enumerate().map(|(i, m)| (m.exps().to_vec(), i as u32)).collect();
        let len = monos.len();
        let mut mul = vec![MUL_OVERFLOW; len * len];
        for i in 0..len {
            for j in i..len {
                if monos[i].degree() + monos[j].degree() <= cap {
                    let prod = monos[i].mul(&monos[j]);
                    let idx = index[prod.exps()];
                    mul[i * len + j] = idx;
                    mul[j * len + i] = idx;
                }
            }
        }
        KTable { k, cap, monos, index, mul }
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn cap(&self) -> u32 {
        self.cap
    }
    pub fn len(&self) -> usize {
        self.monos.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
    pub fn mono(&self, i: u32) -> &Monomial {
        &self.monos[i as usize]
    }
    pub fn degree_of(&self, i: u32) -> u32 {
        self.monos[i as usize].degree()
    }

    fn mul_index(&self, i: u32, j: u32) -> u32 {
        self.mul[i as usize * self.monos.len() + j as usize]
    }

    /// Evaluate every table monomial at a point, for fast entry evaluation.
    pub fn monomial_values(&self, ctx: &FieldContext, point: &[Fe]) -> Vec<Fe> {
        self.monos.iter().map(|m| m.evaluate(ctx, point)).collect()
    }
}

/// Sparse polynomial over a `KTable`: (monomial index, coefficient) sorted
/// by index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KPoly(Vec<(u32, Fe)>);

impl KPoly {
    pub fn zero() -> Self {
        KPoly(Vec::new())
    }

    pub fn constant(c: Fe) -> Self {
        if c.0 == 0 {
            KPoly::zero()
        } else {
            KPoly(vec![(0, c)])
        }
    }

    pub fn from_polynomial(p: &Polynomial, table: &KTable) -> Self {
        let mut terms: Vec<(u32, Fe)> =
            p.terms_desc().map(|(m, c)| (table.index[m.exps()], c)).collect();
        terms.sort_unstable_by_key(|&(i, _)| i);
        KPoly(terms)
    }

    pub fn to_polynomial(&self, ctx: &std::sync::Arc<FieldContext>, table: &KTable) -> Polynomial {
        Polynomial::from_terms(
            ctx.clone(),
            table.k(),
            self.0.iter().map(|&(i, c)| (table.mono(i).clone(), c)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.0.len()
    }

    pub fn constant_value(&self) -> Option<Fe> {
        match self.0.as_slice() {
            [] => Some(Fe(0)),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn degree(&self, table: &KTable) -> Option<u32> {
        self.0.iter().map(|&(i, _)| table.degree_of(i)).max()
    }

    pub fn scale(&mut self, ctx: &FieldContext, c: Fe) {
        if c.0 == 0 {
            self.0.clear();
            return;
        }
        for (_, v) in self.0.iter_mut() {
            *v = ctx.mul(*v, c);
        }
    }

    /// self += c * other, merging sorted term lists.
    pub fn add_scaled(&mut self, ctx: &FieldContext, other: &KPoly, c: Fe) {
        if c.0 == 0 || other.0.is_empty() {
            return;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (0usize, 0usize);
        while a < self.0.len() || b < other.0.len() {
            match (self.0.get(a), other.0.get(b)) {
                (Some(&(ia, va)), Some(&(ib, vb))) => {
                    if ia < ib {
                        out.push((ia, va));
                        a += 1;
                    } else if ib < ia {
                        let v = ctx.mul(vb, c);
                        if v.0 != 0 {
                            out.push((ib, v));
                        }
                        b += 1;
                    } else {
                        let v = ctx.add(va, ctx.mul(vb, c));
                        if v.0 != 0 {
                            out.push((ia, v));
                        }
                        a += 1;
                        b += 1;
                    }
                }
                (Some(&(ia, va)), None) => {
                    out.push((ia, va));
                    a += 1;
                }
                (None, Some(&(ib, vb))) => {
                    let v = ctx.mul(vb, c);
                    if v.0 != 0 {
                        out.push((ib, v));
                    }
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.0 = out;
    }

    /// w * v accumulated through a dense scratch buffer. The table cap is
    /// sized so in-range products never overflow it.
    pub fn mul_into(
        &self,
        ctx: &FieldContext,
        other: &KPoly,
        table: &KTable,
        scratch: &mut KScratch,
    ) -> KPoly {
        scratch.clear();
        for &(i, a) in &self.0 {
            for &(j, b) in &other.0 {
                let idx = table.mul_index(i, j);
                assert!(idx != MUL_OVERFLOW, "product degree exceeds the table cap");
                scratch.add(ctx, idx, ctx.mul(a, b));
            }
        }
        scratch.take()
    }

    pub fn evaluate(&self, ctx: &FieldContext, mono_values: &[Fe]) -> Fe {
        let mut acc = Fe(0);
        for &(i, c) in &self.0 {
            acc = ctx.add(acc, ctx.mul(c, mono_values[i as usize]));
        }
        acc
    }
}

/// Reusable dense accumulator for `KPoly` products.
pub struct KScratch {
    buf: Vec<Fe>,
    touched: Vec<u32>,
}

impl KScratch {
    pub fn new(table: &KTable) -> Self {
        KScratch { buf: vec![Fe(0); table.len()], touched: Vec::new() }
    }

    fn clear(&mut self) {
        for &t in &self.touched {
            self.buf[t as usize] = Fe(0);
        }
        self.touched.clear();
    }

    fn add(&mut self, ctx: &FieldContext, idx: u32, v: Fe) {
        if v.0 == 0 {
            return;
        }
        let slot = &mut self.buf[idx as usize];
        if slot.0 == 0 {
            self.touched.push(idx);
        }
        *slot = ctx.add(*slot, v);
    }

    fn take(&mut self) -> KPoly {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &t in &self.touched {
            let v = self.buf[t as usize];
            if v.0 != 0 {
                out.push((t, v));
            }
            self.buf[t as usize] = Fe(0);
        }
        self.touched.clear();
        KPoly(out)
    }
}

#[derive(Debug)]
pub enum PxlError {
    Solve(SolveError),
    Macaulay(crate::macaulay::MacaulayError),
    Estimate(EstimateError),
}

impl fmt::Display for PxlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PxlError::Solve(e) => write!(f, "{e}"),
            PxlError::Macaulay(e) => write!(f, "{e}"),
            PxlError::Estimate(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PxlError {}

impl From<SolveError> for PxlError {
    fn from(e: SolveError) -> Self {
        PxlError::Solve(e)
    }
}
impl From<crate::macaulay::MacaulayError> for PxlError {
    fn from(e: crate::macaulay::MacaulayError) -> Self {
        PxlError::Macaulay(e)
    }
}
impl From<EstimateError> for PxlError {
    fn from(e: EstimateError) -> Self {
        PxlError::Estimate(e)
    }
}

/// A row that received no pivot: its surviving entries, keyed by global
/// column index.
#[derive(Debug, Clone)]
pub struct ResidualRow {
    pub multiplier: Monomial,
    pub poly_index: usize,
    pub degree: u32,
    pub entries: BTreeMap<u32, KPoly>,
}

/// A pivot row retained for inspection: unit leading coefficient at
/// `pivot_col`, constant tail within its own degree block, polynomial tail
/// below.
#[derive(Debug, Clone)]
pub struct PivotRow {
    pub degree: u32,
    pub pivot_col: usize,
    pub fe_tail: Vec<(u32, Fe)>,
    pub poly_tail: Vec<(u32, KPoly)>,
}

/// Per-degree summary of the one-time elimination.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DegreeStep {
    pub degree: u32,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub expected_rank: usize,
    pub max_entry_degree_seen: u32,
    pub entry_degree_cap: u32,
}

pub struct Linearize1Result {
    pub block: BlockMacaulay,
    pub table: KTable,
    pub steps: Vec<DegreeStep>,
    /// pivot columns per degree (global indices, ascending)
    pub pivots_by_degree: Vec<(u32, Vec<usize>)>,
    pub pivot_rows: Option<Vec<PivotRow>>,
    pub residual_rows: Vec<ResidualRow>,
    /// non-pivot columns (global indices, ascending)
    pub residual_cols: Vec<usize>,
    pub alpha_actual: usize,
    pub degree_violations: usize,
}

impl Linearize1Result {
    pub fn total_rank(&self) -> usize {
        self.steps.iter().map(|s| s.rank).sum()
    }

    pub fn rank_of_degree(&self, d: u32) -> usize {
        self.steps.iter().find(|s| s.degree == d).map_or(0, |s| s.rank)
    }

    pub fn deficient_degrees(&self) -> Vec<u32> {
        self.steps.iter().filter(|s| s.rank < s.expected_rank).map(|s| s.degree).collect()
    }

    /// Residual column layout for a chosen elimination variable (index
    /// within the main variables): all non-pivot columns, ordered so the
    /// pure powers of that variable trail.
    pub fn order_residual(&self, elim_main: usize) -> ResidualLayout {
        let order = MonomialOrder::XlElimination { var: elim_main };
        let mut cols = self.residual_cols.clone();
        cols.sort_by(|&a, &b| {
            order.cmp(&self.block.columns()[b], &self.block.columns()[a])
        });
        let monomials: Vec<Monomial> =
            cols.iter().map(|&c| self.block.columns()[c].clone()).collect();
        ResidualLayout { elim_main, cols, monomials }
    }
}

/// Column arrangement of the residual matrix.
pub struct ResidualLayout {
    pub elim_main: usize,
    /// global column ids in presentation order
    pub cols: Vec<usize>,
    pub monomials: Vec<Monomial>,
}

/// Options for the one-time elimination pass.
#[derive(Debug, Clone)]
pub struct Linearize1Options {
    /// Keep pivot-row contents (cheap at desk scale, useful for dumps).
    pub retain_pivot_rows: bool,
}

impl Default for Linearize1Options {
    fn default() -> Self {
        Linearize1Options { retain_pivot_rows: false }
    }
}

/// The one-time partial elimination of the blocked Macaulay matrix,
/// processed from degree D down to 2.
pub fn linearize1(block: BlockMacaulay, opts: &Linearize1Options) -> Linearize1Result {
    let ctx = block.ctx().clone();
    let degree = block.degree();
    let table = KTable::new(block.k(), degree);
    let mut scratch = KScratch::new(&table);

    let m_eqs = count_equations(&block);
    let a_exp = m_eqs as i64 - block.main_nvars() as i64;

    let mut steps = Vec::new();
    let mut pivots_by_degree = Vec::new();
    let mut pivot_rows_kept: Vec<PivotRow> = Vec::new();
    let mut pool: Vec<ResidualRow> = Vec::new();
    let mut degree_violations = 0usize;
    let mut pivot_cols_all: Vec<usize> = Vec::new();

    for d in (2..=degree).rev() {
        let (lo, hi) = block.col_range(d);
        let width = hi - lo;
        let rows = block.rows_of_degree(d);
        let nrows = rows.len();

        // Diagonal block over F_q, augmented with the identity so the full
        // transformation comes out of the same elimination.
        let mut fe = DenseMatrix::zeros(ctx.clone(), nrows, width + nrows);
        let mut tails: Vec<Vec<(u32, KPoly)>> = Vec::with_capacity(nrows);
        for (i, row) in rows.iter().enumerate() {
            let mut tail = Vec::new();
            for (&col, poly) in &row.entries {
                if col >= lo && col < hi {
                    let c = KPoly::from_polynomial(poly, &table)
                        .constant_value()
                        .expect("diagonal block entries are constants");
                    fe[(i, col - lo)] = c;
                } else {
                    tail.push((col as u32, KPoly::from_polynomial(poly, &table)));
                }
            }
            tails.push(tail);
            fe[(i, width + i)] = Fe(1);
        }

        let ech = rref_in(&fe, width);
        let rank = ech.rank;

        // Final polynomial tails come from the recorded transformation:
        // row_i of the result = sum_j E[i][j] * original row_j. Accumulate
        // densely per column to keep the inner loop allocation-free.
        let mut acc = TailAccumulator::new(table.len());
        let mut assemble_tail = |i: usize, acc: &mut TailAccumulator| -> Vec<(u32, KPoly)> {
            acc.clear();
            let erow = &ech.matrix.row(i)[width..];
            for (j, &c) in erow.iter().enumerate() {
                if c.0 == 0 {
                    continue;
                }
                for (col, poly) in &tails[j] {
                    acc.add_scaled(&ctx, *col, poly, c);
                }
            }
            acc.compress()
        };

        // Pivot rows of this block.
        let mut block_pivots: Vec<(usize, Vec<(u32, Fe)>, Vec<(u32, KPoly)>)> = Vec::new();
        for (pi, &lc) in ech.pivots.iter().enumerate() {
            let gc = lo + lc;
            let mut fe_tail = Vec::new();
            for c in 0..width {
                let v = ech.matrix[(pi, c)];
                if v.0 != 0 && c != lc {
                    fe_tail.push(((lo + c) as u32, v));
                }
            }
            let poly_tail = assemble_tail(pi, &mut acc);
            block_pivots.push((gc, fe_tail, poly_tail));
        }

        // Step (d)-3: clear the new pivot columns out of every pooled row
        // (rows of higher degree that received no pivot). At d = D the pool
        // is empty, which is the omitted step.
        let cap = degree - d;
        let mut max_seen = 0u32;
        for r in pool.iter_mut() {
            for (gc, fe_tail, poly_tail) in &block_pivots {
                let Some(w) = r.entries.remove(&(*gc as u32)) else {
                    continue;
                };
                if let Some(wd) = w.degree(&table) {
                    max_seen = max_seen.max(wd);
                    if wd > cap {
                        degree_violations += 1;
                    }
                }
                for &(col, c) in fe_tail {
                    // subtract w * c at a constant column of this block
                    let mut delta = w.clone();
                    delta.scale(&ctx, ctx.neg(c));
                    let e = r.entries.entry(col).or_insert_with(KPoly::zero);
                    e.add_scaled(&ctx, &delta, Fe(1));
                    if e.is_zero() {
                        r.entries.remove(&col);
                    }
                }
                for (col, v) in poly_tail {
                    let prod = w.mul_into(&ctx, v, &table, &mut scratch);
                    let e = r.entries.entry(*col).or_insert_with(KPoly::zero);
                    let neg1 = ctx.neg(Fe(1));
                    e.add_scaled(&ctx, &prod, neg1);
                    if e.is_zero() {
                        r.entries.remove(col);
                    }
                }
            }
        }

        // Rows of this block without pivots join the pool; their diagonal
        // part is zero after the echelon pass. Each final row is a
        // combination of the originals, so label it by the first original
        // row that contributes.
        for i in rank..nrows {
            debug_assert!(ech.matrix.row(i)[..width].iter().all(|v| v.0 == 0));
            let entries = assemble_tail(i);
            let src_idx = ech.matrix.row(i)[width..]
                .iter()
                .position(|v| v.0 != 0)
                .unwrap_or(0);
            let src = &rows[src_idx];
            pool.push(ResidualRow {
                multiplier: src.multiplier.clone(),
                poly_index: src.poly_index,
                degree: d,
                entries,
            });
        }

        // Expected generic rank of the diagonal block.
        let coeff = estimate::series_coefficient_i128(a_exp, m_eqs as u64, d as usize);
        let expected = (width as i128 - coeff).clamp(0, width as i128) as usize;
        let expected = expected.min(nrows);

        steps.push(DegreeStep {
            degree: d,
            rows: nrows,
            cols: width,
            rank,
            expected_rank: expected,
            max_entry_degree_seen: max_seen,
            entry_degree_cap: cap,
        });
        pivots_by_degree.push((d, block_pivots.iter().map(|(gc, _, _)| *gc).collect()));
        pivot_cols_all.extend(block_pivots.iter().map(|(gc, _, _)| *gc));
        if opts.retain_pivot_rows {
            for (gc, fe_tail, poly_tail) in block_pivots {
                pivot_rows_kept.push(PivotRow {
                    degree: d,
                    pivot_col: gc,
                    fe_tail,
                    poly_tail,
                });
            }
        }
    }

    let pivot_set: std::collections::HashSet<usize> = pivot_cols_all.iter().copied().collect();
    let residual_cols: Vec<usize> =
        (0..block.columns().len()).filter(|c| !pivot_set.contains(c)).collect();
    let alpha_actual = residual_cols.len();

    // Every surviving entry must sit in a residual column.
    debug_assert!(pool
        .iter()
        .all(|r| r.entries.keys().all(|&c| !pivot_set.contains(&(c as usize)))));

    Linearize1Result {
        block,
        table,
        steps,
        pivots_by_degree,
        pivot_rows: if opts.retain_pivot_rows { Some(pivot_rows_kept) } else { None },
        residual_rows: pool,
        residual_cols,
        alpha_actual,
        degree_violations,
    }
}

fn count_equations(block: &BlockMacaulay) -> usize {
    // |I_2| is one row per input polynomial.
    block.rows_available(2)
}

/// Substitute a guess into the residual submatrix only; the shared
/// elimination result is reused across guesses.
pub fn fix(res: &Linearize1Result, layout: &ResidualLayout, guess: &[Fe]) -> DenseMatrix {
    let ctx = res.block.ctx().clone();
    let mono_values = res.table.monomial_values(&ctx, guess);
    let col_pos: HashMap<u32, usize> =
        layout.cols.iter().enumerate().map(|(i, &c)| (c as u32, i)).collect();
    let mut m = DenseMatrix::zeros(ctx.clone(), res.residual_rows.len(), layout.cols.len());
    for (i, row) in res.residual_rows.iter().enumerate() {
        for (&col, poly) in &row.entries {
            let j = col_pos[&col];
            m[(i, j)] = poly.evaluate(&ctx, &mono_values);
        }
    }
    m
}

/// Gaussian elimination on the fixed residual.
pub fn linearize2(fixed: &DenseMatrix) -> EchelonResult {
    rref(fixed)
}

/// One JSON-lines trace sink.
pub type TraceSink<'a> = &'a mut dyn Write;

fn trace_event(sink: &mut Option<TraceSink>, json: String) {
    if let Some(w) = sink {
        let _ = writeln!(w, "{json}");
    }
}

/// Full PXL pipeline.
pub fn pxl_solve(sys: &QuadraticSystem, cfg: &SolverConfig) -> Result<SolveOutcome, PxlError> {
    pxl_solve_traced(sys, cfg, None)
}

pub fn pxl_solve_traced(
    sys: &QuadraticSystem,
    cfg: &SolverConfig,
    mut trace: Option<TraceSink>,
) -> Result<SolveOutcome, PxlError> {
    let n = sys.n();
    let m = sys.m();
    if n > m {
        return Err(SolveError::Config(format!("pxl needs n <= m, got n={n} m={m}")).into());
    }
    let q = sys.ctx().q() as u64;
    let k = match cfg.k {
        Some(k) => k,
        None => estimate::cost_pxl(n, m, q, estimate::OMEGA_DEFAULT)
            .best_pxl()
            .map(|r| r.k)
            .unwrap_or(1),
    };
    if k == 0 || k >= n {
        return Err(SolveError::Config(format!("pxl needs 1 <= k < n, got k={k}, n={n}")).into());
    }
    if m <= n - k {
        return Err(SolveError::Config(format!(
            "pxl needs m > n - k, got m={m}, n-k={}",
            n - k
        ))
        .into());
    }
    let elim_global = cfg.elim_var.filter(|&e| e < n).unwrap_or(n - 1);
    if elim_global < k {
        return Err(SolveError::Config(format!(
            "elimination variable x{} is among the guessed variables",
            elim_global + 1
        ))
        .into());
    }
    let elim_main = elim_global - k;

    let start = Instant::now();
    let mut stats = SolveStats::default();
    let base_degree = match cfg.degree {
        Some(d) => d.max(2),
        None => estimate::degree_of_regularity(n - k, m)?.max(2),
    };

    for bump in 0..=cfg.degree_escalation {
        let degree = base_degree + bump;
        if bump > 0 {
            stats.escalations += 1;
        }
        stats.degree = degree;

        // Rebuild with growing slack if a diagonal block comes up short.
        let mut res = None;
        for attempt in 0..3u64 {
            let selection = RowSelection::Auto {
                slack_pct: 0.05 * (1 << attempt) as f64,
                slack_min: 2 * (attempt as usize + 1),
            };
            let block =
                build_block_macaulay(sys, k, degree, &selection, cfg.seed.wrapping_add(attempt))?;
            let r = linearize1(block, &Linearize1Options::default());
            for s in &r.steps {
                trace_event(
                    &mut trace,
                    format!(
                        "{{\"event\":\"linearize1_degree\",\"attempt\":{attempt},\"d\":{},\"rows\":{},\"cols\":{},\"rank\":{},\"max_entry_degree\":{},\"degree_cap\":{}}}",
                        s.degree, s.rows, s.cols, s.rank, s.max_entry_degree_seen, s.entry_degree_cap
                    ),
                );
            }
            let deficient = r.deficient_degrees();
            if deficient.is_empty() || attempt == 2 {
                res = Some(r);
                break;
            }
            trace_event(
                &mut trace,
                format!("{{\"event\":\"rank_deficit\",\"attempt\":{attempt},\"degrees\":{deficient:?}}}"),
            );
        }
        let res = res.expect("linearize1 attempted");
        let layout = res.order_residual(elim_main);
        stats.alpha = Some(res.alpha_actual);
        stats.matrix_rows = res.residual_rows.len();
        stats.matrix_cols = res.alpha_actual;

        match pxl_guess_loop(sys, cfg, &res, &layout, k, elim_main, &mut stats, &mut trace)? {
            GuessLoopOutcome::Solved(sol) => {
                stats.wall_ms = start.elapsed().as_millis();
                debug_assert!(sys.is_root(&sol));
                return Ok(SolveOutcome {
                    status: SolveStatus::Solved,
                    solution: Some(sol),
                    stats,
                });
            }
            GuessLoopOutcome::Exhausted { saw_univariate: true } => {
                stats.wall_ms = start.elapsed().as_millis();
                return Ok(SolveOutcome { status: SolveStatus::NoSolution, solution: None, stats });
            }
            GuessLoopOutcome::Exhausted { saw_univariate: false } => {
                // no guess produced a univariate row: the degree is too low
                continue;
            }
        }
    }
    stats.wall_ms = start.elapsed().as_millis();
    Ok(SolveOutcome { status: SolveStatus::DegreeTooLow, solution: None, stats })
}

enum GuessLoopOutcome {
    Solved(Vec<Fe>),
    Exhausted { saw_univariate: bool },
}

#[allow(clippy::too_many_arguments)]
fn pxl_guess_loop(
    sys: &QuadraticSystem,
    cfg: &SolverConfig,
    res: &Linearize1Result,
    layout: &ResidualLayout,
    k: usize,
    elim_main: usize,
    stats: &mut SolveStats,
    trace: &mut Option<TraceSink>,
) -> Result<GuessLoopOutcome, PxlError> {
    let q = sys.ctx().q() as u64;
    let iter = GuessIter::new(q, k, cfg.seed);
    let total = iter.total();
    let jobs = cfg.jobs.max(1);

    let run_guess = |index: u64| -> Result<(bool, Option<Vec<Fe>>), PxlError> {
        let digits = iter.decode(index);
        let guess: Vec<Fe> = digits.iter().map(|&d| Fe(d as u16)).collect();
        let fixed = fix(res, layout, &guess);
        let ech = linearize2(&fixed);
        match extract_trailing_univariate(&ech, &layout.monomials, layout.elim_main) {
            TrailingRow::Contradiction => Ok((true, None)),
            TrailingRow::NoRow => Ok((false, None)),
            TrailingRow::Univariate(coeffs) => {
                let ctx = sys.ctx();
                for v in 0..ctx.q() {
                    let x = Fe(v as u16);
                    let mut acc = Fe(0);
                    for (&d, &c) in &coeffs {
                        acc = ctx.add(acc, ctx.mul(c, ctx.pow(x, d as u64)));
                    }
                    if acc.0 != 0 {
                        continue;
                    }
                    // Repeat: substitute the guess and the root, then hand
                    // the reduced system to plain XL.
                    let reduced = sys.substitute_prefix(&guess).substitute_remove(elim_main, x);
                    let inner_cfg = SolverConfig {
                        algorithm: crate::xl::SolverAlgorithm::Xl,
                        k: None,
                        degree: None,
                        elim_var: None,
                        ..cfg.clone()
                    };
                    if let Ok(out) = crate::xl::xl_solve(&reduced, &inner_cfg) {
                        if let Some(tail) = out.solution {
                            let mut full = guess.clone();
                            let mut main = tail;
                            main.insert(elim_main, x);
                            full.extend(main);
                            if sys.is_root(&full) {
                                return Ok((true, Some(full)));
                            }
                        }
                    }
                }
                Ok((true, None))
            }
        }
    };

    if jobs == 1 {
        let mut saw = false;
        for index in 0..total {
            stats.guesses_tried += 1;
            let (univ, sol) = run_guess(index)?;
            trace_event(
                trace,
                format!(
                    "{{\"event\":\"guess\",\"index\":{index},\"univariate\":{univ},\"solved\":{}}}",
                    sol.is_some()
                ),
            );
            saw |= univ;
            if let Some(s) = sol {
                return Ok(GuessLoopOutcome::Solved(s));
            }
        }
        return Ok(GuessLoopOutcome::Exhausted { saw_univariate: saw });
    }

    let found = AtomicBool::new(false);
    let saw_univariate = AtomicBool::new(false);
    let tried = AtomicU64::new(0);
    let slot: Mutex<Option<Vec<Fe>>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for w in 0..jobs {
            let found = &found;
            let saw_univariate = &saw_univariate;
            let tried = &tried;
            let slot = &slot;
            let run_guess = &run_guess;
            scope.spawn(move || {
                let mut index = w as u64;
                while index < total && !found.load(AtomicOrdering::Relaxed) {
                    tried.fetch_add(1, AtomicOrdering::Relaxed);
                    match run_guess(index) {
                        Ok((univ, sol)) => {
                            if univ {
                                saw_univariate.store(true, AtomicOrdering::Relaxed);
                            }
                            if let Some(s) = sol {
                                let mut guard = slot.lock().unwrap();
                                if guard.is_none() {
                                    *guard = Some(s);
                                }
                                found.store(true, AtomicOrdering::Relaxed);
                                break;
                            }
                        }
                        Err(_) => break,
                    }
                    index += jobs as u64;
                }
            });
        }
    });
    stats.guesses_tried += tried.load(AtomicOrdering::Relaxed);
    match slot.into_inner().unwrap() {
        Some(s) => Ok(GuessLoopOutcome::Solved(s)),
        None => Ok(GuessLoopOutcome::Exhausted {
            saw_univariate: saw_univariate.load(AtomicOrdering::Relaxed),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use crate::instance::gen_planted;
    use crate::xl::SolverAlgorithm;

    #[test]
    fn ktable_products() {
        let t = KTable::new(2, 4);
        assert_eq!(t.len(), 15); // C(2+4,4)
        assert!(t.mono(0).is_one());
        // x1 * x2 = x1 x2
        let i1 = t.index[[1u8, 0].as_slice()];
        let i2 = t.index[[0u8, 1].as_slice()];
        let p = t.mul_index(i1, i2);
        assert_eq!(t.mono(p).exps(), &[1, 1]);
    }

    #[test]
    fn kpoly_roundtrip_and_eval() {
        let ctx = FieldContext::prime(7).unwrap();
        let t = KTable::new(1, 3);
        // 5 x^2 + 4 x + 3
        let p = Polynomial::from_terms(
            ctx.clone(),
            1,
            [
                (Monomial::new(vec![2]), Fe(5)),
                (Monomial::new(vec![1]), Fe(4)),
                (Monomial::new(vec![0]), Fe(3)),
            ],
        );
        let kp = KPoly::from_polynomial(&p, &t);
        assert_eq!(kp.degree(&t), Some(2));
        let vals = t.monomial_values(&ctx, &[Fe(2)]);
        assert_eq!(kp.evaluate(&ctx, &vals), Fe(3));
        assert_eq!(kp.to_polynomial(&ctx, &t), p);
    }

    #[test]
    fn kpoly_mul_matches_polynomial_mul() {
        let ctx = FieldContext::prime(7).unwrap();
        let t = KTable::new(2, 4);
        let mut scratch = KScratch::new(&t);
        let a = Polynomial::from_terms(
            ctx.clone(),
            2,
            [
                (Monomial::new(vec![1, 0]), Fe(2)),
                (Monomial::new(vec![0, 1]), Fe(3)),
                (Monomial::new(vec![0, 0]), Fe(1)),
            ],
        );
        let b = Polynomial::from_terms(
            ctx.clone(),
            2,
            [(Monomial::new(vec![1, 1]), Fe(5)), (Monomial::new(vec![0, 0]), Fe(6))],
        );
        let ka = KPoly::from_polynomial(&a, &t);
        let kb = KPoly::from_polynomial(&b, &t);
        let prod = ka.mul_into(&ctx, &kb, &t, &mut scratch);
        assert_eq!(prod.to_polynomial(&ctx, &t), a.mul(&b));
    }

    #[test]
    fn pxl_solves_planted_small() {
        let ctx = FieldContext::prime(7).unwrap();
        let (sys, _z) = gen_planted(&ctx, 5, 5, 3);
        let cfg = SolverConfig {
            algorithm: SolverAlgorithm::Pxl,
            k: Some(1),
            seed: 1,
            ..Default::default()
        };
        let out = pxl_solve(&sys, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::Solved);
        assert!(sys.is_root(&out.solution.unwrap()));
    }

    #[test]
    fn pxl_solves_planted_gf16() {
        let ctx = FieldContext::new(2, 4, None).unwrap();
        let (sys, _z) = gen_planted(&ctx, 4, 4, 8);
        let cfg = SolverConfig {
            algorithm: SolverAlgorithm::Pxl,
            k: Some(1),
            seed: 2,
            ..Default::default()
        };
        let out = pxl_solve(&sys, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::Solved);
        assert!(sys.is_root(&out.solution.unwrap()));
    }
}
