//! Exact linear algebra over a finite field: dense reduced row echelon form,
//! targeted column elimination, sparse matrix-vector products, and a basic
//! Wiedemann solver built on Berlekamp-Massey.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Fe, FieldContext};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    NonUnitPivot { row: usize },
    SingularOrUnlucky,
    Inconsistent,
    ShapeMismatch,
}

impl fmt::Display for LinAlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinAlgError::NonUnitPivot { row } => write!(f, "pivot row {row} has non-unit leading entry"),
            LinAlgError::SingularOrUnlucky => write!(f, "matrix singular or projections unlucky"),
            LinAlgError::Inconsistent => write!(f, "linear system is inconsistent"),
            LinAlgError::ShapeMismatch => write!(f, "dimension mismatch"),
        }
    }
}

impl std::error::Error for LinAlgError {}

/// Dense row-major matrix over one field.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    ctx: Arc<FieldContext>,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl DenseMatrix {
    pub fn zeros(ctx: Arc<FieldContext>, rows: usize, cols: usize) -> Self {
        DenseMatrix { ctx, rows, cols, data: vec![Fe(0); rows * cols] }
    }

    pub fn identity(ctx: Arc<FieldContext>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = Fe(1);
        }
        m
    }

    pub fn from_rows(ctx: Arc<FieldContext>, rows: Vec<Vec<Fe>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        DenseMatrix { ctx, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Fe] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (top, bot) = self.data.split_at_mut(b * self.cols);
        top[a * self.cols..(a + 1) * self.cols].swap_with_slice(&mut bot[..self.cols]);
    }

    pub fn matvec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Fe(0);
                for (j, &x) in self.row(i).iter().enumerate() {
                    acc = self.ctx.add(acc, self.ctx.mul(x, v[j]));
                }
                acc
            })
            .collect()
    }

    /// target <- target - c * source, by row index.
    pub fn axpy_rows(&mut self, target: usize, c: Fe, source: usize) {
        if c.0 == 0 {
            return;
        }
        let cols = self.cols;
        let (src_idx, dst_idx) = (source * cols, target * cols);
        // Borrow-splitting dance to touch two rows at once.
        if source == target {
            panic!("axpy onto itself");
        }
        let ctx = self.ctx.clone();
        let nc = ctx.neg(c);
        let (lo, hi) = if src_idx < dst_idx {
            let (a, b) = self.data.split_at_mut(dst_idx);
            (&a[src_idx..src_idx + cols], &mut b[..cols])
        } else {
            let (a, b) = self.data.split_at_mut(src_idx);
            (&b[..cols], &mut a[dst_idx..dst_idx + cols])
        };
        axpy_slice(&ctx, hi, nc, lo);
    }
}

/// dst <- dst + c * src elementwise.
pub fn axpy_slice(ctx: &FieldContext, dst: &mut [Fe], c: Fe, src: &[Fe]) {
    debug_assert_eq!(dst.len(), src.len());
    if c.0 == 0 {
        return;
    }
    if ctx.r() == 1 {
        let p = ctx.p() as u32;
        let cc = c.0 as u32;
        for (d, s) in dst.iter_mut().zip(src) {
            let v = d.0 as u32 + cc * s.0 as u32;
            d.0 = (v % p) as u16;
        }
    } else if ctx.q() <= 4096 {
        let tbl = ctx.mul_table(c);
        if ctx.p() == 2 {
            for (d, s) in dst.iter_mut().zip(src) {
                d.0 ^= tbl[s.0 as usize];
            }
        } else {
            for (d, s) in dst.iter_mut().zip(src) {
                *d = ctx.add(*d, Fe(tbl[s.0 as usize]));
            }
        }
    } else {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = ctx.add(*d, ctx.mul(c, *s));
        }
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Fe;
    fn index(&self, (i, j): (usize, usize)) -> &Fe {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fe {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form together with its pivot structure.
#[derive(Debug, Clone)]
pub struct EchelonResult {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Deterministic RREF: leftmost nonzero pivot, first eligible row.
pub fn rref(m: &DenseMatrix) -> EchelonResult {
    rref_in(m, m.cols())
}

/// RREF restricted to pivots within the first `col_limit` columns; trailing
/// columns (e.g. an augmented identity) are carried along.
pub fn rref_in(m: &DenseMatrix, col_limit: usize) -> EchelonResult {
    let mut a = m.clone();
    let ctx = a.ctx.clone();
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..col_limit.min(a.cols) {
        if next_row == a.rows {
            break;
        }
        let Some(pr) = (next_row..a.rows).find(|&i| a[(i, col)].0 != 0) else {
            continue;
        };
        a.swap_rows(next_row, pr);
        let inv = ctx.inv(a[(next_row, col)]).expect("nonzero pivot");
        if inv.0 != 1 {
            let row = a.row_mut(next_row);
            for x in row.iter_mut() {
                *x = ctx.mul(*x, inv);
            }
        }
        for i in 0..a.rows {
            if i != next_row && a[(i, col)].0 != 0 {
                let c = a[(i, col)];
                a.axpy_rows(i, c, next_row);
            }
        }
        pivots.push(col);
        next_row += 1;
    }
    let rank = pivots.len();
    EchelonResult { matrix: a, pivots, rank }
}

pub fn rank(m: &DenseMatrix) -> usize {
    rref(m).rank
}

/// Zero out the given pivot columns in every target row, using pivot rows
/// whose leading entry in their pivot column is 1.
pub fn eliminate_columns(
    ctx: &FieldContext,
    targets: &mut [Vec<Fe>],
    pivot_rows: &[(usize, Vec<Fe>)],
) -> Result<(), LinAlgError> {
    for (idx, (col, prow)) in pivot_rows.iter().enumerate() {
        if prow[*col].0 != 1 {
            return Err(LinAlgError::NonUnitPivot { row: idx });
        }
    }
    for t in targets.iter_mut() {
        for (col, prow) in pivot_rows {
            let c = t[*col];
            if c.0 != 0 {
                axpy_slice(ctx, t, ctx.neg(c), prow);
            }
        }
    }
    Ok(())
}

/// Sparse row-major matrix; per row a strictly increasing (column, value) list.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    ctx: Arc<FieldContext>,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(u32, Fe)>>,
}

impl SparseMatrix {
    pub fn new(ctx: Arc<FieldContext>, rows: usize, cols: usize) -> Self {
        SparseMatrix { ctx, rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn from_rows(ctx: Arc<FieldContext>, cols: usize, rows: Vec<Vec<(u32, Fe)>>) -> Self {
        let n = rows.len();
        for r in &rows {
            debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(r.iter().all(|&(c, v)| (c as usize) < cols && v.0 != 0));
        }
        SparseMatrix { ctx, rows: n, cols, entries: rows }
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push_entry(&mut self, row: usize, col: usize, v: Fe) {
        if v.0 == 0 {
            return;
        }
        let r = &mut self.entries[row];
        debug_assert!(r.last().map_or(true, |&(c, _)| (c as usize) < col));
        r.push((col as u32, v));
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(|r| r.len()).sum()
    }

    pub fn matvec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        let ctx = &self.ctx;
        self.entries
            .iter()
            .map(|row| {
                let mut acc = Fe(0);
                for &(c, x) in row {
                    acc = ctx.add(acc, ctx.mul(x, v[c as usize]));
                }
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.ctx.clone(), self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for &(c, v) in row {
                d[(i, c as usize)] = v;
            }
        }
        d
    }
}

/// Minimal linear recurrence annihilating `seq`, returned as the monic
/// connection polynomial c_0 + c_1 x + ... + x^L (ascending coefficients).
pub fn berlekamp_massey(ctx: &FieldContext, seq: &[Fe]) -> Vec<Fe> {
    let mut c = vec![ctx.one()];
    let mut b = vec![ctx.one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut delta_prev = ctx.one();
    for i in 0..seq.len() {
        // discrepancy
        let mut delta = Fe(0);
        for (j, &cj) in c.iter().enumerate() {
            if j <= i {
                delta = ctx.add(delta, ctx.mul(cj, seq[i - j]));
            }
        }
        if delta.0 == 0 {
            m += 1;
        } else {
            let scale = ctx.div(delta, delta_prev).expect("nonzero previous discrepancy");
            let update = |c: &[Fe], b: &[Fe]| -> Vec<Fe> {
                let mut out = c.to_vec();
                if out.len() < b.len() + m {
                    out.resize(b.len() + m, Fe(0));
                }
                for (j, &bj) in b.iter().enumerate() {
                    out[j + m] = ctx.sub(out[j + m], ctx.mul(scale, bj));
                }
                out
            };
            if 2 * l <= i {
                let t = c.clone();
                c = update(&c, &b);
                b = t;
                l = i + 1 - l;
                delta_prev = delta;
                m = 1;
            } else {
                c = update(&c, &b);
                m += 1;
            }
        }
    }
    // BM computes the connection polynomial with constant term 1; the
    // recurrence polynomial in the shift operator is its degree-L reversal.
    while c.len() > l + 1 && c.last().map_or(false, |x| x.0 == 0) {
        c.pop();
    }
    debug_assert!(c.len() <= l + 1);
    c.resize(l + 1, Fe(0));
    c.reverse();
    if let Some(&top) = c.last() {
        if top.0 != 0 && top.0 != 1 {
            let inv = ctx.inv(top).unwrap();
            for x in c.iter_mut() {
                *x = ctx.mul(*x, inv);
            }
        }
    }
    c
}

/// Solve A x = b for square sparse A by Wiedemann's method. Randomized with
/// `seed`; retries up to three distinct projections before giving up.
pub fn wiedemann_solve(a: &SparseMatrix, b: &[Fe], seed: u64) -> Result<Vec<Fe>, LinAlgError> {
    if a.rows() != a.cols() || b.len() != a.rows() {
        return Err(LinAlgError::ShapeMismatch);
    }
    let n = a.rows();
    let ctx = a.ctx().clone();
    if n == 0 {
        return Ok(Vec::new());
    }
    if b.iter().all(|x| x.0 == 0) {
        return Ok(vec![Fe(0); n]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77ed_e3a1);
    for _attempt in 0..3 {
        let u: Vec<Fe> = (0..n).map(|_| ctx.rand_elem(&mut rng)).collect();
        // Krylov sequence s_i = u^T A^i b, i = 0..2n+1
        let mut seq = Vec::with_capacity(2 * n + 2);
        let mut v = b.to_vec();
        for _ in 0..(2 * n + 2) {
            let mut dot = Fe(0);
            for (x, y) in u.iter().zip(&v) {
                dot = ctx.add(dot, ctx.mul(*x, *y));
            }
            seq.push(dot);
            v = a.matvec(&v);
        }
        let c = berlekamp_massey(&ctx, &seq);
        // c_0 + c_1 x + ... + c_L x^L with c annihilating the sequence;
        // nonzero constant term lets us express A^{-1} b.
        if c.len() < 2 || c[0].0 == 0 {
            continue;
        }
        let c0_inv = ctx.inv(c[0]).unwrap();
        // x = -(1/c_0) * (c_1 I + c_2 A + ... + c_L A^{L-1}) b
        let mut acc = vec![Fe(0); n];
        let mut pow_b = b.to_vec();
        for &ci in c.iter().skip(1) {
            if ci.0 != 0 {
                for (t, s) in acc.iter_mut().zip(&pow_b) {
                    *t = ctx.add(*t, ctx.mul(ci, *s));
                }
            }
            pow_b = a.matvec(&pow_b);
        }
        let neg = ctx.neg(c0_inv);
        for t in acc.iter_mut() {
            *t = ctx.mul(*t, neg);
        }
        // residual check
        let ax = a.matvec(&acc);
        if ax.iter().zip(b).all(|(x, y)| x == y) {
            return Ok(acc);
        }
        // A singular with consistent-looking recurrence: report inconsistent
        // only after all retries fail below.
    }
    Err(LinAlgError::SingularOrUnlucky)
}

/// Solve A x = b by dense elimination; used as the independent oracle for
/// Wiedemann. Returns None when A is singular.
pub fn dense_solve(a: &DenseMatrix, b: &[Fe]) -> Option<Vec<Fe>> {
    assert_eq!(a.rows(), b.len());
    let ctx = a.ctx().clone();
    let mut aug = DenseMatrix::zeros(ctx.clone(), a.rows(), a.cols() + 1);
    for i in 0..a.rows() {
        aug.row_mut(i)[..a.cols()].copy_from_slice(a.row(i));
        aug[(i, a.cols())] = b[i];
    }
    let e = rref(&aug);
    // unique solution iff pivots are exactly the first cols columns
    if e.rank != a.cols() || e.pivots.iter().any(|&c| c == a.cols()) {
        return None;
    }
    Some((0..a.cols()).map(|i| e.matrix[(i, a.cols())]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    fn gf7() -> Arc<FieldContext> {
        FieldContext::prime(7).unwrap()
    }

    fn mat(ctx: &Arc<FieldContext>, rows: &[&[u16]]) -> DenseMatrix {
        DenseMatrix::from_rows(
            ctx.clone(),
            rows.iter().map(|r| r.iter().map(|&v| Fe(v)).collect()).collect(),
        )
    }

    #[test]
    fn rref_rank_one() {
        let ctx = gf7();
        let m = mat(&ctx, &[&[1, 2], &[2, 4]]);
        let e = rref(&m);
        assert_eq!(e.rank, 1);
        assert_eq!(e.matrix.row(0), &[Fe(1), Fe(2)]);
        assert_eq!(e.matrix.row(1), &[Fe(0), Fe(0)]);
    }

    #[test]
    fn rref_identity_fixed_point() {
        let ctx = gf7();
        let m = DenseMatrix::identity(ctx, 4);
        let e = rref(&m);
        assert_eq!(e.rank, 4);
        assert_eq!(e.matrix, m);
    }

    #[test]
    fn rref_idempotent() {
        let ctx = gf7();
        let m = mat(&ctx, &[&[3, 1, 4], &[1, 5, 6], &[2, 6, 5]]);
        let e = rref(&m);
        let e2 = rref(&e.matrix);
        assert_eq!(e.matrix, e2.matrix);
        assert_eq!(e.pivots, e2.pivots);
    }

    #[test]
    fn eliminate_columns_single_pivot() {
        let ctx = gf7();
        let mut targets = vec![vec![Fe(0), Fe(2), Fe(5)]];
        let pivot = (1usize, vec![Fe(0), Fe(1), Fe(3)]);
        eliminate_columns(&ctx, &mut targets, &[pivot]).unwrap();
        // [0,2,5] - 2*[0,1,3] = [0,0,-1] = [0,0,6]
        assert_eq!(targets[0], vec![Fe(0), Fe(0), Fe(6)]);
    }

    #[test]
    fn eliminate_columns_rejects_non_unit() {
        let ctx = gf7();
        let mut targets = vec![vec![Fe(1), Fe(1)]];
        let pivot = (0usize, vec![Fe(2), Fe(0)]);
        assert!(matches!(
            eliminate_columns(&ctx, &mut targets, &[pivot]),
            Err(LinAlgError::NonUnitPivot { .. })
        ));
    }

    #[test]
    fn bm_constant_sequence() {
        let ctx = gf7();
        let seq = vec![Fe(1); 8];
        let c = berlekamp_massey(&ctx, &seq);
        // s_{i+1} = s_i, connection x - 1 => coefficients [-1, 1] = [6, 1]
        assert_eq!(c, vec![Fe(6), Fe(1)]);
    }

    #[test]
    fn bm_fibonacci_mod7() {
        let ctx = gf7();
        let mut seq = vec![Fe(1), Fe(1)];
        for i in 2..16 {
            let s = ctx.add(seq[i - 1], seq[i - 2]);
            seq.push(s);
        }
        let c = berlekamp_massey(&ctx, &seq);
        // x^2 - x - 1 => [-1, -1, 1] = [6, 6, 1]
        assert_eq!(c, vec![Fe(6), Fe(6), Fe(1)]);
    }

    #[test]
    fn wiedemann_identity_and_diagonal() {
        let ctx = gf7();
        let mut a = SparseMatrix::new(ctx.clone(), 3, 3);
        for i in 0..3 {
            a.push_entry(i, i, Fe(1));
        }
        let b = vec![Fe(3), Fe(1), Fe(4)];
        assert_eq!(wiedemann_solve(&a, &b, 1).unwrap(), b);

        let mut d = SparseMatrix::new(ctx.clone(), 3, 3);
        d.push_entry(0, 0, Fe(2));
        d.push_entry(1, 1, Fe(3));
        d.push_entry(2, 2, Fe(5));
        let x = wiedemann_solve(&d, &[Fe(1), Fe(1), Fe(1)], 1).unwrap();
        assert_eq!(x, vec![Fe(4), Fe(5), Fe(3)]);
    }

    #[test]
    fn wiedemann_agrees_with_dense_oracle() {
        use rand::Rng;
        use rand::SeedableRng;
        let gf16 = FieldContext::new(2, 4, None).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 30;
        'outer: for seed in 0..6u64 {
            let mut s = SparseMatrix::new(gf16.clone(), n, n);
            for i in 0..n {
                let mut cols: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.1)).collect();
                if !cols.contains(&i) {
                    cols.push(i); // keep it plausibly nonsingular
                }
                cols.sort_unstable();
                for c in cols {
                    s.push_entry(i, c, gf16.rand_nonzero(&mut rng));
                }
            }
            let b: Vec<Fe> = (0..n).map(|_| gf16.rand_elem(&mut rng)).collect();
            let dense = s.to_dense();
            match dense_solve(&dense, &b) {
                Some(x) => {
                    let w = wiedemann_solve(&s, &b, seed).unwrap();
                    assert_eq!(w, x);
                }
                None => continue 'outer,
            }
        }
    }
}
