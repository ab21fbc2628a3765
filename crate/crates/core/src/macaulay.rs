//! Macaulay matrices over the field and, for the polynomial-XL pipeline, the
//! degree-blocked Macaulay matrix with entries in F_q[x_1..x_k].

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::estimate::series_coefficient_i128;
use crate::field::{Fe, FieldContext};
use crate::linalg::DenseMatrix;
use crate::poly::{
    enumerate_monomials, split_variables, Monomial, MonomialOrder, Polynomial, QuadraticSystem,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MacaulayError {
    DegreeTooSmall { degree: u32 },
    SupportNotCovered { row: usize },
    KOutOfRange { k: usize, n: usize },
}

impl fmt::Display for MacaulayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MacaulayError::DegreeTooSmall { degree } => write!(f, "degree {degree} < 2"),
            MacaulayError::SupportNotCovered { row } => {
                write!(f, "row {row} has support outside the column set")
            }
            MacaulayError::KOutOfRange { k, n } => write!(f, "k={k} out of range for n={n}"),
        }
    }
}

impl std::error::Error for MacaulayError {}

/// All multiplier/polynomial pairs (t, i) with deg(t * f_i) <= D for a
/// quadratic system, ordered by product degree descending, then multiplier
/// graded-lex descending, then polynomial index ascending.
pub fn build_shift(sys: &QuadraticSystem, degree: u32) -> Result<Vec<(Monomial, usize)>, MacaulayError> {
    if degree < 2 {
        return Err(MacaulayError::DegreeTooSmall { degree });
    }
    let mut out = Vec::new();
    for d in (0..=degree - 2).rev() {
        let mut monos = enumerate_monomials(sys.n(), d, d, &MonomialOrder::GradedLex);
        MonomialOrder::GradedLex.sort_descending(&mut monos);
        for t in monos {
            for i in 0..sys.m() {
                out.push((t.clone(), i));
            }
        }
    }
    Ok(out)
}

/// Dense Macaulay matrix with its row labels and column monomials.
#[derive(Debug, Clone)]
pub struct MacaulayMatrix {
    pub matrix: DenseMatrix,
    pub row_labels: Vec<(Monomial, usize)>,
    pub columns: Vec<Monomial>,
}

impl MacaulayMatrix {
    pub fn column_index(&self, m: &Monomial) -> Option<usize> {
        self.columns.iter().position(|c| c == m)
    }
}

/// Extract coefficients of each product t * f_i against the ordered column
/// set T (which must cover every support monomial).
pub fn build_macaulay(
    sys: &QuadraticSystem,
    shift: &[(Monomial, usize)],
    columns: &[Monomial],
) -> Result<MacaulayMatrix, MacaulayError> {
    let mut col_index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for (j, c) in columns.iter().enumerate() {
        col_index.insert(c, j);
    }
    let mut matrix = DenseMatrix::zeros(sys.ctx().clone(), shift.len(), columns.len());
    for (i, (t, pi)) in shift.iter().enumerate() {
        let prod = sys.polys()[*pi].mul_monomial(t);
        for (m, c) in prod.terms_desc() {
            match col_index.get(m) {
                Some(&j) => matrix[(i, j)] = c,
                None => return Err(MacaulayError::SupportNotCovered { row: i }),
            }
        }
    }
    Ok(MacaulayMatrix { matrix, row_labels: shift.to_vec(), columns: columns.to_vec() })
}

/// Mac^{-1}: read each row of `a` back as a polynomial over the column set.
pub fn mac_inverse(ctx: &Arc<FieldContext>, a: &DenseMatrix, columns: &[Monomial]) -> Vec<Polynomial> {
    assert_eq!(a.cols(), columns.len(), "width must match the column set");
    let nvars = columns.first().map_or(0, |m| m.nvars());
    (0..a.rows())
        .map(|i| {
            Polynomial::from_terms(
                ctx.clone(),
                nvars,
                a.row(i).iter().enumerate().map(|(j, &c)| (columns[j].clone(), c)),
            )
        })
        .collect()
}

/// How rows are picked per degree when building the blocked matrix.
#[derive(Debug, Clone)]
pub enum RowSelection {
    /// Keep every row of I_{<=D}.
    All,
    /// Random per-degree budgets |T_d| - coeff((1-t)^{m-(n-k)}(1+t)^m, t^d)
    /// plus slack, capped by availability.
    Auto { slack_pct: f64, slack_min: usize },
    /// Explicit counts for degrees 2..=D.
    Explicit(Vec<usize>),
}

impl Default for RowSelection {
    fn default() -> Self {
        RowSelection::Auto { slack_pct: 0.05, slack_min: 2 }
    }
}

/// One selected row of the blocked matrix: the product multiplier, source
/// polynomial, and its sparse entries (column index -> coefficient
/// polynomial in the k guessed variables).
#[derive(Debug, Clone)]
pub struct BlockRow {
    pub multiplier: Monomial,
    pub poly_index: usize,
    pub degree: u32,
    pub entries: BTreeMap<usize, Polynomial>,
}

/// Macaulay matrix of a quadratic system at degree D over F_q[x_1..x_k],
/// stored by degree blocks. Columns are the main-variable monomials
/// T_{<=D} in graded-lex descending order (degree blocks T_D .. T_0).
#[derive(Debug, Clone)]
pub struct BlockMacaulay {
    ctx: Arc<FieldContext>,
    k: usize,
    main_nvars: usize,
    degree: u32,
    columns: Vec<Monomial>,
    /// start..end column range of each degree block, indexed by degree 0..=D.
    col_ranges: Vec<(usize, usize)>,
    /// selected rows grouped by product degree, outer index = D - d.
    row_blocks: Vec<Vec<BlockRow>>,
    /// total rows available per degree (|I_d|), indexed like row_blocks.
    available: Vec<usize>,
}

impl BlockMacaulay {
    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn main_nvars(&self) -> usize {
        self.main_nvars
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    /// Column range of the degree-d block.
    pub fn col_range(&self, d: u32) -> (usize, usize) {
        self.col_ranges[d as usize]
    }

    pub fn col_degree(&self, col: usize) -> u32 {
        self.columns[col].degree()
    }

    /// Rows of product degree d.
    pub fn rows_of_degree(&self, d: u32) -> &[BlockRow] {
        &self.row_blocks[(self.degree - d) as usize]
    }

    pub fn rows_available(&self, d: u32) -> usize {
        self.available[(self.degree - d) as usize]
    }

    pub fn total_rows(&self) -> usize {
        self.row_blocks.iter().map(|b| b.len()).sum()
    }

    /// All rows in order (degree descending, canonical within degree).
    pub fn all_rows(&self) -> impl Iterator<Item = &BlockRow> {
        self.row_blocks.iter().flatten()
    }

    /// Lemma-style structural invariants: entries confined to column degrees
    /// {d, d-1, d-2}, constant entries on the diagonal block, and entry
    /// degrees at most 1 (resp. 2) one (resp. two) blocks below.
    pub fn check_block_invariants(&self) -> Result<(), String> {
        for row in self.all_rows() {
            let d = row.degree;
            for (&col, poly) in &row.entries {
                let cd = self.col_degree(col);
                if cd + 2 < d || cd > d {
                    return Err(format!(
                        "row (deg {d}) has entry in column degree {cd}, outside {{d, d-1, d-2}}"
                    ));
                }
                let pd = poly.degree().unwrap_or(0);
                let cap = d - cd;
                if pd > cap {
                    return Err(format!(
                        "entry degree {pd} exceeds {cap} at column degree {cd} in a degree-{d} row"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Evaluate every entry at a guess for the k variables, producing the
    /// plain Macaulay matrix of the fixed system over the selected rows.
    pub fn specialize(&self, guess: &[Fe]) -> DenseMatrix {
        assert_eq!(guess.len(), self.k);
        let mut m = DenseMatrix::zeros(self.ctx.clone(), self.total_rows(), self.columns.len());
        for (i, row) in self.all_rows().enumerate() {
            for (&col, poly) in &row.entries {
                m[(i, col)] = poly.evaluate(guess);
            }
        }
        m
    }

    /// CSV debug dump: header of column monomials, one row per selected row.
    pub fn dump_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        write!(w, "row")?;
        for c in &self.columns {
            write!(w, ",{c}")?;
        }
        writeln!(w)?;
        for row in self.all_rows() {
            if row.multiplier.is_one() {
                write!(w, "f{}", row.poly_index + 1)?;
            } else {
                write!(w, "{}*f{}", row.multiplier, row.poly_index + 1)?;
            }
            for j in 0..self.columns.len() {
                match row.entries.get(&j) {
                    Some(p) => write!(w, ",{p}")?,
                    None => write!(w, ",0")?,
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Per-degree row budgets for the auto selection rule.
pub fn auto_row_budgets(
    n: usize,
    m: usize,
    k: usize,
    degree: u32,
    slack_pct: f64,
    slack_min: usize,
) -> Vec<(u32, usize)> {
    let nv = n - k;
    let a = m as i64 - nv as i64;
    let mut out = Vec::new();
    for d in 2..=degree {
        let td = binom_usize(nv + d as usize - 1, d as usize);
        let coeff = series_coefficient_i128(a, m as u64, d as usize);
        let target = (td as i128 - coeff).max(0) as usize;
        let slack = ((target as f64 * slack_pct).ceil() as usize).max(slack_min);
        out.push((d, target + slack));
    }
    out
}

fn binom_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Build the blocked Macaulay matrix of `sys` at `degree` over
/// F_q[x_1..x_k], selecting rows per `selection` with the given seed.
pub fn build_block_macaulay(
    sys: &QuadraticSystem,
    k: usize,
    degree: u32,
    selection: &RowSelection,
    seed: u64,
) -> Result<BlockMacaulay, MacaulayError> {
    let n = sys.n();
    if k == 0 || k >= n {
        return Err(MacaulayError::KOutOfRange { k, n });
    }
    if degree < 2 {
        return Err(MacaulayError::DegreeTooSmall { degree });
    }
    let main_nvars = n - k;
    let layered = split_variables(sys, k).expect("k checked above");

    // Columns: T_{<=D} over main variables, graded-lex descending, which
    // groups them into degree blocks T_D .. T_0.
    let columns = enumerate_monomials(main_nvars, 0, degree, &MonomialOrder::GradedLex);
    let mut col_ranges = vec![(0usize, 0usize); degree as usize + 1];
    {
        let mut start = 0usize;
        let mut cur = columns[0].degree();
        for (j, c) in columns.iter().enumerate() {
            if c.degree() != cur {
                col_ranges[cur as usize] = (start, j);
                start = j;
                cur = c.degree();
            }
        }
        col_ranges[cur as usize] = (start, columns.len());
    }
    let col_index: BTreeMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(j, c)| (c, j)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budgets: Option<Vec<usize>> = match selection {
        RowSelection::All => None,
        RowSelection::Auto { slack_pct, slack_min } => Some(
            auto_row_budgets(n, sys.m(), k, degree, *slack_pct, *slack_min)
                .into_iter()
                .map(|(_, b)| b)
                .collect(),
        ),
        RowSelection::Explicit(v) => {
            assert_eq!(v.len(), degree as usize - 1, "one budget per degree 2..=D");
            Some(v.clone())
        }
    };

    let mut row_blocks = Vec::new();
    let mut available = Vec::new();
    for d in (2..=degree).rev() {
        // multipliers of degree d-2 in the main variables, canonical order
        let mut ts = enumerate_monomials(main_nvars, d - 2, d - 2, &MonomialOrder::GradedLex);
        MonomialOrder::GradedLex.sort_descending(&mut ts);
        let mut labels: Vec<(Monomial, usize)> = Vec::new();
        for t in &ts {
            for i in 0..sys.m() {
                labels.push((t.clone(), i));
            }
        }
        available.push(labels.len());
        let chosen: Vec<(Monomial, usize)> = match &budgets {
            None => labels,
            Some(b) => {
                let want = b[(d - 2) as usize].min(labels.len());
                let mut idx: Vec<usize> = (0..labels.len()).collect();
                idx.shuffle(&mut rng);
                idx.truncate(want);
                idx.sort_unstable();
                idx.into_iter().map(|i| labels[i].clone()).collect()
            }
        };
        let mut rows = Vec::with_capacity(chosen.len());
        for (t, i) in chosen {
            let shifted = layered[i].mul_main_monomial(&t);
            let mut entries = BTreeMap::new();
            for (m, c) in shifted.terms() {
                let col = *col_index.get(m).expect("support within T_{<=D}");
                entries.insert(col, c.clone());
            }
            rows.push(BlockRow { multiplier: t, poly_index: i, degree: d, entries });
        }
        row_blocks.push(rows);
    }

    Ok(BlockMacaulay {
        ctx: sys.ctx().clone(),
        k,
        main_nvars,
        degree,
        columns,
        col_ranges,
        row_blocks,
        available,
    })
}
