//! Sparse multivariate polynomials, monomial enumeration and orders, and the
//! split of a quadratic system into guessed and main variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::field::{Fe, FieldContext, FieldError};

/// Exponent vector over a fixed variable set. The natural `Ord` is graded
/// lexicographic ascending (degree first, then lex with x1 highest priority),
/// so reverse iteration of a `BTreeMap<Monomial, _>` walks terms in the
/// canonical display order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u8>,
}

impl Monomial {
    pub fn new(exps: Vec<u8>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    /// The single variable x_{i+1} (0-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// True when every nonzero exponent sits on variable `v` (so 1 counts).
    pub fn is_pure_power_of(&self, v: usize) -> bool {
        self.exps.iter().enumerate().all(|(i, &e)| i == v || e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        }
    }

    /// Pick out the exponents of a subset of the variables.
    pub fn restrict(&self, vars: std::ops::Range<usize>) -> Monomial {
        Monomial { exps: self.exps[vars].to_vec() }
    }

    pub fn evaluate(&self, ctx: &FieldContext, point: &[Fe]) -> Fe {
        debug_assert_eq!(point.len(), self.exps.len());
        let mut acc = ctx.one();
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                acc = ctx.mul(acc, ctx.pow(point[i], e as u64));
            }
        }
        acc
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => self.exps.cmp(&other.exps),
            o => o,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Column orders used by the solvers. `GradedLex` is a genuine monomial
/// order; `XlElimination` is a column permutation that sends every pure
/// power of one variable (together with 1) to the tail, so the trailing
/// D+1 columns of T_{<=D} read x_e^D, ..., x_e, 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    GradedLex,
    XlElimination { var: usize },
}

impl MonomialOrder {
    /// Compare such that `Greater` means "earlier column".
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::GradedLex => a.cmp(b),
            MonomialOrder::XlElimination { var } => {
                let ta = a.is_pure_power_of(var);
                let tb = b.is_pure_power_of(var);
                match (ta, tb) {
                    (false, true) => Ordering::Greater,
                    (true, false) => Ordering::Less,
                    _ => a.cmp(b),
                }
            }
        }
    }

    pub fn sort_descending(&self, monos: &mut [Monomial]) {
        monos.sort_by(|a, b| self.cmp(b, a));
    }
}

/// All monomials of degree a..=b in `nvars` variables, listed in descending
/// column order (|T_d| = C(nvars+d-1, d)).
pub fn enumerate_monomials(nvars: usize, a: u32, b: u32, order: &MonomialOrder) -> Vec<Monomial> {
    assert!(a <= b, "empty degree range");
    let mut out = Vec::new();
    for d in a..=b {
        push_degree(nvars, d, &mut out);
    }
    order.sort_descending(&mut out);
    out
}

fn push_degree(nvars: usize, d: u32, out: &mut Vec<Monomial>) {
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    let mut exps = vec![0u8; nvars];
    fn rec(exps: &mut Vec<u8>, pos: usize, left: u32, out: &mut Vec<Monomial>) {
        if pos + 1 == exps.len() {
            exps[pos] = left as u8;
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in (0..=left).rev() {
            exps[pos] = e as u8;
            rec(exps, pos + 1, left - e, out);
        }
        exps[pos] = 0;
    }
    assert!(d <= u8::MAX as u32, "degree exceeds exponent width");
    rec(&mut exps, 0, d, out);
}

/// Sparse polynomial over a shared field context.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ctx: Arc<FieldContext>,
    nvars: usize,
    terms: BTreeMap<Monomial, Fe>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.nvars == other.nvars && self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ctx: Arc<FieldContext>, nvars: usize) -> Self {
        Polynomial { ctx, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: Arc<FieldContext>, nvars: usize, c: Fe) -> Self {
        let mut p = Self::zero(ctx, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Fe)>>(
        ctx: Arc<FieldContext>,
        nvars: usize,
        terms: I,
    ) -> Self {
        let mut p = Self::zero(ctx, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn coeff(&self, m: &Monomial) -> Fe {
        self.terms.get(m).copied().unwrap_or(Fe(0))
    }

    /// Terms in graded-lex descending order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, Fe)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Accumulate a term, dropping the entry when it cancels to zero.
    pub fn add_term(&mut self, m: Monomial, c: Fe) {
        if c.0 == 0 {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars);
        let ctx = self.ctx.clone();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = ctx.add(*e.get(), c);
                if s.0 == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn checked_same_field(&self, other: &Polynomial) -> Result<(), FieldError> {
        if self.ctx == other.ctx && self.nvars == other.nvars {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.checked_same_field(other).expect("polynomial arithmetic across fields");
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = Self::zero(self.ctx.clone(), self.nvars);
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), self.ctx.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> Polynomial {
        let mut out = Self::zero(self.ctx.clone(), self.nvars);
        for (m, &v) in &self.terms {
            out.add_term(m.clone(), self.ctx.mul(v, c));
        }
        out
    }

    /// Shift the support by a monomial; coefficients are unchanged.
    pub fn mul_monomial(&self, t: &Monomial) -> Polynomial {
        debug_assert_eq!(t.nvars(), self.nvars);
        let mut out = Self::zero(self.ctx.clone(), self.nvars);
        for (m, &c) in &self.terms {
            out.add_term(m.mul(t), c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.checked_same_field(other).expect("polynomial arithmetic across fields");
        let mut out = Self::zero(self.ctx.clone(), self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), self.ctx.mul(ca, cb));
            }
        }
        out
    }

    /// Naive term-by-term evaluation.
    pub fn evaluate(&self, point: &[Fe]) -> Fe {
        assert_eq!(point.len(), self.nvars);
        let mut acc = self.ctx.zero();
        for (m, &c) in &self.terms {
            acc = self.ctx.add(acc, self.ctx.mul(c, m.evaluate(&self.ctx, point)));
        }
        acc
    }

    /// Substitute a value for variable `var`, keeping the variable count.
    pub fn substitute(&self, var: usize, value: Fe) -> Polynomial {
        let mut out = Self::zero(self.ctx.clone(), self.nvars);
        for (m, &c) in &self.terms {
            let e = m.exp(var);
            let mut exps = m.exps().to_vec();
            exps[var] = 0;
            let factor = self.ctx.pow(value, e as u64);
            out.add_term(Monomial::new(exps), self.ctx.mul(c, factor));
        }
        out
    }

    /// Substitute values for the first k variables and reindex the remainder
    /// down to `nvars - k` variables.
    pub fn substitute_prefix(&self, values: &[Fe]) -> Polynomial {
        let k = values.len();
        assert!(k <= self.nvars);
        let mut out = Self::zero(self.ctx.clone(), self.nvars - k);
        for (m, &c) in &self.terms {
            let mut factor = c;
            for (i, &v) in values.iter().enumerate() {
                factor = self.ctx.mul(factor, self.ctx.pow(v, m.exp(i) as u64));
            }
            out.add_term(Monomial::new(m.exps()[k..].to_vec()), factor);
        }
        out
    }

    /// Substitute a value for variable `var` and drop that variable from the
    /// index space.
    pub fn substitute_remove(&self, var: usize, value: Fe) -> Polynomial {
        let mut out = Self::zero(self.ctx.clone(), self.nvars - 1);
        for (m, &c) in &self.terms {
            let factor = self.ctx.mul(c, self.ctx.pow(value, m.exp(var) as u64));
            let mut exps = Vec::with_capacity(self.nvars - 1);
            exps.extend_from_slice(&m.exps()[..var]);
            exps.extend_from_slice(&m.exps()[var + 1..]);
            out.add_term(Monomial::new(exps), factor);
        }
        out
    }

    /// Leading term under a column order, if any.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, Fe)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b))
            .map(|(m, &c)| (m, c))
    }

    pub fn is_univariate_in(&self, var: usize) -> bool {
        self.terms.keys().all(|m| m.is_pure_power_of(var))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms_desc() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", c.0)?;
            } else if c.0 == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", c.0)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemError {
    DegreeTooHigh { poly: usize, degree: u32 },
    WrongVariableCount { poly: usize },
    MixedFields,
    KOutOfRange { k: usize, n: usize },
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::DegreeTooHigh { poly, degree } => {
                write!(f, "polynomial {poly} has degree {degree} > 2")
            }
            SystemError::WrongVariableCount { poly } => {
                write!(f, "polynomial {poly} has the wrong variable count")
            }
            SystemError::MixedFields => write!(f, "polynomials from different fields"),
            SystemError::KOutOfRange { k, n } => write!(f, "k={k} out of range for n={n}"),
        }
    }
}

impl std::error::Error for SystemError {}

/// A system of m quadratic polynomials in n variables over one field.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSystem {
    ctx: Arc<FieldContext>,
    n: usize,
    polys: Vec<Polynomial>,
}

impl QuadraticSystem {
    pub fn new(ctx: Arc<FieldContext>, n: usize, polys: Vec<Polynomial>) -> Result<Self, SystemError> {
        for (i, p) in polys.iter().enumerate() {
            if p.nvars() != n {
                return Err(SystemError::WrongVariableCount { poly: i });
            }
            if *p.ctx() != ctx {
                return Err(SystemError::MixedFields);
            }
            if let Some(d) = p.degree() {
                if d > 2 {
                    return Err(SystemError::DegreeTooHigh { poly: i, degree: d });
                }
            }
        }
        Ok(QuadraticSystem { ctx, n, polys })
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.polys.len()
    }
    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn is_root(&self, point: &[Fe]) -> bool {
        self.polys.iter().all(|p| p.evaluate(point).0 == 0)
    }

    /// Substitute the first k variables and return the reduced system in n-k
    /// variables.
    pub fn substitute_prefix(&self, values: &[Fe]) -> QuadraticSystem {
        let polys = self.polys.iter().map(|p| p.substitute_prefix(values)).collect();
        QuadraticSystem { ctx: self.ctx.clone(), n: self.n - values.len(), polys }
    }

    /// Substitute one variable (by index) and drop it.
    pub fn substitute_remove(&self, var: usize, value: Fe) -> QuadraticSystem {
        let polys = self.polys.iter().map(|p| p.substitute_remove(var, value)).collect();
        QuadraticSystem { ctx: self.ctx.clone(), n: self.n - 1, polys }
    }
}

/// A polynomial written over main variables x_{k+1..n} with coefficients in
/// the guessed variables x_1..x_k.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredPolynomial {
    k: usize,
    main_nvars: usize,
    terms: BTreeMap<Monomial, Polynomial>,
}

impl LayeredPolynomial {
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn main_nvars(&self) -> usize {
        self.main_nvars
    }

    /// Coefficient polynomial (in the k guessed variables) of a main monomial.
    pub fn coeff(&self, main: &Monomial) -> Option<&Polynomial> {
        self.terms.get(main)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Polynomial)> {
        self.terms.iter()
    }

    /// Main-monomial degree of the polynomial.
    pub fn main_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Shift every main monomial by `t` (a monomial in the main variables).
    pub fn mul_main_monomial(&self, t: &Monomial) -> LayeredPolynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.mul(t), c.clone())).collect();
        LayeredPolynomial { k: self.k, main_nvars: self.main_nvars, terms }
    }

    /// Reassemble the plain polynomial in all n = k + main_nvars variables.
    pub fn recombine(&self, ctx: &Arc<FieldContext>) -> Polynomial {
        let n = self.k + self.main_nvars;
        let mut out = Polynomial::zero(ctx.clone(), n);
        for (main, cpoly) in &self.terms {
            for (gm, c) in cpoly.terms_desc() {
                let mut exps = Vec::with_capacity(n);
                exps.extend_from_slice(gm.exps());
                exps.extend_from_slice(main.exps());
                out.add_term(Monomial::new(exps), c);
            }
        }
        out
    }
}

/// Rewrite each f_i over the split x_1..x_k (guessed) / x_{k+1}..x_n (main).
pub fn split_variables(sys: &QuadraticSystem, k: usize) -> Result<Vec<LayeredPolynomial>, SystemError> {
    let n = sys.n();
    if k >= n {
        return Err(SystemError::KOutOfRange { k, n });
    }
    let main_nvars = n - k;
    let mut out = Vec::with_capacity(sys.m());
    for p in sys.polys() {
        let mut terms: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in p.terms_desc() {
            let guessed = m.restrict(0..k);
            let main = m.restrict(k..n);
            terms
                .entry(main)
                .or_insert_with(|| Polynomial::zero(sys.ctx().clone(), k))
                .add_term(guessed, c);
        }
        terms.retain(|_, c| !c.is_zero());
        out.push(LayeredPolynomial { k, main_nvars, terms });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    fn gf7() -> Arc<FieldContext> {
        FieldContext::prime(7).unwrap()
    }

    fn poly(ctx: &Arc<FieldContext>, nvars: usize, terms: &[(&[u8], u16)]) -> Polynomial {
        Polynomial::from_terms(
            ctx.clone(),
            nvars,
            terms.iter().map(|(e, c)| (Monomial::new(e.to_vec()), Fe(*c))),
        )
    }

    #[test]
    fn graded_lex_enumeration_two_vars() {
        // T_{0..3} in 2 variables, graded lex descending.
        let monos = enumerate_monomials(2, 0, 3, &MonomialOrder::GradedLex);
        let shown: Vec<String> = monos.iter().map(|m| m.to_string()).collect();
        assert_eq!(
            shown,
            ["x1^3", "x1^2*x2", "x1*x2^2", "x2^3", "x1^2", "x1*x2", "x2^2", "x1", "x2", "1"]
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_monomials(3, 2, 2, &MonomialOrder::GradedLex).len(), 6);
        let univ = enumerate_monomials(1, 0, 5, &MonomialOrder::GradedLex);
        assert_eq!(univ.len(), 6);
        assert_eq!(univ[0].to_string(), "x1^5");
        assert_eq!(univ[5].to_string(), "1");
    }

    #[test]
    fn xl_elimination_trailing_block() {
        for nvars in 2..=4usize {
            for var in 0..nvars {
                let d = 4;
                let monos = enumerate_monomials(nvars, 0, d, &MonomialOrder::XlElimination { var });
                let tail = &monos[monos.len() - (d as usize + 1)..];
                for (i, m) in tail.iter().enumerate() {
                    assert!(m.is_pure_power_of(var));
                    assert_eq!(m.degree(), d - i as u32);
                }
                for m in &monos[..monos.len() - (d as usize + 1)] {
                    assert!(!m.is_pure_power_of(var));
                }
            }
        }
    }

    #[test]
    fn multiply_shifts_support() {
        let ctx = gf7();
        let f = poly(&ctx, 2, &[(&[2, 0], 5), (&[1, 1], 6), (&[1, 0], 4), (&[0, 1], 5), (&[0, 0], 3)]);
        let t = Monomial::var(2, 0);
        let tf = f.mul_monomial(&t);
        assert_eq!(tf.coeff(&Monomial::new(vec![3, 0])), Fe(5));
        assert_eq!(tf.coeff(&Monomial::new(vec![1, 0])), Fe(3));
        assert_eq!(tf.degree(), Some(3));
        // t = 1 leaves the polynomial unchanged
        assert_eq!(f.mul_monomial(&Monomial::one(2)), f);
    }

    #[test]
    fn evaluate_matches_horner_univariate() {
        let ctx = gf7();
        // 5 x^2 + 4 x + 3 at x = 2: 31 mod 7 = 3
        let c = poly(&ctx, 1, &[(&[2], 5), (&[1], 4), (&[0], 3)]);
        assert_eq!(c.evaluate(&[Fe(2)]), Fe(3));
    }

    #[test]
    fn split_examples() {
        let ctx = gf7();
        // f1 = 5x1^2 + 6x1x2 + 4x1x3 + x2x3 + 5x3^2 + 4x1 + 5x2 + 3
        let f1 = poly(
            &ctx,
            3,
            &[
                (&[2, 0, 0], 5),
                (&[1, 1, 0], 6),
                (&[1, 0, 1], 4),
                (&[0, 1, 1], 1),
                (&[0, 0, 2], 5),
                (&[1, 0, 0], 4),
                (&[0, 1, 0], 5),
                (&[0, 0, 0], 3),
            ],
        );
        let sys = QuadraticSystem::new(ctx.clone(), 3, vec![f1.clone()]).unwrap();
        let layered = split_variables(&sys, 1).unwrap();
        let l = &layered[0];
        // coefficient of main monomial x2 (= x2^1 x3^0) is 6x1 + 5
        let c = l.coeff(&Monomial::new(vec![1, 0])).unwrap();
        assert_eq!(c.to_string(), "6*x1+5");
        // coefficient of x2*x3 is the constant 1
        let c = l.coeff(&Monomial::new(vec![1, 1])).unwrap();
        assert_eq!(c.to_string(), "1");
        // coefficient of 1 is 5x1^2 + 4x1 + 3
        let c = l.coeff(&Monomial::one(2)).unwrap();
        assert_eq!(c.to_string(), "5*x1^2+4*x1+3");
        // quadraticity: degree-2 main monomials have constant coefficients
        for (m, c) in l.terms() {
            if m.degree() == 2 {
                assert_eq!(c.degree(), Some(0));
            }
            assert!(m.degree() + c.degree().unwrap_or(0) <= 2);
        }
        // round trip
        assert_eq!(l.recombine(&ctx), f1);

        // k = 0 keeps every coefficient constant with identical support
        let layered0 = split_variables(&sys, 0).unwrap();
        assert_eq!(layered0[0].recombine(&ctx), f1);
        for (_, c) in layered0[0].terms() {
            assert_eq!(c.degree(), Some(0));
        }
    }

    #[test]
    fn split_k_out_of_range() {
        let ctx = gf7();
        let sys = QuadraticSystem::new(ctx.clone(), 2, vec![Polynomial::zero(ctx.clone(), 2)]).unwrap();
        assert!(matches!(split_variables(&sys, 2), Err(SystemError::KOutOfRange { .. })));
    }

    #[test]
    fn substitute_remove_reindexes() {
        let ctx = gf7();
        let f = poly(&ctx, 3, &[(&[1, 1, 1], 2), (&[0, 0, 2], 3), (&[0, 1, 0], 1)]);
        let g = f.substitute_remove(2, Fe(2));
        assert_eq!(g.nvars(), 2);
        // 2*x1*x2*2 + 3*4 + x2 = 4x1x2 + x2 + 5
        assert_eq!(g.coeff(&Monomial::new(vec![1, 1])), Fe(4));
        assert_eq!(g.coeff(&Monomial::new(vec![0, 1])), Fe(1));
        assert_eq!(g.coeff(&Monomial::one(2)), Fe(5));
    }
}
