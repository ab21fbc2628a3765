//! Arithmetic in small finite fields GF(p^r) with q = p^r <= 2^16.
//!
//! Elements are plain integers in [0, q). For r = 1 the value is a residue
//! mod p; for r > 1 it is the coefficient vector of a residue polynomial
//! packed base p (low digit = constant coefficient). Extension-field
//! multiplication goes through log/antilog tables built at construction.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub const MAX_Q: u32 = 1 << 16;

/// A field element: the packed integer encoding, valid only relative to the
/// `FieldContext` it was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u16);

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u32),
    ReducibleModulus,
    FieldTooLarge(u64),
    BadModulus(String),
    DivisionByZero,
    MixedFields,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::ReducibleModulus => write!(f, "modulus polynomial is reducible"),
            FieldError::FieldTooLarge(q) => write!(f, "field size {q} exceeds 2^16"),
            FieldError::BadModulus(s) => write!(f, "bad modulus polynomial: {s}"),
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::MixedFields => write!(f, "operands belong to different fields"),
        }
    }
}

impl std::error::Error for FieldError {}

/// Field description as it appears in instance files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub r: u32,
    /// Modulus coefficients, low degree first, length r+1. Omitted for prime fields.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u16>>,
}

/// Immutable context for one finite field. Shared behind `Arc` and safe to
/// use from any number of threads.
#[derive(Debug)]
pub struct FieldContext {
    p: u32,
    r: u32,
    q: u32,
    /// Modulus coefficients, low degree first; length r+1 when r > 1, empty otherwise.
    modulus: Vec<u16>,
    /// log[v] for v in 1..q; log[0] is a sentinel. Present only when r > 1.
    log: Vec<u16>,
    /// alog[i] = g^i for i in 0..q-1, g a fixed generator. Present only when r > 1.
    alog: Vec<u16>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}
impl Eq for FieldContext {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Fixed low-weight default moduli over GF(2), low degree first.
fn default_binary_modulus(r: u32) -> Option<Vec<u16>> {
    // Each entry is (r, exponents of nonzero terms besides 0 and r).
    let table: &[(u32, &[u32])] = &[
        (2, &[1]),
        (3, &[1]),
        (4, &[1]),
        (5, &[2]),
        (6, &[1]),
        (7, &[1]),
        (8, &[1, 3, 4]),
        (9, &[4]),
        (10, &[3]),
        (11, &[2]),
        (12, &[1, 4, 6]),
        (13, &[1, 3, 4]),
        (14, &[1, 6, 10]),
        (15, &[1]),
        (16, &[1, 3, 12]),
    ];
    for &(deg, mids) in table {
        if deg == r {
            let mut c = vec![0u16; (r + 1) as usize];
            c[0] = 1;
            c[r as usize] = 1;
            for &e in mids {
                c[e as usize] = 1;
            }
            return Some(c);
        }
    }
    None
}

// Polynomial helpers over GF(p), coefficients low degree first.

fn poly_deg(a: &[u16]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_rem(a: &[u16], b: &[u16], p: u32) -> Vec<u16> {
    let db = poly_deg(b).expect("division by zero polynomial");
    let mut r: Vec<u32> = a.iter().map(|&c| c as u32).collect();
    let inv_lead = mod_inv(b[db] as u32, p);
    while let Some(dr) = r.iter().rposition(|&c| c != 0) {
        if dr < db {
            break;
        }
        let f = r[dr] * inv_lead % p;
        for i in 0..=db {
            let sub = f * b[i] as u32 % p;
            r[dr - db + i] = (r[dr - db + i] + p - sub) % p;
        }
    }
    r.iter().map(|&c| c as u16).collect()
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p prime, a != 0: Fermat.
    mod_pow(a, (p - 2) as u64, p)
}

fn mod_pow(b: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut bb = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % p as u64;
        }
        bb = bb * bb % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Irreducibility over GF(p) by trial division by every monic polynomial of
/// degree 1..=r/2.
fn is_irreducible(modulus: &[u16], p: u32) -> bool {
    let r = match poly_deg(modulus) {
        Some(d) => d,
        None => return false,
    };
    if r == 0 {
        return false;
    }
    let half = r / 2;
    for d in 1..=half {
        // Enumerate monic divisor candidates of degree d: d free coefficients.
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = vec![0u16; d + 1];
            cand[d] = 1;
            let mut t = idx;
            for c in cand.iter_mut().take(d) {
                *c = (t % p as u64) as u16;
                t /= p as u64;
            }
            let rem = poly_rem(modulus, &cand, p);
            if poly_deg(&rem).is_none() {
                return false;
            }
        }
    }
    true
}

impl FieldContext {
    /// Build GF(p^r). When `modulus` is omitted and r > 1, a fixed default is
    /// used (GF(2^r) table, or the smallest irreducible in a deterministic
    /// scan otherwise) so that instances are reproducible.
    pub fn new(p: u32, r: u32, modulus: Option<&[u16]>) -> Result<Arc<Self>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if r == 0 {
            return Err(FieldError::BadModulus("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(r).ok_or(FieldError::FieldTooLarge(u64::MAX))?;
        if q > MAX_Q as u64 {
            return Err(FieldError::FieldTooLarge(q));
        }
        let q = q as u32;
        if r == 1 {
            if let Some(m) = modulus {
                if poly_deg(m) != Some(1) {
                    return Err(FieldError::BadModulus("prime field takes no modulus of degree != 1".into()));
                }
            }
            return Ok(Arc::new(FieldContext { p, r, q, modulus: Vec::new(), log: Vec::new(), alog: Vec::new() }));
        }
        let modulus: Vec<u16> = match modulus {
            Some(m) => {
                if m.len() != (r + 1) as usize || m[r as usize] == 0 {
                    return Err(FieldError::BadModulus(format!(
                        "expected {} coefficients with nonzero top coefficient",
                        r + 1
                    )));
                }
                if m.iter().any(|&c| c as u32 >= p) {
                    return Err(FieldError::BadModulus("coefficient out of range".into()));
                }
                if m[r as usize] != 1 {
                    return Err(FieldError::BadModulus("modulus must be monic".into()));
                }
                m.to_vec()
            }
            None => match default_binary_modulus(r).filter(|_| p == 2) {
                Some(m) => m,
                None => Self::search_default_modulus(p, r),
            },
        };
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus);
        }
        let mut ctx = FieldContext { p, r, q, modulus, log: Vec::new(), alog: Vec::new() };
        ctx.build_tables();
        Ok(Arc::new(ctx))
    }

    /// GF(p) shortcut.
    pub fn prime(p: u32) -> Result<Arc<Self>, FieldError> {
        Self::new(p, 1, None)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Arc<Self>, FieldError> {
        Self::new(spec.p, spec.r, spec.modulus.as_deref())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            r: self.r,
            modulus: if self.r > 1 { Some(self.modulus.clone()) } else { None },
        }
    }

    fn search_default_modulus(p: u32, r: u32) -> Vec<u16> {
        // Deterministic: smallest packed value wins.
        let count = (p as u64).pow(r);
        for idx in 0..count {
            let mut cand = vec![0u16; (r + 1) as usize];
            cand[r as usize] = 1;
            let mut t = idx;
            for c in cand.iter_mut().take(r as usize) {
                *c = (t % p as u64) as u16;
                t /= p as u64;
            }
            if is_irreducible(&cand, p) {
                return cand;
            }
        }
        unreachable!("an irreducible polynomial of degree {r} over GF({p}) exists");
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        // Find a generator of the multiplicative group, trying the element
        // "x" (packed value p) first.
        let mut candidates: Vec<u32> = vec![self.p];
        candidates.extend(2..self.q);
        for g in candidates {
            if g == 0 || g == 1 || g as usize >= q {
                continue;
            }
            let mut alog = vec![0u16; q - 1];
            let mut v = 1u16;
            let mut ok = true;
            for (i, slot) in alog.iter_mut().enumerate() {
                *slot = v;
                v = self.poly_mul_mod(v, g as u16);
                if v == 1 && i + 2 < q {
                    ok = false; // order divides i+1 < q-1
                    break;
                }
            }
            if ok && v == 1 {
                let mut log = vec![0u16; q];
                for (i, &a) in alog.iter().enumerate() {
                    log[a as usize] = i as u16;
                }
                self.alog = alog;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    /// Schoolbook product of two packed elements, reduced by the modulus.
    /// Exhaustively cross-checked against table multiplication in tests.
    pub fn poly_mul_mod(&self, a: u16, b: u16) -> u16 {
        let p = self.p as u64;
        let r = self.r as usize;
        let da = self.unpack(a);
        let db = self.unpack(b);
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce by the monic modulus.
        for d in (r..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..r {
                let m = self.modulus[i] as u64;
                if m != 0 {
                    let idx = d - r + i;
                    prod[idx] = (prod[idx] + p * p - c * m % p) % p;
                }
            }
        }
        self.pack(&prod[..r])
    }

    fn unpack(&self, a: u16) -> Vec<u16> {
        let mut v = a as u32;
        let mut out = vec![0u16; self.r as usize];
        for d in out.iter_mut() {
            *d = (v % self.p) as u16;
            v /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u64]) -> u16 {
        let mut acc = 0u64;
        for &d in digits.iter().rev() {
            acc = acc * self.p as u64 + d;
        }
        acc as u16
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }
    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// Wrap an integer already in [0, q).
    pub fn elem(&self, v: u32) -> Fe {
        assert!(v < self.q, "element {v} out of range for q={}", self.q);
        Fe(v as u16)
    }

    /// Reduce an arbitrary integer into the field. For r = 1 this is the
    /// residue mod p; for r > 1 only values < q are meaningful, so reduce mod q.
    pub fn elem_from_u64(&self, v: u64) -> Fe {
        if self.r == 1 {
            Fe((v % self.p as u64) as u16)
        } else {
            Fe((v % self.q as u64) as u16)
        }
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.r == 1 {
            let s = a.0 as u32 + b.0 as u32;
            Fe(if s >= self.p { (s - self.p) as u16 } else { s as u16 })
        } else if self.p == 2 {
            Fe(a.0 ^ b.0)
        } else {
            let (mut x, mut y) = (a.0 as u32, b.0 as u32);
            let mut out = 0u32;
            let mut mul = 1u32;
            for _ in 0..self.r {
                let s = (x % self.p + y % self.p) % self.p;
                out += s * mul;
                mul *= self.p;
                x /= self.p;
                y /= self.p;
            }
            Fe(out as u16)
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.r == 1 {
            Fe(if a.0 == 0 { 0 } else { (self.p - a.0 as u32) as u16 })
        } else if self.p == 2 {
            a
        } else {
            let mut x = a.0 as u32;
            let mut out = 0u32;
            let mut mul = 1u32;
            for _ in 0..self.r {
                let d = x % self.p;
                out += if d == 0 { 0 } else { self.p - d } * mul;
                mul *= self.p;
                x /= self.p;
            }
            Fe(out as u16)
        }
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.r == 1 {
            Fe((a.0 as u32 * b.0 as u32 % self.p) as u16)
        } else if a.0 == 0 || b.0 == 0 {
            Fe(0)
        } else {
            let s = self.log[a.0 as usize] as u32 + self.log[b.0 as usize] as u32;
            let qm1 = self.q - 1;
            let s = if s >= qm1 { s - qm1 } else { s };
            Fe(self.alog[s as usize])
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if self.r == 1 {
            Ok(Fe(mod_inv(a.0 as u32, self.p) as u16))
        } else {
            let l = self.log[a.0 as usize] as u32;
            let qm1 = self.q - 1;
            Ok(Fe(self.alog[((qm1 - l) % qm1) as usize]))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return Fe(0);
        }
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn rand_elem<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.q) as u16)
    }

    pub fn rand_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.q) as u16)
    }

    /// Per-scalar multiplication table for tight inner loops: tbl[v] = c * v.
    /// Only sensible for small q.
    pub fn mul_table(&self, c: Fe) -> Vec<u16> {
        (0..self.q).map(|v| self.mul(c, Fe(v as u16)).0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gf7_basics() {
        let f = FieldContext::prime(7).unwrap();
        assert_eq!(f.q(), 7);
        assert_eq!(f.mul(Fe(3), Fe(5)), Fe(1));
        assert_eq!(f.inv(Fe(0)), Err(FieldError::DivisionByZero));
        assert_eq!(f.inv(Fe(3)).unwrap(), Fe(5));
        assert_eq!(f.pow(Fe(3), 6), Fe(1));
    }

    #[test]
    fn gf16_standard_modulus() {
        // x^4 + x + 1
        let f = FieldContext::new(2, 4, Some(&[1, 1, 0, 0, 1])).unwrap();
        assert_eq!(f.q(), 16);
        // x * (x^3 + 1) = x^4 + x = 1
        assert_eq!(f.mul(Fe(0x2), Fe(0x9)), Fe(0x1));
        // default modulus for GF(16) is the same polynomial
        let d = FieldContext::new(2, 4, None).unwrap();
        assert_eq!(d.modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^4 + 1 = (x+1)^4 over GF(2)
        let e = FieldContext::new(2, 4, Some(&[1, 0, 0, 0, 1]));
        assert_eq!(e.err(), Some(FieldError::ReducibleModulus));
    }

    #[test]
    fn not_prime_and_too_large() {
        assert_eq!(FieldContext::prime(6).err(), Some(FieldError::NotPrime(6)));
        assert!(matches!(FieldContext::new(2, 17, None).err(), Some(FieldError::FieldTooLarge(_))));
    }

    #[test]
    fn table_mul_matches_schoolbook_exhaustive() {
        for (p, r) in [(2u32, 4u32), (2, 8), (3, 4), (5, 2)] {
            let f = FieldContext::new(p, r, None).unwrap();
            assert!(f.q() <= 256 * 3); // keeps the scan cheap
            for a in 0..f.q() {
                for b in 0..f.q() {
                    let t = f.mul(Fe(a as u16), Fe(b as u16)).0;
                    let s = f.poly_mul_mod(a as u16, b as u16);
                    assert_eq!(t, s, "q={} a={} b={}", f.q(), a, b);
                }
            }
        }
    }

    #[test]
    fn field_axioms_random() {
        for (p, r) in [(7u32, 1u32), (2, 8), (251, 1), (3, 5), (2, 16)] {
            let f = FieldContext::new(p, r, None).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            for _ in 0..200 {
                let a = f.rand_elem(&mut rng);
                let b = f.rand_elem(&mut rng);
                let c = f.rand_elem(&mut rng);
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.sub(f.add(a, b), b), a);
                if a.0 != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                    assert_eq!(f.pow(a, (f.q() - 1) as u64), f.one());
                }
            }
        }
    }

    #[test]
    fn exp_log_roundtrip() {
        let f = FieldContext::new(2, 8, None).unwrap();
        for a in 1..f.q() {
            let l = f.log[a as usize];
            assert_eq!(f.alog[l as usize], a as u16);
        }
    }

    #[test]
    fn spec_roundtrip() {
        let f = FieldContext::new(2, 8, None).unwrap();
        let spec = f.spec();
        assert_eq!(spec.modulus.as_deref(), Some(&[1, 1, 0, 1, 1, 0, 0, 0, 1][..]));
        let g = FieldContext::from_spec(&spec).unwrap();
        assert_eq!(*f, *g);
    }
}
