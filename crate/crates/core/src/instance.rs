//! Instance files: JSON serialization of quadratic systems and seeded
//! random / planted generators.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::{Fe, FieldContext, FieldError, FieldSpec};
use crate::poly::{enumerate_monomials, Monomial, MonomialOrder, Polynomial, QuadraticSystem, SystemError};

#[derive(Debug)]
pub enum InstanceError {
    Field(FieldError),
    System(SystemError),
    Parse(String),
    Io(std::io::Error),
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::Field(e) => write!(f, "field error: {e}"),
            InstanceError::System(e) => write!(f, "system error: {e}"),
            InstanceError::Parse(s) => write!(f, "parse error: {s}"),
            InstanceError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for InstanceError {}

impl From<FieldError> for InstanceError {
    fn from(e: FieldError) -> Self {
        InstanceError::Field(e)
    }
}
impl From<SystemError> for InstanceError {
    fn from(e: SystemError) -> Self {
        InstanceError::System(e)
    }
}
impl From<std::io::Error> for InstanceError {
    fn from(e: std::io::Error) -> Self {
        InstanceError::Io(e)
    }
}

/// On-disk form: terms are ["e1,e2,...,en", coeff] pairs in graded-lex
/// descending order.
#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub field: FieldSpec,
    pub n: usize,
    pub m: usize,
    pub polys: Vec<Vec<(String, u32)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planted: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn to_instance_file(sys: &QuadraticSystem, planted: Option<&[Fe]>, seed: Option<u64>) -> InstanceFile {
    let polys = sys
        .polys()
        .iter()
        .map(|p| {
            p.terms_desc()
                .map(|(m, c)| {
                    let exps: Vec<String> = m.exps().iter().map(|e| e.to_string()).collect();
                    (exps.join(","), c.0 as u32)
                })
                .collect()
        })
        .collect();
    InstanceFile {
        field: sys.ctx().spec(),
        n: sys.n(),
        m: sys.m(),
        polys,
        planted: planted.map(|z| z.iter().map(|v| v.0 as u32).collect()),
        seed,
    }
}

pub fn from_instance_file(file: &InstanceFile) -> Result<(QuadraticSystem, Option<Vec<Fe>>), InstanceError> {
    let ctx = FieldContext::from_spec(&file.field)?;
    if file.polys.len() != file.m {
        return Err(InstanceError::Parse(format!(
            "m={} but {} polynomials present",
            file.m,
            file.polys.len()
        )));
    }
    let mut polys = Vec::with_capacity(file.m);
    for (i, terms) in file.polys.iter().enumerate() {
        let mut p = Polynomial::zero(ctx.clone(), file.n);
        for (exps, coeff) in terms {
            let parts: Result<Vec<u8>, _> = exps.split(',').map(|s| s.trim().parse::<u8>()).collect();
            let parts = parts.map_err(|e| InstanceError::Parse(format!("poly {i}: {e}")))?;
            if parts.len() != file.n {
                return Err(InstanceError::Parse(format!(
                    "poly {i}: exponent vector of length {} for n={}",
                    parts.len(),
                    file.n
                )));
            }
            if *coeff >= ctx.q() {
                return Err(InstanceError::Parse(format!("poly {i}: coefficient {coeff} >= q")));
            }
            p.add_term(Monomial::new(parts), ctx.elem(*coeff));
        }
        polys.push(p);
    }
    let sys = QuadraticSystem::new(ctx.clone(), file.n, polys)?;
    let planted = match &file.planted {
        Some(z) => {
            if z.len() != file.n {
                return Err(InstanceError::Parse("planted point length mismatch".into()));
            }
            Some(z.iter().map(|&v| ctx.elem(v)).collect())
        }
        None => None,
    };
    Ok((sys, planted))
}

pub fn write_instance(path: &std::path::Path, file: &InstanceFile) -> Result<(), InstanceError> {
    let mut s = serde_json::to_string_pretty(file).map_err(|e| InstanceError::Parse(e.to_string()))?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

pub fn read_instance(path: &std::path::Path) -> Result<(QuadraticSystem, Option<Vec<Fe>>), InstanceError> {
    let text = std::fs::read_to_string(path)?;
    let file: InstanceFile =
        serde_json::from_str(&text).map_err(|e| InstanceError::Parse(e.to_string()))?;
    from_instance_file(&file)
}

/// Uniform random quadratic system: every coefficient of every monomial of
/// degree <= 2 is drawn uniformly.
pub fn gen_random(ctx: &Arc<FieldContext>, n: usize, m: usize, seed: u64) -> QuadraticSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = enumerate_monomials(n, 0, 2, &MonomialOrder::GradedLex);
    let polys = (0..m)
        .map(|_| {
            Polynomial::from_terms(
                ctx.clone(),
                n,
                monos.iter().map(|t| (t.clone(), ctx.rand_elem(&mut rng))),
            )
        })
        .collect();
    QuadraticSystem::new(ctx.clone(), n, polys).expect("generated quadratics")
}

/// Random system with the constant terms adjusted so a seeded random point
/// is a root. The root is verified before returning.
pub fn gen_planted(ctx: &Arc<FieldContext>, n: usize, m: usize, seed: u64) -> (QuadraticSystem, Vec<Fe>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e3779b97f4a7c15));
    let point: Vec<Fe> = (0..n).map(|_| ctx.rand_elem(&mut rng)).collect();
    let base = gen_random(ctx, n, m, seed);
    let one = Monomial::one(n);
    let polys: Vec<Polynomial> = base
        .polys()
        .iter()
        .map(|p| {
            let v = p.evaluate(&point);
            let mut q = p.clone();
            q.add_term(one.clone(), ctx.neg(v));
            q
        })
        .collect();
    let sys = QuadraticSystem::new(ctx.clone(), n, polys).expect("still quadratic");
    assert!(sys.is_root(&point), "planted point must be a root");
    (sys, point)
}

/// Exhaustive root enumeration over F_q^n; the desk-scale oracle.
pub fn brute_force_roots(sys: &QuadraticSystem) -> Vec<Vec<Fe>> {
    let q = sys.ctx().q() as u64;
    let n = sys.n();
    let total = q.checked_pow(n as u32).expect("enumeration domain overflow");
    let mut out = Vec::new();
    let mut point = vec![Fe(0); n];
    for idx in 0..total {
        let mut t = idx;
        for slot in point.iter_mut() {
            *slot = Fe((t % q) as u16);
            t /= q;
        }
        if sys.is_root(&point) {
            out.push(point.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_instance_has_root() {
        let ctx = FieldContext::prime(7).unwrap();
        let (sys, z) = gen_planted(&ctx, 4, 5, 1);
        assert!(sys.is_root(&z));
        assert_eq!(sys.n(), 4);
        assert_eq!(sys.m(), 5);
    }

    #[test]
    fn instance_file_roundtrip() {
        let ctx = FieldContext::new(2, 4, None).unwrap();
        let (sys, z) = gen_planted(&ctx, 3, 4, 9);
        let file = to_instance_file(&sys, Some(&z), Some(9));
        let json = serde_json::to_string(&file).unwrap();
        let parsed: InstanceFile = serde_json::from_str(&json).unwrap();
        let (sys2, z2) = from_instance_file(&parsed).unwrap();
        assert_eq!(sys, sys2);
        assert_eq!(Some(z), z2.map(|v| v));
    }

    #[test]
    fn generation_is_deterministic() {
        let ctx = FieldContext::prime(31).unwrap();
        let a = gen_planted(&ctx, 5, 6, 42);
        let b = gen_planted(&ctx, 5, 6, 42);
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        let c = gen_planted(&ctx, 5, 6, 43);
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn brute_force_small() {
        let ctx = FieldContext::prime(3).unwrap();
        let (sys, z) = gen_planted(&ctx, 3, 3, 5);
        let roots = brute_force_roots(&sys);
        assert!(roots.contains(&z));
    }
}
