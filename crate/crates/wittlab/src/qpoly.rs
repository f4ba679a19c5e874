//! Sparse multivariate polynomials over Q with structured variables, used as
//! the engine for solving ghost-component equations. Variables carry an
//! alphabet letter and an index, e.g. X3, Y1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, WittError};

/// Structured variable: alphabet letter plus positive index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub alph: u8,
    pub idx: u64,
}

impl Var {
    pub fn x(idx: u64) -> Var {
        Var { alph: b'X', idx }
    }
    pub fn y(idx: u64) -> Var {
        Var { alph: b'Y', idx }
    }
    pub fn z(idx: u64) -> Var {
        Var { alph: b'Z', idx }
    }
    pub fn name(&self) -> String {
        format!("{}{}", self.alph as char, self.idx)
    }
}

/// Monomial: sorted list of (variable, positive exponent).
pub type Mono = Vec<(Var, u32)>;

fn mono_degree(m: &Mono) -> u64 {
    m.iter().map(|&(_, e)| e as u64).sum()
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out: Mono = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sparse polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    terms: BTreeMap<Mono, BigRational>,
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly::default()
    }

    pub fn one() -> QPoly {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> QPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        QPoly { terms }
    }

    pub fn from_int(n: i64) -> QPoly {
        QPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> QPoly {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(v, 1)], BigRational::one());
        QPoly { terms }
    }

    pub fn monomial(m: Mono, c: BigRational) -> QPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        QPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(mono_degree).max().unwrap_or(0)
    }

    fn insert_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(prev) => {
                let s = prev + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_int(&self, n: i64) -> QPoly {
        self.mul_scalar(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn div_int(&self, n: u64) -> QPoly {
        self.mul_scalar(&BigRational::new(BigInt::one(), BigInt::from(n)))
    }

    pub fn pow(&self, e: u64) -> QPoly {
        let mut acc = QPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitute polynomials for variables.
    pub fn substitute(&self, image: &dyn Fn(Var) -> QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (m, c) in &self.terms {
            let mut term = QPoly::constant(c.clone());
            for &(v, e) in m {
                term = term.mul(&image(v).pow(e as u64));
            }
            out = out.add(&term);
        }
        out
    }

    /// Variables occurring with nonzero exponent.
    pub fn support(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for &(v, _) in m {
                s.insert(v);
            }
        }
        s
    }

    pub fn coeff(&self, m: &Mono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    /// First non-integral term, if any: (monomial, denominator).
    pub fn integrality_witness(&self) -> Option<(Mono, BigInt)> {
        self.terms
            .iter()
            .find(|(_, c)| !c.denom().is_one())
            .map(|(m, c)| (m.clone(), c.denom().clone()))
    }

    /// True when all coefficients are integers divisible by n.
    pub fn divisible_by_int(&self, n: &BigInt) -> bool {
        self.terms
            .values()
            .all(|c| c.denom().is_one() && (c.numer() % n).is_zero())
    }

    /// Evaluate with values from an arbitrary commutative ring context.
    /// Requires integer coefficients.
    pub fn eval<C: RingCtx>(&self, ctx: &C, assign: &dyn Fn(Var) -> C::E) -> Result<C::E> {
        let mut acc = ctx.zero();
        for (m, c) in &self.terms {
            if !c.denom().is_one() {
                return Err(WittError::NonIntegral(format!(
                    "cannot evaluate coefficient {} outside Q",
                    c
                )));
            }
            let mut term = ctx.from_bigint(c.numer());
            for &(v, e) in m {
                let mut p = assign(v);
                let mut acc_pow: Option<C::E> = None;
                let mut exp = e;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc_pow = Some(match acc_pow {
                            None => p.clone(),
                            Some(a) => ctx.mul(&a, &p),
                        });
                    }
                    exp >>= 1;
                    if exp > 0 {
                        p = ctx.mul(&p, &p);
                    }
                }
                term = ctx.mul(&term, &acc_pow.expect("exponent > 0"));
            }
            acc = ctx.add(&acc, &term);
        }
        Ok(acc)
    }

    // ---- serialization ----

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<serde_json::Value> = m
                    .iter()
                    .map(|(v, e)| json!([v.alph as char, v.idx, e]))
                    .collect();
                let coeff = if c.denom().is_one() {
                    c.numer().to_string()
                } else {
                    format!("{}/{}", c.numer(), c.denom())
                };
                json!({"monomial": mono, "coeff": coeff})
            })
            .collect();
        json!(terms)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<QPoly> {
        let arr = v
            .as_array()
            .ok_or_else(|| WittError::Parse("polynomial must be a list".into()))?;
        let mut out = QPoly::zero();
        for t in arr {
            let mono_arr = t
                .get("monomial")
                .and_then(|m| m.as_array())
                .ok_or_else(|| WittError::Parse("term missing monomial".into()))?;
            let mut mono: Mono = Vec::new();
            for entry in mono_arr {
                let triple = entry
                    .as_array()
                    .ok_or_else(|| WittError::Parse("bad monomial entry".into()))?;
                let alph = triple[0]
                    .as_str()
                    .and_then(|s| s.bytes().next())
                    .ok_or_else(|| WittError::Parse("bad alphabet".into()))?;
                let idx = triple[1]
                    .as_u64()
                    .ok_or_else(|| WittError::Parse("bad index".into()))?;
                let e = triple[2]
                    .as_u64()
                    .ok_or_else(|| WittError::Parse("bad exponent".into()))? as u32;
                mono.push((Var { alph, idx }, e));
            }
            mono.sort_by_key(|&(v, _)| v);
            let cs = t
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| WittError::Parse("term missing coeff".into()))?;
            let c = parse_rational(cs)?;
            out.insert_term(mono, c);
        }
        Ok(out)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| WittError::Parse(format!("bad numerator {}", n)))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| WittError::Parse(format!("bad denominator {}", d)))?;
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s
            .trim()
            .parse()
            .map_err(|_| WittError::Parse(format!("bad integer {}", s)))?;
        Ok(BigRational::from_integer(n))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded-lex: total degree descending, then variables ascending
        let mut entries: Vec<(&Mono, &BigRational)> = self.terms.iter().collect();
        entries.sort_by(|(m1, _), (m2, _)| {
            mono_degree(m2)
                .cmp(&mono_degree(m1))
                .then_with(|| m1.cmp(m2))
        });
        for (i, (m, c)) in entries.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let cs = if abs.denom().is_one() {
                abs.numer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            let mut factors = Vec::new();
            for (v, e) in m.iter() {
                if *e == 1 {
                    factors.push(v.name());
                } else {
                    factors.push(format!("{}^{}", v.name(), e));
                }
            }
            if factors.is_empty() {
                write!(f, "{}", cs)?;
            } else if cs == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", cs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// ---- Generic ring evaluation context ----

/// Minimal commutative-ring interface for evaluating integer polynomials
/// with values in an arbitrary ring (coefficient rings, Witt rings, ...).
pub trait RingCtx {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn from_bigint(&self, n: &BigInt) -> Self::E;
}

impl RingCtx for crate::ring::RingSpec {
    type E = crate::ring::RingElem;

    fn zero(&self) -> Self::E {
        crate::ring::RingSpec::zero(self)
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.add(b).expect("spec match")
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.mul(b).expect("spec match")
    }
    fn from_bigint(&self, n: &BigInt) -> Self::E {
        crate::ring::RingSpec::from_bigint(self, n.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x1 = QPoly::var(Var::x(1));
        let x2 = QPoly::var(Var::x(2));
        let w2 = x1.pow(2).add(&x2.mul_int(2));
        assert_eq!(format!("{}", w2), "X1^2 + 2*X2");
        let sq = w2.pow(2);
        assert_eq!(
            format!("{}", sq),
            "X1^4 + 4*X1^2*X2 + 4*X2^2"
        );
    }

    #[test]
    fn substitution() {
        let x1 = QPoly::var(Var::x(1));
        let p = x1.pow(2).sub(&QPoly::one());
        let q = p.substitute(&|v| {
            assert_eq!(v, Var::x(1));
            QPoly::var(Var::y(1)).add(&QPoly::one())
        });
        // (y+1)^2 - 1 = y^2 + 2y
        let y1 = QPoly::var(Var::y(1));
        assert_eq!(q, y1.pow(2).add(&y1.mul_int(2)));
    }

    #[test]
    fn ring_eval() {
        use crate::ring::RingSpec;
        let m5 = RingSpec::modular(5).unwrap();
        let p = QPoly::var(Var::x(1)).pow(3).add(&QPoly::from_int(4));
        let val = p.eval(&m5, &|_| m5.from_i64(2)).unwrap();
        assert_eq!(val, m5.from_i64(2)); // 8 + 4 = 12 = 2 mod 5
    }

    #[test]
    fn json_roundtrip() {
        let p = QPoly::var(Var::x(1))
            .mul(&QPoly::var(Var::y(2)))
            .sub(&QPoly::from_int(7).div_int(2));
        let q = QPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
    }
}
