//! Pluggable exact coefficient rings.
//!
//! A [`RingSpec`] names one of the supported commutative rings (integers,
//! rationals, Z/m, rationals localized at a prime p, or a sparse polynomial
//! ring over one of those). A [`RingElem`] is a canonical-form element tagged
//! with its spec. Equality is representation equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Result, WittError};

// ---- Specs ----

#[derive(Debug, PartialEq, Eq, Hash)]
enum SpecData {
    Integers,
    Rationals,
    /// Residues in [0, m), m >= 2.
    Mod(BigInt),
    /// Fractions with denominator coprime to p.
    PLocal(u64),
    /// Sparse multivariate polynomials over a non-polynomial base,
    /// variables in declaration order.
    Poly { base: RingSpec, vars: Vec<String> },
}

/// Identifier of a supported coefficient ring. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingSpec(Arc<SpecData>);

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            SpecData::Integers => write!(f, "Z"),
            SpecData::Rationals => write!(f, "Q"),
            SpecData::Mod(m) => write!(f, "Z/{}", m),
            SpecData::PLocal(p) => write!(f, "Z_({})", p),
            SpecData::Poly { base, vars } => write!(f, "{}[{}]", base, vars.join(",")),
        }
    }
}

impl RingSpec {
    pub fn integers() -> Self {
        RingSpec(Arc::new(SpecData::Integers))
    }

    pub fn rationals() -> Self {
        RingSpec(Arc::new(SpecData::Rationals))
    }

    /// Z/m with m >= 2.
    pub fn modular(m: impl Into<BigInt>) -> Result<Self> {
        let m = m.into();
        if m < BigInt::from(2) {
            return Err(WittError::InvalidSpec(format!("modulus {} < 2", m)));
        }
        Ok(RingSpec(Arc::new(SpecData::Mod(m))))
    }

    /// Rationals localized at the prime p.
    pub fn p_local(p: u64) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(WittError::InvalidSpec(format!("{} is not prime", p)));
        }
        Ok(RingSpec(Arc::new(SpecData::PLocal(p))))
    }

    /// Polynomial ring over `base` in the named variables (declaration order).
    pub fn polynomial(base: RingSpec, vars: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) {
                return Err(WittError::InvalidSpec(format!("duplicate variable {}", v)));
            }
            if base.all_vars().contains(v) {
                return Err(WittError::InvalidSpec(format!(
                    "variable {} already used by base ring",
                    v
                )));
            }
        }
        if vars.is_empty() {
            return Err(WittError::InvalidSpec("empty variable list".into()));
        }
        Ok(RingSpec(Arc::new(SpecData::Poly { base, vars })))
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(&*self.0, SpecData::Poly { .. })
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.0, SpecData::Rationals)
    }

    pub fn is_integers(&self) -> bool {
        matches!(&*self.0, SpecData::Integers)
    }

    pub fn p_local_prime(&self) -> Option<u64> {
        match &*self.0 {
            SpecData::PLocal(p) => Some(*p),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        match &*self.0 {
            SpecData::Mod(m) => Some(m),
            _ => None,
        }
    }

    pub fn poly_base(&self) -> Option<&RingSpec> {
        match &*self.0 {
            SpecData::Poly { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn poly_vars(&self) -> Option<&[String]> {
        match &*self.0 {
            SpecData::Poly { vars, .. } => Some(vars),
            _ => None,
        }
    }

    fn all_vars(&self) -> Vec<String> {
        match &*self.0 {
            SpecData::Poly { base, vars } => {
                let mut v = base.all_vars();
                v.extend(vars.iter().cloned());
                v
            }
            _ => Vec::new(),
        }
    }

    /// The characteristic when it is a prime p (char-p fast paths), else None.
    pub fn prime_char(&self) -> Option<u64> {
        match &*self.0 {
            SpecData::Mod(m) => {
                if let Some(m64) = to_u64(m) {
                    if crate::arith::is_prime(m64) {
                        return Some(m64);
                    }
                }
                None
            }
            SpecData::Poly { base, .. } => base.prime_char(),
            _ => None,
        }
    }

    /// True for rings where internal solves may lift to Q losslessly.
    pub fn is_torsion_free(&self) -> bool {
        match &*self.0 {
            SpecData::Integers | SpecData::Rationals | SpecData::PLocal(_) => true,
            SpecData::Poly { base, .. } => base.is_torsion_free(),
            SpecData::Mod(_) => false,
        }
    }

    /// The same ring with rational scalars (Z -> Q, Z_(p) -> Q, polynomial
    /// base lifted). Errors on Z/m.
    pub fn rational_lift(&self) -> Result<RingSpec> {
        match &*self.0 {
            SpecData::Integers | SpecData::Rationals | SpecData::PLocal(_) => {
                Ok(RingSpec::rationals())
            }
            SpecData::Poly { base, vars } => {
                RingSpec::polynomial(base.rational_lift()?, vars.clone())
            }
            SpecData::Mod(_) => Err(WittError::Unsupported(
                "no rational lift for modular rings".into(),
            )),
        }
    }
}

fn to_u64(n: &BigInt) -> Option<u64> {
    u64::try_from(n).ok()
}

// ---- Values ----

/// Canonical value payload. The variant must agree with the spec.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Int(BigInt),
    Rat(BigRational),
    /// Exponent vector (aligned with the declared variables) -> nonzero base value.
    Poly(BTreeMap<Vec<u32>, Value>),
}

/// An element of a [`RingSpec`] ring in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElem {
    spec: RingSpec,
    value: Value,
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl RingElem {
    /// Assemble from raw parts; the caller asserts the value matches the
    /// spec and is canonical.
    pub(crate) fn from_parts(spec: RingSpec, value: Value) -> RingElem {
        RingElem { spec, value }
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Int(n) => n.is_zero(),
            Value::Rat(q) => q.is_zero(),
            Value::Poly(m) => m.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.spec.one()
    }

    /// Underlying integer for integer/mod elements.
    pub fn as_bigint(&self) -> Option<&BigInt> {
        match &self.value {
            Value::Int(n) => Some(n),
            _ => None,
        }
    }

    /// Underlying reduced fraction for rational/p-local elements.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rat(q) => Some(q),
            _ => None,
        }
    }
}

impl RingSpec {
    pub fn zero(&self) -> RingElem {
        let value = match &*self.0 {
            SpecData::Integers | SpecData::Mod(_) => Value::Int(BigInt::zero()),
            SpecData::Rationals | SpecData::PLocal(_) => Value::Rat(BigRational::zero()),
            SpecData::Poly { .. } => Value::Poly(BTreeMap::new()),
        };
        RingElem {
            spec: self.clone(),
            value,
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_bigint(BigInt::one())
    }

    pub fn from_bigint(&self, n: impl Into<BigInt>) -> RingElem {
        let n = n.into();
        let value = match &*self.0 {
            SpecData::Integers => Value::Int(n),
            SpecData::Rationals => Value::Rat(BigRational::from_integer(n)),
            SpecData::Mod(m) => Value::Int(n.mod_floor(m)),
            SpecData::PLocal(_) => Value::Rat(BigRational::from_integer(n)),
            SpecData::Poly { base, vars } => {
                let c = base.from_bigint(n);
                let mut map = BTreeMap::new();
                if !c.is_zero() {
                    map.insert(vec![0; vars.len()], c.value);
                }
                Value::Poly(map)
            }
        };
        RingElem {
            spec: self.clone(),
            value,
        }
    }

    pub fn from_i64(&self, n: i64) -> RingElem {
        self.from_bigint(BigInt::from(n))
    }

    /// Embed a rational number, failing where the denominator is not a unit.
    pub fn from_rational(&self, q: &BigRational) -> Result<RingElem> {
        match &*self.0 {
            SpecData::Integers => {
                if q.denom().is_one() {
                    Ok(self.from_bigint(q.numer().clone()))
                } else {
                    Err(WittError::NonIntegral(format!(
                        "{} has denominator {}",
                        q,
                        q.denom()
                    )))
                }
            }
            SpecData::Rationals => Ok(RingElem {
                spec: self.clone(),
                value: Value::Rat(q.clone()),
            }),
            SpecData::Mod(m) => {
                let inv = mod_inverse(q.denom(), m).ok_or_else(|| {
                    WittError::NotInvertible(format!("denominator {} mod {}", q.denom(), m))
                })?;
                Ok(self.from_bigint(q.numer() * inv))
            }
            SpecData::PLocal(p) => {
                let p = BigInt::from(*p);
                if q.denom().mod_floor(&p).is_zero() {
                    Err(WittError::NotInvertible(format!(
                        "denominator {} divisible by {}",
                        q.denom(),
                        p
                    )))
                } else {
                    Ok(RingElem {
                        spec: self.clone(),
                        value: Value::Rat(q.clone()),
                    })
                }
            }
            SpecData::Poly { base, vars } => {
                let c = base.from_rational(q)?;
                let mut map = BTreeMap::new();
                if !c.is_zero() {
                    map.insert(vec![0; vars.len()], c.value);
                }
                Ok(RingElem {
                    spec: self.clone(),
                    value: Value::Poly(map),
                })
            }
        }
    }

    /// The variable `name` as an element of this polynomial ring.
    pub fn var(&self, name: &str) -> Result<RingElem> {
        match &*self.0 {
            SpecData::Poly { base, vars } => {
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| WittError::MissingAssignment(name.to_string()))?;
                let mut exps = vec![0; vars.len()];
                exps[idx] = 1;
                let mut map = BTreeMap::new();
                map.insert(exps, base.one().value);
                Ok(RingElem {
                    spec: self.clone(),
                    value: Value::Poly(map),
                })
            }
            _ => Err(WittError::Unsupported(format!(
                "{} is not a polynomial ring",
                self
            ))),
        }
    }

    /// Monomial `coeff * prod vars[i]^exps[i]` of this polynomial ring.
    pub fn monomial(&self, exps: Vec<u32>, coeff: RingElem) -> Result<RingElem> {
        match &*self.0 {
            SpecData::Poly { base, vars } => {
                if exps.len() != vars.len() {
                    return Err(WittError::InvalidSpec("exponent vector length".into()));
                }
                if coeff.spec != *base {
                    return Err(WittError::SpecMismatch(format!(
                        "coefficient in {}, expected {}",
                        coeff.spec, base
                    )));
                }
                let mut map = BTreeMap::new();
                if !coeff.is_zero() {
                    map.insert(exps, coeff.value);
                }
                Ok(RingElem {
                    spec: self.clone(),
                    value: Value::Poly(map),
                })
            }
            _ => Err(WittError::Unsupported(format!(
                "{} is not a polynomial ring",
                self
            ))),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(m);
    let ext = a.extended_gcd(m);
    if ext.gcd.is_one() {
        Some(ext.x.mod_floor(m))
    } else {
        None
    }
}

// ---- Arithmetic ----

impl RingSpec {
    fn check_same(&self, other: &RingSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(WittError::SpecMismatch(format!("{} vs {}", self, other)))
        }
    }

    fn value_add(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (SpecData::Integers, Value::Int(x), Value::Int(y)) => Value::Int(x + y),
            (SpecData::Mod(m), Value::Int(x), Value::Int(y)) => Value::Int((x + y).mod_floor(m)),
            (SpecData::Rationals | SpecData::PLocal(_), Value::Rat(x), Value::Rat(y)) => {
                Value::Rat(x + y)
            }
            (SpecData::Poly { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                let mut out = x.clone();
                for (e, c) in y {
                    match out.remove(e) {
                        None => {
                            out.insert(e.clone(), c.clone());
                        }
                        Some(prev) => {
                            let s = base.value_add(&prev, c);
                            if !base.value_is_zero(&s) {
                                out.insert(e.clone(), s);
                            }
                        }
                    }
                }
                Value::Poly(out)
            }
            _ => unreachable!("value/spec mismatch"),
        }
    }

    fn value_neg(&self, a: &Value) -> Value {
        match (&*self.0, a) {
            (SpecData::Integers, Value::Int(x)) => Value::Int(-x),
            (SpecData::Mod(m), Value::Int(x)) => Value::Int((-x).mod_floor(m)),
            (SpecData::Rationals | SpecData::PLocal(_), Value::Rat(x)) => Value::Rat(-x),
            (SpecData::Poly { base, .. }, Value::Poly(x)) => {
                Value::Poly(x.iter().map(|(e, c)| (e.clone(), base.value_neg(c))).collect())
            }
            _ => unreachable!("value/spec mismatch"),
        }
    }

    fn value_mul(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (SpecData::Integers, Value::Int(x), Value::Int(y)) => Value::Int(x * y),
            (SpecData::Mod(m), Value::Int(x), Value::Int(y)) => Value::Int((x * y).mod_floor(m)),
            (SpecData::Rationals | SpecData::PLocal(_), Value::Rat(x), Value::Rat(y)) => {
                Value::Rat(x * y)
            }
            (SpecData::Poly { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                let mut out: BTreeMap<Vec<u32>, Value> = BTreeMap::new();
                for (e1, c1) in x {
                    for (e2, c2) in y {
                        let e: Vec<u32> =
                            e1.iter().zip(e2.iter()).map(|(&u, &v)| u + v).collect();
                        let c = base.value_mul(c1, c2);
                        match out.remove(&e) {
                            None => {
                                if !base.value_is_zero(&c) {
                                    out.insert(e, c);
                                }
                            }
                            Some(prev) => {
                                let s = base.value_add(&prev, &c);
                                if !base.value_is_zero(&s) {
                                    out.insert(e, s);
                                }
                            }
                        }
                    }
                }
                Value::Poly(out)
            }
            _ => unreachable!("value/spec mismatch"),
        }
    }

    fn value_is_zero(&self, a: &Value) -> bool {
        match a {
            Value::Int(n) => n.is_zero(),
            Value::Rat(q) => q.is_zero(),
            Value::Poly(m) => m.is_empty(),
        }
    }
}

impl RingElem {
    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        self.spec.check_same(&other.spec)?;
        Ok(RingElem {
            spec: self.spec.clone(),
            value: self.spec.value_add(&self.value, &other.value),
        })
    }

    pub fn sub(&self, other: &RingElem) -> Result<RingElem> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RingElem {
        RingElem {
            spec: self.spec.clone(),
            value: self.spec.value_neg(&self.value),
        }
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        self.spec.check_same(&other.spec)?;
        Ok(RingElem {
            spec: self.spec.clone(),
            value: self.spec.value_mul(&self.value, &other.value),
        })
    }

    pub fn mul_int(&self, n: impl Into<BigInt>) -> RingElem {
        let k = self.spec.from_bigint(n);
        self.mul(&k).expect("same spec")
    }

    pub fn pow(&self, mut e: u64) -> RingElem {
        let mut acc = self.spec.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same spec");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same spec");
            }
        }
        acc
    }

    /// Exact division by a nonzero integer; errors where the quotient does
    /// not exist in the ring.
    pub fn div_exact_int(&self, n: &BigInt) -> Result<RingElem> {
        if n.is_zero() {
            return Err(WittError::InexactDivision("division by zero".into()));
        }
        let value = div_value(&self.spec, &self.value, n)?;
        Ok(RingElem {
            spec: self.spec.clone(),
            value,
        })
    }

    /// True when every "integer content" of the element is divisible by n.
    /// Meaningful over Z and polynomial rings over Z.
    pub fn is_divisible_by_int(&self, n: &BigInt) -> bool {
        self.div_exact_int(n).is_ok()
    }

    /// Reinterpret in the rational lift of the spec.
    pub fn lift_rationals(&self) -> Result<RingElem> {
        let target = self.spec.rational_lift()?;
        fn lift(v: &Value) -> Value {
            match v {
                Value::Int(n) => Value::Rat(BigRational::from_integer(n.clone())),
                Value::Rat(q) => Value::Rat(q.clone()),
                Value::Poly(map) => {
                    Value::Poly(map.iter().map(|(e, c)| (e.clone(), lift(c))).collect())
                }
            }
        }
        Ok(RingElem {
            spec: target,
            value: lift(&self.value),
        })
    }

    /// Map an element of the rational lift back into `target`, failing where
    /// a denominator is not a unit there.
    pub fn lower_into(&self, target: &RingSpec) -> Result<RingElem> {
        fn lower(spec: &RingSpec, v: &Value) -> Result<Value> {
            match (&*spec.0, v) {
                (SpecData::Poly { base, .. }, Value::Poly(map)) => {
                    let mut out = BTreeMap::new();
                    for (e, c) in map {
                        out.insert(e.clone(), lower(base, c)?);
                    }
                    Ok(Value::Poly(out))
                }
                (_, Value::Rat(q)) => {
                    let elem = spec.from_rational(q)?;
                    Ok(elem.value)
                }
                (_, Value::Int(n)) => Ok(spec.from_bigint(n.clone()).value),
                _ => Err(WittError::SpecMismatch("lowering shape mismatch".into())),
            }
        }
        Ok(RingElem {
            spec: target.clone(),
            value: lower(target, &self.value)?,
        })
    }
}

fn div_value(spec: &RingSpec, v: &Value, n: &BigInt) -> Result<Value> {
    match (&*spec.0, v) {
        (SpecData::Integers, Value::Int(x)) => {
            let (q, r) = x.div_rem(n);
            if r.is_zero() {
                Ok(Value::Int(q))
            } else {
                Err(WittError::InexactDivision(format!("{} / {}", x, n)))
            }
        }
        (SpecData::Rationals, Value::Rat(x)) => Ok(Value::Rat(x / BigRational::from_integer(n.clone()))),
        (SpecData::Mod(m), Value::Int(x)) => {
            let inv = mod_inverse(n, m)
                .ok_or_else(|| WittError::NotInvertible(format!("{} mod {}", n, m)))?;
            Ok(Value::Int((x * inv).mod_floor(m)))
        }
        (SpecData::PLocal(p), Value::Rat(x)) => {
            let q = x / BigRational::from_integer(n.clone());
            let p = BigInt::from(*p);
            if q.denom().mod_floor(&p).is_zero() {
                Err(WittError::InexactDivision(format!(
                    "{} / {} leaves denominator divisible by {}",
                    x, n, p
                )))
            } else {
                Ok(Value::Rat(q))
            }
        }
        (SpecData::Poly { base, .. }, Value::Poly(map)) => {
            let mut out = BTreeMap::new();
            for (e, c) in map {
                out.insert(e.clone(), div_value(base, c, n)?);
            }
            Ok(Value::Poly(out))
        }
        _ => unreachable!("value/spec mismatch"),
    }
}

// ---- Polynomial evaluation ----

/// Exact substitution of base-ring values for the variables of a polynomial
/// element. The assignment must cover every variable that occurs.
pub fn poly_eval(p: &RingElem, assignment: &BTreeMap<String, RingElem>) -> Result<RingElem> {
    let (base, vars) = match (&p.spec.poly_base(), &p.spec.poly_vars()) {
        (Some(b), Some(v)) => ((*b).clone(), v.to_vec()),
        _ => {
            return Err(WittError::Unsupported(format!(
                "poly_eval on non-polynomial spec {}",
                p.spec
            )))
        }
    };
    let map = match &p.value {
        Value::Poly(m) => m,
        _ => unreachable!(),
    };
    // resolve each variable once; absent is an error only if it occurs
    let mut images: Vec<Option<&RingElem>> = Vec::with_capacity(vars.len());
    for v in &vars {
        images.push(assignment.get(v));
    }
    for (_, img) in images.iter().enumerate() {
        if let Some(e) = img {
            if e.spec != base {
                return Err(WittError::SpecMismatch(format!(
                    "assignment value in {}, expected {}",
                    e.spec, base
                )));
            }
        }
    }
    let mut acc = base.zero();
    for (exps, coeff) in map {
        let mut term = RingElem {
            spec: base.clone(),
            value: coeff.clone(),
        };
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match images[i] {
                Some(val) => term = term.mul(&val.pow(e as u64))?,
                None => return Err(WittError::MissingAssignment(vars[i].clone())),
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

// ---- Integrality ----

/// Outcome of [`rational_integrality`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralityVerdict {
    Integral,
    /// First offending monomial (empty for scalars) and its denominator.
    NonIntegral { monomial: Vec<u32>, denominator: BigInt },
}

impl IntegralityVerdict {
    pub fn is_integral(&self) -> bool {
        matches!(self, IntegralityVerdict::Integral)
    }
}

/// Check that a rational (or rational-coefficient polynomial) element has all
/// denominators equal to 1. Returns a witness denominator on failure.
pub fn rational_integrality(x: &RingElem) -> Result<IntegralityVerdict> {
    match &x.value {
        Value::Rat(q) => {
            if q.denom().is_one() {
                Ok(IntegralityVerdict::Integral)
            } else {
                Ok(IntegralityVerdict::NonIntegral {
                    monomial: Vec::new(),
                    denominator: q.denom().clone(),
                })
            }
        }
        Value::Poly(map) => {
            for (e, c) in map {
                if let Value::Rat(q) = c {
                    if !q.denom().is_one() {
                        return Ok(IntegralityVerdict::NonIntegral {
                            monomial: e.clone(),
                            denominator: q.denom().clone(),
                        });
                    }
                } else {
                    return Err(WittError::Unsupported(
                        "rational_integrality needs rational coefficients".into(),
                    ));
                }
            }
            Ok(IntegralityVerdict::Integral)
        }
        Value::Int(_) => Err(WittError::Unsupported(
            "rational_integrality needs a rational spec".into(),
        )),
    }
}

// ---- Frobenius families ----

type CustomRule = Arc<dyn Fn(u64, &RingElem) -> Result<RingElem> + Send + Sync>;

/// A family of ring endomorphisms phi_n, one per n >= 1.
#[derive(Clone)]
pub enum FrobRule {
    /// phi_n = identity for all n (the only choice on Z and Q).
    Identity,
    /// phi_n maps every polynomial variable V to V^n.
    VarPower,
    /// Arbitrary user-supplied maps, for fault-injection in checks.
    Custom(CustomRule),
}

/// Spec-tagged family of distinguished endomorphisms phi_n.
#[derive(Clone)]
pub struct FrobeniusFamily {
    pub spec: RingSpec,
    pub rule: FrobRule,
}

impl FrobeniusFamily {
    pub fn identity(spec: RingSpec) -> Self {
        FrobeniusFamily {
            spec,
            rule: FrobRule::Identity,
        }
    }

    pub fn var_power(spec: RingSpec) -> Self {
        FrobeniusFamily {
            spec,
            rule: FrobRule::VarPower,
        }
    }

    pub fn custom(spec: RingSpec, f: CustomRule) -> Self {
        FrobeniusFamily {
            spec,
            rule: FrobRule::Custom(f),
        }
    }

    pub fn apply(&self, n: u64, x: &RingElem) -> Result<RingElem> {
        self.spec.check_same(&x.spec)?;
        match &self.rule {
            FrobRule::Identity => Ok(x.clone()),
            FrobRule::VarPower => {
                if n == 1 {
                    return Ok(x.clone());
                }
                match &x.value {
                    Value::Poly(map) => {
                        let mut out = BTreeMap::new();
                        for (e, c) in map {
                            let scaled: Vec<u32> = e.iter().map(|&k| k * n as u32).collect();
                            out.insert(scaled, c.clone());
                        }
                        Ok(RingElem {
                            spec: x.spec.clone(),
                            value: Value::Poly(out),
                        })
                    }
                    _ => Ok(x.clone()),
                }
            }
            FrobRule::Custom(f) => f(n, x),
        }
    }
}

/// Report from [`frobenius_family_check`].
#[derive(Debug, Clone)]
pub struct FrobReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Verify phi_1 = id, phi_m phi_n = phi_mn for m, n <= bound, and the mod-p
/// congruence phi_p(a) = a^p (mod p) on the supplied samples.
pub fn frobenius_family_check(
    family: &FrobeniusFamily,
    samples: &[RingElem],
    bound: u64,
) -> Result<FrobReport> {
    let mut failures = Vec::new();
    for a in samples {
        let img = family.apply(1, a)?;
        if img != *a {
            failures.push(format!("phi_1({}) = {} != identity", a, img));
        }
    }
    for m in 2..=bound {
        for n in 2..=bound {
            for a in samples {
                let lhs = family.apply(m, &family.apply(n, a)?)?;
                let rhs = family.apply(m * n, a)?;
                if lhs != rhs {
                    failures.push(format!(
                        "phi_{} phi_{} != phi_{} at {}: {} vs {}",
                        m, n, m * n, a, lhs, rhs
                    ));
                }
            }
        }
    }
    for p in crate::arith::primes_upto(bound) {
        for a in samples {
            let diff = family.apply(p, a)?.sub(&a.pow(p))?;
            if !diff.is_divisible_by_int(&BigInt::from(p)) {
                failures.push(format!(
                    "phi_{}({}) - ({})^{} = {} not divisible by {}",
                    p, a, a, p, diff, p
                ));
            }
        }
    }
    Ok(FrobReport {
        ok: failures.is_empty(),
        failures,
    })
}

// ---- Printing ----

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Int(n) => write!(f, "{}", n),
            Value::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Value::Poly(map) => {
                if map.is_empty() {
                    return write!(f, "0");
                }
                let vars = self.spec.poly_vars().unwrap_or(&[]);
                // graded-lex: total degree descending, then exponent vector
                // descending lexicographically
                let mut entries: Vec<(&Vec<u32>, &Value)> = map.iter().collect();
                entries.sort_by(|(e1, _), (e2, _)| {
                    let d1: u32 = e1.iter().sum();
                    let d2: u32 = e2.iter().sum();
                    d2.cmp(&d1).then_with(|| e2.cmp(e1))
                });
                for (i, (exps, coeff)) in entries.iter().enumerate() {
                    let celem = RingElem {
                        spec: self.spec.poly_base().unwrap().clone(),
                        value: (*coeff).clone(),
                    };
                    let ctext = format!("{}", celem);
                    let (sign, mag) = match ctext.strip_prefix('-') {
                        Some(rest) => ("-", rest.to_string()),
                        None => ("+", ctext),
                    };
                    if i == 0 {
                        if sign == "-" {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", sign)?;
                    }
                    let mut factors = Vec::new();
                    for (vi, &e) in exps.iter().enumerate() {
                        if e == 1 {
                            factors.push(vars[vi].clone());
                        } else if e > 1 {
                            factors.push(format!("{}^{}", vars[vi], e));
                        }
                    }
                    if factors.is_empty() {
                        write!(f, "{}", mag)?;
                    } else if mag == "1" {
                        write!(f, "{}", factors.join("*"))?;
                    } else {
                        write!(f, "{}*{}", mag, factors.join("*"))?;
                    }
                }
                Ok(())
            }
        }
    }
}

// ---- JSON serialization ----

impl RingSpec {
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match &*self.0 {
            SpecData::Integers => json!({"kind": "integers"}),
            SpecData::Rationals => json!({"kind": "rationals"}),
            SpecData::Mod(m) => json!({"kind": "mod", "m": m.to_string()}),
            SpecData::PLocal(p) => json!({"kind": "p-local", "p": p}),
            SpecData::Poly { base, vars } => {
                json!({"kind": "polynomial", "base": base.to_json(), "vars": vars})
            }
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<RingSpec> {
        let kind = v
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| WittError::Parse("ring spec missing kind".into()))?;
        match kind {
            "integers" => Ok(RingSpec::integers()),
            "rationals" => Ok(RingSpec::rationals()),
            "mod" => {
                let m = v
                    .get("m")
                    .and_then(|m| m.as_str())
                    .ok_or_else(|| WittError::Parse("mod spec missing m".into()))?;
                let m: BigInt = m
                    .parse()
                    .map_err(|_| WittError::Parse(format!("bad modulus {}", m)))?;
                RingSpec::modular(m)
            }
            "p-local" => {
                let p = v
                    .get("p")
                    .and_then(|p| p.as_u64())
                    .ok_or_else(|| WittError::Parse("p-local spec missing p".into()))?;
                RingSpec::p_local(p)
            }
            "polynomial" => {
                let base = RingSpec::from_json(
                    v.get("base")
                        .ok_or_else(|| WittError::Parse("polynomial spec missing base".into()))?,
                )?;
                let vars: Vec<String> = v
                    .get("vars")
                    .and_then(|x| x.as_array())
                    .ok_or_else(|| WittError::Parse("polynomial spec missing vars".into()))?
                    .iter()
                    .map(|s| s.as_str().unwrap_or_default().to_string())
                    .collect();
                RingSpec::polynomial(base, vars)
            }
            other => Err(WittError::Parse(format!("unknown ring kind {}", other))),
        }
    }
}

impl RingElem {
    fn value_to_json(spec: &RingSpec, v: &Value) -> serde_json::Value {
        use serde_json::json;
        match v {
            Value::Int(n) => json!(n.to_string()),
            Value::Rat(q) => {
                if q.denom().is_one() {
                    json!(q.numer().to_string())
                } else {
                    json!(format!("{}/{}", q.numer(), q.denom()))
                }
            }
            Value::Poly(map) => {
                let base = spec.poly_base().expect("poly spec");
                let terms: Vec<serde_json::Value> = map
                    .iter()
                    .map(|(e, c)| {
                        json!({"exps": e, "coeff": RingElem::value_to_json(base, c)})
                    })
                    .collect();
                json!(terms)
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "spec": self.spec.to_json(),
            "value": RingElem::value_to_json(&self.spec, &self.value),
        })
    }

    fn value_from_json(spec: &RingSpec, v: &serde_json::Value) -> Result<Value> {
        match &*spec.0 {
            SpecData::Poly { base, vars } => {
                let arr = v
                    .as_array()
                    .ok_or_else(|| WittError::Parse("polynomial value must be a list".into()))?;
                let mut map = BTreeMap::new();
                for t in arr {
                    let exps: Vec<u32> = t
                        .get("exps")
                        .and_then(|e| e.as_array())
                        .ok_or_else(|| WittError::Parse("term missing exps".into()))?
                        .iter()
                        .map(|x| x.as_u64().unwrap_or(0) as u32)
                        .collect();
                    if exps.len() != vars.len() {
                        return Err(WittError::Parse("exps length mismatch".into()));
                    }
                    let c = RingElem::value_from_json(
                        base,
                        t.get("coeff")
                            .ok_or_else(|| WittError::Parse("term missing coeff".into()))?,
                    )?;
                    if !base.value_is_zero(&c) {
                        map.insert(exps, c);
                    }
                }
                Ok(Value::Poly(map))
            }
            _ => {
                let s = v
                    .as_str()
                    .ok_or_else(|| WittError::Parse("scalar value must be a string".into()))?;
                parse_scalar(spec, s).map(|e| e.value)
            }
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<RingElem> {
        let spec = RingSpec::from_json(
            v.get("spec")
                .ok_or_else(|| WittError::Parse("element missing spec".into()))?,
        )?;
        let value = RingElem::value_from_json(
            &spec,
            v.get("value")
                .ok_or_else(|| WittError::Parse("element missing value".into()))?,
        )?;
        Ok(RingElem { spec, value })
    }
}

/// Parse "n" or "n/d" into a scalar element of the given (scalar) spec.
pub fn parse_scalar(spec: &RingSpec, s: &str) -> Result<RingElem> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| WittError::Parse(format!("bad numerator {}", n)))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| WittError::Parse(format!("bad denominator {}", d)))?;
        if d.is_zero() {
            return Err(WittError::Parse("zero denominator".into()));
        }
        spec.from_rational(&BigRational::new(n, d))
    } else {
        let n: BigInt = s
            .parse()
            .map_err(|_| WittError::Parse(format!("bad integer {}", s)))?;
        Ok(spec.from_bigint(n))
    }
}
