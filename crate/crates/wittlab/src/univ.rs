//! Universal integer polynomials of Witt-vector theory: solved from
//! ghost-component equations over the rationals, integrality asserted,
//! cached by (kind, flavor, nest).

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{divisors, pow_u64, primes_upto};
use crate::error::{Result, WittError};
use crate::nest::Nest;
use crate::qpoly::{QPoly, Var};

// ---- Indexing ----

/// Index scheme of a universal family: a big-Witt nest, or p-adic indices
/// 0..=len.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Indexing {
    Big(Nest),
    Padic { p: u64, len: u32 },
}

impl Indexing {
    pub fn indices(&self) -> Vec<u64> {
        match self {
            Indexing::Big(nest) => nest.indices().to_vec(),
            Indexing::Padic { len, .. } => (0..=*len as u64).collect(),
        }
    }

    fn key_fragment(&self) -> String {
        match self {
            Indexing::Big(nest) => {
                let ids: Vec<String> = nest.indices().iter().map(|n| n.to_string()).collect();
                format!("big-{}", ids.join("_"))
            }
            Indexing::Padic { p, len } => format!("padic{}-len{}", p, len),
        }
    }
}

impl fmt::Display for Indexing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indexing::Big(nest) => write!(f, "big {}", nest),
            Indexing::Padic { p, len } => write!(f, "{}-adic length {}", p, len + 1),
        }
    }
}

// ---- Witt and ghost polynomials ----

/// Big Witt polynomial w_n(X) = sum over d|n of d X_d^{n/d}.
pub fn witt_polynomial_big(n: u64) -> QPoly {
    ghost_poly_big(b'X', n)
}

/// p-adic Witt polynomial w_n(X) = X_0^{p^n} + p X_1^{p^{n-1}} + ... + p^n X_n.
pub fn witt_polynomial_padic(p: u64, n: u32) -> QPoly {
    ghost_poly_padic(b'X', p, n)
}

pub fn ghost_poly_big(alph: u8, n: u64) -> QPoly {
    let mut acc = QPoly::zero();
    for d in divisors(n) {
        let v = QPoly::var(Var { alph, idx: d });
        acc = acc.add(&v.pow(n / d).mul_int(d as i64));
    }
    acc
}

pub fn ghost_poly_padic(alph: u8, p: u64, n: u32) -> QPoly {
    let mut acc = QPoly::zero();
    for i in 0..=n {
        let v = QPoly::var(Var {
            alph,
            idx: i as u64,
        });
        let coeff = crate::arith::big_pow(&BigInt::from(p), i as u64);
        acc = acc.add(
            &v.pow(pow_u64(p, n - i))
                .mul_scalar(&num_rational::BigRational::from_integer(coeff)),
        );
    }
    acc
}

pub fn ghost_poly(indexing: &Indexing, alph: u8, index: u64) -> QPoly {
    match indexing {
        Indexing::Big(_) => ghost_poly_big(alph, index),
        Indexing::Padic { p, .. } => ghost_poly_padic(alph, *p, index as u32),
    }
}

// ---- Families and ghost solving ----

/// Structure-polynomial kinds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StructKind {
    Add,
    Mul,
    Neg,
    Frobenius(u64),
    NMult(u64),
    PPower(u64),
    Unit,
    Zero,
}

impl fmt::Display for StructKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructKind::Add => write!(f, "add"),
            StructKind::Mul => write!(f, "mul"),
            StructKind::Neg => write!(f, "neg"),
            StructKind::Frobenius(m) => write!(f, "frobenius{}", m),
            StructKind::NMult(n) => write!(f, "nmult{}", n),
            StructKind::PPower(p) => write!(f, "ppower{}", p),
            StructKind::Unit => write!(f, "unit"),
            StructKind::Zero => write!(f, "zero"),
        }
    }
}

impl StructKind {
    pub fn parse(s: &str) -> Result<StructKind> {
        let k = match s {
            "add" => StructKind::Add,
            "mul" => StructKind::Mul,
            "neg" => StructKind::Neg,
            "unit" => StructKind::Unit,
            "zero" => StructKind::Zero,
            _ => {
                if let Some(rest) = s.strip_prefix("frobenius") {
                    StructKind::Frobenius(
                        rest.parse()
                            .map_err(|_| WittError::Parse(format!("bad kind {}", s)))?,
                    )
                } else if let Some(rest) = s.strip_prefix("nmult") {
                    StructKind::NMult(
                        rest.parse()
                            .map_err(|_| WittError::Parse(format!("bad kind {}", s)))?,
                    )
                } else if let Some(rest) = s.strip_prefix("ppower") {
                    StructKind::PPower(
                        rest.parse()
                            .map_err(|_| WittError::Parse(format!("bad kind {}", s)))?,
                    )
                } else {
                    return Err(WittError::Parse(format!("unknown struct kind {}", s)));
                }
            }
        };
        Ok(k)
    }
}

/// A solved family of universal polynomials, one per index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnivPolyFamily {
    pub name: String,
    pub indexing: Indexing,
    /// Index scheme of the input alphabet(s); differs from `indexing` for
    /// Frobenius families.
    pub input_indexing: Indexing,
    pub polys: BTreeMap<u64, QPoly>,
    pub integral: bool,
}

impl UnivPolyFamily {
    pub fn poly(&self, index: u64) -> Option<&QPoly> {
        self.polys.get(&index)
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let flavor = match &self.indexing {
            Indexing::Big(_) => json!("big"),
            Indexing::Padic { p, .. } => json!({"p-adic": p}),
        };
        let nest: Vec<u64> = self.indexing.indices();
        let input: Vec<u64> = self.input_indexing.indices();
        let polys: Vec<serde_json::Value> = self
            .polys
            .iter()
            .map(|(i, p)| json!({"index": i, "poly": p.to_json(), "text": format!("{}", p)}))
            .collect();
        json!({
            "name": self.name,
            "flavor": flavor,
            "nest": nest,
            "input_nest": input,
            "polys": polys,
            "integral": self.integral,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<UnivPolyFamily> {
        let name = v
            .get("name")
            .and_then(|s| s.as_str())
            .ok_or_else(|| WittError::Parse("family missing name".into()))?
            .to_string();
        let nest: Vec<u64> = v
            .get("nest")
            .and_then(|a| a.as_array())
            .ok_or_else(|| WittError::Parse("family missing nest".into()))?
            .iter()
            .filter_map(|x| x.as_u64())
            .collect();
        let input: Vec<u64> = v
            .get("input_nest")
            .and_then(|a| a.as_array())
            .ok_or_else(|| WittError::Parse("family missing input nest".into()))?
            .iter()
            .filter_map(|x| x.as_u64())
            .collect();
        let flavor = v
            .get("flavor")
            .ok_or_else(|| WittError::Parse("family missing flavor".into()))?;
        let (indexing, input_indexing) = if flavor.is_string() {
            (
                Indexing::Big(Nest::new(nest)?),
                Indexing::Big(Nest::new(input)?),
            )
        } else {
            let p = flavor
                .get("p-adic")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| WittError::Parse("bad flavor".into()))?;
            (
                Indexing::Padic {
                    p,
                    len: (nest.len() - 1) as u32,
                },
                Indexing::Padic {
                    p,
                    len: (input.len() - 1) as u32,
                },
            )
        };
        let mut polys = BTreeMap::new();
        for t in v
            .get("polys")
            .and_then(|a| a.as_array())
            .ok_or_else(|| WittError::Parse("family missing polys".into()))?
        {
            let idx = t
                .get("index")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| WittError::Parse("poly missing index".into()))?;
            let poly = QPoly::from_json(
                t.get("poly")
                    .ok_or_else(|| WittError::Parse("poly missing body".into()))?,
            )?;
            polys.insert(idx, poly);
        }
        let integral = v.get("integral").and_then(|b| b.as_bool()).unwrap_or(false);
        Ok(UnivPolyFamily {
            name,
            indexing,
            input_indexing,
            polys,
            integral,
        })
    }
}

/// Solve the ghost-component equations w_n(phi) = target_n triangularly in
/// ascending index order over Q. The result is exact and never rounded.
pub fn solve_ghost(indexing: &Indexing, targets: &BTreeMap<u64, QPoly>) -> Result<BTreeMap<u64, QPoly>> {
    let mut solved: BTreeMap<u64, QPoly> = BTreeMap::new();
    match indexing {
        Indexing::Big(nest) => {
            for &n in nest.indices() {
                let target = targets.get(&n).ok_or_else(|| WittError::GhostSolve {
                    index: n,
                    reason: "missing target".into(),
                })?;
                let mut partial = QPoly::zero();
                for d in divisors(n) {
                    if d == n {
                        continue;
                    }
                    partial = partial.add(&solved[&d].pow(n / d).mul_int(d as i64));
                }
                let phi = target.sub(&partial).div_int(n);
                solved.insert(n, phi);
            }
        }
        Indexing::Padic { p, len } => {
            for n in 0..=*len {
                let idx = n as u64;
                let target = targets.get(&idx).ok_or_else(|| WittError::GhostSolve {
                    index: idx,
                    reason: "missing target".into(),
                })?;
                let mut partial = QPoly::zero();
                for i in 0..n {
                    let coeff = crate::arith::big_pow(&BigInt::from(*p), i as u64);
                    partial = partial.add(
                        &solved[&(i as u64)]
                            .pow(pow_u64(*p, n - i))
                            .mul_scalar(&num_rational::BigRational::from_integer(coeff)),
                    );
                }
                let pn = crate::arith::big_pow(&BigInt::from(*p), n as u64);
                let phi = target.sub(&partial).mul_scalar(&num_rational::BigRational::new(
                    BigInt::from(1),
                    pn,
                ));
                solved.insert(idx, phi);
            }
        }
    }
    verify_ghost_identity(indexing, &solved, targets)?;
    Ok(solved)
}

/// Recheck w_n(family) = target_n as exact polynomial identities.
pub fn verify_ghost_identity(
    indexing: &Indexing,
    family: &BTreeMap<u64, QPoly>,
    targets: &BTreeMap<u64, QPoly>,
) -> Result<()> {
    for (&n, target) in targets {
        let w = ghost_poly(indexing, b'X', n);
        let image = w.substitute(&|v: Var| family[&v.idx].clone());
        if image != *target {
            return Err(WittError::GhostSolve {
                index: n,
                reason: "ghost identity failed on recheck".into(),
            });
        }
    }
    Ok(())
}

fn structure_targets(kind: StructKind, indexing: &Indexing) -> Result<(BTreeMap<u64, QPoly>, Indexing)> {
    let mut targets = BTreeMap::new();
    let input_indexing = match (kind, indexing) {
        (StructKind::Frobenius(m), Indexing::Big(nest)) => Indexing::Big(nest.dilate(m)),
        (StructKind::Frobenius(m), Indexing::Padic { p, len }) => {
            if m != *p {
                return Err(WittError::Unsupported(format!(
                    "p-adic Frobenius must have m = p, got m = {} for p = {}",
                    m, p
                )));
            }
            Indexing::Padic { p: *p, len: len + 1 }
        }
        _ => indexing.clone(),
    };
    for n in indexing.indices() {
        let t = match kind {
            StructKind::Add => {
                ghost_poly(indexing, b'X', n).add(&ghost_poly(indexing, b'Y', n))
            }
            StructKind::Mul => {
                ghost_poly(indexing, b'X', n).mul(&ghost_poly(indexing, b'Y', n))
            }
            StructKind::Neg => ghost_poly(indexing, b'X', n).neg(),
            StructKind::NMult(k) => ghost_poly(indexing, b'X', n).mul_int(k as i64),
            StructKind::PPower(p) => ghost_poly(indexing, b'X', n).pow(p),
            StructKind::Unit => QPoly::one(),
            StructKind::Zero => QPoly::zero(),
            StructKind::Frobenius(m) => match indexing {
                Indexing::Big(_) => ghost_poly_big(b'X', m * n),
                Indexing::Padic { p, .. } => ghost_poly_padic(b'X', *p, n as u32 + 1),
            },
        };
        targets.insert(n, t);
    }
    Ok((targets, input_indexing))
}

/// Compute (or fetch from cache) the universal structure polynomials of the
/// given kind. Integrality is asserted: a failure signals an implementation
/// bug, not bad input.
pub fn structure_polys(kind: StructKind, indexing: &Indexing) -> Result<Arc<UnivPolyFamily>> {
    let key = format!("struct-{}-{}", kind, indexing.key_fragment());
    cached_family(&key, || {
        let (targets, input_indexing) = structure_targets(kind, indexing)?;
        let polys = solve_ghost(indexing, &targets)?;
        let family = UnivPolyFamily {
            name: format!("{}", kind),
            indexing: indexing.clone(),
            input_indexing,
            polys,
            integral: true,
        };
        assert_family_integral(&family)?;
        Ok(family)
    })
}

fn assert_family_integral(family: &UnivPolyFamily) -> Result<()> {
    for (n, p) in &family.polys {
        if let Some((mono, den)) = p.integrality_witness() {
            let names: Vec<String> = mono.iter().map(|(v, e)| format!("{}^{}", v.name(), e)).collect();
            return Err(WittError::NonIntegral(format!(
                "family {} member {} has denominator {} at monomial {}",
                family.name,
                n,
                den,
                names.join("*")
            )));
        }
    }
    Ok(())
}

// ---- Teichmueller sum polynomials ----

/// The integer polynomials r_1..r_maxd with X^n + Y^n = sum over d|n of
/// d r_d(X,Y)^{n/d}. Solved over Q, integrality asserted.
pub fn teichmuller_sum_polys(maxd: u64) -> Result<Arc<UnivPolyFamily>> {
    let key = format!("teichsum-{}", maxd);
    cached_family(&key, || {
        let indexing = Indexing::Big(Nest::upto(maxd));
        let x = QPoly::var(Var::x(1));
        let y = QPoly::var(Var::y(1));
        let mut targets = BTreeMap::new();
        for n in 1..=maxd {
            targets.insert(n, x.pow(n).add(&y.pow(n)));
        }
        let polys = solve_ghost(&indexing, &targets)?;
        let family = UnivPolyFamily {
            name: "teichmuller-sum".into(),
            indexing: indexing.clone(),
            input_indexing: indexing,
            polys,
            integral: true,
        };
        assert_family_integral(&family)?;
        Ok(family)
    })
}

/// p-adic relabeling of the Teichmueller sum polynomials: s_0..s_{k-1} with
/// X^{p^j} + Y^{p^j} = sum over i<=j of p^i s_i^{p^{j-i}}. These are the
/// digit polynomials of Teichmueller addition; s_i equals the big-flavor
/// r at index p^i.
pub fn padic_teich_sum_polys(p: u64, k: u32) -> Result<Arc<UnivPolyFamily>> {
    let key = format!("teichsum-padic{}-{}", p, k);
    cached_family(&key, || {
        let indexing = Indexing::Padic { p, len: k.saturating_sub(1) };
        let x = QPoly::var(Var::x(1));
        let y = QPoly::var(Var::y(1));
        let mut targets = BTreeMap::new();
        for j in 0..k.max(1) {
            let e = pow_u64(p, j);
            targets.insert(j as u64, x.pow(e).add(&y.pow(e)));
        }
        let polys = solve_ghost(&indexing, &targets)?;
        let family = UnivPolyFamily {
            name: "teichmuller-sum-padic".into(),
            indexing: indexing.clone(),
            input_indexing: indexing,
            polys,
            integral: true,
        };
        assert_family_integral(&family)?;
        Ok(family)
    })
}

// ---- Congruence suites ----

/// Named congruence families checked as exact polynomial divisibility.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CongruenceSet {
    /// Frobenius members satisfy f_n = X_n^p (mod p); both flavors.
    FrobeniusModP,
    /// p-adic multiplication-by-p members satisfy P_n = X_{n-1}^p (mod p)
    /// for n >= 1 and P_0 = 0 (mod p).
    NMultModP,
    /// Big Frobenius(p) members at p-power indices are = X_{p^r}^p (mod p).
    FrobeniusPPower,
    /// Big Frobenius(n) member r equals n X_{nr} modulo the ideal generated
    /// by the lower-index variables.
    FrobeniusLinear,
}

#[derive(Clone, Debug)]
pub struct CongruenceCheck {
    pub label: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CongruenceReport {
    pub checks: Vec<CongruenceCheck>,
}

impl CongruenceReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Check a named congruence set against a family. Failures are reported,
/// not raised.
pub fn congruence_suite(
    family: &UnivPolyFamily,
    which: CongruenceSet,
    p: u64,
) -> Result<CongruenceReport> {
    let big_p = BigInt::from(p);
    let mut checks = Vec::new();
    match which {
        CongruenceSet::FrobeniusModP => {
            for (&n, poly) in &family.polys {
                let xnp = QPoly::var(Var::x(n)).pow(p);
                let diff = poly.sub(&xnp);
                let pass = diff.divisible_by_int(&big_p);
                checks.push(CongruenceCheck {
                    label: format!("f_{} = X{}^{} (mod {})", n, n, p, p),
                    pass,
                    witness: witness_of(&diff, &big_p),
                });
            }
        }
        CongruenceSet::NMultModP => {
            for (&n, poly) in &family.polys {
                let expect = if n == 0 {
                    QPoly::zero()
                } else {
                    QPoly::var(Var::x(n - 1)).pow(p)
                };
                let diff = poly.sub(&expect);
                let pass = diff.divisible_by_int(&big_p);
                checks.push(CongruenceCheck {
                    label: format!("P_{} congruence (mod {})", n, p),
                    pass,
                    witness: witness_of(&diff, &big_p),
                });
            }
        }
        CongruenceSet::FrobeniusPPower => {
            for (&n, poly) in &family.polys {
                if !is_p_power(n, p) {
                    continue;
                }
                let diff = poly.sub(&QPoly::var(Var::x(n)).pow(p));
                let pass = diff.divisible_by_int(&big_p);
                checks.push(CongruenceCheck {
                    label: format!("Q_{{{},{}}} = X{}^{} (mod {})", p, n, n, p, p),
                    pass,
                    witness: witness_of(&diff, &big_p),
                });
            }
        }
        CongruenceSet::FrobeniusLinear => {
            // here p plays the role of the Frobenius index n
            let m = p;
            for (&r, poly) in &family.polys {
                let target_idx = m * r;
                let reduced = poly.substitute(&|v: Var| {
                    if v.idx < target_idx {
                        QPoly::zero()
                    } else {
                        QPoly::var(v)
                    }
                });
                let expect = QPoly::var(Var::x(target_idx)).mul_int(m as i64);
                let diff = reduced.sub(&expect);
                let pass = diff.is_zero();
                checks.push(CongruenceCheck {
                    label: format!("Q_{{{},{}}} = {} X{} (mod lower vars)", m, r, m, target_idx),
                    pass,
                    witness: if pass { None } else { Some(format!("{}", diff)) },
                });
            }
        }
    }
    Ok(CongruenceReport { checks })
}

fn witness_of(diff: &QPoly, p: &BigInt) -> Option<String> {
    if diff.divisible_by_int(p) {
        None
    } else {
        diff.terms()
            .find(|(_, c)| !c.denom().is_one() || !(c.numer() % p).is_zero())
            .map(|(m, c)| {
                let names: Vec<String> =
                    m.iter().map(|(v, e)| format!("{}^{}", v.name(), e)).collect();
                format!("coefficient {} at {}", c, names.join("*"))
            })
    }
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

// ---- Cache ----

static MEMO: OnceLock<Mutex<HashMap<String, Arc<UnivPolyFamily>>>> = OnceLock::new();

fn cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("WITTLAB_CACHE") {
        return PathBuf::from(dir);
    }
    if let Ok(home) = std::env::var("HOME") {
        return PathBuf::from(home).join(".cache").join("wittlab");
    }
    std::env::temp_dir().join("wittlab-cache")
}

/// Serialize a family deterministically (sorted keys, sorted terms).
pub fn family_to_bytes(family: &UnivPolyFamily) -> Vec<u8> {
    serde_json::to_vec_pretty(&family.to_json()).expect("serialize family")
}

/// Memoized + disk-backed family computation. Disk entries are written
/// atomically; a hit is parsed back and must round-trip the computation.
pub fn cached_family<F>(key: &str, compute: F) -> Result<Arc<UnivPolyFamily>>
where
    F: FnOnce() -> Result<UnivPolyFamily>,
{
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(found) = memo.lock().expect("memo lock").get(key) {
        return Ok(found.clone());
    }

    let path = cache_dir().join(format!("{}.json", key));
    if let Ok(bytes) = std::fs::read(&path) {
        if let Ok(value) = serde_json::from_slice::<serde_json::Value>(&bytes) {
            if let Ok(family) = UnivPolyFamily::from_json(&value) {
                let arc = Arc::new(family);
                memo.lock()
                    .expect("memo lock")
                    .insert(key.to_string(), arc.clone());
                return Ok(arc);
            }
        }
        // unreadable cache entry: fall through and recompute
    }

    let family = compute()?;
    let bytes = family_to_bytes(&family);
    let dir = cache_dir();
    if std::fs::create_dir_all(&dir).is_ok() {
        let tmp = dir.join(format!("{}.json.tmp-{}", key, std::process::id()));
        if let Ok(mut f) = std::fs::File::create(&tmp) {
            if f.write_all(&bytes).is_ok() {
                let _ = std::fs::rename(&tmp, &path);
            } else {
                let _ = std::fs::remove_file(&tmp);
            }
        }
    }
    let arc = Arc::new(family);
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .expect("memo lock")
        .insert(key.to_string(), arc.clone());
    Ok(arc)
}

/// Frobenius-congruence convenience used by the CLI verify suite.
pub fn frobenius_congruence_report(p: u64, indexing: &Indexing) -> Result<CongruenceReport> {
    let fam = structure_polys(StructKind::Frobenius(p), indexing)?;
    congruence_suite(&fam, CongruenceSet::FrobeniusModP, p)
}

/// All primes up to `bound`, re-exported for suites.
pub fn small_primes(bound: u64) -> Vec<u64> {
    primes_upto(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn qint(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn witt_polynomials() {
        assert_eq!(
            format!("{}", witt_polynomial_big(6)),
            "X1^6 + 2*X2^3 + 3*X3^2 + 6*X6"
        );
        assert_eq!(format!("{}", witt_polynomial_big(1)), "X1");
        assert_eq!(
            format!("{}", witt_polynomial_padic(2, 2)),
            "X0^4 + 2*X1^2 + 4*X2"
        );
    }

    #[test]
    fn addition_polynomials_nest12() {
        let idx = Indexing::Big(Nest::upto(2));
        let fam = structure_polys(StructKind::Add, &idx).unwrap();
        assert_eq!(format!("{}", fam.poly(1).unwrap()), "X1 + Y1");
        // X2 + Y2 - X1 Y1
        let expect = QPoly::var(Var::x(2))
            .add(&QPoly::var(Var::y(2)))
            .sub(&QPoly::var(Var::x(1)).mul(&QPoly::var(Var::y(1))));
        assert_eq!(*fam.poly(2).unwrap(), expect);
    }

    #[test]
    fn multiplication_polynomials_nest12() {
        let idx = Indexing::Big(Nest::upto(2));
        let fam = structure_polys(StructKind::Mul, &idx).unwrap();
        let x1 = QPoly::var(Var::x(1));
        let x2 = QPoly::var(Var::x(2));
        let y1 = QPoly::var(Var::y(1));
        let y2 = QPoly::var(Var::y(2));
        assert_eq!(*fam.poly(1).unwrap(), x1.mul(&y1));
        let expect = x1
            .pow(2)
            .mul(&y2)
            .add(&x2.mul(&y1.pow(2)))
            .add(&x2.mul(&y2).mul_int(2));
        assert_eq!(*fam.poly(2).unwrap(), expect);
    }

    #[test]
    fn unit_family_is_unit_vector() {
        let idx = Indexing::Big(Nest::upto(4));
        let fam = structure_polys(StructKind::Unit, &idx).unwrap();
        assert_eq!(*fam.poly(1).unwrap(), QPoly::one());
        for n in 2..=4 {
            assert!(fam.poly(n).unwrap().is_zero());
        }
    }

    #[test]
    fn frobenius2_first_members() {
        let idx = Indexing::Big(Nest::upto(2));
        let fam = structure_polys(StructKind::Frobenius(2), &idx).unwrap();
        // index 1: X1^2 + 2 X2 = w_2
        assert_eq!(*fam.poly(1).unwrap(), witt_polynomial_big(2));
        // index 2: 2 X4 - 2 X1^2 X2 - X2^2
        let x1 = QPoly::var(Var::x(1));
        let x2 = QPoly::var(Var::x(2));
        let x4 = QPoly::var(Var::x(4));
        let expect = x4
            .mul_int(2)
            .sub(&x1.pow(2).mul(&x2).mul_int(2))
            .sub(&x2.pow(2));
        assert_eq!(*fam.poly(2).unwrap(), expect);
        // input alphabet is indexed by the dilated nest
        assert_eq!(
            fam.input_indexing,
            Indexing::Big(Nest::new(vec![1, 2, 4]).unwrap())
        );
    }

    #[test]
    fn padic_addition_index1() {
        let idx = Indexing::Padic { p: 2, len: 1 };
        let fam = structure_polys(StructKind::Add, &idx).unwrap();
        // s_1 = X1 + Y1 - X0 Y0
        let expect = QPoly::var(Var::x(1))
            .add(&QPoly::var(Var::y(1)))
            .sub(&QPoly::var(Var::x(0)).mul(&QPoly::var(Var::y(0))));
        assert_eq!(*fam.poly(1).unwrap(), expect);
    }

    #[test]
    fn nmult2_index2() {
        let idx = Indexing::Big(Nest::upto(2));
        let fam = structure_polys(StructKind::NMult(2), &idx).unwrap();
        // 2 X2 - X1^2
        let expect = QPoly::var(Var::x(2))
            .mul_int(2)
            .sub(&QPoly::var(Var::x(1)).pow(2));
        assert_eq!(*fam.poly(2).unwrap(), expect);
    }

    #[test]
    fn divisor_support() {
        let idx = Indexing::Big(Nest::upto(12));
        let fam = structure_polys(StructKind::Mul, &idx).unwrap();
        for (&n, poly) in &fam.polys {
            for v in poly.support() {
                assert_eq!(n % v.idx, 0, "index {} uses variable {}", n, v.name());
            }
        }
        // Frobenius members at index r use only variables dividing m*r
        for m in [2u64, 3] {
            let fam = structure_polys(StructKind::Frobenius(m), &idx).unwrap();
            for (&r, poly) in &fam.polys {
                for v in poly.support() {
                    assert_eq!(
                        (m * r) % v.idx,
                        0,
                        "f_{} index {} uses variable {}",
                        m,
                        r,
                        v.name()
                    );
                }
            }
        }
    }

    #[test]
    fn teichmuller_sum_list() {
        let fam = teichmuller_sum_polys(6).unwrap();
        let x = QPoly::var(Var::x(1));
        let y = QPoly::var(Var::y(1));
        assert_eq!(*fam.poly(1).unwrap(), x.add(&y));
        assert_eq!(*fam.poly(2).unwrap(), x.mul(&y).neg());
        // r_4 = -(X^3 Y + 2 X^2 Y^2 + X Y^3)
        let r4 = x
            .pow(3)
            .mul(&y)
            .add(&x.pow(2).mul(&y.pow(2)).mul_int(2))
            .add(&x.mul(&y.pow(3)))
            .neg();
        assert_eq!(*fam.poly(4).unwrap(), r4);
        // coefficients of r_2..r_6 are all negative
        for d in 2..=6 {
            for (_, c) in fam.poly(d).unwrap().terms() {
                assert!(c < &qint(0), "r_{} has positive coefficient {}", d, c);
            }
        }
    }

    #[test]
    fn frobenius_congruences() {
        let idx = Indexing::Padic { p: 3, len: 3 };
        let fam = structure_polys(StructKind::Frobenius(3), &idx).unwrap();
        let rep = congruence_suite(&fam, CongruenceSet::FrobeniusModP, 3).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.checks);

        let idx2 = Indexing::Padic { p: 2, len: 3 };
        let nf = structure_polys(StructKind::NMult(2), &idx2).unwrap();
        let rep2 = congruence_suite(&nf, CongruenceSet::NMultModP, 2).unwrap();
        assert!(rep2.all_pass(), "{:?}", rep2.checks);

        // perturbed family must fail with a witness
        let mut bad = (*nf).clone();
        let one = QPoly::one();
        let p1 = bad.polys.get_mut(&1).unwrap();
        *p1 = p1.add(&one);
        let rep3 = congruence_suite(&bad, CongruenceSet::NMultModP, 2).unwrap();
        assert!(!rep3.all_pass());
        assert!(rep3.checks.iter().any(|c| !c.pass && c.witness.is_some()));
    }

    #[test]
    fn solve_is_deterministic_and_cache_roundtrips() {
        let idx = Indexing::Big(Nest::upto(6));
        let f1 = structure_polys(StructKind::Add, &idx).unwrap();
        let (t, _) = structure_targets(StructKind::Add, &idx).unwrap();
        let again = solve_ghost(&idx, &t).unwrap();
        assert_eq!(f1.polys, again);
        let bytes = family_to_bytes(&f1);
        let parsed = UnivPolyFamily::from_json(&serde_json::from_slice(&bytes).unwrap()).unwrap();
        assert_eq!(*f1, parsed);
        assert_eq!(bytes, family_to_bytes(&parsed));
    }
}
