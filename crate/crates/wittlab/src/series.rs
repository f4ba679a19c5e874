//! The functor Lambda(A) = 1 + tA[[t]] at finite truncation: group law, Witt
//! multiplication, coordinate changes, Frobenius/Verschiebung/homothety,
//! exterior and symmetric powers, Adams operations, and the lambda-ring
//! constructions from Adams families.
//!
//! Every series carries an explicit order D; operations state their output
//! order (f_n consumes order nD' to produce D').

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Result, WittError};
use crate::nest::Nest;
use crate::qpoly::{QPoly, Var};
use crate::ring::{FrobeniusFamily, RingElem, RingSpec};
use crate::symm::{monomial_in_h, power_sum_in_h, Coef, Partition};
use crate::univ::Indexing;
use crate::witt::WittVec;

/// A degree-truncated power series with constant term 1.
#[derive(Clone, PartialEq, Eq)]
pub struct BigOneSeries {
    pub ring: RingSpec,
    /// Coefficients a_1 .. a_D.
    coeffs: Vec<RingElem>,
}

impl fmt::Debug for BigOneSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for BigOneSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = format!("{}", c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            let needs_parens = mag.contains('+') || mag.contains(" - ");
            let power = if i == 0 {
                "t".to_string()
            } else {
                format!("t^{}", i + 1)
            };
            if needs_parens {
                write!(f, " {} ({})*{}", sign, mag, power)?;
            } else if mag == "1" {
                write!(f, " {} {}", sign, power)?;
            } else {
                write!(f, " {} {}*{}", sign, mag, power)?;
            }
        }
        Ok(())
    }
}

impl BigOneSeries {
    pub fn new(ring: &RingSpec, coeffs: Vec<RingElem>) -> Result<BigOneSeries> {
        for c in &coeffs {
            if c.spec() != ring {
                return Err(WittError::SpecMismatch(format!(
                    "coefficient in {}, expected {}",
                    c.spec(),
                    ring
                )));
            }
        }
        Ok(BigOneSeries {
            ring: ring.clone(),
            coeffs,
        })
    }

    /// The series 1 (group zero) at the given order.
    pub fn one(ring: &RingSpec, order: usize) -> BigOneSeries {
        BigOneSeries {
            ring: ring.clone(),
            coeffs: vec![ring.zero(); order],
        }
    }

    /// (1 - x t^d)^{-1} truncated.
    pub fn geometric(x: &RingElem, d: usize, order: usize) -> BigOneSeries {
        let ring = x.spec().clone();
        let mut coeffs = vec![ring.zero(); order];
        let mut power = ring.one();
        let mut idx = d;
        while idx <= order {
            power = power.mul(x).expect("same spec");
            coeffs[idx - 1] = power.clone();
            idx += d;
        }
        BigOneSeries { ring, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of t^k (k >= 1).
    pub fn coeff(&self, k: usize) -> &RingElem {
        &self.coeffs[k - 1]
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, v: RingElem) {
        self.coeffs[k - 1] = v;
    }

    pub fn truncate(&self, order: usize) -> BigOneSeries {
        BigOneSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..order.min(self.coeffs.len())].to_vec(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_ring(&self, other: &BigOneSeries) -> Result<()> {
        if self.ring != other.ring {
            return Err(WittError::SpecMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|c| c.to_json()["value"].clone())
            .collect();
        json!({"ring": self.ring.to_json(), "order": self.order(), "coeffs": coeffs})
    }
}

// ---- Group law (series multiplication) ----

/// Lambda addition: the product of power series, truncated at the smaller
/// order.
pub fn lambda_add(a: &BigOneSeries, b: &BigOneSeries) -> Result<BigOneSeries> {
    a.check_ring(b)?;
    let order = a.order().min(b.order());
    let ring = &a.ring;
    let mut coeffs = Vec::with_capacity(order);
    for k in 1..=order {
        let mut acc = a.coeff(k).add(b.coeff(k))?;
        for i in 1..k {
            acc = acc.add(&a.coeff(i).mul(b.coeff(k - i))?)?;
        }
        coeffs.push(acc);
    }
    BigOneSeries::new(ring, coeffs)
}

/// Lambda negation: the multiplicative inverse series.
pub fn lambda_neg(a: &BigOneSeries) -> Result<BigOneSeries> {
    let order = a.order();
    let ring = &a.ring;
    let mut inv: Vec<RingElem> = Vec::with_capacity(order);
    for k in 1..=order {
        // b_k = -(a_k + sum_{i=1}^{k-1} b_i a_{k-i})
        let mut acc = a.coeff(k).clone();
        for i in 1..k {
            acc = acc.add(&inv[i - 1].mul(a.coeff(k - i))?)?;
        }
        inv.push(acc.neg());
    }
    BigOneSeries::new(ring, inv)
}

pub fn lambda_sub(a: &BigOneSeries, b: &BigOneSeries) -> Result<BigOneSeries> {
    lambda_add(a, &lambda_neg(&b.truncate(a.order().min(b.order())))?)
}

// ---- Witt multiplication ----

/// Universal coefficient polynomial of the Witt product: the coefficient of
/// t^n in a *_W b is sum over partitions of n of h_lambda(a) m_lambda(b),
/// with X_i = a_i and Y_j = b_j.
fn witt_product_poly(n: u32) -> Result<QPoly> {
    static CACHE: OnceLock<Mutex<HashMap<u32, QPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("witt product cache").get(&n) {
        return Ok(hit.clone());
    }
    let rows = monomial_in_h(n)?;
    let mut acc = QPoly::zero();
    for (lam, m_in_h) in rows {
        let mut xpart = QPoly::one();
        for &part in lam.parts() {
            xpart = xpart.mul(&QPoly::var(Var::x(part as u64)));
        }
        let mut ypart = QPoly::zero();
        for (mu, c) in m_in_h {
            let mut term = QPoly::constant(c);
            for &part in mu.parts() {
                term = term.mul(&QPoly::var(Var::y(part as u64)));
            }
            ypart = ypart.add(&term);
        }
        acc = acc.add(&xpart.mul(&ypart));
    }
    if !acc.is_integral() {
        return Err(WittError::NonIntegral(format!(
            "witt product coefficient {} is not integral",
            n
        )));
    }
    cache
        .lock()
        .expect("witt product cache")
        .insert(n, acc.clone());
    Ok(acc)
}

/// The Witt (second) multiplication on Lambda(A); unit is (1-t)^{-1}.
pub fn witt_product(a: &BigOneSeries, b: &BigOneSeries) -> Result<BigOneSeries> {
    a.check_ring(b)?;
    let order = a.order().min(b.order());
    let ring = &a.ring;
    let mut coeffs = Vec::with_capacity(order);
    for k in 1..=order {
        let poly = witt_product_poly(k as u32)?;
        let val = poly.eval(ring, &|v: Var| match v.alph {
            b'X' => a.coeff(v.idx as usize).clone(),
            b'Y' => b.coeff(v.idx as usize).clone(),
            _ => unreachable!(),
        })?;
        coeffs.push(val);
    }
    BigOneSeries::new(ring, coeffs)
}

/// The unit (1-t)^{-1} of the Witt multiplication.
pub fn witt_unit(ring: &RingSpec, order: usize) -> BigOneSeries {
    BigOneSeries::geometric(&ring.one(), 1, order)
}

// ---- Coordinate changes ----

/// Witt coordinates -> series: prod over d of (1 - x_d t^d)^{-1}.
pub fn from_witt(x: &WittVec, order: usize) -> Result<BigOneSeries> {
    let nest = match &x.indexing {
        Indexing::Big(nest) => nest.clone(),
        Indexing::Padic { .. } => {
            return Err(WittError::Unsupported(
                "convert p-adic vectors to nest form first".into(),
            ))
        }
    };
    let mut acc = BigOneSeries::one(&x.ring, order);
    for &d in nest.indices() {
        if d as usize > order {
            break;
        }
        let factor = BigOneSeries::geometric(x.coord(d), d as usize, order);
        acc = lambda_add(&acc, &factor)?;
    }
    Ok(acc)
}

/// Series -> Witt coordinates by triangular peeling (integer arithmetic).
pub fn to_witt(a: &BigOneSeries) -> Result<WittVec> {
    let order = a.order() as u64;
    let nest = Nest::upto(order);
    let mut g = a.clone();
    let mut coords = BTreeMap::new();
    for d in 1..=order {
        let xd = g.coeff(d as usize).clone();
        coords.insert(d, xd.clone());
        // divide out (1 - x_d t^d)^{-1}, i.e. multiply by (1 - x_d t^d)
        let mut next = g.clone();
        for k in 1..=order {
            let mut v = g.coeff(k as usize).clone();
            if k > d {
                v = v.sub(&g.coeff((k - d) as usize).mul(&xd)?)?;
            } else if k == d {
                v = v.sub(&xd)?;
            }
            next.set_coeff(k as usize, v);
        }
        g = next;
    }
    WittVec::new(a.ring.clone(), Indexing::Big(nest), coords)
}

/// (1 - t^n)^{-c} truncated: the binomial series with ring exponent c.
/// Divisions by k! must be exact in the ring.
pub fn necklace_factor(c: &RingElem, n: usize, order: usize) -> Result<BigOneSeries> {
    let ring = c.spec().clone();
    let mut coeffs = vec![ring.zero(); order];
    // binom(c + k - 1, k) = prod_{i=0}^{k-1} (c + i) / k!
    let mut numer = ring.one();
    let mut factorial = BigInt::one();
    let mut k = 1u64;
    while n as u64 * k <= order as u64 {
        numer = numer.mul(&c.add(&ring.from_bigint(BigInt::from(k - 1)))?)?;
        factorial *= BigInt::from(k);
        let b = numer.div_exact_int(&factorial).map_err(|_| {
            WittError::NotInvertible(format!("{}! in {}", k, ring))
        })?;
        coeffs[(n as u64 * k - 1) as usize] = b;
        k += 1;
    }
    BigOneSeries::new(&ring, coeffs)
}

/// Necklace coordinates -> series: prod over n of (1 - t^n)^{-c_n}.
pub fn from_necklace(c: &[RingElem], order: usize) -> Result<BigOneSeries> {
    if c.is_empty() {
        return Err(WittError::InvalidSpec("empty necklace vector".into()));
    }
    let ring = c[0].spec().clone();
    let mut acc = BigOneSeries::one(&ring, order);
    for (i, cn) in c.iter().enumerate() {
        if i + 1 > order {
            break;
        }
        if cn.is_zero() {
            continue;
        }
        acc = lambda_add(&acc, &necklace_factor(cn, i + 1, order)?)?;
    }
    Ok(acc)
}

/// Series -> necklace coordinates over the rational lift, with an
/// integrality verdict. The returned coefficients stay in the original ring
/// when they are integral there.
pub fn to_necklace(a: &BigOneSeries) -> Result<(Vec<RingElem>, bool)> {
    let lifted_ring = a.ring.rational_lift()?;
    let lifted = BigOneSeries::new(
        &lifted_ring,
        a.coeffs
            .iter()
            .map(|c| c.lift_rationals())
            .collect::<Result<Vec<_>>>()?,
    )?;
    let order = a.order();
    let mut g = lifted;
    let mut cs = Vec::with_capacity(order);
    for d in 1..=order {
        let cd = g.coeff(d).clone();
        cs.push(cd.clone());
        if !cd.is_zero() {
            // divide out (1 - t^d)^{-c_d}
            let inv = lambda_neg(&necklace_factor(&cd, d, order)?)?;
            g = lambda_add(&g, &inv)?;
        }
    }
    // integrality verdict and optional lowering back into the source ring
    let lowered: Result<Vec<RingElem>> = cs.iter().map(|c| c.lower_into(&a.ring)).collect();
    match lowered {
        Ok(v) => Ok((v, true)),
        Err(_) => Ok((cs, false)),
    }
}

// ---- Ghost components ----

/// Ghost components p_1..p_D by the integer Newton recursion
/// p_n = n a_n - sum_{i=1}^{n-1} a_i p_{n-i}.
pub fn series_ghost(a: &BigOneSeries) -> Result<Vec<RingElem>> {
    let order = a.order();
    let mut ghosts: Vec<RingElem> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut acc = a.coeff(n).mul_int(n as i64);
        for i in 1..n {
            acc = acc.sub(&a.coeff(i).mul(&ghosts[n - i - 1])?)?;
        }
        ghosts.push(acc);
    }
    Ok(ghosts)
}

/// Inverse of `series_ghost` over rings where division by n is exact:
/// a_n = (p_n + sum_{i=1}^{n-1} a_i p_{n-i}) / n.
pub fn series_from_ghost(ring: &RingSpec, ghosts: &[RingElem]) -> Result<BigOneSeries> {
    let order = ghosts.len();
    let mut coeffs: Vec<RingElem> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut acc = ghosts[n - 1].clone();
        for i in 1..n {
            acc = acc.add(&coeffs[i - 1].mul(&ghosts[n - i - 1])?)?;
        }
        coeffs.push(acc.div_exact_int(&BigInt::from(n))?);
    }
    BigOneSeries::new(ring, coeffs)
}

// ---- Universal operator coefficient polynomials ----

fn hexp_to_qpoly(h: &[(Partition, Coef)]) -> QPoly {
    let mut acc = QPoly::zero();
    for (mu, c) in h {
        let mut term = QPoly::constant(c.clone());
        for &part in mu.parts() {
            term = term.mul(&QPoly::var(Var::x(part as u64)));
        }
        acc = acc.add(&term);
    }
    acc
}

/// Solve for the coefficients b_k of a series whose ghost components are the
/// given polynomials in the a-coordinates (X_i = a_i); integrality asserted.
fn newton_solve_universal(ghosts: &[QPoly], what: &str) -> Result<Vec<QPoly>> {
    let mut coeffs: Vec<QPoly> = Vec::with_capacity(ghosts.len());
    for k in 1..=ghosts.len() {
        let mut acc = ghosts[k - 1].clone();
        for i in 1..k {
            acc = acc.add(&coeffs[i - 1].mul(&ghosts[k - i - 1]));
        }
        let b = acc.div_int(k as u64);
        coeffs.push(b);
    }
    for (k, b) in coeffs.iter().enumerate() {
        if let Some((_, den)) = b.integrality_witness() {
            return Err(WittError::NonIntegral(format!(
                "{} coefficient {} has denominator {}",
                what,
                k + 1,
                den
            )));
        }
    }
    Ok(coeffs)
}

/// p_j in the a-coordinates as a QPoly (X_i = a_i).
fn newton_power_poly(j: u32) -> QPoly {
    let h = power_sum_in_h(j);
    let rows: Vec<(Partition, Coef)> = h.into_iter().collect();
    hexp_to_qpoly(&rows)
}

/// Universal coefficients of the series Frobenius f_n: the k-th coefficient
/// polynomial (weight nk in the a's), solved from the ghost law
/// s_r(f_n a) = s_{nr}(a).
fn frobenius_series_polys(n: u32, count: usize) -> Result<Vec<QPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Vec<QPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("frobenius cache").get(&(n, count)) {
        return Ok(hit.clone());
    }
    let ghosts: Vec<QPoly> = (1..=count as u32).map(|r| newton_power_poly(n * r)).collect();
    let polys = newton_solve_universal(&ghosts, &format!("series Frobenius f_{}", n))?;
    cache
        .lock()
        .expect("frobenius cache")
        .insert((n, count), polys.clone());
    Ok(polys)
}

/// m_{(r^m)} (= e_m o p_r) in the a-coordinates.
fn e_pleth_poly(m: u32, r: u32) -> Result<QPoly> {
    let rows = monomial_in_h(m * r)?;
    let target = Partition::new(vec![r; m as usize]);
    let row = rows
        .into_iter()
        .find(|(lam, _)| *lam == target)
        .map(|(_, row)| row)
        .ok_or_else(|| WittError::Unsupported("partition not found".into()))?;
    Ok(hexp_to_qpoly(&row))
}

/// h_m o p_r = sum over partitions nu of m of m_{r nu}, in the a-coordinates.
fn h_pleth_poly(m: u32, r: u32) -> Result<QPoly> {
    let rows = monomial_in_h(m * r)?;
    let wanted: std::collections::BTreeSet<Partition> = crate::arith::partitions(m)
        .into_iter()
        .map(|nu| Partition::new(nu.into_iter().map(|p| p * r).collect()))
        .collect();
    let mut acc = QPoly::zero();
    for (lam, row) in rows {
        if wanted.contains(&lam) {
            acc = acc.add(&hexp_to_qpoly(&row));
        }
    }
    Ok(acc)
}

fn lambda_power_polys(m: u32, count: usize) -> Result<Vec<QPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Vec<QPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("lambda cache").get(&(m, count)) {
        return Ok(hit.clone());
    }
    let ghosts: Vec<QPoly> = (1..=count as u32)
        .map(|r| e_pleth_poly(m, r))
        .collect::<Result<Vec<_>>>()?;
    let polys = newton_solve_universal(&ghosts, &format!("lambda^{}", m))?;
    cache
        .lock()
        .expect("lambda cache")
        .insert((m, count), polys.clone());
    Ok(polys)
}

fn sigma_power_polys(m: u32, count: usize) -> Result<Vec<QPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Vec<QPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("sigma cache").get(&(m, count)) {
        return Ok(hit.clone());
    }
    let ghosts: Vec<QPoly> = (1..=count as u32)
        .map(|r| h_pleth_poly(m, r))
        .collect::<Result<Vec<_>>>()?;
    let polys = newton_solve_universal(&ghosts, &format!("sigma^{}", m))?;
    cache
        .lock()
        .expect("sigma cache")
        .insert((m, count), polys.clone());
    Ok(polys)
}

fn eval_coeff_polys(polys: &[QPoly], a: &BigOneSeries) -> Result<BigOneSeries> {
    let ring = &a.ring;
    let coeffs: Result<Vec<RingElem>> = polys
        .iter()
        .map(|p| {
            p.eval(ring, &|v: Var| a.coeff(v.idx as usize).clone())
        })
        .collect();
    BigOneSeries::new(ring, coeffs?)
}

// ---- Operators ----

#[derive(Clone, Debug)]
pub enum SeriesOperator {
    Verschiebung(u64),
    Frobenius(u64),
    Homothety(RingElem),
    NMult(u64),
}

/// V_n: a(t) -> a(t^n); output order grows to n * D.
pub fn series_verschiebung(n: u64, a: &BigOneSeries) -> Result<BigOneSeries> {
    let order = a.order() * n as usize;
    let mut coeffs = vec![a.ring.zero(); order];
    for k in 1..=a.order() {
        coeffs[k * n as usize - 1] = a.coeff(k).clone();
    }
    BigOneSeries::new(&a.ring, coeffs)
}

/// f_n; consumes order nD' to produce order D' = floor(D / n). Over
/// torsion-free rings the ghost route is used; elsewhere (and in
/// [`series_frobenius_univ`]) the universal coefficient polynomials
/// h_k o p_n are evaluated.
pub fn series_frobenius(n: u64, a: &BigOneSeries) -> Result<BigOneSeries> {
    if n == 1 {
        return Ok(a.clone());
    }
    if a.ring.is_torsion_free() {
        let lifted_ring = a.ring.rational_lift()?;
        let lifted = BigOneSeries::new(
            &lifted_ring,
            a.coeffs
                .iter()
                .map(|c| c.lift_rationals())
                .collect::<Result<Vec<_>>>()?,
        )?;
        let ghosts = series_ghost(&lifted)?;
        let out_order = a.order() / n as usize;
        let picked: Vec<RingElem> = (1..=out_order)
            .map(|r| ghosts[r * n as usize - 1].clone())
            .collect();
        let image = series_from_ghost(&lifted_ring, &picked)?;
        return BigOneSeries::new(
            &a.ring,
            image
                .coeffs
                .iter()
                .map(|c| c.lower_into(&a.ring))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    series_frobenius_univ(n, a)
}

/// f_n strictly through the universal integer polynomials, independent of
/// the ghost route (the Adams assertion compares the two).
pub fn series_frobenius_univ(n: u64, a: &BigOneSeries) -> Result<BigOneSeries> {
    let out_order = a.order() / n as usize;
    let polys = frobenius_series_polys(n as u32, out_order)?;
    eval_coeff_polys(&polys, a)
}

/// <u>: a(t) -> a(ut).
pub fn series_homothety(u: &RingElem, a: &BigOneSeries) -> Result<BigOneSeries> {
    if u.spec() != &a.ring {
        return Err(WittError::SpecMismatch(format!(
            "{} vs {}",
            u.spec(),
            a.ring
        )));
    }
    let coeffs: Result<Vec<RingElem>> = (1..=a.order())
        .map(|k| a.coeff(k).mul(&u.pow(k as u64)))
        .collect();
    BigOneSeries::new(&a.ring, coeffs?)
}

/// [n]: a(t) -> a(t)^n.
pub fn series_nmult(n: u64, a: &BigOneSeries) -> Result<BigOneSeries> {
    let mut acc = BigOneSeries::one(&a.ring, a.order());
    let mut base = a.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = lambda_add(&acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = lambda_add(&base, &base)?;
        }
    }
    Ok(acc)
}

pub fn apply_series_operator(op: &SeriesOperator, a: &BigOneSeries) -> Result<BigOneSeries> {
    match op {
        SeriesOperator::Verschiebung(n) => series_verschiebung(*n, a),
        SeriesOperator::Frobenius(n) => series_frobenius(*n, a),
        SeriesOperator::Homothety(u) => series_homothety(u, a),
        SeriesOperator::NMult(n) => series_nmult(*n, a),
    }
}

// ---- Exterior and symmetric powers, Adams operations ----

/// lambda^m on Lambda(A): coefficient k is (h_k o e_m) at the a-coordinates.
/// Output order floor(D / m).
pub fn lambda_power(m: u64, a: &BigOneSeries) -> Result<BigOneSeries> {
    if m == 0 {
        // lambda^0 = 1 in the ring Lambda(A), i.e. the Witt unit
        return Ok(witt_unit(&a.ring, a.order()));
    }
    let out_order = a.order() / m as usize;
    let polys = lambda_power_polys(m as u32, out_order)?;
    eval_coeff_polys(&polys, a)
}

/// sigma^m on Lambda(A): coefficient k is (h_k o h_m) at the a-coordinates.
pub fn sigma_power(m: u64, a: &BigOneSeries) -> Result<BigOneSeries> {
    if m == 0 {
        return Ok(witt_unit(&a.ring, a.order()));
    }
    let out_order = a.order() / m as usize;
    let polys = sigma_power_polys(m as u32, out_order)?;
    eval_coeff_polys(&polys, a)
}

/// Adams operation psi^n by the logarithmic-derivative (ghost) route over
/// the rational lift; must agree exactly with the Frobenius route, and the
/// agreement is asserted.
pub fn adams(n: u64, a: &BigOneSeries) -> Result<BigOneSeries> {
    let lifted_ring = a.ring.rational_lift()?;
    let lifted = BigOneSeries::new(
        &lifted_ring,
        a.coeffs
            .iter()
            .map(|c| c.lift_rationals())
            .collect::<Result<Vec<_>>>()?,
    )?;
    let ghosts = series_ghost(&lifted)?;
    let out_order = a.order() / n as usize;
    let psi_ghosts: Vec<RingElem> = (1..=out_order)
        .map(|r| ghosts[r * n as usize - 1].clone())
        .collect();
    let psi = series_from_ghost(&lifted_ring, &psi_ghosts)?;
    let lowered = BigOneSeries::new(
        &a.ring,
        psi.coeffs
            .iter()
            .map(|c| c.lower_into(&a.ring))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let frob = series_frobenius_univ(n, a)?;
    if lowered != frob {
        return Err(WittError::Unsupported(format!(
            "Adams psi^{} disagrees with Frobenius f_{}",
            n, n
        )));
    }
    Ok(lowered)
}

// ---- Lambda-ring constructions from Adams families ----

/// sigma_t(x) for the lambda-ring defined by a Frobenius family: the unique
/// series with ghost_n = phi_n(x); integrality of the coefficients in the
/// base ring is asserted.
pub fn sigma_from_adams(
    family: &FrobeniusFamily,
    x: &RingElem,
    order: usize,
) -> Result<BigOneSeries> {
    if !family.spec.is_torsion_free() {
        return Err(WittError::Unsupported(
            "sigma_t needs a characteristic-zero torsion-free ring".into(),
        ));
    }
    let lifted_ring = family.spec.rational_lift()?;
    let ghosts: Result<Vec<RingElem>> = (1..=order as u64)
        .map(|n| family.apply(n, x)?.lift_rationals())
        .collect();
    let lifted = series_from_ghost(&lifted_ring, &ghosts?)?;
    let coeffs: Result<Vec<RingElem>> = lifted
        .coeffs
        .iter()
        .map(|c| {
            c.lower_into(&family.spec).map_err(|_| {
                WittError::NonIntegral(format!(
                    "sigma_t coefficient {} leaves the base ring",
                    c
                ))
            })
        })
        .collect();
    BigOneSeries::new(&family.spec, coeffs?)
}

/// Lift a ring map alpha: S -> A through the cofree lambda-ring W(A):
/// x -> alpha applied coefficientwise to sigma_t(x).
pub fn cofree_lift(
    family_s: &FrobeniusFamily,
    alpha: &dyn Fn(&RingElem) -> Result<RingElem>,
    x: &RingElem,
    order: usize,
) -> Result<BigOneSeries> {
    let sigma = sigma_from_adams(family_s, x, order)?;
    let coeffs: Result<Vec<RingElem>> = sigma.coeffs.iter().map(|c| alpha(c)).collect();
    let coeffs = coeffs?;
    if coeffs.is_empty() {
        return Err(WittError::InvalidSpec("order must be >= 1".into()));
    }
    let ring = coeffs[0].spec().clone();
    BigOneSeries::new(&ring, coeffs)
}

// ---- Artin-Hasse exponential ----

/// Element of W(W(A)): outer Witt coordinates that are themselves Witt
/// vectors over the inner truncation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittOfWitt {
    pub ring: RingSpec,
    pub outer: BTreeMap<u64, WittVec>,
}

/// Universal Artin-Hasse coordinate polynomials: for outer index n and inner
/// index m, Z[n][m] in the x-coordinates of the argument. Characterized by:
/// outer ghost component n of AH(x) equals f_n(x) in W(A).
fn ah_polys(outer: u64, inner: u64) -> Result<std::sync::Arc<BTreeMap<(u64, u64), QPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), std::sync::Arc<BTreeMap<(u64, u64), QPoly>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("ah cache").get(&(outer, inner)) {
        return Ok(hit.clone());
    }
    // double-ghost solve: G[n][r] with sum over d|n of d G[d][r]^{n/d} = w_{nr}(x)
    let mut g: BTreeMap<(u64, u64), QPoly> = BTreeMap::new();
    for n in 1..=outer {
        for r in 1..=inner {
            let target = crate::univ::witt_polynomial_big(n * r);
            let mut partial = QPoly::zero();
            for d in crate::arith::divisors(n) {
                if d == n {
                    continue;
                }
                partial = partial.add(&g[&(d, r)].pow(n / d).mul_int(d as i64));
            }
            g.insert((n, r), target.sub(&partial).div_int(n));
        }
    }
    // inner from_ghost: Z[n][m] from the ghost row (G[n][r])_r
    let mut z: BTreeMap<(u64, u64), QPoly> = BTreeMap::new();
    for n in 1..=outer {
        for m in 1..=inner {
            let mut partial = QPoly::zero();
            for e in crate::arith::divisors(m) {
                if e == m {
                    continue;
                }
                partial = partial.add(&z[&(n, e)].pow(m / e).mul_int(e as i64));
            }
            let zm = g[&(n, m)].sub(&partial).div_int(m);
            z.insert((n, m), zm);
        }
    }
    for ((n, m), poly) in &z {
        if let Some((_, den)) = poly.integrality_witness() {
            return Err(WittError::NonIntegral(format!(
                "AH coordinate ({}, {}) has denominator {}",
                n, m, den
            )));
        }
    }
    let arc = std::sync::Arc::new(z);
    cache
        .lock()
        .expect("ah cache")
        .insert((outer, inner), arc.clone());
    Ok(arc)
}

/// The Artin-Hasse exponential AH: W(A) -> W(W(A)) at the given outer and
/// inner truncations. The argument must carry every index dividing a
/// product n*m with n <= outer, m <= inner.
pub fn artin_hasse(x: &WittVec, outer: u64, inner: u64) -> Result<WittOfWitt> {
    let polys = ah_polys(outer, inner)?;
    let nest = match &x.indexing {
        Indexing::Big(nest) => nest.clone(),
        Indexing::Padic { .. } => {
            return Err(WittError::Unsupported(
                "convert p-adic vectors to nest form first".into(),
            ))
        }
    };
    // precondition: support of the polynomials is available
    for poly in polys.values() {
        for v in poly.support() {
            if !nest.contains(v.idx) {
                return Err(WittError::NestTooSmall(format!(
                    "AH at outer {} inner {} needs index {}",
                    outer, inner, v.idx
                )));
            }
        }
    }
    let inner_indexing = Indexing::Big(Nest::upto(inner));
    let mut out = BTreeMap::new();
    for n in 1..=outer {
        let mut coords = BTreeMap::new();
        for m in 1..=inner {
            let val = polys[&(n, m)].eval(&x.ring, &|v: Var| x.coord(v.idx).clone())?;
            coords.insert(m, val);
        }
        out.insert(n, WittVec::new(x.ring.clone(), inner_indexing.clone(), coords)?);
    }
    Ok(WittOfWitt {
        ring: x.ring.clone(),
        outer: out,
    })
}

/// AH with coefficients in a Witt ring: evaluates the same universal
/// polynomials with Witt-vector arithmetic, giving the middle map of the
/// coassociativity square.
pub fn artin_hasse_over_witt(
    x: &BTreeMap<u64, WittVec>,
    base: &crate::witt::WittRingCtx,
    outer: u64,
    inner: u64,
) -> Result<BTreeMap<u64, BTreeMap<u64, WittVec>>> {
    let polys = ah_polys(outer, inner)?;
    let mut out = BTreeMap::new();
    for n in 1..=outer {
        let mut row = BTreeMap::new();
        for m in 1..=inner {
            let val = polys[&(n, m)].eval(base, &|v: Var| x[&v.idx].clone())?;
            row.insert(m, val);
        }
        out.insert(n, row);
    }
    Ok(out)
}
