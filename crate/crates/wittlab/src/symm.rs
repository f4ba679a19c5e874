//! The graded ring Symm of symmetric functions up to a weight cap: the
//! classical bases plus the Witt and r bases, Hall inner product, both
//! comultiplications, antipode, Frobenius/Verschiebung, plethysm, Hirzebruch
//! sequences and partition combinatorics.
//!
//! Change-of-basis matrices are built per weight by expanding each basis in
//! weight-many variables (kept symmetry-reduced: one coefficient per sorted
//! monomial) and solving against the monomial basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::partitions;
use crate::error::{Result, WittError};
use crate::qpoly::{QPoly, Var};

pub type Coef = BigRational;

fn cint(n: i64) -> Coef {
    BigRational::from_integer(BigInt::from(n))
}

// ---- Partitions ----

/// A partition: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts equal to i.
    pub fn multiplicity(&self, i: u32) -> u32 {
        self.0.iter().filter(|&&p| p == i).count() as u32
    }

    /// z_lambda = prod over i of i^{m_i} m_i!.
    pub fn z(&self) -> BigInt {
        let mut z = BigInt::one();
        let maxpart = self.0.first().copied().unwrap_or(0);
        for i in 1..=maxpart {
            let m = self.multiplicity(i) as u64;
            for k in 1..=m {
                z *= BigInt::from(k);
            }
            z *= crate::arith::big_pow(&BigInt::from(i), m);
        }
        z
    }

    /// Conjugate partition (column counts of the diagram).
    pub fn conjugate(&self) -> Partition {
        if self.0.is_empty() {
            return Partition::empty();
        }
        let max = self.0[0];
        let parts = (1..=max)
            .map(|i| self.0.iter().filter(|&&p| p >= i).count() as u32)
            .collect();
        Partition(parts)
    }

    /// Union of parts, re-sorted.
    pub fn merge(&self, other: &Partition) -> Partition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Partition::new(v)
    }

    /// Every part scaled by n.
    pub fn scale(&self, n: u32) -> Partition {
        Partition(self.0.iter().map(|&p| p * n).collect())
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// lambda contained in kappa, part by part.
    pub fn contained_in(&self, kappa: &Partition) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &p)| p <= kappa.part(i))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", strs.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn partitions_of(d: u32) -> Vec<Partition> {
    partitions(d).into_iter().map(Partition).collect()
}

// ---- Bases and symmetric functions ----

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Basis {
    M,
    H,
    E,
    P,
    S,
    Forgotten,
    WittX,
    RBasis,
}

impl Basis {
    pub fn tag(&self) -> &'static str {
        match self {
            Basis::M => "m",
            Basis::H => "h",
            Basis::E => "e",
            Basis::P => "p",
            Basis::S => "s",
            Basis::Forgotten => "forgotten",
            Basis::WittX => "wittx",
            Basis::RBasis => "rbasis",
        }
    }

    pub fn parse(s: &str) -> Result<Basis> {
        match s {
            "m" => Ok(Basis::M),
            "h" => Ok(Basis::H),
            "e" => Ok(Basis::E),
            "p" => Ok(Basis::P),
            "s" => Ok(Basis::S),
            "forgotten" | "f" => Ok(Basis::Forgotten),
            "wittx" | "x" => Ok(Basis::WittX),
            "rbasis" | "r" => Ok(Basis::RBasis),
            other => Err(WittError::Parse(format!("unknown basis {}", other))),
        }
    }

    /// Bases with integral transition matrices.
    pub fn is_integral(&self) -> bool {
        !matches!(self, Basis::P)
    }
}

/// A symmetric function as a finite expansion in a named basis.
#[derive(Clone, PartialEq, Eq)]
pub struct SymFn {
    pub basis: Basis,
    pub terms: BTreeMap<Partition, Coef>,
}

impl SymFn {
    pub fn zero(basis: Basis) -> SymFn {
        SymFn {
            basis,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(basis: Basis) -> SymFn {
        SymFn::single(basis, Partition::empty(), Coef::one())
    }

    pub fn single(basis: Basis, p: Partition, c: Coef) -> SymFn {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(p, c);
        }
        SymFn { basis, terms }
    }

    pub fn generator(basis: Basis, n: u32) -> SymFn {
        SymFn::single(basis, Partition::new(vec![n]), Coef::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|p| p.weight()).max().unwrap_or(0)
    }

    pub fn coeff(&self, p: &Partition) -> Coef {
        self.terms.get(p).cloned().unwrap_or_else(Coef::zero)
    }

    fn insert(&mut self, p: Partition, c: Coef) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&p) {
            None => {
                self.terms.insert(p, c);
            }
            Some(prev) => {
                let s = prev + c;
                if !s.is_zero() {
                    self.terms.insert(p, s);
                }
            }
        }
    }

    pub fn add(&self, other: &SymFn) -> Result<SymFn> {
        if self.basis != other.basis {
            return Err(WittError::SpecMismatch(format!(
                "basis {} vs {}",
                self.basis.tag(),
                other.basis.tag()
            )));
        }
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.insert(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> SymFn {
        SymFn {
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &SymFn) -> Result<SymFn> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coef) -> SymFn {
        if c.is_zero() {
            return SymFn::zero(self.basis);
        }
        SymFn {
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .map(|(p, k)| (p.clone(), k * c))
                .collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(p, c)| {
                let coeff = if c.denom().is_one() {
                    c.numer().to_string()
                } else {
                    format!("{}/{}", c.numer(), c.denom())
                };
                json!({"partition": p.parts(), "coeff": coeff})
            })
            .collect();
        json!({"basis": self.basis.tag(), "terms": terms})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SymFn> {
        let basis = Basis::parse(
            v.get("basis")
                .and_then(|b| b.as_str())
                .ok_or_else(|| WittError::Parse("symfn missing basis".into()))?,
        )?;
        let mut out = SymFn::zero(basis);
        for t in v
            .get("terms")
            .and_then(|a| a.as_array())
            .ok_or_else(|| WittError::Parse("symfn missing terms".into()))?
        {
            let parts: Vec<u32> = t
                .get("partition")
                .and_then(|a| a.as_array())
                .ok_or_else(|| WittError::Parse("term missing partition".into()))?
                .iter()
                .map(|x| x.as_u64().unwrap_or(0) as u32)
                .collect();
            let c = crate::qpoly::parse_rational(
                t.get("coeff")
                    .and_then(|c| c.as_str())
                    .ok_or_else(|| WittError::Parse("term missing coeff".into()))?,
            )?;
            out.insert(Partition::new(parts), c);
        }
        Ok(out)
    }
}

impl fmt::Debug for SymFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SymFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Partition, &Coef)> = self.terms.iter().collect();
        entries.sort_by(|(p1, _), (p2, _)| {
            p1.weight().cmp(&p2.weight()).then_with(|| p2.cmp(p1))
        });
        for (i, (p, c)) in entries.iter().enumerate() {
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
            let body = if p.is_empty() {
                "1".to_string()
            } else {
                format!("{}{}", self.basis.tag(), p)
            };
            if p.is_empty() {
                write!(f, "{}", if cs == "1" { body } else { cs })?;
            } else if cs == "1" {
                write!(f, "{}", body)?;
            } else {
                write!(f, "{}*{}", cs, body)?;
            }
        }
        Ok(())
    }
}

// ---- Symmetry-reduced variable expansion ----

/// A symmetric polynomial of fixed weight, stored as one coefficient per
/// sorted monomial (equivalently: its m-basis coefficients). This is the
/// engine behind the change-of-basis matrices.
#[derive(Clone, Default)]
struct MRep {
    terms: BTreeMap<Partition, Coef>,
}

impl MRep {
    fn one() -> MRep {
        let mut terms = BTreeMap::new();
        terms.insert(Partition::empty(), Coef::one());
        MRep { terms }
    }

    fn get(&self, p: &Partition) -> Coef {
        self.terms.get(p).cloned().unwrap_or_else(Coef::zero)
    }

    fn weight(&self) -> u32 {
        self.terms.keys().map(|p| p.weight()).max().unwrap_or(0)
    }

    /// Multiply by h_k: the coefficient of a sorted monomial mu in S*h_k is
    /// the sum of S-coefficients at sort(mu - kappa) over componentwise
    /// subtractions kappa <= mu of total size k.
    fn mul_h(&self, k: u32) -> MRep {
        self.mul_bump(k, &mut |mu, k, take| enumerate_sub(mu, k, u32::MAX, take))
    }

    /// Multiply by e_k: subtractions are 0/1 in every slot.
    fn mul_e(&self, k: u32) -> MRep {
        self.mul_bump(k, &mut |mu, k, take| enumerate_sub(mu, k, 1, take))
    }

    /// Multiply by p_k: subtraction concentrated in one slot.
    fn mul_p(&self, k: u32) -> MRep {
        let w = self.weight();
        let mut out = MRep::default();
        for mu in partitions_of(w + k) {
            let slots = mu.parts().to_vec();
            let mut acc = Coef::zero();
            for i in 0..slots.len() {
                if slots[i] < k {
                    continue;
                }
                // skip equal predecessors so each variable slot counts once
                let mut nu = slots.clone();
                nu[i] -= k;
                acc += self.get(&Partition::new(nu));
            }
            if !acc.is_zero() {
                out.terms.insert(mu, acc);
            }
        }
        out
    }

    /// Multiply by h_k(xi^i) = h_k o p_i: subtractions are i * (composition
    /// of k).
    fn mul_h_pleth(&self, i: u32, k: u32) -> MRep {
        self.mul_bump(k * i, &mut |mu, total, take| {
            enumerate_sub_multiple(mu, total, i, take)
        })
    }

    fn mul_bump(
        &self,
        k: u32,
        enumerate: &mut dyn FnMut(&[u32], u32, &mut dyn FnMut(&[u32])),
    ) -> MRep {
        let w = self.weight();
        let mut out = MRep::default();
        for mu in partitions_of(w + k) {
            let slots = mu.parts().to_vec();
            let mut acc = Coef::zero();
            enumerate(&slots, k, &mut |kappa: &[u32]| {
                let nu: Vec<u32> = slots
                    .iter()
                    .zip(kappa.iter())
                    .map(|(&m, &s)| m - s)
                    .collect();
                acc += self.get(&Partition::new(nu));
            });
            if !acc.is_zero() {
                out.terms.insert(mu, acc);
            }
        }
        out
    }
}

/// Visit all componentwise subtractions kappa <= mu with |kappa| = k and
/// kappa_i <= cap.
fn enumerate_sub(mu: &[u32], k: u32, cap: u32, take: &mut dyn FnMut(&[u32])) {
    let mut kappa = vec![0u32; mu.len()];
    fn rec(
        mu: &[u32],
        pos: usize,
        rest: u32,
        cap: u32,
        kappa: &mut Vec<u32>,
        take: &mut dyn FnMut(&[u32]),
    ) {
        if pos == mu.len() {
            if rest == 0 {
                take(kappa);
            }
            return;
        }
        let maxhere = mu[pos].min(cap).min(rest);
        for s in 0..=maxhere {
            kappa[pos] = s;
            rec(mu, pos + 1, rest - s, cap, kappa, take);
        }
        kappa[pos] = 0;
    }
    rec(mu, 0, k, cap, &mut kappa, take);
}

/// Subtractions that are multiples of i summing to `total` (= i * k).
fn enumerate_sub_multiple(mu: &[u32], total: u32, i: u32, take: &mut dyn FnMut(&[u32])) {
    let mut kappa = vec![0u32; mu.len()];
    fn rec(
        mu: &[u32],
        pos: usize,
        rest: u32,
        i: u32,
        kappa: &mut Vec<u32>,
        take: &mut dyn FnMut(&[u32]),
    ) {
        if pos == mu.len() {
            if rest == 0 {
                take(kappa);
            }
            return;
        }
        let maxhere = mu[pos].min(rest) / i;
        for s in 0..=maxhere {
            kappa[pos] = s * i;
            rec(mu, pos + 1, rest - s * i, i, kappa, take);
        }
        kappa[pos] = 0;
    }
    rec(mu, 0, total, i, &mut kappa, take);
}

// ---- Free h-polynomial helpers ----

/// An element written in the h-basis (h-monomials are free).
type HExp = BTreeMap<Partition, Coef>;

fn hexp_zero() -> HExp {
    BTreeMap::new()
}

fn hexp_one() -> HExp {
    let mut m = BTreeMap::new();
    m.insert(Partition::empty(), Coef::one());
    m
}

fn hexp_gen(n: u32) -> HExp {
    let mut m = BTreeMap::new();
    m.insert(Partition::new(vec![n]), Coef::one());
    m
}

fn hexp_add_into(a: &mut HExp, b: &HExp, scale: &Coef) {
    for (p, c) in b {
        let v = c * scale;
        match a.remove(p) {
            None => {
                if !v.is_zero() {
                    a.insert(p.clone(), v);
                }
            }
            Some(prev) => {
                let s = prev + v;
                if !s.is_zero() {
                    a.insert(p.clone(), s);
                }
            }
        }
    }
}

fn hexp_mul(a: &HExp, b: &HExp) -> HExp {
    let mut out = hexp_zero();
    for (p, c) in a {
        for (q, d) in b {
            let merged = p.merge(q);
            let v = c * d;
            match out.remove(&merged) {
                None => {
                    out.insert(merged, v);
                }
                Some(prev) => {
                    let s = prev + v;
                    if !s.is_zero() {
                        out.insert(merged, s);
                    }
                }
            }
        }
    }
    out
}

/// p_n in the h-basis via the Newton recursion
/// n h_n = p_n + h_1 p_{n-1} + ... + h_{n-1} p_1.
pub(crate) fn power_sum_in_h(n: u32) -> HExp {
    static CACHE: OnceLock<Mutex<Vec<HExp>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![hexp_zero()]));
    let mut guard = cache.lock().expect("p-in-h cache");
    while guard.len() <= n as usize {
        let k = guard.len() as u32;
        let mut p = hexp_gen(k);
        // p_k = k h_k - sum_{i=1}^{k-1} h_i p_{k-i}
        let scale = cint(k as i64);
        p = p.into_iter().map(|(q, c)| (q, c * &scale)).collect();
        for i in 1..k {
            let prod = hexp_mul(&hexp_gen(i), &guard[(k - i) as usize]);
            hexp_add_into(&mut p, &prod, &cint(-1));
        }
        guard.push(p);
    }
    guard[n as usize].clone()
}

/// e_n in the h-basis via the Wronski recursion
/// sum_{i+j=n} (-1)^i h_i e_j = 0.
fn elementary_in_h(n: u32) -> HExp {
    static CACHE: OnceLock<Mutex<Vec<HExp>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![hexp_one()]));
    let mut guard = cache.lock().expect("e-in-h cache");
    while guard.len() <= n as usize {
        let k = guard.len() as u32;
        // e_k = sum_{i=1}^{k} (-1)^{i+1} h_i e_{k-i}
        let mut e = hexp_zero();
        for i in 1..=k {
            let sign = if i % 2 == 1 { cint(1) } else { cint(-1) };
            let prod = hexp_mul(&hexp_gen(i), &guard[(k - i) as usize]);
            hexp_add_into(&mut e, &prod, &sign);
        }
        guard.push(e);
    }
    guard[n as usize].clone()
}

/// Witt symmetric function x_n in the h-basis: inverts
/// h_n = sum over partitions of n of x_1^{m_1} x_2^{m_2} ...
fn witt_x_in_h(n: u32) -> HExp {
    static CACHE: OnceLock<Mutex<Vec<HExp>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![hexp_zero()]));
    let mut guard = cache.lock().expect("x-in-h cache");
    while guard.len() <= n as usize {
        let k = guard.len() as u32;
        let mut x = hexp_gen(k);
        for lam in partitions_of(k) {
            if lam.parts() == [k] {
                continue;
            }
            // x_lam = prod over parts
            let mut prod = hexp_one();
            for &part in lam.parts() {
                prod = hexp_mul(&prod, &guard[part as usize]);
            }
            hexp_add_into(&mut x, &prod, &cint(-1));
        }
        guard.push(x);
    }
    guard[n as usize].clone()
}

/// Jacobi-Trudi determinant det(h_{lambda_i - i + j}) in the free h-algebra.
fn schur_in_h(lambda: &Partition) -> HExp {
    let n = lambda.len();
    if n == 0 {
        return hexp_one();
    }
    // entry (i, j), 0-based
    let entry = |i: usize, j: usize| -> HExp {
        let v = lambda.parts()[i] as i64 - i as i64 + j as i64;
        if v < 0 {
            hexp_zero()
        } else if v == 0 {
            hexp_one()
        } else {
            hexp_gen(v as u32)
        }
    };
    // cofactor expansion over rows with memo on column subsets
    fn det(
        row: usize,
        colmask: u64,
        n: usize,
        entry: &dyn Fn(usize, usize) -> HExp,
        memo: &mut HashMap<(usize, u64), HExp>,
    ) -> HExp {
        if row == n {
            return hexp_one();
        }
        if let Some(hit) = memo.get(&(row, colmask)) {
            return hit.clone();
        }
        let mut acc = hexp_zero();
        let mut sign = Coef::one();
        for j in 0..n {
            if colmask & (1 << j) != 0 {
                continue;
            }
            let e = entry(row, j);
            if !e.is_empty() {
                let sub = det(row + 1, colmask | (1 << j), n, entry, memo);
                let prod = hexp_mul(&e, &sub);
                hexp_add_into(&mut acc, &prod, &sign);
            }
            sign = -sign;
        }
        memo.insert((row, colmask), acc.clone());
        acc
    }
    let mut memo = HashMap::new();
    det(0, 0, n, &entry, &mut memo)
}

// ---- Transition matrices ----

type Matrix = Vec<Vec<Coef>>;

struct WeightData {
    parts: Vec<Partition>,
    index: BTreeMap<Partition, usize>,
    /// basis -> m, rows indexed like `parts`
    to_m: HashMap<Basis, Matrix>,
    /// m -> basis (inverse matrices)
    from_m: HashMap<Basis, Matrix>,
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k > 0 { b[0].len() } else { 0 };
    let mut out = vec![vec![Coef::zero(); m]; n];
    for i in 0..n {
        for (l, bl) in b.iter().enumerate().take(k) {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !bl[j].is_zero() {
                    let t = &a[i][l] * &bl[j];
                    out[i][j] += t;
                }
            }
        }
    }
    out
}

/// Exact inverse by Gauss-Jordan elimination; errors if singular.
fn mat_inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let mut work: Vec<Vec<Coef>> = a.clone();
    let mut inv: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Coef::one() } else { Coef::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !work[r][col].is_zero())
            .ok_or_else(|| WittError::Unsupported("singular transition matrix".into()))?;
        work.swap(col, pivot);
        inv.swap(col, pivot);
        let d = work[col][col].clone();
        for j in 0..n {
            work[col][j] /= &d;
            inv[col][j] /= &d;
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for j in 0..n {
                let t = &factor * &work[col][j];
                work[r][j] -= t;
                let t2 = &factor * &inv[col][j];
                inv[r][j] -= t2;
            }
        }
    }
    Ok(inv)
}

fn mat_det_via_elimination(a: &Matrix) -> Coef {
    let n = a.len();
    let mut work = a.clone();
    let mut det = Coef::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !work[r][col].is_zero()) {
            Some(p) => p,
            None => return Coef::zero(),
        };
        if pivot != col {
            work.swap(col, pivot);
            det = -det;
        }
        let d = work[col][col].clone();
        det *= &d;
        for r in col + 1..n {
            if work[r][col].is_zero() {
                continue;
            }
            let factor = &work[r][col] / &d;
            for j in col..n {
                let t = &factor * &work[col][j];
                work[r][j] -= t;
            }
        }
    }
    det
}

/// Expand a basis element (given as an h-expansion) into m-coordinates.
fn hexp_row(h: &HExp, data_parts: &[Partition], h_to_m: &Matrix, index: &BTreeMap<Partition, usize>) -> Vec<Coef> {
    let mut row = vec![Coef::zero(); data_parts.len()];
    for (hmono, c) in h {
        let i = index[hmono];
        for (j, cell) in h_to_m[i].iter().enumerate() {
            if !cell.is_zero() {
                row[j] += c * cell;
            }
        }
    }
    row
}

fn build_weight_data(d: u32) -> Result<WeightData> {
    let parts = partitions_of(d);
    let index: BTreeMap<Partition, usize> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let np = parts.len();

    let row_of_mrep = |m: &MRep| -> Vec<Coef> {
        parts.iter().map(|p| m.get(p)).collect()
    };

    // h, e, p rows by symmetric-reduced expansion
    let mut h_to_m: Matrix = Vec::with_capacity(np);
    let mut e_to_m: Matrix = Vec::with_capacity(np);
    let mut p_to_m: Matrix = Vec::with_capacity(np);
    for lam in &parts {
        let mut hrep = MRep::one();
        let mut erep = MRep::one();
        let mut prep = MRep::one();
        for &part in lam.parts() {
            hrep = hrep.mul_h(part);
            erep = erep.mul_e(part);
            prep = prep.mul_p(part);
        }
        h_to_m.push(row_of_mrep(&hrep));
        e_to_m.push(row_of_mrep(&erep));
        p_to_m.push(row_of_mrep(&prep));
    }
    let m_to_h = mat_inverse(&h_to_m)?;

    // Schur via Jacobi-Trudi determinants, then through h -> m
    let mut s_to_m: Matrix = Vec::with_capacity(np);
    for lam in &parts {
        let sh = schur_in_h(lam);
        s_to_m.push(hexp_row(&sh, &parts, &h_to_m, &index));
    }

    // forgotten: (m in h) with h replaced by e
    let e_rows = &e_to_m;
    let mut f_to_m: Matrix = Vec::with_capacity(np);
    for i in 0..np {
        let mut row = vec![Coef::zero(); np];
        for (j, c) in m_to_h[i].iter().enumerate() {
            if !c.is_zero() {
                for (k, cell) in e_rows[j].iter().enumerate() {
                    if !cell.is_zero() {
                        row[k] += c * cell;
                    }
                }
            }
        }
        f_to_m.push(row);
    }

    // Witt x basis
    let mut x_to_m: Matrix = Vec::with_capacity(np);
    for lam in &parts {
        let mut prod = hexp_one();
        for &part in lam.parts() {
            prod = hexp_mul(&prod, &witt_x_in_h(part));
        }
        x_to_m.push(hexp_row(&prod, &parts, &h_to_m, &index));
    }

    // r basis: r_lambda = prod over part values i of h_{k_i} o p_i
    let mut r_to_m: Matrix = Vec::with_capacity(np);
    for lam in &parts {
        let mut rep = MRep::one();
        let maxpart = lam.parts().first().copied().unwrap_or(0);
        for i in 1..=maxpart {
            let k = lam.multiplicity(i);
            if k > 0 {
                rep = rep.mul_h_pleth(i, k);
            }
        }
        r_to_m.push(row_of_mrep(&rep));
    }

    let ident: Matrix = (0..np)
        .map(|i| {
            (0..np)
                .map(|j| if i == j { Coef::one() } else { Coef::zero() })
                .collect()
        })
        .collect();

    let mut to_m: HashMap<Basis, Matrix> = HashMap::new();
    to_m.insert(Basis::M, ident);
    to_m.insert(Basis::H, h_to_m);
    to_m.insert(Basis::E, e_to_m);
    to_m.insert(Basis::P, p_to_m);
    to_m.insert(Basis::S, s_to_m);
    to_m.insert(Basis::Forgotten, f_to_m);
    to_m.insert(Basis::WittX, x_to_m);
    to_m.insert(Basis::RBasis, r_to_m);

    let mut from_m: HashMap<Basis, Matrix> = HashMap::new();
    for (b, mat) in &to_m {
        from_m.insert(*b, mat_inverse(mat)?);
    }

    Ok(WeightData {
        parts,
        index,
        to_m,
        from_m,
    })
}

/// m_lambda expanded in the h-basis, one sparse row per partition of d
/// (used by the series layer for the universal Witt-product coefficients).
pub(crate) fn monomial_in_h(d: u32) -> Result<Vec<(Partition, Vec<(Partition, Coef)>)>> {
    if d == 0 {
        return Ok(vec![(Partition::empty(), vec![(Partition::empty(), Coef::one())])]);
    }
    let data = weight_data(d)?;
    let m_to_h = &data.from_m[&Basis::H];
    Ok(data
        .parts
        .iter()
        .enumerate()
        .map(|(i, lam)| {
            let row: Vec<(Partition, Coef)> = m_to_h[i]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (data.parts[j].clone(), c.clone()))
                .collect();
            (lam.clone(), row)
        })
        .collect())
}

fn weight_data(d: u32) -> Result<Arc<WeightData>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<WeightData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("weight cache").get(&d) {
        return Ok(hit.clone());
    }
    let data = Arc::new(build_weight_data(d)?);
    cache
        .lock()
        .expect("weight cache")
        .insert(d, data.clone());
    Ok(data)
}

// ---- The Symm context ----

/// Entry point for symmetric-function computations, bounded by a weight cap.
#[derive(Clone, Copy, Debug)]
pub struct Symm {
    pub cap: u32,
}

impl Default for Symm {
    fn default() -> Self {
        Symm { cap: 10 }
    }
}

impl Symm {
    pub fn new() -> Symm {
        Symm::default()
    }

    pub fn with_cap(cap: u32) -> Symm {
        Symm { cap }
    }

    fn check_cap(&self, w: u32) -> Result<()> {
        if w > self.cap {
            Err(WittError::CapExceeded(format!(
                "weight {} exceeds cap {}",
                w, self.cap
            )))
        } else {
            Ok(())
        }
    }

    /// Exact change of basis through the per-weight cached matrices.
    pub fn convert(&self, f: &SymFn, target: Basis) -> Result<SymFn> {
        self.check_cap(f.max_weight())?;
        if f.basis == target {
            return Ok(f.clone());
        }
        let mut out = SymFn::zero(target);
        // group terms by weight
        let mut by_weight: BTreeMap<u32, Vec<(&Partition, &Coef)>> = BTreeMap::new();
        for (p, c) in &f.terms {
            by_weight.entry(p.weight()).or_default().push((p, c));
        }
        for (w, terms) in by_weight {
            if w == 0 {
                for (_, c) in terms {
                    out.insert(Partition::empty(), c.clone());
                }
                continue;
            }
            let data = weight_data(w)?;
            let src = &data.to_m[&f.basis];
            let dst = &data.from_m[&target];
            // coeff vector in m, then into target
            let np = data.parts.len();
            let mut mvec = vec![Coef::zero(); np];
            for (p, c) in terms {
                let i = data.index[p];
                for j in 0..np {
                    if !src[i][j].is_zero() {
                        mvec[j] += (*c).clone() * &src[i][j];
                    }
                }
            }
            for (j, mc) in mvec.iter().enumerate() {
                if mc.is_zero() {
                    continue;
                }
                for (k, cell) in dst[j].iter().enumerate() {
                    if !cell.is_zero() {
                        out.insert(data.parts[k].clone(), mc * cell);
                    }
                }
            }
        }
        if target.is_integral() && target != Basis::M && !out.is_integral() {
            // integral target bases must produce integer coefficients when
            // the input is genuinely in the ring Symm
            if f.basis.is_integral() && f.is_integral() {
                return Err(WittError::NonIntegral(format!(
                    "conversion {} -> {} lost integrality",
                    f.basis.tag(),
                    target.tag()
                )));
            }
        }
        Ok(out)
    }

    /// Product computed in the free h-basis.
    pub fn multiply(&self, f: &SymFn, g: &SymFn, target: Basis) -> Result<SymFn> {
        self.check_cap(f.max_weight() + g.max_weight())?;
        let fh = self.convert(f, Basis::H)?;
        let gh = self.convert(g, Basis::H)?;
        let mut prod = SymFn::zero(Basis::H);
        for (p, c) in &fh.terms {
            for (q, d) in &gh.terms {
                prod.insert(p.merge(q), c * d);
            }
        }
        self.convert(&prod, target)
    }

    /// Hall inner product, the bilinear extension of <h_lambda, m_mu> = delta.
    pub fn hall_inner(&self, f: &SymFn, g: &SymFn) -> Result<Coef> {
        let fh = self.convert(f, Basis::H)?;
        let gm = self.convert(g, Basis::M)?;
        let mut acc = Coef::zero();
        for (p, c) in &fh.terms {
            if let Some(d) = gm.terms.get(p) {
                acc += c * d;
            }
        }
        Ok(acc)
    }

    /// Schur function s_lambda (Jacobi-Trudi determinant), m-basis output.
    pub fn schur(&self, lambda: &Partition) -> Result<SymFn> {
        self.check_cap(lambda.weight())?;
        let sf = SymFn::single(Basis::S, lambda.clone(), Coef::one());
        self.convert(&sf, Basis::M)
    }

    /// Skew Schur s_{kappa/lambda} = det(h_{kappa_i - lambda_j - i + j}),
    /// expanded in the s-basis. Zero unless lambda is contained in kappa.
    pub fn skew_schur(&self, kappa: &Partition, lambda: &Partition) -> Result<SymFn> {
        self.check_cap(kappa.weight())?;
        if !lambda.contained_in(kappa) {
            return Ok(SymFn::zero(Basis::S));
        }
        let n = kappa.len();
        let entry = |i: usize, j: usize| -> HExp {
            let v = kappa.parts()[i] as i64 - lambda.part(j) as i64 - i as i64 + j as i64;
            if v < 0 {
                hexp_zero()
            } else if v == 0 {
                hexp_one()
            } else {
                hexp_gen(v as u32)
            }
        };
        fn det(
            row: usize,
            colmask: u64,
            n: usize,
            entry: &dyn Fn(usize, usize) -> HExp,
            memo: &mut HashMap<(usize, u64), HExp>,
        ) -> HExp {
            if row == n {
                return hexp_one();
            }
            if let Some(hit) = memo.get(&(row, colmask)) {
                return hit.clone();
            }
            let mut acc = hexp_zero();
            let mut sign = Coef::one();
            for j in 0..n {
                if colmask & (1 << j) != 0 {
                    continue;
                }
                let e = entry(row, j);
                if !e.is_empty() {
                    let sub = det(row + 1, colmask | (1 << j), n, entry, memo);
                    let prod = hexp_mul(&e, &sub);
                    hexp_add_into(&mut acc, &prod, &sign);
                }
                sign = -sign;
            }
            memo.insert((row, colmask), acc.clone());
            acc
        }
        let mut memo = HashMap::new();
        let h = det(0, 0, n, &entry, &mut memo);
        let mut out = SymFn::zero(Basis::H);
        for (p, c) in h {
            out.insert(p, c);
        }
        self.convert(&out, Basis::S)
    }

    /// The Witt symmetric function x_d in the h-basis.
    pub fn witt_symm(&self, d: u32) -> Result<SymFn> {
        self.check_cap(d)?;
        let mut out = SymFn::zero(Basis::H);
        for (p, c) in witt_x_in_h(d) {
            out.insert(p, c);
        }
        Ok(out)
    }

    /// r_lambda = prod over part values i of h_{k_i} o p_i, m-basis output.
    pub fn r_symm(&self, lambda: &Partition) -> Result<SymFn> {
        self.check_cap(lambda.weight())?;
        let sf = SymFn::single(Basis::RBasis, lambda.clone(), Coef::one());
        self.convert(&sf, Basis::M)
    }

    /// Schur expansion of -x_n together with a positivity verdict.
    pub fn schur_sign_check(&self, n: u32) -> Result<(SymFn, bool)> {
        let x = self.witt_symm(n)?;
        let s = self.convert(&x.neg(), Basis::S)?;
        let positive = s.terms.values().all(|c| c > &Coef::zero());
        Ok((s, positive))
    }

    /// Brute-force oracle: image of f under xi_{>N} -> 0, as an exponent-map
    /// polynomial in N variables.
    pub fn expand_in_variables(&self, f: &SymFn, nvars: usize) -> Result<BTreeMap<Vec<u32>, Coef>> {
        let fm = self.convert(f, Basis::M)?;
        let mut out: BTreeMap<Vec<u32>, Coef> = BTreeMap::new();
        for (lam, c) in &fm.terms {
            for expo in monomial_orbit(lam, nvars) {
                match out.remove(&expo) {
                    None => {
                        out.insert(expo, c.clone());
                    }
                    Some(prev) => {
                        let s = prev + c;
                        if !s.is_zero() {
                            out.insert(expo, s);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    // ---- Hopf structure ----

    /// Sum comultiplication: algebra morphism with
    /// mu_S(h_n) = sum over i+j=n of h_i (x) h_j.
    pub fn comul_sum(&self, f: &SymFn) -> Result<SymTensor> {
        let fh = self.convert(f, Basis::H)?;
        let mut out = SymTensor::zero(Basis::H, Basis::H);
        for (lam, c) in &fh.terms {
            let mut acc = SymTensor::one(Basis::H, Basis::H);
            for &part in lam.parts() {
                let mut gen = SymTensor::zero(Basis::H, Basis::H);
                for i in 0..=part {
                    gen.insert(
                        Partition::new(vec![i]),
                        Partition::new(vec![part - i]),
                        Coef::one(),
                    );
                }
                acc = acc.mul(&gen);
            }
            out = out.add(&acc.scale(c));
        }
        Ok(out)
    }

    pub fn counit_sum(&self, f: &SymFn) -> Result<Coef> {
        let fh = self.convert(f, Basis::H)?;
        Ok(fh.coeff(&Partition::empty()))
    }

    /// Antipode by the connected-graded recursion
    /// iota(h_n) = -h_n - sum_{i=1}^{n-1} iota(h_i) h_{n-i},
    /// extended as a ring morphism.
    pub fn antipode(&self, f: &SymFn) -> Result<SymFn> {
        let fh = self.convert(f, Basis::H)?;
        let cap = f.max_weight();
        // iota(h_k) in h-basis
        let mut iota_h: Vec<HExp> = vec![hexp_one()];
        for k in 1..=cap {
            let mut v = hexp_gen(k);
            let m1 = cint(-1);
            v = v.into_iter().map(|(p, c)| (p, c * &m1)).collect();
            for i in 1..k {
                let prod = hexp_mul(&iota_h[i as usize], &hexp_gen(k - i));
                hexp_add_into(&mut v, &prod, &m1);
            }
            iota_h.push(v);
        }
        let mut out = SymFn::zero(Basis::H);
        for (lam, c) in &fh.terms {
            let mut prod = hexp_one();
            for &part in lam.parts() {
                prod = hexp_mul(&prod, &iota_h[part as usize]);
            }
            for (p, k) in prod {
                out.insert(p, k * c);
            }
        }
        self.convert(&out, f.basis)
    }

    /// Product (second) comultiplication: algebra morphism with
    /// mu_P(h_n) = sum over partitions of n of h_lambda (x) m_lambda.
    pub fn comul_prod(&self, f: &SymFn) -> Result<SymTensor> {
        let fh = self.convert(f, Basis::H)?;
        let mut out = SymTensor::zero(Basis::H, Basis::H);
        for (lam, c) in &fh.terms {
            let mut acc = SymTensor::one(Basis::H, Basis::H);
            for &part in lam.parts() {
                acc = acc.mul(&self.mu_p_generator(part)?);
            }
            out = out.add(&acc.scale(c));
        }
        Ok(out)
    }

    /// mu_P(h_n) with both tensor legs in the h-basis.
    fn mu_p_generator(&self, n: u32) -> Result<SymTensor> {
        let mut gen = SymTensor::zero(Basis::H, Basis::H);
        if n == 0 {
            gen.insert(Partition::empty(), Partition::empty(), Coef::one());
            return Ok(gen);
        }
        let data = weight_data(n)?;
        let m_to_h = &data.from_m[&Basis::H];
        for (i, lam) in data.parts.iter().enumerate() {
            // m_lambda in h-coordinates
            for (j, c) in m_to_h[i].iter().enumerate() {
                if !c.is_zero() {
                    gen.insert(lam.clone(), data.parts[j].clone(), c.clone());
                }
            }
        }
        Ok(gen)
    }

    /// Counit of the second comultiplication: the coefficient sum over
    /// single-part monomials.
    pub fn counit_prod(&self, f: &SymFn) -> Result<Coef> {
        let fm = self.convert(f, Basis::M)?;
        let mut acc = fm.coeff(&Partition::empty());
        for (p, c) in &fm.terms {
            if p.len() == 1 {
                acc += c;
            }
        }
        Ok(acc)
    }

    // ---- Frobenius and Verschiebung ----

    /// f_n: m_lambda -> m_{n lambda}, a ring morphism multiplying weights
    /// by n.
    pub fn frobenius(&self, n: u32, f: &SymFn) -> Result<SymFn> {
        self.check_cap(f.max_weight() * n)?;
        let fm = self.convert(f, Basis::M)?;
        let mut out = SymFn::zero(Basis::M);
        for (p, c) in &fm.terms {
            out.insert(p.scale(n), c.clone());
        }
        self.convert(&out, f.basis)
    }

    /// V_n: h_r -> h_{r/n} when n | r, else 0, extended multiplicatively.
    pub fn verschiebung(&self, n: u32, f: &SymFn) -> Result<SymFn> {
        let fh = self.convert(f, Basis::H)?;
        let mut out = SymFn::zero(Basis::H);
        'term: for (p, c) in &fh.terms {
            let mut image = Vec::new();
            for &part in p.parts() {
                if part % n != 0 {
                    continue 'term;
                }
                image.push(part / n);
            }
            out.insert(Partition::new(image), c.clone());
        }
        self.convert(&out, f.basis)
    }

    // ---- Plethysm ----

    /// Outer plethysm f o g through the p-basis: p_n o g rescales every
    /// power-sum index of g by n.
    pub fn plethysm(&self, f: &SymFn, g: &SymFn) -> Result<SymFn> {
        let scale = f.max_weight() * g.max_weight();
        self.check_cap(scale.max(f.max_weight()).max(g.max_weight()))?;
        let fp = self.convert(f, Basis::P)?;
        let gp = self.convert(g, Basis::P)?;
        let mut out = SymFn::zero(Basis::P);
        for (lam, c) in &fp.terms {
            // product over parts of (g with p-indices scaled by the part)
            let mut acc = SymFn::one(Basis::P);
            for &part in lam.parts() {
                let scaled = SymFn {
                    basis: Basis::P,
                    terms: gp
                        .terms
                        .iter()
                        .map(|(q, d)| (q.scale(part), d.clone()))
                        .collect(),
                };
                // p-basis product is free: merge partitions
                let mut next = SymFn::zero(Basis::P);
                for (q1, d1) in &acc.terms {
                    for (q2, d2) in &scaled.terms {
                        next.insert(q1.merge(q2), d1 * d2);
                    }
                }
                acc = next;
            }
            out = out.add(&acc.scale(c))?;
        }
        let res = self.convert(&out, f.basis)?;
        if f.basis.is_integral()
            && f.is_integral()
            && g.is_integral()
            && g.basis.is_integral()
            && !res.is_integral()
        {
            return Err(WittError::NonIntegral(
                "plethysm of integral inputs produced non-integral output".into(),
            ));
        }
        Ok(res)
    }

    // ---- Universal lambda-ring formulas ----

    /// Universal polynomials for lambda-operations on sums, products and
    /// iterates, in symbols X_i = lambda^i(x), Y_j = lambda^j(y).
    pub fn universal_lambda_formula(&self, kind: LambdaFormula) -> Result<QPoly> {
        match kind {
            LambdaFormula::Sum(n) => {
                let mut acc = QPoly::zero();
                for i in 0..=n {
                    let xi = if i == 0 {
                        QPoly::one()
                    } else {
                        QPoly::var(Var::x(i as u64))
                    };
                    let yj = if n - i == 0 {
                        QPoly::one()
                    } else {
                        QPoly::var(Var::y((n - i) as u64))
                    };
                    acc = acc.add(&xi.mul(&yj));
                }
                Ok(acc)
            }
            LambdaFormula::Product(n) => self.lambda_product_formula(n),
            LambdaFormula::Iterate(m, n) => {
                self.check_cap(m * n)?;
                // e_m o e_n expanded in the e-basis, e_k read as lambda^k(x)
                let em = SymFn::generator(Basis::E, m);
                let en = SymFn::generator(Basis::E, n);
                let pl = self.plethysm(&em, &en)?;
                let pe = self.convert(&pl, Basis::E)?;
                let mut acc = QPoly::zero();
                for (lam, c) in &pe.terms {
                    let mut term = QPoly::constant(c.clone());
                    for &part in lam.parts() {
                        term = term.mul(&QPoly::var(Var::x(part as u64)));
                    }
                    acc = acc.add(&term);
                }
                Ok(acc)
            }
        }
    }

    /// The unique P with P(e(xi), e(eta)) = e_n of the doubled alphabet
    /// {xi_i eta_j}, found by expanding in n + n variables and solving the
    /// exact linear system.
    fn lambda_product_formula(&self, n: u32) -> Result<QPoly> {
        self.check_cap(n)?;
        let nv = n as usize;
        // expand e_n({xi_i eta_j}) as exponent maps over (xi_1..xi_n, eta_1..eta_n)
        let pairs: Vec<(usize, usize)> = (0..nv)
            .flat_map(|i| (0..nv).map(move |j| (i, j)))
            .collect();
        let mut target: BTreeMap<Vec<u32>, Coef> = BTreeMap::new();
        // iterate over size-n subsets of the pairs
        let mut subset: Vec<usize> = (0..nv).collect();
        loop {
            let mut expo = vec![0u32; 2 * nv];
            for &k in &subset {
                let (i, j) = pairs[k];
                expo[i] += 1;
                expo[nv + j] += 1;
            }
            *target.entry(expo).or_insert_with(Coef::zero) += Coef::one();
            // next subset
            let mut idx = nv;
            loop {
                if idx == 0 {
                    break;
                }
                idx -= 1;
                if subset[idx] != pairs.len() - nv + idx {
                    subset[idx] += 1;
                    for t in idx + 1..nv {
                        subset[t] = subset[t - 1] + 1;
                    }
                    break;
                }
                if idx == 0 {
                    subset.clear();
                    break;
                }
            }
            if subset.is_empty() {
                break;
            }
        }
        target.retain(|_, c| !c.is_zero());

        // candidates e_lam(xi) e_mu(eta), lam, mu |- n
        let lams = partitions_of(n);
        let mut rows: Vec<BTreeMap<Vec<u32>, Coef>> = Vec::new();
        let mut labels: Vec<(Partition, Partition)> = Vec::new();
        let e_expand = |lam: &Partition| -> Result<BTreeMap<Vec<u32>, Coef>> {
            let mut f = SymFn::one(Basis::E);
            for &part in lam.parts() {
                let g = SymFn::generator(Basis::E, part);
                f = self.multiply(&f, &g, Basis::E)?;
            }
            self.expand_in_variables(&f, nv)
        };
        for lam in &lams {
            let le = e_expand(lam)?;
            for mu in &lams {
                let me = e_expand(mu)?;
                let mut prod: BTreeMap<Vec<u32>, Coef> = BTreeMap::new();
                for (e1, c1) in &le {
                    for (e2, c2) in &me {
                        let mut expo = vec![0u32; 2 * nv];
                        expo[..nv].copy_from_slice(e1);
                        expo[nv..].copy_from_slice(e2);
                        *prod.entry(expo).or_insert_with(Coef::zero) += c1 * c2;
                    }
                }
                prod.retain(|_, c| !c.is_zero());
                rows.push(prod);
                labels.push((lam.clone(), mu.clone()));
            }
        }
        // solve sum_k c_k rows[k] = target by Gaussian elimination over the
        // union of monomials
        let mut monomials: Vec<Vec<u32>> = target.keys().cloned().collect();
        for r in &rows {
            for k in r.keys() {
                if !target.contains_key(k) {
                    monomials.push(k.clone());
                }
            }
        }
        monomials.sort();
        monomials.dedup();
        let mono_index: BTreeMap<Vec<u32>, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let nm = monomials.len();
        let nr = rows.len();
        // build augmented system A^T c = t
        let mut a = vec![vec![Coef::zero(); nr + 1]; nm];
        for (k, r) in rows.iter().enumerate() {
            for (m, c) in r {
                a[mono_index[m]][k] = c.clone();
            }
        }
        for (m, c) in &target {
            a[mono_index[m]][nr] = c.clone();
        }
        // Gaussian elimination
        let mut pivot_row = 0usize;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for col in 0..nr {
            if let Some(r) = (pivot_row..nm).find(|&r| !a[r][col].is_zero()) {
                a.swap(pivot_row, r);
                let d = a[pivot_row][col].clone();
                for j in 0..=nr {
                    a[pivot_row][j] /= &d;
                }
                for rr in 0..nm {
                    if rr != pivot_row && !a[rr][col].is_zero() {
                        let f = a[rr][col].clone();
                        for j in 0..=nr {
                            let t = &f * &a[pivot_row][j];
                            a[rr][j] -= t;
                        }
                    }
                }
                pivots.push((pivot_row, col));
                pivot_row += 1;
            }
        }
        for r in pivot_row..nm {
            if !a[r][nr].is_zero() {
                return Err(WittError::Unsupported(
                    "inconsistent system in lambda product formula".into(),
                ));
            }
        }
        let mut coeffs = vec![Coef::zero(); nr];
        for &(r, c) in &pivots {
            coeffs[c] = a[r][nr].clone();
        }
        let mut out = QPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (lam, mu) = &labels[k];
            let mut term = QPoly::constant(c.clone());
            for &part in lam.parts() {
                term = term.mul(&QPoly::var(Var::x(part as u64)));
            }
            for &part in mu.parts() {
                term = term.mul(&QPoly::var(Var::y(part as u64)));
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Determinantal expressions: psi^n in the lambda's, or n! lambda^n in
    /// the psi's. Symbols: X_i = lambda^i or psi^i respectively.
    pub fn newton_determinants(&self, n: u32, direction: NewtonDirection) -> Result<QPoly> {
        let n = n as usize;
        let entry: Box<dyn Fn(usize, usize) -> QPoly> = match direction {
            NewtonDirection::PsiFromLambda => Box::new(|i: usize, j: usize| {
                // first column: (i+1) lambda^{i+1}; superdiag constant 1
                if j == 0 {
                    QPoly::var(Var::x(i as u64 + 1)).mul_int(i as i64 + 1)
                } else if j == i + 1 {
                    QPoly::one()
                } else if j <= i {
                    QPoly::var(Var::x((i - j + 1) as u64))
                } else {
                    QPoly::zero()
                }
            }),
            NewtonDirection::LambdaFromPsi => Box::new(|i: usize, j: usize| {
                if j == i + 1 {
                    QPoly::from_int(i as i64 + 1)
                } else if j <= i {
                    QPoly::var(Var::x((i - j + 1) as u64))
                } else {
                    QPoly::zero()
                }
            }),
        };
        fn det(
            row: usize,
            colmask: u64,
            n: usize,
            entry: &dyn Fn(usize, usize) -> QPoly,
            memo: &mut HashMap<(usize, u64), QPoly>,
        ) -> QPoly {
            if row == n {
                return QPoly::one();
            }
            if let Some(hit) = memo.get(&(row, colmask)) {
                return hit.clone();
            }
            let mut acc = QPoly::zero();
            let mut sign = 1i64;
            for j in 0..n {
                if colmask & (1 << j) != 0 {
                    continue;
                }
                let e = entry(row, j);
                if !e.is_zero() {
                    let sub = det(row + 1, colmask | (1 << j), n, entry, memo);
                    acc = acc.add(&e.mul(&sub).mul_int(sign));
                }
                sign = -sign;
            }
            memo.insert((row, colmask), acc.clone());
            acc
        }
        let mut memo = HashMap::new();
        Ok(det(0, 0, n, entry.as_ref(), &mut memo))
    }

    // ---- Hirzebruch sequences ----

    /// Hirzebruch polynomial K_n of the characteristic series Q, in the
    /// e-basis (rational coefficients allowed).
    pub fn hirzebruch_sequence(
        &self,
        q: &[Coef],
        n: u32,
        mode: HirzebruchMode,
    ) -> Result<SymFn> {
        self.check_cap(n)?;
        let q_at = |k: u32| -> Coef {
            q.get(k as usize).cloned().unwrap_or_else(Coef::zero)
        };
        match mode {
            HirzebruchMode::Multiplicative => {
                if q_at(0) != Coef::one() {
                    return Err(WittError::InvalidSpec(
                        "multiplicative mode needs Q(0) = 1".into(),
                    ));
                }
                if n == 0 {
                    return Ok(SymFn::one(Basis::E));
                }
                // coefficient of t^n in prod_i Q(xi_i t):
                // sum over partitions kappa of n of (prod q_{kappa_j}) m_kappa
                let mut acc = SymFn::zero(Basis::M);
                for kappa in partitions_of(n) {
                    let mut c = Coef::one();
                    for &part in kappa.parts() {
                        c *= q_at(part);
                    }
                    if !c.is_zero() {
                        acc.insert(kappa, c);
                    }
                }
                self.convert(&acc, Basis::E)
            }
            HirzebruchMode::Additive => {
                if !q_at(0).is_zero() {
                    return Err(WittError::InvalidSpec(
                        "additive mode needs Q(0) = 0".into(),
                    ));
                }
                if n == 0 {
                    return Ok(SymFn::zero(Basis::E));
                }
                // coefficient of t^n in sum_i Q(xi_i t) = q_n p_n
                let p = SymFn::generator(Basis::P, n).scale(&q_at(n));
                self.convert(&p, Basis::E)
            }
        }
    }

    // ---- Klein automorphisms ----

    /// The four graded Hopf automorphisms: identity, a(t) -> a(-t),
    /// a(t) -> a(t)^{-1} and their composite.
    pub fn klein_automorphism(&self, kind: KleinKind, f: &SymFn) -> Result<SymFn> {
        let fh = self.convert(f, Basis::H)?;
        let image_of_gen = |n: u32| -> HExp {
            match kind {
                KleinKind::Id => hexp_gen(n),
                KleinKind::Alt => {
                    let mut g = hexp_gen(n);
                    if n % 2 == 1 {
                        g = g.into_iter().map(|(p, c)| (p, -c)).collect();
                    }
                    g
                }
                KleinKind::Inv => {
                    let mut e = elementary_in_h(n);
                    if n % 2 == 1 {
                        e = e.into_iter().map(|(p, c)| (p, -c)).collect();
                    }
                    e
                }
                KleinKind::AltInv => elementary_in_h(n),
            }
        };
        let mut out = SymFn::zero(Basis::H);
        for (lam, c) in &fh.terms {
            let mut prod = hexp_one();
            for &part in lam.parts() {
                prod = hexp_mul(&prod, &image_of_gen(part));
            }
            for (p, k) in prod {
                out.insert(p, k * c);
            }
        }
        self.convert(&out, f.basis)
    }

    /// Determinant of the transition matrix between two integral bases at
    /// weight d (unimodularity check).
    pub fn transition_det(&self, d: u32, from: Basis, to: Basis) -> Result<Coef> {
        self.check_cap(d)?;
        let data = weight_data(d)?;
        let m = mat_mul(&data.to_m[&from], &data.from_m[&to]);
        Ok(mat_det_via_elimination(&m))
    }
}

/// All distinct placements of the parts of lambda into `nvars` exponent
/// slots (the monomial orbit of m_lambda in finitely many variables).
fn monomial_orbit(lam: &Partition, nvars: usize) -> Vec<Vec<u32>> {
    if lam.len() > nvars {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    // group equal parts to avoid duplicates: place each distinct value's
    // positions as a combination
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &p in lam.parts() {
        match groups.last_mut() {
            Some((v, k)) if *v == p => *k += 1,
            _ => groups.push((p, 1)),
        }
    }
    fn rec(
        groups: &[(u32, usize)],
        gi: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if gi == groups.len() {
            out.push(current.clone());
            return;
        }
        let (value, count) = groups[gi];
        let free: Vec<usize> = (0..current.len()).filter(|&i| current[i] == 0).collect();
        if free.len() < count {
            return;
        }
        // choose `count` of the free slots
        let mut choice: Vec<usize> = (0..count).collect();
        loop {
            for &ci in &choice {
                current[free[ci]] = value;
            }
            rec(groups, gi + 1, current, out);
            for &ci in &choice {
                current[free[ci]] = 0;
            }
            // next combination
            let mut idx = count;
            let mut done = false;
            loop {
                if idx == 0 {
                    done = true;
                    break;
                }
                idx -= 1;
                if choice[idx] != free.len() - count + idx {
                    choice[idx] += 1;
                    for t in idx + 1..count {
                        choice[t] = choice[t - 1] + 1;
                    }
                    break;
                }
            }
            if done {
                break;
            }
        }
    }
    rec(&groups, 0, &mut current, &mut out);
    out
}

// ---- Tensors ----

/// An element of Symm (x) Symm with each side tagged with a basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymTensor {
    pub bases: (Basis, Basis),
    pub terms: BTreeMap<(Partition, Partition), Coef>,
}

impl SymTensor {
    pub fn zero(left: Basis, right: Basis) -> SymTensor {
        SymTensor {
            bases: (left, right),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(left: Basis, right: Basis) -> SymTensor {
        let mut t = SymTensor::zero(left, right);
        t.insert(Partition::empty(), Partition::empty(), Coef::one());
        t
    }

    pub fn insert(&mut self, l: Partition, r: Partition, c: Coef) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(prev) => {
                let s = prev + c;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
        }
    }

    pub fn add(&self, other: &SymTensor) -> SymTensor {
        assert_eq!(self.bases, other.bases);
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.insert(l.clone(), r.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coef) -> SymTensor {
        if c.is_zero() {
            return SymTensor::zero(self.bases.0, self.bases.1);
        }
        SymTensor {
            bases: self.bases,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// Componentwise product; only meaningful in multiplicative bases (h/e/p).
    pub fn mul(&self, other: &SymTensor) -> SymTensor {
        assert_eq!(self.bases, other.bases);
        let mut out = SymTensor::zero(self.bases.0, self.bases.1);
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                out.insert(l1.merge(l2), r1.merge(r2), c1 * c2);
            }
        }
        out
    }

    /// Convert both legs to the given bases.
    pub fn convert(&self, symm: &Symm, left: Basis, right: Basis) -> Result<SymTensor> {
        let mut out = SymTensor::zero(left, right);
        for ((l, r), c) in &self.terms {
            let lf = symm.convert(
                &SymFn::single(self.bases.0, l.clone(), Coef::one()),
                left,
            )?;
            let rf = symm.convert(
                &SymFn::single(self.bases.1, r.clone(), Coef::one()),
                right,
            )?;
            for (lp, lc) in &lf.terms {
                for (rp, rc) in &rf.terms {
                    out.insert(lp.clone(), rp.clone(), c * lc * rc);
                }
            }
        }
        Ok(out)
    }

    /// Apply the flip map x (x) y -> y (x) x.
    pub fn swap(&self) -> SymTensor {
        let mut out = SymTensor::zero(self.bases.1, self.bases.0);
        for ((l, r), c) in &self.terms {
            out.insert(r.clone(), l.clone(), c.clone());
        }
        out
    }

    /// Contract the left leg with a linear functional and return the right
    /// remainder: sum of phi(l) * r.
    pub fn contract_left(
        &self,
        phi: &dyn Fn(&SymFn) -> Result<Coef>,
    ) -> Result<SymFn> {
        let mut out = SymFn::zero(self.bases.1);
        for ((l, r), c) in &self.terms {
            let lv = phi(&SymFn::single(self.bases.0, l.clone(), Coef::one()))?;
            if !lv.is_zero() {
                out.insert(r.clone(), c * lv);
            }
        }
        Ok(out)
    }
}

// ---- Enums for public operations ----

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LambdaFormula {
    Sum(u32),
    Product(u32),
    Iterate(u32, u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NewtonDirection {
    PsiFromLambda,
    LambdaFromPsi,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HirzebruchMode {
    Multiplicative,
    Additive,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KleinKind {
    Id,
    Alt,
    Inv,
    AltInv,
}

impl KleinKind {
    pub const ALL: [KleinKind; 4] = [KleinKind::Id, KleinKind::Alt, KleinKind::Inv, KleinKind::AltInv];

    /// Composition table of the Klein four-group.
    pub fn compose(self, other: KleinKind) -> KleinKind {
        use KleinKind::*;
        let code = |k: KleinKind| match k {
            Id => (false, false),
            Alt => (true, false),
            Inv => (false, true),
            AltInv => (true, true),
        };
        let decode = |c: (bool, bool)| match c {
            (false, false) => Id,
            (true, false) => Alt,
            (false, true) => Inv,
            (true, true) => AltInv,
        };
        let (a1, b1) = code(self);
        let (a2, b2) = code(other);
        decode((a1 ^ a2, b1 ^ b2))
    }
}

// ---- Partition combinatorics: majorization and Gale-Ryser ----

/// Majorization of equal-weight vectors by prefix sums of the sorted
/// rearrangements.
pub fn majorizes(alpha: &Partition, beta: &Partition) -> bool {
    let n = alpha.len().max(beta.len());
    let mut sa = 0i64;
    let mut sb = 0i64;
    for i in 0..n {
        sa += alpha.part(i) as i64;
        sb += beta.part(i) as i64;
        if sa < sb {
            return false;
        }
    }
    sa == sb
}

/// Verdict and optional witness matrix of the Gale-Ryser criterion: a 0-1
/// matrix with row sums alpha and column sums beta exists iff
/// conj(alpha) majorizes beta. Cross-validated by exhaustive search for
/// weight <= 12.
pub fn gale_ryser(alpha: &Partition, beta: &Partition) -> Result<(bool, Option<Vec<Vec<u8>>>)> {
    if alpha.weight() != beta.weight() {
        return Err(WittError::InvalidSpec(format!(
            "weights differ: {} vs {}",
            alpha.weight(),
            beta.weight()
        )));
    }
    let verdict = majorizes(&alpha.conjugate(), beta);
    let witness = if alpha.weight() <= 12 {
        search_01_matrix(alpha, beta)
    } else {
        None
    };
    if alpha.weight() <= 12 {
        let found = witness.is_some();
        if found != verdict {
            return Err(WittError::Unsupported(format!(
                "Gale-Ryser disagreement for {} / {}",
                alpha, beta
            )));
        }
    }
    Ok((verdict, witness))
}

/// Backtracking search for a 0-1 matrix with the given row and column sums.
pub fn search_01_matrix(alpha: &Partition, beta: &Partition) -> Option<Vec<Vec<u8>>> {
    let rows = alpha.len();
    let mut remaining: Vec<u32> = beta.parts().to_vec();
    let mut matrix: Vec<Vec<u8>> = Vec::with_capacity(rows);
    fn place(
        alpha: &[u32],
        r: usize,
        remaining: &mut Vec<u32>,
        matrix: &mut Vec<Vec<u8>>,
    ) -> bool {
        if r == alpha.len() {
            return remaining.iter().all(|&c| c == 0);
        }
        let need = alpha[r] as usize;
        let cols = remaining.len();
        // choose `need` columns with remaining capacity
        let mut row = vec![0u8; cols];
        fn choose(
            need: usize,
            start: usize,
            alpha: &[u32],
            r: usize,
            remaining: &mut Vec<u32>,
            row: &mut Vec<u8>,
            matrix: &mut Vec<Vec<u8>>,
        ) -> bool {
            if need == 0 {
                // feasibility prune: total remaining capacity must cover the rest
                let rest: u32 = alpha[r + 1..].iter().sum();
                let capacity: u32 = remaining.iter().sum();
                if capacity != rest {
                    return false;
                }
                matrix.push(row.clone());
                if place(alpha, r + 1, remaining, matrix) {
                    return true;
                }
                matrix.pop();
                return false;
            }
            let cols = remaining.len();
            if start + need > cols {
                return false;
            }
            for c in start..cols {
                if remaining[c] == 0 {
                    continue;
                }
                remaining[c] -= 1;
                row[c] = 1;
                if choose(need - 1, c + 1, alpha, r, remaining, row, matrix) {
                    return true;
                }
                row[c] = 0;
                remaining[c] += 1;
            }
            false
        }
        choose(need, 0, alpha, r, remaining, &mut row, matrix)
    }
    if place(alpha.parts(), 0, &mut remaining, &mut matrix) {
        Some(matrix)
    } else {
        None
    }
}
