//! Quasi-symmetric functions QSymm and noncommutative symmetric functions
//! NSymm at bounded weight: overlapping shuffle product, cut
//! comultiplication, the duality pairing, the (0,alpha)-matrix second
//! comultiplication, Frobenius endomorphisms and Lyndon-word lambda
//! operations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, WittError};
use crate::symm::{Basis, Coef, Partition, SymFn, Symm};

/// A composition: an ordered word of positive integers. The empty
/// composition is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(entries: Vec<u32>) -> Result<Composition> {
        if entries.iter().any(|&e| e == 0) {
            return Err(WittError::InvalidSpec("composition entries must be >= 1".into()));
        }
        Ok(Composition(entries))
    }

    pub fn empty() -> Composition {
        Composition(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The partition obtained by sorting the entries.
    pub fn to_partition(&self) -> Partition {
        Partition::new(self.0.clone())
    }

    pub fn concat(&self, other: &Composition) -> Composition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Composition(v)
    }

    pub fn scale(&self, n: u32) -> Composition {
        Composition(self.0.iter().map(|&a| a * n).collect())
    }

    /// Lyndon: lexicographically strictly smaller than each proper tail.
    pub fn is_lyndon(&self) -> bool {
        if self.0.is_empty() {
            return false;
        }
        for i in 1..self.0.len() {
            if !(self.0[..] < self.0[i..]) {
                return false;
            }
        }
        true
    }

    /// Primitive: the gcd of the entries is 1.
    pub fn is_primitive(&self) -> bool {
        if self.0.is_empty() {
            return false;
        }
        self.0.iter().fold(0u32, |g, &a| num_integer::gcd(g, a)) == 1
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", strs.join(","))
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A quasi-symmetric function: finite combination of monomial
/// quasi-symmetric functions indexed by compositions.
#[derive(Clone, PartialEq, Eq)]
pub struct QSymFn {
    pub terms: BTreeMap<Composition, Coef>,
}

impl QSymFn {
    pub fn zero() -> QSymFn {
        QSymFn {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> QSymFn {
        QSymFn::single(Composition::empty(), Coef::one())
    }

    pub fn single(c: Composition, k: Coef) -> QSymFn {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert(c, k);
        }
        QSymFn { terms }
    }

    pub fn coeff(&self, c: &Composition) -> Coef {
        self.terms.get(c).cloned().unwrap_or_else(Coef::zero)
    }

    pub fn insert(&mut self, c: Composition, k: Coef) {
        if k.is_zero() {
            return;
        }
        match self.terms.remove(&c) {
            None => {
                self.terms.insert(c, k);
            }
            Some(prev) => {
                let s = prev + k;
                if !s.is_zero() {
                    self.terms.insert(c, s);
                }
            }
        }
    }

    pub fn add(&self, other: &QSymFn) -> QSymFn {
        let mut out = self.clone();
        for (c, k) in &other.terms {
            out.insert(c.clone(), k.clone());
        }
        out
    }

    pub fn neg(&self) -> QSymFn {
        QSymFn {
            terms: self
                .terms
                .iter()
                .map(|(c, k)| (c.clone(), -k.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &QSymFn) -> QSymFn {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Coef) -> QSymFn {
        if k.is_zero() {
            return QSymFn::zero();
        }
        QSymFn {
            terms: self
                .terms
                .iter()
                .map(|(c, v)| (c.clone(), v * k))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|c| c.weight()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(c, k)| {
                let coeff = if k.denom().is_one() {
                    k.numer().to_string()
                } else {
                    format!("{}/{}", k.numer(), k.denom())
                };
                json!({"composition": c.entries(), "coeff": coeff})
            })
            .collect();
        json!({"terms": terms})
    }
}

impl fmt::Display for QSymFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Composition, &Coef)> = self.terms.iter().collect();
        entries.sort_by(|(c1, _), (c2, _)| {
            c1.weight()
                .cmp(&c2.weight())
                .then_with(|| c1.len().cmp(&c2.len()))
                .then_with(|| c1.cmp(c2))
        });
        for (i, (c, k)) in entries.iter().enumerate() {
            let neg = k.is_negative();
            let abs = if neg { -(*k).clone() } else { (*k).clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let ks = if abs.denom().is_one() {
                abs.numer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            if c.is_empty() {
                write!(f, "{}", ks)?;
            } else if ks == "1" {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*{}", ks, c)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QSymFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A noncommutative symmetric function: combination of words Z_alpha.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NSymFn {
    pub terms: BTreeMap<Composition, Coef>,
}

impl NSymFn {
    pub fn zero() -> NSymFn {
        NSymFn {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> NSymFn {
        NSymFn::single(Composition::empty(), Coef::one())
    }

    pub fn single(c: Composition, k: Coef) -> NSymFn {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert(c, k);
        }
        NSymFn { terms }
    }

    pub fn insert(&mut self, c: Composition, k: Coef) {
        if k.is_zero() {
            return;
        }
        match self.terms.remove(&c) {
            None => {
                self.terms.insert(c, k);
            }
            Some(prev) => {
                let s = prev + k;
                if !s.is_zero() {
                    self.terms.insert(c, s);
                }
            }
        }
    }

    pub fn add(&self, other: &NSymFn) -> NSymFn {
        let mut out = self.clone();
        for (c, k) in &other.terms {
            out.insert(c.clone(), k.clone());
        }
        out
    }
}

/// Tensor square element with composition-indexed legs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QTensor {
    pub terms: BTreeMap<(Composition, Composition), Coef>,
}

impl QTensor {
    pub fn zero() -> QTensor {
        QTensor {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> QTensor {
        let mut t = QTensor::zero();
        t.insert(Composition::empty(), Composition::empty(), Coef::one());
        t
    }

    pub fn insert(&mut self, l: Composition, r: Composition, k: Coef) {
        if k.is_zero() {
            return;
        }
        let key = (l, r);
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, k);
            }
            Some(prev) => {
                let s = prev + k;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
        }
    }

    pub fn add(&self, other: &QTensor) -> QTensor {
        let mut out = self.clone();
        for ((l, r), k) in &other.terms {
            out.insert(l.clone(), r.clone(), k.clone());
        }
        out
    }

    pub fn scale(&self, k: &Coef) -> QTensor {
        if k.is_zero() {
            return QTensor::zero();
        }
        QTensor {
            terms: self
                .terms
                .iter()
                .map(|(key, v)| (key.clone(), v * k))
                .collect(),
        }
    }

    /// Concatenation product on both legs (for NSymm tensors).
    pub fn concat_mul(&self, other: &QTensor) -> QTensor {
        let mut out = QTensor::zero();
        for ((l1, r1), k1) in &self.terms {
            for ((l2, r2), k2) in &other.terms {
                out.insert(l1.concat(l2), r1.concat(r2), k1 * k2);
            }
        }
        out
    }
}

// ---- QSymm context ----

/// Entry point for QSymm/NSymm computations, bounded by a weight cap and a
/// (0,alpha)-matrix enumeration cap on composition length.
#[derive(Clone, Copy, Debug)]
pub struct QSymm {
    pub cap: u32,
    pub matrix_cap: usize,
}

impl Default for QSymm {
    fn default() -> Self {
        QSymm {
            cap: 8,
            matrix_cap: 6,
        }
    }
}

impl QSymm {
    pub fn new() -> QSymm {
        QSymm::default()
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

    /// Overlapping shuffle product of two basis compositions.
    pub fn overlapping_shuffle(&self, alpha: &Composition, beta: &Composition) -> Result<QSymFn> {
        self.check_cap(alpha.weight() + beta.weight())?;
        let mut out = QSymFn::zero();
        fn rec(
            a: &[u32],
            b: &[u32],
            prefix: &mut Vec<u32>,
            out: &mut QSymFn,
        ) {
            if a.is_empty() {
                let mut full = prefix.clone();
                full.extend_from_slice(b);
                out.insert(Composition(full), Coef::one());
                return;
            }
            if b.is_empty() {
                let mut full = prefix.clone();
                full.extend_from_slice(a);
                out.insert(Composition(full), Coef::one());
                return;
            }
            prefix.push(a[0]);
            rec(&a[1..], b, prefix, out);
            prefix.pop();
            prefix.push(b[0]);
            rec(a, &b[1..], prefix, out);
            prefix.pop();
            prefix.push(a[0] + b[0]);
            rec(&a[1..], &b[1..], prefix, out);
            prefix.pop();
        }
        let mut prefix = Vec::new();
        rec(alpha.entries(), beta.entries(), &mut prefix, &mut out);
        Ok(out)
    }

    /// Bilinear extension of the overlapping shuffle.
    pub fn multiply(&self, f: &QSymFn, g: &QSymFn) -> Result<QSymFn> {
        let mut out = QSymFn::zero();
        for (a, ka) in &f.terms {
            for (b, kb) in &g.terms {
                let sh = self.overlapping_shuffle(a, b)?;
                out = out.add(&sh.scale(&(ka * kb)));
            }
        }
        Ok(out)
    }

    /// The comultiplication 'cut': all splits of the composition.
    pub fn cut_comul(&self, f: &QSymFn) -> QTensor {
        let mut out = QTensor::zero();
        for (alpha, k) in &f.terms {
            for i in 0..=alpha.len() {
                out.insert(
                    Composition(alpha.entries()[..i].to_vec()),
                    Composition(alpha.entries()[i..].to_vec()),
                    k.clone(),
                );
            }
        }
        out
    }

    /// Counit of cut: the coefficient of the empty composition.
    pub fn counit(&self, f: &QSymFn) -> Coef {
        f.coeff(&Composition::empty())
    }

    /// Concatenation product on NSymm.
    pub fn nsym_multiply(&self, f: &NSymFn, g: &NSymFn) -> NSymFn {
        let mut out = NSymFn::zero();
        for (a, ka) in &f.terms {
            for (b, kb) in &g.terms {
                out.insert(a.concat(b), ka * kb);
            }
        }
        out
    }

    /// Comultiplication on NSymm: mu(Z_n) = sum over i+j=n of Z_i (x) Z_j,
    /// extended multiplicatively.
    pub fn nsym_comul(&self, f: &NSymFn) -> QTensor {
        let mut out = QTensor::zero();
        for (alpha, k) in &f.terms {
            let mut acc = QTensor::one();
            for &a in alpha.entries() {
                let mut gen = QTensor::zero();
                for i in 0..=a {
                    let l = if i == 0 {
                        Composition::empty()
                    } else {
                        Composition(vec![i])
                    };
                    let r = if a - i == 0 {
                        Composition::empty()
                    } else {
                        Composition(vec![a - i])
                    };
                    gen.insert(l, r, Coef::one());
                }
                acc = acc.concat_mul(&gen);
            }
            out = out.add(&acc.scale(k));
        }
        out
    }

    /// Counit on NSymm: coefficient of the empty word.
    pub fn nsym_counit(&self, f: &NSymFn) -> Coef {
        f.terms
            .get(&Composition::empty())
            .cloned()
            .unwrap_or_else(Coef::zero)
    }

    /// The duality pairing <Z_alpha, beta> = delta.
    pub fn pair(&self, f: &NSymFn, g: &QSymFn) -> Coef {
        let mut acc = Coef::zero();
        for (a, ka) in &f.terms {
            if let Some(kb) = g.terms.get(a) {
                acc += ka * kb;
            }
        }
        acc
    }

    /// Pairing of tensors, leg by leg.
    pub fn pair_tensor(&self, f: &QTensor, g: &QTensor) -> Coef {
        let mut acc = Coef::zero();
        for ((a1, a2), ka) in &f.terms {
            for ((b1, b2), kb) in &g.terms {
                if a1 == b1 && a2 == b2 {
                    acc += ka * kb;
                }
            }
        }
        acc
    }

    /// The embedding of Symm: m_lambda maps to the sum of the distinct
    /// rearrangements of lambda.
    pub fn embed_symm(&self, symm: &Symm, f: &SymFn) -> Result<QSymFn> {
        let fm = symm.convert(f, Basis::M)?;
        let mut out = QSymFn::zero();
        for (lam, c) in &fm.terms {
            for arr in distinct_rearrangements(lam.parts()) {
                out.insert(Composition(arr), c.clone());
            }
        }
        Ok(out)
    }

    /// Enumerate the (0,alpha)-matrices: entries zero or the a_i in reading
    /// order, no zero rows or columns.
    pub fn zero_alpha_matrices(&self, alpha: &Composition) -> Result<Vec<Vec<Vec<u32>>>> {
        let m = alpha.len();
        if m > self.matrix_cap {
            return Err(WittError::CapExceeded(format!(
                "composition length {} exceeds matrix enumeration cap {}",
                m, self.matrix_cap
            )));
        }
        if m == 0 {
            return Ok(vec![Vec::new()]);
        }
        let mut out = Vec::new();
        for rows in 1..=m {
            for cols in 1..=m {
                let cells = rows * cols;
                if cells < m {
                    continue;
                }
                // choose m cell positions in reading order
                let mut choice: Vec<usize> = (0..m).collect();
                loop {
                    // build and filter
                    let mut mat = vec![vec![0u32; cols]; rows];
                    for (k, &pos) in choice.iter().enumerate() {
                        mat[pos / cols][pos % cols] = alpha.entries()[k];
                    }
                    let no_zero_row = mat.iter().all(|row| row.iter().any(|&x| x > 0));
                    let no_zero_col =
                        (0..cols).all(|j| (0..rows).any(|i| mat[i][j] > 0));
                    if no_zero_row && no_zero_col {
                        out.push(mat);
                    }
                    // next combination of size m from 0..cells
                    let mut idx = m;
                    let mut done = false;
                    loop {
                        if idx == 0 {
                            done = true;
                            break;
                        }
                        idx -= 1;
                        if choice[idx] != cells - m + idx {
                            choice[idx] += 1;
                            for t in idx + 1..m {
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
        }
        Ok(out)
    }

    /// Second comultiplication via (0,alpha)-matrices:
    /// mu_p(alpha) = sum over matrices of row(M) (x) column(M).
    pub fn comul_prod(&self, f: &QSymFn) -> Result<QTensor> {
        let mut out = QTensor::zero();
        for (alpha, k) in &f.terms {
            if alpha.is_empty() {
                // the empty composition is group-like for mu_p
                out.insert(Composition::empty(), Composition::empty(), k.clone());
                continue;
            }
            for mat in self.zero_alpha_matrices(alpha)? {
                let rows: Vec<u32> = mat.iter().map(|row| row.iter().sum()).collect();
                let cols: Vec<u32> = (0..mat[0].len())
                    .map(|j| mat.iter().map(|row| row[j]).sum())
                    .collect();
                out.insert(Composition(rows), Composition(cols), k.clone());
            }
        }
        Ok(out)
    }

    /// Counit of the second comultiplication: 1 on length-1 compositions.
    pub fn counit_prod(&self, f: &QSymFn) -> Coef {
        let mut acc = Coef::zero();
        for (c, k) in &f.terms {
            if c.len() == 1 {
                acc += k;
            }
        }
        acc
    }

    /// Frobenius endomorphism: entrywise scaling of compositions.
    pub fn frobenius(&self, n: u32, f: &QSymFn) -> Result<QSymFn> {
        self.check_cap(f.max_weight() * n)?;
        let mut out = QSymFn::zero();
        for (c, k) in &f.terms {
            out.insert(c.scale(n), k.clone());
        }
        Ok(out)
    }

    /// Verify the Frobenius-like congruence: all coefficients of
    /// alpha^{shuffle p} - f_p(alpha) are divisible by p.
    pub fn ppower_congruence(&self, alpha: &Composition, p: u32) -> Result<bool> {
        let single = QSymFn::single(alpha.clone(), Coef::one());
        let mut power = QSymFn::one();
        for _ in 0..p {
            power = self.multiply(&power, &single)?;
        }
        let diff = power.sub(&self.frobenius(p, &single)?);
        let pp = BigInt::from(p);
        Ok(diff
            .terms
            .values()
            .all(|c| c.denom().is_one() && (c.numer() % &pp).is_zero()))
    }

    /// lambda^n through the Newton relations n lambda^n =
    /// sum_{i=1}^{n} (-1)^{i-1} lambda^{n-i} psi^i with psi^i = f_i,
    /// computed over Q; integrality asserted.
    pub fn lambda(&self, n: u32, f: &QSymFn) -> Result<QSymFn> {
        self.check_cap(f.max_weight() * n)?;
        let mut lambdas: Vec<QSymFn> = vec![QSymFn::one()];
        for k in 1..=n {
            let mut acc = QSymFn::zero();
            for i in 1..=k {
                let psi = self.frobenius(i, f)?;
                let term = self.multiply(&lambdas[(k - i) as usize], &psi)?;
                let sign = if i % 2 == 1 { Coef::one() } else { -Coef::one() };
                acc = acc.add(&term.scale(&sign));
            }
            let inv = BigRational::new(BigInt::one(), BigInt::from(k));
            lambdas.push(acc.scale(&inv));
        }
        let out = lambdas.pop().expect("n >= 0");
        if !out.is_integral() {
            return Err(WittError::NonIntegral(format!(
                "lambda^{} produced non-integral coefficients",
                n
            )));
        }
        Ok(out)
    }

    /// Free-generator grid check: the monomials of weight d in
    /// {lambda^n(alpha) : alpha Lyndon and primitive, n wt(alpha) <= d}
    /// number 2^{d-1} and their expansion matrix is unimodular.
    pub fn generator_grid_check(&self, maxwt: u32) -> Result<Vec<(u32, usize, bool)>> {
        if maxwt > 5 {
            return Err(WittError::CapExceeded(
                "generator grid check is bounded at weight 5".into(),
            ));
        }
        // generators with their weights, in a deterministic order
        let mut gens: Vec<(u32, QSymFn)> = Vec::new();
        for w in 1..=maxwt {
            let mut words = compositions_of_weight(w);
            words.sort();
            for alpha in words {
                if !alpha.is_lyndon() || !alpha.is_primitive() {
                    continue;
                }
                for n in 1..=(maxwt / w) {
                    let g = self.lambda(n, &QSymFn::single(alpha.clone(), Coef::one()))?;
                    gens.push((n * w, g));
                }
            }
        }
        let mut report = Vec::new();
        for d in 1..=maxwt {
            // multisets of generators of total weight d
            let mut monomials: Vec<QSymFn> = Vec::new();
            fn rec(
                q: &QSymm,
                gens: &[(u32, QSymFn)],
                start: usize,
                rest: u32,
                acc: &QSymFn,
                out: &mut Vec<QSymFn>,
            ) -> Result<()> {
                if rest == 0 {
                    out.push(acc.clone());
                    return Ok(());
                }
                for (i, (w, g)) in gens.iter().enumerate().skip(start) {
                    if *w > rest {
                        continue;
                    }
                    let next = q.multiply(acc, g)?;
                    rec(q, gens, i, rest - w, &next, out)?;
                }
                Ok(())
            }
            rec(self, &gens, 0, d, &QSymFn::one(), &mut monomials)?;
            let comps = compositions_of_weight(d);
            let expected = 1usize << (d - 1);
            let count_ok = monomials.len() == expected && comps.len() == expected;
            // expansion matrix determinant
            let mut unimodular = false;
            if count_ok {
                let idx: BTreeMap<Composition, usize> = comps
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, c)| (c, i))
                    .collect();
                let matrix: Vec<Vec<Coef>> = monomials
                    .iter()
                    .map(|m| {
                        let mut row = vec![Coef::zero(); comps.len()];
                        for (c, k) in &m.terms {
                            row[idx[c]] = k.clone();
                        }
                        row
                    })
                    .collect();
                let det = det_rational(matrix);
                unimodular = det == Coef::one() || det == -Coef::one();
            }
            report.push((d, monomials.len(), count_ok && unimodular));
        }
        Ok(report)
    }
}

fn det_rational(mut m: Vec<Vec<Coef>>) -> Coef {
    let n = m.len();
    let mut det = Coef::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Coef::zero(),
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let d = m[col][col].clone();
        det *= &d;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &d;
            for j in col..n {
                let t = &f * &m[col][j];
                m[r][j] -= t;
            }
        }
    }
    det
}

pub fn compositions_of_weight(w: u32) -> Vec<Composition> {
    crate::arith::compositions(w)
        .into_iter()
        .map(Composition)
        .collect()
}

fn distinct_rearrangements(parts: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    // next_permutation loop over the multiset
    loop {
        out.push(sorted.clone());
        // find the next lexicographic permutation
        let n = sorted.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && sorted[i - 1] >= sorted[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while sorted[j] <= sorted[i - 1] {
            j -= 1;
        }
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs() -> QSymm {
        QSymm::new()
    }

    fn comp(entries: &[u32]) -> Composition {
        Composition::new(entries.to_vec()).unwrap()
    }

    fn cint(n: i64) -> Coef {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn shuffle_cube_of_one() {
        // [1] [1] [1] = 6 [1,1,1] + 3 [1,2] + 3 [2,1] + [3]
        let q = qs();
        let one = QSymFn::single(comp(&[1]), Coef::one());
        let sq = q.multiply(&one, &one).unwrap();
        let cube = q.multiply(&sq, &one).unwrap();
        assert_eq!(cube.coeff(&comp(&[1, 1, 1])), cint(6));
        assert_eq!(cube.coeff(&comp(&[1, 2])), cint(3));
        assert_eq!(cube.coeff(&comp(&[2, 1])), cint(3));
        assert_eq!(cube.coeff(&comp(&[3])), cint(1));
        assert_eq!(cube.terms.len(), 4);
    }

    #[test]
    fn shuffle_ab_cd_has_13_terms() {
        // choose distinct generic-ish values a=1, b=5, c=11, d=25 so that all
        // 13 terms are distinct compositions
        let q = QSymm { cap: 64, matrix_cap: 6 };
        let ab = comp(&[1, 5]);
        let cd = comp(&[11, 25]);
        let prod = q.overlapping_shuffle(&ab, &cd).unwrap();
        let total: Coef = prod.terms.values().cloned().sum();
        assert_eq!(total, cint(13));
        assert_eq!(prod.terms.len(), 13);
        // ends in [a+c, b+d]
        assert_eq!(prod.coeff(&comp(&[12, 30])), cint(1));
        // a few shuffles
        assert_eq!(prod.coeff(&comp(&[1, 5, 11, 25])), cint(1));
        assert_eq!(prod.coeff(&comp(&[11, 25, 1, 5])), cint(1));
        // overlapping ones
        assert_eq!(prod.coeff(&comp(&[12, 5, 25])), cint(1));
        assert_eq!(prod.coeff(&comp(&[1, 16, 25])), cint(1));
    }

    #[test]
    fn unit_shuffle() {
        let q = qs();
        let alpha = QSymFn::single(comp(&[2, 1]), Coef::one());
        let unit = QSymFn::one();
        assert_eq!(q.multiply(&unit, &alpha).unwrap(), alpha);
    }

    #[test]
    fn cut_examples() {
        let q = qs();
        let a = QSymFn::single(comp(&[1, 2]), Coef::one());
        let t = q.cut_comul(&a);
        assert_eq!(t.terms.len(), 3);
        assert_eq!(t.terms[&(comp(&[]), comp(&[1, 2]))], cint(1));
        assert_eq!(t.terms[&(comp(&[1]), comp(&[2]))], cint(1));
        assert_eq!(t.terms[&(comp(&[1, 2]), comp(&[]))], cint(1));
        // (eps (x) id) cut = id
        let mut recovered = QSymFn::zero();
        for ((l, r), k) in &t.terms {
            if l.is_empty() {
                recovered.insert(r.clone(), k.clone());
            }
        }
        assert_eq!(recovered, a);
    }

    #[test]
    fn nsym_structure() {
        let q = qs();
        let z1 = NSymFn::single(comp(&[1]), Coef::one());
        let z2 = NSymFn::single(comp(&[2]), Coef::one());
        let z12 = q.nsym_multiply(&z1, &z2);
        let z21 = q.nsym_multiply(&z2, &z1);
        assert_ne!(z12, z21);
        // mu(Z_2) = 1 (x) Z2 + Z1 (x) Z1 + Z2 (x) 1
        let t = q.nsym_comul(&z2);
        assert_eq!(t.terms.len(), 3);
        assert_eq!(t.terms[&(comp(&[1]), comp(&[1]))], cint(1));
        // eps(Z_n) = 0
        assert!(q.nsym_counit(&z2).is_zero());
    }

    #[test]
    fn pairing_and_duality() {
        let q = qs();
        let z12 = NSymFn::single(comp(&[1, 2]), Coef::one());
        let q12 = QSymFn::single(comp(&[1, 2]), Coef::one());
        assert_eq!(q.pair(&z12, &q12), cint(1));
        let z11 = NSymFn::single(comp(&[1, 1]), Coef::one());
        let q2 = QSymFn::single(comp(&[2]), Coef::one());
        assert_eq!(q.pair(&z11, &q2), cint(0));
        // <mu(Z2), [1] (x) [1]> = <Z2, [1] [1]> = 1
        let t = q.nsym_comul(&NSymFn::single(comp(&[2]), Coef::one()));
        let mut target = QTensor::zero();
        target.insert(comp(&[1]), comp(&[1]), Coef::one());
        assert_eq!(q.pair_tensor(&t, &target), cint(1));
        let one = QSymFn::single(comp(&[1]), Coef::one());
        let sq = q.multiply(&one, &one).unwrap();
        assert_eq!(
            q.pair(&NSymFn::single(comp(&[2]), Coef::one()), &sq),
            cint(1)
        );
    }

    #[test]
    fn duality_laws_exhaustive_weight_4() {
        // all four identities of the graded duality, on basis elements up
        // to weight 4
        let q = qs();
        let mut basis: Vec<Composition> = Vec::new();
        for w in 0..=4u32 {
            basis.extend(compositions_of_weight(w));
        }
        for alpha in &basis {
            for beta in &basis {
                for gamma in &basis {
                    // <Z_alpha Z_beta, gamma> = <Z_alpha (x) Z_beta, cut(gamma)>
                    let za = NSymFn::single(alpha.clone(), Coef::one());
                    let zb = NSymFn::single(beta.clone(), Coef::one());
                    let prod = q.nsym_multiply(&za, &zb);
                    let lhs = q.pair(&prod, &QSymFn::single(gamma.clone(), Coef::one()));
                    let cut = q.cut_comul(&QSymFn::single(gamma.clone(), Coef::one()));
                    let mut tensor = QTensor::zero();
                    tensor.insert(alpha.clone(), beta.clone(), Coef::one());
                    let rhs = q.pair_tensor(&tensor, &cut);
                    assert_eq!(lhs, rhs, "law 1 at {} {} {}", alpha, beta, gamma);
                }
            }
        }
        // <mu(Z_gamma), alpha (x) beta> = <Z_gamma, alpha beta>
        for gamma in &basis {
            let mu = q.nsym_comul(&NSymFn::single(gamma.clone(), Coef::one()));
            for alpha in &basis {
                for beta in &basis {
                    if alpha.weight() + beta.weight() != gamma.weight() {
                        continue;
                    }
                    let mut tensor = QTensor::zero();
                    tensor.insert(alpha.clone(), beta.clone(), Coef::one());
                    let lhs = q.pair_tensor(&mu, &tensor);
                    let prod = q
                        .multiply(
                            &QSymFn::single(alpha.clone(), Coef::one()),
                            &QSymFn::single(beta.clone(), Coef::one()),
                        )
                        .unwrap();
                    let rhs = q.pair(&NSymFn::single(gamma.clone(), Coef::one()), &prod);
                    assert_eq!(lhs, rhs, "law 2 at {} {} {}", gamma, alpha, beta);
                }
            }
        }
    }

    #[test]
    fn embedding_of_symm() {
        let q = qs();
        let s = Symm::with_cap(8);
        let m21 = SymFn::single(Basis::M, Partition::new(vec![2, 1]), Coef::one());
        let e = q.embed_symm(&s, &m21).unwrap();
        assert_eq!(e.coeff(&comp(&[2, 1])), cint(1));
        assert_eq!(e.coeff(&comp(&[1, 2])), cint(1));
        assert_eq!(e.terms.len(), 2);
        // h2 -> [2] + [1,1]
        let h2 = SymFn::generator(Basis::H, 2);
        let eh = q.embed_symm(&s, &h2).unwrap();
        assert_eq!(eh.coeff(&comp(&[2])), cint(1));
        assert_eq!(eh.coeff(&comp(&[1, 1])), cint(1));
        assert_eq!(eh.terms.len(), 2);
        // ring morphism on the footnote-30 sample
        let m1 = SymFn::generator(Basis::M, 1);
        let prod_symm = s.multiply(&m21, &m1, Basis::M).unwrap();
        let lhs = q.embed_symm(&s, &prod_symm).unwrap();
        let rhs = q
            .multiply(&q.embed_symm(&s, &m21).unwrap(), &q.embed_symm(&s, &m1).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_alpha_matrix_of_the_paper() {
        // the displayed (0,[1,3,1,2,1,1])-matrix has row sums [4,4,1] and
        // column sums [1,3,1,4]
        let mat = vec![
            vec![0u32, 1, 0, 3],
            vec![1, 2, 0, 1],
            vec![0, 0, 1, 0],
        ];
        let rows: Vec<u32> = mat.iter().map(|r| r.iter().sum()).collect();
        let cols: Vec<u32> = (0..4).map(|j| mat.iter().map(|r| r[j]).sum()).collect();
        assert_eq!(rows, vec![4, 4, 1]);
        assert_eq!(cols, vec![1, 3, 1, 4]);
        // and it appears in the enumeration with entries in reading order
        let q = qs();
        let alpha = comp(&[1, 3, 1, 2, 1, 1]);
        let all = q.zero_alpha_matrices(&alpha).unwrap();
        assert!(all.contains(&mat));
    }

    #[test]
    fn mu_p_examples() {
        let q = qs();
        // mu_p([1]) = [1] (x) [1]
        let t = q
            .comul_prod(&QSymFn::single(comp(&[1]), Coef::one()))
            .unwrap();
        assert_eq!(t.terms.len(), 1);
        assert_eq!(t.terms[&(comp(&[1]), comp(&[1]))], cint(1));
        // mu_p([1,1]) = [2](x)[1,1] + [1,1](x)[2] + 2 [1,1](x)[1,1]
        let t2 = q
            .comul_prod(&QSymFn::single(comp(&[1, 1]), Coef::one()))
            .unwrap();
        assert_eq!(t2.terms[&(comp(&[2]), comp(&[1, 1]))], cint(1));
        assert_eq!(t2.terms[&(comp(&[1, 1]), comp(&[2]))], cint(1));
        assert_eq!(t2.terms[&(comp(&[1, 1]), comp(&[1, 1]))], cint(2));
        assert_eq!(t2.terms.len(), 3);
        // counit law
        let alpha = comp(&[2, 1]);
        let t3 = q
            .comul_prod(&QSymFn::single(alpha.clone(), Coef::one()))
            .unwrap();
        let mut recovered = QSymFn::zero();
        for ((l, r), k) in &t3.terms {
            if l.len() == 1 {
                recovered.insert(r.clone(), k.clone());
            }
        }
        assert_eq!(recovered, QSymFn::single(alpha, Coef::one()));
    }

    #[test]
    fn frobenius_scaling() {
        let q = qs();
        let f = QSymFn::single(comp(&[1, 2]), Coef::one());
        // cap 8 is exceeded at weight 9
        assert!(q.frobenius(3, &f).is_err());
        let big = QSymm { cap: 32, matrix_cap: 6 };
        let f3 = big.frobenius(3, &f).unwrap();
        assert_eq!(f3.coeff(&comp(&[3, 6])), cint(1));
        // f2 f3 = f6
        let f23 = big.frobenius(2, &big.frobenius(3, &f).unwrap()).unwrap();
        assert_eq!(f23, big.frobenius(6, &f).unwrap());
    }

    #[test]
    fn ppower_congruences() {
        let q = qs();
        assert!(q.ppower_congruence(&comp(&[1]), 2).unwrap());
        assert!(q.ppower_congruence(&comp(&[1, 2]), 2).unwrap());
        assert!(q.ppower_congruence(&comp(&[]), 3).unwrap());
        assert!(q.ppower_congruence(&comp(&[2]), 3).unwrap());
    }

    #[test]
    fn lyndon_and_primitive() {
        assert!(comp(&[1, 3, 2]).is_lyndon());
        assert!(!comp(&[2, 1, 1]).is_lyndon());
        assert!(!comp(&[1, 1]).is_lyndon());
        assert!(comp(&[1, 3, 2]).is_primitive());
        assert!(!comp(&[2, 4]).is_primitive());
        assert!(comp(&[1]).is_lyndon());
    }

    #[test]
    fn lambda_examples() {
        let q = qs();
        let one = QSymFn::single(comp(&[1]), Coef::one());
        // lambda^1 = id
        assert_eq!(q.lambda(1, &one).unwrap(), one);
        // lambda^2([1]) = [1,1]
        let l2 = q.lambda(2, &one).unwrap();
        assert_eq!(l2, QSymFn::single(comp(&[1, 1]), Coef::one()));
        // lambda^2([2]) = [2,2]
        let two = QSymFn::single(comp(&[2]), Coef::one());
        let l22 = q.lambda(2, &two).unwrap();
        assert_eq!(l22, QSymFn::single(comp(&[2, 2]), Coef::one()));
    }

    #[test]
    fn mu_p_is_algebra_morphism_for_shuffle() {
        // right-distributivity at the comultiplication level: mu_p of a
        // shuffle product is the componentwise shuffle of the mu_p images
        let q = qs();
        let samples = [comp(&[1]), comp(&[2]), comp(&[1, 1]), comp(&[2, 1])];
        for alpha in &samples {
            for beta in &samples {
                if alpha.weight() + beta.weight() > 5 {
                    continue;
                }
                let fa = QSymFn::single(alpha.clone(), Coef::one());
                let fb = QSymFn::single(beta.clone(), Coef::one());
                let lhs = q.comul_prod(&q.multiply(&fa, &fb).unwrap()).unwrap();
                let ta = q.comul_prod(&fa).unwrap();
                let tb = q.comul_prod(&fb).unwrap();
                let mut rhs = QTensor::zero();
                for ((l1, r1), c1) in &ta.terms {
                    for ((l2, r2), c2) in &tb.terms {
                        let lprod = q
                            .overlapping_shuffle(l1, l2)
                            .unwrap();
                        let rprod = q.overlapping_shuffle(r1, r2).unwrap();
                        for (lc, lk) in &lprod.terms {
                            for (rc, rk) in &rprod.terms {
                                rhs.insert(lc.clone(), rc.clone(), c1 * c2 * lk * rk);
                            }
                        }
                    }
                }
                assert_eq!(lhs, rhs, "mu_p({} . {})", alpha, beta);
            }
        }
    }

    #[test]
    fn induced_pairing_is_hall_inner_product() {
        // on embedded symmetric functions the duality pairing restricts to
        // <h_lambda, m_kappa> = delta, up to weight 4
        let q = qs();
        let s = Symm::with_cap(8);
        for d in 1..=4u32 {
            for lam in crate::arith::partitions(d) {
                for kap in crate::arith::partitions(d) {
                    let lamp = Partition::new(lam.clone());
                    let kapp = Partition::new(kap.clone());
                    // h_lambda as an NSymm lift: product of Z_{lambda_i}
                    // (any preimage under Z_n -> h_n works for the pairing)
                    let mut word = NSymFn::one();
                    for &part in lamp.parts() {
                        word = q.nsym_multiply(
                            &word,
                            &NSymFn::single(comp(&[part]), Coef::one()),
                        );
                    }
                    let mk = q
                        .embed_symm(
                            &s,
                            &SymFn::single(Basis::M, kapp.clone(), Coef::one()),
                        )
                        .unwrap();
                    let pairing = q.pair(&word, &mk);
                    let hall = s
                        .hall_inner(
                            &SymFn::single(Basis::H, lamp.clone(), Coef::one()),
                            &SymFn::single(Basis::M, kapp.clone(), Coef::one()),
                        )
                        .unwrap();
                    assert_eq!(pairing, hall, "<h{}, m{}>", lamp, kapp);
                }
            }
        }
    }

    #[test]
    fn frobenius_commutes_with_embedding() {
        let q = QSymm { cap: 16, matrix_cap: 6 };
        let s = Symm::with_cap(16);
        let m21 = SymFn::single(Basis::M, Partition::new(vec![2, 1]), Coef::one());
        let lhs = q.embed_symm(&s, &s.frobenius(2, &m21).unwrap()).unwrap();
        let rhs = q.frobenius(2, &q.embed_symm(&s, &m21).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn generator_grid() {
        let q = qs();
        let report = q.generator_grid_check(4).unwrap();
        for (d, count, ok) in &report {
            assert_eq!(*count, 1usize << (d - 1), "count at weight {}", d);
            assert!(ok, "grid check at weight {}", d);
        }
    }
}
