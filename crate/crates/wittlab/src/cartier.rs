//! Cartier-operator calculus: finite sums of V_m <c> f_n in normal form,
//! their action on one-power-series, addition and composition by the
//! calculating rules, and DE-matrix factorization against the determining
//! example (1 - Tt)^{-1}.

use std::collections::BTreeMap;

use crate::error::{Result, WittError};
use crate::qpoly::Var;
use crate::ring::{RingElem, RingSpec};
use crate::series::{
    lambda_add, series_frobenius, series_homothety, series_verschiebung, BigOneSeries,
};
use crate::univ::teichmuller_sum_polys;
use crate::witt::WittVec;

/// A finite sum of terms V_m <c> f_n in canonical shape: terms sorted by
/// (m, n) with nonzero coefficients, truncated at V-index `bound`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CartierOp {
    pub ring: RingSpec,
    pub bound: u64,
    terms: BTreeMap<(u64, u64), RingElem>,
}

impl CartierOp {
    pub fn zero(ring: &RingSpec, bound: u64) -> CartierOp {
        CartierOp {
            ring: ring.clone(),
            bound,
            terms: BTreeMap::new(),
        }
    }

    /// The single term V_m <c> f_n.
    pub fn term(m: u64, c: RingElem, n: u64, bound: u64) -> CartierOp {
        let ring = c.spec().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() && m <= bound {
            terms.insert((m, n), c);
        }
        CartierOp { ring, bound, terms }
    }

    /// The identity operator <1> = V_1 <1> f_1.
    pub fn identity(ring: &RingSpec, bound: u64) -> CartierOp {
        CartierOp::term(1, ring.one(), 1, bound)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u64, u64), &RingElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: u64, n: u64) -> RingElem {
        self.terms
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }
}

/// Apply V_m <c> f_n termwise and sum in the Lambda group. The output order
/// is the largest one every term supports.
pub fn cartier_apply(op: &CartierOp, a: &BigOneSeries) -> Result<BigOneSeries> {
    if op.ring != a.ring {
        return Err(WittError::SpecMismatch(format!(
            "{} vs {}",
            op.ring, a.ring
        )));
    }
    let d = a.order();
    // a normal form truncated at V-index `bound` is only meaningful to
    // order bound
    let mut out_order = d.min(op.bound as usize);
    for &(m, n) in op.terms.keys() {
        // f_n leaves order floor(D/n); V_m then gives m*that + m - 1
        let term_order = (m as usize) * (d / n as usize) + m as usize - 1;
        out_order = out_order.min(term_order);
    }
    let mut acc = BigOneSeries::one(&a.ring, out_order);
    for ((m, n), c) in &op.terms {
        let f = series_frobenius(*n, a)?;
        let h = series_homothety(c, &f)?;
        let v = series_verschiebung(*m, &h)?;
        acc = lambda_add(&acc, &v.truncate(out_order))?;
    }
    Ok(acc)
}

/// r_i(u, v) from the Teichmueller sum family, evaluated in the ring.
fn r_poly_at(i: u64, u: &RingElem, v: &RingElem, maxd: u64) -> Result<RingElem> {
    let fam = teichmuller_sum_polys(maxd)?;
    let poly = fam
        .poly(i)
        .ok_or_else(|| WittError::NestTooSmall(format!("r_{} beyond bound", i)))?;
    poly.eval(u.spec(), &|var: Var| match var.alph {
        b'X' => u.clone(),
        b'Y' => v.clone(),
        _ => unreachable!(),
    })
}

/// Pointwise sum of operators, brought to normal form row by row: colliding
/// coefficients merge through <u> + <v> = sum over i of V_i <r_i(u,v)> f_i,
/// pushing correction terms into deeper rows.
pub fn cartier_add(op1: &CartierOp, op2: &CartierOp) -> Result<CartierOp> {
    if op1.ring != op2.ring {
        return Err(WittError::SpecMismatch(format!(
            "{} vs {}",
            op1.ring, op2.ring
        )));
    }
    let bound = op1.bound.min(op2.bound);
    // pending multiset of coefficients per (m, n)
    let mut pending: BTreeMap<(u64, u64), Vec<RingElem>> = BTreeMap::new();
    for ((m, n), c) in op1.terms.iter().chain(op2.terms.iter()) {
        if *m <= bound && !c.is_zero() {
            pending.entry((*m, *n)).or_default().push(c.clone());
        }
    }
    let mut out: BTreeMap<(u64, u64), RingElem> = BTreeMap::new();
    while let Some((&(m, n), _)) = pending.iter().next() {
        let mut coeffs = pending.remove(&(m, n)).expect("key present");
        while coeffs.len() > 1 {
            let u = coeffs.pop().expect("len > 1");
            let v = coeffs.pop().expect("len > 1");
            // V_m (<u> + <v>) f_n = sum over i of V_{mi} <r_i(u,v)> f_{ni}
            for i in 1..=(bound / m) {
                let r = r_poly_at(i, &u, &v, bound)?;
                if r.is_zero() {
                    continue;
                }
                if i == 1 {
                    coeffs.push(r);
                } else {
                    pending.entry((m * i, n * i)).or_default().push(r);
                }
            }
            if coeffs.is_empty() {
                break;
            }
        }
        if let Some(c) = coeffs.pop() {
            if !c.is_zero() {
                out.insert((m, n), c);
            }
        }
    }
    Ok(CartierOp {
        ring: op1.ring.clone(),
        bound,
        terms: out,
    })
}

/// Composition, termwise via
/// (V_m <b> f_n)(V_r <c> f_s) = [d] V_{mr/d} <b^{r/d} c^{n/d}> f_{sn/d}
/// with d = gcd(n, r); the central factor [d] is expanded as a d-fold
/// pointwise sum.
pub fn cartier_compose(op1: &CartierOp, op2: &CartierOp) -> Result<CartierOp> {
    if op1.ring != op2.ring {
        return Err(WittError::SpecMismatch(format!(
            "{} vs {}",
            op1.ring, op2.ring
        )));
    }
    let bound = op1.bound.min(op2.bound);
    let mut acc = CartierOp::zero(&op1.ring, bound);
    for ((m, n), b) in &op1.terms {
        for ((r, s), c) in &op2.terms {
            let d = crate::arith::gcd(*n, *r);
            let vm = m * r / d;
            if vm > bound {
                continue;
            }
            let coeff = b.pow(r / d).mul(&c.pow(n / d))?;
            let base = CartierOp::term(vm, coeff, s * n / d, bound);
            let mut multiple = base.clone();
            for _ in 1..d {
                multiple = cartier_add(&multiple, &base)?;
            }
            acc = cartier_add(&acc, &multiple)?;
        }
    }
    Ok(acc)
}

// ---- DE matrices ----

/// The DE-matrix of an operator: finitely many c_{mn} per row m with
/// op((1-Tt)^{-1}) = prod (1 - c_{mn} T^n t^m)^{-1}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DEMatrix {
    pub ring: RingSpec,
    pub entries: BTreeMap<(u64, u64), RingElem>,
}

/// Extend the ring by a fresh variable T for the determining example.
fn extend_with_t(ring: &RingSpec) -> Result<(RingSpec, RingElem)> {
    let base_vars: Vec<String> = ring.poly_vars().map(|v| v.to_vec()).unwrap_or_default();
    let mut name = "T".to_string();
    while base_vars.contains(&name) {
        name.push('_');
    }
    if let (Some(base), Some(vars)) = (ring.poly_base(), ring.poly_vars()) {
        let mut vs = vars.to_vec();
        vs.push(name.clone());
        let ext = RingSpec::polynomial(base.clone(), vs)?;
        let t = ext.var(&name)?;
        Ok((ext, t))
    } else {
        let ext = RingSpec::polynomial(ring.clone(), vec![name.clone()])?;
        let t = ext.var(&name)?;
        Ok((ext, t))
    }
}

fn embed_in_extension(c: &RingElem, ext: &RingSpec) -> Result<RingElem> {
    // scalar base rings embed as constants; polynomial rings gain one slot
    if c.spec().is_polynomial() {
        let src_vars = c.spec().poly_vars().expect("poly").len();
        let dst_vars = ext.poly_vars().expect("poly").len();
        match c.value() {
            crate::ring::Value::Poly(map) => {
                let mut out = ext.zero();
                for (e, coeff) in map {
                    let mut exps = e.clone();
                    exps.resize(dst_vars, 0);
                    let base = ext.poly_base().expect("poly").clone();
                    let celem = RingElem::from_parts(base, coeff.clone());
                    out = out.add(&ext.monomial(exps, celem)?)?;
                }
                let _ = src_vars;
                Ok(out)
            }
            _ => Err(WittError::SpecMismatch("bad polynomial value".into())),
        }
    } else {
        match c.value() {
            crate::ring::Value::Int(n) => Ok(ext.from_bigint(n.clone())),
            crate::ring::Value::Rat(q) => ext.from_rational(q),
            _ => Err(WittError::SpecMismatch("bad scalar value".into())),
        }
    }
}

fn op_in_extension(op: &CartierOp, ext: &RingSpec) -> Result<CartierOp> {
    let mut terms = BTreeMap::new();
    for ((m, n), c) in &op.terms {
        terms.insert((*m, *n), embed_in_extension(c, ext)?);
    }
    Ok(CartierOp {
        ring: ext.clone(),
        bound: op.bound,
        terms,
    })
}

/// Factor op((1-Tt)^{-1}) uniquely as prod (1 - c_{mn} T^n t^m)^{-1},
/// solving for c_{mn} in increasing m, then increasing n.
pub fn de_matrix(op: &CartierOp, nbound: u64) -> Result<DEMatrix> {
    let (ext, t) = extend_with_t(&op.ring)?;
    let ext_op = op_in_extension(op, &ext)?;
    let order = op.bound as usize;
    // determining example needs enough t-order for every f_n in the op
    let max_n = op.terms.keys().map(|&(_, n)| n).max().unwrap_or(1);
    let example = BigOneSeries::geometric(&t, 1, order * max_n as usize);
    let mut image = cartier_apply(&ext_op, &example)?;
    let avail = image.order().min(order);
    let mut entries = BTreeMap::new();
    for m in 1..=avail as u64 {
        for n in 1..=nbound {
            // c_{mn} = coefficient of T^n in the t^m coefficient of the remainder
            let poly = image.coeff(m as usize);
            let c = coeff_of_t_power(poly, &ext, n)?;
            if c.is_zero() {
                continue;
            }
            entries.insert((m, n), c.clone());
            // divide out the factor: multiply by (1 - c T^n t^m)
            let factor_coeff = embed_in_extension(&c, &ext)?.mul(&t.pow(n))?;
            let mut next = image.clone();
            for k in 1..=image.order() {
                let mut v = image.coeff(k).clone();
                if k as u64 > m {
                    v = v.sub(&image.coeff(k - m as usize).mul(&factor_coeff)?)?;
                } else if k as u64 == m {
                    v = v.sub(&factor_coeff)?;
                }
                next.set_coeff(k, v);
            }
            image = next;
        }
        if !image.coeff(m as usize).is_zero() {
            return Err(WittError::Unsupported(format!(
                "DE factorization stalled at row {} (raise the column bound?)",
                m
            )));
        }
    }
    Ok(DEMatrix {
        ring: op.ring.clone(),
        entries,
    })
}

/// Extract the coefficient of T^n (last variable of the extension) and
/// re-express it in the original ring.
fn coeff_of_t_power(poly: &RingElem, ext: &RingSpec, n: u64) -> Result<RingElem> {
    let nvars = ext.poly_vars().expect("poly").len();
    match poly.value() {
        crate::ring::Value::Poly(map) => {
            let base = ext.poly_base().expect("poly").clone();
            if nvars == 1 {
                for (e, c) in map {
                    if e[0] == n as u32 {
                        return Ok(RingElem::from_parts(base, c.clone()));
                    }
                }
                Ok(base.zero())
            } else {
                // original ring was a polynomial ring; strip the last slot
                let orig_vars: Vec<String> = ext.poly_vars().expect("poly")[..nvars - 1].to_vec();
                let orig = RingSpec::polynomial(base.clone(), orig_vars)?;
                let mut out = orig.zero();
                for (e, c) in map {
                    if e[nvars - 1] == n as u32 {
                        let mut exps = e.clone();
                        exps.pop();
                        let celem = RingElem::from_parts(base.clone(), c.clone());
                        out = out.add(&orig.monomial(exps, celem)?)?;
                    }
                }
                Ok(out)
            }
        }
        _ => Err(WittError::SpecMismatch("extension value shape".into())),
    }
}

/// Rebuild the operator sum over V_m <c_mn> f_n from a DE matrix.
pub fn reconstruct(ring: &RingSpec, de: &DEMatrix, bound: u64) -> CartierOp {
    let mut terms = BTreeMap::new();
    for ((m, n), c) in &de.entries {
        if *m <= bound && !c.is_zero() {
            terms.insert((*m, *n), c.clone());
        }
    }
    CartierOp {
        ring: ring.clone(),
        bound,
        terms,
    }
}

/// The operator sum over n of V_n <x_n> f_n attached to a Witt vector,
/// realizing W(A) inside the additive operators (and hence the scalar
/// action of W(A) on Lambda(A)).
pub fn witt_scalar_op(x: &WittVec) -> Result<CartierOp> {
    let indices = x.indexing.indices();
    let bound = *indices.last().expect("nonempty nest");
    let mut terms = BTreeMap::new();
    for idx in indices {
        let c = x.coord(idx);
        if !c.is_zero() {
            terms.insert((idx, idx), c.clone());
        }
    }
    Ok(CartierOp {
        ring: x.ring.clone(),
        bound,
        terms,
    })
}

/// Action of a Witt vector on a series through its operator sum.
pub fn witt_scalar_action(x: &WittVec, a: &BigOneSeries) -> Result<BigOneSeries> {
    cartier_apply(&witt_scalar_op(x)?, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nest::Nest;
    use crate::univ::Indexing;
    use crate::witt::teichmuller;

    fn zz() -> RingSpec {
        RingSpec::integers()
    }

    fn tring() -> (RingSpec, RingElem) {
        let ring = RingSpec::polynomial(zz(), vec!["T".into()]).unwrap();
        let t = ring.var("T").unwrap();
        (ring, t)
    }

    #[test]
    fn apply_single_terms() {
        let (ring, t) = tring();
        let a = BigOneSeries::geometric(&t, 1, 12);
        // V_1 <c> f_1 on (1-Tt)^{-1} -> (1-cTt)^{-1}
        let op = CartierOp::term(1, ring.from_i64(3), 1, 6);
        let img = cartier_apply(&op, &a).unwrap();
        let expect = BigOneSeries::geometric(&t.mul_int(3), 1, img.order());
        assert_eq!(img, expect);
        // V_2 <c> f_3 on (1-Tt)^{-1} -> (1-cT^3 t^2)^{-1}
        let op2 = CartierOp::term(2, ring.from_i64(5), 3, 8);
        let img2 = cartier_apply(&op2, &a).unwrap();
        let expect2 =
            BigOneSeries::geometric(&t.pow(3).mul_int(5), 2, img2.order());
        assert_eq!(img2, expect2);
        // empty operator gives the group zero
        let z = CartierOp::zero(&ring, 6);
        assert!(cartier_apply(&z, &a).unwrap().is_one());
    }

    #[test]
    fn homothety_sum_is_diagonal() {
        // <u> + <v> = sum V_n <r_n(u, v)> f_n; at u = v = 1 the V_3
        // coefficient is r_3(1,1) = -2
        let z = zz();
        let one = CartierOp::identity(&z, 6);
        let two = cartier_add(&one, &one).unwrap();
        assert_eq!(two.coeff(1, 1), z.from_i64(2));
        assert_eq!(two.coeff(2, 2), z.from_i64(-1));
        assert_eq!(two.coeff(3, 3), z.from_i64(-2));
        // r_4(1,1) = -(1 + 2 + 1) = -4
        assert_eq!(two.coeff(4, 4), z.from_i64(-4));
        // semantics: application agrees with pointwise sum on the
        // determining example
        let (ringt, t) = tring();
        let a = BigOneSeries::geometric(&t, 1, 12);
        let top = op_in_extension(&two, &ringt).unwrap();
        let img = cartier_apply(&top, &a).unwrap();
        let direct = lambda_add(&a, &a).unwrap().truncate(img.order());
        assert_eq!(img, direct);
    }

    #[test]
    fn op_plus_zero() {
        let z = zz();
        let op = CartierOp::term(2, z.from_i64(7), 3, 6);
        let sum = cartier_add(&op, &CartierOp::zero(&z, 6)).unwrap();
        assert_eq!(sum, op);
    }

    #[test]
    fn compose_rules() {
        let z = zz();
        // f_2 o V_2 = [2]
        let f2 = CartierOp::term(1, z.one(), 2, 8);
        let v2 = CartierOp::term(2, z.one(), 1, 8);
        let comp = cartier_compose(&f2, &v2).unwrap();
        let two = cartier_add(&CartierOp::identity(&z, 8), &CartierOp::identity(&z, 8)).unwrap();
        assert_eq!(comp, two);
        // f_2 o V_3 = V_3 o f_2
        let v3 = CartierOp::term(3, z.one(), 1, 12);
        let f2b = CartierOp::term(1, z.one(), 2, 12);
        let lhs = cartier_compose(&f2b, &v3).unwrap();
        let rhs = cartier_compose(&v3, &f2b).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.coeff(3, 2), z.one());
        assert_eq!(lhs.num_terms(), 1);
    }

    #[test]
    fn compose_with_coefficients_verified_by_application() {
        // (V_2 <b> f_2) o (V_2 <c> f_2) checked against the composition of
        // applications on the determining example
        let (ring, t) = tring();
        let op1 = CartierOp::term(2, ring.from_i64(3), 2, 6);
        let op2 = CartierOp::term(2, ring.from_i64(5), 2, 6);
        let comp = cartier_compose(&op1, &op2).unwrap();
        let a = BigOneSeries::geometric(&t, 1, 24);
        let step = cartier_apply(&op2, &a).unwrap();
        let two_step = cartier_apply(&op1, &step).unwrap();
        let direct = cartier_apply(&comp, &a).unwrap();
        let order = two_step.order().min(direct.order());
        assert_eq!(direct.truncate(order), two_step.truncate(order));
    }

    #[test]
    fn de_matrix_examples() {
        let z = zz();
        // f_2 -> single entry c_{1,2} = 1
        let f2 = CartierOp::term(1, z.one(), 2, 6);
        let de = de_matrix(&f2, 6).unwrap();
        assert_eq!(de.entries.len(), 1);
        assert_eq!(de.entries[&(1, 2)], z.one());
        // V_2 -> single entry c_{2,1} = 1
        let v2 = CartierOp::term(2, z.one(), 1, 6);
        let de2 = de_matrix(&v2, 6).unwrap();
        assert_eq!(de2.entries.len(), 1);
        assert_eq!(de2.entries[&(2, 1)], z.one());
        // [2] -> diagonal entries r_m(1,1): 2, -1, -2, -4, ...
        let two = cartier_add(&CartierOp::identity(&z, 5), &CartierOp::identity(&z, 5)).unwrap();
        let de3 = de_matrix(&two, 5).unwrap();
        assert_eq!(de3.entries[&(1, 1)], z.from_i64(2));
        assert_eq!(de3.entries[&(2, 2)], z.from_i64(-1));
        assert_eq!(de3.entries[&(3, 3)], z.from_i64(-2));
        assert_eq!(de3.entries[&(4, 4)], z.from_i64(-4));
        // roundtrip
        let back = reconstruct(&z, &de3, 5);
        assert_eq!(back, two);
    }

    #[test]
    fn scalar_action_examples() {
        let z = zz();
        let (ringt, t) = tring();
        // x = teich(u): action = <u>
        let teich5 = teichmuller(&ringt.from_i64(5), Indexing::Big(Nest::upto(4)));
        let a = BigOneSeries::geometric(&t, 1, 12);
        let acted = witt_scalar_action(&teich5, &a).unwrap();
        let expect = series_homothety(&ringt.from_i64(5), &a)
            .unwrap()
            .truncate(acted.order());
        assert_eq!(acted, expect);
        // x = one: identity operator
        let one = crate::witt::WittVec::one(&ringt, Indexing::Big(Nest::upto(4)));
        let acted1 = witt_scalar_action(&one, &a).unwrap();
        assert_eq!(acted1, a.truncate(acted1.order()));
        // x with only x_2 = 1: V_2 f_2
        let mut e2 = crate::witt::WittVec::zero(&ringt, Indexing::Big(Nest::upto(4)));
        e2.set_coord(2, ringt.one());
        let acted2 = witt_scalar_action(&e2, &a).unwrap();
        let v2f2 = series_verschiebung(2, &series_frobenius(2, &a).unwrap()).unwrap();
        let order = acted2.order().min(v2f2.order());
        assert_eq!(acted2.truncate(order), v2f2.truncate(order));
        let _ = z;
    }
}
