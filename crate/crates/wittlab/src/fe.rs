//! The functional-equation integrality lemma machinery: recursively defined
//! series f_g(X) = g(X) + sum_i s_i sigma^i f_g(X^{q^i}) and the formal
//! group law F(X,Y) = f^{-1}(f(X) + f(Y)) with its integrality verdict.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Result, WittError};
use crate::qpoly::{QPoly, Var};
use crate::ring::{rational_integrality, FrobeniusFamily, IntegralityVerdict, RingElem, RingSpec};

type SigmaRule = Arc<dyn Fn(&RingElem) -> Result<RingElem> + Send + Sync>;

/// Ingredients for the functional-equation lemma: a coefficient field K
/// containing the subring A, an endomorphism sigma of K, the prime p with
/// q = p^k, and the coefficient sequence s_1, s_2, ....
///
/// The lemma's conditions (sigma(A) in A, sigma(a) = a^q mod p, p^i s_i in A)
/// are caller-asserted; `sanity_check` samples them.
#[derive(Clone)]
pub struct FEIngredients {
    /// The ambient field-like ring K (rationals or polynomials over them).
    pub field: RingSpec,
    /// The subring A of K in which integrality is judged.
    pub subring: RingSpec,
    pub sigma: SigmaRule,
    pub p: u64,
    pub q: u64,
    /// s_1, s_2, ... in K; absent entries are zero.
    pub s: Vec<RingElem>,
}

impl FEIngredients {
    pub fn new(
        field: RingSpec,
        subring: RingSpec,
        sigma: SigmaRule,
        p: u64,
        q: u64,
        s: Vec<RingElem>,
    ) -> Result<FEIngredients> {
        if q == 0 || {
            let mut m = q;
            while m % p == 0 {
                m /= p;
            }
            m != 1
        } {
            return Err(WittError::InvalidSpec(format!(
                "q = {} must be a power of p = {}",
                q, p
            )));
        }
        Ok(FEIngredients {
            field,
            subring,
            sigma,
            p,
            q,
            s,
        })
    }

    /// Identity-sigma ingredients over Q with the single coefficient s_1.
    pub fn rational(p: u64, q: u64, s: Vec<BigRational>) -> Result<FEIngredients> {
        let field = RingSpec::rationals();
        let f2 = field.clone();
        let s: Result<Vec<RingElem>> = s.iter().map(|x| field.from_rational(x)).collect();
        FEIngredients::new(
            field,
            RingSpec::integers(),
            Arc::new(move |x: &RingElem| {
                let _ = &f2;
                Ok(x.clone())
            }),
            p,
            q,
            s?,
        )
    }

    fn s_at(&self, i: usize) -> RingElem {
        self.s
            .get(i - 1)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Sampled check of the lemma's conditions on the supplied elements of A:
    /// sigma maps them into A with sigma(a) = a^q mod p, and p^i s_i lies
    /// in A.
    pub fn sanity_check(&self, samples: &[RingElem]) -> Result<bool> {
        let p = BigInt::from(self.p);
        for a in samples {
            let img = (self.sigma)(&a.lift_rationals()?)?;
            // sigma(a) in A
            if img.lower_into(&self.subring).is_err() {
                return Ok(false);
            }
            let diff = img.sub(&a.lift_rationals()?.pow(self.q as u64))?;
            let lowered = match diff.lower_into(&self.subring) {
                Ok(d) => d,
                Err(_) => return Ok(false),
            };
            if !lowered.is_divisible_by_int(&p) {
                return Ok(false);
            }
        }
        for (i, si) in self.s.iter().enumerate() {
            let scaled = si.mul_int(crate::arith::big_pow(&p, i as u64 + 1));
            if scaled.lower_into(&self.subring).is_err() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A univariate series with zero constant term: coefficient of X^k at
/// index k - 1.
pub type UniSeries = Vec<RingElem>;

/// Compute f_g = g(X) + sum_{i >= 1} s_i sigma^i f_g(X^{q^i}) up to the
/// given order. The recursion stabilizes because X^{q^i} raises valuation.
pub fn fe_series(ing: &FEIngredients, g: &UniSeries, order: usize) -> Result<UniSeries> {
    if !g.is_empty() && g[0].spec() != &ing.field {
        return Err(WittError::SpecMismatch(format!(
            "series over {}, ingredients over {}",
            g[0].spec(),
            ing.field
        )));
    }
    let zero = ing.field.zero();
    let mut padded: UniSeries = g.iter().take(order).cloned().collect();
    padded.resize(order, zero.clone());
    let mut f = padded.clone();
    // q^i <= order bounds the number of contributing recursion layers
    let mut rounds = 0;
    let mut qi = ing.q as usize;
    while qi <= order {
        rounds += 1;
        qi *= ing.q as usize;
    }
    for _ in 0..=rounds {
        let mut next = padded.clone();
        let mut qpow = 1usize;
        for i in 1.. {
            qpow = match qpow.checked_mul(ing.q as usize) {
                Some(v) if v <= order => v,
                _ => break,
            };
            let si = ing.s_at(i);
            if si.is_zero() {
                continue;
            }
            // sigma^i applied to the coefficients of f, then X -> X^{q^i}
            for (k, coeff) in f.iter().enumerate() {
                let deg = (k + 1) * qpow;
                if deg > order {
                    break;
                }
                let mut img = coeff.clone();
                for _ in 0..i {
                    img = (ing.sigma)(&img)?;
                }
                next[deg - 1] = next[deg - 1].add(&si.mul(&img)?)?;
            }
        }
        f = next;
    }
    Ok(f)
}

/// Functional inverse of a series with zero constant term and linear
/// coefficient 1 or -1 (the cases the lemma produces), over Q-scalars.
fn reverse_series(f: &[BigRational]) -> Result<Vec<BigRational>> {
    let order = f.len();
    if order == 0 {
        return Ok(Vec::new());
    }
    let b1 = &f[0];
    if b1.is_zero() {
        return Err(WittError::NotInvertible(
            "linear coefficient must be invertible".into(),
        ));
    }
    // g with f(g(X)) = X, solved coefficient by coefficient
    let mut g: Vec<BigRational> = vec![BigRational::zero(); order];
    g[0] = BigRational::one() / b1;
    for k in 2..=order {
        // coefficient of X^k in f(g(X)) must vanish
        let mut acc = BigRational::zero();
        for (j, fj) in f.iter().enumerate().take(k) {
            let j = j + 1;
            if fj.is_zero() {
                continue;
            }
            // coefficient of X^k in g(X)^j, using only g_1..g_{k-1} when
            // j >= 2 and the unknown g_k only at j = 1
            if j == 1 {
                continue;
            }
            acc += fj * power_coeff(&g, j, k);
        }
        g[k - 1] = -(acc / b1);
        // fix the j = 1 row: f_1 g_k + acc = 0
    }
    Ok(g)
}

/// Coefficient of X^k in (sum g_i X^i)^j.
fn power_coeff(g: &[BigRational], j: usize, k: usize) -> BigRational {
    // dynamic programming over the j factors
    let mut dp = vec![BigRational::zero(); k + 1];
    dp[0] = BigRational::one();
    for _ in 0..j {
        let mut next = vec![BigRational::zero(); k + 1];
        for (d, v) in dp.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (i, gi) in g.iter().enumerate() {
                let deg = d + i + 1;
                if deg > k {
                    break;
                }
                let t = v * gi;
                next[deg] += t;
            }
        }
        dp = next;
    }
    dp[k].clone()
}

/// F(X, Y) = f^{-1}(f(X) + f(Y)) truncated at total degree `order`,
/// together with the integrality verdict of its coefficients.
pub fn fe_formal_group(
    f: &[BigRational],
    order: usize,
) -> Result<(QPoly, IntegralityVerdict)> {
    if f.is_empty() || f[0].is_zero() {
        return Err(WittError::NotInvertible(
            "linear coefficient must be invertible".into(),
        ));
    }
    let finv = reverse_series(f)?;
    // s(X, Y) = f(X) + f(Y) as a bivariate polynomial
    let x = QPoly::var(Var::x(1));
    let y = QPoly::var(Var::y(1));
    let mut s = QPoly::zero();
    for (i, c) in f.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        s = s.add(&x.pow(i as u64 + 1).mul_scalar(c));
        s = s.add(&y.pow(i as u64 + 1).mul_scalar(c));
    }
    s = truncate_total_degree(&s, order);
    // F = finv(s), truncated at each power
    let mut acc = QPoly::zero();
    let mut spow = QPoly::one();
    for (i, c) in finv.iter().enumerate() {
        spow = truncate_total_degree(&spow.mul(&s), order);
        if spow.is_zero() {
            break;
        }
        if !c.is_zero() {
            acc = acc.add(&spow.mul_scalar(c));
        }
        let _ = i;
    }
    // verdict against Z (the declared subring of the lemma's standard
    // rational ingredients)
    let q = RingSpec::rationals();
    let ring = RingSpec::polynomial(q.clone(), vec!["X".into(), "Y".into()])?;
    let elem = qpoly_to_elem(&acc, &ring)?;
    let verdict = rational_integrality(&elem)?;
    Ok((acc, verdict))
}

fn truncate_total_degree(p: &QPoly, order: usize) -> QPoly {
    let mut out = QPoly::zero();
    for (m, c) in p.terms() {
        let deg: u64 = m.iter().map(|&(_, e)| e as u64).sum();
        if deg <= order as u64 {
            out = out.add(&QPoly::monomial(m.clone(), c.clone()));
        }
    }
    out
}

fn qpoly_to_elem(p: &QPoly, ring: &RingSpec) -> Result<RingElem> {
    let q = ring.poly_base().expect("poly ring").clone();
    let mut acc = ring.zero();
    for (m, c) in p.terms() {
        let mut exps = vec![0u32; 2];
        for &(v, e) in m {
            match v.alph {
                b'X' => exps[0] = e,
                b'Y' => exps[1] = e,
                _ => unreachable!(),
            }
        }
        acc = acc.add(&ring.monomial(exps, q.from_rational(c)?)?)?;
    }
    Ok(acc)
}

/// The p-typical series X + X^p/p + X^{p^2}/p^2 + ... of the standard
/// rational ingredients (s_1 = 1/p, all others 0), to the given order.
pub fn standard_p_typical_series(p: u64, order: usize) -> Result<UniSeries> {
    let ing = FEIngredients::rational(
        p,
        p,
        vec![BigRational::new(BigInt::one(), BigInt::from(p))],
    )?;
    let q = RingSpec::rationals();
    let mut g: UniSeries = vec![q.zero(); order];
    g[0] = q.one();
    fe_series(&ing, &g, order)
}

/// Sampled family check reused by the CLI: phi-family style conditions of
/// the existence lemma on the subring.
pub fn family_sanity(family: &FrobeniusFamily, samples: &[RingElem], bound: u64) -> Result<bool> {
    Ok(crate::ring::frobenius_family_check(family, samples, bound)?.ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn p_typical_series() {
        // g = X, s = (1/2, 0, ...), q = p = 2, order 8:
        // X + X^2/2 + X^4/4 + X^8/8
        let f = standard_p_typical_series(2, 8).unwrap();
        let q = RingSpec::rationals();
        let expect: Vec<RingElem> = (1..=8u32)
            .map(|k| match k {
                1 => q.from_i64(1),
                2 => q.from_rational(&qr(1, 2)).unwrap(),
                4 => q.from_rational(&qr(1, 4)).unwrap(),
                8 => q.from_rational(&qr(1, 8)).unwrap(),
                _ => q.zero(),
            })
            .collect();
        assert_eq!(f, expect);
    }

    #[test]
    fn zero_s_gives_g_back() {
        let ing = FEIngredients::rational(2, 2, vec![]).unwrap();
        let q = RingSpec::rationals();
        let g: UniSeries = vec![q.from_i64(3), q.from_i64(-1), q.zero(), q.from_i64(2)];
        assert_eq!(fe_series(&ing, &g, 4).unwrap(), g);
    }

    #[test]
    fn denominators_are_p_powers() {
        // g = X + X^2, p = 3, s_1 = 1/3, order 9: every denominator is a
        // power of 3
        let ing = FEIngredients::rational(3, 3, vec![qr(1, 3)]).unwrap();
        let q = RingSpec::rationals();
        let mut g: UniSeries = vec![q.zero(); 9];
        g[0] = q.one();
        g[1] = q.one();
        let f = fe_series(&ing, &g, 9).unwrap();
        for (k, c) in f.iter().enumerate() {
            let den = c.as_rational().expect("rational").denom().clone();
            let mut d = den.clone();
            while (&d % BigInt::from(3)).is_zero() {
                d /= BigInt::from(3);
            }
            assert!(d.is_one(), "coefficient {} has denominator {}", k + 1, den);
        }
    }

    #[test]
    fn formal_group_of_log() {
        // f = log(1+X): F(X,Y) = X + Y + XY
        let f: Vec<BigRational> = (1..=6i64)
            .map(|n| {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                qr(sign, n)
            })
            .collect();
        let (fg, verdict) = fe_formal_group(&f, 6).unwrap();
        let expect = QPoly::var(Var::x(1))
            .add(&QPoly::var(Var::y(1)))
            .add(&QPoly::var(Var::x(1)).mul(&QPoly::var(Var::y(1))));
        assert_eq!(fg, expect);
        assert!(verdict.is_integral());
    }

    #[test]
    fn formal_group_of_identity() {
        let f = vec![BigRational::one()];
        let (fg, verdict) = fe_formal_group(&f, 4).unwrap();
        let expect = QPoly::var(Var::x(1)).add(&QPoly::var(Var::y(1)));
        assert_eq!(fg, expect);
        assert!(verdict.is_integral());
    }

    #[test]
    fn formal_group_of_p_typical_log_is_integral() {
        for p in [2u64, 3] {
            let f = standard_p_typical_series(p, 8).unwrap();
            let coeffs: Vec<BigRational> = f
                .iter()
                .map(|c| c.as_rational().expect("rational").clone())
                .collect();
            let (_, verdict) = fe_formal_group(&coeffs, 8).unwrap();
            assert!(verdict.is_integral(), "p = {}", p);
        }
    }

    #[test]
    fn ingredient_sanity() {
        let ing = FEIngredients::rational(2, 2, vec![qr(1, 2)]).unwrap();
        let z = RingSpec::integers();
        let samples: Vec<RingElem> = (-3..=3).map(|k| z.from_i64(k)).collect();
        assert!(ing.sanity_check(&samples).unwrap());
        // s_1 = 1/4 breaks the p s_1 in A condition for p = 2
        let bad = FEIngredients::rational(2, 2, vec![qr(1, 4)]).unwrap();
        assert!(!bad.sanity_check(&samples).unwrap());
    }
}
