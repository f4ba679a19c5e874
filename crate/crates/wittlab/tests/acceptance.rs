//! Acceptance suite: one test per criterion, each printing a PASS line.
//! All checks are exact (tolerance zero).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use wittlab::cartier::{
    cartier_add, cartier_apply, cartier_compose, de_matrix, reconstruct, witt_scalar_action,
    CartierOp,
};
use wittlab::fe::{fe_formal_group, standard_p_typical_series};
use wittlab::necklace::{
    necklace_identity_check, necklace_number, necklace_number_brute, NecklaceIdentity, NecklaceVec,
};
use wittlab::nest::Nest;
use wittlab::qpoly::{QPoly, Var};
use wittlab::ring::{RingElem, RingSpec};
use wittlab::series::{lambda_add, series_homothety, BigOneSeries};
use wittlab::symm::{
    gale_ryser, search_01_matrix, Basis, Coef, HirzebruchMode, Partition, SymFn, Symm,
};
use wittlab::univ::Indexing;
use wittlab::verify::{
    run_suite, suite_ah_comonad, suite_diagram_19_14, suite_dual_bases,
    suite_frobenius_congruences, suite_klein4, suite_product_formula, suite_r_polys,
    suite_schur_sign, suite_shuffle, Sampler,
};
use wittlab::witt::{
    dold_test, from_ghost, ghost, p_typify, teich_digit_sum, teichmuller_lift_mod, witt_add,
    witt_mul, GhostVec, WittVec,
};

fn report(criterion: u32, description: &str, pass: bool) {
    println!(
        "CRITERION {:>2}: {} - {}",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        description
    );
    assert!(pass, "criterion {} failed: {}", criterion, description);
}

fn zz() -> RingSpec {
    RingSpec::integers()
}

#[test]
fn criterion_01_teichmuller_sum_polynomials() {
    let suite = suite_r_polys(6).unwrap();
    report(
        1,
        "r_1..r_6 equal the reference list verbatim",
        suite.all_pass(),
    );
}

#[test]
fn criterion_02_universal_integrality_and_congruences() {
    let t0 = std::time::Instant::now();
    let suite = suite_frobenius_congruences().unwrap();
    let elapsed = t0.elapsed();
    report(
        2,
        &format!(
            "structure polynomials on {{1..12}} and p-adic length 4 are integral with congruences ({:?})",
            elapsed
        ),
        suite.all_pass() && elapsed.as_secs() <= 30,
    );
}

#[test]
fn criterion_03_operator_relations() {
    let suite = suite_product_formula().unwrap();
    let relations: Vec<_> = suite
        .checks
        .iter()
        .filter(|c| !c.label.starts_with("explicit product"))
        .collect();
    report(
        3,
        "Frobenius/Verschiebung/homothety relations and the product formula as generic identities",
        relations.iter().all(|c| c.pass),
    );
}

#[test]
fn criterion_04_witt_explicit_product() {
    let suite = suite_product_formula().unwrap();
    let explicit: Vec<_> = suite
        .checks
        .iter()
        .filter(|c| c.label.starts_with("explicit product"))
        .collect();
    report(
        4,
        "Witt's explicit product formula with exponent -rs/m for r,s <= 4 at order 12",
        explicit.len() == 16 && explicit.iter().all(|c| c.pass),
    );
}

#[test]
fn criterion_05_padic_structure_over_fp() {
    let mut pass = true;
    for (p, maxlen) in [(2u64, 4u32), (3, 3)] {
        let fp = RingSpec::modular(BigInt::from(p)).unwrap();
        for len in 1..=maxlen {
            let total = p.pow(len);
            if total > 27 {
                continue;
            }
            let idx = Indexing::Padic { p, len: len - 1 };
            // p * 1 = (0, 1, 0, ...)
            let pone =
                wittlab::witt::integer_multiple_of_one(&fp, &idx, &BigInt::from(p)).unwrap();
            let mut expect = WittVec::zero(&fp, idx.clone());
            if len >= 2 {
                expect.set_coord(1, fp.from_i64(1));
            }
            pass &= pone == expect;
            // enumerate all vectors
            let all: Vec<WittVec> = (0..total)
                .map(|code| {
                    let mut c = code;
                    let mut coords = BTreeMap::new();
                    for i in 0..len as u64 {
                        coords.insert(i, fp.from_i64((c % p) as i64));
                        c /= p;
                    }
                    WittVec::new(fp.clone(), idx.clone(), coords).unwrap()
                })
                .collect();
            // additive group is Z/p^n: the unit generates
            let one = WittVec::one(&fp, idx.clone());
            let mut acc = one.clone();
            let mut order = 1u64;
            while !acc.is_zero() {
                acc = witt_add(&acc, &one).unwrap();
                order += 1;
                assert!(order <= total + 1);
            }
            pass &= order == total;
            // f_p V_p = [p] = V_p f_p on every vector
            for a in &all {
                let vp = wittlab::witt::verschiebung(p, a).unwrap();
                let fv = wittlab::witt::frobenius(p, &vp).unwrap();
                let pa = wittlab::witt::nmult(p, a).unwrap();
                pass &= fv == pa;
                let fp_a = wittlab::witt::frobenius(p, a).unwrap();
                let vf = wittlab::witt::verschiebung(p, &fp_a).unwrap();
                pass &= vf == pa;
            }
            // units are exactly the vectors with nonzero first coordinate
            for a in &all {
                let has_inverse = all
                    .iter()
                    .any(|b| witt_mul(a, b).unwrap() == one);
                let expect_unit = !a.coord(0).is_zero();
                pass &= has_inverse == expect_unit;
            }
        }
    }
    report(
        5,
        "p-adic structure over F_p: p = (0,1,0,...), f_p V_p = [p] = V_p f_p, cyclic additive group, units",
        pass,
    );
}

#[test]
fn criterion_06_teichmuller_lifts_and_digits() {
    let mut pass = true;
    pass &= teichmuller_lift_mod(&BigInt::from(2), 5, 3) == BigInt::from(57);
    pass &= teichmuller_lift_mod(&BigInt::from(2), 3, 4) == BigInt::from(80);
    // multiplicativity and fixed-point property
    for (p, k) in [(5u64, 3u32), (3, 4)] {
        let modulus = BigInt::from(p).pow(k);
        for a in 0..p {
            let t = teichmuller_lift_mod(&BigInt::from(a), p, k);
            let tp = t.modpow(&BigInt::from(p), &modulus);
            pass &= tp == t;
        }
    }
    // digit addition reproduces integer addition of lifts; the library
    // verifies the identity internally and errors on mismatch
    for p in [2u64, 3, 5] {
        for k in 1..=4u32 {
            for a in 0..p {
                for b in 0..p {
                    if teich_digit_sum(&BigInt::from(a), &BigInt::from(b), p, k).is_err() {
                        pass = false;
                    }
                }
            }
        }
    }
    report(
        6,
        "Teichmuller lifts t(2) = 57 mod 125, 80 mod 81; digit addition matches for p in {2,3,5}, k <= 4",
        pass,
    );
}

#[test]
fn criterion_07_symmetric_function_tables() {
    let s = Symm::with_cap(8);
    let mut pass = true;
    // weight-3 and weight-4 s<->m and s<->h matrices:
    // entry (i, j) = coefficient of basis_{lambda_i} in s_{lambda_j},
    // partitions in reverse-lexicographic order
    let expected_sm3: [[i64; 3]; 3] = [[1, 0, 0], [1, 1, 0], [1, 2, 1]];
    let expected_sh3: [[i64; 3]; 3] = [[1, -1, 1], [0, 1, -2], [0, 0, 1]];
    let expected_sm4: [[i64; 5]; 5] = [
        [1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [1, 1, 1, 0, 0],
        [1, 2, 1, 1, 0],
        [1, 3, 2, 3, 1],
    ];
    let expected_sh4: [[i64; 5]; 5] = [
        [1, -1, 0, 1, -1],
        [0, 1, -1, -1, 2],
        [0, 0, 1, -1, 1],
        [0, 0, 0, 1, -3],
        [0, 0, 0, 0, 1],
    ];
    let check_matrix = |weight: u32, target: Basis, expected: &[&[i64]]| -> bool {
        let parts: Vec<Partition> = wittlab::arith::partitions(weight)
            .into_iter()
            .map(Partition::new)
            .collect();
        for (j, lam) in parts.iter().enumerate() {
            let sf = SymFn::single(Basis::S, lam.clone(), Coef::one());
            let img = s.convert(&sf, target).unwrap();
            for (i, mu) in parts.iter().enumerate() {
                if img.coeff(mu) != BigRational::from_integer(BigInt::from(expected[i][j])) {
                    return false;
                }
            }
        }
        true
    };
    pass &= check_matrix(
        3,
        Basis::M,
        &expected_sm3.iter().map(|r| &r[..]).collect::<Vec<_>>(),
    );
    pass &= check_matrix(
        3,
        Basis::H,
        &expected_sh3.iter().map(|r| &r[..]).collect::<Vec<_>>(),
    );
    pass &= check_matrix(
        4,
        Basis::M,
        &expected_sm4.iter().map(|r| &r[..]).collect::<Vec<_>>(),
    );
    pass &= check_matrix(
        4,
        Basis::H,
        &expected_sh4.iter().map(|r| &r[..]).collect::<Vec<_>>(),
    );
    // the two displayed Schur expansions
    let s31 = s.schur(&Partition::new(vec![3, 1])).unwrap();
    pass &= s31.coeff(&Partition::new(vec![3, 1])) == Coef::one()
        && s31.coeff(&Partition::new(vec![2, 2])) == Coef::one()
        && s31.coeff(&Partition::new(vec![2, 1, 1])) == BigRational::from_integer(BigInt::from(2))
        && s31.coeff(&Partition::new(vec![1, 1, 1, 1])) == BigRational::from_integer(BigInt::from(3));
    let s211 = s
        .convert(
            &SymFn::single(Basis::S, Partition::new(vec![2, 1, 1]), Coef::one()),
            Basis::H,
        )
        .unwrap();
    pass &= s211.coeff(&Partition::new(vec![4])) == Coef::one()
        && s211.coeff(&Partition::new(vec![3, 1])) == -Coef::one()
        && s211.coeff(&Partition::new(vec![2, 2])) == -Coef::one()
        && s211.coeff(&Partition::new(vec![2, 1, 1])) == Coef::one();
    // footnote-30 monomial products
    let m = |parts: &[u32]| SymFn::single(Basis::M, Partition::new(parts.to_vec()), Coef::one());
    let prod = s.multiply(&m(&[2, 1]), &m(&[1]), Basis::M).unwrap();
    pass &= prod.coeff(&Partition::new(vec![2, 2])) == BigRational::from_integer(BigInt::from(2))
        && prod.coeff(&Partition::new(vec![3, 1])) == Coef::one()
        && prod.coeff(&Partition::new(vec![2, 1, 1])) == BigRational::from_integer(BigInt::from(2))
        && prod.terms.len() == 3;
    let prod2 = s.multiply(&m(&[3, 1]), &m(&[1]), Basis::M).unwrap();
    pass &= prod2.coeff(&Partition::new(vec![4, 1])) == Coef::one()
        && prod2.coeff(&Partition::new(vec![3, 2])) == Coef::one()
        && prod2.coeff(&Partition::new(vec![3, 1, 1])) == BigRational::from_integer(BigInt::from(2))
        && prod2.terms.len() == 3;
    // mu_S(h_2)
    let t = s.comul_sum(&SymFn::generator(Basis::H, 2)).unwrap();
    pass &= t.terms.len() == 3
        && t.terms[&(Partition::empty(), Partition::new(vec![2]))] == Coef::one()
        && t.terms[&(Partition::new(vec![1]), Partition::new(vec![1]))] == Coef::one()
        && t.terms[&(Partition::new(vec![2]), Partition::empty())] == Coef::one();
    // mu_P(h_2) and mu_P(h_3)
    let tp2 = s.comul_prod(&SymFn::generator(Basis::H, 2)).unwrap();
    let p2 = Partition::new(vec![2]);
    let p11 = Partition::new(vec![1, 1]);
    pass &= tp2.terms[&(p2.clone(), p2.clone())] == BigRational::from_integer(BigInt::from(2))
        && tp2.terms[&(p2.clone(), p11.clone())] == -Coef::one()
        && tp2.terms[&(p11.clone(), p2.clone())] == -Coef::one()
        && tp2.terms[&(p11.clone(), p11.clone())] == Coef::one()
        && tp2.terms.len() == 4;
    // mu_P(h_3) = sum over lambda |- 3 of h_lambda (x) m_lambda with
    // m_3 = 3h3 - 3h21 + h111, m_21 = -3h3 + 5h21 - 2h111,
    // m_111 = h3 - 2h21 + h111; cross-checked below against the
    // z^-1 p (x) p expansion
    let tp3 = s.comul_prod(&SymFn::generator(Basis::H, 3)).unwrap();
    let p3 = Partition::new(vec![3]);
    let p21 = Partition::new(vec![2, 1]);
    let p111 = Partition::new(vec![1, 1, 1]);
    pass &= tp3.terms[&(p3.clone(), p3.clone())] == BigRational::from_integer(BigInt::from(3))
        && tp3.terms[&(p3.clone(), p21.clone())] == BigRational::from_integer(BigInt::from(-3))
        && tp3.terms[&(p21.clone(), p3.clone())] == BigRational::from_integer(BigInt::from(-3))
        && tp3.terms[&(p3.clone(), p111.clone())] == Coef::one()
        && tp3.terms[&(p111.clone(), p3.clone())] == Coef::one()
        && tp3.terms[&(p21.clone(), p21.clone())] == BigRational::from_integer(BigInt::from(5))
        && tp3.terms[&(p21.clone(), p111.clone())] == BigRational::from_integer(BigInt::from(-2))
        && tp3.terms[&(p111.clone(), p21.clone())] == BigRational::from_integer(BigInt::from(-2))
        && tp3.terms[&(p111.clone(), p111.clone())] == Coef::one();
    // the three expansions of mu_P agree: compare against
    // sum over lambda of z_lambda^-1 p_lambda (x) p_lambda for h_2, h_3
    for n in [2u32, 3] {
        let hn = s.comul_prod(&SymFn::generator(Basis::H, n)).unwrap();
        let got = hn.convert(&s, Basis::P, Basis::P).unwrap();
        let mut expect = wittlab::symm::SymTensor::zero(Basis::P, Basis::P);
        for lam in wittlab::arith::partitions(n) {
            let lam = Partition::new(lam);
            expect.insert(
                lam.clone(),
                lam.clone(),
                BigRational::new(BigInt::one(), lam.z()),
            );
        }
        pass &= got == expect;
        // and against the Schur route: sum over lambda of s_lambda (x) s_lambda
        let got_s = hn.convert(&s, Basis::S, Basis::S).unwrap();
        let mut expect_s = wittlab::symm::SymTensor::zero(Basis::S, Basis::S);
        for lam in wittlab::arith::partitions(n) {
            let lam = Partition::new(lam);
            expect_s.insert(lam.clone(), lam.clone(), Coef::one());
        }
        pass &= got_s == expect_s;
    }
    report(
        7,
        "weight 3/4 s<->m and s<->h matrices, the printed expansions, monomial products, both comultiplications",
        pass,
    );
}

#[test]
fn criterion_08_dual_bases() {
    let suite = suite_dual_bases().unwrap();
    report(
        8,
        "delta pairings through weight 6 and the Cauchy generating identity through degree 5",
        suite.all_pass(),
    );
}

#[test]
fn criterion_09_schur_sign() {
    let t0 = std::time::Instant::now();
    let suite = suite_schur_sign(8).unwrap();
    let elapsed = t0.elapsed();
    report(
        9,
        &format!("-x_n is Schur positive for 2 <= n <= 8 and x_1 = s_(1) ({:?})", elapsed),
        suite.all_pass() && elapsed.as_secs() <= 30,
    );
}

#[test]
fn criterion_10_klein_four_group() {
    let suite = suite_klein4().unwrap();
    report(
        10,
        "the four Hopf automorphisms close under the Klein table and fix the Hopf structure",
        suite.all_pass(),
    );
}

#[test]
fn criterion_11_qsymm() {
    let suite = suite_shuffle().unwrap();
    report(
        11,
        "overlapping shuffle expansions, (0,alpha)-matrix comultiplication, duality laws, lambda and the generator grid",
        suite.all_pass(),
    );
}

#[test]
fn criterion_12_lambda_ring_engine() {
    let suite = suite_ah_comonad().unwrap();
    report(
        12,
        "iterate(2,2), Adams = Frobenius, sigma_t = (1-t)^{-x}, AH comonad laws, Frobenius-like property",
        suite.all_pass(),
    );
}

#[test]
fn criterion_13_ghost_realizability() {
    let z = zz();
    let mut pass = true;
    // Lucas numbers: traces of powers of [[1,1],[1,0]]
    let mut lucas: Vec<BigInt> = Vec::new();
    let (mut a, mut b) = (BigInt::from(1), BigInt::from(3)); // L_1, L_2
    lucas.push(a.clone());
    lucas.push(b.clone());
    while lucas.len() < 24 {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
        lucas.push(b.clone());
    }
    let rep = dold_test(&lucas, 24).unwrap();
    pass &= rep.pass() && rep.forms_agree;
    // from_ghost of (1,3,4,7) is the all-ones vector on nest {1..4}
    let ghost_vec = GhostVec {
        ring: z.clone(),
        indexing: Indexing::Big(Nest::upto(4)),
        values: [(1u64, 1i64), (2, 3), (3, 4), (4, 7)]
            .into_iter()
            .map(|(i, v)| (i, z.from_i64(v)))
            .collect(),
    };
    let x = from_ghost(&ghost_vec).unwrap();
    pass &= (1..=4u64).all(|i| x.coord(i) == &z.from_i64(1));
    // b_n = n fails at n = 2
    let linear: Vec<BigInt> = (1..=6).map(BigInt::from).collect();
    let rep2 = dold_test(&linear, 6).unwrap();
    pass &= !rep2.pass() && rep2.first_failure == Some(2);
    // the Moebius and gcd-sum forms agree on 100 random sequences
    let mut rng = Sampler::new(0x995);
    for _ in 0..100 {
        let seq: Vec<BigInt> = (0..12).map(|_| BigInt::from(rng.small(50))).collect();
        let r = dold_test(&seq, 12).unwrap();
        pass &= r.forms_agree;
    }
    report(
        13,
        "Lucas passes to n = 24 and unghosts to all-ones; b_n = n fails at 2; both integrality forms agree",
        pass,
    );
}

#[test]
fn criterion_14_necklace() {
    let mut pass = true;
    // brute-force necklace counts
    for alpha in 1..=4u64 {
        for n in 1..=10u64 {
            pass &= necklace_number(&BigInt::from(alpha), n)
                == BigInt::from(necklace_number_brute(alpha, n));
        }
    }
    // the product identity up to n = 12 for alpha, beta <= 4
    for alpha in 1..=4i64 {
        for beta in 1..=4i64 {
            pass &=
                necklace_identity_check(NecklaceIdentity::Product, alpha, beta, 0, 12).unwrap();
        }
    }
    pass &= necklace_number(&BigInt::from(6), 4) == BigInt::from(315);
    // cyclotomic to order 12, Strehl to order 10
    pass &= necklace_identity_check(NecklaceIdentity::Cyclotomic, 2, 0, 0, 12).unwrap();
    pass &= necklace_identity_check(NecklaceIdentity::Strehl, 2, 3, 0, 10).unwrap();
    // ghost multiplicativity on 50 random pairs
    let z = zz();
    let mut rng = Sampler::new(0x17);
    for _ in 0..50 {
        let a = NecklaceVec::new(&z, (0..8).map(|_| z.from_i64(rng.small(5))).collect()).unwrap();
        let b = NecklaceVec::new(&z, (0..8).map(|_| z.from_i64(rng.small(5))).collect()).unwrap();
        let ga = a.ghost().unwrap();
        let gb = b.ghost().unwrap();
        let gp = a.mul(&b).unwrap().ghost().unwrap();
        for i in 0..8 {
            pass &= gp[i] == ga[i].mul(&gb[i]).unwrap();
        }
    }
    report(
        14,
        "necklace counts match brute force; product/cyclotomic/Strehl identities; Nr ghost multiplicativity",
        pass,
    );
}

#[test]
fn criterion_15_burnside_diagram() {
    let suite = suite_diagram_19_14().unwrap();
    report(
        15,
        "diagram legs on 25 random vectors at N = 12; S^2 C_2; syP coefficients; T intertwines V/f with ind/res",
        suite.all_pass(),
    );
}

#[test]
fn criterion_16_functional_equation() {
    let q = RingSpec::rationals();
    let mut pass = true;
    // fe_series reproduces X + X^p/p + X^{p^2}/p^2 + ... to order p^3
    for p in [2u64, 3] {
        let order = (p * p * p) as usize;
        let f = standard_p_typical_series(p, order).unwrap();
        for (k, c) in f.iter().enumerate() {
            let deg = k + 1;
            let mut expect = q.zero();
            let mut power = 1usize;
            let mut denom = BigInt::one();
            loop {
                if power == deg {
                    expect = q
                        .from_rational(&BigRational::new(BigInt::one(), denom.clone()))
                        .unwrap();
                    break;
                }
                if power > deg {
                    break;
                }
                power *= p as usize;
                denom *= BigInt::from(p);
            }
            pass &= c == &expect;
        }
    }
    // fe_formal_group(log(1+X)) = X + Y + XY
    let log: Vec<BigRational> = (1..=6i64)
        .map(|n| BigRational::new(BigInt::from(if n % 2 == 1 { 1 } else { -1 }), BigInt::from(n)))
        .collect();
    let (fg, verdict) = fe_formal_group(&log, 6).unwrap();
    let expect = QPoly::var(Var::x(1))
        .add(&QPoly::var(Var::y(1)))
        .add(&QPoly::var(Var::x(1)).mul(&QPoly::var(Var::y(1))));
    pass &= fg == expect && verdict.is_integral();
    // the p-typical formal group has integer coefficients to order 8
    for p in [2u64, 3] {
        let f = standard_p_typical_series(p, 8).unwrap();
        let coeffs: Vec<BigRational> = f
            .iter()
            .map(|c| c.as_rational().unwrap().clone())
            .collect();
        let (_, verdict) = fe_formal_group(&coeffs, 8).unwrap();
        pass &= verdict.is_integral();
    }
    report(
        16,
        "fe_series matches the p-typical logarithm; F_log = X+Y+XY; F from the p-typical log is integral",
        pass,
    );
}

#[test]
fn criterion_17_p_typification() {
    let q = RingSpec::rationals();
    let nest = Nest::upto(12);
    let mut rng = Sampler::new(0x1417);
    let mut pass = true;
    for p in [2u64, 3] {
        for sample in 0..20 {
            let coords: BTreeMap<u64, RingElem> = nest
                .indices()
                .iter()
                .map(|&i| {
                    let num = rng.small(6);
                    let den = 1 + (rng.next_u64() % 4) as i64;
                    (
                        i,
                        q.from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
                            .unwrap(),
                    )
                })
                .collect();
            let x = WittVec::new(q.clone(), Indexing::Big(nest.clone()), coords).unwrap();
            let px = p_typify(&x, p).unwrap();
            let gx = ghost(&x).unwrap();
            let gp = ghost(&px).unwrap();
            for r in 1..=12u64 {
                let mut m = r;
                while m % p == 0 {
                    m /= p;
                }
                let expect = if m == 1 {
                    gx.values[&r].clone()
                } else {
                    q.zero()
                };
                pass &= gp.values[&r] == expect;
            }
            // idempotency
            pass &= p_typify(&px, p).unwrap() == px;
            let _ = sample;
        }
    }
    report(
        17,
        "p-typification masks ghost components to p-powers for r <= 12 and is idempotent",
        pass,
    );
}

#[test]
fn criterion_18_hirzebruch() {
    let s = Symm::with_cap(8);
    let mut pass = true;
    // Todd: K_1 = e_1/2, K_2 = (e_1^2 + e_2)/12
    let todd = wittlab::cli::todd_series(4);
    let k1 = s
        .hirzebruch_sequence(&todd, 1, HirzebruchMode::Multiplicative)
        .unwrap();
    pass &= k1.coeff(&Partition::new(vec![1])) == BigRational::new(1.into(), 2.into())
        && k1.terms.len() == 1;
    let k2 = s
        .hirzebruch_sequence(&todd, 2, HirzebruchMode::Multiplicative)
        .unwrap();
    pass &= k2.coeff(&Partition::new(vec![1, 1])) == BigRational::new(1.into(), 12.into())
        && k2.coeff(&Partition::new(vec![2])) == BigRational::new(1.into(), 12.into())
        && k2.terms.len() == 2;
    // Q = 1 + z gives K_n = e_n
    let q1z = vec![Coef::one(), Coef::one()];
    for n in 1..=6u32 {
        let k = s
            .hirzebruch_sequence(&q1z, n, HirzebruchMode::Multiplicative)
            .unwrap();
        pass &= k.terms.len() == 1 && k.coeff(&Partition::new(vec![n])) == Coef::one();
    }
    report(18, "Todd K_1 = e_1/2, K_2 = (e_1^2+e_2)/12; Q = 1+z gives K_n = e_n", pass);
}

#[test]
fn criterion_19_cartier_calculus() {
    let z = zz();
    let ring = RingSpec::polynomial(z.clone(), vec!["T".into()]).unwrap();
    let t = ring.var("T").unwrap();
    let mut rng = Sampler::new(0x1519);
    let mut pass = true;
    // DE roundtrip on 20 random finite operators at bidegree <= (6,6)
    for _ in 0..20 {
        let mut op = CartierOp::zero(&z, 6);
        let nterms = 1 + (rng.next_u64() % 4) as usize;
        for _ in 0..nterms {
            let m = 1 + rng.next_u64() % 6;
            let n = 1 + rng.next_u64() % 6;
            let c = z.from_i64(rng.small(5));
            op = cartier_add(&op, &CartierOp::term(m, c, n, 6)).unwrap();
        }
        let de = de_matrix(&op, 12).unwrap();
        let back = reconstruct(&z, &de, 6);
        pass &= back == op;
    }
    // add semantics on the determining example
    let example = BigOneSeries::geometric(&t, 1, 36);
    for _ in 0..5 {
        let op1 = CartierOp::term(
            1 + rng.next_u64() % 3,
            ring.from_i64(rng.small(4)),
            1 + rng.next_u64() % 3,
            6,
        );
        let op2 = CartierOp::term(
            1 + rng.next_u64() % 3,
            ring.from_i64(rng.small(4)),
            1 + rng.next_u64() % 3,
            6,
        );
        let sum = cartier_add(&op1, &op2).unwrap();
        let lhs = cartier_apply(&sum, &example).unwrap();
        let r1 = cartier_apply(&op1, &example).unwrap();
        let r2 = cartier_apply(&op2, &example).unwrap();
        let order = lhs.order().min(r1.order()).min(r2.order());
        let rhs = lambda_add(&r1.truncate(order), &r2.truncate(order)).unwrap();
        pass &= lhs.truncate(order) == rhs;
        // compose semantics
        let comp = cartier_compose(&op1, &op2).unwrap();
        let lhs2 = cartier_apply(&comp, &example).unwrap();
        let step = cartier_apply(&op2, &example).unwrap();
        let two_step = cartier_apply(&op1, &step).unwrap();
        let order2 = lhs2.order().min(two_step.order());
        pass &= lhs2.truncate(order2) == two_step.truncate(order2);
    }
    // witt_scalar_action of teich(u) is the homothety <u>
    let teich_u = wittlab::witt::teichmuller(&ring.from_i64(7), Indexing::Big(Nest::upto(6)));
    let acted = witt_scalar_action(&teich_u, &example).unwrap();
    let expect = series_homothety(&ring.from_i64(7), &example)
        .unwrap()
        .truncate(acted.order());
    pass &= acted == expect;
    // the action respects the Witt ring structure on samples
    let mk = |vals: &[i64]| -> WittVec {
        let coords: BTreeMap<u64, RingElem> = (1..=6u64)
            .zip(vals.iter().map(|&v| ring.from_i64(v)))
            .collect();
        WittVec::new(ring.clone(), Indexing::Big(Nest::upto(6)), coords).unwrap()
    };
    let xv = mk(&[2, -1, 0, 3, 1, -2]);
    let yv = mk(&[1, 2, -1, 0, 2, 1]);
    // action(x + y) = action(x) + action(y)
    let lhs = witt_scalar_action(&witt_add(&xv, &yv).unwrap(), &example).unwrap();
    let ra = witt_scalar_action(&xv, &example).unwrap();
    let rb = witt_scalar_action(&yv, &example).unwrap();
    let order = lhs.order().min(ra.order()).min(rb.order());
    pass &= lhs.truncate(order) == lambda_add(&ra.truncate(order), &rb.truncate(order)).unwrap();
    // action(x . y) = action(x) o action(y)
    let lhs2 = witt_scalar_action(&witt_mul(&xv, &yv).unwrap(), &example).unwrap();
    let inner = witt_scalar_action(&yv, &example).unwrap();
    let outer = witt_scalar_action(&xv, &inner).unwrap();
    let order2 = lhs2.order().min(outer.order());
    pass &= lhs2.truncate(order2) == outer.truncate(order2);
    report(
        19,
        "DE roundtrips, add/compose semantics on the determining example, Witt scalar action",
        pass,
    );
}

#[test]
fn criterion_20_gale_ryser() {
    let t0 = std::time::Instant::now();
    let mut pass = true;
    let mut pairs = 0usize;
    for w in 1..=8u32 {
        let parts: Vec<Partition> = wittlab::arith::partitions(w)
            .into_iter()
            .map(Partition::new)
            .collect();
        for alpha in &parts {
            for beta in &parts {
                pairs += 1;
                let (verdict, witness) = gale_ryser(alpha, beta).unwrap();
                let found = search_01_matrix(alpha, beta);
                pass &= verdict == found.is_some();
                if let Some(m) = &witness {
                    // verify the witness row and column sums
                    let rows: Vec<u32> =
                        m.iter().map(|r| r.iter().map(|&x| x as u32).sum()).collect();
                    pass &= rows == alpha.parts();
                    for (j, &b) in beta.parts().iter().enumerate() {
                        let col: u32 = m.iter().map(|r| r[j] as u32).sum();
                        pass &= col == b;
                    }
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    report(
        20,
        &format!(
            "Gale-Ryser verdict equals exhaustive search on {} pairs of weight <= 8 ({:?})",
            pairs, elapsed
        ),
        pass && elapsed.as_secs() <= 60,
    );
}

#[test]
fn verify_suites_match_criteria() {
    // every named CLI suite runs green
    for name in wittlab::verify::SUITE_NAMES {
        let suite = run_suite(name, 8).unwrap();
        assert!(
            suite.all_pass(),
            "suite {} failed: {:?}",
            name,
            suite
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.label.clone())
                .collect::<Vec<_>>()
        );
    }
    println!("CLI verify suites: all {} suites pass", wittlab::verify::SUITE_NAMES.len());
}
