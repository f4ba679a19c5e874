//! Property tests: ring axioms on randomized samples, canonical-form
//! idempotence, coordinate-change roundtrips, and the shuffle product
//! against the finite-variable expansion oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use wittlab::nest::Nest;
use wittlab::qsymm::{Composition, QSymm};
use wittlab::ring::{rational_integrality, RingElem, RingSpec};
use wittlab::series::{from_witt, to_witt};
use wittlab::univ::Indexing;
use wittlab::witt::WittVec;

fn rings_under_test() -> Vec<RingSpec> {
    vec![
        RingSpec::integers(),
        RingSpec::rationals(),
        RingSpec::modular(BigInt::from(8)).unwrap(),
        RingSpec::modular(BigInt::from(7)).unwrap(),
        RingSpec::p_local(3).unwrap(),
    ]
}

fn element(ring: &RingSpec, num: i64, den: u8) -> RingElem {
    if ring.is_rationals() || ring.p_local_prime().is_some() {
        // keep denominators legal for the p-local case
        let mut d = 1 + den as i64 % 5;
        if let Some(p) = ring.p_local_prime() {
            while d % p as i64 == 0 {
                d += 1;
            }
        }
        ring.from_rational(&BigRational::new(BigInt::from(num), BigInt::from(d)))
            .unwrap()
    } else {
        ring.from_bigint(BigInt::from(num))
    }
}

proptest! {
    #[test]
    fn commutative_ring_axioms(
        a in -30i64..30, b in -30i64..30, c in -30i64..30,
        da in 0u8..5, db in 0u8..5, dc in 0u8..5,
    ) {
        for ring in rings_under_test() {
            let x = element(&ring, a, da);
            let y = element(&ring, b, db);
            let z = element(&ring, c, dc);
            // additive group
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert_eq!(
                x.add(&y).unwrap().add(&z).unwrap(),
                x.add(&y.add(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.add(&ring.zero()).unwrap(), x.clone());
            prop_assert!(x.add(&x.neg()).unwrap().is_zero());
            // multiplicative monoid
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(
                x.mul(&y).unwrap().mul(&z).unwrap(),
                x.mul(&y.mul(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.mul(&ring.one()).unwrap(), x.clone());
            // distributivity
            prop_assert_eq!(
                x.mul(&y.add(&z).unwrap()).unwrap(),
                x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn canonical_form_idempotence(n in -100i64..100, d in 1i64..40) {
        // constructing from an unreduced fraction equals constructing from
        // the reduced one; arithmetic keeps canonical forms
        let q = RingSpec::rationals();
        let x = q.from_rational(&BigRational::new(BigInt::from(2 * n), BigInt::from(2 * d))).unwrap();
        let y = q.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d))).unwrap();
        prop_assert_eq!(&x, &y);
        let m = RingSpec::modular(BigInt::from(12)).unwrap();
        prop_assert_eq!(m.from_bigint(BigInt::from(n)), m.from_bigint(BigInt::from(n + 12 * 5)));
    }

    #[test]
    fn integrality_roundtrip(n in -100i64..100) {
        // rational_integrality(x) = true implies x moves to the integer
        // spec and back losslessly
        let q = RingSpec::rationals();
        let z = RingSpec::integers();
        let x = q.from_i64(n);
        prop_assert!(rational_integrality(&x).unwrap().is_integral());
        let lowered = x.lower_into(&z).unwrap();
        prop_assert_eq!(lowered.lift_rationals().unwrap(), x);
    }

    #[test]
    fn witt_series_roundtrip(coords in proptest::collection::vec(-6i64..=6, 6)) {
        let z = RingSpec::integers();
        let list: Vec<RingElem> = coords.iter().map(|&v| z.from_i64(v)).collect();
        let x = WittVec::from_list(&z, Indexing::Big(Nest::upto(6)), &list).unwrap();
        let series = from_witt(&x, 6).unwrap();
        prop_assert_eq!(to_witt(&series).unwrap(), x);
    }

    #[test]
    fn ghost_is_ring_morphism(
        a in proptest::collection::vec(-5i64..=5, 6),
        b in proptest::collection::vec(-5i64..=5, 6),
    ) {
        let z = RingSpec::integers();
        let nest = Indexing::Big(Nest::upto(6));
        let la: Vec<RingElem> = a.iter().map(|&v| z.from_i64(v)).collect();
        let lb: Vec<RingElem> = b.iter().map(|&v| z.from_i64(v)).collect();
        let x = WittVec::from_list(&z, nest.clone(), &la).unwrap();
        let y = WittVec::from_list(&z, nest, &lb).unwrap();
        let gs = wittlab::witt::ghost(&wittlab::witt::witt_add(&x, &y).unwrap()).unwrap();
        let gp = wittlab::witt::ghost(&wittlab::witt::witt_mul(&x, &y).unwrap()).unwrap();
        let gx = wittlab::witt::ghost(&x).unwrap();
        let gy = wittlab::witt::ghost(&y).unwrap();
        for i in 1..=6u64 {
            prop_assert_eq!(&gs.values[&i], &gx.values[&i].add(&gy.values[&i]).unwrap());
            prop_assert_eq!(&gp.values[&i], &gx.values[&i].mul(&gy.values[&i]).unwrap());
        }
    }

    #[test]
    fn shuffle_matches_expansion_oracle(
        a in proptest::collection::vec(1u32..=3, 1..=2),
        b in proptest::collection::vec(1u32..=3, 1..=2),
    ) {
        // multiply two monomial quasi-symmetric functions as polynomials in
        // finitely many variables and compare with the overlapping shuffle
        let q = QSymm { cap: 16, matrix_cap: 6 };
        let alpha = Composition::new(a).unwrap();
        let beta = Composition::new(b).unwrap();
        let nvars = alpha.len() + beta.len() + 1;
        let pa = expand_composition(&alpha, nvars);
        let pb = expand_composition(&beta, nvars);
        let mut direct: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (e1, c1) in &pa {
            for (e2, c2) in &pb {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                *direct.entry(e).or_insert(0) += c1 * c2;
            }
        }
        direct.retain(|_, c| *c != 0);
        let shuffle = q.overlapping_shuffle(&alpha, &beta).unwrap();
        let mut via_shuffle: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (comp, coeff) in &shuffle.terms {
            let c = i64::try_from(coeff.numer().clone()).unwrap();
            for (e, k) in expand_composition(comp, nvars) {
                *via_shuffle.entry(e).or_insert(0) += c * k;
            }
        }
        via_shuffle.retain(|_, c| *c != 0);
        prop_assert_eq!(direct, via_shuffle);
    }
}

/// Monomial quasi-symmetric function of a composition in `nvars` variables.
fn expand_composition(alpha: &Composition, nvars: usize) -> BTreeMap<Vec<u32>, i64> {
    let mut out = BTreeMap::new();
    let m = alpha.len();
    if m > nvars {
        return out;
    }
    // strictly increasing index sequences i_1 < ... < i_m
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let mut e = vec![0u32; nvars];
        for (k, &i) in idx.iter().enumerate() {
            e[i] = alpha.entries()[k];
        }
        out.insert(e, 1);
        // next combination
        let mut pos = m;
        let mut done = m == 0;
        loop {
            if pos == 0 {
                done = true;
                break;
            }
            pos -= 1;
            if idx[pos] != nvars - m + pos {
                idx[pos] += 1;
                for t in pos + 1..m {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
        if done {
            break;
        }
    }
    out
}
