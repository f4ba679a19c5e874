//! Small integer-combinatorics helpers used throughout: divisors, Möbius,
//! primes, partitions and compositions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Divisors of `n` in ascending order. `n >= 1`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Möbius function.
pub fn moebius(n: u64) -> i64 {
    debug_assert!(n >= 1);
    let mut n = n;
    let mut count = 0u32;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            count += 1;
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Primes up to and including `n`.
pub fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// p-adic valuation of `n`; `n >= 1`.
pub fn valuation_p(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("u64 overflow in pow")
}

pub fn big_pow(base: &BigInt, exp: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// All partitions of `n` in reverse-lexicographic order, starting with `(n)`
/// and ending with `(1,1,...,1)`.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let top = max.min(rest);
        for part in (1..=top).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// All compositions of `n` (ordered sequences of positive parts).
pub fn compositions(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for first in 1..=rest {
            cur.push(first);
            rec(rest - first, cur, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

/// Exact binomial coefficient as a big integer.
pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(7), vec![1, 7]);
    }

    #[test]
    fn moebius_values() {
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(moebius(i as u64 + 1), e, "mu({})", i + 1);
        }
        // sum over divisors of n of mu(d) vanishes for n >= 2
        for n in 2..=60u64 {
            let s: i64 = divisors(n).iter().map(|&d| moebius(d)).sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn partition_order_is_reverse_lex() {
        let p4 = partitions(4);
        assert_eq!(
            p4,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        assert_eq!(partitions(8).len(), 22);
        assert_eq!(partitions(12).len(), 77);
    }

    #[test]
    fn composition_count() {
        assert_eq!(compositions(4).len(), 8);
        assert_eq!(compositions(0), vec![Vec::<u32>::new()]);
    }
}
