//! Divisor-closed truncation sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::arith::divisors;
use crate::error::{Result, WittError};

/// A nest: a finite divisor-closed set of positive integers containing 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nest {
    indices: Vec<u64>,
}

impl Nest {
    /// Validate an ascending index list as a nest.
    pub fn new(mut indices: Vec<u64>) -> Result<Nest> {
        indices.sort_unstable();
        indices.dedup();
        if indices.first() != Some(&1) {
            return Err(WittError::InvalidSpec("nest must contain 1".into()));
        }
        let set: BTreeSet<u64> = indices.iter().copied().collect();
        for &n in &indices {
            for d in divisors(n) {
                if !set.contains(&d) {
                    return Err(WittError::InvalidSpec(format!(
                        "nest not divisor-closed: {} in nest but {} missing",
                        n, d
                    )));
                }
            }
        }
        Ok(Nest { indices })
    }

    /// Smallest nest containing the given indices.
    pub fn closure(indices: impl IntoIterator<Item = u64>) -> Nest {
        let mut set: BTreeSet<u64> = BTreeSet::new();
        set.insert(1);
        for n in indices {
            for d in divisors(n) {
                set.insert(d);
            }
        }
        Nest {
            indices: set.into_iter().collect(),
        }
    }

    /// The nest {1, 2, ..., n}.
    pub fn upto(n: u64) -> Nest {
        Nest {
            indices: (1..=n.max(1)).collect(),
        }
    }

    /// The p-power nest {1, p, ..., p^len}.
    pub fn p_powers(p: u64, len: u32) -> Nest {
        Nest {
            indices: (0..=len).map(|i| p.pow(i)).collect(),
        }
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn contains(&self, n: u64) -> bool {
        self.indices.binary_search(&n).is_ok()
    }

    pub fn max(&self) -> u64 {
        *self.indices.last().expect("nest nonempty")
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Divisors of n that lie in the nest (all of them, by closure).
    pub fn divisors_of(&self, n: u64) -> Vec<u64> {
        divisors(n)
    }

    /// The nest {m : k*m in self}, the natural domain of the k-th Frobenius.
    pub fn frobenius_quotient(&self, k: u64) -> Nest {
        let indices: Vec<u64> = self
            .indices
            .iter()
            .filter(|&&n| n % k == 0)
            .map(|&n| n / k)
            .filter(|&m| self.contains(m * k))
            .collect();
        // quotients of a divisor-closed set by k are divisor-closed
        Nest::closure(indices)
    }

    /// Smallest nest containing k * self.
    pub fn dilate(&self, k: u64) -> Nest {
        Nest::closure(self.indices.iter().map(|&n| n * k))
    }
}

impl fmt::Display for Nest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.indices.iter().map(|n| n.to_string()).collect();
        write!(f, "{{{}}}", strs.join(","))
    }
}

impl fmt::Debug for Nest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Nest::new(vec![1, 2, 3, 4]).is_ok());
        assert!(Nest::new(vec![1, 4]).is_err()); // missing 2
        assert!(Nest::new(vec![2, 4]).is_err()); // missing 1
        assert!(Nest::new(vec![1, 2, 4]).is_ok());
    }

    #[test]
    fn closures_and_dilation() {
        let n = Nest::closure([6]);
        assert_eq!(n.indices(), &[1, 2, 3, 6]);
        let d = Nest::upto(3).dilate(2);
        assert_eq!(d.indices(), &[1, 2, 3, 4, 6]);
    }

    #[test]
    fn p_power_nests() {
        assert_eq!(Nest::p_powers(2, 3).indices(), &[1, 2, 4, 8]);
        assert_eq!(Nest::p_powers(3, 0).indices(), &[1]);
    }
}
