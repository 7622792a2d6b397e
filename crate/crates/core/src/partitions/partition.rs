use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exact::rational::factorial;

/// Integer partition with parts in weakly decreasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts and drops zero parts.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        let Some(&first) = self.0.first() else {
            return Self::empty();
        };
        Self((1..=first).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// Hook lengths, row by row.
    pub fn hooks(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size() as usize);
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                out.push(row - j as u32 + conj.0[j] - i as u32 - 1);
            }
        }
        out
    }

    /// Dimension of the irreducible representation (hook length formula).
    pub fn dim(&self) -> BigInt {
        let prod = self.hooks().iter().fold(BigInt::from(1u32), |acc, &h| acc * h);
        factorial(self.size()) / prod
    }

    /// First-column hook lengths `λ_i + (k - i)` for a beta set with `k`
    /// beads, `k >= len()`. Returned in decreasing order.
    pub fn beta_set(&self, beads: usize) -> Vec<u32> {
        assert!(beads >= self.len());
        (0..beads)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + (beads - 1 - i) as u32)
            .collect()
    }

    /// Inverse of [`Partition::beta_set`]; input may be in any order.
    pub fn from_beta_set(beta: &[u32]) -> Self {
        let mut b = beta.to_vec();
        b.sort_unstable_by(|x, y| y.cmp(x));
        let k = b.len();
        Self::new(b.iter().enumerate().map(|(i, &x)| x - (k - 1 - i) as u32).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// Partitions of every size `0..=n`, grouped by size.
pub fn partitions_up_to(n: u32) -> Vec<Vec<Partition>> {
    (0..=n).map(partitions_of).collect()
}

/// Partitions of `n` with `p̄₀(λ) = 1/2`.
pub fn balanced_partitions_of(n: u32) -> Vec<Partition> {
    partitions_of(n).into_iter().filter(super::shifted::is_balanced).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
    }

    #[test]
    fn dims() {
        assert_eq!(Partition::new(vec![2, 1]).dim(), BigInt::from(2));
        assert_eq!(Partition::new(vec![6]).dim(), BigInt::from(1));
        assert_eq!(Partition::new(vec![3, 2, 1]).dim(), BigInt::from(16));
        let sum: BigInt = partitions_of(5).iter().map(|l| l.dim() * l.dim()).sum();
        assert_eq!(sum, BigInt::from(120));
    }

    #[test]
    fn beta_round_trip() {
        for n in 0..9 {
            for l in partitions_of(n) {
                for extra in 0..3 {
                    let b = l.beta_set(l.len() + extra);
                    assert_eq!(Partition::from_beta_set(&b), l);
                }
            }
        }
        assert_eq!(Partition::new(vec![3, 1, 1]).conjugate(), Partition::new(vec![3, 1, 1]));
        assert_eq!(Partition::new(vec![4, 2]).conjugate(), Partition::new(vec![2, 2, 1, 1]));
    }
}
