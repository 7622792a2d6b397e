//! Decompositions of a stratum into substrata and the connectivity recursion.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exact::rational::{factorial, from_big, Rational};
use crate::strata::ProfilePair;

/// One component of a decomposition. `labels` index into the parent's `μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub labels: Vec<usize>,
    pub profile: ProfilePair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<Part>,
    /// `Π 1/k!` over groups of `k` identical parts carrying no label.
    pub weight: Rational,
}

/// A part may appear when it is nonempty with integral, nonnegative genus.
pub fn part_is_valid(p: &ProfilePair) -> bool {
    !p.is_empty() && p.genus_signed().is_some_and(|g| g >= 0)
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    rec(0, n, &mut cur, &mut out);
    out
}

/// Every count vector `0 <= s <= rem`.
fn sub_vectors(rem: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &r in rem {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=r).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Unordered partitions of a multiset (given by counts) into nonempty parts.
fn multiset_partitions(rem: &[u32]) -> Vec<Vec<Vec<u32>>> {
    fn rec(rem: &[u32], max: Option<&[u32]>, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if rem.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for s in sub_vectors(rem) {
            if s.iter().all(|&c| c == 0) || max.is_some_and(|m| s.as_slice() > m) {
                continue;
            }
            let next: Vec<u32> = rem.iter().zip(&s).map(|(r, c)| r - c).collect();
            cur.push(s);
            let last = cur.last().cloned().unwrap();
            rec(&next, Some(&last), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(rem, None, &mut Vec::new(), &mut out);
    out
}

fn expand(values: &[u32], counts: &[u32]) -> Vec<u32> {
    values
        .iter()
        .zip(counts)
        .flat_map(|(&v, &c)| std::iter::repeat_n(v, c as usize))
        .collect()
}

/// All decompositions, the trivial one included, with their weights.
pub fn all_decompositions(p: &ProfilePair) -> Vec<Decomposition> {
    let mult = p.nu_multiplicities();
    let values: Vec<u32> = mult.keys().copied().collect();
    let counts: Vec<u32> = mult.values().copied().collect();
    let mut out = Vec::new();
    for blocks in set_partitions(p.mu().len()) {
        // ν shares for the labeled blocks
        let mut shares: Vec<(Vec<Vec<u32>>, Vec<u32>)> = vec![(Vec::new(), counts.clone())];
        for _ in &blocks {
            shares = shares
                .into_iter()
                .flat_map(|(taken, rem)| {
                    sub_vectors(&rem).into_iter().map(move |s| {
                        let left: Vec<u32> = rem.iter().zip(&s).map(|(r, c)| r - c).collect();
                        let mut t = taken.clone();
                        t.push(s);
                        (t, left)
                    })
                })
                .collect();
        }
        for (taken, rem) in shares {
            let labeled: Option<Vec<Part>> = blocks
                .iter()
                .zip(&taken)
                .map(|(b, s)| {
                    let mu = b.iter().map(|&i| p.mu()[i]).collect();
                    let profile = ProfilePair::new(mu, expand(&values, s)).ok()?;
                    part_is_valid(&profile).then(|| Part { labels: b.clone(), profile })
                })
                .collect();
            let Some(labeled) = labeled else { continue };
            for free in multiset_partitions(&rem) {
                let mut parts = labeled.clone();
                let mut ok = true;
                let mut groups: BTreeMap<&Vec<u32>, u32> = BTreeMap::new();
                for s in &free {
                    *groups.entry(s).or_default() += 1;
                    match ProfilePair::new(Vec::new(), expand(&values, s)) {
                        Ok(profile) if part_is_valid(&profile) => {
                            parts.push(Part { labels: Vec::new(), profile })
                        }
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok || parts.is_empty() {
                    continue;
                }
                let weight = groups
                    .values()
                    .fold(Rational::one(), |acc, &k| acc / from_big(factorial(k)));
                out.push(Decomposition { parts, weight });
            }
        }
    }
    out
}

/// Decompositions into at least two parts.
pub fn decompositions(p: &ProfilePair) -> Vec<Decomposition> {
    all_decompositions(p).into_iter().filter(|d| d.parts.len() >= 2).collect()
}

/// Product of canonical profiles, kept sorted.
pub type Term = Vec<ProfilePair>;

/// Expresses the connected function of `p` through products of the
/// disconnected ones: `Z°(p) = Σ coeff · Π Z'(parts)`. Profiles for which
/// `vanishes` holds are treated as having `Z' = 0`.
pub fn mobius_expansion(
    p: &ProfilePair,
    vanishes: &dyn Fn(&ProfilePair) -> bool,
) -> BTreeMap<Term, Rational> {
    let mut memo: BTreeMap<ProfilePair, BTreeMap<Term, Rational>> = BTreeMap::new();
    connected_symbolic(&p.canonical(), vanishes, &mut memo)
}

fn connected_symbolic(
    p: &ProfilePair,
    vanishes: &dyn Fn(&ProfilePair) -> bool,
    memo: &mut BTreeMap<ProfilePair, BTreeMap<Term, Rational>>,
) -> BTreeMap<Term, Rational> {
    if let Some(v) = memo.get(p) {
        return v.clone();
    }
    let mut out: BTreeMap<Term, Rational> = BTreeMap::new();
    if !vanishes(p) {
        out.insert(vec![p.clone()], Rational::one());
    }
    for d in decompositions(p) {
        let mut prod: BTreeMap<Term, Rational> = BTreeMap::from([(Vec::new(), d.weight.clone())]);
        for part in &d.parts {
            let f = connected_symbolic(&part.profile.canonical(), vanishes, memo);
            let mut next = BTreeMap::new();
            for (ta, ca) in &prod {
                for (tb, cb) in &f {
                    let mut t = ta.clone();
                    t.extend(tb.iter().cloned());
                    t.sort();
                    *next.entry(t).or_insert_with(Rational::zero) += ca * cb;
                }
            }
            prod = next;
        }
        for (t, c) in prod {
            *out.entry(t).or_insert_with(Rational::zero) -= c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    memo.insert(p.clone(), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn pp(mu: &[u32], nu: &[u32]) -> ProfilePair {
        ProfilePair::new(mu.to_vec(), nu.to_vec()).unwrap()
    }

    #[test]
    fn multiset_partition_counts() {
        // partitions of {a,a,b}: aab | a,ab | aa,b | a,a,b
        assert_eq!(multiset_partitions(&[2, 1]).len(), 4);
        assert_eq!(multiset_partitions(&[4]).len(), 5);
        assert_eq!(set_partitions(3).len(), 5);
    }

    #[test]
    fn labeled_even_zeros() {
        let ds = decompositions(&pp(&[2, 2, 2], &[1, 1]));
        assert_eq!(ds.len(), 3);
        for d in &ds {
            assert_eq!(d.weight, int(1));
        }
        let total: Rational = ds.iter().map(|d| d.weight.clone()).sum();
        assert_eq!(total, int(3));
    }

    #[test]
    fn identical_parts_weight() {
        let ds = decompositions(&pp(&[], &[5, 5, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]));
        let find = |parts: &[ProfilePair]| {
            let mut want: Vec<ProfilePair> = parts.to_vec();
            want.sort();
            ds.iter()
                .find(|d| {
                    let mut got: Vec<ProfilePair> = d.parts.iter().map(|x| x.profile.clone()).collect();
                    got.sort();
                    got == want
                })
                .map(|d| d.weight.clone())
        };
        let a = pp(&[], &[5, 1, 1, 1]);
        let b = pp(&[], &[1, 1, 1, 1]);
        assert_eq!(find(&[a.clone(), a.clone(), b.clone()]), Some(rat(1, 2)));
        assert_eq!(find(&[pp(&[], &[5, 5, 1, 1]), b.clone(), b.clone()]), Some(rat(1, 2)));
        assert_eq!(find(&[a, pp(&[], &[5, 1, 1, 1, 1, 1, 1, 1])]), Some(int(1)));
        assert_eq!(ds.len(), 4);
    }

    fn coeff(exp: &BTreeMap<Term, Rational>, parts: &[ProfilePair]) -> Rational {
        let mut t: Vec<ProfilePair> = parts.iter().map(|p| p.canonical()).collect();
        t.sort();
        exp.get(&t).cloned().unwrap_or_else(Rational::zero)
    }

    #[test]
    fn mobius_chain_with_symmetric_parts() {
        let p = pp(&[5], &[1; 12]);
        let e = mobius_expansion(&p, &|_| false);
        let b = pp(&[], &[1, 1, 1, 1]);
        assert_eq!(coeff(&e, std::slice::from_ref(&p)), int(1));
        assert_eq!(coeff(&e, &[pp(&[5], &[1; 8]), b.clone()]), int(-1));
        assert_eq!(coeff(&e, &[pp(&[5], &[1; 4]), b.clone(), b.clone()]), rat(1, 2));
        assert_eq!(coeff(&e, &[pp(&[5], &[]), b.clone(), b.clone(), b.clone()]), rat(-1, 6));
    }

    #[test]
    fn mobius_two_poles_branches() {
        let p = pp(&[], &[5, 5, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        let e = mobius_expansion(&p, &|_| false);
        let a = pp(&[], &[5, 1, 1, 1]);
        let b = pp(&[], &[1, 1, 1, 1]);
        assert_eq!(coeff(&e, std::slice::from_ref(&p)), int(1));
        assert_eq!(coeff(&e, &[a.clone(), pp(&[], &[5, 1, 1, 1, 1, 1, 1, 1])]), int(-1));
        assert_eq!(coeff(&e, &[b.clone(), pp(&[], &[5, 5, 1, 1, 1, 1, 1, 1])]), int(-1));
        assert_eq!(coeff(&e, &[a.clone(), a.clone(), b.clone()]), int(1));
        assert_eq!(coeff(&e, &[pp(&[], &[5, 5, 1, 1]), b.clone(), b.clone()]), rat(1, 2));
        assert_eq!(e.len(), 5);
    }

    #[test]
    fn mobius_labeled() {
        let p = pp(&[2, 2, 2], &[1, 1]);
        let e = mobius_expansion(&p, &|_| false);
        assert_eq!(coeff(&e, &[pp(&[2, 2], &[]), pp(&[2], &[1, 1])]), int(-3));
    }
}
