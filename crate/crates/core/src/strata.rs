//! Stratum signatures `Q(α)`, their `(μ, ν)` encoding and derived invariants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiset of singularity orders of a quadratic differential.
///
/// Orders are `-1` (simple pole) or positive (zero of that order); the sum is
/// `4g - 4` for a genus `g >= 0`. Stored sorted in descending order, so poles
/// come last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumSignature {
    orders: Vec<i32>,
}

impl StratumSignature {
    pub fn new(mut orders: Vec<i32>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidSignature("empty signature".into()));
        }
        if let Some(bad) = orders.iter().find(|&&a| a == 0 || a < -1) {
            return Err(Error::InvalidSignature(format!(
                "order {bad} not allowed (orders are -1 or positive)"
            )));
        }
        let sum: i64 = orders.iter().map(|&a| a as i64).sum();
        if sum.rem_euclid(4) != 0 {
            return Err(Error::InvalidSignature(format!(
                "sum of orders {sum} is not divisible by 4"
            )));
        }
        if sum < -4 {
            return Err(Error::InvalidSignature(format!(
                "sum of orders {sum} gives negative genus"
            )));
        }
        orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { orders })
    }

    pub fn orders(&self) -> &[i32] {
        &self.orders
    }

    pub fn genus(&self) -> u32 {
        let sum: i64 = self.orders.iter().map(|&a| a as i64).sum();
        ((sum + 4) / 4) as u32
    }

    /// `(order, multiplicity)` pairs in descending order.
    pub fn multiplicities(&self) -> Vec<(i32, u32)> {
        let mut out: Vec<(i32, u32)> = Vec::new();
        for &a in &self.orders {
            match out.last_mut() {
                Some((o, m)) if *o == a => *m += 1,
                _ => out.push((a, 1)),
            }
        }
        out
    }

    pub fn to_profile(&self) -> ProfilePair {
        let mu = self
            .orders
            .iter()
            .filter(|a| *a % 2 == 0)
            .map(|&a| (a / 2 + 1) as u32)
            .collect();
        let nu = self
            .orders
            .iter()
            .filter(|a| *a % 2 != 0)
            .map(|&a| (a + 2) as u32)
            .collect();
        ProfilePair::new(mu, nu).expect("valid signature encodes a valid profile")
    }

    pub fn from_profile(p: &ProfilePair) -> Result<Self> {
        let orders = p
            .mu()
            .iter()
            .map(|&m| 2 * (m as i32 - 1))
            .chain(p.nu().iter().map(|&n| n as i32 - 2))
            .collect();
        Self::new(orders)
    }

    /// Space separated expanded orders, the form used in the volume table.
    pub fn table_form(&self) -> String {
        let parts: Vec<String> = self.orders.iter().map(|a| a.to_string()).collect();
        parts.join(" ")
    }

    /// Parses a list of orders separated by commas and/or whitespace, each
    /// optionally carrying a `^multiplicity`.
    pub fn parse_loose(text: &str) -> Result<Self> {
        let normalized: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        normalized.join(",").parse()
    }
}

impl FromStr for StratumSignature {
    type Err = Error;

    /// Grammar: `part(,part)*` with `part = int | int^mult`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::InvalidSignature("empty signature".into()));
        }
        let mut orders = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let (base, mult) = match part.split_once('^') {
                Some((b, m)) => (b.trim(), m.trim()),
                None => (part, "1"),
            };
            let base: i32 = base
                .parse()
                .map_err(|_| Error::InvalidSignature(format!("bad order `{part}`")))?;
            let mult: usize = mult
                .parse()
                .map_err(|_| Error::InvalidSignature(format!("bad multiplicity `{part}`")))?;
            if mult == 0 {
                return Err(Error::InvalidSignature(format!("zero multiplicity `{part}`")));
            }
            orders.extend(std::iter::repeat_n(base, mult));
        }
        Self::new(orders)
    }
}

impl fmt::Display for StratumSignature {
    /// Canonical compact form, e.g. `2,1^2,-1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities()
            .into_iter()
            .map(|(a, m)| if m == 1 { a.to_string() } else { format!("{a}^{m}") })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// The `(μ, ν)` encoding of a stratum used for cover counting.
///
/// `mu` is an ordered list: even zeros sit over distinct labeled points of the
/// pillow. `nu` is a multiset of odd parts, kept sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProfilePair {
    mu: Vec<u32>,
    nu: Vec<u32>,
}

impl ProfilePair {
    pub fn new(mu: Vec<u32>, mut nu: Vec<u32>) -> Result<Self> {
        if let Some(m) = mu.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidProfile(format!("mu part {m} < 2")));
        }
        if let Some(n) = nu.iter().find(|&&n| n % 2 == 0) {
            return Err(Error::InvalidProfile(format!("nu part {n} is not odd")));
        }
        if nu.iter().sum::<u32>() % 2 != 0 {
            return Err(Error::InvalidProfile("|nu| is odd".into()));
        }
        nu.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { mu, nu })
    }

    pub fn empty() -> Self {
        Self { mu: Vec::new(), nu: Vec::new() }
    }

    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty() && self.nu.is_empty()
    }

    pub fn mu_size(&self) -> u32 {
        self.mu.iter().sum()
    }

    pub fn nu_size(&self) -> u32 {
        self.nu.iter().sum()
    }

    /// Same profile with `mu` sorted descending; values of all generating
    /// functions are symmetric in the labels.
    pub fn canonical(&self) -> Self {
        let mut mu = self.mu.clone();
        mu.sort_unstable_by(|a, b| b.cmp(a));
        Self { mu, nu: self.nu.clone() }
    }

    /// `|μ| - l(μ) + |ν|/2`, twice the effective genus.
    fn twice_g_eff(&self) -> i64 {
        self.mu_size() as i64 - self.mu.len() as i64 + self.nu_size() as i64 / 2
    }

    /// Twice the genus minus two: `|μ| - l(μ) + |ν|/2 - l(ν)`.
    fn twice_genus_minus_two(&self) -> i64 {
        self.twice_g_eff() - self.nu.len() as i64
    }

    pub fn has_integral_genus(&self) -> bool {
        self.twice_genus_minus_two() % 2 == 0
    }

    /// Genus when integral, possibly negative.
    pub fn genus_signed(&self) -> Option<i64> {
        let t = self.twice_genus_minus_two();
        (t % 2 == 0).then(|| t / 2 + 1)
    }

    /// `w(μ, ν) = |μ| + l(μ) + |ν|/2`.
    pub fn weight(&self) -> u32 {
        self.mu_size() + self.mu.len() as u32 + self.nu_size() / 2
    }

    pub fn dim(&self) -> u32 {
        self.mu_size() + self.nu_size() / 2
    }

    pub fn invariants(&self) -> Result<StratumInvariants> {
        let genus = match self.genus_signed() {
            Some(g) if g >= 0 => g as u32,
            Some(g) => return Err(Error::InvalidProfile(format!("negative genus {g}"))),
            None => return Err(Error::InvalidProfile("non-integral genus".into())),
        };
        let two_geff = self.twice_g_eff();
        Ok(StratumInvariants {
            genus,
            double_cover_genus: (two_geff - self.nu.len() as i64 / 2 + 1) as u32,
            g_eff: (two_geff / 2) as u32,
            dim: self.dim(),
            weight: self.weight(),
        })
    }

    /// Multiplicities of equal parts of `nu`.
    pub fn nu_multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &n in &self.nu {
            *m.entry(n).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for ProfilePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "([{}],[{}])", j(&self.mu), j(&self.nu))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumInvariants {
    pub genus: u32,
    pub double_cover_genus: u32,
    pub g_eff: u32,
    pub dim: u32,
    pub weight: u32,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig(s: &str) -> StratumSignature {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(sig("2,-1^2").orders(), &[2, -1, -1]);
        assert_eq!(sig("1^4").orders(), &[1, 1, 1, 1]);
        assert!("3,-1".parse::<StratumSignature>().is_err());
        assert!("".parse::<StratumSignature>().is_err());
        assert!("0,4".parse::<StratumSignature>().is_err());
        assert!("-2,2".parse::<StratumSignature>().is_err());
        assert!("-1^8".parse::<StratumSignature>().is_err());
        assert!("2,x".parse::<StratumSignature>().is_err());
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(sig("-1,1,-1,2,1,2").to_string(), "2^2,1^2,-1^2");
        assert_eq!(sig("5,-1").table_form(), "5 -1");
        assert_eq!(StratumSignature::parse_loose("2 -1 -1").unwrap(), sig("2,-1^2"));
    }

    #[test]
    fn profile_encoding() {
        let p = sig("2,-1^2").to_profile();
        assert_eq!((p.mu(), p.nu()), (&[2u32][..], &[1u32, 1][..]));
        let p = sig("-1^4").to_profile();
        assert!(p.mu().is_empty());
        assert_eq!(p.nu(), &[1, 1, 1, 1]);
        let p = sig("1^4").to_profile();
        assert_eq!(p.nu(), &[3, 3, 3, 3]);
    }

    #[test]
    fn invariants_examples() {
        let inv = sig("2,-1^2").to_profile().invariants().unwrap();
        assert_eq!((inv.dim, inv.genus, inv.g_eff, inv.weight), (3, 1, 1, 4));
        let inv = sig("-1^4").to_profile().invariants().unwrap();
        assert_eq!((inv.dim, inv.genus, inv.g_eff, inv.weight), (2, 0, 1, 2));
        let inv = sig("2^2").to_profile().invariants().unwrap();
        assert_eq!((inv.dim, inv.genus, inv.g_eff, inv.weight), (4, 2, 1, 6));
        // ĝ for Q(1^4): |ν|/2 - l(ν)/2 + 1 = 6 - 2 + 1
        assert_eq!(sig("1^4").to_profile().invariants().unwrap().double_cover_genus, 5);
    }

    #[test]
    fn profile_rejects_bad_parts() {
        assert!(ProfilePair::new(vec![1], vec![]).is_err());
        assert!(ProfilePair::new(vec![], vec![2]).is_err());
        assert!(ProfilePair::new(vec![], vec![3]).is_err());
        let half = ProfilePair::new(vec![], vec![1, 1]).unwrap();
        assert!(half.invariants().is_err());
        assert!(!half.has_integral_genus());
    }

    fn arb_signature() -> impl Strategy<Value = StratumSignature> {
        (prop::collection::vec(prop_oneof![Just(-1i32), 1..12i32], 1..10), 0..4i32)
            .prop_filter_map("needs valid sum", |(mut v, fix)| {
                let s: i32 = v.iter().sum();
                let r = s.rem_euclid(4);
                if r != 0 {
                    v.push(4 - r + 4 * fix);
                }
                StratumSignature::new(v).ok()
            })
    }

    proptest! {
        #[test]
        fn profile_round_trip(s in arb_signature()) {
            let p = s.to_profile();
            prop_assert_eq!(StratumSignature::from_profile(&p).unwrap(), s.clone());
            prop_assert_eq!(s.to_string().parse::<StratumSignature>().unwrap(), s);
        }

        #[test]
        fn dimension_relations(s in arb_signature()) {
            let p = s.to_profile();
            let inv = p.invariants().unwrap();
            prop_assert_eq!(inv.dim, 2 * inv.g_eff + p.mu().len() as u32);
            prop_assert_eq!(inv.weight, inv.dim + p.mu().len() as u32);
            prop_assert_eq!(inv.genus, s.genus());
            prop_assert_eq!(inv.g_eff, inv.double_cover_genus - inv.genus);
        }
    }
}
