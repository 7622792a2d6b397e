//! Irreducible characters of the symmetric group.
//!
//! Values come from the Murnaghan-Nakayama rule on beta sets. Cycle parts
//! are stripped in the order: parts `>= 3` (largest first), then 1-cycles,
//! then 2-cycles. A tail made only of 1-cycles is answered by the hook
//! length formula, a tail made only of 2-cycles by the 2-quotient formula.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::Partition;
use crate::error::{Error, Result};
use crate::exact::rational::{binomial, factorial, from_big, Rational};

/// Largest partition size for which values are guaranteed to fit in `i128`.
pub const MAX_SIZE: u32 = 50;

/// On-disk format tag of the character cache.
pub const CACHE_FORMAT: u32 = 1;

type Key = (Box<[u32]>, Box<[u32]>);

fn memo() -> &'static DashMap<Key, i128> {
    static MEMO: OnceLock<DashMap<Key, i128>> = OnceLock::new();
    MEMO.get_or_init(DashMap::new)
}

/// Number of memoized character values.
pub fn memo_len() -> usize {
    memo().len()
}

pub fn clear_memo() {
    memo().clear();
}

/// How a partial cycle type is completed to the full size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Padding {
    Ones,
    Twos,
}

impl Padding {
    fn part(self) -> u32 {
        match self {
            Padding::Ones => 1,
            Padding::Twos => 2,
        }
    }
}

fn strip_order(rho: &[u32]) -> Vec<u32> {
    let mut big: Vec<u32> = rho.iter().copied().filter(|&r| r >= 3).collect();
    big.sort_unstable_by(|a, b| b.cmp(a));
    big.extend(rho.iter().filter(|&&r| r == 1));
    big.extend(rho.iter().filter(|&&r| r == 2));
    big
}

/// `χ^λ(ρ)`.
pub fn character_value(lambda: &Partition, rho: &[u32]) -> Result<i128> {
    let n = lambda.size();
    let class: u32 = rho.iter().sum();
    if class != n || rho.contains(&0) {
        return Err(Error::SizeMismatch { partition: n, class });
    }
    if n > MAX_SIZE {
        return Err(Error::Domain(format!("partition size {n} above {MAX_SIZE}")));
    }
    Ok(chi(lambda, &strip_order(rho)))
}

fn dim_i128(lambda: &Partition) -> i128 {
    lambda.dim().to_i128().expect("dimension fits in i128")
}

fn chi(lambda: &Partition, rest: &[u32]) -> i128 {
    if rest.is_empty() {
        return i128::from(lambda.is_empty());
    }
    if rest.iter().all(|&r| r == 1) {
        return dim_i128(lambda);
    }
    if rest.iter().all(|&r| r == 2) {
        return chi_twos(lambda);
    }
    let key: Key = (lambda.parts().into(), rest.into());
    if let Some(v) = memo().get(&key) {
        return *v;
    }
    let r = rest[0];
    let beta = lambda.beta_set(lambda.len());
    let mut total = 0i128;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        let v = chi(&Partition::from_beta_set(&moved), &rest[1..]);
        total += if between % 2 == 0 { v } else { -v };
    }
    memo().insert(key, total);
    total
}

/// Sign picked up by peeling dominoes off `λ` until none remain.
/// `None` if the 2-core is not empty.
fn domino_sign(lambda: &Partition) -> Option<i32> {
    let mut beta = lambda.beta_set(lambda.len() + lambda.len() % 2);
    let mut sign = 1;
    loop {
        let mut moved = false;
        for i in 0..beta.len() {
            let b = beta[i];
            if b >= 2 && !beta.contains(&(b - 2)) {
                if beta.contains(&(b - 1)) {
                    sign = -sign;
                }
                beta[i] = b - 2;
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
    }
    Partition::from_beta_set(&beta).is_empty().then_some(sign)
}

/// The 2-quotient `(λ⁰, λ¹)`, or `None` when the 2-core is not empty.
pub fn two_quotient(lambda: &Partition) -> Option<(Partition, Partition)> {
    let beta = lambda.beta_set(lambda.len() + lambda.len() % 2);
    let r0: Vec<u32> = beta.iter().filter(|&&b| b % 2 == 0).map(|b| b / 2).collect();
    let r1: Vec<u32> = beta.iter().filter(|&&b| b % 2 == 1).map(|b| b / 2).collect();
    if r0.len() != r1.len() {
        return None;
    }
    Some((Partition::from_beta_set(&r0), Partition::from_beta_set(&r1)))
}

fn chi_twos(lambda: &Partition) -> i128 {
    let Some((q0, q1)) = two_quotient(lambda) else {
        return 0;
    };
    let sign = domino_sign(lambda).expect("empty 2-core has a domino tiling");
    let k = lambda.size() / 2;
    let v = binomial(k as u64, q0.size() as u64) * q0.dim() * q1.dim();
    let v = v.to_i128().expect("character fits in i128");
    if sign > 0 {
        v
    } else {
        -v
    }
}

/// `z_ρ = Π k^{m_k} m_k!`.
pub fn centralizer_order(rho: &[u32]) -> BigInt {
    let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
    for &r in rho {
        *mult.entry(r).or_default() += 1;
    }
    mult.iter()
        .fold(BigInt::from(1), |acc, (&k, &m)| acc * BigInt::from(k).pow(m) * factorial(m))
}

/// Size of the conjugacy class of cycle type `ρ` in the symmetric group on `|ρ|` letters.
pub fn class_size(rho: &[u32]) -> BigInt {
    factorial(rho.iter().sum()) / centralizer_order(rho)
}

/// Completes `core` to a cycle type of size `|λ|`.
pub fn pad_class(core: &[u32], target: u32, pad: Padding) -> Result<Vec<u32>> {
    let size: u32 = core.iter().sum();
    let p = pad.part();
    if size > target || !(target - size).is_multiple_of(p) {
        return Err(Error::Padding { core: size, target, pad: p });
    }
    let mut rho = core.to_vec();
    rho.extend(std::iter::repeat_n(p, ((target - size) / p) as usize));
    Ok(rho)
}

/// Central character `f_ρ(λ) = |C_ρ| χ^λ(ρ) / dim λ`, with `ρ` the padded `core`.
pub fn central_character(lambda: &Partition, core: &[u32], pad: Padding) -> Result<Rational> {
    let rho = pad_class(core, lambda.size(), pad)?;
    let chi = character_value(lambda, &rho)?;
    Ok(from_big(class_size(&rho) * BigInt::from(chi)) / from_big(lambda.dim()))
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    lambda: Vec<u32>,
    rho: Vec<u32>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: u32,
    entries: Vec<CacheEntry>,
}

/// Writes the memo table as JSON. Entries are sorted so output is stable.
pub fn save_cache(path: &Path) -> Result<usize> {
    let mut entries: Vec<CacheEntry> = memo()
        .iter()
        .map(|e| CacheEntry {
            lambda: e.key().0.to_vec(),
            rho: e.key().1.to_vec(),
            value: e.value().to_string(),
        })
        .collect();
    entries.sort_by(|a, b| (&a.lambda, &a.rho).cmp(&(&b.lambda, &b.rho)));
    let n = entries.len();
    let file = CacheFile { format: CACHE_FORMAT, entries };
    std::fs::write(path, serde_json::to_vec(&file)?)?;
    Ok(n)
}

/// Loads a cache written by [`save_cache`]. A different format tag loads
/// nothing and returns 0.
pub fn load_cache(path: &Path) -> Result<usize> {
    let file: CacheFile = serde_json::from_slice(&std::fs::read(path)?)?;
    if file.format != CACHE_FORMAT {
        return Ok(0);
    }
    let mut n = 0;
    for e in file.entries {
        let v: i128 = e
            .value
            .parse()
            .map_err(|_| Error::Domain(format!("bad cached value `{}`", e.value)))?;
        memo().insert((e.lambda.into(), e.rho.into()), v);
        n += 1;
    }
    Ok(n)
}
