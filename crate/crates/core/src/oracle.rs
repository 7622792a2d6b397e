//! Independent checks: brute-force enumeration of covers through monodromy
//! tuples, lattice-count volume estimates, and numeric validators for the
//! asymptotic sum identities used in the volume computations by hand.

use std::collections::BTreeMap;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{factorial, from_big, int, Rational};
use crate::exec::Exec;
use crate::genfun::Pipeline;
use crate::hp::{self, Hp};
use crate::strata::ProfilePair;
use crate::volume::{aez_factor, eo_volume};

/// Largest degree the enumerators accept.
pub const MAX_DEGREE: usize = 8;

type Perm = [u8; MAX_DEGREE];

fn identity(n: usize) -> Perm {
    let mut p = [0u8; MAX_DEGREE];
    for (i, x) in p.iter_mut().enumerate().take(n) {
        *x = i as u8;
    }
    p
}

/// `(a ∘ b)(i) = a(b(i))`.
fn compose(a: &Perm, b: &Perm, n: usize) -> Perm {
    let mut out = [0u8; MAX_DEGREE];
    for i in 0..n {
        out[i] = a[b[i] as usize];
    }
    out
}

fn inverse(a: &Perm, n: usize) -> Perm {
    let mut out = [0u8; MAX_DEGREE];
    for i in 0..n {
        out[a[i] as usize] = i as u8;
    }
    out
}

fn cycle_type(a: &Perm, n: usize) -> Vec<u32> {
    let mut seen = [false; MAX_DEGREE];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = a[i] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = identity(n);
    fn rec(k: usize, n: usize, cur: &mut Perm, out: &mut Vec<Perm>) {
        if k == n {
            out.push(*cur);
            return;
        }
        for i in k..n {
            cur.swap(k, i);
            rec(k + 1, n, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, n, &mut cur, &mut out);
    out
}

/// Elements of `S_n` bucketed by cycle type.
struct Classes {
    n: usize,
    by_type: BTreeMap<Vec<u32>, Vec<Perm>>,
}

impl Classes {
    fn new(n: usize) -> Self {
        let mut by_type: BTreeMap<Vec<u32>, Vec<Perm>> = BTreeMap::new();
        for p in all_perms(n) {
            by_type.entry(cycle_type(&p, n)).or_default().push(p);
        }
        Self { n, by_type }
    }

    fn class(&self, ty: &[u32]) -> &[Perm] {
        self.by_type.get(ty).map_or(&[], |v| v.as_slice())
    }
}

/// Whether the group generated by `gens` acts transitively on `0..n`.
fn transitive(gens: &[&Perm], n: usize) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = n;
    for g in gens {
        for i in 0..n {
            let (a, b) = (find(&mut parent, i), find(&mut parent, g[i] as usize));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
    }
    comps <= 1
}

/// Weighted cover counts in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCount {
    pub degree: usize,
    /// `Σ 1/|Aut|` over all covers.
    pub all: Rational,
    /// The same over connected covers.
    pub connected: Rational,
}

impl CoverCount {
    fn zero(degree: usize) -> Self {
        Self { degree, all: Rational::zero(), connected: Rational::zero() }
    }

    fn from_tuples(degree: usize, all: u64, connected: u64) -> Self {
        let f = from_big(factorial(degree as u32));
        Self { degree, all: int(all as i64) / &f, connected: int(connected as i64) / f }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.degree,
            self.all.numer(),
            self.all.denom(),
            self.connected.numer(),
            self.connected.denom()
        )
    }
}

fn padded(core: &[u32], pad: u32, n: usize) -> Option<Vec<u32>> {
    let used: u32 = core.iter().sum();
    if used as usize > n || !(n - used as usize).is_multiple_of(pad as usize) {
        return None;
    }
    let mut ty = core.to_vec();
    ty.extend(std::iter::repeat_n(pad, (n - used as usize) / pad as usize));
    ty.sort_unstable_by(|a, b| b.cmp(a));
    Some(ty)
}

struct PillowSetup {
    n: usize,
    classes: Classes,
    c1: Vec<u32>,
    inv: Vec<u32>,
    hs: Vec<Vec<u32>>,
}

fn pillow_setup(p: &ProfilePair, n: usize) -> Result<Option<PillowSetup>> {
    if !n.is_multiple_of(2) || n == 0 || n > MAX_DEGREE {
        return Err(Error::Domain(format!("pillowcase degree must be even in 2..={MAX_DEGREE}, got {n}")));
    }
    let Some(c1) = padded(p.nu(), 2, n) else { return Ok(None) };
    let inv = vec![2; n / 2];
    let mut hs = Vec::new();
    for &m in p.mu() {
        match padded(&[m], 1, n) {
            Some(t) => hs.push(t),
            None => return Ok(None),
        }
    }
    Ok(Some(PillowSetup { n, classes: Classes::new(n), c1, inv, hs }))
}

/// Loops over `h_1 .. h_l` in their classes, calling `f(prefix · h_1 ⋯ h_l, hs)`.
fn each_h<F: FnMut(&Perm, &[Perm])>(cl: &Classes, hs: &[Vec<u32>], prefix: Perm, f: &mut F) {
    fn rec<F: FnMut(&Perm, &[Perm])>(cl: &Classes, hs: &[Vec<u32>], i: usize, acc: Perm, chosen: &mut Vec<Perm>, f: &mut F) {
        if i == hs.len() {
            f(&acc, chosen);
            return;
        }
        for h in cl.class(&hs[i]) {
            chosen.push(*h);
            rec(cl, hs, i + 1, compose(&acc, h, cl.n), chosen, f);
            chosen.pop();
        }
    }
    rec(cl, hs, 0, prefix, &mut Vec::new(), f)
}

/// Tuples `(g1, g2, g3, g4, h_1, …, h_l)` in `S_n` with `g1` of type
/// `(ν, 2, …, 2)`, `g2, g3, g4` fixed-point-free involutions, `h_i` of type
/// `(μ_i, 1, …, 1)` and `g1 g2 g3 g4 h_1 ⋯ h_l = 1`, weighted by `1/n!`.
///
/// `g2` is fixed to one involution and the count scaled by the class size;
/// `g4` is solved for.
pub fn count_pillow_covers(p: &ProfilePair, degree: usize, exec: Exec) -> Result<CoverCount> {
    let Some(s) = pillow_setup(p, degree)? else { return Ok(CoverCount::zero(degree)) };
    let n = s.n;
    let invs = s.classes.class(&s.inv);
    let g2 = invs[0];
    let g1s = s.classes.class(&s.c1);
    let per_g1 = exec.map(g1s, |g1| {
        let (mut all, mut conn) = (0u64, 0u64);
        let g12 = compose(g1, &g2, n);
        for g3 in invs {
            let g123 = compose(&g12, g3, n);
            each_h(&s.classes, &s.hs, identity(n), &mut |hprod, hs| {
                // g4 = (g1 g2 g3)^{-1} (h_1 ⋯ h_l)^{-1}
                let g4 = inverse(&compose(hprod, &g123, n), n);
                if cycle_type(&g4, n) != s.inv {
                    return;
                }
                all += 1;
                let mut gens: Vec<&Perm> = vec![g1, &g2, g3];
                gens.extend(hs.iter());
                if transitive(&gens, n) {
                    conn += 1;
                }
            });
        }
        (all, conn)
    });
    let (all, conn) = per_g1.into_iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let k = invs.len() as u64;
    Ok(CoverCount::from_tuples(degree, all * k, conn * k))
}

/// Unreduced enumeration over every coordinate, for small degrees only.
pub fn count_pillow_covers_full(p: &ProfilePair, degree: usize) -> Result<CoverCount> {
    if degree > 4 {
        return Err(Error::Domain("full enumeration is limited to degree 4".into()));
    }
    let Some(s) = pillow_setup(p, degree)? else { return Ok(CoverCount::zero(degree)) };
    let n = s.n;
    let invs = s.classes.class(&s.inv);
    let id = identity(n);
    let (mut all, mut conn) = (0u64, 0u64);
    for g1 in s.classes.class(&s.c1) {
        for g2 in invs {
            for g3 in invs {
                for g4 in invs {
                    let g = compose(&compose(&compose(g1, g2, n), g3, n), g4, n);
                    each_h(&s.classes, &s.hs, g, &mut |prod, hs| {
                        if *prod == id {
                            all += 1;
                            let mut gens: Vec<&Perm> = vec![g1, g2, g3, g4];
                            gens.extend(hs.iter());
                            if transitive(&gens, n) {
                                conn += 1;
                            }
                        }
                    });
                }
            }
        }
    }
    Ok(CoverCount::from_tuples(degree, all, conn))
}

/// Tuples `(a, b, h_1, …, h_n)` in `S_d` with `a⁻¹b⁻¹ab · h_1 ⋯ h_n = 1`,
/// `h_i` of type `(μ_i, 1, …)`, weighted by `1/d!`.
pub fn count_torus_covers(mu: &[u32], degree: usize, exec: Exec) -> Result<CoverCount> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::Domain(format!("torus degree must be in 1..={MAX_DEGREE}, got {degree}")));
    }
    let n = degree;
    let mut hs = Vec::new();
    for &m in mu {
        if m < 2 {
            return Err(Error::InvalidProfile(format!("torus ramification {m} < 2")));
        }
        match padded(&[m], 1, n) {
            Some(t) => hs.push(t),
            None => return Ok(CoverCount::zero(degree)),
        }
    }
    let classes = Classes::new(n);
    let perms = all_perms(n);
    let id = identity(n);
    let per_a = exec.map(&perms, |a| {
        let (mut all, mut conn) = (0u64, 0u64);
        let ai = inverse(a, n);
        for b in &perms {
            let comm = compose(&compose(&ai, &inverse(b, n), n), &compose(a, b, n), n);
            each_h(&classes, &hs, comm, &mut |prod, chosen| {
                if *prod == id {
                    all += 1;
                    let mut gens: Vec<&Perm> = vec![a, b];
                    gens.extend(chosen.iter());
                    if transitive(&gens, n) {
                        conn += 1;
                    }
                }
            });
        }
        (all, conn)
    });
    let (all, conn) = per_a.into_iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(CoverCount::from_tuples(degree, all, conn))
}

/// Lattice-count estimate of `Vol^EO` at cutoff `2D`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Estimate {
    pub profile: String,
    pub cutoff: usize,
    pub partial_sum: f64,
    pub estimate_eo: f64,
    /// Estimate in the table normalization.
    pub estimate_aez: f64,
    pub exact_eo: Option<f64>,
    pub ratio: Option<f64>,
    pub warning: Option<String>,
}

/// `Vol^EO ≈ dim_R · S_{2D} / (2D)^{dim}`, with `S_{2D}` the weighted number
/// of connected covers of degree at most `2D` (from the exact connected
/// series, which the enumerators match in low degree).
pub fn estimate_volume_from_counts(pipe: &Pipeline, p: &ProfilePair, d: usize) -> Result<Estimate> {
    let dim = p.dim();
    if dim == 0 {
        return Err(Error::Domain("no stratum of dimension 0".into()));
    }
    if d == 0 {
        return Err(Error::Domain("cutoff D must be positive".into()));
    }
    let series = pipe.zconnected_series(p, d + 1)?;
    let partial: Rational = series.coeffs().iter().sum();
    let n = 2.0 * d as f64;
    let s = partial.to_f64().unwrap_or(f64::NAN);
    let est = 2.0 * dim as f64 * s / n.powi(dim as i32);
    let sig = crate::strata::StratumSignature::from_profile(p)?;
    let aez = aez_factor(&sig, crate::volume::PoleConvention::IncludePoles).to_f64().unwrap_or(f64::NAN);
    let exact = if pipe.check_weight(p.weight()).is_ok() {
        eo_volume(pipe, &sig).ok().map(|v| v.to_f64())
    } else {
        None
    };
    let warning = (d < 2 * dim as usize).then(|| format!("D = {d} is small for dimension {dim}"));
    Ok(Estimate {
        profile: p.to_string(),
        cutoff: 2 * d,
        partial_sum: s,
        estimate_eo: est,
        estimate_aez: est * aez,
        exact_eo: exact,
        ratio: exact.map(|e| est / e),
        warning,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub truncation: u64,
    pub observed: f64,
    pub expected: f64,
    /// Absolute error for convergent sums, `|ratio - 1|` for asymptotics.
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SumReport {
    pub checks: Vec<IdentityCheck>,
}

impl SumReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: String, trunc: u64, obs: &BigFloat, exp: &BigFloat, ratio: bool, tol: f64) -> IdentityCheck {
    let error = if ratio {
        (hp::to_f64(&hp::div(obs, exp)) - 1.0).abs()
    } else {
        hp::to_f64(&hp::sub(obs, exp)).abs()
    };
    IdentityCheck {
        name,
        truncation: trunc,
        observed: hp::to_f64(obs),
        expected: hp::to_f64(exp),
        error,
        tolerance: tol,
        pass: error < tol,
    }
}

/// `σ_1(k)` for `k <= n`.
fn divisor_sums(n: usize, power: u32) -> Vec<u128> {
    let mut s = vec![0u128; n + 1];
    for w in 1..=n {
        let wp = (w as u128).pow(power);
        for k in (w..=n).step_by(w) {
            s[k] += wp;
        }
    }
    s
}

/// `#{(H_1, H_2) >= 1 : H_1 + 2H_2 = H} = ⌊(H-1)/2⌋`, summed over `H <= m`.
fn cum_h12(m: u64) -> u128 {
    let k = (m / 2) as u128;
    if m.is_multiple_of(2) {
        k * k.saturating_sub(1)
    } else {
        k * k
    }
}

/// Exact lattice sums behind the asymptotic identities.
mod lattice {
    use super::*;

    /// `Σ_{W(H_1 + 2H_2) <= 2N} W^m`.
    pub fn combi1(n: u64, m: u32) -> BigInt {
        let mut total = BigInt::zero();
        for w in 1..=2 * n {
            total += BigInt::from(w).pow(m) * BigInt::from(cum_h12(2 * n / w));
        }
        total
    }

    /// `c(H) = #{(H_1, H_2, H_3) >= 1 : H_1 + 2H_2 + H_3 = H}`.
    fn c3(h: u64) -> u128 {
        let mut c = 0u128;
        let mut h2 = 1;
        while h >= 2 * h2 + 2 {
            c += (h - 2 * h2 - 1) as u128;
            h2 += 1;
        }
        c
    }

    /// `Σ_{W(H_1 + 2H_2 + H_3) <= N} W^3`.
    pub fn combi2(n: u64) -> BigInt {
        let mut cum = vec![0u128; n as usize + 1];
        // c(H) grows by steps; closed recursion c(H) = c(H-2) + (H-3) for H >= 4
        let mut c = vec![0u128; n as usize + 1];
        for h in 1..=n as usize {
            c[h] = if h < 4 { c3(h as u64) } else { c[h - 2] + (h as u128 - 3) };
            cum[h] = cum[h - 1] + c[h];
        }
        let mut total = BigInt::zero();
        for w in 1..=n {
            total += BigInt::from(w).pow(3) * BigInt::from(cum[(n / w) as usize]);
        }
        total
    }

    /// `Σ_{W_1(H_1 + 2H_2) + W_2 H_3 <= 2N} W_1² W_2`.
    pub fn combi3(n: u64) -> BigInt {
        let top = 2 * n as usize;
        // f(a) = Σ_{W H = a} W² ⌊(H-1)/2⌋
        let mut f = vec![0u128; top + 1];
        for w in 1..=top {
            let w2 = (w * w) as u128;
            for h in 1..=top / w {
                f[w * h] += w2 * ((h as u128 - 1) / 2);
            }
        }
        let sigma = divisor_sums(top, 1);
        let mut g = vec![0u128; top + 1];
        for b in 1..=top {
            g[b] = g[b - 1] + sigma[b];
        }
        let mut total = BigInt::zero();
        for a in 1..top {
            if f[a] != 0 {
                total += BigInt::from(f[a]) * BigInt::from(g[top - a]);
            }
        }
        total
    }

    /// `Σ_{H·W <= N} Π W_i^{a_i + 1}` for `k = 1, 2`.
    pub fn aez(n: u64, a: &[u32]) -> BigInt {
        let n = n as usize;
        match a {
            [a1] => {
                let s = divisor_sums(n, a1 + 1);
                s.iter().fold(BigInt::zero(), |acc, x| acc + BigInt::from(*x))
            }
            [a1, a2] => {
                let s1 = divisor_sums(n, a1 + 1);
                let s2 = divisor_sums(n, a2 + 1);
                let mut g = vec![0u128; n + 1];
                for b in 1..=n {
                    g[b] = g[b - 1] + s2[b];
                }
                let mut total = BigInt::zero();
                for x in 1..n {
                    total += BigInt::from(s1[x]) * BigInt::from(g[n - x]);
                }
                total
            }
            _ => unimplemented!("only k = 1, 2"),
        }
    }

    /// `#{(l_1..l_m) >= 1 : N = 2l_1 + … + 2l_j + l_{j+1} + … + l_m}`.
    pub fn partition_count(n: u64, m: usize, j: usize) -> BigInt {
        let mut ways = vec![BigInt::zero(); n as usize + 1];
        ways[0] = BigInt::from(1);
        for i in 0..m {
            let step = if i < j { 2 } else { 1 };
            let mut next = vec![BigInt::zero(); n as usize + 1];
            for (s, wv) in ways.iter().enumerate() {
                if wv.is_zero() {
                    continue;
                }
                let mut t = s + step;
                while t <= n as usize {
                    next[t] += wv;
                    t += step;
                }
            }
            ways = next;
        }
        ways[n as usize].clone()
    }
}

/// Checks the convergent and asymptotic sum identities at truncation `n`.
///
/// Series are summed to `n` terms at 256-bit precision; lattice sums are
/// exact, at cutoff `n / 10` (at least 200), and compared as ratios.
pub fn validate_sum_identities(n: u64) -> Result<SumReport> {
    if n < 1000 {
        return Err(Error::Domain("truncation must be at least 1000".into()));
    }
    let mut hp = Hp::new();
    let pi = hp.pi();
    let z: Vec<BigFloat> = (0..=6).map(|s| if s < 2 { hp::int(0) } else { hp.zeta(s) }).collect();
    let mut checks = Vec::new();

    for m in 2..=4u32 {
        let mut s = hp::int(0);
        for k in (0..n).rev() {
            s = hp::add(&s, &hp::div(&hp::int(1), &hp::powi(&hp::int(2 * k as i64 + 1), m as usize)));
        }
        let two_m = hp::int(1 << m);
        let exp = hp::div(&hp::mul(&hp::sub(&two_m, &hp::int(1)), &z[m as usize]), &two_m);
        // the tail is about 1 / (2(m-1)(2n)^{m-1})
        let tol = if m == 2 { 1e-5 } else { 1e-8 };
        checks.push(check(format!("sumodd m={m}"), n, &s, &exp, false, tol));
    }
    if let Some(c) = checks.first() {
        let pi2_8 = hp::div(&hp::powi(&pi, 2), &hp::int(8));
        debug_assert!((c.expected - hp::to_f64(&pi2_8)).abs() < 1e-15);
    }

    for m in 1..=3u32 {
        let s: BigInt = (1..=n).map(|i| BigInt::from(i).pow(m)).sum();
        let obs = hp.big(&s);
        let exp = hp::div(&hp::powi(&hp::int(n as i64), m as usize + 1), &hp::int(m as i64 + 1));
        checks.push(check(format!("sumpower m={m}"), n, &obs, &exp, true, 2.0 * (m + 1) as f64 / n as f64));
    }

    for (m, j) in [(3usize, 1usize), (4, 2), (2, 0)] {
        let np = 200u64;
        let obs = hp.big(&lattice::partition_count(np, m, j));
        let denom = from_big(factorial(m as u32 - 1)) * int(1i64 << j);
        let exp = hp::div(&hp::powi(&hp::int(np as i64), m - 1), &hp.rational(&denom));
        checks.push(check(format!("partition m={m} j={j}"), np, &obs, &exp, true, 0.05));
    }

    let l = (n / 10).max(200);
    let big = |x: u64| hp::int(x as i64);
    for m in 2..=3u32 {
        let obs = hp.big(&lattice::combi1(l, m));
        let two = hp::int(1 << (m + 1));
        let inner = hp::sub(&hp::mul(&two, &z[m as usize]), &hp::mul(&hp::add(&two, &hp::int(1)), &z[m as usize + 1]));
        let exp = hp::div(&hp::mul(&hp::powi(&big(l), m as usize + 1), &inner), &hp::int(2 * (m as i64 + 1)));
        checks.push(check(format!("combi1 m={m}"), l, &obs, &exp, true, 1e-3));
    }
    {
        let obs = hp.big(&lattice::combi2(l));
        let inner = hp::add(
            &hp::sub(&z[2], &hp::mul(&hp::int(4), &z[3])),
            &hp::div(&hp::mul(&hp::int(49), &z[4]), &hp::int(16)),
        );
        let exp = hp::div(&hp::mul(&hp::powi(&big(l), 4), &inner), &hp::int(16));
        checks.push(check("combi2".into(), l, &obs, &exp, true, 1e-3));
    }
    {
        let l3 = l.min(20_000);
        let obs = hp.big(&lattice::combi3(l3));
        let z2sq = hp::mul(&z[2], &z[2]);
        let inner = hp::sub(&hp::mul(&hp::int(8), &z2sq), &hp::mul(&hp::int(9), &hp::mul(&z[2], &z[3])));
        let exp = hp::div(&hp::mul(&hp::powi(&big(l3), 5), &inner), &hp::int(30));
        checks.push(check("combi3".into(), l3, &obs, &exp, true, 1e-3));
    }
    for a in [vec![0u32], vec![2], vec![0, 0], vec![1, 0]] {
        let la = if a.len() == 1 { l } else { l.min(20_000) };
        let obs = hp.big(&lattice::aez(la, &a));
        let total: u32 = a.iter().sum::<u32>() + 2 * a.len() as u32;
        let mut exp = hp::div(&hp::powi(&big(la), total as usize), &hp.big(&factorial(total)));
        for &ai in &a {
            exp = hp::mul(&exp, &hp::mul(&hp.big(&factorial(ai + 1)), &z[ai as usize + 2]));
        }
        let name = format!("aez a={a:?}");
        checks.push(check(name, la, &obs, &exp, true, 1e-3));
    }
    Ok(SumReport { checks })
}
