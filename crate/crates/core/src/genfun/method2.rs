//! The interpolation route: write `g_ν · Π f_{μ_i}` as a polynomial in the
//! shifted power sums `p_k`, `p̄_k`, then bracket each monomial separately.
//!
//! Only `dim λ` and `f_{2,…,2}` enter the brackets themselves; general
//! characters are needed only to interpolate `g_ν` and `f_m`, and every
//! interpolant is checked on partitions it was not fitted on.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::linalg::solve_exact;
use crate::exact::Rational;
use crate::exec::Exec;
use crate::partitions::{
    balanced_partitions_of, bracket_weight, central_character, p_k, partitions_up_to, pbar_k, Padding,
    Partition, WeightVariant,
};
use crate::quasimodular::{fit_report, fit_terms, Family, QMPolynomial};
use crate::strata::ProfilePair;

use super::pillow::z_empty;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// `p_k`, weight `k + 1`.
    P(u32),
    /// `p̄_k`, weight `k`.
    PBar(u32),
}

impl Gen {
    pub fn weight(self) -> u32 {
        match self {
            Gen::P(k) => k + 1,
            Gen::PBar(k) => k,
        }
    }

    fn eval(self, lambda: &Partition) -> Rational {
        match self {
            Gen::P(k) => p_k(lambda, k),
            Gen::PBar(k) => pbar_k(lambda, k),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::P(k) => write!(f, "p{k}"),
            Gen::PBar(k) => write!(f, "pb{k}"),
        }
    }
}

/// Sorted list of generators with repetition; empty is the constant 1.
pub type LMonomial = Vec<Gen>;

pub fn monomial_weight(m: &LMonomial) -> u32 {
    m.iter().map(|g| g.weight()).sum()
}

fn eval_monomial(m: &LMonomial, lambda: &Partition, memo: &mut BTreeMap<Gen, Rational>) -> Rational {
    let mut acc = Rational::one();
    for g in m {
        let v = memo.entry(*g).or_insert_with(|| g.eval(lambda));
        acc *= &*v;
    }
    acc
}

/// Monomials in the given generators with total weight at most `cap`.
fn monomials(gens: &[Gen], cap: u32) -> Vec<LMonomial> {
    fn rec(gens: &[Gen], start: usize, left: u32, cur: &mut LMonomial, out: &mut Vec<LMonomial>) {
        out.push(cur.clone());
        for i in start..gens.len() {
            let w = gens[i].weight();
            if w <= left {
                cur.push(gens[i]);
                rec(gens, i, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(gens, 0, cap, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (monomial_weight(m), m.clone()));
    out
}

/// Monomials of `Λ̄` (`p_k`, `p̄_k`, `k >= 1`) of weight at most `cap`.
pub fn lambda_bar_monomials(cap: u32) -> Vec<LMonomial> {
    let mut gens = Vec::new();
    for k in 1..=cap {
        gens.push(Gen::PBar(k));
        if k < cap {
            gens.push(Gen::P(k));
        }
    }
    gens.sort();
    monomials(&gens, cap)
}

/// Monomials in `p_k` alone, graded by `k`, of degree at most `cap`.
pub fn shifted_monomials(cap: u32) -> Vec<LMonomial> {
    let mut out: Vec<LMonomial> = monomials(&(1..=cap).map(Gen::PBar).collect::<Vec<_>>(), cap);
    for m in &mut out {
        for g in m.iter_mut() {
            if let Gen::PBar(k) = *g {
                *g = Gen::P(k);
            }
        }
    }
    out
}

/// Rational combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LPoly {
    terms: BTreeMap<LMonomial, Rational>,
}

impl LPoly {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self { terms }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (LMonomial, Rational)>) -> Self {
        let mut terms = BTreeMap::new();
        for (mut m, c) in pairs {
            m.sort();
            if !c.is_zero() {
                *terms.entry(m).or_insert_with(Rational::zero) += c;
            }
        }
        terms.retain(|_, c: &mut Rational| !c.is_zero());
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[Gen]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, lambda: &Partition) -> Rational {
        let mut memo = BTreeMap::new();
        self.terms.iter().map(|(m, c)| c * eval_monomial(m, lambda, &mut memo)).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut pairs = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut m = a.clone();
                m.extend(b.iter().copied());
                pairs.push((m, ca * cb));
            }
        }
        Self::from_pairs(pairs)
    }

    /// Largest monomial weight.
    pub fn weight(&self) -> u32 {
        self.terms.keys().map(monomial_weight).max().unwrap_or(0)
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let c = crate::exact::rational::format(c);
                if m.is_empty() {
                    c
                } else {
                    let g: Vec<String> = m.iter().map(|g| g.to_string()).collect();
                    format!("{c}*{}", g.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Exact interpolation of `target` on `fit` by `basis`, checked on `holdout`.
fn interpolate(
    basis: &[LMonomial],
    fit: &[Partition],
    holdout: &[Partition],
    target: &dyn Fn(&Partition) -> Result<Rational>,
) -> Result<LPoly> {
    let mut rows = Vec::with_capacity(fit.len());
    let mut rhs = Vec::with_capacity(fit.len());
    for l in fit {
        let mut memo = BTreeMap::new();
        rows.push(basis.iter().map(|m| eval_monomial(m, l, &mut memo)).collect::<Vec<_>>());
        rhs.push(target(l)?);
    }
    let coeffs = solve_exact(&rows, &rhs).map_err(|e| Error::Interpolation(format!("{e:?} on {} points", fit.len())))?;
    let poly = LPoly::from_pairs(basis.iter().cloned().zip(coeffs));
    for l in holdout {
        if poly.eval(l) != target(l)? {
            return Err(Error::Interpolation(format!("holdout {l} disagrees")));
        }
    }
    Ok(poly)
}

/// `f_m` as a polynomial in the `p_k`, fitted on all partitions of size at
/// most `m + 3` and checked up to `m + 5`.
pub fn interpolate_f(m: u32) -> Result<LPoly> {
    if m < 2 {
        return Err(Error::InvalidProfile(format!("f_{m} is not a ramification")));
    }
    let target = |l: &Partition| -> Result<Rational> {
        if l.size() < m {
            Ok(Rational::zero())
        } else {
            central_character(l, &[m], Padding::Ones)
        }
    };
    let fit: Vec<Partition> = partitions_up_to(m + 3).into_iter().flatten().collect();
    let holdout: Vec<Partition> =
        (m + 4..=m + 5).flat_map(crate::partitions::partitions_of).collect();
    interpolate(&shifted_monomials(m), &fit, &holdout, &target)
}

/// `g_ν ∈ Λ̄` of weight `|ν|/2` with `g_ν = f_{ν,2,…,2} / f_{2,…,2}` on
/// balanced partitions of size at least `|ν|`.
///
/// The fit uses balanced partitions from `|ν|` upward over several distinct
/// sizes, more points than unknowns; two further sizes are held out.
pub fn interpolate_g_nu(nu: &[u32]) -> Result<LPoly> {
    let size: u32 = nu.iter().sum();
    if !size.is_multiple_of(2) {
        return Err(Error::InvalidProfile("|ν| must be even".into()));
    }
    if nu.is_empty() {
        return Ok(LPoly::constant(Rational::one()));
    }
    let basis = lambda_bar_monomials(size / 2);
    let target = |l: &Partition| -> Result<Rational> {
        Ok(central_character(l, nu, Padding::Twos)? / central_character(l, &[], Padding::Twos)?)
    };
    let mut fit = Vec::new();
    let mut n = size;
    let mut sizes = 0;
    // distinct sizes, at least |ν|/4 + 1 of them
    while fit.len() < basis.len() + 4 || sizes < size / 4 + 1 {
        fit.extend(balanced_partitions_of(n));
        n += 2;
        sizes += 1;
    }
    let holdout: Vec<Partition> = (n..n + 4).step_by(2).flat_map(balanced_partitions_of).collect();
    interpolate(&basis, &fit, &holdout, &target)
}

/// `g_ν · Π f_{μ_i}`.
pub fn integrand(p: &ProfilePair) -> Result<LPoly> {
    let mut acc = interpolate_g_nu(p.nu())?;
    for &m in p.mu() {
        acc = acc.mul(&interpolate_f(m)?);
    }
    Ok(acc)
}

/// A fitted bracket and whether it came out of pure weight.
#[derive(Clone, Debug)]
pub struct BracketFit {
    pub poly: QMPolynomial,
    pub weight: u32,
    pub pure_weight: bool,
}

/// `⟨m⟩_w = Z(∅,∅)^{-1} Σ_{λ balanced} w(λ) m(λ) x^{|λ|/2}`, fitted at the
/// weight of `m`.
pub fn bracket_monomial(m: &LMonomial, variant: WeightVariant, exec: Exec) -> Result<BracketFit> {
    let w = monomial_weight(m);
    let prec = fit_terms(w, Family::Pillowcase);
    let items: Vec<(usize, Partition)> = (0..prec)
        .flat_map(|d| balanced_partitions_of(2 * d as u32).into_iter().map(move |l| (d, l)))
        .collect();
    let terms = exec.map(&items, |(_, l)| -> Result<Rational> {
        let mut memo = BTreeMap::new();
        Ok(bracket_weight(l, variant)? * eval_monomial(m, l, &mut memo))
    });
    let mut num = vec![Rational::zero(); prec];
    for ((d, _), t) in items.iter().zip(terms) {
        num[*d] += t?;
    }
    let series = crate::exact::QSeries::from_coeffs(num).div(&z_empty(prec))?;
    let poly = fit_report(&series, w, Family::Pillowcase)?.poly;
    let pure_weight = poly.is_zero() || poly.weight() == Some(w);
    Ok(BracketFit { poly, weight: w, pure_weight })
}

/// `Z'(μ, ν)` through interpolation and monomial brackets; also returns the
/// monomials whose bracket was not of pure weight.
pub fn zprime_poly_method2(
    p: &ProfilePair,
    variant: WeightVariant,
    exec: Exec,
) -> Result<(QMPolynomial, Vec<LMonomial>)> {
    let cap = p.weight();
    let f = integrand(p)?;
    let mut total = QMPolynomial::zero(Family::Pillowcase, cap);
    let mut impure = Vec::new();
    for (m, c) in f.terms() {
        let b = bracket_monomial(m, variant, exec)?;
        if !b.pure_weight {
            impure.push(m.clone());
        }
        let lifted = QMPolynomial::from_terms(Family::Pillowcase, cap, b.poly.terms().map(|(k, v)| (*k, v.clone())))?;
        total = total.add(&lifted.scale(c));
    }
    Ok((total, impure))
}
