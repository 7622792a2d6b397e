//! Eisenstein series, quasi-modular monomial bases, exact fitting and the
//! `q = e^{-h}` asymptotic substitution.
//!
//! All series here are in the variable `x = q²`. The pillowcase family is
//! generated by `E2(q²), E2(q⁴), E4(q⁴)`, i.e. `E2(x), E2(x²), E4(x²)`; the
//! abelian family by `E2(q²), E4(q²), E6(q²)`, i.e. `E2(x), E4(x), E6(x)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use astro_float::BigFloat;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::linalg::{solve_exact, SolveError};
use crate::exact::rational::{self, int, rat, zeta_neg, Rational};
use crate::exact::{HLaurent, PiPoly, QSeries};
use crate::hp::{self, Hp};

/// `ζ(1-2k)/2 + Σ_{n>=1} σ_{2k-1}(n) t^{mn}` to `prec` terms.
pub fn eisenstein(weight: u32, m: usize, prec: usize) -> Result<QSeries> {
    if !matches!(weight, 2 | 4 | 6) {
        return Err(Error::UnsupportedWeight(weight));
    }
    assert!(m >= 1);
    let mut c = vec![Rational::zero(); prec];
    if prec == 0 {
        return Ok(QSeries::from_coeffs(c));
    }
    c[0] = zeta_neg(weight - 1) / int(2);
    let mut n = 1;
    while n * m < prec {
        c[n * m] = rational::from_big(sigma(n as u64, weight - 1).into());
        n += 1;
    }
    Ok(QSeries::from_coeffs(c))
}

fn sigma(n: u64, k: u32) -> u128 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| (d as u128).pow(k)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Pillowcase,
    Abelian,
}

impl Family {
    /// `(weight, stretch in x)` of the three generators.
    pub fn generators(self) -> [(u32, usize); 3] {
        match self {
            Family::Pillowcase => [(2, 1), (2, 2), (4, 2)],
            Family::Abelian => [(2, 1), (4, 1), (6, 1)],
        }
    }

    pub fn generator_names(self) -> [&'static str; 3] {
        match self {
            Family::Pillowcase => ["E2(q^2)", "E2(q^4)", "E4(q^4)"],
            Family::Abelian => ["E2(q^2)", "E4(q^2)", "E6(q^2)"],
        }
    }

    pub fn weight(self, exps: &Monomial) -> u32 {
        self.generators().iter().zip(exps).map(|((w, _), e)| w * e).sum()
    }

    /// Image of each generator under `q = e^{-h}`, up to exponentially small terms.
    pub fn generator_asymptotics(self) -> [HLaurent; 3] {
        let pi = |c: Rational, k: i32| PiPoly::monomial(c, k);
        let e2 = &HLaurent::term(-2, pi(rat(1, 24), 2)) + &HLaurent::term(-1, pi(rat(-1, 4), 0));
        match self {
            Family::Pillowcase => [
                e2,
                &HLaurent::term(-2, pi(rat(1, 96), 2)) + &HLaurent::term(-1, pi(rat(-1, 8), 0)),
                HLaurent::term(-4, pi(rat(1, 3840), 4)),
            ],
            Family::Abelian => [
                e2,
                HLaurent::term(-4, pi(rat(1, 240), 4)),
                HLaurent::term(-6, pi(rat(1, 504), 6)),
            ],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Pillowcase => "pillowcase",
            Family::Abelian => "abelian",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pillowcase" => Ok(Family::Pillowcase),
            "abelian" => Ok(Family::Abelian),
            _ => Err(Error::Domain(format!("unknown family `{s}`"))),
        }
    }
}

/// Exponents of the three generators.
pub type Monomial = [u32; 3];

/// All monomials of weight `<= cap`, by weight then exponent order.
pub fn monomial_basis(cap: u32, family: Family) -> Vec<Monomial> {
    let [(w0, _), (w1, _), (w2, _)] = family.generators();
    let mut out = Vec::new();
    for c in 0..=cap / w2 {
        for b in 0..=(cap - c * w2) / w1 {
            for a in 0..=(cap - c * w2 - b * w1) / w0 {
                out.push([a, b, c]);
            }
        }
    }
    out.sort_by_key(|m| (family.weight(m), *m));
    out
}

fn generator_series(family: Family, prec: usize) -> [QSeries; 3] {
    family
        .generators()
        .map(|(w, m)| eisenstein(w, m, prec).expect("generator weights are supported"))
}

fn expand_monomial(gens: &[QSeries; 3], m: &Monomial, prec: usize) -> QSeries {
    let mut s = QSeries::one(prec);
    for (g, &e) in gens.iter().zip(m) {
        if e > 0 {
            s = s.mul(&g.pow(e));
        }
    }
    s
}

/// Polynomial in the generators of one family with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMPolynomial {
    family: Family,
    cap: u32,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    exponents: Monomial,
    family: Family,
    num: String,
    den: String,
}

impl QMPolynomial {
    pub fn zero(family: Family, cap: u32) -> Self {
        Self { family, cap, terms: BTreeMap::new() }
    }

    pub fn constant(family: Family, c: Rational) -> Self {
        let mut p = Self::zero(family, 0);
        p.insert([0, 0, 0], c);
        p
    }

    pub fn from_terms(
        family: Family,
        cap: u32,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(family, cap);
        for (m, c) in terms {
            let w = family.weight(&m);
            if w > cap {
                return Err(Error::WeightAboveCap { weight: w, cap });
            }
            p.insert(m, c);
        }
        Ok(p)
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest weight carrying a nonzero coefficient.
    pub fn weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.family.weight(m)).max()
    }

    pub fn is_pure_weight(&self) -> bool {
        let mut ws = self.terms.keys().map(|m| self.family.weight(m));
        match ws.next() {
            None => true,
            Some(w) => ws.all(|v| v == w),
        }
    }

    pub fn expand(&self, prec: usize) -> QSeries {
        let gens = generator_series(self.family, prec);
        let mut out = QSeries::zero(prec);
        for (m, c) in &self.terms {
            out = &out + &expand_monomial(&gens, m, prec).scale(c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.family, self.cap);
        for (m, v) in &self.terms {
            out.insert(*m, v * c);
        }
        out
    }

    fn check_family(&self, other: &Self) {
        assert_eq!(self.family, other.family, "mixing quasi-modular families");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_family(other);
        let mut out = self.clone();
        out.cap = self.cap.max(other.cap);
        for (m, v) in &other.terms {
            out.insert(*m, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_family(other);
        let mut out = Self::zero(self.family, self.cap + other.cap);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.insert([a[0] + b[0], a[1] + b[1], a[2] + b[2]], x * y);
            }
        }
        out
    }

    /// Replaces each generator by its `q = e^{-h}` image and expands.
    pub fn substitute_asymptotics(&self) -> HLaurent {
        let images = self.family.generator_asymptotics();
        let mut out = HLaurent::zero();
        for (m, c) in &self.terms {
            let mut t = HLaurent::one();
            for (img, &e) in images.iter().zip(m) {
                if e > 0 {
                    t = &t * &img.pow(e);
                }
            }
            out = &out + &t.scale(c);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm {
                exponents: *m,
                family: self.family,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        serde_json::to_value(terms).expect("plain data serializes")
    }

    /// Inverse of [`QMPolynomial::to_json`]; an empty list needs the family
    /// given explicitly.
    pub fn from_json(value: &serde_json::Value, family: Family, cap: u32) -> Result<Self> {
        let terms: Vec<JsonTerm> = serde_json::from_value(value.clone())?;
        let mut out = Vec::new();
        for t in terms {
            if t.family != family {
                return Err(Error::Domain(format!("term of family {} in {family} polynomial", t.family)));
            }
            out.push((t.exponents, rational::parse(&format!("{}/{}", t.num, t.den))?));
        }
        Self::from_terms(family, cap, out)
    }
}

impl fmt::Display for QMPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = self.family.generator_names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = rational::format(c);
                for (name, &e) in names.iter().zip(m) {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{name}")),
                        _ => s.push_str(&format!("*{name}^{e}")),
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A fit together with how many coefficients were used to pin it down.
#[derive(Clone, Debug)]
pub struct Fit {
    pub poly: QMPolynomial,
    pub rows: usize,
    pub unknowns: usize,
}

impl Fit {
    /// Coefficients beyond the basis size, each of which was checked exactly.
    pub fn surplus(&self) -> usize {
        self.rows - self.unknowns
    }
}

/// Exact fit of every known coefficient of `series` in the basis of weight `<= cap`.
pub fn fit(series: &QSeries, cap: u32, family: Family) -> Result<QMPolynomial> {
    Ok(fit_report(series, cap, family)?.poly)
}

pub fn fit_report(series: &QSeries, cap: u32, family: Family) -> Result<Fit> {
    let basis = monomial_basis(cap, family);
    let rows = series.prec();
    if rows < basis.len() + 1 {
        return Err(Error::InsufficientCoefficients { needed: basis.len() + 1, available: rows });
    }
    let gens = generator_series(family, rows);
    let cols: Vec<QSeries> = basis.iter().map(|m| expand_monomial(&gens, m, rows)).collect();
    let a: Vec<Vec<Rational>> =
        (0..rows).map(|i| cols.iter().map(|c| c.coeffs()[i].clone()).collect()).collect();
    let x = solve_exact(&a, series.coeffs()).map_err(|e| match e {
        SolveError::Inconsistent { row } => Error::InconsistentFit { row, cap },
        e => Error::Solve(e),
    })?;
    let poly = QMPolynomial::from_terms(family, cap, basis.into_iter().zip(x))?;
    Ok(Fit { poly, rows, unknowns: cols.len() })
}

/// Truncation used when fitting: basis size plus two surplus coefficients.
pub fn fit_terms(cap: u32, family: Family) -> usize {
    monomial_basis(cap, family).len() + 2
}

/// One line of the asymptotic substitution check.
#[derive(Clone, Debug, Serialize)]
pub struct GateRow {
    pub generator: String,
    pub h: f64,
    /// Leading coefficient from the substitution rule (with π evaluated).
    pub predicted: f64,
    /// Leading coefficient recovered from the q-series at `q = e^{-h}`.
    pub observed: f64,
    pub rel_err: f64,
}

fn signed_pow(x: &BigFloat, k: i32) -> BigFloat {
    let p = hp::powi(x, k.unsigned_abs() as usize);
    if k < 0 {
        hp::div(&hp::int(1), &p)
    } else {
        p
    }
}

fn pipoly_hp(hp: &mut Hp, p: &PiPoly) -> BigFloat {
    let pi = hp.pi();
    let mut acc = hp::int(0);
    for (k, c) in p.terms() {
        acc = hp::add(&acc, &hp::mul(&hp.rational(c), &signed_pow(&pi, k)));
    }
    acc
}

/// `E_w(x^m)` at `q = e^{-h}` (`x = e^{-2h}`), summed until terms drop below
/// the working precision.
fn eisenstein_at(hp: &mut Hp, weight: u32, m: usize, h: &BigFloat) -> BigFloat {
    let step = hp.exp(&hp::mul(h, &hp::int(-2 * m as i64)));
    let mut acc = hp.rational(&(zeta_neg(weight - 1) / int(2)));
    let mut power = step.clone();
    let hf = hp::to_f64(h);
    // stop once n^{w-1} e^{-2mhn} is far below 2^-256 relative to the pole
    let n_max = ((260.0 * std::f64::consts::LN_2 + 40.0 * (weight as f64)) / (2.0 * m as f64 * hf)) as u64 + 10;
    let sig = divisor_sums(n_max, weight - 1);
    for s in sig.iter().skip(1) {
        let term = hp::mul(&hp.parse(&s.to_string()), &power);
        acc = hp::add(&acc, &term);
        power = hp::mul(&power, &step);
    }
    acc
}

fn divisor_sums(n: u64, k: u32) -> Vec<u128> {
    let mut out = vec![0u128; n as usize + 1];
    for d in 1..=n {
        let dk = (d as u128).pow(k);
        let mut j = d;
        while j <= n {
            out[j as usize] += dk;
            j += d;
        }
    }
    out
}

/// Compares each generator's substituted leading coefficient against the
/// high-precision value of its q-series at `q = e^{-h}`.
pub fn numeric_gate(hs: &[f64]) -> Vec<GateRow> {
    let mut hp = Hp::new();
    let mut seen = Vec::new();
    let mut rows = Vec::new();
    for family in [Family::Pillowcase, Family::Abelian] {
        let images = family.generator_asymptotics();
        for ((&(w, m), name), image) in
            family.generators().iter().zip(family.generator_names()).zip(images)
        {
            if seen.contains(&(w, m)) {
                continue;
            }
            seen.push((w, m));
            let lead = image.pole_order();
            for &hv in hs {
                let h = hp.parse(&format!("{hv}"));
                let value = eisenstein_at(&mut hp, w, m, &h);
                let mut rest = value;
                for (k, c) in image.terms() {
                    if k != -lead {
                        let t = hp::mul(&pipoly_hp(&mut hp, c), &signed_pow(&h, k));
                        rest = hp::sub(&rest, &t);
                    }
                }
                let observed = hp::mul(&rest, &hp::powi(&h, lead as usize));
                let predicted = pipoly_hp(&mut hp, &image.coeff(-lead));
                rows.push(GateRow {
                    generator: name.to_string(),
                    h: hv,
                    predicted: hp::to_f64(&predicted),
                    observed: hp::to_f64(&observed),
                    rel_err: hp::rel_err(&observed, &predicted),
                });
            }
        }
    }
    rows
}
