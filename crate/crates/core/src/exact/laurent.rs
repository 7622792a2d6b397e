use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::pipoly::PiPoly;
use super::rational::Rational;

/// Finite Laurent polynomial `Σ a_k h^k` in `h` with [`PiPoly`] coefficients.
///
/// Keys are powers of `h`, so a pole of order `k` sits at key `-k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HLaurent {
    terms: BTreeMap<i32, PiPoly>,
}

impl HLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(0, PiPoly::constant(Rational::from_integer(1.into())))
    }

    pub fn term(h_power: i32, c: PiPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(h_power, c);
        }
        Self { terms }
    }

    pub fn coeff(&self, h_power: i32) -> PiPoly {
        self.terms.get(&h_power).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &PiPoly)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest `k` with a nonzero `h^{-k}` term (0 when there is no pole).
    pub fn pole_order(&self) -> i32 {
        self.terms.keys().next().map_or(0, |&k| (-k).max(0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (&k, v) in &self.terms {
            out.add_term(k, v.scale(c));
        }
        out
    }

    fn add_term(&mut self, k: i32, c: PiPoly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&k) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &HLaurent {
    type Output = HLaurent;
    fn add(self, rhs: &HLaurent) -> HLaurent {
        let mut out = self.clone();
        for (&k, v) in &rhs.terms {
            out.add_term(k, v.clone());
        }
        out
    }
}

impl Sub for &HLaurent {
    type Output = HLaurent;
    fn sub(self, rhs: &HLaurent) -> HLaurent {
        let mut out = self.clone();
        for (&k, v) in &rhs.terms {
            out.add_term(k, -v);
        }
        out
    }
}

impl Mul for &HLaurent {
    type Output = HLaurent;
    fn mul(self, rhs: &HLaurent) -> HLaurent {
        let mut out = HLaurent::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for HLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(&k, v)| format!("({v})·h^{k}")).collect();
        f.write_str(&parts.join(" + "))
    }
}
