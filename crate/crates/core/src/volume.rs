//! Volume extraction, normalization conventions and closed forms.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{double_factorial, factorial, from_big, int, pow, Rational};
use crate::exact::{HLaurent, PiPoly};
use crate::genfun::Pipeline;
use crate::strata::{StratumInvariants, StratumSignature};

/// `Vol^EO` from the asymptotics `L(h)` of the connected function:
/// coefficient of `h^{-dim}` times `2 dim / dim!`. Any stronger pole is an error.
pub fn extract_volume(l: &HLaurent, dim: u32) -> Result<PiPoly> {
    if dim == 0 {
        return Err(Error::Domain("no stratum of dimension 0".into()));
    }
    let order = l.pole_order();
    if order > dim as i32 {
        return Err(Error::ExcessPole { order, dim });
    }
    let c = l.coeff(-(dim as i32));
    Ok(c.scale(&(int(2 * dim as i64) / from_big(factorial(dim)))))
}

/// Whether the multiplicity factor of the normalization counts poles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoleConvention {
    #[default]
    IncludePoles,
    ExcludePoles,
}

/// `4^{dim} / 2^{l(μ)} · Π m_i!` with `m_i` the multiplicities of odd orders.
pub fn aez_factor(sig: &StratumSignature, poles: PoleConvention) -> Rational {
    let p = sig.to_profile();
    let mut f = from_big(num_bigint::BigInt::from(4u32).pow(p.dim())) / int(1i64 << p.mu().len());
    for (order, m) in sig.multiplicities() {
        if order % 2 != 0 && (order > 0 || poles == PoleConvention::IncludePoles) {
            f *= from_big(factorial(m));
        }
    }
    f
}

pub fn to_aez(vol_eo: &PiPoly, sig: &StratumSignature, poles: PoleConvention) -> PiPoly {
    vol_eo.scale(&aez_factor(sig, poles))
}

/// `Vol^unnumb = |Γ| / Π m_i! · Vol^numb`, over all orders.
pub fn unnumbered_from_numbered(vol: &PiPoly, multiplicities: &[u32], gamma: u32) -> PiPoly {
    let denom = multiplicities.iter().fold(num_bigint::BigInt::one(), |a, &m| a * factorial(m));
    vol.scale(&(int(gamma as i64) / from_big(denom)))
}

/// `n!! / (n+1)!!`.
fn df_ratio(n: i64) -> Rational {
    from_big(double_factorial(n)) / from_big(double_factorial(n + 1))
}

/// `Vol Q(β) = 2π² Π v(β_i)` for genus 0.
pub fn genus0_volume(sig: &StratumSignature) -> Result<PiPoly> {
    if sig.genus() != 0 {
        return Err(Error::ClosedFormInapplicable(format!("{sig} has genus {}", sig.genus())));
    }
    let mut c = int(2);
    let mut pi = 2i32;
    for &b in sig.orders() {
        let b = b as i64;
        c *= df_ratio(b);
        pi += b as i32;
        if b.rem_euclid(2) == 1 {
            pi += 1;
        } else {
            c *= int(2);
        }
    }
    Ok(PiPoly::monomial(c, pi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypType {
    /// `Q(k1², k2²)`, both odd, `k1 != k2`.
    One,
    /// `Q(k⁴)`, `k` odd.
    OnePrime,
    /// `Q(k1², 2k2+2)`, `k1` odd, `k2` even.
    Two,
    /// `Q(2k1+2, 2k2+2)`, both even.
    Three,
}

impl FromStr for HypType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(HypType::One),
            "1'" | "1p" | "1prime" => Ok(HypType::OnePrime),
            "2" => Ok(HypType::Two),
            "3" => Ok(HypType::Three),
            _ => Err(Error::Domain(format!("unknown hyperelliptic type `{s}`"))),
        }
    }
}

fn odd_ok(k: i64) -> bool {
    k >= -1 && k.rem_euclid(2) == 1
}

fn even_ok(k: i64) -> bool {
    k >= 0 && k % 2 == 0
}

/// The stratum carrying the hyperelliptic component of the given type.
pub fn hyperelliptic_stratum(t: HypType, k1: i64, k2: i64) -> Result<StratumSignature> {
    let bad = || Error::ClosedFormInapplicable(format!("type {t:?} with ({k1}, {k2})"));
    let orders: Vec<i64> = match t {
        HypType::One if odd_ok(k1) && odd_ok(k2) && k1 != k2 => vec![k1, k1, k2, k2],
        HypType::OnePrime if odd_ok(k1) && k1 == k2 && k1 != -1 => vec![k1; 4],
        HypType::Two if odd_ok(k1) && even_ok(k2) => vec![k1, k1, 2 * k2 + 2],
        HypType::Three if even_ok(k1) && even_ok(k2) => vec![2 * k1 + 2, 2 * k2 + 2],
        _ => return Err(bad()),
    };
    StratumSignature::new(orders.into_iter().map(|o| o as i32).collect())
}

/// Volume of the hyperelliptic component, `d = k1 + k2 + 4`, zeros labeled
/// and no quotient by the hyperelliptic involution.
pub fn hyperelliptic_volume(t: HypType, k1: i64, k2: i64) -> Result<PiPoly> {
    hyperelliptic_stratum(t, k1, k2)?;
    let d = (k1 + k2 + 4) as u32;
    let base = from_big(num_bigint::BigInt::from(2u32).pow(d)) / from_big(factorial(d));
    let r = df_ratio(k1) * df_ratio(k2);
    let d = d as i32;
    Ok(match t {
        HypType::One => PiPoly::monomial(base * r, d),
        HypType::OnePrime => PiPoly::monomial(int(3) * base * r, d),
        HypType::Two => PiPoly::monomial(base * r, d - 1),
        HypType::Three => PiPoly::monomial(int(2) * base * r, d - 2),
    })
}

/// Abelian hyperelliptic components at area 1/2: type 1 is `H(k-1)`, type 2 is `H((k/2-1)²)`.
pub fn hyperelliptic_abelian_volume(abelian_type: u32, k: i64) -> Result<PiPoly> {
    let bad = || Error::ClosedFormInapplicable(format!("abelian type {abelian_type} with k = {k}"));
    let ok = match abelian_type {
        1 => k >= 3 && k % 2 == 1,
        2 => k >= 4 && k % 2 == 0,
        _ => false,
    };
    if !ok {
        return Err(bad());
    }
    let ratio = from_big(double_factorial(k - 2)) / from_big(double_factorial(k - 1));
    let e = if abelian_type == 1 { k + 2 } else { k + 3 };
    let c = from_big(num_bigint::BigInt::from(2u32).pow(e as u32)) / from_big(factorial((k + 2) as u32)) * ratio;
    let pi = if abelian_type == 1 { k + 1 } else { k };
    Ok(PiPoly::monomial(c, pi as i32))
}

/// `Vol_{1/2} = 2^{dim} Vol_1`.
pub fn area_half_from_unit(vol: &PiPoly, dim: u32) -> PiPoly {
    vol.scale(&pow(&int(2), dim))
}

pub fn area_unit_from_half(vol: &PiPoly, dim: u32) -> PiPoly {
    vol.scale(&pow(&int(2), dim).recip())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    Eo,
    /// Zeros and poles labeled, surfaces counted modulo symmetries; the table convention.
    #[default]
    Aez,
    AezUnnumbered,
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eo" => Ok(Convention::Eo),
            "aez" | "aez-numbered" => Ok(Convention::Aez),
            "aez-unnumbered" => Ok(Convention::AezUnnumbered),
            _ => Err(Error::Domain(format!("unknown convention `{s}`"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Eo => "eo",
            Convention::Aez => "aez",
            Convention::AezUnnumbered => "aez-unnumbered",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Auto,
    Eo,
    ClosedForm,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "eo" => Ok(Method::Eo),
            "closed-form" => Ok(Method::ClosedForm),
            _ => Err(Error::Domain(format!("unknown method `{s}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::Eo => "eo",
            Method::ClosedForm => "closed-form",
        })
    }
}

/// The five connected strata that are entirely hyperelliptic, with their
/// table-convention closed form.
pub fn connected_hyperelliptic(sig: &StratumSignature) -> Option<PiPoly> {
    let (t, k1, k2) = match sig.orders() {
        [1, 1, -1, -1] => (HypType::One, 1, -1),
        [1, 1, 1, 1] => (HypType::OnePrime, 1, 1),
        [2, -1, -1] => (HypType::Two, -1, 0),
        [2, 1, 1] => (HypType::Two, 1, 0),
        [2, 2] => (HypType::Three, 0, 0),
        _ => return None,
    };
    let v = hyperelliptic_volume(t, k1, k2).ok()?;
    // the table counts modulo the hyperelliptic involution, which only
    // survives labeling for the third type
    Some(if t == HypType::Three { v.scale(&Rational::new(1.into(), 2.into())) } else { v })
}

/// Closed form in the table convention, where one applies.
pub fn closed_form(sig: &StratumSignature) -> Option<PiPoly> {
    if sig.genus() == 0 {
        return genus0_volume(sig).ok();
    }
    connected_hyperelliptic(sig)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VolumeResult {
    pub stratum: String,
    pub convention: Convention,
    pub method: Method,
    pub num: String,
    pub den: String,
    pub pi_power: i32,
    pub dim: u32,
    pub genus: u32,
    pub g_eff: u32,
    pub weight: u32,
    /// Closed-form value in the same convention, when one applies and was checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
}

impl VolumeResult {
    pub fn coefficient(&self) -> Rational {
        Rational::new(self.num.parse().unwrap(), self.den.parse().unwrap())
    }

    pub fn value(&self) -> PiPoly {
        PiPoly::monomial(self.coefficient(), self.pi_power)
    }

    fn build(sig: &StratumSignature, inv: StratumInvariants, conv: Convention, method: Method, v: &PiPoly) -> Result<Self> {
        // empty strata give exactly zero
        let (c, pi_power) = match v.as_monomial() {
            Some(m) => m,
            None if v.is_zero() => (Rational::from_integer(0.into()), 0),
            None => return Err(Error::NotMonomial(v.to_string())),
        };
        let (c, pi_power) = if v.is_zero() { (Rational::from_integer(0.into()), 2 * inv.g_eff as i32) } else { (c, pi_power) };
        if c.is_negative() || pi_power != 2 * inv.g_eff as i32 {
            return Err(Error::NotMonomial(format!("{v} for {sig} (expected positive · π^{})", 2 * inv.g_eff)));
        }
        Ok(Self {
            stratum: sig.to_string(),
            convention: conv,
            method,
            num: c.numer().to_string(),
            den: c.denom().to_string(),
            pi_power,
            dim: inv.dim,
            genus: inv.genus,
            g_eff: inv.g_eff,
            weight: inv.weight,
            closed_form: None,
        })
    }
}

impl fmt::Display for VolumeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `Vol^EO` through the character pipeline.
pub fn eo_volume(pipe: &Pipeline, sig: &StratumSignature) -> Result<PiPoly> {
    let p = sig.to_profile();
    pipe.check_weight(p.weight())?;
    let l = pipe.connected_laurent(&p)?;
    extract_volume(&l, p.dim())
}

fn convert(aez: &PiPoly, sig: &StratumSignature, conv: Convention, poles: PoleConvention) -> PiPoly {
    match conv {
        Convention::Aez => aez.clone(),
        Convention::Eo => aez.scale(&aez_factor(sig, poles).recip()),
        Convention::AezUnnumbered => {
            let m: Vec<u32> = sig.multiplicities().iter().map(|&(_, m)| m).collect();
            unnumbered_from_numbered(aez, &m, 1)
        }
    }
}

/// Volume of a stratum in the requested convention.
///
/// With [`Method::Auto`] the pipeline runs and, where a closed form exists,
/// the two must agree exactly.
pub fn compute_volume(
    pipe: &Pipeline,
    sig: &StratumSignature,
    conv: Convention,
    method: Method,
    poles: PoleConvention,
) -> Result<VolumeResult> {
    let inv = sig.to_profile().invariants()?;
    let mut checked = None;
    let aez = match method {
        Method::ClosedForm => closed_form(sig)
            .ok_or_else(|| Error::ClosedFormInapplicable(sig.to_string()))?,
        Method::Eo | Method::Auto => {
            let v = to_aez(&eo_volume(pipe, sig)?, sig, poles);
            if method == Method::Auto {
                if let Some(cf) = closed_form(sig) {
                    if cf != v {
                        return Err(Error::Domain(format!(
                            "pipeline gives {v}, closed form gives {cf} for {sig}"
                        )));
                    }
                    checked = Some(cf);
                }
            }
            v
        }
    };
    let mut out = VolumeResult::build(sig, inv, conv, method, &convert(&aez, sig, conv, poles))?;
    out.closed_form = checked.map(|cf| convert(&cf, sig, conv, poles).to_string());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn sig(s: &str) -> StratumSignature {
        s.parse().unwrap()
    }

    #[test]
    fn extraction_arithmetic() {
        let l = HLaurent::term(-2, PiPoly::constant(int(5)));
        assert_eq!(extract_volume(&l, 2).unwrap(), PiPoly::constant(int(10)));
        let bad = HLaurent::term(-3, PiPoly::constant(int(1)));
        assert!(matches!(extract_volume(&bad, 2), Err(Error::ExcessPole { order: 3, dim: 2 })));
    }

    #[test]
    fn normalization_factors() {
        assert_eq!(aez_factor(&sig("2,-1^2"), PoleConvention::IncludePoles), int(64));
        assert_eq!(aez_factor(&sig("-1^4"), PoleConvention::IncludePoles), int(384));
        assert_eq!(aez_factor(&sig("-1^4"), PoleConvention::ExcludePoles), int(16));
        let v = PiPoly::monomial(rat(4, 3), 4);
        assert_eq!(unnumbered_from_numbered(&v, &[1, 1], 1), v);
        assert_eq!(unnumbered_from_numbered(&v, &[2], 1), v.scale(&rat(1, 2)));
        assert_eq!(unnumbered_from_numbered(&v, &[2, 2], 2), v.scale(&rat(1, 2)));
    }

    #[test]
    fn genus_zero() {
        assert_eq!(genus0_volume(&sig("-1^4")).unwrap(), PiPoly::monomial(int(2), 2));
        assert_eq!(genus0_volume(&sig("1,-1^5")).unwrap(), PiPoly::monomial(int(1), 4));
        assert_eq!(genus0_volume(&sig("2,-1^6")).unwrap(), PiPoly::monomial(rat(8, 3), 4));
        assert!(genus0_volume(&sig("2,2")).is_err());
    }

    #[test]
    fn hyperelliptic_examples() {
        assert_eq!(hyperelliptic_volume(HypType::One, 1, -1).unwrap(), PiPoly::monomial(rat(1, 3), 4));
        assert_eq!(hyperelliptic_volume(HypType::OnePrime, 1, 1).unwrap(), PiPoly::monomial(rat(1, 15), 6));
        assert_eq!(hyperelliptic_volume(HypType::Two, -1, 0).unwrap(), PiPoly::monomial(rat(4, 3), 2));
        assert_eq!(hyperelliptic_volume(HypType::Two, 1, 0).unwrap(), PiPoly::monomial(rat(2, 15), 4));
        assert_eq!(hyperelliptic_volume(HypType::Three, 0, 0).unwrap(), PiPoly::monomial(rat(4, 3), 2));
        assert!(hyperelliptic_volume(HypType::One, 2, -1).is_err());
        assert!(hyperelliptic_volume(HypType::One, -1, -1).is_err());
        assert_eq!(connected_hyperelliptic(&sig("2,2")).unwrap(), PiPoly::monomial(rat(2, 3), 2));
    }

    #[test]
    fn abelian_hyperelliptic() {
        // H(2): k = 3, dim 4
        let v = hyperelliptic_abelian_volume(1, 3).unwrap();
        assert_eq!(v, PiPoly::monomial(rat(32, 120) * rat(1, 2), 4));
        let unit = area_unit_from_half(&v, 4);
        assert_eq!(unit, PiPoly::monomial(rat(1, 120), 4));
        assert_eq!(area_half_from_unit(&unit, 4), v);
        assert!(hyperelliptic_abelian_volume(2, 3).is_err());
        // H(1,1): k = 4
        assert_eq!(hyperelliptic_abelian_volume(2, 4).unwrap(), PiPoly::monomial(rat(128, 720) * rat(2, 3), 4));
    }
}
