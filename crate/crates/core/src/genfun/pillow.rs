//! Character sums for the pillowcase and torus generating functions.

use num_traits::Zero;

use crate::error::Result;
use crate::exact::rational::{rat, Rational};
use crate::exact::QSeries;
use crate::exec::Exec;
use crate::partitions::{
    balanced_partitions_of, bracket_weight, central_character, partitions_of, Padding, Partition,
    WeightVariant,
};
use crate::strata::ProfilePair;

/// `Z(∅,∅) = Π (1 - x^n)^{-1/2}` in `x = q²`, to `prec` terms.
pub fn z_empty(prec: usize) -> QSeries {
    let half = rat(-1, 2);
    (1..prec.max(1)).fold(QSeries::one(prec), |acc, n| acc.mul(&QSeries::binomial_factor(n, &half, prec)))
}

/// `Z(∅) = Π (1 - q^n)^{-1}`, to `prec` terms.
pub fn z_empty_abelian(prec: usize) -> QSeries {
    let m1 = rat(-1, 1);
    (1..prec.max(1)).fold(QSeries::one(prec), |acc, n| acc.mul(&QSeries::binomial_factor(n, &m1, prec)))
}

/// `(f_{ν,2,…,2} / f_{2,…,2})(λ) · Π f_{μ_i}(λ)`, or `None` when `λ` is
/// too small to carry the ramification.
pub fn character_factor(p: &ProfilePair, lambda: &Partition) -> Result<Option<Rational>> {
    let n = lambda.size();
    let floor = p.nu_size().max(p.mu().iter().copied().max().unwrap_or(0));
    if n < floor {
        return Ok(None);
    }
    let mut acc = if p.nu().is_empty() {
        Rational::from_integer(1.into())
    } else {
        let top = central_character(lambda, p.nu(), Padding::Twos)?;
        if top.is_zero() {
            return Ok(Some(top));
        }
        top / central_character(lambda, &[], Padding::Twos)?
    };
    for &m in p.mu() {
        if acc.is_zero() {
            break;
        }
        acc *= central_character(lambda, &[m], Padding::Ones)?;
    }
    Ok(Some(acc))
}

/// `Σ_{λ balanced, |λ| = 2d} w(λ) F(λ)` for `d < prec`.
pub fn bracket_numerator(
    p: &ProfilePair,
    prec: usize,
    variant: WeightVariant,
    exec: Exec,
) -> Result<Vec<Rational>> {
    let items: Vec<(usize, Partition)> = (0..prec)
        .flat_map(|d| balanced_partitions_of(2 * d as u32).into_iter().map(move |l| (d, l)))
        .collect();
    let terms = exec.map(&items, |(_, l)| -> Result<Rational> {
        Ok(match character_factor(p, l)? {
            Some(f) if !f.is_zero() => bracket_weight(l, variant)? * f,
            _ => Rational::zero(),
        })
    });
    let mut out = vec![Rational::zero(); prec];
    for ((d, _), t) in items.iter().zip(terms) {
        out[*d] += t?;
    }
    Ok(out)
}

/// `Z'(μ, ν)` in `x = q²`, coefficients `x^0 .. x^{prec-1}`.
pub fn zprime_series(p: &ProfilePair, prec: usize, variant: WeightVariant, exec: Exec) -> Result<QSeries> {
    let num = QSeries::from_coeffs(bracket_numerator(p, prec, variant, exec)?);
    num.div(&z_empty(prec))
}

/// `Z'_ab(μ) = ⟨f_{μ_1} ⋯ f_{μ_n}⟩_q`, coefficients `q^0 .. q^{prec-1}`.
pub fn zprime_abelian_series(mu: &[u32], prec: usize, exec: Exec) -> Result<QSeries> {
    let items: Vec<(usize, Partition)> = (0..prec)
        .flat_map(|n| partitions_of(n as u32).into_iter().map(move |l| (n, l)))
        .collect();
    let floor = mu.iter().copied().max().unwrap_or(0);
    let terms = exec.map(&items, |(n, l)| -> Result<Rational> {
        if (*n as u32) < floor {
            return Ok(Rational::zero());
        }
        let mut acc = Rational::from_integer(1.into());
        for &m in mu {
            acc *= central_character(l, &[m], Padding::Ones)?;
        }
        Ok(acc)
    });
    let mut out = vec![Rational::zero(); prec];
    for ((n, _), t) in items.iter().zip(terms) {
        out[*n] += t?;
    }
    QSeries::from_coeffs(out).div(&z_empty_abelian(prec))
}

/// Weighted count `1/|Aut|` of degree-`2d` covers as a check value:
/// `x^d` coefficient of `Z(∅,∅) · Z'`.
pub fn all_covers_series(zprime: &QSeries) -> QSeries {
    zprime.mul(&z_empty(zprime.prec()))
}

