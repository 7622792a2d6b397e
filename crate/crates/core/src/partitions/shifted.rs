//! Shifted symmetric power sums and the pillowcase bracket weight.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::characters::{central_character, Padding};
use super::Partition;
use crate::error::{Error, Result};
use crate::exact::rational::{factorial, from_big, int, pow, rat, zeta_neg, Rational};

/// `p_k(λ) = Σ [(λ_i - i + 1/2)^k - (-i + 1/2)^k] + (1 - 2^{-k}) ζ(-k)`, `k >= 1`.
pub fn p_k(lambda: &Partition, k: u32) -> Rational {
    assert!(k >= 1, "p_k needs k >= 1");
    let half = rat(1, 2);
    let mut acc = Rational::zero();
    for (i, &part) in lambda.parts().iter().enumerate() {
        let i = int(i as i64 + 1);
        let base = &half - &i;
        acc += pow(&(&base + int(part as i64)), k) - pow(&base, k);
    }
    acc + (Rational::one() - rat(1, 1 << k.min(62))) * zeta_neg(k)
}

/// Constants `c_k`: `Σ c_k z^k / k! = 1 / (e^{z/2} + e^{-z/2})`.
pub fn c_k(k: u32) -> Rational {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    const N: usize = 40;
    assert!((k as usize) < N, "c_k tabulated for k < {N}");
    let table = TABLE.get_or_init(|| {
        // 2 cosh(z/2) = Σ 2 (z/2)^{2j} / (2j)!
        let cosh: Vec<Rational> = (0..N)
            .map(|n| {
                if n % 2 == 1 {
                    Rational::zero()
                } else {
                    int(2) / from_big(factorial(n as u32) * (num_bigint::BigInt::from(1) << n))
                }
            })
            .collect();
        let mut inv = vec![Rational::zero(); N];
        inv[0] = cosh[0].recip();
        for n in 1..N {
            let s: Rational = (1..=n).map(|j| &cosh[j] * &inv[n - j]).sum();
            inv[n] = -s * &inv[0];
        }
        inv.iter()
            .enumerate()
            .map(|(n, c)| c * from_big(factorial(n as u32)))
            .collect()
    });
    table[k as usize].clone()
}

fn alt_sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `p̄_k(λ) = Σ [(-1)^{λ_i - i + 1}(λ_i - i + 1/2)^k - (-1)^{-i + 1}(-i + 1/2)^k] + c_k`.
pub fn pbar_k(lambda: &Partition, k: u32) -> Rational {
    let half = rat(1, 2);
    let mut acc = Rational::zero();
    for (i, &part) in lambda.parts().iter().enumerate() {
        let ii = i as i64 + 1;
        let base = &half - int(ii);
        acc += alt_sign(part as i64 - ii + 1) * pow(&(&base + int(part as i64)), k)
            - alt_sign(1 - ii) * pow(&base, k);
    }
    acc + c_k(k)
}

/// `p̄₀(λ) = 1/2`.
pub fn is_balanced(lambda: &Partition) -> bool {
    pbar_k(lambda, 0) == rat(1, 2)
}

/// Which closed form is used for the weight `w(λ)` of the pillowcase bracket.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightVariant {
    /// `(dim λ / |λ|!) f_{2,…,2}(λ)`.
    Printed,
    /// `(dim λ / |λ|!)² f_{2,…,2}(λ)⁴`, from counting monodromy over four corners.
    #[default]
    Frobenius,
}

impl WeightVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightVariant::Printed => "printed",
            WeightVariant::Frobenius => "frobenius",
        }
    }
}

impl fmt::Display for WeightVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(WeightVariant::Printed),
            "frobenius" => Ok(WeightVariant::Frobenius),
            _ => Err(Error::Domain(format!("unknown weight variant `{s}`"))),
        }
    }
}

/// `w(λ)` under the chosen variant. Zero off the balanced partitions.
pub fn bracket_weight(lambda: &Partition, variant: WeightVariant) -> Result<Rational> {
    let n = lambda.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let f = central_character(lambda, &[], Padding::Twos)?;
    let ratio = from_big(lambda.dim()) / from_big(factorial(n));
    Ok(match variant {
        WeightVariant::Printed => ratio * f,
        WeightVariant::Frobenius => pow(&ratio, 2) * pow(&f, 4),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::series::QSeries;
    use crate::partitions::{balanced_partitions_of, partitions_of};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn constants() {
        assert_eq!(c_k(0), rat(1, 2));
        assert_eq!(c_k(1), rat(0, 1));
        assert_eq!(c_k(2), rat(-1, 8));
        assert_eq!(c_k(4), rat(5, 32));
        assert_eq!(p_k(&Partition::empty(), 2), rat(0, 1));
        assert_eq!(p_k(&Partition::empty(), 1), rat(-1, 24));
    }

    #[test]
    fn balanced_examples() {
        assert!(is_balanced(&Partition::empty()));
        assert_eq!(pbar_k(&p(&[1]), 0), rat(-3, 2));
        assert!(!is_balanced(&p(&[1])));
        assert!(is_balanced(&p(&[1, 1])));
        assert_eq!(balanced_partitions_of(2), vec![p(&[2]), p(&[1, 1])]);
    }

    #[test]
    fn first_power_sum_is_size() {
        for n in 0..=12 {
            for l in partitions_of(n) {
                assert_eq!(p_k(&l, 1), int(n as i64) - rat(1, 24), "{l}");
            }
        }
    }

    #[test]
    fn balanced_means_empty_two_core() {
        for n in 0..=16 {
            for l in partitions_of(n) {
                let b = is_balanced(&l);
                assert_eq!(b, crate::partitions::characters::two_quotient(&l).is_some(), "{l}");
                if b {
                    assert_eq!(n % 2, 0);
                }
            }
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(bracket_weight(&p(&[2]), WeightVariant::Printed).unwrap(), rat(1, 2));
        assert_eq!(bracket_weight(&p(&[1, 1]), WeightVariant::Printed).unwrap(), rat(-1, 2));
        assert_eq!(bracket_weight(&p(&[2]), WeightVariant::Frobenius).unwrap(), rat(1, 4));
        assert_eq!(bracket_weight(&p(&[1, 1]), WeightVariant::Frobenius).unwrap(), rat(1, 4));
        assert!(matches!(bracket_weight(&p(&[2, 1]), WeightVariant::Frobenius), Err(Error::OddSize(3))));
    }

    #[test]
    fn frobenius_weight_sums_to_empty_product() {
        let prec = 13;
        let mut target = QSeries::one(prec);
        for n in 1..=6 {
            target = target.mul(&QSeries::binomial_factor(2 * n, &rat(-1, 2), prec));
        }
        for d in 0..=6u32 {
            let sum: Rational = balanced_partitions_of(2 * d)
                .iter()
                .map(|l| bracket_weight(l, WeightVariant::Frobenius).unwrap())
                .sum();
            assert_eq!(&sum, target.coeff(2 * d as usize).unwrap(), "q^{}", 2 * d);
        }
        let printed: Rational = balanced_partitions_of(2)
            .iter()
            .map(|l| bracket_weight(l, WeightVariant::Printed).unwrap())
            .sum();
        assert_ne!(&printed, target.coeff(2).unwrap());
    }
}
