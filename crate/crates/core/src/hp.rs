//! High-precision float helpers for the numeric gates and validators.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::exact::Rational;

/// Working precision in bits (about 77 decimal digits).
pub const BITS: usize = 256;
pub const RM: RoundingMode = RoundingMode::ToEven;

pub struct Hp {
    cc: Consts,
}

impl Default for Hp {
    fn default() -> Self {
        Self::new()
    }
}

impl Hp {
    pub fn new() -> Self {
        Self { cc: Consts::new().expect("astro-float constants") }
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(BITS, RM)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(BITS, RM, &mut self.cc)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(BITS, RM, &mut self.cc)
    }

    pub fn parse(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, BITS, RM, &mut self.cc)
    }

    pub fn big(&mut self, n: &num_bigint::BigInt) -> BigFloat {
        self.parse(&n.to_string())
    }

    /// `ζ(s)` for `s >= 2` from Borwein's alternating-series acceleration of `η(s)`.
    pub fn zeta(&mut self, s: u32) -> BigFloat {
        assert!(s >= 2);
        use num_bigint::BigInt;
        // error below 3 / (3 + √8)^n, so n = 110 is well past 256 bits
        let n: u32 = 110;
        let fact = |k: u32| crate::exact::rational::factorial(k);
        let mut d = Vec::with_capacity(n as usize + 1);
        let mut acc = BigInt::from(0);
        for i in 0..=n {
            let term = fact(n + i - 1) * BigInt::from(4).pow(i) / (fact(n - i) * fact(2 * i));
            acc += term;
            d.push(BigInt::from(n) * &acc);
        }
        let dn = d[n as usize].clone();
        let mut sum = int(0);
        for k in 0..n {
            let c = self.big(&(&d[k as usize] - &dn));
            let t = div(&c, &powi(&int(k as i64 + 1), s as usize));
            sum = if k % 2 == 0 { add(&sum, &t) } else { sub(&sum, &t) };
        }
        let eta = div(&sum, &self.big(&(-dn)));
        let factor = sub(&int(1), &div(&int(1), &powi(&int(2), s as usize - 1)));
        div(&eta, &factor)
    }

    pub fn rational(&mut self, r: &Rational) -> BigFloat {
        let n = self.parse(&r.numer().to_string());
        let d = self.parse(&r.denom().to_string());
        n.div(&d, BITS, RM)
    }
}

pub fn int(n: i64) -> BigFloat {
    BigFloat::from_i64(n, BITS)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

pub fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, BITS, RM)
}

pub fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, BITS, RM)
}

pub fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, BITS, RM)
}

pub fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, BITS, RM)
}

pub fn powi(a: &BigFloat, n: usize) -> BigFloat {
    a.powi(n, BITS, RM)
}

/// `|a - b| / |b|`, as a float.
pub fn rel_err(a: &BigFloat, b: &BigFloat) -> f64 {
    (to_f64(&div(&sub(a, b), b))).abs()
}
