use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{floor_div, is_perfect_square, isqrt, rat_int, QuadExt, Rat};

/// A quadratic surd `(p + sqrt(d)) / q` with `q | d - p^2`.
///
/// `d` is any positive non-square integer; canonicalization may multiply
/// it by a square, so it need not be squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
}

impl QuadSurd {
    pub fn new(p: BigInt, q: BigInt, d: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::malformed("surd denominator is zero"));
        }
        if !d.is_positive() {
            return Err(Error::precondition(format!("radicand {d} is not positive")));
        }
        if is_perfect_square(&d) {
            return Err(Error::RationalInput(d.to_string()));
        }
        let mut s = QuadSurd { p, q, d };
        if !(&s.d - &s.p * &s.p).is_multiple_of(&s.q) {
            let k = s.q.abs();
            s.p *= &k;
            s.d *= &k * &k;
            s.q *= &k;
        }
        Ok(s)
    }

    pub fn sqrt(d: &BigInt) -> Result<Self> {
        Self::new(BigInt::zero(), BigInt::one(), d.clone())
    }

    /// Converts an irrational field element `a + b*sqrt(d)`.
    pub fn from_quad(x: &QuadExt) -> Result<Self> {
        if x.is_rational() {
            return Err(Error::RationalInput(x.to_string()));
        }
        let den = x.a().denom().lcm(x.b().denom());
        let a = x.a().numer() * (&den / x.a().denom());
        let b = x.b().numer() * (&den / x.b().denom());
        let radicand = &b * &b * x.d();
        if b.is_positive() {
            Self::new(a, den, radicand)
        } else {
            Self::new(-a, -den, radicand)
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn to_quad(&self) -> QuadExt {
        let q = rat_int(self.q.clone());
        QuadExt::new(rat_int(self.p.clone()) / &q, Rat::one() / q, self.d.clone())
            .expect("surd radicand is a positive non-square")
    }

    pub fn floor(&self) -> BigInt {
        // sqrt(d) is irrational, so floor((p + sqrt d)/q) = floor((p + floor(+-sqrt d))/|q|) with signs folded in.
        let r = isqrt(&self.d);
        if self.q.is_positive() {
            floor_div(&(&self.p + r), &self.q)
        } else {
            floor_div(&(-&self.p - r - 1), &-&self.q)
        }
    }

    /// Splits off the integer part: returns `(a, 1/(x - a))`.
    pub(crate) fn step(&self) -> (BigInt, QuadSurd) {
        let a = self.floor();
        let p = &a * &self.q - &self.p;
        let q = (&self.d - &p * &p) / &self.q;
        let next = QuadSurd {
            p,
            q,
            d: self.d.clone(),
        };
        (a, next)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+sqrt({}))/{}", self.p, self.d, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn canonical_rescaling() {
        // (1 + sqrt 2)/2: 2 does not divide 2 - 1, so rescale to (2 + sqrt 8)/4.
        let s = QuadSurd::new(int(1), int(2), int(2)).unwrap();
        assert_eq!((s.p(), s.q(), s.d()), (&int(2), &int(4), &int(8)));
        assert_eq!(
            s.to_quad(),
            QuadExt::new(rat(1, 2), rat(1, 2), int(2)).unwrap()
        );
    }

    #[test]
    fn rejects_degenerate() {
        assert!(matches!(
            QuadSurd::sqrt(&int(4)),
            Err(Error::RationalInput(_))
        ));
        assert!(QuadSurd::new(int(1), int(0), int(2)).is_err());
    }

    #[test]
    fn floor_negative_denominator() {
        // (1 + sqrt 5)/(-2) ~ -1.618
        let s = QuadSurd::new(int(1), int(-2), int(5)).unwrap();
        assert_eq!(s.floor(), int(-2));
    }

    #[test]
    fn quad_round_trip() {
        let x = QuadExt::new(rat(3, 7), rat(-2, 5), int(6)).unwrap();
        assert_eq!(QuadSurd::from_quad(&x).unwrap().to_quad(), x);
    }
}
