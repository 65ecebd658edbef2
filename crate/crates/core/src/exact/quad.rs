use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{floor_div, isqrt, rat_int, squarefree_decompose, Rat};
use crate::error::{Error, Result};

/// An element `a + b*sqrt(d)` of the real quadratic field `Q(sqrt(d))`.
///
/// The radicand `d` is always squarefree and greater than one; the
/// constructors pull square factors out of the radicand into `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    d: BigInt,
    a: Rat,
    b: Rat,
}

impl QuadExt {
    /// Builds `a + b*sqrt(radicand)`, normalizing the radicand to its squarefree part.
    pub fn new(a: Rat, b: Rat, radicand: BigInt) -> Result<Self> {
        if !radicand.is_positive() {
            return Err(Error::precondition(format!(
                "radicand must be positive, got {radicand}"
            )));
        }
        let (s, d) = squarefree_decompose(&radicand);
        if d.is_one() {
            return Err(Error::RationalInput(radicand.to_string()));
        }
        Ok(QuadExt {
            d,
            a,
            b: b * rat_int(s),
        })
    }

    /// The rational number `a` viewed inside `Q(sqrt(d))`; `d` must be squarefree.
    pub fn from_rational(d: &BigInt, a: Rat) -> Result<Self> {
        Self::new(a, Rat::zero(), d.clone()).and_then(|x| {
            if &x.d != d {
                Err(Error::precondition(format!(
                    "radicand {d} is not squarefree"
                )))
            } else {
                Ok(x)
            }
        })
    }

    pub fn from_int(d: &BigInt, a: i64) -> Result<Self> {
        Self::from_rational(d, rat_int(BigInt::from(a)))
    }

    /// `sqrt(radicand)`, e.g. `sqrt(8) = 2*sqrt(2)`.
    pub fn sqrt(radicand: &BigInt) -> Result<Self> {
        Self::new(Rat::zero(), Rat::one(), radicand.clone())
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn same_field(&self, other: &Self) -> bool {
        self.d == other.d
    }

    fn with(&self, a: Rat, b: Rat) -> Self {
        QuadExt {
            d: self.d.clone(),
            a,
            b,
        }
    }

    fn expect_same_field(&self, other: &Self) {
        assert!(
            self.same_field(other),
            "cannot combine elements of Q(sqrt({})) and Q(sqrt({}))",
            self.d,
            other.d
        );
    }

    pub fn zero_in(&self) -> Self {
        self.with(Rat::zero(), Rat::zero())
    }

    pub fn one_in(&self) -> Self {
        self.with(Rat::one(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conj(&self) -> Self {
        self.with(self.a.clone(), -self.b.clone())
    }

    /// Field trace `x + conj(x) = 2a`.
    pub fn trace(&self) -> Rat {
        &self.a + &self.a
    }

    /// Field norm `x * conj(x) = a^2 - d*b^2`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(self.d.clone()) * &self.b * &self.b
    }

    pub fn scale(&self, k: &Rat) -> Self {
        self.with(&self.a * k, &self.b * k)
    }

    pub fn add_rat(&self, k: &Rat) -> Self {
        self.with(&self.a + k, self.b.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::precondition("division by zero in Q(sqrt(d))"));
        }
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.expect_same_field(other);
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_in();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign under the real embedding with `sqrt(d) > 0`.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * rat_int(self.d.clone());
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    /// Largest integer not exceeding the real value.
    pub fn floor(&self) -> BigInt {
        let den = self.a.denom().lcm(self.b.denom());
        let num_a = self.a.numer() * (&den / self.a.denom());
        let num_b = self.b.numer() * (&den / self.b.denom());
        if num_b.is_zero() {
            return floor_div(&num_a, &den);
        }
        // num_b * sqrt(d) is irrational, so its floor is strict from below.
        let root = isqrt(&(&num_b * &num_b * &self.d));
        let floor_surd = if num_b.is_positive() { root } else { -root - 1 };
        floor_div(&(num_a + floor_surd), &den)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        a + b * d.sqrt()
    }
}

fn sign_of(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.same_field(other) {
            return None;
        }
        Some(match (self - other).signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.expect_same_field(rhs);
        self.with(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self.expect_same_field(rhs);
        self.with(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.expect_same_field(rhs);
        let d = rat_int(self.d.clone());
        self.with(
            &self.a * &rhs.a + d * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

/// Panics on division by zero; use [`QuadExt::checked_div`] for a fallible form.
impl<'a> Div<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: &QuadExt) -> QuadExt {
        self.checked_div(rhs)
            .expect("division by zero in Q(sqrt(d))")
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        self.with(-self.a.clone(), -self.b.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &QuadExt) -> QuadExt {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surd = |c: &Rat| -> String {
            let mag = c.abs();
            if mag.is_one() {
                format!("sqrt({})", self.d)
            } else if mag.is_integer() {
                format!("{}*sqrt({})", mag.numer(), self.d)
            } else {
                format!("({})*sqrt({})", fmt_rat(&mag), self.d)
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.a)),
            (true, false) => {
                let sign = if self.b.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}", surd(&self.b))
            }
            (false, false) => {
                let op = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {op} {}", fmt_rat(&self.a), surd(&self.b))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn q(a: (i64, i64), b: (i64, i64), d: i64) -> QuadExt {
        QuadExt::new(rat(a.0, a.1), rat(b.0, b.1), int(d)).unwrap()
    }

    #[test]
    fn trace_examples() {
        assert_eq!(q((-1, 1), (1, 1), 2).trace(), rat(-2, 1));
        assert_eq!(q((1, 1), (0, 1), 2).trace(), rat(2, 1));
        assert_eq!(q((3, 1), (-2, 1), 2).trace(), rat(6, 1));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(q((1, 1), (1, 1), 2).norm(), rat(-1, 1));
        assert_eq!(q((1, 1), (0, 1), 2).norm(), rat(1, 1));
        assert_eq!(q((3, 1), (2, 1), 2).norm(), rat(1, 1));
    }

    #[test]
    fn radicand_is_normalized() {
        let x = QuadExt::sqrt(&int(8)).unwrap();
        assert_eq!(x.d(), &int(2));
        assert_eq!(x.b(), &rat(2, 1));
        assert_eq!(
            QuadExt::sqrt(&int(9)),
            Err(Error::RationalInput("9".into()))
        );
        assert!(QuadExt::from_int(&int(8), 1).is_err());
    }

    #[test]
    fn floor_and_sign() {
        assert_eq!(q((0, 1), (1, 1), 2).floor(), int(1));
        assert_eq!(q((0, 1), (-1, 1), 2).floor(), int(-2));
        assert_eq!(q((1, 2), (1, 2), 5).floor(), int(1));
        assert_eq!(q((-7, 3), (1, 1), 5).floor(), int(-1));
        assert_eq!(q((3, 1), (-2, 1), 2).signum(), 1);
        assert_eq!(q((-3, 1), (2, 1), 2).signum(), -1);
        assert_eq!(q((5, 2), (0, 1), 2).floor(), int(2));
    }

    #[test]
    fn division_and_display() {
        let x = q((1, 1), (1, 1), 2);
        let y = x.inv().unwrap();
        assert_eq!(y, q((-1, 1), (1, 1), 2));
        assert_eq!(x.to_string(), "1 + sqrt(2)");
        assert_eq!(q((-2, 1), (2, 1), 2).to_string(), "-2 + 2*sqrt(2)");
        assert_eq!(q((0, 1), (1, 3), 15).to_string(), "(1/3)*sqrt(15)");
        assert_eq!(q((1, 2), (-1, 2), 5).to_string(), "1/2 - (1/2)*sqrt(5)");
        assert!(x.zero_in().inv().is_err());
    }
}
