use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::Rat;

/// Integer polynomial, coefficients in ascending degree order with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + Rat::from_integer(c.clone()))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let coef = if mag.is_one() && k > 0 {
                String::new()
            } else {
                mag.to_string()
            };
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{coef}t")?,
                _ => write!(f, "{coef}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn trims_and_renders() {
        let p = IntPolynomial::new(vec![int(1), int(-6), int(1), int(0)]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "t^2 - 6t + 1");
        assert_eq!(IntPolynomial::new(vec![int(0)]).degree(), None);
        assert_eq!(IntPolynomial::new(vec![int(0), int(-1)]).to_string(), "-t");
        assert_eq!(p.eval(&rat(1, 1)), rat(-4, 1));
    }
}
