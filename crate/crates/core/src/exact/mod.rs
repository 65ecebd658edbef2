//! Exact substrate: big rationals, real quadratic field elements, dense
//! integer matrices and integer polynomials.

mod matrix;
mod poly;
mod quad;

pub use matrix::IntMatrix;
pub use poly::IntPolynomial;
pub use quad::QuadExt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: BigInt) -> Rat {
    Rat::from_integer(v)
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative integer");
    n.sqrt()
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = isqrt(n);
    &r * &r == *n
}

/// Writes a positive integer as `s^2 * d` with `d` squarefree, returning `(s, d)`.
///
/// Trial division; intended for radicands of desk-scale size.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(
        n.is_positive(),
        "squarefree decomposition of a nonpositive integer"
    );
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut core = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    core *= rest;
    (square, core)
}

pub fn is_squarefree(n: &BigInt) -> bool {
    n.is_positive() && squarefree_decompose(n).0.is_one()
}

/// Floor of `num / den` for integers with `den > 0`.
pub fn floor_div(num: &BigInt, den: &BigInt) -> BigInt {
    num.div_floor(den)
}

/// Floor of a rational.
pub fn floor_rat(x: &Rat) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Extended gcd: returns `(g, s, t)` with `g = s*a + t*b` and `g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime_u64(k)).collect()
}

/// Distinct prime factors in ascending order.
pub fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All positive divisors in ascending order.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_decompose(&int(8)), (int(2), int(2)));
        assert_eq!(squarefree_decompose(&int(72)), (int(6), int(2)));
        assert_eq!(squarefree_decompose(&int(15)), (int(1), int(15)));
        assert_eq!(squarefree_decompose(&int(49)), (int(7), int(1)));
        assert!(is_squarefree(&int(30)));
        assert!(!is_squarefree(&int(12)));
    }

    #[test]
    fn divisors_and_primes() {
        assert_eq!(divisors_u64(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors_u64(1), vec![1]);
        assert_eq!(prime_factors_u64(360), vec![2, 3, 5]);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn perfect_squares() {
        assert!(is_perfect_square(&int(0)));
        assert!(is_perfect_square(&int(144)));
        assert!(!is_perfect_square(&int(143)));
        assert!(!is_perfect_square(&int(-4)));
    }

    #[test]
    fn ext_gcd_is_bezout() {
        let (g, s, t) = ext_gcd(&int(-12), &int(18));
        assert_eq!(g, int(6));
        assert_eq!(s * int(-12) + t * int(18), int(6));
    }
}
