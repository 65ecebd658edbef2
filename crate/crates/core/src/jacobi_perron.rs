//! Jacobi-Perron multidimensional continued fractions.
//!
//! A vector `theta` in `R^(n-1)` expands by taking componentwise floors `b` and
//! moving to `(f2/f1, ..., f_{n-1}/f1, 1/f1)` with `f = theta - b`. Each step
//! satisfies `(1, theta) ~ B (1, theta')` for the step matrix `B = (0 1; I b)`.
//! In dimension two this is the regular continued fraction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{floor_rat, rat_int, IntMatrix, IntPolynomial, QuadExt, Rat};
use crate::invariants::perron_data;

/// Real numbers the expansion can run on.
pub trait JpScalar: Clone + fmt::Debug {
    /// Exact floor, or an error when it cannot be decided.
    fn jp_floor(&self) -> Result<BigInt>;
    fn jp_sub_int(&self, k: &BigInt) -> Self;
    fn jp_div(&self, other: &Self) -> Result<Self>;
    fn jp_recip(&self) -> Result<Self>;
    /// Sign, or an error when it cannot be decided.
    fn jp_sign(&self) -> Result<i8>;
}

impl JpScalar for Rat {
    fn jp_floor(&self) -> Result<BigInt> {
        Ok(floor_rat(self))
    }

    fn jp_sub_int(&self, k: &BigInt) -> Self {
        self - rat_int(k.clone())
    }

    fn jp_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::precondition("division by zero"));
        }
        Ok(self / other)
    }

    fn jp_recip(&self) -> Result<Self> {
        Rat::one().jp_div(self)
    }

    fn jp_sign(&self) -> Result<i8> {
        Ok(if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        })
    }
}

impl JpScalar for QuadExt {
    fn jp_floor(&self) -> Result<BigInt> {
        Ok(self.floor())
    }

    fn jp_sub_int(&self, k: &BigInt) -> Self {
        self.add_rat(&-rat_int(k.clone()))
    }

    fn jp_div(&self, other: &Self) -> Result<Self> {
        if !self.same_field(other) {
            return Err(Error::MixedRadicands(
                self.d().to_string(),
                other.d().to_string(),
            ));
        }
        self.checked_div(other)
    }

    fn jp_recip(&self) -> Result<Self> {
        self.inv()
    }

    fn jp_sign(&self) -> Result<i8> {
        Ok(self.signum())
    }
}

/// Closed interval with dyadic endpoints, rounded outward to `bits` fractional bits
/// after every operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Rat,
    hi: Rat,
    bits: u32,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat, bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::malformed(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi, bits }.rounded())
    }

    pub fn exact(x: Rat, bits: u32) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            bits,
        }
        .rounded()
    }

    /// Isolates the unique root of `poly` in `[lo, hi]` by bisection to `bits` bits.
    pub fn root_of(poly: &IntPolynomial, lo: Rat, hi: Rat, bits: u32) -> Result<Self> {
        let (mut lo, mut hi) = (lo, hi);
        let sign = |x: &Rat| poly.eval(x).signum();
        let s_lo = sign(&lo);
        if s_lo.is_zero() {
            return Ok(Self::exact(lo, bits));
        }
        if sign(&hi) == s_lo {
            return Err(Error::precondition(format!(
                "{poly} has no sign change on [{lo}, {hi}]"
            )));
        }
        let eps = Rat::new(BigInt::one(), BigInt::one() << (bits + 2));
        let two = rat_int(BigInt::from(2));
        while &hi - &lo > eps {
            let mid = (&lo + &hi) / &two;
            let s = sign(&mid);
            if s.is_zero() {
                return Ok(Self::exact(mid, bits));
            }
            if s == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Self::new(lo, hi, bits)
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval {
            lo,
            hi,
            bits: self.bits.max(other.bits),
        }
        .rounded()
    }

    fn rounded(self) -> Self {
        let scale = BigInt::one() << self.bits;
        let s = rat_int(scale.clone());
        let lo = Rat::new(floor_rat(&(&self.lo * &s)), scale.clone());
        let hi = Rat::new(-floor_rat(&(-(&self.hi * &s))), scale);
        Interval {
            lo,
            hi,
            bits: self.bits,
        }
    }
}

impl JpScalar for Interval {
    fn jp_floor(&self) -> Result<BigInt> {
        let (a, b) = (floor_rat(&self.lo), floor_rat(&self.hi));
        if a != b {
            return Err(Error::precondition(format!(
                "floor undecided on [{}, {}] at {} bits",
                self.lo, self.hi, self.bits
            )));
        }
        Ok(a)
    }

    fn jp_sub_int(&self, k: &BigInt) -> Self {
        let k = rat_int(k.clone());
        Interval {
            lo: &self.lo - &k,
            hi: &self.hi - &k,
            bits: self.bits,
        }
    }

    fn jp_div(&self, other: &Self) -> Result<Self> {
        let r = other.jp_recip()?;
        Ok(self.mul(&r))
    }

    fn jp_recip(&self) -> Result<Self> {
        if self.contains(&Rat::zero()) {
            return Err(Error::precondition(format!(
                "interval [{}, {}] may contain zero at {} bits",
                self.lo, self.hi, self.bits
            )));
        }
        Ok(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
            bits: self.bits,
        }
        .rounded())
    }

    fn jp_sign(&self) -> Result<i8> {
        if self.lo.is_positive() {
            Ok(1)
        } else if self.hi.is_negative() {
            Ok(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Ok(0)
        } else {
            Err(Error::precondition(format!(
                "sign undecided on [{}, {}] at {} bits",
                self.lo, self.hi, self.bits
            )))
        }
    }
}

/// Why an expansion stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stop {
    /// The requested number of steps was produced.
    Steps,
    /// Every fractional part vanished: the last convergent is the input.
    Exact,
    /// `f1 = 0` while some other fractional part is nonzero; the update is undefined.
    Degenerate,
}

/// Digits of a Jacobi-Perron expansion in dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JPExpansion {
    dimension: usize,
    digits: Vec<Vec<BigInt>>,
    stop: Stop,
}

impl JPExpansion {
    pub fn new(dimension: usize, digits: Vec<Vec<BigInt>>, stop: Stop) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::precondition(format!("dimension {dimension} < 2")));
        }
        for (i, b) in digits.iter().enumerate() {
            if b.len() != dimension - 1 {
                return Err(Error::DimensionMismatch {
                    expected: format!("digit vectors of length {}", dimension - 1),
                    got: format!("length {} at position {i}", b.len()),
                });
            }
            if b.iter().any(|x| x.is_negative()) {
                return Err(Error::malformed(format!("negative digit at position {i}")));
            }
            if i > 0 && b[dimension - 2].is_zero() {
                return Err(Error::malformed(format!(
                    "last digit component must be positive at position {i}"
                )));
            }
        }
        Ok(JPExpansion {
            dimension,
            digits,
            stop,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn digits(&self) -> &[Vec<BigInt>] {
        &self.digits
    }

    pub fn stop(&self) -> Stop {
        self.stop
    }

    /// True when the expansion ended because the vector was reached exactly.
    pub fn terminated(&self) -> bool {
        self.stop == Stop::Exact
    }

    /// Digits of a dimension-two expansion as plain integers.
    pub fn scalar_digits(&self) -> Vec<BigInt> {
        self.digits.iter().map(|b| b[0].clone()).collect()
    }

    pub fn step_matrices(&self) -> Vec<IntMatrix> {
        self.digits.iter().map(|b| step_matrix(b)).collect()
    }
}

/// `(0 1; I b)`: first row `(0, ..., 0, 1)`, row `i + 1` is `e_i` followed by `b_i`.
pub fn step_matrix(b: &[BigInt]) -> IntMatrix {
    let n = b.len() + 1;
    let mut m = IntMatrix::zeros(n, n);
    m.set(0, n - 1, BigInt::one());
    for (i, bi) in b.iter().enumerate() {
        m.set(i + 1, i, BigInt::one());
        m.set(i + 1, n - 1, bi.clone());
    }
    m
}

/// Expands `theta` for at most `steps` steps, stopping early if the vector is reached exactly.
pub fn jp_expand<T: JpScalar>(theta: &[T], steps: usize) -> Result<JPExpansion> {
    if theta.is_empty() {
        return Err(Error::precondition("dimension must be at least 2"));
    }
    if steps == 0 {
        return Err(Error::precondition("at least one step is required"));
    }
    for (i, t) in theta.iter().enumerate() {
        if t.jp_sign()? <= 0 {
            return Err(Error::precondition(format!(
                "component {i} is not positive"
            )));
        }
    }
    let mut cur: Vec<T> = theta.to_vec();
    let mut digits = Vec::with_capacity(steps);
    let mut stop = Stop::Steps;
    for _ in 0..steps {
        let b: Vec<BigInt> = cur.iter().map(|t| t.jp_floor()).collect::<Result<_>>()?;
        let f: Vec<T> = cur.iter().zip(&b).map(|(t, bi)| t.jp_sub_int(bi)).collect();
        digits.push(b);
        if f[0].jp_sign()? == 0 {
            let mut all_zero = true;
            for fi in &f[1..] {
                all_zero &= fi.jp_sign()? == 0;
            }
            stop = if all_zero {
                Stop::Exact
            } else {
                Stop::Degenerate
            };
            break;
        }
        let mut next = Vec::with_capacity(f.len());
        for fi in &f[1..] {
            next.push(fi.jp_div(&f[0])?);
        }
        next.push(f[0].jp_recip()?);
        cur = next;
    }
    JPExpansion::new(theta.len() + 1, digits, stop)
}

/// Homogeneous convergent `B_1 ... B_k (0, ..., 0, 1)^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    homogeneous: Vec<BigInt>,
}

impl Convergent {
    pub fn homogeneous(&self) -> &[BigInt] {
        &self.homogeneous
    }

    /// Coordinates divided by the first; `None` if the first is zero.
    pub fn affine(&self) -> Option<Vec<Rat>> {
        let q = &self.homogeneous[0];
        if q.is_zero() {
            return None;
        }
        Some(
            self.homogeneous[1..]
                .iter()
                .map(|p| Rat::new(p.clone(), q.clone()))
                .collect(),
        )
    }
}

pub fn jp_convergents(e: &JPExpansion) -> Vec<Convergent> {
    let n = e.dimension;
    let mut prod = IntMatrix::identity(n);
    let mut out = Vec::with_capacity(e.digits.len());
    for b in &e.digits {
        prod = &prod * &step_matrix(b);
        out.push(Convergent {
            homogeneous: (0..n).map(|i| prod.get(i, n - 1).clone()).collect(),
        });
    }
    out
}

/// Least `k` up to the Wielandt bound `(n-1)^2 + 1` with `M^k` strictly positive.
pub fn primitivity_index(m: &IntMatrix) -> Result<usize> {
    m.require_square()?;
    if !m.is_nonnegative() {
        return Err(Error::precondition(format!(
            "matrix {m} has negative entries"
        )));
    }
    let n = m.rows();
    let bound = (n - 1) * (n - 1) + 1;
    let mut p = m.clone();
    for k in 1..=bound {
        if p.is_positive() {
            return Ok(k);
        }
        p = &p * m;
    }
    Err(Error::precondition(format!(
        "matrix {m} is not primitive: no power up to the bound {bound} is positive"
    )))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicEigenvector {
    /// `B_1 ... B_k` over one period.
    pub product: IntMatrix,
    pub char_poly: IntPolynomial,
    pub primitivity_index: usize,
    /// Projectivized `M^j (1, ..., 1)^T` for `j = 1, 2, ...`; first coordinate dropped.
    pub approximants: Vec<Vec<Rat>>,
    /// Exact `theta` with eigenvector `(1, theta)`, in dimension two.
    pub exact: Option<QuadExt>,
}

const APPROXIMANTS: usize = 8;

pub fn jp_periodic_eigenvector(period: &[Vec<BigInt>]) -> Result<PeriodicEigenvector> {
    if period.is_empty() {
        return Err(Error::precondition("period must be nonempty"));
    }
    let n = period[0].len() + 1;
    if n < 2 {
        return Err(Error::precondition("dimension must be at least 2"));
    }
    for (i, b) in period.iter().enumerate() {
        if b.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: format!("digit vectors of length {}", n - 1),
                got: format!("length {} at position {i}", b.len()),
            });
        }
        if b.iter().any(|x| x.is_negative()) {
            return Err(Error::malformed(format!("negative digit at position {i}")));
        }
    }
    let product = period
        .iter()
        .fold(IntMatrix::identity(n), |acc, b| &acc * &step_matrix(b));
    let primitivity_index = primitivity_index(&product)?;
    let char_poly = product.char_poly()?;

    let mut v = IntMatrix::new(n, 1, vec![BigInt::one(); n])?;
    let mut approximants = Vec::with_capacity(APPROXIMANTS);
    for _ in 0..APPROXIMANTS {
        v = &product * &v;
        let g = v.entries().iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        v = IntMatrix::new(n, 1, v.entries().iter().map(|x| x / &g).collect())?;
        let q = v.get(0, 0).clone();
        approximants.push(
            (1..n)
                .map(|i| Rat::new(v.get(i, 0).clone(), q.clone()))
                .collect(),
        );
    }

    let exact = if n == 2 {
        let theta = perron_data(&product)?.theta;
        let regenerated = jp_expand(std::slice::from_ref(&theta), 3 * period.len())?;
        let expected: Vec<BigInt> = period
            .iter()
            .cycle()
            .take(3 * period.len())
            .map(|b| b[0].clone())
            .collect();
        if regenerated.scalar_digits() != expected {
            return Err(Error::invariant(format!(
                "expansion of {theta} does not regenerate the period"
            )));
        }
        Some(theta)
    } else {
        None
    };

    Ok(PeriodicEigenvector {
        product,
        char_poly,
        primitivity_index,
        approximants,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::cf_expand_sqrt;
    use crate::exact::{int, rat};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn scalar_period(v: &[i64]) -> Vec<Vec<BigInt>> {
        v.iter().map(|&x| vec![int(x)]).collect()
    }

    #[test]
    fn sqrt2_digits_and_convergents() {
        let e = jp_expand(&[QuadExt::sqrt(&int(2)).unwrap()], 4).unwrap();
        assert_eq!(e.scalar_digits(), ints(&[1, 2, 2, 2]));
        assert!(!e.terminated());
        let c: Vec<Rat> = jp_convergents(&e)
            .iter()
            .map(|c| c.affine().unwrap()[0].clone())
            .collect();
        assert_eq!(c[..3], [rat(1, 1), rat(3, 2), rat(7, 5)]);
        assert_eq!(c[3], rat(17, 12));
    }

    #[test]
    fn rational_terminates_exactly() {
        let e = jp_expand(&[rat(3, 2)], 100).unwrap();
        assert_eq!(e.scalar_digits(), ints(&[1, 2]));
        assert!(e.terminated());
        let last = jp_convergents(&e).last().unwrap().affine().unwrap();
        assert_eq!(last, vec![rat(3, 2)]);

        let e = jp_expand(&[rat(2, 5), rat(3, 7)], 100).unwrap();
        assert!(e.terminated());
        let last = jp_convergents(&e).last().unwrap().affine().unwrap();
        assert_eq!(last, vec![rat(2, 5), rat(3, 7)]);

        let e = jp_expand(&[rat(3, 1), rat(1, 2)], 100).unwrap();
        assert_eq!(e.stop(), Stop::Degenerate);
        assert!(!e.terminated());
    }

    #[test]
    fn fibonacci_convergents() {
        let e = JPExpansion::new(2, scalar_period(&[1; 10]), Stop::Steps).unwrap();
        let c = jp_convergents(&e);
        let (mut a, mut b) = (1i64, 1i64);
        for conv in &c {
            assert_eq!(conv.affine().unwrap()[0], rat(b, a));
            (a, b) = (b, a + b);
        }
    }

    #[test]
    fn step_matrix_shape() {
        let b = step_matrix(&ints(&[2, 5]));
        assert_eq!(b.to_compact(), "0,0,1;1,0,2;0,1,5");
        assert_eq!(b.det().unwrap(), int(1));
        assert_eq!(step_matrix(&ints(&[3])).det().unwrap(), int(-1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(jp_expand(&[rat(0, 1)], 3).is_err());
        assert!(jp_expand(&[rat(-1, 2)], 3).is_err());
        assert!(jp_expand::<Rat>(&[], 3).is_err());
        assert!(jp_expand(&[rat(1, 2)], 0).is_err());
    }

    #[test]
    fn periodic_eigenvectors() {
        let r = jp_periodic_eigenvector(&scalar_period(&[2])).unwrap();
        assert_eq!(r.product.to_compact(), "0,1;1,2");
        assert_eq!(r.char_poly.to_string(), "t^2 - 2t - 1");
        assert_eq!(
            r.exact.unwrap(),
            QuadExt::new(rat(1, 1), rat(1, 1), int(2)).unwrap()
        );

        let r = jp_periodic_eigenvector(&scalar_period(&[1])).unwrap();
        assert_eq!(
            r.exact.unwrap(),
            QuadExt::new(rat(1, 2), rat(1, 2), int(5)).unwrap()
        );
        assert_eq!(r.approximants[3], vec![rat(8, 5)]);

        let r = jp_periodic_eigenvector(&scalar_period(&[1, 2])).unwrap();
        assert_eq!(
            r.exact.unwrap(),
            QuadExt::new(rat(1, 2), rat(1, 2), int(3)).unwrap()
        );

        let r = jp_periodic_eigenvector(&[ints(&[1, 1])]).unwrap();
        assert_eq!(r.char_poly.to_string(), "t^3 - t^2 - t - 1");
        assert!(r.exact.is_none());
    }

    #[test]
    fn non_primitive_period_names_bound() {
        let err = jp_periodic_eigenvector(&scalar_period(&[0]))
            .unwrap_err()
            .to_string();
        assert!(err.contains("bound 2"), "{err}");
        let err = jp_periodic_eigenvector(&[ints(&[0, 0])])
            .unwrap_err()
            .to_string();
        assert!(err.contains("bound 5"), "{err}");
    }

    #[test]
    fn cubic_expansion_with_intervals() {
        let poly = IntPolynomial::new(ints(&[-1, -1, 0, 1]));
        let t = Interval::root_of(&poly, rat(1, 1), rat(2, 1), 200).unwrap();
        let t2 = t.mul(&t);
        let e = jp_expand(&[t.clone(), t2.clone()], 6).unwrap();
        assert_eq!(e.digits().len(), 6);
        let last = jp_convergents(&e).last().unwrap().affine().unwrap();
        for (c, x) in last.iter().zip([&t, &t2]) {
            let err = (c - x.lo()).abs();
            assert!(err < rat(1, 100), "convergent {c} far from {}", x.lo());
        }
        // coarse precision refuses ambiguous floors
        let coarse = Interval::new(rat(0, 1), rat(2, 1), 4).unwrap();
        assert!(jp_expand(&[coarse], 1).is_err());
    }

    #[test]
    fn agrees_with_regular_cf() {
        for d in [2i64, 3, 7, 13, 19, 43] {
            let x = QuadExt::sqrt(&int(d)).unwrap();
            let jp = jp_expand(&[x], 20).unwrap().scalar_digits();
            let cf = cf_expand_sqrt(&int(d)).unwrap().digits(20);
            assert_eq!(jp, cf, "sqrt {d}");
        }
    }
}
