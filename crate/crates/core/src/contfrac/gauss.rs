use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::periodic::cf_expand;
use super::surd::QuadSurd;
use crate::error::{Error, Result};
use crate::exact::{is_perfect_square, IntMatrix};

/// Product of the factors `(a_i, 1; 1, 0)` in order.
pub fn matrix_from_period(period: &[BigInt]) -> Result<IntMatrix> {
    if period.is_empty() {
        return Err(Error::malformed("period must be nonempty"));
    }
    let mut acc = IntMatrix::identity(2);
    for a in period {
        let step = IntMatrix::new(
            2,
            2,
            vec![a.clone(), BigInt::one(), BigInt::one(), BigInt::zero()],
        )?;
        acc = &acc * &step;
    }
    Ok(acc)
}

/// Discriminant `tr^2 - 4 det` of a 2x2 matrix, rejected unless positive and non-square.
pub(crate) fn hyperbolic_discriminant(a: &IntMatrix) -> Result<BigInt> {
    a.require_dim(2)?;
    let tr = a.trace();
    let disc = &tr * &tr - BigInt::from(4) * a.det()?;
    if !disc.is_positive() {
        return Err(Error::precondition(format!(
            "matrix {a} is not hyperbolic (tr^2 - 4det = {disc})"
        )));
    }
    if is_perfect_square(&disc) {
        return Err(Error::precondition(format!(
            "matrix {a} has rational eigenvalues (tr^2 - 4det = {disc})"
        )));
    }
    Ok(disc)
}

/// Attracting fixed point of the Moebius action `x -> (ax+b)/(cx+d)`.
///
/// Matrices with negative trace are negated first, so the returned point is
/// the one paired with the Perron eigenvalue of the positive-trace representative.
pub fn fixed_point(a: &IntMatrix) -> Result<QuadSurd> {
    let disc = hyperbolic_discriminant(a)?;
    let m = if a.trace().is_negative() {
        -a
    } else {
        a.clone()
    };
    let (p, c) = (m.get(0, 0) - m.get(1, 1), m.get(1, 0) * BigInt::from(2));
    // c != 0 here: a zero lower-left entry forces a square discriminant.
    QuadSurd::new(p, c, disc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Similarity {
    SameClass,
    Distinct,
}

/// Outcome of the period comparison, with the evidence used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityVerdict {
    pub verdict: Similarity,
    /// Least rotations of the two minimal periods.
    pub period_a: Vec<BigInt>,
    pub period_b: Vec<BigInt>,
    pub det_a: BigInt,
    pub det_b: BigInt,
    pub char_poly_match: bool,
}

impl SimilarityVerdict {
    pub fn periods_match(&self) -> bool {
        self.period_a == self.period_b
    }
}

/// Decides `GL(2,Z)`-similarity of two hyperbolic matrices with determinant +-1
/// by comparing the periods of their fixed points.
///
/// Equal periods alone do not separate `A` from its powers, so the
/// characteristic polynomials must agree as well.
pub fn gauss_similar(a: &IntMatrix, b: &IntMatrix) -> Result<SimilarityVerdict> {
    let mut dets = Vec::with_capacity(2);
    for m in [a, b] {
        m.require_dim(2)?;
        let det = m.det()?;
        if det.abs() != BigInt::one() {
            return Err(Error::precondition(format!(
                "matrix {m} has determinant {det}, not +-1"
            )));
        }
        dets.push(det);
    }
    let period_a = cf_expand(&fixed_point(a)?).canonical_period();
    let period_b = cf_expand(&fixed_point(b)?).canonical_period();
    let char_poly_match = a.char_poly_2x2()? == b.char_poly_2x2()?;
    let verdict = if char_poly_match && period_a == period_b {
        Similarity::SameClass
    } else {
        Similarity::Distinct
    };
    let det_b = dets.pop().unwrap();
    let det_a = dets.pop().unwrap();
    Ok(SimilarityVerdict {
        verdict,
        period_a,
        period_b,
        det_a,
        det_b,
        char_poly_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, QuadExt};

    fn m(e: &[i64]) -> IntMatrix {
        IntMatrix::square_i64(e).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn products_of_partial_quotient_matrices() {
        assert_eq!(
            matrix_from_period(&ints(&[1, 1])).unwrap(),
            m(&[2, 1, 1, 1])
        );
        assert_eq!(matrix_from_period(&ints(&[2])).unwrap(), m(&[2, 1, 1, 0]));
        assert_eq!(
            matrix_from_period(&ints(&[2, 2])).unwrap(),
            m(&[5, 2, 2, 1])
        );
        assert!(matrix_from_period(&[]).is_err());
    }

    #[test]
    fn fixed_points() {
        let q = |a, b, d| QuadExt::new(rat(a, 1), rat(b, 1), int(d)).unwrap();
        assert_eq!(
            fixed_point(&m(&[5, 2, 2, 1])).unwrap().to_quad(),
            q(1, 1, 2)
        );
        assert_eq!(
            fixed_point(&m(&[5, 1, 4, 1])).unwrap().to_quad(),
            QuadExt::new(rat(1, 2), rat(1, 2), int(2)).unwrap()
        );
        assert_eq!(
            fixed_point(&m(&[2, 1, 1, 1])).unwrap().to_quad(),
            QuadExt::new(rat(1, 2), rat(1, 2), int(5)).unwrap()
        );
        // negated matrix: same fixed point
        assert_eq!(
            fixed_point(&m(&[-5, -2, -2, -1])).unwrap().to_quad(),
            q(1, 1, 2)
        );
    }

    #[test]
    fn fixed_point_rejects_non_hyperbolic() {
        assert!(fixed_point(&m(&[1, 1, 0, 1])).is_err());
        assert!(fixed_point(&m(&[0, -1, 1, 0])).is_err());
        assert!(fixed_point(&m(&[2, 0, 0, 3])).is_err());
    }

    #[test]
    fn gauss_method_examples() {
        let a = m(&[5, 2, 2, 1]);
        let b = m(&[5, 1, 4, 1]);
        let v = gauss_similar(&a, &b).unwrap();
        assert_eq!(v.verdict, Similarity::Distinct);
        assert_eq!(
            (v.period_a.clone(), v.period_b.clone()),
            (ints(&[2]), ints(&[1, 4]))
        );
        assert_eq!(
            gauss_similar(&a, &a).unwrap().verdict,
            Similarity::SameClass
        );
        let u = m(&[1, 1, 0, 1]);
        let conj = &(&u * &a) * &u.inverse_unimodular().unwrap();
        assert_eq!(
            gauss_similar(&a, &conj).unwrap().verdict,
            Similarity::SameClass
        );
        // a power shares the fixed point but not the class
        let sq = a.pow(2).unwrap();
        let v = gauss_similar(&a, &sq).unwrap();
        assert!(v.periods_match());
        assert_eq!(v.verdict, Similarity::Distinct);
    }

    #[test]
    fn gauss_requires_unimodular() {
        assert!(matches!(
            gauss_similar(&m(&[3, 1, 1, 2]), &m(&[5, 2, 2, 1])),
            Err(Error::Precondition(_))
        ));
    }
}
