//! Muir continuants and the radicand equation for symmetric periods.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::periodic::{cf_expand, PeriodicCF};
use super::surd::QuadSurd;
use crate::error::{Error, Result};
use crate::exact::{is_perfect_square, is_prime_u64, isqrt, rat_int, Rat};

/// Continuant table over a list of partial quotients `a_0, a_1, ...`.
///
/// `A(i, j) = K(a_j, ..., a_{j+i})` and `B(i, j) = K(a_{j+1}, ..., a_{j+i})`,
/// extended to `i = -1, -2` by `A = 1, 0` and `B = 0, 1`. Both obey
/// `X(i, j) = a_{j+i} X(i-1, j) + X(i-2, j)`, and for `y_k = a_k y_{k+1} + y_{k+2}`:
///
/// ```text
/// y_j     = A(i-1, j) y_{i+j} + A(i-2, j) y_{i+j+1}
/// y_{j+1} = B(i-1, j) y_{i+j} + B(i-2, j) y_{i+j+1}
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuirTable {
    quotients: Vec<BigInt>,
    depth: usize,
    // [j][i + 2]
    a: Vec<Vec<BigInt>>,
    b: Vec<Vec<BigInt>>,
}

pub fn muir_symbols(quotients: &[BigInt], depth: usize) -> Result<MuirTable> {
    if depth >= quotients.len() {
        return Err(Error::OutOfRange(format!(
            "depth {depth} needs at least {} quotients, got {}",
            depth + 1,
            quotients.len()
        )));
    }
    let n = quotients.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for j in 0..n {
        let mut aj = vec![BigInt::zero(), BigInt::one()];
        let mut bj = vec![BigInt::one(), BigInt::zero()];
        for i in 0..=depth.min(n - 1 - j) {
            let q = &quotients[j + i];
            aj.push(q * &aj[i + 1] + &aj[i]);
            bj.push(q * &bj[i + 1] + &bj[i]);
        }
        a.push(aj);
        b.push(bj);
    }
    Ok(MuirTable {
        quotients: quotients.to_vec(),
        depth,
        a,
        b,
    })
}

impl MuirTable {
    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn slot(&self, i: isize, j: usize) -> Result<usize> {
        let ok = j < self.quotients.len()
            && i >= -2
            && (i < 0 || (i as usize <= self.depth && j + (i as usize) < self.quotients.len()));
        if !ok {
            return Err(Error::OutOfRange(format!(
                "Muir symbol ({i}, {j}) outside table of {} quotients, depth {}",
                self.quotients.len(),
                self.depth
            )));
        }
        Ok((i + 2) as usize)
    }

    pub fn a(&self, i: isize, j: usize) -> Result<&BigInt> {
        let k = self.slot(i, j)?;
        Ok(&self.a[j][k])
    }

    pub fn b(&self, i: isize, j: usize) -> Result<&BigInt> {
        let k = self.slot(i, j)?;
        Ok(&self.b[j][k])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadicandForm {
    /// The fraction equals `sqrt(D)` (last quotient `2 x0`).
    Sqrt,
    /// The fraction equals `(1 + sqrt(D))/2` (last quotient `2 x0 - 1`).
    HalfOnePlusSqrt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicandSolution {
    pub d: BigInt,
    pub form: RadicandForm,
    pub expansion: PeriodicCF,
}

/// Tests whether `[x0, ~x1, ..., x_P]` solves
/// `x_P = m A(P-2,1) - (-1)^P A(P-3,1) B(P-3,1)` and, when it does, returns
/// the radicand `x_P^2/4 + m A(P-3,1) - (-1)^P B(P-3,1)^2` (times four in the
/// `(1 + sqrt D)/2` case), checked against the expansion of the surd itself.
pub fn symmetric_period_radicand(
    candidate: &[BigInt],
    m: &BigInt,
) -> Result<Option<RadicandSolution>> {
    if candidate.len() < 2 {
        return Err(Error::malformed(
            "candidate needs x0 and at least one period term",
        ));
    }
    if !m.is_positive() {
        return Err(Error::malformed(format!("m = {m} must be positive")));
    }
    if let Some(bad) = candidate.iter().find(|x| !x.is_positive()) {
        return Err(Error::malformed(format!("quotient {bad} must be positive")));
    }
    let big_p = candidate.len() - 1;
    let x0 = &candidate[0];
    let x_last = &candidate[big_p];
    let inner = &candidate[1..big_p];
    if inner.iter().ne(inner.iter().rev()) {
        return Err(Error::malformed("x1..x_{P-1} must be palindromic"));
    }
    let two_x0 = x0 * BigInt::from(2);
    let form = if *x_last == two_x0 {
        RadicandForm::Sqrt
    } else if *x_last == &two_x0 - 1 {
        RadicandForm::HalfOnePlusSqrt
    } else {
        return Err(Error::malformed(format!(
            "last quotient {x_last} must be 2*x0 or 2*x0 - 1"
        )));
    };

    let table = muir_symbols(candidate, big_p.saturating_sub(2))?;
    let p = big_p as isize;
    let a_p2 = table.a(p - 2, 1)?;
    let a_p3 = table.a(p - 3, 1)?;
    let b_p3 = table.b(p - 3, 1)?;
    let sign = if big_p % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };

    if *x_last != m * a_p2 - &sign * a_p3 * b_p3 {
        return Ok(None);
    }
    let radicand: Rat = rat_int(x_last * x_last) / rat_int(BigInt::from(4)) + rat_int(m * a_p3)
        - rat_int(&sign * b_p3 * b_p3);
    let scaled = match form {
        RadicandForm::Sqrt => radicand,
        RadicandForm::HalfOnePlusSqrt => radicand * rat_int(BigInt::from(4)),
    };
    if !scaled.is_integer() {
        return Err(Error::invariant(format!(
            "radicand {scaled} for candidate is not an integer"
        )));
    }
    let d = scaled.to_integer();
    if !d.is_positive() || is_perfect_square(&d) {
        return Err(Error::invariant(format!(
            "radicand {d} is not a positive non-square"
        )));
    }
    let surd = match form {
        RadicandForm::Sqrt => QuadSurd::sqrt(&d)?,
        RadicandForm::HalfOnePlusSqrt => QuadSurd::new(BigInt::one(), BigInt::from(2), d.clone())?,
    };
    let expansion = cf_expand(&surd);
    // Both sequences are periodic from index 1; agreeing on 1 + 2*max(period) terms forces equality.
    let span = 1 + 2 * big_p.max(expansion.period().len());
    let claimed: Vec<BigInt> = candidate[..1]
        .iter()
        .chain(candidate[1..].iter().cycle())
        .take(span)
        .cloned()
        .collect();
    if expansion.digits(span) != claimed {
        return Err(Error::invariant(format!(
            "radicand {d} expands to {expansion}, not the candidate"
        )));
    }
    Ok(Some(RadicandSolution { d, form, expansion }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodKind {
    /// The middle quotient equals `x0`.
    Culminating,
    /// The middle quotient is `x0 - 1` and its predecessor is `1`.
    AlmostCulminating,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodShape {
    pub length: usize,
    pub length_mod4: usize,
    pub kind: PeriodKind,
}

/// Shape of the period of `sqrt(p)` for a prime `p = 3 mod 4`.
///
/// Fails with an invariant error if the period length is odd or its class
/// mod 4 does not match `p` mod 8.
pub fn classify_period(p: u64, cf: &PeriodicCF) -> Result<PeriodShape> {
    if !is_prime_u64(p) || p % 4 != 3 {
        return Err(Error::Unsupported(format!(
            "{p} is not a prime congruent to 3 mod 4"
        )));
    }
    let [x0] = cf.preperiod() else {
        return Err(Error::malformed(format!(
            "{cf} is not the expansion of a square root"
        )));
    };
    let period = cf.period();
    if *period.last().unwrap() != x0 * BigInt::from(2) {
        return Err(Error::malformed(format!(
            "{cf} does not end its period with 2*a0"
        )));
    }
    if *x0 != isqrt(&BigInt::from(p)) {
        return Err(Error::malformed(format!(
            "{cf} is not the expansion of sqrt({p})"
        )));
    }
    let length = period.len();
    if length % 2 != 0 {
        return Err(Error::invariant(format!(
            "sqrt({p}) has odd period length {length}"
        )));
    }
    let expected = if p % 8 == 3 { 2 } else { 0 };
    if length % 4 != expected {
        return Err(Error::invariant(format!(
            "sqrt({p}) has period length {length}, expected {expected} mod 4"
        )));
    }
    let k = length / 2;
    let mid = &period[k - 1];
    let kind = if mid == x0 {
        PeriodKind::Culminating
    } else if *mid == x0 - 1 && k >= 2 && period[k - 2].is_one() {
        PeriodKind::AlmostCulminating
    } else {
        PeriodKind::Other
    };
    Ok(PeriodShape {
        length,
        length_mod4: length % 4,
        kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::cf_expand_sqrt;
    use crate::exact::int;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn closed_forms_for_period_four() {
        // (x0, x1, x2, x1, x4) with x1 = 1, x2 = 2
        let t = muir_symbols(&ints(&[3, 1, 2, 1, 6]), 2).unwrap();
        assert_eq!(t.a(1, 1).unwrap(), &int(3));
        assert_eq!(t.b(1, 1).unwrap(), &int(2));
        assert_eq!(t.a(2, 1).unwrap(), &int(4));
        // symbolic closed forms at another point: x1 = 4, x2 = 7
        let (x1, x2) = (4, 7);
        let t = muir_symbols(&ints(&[1, x1, x2, x1, 2]), 2).unwrap();
        assert_eq!(t.a(1, 1).unwrap(), &int(x1 * x2 + 1));
        assert_eq!(t.b(1, 1).unwrap(), &int(x2));
        assert_eq!(t.a(2, 1).unwrap(), &int(x1 * x1 * x2 + 2 * x1));
    }

    #[test]
    fn base_cases() {
        let t = muir_symbols(&ints(&[5]), 0).unwrap();
        assert_eq!(t.a(0, 0).unwrap(), &int(5));
        assert_eq!(t.a(-1, 0).unwrap(), &int(1));
        assert_eq!(t.a(-2, 0).unwrap(), &int(0));
        assert_eq!(t.b(0, 0).unwrap(), &int(1));
        assert_eq!(t.b(-1, 0).unwrap(), &int(0));
        assert!(t.a(1, 0).is_err());
        assert!(t.a(0, 1).is_err());
        assert!(muir_symbols(&ints(&[1, 2]), 2).is_err());
    }

    #[test]
    fn radicand_family_members() {
        let sol = symmetric_period_radicand(&ints(&[3, 1, 2, 1, 6]), &int(3))
            .unwrap()
            .unwrap();
        assert_eq!(sol.d, int(14));
        assert_eq!(sol.form, RadicandForm::Sqrt);
        assert_eq!(sol.expansion.render_marked(), "[3, ~1,2,1,6]");
        let sol = symmetric_period_radicand(&ints(&[4, 1, 3, 1, 8]), &int(4))
            .unwrap()
            .unwrap();
        assert_eq!(sol.d, int(23));
        assert_eq!(sol.expansion.render_marked(), "[4, ~1,3,1,8]");
    }

    #[test]
    fn radicand_half_form() {
        // (1 + sqrt 13)/2 = [2, ~3]
        let sol = symmetric_period_radicand(&ints(&[2, 3]), &int(3))
            .unwrap()
            .unwrap();
        assert_eq!((sol.d, sol.form), (int(13), RadicandForm::HalfOnePlusSqrt));
    }

    #[test]
    fn radicand_rejections() {
        assert_eq!(
            symmetric_period_radicand(&ints(&[3, 1, 2, 1, 6]), &int(4)).unwrap(),
            None
        );
        assert!(symmetric_period_radicand(&ints(&[3, 1, 2, 2, 6]), &int(3)).is_err());
        assert!(symmetric_period_radicand(&ints(&[3, 1, 2, 1, 7]), &int(3)).is_err());
        assert!(symmetric_period_radicand(&ints(&[3]), &int(3)).is_err());
        assert!(symmetric_period_radicand(&ints(&[3, 1, 2, 1, 6]), &int(0)).is_err());
    }

    #[test]
    fn period_shapes() {
        let shape = |p: u64| classify_period(p, &cf_expand_sqrt(&int(p as i64)).unwrap()).unwrap();
        assert_eq!(
            shape(3),
            PeriodShape {
                length: 2,
                length_mod4: 2,
                kind: PeriodKind::Culminating
            }
        );
        assert_eq!(
            shape(7),
            PeriodShape {
                length: 4,
                length_mod4: 0,
                kind: PeriodKind::AlmostCulminating
            }
        );
        assert_eq!(shape(11).kind, PeriodKind::Culminating);
    }

    #[test]
    fn period_shape_input_checks() {
        let cf13 = cf_expand_sqrt(&int(13)).unwrap();
        assert!(matches!(
            classify_period(13, &cf13),
            Err(Error::Unsupported(_))
        ));
        let cf7 = cf_expand_sqrt(&int(7)).unwrap();
        assert!(matches!(
            classify_period(11, &cf7),
            Err(Error::Malformed(_))
        ));
        let golden = PeriodicCF::new(vec![], ints(&[1])).unwrap();
        assert!(classify_period(7, &golden).is_err());
    }
}
