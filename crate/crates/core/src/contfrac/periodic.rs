use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::gauss::matrix_from_period;
use super::surd::QuadSurd;
use crate::error::{Error, Result};
use crate::exact::{rat_int, QuadExt, Rat};

/// An eventually periodic simple continued fraction `[a0, ..., a_{k-1}, ~b1, ..., bP]`.
///
/// The leading term may be any integer; every later term is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicCF {
    preperiod: Vec<BigInt>,
    period: Vec<BigInt>,
}

impl PeriodicCF {
    /// Builds the fraction and reduces it to minimal preperiod and period.
    pub fn new(preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::malformed("period must be nonempty"));
        }
        let tail = preperiod.iter().skip(1).chain(period.iter());
        if let Some(bad) = tail.clone().find(|a| !a.is_positive()) {
            return Err(Error::malformed(format!(
                "partial quotient {bad} after the first must be positive"
            )));
        }
        if preperiod.is_empty() && !period[0].is_positive() {
            return Err(Error::malformed(
                "purely periodic fraction needs positive terms",
            ));
        }
        let mut cf = PeriodicCF { preperiod, period };
        cf.minimize();
        Ok(cf)
    }

    fn minimize(&mut self) {
        let n = self.period.len();
        if let Some(len) = (1..=n)
            .filter(|l| n % l == 0)
            .find(|&l| (l..n).all(|i| self.period[i] == self.period[i - l]))
        {
            self.period.truncate(len);
        }
        // Fold a preperiod tail that repeats the end of the period.
        while let Some(last) = self.preperiod.last() {
            if !last.is_positive() || last != self.period.last().unwrap() {
                break;
            }
            let v = self.preperiod.pop().unwrap();
            self.period.pop();
            self.period.insert(0, v);
        }
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    /// Lexicographically least cyclic rotation of the period.
    pub fn canonical_period(&self) -> Vec<BigInt> {
        least_rotation(&self.period)
    }

    /// First `n` partial quotients.
    pub fn digits(&self, n: usize) -> Vec<BigInt> {
        self.preperiod
            .iter()
            .chain(self.period.iter().cycle())
            .take(n)
            .cloned()
            .collect()
    }

    /// Exact value as an element of a real quadratic field.
    pub fn value(&self) -> QuadExt {
        let m = matrix_from_period(&self.period).expect("period is nonempty");
        let (p, p1, q, q1) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
        // y = (p y + p1)/(q y + q1), positive root of q y^2 + (q1 - p) y - p1 = 0.
        let b = p - q1;
        let disc = &b * &b + BigInt::from(4) * q * p1;
        let two_q = rat_int(q * BigInt::from(2));
        let mut v = QuadExt::new(rat_int(b) / &two_q, Rat::one() / &two_q, disc)
            .expect("periodic fraction is irrational");
        for a in self.preperiod.iter().rev() {
            v = v
                .inv()
                .expect("nonzero complete quotient")
                .add_rat(&rat_int(a.clone()));
        }
        v
    }

    /// `[a0, ~a1,...,aP]` with the period marked by `~`.
    pub fn render_marked(&self) -> String {
        self.render(true)
    }

    /// `[a0, a1,...,aP]` with no period marker.
    pub fn render_plain(&self) -> String {
        self.render(false)
    }

    fn render(&self, marked: bool) -> String {
        let join = |xs: &[BigInt]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut parts: Vec<String> = self.preperiod.iter().map(|a| a.to_string()).collect();
        let marker = if marked { "~" } else { "" };
        parts.push(format!("{marker}{}", join(&self.period)));
        format!("[{}]", parts.join(", "))
    }
}

impl fmt::Display for PeriodicCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_marked())
    }
}

pub(crate) fn least_rotation(xs: &[BigInt]) -> Vec<BigInt> {
    (0..xs.len())
        .map(|r| xs[r..].iter().chain(&xs[..r]).cloned().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Continued fraction of a quadratic surd, with the period found by exact
/// repetition of the `(p, q)` state.
pub fn cf_expand(x: &QuadSurd) -> PeriodicCF {
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut cur = x.clone();
    loop {
        let key = (cur.p().clone(), cur.q().clone());
        if let Some(&start) = seen.get(&key) {
            let period = digits.split_off(start);
            return PeriodicCF {
                preperiod: digits,
                period,
            };
        }
        seen.insert(key, digits.len());
        let (a, next) = cur.step();
        digits.push(a);
        cur = next;
    }
}

/// Continued fraction of `sqrt(d)`; `d` must be a positive non-square.
pub fn cf_expand_sqrt(d: &BigInt) -> Result<PeriodicCF> {
    Ok(cf_expand(&QuadSurd::sqrt(d)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn sqrt_expansions() {
        let cf = cf_expand_sqrt(&int(3)).unwrap();
        assert_eq!(
            (cf.preperiod(), cf.period()),
            (&ints(&[1])[..], &ints(&[1, 2])[..])
        );
        let cf = cf_expand_sqrt(&int(43)).unwrap();
        assert_eq!(cf.preperiod(), &ints(&[6])[..]);
        assert_eq!(cf.period(), &ints(&[1, 1, 3, 1, 5, 1, 3, 1, 1, 12])[..]);
        assert_eq!(cf.render_marked(), "[6, ~1,1,3,1,5,1,3,1,1,12]");
        assert_eq!(cf.render_plain(), "[6, 1,1,3,1,5,1,3,1,1,12]");
    }

    #[test]
    fn silver_ratio_surds() {
        let x = QuadSurd::from_quad(&QuadExt::new(rat(1, 1), rat(1, 1), int(2)).unwrap()).unwrap();
        let cf = cf_expand(&x);
        assert!(cf.preperiod().is_empty());
        assert_eq!(cf.period(), &ints(&[2])[..]);
        let y = QuadSurd::new(int(1), int(2), int(2)).unwrap();
        let cf = cf_expand(&y);
        assert!(cf.preperiod().is_empty());
        assert_eq!(cf.period(), &ints(&[1, 4])[..]);
        assert_eq!(cf.render_marked(), "[~1,4]");
    }

    #[test]
    fn perfect_square_is_rejected() {
        assert!(matches!(
            cf_expand_sqrt(&int(4)),
            Err(Error::RationalInput(_))
        ));
    }

    #[test]
    fn value_reconstructs_input() {
        for (p, q, d) in [(0, 1, 7), (3, -2, 13), (-5, 3, 11), (1, 2, 5), (7, 4, 8)] {
            let x = QuadSurd::new(int(p), int(q), int(d)).unwrap();
            assert_eq!(cf_expand(&x).value(), x.to_quad(), "({p}+sqrt {d})/{q}");
        }
    }

    #[test]
    fn minimization() {
        let cf = PeriodicCF::new(ints(&[1, 2, 2]), ints(&[2, 2])).unwrap();
        assert_eq!(
            (cf.preperiod(), cf.period()),
            (&ints(&[1])[..], &ints(&[2])[..])
        );
        let cf = PeriodicCF::new(ints(&[3, 4]), ints(&[1, 4])).unwrap();
        assert_eq!(
            (cf.preperiod(), cf.period()),
            (&ints(&[3])[..], &ints(&[4, 1])[..])
        );
        assert!(PeriodicCF::new(ints(&[1]), vec![]).is_err());
        assert!(PeriodicCF::new(ints(&[1]), ints(&[0, 2])).is_err());
    }

    #[test]
    fn rotation_key() {
        let cf = PeriodicCF::new(vec![], ints(&[4, 1])).unwrap();
        assert_eq!(cf.canonical_period(), ints(&[1, 4]));
    }
}
