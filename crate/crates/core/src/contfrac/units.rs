use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::gauss::matrix_from_period;
use super::periodic::cf_expand;
use super::surd::QuadSurd;
use crate::error::{Error, Result};
use crate::exact::{is_squarefree, rat, rat_int, QuadExt, Rat};

fn require_squarefree(d: &BigInt) -> Result<()> {
    if d <= &BigInt::one() || !is_squarefree(d) {
        return Err(Error::precondition(format!(
            "radicand {d} must be a squarefree integer >= 2"
        )));
    }
    Ok(())
}

/// Generator of the maximal order: `(1 + sqrt d)/2` when `d = 1 mod 4`, else `sqrt d`.
pub fn omega(d: &BigInt) -> Result<QuadExt> {
    require_squarefree(d)?;
    if d.mod_floor(&BigInt::from(4)).is_one() {
        QuadExt::new(rat(1, 2), rat(1, 2), d.clone())
    } else {
        QuadExt::sqrt(d)
    }
}

/// Coordinates `(u, v)` of `x = u + v*omega`, when both are integers.
pub fn order_coords(x: &QuadExt) -> Option<(BigInt, BigInt)> {
    let (u, v): (Rat, Rat) = if x.d().mod_floor(&BigInt::from(4)).is_one() {
        let v = x.b() * rat_int(BigInt::from(2));
        (x.a() - x.b(), v)
    } else {
        (x.a().clone(), x.b().clone())
    };
    (u.is_integer() && v.is_integer()).then(|| (u.to_integer(), v.to_integer()))
}

/// Membership in the order `Z + (f*omega)Z` of conductor `f`.
pub fn in_order(x: &QuadExt, f: &BigInt) -> bool {
    order_coords(x).is_some_and(|(_, v)| v.is_multiple_of(f))
}

/// Fundamental unit of the maximal order, read off the period of `omega`:
/// for the purely periodic tail `y` with period matrix `(p, p'; q, q')`
/// the unit is `q*y + q'`.
fn maximal_order_unit(d: &BigInt) -> Result<QuadExt> {
    let w = omega(d)?;
    let cf = cf_expand(&QuadSurd::from_quad(&w)?);
    let tail = super::periodic::PeriodicCF::new(vec![], cf.period().to_vec())?;
    let y = tail.value();
    let m = matrix_from_period(cf.period())?;
    let unit = y
        .scale(&rat_int(m.get(1, 0).clone()))
        .add_rat(&rat_int(m.get(1, 1).clone()));
    Ok(unit)
}

/// Smallest unit `> 1` of the order `Z + (f*omega)Z` in `Q(sqrt d)`.
pub fn fundamental_unit(d: &BigInt, f: &BigInt) -> Result<QuadExt> {
    require_squarefree(d)?;
    if !f.is_positive() {
        return Err(Error::precondition(format!(
            "conductor {f} must be positive"
        )));
    }
    let eps = maximal_order_unit(d)?;
    let norm = eps.norm();
    if norm.abs() != Rat::one() || order_coords(&eps).is_none() {
        return Err(Error::invariant(format!(
            "period unit {eps} is not a unit of the maximal order"
        )));
    }
    let mut power = eps.clone();
    while !in_order(&power, f) {
        power = &power * &eps;
    }
    Ok(power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn q(a: (i64, i64), b: (i64, i64), d: i64) -> QuadExt {
        QuadExt::new(rat(a.0, a.1), rat(b.0, b.1), int(d)).unwrap()
    }

    #[test]
    fn small_fundamental_units() {
        assert_eq!(
            fundamental_unit(&int(2), &int(1)).unwrap(),
            q((1, 1), (1, 1), 2)
        );
        assert_eq!(
            fundamental_unit(&int(5), &int(1)).unwrap(),
            q((1, 2), (1, 2), 5)
        );
        assert_eq!(
            fundamental_unit(&int(3), &int(1)).unwrap(),
            q((2, 1), (1, 1), 3)
        );
        assert_eq!(
            fundamental_unit(&int(2), &int(2)).unwrap(),
            q((3, 1), (2, 1), 2)
        );
        assert_eq!(
            fundamental_unit(&int(61), &int(1)).unwrap(),
            q((39, 2), (5, 2), 61)
        );
    }

    #[test]
    fn invalid_radicands() {
        assert!(fundamental_unit(&int(4), &int(1)).is_err());
        assert!(fundamental_unit(&int(12), &int(1)).is_err());
        assert!(fundamental_unit(&int(1), &int(1)).is_err());
        assert!(fundamental_unit(&int(2), &int(0)).is_err());
    }

    #[test]
    fn order_membership() {
        let w = omega(&int(5)).unwrap();
        assert_eq!(order_coords(&w), Some((int(0), int(1))));
        assert!(in_order(&q((3, 1), (2, 1), 2), &int(2)));
        assert!(!in_order(&q((1, 1), (1, 1), 2), &int(2)));
        assert_eq!(order_coords(&q((1, 2), (0, 1), 5)), None);
    }
}
