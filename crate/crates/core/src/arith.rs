//! Number-theoretic endpoints: Legendre symbols, Chebyshev traces, the unit
//! index function `pi(n)`, brute-force point counts of elliptic curves over
//! `F_p`, trace congruences, and the rank/complexity table for primes `p = 3 mod 4`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::contfrac::{cf_expand_sqrt, classify_period, fundamental_unit, in_order, PeriodicCF};
use crate::error::{Error, Result};
use crate::exact::{
    divisors_u64, is_prime_u64, is_squarefree, prime_factors_u64, primes_up_to, Rat,
};

/// Largest prime `count_points_bruteforce` accepts without an explicit bound.
pub const DEFAULT_MAX_PRIME: u64 = 10_000;

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::precondition(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Euler's criterion `a^((p-1)/2) mod p`.
pub fn legendre_symbol(a: &BigInt, p: u64) -> Result<i8> {
    require_odd_prime(p)?;
    let pb = BigInt::from(p);
    let r = a.mod_floor(&pb);
    if r.is_zero() {
        return Ok(0);
    }
    let e = r.modpow(&BigInt::from((p - 1) / 2), &pb);
    Ok(if e.is_one() { 1 } else { -1 })
}

/// Kronecker symbol `(dk / q)` for a fundamental discriminant `dk` and a prime `q`.
fn kronecker_prime(dk: &BigInt, q: u64) -> Result<i8> {
    if q != 2 {
        return legendre_symbol(dk, q);
    }
    Ok(match dk.mod_floor(&BigInt::from(8)).to_u8().unwrap() {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    })
}

fn field_discriminant(d: &BigInt) -> BigInt {
    if d.mod_floor(&BigInt::from(4)).is_one() {
        d.clone()
    } else {
        d * 4
    }
}

/// `T_n(x)` from `T_0 = 1`, `T_1 = x`, `T_n = 2x T_{n-1} - T_{n-2}`.
pub fn chebyshev_t(n: u64, x: &Rat) -> Rat {
    let two_x = x * Rat::from_integer(BigInt::from(2));
    let (mut prev, mut cur) = (Rat::one(), x.clone());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &two_x * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiValue {
    pub value: u64,
    /// `n * prod_{q | n} (1 - (d_K/q)/q)`, which `value` divides.
    pub bound: u64,
}

/// Least `k` with `eps^k` in the order `Z + n omega Z`, `eps` the fundamental unit of the maximal order.
pub fn pi_function(d: &BigInt, n: u64) -> Result<PiValue> {
    if d <= &BigInt::one() || !is_squarefree(d) {
        return Err(Error::precondition(format!(
            "radicand {d} must be squarefree and >= 2"
        )));
    }
    if n == 0 {
        return Err(Error::precondition("n must be positive"));
    }
    let dk = field_discriminant(d);
    let mut bound = Rat::from_integer(BigInt::from(n));
    let mut primes = prime_factors_u64(n);
    primes.dedup();
    for q in primes {
        let chi = kronecker_prime(&dk, q)?;
        bound *= Rat::one() - Rat::new(BigInt::from(chi), BigInt::from(q));
    }
    if !bound.is_integer() {
        return Err(Error::precondition(format!(
            "index bound {bound} is not an integer"
        )));
    }
    let bound = bound
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::precondition("index bound does not fit in 64 bits"))?;
    let eps = fundamental_unit(d, &BigInt::one())?;
    let nb = BigInt::from(n);
    for k in divisors_u64(bound) {
        let power = eps.pow(k as u32);
        if in_order(&power, &nb) {
            let unit = fundamental_unit(d, &nb)?;
            if unit != power {
                return Err(Error::invariant(format!(
                    "unit of conductor {n} is {unit}, expected eps^{k} = {power}"
                )));
            }
            return Ok(PiValue { value: k, bound });
        }
    }
    Err(Error::invariant(format!(
        "no divisor of {bound} gives a power of {eps} in the order of conductor {n}"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveForm {
    /// `y^2 = x^3 + a x + b`.
    Weierstrass { a: u64, b: u64 },
    /// `y^2 = x (x - 1)(x - lambda)`.
    Legendre { lambda: u64 },
}

/// Nonsingular elliptic curve over `F_p`, `p` an odd prime; coefficients reduced mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EllipticCurveFp {
    p: u64,
    form: CurveForm,
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl EllipticCurveFp {
    pub fn weierstrass(a: &BigInt, b: &BigInt, p: u64) -> Result<Self> {
        require_odd_prime(p)?;
        let (a, b) = (reduce(a, p), reduce(b, p));
        let disc = (BigInt::from(4) * BigInt::from(a).pow(3)
            + BigInt::from(27) * BigInt::from(b).pow(2))
        .mod_floor(&BigInt::from(p));
        if disc.is_zero() {
            return Err(Error::precondition(format!("4a^3 + 27b^2 = 0 mod {p}")));
        }
        Ok(EllipticCurveFp {
            p,
            form: CurveForm::Weierstrass { a, b },
        })
    }

    pub fn legendre(lambda: &BigInt, p: u64) -> Result<Self> {
        require_odd_prime(p)?;
        let lambda = reduce(lambda, p);
        if lambda <= 1 {
            return Err(Error::precondition(format!(
                "lambda = {lambda} mod {p} gives a singular curve"
            )));
        }
        Ok(EllipticCurveFp {
            p,
            form: CurveForm::Legendre { lambda },
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn form(&self) -> CurveForm {
        self.form
    }

    fn rhs(&self, x: u64) -> u64 {
        let p = self.p as u128;
        let x = x as u128;
        let v = match self.form {
            CurveForm::Weierstrass { a, b } => (x * x % p * x + a as u128 * x + b as u128) % p,
            CurveForm::Legendre { lambda } => {
                x * ((x + p - 1) % p) % p * ((x + p - lambda as u128) % p) % p
            }
        };
        v as u64
    }
}

/// Projective point count by enumerating `x`, for `p <= DEFAULT_MAX_PRIME`.
pub fn count_points_bruteforce(e: &EllipticCurveFp) -> Result<u64> {
    count_points_bounded(e, DEFAULT_MAX_PRIME)
}

/// Projective point count, asserting the Hasse bound.
pub fn count_points_bounded(e: &EllipticCurveFp, bound: u64) -> Result<u64> {
    let p = e.p;
    if p > bound {
        return Err(Error::BoundExceeded { p, bound });
    }
    let mut is_square = vec![false; p as usize];
    for y in 0..p {
        is_square[((y as u128 * y as u128) % p as u128) as usize] = true;
    }
    let mut count = 1u64;
    for x in 0..p {
        let v = e.rhs(x);
        count += if v == 0 {
            1
        } else if is_square[v as usize] {
            2
        } else {
            0
        };
    }
    let a = p as i128 + 1 - count as i128;
    if a * a > 4 * p as i128 {
        return Err(Error::invariant(format!(
            "count {count} over F_{p} violates the Hasse bound"
        )));
    }
    Ok(count)
}

/// `a_p = p + 1 - #E(F_p)`.
pub fn trace_of_frobenius(e: &EllipticCurveFp) -> Result<i64> {
    trace_of_frobenius_bounded(e, DEFAULT_MAX_PRIME)
}

pub fn trace_of_frobenius_bounded(e: &EllipticCurveFp, bound: u64) -> Result<i64> {
    let n = count_points_bounded(e, bound)?;
    Ok(e.p as i64 + 1 - n as i64)
}

/// A divisor `d` of `p - chi` and a sign `s` with `a_p = s t_d mod p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivisorMatch {
    pub divisor: u64,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPrimeRow {
    /// `(b - 2)/(b + 2) mod p`.
    pub lambda: u64,
    pub count: u64,
    pub a_p: i64,
    /// `((b^2 - 4)/p)`.
    pub chi: i8,
    /// `p - chi`.
    pub divisor_bound: u64,
    /// All divisors `d` (ascending) and signs with `a_p = +-t_d mod p`, `t_d = 2 T_d(b/2)`.
    pub matches: Vec<DivisorMatch>,
    /// Divisors with `a_p = +-t_d` as integers.
    pub literal: Vec<DivisorMatch>,
}

impl GoodPrimeRow {
    pub fn first_match(&self) -> Option<DivisorMatch> {
        self.matches.first().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOutcome {
    Good(GoodPrimeRow),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationRow {
    pub p: u64,
    pub outcome: RowOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalizationSummary {
    pub primes: usize,
    pub skipped: usize,
    pub congruence_holds: usize,
    pub literal_holds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationReport {
    pub b: BigInt,
    pub rows: Vec<LocalizationRow>,
    pub summary: LocalizationSummary,
}

/// Compares brute-force traces of `y^2 = x(x-1)(x - (b-2)/(b+2))` with the
/// unit traces `t_d = 2 T_d(b/2)`, `t_0 = 2`, `t_1 = b`, `t_d = b t_{d-1} - t_{d-2}`.
pub fn localization_report(b: &BigInt, p_max: u64) -> Result<LocalizationReport> {
    localization_report_bounded(b, p_max, DEFAULT_MAX_PRIME)
}

pub fn localization_report_bounded(
    b: &BigInt,
    p_max: u64,
    bound: u64,
) -> Result<LocalizationReport> {
    if b < &BigInt::from(3) {
        return Err(Error::precondition(format!("b = {b} must be at least 3")));
    }
    let mut rows = Vec::new();
    let mut summary = LocalizationSummary::default();
    for p in primes_up_to(p_max) {
        let outcome = localization_row(b, p, bound)?;
        match &outcome {
            RowOutcome::Skipped(_) => summary.skipped += 1,
            RowOutcome::Good(row) => {
                summary.primes += 1;
                summary.congruence_holds += usize::from(!row.matches.is_empty());
                summary.literal_holds += usize::from(!row.literal.is_empty());
            }
        }
        rows.push(LocalizationRow { p, outcome });
    }
    Ok(LocalizationReport {
        b: b.clone(),
        rows,
        summary,
    })
}

fn localization_row(b: &BigInt, p: u64, bound: u64) -> Result<RowOutcome> {
    if p == 2 {
        return Ok(RowOutcome::Skipped("p = 2".into()));
    }
    let pb = BigInt::from(p);
    if (b + 2u32).mod_floor(&pb).is_zero() {
        return Ok(RowOutcome::Skipped(format!("{p} divides b + 2")));
    }
    if (b - 2u32).mod_floor(&pb).is_zero() {
        return Ok(RowOutcome::Skipped(format!(
            "{p} divides b - 2, lambda = 0"
        )));
    }
    let inv = (b + 2u32).modpow(&BigInt::from(p - 2), &pb);
    let lambda = ((b - 2u32) * inv).mod_floor(&pb);
    let e = EllipticCurveFp::legendre(&lambda, p)?;
    let count = count_points_bounded(&e, bound)?;
    let a_p = p as i64 + 1 - count as i64;
    let chi = legendre_symbol(&(b * b - 4u32), p)?;
    let divisor_bound = (p as i64 - chi as i64) as u64;

    let a_mod = reduce(&BigInt::from(a_p), p);
    let mut matches = Vec::new();
    let mut literal = Vec::new();
    let divisors = divisors_u64(divisor_bound);
    let d_max = *divisors.last().unwrap();
    // exact traces grow geometrically; once past the Hasse bound they stop being tracked
    let hasse = BigInt::from(2 * (p as f64).sqrt().ceil() as u64 + 2);
    let (mut prev, mut cur) = (BigInt::from(2), b.clone());
    let (mut prev_m, mut cur_m) = (2 % p, reduce(b, p));
    let bm = reduce(b, p) as u128;
    let mut di = divisors.iter().peekable();
    for d in 0..=d_max {
        let (t_mod, t_exact) = if d == 0 {
            (prev_m, &prev)
        } else {
            (cur_m, &cur)
        };
        if di.peek() == Some(&&d) {
            di.next();
            for sign in [1i8, -1] {
                let candidate = if sign == 1 { t_mod } else { (p - t_mod) % p };
                if candidate == a_mod {
                    matches.push(DivisorMatch { divisor: d, sign });
                }
                if t_exact.abs() <= hasse && BigInt::from(a_p) == t_exact * BigInt::from(sign) {
                    literal.push(DivisorMatch { divisor: d, sign });
                }
            }
        }
        if d >= 1 {
            let next_m = ((bm * cur_m as u128 + (p - prev_m) as u128) % p as u128) as u64;
            prev_m = std::mem::replace(&mut cur_m, next_m);
            if cur.abs() <= hasse {
                let next = b * &cur - &prev;
                prev = std::mem::replace(&mut cur, next);
            }
        }
    }
    Ok(RowOutcome::Good(GoodPrimeRow {
        lambda: lambda.to_u64().unwrap(),
        count,
        a_p,
        chi,
        divisor_bound,
        matches,
        literal,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreSumReport {
    pub p: u64,
    pub lambda: u64,
    /// `(p - 1)/2`.
    pub m: u64,
    /// `sum_r C(m, r)^2 lambda^r mod p`.
    pub sum: u64,
    pub count: u64,
    pub a_p: i64,
    /// `N = 1 + p + (-1)^m S mod p`.
    pub plus_sign_holds: bool,
    /// `N = 1 + p - (-1)^m S mod p`, i.e. `a_p = (-1)^m S`.
    pub minus_sign_holds: bool,
}

pub fn legendre_sum_check(lambda: &BigInt, p: u64) -> Result<LegendreSumReport> {
    legendre_sum_check_bounded(lambda, p, DEFAULT_MAX_PRIME)
}

pub fn legendre_sum_check_bounded(
    lambda: &BigInt,
    p: u64,
    bound: u64,
) -> Result<LegendreSumReport> {
    let e = EllipticCurveFp::legendre(lambda, p)?;
    let lam = reduce(lambda, p);
    let m = (p - 1) / 2;
    let pb = BigInt::from(p);
    let mut binom = BigInt::one();
    let mut sum = BigInt::zero();
    let mut lam_pow = BigInt::one();
    for r in 0..=m {
        sum = (sum + &binom * &binom * &lam_pow) % &pb;
        lam_pow = lam_pow * lam % &pb;
        binom = binom * (m - r) / (r + 1);
    }
    let sum = sum.to_u64().unwrap();
    let count = count_points_bounded(&e, bound)?;
    let signed = |s: i64| -> u64 {
        let sm = if m % 2 == 0 {
            sum as i64
        } else {
            -(sum as i64)
        };
        reduce(&BigInt::from(1 + p as i64 + s * sm), p)
    };
    let n_mod = count % p;
    Ok(LegendreSumReport {
        p,
        lambda: lam,
        m,
        sum,
        count,
        a_p: p as i64 + 1 - count as i64,
        plus_sign_holds: signed(1) == n_mod,
        minus_sign_holds: signed(-1) == n_mod,
    })
}

fn require_p_3_mod_4(p: u64) -> Result<()> {
    if !is_prime_u64(p) || p % 4 != 3 {
        return Err(Error::Unsupported(format!(
            "{p} is not a prime = 3 mod 4; only that case is implemented"
        )));
    }
    Ok(())
}

/// `2` for `p = 3 mod 8`, `1` for `p = 7 mod 8`, after checking the period shape of `sqrt(p)`.
pub fn arithmetic_complexity(p: u64) -> Result<u32> {
    require_p_3_mod_4(p)?;
    let cf = cf_expand_sqrt(&BigInt::from(p))?;
    classify_period(p, &cf)?;
    Ok(if p % 8 == 3 { 2 } else { 1 })
}

/// Rank over `Q`: `1` for `p = 3 mod 8`, `0` for `p = 7 mod 8`.
pub fn q_rank(p: u64) -> Result<u32> {
    require_p_3_mod_4(p)?;
    Ok(if p % 8 == 3 { 1 } else { 0 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCurveRow {
    pub p: u64,
    pub rank: u32,
    pub sqrt_cf: PeriodicCF,
    pub complexity: u32,
}

pub fn qcurve_table(p_max: u64) -> Result<Vec<QCurveRow>> {
    let mut rows = Vec::new();
    for p in primes_up_to(p_max).into_iter().filter(|p| p % 4 == 3) {
        let rank = q_rank(p)?;
        let complexity = arithmetic_complexity(p)?;
        if rank + 1 != complexity {
            return Err(Error::invariant(format!(
                "p = {p}: rank {rank} + 1 != complexity {complexity}"
            )));
        }
        rows.push(QCurveRow {
            p,
            rank,
            sqrt_cf: cf_expand_sqrt(&BigInt::from(p))?,
            complexity,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn w(a: i64, b: i64, p: u64) -> EllipticCurveFp {
        EllipticCurveFp::weierstrass(&int(a), &int(b), p).unwrap()
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre_symbol(&int(2), 7).unwrap(), 1);
        assert_eq!(legendre_symbol(&int(3), 7).unwrap(), -1);
        assert_eq!(legendre_symbol(&int(7), 7).unwrap(), 0);
        assert_eq!(legendre_symbol(&int(-1), 7).unwrap(), -1);
        assert!(legendre_symbol(&int(3), 2).is_err());
        assert!(legendre_symbol(&int(3), 9).is_err());
    }

    #[test]
    fn chebyshev_values() {
        assert_eq!(chebyshev_t(0, &rat(5, 7)), rat(1, 1));
        assert_eq!(chebyshev_t(2, &rat(3, 2)), rat(7, 2));
        assert_eq!(chebyshev_t(3, &rat(1, 2)), rat(-1, 1));
    }

    #[test]
    fn pi_values() {
        assert_eq!(
            pi_function(&int(2), 7).unwrap(),
            PiValue { value: 6, bound: 6 }
        );
        assert_eq!(pi_function(&int(3), 1).unwrap().value, 1);
        let r = pi_function(&int(5), 4).unwrap();
        assert_eq!(r.bound, 6);
        // eps^k = F_{k-1} + F_k omega and F_6 = 8 is the first Fibonacci number divisible by 4
        assert_eq!(r.value, 6);
        assert_eq!(
            pi_function(&int(2), 2).unwrap(),
            PiValue { value: 2, bound: 2 }
        );
        assert!(pi_function(&int(4), 3).is_err());
    }

    #[test]
    fn point_counts() {
        assert_eq!(count_points_bruteforce(&w(1, 0, 3)).unwrap(), 4);
        assert_eq!(count_points_bruteforce(&w(0, 1, 5)).unwrap(), 6);
        let leg = EllipticCurveFp::legendre(&int(2), 5).unwrap();
        assert_eq!(count_points_bruteforce(&leg).unwrap(), 8);
        assert_eq!(trace_of_frobenius(&leg).unwrap(), -2);
        assert_eq!(trace_of_frobenius(&w(1, 0, 3)).unwrap(), 0);
    }

    #[test]
    fn curve_preconditions() {
        assert!(EllipticCurveFp::weierstrass(&int(0), &int(0), 5).is_err());
        assert!(EllipticCurveFp::legendre(&int(6), 5).is_err());
        assert!(EllipticCurveFp::legendre(&int(5), 5).is_err());
        let big = EllipticCurveFp::weierstrass(&int(1), &int(1), 10_007).unwrap();
        assert_eq!(
            count_points_bruteforce(&big),
            Err(Error::BoundExceeded {
                p: 10_007,
                bound: DEFAULT_MAX_PRIME
            })
        );
        assert!(count_points_bounded(&big, 20_000).is_ok());
    }

    #[test]
    fn localization_rows() {
        let r = localization_report(&int(6), 30).unwrap();
        let row = |p: u64| r.rows.iter().find(|row| row.p == p).unwrap();
        assert!(matches!(row(2).outcome, RowOutcome::Skipped(_)));
        // b - 2 = 4, b + 2 = 8: only p = 2 is bad
        let RowOutcome::Good(g) = &row(7).outcome else {
            panic!()
        };
        // lambda = 4/8 = 1/2 = 4 mod 7
        assert_eq!(g.lambda, 4);
        let e = EllipticCurveFp::legendre(&int(4), 7).unwrap();
        assert_eq!(g.a_p, trace_of_frobenius(&e).unwrap());
        // 32 = 4 mod 7 is a square
        assert_eq!((g.chi, g.divisor_bound), (1, 6));
        let RowOutcome::Good(g) = &row(5).outcome else {
            panic!()
        };
        // 32 = 2 mod 5 is not a square
        assert_eq!((g.chi, g.divisor_bound), (-1, 6));

        let r = localization_report(&int(5), 10).unwrap();
        assert!(matches!(
            r.rows.iter().find(|row| row.p == 7).unwrap().outcome,
            RowOutcome::Skipped(_)
        ));
        assert!(matches!(
            r.rows.iter().find(|row| row.p == 3).unwrap().outcome,
            RowOutcome::Skipped(_)
        ));
        assert!(localization_report(&int(2), 10).is_err());
    }

    #[test]
    fn legendre_sums() {
        let r = legendre_sum_check(&int(2), 5).unwrap();
        assert_eq!((r.sum, r.count, r.a_p), (3, 8, -2));
        assert!(r.minus_sign_holds);
        assert!(!r.plus_sign_holds);
        assert!(legendre_sum_check(&int(7), 7).is_err());
        assert!(legendre_sum_check(&int(3), 7).unwrap().minus_sign_holds);
    }

    #[test]
    fn complexity_and_rank() {
        assert_eq!(arithmetic_complexity(3).unwrap(), 2);
        assert_eq!(arithmetic_complexity(7).unwrap(), 1);
        assert_eq!(arithmetic_complexity(67).unwrap(), 2);
        assert_eq!(q_rank(11).unwrap(), 1);
        assert_eq!(q_rank(23).unwrap(), 0);
        assert_eq!(q_rank(79).unwrap(), 0);
        assert!(matches!(
            arithmetic_complexity(5),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(q_rank(15), Err(Error::Unsupported(_))));
    }

    #[test]
    fn small_tables() {
        let t = qcurve_table(3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!((t[0].p, t[0].rank, t[0].complexity), (3, 1, 2));
        assert_eq!(t[0].sqrt_cf.render_plain(), "[1, 1,2]");
        assert!(qcurve_table(2).unwrap().is_empty());
        assert_eq!(qcurve_table(100).unwrap().len(), 13);
    }
}
