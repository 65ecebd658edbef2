//! Smith normal form over the integers and the abelian groups it yields:
//! K-theory of Cuntz-Krieger algebras and first homology of torus bundles.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ext_gcd, IntMatrix};

/// `S = U * A * V` with `U`, `V` unimodular and `S` diagonal with a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Checks every structural claim of the decomposition against `a`.
    pub fn verify(&self, a: &IntMatrix) -> Result<()> {
        let product = &(&self.u * a) * &self.v;
        if product != self.s {
            return Err(Error::invariant(format!(
                "U*A*V = {product} differs from S = {}",
                self.s
            )));
        }
        for (name, m) in [("U", &self.u), ("V", &self.v)] {
            let det = m.det()?;
            if det.abs() != BigInt::one() {
                return Err(Error::invariant(format!("det {name} = {det}, not +-1")));
            }
        }
        for i in 0..self.s.rows() {
            for j in 0..self.s.cols() {
                if i != j && !self.s.get(i, j).is_zero() {
                    return Err(Error::invariant(format!(
                        "S has off-diagonal entry at ({i}, {j})"
                    )));
                }
            }
        }
        let diag = self.diagonal();
        if let Some(neg) = diag.iter().find(|d| d.is_negative()) {
            return Err(Error::invariant(format!("negative diagonal entry {neg}")));
        }
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            };
            if !ok {
                return Err(Error::invariant(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
///
/// Pivot: smallest nonzero absolute value in the active block, ties to the
/// lowest row-major index. Rows are cleared before columns. A final pass
/// replaces diagonal pairs by `(gcd, lcm)` until the divisibility chain holds.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let r = m.min(n);

    'outer: for t in 0..r {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = s.get(i, j);
                    if !x.is_zero() && pivot.is_none_or(|(pi, pj)| x.abs() < s.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'outer;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = s.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    s.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
                clean &= s.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = s.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    s.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                }
                clean &= s.get(t, j).is_zero();
            }
            if clean {
                break;
            }
        }
    }

    for t in 0..r {
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    for i in 0..r {
        for j in i + 1..r {
            let a = s.get(i, i).clone();
            let b = s.get(j, j).clone();
            let divides = if a.is_zero() {
                b.is_zero()
            } else {
                b.is_multiple_of(&a)
            };
            if divides {
                continue;
            }
            let (g, x, y) = ext_gcd(&a, &b);
            // row_i += row_j, then columns (i, j) * [[x, -b/g], [y, a/g]], then row_j -= (b*y/g) row_i
            s.add_row_multiple(i, j, &BigInt::one());
            u.add_row_multiple(i, j, &BigInt::one());
            let nb = -(&b / &g);
            let ag = &a / &g;
            s.mix_cols(i, j, [&x, &nb, &y, &ag]);
            v.mix_cols(i, j, [&x, &nb, &y, &ag]);
            let k = -(&b * &y / &g);
            s.add_row_multiple(j, i, &k);
            u.add_row_multiple(j, i, &k);
        }
    }

    SmithForm { u, s, v }
}

/// Finitely generated abelian group `Z^r + Z/d1 + ... + Z/dk` with `d1 | d2 | ...`, all `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FinGenAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FinGenAbelianGroup {
    pub fn free(rank: usize) -> Self {
        FinGenAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Group with the given cyclic factors (`0` = infinite cyclic), brought to invariant-factor form.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        if n == 0 {
            return Self::default();
        }
        let mut diag = IntMatrix::zeros(n, n);
        for (i, d) in orders.iter().enumerate() {
            diag.set(i, i, d.abs());
        }
        Self::from_smith_diagonal(&smith_normal_form(&diag).diagonal(), 0)
    }

    fn from_smith_diagonal(diag: &[BigInt], extra_free: usize) -> Self {
        FinGenAbelianGroup {
            free_rank: extra_free + diag.iter().filter(|d| d.is_zero()).count(),
            torsion: diag
                .iter()
                .filter(|d| *d > &BigInt::one())
                .cloned()
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        orders.extend(std::iter::repeat_n(
            BigInt::zero(),
            self.free_rank + other.free_rank,
        ));
        Self::from_cyclic_orders(&orders)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for FinGenAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z^m / A Z^n`.
pub fn cokernel(a: &IntMatrix) -> FinGenAbelianGroup {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    FinGenAbelianGroup::from_smith_diagonal(&diag, a.rows() - diag.len())
}

fn require_nonnegative_square(b: &IntMatrix) -> Result<usize> {
    let n = b.require_square()?;
    if !b.is_nonnegative() {
        return Err(Error::precondition(format!(
            "matrix {b} has negative entries"
        )));
    }
    Ok(n)
}

fn identity_minus_transpose(b: &IntMatrix) -> IntMatrix {
    &IntMatrix::identity(b.rows()) - &b.transpose()
}

/// `K_0(O_B) = Z^n / (I - B^T) Z^n`.
pub fn ck_k0(b: &IntMatrix) -> Result<FinGenAbelianGroup> {
    require_nonnegative_square(b)?;
    Ok(cokernel(&identity_minus_transpose(b)))
}

/// `K_1(O_B) = ker(I - B^T)`, free of rank equal to the nullity.
pub fn ck_k1(b: &IntMatrix) -> Result<FinGenAbelianGroup> {
    let n = require_nonnegative_square(b)?;
    let rank = smith_normal_form(&identity_minus_transpose(b)).rank();
    Ok(FinGenAbelianGroup::free(n - rank))
}

/// `H_1(M_A; Z) = Z + Z^n/(A - I)Z^n` for the mapping torus of `A` in `GL(n, Z)`.
///
/// For 2x2 matrices with determinant 1 and trace > 2 the result is also
/// checked against `Z + K_0(O_A)`.
pub fn torus_bundle_h1(a: &IntMatrix) -> Result<FinGenAbelianGroup> {
    let n = a.require_square()?;
    let det = a.det()?;
    if det.abs() != BigInt::one() {
        return Err(Error::precondition(format!(
            "monodromy {a} has determinant {det}, not +-1"
        )));
    }
    let h1 = FinGenAbelianGroup::free(1).direct_sum(&cokernel(&(a - &IntMatrix::identity(n))));
    if n == 2 && det.is_one() && a.trace() > BigInt::from(2) {
        let k0 = cokernel(&identity_minus_transpose(a));
        let expected = FinGenAbelianGroup::free(1).direct_sum(&k0);
        if expected != h1 {
            return Err(Error::invariant(format!(
                "H_1 = {h1} but Z + K_0 = {expected} for monodromy {a}"
            )));
        }
    }
    Ok(h1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn m(e: &[i64]) -> IntMatrix {
        IntMatrix::square_i64(e).unwrap()
    }

    fn group(free: usize, torsion: &[i64]) -> FinGenAbelianGroup {
        FinGenAbelianGroup {
            free_rank: free,
            torsion: torsion.iter().map(|&t| int(t)).collect(),
        }
    }

    #[test]
    fn smith_examples() {
        let id = m(&[1, 0, 0, 1]);
        let snf = smith_normal_form(&id);
        assert_eq!(snf.s, id);
        assert_eq!(snf.u, id);
        assert_eq!(snf.v, id);
        for (entries, diag) in [([-4, -4, -1, 0], [1, 4]), ([-4, -2, -2, 0], [2, 2])] {
            let a = m(&entries);
            let snf = smith_normal_form(&a);
            snf.verify(&a).unwrap();
            assert_eq!(snf.diagonal(), vec![int(diag[0]), int(diag[1])]);
        }
    }

    #[test]
    fn smith_needs_gcd_fixup() {
        let a = m(&[2, 0, 0, 3]);
        let snf = smith_normal_form(&a);
        snf.verify(&a).unwrap();
        assert_eq!(snf.diagonal(), vec![int(1), int(6)]);
        let a = IntMatrix::from_i64(2, 3, &[0, 0, 0, 0, 0, 5]).unwrap();
        let snf = smith_normal_form(&a);
        snf.verify(&a).unwrap();
        assert_eq!(snf.diagonal(), vec![int(5), int(0)]);
    }

    #[test]
    fn cokernels() {
        assert_eq!(cokernel(&m(&[1, 0, 0, 4])), group(0, &[4]));
        assert_eq!(cokernel(&m(&[0, 0, 0, 0])), group(2, &[]));
        assert_eq!(cokernel(&m(&[2, 0, 0, 6])), group(0, &[2, 6]));
        assert_eq!(cokernel(&m(&[2, 0, 0, 6])).to_string(), "Z/2 + Z/6");
    }

    #[test]
    fn cuntz_krieger_groups() {
        assert_eq!(ck_k0(&m(&[5, 2, 2, 1])).unwrap(), group(0, &[2, 2]));
        assert_eq!(ck_k0(&m(&[5, 1, 4, 1])).unwrap().to_string(), "Z/4");
        assert_eq!(ck_k0(&m(&[1, 6, 0, 1])).unwrap(), group(1, &[6]));
        assert_eq!(ck_k1(&m(&[5, 1, 4, 1])).unwrap(), group(0, &[]));
        assert_eq!(ck_k1(&m(&[1, 0, 0, 1])).unwrap(), group(2, &[]));
        assert_eq!(ck_k1(&m(&[1, 1, 0, 1])).unwrap(), group(1, &[]));
        assert!(ck_k0(&m(&[1, -1, 0, 1])).is_err());
    }

    #[test]
    fn torus_bundles() {
        assert_eq!(torus_bundle_h1(&m(&[1, 3, 0, 1])).unwrap(), group(2, &[3]));
        assert_eq!(
            torus_bundle_h1(&m(&[5, 2, 2, 1])).unwrap(),
            group(1, &[2, 2])
        );
        assert_eq!(torus_bundle_h1(&m(&[1, 0, 0, 1])).unwrap(), group(3, &[]));
        assert!(matches!(
            torus_bundle_h1(&m(&[2, 0, 0, 1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn group_algebra() {
        let g = group(0, &[2]).direct_sum(&group(0, &[3]));
        assert_eq!(g, group(0, &[6]));
        assert_eq!(g.order(), Some(int(6)));
        assert_eq!(group(1, &[]).order(), None);
        assert_eq!(group(0, &[]).to_string(), "0");
        assert_eq!(group(2, &[4]).to_string(), "Z^2 + Z/4");
    }
}
