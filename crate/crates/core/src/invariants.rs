//! Perron-Frobenius eigendata of hyperbolic 2x2 matrices over `Q(sqrt D)`,
//! the pseudo-lattice `Z + Z theta` of the normalized eigenvector, its trace
//! form, module determinant and signature.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::contfrac::{
    gauss_similar, hyperbolic_discriminant, omega, Similarity, SimilarityVerdict,
};
use crate::error::{Error, Result};
use crate::exact::{is_squarefree, rat_int, IntMatrix, IntPolynomial, QuadExt, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronData {
    pub matrix: IntMatrix,
    /// Perron-Frobenius eigenvalue.
    pub lambda: QuadExt,
    /// Eigenvector is `(1, theta)`.
    pub theta: QuadExt,
}

impl PerronData {
    pub fn d(&self) -> &BigInt {
        self.lambda.d()
    }

    pub fn eigenvector(&self) -> [QuadExt; 2] {
        [self.theta.one_in(), self.theta.clone()]
    }

    pub fn lattice(&self) -> PseudoLattice {
        PseudoLattice {
            basis: self.eigenvector().to_vec(),
        }
    }

    /// `A (1, theta)^T = lambda (1, theta)^T`, componentwise in `Q(sqrt D)`.
    pub fn verify(&self) -> Result<()> {
        let v = self.eigenvector();
        for i in 0..2 {
            let row = (0..2).fold(self.lambda.zero_in(), |acc, j| {
                acc + v[j].scale(&rat_int(self.matrix.get(i, j).clone()))
            });
            if row != &self.lambda * &v[i] {
                return Err(Error::invariant(format!(
                    "row {i} of A v = {row} differs from lambda v = {}",
                    &self.lambda * &v[i]
                )));
            }
        }
        if self.lambda <= self.lambda.one_in() {
            return Err(Error::invariant(format!(
                "eigenvalue {} is not > 1",
                self.lambda
            )));
        }
        Ok(())
    }
}

pub fn perron_data(a: &IntMatrix) -> Result<PerronData> {
    a.require_dim(2)?;
    if !a.is_nonnegative() {
        return Err(Error::precondition(format!(
            "matrix {a} has negative entries"
        )));
    }
    let disc = hyperbolic_discriminant(a)?;
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let lambda = QuadExt::new(rat_int(a.trace()) * &half, half, disc)?;
    let (a11, a12, a21, a22) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    let theta = if !a12.is_zero() {
        lambda
            .add_rat(&-rat_int(a11.clone()))
            .scale(&Rat::new(BigInt::one(), a12.clone()))
    } else {
        let denom = lambda.add_rat(&-rat_int(a22.clone()));
        denom.inv()?.scale(&rat_int(a21.clone()))
    };
    let data = PerronData {
        matrix: a.clone(),
        lambda,
        theta,
    };
    data.verify()?;
    Ok(data)
}

/// Finitely generated subgroup `Z v1 + ... + Z vn` of the reals with basis in `Q(sqrt D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoLattice {
    basis: Vec<QuadExt>,
}

impl PseudoLattice {
    pub fn new(basis: Vec<QuadExt>) -> Result<Self> {
        if basis.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: "rank-2 basis".into(),
                got: format!("{} elements", basis.len()),
            });
        }
        if !basis[0].same_field(&basis[1]) {
            return Err(Error::MixedRadicands(
                basis[0].d().to_string(),
                basis[1].d().to_string(),
            ));
        }
        let det = basis[0].a() * basis[1].b() - basis[0].b() * basis[1].a();
        if det.is_zero() {
            return Err(Error::precondition("basis is linearly dependent over Q"));
        }
        Ok(PseudoLattice { basis })
    }

    pub fn basis(&self) -> &[QuadExt] {
        &self.basis
    }

    /// Basis `(u11 v1 + u12 v2, u21 v1 + u22 v2)`.
    pub fn change_basis(&self, u: &IntMatrix) -> Result<Self> {
        u.require_dim(2)?;
        let basis = (0..2)
            .map(|i| {
                (0..2).fold(self.basis[0].zero_in(), |acc, j| {
                    acc + self.basis[j].scale(&rat_int(u.get(i, j).clone()))
                })
            })
            .collect();
        Self::new(basis)
    }
}

/// Gram matrix `Tr(v_i v_j)` of a pseudo-lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceForm {
    gram: Vec<Vec<Rat>>,
}

impl TraceForm {
    /// Form from an explicit symmetric Gram matrix.
    pub fn from_gram(gram: Vec<Vec<Rat>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(Error::malformed("Gram matrix must be square and nonempty"));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::malformed("Gram matrix must be symmetric"));
                }
            }
        }
        Ok(TraceForm { gram })
    }

    pub fn gram(&self) -> &[Vec<Rat>] {
        &self.gram
    }

    /// Renders `q(x, y) = a x^2 + 2b xy + c y^2` for rank 2.
    pub fn render_quadratic(&self) -> String {
        if self.gram.len() != 2 {
            return format!("{:?}", self.gram);
        }
        let two = rat_int(BigInt::from(2));
        let terms = [
            (self.gram[0][0].clone(), "x^2"),
            (&self.gram[0][1] * &two, "xy"),
            (self.gram[1][1].clone(), "y^2"),
        ];
        let mut out = String::new();
        for (c, var) in terms {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let coef = if mag.is_one() {
                String::new()
            } else if mag.is_integer() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&coef);
            out.push_str(var);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

pub fn trace_form(lattice: &PseudoLattice) -> TraceForm {
    let b = lattice.basis();
    let gram = b
        .iter()
        .map(|vi| b.iter().map(|vj| (vi * vj).trace()).collect())
        .collect();
    TraceForm { gram }
}

/// Determinant of the Gram matrix, exact over Q.
pub fn module_determinant(q: &TraceForm) -> Rat {
    let mut m: Vec<Vec<Rat>> = q.gram.clone();
    let n = m.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            let f = &m[r][c] / &pivot;
            for k in c..n {
                let delta = &f * &m[c][k];
                m[r][k] -= delta;
            }
        }
    }
    det
}

/// Positive minus negative squares after exact symmetric reduction over Q.
pub fn module_signature(q: &TraceForm) -> Result<i64> {
    let mut m: Vec<Vec<Rat>> = q.gram.clone();
    let n = m.len();
    let mut signature = 0i64;
    for c in 0..n {
        if m[c][c].is_zero() {
            if let Some(r) = (c + 1..n).find(|&r| !m[r][r].is_zero()) {
                // congruence by a permutation
                m.swap(c, r);
                for row in m.iter_mut() {
                    row.swap(c, r);
                }
            } else if let Some(r) = (c + 1..n).find(|&r| !m[c][r].is_zero()) {
                // x_c <- x_c + x_r makes the diagonal entry 2 m[c][r] + m[r][r] = 2 m[c][r] != 0
                for k in 0..n {
                    let v = m[r][k].clone();
                    m[c][k] += v;
                }
                for k in 0..n {
                    let v = m[k][r].clone();
                    m[k][c] += v;
                }
            } else {
                return Err(Error::precondition("trace form is degenerate"));
            }
        }
        let pivot = m[c][c].clone();
        signature += if pivot.is_positive() { 1 } else { -1 };
        for r in c + 1..n {
            let f = &m[r][c] / &pivot;
            for k in c..n {
                let delta = &f * &m[c][k];
                m[r][k] -= delta;
            }
            m[c][r] = Rat::zero();
        }
    }
    Ok(signature)
}

/// Closed-form module determinant of the order `Z + (f omega)Z`:
/// `f^2 D` when `D = 1 mod 4`, else `4 f^2 D`.
pub fn conductor_delta(d: &BigInt, f: &BigInt) -> Result<BigInt> {
    if d <= &BigInt::one() || !is_squarefree(d) {
        return Err(Error::precondition(format!(
            "radicand {d} must be squarefree and >= 2"
        )));
    }
    if !f.is_positive() {
        return Err(Error::precondition(format!(
            "conductor {f} must be positive"
        )));
    }
    let base = f * f * d;
    Ok(if d.mod_floor(&BigInt::from(4)).is_one() {
        base
    } else {
        base * 4
    })
}

/// Lattice `Z + (f omega)Z`.
pub fn order_lattice(d: &BigInt, f: &BigInt) -> Result<PseudoLattice> {
    let w = omega(d)?;
    PseudoLattice::new(vec![w.one_in(), w.scale(&rat_int(f.clone()))])
}

/// Invariants of one matrix, as listed in a comparison report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixInvariants {
    pub perron: PerronData,
    pub trace_form: TraceForm,
    pub delta: Rat,
    pub sigma: i64,
    pub alexander: IntPolynomial,
}

impl MatrixInvariants {
    pub fn of(a: &IntMatrix) -> Result<Self> {
        let perron = perron_data(a)?;
        let trace_form = trace_form(&perron.lattice());
        let delta = module_determinant(&trace_form);
        let sigma = module_signature(&trace_form)?;
        Ok(MatrixInvariants {
            alexander: a.char_poly_2x2()?,
            perron,
            trace_form,
            delta,
            sigma,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HandelmanVerdict {
    /// Some numerical invariant differs.
    Distinguished,
    /// All numerical invariants agree; this does not certify similarity.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub first: MatrixInvariants,
    pub second: MatrixInvariants,
    pub verdict: HandelmanVerdict,
    /// Names of the invariants that differ, among `D`, `Delta`, `Sigma`.
    pub differing: Vec<&'static str>,
    pub same_alexander: bool,
    /// Period-method decision, when both determinants are +-1.
    pub gauss: Option<SimilarityVerdict>,
    /// False when the period method finds one class but the invariants differ.
    pub gauss_agreement: Option<bool>,
    pub notes: Vec<String>,
}

/// Module determinants quoted in the literature for two classical examples,
/// which the direct trace-form evaluation does not reproduce.
fn cited_delta(a: &IntMatrix) -> Option<i64> {
    match a.to_compact().as_str() {
        "4,3;5,4" => Some(36),
        "4,15;1,4" => Some(900),
        _ => None,
    }
}

pub fn handelman_report(a: &IntMatrix, b: &IntMatrix) -> Result<ComparisonReport> {
    let first = MatrixInvariants::of(a)?;
    let second = MatrixInvariants::of(b)?;
    let mut differing = Vec::new();
    if first.perron.d() != second.perron.d() {
        differing.push("D");
    }
    if first.delta != second.delta {
        differing.push("Delta");
    }
    if first.sigma != second.sigma {
        differing.push("Sigma");
    }
    let verdict = if differing.is_empty() {
        HandelmanVerdict::Inconclusive
    } else {
        HandelmanVerdict::Distinguished
    };
    let unimodular = |m: &IntMatrix| m.det().map(|d| d.abs().is_one()).unwrap_or(false);
    let gauss = if unimodular(a) && unimodular(b) {
        Some(gauss_similar(a, b)?)
    } else {
        None
    };
    let gauss_agreement = gauss.as_ref().map(|g| {
        !(g.verdict == Similarity::SameClass && verdict == HandelmanVerdict::Distinguished)
    });
    let mut notes = Vec::new();
    for inv in [&first, &second] {
        if let Some(cited) = cited_delta(&inv.perron.matrix) {
            notes.push(format!(
                "cited Delta = {cited} for {} differs from the direct trace-form value {}",
                inv.perron.matrix, inv.delta
            ));
        }
    }
    if gauss_agreement == Some(false) {
        notes.push(
            "matrices are similar but their normalized modules differ by a scalar; \
             Delta depends on the (1, theta) normalization"
                .to_string(),
        );
    }
    Ok(ComparisonReport {
        same_alexander: first.alexander == second.alexander,
        first,
        second,
        verdict,
        differing,
        gauss,
        gauss_agreement,
        notes,
    })
}
