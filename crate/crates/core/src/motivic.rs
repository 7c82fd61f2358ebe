//! Restricted motivic classes: formal sums of terms
//! `coeff · [res] ⊗ [Γ-part]` in a fixed grade, where the residue part is
//! kept only through its point-count polynomial in `q`.
//!
//! The two retractions send a class of grade at most `n` to a polynomial:
//! `E_n` pads with affine space and converts Γ-parts with `χ`, `E'_n`
//! converts them with `χ'` and does not pad.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::euler::{chi, chi_prime};
use crate::exactcore::{IntLaurent, Rational};
use crate::gamma_classes::lattice_count;
use crate::semilinear::SemilinearSet;

/// Point-count polynomial in the single variable `q`.
pub type ResPoly = IntLaurent;

/// `Σ c_e q^e` from `(e, c)` pairs.
pub fn res_poly(terms: &[(i64, i64)]) -> ResPoly {
    let mut p = ResPoly::zero(1);
    for &(e, c) in terms {
        p.add_term(vec![e], BigInt::from(c));
    }
    p
}

/// `(q - 1)^l`.
pub fn gm_power(l: usize) -> ResPoly {
    res_poly(&[(1, 1), (0, -1)]).pow(l as u32)
}

/// `q^k` for any integer `k`.
pub fn q_power(k: i64) -> ResPoly {
    res_poly(&[(k, 1)])
}

/// Exact value of a residue polynomial at `q = q0`.
pub fn eval_res(p: &ResPoly, q0: &Rational) -> Rational {
    p.terms().fold(Rational::zero(), |acc, (e, c)| {
        let base = if e[0] >= 0 {
            num_traits::pow(q0.clone(), e[0] as usize)
        } else {
            Rational::one() / num_traits::pow(q0.clone(), (-e[0]) as usize)
        };
        acc + base * Rational::from_integer(c.clone())
    })
}

/// `coeff · [res] ⊗ [gamma]` in grade `grade`.
#[derive(Debug, Clone, PartialEq)]
pub struct MotivicTerm {
    pub res: ResPoly,
    pub gamma: SemilinearSet,
    pub grade: usize,
    pub coeff: i64,
}

impl MotivicTerm {
    /// The grade must be at least the dimension of the Γ-part; the excess is
    /// the grade of the residue part.
    pub fn new(res: ResPoly, gamma: SemilinearSet, grade: usize, coeff: i64) -> Result<Self> {
        if res.nvars() != 1 {
            return Err(Error::invalid("residue polynomial must be univariate in q"));
        }
        if gamma.dim_ambient() > grade {
            return Err(Error::invalid(format!(
                "grade {grade} is below the Γ-part dimension {}",
                gamma.dim_ambient()
            )));
        }
        Ok(MotivicTerm { res, gamma, grade, coeff })
    }

    pub fn gamma_dim(&self) -> usize {
        self.gamma.dim_ambient()
    }

    pub fn res_grade(&self) -> usize {
        self.grade - self.gamma_dim()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MotivicClass {
    pub terms: Vec<MotivicTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotivicOp {
    Add,
    Multiply,
}

impl MotivicClass {
    pub fn zero() -> Self {
        MotivicClass::default()
    }

    pub fn of(term: MotivicTerm) -> Self {
        MotivicClass { terms: vec![term] }
    }

    /// `[1]_k`: a point of the residue field in grade `k`.
    pub fn point(k: usize) -> Self {
        Self::of(MotivicTerm::new(res_poly(&[(0, 1)]), SemilinearSet::point0(), k, 1).expect("valid term"))
    }

    /// `[RV^{>0}]_1`: residue factor 1 over `(0, ∞) ⊂ Γ`.
    pub fn rv_positive() -> Self {
        let ray = SemilinearSet::interval(Some((Rational::zero(), false)), None);
        Self::of(MotivicTerm::new(res_poly(&[(0, 1)]), ray, 1, 1).expect("valid term"))
    }

    /// Every Γ-part bounded below in every coordinate.
    pub fn is_bounded_below(&self) -> bool {
        self.terms.iter().all(|t| t.gamma.is_bounded_below())
    }

    /// Every Γ-part bounded.
    pub fn is_bounded(&self) -> bool {
        self.terms.iter().all(|t| t.gamma.is_bounded())
    }

    pub fn max_grade(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.grade).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        MotivicClass { terms }
    }

    pub fn scale(&self, k: i64) -> Self {
        MotivicClass {
            terms: self
                .terms
                .iter()
                .filter(|_| k != 0)
                .map(|t| MotivicTerm {
                    coeff: t.coeff * k,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    /// Products of terms: residue parts multiply, Γ-parts form the product
    /// set and grades add.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                terms.push(MotivicTerm {
                    res: &a.res * &b.res,
                    gamma: a.gamma.product(&b.gamma),
                    grade: a.grade + b.grade,
                    coeff: a.coeff * b.coeff,
                });
            }
        }
        MotivicClass { terms }
    }
}

pub fn motivic_arith(op: MotivicOp, a: &MotivicClass, b: &MotivicClass) -> MotivicClass {
    match op {
        MotivicOp::Add => a.add(b),
        MotivicOp::Multiply => a.multiply(b),
    }
}

/// The generator pair `([1]_1, [RV^{>0}]_1 + [1]_0)` of the congruence.
pub fn isp_generator() -> (MotivicClass, MotivicClass) {
    (MotivicClass::point(1), MotivicClass::rv_positive().add(&MotivicClass::point(0)))
}

/// `J = [1]_1 - [RV^{>0}]_1 - [1]_0`.
pub fn isp_difference() -> MotivicClass {
    let (a, b) = isp_generator();
    a.sub(&b)
}

fn check_grade(c: &MotivicClass, n: usize) -> Result<()> {
    match c.terms.iter().find(|t| t.grade > n) {
        Some(t) => Err(Error::GradeExceeds { grade: t.grade, target: n }),
        None => Ok(()),
    }
}

/// `E_n`: `Σ coeff · χ(Γ) · (q-1)^l · res · q^(n - grade)`.
pub fn retract_e(c: &MotivicClass, n: usize) -> Result<ResPoly> {
    check_grade(c, n)?;
    let mut out = ResPoly::zero(1);
    for t in &c.terms {
        let w = chi(&t.gamma) * t.coeff;
        if w == 0 {
            continue;
        }
        let pad = q_power((n - t.grade) as i64);
        let p = &(&t.res * &gm_power(t.gamma_dim())) * &pad;
        out = &out + &p.scale(&BigInt::from(w));
    }
    Ok(out)
}

/// `E'_n`: `Σ coeff · χ'(Γ) · (q-1)^l · res`.
pub fn retract_eprime(c: &MotivicClass, n: usize) -> Result<ResPoly> {
    check_grade(c, n)?;
    let mut out = ResPoly::zero(1);
    for t in &c.terms {
        let w = chi_prime(&t.gamma) * t.coeff;
        if w == 0 {
            continue;
        }
        let p = &t.res * &gm_power(t.gamma_dim());
        out = &out + &p.scale(&BigInt::from(w));
    }
    Ok(out)
}

/// `Σ coeff · res(q0) · #(Γ ∩ ((1/r)Z)^l)`.
pub fn count_points(c: &MotivicClass, q0: u64, r: u64) -> Result<Rational> {
    if q0 < 2 {
        return Err(Error::invalid("q0 must be at least 2"));
    }
    let q = Rational::from_integer(BigInt::from(q0));
    let mut acc = Rational::zero();
    for t in &c.terms {
        let n = lattice_count(&t.gamma, r)?;
        acc += eval_res(&t.res, &q) * Rational::from_integer(BigInt::from(n) * BigInt::from(t.coeff));
    }
    Ok(acc)
}
