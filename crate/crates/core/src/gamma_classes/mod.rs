//! Graded formal combinations of semilinear sets and the homomorphisms
//! that can be evaluated on them: Euler characteristics, volume and lattice
//! counts. Also Γ-morphism verification and singleton classes.

mod count;
mod morphism;
mod singleton;
mod volume;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_dim, Result};
use crate::euler;
use crate::exactcore::{int, Rational};
use crate::semilinear::SemilinearSet;

pub use count::lattice_count;
pub(crate) use count::scale_cell;
pub use morphism::{verify_morphism, AffinePiece, MorphismFailure, MorphismMode, MorphismReport, PiecewiseAffineMap};
pub use singleton::{h_t, h_t_monomial, orbit_representative, singleton_equal, FiniteClass, SingletonClass, SubgroupSpec};
pub use volume::{straighten_equality, volume, volume_param, Chamber};

/// A formal integer combination of sets of a common ambient dimension
/// (the grade).
#[derive(Clone, PartialEq, Eq)]
pub struct GammaClass {
    grade: usize,
    terms: Vec<(SemilinearSet, i64)>,
}

/// Values of all implemented homomorphisms on a class. Unequal vectors prove
/// the classes differ; equal vectors prove nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantVector {
    pub grade: usize,
    pub chi: i64,
    pub chi_prime: i64,
    pub dimension: i64,
    pub volume: Option<Rational>,
    /// Lattice counts for `r = 1, 2, 3`.
    pub counts: Option<[BigInt; 3]>,
}

impl GammaClass {
    pub fn zero(grade: usize) -> Self {
        GammaClass {
            grade,
            terms: Vec::new(),
        }
    }

    pub fn of(set: SemilinearSet) -> Self {
        GammaClass {
            grade: set.dim_ambient(),
            terms: vec![(set, 1)],
        }
    }

    /// `e_a`: the singleton `{a}` in grade 1.
    pub fn e(a: Rational) -> Self {
        Self::of(SemilinearSet::point(&[a]))
    }

    /// `τ_a`: the open segment `(0, a)` for `a > 0`. For `a ≤ 0` it is the
    /// value forced by `τ_a = [(0,∞)] − [(a,∞)] − e_a`, namely
    /// `−[(a, 0)] − e_0 − e_a` (and `−e_0` for `a = 0`).
    pub fn tau(a: Rational) -> Self {
        if a > Rational::zero() {
            return Self::of(SemilinearSet::open_interval(int(0), a));
        }
        if a.is_zero() {
            return Self::e(int(0)).scale(-1);
        }
        Self::of(SemilinearSet::open_interval(a.clone(), int(0)))
            .add(&Self::e(int(0)))
            .and_then(|c| c.add(&Self::e(a)))
            .expect("grade 1")
            .scale(-1)
    }

    /// `[(b, c)]`, the open interval.
    pub fn interval(b: Rational, c: Rational) -> Self {
        Self::of(SemilinearSet::open_interval(b, c))
    }

    /// The unit class `[Γ^0]` of grade 0.
    pub fn one() -> Self {
        Self::of(SemilinearSet::point0())
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn terms(&self) -> &[(SemilinearSet, i64)] {
        &self.terms
    }

    pub fn add(&self, other: &GammaClass) -> Result<GammaClass> {
        check_dim(self.grade, other.grade)?;
        let mut terms = self.terms.clone();
        for (s, c) in &other.terms {
            if let Some(t) = terms.iter_mut().find(|(t, _)| t == s) {
                t.1 += c;
            } else {
                terms.push((s.clone(), *c));
            }
        }
        terms.retain(|(_, c)| *c != 0);
        Ok(GammaClass {
            grade: self.grade,
            terms,
        })
    }

    pub fn sub(&self, other: &GammaClass) -> Result<GammaClass> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> GammaClass {
        let terms = if k == 0 {
            Vec::new()
        } else {
            self.terms.iter().map(|(s, c)| (s.clone(), c * k)).collect()
        };
        GammaClass {
            grade: self.grade,
            terms,
        }
    }

    /// Product of classes: products of sets, grades add.
    pub fn mul(&self, other: &GammaClass) -> GammaClass {
        let mut out = GammaClass::zero(self.grade + other.grade);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let t = GammaClass {
                    grade: out.grade,
                    terms: vec![(a.product(b), x * y)],
                };
                out = out.add(&t).expect("same grade");
            }
        }
        out
    }

    pub fn chi(&self) -> i64 {
        self.terms.iter().map(|(s, c)| c * euler::chi(s)).sum()
    }

    pub fn chi_prime(&self) -> i64 {
        self.terms.iter().map(|(s, c)| c * euler::chi_prime(s)).sum()
    }

    pub fn volume(&self) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (s, c) in &self.terms {
            acc += volume(s)? * int(*c);
        }
        Ok(acc)
    }

    pub fn lattice_count(&self, r: u64) -> Result<BigInt> {
        let mut acc = BigInt::zero();
        for (s, c) in &self.terms {
            acc += BigInt::from(lattice_count(s, r)?) * c;
        }
        Ok(acc)
    }

    pub fn is_bounded(&self) -> bool {
        self.terms.iter().all(|(s, _)| s.is_bounded())
    }

    pub fn invariants(&self) -> InvariantVector {
        let bounded = self.is_bounded();
        let counts = bounded.then(|| {
            [1, 2, 3].map(|r| self.lattice_count(r).expect("bounded class"))
        });
        InvariantVector {
            grade: self.grade,
            chi: self.chi(),
            chi_prime: self.chi_prime(),
            dimension: self
                .terms
                .iter()
                .map(|(s, _)| s.dimension())
                .max()
                .unwrap_or(-1),
            volume: if bounded { self.volume().ok() } else { None },
            counts,
        }
    }
}

impl fmt::Debug for GammaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GammaClass[{}](", self.grade)?;
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if !c.is_one() {
                write!(f, "{c}·")?;
            }
            write!(f, "[{s}]")?;
        }
        write!(f, ")")
    }
}

/// Invariants of a single set.
pub fn invariants(s: &SemilinearSet) -> InvariantVector {
    GammaClass::of(s.clone()).invariants()
}

#[cfg(test)]
mod tests;
