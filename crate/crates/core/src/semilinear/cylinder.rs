//! Cylindrical decomposition: every cell splits into graph and band cells
//! over a recursively decomposed base, eliminating the last variable first.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{fm, Cell, Constraint, Relation, SemilinearSet};
use crate::exactcore::Rational;

/// Rational affine function `coeffs·(x_0..x_{k-1}) + constant` of the
/// coordinates preceding level `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bound {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl Bound {
    pub fn eval(&self, prefix: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(prefix)
            .fold(self.constant.clone(), |acc, (a, x)| acc + a * x)
    }

    fn minus(&self, other: &Bound) -> Bound {
        Bound {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            constant: &self.constant - &other.constant,
        }
    }

    /// `self(x) REL 0` as a constraint in ambient dimension `n`.
    fn constraint(&self, n: usize, rel: Relation) -> Constraint {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, Rational::zero());
        Constraint::from_rational(&coeffs, self.constant.clone(), rel)
    }

    /// The bound on `x_k` defined by a constraint with nonzero coefficient
    /// at `k` and none beyond.
    fn from_row(c: &Constraint, k: usize) -> Bound {
        let a = Rational::from_integer(c.coeffs()[k].clone());
        Bound {
            coeffs: c.coeffs()[..k]
                .iter()
                .map(|x| -Rational::from_integer(x.clone()) / &a)
                .collect(),
            constant: -c.constant() / &a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Level {
    /// `x_k = bound(x_<k)`.
    Section(Bound),
    /// `lower(x_<k) < x_k < upper(x_<k)`, a missing side being unbounded.
    Sector {
        lower: Option<Bound>,
        upper: Option<Bound>,
    },
}

/// A cylindrical cell: the set of points whose coordinates satisfy each
/// level over the preceding ones. Such a cell is a relatively open convex
/// polyhedron of dimension equal to the number of sectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CylCell {
    pub levels: Vec<Level>,
}

impl CylCell {
    pub fn dim_ambient(&self) -> usize {
        self.levels.len()
    }

    pub fn dim(&self) -> usize {
        self.levels
            .iter()
            .filter(|l| matches!(l, Level::Sector { .. }))
            .count()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.levels.len()
    }

    pub fn to_cell(&self) -> Cell {
        let n = self.levels.len();
        let mut cs = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            let mut xk = vec![Rational::zero(); n];
            xk[k] = Rational::from_integer(BigInt::from(1));
            let xk = Bound {
                coeffs: xk,
                constant: Rational::zero(),
            };
            let pad = |b: &Bound| {
                let mut c = b.coeffs.clone();
                c.resize(n, Rational::zero());
                Bound {
                    coeffs: c,
                    constant: b.constant.clone(),
                }
            };
            match level {
                Level::Section(b) => cs.push(xk.minus(&pad(b)).constraint(n, Relation::Eq)),
                Level::Sector { lower, upper } => {
                    if let Some(l) = lower {
                        cs.push(xk.minus(&pad(l)).constraint(n, Relation::Gt));
                    }
                    if let Some(u) = upper {
                        cs.push(pad(u).minus(&xk).constraint(n, Relation::Gt));
                    }
                }
            }
        }
        Cell::new_unchecked(n, cs)
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.levels.iter().enumerate().all(|(k, level)| {
            let x = &p[k];
            let prefix = &p[..k];
            match level {
                Level::Section(b) => *x == b.eval(prefix),
                Level::Sector { lower, upper } => {
                    lower.as_ref().is_none_or(|l| *x > l.eval(prefix))
                        && upper.as_ref().is_none_or(|u| *x < u.eval(prefix))
                }
            }
        })
    }
}

#[derive(Clone)]
struct Chosen {
    bound: Bound,
    strict: bool,
}

/// Decomposes the system in the variables `x_0..x_{d-1}` (coefficient
/// vectors have length `n`, zero beyond `d`). Each result lists levels for
/// `x_0..x_{d-1}`.
fn decompose(n: usize, d: usize, cons: Vec<Constraint>) -> Vec<Vec<Level>> {
    let Some(cons) = fm::simplify(cons) else {
        return Vec::new();
    };
    if d == 0 {
        return vec![Vec::new()];
    }
    if fm::is_empty(n, &cons) {
        return Vec::new();
    }
    let v = d - 1;
    if let Some(e) = cons
        .iter()
        .find(|c| c.relation() == Relation::Eq && !c.coeffs()[v].is_zero())
    {
        let b = Bound::from_row(e, v);
        let rest = fm::eliminate(&cons, v);
        return decompose(n, v, rest)
            .into_iter()
            .map(|mut levels| {
                levels.push(Level::Section(b.clone()));
                levels
            })
            .collect();
    }
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut rest = Vec::new();
    for c in cons {
        let a = &c.coeffs()[v];
        if a.is_zero() {
            rest.push(c);
        } else {
            let ch = Chosen {
                bound: Bound::from_row(&c, v),
                strict: c.relation() == Relation::Gt,
            };
            if a.is_positive() {
                lowers.push(ch);
            } else {
                uppers.push(ch);
            }
        }
    }
    type Piece = (Vec<Constraint>, Option<Chosen>, Option<Chosen>);
    let nonempty = |cs: &Vec<Constraint>| !fm::is_empty(n, cs);
    let with = |cs: &Vec<Constraint>, c: Constraint| {
        let mut out = cs.clone();
        out.push(c);
        out
    };
    let mut pieces: Vec<Piece> = vec![(rest, None, None)];
    // Refine so that a single lower bound is the maximum on each piece.
    for l in &lowers {
        let mut next = Vec::new();
        for (cs, lo, hi) in pieces {
            match lo {
                None => next.push((cs, Some(l.clone()), hi)),
                Some(best) => {
                    let diff = l.bound.minus(&best.bound);
                    let gt = with(&cs, diff.constraint(n, Relation::Gt));
                    if nonempty(&gt) {
                        next.push((gt, Some(l.clone()), hi.clone()));
                    }
                    let eq = with(&cs, diff.constraint(n, Relation::Eq));
                    if nonempty(&eq) {
                        let tied = Chosen {
                            bound: best.bound.clone(),
                            strict: best.strict || l.strict,
                        };
                        next.push((eq, Some(tied), hi.clone()));
                    }
                    let lt = with(&cs, diff.minus_all().constraint(n, Relation::Gt));
                    if nonempty(&lt) {
                        next.push((lt, Some(best), hi));
                    }
                }
            }
        }
        pieces = next;
    }
    for u in &uppers {
        let mut next = Vec::new();
        for (cs, lo, hi) in pieces {
            match hi {
                None => next.push((cs, lo, Some(u.clone()))),
                Some(best) => {
                    let diff = best.bound.minus(&u.bound);
                    let gt = with(&cs, diff.constraint(n, Relation::Gt));
                    if nonempty(&gt) {
                        next.push((gt, lo.clone(), Some(u.clone())));
                    }
                    let eq = with(&cs, diff.constraint(n, Relation::Eq));
                    if nonempty(&eq) {
                        let tied = Chosen {
                            bound: best.bound.clone(),
                            strict: best.strict || u.strict,
                        };
                        next.push((eq, lo.clone(), Some(tied)));
                    }
                    let lt = with(&cs, diff.minus_all().constraint(n, Relation::Gt));
                    if nonempty(&lt) {
                        next.push((lt, lo, Some(best)));
                    }
                }
            }
        }
        pieces = next;
    }
    let mut out = Vec::new();
    for (cs, lo, hi) in pieces {
        let mut emit = |cs: Vec<Constraint>, tops: Vec<Level>| {
            for base in decompose(n, v, cs) {
                for top in &tops {
                    let mut levels = base.clone();
                    levels.push(top.clone());
                    out.push(levels);
                }
            }
        };
        match (&lo, &hi) {
            (Some(l), Some(u)) => {
                let gap = u.bound.minus(&l.bound);
                let open = with(&cs, gap.constraint(n, Relation::Gt));
                if nonempty(&open) {
                    let mut tops = Vec::new();
                    if !l.strict {
                        tops.push(Level::Section(l.bound.clone()));
                    }
                    tops.push(Level::Sector {
                        lower: Some(l.bound.clone()),
                        upper: Some(u.bound.clone()),
                    });
                    if !u.strict {
                        tops.push(Level::Section(u.bound.clone()));
                    }
                    emit(open, tops);
                }
                if !l.strict && !u.strict {
                    let touch = with(&cs, gap.constraint(n, Relation::Eq));
                    if nonempty(&touch) {
                        emit(touch, vec![Level::Section(l.bound.clone())]);
                    }
                }
            }
            _ => {
                let mut tops = Vec::new();
                if let Some(l) = lo.as_ref().filter(|l| !l.strict) {
                    tops.push(Level::Section(l.bound.clone()));
                }
                tops.push(Level::Sector {
                    lower: lo.as_ref().map(|l| l.bound.clone()),
                    upper: hi.as_ref().map(|u| u.bound.clone()),
                });
                if let Some(u) = hi.as_ref().filter(|u| !u.strict) {
                    tops.push(Level::Section(u.bound.clone()));
                }
                emit(cs, tops);
            }
        }
    }
    out
}

impl Bound {
    fn minus_all(&self) -> Bound {
        Bound {
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
            constant: -self.constant.clone(),
        }
    }
}

impl Cell {
    pub fn cylindrical_decomposition(&self) -> Vec<CylCell> {
        decompose(self.n, self.n, self.constraints.clone())
            .into_iter()
            .map(|levels| CylCell { levels })
            .collect()
    }
}

impl SemilinearSet {
    /// Pairwise disjoint cylindrical cells covering the set.
    pub fn cylindrical_decomposition(&self) -> Vec<CylCell> {
        self.normalize()
            .cells
            .iter()
            .flat_map(Cell::cylindrical_decomposition)
            .collect()
    }

    /// Disjoint cells of the decomposition with their dimensions.
    pub fn cell_decompose(&self) -> Vec<(Cell, usize)> {
        self.cylindrical_decomposition()
            .into_iter()
            .map(|c| {
                let d = c.dim();
                (c.to_cell(), d)
            })
            .collect()
    }
}
