//! Semilinear subsets of `Q^n`: finite unions of cells, each a conjunction of
//! affine constraints `a·x + c REL 0` with integer `a`, rational `c` and
//! `REL ∈ {=, >, ≥}`.

mod boolean;
mod cylinder;
pub(crate) mod fm;
mod geometry;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Result};
use crate::exactcore::linalg::dot;
use crate::exactcore::{lcm_denominators, Rational};

pub use boolean::BooleanOp;
pub use cylinder::{Bound, CylCell, Level};
pub use geometry::Boundedness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Gt,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }

    pub fn holds(self, value: &Rational) -> bool {
        match self {
            Relation::Eq => value.is_zero(),
            Relation::Gt => value.is_positive(),
            Relation::Ge => !value.is_negative(),
        }
    }
}

/// `coeffs·x + constant`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineForm {
    pub coeffs: Vec<BigInt>,
    pub constant: Rational,
}

impl AffineForm {
    pub fn new(coeffs: Vec<BigInt>, constant: Rational) -> Self {
        AffineForm { coeffs, constant }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x) + &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn negated(&self) -> Self {
        AffineForm {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            constant: -self.constant.clone(),
        }
    }
}

/// A single affine constraint. Constructors normalise the coefficient vector
/// to be primitive (and, for equalities, to have a positive leading entry),
/// which never changes the solution set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    form: AffineForm,
    rel: Relation,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigInt>, constant: Rational, rel: Relation) -> Self {
        let mut c = Constraint {
            form: AffineForm { coeffs, constant },
            rel,
        };
        c.normalize();
        c
    }

    pub fn from_i64(coeffs: &[i64], constant: Rational, rel: Relation) -> Self {
        Self::new(coeffs.iter().map(|&a| BigInt::from(a)).collect(), constant, rel)
    }

    /// Builds a constraint from rational coefficients by clearing
    /// denominators with a positive factor.
    pub fn from_rational(coeffs: &[Rational], constant: Rational, rel: Relation) -> Self {
        let d = lcm_denominators(coeffs);
        let d = Rational::from_integer(d);
        let ints = coeffs.iter().map(|c| (c * &d).to_integer()).collect();
        Self::new(ints, constant * d, rel)
    }

    pub fn eq(coeffs: &[i64], constant: Rational) -> Self {
        Self::from_i64(coeffs, constant, Relation::Eq)
    }

    pub fn gt(coeffs: &[i64], constant: Rational) -> Self {
        Self::from_i64(coeffs, constant, Relation::Gt)
    }

    pub fn ge(coeffs: &[i64], constant: Rational) -> Self {
        Self::from_i64(coeffs, constant, Relation::Ge)
    }

    fn normalize(&mut self) {
        let g = self
            .form
            .coeffs
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return;
        }
        let mut g = g;
        if self.rel == Relation::Eq
            && self
                .form
                .coeffs
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_negative())
        {
            g = -g;
        }
        if !g.is_one() {
            for x in self.form.coeffs.iter_mut() {
                *x = &*x / &g;
            }
            self.form.constant = &self.form.constant / Rational::from_integer(g);
        }
    }

    pub fn form(&self) -> &AffineForm {
        &self.form
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.form.coeffs
    }

    pub fn constant(&self) -> &Rational {
        &self.form.constant
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    pub fn dim(&self) -> usize {
        self.form.coeffs.len()
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        self.rel.holds(&self.form.eval(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.form.is_constant()
    }

    /// For a constraint without variables: its truth value.
    pub fn constant_truth(&self) -> Option<bool> {
        self.is_trivial().then(|| self.rel.holds(&self.form.constant))
    }

    /// The negation as a union of at most two constraints.
    pub fn negation(&self) -> Vec<Constraint> {
        let neg = self.form.negated();
        match self.rel {
            Relation::Eq => vec![
                Constraint::new(self.form.coeffs.clone(), self.form.constant.clone(), Relation::Gt),
                Constraint::new(neg.coeffs, neg.constant, Relation::Gt),
            ],
            Relation::Gt => vec![Constraint::new(neg.coeffs, neg.constant, Relation::Ge)],
            Relation::Ge => vec![Constraint::new(neg.coeffs, neg.constant, Relation::Gt)],
        }
    }

    /// Embeds into a larger ambient space: the coefficients are placed at
    /// `offset..offset + dim` of a vector of length `n`.
    pub fn embed(&self, n: usize, offset: usize) -> Constraint {
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.form.coeffs.iter().enumerate() {
            coeffs[offset + i] = c.clone();
        }
        Constraint {
            form: AffineForm::new(coeffs, self.form.constant.clone()),
            rel: self.rel,
        }
    }

    /// Rewrites the constraint in the variables `y` of the substitution
    /// `x = T·y + s` (rows of `T` indexed by the old variables).
    pub fn pullback(&self, t: &[Vec<Rational>], s: &[Rational]) -> Constraint {
        let m = t.first().map_or(0, |r| r.len());
        let mut coeffs = vec![Rational::zero(); m];
        for (i, a) in self.form.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, c) in coeffs.iter_mut().enumerate() {
                *c += &t[i][j] * a;
            }
        }
        let constant = dot(&self.form.coeffs, s) + &self.form.constant;
        Constraint::from_rational(&coeffs, constant, self.rel)
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.form.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if first {
                write!(f, "{a}*x{i}")?;
            } else if a.is_negative() {
                write!(f, " - {}*x{i}", -a)?;
            } else {
                write!(f, " + {a}*x{i}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.form.constant)?;
        } else if !self.form.constant.is_zero() {
            if self.form.constant.is_negative() {
                write!(f, " - {}", -self.form.constant.clone())?;
            } else {
                write!(f, " + {}", self.form.constant)?;
            }
        }
        write!(f, " {} 0", self.rel.symbol())
    }
}

/// A conjunction of constraints in a fixed ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    n: usize,
    constraints: Vec<Constraint>,
}

impl Cell {
    pub fn new(n: usize, constraints: Vec<Constraint>) -> Result<Self> {
        for c in &constraints {
            check_dim(n, c.dim())?;
        }
        Ok(Cell { n, constraints })
    }

    pub(crate) fn new_unchecked(n: usize, constraints: Vec<Constraint>) -> Self {
        debug_assert!(constraints.iter().all(|c| c.dim() == n));
        Cell { n, constraints }
    }

    /// The whole space `Q^n`.
    pub fn universe(n: usize) -> Self {
        Cell {
            n,
            constraints: Vec::new(),
        }
    }

    pub fn dim_ambient(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.satisfied_by(p))
    }

    pub fn with(&self, c: Constraint) -> Cell {
        let mut out = self.clone();
        out.constraints.push(c);
        out
    }

    pub fn intersect(&self, other: &Cell) -> Cell {
        let mut out = self.clone();
        out.constraints.extend(other.constraints.iter().cloned());
        out
    }

    pub fn is_empty(&self) -> bool {
        fm::is_empty(self.n, &self.constraints)
    }

    pub fn sample_point(&self) -> Option<Vec<Rational>> {
        fm::sample_point(self.n, &self.constraints)
    }

    /// Equivalent cell with duplicate and dominated constraints removed.
    /// Returns `None` when a contradiction is detected.
    pub fn simplified(&self) -> Option<Cell> {
        fm::simplify(self.constraints.clone()).map(|cs| Cell::new_unchecked(self.n, cs))
    }

    pub fn to_set(&self) -> SemilinearSet {
        SemilinearSet {
            n: self.n,
            cells: vec![self.clone()],
        }
    }
}

/// A finite union of cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearSet {
    n: usize,
    cells: Vec<Cell>,
}

impl SemilinearSet {
    pub fn new(n: usize, cells: Vec<Cell>) -> Result<Self> {
        for c in &cells {
            check_dim(n, c.n)?;
        }
        Ok(SemilinearSet { n, cells })
    }

    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<Cell>) -> Self {
        SemilinearSet { n, cells }
    }

    pub fn empty(n: usize) -> Self {
        SemilinearSet {
            n,
            cells: Vec::new(),
        }
    }

    pub fn universe(n: usize) -> Self {
        Cell::universe(n).to_set()
    }

    /// The one-point space `Q^0`.
    pub fn point0() -> Self {
        Self::universe(0)
    }

    /// The single point `p`.
    pub fn point(p: &[Rational]) -> Self {
        let n = p.len();
        let cs = (0..n)
            .map(|i| {
                let mut a = vec![BigInt::zero(); n];
                a[i] = BigInt::one();
                Constraint::new(a, -p[i].clone(), Relation::Eq)
            })
            .collect();
        Cell::new_unchecked(n, cs).to_set()
    }

    /// The interval with the given endpoints in `Q^1`; `None` means
    /// unbounded, the flag marks a closed endpoint.
    pub fn interval(lo: Option<(Rational, bool)>, hi: Option<(Rational, bool)>) -> Self {
        let mut cs = Vec::new();
        if let Some((a, closed)) = lo {
            let rel = if closed { Relation::Ge } else { Relation::Gt };
            cs.push(Constraint::from_i64(&[1], -a, rel));
        }
        if let Some((b, closed)) = hi {
            let rel = if closed { Relation::Ge } else { Relation::Gt };
            cs.push(Constraint::from_i64(&[-1], b, rel));
        }
        Cell::new_unchecked(1, cs).to_set()
    }

    /// Open interval `(a, b)`.
    pub fn open_interval(a: Rational, b: Rational) -> Self {
        Self::interval(Some((a, false)), Some((b, false)))
    }

    /// Closed interval `[a, b]`.
    pub fn closed_interval(a: Rational, b: Rational) -> Self {
        Self::interval(Some((a, true)), Some((b, true)))
    }

    pub fn dim_ambient(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<Cell> {
        self.cells
    }

    pub fn contains(&self, p: &[Rational]) -> Result<bool> {
        check_dim(self.n, p.len())?;
        Ok(self.cells.iter().any(|c| c.contains(p)))
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Cell::is_empty)
    }

    pub fn sample_point(&self) -> Option<Vec<Rational>> {
        self.cells.iter().find_map(Cell::sample_point)
    }

    /// Cartesian product; coordinates of `self` come first.
    pub fn product(&self, other: &SemilinearSet) -> SemilinearSet {
        let n = self.n + other.n;
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let cs = a
                    .constraints
                    .iter()
                    .map(|c| c.embed(n, 0))
                    .chain(b.constraints.iter().map(|c| c.embed(n, self.n)))
                    .collect();
                cells.push(Cell::new_unchecked(n, cs));
            }
        }
        SemilinearSet { n, cells }
    }

    /// Concatenation of cell lists. The result is a union, not necessarily
    /// disjoint.
    pub fn union_raw(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        check_dim(self.n, other.n)?;
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Ok(SemilinearSet { n: self.n, cells })
    }

    /// Reorders coordinates: new coordinate `i` is old coordinate `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<SemilinearSet> {
        check_dim(self.n, perm.len())?;
        let cells = self
            .cells
            .iter()
            .map(|cell| {
                let cs = cell
                    .constraints
                    .iter()
                    .map(|c| {
                        let coeffs = perm.iter().map(|&j| c.coeffs()[j].clone()).collect();
                        Constraint::new(coeffs, c.constant().clone(), c.relation())
                    })
                    .collect();
                Cell::new_unchecked(self.n, cs)
            })
            .collect();
        Ok(SemilinearSet { n: self.n, cells })
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return write!(f, "∅ ⊂ Q^{}", self.n);
        }
        for (i, cell) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{{")?;
            for (j, c) in cell.constraints.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
