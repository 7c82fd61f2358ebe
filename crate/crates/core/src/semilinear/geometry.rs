use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{fm, Cell, Constraint, Relation, SemilinearSet};
use crate::error::{check_dim, Error, Result};
use crate::exactcore::linalg::{nullspace_int, rank_int};
use crate::exactcore::{invert_rational, IntMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundedness {
    pub bounded: bool,
    /// Per coordinate: bounded below on the set.
    pub bounded_below: Vec<bool>,
    /// Primitive integer generators of the recession cones of the cells:
    /// extreme rays of the pointed part plus both directions of a basis of
    /// the lineality space.
    pub recession_rays: Vec<Vec<BigInt>>,
}

fn unit(n: usize, i: usize, sign: i64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::from(sign);
    v
}

impl Cell {
    /// Inequality constraints `f ≥ 0` that hold with equality on the whole
    /// (nonempty) cell.
    fn implicit_equalities(&self, cs: &[Constraint]) -> Vec<usize> {
        cs.iter()
            .enumerate()
            .filter(|(_, c)| c.relation() == Relation::Ge)
            .filter(|(_, c)| {
                let strict = Constraint::new(c.coeffs().to_vec(), c.constant().clone(), Relation::Gt);
                let mut sys = cs.to_vec();
                sys.push(strict);
                fm::is_empty(self.n, &sys)
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Coefficient rows of all constraints that hold with equality on the
    /// whole cell. The cell must be nonempty.
    pub(crate) fn equality_rows(&self) -> Vec<Vec<BigInt>> {
        let Some(cs) = fm::simplify(self.constraints.clone()) else {
            return Vec::new();
        };
        let implicit = self.implicit_equalities(&cs);
        cs.iter()
            .enumerate()
            .filter(|(i, c)| c.relation() == Relation::Eq || implicit.contains(i))
            .map(|(_, c)| c.coeffs().to_vec())
            .collect()
    }

    /// Dimension of the cell, `-1` when empty.
    pub fn dimension(&self) -> i64 {
        if self.is_empty() {
            return -1;
        }
        (self.n - rank_int(&self.equality_rows(), self.n)) as i64
    }

    /// The recession cone of the closure, as a cell in the same dimension.
    pub fn recession_cone(&self) -> Cell {
        let cs = self
            .constraints
            .iter()
            .map(|c| {
                let rel = if c.relation() == Relation::Eq {
                    Relation::Eq
                } else {
                    Relation::Ge
                };
                Constraint::new(c.coeffs().to_vec(), Rational::zero(), rel)
            })
            .collect();
        Cell::new_unchecked(self.n, cs)
    }

    /// Whether the recession cone contains a vector `v` with
    /// `coeffs·v REL 0`.
    pub(crate) fn recedes(&self, coeffs: Vec<BigInt>, rel: Relation) -> bool {
        let cone = self.recession_cone();
        !cone.with(Constraint::new(coeffs, Rational::zero(), rel)).is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        (0..self.n).all(|i| !self.recedes(unit(self.n, i, 1), Relation::Gt) && !self.recedes(unit(self.n, i, -1), Relation::Gt))
    }

    /// Whether the coordinate `x_i` is bounded below on the cell.
    pub fn is_bounded_below(&self, i: usize) -> bool {
        self.is_empty() || !self.recedes(unit(self.n, i, -1), Relation::Gt)
    }

    /// Dimension of the lineality space of the closure.
    pub fn lineality_dim(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = self.constraints.iter().map(|c| c.coeffs().to_vec()).collect();
        self.n - rank_int(&rows, self.n)
    }

    /// Whether the recession cone of the closure is a linear subspace.
    pub fn recession_is_linear(&self) -> bool {
        self.constraints
            .iter()
            .filter(|c| c.relation() != Relation::Eq)
            .all(|c| !self.recedes(c.coeffs().to_vec(), Relation::Gt))
    }

    pub fn recession_rays(&self) -> Vec<Vec<BigInt>> {
        if self.is_empty() {
            return Vec::new();
        }
        let n = self.n;
        let cone = self.recession_cone();
        let eqs: Vec<Vec<BigInt>> = cone
            .constraints
            .iter()
            .filter(|c| c.relation() == Relation::Eq)
            .map(|c| c.coeffs().to_vec())
            .collect();
        let ineqs: Vec<Vec<BigInt>> = cone
            .constraints
            .iter()
            .filter(|c| c.relation() != Relation::Eq)
            .map(|c| c.coeffs().to_vec())
            .collect();
        let all: Vec<Vec<BigInt>> = eqs.iter().chain(&ineqs).cloned().collect();
        let lineality = nullspace_int(&all, n);
        let mut rays: Vec<Vec<BigInt>> = Vec::new();
        for v in &lineality {
            rays.push(v.clone());
            rays.push(v.iter().map(|x| -x).collect());
        }
        // Pointed part: restrict to the orthogonal complement of the lineality
        // space and look for one-dimensional faces.
        let mut base = eqs.clone();
        base.extend(lineality.iter().cloned());
        let in_cone = |v: &[BigInt]| {
            let p: Vec<Rational> = v.iter().cloned().map(Rational::from_integer).collect();
            cone.contains(&p)
        };
        let m = ineqs.len();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        while let Some((start, chosen)) = stack.pop() {
            let mut rows = base.clone();
            rows.extend(chosen.iter().map(|&i| ineqs[i].clone()));
            let ker = nullspace_int(&rows, n);
            if ker.len() == 1 {
                let v = &ker[0];
                for cand in [v.clone(), v.iter().map(|x| -x).collect::<Vec<_>>()] {
                    if in_cone(&cand) && !rays.contains(&cand) {
                        rays.push(cand);
                    }
                }
                continue;
            }
            if ker.is_empty() {
                continue;
            }
            for i in start..m {
                let mut next = chosen.clone();
                next.push(i);
                stack.push((i + 1, next));
            }
        }
        rays.sort();
        rays.dedup();
        rays
    }

    /// Image under `x ↦ M·x + shift` for an invertible rational matrix.
    pub fn affine_image(&self, m: &[Vec<Rational>], shift: &[Rational]) -> Result<Cell> {
        check_dim(self.n, m.len())?;
        check_dim(self.n, shift.len())?;
        let inv = invert_rational(m.to_vec(), self.n)
            .ok_or_else(|| Error::invalid("affine map is not invertible"))?;
        // x = M⁻¹ y − M⁻¹ shift
        let s: Vec<Rational> = inv
            .iter()
            .map(|row| {
                -row.iter()
                    .zip(shift)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect();
        let cs = self.constraints.iter().map(|c| c.pullback(&inv, &s)).collect();
        Ok(Cell::new_unchecked(self.n, cs))
    }

    /// Restriction to `x_i = value`, as a cell in dimension `n - 1`.
    pub fn fix_coordinate(&self, i: usize, value: &Rational) -> Result<Cell> {
        if i >= self.n {
            return Err(Error::InvalidIndex { index: i, dim: self.n });
        }
        let cs = self
            .constraints
            .iter()
            .map(|c| {
                let mut coeffs = c.coeffs().to_vec();
                let a = coeffs.remove(i);
                Constraint::new(coeffs, c.constant() + value * a, c.relation())
            })
            .collect();
        Ok(Cell::new_unchecked(self.n - 1, cs))
    }
}

impl SemilinearSet {
    /// Maximum dimension over the cells; `-1` for the empty set.
    pub fn dimension(&self) -> i64 {
        self.cells.iter().map(Cell::dimension).max().unwrap_or(-1)
    }

    pub fn is_bounded(&self) -> bool {
        self.cells.iter().all(Cell::is_bounded)
    }

    pub fn boundedness(&self) -> Boundedness {
        let n = self.n;
        let live: Vec<&Cell> = self.cells.iter().filter(|c| !c.is_empty()).collect();
        let mut rays: Vec<Vec<BigInt>> = live.iter().flat_map(|c| c.recession_rays()).collect();
        rays.sort();
        rays.dedup();
        Boundedness {
            bounded: live.iter().all(|c| c.is_bounded()),
            bounded_below: (0..n).map(|i| live.iter().all(|c| c.is_bounded_below(i))).collect(),
            recession_rays: rays,
        }
    }

    pub fn is_bounded_below(&self) -> bool {
        (0..self.n).all(|i| self.cells.iter().all(|c| c.is_bounded_below(i)))
    }

    pub fn affine_image(&self, m: &[Vec<Rational>], shift: &[Rational]) -> Result<SemilinearSet> {
        let cells = self
            .cells
            .iter()
            .map(|c| c.affine_image(m, shift))
            .collect::<Result<Vec<_>>>()?;
        Ok(SemilinearSet::from_cells_unchecked(self.n, cells))
    }

    /// Image under `x ↦ M·x + shift` with an integer matrix.
    pub fn int_affine_image(&self, m: &IntMatrix, shift: &[Rational]) -> Result<SemilinearSet> {
        let rows: Vec<Vec<Rational>> = m
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Rational::from_integer).collect())
            .collect();
        self.affine_image(&rows, shift)
    }

    pub fn translate(&self, shift: &[Rational]) -> Result<SemilinearSet> {
        let n = self.n;
        let id: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        self.affine_image(&id, shift)
    }

    pub fn fix_coordinate(&self, i: usize, value: &Rational) -> Result<SemilinearSet> {
        if i >= self.n {
            return Err(Error::InvalidIndex { index: i, dim: self.n });
        }
        let cells = self
            .cells
            .iter()
            .map(|c| c.fix_coordinate(i, value))
            .collect::<Result<Vec<_>>>()?;
        Ok(SemilinearSet::from_cells_unchecked(self.n - 1, cells))
    }

    /// Intersection with the closed box `[-r, r]^n`.
    pub fn truncate(&self, r: &Rational) -> SemilinearSet {
        let n = self.n;
        let mut bx = Vec::new();
        for i in 0..n {
            bx.push(Constraint::new(unit(n, i, 1), r.clone(), Relation::Ge));
            bx.push(Constraint::new(unit(n, i, -1), r.clone(), Relation::Ge));
        }
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let mut cs = c.constraints.clone();
                cs.extend(bx.iter().cloned());
                Cell::new_unchecked(n, cs)
            })
            .collect();
        SemilinearSet::from_cells_unchecked(n, cells)
    }
}
