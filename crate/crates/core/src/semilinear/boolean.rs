use num_bigint::BigInt;

use super::{fm, Cell, Constraint, Relation, SemilinearSet};
use crate::error::{check_dim, Error, Result};
use crate::exactcore::int;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BooleanOp {
    Union,
    Intersect,
    Complement,
    Difference,
}

impl Cell {
    /// The complement as a disjoint union of cells:
    /// `¬(c_1 ∧ … ∧ c_m) = ⊔_j (c_1 ∧ … ∧ c_{j-1} ∧ ¬c_j)`.
    pub fn complement(&self) -> SemilinearSet {
        let mut cells = Vec::new();
        let mut prefix: Vec<Constraint> = Vec::new();
        for c in &self.constraints {
            for neg in c.negation() {
                let mut cs = prefix.clone();
                cs.push(neg);
                let cell = Cell::new_unchecked(self.n, cs);
                if !cell.is_empty() {
                    cells.push(cell);
                }
            }
            prefix.push(c.clone());
        }
        SemilinearSet::from_cells_unchecked(self.n, cells)
    }

    /// Projection along `x_drop`; the result lives in dimension `n - 1`.
    pub fn project(&self, drop: usize) -> Result<Cell> {
        if drop >= self.n {
            return Err(Error::InvalidIndex {
                index: drop,
                dim: self.n,
            });
        }
        let Some(cs) = fm::simplify(self.constraints.clone()) else {
            return Ok(Cell::new_unchecked(self.n - 1, vec![falsum(self.n - 1)]));
        };
        let reduced = fm::eliminate(&cs, drop)
            .into_iter()
            .map(|c| drop_column(&c, drop))
            .collect();
        let cell = Cell::new_unchecked(self.n - 1, reduced);
        Ok(cell
            .simplified()
            .unwrap_or_else(|| Cell::new_unchecked(self.n - 1, vec![falsum(self.n - 1)])))
    }
}

fn falsum(n: usize) -> Constraint {
    Constraint::new(vec![BigInt::from(0); n], int(-1), Relation::Ge)
}

fn drop_column(c: &Constraint, j: usize) -> Constraint {
    let mut coeffs = c.coeffs().to_vec();
    coeffs.remove(j);
    Constraint::new(coeffs, c.constant().clone(), c.relation())
}

impl SemilinearSet {
    /// Same point set with empty cells removed.
    pub fn prune(&self) -> SemilinearSet {
        let cells = self
            .cells
            .iter()
            .filter_map(|c| c.simplified())
            .filter(|c| !c.is_empty())
            .collect();
        SemilinearSet::from_cells_unchecked(self.n, cells)
    }

    /// Same point set as a union of pairwise disjoint nonempty cells.
    pub fn normalize(&self) -> SemilinearSet {
        let mut out: Vec<Cell> = Vec::new();
        let mut seen: Vec<&Cell> = Vec::new();
        for cell in &self.cells {
            let Some(cell_s) = cell.simplified() else {
                continue;
            };
            let mut pieces = vec![cell_s];
            for prev in &seen {
                let comp = prev.complement();
                let mut next = Vec::new();
                for p in &pieces {
                    for q in comp.cells() {
                        let r = p.intersect(q);
                        if let Some(r) = r.simplified() {
                            if !r.is_empty() {
                                next.push(r);
                            }
                        }
                    }
                }
                pieces = next;
                if pieces.is_empty() {
                    break;
                }
            }
            out.extend(pieces.into_iter().filter(|p| !p.is_empty()));
            seen.push(cell);
        }
        SemilinearSet::from_cells_unchecked(self.n, out)
    }

    pub fn union(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        Ok(self.union_raw(other)?.normalize())
    }

    pub fn intersect(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        check_dim(self.n, other.n)?;
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                if let Some(c) = a.intersect(b).simplified() {
                    if !c.is_empty() {
                        cells.push(c);
                    }
                }
            }
        }
        Ok(SemilinearSet::from_cells_unchecked(self.n, cells))
    }

    pub fn complement(&self) -> SemilinearSet {
        let mut acc = SemilinearSet::universe(self.n);
        for cell in &self.cells {
            acc = acc
                .intersect(&cell.complement())
                .expect("dimensions agree");
            if acc.cells.is_empty() {
                break;
            }
        }
        acc
    }

    pub fn difference(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        check_dim(self.n, other.n)?;
        let mut pieces = self.prune();
        for cell in &other.cells {
            pieces = pieces.intersect(&cell.complement())?;
            if pieces.cells.is_empty() {
                break;
            }
        }
        Ok(pieces)
    }

    pub fn boolean(&self, op: BooleanOp, other: Option<&SemilinearSet>) -> Result<SemilinearSet> {
        let need = || Error::invalid("binary operation needs a second operand");
        match op {
            BooleanOp::Union => self.union(other.ok_or_else(need)?),
            BooleanOp::Intersect => self.intersect(other.ok_or_else(need)?),
            BooleanOp::Difference => self.difference(other.ok_or_else(need)?),
            BooleanOp::Complement => Ok(self.complement()),
        }
    }

    /// Whether the two sets have the same points.
    pub fn set_eq(&self, other: &SemilinearSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty() && other.difference(self)?.is_empty())
    }

    pub fn is_subset(&self, other: &SemilinearSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_disjoint(&self, other: &SemilinearSet) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    /// Projection along `x_drop`, into dimension `n - 1`.
    pub fn project(&self, drop: usize) -> Result<SemilinearSet> {
        if drop >= self.n {
            return Err(Error::InvalidIndex {
                index: drop,
                dim: self.n,
            });
        }
        let cells = self
            .cells
            .iter()
            .filter(|c| !c.is_empty())
            .map(|c| c.project(drop))
            .collect::<Result<Vec<_>>>()?;
        Ok(SemilinearSet::from_cells_unchecked(self.n - 1, cells))
    }
}
