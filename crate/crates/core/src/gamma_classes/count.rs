use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{ceil_int, floor_int, Rational};
use crate::semilinear::{fm, Cell, Constraint, SemilinearSet};

/// `#(S ∩ ((1/r)Z)^n)` for a bounded set `S`.
pub fn lattice_count(s: &SemilinearSet, r: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::invalid("lattice refinement r must be positive"));
    }
    if !s.is_bounded() {
        return Err(Error::Unbounded);
    }
    let rr = Rational::from_integer(BigInt::from(r));
    let mut total = BigInt::zero();
    for cell in s.normalize().cells() {
        let scaled = scale_cell(cell, &rr);
        total += count_cell(&scaled)?;
    }
    total
        .to_u64()
        .ok_or_else(|| Error::invalid("lattice count exceeds u64"))
}

/// Substitutes `x = y / r`.
pub(crate) fn scale_cell(cell: &Cell, r: &Rational) -> Cell {
    let cs = cell
        .constraints()
        .iter()
        .map(|c| Constraint::new(c.coeffs().to_vec(), c.constant() * r, c.relation()))
        .collect();
    Cell::new_unchecked(cell.dim_ambient(), cs)
}

/// Integer points of a bounded cell.
pub(crate) fn count_cell(cell: &Cell) -> Result<BigInt> {
    let n = cell.dim_ambient();
    let Some(systems) = fm::tower(n, cell.constraints()) else {
        return Ok(BigInt::zero());
    };
    if n == 0 {
        return Ok(BigInt::from(1));
    }
    let mut prefix = Vec::with_capacity(n);
    count_rec(&systems, 0, &mut prefix)
}

/// Integer range `[lo, hi]` of a fiber; `None` when the fiber is unbounded.
pub(crate) fn integer_range(f: &fm::Fiber) -> Option<Option<(BigInt, BigInt)>> {
    match f {
        fm::Fiber::Empty => Some(None),
        fm::Fiber::Point(v) => Some(v.is_integer().then(|| (v.to_integer(), v.to_integer()))),
        fm::Fiber::Range { lo, hi } => {
            let (Some((l, ls)), Some((h, hs))) = (lo, hi) else {
                return None;
            };
            let a = if *ls { floor_int(l) + 1 } else { ceil_int(l) };
            let b = if *hs { ceil_int(h) - 1 } else { floor_int(h) };
            Some((a <= b).then_some((a, b)))
        }
    }
}

fn count_rec(systems: &[Vec<Constraint>], k: usize, prefix: &mut Vec<Rational>) -> Result<BigInt> {
    let n = systems.len() - 1;
    let f = fm::fiber(&systems[k + 1], k, prefix);
    let Some((a, b)) = integer_range(&f).ok_or(Error::Unbounded)? else {
        return Ok(BigInt::zero());
    };
    if k + 1 == n {
        return Ok(b - a + 1);
    }
    let mut total = BigInt::zero();
    let mut y = a;
    while y <= b {
        prefix.push(Rational::from_integer(y.clone()));
        total += count_rec(systems, k + 1, prefix)?;
        prefix.pop();
        y += 1;
    }
    Ok(total)
}
