//! Closed forms for the lattice sums
//! `ev(Δ) = Σ_{b ∈ Δ ∩ ((1/r)Z)^n} Q^(h_0(b)) Π_i T_i^(h_i(b))`
//! as rational functions in `u = Q^(1/m)` and `t_i = T_i^(1/m)`.
//!
//! The sum converges (as a series in `u^-1, t^-1`) when every `h_i`,
//! `i ≥ 1`, is nonpositive on the recession cone of `Δ` and
//! `h_0 + Σ h_i` is negative on its nonzero vectors.

mod rational_function;
mod summation;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

pub use rational_function::{series_expand, RationalFunctionQT};

use crate::error::{check_dim, Error, Result};
use crate::exactcore::{ceil_int, floor_int, lcm_denominators, IntLaurent, Rational};
use crate::gamma_classes::scale_cell;
use crate::semilinear::{fm, Cell, Constraint, Relation, SemilinearSet};

/// `b ↦ coeffs·b + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearFunctional {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl LinearFunctional {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> Self {
        LinearFunctional { coeffs, constant }
    }

    pub fn from_i64(coeffs: &[i64], constant: i64) -> Self {
        LinearFunctional {
            coeffs: coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(),
            constant: Rational::from_integer(constant.into()),
        }
    }

    pub fn zero(n: usize) -> Self {
        LinearFunctional {
            coeffs: vec![Rational::zero(); n],
            constant: Rational::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, b: &[Rational]) -> Rational {
        self.coeffs.iter().zip(b).map(|(a, x)| a * x).sum::<Rational>() + &self.constant
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvStats {
    /// Number of congruence splits performed by the summation.
    pub congruence_splits: usize,
    /// Disjoint cells summed.
    pub cells: usize,
    /// Closed-form terms before they were combined.
    pub final_terms: usize,
}

/// The root `m = r · lcm(denominators of all h_i)`.
pub fn root_for(h0: &LinearFunctional, hs: &[LinearFunctional], r: u64) -> u64 {
    let l = std::iter::once(h0)
        .chain(hs)
        .fold(BigInt::one(), |acc, h| {
            let d = lcm_denominators(h.coeffs.iter().chain(std::iter::once(&h.constant)));
            crate::exactcore::lcm(&acc, &d)
        });
    r * l.to_u64().expect("denominators fit in u64")
}

struct Setup {
    n: usize,
    root: u64,
    lin: Vec<Vec<i64>>,
    offset: Vec<i64>,
}

/// Integer exponent map `y ↦ m·h(y/r)` on the scaled lattice `Z^n`.
fn setup(delta: &SemilinearSet, h0: &LinearFunctional, hs: &[LinearFunctional], r: u64) -> Result<Setup> {
    if r == 0 {
        return Err(Error::invalid("lattice refinement r must be positive"));
    }
    let n = delta.dim_ambient();
    for h in std::iter::once(h0).chain(hs) {
        check_dim(n, h.dim())?;
    }
    let root = root_for(h0, hs, r);
    let scale = Rational::from_integer(BigInt::from(root / r));
    let m = Rational::from_integer(BigInt::from(root));
    let cast = |x: Rational| -> Result<i64> {
        if !x.is_integer() {
            return Err(Error::invalid("exponent map is not integral"));
        }
        x.to_integer().to_i64().ok_or_else(|| Error::invalid("exponent overflow"))
    };
    let mut lin = Vec::new();
    let mut offset = Vec::new();
    for h in std::iter::once(h0).chain(hs) {
        lin.push(h.coeffs.iter().map(|a| cast(a * &scale)).collect::<Result<Vec<_>>>()?);
        offset.push(cast(&h.constant * &m)?);
    }
    Ok(Setup { n, root, lin, offset })
}

fn unit(n: usize, i: usize, s: i64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::from(s);
    v
}

/// Checks the convergence conditions on the recession cone of a nonempty
/// cell.
pub fn check_convergence(cell: &Cell, h0: &LinearFunctional, hs: &[LinearFunctional]) -> Result<()> {
    let n = cell.dim_ambient();
    let cone = cell.recession_cone();
    for (i, h) in hs.iter().enumerate() {
        let up = Constraint::from_rational(&h.coeffs, Rational::zero(), Relation::Gt);
        if !up.is_trivial() && !cone.with(up).is_empty() {
            return Err(Error::Convergence(format!(
                "h_{} increases along a recession direction",
                i + 1
            )));
        }
    }
    let mut total = h0.coeffs.clone();
    for h in hs {
        for (t, a) in total.iter_mut().zip(&h.coeffs) {
            *t += a;
        }
    }
    let flat = cone.with(Constraint::from_rational(&total, Rational::zero(), Relation::Ge));
    for i in 0..n {
        for s in [1, -1] {
            let probe = flat.with(Constraint::new(unit(n, i, s), Rational::zero(), Relation::Gt));
            if !probe.is_empty() {
                return Err(Error::Convergence(
                    "total weight does not decrease along a recession direction".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Closed form of the lattice sum.
pub fn ev(delta: &SemilinearSet, h0: &LinearFunctional, hs: &[LinearFunctional], r: u64) -> Result<RationalFunctionQT> {
    ev_with_stats(delta, h0, hs, r).map(|(f, _)| f)
}

pub fn ev_with_stats(
    delta: &SemilinearSet,
    h0: &LinearFunctional,
    hs: &[LinearFunctional],
    r: u64,
) -> Result<(RationalFunctionQT, EvStats)> {
    let s = setup(delta, h0, hs, r)?;
    let nx = 1 + hs.len();
    let rr = Rational::from_integer(BigInt::from(r));
    let mut summer = summation::Summer::new(nx);
    let mut stats = EvStats::default();
    for cell in delta.normalize().cells() {
        if cell.is_empty() {
            continue;
        }
        check_convergence(cell, h0, hs)?;
        stats.cells += 1;
        let scaled = scale_cell(cell, &rr);
        let term = summer.initial_term(s.n, s.lin.clone(), s.offset.clone());
        summer.run(s.n, scaled.constraints().to_vec(), vec![term])?;
    }
    stats.congruence_splits = summer.splits;
    stats.final_terms = summer.final_terms();
    Ok((summer.finish(s.root)?, stats))
}

/// Bounds `[lo, hi]` of the integer coordinates `y = r·b` of the points of
/// `Δ` whose monomial has total degree (in `u^-1, t^-1`) at most
/// `max_degree`. Also returns the root.
pub fn degree_box(
    delta: &SemilinearSet,
    h0: &LinearFunctional,
    hs: &[LinearFunctional],
    r: u64,
    max_degree: i64,
) -> Result<(u64, Vec<(i64, i64)>)> {
    let s = setup(delta, h0, hs, r)?;
    let rr = Rational::from_integer(BigInt::from(r));
    // degree(y) = -Σ_rows (lin·y + offset) ≤ max_degree
    let colsum: Vec<BigInt> = (0..s.n).map(|j| s.lin.iter().map(|row| BigInt::from(row[j])).sum()).collect();
    let off: i64 = s.offset.iter().sum();
    let cap = Constraint::new(colsum, Rational::from_integer(BigInt::from(off + max_degree)), Relation::Ge);
    let mut bx: Vec<Option<(i64, i64)>> = vec![None; s.n];
    for cell in delta.normalize().cells() {
        let scaled = scale_cell(cell, &rr).with(cap.clone());
        if scaled.is_empty() {
            continue;
        }
        for (i, slot) in bx.iter_mut().enumerate() {
            let (lo, hi) = coordinate_range(s.n, scaled.constraints(), i)
                .ok_or_else(|| Error::Convergence("degree sublevel set is unbounded".into()))?;
            let (lo, hi) = (lo.to_i64().unwrap_or(i64::MIN), hi.to_i64().unwrap_or(i64::MAX));
            *slot = Some(match *slot {
                Some((a, b)) => (a.min(lo), b.max(hi)),
                None => (lo, hi),
            });
        }
    }
    Ok((s.root, bx.into_iter().map(|b| b.unwrap_or((0, -1))).collect()))
}

/// Integer range of `x_i` over the rational polyhedron (`None` if unbounded).
fn coordinate_range(n: usize, cons: &[Constraint], i: usize) -> Option<(BigInt, BigInt)> {
    let mut cur = fm::simplify(cons.to_vec())?;
    for j in (0..n).rev() {
        if j != i {
            cur = fm::simplify(fm::eliminate(&cur, j))?;
        }
    }
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for c in &cur {
        let a = &c.coeffs()[i];
        if a.is_zero() {
            continue;
        }
        let v = -c.constant() / Rational::from_integer(a.clone());
        let pos = a > &BigInt::zero();
        if c.relation() == Relation::Eq || pos {
            let l = ceil_int(&v);
            lo = Some(lo.map_or(l.clone(), |x| x.max(l)));
        }
        if c.relation() == Relation::Eq || !pos {
            let h = floor_int(&v);
            hi = Some(hi.map_or(h.clone(), |x| x.min(h)));
        }
    }
    Some((lo?, hi?))
}

/// Direct enumeration of the lattice sum over a box of scaled integer
/// coordinates (inclusive bounds). Returns the root and the polynomial.
pub fn ev_direct(
    delta: &SemilinearSet,
    h0: &LinearFunctional,
    hs: &[LinearFunctional],
    r: u64,
    bx: &[(i64, i64)],
) -> Result<(u64, IntLaurent)> {
    let s = setup(delta, h0, hs, r)?;
    check_dim(s.n, bx.len())?;
    let nx = 1 + hs.len();
    let size: u128 = bx.iter().map(|&(a, b)| if b < a { 0 } else { (b - a + 1) as u128 }).product();
    if size > 50_000_000 {
        return Err(Error::BudgetExceeded {
            needed: size,
            budget: 50_000_000,
        });
    }
    let mut out = IntLaurent::zero(nx);
    if size == 0 {
        return Ok((s.root, out));
    }
    let rr = Rational::from_integer(BigInt::from(r));
    let mut y: Vec<i64> = bx.iter().map(|b| b.0).collect();
    loop {
        let b: Vec<Rational> = y.iter().map(|&v| Rational::from_integer(v.into()) / &rr).collect();
        if delta.contains(&b)? {
            let e: Vec<i64> = s
                .lin
                .iter()
                .zip(&s.offset)
                .map(|(row, o)| row.iter().zip(&y).map(|(a, v)| a * v).sum::<i64>() + o)
                .collect();
            out.add_term(e, BigInt::one());
        }
        let mut k = 0;
        loop {
            if k == y.len() {
                return Ok((s.root, out));
            }
            if y[k] < bx[k].1 {
                y[k] += 1;
                break;
            }
            y[k] = bx[k].0;
            k += 1;
        }
    }
}

/// The lattice sum truncated at total degree `max_degree`, by enumeration.
pub fn ev_truncated(
    delta: &SemilinearSet,
    h0: &LinearFunctional,
    hs: &[LinearFunctional],
    r: u64,
    max_degree: i64,
) -> Result<(u64, IntLaurent)> {
    let (_, bx) = degree_box(delta, h0, hs, r, max_degree)?;
    let (root, p) = ev_direct(delta, h0, hs, r, &bx)?;
    let weights = vec![-1; 1 + hs.len()];
    Ok((root, p.truncate(&weights, max_degree)))
}

#[cfg(test)]
mod tests;
