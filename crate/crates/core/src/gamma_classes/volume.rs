use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{completion_with_first_row, IntMatrix, RatLaurent, Rational};
use crate::semilinear::{Bound, Cell, Constraint, CylCell, Level, Relation, SemilinearSet};

/// A chamber of the parameter line with the volume polynomial valid there.
#[derive(Debug, Clone, PartialEq)]
pub struct Chamber {
    /// One-variable cell describing the parameter range.
    pub domain: Cell,
    /// Polynomial in the parameter (one variable).
    pub polynomial: RatLaurent,
}

impl Chamber {
    pub fn eval(&self, u: &Rational) -> Rational {
        eval_univariate(&self.polynomial, u)
    }
}

pub(crate) fn eval_univariate(p: &RatLaurent, u: &Rational) -> Rational {
    p.terms().fold(Rational::zero(), |acc, (e, c)| {
        acc + c * pow(u, e[0])
    })
}

fn pow(u: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(u.clone(), e as usize)
    } else {
        Rational::one() / num_traits::pow(u.clone(), (-e) as usize)
    }
}

fn bound_poly(b: &Bound, nvars: usize) -> RatLaurent {
    let mut p = RatLaurent::constant(nvars, b.constant.clone());
    for (i, a) in b.coeffs.iter().enumerate() {
        p = &p + &RatLaurent::var(nvars, i).scale(a);
    }
    p
}

/// Replaces `x_k` by the affine bound (polynomial exponents must be ≥ 0).
fn substitute(p: &RatLaurent, k: usize, b: &Bound) -> RatLaurent {
    let n = p.nvars();
    let bp = bound_poly(b, n);
    let mut powers: Vec<RatLaurent> = vec![RatLaurent::one(n)];
    let mut out = RatLaurent::zero(n);
    for (e, c) in p.terms() {
        let d = e[k] as usize;
        while powers.len() <= d {
            let next = powers.last().unwrap() * &bp;
            powers.push(next);
        }
        let mut rest = e.clone();
        rest[k] = 0;
        let mono = RatLaurent::monomial(rest, c.clone());
        out = &out + &(&mono * &powers[d]);
    }
    out
}

fn antiderivative(p: &RatLaurent, k: usize) -> RatLaurent {
    let mut out = RatLaurent::zero(p.nvars());
    for (e, c) in p.terms() {
        let mut f = e.clone();
        f[k] += 1;
        let d = Rational::from_integer(BigInt::from(f[k]));
        out.add_term(f, c / d);
    }
    out
}

/// Integrates 1 over the sector levels `stop..n` of a cylindrical cell,
/// leaving a polynomial in `x_0..x_{stop-1}`.
fn integrate_levels(c: &CylCell, stop: usize) -> Result<RatLaurent> {
    let n = c.levels.len();
    let mut p = RatLaurent::one(n);
    for k in (stop..n).rev() {
        let Level::Sector {
            lower: Some(l),
            upper: Some(u),
        } = &c.levels[k]
        else {
            return Err(Error::Unbounded);
        };
        let a = antiderivative(&p, k);
        p = &substitute(&a, k, u) - &substitute(&a, k, l);
    }
    Ok(p)
}

/// Exact Lebesgue volume of a bounded set; lower-dimensional parts count 0.
pub fn volume(s: &SemilinearSet) -> Result<Rational> {
    if !s.is_bounded() {
        return Err(Error::Unbounded);
    }
    let mut acc = Rational::zero();
    for c in s.cylindrical_decomposition() {
        if c.is_full_dimensional() {
            let p = integrate_levels(&c, 0)?;
            acc += p.coefficient(&vec![0; c.levels.len()]);
        }
    }
    Ok(acc)
}

#[derive(Clone)]
enum Piece {
    Point(Rational),
    Open(Option<Rational>, Option<Rational>),
}

impl Piece {
    fn sample(&self) -> Rational {
        match self {
            Piece::Point(b) => b.clone(),
            Piece::Open(Some(a), Some(b)) => (a + b) / Rational::from_integer(2.into()),
            Piece::Open(Some(a), None) => a + Rational::one(),
            Piece::Open(None, Some(b)) => b - Rational::one(),
            Piece::Open(None, None) => Rational::zero(),
        }
    }
}

fn level_contains(level: &Level, u: &Rational) -> bool {
    match level {
        Level::Section(b) => b.constant == *u,
        Level::Sector { lower, upper } => {
            lower.as_ref().is_none_or(|l| *u > l.constant)
                && upper.as_ref().is_none_or(|h| *u < h.constant)
        }
    }
}

struct Range {
    lo: Option<(Rational, bool)>,
    hi: Option<(Rational, bool)>,
    poly: RatLaurent,
    has_open: bool,
}

impl Range {
    fn to_chamber(&self) -> Chamber {
        let mut cs = Vec::new();
        match (&self.lo, &self.hi) {
            (Some((a, true)), Some((b, true))) if a == b => {
                cs.push(Constraint::from_i64(&[1], -a.clone(), Relation::Eq));
            }
            _ => {
                if let Some((a, closed)) = &self.lo {
                    let rel = if *closed { Relation::Ge } else { Relation::Gt };
                    cs.push(Constraint::from_i64(&[1], -a.clone(), rel));
                }
                if let Some((b, closed)) = &self.hi {
                    let rel = if *closed { Relation::Ge } else { Relation::Gt };
                    cs.push(Constraint::from_i64(&[-1], b.clone(), rel));
                }
            }
        }
        Chamber {
            domain: Cell::new_unchecked(1, cs),
            polynomial: self.poly.clone(),
        }
    }
}

/// Piecewise-polynomial volume of the fibers of a family over the
/// coordinate `param`. Returns maximal chambers of the parameter line on
/// which the fibre is nonempty, each with its exact polynomial.
pub fn volume_param(family: &SemilinearSet, param: usize) -> Result<Vec<Chamber>> {
    let n = family.dim_ambient();
    if param >= n {
        return Err(Error::InvalidIndex { index: param, dim: n });
    }
    let mut perm = vec![param];
    perm.extend((0..n).filter(|&i| i != param));
    let fam = family.permute(&perm)?.normalize();
    for cell in fam.cells() {
        let cone = cell.recession_cone();
        let mut e0 = vec![BigInt::zero(); n];
        e0[0] = BigInt::one();
        let flat = cone.with(Constraint::new(e0, Rational::zero(), Relation::Eq));
        for i in 1..n {
            for s in [1, -1] {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::from(s);
                if !flat.with(Constraint::new(v, Rational::zero(), Relation::Gt)).is_empty() {
                    return Err(Error::UnboundedFibers);
                }
            }
        }
    }
    let cyl: Vec<CylCell> = fam.cylindrical_decomposition();
    let mut polys = Vec::new();
    for c in &cyl {
        if c.levels[1..].iter().all(|l| matches!(l, Level::Sector { .. })) {
            let p = integrate_levels(c, 1)?;
            // Keep only the u-variable.
            let q = p.map_exponents(1, |e| vec![e[0]]);
            polys.push(Some(q));
        } else {
            polys.push(None);
        }
    }
    let mut breaks: Vec<Rational> = Vec::new();
    for c in &cyl {
        match &c.levels[0] {
            Level::Section(b) => breaks.push(b.constant.clone()),
            Level::Sector { lower, upper } => {
                breaks.extend(lower.iter().map(|b| b.constant.clone()));
                breaks.extend(upper.iter().map(|b| b.constant.clone()));
            }
        }
    }
    breaks.sort();
    breaks.dedup();
    let mut elementary = Vec::new();
    if breaks.is_empty() {
        elementary.push(Piece::Open(None, None));
    } else {
        elementary.push(Piece::Open(None, Some(breaks[0].clone())));
        for (i, b) in breaks.iter().enumerate() {
            elementary.push(Piece::Point(b.clone()));
            elementary.push(Piece::Open(Some(b.clone()), breaks.get(i + 1).cloned()));
        }
    }
    let mut out: Vec<Chamber> = Vec::new();
    let mut cur: Option<Range> = None;
    for piece in &elementary {
        let s = piece.sample();
        let mut nonempty = false;
        let mut poly = RatLaurent::zero(1);
        for (c, p) in cyl.iter().zip(&polys) {
            if level_contains(&c.levels[0], &s) {
                nonempty = true;
                if let Some(p) = p {
                    poly = &poly + p;
                }
            }
        }
        if !nonempty {
            if let Some(r) = cur.take() {
                out.push(r.to_chamber());
            }
            continue;
        }
        let (lo, hi, is_open) = match piece {
            Piece::Point(b) => {
                poly = RatLaurent::constant(1, eval_univariate(&poly, b));
                (Some((b.clone(), true)), Some((b.clone(), true)), false)
            }
            Piece::Open(a, b) => (
                a.clone().map(|a| (a, false)),
                b.clone().map(|b| (b, false)),
                true,
            ),
        };
        let merged = match &mut cur {
            Some(r) => {
                let compatible = match (r.has_open, is_open) {
                    (true, true) => r.poly == poly,
                    (true, false) => eval_univariate(&r.poly, &s) == eval_univariate(&poly, &s),
                    (false, true) => eval_univariate(&poly, &r.hi.as_ref().unwrap().0) == eval_univariate(&r.poly, &s),
                    (false, false) => false,
                };
                if compatible {
                    r.hi = hi.clone();
                    if is_open {
                        r.poly = poly.clone();
                        r.has_open = true;
                    }
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if !merged {
            if let Some(r) = cur.take() {
                out.push(r.to_chamber());
            }
            cur = Some(Range {
                lo,
                hi,
                poly,
                has_open: is_open,
            });
        }
    }
    if let Some(r) = cur.take() {
        out.push(r.to_chamber());
    }
    Ok(out)
}

/// For a cell with an equality `r·y + k = 0`, a unimodular matrix `M`
/// sending the hyperplane onto `{y_0 = c}`, together with `c`.
pub fn straighten_equality(cell: &Cell) -> Option<(IntMatrix, Rational)> {
    let eq = cell
        .constraints()
        .iter()
        .find(|c| c.relation() == Relation::Eq && !c.is_trivial())?;
    let m = completion_with_first_row(eq.coeffs()).ok()?;
    // The constraint is primitive, so the first row of M equals its normal.
    Some((m, -eq.constant().clone()))
}
