//! Iterated summation of `x^(A·y + c)` over the integer points of a
//! rational polyhedron, one coordinate at a time (last coordinate first).
//!
//! A term is `P(y) · x^(A·y + c) · N(x) / Π (1 - x^w)^k` with `P` a
//! polynomial in the remaining lattice variables. Summing over the last
//! coordinate `t` between integer affine bounds turns `Σ t^j z^t` into
//! Faulhaber polynomials (`z = 1`) or Eulerian numerators over powers of
//! `1 - z`. Rows whose `t`-coefficient is not a unit are first made unit by
//! a unimodular change of the base variables and a split into congruence
//! classes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational_function::{expand_denominator, integral, RationalFunctionQT};
use crate::error::{Error, Result};
use crate::exactcore::{ceil_int, completion_with_first_row, floor_int, Monomial, RatLaurent, Rational};
use crate::semilinear::{fm, Constraint, Relation};

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub poly: RatLaurent,
    pub lin: Vec<Vec<i64>>,
    pub offset: Vec<i64>,
    pub num: RatLaurent,
    pub den: BTreeMap<Monomial, u32>,
}

/// Integer affine function `lin·y + c`.
#[derive(Clone, Debug)]
struct Affine {
    lin: Vec<BigInt>,
    c: BigInt,
}

impl Affine {
    fn shifted(&self, k: i64) -> Affine {
        Affine {
            lin: self.lin.clone(),
            c: &self.c + k,
        }
    }

    fn sub(&self, o: &Affine) -> Affine {
        Affine {
            lin: self.lin.iter().zip(&o.lin).map(|(a, b)| a - b).collect(),
            c: &self.c - &o.c,
        }
    }

    /// The constraint `self ≥ 0`.
    fn nonneg(&self) -> Constraint {
        Constraint::new(self.lin.clone(), Rational::from_integer(self.c.clone()), Relation::Ge)
    }

    fn poly(&self) -> RatLaurent {
        let n = self.lin.len();
        let mut p = RatLaurent::constant(n, Rational::from_integer(self.c.clone()));
        for (i, a) in self.lin.iter().enumerate() {
            if !a.is_zero() {
                p.add_term(unit_exp(n, i), Rational::from_integer(a.clone()));
            }
        }
        p
    }

    fn small(&self) -> Result<(Vec<i64>, i64)> {
        let cast = |x: &BigInt| x.to_i64().ok_or_else(|| Error::invalid("exponent overflow"));
        Ok((self.lin.iter().map(cast).collect::<Result<_>>()?, cast(&self.c)?))
    }
}

fn unit_exp(n: usize, i: usize) -> Monomial {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

enum Tight {
    Keep(Constraint),
    Drop,
    Infeasible,
}

/// Replaces a row by the strongest inequality with the same integer points.
fn tighten(c: &Constraint) -> Tight {
    if c.is_trivial() {
        return if c.constant_truth() == Some(true) {
            Tight::Drop
        } else {
            Tight::Infeasible
        };
    }
    let k = c.constant();
    let coeffs = c.coeffs().to_vec();
    match c.relation() {
        Relation::Eq if k.is_integer() => Tight::Keep(c.clone()),
        Relation::Eq => Tight::Infeasible,
        Relation::Ge => Tight::Keep(Constraint::new(coeffs, Rational::from_integer(-ceil_int(&-k)), Relation::Ge)),
        Relation::Gt => Tight::Keep(Constraint::new(
            coeffs,
            Rational::from_integer(-(floor_int(&-k) + BigInt::one())),
            Relation::Ge,
        )),
    }
}

fn prepare(d: usize, cons: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut out = Vec::with_capacity(cons.len());
    for c in &cons {
        match tighten(c) {
            Tight::Keep(c) => out.push(c),
            Tight::Drop => {}
            Tight::Infeasible => return None,
        }
    }
    let out = fm::simplify(out)?;
    if fm::is_empty(d, &out) {
        return None;
    }
    Some(out)
}

fn binom(n: usize, k: usize) -> Rational {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(r)
}

/// Bernoulli numbers with `B_1 = +1/2`.
fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut s = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += binom(m + 1, k) * bk;
        }
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    if n >= 1 {
        b[1] = -b[1].clone();
    }
    b
}

/// Coefficients of `F_j(X) = Σ_{t=1}^{X} t^j`, lowest degree first.
fn faulhaber(j: usize) -> Vec<Rational> {
    let b = bernoulli(j);
    let mut out = vec![Rational::zero(); j + 2];
    let scale = Rational::from_integer(BigInt::from(j + 1));
    for (i, bi) in b.iter().enumerate() {
        out[j + 1 - i] += binom(j + 1, i) * bi / &scale;
    }
    out
}

/// Numerators `E_i` with `Σ_{s≥0} s^i z^s = E_i(z) / (1 - z)^(i+1)`.
fn eulerian(i: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::one()];
    for k in 0..i {
        // E_{k+1} = z (E_k' (1 - z) + (k+1) E_k)
        let mut next = vec![BigInt::zero(); e.len() + 1];
        for (p, c) in e.iter().enumerate() {
            if p > 0 {
                let d = c * BigInt::from(p);
                next[p] += &d;
                next[p + 1] -= &d;
            }
            next[p + 1] += c * BigInt::from(k + 1);
        }
        while next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        e = next;
    }
    e
}

fn eval_poly_at(coeffs: &[Rational], a: &RatLaurent, cache: &mut Vec<RatLaurent>) -> RatLaurent {
    let n = a.nvars();
    let mut out = RatLaurent::zero(n);
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        while cache.len() <= k {
            let next = match cache.last() {
                Some(p) => p * a,
                None => RatLaurent::one(n),
            };
            cache.push(next);
        }
        out = &out + &cache[k].scale(c);
    }
    out
}

pub(crate) struct Summer {
    nx: usize,
    pub splits: usize,
    finals: Vec<Term>,
}

impl Summer {
    pub fn new(nx: usize) -> Self {
        Summer {
            nx,
            splits: 0,
            finals: Vec::new(),
        }
    }

    pub fn final_terms(&self) -> usize {
        self.finals.len()
    }

    pub fn initial_term(&self, d: usize, lin: Vec<Vec<i64>>, offset: Vec<i64>) -> Term {
        Term {
            poly: RatLaurent::one(d),
            lin,
            offset,
            num: RatLaurent::one(self.nx),
            den: BTreeMap::new(),
        }
    }

    /// Sums every term over the integer points of `{cons}` in `Z^d`.
    pub fn run(&mut self, d: usize, cons: Vec<Constraint>, terms: Vec<Term>) -> Result<()> {
        if terms.is_empty() {
            return Ok(());
        }
        let Some(cons) = prepare(d, cons) else {
            return Ok(());
        };
        if d == 0 {
            self.finals.extend(terms);
            return Ok(());
        }
        if let Some(eq) = cons.iter().find(|c| c.relation() == Relation::Eq) {
            // Lattice parametrisation of the hyperplane a·y = -c.
            let comp = completion_with_first_row(eq.coeffs())?;
            let inv = comp.unimodular_inverse()?;
            let c = eq.constant().to_integer();
            let w: Vec<Vec<BigInt>> = (0..d).map(|i| (1..d).map(|j| inv.get(i, j).clone()).collect()).collect();
            let w0: Vec<BigInt> = (0..d).map(|i| inv.get(i, 0) * -&c).collect();
            let (cons, terms) = substitute(&cons, &terms, &w, &w0)?;
            return self.run(d - 1, cons, terms);
        }
        let t = d - 1;
        if let Some(row) = cons.iter().find(|c| c.coeffs()[t].abs() > BigInt::one()) {
            let a = row.coeffs()[t].abs();
            let r = &row.coeffs()[..t];
            let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            let modulus = &a / a.gcd(&g);
            let comp = completion_with_first_row(r)?;
            let inv = comp.unimodular_inverse()?;
            let modulus_i = modulus.to_i64().ok_or_else(|| Error::invalid("modulus overflow"))?;
            if modulus_i > 1 {
                self.splits += 1;
            }
            for rho in 0..modulus_i {
                let mut w = vec![vec![BigInt::zero(); d]; d];
                let mut w0 = vec![BigInt::zero(); d];
                for i in 0..t {
                    for j in 0..t {
                        w[i][j] = if j == 0 {
                            inv.get(i, j) * &modulus
                        } else {
                            inv.get(i, j).clone()
                        };
                    }
                    w0[i] = inv.get(i, 0) * BigInt::from(rho);
                }
                w[t][t] = BigInt::one();
                let (cons, terms) = substitute(&cons, &terms, &w, &w0)?;
                self.run(d, cons, terms)?;
            }
            return Ok(());
        }
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        let mut rest = Vec::new();
        for c in &cons {
            let lin: Vec<BigInt> = c.coeffs()[..t].to_vec();
            let k = c.constant().to_integer();
            let s = &c.coeffs()[t];
            if s.is_zero() {
                rest.push(Constraint::new(lin, c.constant().clone(), c.relation()));
            } else if s.is_positive() {
                lowers.push(Affine {
                    lin: lin.iter().map(|x| -x).collect(),
                    c: -k,
                });
            } else {
                uppers.push(Affine { lin, c: k });
            }
        }
        let lower_choices: Vec<Option<usize>> = if lowers.is_empty() {
            vec![None]
        } else {
            (0..lowers.len()).map(Some).collect()
        };
        let upper_choices: Vec<Option<usize>> = if uppers.is_empty() {
            vec![None]
        } else {
            (0..uppers.len()).map(Some).collect()
        };
        for &lj in &lower_choices {
            for &uk in &upper_choices {
                let mut base = rest.clone();
                if let Some(j) = lj {
                    for (i, li) in lowers.iter().enumerate() {
                        if i != j {
                            let gap = lowers[j].sub(li);
                            base.push(if i < j { gap.shifted(-1) } else { gap }.nonneg());
                        }
                    }
                }
                if let Some(k) = uk {
                    for (i, ui) in uppers.iter().enumerate() {
                        if i != k {
                            let gap = ui.sub(&uppers[k]);
                            base.push(if i < k { gap.shifted(-1) } else { gap }.nonneg());
                        }
                    }
                }
                if let (Some(j), Some(k)) = (lj, uk) {
                    base.push(uppers[k].sub(&lowers[j]).nonneg());
                }
                let Some(base) = prepare(t, base) else {
                    continue;
                };
                let lo = lj.map(|j| &lowers[j]);
                let hi = uk.map(|k| &uppers[k]);
                let mut next = Vec::new();
                for term in &terms {
                    next.extend(self.sum_last(term, d, lo, hi)?);
                }
                self.run(t, base, next)?;
            }
        }
        Ok(())
    }

    /// `Σ_{lo ≤ t ≤ hi}` of one term over its last lattice variable.
    fn sum_last(&self, term: &Term, d: usize, lo: Option<&Affine>, hi: Option<&Affine>) -> Result<Vec<Term>> {
        let t = d - 1;
        let b: Vec<i64> = term.lin.iter().map(|row| row[t]).collect();
        let mut parts: BTreeMap<usize, RatLaurent> = BTreeMap::new();
        for (e, c) in term.poly.terms() {
            parts
                .entry(e[t] as usize)
                .or_insert_with(|| RatLaurent::zero(t))
                .add_term(e[..t].to_vec(), c.clone());
        }
        let base_lin: Vec<Vec<i64>> = term.lin.iter().map(|row| row[..t].to_vec()).collect();
        if b.iter().all(|&x| x == 0) {
            let (Some(l), Some(h)) = (lo, hi) else {
                return Err(Error::Convergence("divergent sum along a direction of constant weight".into()));
            };
            let (pu, pl) = (h.poly(), l.shifted(-1).poly());
            let (mut cu, mut cl) = (Vec::new(), Vec::new());
            let mut poly = RatLaurent::zero(t);
            for (&j, pj) in &parts {
                let f = faulhaber(j);
                let diff = &eval_poly_at(&f, &pu, &mut cu) - &eval_poly_at(&f, &pl, &mut cl);
                poly = &poly + &(pj * &diff);
            }
            return Ok(vec![Term {
                poly,
                lin: base_lin,
                offset: term.offset.clone(),
                num: term.num.clone(),
                den: term.den.clone(),
            }]);
        }
        let deg: i64 = -b.iter().sum::<i64>();
        let upward = deg > 0 || (deg == 0 && lo.is_some() && hi.is_some());
        let mut out = Vec::new();
        if upward {
            let Some(l) = lo else {
                return Err(Error::Convergence("sum unbounded below along an increasing direction".into()));
            };
            self.tail(term, &parts, &base_lin, &b, l, false, false, &mut out)?;
            if let Some(h) = hi {
                self.tail(term, &parts, &base_lin, &b, &h.shifted(1), false, true, &mut out)?;
            }
        } else {
            let Some(h) = hi else {
                return Err(Error::Convergence("sum unbounded above along a decreasing direction".into()));
            };
            self.tail(term, &parts, &base_lin, &b, h, true, false, &mut out)?;
            if let Some(l) = lo {
                self.tail(term, &parts, &base_lin, &b, &l.shifted(-1), true, true, &mut out)?;
            }
        }
        Ok(out)
    }

    /// `Σ_{t ≥ A} t^j z^t` (or `Σ_{t ≤ A}` when `down`), negated if asked.
    #[allow(clippy::too_many_arguments)]
    fn tail(
        &self,
        term: &Term,
        parts: &BTreeMap<usize, RatLaurent>,
        base_lin: &[Vec<i64>],
        b: &[i64],
        a: &Affine,
        down: bool,
        negate: bool,
        out: &mut Vec<Term>,
    ) -> Result<()> {
        let (a_lin, a_c) = a.small()?;
        let ap = a.poly();
        let maxj = *parts.keys().next_back().unwrap_or(&0);
        let mut apow: Vec<RatLaurent> = vec![RatLaurent::one(a_lin.len())];
        for _ in 0..maxj {
            let next = apow.last().unwrap() * &ap;
            apow.push(next);
        }
        let lin: Vec<Vec<i64>> = base_lin
            .iter()
            .zip(b)
            .map(|(row, bi)| row.iter().zip(&a_lin).map(|(x, y)| x + bi * y).collect())
            .collect();
        let offset: Vec<i64> = term.offset.iter().zip(b).map(|(o, bi)| o + bi * a_c).collect();
        let dir: Monomial = if down { b.iter().map(|x| -x).collect() } else { b.to_vec() };
        for i in 0..=maxj {
            let mut poly = RatLaurent::zero(a_lin.len());
            for (&j, pj) in parts.range(i..) {
                let mut c = binom(j, i);
                if down && i % 2 == 1 {
                    c = -c;
                }
                poly = &poly + &(pj * &apow[j - i]).scale(&c);
            }
            if poly.is_zero() {
                continue;
            }
            if negate {
                poly = -&poly;
            }
            let mut e = RatLaurent::zero(self.nx);
            for (l, c) in eulerian(i).into_iter().enumerate() {
                if !c.is_zero() {
                    e.add_term(dir.iter().map(|x| x * l as i64).collect(), Rational::from_integer(c));
                }
            }
            let mut den = term.den.clone();
            *den.entry(dir.clone()).or_insert(0) += i as u32 + 1;
            out.push(Term {
                poly,
                lin: lin.clone(),
                offset: offset.clone(),
                num: &term.num * &e,
                den,
            });
        }
        Ok(())
    }

    /// Adds the finished terms over a common denominator and cancels.
    pub fn finish(self, root: u64) -> Result<RationalFunctionQT> {
        let nx = self.nx;
        let weights = vec![-1i64; nx];
        let deg = |w: &[i64]| -> i64 { w.iter().zip(&weights).map(|(a, b)| a * b).sum() };
        let mut groups: BTreeMap<Vec<(Monomial, u32)>, RatLaurent> = BTreeMap::new();
        for term in self.finals {
            let c = term.poly.coefficient(&[]);
            if c.is_zero() {
                continue;
            }
            let mut num = (&term.num * &RatLaurent::monomial(term.offset.clone(), Rational::one())).scale(&c);
            let mut den: BTreeMap<Monomial, u32> = BTreeMap::new();
            for (w, k) in term.den {
                let flip = deg(&w) == 0 && w.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
                if flip {
                    let neg: Monomial = w.iter().map(|x| -x).collect();
                    let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                    let shift: Monomial = neg.iter().map(|x| x * k as i64).collect();
                    num = &num * &RatLaurent::monomial(shift, sign);
                    *den.entry(neg).or_insert(0) += k;
                } else {
                    *den.entry(w).or_insert(0) += k;
                }
            }
            let key: Vec<(Monomial, u32)> = den.into_iter().collect();
            let slot = groups.entry(key).or_insert_with(|| RatLaurent::zero(nx));
            *slot = &*slot + &num;
        }
        let mut common: BTreeMap<Monomial, u32> = BTreeMap::new();
        for key in groups.keys() {
            for (w, k) in key {
                let e = common.entry(w.clone()).or_insert(0);
                *e = (*e).max(*k);
            }
        }
        let mut total = RatLaurent::zero(nx);
        for (key, num) in groups {
            if num.is_zero() {
                continue;
            }
            let have: BTreeMap<Monomial, u32> = key.into_iter().collect();
            let mut missing = BTreeMap::new();
            for (w, &k) in &common {
                let h = have.get(w).copied().unwrap_or(0);
                if k > h {
                    missing.insert(w.clone(), k - h);
                }
            }
            let lift = expand_denominator(nx, &missing).map_coefficients(|c| Rational::from_integer(c.clone()));
            total = &total + &(&num * &lift);
        }
        if total.is_zero() {
            return Ok(RationalFunctionQT::zero(root, nx));
        }
        let mut den = BTreeMap::new();
        for (w, k) in common {
            let mut left = k;
            while left > 0 {
                match total.divide_by_binomial(&w) {
                    Some(q) => {
                        total = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                if deg(&w) == 0 {
                    return Err(Error::invalid("degree-zero binomial did not cancel"));
                }
                den.insert(w, left);
            }
        }
        RationalFunctionQT::new(root, integral(&total)?, den)
    }
}

/// Rewrites constraints and terms under `y = W·z + w0`.
fn substitute(
    cons: &[Constraint],
    terms: &[Term],
    w: &[Vec<BigInt>],
    w0: &[BigInt],
) -> Result<(Vec<Constraint>, Vec<Term>)> {
    let dn = w.first().map_or(0, |r| r.len());
    let wr: Vec<Vec<Rational>> = w
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let w0r: Vec<Rational> = w0.iter().map(|x| Rational::from_integer(x.clone())).collect();
    let cons: Vec<Constraint> = cons.iter().map(|c| c.pullback(&wr, &w0r)).collect();
    let images: Vec<RatLaurent> = (0..w.len())
        .map(|i| {
            Affine {
                lin: w[i].clone(),
                c: w0[i].clone(),
            }
            .poly()
        })
        .collect();
    let cast = |x: BigInt| x.to_i64().ok_or_else(|| Error::invalid("exponent overflow"));
    let mut out = Vec::with_capacity(terms.len());
    for term in terms {
        let mut lin = Vec::with_capacity(term.lin.len());
        let mut offset = Vec::with_capacity(term.lin.len());
        for (row, o) in term.lin.iter().zip(&term.offset) {
            let mut r = Vec::with_capacity(dn);
            for j in 0..dn {
                let s: BigInt = row.iter().zip(w).map(|(a, wi)| BigInt::from(*a) * &wi[j]).sum();
                r.push(cast(s)?);
            }
            let s: BigInt = row.iter().zip(w0).map(|(a, b)| BigInt::from(*a) * b).sum::<BigInt>() + o;
            lin.push(r);
            offset.push(cast(s)?);
        }
        let poly = if images.is_empty() {
            term.poly.clone()
        } else {
            term.poly.compose(&images)
        };
        out.push(Term {
            poly,
            lin,
            offset,
            num: term.num.clone(),
            den: term.den.clone(),
        });
    }
    Ok((cons, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rat;

    #[test]
    fn faulhaber_sums() {
        let f2 = faulhaber(2);
        // 1 + 4 + 9 = 14
        let v: Rational = f2.iter().enumerate().map(|(k, c)| c * Rational::from_integer(BigInt::from(3).pow(k as u32))).sum();
        assert_eq!(v, rat(14, 1));
        assert_eq!(faulhaber(0), vec![rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn eulerian_numerators() {
        let c = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(eulerian(0), c(&[1]));
        assert_eq!(eulerian(1), c(&[0, 1]));
        assert_eq!(eulerian(2), c(&[0, 1, 1]));
        assert_eq!(eulerian(3), c(&[0, 1, 4, 1]));
    }
}
