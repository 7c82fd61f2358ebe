use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactcore::{IntLaurent, Monomial, RatLaurent};

/// `num / Π_w (1 - x^w)^(k_w)` in the variables `x = (u, t_1, …, t_k)`,
/// where `u = Q^(1/m)` and `t_i = T_i^(1/m)` for the root `m`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunctionQT {
    root: u64,
    num: IntLaurent,
    den: BTreeMap<Monomial, u32>,
}

fn binomial(w: &[i64]) -> IntLaurent {
    let n = w.len();
    &IntLaurent::one(n) - &IntLaurent::monomial(w.to_vec(), BigInt::one())
}

/// Expanded product `Π (1 - x^w)^k`.
pub(crate) fn expand_denominator(nvars: usize, den: &BTreeMap<Monomial, u32>) -> IntLaurent {
    let mut out = IntLaurent::one(nvars);
    for (w, &k) in den {
        out = &out * &binomial(w).pow(k);
    }
    out
}

impl RationalFunctionQT {
    pub fn new(root: u64, num: IntLaurent, den: BTreeMap<Monomial, u32>) -> Result<Self> {
        if root == 0 {
            return Err(Error::invalid("root must be positive"));
        }
        for w in den.keys() {
            if w.len() != num.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: num.nvars(),
                    found: w.len(),
                });
            }
            if w.iter().all(|&x| x == 0) {
                return Err(Error::invalid("binomial 1 - x^0 vanishes"));
            }
        }
        let den = den.into_iter().filter(|(_, k)| *k > 0).collect();
        Ok(RationalFunctionQT { root, num, den })
    }

    pub fn zero(root: u64, nvars: usize) -> Self {
        RationalFunctionQT {
            root,
            num: IntLaurent::zero(nvars),
            den: BTreeMap::new(),
        }
    }

    pub fn from_laurent(root: u64, num: IntLaurent) -> Self {
        RationalFunctionQT {
            root,
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &IntLaurent {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Monomial, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn expanded_denominator(&self) -> IntLaurent {
        expand_denominator(self.nvars(), &self.den)
    }

    /// Applies a linear map to every exponent (numerator and binomials).
    pub fn map_exponents(&self, root: u64, nvars: usize, f: impl Fn(&[i64]) -> Monomial) -> Result<Self> {
        let num = self.num.map_exponents(nvars, &f);
        let mut den = BTreeMap::new();
        for (w, k) in &self.den {
            *den.entry(f(w)).or_insert(0) += k;
        }
        RationalFunctionQT::new(root, num, den)
    }

    /// The same function written over the finer root `l`, a multiple of
    /// the current one.
    pub fn with_root(&self, l: u64) -> Result<Self> {
        if l == 0 || !l.is_multiple_of(self.root) {
            return Err(Error::invalid(format!("root {l} is not a multiple of {}", self.root)));
        }
        let f = (l / self.root) as i64;
        self.map_exponents(l, self.nvars(), |e| e.iter().map(|x| x * f).collect())
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        if self.nvars() != other.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        let l = self.root.lcm(&other.root);
        Ok((self.with_root(l)?, other.with_root(l)?))
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        let (a, b) = self.common(other)?;
        Ok(&a.num * &b.expanded_denominator() == &b.num * &a.expanded_denominator())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let mut den = a.den.clone();
        for (w, &k) in &b.den {
            let e = den.entry(w.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let lift = |x: &Self| {
            let mut missing = BTreeMap::new();
            for (w, &k) in &den {
                let have = x.den.get(w).copied().unwrap_or(0);
                if k > have {
                    missing.insert(w.clone(), k - have);
                }
            }
            &x.num * &expand_denominator(x.nvars(), &missing)
        };
        let num = &lift(&a) + &lift(&b);
        Ok(RationalFunctionQT { root: a.root, num, den }.reduced())
    }

    pub fn neg(&self) -> Self {
        RationalFunctionQT {
            root: self.root,
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let mut den = a.den.clone();
        for (w, &k) in &b.den {
            *den.entry(w.clone()).or_insert(0) += k;
        }
        let num = &a.num * &b.num;
        Ok(RationalFunctionQT { root: a.root, num, den }.reduced())
    }

    /// Multiplies by a Laurent polynomial written over the same root.
    pub fn mul_laurent(&self, p: &IntLaurent) -> Self {
        RationalFunctionQT {
            root: self.root,
            num: &self.num * p,
            den: self.den.clone(),
        }
        .reduced()
    }

    /// Cancels binomials that divide the numerator exactly.
    pub fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let keys: Vec<Monomial> = self.den.keys().cloned().collect();
        for w in keys {
            while self.den.get(&w).copied().unwrap_or(0) > 0 {
                match self.num.divide_by_binomial(&w) {
                    Some(q) => {
                        self.num = q;
                        let k = self.den.get_mut(&w).unwrap();
                        *k -= 1;
                        if *k == 0 {
                            self.den.remove(&w);
                        }
                    }
                    None => break,
                }
            }
        }
        self
    }

    /// Sets the listed variables to 1. Fails if a binomial vanishes.
    pub fn at_unit(&self, vars: &[usize]) -> Result<Self> {
        let zero_out = |e: &[i64]| {
            let mut e = e.to_vec();
            for &v in vars {
                e[v] = 0;
            }
            e
        };
        if self.den.keys().any(|w| zero_out(w).iter().all(|&x| x == 0)) {
            return Err(Error::invalid("pole at the unit specialisation"));
        }
        self.map_exponents(self.root, self.nvars(), zero_out)
            .map(Self::reduced)
    }

    /// Power-series expansion up to weighted degree `max_degree`.
    pub fn series_expand(&self, weights: &[i64], max_degree: i64) -> Result<IntLaurent> {
        series_expand(self, weights, max_degree)
    }
}

/// Expands `f` as a series in the direction of increasing weighted degree
/// and keeps the terms of degree at most `max_degree`. Every binomial must
/// have nonzero weighted degree.
pub fn series_expand(f: &RationalFunctionQT, weights: &[i64], max_degree: i64) -> Result<IntLaurent> {
    let n = f.nvars();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: weights.len(),
        });
    }
    let deg = |e: &[i64]| -> i64 { e.iter().zip(weights).map(|(a, w)| a * w).sum() };
    let mut num = f.num.clone();
    let mut dirs: Vec<(Monomial, u32)> = Vec::new();
    for (w, &k) in &f.den {
        let d = deg(w);
        if d == 0 {
            return Err(Error::NotExpandable(format!("binomial with exponent {w:?} has degree 0")));
        }
        if d > 0 {
            dirs.push((w.clone(), k));
        } else {
            // 1/(1 - x^w) = -x^(-w) / (1 - x^(-w))
            let neg: Monomial = w.iter().map(|x| -x).collect();
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let shift: Monomial = neg.iter().map(|x| x * k as i64).collect();
            num = &num * &IntLaurent::monomial(shift, sign);
            dirs.push((neg, k));
        }
    }
    if num.is_zero() {
        return Ok(IntLaurent::zero(n));
    }
    let (lo, _) = num.degree_range(weights).expect("nonzero numerator");
    let budget = max_degree - lo;
    if budget < 0 {
        return Ok(IntLaurent::zero(n));
    }
    let mut series = IntLaurent::one(n);
    for (w, k) in dirs {
        let d = deg(&w);
        let terms = budget / d;
        let mut geo = IntLaurent::zero(n);
        for j in 0..=terms {
            geo.add_term(w.iter().map(|x| x * j).collect(), BigInt::one());
        }
        for _ in 0..k {
            series = series.mul_truncated(&geo, weights, budget);
        }
    }
    Ok(num.mul_truncated(&series, weights, max_degree))
}

/// Integer numerator from a rational one; fails on a fractional coefficient.
pub(crate) fn integral(p: &RatLaurent) -> Result<IntLaurent> {
    let mut out = IntLaurent::zero(p.nvars());
    for (e, c) in p.terms() {
        if !c.is_integer() {
            return Err(Error::invalid("numerator has a fractional coefficient"));
        }
        out.add_term(e.clone(), c.to_integer());
    }
    Ok(out)
}

impl fmt::Display for RationalFunctionQT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        if !self.den.is_empty() {
            write!(f, " / (")?;
            for (i, (w, k)) in self.den.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                let m = IntLaurent::monomial(w.clone(), BigInt::one());
                write!(f, "(1 - {m})")?;
                if *k > 1 {
                    write!(f, "^{k}")?;
                }
            }
            write!(f, ")")?;
        }
        write!(f, " [root {}]", self.root)
    }
}

impl fmt::Debug for RationalFunctionQT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
