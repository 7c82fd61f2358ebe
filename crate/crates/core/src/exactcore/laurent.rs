use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{check_dim, Result};

pub type Monomial = Vec<i64>;

/// Coefficient ring for [`LaurentPoly`].
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Sparse Laurent polynomial in a fixed number of variables. Exponents may be
/// negative; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exponents: Monomial, c: C) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    /// The single variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            check_dim(nvars, e.len())?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, exponents: &[i64]) -> C {
        self.terms.get(exponents).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, exponents: Monomial, c: C) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponents) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&exponents);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exponents, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v.clone() * c.clone());
        }
        p
    }

    /// Multiply by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        let mut p = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c));
        }
        p
    }

    /// Applies an integer linear map to every exponent vector:
    /// `x^e ↦ x'^{(map · e)}` where `map` has one row per output variable.
    pub fn map_exponents(&self, out_vars: usize, map: impl Fn(&[i64]) -> Monomial) -> Self {
        let mut p = Self::zero(out_vars);
        for (e, c) in &self.terms {
            let ne = map(e);
            debug_assert_eq!(ne.len(), out_vars);
            p.add_term(ne, c.clone());
        }
        p
    }

    /// Substitutes a value for each of the given variables, leaving others.
    /// `values[i] = Some(v)` replaces `x_i` by `v(exponent) = v^exponent`.
    pub fn evaluate_partial(&self, pow_of: impl Fn(usize, i64) -> Option<C>) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut ne = e.clone();
            for (i, &k) in e.iter().enumerate() {
                if let Some(v) = pow_of(i, k) {
                    coeff = coeff * v;
                    ne[i] = 0;
                }
            }
            p.add_term(ne, coeff);
        }
        p
    }

    /// Weighted degree range `(min, max)` of the support; `None` for zero.
    pub fn degree_range(&self, weights: &[i64]) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|e| weighted_degree(e, weights));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    /// Drops all terms with weighted degree above `max`.
    pub fn truncate(&self, weights: &[i64], max: i64) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| weighted_degree(e, weights) <= max)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated at weighted degree `max`.
    pub fn mul_truncated(&self, rhs: &Self, weights: &[i64], max: i64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, ca) in &self.terms {
            let da = weighted_degree(a, weights);
            for (b, cb) in &rhs.terms {
                if da + weighted_degree(b, weights) > max {
                    continue;
                }
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Substitutes polynomials for the variables: `x_i ↦ images[i]`. All
    /// exponents of `self` must be nonnegative; the images share an arity.
    pub fn compose(&self, images: &[LaurentPoly<C>]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let out_vars = images.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<LaurentPoly<C>>> =
            images.iter().map(|_| vec![LaurentPoly::one(out_vars)]).collect();
        let mut out = LaurentPoly::zero(out_vars);
        for (e, c) in &self.terms {
            let mut t = LaurentPoly::constant(out_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                assert!(k >= 0, "compose needs nonnegative exponents");
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient by the binomial `1 - x^m`, if it divides `self`.
    pub fn divide_by_binomial(&self, m: &[i64]) -> Option<Self> {
        debug_assert!(m.iter().any(|&x| x != 0));
        // Group monomials into cosets e + Z·m; each coset is a univariate
        // Laurent polynomial in t = x^m.
        let g = m.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        let step: Vec<i64> = m.iter().map(|x| x / g).collect();
        let lead = step.iter().position(|&x| x != 0).expect("nonzero binomial");
        let mut cosets: BTreeMap<Monomial, BTreeMap<i64, C>> = BTreeMap::new();
        for (e, c) in &self.terms {
            // position along the primitive direction, then along m
            let t = e[lead].div_euclid(step[lead]);
            let base: Monomial = e.iter().zip(&step).map(|(x, s)| x - t * s).collect();
            let (k, r) = (t.div_euclid(g), t.rem_euclid(g));
            let key: Monomial = base.iter().zip(&step).map(|(x, s)| x + r * s).collect();
            cosets.entry(key).or_default().insert(k, c.clone());
        }
        let mut out = Self::zero(self.nvars);
        for (base, series) in cosets {
            // p(t) = (1 - t) q(t): q_k = sum_{j <= k} p_j, and the total must vanish.
            let lo = *series.keys().next().unwrap();
            let hi = *series.keys().next_back().unwrap();
            let mut acc = C::zero();
            for k in lo..hi {
                if let Some(c) = series.get(&k) {
                    acc = acc + c.clone();
                }
                if !acc.is_zero() {
                    let e = base.iter().zip(m).map(|(b, s)| b + k * s).collect();
                    out.add_term(e, acc.clone());
                }
            }
            acc = acc + series.get(&hi).cloned().unwrap_or_else(C::zero);
            if !acc.is_zero() {
                return None;
            }
        }
        Some(out)
    }
}

pub(crate) fn weighted_degree(e: &[i64], weights: &[i64]) -> i64 {
    e.iter().zip(weights).map(|(a, w)| a * w).sum()
}

impl<C: Coefficient> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = LaurentPoly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn neg(self) -> LaurentPoly<C> {
        self.scale(&-C::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coefficient + fmt::Display> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["u", "T1", "T2", "T3", "T4", "T5"];
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (j, &k) in e.iter().enumerate() {
                if k != 0 {
                    let name = names.get(j).copied().unwrap_or("x");
                    write!(f, "*{name}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type P = LaurentPoly<BigInt>;

    fn poly(nvars: usize, terms: &[(Vec<i64>, i64)]) -> P {
        P::from_terms(nvars, terms.iter().map(|(e, c)| (e.clone(), BigInt::from(*c)))).unwrap()
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = poly(1, &[(vec![1], 2), (vec![-1], 1)]);
        let q = poly(1, &[(vec![1], -2)]);
        let s = &p + &q;
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&[-1]), BigInt::from(1));
    }

    #[test]
    fn binomial_division() {
        // 1 - x^3 = (1 - x)(1 + x + x^2)
        let p = poly(1, &[(vec![0], 1), (vec![3], -1)]);
        let q = p.divide_by_binomial(&[1]).unwrap();
        assert_eq!(q, poly(1, &[(vec![0], 1), (vec![1], 1), (vec![2], 1)]));
        // 1 + x is not divisible by 1 - x
        assert!(poly(1, &[(vec![0], 1), (vec![1], 1)]).divide_by_binomial(&[1]).is_none());
        // two variables, step (2,-1): x^{-1}y^3 - x y^2 = -x^{-1}y^3 (x^2 y^{-1} - 1)
        let p = poly(2, &[(vec![-1, 3], 1), (vec![1, 2], -1)]);
        let q = p.divide_by_binomial(&[2, -1]).unwrap();
        assert_eq!(&q * &poly(2, &[(vec![0, 0], 1), (vec![2, -1], -1)]), p);
    }

    #[test]
    fn binomial_division_non_primitive_step() {
        // 1 - x^4 divided by 1 - x^2 is 1 + x^2
        let p = poly(1, &[(vec![0], 1), (vec![4], -1)]);
        let q = p.divide_by_binomial(&[2]).unwrap();
        assert_eq!(q, poly(1, &[(vec![0], 1), (vec![2], 1)]));
        // x - x^3 = x(1 - x^2)
        let p = poly(1, &[(vec![1], 1), (vec![3], -1)]);
        assert_eq!(p.divide_by_binomial(&[2]).unwrap(), poly(1, &[(vec![1], 1)]));
        // 1 - x is not a multiple of 1 - x^2
        assert!(poly(1, &[(vec![0], 1), (vec![1], -1)]).divide_by_binomial(&[2]).is_none());
    }

    fn small_poly() -> impl Strategy<Value = P> {
        proptest::collection::vec((proptest::collection::vec(-2i64..3, 2), -3i64..4), 0..4)
            .prop_map(|ts| poly(2, &ts))
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn division_inverts_multiplication(a in small_poly(), m0 in -2i64..3, m1 in 1i64..3) {
            let bin = poly(2, &[(vec![0, 0], 1), (vec![m0, m1], -1)]);
            let prod = &a * &bin;
            prop_assert_eq!(prod.divide_by_binomial(&[m0, m1]).unwrap(), a);
        }
    }
}
