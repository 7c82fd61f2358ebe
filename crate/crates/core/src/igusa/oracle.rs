use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactcore::Rational;

/// Polynomial with integer coefficients in `nvars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl IntPolynomial {
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, i64)>) -> Result<Self> {
        let mut p = IntPolynomial {
            nvars,
            terms: BTreeMap::new(),
        };
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: i64) {
        let slot = self.terms.entry(e.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    /// `Π x_i^(a_i)`.
    pub fn monomial(exps: &[u32]) -> Self {
        IntPolynomial {
            nvars: exps.len(),
            terms: BTreeMap::from([(exps.to_vec(), 1)]),
        }
    }

    pub fn linear_form(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut p = IntPolynomial {
            nvars: n,
            terms: BTreeMap::new(),
        };
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    /// Product of linear forms.
    pub fn product_of_forms(forms: &[Vec<i64>]) -> Result<Self> {
        let n = forms.first().map_or(0, |f| f.len());
        let mut p = IntPolynomial {
            nvars: n,
            terms: BTreeMap::from([(vec![0; n], 1)]),
        };
        for f in forms {
            if f.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: f.len(),
                });
            }
            p = p.mul(&IntPolynomial::linear_form(f));
        }
        Ok(p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = IntPolynomial {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.iter().zip(b).map(|(i, j)| i + j).collect(), x * y);
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i64)> {
        self.terms.iter()
    }

    /// Value at an integer point modulo `modulus` (< 2^62), in `[0, modulus)`.
    pub fn eval_mod(&self, x: &[i128], modulus: i128) -> i128 {
        let mut acc = 0i128;
        for (e, &c) in &self.terms {
            let mut t = (c as i128).rem_euclid(modulus);
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t * xi.rem_euclid(modulus) % modulus;
                }
            }
            acc = (acc + t) % modulus;
        }
        acc
    }
}

pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

/// Environment variable overriding the oracle budget.
pub const ORACLE_BUDGET_ENV: &str = "MOTINT_ORACLE_BUDGET";

pub fn oracle_budget() -> u128 {
    std::env::var(ORACLE_BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `c_m = measure{x ∈ Z_p^n : val f(x) = m}` for `m = 0..=max_m`, with the
/// default budget.
pub fn oracle_padic(f: &IntPolynomial, p: u64, max_m: usize) -> Result<Vec<Rational>> {
    oracle_padic_with_budget(f, p, max_m, oracle_budget())
}

/// Enumerates residue classes `a mod p^j`, refining a class only while
/// `f(a) ≡ 0 mod p^j` leaves its valuation undetermined. Each class whose
/// valuation is settled contributes `p^(-jn)`. `budget` caps the number of
/// classes evaluated.
pub fn oracle_padic_with_budget(f: &IntPolynomial, p: u64, max_m: usize, budget: u128) -> Result<Vec<Rational>> {
    if f.is_zero() {
        return Err(Error::invalid("oracle needs a nonzero polynomial"));
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let n = f.nvars();
    let pi = p as i128;
    let top = max_m + 1;
    let mut modulus: i128 = 1;
    for _ in 0..top {
        modulus = modulus
            .checked_mul(pi)
            .filter(|m| *m < (1i128 << 62))
            .ok_or_else(|| Error::invalid("p^(max_m+1) exceeds the 62-bit arithmetic range"))?;
    }
    // counts[m][j]: classes mod p^j on which val f = m
    let mut counts = vec![vec![0u64; top + 1]; top];
    let mut visited: u128 = 0;
    let children = (p as u128).pow(n as u32);
    // stack of (representative, level j, p^j)
    let mut stack: Vec<(Vec<i128>, usize, i128)> = vec![(vec![0; n], 0, 1)];
    while let Some((a, j, pj)) = stack.pop() {
        visited += children;
        if visited > budget {
            return Err(Error::BudgetExceeded {
                needed: visited,
                budget,
            });
        }
        let pj1 = pj * pi;
        let mut t = vec![0i128; n];
        loop {
            let x: Vec<i128> = a.iter().zip(&t).map(|(ai, ti)| ai + pj * ti).collect();
            let v = f.eval_mod(&x, modulus);
            if v % pj1 != 0 {
                let mut m = 0;
                let mut w = v;
                while w % pi == 0 {
                    w /= pi;
                    m += 1;
                }
                counts[m][j + 1] += 1;
            } else if j + 1 < top {
                stack.push((x, j + 1, pj1));
            }
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                t[k] += 1;
                if t[k] < pi {
                    break;
                }
                t[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    let pb = BigInt::from(p);
    Ok(counts
        .iter()
        .map(|row| {
            row.iter().enumerate().fold(Rational::zero(), |acc, (j, &c)| {
                if c == 0 {
                    acc
                } else {
                    acc + Rational::new(BigInt::from(c), num_traits::pow(pb.clone(), j * n))
                }
            })
        })
        .collect())
}
