//! Igusa integrals `∫_{O^n} |f|^s` assembled from strata: each stratum
//! contributes `Q^γ (q-1)^(n_i) |X_i| ev(Δ_i)`, uniformly in the residue
//! field size `q` and the ramification `r` (`Q = q^r`).
//!
//! Output convention: `u = Q^(1/m)`, `T_i = Q^(-s_i)` so that
//! `|f_i|^(s_i) = T_i^(val f_i)`, exponents of `T_i` in units of `1/m`, and
//! `measure(O^n) = 1`. The per-stratum sum is normalised to the maximal
//! ideal; the factor `q^(MEASURE_SHIFT·n)` converting to `measure(O^n) = 1`
//! is pinned by [`calibrate_measure_shift`].

mod oracle;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub use oracle::{
    oracle_budget, oracle_padic, oracle_padic_with_budget, IntPolynomial, DEFAULT_ORACLE_BUDGET, ORACLE_BUDGET_ENV,
};

use crate::denefsum::{ev, LinearFunctional, RationalFunctionQT};
use crate::error::{check_dim, Error, Result};
use crate::exactcore::{int, IntLaurent, Rational};
use crate::motivic::{res_poly, ResPoly};
use crate::semilinear::{Cell, Constraint, SemilinearSet};

/// Exponent of `q^n` applied once at the end of [`eval_igusa`].
pub const MEASURE_SHIFT: i64 = -1;

pub const CONVENTION: &str =
    "u = Q^(1/m), Q = q^r; T_i = Q^(-s_i) with exponents in units of 1/m; measure(O^n) = 1; factor q^(-n) applied";

#[derive(Debug, Clone, PartialEq)]
pub struct IgusaDatum {
    /// Point count `|X_i|` as a polynomial in `q`.
    pub res: ResPoly,
    pub gamma: Rational,
    pub rv_dim: usize,
    pub delta: SemilinearSet,
    pub h0: LinearFunctional,
    pub hs: Vec<LinearFunctional>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IgusaData {
    pub n: usize,
    pub k: usize,
    pub strata: Vec<IgusaDatum>,
}

impl IgusaData {
    pub fn new(n: usize, k: usize, strata: Vec<IgusaDatum>) -> Result<Self> {
        for s in &strata {
            if s.hs.len() != k {
                return Err(Error::invalid(format!("stratum has {} s-functionals, expected {k}", s.hs.len())));
            }
            if s.res.nvars() != 1 {
                return Err(Error::invalid("residue count must be univariate in q"));
            }
            let d = s.delta.dim_ambient();
            check_dim(d, s.h0.dim())?;
            for h in &s.hs {
                check_dim(d, h.dim())?;
            }
            if !s.delta.is_bounded_below() {
                return Err(Error::invalid("stratum polyhedron must be bounded below in every coordinate"));
            }
        }
        Ok(IgusaData { n, k, strata })
    }
}

fn orthant(n: usize, strict: &[bool]) -> SemilinearSet {
    let cons = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            if strict[i] {
                Constraint::gt(&e, int(0))
            } else {
                Constraint::ge(&e, int(0))
            }
        })
        .collect();
    SemilinearSet::new(n, vec![Cell::new(n, cons).expect("consistent dims")]).expect("consistent dims")
}

/// Data for `f = Π x_j^(a_j)`: one stratum over `Γ_{≥0}^n`.
pub fn monomial_data(exps: &[u32]) -> Result<IgusaData> {
    if exps.iter().all(|&a| a == 0) {
        return Err(Error::invalid("exponent vector must be nonzero"));
    }
    let n = exps.len();
    let stratum = IgusaDatum {
        res: res_poly(&[(0, 1)]),
        gamma: Rational::zero(),
        rv_dim: n,
        delta: orthant(n, &vec![false; n]),
        h0: LinearFunctional::from_i64(&vec![-1; n], 0),
        hs: vec![LinearFunctional::from_i64(&exps.iter().map(|&a| -(a as i64)).collect::<Vec<_>>(), 0)],
    };
    IgusaData::new(n, 1, vec![stratum])
}

fn det2(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Data for a product of pairwise non-proportional linear forms in at most
/// two variables. With `v = min(val x, val y)`, a point reduces either off
/// every line `ℓ_j = 0` (`q + 1 - k` projective classes, valuation `k·v`)
/// or onto exactly one of them (valuation `k·v + w`, `w > 0`).
pub fn linear_forms_data(forms: &[Vec<i64>]) -> Result<IgusaData> {
    let Some(first) = forms.first() else {
        return Err(Error::invalid("need at least one linear form"));
    };
    let n = first.len();
    if forms.iter().any(|f| f.len() != n) {
        return Err(Error::invalid("forms must share the number of variables"));
    }
    if forms.iter().any(|f| f.iter().all(|&c| c == 0)) {
        return Err(Error::invalid("zero linear form"));
    }
    match n {
        1 if forms.len() == 1 => monomial_data(&[1]),
        1 => Err(Error::invalid("linear forms in one variable are proportional")),
        2 => {
            for i in 0..forms.len() {
                for j in i + 1..forms.len() {
                    if det2(&forms[i], &forms[j]) == 0 {
                        return Err(Error::invalid(format!("forms {i} and {j} are proportional")));
                    }
                }
            }
            let k = forms.len() as i64;
            let mut strata = vec![IgusaDatum {
                res: res_poly(&[(1, 1), (0, 1 - k)]),
                gamma: Rational::zero(),
                rv_dim: 1,
                delta: orthant(1, &[false]),
                h0: LinearFunctional::from_i64(&[-2], 0),
                hs: vec![LinearFunctional::from_i64(&[-k], 0)],
            }];
            for _ in forms {
                strata.push(IgusaDatum {
                    res: res_poly(&[(0, 1)]),
                    gamma: Rational::zero(),
                    rv_dim: 2,
                    delta: orthant(2, &[false, true]),
                    h0: LinearFunctional::from_i64(&[-2, -1], 0),
                    hs: vec![LinearFunctional::from_i64(&[-k, -1], 0)],
                });
            }
            IgusaData::new(2, 1, strata)
        }
        _ => Err(Error::invalid("linear_forms_data supports at most two variables")),
    }
}

/// Whether `p` is a good prime for the forms: each form is nonzero mod `p`
/// and no two become proportional mod `p`.
pub fn is_good_prime(forms: &[Vec<i64>], p: u64) -> bool {
    let p = p as i64;
    let nonzero = forms.iter().all(|f| f.iter().any(|c| c.rem_euclid(p) != 0));
    let separated = forms.first().is_none_or(|f| f.len() != 2)
        || (0..forms.len()).all(|i| (i + 1..forms.len()).all(|j| det2(&forms[i], &forms[j]).rem_euclid(p) != 0));
    nonzero && separated
}

fn u_poly(nx: usize, e: i64, c: BigInt) -> IntLaurent {
    let mut m = vec![0; nx];
    m[0] = e;
    IntLaurent::monomial(m, c)
}

/// `p(q)` with `q = u^step`, in `nx` variables.
fn lift_res(p: &ResPoly, nx: usize, step: i64) -> IntLaurent {
    let mut out = IntLaurent::zero(nx);
    for (e, c) in p.terms() {
        out = &out + &u_poly(nx, e[0] * step, c.clone());
    }
    out
}

/// Common root: a multiple of every stratum root, of `r`, and clearing
/// the denominators of `m·γ_i`.
fn common_root(d: &IgusaData, r: u64, roots: &[u64]) -> u64 {
    let mut m = r;
    for (s, &mi) in d.strata.iter().zip(roots) {
        m = m.lcm(&mi);
        let den = (s.gamma.denom() * BigInt::from(r)).to_u64().expect("denominator fits");
        m = m.lcm(&den);
    }
    m
}

fn eval_with_shift(d: &IgusaData, r: u64, shift: i64) -> Result<RationalFunctionQT> {
    let nx = 1 + d.k;
    let sums = d
        .strata
        .iter()
        .map(|s| ev(&s.delta, &s.h0, &s.hs, r))
        .collect::<Result<Vec<_>>>()?;
    let roots: Vec<u64> = sums.iter().map(|f| f.root()).collect();
    let m = common_root(d, r, &roots);
    let step = (m / r) as i64;
    let gm = &u_poly(nx, step, BigInt::one()) - &IntLaurent::one(nx);
    let mut total = RationalFunctionQT::zero(m, nx);
    for (s, f) in d.strata.iter().zip(&sums) {
        let g = &s.gamma * Rational::from_integer(BigInt::from(m));
        let ge = g.to_integer().to_i64().ok_or_else(|| Error::invalid("gamma shift overflow"))?;
        let factor = &(&u_poly(nx, ge, BigInt::one()) * &gm.pow(s.rv_dim as u32)) * &lift_res(&s.res, nx, step);
        total = total.add(&f.with_root(m)?.mul_laurent(&factor))?;
    }
    let conv = u_poly(nx, step * shift * d.n as i64, BigInt::one());
    let total = total.mul_laurent(&conv);
    total.map_exponents(m, nx, |e| {
        let mut e = e.to_vec();
        for x in e.iter_mut().skip(1) {
            *x = -*x;
        }
        e
    })
}

/// The Igusa integral in the reported convention (see the module docs).
pub fn eval_igusa(d: &IgusaData, r: u64) -> Result<RationalFunctionQT> {
    eval_with_shift(d, r, MEASURE_SHIFT)
}

/// Coefficients of `T^0..T^max_m` of a one-parameter result at `q = p`
/// (unramified).
pub fn series_at_prime(f: &RationalFunctionQT, p: u64, max_m: usize) -> Result<Vec<Rational>> {
    if f.nvars() != 2 {
        return Err(Error::invalid("series_at_prime needs exactly one T variable"));
    }
    let m = f.root() as i64;
    let pr = Rational::from_integer(BigInt::from(p));
    let power = |e: i64| -> Result<Rational> {
        if e % m != 0 {
            return Err(Error::invalid("fractional power of q at r = 1"));
        }
        let k = e / m;
        Ok(if k >= 0 {
            num_traits::pow(pr.clone(), k as usize)
        } else {
            Rational::one() / num_traits::pow(pr.clone(), (-k) as usize)
        })
    };
    let t_exp = |e: i64| -> Result<i64> {
        if e % m != 0 {
            return Err(Error::invalid("fractional power of T at r = 1"));
        }
        Ok(e / m)
    };
    let mut num: BTreeMap<i64, Rational> = BTreeMap::new();
    for (e, c) in f.numerator().terms() {
        *num.entry(t_exp(e[1])?).or_insert_with(Rational::zero) += power(e[0])? * Rational::from_integer(c.clone());
    }
    let mut den: Vec<Rational> = vec![Rational::one()];
    for (w, &k) in f.denominator() {
        let (c, t) = (power(w[0])?, t_exp(w[1])?);
        if t < 0 {
            return Err(Error::NotExpandable("binomial with a negative power of T".into()));
        }
        for _ in 0..k {
            let mut next = vec![Rational::zero(); den.len() + t as usize];
            for (i, a) in den.iter().enumerate() {
                next[i] += a;
                next[i + t as usize] -= a * &c;
            }
            den = next;
        }
    }
    if den[0].is_zero() {
        return Err(Error::NotExpandable("denominator vanishes at T = 0".into()));
    }
    if num.keys().next().is_some_and(|&e| e < 0) {
        return Err(Error::NotExpandable("negative power of T in the numerator".into()));
    }
    let mut out = vec![Rational::zero(); max_m + 1];
    for i in 0..=max_m {
        let mut acc = num.get(&(i as i64)).cloned().unwrap_or_else(Rational::zero);
        for j in 1..=i.min(den.len() - 1) {
            acc -= &den[j] * &out[i - j];
        }
        out[i] = acc / &den[0];
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub success: bool,
    pub first_mismatch: Option<usize>,
    pub oracle: Vec<Rational>,
    pub formula: Vec<Rational>,
}

/// Compares the `T`-expansion of `eval_igusa(d, 1)` at `q = p` with the
/// p-adic oracle for `f`.
pub fn verify_against_oracle(d: &IgusaData, f: &IntPolynomial, p: u64, max_m: usize) -> Result<VerifyReport> {
    verify_with_shift(d, f, p, max_m, MEASURE_SHIFT)
}

fn verify_with_shift(d: &IgusaData, f: &IntPolynomial, p: u64, max_m: usize, shift: i64) -> Result<VerifyReport> {
    if d.k != 1 {
        return Err(Error::invalid("oracle verification needs k = 1"));
    }
    if f.nvars() != d.n {
        return Err(Error::DimensionMismatch {
            expected: d.n,
            found: f.nvars(),
        });
    }
    let formula = series_at_prime(&eval_with_shift(d, 1, shift)?, p, max_m)?;
    let oracle = oracle_padic(f, p, max_m)?;
    let first_mismatch = formula.iter().zip(&oracle).position(|(a, b)| a != b);
    Ok(VerifyReport {
        success: first_mismatch.is_none(),
        first_mismatch,
        oracle,
        formula,
    })
}

/// The exponent `e ∈ -2..=2` for which `q^(e·n)` makes `f = x` agree with
/// the oracle at `p = 5`.
pub fn calibrate_measure_shift() -> Result<i64> {
    let d = monomial_data(&[1])?;
    let f = IntPolynomial::monomial(&[1]);
    for e in -2..=2 {
        if verify_with_shift(&d, &f, 5, 6, e)?.success {
            return Ok(e);
        }
    }
    Err(Error::invalid("no measure shift reproduces the oracle"))
}

/// `T_i = 1` in every parameter: the total measure.
pub fn total_measure(f: &RationalFunctionQT) -> Result<RationalFunctionQT> {
    let vars: Vec<usize> = (1..f.nvars()).collect();
    f.at_unit(&vars)
}

/// Rewrites `(u, T)` exponents in `(q, t = q^(-s))` exponents, both in units
/// of `1/m`.
pub fn to_q_t(f: &RationalFunctionQT, r: u64) -> Result<RationalFunctionQT> {
    let r = r as i64;
    f.map_exponents(f.root(), f.nvars(), |e| e.iter().map(|x| x * r).collect())
}

/// The contribution of a single stratum.
pub fn stratum_contribution(d: &IgusaData, i: usize, r: u64) -> Result<RationalFunctionQT> {
    let s = d
        .strata
        .get(i)
        .ok_or(Error::InvalidIndex {
            index: i,
            dim: d.strata.len(),
        })?
        .clone();
    eval_igusa(&IgusaData::new(d.n, d.k, vec![s])?, r)
}
