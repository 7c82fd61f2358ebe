//! The two Euler characteristics of semilinear sets.
//!
//! `χ` is the o-minimal Euler characteristic: a relatively open cell of
//! dimension `d` counts `(-1)^d`. `χ'` is its stabilised truncation
//! `lim_r χ(S ∩ [-r, r]^n)`. Both are computed from the same cylindrical
//! decomposition. Every cylindrical cell `P` is a relatively open convex
//! polyhedron; writing its closure as `L × P_0` with `L` the lineality space
//! and `P_0` pointed, `χ'(P) = (-1)^(dim P - dim L)` when `P_0` is bounded and
//! `0` otherwise.

use crate::exactcore::Rational;
use crate::semilinear::{CylCell, SemilinearSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EulerPair {
    pub chi: i64,
    pub chi_prime: i64,
}

fn sign(d: usize) -> i64 {
    if d.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn chi_prime_cell(c: &CylCell) -> i64 {
    let cell = c.to_cell();
    if !cell.recession_is_linear() {
        return 0;
    }
    sign(c.dim() - cell.lineality_dim())
}

pub fn chi(s: &SemilinearSet) -> i64 {
    s.cylindrical_decomposition()
        .iter()
        .map(|c| sign(c.dim()))
        .sum()
}

pub fn chi_prime(s: &SemilinearSet) -> i64 {
    s.cylindrical_decomposition().iter().map(chi_prime_cell).sum()
}

pub fn euler_pair(s: &SemilinearSet) -> EulerPair {
    let cells = s.cylindrical_decomposition();
    EulerPair {
        chi: cells.iter().map(|c| sign(c.dim())).sum(),
        chi_prime: cells.iter().map(chi_prime_cell).sum(),
    }
}

/// The pair together with the grade (ambient dimension).
pub fn euler_graded(s: &SemilinearSet) -> (EulerPair, usize) {
    (euler_pair(s), s.dim_ambient())
}

/// `χ(S ∩ [-r, r]^n)`; equals `χ'(S)` once `r` is large.
pub fn chi_prime_truncated(s: &SemilinearSet, r: &Rational) -> i64 {
    chi(&s.truncate(r))
}
