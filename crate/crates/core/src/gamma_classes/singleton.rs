use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{lcm_denominators, Rational};

/// The class of the one-point set `{point}` in grade `point.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingletonClass {
    pub point: Vec<Rational>,
}

impl SingletonClass {
    pub fn new(point: Vec<Rational>) -> Self {
        SingletonClass { point }
    }

    pub fn dim(&self) -> usize {
        self.point.len()
    }

    /// Least common multiple of the coordinate denominators: the order of the
    /// point in `(Q/Z)^n`, invariant under `GL_n(Z) ⋉ Z^n`.
    pub fn order(&self) -> BigInt {
        lcm_denominators(&self.point)
    }
}

/// The subgroup `(1/m)Z` of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubgroupSpec {
    pub modulus: u64,
}

impl SubgroupSpec {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::invalid("subgroup modulus must be positive"));
        }
        Ok(SubgroupSpec { modulus })
    }

    pub fn contains(&self, a: &Rational) -> bool {
        (BigInt::from(self.modulus) % a.denom()).is_zero()
    }
}

/// Residues `N·a_i mod N`.
fn residues(p: &SingletonClass, n_mod: i64) -> Vec<i64> {
    let nn = BigInt::from(n_mod);
    p.point
        .iter()
        .map(|a| {
            let k = (a * Rational::from_integer(nn.clone())).to_integer();
            k.mod_floor(&nn).to_i64().expect("residue fits")
        })
        .collect()
}

/// Images of a residue vector under a generating set of `GL_n(Z)`:
/// adjacent transpositions, the sign change of `x_0` and the shear
/// `x_0 += x_1`.
fn neighbours(v: &[i64], n_mod: i64) -> Vec<Vec<i64>> {
    let n = v.len();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut w = v.to_vec();
        w.swap(i, i + 1);
        out.push(w);
    }
    if n >= 1 {
        let mut w = v.to_vec();
        w[0] = (-w[0]).rem_euclid(n_mod);
        out.push(w);
    }
    if n >= 2 {
        let mut w = v.to_vec();
        w[0] = (w[0] + w[1]).rem_euclid(n_mod);
        out.push(w);
    }
    out
}

fn orbit(start: Vec<i64>, n_mod: i64) -> HashSet<Vec<i64>> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for w in neighbours(&v, n_mod) {
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Whether `M·a + c = b` for some `M ∈ GL_n(Z)`, `c ∈ Z^n`.
pub fn singleton_equal(a: &SingletonClass, b: &SingletonClass) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let (na, nb) = (a.order(), b.order());
    if na != nb {
        return false;
    }
    let Some(n_mod) = na.to_i64() else {
        return false;
    };
    let target = residues(b, n_mod);
    let start = residues(a, n_mod);
    if start == target {
        return true;
    }
    orbit(start, n_mod).contains(&target)
}

/// Canonical orbit representative: the least residue vector of the orbit,
/// as a point with coordinates in `[0, 1)`.
pub fn orbit_representative(a: &SingletonClass) -> SingletonClass {
    let n_mod = a.order().to_i64().expect("denominator fits i64");
    let best = orbit(residues(a, n_mod), n_mod)
        .into_iter()
        .min()
        .expect("orbit contains its start");
    SingletonClass::new(
        best.into_iter()
            .map(|k| Rational::new(BigInt::from(k), BigInt::from(n_mod)))
            .collect(),
    )
}

/// `h_t([(a_1,…,a_n)] / e_0^n) = Π_i 1_t(a_i)`.
pub fn h_t(c: &SingletonClass, t: SubgroupSpec) -> i64 {
    c.point.iter().all(|a| t.contains(a)) as i64
}

/// `h_t` of the degree-zero normalisation of a monomial
/// `[p_1]·…·[p_j]·e_0^k`. Powers of `e_0` contribute 1, so only the
/// singleton factors are passed.
pub fn h_t_monomial(factors: &[SingletonClass], t: SubgroupSpec) -> i64 {
    factors.iter().map(|c| h_t(c, t)).product()
}

/// A finite class: a formal nonnegative combination of singletons, kept as
/// a multiset of orbit representatives (a complete invariant).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiniteClass {
    reps: BTreeMap<Vec<Rational>, u64>,
}

impl FiniteClass {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_points(points: &[SingletonClass]) -> Self {
        let mut c = Self::new();
        for p in points {
            c.insert(p);
        }
        c
    }

    pub fn insert(&mut self, p: &SingletonClass) {
        *self.reps.entry(orbit_representative(p).point).or_insert(0) += 1;
    }

    pub fn add(&self, other: &FiniteClass) -> FiniteClass {
        let mut out = self.clone();
        for (k, v) in &other.reps {
            *out.reps.entry(k.clone()).or_insert(0) += v;
        }
        out
    }

    pub fn size(&self) -> u64 {
        self.reps.values().sum()
    }

    pub fn h_t(&self, t: SubgroupSpec) -> i64 {
        self.reps
            .iter()
            .map(|(p, k)| h_t(&SingletonClass::new(p.clone()), t) * (*k as i64))
            .sum()
    }
}
