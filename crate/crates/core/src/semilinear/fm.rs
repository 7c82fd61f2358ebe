//! Fourier–Motzkin elimination over Q with exact strictness tracking.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Constraint, Relation};
use crate::exactcore::{int, Rational};

/// Interval constraint on `key·x` collected from constraints whose
/// coefficient vectors are parallel to `key`.
#[derive(Default)]
struct Bucket {
    eq: Option<Rational>,
    lo: Option<(Rational, bool)>,
    hi: Option<(Rational, bool)>,
}

fn tighten_lo(cur: &mut Option<(Rational, bool)>, v: Rational, strict: bool) {
    match cur {
        Some((w, s)) if *w > v || (*w == v && *s) => {}
        Some((w, s)) if *w == v => *s = strict,
        _ => *cur = Some((v, strict)),
    }
}

fn tighten_hi(cur: &mut Option<(Rational, bool)>, v: Rational, strict: bool) {
    match cur {
        Some((w, s)) if *w < v || (*w == v && *s) => {}
        Some((w, s)) if *w == v => *s = strict,
        _ => *cur = Some((v, strict)),
    }
}

fn within(v: &Rational, lo: &Option<(Rational, bool)>, hi: &Option<(Rational, bool)>) -> bool {
    let lo_ok = match lo {
        Some((l, true)) => v > l,
        Some((l, false)) => v >= l,
        None => true,
    };
    let hi_ok = match hi {
        Some((h, true)) => v < h,
        Some((h, false)) => v <= h,
        None => true,
    };
    lo_ok && hi_ok
}

/// Removes trivially true, duplicate and dominated constraints; merges
/// opposite inequalities that pin a value into an equality. `None` means a
/// contradiction was found (the system is certainly empty). `Some` does not
/// promise feasibility.
pub(crate) fn simplify(cons: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut buckets: BTreeMap<Vec<BigInt>, Bucket> = BTreeMap::new();
    for c in cons {
        if let Some(t) = c.constant_truth() {
            if !t {
                return None;
            }
            continue;
        }
        let positive = c
            .coeffs()
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_positive());
        let (key, sign) = if positive {
            (c.coeffs().to_vec(), 1)
        } else {
            (c.coeffs().iter().map(|x| -x).collect(), -1)
        };
        let b = buckets.entry(key).or_default();
        // With t = key·x: constraint reads sign·t + c REL 0.
        let k = c.constant().clone();
        match (c.relation(), sign) {
            (Relation::Eq, _) => {
                let v = if sign > 0 { -k } else { k };
                match &b.eq {
                    Some(w) if *w != v => return None,
                    _ => b.eq = Some(v),
                }
            }
            (rel, 1) => tighten_lo(&mut b.lo, -k, rel == Relation::Gt),
            (rel, _) => tighten_hi(&mut b.hi, k, rel == Relation::Gt),
        }
    }
    let mut out = Vec::new();
    for (key, b) in buckets {
        let neg: Vec<BigInt> = key.iter().map(|x| -x).collect();
        if let Some(v) = b.eq {
            if !within(&v, &b.lo, &b.hi) {
                return None;
            }
            out.push(Constraint::new(key, -v, Relation::Eq));
            continue;
        }
        if let (Some((l, ls)), Some((h, hs))) = (&b.lo, &b.hi) {
            if l > h {
                return None;
            }
            if l == h {
                if *ls || *hs {
                    return None;
                }
                out.push(Constraint::new(key, -l.clone(), Relation::Eq));
                continue;
            }
        }
        if let Some((l, strict)) = b.lo {
            let rel = if strict { Relation::Gt } else { Relation::Ge };
            out.push(Constraint::new(key.clone(), -l, rel));
        }
        if let Some((h, strict)) = b.hi {
            let rel = if strict { Relation::Gt } else { Relation::Ge };
            out.push(Constraint::new(neg, h, rel));
        }
    }
    Some(out)
}

/// `p·a + q·b` for constraints `a`, `b` with integer multipliers `p, q > 0`
/// (or `q` of any sign when `b` is an equality).
fn combine(a: &Constraint, p: &BigInt, b: &Constraint, q: &BigInt, rel: Relation) -> Constraint {
    let coeffs = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| p * x + q * y)
        .collect();
    let constant = a.constant() * Rational::from_integer(p.clone())
        + b.constant() * Rational::from_integer(q.clone());
    Constraint::new(coeffs, constant, rel)
}

/// Eliminates variable `j`: the result is a system not involving `x_j`
/// whose solution set is the projection of the input along `x_j`.
pub(crate) fn eliminate(cons: &[Constraint], j: usize) -> Vec<Constraint> {
    if let Some(e) = cons
        .iter()
        .find(|c| c.relation() == Relation::Eq && !c.coeffs()[j].is_zero())
    {
        let a = e.coeffs()[j].clone();
        let (p, s) = if a.is_positive() { (a, BigInt::one()) } else { (-a, -BigInt::one()) };
        return cons
            .iter()
            .filter(|c| !std::ptr::eq(*c, e))
            .map(|c| {
                let b = &c.coeffs()[j];
                if b.is_zero() {
                    c.clone()
                } else {
                    // p·c − (s·b)·e kills x_j since e has coefficient s·p there.
                    combine(c, &p, e, &(-(&s * b)), c.relation())
                }
            })
            .collect();
    }
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut out = Vec::new();
    for c in cons {
        let a = &c.coeffs()[j];
        if a.is_positive() {
            lowers.push(c);
        } else if a.is_negative() {
            uppers.push(c);
        } else {
            out.push(c.clone());
        }
    }
    for l in &lowers {
        for u in &uppers {
            let a = l.coeffs()[j].clone();
            let b = -u.coeffs()[j].clone();
            let rel = if l.relation() == Relation::Gt || u.relation() == Relation::Gt {
                Relation::Gt
            } else {
                Relation::Ge
            };
            out.push(combine(l, &b, u, &a, rel));
        }
    }
    out
}

/// Successive projections: `systems[k]` involves only `x_0..x_{k-1}`, with
/// `systems[n]` the simplified input. `None` if the system is empty.
pub(crate) fn tower(n: usize, cons: &[Constraint]) -> Option<Vec<Vec<Constraint>>> {
    let mut systems = vec![Vec::new(); n + 1];
    let mut cur = simplify(cons.to_vec())?;
    for k in (0..n).rev() {
        let next = simplify(eliminate(&cur, k))?;
        systems[k + 1] = cur;
        cur = next;
    }
    systems[0] = cur;
    Some(systems)
}

pub(crate) fn is_empty(n: usize, cons: &[Constraint]) -> bool {
    let Some(mut cur) = simplify(cons.to_vec()) else {
        return true;
    };
    for k in (0..n).rev() {
        if cur.is_empty() {
            return false;
        }
        match simplify(eliminate(&cur, k)) {
            Some(next) => cur = next,
            None => return true,
        }
    }
    false
}

/// The fiber of variable `k` over a point of the earlier coordinates.
pub(crate) enum Fiber {
    Empty,
    Point(Rational),
    Range {
        lo: Option<(Rational, bool)>,
        hi: Option<(Rational, bool)>,
    },
}

/// Fiber over `prefix` (values of `x_0..x_{k-1}`) of the constraints in
/// `system` that involve `x_k`; coefficients beyond `k` must vanish.
pub(crate) fn fiber(system: &[Constraint], k: usize, prefix: &[Rational]) -> Fiber {
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    let mut point: Option<Rational> = None;
    for c in system {
        let a = &c.coeffs()[k];
        let rest = c.coeffs()[..k]
            .iter()
            .zip(prefix)
            .filter(|(x, _)| !x.is_zero())
            .fold(c.constant().clone(), |acc, (x, y)| acc + y * x);
        if a.is_zero() {
            if !c.relation().holds(&rest) {
                return Fiber::Empty;
            }
            continue;
        }
        let v = -rest / Rational::from_integer(a.clone());
        match c.relation() {
            Relation::Eq => match &point {
                Some(w) if *w != v => return Fiber::Empty,
                _ => point = Some(v),
            },
            rel => {
                let strict = rel == Relation::Gt;
                if a.is_positive() {
                    tighten_lo(&mut lo, v, strict);
                } else {
                    tighten_hi(&mut hi, v, strict);
                }
            }
        }
    }
    if let Some(v) = point {
        return if within(&v, &lo, &hi) { Fiber::Point(v) } else { Fiber::Empty };
    }
    if let (Some((l, ls)), Some((h, hs))) = (&lo, &hi) {
        if l > h || (l == h && (*ls || *hs)) {
            return Fiber::Empty;
        }
        if l == h {
            return Fiber::Point(l.clone());
        }
    }
    Fiber::Range { lo, hi }
}

/// A simple rational inside a nonempty fiber.
pub(crate) fn pick(f: &Fiber) -> Option<Rational> {
    match f {
        Fiber::Empty => None,
        Fiber::Point(v) => Some(v.clone()),
        Fiber::Range { lo, hi } => Some(match (lo, hi) {
            (None, None) => Rational::zero(),
            (Some((l, s)), None) => {
                if *s {
                    l.floor() + int(1)
                } else {
                    l.clone()
                }
            }
            (None, Some((h, s))) => {
                if *s {
                    h.ceil() - int(1)
                } else {
                    h.clone()
                }
            }
            (Some((l, ls)), Some((h, hs))) => {
                // Prefer an integer strictly inside, then a closed endpoint.
                let c = if *ls { l.floor() + int(1) } else { l.ceil() };
                let inside = if *hs { &c < h } else { &c <= h };
                if inside {
                    c
                } else if !*ls {
                    l.clone()
                } else if !*hs {
                    h.clone()
                } else {
                    (l + h) / int(2)
                }
            }
        }),
    }
}

pub(crate) fn sample_point(n: usize, cons: &[Constraint]) -> Option<Vec<Rational>> {
    let systems = tower(n, cons)?;
    let mut p = Vec::with_capacity(n);
    for k in 0..n {
        let v = pick(&fiber(&systems[k + 1], k, &p))?;
        p.push(v);
    }
    Some(p)
}
