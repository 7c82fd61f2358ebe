use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::exactcore::{int, rat, IntLaurent};
use crate::semilinear::{Cell, Constraint, SemilinearSet};

fn set(n: usize, cons: Vec<Constraint>) -> SemilinearSet {
    SemilinearSet::new(n, vec![Cell::new(n, cons).unwrap()]).unwrap()
}

fn rf(root: u64, num: &[(&[i64], i64)], den: &[(&[i64], u32)]) -> RationalFunctionQT {
    let nv = num[0].0.len();
    let num = IntLaurent::from_terms(nv, num.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c)))).unwrap();
    let den: BTreeMap<Vec<i64>, u32> = den.iter().map(|(w, k)| (w.to_vec(), *k)).collect();
    RationalFunctionQT::new(root, num, den).unwrap()
}

fn agrees_with_enumeration(delta: &SemilinearSet, h0: &LinearFunctional, hs: &[LinearFunctional], r: u64, d: i64) {
    let f = ev(delta, h0, hs, r).unwrap();
    let (root, direct) = ev_truncated(delta, h0, hs, r, d).unwrap();
    assert_eq!(f.root(), root);
    let weights = vec![-1; 1 + hs.len()];
    assert_eq!(f.series_expand(&weights, d).unwrap(), direct, "{f}");
}

#[test]
fn half_line() {
    let delta = set(1, vec![Constraint::ge(&[1], int(0))]);
    let f = ev(&delta, &LinearFunctional::from_i64(&[-1], 0), &[], 1).unwrap();
    // Q / (Q - 1) = 1 / (1 - u^-1)
    assert!(f.equivalent(&rf(1, &[(&[0], 1)], &[(&[-1], 1)])).unwrap());
}

#[test]
fn bounded_interval() {
    let delta = set(1, vec![Constraint::ge(&[1], int(0)), Constraint::ge(&[-1], int(2))]);
    let f = ev(&delta, &LinearFunctional::from_i64(&[-1], 0), &[], 1).unwrap();
    assert!(f.equivalent(&rf(1, &[(&[0], 1), (&[-1], 1), (&[-2], 1)], &[])).unwrap());
    assert!(f.denominator().is_empty());
}

#[test]
fn one_power_variable() {
    let delta = set(1, vec![Constraint::ge(&[1], int(0))]);
    let h = LinearFunctional::from_i64(&[-1], 0);
    let f = ev(&delta, &h, std::slice::from_ref(&h), 1).unwrap();
    // QT / (QT - 1)
    assert!(f.equivalent(&rf(1, &[(&[0, 0], 1)], &[(&[-1, -1], 1)])).unwrap());
}

#[test]
fn wedge_needs_congruence_split() {
    // 0 ≤ 2y ≤ x
    let delta = set(2, vec![Constraint::ge(&[0, 1], int(0)), Constraint::ge(&[1, -2], int(0))]);
    let h0 = LinearFunctional::from_i64(&[-1, -1], 0);
    let (f, stats) = ev_with_stats(&delta, &h0, &[], 1).unwrap();
    assert!(stats.congruence_splits >= 1);
    // Σ_y Σ_{x ≥ 2y} Q^{-x-y} = 1/((1 - u^-1)(1 - u^-3))
    assert!(f.equivalent(&rf(1, &[(&[0], 1)], &[(&[-1], 1), (&[-3], 1)])).unwrap());
    agrees_with_enumeration(&delta, &h0, &[], 1, 15);
}

#[test]
fn refined_lattice() {
    let delta = set(1, vec![Constraint::ge(&[1], int(0))]);
    let f = ev(&delta, &LinearFunctional::from_i64(&[-1], 0), &[], 2).unwrap();
    assert_eq!(f.root(), 2);
    assert!(f.equivalent(&rf(2, &[(&[0], 1)], &[(&[-1], 1)])).unwrap());
}

#[test]
fn divergent_data_is_rejected() {
    let delta = set(1, vec![Constraint::ge(&[1], int(0))]);
    let e = ev(&delta, &LinearFunctional::from_i64(&[1], 0), &[], 1).unwrap_err();
    assert!(matches!(e, Error::Convergence(_)));
    let e = ev(
        &delta,
        &LinearFunctional::from_i64(&[-2], 0),
        &[LinearFunctional::from_i64(&[1], 0)],
        1,
    )
    .unwrap_err();
    assert!(matches!(e, Error::Convergence(_)));
}

#[test]
fn not_expandable_direction() {
    let f = rf(1, &[(&[0, 0], 1)], &[(&[1, -1], 1)]);
    assert!(matches!(f.series_expand(&[-1, -1], 4), Err(Error::NotExpandable(_))));
}

#[test]
fn flat_and_zero_degree_directions() {
    // 0 ≤ x ≤ 3, y ≥ 0 with weight only on y; and a zero-degree character on x.
    let delta = set(
        2,
        vec![Constraint::ge(&[1, 0], int(0)), Constraint::ge(&[-1, 0], int(3)), Constraint::ge(&[0, 1], int(0))],
    );
    agrees_with_enumeration(&delta, &LinearFunctional::from_i64(&[0, -1], 0), &[], 1, 12);
    agrees_with_enumeration(
        &delta,
        &LinearFunctional::from_i64(&[1, -1], 0),
        &[LinearFunctional::from_i64(&[-1, -1], 0)],
        1,
        12,
    );
}

#[test]
fn strict_and_rational_data() {
    let delta = set(
        2,
        vec![Constraint::gt(&[1, 0], rat(-1, 3)), Constraint::gt(&[-1, 3], int(1)), Constraint::ge(&[0, -1], int(4))],
    );
    let h0 = LinearFunctional::new(vec![rat(-1, 2), int(-1)], rat(1, 3));
    agrees_with_enumeration(&delta, &h0, &[], 2, 14);
}

#[test]
fn additivity_over_disjoint_union() {
    let a = set(1, vec![Constraint::ge(&[1], int(0)), Constraint::ge(&[-1], int(2))]);
    let b = set(1, vec![Constraint::gt(&[1], int(-2))]);
    let h0 = LinearFunctional::from_i64(&[-1], 0);
    let u = a.union(&b).unwrap();
    let sum = ev(&a, &h0, &[], 1).unwrap().add(&ev(&b, &h0, &[], 1).unwrap()).unwrap();
    assert!(ev(&u, &h0, &[], 1).unwrap().equivalent(&sum).unwrap());
}

#[test]
fn scaled_integer_model() {
    // Σ over ((1/r)Z)^n ∩ Δ equals Σ over Z^n ∩ rΔ of h(y / r).
    let delta = set(2, vec![Constraint::ge(&[1, 0], int(0)), Constraint::ge(&[-1, 2], rat(1, 2))]);
    let delta = delta.intersect(&set(2, vec![Constraint::ge(&[0, 1], int(0))])).unwrap();
    let h0 = LinearFunctional::from_i64(&[-1, -2], 0);
    let h1 = LinearFunctional::from_i64(&[0, -1], 0);
    for r in 1..=3u64 {
        let rr = int(r as i64);
        let scaled = SemilinearSet::new(
            2,
            delta.cells().iter().map(|c| crate::gamma_classes::scale_cell(c, &rr)).collect(),
        )
        .unwrap();
        let div = |h: &LinearFunctional| {
            LinearFunctional::new(h.coeffs.iter().map(|a| a / &rr).collect(), h.constant.clone())
        };
        let a = ev(&delta, &h0, std::slice::from_ref(&h1), r).unwrap();
        let b = ev(&scaled, &div(&h0), &[div(&h1)], 1).unwrap();
        assert!(a.equivalent(&b).unwrap(), "r = {r}");
    }
}

#[test]
fn three_dimensional_simplex_cone() {
    let delta = set(
        3,
        vec![
            Constraint::ge(&[1, 0, 0], int(0)),
            Constraint::ge(&[-1, 1, 0], int(0)),
            Constraint::ge(&[0, -1, 2], int(0)),
        ],
    );
    let h0 = LinearFunctional::from_i64(&[0, 0, -1], 0);
    let h1 = LinearFunctional::from_i64(&[-1, 0, 0], 0);
    agrees_with_enumeration(&delta, &h0, &[h1], 1, 12);
}

#[test]
fn empty_domain_gives_zero() {
    let delta = set(1, vec![Constraint::gt(&[1], rat(-1, 2)), Constraint::gt(&[-1], rat(1, 2))]);
    let f = ev(&delta, &LinearFunctional::from_i64(&[-1], 0), &[], 1).unwrap();
    assert!(f.is_zero());
}

fn arb_problem() -> impl Strategy<Value = (SemilinearSet, LinearFunctional, Vec<LinearFunctional>, u64)> {
    (1usize..=3).prop_flat_map(|n| {
        let row = (proptest::collection::vec(-2i64..=2, n), -3i64..=3, 1i64..=2, any::<bool>());
        (
            proptest::collection::vec(-2i64..=1, n),
            proptest::collection::vec(row, 0..3),
            proptest::collection::vec(1i64..=3, n),
            proptest::collection::vec(0i64..=2, n),
            1u64..=2,
            any::<bool>(),
        )
            .prop_map(move |(lows, rows, w0, w1, r, with_t)| {
                let mut cons = Vec::new();
                for (i, lo) in lows.iter().enumerate() {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    cons.push(Constraint::ge(&e, int(-lo)));
                }
                for (a, c, den, strict) in rows {
                    let k = rat(c, den);
                    cons.push(if strict { Constraint::gt(&a, k) } else { Constraint::ge(&a, k) });
                }
                let delta = set(n, cons);
                let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
                let h0 = LinearFunctional::from_i64(&neg(&w0), 0);
                let hs = if with_t { vec![LinearFunctional::from_i64(&neg(&w1), 0)] } else { vec![] };
                (delta, h0, hs, r)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_enumeration((delta, h0, hs, r) in arb_problem()) {
        let f = ev(&delta, &h0, &hs, r).unwrap();
        let (root, direct) = ev_truncated(&delta, &h0, &hs, r, 10).unwrap();
        prop_assert_eq!(f.root(), root);
        let weights = vec![-1; 1 + hs.len()];
        prop_assert_eq!(f.series_expand(&weights, 10).unwrap(), direct);
    }
}
