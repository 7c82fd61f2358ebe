use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::exactcore::{int, rat, IntMatrix};
use crate::semilinear::{Cell, Constraint, Relation, SemilinearSet};

fn cell(n: usize, cs: Vec<Constraint>) -> Cell {
    Cell::new(n, cs).unwrap()
}

fn set(n: usize, cs: Vec<Constraint>) -> SemilinearSet {
    cell(n, cs).to_set()
}

fn translation(domain: Cell, shift: Vec<Rational>) -> PiecewiseAffineMap {
    let n = domain.dim_ambient();
    PiecewiseAffineMap {
        pieces: vec![AffinePiece {
            domain,
            matrix: IntMatrix::identity(n),
            shift,
        }],
    }
}

#[test]
fn morphism_examples() {
    let x = SemilinearSet::open_interval(int(0), rat(1, 2));
    let y = SemilinearSet::open_interval(int(3), rat(7, 2));
    let f = translation(Cell::universe(1), vec![int(3)]);
    let rep = verify_morphism(&f, &x, &y, MorphismMode::Plain).unwrap();
    assert!(rep.valid, "{rep:?}");

    let dbl = PiecewiseAffineMap {
        pieces: vec![AffinePiece {
            domain: Cell::universe(1),
            matrix: IntMatrix::from_rows(&[vec![2]]).unwrap(),
            shift: vec![int(0)],
        }],
    };
    let rep = verify_morphism(
        &dbl,
        &SemilinearSet::open_interval(int(0), int(1)),
        &SemilinearSet::open_interval(int(0), int(2)),
        MorphismMode::Plain,
    )
    .unwrap();
    assert_eq!(rep.failure, Some(MorphismFailure::NotUnimodular { piece: 0 }));

    let swap = PiecewiseAffineMap {
        pieces: vec![AffinePiece {
            domain: Cell::universe(2),
            matrix: IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
            shift: vec![int(0), int(0)],
        }],
    };
    let all = SemilinearSet::universe(2);
    assert!(verify_morphism(&swap, &all, &all, MorphismMode::SumPreserving).unwrap().valid);
}

#[test]
fn morphism_counterexamples() {
    let x = SemilinearSet::open_interval(int(0), int(2));
    let y = SemilinearSet::open_interval(int(1), int(2));
    let f = translation(Cell::universe(1), vec![int(1)]);
    let rep = verify_morphism(&f, &x, &y, MorphismMode::Plain).unwrap();
    match rep.failure {
        Some(MorphismFailure::ImageOutside { point, .. }) => assert!(!y.contains(&point).unwrap()),
        other => panic!("unexpected {other:?}"),
    }
    let half = translation(Cell::universe(1), vec![rat(1, 2)]);
    let rep = verify_morphism(&half, &x, &x, MorphismMode::Plain).unwrap();
    assert_eq!(rep.failure, Some(MorphismFailure::ShiftNotIntegral { piece: 0 }));
    // shear is unimodular but does not preserve the coordinate sum
    let shear = PiecewiseAffineMap {
        pieces: vec![AffinePiece {
            domain: Cell::universe(2),
            matrix: IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap(),
            shift: vec![int(0), int(0)],
        }],
    };
    let all = SemilinearSet::universe(2);
    assert!(verify_morphism(&shear, &all, &all, MorphismMode::Plain).unwrap().valid);
    assert!(!verify_morphism(&shear, &all, &all, MorphismMode::SumPreserving).unwrap().valid);
}

#[test]
fn reflection_identifies_halves() {
    // x ↦ 2a − x with 2a = 1 sends (0, 1/2) onto (1/2, 1).
    let f = PiecewiseAffineMap {
        pieces: vec![AffinePiece {
            domain: Cell::universe(1),
            matrix: IntMatrix::from_rows(&[vec![-1]]).unwrap(),
            shift: vec![int(1)],
        }],
    };
    let x = SemilinearSet::open_interval(int(0), rat(1, 2));
    let y = SemilinearSet::open_interval(rat(1, 2), int(1));
    let rep = verify_morphism(&f, &x, &y, MorphismMode::Plain).unwrap();
    assert!(rep.valid);
    assert_eq!(invariants(&x), invariants(&y));
}

#[test]
fn singleton_examples() {
    let s = |v: &[Rational]| SingletonClass::new(v.to_vec());
    assert!(singleton_equal(&s(&[rat(1, 2)]), &s(&[rat(3, 2)])));
    assert!(singleton_equal(&s(&[rat(1, 2), rat(1, 3)]), &s(&[rat(1, 3), rat(1, 2)])));
    assert!(!singleton_equal(&s(&[rat(1, 2)]), &s(&[rat(1, 3)])));
    let t2 = SubgroupSpec::new(2).unwrap();
    assert_ne!(h_t(&s(&[rat(1, 2)]), t2), h_t(&s(&[rat(1, 3)]), t2));
    assert!(singleton_equal(&s(&[rat(1, 5)]), &s(&[rat(-1, 5)])));
    assert!(!singleton_equal(&s(&[rat(1, 5)]), &s(&[rat(2, 5)])));
    assert!(singleton_equal(&s(&[rat(1, 5), int(0)]), &s(&[rat(2, 5), int(0)])));
}

#[test]
fn h_t_examples() {
    let half = SingletonClass::new(vec![rat(1, 2)]);
    assert_eq!(h_t(&half, SubgroupSpec::new(2).unwrap()), 1);
    assert_eq!(h_t(&half, SubgroupSpec::new(1).unwrap()), 0);
    // [a][b]e_0 = [a][b][a+b] with a = b = 1/2
    let t = SubgroupSpec::new(2).unwrap();
    let lhs = h_t_monomial(&[half.clone(), half.clone()], t);
    let rhs = h_t_monomial(&[half.clone(), half.clone(), SingletonClass::new(vec![int(1)])], t);
    assert_eq!((lhs, rhs), (1, 1));
    assert!(SubgroupSpec::new(0).is_err());
}

#[test]
fn volume_examples() {
    assert_eq!(volume(&SemilinearSet::open_interval(int(0), rat(3, 2))).unwrap(), rat(3, 2));
    let tri = set(2, vec![Constraint::gt(&[1, 0], int(0)), Constraint::gt(&[0, 1], int(0)), Constraint::gt(&[-1, -1], int(1))]);
    assert_eq!(volume(&tri).unwrap(), rat(1, 2));
    assert_eq!(volume(&SemilinearSet::point(&[rat(1, 2)])).unwrap(), int(0));
    assert_eq!(volume(&SemilinearSet::interval(Some((int(0), false)), None)), Err(crate::Error::Unbounded));
    assert_eq!(volume(&SemilinearSet::point0()).unwrap(), int(1));
}

#[test]
fn lattice_count_examples() {
    assert_eq!(lattice_count(&SemilinearSet::closed_interval(int(0), int(2)), 1).unwrap(), 3);
    let tri = set(2, vec![Constraint::ge(&[1, 0], int(0)), Constraint::ge(&[0, 1], int(0)), Constraint::ge(&[-1, -1], int(2))]);
    assert_eq!(lattice_count(&tri, 1).unwrap(), 6);
    assert_eq!(lattice_count(&SemilinearSet::closed_interval(int(0), int(1)), 2).unwrap(), 3);
    assert!(lattice_count(&SemilinearSet::universe(1), 1).is_err());
}

#[test]
fn volume_param_examples() {
    // {0 < x < u}, parameter last
    let fam = set(2, vec![Constraint::gt(&[1, 0], int(0)), Constraint::gt(&[-1, 1], int(0))]);
    let ch = volume_param(&fam, 1).unwrap();
    assert_eq!(ch.len(), 1);
    assert!(ch[0].domain.contains(&[int(1)]) && !ch[0].domain.contains(&[int(0)]));
    assert_eq!(ch[0].eval(&rat(7, 3)), rat(7, 3));

    // {0 < x, 0 < y, x + y < u}
    let fam = set(3, vec![Constraint::gt(&[1, 0, 0], int(0)), Constraint::gt(&[0, 1, 0], int(0)), Constraint::gt(&[-1, -1, 1], int(0))]);
    let ch = volume_param(&fam, 2).unwrap();
    assert_eq!(ch.len(), 1);
    for u in [int(1), int(2), rat(7, 2)] {
        let fiber = fam.fix_coordinate(2, &u).unwrap();
        assert_eq!(ch[0].eval(&u), volume(&fiber).unwrap());
    }

    // {0 ≤ x ≤ u}: the point u = 0 merges into the chamber u ≥ 0
    let fam = set(2, vec![Constraint::ge(&[1, 0], int(0)), Constraint::ge(&[-1, 1], int(0))]);
    let ch = volume_param(&fam, 1).unwrap();
    assert_eq!(ch.len(), 1);
    assert!(ch[0].domain.contains(&[int(0)]));

    // {0 < x < 1, 0 < y < u} has value u
    let fam = set(3, vec![Constraint::gt(&[1, 0, 0], int(0)), Constraint::gt(&[-1, 0, 0], int(1)), Constraint::gt(&[0, 1, 0], int(0)), Constraint::gt(&[0, -1, 1], int(0))]);
    let ch = volume_param(&fam, 2).unwrap();
    for c in &ch {
        assert_eq!(c.eval(&rat(5, 2)), rat(5, 2));
    }

    // {0 < x < min(u, 1)}: two chambers
    let fam = set(2, vec![Constraint::gt(&[1, 0], int(0)), Constraint::gt(&[-1, 1], int(0)), Constraint::gt(&[-1, 0], int(1))]);
    let ch = volume_param(&fam, 1).unwrap();
    assert_eq!(ch.len(), 2);
    let unb = set(2, vec![Constraint::gt(&[1, 0], int(0))]);
    assert_eq!(volume_param(&unb, 1), Err(crate::Error::UnboundedFibers));
}

#[test]
fn straightening_hyperplanes() {
    let c = cell(3, vec![Constraint::eq(&[2, 3, 5], int(-7)), Constraint::gt(&[1, 0, 0], int(0))]);
    let (m, value) = straighten_equality(&c).unwrap();
    assert!(m.is_unimodular().unwrap());
    let img = c.to_set().int_affine_image(&m, &[int(0), int(0), int(0)]).unwrap();
    let plane = set(3, vec![Constraint::eq(&[1, 0, 0], -value.clone())]);
    assert!(img.is_subset(&plane).unwrap());
    assert_eq!(value, int(7));
}

#[test]
fn class_arithmetic() {
    let e0 = GammaClass::e(int(0));
    let tau = GammaClass::tau(rat(1, 2));
    let t = tau.mul(&tau.add(&e0).unwrap());
    assert_eq!(t.grade(), 2);
    assert_eq!(t.chi(), 0);
    assert_eq!(t.chi_prime(), 0);
    assert_eq!(GammaClass::tau(rat(-5, 2)).chi(), -1);
    assert_eq!(GammaClass::tau(rat(-5, 2)).chi_prime(), -1);
    assert!(e0.sub(&e0).unwrap().terms().is_empty());
}

fn arb_polytope() -> impl Strategy<Value = SemilinearSet> {
    (
        proptest::collection::vec(((-2i64..=2), (-2i64..=2), (-3i64..=6), any::<bool>()), 1..4),
        0i64..4,
        0i64..4,
    )
        .prop_map(|(extra, w, h)| {
            let mut cs = vec![
                Constraint::ge(&[1, 0], int(0)),
                Constraint::ge(&[-1, 0], int(w + 1)),
                Constraint::gt(&[0, 1], int(0)),
                Constraint::ge(&[0, -1], int(h + 1)),
            ];
            for (a, b, c, strict) in extra {
                let rel = if strict { Relation::Gt } else { Relation::Ge };
                cs.push(Constraint::from_i64(&[a, b], int(c), rel));
            }
            set(2, cs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn invariants_respect_unimodular_maps(s in arb_polytope(), k in -2i64..=2, t0 in -3i64..=3, t1 in -3i64..=3) {
        let m = IntMatrix::from_rows(&[vec![1, k], vec![0, 1]]).unwrap();
        let shift = vec![int(t0), int(t1)];
        let img = s.int_affine_image(&m, &shift).unwrap();
        let f = PiecewiseAffineMap { pieces: vec![AffinePiece { domain: Cell::universe(2), matrix: m, shift }] };
        let rep = verify_morphism(&f, &s, &img, MorphismMode::Plain).unwrap();
        prop_assert!(rep.valid);
        prop_assert_eq!(invariants(&s), invariants(&img));
    }

    #[test]
    fn volume_is_multiplicative(s in arb_polytope(), a in 1i64..5, b in 1i64..4) {
        let iv = SemilinearSet::open_interval(rat(-1, b), rat(a, 1));
        let prod = s.product(&iv);
        prop_assert_eq!(volume(&prod).unwrap(), volume(&s).unwrap() * volume(&iv).unwrap());
    }

    #[test]
    fn finite_classes_cancel(
        a in proptest::collection::vec((0i64..6, 0i64..6), 1..4),
        b in proptest::collection::vec((0i64..6, 0i64..6), 1..4),
        c in proptest::collection::vec((0i64..6, 0i64..6), 1..4),
    ) {
        let pts = |v: &[(i64, i64)]| v.iter().map(|&(p, q)| SingletonClass::new(vec![rat(p, 6), rat(q, 4)])).collect::<Vec<_>>();
        let (ca, cb, cc) = (FiniteClass::from_points(&pts(&a)), FiniteClass::from_points(&pts(&b)), FiniteClass::from_points(&pts(&c)));
        if ca.add(&cc) == cb.add(&cc) {
            prop_assert_eq!(&ca, &cb);
        }
        for m in 1..=12 {
            let t = SubgroupSpec::new(m).unwrap();
            prop_assert_eq!(ca.add(&cc).h_t(t), ca.h_t(t) + cc.h_t(t));
        }
    }
}

#[test]
fn orbit_representatives_are_complete() {
    let pts: Vec<SingletonClass> = (0..6)
        .flat_map(|p| (0..6).map(move |q| SingletonClass::new(vec![rat(p, 6), rat(q, 6)])))
        .collect();
    for a in &pts {
        for b in &pts {
            let same = orbit_representative(a) == orbit_representative(b);
            assert_eq!(same, singleton_equal(a, b));
        }
    }
    let _ = BigInt::from(0);
}
