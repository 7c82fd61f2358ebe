use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::exactcore::{int, rat};

fn ge(a: &[i64], c: Rational) -> Constraint {
    Constraint::ge(a, c)
}

fn gt(a: &[i64], c: Rational) -> Constraint {
    Constraint::gt(a, c)
}

fn set(n: usize, cells: Vec<Vec<Constraint>>) -> SemilinearSet {
    SemilinearSet::new(n, cells.into_iter().map(|cs| Cell::new(n, cs).unwrap()).collect()).unwrap()
}

fn grid(n: usize) -> Vec<Vec<Rational>> {
    let vals: Vec<Rational> = (-8..=8).map(|k| rat(k, 2)).chain([rat(1, 3), rat(-5, 3)]).collect();
    let mut pts = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &pts {
            for v in &vals {
                let mut q: Vec<Rational> = p.clone();
                q.push(v.clone());
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

fn same_points(a: &SemilinearSet, b: &SemilinearSet) -> bool {
    grid(a.dim_ambient())
        .iter()
        .all(|p| a.contains(p).unwrap() == b.contains(p).unwrap())
}

#[test]
fn normalize_examples() {
    let s = set(1, vec![vec![gt(&[1], int(0))], vec![gt(&[1], int(-1))]]);
    let n = s.normalize();
    assert!(same_points(&s, &n));
    for (i, a) in n.cells().iter().enumerate() {
        for b in &n.cells()[i + 1..] {
            assert!(a.intersect(b).is_empty());
        }
    }
    assert!(SemilinearSet::empty(1).normalize().cells().is_empty());
    let contradiction = set(1, vec![vec![gt(&[1], int(0)), gt(&[-1], int(0))]]);
    assert!(contradiction.normalize().cells().is_empty());
}

#[test]
fn boolean_examples() {
    let nonneg = set(1, vec![vec![ge(&[1], int(0))]]);
    let comp = nonneg.complement();
    assert!(same_points(&comp, &set(1, vec![vec![gt(&[-1], int(0))]])));
    let a = set(1, vec![vec![gt(&[1], int(0))]]);
    let b = set(1, vec![vec![gt(&[-1], int(1))]]);
    let i = a.intersect(&b).unwrap();
    assert!(same_points(&i, &SemilinearSet::open_interval(int(0), int(1))));
    let u = nonneg.union(&comp).unwrap();
    assert!(grid(1).iter().all(|p| u.contains(p).unwrap()));
}

#[test]
fn contains_examples() {
    let pos = set(1, vec![vec![gt(&[1], int(0))]]);
    assert!(pos.contains(&[rat(1, 2)]).unwrap());
    assert!(!pos.contains(&[int(0)]).unwrap());
    let line = set(2, vec![vec![ge(&[1, 0], int(0)), Constraint::eq(&[2, -1], int(0))]]);
    assert!(line.contains(&[rat(1, 3), rat(2, 3)]).unwrap());
    assert!(pos.contains(&[int(0), int(0)]).is_err());
}

#[test]
fn project_examples() {
    let tri = set(2, vec![vec![gt(&[1, 0], int(0)), gt(&[-1, 0], int(1)), gt(&[0, 1], int(0)), gt(&[1, -1], int(0))]]);
    let p = tri.project(1).unwrap();
    assert!(same_points(&p, &SemilinearSet::open_interval(int(0), int(1))));
    let seg = set(2, vec![vec![Constraint::eq(&[1, 1], int(-1)), ge(&[1, 0], int(0)), ge(&[0, 1], int(0))]]);
    let p = seg.project(1).unwrap();
    assert!(same_points(&p, &SemilinearSet::closed_interval(int(0), int(1))));
    assert!(SemilinearSet::empty(2).project(0).unwrap().is_empty());
    assert!(matches!(seg.project(2), Err(crate::Error::InvalidIndex { .. })));
}

#[test]
fn dimension_examples() {
    assert_eq!(SemilinearSet::point(&[rat(1, 2)]).dimension(), 0);
    let seg = set(2, vec![vec![gt(&[1, 0], int(0)), gt(&[-1, 0], int(1)), Constraint::eq(&[2, -1], int(0))]]);
    assert_eq!(seg.dimension(), 1);
    assert_eq!(SemilinearSet::empty(3).dimension(), -1);
    // implicit equality: x ≥ 0 and -x ≥ 0 with y free
    let implicit = set(2, vec![vec![ge(&[1, 1], int(0)), ge(&[-1, -1], int(0))]]);
    assert_eq!(implicit.dimension(), 1);
    assert_eq!(SemilinearSet::point0().dimension(), 0);
}

#[test]
fn boundedness_examples() {
    let b = SemilinearSet::open_interval(int(0), int(1)).boundedness();
    assert!(b.bounded);
    let b = set(1, vec![vec![gt(&[1], int(0))]]).boundedness();
    assert!(!b.bounded);
    assert_eq!(b.bounded_below, vec![true]);
    assert_eq!(b.recession_rays, vec![vec![BigInt::from(1)]]);
    let tri = set(2, vec![vec![ge(&[1, 0], int(0)), ge(&[0, 1], int(0)), ge(&[-1, -1], int(3))]]);
    assert!(tri.boundedness().bounded);
    let quadrant = set(2, vec![vec![ge(&[1, 0], int(0)), ge(&[0, 1], int(0))]]);
    let rays = quadrant.boundedness().recession_rays;
    assert_eq!(rays.len(), 2);
    let halfplane = set(2, vec![vec![ge(&[0, 1], int(0))]]);
    let b = halfplane.boundedness();
    assert_eq!(b.bounded_below, vec![false, true]);
    assert!(b.recession_rays.contains(&vec![BigInt::from(0), BigInt::from(1)]));
}

#[test]
fn decomposition_examples() {
    let unit = SemilinearSet::closed_interval(int(0), int(1));
    let mut dims: Vec<usize> = unit.cell_decompose().iter().map(|(_, d)| *d).collect();
    dims.sort();
    assert_eq!(dims, vec![0, 0, 1]);
    let pos = set(1, vec![vec![gt(&[1], int(0))]]);
    assert_eq!(pos.cell_decompose().iter().map(|(_, d)| *d).collect::<Vec<_>>(), vec![1]);
    let square = unit.product(&unit);
    let cells = square.cell_decompose();
    let count = |d| cells.iter().filter(|(_, k)| *k == d).count();
    assert_eq!((count(0), count(1), count(2)), (4, 4, 1));
    let pieces = SemilinearSet::new(2, cells.iter().map(|(c, _)| c.clone()).collect()).unwrap();
    assert!(same_points(&pieces, &square));
}

#[test]
fn sample_points_satisfy() {
    let tri = set(2, vec![vec![gt(&[1, 0], int(0)), gt(&[0, 1], int(0)), gt(&[-1, -1], rat(1, 3))]]);
    let p = tri.sample_point().unwrap();
    assert!(tri.contains(&p).unwrap());
    let empty = set(2, vec![vec![gt(&[1, 1], int(0)), ge(&[-1, -1], int(0))]]);
    assert!(empty.sample_point().is_none());
}

#[test]
fn affine_image_hyperplane() {
    // {3x + 5y = 1} is sent by a unimodular completion of (3,5) to {y_0 = 1}.
    let hyper = set(2, vec![vec![Constraint::eq(&[3, 5], int(-1))]]);
    let m = crate::exactcore::completion_with_first_row(&[BigInt::from(3), BigInt::from(5)]).unwrap();
    let img = hyper.int_affine_image(&m, &[int(0), int(0)]).unwrap();
    let target = set(2, vec![vec![Constraint::eq(&[1, 0], int(-1))]]);
    assert!(img.set_eq(&target).unwrap());
}

fn arb_constraint(n: usize) -> impl Strategy<Value = Constraint> {
    (
        proptest::collection::vec(-2i64..=2, n),
        -6i64..=6,
        1i64..=2,
        prop_oneof![Just(Relation::Eq), Just(Relation::Gt), Just(Relation::Ge), Just(Relation::Ge)],
    )
        .prop_map(|(a, p, q, rel)| Constraint::from_i64(&a, rat(p, q), rel))
}

fn arb_set(n: usize) -> impl Strategy<Value = SemilinearSet> {
    proptest::collection::vec(proptest::collection::vec(arb_constraint(n), 1..4), 0..3).prop_map(
        move |cells| {
            SemilinearSet::new(n, cells.into_iter().map(|cs| Cell::new(n, cs).unwrap()).collect()).unwrap()
        },
    )
}

/// Witness search along coordinate `i` over a fine 1-D grid plus the
/// breakpoints of the fiber.
fn has_witness(s: &SemilinearSet, p: &[Rational], i: usize) -> bool {
    s.cells().iter().any(|cell| {
        let mut fib = Vec::new();
        let mut pre = p.to_vec();
        pre.insert(i, int(0));
        let fixed = cell.clone();
        // Direct 1-D interval system for x_i.
        let mut lo: Option<(Rational, bool)> = None;
        let mut hi: Option<(Rational, bool)> = None;
        let mut point: Option<Rational> = None;
        for c in fixed.constraints() {
            let a = Rational::from_integer(c.coeffs()[i].clone());
            let rest = c.form().eval(&pre);
            if a == int(0) {
                if !c.relation().holds(&rest) {
                    return false;
                }
                continue;
            }
            let v = -rest / &a;
            fib.push(v.clone());
            match c.relation() {
                Relation::Eq => {
                    if point.as_ref().is_some_and(|w| *w != v) {
                        return false;
                    }
                    point = Some(v);
                }
                rel => {
                    let strict = rel == Relation::Gt;
                    let target = if a > int(0) { &mut lo } else { &mut hi };
                    let better = match target {
                        None => true,
                        Some((w, s)) => {
                            if a > int(0) {
                                v > *w || (v == *w && strict && !*s)
                            } else {
                                v < *w || (v == *w && strict && !*s)
                            }
                        }
                    };
                    if better {
                        *target = Some((v, strict));
                    }
                }
            }
        }
        let mut cands = fib.clone();
        for w in fib.iter() {
            for x in fib.iter() {
                cands.push((w + x) / int(2));
            }
            cands.push(w + int(1));
            cands.push(w - int(1));
        }
        cands.push(int(0));
        cands.iter().any(|t| {
            let mut q = p.to_vec();
            q.insert(i, t.clone());
            cell.contains(&q)
        })
    })
}

fn coarse_grid(n: usize) -> Vec<Vec<Rational>> {
    let vals: Vec<Rational> = (-6..=6).map(|k| rat(k, 2)).chain([rat(1, 3), rat(-7, 3)]).collect();
    let mut pts = vec![vec![]];
    for _ in 0..n {
        pts = pts
            .iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q: Vec<Rational> = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    pts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_sound_and_complete(s in arb_set(2), i in 0usize..2) {
        let proj = s.project(i).unwrap();
        for p in coarse_grid(1) {
            prop_assert_eq!(proj.contains(&p).unwrap(), has_witness(&s, &p, i));
        }
    }

    #[test]
    fn de_morgan(a in arb_set(2), b in arb_set(2)) {
        let lhs = a.union(&b).unwrap().complement();
        let rhs = a.complement().intersect(&b.complement()).unwrap();
        let lhs2 = a.intersect(&b).unwrap().complement();
        let rhs2 = a.complement().union(&b.complement()).unwrap();
        for p in coarse_grid(2) {
            prop_assert_eq!(lhs.contains(&p).unwrap(), rhs.contains(&p).unwrap());
            prop_assert_eq!(lhs2.contains(&p).unwrap(), rhs2.contains(&p).unwrap());
            let inside = a.contains(&p).unwrap() && !b.contains(&p).unwrap();
            prop_assert_eq!(a.difference(&b).unwrap().contains(&p).unwrap(), inside);
        }
    }

    #[test]
    fn dimension_of_union(a in arb_set(2), b in arb_set(2)) {
        let u = a.union(&b).unwrap();
        prop_assert_eq!(u.dimension(), a.dimension().max(b.dimension()));
    }

    #[test]
    fn decomposition_partitions(s in arb_set(2)) {
        let cells = s.cell_decompose();
        for (i, (a, _)) in cells.iter().enumerate() {
            for (b, _) in &cells[i + 1..] {
                prop_assert!(a.intersect(b).is_empty());
            }
        }
        let pieces = SemilinearSet::new(2, cells.iter().map(|(c, _)| c.clone()).collect()).unwrap();
        prop_assert!(pieces.set_eq(&s).unwrap());
        for (c, d) in &cells {
            prop_assert_eq!(c.dimension(), *d as i64);
        }
    }

    #[test]
    fn decomposition_signed_count_order_free(s in arb_set(3)) {
        let chi = |t: &SemilinearSet| -> i64 {
            t.cylindrical_decomposition().iter().map(|c| if c.dim() % 2 == 0 { 1 } else { -1 }).sum()
        };
        let base = chi(&s);
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            prop_assert_eq!(chi(&s.permute(&perm).unwrap()), base);
        }
    }

    #[test]
    fn sample_point_is_member(s in arb_set(3)) {
        match s.sample_point() {
            Some(p) => prop_assert!(s.contains(&p).unwrap()),
            None => prop_assert!(s.is_empty()),
        }
    }
}
