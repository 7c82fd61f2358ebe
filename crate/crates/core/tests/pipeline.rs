use motint::denefsum::{ev, ev_truncated, LinearFunctional};
use motint::euler::euler_pair;
use motint::exactcore::{int, rat, Rational};
use motint::gamma_classes::{lattice_count, volume, volume_param, GammaClass};
use motint::igusa::{eval_igusa, linear_forms_data, monomial_data, verify_against_oracle, IntPolynomial};
use motint::motivic::{isp_difference, retract_e, retract_eprime, MotivicClass};
use motint::semilinear::{Cell, Constraint, SemilinearSet};

fn simplex(n: usize, c: i64) -> SemilinearSet {
    let mut cons: Vec<Constraint> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            Constraint::ge(&e, int(0))
        })
        .collect();
    cons.push(Constraint::ge(&vec![-1; n], int(c)));
    SemilinearSet::new(n, vec![Cell::new(n, cons).unwrap()]).unwrap()
}

#[test]
fn simplex_invariants() {
    let s = simplex(2, 3);
    let p = euler_pair(&s);
    assert_eq!((p.chi, p.chi_prime), (1, 1));
    assert_eq!(volume(&s).unwrap(), rat(9, 2));
    assert_eq!(lattice_count(&s, 1).unwrap(), 10);
    assert_eq!(lattice_count(&s, 2).unwrap(), 28);
}

#[test]
fn boolean_pipeline_is_additive() {
    let a = simplex(2, 2);
    let b = simplex(2, 4);
    let ring = b.difference(&a).unwrap();
    let ea = euler_pair(&a);
    let er = euler_pair(&ring);
    let eb = euler_pair(&b);
    assert_eq!(ea.chi + er.chi, eb.chi);
    assert_eq!(ea.chi_prime + er.chi_prime, eb.chi_prime);
    assert_eq!(volume(&a).unwrap() + volume(&ring).unwrap(), volume(&b).unwrap());
    assert_eq!(lattice_count(&a, 3).unwrap() + lattice_count(&ring, 3).unwrap(), lattice_count(&b, 3).unwrap());
}

#[test]
fn fibre_volume_of_a_cone() {
    // {0 ≤ y ≤ x}: fibre length x for x ≥ 0.
    let cone = SemilinearSet::new(2, vec![Cell::new(2, vec![Constraint::ge(&[0, 1], int(0)), Constraint::ge(&[1, -1], int(0))]).unwrap()]).unwrap();
    let chambers = volume_param(&cone, 0).unwrap();
    for u in [rat(1, 3), int(2), int(7)] {
        let c = chambers.iter().find(|c| c.domain.contains(std::slice::from_ref(&u))).unwrap();
        assert_eq!(c.eval(&u), u);
    }
}

#[test]
fn gamma_class_relations_under_chi() {
    let a = rat(5, 2);
    let lhs = GammaClass::tau(a.clone()).add(&GammaClass::e(a.clone())).unwrap();
    let rhs = GammaClass::interval(int(0), a.clone()).add(&GammaClass::e(a)).unwrap();
    assert_eq!(lhs.chi(), rhs.chi());
    assert_eq!(lhs.chi_prime(), rhs.chi_prime());
}

#[test]
fn closed_form_lattice_sum_matches_enumeration() {
    let delta = simplex(2, 5);
    let h0 = LinearFunctional::from_i64(&[-1, -2], 0);
    let hs = [LinearFunctional::new(vec![rat(-1, 2), int(0)], Rational::from_integer(0.into()))];
    for r in 1..=2 {
        let f = ev(&delta, &h0, &hs, r).unwrap();
        let (root, t) = ev_truncated(&delta, &h0, &hs, r, 40).unwrap();
        assert_eq!(root, f.root());
        assert_eq!(f.series_expand(&[-1, -1], 40).unwrap(), t);
    }
}

#[test]
fn motivic_retractions() {
    let j = isp_difference();
    for n in 1..=4 {
        assert!(retract_e(&j, n).unwrap().is_zero());
        assert!(retract_eprime(&j, n).unwrap().is_zero());
    }
    assert!(retract_e(&MotivicClass::point(2), 1).is_err());
}

#[test]
fn igusa_pipeline() {
    let d = monomial_data(&[1, 2]).unwrap();
    let f = IntPolynomial::monomial(&[1, 2]);
    assert!(verify_against_oracle(&d, &f, 3, 5).unwrap().success);
    let forms = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
    let d = linear_forms_data(&forms).unwrap();
    let f = IntPolynomial::product_of_forms(&forms).unwrap();
    assert!(verify_against_oracle(&d, &f, 5, 3).unwrap().success);
    assert!(eval_igusa(&d, 2).is_ok());
}
