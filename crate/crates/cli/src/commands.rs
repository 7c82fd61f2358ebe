//! Subcommand implementations: JSON document in, JSON document out.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use motint::denefsum::{ev_truncated, ev_with_stats, LinearFunctional};
use motint::euler::euler_pair;
use motint::exactcore::Rational;
use motint::gamma_classes::{
    lattice_count, orbit_representative, singleton_equal, verify_morphism, volume, volume_param, MorphismFailure,
    MorphismMode, SingletonClass,
};
use motint::igusa::{
    eval_igusa, linear_forms_data, monomial_data, oracle_padic, verify_against_oracle, IntPolynomial, CONVENTION,
};
use motint::motivic::{count_points, isp_difference, retract_e, retract_eprime};
use motint::semilinear::{Cell, Constraint, Relation, SemilinearSet};
use motint::Error;

use crate::schema::*;

#[derive(Debug)]
pub enum CliError {
    Schema(SchemaError),
    Domain(Error),
    Io(String),
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Schema(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

pub type CResult<T> = Result<T, CliError>;

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotSquare { .. } => "not_square",
        Error::InvalidIndex { .. } => "invalid_index",
        Error::Unbounded => "unbounded",
        Error::UnboundedFibers => "unbounded_fibers",
        Error::Convergence(_) => "convergence",
        Error::NotExpandable(_) => "not_expandable",
        Error::GradeExceeds { .. } => "grade_exceeds",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::Parse(_) => "parse",
    }
}

pub fn euler(doc: &Value) -> CResult<Value> {
    let s = set_of(doc, "$")?;
    let p = euler_pair(&s);
    Ok(json!({ "chi": p.chi, "chi_prime": p.chi_prime, "grade": s.dim_ambient() }))
}

pub fn volume_cmd(doc: &Value) -> CResult<Value> {
    let s = set_of(doc, "$")?;
    Ok(json!({ "volume": rat_json(&volume(&s)?) }))
}

pub fn volume_param_cmd(doc: &Value, param: usize) -> CResult<Value> {
    let s = set_of(doc, "$")?;
    let chambers = volume_param(&s, param)?;
    Ok(json!({ "param": param, "chambers": chambers.iter().map(chamber_json).collect::<Vec<_>>() }))
}

pub fn count(doc: &Value, r: u64) -> CResult<Value> {
    let s = set_of(doc, "$")?;
    Ok(json!({ "r": r, "count": lattice_count(&s, r)? }))
}

pub fn parse_point(text: &str, path: &str) -> CResult<Vec<Rational>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| motint::exactcore::parse_rational(t.trim()).map_err(|e| SchemaError::at(path, e.to_string()).into()))
        .collect()
}

pub fn singleton_eq(a: &str, b: &str) -> CResult<Value> {
    let a = SingletonClass::new(parse_point(a, "--a")?);
    let b = SingletonClass::new(parse_point(b, "--b")?);
    Ok(json!({
        "equal": singleton_equal(&a, &b),
        "order_a": a.order().to_string(),
        "order_b": b.order().to_string(),
        "representative_a": point_json(&orbit_representative(&a).point),
        "representative_b": point_json(&orbit_representative(&b).point),
    }))
}

fn failure_json(f: &MorphismFailure) -> Value {
    match f {
        MorphismFailure::NotUnimodular { piece } => json!({ "kind": "not_unimodular", "piece": piece }),
        MorphismFailure::ShiftNotIntegral { piece } => json!({ "kind": "shift_not_integral", "piece": piece }),
        MorphismFailure::SumNotPreserved { piece } => json!({ "kind": "sum_not_preserved", "piece": piece }),
        MorphismFailure::OverlappingDomains { pieces, point } => {
            json!({ "kind": "overlapping_domains", "pieces": [pieces.0, pieces.1], "point": point_json(point) })
        }
        MorphismFailure::Uncovered { point } => json!({ "kind": "uncovered", "point": point_json(point) }),
        MorphismFailure::OverlappingImages { pieces, point } => {
            json!({ "kind": "overlapping_images", "pieces": [pieces.0, pieces.1], "point": point_json(point) })
        }
        MorphismFailure::NotSurjective { point } => json!({ "kind": "not_surjective", "point": point_json(point) }),
        MorphismFailure::ImageOutside { piece, point } => {
            json!({ "kind": "image_outside", "piece": piece, "point": point_json(point) })
        }
    }
}

pub fn verify_morphism_cmd(doc: &Value) -> CResult<Value> {
    let x = set_of(doc.get("x").ok_or_else(|| SchemaError::at("$", "missing field \"x\""))?, "$.x")?;
    let y = set_of(doc.get("y").ok_or_else(|| SchemaError::at("$", "missing field \"y\""))?, "$.y")?;
    let f = morphism_of(doc, "$", x.dim_ambient())?;
    let mode = match doc.get("mode").and_then(Value::as_str) {
        None | Some("plain") => MorphismMode::Plain,
        Some("sum_preserving") => MorphismMode::SumPreserving,
        Some(m) => return Err(SchemaError::at("$.mode", format!("unknown mode {m:?}")).into()),
    };
    let rep = verify_morphism(&f, &x, &y, mode)?;
    Ok(json!({
        "valid": rep.valid,
        "failure": rep.failure.as_ref().map(failure_json),
        "images": rep.images.iter().map(set_json).collect::<Vec<_>>(),
    }))
}

pub struct EvInput {
    pub delta: SemilinearSet,
    pub h0: LinearFunctional,
    pub hs: Vec<LinearFunctional>,
}

pub fn ev_input(doc: &Value) -> CResult<EvInput> {
    let delta = set_of(doc.get("delta").ok_or_else(|| SchemaError::at("$", "missing field \"delta\""))?, "$.delta")?;
    let n = delta.dim_ambient();
    let h0 = functional_of(doc.get("h0").ok_or_else(|| SchemaError::at("$", "missing field \"h0\""))?, "$.h0", n)?;
    let hs = match doc.get("hs") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .ok_or_else(|| SchemaError::at("$.hs", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, h)| functional_of(h, &format!("$.hs[{i}]"), n))
            .collect::<SResult<_>>()?,
    };
    Ok(EvInput { delta, h0, hs })
}

pub fn ev_cmd(doc: &Value, r: u64) -> CResult<Value> {
    let inp = ev_input(doc)?;
    let (f, stats) = ev_with_stats(&inp.delta, &inp.h0, &inp.hs, r)?;
    let mut out = rf_json(&f);
    out["r"] = json!(r);
    out["stats"] = json!({
        "congruence_splits": stats.congruence_splits,
        "cells": stats.cells,
        "final_terms": stats.final_terms,
    });
    Ok(out)
}

pub fn ev_series_cmd(doc: &Value, r: u64, order: i64) -> CResult<Value> {
    let inp = ev_input(doc)?;
    let (root, p) = ev_truncated(&inp.delta, &inp.h0, &inp.hs, r, order)?;
    Ok(json!({ "m": root, "order": order, "series": laurent_json(&p) }))
}

/// Re-reads an `ev` / `igusa eval` output and expands it to total degree
/// `order` in the inverse variables.
pub fn expand(doc: &Value, order: i64) -> CResult<Value> {
    let f = rf_of(doc, "$")?;
    let w = vec![-1; f.nvars()];
    Ok(json!({ "m": f.root(), "order": order, "series": laurent_json(&f.series_expand(&w, order)?) }))
}

pub fn retract(doc: &Value, mode: &str, n: usize) -> CResult<Value> {
    let c = class_of(doc, "$")?;
    let p = match mode {
        "E" => retract_e(&c, n)?,
        "Eprime" => retract_eprime(&c, n)?,
        _ => return Err(SchemaError::at("--mode", "mode must be E or Eprime").into()),
    };
    Ok(json!({ "mode": mode, "n": n, "value": laurent_json(&p), "variable": "q" }))
}

pub fn specialize(doc: &Value, q: u64, r: u64) -> CResult<Value> {
    let c = class_of(doc, "$")?;
    Ok(json!({ "q": q, "r": r, "count": rat_json(&count_points(&c, q, r)?) }))
}

pub fn isp_difference_cmd() -> CResult<Value> {
    Ok(class_json(&isp_difference()))
}

pub fn igusa_eval(doc: &Value, r: u64) -> CResult<Value> {
    let d = igusa_of(doc, "$")?;
    let f = eval_igusa(&d, r)?;
    let mut out = rf_json(&f);
    out["r"] = json!(r);
    out["convention"] = json!(CONVENTION);
    Ok(out)
}

fn with_poly(d: Value, f: &IntPolynomial) -> Value {
    let mut d = d;
    d["poly"] = poly_json(f);
    d
}

pub fn parse_exps(text: &str) -> CResult<Vec<u32>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| SchemaError::at("--exps", format!("not a nonnegative integer: {t:?}")).into())
        })
        .collect()
}

pub fn parse_forms(text: &str) -> CResult<Vec<Vec<i64>>> {
    text.split(';')
        .map(|f| {
            f.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| SchemaError::at("--forms", format!("not an integer: {t:?}")).into())
                })
                .collect()
        })
        .collect()
}

pub fn igusa_monomial(exps: &str) -> CResult<Value> {
    let e = parse_exps(exps)?;
    let d = monomial_data(&e)?;
    Ok(with_poly(igusa_json(&d), &IntPolynomial::monomial(&e)))
}

pub fn igusa_linear_forms(forms: &str) -> CResult<Value> {
    let f = parse_forms(forms)?;
    let d = linear_forms_data(&f)?;
    Ok(with_poly(igusa_json(&d), &IntPolynomial::product_of_forms(&f)?))
}

fn poly_from(doc: &Value) -> CResult<IntPolynomial> {
    match doc.get("poly") {
        Some(p) => Ok(poly_of(p, "$.poly")?),
        None => Ok(poly_of(doc, "$")?),
    }
}

fn series_json(s: &[Rational]) -> Value {
    Value::Array(s.iter().map(rat_json).collect())
}

pub fn igusa_oracle(doc: &Value, p: u64, max_m: usize) -> CResult<Value> {
    let f = poly_from(doc)?;
    let s = oracle_padic(&f, p, max_m)?;
    Ok(json!({ "p": p, "max_m": max_m, "series": series_json(&s) }))
}

pub fn igusa_verify(doc: &Value, p: u64, max_m: usize) -> CResult<Value> {
    let d = igusa_of(doc, "$")?;
    let f = match doc.get("poly") {
        Some(v) => poly_of(v, "$.poly")?,
        None => return Err(SchemaError::at("$", "missing field \"poly\"").into()),
    };
    let rep = verify_against_oracle(&d, &f, p, max_m)?;
    Ok(json!({
        "success": rep.success,
        "first_mismatch": rep.first_mismatch,
        "oracle": series_json(&rep.oracle),
        "formula": series_json(&rep.formula),
        "p": p,
        "max_m": max_m,
    }))
}

fn random_set(rng: &mut ChaCha8Rng, n: usize) -> SemilinearSet {
    let cells = (0..rng.gen_range(1..=2))
        .map(|_| {
            let cons = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
                    let rel = [Relation::Eq, Relation::Gt, Relation::Ge][rng.gen_range(0..3)];
                    let c = Rational::from_integer(rng.gen_range(-3i64..=3).into());
                    Constraint::from_i64(&coeffs, c, rel)
                })
                .collect();
            Cell::new(n, cons).expect("dimensions agree")
        })
        .collect();
    SemilinearSet::new(n, cells).expect("dimensions agree")
}

/// Quick internal consistency checks on seeded random input.
pub fn selftest(seed: u64) -> CResult<Value> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool| checks.push(json!({ "name": name, "pass": ok }));

    let ray = SemilinearSet::interval(Some((Rational::from_integer(0.into()), false)), None);
    let p = euler_pair(&ray);
    push("euler_open_ray", p.chi == -1 && p.chi_prime == 0);

    let mut additive = true;
    for _ in 0..20 {
        let n = rng.gen_range(1..=2);
        let (a, b) = (random_set(&mut rng, n), random_set(&mut rng, n));
        let d = b.difference(&a)?;
        let u = a.union(&d)?;
        let (pa, pd, pu) = (euler_pair(&a), euler_pair(&d), euler_pair(&u));
        additive &= pa.chi + pd.chi == pu.chi && pa.chi_prime + pd.chi_prime == pu.chi_prime;
    }
    push("euler_additivity", additive);

    let mut ev_ok = true;
    for _ in 0..10 {
        let n = rng.gen_range(1..=2);
        let mut cons: Vec<Constraint> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                Constraint::from_i64(&e, Rational::from_integer(0.into()), Relation::Ge)
            })
            .collect();
        let extra: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        cons.push(Constraint::from_i64(&extra, Rational::from_integer(rng.gen_range(0i64..=3).into()), Relation::Ge));
        let delta = SemilinearSet::new(n, vec![Cell::new(n, cons)?])?;
        let h0 = LinearFunctional::from_i64(&vec![-1; n], 0);
        let h1 = LinearFunctional::from_i64(&(0..n).map(|_| -rng.gen_range(0..=2)).collect::<Vec<_>>(), 0);
        let f = ev_with_stats(&delta, &h0, std::slice::from_ref(&h1), 1)?.0;
        let (_, t) = ev_truncated(&delta, &h0, &[h1], 1, 8)?;
        ev_ok &= f.series_expand(&[-1, -1], 8)? == t;
    }
    push("ev_matches_enumeration", ev_ok);

    let d = monomial_data(&[2])?;
    let rep = verify_against_oracle(&d, &IntPolynomial::monomial(&[2]), 3, 5)?;
    push("igusa_x2_p3", rep.success);

    let j = isp_difference();
    push("isp_difference_retracts_to_zero", (1..=4).all(|n| retract_e(&j, n).is_ok_and(|p| p.is_zero())));

    let pass = checks.iter().all(|c| c["pass"] == json!(true));
    Ok(json!({
        "seed": seed,
        "checks": checks,
        "pass": pass,
        "elapsed_ms": start.elapsed().as_millis() as u64,
    }))
}
