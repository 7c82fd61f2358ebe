//! JSON documents: decoding with path-annotated schema errors, and encoding.
//!
//! Rationals are strings `"p/q"` (plain integers are also accepted on
//! input); exponent vectors are integer arrays; polynomials are lists of
//! `{"exp": [...], "coeff": int}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use motint::denefsum::{LinearFunctional, RationalFunctionQT};
use motint::exactcore::{format_rational, parse_rational, IntLaurent, Rational};
use motint::gamma_classes::{AffinePiece, Chamber, PiecewiseAffineMap};
use motint::igusa::{IgusaData, IgusaDatum, IntPolynomial};
use motint::motivic::{MotivicClass, MotivicTerm};
use motint::semilinear::{Cell, Constraint, Relation, SemilinearSet};
use motint::IntMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl SchemaError {
    pub fn at(path: &str, message: impl Into<String>) -> Self {
        SchemaError {
            path: path.to_string(),
            message: message.into(),
            line: None,
            column: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), json!("schema"));
        m.insert("message".into(), json!(self.message));
        m.insert("path".into(), json!(self.path));
        if let Some(l) = self.line {
            m.insert("line".into(), json!(l));
        }
        if let Some(c) = self.column {
            m.insert("column".into(), json!(c));
        }
        json!({ "error": Value::Object(m) })
    }
}

pub type SResult<T> = Result<T, SchemaError>;

pub fn parse_document(text: &str) -> SResult<Value> {
    serde_json::from_str(text).map_err(|e| SchemaError {
        path: "$".into(),
        message: e.to_string(),
        line: Some(e.line()),
        column: Some(e.column()),
    })
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> SResult<&'a Value> {
    let obj = v.as_object().ok_or_else(|| SchemaError::at(path, "expected an object"))?;
    obj.get(key)
        .ok_or_else(|| SchemaError::at(path, format!("missing field {key:?}")))
}

fn opt_field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.as_object().and_then(|o| o.get(key))
}

fn array<'a>(v: &'a Value, path: &str) -> SResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| SchemaError::at(path, "expected an array"))
}

pub fn int_of(v: &Value, path: &str) -> SResult<i64> {
    v.as_i64().ok_or_else(|| SchemaError::at(path, "expected an integer"))
}

pub fn uint_of(v: &Value, path: &str) -> SResult<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| SchemaError::at(path, "expected a nonnegative integer"))
}

fn bigint_of(v: &Value, path: &str) -> SResult<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| SchemaError::at(path, format!("not an integer: {s:?}"))),
        _ => Err(SchemaError::at(path, "expected an integer")),
    }
}

pub fn rational_of(v: &Value, path: &str) -> SResult<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| SchemaError::at(path, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(BigInt::from(n.as_i64().unwrap()))),
        _ => Err(SchemaError::at(path, "expected a rational string \"p/q\" or an integer")),
    }
}

fn rationals_of(v: &Value, path: &str) -> SResult<Vec<Rational>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational_of(x, &format!("{path}[{i}]")))
        .collect()
}

fn ints_of(v: &Value, path: &str) -> SResult<Vec<i64>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| int_of(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn rat_json(x: &Rational) -> Value {
    json!(format_rational(x))
}

fn relation_of(v: &Value, path: &str) -> SResult<Relation> {
    match v.as_str() {
        Some("=") | Some("==") | Some("eq") => Ok(Relation::Eq),
        Some(">") | Some("gt") => Ok(Relation::Gt),
        Some(">=") | Some("ge") => Ok(Relation::Ge),
        _ => Err(SchemaError::at(path, "relation must be one of \"=\", \">\", \">=\"")),
    }
}

fn constraint_of(v: &Value, path: &str, n: usize) -> SResult<Constraint> {
    let cpath = format!("{path}.coeffs");
    let coeffs: Vec<BigInt> = array(field(v, path, "coeffs")?, &cpath)?
        .iter()
        .enumerate()
        .map(|(i, x)| bigint_of(x, &format!("{cpath}[{i}]")))
        .collect::<SResult<_>>()?;
    if coeffs.len() != n {
        return Err(SchemaError::at(&cpath, format!("expected {n} coefficients, found {}", coeffs.len())));
    }
    let constant = rational_of(field(v, path, "const")?, &format!("{path}.const"))?;
    let rel = relation_of(field(v, path, "rel")?, &format!("{path}.rel"))?;
    Ok(Constraint::new(coeffs, constant, rel))
}

pub fn cell_of(v: &Value, path: &str, n: usize) -> SResult<Cell> {
    let cons = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| constraint_of(c, &format!("{path}[{i}]"), n))
        .collect::<SResult<Vec<_>>>()?;
    Cell::new(n, cons).map_err(|e| SchemaError::at(path, e.to_string()))
}

pub fn set_of(v: &Value, path: &str) -> SResult<SemilinearSet> {
    let n = uint_of(field(v, path, "n")?, &format!("{path}.n"))?;
    let cpath = format!("{path}.cells");
    let cells = array(field(v, path, "cells")?, &cpath)?
        .iter()
        .enumerate()
        .map(|(i, c)| cell_of(c, &format!("{cpath}[{i}]"), n))
        .collect::<SResult<Vec<_>>>()?;
    SemilinearSet::new(n, cells).map_err(|e| SchemaError::at(path, e.to_string()))
}

fn constraint_json(c: &Constraint) -> Value {
    json!({
        "coeffs": c.coeffs().iter().map(|x| json!(x.to_string().parse::<i64>().map(Value::from).unwrap_or_else(|_| json!(x.to_string())))).collect::<Vec<_>>(),
        "const": rat_json(c.constant()),
        "rel": c.relation().symbol(),
    })
}

pub fn cell_json(c: &Cell) -> Value {
    Value::Array(c.constraints().iter().map(constraint_json).collect())
}

pub fn set_json(s: &SemilinearSet) -> Value {
    json!({
        "n": s.dim_ambient(),
        "cells": s.cells().iter().map(cell_json).collect::<Vec<_>>(),
    })
}

pub fn functional_of(v: &Value, path: &str, n: usize) -> SResult<LinearFunctional> {
    let coeffs = rationals_of(field(v, path, "coeffs")?, &format!("{path}.coeffs"))?;
    if coeffs.len() != n {
        return Err(SchemaError::at(&format!("{path}.coeffs"), format!("expected {n} coefficients")));
    }
    let constant = match opt_field(v, "const") {
        Some(c) => rational_of(c, &format!("{path}.const"))?,
        None => Rational::from_integer(BigInt::from(0)),
    };
    Ok(LinearFunctional::new(coeffs, constant))
}

pub fn functional_json(h: &LinearFunctional) -> Value {
    json!({
        "coeffs": h.coeffs.iter().map(rat_json).collect::<Vec<_>>(),
        "const": rat_json(&h.constant),
    })
}

pub fn laurent_of(v: &Value, path: &str, nvars: usize) -> SResult<IntLaurent> {
    let mut p = IntLaurent::zero(nvars);
    for (i, t) in array(v, path)?.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let e = ints_of(field(t, &tp, "exp")?, &format!("{tp}.exp"))?;
        if e.len() != nvars {
            return Err(SchemaError::at(&format!("{tp}.exp"), format!("expected {nvars} exponents")));
        }
        let c = bigint_of(field(t, &tp, "coeff")?, &format!("{tp}.coeff"))?;
        p.add_term(e, c);
    }
    Ok(p)
}

pub fn laurent_json(p: &IntLaurent) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!({ "exp": e, "coeff": bigint_json(c) }))
            .collect(),
    )
}

fn bigint_json(c: &BigInt) -> Value {
    match c.to_string().parse::<i64>() {
        Ok(x) => json!(x),
        Err(_) => json!(c.to_string()),
    }
}

pub fn poly_of(v: &Value, path: &str) -> SResult<IntPolynomial> {
    let (n, terms, tpath) = if v.is_array() {
        let first = v.as_array().unwrap().first();
        let n = match first {
            Some(t) => array(field(t, &format!("{path}[0]"), "exp")?, &format!("{path}[0].exp"))?.len(),
            None => return Err(SchemaError::at(path, "empty polynomial")),
        };
        (n, v, path.to_string())
    } else {
        let n = uint_of(field(v, path, "n")?, &format!("{path}.n"))?;
        (n, field(v, path, "terms")?, format!("{path}.terms"))
    };
    let mut out = Vec::new();
    for (i, t) in array(terms, &tpath)?.iter().enumerate() {
        let tp = format!("{tpath}[{i}]");
        let e = ints_of(field(t, &tp, "exp")?, &format!("{tp}.exp"))?;
        if e.len() != n || e.iter().any(|&x| x < 0) {
            return Err(SchemaError::at(&format!("{tp}.exp"), format!("expected {n} nonnegative exponents")));
        }
        let c = int_of(field(t, &tp, "coeff")?, &format!("{tp}.coeff"))?;
        out.push((e.into_iter().map(|x| x as u32).collect(), c));
    }
    IntPolynomial::new(n, out).map_err(|e| SchemaError::at(path, e.to_string()))
}

pub fn poly_json(p: &IntPolynomial) -> Value {
    json!({
        "n": p.nvars(),
        "terms": p.terms().map(|(e, c)| json!({ "exp": e, "coeff": c })).collect::<Vec<_>>(),
    })
}

pub fn rf_of(v: &Value, path: &str) -> SResult<RationalFunctionQT> {
    let m = uint_of(field(v, path, "m")?, &format!("{path}.m"))? as u64;
    let nvars = uint_of(field(v, path, "nvars")?, &format!("{path}.nvars"))?;
    let num = laurent_of(field(v, path, "num")?, &format!("{path}.num"), nvars)?;
    let fpath = format!("{path}.den_factors");
    let mut den = BTreeMap::new();
    for (i, f) in array(field(v, path, "den_factors")?, &fpath)?.iter().enumerate() {
        let tp = format!("{fpath}[{i}]");
        let w = ints_of(field(f, &tp, "exp")?, &format!("{tp}.exp"))?;
        let k = uint_of(field(f, &tp, "mult")?, &format!("{tp}.mult"))? as u32;
        *den.entry(w).or_insert(0) += k;
    }
    RationalFunctionQT::new(m, num, den).map_err(|e| SchemaError::at(path, e.to_string()))
}

pub fn rf_json(f: &RationalFunctionQT) -> Value {
    let mut vars = vec!["u".to_string()];
    vars.extend((1..f.nvars()).map(|i| format!("T{i}")));
    json!({
        "m": f.root(),
        "nvars": f.nvars(),
        "variables": vars,
        "num": laurent_json(f.numerator()),
        "den": laurent_json(&f.expanded_denominator()),
        "den_factors": f.denominator().iter().map(|(w, k)| json!({ "exp": w, "mult": k })).collect::<Vec<_>>(),
    })
}

pub fn class_of(v: &Value, path: &str) -> SResult<MotivicClass> {
    let tpath = format!("{path}.terms");
    let mut terms = Vec::new();
    for (i, t) in array(field(v, path, "terms")?, &tpath)?.iter().enumerate() {
        let tp = format!("{tpath}[{i}]");
        let res = laurent_of(field(t, &tp, "res")?, &format!("{tp}.res"), 1)?;
        let gamma = set_of(field(t, &tp, "gamma")?, &format!("{tp}.gamma"))?;
        let grade = uint_of(field(t, &tp, "grade")?, &format!("{tp}.grade"))?;
        let coeff = match opt_field(t, "coeff") {
            Some(c) => int_of(c, &format!("{tp}.coeff"))?,
            None => 1,
        };
        terms.push(MotivicTerm::new(res, gamma, grade, coeff).map_err(|e| SchemaError::at(&tp, e.to_string()))?);
    }
    Ok(MotivicClass { terms })
}

pub fn class_json(c: &MotivicClass) -> Value {
    json!({
        "terms": c.terms.iter().map(|t| json!({
            "res": laurent_json(&t.res),
            "gamma": set_json(&t.gamma),
            "grade": t.grade,
            "coeff": t.coeff,
        })).collect::<Vec<_>>(),
    })
}

pub fn igusa_of(v: &Value, path: &str) -> SResult<IgusaData> {
    let n = uint_of(field(v, path, "n")?, &format!("{path}.n"))?;
    let k = uint_of(field(v, path, "k")?, &format!("{path}.k"))?;
    let spath = format!("{path}.strata");
    let mut strata = Vec::new();
    for (i, s) in array(field(v, path, "strata")?, &spath)?.iter().enumerate() {
        let sp = format!("{spath}[{i}]");
        let res = laurent_of(field(s, &sp, "res")?, &format!("{sp}.res"), 1)?;
        let gamma = rational_of(field(s, &sp, "gamma")?, &format!("{sp}.gamma"))?;
        let rv_dim = uint_of(field(s, &sp, "ni")?, &format!("{sp}.ni"))?;
        let delta = set_of(field(s, &sp, "delta")?, &format!("{sp}.delta"))?;
        let d = delta.dim_ambient();
        let h0 = functional_of(field(s, &sp, "h0")?, &format!("{sp}.h0"), d)?;
        let hpath = format!("{sp}.hs");
        let hs = array(field(s, &sp, "hs")?, &hpath)?
            .iter()
            .enumerate()
            .map(|(j, h)| functional_of(h, &format!("{hpath}[{j}]"), d))
            .collect::<SResult<Vec<_>>>()?;
        strata.push(IgusaDatum {
            res,
            gamma,
            rv_dim,
            delta,
            h0,
            hs,
        });
    }
    IgusaData::new(n, k, strata).map_err(|e| SchemaError::at(path, e.to_string()))
}

pub fn igusa_json(d: &IgusaData) -> Value {
    json!({
        "n": d.n,
        "k": d.k,
        "strata": d.strata.iter().map(|s| json!({
            "res": laurent_json(&s.res),
            "gamma": rat_json(&s.gamma),
            "ni": s.rv_dim,
            "delta": set_json(&s.delta),
            "h0": functional_json(&s.h0),
            "hs": s.hs.iter().map(functional_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn morphism_of(v: &Value, path: &str, n: usize) -> SResult<PiecewiseAffineMap> {
    let ppath = format!("{path}.pieces");
    let mut pieces = Vec::new();
    for (i, p) in array(field(v, path, "pieces")?, &ppath)?.iter().enumerate() {
        let pp = format!("{ppath}[{i}]");
        let domain = cell_of(field(p, &pp, "domain")?, &format!("{pp}.domain"), n)?;
        let mpath = format!("{pp}.matrix");
        let rows: Vec<Vec<i64>> = array(field(p, &pp, "matrix")?, &mpath)?
            .iter()
            .enumerate()
            .map(|(r, row)| ints_of(row, &format!("{mpath}[{r}]")))
            .collect::<SResult<_>>()?;
        let matrix = IntMatrix::from_rows(&rows).map_err(|e| SchemaError::at(&mpath, e.to_string()))?;
        let shift = rationals_of(field(p, &pp, "shift")?, &format!("{pp}.shift"))?;
        pieces.push(AffinePiece { domain, matrix, shift });
    }
    Ok(PiecewiseAffineMap { pieces })
}

pub fn chamber_json(c: &Chamber) -> Value {
    json!({
        "domain": set_json(&c.domain.to_set()),
        "polynomial": c.polynomial.terms().map(|(e, a)| json!({ "exp": e, "coeff": rat_json(a) })).collect::<Vec<_>>(),
    })
}

pub fn point_json(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(rat_json).collect())
}
