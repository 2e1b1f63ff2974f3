//! JSON documents for every value that crosses the command line.
//!
//! Integers are always decimal strings so that arbitrary precision survives
//! any JSON reader. Maps keep insertion order, so output is byte-stable.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cgg::PnSeries;
use crate::crt::PartialMap;
use crate::eqvlat::Partition;
use crate::newton::{MonomialPoly, NewtonPoly};
use crate::ultra::{FiniteSemilattice, UltraSpace};

/// A malformed document, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("field `{field}`: {message}")]
pub struct JsonError {
    pub field: String,
    pub message: String,
}

fn err<T>(field: impl Into<String>, message: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError {
        field: field.into(),
        message: message.into(),
    })
}

fn get<'a>(obj: &'a Value, field: &str) -> Result<&'a Value, JsonError> {
    match obj {
        Value::Object(map) => match map.get(field) {
            Some(v) => Ok(v),
            None => err(field, "missing"),
        },
        _ => err(".", "expected an object"),
    }
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array()
        .map_or_else(|| err(field, "expected an array"), Ok)
}

/// Accepts a decimal string or a JSON integer.
fn integer(v: &Value, field: &str) -> Result<BigInt, JsonError> {
    let parsed = match v {
        Value::String(s) => BigInt::from_str(s.trim()).ok(),
        Value::Number(n) if n.is_i64() || n.is_u64() => BigInt::from_str(&n.to_string()).ok(),
        _ => None,
    };
    parsed.map_or_else(|| err(field, "expected a decimal integer string"), Ok)
}

fn rational(v: &Value, field: &str) -> Result<BigRational, JsonError> {
    if let Value::String(s) = v {
        if let Some((p, q)) = s.split_once('/') {
            let (p, q) = (BigInt::from_str(p.trim()), BigInt::from_str(q.trim()));
            return match (p, q) {
                (Ok(p), Ok(q)) if q != BigInt::from(0) => Ok(BigRational::new(p, q)),
                _ => err(field, "expected a fraction \"p/q\" with q ≠ 0"),
            };
        }
    }
    integer(v, field).map(BigRational::from_integer)
}

fn index(v: &Value, field: &str) -> Result<usize, JsonError> {
    v.as_u64().map_or_else(
        || err(field, "expected a non-negative integer"),
        |n| Ok(n as usize),
    )
}

fn flag(v: &Value, field: &str) -> Result<bool, JsonError> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Number(n) if n.as_u64() == Some(0) => Ok(false),
        Value::Number(n) if n.as_u64() == Some(1) => Ok(true),
        _ => err(field, "expected a boolean or 0/1"),
    }
}

fn square<T>(
    v: &Value,
    field: &str,
    m: usize,
    cell: impl Fn(&Value, &str) -> Result<T, JsonError>,
) -> Result<Vec<Vec<T>>, JsonError> {
    let rows = array(v, field)?;
    if rows.len() != m {
        return err(field, format!("expected {m} rows, found {}", rows.len()));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let name = format!("{field}[{i}]");
            let row = array(row, &name)?;
            if row.len() != m {
                return err(&name, format!("expected {m} entries, found {}", row.len()));
            }
            row.iter()
                .enumerate()
                .map(|(j, c)| cell(c, &format!("{name}[{j}]")))
                .collect()
        })
        .collect()
}

fn strings<'a, T: ToString + 'a>(items: impl IntoIterator<Item = &'a T>) -> Value {
    Value::Array(
        items
            .into_iter()
            .map(|x| Value::String(x.to_string()))
            .collect(),
    )
}

/// Any polynomial-like document.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyDoc {
    Binomial(NewtonPoly),
    Monomial(MonomialPoly),
    Pn(PnSeries),
}

pub fn parse_poly(v: &Value) -> Result<PolyDoc, JsonError> {
    let basis = get(v, "basis")?;
    let coeffs = array(get(v, "coeffs")?, "coeffs")?;
    let field = |i: usize| format!("coeffs[{i}]");
    let ints = || -> Result<Vec<BigInt>, JsonError> {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| integer(c, &field(i)))
            .collect()
    };
    match basis.as_str() {
        Some("binomial") => Ok(PolyDoc::Binomial(NewtonPoly::new(ints()?))),
        Some("pn") => Ok(PolyDoc::Pn(PnSeries::new(ints()?))),
        Some("monomial") => {
            let cs = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| rational(c, &field(i)))
                .collect::<Result<_, _>>()?;
            Ok(PolyDoc::Monomial(MonomialPoly::new(cs)))
        }
        _ => err("basis", "expected \"binomial\", \"monomial\" or \"pn\""),
    }
}

pub fn newton_to_json(p: &NewtonPoly) -> Value {
    json!({"basis": "binomial", "coeffs": strings(p.coeffs())})
}

pub fn monomial_to_json(p: &MonomialPoly) -> Value {
    json!({"basis": "monomial", "coeffs": strings(p.coeffs())})
}

pub fn series_to_json(s: &PnSeries) -> Value {
    json!({"basis": "pn", "coeffs": strings(s.coeffs()), "certified": s.certified()})
}

/// `{"points": {"x": "f(x)", …}}` with keys in increasing numeric order.
pub fn points_to_json(pm: &PartialMap) -> Value {
    let points: Map<String, Value> = pm
        .iter()
        .map(|(x, v)| (x.to_string(), Value::String(v.to_string())))
        .collect();
    json!({ "points": points })
}

pub fn parse_points(v: &Value) -> Result<PartialMap, JsonError> {
    let Value::Object(points) = get(v, "points")? else {
        return err("points", "expected an object");
    };
    let mut pm = PartialMap::new();
    for (k, val) in points {
        let field = format!("points.{k}");
        let Ok(x) = k.trim().parse::<i64>() else {
            return err(field, "key is not a 64-bit integer");
        };
        if pm.insert(x, integer(val, &field)?).is_some() {
            return err(field, "point given twice");
        }
    }
    Ok(pm)
}

pub fn partition_to_json(p: &Partition) -> Value {
    json!(p.blocks())
}

/// A non-empty list of block lists over a common carrier `0..n`.
pub fn parse_partitions(v: &Value) -> Result<(usize, Vec<Partition>), JsonError> {
    let list = array(v, ".")?;
    if list.is_empty() {
        return err(".", "at least one partition is needed to fix the carrier");
    }
    let mut parsed = Vec::new();
    for (i, p) in list.iter().enumerate() {
        let field = format!("[{i}]");
        let blocks = array(p, &field)?
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let name = format!("{field}[{j}]");
                array(b, &name)?
                    .iter()
                    .enumerate()
                    .map(|(k, x)| index(x, &format!("{name}[{k}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        parsed.push(blocks);
    }
    let n = parsed[0].iter().map(Vec::len).sum();
    let partitions = parsed
        .iter()
        .enumerate()
        .map(|(i, blocks)| {
            Partition::from_blocks(n, blocks).or_else(|e| err(format!("[{i}]"), e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    Ok((n, partitions))
}

pub fn semilattice_to_json(v: &FiniteSemilattice) -> Value {
    json!({
        "size": v.size(),
        "order": v.order_table(),
        "join": v.join_table(),
        "meet": v.meet_table(),
    })
}

/// `{"size", "order", "join"?, "meet"?}`; supplied tables are checked
/// against the order.
pub fn parse_semilattice(v: &Value) -> Result<FiniteSemilattice, JsonError> {
    let m = index(get(v, "size")?, "size")?;
    let order = square(get(v, "order")?, "order", m, flag)?;
    let table = |name: &str| -> Result<Option<Vec<Vec<usize>>>, JsonError> {
        match v.get(name) {
            None | Some(Value::Null) => Ok(None),
            Some(t) => {
                let t = square(t, name, m, index)?;
                if t.iter().flatten().any(|&x| x >= m) {
                    return err(name, format!("entry outside 0..{m}"));
                }
                Ok(Some(t))
            }
        }
    };
    let (join, meet) = (table("join")?, table("meet")?);
    let v = FiniteSemilattice::from_order(order).or_else(|e| err("order", e.to_string()))?;
    if join.is_some_and(|j| j != v.join_table()) {
        return err("join", "not the least upper bound under `order`");
    }
    if meet.is_some_and(|m| m != v.meet_table()) {
        return err("meet", "not the greatest lower bound under `order`");
    }
    Ok(v)
}

pub fn space_to_json(s: &UltraSpace) -> Value {
    json!({"points": s.points(), "d": s.table()})
}

pub fn parse_space(v: &Value, values: &FiniteSemilattice) -> Result<UltraSpace, JsonError> {
    let n = index(get(v, "points")?, "points")?;
    let d = square(get(v, "d")?, "d", n, index)?;
    UltraSpace::new(values.clone(), d).or_else(|e| err("d", e.to_string()))
}
