//! JSON interchange: lattices as `{"rank": n, "gram": [[...]]}`, integer
//! vectors as arrays, rationals as `"p/q"` strings in lowest terms.

use serde_json::{json, Map, Value};

use crate::arith::{parse_rat, rat_to_string, Int, IntMatrix, IntVector, Rat, RatVector};
use crate::discriminant::FiniteQuadraticForm;
use crate::error::{LatticeError, Result};
use crate::lattice::Lattice;
use crate::parabolic::OrbitReport;

fn parse_error(detail: impl Into<String>) -> LatticeError {
    LatticeError::InputParse(detail.into())
}

/// Integers within `i64` become JSON numbers, larger ones decimal strings.
pub fn int_to_json(x: &Int) -> Value {
    match i64::try_from(x) {
        Ok(small) => Value::from(small),
        Err(_) => Value::String(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<Int> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| parse_error(format!("not an integer: {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| parse_error(format!("not an integer: {s:?}"))),
        other => Err(parse_error(format!("expected integer, got {other}"))),
    }
}

pub fn vector_to_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

pub fn vector_from_json(v: &Value) -> Result<IntVector> {
    v.as_array()
        .ok_or_else(|| parse_error("expected an integer array"))?
        .iter()
        .map(int_from_json)
        .collect()
}

pub fn matrix_to_json(m: &[IntVector]) -> Value {
    Value::Array(m.iter().map(|r| vector_to_json(r)).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<IntMatrix> {
    v.as_array()
        .ok_or_else(|| parse_error("expected an array of rows"))?
        .iter()
        .map(vector_from_json)
        .collect()
}

pub fn rat_to_json(x: &Rat) -> Value {
    Value::String(rat_to_string(x))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(_) => Ok(Rat::from_integer(int_from_json(v)?)),
        other => Err(parse_error(format!("expected rational, got {other}"))),
    }
}

pub fn rat_vector_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn rat_vector_from_json(v: &Value) -> Result<RatVector> {
    v.as_array()
        .ok_or_else(|| parse_error("expected an array of rationals"))?
        .iter()
        .map(rat_from_json)
        .collect()
}

pub fn lattice_to_json(l: &Lattice) -> Value {
    json!({ "rank": l.rank(), "gram": matrix_to_json(l.gram()) })
}

/// Parse a lattice document; extra fields are ignored. `rank`, when present,
/// must match the gram size.
pub fn lattice_from_json(v: &Value) -> Result<Lattice> {
    let gram = matrix_from_json(v.get("gram").ok_or_else(|| parse_error("missing \"gram\""))?)?;
    if let Some(rank) = v.get("rank") {
        let rank = rank.as_u64().ok_or_else(|| parse_error("\"rank\" must be a positive integer"))?;
        if rank as usize != gram.len() {
            return Err(LatticeError::DimensionMismatch { expected: rank as usize, got: gram.len() });
        }
    }
    Lattice::new(gram)
}

/// `{"orders": [...], "b": [["p/q", ...]], "q": ["p/q", ...]}`.
pub fn finite_form_to_json(a: &FiniteQuadraticForm) -> Value {
    json!({
        "orders": a.orders.iter().map(int_to_json).collect::<Vec<_>>(),
        "b": a.b_matrix.iter().map(|r| rat_vector_to_json(r)).collect::<Vec<_>>(),
        "q": rat_vector_to_json(&a.q_values),
    })
}

pub fn orbit_report_to_json(r: &OrbitReport) -> Value {
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            json!({
                "alpha": int_to_json(&c.alpha),
                "disc_class": rat_vector_to_json(&c.disc_class),
                "size_in_window": c.members.len(),
                "representative": vector_to_json(c.representative()),
                "capped": c.capped,
            })
        })
        .collect();
    json!({
        "lattice": lattice_to_json(&r.lattice),
        "height": r.height,
        "discriminant": int_to_json(&r.discriminant),
        "classes": classes,
        "invariant_classes": r.invariant_classes,
        "discriminant_action_trivial": r.discriminant_action_trivial,
    })
}

/// Object field lookup with a parse error naming the key.
pub fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_error(format!("missing {key:?}")))
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}
