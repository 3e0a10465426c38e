//! Algebra interchange format and report serialization.
//!
//! ```json
//! { "name": "N1", "field": {"kind": "rational"}, "dim": 2,
//!   "labels": ["e1", "e2"],
//!   "ops": { "circ": [[0, 0, 0, "1"], [1, 1, 1, "1"]] },
//!   "mask": { "circ": [[1, 1]] },
//!   "meta": { "provenance": "..." } }
//! ```
//!
//! Omitted entries are zero; indices are 0-based. `mask` and `meta` are
//! optional.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::algcore::{Algebra, BilinearOp, CheckReport, Matrix, OpName, Status};
use crate::exactfield::{Field, Scalar};
use crate::linsolve::Subspace;
use crate::{Error, Result};

/// Largest dimension accepted from a file.
pub const MAX_DIM: usize = 4096;

const OPS: [OpName; 2] = [OpName::Dot, OpName::Circ];

pub fn field_to_json(f: Field) -> Value {
    match f {
        Field::Rational => json!({"kind": "rational"}),
        Field::Prime(p) => json!({"kind": "prime", "p": p}),
    }
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let obj = v.as_object().ok_or_else(|| bad("field must be an object"))?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("rational") => Ok(Field::Rational),
        Some("prime") => {
            let p = obj.get("p").and_then(Value::as_u64).ok_or_else(|| bad("prime field needs integer p"))?;
            Field::prime(p)
        }
        _ => Err(bad("field.kind must be \"rational\" or \"prime\"")),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub fn vector_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn rows_to_json(rows: &[Vec<Scalar>]) -> Value {
    Value::Array(rows.iter().map(|r| vector_to_json(r)).collect())
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    rows_to_json(&m.row_vectors())
}

pub fn subspace_to_json(s: &Subspace) -> Value {
    rows_to_json(s.basis())
}

pub fn op_to_json(op: &BilinearOp) -> Value {
    Value::Array(op.entries().map(|(i, j, k, c)| json!([i, j, k, c.to_string()])).collect())
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    let mut ops = Map::new();
    let mut mask = Map::new();
    for name in OPS {
        if let Ok(op) = a.op(name) {
            ops.insert(name.to_string(), op_to_json(op));
            if !op.mask().is_empty() {
                let pairs = op.mask().iter().map(|&(i, j)| json!([i, j])).collect();
                mask.insert(name.to_string(), Value::Array(pairs));
            }
        }
    }
    let mut out = Map::new();
    out.insert("name".into(), Value::String(a.name.clone()));
    out.insert("field".into(), field_to_json(a.field()));
    out.insert("dim".into(), json!(a.dim()));
    out.insert("labels".into(), json!(a.labels()));
    out.insert("ops".into(), Value::Object(ops));
    if !mask.is_empty() {
        out.insert("mask".into(), Value::Object(mask));
    }
    if let Some(p) = &a.provenance {
        out.insert("meta".into(), json!({"provenance": p}));
    }
    Value::Object(out)
}

fn index(v: &Value, dim: usize, what: &str) -> Result<usize> {
    let i = v.as_u64().ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))? as usize;
    if i >= dim {
        return Err(Error::IndexOutOfRange { index: i, dim });
    }
    Ok(i)
}

fn op_from_json(v: &Value, field: Field, dim: usize, name: OpName) -> Result<BilinearOp> {
    let rows = v.as_array().ok_or_else(|| bad(format!("ops.{name} must be an array")))?;
    let mut seen = BTreeSet::new();
    let mut entries = Vec::with_capacity(rows.len());
    for row in rows {
        let r = row.as_array().filter(|r| r.len() == 4).ok_or_else(|| bad(format!("ops.{name} entries are [i,j,k,\"c\"]")))?;
        let (i, j, k) = (index(&r[0], dim, "i")?, index(&r[1], dim, "j")?, index(&r[2], dim, "k")?);
        let c = match &r[3] {
            Value::String(s) => field.parse(s)?,
            Value::Number(n) if n.is_i64() => field.from_i64(n.as_i64().unwrap_or_default()),
            _ => return Err(bad("coefficients are strings or integers")),
        };
        if !seen.insert((i, j, k)) {
            return Err(bad(format!("ops.{name} repeats entry ({i},{j},{k})")));
        }
        entries.push((i, j, k, c));
    }
    BilinearOp::from_entries(field, dim, entries)
}

fn mask_from_json(v: &Value, dim: usize, name: OpName) -> Result<BTreeSet<(usize, usize)>> {
    let rows = v.as_array().ok_or_else(|| bad(format!("mask.{name} must be an array")))?;
    rows.iter()
        .map(|row| {
            let r = row.as_array().filter(|r| r.len() == 2).ok_or_else(|| bad("mask entries are [i,j]"))?;
            Ok((index(&r[0], dim, "i")?, index(&r[1], dim, "j")?))
        })
        .collect()
}

pub fn algebra_from_json(v: &Value) -> Result<Algebra> {
    let obj = v.as_object().ok_or_else(|| bad("algebra must be a JSON object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "name" | "field" | "dim" | "labels" | "ops" | "mask" | "meta") {
            return Err(bad(format!("unknown key {key:?}")));
        }
    }
    let field = field_from_json(obj.get("field").ok_or_else(|| bad("missing field"))?)?;
    let dim = obj.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("dim must be a positive integer"))? as usize;
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::Bound(format!("dim {dim} outside 1..={MAX_DIM}")));
    }
    let name = match obj.get("name") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(bad("name must be a string")),
    };
    let mut a = Algebra::new(name, field, dim);
    if let Some(l) = obj.get("labels") {
        let labels = l
            .as_array()
            .and_then(|xs| xs.iter().map(|x| x.as_str().map(String::from)).collect::<Option<Vec<_>>>())
            .ok_or_else(|| bad("labels must be strings"))?;
        a = a.with_labels(labels)?;
    }
    let ops = obj.get("ops").and_then(Value::as_object).ok_or_else(|| bad("ops must be an object"))?;
    let masks = match obj.get("mask") {
        None => Map::new(),
        Some(Value::Object(m)) => m.clone(),
        Some(_) => return Err(bad("mask must be an object")),
    };
    for key in ops.keys().chain(masks.keys()) {
        key.parse::<OpName>()?;
    }
    for name in OPS {
        let key = name.to_string();
        if let Some(v) = ops.get(&key) {
            let mut op = op_from_json(v, field, dim, name)?;
            if let Some(m) = masks.get(&key) {
                op.set_mask(mask_from_json(m, dim, name)?);
            }
            a = a.with_op(name, op)?;
        } else if masks.contains_key(&key) {
            return Err(bad(format!("mask.{key} given without ops.{key}")));
        }
    }
    if let Some(meta) = obj.get("meta") {
        if let Some(p) = meta.get("provenance") {
            let p = p.as_str().ok_or_else(|| bad("meta.provenance must be a string"))?;
            a = a.with_provenance(p);
        }
    }
    Ok(a)
}

pub fn algebra_from_str(s: &str) -> Result<Algebra> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))?;
    algebra_from_json(&v)
}

pub fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::NotApplicable => "not-applicable",
    }
}

/// `labels` is used to name witness indices when given.
pub fn check_report_to_json(r: &CheckReport, labels: Option<&[String]>) -> Value {
    let witness = match &r.witness {
        None => Value::Null,
        Some(w) => {
            let mut m = Map::new();
            m.insert("law".into(), json!(w.law));
            m.insert("indices".into(), json!(w.indices));
            if let Some(l) = labels {
                let names: Vec<&str> = w.indices.iter().map(|&i| l.get(i).map_or("?", String::as_str)).collect();
                m.insert("labels".into(), json!(names));
            }
            m.insert("residual".into(), vector_to_json(&w.residual));
            Value::Object(m)
        }
    };
    json!({
        "id": r.id,
        "pass": r.passed(),
        "status": status_str(r.status),
        "witness": witness,
        "note": r.note,
    })
}
