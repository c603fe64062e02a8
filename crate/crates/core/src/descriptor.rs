//! JSON descriptors for fields and q-matroids.
//!
//! ```json
//! {"kind": "represented", "field": {"q": 2, "m": 7, "modulus": [1,1,0,0,0,0,0,1]},
//!  "generator": [["1", "0", "w^3"], ...]}
//! {"kind": "uniform", "q": 2, "k": 1, "n": 2}
//! {"kind": "spread", "q": 3, "n": 4, "k": 2, "members": [[[1,0,0,0],[0,1,0,0]], ...]}
//! {"kind": "mixed_spread", "q": 2, "n": 6, "members": [...]}
//! {"kind": "table", "q": 2, "n": 2, "ranks": [{"subspace": [[1,0]], "rank": 1}, ...]}
//! ```

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::{default_modulus, Field, FieldSpec};
use crate::lattice::SubspaceId;
use crate::linalg::Mat;
use crate::qmatroid::{Oracle, QMatroid};
use crate::rmcode::RankMetricCode;

fn bad(msg: impl Into<String>) -> Error {
    Error::BadDescriptor(msg.into())
}

fn get_usize(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("missing or non-integer field `{key}`")))
}

fn get_opt_usize(v: &Value, key: &str) -> Result<Option<usize>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => get_usize(v, key).map(Some),
    }
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let q = get_usize(v, "q")? as u32;
    let m = get_opt_usize(v, "m")?.unwrap_or(1);
    match v.get("modulus") {
        None | Some(Value::Null) => FieldSpec::new(q, m, &default_modulus(q, m)?),
        Some(Value::Array(cs)) => {
            let coeffs = cs
                .iter()
                .map(|c| c.as_u64().map(|c| c as u32).ok_or_else(|| bad("modulus coefficients must be integers")))
                .collect::<Result<Vec<u32>>>()?;
            FieldSpec::new(q, m, &coeffs)
        }
        Some(_) => Err(bad("`modulus` must be an array of coefficients, constant term first")),
    }
}

pub fn field_to_json(f: &Field) -> Value {
    json!({"q": f.q(), "m": f.m(), "modulus": f.modulus()})
}

fn members_from_json(v: &Value, q: u32) -> Result<(usize, Vec<SubspaceId>)> {
    let members = v.get("members").and_then(Value::as_array).ok_or_else(|| bad("missing `members`"))?;
    let first_row_len = members
        .iter()
        .filter_map(|m| m.as_array()?.first()?.as_array().map(|r| r.len()))
        .next();
    let n = match get_opt_usize(v, "n")? {
        Some(n) => n,
        None => first_row_len.ok_or_else(|| bad("cannot infer `n` from members"))?,
    };
    let parsed = members.iter().map(|m| SubspaceId::from_json(q, n, m)).collect::<Result<Vec<_>>>()?;
    Ok((n, parsed))
}

/// A rank-metric code from a represented descriptor.
pub fn code_from_json(v: &Value) -> Result<RankMetricCode> {
    match v.get("kind").and_then(Value::as_str) {
        Some("represented") | None => {}
        Some(other) => return Err(bad(format!("a code needs kind `represented`, got `{other}`"))),
    }
    let field = field_from_json(v.get("field").ok_or_else(|| bad("missing `field`"))?)?;
    let g = Mat::from_json(&field, v.get("generator").ok_or_else(|| bad("missing `generator`"))?)?;
    RankMetricCode::new(g)
}

pub fn qmatroid_from_json(v: &Value) -> Result<QMatroid> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing `kind`"))?;
    match kind {
        "represented" => {
            let code = code_from_json(v)?;
            QMatroid::represented(code.generator().clone())
        }
        "uniform" => QMatroid::uniform(get_usize(v, "q")? as u32, get_usize(v, "k")?, get_usize(v, "n")?),
        "spread" => {
            let q = get_usize(v, "q")? as u32;
            let (n, members) = members_from_json(v, q)?;
            let m = QMatroid::spread(q, n, members)?;
            if let Some(k) = get_opt_usize(v, "k")? {
                if k != m.k() {
                    return Err(bad(format!("declared k = {k} but members have dimension {}", m.k())));
                }
            }
            Ok(m)
        }
        "mixed_spread" => {
            let q = get_usize(v, "q")? as u32;
            let (n, members) = members_from_json(v, q)?;
            QMatroid::mixed_spread(q, n, members)
        }
        "table" => {
            let q = get_usize(v, "q")? as u32;
            let n = get_usize(v, "n")?;
            let entries = v.get("ranks").and_then(Value::as_array).ok_or_else(|| bad("missing `ranks`"))?;
            let mut ranks = HashMap::new();
            for e in entries {
                let s = SubspaceId::from_json(q, n, e.get("subspace").ok_or_else(|| bad("rank entry without `subspace`"))?)?;
                ranks.insert(s, get_usize(e, "rank")?);
            }
            QMatroid::from_table(q, n, ranks)
        }
        other => Err(bad(format!("unknown kind `{other}`"))),
    }
}

pub fn qmatroid_to_json(m: &QMatroid) -> Result<Value> {
    let members = |ms: &[SubspaceId]| Value::Array(ms.iter().map(SubspaceId::to_json).collect());
    Ok(match m.oracle() {
        Oracle::Represented(g) => json!({"kind": "represented", "field": field_to_json(g.field()), "generator": g.to_json()}),
        Oracle::Uniform => json!({"kind": "uniform", "q": m.q(), "k": m.k(), "n": m.n()}),
        Oracle::Spread(ms) => json!({"kind": "spread", "q": m.q(), "n": m.n(), "k": m.k(), "members": members(ms)}),
        Oracle::MixedSpread(ms) => json!({"kind": "mixed_spread", "q": m.q(), "n": m.n(), "members": members(ms)}),
        Oracle::Table(_) => {
            let lattice = m.lattice()?;
            let ranks = m.rank_vector()?;
            let entries: Vec<Value> = lattice
                .subspaces()
                .iter()
                .zip(ranks.iter())
                .map(|(s, r)| json!({"subspace": s.to_json(), "rank": r}))
                .collect();
            json!({"kind": "table", "q": m.q(), "n": m.n(), "ranks": entries})
        }
    })
}
