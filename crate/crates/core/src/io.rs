//! JSON encodings for automorphisms, matrices and generating sets.

use serde_json::{json, Map, Value};

use crate::automorphism::{Automorphism, Factor};
use crate::error::{Error, Result};
use crate::genset::GeneratorSet;
use crate::graph::{Graph, Letter, LetterSet, VertexSet};
use crate::matrix::IntMatrix;
use crate::words::parse_word;

pub fn parse_json(what: &str, text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("{what} JSON at line {} column {}: {e}", e.line(), e.column())))
}

fn field<'a>(tok: &'a Value, key: &str) -> Result<&'a Value> {
    tok.get(key).ok_or_else(|| Error::Input(format!("token {tok} is missing {key:?}")))
}

fn str_field<'a>(tok: &'a Value, key: &str) -> Result<&'a str> {
    field(tok, key)?.as_str().ok_or_else(|| Error::Input(format!("{key:?} in {tok} must be a string")))
}

fn str_list(tok: &Value, key: &str) -> Result<Vec<String>> {
    let arr = field(tok, key)?.as_array().ok_or_else(|| Error::Input(format!("{key:?} in {tok} must be a list")))?;
    arr.iter()
        .map(|v| {
            v.as_str().map(str::to_string).ok_or_else(|| Error::Input(format!("{key:?} in {tok} must hold strings")))
        })
        .collect()
}

fn vertex_set(g: &Graph, names: &[String]) -> Result<VertexSet> {
    names.iter().map(|n| g.vertex(n)).collect()
}

/// One token, expanded by its optional `pow` into a factor list (leftmost
/// acts last).
pub fn parse_factor_token(g: &Graph, tok: &Value) -> Result<Vec<Factor>> {
    let kind = str_field(tok, "t")?;
    let f = match kind {
        "tv" => Factor::Transvection {
            mult: g.parse_letter(str_field(tok, "m")?)?,
            target: g.parse_letter(str_field(tok, "x")?)?,
        },
        "pc" => Factor::PartialConj {
            mult: g.parse_letter(str_field(tok, "m")?)?,
            set: vertex_set(g, &str_list(tok, "Y")?)?,
        },
        "inv" => Factor::Inversion(g.vertex(str_field(tok, "v")?)?),
        "graphic" => {
            let map = field(tok, "perm")?
                .as_object()
                .ok_or_else(|| Error::Input(format!("\"perm\" in {tok} must be an object")))?;
            let mut perm: Vec<usize> = (0..g.n()).collect();
            for (k, v) in map {
                let v = v.as_str().ok_or_else(|| Error::Input(format!("\"perm\" in {tok} must map names to names")))?;
                perm[g.vertex(k)?] = g.vertex(v)?;
            }
            let flips = match tok.get("flips") {
                Some(_) => vertex_set(g, &str_list(tok, "flips")?)?,
                None => VertexSet::EMPTY,
            };
            Factor::Permutation { perm, flips }
        }
        "wh2" => {
            let set: LetterSet = str_list(tok, "A")?
                .iter()
                .map(|s| g.parse_letter(s))
                .collect::<Result<Vec<Letter>>>()?
                .into_iter()
                .collect();
            Factor::Whitehead { set, mult: g.parse_letter(str_field(tok, "m")?)? }
        }
        "ctv" => Factor::CommTransvection {
            x: g.parse_letter(str_field(tok, "x")?)?,
            y: g.parse_letter(str_field(tok, "y")?)?,
            target: g.parse_letter(str_field(tok, "c")?)?,
        },
        "conj" => Factor::Inner(parse_word(g, str_field(tok, "u")?)?),
        other => return Err(Error::Input(format!("unknown factor type {other:?}"))),
    };
    let pow = match tok.get("pow") {
        None => 1,
        Some(p) => p.as_i64().ok_or_else(|| Error::Input(format!("\"pow\" in {tok} must be an integer")))?,
    };
    if pow.unsigned_abs() > 1000 {
        return Err(Error::Input(format!("\"pow\" in {tok} is out of range")));
    }
    f.validate(g)?;
    let unit = if pow < 0 { f.inverse() } else { f };
    Ok(vec![unit; pow.unsigned_abs() as usize])
}

/// A JSON list of tokens, read as the composition `t₁ ∘ t₂ ∘ ⋯` (the last
/// token acts first). An object with a `"factors"` list is also accepted.
pub fn parse_automorphism(g: &Graph, text: &str) -> Result<Automorphism> {
    automorphism_from_value(g, &parse_json("automorphism", text)?)
}

pub fn automorphism_from_value(g: &Graph, v: &Value) -> Result<Automorphism> {
    let list = match v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Input("automorphism object needs a \"factors\" list".into()))?,
        _ => return Err(Error::Input("automorphism must be a list of factor tokens".into())),
    };
    let mut factors = Vec::new();
    for tok in list {
        factors.extend(parse_factor_token(g, tok)?);
    }
    Ok(Automorphism::from_factors(g, factors))
}

pub fn factor_to_json(g: &Graph, f: &Factor) -> Value {
    let names = |s: VertexSet| s.iter().map(|v| g.name(v).to_string()).collect::<Vec<_>>();
    match f {
        Factor::Transvection { mult, target } => {
            json!({"t": "tv", "m": g.letter_name(*mult), "x": g.letter_name(*target)})
        }
        Factor::PartialConj { mult, set } => json!({"t": "pc", "m": g.letter_name(*mult), "Y": names(*set)}),
        Factor::Inversion(v) => json!({"t": "inv", "v": g.name(*v)}),
        Factor::Permutation { perm, flips } => {
            let map: Map<String, Value> =
                perm.iter().enumerate().map(|(v, &p)| (g.name(v).to_string(), Value::from(g.name(p)))).collect();
            if flips.is_empty() {
                json!({"t": "graphic", "perm": map})
            } else {
                json!({"t": "graphic", "perm": map, "flips": names(*flips)})
            }
        }
        Factor::Whitehead { set, mult } => {
            let a: Vec<String> = set.iter().map(|l| g.letter_name(l)).collect();
            json!({"t": "wh2", "m": g.letter_name(*mult), "A": a})
        }
        Factor::CommTransvection { x, y, target } => {
            json!({"t": "ctv", "x": g.letter_name(*x), "y": g.letter_name(*y), "c": g.letter_name(*target)})
        }
        Factor::Inner(u) => {
            json!({"t": "conj", "u": crate::graph::LettersDisplay { graph: g, letters: u }.to_string()})
        }
    }
}

pub fn images_to_json(g: &Graph, a: &Automorphism) -> Value {
    let m: Map<String, Value> =
        (0..g.n()).map(|x| (g.name(x).to_string(), Value::from(a.image(x).display(g).to_string()))).collect();
    Value::Object(m)
}

pub fn automorphism_to_json(g: &Graph, a: &Automorphism) -> Value {
    json!({
        "factors": a.factors().iter().map(|f| factor_to_json(g, f)).collect::<Vec<_>>(),
        "images": images_to_json(g, a),
        "homology": matrix_to_json(&a.homology_matrix()),
    })
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    json!(m.rows())
}

/// A square matrix as a list of rows, or an object with a `"matrix"` key.
pub fn matrix_from_value(v: &Value) -> Result<IntMatrix> {
    let rows = match v {
        Value::Object(o) => o.get("matrix").ok_or_else(|| Error::Input("object needs a \"matrix\" key".into()))?,
        other => other,
    };
    let rows = rows.as_array().ok_or_else(|| Error::Input("matrix must be a list of rows".into()))?;
    let parsed: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Input("matrix row must be a list".into()))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::Input(format!("matrix entry {x} is not an integer"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    IntMatrix::from_rows(&parsed)
}

pub fn generator_set_to_json(g: &Graph, set: &GeneratorSet) -> Value {
    let mut counts = Map::new();
    for e in set.iter() {
        let c = counts.entry(e.tag.as_str()).or_insert(Value::from(0));
        *c = Value::from(c.as_u64().unwrap() + 1);
    }
    let elements: Vec<Value> = set
        .iter()
        .map(|e| {
            json!({
                "tag": e.tag.as_str(),
                "label": e.label,
                "pure": e.pure,
                "images": images_to_json(g, &e.auto),
                "homology": matrix_to_json(&e.auto.homology_matrix()),
            })
        })
        .collect();
    json!({"name": set.name, "count": set.len(), "counts": counts, "elements": elements})
}
