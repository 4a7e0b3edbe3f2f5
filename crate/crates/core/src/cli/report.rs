//! Report trees, rendered either as indented text or as JSON. Both renderings
//! come from the same tree, so they always carry the same content.

use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

use crate::chart::{StabilizerReport, ToroidalChart};
use crate::format::ChartDocument;
use crate::lattice::{IntMatrix, LatticeVector, Subgroup};

pub const SCHEMA: &str = "toroidal-report";
pub const VERSION: u64 = 1;

pub fn int(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("decimal integer"))
}

pub fn vector(v: &LatticeVector) -> Value {
    Value::Array(v.0.iter().map(int).collect())
}

pub fn vectors(vs: &[LatticeVector]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    vectors(&m.row_vectors())
}

pub fn u64s(xs: &[u64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::from(x)).collect())
}

pub fn u64_rows(rows: &[Vec<u64>]) -> Value {
    Value::Array(rows.iter().map(|r| u64s(r)).collect())
}

/// Builder for an ordered object.
#[derive(Default)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Obj(Map::new())
    }

    pub fn put(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), v.into());
        self
    }
}

impl From<Obj> for Value {
    fn from(o: Obj) -> Value {
        Value::Object(o.0)
    }
}

pub fn subgroup(h: &Subgroup) -> Value {
    Obj::new()
        .put("order", h.order())
        .put("structure", u64s(&h.structure()))
        .put("generators", u64_rows(&h.generators()))
        .into()
}

pub fn chart(c: &ToroidalChart) -> Value {
    let d = ChartDocument::from_chart(c);
    let mut o = Obj::new()
        .put("rank", d.rank)
        .put("generators", vectors(&d.generators))
        .put("units", d.unit_rank)
        .put("t_count", d.t_count)
        .put("group", u64s(&d.group))
        .put("monomial_characters", u64_rows(&d.monomial_characters))
        .put("unit_characters", u64_rows(&d.unit_characters))
        .put("t_characters", u64_rows(&d.t_characters));
    if let Some(a) = &d.automorphisms {
        o = o.put("automorphisms", Value::Array(a.iter().map(|m| vectors(m)).collect()));
    }
    o.into()
}

pub fn stabilizers(r: &StabilizerReport) -> Value {
    Obj::new()
        .put("point", r.point.to_string())
        .put("stabilizer", subgroup(&r.g_x))
        .put("generic", subgroup(&r.g_eta))
        .put("monoid", subgroup(&r.g_mbar))
        .put("toroidal", subgroup(&r.g_tor))
        .put("simple", r.simple_at)
        .put("toroidal_action", r.toroidal_at)
        .into()
}

pub fn document(command: &str, result: Value) -> Value {
    Obj::new().put("schema", SCHEMA).put("version", VERSION).put("command", command).put("result", result).into()
}

pub fn error_document(command: &str, name: &str, code: i32, message: &str) -> Value {
    let err = Obj::new().put("name", name).put("code", code).put("message", message);
    Obj::new().put("schema", SCHEMA).put("version", VERSION).put("command", command).put("error", err).into()
}

pub fn to_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

fn is_inline(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(a) => a.iter().all(is_inline),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_inline(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render(x, indent + 2, out);
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                if is_inline(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}[{}]\n", i + 1));
                    render(x, indent + 2, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

pub fn to_text(doc: &Value) -> String {
    let mut out = format!("{SCHEMA} v{VERSION}\n");
    if let Value::Object(m) = doc {
        for (k, v) in m {
            if k == "schema" || k == "version" {
                continue;
            }
            let mut one = Map::new();
            one.insert(k.clone(), v.clone());
            render(&Value::Object(one), 0, &mut out);
        }
    }
    out
}
