//! Versioned JSON reports. Floats are written with 17 significant digits so that equal runs
//! produce byte-identical files.

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

pub const SCHEMA: &str = "lagrangian-lab/1";

/// `x` with 17 significant digits, e.g. `9.2592592592592587e-2`; non-finite values become `null`.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(format_f64(x)).expect("formatted float is valid JSON")
}

pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    raw(*x).serialize(s)
}

pub fn ser_f64_seq<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for &x in xs {
        seq.serialize_element(&raw(x))?;
    }
    seq.end()
}

pub fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => raw(*v).serialize(s),
        None => s.serialize_none(),
    }
}

/// Envelope shared by every report: `{"schema": ..., "kind": ..., "report": ...}`.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: &'static str,
    pub kind: &'a str,
    pub report: &'a T,
}

/// Pretty-printed JSON document for `report`, newline terminated.
pub fn to_json<T: Serialize>(kind: &str, report: &T) -> String {
    let mut out = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, kind, report }).expect("reports serialize");
    out.push('\n');
    out
}

/// Edge lists inside reports: each edge as an array of vertices.
pub fn ser_graph<S: Serializer>(g: &crate::RGraph, s: S) -> Result<S::Ok, S::Error> {
    g.edge_tuples().serialize(s)
}

pub fn ser_graphs<S: Serializer>(gs: &[crate::RGraph], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(gs.len()))?;
    for g in gs {
        seq.serialize_element(&g.edge_tuples())?;
    }
    seq.end()
}
