use k3_thomae::identities::{Datum, VerifyReport};
use k3_thomae::C64;
use serde_json::{json, Map, Value};

use crate::args::Format;

/// One report line.
#[derive(Debug, Clone)]
pub struct Record {
    pub op: String,
    pub input: Value,
    pub result: Value,
    pub diagnostics: Value,
    pub pass: bool,
}

impl Record {
    pub fn new(op: impl Into<String>, input: Value, result: Value) -> Self {
        Self { op: op.into(), input, result, diagnostics: Value::Object(Map::new()), pass: true }
    }

    pub fn from_report(op: impl Into<String>, r: &VerifyReport) -> Self {
        let residuals: Map<String, Value> =
            r.residuals.iter().map(|(k, v)| (k.clone(), serde_json::to_value(v).expect("plain struct"))).collect();
        Self {
            op: op.into(),
            input: datums(&r.inputs),
            result: json!({ "residuals": residuals, "worst": r.worst() }),
            diagnostics: datums(&r.diagnostics),
            pass: r.pass,
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "op": self.op,
            "input": self.input,
            "result": self.result,
            "diagnostics": self.diagnostics,
            "pass": self.pass,
        })
    }
}

pub fn cx(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn cxs(z: &[C64]) -> Value {
    Value::Array(z.iter().map(|&v| cx(v)).collect())
}

pub fn datum(d: &Datum) -> Value {
    match d {
        Datum::Int(v) => json!(v),
        Datum::Real(v) => json!(v),
        Datum::Complex(v) => cx(*v),
        Datum::Ints(v) => json!(v),
        Datum::Reals(v) => json!(v),
        Datum::Complexes(v) => cxs(v),
        Datum::Text(v) => json!(v),
        Datum::Bool(v) => json!(v),
    }
}

fn datums<'a>(m: impl IntoIterator<Item = (&'a String, &'a Datum)>) -> Value {
    Value::Object(m.into_iter().map(|(k, v)| (k.clone(), datum(v))).collect())
}

/// Rounds every float to `digits` significant digits. Integers are left alone.
pub fn round(v: &mut Value, digits: u8) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r: f64 = format!("{:.*e}", digits as usize - 1, x).parse().expect("formatted float");
            *v = Value::from(r);
        }
        Value::Array(a) => a.iter_mut().for_each(|x| round(x, digits)),
        Value::Object(o) => o.values_mut().for_each(|x| round(x, digits)),
        _ => {}
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(o) => o.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Serializes report or error lines; CSV repeats the header whenever the column set changes.
pub fn render(lines: &[Value], format: Format, digits: u8) -> String {
    let values: Vec<Value> = lines
        .iter()
        .map(|l| {
            let mut v = l.clone();
            round(&mut v, digits);
            v
        })
        .collect();
    match format {
        Format::Json => values.iter().map(|v| format!("{v}\n")).collect(),
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
            let mut header: Option<Vec<String>> = None;
            for v in &values {
                let mut cells = Vec::new();
                flatten("", v, &mut cells);
                let (cols, vals): (Vec<String>, Vec<String>) = cells.into_iter().unzip();
                if header.as_ref() != Some(&cols) {
                    w.write_record(&cols).expect("in-memory write");
                    header = Some(cols);
                }
                w.write_record(&vals).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
        }
    }
}

pub fn error_value(op: &str, kind: &str, message: &str) -> Value {
    json!({ "op": op, "error": message, "kind": kind, "pass": false })
}
