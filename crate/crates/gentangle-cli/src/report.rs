//! Machine-readable command reports: a fixed JSON shape
//! {command, inputs_digest, results, diagnostics, residuals} with numbers
//! rounded to 12 significant digits, plus a flattened CSV rendering.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// Round to 12 significant digits so printed output is stable and identical
/// runs are byte-identical.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn num(x: f64) -> Value {
    Value::from(sig12(x))
}

pub fn num_vec(xs: &[f64]) -> Value {
    Value::from(xs.iter().map(|&x| num(x)).collect::<Vec<_>>())
}

/// A complex vector as [[re, im], …].
pub fn complex_vec(v: &gentangle::operator::CVector) -> Value {
    Value::from(
        v.iter()
            .map(|z| Value::from(vec![num(z.re), num(z.im)]))
            .collect::<Vec<_>>(),
    )
}

/// A real matrix as nested rows.
pub fn real_matrix(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::from(
        (0..m.nrows())
            .map(|i| num_vec(&(0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<_>>()))
            .collect::<Vec<_>>(),
    )
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub results: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
    pub residuals: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, digest: String) -> Self {
        Report {
            command: command.to_string(),
            inputs_digest: digest,
            results: Map::new(),
            diagnostics: Map::new(),
            residuals: Map::new(),
        }
    }

    pub fn result(&mut self, key: &str, value: Value) -> &mut Self {
        self.results.insert(key.to_string(), value);
        self
    }

    pub fn diagnostic(&mut self, key: &str, value: Value) -> &mut Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    pub fn residual(&mut self, key: &str, value: f64) -> &mut Self {
        self.residuals.insert(key.to_string(), num(value));
        self
    }

    fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command.clone()));
        top.insert("inputs_digest".into(), Value::from(self.inputs_digest.clone()));
        top.insert("results".into(), Value::Object(self.results.clone()));
        top.insert("diagnostics".into(), Value::Object(self.diagnostics.clone()));
        top.insert("residuals".into(), Value::Object(self.residuals.clone()));
        Value::Object(top)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("command".into(), self.command.clone()),
            ("inputs_digest".into(), self.inputs_digest.clone()),
        ];
        flatten("results", &Value::Object(self.results.clone()), &mut rows);
        flatten("diagnostics", &Value::Object(self.diagnostics.clone()), &mut rows);
        flatten("residuals", &Value::Object(self.residuals.clone()), &mut rows);
        let mut out = String::from("key,value\n");
        for (k, v) in rows {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&format!("{prefix}.{k}"), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
    }
}

/// Digest of everything that determines a command's output: the subcommand,
/// the raw bytes of each input file, and the effective options.
pub struct DigestBuilder {
    hasher: Sha256,
}

impl DigestBuilder {
    pub fn new(command: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        DigestBuilder { hasher }
    }

    pub fn file(mut self, bytes: &[u8]) -> Self {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
        self
    }

    pub fn option(mut self, key: &str, value: &str) -> Self {
        self.hasher.update(key.as_bytes());
        self.hasher.update(b"=");
        self.hasher.update(value.as_bytes());
        self.hasher.update(b";");
        self
    }

    pub fn finish(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}
