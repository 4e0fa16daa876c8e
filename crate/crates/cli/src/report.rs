//! Report envelope and the two output encodings.
//!
//! Objects are `serde_json` maps without `preserve_order`, so keys come out
//! sorted and reports are byte-stable.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use massey_core::{DegreeWindow, FieldSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Json,
    Table,
}

/// Outcome of the sign-convention audit attached to every report.
#[derive(Clone, Debug, Default)]
pub struct SignAudit {
    /// `m2{m2} = 0`.
    pub multiplication: Option<bool>,
    /// `d(id) = m2`.
    pub identity: Option<bool>,
    /// `d∘d = 0` on every assembled window, with the offending bidegrees.
    pub d_squared: Vec<(String, Vec<(i64, i64)>)>,
}

impl SignAudit {
    pub fn passed(&self) -> bool {
        self.multiplication != Some(false) && self.identity != Some(false) && self.d_squared.iter().all(|(_, v)| v.is_empty())
    }

    fn to_json(&self) -> Value {
        let windows: Map<String, Value> = self
            .d_squared
            .iter()
            .map(|(name, defects)| (name.clone(), json!(defects.iter().map(|(p, q)| json!([p, q])).collect::<Vec<_>>())))
            .collect();
        json!({
            "status": if self.passed() { "pass" } else { "fail" },
            "m2_brace_m2_zero": self.multiplication,
            "d_identity_is_m2": self.identity,
            "d_squared_defects": windows,
        })
    }
}

pub fn digest(input: &[u8]) -> String {
    Sha256::digest(input).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn window_json(w: Option<DegreeWindow>) -> Value {
    match w {
        Some(w) => json!({"p": [w.p_min, w.p_max], "q": [w.q_min, w.q_max]}),
        None => Value::Null,
    }
}

pub struct Report {
    pub command: &'static str,
    pub digest: String,
    pub field: FieldSpec,
    pub window: Option<DegreeWindow>,
    pub parameters: Value,
    pub audit: SignAudit,
    /// `None` when the computation stopped on a mathematical failure.
    pub result: Option<Value>,
    /// Human-readable reason for exit code 1.
    pub failure: Option<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.failure.is_some() || !self.audit.passed() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input_sha256": self.digest,
            "field": self.field.to_string(),
            "window": window_json(self.window),
            "parameters": self.parameters,
            "sign_audit": self.audit.to_json(),
            "status": if self.exit_code() == 0 { "ok" } else { "failed" },
            "failure": self.failure,
            "result": self.result.clone().unwrap_or(Value::Null),
        })
    }

    pub fn render(&self, emit: Emit) -> String {
        match emit {
            Emit::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
            Emit::Table => {
                let mut out = String::new();
                flatten_into(&mut out, "", &self.to_json());
                out
            }
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Arrays of flat objects become aligned tables; everything else becomes `key: value` lines.
fn flatten_into(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_into(out, &key, x);
            }
        }
        Value::Array(items) if !items.is_empty() && items.iter().all(is_flat_object) => {
            out.push_str(&format!("{prefix}:\n"));
            out.push_str(&table(items));
        }
        other => out.push_str(&format!("{prefix}: {}\n", scalar_text(other))),
    }
}

fn is_flat_object(v: &Value) -> bool {
    v.as_object().is_some_and(|m| m.values().all(|x| !x.is_object()))
}

const LEADING: [&str; 9] = ["complex", "part", "arity", "from_arity", "n", "s", "t", "p", "q"];

fn table(items: &[Value]) -> String {
    let mut columns: Vec<String> = Vec::new();
    for item in items {
        for k in item.as_object().unwrap().keys() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    // index columns first, the rest alphabetically
    let rank = |c: &String| LEADING.iter().position(|l| l == c).unwrap_or(LEADING.len());
    columns.sort_by_key(rank);
    let cells: Vec<Vec<String>> = items
        .iter()
        .map(|item| columns.iter().map(|c| scalar_text(item.get(c).unwrap_or(&Value::Null))).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap())
        .collect();
    let line = |row: &[String]| {
        let parts: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("  {}\n", parts.join("  ").trim_end())
    };
    let mut s = line(&columns);
    for r in &cells {
        s.push_str(&line(r));
    }
    s
}
