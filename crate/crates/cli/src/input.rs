//! The input document: parsing, label resolution and construction of the
//! core objects. Every error carries the JSON path (or line and column for
//! syntax errors) of the offending value.

use std::collections::BTreeMap;
use std::fmt;

use massey_core::ainfty::{AkAlgebra, AkBimodule};
use massey_core::algebra::{Bimodule, GradedAlgebra};
use massey_core::operad::Cochain;
use massey_core::{DegreeWindow, FieldSpec, GradedSpace, Scalar};
use serde::Deserialize;
use serde_json::Value;

/// An input error with the place it was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl InputError {
    pub fn at(location: impl Into<String>, message: impl Into<String>) -> InputError {
        InputError {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

type Rows = Vec<Vec<Value>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    field: Value,
    spaces: BTreeMap<String, Vec<(String, i64)>>,
    algebra: RawAlgebra,
    #[serde(default)]
    bimodule: Option<RawBimodule>,
    #[serde(default)]
    higher_ops: Option<RawHigherOps>,
    #[serde(default)]
    task: Task,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    space: String,
    products: Rows,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBimodule {
    space: String,
    #[serde(default)]
    left: Rows,
    #[serde(default)]
    right: Rows,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHigherOps {
    #[serde(default)]
    algebra: BTreeMap<String, Rows>,
    #[serde(default)]
    module: BTreeMap<String, Rows>,
}

/// Task parameters; command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Task {
    pub window: Option<String>,
    pub k: Option<usize>,
    pub target_arity: Option<usize>,
    pub sparse_d: Option<usize>,
    /// Length offset of the Massey class `⟨m_{d+2}⟩`.
    pub d: Option<usize>,
    /// Largest `n` a range check looks at.
    pub range: Option<usize>,
    pub theorem: Option<String>,
    pub context: Option<String>,
}

/// A table row `[in_1, …, in_n, out, coefficient]` with its location.
#[derive(Debug, Clone)]
struct OpRow {
    path: String,
    inputs: Vec<String>,
    output: String,
    coefficient: Value,
}

/// A parsed, label-checked document. Scalars are read when a field is fixed.
#[derive(Debug, Clone)]
pub struct Document {
    field: FieldSpec,
    algebra_basis: Vec<(String, i64)>,
    algebra_rows: Vec<OpRow>,
    module: Option<(Vec<(String, i64)>, Vec<OpRow>, Vec<OpRow>)>,
    algebra_ops: BTreeMap<usize, Vec<OpRow>>,
    module_ops: BTreeMap<usize, Vec<OpRow>>,
    pub task: Task,
}

pub fn parse_field(text: &str) -> Result<FieldSpec, String> {
    let text = text.trim();
    if text == "Q" {
        return Ok(FieldSpec::Rational);
    }
    let p = text
        .strip_prefix("Fp:")
        .ok_or_else(|| format!("unknown field {text:?}; expected Q or Fp:<p>"))?;
    let p: u64 = p.parse().map_err(|_| format!("bad characteristic {p:?}"))?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

fn field_from_value(v: &Value) -> Result<FieldSpec, InputError> {
    let err = |m: String| InputError::at("$.field", m);
    match v {
        Value::String(s) if s == "Q" => Ok(FieldSpec::Rational),
        Value::Object(o) if o.len() == 1 && o.contains_key("Fp") => {
            let p = o["Fp"].as_u64().ok_or_else(|| err("Fp must be a positive integer".into()))?;
            FieldSpec::prime(p).map_err(|e| err(e.to_string()))
        }
        _ => Err(err(format!("expected \"Q\" or {{\"Fp\": p}}, got {v}"))),
    }
}

/// Parses a window `p_min:p_max,q_min:q_max`.
pub fn parse_window(text: &str) -> Result<DegreeWindow, String> {
    let bad = || format!("bad window {text:?}; expected p_min:p_max,q_min:q_max");
    let (p, q) = text.split_once(',').ok_or_else(bad)?;
    let range = |s: &str| -> Result<(i64, i64), String> {
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
    };
    let ((p0, p1), (q0, q1)) = (range(p)?, range(q)?);
    DegreeWindow::new(p0, p1, q0, q1).map_err(|e| format!("{}: {e}", bad()))
}

fn syntax_error(e: &serde_json::Error) -> InputError {
    InputError::at(format!("line {} column {}", e.line(), e.column()), e.to_string())
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str], required: &[&str]) -> Result<&'a serde_json::Map<String, Value>, InputError> {
    let m = v.as_object().ok_or_else(|| InputError::at(path, format!("expected an object, got {v}")))?;
    for k in m.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(InputError::at(path, format!("unknown key {k:?}; expected one of {}", allowed.join(", "))));
        }
    }
    for k in required {
        if !m.contains_key(*k) {
            return Err(InputError::at(path, format!("missing key {k:?}")));
        }
    }
    Ok(m)
}

fn string_at(v: &Value, path: &str) -> Result<(), InputError> {
    v.as_str().map(|_| ()).ok_or_else(|| InputError::at(path, format!("expected a string, got {v}")))
}

fn rows_at(v: &Value, path: &str) -> Result<(), InputError> {
    let rows = v.as_array().ok_or_else(|| InputError::at(path, format!("expected an array of rows, got {v}")))?;
    for (i, row) in rows.iter().enumerate() {
        if !row.is_array() {
            return Err(InputError::at(format!("{path}[{i}]"), format!("expected a row array, got {row}")));
        }
    }
    Ok(())
}

fn ops_at(v: &Value, path: &str) -> Result<(), InputError> {
    let m = v.as_object().ok_or_else(|| InputError::at(path, format!("expected an object keyed by arity, got {v}")))?;
    for (k, rows) in m {
        rows_at(rows, &format!("{path}.{k}"))?;
    }
    Ok(())
}

/// Structural pass over the parsed value so that shape errors get a JSON path.
fn check_shape(doc: &Value) -> Result<(), InputError> {
    let top = object(doc, "$", &["field", "spaces", "algebra", "bimodule", "higher_ops", "task"], &["field", "spaces", "algebra"])?;
    let spaces = top["spaces"]
        .as_object()
        .ok_or_else(|| InputError::at("$.spaces", "expected an object of named bases"))?;
    for (name, basis) in spaces {
        let path = format!("$.spaces.{name}");
        let entries = basis.as_array().ok_or_else(|| InputError::at(&path, "expected an array of [label, degree] pairs"))?;
        for (i, e) in entries.iter().enumerate() {
            let ok = e.as_array().is_some_and(|p| p.len() == 2 && p[0].is_string() && p[1].is_i64());
            if !ok {
                return Err(InputError::at(format!("{path}[{i}]"), format!("expected [label, integer degree], got {e}")));
            }
        }
    }
    let alg = object(&top["algebra"], "$.algebra", &["space", "products"], &["space", "products"])?;
    string_at(&alg["space"], "$.algebra.space")?;
    rows_at(&alg["products"], "$.algebra.products")?;
    if let Some(b) = top.get("bimodule") {
        let b = object(b, "$.bimodule", &["space", "left", "right"], &["space"])?;
        string_at(&b["space"], "$.bimodule.space")?;
        for side in ["left", "right"] {
            if let Some(rows) = b.get(side) {
                rows_at(rows, &format!("$.bimodule.{side}"))?;
            }
        }
    }
    if let Some(h) = top.get("higher_ops") {
        let h = object(h, "$.higher_ops", &["algebra", "module"], &[])?;
        for (k, ops) in h {
            ops_at(ops, &format!("$.higher_ops.{k}"))?;
        }
    }
    if let Some(t) = top.get("task") {
        let keys = ["window", "k", "target_arity", "sparse_d", "d", "range", "theorem", "context"];
        let t = object(t, "$.task", &keys, &[])?;
        for (k, v) in t {
            let path = format!("$.task.{k}");
            match k.as_str() {
                "window" | "theorem" | "context" => string_at(v, &path)?,
                _ if !v.is_u64() => return Err(InputError::at(path, format!("expected a non-negative integer, got {v}"))),
                _ => {}
            }
        }
    }
    Ok(())
}

fn resolve(labels: &BTreeMap<&str, bool>, label: &Value, path: &str, module_allowed: bool) -> Result<String, InputError> {
    let s = label
        .as_str()
        .ok_or_else(|| InputError::at(path, format!("expected a basis label, got {label}")))?;
    match labels.get(s) {
        Some(true) if !module_allowed => Err(InputError::at(path, format!("{s:?} is a module label; an algebra label is required here"))),
        Some(_) => Ok(s.to_string()),
        None => Err(InputError::at(path, format!("unknown basis label {s:?}"))),
    }
}

fn op_rows(rows: &Rows, path: &str, arity: usize, labels: &BTreeMap<&str, bool>, module_allowed: bool) -> Result<Vec<OpRow>, InputError> {
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        if row.len() != arity + 2 {
            return Err(InputError::at(
                &rp,
                format!("expected {} entries (inputs, output, coefficient), got {}", arity + 2, row.len()),
            ));
        }
        let mut names = Vec::with_capacity(arity + 1);
        for (j, v) in row[..=arity].iter().enumerate() {
            names.push(resolve(labels, v, &format!("{rp}[{j}]"), module_allowed)?);
        }
        let output = names.pop().unwrap();
        out.push(OpRow {
            path: rp,
            inputs: names,
            output,
            coefficient: row[arity + 1].clone(),
        });
    }
    Ok(out)
}

fn scalar(field: FieldSpec, v: &Value, path: &str) -> Result<Scalar, InputError> {
    let err = |m: String| InputError::at(format!("{path}[-1]"), m);
    match v {
        Value::Number(n) => {
            let n = n.as_i64().ok_or_else(|| err(format!("coefficient {n} is not an integer; write rationals as \"a/b\"")))?;
            Ok(Scalar::from_i64(field, n))
        }
        Value::String(s) => Scalar::parse(field, s).map_err(|e| err(e.to_string())),
        _ => Err(err(format!("expected a coefficient, got {v}"))),
    }
}

fn parse_arity(key: &str, path: &str) -> Result<usize, InputError> {
    match key.parse::<usize>() {
        Ok(n) if n >= 3 => Ok(n),
        _ => Err(InputError::at(path, format!("higher operation arity must be an integer ≥ 3, got {key:?}"))),
    }
}

fn space_basis<'a>(spaces: &'a BTreeMap<String, Vec<(String, i64)>>, name: &str, path: &str) -> Result<&'a Vec<(String, i64)>, InputError> {
    spaces
        .get(name)
        .ok_or_else(|| InputError::at(path, format!("unknown space {name:?}")))
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, InputError> {
        let value: Value = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
        check_shape(&value)?;
        let raw: RawDocument = serde_json::from_value(value).map_err(|e| InputError::at("$", e.to_string()))?;
        let field = field_from_value(&raw.field)?;
        for (name, basis) in &raw.spaces {
            let mut seen = BTreeMap::new();
            for (i, (l, _)) in basis.iter().enumerate() {
                if seen.insert(l.as_str(), i).is_some() {
                    return Err(InputError::at(format!("$.spaces.{name}[{i}]"), format!("duplicate basis label {l:?}")));
                }
            }
        }
        let algebra_basis = space_basis(&raw.spaces, &raw.algebra.space, "$.algebra.space")?;
        let mut labels: BTreeMap<&str, bool> = algebra_basis.iter().map(|(l, _)| (l.as_str(), false)).collect();
        let algebra_rows = op_rows(&raw.algebra.products, "$.algebra.products", 2, &labels, false)?;

        let module = match &raw.bimodule {
            None => None,
            Some(b) => {
                if b.space == raw.algebra.space {
                    return Err(InputError::at("$.bimodule.space", "the module needs its own space; copy the basis under new labels"));
                }
                let basis = space_basis(&raw.spaces, &b.space, "$.bimodule.space")?;
                for (i, (l, _)) in basis.iter().enumerate() {
                    if labels.insert(l.as_str(), true).is_some() {
                        return Err(InputError::at(format!("$.spaces.{}[{i}]", b.space), format!("label {l:?} is used by both spaces")));
                    }
                }
                let left = op_rows(&b.left, "$.bimodule.left", 2, &labels, true)?;
                let right = op_rows(&b.right, "$.bimodule.right", 2, &labels, true)?;
                check_action_rows(&left, &labels, true)?;
                check_action_rows(&right, &labels, false)?;
                Some((basis.clone(), left, right))
            }
        };

        let mut algebra_ops = BTreeMap::new();
        let mut module_ops = BTreeMap::new();
        if let Some(h) = &raw.higher_ops {
            for (key, rows) in &h.algebra {
                let path = format!("$.higher_ops.algebra.{key}");
                let n = parse_arity(key, &path)?;
                algebra_ops.insert(n, op_rows(rows, &path, n, &labels, false)?);
            }
            if !h.module.is_empty() && module.is_none() {
                return Err(InputError::at("$.higher_ops.module", "module operations need a bimodule"));
            }
            for (key, rows) in &h.module {
                let path = format!("$.higher_ops.module.{key}");
                let n = parse_arity(key, &path)?;
                let rows = op_rows(rows, &path, n, &labels, true)?;
                for r in &rows {
                    let sig = signature(r, &labels);
                    let m = sig.chars().filter(|c| *c == 'M').count();
                    if m != 2 || !sig.ends_with('M') {
                        return Err(InputError::at(&r.path, format!("slot signature {sig} is not allowed; exactly one module input and a module output")));
                    }
                }
                module_ops.insert(n, rows);
            }
        }
        Ok(Document {
            field,
            algebra_basis: algebra_basis.clone(),
            algebra_rows,
            module,
            algebra_ops,
            module_ops,
            task: raw.task,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn has_module(&self) -> bool {
        self.module.is_some()
    }

    /// Largest arity among the given higher operations.
    pub fn top_arity(&self) -> Option<usize> {
        self.algebra_ops.keys().chain(self.module_ops.keys()).copied().max()
    }

    pub fn algebra(&self, field: FieldSpec) -> Result<GradedAlgebra, InputError> {
        let space = GradedSpace::new(field, self.algebra_basis.clone()).map_err(|e| InputError::at("$.spaces", e.to_string()))?;
        let rows = action_rows(field, &self.algebra_rows)?;
        GradedAlgebra::new(space, &rows).map_err(|e| InputError::at("$.algebra.products", e.to_string()))
    }

    pub fn bimodule(&self, algebra: &GradedAlgebra) -> Result<Option<Bimodule>, InputError> {
        let Some((basis, left, right)) = &self.module else {
            return Ok(None);
        };
        let field = algebra.field();
        let space = GradedSpace::new(field, basis.clone()).map_err(|e| InputError::at("$.spaces", e.to_string()))?;
        let (l, r) = (action_rows(field, left)?, action_rows(field, right)?);
        Bimodule::new(algebra, space, &l, &r)
            .map(Some)
            .map_err(|e| InputError::at("$.bimodule", e.to_string()))
    }

    /// The algebra with its higher operations as an `A_k`-structure.
    pub fn ak_algebra(&self, algebra: &GradedAlgebra, k: usize) -> Result<AkAlgebra, InputError> {
        let mut s = AkAlgebra::new(algebra, k).map_err(|e| InputError::at("k", e.to_string()))?;
        for (&n, rows) in &self.algebra_ops {
            let path = format!("$.higher_ops.algebra.{n}");
            if n > k {
                return Err(InputError::at(path, format!("operation of arity {n} exceeds k = {k}")));
            }
            let op = cochain(s.handle(), n, rows, algebra.field(), &path)?;
            s.set_op(n, op).map_err(|e| InputError::at(path, e.to_string()))?;
        }
        Ok(s)
    }

    pub fn ak_bimodule(&self, parent: &AkAlgebra, module: &Bimodule, k: usize) -> Result<AkBimodule, InputError> {
        let mut s = AkBimodule::new(parent, module, k).map_err(|e| InputError::at("k", e.to_string()))?;
        for (&n, rows) in &self.module_ops {
            let path = format!("$.higher_ops.module.{n}");
            if n > k {
                return Err(InputError::at(path, format!("operation of arity {n} exceeds k = {k}")));
            }
            let op = cochain(s.handle(), n, rows, parent.field(), &path)?;
            s.set_op(n, op).map_err(|e| InputError::at(path, e.to_string()))?;
        }
        Ok(s)
    }
}

fn signature(r: &OpRow, labels: &BTreeMap<&str, bool>) -> String {
    let c = |l: &String| if labels[l.as_str()] { 'M' } else { 'A' };
    let ins: String = r.inputs.iter().map(c).collect();
    format!("{ins}->{}", c(&r.output))
}

/// Left rows are `a·m → n`, right rows `m·a → n`.
fn check_action_rows(rows: &[OpRow], labels: &BTreeMap<&str, bool>, left: bool) -> Result<(), InputError> {
    let want = if left { "AM->M" } else { "MA->M" };
    for r in rows {
        let sig = signature(r, labels);
        if sig != want {
            return Err(InputError::at(&r.path, format!("slot signature {sig}, expected {want}")));
        }
    }
    Ok(())
}

fn action_rows(field: FieldSpec, rows: &[OpRow]) -> Result<Vec<(String, String, String, Scalar)>, InputError> {
    rows.iter()
        .map(|r| {
            Ok((
                r.inputs[0].clone(),
                r.inputs[1].clone(),
                r.output.clone(),
                scalar(field, &r.coefficient, &r.path)?,
            ))
        })
        .collect()
}

fn cochain(
    handle: &massey_core::operad::OperadHandle,
    n: usize,
    rows: &[OpRow],
    field: FieldSpec,
    path: &str,
) -> Result<Cochain, InputError> {
    let mut op = Cochain::zero(handle, n, 2 - n as i64);
    for r in rows {
        let c = scalar(field, &r.coefficient, &r.path)?;
        let ins: Vec<&str> = r.inputs.iter().map(String::as_str).collect();
        let term = Cochain::from_labels(handle, n, 2 - n as i64, &[(&ins, r.output.as_str(), c)])
            .map_err(|e| InputError::at(&r.path, e.to_string()))?;
        op = op.try_add(&term).map_err(|e| InputError::at(path, e.to_string()))?;
    }
    Ok(op)
}
