//! One function per subcommand. Each resolves its parameters, runs the core
//! computation and fills a [`Report`].

use serde_json::{json, Value};

use massey_core::ainfty::{
    bimodule_universal_massey, combined_pair_residuals, universal_massey, verify_ak_algebra, verify_ak_bimodule, AkAlgebra, AkBimodule,
    MasseyProduct, ResidualReport,
};
use massey_core::algebra::{Bimodule, GradedAlgebra};
use massey_core::braces::{brace, differential};
use massey_core::complexes::{assemble_bimodule_complexes, hochschild_complex, les_exactness_audit, ComplexWindow};
use massey_core::criteria::{self, RangeVerdict, Theorem, Verdict};
use massey_core::massey::build_massey_complex;
use massey_core::obstruction::{extend_loop, Structure};
use massey_core::operad::{endomorphism_operad, Cochain, OperadHandle};
use massey_core::{DegreeWindow, Error, FieldSpec};

use crate::input::{parse_window, Document, InputError};
use crate::report::{Report, SignAudit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Context {
    Algebra,
    Pair,
    Bimodule,
}

impl Context {
    fn name(self) -> &'static str {
        match self {
            Context::Algebra => "algebra",
            Context::Pair => "pair",
            Context::Bimodule => "bimodule",
        }
    }
}

/// Flag values; `None` falls back to the document's task section.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub window: Option<String>,
    pub field: Option<FieldSpec>,
    pub k: Option<usize>,
    pub target_arity: Option<usize>,
    pub sparse_d: Option<usize>,
    pub theorem: Option<String>,
    pub context: Option<String>,
    pub d: Option<usize>,
    pub range: Option<usize>,
}

pub enum Failure {
    Input(InputError),
    /// A computation that stopped for mathematical reasons; becomes a report with exit code 1.
    Math(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        Failure::Input(e)
    }
}

/// Core errors that can only come from the input or parameters.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotPrime(_)
            | Error::BadScalar(_)
            | Error::DimensionMismatch { .. }
            | Error::DuplicateLabel(_)
            | Error::UnknownLabel(_)
            | Error::Inhomogeneous { .. }
            | Error::BadSignature(_)
            | Error::NotAssociative(_)
            | Error::ModuleAxiom(_)
            | Error::NotInIdeal
            | Error::Partial(..)
            | Error::OutsideWindow(..)
            | Error::KTooSmall { .. }
            | Error::BadOperation { .. }
            | Error::MissingArity(_)
            | Error::ArityOutOfRange(_)
            | Error::Unsupported(_)
    )
}

fn core<T>(r: massey_core::Result<T>, location: &str) -> Result<T, Failure> {
    r.map_err(|e| if is_input_error(&e) { Failure::Input(InputError::at(location, e.to_string())) } else { Failure::Math(e.to_string()) })
}

/// Resolved parameters shared by all commands.
pub struct Setup {
    pub doc: Document,
    pub field: FieldSpec,
    pub algebra: GradedAlgebra,
    pub module: Option<Bimodule>,
    pub window: Option<DegreeWindow>,
    pub context: Context,
    ov: Overrides,
}

impl Setup {
    pub fn new(doc: Document, ov: Overrides) -> Result<Setup, InputError> {
        let field = ov.field.unwrap_or(doc.field());
        let algebra = doc.algebra(field)?;
        let module = doc.bimodule(&algebra)?;
        let window = match (&ov.window, &doc.task.window) {
            (Some(w), _) => Some(parse_window(w).map_err(|m| InputError::at("--window", m))?),
            (None, Some(w)) => Some(parse_window(w).map_err(|m| InputError::at("$.task.window", m))?),
            (None, None) => None,
        };
        let (text, location) = match (&ov.context, &doc.task.context) {
            (Some(c), _) => (Some(c.as_str()), "--context"),
            (None, Some(c)) => (Some(c.as_str()), "$.task.context"),
            (None, None) => (None, ""),
        };
        let context = match text {
            None if module.is_some() => Context::Pair,
            None => Context::Algebra,
            Some("algebra") => Context::Algebra,
            Some("pair") => Context::Pair,
            Some("bimodule") => Context::Bimodule,
            Some(other) => return Err(InputError::at(location, format!("unknown context {other:?}; expected algebra, pair or bimodule"))),
        };
        if context != Context::Algebra && module.is_none() {
            return Err(InputError::at(location, format!("context {} needs a bimodule", context.name())));
        }
        Ok(Setup {
            doc,
            field,
            algebra,
            module,
            window,
            context,
            ov,
        })
    }

    fn k(&self, at_least: usize) -> usize {
        self.ov.k.or(self.doc.task.k).unwrap_or_else(|| self.doc.top_arity().unwrap_or(0).max(at_least))
    }

    fn target(&self, k: usize) -> usize {
        self.ov.target_arity.or(self.doc.task.target_arity).unwrap_or(k + 1)
    }

    /// `0` asks for auto-detection from the degrees.
    fn sparse_d(&self, detected: usize) -> usize {
        match self.ov.sparse_d.or(self.doc.task.sparse_d) {
            None | Some(0) => detected,
            Some(d) => d,
        }
    }

    fn d(&self) -> usize {
        self.ov.d.or(self.doc.task.d).unwrap_or(1)
    }

    fn range(&self) -> usize {
        self.ov.range.or(self.doc.task.range).unwrap_or(4)
    }

    fn theorem(&self) -> Result<Theorem, InputError> {
        match (&self.ov.theorem, &self.doc.task.theorem) {
            (Some(t), _) => t.parse().map_err(|m: String| InputError::at("--theorem", m)),
            (None, Some(t)) => t.parse().map_err(|m: String| InputError::at("$.task.theorem", m)),
            (None, None) => Err(InputError::at("--theorem", "a theorem tag is required")),
        }
    }

    fn module(&self) -> &Bimodule {
        self.module.as_ref().expect("context checked for a module")
    }

    fn ak_algebra(&self, k: usize) -> Result<AkAlgebra, InputError> {
        self.doc.ak_algebra(&self.algebra, k)
    }

    /// The module structure; over a fixed algebra the parent is taken up to `parent_k`.
    fn ak_bimodule(&self, k: usize, parent_k: usize) -> Result<AkBimodule, InputError> {
        let parent = self.ak_algebra(parent_k.max(k))?;
        self.doc.ak_bimodule(&parent, self.module(), k)
    }

    fn structure(&self, k: usize, parent_k: usize) -> Result<Structure, InputError> {
        Ok(match self.context {
            Context::Algebra => Structure::Algebra(self.ak_algebra(k)?),
            Context::Pair => Structure::Pair(self.ak_bimodule(k, k)?),
            Context::Bimodule => Structure::Bimodule(self.ak_bimodule(k, parent_k)?),
        })
    }

    /// `m2{m2} = 0` and `d(id) = m2` for the algebra, and for `A ⊕ M` when a module is present.
    fn audit(&self) -> SignAudit {
        let h = endomorphism_operad(self.algebra.space());
        let mut checks = Vec::new();
        if let Ok(m2) = self.algebra.multiplication(&h) {
            checks.push(audit_multiplication(&h, &m2));
        }
        if let Some(m) = &self.module {
            if let Ok(s) = AkAlgebra::new(&self.algebra, 2).and_then(|p| AkBimodule::new(&p, m, 2)) {
                checks.push(audit_multiplication(s.handle(), &s.combined_op(2)));
            }
        }
        let all = |v: Vec<Option<bool>>| v.into_iter().flatten().reduce(|a, b| a && b);
        SignAudit {
            multiplication: all(checks.iter().map(|c| Some(c.0)).collect()),
            identity: all(checks.iter().map(|c| c.1).collect()),
            d_squared: Vec::new(),
        }
    }

    fn report(&self, command: &'static str, window: Option<DegreeWindow>, parameters: Value) -> Report {
        Report {
            command,
            digest: String::new(),
            field: self.field,
            window,
            parameters,
            audit: self.audit(),
            result: None,
            failure: None,
        }
    }
}

fn audit_multiplication(h: &OperadHandle, m2: &Cochain) -> (bool, Option<bool>) {
    let square_zero = brace(m2, std::slice::from_ref(m2)).is_ok_and(|c| c.is_zero());
    let identity = h.unit().map(|id| differential(m2, &id).is_ok_and(|d| &d == m2));
    (square_zero, identity)
}

fn d_squared(name: &str, w: &ComplexWindow) -> Result<(String, Vec<(i64, i64)>), Failure> {
    Ok((name.to_string(), core(w.d_squared_defects(), name)?))
}

fn cochain_json(c: &Cochain) -> Value {
    json!(c.to_string())
}

fn residuals_json(r: &ResidualReport) -> Value {
    json!({
        "k": r.k,
        "sparse_d": r.sparse_d,
        "valid": r.valid(),
        "first_failure": r.first_failure(),
        "forced_zero": r.forced_zero,
        "residuals": r.residuals.iter().map(|x| json!({
            "n": x.n,
            "zero": x.is_zero(),
            "tautological": x.tautological,
            "terms": x.cochain.len(),
            "value": cochain_json(&x.cochain),
        })).collect::<Vec<_>>(),
    })
}

fn fail_if(report: &mut Report, failed: bool, message: impl FnOnce() -> String) {
    if failed {
        report.failure = Some(message());
    }
}

pub fn verify(s: &Setup) -> Result<Report, Failure> {
    let k = s.k(3);
    let mut report = s.report("verify", None, json!({"context": s.context.name(), "k": k}));
    let (result, first) = match s.context {
        Context::Algebra => {
            let r = core(verify_ak_algebra(&s.ak_algebra(k)?), "$.higher_ops")?;
            (json!({"algebra": residuals_json(&r)}), r.first_failure())
        }
        Context::Pair => {
            let b = s.ak_bimodule(k, k)?;
            let r = core(combined_pair_residuals(&b), "$.higher_ops")?;
            let decomposes = core(r.decomposes(b.handle()), "$.higher_ops")?;
            (
                json!({
                    "combined": residuals_json(&r.combined),
                    "algebra": residuals_json(&r.algebra),
                    "module": residuals_json(&r.bimodule),
                    "decomposes": decomposes,
                }),
                r.combined.first_failure(),
            )
        }
        Context::Bimodule => {
            let b = s.ak_bimodule(k, k)?;
            let parent = core(verify_ak_algebra(b.parent()), "$.higher_ops.algebra")?;
            let module = core(verify_ak_bimodule(&b), "$.higher_ops.module")?;
            let first = parent.first_failure().into_iter().chain(module.first_failure()).min();
            (json!({"algebra": residuals_json(&parent), "module": residuals_json(&module)}), first)
        }
    };
    report.result = Some(result);
    fail_if(&mut report, first.is_some(), || format!("structure equation fails at n = {}", first.unwrap()));
    Ok(report)
}

fn dims_rows(name: &str, w: &ComplexWindow) -> Result<Vec<Value>, Failure> {
    let mut rows = Vec::new();
    for (p, q) in w.window().bidegrees() {
        let component = core(w.component_dim(p, q), name)?;
        let cohomology = if w.is_interior(p, q) { Some(core(w.cohomology_dim(p, q), name)?) } else { None };
        rows.push(json!({"complex": name, "p": p, "q": q, "component": component, "cohomology": cohomology}));
    }
    Ok(rows)
}

pub fn cohomology(s: &Setup) -> Result<Report, Failure> {
    let w = s.window.ok_or_else(|| InputError::at("--window", "cohomology needs a window"))?;
    let mut report = s.report("cohomology", Some(w), json!({"context": s.context.name()}));
    let result = match s.context {
        Context::Algebra => {
            let hc = core(hochschild_complex(&s.algebra, w), "--window")?;
            report.audit.d_squared.push(d_squared("HC", &hc)?);
            json!({"dims": dims_rows("HC", &hc)?})
        }
        Context::Pair | Context::Bimodule => {
            let cx = core(assemble_bimodule_complexes(&s.algebra, s.module(), w), "--window")?;
            let mut rows = Vec::new();
            for (name, win) in [("HC", &cx.hc), ("BC", &cx.bc), ("HCE", &cx.hce)] {
                report.audit.d_squared.push(d_squared(name, win)?);
                rows.extend(dims_rows(name, win)?);
            }
            let les = core(les_exactness_audit(&cx), "--window")?;
            let failures: Vec<Value> = les.failures().iter().map(|n| json!([n.bidegree.0, n.bidegree.1])).collect();
            json!({"dims": rows, "long_exact_sequence": {"exact": les.exact(), "nodes": les.nodes.len(), "failures": failures}})
        }
    };
    report.result = Some(result);
    Ok(report)
}

pub fn obstruct(s: &Setup) -> Result<Report, Failure> {
    let k = s.k(3);
    let structure = s.structure(k, k + 1)?;
    let sd = s.sparse_d(structure.sparsity());
    let params = json!({"context": s.context.name(), "k": k, "sparse_d": sd});
    let r = match structure.obstruction(sd) {
        Ok(r) => r,
        Err(e) if !is_input_error(&e) => {
            let mut report = s.report("obstruct", None, params);
            report.failure = Some(e.to_string());
            return Ok(report);
        }
        Err(e) => return Err(Failure::Input(InputError::at("k", e.to_string()))),
    };
    let (p, q) = r.bidegree();
    let mut report = s.report("obstruct", Some(r.window.window()), params);
    report.audit.d_squared.push(d_squared(&r.window.kind().to_string(), &r.window)?);
    report.result = Some(json!({
        "context": r.context.to_string(),
        "truncation_arity": r.k + 2,
        "bidegree": [p, q],
        "sparse_d": r.sparse_d,
        "class_vanishes": r.class_vanishes,
        "full": cochain_json(&r.full),
        "cocycle": cochain_json(&r.cocycle),
        "primitive": r.primitive.as_ref().map(cochain_json),
        "delta_agrees": r.delta_agrees,
    }));
    fail_if(&mut report, !r.class_vanishes, || format!("obstruction class in ({p}, {q}) does not vanish"));
    Ok(report)
}

fn operations_json(st: &Structure) -> Vec<Value> {
    let row = |part: &str, n: usize, c: &Cochain| json!({"part": part, "arity": n, "terms": c.len(), "value": cochain_json(c)});
    match st {
        Structure::Algebra(a) => a.nonzero_ops().map(|(n, c)| row("algebra", n, c)).collect(),
        Structure::Pair(b) | Structure::Bimodule(b) => {
            let mut v: Vec<Value> = b.parent().nonzero_ops().filter(|(n, _)| *n <= b.k()).map(|(n, c)| row("algebra", n, c)).collect();
            v.extend(b.nonzero_ops().map(|(n, c)| row("module", n, c)));
            v
        }
    }
}

pub fn extend(s: &Setup) -> Result<Report, Failure> {
    let k = s.k(3);
    let target = s.target(k);
    let structure = s.structure(k, target + 1)?;
    let sd = s.sparse_d(structure.sparsity());
    let mut report = s.report("extend", None, json!({"context": s.context.name(), "k": k, "target_arity": target, "sparse_d": sd}));
    let out = match extend_loop(&structure, target, sd) {
        Ok(out) => out,
        Err(e) if !is_input_error(&e) => {
            report.failure = Some(e.to_string());
            return Ok(report);
        }
        Err(e) => return Err(Failure::Input(InputError::at("k", e.to_string()))),
    };
    let trace: Vec<Value> = out
        .trace
        .iter()
        .map(|t| json!({"from_arity": t.from_arity, "padded": t.padded, "primitive_nonzero": t.primitive_nonzero}))
        .collect();
    let blocked = out.blocked.as_ref().map(|r| {
        let (p, q) = r.bidegree();
        json!({"truncation_arity": r.k + 2, "bidegree": [p, q], "cocycle": cochain_json(&r.cocycle)})
    });
    if let Some(r) = &out.blocked {
        report.window = Some(r.window.window());
        report.audit.d_squared.push(d_squared(&r.window.kind().to_string(), &r.window)?);
    }
    let verifies = core(out.structure.verifies(), "$.higher_ops")?;
    report.result = Some(json!({
        "trace": trace,
        "reached": out.reached(target),
        "final_k": out.structure.k(),
        "blocked": blocked,
        "verifies": verifies,
        "operations": operations_json(&out.structure),
    }));
    fail_if(&mut report, !out.reached(target), || match &out.blocked {
        Some(r) => format!("extension blocked at arity {} by a nonvanishing obstruction", r.k + 2),
        None => format!("stopped at arity {}", out.structure.k()),
    });
    Ok(report)
}

fn class_json(m: &MasseyProduct) -> Value {
    json!({
        "length_offset": m.length_offset,
        "bidegree": [m.class.bidegree.0, m.class.bidegree.1],
        "zero": m.class.is_zero(),
        "representative": cochain_json(&m.class.representative),
        "primitive": m.primitive.as_ref().map(cochain_json),
    })
}

pub fn massey(s: &Setup) -> Result<Report, Failure> {
    let d = s.d();
    if d == 0 {
        return Err(InputError::at("--length-offset", "the Massey class needs d ≥ 1").into());
    }
    let k = s.k(d + 3);
    let mut report = s.report("massey", s.window, json!({"context": s.context.name(), "k": k, "d": d}));
    let (product, base, class) = match s.context {
        Context::Algebra => {
            let a = s.ak_algebra(k)?;
            let m = core(universal_massey(&a, d), "$.higher_ops")?;
            let base = match s.window {
                Some(w) => Some(core(a.hochschild_window(w), "--window")?),
                None => None,
            };
            (m, base, a.op(d + 2))
        }
        Context::Pair | Context::Bimodule => {
            let b = s.ak_bimodule(k, k)?;
            let (m, _) = core(bimodule_universal_massey(&b, d), "$.higher_ops")?;
            let base = match s.window {
                Some(w) => {
                    let cx = core(b.windows(w), "--window")?;
                    Some(if s.context == Context::Pair { cx.hce } else { cx.bc })
                }
                None => None,
            };
            (m, base, b.combined_op(d + 2))
        }
    };
    let mut result = json!({"class": class_json(&product)});
    if let Some(base) = base {
        let kind = base.kind().to_string();
        report.audit.d_squared.push(d_squared(&kind, &base)?);
        match build_massey_complex(&base, &class) {
            Ok(mc) => {
                let defects = core(mc.d_squared_defects(), "--window")?;
                let mut dims = Vec::new();
                for (p, q) in base.window().bidegrees() {
                    if let Ok(dim) = mc.massey_cohomology_dim(p, q) {
                        dims.push(json!({"s": p, "t": q, "dim": dim}));
                    }
                }
                result["complex"] = json!({
                    "base": kind,
                    "floor": mc.floor(),
                    "uses_square": mc.uses_square(),
                    "composable_pairs": mc.composable_pairs(),
                    "d_squared_defects": defects.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                    "dims": dims,
                });
                fail_if(&mut report, !defects.is_empty(), || "Massey differential does not square to zero".into());
            }
            Err(Error::SquareNonzero(p, q, witness)) => {
                result["complex"] = json!({"base": kind, "refused": {"bidegree": [p, q], "square": witness}});
                report.failure = Some(format!("Sq of the Massey class is nonzero in ({p}, {q}); construction refused"));
            }
            Err(e) => {
                core::<()>(Err(e), "--window")?;
            }
        }
    }
    report.result = Some(result);
    Ok(report)
}

fn verdict_json(v: &RangeVerdict) -> Value {
    let (name, at) = match v.verdict {
        Verdict::Satisfied => ("satisfied", Value::Null),
        Verdict::Violated { n, dim } => ("violated", json!({"n": n, "dim": dim})),
        Verdict::Inconclusive => ("inconclusive", Value::Null),
    };
    json!({
        "theorem": v.theorem.tag(),
        "range": v.range,
        "tail": v.tail.to_string(),
        "dims": v.dims.iter().map(|(n, dim)| json!({"n": n, "dim": dim})).collect::<Vec<_>>(),
        "verdict": name,
        "violated_at": at,
    })
}

pub fn check(s: &Setup) -> Result<Report, Failure> {
    let th = s.theorem()?;
    let range = s.range();
    if th.needs_module() && s.module.is_none() {
        return Err(InputError::at("--theorem", format!("{th} needs a bimodule")).into());
    }
    let d = s.d();
    let mut params = json!({"theorem": th.tag(), "range": range});
    let v = if !th.needs_class() {
        match th {
            Theorem::KadeishviliAlgebra => core(criteria::check_kadeishvili_algebra(&s.algebra, range), "$.algebra")?,
            Theorem::KadeishviliBimodule => core(criteria::check_kadeishvili_bimodule(&s.algebra, s.module(), range), "$.bimodule")?,
            _ => core(criteria::check_kadeishvili_simultaneous(&s.algebra, s.module(), range), "$.bimodule")?,
        }
    } else {
        let k = s.k(d + 2);
        params["k"] = json!(k);
        params["d"] = json!(d);
        if th.needs_module() {
            let b = s.ak_bimodule(k, k)?;
            let f = match th {
                Theorem::MasseyPair => criteria::check_theorem_b_pair,
                Theorem::MasseyBimodule => criteria::check_massey_bimodule,
                _ => criteria::check_existence_pair,
            };
            core(f(&b, d, range), "$.higher_ops")?
        } else {
            let a = s.ak_algebra(k)?;
            let f = if th == Theorem::MasseyAlgebra { criteria::check_theorem_b } else { criteria::check_existence };
            core(f(&a, d, range), "$.higher_ops")?
        }
    };
    let mut report = s.report("check", None, params);
    report.result = Some(verdict_json(&v));
    if let Verdict::Violated { n, dim } = v.verdict {
        report.failure = Some(format!("{th}: nonzero group at n = {n} (dimension {dim})"));
    }
    Ok(report)
}
