//! Second-page obstruction classes and the one-step extension solver.
//!
//! For a structure truncated at arity `k + 2` the obstruction to the next
//! equation is the class of `Σ_{p+q=k+4} m_p{m_q}` in bidegree `(k + 3, −k)`.
//! The reduced representative keeps only `p, q > d + 1` (for `d`-sparse
//! structures; `d = 1` otherwise) and differs from the full one by
//! `[m2, m_{k+2}]`. Extending replaces `m_{k+2}` by `m_{k+2} + c` where
//! `d(c) = −full`, then appends `m_{k+3} = 0`.

use std::fmt;

use crate::ainfty::{brace_sum, combined_pair_residuals, verify_ak_algebra, verify_ak_bimodule, AkAlgebra, AkBimodule};
use crate::braces::brace;
use crate::complexes::{connecting_delta, ComplexWindow};
use crate::error::{Error, Result};
use crate::graded::DegreeWindow;
use crate::operad::Cochain;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Context {
    Algebra,
    Pair,
    /// Bimodule over a fixed A∞-algebra; classes live in `Ext`.
    Bimodule,
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Context::Algebra => "algebra",
            Context::Pair => "pair",
            Context::Bimodule => "bimodule",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub context: Context,
    /// The structure is truncated at arity `k + 2`.
    pub k: usize,
    pub sparse_d: usize,
    /// `Σ_{p+q=k+4} m_p{m_q}`.
    pub full: Cochain,
    /// The reduced representative.
    pub cocycle: Cochain,
    pub class_vanishes: bool,
    /// `c` with `d(c) = −full`, present when the class vanishes.
    pub primitive: Option<Cochain>,
    /// For `k = 1` in the bimodule context: whether the cocycle equals the
    /// connecting map applied to `⟨m^A_3⟩` as classes.
    pub delta_agrees: Option<bool>,
    pub window: ComplexWindow,
}

impl ObstructionReport {
    /// `(p, q)` of the class in its window.
    pub fn bidegree(&self) -> (i64, i64) {
        self.window.bidegree_of(&self.cocycle)
    }
}

fn effective_d(d: usize) -> usize {
    d.max(1)
}

fn window_around(p: i64, q: i64) -> DegreeWindow {
    DegreeWindow::new(p - 1, p + 1, q, q).expect("valid window")
}

fn finish(
    context: Context,
    k: usize,
    d: usize,
    full: Cochain,
    cocycle: Cochain,
    window: ComplexWindow,
) -> Result<ObstructionReport> {
    if !window.apply_d(&full)?.is_zero() || !window.apply_d(&cocycle)?.is_zero() {
        return Err(Error::NotCocycle);
    }
    let difference = full.try_add(&-&cocycle)?;
    if window.is_coboundary(&difference)?.is_none() {
        // the two representatives always differ by d(m_{k+2})
        return Err(Error::NotCocycle);
    }
    let primitive = window.is_coboundary(&full)?.map(|c| -&c);
    Ok(ObstructionReport {
        context,
        k,
        sparse_d: d,
        full,
        cocycle,
        class_vanishes: primitive.is_some(),
        primitive,
        delta_agrees: None,
        window,
    })
}

/// Obstruction for an `A_{k+2}`-algebra, `k ≥ 1`, in `HH^{k+3,−k}`.
pub fn algebra_obstruction(s: &AkAlgebra, sparse_d: usize) -> Result<ObstructionReport> {
    if s.k() < 3 {
        return Err(Error::KTooSmall { needed: 3, k: s.k() });
    }
    let k = s.k() - 2;
    let d = effective_d(sparse_d);
    let rep = verify_ak_algebra(s)?;
    if let Some(n) = rep.first_failure() {
        return Err(Error::ResidualNonzero(n));
    }
    let n = k + 2;
    let full = brace_sum(s.handle(), n, &|p| s.op(p), &|q| s.op(q), |_, _| true)?;
    let cocycle = brace_sum(s.handle(), n, &|p| s.op(p), &|q| s.op(q), |p, q| p > d + 1 && q > d + 1)?;
    let window = s.hochschild_window(window_around(k as i64 + 3, -(k as i64)))?;
    finish(Context::Algebra, k, d, full, cocycle, window)
}

/// Obstruction for an algebra-bimodule pair truncated at `k + 2`, in `HHE^{k+3,−k}`.
pub fn pair_obstruction(s: &AkBimodule, sparse_d: usize) -> Result<ObstructionReport> {
    if s.k() < 3 {
        return Err(Error::KTooSmall { needed: 3, k: s.k() });
    }
    let k = s.k() - 2;
    let d = effective_d(sparse_d);
    let rep = combined_pair_residuals(s)?;
    if let Some(n) = rep.combined.first_failure() {
        return Err(Error::ResidualNonzero(n));
    }
    let n = k + 2;
    let full = s.combined_equation(n)?;
    let cocycle = brace_sum(s.handle(), n, &|p| s.combined_op(p), &|q| s.combined_op(q), |p, q| p > d + 1 && q > d + 1)?;
    let cx = s.windows(window_around(k as i64 + 3, -(k as i64)))?;
    finish(Context::Pair, k, d, full, cocycle, cx.hce)
}

/// Obstruction for a bimodule truncated at `k + 2` over a fixed algebra
/// structure known to arity `k + 3`, in `Ext^{k+2,−k}`.
pub fn bimodule_obstruction(s: &AkBimodule, sparse_d: usize) -> Result<ObstructionReport> {
    if s.k() < 3 {
        return Err(Error::KTooSmall { needed: 3, k: s.k() });
    }
    let k = s.k() - 2;
    let d = effective_d(sparse_d);
    if s.parent().k() < k + 3 {
        return Err(Error::MissingArity(k + 3));
    }
    let alg = verify_ak_algebra(&s.parent().truncate(k + 3)?)?;
    if let Some(n) = alg.first_failure() {
        return Err(Error::ResidualNonzero(n));
    }
    let bim = verify_ak_bimodule(s)?;
    if let Some(n) = bim.first_failure() {
        return Err(Error::ResidualNonzero(n));
    }
    let n = k + 2;
    let full = s.equation(n)?;
    let head = brace(&s.op(2), &[s.algebra_op(k + 2)])?;
    let tail = brace_sum(s.handle(), n, &|p| s.op(p), &|q| s.combined_op(q), |p, q| p > d + 1 && q > d + 1)?;
    let cocycle = head.try_add(&tail)?;
    let cx = s.windows(window_around(k as i64 + 2, -(k as i64)))?;
    let mut report = finish(Context::Bimodule, k, d, full, cocycle, cx.bc.clone())?;
    if k == 1 {
        let a3 = s.parent().op(3);
        let class = cx.hc.class_of(&a3)?;
        let delta = connecting_delta(&cx, &class)?;
        report.delta_agrees = Some(cx.bc.classes_equal(&delta.representative, &report.cocycle)?);
    }
    Ok(report)
}

/// A structure in one of the three extension settings.
#[derive(Clone, Debug)]
pub enum Structure {
    Algebra(AkAlgebra),
    Pair(AkBimodule),
    /// Bimodule over a fixed algebra structure.
    Bimodule(AkBimodule),
}

impl Structure {
    pub fn k(&self) -> usize {
        match self {
            Structure::Algebra(s) => s.k(),
            Structure::Pair(s) | Structure::Bimodule(s) => s.k(),
        }
    }

    pub fn context(&self) -> Context {
        match self {
            Structure::Algebra(_) => Context::Algebra,
            Structure::Pair(_) => Context::Pair,
            Structure::Bimodule(_) => Context::Bimodule,
        }
    }

    pub fn sparsity(&self) -> usize {
        match self {
            Structure::Algebra(s) => s.sparsity(),
            Structure::Pair(s) | Structure::Bimodule(s) => s.sparsity(),
        }
    }

    pub fn obstruction(&self, sparse_d: usize) -> Result<ObstructionReport> {
        match self {
            Structure::Algebra(s) => algebra_obstruction(s, sparse_d),
            Structure::Pair(s) => pair_obstruction(s, sparse_d),
            Structure::Bimodule(s) => bimodule_obstruction(s, sparse_d),
        }
    }

    /// First structure equation that fails, if any.
    pub fn first_failure(&self) -> Result<Option<usize>> {
        Ok(match self {
            Structure::Algebra(s) => verify_ak_algebra(s)?.first_failure(),
            Structure::Pair(s) => combined_pair_residuals(s)?.combined.first_failure(),
            Structure::Bimodule(s) => verify_ak_bimodule(s)?.first_failure(),
        })
    }

    pub fn verifies(&self) -> Result<bool> {
        Ok(self.first_failure()?.is_none())
    }

    /// Appends a zero operation in arity `k + 1`.
    pub fn padded(&self) -> Result<Structure> {
        Ok(match self {
            Structure::Algebra(s) => Structure::Algebra(s.padded()),
            Structure::Pair(s) => {
                let parent = s.parent().truncate(s.k())?.padded();
                Structure::Pair(s.with_parent(&parent)?.padded()?)
            }
            Structure::Bimodule(s) => Structure::Bimodule(s.padded()?),
        })
    }
}

/// Applies a vanishing obstruction: `m_{k+2} += primitive`, `m_{k+3} := 0`.
pub fn extend_step(report: &ObstructionReport, structure: &Structure) -> Result<Structure> {
    if !report.class_vanishes {
        return Err(Error::NonVanishing);
    }
    let prim = report.primitive.as_ref().ok_or(Error::NonVanishing)?;
    if report.context != structure.context() || report.k + 2 != structure.k() {
        return Err(Error::Unsupported("report does not belong to this structure".into()));
    }
    let top = report.k + 2;
    let out = match structure {
        Structure::Algebra(s) => {
            let mut next = s.padded();
            next.set_op(top, s.op(top).try_add(prim)?)?;
            Structure::Algebra(next)
        }
        Structure::Pair(s) => {
            // split the correction into its pure and module parts
            let pure = prim.transport(s.parent().handle())?;
            let module = prim.try_add(&-&pure.transport(s.handle())?)?;
            let mut parent = s.parent().truncate(top)?.padded();
            parent.set_op(top, parent.op(top).try_add(&pure)?)?;
            let mut next = s.with_parent(&parent)?.padded()?;
            next.set_op(top, s.op(top).try_add(&module)?)?;
            Structure::Pair(next)
        }
        Structure::Bimodule(s) => {
            let mut next = s.padded()?;
            next.set_op(top, s.op(top).try_add(prim)?)?;
            Structure::Bimodule(next)
        }
    };
    if !out.verifies()? {
        return Err(Error::ExtensionDefect(top + 1));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LoopStep {
    /// Truncation before the step.
    pub from_arity: usize,
    /// Skipped for sparsity reasons: the new equation holds automatically.
    pub padded: bool,
    pub primitive_nonzero: bool,
}

#[derive(Clone, Debug)]
pub struct LoopOutcome {
    pub trace: Vec<LoopStep>,
    /// The structure reached, truncated at the target on success.
    pub structure: Structure,
    /// The first non-vanishing second-page obstruction, if the loop stopped.
    pub blocked: Option<ObstructionReport>,
}

impl LoopOutcome {
    pub fn reached(&self, target: usize) -> bool {
        self.blocked.is_none() && self.structure.k() >= target
    }
}

/// Extends greedily up to `target` arity. With `sparse_d > 1`, truncations
/// `t` with `t − 2 ∉ dℤ` are padded with a zero operation.
pub fn extend_loop(structure: &Structure, target: usize, sparse_d: usize) -> Result<LoopOutcome> {
    if let Some(n) = structure.first_failure()? {
        return Err(Error::ResidualNonzero(n));
    }
    let d = effective_d(sparse_d);
    let mut current = structure.clone();
    let mut trace = Vec::new();
    while current.k() < target {
        let t = current.k();
        if d > 1 && !(t - 2).is_multiple_of(d) {
            current = current.padded()?;
            trace.push(LoopStep { from_arity: t, padded: true, primitive_nonzero: false });
            continue;
        }
        let report = current.obstruction(d)?;
        if !report.class_vanishes {
            return Ok(LoopOutcome { trace, structure: current, blocked: Some(report) });
        }
        let nonzero = report.primitive.as_ref().is_some_and(|c| !c.is_zero());
        current = extend_step(&report, &current)?;
        trace.push(LoopStep { from_arity: t, padded: false, primitive_nonzero: nonzero });
    }
    Ok(LoopOutcome { trace, structure: current, blocked: None })
}
