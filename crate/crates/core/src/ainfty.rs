//! Truncated minimal A∞-structures on algebras and bimodules.
//!
//! An `A_k`-algebra is the product `m2` of a graded algebra together with
//! operations `m_n`, `3 ≤ n ≤ k`, of bidegree `(n, 2 − n)` in the Hochschild
//! complex. The equations are `Σ_{p+q=n+2} m_p{m_q} = 0` for `2 ≤ n ≤ k − 1`;
//! `m_k` itself is unconstrained. A bimodule adds ideal operations `m^M_n`
//! over `E(A, M)` with equations `Σ_{p+q=n+2} m^M_p{m^A_q + m^M_q} = 0`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use crate::algebra::{Bimodule, GradedAlgebra};
use crate::braces::brace;
use crate::complexes::{bimodule_on, hochschild_on, BimoduleComplexes, CohomologyClass, ComplexWindow};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graded::{DegreeWindow, GradedSpace};
use crate::operad::{endomorphism_operad, linear_endomorphism_operad, Cochain, OperadHandle, OperadIdeal};

/// Largest `d` with the support inside `dℤ`; `0` when the support is `{0}` or empty.
pub fn sparsity_of(space: &GradedSpace) -> usize {
    sparsity_of_degrees(space.support())
}

pub fn sparsity_of_degrees(degrees: impl IntoIterator<Item = i64>) -> usize {
    degrees.into_iter().fold(0i64, |g, d| g.gcd(&d)) as usize
}

/// Whether `m_n` vanishes for degree reasons on a `d`-sparse space.
pub fn forced_zero(n: usize, d: usize) -> bool {
    d > 1 && !(n - 2).is_multiple_of(d)
}

fn check_op(handle: &OperadHandle, n: usize, op: &Cochain) -> Result<()> {
    if op.handle() != handle {
        return Err(Error::MismatchedHandles);
    }
    let expected_q = 2 - n as i64;
    if op.arity() != n || op.degree() != expected_q {
        return Err(Error::BadOperation { arity: n, p: op.arity(), q: op.degree(), expected_q });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct AkAlgebra {
    algebra: GradedAlgebra,
    handle: OperadHandle,
    m2: Cochain,
    k: usize,
    ops: BTreeMap<usize, Cochain>,
}

impl AkAlgebra {
    /// The graded algebra as an `A_k`-algebra with `m_n = 0` for `n ≥ 3`.
    pub fn new(algebra: &GradedAlgebra, k: usize) -> Result<AkAlgebra> {
        if k < 2 {
            return Err(Error::KTooSmall { needed: 2, k });
        }
        let handle = endomorphism_operad(algebra.space());
        let m2 = algebra.multiplication(&handle)?;
        Ok(AkAlgebra {
            algebra: algebra.clone(),
            handle,
            m2,
            k,
            ops: BTreeMap::new(),
        })
    }

    /// Sets `m_n` for `3 ≤ n ≤ k`; the cochain must live over [`AkAlgebra::handle`].
    pub fn set_op(&mut self, n: usize, op: Cochain) -> Result<()> {
        if n < 3 || n > self.k {
            return Err(Error::ArityOutOfRange(n));
        }
        check_op(&self.handle, n, &op)?;
        if op.is_zero() {
            self.ops.remove(&n);
        } else {
            self.ops.insert(n, op);
        }
        Ok(())
    }

    pub fn with_op(mut self, n: usize, op: Cochain) -> Result<AkAlgebra> {
        self.set_op(n, op)?;
        Ok(self)
    }

    /// `m_n`; zero when unset. `n` must lie in `2..=k`.
    pub fn op(&self, n: usize) -> Cochain {
        assert!((2..=self.k).contains(&n), "m_{n} outside 2..={}", self.k);
        match n {
            2 => self.m2.clone(),
            _ => self.ops.get(&n).cloned().unwrap_or_else(|| Cochain::zero(&self.handle, n, 2 - n as i64)),
        }
    }

    /// Arities `n ≥ 3` with `m_n ≠ 0`.
    pub fn nonzero_ops(&self) -> impl Iterator<Item = (usize, &Cochain)> {
        self.ops.iter().map(|(n, c)| (*n, c))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn handle(&self) -> &OperadHandle {
        &self.handle
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn m2(&self) -> &Cochain {
        &self.m2
    }

    /// Drops the operations above `k`.
    pub fn truncate(&self, k: usize) -> Result<AkAlgebra> {
        if k < 2 || k > self.k {
            return Err(Error::ArityOutOfRange(k));
        }
        let mut out = self.clone();
        out.k = k;
        out.ops.retain(|n, _| *n <= k);
        Ok(out)
    }

    /// Same operations, one more arity with `m_{k+1} = 0`.
    pub fn padded(&self) -> AkAlgebra {
        let mut out = self.clone();
        out.k += 1;
        out
    }

    pub fn sparsity(&self) -> usize {
        sparsity_of(self.algebra.space())
    }

    /// `Σ_{p+q=n+2} m_p{m_q}` over `2 ≤ p, q ≤ k`.
    pub fn equation(&self, n: usize) -> Result<Cochain> {
        brace_sum(&self.handle, n, &|p| self.op(p), &|q| self.op(q), |_, _| true)
    }

    /// Hochschild window over this structure's handle.
    pub fn hochschild_window(&self, window: DegreeWindow) -> Result<ComplexWindow> {
        hochschild_on(&self.handle, &self.m2, window)
    }
}

/// `Σ_{p+q=n+2, 2≤p,q≤n} x_p{y_q}` restricted to the pairs `keep` accepts.
pub(crate) fn brace_sum(
    handle: &OperadHandle,
    n: usize,
    x: &dyn Fn(usize) -> Cochain,
    y: &dyn Fn(usize) -> Cochain,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<Cochain> {
    let mut acc: Option<Cochain> = None;
    for p in 2..=n {
        let q = n + 2 - p;
        if !(2..=n).contains(&q) || !keep(p, q) {
            continue;
        }
        let term = brace(&x(p), &[y(q)])?;
        acc = Some(match acc {
            Some(a) => a.try_add(&term)?,
            None => term,
        });
    }
    Ok(acc.unwrap_or_else(|| Cochain::zero(handle, n + 1, 2 - n as i64)))
}

#[derive(Clone, Debug)]
pub struct Residual {
    pub n: usize,
    pub cochain: Cochain,
    /// The equation is automatic on a sparse space.
    pub tautological: bool,
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.cochain.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub k: usize,
    pub residuals: Vec<Residual>,
    /// Sparsity of the underlying spaces (`0` = concentrated in degree 0).
    pub sparse_d: usize,
    /// Arities whose operation vanishes for degree reasons.
    pub forced_zero: Vec<usize>,
}

impl ResidualReport {
    pub fn valid(&self) -> bool {
        self.residuals.iter().all(Residual::is_zero)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.residuals.iter().find(|r| !r.is_zero()).map(|r| r.n)
    }

    fn ok_or_fail(&self) -> Result<()> {
        match self.first_failure() {
            Some(n) => Err(Error::ResidualNonzero(n)),
            None => Ok(()),
        }
    }
}

fn report(k: usize, sparse_d: usize, eq: impl Fn(usize) -> Result<Cochain>, ops: impl Fn(usize) -> bool) -> Result<ResidualReport> {
    let mut residuals = Vec::new();
    for n in 2..k {
        residuals.push(Residual {
            n,
            cochain: eq(n)?,
            tautological: forced_zero(n, sparse_d),
        });
    }
    let forced_zero = (3..=k).filter(|&n| forced_zero(n, sparse_d)).collect::<Vec<_>>();
    // a forced-zero operation that is nonzero would be a bidegree bug upstream
    debug_assert!(forced_zero.iter().all(|&n| !ops(n)));
    Ok(ResidualReport { k, residuals, sparse_d, forced_zero })
}

pub fn verify_ak_algebra(s: &AkAlgebra) -> Result<ResidualReport> {
    report(s.k, s.sparsity(), |n| s.equation(n), |n| s.ops.contains_key(&n))
}

#[derive(Clone, Debug)]
pub struct AkBimodule {
    parent: AkAlgebra,
    module: Bimodule,
    handle: OperadHandle,
    ideal: OperadIdeal,
    k: usize,
    module_m2: Cochain,
    ops: BTreeMap<usize, Cochain>,
}

impl AkBimodule {
    /// The strict bimodule over `parent` with `m^M_n = 0` for `n ≥ 3`.
    pub fn new(parent: &AkAlgebra, module: &Bimodule, k: usize) -> Result<AkBimodule> {
        if k < 2 {
            return Err(Error::KTooSmall { needed: 2, k });
        }
        if parent.k < k {
            return Err(Error::MissingArity(k));
        }
        let (handle, ideal) = linear_endomorphism_operad(parent.algebra.space(), module.space())?;
        let module_m2 = module.action(&parent.algebra, &handle)?;
        Ok(AkBimodule {
            parent: parent.clone(),
            module: module.clone(),
            handle,
            ideal,
            k,
            module_m2,
            ops: BTreeMap::new(),
        })
    }

    /// Sets `m^M_n` for `3 ≤ n ≤ k`; the cochain must lie in the ideal of [`AkBimodule::handle`].
    pub fn set_op(&mut self, n: usize, op: Cochain) -> Result<()> {
        if n < 3 || n > self.k {
            return Err(Error::ArityOutOfRange(n));
        }
        check_op(&self.handle, n, &op)?;
        if !self.ideal.contains(&op) {
            return Err(Error::NotInIdeal);
        }
        if op.is_zero() {
            self.ops.remove(&n);
        } else {
            self.ops.insert(n, op);
        }
        Ok(())
    }

    pub fn with_op(mut self, n: usize, op: Cochain) -> Result<AkBimodule> {
        self.set_op(n, op)?;
        Ok(self)
    }

    /// `m^M_n` for `2 ≤ n ≤ k`.
    pub fn op(&self, n: usize) -> Cochain {
        assert!((2..=self.k).contains(&n), "m^M_{n} outside 2..={}", self.k);
        match n {
            2 => self.module_m2.clone(),
            _ => self.ops.get(&n).cloned().unwrap_or_else(|| Cochain::zero(&self.handle, n, 2 - n as i64)),
        }
    }

    /// `m^A_n` transported to `E(A, M)`; `n` up to the parent's `k`.
    pub fn algebra_op(&self, n: usize) -> Cochain {
        self.parent.op(n).transport(&self.handle).expect("E(A) embeds in E(A, M)")
    }

    /// `m^{A⋉M}_n = m^A_n + m^M_n`.
    pub fn combined_op(&self, n: usize) -> Cochain {
        &self.algebra_op(n) + &self.op(n)
    }

    pub fn nonzero_ops(&self) -> impl Iterator<Item = (usize, &Cochain)> {
        self.ops.iter().map(|(n, c)| (*n, c))
    }

    pub fn parent(&self) -> &AkAlgebra {
        &self.parent
    }

    pub fn module(&self) -> &Bimodule {
        &self.module
    }

    pub fn handle(&self) -> &OperadHandle {
        &self.handle
    }

    pub fn ideal(&self) -> &OperadIdeal {
        &self.ideal
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> FieldSpec {
        self.parent.field()
    }

    /// Same bimodule over another algebra structure with the same product.
    pub fn with_parent(&self, parent: &AkAlgebra) -> Result<AkBimodule> {
        if parent.k < self.k {
            return Err(Error::MissingArity(self.k));
        }
        if parent.algebra.space() != self.parent.algebra.space() || parent.algebra.product() != self.parent.algebra.product() {
            return Err(Error::Unsupported("replacement algebra has a different product".into()));
        }
        let mut out = self.clone();
        out.parent = parent.clone();
        Ok(out)
    }

    pub fn truncate(&self, k: usize) -> Result<AkBimodule> {
        if k < 2 || k > self.k {
            return Err(Error::ArityOutOfRange(k));
        }
        let mut out = self.clone();
        out.k = k;
        out.ops.retain(|n, _| *n <= k);
        Ok(out)
    }

    pub fn padded(&self) -> Result<AkBimodule> {
        if self.parent.k < self.k + 1 {
            return Err(Error::MissingArity(self.k + 1));
        }
        let mut out = self.clone();
        out.k += 1;
        Ok(out)
    }

    pub fn sparsity(&self) -> usize {
        let mut degrees: BTreeSet<i64> = self.parent.algebra.space().support();
        degrees.extend(self.module.space().support());
        sparsity_of_degrees(degrees)
    }

    /// `Σ_{p+q=n+2} m^M_p{m^A_q + m^M_q}`, a bimodule cochain.
    pub fn equation(&self, n: usize) -> Result<Cochain> {
        brace_sum(&self.handle, n, &|p| self.op(p), &|q| self.combined_op(q), |_, _| true)
    }

    /// `Σ_{p+q=n+2} m^{A⋉M}_p{m^{A⋉M}_q}` in `HCE`.
    pub fn combined_equation(&self, n: usize) -> Result<Cochain> {
        brace_sum(&self.handle, n, &|p| self.combined_op(p), &|q| self.combined_op(q), |_, _| true)
    }

    /// `HC`, `BC` and `HCE` windows over this structure's handles.
    pub fn windows(&self, window: DegreeWindow) -> Result<BimoduleComplexes> {
        bimodule_on(&self.parent.handle, &self.parent.m2, &self.ideal, &self.module_m2, window)
    }
}

pub fn verify_ak_bimodule(s: &AkBimodule) -> Result<ResidualReport> {
    report(s.k, s.sparsity(), |n| s.equation(n), |n| s.ops.contains_key(&n))
}

/// Residuals of the pair in `HCE` together with their two parts.
#[derive(Clone, Debug)]
pub struct PairResiduals {
    pub combined: ResidualReport,
    pub algebra: ResidualReport,
    pub bimodule: ResidualReport,
}

impl PairResiduals {
    /// Whether every combined residual is the algebra residual plus the bimodule residual.
    pub fn decomposes(&self, handle: &OperadHandle) -> Result<bool> {
        for ((c, a), b) in self.combined.residuals.iter().zip(&self.algebra.residuals).zip(&self.bimodule.residuals) {
            let sum = a.cochain.transport(handle)?.try_add(&b.cochain)?;
            if sum != c.cochain {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn combined_pair_residuals(s: &AkBimodule) -> Result<PairResiduals> {
    let algebra = verify_ak_algebra(&s.parent.truncate(s.k)?)?;
    let bimodule = verify_ak_bimodule(s)?;
    let combined = report(s.k, s.sparsity(), |n| s.combined_equation(n), |n| s.ops.contains_key(&n))?;
    Ok(PairResiduals { combined, algebra, bimodule })
}

/// A universal Massey product and the window its class lives in.
#[derive(Clone, Debug)]
pub struct MasseyProduct {
    /// `d`: the class is `⟨m_{d+2}⟩` in bidegree `(d + 2, −d)`.
    pub length_offset: usize,
    pub window: ComplexWindow,
    pub class: CohomologyClass,
    /// `c` with `d(c) = m_{d+2}` when the class vanishes.
    pub primitive: Option<Cochain>,
}

fn massey_window(d: usize) -> DegreeWindow {
    let d = d as i64;
    DegreeWindow::new(d + 1, d + 3, -d, -d).expect("valid window")
}

fn massey_from(window: ComplexWindow, rep: Cochain, d: usize) -> Result<MasseyProduct> {
    if !window.apply_d(&rep)?.is_zero() {
        return Err(Error::NotCocycle);
    }
    let class = window.class_of(&rep)?;
    let primitive = window.is_coboundary(&rep)?;
    Ok(MasseyProduct { length_offset: d, window, class, primitive })
}

/// `⟨m_{d+2}⟩ ∈ HH^{d+2,−d}`; `d = 1` gives `⟨m3⟩`.
pub fn universal_massey(s: &AkAlgebra, d: usize) -> Result<MasseyProduct> {
    assert!(d >= 1);
    if s.k < d + 3 {
        return Err(Error::KTooSmall { needed: d + 3, k: s.k });
    }
    verify_ak_algebra(&s.truncate(d + 3)?)?.ok_or_fail()?;
    massey_from(s.hochschild_window(massey_window(d))?, s.op(d + 2), d)
}

/// `⟨m^A_{d+2} + m^M_{d+2}⟩ ∈ HHE^{d+2,−d}`. Also returns the three windows.
pub fn bimodule_universal_massey(s: &AkBimodule, d: usize) -> Result<(MasseyProduct, BimoduleComplexes)> {
    assert!(d >= 1);
    if s.k < d + 3 {
        return Err(Error::KTooSmall { needed: d + 3, k: s.k });
    }
    combined_pair_residuals(&s.truncate(d + 3)?)?.combined.ok_or_fail()?;
    let cx = s.windows(massey_window(d))?;
    let m = massey_from(cx.hce.clone(), s.combined_op(d + 2), d)?;
    Ok((m, cx))
}
