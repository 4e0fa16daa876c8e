//! Bigraded cochain complexes over finite windows and their cohomology.
//!
//! A window stores, for every bidegree `(p, q)` it covers, the ordered basis
//! keys of the component and the matrix of `x ↦ [m2, x]` into `(p + 1, q)`.
//! Horizontal degree is the arity, except for ideal and bimodule complexes
//! where it is the arity minus one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::{Bimodule, GradedAlgebra};
use crate::braces::{check_multiplication, gerstenhaber_bracket};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::graded::DegreeWindow;
use crate::linalg::{kernel_basis_sparse, rank, solve_particular_sparse, QuotientBasis, SparseMatrix, SparseVec};
use crate::operad::{endomorphism_operad, linear_endomorphism_operad, Cochain, Key, OperadHandle, OperadIdeal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplexKind {
    Operad,
    Ideal,
    Hochschild,
    Bimodule,
    BimoduleHochschild,
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComplexKind::Operad => "OC",
            ComplexKind::Ideal => "IC",
            ComplexKind::Hochschild => "HC",
            ComplexKind::Bimodule => "BC",
            ComplexKind::BimoduleHochschild => "HCE",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
struct Component {
    keys: Vec<Key>,
    index: HashMap<Key, usize>,
}

#[derive(Clone, Debug)]
struct Cohomology {
    quotient: QuotientBasis,
    kernel_dim: usize,
    image_dim: usize,
}

#[derive(Clone, Debug)]
pub struct ComplexWindow {
    kind: ComplexKind,
    window: DegreeWindow,
    handle: OperadHandle,
    ideal: Option<OperadIdeal>,
    shift: usize,
    m2: Cochain,
    components: BTreeMap<(i64, i64), Component>,
    diffs: BTreeMap<(i64, i64), SparseMatrix>,
    cohomology: BTreeMap<(i64, i64), Cohomology>,
}

/// A cocycle together with its coordinates in the cohomology basis of its window.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub kind: ComplexKind,
    pub bidegree: (i64, i64),
    pub representative: Cochain,
    pub coordinates: SparseVec,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.is_empty()
    }
}

/// Operad complex `OC(O)` of an operad with multiplication.
pub fn assemble_operad_complex(handle: &OperadHandle, m2: &Cochain, window: DegreeWindow) -> Result<ComplexWindow> {
    check_multiplication(m2)?;
    if m2.handle() != handle {
        return Err(Error::MismatchedHandles);
    }
    ComplexWindow::build(ComplexKind::Operad, window, handle.clone(), None, 0, m2.clone())
}

/// Ideal complex of an operadic ideal; horizontal degree is arity − 1.
pub fn assemble_ideal_complex(ideal: &OperadIdeal, m2: &Cochain, window: DegreeWindow) -> Result<ComplexWindow> {
    check_multiplication(m2)?;
    if m2.handle() != ideal.parent() {
        return Err(Error::MismatchedHandles);
    }
    ComplexWindow::build(ComplexKind::Ideal, window, ideal.parent().clone(), Some(ideal.clone()), 1, m2.clone())
}

/// Hochschild complex `HC(A)`, the operad complex of `E(A)` with `m2` the product.
pub fn hochschild_complex(algebra: &GradedAlgebra, window: DegreeWindow) -> Result<ComplexWindow> {
    let h = endomorphism_operad(algebra.space());
    let m2 = algebra.multiplication(&h)?;
    ComplexWindow::build(ComplexKind::Hochschild, window, h, None, 0, m2)
}

/// The three complexes of an algebra and a bimodule, built over shared handles:
/// `hc` over `E(A)`, `bc` and `hce` over `E(A, M)`.
#[derive(Clone, Debug)]
pub struct BimoduleComplexes {
    pub hc: ComplexWindow,
    pub bc: ComplexWindow,
    pub hce: ComplexWindow,
    /// `m^M_2`, the action part of the multiplication of `A ⋉ M`.
    pub module_m2: Cochain,
}

pub fn assemble_bimodule_complexes(algebra: &GradedAlgebra, module: &Bimodule, window: DegreeWindow) -> Result<BimoduleComplexes> {
    let hc = hochschild_complex(algebra, window)?;
    let (h, ideal) = linear_endomorphism_operad(algebra.space(), module.space())?;
    let ma = algebra.multiplication(&h)?;
    let mm = module.action(algebra, &h)?;
    let m2 = ma.try_add(&mm)?;
    // the module axioms were checked when the bimodule was built; this is the operadic restatement
    check_multiplication(&m2).map_err(|_| Error::ModuleAxiom("A ⋉ M is not associative".into()))?;
    let bc = ComplexWindow::build(ComplexKind::Bimodule, window, h.clone(), Some(ideal), 1, m2.clone())?;
    let hce = ComplexWindow::build(ComplexKind::BimoduleHochschild, window, h, None, 0, m2)?;
    Ok(BimoduleComplexes { hc, bc, hce, module_m2: mm })
}

/// Hochschild window over an existing `E(A)` handle, so that cochains built
/// on that handle can be fed to it without transport.
pub(crate) fn hochschild_on(handle: &OperadHandle, m2: &Cochain, window: DegreeWindow) -> Result<ComplexWindow> {
    ComplexWindow::build(ComplexKind::Hochschild, window, handle.clone(), None, 0, m2.clone())
}

/// Bimodule windows over existing handles: `hc` over `E(A)`, the rest over `E(A, M)`.
pub(crate) fn bimodule_on(
    hc_handle: &OperadHandle,
    algebra_m2: &Cochain,
    ideal: &OperadIdeal,
    module_m2: &Cochain,
    window: DegreeWindow,
) -> Result<BimoduleComplexes> {
    let h = ideal.parent();
    let hc = hochschild_on(hc_handle, algebra_m2, window)?;
    let m2 = algebra_m2.transport(h)?.try_add(module_m2)?;
    let bc = ComplexWindow::build(ComplexKind::Bimodule, window, h.clone(), Some(ideal.clone()), 1, m2.clone())?;
    let hce = ComplexWindow::build(ComplexKind::BimoduleHochschild, window, h.clone(), None, 0, m2)?;
    Ok(BimoduleComplexes { hc, bc, hce, module_m2: module_m2.clone() })
}

impl ComplexWindow {
    pub(crate) fn build(
        kind: ComplexKind,
        window: DegreeWindow,
        handle: OperadHandle,
        ideal: Option<OperadIdeal>,
        shift: usize,
        m2: Cochain,
    ) -> Result<ComplexWindow> {
        let mut cx = ComplexWindow {
            kind,
            window,
            handle,
            ideal,
            shift,
            m2,
            components: BTreeMap::new(),
            diffs: BTreeMap::new(),
            cohomology: BTreeMap::new(),
        };
        for (p, q) in window.bidegrees() {
            let keys = cx.enumerate_keys(p, q);
            let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
            cx.components.insert((p, q), Component { keys, index });
        }
        for (p, q) in window.bidegrees() {
            if p < window.p_max {
                let d = cx.differential_matrix(p, q)?;
                cx.diffs.insert((p, q), d);
            }
        }
        let interior: Vec<(i64, i64)> = window.bidegrees().filter(|&(p, q)| cx.is_interior(p, q)).collect();
        for (p, q) in interior {
            let h = cx.compute_cohomology(p, q);
            cx.cohomology.insert((p, q), h);
        }
        Ok(cx)
    }

    fn enumerate_keys(&self, p: i64, q: i64) -> Vec<Key> {
        let Some(arity) = self.arity_of(p) else { return Vec::new() };
        if let Some(n) = self.handle.max_arity() {
            if arity > n {
                return Vec::new();
            }
        }
        match &self.ideal {
            Some(ideal) => ideal.basis_keys(arity, q),
            None => self.handle.basis_keys(arity, q),
        }
    }

    fn differential_matrix(&self, p: i64, q: i64) -> Result<SparseMatrix> {
        let src = &self.components[&(p, q)];
        let tgt = &self.components[&(p + 1, q)];
        let field = self.field();
        let arity = self.arity_of(p);
        let mut cols = Vec::with_capacity(src.keys.len());
        for k in &src.keys {
            let e = Cochain::new(&self.handle, arity.unwrap(), q, [(k.clone(), field.one())])?;
            let dx = gerstenhaber_bracket(&self.m2, &e)?;
            let mut col: SparseVec = Vec::with_capacity(dx.len());
            for (key, c) in dx.terms() {
                match tgt.index.get(key) {
                    Some(&i) => col.push((i, c.clone())),
                    None => {
                        return Err(Error::Unsupported(format!(
                            "differential leaves the {} family at ({}, {q})",
                            self.kind,
                            p + 1
                        )))
                    }
                }
            }
            col.sort_by_key(|(i, _)| *i);
            cols.push(col);
        }
        Ok(SparseMatrix::from_columns(field, tgt.keys.len(), cols))
    }

    fn compute_cohomology(&self, p: i64, q: i64) -> Cohomology {
        let field = self.field();
        let dim = self.components[&(p, q)].keys.len();
        let out = &self.diffs[&(p, q)];
        let kernel = kernel_basis_sparse(out);
        let mut quotient = QuotientBasis::new(field);
        let mut image_dim = 0;
        if let Some(d_in) = self.diffs.get(&(p - 1, q)) {
            image_dim = rank(d_in);
            for c in 0..d_in.cols() {
                quotient.add_image(d_in.column(c).to_vec());
            }
        }
        for v in &kernel {
            quotient.add_candidate(v.clone());
        }
        debug_assert!(kernel.len() <= dim);
        Cohomology {
            quotient,
            kernel_dim: kernel.len(),
            image_dim,
        }
    }

    /// Same kind, handle and multiplication over another window.
    pub fn rebuilt(&self, window: DegreeWindow) -> Result<ComplexWindow> {
        ComplexWindow::build(self.kind, window, self.handle.clone(), self.ideal.clone(), self.shift, self.m2.clone())
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    pub fn handle(&self) -> &OperadHandle {
        &self.handle
    }

    pub fn ideal(&self) -> Option<&OperadIdeal> {
        self.ideal.as_ref()
    }

    pub fn field(&self) -> FieldSpec {
        self.handle.field()
    }

    /// The multiplication whose bracket is the differential.
    pub fn multiplication(&self) -> &Cochain {
        &self.m2
    }

    /// Arity of cochains in horizontal degree `p`, if there are any.
    pub fn arity_of(&self, p: i64) -> Option<usize> {
        let a = p + self.shift as i64;
        (a >= 0).then_some(a as usize)
    }

    /// Horizontal degree of a cochain of the given arity.
    pub fn horizontal_of(&self, arity: usize) -> i64 {
        arity as i64 - self.shift as i64
    }

    pub fn bidegree_of(&self, x: &Cochain) -> (i64, i64) {
        (self.horizontal_of(x.arity()), x.degree())
    }

    pub fn contains(&self, p: i64, q: i64) -> bool {
        self.window.contains(p, q)
    }

    /// Both differentials at `(p, q)` are assembled (below degree 0 the
    /// incoming one is zero by definition).
    pub fn is_interior(&self, p: i64, q: i64) -> bool {
        self.contains(p, q) && p < self.window.p_max && (p > self.window.p_min || p <= 0)
    }

    pub fn component_dim(&self, p: i64, q: i64) -> Result<usize> {
        self.components
            .get(&(p, q))
            .map(|c| c.keys.len())
            .ok_or(Error::OutsideWindow(p, q))
    }

    pub fn basis(&self, p: i64, q: i64) -> Result<&[Key]> {
        self.components
            .get(&(p, q))
            .map(|c| c.keys.as_slice())
            .ok_or(Error::OutsideWindow(p, q))
    }

    /// Matrix of `d` from `(p, q)` to `(p + 1, q)`.
    pub fn differential(&self, p: i64, q: i64) -> Option<&SparseMatrix> {
        self.diffs.get(&(p, q))
    }

    /// Bidegrees where `d_{p+1} d_p` is not the zero matrix.
    pub fn d_squared_defects(&self) -> Result<Vec<(i64, i64)>> {
        let mut bad = Vec::new();
        for (&(p, q), d) in &self.diffs {
            if let Some(d2) = self.diffs.get(&(p + 1, q)) {
                if !d2.mul(d)?.is_zero() {
                    bad.push((p, q));
                }
            }
        }
        Ok(bad)
    }

    /// Coordinates of a cochain in the component basis of its bidegree.
    pub fn to_vector(&self, x: &Cochain) -> Result<SparseVec> {
        if x.handle() != &self.handle {
            return Err(Error::MismatchedHandles);
        }
        let (p, q) = self.bidegree_of(x);
        let comp = self.components.get(&(p, q)).ok_or(Error::OutsideWindow(p, q))?;
        let mut v = Vec::with_capacity(x.len());
        for (k, c) in x.terms() {
            let i = comp.index.get(k).ok_or(Error::NotInIdeal)?;
            v.push((*i, c.clone()));
        }
        v.sort_by_key(|(i, _)| *i);
        Ok(v)
    }

    pub fn from_vector(&self, p: i64, q: i64, v: &[(usize, Scalar)]) -> Result<Cochain> {
        let comp = self.components.get(&(p, q)).ok_or(Error::OutsideWindow(p, q))?;
        let arity = self.arity_of(p).ok_or(Error::OutsideWindow(p, q))?;
        Cochain::new(&self.handle, arity, q, v.iter().map(|(i, c)| (comp.keys[*i].clone(), c.clone())))
    }

    /// `d(x) = [m2, x]`, computed directly on the cochain.
    pub fn apply_d(&self, x: &Cochain) -> Result<Cochain> {
        gerstenhaber_bracket(&self.m2, x)
    }

    fn cohomology_at(&self, p: i64, q: i64) -> Result<&Cohomology> {
        if !self.contains(p, q) {
            return Err(Error::OutsideWindow(p, q));
        }
        self.cohomology.get(&(p, q)).ok_or(Error::Partial(p, q))
    }

    pub fn cohomology_dim(&self, p: i64, q: i64) -> Result<usize> {
        let h = self.cohomology_at(p, q)?;
        Ok(h.kernel_dim - h.image_dim)
    }

    /// `(dim ker, dim im)` at an interior bidegree.
    pub fn kernel_and_image(&self, p: i64, q: i64) -> Result<(usize, usize)> {
        let h = self.cohomology_at(p, q)?;
        Ok((h.kernel_dim, h.image_dim))
    }

    /// Representatives of a basis of the cohomology at `(p, q)`.
    pub fn cohomology_basis(&self, p: i64, q: i64) -> Result<Vec<Cochain>> {
        let h = self.cohomology_at(p, q)?;
        h.quotient.representatives().iter().map(|v| self.from_vector(p, q, v)).collect()
    }

    fn check_cocycle(&self, x: &Cochain) -> Result<()> {
        if x.handle() != &self.handle {
            return Err(Error::MismatchedHandles);
        }
        if let Some(ideal) = &self.ideal {
            if !ideal.contains(x) {
                return Err(Error::NotInIdeal);
            }
        }
        if !self.apply_d(x)?.is_zero() {
            return Err(Error::NotCocycle);
        }
        Ok(())
    }

    /// A primitive `c` with `d(c) = x`, or `None` when `x` is not a coboundary.
    /// Needs `(p − 1, q)` in the window unless `p ≤ 0`.
    pub fn is_coboundary(&self, x: &Cochain) -> Result<Option<Cochain>> {
        self.check_cocycle(x)?;
        let (p, q) = self.bidegree_of(x);
        if !self.contains(p, q) {
            return Err(Error::OutsideWindow(p, q));
        }
        let v = self.to_vector(x)?;
        match self.diffs.get(&(p - 1, q)) {
            Some(d_in) => Ok(solve_particular_sparse(d_in, &v).map(|c| self.from_vector(p - 1, q, &c)).transpose()?),
            None if p > 0 => Err(Error::Partial(p, q)),
            // nothing below degree 0: only zero is exact, and it has no primitive of a valid shape
            None if v.is_empty() => Err(Error::OutsideWindow(p - 1, q)),
            None => Ok(None),
        }
    }

    fn is_exact(&self, x: &Cochain) -> Result<bool> {
        let (p, _) = self.bidegree_of(x);
        if p <= 0 && !self.diffs.contains_key(&(p - 1, x.degree())) {
            self.check_cocycle(x)?;
            return Ok(x.is_zero());
        }
        Ok(self.is_coboundary(x)?.is_some())
    }

    /// Coordinates of the class of a cocycle in the cohomology basis.
    pub fn class_coordinates(&self, x: &Cochain) -> Result<SparseVec> {
        self.check_cocycle(x)?;
        let (p, q) = self.bidegree_of(x);
        let h = self.cohomology_at(p, q)?;
        let v = self.to_vector(x)?;
        h.quotient.coordinates(v).ok_or(Error::NotCocycle)
    }

    pub fn class_of(&self, x: &Cochain) -> Result<CohomologyClass> {
        let coordinates = self.class_coordinates(x)?;
        Ok(CohomologyClass {
            kind: self.kind,
            bidegree: self.bidegree_of(x),
            representative: x.clone(),
            coordinates,
        })
    }

    /// The class with the given coordinates (sum of basis representatives).
    pub fn class_from_coordinates(&self, p: i64, q: i64, coords: &[(usize, Scalar)]) -> Result<CohomologyClass> {
        let h = self.cohomology_at(p, q)?;
        let mut v: SparseVec = Vec::new();
        for (j, c) in coords {
            v = crate::linalg::axpy(&v, &-c.clone(), &h.quotient.representatives()[*j]);
        }
        let representative = self.from_vector(p, q, &v)?;
        Ok(CohomologyClass {
            kind: self.kind,
            bidegree: (p, q),
            representative,
            coordinates: coords.to_vec(),
        })
    }

    /// Whether two cocycles of one bidegree differ by a coboundary.
    pub fn classes_equal(&self, x: &Cochain, y: &Cochain) -> Result<bool> {
        let diff = x.try_add(&y.scale(&-self.field().one()))?;
        self.is_exact(&diff)
    }

    /// Matrix, in cohomology bases, of the map induced by a cochain map
    /// `f` from `(p, q)` of this window to `(tp, tq)` of `target`.
    pub fn induced_matrix(
        &self,
        p: i64,
        q: i64,
        target: &ComplexWindow,
        tp: i64,
        tq: i64,
        f: impl Fn(&Cochain) -> Result<Cochain>,
    ) -> Result<SparseMatrix> {
        let rows = target.cohomology_dim(tp, tq)?;
        let mut cols = Vec::new();
        for rep in self.cohomology_basis(p, q)? {
            let img = f(&rep)?;
            cols.push(target.class_coordinates(&img)?);
        }
        Ok(SparseMatrix::from_columns(self.field(), rows, cols))
    }
}

/// `δ`-representative `[m^M_2, α]` of a Hochschild cochain, as a bimodule cochain.
pub fn delta_representative(cx: &BimoduleComplexes, alpha: &Cochain) -> Result<Cochain> {
    let lifted = alpha.transport(cx.bc.handle())?;
    gerstenhaber_bracket(&cx.module_m2, &lifted)
}

/// Connecting map `HH^{p,q} → Ext^{p,q}`.
pub fn connecting_delta(cx: &BimoduleComplexes, class: &CohomologyClass) -> Result<CohomologyClass> {
    if class.kind != ComplexKind::Hochschild {
        return Err(Error::Unsupported("connecting map starts in Hochschild cohomology".into()));
    }
    let rep = delta_representative(cx, &class.representative)?;
    cx.bc.class_of(&rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LesPosition {
    /// `Ext^{p−1,q} → HHE^{p,q} → HH^{p,q}`, exactness at `HHE`.
    Hhe,
    /// `HHE^{p,q} → HH^{p,q} → Ext^{p,q}`, exactness at `HH`.
    Hh,
    /// `HH^{p,q} → Ext^{p,q} → HHE^{p+1,q}`, exactness at `Ext`.
    Ext,
}

#[derive(Clone, Debug)]
pub struct LesNode {
    pub position: LesPosition,
    pub bidegree: (i64, i64),
    /// Dimensions of the three groups around the node.
    pub dims: [usize; 3],
    pub rank_in: usize,
    pub rank_out: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct LesReport {
    pub nodes: Vec<LesNode>,
}

impl LesReport {
    pub fn exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }

    pub fn failures(&self) -> Vec<&LesNode> {
        self.nodes.iter().filter(|n| !n.exact).collect()
    }
}

fn zero_map(field: FieldSpec, rows: usize, cols: usize) -> SparseMatrix {
    SparseMatrix::zero(field, rows, cols)
}

/// Checks `im = ker` at every node of the long exact sequence whose three groups are interior.
pub fn les_exactness_audit(cx: &BimoduleComplexes) -> Result<LesReport> {
    let field = cx.hc.field();
    let (hc, bc, hce) = (&cx.hc, &cx.bc, &cx.hce);
    let incl = |x: &Cochain| Ok(x.clone());
    let proj = |x: &Cochain| x.transport(hc.handle());
    let delta = |x: &Cochain| delta_representative(cx, x);
    // dimension of a group, Some(0) below the complex, None if not interior
    let dim = |w: &ComplexWindow, p: i64, q: i64| -> Option<usize> {
        if p < 0 {
            return Some(0);
        }
        w.cohomology_dim(p, q).ok()
    };
    let map = |src: &ComplexWindow, p: i64, q: i64, tgt: &ComplexWindow, tp: i64, f: &dyn Fn(&Cochain) -> Result<Cochain>| -> Result<SparseMatrix> {
        let rows = dim(tgt, tp, q).unwrap();
        let cols = dim(src, p, q).unwrap();
        if rows == 0 || cols == 0 {
            return Ok(zero_map(field, rows, cols));
        }
        src.induced_matrix(p, q, tgt, tp, q, f)
    };
    let mut nodes = Vec::new();
    let w = hc.window();
    for (p, q) in w.bidegrees() {
        // (source window, degree), (middle), (target), maps
        let triples: [(LesPosition, (&ComplexWindow, i64), (&ComplexWindow, i64), (&ComplexWindow, i64)); 3] = [
            (LesPosition::Hhe, (bc, p - 1), (hce, p), (hc, p)),
            (LesPosition::Hh, (hce, p), (hc, p), (bc, p)),
            (LesPosition::Ext, (hc, p), (bc, p), (hce, p + 1)),
        ];
        for (pos, (u, up), (v, vp), (t, tp)) in triples {
            let (Some(du), Some(dv), Some(dt)) = (dim(u, up, q), dim(v, vp, q), dim(t, tp, q)) else {
                continue;
            };
            let (f_in, f_out): (&dyn Fn(&Cochain) -> Result<Cochain>, &dyn Fn(&Cochain) -> Result<Cochain>) = match pos {
                LesPosition::Hhe => (&incl, &proj),
                LesPosition::Hh => (&proj, &delta),
                LesPosition::Ext => (&delta, &incl),
            };
            let a = map(u, up, q, v, vp, f_in)?;
            let b = map(v, vp, q, t, tp, f_out)?;
            let composite_zero = b.mul(&a)?.is_zero();
            let (rank_in, rank_out) = (rank(&a), rank(&b));
            nodes.push(LesNode {
                position: pos,
                bidegree: (p, q),
                dims: [du, dv, dt],
                rank_in,
                rank_out,
                composite_zero,
                exact: composite_zero && rank_in + rank_out == dv,
            });
        }
    }
    Ok(LesReport { nodes })
}
