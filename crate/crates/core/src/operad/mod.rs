//! Graded non-symmetric operads and their cochains.
//!
//! Three kinds of operad are supported: the endomorphism operad `E(V)`, the
//! linear endomorphism operad `E(V, W)` of maps with at most one `W` input
//! (and `W` output exactly when there is one), and finite operads given by
//! structure constants. Cochains of arity `p` and vertical degree `q` are
//! elements of `O(p)^q`; composition is that of the operadic suspension.
//!
//! For endomorphism operads a cochain is the multilinear map itself, stored
//! as a table keyed by `[input labels…, output label]`.

mod endo;
mod finite;
mod ideal;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

pub use endo::EndoOperad;
pub use finite::{CompositionTable, FiniteOperad};
pub use ideal::{is_associative_ideal, IdealWitness, OperadIdeal, Selector};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::graded::GradedSpace;

/// Table key: label indices `[in_1, …, in_p, out]` for endomorphism operads,
/// `[basis index]` for finite operads.
pub type Key = Vec<u16>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Algebra,
    Module,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotSignature {
    pub slots: Vec<Slot>,
    pub output: Slot,
}

impl SlotSignature {
    /// At most one module input, and module output exactly when there is one.
    pub fn is_linear(&self) -> bool {
        let m = self.slots.iter().filter(|s| **s == Slot::Module).count();
        match m {
            0 => self.output == Slot::Algebra,
            1 => self.output == Slot::Module,
            _ => false,
        }
    }

    pub fn module_position(&self) -> Option<usize> {
        self.slots.iter().position(|s| *s == Slot::Module)
    }
}

impl fmt::Display for SlotSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |s: &Slot| if *s == Slot::Module { 'M' } else { 'A' };
        let ins: String = self.slots.iter().map(c).collect();
        write!(f, "{ins}->{}", c(&self.output))
    }
}

#[derive(Debug)]
pub enum Operad {
    Endo(EndoOperad),
    Finite(FiniteOperad),
}

/// Shared, immutable operad. Equality is identity.
#[derive(Clone, Debug)]
pub struct OperadHandle(Arc<Operad>);

impl PartialEq for OperadHandle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for OperadHandle {}

/// `E(V)`.
pub fn endomorphism_operad(v: &GradedSpace) -> OperadHandle {
    OperadHandle(Arc::new(Operad::Endo(EndoOperad::new(v.clone(), None))))
}

/// `E(V, W)` on the space `V ⊕ W`, together with its ideal `E*(V, W)` of
/// maps with a `W` input.
pub fn linear_endomorphism_operad(v: &GradedSpace, w: &GradedSpace) -> Result<(OperadHandle, OperadIdeal)> {
    let sum = v.direct_sum(w)?;
    let h = OperadHandle(Arc::new(Operad::Endo(EndoOperad::new(sum, Some(v.dim())))));
    let ideal = OperadIdeal::new(h.clone(), Selector::ModuleOutput)?;
    Ok((h, ideal))
}

impl OperadHandle {
    pub fn finite(op: FiniteOperad) -> OperadHandle {
        OperadHandle(Arc::new(Operad::Finite(op)))
    }

    pub fn operad(&self) -> &Operad {
        &self.0
    }

    pub fn field(&self) -> FieldSpec {
        match &*self.0 {
            Operad::Endo(e) => e.space().field(),
            Operad::Finite(f) => f.field(),
        }
    }

    pub fn as_endo(&self) -> Option<&EndoOperad> {
        match &*self.0 {
            Operad::Endo(e) => Some(e),
            Operad::Finite(_) => None,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteOperad> {
        match &*self.0 {
            Operad::Finite(f) => Some(f),
            Operad::Endo(_) => None,
        }
    }

    /// Largest carried arity (`None` = unbounded).
    pub fn max_arity(&self) -> Option<usize> {
        match &*self.0 {
            Operad::Endo(_) => None,
            Operad::Finite(f) => Some(f.max_arity()),
        }
    }

    /// The unit in arity 1; `None` only for the endomorphism operad of `0`.
    pub fn unit(&self) -> Option<Cochain> {
        match &*self.0 {
            Operad::Endo(e) => {
                if e.space().dim() == 0 {
                    return None;
                }
                let one = self.field().one();
                let terms = (0..e.space().dim() as u16).map(|i| (vec![i, i], one.clone())).collect();
                Some(Cochain::from_raw(self.clone(), 1, 0, terms))
            }
            Operad::Finite(f) => Some(Cochain::from_raw(
                self.clone(),
                1,
                0,
                BTreeMap::from([(vec![f.unit() as u16], self.field().one())]),
            )),
        }
    }

    /// All basis keys of arity `p` and vertical degree `q`, in key order.
    pub fn basis_keys(&self, p: usize, q: i64) -> Vec<Key> {
        match &*self.0 {
            Operad::Endo(e) => e.basis_keys(p, q, |_| true),
            Operad::Finite(f) => f.basis_keys(p, q),
        }
    }

    /// Whether a key is allowed (degree and signature), for validation.
    fn check_key(&self, p: usize, q: i64, key: &Key) -> Result<()> {
        match &*self.0 {
            Operad::Endo(e) => e.check_key(p, q, key),
            Operad::Finite(f) => f.check_key(p, q, key),
        }
    }

    fn describe_key(&self, key: &Key) -> String {
        match &*self.0 {
            Operad::Endo(e) => e.describe_key(key),
            Operad::Finite(_) => format!("basis {}", key[0]),
        }
    }
}

/// A bihomogeneous element of the operad complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    handle: OperadHandle,
    arity: usize,
    degree: i64,
    terms: BTreeMap<Key, Scalar>,
}

impl Cochain {
    pub fn zero(handle: &OperadHandle, arity: usize, degree: i64) -> Cochain {
        Cochain {
            handle: handle.clone(),
            arity,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Unchecked; zero coefficients are dropped.
    pub(crate) fn from_raw(handle: OperadHandle, arity: usize, degree: i64, mut terms: BTreeMap<Key, Scalar>) -> Cochain {
        terms.retain(|_, v| !v.is_zero());
        Cochain {
            handle,
            arity,
            degree,
            terms,
        }
    }

    /// Builds a cochain, checking homogeneity and slot signatures. Repeated keys add up.
    pub fn new(handle: &OperadHandle, arity: usize, degree: i64, entries: impl IntoIterator<Item = (Key, Scalar)>) -> Result<Cochain> {
        let field = handle.field();
        let mut terms: BTreeMap<Key, Scalar> = BTreeMap::new();
        for (k, v) in entries {
            handle.check_key(arity, degree, &k)?;
            let e = terms.entry(k).or_insert_with(|| field.zero());
            *e += &v;
        }
        Ok(Cochain::from_raw(handle.clone(), arity, degree, terms))
    }

    /// Builds an endomorphism cochain from `(inputs, output, coefficient)` label rows.
    pub fn from_labels(handle: &OperadHandle, arity: usize, degree: i64, rows: &[(&[&str], &str, Scalar)]) -> Result<Cochain> {
        let e = handle
            .as_endo()
            .ok_or_else(|| Error::Unsupported("label tables need an endomorphism operad".into()))?;
        let mut entries = Vec::new();
        for (ins, out, c) in rows {
            if ins.len() != arity {
                return Err(Error::DimensionMismatch {
                    expected: arity,
                    got: ins.len(),
                });
            }
            let mut key = Vec::with_capacity(arity + 1);
            for l in ins.iter().chain(std::iter::once(out)) {
                key.push(e.index_of(l)?);
            }
            entries.push((key, c.clone()));
        }
        Cochain::new(handle, arity, degree, entries)
    }

    pub fn handle(&self) -> &OperadHandle {
        &self.handle
    }

    pub fn field(&self) -> FieldSpec {
        self.handle.field()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Vertical degree `q`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `(p, q)`.
    pub fn bidegree(&self) -> (usize, i64) {
        (self.arity, self.degree)
    }

    /// `p + q − 1`, the degree used in all Koszul signs of the brace calculus.
    pub fn shifted_degree(&self) -> i64 {
        self.arity as i64 + self.degree - 1
    }

    pub fn terms(&self) -> &BTreeMap<Key, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, key: &Key) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| self.field().zero())
    }

    /// Coefficient looked up by labels (endomorphism operads only).
    pub fn at(&self, inputs: &[&str], output: &str) -> Scalar {
        let e = self.handle.as_endo().expect("label lookup needs an endomorphism operad");
        let key: Key = inputs
            .iter()
            .chain(std::iter::once(&output))
            .map(|l| e.index_of(l).expect("unknown label"))
            .collect();
        self.coefficient(&key)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        Cochain::from_raw(self.handle.clone(), self.arity, self.degree, terms)
    }

    fn same_shape(&self, other: &Cochain) -> Result<()> {
        if self.handle != other.handle {
            return Err(Error::MismatchedHandles);
        }
        if self.bidegree() != other.bidegree() {
            return Err(Error::Unsupported(format!(
                "adding cochains of bidegrees {:?} and {:?}",
                self.bidegree(),
                other.bidegree()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Cochain) -> Result<Cochain> {
        self.same_shape(other)?;
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            match terms.get_mut(k) {
                Some(e) => *e += v,
                None => {
                    terms.insert(k.clone(), v.clone());
                }
            }
        }
        Ok(Cochain::from_raw(self.handle.clone(), self.arity, self.degree, terms))
    }

    /// Same cochain viewed over another endomorphism handle whose basis
    /// extends or restricts this one by a common prefix; keys using labels
    /// outside the target are dropped.
    pub fn transport(&self, target: &OperadHandle) -> Result<Cochain> {
        let (src, dst) = match (self.handle.as_endo(), target.as_endo()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Unsupported("transport needs endomorphism operads".into())),
        };
        let shared = src.space().dim().min(dst.space().dim());
        for i in 0..shared {
            if src.space().basis()[i] != dst.space().basis()[i] {
                return Err(Error::MismatchedHandles);
            }
        }
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            if k.iter().all(|&l| (l as usize) < shared) {
                dst.check_key(self.arity, self.degree, k)?;
                terms.insert(k.clone(), v.clone());
            }
        }
        Ok(Cochain::from_raw(target.clone(), self.arity, self.degree, terms))
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| format!("{v}·[{}]", self.handle.describe_key(k)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a Cochain> for &'a Cochain {
    type Output = Cochain;
    /// Panics on mismatched shapes; use [`Cochain::try_add`] to handle that case.
    fn add(self, rhs: &Cochain) -> Cochain {
        self.try_add(rhs).expect("cochain shapes differ")
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        self.scale(&-self.field().one())
    }
}

impl<'a> Sub<&'a Cochain> for &'a Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        self + &-rhs
    }
}

/// The suspended infinitesimal composition `x ∘_i y` (1-based `i`).
pub fn compose_at(x: &Cochain, y: &Cochain, i: usize) -> Result<Cochain> {
    if x.handle != y.handle {
        return Err(Error::MismatchedHandles);
    }
    if i == 0 || i > x.arity {
        return Err(Error::SlotOutOfRange { slot: i, arity: x.arity });
    }
    let arity = x.arity + y.arity - 1;
    let degree = x.degree + y.degree;
    if x.is_zero() || y.is_zero() {
        if let Some(n) = x.handle.max_arity() {
            if arity > n {
                return Err(Error::ArityOutOfRange(arity));
            }
        }
        return Ok(Cochain::zero(&x.handle, arity, degree));
    }
    let terms = match &*x.handle.0 {
        Operad::Endo(e) => e.compose(x, y, i),
        Operad::Finite(f) => f.compose(x, y, i)?,
    };
    Ok(Cochain::from_raw(x.handle.clone(), arity, degree, terms))
}
