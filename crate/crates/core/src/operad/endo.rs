use std::collections::BTreeMap;

use super::{Cochain, Key, Slot, SlotSignature};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::graded::GradedSpace;

/// Endomorphism operad of a graded space. In the linear variant the labels
/// from `module_from` on span `W` and only linear signatures are allowed.
#[derive(Debug)]
pub struct EndoOperad {
    space: GradedSpace,
    module_from: Option<usize>,
    by_degree: BTreeMap<i64, Vec<u16>>,
}

/// `Σ_j (p − j)(|a_j| − 1)`: the sign relating a map to its conjugate by
/// the degree −1 suspension.
fn suspension_exponent(degrees: impl ExactSizeIterator<Item = i64>) -> i64 {
    let p = degrees.len() as i64;
    degrees
        .enumerate()
        .map(|(j, d)| (p - 1 - j as i64) * (d - 1))
        .sum()
}

impl EndoOperad {
    pub(super) fn new(space: GradedSpace, module_from: Option<usize>) -> EndoOperad {
        assert!(space.dim() < u16::MAX as usize, "space too large");
        let mut by_degree: BTreeMap<i64, Vec<u16>> = BTreeMap::new();
        for i in 0..space.dim() {
            by_degree.entry(space.degree(i)).or_default().push(i as u16);
        }
        EndoOperad {
            space,
            module_from,
            by_degree,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn is_linear(&self) -> bool {
        self.module_from.is_some()
    }

    /// Number of algebra labels (all labels for `E(V)`).
    pub fn algebra_dim(&self) -> usize {
        self.module_from.unwrap_or(self.space.dim())
    }

    pub fn is_module_label(&self, l: u16) -> bool {
        self.module_from.is_some_and(|m| l as usize >= m)
    }

    pub fn index_of(&self, label: &str) -> Result<u16> {
        self.space
            .index_of(label)
            .map(|i| i as u16)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    fn slot(&self, l: u16) -> Slot {
        if self.is_module_label(l) {
            Slot::Module
        } else {
            Slot::Algebra
        }
    }

    pub fn signature(&self, key: &Key) -> SlotSignature {
        let (out, ins) = key.split_last().expect("empty key");
        SlotSignature {
            slots: ins.iter().map(|&l| self.slot(l)).collect(),
            output: self.slot(*out),
        }
    }

    fn degree(&self, l: u16) -> i64 {
        self.space.degree(l as usize)
    }

    pub(super) fn check_key(&self, p: usize, q: i64, key: &Key) -> Result<()> {
        if key.len() != p + 1 || key.iter().any(|&l| l as usize >= self.space.dim()) {
            return Err(Error::Inhomogeneous {
                entry: format!("{key:?}"),
            });
        }
        let (out, ins) = key.split_last().unwrap();
        if self.degree(*out) != ins.iter().map(|&l| self.degree(l)).sum::<i64>() + q {
            return Err(Error::Inhomogeneous {
                entry: self.describe_key(key),
            });
        }
        if self.is_linear() {
            let sig = self.signature(key);
            if !sig.is_linear() {
                return Err(Error::BadSignature(sig.to_string()));
            }
        }
        Ok(())
    }

    pub(super) fn describe_key(&self, key: &Key) -> String {
        let (out, ins) = key.split_last().unwrap();
        let ins: Vec<&str> = ins.iter().map(|&l| self.space.label(l as usize)).collect();
        format!("{}->{}", ins.join(","), self.space.label(*out as usize))
    }

    /// Keys of `Hom(V^{⊗p}, V)^q` (restricted to linear signatures in the
    /// linear variant) accepted by `keep`, in lexicographic order.
    pub fn basis_keys(&self, p: usize, q: i64, keep: impl Fn(&Key) -> bool) -> Vec<Key> {
        let mut out = Vec::new();
        let mut stack: Vec<u16> = Vec::with_capacity(p + 1);
        self.enumerate(p, q, 0, 0, &mut stack, &mut out, &keep);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(&self, p: usize, q: i64, sum: i64, modules: usize, stack: &mut Vec<u16>, out: &mut Vec<Key>, keep: &impl Fn(&Key) -> bool) {
        if stack.len() == p {
            if let Some(outs) = self.by_degree.get(&(sum + q)) {
                for &o in outs {
                    if self.is_linear() && self.is_module_label(o) != (modules == 1) {
                        continue;
                    }
                    let mut k = stack.clone();
                    k.push(o);
                    if keep(&k) {
                        out.push(k);
                    }
                }
            }
            return;
        }
        for l in 0..self.space.dim() as u16 {
            let m = modules + usize::from(self.is_module_label(l));
            if self.is_linear() && m > 1 {
                continue;
            }
            stack.push(l);
            self.enumerate(p, q, sum + self.degree(l), m, stack, out, keep);
            stack.pop();
        }
    }

    /// `x ∘_i y` computed through the suspension: both maps are conjugated
    /// by the degree −1 shift, composed with the Koszul rule in shifted
    /// degrees, and conjugated back.
    pub(super) fn compose(&self, x: &Cochain, y: &Cochain, i: usize) -> BTreeMap<Key, Scalar> {
        let field = x.field();
        let p = x.arity();
        let r = y.arity();
        let y_shifted = y.shifted_degree();
        let mut by_slot: BTreeMap<u16, Vec<(&Key, &Scalar, i64, i64)>> = BTreeMap::new();
        for (k, c) in x.terms() {
            let eps = suspension_exponent(k[..p].iter().map(|&l| self.degree(l)));
            let prefix: i64 = k[..i - 1].iter().map(|&l| self.degree(l) - 1).sum();
            by_slot.entry(k[i - 1]).or_default().push((k, c, eps, prefix));
        }
        let mut acc: BTreeMap<Key, Scalar> = BTreeMap::new();
        for (yk, cy) in y.terms() {
            let Some(xs) = by_slot.get(&yk[r]) else { continue };
            let eps_y = suspension_exponent(yk[..r].iter().map(|&l| self.degree(l)));
            for (xk, cx, eps_x, prefix) in xs {
                let mut w: Key = Vec::with_capacity(p + r);
                w.extend_from_slice(&xk[..i - 1]);
                w.extend_from_slice(&yk[..r]);
                w.extend_from_slice(&xk[i..]);
                let eps_w = suspension_exponent(w[..p + r - 1].iter().map(|&l| self.degree(l)));
                let e = eps_x + eps_y + eps_w + y_shifted * prefix;
                let c = &(*cx * cy) * &field.sign(e);
                match acc.get_mut(&w) {
                    Some(v) => *v += &c,
                    None => {
                        acc.insert(w, c);
                    }
                }
            }
        }
        acc
    }
}
