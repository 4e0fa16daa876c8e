use std::collections::{BTreeMap, BTreeSet};

use super::{compose_at, Cochain, Key, Operad, OperadHandle};
use crate::braces::brace;
use crate::error::{Error, Result};

/// Which basis elements of the parent span the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    Zero,
    All,
    /// Maps with a module output, i.e. `E*(V, W)` inside `E(V, W)`.
    ModuleOutput,
    /// Arity → selected basis indices of a finite operad.
    SubBasis(BTreeMap<usize, BTreeSet<usize>>),
}

#[derive(Clone, Debug)]
pub struct OperadIdeal {
    parent: OperadHandle,
    selector: Selector,
}

impl OperadIdeal {
    /// Checks that the selection is an ideal (closed under `∘_i` with parent
    /// basis elements on either side, inside the carried arities).
    pub fn new(parent: OperadHandle, selector: Selector) -> Result<OperadIdeal> {
        match (&selector, parent.operad()) {
            (Selector::ModuleOutput, Operad::Endo(e)) if e.is_linear() => {}
            (Selector::ModuleOutput, _) => {
                return Err(Error::Unsupported("module-output ideal needs a linear endomorphism operad".into()))
            }
            (Selector::SubBasis(_), Operad::Endo(_)) => {
                return Err(Error::Unsupported("sub-basis ideals need a finite operad".into()))
            }
            _ => {}
        }
        let ideal = OperadIdeal { parent, selector };
        if let (Selector::SubBasis(_), Some(f)) = (&ideal.selector, ideal.parent.as_finite()) {
            let n = f.max_arity();
            let h = &ideal.parent;
            for p in 0..=n {
                for x in ideal.basis_elements(p) {
                    for r in 0..=n {
                        for y in all_basis_elements(h, r) {
                            if p + r >= 1 && p + r - 1 <= n {
                                for i in 1..=p {
                                    if !ideal.contains(&compose_at(&x, &y, i)?) {
                                        return Err(Error::OperadAxiom(format!("ideal not closed: x ∘_{i} y leaves it (arities {p}, {r})")));
                                    }
                                }
                                for j in 1..=r {
                                    if !ideal.contains(&compose_at(&y, &x, j)?) {
                                        return Err(Error::OperadAxiom(format!("ideal not closed: y ∘_{j} x leaves it (arities {r}, {p})")));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(ideal)
    }

    pub fn parent(&self) -> &OperadHandle {
        &self.parent
    }

    pub fn selector(&self) -> &Selector {
        &self.selector
    }

    pub fn contains_key(&self, arity: usize, key: &Key) -> bool {
        match &self.selector {
            Selector::Zero => false,
            Selector::All => true,
            Selector::ModuleOutput => {
                let e = self.parent.as_endo().unwrap();
                e.is_module_label(*key.last().unwrap())
            }
            Selector::SubBasis(m) => m.get(&arity).is_some_and(|s| s.contains(&(key[0] as usize))),
        }
    }

    pub fn contains(&self, x: &Cochain) -> bool {
        x.handle() == &self.parent && x.terms().keys().all(|k| self.contains_key(x.arity(), k))
    }

    /// Ideal basis keys of arity `p` and vertical degree `q`.
    pub fn basis_keys(&self, p: usize, q: i64) -> Vec<Key> {
        match self.parent.operad() {
            Operad::Endo(e) => e.basis_keys(p, q, |k| self.contains_key(p, k)),
            Operad::Finite(_) => self
                .parent
                .basis_keys(p, q)
                .into_iter()
                .filter(|k| self.contains_key(p, k))
                .collect(),
        }
    }

    fn basis_elements(&self, p: usize) -> Vec<Cochain> {
        all_basis_elements(&self.parent, p)
            .into_iter()
            .filter(|c| self.contains(c))
            .collect()
    }
}

/// Every basis cochain of arity `p`, over all vertical degrees.
fn all_basis_elements(h: &OperadHandle, p: usize) -> Vec<Cochain> {
    let one = h.field().one();
    let (lo, hi) = match h.operad() {
        Operad::Endo(e) => {
            let s = e.space().support();
            match (s.first(), s.last()) {
                (Some(&mn), Some(&mx)) => (mn - p as i64 * mx, mx - p as i64 * mn),
                _ => return Vec::new(),
            }
        }
        Operad::Finite(f) => match f.arity_space(p) {
            Some(sp) if sp.dim() > 0 => {
                let s = sp.support();
                (*s.first().unwrap(), *s.last().unwrap())
            }
            _ => return Vec::new(),
        },
    };
    let mut out = Vec::new();
    for q in lo..=hi {
        for k in h.basis_keys(p, q) {
            out.push(Cochain::from_raw(h.clone(), p, q, BTreeMap::from([(k, one.clone())])));
        }
    }
    out
}

/// A nonzero brace `x0{args}` with two arguments in the ideal.
#[derive(Clone, Debug)]
pub struct IdealWitness {
    pub x0: Cochain,
    pub args: Vec<Cochain>,
    pub value: Cochain,
}

/// Searches basis cochains of arity at most `max_arity` (capped by the
/// carried arities of a finite operad) for a nonzero brace with two ideal
/// arguments. `None` means the ideal is associative on that range.
pub fn is_associative_ideal(ideal: &OperadIdeal, max_arity: usize) -> Result<Option<IdealWitness>> {
    let h = ideal.parent();
    let cap = h.max_arity().map_or(max_arity, |n| n.min(max_arity));
    let basis: Vec<Cochain> = (0..=cap).flat_map(|p| all_basis_elements(h, p)).collect();
    let in_ideal: Vec<bool> = basis.iter().map(|c| ideal.contains(c)).collect();
    for x0 in basis.iter().filter(|c| c.arity() >= 2) {
        for n in 2..=x0.arity() {
            let mut idx = vec![0usize; n];
            loop {
                let hits = idx.iter().filter(|&&i| in_ideal[i]).count();
                let lands = x0.arity() + idx.iter().map(|&i| basis[i].arity()).sum::<usize>() - n;
                if hits >= 2 && h.max_arity().is_none_or(|m| lands <= m) {
                    let args: Vec<Cochain> = idx.iter().map(|&i| basis[i].clone()).collect();
                    let value = brace(x0, &args)?;
                    if !value.is_zero() {
                        return Ok(Some(IdealWitness {
                            x0: x0.clone(),
                            args,
                            value,
                        }));
                    }
                }
                // odometer
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < basis.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }
    Ok(None)
}
