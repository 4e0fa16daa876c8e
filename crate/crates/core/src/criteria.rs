//! Finite checks of the vanishing hypotheses "for all n" along an
//! anti-diagonal of a bigraded family.
//!
//! The head `n ≤ min(N, N*)` is checked on cohomology. The tail `n > N*` is
//! certified by degrees alone: a cochain component with no homogeneous maps
//! has zero cohomology. When no such `N*` exists the verdict can at best be
//! inconclusive.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::ainfty::{AkAlgebra, AkBimodule};
use crate::algebra::{Bimodule, GradedAlgebra};
use crate::complexes::{assemble_bimodule_complexes, hochschild_complex};
use crate::error::{Error, Result};
use crate::graded::{DegreeWindow, GradedSpace};
use crate::massey::massey_cohomology_dim_at;

/// A family of bidegrees `(n + arity_offset, −n)`, counted by arity, with the
/// pure part `Hom(A^{⊗·}, A)` and/or the module part (one input and the output in `M`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub arity_offset: usize,
    pub pure: bool,
    pub module: bool,
}

impl Shape {
    /// `HH^{n+2,−n}`.
    pub const HOCHSCHILD: Shape = Shape { arity_offset: 2, pure: true, module: false };
    /// `Ext^{n+1,−n}`, i.e. ideal cochains of arity `n + 2`.
    pub const EXT: Shape = Shape { arity_offset: 2, pure: false, module: true };
    /// `HHE^{n+2,−n}`.
    pub const PAIR: Shape = Shape { arity_offset: 2, pure: true, module: true };
    /// `HH^{n+3,−n}`.
    pub const HOCHSCHILD_EXISTENCE: Shape = Shape { arity_offset: 3, pure: true, module: false };
    /// `HHE^{n+3,−n}`.
    pub const PAIR_EXISTENCE: Shape = Shape { arity_offset: 3, pure: true, module: true };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// Every component with `n > N*` is zero.
    VanishesBeyond(usize),
    Unbounded,
}

impl Tail {
    fn join(self, other: Tail) -> Tail {
        match (self, other) {
            (Tail::VanishesBeyond(a), Tail::VanishesBeyond(b)) => Tail::VanishesBeyond(a.max(b)),
            _ => Tail::Unbounded,
        }
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::VanishesBeyond(n) => write!(f, "vanishes beyond n = {n}"),
            Tail::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Whether `t` is a sum of finitely many (possibly zero) elements of `steps`.
fn reachable(steps: &BTreeSet<i64>, t: i64) -> bool {
    let nonzero: Vec<i64> = steps.iter().copied().filter(|&e| e != 0).collect();
    if nonzero.is_empty() {
        return t == 0;
    }
    let (lo, hi) = (nonzero[0], *nonzero.last().unwrap());
    if lo < 0 && hi > 0 {
        let g = nonzero.iter().fold(0i64, |g, e| g.gcd(e));
        return t % g == 0;
    }
    // one sign: coin problem up to |t|
    let (t, coins): (i64, Vec<i64>) = if lo > 0 { (t, nonzero) } else { (-t, nonzero.iter().map(|e| -e).collect()) };
    if t < 0 {
        return false;
    }
    let mut ok = vec![false; t as usize + 1];
    ok[0] = true;
    for v in 1..=t as usize {
        ok[v] = coins.iter().any(|&c| c as usize <= v && ok[v - c as usize]);
    }
    ok[t as usize]
}

/// Tail for "some target is a sum of exactly `n + offset` steps", `n ≥ 1`.
fn anti_diagonal_tail(steps: &BTreeSet<i64>, targets: &BTreeSet<i64>, offset: usize) -> Tail {
    if steps.is_empty() || targets.is_empty() {
        return Tail::VanishesBeyond(0);
    }
    let (lo, hi) = (*steps.first().unwrap(), *steps.last().unwrap());
    if steps.contains(&0) {
        // sums of L steps grow with L, so one hit means hits for all larger L
        return if targets.iter().any(|&t| reachable(steps, t)) { Tail::Unbounded } else { Tail::VanishesBeyond(0) };
    }
    if lo < 0 && hi > 0 {
        // L-fold sums fill L·lo + gℤ away from the ends of [L·lo, L·hi]
        let g = steps.iter().fold(0i64, |g, e| g.gcd(&(e - lo)));
        let h = g.gcd(&lo);
        return if targets.iter().any(|t| t % h == 0) { Tail::Unbounded } else { Tail::VanishesBeyond(0) };
    }
    let sign = if lo > 0 { 1 } else { -1 };
    let steps: Vec<i64> = steps.iter().map(|e| e * sign).collect();
    let targets: BTreeSet<i64> = targets.iter().map(|t| t * sign).collect();
    let top = *targets.last().unwrap();
    if top < 0 {
        return Tail::VanishesBeyond(0);
    }
    let least = steps.iter().copied().min().unwrap();
    let mut sums = BTreeSet::from([0i64]);
    let mut last = 0;
    for len in 1..=(top / least) as usize {
        sums = sums.iter().flat_map(|s| steps.iter().map(move |e| s + e)).filter(|s| *s <= top).collect();
        if len > offset && sums.iter().any(|s| targets.contains(s)) {
            last = len - offset;
        }
    }
    Tail::VanishesBeyond(last)
}

/// Least `N*` such that the family vanishes for degree reasons beyond it.
pub fn tail_certificate(shape: Shape, algebra: &GradedSpace, module: Option<&GradedSpace>) -> Tail {
    let steps: BTreeSet<i64> = algebra.support().iter().map(|d| d - 1).collect();
    let c = shape.arity_offset as i64;
    let mut tail = Tail::VanishesBeyond(0);
    if shape.pure {
        let targets = algebra.support().iter().map(|o| o - c).collect();
        tail = tail.join(anti_diagonal_tail(&steps, &targets, shape.arity_offset));
    }
    if shape.module {
        if let Some(m) = module {
            let sm = m.support();
            let targets = sm.iter().flat_map(|o| sm.iter().map(move |f| o - f - (c - 1))).collect();
            tail = tail.join(anti_diagonal_tail(&steps, &targets, shape.arity_offset - 1));
        }
    }
    tail
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Theorem {
    KadeishviliAlgebra,
    KadeishviliBimodule,
    KadeishviliSimultaneous,
    MasseyAlgebra,
    MasseyPair,
    MasseyBimodule,
    ExistenceAlgebra,
    ExistencePair,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::KadeishviliAlgebra,
        Theorem::KadeishviliBimodule,
        Theorem::KadeishviliSimultaneous,
        Theorem::MasseyAlgebra,
        Theorem::MasseyPair,
        Theorem::MasseyBimodule,
        Theorem::ExistenceAlgebra,
        Theorem::ExistencePair,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Theorem::KadeishviliAlgebra => "kadeishvili-algebra",
            Theorem::KadeishviliBimodule => "kadeishvili-bimodule",
            Theorem::KadeishviliSimultaneous => "kadeishvili-simultaneous",
            Theorem::MasseyAlgebra => "massey-algebra",
            Theorem::MasseyPair => "massey-pair",
            Theorem::MasseyBimodule => "massey-bimodule",
            Theorem::ExistenceAlgebra => "existence-algebra",
            Theorem::ExistencePair => "existence-pair",
        }
    }

    /// Whether the check reads a Massey class `⟨m_{d+2}⟩` off a structure.
    pub fn needs_class(self) -> bool {
        !matches!(self, Theorem::KadeishviliAlgebra | Theorem::KadeishviliBimodule | Theorem::KadeishviliSimultaneous)
    }

    pub fn needs_module(self) -> bool {
        matches!(
            self,
            Theorem::KadeishviliBimodule
                | Theorem::KadeishviliSimultaneous
                | Theorem::MasseyPair
                | Theorem::MasseyBimodule
                | Theorem::ExistencePair
        )
    }

    /// The family whose anti-diagonal must vanish.
    pub fn shape(self) -> Shape {
        match self {
            Theorem::KadeishviliAlgebra | Theorem::MasseyAlgebra => Shape::HOCHSCHILD,
            Theorem::KadeishviliBimodule | Theorem::MasseyBimodule => Shape::EXT,
            Theorem::KadeishviliSimultaneous | Theorem::MasseyPair => Shape::PAIR,
            Theorem::ExistenceAlgebra => Shape::HOCHSCHILD_EXISTENCE,
            Theorem::ExistencePair => Shape::PAIR_EXISTENCE,
        }
    }

    /// First `n` of the range for length offset `d`.
    fn start(self, d: usize) -> usize {
        if self.needs_class() {
            d + 1
        } else {
            1
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Theorem, String> {
        Theorem::ALL.into_iter().find(|t| t.tag() == s).ok_or_else(|| {
            let tags: Vec<_> = Theorem::ALL.iter().map(|t| t.tag()).collect();
            format!("unknown theorem {s:?}; expected one of {}", tags.join(", "))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated { n: usize, dim: usize },
    /// The checked range ran out before the tail certificate took over.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeVerdict {
    pub theorem: Theorem,
    /// `N`: the largest `n` the caller allowed.
    pub range: usize,
    pub tail: Tail,
    /// `(n, dim)` for every checked `n`, in order.
    pub dims: Vec<(usize, usize)>,
    pub verdict: Verdict,
}

fn decide(theorem: Theorem, range: usize, start: usize, tail: Tail, mut dim_at: impl FnMut(usize) -> Result<usize>) -> Result<RangeVerdict> {
    let end = match tail {
        Tail::VanishesBeyond(t) => t.min(range),
        Tail::Unbounded => range,
    };
    let mut dims = Vec::new();
    let mut verdict = None;
    for n in start..=end {
        let dim = dim_at(n)?;
        dims.push((n, dim));
        if dim > 0 {
            verdict = Some(Verdict::Violated { n, dim });
            break;
        }
    }
    let verdict = verdict.unwrap_or(match tail {
        Tail::VanishesBeyond(t) if range > 0 && t <= range => Verdict::Satisfied,
        _ => Verdict::Inconclusive,
    });
    Ok(RangeVerdict { theorem, range, tail, dims, verdict })
}

fn row_window(p: i64, q: i64) -> DegreeWindow {
    DegreeWindow::new(p - 1, p + 1, q, q).expect("valid window")
}

/// `HH^{n+2,−n}(A) = 0` for `n ≥ 1`.
pub fn check_kadeishvili_algebra(algebra: &GradedAlgebra, range: usize) -> Result<RangeVerdict> {
    let th = Theorem::KadeishviliAlgebra;
    let tail = tail_certificate(th.shape(), algebra.space(), None);
    decide(th, range, 1, tail, |n| {
        let (p, q) = (n as i64 + 2, -(n as i64));
        hochschild_complex(algebra, row_window(p, q))?.cohomology_dim(p, q)
    })
}

/// `Ext^{n+1,−n}(M, M) = 0` for `n ≥ 1`.
pub fn check_kadeishvili_bimodule(algebra: &GradedAlgebra, module: &Bimodule, range: usize) -> Result<RangeVerdict> {
    let th = Theorem::KadeishviliBimodule;
    let tail = tail_certificate(th.shape(), algebra.space(), Some(module.space()));
    decide(th, range, 1, tail, |n| {
        let (p, q) = (n as i64 + 1, -(n as i64));
        assemble_bimodule_complexes(algebra, module, row_window(p, q))?.bc.cohomology_dim(p, q)
    })
}

/// `HHE^{n+2,−n}(A, M) = 0` for `n ≥ 1`.
pub fn check_kadeishvili_simultaneous(algebra: &GradedAlgebra, module: &Bimodule, range: usize) -> Result<RangeVerdict> {
    let th = Theorem::KadeishviliSimultaneous;
    let tail = tail_certificate(th.shape(), algebra.space(), Some(module.space()));
    decide(th, range, 1, tail, |n| {
        let (p, q) = (n as i64 + 2, -(n as i64));
        assemble_bimodule_complexes(algebra, module, row_window(p, q))?.hce.cohomology_dim(p, q)
    })
}


fn class_of_algebra(s: &AkAlgebra, d: usize) -> Result<crate::operad::Cochain> {
    if d == 0 {
        return Err(Error::Unsupported("the Massey class needs length offset d ≥ 1".into()));
    }
    if s.k() < d + 2 {
        return Err(Error::KTooSmall { needed: d + 2, k: s.k() });
    }
    Ok(s.op(d + 2))
}

fn class_of_pair(s: &AkBimodule, d: usize) -> Result<crate::operad::Cochain> {
    if d == 0 {
        return Err(Error::Unsupported("the Massey class needs length offset d ≥ 1".into()));
    }
    if s.k() < d + 2 {
        return Err(Error::KTooSmall { needed: d + 2, k: s.k() });
    }
    Ok(s.combined_op(d + 2))
}

/// Massey-type checks with class `⟨m_{d+2}⟩` of `s`, for `n > d`.
fn check_massey_algebra_shape(th: Theorem, s: &AkAlgebra, d: usize, range: usize) -> Result<RangeVerdict> {
    let class = class_of_algebra(s, d)?;
    let tail = tail_certificate(th.shape(), s.algebra().space(), None);
    let c = th.shape().arity_offset as i64;
    decide(th, range, th.start(d), tail, |n| {
        let (p, q) = (n as i64 + c, -(n as i64));
        massey_cohomology_dim_at(&s.hochschild_window(row_window(p, q))?, &class, p, q)
    })
}

fn check_massey_pair_shape(th: Theorem, s: &AkBimodule, d: usize, range: usize) -> Result<RangeVerdict> {
    let class = class_of_pair(s, d)?;
    let tail = tail_certificate(th.shape(), s.parent().algebra().space(), Some(s.module().space()));
    let c = th.shape().arity_offset as i64;
    let ext = th == Theorem::MasseyBimodule;
    decide(th, range, th.start(d), tail, |n| {
        let (p, q) = (n as i64 + c - ext as i64, -(n as i64));
        let cx = s.windows(row_window(p, q))?;
        massey_cohomology_dim_at(if ext { &cx.bc } else { &cx.hce }, &class, p, q)
    })
}

/// `HMH^{n+2,−n}(A, ⟨m_{d+2}⟩) = 0` for `n > d`.
pub fn check_theorem_b(s: &AkAlgebra, d: usize, range: usize) -> Result<RangeVerdict> {
    check_massey_algebra_shape(Theorem::MasseyAlgebra, s, d, range)
}

/// The same for the square-zero extension, with the combined class in `HHE`.
pub fn check_theorem_b_pair(s: &AkBimodule, d: usize, range: usize) -> Result<RangeVerdict> {
    check_massey_pair_shape(Theorem::MasseyPair, s, d, range)
}

/// Massey bimodule cohomology `BimHMH^{n+1,−n} = 0` for `n > d`.
pub fn check_massey_bimodule(s: &AkBimodule, d: usize, range: usize) -> Result<RangeVerdict> {
    check_massey_pair_shape(Theorem::MasseyBimodule, s, d, range)
}

/// `HMH^{n+3,−n}(A, ⟨m_{d+2}⟩) = 0` for `n > d`.
pub fn check_existence(s: &AkAlgebra, d: usize, range: usize) -> Result<RangeVerdict> {
    check_massey_algebra_shape(Theorem::ExistenceAlgebra, s, d, range)
}

pub fn check_existence_pair(s: &AkBimodule, d: usize, range: usize) -> Result<RangeVerdict> {
    check_massey_pair_shape(Theorem::ExistencePair, s, d, range)
}
