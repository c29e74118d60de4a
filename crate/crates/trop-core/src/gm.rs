//! Gondran-Minoux (in)dependence, residuation, shortest representation
//! length, and degree of degeneracy.
//!
//! Membership of a function in the tropical span of a support set is
//! decided exactly: the principal (coefficientwise-maximal) candidate
//! `b_k = inf_x (F(x) - f_k(x))` either reproduces `F` or nothing does.
//! Gondran-Minoux dependence is a semi-decision: a returned certificate
//! is an exact proof (re-verified with `pl_equal`), while "no certificate
//! found" after the exhaustive partition search with depth-limited
//! alternating residuation is evidence of independence, not proof.

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hypersurface::monomial_basis;
use crate::plfun::PLFunction;
use crate::projective::TropCurve;
use crate::rational::{rat_int, Rational};
use crate::semiring::TropValue;

/// Search caps for the subset/partition enumerations.
#[derive(Debug, Clone)]
pub struct GmConfig {
    /// Maximum basis size for exhaustive subset enumeration.
    pub basis_cap: usize,
    /// Rounds of alternating residuation per partition.
    pub depth: usize,
}

impl Default for GmConfig {
    fn default() -> Self {
        GmConfig {
            basis_cap: 8,
            depth: 4,
        }
    }
}

/// Label of a spanning family: raw components or a lifted monomial family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisLabel {
    Linear,
    Algebraic {
        n: usize,
        d: u32,
        indices: Vec<Vec<u32>>,
    },
}

/// A spanning family of tropical entire functions sharing one window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    functions: Vec<PLFunction>,
    label: BasisLabel,
}

impl Basis {
    pub fn linear(functions: Vec<PLFunction>) -> Result<Basis> {
        Basis::with_label(functions, BasisLabel::Linear)
    }

    fn with_label(functions: Vec<PLFunction>, label: BasisLabel) -> Result<Basis> {
        if functions.is_empty() {
            return Err(Error::Precondition("basis must be nonempty".into()));
        }
        let w = functions[0].window().cloned();
        if functions.iter().any(|f| f.window() != w.as_ref()) {
            return Err(Error::WindowMismatch);
        }
        Ok(Basis { functions, label })
    }

    pub fn functions(&self) -> &[PLFunction] {
        &self.functions
    }

    pub fn label(&self) -> &BasisLabel {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

/// Coefficients of a tropical linear combination over a basis; the support
/// is the set of indices with real coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    coefficients: Vec<TropValue>,
}

impl Representation {
    pub fn new(coefficients: Vec<TropValue>) -> Representation {
        Representation { coefficients }
    }

    pub fn coefficients(&self) -> &[TropValue] {
        &self.coefficients
    }

    pub fn support(&self) -> Vec<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter_map(|(i, c)| (!c.is_bottom()).then_some(i))
            .collect()
    }
}

/// A verified witness of Gondran-Minoux dependence: a partition `I, J`
/// and coefficients with `⊕_{i∈I} a_i ⊙ f_i = ⊕_{j∈J} a_j ⊙ f_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceCertificate {
    pub set_i: Vec<usize>,
    pub set_j: Vec<usize>,
    pub coefficients: Vec<TropValue>,
    /// Set only after the two max-combinations compare pl_equal.
    pub verified: bool,
}

/// `F = ⊕_{k ∈ support} a_k ⊙ f_k` as a canonical function.
pub fn combine(basis: &Basis, rep: &Representation) -> Result<PLFunction> {
    if rep.coefficients.len() != basis.len() {
        return Err(Error::DimensionMismatch(rep.coefficients.len(), basis.len()));
    }
    combine_subset(basis.functions(), &rep.support(), &rep.coefficients)
}

fn combine_subset(
    funcs: &[PLFunction],
    support: &[usize],
    coefficients: &[TropValue],
) -> Result<PLFunction> {
    let mut acc: Option<PLFunction> = None;
    for &k in support {
        let Some(a) = coefficients[k].as_finite() else {
            continue;
        };
        let shifted = funcs[k].pl_add(&PLFunction::constant(a.clone()))?;
        acc = Some(match acc {
            None => shifted,
            Some(prev) => prev.pl_max(&shifted)?,
        });
    }
    acc.ok_or(Error::EmptySupport)
}

/// Exact infimum of a piecewise-linear function over its domain (the
/// window when present, all of R otherwise); `None` encodes -∞.
fn exact_inf(f: &PLFunction) -> Option<Rational> {
    match f.window() {
        Some(w) => {
            let mut best = f.eval_unchecked(w.lo()).min(f.eval_unchecked(w.hi()));
            for b in f.breakpoints() {
                best = best.min(f.eval_unchecked(b));
            }
            Some(best)
        }
        None => {
            if f.left_tail_slope() > &Rational::zero()
                || f.right_tail_slope() < &Rational::zero()
            {
                return None;
            }
            match f.breakpoints().first() {
                None => Some(f.eval_unchecked(&Rational::zero())),
                Some(first) => {
                    let mut best = f.eval_unchecked(first);
                    for b in &f.breakpoints()[1..] {
                        best = best.min(f.eval_unchecked(b));
                    }
                    Some(best)
                }
            }
        }
    }
}

/// Residuation: per support index the coefficientwise-maximal candidate
/// `b_k = inf_x (F(x) - f_k(x))`; indices forced to -∞ are dropped.
pub fn principal_coefficients(
    target: &PLFunction,
    basis: &Basis,
    support: &[usize],
) -> Result<Representation> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut coefficients = vec![TropValue::Bottom; basis.len()];
    for &k in support {
        if k >= basis.len() {
            return Err(Error::Precondition(format!(
                "support index {k} out of range for basis of size {}",
                basis.len()
            )));
        }
        let diff = target.pl_add(&basis.functions()[k].pl_neg())?;
        if let Some(b) = exact_inf(&diff) {
            coefficients[k] = TropValue::Finite(b);
        }
    }
    Ok(Representation { coefficients })
}

/// Exact check that a representation reproduces the target.
pub fn verify_representation(
    target: &PLFunction,
    basis: &Basis,
    rep: &Representation,
) -> Result<bool> {
    match combine(basis, rep) {
        Ok(combined) => combined.pl_equal(target),
        Err(Error::EmptySupport) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Membership of `target` in the span of `support`: residuation is sound
/// and complete for one-sided systems, so the principal candidate either
/// verifies or no representation on that support exists.
fn representable_on(target: &PLFunction, basis: &Basis, support: &[usize]) -> Result<bool> {
    let rep = principal_coefficients(target, basis, support)?;
    verify_representation(target, basis, &rep)
}

/// Shortest representation length `ℓ(F)`: the smallest support size whose
/// principal representation reproduces `F`. Errors with
/// [`Error::NotRepresentable`] when even the full basis fails.
pub fn shortest_length(target: &PLFunction, basis: &Basis, cfg: &GmConfig) -> Result<usize> {
    if basis.len() > cfg.basis_cap {
        return Err(Error::CapExceeded {
            what: "basis size",
            got: basis.len(),
            cap: cfg.basis_cap,
        });
    }
    let all: Vec<usize> = (0..basis.len()).collect();
    if !representable_on(target, basis, &all)? {
        return Err(Error::NotRepresentable);
    }
    for size in 1..basis.len() {
        for support in all.iter().copied().combinations(size) {
            if representable_on(target, basis, &support)? {
                return Ok(size);
            }
        }
    }
    Ok(basis.len())
}

/// Degree of degeneracy `ddg(Q)`: how many members of `Q` admit a
/// representation shorter than the full basis.
pub fn ddg(members: &[PLFunction], basis: &Basis, cfg: &GmConfig) -> Result<usize> {
    let mut count = 0;
    for f in members {
        if shortest_length(f, basis, cfg)? < basis.len() {
            count += 1;
        }
    }
    Ok(count)
}

/// Result of the dependence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Dependent(DependenceCertificate),
    /// No certificate after exhaustive partition search with the given
    /// refinement depth; evidence of independence, not proof.
    PresumedIndependent { depth: usize },
}

impl Verdict {
    pub fn is_dependent(&self) -> bool {
        matches!(self, Verdict::Dependent(_))
    }
}

/// Alternating two-sided residuation on one partition. Starts from unit
/// coefficients on the left side, residuates back and forth, and accepts
/// only on exact equality of the two combinations.
fn alternate(
    funcs: &[PLFunction],
    left: &[usize],
    right: &[usize],
    depth: usize,
) -> Result<Option<(Vec<TropValue>, Vec<TropValue>)>> {
    let n = funcs.len();
    let residuate = |target: &PLFunction, side: &[usize]| -> Result<Vec<TropValue>> {
        let mut coeffs = vec![TropValue::Bottom; n];
        for &k in side {
            let diff = target.pl_add(&funcs[k].pl_neg())?;
            if let Some(b) = exact_inf(&diff) {
                coeffs[k] = TropValue::Finite(b);
            }
        }
        Ok(coeffs)
    };
    let mut a: Vec<TropValue> = vec![TropValue::Bottom; n];
    for &i in left {
        a[i] = TropValue::one();
    }
    for _ in 0..depth {
        let fl = match combine_subset(funcs, left, &a) {
            Ok(f) => f,
            Err(Error::EmptySupport) => return Ok(None),
            Err(e) => return Err(e),
        };
        let b = residuate(&fl, right)?;
        let fr = match combine_subset(funcs, right, &b) {
            Ok(f) => f,
            Err(Error::EmptySupport) => return Ok(None),
            Err(e) => return Err(e),
        };
        if fr.pl_equal(&fl)? {
            return Ok(Some((a, b)));
        }
        let a2 = residuate(&fr, left)?;
        if a2 == a {
            return Ok(None);
        }
        a = a2;
    }
    Ok(None)
}

/// Searches for a Gondran-Minoux dependence certificate among all ordered
/// pairs of disjoint nonempty subsets. A certificate is proof; absence is
/// reported as presumed independence.
pub fn gm_dependent(funcs: &[PLFunction], cfg: &GmConfig) -> Result<Verdict> {
    let n = funcs.len();
    if n < 2 {
        return Err(Error::Precondition(
            "dependence needs at least two functions".into(),
        ));
    }
    if n > cfg.basis_cap {
        return Err(Error::CapExceeded {
            what: "function count",
            got: n,
            cap: cfg.basis_cap,
        });
    }
    let full: u32 = (1 << n) - 1;
    for left_mask in 1..=full {
        let rest = full & !left_mask;
        let mut right_mask = rest;
        while right_mask > 0 {
            // dedup symmetric pairs: the left side owns the lowest index
            if left_mask.trailing_zeros() < right_mask.trailing_zeros() {
                let left: Vec<usize> =
                    (0..n).filter(|i| left_mask & (1 << i) != 0).collect();
                let right: Vec<usize> =
                    (0..n).filter(|i| right_mask & (1 << i) != 0).collect();
                if let Some((a, b)) = alternate(funcs, &left, &right, cfg.depth)? {
                    let mut coefficients = vec![TropValue::Bottom; n];
                    for &i in &left {
                        coefficients[i] = a[i].clone();
                    }
                    for &j in &right {
                        coefficients[j] = b[j].clone();
                    }
                    // independent re-verification of the certificate
                    let lhs = combine_subset(funcs, &left, &coefficients)?;
                    let rhs = combine_subset(funcs, &right, &coefficients)?;
                    let verified = lhs.pl_equal(&rhs)?;
                    debug_assert!(verified);
                    // unassigned indices join I with bottom coefficients
                    let mut set_i = left.clone();
                    for k in 0..n {
                        if left_mask & (1 << k) == 0 && right_mask & (1 << k) == 0 {
                            set_i.push(k);
                        }
                    }
                    set_i.sort();
                    return Ok(Verdict::Dependent(DependenceCertificate {
                        set_i,
                        set_j: right,
                        coefficients,
                        verified,
                    }));
                }
            }
            right_mask = (right_mask - 1) & rest;
        }
    }
    Ok(Verdict::PresumedIndependent { depth: cfg.depth })
}

/// The lifted monomial family `f^I = Σ_j i_j f_j` for `I ∈ J_d`, in the
/// order of [`monomial_basis`].
pub fn algebraic_lift(curve: &TropCurve, d: u32) -> Result<Basis> {
    if d == 0 {
        return Err(Error::Precondition("lift degree must be positive".into()));
    }
    let n = curve.dim();
    let indices = monomial_basis(n, d);
    let mut functions = Vec::with_capacity(indices.len());
    for index in &indices {
        let mut lifted = PLFunction::constant(Rational::zero());
        for (&e, comp) in index.iter().zip(curve.components()) {
            if e == 0 {
                continue;
            }
            lifted = lifted.pl_add(&comp.pl_scale(&rat_int(e as i64)))?;
        }
        functions.push(lifted.with_window(curve.window().cloned()));
    }
    Basis::with_label(
        functions,
        BasisLabel::Algebraic {
            n,
            d,
            indices,
        },
    )
}

/// Curve nondegeneracy at degree `d`: a dependence certificate among the
/// lifted monomials proves degeneracy; otherwise presumed nondegenerate.
pub fn nondegenerate(curve: &TropCurve, d: u32, cfg: &GmConfig) -> Result<Verdict> {
    let lift = algebraic_lift(curve, d)?;
    gm_dependent(lift.functions(), cfg)
}
