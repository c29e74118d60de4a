//! Tropical projective space `TP^n` and holomorphic curves into it.
//!
//! Points are `(n+1)`-tuples of tropical scalars modulo adding a common
//! constant; the canonical representative subtracts the coordinate maximum
//! so that the max-norm of the representative is 0. A curve is a reduced
//! representation: `n+1` tropical entire components with no common root.

use crate::error::{Error, Result};
use crate::plfun::{PLFunction, Window};
use crate::rational::Rational;
use crate::semiring::TropValue;

/// A point of `TP^n`, stored as its canonical representative (maximum
/// coordinate 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    coords: Vec<TropValue>,
}

impl ProjectivePoint {
    /// Canonicalizes a raw coordinate tuple by subtracting the maximum.
    /// Errors when every coordinate is `-inf`.
    pub fn normalize(raw: &[TropValue]) -> Result<ProjectivePoint> {
        let max = raw
            .iter()
            .filter_map(TropValue::as_finite)
            .max()
            .ok_or(Error::AllBottom)?
            .clone();
        let coords = raw
            .iter()
            .map(|c| match c {
                TropValue::Bottom => TropValue::Bottom,
                TropValue::Finite(q) => TropValue::Finite(q - &max),
            })
            .collect();
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[TropValue] {
        &self.coords
    }

    /// Ambient dimension `n` of `TP^n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Checks a family of entire functions for a common root. Returns the
/// offending location, or `None` when the family is reduced.
pub fn reduced_check(components: &[PLFunction]) -> Result<Option<Rational>> {
    for (i, f) in components.iter().enumerate() {
        if !f.is_entire() {
            return Err(Error::NotEntire(i));
        }
    }
    let Some(first) = components.first() else {
        return Ok(None);
    };
    'outer: for cp in first.critical_points() {
        for other in &components[1..] {
            if !other
                .critical_points()
                .iter()
                .any(|c| c.location == cp.location)
            {
                continue 'outer;
            }
        }
        return Ok(Some(cp.location));
    }
    Ok(None)
}

/// A tropical holomorphic curve `R -> TP^n` in reduced representation:
/// `n+1` entire components sharing a window, with no common root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropCurve {
    components: Vec<PLFunction>,
}

impl TropCurve {
    /// Builds a curve, intersecting the component windows and verifying
    /// the entire and reduced-representation invariants.
    pub fn new(components: Vec<PLFunction>) -> Result<TropCurve> {
        if components.len() < 2 {
            return Err(Error::Precondition(
                "a curve needs at least two components".into(),
            ));
        }
        let mut window: Option<Window> = None;
        for (i, c) in components.iter().enumerate() {
            if !c.is_entire() {
                return Err(Error::NotEntire(i));
            }
            window = match (window, c.window()) {
                (None, w) => w.cloned(),
                (Some(w), None) => Some(w),
                (Some(a), Some(b)) => {
                    let lo = a.lo().clone().max(b.lo().clone());
                    let hi = a.hi().clone().min(b.hi().clone());
                    Some(Window::new(lo, hi).map_err(|_| Error::EmptyWindow)?)
                }
            };
        }
        let components: Vec<PLFunction> = components
            .into_iter()
            .map(|c| c.with_window(window.clone()))
            .collect();
        if let Some(x) = reduced_check(&components)? {
            return Err(Error::CommonRoot(x));
        }
        Ok(TropCurve { components })
    }

    pub fn components(&self) -> &[PLFunction] {
        &self.components
    }

    /// Ambient dimension `n` of the target `TP^n`.
    pub fn dim(&self) -> usize {
        self.components.len() - 1
    }

    pub fn window(&self) -> Option<&Window> {
        self.components[0].window()
    }

    /// The max-norm `‖f(x)‖ = max_j f_j(x)`.
    pub fn norm_at(&self, x: &Rational) -> Result<Rational> {
        let mut best: Option<Rational> = None;
        for c in &self.components {
            let v = c.evaluate(x)?;
            best = Some(match best {
                None => v,
                Some(b) => b.max(v),
            });
        }
        Ok(best.unwrap())
    }

    /// The projective point `[f_0(x) : ... : f_n(x)]` in canonical form.
    pub fn point_at(&self, x: &Rational) -> Result<ProjectivePoint> {
        let raw: Vec<TropValue> = self
            .components
            .iter()
            .map(|c| c.evaluate(x).map(TropValue::Finite))
            .collect::<Result<_>>()?;
        ProjectivePoint::normalize(&raw)
    }

    /// Canonical `TP^1` curve `[g : h]` of a tropical meromorphic function
    /// `f = h ⊘ g`, built from the entire split.
    pub fn from_meromorphic(f: &PLFunction) -> TropCurve {
        let (h, g) = f.split_entire();
        TropCurve::new(vec![g, h]).expect("split_entire yields a reduced entire pair")
    }
}

/// Curve norm as an operation, mirroring `‖f(x)‖`.
pub fn curve_norm(curve: &TropCurve, x: &Rational) -> Result<Rational> {
    curve.norm_at(x)
}
