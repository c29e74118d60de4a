//! Homogeneous tropical polynomials, corner loci, and the first main
//! theorem for hypersurfaces.
//!
//! A polynomial is a finite map from exponent multi-indices (summing to
//! the degree) to real coefficients; `-inf` coefficients are simply absent
//! terms. Exponents are stored as rationals so that tropical powers
//! `P^{⊙ d/d_j}` stay representable even when the scaling is fractional;
//! the corner-locus operations insist on integer exponents.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nevanlinna::cartan_t;
use crate::plfun::PLFunction;
use crate::projective::{ProjectivePoint, TropCurve};
use crate::rational::{rat_int, Rational};
use crate::semiring::TropValue;

/// Homogeneous tropical polynomial in `nvars = n+1` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropPolynomial {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<Rational>, Rational>,
}

impl TropPolynomial {
    /// Builds from integer multi-indices and tropical coefficients.
    /// Bottom coefficients are dropped; duplicate indices merge by ⊕.
    pub fn new(nvars: usize, degree: u32, terms: &[(Vec<u32>, TropValue)]) -> Result<Self> {
        if nvars < 2 {
            return Err(Error::Precondition(
                "a homogeneous polynomial needs at least two variables".into(),
            ));
        }
        if degree == 0 {
            return Err(Error::Precondition("degree must be positive".into()));
        }
        let mut map: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        for (index, coeff) in terms {
            if index.len() != nvars {
                return Err(Error::DimensionMismatch(index.len(), nvars));
            }
            let total: u32 = index.iter().sum();
            if total != degree {
                return Err(Error::Precondition(format!(
                    "multi-index {index:?} sums to {total}, expected degree {degree}"
                )));
            }
            let Some(c) = coeff.as_finite() else {
                continue;
            };
            let key: Vec<Rational> = index.iter().map(|&i| rat_int(i as i64)).collect();
            map.entry(key)
                .and_modify(|existing| {
                    if c > existing {
                        *existing = c.clone();
                    }
                })
                .or_insert_with(|| c.clone());
        }
        if map.is_empty() {
            return Err(Error::Precondition(
                "polynomial needs at least one coefficient above -inf".into(),
            ));
        }
        Ok(TropPolynomial {
            nvars,
            degree,
            terms: map,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn degree_rational(&self) -> Rational {
        rat_int(self.degree as i64)
    }

    /// Exponent/coefficient pairs in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Rational>, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True when every exponent is a nonnegative integer (the corner-locus
    /// operations require this).
    pub fn has_integer_exponents(&self) -> bool {
        self.terms
            .keys()
            .all(|idx| idx.iter().all(|e| e.is_integer()))
    }

    /// The coefficient norm `‖a‖`: maximum over the real coefficients.
    pub fn coeff_norm(&self) -> Rational {
        self.terms.values().max().cloned().expect("nonempty terms")
    }

    /// Evaluates `P(x) = max_I (c_I + Σ_j i_j x_j)`. A bottom coordinate
    /// with positive exponent sends the term to bottom; zero exponents
    /// contribute the factor 1_o regardless of the coordinate.
    pub fn eval(&self, coords: &[TropValue]) -> Result<TropValue> {
        if coords.len() != self.nvars {
            return Err(Error::DimensionMismatch(coords.len(), self.nvars));
        }
        let mut best = TropValue::Bottom;
        for (index, coeff) in &self.terms {
            let mut sum = coeff.clone();
            let mut alive = true;
            for (e, x) in index.iter().zip(coords) {
                if e.is_zero() {
                    continue;
                }
                match x.as_finite() {
                    None => {
                        alive = false;
                        break;
                    }
                    Some(q) => sum += e * q,
                }
            }
            if alive {
                best = best.oplus(&TropValue::Finite(sum));
            }
        }
        Ok(best)
    }

    /// Tropical power `P^{⊙ d_target/d}`: coefficients and exponents scale
    /// by `d_target / degree`. When the factor is not an integer the result
    /// keeps rational exponent vectors (and the corner-locus operations
    /// will reject it).
    pub fn poly_power(&self, d_target: u32) -> TropPolynomial {
        if d_target == self.degree {
            return self.clone();
        }
        let factor = rat_int(d_target as i64) / self.degree_rational();
        let terms = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let scaled: Vec<Rational> = idx.iter().map(|e| e * &factor).collect();
                (scaled, c * &factor)
            })
            .collect();
        TropPolynomial {
            nvars: self.nvars,
            degree: d_target,
            terms,
        }
    }

    /// One entire piecewise-linear function per term of `P ∘ f`:
    /// `x -> c_I + Σ_j i_j f_j(x)`.
    pub fn term_functions(&self, f: &TropCurve) -> Result<Vec<PLFunction>> {
        if f.components().len() != self.nvars {
            return Err(Error::DimensionMismatch(f.components().len(), self.nvars));
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for (index, coeff) in &self.terms {
            let mut term = PLFunction::constant(coeff.clone());
            for (e, comp) in index.iter().zip(f.components()) {
                if e.is_zero() {
                    continue;
                }
                term = term.pl_add(&comp.pl_scale(e))?;
            }
            out.push(term.with_window(f.window().cloned()));
        }
        Ok(out)
    }

    /// Composition `P ∘ f`: the tropical polynomial applied to the curve,
    /// an entire function equal to `eval` at every point.
    pub fn compose(&self, f: &TropCurve) -> Result<PLFunction> {
        let terms = self.term_functions(f)?;
        let mut acc: Option<PLFunction> = None;
        for t in terms {
            acc = Some(match acc {
                None => t,
                Some(a) => a.pl_max(&t)?,
            });
        }
        Ok(acc.expect("polynomial has at least one term"))
    }
}

/// All multi-indices `(i_0, ..., i_n)` of nonnegative integers summing to
/// `d`, in lexicographic order. Length is `C(n+d, d) = M + 1`.
pub fn monomial_basis(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn recurse(vars_left: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars_left == 1 {
            let mut idx = prefix.clone();
            idx.push(remaining);
            out.push(idx);
            return;
        }
        for i in 0..=remaining {
            prefix.push(i);
            recurse(vars_left - 1, remaining - i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    recurse(n + 1, d, &mut Vec::new(), &mut out);
    out
}

/// Tropical hypersurface: the corner locus of a homogeneous polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypersurface {
    polynomial: TropPolynomial,
}

impl Hypersurface {
    pub fn new(polynomial: TropPolynomial) -> Hypersurface {
        Hypersurface { polynomial }
    }

    pub fn polynomial(&self) -> &TropPolynomial {
        &self.polynomial
    }

    /// Corner-locus membership: true iff at least two monomials attain the
    /// maximum at `p`. Rejects polynomials with fractional exponents.
    pub fn membership(&self, p: &ProjectivePoint) -> Result<bool> {
        if !self.polynomial.has_integer_exponents() {
            return Err(Error::Precondition(
                "corner-locus membership requires integer exponents".into(),
            ));
        }
        if p.coords().len() != self.polynomial.nvars {
            return Err(Error::DimensionMismatch(
                p.coords().len(),
                self.polynomial.nvars,
            ));
        }
        let mut best: Option<Rational> = None;
        let mut count = 0usize;
        for (index, coeff) in &self.polynomial.terms {
            let mut sum = coeff.clone();
            let mut alive = true;
            for (e, x) in index.iter().zip(p.coords()) {
                if e.is_zero() {
                    continue;
                }
                match x.as_finite() {
                    None => {
                        alive = false;
                        break;
                    }
                    Some(q) => sum += e * q,
                }
            }
            if !alive {
                continue;
            }
            match &best {
                Some(b) if &sum > b => {
                    best = Some(sum);
                    count = 1;
                }
                Some(b) if &sum == b => count += 1,
                Some(_) => {}
                None => {
                    best = Some(sum);
                    count = 1;
                }
            }
        }
        Ok(best.is_some() && count >= 2)
    }

    /// Tropical Weil function
    /// `λ_{V_P}(f(x)) = d ‖f(x)‖ + d ‖a‖ - P(f)(x)`; always nonnegative.
    pub fn weil(&self, f: &TropCurve, x: &Rational) -> Result<Rational> {
        let d = self.polynomial.degree_rational();
        let norm = f.norm_at(x)?;
        let composed = self.polynomial.compose(f)?;
        Ok(&d * norm + &d * self.polynomial.coeff_norm() - composed.evaluate(x)?)
    }

    /// Proximity to the hypersurface: `m_f(r, V_P) = (λ(r) + λ(-r)) / 2`.
    pub fn proximity(&self, f: &TropCurve, r: &Rational) -> Result<Rational> {
        let plus = self.weil(f, r)?;
        let minus = self.weil(f, &-r.clone())?;
        Ok((plus + minus) / rat_int(2))
    }

    /// A point where exactly one monomial of `P ∘ f` strictly attains the
    /// maximum, certifying `f(R) ⊄ V_P`; `None` when the curve is contained
    /// in the hypersurface. Exact: the candidate set contains every
    /// abscissa where the maximizer set can change.
    pub fn containment_witness(&self, f: &TropCurve) -> Result<Option<Rational>> {
        let terms = self.polynomial.term_functions(f)?;
        if terms.len() == 1 {
            // a single monomial never ties with a second one
            let x = match f.window() {
                Some(w) => (w.lo() + w.hi()) / rat_int(2),
                None => Rational::zero(),
            };
            return Ok(Some(x));
        }
        let mut candidates: Vec<Rational> = Vec::new();
        for t in &terms {
            candidates.extend(t.breakpoints().iter().cloned());
        }
        for i in 0..terms.len() {
            for j in (i + 1)..terms.len() {
                let diff = terms[i].pl_add(&terms[j].pl_neg())?;
                candidates.extend(diff.breakpoints().iter().cloned());
                // zeros of the affine cells with nonzero slope
                let (bounds, affines) = diff.cells();
                for (k, a) in affines.iter().enumerate() {
                    if a.slope.is_zero() {
                        continue;
                    }
                    let zero = -&a.intercept / &a.slope;
                    let lo_ok = k == 0 || bounds[k - 1] <= zero;
                    let hi_ok = k == bounds.len() || zero <= bounds[k];
                    if lo_ok && hi_ok {
                        candidates.push(zero);
                    }
                }
            }
        }
        if let Some(w) = f.window() {
            candidates.retain(|x| w.contains(x));
            candidates.push(w.lo().clone());
            candidates.push(w.hi().clone());
        }
        candidates.sort();
        candidates.dedup();
        // sample midpoints of consecutive candidates plus outer points
        let mut samples: Vec<Rational> = Vec::new();
        if candidates.is_empty() {
            samples.push(Rational::zero());
        } else {
            if f.window().is_none() {
                samples.push(candidates.first().unwrap() - Rational::one());
                samples.push(candidates.last().unwrap() + Rational::one());
            }
            samples.extend(candidates.iter().cloned());
            for pair in candidates.windows(2) {
                samples.push((&pair[0] + &pair[1]) / rat_int(2));
            }
        }
        for x in samples {
            let values: Vec<Rational> = terms
                .iter()
                .map(|t| t.evaluate(&x))
                .collect::<Result<_>>()?;
            let best = values.iter().max().unwrap();
            if values.iter().filter(|v| *v == best).count() == 1 {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// First-main-theorem residual
    /// `m_f(r, V_P) + N(r, 1_o ⊘ P(f)) - d T_f(r)`, exactly equal to the
    /// constant `d ‖f(0)‖ + d ‖a‖ - P(f)(0)` for every radius.
    pub fn fmt_residual(&self, f: &TropCurve, r: &Rational) -> Result<Rational> {
        if self.containment_witness(f)?.is_none() {
            return Err(Error::Degenerate(
                "curve is contained in the hypersurface".into(),
            ));
        }
        let m = self.proximity(f, r)?;
        let composed = self.polynomial.compose(f)?;
        let n = crate::nevanlinna::counting_big_n(&composed.pl_neg(), r)?;
        let d = self.polynomial.degree_rational();
        Ok(m + n - d * cartan_t(f, r)?)
    }

    /// The constant the FMT residual equals: `d ‖f(0)‖ + d ‖a‖ - P(f)(0)`.
    pub fn fmt_expected_constant(&self, f: &TropCurve) -> Result<Rational> {
        let d = self.polynomial.degree_rational();
        let composed = self.polynomial.compose(f)?;
        Ok(
            &d * f.norm_at(&Rational::zero())? + &d * self.polynomial.coeff_norm()
                - composed.evaluate(&Rational::zero())?,
        )
    }
}
