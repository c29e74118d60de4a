//! Seeded example families: the exponential-like windowed functions
//! `e_α`, `e_β`, and reproducible random tropical rational functions,
//! entire functions, curves, and homogeneous polynomials.
//!
//! Random draws come from bounded integer lattices scaled by a
//! denominator, so coefficient sizes stay controlled and identical seeds
//! reproduce identical objects.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypersurface::{monomial_basis, TropPolynomial};
use crate::plfun::{PLFunction, Window};
use crate::projective::{reduced_check, TropCurve};
use crate::rational::{rat, rat_int, Rational};
use crate::semiring::TropValue;

/// Deterministic generator for a given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn int_pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        let e = exp as u32;
        Rational::new(base.numer().pow(e), base.denom().pow(e))
    } else {
        let e = (-exp) as u32;
        Rational::new(base.denom().pow(e), base.numer().pow(e))
    }
}

fn integer_cells(lo: &Rational, hi: &Rational) -> Result<(i64, i64)> {
    if lo >= hi {
        return Err(Error::Precondition(format!(
            "window [{lo}, {hi}] must be nonempty"
        )));
    }
    let first = lo.floor().to_integer();
    let last = hi.ceil().to_integer() - BigInt::one();
    let to_i64 = |b: BigInt| -> Result<i64> {
        i64::try_from(b).map_err(|_| Error::Precondition("window too large".into()))
    };
    Ok((to_i64(first)?, to_i64(last)?))
}

/// Builds a windowed function from per-integer-cell affine data: on
/// `[m, m+1)` the function is `slope(m) * x + intercept(m)`.
fn from_integer_cells(
    lo: &Rational,
    hi: &Rational,
    slope: impl Fn(i64) -> Rational,
    value_at: impl Fn(i64) -> Rational,
) -> Result<PLFunction> {
    let (first, last) = integer_cells(lo, hi)?;
    let window = Window::new(lo.clone(), hi.clone())?;
    let points: Vec<(Rational, Rational)> = (first..=last + 1)
        .map(|m| (rat_int(m), value_at(m)))
        .collect();
    // extend with the boundary cell slopes; the canonical constructor
    // drops the points that fall outside the window
    let left_slope = slope(first);
    let right_slope = slope(last);
    let f = PLFunction::from_breakpoints(left_slope, &points, right_slope, None)?;
    Ok(f.with_window(Some(window)))
}

/// The tropical exponential `e_α(x) = α^{[x]} (x - [x] + 1/(α-1))` on a
/// finite window; requires `|α| > 1`. Slope on `[m, m+1)` is `α^m`.
pub fn e_alpha(alpha: &Rational, lo: &Rational, hi: &Rational) -> Result<PLFunction> {
    if alpha.abs() <= Rational::one() {
        return Err(Error::Precondition(format!(
            "e_alpha requires |alpha| > 1, got {alpha}"
        )));
    }
    let shift = (alpha - Rational::one()).recip();
    from_integer_cells(
        lo,
        hi,
        |m| int_pow(alpha, m),
        |m| int_pow(alpha, m) * &shift,
    )
}

/// The decaying counterpart `e_β(x) = β^{[x]} (1/(1-β) - x + [x])` on a
/// finite window; requires `0 < |β| < 1`. Slope on `[m, m+1)` is `-β^m`.
pub fn e_beta(beta: &Rational, lo: &Rational, hi: &Rational) -> Result<PLFunction> {
    if beta.is_zero() || beta.abs() >= Rational::one() {
        return Err(Error::Precondition(format!(
            "e_beta requires 0 < |beta| < 1, got {beta}"
        )));
    }
    let shift = (Rational::one() - beta).recip();
    from_integer_cells(
        lo,
        hi,
        |m| -int_pow(beta, m),
        |m| int_pow(beta, m) * &shift,
    )
}

/// Size and lattice controls for the random families.
#[derive(Debug, Clone)]
pub struct RandomParams {
    /// Inclusive upper bound on the breakpoint count.
    pub max_breakpoints: usize,
    /// Breakpoints land in `[-span, span]`.
    pub span: i64,
    /// Lattice denominator for breakpoints, slopes, and coefficients.
    pub denominator: i64,
    /// Slope jumps and coefficients land in `[-magnitude, magnitude]`.
    pub magnitude: i64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_breakpoints: 6,
            span: 10,
            denominator: 2,
            magnitude: 4,
        }
    }
}

fn lattice(rng: &mut ChaCha8Rng, bound: i64, denominator: i64) -> Rational {
    rat(rng.gen_range(-bound * denominator..=bound * denominator), denominator)
}

fn distinct_sorted_breakpoints(
    rng: &mut ChaCha8Rng,
    count: usize,
    params: &RandomParams,
) -> Vec<Rational> {
    let mut set = std::collections::BTreeSet::new();
    let mut guard = 0;
    while set.len() < count && guard < 200 {
        set.insert(lattice(rng, params.span, params.denominator));
        guard += 1;
    }
    set.into_iter().collect()
}

fn build_from_jumps(
    rng: &mut ChaCha8Rng,
    breakpoints: Vec<Rational>,
    jumps: Vec<Rational>,
    params: &RandomParams,
) -> PLFunction {
    let left_slope = lattice(rng, params.magnitude, params.denominator);
    let anchor = lattice(rng, params.magnitude, params.denominator);
    if breakpoints.is_empty() {
        return PLFunction::affine(left_slope, anchor);
    }
    let mut slopes = vec![left_slope.clone()];
    for j in &jumps {
        let next = slopes.last().unwrap() + j;
        slopes.push(next);
    }
    let mut points = Vec::with_capacity(breakpoints.len());
    let mut value = anchor;
    points.push((breakpoints[0].clone(), value.clone()));
    for i in 1..breakpoints.len() {
        value += &slopes[i] * (&breakpoints[i] - &breakpoints[i - 1]);
        points.push((breakpoints[i].clone(), value.clone()));
    }
    PLFunction::from_breakpoints(
        slopes[0].clone(),
        &points,
        slopes.last().unwrap().clone(),
        None,
    )
    .expect("generated breakpoints strictly increase")
}

fn nonzero_jump(rng: &mut ChaCha8Rng, params: &RandomParams, positive_only: bool) -> Rational {
    loop {
        let j = if positive_only {
            rat(
                rng.gen_range(1..=params.magnitude * params.denominator),
                params.denominator,
            )
        } else {
            lattice(rng, params.magnitude, params.denominator)
        };
        if !j.is_zero() {
            return j;
        }
    }
}

/// A random nonconstant tropical rational function: finitely many
/// breakpoints with mixed-sign jumps and affine tails.
pub fn random_rational_function(rng: &mut ChaCha8Rng, params: &RandomParams) -> PLFunction {
    loop {
        let count = rng.gen_range(1..=params.max_breakpoints);
        let breakpoints = distinct_sorted_breakpoints(rng, count, params);
        let jumps: Vec<Rational> = (0..breakpoints.len())
            .map(|_| nonzero_jump(rng, params, false))
            .collect();
        let f = build_from_jumps(rng, breakpoints, jumps, params);
        if !f.is_constant() {
            return f;
        }
    }
}

/// A random tropical entire function (all jumps positive, so convex).
pub fn random_entire(rng: &mut ChaCha8Rng, params: &RandomParams) -> PLFunction {
    let count = rng.gen_range(0..=params.max_breakpoints);
    let breakpoints = distinct_sorted_breakpoints(rng, count, params);
    let jumps: Vec<Rational> = (0..breakpoints.len())
        .map(|_| nonzero_jump(rng, params, true))
        .collect();
    build_from_jumps(rng, breakpoints, jumps, params)
}

/// A random reduced curve into `TP^n`: component `j` draws breakpoints
/// from a lattice offset by `j`, so no location is shared and the reduced
/// invariant holds by construction.
pub fn random_curve(rng: &mut ChaCha8Rng, n: usize, params: &RandomParams) -> TropCurve {
    let stride = (n + 1) as i64;
    loop {
        let components: Vec<PLFunction> = (0..=n as i64)
            .map(|j| {
                let count = rng.gen_range(0..=params.max_breakpoints.min(4));
                let raw = distinct_sorted_breakpoints(rng, count, params);
                let offset: Vec<Rational> = raw
                    .into_iter()
                    .map(|b| b * rat_int(stride) + rat_int(j))
                    .collect();
                let jumps: Vec<Rational> = (0..offset.len())
                    .map(|_| nonzero_jump(rng, params, true))
                    .collect();
                build_from_jumps(rng, offset, jumps, params)
            })
            .collect();
        if reduced_check(&components).expect("components are entire").is_none() {
            return TropCurve::new(components).expect("disjoint roots give a reduced curve");
        }
    }
}

/// A random homogeneous polynomial. With `full_support` every monomial of
/// `J_d` carries a real coefficient (needed for complete compositions);
/// otherwise a random nonempty subset does.
pub fn random_polynomial(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: u32,
    full_support: bool,
    params: &RandomParams,
) -> TropPolynomial {
    let indices = monomial_basis(n, d);
    loop {
        let terms: Vec<(Vec<u32>, TropValue)> = indices
            .iter()
            .map(|idx| {
                let keep = full_support || rng.gen_bool(0.7);
                let coeff = if keep {
                    TropValue::Finite(lattice(rng, params.magnitude, params.denominator))
                } else {
                    TropValue::Bottom
                };
                (idx.clone(), coeff)
            })
            .collect();
        if terms.iter().any(|(_, c)| !c.is_bottom()) {
            return TropPolynomial::new(n + 1, d, &terms).expect("valid homogeneous terms");
        }
    }
}
