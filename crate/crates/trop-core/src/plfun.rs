//! Exact piecewise-linear functions on the real line.
//!
//! A [`PLFunction`] is a continuous piecewise-linear function with rational
//! breakpoints and slopes, total on R via affine tails, optionally carrying
//! a closed validity window. These are the tropical meromorphic functions:
//! a breakpoint with a positive slope jump is a root, a negative jump is a
//! pole, and convex instances (nondecreasing slopes) are tropical entire.
//!
//! The representation is canonical: breakpoints strictly increase, no
//! breakpoint carries a zero jump, and when a window is present all
//! breakpoints lie strictly inside it (the boundary cells extend affinely
//! outward). Two functions agree on their common domain iff their canonical
//! field tuples coincide, so equality is structural.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Closed validity interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    lo: Rational,
    hi: Rational,
}

impl Window {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Precondition(format!(
                "window bounds out of order: [{lo}, {hi}]"
            )));
        }
        Ok(Window { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn shift(&self, c: &Rational) -> Window {
        Window {
            lo: &self.lo - c,
            hi: &self.hi - c,
        }
    }

    fn intersect(a: Option<&Window>, b: Option<&Window>) -> Result<Option<Window>> {
        match (a, b) {
            (None, None) => Ok(None),
            (Some(w), None) | (None, Some(w)) => Ok(Some(w.clone())),
            (Some(w1), Some(w2)) => {
                let lo = w1.lo.clone().max(w2.lo.clone());
                let hi = w1.hi.clone().min(w2.hi.clone());
                if lo > hi {
                    Err(Error::EmptyWindow)
                } else {
                    Ok(Some(Window { lo, hi }))
                }
            }
        }
    }
}

/// Affine piece `y = slope * x + intercept`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Affine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Affine {
    pub fn at(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    fn through(slope: Rational, x: &Rational, y: &Rational) -> Affine {
        let intercept = y - &slope * x;
        Affine { slope, intercept }
    }

    /// Crossing abscissa of two affines with distinct slopes.
    fn crossing(&self, other: &Affine) -> Rational {
        (&other.intercept - &self.intercept) / (&self.slope - &other.slope)
    }
}

/// A breakpoint together with its slope jump (right slope minus left slope).
/// Positive jumps are roots, negative jumps are poles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPoint {
    pub location: Rational,
    pub jump: Rational,
}

impl CriticalPoint {
    pub fn is_root(&self) -> bool {
        self.jump > Rational::zero()
    }

    pub fn is_pole(&self) -> bool {
        self.jump < Rational::zero()
    }

    /// Pole multiplicity `tau = -jump`; only meaningful for poles.
    pub fn pole_multiplicity(&self) -> Rational {
        -self.jump.clone()
    }
}

/// Exact continuous piecewise-linear function; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    breakpoints: Vec<Rational>,
    /// Value at `breakpoints[0]`, or at 0 when there are no breakpoints.
    anchor: Rational,
    /// Slopes of the `breakpoints.len() + 1` cells, left tail first.
    slopes: Vec<Rational>,
    window: Option<Window>,
}

impl PLFunction {
    /// Canonicalizing constructor from cell data. `affines.len()` must be
    /// `boundaries.len() + 1` and adjacent affines must agree at their
    /// shared boundary.
    pub(crate) fn from_cells(
        boundaries: Vec<Rational>,
        affines: Vec<Affine>,
        window: Option<Window>,
    ) -> PLFunction {
        debug_assert_eq!(affines.len(), boundaries.len() + 1);
        debug_assert!(boundaries.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(boundaries
            .iter()
            .enumerate()
            .all(|(i, b)| affines[i].at(b) == affines[i + 1].at(b)));

        // Restrict to the window: keep only breakpoints strictly inside,
        // extending the boundary cells affinely outward.
        let (boundaries, affines) = if let Some(w) = &window {
            let start = boundaries.iter().take_while(|b| *b <= &w.lo).count();
            let end = boundaries.iter().take_while(|b| *b < &w.hi).count();
            (
                boundaries[start..end].to_vec(),
                affines[start..=end].to_vec(),
            )
        } else {
            (boundaries, affines)
        };

        // Merge cells with equal slopes (zero-jump breakpoints).
        let mut bps: Vec<Rational> = Vec::with_capacity(boundaries.len());
        let mut slopes: Vec<Rational> = vec![affines[0].slope.clone()];
        let mut kept: Vec<&Affine> = vec![&affines[0]];
        for (b, a) in boundaries.iter().zip(affines.iter().skip(1)) {
            if a.slope == *slopes.last().unwrap() {
                continue;
            }
            bps.push(b.clone());
            slopes.push(a.slope.clone());
            kept.push(a);
        }
        let anchor = match bps.first() {
            Some(b0) => kept[0].at(b0),
            None => kept[0].intercept.clone(),
        };
        PLFunction {
            breakpoints: bps,
            anchor,
            slopes,
            window,
        }
    }

    /// The constant function `x -> c` on all of R.
    pub fn constant(c: Rational) -> PLFunction {
        PLFunction {
            breakpoints: Vec::new(),
            anchor: c.clone(),
            slopes: vec![Rational::zero()],
            window: None,
        }
    }

    /// The affine function `x -> slope * x + intercept` on all of R.
    pub fn affine(slope: Rational, intercept: Rational) -> PLFunction {
        PLFunction {
            breakpoints: Vec::new(),
            anchor: intercept.clone(),
            slopes: vec![slope],
            window: None,
        }
    }

    /// Builds from a left tail slope, breakpoints with values, and a right
    /// tail slope. Interior slopes come from interpolating consecutive
    /// points. Breakpoints must strictly increase and lie in the window.
    pub fn from_breakpoints(
        left_slope: Rational,
        points: &[(Rational, Rational)],
        right_slope: Rational,
        window: Option<Window>,
    ) -> Result<PLFunction> {
        if points.is_empty() {
            return Err(Error::Precondition(
                "breakpoint form needs at least one point".into(),
            ));
        }
        for pair in points.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::Precondition(format!(
                    "breakpoints must strictly increase: {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if let Some(w) = &window {
            for (x, _) in points {
                if !w.contains(x) {
                    return Err(Error::OutOfWindow {
                        x: x.clone(),
                        lo: w.lo.clone(),
                        hi: w.hi.clone(),
                    });
                }
            }
        }
        let mut affines = Vec::with_capacity(points.len() + 1);
        affines.push(Affine::through(left_slope, &points[0].0, &points[0].1));
        for pair in points.windows(2) {
            let slope = (&pair[1].1 - &pair[0].1) / (&pair[1].0 - &pair[0].0);
            affines.push(Affine::through(slope, &pair[0].0, &pair[0].1));
        }
        let last = points.last().unwrap();
        affines.push(Affine::through(right_slope, &last.0, &last.1));
        let boundaries = points.iter().map(|(x, _)| x.clone()).collect();
        Ok(PLFunction::from_cells(boundaries, affines, window))
    }

    /// Upper envelope of tropical monomials `max_k (s_k * x + c_k)`; always
    /// a tropical entire function.
    pub fn from_monomials(monomials: &[(Rational, Rational)]) -> Result<PLFunction> {
        if monomials.is_empty() {
            return Err(Error::Precondition(
                "monomial form needs at least one monomial".into(),
            ));
        }
        let mut lines: Vec<Affine> = monomials
            .iter()
            .map(|(s, c)| Affine {
                slope: s.clone(),
                intercept: c.clone(),
            })
            .collect();
        lines.sort_by(|a, b| (&a.slope, &a.intercept).cmp(&(&b.slope, &b.intercept)));
        lines.dedup_by(|next, prev| {
            if next.slope == prev.slope {
                // sorted ascending, so `next` has the larger intercept
                prev.intercept = next.intercept.clone();
                true
            } else {
                false
            }
        });
        // Convex-hull sweep: drop lines that never reach the envelope.
        let mut hull: Vec<Affine> = Vec::with_capacity(lines.len());
        for line in lines {
            while hull.len() >= 2 {
                let top = &hull[hull.len() - 1];
                let below = &hull[hull.len() - 2];
                if top.crossing(&line) <= below.crossing(top) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(line);
        }
        let boundaries: Vec<Rational> = hull
            .windows(2)
            .map(|pair| pair[0].crossing(&pair[1]))
            .collect();
        Ok(PLFunction::from_cells(boundaries, hull, None))
    }

    /// Re-canonicalizes under a (possibly different) window.
    pub fn with_window(&self, window: Option<Window>) -> PLFunction {
        let (bounds, affines) = self.cells();
        PLFunction::from_cells(bounds, affines, window)
    }

    pub fn window(&self) -> Option<&Window> {
        self.window.as_ref()
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    pub fn left_tail_slope(&self) -> &Rational {
        &self.slopes[0]
    }

    pub fn right_tail_slope(&self) -> &Rational {
        self.slopes.last().unwrap()
    }

    pub fn is_constant(&self) -> bool {
        self.breakpoints.is_empty() && self.slopes[0].is_zero()
    }

    /// Cell decomposition: boundaries plus one affine per cell.
    pub(crate) fn cells(&self) -> (Vec<Rational>, Vec<Affine>) {
        if self.breakpoints.is_empty() {
            return (
                Vec::new(),
                vec![Affine {
                    slope: self.slopes[0].clone(),
                    intercept: self.anchor.clone(),
                }],
            );
        }
        let mut affines = Vec::with_capacity(self.slopes.len());
        affines.push(Affine::through(
            self.slopes[0].clone(),
            &self.breakpoints[0],
            &self.anchor,
        ));
        let mut value = self.anchor.clone();
        for i in 1..self.slopes.len() {
            affines.push(Affine::through(
                self.slopes[i].clone(),
                &self.breakpoints[i - 1],
                &value,
            ));
            if i < self.breakpoints.len() {
                value +=
                    &self.slopes[i] * (&self.breakpoints[i] - &self.breakpoints[i - 1]);
            }
        }
        (self.breakpoints.clone(), affines)
    }

    /// Evaluates the total piecewise-linear extension, ignoring the window.
    pub fn eval_unchecked(&self, x: &Rational) -> Rational {
        if self.breakpoints.is_empty() {
            return &self.anchor + &self.slopes[0] * x;
        }
        if x <= &self.breakpoints[0] {
            return &self.anchor + &self.slopes[0] * (x - &self.breakpoints[0]);
        }
        let mut value = self.anchor.clone();
        for i in 1..self.slopes.len() {
            let cell_end = self.breakpoints.get(i);
            match cell_end {
                Some(b) if b < x => {
                    value += &self.slopes[i] * (b - &self.breakpoints[i - 1]);
                }
                _ => {
                    return value + &self.slopes[i] * (x - &self.breakpoints[i - 1]);
                }
            }
        }
        unreachable!("cell walk covers the whole line")
    }

    /// Evaluates inside the validity window.
    pub fn evaluate(&self, x: &Rational) -> Result<Rational> {
        if let Some(w) = &self.window {
            if !w.contains(x) {
                return Err(Error::OutOfWindow {
                    x: x.clone(),
                    lo: w.lo.clone(),
                    hi: w.hi.clone(),
                });
            }
        }
        Ok(self.eval_unchecked(x))
    }

    fn merged_boundaries(f: &PLFunction, g: &PLFunction) -> Vec<Rational> {
        let mut all: Vec<Rational> = f
            .breakpoints
            .iter()
            .chain(g.breakpoints.iter())
            .cloned()
            .collect();
        all.sort();
        all.dedup();
        all
    }

    /// Affine of `self` on each cell of the refined boundary list (which
    /// must contain all of `self`'s breakpoints).
    fn affines_on(&self, boundaries: &[Rational]) -> Vec<Affine> {
        let (own_bounds, own_affines) = self.cells();
        let mut out = Vec::with_capacity(boundaries.len() + 1);
        let mut idx = 0;
        out.push(own_affines[0].clone());
        for b in boundaries {
            while idx < own_bounds.len() && &own_bounds[idx] <= b {
                idx += 1;
            }
            out.push(own_affines[idx].clone());
        }
        out
    }

    /// Pointwise maximum (tropical sum) of two functions.
    pub fn pl_max(&self, other: &PLFunction) -> Result<PLFunction> {
        let window = Window::intersect(self.window.as_ref(), other.window.as_ref())?;
        let merged = Self::merged_boundaries(self, other);
        let fa = self.affines_on(&merged);
        let ga = other.affines_on(&merged);
        let mut bounds: Vec<Rational> = Vec::new();
        let mut tops: Vec<Affine> = Vec::new();
        for i in 0..fa.len() {
            let lo = if i == 0 { None } else { Some(&merged[i - 1]) };
            let hi = merged.get(i);
            let (a, b) = (&fa[i], &ga[i]);
            if a.slope == b.slope {
                tops.push(if a.intercept >= b.intercept {
                    a.clone()
                } else {
                    b.clone()
                });
            } else {
                let x = a.crossing(b);
                let inside = lo.map_or(true, |l| &x > l) && hi.map_or(true, |h| &x < h);
                let (low_slope, high_slope) = if a.slope < b.slope { (a, b) } else { (b, a) };
                if inside {
                    // smaller slope wins left of the crossing
                    tops.push(low_slope.clone());
                    bounds.push(x);
                    tops.push(high_slope.clone());
                } else {
                    // strict order throughout the open cell; sample inside
                    let sample = match (lo, hi) {
                        (Some(l), Some(h)) => (l + h) / Rational::from_integer(2.into()),
                        (Some(l), None) => l + Rational::from_integer(1.into()),
                        (None, Some(h)) => h - Rational::from_integer(1.into()),
                        (None, None) => unreachable!("distinct slopes always cross"),
                    };
                    tops.push(if a.at(&sample) >= b.at(&sample) {
                        a.clone()
                    } else {
                        b.clone()
                    });
                }
            }
            if let Some(h) = hi {
                bounds.push(h.clone());
            }
        }
        Ok(PLFunction::from_cells(bounds, tops, window))
    }

    /// Pointwise sum (tropical product) of two functions.
    pub fn pl_add(&self, other: &PLFunction) -> Result<PLFunction> {
        let window = Window::intersect(self.window.as_ref(), other.window.as_ref())?;
        let merged = Self::merged_boundaries(self, other);
        let fa = self.affines_on(&merged);
        let ga = other.affines_on(&merged);
        let sums = fa
            .iter()
            .zip(ga.iter())
            .map(|(a, b)| Affine {
                slope: &a.slope + &b.slope,
                intercept: &a.intercept + &b.intercept,
            })
            .collect();
        Ok(PLFunction::from_cells(merged, sums, window))
    }

    /// Tropical power `f^{⊙ s}`: pointwise scaling by a rational.
    pub fn pl_scale(&self, s: &Rational) -> PLFunction {
        let (bounds, affines) = self.cells();
        let scaled = affines
            .into_iter()
            .map(|a| Affine {
                slope: a.slope * s,
                intercept: a.intercept * s,
            })
            .collect();
        PLFunction::from_cells(bounds, scaled, self.window.clone())
    }

    /// Tropical reciprocal `1_o ⊘ f = -f`.
    pub fn pl_neg(&self) -> PLFunction {
        self.pl_scale(&-Rational::from_integer(1.into()))
    }

    /// Argument shift `x -> f(x + c)`; the window translates by `-c`.
    pub fn pl_shift(&self, c: &Rational) -> PLFunction {
        if c.is_zero() {
            return self.clone();
        }
        let breakpoints: Vec<Rational> = self.breakpoints.iter().map(|b| b - c).collect();
        let anchor = if self.breakpoints.is_empty() {
            &self.anchor + &self.slopes[0] * c
        } else {
            self.anchor.clone()
        };
        PLFunction {
            breakpoints,
            anchor,
            slopes: self.slopes.clone(),
            window: self.window.as_ref().map(|w| w.shift(c)),
        }
    }

    /// `f^+ = max(f, 0)`.
    pub fn plus_part(&self) -> PLFunction {
        self.pl_max(&PLFunction::constant(Rational::zero()))
            .expect("constant has no window")
    }

    /// All breakpoints with their slope jumps; positive jump = root,
    /// negative = pole. Canonical form guarantees nonzero jumps.
    pub fn critical_points(&self) -> Vec<CriticalPoint> {
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(i, b)| CriticalPoint {
                location: b.clone(),
                jump: &self.slopes[i + 1] - &self.slopes[i],
            })
            .collect()
    }

    /// True iff slopes are nondecreasing (convex; no poles) — the tropical
    /// entire property.
    pub fn is_entire(&self) -> bool {
        self.slopes.windows(2).all(|w| w[0] <= w[1])
    }

    /// Splits a meromorphic `f` into entire `h, g` with `f = h ⊘ g`, the
    /// roots of `g` being exactly the poles of `f` with equal
    /// multiplicities, normalized by `g(0) = 0` and leftmost slope 0.
    pub fn split_entire(&self) -> (PLFunction, PLFunction) {
        let poles: Vec<CriticalPoint> = self
            .critical_points()
            .into_iter()
            .filter(|c| c.is_pole())
            .collect();
        let g = if poles.is_empty() {
            PLFunction::constant(Rational::zero()).with_window(self.window.clone())
        } else {
            let boundaries: Vec<Rational> = poles.iter().map(|p| p.location.clone()).collect();
            let mut affines = Vec::with_capacity(poles.len() + 1);
            let mut slope = Rational::zero();
            let mut value = Rational::zero();
            affines.push(Affine::through(slope.clone(), &boundaries[0], &value));
            for (i, p) in poles.iter().enumerate() {
                slope += p.pole_multiplicity();
                affines.push(Affine::through(slope.clone(), &p.location, &value));
                if i + 1 < poles.len() {
                    value += &slope * (&poles[i + 1].location - &p.location);
                }
            }
            let raw = PLFunction::from_cells(boundaries, affines, self.window.clone());
            // normalize g(0) = 0
            let at_zero = raw.eval_unchecked(&Rational::zero());
            raw.pl_add(&PLFunction::constant(-at_zero))
                .expect("constant has no window")
        };
        let h = self.pl_add(&g).expect("g inherits f's window");
        (h, g)
    }

    /// Exact function equality. Requires identical windows.
    pub fn pl_equal(&self, other: &PLFunction) -> Result<bool> {
        if self.window != other.window {
            return Err(Error::WindowMismatch);
        }
        Ok(self == other)
    }
}
