//! Tropical Nevanlinna functionals and their exact identities.
//!
//! Proximity `m(r,f) = (f⁺(r) + f⁺(-r))/2`, the pole-counting functions
//! `n` and `N`, the characteristic `T = m + N`, the Jensen residual (which
//! is identically zero), the Cartan characteristic of a projective curve,
//! the shift-quotient proximity ratio, and floating-point order/hyperorder
//! fits. Everything except [`GrowthReport`] is exact rational arithmetic.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::plfun::PLFunction;
use crate::projective::TropCurve;
use crate::rational::{to_f64, Rational};

/// One exact row of the characteristic table: `t = m + n` always.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NevSample {
    pub r: Rational,
    /// Proximity m(r, f).
    pub m: Rational,
    /// Integrated counting function N(r, f).
    pub n: Rational,
    /// Characteristic T(r, f) = m + N.
    pub t: Rational,
}

fn check_radius(r: &Rational) -> Result<()> {
    if r <= &Rational::zero() {
        return Err(Error::Precondition(format!(
            "radius must be positive, got {r}"
        )));
    }
    Ok(())
}

fn half(q: Rational) -> Rational {
    q / Rational::from_integer(2.into())
}

fn check_inside(f: &PLFunction, r: &Rational) -> Result<()> {
    if let Some(w) = f.window() {
        for x in [r.clone(), -r.clone()] {
            if !w.contains(&x) {
                return Err(Error::OutOfWindow {
                    x,
                    lo: w.lo().clone(),
                    hi: w.hi().clone(),
                });
            }
        }
    }
    Ok(())
}

/// Proximity function `m(r,f) = (f⁺(r) + f⁺(-r)) / 2`.
pub fn proximity(f: &PLFunction, r: &Rational) -> Result<Rational> {
    check_radius(r)?;
    let plus = |x: Rational| -> Result<Rational> { Ok(f.evaluate(&x)?.max(Rational::zero())) };
    Ok(half(plus(r.clone())? + plus(-r.clone())?))
}

/// Unintegrated pole count `n(r,f)`: total pole multiplicity strictly
/// inside `(-r, r)`.
pub fn counting_n(f: &PLFunction, r: &Rational) -> Result<Rational> {
    check_radius(r)?;
    check_inside(f, r)?;
    Ok(f.critical_points()
        .iter()
        .filter(|c| c.is_pole() && c.location.clone().abs() < *r)
        .map(|c| c.pole_multiplicity())
        .sum())
}

/// Integrated counting function
/// `N(r,f) = (1/2) Σ_{|b|<r} τ_f(b) (r - |b|)` over the poles of `f`.
pub fn counting_big_n(f: &PLFunction, r: &Rational) -> Result<Rational> {
    check_radius(r)?;
    check_inside(f, r)?;
    Ok(half(
        f.critical_points()
            .iter()
            .filter(|c| c.is_pole())
            .filter_map(|c| {
                let dist = c.location.clone().abs();
                (dist < *r).then(|| c.pole_multiplicity() * (r - dist))
            })
            .sum(),
    ))
}

/// `N` with pole multiplicities truncated by `k`.
pub fn counting_big_n_truncated(f: &PLFunction, r: &Rational, k: &Rational) -> Result<Rational> {
    check_radius(r)?;
    if k <= &Rational::zero() {
        return Err(Error::Precondition(format!(
            "truncation level must be positive, got {k}"
        )));
    }
    check_inside(f, r)?;
    Ok(half(
        f.critical_points()
            .iter()
            .filter(|c| c.is_pole())
            .filter_map(|c| {
                let dist = c.location.clone().abs();
                (dist < *r).then(|| c.pole_multiplicity().min(k.clone()) * (r - dist))
            })
            .sum(),
    ))
}

/// Characteristic sample `T(r,f) = m(r,f) + N(r,f)`.
pub fn characteristic(f: &PLFunction, r: &Rational) -> Result<NevSample> {
    let m = proximity(f, r)?;
    let n = counting_big_n(f, r)?;
    let t = &m + &n;
    Ok(NevSample {
        r: r.clone(),
        m,
        n,
        t,
    })
}

/// Jensen residual
/// `[N(r, 1_o⊘f) - N(r, f)] - [(f(r) + f(-r))/2 - f(0)]`; identically zero.
pub fn jensen_residual(f: &PLFunction, r: &Rational) -> Result<Rational> {
    check_radius(r)?;
    let lhs = counting_big_n(&f.pl_neg(), r)? - counting_big_n(f, r)?;
    let rhs = half(f.evaluate(r)? + f.evaluate(&-r.clone())?) - f.evaluate(&Rational::zero())?;
    Ok(lhs - rhs)
}

/// `L_f = inf { f(b) : b a pole of f }`; `None` marks +∞ (no poles).
pub fn inf_at_poles(f: &PLFunction) -> Option<Rational> {
    f.critical_points()
        .iter()
        .filter(|c| c.is_pole())
        .map(|c| f.eval_unchecked(&c.location))
        .min()
}

/// First-main-theorem residual for values:
/// `T(r, 1_o ⊘ (f ⊕ a)) - T(r, f)` under the admissibility `a < L_f`.
pub fn value_fmt_residual(f: &PLFunction, a: &Rational, r: &Rational) -> Result<Rational> {
    if let Some(l) = inf_at_poles(f) {
        if a >= &l {
            return Err(Error::Precondition(format!(
                "value {a} is not below L_f = {l}"
            )));
        }
    }
    let shifted = f.pl_max(&PLFunction::constant(a.clone()))?.pl_neg();
    let lhs = characteristic(&shifted, r)?.t;
    let rhs = characteristic(f, r)?.t;
    Ok(lhs - rhs)
}

/// Cartan characteristic of a curve:
/// `T_f(r) = (‖f(r)‖ + ‖f(-r)‖)/2 - ‖f(0)‖`.
pub fn cartan_t(curve: &TropCurve, r: &Rational) -> Result<Rational> {
    check_radius(r)?;
    let plus = curve.norm_at(r)?;
    let minus = curve.norm_at(&-r.clone())?;
    let origin = curve.norm_at(&Rational::zero())?;
    Ok(half(plus + minus) - origin)
}

/// The logarithmic-derivative analogue: the ratio
/// `m(r, f(x+c) ⊘ f(x)) / T(r, f)` as an exact rational.
pub fn log_derivative_ratio(f: &PLFunction, c: &Rational, r: &Rational) -> Result<Rational> {
    if c.is_zero() {
        return Err(Error::Precondition("shift step must be nonzero".into()));
    }
    let quotient = f.pl_shift(c).pl_add(&f.pl_neg())?;
    let m = proximity(&quotient, r)?;
    let t = characteristic(f, r)?.t;
    if t <= Rational::zero() {
        return Err(Error::Degenerate(format!("T(r, f) = {t} is not positive")));
    }
    Ok(m / t)
}

/// Order/hyperorder fits over a characteristic table. The only
/// floating-point values in the crate live here and are approximate.
#[derive(Debug, Clone)]
pub struct GrowthReport {
    /// Least-squares slope of `log T` against `log r`.
    pub order_estimate: f64,
    /// Least-squares slope of `log log T` against `log r`, over the
    /// samples with `T > 1`; `NaN` when fewer than two such samples exist.
    pub hyperorder_estimate: f64,
    /// The series `log T(r) / r` (hyperorder-one diagnostic).
    pub log_t_over_r: Vec<(Rational, f64)>,
    /// Always true: the estimates are floating-point fits on exact data.
    pub approximate: bool,
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Fits growth-order estimates to a characteristic table.
pub fn growth_fit(samples: &[NevSample]) -> Result<GrowthReport> {
    if samples.len() < 8 {
        return Err(Error::Precondition(format!(
            "growth fit needs at least 8 samples, got {}",
            samples.len()
        )));
    }
    if samples.windows(2).any(|w| w[0].r >= w[1].r) {
        return Err(Error::Precondition(
            "growth fit needs strictly increasing radii".into(),
        ));
    }
    if let Some(bad) = samples.iter().find(|s| s.t <= Rational::zero()) {
        return Err(Error::Degenerate(format!(
            "nonpositive characteristic T({}) = {}",
            bad.r, bad.t
        )));
    }
    let loglog: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (to_f64(&s.r).ln(), to_f64(&s.t).ln()))
        .collect();
    let order_estimate = least_squares_slope(&loglog);
    let hyper_points: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.t > Rational::from_integer(1.into()))
        .map(|s| (to_f64(&s.r).ln(), to_f64(&s.t).ln().ln()))
        .collect();
    let hyperorder_estimate = if hyper_points.len() >= 2 {
        least_squares_slope(&hyper_points)
    } else {
        f64::NAN
    };
    let log_t_over_r = samples
        .iter()
        .map(|s| (s.r.clone(), to_f64(&s.t).ln() / to_f64(&s.r)))
        .collect();
    Ok(GrowthReport {
        order_estimate,
        hyperorder_estimate,
        log_t_over_r,
        approximate: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plfun::Window;
    use crate::rational::{rat, rat_int};

    fn identity() -> PLFunction {
        PLFunction::affine(rat_int(1), rat_int(0))
    }

    fn abs() -> PLFunction {
        PLFunction::from_monomials(&[(rat_int(1), rat_int(0)), (rat_int(-1), rat_int(0))]).unwrap()
    }

    fn neg_abs() -> PLFunction {
        abs().pl_neg()
    }

    /// Tropical rational function with simple poles at ±loc.
    fn double_pole(loc: i64) -> PLFunction {
        PLFunction::from_monomials(&[
            (rat_int(1), rat_int(-loc)),
            (rat_int(-1), rat_int(-loc)),
            (rat_int(0), rat_int(0)),
        ])
        .unwrap()
        .pl_neg()
    }

    #[test]
    fn proximity_examples() {
        assert_eq!(proximity(&identity(), &rat_int(4)).unwrap(), rat_int(2));
        for r in [1i64, 5, 40] {
            assert_eq!(proximity(&neg_abs(), &rat_int(r)).unwrap(), rat_int(0));
        }
        assert_eq!(proximity(&abs(), &rat_int(3)).unwrap(), rat_int(3));
    }

    #[test]
    fn counting_examples() {
        assert_eq!(counting_n(&neg_abs(), &rat_int(1)).unwrap(), rat_int(2));
        assert_eq!(counting_n(&identity(), &rat_int(7)).unwrap(), rat_int(0));
        let f = double_pole(2);
        assert_eq!(counting_n(&f, &rat_int(3)).unwrap(), rat_int(2));
        // strict inequality |b| < r
        assert_eq!(counting_n(&f, &rat_int(2)).unwrap(), rat_int(0));
    }

    #[test]
    fn counting_big_n_examples() {
        assert_eq!(counting_big_n(&neg_abs(), &rat_int(5)).unwrap(), rat_int(5));
        assert_eq!(counting_big_n(&identity(), &rat_int(5)).unwrap(), rat_int(0));
        assert_eq!(
            counting_big_n(&double_pole(1), &rat_int(3)).unwrap(),
            rat_int(2)
        );
    }

    /// Exact Riemann integration of the step function n(t) on [0, r].
    fn riemann_oracle(f: &PLFunction, r: &Rational) -> Rational {
        let mut cuts: Vec<Rational> = f
            .critical_points()
            .iter()
            .filter(|c| c.is_pole())
            .map(|c| c.location.clone().abs())
            .filter(|d| d < r)
            .collect();
        cuts.push(Rational::zero());
        cuts.push(r.clone());
        cuts.sort();
        cuts.dedup();
        let mut integral = Rational::zero();
        for pair in cuts.windows(2) {
            let mid = (&pair[0] + &pair[1]) / rat_int(2);
            let n_mid: Rational = f
                .critical_points()
                .iter()
                .filter(|c| c.is_pole() && c.location.clone().abs() < mid)
                .map(|c| c.pole_multiplicity())
                .sum();
            integral = integral + n_mid * (&pair[1] - &pair[0]);
        }
        integral / rat_int(2)
    }

    #[test]
    fn counting_matches_riemann_integration() {
        for f in [neg_abs(), double_pole(1), double_pole(3)] {
            for r in [rat(5, 2), rat_int(4), rat(19, 3)] {
                assert_eq!(counting_big_n(&f, &r).unwrap(), riemann_oracle(&f, &r));
            }
        }
    }

    #[test]
    fn truncated_counting_examples() {
        assert_eq!(
            counting_big_n_truncated(&neg_abs(), &rat_int(5), &rat_int(1)).unwrap(),
            rat(5, 2)
        );
        assert_eq!(
            counting_big_n_truncated(&neg_abs(), &rat_int(5), &rat_int(7)).unwrap(),
            counting_big_n(&neg_abs(), &rat_int(5)).unwrap()
        );
        assert_eq!(
            counting_big_n_truncated(&identity(), &rat_int(5), &rat_int(1)).unwrap(),
            rat_int(0)
        );
    }

    #[test]
    fn characteristic_examples() {
        assert_eq!(
            characteristic(&identity(), &rat_int(4)).unwrap().t,
            rat_int(2)
        );
        let s = characteristic(&neg_abs(), &rat_int(5)).unwrap();
        assert_eq!(s.m, rat_int(0));
        assert_eq!(s.n, rat_int(5));
        assert_eq!(s.t, rat_int(5));
        // nonconstant tropical rational function grows like O(r): the
        // characteristic is eventually affine with equal increments
        let f = double_pole(1);
        let t = |r: i64| characteristic(&f, &rat_int(r)).unwrap().t;
        assert_eq!(t(50) - t(40), t(500) - t(490));
        assert!(t(500) > t(50));
    }

    #[test]
    fn characteristic_is_nondecreasing_and_convex() {
        let f = double_pole(2);
        let samples: Vec<NevSample> = (1..=20)
            .map(|k| characteristic(&f, &rat_int(k)).unwrap())
            .collect();
        let t: Vec<&Rational> = samples.iter().map(|s| &s.t).collect();
        assert!(t.windows(2).all(|w| w[0] <= w[1]));
        assert!(t.windows(3).all(|w| w[2] - w[1] >= w[1] - w[0]));
        // the counting part alone is nondecreasing too
        let n: Vec<&Rational> = samples.iter().map(|s| &s.n).collect();
        assert!(n.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn jensen_residual_is_zero() {
        let funcs = [
            PLFunction::from_monomials(&[(rat_int(1), rat_int(0)), (rat_int(0), rat_int(0))])
                .unwrap(),
            neg_abs(),
            PLFunction::affine(rat(3, 2), rat(-7, 3)),
            double_pole(2),
        ];
        for f in &funcs {
            for r in [rat_int(2), rat(7, 2), rat_int(100)] {
                assert_eq!(jensen_residual(f, &r).unwrap(), rat_int(0), "f = {f:?}");
            }
        }
    }

    #[test]
    fn inf_at_poles_examples() {
        assert_eq!(inf_at_poles(&neg_abs()), Some(rat_int(0)));
        assert_eq!(inf_at_poles(&identity()), None);
        // poles at -1 and 1 with values 2 and 3
        let f = PLFunction::from_breakpoints(
            rat_int(1),
            &[(rat_int(-1), rat_int(2)), (rat_int(1), rat_int(3))],
            rat_int(-2),
            None,
        )
        .unwrap();
        assert_eq!(inf_at_poles(&f), Some(rat_int(2)));
    }

    #[test]
    fn value_fmt_residual_examples() {
        // f = -|x| has L_f = 0; a = -1 is admissible
        let f = neg_abs();
        let resid = |r: i64| value_fmt_residual(&f, &rat_int(-1), &rat_int(r)).unwrap();
        // bounded: eventually constant on r in [1, 100]
        assert_eq!(resid(10), resid(100));
        assert!(matches!(
            value_fmt_residual(&f, &rat_int(0), &rat_int(5)),
            Err(Error::Precondition(_))
        ));
        // no poles: residual constant over r
        let g = double_pole(1).pl_neg();
        let resid = |r: i64| value_fmt_residual(&g, &rat_int(-50), &rat_int(r)).unwrap();
        assert_eq!(resid(10), resid(100));
    }

    #[test]
    fn cartan_examples() {
        let curve = TropCurve::new(vec![PLFunction::constant(rat_int(0)), identity()]).unwrap();
        assert_eq!(cartan_t(&curve, &rat_int(3)).unwrap(), rat(3, 2));
        let const_curve = TropCurve::new(vec![
            PLFunction::constant(rat_int(1)),
            PLFunction::constant(rat_int(-2)),
        ])
        .unwrap();
        for r in [1i64, 10, 100] {
            assert_eq!(cartan_t(&const_curve, &rat_int(r)).unwrap(), rat_int(0));
        }
    }

    #[test]
    fn cartan_tracks_characteristic_within_constant() {
        let f = double_pole(2);
        let curve = TropCurve::from_meromorphic(&f);
        let gap = |r: i64| {
            cartan_t(&curve, &rat_int(r)).unwrap() - characteristic(&f, &rat_int(r)).unwrap().t
        };
        // constant beyond the largest breakpoint radius
        assert_eq!(gap(5), gap(50));
        assert_eq!(gap(50), gap(500));
    }

    #[test]
    fn cartan_invariant_under_tropical_unit() {
        let curve = TropCurve::new(vec![PLFunction::constant(rat_int(0)), identity()]).unwrap();
        let unit = rat(7, 3);
        let scaled = TropCurve::new(vec![
            PLFunction::constant(unit.clone()),
            PLFunction::affine(rat_int(1), unit.clone()),
        ])
        .unwrap();
        for r in [rat_int(2), rat(11, 4)] {
            assert_eq!(cartan_t(&curve, &r).unwrap(), cartan_t(&scaled, &r).unwrap());
        }
    }

    #[test]
    fn log_derivative_ratio_decays() {
        let f = neg_abs();
        let ratios: Vec<Rational> = [10i64, 100, 1000]
            .iter()
            .map(|r| log_derivative_ratio(&f, &rat_int(1), &rat_int(*r)).unwrap())
            .collect();
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2]);
        // affine f = 2x: shift difference is the constant 2, T(r) = r
        let g = PLFunction::affine(rat_int(2), rat_int(0));
        let at = |r: i64| log_derivative_ratio(&g, &rat_int(1), &rat_int(r)).unwrap();
        assert_eq!(at(100), rat(2, 100));
        assert!(at(1000) < rat(1, 100));
    }

    #[test]
    fn log_derivative_rejects_zero_t() {
        let f = PLFunction::constant(rat_int(-3));
        assert!(matches!(
            log_derivative_ratio(&f, &rat_int(1), &rat_int(5)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn growth_fit_power_laws() {
        let linear: Vec<NevSample> = (1..=24)
            .map(|k| {
                let r = rat_int(k);
                NevSample {
                    r: r.clone(),
                    m: r.clone(),
                    n: rat_int(0),
                    t: r,
                }
            })
            .collect();
        let fit = growth_fit(&linear).unwrap();
        assert!((fit.order_estimate - 1.0).abs() < 0.05);

        let quadratic: Vec<NevSample> = (1..=24)
            .map(|k| {
                let r = rat_int(k);
                NevSample {
                    r: r.clone(),
                    m: &r * &r,
                    n: rat_int(0),
                    t: &r * &r,
                }
            })
            .collect();
        let fit = growth_fit(&quadratic).unwrap();
        assert!((fit.order_estimate - 2.0).abs() < 0.05);
        assert!(fit.approximate);

        assert!(growth_fit(&linear[..5]).is_err());
    }

    #[test]
    fn window_violations_reported() {
        let w = Window::new(rat_int(-2), rat_int(2)).unwrap();
        let f = neg_abs().with_window(Some(w));
        assert!(proximity(&f, &rat_int(3)).is_err());
        assert!(counting_big_n(&f, &rat_int(3)).is_err());
        assert!(proximity(&f, &rat_int(2)).is_ok());
    }
}
