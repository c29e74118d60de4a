//! Acceptance suite: one test per verification target, each printing a
//! PASS/FAIL line. Run with `cargo test -p trop-core --test acceptance`
//! (add `-- --nocapture` to see the lines for passing tests too).

use std::time::Instant;

use trop_core::corpus::{
    e_beta, random_curve, random_polynomial, random_rational_function, seeded_rng, RandomParams,
};
use trop_core::gm::{
    combine, gm_dependent, principal_coefficients, shortest_length, verify_representation, Basis,
    GmConfig, Representation, Verdict,
};
use trop_core::hypersurface::Hypersurface;
use trop_core::nevanlinna::{counting_big_n, jensen_residual, log_derivative_ratio};
use trop_core::plfun::PLFunction;
use trop_core::projective::TropCurve;
use trop_core::rational::{rat, rat_int, Rational};
use trop_core::semiring::TropValue;
use trop_core::smt::{
    build_instance, defect, defect_relation_check, l_diagnostic, smt_check, tp1_smt_check,
    DefectTail, SMTInstance, Tp1Target,
};
use trop_core::troplinalg::{casoratian, casoratian_at, trop_det, TropMatrix};

fn verdict(name: &str, ok: bool) {
    println!(
        "acceptance {name}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance criterion failed: {name}");
}

/// 1. Jensen exactness on 1000 seeded random tropical rational functions
/// and 10 radii each; exact zeros, under the 10 s runtime target.
#[test]
fn criterion_01_jensen_exactness() {
    let start = Instant::now();
    let params = RandomParams::default();
    let mut rng = seeded_rng(0x0101);
    let mut ok = true;
    for _ in 0..1000 {
        let f = random_rational_function(&mut rng, &params);
        for k in 1..=10 {
            let r = rat(3 * k + 1, 2);
            if jensen_residual(&f, &r).unwrap() != rat_int(0) {
                ok = false;
            }
        }
    }
    let elapsed = start.elapsed();
    println!("  jensen sweep took {elapsed:?}");
    verdict(
        "01 jensen-exactness",
        ok && elapsed.as_secs_f64() < 10.0,
    );
}

/// 2. First main theorem: 200 seeded (curve, hypersurface) instances with
/// n <= 3, d <= 3; the residual is exactly constant over a 50-point grid
/// and equals d‖f(0)‖ + d‖a‖ - P(f)(0). Zero tolerance.
#[test]
fn criterion_02_first_main_theorem() {
    let mut rng = seeded_rng(0x0202);
    let params = RandomParams {
        max_breakpoints: 2,
        span: 6,
        denominator: 2,
        magnitude: 3,
    };
    let mut ok = true;
    let mut checked = 0;
    while checked < 200 {
        let n = 1 + (checked % 3);
        let d = 1 + ((checked / 3) % 3) as u32;
        let curve = random_curve(&mut rng, n, &params);
        let poly = random_polynomial(&mut rng, n, d, false, &params);
        let v = Hypersurface::new(poly);
        if v.containment_witness(&curve).unwrap().is_none() {
            continue; // degenerate draw; resample
        }
        let expected = v.fmt_expected_constant(&curve).unwrap();
        for k in 1..=50 {
            let r = rat(2 * k + 1, 2);
            if v.fmt_residual(&curve, &r).unwrap() != expected {
                ok = false;
            }
        }
        checked += 1;
    }
    verdict("02 first-main-theorem", ok);
}

/// 3. Tropical determinant: assignment result equals brute-force
/// permutation enumeration on 500 random matrices up to 7x7.
#[test]
fn criterion_03_tropical_determinant_oracle() {
    use itertools::Itertools;
    let brute_force = |a: &TropMatrix| -> TropValue {
        let n = a.dim();
        let mut best = TropValue::Bottom;
        for perm in (0..n).permutations(n) {
            let mut sum = TropValue::one();
            for (i, &j) in perm.iter().enumerate() {
                sum = sum.otimes(a.get(i, j));
            }
            best = best.oplus(&sum);
        }
        best
    };
    let mut rng = seeded_rng(0x0303);
    use rand::Rng;
    let mut ok = true;
    for case in 0..500 {
        let dim = 1 + case % 7;
        let entries: Vec<Vec<TropValue>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        if rng.gen_bool(0.2) {
                            TropValue::Bottom
                        } else {
                            TropValue::Finite(rat(rng.gen_range(-40..40), rng.gen_range(1..5)))
                        }
                    })
                    .collect()
            })
            .collect();
        let a = TropMatrix::new(entries).unwrap();
        if trop_det(&a) != brute_force(&a) {
            ok = false;
        }
    }
    verdict("03 tropical-determinant-oracle", ok);
}

/// 4. Casoratian: symbolic result equals the assignment value at 100
/// random points per instance for 100 seeded instances of <= 5 functions;
/// entire inputs yield entire output.
#[test]
fn criterion_04_casoratian_oracle() {
    use rand::Rng;
    let mut rng = seeded_rng(0x0404);
    let params = RandomParams {
        max_breakpoints: 2,
        span: 5,
        denominator: 2,
        magnitude: 3,
    };
    let mut ok = true;
    for case in 0..100 {
        let count = 2 + case % 4; // 2..=5 functions
        let funcs: Vec<PLFunction> = (0..count)
            .map(|_| trop_core::corpus::random_entire(&mut rng, &params))
            .collect();
        let c = rat(rng.gen_range(1..=4), 2);
        let sym = casoratian(&funcs, &c).unwrap();
        if !sym.is_entire() {
            ok = false;
        }
        for _ in 0..100 {
            let x = rat(rng.gen_range(-60..60), rng.gen_range(1..4));
            if sym.eval_unchecked(&x) != casoratian_at(&funcs, &c, &x).unwrap() {
                ok = false;
            }
        }
    }
    verdict("04 casoratian-oracle", ok);
}

/// Constructs a TP^1 instance over a random rational function with q
/// degree-1 full-support targets; retries until λ = 0.
fn tp1_instance(rng: &mut rand_chacha::ChaCha8Rng, q: usize, grid_max: i64) -> SMTInstance {
    use rand::Rng;
    let params = RandomParams {
        max_breakpoints: 3,
        span: 6,
        denominator: 2,
        magnitude: 3,
    };
    let grid: Vec<Rational> = (1..=40).map(|k| rat_int(k * grid_max / 40)).collect();
    loop {
        let f = random_rational_function(rng, &params);
        let curve = TropCurve::from_meromorphic(&f);
        let mut values = std::collections::BTreeSet::new();
        while values.len() < q {
            values.insert(rat(rng.gen_range(-12..12), 2));
        }
        let polys: Vec<_> = values
            .iter()
            .map(|a| Tp1Target::Finite(a.clone()).polynomial())
            .collect();
        match build_instance(&curve, &polys, &rat_int(1), &grid, &GmConfig::default()) {
            Ok(inst) if inst.lambda() == 0 => return inst,
            _ => continue,
        }
    }
}

/// Mixed-degree instance over TP^1: degrees alternate between 1 and 2, so
/// d = 2 and M + 1 = 3.
fn mixed_degree_instance(rng: &mut rand_chacha::ChaCha8Rng, grid_max: i64) -> SMTInstance {
    let params = RandomParams {
        max_breakpoints: 2,
        span: 5,
        denominator: 2,
        magnitude: 2,
    };
    let grid: Vec<Rational> = (1..=40).map(|k| rat_int(k * grid_max / 40)).collect();
    loop {
        let f = random_rational_function(rng, &params);
        let curve = TropCurve::from_meromorphic(&f);
        // first M+1 = 3 targets mix the degrees; the excess target is a
        // full-support degree-2 form so its composition stays complete
        let polys = vec![
            random_polynomial(rng, 1, 1, true, &params),
            random_polynomial(rng, 1, 2, true, &params),
            random_polynomial(rng, 1, 2, true, &params),
            random_polynomial(rng, 1, 2, true, &params),
        ];
        match build_instance(&curve, &polys, &rat_int(1), &grid, &GmConfig::default()) {
            Ok(inst) if inst.lambda() == 0 => return inst,
            _ => continue,
        }
    }
}

/// 5. The proof-layer identities ψ = L̃ ⊙ K (as functions) and the exact
/// counting identity hold on >= 50 instances with d = 1 and mixed degrees.
#[test]
fn criterion_05_proof_layer_identities() {
    let mut rng = seeded_rng(0x0505);
    let mut ok = true;
    for case in 0..50 {
        let inst = if case % 2 == 0 {
            tp1_instance(&mut rng, 3 + case % 3, 400)
        } else {
            mixed_degree_instance(&mut rng, 400)
        };
        for r in [rat_int(7), rat_int(150), rat_int(390)] {
            let diag = l_diagnostic(&inst, &r).unwrap();
            if !diag.psi_identity_ok || !diag.ej_identity_ok {
                ok = false;
            }
        }
    }
    verdict("05 proof-layer-identities", ok);
}

/// 6. The second-main-theorem chain on >= 20 full-line instances: the
/// inequality chain within tol·T over the top decade, the λ = 0 equality
/// residual within 1/20 of T there, stabilization detected, and the
/// stabilized equality residual constant in r.
#[test]
fn criterion_06_second_main_theorem_chain() {
    let mut rng = seeded_rng(0x0606);
    let tol = rat(1, 20);
    let mut ok = true;
    for case in 0..20 {
        let inst = if case % 3 == 2 {
            mixed_degree_instance(&mut rng, 4000)
        } else {
            tp1_instance(&mut rng, 4, 4000)
        };
        let report = smt_check(&inst, &tol).unwrap();
        let this = report.middle_tail_identity_ok
            && report.chain_ok
            && report.equality_ok == Some(true)
            && report.stabilized
            && report.equality_residual_slope == Some(rat_int(0));
        if !this {
            eprintln!(
                "  instance {case}: lambda={} violations={:?}",
                report.lambda, report.violations
            );
            ok = false;
        }
    }
    verdict("06 second-main-theorem-chain", ok);
}

/// 7. T6 equality at desk scale: |q T_f - Σ N| / T_f <= 1/20 on the top
/// decade for >= 20 nonconstant rational functions against values with
/// f ⊕ a_j ≢ a_j verified exactly.
#[test]
fn criterion_07_value_second_main_theorem() {
    use rand::Rng;
    let mut rng = seeded_rng(0x0707);
    let params = RandomParams {
        max_breakpoints: 3,
        span: 6,
        denominator: 2,
        magnitude: 3,
    };
    let grid: Vec<Rational> = (1..=50).map(|k| rat_int(400 * k)).collect();
    let mut ok = true;
    let mut checked = 0;
    while checked < 20 {
        let f = random_rational_function(&mut rng, &params);
        let mut targets = Vec::new();
        let mut raw = std::collections::BTreeSet::new();
        while raw.len() < 3 {
            raw.insert(rat(rng.gen_range(-10..10), 2));
        }
        let mut admissible = true;
        for a in &raw {
            let fa = f.pl_max(&PLFunction::constant(a.clone())).unwrap();
            if fa.pl_equal(&PLFunction::constant(a.clone())).unwrap() {
                admissible = false;
            }
            targets.push(Tp1Target::Finite(a.clone()));
        }
        if !admissible {
            continue;
        }
        let Ok(report) = tp1_smt_check(&f, &targets, &rat_int(1), &grid, &rat(1, 20), &GmConfig::default())
        else {
            continue;
        };
        if report.t6_ok != Some(true) || !report.p3_identities_ok {
            eprintln!("  instance {checked} failed t6={:?}", report.t6_ok);
            ok = false;
        }
        checked += 1;
    }
    verdict("07 value-second-main-theorem", ok);
}

/// 8a. Tropical rational functions have exact tail-limit defect 0 for
/// admissible values.
#[test]
fn criterion_08a_defect_of_rational_functions() {
    use rand::Rng;
    let mut rng = seeded_rng(0x0801);
    let params = RandomParams::default();
    let grid: Vec<Rational> = (1..=30).map(rat_int).collect();
    let mut ok = true;
    let mut checked = 0;
    while checked < 25 {
        let f = random_rational_function(&mut rng, &params);
        let a = rat(rng.gen_range(-8..8), 2);
        let fa = f.pl_max(&PLFunction::constant(a.clone())).unwrap();
        if fa.pl_equal(&PLFunction::constant(a.clone())).unwrap() {
            continue; // inadmissible: f ⊕ a ≡ a
        }
        let curve = TropCurve::from_meromorphic(&f);
        let v = Hypersurface::new(Tp1Target::Finite(a).polynomial());
        let report = match defect(&v, &curve, &grid) {
            Ok(rep) => rep,
            Err(_) => continue,
        };
        if report.tail != DefectTail::ExactLimit(rat_int(0)) {
            eprintln!("  defect tail {:?} for instance {checked}", report.tail);
            ok = false;
        }
        checked += 1;
    }
    verdict("08a defect-zero-for-rational-functions", ok);
}

/// 8b. The windowed e_β instance (β = 1/2 on [-20, 20]) against a value
/// a < 0: the stated expectation is a defect tail estimate >= 1/2 - 1/20.
#[test]
fn criterion_08b_e_beta_defect_bound() {
    let f = e_beta(&rat(1, 2), &rat_int(-20), &rat_int(20)).unwrap();
    let curve = TropCurve::from_meromorphic(&f);
    let v = Hypersurface::new(Tp1Target::Finite(rat_int(-1)).polynomial());
    let grid: Vec<Rational> = (1..=40).map(|k| rat(k, 2)).collect();
    let report = defect(&v, &curve, &grid).unwrap();
    println!(
        "  e_beta defect tail = {:?} (raw {})",
        report.tail, report.raw_tail
    );
    let ok = !report.tail.is_exact() && *report.tail.value() >= rat(9, 20);
    verdict("08b e-beta-defect-bound", ok);
}

/// 8c. Defect sums satisfy the defect-relation bounds on the corpus.
#[test]
fn criterion_08c_defect_relation_bounds() {
    let mut rng = seeded_rng(0x0803);
    let mut ok = true;
    let mut case = 0;
    while case < 12 {
        let inst = if case % 3 == 2 {
            mixed_degree_instance(&mut rng, 200)
        } else {
            tp1_instance(&mut rng, 4, 200)
        };
        let summary = match defect_relation_check(&inst) {
            Ok(s) => s,
            // a curve flat around the origin makes T_f vanish on low
            // radii, which the defect series rejects; resample
            Err(_) => continue,
        };
        let zero_ok = match summary.excess_all_zero {
            Some(v) => v,
            None => true,
        };
        if !(summary.total_ok && summary.excess_ok && summary.exact && zero_ok) {
            eprintln!(
                "  instance {case}: sum={} bound={} excess={} lambda-bound={}",
                summary.sum, summary.bound_total, summary.excess_sum, summary.bound_excess
            );
            ok = false;
        }
        case += 1;
    }
    verdict("08c defect-relation-bounds", ok);
}

/// 9. The shift-quotient ratio m(r, f(x+1) ⊘ f) / T(r, f) is <= 1/10 at
/// r = 10^3 and nonincreasing across the decades 10, 100, 1000.
#[test]
fn criterion_09_log_derivative_ratio() {
    let mut rng = seeded_rng(0x0909);
    let params = RandomParams {
        max_breakpoints: 5,
        span: 8,
        denominator: 2,
        magnitude: 4,
    };
    let mut ok = true;
    for _ in 0..40 {
        let f = random_rational_function(&mut rng, &params);
        let ratios: Vec<Rational> = [10i64, 100, 1000]
            .iter()
            .map(|r| log_derivative_ratio(&f, &rat_int(1), &rat_int(*r)).unwrap())
            .collect();
        if ratios[2] > rat(1, 10) {
            eprintln!("  ratio at 1000 = {}", ratios[2]);
            ok = false;
        }
        if !(ratios[0] >= ratios[1] && ratios[1] >= ratios[2]) {
            eprintln!("  ratios not decreasing: {ratios:?}");
            ok = false;
        }
    }
    verdict("09 log-derivative-ratio", ok);
}

/// 10. The two branch identities for value targets hold exactly on 100
/// constructed cases each.
#[test]
fn criterion_10_branch_counting_identities() {
    use rand::Rng;
    let mut rng = seeded_rng(0x1010);
    let params = RandomParams::default();
    let radii: Vec<Rational> = vec![rat(5, 2), rat_int(8), rat_int(25)];
    let mut ok = true;

    // case I: f ⊕ a ≡ f via functions bounded below away from a
    let mut built = 0;
    while built < 100 {
        let f = random_rational_function(&mut rng, &params);
        let bounded = f
            .plus_part()
            .pl_add(&PLFunction::constant(rat_int(1)))
            .unwrap();
        if bounded.is_constant() {
            continue;
        }
        let a = rat(rng.gen_range(-6..=0), 2); // a <= 0 < 1 <= bounded
        let fa = bounded.pl_max(&PLFunction::constant(a.clone())).unwrap();
        assert!(fa.pl_equal(&bounded).unwrap());
        let curve = TropCurve::from_meromorphic(&bounded);
        let composed = Tp1Target::Finite(a).polynomial().compose(&curve).unwrap();
        for r in &radii {
            if counting_big_n(&composed.pl_neg(), r).unwrap()
                != counting_big_n(&fa.pl_neg(), r).unwrap()
            {
                ok = false;
            }
        }
        built += 1;
    }

    // case II: f ⊕ a ≡ a via functions bounded above below a
    let mut built = 0;
    while built < 100 {
        let f = random_rational_function(&mut rng, &params);
        let capped = f.pl_neg().plus_part().pl_neg(); // min(f, 0) <= 0
        if capped.is_constant() {
            continue;
        }
        let a = rat(rng.gen_range(1..=6), 2); // capped <= 0 < a
        let fa = capped.pl_max(&PLFunction::constant(a.clone())).unwrap();
        assert!(fa
            .pl_equal(&PLFunction::constant(a.clone()))
            .unwrap());
        let curve = TropCurve::from_meromorphic(&capped);
        let composed = Tp1Target::Finite(a).polynomial().compose(&curve).unwrap();
        for r in &radii {
            if counting_big_n(&composed.pl_neg(), r).unwrap()
                != counting_big_n(&capped, r).unwrap()
            {
                ok = false;
            }
            if counting_big_n(&fa.pl_neg(), r).unwrap() != rat_int(0) {
                ok = false;
            }
        }
        built += 1;
    }
    verdict("10 branch-counting-identities", ok);
}

/// 11. Dependence certificates re-verify exactly, and the shortest
/// representation length agrees with exhaustive support enumeration on
/// bases of size <= 6.
#[test]
fn criterion_11_gm_soundness() {
    use itertools::Itertools;
    use rand::Rng;
    let cfg = GmConfig::default();
    let mut rng = seeded_rng(0x1111);
    let params = RandomParams {
        max_breakpoints: 2,
        span: 5,
        denominator: 2,
        magnitude: 3,
    };
    let mut ok = true;

    // certificates re-verify via an independent combine + compare
    for case in 0..40 {
        let count = 2 + case % 3;
        let mut funcs: Vec<PLFunction> = (0..count)
            .map(|_| trop_core::corpus::random_entire(&mut rng, &params))
            .collect();
        if case % 2 == 0 {
            // plant a dependence: duplicate one function up to a constant
            let base = funcs[0].clone();
            funcs.push(base.pl_add(&PLFunction::constant(rat(3, 2))).unwrap());
        }
        match gm_dependent(&funcs, &cfg).unwrap() {
            Verdict::Dependent(cert) => {
                let basis = Basis::linear(funcs.clone()).unwrap();
                let mut left = vec![TropValue::Bottom; funcs.len()];
                let mut right = vec![TropValue::Bottom; funcs.len()];
                for &i in &cert.set_i {
                    left[i] = cert.coefficients[i].clone();
                }
                for &j in &cert.set_j {
                    right[j] = cert.coefficients[j].clone();
                }
                let lhs = combine(&basis, &Representation::new(left)).unwrap();
                let rhs = combine(&basis, &Representation::new(right)).unwrap();
                if !lhs.pl_equal(&rhs).unwrap() || !cert.verified {
                    ok = false;
                }
            }
            Verdict::PresumedIndependent { .. } => {
                if case % 2 == 0 {
                    ok = false; // the planted dependence must be found
                }
            }
        }
    }

    // shortest_length vs exhaustive enumeration over all supports
    for case in 0..25 {
        let size = 3 + case % 4; // 3..=6
        let basis_funcs: Vec<PLFunction> = (0..size)
            .map(|k| {
                PLFunction::affine(rat_int(k as i64), rat(rng.gen_range(-6..6), 2))
            })
            .collect();
        let basis = Basis::linear(basis_funcs.clone()).unwrap();
        let support_count = 1 + rng.gen_range(0..size);
        let coeffs: Vec<TropValue> = (0..size)
            .map(|k| {
                if k < support_count {
                    TropValue::Finite(rat(rng.gen_range(-4..4), 2))
                } else {
                    TropValue::Bottom
                }
            })
            .collect();
        let target = combine(&basis, &Representation::new(coeffs)).unwrap();
        let fast = shortest_length(&target, &basis, &cfg).unwrap();
        let mut oracle = None;
        'sizes: for s in 1..=size {
            for support in (0..size).combinations(s) {
                let rep = principal_coefficients(&target, &basis, &support).unwrap();
                if verify_representation(&target, &basis, &rep).unwrap() {
                    oracle = Some(s);
                    break 'sizes;
                }
            }
        }
        if Some(fast) != oracle {
            eprintln!("  shortest_length {fast} vs oracle {oracle:?}");
            ok = false;
        }
    }
    verdict("11 gm-soundness", ok);
}
