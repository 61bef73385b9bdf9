use std::time::Instant;

use duelbench::factor::{
    aggregation_check, alpha_k, build_dual_lp5, build_lp4, check_dual_point, mp2_lp4_point, paper_dual_point,
    repaired_paper_certificate, verify_paper_certificate,
};
use duelbench::instances::{ranking_duel, RankingSpec};
use duelbench::lp::{solve, LinearProgram, LpStatus, Sense};
use duelbench::minimax::worst_minimax_welfare;
use duelbench::scalar::Scalar;
use duelbench::{Lp, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(s: &str) -> Rational {
    Rational::from_decimal(s).unwrap()
}

fn sorted_coeffs(lp: &LinearProgram<Rational>, i: usize) -> Vec<(usize, Rational)> {
    let mut c = lp.rows()[i].coeffs.clone();
    c.sort_by_key(|&(j, _)| j);
    c
}

/// LP5 is written out by hand; the generic dualisation must produce the
/// same program up to names and the order of terms within a row.
#[test]
fn lp5_is_the_dual_of_lp4_exactly() {
    for k in 2..=8 {
        let lp4 = build_lp4::<Rational>(k).unwrap();
        let dual = lp4.dual();
        let lp5 = build_dual_lp5::<Rational>(k).unwrap();
        assert_eq!(dual.sense(), Sense::Maximize);
        assert_eq!(lp5.sense(), Sense::Maximize);
        assert_eq!(dual.num_vars(), lp5.num_vars(), "k={k}");
        assert_eq!(dual.num_rows(), lp5.num_rows(), "k={k}");
        for (a, b) in dual.vars().iter().zip(lp5.vars()) {
            assert_eq!((&a.cost, &a.lower, &a.upper), (&b.cost, &b.lower, &b.upper), "k={k}");
        }
        for i in 0..lp5.num_rows() {
            let (a, b) = (&dual.rows()[i], &lp5.rows()[i]);
            assert_eq!(a.relation, b.relation, "k={k} row {i}");
            assert_eq!(a.rhs, b.rhs, "k={k} row {i}");
            assert_eq!(sorted_coeffs(&dual, i), sorted_coeffs(&lp5, i), "k={k} row {i}");
        }
    }
}

/// k = 2 collapses to one free parameter: with `p_1 = 1` and `p_2 = t`,
/// α₂ = min_t max{t, 1-2t, (1-t)/1.208, (2-t)/3.2}.
#[test]
fn alpha_two_matches_a_scan_and_its_closed_form() {
    let env = |t: f64| t.max(1.0 - 2.0 * t).max((1.0 - t) / 1.208).max((2.0 - t) / 3.2);
    let steps = 1_000_000;
    let scan = (0..=steps).map(|i| env(i as f64 / steps as f64)).fold(f64::INFINITY, f64::min);
    let a2 = alpha_k(2).unwrap();
    assert!((a2.alpha - scan).abs() < 1e-6, "{} vs scan {}", a2.alpha, scan);
    assert!((a2.alpha - 10.0 / 21.0).abs() < 1e-9);
    // The crossing t = (2-t)/3.2 is t = 10/21; the exact certificate reaches it.
    let (cert, check) = a2.exact_certificate();
    assert!(check.feasible);
    assert!(*cert.theta() <= Rational::new(10.into(), 21.into()));
    assert!((cert.theta().as_f64() - 10.0 / 21.0).abs() < 1e-9);
}

/// Solving LP4 itself and reading LP5's optimum are independent routes.
#[test]
fn lp4_and_lp5_optima_agree() {
    for k in 3..=8 {
        let direct = solve(&build_lp4::<f64>(k).unwrap()).unwrap();
        assert_eq!(direct.status, LpStatus::Optimal);
        let via_dual = alpha_k(k).unwrap();
        assert!((direct.objective - via_dual.alpha).abs() < 1e-7, "k={k}: {} vs {}", direct.objective, via_dual.alpha);
        assert!(via_dual.lp4_residual < 1e-9);
        let lp4: Lp = build_lp4(k).unwrap();
        let x = via_dual.lp4_point();
        assert!((lp4.objective_value(&x) - via_dual.alpha).abs() < 1e-7);
    }
}

#[test]
fn alpha_is_nondecreasing_and_exactly_certified() {
    let mut prev = 0.0;
    for k in 2..=12 {
        let a = alpha_k(k).unwrap();
        assert!(a.alpha >= prev - 1e-9, "k={k}");
        prev = a.alpha;
        let (cert, check) = a.exact_certificate();
        assert!(check.feasible && check.routes_agree, "k={k}");
        assert!(check.lp5_max_violation.is_zero());
        assert!(cert.theta().as_f64() >= a.alpha - 1e-6, "k={k}");
    }
}

#[test]
fn published_table_misses_exact_feasibility_by_a_hair() {
    let t = Instant::now();
    let check = verify_paper_certificate();
    assert!(t.elapsed().as_secs_f64() < 1.0);
    assert!(!check.feasible);
    assert!(check.routes_agree);
    assert_eq!(check.lp5_max_violation, Rational::new(157.into(), 302_000_000.into()));
    assert_eq!(check.lp5_objective, rat("0.612275"));
    // The certificate route sees the same defect as a positive column residual.
    assert!(check.certificate.max_residual.gt_zero());

    let (repaired, rcheck) = repaired_paper_certificate();
    assert!(rcheck.feasible && rcheck.routes_agree);
    assert!(rcheck.lp5_max_violation.is_zero());
    let theta = repaired.theta().as_f64();
    assert!(theta >= 0.612 && theta < 0.612275, "{theta}");
    // Nothing the repair touched grew.
    let before = paper_dual_point::<Rational>();
    for (a, b) in repaired.as_vector()[1..].iter().zip(&before.as_vector()[1..]) {
        assert!(a <= b);
    }
}

/// Lowering θ cannot rescue the table: the violated rows are ones θ does
/// not relax enough, or does not appear in at all.
#[test]
fn table_defect_is_not_in_theta() {
    let lp5 = build_dual_lp5::<Rational>(10).unwrap();
    let violated = |check: &duelbench::factor::DualPointCheck<Rational>| -> Vec<String> {
        check
            .lp5_row_violations
            .iter()
            .enumerate()
            .filter(|(_, v)| v.gt_zero())
            .map(|(i, _)| lp5.row_name(i).to_string())
            .collect()
    };
    let published = violated(&verify_paper_certificate());
    assert!(!published.is_empty());
    let mut point = paper_dual_point::<Rational>();
    point.set_theta(rat("0.612"));
    let lowered = violated(&check_dual_point(&point));
    assert!(!lowered.is_empty());
    assert!(lowered.iter().all(|r| published.contains(r)));
    assert!(lowered.iter().all(|r| r.starts_with("pair") || r == "page10"), "{lowered:?}");
}

fn decreasing_probs(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
    p.sort_by(|a, b| b.partial_cmp(a).unwrap());
    p[0] = p[0].max(1e-3);
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Points built from the nonlinear bounds are LP4-feasible, so they can
    /// never beat the LP optimum.
    #[test]
    fn nonlinear_points_are_feasible_and_dominated(seed in any::<u64>(), k in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = decreasing_probs(&mut rng, k);
        let x = mp2_lp4_point(&p);
        let lp4: Lp = build_lp4(k).unwrap();
        prop_assert!(lp4.primal_residual(&x) < 1e-9);
        let alpha = alpha_k(k).unwrap().alpha;
        prop_assert!(lp4.objective_value(&x) >= alpha - 1e-9);
    }
}

#[test]
fn aggregation_over_subsets_holds_for_minimax_strategies() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.gen_range(4..=6);
        let k = rng.gen_range(2..=n);
        let p = duelbench::instances::random::probabilities(&mut rng, n);
        let duel = ranking_duel(RankingSpec::linear(p, 1.0, 0.0).unwrap()).unwrap();
        let worst = worst_minimax_welfare(duel.game()).unwrap();
        let report = aggregation_check(&duel, &worst.strategy, k).unwrap();
        assert!(report.holds, "n={n} k={k}: {report:?}");
        assert_eq!(report.subsets as u128, duelbench::factor::binomial(n, k).try_into().unwrap());
    }
}
