use std::collections::BTreeMap;

use duelbench::duel::MixedStrategy;
use duelbench::factor::pairwise_h;
use duelbench::instances::{appendix_example, random, ranking_duel, RankingSpec};
use duelbench::minimax::{extreme_minimax, is_minimax, Extreme, EXPLICIT_CAP};
use duelbench::structure::{check_h_bounds, structure_report, LemmaTally};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn merge(total: &mut BTreeMap<String, LemmaTally>, part: &BTreeMap<String, LemmaTally>) {
    for (k, t) in part {
        total.entry(k.clone()).or_default().merge(t);
    }
}

/// Worst and best minimax strategies of 206 seeded instances (linear and
/// general decreasing values, n = 3..=6) satisfy every structural lemma.
#[test]
fn regression_suite_of_minimax_strategies() {
    let mut total = BTreeMap::new();
    let mut instances = 0;
    for seed in 0..103u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Mostly n <= 5; the last few seeds cover n = 6.
        let n = if seed >= 100 { 6 } else { rng.gen_range(3..=5) };
        for spec in [random::linear_welfare(&mut rng, n), random::decreasing_welfare(&mut rng, n)] {
            let duel = ranking_duel(spec).unwrap();
            instances += 1;
            for extreme in [Extreme::Worst, Extreme::Best] {
                let x = extreme_minimax(duel.game(), extreme, EXPLICIT_CAP).unwrap().strategy;
                assert!(is_minimax(duel.game(), &x), "seed {seed}");
                merge(&mut total, &structure_report(&duel, &x).unwrap());
            }
        }
    }
    let ex = appendix_example::<f64>().unwrap();
    merge(&mut total, &structure_report(&ex.duel, &ex.xstar).unwrap());
    assert!(instances >= 200);
    for name in ["swap", "pair_order", "h_bounds", "interval_cover", "quarter"] {
        let t = &total[name];
        assert!(t.checked > 0, "{name} never ran");
        assert_eq!(t.failed, 0, "{name}: {t:?}");
        assert_eq!(t.passed + t.failed + t.vacuous, t.checked);
    }
}

/// `h_ab` by brute force over the support against the library's tally.
#[test]
fn pairwise_h_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let n = rng.gen_range(2..=5);
        let duel = ranking_duel(random::linear_welfare(&mut rng, n)).unwrap();
        let m = duel.perms().len();
        let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
        let s: f64 = w.iter().sum();
        let x = MixedStrategy::new(w.iter().map(|v| v / s).collect()).unwrap();
        let h = pairwise_h(&duel, &x);
        let p = duel.spec().probs();
        for a in 0..n {
            for b in a + 1..n {
                let direct: f64 = (0..m)
                    .map(|t| {
                        let perm = duel.perm(t);
                        let first = if perm.position(a) < perm.position(b) { a } else { b };
                        x.weights()[t] * p[first]
                    })
                    .sum();
                assert!((h.h(a, b) - direct).abs() < 1e-12);
            }
        }
    }
}

/// The checkers are not vacuous: ranking pages in reverse order of
/// probability breaks the lower bound on `h`.
#[test]
fn reversed_ranking_violates_h_bounds() {
    let duel = ranking_duel(RankingSpec::linear(vec![0.7, 0.2, 0.1], 1.0, 0.0).unwrap()).unwrap();
    let rev = duel.index_of_order(&[2, 1, 0]).unwrap();
    let x = MixedStrategy::pure(duel.perms().len(), rev);
    assert!(!is_minimax(duel.game(), &x));
    assert!(!check_h_bounds(&duel, &x, 0, 2).unwrap().holds());
    let report = structure_report(&duel, &x).unwrap();
    assert!(report["h_bounds"].failed > 0);
}
