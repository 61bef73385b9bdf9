use duelbench::duel::{DuelInstance, MixedStrategy, Mode};
use duelbench::instances::{
    appendix_example, catalan, compression_duel_epsilon, enumerate_bsts, enumerate_leaf_trees, footnote_example, random,
    ranking_duel, RankingSpec, Valuation,
};
use duelbench::Strategy;
use proptest::prelude::*;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_strategy(rng: &mut impl Rng, m: usize) -> Strategy {
    let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
    let s: f64 = w.iter().sum();
    MixedStrategy::new(w.into_iter().map(|v| v / s).collect()).unwrap()
}

#[test]
fn utility_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (n, m) = (4, 5);
    let p = random::probabilities(&mut rng, n);
    // Values on a coarse grid so that ties occur.
    let v: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| f64::from(rng.gen_range(0..4u8))).collect()).collect();
    let g = DuelInstance::new(p.clone(), v.clone(), Mode::Welfare).unwrap();
    let x = random_strategy(&mut rng, m);
    let y = random_strategy(&mut rng, m);
    let exact = g.utility(&x, &y);
    let (dx, dy, dw) =
        (WeightedIndex::new(x.weights()).unwrap(), WeightedIndex::new(y.weights()).unwrap(), WeightedIndex::new(&p).unwrap());
    let samples = 1_000_000;
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..samples {
        let (s, t, w) = (dx.sample(&mut rng), dy.sample(&mut rng), dw.sample(&mut rng));
        let u = match v[s][w].partial_cmp(&v[t][w]).unwrap() {
            std::cmp::Ordering::Greater => 1.0,
            std::cmp::Ordering::Less => -1.0,
            std::cmp::Ordering::Equal => 0.0,
        };
        sum += u;
        sq += u * u;
    }
    let mean = sum / samples as f64;
    let se = ((sq / samples as f64 - mean * mean) / samples as f64).sqrt();
    assert!((mean - exact).abs() <= 3.0 * se, "exact {exact}, sampled {mean} ± {se}");
}

#[test]
fn appendix_rows_and_welfare() {
    let ex = appendix_example::<f64>().unwrap();
    let g = ex.duel.game();
    let acb = ex.duel.index_of_order(&[0, 2, 1]).unwrap();
    let m = g.strategy_count();
    let u = g.utility(&MixedStrategy::pure(m, acb), &MixedStrategy::pure(m, ex.opt));
    assert!((u + 0.2).abs() < 1e-12, "{u}");
    assert!(g.utility_against_pure(&ex.xstar).iter().all(|u| u.abs() < 1e-12));
    assert!((g.social_welfare(&ex.xstar).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(g.optimal_welfare().unwrap().1, ex.opt);
    assert!((g.optimal_welfare().unwrap().0 - 1.2).abs() < 1e-12);
}

#[test]
fn appendix_is_exact_in_rationals() {
    let ex = appendix_example::<duelbench::Rational>().unwrap();
    let g = ex.duel.game();
    assert!(g.utility_against_pure(&ex.xstar).iter().all(|u| *u == duelbench::Rational::from_integer(0.into())));
    let opt = g.optimal_welfare().unwrap().0;
    assert_eq!(opt, duelbench::Rational::new(6.into(), 5.into()));
}

#[test]
fn footnote_utility() {
    let ex = footnote_example::<f64>().unwrap();
    let g = ex.duel.game();
    let m = g.strategy_count();
    let u = g.utility(&MixedStrategy::pure(m, ex.planner), &MixedStrategy::pure(m, ex.challenger));
    assert!((u + 0.30).abs() < 1e-12);
}

/// For `f(i) = n - i` a page's value counts the pages ranked below it, so
/// welfare is a sum over pairs.
#[test]
fn pairwise_form_of_welfare() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in 2..=5 {
        let p = random::probabilities(&mut rng, n);
        let duel = ranking_duel(RankingSpec::linear(p, 1.0, 0.0).unwrap()).unwrap();
        let x = random_strategy(&mut rng, duel.perms().len());
        let sw = duel.game().social_welfare(&x).unwrap();
        let probs = duel.spec().probs();
        let mut pairwise = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                let before: f64 =
                    x.nonzero().filter(|(s, _)| duel.perm(*s).position(a) < duel.perm(*s).position(b)).map(|(_, w)| w).sum();
                pairwise += probs[a] * before + probs[b] * (1.0 - before);
            }
        }
        assert!((sw - pairwise).abs() < 1e-12, "n={n}: {sw} vs {pairwise}");
    }
}

#[test]
fn optimum_is_sorted_assignment() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let n = rng.gen_range(1..=5);
        let spec = random::decreasing_welfare(&mut rng, n);
        let duel = ranking_duel(spec.clone()).unwrap();
        let g = duel.game();
        let scan = (0..g.strategy_count()).map(|s| g.pure_value(s)).fold(f64::MIN, f64::max);
        let formula: f64 = spec.probs().iter().zip(spec.positions()).map(|(p, f)| p * f).sum();
        assert!((g.optimal_welfare().unwrap().0 - scan).abs() < 1e-12);
        assert!((scan - formula).abs() < 1e-12);
    }
}

#[test]
fn affine_valuations_only_raise_the_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..50 {
        let n = rng.gen_range(2..=5);
        let p = random::probabilities(&mut rng, n);
        let (c, d) = (rng.gen_range(0.1..3.0), rng.gen_range(0.0..2.0));
        let base = ranking_duel(RankingSpec::linear(p.clone(), 1.0, 0.0).unwrap()).unwrap();
        let affine = ranking_duel(RankingSpec::linear(p, c, d).unwrap()).unwrap();
        let x = random_strategy(&mut rng, base.perms().len());
        let r0 = base.game().social_welfare(&x).unwrap() / base.game().optimal_welfare().unwrap().0;
        let r1 = affine.game().social_welfare(&x).unwrap() / affine.game().optimal_welfare().unwrap().0;
        assert!(r0 <= r1 + 1e-12, "{r0} > {r1}");
    }
}

#[test]
fn cost_mode_reverses_every_comparison() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let p = random::probabilities(&mut rng, 3);
    let v: Vec<Vec<f64>> = (0..4).map(|_| (0..3).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
    let w = DuelInstance::new(p.clone(), v.clone(), Mode::Welfare).unwrap();
    let c = DuelInstance::new(p, v, Mode::Cost).unwrap();
    let x = random_strategy(&mut rng, 4);
    let y = random_strategy(&mut rng, 4);
    assert!((w.utility(&x, &y) + c.utility(&x, &y)).abs() < 1e-15);
    assert!(c.social_welfare(&x).is_err());
    assert!(w.social_cost(&x).is_err());
}

#[test]
fn explicit_valuations_keep_their_order() {
    let spec = RankingSpec::new(vec![0.2, 0.5, 0.3], Valuation::Explicit(vec![3.0, 1.0, 0.0]), Mode::Welfare).unwrap();
    assert_eq!(spec.probs(), &[0.5, 0.3, 0.2]);
    assert_eq!(spec.original_index(0), 1);
    assert_eq!(spec.positions(), &[3.0, 1.0, 0.0]);
}

#[test]
fn catalog_sizes() {
    for n in 1..=6 {
        assert_eq!(enumerate_bsts(n).unwrap().len() as u128, catalan(n));
    }
    let fact = |n: u128| (1..=n).product::<u128>();
    for n in 1..=5usize {
        let trees = enumerate_leaf_trees(n).unwrap();
        assert_eq!(trees.len() as u128, catalan(n - 1) * fact(n as u128), "n={n}");
    }
    assert_eq!(enumerate_leaf_trees(4).unwrap().len(), 120);
    assert_eq!(enumerate_bsts(3).unwrap().len(), 5);
    assert!(enumerate_bsts(40).is_err());
}

#[test]
fn compression_welfare_formulas() {
    for eps in [0.5f64, 0.1, 0.01] {
        let cd = compression_duel_epsilon(eps).unwrap();
        let g = &cd.game;
        assert!((g.pure_value(cd.xstar_index) - eps / 16.0).abs() < 1e-15);
        assert!((g.pure_value(cd.opt_index) - (16.0 + eps) / 64.0).abs() < 1e-15);
        let x = MixedStrategy::pure(g.strategy_count(), cd.xstar_index);
        assert!(g.utility_against_pure(&x).iter().all(|&u| u >= 0.0));
    }
    assert!(compression_duel_epsilon(0.0).is_err());
    assert!(compression_duel_epsilon(1.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn utility_is_antisymmetric(seed in any::<u64>(), n in 1usize..5, m in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::probabilities(&mut rng, n);
        let v: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| f64::from(rng.gen_range(0..3u8))).collect()).collect();
        let g = DuelInstance::new(p, v, Mode::Welfare).unwrap();
        let x = random_strategy(&mut rng, m);
        let y = random_strategy(&mut rng, m);
        prop_assert_eq!(g.utility(&x, &y), -g.utility(&y, &x));
        prop_assert!(g.utility(&x, &x).abs() < 1e-15);
        prop_assert!(g.utility(&x, &y).abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn welfare_is_linear_in_the_strategy(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let duel = ranking_duel(random::linear_welfare(&mut rng, n)).unwrap();
        let g = duel.game();
        let x = random_strategy(&mut rng, g.strategy_count());
        let direct = g.social_welfare(&x).unwrap();
        let mixed: f64 = x.nonzero().map(|(s, w)| w * g.pure_value(s)).sum();
        prop_assert!((direct - mixed).abs() < 1e-12);
    }
}
