use duelbench::duel::{DuelInstance, MixedStrategy, Mode};
use duelbench::instances::{random, ranking_duel, RankingSpec};
use duelbench::minimax::{
    birkhoff_decompose, extreme_minimax, game_value, is_minimax, matrix_game_value, price_of_competition,
    price_of_competition_cost, ranking_minimax_marginal, ranking_price_of_competition, EngineError, Extreme,
    MarginalMatrix, EXPLICIT_CAP,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Value of a 2×k game from its upper envelope: the optimum of the concave
/// piecewise-linear `min_j (q a_1j + (1-q) a_2j)` sits at an end point or
/// where two lines cross.
fn two_row_value(a: &[Vec<f64>]) -> f64 {
    let k = a[0].len();
    let env = |q: f64| (0..k).map(|j| q * a[0][j] + (1.0 - q) * a[1][j]).fold(f64::INFINITY, f64::min);
    let mut candidates = vec![0.0, 1.0];
    for i in 0..k {
        for j in i + 1..k {
            // q (a0i - a1i) + a1i = q (a0j - a1j) + a1j
            let denom = (a[0][i] - a[1][i]) - (a[0][j] - a[1][j]);
            if denom.abs() > 1e-14 {
                let q = (a[1][j] - a[1][i]) / denom;
                if (0.0..=1.0).contains(&q) {
                    candidates.push(q);
                }
            }
        }
    }
    candidates.into_iter().map(env).fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn asymmetric_two_row_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let k = rng.gen_range(1..7);
        let a: Vec<Vec<f64>> = (0..2).map(|_| (0..k).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect();
        let (v, x, y) = matrix_game_value(&a).unwrap();
        assert!((v - two_row_value(&a)).abs() < 1e-9, "{v} vs {}", two_row_value(&a));
        // Both strategies guarantee the value.
        for j in 0..k {
            assert!(x[0] * a[0][j] + x[1] * a[1][j] >= v - 1e-9);
        }
        for row in &a {
            let payoff: f64 = row.iter().zip(&y).map(|(p, q)| p * q).sum();
            assert!(payoff <= v + 1e-9);
        }
    }
}

#[test]
fn duels_have_value_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for i in 0..40 {
        let n = rng.gen_range(1..=5);
        let spec = match i % 3 {
            0 => random::linear_welfare(&mut rng, n),
            1 => random::arbitrary_welfare(&mut rng, n),
            _ => random::linear_cost(&mut rng, n),
        };
        let duel = ranking_duel(spec).unwrap();
        assert!(game_value(duel.game()).unwrap().abs() < 1e-8);
    }
}

fn sample_spec(rng: &mut ChaCha8Rng, i: usize, n: usize) -> RankingSpec<f64> {
    match i % 3 {
        0 => random::linear_welfare(rng, n),
        1 => random::decreasing_welfare(rng, n),
        _ => random::linear_cost(rng, n),
    }
}

#[test]
fn marginal_path_matches_explicit_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for i in 0..30 {
        let n = rng.gen_range(2..=5);
        let spec = sample_spec(&mut rng, i, n);
        let duel = ranking_duel(spec.clone()).unwrap();
        for extreme in [Extreme::Worst, Extreme::Best] {
            let explicit = extreme_minimax(duel.game(), extreme, EXPLICIT_CAP).unwrap().value;
            let marginal = ranking_minimax_marginal(&spec, extreme).unwrap().value;
            assert!((explicit - marginal).abs() < 1e-6, "{i} {extreme:?}: {explicit} vs {marginal}");
        }
        let poc = match spec.mode() {
            Mode::Welfare => price_of_competition(duel.game()).unwrap(),
            Mode::Cost => price_of_competition_cost(duel.game()).unwrap(),
        };
        assert!((poc - ranking_price_of_competition(&spec).unwrap()).abs() < 1e-6);
    }
}

/// A marginal optimum, decomposed, is a minimax strategy of the explicit
/// game with the same welfare.
#[test]
fn decomposed_marginals_are_minimax() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..20 {
        let n = rng.gen_range(2..=5);
        let spec = random::linear_welfare(&mut rng, n);
        let duel = ranking_duel(spec.clone()).unwrap();
        let out = ranking_minimax_marginal(&spec, Extreme::Worst).unwrap();
        let terms = birkhoff_decompose(&out.q).unwrap();
        let mut w = vec![0.0; duel.perms().len()];
        for t in &terms {
            w[duel.index_of(&t.perm)] += t.weight;
        }
        let x = MixedStrategy::from_solver(w).unwrap();
        assert!(duel.game().utility_against_pure(&x).iter().all(|&u| u >= -1e-7));
        assert!((duel.game().social_welfare(&x).unwrap() - out.value).abs() < 1e-7);
    }
}

/// Sinkhorn balancing of a random positive matrix.
fn random_doubly_stochastic(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0.01..1.0)).collect()).collect();
    for _ in 0..10_000 {
        for row in m.iter_mut() {
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= s);
        }
        for j in 0..n {
            let s: f64 = m.iter().map(|r| r[j]).sum();
            m.iter_mut().for_each(|r| r[j] /= s);
        }
        let worst = m.iter().map(|r| (r.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
        if worst < 1e-14 {
            break;
        }
    }
    m
}

/// Sparse case: a mixture of a few random permutation matrices.
fn random_mixture(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let terms = rng.gen_range(1..=4);
    let w: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut m = vec![vec![0.0; n]; n];
    for wt in w {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        for (pos, &page) in order.iter().enumerate() {
            m[page][pos] += wt / total;
        }
    }
    m
}

#[test]
fn birkhoff_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for i in 0..100 {
        let n = rng.gen_range(1..=7);
        let rows = if i % 2 == 0 { random_doubly_stochastic(&mut rng, n) } else { random_mixture(&mut rng, n) };
        let q = MarginalMatrix::from_rows(rows.clone()).unwrap();
        let terms = birkhoff_decompose(&q).unwrap();
        assert!(terms.len() <= (n - 1) * (n - 1) + 1, "{} terms for n={n}", terms.len());
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        assert!((total - 1.0).abs() < 1e-9);
        let mut rebuilt = vec![vec![0.0; n]; n];
        for t in &terms {
            assert!(t.weight > 0.0);
            for page in 0..n {
                rebuilt[page][t.perm.position(page)] += t.weight;
            }
        }
        for (a, b) in rows.iter().flatten().zip(rebuilt.iter().flatten()) {
            assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
        }
    }
}

#[test]
fn marginal_path_refuses_what_it_cannot_handle() {
    let spec = RankingSpec::new(vec![0.5, 0.5], duelbench::instances::Valuation::Explicit(vec![0.0, 1.0]), Mode::Welfare).unwrap();
    assert!(matches!(ranking_minimax_marginal(&spec, Extreme::Worst), Err(EngineError::NotMonotone)));
    assert!(MarginalMatrix::from_rows(vec![vec![0.6, 0.5], vec![0.4, 0.5]]).is_err());
}

#[test]
fn marginal_path_scales_past_the_catalog() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let spec = random::linear_welfare(&mut rng, 12);
    let poc = ranking_price_of_competition(&spec).unwrap();
    assert!(poc > 0.6 && poc <= 1.0 + 1e-12, "{poc}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Extreme strategies are minimax, ordered, and bracket every pure
    /// minimax strategy.
    #[test]
    fn extremes_bracket_the_polytope(seed in any::<u64>(), n in 1usize..4, m in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::probabilities(&mut rng, n);
        let v: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| f64::from(rng.gen_range(0..4u8))).collect()).collect();
        let g = DuelInstance::new(p, v, Mode::Welfare).unwrap();
        let worst = extreme_minimax(&g, Extreme::Worst, EXPLICIT_CAP).unwrap();
        let best = extreme_minimax(&g, Extreme::Best, EXPLICIT_CAP).unwrap();
        prop_assert!(is_minimax(&g, &worst.strategy));
        prop_assert!(is_minimax(&g, &best.strategy));
        prop_assert!(worst.value <= best.value + 1e-9);
        for s in 0..m {
            let pure = MixedStrategy::pure(m, s);
            if is_minimax(&g, &pure) {
                prop_assert!(g.pure_value(s) >= worst.value - 1e-9);
                prop_assert!(g.pure_value(s) <= best.value + 1e-9);
            }
        }
    }
}
