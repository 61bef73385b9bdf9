use duelbench::lp::{
    solve, verify_certificate, DualCertificate, LinearProgram, LpBuilder, LpStatus, Relation, Sense,
};
use duelbench::{Lp, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Solves the square system `m x = r` by Gaussian elimination with partial
/// pivoting; `None` when it is (numerically) singular.
fn gauss(mut m: Vec<Vec<f64>>, mut r: Vec<f64>) -> Option<Vec<f64>> {
    let n = r.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())?;
        if m[p][c].abs() < 1e-10 {
            return None;
        }
        m.swap(c, p);
        r.swap(c, p);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..n {
                m[i][j] -= f * m[c][j];
            }
            r[i] -= f * r[c];
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|j| m[c][j] * x[j]).sum();
        x[c] = (r[c] - s) / m[c][c];
    }
    Some(x)
}

/// Best objective over all basic feasible points of `a x (rel) b, x >= 0`:
/// every choice of `n` tight constraints among the rows and the bounds.
fn vertex_optimum(sense: Sense, c: &[f64], a: &[Vec<f64>], rel: Relation, b: &[f64]) -> Option<f64> {
    let (m, n) = (a.len(), c.len());
    let mut best: Option<f64> = None;
    let all: Vec<usize> = (0..m + n).collect();
    for tight in itertools::Itertools::combinations(all.iter().copied(), n) {
        let mut sys = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for &t in &tight {
            if t < m {
                sys.push(a[t].clone());
                rhs.push(b[t]);
            } else {
                let mut e = vec![0.0; n];
                e[t - m] = 1.0;
                sys.push(e);
                rhs.push(0.0);
            }
        }
        let Some(x) = gauss(sys, rhs) else { continue };
        let feasible = x.iter().all(|&v| v >= -1e-9)
            && a.iter().zip(b).all(|(row, &bi)| {
                let act: f64 = row.iter().zip(&x).map(|(p, q)| p * q).sum();
                match rel {
                    Relation::Le => act <= bi + 1e-9,
                    Relation::Ge => act >= bi - 1e-9,
                    Relation::Eq => (act - bi).abs() <= 1e-9,
                }
            });
        if feasible {
            let obj: f64 = c.iter().zip(&x).map(|(p, q)| p * q).sum();
            best = Some(match (best, sense) {
                (None, _) => obj,
                (Some(v), Sense::Maximize) => v.max(obj),
                (Some(v), Sense::Minimize) => v.min(obj),
            });
        }
    }
    best
}

/// `max c x, a x <= b` with positive data (bounded, 0 feasible) or
/// `min c x, a x >= b` with positive data (bounded below, feasible).
fn random_lp(rng: &mut ChaCha8Rng, rows: usize, vars: usize, sense: Sense) -> (Vec<f64>, Vec<Vec<f64>>, Relation, Vec<f64>) {
    let c: Vec<f64> = (0..vars).map(|_| rng.gen_range(0.1..2.0)).collect();
    let a: Vec<Vec<f64>> = (0..rows).map(|_| (0..vars).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
    let b: Vec<f64> = (0..rows).map(|_| rng.gen_range(0.5..3.0)).collect();
    let rel = if sense == Sense::Maximize { Relation::Le } else { Relation::Ge };
    (c, a, rel, b)
}

fn dense(sense: Sense, c: &[f64], a: &[Vec<f64>], rel: Relation, b: &[f64]) -> Lp {
    LinearProgram::from_dense(sense, c.to_vec(), a.to_vec(), vec![rel; a.len()], b.to_vec()).unwrap()
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..60 {
        let sense = if round % 2 == 0 { Sense::Maximize } else { Sense::Minimize };
        let (c, a, rel, b) = random_lp(&mut rng, 6, 8, sense);
        let lp = dense(sense, &c, &a, rel, &b);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        let oracle = vertex_optimum(sense, &c, &a, rel, &b).expect("feasible by construction");
        assert!((sol.objective - oracle).abs() <= 1e-7 * oracle.abs().max(1.0), "round {round}: {} vs {oracle}", sol.objective);
    }
}

#[test]
fn strong_duality_and_dual_of_dual() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for round in 0..40 {
        let sense = if round % 2 == 0 { Sense::Maximize } else { Sense::Minimize };
        let (c, a, rel, b) = random_lp(&mut rng, 5, 7, sense);
        let lp = dense(sense, &c, &a, rel, &b);
        let primal = solve(&lp).unwrap().objective;
        let dual = solve(&lp.dual()).unwrap().objective;
        let again = solve(&lp.dual().dual()).unwrap().objective;
        assert!((primal - dual).abs() < 1e-8, "{primal} vs {dual}");
        assert!((primal - again).abs() < 1e-8, "{primal} vs {again}");
    }
}

#[test]
fn optimal_duals_certify_the_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for round in 0..40 {
        let sense = if round % 2 == 0 { Sense::Maximize } else { Sense::Minimize };
        let (c, a, rel, b) = random_lp(&mut rng, 6, 5, sense);
        let lp = dense(sense, &c, &a, rel, &b);
        let sol = solve(&lp).unwrap();
        let report = verify_certificate(&lp, &DualCertificate { y: sol.y.clone(), claimed_bound: sol.objective });
        assert!(report.valid, "round {round}: {report:?}");
        // A bound past the optimum must be refused.
        let bump = if sense == Sense::Maximize { -1e-3 } else { 1e-3 };
        let report = verify_certificate(&lp, &DualCertificate { y: sol.y, claimed_bound: sol.objective + bump });
        assert!(!report.valid);
    }
}

#[test]
fn exact_certificate_on_rational_lp() {
    // min x + y, x + 2y >= 2, 3x + y >= 3: optimum 7/5 at (4/5, 3/5) with
    // duals (2/5, 1/5).
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let mut b: LpBuilder<Rational> = LpBuilder::new(Sense::Minimize);
    let x = b.nonneg(q(1, 1));
    let y = b.nonneg(q(1, 1));
    b.row(vec![(x, q(1, 1)), (y, q(2, 1))], Relation::Ge, q(2, 1));
    b.row(vec![(x, q(3, 1)), (y, q(1, 1))], Relation::Ge, q(3, 1));
    let lp = b.build().unwrap();
    let ok = verify_certificate(&lp, &DualCertificate { y: vec![q(2, 5), q(1, 5)], claimed_bound: q(7, 5) });
    assert!(ok.valid);
    let bad = verify_certificate(&lp, &DualCertificate { y: vec![q(2, 5), q(1, 5) + q(1, 1_000_000)], claimed_bound: q(7, 5) });
    assert!(!bad.feasible, "exact arithmetic sees a one-in-a-million violation");
    // The float solver agrees.
    let sol = solve(&lp.convert::<f64>()).unwrap();
    assert!((sol.objective - 1.4).abs() < 1e-12);
}

#[test]
fn single_precision_agrees_with_double() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let (c, a, rel, b) = random_lp(&mut rng, 4, 4, Sense::Maximize);
    let lp = dense(Sense::Maximize, &c, &a, rel, &b);
    let d = solve(&lp).unwrap().objective;
    let s = solve(&lp.convert::<f32>()).unwrap().objective;
    assert!((f64::from(s) - d).abs() < 1e-3 * d.abs().max(1.0), "{s} vs {d}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The optimum is feasible and no worse than any sampled feasible point.
    #[test]
    fn optimum_dominates_feasible_samples(seed in any::<u64>(), rows in 1usize..6, vars in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, a, rel, b) = random_lp(&mut rng, rows, vars, Sense::Maximize);
        let lp = dense(Sense::Maximize, &c, &a, rel, &b);
        let sol = solve(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(lp.primal_residual(&sol.x) <= 1e-9);
        for _ in 0..20 {
            let dir: Vec<f64> = (0..vars).map(|_| rng.gen_range(0.0..1.0)).collect();
            // Largest feasible multiple of `dir`.
            let t = a.iter().zip(&b).map(|(row, &bi)| {
                let act: f64 = row.iter().zip(&dir).map(|(p, q)| p * q).sum();
                if act > 0.0 { bi / act } else { f64::INFINITY }
            }).fold(f64::INFINITY, f64::min);
            let x: Vec<f64> = dir.iter().map(|d| d * t).collect();
            prop_assert!(lp.objective_value(&x) <= sol.objective + 1e-9);
        }
    }
}
