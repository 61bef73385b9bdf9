use super::{EngineError, MarginalMatrix};
use crate::instances::Permutation;
use crate::scalar::FloatScalar;

/// Entries below this are treated as zero.
const DUST: f64 = 1e-10;
/// Accepted deviation from double stochasticity.
const INPUT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffTerm<F> {
    pub weight: F,
    pub perm: Permutation,
}

/// Write `q` as a convex combination of permutation matrices.
///
/// Each round takes the perfect matching on the support whose smallest
/// entry is largest, subtracts it with that weight and zeroes dust. A
/// Carathéodory reduction then brings the count to at most `(n-1)² + 1`.
pub fn birkhoff_decompose<F: FloatScalar>(q: &MarginalMatrix<F>) -> Result<Vec<BirkhoffTerm<F>>, EngineError> {
    let deviation = q.deviation();
    if deviation > INPUT_TOL {
        return Err(EngineError::NotDoublyStochastic { deviation, tol: INPUT_TOL });
    }
    let n = q.n();
    let mut r: Vec<Vec<f64>> =
        (0..n).map(|w| (0..n).map(|i| q.get(w, i).as_f64()).map(|v| if v < DUST { 0.0 } else { v }).collect()).collect();
    let mut weights = Vec::new();
    let mut matchings: Vec<Vec<usize>> = Vec::new();
    while r.iter().flatten().any(|&v| v > 0.0) && matchings.len() <= n * n {
        let Some(m) = bottleneck_matching(&r) else { break };
        let w = (0..n).map(|page| r[page][m[page]]).fold(f64::INFINITY, f64::min);
        for page in 0..n {
            let e = &mut r[page][m[page]];
            *e -= w;
            if *e < DUST {
                *e = 0.0;
            }
        }
        weights.push(w);
        matchings.push(m);
    }
    caratheodory(n, &mut weights, &mut matchings);
    let total: f64 = weights.iter().sum();
    Ok(weights
        .into_iter()
        .zip(matchings)
        .map(|(w, m)| {
            let mut order = vec![0; n];
            for (page, &pos) in m.iter().enumerate() {
                order[pos] = page;
            }
            BirkhoffTerm { weight: F::cast_f64(w / total), perm: Permutation::from_order(order).expect("matching is a bijection") }
        })
        .collect())
}

/// Perfect matching page → position maximising the smallest used entry.
fn bottleneck_matching(r: &[Vec<f64>]) -> Option<Vec<usize>> {
    let mut levels: Vec<f64> = r.iter().flatten().copied().filter(|&v| v > 0.0).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    // Largest threshold that still admits a perfect matching.
    let (mut lo, mut hi) = (0usize, levels.len());
    let mut best = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(r, levels[mid]) {
            Some(m) => {
                best = Some(m);
                lo = mid + 1;
            }
            None => hi = mid,
        }
    }
    best
}

fn perfect_matching(r: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let n = r.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(r: &[Vec<f64>], t: f64, page: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for pos in 0..r.len() {
            if r[page][pos] >= t && !seen[pos] {
                seen[pos] = true;
                if owner[pos].is_none_or(|other| augment(r, t, other, seen, owner)) {
                    owner[pos] = Some(page);
                    return true;
                }
            }
        }
        false
    }
    for page in 0..n {
        if !augment(r, threshold, page, &mut vec![false; n], &mut owner) {
            return None;
        }
    }
    let mut m = vec![0; n];
    for (pos, o) in owner.into_iter().enumerate() {
        m[o.expect("perfect")] = pos;
    }
    Some(m)
}

/// Drop terms while more than `(n-1)² + 1` remain: permutation matrices
/// live in an affine space of that dimension, so any larger family has an
/// affine dependency `Σ λ_k P_k = 0, Σ λ_k = 0` along which one weight can be
/// driven to zero without changing the combination.
fn caratheodory(n: usize, weights: &mut Vec<f64>, matchings: &mut Vec<Vec<usize>>) {
    let limit = (n - 1) * (n - 1) + 1;
    while weights.len() > limit {
        let Some(lambda) = affine_dependency(n, matchings) else { return };
        let t = weights
            .iter()
            .zip(&lambda)
            .filter(|(_, &l)| l > 1e-12)
            .map(|(&w, &l)| w / l)
            .fold(f64::INFINITY, f64::min);
        if !t.is_finite() {
            return;
        }
        let mut keep_w = Vec::with_capacity(weights.len());
        let mut keep_m = Vec::with_capacity(weights.len());
        let mut dropped = false;
        for ((w, l), m) in weights.iter().zip(&lambda).zip(matchings.drain(..)) {
            let nw = w - t * l;
            if !dropped && l > &1e-12 && (w / l - t).abs() <= 1e-15 * t.max(1.0) || nw <= 1e-15 {
                dropped = true;
                continue;
            }
            keep_w.push(nw);
            keep_m.push(m);
        }
        *weights = keep_w;
        *matchings = keep_m;
    }
}

/// Nonzero `λ` with `Σ λ_k P_k = 0` and `Σ λ_k = 0`, by Gaussian elimination.
fn affine_dependency(n: usize, matchings: &[Vec<usize>]) -> Option<Vec<f64>> {
    let k = matchings.len();
    let rows = n * n + 1;
    let mut a = vec![vec![0.0f64; k]; rows];
    for (c, m) in matchings.iter().enumerate() {
        for (page, &pos) in m.iter().enumerate() {
            a[page * n + pos][c] = 1.0;
        }
        a[n * n][c] = 1.0;
    }
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..k {
        if row == rows {
            break;
        }
        let p = (row..rows).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())?;
        if a[p][col].abs() < 1e-9 {
            continue;
        }
        a.swap(row, p);
        let d = a[row][col];
        for v in a[row].iter_mut() {
            *v /= d;
        }
        for i in 0..rows {
            if i != row && a[i][col] != 0.0 {
                let f = a[i][col];
                let (src, dst) = if i < row {
                    let (x, y) = a.split_at_mut(row);
                    (&y[0], &mut x[i])
                } else {
                    let (x, y) = a.split_at_mut(i);
                    (&x[row], &mut y[0])
                };
                for (dv, sv) in dst.iter_mut().zip(src) {
                    *dv -= f * sv;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let free = (0..k).find(|c| !pivot_cols.contains(c))?;
    let mut lambda = vec![0.0; k];
    lambda[free] = 1.0;
    for (r, &pc) in pivot_cols.iter().enumerate() {
        lambda[pc] = -a[r][free];
    }
    Some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_one_term() {
        let q = MarginalMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let terms = birkhoff_decompose(&q).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].weight, 1.0);
        assert_eq!(terms[0].perm, Permutation::identity(2));
    }

    #[test]
    fn uniform_three_by_three() {
        let third = 1.0 / 3.0;
        let q = MarginalMatrix::from_rows(vec![vec![third; 3]; 3]).unwrap();
        let terms = birkhoff_decompose(&q).unwrap();
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for w in 0..3 {
            for i in 0..3 {
                let rec: f64 = terms.iter().filter(|t| t.perm.position(w) == i).map(|t| t.weight).sum();
                assert!((rec - third).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dependency_reduction_respects_bound() {
        // All 6 permutations of 3 with equal weight: more than (3-1)²+1 = 5.
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        let mut w = vec![1.0 / 6.0; 6];
        let mut m = perms;
        caratheodory(3, &mut w, &mut m);
        assert!(w.len() <= 5);
        for page in 0..3 {
            for pos in 0..3 {
                let rec: f64 = w.iter().zip(&m).filter(|(_, mm)| mm[page] == pos).map(|(x, _)| x).sum();
                assert!((rec - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let q = MarginalMatrix::with_tolerance(2, vec![0.5, 0.6, 0.5, 0.4], 1.0).unwrap();
        assert!(birkhoff_decompose(&q).is_err());
    }
}
