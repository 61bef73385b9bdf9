//! Product-form basis inverse: `B⁻¹ = E_t ⋯ E_1`, each `E` an identity
//! matrix with one column replaced. Rebuilt from scratch periodically with a
//! sparsity-minded pivot order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::scalar::FloatScalar;

#[derive(Debug, Clone)]
struct Eta<F> {
    row: usize,
    /// `1/α_r`.
    diag: F,
    /// `(i, -α_i/α_r)` for `i != r`.
    off: Vec<(usize, F)>,
}

#[derive(Debug, Clone)]
pub(super) struct EtaFile<F> {
    etas: Vec<Eta<F>>,
}

/// Some basis columns were linearly dependent on the others. `partial`
/// inverts the independent ones, whose rows are in `assigned`; dependent
/// columns carry `usize::MAX`. Unit columns of the uncovered rows complete
/// the basis without further etas.
#[derive(Debug)]
pub(super) struct Singular<F> {
    pub(super) partial: EtaFile<F>,
    pub(super) assigned: Vec<usize>,
}

impl<F: FloatScalar> EtaFile<F> {
    pub(super) fn identity() -> Self {
        Self { etas: Vec::new() }
    }

    pub(super) fn len(&self) -> usize {
        self.etas.len()
    }

    /// `v ← B⁻¹ v`.
    pub(super) fn ftran(&self, v: &mut [F]) {
        for e in &self.etas {
            let t = v[e.row];
            if t != F::zero() {
                v[e.row] = t * e.diag;
                for &(i, h) in &e.off {
                    v[i] += h * t;
                }
            }
        }
    }

    /// `uᵀ ← uᵀ B⁻¹`.
    pub(super) fn btran(&self, u: &mut [F]) {
        for e in self.etas.iter().rev() {
            let mut t = u[e.row] * e.diag;
            for &(i, h) in &e.off {
                t += u[i] * h;
            }
            u[e.row] = t;
        }
    }

    /// Append the eta for replacing basis position `r` by a column whose
    /// transformed vector is `alpha`.
    pub(super) fn push(&mut self, r: usize, alpha: &[F]) {
        let diag = F::one() / alpha[r];
        let off = alpha
            .iter()
            .enumerate()
            .filter(|&(i, &a)| i != r && a != F::zero())
            .map(|(i, &a)| (i, -a * diag))
            .collect();
        self.etas.push(Eta { row: r, diag, off });
    }

    /// Factor the basis given by `cols` (sparse columns). Returns, for each
    /// input column, the row (basis position) it was pivoted into.
    ///
    /// Columns are taken in order of fewest entries in still-unpivoted rows,
    /// and each pivots on the acceptable row shared by the fewest remaining
    /// columns.
    pub(super) fn factor(m: usize, cols: &[(&[usize], &[F])]) -> Result<(Self, Vec<usize>), Singular<F>> {
        let mut file = Self::identity();
        let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (c, (idx, _)) in cols.iter().enumerate() {
            for &i in idx.iter() {
                row_cols[i].push(c);
            }
        }
        let mut row_done = vec![false; m];
        let mut col_done = vec![false; cols.len()];
        let mut row_count: Vec<usize> = row_cols.iter().map(Vec::len).collect();
        let mut col_count: Vec<usize> = cols.iter().map(|(idx, _)| idx.len()).collect();
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            col_count.iter().enumerate().map(|(c, &n)| Reverse((n, c))).collect();
        let mut assigned = vec![usize::MAX; cols.len()];
        let mut v = vec![F::zero(); m];
        let mut mark = vec![false; m];
        let mut touched: Vec<usize> = Vec::new();
        let threshold = F::cast_f64(0.01);
        let tiny = F::cast_f64(1e-11);
        while let Some(Reverse((n, c))) = heap.pop() {
            if col_done[c] || n != col_count[c] {
                continue;
            }
            let (idx, vals) = cols[c];
            for &i in &touched {
                v[i] = F::zero();
                mark[i] = false;
            }
            touched.clear();
            for (&i, &a) in idx.iter().zip(vals.iter()) {
                v[i] = a;
                mark[i] = true;
                touched.push(i);
            }
            // Only etas whose row is nonzero in `v` act, so a column that
            // touches no pivoted row needs no transformation at all.
            if idx.iter().any(|&i| row_done[i]) {
                for e in &file.etas {
                    let t = v[e.row];
                    if t != F::zero() {
                        v[e.row] = t * e.diag;
                        for &(i, h) in &e.off {
                            if !mark[i] {
                                mark[i] = true;
                                touched.push(i);
                            }
                            v[i] += h * t;
                        }
                    }
                }
            }
            let big = touched.iter().filter(|&&i| !row_done[i]).fold(F::zero(), |acc, &i| acc.max(v[i].abs()));
            if big < tiny {
                // Dependent on the columns already pivoted: leave it out and
                // let the caller fill the row that stays uncovered.
                col_done[c] = true;
                continue;
            }
            let r = touched
                .iter()
                .copied()
                .filter(|&i| !row_done[i] && v[i].abs() >= threshold * big)
                .min_by(|&a, &b| {
                    row_count[a].cmp(&row_count[b]).then(v[b].abs().partial_cmp(&v[a].abs()).unwrap()).then(a.cmp(&b))
                })
                .expect("some row reaches the maximum");
            let unit = v[r] == F::one() && touched.iter().all(|&i| i == r || v[i] == F::zero());
            if !unit {
                let diag = F::one() / v[r];
                let off = touched
                    .iter()
                    .filter(|&&i| i != r && v[i] != F::zero())
                    .map(|&i| (i, -v[i] * diag))
                    .collect();
                file.etas.push(Eta { row: r, diag, off });
            }
            col_done[c] = true;
            assigned[c] = r;
            row_done[r] = true;
            for &i in idx.iter() {
                row_count[i] -= 1;
            }
            for &c2 in &row_cols[r] {
                if !col_done[c2] {
                    col_count[c2] -= 1;
                    heap.push(Reverse((col_count[c2], c2)));
                }
            }
        }
        if assigned.contains(&usize::MAX) {
            return Err(Singular { partial: file, assigned });
        }
        Ok((file, assigned))
    }
}
