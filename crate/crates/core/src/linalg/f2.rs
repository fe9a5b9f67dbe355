use std::collections::BTreeSet;

use super::SparseIntegerMatrix;

/// Once the active part of the matrix is this dense (nonzeros per bit of a
/// packed dense copy), elimination continues on packed rows.
const DENSE_SWITCH: usize = 64;

/// Rank over the two-element field.
pub fn rank_mod2(m: &SparseIntegerMatrix) -> usize {
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); m.rows()];
    for &(r, c, x) in m.entries() {
        if x & 1 == 1 {
            rows[r].push(c as u32);
        }
    }
    rank_of_rows(rows, m.cols())
}

/// Rank over the two-element field of a matrix given as rows of sorted
/// column indices.
pub fn rank_of_rows(rows: Vec<Vec<u32>>, cols: usize) -> usize {
    rank_with_switch(rows, cols, DENSE_SWITCH)
}

fn rank_with_switch(rows: Vec<Vec<u32>>, cols: usize, switch: usize) -> usize {
    let mut e = SparseF2::new(rows, cols);
    let mut rank = 0;
    while let Some(&(_, r)) = e.by_len.first() {
        if e.should_densify(switch) {
            return rank + e.into_dense().rank();
        }
        let r = r as usize;
        let c = *e.rows[r]
            .iter()
            .min_by_key(|&&c| e.col_count[c as usize])
            .expect("queued rows are nonempty");
        e.pivot(r, c as usize);
        rank += 1;
    }
    rank
}

struct SparseF2 {
    rows: Vec<Vec<u32>>,
    alive: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<usize>,
    by_len: BTreeSet<(usize, u32)>,
    nnz: usize,
    live_cols: usize,
}

impl SparseF2 {
    fn new(rows: Vec<Vec<u32>>, cols: usize) -> Self {
        let mut col_rows = vec![Vec::new(); cols];
        let mut col_count = vec![0; cols];
        let mut nnz = 0;
        for (r, row) in rows.iter().enumerate() {
            for &c in row {
                col_rows[c as usize].push(r as u32);
                col_count[c as usize] += 1;
            }
            nnz += row.len();
        }
        let by_len = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| (r.len(), i as u32))
            .collect();
        let live_cols = col_count.iter().filter(|&&n| n > 0).count();
        Self {
            alive: vec![true; rows.len()],
            rows,
            col_rows,
            col_count,
            by_len,
            nnz,
            live_cols,
        }
    }

    fn should_densify(&self, switch: usize) -> bool {
        let cells = self.by_len.len() * self.live_cols;
        cells > 0 && self.nnz.saturating_mul(switch) >= cells
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let pivot = std::mem::take(&mut self.rows[r]);
        self.by_len.remove(&(pivot.len(), r as u32));
        self.alive[r] = false;
        self.nnz -= pivot.len();
        for r2 in std::mem::take(&mut self.col_rows[c]) {
            let r2 = r2 as usize;
            if !self.alive[r2] || self.rows[r2].binary_search(&(c as u32)).is_err() {
                continue;
            }
            let old = std::mem::take(&mut self.rows[r2]);
            self.by_len.remove(&(old.len(), r2 as u32));
            let merged = self.xor(&old, &pivot, r2);
            self.nnz = self.nnz + merged.len() - old.len();
            if !merged.is_empty() {
                self.by_len.insert((merged.len(), r2 as u32));
            }
            self.rows[r2] = merged;
        }
        for &cc in &pivot {
            self.dec(cc as usize);
        }
    }

    fn dec(&mut self, c: usize) {
        self.col_count[c] -= 1;
        if self.col_count[c] == 0 {
            self.live_cols -= 1;
        }
    }

    fn xor(&mut self, row: &[u32], pivot: &[u32], r: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(row.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < pivot.len() {
            let ci = row.get(i).copied().unwrap_or(u32::MAX);
            let cj = pivot.get(j).copied().unwrap_or(u32::MAX);
            if ci < cj {
                out.push(ci);
                i += 1;
            } else if cj < ci {
                if self.col_count[cj as usize] == 0 {
                    self.live_cols += 1;
                }
                self.col_count[cj as usize] += 1;
                self.col_rows[cj as usize].push(r as u32);
                out.push(cj);
                j += 1;
            } else {
                self.dec(ci as usize);
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn into_dense(self) -> DenseF2 {
        let mut cols: Vec<u32> = self.by_len.iter().flat_map(|&(_, r)| self.rows[r as usize].iter().copied()).collect();
        cols.sort_unstable();
        cols.dedup();
        let words = cols.len().div_ceil(64);
        let rows = self
            .by_len
            .iter()
            .map(|&(_, r)| {
                let mut bits = vec![0u64; words];
                for c in &self.rows[r as usize] {
                    let k = cols.binary_search(c).unwrap();
                    bits[k / 64] |= 1 << (k % 64);
                }
                bits
            })
            .collect();
        DenseF2 {
            rows,
            cols: cols.len(),
        }
    }
}

/// Bit-packed rows.
pub(crate) struct DenseF2 {
    rows: Vec<Vec<u64>>,
    cols: usize,
}

impl DenseF2 {
    pub(crate) fn rank(mut self) -> usize {
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, b) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..self.rows.len()).find(|&i| self.rows[i][w] & b != 0) else {
                continue;
            };
            self.rows.swap(rank, p);
            let (head, tail) = self.rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            for row in tail.iter_mut() {
                if row[w] & b != 0 {
                    for (x, y) in row[w..].iter_mut().zip(&pivot[w..]) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(rows: &[Vec<i64>]) -> usize {
        rank_mod2(&SparseIntegerMatrix::from_dense(rows))
    }

    #[test]
    fn small_cases() {
        assert_eq!(rank(&[vec![2]]), 0);
        assert_eq!(rank(&[vec![1, 1], vec![1, 1]]), 1);
        assert_eq!(rank(&[vec![1, 0], vec![0, 2]]), 1);
        assert_eq!(rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]), 2);
    }

    #[test]
    fn sparse_and_packed_paths_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (n, m) = (rng.gen_range(1..40), rng.gen_range(1..140));
            let density = rng.gen_range(0.02..0.6);
            let rows: Vec<Vec<u32>> = (0..n)
                .map(|_| (0..m).filter(|_| rng.gen_bool(density)).collect())
                .collect();
            let sparse = rank_with_switch(rows.clone(), m as usize, 0);
            let packed = rank_with_switch(rows.clone(), m as usize, usize::MAX);
            assert_eq!(sparse, packed);
            assert_eq!(rank_of_rows(rows, m as usize), sparse);
        }
    }
}
