use std::collections::BTreeMap;

/// A sparse integer matrix in coordinate form, sorted row-major.
///
/// Entries are machine integers; every reduction that can grow them
/// (see [`super::smith_normal_form`]) switches to arbitrary precision when
/// needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl SparseIntegerMatrix {
    /// Builds a matrix from triplets; duplicates are summed and zeros dropped.
    pub fn new(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut t: Vec<(usize, usize, i64)> = triplets.into_iter().collect();
        for &(r, c, _) in &t {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside a {rows}x{cols} matrix");
        }
        t.sort_unstable_by_key(|e| (e.0, e.1));
        let mut entries: Vec<(usize, usize, i64)> = Vec::with_capacity(t.len());
        for (r, c, x) in t {
            match entries.last_mut() {
                Some(last) if (last.0, last.1) == (r, c) => last.2 += x,
                _ => entries.push((r, c, x)),
            }
        }
        entries.retain(|e| e.2 != 0);
        Self { rows, cols, entries }
    }

    /// Builds a matrix from triplets already sorted row-major without duplicates or zeros.
    pub(crate) fn from_sorted(rows: usize, cols: usize, entries: Vec<(usize, usize, i64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)));
        debug_assert!(entries.iter().all(|e| e.2 != 0 && e.0 < rows && e.1 < cols));
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::new(
            rows.len(),
            cols,
            rows.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &x)| (i, j, x))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize, i64)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(r, c)))
            .map_or(0, |i| self.entries[i].2)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for &(r, c, x) in &self.entries {
            out[r][c] = x;
        }
        out
    }

    /// Row lists: for each row, its (column, value) pairs in column order.
    pub fn row_lists(&self) -> Vec<Vec<(usize, i64)>> {
        let mut out = vec![Vec::new(); self.rows];
        for &(r, c, x) in &self.entries {
            out[r].push((c, x));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<(usize, usize, i64)> = self.entries.iter().map(|&(r, c, x)| (c, r, x)).collect();
        entries.sort_unstable();
        Self::from_sorted(self.cols, self.rows, entries)
    }

    /// The matrix with rows and columns relabelled: entry (r, c) moves to
    /// (row_perm[r], col_perm[c]).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|&(r, c, x)| (row_perm[r], col_perm[c], x)),
        )
    }

    /// The product `self * rhs`, with entries accumulated in 128 bits.
    ///
    /// Panics if an entry of the product does not fit in an `i64`.
    pub fn mul(&self, rhs: &SparseIntegerMatrix) -> SparseIntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let rhs_rows = rhs.row_lists();
        let mut entries = Vec::new();
        let mut acc: BTreeMap<usize, i128> = BTreeMap::new();
        let mut i = 0;
        while i < self.entries.len() {
            let r = self.entries[i].0;
            acc.clear();
            while i < self.entries.len() && self.entries[i].0 == r {
                let (_, k, x) = self.entries[i];
                for &(c, y) in &rhs_rows[k] {
                    *acc.entry(c).or_insert(0) += x as i128 * y as i128;
                }
                i += 1;
            }
            for (&c, &x) in &acc {
                if x != 0 {
                    entries.push((r, c, i64::try_from(x).expect("product entry overflows i64")));
                }
            }
        }
        Self::from_sorted(self.rows, rhs.cols, entries)
    }
}
