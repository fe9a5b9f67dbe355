use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SparseIntegerMatrix;

/// Rank and elementary divisors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    /// The divisors greater than one, as a divisibility chain.
    pub torsion: Vec<BigInt>,
}

impl SmithForm {
    /// All elementary divisors d_1 | d_2 | ... | d_rank.
    pub fn divisors(&self) -> Vec<BigInt> {
        let units = self.rank - self.torsion.len();
        std::iter::repeat_n(BigInt::one(), units)
            .chain(self.torsion.iter().cloned())
            .collect()
    }

    pub fn even_divisors(&self) -> usize {
        self.torsion.iter().filter(|d| d.is_even()).count()
    }
}

trait Entry: Clone + Zero + PartialEq + Into<BigInt> {
    fn is_unit(&self) -> bool;
    /// `self - a * b`, or `None` on overflow.
    fn mul_sub(&self, a: &Self, b: &Self) -> Option<Self>;
    fn mul(&self, b: &Self) -> Option<Self>;
    fn from_i64(x: i64) -> Self;
}

impl Entry for i64 {
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }

    fn mul_sub(&self, a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b).and_then(|p| self.checked_sub(p))
    }

    fn mul(&self, b: &Self) -> Option<Self> {
        self.checked_mul(*b)
    }

    fn from_i64(x: i64) -> Self {
        x
    }
}

impl Entry for BigInt {
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }

    fn mul_sub(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self - a * b)
    }

    fn mul(&self, b: &Self) -> Option<Self> {
        Some(self * b)
    }

    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
}

/// Smith normal form, exact. Entries are reduced in machine integers while
/// they fit and the whole reduction is redone with big integers otherwise.
pub fn smith_normal_form(m: &SparseIntegerMatrix) -> SmithForm {
    reduce::<i64>(m).unwrap_or_else(|| reduce::<BigInt>(m).expect("big integers never overflow"))
}

fn reduce<T: Entry>(m: &SparseIntegerMatrix) -> Option<SmithForm> {
    let mut e = Eliminator::<T>::new(m);
    let units = e.eliminate_units()?;
    let rest = e.remainder();
    let mut torsion: Vec<BigInt> = Vec::new();
    let mut rank = units;
    for d in dense_snf(rest) {
        rank += 1;
        if !d.is_one() {
            torsion.push(d);
        }
    }
    normalize_chain(&mut torsion);
    Some(SmithForm { rank, torsion })
}

/// Sparse elimination on unit pivots with fill-reducing pivot choice.
struct Eliminator<T> {
    rows: Vec<Vec<(u32, T)>>,
    row_alive: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<usize>,
    by_len: BTreeSet<(usize, u32)>,
    /// Rows known to hold no unit entry since they last changed.
    no_unit: Vec<bool>,
}

impl<T: Entry> Eliminator<T> {
    fn new(m: &SparseIntegerMatrix) -> Self {
        let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); m.rows()];
        let mut col_rows = vec![Vec::new(); m.cols()];
        let mut col_count = vec![0; m.cols()];
        for &(r, c, x) in m.entries() {
            rows[r].push((c as u32, T::from_i64(x)));
            col_rows[c].push(r as u32);
            col_count[c] += 1;
        }
        let by_len = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| (r.len(), i as u32))
            .collect();
        Self {
            row_alive: vec![true; rows.len()],
            no_unit: vec![false; rows.len()],
            rows,
            col_rows,
            col_count,
            by_len,
        }
    }

    fn pick_pivot(&mut self) -> Option<(usize, usize)> {
        for &(_, r) in &self.by_len {
            let r = r as usize;
            if self.no_unit[r] {
                continue;
            }
            let best = self.rows[r]
                .iter()
                .filter(|(_, x)| x.is_unit())
                .min_by_key(|(c, _)| self.col_count[*c as usize])
                .map(|(c, _)| *c as usize);
            match best {
                Some(c) => return Some((r, c)),
                None => self.no_unit[r] = true,
            }
        }
        None
    }

    fn eliminate_units(&mut self) -> Option<usize> {
        let mut rank = 0;
        while let Some((r, c)) = self.pick_pivot() {
            self.pivot(r, c)?;
            rank += 1;
        }
        Some(rank)
    }

    fn pivot(&mut self, r: usize, c: usize) -> Option<()> {
        let pivot_row = std::mem::take(&mut self.rows[r]);
        self.by_len.remove(&(pivot_row.len(), r as u32));
        self.row_alive[r] = false;
        let u = pivot_row.iter().find(|(cc, _)| *cc as usize == c).unwrap().1.clone();
        let targets = std::mem::take(&mut self.col_rows[c]);
        for &r2 in &targets {
            let r2 = r2 as usize;
            if !self.row_alive[r2] {
                continue;
            }
            let Ok(pos) = self.rows[r2].binary_search_by_key(&(c as u32), |e| e.0) else {
                continue;
            };
            // u is a unit, so u^-1 = u
            let factor = self.rows[r2][pos].1.mul(&u)?;
            let old = std::mem::take(&mut self.rows[r2]);
            self.by_len.remove(&(old.len(), r2 as u32));
            let merged = self.axpy(&old, &pivot_row, &factor, r2)?;
            self.no_unit[r2] = false;
            if !merged.is_empty() {
                self.by_len.insert((merged.len(), r2 as u32));
            }
            self.rows[r2] = merged;
        }
        for (cc, _) in &pivot_row {
            self.col_count[*cc as usize] -= 1;
        }
        debug_assert_eq!(self.col_count[c], 0);
        Some(())
    }

    /// `row - factor * pivot`, keeping column bookkeeping current.
    fn axpy(&mut self, row: &[(u32, T)], pivot: &[(u32, T)], factor: &T, r: usize) -> Option<Vec<(u32, T)>> {
        let mut out = Vec::with_capacity(row.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < pivot.len() {
            let ci = row.get(i).map_or(u32::MAX, |e| e.0);
            let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
            if ci < cj {
                out.push(row[i].clone());
                i += 1;
            } else if cj < ci {
                let x = T::zero().mul_sub(factor, &pivot[j].1)?;
                self.col_count[cj as usize] += 1;
                self.col_rows[cj as usize].push(r as u32);
                out.push((cj, x));
                j += 1;
            } else {
                let x = row[i].1.mul_sub(factor, &pivot[j].1)?;
                if x.is_zero() {
                    self.col_count[ci as usize] -= 1;
                } else {
                    out.push((ci, x));
                }
                i += 1;
                j += 1;
            }
        }
        Some(out)
    }

    /// The rows left after unit elimination, as a dense big-integer matrix.
    fn remainder(self) -> Vec<Vec<BigInt>> {
        let mut cols: Vec<u32> = self.rows.iter().flatten().map(|e| e.0).collect();
        cols.sort_unstable();
        cols.dedup();
        self.rows
            .into_iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut dense = vec![BigInt::zero(); cols.len()];
                for (c, x) in r {
                    dense[cols.binary_search(&c).unwrap()] = x.into();
                }
                dense
            })
            .collect()
    }
}

/// Diagonal of the Smith form of a dense matrix, as positive integers.
fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_nonzero(&a, t, t..m, t..n) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    for j in t..n {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    for i in t..m {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // a smaller remainder sits in row t or column t
                let (pi, pj) = min_nonzero(&a, t, t..m, t..n).expect("pivot row is nonzero");
                if pi != t && pj == t {
                    a.swap(t, pi);
                } else if pi == t && pj != t {
                    for row in a.iter_mut() {
                        row.swap(t, pj);
                    }
                }
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    out
}

/// Smallest nonzero entry in row `t` and column `t` of the window, or in the
/// whole window if row `t` and column `t` are zero there.
fn min_nonzero(
    a: &[Vec<BigInt>],
    t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let consider = |i: usize, j: usize, best: &mut Option<(usize, usize)>| {
        if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
            *best = Some((i, j));
        }
    };
    for i in rows.clone() {
        consider(i, t, &mut best);
    }
    for j in cols.clone() {
        consider(t, j, &mut best);
    }
    if best.is_none() {
        for i in rows {
            for j in cols.clone() {
                consider(i, j, &mut best);
            }
        }
    }
    best
}

/// Rewrites a list of positive integers into the divisibility chain with the
/// same product decomposition.
fn normalize_chain(d: &mut Vec<BigInt>) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d.retain(|x| !x.is_one());
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[Vec<i64>]) -> (usize, Vec<i64>) {
        let f = smith_normal_form(&SparseIntegerMatrix::from_dense(rows));
        let d = f.divisors().iter().map(|x| i64::try_from(x).unwrap()).collect();
        (f.rank, d)
    }

    #[test]
    fn small_cases() {
        assert_eq!(snf(&[vec![0, 0], vec![0, 0]]), (0, vec![]));
        assert_eq!(snf(&[vec![2, 0], vec![0, 3]]), (2, vec![1, 6]));
        assert_eq!(snf(&[vec![1, 1], vec![1, 1]]), (1, vec![1]));
        assert_eq!(snf(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), (3, vec![2, 6, 12]));
        assert_eq!(snf(&[vec![4, 0], vec![0, 6]]), (2, vec![2, 12]));
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = 1i64 << 40;
        // eliminating the unit pivot produces big * big
        let f = smith_normal_form(&SparseIntegerMatrix::from_dense(&[vec![1, big], vec![big, 0]]));
        assert_eq!(f.rank, 2);
        assert_eq!(f.torsion, vec![BigInt::from(big) * BigInt::from(big)]);
    }
}
