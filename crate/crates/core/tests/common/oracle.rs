//! A small, independent Khovanov homology calculator for disk diagrams given
//! as planar-diagram codes. It shares no code with the library: circles come
//! from a union-find over edge labels and ranks from dense elimination.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Circles of a state as groups of edge labels, ordered by smallest label.
fn circles(pd: &[[u32; 4]], state: usize) -> Vec<Vec<u32>> {
    let labels: Vec<u32> = {
        let mut l: Vec<u32> = pd.iter().flatten().copied().collect();
        l.sort();
        l.dedup();
        l
    };
    let idx = |x: u32| labels.binary_search(&x).unwrap();
    let mut p: Vec<usize> = (0..labels.len()).collect();
    let k = pd.len();
    for (c, x) in pd.iter().enumerate() {
        let one = state >> (k - 1 - c) & 1 == 1;
        let pairs = if one { [(x[0], x[3]), (x[1], x[2])] } else { [(x[0], x[1]), (x[2], x[3])] };
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut p, idx(a)), find(&mut p, idx(b)));
            p[ra] = rb;
        }
    }
    let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        let r = find(&mut p, i);
        groups.entry(r).or_default().push(l);
    }
    let mut out: Vec<Vec<u32>> = groups.into_values().collect();
    out.sort();
    out
}

/// Differentials of the Khovanov complex (bits: 0 = 1, 1 = x), degree = |v|.
fn complex(pd: &[[u32; 4]]) -> (Vec<usize>, Vec<Vec<Vec<i64>>>) {
    let k = pd.len();
    let states: Vec<Vec<Vec<u32>>> = (0..1usize << k).map(|s| circles(pd, s)).collect();
    let mut offset = vec![0; states.len()];
    let mut dims = vec![0; k + 1];
    for s in 0..states.len() {
        let w = s.count_ones() as usize;
        offset[s] = dims[w];
        dims[w] += 1 << states[s].len();
    }
    let mut mats: Vec<Vec<Vec<i64>>> = (0..k).map(|w| vec![vec![0; dims[w]]; dims[w + 1]]).collect();
    for s in 0..states.len() {
        let w = s.count_ones() as usize;
        for c in 0..k {
            let bit = 1 << (k - 1 - c);
            if s & bit != 0 {
                continue;
            }
            let t = s | bit;
            let ones_before = (s >> (k - c)).count_ones();
            let sign = if ones_before % 2 == 0 { 1 } else { -1 };
            let (a, b) = (&states[s], &states[t]);
            // circle correspondence through a shared edge label
            let where_in = |cs: &Vec<Vec<u32>>, l: u32| cs.iter().position(|c| c.contains(&l)).unwrap();
            let na = a.len();
            let nb = b.len();
            let touched: Vec<u32> = pd[c].to_vec();
            for g in 0..1usize << na {
                let label = |i: usize| g >> (na - 1 - i) & 1;
                // labels of untouched circles carry over
                let mut fixed = vec![None; nb];
                let mut active_a: Vec<usize> = touched.iter().map(|&l| where_in(a, l)).collect();
                active_a.sort();
                active_a.dedup();
                let mut active_b: Vec<usize> = touched.iter().map(|&l| where_in(b, l)).collect();
                active_b.sort();
                active_b.dedup();
                for i in 0..na {
                    if !active_a.contains(&i) {
                        fixed[where_in(b, a[i][0])] = Some(label(i));
                    }
                }
                let outputs: Vec<Vec<(usize, usize)>> = if active_a.len() == 2 {
                    let (x, y) = (label(active_a[0]), label(active_a[1]));
                    if x + y <= 1 {
                        vec![vec![(active_b[0], x + y)]]
                    } else {
                        vec![]
                    }
                } else if label(active_a[0]) == 0 {
                    vec![
                        vec![(active_b[0], 0), (active_b[1], 1)],
                        vec![(active_b[0], 1), (active_b[1], 0)],
                    ]
                } else {
                    vec![vec![(active_b[0], 1), (active_b[1], 1)]]
                };
                for out in outputs {
                    let mut labels = fixed.clone();
                    for (i, l) in out {
                        labels[i] = Some(l);
                    }
                    let h: usize = labels
                        .iter()
                        .enumerate()
                        .map(|(i, l)| l.unwrap() << (nb - 1 - i))
                        .sum();
                    mats[w][offset[t] + h][offset[s] + g] += sign;
                }
            }
        }
    }
    (dims, mats)
}

fn rank_q(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = BigRational::one() / a[rank][c].clone();
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = a[i][c].clone() * inv.clone();
                for j in c..cols {
                    let s = f.clone() * a[rank][j].clone();
                    a[i][j] -= s;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_f2(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(2) == 1).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c]) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && a[i][c] {
                for j in c..cols {
                    let v = a[rank][j];
                    a[i][j] ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Total Khovanov rank over the rationals and over the two-element field.
pub fn khovanov_total_ranks(pd: &[[u32; 4]]) -> (usize, usize) {
    let (dims, mats) = complex(pd);
    for w in 1..mats.len() {
        for r in 0..dims[w + 1] {
            for c in 0..dims[w - 1] {
                let x: i64 = (0..dims[w]).map(|j| mats[w][r][j] * mats[w - 1][j][c]).sum();
                assert_eq!(x, 0, "oracle complex does not square to zero");
            }
        }
    }
    let total = |rank: &dyn Fn(&[Vec<i64>]) -> usize| {
        let ranks: Vec<usize> = mats.iter().map(|m| rank(m)).collect();
        (0..dims.len())
            .map(|h| dims[h] - ranks.get(h).copied().unwrap_or(0) - if h > 0 { ranks[h - 1] } else { 0 })
            .sum()
    };
    (total(&rank_q), total(&rank_f2))
}
