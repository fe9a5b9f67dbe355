use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rank_mod2, smith_normal_form, SmithForm, SparseIntegerMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "F2")]
    F2,
}

impl Ring {
    pub const ALL: [Ring; 3] = [Ring::Integers, Ring::Rationals, Ring::F2];
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Integers => "Z",
            Ring::Rationals => "Q",
            Ring::F2 => "F2",
        })
    }
}

impl FromStr for Ring {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(Ring::Integers),
            "q" => Ok(Ring::Rationals),
            "f2" | "z2" => Ok(Ring::F2),
            _ => Err(format!("unknown ring {s:?} (expected z, q or f2)")),
        }
    }
}

/// Chain groups C_h for consecutive degrees and the differentials between them.
/// `differentials[i]` maps degree `min_degree + i` to the next one and has
/// `dims[i + 1]` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrices {
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub differentials: Vec<SparseIntegerMatrix>,
}

impl GradedMatrices {
    /// Checks shapes and that consecutive differentials compose to zero.
    pub fn check(&self) -> Result<()> {
        if !self.dims.is_empty() && self.differentials.len() + 1 != self.dims.len() {
            return Err(Error::InconsistentComplex("wrong number of differentials".into()));
        }
        for (i, d) in self.differentials.iter().enumerate() {
            if d.cols() != self.dims[i] || d.rows() != self.dims[i + 1] {
                return Err(Error::InconsistentComplex(format!(
                    "differential out of degree {} has shape {}x{}, expected {}x{}",
                    self.min_degree + i as i64,
                    d.rows(),
                    d.cols(),
                    self.dims[i + 1],
                    self.dims[i]
                )));
            }
        }
        for (i, w) in self.differentials.windows(2).enumerate() {
            let sq = w[1].mul(&w[0]);
            if !sq.is_zero() {
                return Err(Error::InconsistentComplex(format!(
                    "D^2 has {} nonzero entries out of degree {}",
                    sq.nnz(),
                    self.min_degree + i as i64
                )));
            }
        }
        Ok(())
    }

    pub fn chain_euler(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| sign(self.min_degree + i as i64) * d as i64)
            .sum()
    }
}

fn sign(h: i64) -> i64 {
    if h.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub degree: i64,
    pub chain_dim: usize,
    pub betti: usize,
    /// Elementary divisors greater than one (integer coefficients only).
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub ring: Ring,
    pub degrees: Vec<DegreeHomology>,
    pub total_rank: usize,
    pub euler_characteristic: i64,
}

impl HomologyReport {
    pub fn even_divisors(&self) -> usize {
        self.degrees
            .iter()
            .flat_map(|d| &d.torsion)
            .filter(|t| !t.bit(0))
            .count()
    }

    /// Betti numbers by degree, omitting zeros.
    pub fn profile(&self) -> Vec<(i64, usize)> {
        self.degrees.iter().filter(|d| d.betti > 0).map(|d| (d.degree, d.betti)).collect()
    }
}

/// Homology of a graded complex over `ring`.
pub fn homology(c: &GradedMatrices, ring: Ring) -> Result<HomologyReport> {
    c.check()?;
    let forms: Vec<SmithForm> = c
        .differentials
        .par_iter()
        .map(|d| match ring {
            Ring::F2 => SmithForm {
                rank: rank_mod2(d),
                torsion: Vec::new(),
            },
            _ => smith_normal_form(d),
        })
        .collect();
    let rank_out = |i: usize| forms.get(i).map_or(0, |f| f.rank);
    let mut degrees = Vec::new();
    for (i, &dim) in c.dims.iter().enumerate() {
        let rank_in = if i == 0 { 0 } else { forms[i - 1].rank };
        let betti = dim
            .checked_sub(rank_out(i) + rank_in)
            .ok_or_else(|| Error::InconsistentComplex("ranks exceed the chain dimension".into()))?;
        let torsion = match ring {
            Ring::Integers if i > 0 => forms[i - 1].torsion.clone(),
            _ => Vec::new(),
        };
        degrees.push(DegreeHomology {
            degree: c.min_degree + i as i64,
            chain_dim: dim,
            betti,
            torsion,
        });
    }
    let euler: i64 = degrees.iter().map(|d| sign(d.degree) * d.betti as i64).sum();
    if euler != c.chain_euler() {
        return Err(Error::InconsistentComplex(format!(
            "homology Euler characteristic {euler} differs from the chain-level value {}",
            c.chain_euler()
        )));
    }
    Ok(HomologyReport {
        ring,
        total_rank: degrees.iter().map(|d| d.betti).sum(),
        degrees,
        euler_characteristic: euler,
    })
}

/// Universal coefficients: the mod-2 rank is the rational rank plus two for
/// every even elementary divisor.
pub fn uct_consistent(z: &HomologyReport, q: &HomologyReport, f2: &HomologyReport) -> bool {
    f2.total_rank == q.total_rank + 2 * z.even_divisors() && z.total_rank == q.total_rank
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(dims: Vec<usize>, ds: Vec<Vec<Vec<i64>>>) -> GradedMatrices {
        GradedMatrices {
            min_degree: 0,
            differentials: ds
                .iter()
                .zip(dims.windows(2))
                .map(|(d, w)| {
                    if d.is_empty() {
                        SparseIntegerMatrix::zeros(w[1], w[0])
                    } else {
                        SparseIntegerMatrix::from_dense(d)
                    }
                })
                .collect(),
            dims,
        }
    }

    #[test]
    fn zero_differential_on_a_plane() {
        let c = complex(vec![2], vec![]);
        let h = homology(&c, Ring::Rationals).unwrap();
        assert_eq!(h.total_rank, 2);
        assert_eq!(h.degrees[0].betti, 2);
    }

    #[test]
    fn multiplication_by_two() {
        // Z --2--> Z: H_1 = Z/2, nothing free
        let c = complex(vec![1, 1], vec![vec![vec![2]]]);
        let z = homology(&c, Ring::Integers).unwrap();
        let q = homology(&c, Ring::Rationals).unwrap();
        let f = homology(&c, Ring::F2).unwrap();
        assert_eq!(z.total_rank, 0);
        assert_eq!(z.degrees[1].torsion, vec![BigInt::from(2)]);
        assert_eq!(q.total_rank, 0);
        assert_eq!(f.total_rank, 2);
        assert!(uct_consistent(&z, &q, &f));
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let c = complex(vec![1, 1, 1], vec![vec![vec![1]], vec![vec![1]]]);
        assert!(matches!(homology(&c, Ring::F2), Err(Error::InconsistentComplex(_))));
    }
}
