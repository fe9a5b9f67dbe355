//! Seeded random diagrams for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Diagram, DiagramParts, MoveSite, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub max_crossings: usize,
    pub max_punctures: usize,
}

/// `count` diagrams drawn from a generator seeded with `seed`.
pub fn fuzz_diagrams(seed: u64, count: usize, cfg: FuzzConfig) -> Vec<Diagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_diagram(&mut rng, cfg)).collect()
}

/// Unknotted loops, possibly nested, `n` of them. Loop `j > 0` sits inside
/// loop `parent[j - 1]` or, for `None`, in the outer region.
pub fn nested_loops(parent: &[Option<usize>]) -> Diagram {
    let n = parent.len() as i64 + 1;
    let edges: Vec<(i64, i64)> = (0..n).map(|i| (2 * i, 2 * i + 1)).collect();
    Diagram::from_parts(DiagramParts {
        edges: edges.clone(),
        vertices: edges.iter().map(|&(a, b)| (VertexKind::Loop, vec![a, b])).collect(),
        outer: Some(0),
        region_links: parent
            .iter()
            .enumerate()
            .map(|(j, p)| (p.map_or(0, |p| 2 * p as i64 + 1), 2 * (j as i64 + 1)))
            .collect(),
        ..Default::default()
    })
    .expect("nested loops are a valid diagram")
}

/// One random diagram: loops, then random moves and crossing changes up to
/// `max_crossings`, then a random outer face and puncture placement.
pub fn random_diagram(rng: &mut ChaCha8Rng, cfg: FuzzConfig) -> Diagram {
    let loops = rng.gen_range(1..=3);
    let parent: Vec<Option<usize>> = (1..loops)
        .map(|j| if rng.gen_bool(0.5) { Some(rng.gen_range(0..j)) } else { None })
        .collect();
    let mut d = nested_loops(&parent);
    let target = rng.gen_range(0..=cfg.max_crossings);
    for _ in 0..4 * target + 8 {
        if d.crossing_count() >= target {
            break;
        }
        let room = target - d.crossing_count();
        d = random_step(rng, &d, room).unwrap_or(d);
    }
    let outer = d.map().labels()[rng.gen_range(0..d.map().num_darts())];
    d = d.with_outer(outer).expect("any face can be outer");
    let p = rng.gen_range(0..=cfg.max_punctures);
    let labels = d.map().labels().to_vec();
    let punctures = (0..p)
        .map(|i| (format!("p{}", i + 1), *labels.choose(rng).unwrap()))
        .collect();
    d.with_punctures(punctures).expect("punctures fit in any face")
}

fn random_step(rng: &mut ChaCha8Rng, d: &Diagram, room: usize) -> Option<Diagram> {
    match rng.gen_range(0..6) {
        0 | 1 if room >= 2 => {
            let site = *d.r2_sites().choose(rng)?;
            d.apply_move(site).ok()
        }
        2 => {
            let site = *d.r3_sites().choose(rng)?;
            d.apply_move(site).ok()
        }
        3 if d.crossing_count() > 0 => Some(d.flip_crossing(rng.gen_range(0..d.crossing_count()))),
        _ => {
            let site: MoveSite = *d.r1_sites().choose(rng)?;
            d.apply_move(site).ok()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        let cfg = FuzzConfig {
            max_crossings: 6,
            max_punctures: 3,
        };
        let a = fuzz_diagrams(11, 20, cfg);
        assert_eq!(a, fuzz_diagrams(11, 20, cfg));
        assert!(a.iter().all(|d| d.crossing_count() <= 6 && d.surface().num_punctures() <= 3));
        assert!(a.iter().any(|d| d.crossing_count() >= 4));
    }

    #[test]
    fn nesting() {
        let d = nested_loops(&[Some(0), None]);
        assert_eq!(d.num_regions(), 4);
        assert_eq!(d.num_components(), 3);
    }
}
