//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use aps_core::complex::assemble;
use aps_core::detect::{compute_homology, invariance_suite, state_sum_euler, ChainStep};
use aps_core::fuzz::{fuzz_diagrams, nested_loops, FuzzConfig};
use aps_core::linalg::{uct_consistent, Ring};
use aps_core::{parse_diagram, with_threads, Diagram, MoveKind, MoveSite};
use common::oracle::khovanov_total_ranks;
use common::{braid_closure_pd, FIGURE_EIGHT, HOPF, TREFOIL};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT: Duration = Duration::from_secs(60);

fn corpus() -> Vec<(String, Diagram)> {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus"].iter().collect();
    let mut out = Vec::new();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for p in paths {
        let name = p.file_stem().unwrap().to_string_lossy().to_string();
        if let Ok(d) = parse_diagram(&std::fs::read_to_string(&p).unwrap()) {
            out.push((name, d));
        }
    }
    out
}

fn fuzz_corpus() -> Vec<Diagram> {
    fuzz_diagrams(
        7,
        200,
        FuzzConfig {
            max_crossings: 8,
            max_punctures: 4,
        },
    )
}

fn label_of_face(d: &Diagram, f: usize) -> i64 {
    d.map().label(d.faces()[f].darts[0])
}

/// An unknotted loop on the disk with punctures `p1`, `p2`, those in `inside` enclosed.
fn loop_around(inside: &[bool; 2]) -> Diagram {
    let d = nested_loops(&[]);
    let outer = d.outer_face().unwrap();
    let punctures = inside
        .iter()
        .enumerate()
        .map(|(i, &inn)| {
            let f = if inn { 1 - outer } else { outer };
            (format!("p{}", i + 1), label_of_face(&d, f))
        })
        .collect();
    d.with_punctures(punctures).unwrap()
}

/// Diagrams reachable by R1 and R2 moves within `max_crossings`, taking at
/// most `per_level` moves out of each diagram.
fn perturbations(d: &Diagram, max_crossings: usize, rng: &mut ChaCha8Rng, per_level: usize) -> Vec<Diagram> {
    let mut out = vec![d.clone()];
    let mut frontier = vec![d.clone()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            let mut sites = f.r1_sites();
            sites.extend(f.r2_sites());
            sites.shuffle(rng);
            let mut taken = 0;
            for s in sites {
                let room = max_crossings - f.crossing_count();
                let cost = if s.kind() == MoveKind::R1 { 1 } else { 2 };
                if cost > room || taken == per_level {
                    continue;
                }
                if let Ok(m) = f.apply_move(s) {
                    taken += 1;
                    next.push(m);
                }
            }
        }
        next.shuffle(rng);
        next.truncate(4 * per_level);
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn random_chain(rng: &mut ChaCha8Rng, d: &Diagram, len: usize) -> Vec<ChainStep> {
    let mut cur = d.clone();
    let mut steps = Vec::new();
    for _ in 0..20 * len {
        if steps.len() == len {
            break;
        }
        let k = cur.crossing_count();
        let site = match rng.gen_range(0..7) {
            0 => cur.r1_sites().choose(rng).copied(),
            1 if k <= 6 => cur.r2_sites().choose(rng).copied(),
            2 | 3 => cur.r3_sites().choose(rng).copied(),
            4 => cur.r1_inverse_sites().choose(rng).copied(),
            5 => cur.r2_inverse_sites().choose(rng).copied(),
            _ => None,
        };
        let step = match site {
            Some(s) => ChainStep::Move(s),
            None if k >= 2 => {
                let mut perm: Vec<usize> = (0..k).collect();
                perm.shuffle(rng);
                ChainStep::Reorder(perm)
            }
            None => continue,
        };
        let next = match &step {
            ChainStep::Move(s) => cur.apply_move(*s),
            ChainStep::Reorder(p) => cur.reorder_crossings(p),
        };
        if let Ok(n) = next {
            cur = n;
            steps.push(step);
        }
    }
    steps
}

/// Three loops joined into a diagram with a triangular face, with punctures
/// outside the triangles.
fn triangle_diagram(variant: usize) -> Diagram {
    let d = nested_loops(&[None, None]);
    for s1 in d.r2_sites() {
        let Ok(a) = d.apply_move(s1) else { continue };
        for s2 in a.r2_sites() {
            let Ok(b) = a.apply_move(s2) else { continue };
            for s3 in b.r2_sites() {
                let Ok(c) = b.apply_move(s3) else { continue };
                if !c.r3_sites().is_empty() {
                    let free: Vec<usize> = (0..c.faces().len()).filter(|&f| c.faces()[f].darts.len() != 3).collect();
                    let p = free
                        .iter()
                        .skip(variant)
                        .take(2)
                        .enumerate()
                        .map(|(i, &f)| (format!("p{}", i + 1), label_of_face(&c, f)))
                        .collect();
                    return c.with_punctures(p).unwrap();
                }
            }
        }
    }
    panic!("no triangle found")
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn criterion_1(fuzz: &[Diagram]) -> Outcome {
    let t = Instant::now();
    let mut bad = 0;
    for d in fuzz {
        let c = assemble(d, Ring::Integers);
        let zero = c.is_ok_and(|c| c.matrices.differentials.windows(2).all(|w| w[1].mul(&w[0]).is_zero()));
        bad += usize::from(!zero);
    }
    let el = t.elapsed();
    Outcome {
        pass: bad == 0 && el < LIMIT && fuzz.len() == 200,
        detail: format!("{} diagrams, {bad} with D^2 != 0, {:.2}s", fuzz.len(), el.as_secs_f64()),
    }
}

fn criterion_2(fuzz: &[Diagram]) -> Outcome {
    let nonempty: Vec<&Diagram> = fuzz.iter().filter(|d| !d.is_empty()).collect();
    let min = nonempty
        .iter()
        .map(|d| compute_homology(d, Ring::F2).unwrap().total_rank)
        .min()
        .unwrap_or(0);
    let bad = nonempty
        .iter()
        .filter(|d| compute_homology(d, Ring::F2).unwrap().total_rank < 2)
        .count();
    Outcome {
        pass: bad == 0 && !nonempty.is_empty(),
        detail: format!("{} nonempty diagrams, {bad} violations, smallest rank {min}", nonempty.len()),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut total = 0;
    let mut bad = Vec::new();
    let mut max_k = 0;
    for inside in [[false, false], [true, false], [false, true], [true, true]] {
        for d in perturbations(&loop_around(&inside), 4, &mut rng, 6) {
            total += 1;
            max_k = max_k.max(d.crossing_count());
            let r = compute_homology(&d, Ring::F2).unwrap().total_rank;
            if r != 2 {
                bad.push((inside, d.crossing_count(), r));
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && max_k == 4,
        detail: format!("4 puncture subsets, {total} diagrams up to {max_k} crossings, not rank 2: {bad:?}"),
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bases: Vec<Diagram> = corpus().into_iter().map(|(_, d)| d).collect();
    bases.extend((0..3).map(triangle_diagram));
    let fuzz = fuzz_diagrams(
        4,
        12,
        FuzzConfig {
            max_crossings: 5,
            max_punctures: 3,
        },
    );
    bases.extend(fuzz);
    let mut chains = 0;
    let mut held = 0;
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    for d in &bases {
        let mut steps = Vec::new();
        let mut start = d.clone();
        if let Some((site, moved)) = d.r3_sites().into_iter().find_map(|s| Some((s, d.apply_move(s).ok()?))) {
            start = moved;
            steps.push(ChainStep::Move(site));
        }
        steps.extend(random_chain(&mut rng, &start, 4));
        if steps.is_empty() {
            continue;
        }
        for s in &steps {
            let k = match s {
                ChainStep::Move(m) => format!("{:?}", MoveSite::kind(m)),
                ChainStep::Reorder(_) => "Reorder".into(),
            };
            *kinds.entry(k).or_default() += 1;
        }
        chains += 1;
        held += usize::from(invariance_suite(d, &steps).unwrap().holds());
    }
    Outcome {
        pass: chains >= 20 && held == chains && kinds.len() == 6,
        detail: format!("{held}/{chains} chains invariant; steps {kinds:?}"),
    }
}

fn criterion_5() -> Outcome {
    let unknot = nested_loops(&[]);
    let lib = |d: &Diagram| {
        (
            compute_homology(d, Ring::Rationals).unwrap().total_rank,
            compute_homology(d, Ring::F2).unwrap().total_rank,
        )
    };
    let mut rows = vec![("unknot".to_string(), lib(&unknot), (2, 2))];
    for (name, pd) in [("hopf", &HOPF[..]), ("trefoil", &TREFOIL[..]), ("figure-eight", &FIGURE_EIGHT[..])] {
        rows.push((name.into(), lib(&Diagram::from_pd(pd).unwrap()), khovanov_total_ranks(pd)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut braids = 0;
    let mut braid_bad = 0;
    for _ in 0..15 {
        let word: Vec<i32> = (0..rng.gen_range(2..=6))
            .map(|i| {
                let g = if i < 2 { i + 1 } else { rng.gen_range(1..=2) };
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        let pd = braid_closure_pd(3, &word);
        braids += 1;
        braid_bad += usize::from(lib(&Diagram::from_pd(&pd).unwrap()) != khovanov_total_ranks(&pd));
    }
    let named_ok = rows.iter().all(|(_, a, b)| a == b);
    let shown: Vec<String> = rows.iter().map(|(n, a, _)| format!("{n} Q {} F2 {}", a.0, a.1)).collect();
    Outcome {
        pass: named_ok && braid_bad == 0,
        detail: format!("{}; {braids} braid closures, {braid_bad} mismatches", shown.join(", ")),
    }
}

fn criterion_6() -> Outcome {
    let (_, d) = corpus().into_iter().find(|(n, _)| n == "figure_eight_curve").unwrap();
    let r = compute_homology(&d, Ring::F2).unwrap().total_rank;
    Outcome {
        pass: r > 2 && d.crossing_count() <= 6 && d.surface().num_punctures() == 2,
        detail: format!("{} crossing curve around both holes, rank {r}", d.crossing_count()),
    }
}

fn all_diagrams(fuzz: &[Diagram]) -> Vec<Diagram> {
    corpus().into_iter().map(|(_, d)| d).chain(fuzz.iter().cloned()).collect()
}

fn criterion_7(fuzz: &[Diagram]) -> Outcome {
    let all = all_diagrams(fuzz);
    let bad = all
        .iter()
        .filter(|d| {
            let q = compute_homology(d, Ring::Rationals).unwrap();
            let z = compute_homology(d, Ring::Integers).unwrap();
            let f = compute_homology(d, Ring::F2).unwrap();
            let chi = state_sum_euler(d).unwrap();
            [q, z, f].iter().any(|h| h.euler_characteristic != chi)
        })
        .count();
    Outcome {
        pass: bad == 0,
        detail: format!("{} complexes over three rings, {bad} mismatches", all.len()),
    }
}

fn criterion_8(fuzz: &[Diagram]) -> Outcome {
    let (mut entries, mut bad) = (0, 0);
    for d in fuzz {
        let c = assemble(d, Ring::Integers).unwrap();
        entries += c.matrices.differentials.iter().map(|m| m.nnz()).sum::<usize>();
        bad += c.winding_violations();
    }
    Outcome {
        pass: bad == 0 && entries > 0,
        detail: format!("{entries} nonzero entries, {bad} across winding grades"),
    }
}

fn criterion_9(fuzz: &[Diagram]) -> Outcome {
    let all = all_diagrams(fuzz);
    let mut even = 0;
    let bad = all
        .iter()
        .filter(|d| {
            let [z, q, f] = Ring::ALL.map(|r| compute_homology(d, r).unwrap());
            even += z.even_divisors();
            !uct_consistent(&z, &q, &f)
        })
        .count();
    Outcome {
        pass: bad == 0,
        detail: format!("{} diagrams, {even} even divisors in total, {bad} inconsistent", all.len()),
    }
}

fn criterion_10() -> Outcome {
    let mut word = [1, -2].repeat(5);
    word.extend([1, 1]);
    let d = Diagram::from_pd(&braid_closure_pd(3, &word)).unwrap();
    let p = vec![("p1".into(), label_of_face(&d, 1)), ("p2".into(), label_of_face(&d, 3))];
    let d = d.with_punctures(p).unwrap();
    let t = Instant::now();
    let one = with_threads(1, || compute_homology(&d, Ring::F2).unwrap());
    let el = t.elapsed();
    let four = with_threads(4, || compute_homology(&d, Ring::F2).unwrap());
    Outcome {
        pass: el < LIMIT && one == four && d.crossing_count() == 12,
        detail: format!(
            "{} crossings, rank {}, {:.2}s on one thread, threads 1 and 4 {}",
            d.crossing_count(),
            one.total_rank,
            el.as_secs_f64(),
            if one == four { "agree" } else { "differ" }
        ),
    }
}

fn main() {
    let fuzz = fuzz_corpus();
    let results = [
        ("D^2 = 0 on fuzz diagrams", criterion_1(&fuzz)),
        ("rank >= 2 on nonempty fuzz diagrams", criterion_2(&fuzz)),
        ("embedded knots have rank 2", criterion_3()),
        ("Reidemeister and reorder invariance", criterion_4()),
        ("disk values match the oracle", criterion_5()),
        ("non-embedded knot has rank > 2", criterion_6()),
        ("Euler identity", criterion_7(&fuzz)),
        ("winding homogeneity", criterion_8(&fuzz)),
        ("universal coefficients", criterion_9(&fuzz)),
        ("12-crossing performance", criterion_10()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {:>2} {}: {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
