use std::collections::HashMap;

use super::{Diagram, VertexKind};

/// Whether two diagrams are the same up to relabelling darts and reordering
/// vertices, respecting crossing data, regions, punctures and orientation.
///
/// Incoming-under directions are ignored since they do not affect the diagram.
pub fn is_isomorphic(a: &Diagram, b: &Diagram) -> bool {
    let (ma, mb) = (a.map(), b.map());
    if ma.num_darts() != mb.num_darts()
        || ma.num_vertices() != mb.num_vertices()
        || a.crossing_count() != b.crossing_count()
        || a.num_components() != b.num_components()
        || a.num_regions() != b.num_regions()
        || a.surface().punctures() != b.surface().punctures()
    {
        return false;
    }
    let n = ma.num_darts();
    // one root dart per map component of `a`
    let comps = ma.dart_components();
    let mut roots: Vec<usize> = Vec::new();
    let mut seen = HashMap::new();
    for d in 0..n {
        seen.entry(comps[d]).or_insert_with(|| {
            roots.push(d);
        });
    }
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(a, b, &roots, 0, &mut f, &mut used)
}

fn search(a: &Diagram, b: &Diagram, roots: &[usize], k: usize, f: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    if k == roots.len() {
        return global_match(a, b, f);
    }
    let n = a.map().num_darts();
    for y in 0..n {
        if used[y] {
            continue;
        }
        let mut assigned = Vec::new();
        if extend(a, b, roots[k], y, f, used, &mut assigned) && search(a, b, roots, k + 1, f, used) {
            return true;
        }
        for x in assigned {
            used[f[x]] = false;
            f[x] = usize::MAX;
        }
    }
    false
}

/// Propagates `x -> y` through alpha and sigma; records assignments for undo.
fn extend(
    a: &Diagram,
    b: &Diagram,
    x: usize,
    y: usize,
    f: &mut [usize],
    used: &mut [bool],
    assigned: &mut Vec<usize>,
) -> bool {
    let (ma, mb) = (a.map(), b.map());
    let mut stack = vec![(x, y)];
    while let Some((x, y)) = stack.pop() {
        if f[x] != usize::MAX {
            if f[x] != y {
                return false;
            }
            continue;
        }
        if used[y] {
            return false;
        }
        let (vx, vy) = (ma.vertex_of(x), mb.vertex_of(y));
        let kind = a.vertex_kind(vx);
        if kind != b.vertex_kind(vy)
            || ma.rotation(vx).len() != mb.rotation(vy).len()
            || (kind == VertexKind::Crossing && ma.position_in_vertex(x) % 2 != mb.position_in_vertex(y) % 2)
            || a.is_departure(x) != b.is_departure(y)
        {
            return false;
        }
        f[x] = y;
        used[y] = true;
        assigned.push(x);
        stack.push((ma.alpha(x), mb.alpha(y)));
        stack.push((ma.sigma(x), mb.sigma(y)));
    }
    true
}

fn global_match(a: &Diagram, b: &Diagram, f: &[usize]) -> bool {
    let mut region = HashMap::new();
    let mut back = HashMap::new();
    for (x, &y) in f.iter().enumerate() {
        let (ra, rb) = (a.region_of_dart(x), b.region_of_dart(y));
        if *region.entry(ra).or_insert(rb) != rb || *back.entry(rb).or_insert(ra) != ra {
            return false;
        }
    }
    // regions without darts only occur for the empty map
    let image = |r: usize| region.get(&r).copied().unwrap_or(r);
    if image(a.outer_region()) != b.outer_region() {
        return false;
    }
    (0..a.surface().num_punctures()).all(|p| image(a.puncture_region(p)) == b.puncture_region(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: [[u32; 4]; 2] = [[4, 1, 3, 2], [2, 3, 1, 4]];

    #[test]
    fn relabelled_diagram_is_isomorphic() {
        let d = Diagram::from_pd(&HOPF).unwrap();
        let swapped = d.reorder_crossings(&[1, 0]).unwrap();
        assert!(is_isomorphic(&d, &swapped));
    }

    #[test]
    fn flipping_one_crossing_breaks_isomorphism() {
        let d = Diagram::from_pd(&HOPF).unwrap();
        assert!(is_isomorphic(&d, &d));
        assert!(!is_isomorphic(&d, &d.flip_crossing(0)));
    }
}
