//! Reidemeister moves on plane-map diagrams.
//!
//! Every move is a local rewrite of the rotation system. Plane regions are
//! carried across a move by the darts that survive it: a new face belongs to
//! the old region of any surviving dart on it. The one move that cuts a region
//! in two (R2 inside a single face) requires that region to be empty.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Diagram, DiagramParts, VertexKind};
use crate::error::{Error, Result};
use crate::surface::PlaneMap;
use crate::uf::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    R1,
    R2,
    R3,
    R1Inverse,
    R2Inverse,
}

/// Side of an edge, relative to traversal starting at the chosen dart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KinkSide {
    Left,
    Right,
}

/// Where and how to apply a move. Darts are given by label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveSite {
    /// Insert a kink into the edge of `dart`. The loop lies on `side`;
    /// `under_first` makes the strand pass under on its first visit
    /// (travelling away from `dart`).
    R1 {
        dart: i64,
        side: KinkSide,
        under_first: bool,
    },
    /// Push the edge of `first` across the face on its right and over (or
    /// under) the edge of `second`, which must border the same region on its
    /// right.
    R2 {
        first: i64,
        second: i64,
        first_over: bool,
    },
    /// Slide a strand across the crossing opposite it in the triangular face
    /// containing `dart`.
    R3 { dart: i64 },
    /// Remove the kink whose monogon face contains `dart`.
    R1Inverse { dart: i64 },
    /// Separate the two strands bounding the bigon face containing `dart`.
    R2Inverse { dart: i64 },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1 { .. } => MoveKind::R1,
            MoveSite::R2 { .. } => MoveKind::R2,
            MoveSite::R3 { .. } => MoveKind::R3,
            MoveSite::R1Inverse { .. } => MoveKind::R1Inverse,
            MoveSite::R2Inverse { .. } => MoveKind::R2Inverse,
        }
    }
}

/// Mutable label-keyed copy of a diagram's map.
struct Edit<'a> {
    old: &'a Diagram,
    alpha: HashMap<i64, i64>,
    vertices: Vec<Option<(VertexKind, Vec<i64>)>>,
    appended: Vec<(VertexKind, Vec<i64>)>,
    next_label: i64,
}

impl<'a> Edit<'a> {
    fn new(old: &'a Diagram) -> Self {
        let parts = old.to_parts();
        let mut alpha = HashMap::new();
        for &(a, b) in &parts.edges {
            alpha.insert(a, b);
            alpha.insert(b, a);
        }
        let next_label = old.map().labels().last().map_or(0, |l| l + 1);
        Self {
            old,
            alpha,
            vertices: parts.vertices.into_iter().map(Some).collect(),
            appended: Vec::new(),
            next_label,
        }
    }

    fn fresh(&mut self) -> i64 {
        self.next_label += 1;
        self.next_label - 1
    }

    fn connect(&mut self, a: i64, b: i64) {
        self.alpha.insert(a, b);
        self.alpha.insert(b, a);
    }

    fn remove_vertex(&mut self, v: usize) -> Vec<i64> {
        let (_, rot) = self.vertices[v].take().expect("vertex removed twice");
        for d in &rot {
            self.alpha.remove(d);
        }
        rot
    }

    /// Reconnects strands after removing vertices. `through` pairs removed
    /// darts that lie on one strand across the removed part; every other
    /// removed dart simply disappears. Strands that close up entirely inside
    /// the removed part become free loops.
    fn splice(&mut self, removed_alpha: &HashMap<i64, i64>, through: &[(i64, i64)]) {
        let mut via: HashMap<i64, i64> = HashMap::new();
        for &(a, b) in through {
            via.insert(a, b);
            via.insert(b, a);
        }
        let removed: BTreeSet<i64> = removed_alpha.keys().copied().collect();
        let mut visited: BTreeSet<i64> = BTreeSet::new();
        let mut new_edges = Vec::new();
        let mut starts: Vec<i64> = via.keys().copied().collect();
        starts.sort();
        for &e in &starts {
            if visited.contains(&e) || removed.contains(&removed_alpha[&e]) {
                continue;
            }
            let outside = removed_alpha[&e];
            let mut cur = e;
            loop {
                visited.insert(cur);
                let next = via[&cur];
                visited.insert(next);
                let p = removed_alpha[&next];
                if removed.contains(&p) {
                    cur = p;
                } else {
                    new_edges.push((outside, p));
                    break;
                }
            }
        }
        let mut loops = 0;
        for &e in &starts {
            if visited.contains(&e) {
                continue;
            }
            let mut cur = e;
            while !visited.contains(&cur) {
                visited.insert(cur);
                let next = via[&cur];
                visited.insert(next);
                cur = removed_alpha[&next];
            }
            loops += 1;
        }
        for (a, b) in new_edges {
            self.connect(a, b);
        }
        for _ in 0..loops {
            let (x, y) = (self.fresh(), self.fresh());
            self.connect(x, y);
            self.appended.push((VertexKind::Loop, vec![x, y]));
        }
    }

    /// Assembles the edited diagram, carrying regions, punctures and
    /// orientation over from the old one. `dissolved` is an old region that
    /// the move cut apart; its darts do not propagate region identity.
    fn finish(self, dissolved: Option<usize>) -> Result<Diagram> {
        let old = self.old;
        let mut vertices: Vec<(VertexKind, Vec<i64>)> = self.vertices.into_iter().flatten().collect();
        vertices.extend(self.appended);
        let mut edges: Vec<(i64, i64)> = self
            .alpha
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(&a, &b)| (a, b))
            .collect();
        edges.sort();
        let mut parts = DiagramParts {
            punctures: old.surface().punctures().to_vec(),
            edges,
            vertices,
            ..Default::default()
        };
        let (map, _) = super::build_map(&parts)?;
        let faces = map
            .trace_faces()
            .map_err(|e| Error::PatternMismatch(format!("move produced an invalid map: {e}")))?;

        let n_old = old.num_regions();
        let mut uf = UnionFind::new(n_old + faces.len());
        for (f, face) in faces.iter().enumerate() {
            for &d in &face.darts {
                if let Some(od) = old.map().index_of(map.label(d)) {
                    let r = old.region_of_dart(od);
                    if Some(r) != dissolved {
                        uf.union(r, n_old + f);
                    }
                }
            }
        }
        let mut class_faces: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for f in 0..faces.len() {
            class_faces.entry(uf.find(n_old + f)).or_default().push(f);
        }
        for fs in class_faces.values() {
            for w in fs.windows(2) {
                parts
                    .region_links
                    .push((map.label(faces[w[0]].min_dart()), map.label(faces[w[1]].min_dart())));
            }
        }
        let mut anchor_of_old_region = |r: usize| -> Result<Option<i64>> {
            if faces.is_empty() {
                return Ok(None);
            }
            let c = uf.find(r);
            class_faces
                .get(&c)
                .map(|fs| Some(map.label(faces[fs[0]].min_dart())))
                .ok_or_else(|| Error::PunctureObstruction("move would delete a marked region".into()))
        };
        parts.outer = anchor_of_old_region(old.outer_region())?;
        for p in 0..old.surface().num_punctures() {
            parts.puncture_anchor.push(anchor_of_old_region(old.puncture_region(p))?);
        }

        // carry the orientation through a surviving dart of each component
        let unoriented = Diagram::from_parts(parts.clone())?;
        let mut departures: Vec<Option<i64>> = vec![None; unoriented.num_components()];
        for &start in old.orientation() {
            let mut d = start;
            loop {
                let arrival = old.map().alpha(d);
                let dep = if let Some(nd) = map.index_of(old.map().label(d)) {
                    Some(nd)
                } else {
                    map.index_of(old.map().label(arrival)).map(|na| map.alpha(na))
                };
                if let Some(dep) = dep {
                    departures[unoriented.component_of(dep)] = Some(map.label(dep));
                    break;
                }
                d = old.strand_partner(arrival);
                if d == start {
                    break;
                }
            }
        }
        let min_dart = component_min_darts(&unoriented);
        parts.orientation = Some(
            departures
                .iter()
                .enumerate()
                .map(|(c, dep)| dep.unwrap_or_else(|| map.label(min_dart[c])))
                .collect(),
        );
        Diagram::from_parts(parts)
    }
}

fn component_min_darts(d: &Diagram) -> Vec<usize> {
    let mut out = vec![usize::MAX; d.num_components()];
    for x in 0..d.map().num_darts() {
        let c = d.component_of(x);
        out[c] = out[c].min(x);
    }
    out
}

fn is_over(map: &PlaneMap, d: usize) -> bool {
    map.position_in_vertex(d) % 2 == 1
}

impl Diagram {
    fn dart(&self, label: i64) -> Result<usize> {
        self.map()
            .index_of(label)
            .ok_or_else(|| Error::PatternMismatch(format!("unknown dart d{label}")))
    }

    /// Whether the face of `d` is a whole region that holds no puncture and
    /// is not the outer region.
    fn face_is_empty_disk(&self, d: usize) -> bool {
        let f = self.face_of(d);
        let r = self.region_of_face(f);
        r != self.outer_region()
            && (0..self.faces().len()).all(|g| g == f || self.region_of_face(g) != r)
            && (0..self.surface().num_punctures()).all(|p| self.puncture_region(p) != r)
    }

    fn check_empty(&self, d: usize, what: &str) -> Result<()> {
        if self.face_is_empty_disk(d) {
            Ok(())
        } else {
            Err(Error::PunctureObstruction(format!(
                "the {what} at d{} contains a puncture, another component, or the outer boundary",
                self.map().label(d)
            )))
        }
    }

    fn require_crossing(&self, d: usize) -> Result<()> {
        if self.vertex_kind(self.map().vertex_of(d)) == VertexKind::Crossing {
            Ok(())
        } else {
            Err(Error::PatternMismatch(format!("d{} is not at a crossing", self.map().label(d))))
        }
    }

    /// Applies a Reidemeister move.
    pub fn apply_move(&self, site: MoveSite) -> Result<Diagram> {
        self.apply_move_inner(site).map(|(d, _)| d)
    }

    /// Applies a move and returns, with the result, the site of the move
    /// that undoes it. Removing a kink or bigon whose strand closes up into a
    /// free loop has no such site and yields `None`.
    pub fn apply_move_with_inverse(&self, site: MoveSite) -> Result<(Diagram, Option<MoveSite>)> {
        self.apply_move_inner(site)
    }

    fn apply_move_inner(&self, site: MoveSite) -> Result<(Diagram, Option<MoveSite>)> {
        match site {
            MoveSite::R1 {
                dart,
                side,
                under_first,
            } => self.r1(dart, side, under_first),
            MoveSite::R2 {
                first,
                second,
                first_over,
            } => self.r2(first, second, first_over),
            MoveSite::R3 { dart } => self.r3(dart),
            MoveSite::R1Inverse { dart } => self.r1_inverse(dart),
            MoveSite::R2Inverse { dart } => self.r2_inverse(dart),
        }
    }

    fn r1(&self, dart: i64, side: KinkSide, under_first: bool) -> Result<(Diagram, Option<MoveSite>)> {
        let x = self.dart(dart)?;
        let y = self.map().alpha(x);
        let (xl, yl) = (dart, self.map().label(y));
        let mut e = Edit::new(self);
        let (kx, ky, l1, l2) = (e.fresh(), e.fresh(), e.fresh(), e.fresh());
        e.connect(xl, kx);
        e.connect(yl, ky);
        e.connect(l1, l2);
        let rotation = match (side, under_first) {
            (KinkSide::Left, true) => vec![kx, ky, l1, l2],
            (KinkSide::Left, false) => vec![l2, kx, ky, l1],
            (KinkSide::Right, true) => vec![kx, l1, l2, ky],
            (KinkSide::Right, false) => vec![l1, l2, ky, kx],
        };
        e.appended.push((VertexKind::Crossing, rotation));
        Ok((e.finish(None)?, Some(MoveSite::R1Inverse { dart: l2 })))
    }

    fn r1_inverse(&self, dart: i64) -> Result<(Diagram, Option<MoveSite>)> {
        let m = self.dart(dart)?;
        let map = self.map();
        self.require_crossing(m)?;
        if map.phi(m) != m {
            return Err(Error::PatternMismatch(format!("d{dart} does not bound a monogon")));
        }
        self.check_empty(m, "kink")?;
        let r1 = map.sigma(m);
        let r2 = map.sigma(r1);
        let v = map.vertex_of(m);
        let mut e = Edit::new(self);
        let removed_alpha: HashMap<i64, i64> = map
            .rotation(v)
            .iter()
            .map(|&d| (map.label(d), map.label(map.alpha(d))))
            .collect();
        e.remove_vertex(v);
        e.splice(&removed_alpha, &[(map.label(r1), map.label(r2))]);
        let result = e.finish(None)?;
        let inverse = self.r1_restoring_site(&result, m);
        Ok((result, inverse))
    }

    /// R1 site that puts back the kink at monogon dart `m` of `self`.
    fn r1_restoring_site(&self, result: &Diagram, m: usize) -> Option<MoveSite> {
        // rotation is cyclically [r1, r2, alpha m, m]: the Left layout entered at r1
        let map = self.map();
        let r1 = map.sigma(m);
        let outside = map.alpha(r1);
        if outside == map.sigma(r1) {
            // the strand closed up into a free loop with fresh darts
            return None;
        }
        result.map().index_of(map.label(outside))?;
        Some(MoveSite::R1 {
            dart: map.label(outside),
            side: KinkSide::Left,
            under_first: map.position_in_vertex(r1) % 2 == 0,
        })
    }

    fn r2(&self, first: i64, second: i64, first_over: bool) -> Result<(Diagram, Option<MoveSite>)> {
        let a = self.dart(first)?;
        let b = self.dart(second)?;
        let map = self.map();
        let (a2, b2) = (map.alpha(a), map.alpha(b));
        if b == a || b == a2 {
            return Err(Error::PatternMismatch("R2 needs two distinct edges".into()));
        }
        if self.region_of_dart(a) != self.region_of_dart(b) {
            return Err(Error::PatternMismatch(format!(
                "d{first} and d{second} do not border a common region"
            )));
        }
        let split = self.face_of(a) == self.face_of(b);
        if split {
            self.check_empty(a, "face crossed by R2")?;
        }
        let mut e = Edit::new(self);
        let (rs, rn, rw, re) = (e.fresh(), e.fresh(), e.fresh(), e.fresh());
        let (ln, ls, lw, le) = (e.fresh(), e.fresh(), e.fresh(), e.fresh());
        e.connect(first, rs);
        e.connect(rn, ln);
        e.connect(ls, map.label(a2));
        e.connect(second, lw);
        e.connect(le, rw);
        e.connect(re, map.label(b2));
        let (r_rot, l_rot) = if first_over {
            (vec![rw, rs, re, rn], vec![lw, ls, le, ln])
        } else {
            (vec![rs, re, rn, rw], vec![ln, lw, ls, le])
        };
        e.appended.push((VertexKind::Crossing, r_rot));
        e.appended.push((VertexKind::Crossing, l_rot));
        let dissolved = split.then(|| self.region_of_dart(a));
        Ok((e.finish(dissolved)?, Some(MoveSite::R2Inverse { dart: rw })))
    }

    fn r2_inverse(&self, dart: i64) -> Result<(Diagram, Option<MoveSite>)> {
        let x = self.dart(dart)?;
        let map = self.map();
        self.require_crossing(x)?;
        let y = map.phi(x);
        if y == x || map.phi(y) != x {
            return Err(Error::PatternMismatch(format!("d{dart} does not bound a bigon")));
        }
        self.require_crossing(y)?;
        let (p, q) = (map.vertex_of(x), map.vertex_of(y));
        if p == q {
            return Err(Error::PatternMismatch("bigon corners lie on one crossing".into()));
        }
        let xs = map.alpha(x);
        let ys = map.alpha(y);
        if is_over(map, x) != is_over(map, xs) {
            return Err(Error::PatternMismatch(format!(
                "the bigon at d{dart} is alternating; R2 needs one strand over at both corners"
            )));
        }
        self.check_empty(x, "bigon")?;
        // restoring site: the strand of x is pushed back over/under the other one
        let opp = |d: usize| self.strand_partner(d);
        let removed_alpha: HashMap<i64, i64> = map
            .rotation(p)
            .iter()
            .chain(map.rotation(q))
            .map(|&d| (map.label(d), map.label(map.alpha(d))))
            .collect();
        let through = [
            (map.label(opp(x)), map.label(opp(xs))),
            (map.label(opp(y)), map.label(opp(ys))),
        ];
        let mut e = Edit::new(self);
        e.remove_vertex(p);
        e.remove_vertex(q);
        e.splice(&removed_alpha, &through);
        let result = e.finish(None)?;
        let inverse = r2_restoring_site(self, &result, x, y);
        Ok((result, inverse))
    }

    fn r3(&self, dart: i64) -> Result<(Diagram, Option<MoveSite>)> {
        let t = self.dart(dart)?;
        let map = self.map();
        let d = [t, map.phi(t), map.phi(map.phi(t))];
        if map.phi(d[2]) != t || d[1] == t || d[2] == t {
            return Err(Error::PatternMismatch(format!("d{dart} does not bound a triangle")));
        }
        for &x in &d {
            self.require_crossing(x)?;
        }
        let xv = [map.vertex_of(d[0]), map.vertex_of(d[1]), map.vertex_of(d[2])];
        if xv[0] == xv[1] || xv[1] == xv[2] || xv[0] == xv[2] {
            return Err(Error::PatternMismatch("triangle corners are not distinct crossings".into()));
        }
        let e_ = [map.alpha(d[0]), map.alpha(d[1]), map.alpha(d[2])];
        if !(0..3).any(|j| is_over(map, d[j]) == is_over(map, e_[j])) {
            return Err(Error::PatternMismatch(
                "no strand of the triangle passes over (or under) both of its crossings".into(),
            ));
        }
        self.check_empty(t, "triangle")?;

        // X_{j+1} has rotation [e_j, d_{j+1}, P_j, Q_j]; strand S_j runs Q_{j-1} .. P_j.
        let pj = |j: usize| map.sigma(d[(j + 1) % 3]);
        let qj = |j: usize| map.sigma(map.sigma(d[(j + 1) % 3]));
        let slots = [pj(2), qj(2), pj(1), qj(1), pj(0), qj(0)];
        let mut strand_of: HashMap<usize, usize> = HashMap::new();
        for j in 0..3 {
            strand_of.insert(pj(j), j);
            strand_of.insert(qj(j), (j + 1) % 3);
        }
        // under strand of each strand pair, the slot its incoming under-end
        // points towards, and the old vertex position of that pair
        let mut under: HashMap<(usize, usize), (usize, usize, usize)> = HashMap::new();
        for j in 0..3 {
            let v = xv[(j + 1) % 3];
            let u_in = map.rotation(v)[0];
            let (sj, sk) = (j, (j + 1) % 3);
            let key = (sj.min(sk), sj.max(sk));
            let (under_strand, from_slot) = if !is_over(map, pj(j)) {
                // S_j under; its darts here are e_j (towards the Q end) and P_j
                let from = if u_in == e_[j] { qj((j + 2) % 3) } else { pj(j) };
                (sj, from)
            } else {
                // S_{j+1} under; its darts here are d_{j+1} (towards P_{j+1}) and Q_j
                let from = if u_in == qj(j) { qj(j) } else { pj((j + 1) % 3) };
                (sk, from)
            };
            under.insert(key, (under_strand, from_slot, v));
        }

        let mut e = Edit::new(self);
        let slot_labels: Vec<i64> = slots.iter().map(|&s| map.label(s)).collect();
        let outside: Vec<i64> = slots.iter().map(|&s| map.label(map.alpha(s))).collect();
        for &v in &xv {
            e.remove_vertex(v);
        }
        // t_i = s_{i+1}
        let t_slots: Vec<usize> = (0..6).map(|i| slots[(i + 1) % 6]).collect();
        let mut new_of_slot: HashMap<i64, i64> = HashMap::new();
        let mut zs = Vec::new();
        for _ in 0..3 {
            let z = [e.fresh(), e.fresh(), e.fresh(), e.fresh()]; // in, out, p, q
            zs.push(z);
        }
        for m in 0..3 {
            new_of_slot.insert(map.label(t_slots[2 * m]), zs[m][2]);
            new_of_slot.insert(map.label(t_slots[2 * m + 1]), zs[m][3]);
        }
        for m in 0..3 {
            e.connect(zs[m][1], zs[(m + 2) % 3][0]);
        }
        for (i, &s) in slot_labels.iter().enumerate() {
            let new = new_of_slot[&s];
            let out = outside[i];
            match new_of_slot.get(&out) {
                Some(&other) => e.connect(new, other),
                None => e.connect(new, out),
            }
        }
        for m in 0..3 {
            let (sp, sq) = (t_slots[2 * m], t_slots[2 * m + 1]);
            let (a, b) = (strand_of[&sp], strand_of[&sq]);
            let (under_strand, from_slot, old_v) = under[&(a.min(b), a.max(b))];
            let [i_, o_, p_, q_] = zs[m];
            let rotation = if under_strand == a {
                if from_slot == sp {
                    vec![p_, q_, i_, o_]
                } else {
                    vec![i_, o_, p_, q_]
                }
            } else if from_slot == sq {
                vec![q_, i_, o_, p_]
            } else {
                vec![o_, p_, q_, i_]
            };
            e.vertices[old_v] = Some((VertexKind::Crossing, rotation));
        }
        let result = e.finish(None)?;
        Ok((result, Some(MoveSite::R3 { dart: zs[0][1] })))
    }

    /// Every R1 site: each dart, both sides, both crossing choices.
    pub fn r1_sites(&self) -> Vec<MoveSite> {
        let mut out = Vec::new();
        for &dart in self.map().labels() {
            for side in [KinkSide::Left, KinkSide::Right] {
                for under_first in [true, false] {
                    out.push(MoveSite::R1 {
                        dart,
                        side,
                        under_first,
                    });
                }
            }
        }
        out
    }

    /// R2 sites whose two darts border a common region on their right.
    /// Sites that would cut a marked region are included; applying them fails.
    pub fn r2_sites(&self) -> Vec<MoveSite> {
        let map = self.map();
        let mut out = Vec::new();
        for a in 0..map.num_darts() {
            for b in 0..map.num_darts() {
                if b == a || b == map.alpha(a) || self.region_of_dart(a) != self.region_of_dart(b) {
                    continue;
                }
                for first_over in [true, false] {
                    out.push(MoveSite::R2 {
                        first: map.label(a),
                        second: map.label(b),
                        first_over,
                    });
                }
            }
        }
        out
    }

    /// Monogon darts where [`MoveSite::R1Inverse`] matches its pattern.
    pub fn r1_inverse_sites(&self) -> Vec<MoveSite> {
        let map = self.map();
        (0..map.num_darts())
            .filter(|&d| self.vertex_kind(map.vertex_of(d)) == VertexKind::Crossing && map.phi(d) == d)
            .map(|d| MoveSite::R1Inverse { dart: map.label(d) })
            .collect()
    }

    /// Bigon darts where [`MoveSite::R2Inverse`] matches its pattern.
    pub fn r2_inverse_sites(&self) -> Vec<MoveSite> {
        let map = self.map();
        (0..map.num_darts())
            .filter(|&x| {
                let y = map.phi(x);
                y != x
                    && map.phi(y) == x
                    && x < y
                    && self.vertex_kind(map.vertex_of(x)) == VertexKind::Crossing
                    && self.vertex_kind(map.vertex_of(y)) == VertexKind::Crossing
                    && map.vertex_of(x) != map.vertex_of(y)
                    && is_over(map, x) == is_over(map, map.alpha(x))
            })
            .map(|d| MoveSite::R2Inverse { dart: map.label(d) })
            .collect()
    }

    /// Triangle darts (one per triangle) where [`MoveSite::R3`] matches its pattern.
    pub fn r3_sites(&self) -> Vec<MoveSite> {
        let map = self.map();
        let mut out = Vec::new();
        for f in self.faces() {
            if f.darts.len() != 3 {
                continue;
            }
            let d = &f.darts;
            let vs: Vec<usize> = d.iter().map(|&x| map.vertex_of(x)).collect();
            if vs.iter().any(|&v| self.vertex_kind(v) != VertexKind::Crossing)
                || vs[0] == vs[1]
                || vs[1] == vs[2]
                || vs[0] == vs[2]
            {
                continue;
            }
            if d.iter().any(|&x| is_over(map, x) == is_over(map, map.alpha(x))) {
                out.push(MoveSite::R3 { dart: map.label(d[0]) });
            }
        }
        out
    }
}

/// Site of the R2 move that recreates the bigon `{x, y}` just removed from `old`.
fn r2_restoring_site(old: &Diagram, result: &Diagram, x: usize, y: usize) -> Option<MoveSite> {
    // In R2's layout the bigon is {RW, LN}: RW's edge is the crossed strand and
    // LN's edge the cap of the pushed strand, which entered at RS.
    let map = old.map();
    let cap_end = map.alpha(y);
    let a = map.alpha(old.strand_partner(cap_end));
    let b = map.alpha(old.strand_partner(map.alpha(x)));
    let (first, second) = (map.label(a), map.label(b));
    result.map().index_of(first)?;
    result.map().index_of(second)?;
    Some(MoveSite::R2 {
        first,
        second,
        first_over: is_over(map, cap_end),
    })
}
