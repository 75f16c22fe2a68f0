//! Out-/in-branchings and good pairs.
//!
//! A good `(u, v)`-pair is an out-branching rooted at `u` and an in-branching
//! rooted at `v` with no arc in common. Branchings store arc ids of the
//! carrier digraph they were built on.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::connectivity::{arc_disjoint_paths, is_k_arc_strong, path_vertices, strong_components};
use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, SplitDigraph, VertexId};
use crate::semicomplete::StrongArcDecomposition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Out,
    In,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branching {
    pub root: VertexId,
    pub arcs: Vec<ArcId>,
    pub direction: Direction,
}

impl Branching {
    fn new(root: VertexId, mut arcs: Vec<ArcId>, direction: Direction) -> Self {
        arcs.sort();
        Branching { root, arcs, direction }
    }

    /// Vertices touched by the branching, the root included.
    pub fn vertices(&self, g: &Digraph) -> Vec<VertexId> {
        let mut seen = vec![false; g.order()];
        seen[self.root] = true;
        for &a in &self.arcs {
            let (t, h) = g.endpoints(a);
            seen[t] = true;
            seen[h] = true;
        }
        g.vertices().filter(|&v| seen[v]).collect()
    }

    /// For an out-branching, the parent of each vertex; for an in-branching,
    /// the vertex each one points to. `None` at the root and off the tree.
    pub fn parent_map(&self, g: &Digraph) -> Vec<Option<VertexId>> {
        let mut parent = vec![None; g.order()];
        for &a in &self.arcs {
            let (t, h) = g.endpoints(a);
            match self.direction {
                Direction::Out => parent[h] = Some(t),
                Direction::In => parent[t] = Some(h),
            }
        }
        parent
    }

    fn reversed(&self) -> Branching {
        let direction = match self.direction {
            Direction::Out => Direction::In,
            Direction::In => Direction::Out,
        };
        Branching { root: self.root, arcs: self.arcs.clone(), direction }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodPair {
    pub out: Branching,
    pub in_: Branching,
}

impl GoodPair {
    /// The pair for the reversed digraph: arc ids are shared, so the
    /// out-branching there is this in-branching read backwards.
    fn reversed(&self) -> GoodPair {
        GoodPair { out: self.in_.reversed(), in_: self.out.reversed() }
    }
}

/// Tree grown from `root` over arcs allowed by `allowed`, inside `within`.
/// The frontier is expanded lowest vertex id first. Returns the tree arcs.
fn grow(
    g: &Digraph,
    root: VertexId,
    direction: Direction,
    allowed: impl Fn(ArcId) -> bool,
    within: Option<&[bool]>,
) -> (Vec<ArcId>, Vec<bool>) {
    let mut seen = vec![false; g.order()];
    let mut tree = Vec::new();
    let mut heap = BinaryHeap::from([Reverse(root)]);
    seen[root] = true;
    while let Some(Reverse(v)) = heap.pop() {
        let list = match direction {
            Direction::Out => g.out_arcs(v),
            Direction::In => g.in_arcs(v),
        };
        for &a in list {
            if !allowed(a) {
                continue;
            }
            let (t, h) = g.endpoints(a);
            let w = if direction == Direction::Out { h } else { t };
            if seen[w] || within.is_some_and(|m| !m[w]) {
                continue;
            }
            seen[w] = true;
            tree.push(a);
            heap.push(Reverse(w));
        }
    }
    (tree, seen)
}

/// Good `(u, v)`-pair inside a strong arc decomposition: the out-branching
/// uses the first class, the in-branching the second.
pub fn good_pair_from_sad(g: &Digraph, sad: &StrongArcDecomposition, u: VertexId, v: VertexId) -> Result<GoodPair> {
    let labels = sad.labels(g.arc_count());
    let mut trees = Vec::with_capacity(2);
    for (class, root, direction) in [(0u8, u, Direction::Out), (1, v, Direction::In)] {
        if root >= g.order() {
            return Err(Error::VertexOutOfRange { vertex: root, order: g.order() });
        }
        let (arcs, seen) = grow(g, root, direction, |a| labels[a.0] == Some(class), None);
        if seen.iter().any(|s| !s) {
            return Err(Error::VerificationFailed(format!("class {} is not strong", class + 1)));
        }
        trees.push(Branching::new(root, arcs, direction));
    }
    let in_ = trees.pop().expect("two trees");
    let out = trees.pop().expect("two trees");
    Ok(GoodPair { out, in_ })
}

fn check_branching(g: &Digraph, b: &Branching, span: &[bool]) -> std::result::Result<(), String> {
    let name = match b.direction {
        Direction::Out => "out-branching",
        Direction::In => "in-branching",
    };
    if b.root >= g.order() || !span[b.root] {
        return Err(format!("{name}: root {} is outside the vertex set", b.root));
    }
    let mut link = vec![None; g.order()];
    for &a in &b.arcs {
        if a.0 >= g.arc_count() {
            return Err(format!("{name}: arc {} does not exist", a.0));
        }
        let (t, h) = g.endpoints(a);
        if !span[t] || !span[h] {
            return Err(format!("{name}: arc {} ({t} -> {h}) leaves the vertex set", a.0));
        }
        let (child, next) = if b.direction == Direction::Out { (h, t) } else { (t, h) };
        if child == b.root {
            return Err(format!("{name}: root {child} has a tree arc {}", a.0));
        }
        if link[child].is_some() {
            return Err(format!("{name}: vertex {child} has two tree arcs"));
        }
        link[child] = Some(next);
    }
    let size = span.iter().filter(|&&s| s).count();
    if b.arcs.len() + 1 != size {
        return Err(format!("{name}: {} arcs for {size} vertices", b.arcs.len()));
    }
    // follow parent pointers; a cycle would revisit a vertex before the root
    for v in g.vertices().filter(|&v| span[v]) {
        let mut cur = v;
        for _ in 0..size {
            if cur == b.root {
                break;
            }
            match link[cur] {
                Some(next) => cur = next,
                None => return Err(format!("{name}: vertex {cur} is not connected to the root")),
            }
        }
        if cur != b.root {
            return Err(format!("{name}: vertex {v} does not reach the root"));
        }
    }
    Ok(())
}

/// Checks both branchings span every vertex of `g`, are well formed and
/// share no arc.
pub fn verify_good_pair(g: &Digraph, gp: &GoodPair) -> std::result::Result<(), String> {
    if gp.out.direction != Direction::Out || gp.in_.direction != Direction::In {
        return Err("branching directions are swapped".into());
    }
    let span = vec![true; g.order()];
    check_branching(g, &gp.out, &span)?;
    check_branching(g, &gp.in_, &span)?;
    let mut used = vec![false; g.arc_count()];
    gp.out.arcs.iter().for_each(|a| used[a.0] = true);
    if let Some(a) = gp.in_.arcs.iter().find(|a| used[a.0]) {
        let (t, h) = g.endpoints(*a);
        return Err(format!("arc {} ({t} -> {h}) is in both branchings", a.0));
    }
    Ok(())
}

/// Extends a good pair on `D<X>` to all of `g`: each outside vertex hangs
/// below its lowest in-neighbour in `x` for the out-branching and above its
/// lowest out-neighbour in `x` for the in-branching.
pub fn extend_good_pair(g: &Digraph, x: &[VertexId], gp: &GoodPair) -> Result<GoodPair> {
    let mut inside = vec![false; g.order()];
    x.iter().for_each(|&v| inside[v] = true);
    let mut out = gp.out.arcs.clone();
    let mut in_ = gp.in_.arcs.clone();
    for w in g.vertices().filter(|&w| !inside[w]) {
        let from = g.in_arcs(w).iter().find(|a| inside[g.arc(**a).tail]);
        let to = g.out_arcs(w).iter().find(|a| inside[g.arc(**a).head]);
        match (from, to) {
            (Some(&a), Some(&b)) => {
                out.push(a);
                in_.push(b);
            }
            _ => return Err(Error::DegreeHypothesisFails(w)),
        }
    }
    Ok(GoodPair {
        out: Branching::new(gp.out.root, out, Direction::Out),
        in_: Branching::new(gp.in_.root, in_, Direction::In),
    })
}

/// Good `(u, u)`-pair in a 2-arc-strong digraph `g` given a set `s`
/// containing `u` that induces a semicomplete digraph, when every vertex
/// outside `s` has two distinct in- and two distinct out-neighbours in `s`.
pub fn good_uu_pair(g: &Digraph, s: &[VertexId], u: VertexId) -> Result<GoodPair> {
    let n = g.order();
    let pre = |m: String| Error::PreconditionViolated(m);
    if u >= n || s.iter().any(|&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: u.max(s.iter().copied().max().unwrap_or(0)), order: n });
    }
    let mut in_s = vec![false; n];
    s.iter().for_each(|&v| in_s[v] = true);
    if !in_s[u] {
        return Err(pre(format!("root {u} is not in the semicomplete set")));
    }
    let members: Vec<VertexId> = g.vertices().filter(|&v| in_s[v]).collect();
    for (i, &a) in members.iter().enumerate() {
        if let Some(&b) = members[i + 1..].iter().find(|&&b| !g.adjacent(a, b)) {
            return Err(pre(format!("vertices {a} and {b} of the set are not adjacent")));
        }
    }
    for w in g.vertices().filter(|&w| !in_s[w]) {
        let ins = g.in_neighbors(w).into_iter().filter(|&v| in_s[v]).count();
        let outs = g.out_neighbors(w).into_iter().filter(|&v| in_s[v]).count();
        if ins < 2 || outs < 2 {
            return Err(pre(format!("vertex {w} has {ins} in- and {outs} out-neighbours in the set")));
        }
    }
    if !is_k_arc_strong(g, 2) {
        return Err(pre("the digraph is not 2-arc-strong".into()));
    }
    let nb = Neighbourhood::new(g, &in_s, u);
    if nb.a.is_empty() && nb.b.is_empty() {
        // every other vertex of the set forms a 2-cycle with u
        let out = nb.c.iter().map(|&r| g.find_arc(u, r).expect("2-cycle")).collect();
        let in_ = nb.c.iter().map(|&r| g.find_arc(r, u).expect("2-cycle")).collect();
        let gp = GoodPair { out: Branching::new(u, out, Direction::Out), in_: Branching::new(u, in_, Direction::In) };
        return extend_good_pair(g, &members, &gp);
    }
    if nb.a.is_empty() {
        let r = g.reversed();
        let nb = Neighbourhood::new(&r, &in_s, u);
        return Ok(uu_construction(&r, &in_s, u, &nb)?.reversed());
    }
    uu_construction(g, &in_s, u, &nb)
}

/// Good pair rooted at `u` in a 2-arc-strong split digraph in which `u` is
/// adjacent to every vertex of `V2`, built on the set `V2 + u`.
pub fn good_uu_pair_split(d: &SplitDigraph, u: VertexId) -> Result<GoodPair> {
    let mut s = d.v2();
    if d.is_v1(u) {
        s.push(u);
        s.sort();
    }
    good_uu_pair(d.graph(), &s, u)
}

/// Out-neighbours of `u` in the set only (`a`), in-neighbours only (`b`) and
/// those on a 2-cycle with `u` (`c`).
struct Neighbourhood {
    a: Vec<VertexId>,
    b: Vec<VertexId>,
    c: Vec<VertexId>,
}

impl Neighbourhood {
    fn new(g: &Digraph, in_s: &[bool], u: VertexId) -> Self {
        let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
        for v in g.vertices().filter(|&v| in_s[v] && v != u) {
            match (g.has_arc(u, v), g.has_arc(v, u)) {
                (true, true) => c.push(v),
                (true, false) => a.push(v),
                (false, true) => b.push(v),
                (false, false) => {}
            }
        }
        Neighbourhood { a, b, c }
    }
}

fn mask(n: usize, vs: &[VertexId]) -> Vec<bool> {
    let mut m = vec![false; n];
    vs.iter().for_each(|&v| m[v] = true);
    m
}

/// The construction for a non-empty `a`: paths from the terminal component
/// of `D<A>` to the initial component of `D<B>` (or to `u`), trimmed, then
/// both branchings assembled around them.
fn uu_construction(g: &Digraph, in_s: &[bool], u: VertexId, nb: &Neighbourhood) -> Result<GoodPair> {
    let n = g.order();
    let extreme = |vs: &[VertexId], last: bool| -> Vec<VertexId> {
        let (h, map) = g.induced(vs);
        let comps = strong_components(&h);
        let part = if last { comps.terminal() } else { comps.initial() };
        let mut out: Vec<VertexId> = part.iter().map(|&i| map[i]).collect();
        out.sort();
        out
    };
    let ter = extreme(&nb.a, true);
    let sinks = if nb.b.is_empty() { vec![u] } else { extreme(&nb.b, false) };
    let paths = arc_disjoint_paths(g, &ter, &sinks, 2)
        .ok_or_else(|| Error::VerificationFailed("two arc-disjoint paths missing in a 2-arc-strong digraph".into()))?;
    let back_set = mask(n, &[nb.b.as_slice(), &nb.c, &[u]].concat());
    let front_set = mask(n, &[nb.a.as_slice(), &nb.c, &[u]].concat());
    let vs1 = path_vertices(g, &paths[0]);
    let k1 = vs1.iter().position(|&v| back_set[v]).expect("path ends in B or at u");
    let q1 = paths[0][..k1].to_vec();
    let vs2 = path_vertices(g, &paths[1]);
    let k2 = vs2.iter().rposition(|&v| front_set[v]).expect("path starts in A");
    let q2 = paths[1][k2..].to_vec();
    assemble(g, in_s, u, nb, &ter, &sinks, &q1, &q2)
}

/// Builds the pair from trimmed paths `q1` (terminal component of `D<A>` to
/// `B + C + u`) and `q2` (`A + C + u` to `sinks`), then extends it to `g`.
#[allow(clippy::too_many_arguments)]
fn assemble(
    g: &Digraph,
    in_s: &[bool],
    u: VertexId,
    nb: &Neighbourhood,
    ter: &[VertexId],
    sinks: &[VertexId],
    q1: &[ArcId],
    q2: &[ArcId],
) -> Result<GoodPair> {
    let n = g.order();
    let on1 = mask(n, &path_vertices(g, q1));
    let vs2 = if q2.is_empty() { vec![u] } else { path_vertices(g, q2) };
    let on2 = mask(n, &vs2);
    let p1 = g.arc(q1[0]).tail;
    let start2 = vs2[0];
    let end2 = *vs2.last().expect("non-empty");
    let in_ter = mask(n, ter);
    let arc = |t: VertexId, h: VertexId| {
        g.find_arc(t, h).ok_or_else(|| Error::VerificationFailed(format!("missing arc {t} -> {h}")))
    };

    let mut in_arcs = q1.to_vec();
    let (tree, _) = grow(g, p1, Direction::In, |_| true, Some(&in_ter));
    in_arcs.extend(tree);
    for &r in nb.b.iter().chain(&nb.c) {
        in_arcs.push(arc(r, u)?);
    }
    for &r in nb.a.iter().filter(|&&r| !in_ter[r] && !on1[r]) {
        in_arcs.push(arc(r, p1)?);
    }
    for (i, &w) in vs2.iter().enumerate() {
        if in_s[w] || on1[w] {
            continue;
        }
        let succ = vs2[i + 1];
        let wo =
            g.out_neighbors(w).into_iter().find(|&o| in_s[o] && o != succ).ok_or(Error::DegreeHypothesisFails(w))?;
        in_arcs.push(arc(w, wo)?);
    }

    let mut out_arcs = q2.to_vec();
    if !nb.b.is_empty() {
        let in_ini = mask(n, sinks);
        let (tree, _) = grow(g, end2, Direction::Out, |_| true, Some(&in_ini));
        out_arcs.extend(tree);
        for &r in nb.b.iter().filter(|&&r| !in_ini[r] && !on2[r]) {
            out_arcs.push(arc(end2, r)?);
        }
    }
    for &r in nb.a.iter().chain(&nb.c) {
        out_arcs.push(arc(u, r)?);
    }
    let vs1 = path_vertices(g, q1);
    for (i, &w) in vs1.iter().enumerate() {
        if in_s[w] || on2[w] {
            continue;
        }
        let pred = vs1[i - 1];
        let wi =
            g.in_neighbors(w).into_iter().find(|&o| in_s[o] && o != pred).ok_or(Error::DegreeHypothesisFails(w))?;
        out_arcs.push(arc(wi, w)?);
    }
    debug_assert!(start2 == u || nb.a.contains(&start2) || nb.c.contains(&start2));

    let mut x: Vec<VertexId> = g.vertices().filter(|&v| in_s[v] || on1[v] || on2[v]).collect();
    x.sort();
    let gp =
        GoodPair { out: Branching::new(u, out_arcs, Direction::Out), in_: Branching::new(u, in_arcs, Direction::In) };
    extend_good_pair(g, &x, &gp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_split;
    use crate::semicomplete::search_decomposition;

    fn bidirected(n: usize) -> Digraph {
        let mut arcs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    arcs.push((a, b));
                }
            }
        }
        Digraph::from_arcs(n, &arcs).unwrap()
    }

    fn pairs(g: &Digraph, b: &Branching) -> Vec<(VertexId, VertexId)> {
        let mut v: Vec<_> = b.arcs.iter().map(|&a| g.endpoints(a)).collect();
        v.sort();
        v
    }

    // u = 0, w = 1, p1 = 2, wI = 3, p2 = 4, q1 = 5, q2 = 6
    fn hub_pair_instance() -> Digraph {
        Digraph::from_arcs(
            7,
            &[
                (0, 2),
                (0, 3),
                (0, 4),
                (4, 0),
                (5, 0),
                (6, 0),
                (3, 2),
                (6, 5),
                (4, 6),
                (2, 1),
                (3, 1),
                (1, 5),
                (1, 6),
                (2, 4),
                (5, 3),
                (5, 2),
                (2, 6),
                (3, 4),
                (6, 3),
                (4, 5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn pair_from_bidirected_k4_decomposition() {
        let g = bidirected(4);
        let sad = search_decomposition(&g).unwrap();
        let gp = good_pair_from_sad(&g, &sad, 0, 2).unwrap();
        verify_good_pair(&g, &gp).unwrap();
        assert_eq!((gp.out.root, gp.in_.root), (0, 2));
        for u in 0..4 {
            verify_good_pair(&g, &good_pair_from_sad(&g, &sad, u, u).unwrap()).unwrap();
        }
    }

    #[test]
    fn verifier_reports_shared_arc_and_unreachable_vertex() {
        let g = Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0), (1, 0)]).unwrap();
        let shared = GoodPair {
            out: Branching::new(0, vec![ArcId(0), ArcId(1)], Direction::Out),
            in_: Branching::new(0, vec![ArcId(1), ArcId(2)], Direction::In),
        };
        let err = verify_good_pair(&g, &shared).unwrap_err();
        assert!(err.contains("arc 1") && err.contains("both"), "{err}");
        let broken = GoodPair {
            out: Branching::new(0, vec![ArcId(0), ArcId(2)], Direction::Out),
            in_: Branching::new(0, vec![ArcId(3), ArcId(2)], Direction::In),
        };
        let err = verify_good_pair(&g, &broken).unwrap_err();
        assert!(err.contains("out-branching"), "{err}");
    }

    #[test]
    fn extension_hangs_outside_vertices() {
        let g = Digraph::from_arcs(3, &[(0, 1), (1, 0), (0, 2), (2, 1)]).unwrap();
        let gp = GoodPair {
            out: Branching::new(0, vec![ArcId(0)], Direction::Out),
            in_: Branching::new(0, vec![ArcId(1)], Direction::In),
        };
        let all = extend_good_pair(&g, &[0, 1, 2], &gp).unwrap();
        assert_eq!(all, gp);
        let ext = extend_good_pair(&g, &[0, 1], &gp).unwrap();
        assert_eq!(pairs(&g, &ext.out), vec![(0, 1), (0, 2)]);
        assert_eq!(pairs(&g, &ext.in_), vec![(1, 0), (2, 1)]);
        verify_good_pair(&g, &ext).unwrap();
        let lonely = Digraph::from_arcs(3, &[(0, 1), (1, 0), (0, 2)]).unwrap();
        assert_eq!(extend_good_pair(&lonely, &[0, 1], &gp), Err(Error::DegreeHypothesisFails(2)));
    }

    #[test]
    fn drawn_pair_from_given_paths() {
        let g = hub_pair_instance();
        assert!(is_k_arc_strong(&g, 2));
        let s = [0, 2, 3, 4, 5, 6];
        let in_s = mask(7, &s);
        let nb = Neighbourhood::new(&g, &in_s, 0);
        assert_eq!((nb.a.clone(), nb.b.clone(), nb.c.clone()), (vec![2, 3], vec![5, 6], vec![4]));
        let a = |t, h| g.find_arc(t, h).unwrap();
        let gp = assemble(&g, &in_s, 0, &nb, &[2], &[6], &[a(2, 1), a(1, 5)], &[a(4, 6)]).unwrap();
        assert_eq!(pairs(&g, &gp.out), vec![(0, 2), (0, 3), (0, 4), (3, 1), (4, 6), (6, 5)]);
        assert_eq!(pairs(&g, &gp.in_), vec![(1, 5), (2, 1), (3, 2), (4, 0), (5, 0), (6, 0)]);
        verify_good_pair(&g, &gp).unwrap();
        let auto = good_uu_pair(&g, &s, 0).unwrap();
        verify_good_pair(&g, &auto).unwrap();
    }

    #[test]
    fn all_two_cycles_gives_stars() {
        let g = bidirected(4);
        let gp = good_uu_pair(&g, &[0, 1, 2, 3], 1).unwrap();
        assert_eq!(pairs(&g, &gp.out), vec![(1, 0), (1, 2), (1, 3)]);
        assert_eq!(pairs(&g, &gp.in_), vec![(0, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn empty_in_only_set_routes_to_the_root() {
        // u = 0 dominates 1 and forms 2-cycles with 2 and 3; 1 <-> 2 <-> 3 <-> 1
        let g = Digraph::from_arcs(
            4,
            &[(0, 1), (0, 2), (2, 0), (0, 3), (3, 0), (1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 1)],
        )
        .unwrap();
        assert!(is_k_arc_strong(&g, 2));
        let gp = good_uu_pair(&g, &[0, 1, 2, 3], 0).unwrap();
        verify_good_pair(&g, &gp).unwrap();
        // the reversed digraph takes the mirrored route
        let r = g.reversed();
        verify_good_pair(&r, &good_uu_pair(&r, &[0, 1, 2, 3], 0).unwrap()).unwrap();
    }

    #[test]
    fn preconditions_are_checked() {
        let g = hub_pair_instance();
        assert!(matches!(good_uu_pair(&g, &[0, 2, 3, 4, 5, 6], 1), Err(Error::PreconditionViolated(_))));
        assert!(matches!(good_uu_pair(&g, &[0, 1, 2], 0), Err(Error::PreconditionViolated(_))));
        let cycle = Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(good_uu_pair(&cycle, &[0, 1, 2], 0), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn split_form_adds_the_root() {
        let mut arcs = vec![(0, 1), (1, 2), (2, 0)];
        for s in 0..3 {
            arcs.push((3, s));
            arcs.push((s, 3));
        }
        let d = validate_split(Digraph::from_arcs(4, &arcs).unwrap(), &[3], &[0, 1, 2]).unwrap();
        for u in 0..4 {
            verify_good_pair(d.graph(), &good_uu_pair_split(&d, u).unwrap()).unwrap();
        }
    }
}
