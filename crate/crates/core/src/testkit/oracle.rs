//! Brute-force ground truth. Nothing here calls into the decomposition,
//! connectivity or nice-decomposition code under test.

use crate::branchings::{Branching, Direction, GoodPair};
use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, VertexId};
use crate::semicomplete::StrongArcDecomposition;

pub const DEFAULT_ORACLE_BOUND: usize = 18;

/// Reachability from `start` over arcs with `live[a]`, forwards or backwards.
fn reach(
    g: &Digraph,
    start: VertexId,
    forward: bool,
    live: impl Fn(ArcId) -> bool,
    skip: Option<VertexId>,
) -> Vec<bool> {
    let mut seen = vec![false; g.order()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        let list = if forward { g.out_arcs(v) } else { g.in_arcs(v) };
        for &a in list {
            if !live(a) {
                continue;
            }
            let (t, h) = g.endpoints(a);
            let w = if forward { h } else { t };
            if !seen[w] && Some(w) != skip {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

fn strong_with(g: &Digraph, live: impl Fn(ArcId) -> bool + Copy, skip: Option<VertexId>) -> bool {
    let Some(start) = g.vertices().find(|&v| Some(v) != skip) else { return true };
    let ok = |seen: Vec<bool>| g.vertices().all(|v| seen[v] || Some(v) == skip);
    ok(reach(g, start, true, live, skip)) && ok(reach(g, start, false, live, skip))
}

pub fn brute_is_strong(g: &Digraph) -> bool {
    strong_with(g, |_| true, None)
}

/// Strong after deleting any `k - 1` arcs, checked over every subset.
pub fn brute_is_k_arc_strong(g: &Digraph, k: usize) -> bool {
    let m = g.arc_count();
    let mut removed = vec![false; m];
    fn go(g: &Digraph, removed: &mut [bool], from: usize, left: usize) -> bool {
        if !strong_with(g, |a| !removed[a.0], None) {
            return false;
        }
        if left == 0 {
            return true;
        }
        for a in from..removed.len() {
            removed[a] = true;
            let ok = go(g, removed, a + 1, left - 1);
            removed[a] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    go(g, &mut removed, 0, k.saturating_sub(1))
}

/// Vertex version of 2-strong: at least three vertices, strong, and strong
/// after deleting any single vertex.
pub fn brute_is_two_strong(g: &Digraph) -> bool {
    g.order() >= 3 && brute_is_strong(g) && g.vertices().all(|v| strong_with(g, |_| true, Some(v)))
}

/// Arcs whose deletion destroys strongness, by deleting each in turn.
pub fn brute_cut_arcs(g: &Digraph) -> Vec<ArcId> {
    g.arc_ids().filter(|&c| !strong_with(g, |a| a != c, None)).collect()
}

/// Exhaustive 2-colouring search for a strong arc decomposition. Pruning:
/// every vertex keeps a possible in- and out-arc in both classes (a forced
/// last option is assigned immediately), and both classes stay potentially
/// strong. Classes are symmetric, so the first arc goes to class 1.
pub fn oracle_sad(g: &Digraph, bound: usize) -> Result<Option<StrongArcDecomposition>> {
    let m = g.arc_count();
    if m > bound {
        return Err(Error::TooLarge { arcs: m, bound });
    }
    if g.order() <= 1 {
        return Ok(Some(StrongArcDecomposition::new(Vec::new(), g.arc_ids().collect())));
    }
    let mut s = ColourSearch::new(g);
    if !s.start() {
        return Ok(None);
    }
    if !s.solve() {
        return Ok(None);
    }
    let class = |c: u8| g.arc_ids().filter(|a| s.colour[a.0] == c).collect::<Vec<_>>();
    Ok(Some(StrongArcDecomposition::new(class(0), class(1))))
}

const FREE: u8 = 2;

struct ColourSearch<'g> {
    g: &'g Digraph,
    colour: Vec<u8>,
    /// `room[c][0][v]`: arcs into `v` that are free or coloured `c`;
    /// `room[c][1][v]`: the same for arcs out of `v`.
    room: [[Vec<usize>; 2]; 2],
    trail: Vec<usize>,
}

impl<'g> ColourSearch<'g> {
    fn new(g: &'g Digraph) -> Self {
        let ins: Vec<usize> = g.vertices().map(|v| g.in_degree(v)).collect();
        let outs: Vec<usize> = g.vertices().map(|v| g.out_degree(v)).collect();
        ColourSearch {
            g,
            colour: vec![FREE; g.arc_count()],
            room: [[ins.clone(), outs.clone()], [ins, outs]],
            trail: Vec::new(),
        }
    }

    fn start(&mut self) -> bool {
        if self.g.vertices().any(|v| self.room[0][0][v] < 2 || self.room[0][1][v] < 2) {
            return false;
        }
        self.assign(ArcId(0), 0) && self.feasible()
    }

    /// Colours `a` with `c` and propagates forced choices. False on conflict;
    /// the trail records everything coloured either way.
    fn assign(&mut self, a: ArcId, c: u8) -> bool {
        let mut queue = vec![(a, c)];
        while let Some((a, c)) = queue.pop() {
            match self.colour[a.0] {
                x if x == c => continue,
                FREE => {}
                _ => return false,
            }
            self.colour[a.0] = c;
            self.trail.push(a.0);
            let other = (1 - c) as usize;
            let (t, h) = self.g.endpoints(a);
            self.room[other][1][t] -= 1;
            self.room[other][0][h] -= 1;
            for (side, v) in [(1, t), (0, h)] {
                match self.room[other][side][v] {
                    0 => return false,
                    1 => {
                        let list = if side == 0 { self.g.in_arcs(v) } else { self.g.out_arcs(v) };
                        if let Some(&f) = list.iter().find(|f| self.colour[f.0] == FREE) {
                            queue.push((f, other as u8));
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().expect("trail entry");
            let c = self.colour[a];
            self.colour[a] = FREE;
            let other = (1 - c) as usize;
            let (t, h) = self.g.endpoints(ArcId(a));
            self.room[other][1][t] += 1;
            self.room[other][0][h] += 1;
        }
    }

    fn feasible(&self) -> bool {
        (0..2u8).all(|c| strong_with(self.g, |a| self.colour[a.0] != 1 - c, None))
    }

    fn solve(&mut self) -> bool {
        let Some(a) = self.colour.iter().position(|&c| c == FREE) else {
            return true;
        };
        for c in 0..2u8 {
            let mark = self.trail.len();
            if self.assign(ArcId(a), c) && self.feasible() && self.solve() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Exhaustive search for a good `(u, v)`-pair: the out-branching is built
/// one parent arc at a time (vertices in id order), and a branch is dropped
/// as soon as the unused arcs no longer let every vertex reach `v`.
pub fn oracle_good_pair(g: &Digraph, u: VertexId, v: VertexId, bound: usize) -> Result<Option<GoodPair>> {
    let m = g.arc_count();
    if m > bound {
        return Err(Error::TooLarge { arcs: m, bound });
    }
    for r in [u, v] {
        if r >= g.order() {
            return Err(Error::VertexOutOfRange { vertex: r, order: g.order() });
        }
    }
    let order: Vec<VertexId> = g.vertices().filter(|&x| x != u).collect();
    let mut parent = vec![None; g.order()];
    let mut taken = vec![false; m];
    if !pair_search(g, u, v, &order, 0, &mut parent, &mut taken) {
        return Ok(None);
    }
    let out: Vec<ArcId> = g.arc_ids().filter(|a| taken[a.0]).collect();
    let mut in_ = Vec::new();
    let mut seen = vec![false; g.order()];
    seen[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for &a in g.in_arcs(x) {
            let t = g.arc(a).tail;
            if !taken[a.0] && !seen[t] {
                seen[t] = true;
                in_.push(a);
                stack.push(t);
            }
        }
    }
    in_.sort();
    Ok(Some(GoodPair {
        out: Branching { root: u, arcs: out, direction: Direction::Out },
        in_: Branching { root: v, arcs: in_, direction: Direction::In },
    }))
}

fn pair_search(
    g: &Digraph,
    u: VertexId,
    v: VertexId,
    order: &[VertexId],
    i: usize,
    parent: &mut [Option<VertexId>],
    taken: &mut [bool],
) -> bool {
    if !g.vertices().all({
        let seen = reach(g, v, false, |a| !taken[a.0], None);
        move |x| seen[x]
    }) {
        return false;
    }
    let Some(&x) = order.get(i) else {
        return true;
    };
    for &a in g.in_arcs(x) {
        let p = g.arc(a).tail;
        // following parents from p must not come back to x
        let mut cur = Some(p);
        let mut cycle = false;
        while let Some(c) = cur {
            if c == x {
                cycle = true;
                break;
            }
            if c == u {
                break;
            }
            cur = parent[c];
        }
        if cycle {
            continue;
        }
        parent[x] = Some(p);
        taken[a.0] = true;
        if pair_search(g, u, v, order, i + 1, parent, taken) {
            return true;
        }
        parent[x] = None;
        taken[a.0] = false;
    }
    false
}

/// Every ordered partition of the vertices of `s` into blocks inducing
/// strong subdigraphs whose backward arcs are exactly the cut arcs. Meant
/// for up to seven vertices.
pub fn oracle_nice_decompositions(s: &Digraph) -> Vec<Vec<Vec<VertexId>>> {
    let n = s.order();
    let cuts = brute_cut_arcs(s);
    let mut is_cut = vec![false; s.arc_count()];
    cuts.iter().for_each(|a| is_cut[a.0] = true);
    let mut found = Vec::new();
    let mut label = vec![0usize; n];
    set_partitions(n, 0, 0, &mut label, &mut |label, k| {
        let blocks: Vec<Vec<VertexId>> = (0..k).map(|b| (0..n).filter(|&v| label[v] == b).collect()).collect();
        if !blocks.iter().all(|b| induces_strong(s, b)) {
            return;
        }
        let mut perm: Vec<usize> = (0..k).collect();
        permutations(&mut perm, 0, &mut |perm| {
            // perm[i] is the set-partition block placed at position i
            let mut pos = vec![0; k];
            perm.iter().enumerate().for_each(|(i, &b)| pos[b] = i);
            let ok = s.arcs().all(|(id, a)| (pos[label[a.tail]] > pos[label[a.head]]) == is_cut[id.0]);
            if ok {
                found.push(perm.iter().map(|&b| blocks[b].clone()).collect());
            }
        });
    });
    found
}

fn induces_strong(s: &Digraph, block: &[VertexId]) -> bool {
    let mut inside = vec![false; s.order()];
    block.iter().for_each(|&v| inside[v] = true);
    let live = |a: ArcId| {
        let (t, h) = s.endpoints(a);
        inside[t] && inside[h]
    };
    let ok = |seen: Vec<bool>| block.iter().all(|&v| seen[v]);
    ok(reach(s, block[0], true, live, None)) && ok(reach(s, block[0], false, live, None))
}

/// Restricted-growth enumeration of set partitions; calls `f(labels, k)`.
fn set_partitions(n: usize, i: usize, k: usize, label: &mut [usize], f: &mut impl FnMut(&[usize], usize)) {
    if i == n {
        f(label, k);
        return;
    }
    for b in 0..=k {
        label[i] = b;
        set_partitions(n, i + 1, k.max(b + 1), label, f);
    }
}

fn permutations(p: &mut [usize], i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, f);
        p.swap(i, j);
    }
}

/// The natural-ordering chain for backward arcs given as block indices
/// `(ind(x_j), ind(y_j))` in natural order over `l` blocks.
pub fn natural_chain_holds(l: usize, arcs: &[(usize, usize)]) -> bool {
    let r = arcs.len();
    if r == 0 {
        return true;
    }
    if arcs[0].0 != l - 1 || arcs[r - 1].1 != 0 {
        return false;
    }
    let x = |j: usize| arcs[j].0;
    let y = |j: usize| arcs[j].1;
    (0..r - 1).all(|j| y(j + 1) < y(j) && y(j) <= x(j + 1) && x(j + 1) < x(j))
        && (0..r.saturating_sub(2)).all(|j| y(j + 1) <= x(j + 2) && x(j + 2) < y(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semicomplete::ExceptionKind;
    use crate::verify::verify_decomposition;

    fn bidirected(n: usize) -> Digraph {
        let arcs: Vec<_> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        Digraph::from_arcs(n, &arcs).unwrap()
    }

    #[test]
    fn catalog_has_no_decomposition() {
        for kind in ExceptionKind::ALL {
            assert_eq!(oracle_sad(&kind.graph(), 18).unwrap(), None, "{}", kind.name());
        }
    }

    #[test]
    fn bidirected_k4_decomposes() {
        let g = bidirected(4);
        let sad = oracle_sad(&g, 18).unwrap().unwrap();
        verify_decomposition(&g, &sad).unwrap();
        assert_eq!(oracle_sad(&bidirected(5), 18), Err(Error::TooLarge { arcs: 20, bound: 18 }));
    }

    #[test]
    fn brute_connectivity() {
        let cycle = Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(brute_is_strong(&cycle));
        assert!(!brute_is_k_arc_strong(&cycle, 2));
        assert_eq!(brute_cut_arcs(&cycle).len(), 3);
        assert!(brute_is_k_arc_strong(&bidirected(3), 2));
        assert!(!brute_is_k_arc_strong(&bidirected(3), 3));
        assert!(brute_is_two_strong(&bidirected(3)));
        assert!(!brute_is_two_strong(&cycle));
    }

    #[test]
    fn good_pair_search() {
        let g = bidirected(3);
        let gp = oracle_good_pair(&g, 0, 2, 18).unwrap().unwrap();
        crate::branchings::verify_good_pair(&g, &gp).unwrap();
        let cycle = Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(oracle_good_pair(&cycle, 0, 0, 18).unwrap(), None);
    }

    #[test]
    fn nice_oracle_on_small_tournament() {
        // a b c d = 0 1 2 3 with a->b, b->c, c->d, a->c, b->d, d->a
        let g = Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (3, 0)]).unwrap();
        assert_eq!(oracle_nice_decompositions(&g), vec![vec![vec![1], vec![0], vec![3], vec![2]]]);
        assert_eq!(oracle_nice_decompositions(&bidirected(4)), vec![vec![vec![0, 1, 2, 3]]]);
    }

    #[test]
    fn chain_examples() {
        assert!(natural_chain_holds(5, &[(4, 2), (2, 1), (1, 0)]));
        assert!(!natural_chain_holds(5, &[(4, 2), (1, 0)]));
        assert!(!natural_chain_holds(5, &[(3, 2), (2, 0)]));
        assert!(natural_chain_holds(1, &[]));
    }
}
