//! Reachability, strong components, cut arcs and unit-capacity flows.

use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, VertexId};

/// Strong components in acyclic order: no arc goes from a later component to
/// an earlier one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongComponentOrdering {
    pub components: Vec<Vec<VertexId>>,
    pub membership: Vec<usize>,
}

impl StrongComponentOrdering {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_strong(&self) -> bool {
        self.components.len() == 1
    }

    pub fn initial(&self) -> &[VertexId] {
        &self.components[0]
    }

    pub fn terminal(&self) -> &[VertexId] {
        &self.components[self.components.len() - 1]
    }
}

pub fn strong_components(g: &Digraph) -> StrongComponentOrdering {
    strong_components_masked(g, None)
}

/// Tarjan's algorithm over the arcs selected by `mask` (all arcs if `None`).
pub fn strong_components_masked(g: &Digraph, mask: Option<&[bool]>) -> StrongComponentOrdering {
    let n = g.order();
    let live = |a: ArcId| mask.is_none_or(|m| m[a.0]);
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut found: Vec<Vec<VertexId>> = Vec::new();
    let mut next = 0;
    // (vertex, position in its out-arc list)
    let mut call: Vec<(VertexId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let outs = g.out_arcs(v);
            if *pos < outs.len() {
                let a = outs[*pos];
                *pos += 1;
                if !live(a) {
                    continue;
                }
                let w = g.arc(a).head;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack holds the component");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    found.push(comp);
                }
            }
        }
    }
    // Tarjan emits sink components first.
    found.reverse();
    let mut membership = vec![0; n];
    for (i, comp) in found.iter().enumerate() {
        for &v in comp {
            membership[v] = i;
        }
    }
    StrongComponentOrdering { components: found, membership }
}

/// Vertices reachable from `start` along live arcs, restricted to `within`.
pub fn reach(g: &Digraph, start: VertexId, forward: bool, arcs: Option<&[bool]>, within: Option<&[bool]>) -> Vec<bool> {
    let mut seen = vec![false; g.order()];
    seen[start] = true;
    let mut todo = vec![start];
    while let Some(v) = todo.pop() {
        let list = if forward { g.out_arcs(v) } else { g.in_arcs(v) };
        for &a in list {
            if arcs.is_some_and(|m| !m[a.0]) {
                continue;
            }
            let (t, h) = g.endpoints(a);
            let w = if forward { h } else { t };
            if within.is_some_and(|m| !m[w]) || seen[w] {
                continue;
            }
            seen[w] = true;
            todo.push(w);
        }
    }
    seen
}

pub fn is_strong(g: &Digraph) -> bool {
    is_strong_on(g, None, None)
}

/// Strongness of the spanning subdigraph formed by the arcs in `mask`.
pub fn is_strong_masked(g: &Digraph, mask: &[bool]) -> bool {
    is_strong_on(g, None, Some(mask))
}

/// Strongness of the subdigraph with vertex set `vertices` (all if `None`)
/// and the arcs of `arcs` (all if `None`) that lie inside it.
pub fn is_strong_on(g: &Digraph, vertices: Option<&[bool]>, arcs: Option<&[bool]>) -> bool {
    let Some(start) = g.vertices().find(|&v| vertices.is_none_or(|m| m[v])) else {
        return true;
    };
    let inside = |v: VertexId| vertices.is_none_or(|m| m[v]);
    let fwd = reach(g, start, true, arcs, vertices);
    if g.vertices().any(|v| inside(v) && !fwd[v]) {
        return false;
    }
    let bwd = reach(g, start, false, arcs, vertices);
    g.vertices().all(|v| !inside(v) || bwd[v])
}

/// Arcs whose removal destroys strongness.
pub fn cut_arcs(g: &Digraph) -> Result<Vec<ArcId>> {
    if !is_strong(g) {
        return Err(Error::NotStrong);
    }
    let mut mask = vec![true; g.arc_count()];
    let mut cuts = Vec::new();
    for a in g.arc_ids() {
        mask[a.0] = false;
        if !is_strong_masked(g, &mask) {
            cuts.push(a);
        }
        mask[a.0] = true;
    }
    Ok(cuts)
}

/// Unit-capacity flow on the arcs of a digraph with a set of sources and a
/// set of sinks. Augmenting paths come from a BFS that scans neighbours in
/// increasing vertex order.
struct UnitFlow<'g> {
    g: &'g Digraph,
    allowed: Vec<bool>,
    flow: Vec<bool>,
    is_source: Vec<bool>,
    is_sink: Vec<bool>,
    value: usize,
}

impl<'g> UnitFlow<'g> {
    fn new(g: &'g Digraph, sources: &[VertexId], sinks: &[VertexId], allowed: Vec<bool>) -> Self {
        let mut is_source = vec![false; g.order()];
        let mut is_sink = vec![false; g.order()];
        sources.iter().for_each(|&s| is_source[s] = true);
        sinks.iter().for_each(|&t| is_sink[t] = true);
        UnitFlow { g, flow: vec![false; g.arc_count()], allowed, is_source, is_sink, value: 0 }
    }

    fn augment(&mut self) -> bool {
        let g = self.g;
        let n = g.order();
        // parent[v] = (arc, forward?) used to enter v
        let mut parent: Vec<Option<(ArcId, bool)>> = vec![None; n];
        let mut seen = self.is_source.clone();
        let mut queue: std::collections::VecDeque<VertexId> = g.vertices().filter(|&v| self.is_source[v]).collect();
        let mut hit = None;
        let mut steps: Vec<(VertexId, ArcId, bool)> = Vec::new();
        'bfs: while let Some(v) = queue.pop_front() {
            steps.clear();
            for &a in g.out_arcs(v) {
                if self.allowed[a.0] && !self.flow[a.0] {
                    steps.push((g.arc(a).head, a, true));
                }
            }
            for &a in g.in_arcs(v) {
                if self.allowed[a.0] && self.flow[a.0] {
                    steps.push((g.arc(a).tail, a, false));
                }
            }
            steps.sort_unstable();
            for &(w, a, fwd) in &steps {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = Some((a, fwd));
                if self.is_sink[w] {
                    hit = Some(w);
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        let Some(mut v) = hit else { return false };
        while let Some((a, fwd)) = parent[v] {
            self.flow[a.0] = fwd;
            v = if fwd { g.arc(a).tail } else { g.arc(a).head };
        }
        self.value += 1;
        true
    }

    fn run(&mut self, limit: usize) -> usize {
        while self.value < limit && self.augment() {}
        self.value
    }
}

/// Maximum number of arc-disjoint `(s, t)`-paths, capped at `limit`.
pub fn local_arc_connectivity(g: &Digraph, s: VertexId, t: VertexId, limit: usize) -> usize {
    let mut f = UnitFlow::new(g, &[s], &[t], vec![true; g.arc_count()]);
    f.run(limit)
}

/// Minimum over ordered vertex pairs of the local arc-connectivity, capped at
/// `limit`. Uses flows to and from vertex 0 only.
pub fn arc_connectivity(g: &Digraph, limit: usize) -> usize {
    let n = g.order();
    if n < 2 {
        return limit;
    }
    let mut best = limit;
    for v in 1..n {
        best = best.min(local_arc_connectivity(g, 0, v, best));
        best = best.min(local_arc_connectivity(g, v, 0, best));
        if best == 0 {
            break;
        }
    }
    best
}

/// Whether deleting any `k - 1` arcs leaves `g` strong.
pub fn is_k_arc_strong(g: &Digraph, k: usize) -> bool {
    if g.order() < 2 {
        return true;
    }
    arc_connectivity(g, k) >= k
}

/// `count` pairwise arc-disjoint `(sources, sinks)`-paths: each starts in
/// `sources`, ends in `sinks`, and meets `sources ∪ sinks` only at its ends.
/// Paths are returned as arc sequences and are simple. `None` when fewer than
/// `count` such paths exist. The two sets must be disjoint.
pub fn arc_disjoint_paths(
    g: &Digraph,
    sources: &[VertexId],
    sinks: &[VertexId],
    count: usize,
) -> Option<Vec<Vec<ArcId>>> {
    arc_disjoint_paths_masked(g, sources, sinks, count, None)
}

pub fn arc_disjoint_paths_masked(
    g: &Digraph,
    sources: &[VertexId],
    sinks: &[VertexId],
    count: usize,
    arcs: Option<&[bool]>,
) -> Option<Vec<Vec<ArcId>>> {
    if sources.is_empty() || sinks.is_empty() || sources.iter().any(|s| sinks.contains(s)) {
        return None;
    }
    let mut terminal = vec![false; g.order()];
    sources.iter().chain(sinks).for_each(|&v| terminal[v] = true);
    let mut is_sink = vec![false; g.order()];
    sinks.iter().for_each(|&v| is_sink[v] = true);
    let mut is_source = vec![false; g.order()];
    sources.iter().for_each(|&v| is_source[v] = true);
    // A path may not re-enter a source nor leave a sink.
    let allowed: Vec<bool> =
        g.arcs().map(|(id, a)| arcs.is_none_or(|m| m[id.0]) && !is_source[a.head] && !is_sink[a.tail]).collect();
    let mut flow = UnitFlow::new(g, sources, sinks, allowed);
    if flow.run(count) < count {
        return None;
    }
    let mut remaining = flow.flow;
    let mut paths = Vec::with_capacity(count);
    for &s in sources {
        while let Some(first) = g.out_arcs(s).iter().copied().find(|a| remaining[a.0]) {
            remaining[first.0] = false;
            let mut arcs_on = vec![first];
            let mut verts = vec![s, g.arc(first).head];
            while !is_sink[*verts.last().unwrap()] {
                let v = *verts.last().unwrap();
                let a = g
                    .out_arcs(v)
                    .iter()
                    .copied()
                    .find(|a| remaining[a.0])
                    .expect("flow conservation provides an outgoing flow arc");
                remaining[a.0] = false;
                let w = g.arc(a).head;
                if let Some(pos) = verts.iter().position(|&x| x == w) {
                    // drop the closed cycle
                    verts.truncate(pos + 1);
                    arcs_on.truncate(pos);
                } else {
                    verts.push(w);
                    arcs_on.push(a);
                }
            }
            paths.push(arcs_on);
            if paths.len() == count {
                return Some(paths);
            }
        }
    }
    debug_assert_eq!(paths.len(), count);
    Some(paths)
}

/// Vertex sequence of a non-empty arc path.
pub fn path_vertices(g: &Digraph, path: &[ArcId]) -> Vec<VertexId> {
    let mut vs = Vec::with_capacity(path.len() + 1);
    if let Some(&first) = path.first() {
        vs.push(g.arc(first).tail);
    }
    vs.extend(path.iter().map(|&a| g.arc(a).head));
    vs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::from_arcs(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn bidirected_k4() -> Digraph {
        let mut arcs = Vec::new();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    arcs.push((u, v));
                }
            }
        }
        Digraph::from_arcs(4, &arcs).unwrap()
    }

    #[test]
    fn three_cycle_is_one_component() {
        let sc = strong_components(&cycle(3));
        assert!(sc.is_strong());
        assert_eq!(sc.components, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn transitive_tournament_components_run_source_to_sink() {
        let mut arcs = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                arcs.push((i, j));
            }
        }
        let g = Digraph::from_arcs(5, &arcs).unwrap();
        let sc = strong_components(&g);
        assert_eq!(sc.components, (0..5).map(|v| vec![v]).collect::<Vec<_>>());
        assert_eq!(sc.terminal(), &[4]);
        assert_eq!(sc.initial(), &[0]);
    }

    #[test]
    fn joined_cycles_put_tail_side_first() {
        // cycle {3,4,5} -> cycle {0,1,2} through the arc 5 -> 0
        let g = Digraph::from_arcs(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (5, 0)]).unwrap();
        let sc = strong_components(&g);
        assert_eq!(sc.components, vec![vec![3, 4, 5], vec![0, 1, 2]]);
    }

    #[test]
    fn arc_strength_examples() {
        assert!(!is_k_arc_strong(&cycle(3), 2));
        assert!(is_k_arc_strong(&cycle(3), 1));
        assert!(is_k_arc_strong(&bidirected_k4(), 3));
        assert!(!is_k_arc_strong(&bidirected_k4(), 4));
        assert_eq!(arc_connectivity(&bidirected_k4(), 10), 3);
    }

    #[test]
    fn cut_arc_examples() {
        assert_eq!(cut_arcs(&cycle(5)).unwrap().len(), 5);
        assert!(cut_arcs(&bidirected_k4()).unwrap().is_empty());
        // a=0,b=1,c=2,d=3: ab, bc, cd, ac, bd, da
        let t = Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (3, 0)]).unwrap();
        // b has a single in-arc, so ab is a cut arc as well
        assert_eq!(cut_arcs(&t).unwrap(), vec![ArcId(0), ArcId(2), ArcId(5)]);
        let path = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        assert_eq!(cut_arcs(&path), Err(Error::NotStrong));
    }

    #[test]
    fn disjoint_paths_respect_terminal_sets() {
        assert!(arc_disjoint_paths(&Digraph::from_arcs(2, &[(0, 1)]).unwrap(), &[0], &[1], 2).is_none());
        let k4 = bidirected_k4();
        let ps = arc_disjoint_paths(&k4, &[0], &[3], 3).unwrap();
        assert_eq!(ps.len(), 3);
        // sources {0,1}, sinks {3}: paths may not pass through the other source
        let ps = arc_disjoint_paths(&k4, &[0, 1], &[3], 3).unwrap();
        for p in &ps {
            let vs = path_vertices(&k4, p);
            assert!(vs[1..].iter().all(|&v| v != 0 && v != 1));
            assert_eq!(*vs.last().unwrap(), 3);
        }
        assert!(arc_disjoint_paths(&k4, &[0, 1], &[3], 4).is_none());
    }
}
