//! Directed multigraphs and split digraphs.
//!
//! Vertices are dense integers `0..n`. Arcs are stored once and addressed by
//! [`ArcId`]; adjacency lists are kept sorted by the opposite endpoint (then by
//! id) so every traversal that walks them visits neighbours in increasing
//! vertex order.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub usize);

impl ArcId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Where an arc came from, always expressed relative to the root digraph that
/// a chain of derived graphs (induced subgraphs, reversals, split-offs) started
/// from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// An arc of the root digraph.
    Original(ArcId),
    /// A splitting arc; the payload indexes the owning record list.
    Splitting(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    /// Multiplicity index among arcs with the same tail and head.
    pub key: usize,
    pub origin: Origin,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Digraph {
    arcs: Vec<Arc>,
    out: Vec<Vec<ArcId>>,
    inc: Vec<Vec<ArcId>>,
}

impl Digraph {
    pub fn new(order: usize) -> Self {
        Digraph { arcs: Vec::new(), out: vec![Vec::new(); order], inc: vec![Vec::new(); order] }
    }

    /// Builds a root digraph from `(tail, head)` pairs; arc `i` gets id `ArcId(i)`.
    pub fn from_arcs(order: usize, arcs: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Digraph::new(order);
        for &(u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.order()
    }

    /// Adds an arc whose origin is itself.
    pub fn add_arc(&mut self, tail: VertexId, head: VertexId) -> Result<ArcId> {
        let id = ArcId(self.arcs.len());
        self.add_arc_with_origin(tail, head, Origin::Original(id))
    }

    pub fn add_arc_with_origin(&mut self, tail: VertexId, head: VertexId, origin: Origin) -> Result<ArcId> {
        let n = self.order();
        for v in [tail, head] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, order: n });
            }
        }
        if tail == head {
            return Err(Error::LoopArc(tail));
        }
        let key = self.out[tail].iter().filter(|&&a| self.arcs[a.0].head == head).count();
        let id = ArcId(self.arcs.len());
        self.arcs.push(Arc { tail, head, key, origin });
        let arcs = &self.arcs;
        let pos = self.out[tail].partition_point(|&a| (arcs[a.0].head, a) < (head, id));
        self.out[tail].insert(pos, id);
        let pos = self.inc[head].partition_point(|&a| (arcs[a.0].tail, a) < (tail, id));
        self.inc[head].insert(pos, id);
        Ok(id)
    }

    #[inline]
    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id.0]
    }

    pub fn try_arc(&self, id: ArcId) -> Result<&Arc> {
        self.arcs.get(id.0).ok_or(Error::ArcMissing(id))
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> + '_ {
        (0..self.arcs.len()).map(ArcId)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (ArcId, &Arc)> + '_ {
        self.arcs.iter().enumerate().map(|(i, a)| (ArcId(i), a))
    }

    #[inline]
    pub fn endpoints(&self, id: ArcId) -> (VertexId, VertexId) {
        let a = &self.arcs[id.0];
        (a.tail, a.head)
    }

    /// Out-arcs of `v`, sorted by head then id.
    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out[v]
    }

    /// In-arcs of `v`, sorted by tail then id.
    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.inc[v].len()
    }

    /// Distinct out-neighbours in increasing order.
    pub fn out_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut ns: Vec<_> = self.out[v].iter().map(|&a| self.arcs[a.0].head).collect();
        ns.dedup();
        ns
    }

    /// Distinct in-neighbours in increasing order.
    pub fn in_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut ns: Vec<_> = self.inc[v].iter().map(|&a| self.arcs[a.0].tail).collect();
        ns.dedup();
        ns
    }

    pub fn arcs_between(&self, tail: VertexId, head: VertexId) -> impl Iterator<Item = ArcId> + '_ {
        self.out[tail].iter().copied().filter(move |&a| self.arcs[a.0].head == head)
    }

    pub fn find_arc(&self, tail: VertexId, head: VertexId) -> Option<ArcId> {
        self.arcs_between(tail, head).next()
    }

    pub fn has_arc(&self, tail: VertexId, head: VertexId) -> bool {
        self.find_arc(tail, head).is_some()
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    pub fn multiplicity(&self, tail: VertexId, head: VertexId) -> usize {
        self.arcs_between(tail, head).count()
    }

    /// First parallel pair found, if any.
    pub fn parallel_pair(&self) -> Option<(VertexId, VertexId)> {
        self.arcs.iter().find(|a| a.key > 0).map(|a| (a.tail, a.head))
    }

    pub fn is_simple(&self) -> bool {
        self.parallel_pair().is_none()
    }

    /// First non-adjacent pair `(u, v)` with `u < v`, if any.
    pub fn non_adjacent_pair(&self) -> Option<(VertexId, VertexId)> {
        let n = self.order();
        let mut adj = vec![false; n * n];
        for a in &self.arcs {
            adj[a.tail * n + a.head] = true;
            adj[a.head * n + a.tail] = true;
        }
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).find(|&(u, v)| !adj[u * n + v])
    }

    pub fn is_semicomplete(&self) -> bool {
        self.non_adjacent_pair().is_none()
    }

    /// The same arcs (same ids, same origins) with every direction flipped.
    pub fn reversed(&self) -> Digraph {
        let mut g = Digraph::new(self.order());
        for a in &self.arcs {
            g.add_arc_with_origin(a.head, a.tail, a.origin).expect("reversal keeps arcs valid");
        }
        g
    }

    /// Subgraph induced by `vertices` (in the given order). Returns the
    /// subgraph and the map from its vertex ids back to ids of `self`.
    /// Arcs keep their origins and their relative id order.
    pub fn induced(&self, vertices: &[VertexId]) -> (Digraph, Vec<VertexId>) {
        let mut local = vec![usize::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut g = Digraph::new(vertices.len());
        for a in &self.arcs {
            let (t, h) = (local[a.tail], local[a.head]);
            if t != usize::MAX && h != usize::MAX {
                g.add_arc_with_origin(t, h, a.origin).expect("induced arcs are valid");
            }
        }
        (g, vertices.to_vec())
    }

    /// Induced subgraph together with the map from its arc ids to arc ids of `self`.
    pub fn induced_with_arc_map(&self, vertices: &[VertexId]) -> (Digraph, Vec<VertexId>, Vec<ArcId>) {
        let mut local = vec![usize::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut g = Digraph::new(vertices.len());
        let mut arc_map = Vec::new();
        for (id, a) in self.arcs() {
            let (t, h) = (local[a.tail], local[a.head]);
            if t != usize::MAX && h != usize::MAX {
                g.add_arc_with_origin(t, h, a.origin).expect("induced arcs are valid");
                arc_map.push(id);
            }
        }
        (g, vertices.to_vec(), arc_map)
    }

    /// Copy of `self` keeping only arcs with `keep[id] == true`. Returns the
    /// new graph and the map from its arc ids to ids of `self`.
    pub fn filter_arcs(&self, keep: &[bool]) -> (Digraph, Vec<ArcId>) {
        let mut g = Digraph::new(self.order());
        let mut map = Vec::new();
        for (id, a) in self.arcs() {
            if keep[id.0] {
                g.add_arc_with_origin(a.tail, a.head, a.origin).expect("filtered arcs are valid");
                map.push(id);
            }
        }
        (g, map)
    }

    /// `(tail, head)` pairs in id order.
    pub fn arc_pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.arcs.iter().map(|a| (a.tail, a.head)).collect()
    }
}

/// A simple digraph whose vertices split into an independent part `V1` and a
/// part `V2` inducing a semicomplete digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDigraph {
    graph: Digraph,
    in_v1: Vec<bool>,
}

impl SplitDigraph {
    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn is_v1(&self, v: VertexId) -> bool {
        self.in_v1[v]
    }

    pub fn is_v2(&self, v: VertexId) -> bool {
        !self.in_v1[v]
    }

    pub fn v1_mask(&self) -> &[bool] {
        &self.in_v1
    }

    pub fn v1(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| self.in_v1[v]).collect()
    }

    pub fn v2(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| !self.in_v1[v]).collect()
    }

    /// `D<V2>` and the map from its vertex ids back to ids of the split digraph.
    pub fn semicomplete_part(&self) -> (Digraph, Vec<VertexId>) {
        self.graph.induced(&self.v2())
    }

    /// Arc-reversed copy; arc ids are preserved.
    pub fn reversed(&self) -> SplitDigraph {
        SplitDigraph { graph: self.graph.reversed(), in_v1: self.in_v1.clone() }
    }
}

/// Checks every split-digraph invariant and returns the validated value, or
/// the first violation found with its witness.
pub fn validate_split(graph: Digraph, v1: &[VertexId], v2: &[VertexId]) -> Result<SplitDigraph> {
    let n = graph.order();
    let mut side = vec![None; n];
    for (part, vs) in [(true, v1), (false, v2)] {
        for &v in vs {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, order: n });
            }
            if side[v].is_some() {
                return Err(Error::BadPartition(format!("vertex {v} listed twice")));
            }
            side[v] = Some(part);
        }
    }
    if let Some(v) = side.iter().position(Option::is_none) {
        return Err(Error::BadPartition(format!("vertex {v} is in neither part")));
    }
    // An empty V1 is allowed: every semicomplete digraph is then a split digraph.
    if v2.is_empty() {
        return Err(Error::BadPartition("the semicomplete part must be non-empty".into()));
    }
    let in_v1: Vec<bool> = side.into_iter().map(|s| s.unwrap_or(false)).collect();
    if let Some((tail, head)) = graph.parallel_pair() {
        return Err(Error::ParallelArc { tail, head });
    }
    if let Some((_, a)) = graph.arcs().find(|(_, a)| in_v1[a.tail] && in_v1[a.head]) {
        return Err(Error::IndependenceViolation { tail: a.tail, head: a.head });
    }
    let part: BTreeSet<VertexId> = v2.iter().copied().collect();
    let v2_sorted: Vec<VertexId> = part.into_iter().collect();
    for (i, &u) in v2_sorted.iter().enumerate() {
        for &v in &v2_sorted[i + 1..] {
            if !graph.adjacent(u, v) {
                return Err(Error::SemicompletenessViolation(u, v));
            }
        }
    }
    Ok(SplitDigraph { graph, in_v1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_is_sorted_and_keys_count_parallels() {
        let g = Digraph::from_arcs(4, &[(0, 3), (0, 1), (0, 3), (2, 0)]).unwrap();
        let heads: Vec<_> = g.out_arcs(0).iter().map(|&a| g.arc(a).head).collect();
        assert_eq!(heads, vec![1, 3, 3]);
        assert_eq!(g.arc(ArcId(2)).key, 1);
        assert_eq!(g.multiplicity(0, 3), 2);
        assert_eq!(g.out_neighbors(0), vec![1, 3]);
        assert!(!g.is_simple());
    }

    #[test]
    fn loops_are_rejected() {
        let mut g = Digraph::new(2);
        assert_eq!(g.add_arc(1, 1), Err(Error::LoopArc(1)));
    }

    #[test]
    fn induced_keeps_origins() {
        let g = Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]).unwrap();
        let (h, map) = g.induced(&[1, 2, 3]);
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(h.arc_count(), 3);
        assert_eq!(h.arc(ArcId(0)).origin, Origin::Original(ArcId(1)));
        let r = g.reversed();
        assert_eq!(r.endpoints(ArcId(0)), (1, 0));
    }

    fn triangle_with_hub() -> Digraph {
        // s1=0, s2=1, s3=2, t=3
        Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 0), (3, 0), (0, 3), (3, 1), (1, 3), (3, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn validate_accepts_cycle_with_hub() {
        let d = validate_split(triangle_with_hub(), &[3], &[0, 1, 2]).unwrap();
        assert_eq!(d.v1(), vec![3]);
        assert_eq!(d.v2(), vec![0, 1, 2]);
    }

    #[test]
    fn validate_reports_independence_violation() {
        let g = Digraph::from_arcs(4, &[(0, 1), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert_eq!(validate_split(g, &[2, 3], &[0, 1]), Err(Error::IndependenceViolation { tail: 2, head: 3 }));
    }

    #[test]
    fn validate_reports_semicompleteness_violation() {
        let g = Digraph::from_arcs(3, &[(2, 0), (0, 2), (2, 1), (1, 2)]).unwrap();
        assert_eq!(validate_split(g, &[2], &[0, 1]), Err(Error::SemicompletenessViolation(0, 1)));
    }

    #[test]
    fn validate_reports_parallel_arcs_and_bad_partitions() {
        let g = Digraph::from_arcs(3, &[(0, 1), (0, 1), (2, 0)]).unwrap();
        assert_eq!(validate_split(g, &[2], &[0, 1]), Err(Error::ParallelArc { tail: 0, head: 1 }));
        let g = triangle_with_hub();
        assert!(matches!(validate_split(g.clone(), &[3], &[0, 1]), Err(Error::BadPartition(_))));
        assert!(matches!(validate_split(g.clone(), &[3, 0], &[0, 1, 2]), Err(Error::BadPartition(_))));
        assert!(matches!(validate_split(g, &[0, 1, 2, 3], &[]), Err(Error::BadPartition(_))));
    }
}
