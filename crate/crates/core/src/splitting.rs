//! Splitting off arc pairs at `V1` vertices, and lifting them back.
//!
//! Splitting off the pair `(u t, t v)` at `t` in `V1` replaces the two arcs by
//! a new arc `u v` (an extra parallel copy if `u v` already exists). All arcs
//! at a `V1` vertex are arcs of the root split digraph, so every record refers
//! to root arc ids and lifting is a direct lookup.

use crate::connectivity::{is_strong, path_vertices};
use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, Origin, SplitDigraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitRecord {
    pub via: VertexId,
    /// Root arc `u -> via`.
    pub in_arc: ArcId,
    /// Root arc `via -> v`.
    pub out_arc: ArcId,
    pub tail: VertexId,
    pub head: VertexId,
}

/// Accumulates splits against a fixed root split digraph.
#[derive(Debug, Clone)]
pub struct SplitOff<'d> {
    root: &'d SplitDigraph,
    consumed: Vec<bool>,
    records: Vec<SplitRecord>,
}

impl<'d> SplitOff<'d> {
    pub fn new(root: &'d SplitDigraph) -> Self {
        SplitOff { root, consumed: vec![false; root.graph().arc_count()], records: Vec::new() }
    }

    pub fn records(&self) -> &[SplitRecord] {
        &self.records
    }

    pub fn consumed(&self) -> &[bool] {
        &self.consumed
    }

    /// Splits off `(in_arc, out_arc)`, both given as root arc ids. Returns the
    /// index of the new record.
    pub fn split_pair(&mut self, in_arc: ArcId, out_arc: ArcId) -> Result<usize> {
        let g = self.root.graph();
        let a = *g.try_arc(in_arc)?;
        let b = *g.try_arc(out_arc)?;
        for id in [in_arc, out_arc] {
            if self.consumed[id.0] {
                return Err(Error::ArcMissing(id));
            }
        }
        let reason = if a.head != b.tail {
            Some("the arcs do not meet".to_string())
        } else if !self.root.is_v1(a.head) {
            Some(format!("vertex {} is not in the independent part", a.head))
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(Error::NotSplittable { in_arc, out_arc, reason });
        }
        if a.tail == b.head {
            return Err(Error::LoopWouldForm { in_arc, out_arc, vertex: a.tail });
        }
        self.consumed[in_arc.0] = true;
        self.consumed[out_arc.0] = true;
        self.records.push(SplitRecord { via: a.head, in_arc, out_arc, tail: a.tail, head: b.head });
        Ok(self.records.len() - 1)
    }

    /// Splits off every `V1` vertex of a path given as root arc ids. The path
    /// must start and end in `V2`.
    pub fn split_path(&mut self, path: &[ArcId]) -> Result<Vec<usize>> {
        let g = self.root.graph();
        check_path(g, path)?;
        let vs = path_vertices(g, path);
        if self.root.is_v1(vs[0]) || self.root.is_v1(vs[vs.len() - 1]) {
            return Err(Error::InvalidPath("path ends must lie in the semicomplete part".into()));
        }
        let mut made = Vec::new();
        for i in 1..vs.len() - 1 {
            if self.root.is_v1(vs[i]) {
                made.push(self.split_pair(path[i - 1], path[i])?);
            }
        }
        Ok(made)
    }

    /// The current multigraph: surviving root arcs in id order, then one
    /// splitting arc per record in record order.
    pub fn graph(&self) -> Digraph {
        let g = self.root.graph();
        let mut out = Digraph::new(g.order());
        for (id, a) in g.arcs() {
            if !self.consumed[id.0] {
                out.add_arc_with_origin(a.tail, a.head, Origin::Original(id)).expect("root arcs are valid");
            }
        }
        for (i, r) in self.records.iter().enumerate() {
            out.add_arc_with_origin(r.tail, r.head, Origin::Splitting(i))
                .expect("splitting arcs join distinct vertices");
        }
        out
    }
}

/// Checks that `path` is a non-empty simple path of `g`.
pub fn check_path(g: &Digraph, path: &[ArcId]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::InvalidPath("empty path".into()));
    }
    for &a in path {
        g.try_arc(a)?;
    }
    for w in path.windows(2) {
        if g.arc(w[0]).head != g.arc(w[1]).tail {
            return Err(Error::InvalidPath(format!("arcs {:?} and {:?} are not consecutive", w[0], w[1])));
        }
    }
    let mut vs = path_vertices(g, path);
    vs.sort_unstable();
    if vs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPath("path repeats a vertex".into()));
    }
    Ok(())
}

/// Splits off one pair of a split digraph treated as the root.
pub fn split_off_pair(d: &SplitDigraph, in_arc: ArcId, out_arc: ArcId) -> Result<(Digraph, SplitRecord)> {
    let mut s = SplitOff::new(d);
    let i = s.split_pair(in_arc, out_arc)?;
    Ok((s.graph(), s.records()[i]))
}

/// Splits off a path of a split digraph treated as the root.
pub fn split_off_path(d: &SplitDigraph, path: &[ArcId]) -> Result<(Digraph, Vec<SplitRecord>)> {
    let mut s = SplitOff::new(d);
    s.split_path(path)?;
    let g = s.graph();
    Ok((g, s.records.clone()))
}

/// An ordered system of arc-disjoint paths: the first two are
/// `(X, Y)`-paths, every later one is `u t v` with `t` in `V1`, and no `V1`
/// vertex lies on more than `gamma` of them. Paths are root arc sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleSet {
    pub paths: Vec<Vec<ArcId>>,
    pub gamma: usize,
    pub x: Vec<VertexId>,
    pub y: Vec<VertexId>,
}

impl FeasibleSet {
    /// Builds and validates a feasible set.
    pub fn new(
        d: &SplitDigraph,
        paths: Vec<Vec<ArcId>>,
        gamma: usize,
        x: Vec<VertexId>,
        y: Vec<VertexId>,
    ) -> Result<Self> {
        let q = FeasibleSet { paths, gamma, x, y };
        q.validate(d)?;
        Ok(q)
    }

    pub fn validate(&self, d: &SplitDigraph) -> Result<()> {
        let g = d.graph();
        let n = g.order();
        if self.paths.len() < 2 {
            return Err(Error::InfeasibleSet("fewer than two paths".into()));
        }
        let mut in_x = vec![false; n];
        let mut in_y = vec![false; n];
        for (set, mask) in [(&self.x, &mut in_x), (&self.y, &mut in_y)] {
            for &v in set.iter() {
                if v >= n || d.is_v1(v) {
                    return Err(Error::InfeasibleSet(format!("terminal vertex {v} is not in the semicomplete part")));
                }
                mask[v] = true;
            }
        }
        if (0..n).any(|v| in_x[v] && in_y[v]) {
            return Err(Error::InfeasibleSet("the terminal sets overlap".into()));
        }
        let mut used = vec![false; g.arc_count()];
        let mut usage = vec![0usize; n];
        for (i, p) in self.paths.iter().enumerate() {
            check_path(g, p)?;
            let vs = path_vertices(g, p);
            if i < 2 {
                let (first, last) = (vs[0], vs[vs.len() - 1]);
                if !in_x[first] || !in_y[last] {
                    return Err(Error::InfeasibleSet(format!("path {i} does not run from X to Y")));
                }
                if vs[1..vs.len() - 1].iter().any(|&v| in_x[v] || in_y[v]) {
                    return Err(Error::InfeasibleSet(format!("path {i} meets X or Y internally")));
                }
            } else if vs.len() != 3 || !d.is_v1(vs[1]) {
                return Err(Error::InfeasibleSet(format!("path {i} is not a two-arc path through V1")));
            }
            for &a in p {
                if std::mem::replace(&mut used[a.0], true) {
                    return Err(Error::InfeasibleSet(format!("arc {a:?} is on two paths")));
                }
            }
            for &v in &vs {
                if d.is_v1(v) {
                    usage[v] += 1;
                    if usage[v] > self.gamma {
                        return Err(Error::InfeasibleSet(format!("vertex {v} is on more than {} paths", self.gamma)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of paths through every vertex (meaningful on `V1`).
    pub fn usage(&self, g: &Digraph) -> Vec<usize> {
        let mut usage = vec![0; g.order()];
        for p in &self.paths {
            for v in path_vertices(g, p) {
                usage[v] += 1;
            }
        }
        usage
    }

    /// Mask of arcs lying on some path.
    pub fn arc_mask(&self, g: &Digraph) -> Vec<bool> {
        let mut used = vec![false; g.arc_count()];
        self.paths.iter().flatten().for_each(|a| used[a.0] = true);
        used
    }
}

/// The result of splitting off a path system.
#[derive(Debug, Clone)]
pub struct SplitResult {
    /// The split-off multigraph on all vertices of the root.
    pub graph: Digraph,
    pub records: Vec<SplitRecord>,
    /// The split-off multigraph induced by `V2`, relabelled `0..|V2|`.
    pub core: Digraph,
    /// Root vertex of each core vertex.
    pub core_map: Vec<VertexId>,
    /// `V2` vertices (root ids) with out-degree exactly one in the core.
    pub w_plus: Vec<VertexId>,
    /// `V2` vertices (root ids) with in-degree exactly one in the core.
    pub w_minus: Vec<VertexId>,
}

impl SplitResult {
    pub fn score(&self) -> usize {
        self.w_plus.len() + self.w_minus.len()
    }

    /// Core arcs that come from splitting, with their records.
    pub fn splitting_arcs(&self) -> impl Iterator<Item = (ArcId, &SplitRecord)> + '_ {
        self.core.arcs().filter_map(|(id, a)| match a.origin {
            Origin::Splitting(r) => Some((id, &self.records[r])),
            Origin::Original(_) => None,
        })
    }
}

/// Vertices of out- and in-degree exactly one, mapped through `map`.
pub fn deficiency_sets(core: &Digraph, map: &[VertexId]) -> (Vec<VertexId>, Vec<VertexId>) {
    let mut plus: Vec<_> = core.vertices().filter(|&v| core.out_degree(v) == 1).map(|v| map[v]).collect();
    let mut minus: Vec<_> = core.vertices().filter(|&v| core.in_degree(v) == 1).map(|v| map[v]).collect();
    plus.sort_unstable();
    minus.sort_unstable();
    (plus, minus)
}

/// Splits off every path of `q`. When `q` has `(X, Y)`-paths, the core is
/// strong, and this is checked.
pub fn build_dq(d: &SplitDigraph, q: &FeasibleSet) -> Result<SplitResult> {
    let mut s = SplitOff::new(d);
    for p in &q.paths {
        s.split_path(p)?;
    }
    let result = finish(d, s);
    if !q.x.is_empty() && !q.y.is_empty() && !is_strong(&result.core) {
        return Err(Error::VerificationFailed(
            "splitting off (X,Y)-paths left the semicomplete part non-strong".into(),
        ));
    }
    Ok(result)
}

/// Splits off arbitrary paths (each starting and ending in `V2`).
pub fn split_paths(d: &SplitDigraph, paths: &[Vec<ArcId>]) -> Result<SplitResult> {
    let mut s = SplitOff::new(d);
    for p in paths {
        s.split_path(p)?;
    }
    Ok(finish(d, s))
}

fn finish(d: &SplitDigraph, s: SplitOff<'_>) -> SplitResult {
    let graph = s.graph();
    let (core, core_map) = graph.induced(&d.v2());
    let (w_plus, w_minus) = deficiency_sets(&core, &core_map);
    SplitResult { graph, records: s.records, core, core_map, w_plus, w_minus }
}

/// Replaces each splitting arc of the two core classes by its two root arcs.
/// Returns the two classes as sorted root arc ids.
pub fn lift_all(sr: &SplitResult, class1: &[ArcId], class2: &[ArcId]) -> Result<(Vec<ArcId>, Vec<ArcId>)> {
    let m = sr.core.arc_count();
    let mut seen = vec![false; m];
    for &a in class1.iter().chain(class2) {
        if a.0 >= m {
            return Err(Error::NotAPartition(format!("arc {a:?} is not a core arc")));
        }
        if std::mem::replace(&mut seen[a.0], true) {
            return Err(Error::NotAPartition(format!("arc {a:?} is in both classes or listed twice")));
        }
    }
    if let Some(a) = seen.iter().position(|&b| !b) {
        return Err(Error::NotAPartition(format!("arc {:?} is in neither class", ArcId(a))));
    }
    let lift = |class: &[ArcId]| {
        let mut out = Vec::with_capacity(class.len());
        for &a in class {
            match sr.core.arc(a).origin {
                Origin::Original(r) => out.push(r),
                Origin::Splitting(i) => {
                    out.push(sr.records[i].in_arc);
                    out.push(sr.records[i].out_arc);
                }
            }
        }
        out.sort_unstable();
        out
    };
    Ok((lift(class1), lift(class2)))
}
