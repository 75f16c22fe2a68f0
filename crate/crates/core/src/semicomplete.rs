//! Strong arc decompositions of 2-arc-strong semicomplete multigraphs, the
//! four exceptional multigraphs that have none, and the extension steps that
//! grow a decomposition of a subdigraph to a larger digraph.

use crate::connectivity::{is_k_arc_strong, is_strong_on};
use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, SplitDigraph, VertexId};
use crate::splitting::{lift_all, SplitResult};

/// Two disjoint arc classes, each spanning a strong subdigraph of its carrier.
/// Arc ids refer to the carrier and are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StrongArcDecomposition {
    pub a1: Vec<ArcId>,
    pub a2: Vec<ArcId>,
}

impl StrongArcDecomposition {
    pub fn new(mut a1: Vec<ArcId>, mut a2: Vec<ArcId>) -> Self {
        a1.sort_unstable();
        a2.sort_unstable();
        StrongArcDecomposition { a1, a2 }
    }

    pub fn class(&self, i: usize) -> &[ArcId] {
        if i == 0 {
            &self.a1
        } else {
            &self.a2
        }
    }

    /// Class label (0 or 1) of every arc of a carrier with `m` arcs; `None`
    /// for unlisted arcs.
    pub fn labels(&self, m: usize) -> Vec<Option<u8>> {
        let mut out = vec![None; m];
        self.a1.iter().for_each(|a| out[a.0] = Some(0));
        self.a2.iter().for_each(|a| out[a.0] = Some(1));
        out
    }

    /// The same decomposition with the classes swapped.
    pub fn swapped(&self) -> Self {
        StrongArcDecomposition { a1: self.a2.clone(), a2: self.a1.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExceptionKind {
    S4,
    S4_1,
    S4_2,
    S4_3,
}

impl ExceptionKind {
    pub const ALL: [ExceptionKind; 4] =
        [ExceptionKind::S4, ExceptionKind::S4_1, ExceptionKind::S4_2, ExceptionKind::S4_3];

    pub fn name(self) -> &'static str {
        match self {
            ExceptionKind::S4 => "S4",
            ExceptionKind::S4_1 => "S4_1",
            ExceptionKind::S4_2 => "S4_2",
            ExceptionKind::S4_3 => "S4_3",
        }
    }

    /// Arcs over catalog vertices `0..4` (standing for `v1..v4`).
    pub fn arcs(self) -> Vec<(VertexId, VertexId)> {
        let mut arcs = vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0), (1, 3), (3, 1)];
        match self {
            ExceptionKind::S4 => {}
            ExceptionKind::S4_1 => arcs.push((2, 0)),
            ExceptionKind::S4_2 => arcs.push((0, 1)),
            ExceptionKind::S4_3 => arcs.extend([(1, 3), (2, 0)]),
        }
        arcs
    }

    pub fn graph(self) -> Digraph {
        Digraph::from_arcs(4, &self.arcs()).expect("catalog arcs are valid")
    }
}

/// A match against the catalog: `iso[i]` is the input vertex playing the
/// role of catalog vertex `v_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExceptionId {
    pub which: ExceptionKind,
    pub iso: [VertexId; 4],
}

pub fn exception_catalog() -> Vec<(ExceptionKind, Digraph)> {
    ExceptionKind::ALL.iter().map(|&k| (k, k.graph())).collect()
}

fn multiplicity_matrix(g: &Digraph) -> [[usize; 4]; 4] {
    let mut m = [[0; 4]; 4];
    for (_, a) in g.arcs() {
        m[a.tail][a.head] += 1;
    }
    m
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Finds a catalog member isomorphic to `g` (as arc multisets) together
/// with a witnessing bijection.
pub fn match_exception(g: &Digraph) -> Option<ExceptionId> {
    if g.order() != 4 {
        return None;
    }
    let m = multiplicity_matrix(g);
    let total = g.arc_count();
    for kind in ExceptionKind::ALL {
        let cat = multiplicity_matrix(&kind.graph());
        if kind.arcs().len() != total {
            continue;
        }
        for p in permutations4() {
            if (0..4).all(|i| (0..4).all(|j| cat[i][j] == m[p[i]][p[j]])) {
                return Some(ExceptionId { which: kind, iso: p });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemicompleteOutcome {
    Decomposed(StrongArcDecomposition),
    Exception(ExceptionId),
}

/// Decomposes a 2-arc-strong semicomplete multigraph on at least four
/// vertices, or reports the catalog member it is isomorphic to.
pub fn decompose_semicomplete(g: &Digraph) -> Result<SemicompleteOutcome> {
    if g.order() < 4 {
        return Err(Error::PreconditionViolated(format!("need at least 4 vertices, got {}", g.order())));
    }
    if let Some((u, v)) = g.non_adjacent_pair() {
        return Err(Error::PreconditionViolated(format!("vertices {u} and {v} are not adjacent")));
    }
    if !is_k_arc_strong(g, 2) {
        return Err(Error::PreconditionViolated("the multigraph is not 2-arc-strong".into()));
    }
    if let Some(ex) = match_exception(g) {
        return Ok(SemicompleteOutcome::Exception(ex));
    }
    match search_decomposition(g) {
        Some(sad) => Ok(SemicompleteOutcome::Decomposed(sad)),
        None => Err(Error::SearchExhausted),
    }
}

/// Exact search for a strong arc decomposition of any multigraph.
pub fn search_decomposition(g: &Digraph) -> Option<StrongArcDecomposition> {
    let mut s = Search::new(g);
    if g.order() <= 1 {
        return Some(StrongArcDecomposition::new(g.arc_ids().collect(), Vec::new()));
    }
    if !s.feasible_start() {
        return None;
    }
    if s.run(0) {
        let mut a = [Vec::new(), Vec::new()];
        for (i, &c) in s.assign.iter().enumerate() {
            a[c as usize].push(ArcId(i));
        }
        let [a1, a2] = a;
        Some(StrongArcDecomposition::new(a1, a2))
    } else {
        None
    }
}

const FREE: u8 = 2;

struct Search<'g> {
    g: &'g Digraph,
    order: Vec<ArcId>,
    assign: Vec<u8>,
    /// Arcs available to class c at v: assigned to c or free.
    pot_out: [Vec<usize>; 2],
    pot_in: [Vec<usize>; 2],
    stack: Vec<usize>,
    seen: Vec<bool>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Digraph) -> Self {
        let n = g.order();
        let mut order: Vec<ArcId> = g.arc_ids().collect();
        // Arcs at low-degree vertices first: their classes are the most forced.
        order.sort_by_key(|&a| {
            let (t, h) = g.endpoints(a);
            (g.out_degree(t).min(g.in_degree(h)), g.out_degree(t) + g.in_degree(h), a)
        });
        let outs: Vec<usize> = (0..n).map(|v| g.out_degree(v)).collect();
        let ins: Vec<usize> = (0..n).map(|v| g.in_degree(v)).collect();
        Search {
            g,
            order,
            assign: vec![FREE; g.arc_count()],
            pot_out: [outs.clone(), outs],
            pot_in: [ins.clone(), ins],
            stack: Vec::with_capacity(n),
            seen: vec![false; n],
        }
    }

    fn feasible_start(&mut self) -> bool {
        (0..self.g.order()).all(|v| self.pot_out[0][v] >= 2 && self.pot_in[0][v] >= 2)
    }

    /// Strongness of the arcs whose label is not `banned` (assigned-only when
    /// `only_assigned` is set).
    fn strong_without(&mut self, banned: u8, only_assigned: bool) -> bool {
        for forward in [true, false] {
            self.seen.iter_mut().for_each(|s| *s = false);
            self.seen[0] = true;
            self.stack.clear();
            self.stack.push(0);
            let mut count = 1;
            while let Some(v) = self.stack.pop() {
                let list = if forward { self.g.out_arcs(v) } else { self.g.in_arcs(v) };
                for &a in list {
                    let lab = self.assign[a.0];
                    if lab == banned || (only_assigned && lab == FREE) {
                        continue;
                    }
                    let (t, h) = self.g.endpoints(a);
                    let w = if forward { h } else { t };
                    if !self.seen[w] {
                        self.seen[w] = true;
                        count += 1;
                        self.stack.push(w);
                    }
                }
            }
            if count != self.g.order() {
                return false;
            }
        }
        true
    }

    fn set(&mut self, a: ArcId, c: u8) -> bool {
        let (t, h) = self.g.endpoints(a);
        let other = 1 - c as usize;
        self.assign[a.0] = c;
        self.pot_out[other][t] -= 1;
        self.pot_in[other][h] -= 1;
        self.pot_out[other][t] > 0 && self.pot_in[other][h] > 0
    }

    fn unset(&mut self, a: ArcId) {
        let (t, h) = self.g.endpoints(a);
        let other = 1 - self.assign[a.0] as usize;
        self.pot_out[other][t] += 1;
        self.pot_in[other][h] += 1;
        self.assign[a.0] = FREE;
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        // If one class is already strong on its own, every remaining arc can
        // join the other class.
        for c in 0..2u8 {
            if self.strong_without(1 - c, true) {
                let rest: Vec<ArcId> = self.order[depth..].to_vec();
                let mut ok = true;
                for &a in &rest {
                    ok &= self.set(a, 1 - c);
                }
                if ok && self.strong_without(c, false) {
                    return true;
                }
                for &a in &rest {
                    self.unset(a);
                }
            }
        }
        let a = self.order[depth];
        let (t, h) = self.g.endpoints(a);
        let first = if depth == 0 {
            0
        } else if self.pot_out[0][t] <= self.pot_out[1][t] || self.pot_in[0][h] <= self.pot_in[1][h] {
            1
        } else {
            0
        };
        let choices: &[u8] = if depth == 0 {
            &[0]
        } else if first == 0 {
            &[0, 1]
        } else {
            &[1, 0]
        };
        for &c in choices {
            if self.set(a, c) && self.strong_without(c, false) && self.run(depth + 1) {
                return true;
            }
            self.unset(a);
        }
        false
    }
}

/// Grows a decomposition whose classes lie inside `covered` to all of `d`.
/// Every vertex outside `covered` needs two distinct in-neighbours and two
/// distinct out-neighbours inside it; class `i` receives an arc from the
/// `i`-th smallest in-neighbour and an arc to the `i`-th smallest
/// out-neighbour. Arcs in no class afterwards join the first class.
pub fn extend_by_covered_vertices(
    d: &Digraph,
    covered: &[bool],
    sad: &StrongArcDecomposition,
) -> Result<StrongArcDecomposition> {
    let mut label = sad.labels(d.arc_count());
    for v in d.vertices().filter(|&v| !covered[v]) {
        let ins: Vec<_> = d.in_neighbors(v).into_iter().filter(|&u| covered[u]).take(2).collect();
        let outs: Vec<_> = d.out_neighbors(v).into_iter().filter(|&w| covered[w]).take(2).collect();
        if ins.len() < 2 || outs.len() < 2 {
            return Err(Error::DegreeHypothesisFails(v));
        }
        for c in 0..2 {
            let a = d.find_arc(ins[c], v).expect("neighbour arc exists");
            let b = d.find_arc(v, outs[c]).expect("neighbour arc exists");
            label[a.0] = Some(c as u8);
            label[b.0] = Some(c as u8);
        }
    }
    Ok(from_labels(&label))
}

fn from_labels(label: &[Option<u8>]) -> StrongArcDecomposition {
    let mut a1 = Vec::new();
    let mut a2 = Vec::new();
    for (i, l) in label.iter().enumerate() {
        match l {
            Some(1) => a2.push(ArcId(i)),
            _ => a1.push(ArcId(i)),
        }
    }
    StrongArcDecomposition { a1, a2 }
}

/// Lifts a decomposition of the core of `sr` back to `d`, patches every
/// `V1` vertex that ended up in exactly one class with an unused in/out arc
/// pair, then extends to all of `d`.
pub fn lift_and_patch(
    d: &SplitDigraph,
    sr: &SplitResult,
    core_sad: &StrongArcDecomposition,
) -> Result<StrongArcDecomposition> {
    let g = d.graph();
    let (c1, c2) = lift_all(sr, &core_sad.a1, &core_sad.a2)?;
    let mut label: Vec<Option<u8>> = vec![None; g.arc_count()];
    c1.iter().for_each(|a| label[a.0] = Some(0));
    c2.iter().for_each(|a| label[a.0] = Some(1));
    let mut splits = vec![0usize; g.order()];
    sr.records.iter().for_each(|r| splits[r.via] += 1);

    let touches = |label: &[Option<u8>], v: VertexId, c: u8| {
        g.out_arcs(v).iter().chain(g.in_arcs(v)).any(|a| label[a.0] == Some(c))
    };
    for t in d.v1() {
        let in0 = touches(&label, t, 0);
        let in1 = touches(&label, t, 1);
        if in0 == in1 {
            continue;
        }
        if splits[t] > 2 {
            return Err(Error::StructureMismatch(format!(
                "vertex {t} carries {} splits but lies in one class",
                splits[t]
            )));
        }
        let missing = if in0 { 1 } else { 0 };
        let a = g.in_arcs(t).iter().copied().find(|a| label[a.0].is_none());
        let b = g.out_arcs(t).iter().copied().find(|b| label[b.0].is_none());
        match (a, b) {
            (Some(a), Some(b)) => {
                label[a.0] = Some(missing);
                label[b.0] = Some(missing);
            }
            _ => return Err(Error::PatchUnavailable(t)),
        }
    }
    let covered: Vec<bool> = g.vertices().map(|v| d.is_v2(v) || touches(&label, v, 0)).collect();
    // Arcs of D<covered> in no class join the first class.
    for (id, a) in g.arcs() {
        if label[id.0].is_none() && covered[a.tail] && covered[a.head] {
            label[id.0] = Some(0);
        }
    }
    let partial = from_labels_partial(&label);
    for c in 0..2 {
        let mask: Vec<bool> = label.iter().map(|&l| l == Some(c as u8)).collect();
        let spans = g.vertices().all(|v| !covered[v] || touches(&label, v, c as u8));
        if !spans || !is_strong_on(g, Some(&covered), Some(&mask)) {
            return Err(Error::VerificationFailed(format!("class {} is not strong after lifting and patching", c + 1)));
        }
    }
    extend_by_covered_vertices(g, &covered, &partial)
}

fn from_labels_partial(label: &[Option<u8>]) -> StrongArcDecomposition {
    let mut a1 = Vec::new();
    let mut a2 = Vec::new();
    for (i, l) in label.iter().enumerate() {
        match l {
            Some(0) => a1.push(ArcId(i)),
            Some(1) => a2.push(ArcId(i)),
            _ => {}
        }
    }
    StrongArcDecomposition { a1, a2 }
}
