use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::{C1State, View, XYSelection};
use crate::connectivity::{cut_arcs, is_k_arc_strong, path_vertices};
use crate::error::{Error, Result};
use crate::graph::{ArcId, Origin, SplitDigraph, VertexId};
use crate::splitting::FeasibleSet;

/// Removes the cut arcs of the split-off semicomplete part. A cut arc `x y`
/// of a 3-vertex terminal component `x y z`, with both `(X, Y)`-paths
/// starting at `y` and a two-arc path `z t' x`, is removed by rerouting that
/// path to `z t' w` for the smallest `w` outside `{x, z}`. Cut arcs of a
/// 3-vertex initial component are handled on the reversed digraph.
pub fn cutarc_repair(d: &SplitDigraph, sel: &XYSelection, mut st: C1State) -> Result<C1State> {
    let views = [View::new(d, sel, false), View::new(d, sel, true)];
    for _ in 0..=d.graph().arc_count() {
        if is_k_arc_strong(&st.dq.core, 2) {
            return Ok(st);
        }
        let cuts =
            cut_arcs(&st.dq.core).map_err(|_| Error::VerificationFailed("split-off part is not strong".into()))?;
        let cut = cuts[0];
        let root = match st.dq.core.arc(cut).origin {
            Origin::Original(a) => a,
            Origin::Splitting(_) => {
                return Err(Error::ShapeMismatch("a splitting arc is a cut arc of the split-off part".into()));
            }
        };
        let rerouted = views.iter().find_map(|view| {
            let paths = view.map_paths(&st.q.paths);
            reroute(view, &paths, root).map(|p| view.map_paths(&p))
        });
        let Some(paths) = rerouted else {
            if let Some(found) = exchange_search(d, sel, &st) {
                return Ok(found);
            }
            let (u, v) = d.graph().endpoints(root);
            return Err(Error::ShapeMismatch(format!("cut arc {u} -> {v} matches neither repairable shape")));
        };
        let q = FeasibleSet::new(d, paths, st.q.gamma, sel.x.clone(), sel.y.clone())?;
        st = C1State::new(d, q)?;
    }
    Err(Error::ShapeMismatch("cut arcs keep reappearing".into()))
}

fn reroute(view: &View, paths: &[Vec<ArcId>], cut: ArcId) -> Option<Vec<Vec<ArcId>>> {
    let g = view.d.graph();
    let sk = &view.sel.sk;
    let (x, y) = g.endpoints(cut);
    if sk.len() != 3 || !sk.contains(&x) || !sk.contains(&y) {
        return None;
    }
    let z = *sk.iter().find(|&&v| v != x && v != y)?;
    if paths.iter().take(2).any(|p| g.arc(p[0]).tail != y) {
        return None;
    }
    let j = (2..paths.len()).find(|&j| {
        let vs = path_vertices(g, &paths[j]);
        vs[0] == z && vs[2] == x
    })?;
    let tp = g.arc(paths[j][0]).head;
    let mut used = vec![false; g.arc_count()];
    for (i, p) in paths.iter().enumerate() {
        if i != j {
            p.iter().for_each(|a| used[a.0] = true);
        }
    }
    let tw = g.out_arcs(tp).iter().copied().find(|&a| {
        let w = g.arc(a).head;
        w != x && w != z && view.d.is_v2(w) && !used[a.0]
    })?;
    let mut next = paths.to_vec();
    next[j] = vec![paths[j][0], tw];
    Some(next)
}

/// Lexicographic badness of a state: `|W+| + |W-|`, then the number of cut
/// arcs of the core.
fn badness(st: &C1State) -> (usize, usize) {
    let cuts = cut_arcs(&st.dq.core).map_or(usize::MAX, |c| c.len());
    (st.score(), cuts)
}

/// Best-first search over path systems for the case where the rerouting
/// above does not apply (the arc it needs may already be taken by another
/// path). Moves: exchange the continuations of two paths at a common `V1`
/// vertex, swap the first or last arc of a path for an unused one, drop a
/// two-arc path, or add one. States are ranked by [`badness`].
fn exchange_search(d: &SplitDigraph, sel: &XYSelection, start: &C1State) -> Option<C1State> {
    const BUDGET: usize = 2000;
    let mut seen: HashSet<Vec<Vec<ArcId>>> = HashSet::new();
    seen.insert(start.q.paths.clone());
    let mut states = vec![start.clone()];
    let mut queue = BinaryHeap::new();
    queue.push(Reverse((badness(start), 0)));
    for _ in 0..BUDGET {
        let Reverse((_, ix)) = queue.pop()?;
        let cur = states[ix].clone();
        for paths in neighbours(d, &cur.q.paths, cur.q.gamma) {
            if !seen.insert(paths.clone()) {
                continue;
            }
            let Ok(q) = FeasibleSet::new(d, paths, cur.q.gamma, sel.x.clone(), sel.y.clone()) else { continue };
            let Ok(st) = C1State::new(d, q) else { continue };
            let bad = badness(&st);
            if bad == (0, 0) {
                return Some(st);
            }
            queue.push(Reverse((bad, states.len())));
            states.push(st);
        }
    }
    None
}

fn neighbours(d: &SplitDigraph, paths: &[Vec<ArcId>], gamma: usize) -> Vec<Vec<Vec<ArcId>>> {
    let g = d.graph();
    let mut used = vec![false; g.arc_count()];
    let mut usage = vec![0usize; g.order()];
    let verts: Vec<Vec<VertexId>> = paths.iter().map(|p| path_vertices(g, p)).collect();
    paths.iter().flatten().for_each(|a| used[a.0] = true);
    verts.iter().flatten().for_each(|&v| usage[v] += 1);
    let mut out = Vec::new();
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            for k in 1..verts[i].len() - 1 {
                for l in 1..verts[j].len() - 1 {
                    if verts[i][k] != verts[j][l] || !d.is_v1(verts[i][k]) {
                        continue;
                    }
                    let mut next = paths.to_vec();
                    next[i] = [&paths[i][..k], &paths[j][l..]].concat();
                    next[j] = [&paths[j][..l], &paths[i][k..]].concat();
                    out.push(next);
                }
            }
        }
    }
    for j in 0..paths.len() {
        let last = verts[j].len() - 1;
        if last >= 2 && d.is_v1(verts[j][1]) {
            for &a in g.in_arcs(verts[j][1]) {
                if !used[a.0] && !verts[j][2..].contains(&g.arc(a).tail) {
                    let mut next = paths.to_vec();
                    next[j][0] = a;
                    out.push(next);
                }
            }
        }
        if last >= 2 && d.is_v1(verts[j][last - 1]) {
            for &a in g.out_arcs(verts[j][last - 1]) {
                if !used[a.0] && !verts[j][..last - 1].contains(&g.arc(a).head) {
                    let mut next = paths.to_vec();
                    next[j][last - 1] = a;
                    out.push(next);
                }
            }
        }
        if j >= 2 {
            let mut next = paths.to_vec();
            next.remove(j);
            out.push(next);
        }
    }
    for t in d.v1() {
        if usage[t] >= gamma {
            continue;
        }
        for &a in g.in_arcs(t).iter().filter(|a| !used[a.0]) {
            for &b in g.out_arcs(t).iter().filter(|b| !used[b.0]) {
                if g.arc(a).tail != g.arc(b).head {
                    let mut next = paths.to_vec();
                    next.push(vec![a, b]);
                    out.push(next);
                }
            }
        }
    }
    out
}
