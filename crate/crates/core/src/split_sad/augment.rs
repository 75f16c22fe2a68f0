use super::{C1State, View, XYSelection};
use crate::connectivity::{is_k_arc_strong, is_strong_on};
use crate::error::{Error, Result};
use crate::graph::{ArcId, SplitDigraph, VertexId};
use crate::splitting::{build_dq, FeasibleSet, SplitResult};

/// Clears the residual deficiency of an improved state. The terminal
/// component must be a 3-cycle `u1 u2 u3` whose vertices share their unique
/// `V1` out-neighbour `t`, with the `(X, Y)`-paths leaving through `u1 t`
/// and `u2 t` and `W+ = {u3}`; the path `u3 t z` is added for the smallest
/// `z != u3` with `t z` unused. `W-` is treated the same way on the reversed
/// digraph. The result lets `t` (and its mirror) lie on three paths, and its
/// split-off part is certified 2-arc-strong with empty `W+` and `W-`.
pub fn final_augment(d: &SplitDigraph, sel: &XYSelection, st: &C1State) -> Result<(FeasibleSet, SplitResult)> {
    let mut paths = st.q.paths.clone();
    let mut sr = st.dq.clone();
    for reversed in [false, true] {
        let deficient = if reversed { &sr.w_minus } else { &sr.w_plus };
        if deficient.is_empty() {
            continue;
        }
        let view = View::new(d, sel, reversed);
        let vpaths = view.map_paths(&paths);
        let w: Vec<VertexId> = deficient.clone();
        paths = view.map_paths(&augment_view(&view, &vpaths, &w)?);
        let gamma = max_usage(d, &paths);
        sr = build_dq(d, &FeasibleSet::new(d, paths.clone(), gamma, sel.x.clone(), sel.y.clone())?)?;
    }
    let gamma = max_usage(d, &paths);
    let q = FeasibleSet::new(d, paths, gamma, sel.x.clone(), sel.y.clone())?;
    let sr = build_dq(d, &q)?;
    if sr.score() != 0 {
        return Err(Error::StructureMismatch(format!(
            "augmentation left W+ = {:?} and W- = {:?}",
            sr.w_plus, sr.w_minus
        )));
    }
    if !is_k_arc_strong(&sr.core, 2) {
        return Err(Error::StructureMismatch("augmented split-off part is not 2-arc-strong".into()));
    }
    Ok((q, sr))
}

fn max_usage(d: &SplitDigraph, paths: &[Vec<ArcId>]) -> usize {
    let g = d.graph();
    let mut usage = vec![0; g.order()];
    for p in paths {
        for &a in p {
            let h = g.arc(a).head;
            if d.is_v1(h) {
                usage[h] += 1;
            }
        }
    }
    usage.into_iter().max().unwrap_or(0).max(2)
}

fn augment_view(view: &View, paths: &[Vec<ArcId>], w_plus: &[VertexId]) -> Result<Vec<Vec<ArcId>>> {
    let d = &view.d;
    let g = d.graph();
    let sk = &view.sel.sk;
    let mismatch = |what: &str| Error::StructureMismatch(what.to_string());
    let mut inside = vec![false; g.order()];
    sk.iter().for_each(|&v| inside[v] = true);
    let inner_arcs = g.arcs().filter(|(_, a)| inside[a.tail] && inside[a.head]).count();
    if sk.len() != 3 || inner_arcs != 3 || !is_strong_on(g, Some(&inside), None) {
        return Err(mismatch("the terminal component is not a 3-cycle"));
    }
    let mut hub = None;
    for &u in sk {
        let outs: Vec<VertexId> = g.out_neighbors(u).into_iter().filter(|&v| d.is_v1(v)).collect();
        if outs.len() != 1 || hub.is_some_and(|t| t != outs[0]) {
            return Err(mismatch("the 3-cycle vertices do not share a unique V1 out-neighbour"));
        }
        hub = Some(outs[0]);
    }
    let t = hub.expect("terminal component is non-empty");
    if w_plus.len() != 1 || !sk.contains(&w_plus[0]) {
        return Err(Error::StructureMismatch(format!("W+ = {w_plus:?} is not a single 3-cycle vertex")));
    }
    let u3 = w_plus[0];
    let starts: Vec<(VertexId, VertexId)> = paths[..2].iter().map(|p| g.endpoints(p[0])).collect();
    if starts.iter().any(|&(u, h)| h != t || u == u3) || starts[0].0 == starts[1].0 {
        return Err(mismatch("the (X,Y)-paths do not leave the 3-cycle through the shared V1 vertex"));
    }
    let mut used = vec![false; g.arc_count()];
    paths.iter().flatten().for_each(|a| used[a.0] = true);
    let u3t = g.find_arc(u3, t).ok_or_else(|| mismatch("missing arc to the shared V1 vertex"))?;
    let mut next = paths.to_vec();
    let free = g.out_arcs(t).iter().copied().find(|&a| !used[a.0] && g.arc(a).head != u3);
    match free {
        Some(tz) => next.push(vec![u3t, tz]),
        None => {
            // Every free out-arc of t returns to u3: rotate roles so that the
            // first path leaves from u3 instead.
            let tz = g
                .out_arcs(t)
                .iter()
                .copied()
                .find(|&a| !used[a.0])
                .ok_or_else(|| mismatch("no free out-arc at the shared V1 vertex"))?;
            let u1t = next[0][0];
            next[0][0] = u3t;
            next.push(vec![u1t, tz]);
        }
    }
    Ok(next)
}
