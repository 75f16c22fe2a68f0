use super::{C1State, View, XYSelection};
use crate::connectivity::path_vertices;
use crate::error::Result;
use crate::graph::{ArcId, Digraph, SplitDigraph, VertexId};
use crate::splitting::{build_dq, FeasibleSet};

/// Applies exchange moves until none lowers `|W+| + |W-|`. Vertices of `W+`
/// are tried before those of `W-` (handled on the reversed digraph), each in
/// increasing order. Returns the final state and the number of moves made.
pub fn improve_to_c1(d: &SplitDigraph, sel: &XYSelection, mut st: C1State) -> Result<(C1State, usize)> {
    let views = [View::new(d, sel, false), View::new(d, sel, true)];
    let mut moves = 0;
    // every move lowers a score bounded by 2 |V2|
    for _ in 0..=2 * d.v2().len() {
        if st.score() == 0 {
            break;
        }
        match improving_move(d, sel, &views, &st) {
            Some(next) => {
                st = next;
                moves += 1;
            }
            None => break,
        }
    }
    Ok((st, moves))
}

fn improving_move(d: &SplitDigraph, sel: &XYSelection, views: &[View; 2], st: &C1State) -> Option<C1State> {
    for view in views {
        let paths = view.map_paths(&st.q.paths);
        let deficient = if view.reversed { &st.dq.w_minus } else { &st.dq.w_plus };
        for &x in deficient {
            for cand in candidates(&view.d, &view.sel, &paths, x) {
                let cand = view.map_paths(&cand);
                let Ok(q) = FeasibleSet::new(d, cand, 2, sel.x.clone(), sel.y.clone()) else { continue };
                let Ok(dq) = build_dq(d, &q) else { continue };
                if dq.score() < st.score() {
                    return Some(C1State { q, dq });
                }
            }
        }
    }
    None
}

fn path_usage(g: &Digraph, paths: &[Vec<ArcId>]) -> (Vec<bool>, Vec<usize>, Vec<Vec<VertexId>>) {
    let mut used = vec![false; g.arc_count()];
    let mut usage = vec![0; g.order()];
    let mut verts = Vec::with_capacity(paths.len());
    for p in paths {
        p.iter().for_each(|a| used[a.0] = true);
        let vs = path_vertices(g, p);
        vs.iter().for_each(|&v| usage[v] += 1);
        verts.push(vs);
    }
    (used, usage, verts)
}

/// Candidate path systems giving `x` a new out-arc in the split-off part:
/// appending `x t y`, replacing a two-arc path `w t z` by `x t t+`,
/// detouring an `(X, Y)`-path through `x` before `t`, and restarting an
/// `(X, Y)`-path at `x t` (salvaging its dropped two-arc pieces).
fn candidates(d: &SplitDigraph, sel: &XYSelection, paths: &[Vec<ArcId>], x: VertexId) -> Vec<Vec<Vec<ArcId>>> {
    let g = d.graph();
    let (used, usage, verts) = path_usage(g, paths);
    let mut out = Vec::new();
    for &xt in g.out_arcs(x) {
        let t = g.arc(xt).head;
        if !d.is_v1(t) || used[xt.0] {
            continue;
        }
        if usage[t] <= 1 {
            for &ty in g.out_arcs(t) {
                if !used[ty.0] && g.arc(ty).head != x {
                    let mut next = paths.to_vec();
                    next.push(vec![xt, ty]);
                    out.push(next);
                }
            }
        }
        for i in 2..paths.len() {
            if verts[i][1] != t {
                continue;
            }
            let z = verts[i][2];
            let tz = if z != x {
                Some(paths[i][1])
            } else {
                g.out_arcs(t).iter().copied().find(|&a| g.arc(a).head != x && !used[a.0])
            };
            if let Some(tz) = tz {
                let mut next = paths.to_vec();
                next[i] = vec![xt, tz];
                out.push(next);
            }
        }
        for j in 0..2.min(paths.len()) {
            let Some(k) = verts[j].iter().position(|&v| v == t) else { continue };
            let p = verts[j][k - 1];
            if p != x && !verts[j].contains(&x) {
                if let Some(px) = g.arcs_between(p, x).find(|a| !used[a.0]) {
                    let mut q = paths[j][..k - 1].to_vec();
                    q.extend([px, xt]);
                    q.extend_from_slice(&paths[j][k..]);
                    let mut next = paths.to_vec();
                    next[j] = q;
                    out.push(next);
                }
            }
            let suffix = &paths[j][k..];
            if verts[j][k..].contains(&x) {
                continue;
            }
            let mut salvaged = Vec::new();
            for m in 1..k.saturating_sub(1) {
                if d.is_v1(verts[j][m]) {
                    salvaged.push(vec![paths[j][m - 1], paths[j][m]]);
                }
            }
            let mut heads: Vec<Vec<ArcId>> = Vec::new();
            if sel.x.contains(&x) {
                heads.push(vec![xt]);
            } else {
                for &s in &sel.x {
                    if let Some(sx) = g.arcs_between(s, x).find(|a| !used[a.0]) {
                        heads.push(vec![sx, xt]);
                    }
                }
            }
            for head in heads {
                let mut q = head;
                q.extend_from_slice(suffix);
                let mut next = paths.to_vec();
                next[j] = q;
                next.extend(salvaged.iter().cloned());
                out.push(next);
            }
        }
    }
    out
}
