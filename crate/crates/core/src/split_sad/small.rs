use crate::error::{Error, Result};
use crate::graph::{Digraph, SplitDigraph, VertexId};
use crate::semicomplete::{extend_by_covered_vertices, StrongArcDecomposition};

fn orderings(vs: &[VertexId]) -> Vec<[VertexId; 3]> {
    let [a, b, c] = [vs[0], vs[1], vs[2]];
    vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

fn classes_from_walks(g: &Digraph, walks: [&[VertexId]; 2], covered: &[bool]) -> Result<StrongArcDecomposition> {
    let mut label = vec![None; g.arc_count()];
    for (c, walk) in walks.iter().enumerate() {
        for w in walk.windows(2) {
            let a = g
                .find_arc(w[0], w[1])
                .ok_or_else(|| Error::PreconditionViolated(format!("missing arc {} -> {}", w[0], w[1])))?;
            label[a.0] = Some(c as u8);
        }
    }
    let partial = StrongArcDecomposition::new(
        (0..label.len()).filter(|&i| label[i] == Some(0)).map(crate::graph::ArcId).collect(),
        (0..label.len()).filter(|&i| label[i] == Some(1)).map(crate::graph::ArcId).collect(),
    );
    extend_by_covered_vertices(g, covered, &partial)
}

fn two_cycles_with_all(g: &Digraph, t: VertexId, v2: &[VertexId]) -> bool {
    v2.iter().all(|&s| g.has_arc(t, s) && g.has_arc(s, t))
}

/// Decomposition when `|V2| <= 3`: a vertex `t` of `V1` forms 2-cycles with
/// all of `V2`. With a 3-cycle `s1 s2 s3` the classes are `t s1 s2 s3 t` and
/// `t s3 s1 t ∪ t s2 t`; otherwise a hamiltonian path `s1 s2 s3` and a second
/// vertex `t'` of `V1` give `t s1 s2 t' s3 t` and `t s2 s3 t' s1 t`. Every
/// remaining `V1` vertex is hung on both classes.
pub fn small_case(d: &SplitDigraph) -> Result<StrongArcDecomposition> {
    let g = d.graph();
    let v2 = d.v2();
    let v1 = d.v1();
    if v2.len() > 3 {
        return Err(Error::PreconditionViolated(format!("the semicomplete part has {} > 3 vertices", v2.len())));
    }
    let mut covered: Vec<bool> = g.vertices().map(|v| d.is_v2(v)).collect();
    if v1.is_empty() {
        return match v2.len() {
            1 => Ok(StrongArcDecomposition::default()),
            3 => {
                let [a, b, c] = [v2[0], v2[1], v2[2]];
                classes_from_walks(g, [&[a, b, c, a], &[a, c, b, a]], &covered)
            }
            n => Err(Error::PreconditionViolated(format!("no 2-arc-strong semicomplete digraph on {n} vertices"))),
        };
    }
    if v2.len() < 3 {
        return Err(Error::PreconditionViolated(format!("a V1 vertex cannot have degree 3 with |V2| = {}", v2.len())));
    }
    let t = v1[0];
    if !two_cycles_with_all(g, t, &v2) {
        return Err(Error::PreconditionViolated(format!("vertex {t} does not form 2-cycles with all of V2")));
    }
    covered[t] = true;
    let cycle = orderings(&v2).into_iter().find(|&[a, b, c]| g.has_arc(a, b) && g.has_arc(b, c) && g.has_arc(c, a));
    if let Some([s1, s2, s3]) = cycle {
        return classes_from_walks(g, [&[t, s1, s2, s3, t], &[t, s3, s1, t, s2, t]], &covered);
    }
    let [s1, s2, s3] = orderings(&v2)
        .into_iter()
        .find(|&[a, b, c]| g.has_arc(a, b) && g.has_arc(b, c))
        .ok_or_else(|| Error::PreconditionViolated("the semicomplete part has no hamiltonian path".into()))?;
    let t2 = *v1.get(1).ok_or_else(|| Error::PreconditionViolated("need a second vertex in V1".into()))?;
    if !two_cycles_with_all(g, t2, &v2) {
        return Err(Error::PreconditionViolated(format!("vertex {t2} does not form 2-cycles with all of V2")));
    }
    covered[t2] = true;
    classes_from_walks(g, [&[t, s1, s2, t2, s3, t], &[t, s2, s3, t2, s1, t]], &covered)
}
