//! Independent checkers for decompositions. They rely on their own
//! reachability code rather than the connectivity module.

use crate::graph::{ArcId, Digraph};
use crate::semicomplete::StrongArcDecomposition;

fn strong_spanning(g: &Digraph, arcs: &[ArcId]) -> bool {
    let n = g.order();
    if n <= 1 {
        return true;
    }
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for &a in arcs {
        let (t, h) = g.endpoints(a);
        fwd[t].push(h);
        bwd[h].push(t);
    }
    [fwd, bwd].iter().all(|adj| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|b| b)
    })
}

/// Checks that the two classes partition the arcs of `g` and that each
/// spans a strong subdigraph.
pub fn verify_decomposition(g: &Digraph, sad: &StrongArcDecomposition) -> Result<(), String> {
    let m = g.arc_count();
    let mut owner = vec![None; m];
    for (c, class) in [&sad.a1, &sad.a2].into_iter().enumerate() {
        for &a in class {
            if a.0 >= m {
                return Err(format!("arc {} is out of range", a.0));
            }
            if let Some(prev) = owner[a.0] {
                return Err(format!("arc {} is listed in class {} and class {}", a.0, prev + 1, c + 1));
            }
            owner[a.0] = Some(c);
        }
    }
    if let Some(a) = owner.iter().position(|o| o.is_none()) {
        return Err(format!("arc {a} is in no class"));
    }
    for (c, class) in [&sad.a1, &sad.a2].into_iter().enumerate() {
        if !strong_spanning(g, class) {
            return Err(format!("class {} does not span a strong subdigraph", c + 1));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_each_failure() {
        let g = Digraph::from_arcs(2, &[(0, 1), (1, 0), (0, 1), (1, 0)]).unwrap();
        let ok = StrongArcDecomposition::new(vec![ArcId(0), ArcId(1)], vec![ArcId(2), ArcId(3)]);
        assert!(verify_decomposition(&g, &ok).is_ok());
        let missing = StrongArcDecomposition::new(vec![ArcId(0), ArcId(1)], vec![ArcId(2)]);
        assert!(verify_decomposition(&g, &missing).unwrap_err().contains("no class"));
        let twice = StrongArcDecomposition::new(vec![ArcId(0), ArcId(1), ArcId(2)], vec![ArcId(2), ArcId(3)]);
        assert!(verify_decomposition(&g, &twice).is_err());
        let weak = StrongArcDecomposition::new(vec![ArcId(0), ArcId(2)], vec![ArcId(1), ArcId(3)]);
        assert!(verify_decomposition(&g, &weak).unwrap_err().contains("strong"));
    }
}
