//! Nice decompositions of strong semicomplete digraphs.
//!
//! A nice decomposition is an ordered vertex partition `U_1, ..., U_l` whose
//! blocks induce strong subdigraphs and whose backward arcs (tail in a later
//! block than head) are exactly the cut arcs. Blocks are stored 0-based.

use std::collections::BTreeSet;

use crate::connectivity::{cut_arcs, is_strong, is_strong_on, strong_components_masked};
use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub blocks: Vec<Vec<VertexId>>,
    /// Block index of every vertex.
    pub index: Vec<usize>,
    /// Backward arcs in natural order: strictly decreasing tail index.
    pub backward_arcs: Vec<ArcId>,
}

impl NiceDecomposition {
    pub fn terminal_block(&self) -> &[VertexId] {
        &self.blocks[self.blocks.len() - 1]
    }

    pub fn initial_block(&self) -> &[VertexId] {
        &self.blocks[0]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Checks every defining property and the index inequalities between
    /// consecutive backward arcs against `s`.
    pub fn verify(&self, s: &Digraph) -> std::result::Result<(), String> {
        let n = s.order();
        if self.index.len() != n {
            return Err(format!("index covers {} of {n} vertices", self.index.len()));
        }
        let mut seen = vec![false; n];
        for (i, block) in self.blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(format!("block {i} is empty"));
            }
            for &v in block {
                if v >= n || seen[v] || self.index[v] != i {
                    return Err(format!("vertex {v} is misplaced in block {i}"));
                }
                seen[v] = true;
            }
            let mut inside = vec![false; n];
            block.iter().for_each(|&v| inside[v] = true);
            if !is_strong_on(s, Some(&inside), None) {
                return Err(format!("block {i} does not induce a strong subdigraph"));
            }
        }
        if let Some(v) = seen.iter().position(|&b| !b) {
            return Err(format!("vertex {v} is in no block"));
        }
        let cuts: BTreeSet<ArcId> = cut_arcs(s).map_err(|e| e.to_string())?.into_iter().collect();
        let backward: BTreeSet<ArcId> =
            s.arcs().filter(|(_, a)| self.index[a.tail] > self.index[a.head]).map(|(id, _)| id).collect();
        if cuts != backward {
            return Err(format!("cut arcs {cuts:?} differ from backward arcs {backward:?}"));
        }
        let listed: BTreeSet<ArcId> = self.backward_arcs.iter().copied().collect();
        if listed != backward || listed.len() != self.backward_arcs.len() {
            return Err("backward arc list does not match the backward arcs".into());
        }
        natural_order_holds(s, self)
    }
}

/// Index inequalities of the natural ordering. With `r` backward arcs
/// `x_j y_j`: `x_1` lies in the last block, `y_r` in the first, and for
/// consecutive arcs `ind(y_{j+1}) < ind(y_j) <= ind(x_{j+1}) < ind(x_j)` and
/// `ind(y_{j+1}) <= ind(x_{j+2}) < ind(y_j)`.
fn natural_order_holds(s: &Digraph, nd: &NiceDecomposition) -> std::result::Result<(), String> {
    let r = nd.backward_arcs.len();
    if r == 0 {
        return Ok(());
    }
    let ix = |j: usize| nd.index[s.arc(nd.backward_arcs[j]).tail];
    let iy = |j: usize| nd.index[s.arc(nd.backward_arcs[j]).head];
    if ix(0) != nd.blocks.len() - 1 {
        return Err("first backward arc does not leave the last block".into());
    }
    if iy(r - 1) != 0 {
        return Err("last backward arc does not enter the first block".into());
    }
    for j in 0..r.saturating_sub(1) {
        if !(iy(j + 1) < iy(j) && iy(j) <= ix(j + 1) && ix(j + 1) < ix(j)) {
            return Err(format!("backward arcs {j} and {} violate the interleaving", j + 1));
        }
    }
    for j in 0..r.saturating_sub(2) {
        if !(iy(j + 1) <= ix(j + 2) && ix(j + 2) < iy(j)) {
            return Err(format!("backward arcs {j} and {} violate the skip condition", j + 2));
        }
    }
    Ok(())
}

/// The unique nice decomposition of a strong simple semicomplete digraph on
/// at least four vertices.
pub fn nice_decompose(s: &Digraph) -> Result<NiceDecomposition> {
    let n = s.order();
    if n < 4 {
        return Err(Error::TooSmall { needed: 4, got: n });
    }
    if let Some((tail, head)) = s.parallel_pair() {
        return Err(Error::ParallelArc { tail, head });
    }
    if !s.is_semicomplete() {
        return Err(Error::NotSemicomplete);
    }
    if !is_strong(s) {
        return Err(Error::NotStrong);
    }
    let cuts = cut_arcs(s)?;
    let mut keep = vec![true; s.arc_count()];
    cuts.iter().for_each(|a| keep[a.0] = false);
    let parts = strong_components_masked(s, Some(&keep));
    let m = parts.len();
    let comp = &parts.membership;

    // Precedence constraints between the blocks.
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
    for (id, a) in s.arcs() {
        let (ct, ch) = (comp[a.tail], comp[a.head]);
        if ct == ch {
            if !keep[id.0] {
                return Err(Error::VerificationFailed(format!("cut arc {id:?} lies inside a block")));
            }
            continue;
        }
        if keep[id.0] {
            succ[ct].insert(ch);
        } else {
            succ[ch].insert(ct);
        }
    }
    let mut indeg = vec![0usize; m];
    for outs in &succ {
        for &c in outs {
            indeg[c] += 1;
        }
    }
    let mut order = Vec::with_capacity(m);
    let mut ready: Vec<usize> = (0..m).filter(|&c| indeg[c] == 0).collect();
    while !ready.is_empty() {
        if ready.len() > 1 {
            return Err(Error::VerificationFailed("block order is not unique".into()));
        }
        let c = ready.pop().unwrap();
        order.push(c);
        for &d in &succ[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                ready.push(d);
            }
        }
    }
    if order.len() != m {
        return Err(Error::VerificationFailed("block constraints are cyclic".into()));
    }
    let mut position = vec![0; m];
    for (i, &c) in order.iter().enumerate() {
        position[c] = i;
    }
    let blocks: Vec<Vec<VertexId>> = order.iter().map(|&c| parts.components[c].clone()).collect();
    let index: Vec<usize> = (0..n).map(|v| position[comp[v]]).collect();
    let mut backward_arcs = cuts;
    backward_arcs.sort_by_key(|&a| {
        let arc = s.arc(a);
        (std::cmp::Reverse(index[arc.tail]), std::cmp::Reverse(index[arc.head]), a)
    });
    let nd = NiceDecomposition { blocks, index, backward_arcs };
    nd.verify(s).map_err(Error::VerificationFailed)?;
    Ok(nd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_vertex_tournament() {
        // a=0, b=1, c=2, d=3. b has in-degree one, so ab is a cut arc too and
        // b must precede a.
        let t = Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (3, 0)]).unwrap();
        let nd = nice_decompose(&t).unwrap();
        assert_eq!(nd.blocks, vec![vec![1], vec![0], vec![3], vec![2]]);
        let pairs: Vec<_> = nd.backward_arcs.iter().map(|&a| t.endpoints(a)).collect();
        assert_eq!(pairs, vec![(2, 3), (3, 0), (0, 1)]);
        assert_eq!(nd.terminal_block(), &[2]);
        assert_eq!(nd.initial_block(), &[1]);
    }

    #[test]
    fn two_arc_strong_input_is_one_block() {
        let mut arcs = Vec::new();
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    arcs.push((u, v));
                }
            }
        }
        let g = Digraph::from_arcs(5, &arcs).unwrap();
        let nd = nice_decompose(&g).unwrap();
        assert_eq!(nd.blocks.len(), 1);
        assert!(nd.backward_arcs.is_empty());
        assert_eq!(nd.terminal_block(), nd.initial_block());
    }

    #[test]
    fn five_block_chain_with_shared_endpoint() {
        // U1..U5 = {0}, {1}, {2}, {3,5,6}, {4}; backward arcs 4->2, 2->1, 1->0
        let block = [0, 1, 2, 3, 4, 3, 3];
        let mut arcs = vec![(3, 5), (5, 6), (6, 3)];
        for u in 0..7 {
            for v in 0..7 {
                if block[u] < block[v] && !matches!((u, v), (2, 4) | (1, 2) | (0, 1)) {
                    arcs.push((u, v));
                }
            }
        }
        arcs.extend([(4, 2), (2, 1), (1, 0)]);
        let g = Digraph::from_arcs(7, &arcs).unwrap();
        let nd = nice_decompose(&g).unwrap();
        assert_eq!(nd.blocks, vec![vec![0], vec![1], vec![2], vec![3, 5, 6], vec![4]]);
        let pairs: Vec<_> = nd.backward_arcs.iter().map(|&a| g.endpoints(a)).collect();
        assert_eq!(pairs, vec![(4, 2), (2, 1), (1, 0)]);
        // x2 = y1
        assert_eq!(pairs[1].0, pairs[0].1);
        assert_eq!(nd.terminal_block(), &[4]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c3 = Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(nice_decompose(&c3), Err(Error::TooSmall { needed: 4, got: 3 }));
        let path = Digraph::from_arcs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(nice_decompose(&path), Err(Error::NotStrong));
        let sparse = Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(nice_decompose(&sparse), Err(Error::NotSemicomplete));
    }
}
