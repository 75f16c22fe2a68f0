use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, SplitDigraph, VertexId};
use crate::semicomplete::{extend_by_covered_vertices, ExceptionId, StrongArcDecomposition};
use crate::splitting::{SplitRecord, SplitResult};

/// Builds a decomposition of `d` when the split-off semicomplete part is
/// isomorphic to a catalog exception. `ex.iso` maps catalog vertices
/// `v1..v4` to core vertices. The 4-cycle `v1 v2 v3 v4 v1` always has an
/// original copy of each arc; the construction depends on which diagonal
/// arcs come from splitting.
pub fn exception_case(d: &SplitDigraph, sr: &SplitResult, ex: ExceptionId) -> Result<StrongArcDecomposition> {
    let g = d.graph();
    let v: [VertexId; 4] = std::array::from_fn(|i| sr.core_map[ex.iso[i]]);
    let ctx = Ctx { d, g, sr, v };
    let cycle: Vec<ArcId> = (0..4)
        .map(|i| ctx.original(v[i], v[(i + 1) % 4]).ok_or_else(|| mismatch("4-cycle arc has no original copy")))
        .collect::<Result<_>>()?;
    let splitting: Vec<&SplitRecord> = sr.splitting_arcs().map(|(_, r)| r).collect();
    let (c1, c2) = if splitting.is_empty() {
        no_splitting_arcs(&ctx, &cycle)?
    } else {
        let d13 = ctx.diagonal_split(v[0], v[2]);
        let d24 = ctx.diagonal_split(v[1], v[3]);
        if d13.is_none() && d24.is_none() {
            single_cycle_split(&ctx, &cycle)?
        } else {
            diagonal_splits(&ctx, &cycle, d13, d24)?
        }
    };
    let mut covered: Vec<bool> = g.vertices().map(|u| d.is_v2(u)).collect();
    for &a in c1.iter().chain(&c2) {
        let (t, h) = g.endpoints(a);
        covered[t] = true;
        covered[h] = true;
    }
    let partial = StrongArcDecomposition::new(c1, c2);
    extend_by_covered_vertices(g, &covered, &partial)
}

fn mismatch(what: &str) -> Error {
    Error::ShapeMismatch(what.to_string())
}

struct Ctx<'a> {
    d: &'a SplitDigraph,
    g: &'a Digraph,
    sr: &'a SplitResult,
    v: [VertexId; 4],
}

impl Ctx<'_> {
    fn original(&self, u: VertexId, w: VertexId) -> Option<ArcId> {
        self.g.find_arc(u, w)
    }

    /// A splitting arc `a b` inside `{p, q}` whose reverse `b a` is an
    /// original arc.
    fn diagonal_split(&self, p: VertexId, q: VertexId) -> Option<SplitRecord> {
        self.sr
            .splitting_arcs()
            .map(|(_, r)| *r)
            .find(|r| ((r.tail, r.head) == (p, q) || (r.tail, r.head) == (q, p)) && self.g.has_arc(r.head, r.tail))
    }

    /// Lowest arc `s -> t` with `s` in `from`, avoiding `taken`.
    fn in_arc(&self, t: VertexId, from: &[VertexId], taken: &[ArcId]) -> Option<ArcId> {
        self.g.in_arcs(t).iter().copied().find(|a| from.contains(&self.g.arc(*a).tail) && !taken.contains(a))
    }

    fn out_arc(&self, t: VertexId, to: &[VertexId], taken: &[ArcId]) -> Option<ArcId> {
        self.g.out_arcs(t).iter().copied().find(|a| to.contains(&self.g.arc(*a).head) && !taken.contains(a))
    }

    fn diagonals(&self) -> Result<Vec<ArcId>> {
        let v = self.v;
        [(0, 2), (2, 0), (1, 3), (3, 1)]
            .iter()
            .map(|&(i, j)| self.original(v[i], v[j]).ok_or_else(|| mismatch("diagonal arc is not original")))
            .collect()
    }
}

/// The semicomplete part itself is `S4`: `t` joins each diagonal pair by an
/// in- and an out-arc in the first class, and a spare in/out pair of `t`
/// joins the 4-cycle in the second.
fn no_splitting_arcs(ctx: &Ctx, cycle: &[ArcId]) -> Result<(Vec<ArcId>, Vec<ArcId>)> {
    let v = ctx.v;
    let t = *ctx.d.v1().first().ok_or_else(|| {
        Error::PreconditionViolated("the digraph is an exceptional multigraph with no V1 vertex".into())
    })?;
    let all: Vec<VertexId> = ctx.d.v2();
    let mut a1 = ctx.diagonals()?;
    for pair in [[v[0], v[2]], [v[1], v[3]]] {
        a1.push(ctx.in_arc(t, &pair, &[]).ok_or_else(|| mismatch("t lacks an in-neighbour in a diagonal pair"))?);
        a1.push(ctx.out_arc(t, &pair, &[]).ok_or_else(|| mismatch("t lacks an out-neighbour in a diagonal pair"))?);
    }
    let mut a2 = cycle.to_vec();
    a2.push(ctx.in_arc(t, &all, &a1).ok_or(Error::PatchUnavailable(t))?);
    a2.push(ctx.out_arc(t, &all, &a1).ok_or(Error::PatchUnavailable(t))?);
    Ok((a1, a2))
}

/// Only the extra copy of `v1 v2` is a splitting arc, through `t`.
fn single_cycle_split(ctx: &Ctx, cycle: &[ArcId]) -> Result<(Vec<ArcId>, Vec<ArcId>)> {
    let v = ctx.v;
    let rec = ctx
        .sr
        .splitting_arcs()
        .map(|(_, r)| *r)
        .find(|r| (r.tail, r.head) == (v[0], v[1]))
        .ok_or_else(|| mismatch("no splitting copy of v1 v2"))?;
    if ctx.sr.splitting_arcs().count() != 1 {
        return Err(mismatch("more than one splitting arc without diagonal splits"));
    }
    let t = rec.via;
    let base = [rec.in_arc, rec.out_arc];
    let tin = ctx.in_arc(t, &[v[1], v[3]], &base).ok_or(Error::PatchUnavailable(t))?;
    let tout = ctx.out_arc(t, &[v[0], v[2]], &base).ok_or(Error::PatchUnavailable(t))?;
    let mut a2 = vec![rec.in_arc, rec.out_arc, tin, tout];
    a2.extend(ctx.diagonals()?);
    let all = ctx.d.v2();
    let mut a1 = cycle.to_vec();
    a1.push(ctx.in_arc(t, &all, &a2).ok_or(Error::PatchUnavailable(t))?);
    a1.push(ctx.out_arc(t, &all, &a2).ok_or(Error::PatchUnavailable(t))?);
    Ok((a1, a2))
}

/// Cycles `C1` through `{v1, v3}` and `C2` through `{v2, v4}` of the input,
/// each either an original 2-cycle or a splitting arc's two arcs plus the
/// original reverse arc.
fn diagonal_splits(
    ctx: &Ctx,
    cycle: &[ArcId],
    d13: Option<SplitRecord>,
    d24: Option<SplitRecord>,
) -> Result<(Vec<ArcId>, Vec<ArcId>)> {
    let v = ctx.v;
    let cyc = |rec: Option<SplitRecord>, p: VertexId, q: VertexId| -> Result<Vec<ArcId>> {
        match rec {
            Some(r) => {
                let back =
                    ctx.original(r.head, r.tail).ok_or_else(|| mismatch("diagonal has no original reverse arc"))?;
                Ok(vec![r.in_arc, r.out_arc, back])
            }
            None => {
                let a = ctx.original(p, q).ok_or_else(|| mismatch("diagonal 2-cycle is not original"))?;
                let b = ctx.original(q, p).ok_or_else(|| mismatch("diagonal 2-cycle is not original"))?;
                Ok(vec![a, b])
            }
        }
    };
    let c1 = cyc(d13, v[0], v[2])?;
    let c2 = cyc(d24, v[1], v[3])?;
    let mut both: Vec<ArcId> = c1.iter().chain(&c2).copied().collect();
    let all = ctx.d.v2();
    if let (Some(r1), Some(r2)) = (d13, d24) {
        if r1.via == r2.via {
            let t = r1.via;
            let mut a1 = cycle.to_vec();
            a1.push(ctx.in_arc(t, &all, &both).ok_or(Error::PatchUnavailable(t))?);
            a1.push(ctx.out_arc(t, &all, &both).ok_or(Error::PatchUnavailable(t))?);
            return Ok((a1, both));
        }
    }
    // t1 (splitting inside {v1,v3}) gets a pair with {v2,v4}; t2 the converse.
    let pair = |rec: Option<SplitRecord>, ends: [VertexId; 2]| -> Result<Option<(VertexId, [ArcId; 2])>> {
        let Some(r) = rec else { return Ok(None) };
        let t = r.via;
        let a = ctx.in_arc(t, &ends, &[]).ok_or(Error::PatchUnavailable(t))?;
        let b = ctx.out_arc(t, &ends, &[]).ok_or(Error::PatchUnavailable(t))?;
        Ok(Some((t, [a, b])))
    };
    let p1 = pair(d13, [v[1], v[3]])?;
    let p2 = pair(d24, [v[0], v[2]])?;
    let (main, other) = if p1.is_some() { (p1, p2) } else { (p2, p1) };
    let (tj, pj) = main.expect("at least one diagonal splitting arc");
    both.extend(pj);
    let mut a1 = cycle.to_vec();
    a1.push(ctx.in_arc(tj, &all, &both).ok_or(Error::PatchUnavailable(tj))?);
    a1.push(ctx.out_arc(tj, &all, &both).ok_or(Error::PatchUnavailable(tj))?);
    if let Some((_, po)) = other {
        a1.extend(po);
    }
    Ok((a1, both))
}
