use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connectivity::{is_k_arc_strong, is_strong};
use crate::error::{Error, Result};
use crate::graph::{validate_split, ArcId, Digraph, SplitDigraph, VertexId};

/// A property an emitted instance must have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Enforce {
    Strong,
    TwoArcStrong,
    ThreeArcStrong,
    /// Every `V1` vertex has in- and out-degree at least 3.
    V1Degree3,
    /// Every `V1` vertex is adjacent to every `V2` vertex. This one shapes
    /// sampling directly instead of rejecting.
    SemicompleteSplit,
}

impl Enforce {
    pub fn holds(self, d: &SplitDigraph) -> bool {
        let g = d.graph();
        match self {
            Enforce::Strong => is_strong(g),
            Enforce::TwoArcStrong => is_k_arc_strong(g, 2),
            Enforce::ThreeArcStrong => is_k_arc_strong(g, 3),
            Enforce::V1Degree3 => d.v1().into_iter().all(|t| g.in_degree(t) >= 3 && g.out_degree(t) >= 3),
            Enforce::SemicompleteSplit => d.v1().into_iter().all(|t| d.v2().into_iter().all(|s| g.adjacent(t, s))),
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "strong" => Enforce::Strong,
            "two_arc_strong" | "2" => Enforce::TwoArcStrong,
            "three_arc_strong" | "3" => Enforce::ThreeArcStrong,
            "v1_degree_3" => Enforce::V1Degree3,
            "semicomplete_split" => Enforce::SemicompleteSplit,
            _ => return None,
        })
    }
}

/// Parameters of the random split digraph sampler.
///
/// Each `V2` pair becomes a 2-cycle with probability `orientation_bias`,
/// otherwise a single arc pointing from the lower to the higher id with
/// probability `forward_bias`. Each of the two possible arcs between a `V1`
/// and a `V2` vertex is present with probability `cross_density`; under
/// [`Enforce::SemicompleteSplit`] the pair instead gets a 2-cycle with that
/// probability and a single arc of random direction otherwise. Instances
/// violating a clause are rejected and resampled from the same stream.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n1: usize,
    pub n2: usize,
    pub cross_density: f64,
    pub orientation_bias: f64,
    pub forward_bias: f64,
    pub seed: u64,
    pub enforce: Vec<Enforce>,
    pub max_attempts: usize,
}

impl GenSpec {
    pub fn new(n1: usize, n2: usize, seed: u64) -> Self {
        GenSpec {
            n1,
            n2,
            cross_density: 0.6,
            orientation_bias: 0.3,
            forward_bias: 0.5,
            seed,
            enforce: Vec::new(),
            max_attempts: 20_000,
        }
    }

    pub fn enforce(mut self, clauses: &[Enforce]) -> Self {
        self.enforce = clauses.to_vec();
        self
    }

    fn semicomplete_split(&self) -> bool {
        self.enforce.contains(&Enforce::SemicompleteSplit)
    }
}

/// Samples a split digraph with `V1 = 0..n1` and `V2 = n1..n1+n2`.
pub fn gen_random(spec: &GenSpec) -> Result<SplitDigraph> {
    if spec.n2 == 0 {
        return Err(Error::PreconditionViolated("the semicomplete part needs a vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.max_attempts {
        let d = sample(spec, &mut rng);
        if spec.enforce.iter().all(|c| c.holds(&d)) {
            return Ok(d);
        }
    }
    Err(Error::GiveUp { attempts: spec.max_attempts })
}

fn sample(spec: &GenSpec, rng: &mut impl Rng) -> SplitDigraph {
    let n = spec.n1 + spec.n2;
    let mut arcs = Vec::new();
    for t in 0..spec.n1 {
        for s in spec.n1..n {
            if spec.semicomplete_split() {
                push_pair(&mut arcs, t, s, spec.cross_density, 0.5, rng);
            } else {
                if rng.gen_bool(spec.cross_density) {
                    arcs.push((t, s));
                }
                if rng.gen_bool(spec.cross_density) {
                    arcs.push((s, t));
                }
            }
        }
    }
    for a in spec.n1..n {
        for b in a + 1..n {
            push_pair(&mut arcs, a, b, spec.orientation_bias, spec.forward_bias, rng);
        }
    }
    let v1: Vec<VertexId> = (0..spec.n1).collect();
    let v2: Vec<VertexId> = (spec.n1..n).collect();
    validate_split(Digraph::from_arcs(n, &arcs).expect("sampled arcs are simple"), &v1, &v2)
        .expect("sampler emits split digraphs")
}

fn push_pair(
    arcs: &mut Vec<(VertexId, VertexId)>,
    a: VertexId,
    b: VertexId,
    both: f64,
    forward: f64,
    rng: &mut impl Rng,
) {
    if rng.gen_bool(both) {
        arcs.push((a, b));
        arcs.push((b, a));
    } else if rng.gen_bool(forward) {
        arcs.push((a, b));
    } else {
        arcs.push((b, a));
    }
}

/// Random semicomplete digraph on `n` vertices: each pair is a 2-cycle with
/// probability `two_cycles`, otherwise a single arc of random direction.
pub fn gen_semicomplete(n: usize, two_cycles: f64, rng: &mut impl Rng) -> Digraph {
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            push_pair(&mut arcs, a, b, two_cycles, 0.5, rng);
        }
    }
    Digraph::from_arcs(n, &arcs).expect("sampled arcs are simple")
}

/// Every tournament on `n` vertices, pairs taken in lexicographic order and
/// the bits of the index choosing the orientation.
pub fn all_tournaments(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let arcs: Vec<_> =
            pairs.iter().enumerate().map(|(i, &(a, b))| if mask >> i & 1 == 1 { (b, a) } else { (a, b) }).collect();
        Digraph::from_arcs(n, &arcs).expect("tournament arcs are simple")
    })
}

/// A random `(from, to)`-path whose interior avoids `from ∪ to`, found by a
/// randomised depth-first search. `None` when no such path exists.
pub fn random_path(g: &Digraph, from: &[VertexId], to: &[VertexId], rng: &mut impl Rng) -> Option<Vec<ArcId>> {
    let n = g.order();
    let mut is_to = vec![false; n];
    to.iter().for_each(|&v| is_to[v] = true);
    let mut blocked = vec![false; n];
    from.iter().for_each(|&v| blocked[v] = true);
    let mut starts = from.to_vec();
    starts.shuffle(rng);
    for s in starts {
        let mut seen = blocked.clone();
        let mut path = Vec::new();
        if dfs(g, s, &is_to, &mut seen, &mut path, rng) {
            return Some(path);
        }
    }
    None
}

fn dfs(g: &Digraph, v: VertexId, is_to: &[bool], seen: &mut [bool], path: &mut Vec<ArcId>, rng: &mut impl Rng) -> bool {
    let mut arcs = g.out_arcs(v).to_vec();
    arcs.shuffle(rng);
    for a in arcs {
        let w = g.arc(a).head;
        if seen[w] {
            continue;
        }
        path.push(a);
        if is_to[w] {
            return true;
        }
        seen[w] = true;
        if dfs(g, w, is_to, seen, path, rng) {
            return true;
        }
        path.pop();
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    D1,
    D2,
}

/// A split digraph with no good `(u, v)`-pair for its designated roots.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub d: SplitDigraph,
    pub u: VertexId,
    pub v: VertexId,
    pub names: Vec<String>,
}

/// Default semicomplete digraph for the middle part: a single vertex, a
/// 2-cycle, or a directed cycle with chords forward.
pub fn default_middle(size: usize) -> Digraph {
    let mut arcs = Vec::new();
    for a in 0..size {
        for b in a + 1..size {
            arcs.push((a, b));
        }
    }
    if size >= 2 {
        arcs.push((size - 1, 0));
    }
    Digraph::from_arcs(size, &arcs).expect("middle part is simple")
}

/// Builds the counterexample family member around `w`, whose vertex
/// `anchor` takes the role joined to the two `V1` hubs.
///
/// `D1`: `V2` top to bottom is `b, v, W, u, a`, `V1 = {v_t, m, u_t}`; apart
/// from the arcs inside `W`, every `V2` arc goes downwards. The `V1` arcs are
/// `a u_t, u u_t, u_t u, u_t x, x v_t, v v_t, v_t v, v_t b, a m, m a, b m, m b`
/// with `x` the anchor.
///
/// `D2`: `V2` top to bottom is `v, b, W, a, u`, `V1 = {v_t, u_t}`; every `V2`
/// arc outside `W` goes downwards except `u a, a b, b v`. The `V1` arcs are
/// `a u_t, u u_t, u_t u, u_t x, x v_t, v v_t, v_t v, v_t b`.
pub fn gen_counterexample(family: Family, w: &Digraph, anchor: VertexId) -> Result<Counterexample> {
    if !w.is_semicomplete() {
        return Err(Error::NotSemicomplete);
    }
    if anchor >= w.order() {
        return Err(Error::VertexOutOfRange { vertex: anchor, order: w.order() });
    }
    let k = w.order();
    // V2 vertices first, top to bottom, then V1.
    let (above, below, hubs): (&[&str], &[&str], &[&str]) = match family {
        Family::D1 => (&["b", "v"], &["u", "a"], &["v_t", "m", "u_t"]),
        Family::D2 => (&["v", "b"], &["a", "u"], &["v_t", "u_t"]),
    };
    let mut names: Vec<String> = above.iter().map(|s| s.to_string()).collect();
    names.extend((0..k).map(|i| if i == anchor { "x".to_string() } else { format!("w{i}") }));
    names.extend(below.iter().map(|s| s.to_string()));
    names.extend(hubs.iter().map(|s| s.to_string()));
    let id = |name: &str| names.iter().position(|s| s == name).expect("known name");
    let n2 = 4 + k;
    let mut arcs = Vec::new();
    for i in 0..n2 {
        for j in i + 1..n2 {
            let (wi, wj) = (i.wrapping_sub(2), j.wrapping_sub(2));
            if wi < k && wj < k {
                for (p, q) in [(wi, wj), (wj, wi)] {
                    if w.has_arc(p, q) {
                        arcs.push((p + 2, q + 2));
                    }
                }
            } else {
                arcs.push((i, j));
            }
        }
    }
    let flip: &[(&str, &str)] = match family {
        Family::D1 => &[],
        Family::D2 => &[("u", "a"), ("a", "b"), ("b", "v")],
    };
    for &(p, q) in flip {
        let pos = arcs.iter().position(|&e| e == (id(q), id(p))).expect("downward arc present");
        arcs[pos] = (id(p), id(q));
    }
    let mut cross = vec![
        ("a", "u_t"),
        ("u", "u_t"),
        ("u_t", "u"),
        ("u_t", "x"),
        ("x", "v_t"),
        ("v", "v_t"),
        ("v_t", "v"),
        ("v_t", "b"),
    ];
    if family == Family::D1 {
        cross.extend([("a", "m"), ("m", "a"), ("b", "m"), ("m", "b")]);
    }
    arcs.extend(cross.iter().map(|&(p, q)| (id(p), id(q))));
    let n = names.len();
    let v1: Vec<VertexId> = (n2..n).collect();
    let v2: Vec<VertexId> = (0..n2).collect();
    let d = validate_split(Digraph::from_arcs(n, &arcs)?, &v1, &v2)?;
    Ok(Counterexample { u: id("u"), v: id("v"), d, names })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let spec = GenSpec::new(2, 5, 9).enforce(&[Enforce::TwoArcStrong]);
        assert_eq!(gen_random(&spec).unwrap(), gen_random(&spec).unwrap());
        let other = GenSpec { seed: 10, ..spec.clone() };
        assert_ne!(gen_random(&spec).unwrap(), gen_random(&other).unwrap());
    }

    #[test]
    fn clauses_hold_on_output() {
        let spec = GenSpec { cross_density: 0.8, orientation_bias: 0.5, ..GenSpec::new(3, 6, 1) }
            .enforce(&[Enforce::ThreeArcStrong]);
        let d = gen_random(&spec).unwrap();
        assert!(is_k_arc_strong(d.graph(), 3));
        let spec = GenSpec::new(3, 5, 2).enforce(&[Enforce::V1Degree3]);
        let d = gen_random(&spec).unwrap();
        assert!(Enforce::V1Degree3.holds(&d));
        let spec = GenSpec::new(2, 4, 3).enforce(&[Enforce::SemicompleteSplit]);
        assert!(Enforce::SemicompleteSplit.holds(&gen_random(&spec).unwrap()));
    }

    #[test]
    fn impossible_clause_gives_up() {
        let spec = GenSpec { max_attempts: 5, ..GenSpec::new(1, 2, 0) }.enforce(&[Enforce::V1Degree3]);
        assert_eq!(gen_random(&spec), Err(Error::GiveUp { attempts: 5 }));
    }

    #[test]
    fn tournament_count() {
        assert_eq!(all_tournaments(4).count(), 64);
        assert!(all_tournaments(3).all(|t| t.arc_count() == 3));
    }

    #[test]
    fn counterexample_shapes() {
        let one = default_middle(1);
        let d1 = gen_counterexample(Family::D1, &one, 0).unwrap();
        assert_eq!((d1.d.graph().order(), d1.d.v1().len()), (8, 3));
        assert_eq!((d1.names[d1.u].as_str(), d1.names[d1.v].as_str()), ("u", "v"));
        let d2 = gen_counterexample(Family::D2, &one, 0).unwrap();
        assert_eq!(d2.d.graph().order(), 7);
        let (core, _) = d2.d.semicomplete_part();
        assert!(is_strong(&core));
        let (core1, _) = d1.d.semicomplete_part();
        assert!(!is_strong(&core1));
        assert_eq!(gen_counterexample(Family::D1, &default_middle(2), 1).unwrap().d.graph().order(), 9);
        let not_semicomplete = Digraph::new(2);
        assert_eq!(gen_counterexample(Family::D1, &not_semicomplete, 0).unwrap_err(), Error::NotSemicomplete);
    }

    #[test]
    fn random_path_avoids_end_sets_inside() {
        let g = Digraph::from_arcs(5, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 3), (0, 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let p = random_path(&g, &[0, 1], &[3], &mut rng).unwrap();
            let vs = crate::connectivity::path_vertices(&g, &p);
            assert!(vs[1..].iter().all(|&v| v != 0 && v != 1));
            assert_eq!(*vs.last().unwrap(), 3);
        }
        assert!(random_path(&g, &[3], &[0], &mut rng).is_none());
    }
}
