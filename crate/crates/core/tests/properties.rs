use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use splitdecomp::branchings::{good_pair_from_sad, good_uu_pair_split, verify_good_pair};
use splitdecomp::connectivity::{cut_arcs, is_k_arc_strong, is_strong};
use splitdecomp::nice::nice_decompose;
use splitdecomp::split_sad::decompose_split;
use splitdecomp::splitting::{lift_all, split_paths};
use splitdecomp::testkit::*;
use splitdecomp::verify::verify_decomposition;
use splitdecomp::{ArcId, Digraph, SplitDigraph, StrongArcDecomposition};

fn instance(seed: u64, n1: usize, n2: usize, extra: &[Enforce]) -> Option<SplitDigraph> {
    let mut spec = GenSpec::new(n1, n2, seed);
    spec.max_attempts = 400;
    let mut clauses = vec![Enforce::TwoArcStrong, Enforce::V1Degree3];
    clauses.extend_from_slice(extra);
    gen_random(&spec.enforce(&clauses)).ok()
}

fn small_digraph() -> impl Strategy<Value = Digraph> {
    (2usize..6).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |arcs| Digraph::from_arcs(n, &arcs).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_verifies(seed in any::<u64>(), n1 in 1usize..=4, n2 in 4usize..=7) {
        if let Some(d) = instance(seed, n1, n2, &[]) {
            let sad = decompose_split(&d).unwrap();
            prop_assert!(verify_decomposition(d.graph(), &sad).is_ok());
            let m = d.graph().arc_count();
            prop_assert_eq!(sad.a1.len() + sad.a2.len(), m);
        }
    }

    #[test]
    fn verifier_rejects_moved_arc(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        if let Some(d) = instance(seed, 2, 5, &[]) {
            let sad = decompose_split(&d).unwrap();
            let mut a1 = sad.a1.clone();
            let moved = a1.remove(pick.index(a1.len()));
            // dropping an arc breaks the partition
            let dropped = StrongArcDecomposition::new(a1.clone(), sad.a2.clone());
            prop_assert!(verify_decomposition(d.graph(), &dropped).is_err());
            // listing it twice does too
            let twice = StrongArcDecomposition::new([a1.clone(), vec![moved]].concat(), [sad.a2.clone(), vec![moved]].concat());
            prop_assert!(verify_decomposition(d.graph(), &twice).is_err());
        }
    }

    #[test]
    fn cut_arcs_match_brute_force(g in small_digraph()) {
        prop_assert_eq!(is_strong(&g), brute_is_strong(&g));
        if is_strong(&g) {
            prop_assert_eq!(cut_arcs(&g).unwrap(), brute_cut_arcs(&g));
        }
        for k in 1..=2 {
            prop_assert_eq!(is_k_arc_strong(&g, k), brute_is_k_arc_strong(&g, k));
        }
    }

    #[test]
    fn reversal_is_an_involution(g in small_digraph()) {
        let r = g.reversed();
        prop_assert_eq!(r.arc_count(), g.arc_count());
        for a in g.arc_ids() {
            let (u, v) = g.endpoints(a);
            prop_assert_eq!(r.endpoints(a), (v, u));
        }
        prop_assert_eq!(r.reversed().arc_pairs(), g.arc_pairs());
        prop_assert_eq!(is_strong(&r), is_strong(&g));
    }

    #[test]
    fn nice_decomposition_is_unique(seed in any::<u64>(), n in 4usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = gen_semicomplete(n, 0.2, &mut rng);
        prop_assume!(is_strong(&s) && !is_k_arc_strong(&s, 2));
        let nd = nice_decompose(&s).unwrap();
        prop_assert!(nd.verify(&s).is_ok());
        prop_assert_eq!(oracle_nice_decompositions(&s), vec![nd.blocks.clone()]);
        let chain: Vec<(usize, usize)> = nd.backward_arcs.iter().map(|&a| {
            let (t, h) = s.endpoints(a);
            (nd.index[t], nd.index[h])
        }).collect();
        prop_assert!(natural_chain_holds(nd.len(), &chain));
    }

    #[test]
    fn split_then_lift_is_identity(seed in any::<u64>()) {
        if let Some(d) = instance(seed, 3, 5, &[]) {
            let g = d.graph();
            let v1 = d.v1();
            let mut paths: Vec<Vec<ArcId>> = Vec::new();
            let mut used = vec![false; g.arc_count()];
            for &t in &v1 {
                let a = g.in_arcs(t).iter().copied().find(|a| !used[a.0]);
                let b = g.out_arcs(t).iter().copied().find(|&b| !used[b.0] && a.is_some_and(|a| g.arc(a).tail != g.arc(b).head));
                if let (Some(a), Some(b)) = (a, b) {
                    used[a.0] = true;
                    used[b.0] = true;
                    paths.push(vec![a, b]);
                }
            }
            let sr = split_paths(&d, &paths).unwrap();
            let all: Vec<ArcId> = sr.core.arc_ids().collect();
            let (c1, c2) = lift_all(&sr, &all, &[]).unwrap();
            prop_assert!(c2.is_empty());
            let inside = g.arcs().filter(|(_, a)| d.is_v2(a.tail) && d.is_v2(a.head)).count();
            prop_assert_eq!(c1.len(), inside + 2 * paths.len());
            for p in &paths {
                prop_assert!(p.iter().all(|a| c1.contains(a)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn good_uu_pairs_verify(seed in any::<u64>(), n1 in 1usize..=3, n2 in 4usize..=6) {
        if let Some(d) = instance(seed, n1, n2, &[Enforce::SemicompleteSplit]) {
            for u in d.v2() {
                let gp = good_uu_pair_split(&d, u).unwrap();
                prop_assert!(verify_good_pair(d.graph(), &gp).is_ok());
                prop_assert_eq!(gp.out.root, u);
                prop_assert_eq!(gp.in_.root, u);
            }
        }
    }

    #[test]
    fn every_root_pair_from_three_arc_strong(seed in any::<u64>()) {
        if let Some(d) = instance(seed, 2, 5, &[Enforce::ThreeArcStrong]) {
            let g = d.graph();
            let sad = decompose_split(&d).unwrap();
            for u in g.vertices() {
                for v in g.vertices() {
                    let gp = good_pair_from_sad(g, &sad, u, v).unwrap();
                    prop_assert!(verify_good_pair(g, &gp).is_ok());
                }
            }
        }
    }
}
