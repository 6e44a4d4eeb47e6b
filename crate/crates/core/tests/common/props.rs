//! Randomized property suites over enumerated strata. Each suite runs
//! [`CASES`] deterministic proptest cases and reports the first failure.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use strata_core::lattice::DivisorSet;
use strata_core::{
    canonical_key, divisors, intersection_components, is_isomorphic, is_tree_type, sigma, sigma_inverse,
    BoundaryComplex, CanonicalKey, DualGraph,
};

use super::{brute_isomorphic, brute_key, enumerator, mixed_pool, pool_of, sig};

pub const CASES: u32 = 1000;

fn check<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        max_shrink_iters: 256,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn permutation(len: usize, seed: u64) -> Vec<usize> {
    // Fisher-Yates driven by a splitmix sequence
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let mut perm: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Smooths `edges` (ids of `graph`) one at a time in the given order.
fn smooth_sequentially(graph: &DualGraph, edges: &[usize]) -> DualGraph {
    let mut current = graph.clone();
    let mut ids: Vec<usize> = edges.to_vec();
    for i in 0..ids.len() {
        let e = ids[i];
        current = current.smooth(e).unwrap();
        for later in ids.iter_mut().skip(i + 1) {
            if *later > e {
                *later -= 1;
            }
        }
    }
    current
}

fn multi_edge_pool() -> &'static [DualGraph] {
    static POOL: OnceLock<Vec<DualGraph>> = OnceLock::new();
    POOL.get_or_init(|| mixed_pool().iter().filter(|g| g.edge_count() >= 2).cloned().collect())
}

/// Smoothing two edges in either order, all at once, or a random subset in
/// a random order all agree up to isomorphism.
pub fn smoothing_commutes() -> Result<(), String> {
    let pool = multi_edge_pool();
    check((0..pool.len(), any::<u64>(), any::<u64>()), |(i, seed, mask)| {
        let graph = &pool[i];
        let order = permutation(graph.edge_count(), seed);
        let (e, f) = (order[0], order[1]);
        let f_after_e = f - usize::from(f > e);
        let e_after_f = e - usize::from(e > f);
        let ef = graph.smooth(e).unwrap().smooth(f_after_e).unwrap();
        let fe = graph.smooth(f).unwrap().smooth(e_after_f).unwrap();
        let both = graph.smooth_set(&[e, f]).unwrap();
        prop_assert!(brute_isomorphic(&ef, &fe), "{graph}: {ef} vs {fe}");
        prop_assert!(brute_isomorphic(&ef, &both));

        let subset: Vec<usize> = order.iter().copied().filter(|&x| mask >> (x % 64) & 1 == 1).collect();
        let sequential = smooth_sequentially(graph, &subset);
        let at_once = graph.smooth_set(&subset).unwrap();
        prop_assert!(brute_isomorphic(&sequential, &at_once), "{graph} subset {subset:?}");
        Ok(())
    })
}

/// Genus, legs and stability survive smoothing; the edge count drops by one.
pub fn smoothing_preserves_invariants() -> Result<(), String> {
    let pool = mixed_pool();
    check((0..pool.len(), any::<usize>()), |(i, pick)| {
        let graph = &pool[i];
        let e = pick % graph.edge_count();
        let smoothed = graph.smooth(e).unwrap();
        prop_assert_eq!(smoothed.total_genus(), graph.total_genus());
        prop_assert_eq!(smoothed.edge_count() + 1, graph.edge_count());
        prop_assert_eq!(smoothed.mark_count(), graph.mark_count());
        prop_assert!(smoothed.is_stable(), "{graph} smoothed along {e}");
        if !graph.is_loop(e) {
            let (a, b) = graph.edges()[e];
            let mut expected: Vec<u32> = graph.marks_at(a);
            expected.extend(graph.marks_at(b));
            expected.sort_unstable();
            prop_assert_eq!(smoothed.marks_at(a.min(b)), expected);
        }
        Ok(())
    })
}

fn arbitrary_graph() -> impl Strategy<Value = DualGraph> {
    (1usize..=7)
        .prop_flat_map(|v| {
            (
                proptest::collection::vec(0u32..3, v),
                proptest::collection::vec(any::<usize>(), v - 1),
                proptest::collection::vec((0..v, 0..v), 0..5),
                proptest::collection::vec(0..v, 0..5),
            )
        })
        .prop_map(|(genera, parents, extra, legs)| {
            let mut edges: Vec<(usize, usize)> =
                parents.iter().enumerate().map(|(i, p)| (p % (i + 1), i + 1)).collect();
            edges.extend(extra);
            DualGraph::new(genera, edges, legs).unwrap()
        })
}

/// Canonical-key equality agrees with exhaustive permutation search, both on
/// enumerated strata and on arbitrary decorated multigraphs with up to seven
/// vertices.
pub fn canonical_key_matches_brute_force() -> Result<(), String> {
    let pool = mixed_pool();
    check(
        (
            0..pool.len(),
            0..pool.len(),
            any::<u64>(),
            any::<u64>(),
            arbitrary_graph(),
            arbitrary_graph(),
            0u8..3,
        ),
        |(i, j, seed, edge_seed, wild, other, mode)| {
            let relabel = |graph: &DualGraph| {
                graph
                    .relabel(&permutation(graph.vertex_count(), seed))
                    .unwrap()
                    .reorder_edges(&permutation(graph.edge_count(), edge_seed))
                    .unwrap()
            };
            let (a, b) = match mode {
                0 => (pool[i].clone(), relabel(&pool[i])),
                1 => (pool[i].clone(), pool[j].clone()),
                _ => {
                    let b = if seed % 2 == 0 { relabel(&wild) } else { other.clone() };
                    (wild.clone(), b)
                }
            };
            let fast = canonical_key(&a) == canonical_key(&b);
            prop_assert_eq!(fast, brute_isomorphic(&a, &b), "{} vs {}", a, b);
            prop_assert_eq!(is_isomorphic(&a, &b), fast);
            if mode != 1 {
                // two independently drawn graphs
                let other_fast = canonical_key(&wild) == canonical_key(&other);
                prop_assert_eq!(other_fast, brute_isomorphic(&wild, &other));
            }
            Ok(())
        },
    )
}

/// Exhaustive subset search: some subset of edges smooths to `target`.
fn brute_degenerates(graph: &DualGraph, target: &DualGraph) -> bool {
    let want = brute_key(target);
    (0u64..1 << graph.edge_count()).any(|mask| {
        let subset: Vec<usize> = (0..graph.edge_count()).filter(|e| mask >> e & 1 == 1).collect();
        let smoothed = graph.smooth_set(&subset).unwrap();
        smoothed.vertex_count() == target.vertex_count() && brute_key(&smoothed) == want
    })
}

fn subset_of(count: usize, mask: u64) -> Vec<usize> {
    (0..count).filter(|e| mask >> e & 1 == 1).collect()
}

/// Reflexive, transitive and antisymmetric on isomorphism classes; agrees
/// with exhaustive subset search; for one-edge targets reduces to delta
/// support membership.
pub fn degeneration_partial_order() -> Result<(), String> {
    let pool = mixed_pool();
    check(
        (0..pool.len(), 0..pool.len(), any::<u64>(), any::<u64>(), any::<usize>()),
        |(i, j, first, second, pick)| {
            let g = &pool[i];
            prop_assert!(g.is_degeneration_of(g));
            let h = g.smooth_set(&subset_of(g.edge_count(), first)).unwrap();
            let k = h.smooth_set(&subset_of(h.edge_count(), second)).unwrap();
            prop_assert!(g.is_degeneration_of(&h));
            prop_assert!(h.is_degeneration_of(&k));
            prop_assert!(g.is_degeneration_of(&k));
            if h.is_degeneration_of(g) {
                prop_assert!(is_isomorphic(g, &h));
            }

            let other = &pool[j];
            let forward = g.is_degeneration_of(other);
            prop_assert_eq!(forward, brute_degenerates(g, other), "{} vs {}", g, other);
            if forward && other.is_degeneration_of(g) {
                prop_assert!(is_isomorphic(g, other));
            }

            let divisor_list: Vec<DualGraph> = divisors(g.signature()).graphs.into_values().collect();
            let divisor = &divisor_list[pick % divisor_list.len()];
            let support = g.delta_support().unwrap();
            prop_assert_eq!(g.is_degeneration_of(divisor), support.contains(&canonical_key(divisor)));
            Ok(())
        },
    )
}

fn complexes() -> &'static [BoundaryComplex] {
    static COMPLEXES: OnceLock<Vec<BoundaryComplex>> = OnceLock::new();
    COMPLEXES.get_or_init(|| {
        [(0, 5), (0, 6), (0, 7), (1, 3), (1, 4), (2, 2), (2, 3), (3, 1)]
            .iter()
            .map(|&(g, n)| BoundaryComplex::build(enumerator(), sig(g, n), None).unwrap())
            .collect()
    })
}

/// Every nonempty subset of a face is a face.
pub fn complex_downward_closed() -> Result<(), String> {
    let all = complexes();
    for complex in all {
        if !complex.is_downward_closed() {
            return Err(format!("{} is not downward closed", complex.signature));
        }
    }
    let faces: Vec<(usize, Vec<usize>)> = all
        .iter()
        .enumerate()
        .flat_map(|(c, complex)| complex.faces.iter().flatten().map(move |f| (c, f.clone())))
        .collect();
    check((0..faces.len(), any::<u64>()), |(i, mask)| {
        let (c, face) = &faces[i];
        let sub: Vec<usize> = face
            .iter()
            .enumerate()
            .filter(|&(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        prop_assume!(!sub.is_empty());
        prop_assert!(all[*c].contains_face(&sub), "{:?} of {:?}", sub, face);
        Ok(())
    })
}

struct UniquenessPool {
    graphs: Vec<DualGraph>,
    /// Number of graphs realizing each distinct delta set.
    realizations: BTreeMap<Vec<CanonicalKey>, usize>,
}

fn uniqueness_pool() -> &'static UniquenessPool {
    static POOL: OnceLock<UniquenessPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut graphs = pool_of(&[(0, 4), (0, 5), (0, 6)]);
        graphs.extend(
            pool_of(&[(1, 1), (1, 2), (1, 3), (1, 4)])
                .into_iter()
                .filter(is_tree_type),
        );
        let mut realizations = BTreeMap::new();
        for graph in &graphs {
            let keys = graph.delta_support().unwrap();
            if keys.len() == graph.edge_count() {
                *realizations.entry(keys).or_insert(0) += 1;
            }
        }
        UniquenessPool { graphs, realizations }
    })
}

/// In genus 0 and for tree-type genus 1: each stratum has pairwise distinct
/// delta values, and that divisor set meets in exactly this stratum.
pub fn uniqueness_lemmas() -> Result<(), String> {
    let pool = uniqueness_pool();
    check(0..pool.graphs.len(), |i| {
        let graph = &pool.graphs[i];
        let support = graph.delta_support().unwrap();
        prop_assert_eq!(support.len(), graph.edge_count(), "repeated delta in {}", graph);
        prop_assert_eq!(pool.realizations.get(&support).copied(), Some(1));
        let divisors = DivisorSet::new(graph.signature(), support).unwrap();
        let report = intersection_components(enumerator(), &divisors).unwrap();
        prop_assert_eq!(report.components.len(), 1);
        prop_assert!(is_isomorphic(&report.components[0], graph));
        Ok(())
    })
}

struct SigmaPool {
    /// Tree-type strata of (1, n), n = 1..=3, with their n.
    domain: Vec<(u32, DualGraph)>,
    /// Strata of (0, n + 2) with the last two marks together.
    codomain: Vec<(u32, DualGraph)>,
    tree_divisors: BTreeMap<u32, Vec<DualGraph>>,
}

fn sigma_pool() -> &'static SigmaPool {
    static POOL: OnceLock<SigmaPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut domain = Vec::new();
        let mut codomain = Vec::new();
        let mut tree_divisors = BTreeMap::new();
        for n in 1..=3u32 {
            domain.extend(pool_of(&[(1, n)]).into_iter().filter(is_tree_type).map(|g| (n, g)));
            codomain.extend(
                pool_of(&[(0, n + 2)])
                    .into_iter()
                    .filter(|g| g.legs()[n as usize] == g.legs()[n as usize + 1])
                    .map(|g| (n, g)),
            );
            tree_divisors.insert(
                n,
                divisors(sig(1, n)).graphs.into_values().filter(is_tree_type).collect(),
            );
        }
        SigmaPool {
            domain,
            codomain,
            tree_divisors,
        }
    })
}

fn components_as_keys(set: &DivisorSet) -> BTreeSet<CanonicalKey> {
    intersection_components(enumerator(), set)
        .unwrap()
        .components
        .iter()
        .map(canonical_key)
        .collect()
}

/// The genus-one reduction is a bijection onto strata with the two new
/// marks together, preserves degeneration both ways, and commutes with
/// intersecting tree-type divisors.
pub fn sigma_properties() -> Result<(), String> {
    let pool = sigma_pool();
    check(
        (
            0..pool.domain.len(),
            0..pool.domain.len(),
            0..pool.codomain.len(),
            any::<u64>(),
        ),
        |(i, j, c, mask)| {
            let (n, g) = &pool.domain[i];
            let image = sigma(g).unwrap();
            prop_assert_eq!(image.total_genus(), 0);
            prop_assert_eq!(image.edge_count(), g.edge_count());
            prop_assert!(image.is_stable());
            let last = image.legs().len();
            prop_assert_eq!(image.legs()[last - 2], image.legs()[last - 1]);
            prop_assert_eq!(last as u32, n + 2);
            prop_assert!(is_isomorphic(&sigma_inverse(&image).unwrap(), g));

            let (_, h) = &pool.codomain[c];
            let back = sigma_inverse(h).unwrap();
            prop_assert!(is_tree_type(&back) && back.total_genus() == 1 && back.is_stable());
            prop_assert!(is_isomorphic(&sigma(&back).unwrap(), h));

            let (m, other) = &pool.domain[j];
            if m == n {
                prop_assert_eq!(
                    g.is_degeneration_of(other),
                    image.is_degeneration_of(&sigma(other).unwrap()),
                    "{} vs {}",
                    g,
                    other
                );
            }

            let tree = &pool.tree_divisors[n];
            let chosen: Vec<DualGraph> = tree
                .iter()
                .enumerate()
                .filter(|&(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, d)| d.clone())
                .take(sig(1, *n).dim())
                .collect();
            prop_assume!(!chosen.is_empty());
            let upstairs = DivisorSet::from_graphs(&chosen).unwrap();
            let downstairs =
                DivisorSet::from_graphs(&chosen.iter().map(|d| sigma(d).unwrap()).collect::<Vec<_>>()).unwrap();
            let mapped: BTreeSet<CanonicalKey> = intersection_components(enumerator(), &upstairs)
                .unwrap()
                .components
                .iter()
                .map(|comp| canonical_key(&sigma(comp).unwrap()))
                .collect();
            // more than dim M(0, n+2) distinct divisors never meet downstairs
            let expected = if downstairs.len() > sig(0, n + 2).dim() {
                BTreeSet::new()
            } else {
                components_as_keys(&downstairs)
            };
            prop_assert_eq!(mapped, expected);
            Ok(())
        },
    )
}
