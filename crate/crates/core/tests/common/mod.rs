//! Test-only oracles, independent of the library's canonicalization and
//! generation code paths.
#![allow(dead_code)]

pub mod props;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use strata_core::{DualGraph, Enumerator, GnSignature};

/// Relabeled graph as plain vectors: `(genera, sorted edges, leg vertices)`.
pub type BruteKey = (Vec<u32>, Vec<(usize, usize)>, Vec<usize>);

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn permutation_table(n: usize) -> &'static [Vec<usize>] {
    static TABLES: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
    &TABLES.get_or_init(|| (0..=8).map(permutations).collect())[n]
}

/// Minimum relabeled encoding over all `V!` vertex bijections.
pub fn brute_key_raw(genera: &[u32], edges: &[(usize, usize)], legs: &[usize]) -> BruteKey {
    let mut best: Option<BruteKey> = None;
    for perm in permutation_table(genera.len()) {
        let mut relabeled_genera = vec![0; genera.len()];
        for (old, &new) in perm.iter().enumerate() {
            relabeled_genera[new] = genera[old];
        }
        let mut relabeled_edges: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
            .collect();
        relabeled_edges.sort_unstable();
        let relabeled_legs: Vec<usize> = legs.iter().map(|&v| perm[v]).collect();
        let candidate = (relabeled_genera, relabeled_edges, relabeled_legs);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    best.expect("at least one vertex")
}

pub fn brute_key(graph: &DualGraph) -> BruteKey {
    brute_key_raw(graph.genera(), graph.edges(), graph.legs())
}

pub fn brute_isomorphic(a: &DualGraph, b: &DualGraph) -> bool {
    a.vertex_count() == b.vertex_count() && brute_key(a) == brute_key(b)
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn edge_multisets(v: usize, k: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    fn go(
        pairs: &[(usize, usize)],
        start: usize,
        k: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pairs.len() {
            cur.push(pairs[i]);
            go(pairs, i, k, cur, out);
            cur.pop();
        }
    }
    go(&pairs, 0, k, &mut Vec::new(), &mut out);
    out
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Every connected stable multigraph of `(g, n)` with `k` edges on at most
/// `k + 1` vertices, with every genus assignment and leg map, deduplicated
/// by exhaustive permutation search.
pub fn brute_force_strata(g: u32, n: usize, k: usize) -> BTreeSet<BruteKey> {
    let mut classes = BTreeSet::new();
    for v in 1..=k + 1 {
        // sum of vertex genera = g - k + v - 1
        let Some(decorations) = (g as i64 - k as i64 + v as i64 - 1).try_into().ok() else {
            continue;
        };
        let genus_choices = compositions(decorations, v);
        for edges in edge_multisets(v, k) {
            if !connected(v, &edges) {
                continue;
            }
            let mut ends = vec![0usize; v];
            for &(a, b) in &edges {
                ends[a] += 1;
                ends[b] += 1;
            }
            for genera in &genus_choices {
                let need: Vec<usize> = (0..v)
                    .map(|x| match genera[x] {
                        0 => 3usize.saturating_sub(ends[x]),
                        1 => 1usize.saturating_sub(ends[x]),
                        _ => 0,
                    })
                    .collect();
                if need.iter().sum::<usize>() > n {
                    continue;
                }
                let mut legs = vec![0usize; n];
                loop {
                    let mut count = vec![0usize; v];
                    for &at in &legs {
                        count[at] += 1;
                    }
                    if (0..v).all(|x| count[x] >= need[x]) {
                        classes.insert(brute_key_raw(genera, &edges, &legs));
                    }
                    // next leg map in base v
                    let mut i = 0;
                    while i < n && legs[i] + 1 == v {
                        legs[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                    legs[i] += 1;
                }
            }
        }
    }
    classes
}

pub fn sig(g: u32, n: u32) -> GnSignature {
    GnSignature::new(g, n).unwrap()
}

pub fn graph(vertices: &[(u32, &[u32])], edges: &[(usize, usize)]) -> DualGraph {
    DualGraph::from_vertices(vertices, edges).unwrap()
}

pub fn enumerator() -> &'static Enumerator {
    static ENUMERATOR: OnceLock<Enumerator> = OnceLock::new();
    ENUMERATOR.get_or_init(Enumerator::default)
}

/// Every enumerated stratum (at least one edge) of the given signatures.
pub fn pool_of(signatures: &[(u32, u32)]) -> Vec<DualGraph> {
    let mut pool = Vec::new();
    for &(g, n) in signatures {
        for level in enumerator().all_strata(sig(g, n)).unwrap() {
            pool.extend(level.graphs.values().cloned());
        }
    }
    pool
}

/// Mixed pool over small spaces of genus 0 through 3.
pub fn mixed_pool() -> &'static [DualGraph] {
    static POOL: OnceLock<Vec<DualGraph>> = OnceLock::new();
    POOL.get_or_init(|| pool_of(&[(0, 5), (0, 6), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3), (3, 0), (3, 1)]))
}
