//! Canonical keys for dual graphs up to isomorphism.
//!
//! Isomorphisms permute vertices and parallel edges but fix leg labels. The
//! key is the lexicographically smallest encoding
//! `[V, genera.., E, sorted edges.., n, leg vertices..]` over every vertex
//! ordering reachable by individualization-refinement from the partition by
//! `(genus, valence, loops, marks)`. Refinement is label-invariant, so the set
//! of candidate orderings is carried along by any isomorphism and the minimum
//! is a class invariant.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::StrataError;
use crate::graph::DualGraph;

/// Byte-string canonical encoding of a dual graph; total-order comparable,
/// serialized as lowercase hex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    /// Decodes the graph this key encodes (the canonical representative).
    pub fn decode(&self) -> Result<DualGraph, StrataError> {
        let bad = || StrataError::UnknownKey(self.to_hex());
        let mut bytes = self.0.iter().map(|&b| b as usize);
        let mut next = || bytes.next().ok_or_else(bad);
        let v = next()?;
        let genera = (0..v)
            .map(|_| next().map(|g| g as u32))
            .collect::<Result<Vec<_>, _>>()?;
        let e = next()?;
        let edges = (0..e)
            .map(|_| Ok((next()?, next()?)))
            .collect::<Result<Vec<_>, StrataError>>()?;
        let n = next()?;
        let legs = (0..n).map(|_| next()).collect::<Result<Vec<_>, _>>()?;
        if next().is_ok() {
            return Err(bad());
        }
        let graph = DualGraph::new(genera, edges, legs).map_err(|_| bad())?;
        if canonical_key(&graph) != *self {
            return Err(bad());
        }
        Ok(graph)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for CanonicalKey {
    type Err = StrataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.chars().any(|c| c.is_ascii_uppercase()) {
            return Err(StrataError::UnknownKey(s.to_string()));
        }
        hex::decode(s)
            .map(CanonicalKey)
            .map_err(|_| StrataError::UnknownKey(s.to_string()))
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A key together with the representative graph it encodes.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// Vertices in canonical order, edges sorted.
    pub graph: DualGraph,
}

pub fn canonical_key(graph: &DualGraph) -> CanonicalKey {
    Canonizer::new(graph).run().0
}

pub fn canonical_form(graph: &DualGraph) -> CanonicalForm {
    let (key, order) = Canonizer::new(graph).run();
    let mut perm = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let relabeled = graph.relabel(&perm).expect("canonical order is a permutation");
    let graph = DualGraph::from_raw(
        relabeled.genera().to_vec(),
        relabeled.sorted_edges(),
        relabeled.legs().to_vec(),
    );
    CanonicalForm { key, graph }
}

pub fn is_isomorphic(a: &DualGraph, b: &DualGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && a.mark_count() == b.mark_count()
        && canonical_key(a) == canonical_key(b)
}

/// Encodes `graph` with vertex `order[i]` renamed to `i`.
fn encode(graph: &DualGraph, order: &[usize]) -> Vec<u8> {
    let v = graph.vertex_count();
    let mut pos = vec![0; v];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let mut edges: Vec<(u8, u8)> = graph
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (pos[a] as u8, pos[b] as u8);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    let mut out = Vec::with_capacity(3 + v + 2 * edges.len() + graph.mark_count());
    out.push(v as u8);
    out.extend(order.iter().map(|&old| graph.genera()[old] as u8));
    out.push(edges.len() as u8);
    for (a, b) in edges {
        out.push(a);
        out.push(b);
    }
    out.push(graph.mark_count() as u8);
    out.extend(graph.legs().iter().map(|&at| pos[at] as u8));
    out
}

/// Ranks `signatures` densely in sorted order.
fn rank<T: Ord + Clone>(signatures: &[T]) -> (Vec<usize>, usize) {
    let mut distinct: Vec<T> = signatures.to_vec();
    distinct.sort();
    distinct.dedup();
    let colors = signatures
        .iter()
        .map(|s| distinct.binary_search(s).expect("present"))
        .collect();
    (colors, distinct.len())
}

struct Canonizer<'a> {
    graph: &'a DualGraph,
    /// Non-loop edge multiplicities as adjacency lists `(neighbor, count)`.
    neighbors: Vec<Vec<(usize, usize)>>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl<'a> Canonizer<'a> {
    fn new(graph: &'a DualGraph) -> Self {
        let v = graph.vertex_count();
        let mut counts = vec![vec![0usize; v]; v];
        for &(a, b) in graph.edges() {
            if a != b {
                counts[a][b] += 1;
                counts[b][a] += 1;
            }
        }
        let neighbors = counts
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(w, &c)| (w, c))
                    .collect()
            })
            .collect();
        Self {
            graph,
            neighbors,
            best: None,
        }
    }

    fn run(mut self) -> (CanonicalKey, Vec<usize>) {
        let graph = self.graph;
        let initial: Vec<_> = (0..graph.vertex_count())
            .map(|v| {
                (
                    graph.genera()[v],
                    graph.valence(v),
                    graph.loop_count(v),
                    graph.marks_at(v),
                )
            })
            .collect();
        let (colors, cells) = rank(&initial);
        let colors = self.refine(colors, cells);
        self.search(colors);
        let (bytes, order) = self.best.expect("at least one leaf");
        (CanonicalKey(bytes), order)
    }

    /// Colour refinement by neighbour colour multisets, to a fixed point.
    fn refine(&self, mut colors: Vec<usize>, mut cells: usize) -> Vec<usize> {
        loop {
            if cells == colors.len() {
                return colors;
            }
            let signatures: Vec<(usize, Vec<(usize, usize)>)> = self
                .neighbors
                .iter()
                .enumerate()
                .map(|(v, adjacent)| {
                    let mut around: Vec<(usize, usize)> = adjacent.iter().map(|&(w, c)| (colors[w], c)).collect();
                    around.sort_unstable();
                    (colors[v], around)
                })
                .collect();
            let (next, next_cells) = rank(&signatures);
            if next_cells == cells {
                return colors;
            }
            colors = next;
            cells = next_cells;
        }
    }

    fn search(&mut self, colors: Vec<usize>) {
        let v = colors.len();
        let mut sizes = vec![0usize; v];
        for &c in &colors {
            sizes[c] += 1;
        }
        let Some(target) = (0..v).find(|&c| sizes[c] > 1) else {
            let mut order = vec![0; v];
            for (vertex, &c) in colors.iter().enumerate() {
                order[c] = vertex;
            }
            let bytes = encode(self.graph, &order);
            if self.best.as_ref().is_none_or(|(best, _)| bytes < *best) {
                self.best = Some((bytes, order));
            }
            return;
        };
        for chosen in (0..v).filter(|&u| colors[u] == target) {
            let split: Vec<(usize, bool)> = colors.iter().enumerate().map(|(u, &c)| (c, u != chosen)).collect();
            let (individualized, cells) = rank(&split);
            let refined = self.refine(individualized, cells);
            self.search(refined);
        }
    }
}
