//! Intersections of boundary divisors and the genus-one reduction.
//!
//! The divisors `D_1, ..., D_k` (distinct) meet along the union of the
//! codimension-`k` strata whose graphs `G` have `{delta_e(G)} = {D_1, ..., D_k}`
//! with all `k` values distinct. Normal crossings of the boundary is taken as
//! given; it is what makes these strata exactly the components.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_key, CanonicalKey};
use crate::enumerate::Enumerator;
use crate::error::{Result, StrataError};
use crate::graph::{DualGraph, GnSignature};

pub const IXREPORT_SCHEMA: &str = "ixreport/1";

/// A nonempty set of distinct boundary divisors of one moduli space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSet {
    signature: GnSignature,
    keys: BTreeSet<CanonicalKey>,
}

impl DivisorSet {
    /// Every key must decode to a stable one-edge graph of `signature`.
    pub fn new(signature: GnSignature, keys: impl IntoIterator<Item = CanonicalKey>) -> Result<Self> {
        let keys: BTreeSet<CanonicalKey> = keys.into_iter().collect();
        if keys.is_empty() {
            return Err(StrataError::EmptyDivisorSet);
        }
        for key in &keys {
            check_divisor(signature, &key.decode()?)?;
        }
        Ok(Self { signature, keys })
    }

    /// Infers the signature from the graphs, which must agree on it.
    pub fn from_graphs(graphs: &[DualGraph]) -> Result<Self> {
        let first = graphs.first().ok_or(StrataError::EmptyDivisorSet)?;
        let signature = GnSignature::new(first.total_genus(), first.mark_count() as u32)?;
        let mut keys = BTreeSet::new();
        for graph in graphs {
            if graph.signature() != signature {
                return Err(StrataError::MixedSignatures {
                    first: signature,
                    second: graph.signature(),
                });
            }
            check_divisor(signature, graph)?;
            keys.insert(canonical_key(graph));
        }
        Ok(Self { signature, keys })
    }

    pub fn signature(&self) -> GnSignature {
        self.signature
    }

    pub fn keys(&self) -> &BTreeSet<CanonicalKey> {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.keys.contains(key)
    }

    /// Canonical representatives, in key order.
    pub fn graphs(&self) -> Vec<DualGraph> {
        self.keys
            .iter()
            .map(|k| k.decode().expect("validated on construction"))
            .collect()
    }

    /// The sub-collection of the given keys; they must all be members.
    pub fn subset<'a>(&self, keys: impl IntoIterator<Item = &'a CanonicalKey>) -> Result<Self> {
        let keys: BTreeSet<CanonicalKey> = keys.into_iter().cloned().collect();
        if keys.is_empty() {
            return Err(StrataError::EmptyDivisorSet);
        }
        if let Some(missing) = keys.iter().find(|k| !self.keys.contains(k)) {
            return Err(StrataError::UnknownKey(missing.to_hex()));
        }
        Ok(Self {
            signature: self.signature,
            keys,
        })
    }
}

fn check_divisor(signature: GnSignature, graph: &DualGraph) -> Result<()> {
    let reason = if graph.signature() != signature {
        Some(format!("graph has signature {}", graph.signature()))
    } else if graph.edge_count() != 1 {
        Some(format!("graph has {} edges", graph.edge_count()))
    } else if !graph.is_stable() {
        Some("graph is unstable".to_string())
    } else {
        None
    };
    match reason {
        Some(reason) => Err(StrataError::NotADivisor { sig: signature, reason }),
        None => Ok(()),
    }
}

/// The codimension-`k` strata making up `D_1 ∩ ... ∩ D_k`.
#[derive(Debug, Clone)]
pub struct IntersectionReport {
    pub input: DivisorSet,
    /// Canonical representatives sorted by key.
    pub components: Vec<DualGraph>,
    pub nonempty: bool,
}

#[derive(Serialize)]
struct ComponentJson<'a> {
    key: CanonicalKey,
    graph: &'a DualGraph,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    schema: &'static str,
    g: u32,
    n: u32,
    input: Vec<&'a CanonicalKey>,
    input_graphs: Vec<DualGraph>,
    nonempty: bool,
    components: Vec<ComponentJson<'a>>,
}

impl IntersectionReport {
    pub fn to_json(&self) -> String {
        let doc = ReportJson {
            schema: IXREPORT_SCHEMA,
            g: self.input.signature.g,
            n: self.input.signature.n,
            input: self.input.keys.iter().collect(),
            input_graphs: self.input.graphs(),
            nonempty: self.nonempty,
            components: self
                .components
                .iter()
                .map(|graph| ComponentJson {
                    key: canonical_key(graph),
                    graph,
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }
}

/// No loops and no cycles: every edge separates.
pub fn is_tree_type(graph: &DualGraph) -> bool {
    graph.edge_count() + 1 == graph.vertex_count()
}

/// True iff the delta values of `graph` are pairwise distinct and form
/// exactly `target`.
fn deltas_match(graph: &DualGraph, target: &BTreeSet<CanonicalKey>) -> bool {
    let mut seen = BTreeSet::new();
    let mut chosen = vec![true; graph.edge_count()];
    for e in 0..graph.edge_count() {
        chosen[e] = false;
        let key = canonical_key(&graph.smooth_mask(&chosen));
        chosen[e] = true;
        if !target.contains(&key) || !seen.insert(key) {
            return false;
        }
    }
    seen.len() == target.len()
}

fn check_size(divisors: &DivisorSet) -> Result<usize> {
    let sig = divisors.signature;
    let k = divisors.len();
    if k == 0 {
        return Err(StrataError::EmptyDivisorSet);
    }
    if k > sig.dim() {
        return Err(StrataError::EdgeCountOutOfRange { sig, k, max: sig.dim() });
    }
    Ok(k)
}

pub fn intersection_components(enumerator: &Enumerator, divisors: &DivisorSet) -> Result<IntersectionReport> {
    let k = check_size(divisors)?;
    let level = enumerator.strata(divisors.signature, k)?;
    let mut components: Vec<(CanonicalKey, DualGraph)> = level
        .graphs
        .par_iter()
        .filter(|(_, graph)| deltas_match(graph, &divisors.keys))
        .map(|(key, graph)| (key.clone(), graph.clone()))
        .collect();
    components.sort_by(|a, b| a.0.cmp(&b.0));
    let components: Vec<DualGraph> = components.into_iter().map(|(_, g)| g).collect();
    Ok(IntersectionReport {
        input: divisors.clone(),
        nonempty: !components.is_empty(),
        components,
    })
}

pub fn intersect_nonempty(enumerator: &Enumerator, divisors: &DivisorSet) -> Result<bool> {
    Ok(intersection_components(enumerator, divisors)?.nonempty)
}

/// Searches every stratum of every codimension `>= |S|` for one whose
/// divisor support contains `S`. Agrees with [`intersect_nonempty`]: extra
/// edges can always be smoothed away one at a time.
pub fn intersect_nonempty_by_superset(enumerator: &Enumerator, divisors: &DivisorSet) -> Result<bool> {
    let k = check_size(divisors)?;
    let sig = divisors.signature;
    for level in k..=sig.dim() {
        let set = enumerator.strata(sig, level)?;
        let hit = set.graphs.par_iter().any(|(_, graph)| {
            let support: BTreeSet<CanonicalKey> = graph.delta_keys().into_iter().collect();
            divisors.keys.is_subset(&support)
        });
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

fn genus_one_vertex(graph: &DualGraph) -> Result<usize> {
    if graph.total_genus() != 1 || !is_tree_type(graph) {
        return Err(StrataError::OutOfDomain(
            "sigma needs a tree-type graph of total genus 1".into(),
        ));
    }
    Ok(graph
        .genera()
        .iter()
        .position(|&g| g == 1)
        .expect("a genus-1 tree has a genus-1 vertex"))
}

/// Genus-one reduction: turn the genus-1 vertex of a tree-type graph in
/// `(1, n)` into a genus-0 vertex carrying new marks `n + 1` and `n + 2`.
pub fn sigma(graph: &DualGraph) -> Result<DualGraph> {
    let v = genus_one_vertex(graph)?;
    let mut genera = graph.genera().to_vec();
    genera[v] = 0;
    let mut legs = graph.legs().to_vec();
    legs.extend([v, v]);
    DualGraph::new(genera, graph.edges().to_vec(), legs)
}

/// Inverse of [`sigma`]: the vertex carrying the last two marks of a genus-0
/// graph loses them and becomes the genus-1 vertex.
pub fn sigma_inverse(graph: &DualGraph) -> Result<DualGraph> {
    let n = graph.mark_count();
    if graph.total_genus() != 0 || n < 2 {
        return Err(StrataError::OutOfDomain(
            "sigma inverse needs a genus-0 graph with at least two marks".into(),
        ));
    }
    let (a, b) = (graph.legs()[n - 2], graph.legs()[n - 1]);
    if a != b {
        return Err(StrataError::OutOfDomain(format!(
            "marks {} and {} lie on different vertices",
            n - 1,
            n
        )));
    }
    let mut genera = graph.genera().to_vec();
    genera[a] = 1;
    DualGraph::new(genera, graph.edges().to_vec(), graph.legs()[..n - 2].to_vec())
}
