//! Enumeration of stable dual graphs by codimension.
//!
//! Level `k` (graphs with `k` edges) is generated from level `k - 1` by the
//! two inverse smoothings: attach a loop to a vertex of positive genus while
//! lowering its genus, or split a vertex across a new edge, distributing its
//! genus and incident half-edges over the two halves. Every `k`-edge stable
//! graph smooths to a stable `(k-1)`-edge graph along any edge, so starting
//! from the smooth graph this reaches every stratum. Children are deduplicated
//! by canonical key.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalKey};
use crate::error::{Result, StrataError};
use crate::graph::{DualGraph, GnSignature};

/// Bump whenever generation or key encoding changes; cached levels written by
/// another version are regenerated.
pub const GENERATOR_VERSION: &str = "inverse-smoothing/1";
pub const STRATUMSET_SCHEMA: &str = "stratumset/1";
pub const DEFAULT_MAX_GRAPHS: usize = 1_000_000;

/// One representative per isomorphism class of stable graphs with fixed
/// `(g, n)` and edge count, keyed and ordered by canonical key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumSet {
    pub signature: GnSignature,
    pub edge_count: usize,
    pub graphs: BTreeMap<CanonicalKey, DualGraph>,
    pub generator_version: String,
}

impl StratumSet {
    fn new(signature: GnSignature, edge_count: usize) -> Self {
        Self {
            signature,
            edge_count,
            graphs: BTreeMap::new(),
            generator_version: GENERATOR_VERSION.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.graphs.contains_key(key)
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&DualGraph> {
        self.graphs.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.graphs.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalKey, &DualGraph)> {
        self.graphs.iter()
    }

    fn insert(&mut self, graph: &DualGraph) {
        let form = canonical_form(graph);
        self.graphs.entry(form.key).or_insert(form.graph);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StratumFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StratumFile = serde_json::from_str(text)?;
        file.into_set()
    }
}

#[derive(Serialize, Deserialize)]
struct StratumFile {
    schema: String,
    generator_version: String,
    g: u32,
    n: u32,
    k: usize,
    graphs: Vec<DualGraph>,
}

impl From<&StratumSet> for StratumFile {
    fn from(set: &StratumSet) -> Self {
        Self {
            schema: STRATUMSET_SCHEMA.to_string(),
            generator_version: set.generator_version.clone(),
            g: set.signature.g,
            n: set.signature.n,
            k: set.edge_count,
            graphs: set.graphs.values().cloned().collect(),
        }
    }
}

impl StratumFile {
    fn into_set(self) -> Result<StratumSet> {
        let invalid = |message: String| StrataError::Cache {
            path: String::new(),
            message,
        };
        if self.schema != STRATUMSET_SCHEMA {
            return Err(invalid(format!("unsupported schema {:?}", self.schema)));
        }
        let signature = GnSignature::new(self.g, self.n)?;
        let mut set = StratumSet::new(signature, self.k);
        set.generator_version = self.generator_version;
        for graph in &self.graphs {
            if graph.signature() != signature || graph.edge_count() != self.k || !graph.is_stable() {
                return Err(invalid(format!(
                    "graph {graph} does not belong to {signature} k={}",
                    self.k
                )));
            }
            set.insert(graph);
        }
        if set.len() != self.graphs.len() {
            return Err(invalid("duplicate isomorphism classes".into()));
        }
        Ok(set)
    }
}

/// The boundary divisors of `sig`, built directly: the irreducible divisor
/// (one vertex of genus `g - 1` with a loop) when `g >= 1`, and every stable
/// split `(a, A) -- (g - a, A^c)`.
pub fn divisors(sig: GnSignature) -> StratumSet {
    let mut set = StratumSet::new(sig, 1);
    if sig.dim() == 0 {
        return set;
    }
    let n = sig.n as usize;
    if sig.g >= 1 {
        set.insert(&DualGraph::from_raw(vec![sig.g - 1], vec![(0, 0)], vec![0; n]));
    }
    for a in 0..=sig.g {
        for mask in 0u64..(1 << n) {
            let on_first = mask.count_ones() as usize;
            let side_ok = |genus: u32, legs: usize| genus > 0 || legs >= 2;
            if !side_ok(a, on_first) || !side_ok(sig.g - a, n - on_first) {
                continue;
            }
            let legs = (0..n).map(|i| usize::from(mask >> i & 1 == 0)).collect();
            set.insert(&DualGraph::from_raw(vec![a, sig.g - a], vec![(0, 1)], legs));
        }
    }
    set
}

/// Every stable graph obtained from `parent` by one inverse smoothing.
pub fn inverse_smoothings(parent: &DualGraph) -> Vec<DualGraph> {
    let mut children = Vec::new();
    let genera = parent.genera();
    for v in 0..parent.vertex_count() {
        if genera[v] >= 1 {
            let mut new_genera = genera.to_vec();
            new_genera[v] -= 1;
            let mut edges = parent.edges().to_vec();
            edges.push((v, v));
            children.push(DualGraph::from_raw(new_genera, edges, parent.legs().to_vec()));
        }
        split_vertex(parent, v, &mut children);
    }
    children.retain(DualGraph::is_stable);
    children
}

#[derive(Clone, Copy)]
enum HalfEdge {
    Leg(usize),
    /// Non-loop edge end at the split vertex.
    End(usize),
    /// One of the two ends of a loop.
    LoopEnd(usize, u8),
}

fn split_vertex(parent: &DualGraph, v: usize, out: &mut Vec<DualGraph>) {
    let mut halves = Vec::new();
    for (mark, &at) in parent.legs().iter().enumerate() {
        if at == v {
            halves.push(HalfEdge::Leg(mark));
        }
    }
    for (e, &(a, b)) in parent.edges().iter().enumerate() {
        if a == v && b == v {
            halves.push(HalfEdge::LoopEnd(e, 0));
            halves.push(HalfEdge::LoopEnd(e, 1));
        } else if a == v || b == v {
            halves.push(HalfEdge::End(e));
        }
    }
    let w = parent.vertex_count();
    let genus = parent.genera()[v];
    for kept in 0..=genus {
        for mask in 0u64..(1 << halves.len()) {
            let moved = |i: usize| mask >> i & 1 == 1;
            let mut genera = parent.genera().to_vec();
            genera[v] = kept;
            genera.push(genus - kept);
            let mut edges = parent.edges().to_vec();
            let mut legs = parent.legs().to_vec();
            let mut loop_first_end_moved = false;
            for (i, half) in halves.iter().enumerate() {
                match *half {
                    HalfEdge::Leg(mark) if moved(i) => legs[mark] = w,
                    HalfEdge::End(e) if moved(i) => {
                        let (a, b) = edges[e];
                        let other = if a == v { b } else { a };
                        edges[e] = (other.min(w), other.max(w));
                    }
                    HalfEdge::LoopEnd(_, 0) => loop_first_end_moved = moved(i),
                    HalfEdge::LoopEnd(e, _) => {
                        edges[e] = match (loop_first_end_moved, moved(i)) {
                            (false, false) => (v, v),
                            (true, true) => (w, w),
                            _ => (v, w),
                        };
                    }
                    _ => {}
                }
            }
            edges.push((v, w));
            out.push(DualGraph::from_raw(genera, edges, legs));
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnumerationConfig {
    /// Hard cap on the size of any single level.
    pub max_graphs: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self {
            max_graphs: DEFAULT_MAX_GRAPHS,
            cache_dir: None,
        }
    }
}

/// Level generator with in-memory memoization and an optional disk cache at
/// `<cache>/g<g>n<n>/k<k>.json`.
#[derive(Debug, Default)]
pub struct Enumerator {
    config: EnumerationConfig,
    memo: Mutex<HashMap<(GnSignature, usize), Arc<StratumSet>>>,
}

impl Enumerator {
    pub fn new(config: EnumerationConfig) -> Self {
        Self {
            config,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &EnumerationConfig {
        &self.config
    }

    /// All stable graphs of `sig` with exactly `k` edges, `1 <= k <= dim`.
    pub fn strata(&self, sig: GnSignature, k: usize) -> Result<Arc<StratumSet>> {
        if k == 0 || k > sig.dim() {
            return Err(StrataError::EdgeCountOutOfRange { sig, k, max: sig.dim() });
        }
        self.level(sig, k)
    }

    pub fn count_strata(&self, sig: GnSignature, k: usize) -> Result<usize> {
        Ok(self.strata(sig, k)?.len())
    }

    /// Levels `1..=dim` in order.
    pub fn all_strata(&self, sig: GnSignature) -> Result<Vec<Arc<StratumSet>>> {
        (1..=sig.dim()).map(|k| self.strata(sig, k)).collect()
    }

    fn level(&self, sig: GnSignature, k: usize) -> Result<Arc<StratumSet>> {
        if let Some(found) = self.memo.lock().expect("memo lock").get(&(sig, k)) {
            return Ok(Arc::clone(found));
        }
        let set = match self.read_cache(sig, k) {
            Some(set) => set,
            None => {
                let set = if k == 0 {
                    let mut smooth = StratumSet::new(sig, 0);
                    smooth.insert(&sig.smooth_graph());
                    smooth
                } else {
                    let parents = self.level(sig, k - 1)?;
                    self.extend(&parents)?
                };
                self.write_cache(&set)?;
                set
            }
        };
        let set = Arc::new(set);
        self.memo.lock().expect("memo lock").insert((sig, k), Arc::clone(&set));
        Ok(set)
    }

    fn extend(&self, parents: &StratumSet) -> Result<StratumSet> {
        let sig = parents.signature;
        let k = parents.edge_count + 1;
        let batches: Vec<Vec<(CanonicalKey, DualGraph)>> = parents
            .graphs
            .par_iter()
            .map(|(_, parent)| {
                let mut seen = BTreeMap::new();
                for child in inverse_smoothings(parent) {
                    let form = canonical_form(&child);
                    seen.entry(form.key).or_insert(form.graph);
                }
                seen.into_iter().collect()
            })
            .collect();
        let mut set = StratumSet::new(sig, k);
        for (key, graph) in batches.into_iter().flatten() {
            set.graphs.entry(key).or_insert(graph);
            if set.graphs.len() > self.config.max_graphs {
                return Err(StrataError::BudgetExceeded {
                    sig,
                    k,
                    limit: self.config.max_graphs,
                });
            }
        }
        Ok(set)
    }

    fn cache_path(&self, sig: GnSignature, k: usize) -> Option<PathBuf> {
        self.config.cache_dir.as_ref().map(|dir| cache_file(dir, sig, k))
    }

    fn read_cache(&self, sig: GnSignature, k: usize) -> Option<StratumSet> {
        let path = self.cache_path(sig, k)?;
        let text = fs::read_to_string(&path).ok()?;
        // unreadable, stale or foreign files are regenerated
        let set = StratumSet::from_json(&text).ok()?;
        let fresh = set.generator_version == GENERATOR_VERSION
            && set.signature == sig
            && set.edge_count == k
            && set.len() <= self.config.max_graphs;
        fresh.then_some(set)
    }

    fn write_cache(&self, set: &StratumSet) -> Result<()> {
        let Some(path) = self.cache_path(set.signature, set.edge_count) else {
            return Ok(());
        };
        let io_error = |e: std::io::Error| StrataError::Cache {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io_error)?;
        }
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, set.to_json()).map_err(io_error)?;
        fs::rename(&tmp, &path).map_err(io_error)?;
        Ok(())
    }
}

pub fn cache_file(dir: &Path, sig: GnSignature, k: usize) -> PathBuf {
    dir.join(format!("g{}n{}", sig.g, sig.n)).join(format!("k{k}.json"))
}

/// [`Enumerator::strata`] with the default in-memory configuration.
pub fn strata(sig: GnSignature, k: usize) -> Result<Arc<StratumSet>> {
    Enumerator::default().strata(sig, k)
}

pub fn count_strata(sig: GnSignature, k: usize) -> Result<usize> {
    Ok(strata(sig, k)?.len())
}
