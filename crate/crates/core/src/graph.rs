//! Dual graphs of stable pointed curves and the elementary calculus on them.
//!
//! A [`DualGraph`] has one vertex per irreducible component (decorated with
//! its geometric genus), one edge per node and one leg per marked point.
//! Edges are identified by their position in [`DualGraph::edges`]; smoothing
//! operations always refer to edge ids of the graph they are called on.

use std::fmt;

use crate::canon::{canonical_key, CanonicalKey};
use crate::error::{Result, StrataError};

/// Largest vertex count, genus, edge count or mark count a graph may carry.
/// Canonical keys store every such quantity in one byte.
pub const MAX_ENCODED: usize = u8::MAX as usize;

/// The pair `(g, n)` naming the moduli space of genus-`g` curves with `n`
/// marked points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GnSignature {
    pub g: u32,
    pub n: u32,
}

impl GnSignature {
    /// Rejects signatures whose moduli space does not exist:
    /// `3g - 3 + n < 0` and the unstable cases `(0,0)`, `(0,1)`, `(0,2)`, `(1,0)`.
    pub fn new(g: u32, n: u32) -> Result<Self> {
        let sig = Self { g, n };
        if !sig.exists() || n as usize > MAX_ENCODED || g as usize > MAX_ENCODED {
            return Err(StrataError::InvalidSignature { g, n });
        }
        Ok(sig)
    }

    pub fn exists(&self) -> bool {
        !matches!((self.g, self.n), (0, 0) | (0, 1) | (0, 2) | (1, 0)) && 3 * self.g as i64 - 3 + self.n as i64 >= 0
    }

    /// Dimension of the moduli space, which is also the largest codimension of
    /// a boundary stratum (the maximal edge count of a stable graph).
    pub fn dim(&self) -> usize {
        (3 * self.g as usize + self.n as usize).saturating_sub(3)
    }

    /// The smooth stratum: one vertex of genus `g` carrying every leg.
    pub fn smooth_graph(&self) -> DualGraph {
        DualGraph {
            genera: vec![self.g],
            edges: Vec::new(),
            legs: vec![0; self.n as usize],
        }
    }
}

impl fmt::Display for GnSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({},{})", self.g, self.n)
    }
}

/// Genus-decorated connected multigraph with labeled legs.
///
/// Loops are stored as `(v, v)` and non-loop edges as `(min, max)`. Marks are
/// 1-based in every user-facing surface; `legs()[i]` is the vertex carrying
/// mark `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualGraph {
    genera: Vec<u32>,
    edges: Vec<(usize, usize)>,
    legs: Vec<usize>,
}

impl DualGraph {
    pub fn new(genera: Vec<u32>, edges: Vec<(usize, usize)>, legs: Vec<usize>) -> Result<Self> {
        let v = genera.len();
        if v == 0 {
            return Err(StrataError::InvalidGraph("no vertices".into()));
        }
        if v > MAX_ENCODED || edges.len() > MAX_ENCODED || legs.len() > MAX_ENCODED {
            return Err(StrataError::InvalidGraph("graph too large".into()));
        }
        if let Some(g) = genera.iter().find(|&&g| g as usize > MAX_ENCODED) {
            return Err(StrataError::InvalidGraph(format!("vertex genus {g} too large")));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= v || b >= v {
                return Err(StrataError::InvalidGraph(format!(
                    "edge ({a},{b}) references a missing vertex"
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        if let Some((mark, &at)) = legs.iter().enumerate().find(|(_, &at)| at >= v) {
            return Err(StrataError::InvalidGraph(format!(
                "leg {} attached to missing vertex {at}",
                mark + 1
            )));
        }
        let graph = Self {
            genera,
            edges: normalized,
            legs,
        };
        if !graph.is_connected() {
            return Err(StrataError::InvalidGraph("graph is disconnected".into()));
        }
        Ok(graph)
    }

    /// Builds a graph from `(genus, marks)` per vertex, marks 1-based.
    pub fn from_vertices(vertices: &[(u32, &[u32])], edges: &[(usize, usize)]) -> Result<Self> {
        let n: usize = vertices.iter().map(|(_, marks)| marks.len()).sum();
        let mut legs = vec![usize::MAX; n];
        for (vertex, (_, marks)) in vertices.iter().enumerate() {
            for &mark in marks.iter() {
                let slot = (mark as usize)
                    .checked_sub(1)
                    .filter(|&i| i < n)
                    .ok_or_else(|| StrataError::InvalidGraph(format!("mark {mark} out of range 1..={n}")))?;
                if legs[slot] != usize::MAX {
                    return Err(StrataError::InvalidGraph(format!("mark {mark} appears twice")));
                }
                legs[slot] = vertex;
            }
        }
        Self::new(vertices.iter().map(|(g, _)| *g).collect(), edges.to_vec(), legs)
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn vertex_count(&self) -> usize {
        self.genera.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn mark_count(&self) -> usize {
        self.legs.len()
    }

    /// Marks (1-based) carried by `vertex`, ascending.
    pub fn marks_at(&self, vertex: usize) -> Vec<u32> {
        self.legs
            .iter()
            .enumerate()
            .filter(|(_, &at)| at == vertex)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    /// Legs plus edge-ends at `vertex`; a loop contributes two ends.
    pub fn valence(&self, vertex: usize) -> usize {
        let legs = self.legs.iter().filter(|&&at| at == vertex).count();
        let ends: usize = self
            .edges
            .iter()
            .map(|&(a, b)| usize::from(a == vertex) + usize::from(b == vertex))
            .sum();
        legs + ends
    }

    pub fn loop_count(&self, vertex: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == vertex && b == vertex).count()
    }

    /// Arithmetic genus: `sum g(v) + |E| - |V| + 1`.
    pub fn total_genus(&self) -> u32 {
        let decorations: u32 = self.genera.iter().sum();
        decorations + self.edges.len() as u32 + 1 - self.genera.len() as u32
    }

    pub fn signature(&self) -> GnSignature {
        GnSignature {
            g: self.total_genus(),
            n: self.legs.len() as u32,
        }
    }

    /// Genus-0 vertices need three special points, genus-1 vertices need one.
    pub fn is_stable(&self) -> bool {
        (0..self.vertex_count()).all(|v| match self.genera[v] {
            0 => self.valence(v) >= 3,
            1 => self.valence(v) >= 1,
            _ => true,
        })
    }

    fn is_connected(&self) -> bool {
        let mut dsu = DisjointSets::new(self.vertex_count());
        for &(a, b) in &self.edges {
            dsu.union(a, b);
        }
        dsu.count() == 1
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.edges.len() {
            return Err(StrataError::InvalidEdge {
                edge: e,
                count: self.edges.len(),
            });
        }
        Ok(())
    }

    /// Smooths the single edge `e`.
    ///
    /// A non-loop edge merges its endpoints into the lower-numbered vertex
    /// (genera add, parallel copies become loops); a loop is deleted and its
    /// vertex genus goes up by one. Remaining edges keep their relative order.
    pub fn smooth(&self, e: usize) -> Result<Self> {
        self.check_edge(e)?;
        let (a, b) = self.edges[e];
        let mut genera = self.genera.clone();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &edge)| edge)
            .collect();
        let mut legs = self.legs.clone();
        if a == b {
            genera[a] += 1;
        } else {
            let relabel = |u: usize| match u.cmp(&b) {
                std::cmp::Ordering::Equal => a,
                std::cmp::Ordering::Greater => u - 1,
                std::cmp::Ordering::Less => u,
            };
            genera[a] += genera[b];
            genera.remove(b);
            for edge in &mut edges {
                let (x, y) = (relabel(edge.0), relabel(edge.1));
                *edge = (x.min(y), x.max(y));
            }
            for at in &mut legs {
                *at = relabel(*at);
            }
        }
        Ok(Self { genera, edges, legs })
    }

    /// Smooths every edge of `subset` at once.
    ///
    /// Each connected component `C` of the spanning subgraph on `subset`
    /// becomes one vertex of genus `sum g(v) + |subset ∩ C| - |C| + 1`.
    /// Duplicate ids in `subset` are ignored.
    pub fn smooth_set(&self, subset: &[usize]) -> Result<Self> {
        let mut chosen = vec![false; self.edges.len()];
        for &e in subset {
            self.check_edge(e)?;
            chosen[e] = true;
        }
        Ok(self.smooth_mask(&chosen))
    }

    pub(crate) fn smooth_mask(&self, chosen: &[bool]) -> Self {
        let v = self.vertex_count();
        let mut dsu = DisjointSets::new(v);
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if chosen[e] {
                dsu.union(a, b);
            }
        }
        // components numbered by their smallest vertex
        let mut index = vec![usize::MAX; v];
        let mut component_of = vec![0; v];
        let mut next = 0;
        for (u, slot) in component_of.iter_mut().enumerate() {
            let root = dsu.find(u);
            if index[root] == usize::MAX {
                index[root] = next;
                next += 1;
            }
            *slot = index[root];
        }
        let mut genera = vec![0u32; next];
        let mut sizes = vec![0u32; next];
        for u in 0..v {
            genera[component_of[u]] += self.genera[u];
            sizes[component_of[u]] += 1;
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if chosen[e] {
                genera[component_of[a]] += 1;
            } else {
                let (x, y) = (component_of[a], component_of[b]);
                edges.push((x.min(y), x.max(y)));
            }
        }
        for (genus, size) in genera.iter_mut().zip(&sizes) {
            *genus = *genus + 1 - size;
        }
        let legs = self.legs.iter().map(|&at| component_of[at]).collect();
        Self { genera, edges, legs }
    }

    /// The one-edge graph left after smoothing every edge except `e`.
    pub fn delta(&self, e: usize) -> Result<Self> {
        self.check_edge(e)?;
        let mut chosen = vec![true; self.edges.len()];
        chosen[e] = false;
        Ok(self.smooth_mask(&chosen))
    }

    /// Canonical keys of `delta(e)` indexed by edge id.
    pub fn delta_keys(&self) -> Vec<CanonicalKey> {
        let mut chosen = vec![true; self.edges.len()];
        (0..self.edges.len())
            .map(|e| {
                chosen[e] = false;
                let key = canonical_key(&self.smooth_mask(&chosen));
                chosen[e] = true;
                key
            })
            .collect()
    }

    /// The multiset `{delta(e) : e in E}` as a sorted list of keys. Its
    /// support is the set of boundary divisors containing this stratum.
    pub fn delta_multiset(&self) -> Result<Vec<CanonicalKey>> {
        if self.edges.is_empty() {
            return Err(StrataError::InvalidGraph(
                "delta multiset of a graph without edges".into(),
            ));
        }
        let mut keys = self.delta_keys();
        keys.sort();
        Ok(keys)
    }

    /// Sorted, deduplicated support of [`Self::delta_multiset`].
    pub fn delta_support(&self) -> Result<Vec<CanonicalKey>> {
        let mut keys = self.delta_multiset()?;
        keys.dedup();
        Ok(keys)
    }

    /// True iff smoothing some subset of this graph's edges yields a graph
    /// isomorphic to `other`.
    pub fn is_degeneration_of(&self, other: &DualGraph) -> bool {
        if self.total_genus() != other.total_genus()
            || self.mark_count() != other.mark_count()
            || self.edge_count() < other.edge_count()
            || self.vertex_count() < other.vertex_count()
        {
            return false;
        }
        let target = canonical_key(other);
        let drop = self.edge_count() - other.edge_count();
        let mut chosen = vec![false; self.edge_count()];
        self.search_smoothings(&mut chosen, 0, drop, &target)
    }

    fn search_smoothings(&self, chosen: &mut [bool], start: usize, remaining: usize, target: &CanonicalKey) -> bool {
        if remaining == 0 {
            return canonical_key(&self.smooth_mask(chosen)) == *target;
        }
        for e in start..=chosen.len() - remaining {
            chosen[e] = true;
            if self.search_smoothings(chosen, e + 1, remaining - 1, target) {
                chosen[e] = false;
                return true;
            }
            chosen[e] = false;
        }
        false
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (a, b) = self.edges[e];
        a == b
    }

    /// Copy with vertices renumbered so that old vertex `u` becomes `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let v = self.vertex_count();
        let mut seen = vec![false; v];
        if perm.len() != v || perm.iter().any(|&p| p >= v || std::mem::replace(&mut seen[p], true)) {
            return Err(StrataError::InvalidGraph("relabeling is not a permutation".into()));
        }
        let mut genera = vec![0; v];
        for (u, &p) in perm.iter().enumerate() {
            genera[p] = self.genera[u];
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
            .collect();
        let legs = self.legs.iter().map(|&at| perm[at]).collect();
        Ok(Self { genera, edges, legs })
    }

    /// Copy with the edge list reordered; `order[i]` is the old id of new edge `i`.
    pub fn reorder_edges(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.edge_count()];
        if order.len() != self.edge_count()
            || order
                .iter()
                .any(|&e| e >= seen.len() || std::mem::replace(&mut seen[e], true))
        {
            return Err(StrataError::InvalidGraph("edge order is not a permutation".into()));
        }
        Ok(Self {
            genera: self.genera.clone(),
            edges: order.iter().map(|&e| self.edges[e]).collect(),
            legs: self.legs.clone(),
        })
    }

    /// Edges sorted lexicographically; the order used on export.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        edges
    }

    pub(crate) fn from_raw(genera: Vec<u32>, edges: Vec<(usize, usize)>, legs: Vec<usize>) -> Self {
        Self { genera, edges, legs }
    }
}

/// Compact one-line rendering, e.g. `1[3] -- 0[1,2] ; 1-1*`:
/// vertices as `genus[marks]`, edges as `a-b`, loops marked with `*`.
impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vertices: Vec<String> = (0..self.vertex_count())
            .map(|v| {
                let marks: Vec<String> = self.marks_at(v).iter().map(u32::to_string).collect();
                format!("v{v}:g{}[{}]", self.genera[v], marks.join(","))
            })
            .collect();
        let edges: Vec<String> = self.sorted_edges().iter().map(|&(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{} | {}", vertices.join(" "), edges.join(" "))
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.components -= 1;
        }
    }

    fn count(&self) -> usize {
        self.components
    }
}
