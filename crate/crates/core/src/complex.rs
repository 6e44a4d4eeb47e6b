//! The boundary complex: one vertex per boundary divisor, a simplex on every
//! set of divisors with nonempty intersection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::canon::CanonicalKey;
use crate::enumerate::Enumerator;
use crate::error::{Result, StrataError};
use crate::graph::{DualGraph, GnSignature};
use crate::lattice::{intersection_components, DivisorSet};

pub const BCOMPLEX_SCHEMA: &str = "bcomplex/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryComplex {
    pub signature: GnSignature,
    /// Divisor keys in ascending order; a vertex is its index here.
    pub vertices: Vec<CanonicalKey>,
    /// `faces[d]` holds the faces with `d + 1` vertices as sorted index lists.
    pub faces: Vec<BTreeSet<Vec<usize>>>,
}

impl BoundaryComplex {
    /// Builds faces of size up to `max_size` (default: the dimension of the
    /// moduli space) from the delta sets of enumerated strata.
    pub fn build(enumerator: &Enumerator, sig: GnSignature, max_size: Option<usize>) -> Result<Self> {
        let top = max_size.unwrap_or(sig.dim());
        if top > sig.dim() {
            return Err(StrataError::EdgeCountOutOfRange {
                sig,
                k: top,
                max: sig.dim(),
            });
        }
        let mut complex = Self {
            signature: sig,
            vertices: Vec::new(),
            faces: Vec::new(),
        };
        if top == 0 {
            return Ok(complex);
        }
        let divisors = enumerator.strata(sig, 1)?;
        complex.vertices = divisors.keys().cloned().collect();
        let index: BTreeMap<&CanonicalKey, usize> = complex.vertices.iter().enumerate().map(|(i, k)| (k, i)).collect();
        complex
            .faces
            .push((0..complex.vertices.len()).map(|i| vec![i]).collect());
        for size in 2..=top {
            let level = enumerator.strata(sig, size)?;
            let faces: BTreeSet<Vec<usize>> = level
                .graphs
                .values()
                .filter_map(|graph| {
                    let mut face: Vec<usize> = graph.delta_keys().iter().map(|k| index[k]).collect();
                    face.sort_unstable();
                    let before = face.len();
                    face.dedup();
                    (face.len() == before).then_some(face)
                })
                .collect();
            complex.faces.push(faces);
        }
        while complex.faces.last().is_some_and(BTreeSet::is_empty) {
            complex.faces.pop();
        }
        debug_assert!(complex.is_downward_closed());
        Ok(complex)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.vertices.binary_search(key).ok()
    }

    /// `face` must be sorted.
    pub fn contains_face(&self, face: &[usize]) -> bool {
        face.len()
            .checked_sub(1)
            .and_then(|d| self.faces.get(d))
            .is_some_and(|faces| faces.contains(face))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.contains_face(&[a.min(b), a.max(b)])
    }

    /// Face counts per dimension, without trailing zeros.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut counts: Vec<usize> = self.faces.iter().map(BTreeSet::len).collect();
        while counts.last() == Some(&0) {
            counts.pop();
        }
        counts
    }

    /// Every face with one vertex removed is again a face.
    pub fn is_downward_closed(&self) -> bool {
        self.faces.iter().skip(1).all(|faces| {
            faces.iter().all(|face| {
                (0..face.len()).all(|skip| {
                    let sub: Vec<usize> = face
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    self.contains_face(&sub)
                })
            })
        })
    }

    /// Faces not contained in a larger face, sorted lexicographically.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut covered: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut facets = Vec::new();
        for faces in self.faces.iter().rev() {
            for face in faces {
                if !covered.contains(face) {
                    facets.push(face.clone());
                }
                for skip in 0..face.len() {
                    let mut sub = face.clone();
                    sub.remove(skip);
                    covered.insert(sub);
                }
            }
        }
        facets.sort();
        facets
    }

    /// Smallest clique of the 1-skeleton that is not a face; ties broken by
    /// the lexicographic order of sorted key tuples. `None` iff flag.
    pub fn flag_witness(&self) -> Option<Vec<usize>> {
        let edges = self.faces.get(1)?;
        let mut current: Vec<Vec<usize>> = edges.iter().cloned().collect();
        let mut size = 2;
        while !current.is_empty() {
            // every clique of `size` is a face here, so extending each face
            // by a later common neighbour lists every clique of `size + 1`
            let next_faces = self.faces.get(size);
            let mut cliques = Vec::new();
            let mut missing = Vec::new();
            for face in &current {
                let last = *face.last().expect("nonempty");
                for v in last + 1..self.vertex_count() {
                    if face.iter().all(|&u| self.has_edge(u, v)) {
                        let mut clique = face.clone();
                        clique.push(v);
                        if next_faces.is_some_and(|f| f.contains(&clique)) {
                            cliques.push(clique);
                        } else {
                            missing.push(clique);
                        }
                    }
                }
            }
            if let Some(first) = missing.into_iter().min() {
                return Some(first);
            }
            current = cliques;
            size += 1;
        }
        None
    }

    pub fn is_flag(&self) -> bool {
        self.flag_witness().is_none()
    }

    pub fn keys_of(&self, clique: &[usize]) -> Vec<CanonicalKey> {
        clique.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub fn to_json(&self) -> String {
        let doc = ComplexJson {
            schema: BCOMPLEX_SCHEMA.to_string(),
            g: self.signature.g,
            n: self.signature.n,
            vertices: self.vertices.clone(),
            facets: self.facets(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    /// Rebuilds the full face lattice as the downward closure of the facets.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ComplexJson = serde_json::from_str(text)?;
        let invalid = |m: String| StrataError::InvalidGraph(format!("bcomplex: {m}"));
        if doc.schema != BCOMPLEX_SCHEMA {
            return Err(invalid(format!("unsupported schema {:?}", doc.schema)));
        }
        let signature = GnSignature::new(doc.g, doc.n)?;
        let mut faces: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for facet in &doc.facets {
            let mut sorted = facet.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != facet.len() || sorted.iter().any(|&v| v >= doc.vertices.len()) {
                return Err(invalid(format!("bad facet {facet:?}")));
            }
            let len = sorted.len();
            for mask in 1u64..(1 << len) {
                let face: Vec<usize> = (0..len).filter(|i| mask >> i & 1 == 1).map(|i| sorted[i]).collect();
                if faces.len() < face.len() {
                    faces.resize(face.len(), BTreeSet::new());
                }
                faces[face.len() - 1].insert(face);
            }
        }
        Ok(Self {
            signature,
            vertices: doc.vertices,
            faces,
        })
    }

    /// DOT rendering of the 1-skeleton; tooltips show each divisor graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "graph boundary_complex_g{}n{} {{",
            self.signature.g, self.signature.n
        );
        for (i, key) in self.vertices.iter().enumerate() {
            let tooltip = key
                .decode()
                .map(|g| crate::format::graph_to_json(&g).replace('"', "\\\""))
                .unwrap_or_default();
            let _ = writeln!(out, "  d{i} [label=\"D{i}\", tooltip=\"{tooltip}\", key=\"{key}\"];");
        }
        if let Some(edges) = self.faces.get(1) {
            for edge in edges {
                let _ = writeln!(out, "  d{} -- d{};", edge[0], edge[1]);
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    schema: String,
    g: u32,
    n: u32,
    vertices: Vec<CanonicalKey>,
    facets: Vec<Vec<usize>>,
}

/// A clique of divisors and whether it spans a face.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub clique: Vec<CanonicalKey>,
    pub is_face: bool,
    pub components: Vec<DualGraph>,
    pub pairwise_ok: bool,
}

impl WitnessReport {
    /// Evaluates a set of divisors of `complex` against the complex and the
    /// strata realizing their intersection.
    pub fn evaluate(enumerator: &Enumerator, complex: &BoundaryComplex, divisors: &DivisorSet) -> Result<Self> {
        if divisors.signature() != complex.signature {
            return Err(StrataError::MixedSignatures {
                first: complex.signature,
                second: divisors.signature(),
            });
        }
        let indices: Vec<usize> = divisors
            .keys()
            .iter()
            .map(|k| complex.index_of(k).ok_or_else(|| StrataError::UnknownKey(k.to_hex())))
            .collect::<Result<_>>()?;
        let pairwise_ok = indices
            .iter()
            .enumerate()
            .all(|(i, &a)| indices[i + 1..].iter().all(|&b| complex.has_edge(a, b)));
        let components = if divisors.len() <= complex.signature.dim() {
            intersection_components(enumerator, divisors)?.components
        } else {
            Vec::new()
        };
        Ok(Self {
            clique: divisors.keys().iter().cloned().collect(),
            is_face: complex.contains_face(&indices),
            components,
            pairwise_ok,
        })
    }

    /// Pairwise intersecting but with empty total intersection.
    pub fn is_flag_violation(&self) -> bool {
        self.pairwise_ok && !self.is_face
    }
}

/// The minimal non-face clique, if any, as a full report.
pub fn find_witness(enumerator: &Enumerator, complex: &BoundaryComplex) -> Result<Option<WitnessReport>> {
    complex
        .flag_witness()
        .map(|clique| {
            let divisors = DivisorSet::new(complex.signature, complex.keys_of(&clique))?;
            WitnessReport::evaluate(enumerator, complex, &divisors)
        })
        .transpose()
}

/// Predicted flagness: `g <= 1`, `n <= 1`, or `(g, n) = (2, 2)`.
pub fn predicted_flag(sig: GnSignature) -> bool {
    sig.g <= 1 || sig.n <= 1 || (sig.g, sig.n) == (2, 2)
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremVerdict {
    pub g: u32,
    pub n: u32,
    pub predicted: bool,
    pub computed: bool,
    pub witness: Option<WitnessReport>,
}

impl TheoremVerdict {
    pub fn agrees(&self) -> bool {
        self.predicted == self.computed
    }
}

/// Computes flagness of the full boundary complex and compares it with the
/// classification. Budget overflow surfaces as an error, never a verdict.
pub fn check_theorem(enumerator: &Enumerator, sig: GnSignature) -> Result<TheoremVerdict> {
    let complex = BoundaryComplex::build(enumerator, sig, None)?;
    let witness = find_witness(enumerator, &complex)?;
    Ok(TheoremVerdict {
        g: sig.g,
        n: sig.n,
        predicted: predicted_flag(sig),
        computed: witness.is_none(),
        witness,
    })
}
