//! JSON surfaces.
//!
//! A dual graph serializes as
//! `{"genus":[g0,...],"edges":[[i,j],...],"legs":{"1":v,...}}` with 0-based
//! vertex ids, loops as `[i,i]`, edges sorted and legs in numeric order. A
//! standalone graph document may carry `"schema":"dualgraph/1"`.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, StrataError};
use crate::graph::DualGraph;

pub const DUALGRAPH_SCHEMA: &str = "dualgraph/1";

struct Legs<'a>(&'a [usize]);

impl Serialize for Legs<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (i, at) in self.0.iter().enumerate() {
            map.serialize_entry(&(i + 1).to_string(), at)?;
        }
        map.end()
    }
}

impl Serialize for DualGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let edges: Vec<[usize; 2]> = self.sorted_edges().into_iter().map(|(a, b)| [a, b]).collect();
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("genus", self.genera())?;
        map.serialize_entry("edges", &edges)?;
        map.serialize_entry("legs", &Legs(self.legs()))?;
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    #[serde(default)]
    schema: Option<String>,
    genus: Vec<u32>,
    edges: Vec<[usize; 2]>,
    legs: BTreeMap<String, usize>,
}

impl<'de> Deserialize<'de> for DualGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawGraph::deserialize(deserializer)?;
        if let Some(schema) = &raw.schema {
            if schema != DUALGRAPH_SCHEMA {
                return Err(D::Error::custom(format!("unsupported schema {schema:?}")));
            }
        }
        let n = raw.legs.len();
        let mut legs = vec![usize::MAX; n];
        for (label, &at) in &raw.legs {
            let mark: usize = label
                .parse()
                .ok()
                .filter(|m| (1..=n).contains(m) && label == &m.to_string())
                .ok_or_else(|| D::Error::custom(format!("leg label {label:?} is not in 1..={n}")))?;
            legs[mark - 1] = at;
        }
        let edges = raw.edges.iter().map(|&[a, b]| (a, b)).collect();
        DualGraph::new(raw.genus, edges, legs).map_err(D::Error::custom)
    }
}

/// Compact JSON of a single graph.
pub fn graph_to_json(graph: &DualGraph) -> String {
    serde_json::to_string(graph).expect("graph serialization is infallible")
}

/// Parses either one graph object or an array of graph objects.
pub fn graphs_from_json(text: &str) -> Result<Vec<DualGraph>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(|item| serde_json::from_value(item).map_err(StrataError::from))
            .collect(),
        other => Ok(vec![serde_json::from_value(other)?]),
    }
}
