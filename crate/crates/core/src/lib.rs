//! Combinatorics of the boundary of the moduli spaces of stable pointed
//! curves: stable dual graphs, their enumeration by codimension,
//! intersections of boundary divisors, and the boundary complex together
//! with its flag property.

pub mod canon;
pub mod complex;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod format;
pub mod graph;
pub mod lattice;

pub use canon::{canonical_form, canonical_key, is_isomorphic, CanonicalForm, CanonicalKey};
pub use complex::{check_theorem, find_witness, predicted_flag, BoundaryComplex, TheoremVerdict, WitnessReport};
pub use enumerate::{count_strata, divisors, strata, EnumerationConfig, Enumerator, StratumSet};
pub use error::{Result, StrataError};
pub use graph::{DualGraph, GnSignature};
pub use lattice::{
    intersect_nonempty, intersection_components, is_tree_type, sigma, sigma_inverse, DivisorSet, IntersectionReport,
};
