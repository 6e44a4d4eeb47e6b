//! Explicit graph families: the genus-2 pinwheel divisors, the three
//! high-genus divisors with empty triple intersection, and the chain that
//! degenerates every divisor when `n <= 1`.

use crate::error::{Result, StrataError};
use crate::graph::{DualGraph, GnSignature};
use crate::lattice::DivisorSet;

fn out_of_domain(message: String) -> StrataError {
    StrataError::OutOfDomain(message)
}

fn marks_except(n: u32, skip: &[u32]) -> Vec<u32> {
    (1..=n).filter(|m| !skip.contains(m)).collect()
}

/// `1[all marks but i] -- 1[i]` in `(2, n)`.
pub fn pinwheel_divisor(n: u32, i: u32) -> Result<DualGraph> {
    if n < 3 || !(1..=n).contains(&i) {
        return Err(out_of_domain(format!(
            "pinwheel divisor D_{i} needs n >= 3 and 1 <= i <= n (n = {n})"
        )));
    }
    let rest = marks_except(n, &[i]);
    DualGraph::from_vertices(&[(1, &rest), (1, &[i])], &[(0, 1)])
}

/// The `n` divisors `D_1, ..., D_n` of `(2, n)`, `n >= 3`: pairwise
/// intersecting with empty total intersection.
pub fn pinwheel_family(n: u32) -> Result<DivisorSet> {
    let graphs = (1..=n).map(|i| pinwheel_divisor(n, i)).collect::<Result<Vec<_>>>()?;
    DivisorSet::from_graphs(&graphs)
}

/// The stratum `1[i] -- 0[others] -- 1[j]` where `D_i` and `D_j` meet.
pub fn pinwheel_pair_component(n: u32, i: u32, j: u32) -> Result<DualGraph> {
    if n < 3 || i == j || !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(out_of_domain(format!("no pinwheel pair ({i},{j}) for n = {n}")));
    }
    let rest = marks_except(n, &[i, j]);
    DualGraph::from_vertices(&[(1, &[i]), (0, &rest), (1, &[j])], &[(0, 1), (1, 2)])
}

fn check_high_genus(g: u32, n: u32) -> Result<()> {
    if g < 3 || n < 2 {
        return Err(out_of_domain(format!(
            "high-genus triple needs g >= 3 and n >= 2, got ({g},{n})"
        )));
    }
    Ok(())
}

/// `[D1, D2, D3]` for `g >= 3`, `n >= 2`:
/// `D1 = (g-1) -- 1[1..n]`, `D2 = (g-1)[1] -- 1[2..n]`, `D3 = (g-1)[2..n] -- 1[1]`.
pub fn high_genus_divisors(g: u32, n: u32) -> Result<[DualGraph; 3]> {
    check_high_genus(g, n)?;
    let all = marks_except(n, &[]);
    let tail = marks_except(n, &[1]);
    Ok([
        DualGraph::from_vertices(&[(g - 1, &[]), (1, &all)], &[(0, 1)])?,
        DualGraph::from_vertices(&[(g - 1, &[1]), (1, &tail)], &[(0, 1)])?,
        DualGraph::from_vertices(&[(g - 1, &tail), (1, &[1])], &[(0, 1)])?,
    ])
}

pub fn high_genus_triple(g: u32, n: u32) -> Result<DivisorSet> {
    DivisorSet::from_graphs(&high_genus_divisors(g, n)?)
}

/// Strata realizing `D1 ∩ D2`, `D1 ∩ D3`, `D2 ∩ D3`, in that order:
/// `(g-1) -- 0[1] -- 1[2..n]`, `(g-1) -- 0[2..n] -- 1[1]` and
/// `1[2..n] -- (g-2) -- 1[1]`.
pub fn high_genus_pair_components(g: u32, n: u32) -> Result<[DualGraph; 3]> {
    check_high_genus(g, n)?;
    let tail = marks_except(n, &[1]);
    let chain = [(0, 1), (1, 2)];
    Ok([
        DualGraph::from_vertices(&[(g - 1, &[]), (0, &[1]), (1, &tail)], &chain)?,
        DualGraph::from_vertices(&[(g - 1, &[]), (0, &tail), (1, &[1])], &chain)?,
        DualGraph::from_vertices(&[(1, &tail), (g - 2, &[]), (1, &[1])], &chain)?,
    ])
}

/// Chain of `g - 1` genus-1 vertices ending in a genus-0 vertex with a loop
/// (carrying mark 1 when `n = 1`); a degeneration of every divisor.
pub fn universal_degeneration(sig: GnSignature) -> Result<DualGraph> {
    let ok = match sig.n {
        0 => sig.g >= 2,
        1 => sig.g >= 1,
        _ => false,
    };
    if !ok {
        return Err(out_of_domain(format!("no universal degeneration for {sig}")));
    }
    let last = (sig.g - 1) as usize;
    let mut genera = vec![1; last];
    genera.push(0);
    let mut edges: Vec<(usize, usize)> = (0..last).map(|v| (v, v + 1)).collect();
    edges.push((last, last));
    DualGraph::new(genera, edges, vec![last; sig.n as usize])
}
