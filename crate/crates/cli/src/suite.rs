//! Curated reproduction checks, each reported as pass or fail with detail.

use std::collections::BTreeSet;

use serde::Serialize;
use strata_core::families::{
    high_genus_divisors, high_genus_pair_components, high_genus_triple, pinwheel_divisor, pinwheel_family,
    pinwheel_pair_component, universal_degeneration,
};
use strata_core::{
    canonical_key, check_theorem, divisors, intersect_nonempty, intersection_components, is_isomorphic,
    BoundaryComplex, DivisorSet, DualGraph, Enumerator, GnSignature, Result,
};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn item(name: &str, pass: bool, detail: impl Into<String>) -> SuiteItem {
    SuiteItem {
        name: name.to_string(),
        pass,
        detail: detail.into(),
    }
}

fn sig(g: u32, n: u32) -> GnSignature {
    GnSignature::new(g, n).expect("fixed signature")
}

fn graph(vertices: &[(u32, &[u32])], edges: &[(usize, usize)]) -> DualGraph {
    DualGraph::from_vertices(vertices, edges).expect("fixed graph")
}

fn pair_components(enumerator: &Enumerator, a: &DualGraph, b: &DualGraph) -> Result<Vec<DualGraph>> {
    let set = DivisorSet::from_graphs(&[a.clone(), b.clone()])?;
    Ok(intersection_components(enumerator, &set)?.components)
}

fn genus_two_two_marks(enumerator: &Enumerator, items: &mut Vec<SuiteItem>) -> Result<()> {
    let s = sig(2, 2);
    let count = divisors(s).len();
    items.push(item("M(2,2) divisor count", count == 4, format!("{count} divisors")));
    let complex = BoundaryComplex::build(enumerator, s, None)?;
    let f = complex.f_vector();
    items.push(item(
        "M(2,2) f-vector and flag",
        f == [4, 5, 2] && complex.is_flag(),
        format!("f-vector {f:?}, flag {}", complex.is_flag()),
    ));
    let mut missing = Vec::new();
    for a in 0..complex.vertex_count() {
        for b in a + 1..complex.vertex_count() {
            if !complex.has_edge(a, b) {
                missing.push(BTreeSet::from([
                    complex.vertices[a].clone(),
                    complex.vertices[b].clone(),
                ]));
            }
        }
    }
    let drawn = BTreeSet::from([
        canonical_key(&graph(&[(1, &[1, 2]), (1, &[])], &[(0, 1)])),
        canonical_key(&graph(&[(0, &[1, 2]), (2, &[])], &[(0, 1)])),
    ]);
    let found: Vec<String> = missing
        .iter()
        .flatten()
        .map(|k| k.decode().map(|g| g.to_string()).unwrap_or_default())
        .collect();
    items.push(item(
        "M(2,2) non-edge {1(1,2)-1, 0(1,2)-2}",
        missing.len() == 1 && missing[0] == drawn,
        format!("computed non-edges: {found:?}"),
    ));
    Ok(())
}

fn genus_two_three_marks(enumerator: &Enumerator, items: &mut Vec<SuiteItem>) -> Result<()> {
    let components = pair_components(
        enumerator,
        &graph(&[(1, &[3]), (1, &[1, 2])], &[(0, 1)]),
        &graph(&[(1, &[]), (1, &[1, 2, 3])], &[(0, 1)]),
    )?;
    let expected = [
        graph(&[(1, &[3]), (0, &[1, 2]), (1, &[])], &[(0, 1), (1, 2)]),
        graph(&[(1, &[1, 2]), (0, &[3]), (1, &[])], &[(0, 1), (1, 2)]),
    ];
    let matched = expected
        .iter()
        .all(|e| components.iter().filter(|c| is_isomorphic(c, e)).count() == 1);
    items.push(item(
        "M(2,3) two-divisor intersection",
        components.len() == 2 && matched,
        format!("{} components", components.len()),
    ));
    Ok(())
}

fn parallel_edges(items: &mut Vec<SuiteItem>) -> Result<()> {
    let banana = graph(&[(0, &[1]), (0, &[2])], &[(0, 1), (0, 1)]);
    let support = banana.delta_support()?.len();
    items.push(item(
        "M(1,2) parallel edges name one divisor",
        support == 1,
        format!("support size {support}"),
    ));
    Ok(())
}

fn universal(items: &mut Vec<SuiteItem>) -> Result<()> {
    let mut misses = Vec::new();
    for (g, n) in [(2, 0), (3, 0), (1, 1), (2, 1), (3, 1)] {
        let s = sig(g, n);
        let chain = universal_degeneration(s)?;
        let missed = divisors(s)
            .graphs
            .values()
            .filter(|d| !chain.is_degeneration_of(d))
            .count();
        if missed > 0 {
            misses.push(format!("{s}: {missed}"));
        }
    }
    items.push(item(
        "common degeneration of all divisors, n <= 1",
        misses.is_empty(),
        if misses.is_empty() {
            "all divisors degenerate".to_string()
        } else {
            misses.join(", ")
        },
    ));
    Ok(())
}

fn pinwheel(enumerator: &Enumerator, items: &mut Vec<SuiteItem>) -> Result<()> {
    let mut problems = Vec::new();
    for n in [3, 4] {
        for i in 1..=n {
            for j in i + 1..=n {
                let components = pair_components(enumerator, &pinwheel_divisor(n, i)?, &pinwheel_divisor(n, j)?)?;
                let shape = pinwheel_pair_component(n, i, j)?;
                if components.len() != 1 || !is_isomorphic(&components[0], &shape) {
                    problems.push(format!("(2,{n}) D{i}D{j}: {} components", components.len()));
                }
            }
        }
        if intersect_nonempty(enumerator, &pinwheel_family(n)?)? {
            problems.push(format!("(2,{n}) total intersection nonempty"));
        }
    }
    items.push(item(
        "pinwheel divisors, n = 3, 4",
        problems.is_empty(),
        if problems.is_empty() {
            "pairs meet once, all together empty".to_string()
        } else {
            problems.join(", ")
        },
    ));
    Ok(())
}

fn high_genus(enumerator: &Enumerator, items: &mut Vec<SuiteItem>) -> Result<()> {
    let mut problems = Vec::new();
    for (g, n) in [(3, 2), (4, 2)] {
        let d = high_genus_divisors(g, n)?;
        let shapes = high_genus_pair_components(g, n)?;
        for (slot, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            let components = pair_components(enumerator, &d[a], &d[b])?;
            if components.len() != 1 || !is_isomorphic(&components[0], &shapes[slot]) {
                problems.push(format!(
                    "({g},{n}) D{}D{}: {} components",
                    a + 1,
                    b + 1,
                    components.len()
                ));
            }
        }
        if intersect_nonempty(enumerator, &high_genus_triple(g, n)?)? {
            problems.push(format!("({g},{n}) triple nonempty"));
        }
    }
    items.push(item(
        "high-genus triple, (3,2) and (4,2)",
        problems.is_empty(),
        if problems.is_empty() {
            "pairs meet once, triple empty".to_string()
        } else {
            problems.join(", ")
        },
    ));
    Ok(())
}

fn classification(enumerator: &Enumerator, items: &mut Vec<SuiteItem>) -> Result<()> {
    for (g, n) in [(2, 2), (2, 3), (1, 4), (3, 2)] {
        let verdict = check_theorem(enumerator, sig(g, n))?;
        let size = verdict.witness.as_ref().map_or(0, |w| w.clique.len());
        items.push(item(
            &format!("flag classification ({g},{n})"),
            verdict.agrees(),
            format!(
                "predicted {}, computed {}, witness size {size}",
                verdict.predicted, verdict.computed
            ),
        ));
    }
    Ok(())
}

/// Runs every curated check in a fixed order.
pub fn run_suite(enumerator: &Enumerator) -> Result<Vec<SuiteItem>> {
    let mut items = Vec::new();
    genus_two_two_marks(enumerator, &mut items)?;
    genus_two_three_marks(enumerator, &mut items)?;
    parallel_edges(&mut items)?;
    universal(&mut items)?;
    pinwheel(enumerator, &mut items)?;
    high_genus(enumerator, &mut items)?;
    classification(enumerator, &mut items)?;
    Ok(items)
}
