use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use strata_core::format::graphs_from_json;
use strata_core::{
    check_theorem, find_witness, intersection_components, BoundaryComplex, CanonicalKey, DivisorSet, DualGraph,
    Enumerator, GnSignature, StrataError, WitnessReport,
};

use crate::{Command, Failure, Format, RunConfig, SigArgs, EXIT_NEGATIVE, EXIT_OK};

type Outcome = Result<i32, Failure>;

pub(crate) fn dispatch(command: &Command, config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Enumerate { sig, k } => enumerate(signature(sig)?, *k, config, out),
        Command::Intersect { g, n, inputs } => intersect(*g, *n, inputs, config, out),
        Command::Complex { sig, .. } => complex(signature(sig)?, config, out),
        Command::FlagCheck { sig } => flag_check(signature(sig)?, config, out),
        Command::Witness { sig, clique } => witness(signature(sig)?, clique, config, out),
        Command::Verify {
            g_range,
            n_range,
            skip_over_budget,
        } => verify(*g_range, *n_range, *skip_over_budget, config, out, err),
        Command::PaperSuite => paper_suite(config, out),
    }
}

fn signature(args: &SigArgs) -> Result<GnSignature, Failure> {
    Ok(GnSignature::new(args.g, args.n)?)
}

fn unsupported(format: Format, command: &str) -> Failure {
    Failure::usage(format!("--format {format:?} is not supported by {command}").to_lowercase())
}

fn enumerate(sig: GnSignature, k: usize, config: &RunConfig, out: &mut dyn Write) -> Outcome {
    let set = config.enumerator().strata(sig, k)?;
    match config.format {
        Format::Json => writeln!(out, "{}", set.to_json())?,
        Format::Text => {
            writeln!(out, "# {sig} k={k}: {} graphs", set.len())?;
            for (key, graph) in set.iter() {
                writeln!(out, "{key}\t{graph}")?;
            }
        }
        Format::Dot => return Err(unsupported(config.format, "enumerate")),
    }
    Ok(EXIT_OK)
}

/// A file path, inline JSON (object or array of graphs) or a canonical key.
fn read_graphs(input: &str) -> Result<Vec<DualGraph>, Failure> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(graphs_from_json(input)?);
    }
    if Path::new(input).is_file() {
        let text = std::fs::read_to_string(input)?;
        return Ok(graphs_from_json(&text)?);
    }
    let key: CanonicalKey = input
        .parse()
        .map_err(|_| Failure::usage(format!("{input:?} is neither a file, JSON, nor a canonical key")))?;
    Ok(vec![key.decode()?])
}

fn divisor_set(expected: Option<GnSignature>, inputs: &[String]) -> Result<DivisorSet, Failure> {
    let mut graphs = Vec::new();
    for input in inputs {
        graphs.extend(read_graphs(input)?);
    }
    let set = DivisorSet::from_graphs(&graphs)?;
    if let Some(sig) = expected {
        if sig != set.signature() {
            return Err(StrataError::MixedSignatures {
                first: sig,
                second: set.signature(),
            }
            .into());
        }
    }
    Ok(set)
}

fn intersect(g: Option<u32>, n: Option<u32>, inputs: &[String], config: &RunConfig, out: &mut dyn Write) -> Outcome {
    let expected = match (g, n) {
        (Some(g), Some(n)) => Some(GnSignature::new(g, n)?),
        (None, None) => None,
        _ => return Err(Failure::usage("--g and --n must be given together")),
    };
    let set = divisor_set(expected, inputs)?;
    let report = intersection_components(&config.enumerator(), &set)?;
    match config.format {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Text => {
            let sig = set.signature();
            writeln!(
                out,
                "# {sig}: {} divisors, {} components",
                set.len(),
                report.components.len()
            )?;
            for graph in &report.components {
                writeln!(out, "{}\t{graph}", strata_core::canonical_key(graph))?;
            }
        }
        Format::Dot => return Err(unsupported(config.format, "intersect")),
    }
    Ok(if report.nonempty { EXIT_OK } else { EXIT_NEGATIVE })
}

fn complex(sig: GnSignature, config: &RunConfig, out: &mut dyn Write) -> Outcome {
    let max_size = config.max_dim.map(|d| d + 1);
    let complex = BoundaryComplex::build(&config.enumerator(), sig, max_size)?;
    match config.format {
        Format::Json => writeln!(out, "{}", complex.to_json())?,
        Format::Dot => write!(out, "{}", complex.to_dot())?,
        Format::Text => {
            writeln!(out, "# {sig}: f-vector {:?}", complex.f_vector())?;
            for (i, key) in complex.vertices.iter().enumerate() {
                let graph = key.decode()?;
                writeln!(out, "D{i}\t{key}\t{graph}")?;
            }
            for facet in complex.facets() {
                let names: Vec<String> = facet.iter().map(|i| format!("D{i}")).collect();
                writeln!(out, "facet\t{}", names.join(" "))?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct FlagJson<'a> {
    g: u32,
    n: u32,
    flag: bool,
    witness: Option<&'a [CanonicalKey]>,
}

fn flag_check(sig: GnSignature, config: &RunConfig, out: &mut dyn Write) -> Outcome {
    let complex = BoundaryComplex::build(&config.enumerator(), sig, None)?;
    let witness = complex.flag_witness().map(|c| complex.keys_of(&c));
    match config.format {
        Format::Json => {
            let doc = FlagJson {
                g: sig.g,
                n: sig.n,
                flag: witness.is_none(),
                witness: witness.as_deref(),
            };
            writeln!(out, "{}", serde_json::to_string(&doc).expect("serializable"))?;
        }
        Format::Text => match &witness {
            None => writeln!(out, "{sig}: flag")?,
            Some(keys) => {
                let keys: Vec<String> = keys.iter().map(CanonicalKey::to_hex).collect();
                writeln!(out, "{sig}: not flag, witness {}", keys.join(" "))?;
            }
        },
        Format::Dot => return Err(unsupported(config.format, "flag-check")),
    }
    Ok(if witness.is_none() { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    g: u32,
    n: u32,
    witness: Option<&'a WitnessReport>,
}

/// Exit 0 when a flag violation is reported, 1 when there is none.
fn witness(sig: GnSignature, clique: &[String], config: &RunConfig, out: &mut dyn Write) -> Outcome {
    let enumerator = config.enumerator();
    let complex = BoundaryComplex::build(&enumerator, sig, None)?;
    let report = if clique.is_empty() {
        find_witness(&enumerator, &complex)?
    } else {
        let set = divisor_set(Some(sig), clique)?;
        Some(WitnessReport::evaluate(&enumerator, &complex, &set)?)
    };
    match config.format {
        Format::Json => {
            let doc = WitnessJson {
                g: sig.g,
                n: sig.n,
                witness: report.as_ref(),
            };
            writeln!(out, "{}", serde_json::to_string(&doc).expect("serializable"))?;
        }
        Format::Text => match &report {
            None => writeln!(out, "{sig}: flag, no witness")?,
            Some(w) => {
                writeln!(
                    out,
                    "{sig}: clique of {} divisors, pairwise {}, face {}",
                    w.clique.len(),
                    w.pairwise_ok,
                    w.is_face
                )?;
                for key in &w.clique {
                    writeln!(out, "divisor\t{key}\t{}", key.decode()?)?;
                }
                for graph in &w.components {
                    writeln!(out, "component\t{}\t{graph}", strata_core::canonical_key(graph))?;
                }
            }
        },
        Format::Dot => return Err(unsupported(config.format, "witness")),
    }
    Ok(match report {
        Some(w) if w.is_flag_violation() => EXIT_OK,
        _ => EXIT_NEGATIVE,
    })
}

#[derive(Serialize)]
struct VerifyRow {
    g: u32,
    n: u32,
    predicted: bool,
    computed: Option<bool>,
    agrees: Option<bool>,
    skipped: bool,
    witness: Vec<CanonicalKey>,
}

fn verify(
    (g_lo, g_hi): (u32, u32),
    (n_lo, n_hi): (u32, u32),
    skip_over_budget: bool,
    config: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let enumerator: Enumerator = config.enumerator();
    let mut rows = Vec::new();
    for g in g_lo..=g_hi {
        for n in n_lo..=n_hi {
            let Ok(sig) = GnSignature::new(g, n) else {
                continue;
            };
            let started = Instant::now();
            let row = match check_theorem(&enumerator, sig) {
                Ok(verdict) => VerifyRow {
                    g,
                    n,
                    predicted: verdict.predicted,
                    computed: Some(verdict.computed),
                    agrees: Some(verdict.agrees()),
                    skipped: false,
                    witness: verdict.witness.map(|w| w.clique).unwrap_or_default(),
                },
                Err(e @ StrataError::BudgetExceeded { .. }) => {
                    if !skip_over_budget {
                        return Err(e.into());
                    }
                    writeln!(err, "{sig}: skipped: {e}")?;
                    VerifyRow {
                        g,
                        n,
                        predicted: strata_core::predicted_flag(sig),
                        computed: None,
                        agrees: None,
                        skipped: true,
                        witness: Vec::new(),
                    }
                }
                Err(e) => return Err(e.into()),
            };
            writeln!(err, "{sig}: {:.3?}", started.elapsed())?;
            rows.push(row);
        }
    }
    match config.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&rows).expect("serializable"))?,
        Format::Text => {
            writeln!(out, "g\tn\tpredicted\tcomputed\tagrees\twitness")?;
            for row in &rows {
                let show = |v: Option<bool>| v.map_or("skipped".to_string(), |b| b.to_string());
                let keys: Vec<String> = row.witness.iter().map(CanonicalKey::to_hex).collect();
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    row.g,
                    row.n,
                    row.predicted,
                    show(row.computed),
                    show(row.agrees),
                    if keys.is_empty() {
                        "-".to_string()
                    } else {
                        keys.join(",")
                    }
                )?;
            }
        }
        Format::Dot => return Err(unsupported(config.format, "verify")),
    }
    if rows.iter().any(|r| r.agrees == Some(false)) {
        Ok(EXIT_NEGATIVE)
    } else {
        Ok(EXIT_OK)
    }
}

pub(crate) fn paper_suite(config: &RunConfig, out: &mut dyn Write) -> Outcome {
    let items = crate::suite::run_suite(&config.enumerator())?;
    match config.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&items).expect("serializable"))?,
        Format::Text => {
            for item in &items {
                let verdict = if item.pass { "PASS" } else { "FAIL" };
                writeln!(out, "{verdict}\t{}\t{}", item.name, item.detail)?;
            }
            let passed = items.iter().filter(|i| i.pass).count();
            writeln!(out, "{passed}/{} passed", items.len())?;
        }
        Format::Dot => return Err(unsupported(config.format, "paper-suite")),
    }
    Ok(if items.iter().all(|i| i.pass) {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}
