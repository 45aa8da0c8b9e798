use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, Context};
use chordspan::builders::{build_greedy, build_shell, max_tcl, min_tcl};
use chordspan::enumeration::{
    enumerate_stats, spectrum_by_enumeration, verify_extremes, verify_spectrum, verify_theta,
    verify_two_ears_characterization, EnumConfig, EnumError,
};
use chordspan::io::{from_json, to_dot, to_json, GraphDocument};
use chordspan::spectrum::{SearchConfig, WitnessFinder};
use chordspan::{MopGraph, TclValue};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Cli, Command, ExportFormat, Failure, Format, Kind, Limits, RunOpts, Theorem};

pub fn run(cli: Cli) -> Result<(), Failure> {
    let limits = cli.limits;
    match cli.command {
        Command::Build { kind, n, format, seed } => build(kind, n, format, seed),
        Command::Tcl { input } => {
            let g = read_graph(input.as_deref())?;
            println!("{}", summary(&g));
            Ok(())
        }
        Command::Enumerate { n, run } => enumerate(n, limits, run),
        Command::Verify { theorem, n_range, run } => verify(theorem, &n_range, limits, run),
        Command::Spectrum { n, witness, run } => spectrum(n, witness, limits, run),
        Command::Export { input, format } => {
            let g = read_graph(Some(&input))?;
            match format {
                ExportFormat::Dot => print!("{}", to_dot(&g)),
                ExportFormat::Json => println!("{}", to_json(&g, true)),
            }
            Ok(())
        }
    }
}

fn build(kind: Kind, n: usize, format: Format, seed: u64) -> Result<(), Failure> {
    if n < 3 {
        return Err(Failure::Usage(format!("--n must be at least 3, got {n}")));
    }
    let g = match kind {
        Kind::Greedy => build_greedy(n).graph,
        Kind::Shell => build_shell(n),
        Kind::Random => MopGraph::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(anyhow::Error::from)?,
    };
    match format {
        Format::Json => println!("{}", to_json(&g, false)),
        Format::Dot => print!("{}", to_dot(&g)),
        Format::Summary => println!("{}", summary(&g)),
    }
    Ok(())
}

fn summary(g: &MopGraph) -> String {
    format!(
        "n={} tcl={} ears={} diameter={} max_layer={}",
        g.n(),
        g.tcl(),
        g.count_ears(),
        g.has_diameter(),
        g.max_layer()
    )
}

fn read_graph(path: Option<&Path>) -> Result<MopGraph, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|e| anyhow!("cannot read {}: {e}", p.display()))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| anyhow!("cannot read stdin: {e}"))?;
        }
    }
    Ok(from_json(&text).map_err(anyhow::Error::from)?)
}

/// Runs `f` on a pool of `workers` threads, or the global pool when unset.
fn with_workers<T: Send>(run: RunOpts, f: impl FnOnce(&EnumConfig) -> T + Send, cfg: EnumConfig) -> Result<T, Failure> {
    match run.workers {
        Some(1) => Ok(f(&cfg.parallel(false))),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| anyhow!("cannot start worker pool: {e}"))?;
            Ok(pool.install(|| f(&cfg.parallel(true))))
        }
        None => Ok(f(&cfg.parallel(true))),
    }
}

/// An enumeration config allowing `top`, or a usage error when `top` is
/// above the cap and --force is absent.
fn config_for(top: usize, limits: Limits, run: RunOpts) -> Result<EnumConfig, Failure> {
    if top > limits.enum_cap && !run.force {
        return Err(Failure::Usage(format!(
            "order {top} is above the enumeration cap {}; pass --force or raise CHORDSPAN_ENUM_CAP",
            limits.enum_cap
        )));
    }
    Ok(EnumConfig::with_cap(limits.enum_cap.max(top)))
}

fn enumerate(n: usize, limits: Limits, run: RunOpts) -> Result<(), Failure> {
    if n < 3 {
        return Err(Failure::Usage(format!("--n must be at least 3, got {n}")));
    }
    let cfg = config_for(n, limits, run)?;
    let stats = with_workers(run, |cfg| enumerate_stats(n, cfg), cfg)?.map_err(anyhow::Error::from)?;
    let doc = EnumerationDocument {
        n,
        count: stats.count,
        min: stats.min_seen(),
        max: stats.max_seen(),
        histogram: &stats.tcl_histogram,
        ears: &stats.ears_by_tcl,
        min_max_layer: stats.min_max_layer.map(|h| h.to_string()),
        max_max_layer: stats.max_max_layer.map(|h| h.to_string()),
    };
    println!("{}", serde_json::to_string(&doc).context("cannot encode statistics")?);
    Ok(())
}

#[derive(Serialize)]
struct EnumerationDocument<'a> {
    n: usize,
    count: u64,
    min: Option<TclValue>,
    max: Option<TclValue>,
    histogram: &'a BTreeMap<TclValue, u64>,
    ears: &'a BTreeMap<TclValue, BTreeSet<usize>>,
    min_max_layer: Option<String>,
    max_max_layer: Option<String>,
}

#[derive(Serialize)]
struct WitnessDocument {
    graph: GraphDocument,
    target: u64,
    moves: usize,
    certified: bool,
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--n-range expects A..B or a single value, got {text:?}"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (text, text),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn verify(theorem: Theorem, range: &str, limits: Limits, run: RunOpts) -> Result<(), Failure> {
    let (lo, hi) = parse_range(range)?;
    let floor = match theorem {
        Theorem::Min | Theorem::Max | Theorem::Spectrum => 3,
        Theorem::Ears => 5,
        Theorem::Theta => 1,
    };
    if lo < floor {
        return Err(Failure::Usage(format!(
            "--n-range for {theorem:?} starts at {floor}, got {lo}"
        )));
    }
    let top = match theorem {
        Theorem::Theta => {
            3usize
                .checked_shl(hi as u32)
                .filter(|t| *t < usize::MAX / 2)
                .ok_or_else(|| Failure::Usage(format!("k={hi} is far too large")))?
                + 1
        }
        _ => hi,
    };
    let cfg = config_for(top, limits, run)?;
    let mut failed = 0;
    for n in lo..=hi {
        let outcome = with_workers(run, |cfg| verify_one(theorem, n, cfg), cfg)?;
        match outcome {
            Ok(line) => println!("{line} PASS"),
            Err(EnumError::VerificationFailure {
                n,
                claim,
                counterexample,
            }) => {
                failed += 1;
                println!("n={n} FAIL");
                eprintln!("n={n}: {claim}");
                if let Some(g) = counterexample {
                    println!("{}", to_json(&g, true));
                }
            }
            Err(e) => return Err(anyhow!(e).into()),
        }
    }
    if failed > 0 {
        return Err(anyhow!("{failed} of {} checks failed", hi - lo + 1).into());
    }
    Ok(())
}

fn verify_one(theorem: Theorem, n: usize, cfg: &EnumConfig) -> Result<String, EnumError> {
    Ok(match theorem {
        Theorem::Min => {
            let r = verify_extremes(n, cfg)?;
            format!("n={n} min={} count={}", r.min, r.count)
        }
        Theorem::Max => {
            let r = verify_extremes(n, cfg)?;
            format!("n={n} max={} count={}", r.max, r.count)
        }
        Theorem::Ears => {
            let r = verify_two_ears_characterization(n, cfg)?;
            format!("n={n} max={} maximal={} count={}", r.max, r.maximal_graphs, r.count)
        }
        Theorem::Theta => {
            let r = verify_theta(n as u32, cfg)?;
            format!("theta({})={}", r.k, r.theta)
        }
        Theorem::Spectrum => {
            let r = verify_spectrum(n, cfg)?;
            format!("n={n} min={} max={} values={}", r.min, r.max, r.values.len())
        }
    })
}

fn spectrum(n: usize, witness: Option<u64>, limits: Limits, run: RunOpts) -> Result<(), Failure> {
    if n < 5 {
        return Err(Failure::Usage(format!("--n must be at least 5, got {n}")));
    }
    let (min, max) = (min_tcl(n), max_tcl(n));
    let Some(target) = witness else {
        if n <= limits.enum_cap || run.force {
            let cfg = EnumConfig::with_cap(limits.enum_cap.max(n));
            let values = with_workers(run, |cfg| spectrum_by_enumeration(n, cfg), cfg)?.map_err(anyhow::Error::from)?;
            let list: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            println!("min={min} max={max} values={{{}}}", list.join(","));
        } else {
            eprintln!("n={n} is above the enumeration cap; values are not enumerated");
            println!("min={min} max={max}");
        }
        return Ok(());
    };
    let config = SearchConfig {
        depth: limits.search_depth,
        frontier: limits.search_frontier,
    };
    let finder = WitnessFinder::new(n, config).map_err(anyhow::Error::from)?;
    let report = finder.find(TclValue(target)).map_err(anyhow::Error::from)?;
    if !report.certified {
        return Err(anyhow!("witness for {target} failed certification").into());
    }
    let doc = WitnessDocument {
        graph: GraphDocument::from_graph(&report.graph, true),
        target,
        moves: report.moves.len(),
        certified: report.certified,
    };
    println!("{}", serde_json::to_string(&doc).context("cannot encode witness")?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5..12").unwrap(), (5, 12));
        assert_eq!(parse_range("5..=12").unwrap(), (5, 12));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(matches!(parse_range("9..3"), Err(Failure::Usage(_))));
        assert!(matches!(parse_range("a..3"), Err(Failure::Usage(_))));
    }
}
