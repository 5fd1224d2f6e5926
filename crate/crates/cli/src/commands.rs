use std::io::Write;

use batecho::gap::{
    estimate_gap, estimate_gap_using, estimate_mixing_gap, estimate_mixing_gap_using, GapParams, NodeCount,
};
use batecho::graph::RootedGraph;
use batecho::ratfun::forge_tree_pair;
use batecho::report::{exact_report, observe_report, to_csv, to_json, GapReport, MixingGapReport};
use batecho::walk::{
    run_experiment, ChainView, Experiment, LazyReturns, OutcomeSampler, RenewalWalk, SimulatedWalk, StreamSeed,
    WalkSource,
};
use serde::Serialize;

use crate::config::{
    parse_node_count, resolve_common, resolve_graph, Backend, CommonArgs, FileConfig, Format, GapArgs, Resolved,
};
use crate::CliError;

const DEFAULT_K_MAX: usize = 20;
const DEFAULT_M: u64 = 100_000;
const DEFAULT_COUNT: u64 = 1000;

fn emit(out: &Resolved, text: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_report<T: Serialize>(out: &Resolved, report: &T) -> Result<(), CliError> {
    let text = match out.format {
        Format::Json => to_json(report)?,
        Format::Csv => to_csv(report)?,
    };
    emit(out, &text)
}

pub fn exact(args: &CommonArgs, file: &FileConfig, k_max: Option<usize>) -> Result<(), CliError> {
    let out = resolve_common(args, file);
    let g = resolve_graph(args, file)?;
    let report = exact_report(&g, k_max.or(file.k_max).unwrap_or(DEFAULT_K_MAX))?;
    emit_report(&out, &report)
}

/// Writes `left.txt`, `right.txt` and `certificate.json` into the `--out`
/// directory.
pub fn forge(args: &CommonArgs, file: &FileConfig, k: Option<usize>) -> Result<(), CliError> {
    let out = resolve_common(args, file);
    let k = k
        .or(file.k.map(|k| k as usize))
        .ok_or_else(|| CliError::Config("forge needs --k".into()))?;
    let dir = out
        .out
        .as_deref()
        .ok_or_else(|| CliError::Config("forge needs --out DIR for the two tree files".into()))?;
    let pair = forge_tree_pair(k)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("left.txt"), pair.left.to_edge_file())?;
    std::fs::write(dir.join("right.txt"), pair.right.to_edge_file())?;
    let cert = pair.certificate(k);
    let text = match out.format {
        Format::Json => to_json(&cert)?,
        Format::Csv => to_csv(&cert)?,
    };
    let name = match out.format {
        Format::Json => "certificate.json",
        Format::Csv => "certificate.csv",
    };
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn gap_params(args: &GapArgs, file: &FileConfig) -> (GapParams, Backend) {
    let mut params = GapParams::new(
        args.c.or(file.c).unwrap_or(2.0),
        args.eps.or(file.eps).unwrap_or(0.25),
        args.delta.or(file.delta).unwrap_or(0.1),
    );
    params.tick_cap = args.tick_cap.or(file.tick_cap);
    (params, args.backend.or(file.backend).unwrap_or(Backend::Walk))
}

fn node_count(args: &GapArgs, file: &FileConfig) -> Result<NodeCount, CliError> {
    match args.n.clone().or_else(|| file.n_string()) {
        Some(s) => parse_node_count(&s),
        None => Ok(NodeCount::Estimate),
    }
}

pub fn gap(args: &CommonArgs, file: &FileConfig, gap_args: &GapArgs, mixing: bool) -> Result<(), CliError> {
    let out = resolve_common(args, file);
    let g = resolve_graph(args, file)?;
    let (params, backend) = gap_params(gap_args, file);
    params.validate()?;
    let n = node_count(gap_args, file)?;
    let seed = out.seed;
    if mixing {
        let est = match backend {
            Backend::Walk => estimate_mixing_gap(&SimulatedWalk::new(g.clone()), &params, n, seed)?,
            Backend::Renewal => estimate_mixing_gap(&RenewalWalk::new(&g), &params, n, seed)?,
            Backend::Outcome => {
                let sampler = OutcomeSampler::new(&g, ChainView::LAZY_EVERY_OTHER);
                estimate_mixing_gap_using(&RenewalWalk::new(&g), sampler, &params, n, seed)?
            }
        };
        emit_report(&out, &MixingGapReport::new(&g, seed, est))
    } else {
        let est = match backend {
            Backend::Walk => estimate_gap(&SimulatedWalk::new(g.clone()), &params, n, seed)?,
            Backend::Renewal => estimate_gap(&RenewalWalk::new(&g), &params, n, seed)?,
            Backend::Outcome => {
                let sampler = OutcomeSampler::new(&g, ChainView::LAZY);
                estimate_gap_using(&RenewalWalk::new(&g), sampler, &params, n, seed)?
            }
        };
        emit_report(&out, &GapReport::new(&g, seed, est))
    }
}

pub fn observe(args: &CommonArgs, file: &FileConfig, m: Option<u64>) -> Result<(), CliError> {
    let out = resolve_common(args, file);
    let g = resolve_graph(args, file)?;
    let m = m.or(file.m).unwrap_or(DEFAULT_M);
    if m < 2 {
        return Err(CliError::Config(format!("--m must be at least 2, got {m}")));
    }
    let d = g.root_degree();
    let walk = SimulatedWalk::new(g);
    let report = observe_report(&mut walk.plain(StreamSeed::new(out.seed)), out.seed, m, d);
    emit_report(&out, &report)
}

fn experiment_log(g: RootedGraph, seed: u64, k: u64, count: u64, lazy: bool) -> Vec<Experiment> {
    let walk = SimulatedWalk::new(g);
    let seed = StreamSeed::new(seed);
    let mut plain = walk.plain(seed);
    if lazy {
        let mut stream = LazyReturns::new(plain, seed.role(1));
        (0..count).map(|_| run_experiment(&mut stream, k)).collect()
    } else {
        (0..count).map(|_| run_experiment(&mut plain, k)).collect()
    }
}

pub fn simulate(
    args: &CommonArgs,
    file: &FileConfig,
    k: Option<u64>,
    count: Option<u64>,
    lazy: bool,
) -> Result<(), CliError> {
    let out = resolve_common(args, file);
    let g = resolve_graph(args, file)?;
    let k = k
        .or(file.k)
        .ok_or_else(|| CliError::Config("simulate needs --k".into()))?;
    if k == 0 {
        return Err(CliError::Config("--k must be at least 1".into()));
    }
    let count = count.or(file.count).unwrap_or(DEFAULT_COUNT);
    let log = experiment_log(g, out.seed, k, count, lazy || file.lazy.unwrap_or(false));
    let mut text = String::new();
    match out.format {
        Format::Json => {
            for e in &log {
                text.push_str(&serde_json::to_string(e)?);
                text.push('\n');
            }
        }
        Format::Csv => {
            text.push_str("k,success,duration_ticks\n");
            for e in &log {
                text.push_str(&format!("{},{},{}\n", e.k, e.success, e.duration_ticks));
            }
        }
    }
    emit(&out, &text)
}
