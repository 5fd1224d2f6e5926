//! Run configuration: command-line flags layered over an optional TOML
//! file, layered over defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use batecho::gap::NodeCount;
use batecho::graph::{build_family, build_gab, build_leafy, Family, GraphJson, LeafyMode, RootedGraph};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// How experiments are generated for the statistical commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Tick-by-tick simulation of the walk.
    Walk,
    /// Returns drawn as iid gaps from the first-return law.
    Renewal,
    /// Each experiment drawn from its exact outcome law.
    Outcome,
}

/// Flags shared by every subcommand. All optional so that the config file
/// and defaults can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Graph file: text edge list (`n root` header) or `.json`.
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Named graph, e.g. `cycle:8`, `hypercube:3`, `gab:2,3`,
    /// `leafy:3,2,cutpoint`.
    #[arg(long, global = true)]
    pub family: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with defaults for any of the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GapArgs {
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Node count, or `estimate` to infer it from the mean return gap.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    /// Abort once this many walk ticks have been consumed.
    #[arg(long)]
    pub tick_cap: Option<u64>,
}

/// Keys accepted in the TOML config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub graph: Option<PathBuf>,
    pub family: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub k_max: Option<usize>,
    pub k: Option<u64>,
    pub m: Option<u64>,
    pub count: Option<u64>,
    pub lazy: Option<bool>,
    pub c: Option<f64>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub n: Option<toml::Value>,
    pub backend: Option<Backend>,
    pub tick_cap: Option<u64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
    }

    pub fn n_string(&self) -> Option<String> {
        self.n.as_ref().map(|v| match v {
            toml::Value::String(s) => s.clone(),
            other => other.to_string(),
        })
    }
}

/// Output settings resolved for one run.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub fn resolve_common(args: &CommonArgs, file: &FileConfig) -> Resolved {
    Resolved {
        seed: args.seed.or(file.seed).unwrap_or(0),
        out: args.out.clone().or_else(|| file.out.clone()),
        format: args.format.or(file.format).unwrap_or(Format::Json),
    }
}

/// The graph named by `--graph` or `--family`. A flag for either source
/// overrides whatever the config file names.
pub fn resolve_graph(args: &CommonArgs, file: &FileConfig) -> Result<RootedGraph, CliError> {
    let (path, family) = if args.graph.is_some() || args.family.is_some() {
        (args.graph.clone(), args.family.clone())
    } else {
        (file.graph.clone(), file.family.clone())
    };
    match (path, family) {
        (Some(_), Some(_)) => Err(CliError::Config("give exactly one of --graph and --family".into())),
        (None, None) => Err(CliError::Config(
            "a graph is required: --graph FILE or --family SPEC".into(),
        )),
        (Some(path), None) => load_graph(&path),
        (None, Some(spec)) => parse_family(&spec),
    }
}

pub fn load_graph(path: &Path) -> Result<RootedGraph, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let g = if path.extension().is_some_and(|e| e == "json") {
        let json: GraphJson =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        RootedGraph::from_json(&json)
    } else {
        RootedGraph::parse_edge_file(&text)
    };
    g.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad {what} parameter {x:?}")))
        })
        .collect()
}

pub fn parse_family(spec: &str) -> Result<RootedGraph, CliError> {
    let (name, params) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Config(format!("family spec {spec:?} should look like name:params")))?;
    let g = match name {
        "gab" => {
            let ab: Vec<usize> = parse_list(params, "gab")?;
            let [a, b] = ab[..] else {
                return Err(CliError::Config("gab takes two parameters a,b".into()));
            };
            build_gab(a, b).map(|t| t.into_graph())
        }
        "leafy" => {
            let parts: Vec<&str> = params.split(',').collect();
            if !(3..=4).contains(&parts.len()) {
                return Err(CliError::Config("leafy takes h,d,mode[,seed]".into()));
            }
            let h = parse_list::<usize>(parts[0], "leafy")?[0];
            let d = parse_list::<usize>(parts[1], "leafy")?[0];
            let mode = LeafyMode::from_str(parts[2]).map_err(CliError::Config)?;
            let seed = parts.get(3).map_or(Ok(vec![0]), |s| parse_list::<u64>(s, "leafy"))?[0];
            build_leafy(h, d, mode, seed)
        }
        other => {
            let family = Family::from_str(other).map_err(CliError::Config)?;
            let size = parse_list::<usize>(params, other)?;
            let [size] = size[..] else {
                return Err(CliError::Config(format!("{other} takes one size parameter")));
            };
            build_family(family, size)
        }
    };
    g.map_err(|e| CliError::Config(e.to_string()))
}

pub fn parse_node_count(s: &str) -> Result<NodeCount, CliError> {
    NodeCount::from_str(s).map_err(|e| CliError::Config(format!("--n: {e}")))
}
