//! Run configuration: defaults, then a flat `key = value` file, then flags.

use std::path::{Path, PathBuf};

use influence_core::analytics::{DEFAULT_BINS, DEFAULT_PERCENTILE};
use influence_core::{GraphKind, IpParams, PageRankParams, ParseMode};

use crate::error::CliError;

/// Every key accepted in a config file, in manifest order. Flags use the
/// same names.
pub const KEYS: &[&str] = &[
    "events",
    "follows",
    "clicks",
    "graph",
    "out-dir",
    "graph-type",
    "min-urls",
    "iterations",
    "epsilon",
    "damping",
    "pagerank-iterations",
    "pagerank-epsilon",
    "q",
    "bins",
    "top-k",
    "min-posted",
    "measure",
    "against",
    "threads",
    "mode",
];

/// Keys that name files. Relative paths in a config file resolve against
/// the file's directory.
const PATH_KEYS: &[&str] = &["events", "follows", "clicks", "graph", "out-dir"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub events: Option<PathBuf>,
    pub follows: Option<PathBuf>,
    pub clicks: Option<PathBuf>,
    /// Precomputed graph file; used instead of building from events.
    pub graph: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub graph_type: GraphKind,
    pub min_urls: usize,
    pub ip: IpParams,
    pub pagerank: PageRankParams,
    pub q: f64,
    pub bins: usize,
    pub top_k: usize,
    /// Eligibility for top-k reports: at least this many distinct URLs posted.
    pub min_posted: usize,
    pub measure: String,
    pub against: String,
    pub threads: Option<usize>,
    pub mode: ParseMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            events: None,
            follows: None,
            clicks: None,
            graph: None,
            out_dir: PathBuf::from("."),
            graph_type: GraphKind::Retweet,
            min_urls: 3,
            ip: IpParams::default(),
            pagerank: PageRankParams::default(),
            q: DEFAULT_PERCENTILE,
            bins: DEFAULT_BINS,
            top_k: 10,
            min_posted: 0,
            measure: "ip-influence".into(),
            against: "followers".into(),
            threads: None,
            mode: ParseMode::Strict,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::ConfigInvalid(format!("{key}: cannot parse {value:?}")))
}

impl RunConfig {
    /// Sets one key. `base` resolves relative paths.
    pub fn set(&mut self, key: &str, value: &str, base: Option<&Path>) -> Result<(), CliError> {
        let value = value.trim();
        let path = || match base {
            Some(b) if Path::new(value).is_relative() => b.join(value),
            _ => PathBuf::from(value),
        };
        match key {
            "events" => self.events = Some(path()),
            "follows" => self.follows = Some(path()),
            "clicks" => self.clicks = Some(path()),
            "graph" => self.graph = Some(path()),
            "out-dir" => self.out_dir = path(),
            "graph-type" => {
                self.graph_type = value.parse().map_err(|_| {
                    CliError::ConfigInvalid(format!(
                        "graph-type must be comention, rt or rt-follower, got {value:?}"
                    ))
                })?
            }
            "min-urls" => self.min_urls = parse_num(key, value)?,
            "iterations" => self.ip.max_iterations = parse_num(key, value)?,
            "epsilon" => self.ip.epsilon = parse_num(key, value)?,
            "damping" => self.pagerank.damping = parse_num(key, value)?,
            "pagerank-iterations" => self.pagerank.max_iterations = parse_num(key, value)?,
            "pagerank-epsilon" => self.pagerank.epsilon = parse_num(key, value)?,
            "q" => self.q = parse_num(key, value)?,
            "bins" => self.bins = parse_num(key, value)?,
            "top-k" => self.top_k = parse_num(key, value)?,
            "min-posted" => self.min_posted = parse_num(key, value)?,
            "measure" => self.measure = value.to_owned(),
            "against" => self.against = value.to_owned(),
            "threads" => self.threads = Some(parse_num(key, value)?),
            "mode" => {
                self.mode = match value {
                    "strict" => ParseMode::Strict,
                    "lenient" => ParseMode::Lenient,
                    _ => return Err(CliError::ConfigInvalid(format!("mode must be strict or lenient, got {value:?}"))),
                }
            }
            _ => return Err(CliError::ConfigInvalid(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a config file: `key = value` lines, `#` comments, blank lines.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => CliError::MissingInput(format!("config {}", path.display())),
            _ => CliError::io(path, e),
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        self.apply_text(&text, Some(&base))
    }

    pub fn apply_text(&mut self, text: &str, base: Option<&Path>) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::ConfigInvalid(format!("line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v, base)
                .map_err(|e| CliError::ConfigInvalid(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::ConfigInvalid(m));
        self.ip.validate().map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
        self.pagerank.validate().map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
        if !(self.q > 0.0 && self.q <= 1.0) {
            return bad(format!("q = {} outside (0, 1]", self.q));
        }
        if self.bins == 0 {
            return bad("bins must be at least 1".into());
        }
        if self.top_k == 0 {
            return bad("top-k must be at least 1".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        for (key, p) in [("events", &self.events), ("follows", &self.follows), ("clicks", &self.clicks), ("graph", &self.graph)] {
            if let Some(p) = p {
                if !p.is_file() {
                    return Err(CliError::MissingInput(format!("{key} file {} does not exist", p.display())));
                }
            }
        }
        Ok(())
    }

    /// Value of a non-path key as written to manifests.
    pub fn value_of(&self, key: &str) -> Option<String> {
        Some(match key {
            "graph-type" => self.graph_type.as_str().to_owned(),
            "min-urls" => self.min_urls.to_string(),
            "iterations" => self.ip.max_iterations.to_string(),
            "epsilon" => self.ip.epsilon.to_string(),
            "damping" => self.pagerank.damping.to_string(),
            "pagerank-iterations" => self.pagerank.max_iterations.to_string(),
            "pagerank-epsilon" => self.pagerank.epsilon.to_string(),
            "q" => self.q.to_string(),
            "bins" => self.bins.to_string(),
            "top-k" => self.top_k.to_string(),
            "min-posted" => self.min_posted.to_string(),
            "measure" => self.measure.clone(),
            "against" => self.against.clone(),
            "mode" => match self.mode {
                ParseMode::Strict => "strict",
                ParseMode::Lenient => "lenient",
            }
            .to_owned(),
            _ => return None,
        })
    }

    /// Parameters recorded in manifests: everything except paths and the
    /// thread count, which never changes results.
    pub fn manifest_params(&self) -> Vec<(&'static str, String)> {
        KEYS.iter()
            .filter(|k| !PATH_KEYS.contains(k) && **k != "threads")
            .filter_map(|k| self.value_of(k).map(|v| (*k, v)))
            .collect()
    }
}
