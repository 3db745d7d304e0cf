//! Subcommand implementations. Each command loads what it needs, computes,
//! and writes its artifacts into the output directory, every file prefixed
//! by its manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use influence_core::analytics::{self, percentile_curve, rank_correlation, rank_join, top_k};
use influence_core::baselines::{self, invert_graph, weighted_pagerank};
use influence_core::graph::{self, graph_stats};
use influence_core::ingest::{self, ParseReport};
use influence_core::ip::run_ip;
use influence_core::{
    ActivityLog, ClickTable, FollowEdgeList, GraphKind, InfluenceGraph, IterationTrace, ParseMode, ScorePair,
    ScoreVector,
};
use influence_testkit::synth::{synth_clicks, synth_trace, SynthParams};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::manifest::{sha256_hex, Manifest};

pub const TOOL: &str = "influence";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Build,
    Ip,
    Pagerank,
    Hindex,
    Rates,
    Curve,
    Rank,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Ip => "ip",
            Command::Pagerank => "pagerank",
            Command::Hindex => "hindex",
            Command::Rates => "rates",
            Command::Curve => "curve",
            Command::Rank => "rank",
            Command::Compare => "compare",
        }
    }
}

/// A per-user measure named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Measure {
    IpInfluence(Option<GraphKind>),
    IpPassivity(Option<GraphKind>),
    PageRank(Option<GraphKind>),
    HIndex,
    Retweets,
    Followers,
    PostedUrls,
    File(PathBuf),
}

impl Measure {
    /// `name`, `name@graph-type` for graph measures, or `file:<path>`.
    fn parse(spec: &str) -> Result<Self, CliError> {
        if let Some(p) = spec.strip_prefix("file:") {
            return Ok(Measure::File(PathBuf::from(p)));
        }
        let (name, kind) = match spec.split_once('@') {
            Some((n, k)) => {
                let kind = k.parse().map_err(CliError::ConfigInvalid)?;
                (n, Some(kind))
            }
            None => (spec, None),
        };
        let graph_only = |m: Measure| match kind {
            Some(_) => Err(CliError::ConfigInvalid(format!("measure {name} takes no graph type"))),
            None => Ok(m),
        };
        match name {
            "ip-influence" => Ok(Measure::IpInfluence(kind)),
            "ip-passivity" => Ok(Measure::IpPassivity(kind)),
            "pagerank" => Ok(Measure::PageRank(kind)),
            "hindex" => graph_only(Measure::HIndex),
            "retweets" => graph_only(Measure::Retweets),
            "followers" => graph_only(Measure::Followers),
            "posted-urls" => graph_only(Measure::PostedUrls),
            _ => Err(CliError::ConfigInvalid(format!(
                "unknown measure {spec:?} (ip-influence, ip-passivity, pagerank, hindex, retweets, followers, posted-urls, file:<path>)"
            ))),
        }
    }
}

/// Measure spec as it appears in file names.
fn file_stem(spec: &str) -> String {
    let spec = spec.strip_prefix("file:").map_or(spec, |p| {
        Path::new(p).file_stem().and_then(|s| s.to_str()).unwrap_or("file")
    });
    spec.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

/// Graph source: the configured graph file or a build of a given kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum GraphSource {
    File,
    Built(GraphKind),
}

struct Session<'a> {
    cfg: &'a RunConfig,
    command: &'static str,
    /// `(role, file name, sha256)` for every input read so far.
    inputs: Vec<(String, String, String)>,
    log: Option<ActivityLog>,
    follows: Option<FollowEdgeList>,
    clicks: Option<ClickTable>,
    graphs: BTreeMap<GraphSource, InfluenceGraph>,
    ip: BTreeMap<GraphSource, (ScorePair, IterationTrace)>,
    written: Vec<PathBuf>,
}

impl<'a> Session<'a> {
    fn new(cfg: &'a RunConfig, command: &'static str) -> Self {
        Self {
            cfg,
            command,
            inputs: Vec::new(),
            log: None,
            follows: None,
            clicks: None,
            graphs: BTreeMap::new(),
            ip: BTreeMap::new(),
            written: Vec::new(),
        }
    }

    fn read_input(&mut self, role: &str, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = fs::read(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => {
                CliError::MissingInput(format!("{role} file {} does not exist", path.display()))
            }
            _ => CliError::io(path, e),
        })?;
        if !self.inputs.iter().any(|(r, _, _)| r == role) {
            let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
            self.inputs.push((role.to_owned(), name, sha256_hex(&bytes)));
        }
        Ok(bytes)
    }

    fn required(&self, role: &str, path: &Option<PathBuf>) -> Result<PathBuf, CliError> {
        path.clone()
            .ok_or_else(|| CliError::MissingInput(format!("{} needs --{role}", self.command)))
    }

    fn warn_skipped(&self, role: &str, report: &ParseReport) {
        if let Some((line, reason)) = &report.first_skipped {
            eprintln!("warning: {role}: skipped {} malformed lines (first: line {line}: {reason})", report.skipped);
        }
    }

    fn log(&mut self) -> Result<&ActivityLog, CliError> {
        if self.log.is_none() {
            let path = self.required("events", &self.cfg.events)?;
            let bytes = self.read_input("events", &path)?;
            let (log, report) = ingest::parse_events(&bytes[..], self.cfg.mode)
                .map_err(|source| CliError::Ingest { path, source })?;
            self.warn_skipped("events", &report);
            self.log = Some(log);
        }
        Ok(self.log.as_ref().expect("loaded above"))
    }

    fn follows(&mut self) -> Result<&FollowEdgeList, CliError> {
        if self.follows.is_none() {
            let path = self.required("follows", &self.cfg.follows)?;
            let bytes = self.read_input("follows", &path)?;
            let (follows, report) = ingest::parse_follows(&bytes[..], self.cfg.mode)
                .map_err(|source| CliError::Ingest { path, source })?;
            self.warn_skipped("follows", &report);
            self.follows = Some(follows);
        }
        Ok(self.follows.as_ref().expect("loaded above"))
    }

    fn clicks(&mut self) -> Result<&ClickTable, CliError> {
        if self.clicks.is_none() {
            let path = self.required("clicks", &self.cfg.clicks)?;
            let bytes = self.read_input("clicks", &path)?;
            let (clicks, report) = ingest::parse_clicks(&bytes[..], self.cfg.mode)
                .map_err(|source| CliError::Ingest { path, source })?;
            self.warn_skipped("clicks", &report);
            self.clicks = Some(clicks);
        }
        Ok(self.clicks.as_ref().expect("loaded above"))
    }

    /// A graph file is used when configured and no kind is requested.
    fn source(&self, kind: Option<GraphKind>) -> GraphSource {
        match (kind, &self.cfg.graph) {
            (None, Some(_)) => GraphSource::File,
            (k, _) => GraphSource::Built(k.unwrap_or(self.cfg.graph_type)),
        }
    }

    fn graph(&mut self, src: GraphSource) -> Result<&InfluenceGraph, CliError> {
        if !self.graphs.contains_key(&src) {
            let g = match src {
                GraphSource::File => {
                    let path = self.required("graph", &self.cfg.graph)?;
                    let bytes = self.read_input("graph", &path)?;
                    InfluenceGraph::read_from(&bytes[..]).map_err(|source| CliError::GraphFile { path, source })?
                }
                GraphSource::Built(kind) => {
                    if kind.needs_follows() {
                        self.follows()?;
                    }
                    self.log()?;
                    let log = self.log.as_ref().expect("loaded above");
                    graph::build(kind, log, self.follows.as_ref(), self.cfg.min_urls)
                        .expect("follows loaded for kinds that need them")
                }
            };
            self.graphs.insert(src, g);
        }
        Ok(&self.graphs[&src])
    }

    fn ip(&mut self, src: GraphSource) -> Result<&(ScorePair, IterationTrace), CliError> {
        if !self.ip.contains_key(&src) {
            let params = self.cfg.ip;
            let result = run_ip(self.graph(src)?, &params)?;
            self.ip.insert(src, result);
        }
        Ok(&self.ip[&src])
    }

    fn measure(&mut self, spec: &str) -> Result<ScoreVector, CliError> {
        let mut scores = match Measure::parse(spec)? {
            Measure::IpInfluence(k) => self.ip(self.source(k))?.0.influence_vector(),
            Measure::IpPassivity(k) => self.ip(self.source(k))?.0.passivity_vector(),
            Measure::PageRank(k) => {
                let src = self.source(k);
                weighted_pagerank(&invert_graph(self.graph(src)?), &self.cfg.pagerank)?
            }
            Measure::HIndex => baselines::h_index_all(self.log()?),
            Measure::Retweets => baselines::retweet_count(self.log()?),
            Measure::PostedUrls => baselines::posted_url_count(self.log()?),
            Measure::Followers => baselines::follower_count(self.follows()?),
            Measure::File(path) => {
                let role = format!("scores:{}", file_stem(spec));
                let bytes = self.read_input(&role, &path)?;
                return ScoreVector::read_from(&bytes[..]).map_err(|source| CliError::ScoreFile { path, source });
            }
        };
        scores.label = spec.to_owned();
        Ok(scores)
    }

    fn manifest(&self, output: &str) -> Result<Manifest, CliError> {
        let mut m = Manifest::new();
        m.push("tool", TOOL)?;
        m.push("version", VERSION)?;
        m.push("command", self.command)?;
        m.push("output", output)?;
        for (role, name, sha) in &self.inputs {
            m.push(format!("input.{role}"), name.as_str())?;
            m.push(format!("input.{role}.sha256"), sha.as_str())?;
        }
        for (k, v) in self.cfg.manifest_params() {
            m.push(format!("param.{k}"), v)?;
        }
        Ok(m)
    }

    fn write<F>(&mut self, name: &str, body: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    {
        let dir = &self.cfg.out_dir;
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join(name);
        let mut buf = Vec::new();
        self.manifest(name)?.write_to(&mut buf).and_then(|_| body(&mut buf)).map_err(|e| CliError::io(&path, e))?;
        fs::write(&path, buf).map_err(|e| CliError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }
}

/// Runs one command and returns the paths it wrote.
pub fn run(command: Command, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut s = Session::new(cfg, command.name());
    match command {
        Command::Build => {
            let src = GraphSource::Built(cfg.graph_type);
            let g = s.graph(src)?.clone();
            s.write("graph.tsv", |out| g.write_to(out))?;
            let stats = graph_stats(&g);
            s.write("graph_stats.tsv", |out| stats.write_to(out))?;
        }
        Command::Ip => {
            let src = s.source(None);
            let (scores, trace) = s.ip(src)?.clone();
            s.write("ip_scores.tsv", |out| {
                writeln!(out, "#user\tinfluence\tpassivity")?;
                scores.write_to(&mut *out)?;
                writeln!(out, "#iterations={} converged={}", scores.iterations_run, scores.converged)
            })?;
            s.write("ip_trace.tsv", |out| {
                writeln!(out, "#iteration\tdelta")?;
                trace.write_to(out)
            })?;
        }
        Command::Pagerank => {
            let scores = s.measure("pagerank")?;
            s.write("pagerank.tsv", |out| scores.write_to(out))?;
        }
        Command::Hindex => {
            for spec in ["hindex", "retweets"] {
                let scores = s.measure(spec)?;
                s.write(&format!("{spec}.tsv"), |out| scores.write_to(out))?;
            }
            if cfg.follows.is_some() {
                let scores = s.measure("followers")?;
                s.write("followers.tsv", |out| scores.write_to(out))?;
            }
        }
        Command::Rates => {
            s.follows()?;
            s.log()?;
            let report = analytics::rate_report(
                s.log.as_ref().expect("loaded above"),
                s.follows.as_ref().expect("loaded above"),
            );
            s.write("rates.tsv", |out| report.write_to(out))?;
        }
        Command::Curve => {
            let scores = s.measure(&cfg.measure)?;
            s.clicks()?;
            let averages = analytics::url_attribute_average(s.log()?, &scores);
            let clicks = s.clicks.as_ref().expect("loaded above");
            let points: Vec<(f64, u64)> =
                averages.iter().filter_map(|(url, x)| clicks.get(url).map(|c| (*x, c))).collect();
            let curve = percentile_curve(&points, cfg.q, cfg.bins)?;
            s.write(&format!("curve_{}.tsv", file_stem(&cfg.measure)), |out| curve.write_to(out))?;
        }
        Command::Rank => {
            let scores = s.measure(&cfg.measure)?;
            let posted = if cfg.min_posted > 0 { Some(baselines::posted_url_count(s.log()?)) } else { None };
            let min = cfg.min_posted as f64;
            let report = top_k(&scores, cfg.top_k, |u, _| {
                posted.as_ref().is_none_or(|p| p.get(u).unwrap_or(0.0) >= min)
            });
            s.write(&format!("top_{}.tsv", file_stem(&cfg.measure)), |out| report.write_to(out))?;
        }
        Command::Compare => {
            let a = s.measure(&cfg.measure)?;
            let b = s.measure(&cfg.against)?;
            let rho = rank_correlation(&a, &b)?;
            let common = a.values.keys().filter(|u| b.values.contains_key(*u)).count();
            let join = rank_join(&a, &b);
            let name = format!("compare_{}_vs_{}.tsv", file_stem(&cfg.measure), file_stem(&cfg.against));
            s.write(&name, |out| {
                join.write_to(&mut *out)?;
                writeln!(out, "#spearman={} common={common}", influence_core::format::g17(rho))
            })?;
        }
    }
    Ok(s.written)
}

/// Writes a synthetic trace in the ingest formats: `events.tsv`,
/// `follows.tsv` and `clicks.tsv`.
pub fn synth(params: &SynthParams, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let (log, follows) = synth_trace(params).map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    let clicks = synth_clicks(&log, params.seed);
    let mut manifest = Manifest::new();
    manifest.push("tool", TOOL)?;
    manifest.push("version", VERSION)?;
    manifest.push("command", "synth")?;
    for (k, v) in [
        ("users", params.users.to_string()),
        ("broadcasters", params.broadcasters.to_string()),
        ("follow-prob", params.follow_prob.to_string()),
        ("mentions", params.mentions_per_user.to_string()),
        ("retweet-prob", params.retweet_prob.to_string()),
        ("url-pool", params.url_pool.to_string()),
        ("seed", params.seed.to_string()),
    ] {
        manifest.push(format!("param.{k}"), v)?;
    }

    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut written = Vec::new();
    let mut emit = |name: &str, body: &dyn Fn(&mut Vec<u8>) -> std::io::Result<()>| -> Result<(), CliError> {
        let path = out_dir.join(name);
        let mut m = manifest.clone();
        m.push("output", name)?;
        let mut buf = Vec::new();
        m.write_to(&mut buf).and_then(|_| body(&mut buf)).map_err(|e| CliError::io(&path, e))?;
        fs::write(&path, buf).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
        Ok(())
    };
    emit("events.tsv", &|out| log.write_to(out))?;
    emit("follows.tsv", &|out| follows.write_to(out))?;
    emit("clicks.tsv", &|out| {
        for (url, c) in &clicks.clicks {
            writeln!(out, "{url}\t{c}")?;
        }
        Ok(())
    })?;
    Ok(written)
}

/// Parse mode from the `--strict` / `--lenient` switches.
pub fn mode_flag(strict: bool, lenient: bool) -> Option<ParseMode> {
    match (strict, lenient) {
        (_, true) => Some(ParseMode::Lenient),
        (true, false) => Some(ParseMode::Strict),
        _ => None,
    }
}
