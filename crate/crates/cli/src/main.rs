use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use influence_cli::commands::mode_flag;
use influence_cli::{exit, CliError, Command, RunConfig};
use influence_core::ParseMode;
use influence_testkit::synth::SynthParams;

/// Influence-passivity ranking over social activity traces.
#[derive(Parser)]
#[command(name = "influence", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the influence graph: graph.tsv and graph_stats.tsv.
    Build(Common),
    /// IP scores and convergence trace: ip_scores.tsv and ip_trace.tsv.
    Ip(Common),
    /// Weighted PageRank on the inverted graph: pagerank.tsv.
    Pagerank(Common),
    /// H-index and count baselines: hindex.tsv, retweets.tsv, followers.tsv.
    Hindex(Common),
    /// User and audience retweeting rates: rates.tsv.
    Rates(Common),
    /// Percentile-bound click curve for --measure: curve_<measure>.tsv.
    Curve(Common),
    /// Top-k users by --measure: top_<measure>.tsv.
    Rank(Common),
    /// Rank join and Spearman correlation of --measure against --against.
    Compare(Common),
    /// Write a seeded synthetic trace: events.tsv, follows.tsv, clicks.tsv.
    Synth(SynthArgs),
}

/// Every flag mirrors the config key of the same name and overrides it.
#[derive(Args)]
struct Common {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    events: Option<PathBuf>,
    #[arg(long)]
    follows: Option<PathBuf>,
    #[arg(long)]
    clicks: Option<PathBuf>,
    /// Precomputed graph file, used instead of building from events.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// comention, rt or rt-follower.
    #[arg(long)]
    graph_type: Option<String>,
    #[arg(long)]
    min_urls: Option<usize>,
    /// Maximum IP iterations.
    #[arg(long)]
    iterations: Option<usize>,
    /// IP early-stop threshold on the per-iteration delta.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    damping: Option<f64>,
    #[arg(long)]
    pagerank_iterations: Option<usize>,
    #[arg(long)]
    pagerank_epsilon: Option<f64>,
    /// Percentile for click curves.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    top_k: Option<usize>,
    /// Top-k eligibility: minimum distinct URLs posted.
    #[arg(long)]
    min_posted: Option<usize>,
    /// ip-influence, ip-passivity or pagerank (optionally `@graph-type`),
    /// hindex, retweets, followers, posted-urls, or file:<scores.tsv>.
    #[arg(long)]
    measure: Option<String>,
    /// Second measure for compare.
    #[arg(long)]
    against: Option<String>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Fail on the first malformed input line (default).
    #[arg(long, conflicts_with = "lenient")]
    strict: bool,
    /// Skip malformed input lines with a warning.
    #[arg(long)]
    lenient: bool,
}

impl Common {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let text = |x: Option<String>| x;
        [
            ("events", path(&self.events)),
            ("follows", path(&self.follows)),
            ("clicks", path(&self.clicks)),
            ("graph", path(&self.graph)),
            ("out-dir", path(&self.out_dir)),
            ("graph-type", self.graph_type.clone()),
            ("min-urls", self.min_urls.map(|x| x.to_string())),
            ("iterations", self.iterations.map(|x| x.to_string())),
            ("epsilon", self.epsilon.map(|x| x.to_string())),
            ("damping", self.damping.map(|x| x.to_string())),
            ("pagerank-iterations", self.pagerank_iterations.map(|x| x.to_string())),
            ("pagerank-epsilon", self.pagerank_epsilon.map(|x| x.to_string())),
            ("q", self.q.map(|x| x.to_string())),
            ("bins", self.bins.map(|x| x.to_string())),
            ("top-k", self.top_k.map(|x| x.to_string())),
            ("min-posted", self.min_posted.map(|x| x.to_string())),
            ("measure", text(self.measure.clone())),
            ("against", text(self.against.clone())),
            ("threads", self.threads.map(|x| x.to_string())),
            (
                "mode",
                mode_flag(self.strict, self.lenient).map(|m| match m {
                    ParseMode::Strict => "strict".to_owned(),
                    ParseMode::Lenient => "lenient".to_owned(),
                }),
            ),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }

    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        for (k, v) in self.overrides() {
            cfg.set(k, &v, None)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    users: Option<usize>,
    #[arg(long)]
    broadcasters: Option<usize>,
    #[arg(long)]
    follow_prob: Option<f64>,
    /// Posts per ordinary user; broadcasters post three times as many.
    #[arg(long)]
    mentions: Option<usize>,
    #[arg(long)]
    retweet_prob: Option<f64>,
    #[arg(long)]
    url_pool: Option<usize>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

impl SynthArgs {
    fn params(&self) -> SynthParams {
        let d = SynthParams::default();
        SynthParams {
            users: self.users.unwrap_or(d.users),
            broadcasters: self.broadcasters.unwrap_or(d.broadcasters),
            follow_prob: self.follow_prob.unwrap_or(d.follow_prob),
            mentions_per_user: self.mentions.unwrap_or(d.mentions_per_user),
            retweet_prob: self.retweet_prob.unwrap_or(d.retweet_prob),
            url_pool: self.url_pool.unwrap_or(d.url_pool),
            seed: self.seed,
        }
    }
}

fn execute(cmd: Cmd) -> Result<Vec<PathBuf>, CliError> {
    let (command, common) = match cmd {
        Cmd::Synth(args) => return influence_cli::synth(&args.params(), &args.out_dir),
        Cmd::Build(c) => (Command::Build, c),
        Cmd::Ip(c) => (Command::Ip, c),
        Cmd::Pagerank(c) => (Command::Pagerank, c),
        Cmd::Hindex(c) => (Command::Hindex, c),
        Cmd::Rates(c) => (Command::Rates, c),
        Cmd::Curve(c) => (Command::Curve, c),
        Cmd::Rank(c) => (Command::Rank, c),
        Cmd::Compare(c) => (Command::Compare, c),
    };
    let cfg = common.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::ConfigInvalid(format!("thread pool: {e}")))?;
    pool.install(|| influence_cli::run(command, &cfg))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.cmd) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::from(exit::OK as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
