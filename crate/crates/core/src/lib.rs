//! Influence ranking over social activity traces.
//!
//! The crate is organised as a pipeline:
//!
//! - [`ingest`] parses event, follower and click files into validated structures.
//! - [`graph`] turns an [`ActivityLog`] (and optionally a [`FollowEdgeList`]) into a
//!   weighted [`InfluenceGraph`] using one of three constructions.
//! - [`ip`] computes acceptance and rejection rates and runs the
//!   influence-passivity fixed-point iteration.
//! - [`baselines`] provides weighted PageRank on the inverted graph, the
//!   retweet H-index, and follower / retweet counts.
//! - [`analytics`] holds the evaluation computations: retweeting rates,
//!   per-URL attribute averages, percentile-bound curves, rank correlation and
//!   top-k reports.
//!
//! All numeric reductions go through [`reduce`], which fixes the summation
//! order so results are bit-identical for any rayon thread count.

pub mod analytics;
pub mod baselines;
pub mod format;
pub mod graph;
pub mod ingest;
pub mod ip;
pub mod reduce;

pub use analytics::{PercentileCurve, RankReport, RateReport};
pub use baselines::{PageRankParams, ScoreVector};
pub use graph::{GraphKind, GraphStats, InfluenceGraph, NodeId};
pub use ingest::{
    ActivityLog, ClickTable, EventKind, FollowEdgeList, ParseMode, TweetEvent, UrlId, UserId,
};
pub use ip::{IpParams, IterationTrace, RateView, ScorePair};
