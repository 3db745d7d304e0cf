//! Comparison measures: weighted PageRank, retweet H-index, follower and
//! retweet counts.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::format;
use crate::graph::{InfluenceGraph, NodeId};
use crate::ingest::{distinct_urls, ActivityLog, FollowEdgeList, UrlId, UserId};
use crate::reduce;

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("graph has no nodes")]
    EmptyNodeSet,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A named per-user measure.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreVector {
    pub label: String,
    pub values: BTreeMap<UserId, f64>,
}

impl ScoreVector {
    pub fn new(label: impl Into<String>, values: impl IntoIterator<Item = (UserId, f64)>) -> Self {
        Self { label: label.into(), values: values.into_iter().collect() }
    }

    pub fn get(&self, user: &UserId) -> Option<f64> {
        self.values.get(user).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Users by descending value, ties by ascending user id.
    pub fn ranking(&self) -> Vec<(&UserId, f64)> {
        let mut rows: Vec<(&UserId, f64)> = self.values.iter().map(|(u, v)| (u, *v)).collect();
        rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        rows
    }

    /// `#measure=<label>` header, then `user<TAB>value` lines.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "#measure={}", self.label)?;
        for (u, v) in &self.values {
            writeln!(out, "{u}\t{}", format::g17(*v))?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self, BaselineError> {
        let mut sv = ScoreVector::default();
        for (i, line) in BufReader::new(input).lines().enumerate() {
            let bad = |reason: String| BaselineError::Parse { line: i + 1, reason };
            let line = line.map_err(|e| bad(e.to_string()))?;
            if let Some(label) = line.strip_prefix("#measure=") {
                sv.label = label.to_owned();
                continue;
            }
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let (u, v) = line.split_once('\t').ok_or_else(|| bad(format!("{line:?}")))?;
            let v: f64 = v.parse().map_err(|_| bad(format!("bad value {v:?}")))?;
            sv.values.insert(UserId::from(u), v);
        }
        Ok(sv)
    }
}

/// Reverses every arc, keeping its weight.
pub fn invert_graph(g: &InfluenceGraph) -> InfluenceGraph {
    InfluenceGraph::from_indexed(g.names().to_vec(), g.arcs().map(|(s, t, w)| (t, s, w)).collect())
        .expect("reversing a valid graph yields a valid graph")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankParams {
    pub damping: f64,
    /// L1 change threshold between iterations.
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        Self { damping: 0.85, epsilon: 1e-12, max_iterations: 200 }
    }
}

impl PageRankParams {
    pub fn validate(&self) -> Result<(), BaselineError> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(BaselineError::InvalidParams(format!(
                "damping {} outside (0, 1)",
                self.damping
            )));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 || self.max_iterations == 0 {
            return Err(BaselineError::InvalidParams(
                "epsilon must be >= 0 and max_iterations >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Damped power iteration where the surfer at `i` moves to `j` with
/// probability `w_ij / Σ_k w_ik`. Teleport is uniform and dangling nodes
/// spread their mass uniformly. Pass the inverted graph to rank influencers.
pub fn weighted_pagerank(
    g: &InfluenceGraph,
    params: &PageRankParams,
) -> Result<ScoreVector, BaselineError> {
    params.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(BaselineError::EmptyNodeSet);
    }
    let d = params.damping;
    let out_total: Vec<f64> =
        (0..n as NodeId).into_par_iter().map(|i| g.out_arcs(i).map(|(_, w)| w).sum()).collect();
    let dangling: Vec<NodeId> = (0..n as NodeId).filter(|&i| g.out_degree(i) == 0).collect();

    let mut rank = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut dangling_mass = vec![0.0; dangling.len()];
    for _ in 0..params.max_iterations {
        for (slot, &i) in dangling_mass.iter_mut().zip(&dangling) {
            *slot = rank[i as usize];
        }
        let base = (1.0 - d) / n as f64 + d * reduce::sum(&dangling_mass) / n as f64;
        next.par_iter_mut().enumerate().for_each(|(j, x)| {
            let inflow: f64 = g
                .in_range(j as NodeId)
                .map(|s| {
                    let src = g.in_source(s) as usize;
                    rank[src] * g.weight(g.in_arc(s)) / out_total[src]
                })
                .sum();
            *x = base + d * inflow;
        });
        let total = reduce::sum(&next);
        reduce::scale_in_place(&mut next, total);
        let change = reduce::l1_distance(&next, &rank);
        std::mem::swap(&mut rank, &mut next);
        if change < params.epsilon {
            break;
        }
    }
    Ok(ScoreVector::new("pagerank", g.names().iter().cloned().zip(rank)))
}

/// Largest `h` such that at least `h` entries are `>= h`.
pub fn h_index_from_counts(counts: &[u64]) -> u64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.iter().enumerate().take_while(|(i, &c)| c > *i as u64).count() as u64
}

/// Retweet events crediting each user, per URL that user posted.
fn retweet_counts_per_url(log: &ActivityLog) -> BTreeMap<&UserId, BTreeMap<&UrlId, u64>> {
    let posted = distinct_urls(log);
    let mut out: BTreeMap<&UserId, BTreeMap<&UrlId, u64>> = BTreeMap::new();
    for e in log.events() {
        let Some(source) = e.source() else { continue };
        if posted.get(source).is_some_and(|urls| urls.contains(&e.url)) {
            *out.entry(source).or_default().entry(&e.url).or_default() += 1;
        }
    }
    out
}

/// H-index of `user`: `h` of their posted URLs were each retweeted (credited
/// to them) at least `h` times. Every retweet event counts.
pub fn h_index(log: &ActivityLog, user: &UserId) -> u64 {
    let counts: Vec<u64> = retweet_counts_per_url(log)
        .get(user)
        .map(|m| m.values().copied().collect())
        .unwrap_or_default();
    h_index_from_counts(&counts)
}

/// H-index of every author in the log.
pub fn h_index_all(log: &ActivityLog) -> ScoreVector {
    let per_url = retweet_counts_per_url(log);
    ScoreVector::new(
        "hindex",
        log.users().map(|u| {
            let counts: Vec<u64> =
                per_url.get(u).map(|m| m.values().copied().collect()).unwrap_or_default();
            (u.clone(), h_index_from_counts(&counts) as f64)
        }),
    )
}

/// Followers per user, over every user appearing in the follow list.
pub fn follower_count(follows: &FollowEdgeList) -> ScoreVector {
    let mut values: BTreeMap<UserId, f64> = BTreeMap::new();
    for (followee, follower) in follows.iter() {
        *values.entry(followee.clone()).or_default() += 1.0;
        values.entry(follower.clone()).or_default();
    }
    ScoreVector { label: "followers".into(), values }
}

/// Retweet events crediting each user, over authors and credited sources.
pub fn retweet_count(log: &ActivityLog) -> ScoreVector {
    let mut values: BTreeMap<UserId, f64> = log.users().map(|u| (u.clone(), 0.0)).collect();
    for source in log.events().iter().filter_map(|e| e.source()) {
        *values.entry(source.clone()).or_default() += 1.0;
    }
    ScoreVector { label: "retweets".into(), values }
}

/// Distinct URLs posted per author, as a score vector (used for eligibility
/// predicates in reports).
pub fn posted_url_count(log: &ActivityLog) -> ScoreVector {
    ScoreVector::new(
        "posted-urls",
        distinct_urls(log).into_iter().map(|(u, s)| (u.clone(), s.len() as f64)),
    )
}

/// Users that authored any event or were credited by one.
pub fn known_users(log: &ActivityLog) -> BTreeSet<&UserId> {
    log.users().chain(log.events().iter().filter_map(|e| e.source())).collect()
}
