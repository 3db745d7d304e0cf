//! Weighted influence graphs and the three constructions from activity traces.
//!
//! An arc `(i, j)` with weight `w` in `(0, 1]` says that `j` took up the
//! fraction `w` of what `i` put in front of them. Nodes are kept sorted by
//! user id, and a [`NodeId`] is the position in that order, so every
//! per-node loop runs in ascending user-id order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::format;
use crate::ingest::{distinct_urls, ActivityLog, EventKind, FollowEdgeList, UrlId, UserId};
use crate::reduce;

pub type NodeId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("arc {from} -> {to}: weight {weight} outside (0, 1]")]
    InvalidWeight { from: String, to: String, weight: f64 },
    #[error("self-arc on {0}")]
    SelfArc(String),
    #[error("arc endpoint {0} is not a node")]
    UnknownNode(String),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(String, String),
    #[error("node names must be strictly ascending")]
    UnsortedNodes,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Weighted directed graph stored as forward and reverse CSR.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceGraph {
    names: Vec<UserId>,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    weights: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    /// For each reverse-CSR slot, the forward arc index.
    in_arcs: Vec<usize>,
}

impl InfluenceGraph {
    /// Builds a graph from named nodes and arcs. Node order is normalized to
    /// ascending user id; arc order is irrelevant.
    pub fn from_arcs(
        nodes: impl IntoIterator<Item = UserId>,
        arcs: impl IntoIterator<Item = (UserId, UserId, f64)>,
    ) -> Result<Self, GraphError> {
        let names: Vec<UserId> =
            nodes.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let lookup = |u: &UserId| -> Result<NodeId, GraphError> {
            names
                .binary_search(u)
                .map(|i| i as NodeId)
                .map_err(|_| GraphError::UnknownNode(u.to_string()))
        };
        let mut indexed = Vec::new();
        for (a, b, w) in arcs {
            indexed.push((lookup(&a)?, lookup(&b)?, w));
        }
        Self::from_indexed(names, indexed)
    }

    /// Builds a graph over `names` (strictly ascending) from index-based arcs.
    pub fn from_indexed(
        names: Vec<UserId>,
        mut arcs: Vec<(NodeId, NodeId, f64)>,
    ) -> Result<Self, GraphError> {
        if names.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GraphError::UnsortedNodes);
        }
        let n = names.len();
        let name = |i: NodeId| names[i as usize].to_string();
        arcs.sort_unstable_by_key(|a| (a.0, a.1));
        for (k, &(s, t, w)) in arcs.iter().enumerate() {
            if s as usize >= n || t as usize >= n {
                return Err(GraphError::UnknownNode(format!("#{}", s.max(t))));
            }
            if s == t {
                return Err(GraphError::SelfArc(name(s)));
            }
            if !(w > 0.0 && w <= 1.0) {
                return Err(GraphError::InvalidWeight { from: name(s), to: name(t), weight: w });
            }
            if k > 0 && (arcs[k - 1].0, arcs[k - 1].1) == (s, t) {
                return Err(GraphError::DuplicateArc(name(s), name(t)));
            }
        }

        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(s, t, _) in &arcs {
            out_offsets[s as usize + 1] += 1;
            in_offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let out_targets = arcs.iter().map(|a| a.1).collect();
        let weights = arcs.iter().map(|a| a.2).collect();

        // Arcs are sorted by (source, target), so filling buckets in arc order
        // leaves each in-list sorted by source.
        let m = arcs.len();
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![0; m];
        let mut in_arcs = vec![0; m];
        for (k, &(s, t, _)) in arcs.iter().enumerate() {
            let slot = &mut cursor[t as usize];
            in_sources[*slot] = s;
            in_arcs[*slot] = k;
            *slot += 1;
        }

        Ok(Self { names, out_offsets, out_targets, weights, in_offsets, in_sources, in_arcs })
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn arc_count(&self) -> usize {
        self.weights.len()
    }

    pub fn names(&self) -> &[UserId] {
        &self.names
    }

    pub fn name(&self, node: NodeId) -> &UserId {
        &self.names[node as usize]
    }

    pub fn node_id(&self, user: &UserId) -> Option<NodeId> {
        self.names.binary_search(user).ok().map(|i| i as NodeId)
    }

    /// Forward arc index range of `node`.
    pub fn out_range(&self, node: NodeId) -> std::ops::Range<usize> {
        self.out_offsets[node as usize]..self.out_offsets[node as usize + 1]
    }

    /// Reverse-CSR slot range of `node`; index [`Self::in_source`] and
    /// [`Self::in_arc`] with these slots.
    pub fn in_range(&self, node: NodeId) -> std::ops::Range<usize> {
        self.in_offsets[node as usize]..self.in_offsets[node as usize + 1]
    }

    pub fn target(&self, arc: usize) -> NodeId {
        self.out_targets[arc]
    }

    pub fn weight(&self, arc: usize) -> f64 {
        self.weights[arc]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn in_source(&self, slot: usize) -> NodeId {
        self.in_sources[slot]
    }

    pub fn in_arc(&self, slot: usize) -> usize {
        self.in_arcs[slot]
    }

    /// `(target, weight)` for each out-arc of `node`, ascending by target.
    pub fn out_arcs(&self, node: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.out_range(node).map(move |k| (self.out_targets[k], self.weights[k]))
    }

    /// `(source, weight)` for each in-arc of `node`, ascending by source.
    pub fn in_arcs(&self, node: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.in_range(node).map(move |s| (self.in_sources[s], self.weights[self.in_arcs[s]]))
    }

    pub fn out_degree(&self, node: NodeId) -> usize {
        self.out_range(node).len()
    }

    pub fn in_degree(&self, node: NodeId) -> usize {
        self.in_range(node).len()
    }

    /// All arcs as `(source, target, weight)`, ascending by `(source, target)`.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.node_count() as NodeId)
            .flat_map(move |s| self.out_arcs(s).map(move |(t, w)| (s, t, w)))
    }

    /// Weight of arc `from -> to`, if present.
    pub fn arc_weight(&self, from: NodeId, to: NodeId) -> Option<f64> {
        let r = self.out_range(from);
        self.out_targets[r.clone()]
            .binary_search(&to)
            .ok()
            .map(|k| self.weights[r.start + k])
    }

    /// Writes the graph file format: header, then per node either its
    /// out-arcs or an isolated-node line.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "#nodes={} arcs={}", self.node_count(), self.arc_count())?;
        for s in 0..self.node_count() as NodeId {
            if self.out_degree(s) == 0 && self.in_degree(s) == 0 {
                writeln!(out, "{}\t-\t-", self.name(s))?;
            }
            for (t, w) in self.out_arcs(s) {
                writeln!(out, "{}\t{}\t{}", self.name(s), self.name(t), format::shortest(w))?;
            }
        }
        Ok(())
    }

    /// Reads the format produced by [`Self::write_to`]. Other `#` lines are ignored.
    pub fn read_from<R: Read>(input: R) -> Result<Self, GraphError> {
        let mut nodes = BTreeSet::new();
        let mut arcs = Vec::new();
        let mut declared: Option<(usize, usize)> = None;
        for (i, line) in BufReader::new(input).lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let bad = |reason: String| GraphError::Parse { line: lineno, reason };
            if let Some(h) = line.strip_prefix("#nodes=") {
                let (n, m) = h
                    .split_once(" arcs=")
                    .and_then(|(n, m)| Some((n.parse().ok()?, m.trim().parse().ok()?)))
                    .ok_or_else(|| bad(format!("bad header {line:?}")))?;
                declared = Some((n, m));
                continue;
            }
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            match line.split('\t').collect::<Vec<_>>().as_slice() {
                [i, "-", "-"] => {
                    nodes.insert(UserId::from(*i));
                }
                [i, j, w] => {
                    let w: f64 = w.parse().map_err(|_| bad(format!("bad weight {w:?}")))?;
                    nodes.insert(UserId::from(*i));
                    nodes.insert(UserId::from(*j));
                    arcs.push((UserId::from(*i), UserId::from(*j), w));
                }
                _ => return Err(bad(format!("expected i<TAB>j<TAB>w, got {line:?}"))),
            }
        }
        let g = Self::from_arcs(nodes, arcs)?;
        if let Some((n, m)) = declared {
            if (n, m) != (g.node_count(), g.arc_count()) {
                return Err(GraphError::Parse {
                    line: 0,
                    reason: format!(
                        "header declares {n} nodes / {m} arcs, body has {} / {}",
                        g.node_count(),
                        g.arc_count()
                    ),
                });
            }
        }
        Ok(g)
    }
}

/// Which construction to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphKind {
    /// Follower mentions a URL after the followee did.
    Comention,
    /// Explicit retweet credits.
    Retweet,
    /// Retweet credits restricted to follower pairs.
    RetweetFollower,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Comention => "comention",
            GraphKind::Retweet => "rt",
            GraphKind::RetweetFollower => "rt-follower",
        }
    }

    pub fn needs_follows(self) -> bool {
        !matches!(self, GraphKind::Retweet)
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "comention" => Ok(GraphKind::Comention),
            "rt" => Ok(GraphKind::Retweet),
            "rt-follower" => Ok(GraphKind::RetweetFollower),
            other => Err(format!("unknown graph type {other:?} (comention, rt, rt-follower)")),
        }
    }
}

/// Users with at least `min_urls` distinct URLs. `min_urls = 0` behaves as 1.
fn eligible_users(log: &ActivityLog, min_urls: usize) -> BTreeSet<&UserId> {
    distinct_urls(log)
        .into_iter()
        .filter(|(_, urls)| urls.len() >= min_urls.max(1))
        .map(|(u, _)| u)
        .collect()
}

fn assemble(nodes: BTreeSet<&UserId>, arcs: Vec<(&UserId, &UserId, f64)>) -> InfluenceGraph {
    InfluenceGraph::from_arcs(
        nodes.into_iter().cloned(),
        arcs.into_iter().map(|(a, b, w)| (a.clone(), b.clone(), w)),
    )
    .expect("builders only emit valid arcs")
}

/// Co-mention graph: arc `(i, j)` when `j` follows `i` and mentioned at least
/// one URL strictly after `i` first mentioned it.
///
/// `S_ij` counts such URLs, `F_ij` counts URLs of `i` that `j` never
/// mentioned, and the weight is `S / (F + S)`.
pub fn build_comention(
    log: &ActivityLog,
    follows: &FollowEdgeList,
    min_urls: usize,
) -> InfluenceGraph {
    let nodes = eligible_users(log, min_urls);
    // user -> url -> (first time, last time)
    let mut spans: BTreeMap<&UserId, BTreeMap<&UrlId, (i64, i64)>> = BTreeMap::new();
    for e in log.events() {
        if !nodes.contains(&e.user) {
            continue;
        }
        spans
            .entry(&e.user)
            .or_default()
            .entry(&e.url)
            .and_modify(|s| {
                s.0 = s.0.min(e.time);
                s.1 = s.1.max(e.time);
            })
            .or_insert((e.time, e.time));
    }

    let mut arcs = Vec::new();
    for (i, j) in follows.iter() {
        let (Some(si), Some(sj)) = (spans.get(i), spans.get(j)) else {
            continue;
        };
        let mut s = 0usize;
        let mut f = 0usize;
        for (url, &(first_i, _)) in si {
            match sj.get(url) {
                Some(&(_, last_j)) if last_j > first_i => s += 1,
                Some(_) => {}
                None => f += 1,
            }
        }
        if s > 0 {
            arcs.push((i, j, s as f64 / (f + s) as f64));
        }
    }
    assemble(nodes, arcs)
}

/// Retweet graph: arc `(i, j)` when `j` retweeted, crediting `i`, a URL that
/// `i` mentioned. Weight is `S_ij / P_i` with `P_i` the distinct URLs of `i`.
pub fn build_retweet(log: &ActivityLog, min_urls: usize) -> InfluenceGraph {
    retweet_arcs(log, None, min_urls)
}

/// [`build_retweet`] restricted to pairs where `j` follows `i`.
pub fn build_retweet_follower(
    log: &ActivityLog,
    follows: &FollowEdgeList,
    min_urls: usize,
) -> InfluenceGraph {
    retweet_arcs(log, Some(follows), min_urls)
}

fn retweet_arcs(
    log: &ActivityLog,
    follows: Option<&FollowEdgeList>,
    min_urls: usize,
) -> InfluenceGraph {
    let posted = distinct_urls(log);
    let nodes = eligible_users(log, min_urls);
    let mut shared: BTreeMap<(&UserId, &UserId), BTreeSet<&UrlId>> = BTreeMap::new();
    for e in log.events() {
        let EventKind::Retweet { source } = &e.kind else {
            continue;
        };
        if !nodes.contains(source) || !nodes.contains(&e.user) {
            continue;
        }
        if !posted.get(source).is_some_and(|urls| urls.contains(&e.url)) {
            continue;
        }
        shared.entry((source, &e.user)).or_default().insert(&e.url);
    }
    let arcs = shared
        .into_iter()
        .filter(|((i, j), _)| follows.is_none_or(|f| f.contains(i, j)))
        .map(|((i, j), urls)| (i, j, urls.len() as f64 / posted[i].len() as f64))
        .collect();
    assemble(nodes, arcs)
}

/// Dispatches to the builder for `kind`. `follows` is required for the
/// follower-based constructions.
pub fn build(
    kind: GraphKind,
    log: &ActivityLog,
    follows: Option<&FollowEdgeList>,
    min_urls: usize,
) -> Option<InfluenceGraph> {
    Some(match kind {
        GraphKind::Comention => build_comention(log, follows?, min_urls),
        GraphKind::Retweet => build_retweet(log, min_urls),
        GraphKind::RetweetFollower => build_retweet_follower(log, follows?, min_urls),
    })
}

pub const HISTOGRAM_BINS: usize = 10;

/// Summary counts of a graph. The histogram has [`HISTOGRAM_BINS`] equal-width
/// bins over `[0, 1]`; weight 1 falls in the last bin.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub nodes: usize,
    pub arcs: usize,
    pub mean_weight: f64,
    pub histogram: [usize; HISTOGRAM_BINS],
}

pub fn graph_stats(g: &InfluenceGraph) -> GraphStats {
    let mut histogram = [0usize; HISTOGRAM_BINS];
    for &w in g.weights() {
        let bin = ((w * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        histogram[bin] += 1;
    }
    let mean_weight = if g.arc_count() == 0 {
        0.0
    } else {
        reduce::sum(g.weights()) / g.arc_count() as f64
    };
    GraphStats { nodes: g.node_count(), arcs: g.arc_count(), mean_weight, histogram }
}

impl GraphStats {
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "nodes\t{}", self.nodes)?;
        writeln!(out, "arcs\t{}", self.arcs)?;
        writeln!(out, "mean_weight\t{}", format::g17(self.mean_weight))?;
        for (k, c) in self.histogram.iter().enumerate() {
            let lo = k as f64 / HISTOGRAM_BINS as f64;
            let hi = (k + 1) as f64 / HISTOGRAM_BINS as f64;
            writeln!(out, "bin[{lo:.1},{hi:.1}]\t{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::TweetEvent;

    fn u(s: &str) -> UserId {
        UserId::from(s)
    }

    fn follows(pairs: &[(&str, &str)]) -> FollowEdgeList {
        FollowEdgeList::from_pairs(pairs.iter().map(|(a, b)| (u(a), u(b)))).unwrap()
    }

    fn log(events: Vec<TweetEvent>) -> ActivityLog {
        ActivityLog::from_events(events).unwrap()
    }

    fn weight(g: &InfluenceGraph, a: &str, b: &str) -> Option<f64> {
        g.arc_weight(g.node_id(&u(a))?, g.node_id(&u(b))?)
    }

    fn comention_fixture(j_first: i64) -> ActivityLog {
        log(vec![
            TweetEvent::mention(1, "i", "a"),
            TweetEvent::mention(2, "i", "b"),
            TweetEvent::mention(3, "i", "c"),
            TweetEvent::mention(j_first, "j", "a"),
            TweetEvent::mention(6, "j", "d"),
            TweetEvent::mention(7, "j", "e"),
        ])
    }

    #[test]
    fn comention_weight_one_third() {
        let g = build_comention(&comention_fixture(5), &follows(&[("i", "j")]), 3);
        assert_eq!(g.arc_count(), 1);
        assert_eq!(weight(&g, "i", "j"), Some(1.0 / 3.0));
    }

    #[test]
    fn comention_requires_follow() {
        let g = build_comention(&comention_fixture(5), &follows(&[("j", "i")]), 3);
        assert_eq!(weight(&g, "i", "j"), None);
    }

    #[test]
    fn comention_earlier_mention_is_not_influence() {
        let g = build_comention(&comention_fixture(0), &follows(&[("i", "j")]), 3);
        assert_eq!(g.arc_count(), 0);
        // Equal timestamps do not count either.
        let g = build_comention(&comention_fixture(1), &follows(&[("i", "j")]), 3);
        assert_eq!(g.arc_count(), 0);
    }

    fn retweet_fixture(retweeted: &[&str]) -> ActivityLog {
        let mut ev = vec![
            TweetEvent::mention(1, "i", "a"),
            TweetEvent::mention(2, "i", "b"),
            TweetEvent::mention(3, "i", "c"),
            TweetEvent::mention(4, "j", "x"),
            TweetEvent::mention(5, "j", "y"),
        ];
        for (k, url) in retweeted.iter().enumerate() {
            ev.push(TweetEvent::retweet(10 + k as i64, "j", *url, "i"));
        }
        log(ev)
    }

    #[test]
    fn retweet_weights() {
        let g = build_retweet(&retweet_fixture(&["a"]), 3);
        assert_eq!(weight(&g, "i", "j"), Some(1.0 / 3.0));
        assert_eq!(g.arc_count(), 1);

        let g = build_retweet(&retweet_fixture(&[]), 2);
        assert_eq!(g.arc_count(), 0);
        assert_eq!(g.node_count(), 2);

        let g = build_retweet(&retweet_fixture(&["a", "b", "c"]), 3);
        assert_eq!(weight(&g, "i", "j"), Some(1.0));

        // Repeated retweets of one URL count once.
        let g = build_retweet(&retweet_fixture(&["a", "a"]), 3);
        assert_eq!(weight(&g, "i", "j"), Some(1.0 / 3.0));
    }

    #[test]
    fn retweet_of_unposted_url_is_ignored() {
        let mut ev = retweet_fixture(&[]).events().to_vec();
        ev.push(TweetEvent::retweet(20, "j", "zzz", "i"));
        let g = build_retweet(&log(ev), 3);
        assert_eq!(g.arc_count(), 0);
    }

    #[test]
    fn node_filter_applies_to_both_endpoints() {
        // j has only 2 distinct URLs + 1 retweet = 3; at min_urls 4 j is dropped.
        let g = build_retweet(&retweet_fixture(&["a"]), 4);
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.arc_count(), 0);
    }

    #[test]
    fn retweet_follower_conjunction() {
        let l = retweet_fixture(&["a"]);
        let both = build_retweet_follower(&l, &follows(&[("i", "j")]), 3);
        assert_eq!(weight(&both, "i", "j"), Some(1.0 / 3.0));
        let no_follow = build_retweet_follower(&l, &follows(&[("j", "i")]), 3);
        assert_eq!(no_follow.arc_count(), 0);
        let no_rt = build_retweet_follower(&retweet_fixture(&[]), &follows(&[("i", "j")]), 3);
        assert_eq!(no_rt.arc_count(), 0);
    }

    #[test]
    fn stats() {
        let g = InfluenceGraph::from_arcs(
            [u("a"), u("b"), u("c")],
            [(u("a"), u("b"), 0.2), (u("b"), u("c"), 0.6)],
        )
        .unwrap();
        let s = graph_stats(&g);
        assert_eq!((s.nodes, s.arcs), (3, 2));
        assert!((s.mean_weight - 0.4).abs() < 1e-15);
        assert_eq!(s.histogram[2] + s.histogram[1], 1);
        assert_eq!(s.histogram[6] + s.histogram[5], 1);

        let empty = graph_stats(&InfluenceGraph::from_arcs([], []).unwrap());
        assert_eq!((empty.nodes, empty.arcs, empty.mean_weight), (0, 0, 0.0));
        assert_eq!(empty.histogram.iter().sum::<usize>(), 0);

        let one = InfluenceGraph::from_arcs([u("a"), u("b")], [(u("a"), u("b"), 1.0)]).unwrap();
        assert_eq!(graph_stats(&one).histogram[HISTOGRAM_BINS - 1], 1);
    }

    #[test]
    fn invalid_graphs_rejected() {
        let ab = || [u("a"), u("b")];
        assert!(matches!(
            InfluenceGraph::from_arcs(ab(), [(u("a"), u("b"), 0.0)]),
            Err(GraphError::InvalidWeight { .. })
        ));
        assert!(matches!(
            InfluenceGraph::from_arcs(ab(), [(u("a"), u("b"), 1.5)]),
            Err(GraphError::InvalidWeight { .. })
        ));
        assert!(matches!(
            InfluenceGraph::from_arcs(ab(), [(u("a"), u("b"), f64::NAN)]),
            Err(GraphError::InvalidWeight { .. })
        ));
        assert!(matches!(
            InfluenceGraph::from_arcs(ab(), [(u("a"), u("a"), 0.5)]),
            Err(GraphError::SelfArc(_))
        ));
        assert!(matches!(
            InfluenceGraph::from_arcs(ab(), [(u("a"), u("z"), 0.5)]),
            Err(GraphError::UnknownNode(_))
        ));
        assert!(matches!(
            InfluenceGraph::from_arcs(ab(), [(u("a"), u("b"), 0.5), (u("a"), u("b"), 0.4)]),
            Err(GraphError::DuplicateArc(..))
        ));
        assert!(matches!(
            InfluenceGraph::from_indexed(vec![u("b"), u("a")], vec![]),
            Err(GraphError::UnsortedNodes)
        ));
    }

    #[test]
    fn csr_views_agree() {
        let g = InfluenceGraph::from_arcs(
            [u("a"), u("b"), u("c"), u("d")],
            [(u("c"), u("a"), 0.3), (u("a"), u("c"), 0.1), (u("b"), u("c"), 0.7)],
        )
        .unwrap();
        let c = g.node_id(&u("c")).unwrap();
        assert_eq!(g.in_arcs(c).collect::<Vec<_>>(), vec![(0, 0.1), (1, 0.7)]);
        assert_eq!(g.out_arcs(c).collect::<Vec<_>>(), vec![(0, 0.3)]);
        assert_eq!(g.in_degree(3) + g.out_degree(3), 0);
    }

    #[test]
    fn graph_file_round_trip() {
        let g = InfluenceGraph::from_arcs(
            [u("a"), u("b"), u("c"), u("lonely")],
            [(u("a"), u("b"), 1.0 / 3.0), (u("b"), u("c"), 0.07), (u("c"), u("a"), 1.0)],
        )
        .unwrap();
        let mut buf = Vec::new();
        g.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("#nodes=4 arcs=3\n"));
        assert!(text.contains("a\tb\t0.3333333333333333\n"));
        assert!(text.contains("lonely\t-\t-\n"));
        let back = InfluenceGraph::read_from(buf.as_slice()).unwrap();
        assert_eq!(back, g);

        let bad = "#nodes=3 arcs=1\na\tb\t0.5\n";
        assert!(InfluenceGraph::read_from(bad.as_bytes()).is_err());
    }
}
