//! Evaluation computations: retweeting rates, per-URL attribute averages,
//! percentile-bound curves, rank correlation and top-k reports.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use thiserror::Error;

use crate::baselines::ScoreVector;
use crate::format;
use crate::ingest::{ActivityLog, FollowEdgeList, UrlId, UserId};

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("no points with a positive attribute value")]
    NoData,
    #[error("score vectors share {common} users, need at least 2")]
    InsufficientOverlap { common: usize },
    #[error("a score vector is constant over the shared users")]
    ZeroVariance,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Shared indexes for the retweeting-rate computations.
///
/// Receptions use the static follower snapshot for the whole trace: every
/// event authored by a followee counts as one URL received by the follower.
pub struct RateContext<'a> {
    log: &'a ActivityLog,
    followees: BTreeMap<&'a UserId, Vec<&'a UserId>>,
    followers: BTreeMap<&'a UserId, Vec<&'a UserId>>,
    /// `(retweeter, credited source, url)`
    retweets: BTreeSet<(&'a UserId, &'a UserId, &'a UrlId)>,
}

impl<'a> RateContext<'a> {
    pub fn new(log: &'a ActivityLog, follows: &'a FollowEdgeList) -> Self {
        let retweets = log
            .events()
            .iter()
            .filter_map(|e| e.source().map(|s| (&e.user, s, &e.url)))
            .collect();
        Self {
            log,
            followees: follows.followees_index(),
            followers: follows.followers_index(),
            retweets,
        }
    }

    /// Fraction of URLs received from followees that `user` retweeted
    /// crediting that followee. `None` when nothing was received.
    pub fn user_retweeting_rate(&self, user: &UserId) -> Option<f64> {
        let mut received = 0u64;
        let mut retweeted = 0u64;
        for followee in self.followees.get(user).into_iter().flatten() {
            for e in self.log.events_of(followee) {
                received += 1;
                if self.retweets.contains(&(user, *followee, &e.url)) {
                    retweeted += 1;
                }
            }
        }
        (received > 0).then(|| retweeted as f64 / received as f64)
    }

    /// Fraction of (post by `user`, follower) deliveries that the follower
    /// retweeted crediting `user`. `None` without followers or posts.
    pub fn audience_retweeting_rate(&self, user: &UserId) -> Option<f64> {
        let followers = self.followers.get(user)?;
        let mut delivered = 0u64;
        let mut retweeted = 0u64;
        for e in self.log.events_of(user) {
            for follower in followers {
                delivered += 1;
                if self.retweets.contains(&(*follower, user, &e.url)) {
                    retweeted += 1;
                }
            }
        }
        (delivered > 0).then(|| retweeted as f64 / delivered as f64)
    }
}

pub fn user_retweeting_rate(
    log: &ActivityLog,
    follows: &FollowEdgeList,
    user: &UserId,
) -> Option<f64> {
    RateContext::new(log, follows).user_retweeting_rate(user)
}

pub fn audience_retweeting_rate(
    log: &ActivityLog,
    follows: &FollowEdgeList,
    user: &UserId,
) -> Option<f64> {
    RateContext::new(log, follows).audience_retweeting_rate(user)
}

pub const SUMMARY_BINS: usize = 10;

/// Mean, median and a 10-bin histogram on `[0, 1]` of the defined rates.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSummary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub histogram: [usize; SUMMARY_BINS],
}

impl RateSummary {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let mut v: Vec<f64> = values.collect();
        v.sort_by(f64::total_cmp);
        let mut histogram = [0; SUMMARY_BINS];
        for &x in &v {
            histogram[((x * SUMMARY_BINS as f64) as usize).min(SUMMARY_BINS - 1)] += 1;
        }
        let n = v.len();
        let (mean, median) = match n {
            0 => (0.0, 0.0),
            _ => {
                let mean = crate::reduce::compensated_sum(v.iter().copied()) / n as f64;
                let median =
                    if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 };
                (mean, median)
            }
        };
        Self { count: n, mean, median, histogram }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub user: UserId,
    pub user_rate: Option<f64>,
    pub audience_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub rows: Vec<RateRow>,
    pub user_summary: RateSummary,
    pub audience_summary: RateSummary,
}

/// Both rates for every user that authored an event or appears in the
/// follower list.
pub fn rate_report(log: &ActivityLog, follows: &FollowEdgeList) -> RateReport {
    let ctx = RateContext::new(log, follows);
    let users: BTreeSet<&UserId> =
        log.users().chain(follows.iter().flat_map(|(a, b)| [a, b])).collect();
    let rows: Vec<RateRow> = users
        .into_iter()
        .map(|u| RateRow {
            user: u.clone(),
            user_rate: ctx.user_retweeting_rate(u),
            audience_rate: ctx.audience_retweeting_rate(u),
        })
        .collect();
    RateReport {
        user_summary: RateSummary::of(rows.iter().filter_map(|r| r.user_rate)),
        audience_summary: RateSummary::of(rows.iter().filter_map(|r| r.audience_rate)),
        rows,
    }
}

impl RateReport {
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (name, s) in [("user", &self.user_summary), ("audience", &self.audience_summary)] {
            writeln!(
                out,
                "#{name}_rate count={} mean={} median={} histogram={}",
                s.count,
                format::g17(s.mean),
                format::g17(s.median),
                s.histogram.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            )?;
        }
        writeln!(out, "#user\tuser_retweeting_rate\taudience_retweeting_rate")?;
        let cell = |x: Option<f64>| x.map_or_else(|| "-".to_owned(), format::g17);
        for r in &self.rows {
            writeln!(out, "{}\t{}\t{}", r.user, cell(r.user_rate), cell(r.audience_rate))?;
        }
        Ok(())
    }
}

/// For each URL, the mean score over the distinct users who mentioned it
/// (retweets included). Unscored users are left out of the mean; URLs with no
/// scored mentioner are omitted.
pub fn url_attribute_average(log: &ActivityLog, scores: &ScoreVector) -> BTreeMap<UrlId, f64> {
    let mut mentioners: BTreeMap<&UrlId, BTreeSet<&UserId>> = BTreeMap::new();
    for e in log.events() {
        mentioners.entry(&e.url).or_default().insert(&e.user);
    }
    mentioners
        .into_iter()
        .filter_map(|(url, users)| {
            let vals: Vec<f64> = users.into_iter().filter_map(|u| scores.get(u)).collect();
            (!vals.is_empty()).then(|| {
                (url.clone(), crate::reduce::compensated_sum(vals.iter().copied()) / vals.len() as f64)
            })
        })
        .collect()
}

/// `ceil(q * n)`-th smallest value (1-based) of a sorted, non-empty slice.
pub fn nearest_rank(sorted: &[u64], q: f64) -> u64 {
    assert!(!sorted.is_empty(), "nearest_rank of an empty slice");
    let n = sorted.len();
    // The small slack absorbs representation error in q (0.999 * 1000 must
    // be rank 999, not 1000).
    let rank = ((q * n as f64) - 1e-9).ceil().clamp(1.0, n as f64) as usize;
    sorted[rank - 1]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares of `ys` on `xs`. A single distinct `x` gives slope 0.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    // Shifting by the first point keeps constant inputs exactly constant.
    let (x0, y0) = (xs[0], ys[0]);
    let n = xs.len() as f64;
    let mx = xs.iter().map(|x| x - x0).sum::<f64>() / n;
    let my = ys.iter().map(|y| y - y0).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - x0 - mx;
        sxy += dx * (y - y0 - my);
        sxx += dx * dx;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    LinearFit { slope, intercept: (my + y0) - slope * (mx + x0) }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveBin {
    /// Geometric centre of the bin.
    pub center: f64,
    pub percentile: u64,
    pub count: usize,
}

/// Per-bin click percentile as a function of a positive attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct PercentileCurve {
    pub q: f64,
    pub bins: Vec<CurveBin>,
    /// OLS fit of `log10 max(percentile, 1)` on `log10 center`.
    pub fit: LinearFit,
}

impl PercentileCurve {
    /// `bin_center<TAB>percentile` lines with a `#fit` trailer.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "#q={}", format::shortest(self.q))?;
        writeln!(out, "#bin_center\tpercentile")?;
        for b in &self.bins {
            writeln!(out, "{}\t{}", format::g17(b.center), b.percentile)?;
        }
        writeln!(
            out,
            "#fit slope={} intercept={}",
            format::g17(self.fit.slope),
            format::g17(self.fit.intercept)
        )
    }
}

pub const DEFAULT_PERCENTILE: f64 = 0.999;
pub const DEFAULT_BINS: usize = 50;

/// Bins `(x, clicks)` points into `bin_count` log-spaced bins over the
/// observed positive `x` range and takes the nearest-rank `q` percentile of
/// clicks in each non-empty bin. Points with `x <= 0` (or non-finite) are
/// dropped.
pub fn percentile_curve(
    points: &[(f64, u64)],
    q: f64,
    bin_count: usize,
) -> Result<PercentileCurve, AnalyticsError> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(AnalyticsError::InvalidParams(format!("percentile {q} outside (0, 1]")));
    }
    if bin_count == 0 {
        return Err(AnalyticsError::InvalidParams("bin_count must be at least 1".into()));
    }
    let pts: Vec<(f64, u64)> =
        points.iter().copied().filter(|(x, _)| *x > 0.0 && x.is_finite()).collect();
    if pts.is_empty() {
        return Err(AnalyticsError::NoData);
    }
    let lo = pts.iter().map(|p| p.0.log10()).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0.log10()).fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bin_count as f64;

    let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); bin_count];
    for &(x, c) in &pts {
        let k = if width > 0.0 {
            (((x.log10() - lo) / width) as usize).min(bin_count - 1)
        } else {
            0
        };
        buckets[k].push(c);
    }

    let mut bins = Vec::new();
    for (k, mut clicks) in buckets.into_iter().enumerate() {
        if clicks.is_empty() {
            continue;
        }
        clicks.sort_unstable();
        let center = if width > 0.0 { 10f64.powf(lo + (k as f64 + 0.5) * width) } else { 10f64.powf(lo) };
        bins.push(CurveBin { center, percentile: nearest_rank(&clicks, q), count: clicks.len() });
    }
    let xs: Vec<f64> = bins.iter().map(|b| b.center.log10()).collect();
    let ys: Vec<f64> = bins.iter().map(|b| (b.percentile.max(1) as f64).log10()).collect();
    Ok(PercentileCurve { q, fit: least_squares(&xs, &ys), bins })
}

/// 1-based ranks, ties sharing the average of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman correlation over the users present in both vectors.
pub fn rank_correlation(a: &ScoreVector, b: &ScoreVector) -> Result<f64, AnalyticsError> {
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        a.values.iter().filter_map(|(u, x)| b.get(u).map(|y| (*x, y))).unzip();
    let n = xs.len();
    if n < 2 {
        return Err(AnalyticsError::InsufficientOverlap { common: n });
    }
    let (rx, ry) = (average_ranks(&xs), average_ranks(&ys));
    // Average ranks always sum to n(n+1)/2.
    let mean = (n as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in rx.iter().zip(&ry) {
        let (dx, dy) = (x - mean, y - mean);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(AnalyticsError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub user: UserId,
    pub value: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub measure: String,
    pub rows: Vec<RankRow>,
}

/// The `k` highest-scoring users passing `eligible`, ranked 1..=k.
pub fn top_k<F>(scores: &ScoreVector, k: usize, eligible: F) -> RankReport
where
    F: Fn(&UserId, f64) -> bool,
{
    let rows = scores
        .ranking()
        .into_iter()
        .filter(|(u, v)| eligible(u, *v))
        .take(k)
        .enumerate()
        .map(|(i, (u, v))| RankRow { user: u.clone(), value: v, rank: i + 1 })
        .collect();
    RankReport { measure: scores.label.clone(), rows }
}

impl RankReport {
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "#rank\tuser\t{}", self.measure)?;
        for r in &self.rows {
            writeln!(out, "{}\t{}\t{}", r.rank, r.user, format::g17(r.value))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JoinRow {
    pub user: UserId,
    pub a: Option<(f64, usize)>,
    pub b: Option<(f64, usize)>,
}

/// Each user's value and rank under two measures.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinReport {
    pub measure_a: String,
    pub measure_b: String,
    pub rows: Vec<JoinRow>,
}

/// Joins two measures. Ranks are computed over each full vector; rows follow
/// rank under `a`, then users only present in `b` by their `b` rank.
pub fn rank_join(a: &ScoreVector, b: &ScoreVector) -> JoinReport {
    let ranked = |s: &ScoreVector| -> BTreeMap<UserId, (f64, usize)> {
        s.ranking().into_iter().enumerate().map(|(i, (u, v))| (u.clone(), (v, i + 1))).collect()
    };
    let (ra, rb) = (ranked(a), ranked(b));
    let mut rows: Vec<JoinRow> = ra
        .keys()
        .chain(rb.keys())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|u| JoinRow { user: u.clone(), a: ra.get(u).copied(), b: rb.get(u).copied() })
        .collect();
    rows.sort_by_key(|r| match (r.a, r.b) {
        (Some((_, x)), _) => (0, x),
        (None, Some((_, y))) => (1, y),
        (None, None) => unreachable!(),
    });
    JoinReport { measure_a: a.label.clone(), measure_b: b.label.clone(), rows }
}

impl JoinReport {
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let (a, b) = (&self.measure_a, &self.measure_b);
        writeln!(out, "#user\t{a}\t{b}\trank_by_{a}\trank_by_{b}")?;
        let val = |x: Option<(f64, usize)>| x.map_or("-".into(), |(v, _)| format::g17(v));
        let rank = |x: Option<(f64, usize)>| x.map_or("-".into(), |(_, r)| r.to_string());
        for r in &self.rows {
            writeln!(out, "{}\t{}\t{}\t{}\t{}", r.user, val(r.a), val(r.b), rank(r.a), rank(r.b))?;
        }
        Ok(())
    }
}
