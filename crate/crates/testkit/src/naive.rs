//! Brute-force recomputations straight from the definitions.
//!
//! These scan raw event lists with nested loops. They are meant for inputs of
//! a few thousand events at most.

use std::collections::{BTreeMap, BTreeSet};

use influence_core::{ActivityLog, FollowEdgeList, InfluenceGraph, ScoreVector, TweetEvent, UrlId, UserId};

/// Arc map keyed by `(source, target)` names.
pub type ArcMap = BTreeMap<(UserId, UserId), f64>;

fn distinct_urls_of(events: &[TweetEvent], user: &UserId) -> Vec<UrlId> {
    let mut out: Vec<UrlId> = Vec::new();
    for e in events {
        if &e.user == user && !out.contains(&e.url) {
            out.push(e.url.clone());
        }
    }
    out
}

fn eligible(events: &[TweetEvent], min_urls: usize) -> BTreeSet<UserId> {
    let authors: BTreeSet<&UserId> = events.iter().map(|e| &e.user).collect();
    authors
        .into_iter()
        .filter(|u| distinct_urls_of(events, u).len() >= min_urls.max(1))
        .cloned()
        .collect()
}

/// Co-mention nodes and arcs, recomputed per follow edge by scanning events.
pub fn comention(log: &ActivityLog, follows: &FollowEdgeList, min_urls: usize) -> (BTreeSet<UserId>, ArcMap) {
    let ev = log.events();
    let nodes = eligible(ev, min_urls);
    let mut arcs = ArcMap::new();
    for (i, j) in follows.iter() {
        if !nodes.contains(i) || !nodes.contains(j) {
            continue;
        }
        let mut s = 0;
        let mut f = 0;
        for url in distinct_urls_of(ev, i) {
            let first_i = ev.iter().filter(|e| &e.user == i && e.url == url).map(|e| e.time).min().unwrap();
            let j_any = ev.iter().any(|e| &e.user == j && e.url == url);
            let j_after = ev.iter().any(|e| &e.user == j && e.url == url && e.time > first_i);
            if j_after {
                s += 1;
            }
            if !j_any {
                f += 1;
            }
        }
        if s > 0 {
            arcs.insert((i.clone(), j.clone()), s as f64 / (f + s) as f64);
        }
    }
    (nodes, arcs)
}

/// Retweet (or retweet/follower, when `follows` is given) nodes and arcs.
pub fn retweet(log: &ActivityLog, follows: Option<&FollowEdgeList>, min_urls: usize) -> (BTreeSet<UserId>, ArcMap) {
    let ev = log.events();
    let nodes = eligible(ev, min_urls);
    let mut candidates = BTreeSet::new();
    for e in ev {
        if let Some(src) = e.source() {
            candidates.insert((src.clone(), e.user.clone()));
        }
    }
    let mut arcs = ArcMap::new();
    for (i, j) in candidates {
        if !nodes.contains(&i) || !nodes.contains(&j) {
            continue;
        }
        if let Some(f) = follows {
            if !f.iter().any(|(a, b)| a == &i && b == &j) {
                continue;
            }
        }
        let posted = distinct_urls_of(ev, &i);
        let shared = posted
            .iter()
            .filter(|url| ev.iter().any(|e| e.user == j && e.source() == Some(&i) && &e.url == *url))
            .count();
        if shared > 0 {
            arcs.insert((i.clone(), j.clone()), shared as f64 / posted.len() as f64);
        }
    }
    (nodes, arcs)
}

/// Named arcs of a graph, for comparison with the maps above.
pub fn arc_map(g: &InfluenceGraph) -> ArcMap {
    g.arcs().map(|(s, t, w)| ((g.name(s).clone(), g.name(t).clone()), w)).collect()
}

/// Reversed arc map.
pub fn reverse(arcs: &ArcMap) -> ArcMap {
    arcs.iter().map(|((a, b), w)| ((b.clone(), a.clone()), *w)).collect()
}

/// Tries every candidate `h` from the largest down.
pub fn h_index(counts: &[u64]) -> u64 {
    for h in (0..=counts.len() as u64).rev() {
        if counts.iter().filter(|&&c| c >= h).count() as u64 >= h {
            return h;
        }
    }
    0
}

/// Nearest-rank percentile with `q = num / den` in exact integer arithmetic.
pub fn nearest_rank(values: &[u64], num: u64, den: u64) -> u64 {
    let mut sorted = values.to_vec();
    sorted.sort();
    let n = sorted.len() as u64;
    let rank = (num * n).div_ceil(den).max(1);
    sorted[(rank - 1) as usize]
}

/// Spearman by O(n^2) rank counting followed by textbook Pearson.
pub fn spearman(a: &ScoreVector, b: &ScoreVector) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = a.values.iter().filter_map(|(u, x)| b.get(u).map(|y| (*x, y))).collect();
    let ranks = |xs: Vec<f64>| -> Vec<f64> {
        xs.iter()
            .map(|x| {
                let below = xs.iter().filter(|y| *y < x).count() as f64;
                let equal = xs.iter().filter(|y| *y == x).count() as f64;
                below + (equal + 1.0) / 2.0
            })
            .collect()
    };
    let rx = ranks(pairs.iter().map(|p| p.0).collect());
    let ry = ranks(pairs.iter().map(|p| p.1).collect());
    let n = rx.len() as f64;
    if n < 2.0 {
        return None;
    }
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = rx.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|y| (y - my).powi(2)).sum();
    Some(cov / (vx.sqrt() * vy.sqrt()))
}

fn follows_pair(follows: &FollowEdgeList, followee: &UserId, follower: &UserId) -> bool {
    follows.iter().any(|(a, b)| a == followee && b == follower)
}

/// Joins every event against every retweet by `user`.
pub fn user_retweeting_rate(log: &ActivityLog, follows: &FollowEdgeList, user: &UserId) -> Option<f64> {
    let ev = log.events();
    let mut received = 0;
    let mut retweeted = 0;
    for e in ev {
        if follows_pair(follows, &e.user, user) {
            received += 1;
            if ev.iter().any(|r| &r.user == user && r.source() == Some(&e.user) && r.url == e.url) {
                retweeted += 1;
            }
        }
    }
    (received > 0).then(|| retweeted as f64 / received as f64)
}

pub fn audience_retweeting_rate(log: &ActivityLog, follows: &FollowEdgeList, user: &UserId) -> Option<f64> {
    let ev = log.events();
    let followers: Vec<&UserId> = follows.iter().filter(|(a, _)| *a == user).map(|(_, b)| b).collect();
    let mut delivered = 0;
    let mut retweeted = 0;
    for e in ev.iter().filter(|e| &e.user == user) {
        for f in &followers {
            delivered += 1;
            if ev.iter().any(|r| &r.user == *f && r.source() == Some(user) && r.url == e.url) {
                retweeted += 1;
            }
        }
    }
    (delivered > 0).then(|| retweeted as f64 / delivered as f64)
}

/// Per-URL mean of scores over distinct scored mentioners.
pub fn url_attribute_average(log: &ActivityLog, scores: &ScoreVector) -> BTreeMap<UrlId, f64> {
    let ev = log.events();
    let urls: BTreeSet<&UrlId> = ev.iter().map(|e| &e.url).collect();
    let mut out = BTreeMap::new();
    for url in urls {
        let users: BTreeSet<&UserId> = ev.iter().filter(|e| &e.url == url).map(|e| &e.user).collect();
        let vals: Vec<f64> = users.iter().filter_map(|u| scores.get(u)).collect();
        if !vals.is_empty() {
            out.insert(url.clone(), vals.iter().sum::<f64>() / vals.len() as f64);
        }
    }
    out
}

/// Followers per user by scanning all pairs.
pub fn follower_count(follows: &FollowEdgeList, user: &UserId) -> usize {
    follows.iter().filter(|(a, _)| *a == user).count()
}

/// Retweet events crediting `user`.
pub fn retweet_count(log: &ActivityLog, user: &UserId) -> usize {
    log.events().iter().filter(|e| e.source() == Some(user)).count()
}

/// Sorts all users by value then id, twice, and reports both ranks.
pub fn double_sort_ranks(a: &ScoreVector, b: &ScoreVector) -> BTreeMap<UserId, (Option<usize>, Option<usize>)> {
    let rank_of = |s: &ScoreVector| -> BTreeMap<UserId, usize> {
        let mut v: Vec<(&UserId, f64)> = s.values.iter().map(|(u, x)| (u, *x)).collect();
        v.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(y.0)));
        v.into_iter().enumerate().map(|(i, (u, _))| (u.clone(), i + 1)).collect()
    };
    let (ra, rb) = (rank_of(a), rank_of(b));
    ra.keys()
        .chain(rb.keys())
        .map(|u| (u.clone(), (ra.get(u).copied(), rb.get(u).copied())))
        .collect()
}
