//! Synthetic activity traces.
//!
//! # Stream protocol
//!
//! One `ChaCha8Rng::seed_from_u64(seed)` stream, one `f64` or range draw per
//! decision, consumed in this order:
//!
//! 1. Follow edges: for followee `i` ascending, for follower `j` ascending,
//!    `j != i`: one draw, edge iff `draw < follow_prob`.
//! 2. Posts, in rounds `r = 0, 1, ...`. In each round, every user `i`
//!    (ascending) with `r < posts(i)` makes one post: one draw picks the URL
//!    uniformly from the pool. Then each follower of `i` (ascending) makes
//!    one draw and retweets, crediting `i`, iff `draw < retweet_prob`.
//!
//! Broadcasters (the first `broadcasters` users) post `3 * mentions_per_user`
//! times, everyone else `mentions_per_user` times. Post number `k` (counting
//! all users' posts) happens at time `k * stride`, and its `m`-th retweet at
//! `k * stride + 1 + m`, with `stride = users + 2`, so every retweet follows
//! its post and precedes the next one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use influence_core::{ActivityLog, ClickTable, FollowEdgeList, TweetEvent, UrlId, UserId};

use crate::TestkitError;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub users: usize,
    pub broadcasters: usize,
    pub follow_prob: f64,
    pub mentions_per_user: usize,
    pub retweet_prob: f64,
    pub url_pool: usize,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            users: 60,
            broadcasters: 5,
            follow_prob: 0.1,
            mentions_per_user: 4,
            retweet_prob: 0.3,
            url_pool: 150,
            seed: 1,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<(), TestkitError> {
        let bad = |m: String| Err(TestkitError::InvalidParams(m));
        for (name, p) in [("follow_prob", self.follow_prob), ("retweet_prob", self.retweet_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} outside [0, 1]"));
            }
        }
        if self.users == 0 {
            return bad("users must be at least 1".into());
        }
        if self.broadcasters > self.users {
            return bad(format!("{} broadcasters among {} users", self.broadcasters, self.users));
        }
        if self.url_pool == 0 {
            return bad("url_pool must be at least 1".into());
        }
        Ok(())
    }
}

pub fn user_names(n: usize) -> Vec<UserId> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| UserId(format!("u{i:0width$}"))).collect()
}

/// Generates a trace following the stream protocol in the module docs.
pub fn synth_trace(p: &SynthParams) -> Result<(ActivityLog, FollowEdgeList), TestkitError> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let users = user_names(p.users);
    let url_width = p.url_pool.saturating_sub(1).to_string().len();

    let mut followers: Vec<Vec<usize>> = vec![Vec::new(); p.users];
    let mut pairs = Vec::new();
    for i in 0..p.users {
        for j in 0..p.users {
            if i != j && rng.gen::<f64>() < p.follow_prob {
                followers[i].push(j);
                pairs.push((users[i].clone(), users[j].clone()));
            }
        }
    }

    let posts = |i: usize| {
        if i < p.broadcasters {
            3 * p.mentions_per_user
        } else {
            p.mentions_per_user
        }
    };
    let rounds = (0..p.users).map(posts).max().unwrap_or(0);
    let stride = p.users as i64 + 2;
    let mut events = Vec::new();
    let mut post_no = 0i64;
    for r in 0..rounds {
        for i in 0..p.users {
            if r >= posts(i) {
                continue;
            }
            let url = UrlId(format!("url{:0url_width$}", rng.gen_range(0..p.url_pool)));
            let t = post_no * stride;
            post_no += 1;
            events.push(TweetEvent::mention(t, users[i].clone(), url.clone()));
            let mut m = 0;
            for &j in &followers[i] {
                if rng.gen::<f64>() < p.retweet_prob {
                    m += 1;
                    events.push(TweetEvent::retweet(t + m, users[j].clone(), url.clone(), users[i].clone()));
                }
            }
        }
    }

    let log = ActivityLog::from_events(events).expect("generator emits valid events");
    let follows = FollowEdgeList::from_pairs(pairs).expect("generator emits no self-follows");
    Ok((log, follows))
}

/// Clicks per URL: ten per distinct mentioning user plus a uniform draw in
/// `0..10`, one draw per URL in ascending URL order.
pub fn synth_clicks(log: &ActivityLog, seed: u64) -> ClickTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mentioners: std::collections::BTreeMap<&UrlId, std::collections::BTreeSet<&UserId>> =
        Default::default();
    for e in log.events() {
        mentioners.entry(&e.url).or_default().insert(&e.user);
    }
    let clicks = mentioners
        .into_iter()
        .map(|(url, users)| (url.clone(), 10 * users.len() as u64 + rng.gen_range(0..10)))
        .collect();
    ClickTable { clicks }
}

/// Two broadcasters with equal-size audiences that differ only in how they
/// treat everyone else they follow.
///
/// Users: broadcasters `A` and `B`, `others` posters `c0..`, and audiences
/// `a0..` (following `A` and every `c`) and `b0..` (following `B` and every
/// `c`). Every poster makes 4 posts. Each audience member retweets 3 of its
/// broadcaster's 4 posts. `A`'s audience retweets a single post of each
/// other poster (dedicated to `A`, passive towards the rest); `B`'s audience
/// retweets 3 of 4 posts of every other poster as well.
pub fn planted_contrast(audience: usize, others: usize) -> (ActivityLog, FollowEdgeList) {
    const POSTS: usize = 4;
    let mut events = Vec::new();
    let mut pairs = Vec::new();
    let mut t = 0i64;
    let mut tick = || {
        t += 1;
        t
    };

    let posters: Vec<String> =
        ["A".to_owned(), "B".to_owned()].into_iter().chain((0..others).map(|k| format!("c{k}"))).collect();
    for p in &posters {
        for k in 0..POSTS {
            events.push(TweetEvent::mention(tick(), p.as_str(), format!("{p}-url{k}").as_str()));
        }
    }

    for (group, broadcaster, others_taken) in [("a", "A", 1), ("b", "B", 3)] {
        for m in 0..audience {
            let member = format!("{group}{m}");
            pairs.push((UserId::from(broadcaster), UserId::from(member.as_str())));
            for k in 0..3 {
                let url = format!("{broadcaster}-url{k}");
                events.push(TweetEvent::retweet(tick(), member.as_str(), url.as_str(), broadcaster));
            }
            for c in 0..others {
                let poster = format!("c{c}");
                pairs.push((UserId::from(poster.as_str()), UserId::from(member.as_str())));
                for k in 0..others_taken {
                    let url = format!("{poster}-url{k}");
                    events.push(TweetEvent::retweet(tick(), member.as_str(), url.as_str(), poster.as_str()));
                }
            }
        }
    }

    (
        ActivityLog::from_events(events).expect("valid planted events"),
        FollowEdgeList::from_pairs(pairs).expect("no self-follows"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_determines_trace() {
        let p = SynthParams::default();
        let a = synth_trace(&p).unwrap();
        assert_eq!(a, synth_trace(&p).unwrap());
        let b = synth_trace(&SynthParams { seed: 2, ..p }).unwrap();
        assert_ne!(a.0, b.0);
    }

    #[test]
    fn zero_retweet_probability() {
        let (log, _) = synth_trace(&SynthParams { retweet_prob: 0.0, ..Default::default() }).unwrap();
        assert!(!log.is_empty());
        assert!(log.events().iter().all(|e| !e.is_retweet()));
    }

    #[test]
    fn invalid_params() {
        for p in [
            SynthParams { follow_prob: 1.5, ..Default::default() },
            SynthParams { retweet_prob: -0.1, ..Default::default() },
            SynthParams { broadcasters: 100, users: 10, ..Default::default() },
            SynthParams { url_pool: 0, ..Default::default() },
        ] {
            assert!(matches!(synth_trace(&p), Err(TestkitError::InvalidParams(_))));
        }
    }

    #[test]
    fn retweets_follow_their_post_and_credit_a_followee() {
        let (log, follows) = synth_trace(&SynthParams::default()).unwrap();
        assert!(log.events().windows(2).all(|w| w[0] <= w[1]));
        for e in log.events() {
            if let Some(src) = e.source() {
                assert_ne!(src, &e.user);
                assert!(follows.contains(src, &e.user));
                assert!(log.events_of(src).any(|m| m.url == e.url && m.time < e.time));
            }
        }
    }

    #[test]
    fn planted_shapes() {
        let (log, follows) = planted_contrast(5, 3);
        // 5 posters x 4 posts, 5 x (3 + 3) for a's, 5 x (3 + 9) for b's
        assert_eq!(log.len(), 20 + 30 + 60);
        assert_eq!(follows.len(), 2 * 5 * 4);
    }

    #[test]
    fn clicks_deterministic() {
        let (log, _) = synth_trace(&SynthParams::default()).unwrap();
        assert_eq!(synth_clicks(&log, 9), synth_clicks(&log, 9));
    }
}
