use std::collections::BTreeMap;

use influence_core::graph::{build_comention, build_retweet, build_retweet_follower, graph_stats};
use influence_core::{ActivityLog, FollowEdgeList, InfluenceGraph, TweetEvent, UserId};
use proptest::prelude::*;

const USERS: usize = 8;
const URLS: usize = 10;

fn name(k: usize) -> String {
    format!("u{k}")
}

fn trace() -> impl Strategy<Value = (ActivityLog, FollowEdgeList)> {
    let event = (0i64..50, 0..USERS, 0..URLS, prop::option::of(0..USERS));
    let follow = (0..USERS, 0..USERS);
    (prop::collection::vec(event, 1..60), prop::collection::vec(follow, 0..30)).prop_map(|(events, pairs)| {
        let events = events
            .into_iter()
            .map(|(t, u, url, src)| {
                let url = format!("url{url}");
                match src {
                    Some(s) if s != u => TweetEvent::retweet(t, name(u).as_str(), url.as_str(), name(s).as_str()),
                    _ => TweetEvent::mention(t, name(u).as_str(), url.as_str()),
                }
            })
            .collect();
        let pairs = pairs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (UserId(name(a)), UserId(name(b))));
        (ActivityLog::from_events(events).unwrap(), FollowEdgeList::from_pairs(pairs).unwrap())
    })
}

fn arcs(g: &InfluenceGraph) -> BTreeMap<(UserId, UserId), f64> {
    g.arcs().map(|(s, t, w)| ((g.name(s).clone(), g.name(t).clone()), w)).collect()
}

proptest! {
    #[test]
    fn weights_in_unit_interval((log, follows) in trace()) {
        for g in [build_comention(&log, &follows, 1), build_retweet(&log, 1)] {
            prop_assert!(g.weights().iter().all(|&w| w > 0.0 && w <= 1.0));
            let s = graph_stats(&g);
            prop_assert_eq!(s.histogram.iter().sum::<usize>(), g.arc_count());
        }
    }

    #[test]
    fn raising_threshold_shrinks_graph((log, follows) in trace(), lo in 1usize..3, step in 1usize..3) {
        let hi = lo + step;
        for (small, big) in [
            (build_comention(&log, &follows, hi), build_comention(&log, &follows, lo)),
            (build_retweet(&log, hi), build_retweet(&log, lo)),
        ] {
            prop_assert!(small.names().iter().all(|n| big.node_id(n).is_some()));
            let big_arcs = arcs(&big);
            for (k, w) in arcs(&small) {
                prop_assert_eq!(big_arcs.get(&k), Some(&w));
            }
        }
    }

    #[test]
    fn follower_variant_is_follow_restricted_retweet((log, follows) in trace()) {
        let rt = arcs(&build_retweet(&log, 1));
        let rtf = arcs(&build_retweet_follower(&log, &follows, 1));
        for ((i, j), w) in &rtf {
            prop_assert!(follows.contains(i, j));
            prop_assert_eq!(rt.get(&(i.clone(), j.clone())), Some(w));
        }
        for (i, j) in rt.keys() {
            if follows.contains(i, j) {
                prop_assert!(rtf.contains_key(&(i.clone(), j.clone())));
            }
        }
    }

    #[test]
    fn comention_arcs_follow_follow_edges((log, follows) in trace()) {
        for ((i, j), _) in arcs(&build_comention(&log, &follows, 1)) {
            prop_assert!(follows.contains(&i, &j));
        }
    }

    #[test]
    fn event_order_is_irrelevant((log, follows) in trace()) {
        let mut reversed: Vec<TweetEvent> = log.events().to_vec();
        reversed.reverse();
        let again = ActivityLog::from_events(reversed).unwrap();
        prop_assert_eq!(build_comention(&log, &follows, 2), build_comention(&again, &follows, 2));
        prop_assert_eq!(build_retweet(&log, 2), build_retweet(&again, 2));
    }
}

#[test]
fn moving_the_only_later_mention_earlier_removes_the_arc() {
    let follows = FollowEdgeList::from_pairs([(UserId::from("i"), UserId::from("j"))]).unwrap();
    let with_j_at = |t| {
        ActivityLog::from_events(vec![
            TweetEvent::mention(5, "i", "a"),
            TweetEvent::mention(t, "j", "a"),
            TweetEvent::mention(9, "j", "z"),
        ])
        .unwrap()
    };
    assert_eq!(build_comention(&with_j_at(6), &follows, 1).arc_count(), 1);
    assert_eq!(build_comention(&with_j_at(5), &follows, 1).arc_count(), 0);
    assert_eq!(build_comention(&with_j_at(4), &follows, 1).arc_count(), 0);
}
