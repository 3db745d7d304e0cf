//! Seeded random influence graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use influence_core::{InfluenceGraph, NodeId, UserId};

/// Zero-padded names so that lexicographic order equals index order.
pub fn node_names(n: usize) -> Vec<UserId> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| UserId(format!("n{i:0width$}"))).collect()
}

/// Weight uniform in `(0, 1]`.
fn weight(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Erdős–Rényi digraph: each ordered pair `(s, t)`, `s != t`, is an arc with
/// probability `p`. Draw order: for `s` ascending, for `t` ascending, one
/// draw for presence, then one for the weight when present.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> InfluenceGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for s in 0..n as NodeId {
        for t in 0..n as NodeId {
            if s != t && rng.gen::<f64>() < p {
                arcs.push((s, t, weight(&mut rng)));
            }
        }
    }
    InfluenceGraph::from_indexed(node_names(n), arcs).expect("valid random graph")
}

/// Sparse random digraph with about `arcs` arcs: endpoints are drawn
/// uniformly (source, then target, then weight per arc); self-loops are
/// skipped and duplicate pairs keep their first weight.
pub fn sparse(n: usize, arcs: usize, seed: u64) -> InfluenceGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(NodeId, NodeId, f64)> = Vec::with_capacity(arcs);
    for _ in 0..arcs {
        let s = rng.gen_range(0..n as NodeId);
        let t = rng.gen_range(0..n as NodeId);
        let w = weight(&mut rng);
        if s != t {
            out.push((s, t, w));
        }
    }
    // Stable sort keeps the first draw of each duplicated pair.
    out.sort_by_key(|a| (a.0, a.1));
    out.dedup_by_key(|a| (a.0, a.1));
    InfluenceGraph::from_indexed(node_names(n), out).expect("valid random graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let a = erdos_renyi(30, 0.2, 7);
        assert_eq!(a, erdos_renyi(30, 0.2, 7));
        assert_ne!(a, erdos_renyi(30, 0.2, 8));
        assert!(a.weights().iter().all(|&w| w > 0.0 && w <= 1.0));

        let b = sparse(1000, 4000, 3);
        assert!(b.arc_count() > 3900 && b.arc_count() <= 4000);
        assert_eq!(b, sparse(1000, 4000, 3));
    }

    #[test]
    fn names_sort_like_indices() {
        let names = node_names(1001);
        assert!(names.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(names[7].as_str(), "n0007");
    }
}
