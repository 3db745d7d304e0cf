//! Dense-matrix re-implementations of the iterative scores.

use influence_core::{InfluenceGraph, PageRankParams, ScorePair, ScoreVector};

use crate::TestkitError;

pub const MAX_DENSE_NODES: usize = 200;

/// Node count, weights and arc presence, indexed `[source][target]`.
type Dense = (usize, Vec<Vec<f64>>, Vec<Vec<bool>>);

fn weight_matrix(g: &InfluenceGraph) -> Result<Dense, TestkitError> {
    let n = g.node_count();
    if n > MAX_DENSE_NODES {
        return Err(TestkitError::TooLarge(n));
    }
    let mut w = vec![vec![0.0; n]; n];
    let mut arc = vec![vec![false; n]; n];
    for (s, t, x) in g.arcs() {
        w[s as usize][t as usize] = x;
        arc[s as usize][t as usize] = true;
    }
    Ok((n, w, arc))
}

/// Runs exactly `iterations` rounds of the influence-passivity update with
/// full `n x n` acceptance and rejection matrices.
pub fn dense_ip_oracle(g: &InfluenceGraph, iterations: usize) -> Result<ScorePair, TestkitError> {
    let (n, w, arc) = weight_matrix(g)?;
    if !arc.iter().flatten().any(|&a| a) {
        return Err(TestkitError::EmptyGraph);
    }

    // u[i][j] = w_ij / sum_k w_kj
    let mut u = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut col = 0.0;
        for k in 0..n {
            if arc[k][j] {
                col += w[k][j];
            }
        }
        for i in 0..n {
            if arc[i][j] {
                u[i][j] = w[i][j] / col;
            }
        }
    }
    // v[j][i] = (1 - w_ji) / sum_k (1 - w_jk), zero when nothing is rejected
    let mut v = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut row = 0.0;
        for k in 0..n {
            if arc[j][k] {
                row += 1.0 - w[j][k];
            }
        }
        for i in 0..n {
            if arc[j][i] && row > 0.0 {
                v[j][i] = (1.0 - w[j][i]) / row;
            }
        }
    }

    let mut inf = vec![1.0; n];
    let mut pas = vec![1.0; n];
    for _ in 0..iterations {
        let mut r = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                r[i] += v[j][i] * inf[j];
            }
        }
        let mut next = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                next[i] += u[i][j] * r[j];
            }
        }
        let r_total: f64 = r.iter().sum();
        let i_total: f64 = next.iter().sum();
        if r_total == 0.0 || i_total == 0.0 {
            return Err(TestkitError::Degenerate);
        }
        for k in 0..n {
            inf[k] = next[k] / i_total;
            pas[k] = r[k] / r_total;
        }
    }
    Ok(ScorePair {
        nodes: g.names().to_vec(),
        influence: inf,
        passivity: pas,
        iterations_run: iterations,
        converged: false,
    })
}

/// Power iteration on the explicit Google matrix
/// `G = d (T + dangling rows of 1/n) + (1 - d)/n`.
pub fn dense_pagerank_oracle(
    g: &InfluenceGraph,
    params: &PageRankParams,
) -> Result<ScoreVector, TestkitError> {
    let (n, w, arc) = weight_matrix(g)?;
    if n == 0 {
        return Err(TestkitError::EmptyNodeSet);
    }
    let d = params.damping;
    let nf = n as f64;
    let mut google = vec![vec![0.0; n]; n];
    for i in 0..n {
        let out: f64 = (0..n).filter(|&k| arc[i][k]).map(|k| w[i][k]).sum();
        for j in 0..n {
            let step = if out > 0.0 {
                if arc[i][j] { w[i][j] / out } else { 0.0 }
            } else {
                1.0 / nf
            };
            google[i][j] = d * step + (1.0 - d) / nf;
        }
    }
    let mut x = vec![1.0 / nf; n];
    for _ in 0..params.max_iterations {
        let mut y = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                y[j] += x[i] * google[i][j];
            }
        }
        let change: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        x = y;
        if change < params.epsilon {
            break;
        }
    }
    Ok(ScoreVector::new("pagerank", g.names().iter().cloned().zip(x)))
}
