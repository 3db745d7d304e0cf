//! Influence-passivity scores.
//!
//! For an arc `(i, j)` with weight `w_ij`:
//!
//! ```text
//! acceptance  u_ij = w_ij / Σ_{k:(k,j)∈E} w_kj
//! rejection   v_ij = (1 - w_ij) / Σ_{k:(i,k)∈E} (1 - w_ik)
//! ```
//!
//! Each iteration first computes raw passivity from the previous influence,
//! `R_i = Σ_{j:(j,i)∈E} v_ji I_j`, then raw influence from that raw
//! passivity, `I_i = Σ_{j:(i,j)∈E} u_ij R_j`, and finally normalizes both to
//! unit sum. Both vectors start at all ones.
//!
//! Per-node sums run over CSR neighbours in ascending node order and
//! vector-wide sums go through [`crate::reduce`], so output is bit-identical
//! for any thread count.

use std::io::Write;

use rayon::prelude::*;
use thiserror::Error;

use crate::baselines::ScoreVector;
use crate::format;
use crate::graph::{InfluenceGraph, NodeId};
use crate::ingest::UserId;
use crate::reduce;

#[derive(Debug, Error, PartialEq)]
pub enum IpError {
    #[error("graph has no arcs")]
    EmptyGraph,
    #[error("{vector} vector sums to zero at iteration {iteration}")]
    DegenerateGraph { iteration: usize, vector: &'static str },
    #[error("score pairs cover different node sets")]
    NodeSetMismatch,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpParams {
    pub max_iterations: usize,
    /// Stop once the per-iteration delta drops below this.
    pub epsilon: f64,
}

impl Default for IpParams {
    fn default() -> Self {
        Self { max_iterations: 100, epsilon: 1e-9 }
    }
}

impl IpParams {
    pub fn validate(&self) -> Result<(), IpError> {
        if self.max_iterations == 0 {
            return Err(IpError::InvalidParams("max_iterations must be at least 1".into()));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(IpError::InvalidParams(format!("epsilon {} < 0", self.epsilon)));
        }
        Ok(())
    }
}

/// Acceptance and rejection rate per arc, indexed like the graph's forward
/// arc array.
#[derive(Debug, Clone, PartialEq)]
pub struct RateView {
    acceptance: Vec<f64>,
    rejection: Vec<f64>,
}

impl RateView {
    /// `u` for forward arc `arc`.
    pub fn acceptance(&self, arc: usize) -> f64 {
        self.acceptance[arc]
    }

    /// `v` for forward arc `arc`.
    pub fn rejection(&self, arc: usize) -> f64 {
        self.rejection[arc]
    }

    pub fn acceptance_rates(&self) -> &[f64] {
        &self.acceptance
    }

    pub fn rejection_rates(&self) -> &[f64] {
        &self.rejection
    }
}

/// Rates for every arc. A node whose out-arcs all have weight 1 rejects
/// nothing and gets rejection rate 0 on every out-arc.
pub fn compute_rates(g: &InfluenceGraph) -> RateView {
    let n = g.node_count() as NodeId;
    let accepted: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| g.in_arcs(j).map(|(_, w)| w).sum())
        .collect();
    let acceptance = (0..g.arc_count())
        .into_par_iter()
        .map(|k| g.weight(k) / accepted[g.target(k) as usize])
        .collect();
    let rejection = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let rejected: f64 = g.out_arcs(i).map(|(_, w)| 1.0 - w).sum();
            g.out_arcs(i)
                .map(move |(_, w)| if rejected > 0.0 { (1.0 - w) / rejected } else { 0.0 })
        })
        .collect();
    RateView { acceptance, rejection }
}

/// Normalized influence and passivity over the graph's nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScorePair {
    pub nodes: Vec<UserId>,
    pub influence: Vec<f64>,
    pub passivity: Vec<f64>,
    pub iterations_run: usize,
    /// Whether the delta fell below epsilon before the iteration cap.
    pub converged: bool,
}

impl ScorePair {
    pub fn influence_of(&self, user: &UserId) -> Option<f64> {
        self.nodes.binary_search(user).ok().map(|i| self.influence[i])
    }

    pub fn passivity_of(&self, user: &UserId) -> Option<f64> {
        self.nodes.binary_search(user).ok().map(|i| self.passivity[i])
    }

    pub fn influence_vector(&self) -> ScoreVector {
        ScoreVector::new("ip-influence", self.nodes.iter().cloned().zip(self.influence.iter().copied()))
    }

    pub fn passivity_vector(&self) -> ScoreVector {
        ScoreVector::new("ip-passivity", self.nodes.iter().cloned().zip(self.passivity.iter().copied()))
    }

    /// `user<TAB>influence<TAB>passivity` lines, 17 significant digits.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for ((u, i), p) in self.nodes.iter().zip(&self.influence).zip(&self.passivity) {
            writeln!(out, "{u}\t{}\t{}", format::g17(*i), format::g17(*p))?;
        }
        Ok(())
    }
}

/// Per-iteration total absolute change, `Σ|ΔI| + Σ|ΔP|`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub deltas: Vec<f64>,
}

impl IterationTrace {
    /// `iteration<TAB>delta` lines, iterations numbered from 1.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (k, d) in self.deltas.iter().enumerate() {
            writeln!(out, "{}\t{}", k + 1, format::g17(*d))?;
        }
        Ok(())
    }
}

/// `Σ_n |I' - I| + |P' - P|` between two score pairs over the same nodes.
pub fn delta(prev: &ScorePair, next: &ScorePair) -> Result<f64, IpError> {
    if prev.nodes != next.nodes
        || prev.influence.len() != next.influence.len()
        || prev.passivity.len() != next.passivity.len()
    {
        return Err(IpError::NodeSetMismatch);
    }
    Ok(reduce::l1_distance(&prev.influence, &next.influence)
        + reduce::l1_distance(&prev.passivity, &next.passivity))
}

/// Stepwise driver for the iteration, for callers that inspect every state.
pub struct IpSolver<'g> {
    graph: &'g InfluenceGraph,
    rates: RateView,
    influence: Vec<f64>,
    passivity: Vec<f64>,
    raw_influence: Vec<f64>,
    raw_passivity: Vec<f64>,
    iteration: usize,
}

impl<'g> IpSolver<'g> {
    pub fn new(graph: &'g InfluenceGraph) -> Result<Self, IpError> {
        if graph.arc_count() == 0 {
            return Err(IpError::EmptyGraph);
        }
        let n = graph.node_count();
        Ok(Self {
            graph,
            rates: compute_rates(graph),
            influence: vec![1.0; n],
            passivity: vec![1.0; n],
            raw_influence: vec![0.0; n],
            raw_passivity: vec![0.0; n],
            iteration: 0,
        })
    }

    pub fn rates(&self) -> &RateView {
        &self.rates
    }

    pub fn influence(&self) -> &[f64] {
        &self.influence
    }

    pub fn passivity(&self) -> &[f64] {
        &self.passivity
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Runs one iteration and returns its delta.
    pub fn step(&mut self) -> Result<f64, IpError> {
        let g = self.graph;
        let rates = &self.rates;
        let iteration = self.iteration + 1;

        let prev_influence = &self.influence;
        self.raw_passivity.par_iter_mut().enumerate().for_each(|(i, r)| {
            *r = g
                .in_range(i as NodeId)
                .map(|s| rates.rejection(g.in_arc(s)) * prev_influence[g.in_source(s) as usize])
                .fold(0.0, |acc, x| acc + x);
        });
        let raw_passivity = &self.raw_passivity;
        self.raw_influence.par_iter_mut().enumerate().for_each(|(i, x)| {
            *x = g
                .out_range(i as NodeId)
                .map(|k| rates.acceptance(k) * raw_passivity[g.target(k) as usize])
                .fold(0.0, |acc, x| acc + x);
        });

        let p_total = reduce::sum(&self.raw_passivity);
        if !(p_total > 0.0 && p_total.is_finite()) {
            return Err(IpError::DegenerateGraph { iteration, vector: "passivity" });
        }
        let i_total = reduce::sum(&self.raw_influence);
        if !(i_total > 0.0 && i_total.is_finite()) {
            return Err(IpError::DegenerateGraph { iteration, vector: "influence" });
        }
        reduce::scale_in_place(&mut self.raw_passivity, p_total);
        reduce::scale_in_place(&mut self.raw_influence, i_total);

        let delta = reduce::l1_distance(&self.raw_influence, &self.influence)
            + reduce::l1_distance(&self.raw_passivity, &self.passivity);
        std::mem::swap(&mut self.influence, &mut self.raw_influence);
        std::mem::swap(&mut self.passivity, &mut self.raw_passivity);
        self.iteration = iteration;
        Ok(delta)
    }

    fn into_scores(self, converged: bool) -> ScorePair {
        ScorePair {
            nodes: self.graph.names().to_vec(),
            influence: self.influence,
            passivity: self.passivity,
            iterations_run: self.iteration,
            converged,
        }
    }
}

/// Iterates until the delta drops below `params.epsilon` or
/// `params.max_iterations` is reached. Not converging is reported through
/// [`ScorePair::converged`], not as an error.
pub fn run_ip(
    g: &InfluenceGraph,
    params: &IpParams,
) -> Result<(ScorePair, IterationTrace), IpError> {
    params.validate()?;
    let mut solver = IpSolver::new(g)?;
    let mut trace = IterationTrace::default();
    let mut converged = false;
    while solver.iteration() < params.max_iterations {
        let d = solver.step()?;
        trace.deltas.push(d);
        if d < params.epsilon {
            converged = true;
            break;
        }
    }
    Ok((solver.into_scores(converged), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u(s: &str) -> UserId {
        UserId::from(s)
    }

    fn graph(nodes: &[&str], arcs: &[(&str, &str, f64)]) -> InfluenceGraph {
        InfluenceGraph::from_arcs(
            nodes.iter().map(|n| u(n)),
            arcs.iter().map(|(a, b, w)| (u(a), u(b), *w)),
        )
        .unwrap()
    }

    fn rate(g: &InfluenceGraph, r: &[f64], a: &str, b: &str) -> f64 {
        let (a, b) = (g.node_id(&u(a)).unwrap(), g.node_id(&u(b)).unwrap());
        let k = g.out_range(a).find(|&k| g.target(k) == b).unwrap();
        r[k]
    }

    #[test]
    fn acceptance_rates() {
        let g = graph(&["i", "j", "k"], &[("i", "j", 0.2), ("k", "j", 0.6)]);
        let r = compute_rates(&g);
        assert!((rate(&g, r.acceptance_rates(), "i", "j") - 0.25).abs() < 1e-15);
        assert!((rate(&g, r.acceptance_rates(), "k", "j") - 0.75).abs() < 1e-15);
    }

    #[test]
    fn rejection_rates() {
        let g = graph(&["i", "j", "k"], &[("j", "i", 0.2), ("j", "k", 0.6)]);
        let r = compute_rates(&g);
        assert!((rate(&g, r.rejection_rates(), "j", "i") - 2.0 / 3.0).abs() < 1e-15);
        assert!((rate(&g, r.rejection_rates(), "j", "k") - 1.0 / 3.0).abs() < 1e-15);

        let g = graph(&["i", "j"], &[("j", "i", 1.0)]);
        assert_eq!(compute_rates(&g).rejection(0), 0.0);
    }

    #[test]
    fn single_arc() {
        let g = graph(&["A", "B"], &[("A", "B", 0.5)]);
        let (s, trace) = run_ip(&g, &IpParams::default()).unwrap();
        assert_eq!(s.influence, vec![1.0, 0.0]);
        assert_eq!(s.passivity, vec![0.0, 1.0]);
        // Fixed point reached after the first iteration; the second confirms it.
        assert_eq!(trace.deltas, vec![2.0, 0.0]);
        assert!(s.converged);
        assert_eq!(s.iterations_run, 2);
        assert!(s.influence[1].is_sign_positive() && s.passivity[0].is_sign_positive());
        let mut out = Vec::new();
        s.write_to(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "A\t1\t0\nB\t0\t1\n");
    }

    #[test]
    fn symmetric_pair_and_cycle_are_uniform() {
        let g = graph(&["a", "b"], &[("a", "b", 0.5), ("b", "a", 0.5)]);
        let (s, _) = run_ip(&g, &IpParams::default()).unwrap();
        for x in s.influence.iter().chain(&s.passivity) {
            assert!((x - 0.5).abs() < 1e-12);
        }

        let g = graph(&["a", "b", "c"], &[("a", "b", 0.3), ("b", "c", 0.3), ("c", "a", 0.3)]);
        let (s, _) = run_ip(&g, &IpParams::default()).unwrap();
        for x in s.influence.iter().chain(&s.passivity) {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_and_degenerate() {
        let g = graph(&["a", "b"], &[]);
        assert_eq!(run_ip(&g, &IpParams::default()).unwrap_err(), IpError::EmptyGraph);

        // Every out-weight 1: nothing is rejected, so passivity has no mass.
        let g = graph(&["a", "b"], &[("a", "b", 1.0)]);
        assert!(matches!(
            run_ip(&g, &IpParams::default()),
            Err(IpError::DegenerateGraph { iteration: 1, vector: "passivity" })
        ));

        let g = graph(&["a", "b"], &[("a", "b", 0.5)]);
        let bad = IpParams { max_iterations: 0, epsilon: 1e-9 };
        assert!(matches!(run_ip(&g, &bad), Err(IpError::InvalidParams(_))));
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let g = graph(&["a", "b", "c"], &[("a", "b", 0.2), ("b", "c", 0.9), ("a", "c", 0.4)]);
        let (s, trace) = run_ip(&g, &IpParams { max_iterations: 1, epsilon: 0.0 }).unwrap();
        assert_eq!(s.iterations_run, 1);
        assert_eq!(trace.deltas.len(), 1);
        assert!(!s.converged);
    }

    fn pair(i: Vec<f64>, p: Vec<f64>) -> ScorePair {
        let nodes = (0..i.len()).map(|k| u(&format!("n{k}"))).collect();
        ScorePair { nodes, influence: i, passivity: p, iterations_run: 0, converged: false }
    }

    #[test]
    fn delta_examples() {
        let a = pair(vec![0.5, 0.5], vec![0.2, 0.8]);
        assert_eq!(delta(&a, &a.clone()).unwrap(), 0.0);
        let b = pair(vec![0.6, 0.4], vec![0.2, 0.8]);
        assert!((delta(&a, &b).unwrap() - 0.2).abs() < 1e-15);
        let c = pair(vec![1.0], vec![1.0]);
        assert_eq!(delta(&a, &c), Err(IpError::NodeSetMismatch));
    }

    #[test]
    fn score_file_format() {
        let s = pair(vec![1.0 / 3.0, 2.0 / 3.0], vec![1.0, 0.0]);
        let mut buf = Vec::new();
        s.write_to(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n0\t0.33333333333333331\t1\nn1\t0.66666666666666663\t0\n"
        );
        let mut buf = Vec::new();
        IterationTrace { deltas: vec![2.0, 0.5] }.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1\t2\n2\t0.5\n");
    }

    fn arb_graph() -> impl Strategy<Value = (usize, Vec<(u32, u32, f64)>)> {
        (2usize..12).prop_flat_map(|n| {
            let arcs = prop::collection::btree_map(
                (0..n as u32, 0..n as u32),
                0.01f64..0.99,
                1..(n * 3),
            );
            (Just(n), arcs).prop_map(|(n, m)| {
                (n, m.into_iter().filter(|((a, b), _)| a != b).map(|((a, b), w)| (a, b, w)).collect())
            })
        })
    }

    fn named(n: usize, arcs: &[(u32, u32, f64)], label: impl Fn(usize) -> String) -> InfluenceGraph {
        let names: Vec<UserId> = (0..n).map(|i| u(&label(i))).collect();
        InfluenceGraph::from_arcs(
            names.clone(),
            arcs.iter().map(|&(a, b, w)| (names[a as usize].clone(), names[b as usize].clone(), w)),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn rates_are_stochastic((n, arcs) in arb_graph()) {
            let g = named(n, &arcs, |i| format!("n{i:02}"));
            let r = compute_rates(&g);
            for j in 0..n as NodeId {
                if g.in_degree(j) > 0 {
                    let s: f64 = g.in_range(j).map(|s| r.acceptance(g.in_arc(s))).sum();
                    prop_assert!((s - 1.0).abs() < 1e-12);
                }
                if g.out_degree(j) > 0 {
                    let s: f64 = g.out_range(j).map(|k| r.rejection(k)).sum();
                    prop_assert!((s - 1.0).abs() < 1e-12);
                }
            }
            for x in r.acceptance_rates().iter().chain(r.rejection_rates()) {
                prop_assert!((0.0..=1.0).contains(x));
            }
        }

        #[test]
        fn normalized_every_iteration_and_structural_zeros((n, arcs) in arb_graph()) {
            let g = named(n, &arcs, |i| format!("n{i:02}"));
            let Ok(mut solver) = IpSolver::new(&g) else { return Ok(()) };
            for _ in 0..15 {
                solver.step().unwrap();
                prop_assert!((solver.influence().iter().sum::<f64>() - 1.0).abs() < 1e-12);
                prop_assert!((solver.passivity().iter().sum::<f64>() - 1.0).abs() < 1e-12);
                for v in 0..n as NodeId {
                    if g.out_degree(v) == 0 { prop_assert_eq!(solver.influence()[v as usize], 0.0); }
                    if g.in_degree(v) == 0 { prop_assert_eq!(solver.passivity()[v as usize], 0.0); }
                }
            }
        }

        #[test]
        fn relabeling_permutes_scores((n, arcs) in arb_graph(), rot in 0usize..12) {
            let params = IpParams { max_iterations: 10, epsilon: 0.0 };
            let g = named(n, &arcs, |i| format!("n{i:02}"));
            // Rotated labels change the node order and hence the summation order.
            let relabel = |i: usize| format!("n{:02}", (i + rot) % n);
            let h = named(n, &arcs, relabel);
            let (Ok((a, _)), Ok((b, _))) = (run_ip(&g, &params), run_ip(&h, &params)) else {
                return Ok(());
            };
            for i in 0..n {
                let name = u(&relabel(i));
                let orig = u(&format!("n{i:02}"));
                prop_assert!((a.influence_of(&orig).unwrap() - b.influence_of(&name).unwrap()).abs() < 1e-12);
                prop_assert!((a.passivity_of(&orig).unwrap() - b.passivity_of(&name).unwrap()).abs() < 1e-12);
            }
        }
    }
}
