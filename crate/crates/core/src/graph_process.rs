//! The discrete-time in-degree chain of the preferential
//! attachment-detachment graph.
//!
//! Only the in-degree word is tracked: with D = (λ₂+μ₂)·‖x‖ + ℓ(x)·λ₁,
//! each step appends a fresh degree-1 vertex with probability ℓ(x)λ₁/D,
//! increments d_i with probability λ₂d_i/D, or decrements d_i with
//! probability μ₂d_i/D. Edge sources are not stored — the law of the
//! degree word does not depend on them — but the optional event log is
//! enough to rebuild a full multigraph offline.
//!
//! Attachment and detachment both pick their target in proportion to its
//! current degree, so one Fenwick tree over the degrees serves both
//! selections in O(log n).

use crate::fenwick::FenwickTree;
use crate::model::ModelParams;
use crate::rng::{trajectory_rng, GRAPH_STREAM};
use crate::{Error, Result};
use rand::Rng;
use std::collections::BTreeMap;

/// The in-degree word with its cached total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeState {
    degrees: Vec<u64>,
    total_degree: u64,
    step: u64,
}

impl DegreeState {
    /// The chain's initial state: one vertex carrying its founding loop.
    pub fn initial() -> Self {
        DegreeState { degrees: vec![1], total_degree: 1, step: 0 }
    }

    /// A state with the given degrees (used to probe the kernel from
    /// arbitrary small words).
    pub fn from_degrees(degrees: Vec<u64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::Domain("a degree state needs at least one vertex".into()));
        }
        let total_degree = degrees.iter().sum();
        Ok(DegreeState { degrees, total_degree, step: 0 })
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// ℓ(x), the number of vertices.
    pub fn num_vertices(&self) -> u64 {
        self.degrees.len() as u64
    }

    /// ‖x‖, the total in-degree.
    pub fn total_degree(&self) -> u64 {
        self.total_degree
    }

    pub fn step(&self) -> u64 {
        self.step
    }
}

/// What a single step did. Vertex ids are 1-based, matching the vertex
/// labels 1..ℓ(x) of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    NewVertex,
    Attach(u64),
    Detach(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventRecord {
    /// The time t at which the event fired (the step index it produced).
    pub step: u64,
    pub kind: EventKind,
}

impl EventKind {
    /// Single-letter code used in the CSV event log.
    pub fn code(&self) -> char {
        match self {
            EventKind::NewVertex => 'N',
            EventKind::Attach(_) => 'A',
            EventKind::Detach(_) => 'D',
        }
    }

    /// The 1-based target vertex, 0 for a new-vertex event.
    pub fn vertex(&self) -> u64 {
        match self {
            EventKind::NewVertex => 0,
            EventKind::Attach(v) | EventKind::Detach(v) => *v,
        }
    }
}

/// A running chain: the degree word plus the weight tree that makes each
/// step O(log n).
#[derive(Debug, Clone)]
pub struct GraphChain {
    params: ModelParams,
    state: DegreeState,
    tree: FenwickTree,
}

impl GraphChain {
    pub fn new(params: ModelParams) -> Self {
        Self::from_state(params, DegreeState::initial())
    }

    pub fn from_state(params: ModelParams, state: DegreeState) -> Self {
        let tree = FenwickTree::from_weights(&state.degrees);
        GraphChain { params, state, tree }
    }

    pub fn state(&self) -> &DegreeState {
        &self.state
    }

    /// Fire exactly one event. Degree-0 vertices carry zero weight, so no
    /// invalid attach/detach is reachable and the kernel is total.
    pub fn step(&mut self, rng: &mut impl Rng) -> EventRecord {
        let (l1, l2, m2) = (self.params.lambda1(), self.params.lambda2(), self.params.mu2());
        let num_vertices = self.state.num_vertices() as f64;
        let total_degree = self.state.total_degree as f64;
        let new_weight = num_vertices * l1;
        let attach_weight = l2 * total_degree;
        let detach_weight = m2 * total_degree;
        let d = new_weight + attach_weight + detach_weight;

        let u = rng.random::<f64>() * d;
        let kind = if u < new_weight || self.state.total_degree == 0 {
            self.state.degrees.push(1);
            self.tree.push(1);
            self.state.total_degree += 1;
            EventKind::NewVertex
        } else {
            // Both event classes target a vertex with probability
            // proportional to its degree.
            let target = rng.random_range(0..self.state.total_degree);
            let i = self.tree.select(target);
            if u < new_weight + attach_weight {
                self.state.degrees[i] += 1;
                self.tree.add(i, 1);
                self.state.total_degree += 1;
                EventKind::Attach(i as u64 + 1)
            } else {
                self.state.degrees[i] -= 1;
                self.tree.add(i, -1);
                self.state.total_degree -= 1;
                EventKind::Detach(i as u64 + 1)
            }
        };
        self.state.step += 1;
        EventRecord { step: self.state.step, kind }
    }
}

/// Run the chain for `steps` steps from the initial word. Deterministic
/// in `(params, steps, seed)`.
pub fn simulate(params: &ModelParams, steps: u64, seed: u64) -> DegreeState {
    let mut chain = GraphChain::new(*params);
    let mut rng = trajectory_rng(seed, GRAPH_STREAM);
    for _ in 0..steps {
        chain.step(&mut rng);
    }
    chain.state
}

/// Like [`simulate`], also returning the full event log. Logging is
/// opt-in: at long horizons the log dwarfs the state.
pub fn simulate_logged(params: &ModelParams, steps: u64, seed: u64) -> (DegreeState, Vec<EventRecord>) {
    let mut chain = GraphChain::new(*params);
    let mut rng = trajectory_rng(seed, GRAPH_STREAM);
    let mut log = Vec::with_capacity(steps as usize);
    for _ in 0..steps {
        log.push(chain.step(&mut rng));
    }
    (chain.state, log)
}

/// Counts of vertices per in-degree; counts[j]/num_vertices is the
/// empirical distribution π_t^j.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeHistogram {
    pub counts: BTreeMap<u64, u64>,
    pub num_vertices: u64,
}

impl DegreeHistogram {
    /// Merge another histogram into this one (associative, commutative).
    pub fn merge(&mut self, other: &DegreeHistogram) {
        for (&j, &c) in &other.counts {
            *self.counts.entry(j).or_insert(0) += c;
        }
        self.num_vertices += other.num_vertices;
    }

    /// Normalized masses indexed by degree, up to the largest occupied one.
    pub fn masses(&self) -> Vec<f64> {
        let max_degree = self.counts.keys().next_back().copied().unwrap_or(0);
        let mut m = vec![0.0; max_degree as usize + 1];
        for (&j, &c) in &self.counts {
            m[j as usize] = c as f64 / self.num_vertices as f64;
        }
        m
    }
}

/// Tally of the in-degree word: counts[j] = #{i : d_i = j}.
pub fn empirical_distribution(state: &DegreeState) -> DegreeHistogram {
    let mut counts = BTreeMap::new();
    for &d in state.degrees() {
        *counts.entry(d).or_insert(0) += 1;
    }
    DegreeHistogram { counts, num_vertices: state.num_vertices() }
}

/// One draw of d(V_t): the degree of a vertex chosen uniformly at random
/// from the current state.
pub fn sample_uniform_vertex_degree(state: &DegreeState, rng: &mut impl Rng) -> u64 {
    let i = rng.random_range(0..state.num_vertices());
    state.degrees()[i as usize]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(l1: f64, l2: f64, m2: f64) -> ModelParams {
        ModelParams::new(l1, l2, m2).unwrap()
    }

    #[test]
    fn zero_steps_is_initial_word() {
        let s = simulate(&p(1.0, 1.0, 0.0), 0, 7);
        assert_eq!(s.degrees(), &[1]);
        assert_eq!(s.num_vertices(), 1);
        assert_eq!(s.total_degree(), 1);
        assert_eq!(s.step(), 0);
    }

    #[test]
    fn deterministic_replay() {
        let params = p(1.0, 2.0, 1.0);
        let a = simulate(&params, 5_000, 99);
        let b = simulate(&params, 5_000, 99);
        assert_eq!(a, b);
        let c = simulate(&params, 5_000, 100);
        assert_ne!(a, c);
    }

    #[test]
    fn bookkeeping_invariants_along_a_run() {
        let params = p(0.8, 1.5, 0.9);
        let mut chain = GraphChain::new(params);
        let mut rng = trajectory_rng(3, GRAPH_STREAM);
        for _ in 0..20_000 {
            let before_total = chain.state().total_degree();
            let before_len = chain.state().num_vertices();
            let ev = chain.step(&mut rng);
            let after_total = chain.state().total_degree();
            let after_len = chain.state().num_vertices();
            match ev.kind {
                EventKind::NewVertex => {
                    assert_eq!(after_len, before_len + 1);
                    assert_eq!(after_total, before_total + 1);
                }
                EventKind::Attach(v) => {
                    assert!(v >= 1 && v <= before_len);
                    assert_eq!(after_len, before_len);
                    assert_eq!(after_total, before_total + 1);
                }
                EventKind::Detach(v) => {
                    assert!(v >= 1 && v <= before_len);
                    assert_eq!(after_len, before_len);
                    assert_eq!(after_total, before_total - 1);
                }
            }
            let recomputed: u64 = chain.state().degrees().iter().sum();
            assert_eq!(recomputed, after_total);
        }
    }

    #[test]
    fn zero_degree_vertices_are_absorbing() {
        // No event may ever target a vertex whose degree already hit 0.
        let params = p(0.5, 1.0, 1.5);
        let mut chain = GraphChain::new(params);
        let mut rng = trajectory_rng(11, GRAPH_STREAM);
        let mut zeroed = std::collections::HashSet::new();
        for _ in 0..50_000 {
            let ev = chain.step(&mut rng);
            match ev.kind {
                EventKind::NewVertex => {}
                EventKind::Attach(v) | EventKind::Detach(v) => {
                    assert!(!zeroed.contains(&v), "event targeted extinct vertex {v}");
                    if chain.state().degrees()[v as usize - 1] == 0 {
                        zeroed.insert(v);
                    }
                }
            }
        }
        assert!(!zeroed.is_empty(), "run never produced an extinct vertex");
        for &v in &zeroed {
            assert_eq!(chain.state().degrees()[v as usize - 1], 0);
        }
    }

    #[test]
    fn one_step_distribution_from_initial_word() {
        // From [1] with (1,1,0): D = 2, P(new) = P(attach 1) = 1/2.
        let params = p(1.0, 1.0, 0.0);
        let mut rng = trajectory_rng(5, GRAPH_STREAM);
        let trials = 200_000u64;
        let mut news = 0u64;
        for _ in 0..trials {
            let mut chain = GraphChain::new(params);
            match chain.step(&mut rng).kind {
                EventKind::NewVertex => news += 1,
                EventKind::Attach(1) => {}
                other => panic!("unreachable event {other:?}"),
            }
        }
        let phat = news as f64 / trials as f64;
        let sigma = (0.5 * 0.5 / trials as f64).sqrt();
        assert!((phat - 0.5).abs() < 4.0 * sigma, "p̂ = {phat}");
    }

    #[test]
    fn vanishing_attachment_rate_grows_vertices() {
        // λ₂ → 0 surrogate: new-vertex probability ≈ 1 each step.
        let params = p(1.0, 1e-12, 0.0);
        for seed in 0..5 {
            let s = simulate(&params, 1_000, seed);
            assert!(s.num_vertices() >= 999, "seed {seed}: {}", s.num_vertices());
        }
    }

    #[test]
    fn histogram_tallies() {
        let s = DegreeState::from_degrees(vec![3, 1, 1, 0]).unwrap();
        let h = empirical_distribution(&s);
        assert_eq!(h.num_vertices, 4);
        assert_eq!(h.counts.get(&0), Some(&1));
        assert_eq!(h.counts.get(&1), Some(&2));
        assert_eq!(h.counts.get(&3), Some(&1));
        let weighted: u64 = h.counts.iter().map(|(&j, &c)| j * c).sum();
        assert_eq!(weighted, s.total_degree());

        let h1 = empirical_distribution(&DegreeState::initial());
        assert_eq!(h1.counts.get(&1), Some(&1));
        assert_eq!(h1.counts.len(), 1);
    }

    #[test]
    fn uniform_vertex_degree_sampling() {
        let mut rng = trajectory_rng(17, GRAPH_STREAM);
        let one = DegreeState::initial();
        for _ in 0..100 {
            assert_eq!(sample_uniform_vertex_degree(&one, &mut rng), 1);
        }
        let flat = DegreeState::from_degrees(vec![2, 2, 2]).unwrap();
        for _ in 0..100 {
            assert_eq!(sample_uniform_vertex_degree(&flat, &mut rng), 2);
        }
        // Mean over [0, 4] is 2 within binomial-style bounds.
        let mixed = DegreeState::from_degrees(vec![0, 4]).unwrap();
        let n = 100_000;
        let sum: u64 = (0..n).map(|_| sample_uniform_vertex_degree(&mixed, &mut rng)).sum();
        let mean = sum as f64 / n as f64;
        assert!((mean - 2.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn mean_degree_near_one_at_balance() {
        // λ₂ = μ₂: E[‖x‖/ℓ(x)] stays near 1.
        let params = p(1.0, 1.0, 1.0);
        let runs = 200;
        let t = 2_000u64;
        let mut ratios = Vec::with_capacity(runs);
        for k in 0..runs {
            let s = simulate(&params, t, 1000 + k as u64);
            ratios.push(s.total_degree() as f64 / s.num_vertices() as f64);
        }
        let mean = ratios.iter().sum::<f64>() / runs as f64;
        let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
        let se = (var / runs as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se + 0.02, "mean {mean}, se {se}");
    }

    proptest! {
        #[test]
        fn histogram_merge_is_commutative_and_consistent(
            a in proptest::collection::vec(0u64..6, 1..30),
            b in proptest::collection::vec(0u64..6, 1..30),
        ) {
            let ha = empirical_distribution(&DegreeState::from_degrees(a.clone()).unwrap());
            let hb = empirical_distribution(&DegreeState::from_degrees(b.clone()).unwrap());
            let mut ab = ha.clone();
            ab.merge(&hb);
            let mut ba = hb.clone();
            ba.merge(&ha);
            prop_assert_eq!(&ab, &ba);
            prop_assert_eq!(ab.num_vertices as usize, a.len() + b.len());
            let total: u64 = ab.counts.values().sum();
            prop_assert_eq!(total, ab.num_vertices);
        }
    }
}
