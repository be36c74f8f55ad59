//! Continuous-time generalized Yule model with detachment, simulated by
//! competing exponential clocks.
//!
//! Households appear at rate ℓ·λ₁ while each household of size s gains a
//! member at rate s·λ₂ and loses one at rate s·μ₂. The minimum of all
//! those exponential clocks is itself exponential with the summed rate,
//! and the clock that fires is chosen with probability proportional to
//! its rate — which is exactly the one-step kernel of the discrete graph
//! chain. Observing the state at census times (every event of any kind)
//! therefore reproduces the graph chain in law; the event log records
//! census and formation times so that equivalence can be tested.

use crate::fenwick::FenwickTree;
use crate::model::ModelParams;
use crate::rng::{trajectory_rng, YULE_STREAM};
use crate::{Error, Result};
use rand::Rng;

/// Household sizes at the current clock time.
#[derive(Debug, Clone, PartialEq)]
pub struct YuleState {
    sizes: Vec<u64>,
    total_size: u64,
    clock: f64,
    census_index: u64,
}

impl YuleState {
    /// Initial population: one household with a single member at time 0.
    pub fn initial() -> Self {
        YuleState { sizes: vec![1], total_size: 1, clock: 0.0, census_index: 0 }
    }

    pub fn from_sizes(sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Domain("a population needs at least one household".into()));
        }
        let total_size = sizes.iter().sum();
        Ok(YuleState { sizes, total_size, clock: 0.0, census_index: 0 })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn num_households(&self) -> u64 {
        self.sizes.len() as u64
    }

    pub fn total_size(&self) -> u64 {
        self.total_size
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn census_index(&self) -> u64 {
        self.census_index
    }
}

/// What fired at a census. Household ids are 1-based; a new household is
/// reported with id 0 (its index is implicit: the population grew by one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum YuleEventKind {
    NewHousehold,
    Birth(u64),
    Death(u64),
}

impl YuleEventKind {
    /// Single-letter code used in the census CSV.
    pub fn code(&self) -> char {
        match self {
            YuleEventKind::NewHousehold => 'N',
            YuleEventKind::Birth(_) => 'B',
            YuleEventKind::Death(_) => 'D',
        }
    }

    pub fn household(&self) -> u64 {
        match self {
            YuleEventKind::NewHousehold => 0,
            YuleEventKind::Birth(h) | YuleEventKind::Death(h) => *h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusEvent {
    pub census_index: u64,
    /// Clock time τ̂ at which the event fired.
    pub clock: f64,
    pub kind: YuleEventKind,
    /// Exponential holding time that elapsed before the event.
    pub holding: f64,
}

/// A running Yule population with its household-weight tree.
#[derive(Debug, Clone)]
pub struct YuleChain {
    params: ModelParams,
    state: YuleState,
    tree: FenwickTree,
}

impl YuleChain {
    pub fn new(params: ModelParams) -> Self {
        Self::from_state(params, YuleState::initial())
    }

    pub fn from_state(params: ModelParams, state: YuleState) -> Self {
        let tree = FenwickTree::from_weights(&state.sizes);
        YuleChain { params, state, tree }
    }

    pub fn state(&self) -> &YuleState {
        &self.state
    }

    /// One Gillespie step: draw the holding time Exp(D) by inverse
    /// transform from a single uniform variate, advance the clock, then
    /// fire exactly one event with probability proportional to its rate.
    /// Empty households carry zero weight and can never revive.
    pub fn gillespie_step(&mut self, rng: &mut impl Rng) -> CensusEvent {
        let (l1, l2, m2) = (self.params.lambda1(), self.params.lambda2(), self.params.mu2());
        let households = self.state.num_households() as f64;
        let population = self.state.total_size as f64;
        let formation_weight = households * l1;
        let birth_weight = l2 * population;
        let death_weight = m2 * population;
        let total_rate = formation_weight + birth_weight + death_weight;

        // (0, 1] so the log never sees zero.
        let u = 1.0 - rng.random::<f64>();
        let holding = -u.ln() / total_rate;
        self.state.clock += holding;

        let pick = rng.random::<f64>() * total_rate;
        let kind = if pick < formation_weight || self.state.total_size == 0 {
            self.state.sizes.push(1);
            self.tree.push(1);
            self.state.total_size += 1;
            YuleEventKind::NewHousehold
        } else {
            let target = rng.random_range(0..self.state.total_size);
            let h = self.tree.select(target);
            if pick < formation_weight + birth_weight {
                self.state.sizes[h] += 1;
                self.tree.add(h, 1);
                self.state.total_size += 1;
                YuleEventKind::Birth(h as u64 + 1)
            } else {
                self.state.sizes[h] -= 1;
                self.tree.add(h, -1);
                self.state.total_size -= 1;
                YuleEventKind::Death(h as u64 + 1)
            }
        };
        self.state.census_index += 1;
        CensusEvent {
            census_index: self.state.census_index,
            clock: self.state.clock,
            kind,
            holding,
        }
    }
}

/// The recorded trajectory of a census-driven run.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusLog {
    pub events: Vec<CensusEvent>,
    final_state: YuleState,
}

impl CensusLog {
    /// Census times τ̂_1, τ̂_2, … (strictly increasing).
    pub fn census_times(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.clock).collect()
    }

    /// The subsequence of census times at which a new household formed.
    pub fn formation_times(&self) -> Vec<f64> {
        self.events
            .iter()
            .filter(|e| matches!(e.kind, YuleEventKind::NewHousehold))
            .map(|e| e.clock)
            .collect()
    }

    /// The embedded jump chain: the size words at census times 0..=t,
    /// shaped like graph degree words for distributional comparison.
    pub fn embedded_chain(&self) -> Vec<Vec<u64>> {
        let mut word = vec![1u64];
        let mut out = Vec::with_capacity(self.events.len() + 1);
        out.push(word.clone());
        for e in &self.events {
            match e.kind {
                YuleEventKind::NewHousehold => word.push(1),
                YuleEventKind::Birth(h) => word[h as usize - 1] += 1,
                YuleEventKind::Death(h) => word[h as usize - 1] -= 1,
            }
            out.push(word.clone());
        }
        out
    }

    pub fn final_state(&self) -> &YuleState {
        &self.final_state
    }
}

/// Run `num_censuses` Gillespie steps from the single-household state.
/// Deterministic in `(params, num_censuses, seed)`.
pub fn simulate_censuses(params: &ModelParams, num_censuses: u64, seed: u64) -> CensusLog {
    let mut chain = YuleChain::new(*params);
    let mut rng = trajectory_rng(seed, YULE_STREAM);
    let mut events = Vec::with_capacity(num_censuses as usize);
    for _ in 0..num_censuses {
        events.push(chain.gillespie_step(&mut rng));
    }
    CensusLog { events, final_state: chain.state }
}

/// One draw of s(Ẑ_u): the size of a household chosen uniformly at
/// random. States are piecewise constant between censuses, so sampling
/// at an arbitrary time means sampling the state at the last census
/// before it.
pub fn sample_uniform_household_size(state: &YuleState, rng: &mut impl Rng) -> u64 {
    let h = rng.random_range(0..state.num_households());
    state.sizes()[h as usize]
}

/// Density f_u(s) = λ₁ e^{λ₁s} / (e^{λ₁u} - 1) of the formation time of
/// a household chosen uniformly among those alive at time u.
pub fn formation_density(u: f64, s: f64, lambda1: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("formation_density requires u > 0, got {u}")));
    }
    if !(0.0..=u).contains(&s) {
        return Err(Error::Domain(format!("s must lie in [0, u], got {s}")));
    }
    if !(lambda1 > 0.0) {
        return Err(Error::Domain(format!("lambda1 must be positive, got {lambda1}")));
    }
    // expm1 keeps the λ₁ → 0 limit f_u → 1/u accurate.
    Ok(lambda1 * (lambda1 * s).exp() / f64::exp_m1(lambda1 * u))
}
