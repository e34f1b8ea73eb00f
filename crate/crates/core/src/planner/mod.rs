//! Incremental minimum-violation planning.
//!
//! Each iteration samples a pose, connects it from its neighbors, rewires the
//! neighbors through it, and pushes cost improvements through the product of
//! the growing Kripke structure with the combined rule automaton. The best
//! accepting product node is kept at all times.

mod nn;
mod product;
pub mod rrt_star;
mod sampling;
mod steer;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automata::{seconds, UnsafetyVector, WeightedRulebook};
use crate::geometry::{DubinsPath, Pose};
use crate::kripke::{KripkeStructure, Trace};
use crate::world::{LabelSet, Scenario};
use crate::{Error, Result};

pub use nn::{pose_distance, NearIndex};
pub use product::{Cost, NodeId, Product, ProductNode};
pub use sampling::{gamma_bound, gamma_lower_bound, near_radius, sample, STATE_DIM};
pub use steer::{steer, Steered};

pub const DEFAULT_GOAL_BIAS: f64 = 0.05;
/// Cell size of the neighbor grid, in meters.
const NEAR_CELL: f64 = 1.0;
/// Default radius constant as a multiple of the admissible lower bound.
pub const DEFAULT_GAMMA_FACTOR: f64 = 1.1;

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    pub gamma: f64,
    pub seed: u64,
    pub max_iterations: usize,
    /// Collision and labeling resolution along paths, in meters.
    pub ds: f64,
    pub goal_bias: f64,
    /// Heading scale of the neighbor metric, in meters per radian.
    pub alpha: f64,
}

impl PlannerConfig {
    pub fn for_scenario(scenario: &Scenario) -> Self {
        PlannerConfig {
            gamma: DEFAULT_GAMMA_FACTOR * gamma_lower_bound(scenario),
            seed: 0,
            max_iterations: 1000,
            ds: scenario.rho / 20.0,
            goal_bias: DEFAULT_GOAL_BIAS,
            alpha: scenario.rho,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        let bound = gamma_lower_bound(scenario);
        if !(self.gamma >= bound) {
            return Err(Error::InvalidArgument(format!(
                "gamma {} is below the lower bound {bound}",
                self.gamma
            )));
        }
        if !(self.ds > 0.0) {
            return Err(Error::InvalidArgument("ds must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.goal_bias) {
            return Err(Error::InvalidArgument("goal bias must lie in [0, 1)".into()));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::InvalidArgument("alpha must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub trace: Trace,
    pub trajectory: Vec<Pose>,
    pub unsafety: UnsafetyVector,
    pub duration: f64,
    pub iteration_found: usize,
}

/// Work counters, cumulative over the run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub iterations: usize,
    pub rejected_samples: usize,
    pub steer_calls: usize,
    pub connect_edges: usize,
    pub rewire_edges: usize,
}

/// Outcome of one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// The sample was blocked or nothing could steer to it.
    Rejected,
    Added(usize),
}

pub struct Planner<'a> {
    scenario: &'a Scenario,
    rulebook: &'a WeightedRulebook,
    config: PlannerConfig,
    rng: ChaCha8Rng,
    index: NearIndex,
    product: Product,
    iteration: usize,
    stats: Stats,
    best_seen: Option<Cost>,
    best_found_at: usize,
}

impl<'a> Planner<'a> {
    pub fn new(scenario: &'a Scenario, rulebook: &'a WeightedRulebook, config: PlannerConfig) -> Result<Self> {
        config.validate(scenario)?;
        let init = scenario.init;
        let product = Product::new(
            rulebook,
            init,
            scenario.label(&init)?,
            scenario.in_goal(&init),
        );
        let mut index = NearIndex::new(&scenario.bounds, NEAR_CELL, config.alpha);
        index.insert(0, init);
        let mut planner = Planner {
            scenario,
            rulebook,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            index,
            product,
            iteration: 0,
            stats: Stats::default(),
            best_seen: None,
            best_found_at: 0,
        };
        planner.note_best();
        Ok(planner)
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.config
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn product(&self) -> &Product {
        &self.product
    }

    pub fn kripke(&self) -> &KripkeStructure {
        self.product.kripke()
    }

    pub fn best_cost(&self) -> Option<&Cost> {
        self.product.best_cost()
    }

    fn note_best(&mut self) {
        let current = self.product.best_cost().cloned();
        if current != self.best_seen {
            self.best_seen = current;
            self.best_found_at = self.iteration;
        }
    }

    /// One Sample / Near / Steer / Connect / Update / Rewire round.
    pub fn step(&mut self) -> StepOutcome {
        self.iteration += 1;
        self.stats.iterations += 1;
        let x = sample(&mut self.rng, self.scenario, self.config.goal_bias);
        let outcome = self.extend(x);
        if outcome == StepOutcome::Rejected {
            self.stats.rejected_samples += 1;
        }
        self.note_best();
        outcome
    }

    fn near(&self, x: &Pose) -> Vec<usize> {
        let kripke = self.product.kripke();
        let r = near_radius(self.config.gamma, kripke.len());
        let mut near: Vec<usize> = self
            .index
            .within(x, r)
            .into_iter()
            .filter(|s| kripke.is_active(*s))
            .collect();
        if near.is_empty() {
            near.extend(self.index.nearest(x));
        }
        near
    }

    fn extend(&mut self, x: Pose) -> StepOutcome {
        if self.scenario.pose_blocked(&x) {
            return StepOutcome::Rejected;
        }
        let near = self.near(&x);
        let ds = self.config.ds;
        let incoming: Vec<(usize, DubinsPath)> = near
            .iter()
            .filter_map(|&s| {
                let from = *self.product.kripke().pose(s);
                steer(self.scenario, &from, &x, ds).map(|st| (s, st.path))
            })
            .collect();
        self.stats.steer_calls += near.len();
        if incoming.is_empty() {
            return StepOutcome::Rejected;
        }
        let label = self.scenario.label_unchecked(&x);
        let s = self.product.add_state(x, label, self.scenario.in_goal(&x));
        self.index.insert(s, x);
        self.stats.connect_edges += incoming.len();
        for (from, path) in incoming {
            self.product
                .connect(self.rulebook, from, s, path.duration, Some(path));
        }
        self.product.update_state(s);
        for &to in &near {
            let target = *self.product.kripke().pose(to);
            self.stats.steer_calls += 1;
            if let Some(st) = steer(self.scenario, &x, &target, ds) {
                self.stats.rewire_edges += 1;
                self.product
                    .rewire(self.rulebook, s, to, st.path.duration, Some(st.path));
            }
        }
        self.product.propagate();
        StepOutcome::Added(s)
    }

    /// Runs the remaining iterations, calling `callback` after each.
    pub fn run(&mut self, mut callback: impl FnMut(&Planner<'a>)) {
        while self.iteration < self.config.max_iterations {
            self.step();
            callback(self);
        }
    }

    pub fn solution(&self) -> Option<Solution> {
        let z = self.product.best()?;
        let cost = self.product.best_cost()?;
        let trace = self.product.trace_to(z);
        let kripke = self.product.kripke();
        let dt = self.config.ds / self.scenario.speed;
        let mut trajectory = vec![*kripke.pose(trace.0[0])];
        for (from, path) in kripke.path_pieces(&trace).expect("tree edges are Kripke edges") {
            trajectory.extend(path.samples(&from, dt).skip(1).map(|(_, p)| p));
        }
        Some(Solution {
            trace,
            trajectory,
            unsafety: cost.ja.clone(),
            duration: seconds(cost.jt),
            iteration_found: self.best_found_at,
        })
    }

    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.product.tree_edges()
    }

    pub fn prune_unreachable(&mut self) -> usize {
        self.product.prune_unreachable()
    }
}

/// Runs the planner to completion; `callback` sees it after every iteration.
pub fn plan<'a>(
    scenario: &'a Scenario,
    rulebook: &'a WeightedRulebook,
    config: PlannerConfig,
    callback: impl FnMut(&Planner<'a>),
) -> Result<Planner<'a>> {
    let mut planner = Planner::new(scenario, rulebook, config)?;
    planner.run(callback);
    Ok(planner)
}

/// A hand-built Kripke structure: state 0 is initial.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectedStructure {
    pub states: Vec<(Pose, LabelSet, bool)>,
    pub edges: Vec<(usize, usize, f64)>,
}

/// Feeds a fixed structure through Connect / Update / Rewire in state order:
/// edges from earlier states connect the new one, edges back to earlier
/// states rewire them.
pub fn plan_injected(structure: &InjectedStructure, rulebook: &WeightedRulebook) -> Result<Product> {
    let n = structure.states.len();
    let Some(&(init, label, goal)) = structure.states.first() else {
        return Err(Error::InvalidArgument("no states".into()));
    };
    if let Some(e) = structure.edges.iter().find(|(a, b, d)| *a >= n || *b >= n || a == b || !(*d >= 0.0)) {
        return Err(Error::InvalidArgument(format!("bad edge {e:?}")));
    }
    let mut product = Product::new(rulebook, init, label, goal);
    for s in 1..n {
        let (pose, label, goal) = structure.states[s];
        product.add_state(pose, label, goal);
        let mut ins: Vec<(usize, f64)> = structure
            .edges
            .iter()
            .filter(|(a, b, _)| *b == s && *a < s)
            .map(|(a, _, d)| (*a, *d))
            .collect();
        ins.sort_by_key(|(a, _)| *a);
        for (from, d) in ins {
            product.connect(rulebook, from, s, d, None);
        }
        product.update_state(s);
        let mut outs: Vec<(usize, f64)> = structure
            .edges
            .iter()
            .filter(|(a, b, _)| *a == s && *b < s)
            .map(|(_, b, d)| (*b, *d))
            .collect();
        outs.sort_by_key(|(b, _)| *b);
        for (to, d) in outs {
            product.rewire(rulebook, s, to, d, None);
        }
        product.propagate();
    }
    Ok(product)
}
