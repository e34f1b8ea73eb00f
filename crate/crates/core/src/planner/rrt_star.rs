//! Plain RRT* over travel time, without rules.
//!
//! Shares sampling, neighbor search and steering with [`super::Planner`] and
//! makes the same choices on ties, so with an empty rulebook the two build
//! the same tree.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{near_radius, sample, steer, NearIndex, PlannerConfig, NEAR_CELL};
use crate::automata::{ticks, Weight};
use crate::geometry::Pose;
use crate::world::Scenario;
use crate::Result;

pub struct RrtStar<'a> {
    scenario: &'a Scenario,
    config: PlannerConfig,
    rng: ChaCha8Rng,
    index: NearIndex,
    poses: Vec<Pose>,
    in_goal: Vec<bool>,
    out: Vec<Vec<(usize, Weight)>>,
    cost: Vec<Option<Weight>>,
    parent: Vec<Option<usize>>,
    heap: BinaryHeap<Reverse<(Weight, usize)>>,
    changed: Vec<usize>,
    best: Option<usize>,
    iteration: usize,
}

impl<'a> RrtStar<'a> {
    pub fn new(scenario: &'a Scenario, config: PlannerConfig) -> Result<Self> {
        config.validate(scenario)?;
        let mut index = NearIndex::new(&scenario.bounds, NEAR_CELL, config.alpha);
        index.insert(0, scenario.init);
        let mut r = RrtStar {
            scenario,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            index,
            poses: vec![scenario.init],
            in_goal: vec![scenario.in_goal(&scenario.init)],
            out: vec![Vec::new()],
            cost: vec![Some(0)],
            parent: vec![None],
            heap: BinaryHeap::new(),
            changed: vec![0],
            best: None,
            iteration: 0,
        };
        r.refresh_best();
        Ok(r)
    }

    pub fn run(&mut self, mut callback: impl FnMut(&RrtStar<'a>)) {
        while self.iteration < self.config.max_iterations {
            self.step();
            callback(self);
        }
    }

    pub fn step(&mut self) {
        self.iteration += 1;
        let x = sample(&mut self.rng, self.scenario, self.config.goal_bias);
        if self.scenario.pose_blocked(&x) {
            return;
        }
        let r = near_radius(self.config.gamma, self.poses.len());
        let mut near = self.index.within(&x, r);
        if near.is_empty() {
            near.extend(self.index.nearest(&x));
        }
        let ds = self.config.ds;
        let incoming: Vec<(usize, Weight)> = near
            .iter()
            .filter_map(|&s| steer(self.scenario, &self.poses[s], &x, ds).map(|st| (s, ticks(st.path.duration))))
            .collect();
        if incoming.is_empty() {
            return;
        }
        let s = self.poses.len();
        self.poses.push(x);
        self.in_goal.push(self.scenario.in_goal(&x));
        self.out.push(Vec::new());
        self.cost.push(None);
        self.parent.push(None);
        self.index.insert(s, x);

        // Choose the parent: cheapest arrival, lowest id on ties.
        let mut choice: Option<(Weight, usize)> = None;
        for &(from, dt) in &incoming {
            self.out[from].push((s, dt));
            if let Some(c) = self.cost[from] {
                if choice.is_none_or(|best| (c + dt, from) < best) {
                    choice = Some((c + dt, from));
                }
            }
        }
        if let Some((c, from)) = choice {
            self.improve(s, c, from);
        }

        for &to in &near {
            if let Some(st) = steer(self.scenario, &x, &self.poses[to], ds) {
                let dt = ticks(st.path.duration);
                self.out[s].push((to, dt));
                if let Some(c) = self.cost[s] {
                    self.improve(to, c + dt, s);
                }
            }
        }

        while let Some(Reverse((c, z))) = self.heap.pop() {
            if self.cost[z] != Some(c) {
                continue;
            }
            for i in 0..self.out[z].len() {
                let (y, dt) = self.out[z][i];
                self.improve(y, c + dt, z);
            }
        }
        self.refresh_best();
    }

    fn improve(&mut self, y: usize, c: Weight, parent: usize) {
        if self.cost[y].is_some_and(|old| old <= c) {
            return;
        }
        self.cost[y] = Some(c);
        self.parent[y] = Some(parent);
        self.heap.push(Reverse((c, y)));
        self.changed.push(y);
    }

    fn refresh_best(&mut self) {
        for z in std::mem::take(&mut self.changed) {
            if !self.in_goal[z] {
                continue;
            }
            let key = |s: usize| self.cost[s].map(|c| (c, s));
            if self.best.is_none_or(|b| key(z) < key(b)) && key(z).is_some() {
                self.best = Some(z);
            }
        }
    }

    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(s, p)| p.map(|p| (p, s)))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn poses(&self) -> &[Pose] {
        &self.poses
    }

    /// Best goal state and its travel time in ticks.
    pub fn best(&self) -> Option<(usize, Weight)> {
        self.best.and_then(|s| self.cost[s].map(|c| (s, c)))
    }

    pub fn trace_to(&self, s: usize) -> Vec<usize> {
        let mut out = vec![s];
        let mut cur = s;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }
}
