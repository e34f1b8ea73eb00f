//! The weighted product of a Kripke structure with the combined rule
//! automaton, kept shortest-path optimal as edges arrive.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use crate::automata::{CombinedState, UnsafetyVector, Weight, WeightedRulebook};
use crate::geometry::{DubinsPath, Pose};
use crate::kripke::{KripkeStructure, Trace};
use crate::world::LabelSet;

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cost {
    pub ja: UnsafetyVector,
    pub jt: Weight,
}

impl Cost {
    fn extend(&self, w: &UnsafetyVector, dt: Weight) -> Cost {
        Cost {
            ja: &self.ja + w,
            jt: self.jt + dt,
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ja.cmp(&other.ja).then(self.jt.cmp(&other.jt))
    }
}

#[derive(Debug, Clone)]
pub struct ProductNode {
    pub state: usize,
    pub q: u32,
    /// `None` until some run reaches the node.
    pub cost: Option<Cost>,
    pub parent: Option<NodeId>,
    pub accepting: bool,
}

#[derive(Debug, Clone)]
struct ProductEdge {
    to: NodeId,
    w: UnsafetyVector,
    dt: Weight,
}

/// Product graph over a growing Kripke structure.
#[derive(Debug, Clone)]
pub struct Product {
    kripke: KripkeStructure,
    in_goal: Vec<bool>,
    qstates: Vec<CombinedState>,
    qindex: HashMap<CombinedState, u32>,
    nodes: Vec<ProductNode>,
    out: Vec<Vec<ProductEdge>>,
    at_state: Vec<Vec<NodeId>>,
    /// Edges into nodes of the newest state, awaiting [`Product::update_state`].
    pending: Vec<(NodeId, NodeId, usize)>,
    /// Nodes relaxed since the last [`Product::propagate`].
    heap: BinaryHeap<Reverse<(Cost, NodeId)>>,
    changed: Vec<NodeId>,
    best: Option<NodeId>,
    num_product_edges: usize,
}

impl Product {
    pub fn new(rulebook: &WeightedRulebook, init: Pose, label: LabelSet, init_in_goal: bool) -> Self {
        let mut p = Product {
            kripke: KripkeStructure::new(init, label),
            in_goal: vec![init_in_goal],
            qstates: Vec::new(),
            qindex: HashMap::new(),
            nodes: Vec::new(),
            out: Vec::new(),
            at_state: vec![Vec::new()],
            pending: Vec::new(),
            heap: BinaryHeap::new(),
            changed: Vec::new(),
            best: None,
            num_product_edges: 0,
        };
        let q0 = p.intern(rulebook.initial());
        let root = p.push_node(rulebook, 0, q0);
        p.nodes[root as usize].cost = Some(Cost {
            ja: rulebook.zero(),
            jt: 0,
        });
        p.changed.push(root);
        p.refresh_best();
        p
    }

    pub fn kripke(&self) -> &KripkeStructure {
        &self.kripke
    }

    pub fn kripke_mut(&mut self) -> &mut KripkeStructure {
        &mut self.kripke
    }

    pub fn nodes(&self) -> &[ProductNode] {
        &self.nodes
    }

    pub fn nodes_at(&self, s: usize) -> &[NodeId] {
        &self.at_state[s]
    }

    pub fn combined_state(&self, q: u32) -> &CombinedState {
        &self.qstates[q as usize]
    }

    pub fn num_edges(&self) -> usize {
        self.num_product_edges
    }

    pub fn best(&self) -> Option<NodeId> {
        self.best
    }

    pub fn best_cost(&self) -> Option<&Cost> {
        self.best.and_then(|z| self.nodes[z as usize].cost.as_ref())
    }

    fn intern(&mut self, q: CombinedState) -> u32 {
        if let Some(&id) = self.qindex.get(&q) {
            return id;
        }
        let id = self.qstates.len() as u32;
        self.qindex.insert(q.clone(), id);
        self.qstates.push(q);
        id
    }

    fn push_node(&mut self, rulebook: &WeightedRulebook, s: usize, q: u32) -> NodeId {
        let id = self.nodes.len() as NodeId;
        let accepting = self.in_goal[s] && rulebook.is_accepting(&self.qstates[q as usize]);
        self.nodes.push(ProductNode {
            state: s,
            q,
            cost: None,
            parent: None,
            accepting,
        });
        self.out.push(Vec::new());
        self.at_state[s].push(id);
        id
    }

    fn node_at(&self, s: usize, q: u32) -> Option<NodeId> {
        self.at_state[s].iter().copied().find(|z| self.nodes[*z as usize].q == q)
    }

    pub fn add_state(&mut self, pose: Pose, label: LabelSet, in_goal: bool) -> usize {
        let s = self.kripke.add_state(pose, label);
        self.in_goal.push(in_goal);
        self.at_state.push(Vec::new());
        s
    }

    /// Node `(s, q)`, created on demand together with its product edges
    /// along the existing Kripke edges out of `s`.
    fn ensure_node(&mut self, rulebook: &WeightedRulebook, s: usize, q: u32) -> NodeId {
        if let Some(z) = self.node_at(s, q) {
            return z;
        }
        let z = self.push_node(rulebook, s, q);
        let mut work = vec![z];
        while let Some(z) = work.pop() {
            let s = self.nodes[z as usize].state;
            let targets: Vec<(usize, Weight)> = self
                .kripke
                .out_edges(s)
                .iter()
                .map(|e| (e.to, e.ticks))
                .collect();
            for (t, dt) in targets {
                for (q2, w) in self.step(rulebook, z, t, dt) {
                    let y = match self.node_at(t, q2) {
                        Some(y) => y,
                        None => {
                            let y = self.push_node(rulebook, t, q2);
                            work.push(y);
                            y
                        }
                    };
                    self.add_product_edge(z, y, w, dt);
                }
            }
        }
        z
    }

    fn step(&mut self, rulebook: &WeightedRulebook, z: NodeId, t: usize, dt: Weight) -> Vec<(u32, UnsafetyVector)> {
        let node = &self.nodes[z as usize];
        let from = self.kripke.label(node.state);
        let to = self.kripke.label(t);
        let q = self.qstates[node.q as usize].clone();
        rulebook
            .combined_step(&q, from, to, dt)
            .into_iter()
            .map(|(q2, w)| (self.intern(q2), w))
            .collect()
    }

    fn add_product_edge(&mut self, from: NodeId, to: NodeId, w: UnsafetyVector, dt: Weight) {
        self.out[from as usize].push(ProductEdge { to, w, dt });
        self.num_product_edges += 1;
    }

    /// Adds the Kripke edge `from → to` and its product edges; returns the
    /// product edges as `(source, target, index in source's list)`.
    fn add_edge(
        &mut self,
        rulebook: &WeightedRulebook,
        from: usize,
        to: usize,
        duration: f64,
        path: Option<DubinsPath>,
    ) -> Vec<(NodeId, NodeId, usize)> {
        if !self.kripke.add_edge(from, to, duration, path) {
            return Vec::new();
        }
        let dt = self.kripke.edge(from, to).unwrap().ticks;
        let sources: Vec<NodeId> = self.at_state[from].clone();
        let mut added = Vec::new();
        for z in sources {
            for (q2, w) in self.step(rulebook, z, to, dt) {
                let y = self.ensure_node(rulebook, to, q2);
                self.add_product_edge(z, y, w, dt);
                added.push((z, y, self.out[z as usize].len() - 1));
            }
        }
        added
    }

    /// Connect: an edge from an existing state into the newest state.
    pub fn connect(&mut self, rulebook: &WeightedRulebook, from: usize, to: usize, duration: f64, path: Option<DubinsPath>) {
        let added = self.add_edge(rulebook, from, to, duration, path);
        self.pending.extend(added);
    }

    fn candidate(&self, z: NodeId, edge: usize) -> Option<Cost> {
        let e = &self.out[z as usize][edge];
        self.nodes[z as usize].cost.as_ref().map(|c| c.extend(&e.w, e.dt))
    }

    /// Update: each node of the newest state takes its best incoming
    /// candidate, ties going to the lowest parent id.
    pub fn update_state(&mut self, s: usize) {
        let pending = std::mem::take(&mut self.pending);
        let mut best: HashMap<NodeId, (Cost, NodeId)> = HashMap::new();
        for (z, y, e) in pending {
            debug_assert_eq!(self.nodes[y as usize].state, s);
            let Some(cand) = self.candidate(z, e) else {
                continue;
            };
            match best.get(&y) {
                Some((c, p)) if (c, *p) <= (&cand, z) => {}
                _ => {
                    best.insert(y, (cand, z));
                }
            }
        }
        let mut improved: Vec<(NodeId, Cost, NodeId)> =
            best.into_iter().map(|(y, (c, z))| (y, c, z)).collect();
        improved.sort_by_key(|(y, _, _)| *y);
        for (y, cand, z) in improved {
            self.improve(y, cand, z);
        }
    }

    fn improve(&mut self, y: NodeId, cost: Cost, parent: NodeId) -> bool {
        let node = &mut self.nodes[y as usize];
        if node.cost.as_ref().is_some_and(|c| *c <= cost) {
            return false;
        }
        node.cost = Some(cost.clone());
        node.parent = Some(parent);
        self.heap.push(Reverse((cost, y)));
        self.changed.push(y);
        true
    }

    /// Rewire: an edge from the newest state back to an existing state;
    /// targets that get strictly cheaper are reparented.
    pub fn rewire(&mut self, rulebook: &WeightedRulebook, from: usize, to: usize, duration: f64, path: Option<DubinsPath>) {
        for (z, y, e) in self.add_edge(rulebook, from, to, duration, path) {
            if let Some(cand) = self.candidate(z, e) {
                self.improve(y, cand, z);
            }
        }
    }

    /// Pushes every improvement through the product graph, then refreshes
    /// the best accepting node.
    pub fn propagate(&mut self) {
        while let Some(Reverse((cost, z))) = self.heap.pop() {
            if self.nodes[z as usize].cost.as_ref() != Some(&cost) {
                continue;
            }
            for e in 0..self.out[z as usize].len() {
                let y = self.out[z as usize][e].to;
                let cand = self.candidate(z, e).expect("popped nodes are reached");
                self.improve(y, cand, z);
            }
        }
        self.refresh_best();
    }

    fn key(&self, z: NodeId) -> Option<(&Cost, NodeId)> {
        self.nodes[z as usize].cost.as_ref().map(|c| (c, z))
    }

    fn refresh_best(&mut self) {
        for z in std::mem::take(&mut self.changed) {
            if !self.nodes[z as usize].accepting {
                continue;
            }
            let better = match self.best {
                None => true,
                Some(b) => self.key(z) < self.key(b),
            };
            if better && self.key(z).is_some() {
                self.best = Some(z);
            }
        }
    }

    /// Kripke states from the root to `z`.
    pub fn trace_to(&self, z: NodeId) -> Trace {
        let mut states = vec![self.nodes[z as usize].state];
        let mut cur = z;
        while let Some(p) = self.nodes[cur as usize].parent {
            states.push(self.nodes[p as usize].state);
            cur = p;
        }
        states.reverse();
        Trace(states)
    }

    /// Kripke projections of the parent pointers, sorted and deduplicated.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .nodes
            .iter()
            .filter_map(|n| n.parent.map(|p| (self.nodes[p as usize].state, n.state)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Recomputes every reached node's cost along its parent chain and
    /// reports the first mismatch.
    pub fn check_consistency(&self) -> Result<(), String> {
        for (i, n) in self.nodes.iter().enumerate() {
            let Some(cost) = &n.cost else {
                if n.parent.is_some() {
                    return Err(format!("node {i} has a parent but no cost"));
                }
                continue;
            };
            let Some(p) = n.parent else {
                if i != 0 {
                    return Err(format!("reached node {i} has no parent"));
                }
                continue;
            };
            let parent = &self.nodes[p as usize];
            let pc = parent.cost.as_ref().ok_or(format!("parent of {i} unreached"))?;
            let edge = self.out[p as usize]
                .iter()
                .find(|e| e.to == i as NodeId)
                .ok_or(format!("no product edge {p} → {i}"))?;
            if pc.extend(&edge.w, edge.dt) != *cost {
                return Err(format!("node {i}: stored cost differs from parent + edge"));
            }
        }
        Ok(())
    }

    /// Marks Kripke states with no reached product node inactive.
    pub fn prune_unreachable(&mut self) -> usize {
        let mut pruned = 0;
        for s in 0..self.kripke.len() {
            let reached = self.at_state[s]
                .iter()
                .any(|z| self.nodes[*z as usize].cost.is_some());
            if !reached && self.kripke.is_active(s) {
                self.kripke.set_active(s, false);
                pruned += 1;
            }
        }
        pruned
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::ticks;
    use crate::world::AtomicProposition::{self, *};

    fn l(props: &[AtomicProposition]) -> LabelSet {
        props.iter().copied().collect()
    }

    fn lane() -> LabelSet {
        l(&[Rl, Dir])
    }

    fn pose(x: f64) -> Pose {
        Pose::new(x, 0.0, 0.0)
    }

    /// Inserts a state with the given incoming and outgoing edges, in the
    /// planner's order.
    fn insert(
        p: &mut Product,
        rb: &WeightedRulebook,
        label: LabelSet,
        goal: bool,
        ins: &[(usize, f64)],
        outs: &[(usize, f64)],
    ) -> usize {
        let s = p.add_state(pose(0.0), label, goal);
        for &(from, d) in ins {
            p.connect(rb, from, s, d, None);
        }
        p.update_state(s);
        for &(to, d) in outs {
            p.rewire(rb, s, to, d, None);
        }
        p.propagate();
        p.check_consistency().unwrap();
        s
    }

    #[test]
    fn one_node_per_state_with_one_state_rules() {
        let rb = WeightedRulebook::road_rules();
        let mut p = Product::new(&rb, pose(0.0), lane(), false);
        insert(&mut p, &rb, lane(), false, &[(0, 1.0)], &[]);
        insert(&mut p, &rb, lane(), true, &[(0, 3.0), (1, 1.0)], &[]);
        for s in 0..3 {
            assert_eq!(p.nodes_at(s).len(), 1);
        }
        let best = p.best_cost().unwrap();
        assert_eq!(best.jt, ticks(2.0));
        assert!(best.ja.is_zero());
    }

    #[test]
    fn violating_edge_carries_weight() {
        let rb = WeightedRulebook::road_rules();
        let mut p = Product::new(&rb, pose(0.0), lane(), false);
        insert(&mut p, &rb, l(&[Ll]), true, &[(0, 2.5)], &[]);
        let best = p.best_cost().unwrap();
        assert_eq!(best.ja.weights(), &[0, 0, ticks(2.5)]);
    }

    #[test]
    fn equal_unsafety_prefers_shorter_time() {
        let rb = WeightedRulebook::road_rules();
        let mut p = Product::new(&rb, pose(0.0), lane(), false);
        insert(&mut p, &rb, lane(), false, &[(0, 2.0)], &[]);
        insert(&mut p, &rb, lane(), false, &[(0, 3.0)], &[]);
        // Via s1: 2 + 5 = 7, via s2: 3 + 2 = 5.
        let s = insert(&mut p, &rb, lane(), true, &[(1, 5.0), (2, 2.0)], &[]);
        let z = p.nodes_at(s)[0];
        assert_eq!(p.nodes()[z as usize].cost.as_ref().unwrap().jt, ticks(5.0));
        assert_eq!(p.trace_to(z), Trace(vec![0, 2, 3]));
    }

    #[test]
    fn rewire_reparents_and_propagates() {
        let rb = WeightedRulebook::road_rules();
        let mut p = Product::new(&rb, pose(0.0), lane(), false);
        // s1 via a 10 s edge, s2 below it, s3 below that.
        insert(&mut p, &rb, lane(), false, &[(0, 10.0)], &[]);
        insert(&mut p, &rb, lane(), false, &[(1, 1.0)], &[]);
        insert(&mut p, &rb, lane(), true, &[(2, 1.0)], &[]);
        assert_eq!(p.best_cost().unwrap().jt, ticks(12.0));
        // s4 reachable in 2 s offers s1 at 4 s: s1 drops by 6, and so do its
        // child and grandchild.
        let s4 = insert(&mut p, &rb, lane(), false, &[(0, 2.0)], &[(1, 2.0)]);
        let z1 = p.nodes_at(1)[0];
        assert_eq!(p.nodes()[z1 as usize].parent, Some(p.nodes_at(s4)[0]));
        assert_eq!(p.best_cost().unwrap().jt, ticks(6.0));
        let z3 = p.nodes_at(3)[0];
        assert_eq!(p.trace_to(z3), Trace(vec![0, 4, 1, 2, 3]));
    }

    #[test]
    fn no_improvement_leaves_tree_alone() {
        let rb = WeightedRulebook::road_rules();
        let mut p = Product::new(&rb, pose(0.0), lane(), false);
        insert(&mut p, &rb, lane(), false, &[(0, 1.0)], &[]);
        let before = p.tree_edges();
        insert(&mut p, &rb, lane(), false, &[(0, 5.0)], &[(1, 1.0)]);
        assert!(before.iter().all(|e| p.tree_edges().contains(e)));
        assert_eq!(p.nodes()[p.nodes_at(1)[0] as usize].parent, Some(0));
    }

    #[test]
    fn unsafety_dominates_time() {
        let rb = WeightedRulebook::road_rules();
        let mut p = Product::new(&rb, pose(0.0), lane(), false);
        // Fast route through a wrong-way state, slow clean route.
        insert(&mut p, &rb, l(&[Rl]), false, &[(0, 1.0)], &[]);
        insert(&mut p, &rb, lane(), false, &[(0, 30.0)], &[]);
        let g = insert(&mut p, &rb, lane(), true, &[(1, 1.0), (2, 1.0)], &[]);
        let z = p.nodes_at(g)[0];
        let c = p.nodes()[z as usize].cost.clone().unwrap();
        assert!(c.ja.is_zero());
        assert_eq!(c.jt, ticks(31.0));
        assert_eq!(p.trace_to(z), Trace(vec![0, 2, 3]));
    }
}
