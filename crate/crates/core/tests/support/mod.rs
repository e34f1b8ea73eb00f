//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;
use std::path::PathBuf;

use mvp_core::automata::{ticks, CostMode, RuleAutomaton, Weight, TICKS_PER_SECOND};
use mvp_core::fltl::Slot;
use mvp_core::planner::InjectedStructure;
use mvp_core::{AtomicProposition, Formula, LabelSet, Pose, TimedWord, WeightedRulebook};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

// ---------------------------------------------------------------------------
// Random words and rules

/// Label sets a road scene actually produces, plus a few odd ones.
pub const ROAD_LABELS: [&[AtomicProposition]; 12] = {
    use AtomicProposition::*;
    [
        &[Rl, Dir],
        &[Rl],
        &[Ll],
        &[Ll, Dir],
        &[Rl, Dir, Dotted],
        &[Ll, Dotted],
        &[Rl, Dir, Solid],
        &[Ll, Solid],
        &[Sw],
        &[Sw, Rl, Dir],
        &[],
        &[Rl, Ll, Dotted, Solid],
    ]
};

pub fn road_label<R: Rng>(rng: &mut R) -> LabelSet {
    if rng.random_bool(0.2) {
        LabelSet::from_bits(rng.random_range(0..64))
    } else {
        ROAD_LABELS[rng.random_range(0..ROAD_LABELS.len())].iter().copied().collect()
    }
}

/// A duration on a quarter-second grid, so tick counts are exact.
pub fn quarter_seconds<R: Rng>(rng: &mut R, max_quarters: u32) -> f64 {
    rng.random_range(0..=max_quarters) as f64 / 4.0
}

pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> TimedWord {
    let len = rng.random_range(0..=max_len);
    TimedWord::new((0..len).map(|_| (road_label(rng), quarter_seconds(rng, 16))).collect())
}

fn random_slot<R: Rng>(rng: &mut R) -> Slot {
    if rng.random_bool(0.25) {
        Slot::Any
    } else {
        Slot::Prop(AtomicProposition::ALL[rng.random_range(0..6)])
    }
}

fn random_boolean<R: Rng>(rng: &mut R, depth: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        return Formula::atom(random_slot(rng), random_slot(rng));
    }
    match rng.random_range(0..3) {
        0 => Formula::not(random_boolean(rng, depth - 1)),
        1 => Formula::or(random_boolean(rng, depth - 1), random_boolean(rng, depth - 1)),
        _ => Formula::and(random_boolean(rng, depth - 1), random_boolean(rng, depth - 1)),
    }
}

/// `G β` for a random pair-atom formula `β`, with random weight and mode.
pub fn random_rule<R: Rng>(rng: &mut R, name: &str) -> RuleAutomaton {
    let formula = Formula::globally(random_boolean(rng, 3));
    let mode = if rng.random_bool(0.5) {
        CostMode::Duration
    } else {
        CostMode::Event
    };
    RuleAutomaton::new(name, formula, rng.random_range(1..=5), mode).expect("safety fragment")
}

pub fn random_rulebook<R: Rng>(rng: &mut R) -> WeightedRulebook {
    let classes = rng.random_range(1..=3);
    let classes = (0..classes)
        .map(|c| {
            (0..rng.random_range(1..=2))
                .map(|i| random_rule(rng, &format!("r{c}_{i}")))
                .collect()
        })
        .collect();
    WeightedRulebook::new(classes).unwrap()
}

// ---------------------------------------------------------------------------
// Exhaustive lexicographic shortest paths over a hand-built structure

/// Charge of one transition, from the formula alone.
pub fn edge_weights(rulebook: &WeightedRulebook, from: LabelSet, to: LabelSet, d: f64) -> Vec<Weight> {
    let mut w = vec![0; rulebook.num_classes()];
    for (class, rule) in rulebook.rules() {
        // A safety rule `G β` holds on a two-letter word iff β holds on the pair.
        if !rule.formula.evaluate(&[from, to]) {
            w[class] += rule.weight as Weight
                * match rule.cost_mode {
                    CostMode::Duration => ticks(d),
                    CostMode::Event => TICKS_PER_SECOND,
                };
        }
    }
    w
}

pub type LexCost = (Vec<Weight>, Weight);

fn add(a: &LexCost, w: &[Weight], dt: Weight) -> LexCost {
    (a.0.iter().zip(w).map(|(x, y)| x + y).collect(), a.1 + dt)
}

/// Cheapest `(unsafety, time)` from state 0 to any goal state.
pub fn lex_dijkstra(s: &InjectedStructure, rulebook: &WeightedRulebook) -> Option<LexCost> {
    let n = s.states.len();
    let mut best: Vec<Option<LexCost>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    best[0] = Some((vec![0; rulebook.num_classes()], 0));
    heap.push(Reverse((best[0].clone().unwrap(), 0usize)));
    while let Some(Reverse((c, u))) = heap.pop() {
        if best[u].as_ref() != Some(&c) {
            continue;
        }
        for &(a, b, d) in &s.edges {
            if a != u {
                continue;
            }
            let w = edge_weights(rulebook, s.states[a].1, s.states[b].1, d);
            let next = add(&c, &w, ticks(d));
            if best[b].as_ref().is_none_or(|old| next < *old) {
                best[b] = Some(next.clone());
                heap.push(Reverse((next, b)));
            }
        }
    }
    (0..n).filter(|&i| s.states[i].2).filter_map(|i| best[i].clone()).min()
}

/// Cost of walking `trace` through the structure.
pub fn trace_cost(s: &InjectedStructure, rulebook: &WeightedRulebook, trace: &[usize]) -> LexCost {
    let mut c: LexCost = (vec![0; rulebook.num_classes()], 0);
    for pair in trace.windows(2) {
        let &(_, _, d) = s
            .edges
            .iter()
            .find(|(a, b, _)| *a == pair[0] && *b == pair[1])
            .expect("trace follows edges");
        let w = edge_weights(rulebook, s.states[pair[0]].1, s.states[pair[1]].1, d);
        c = add(&c, &w, ticks(d));
    }
    c
}

pub fn random_structure<R: Rng>(rng: &mut R, max_states: usize, max_edges: usize) -> InjectedStructure {
    let n = rng.random_range(2..=max_states);
    let states = (0..n)
        .map(|i| (Pose::new(i as f64, 0.0, 0.0), road_label(rng), i > 0 && rng.random_bool(0.4)))
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let most = max_edges.min(pairs.len());
    let m = rng.random_range((2 * n).min(most)..=most);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (a, b) = pairs.swap_remove(rng.random_range(0..pairs.len()));
        edges.push((a, b, quarter_seconds(rng, 16)));
    }
    InjectedStructure { states, edges }
}

// ---------------------------------------------------------------------------
// Dubins lengths by brute force over three constant-curvature segments

/// Steering: +1 left, 0 straight, -1 right.
fn drive(p: (f64, f64, f64), u: f64, t: f64, rho: f64) -> (f64, f64, f64) {
    let (x, y, th) = p;
    if u == 0.0 {
        (x + t * th.cos(), y + t * th.sin(), th)
    } else {
        let th2 = th + u * t / rho;
        (
            x + (th2.sin() - th.sin()) * rho / u,
            y + (th.cos() - th2.cos()) * rho / u,
            th2,
        )
    }
}

fn wrap(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

/// The two free lengths of a control triple map to the endpoint position;
/// the remaining length closes the heading.
struct Family {
    u: [f64; 3],
    rho: f64,
    start: (f64, f64, f64),
    goal: (f64, f64, f64),
}

impl Family {
    /// Full lengths and position error for free parameters `(a, b)`.
    fn eval(&self, a: f64, b: f64) -> Option<([f64; 3], f64)> {
        let [u1, u2, u3] = self.u;
        let rho = self.rho;
        let t = if u3 != 0.0 {
            let p = drive(drive(self.start, u1, a, rho), u2, b, rho);
            [a, b, rho * wrap(u3 * (self.goal.2 - p.2))]
        } else if u2 != 0.0 {
            let p = drive(self.start, u1, a, rho);
            let t2 = rho * wrap(u2 * (self.goal.2 - p.2));
            let q = drive(p, u2, t2, rho);
            let t3 = (self.goal.0 - q.0) * q.2.cos() + (self.goal.1 - q.1) * q.2.sin();
            [a, t2, t3]
        } else if u1 != 0.0 {
            let t1 = rho * wrap(u1 * (self.goal.2 - self.start.2));
            let p = drive(self.start, u1, t1, rho);
            let s = (self.goal.0 - p.0) * p.2.cos() + (self.goal.1 - p.1) * p.2.sin();
            [t1, s, 0.0]
        } else {
            let s = (self.goal.0 - self.start.0) * self.start.2.cos()
                + (self.goal.1 - self.start.1) * self.start.2.sin();
            [s, 0.0, 0.0]
        };
        if t.iter().any(|&x| x < -1e-9) {
            return None;
        }
        let mut p = self.start;
        for i in 0..3 {
            p = drive(p, self.u[i], t[i].max(0.0), rho);
        }
        let err = (p.0 - self.goal.0).hypot(p.1 - self.goal.1);
        let herr = (p.2 - self.goal.2).sin().abs() + (1.0 - (p.2 - self.goal.2).cos());
        Some((t, err + herr))
    }

    fn free_dims(&self) -> usize {
        match self.u {
            [_, _, u3] if u3 != 0.0 => 2,
            [_, u2, _] if u2 != 0.0 => 1,
            _ => 0,
        }
    }

    /// Coordinate-wise pattern search from a grid seed.
    fn refine(&self, mut a: f64, mut b: f64, mut step: f64) -> Option<([f64; 3], f64)> {
        let dims = self.free_dims();
        let mut best = self.eval(a, b)?;
        let mut budget = 20_000;
        while step > 1e-12 && budget > 0 {
            budget -= 1;
            let mut moved = false;
            for (da, db) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                if dims < 2 && db != 0.0 {
                    continue;
                }
                let (na, nb) = ((a + da).max(0.0), (b + db).max(0.0));
                if let Some(c) = self.eval(na, nb) {
                    if c.1 < best.1 {
                        (a, b, best) = (na, nb, c);
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        Some(best)
    }
}

/// Shortest curvature-bounded path length found by gridding every control
/// triple and polishing the best cells.
pub fn brute_force_dubins_length(from: &Pose, to: &Pose, rho: f64, grid: usize) -> Option<f64> {
    let start = (from.x, from.y, from.theta);
    let goal = (to.x, to.y, to.theta);
    let dist = (to.x - from.x).hypot(to.y - from.y);
    let mut best: Option<f64> = None;
    for u1 in [-1.0, 0.0, 1.0] {
        for u2 in [-1.0, 0.0, 1.0] {
            for u3 in [-1.0, 0.0, 1.0] {
                let fam = Family {
                    u: [u1, u2, u3],
                    rho,
                    start,
                    goal,
                };
                let span = |u: f64| if u == 0.0 { dist + 4.0 * rho } else { TAU * rho };
                let (na, nb) = match fam.free_dims() {
                    2 => (grid, grid),
                    1 => (grid * 8, 1),
                    _ => (1, 1),
                };
                let (sa, sb) = (span(u1) / na as f64, span(u2) / nb as f64);
                let mut cells: Vec<(f64, f64, f64)> = Vec::new();
                for i in 0..na {
                    for j in 0..nb {
                        let (a, b) = (i as f64 * sa, j as f64 * sb);
                        if let Some((_, err)) = fam.eval(a, b) {
                            cells.push((err, a, b));
                        }
                    }
                }
                cells.sort_by(|x, y| x.0.total_cmp(&y.0));
                for &(_, a, b) in cells.iter().take(12) {
                    if let Some((t, err)) = fam.refine(a, b, sa.max(sb)) {
                        if err < 1e-6 {
                            let len: f64 = t.iter().sum();
                            best = Some(best.map_or(len, |b: f64| b.min(len)));
                        }
                    }
                }
            }
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Statistics

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Times a trajectory passes from one side of the line `y = c` to the other.
pub fn crossings(trajectory: &[[f64; 3]], c: f64) -> usize {
    trajectory
        .windows(2)
        .filter(|w| (w[0][1] < c) != (w[1][1] < c))
        .count()
}
