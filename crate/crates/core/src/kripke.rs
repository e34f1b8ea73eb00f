//! Durational Kripke structures over sampled poses.

use serde::{Deserialize, Serialize};

use crate::automata::{ticks, Weight};
use crate::geometry::{DubinsPath, Pose};
use crate::world::LabelSet;
use crate::{Error, Result};

/// Finite sequence of `(label, duration)` letters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimedWord {
    letters: Vec<(LabelSet, f64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Letter {
    labels: LabelSet,
    duration: f64,
}

impl TimedWord {
    pub fn new(letters: Vec<(LabelSet, f64)>) -> Self {
        assert!(
            letters.iter().all(|(_, d)| *d >= 0.0 && d.is_finite()),
            "durations must be finite and non-negative"
        );
        TimedWord { letters }
    }

    pub fn letters(&self) -> &[(LabelSet, f64)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn labels(&self) -> Vec<LabelSet> {
        self.letters.iter().map(|(l, _)| *l).collect()
    }

    pub fn duration(&self) -> f64 {
        self.letters.iter().map(|(_, d)| d).sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let letters: Vec<Letter> = serde_json::from_str(text)?;
        if letters.iter().any(|l| !(l.duration >= 0.0 && l.duration.is_finite())) {
            return Err(Error::InvalidArgument("durations must be non-negative".into()));
        }
        Ok(TimedWord {
            letters: letters.into_iter().map(|l| (l.labels, l.duration)).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        let letters: Vec<Letter> = self
            .letters
            .iter()
            .map(|(labels, duration)| Letter {
                labels: *labels,
                duration: *duration,
            })
            .collect();
        serde_json::to_string_pretty(&letters).expect("word serializes")
    }
}

/// Collapses runs of equal consecutive letters.
pub fn destutter<T: PartialEq + Copy>(word: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(word.len());
    for &x in word {
        if out.last() != Some(&x) {
            out.push(x);
        }
    }
    out
}

/// Sequence of state ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub to: usize,
    pub duration: f64,
    pub ticks: Weight,
    pub path: Option<DubinsPath>,
}

/// States are poses with labels; edges carry durations and, when built by
/// steering, the path that realizes them. State 0 is the initial state.
#[derive(Debug, Clone, Default)]
pub struct KripkeStructure {
    states: Vec<Pose>,
    labels: Vec<LabelSet>,
    out: Vec<Vec<Edge>>,
    incoming: Vec<Vec<usize>>,
    active: Vec<bool>,
    num_edges: usize,
}

impl KripkeStructure {
    pub fn new(initial: Pose, label: LabelSet) -> Self {
        let mut k = KripkeStructure::default();
        k.add_state(initial, label);
        k
    }

    pub fn add_state(&mut self, pose: Pose, label: LabelSet) -> usize {
        self.states.push(pose);
        self.labels.push(label);
        self.out.push(Vec::new());
        self.incoming.push(Vec::new());
        self.active.push(true);
        self.states.len() - 1
    }

    /// Adds `from → to`; returns false if the edge already existed.
    pub fn add_edge(&mut self, from: usize, to: usize, duration: f64, path: Option<DubinsPath>) -> bool {
        assert!(from < self.len() && to < self.len(), "edge endpoint out of range");
        if self.edge(from, to).is_some() {
            return false;
        }
        self.out[from].push(Edge {
            to,
            duration,
            ticks: ticks(duration),
            path,
        });
        self.incoming[to].push(from);
        self.num_edges += 1;
        true
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn pose(&self, s: usize) -> &Pose {
        &self.states[s]
    }

    pub fn poses(&self) -> &[Pose] {
        &self.states
    }

    pub fn label(&self, s: usize) -> LabelSet {
        self.labels[s]
    }

    pub fn out_edges(&self, s: usize) -> &[Edge] {
        &self.out[s]
    }

    pub fn in_neighbors(&self, s: usize) -> &[usize] {
        &self.incoming[s]
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<&Edge> {
        self.out[from].iter().find(|e| e.to == to)
    }

    pub fn is_active(&self, s: usize) -> bool {
        self.active[s]
    }

    pub fn set_active(&mut self, s: usize, yes: bool) {
        self.active[s] = yes;
    }

    fn check(&self, trace: &Trace) -> Result<()> {
        match trace.0.first() {
            None => return Err(Error::InvalidTrace("empty trace".into())),
            Some(&s) if s != self.initial() => {
                return Err(Error::InvalidTrace(format!("trace starts at {s}, not the initial state")))
            }
            _ => {}
        }
        if let Some(&s) = trace.0.iter().find(|s| **s >= self.len()) {
            return Err(Error::InvalidTrace(format!("unknown state {s}")));
        }
        for w in trace.0.windows(2) {
            if self.edge(w[0], w[1]).is_none() {
                return Err(Error::InvalidTrace(format!("no edge {} → {}", w[0], w[1])));
            }
        }
        Ok(())
    }

    /// `(L(sᵢ), Δ(sᵢ, sᵢ₊₁))` for each state, with a zero final duration.
    pub fn timed_word(&self, trace: &Trace) -> Result<TimedWord> {
        self.check(trace)?;
        let s = &trace.0;
        let letters = (0..s.len())
            .map(|i| {
                let d = if i + 1 < s.len() {
                    self.edge(s[i], s[i + 1]).unwrap().duration
                } else {
                    0.0
                };
                (self.labels[s[i]], d)
            })
            .collect();
        Ok(TimedWord::new(letters))
    }

    pub fn trace_duration(&self, trace: &Trace) -> Result<f64> {
        self.check(trace)?;
        Ok(trace
            .0
            .windows(2)
            .map(|w| self.edge(w[0], w[1]).unwrap().duration)
            .sum())
    }

    /// Start pose and path of every edge along the trace.
    pub fn path_pieces(&self, trace: &Trace) -> Result<Vec<(Pose, DubinsPath)>> {
        self.check(trace)?;
        trace
            .0
            .windows(2)
            .map(|w| {
                let e = self.edge(w[0], w[1]).unwrap();
                e.path
                    .clone()
                    .map(|p| (self.states[w[0]], p))
                    .ok_or_else(|| Error::InvalidTrace(format!("edge {} → {} has no path", w[0], w[1])))
            })
            .collect()
    }
}
