use serde::{Deserialize, Serialize};

use super::nfa::Nfa;
use super::weight::{ticks, Weight, TICKS_PER_SECOND};
use crate::fltl::{compile_safety, parse, Formula};
use crate::kripke::TimedWord;
use crate::world::LabelSet;
use crate::{Error, Result};

/// Longest word the vanish oracle will enumerate.
pub const ORACLE_MAX_LEN: usize = 16;

/// How a violating transition is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    /// `ϖ · Δ`, the time spent on the transition.
    Duration,
    /// `ϖ` once, whatever the duration.
    Event,
}

/// A safety rule: its automaton, weight and cost mode.
#[derive(Debug, Clone)]
pub struct RuleAutomaton {
    pub name: String,
    pub formula: Formula,
    pub weight: u32,
    pub cost_mode: CostMode,
    nfa: Nfa,
    completed: Nfa,
}

impl RuleAutomaton {
    pub fn new(name: impl Into<String>, formula: Formula, weight: u32, cost_mode: CostMode) -> Result<Self> {
        if weight == 0 {
            return Err(Error::InvalidRulebook("rule weight must be positive".into()));
        }
        let nfa = compile_safety(&formula)?;
        let completed = nfa.complete_nonblocking();
        Ok(RuleAutomaton {
            name: name.into(),
            formula,
            weight,
            cost_mode,
            nfa,
            completed,
        })
    }

    pub fn parse(name: impl Into<String>, text: &str, weight: u32, cost_mode: CostMode) -> Result<Self> {
        Self::new(name, parse(text)?, weight, cost_mode)
    }

    /// The compiled automaton. Augmentation weights its transitions.
    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    /// The non-blocking completion of [`Self::nfa`].
    pub fn completed(&self) -> &Nfa {
        &self.completed
    }

    pub fn num_states(&self) -> usize {
        self.nfa.num_states()
    }

    /// Charge for one violating transition of duration `delta`.
    pub fn violation_cost(&self, delta: Weight) -> Weight {
        match self.cost_mode {
            CostMode::Duration => self.weight as Weight * delta,
            CostMode::Event => self.weight as Weight * TICKS_PER_SECOND,
        }
    }

    /// One step of the weighted augmentation: every state is a successor,
    /// free if the compiled automaton has that transition and charged
    /// [`Self::violation_cost`] otherwise.
    pub fn augmented_step(
        &self,
        q: usize,
        from: LabelSet,
        to: LabelSet,
        delta: Weight,
    ) -> impl Iterator<Item = (usize, Weight)> + '_ {
        let cost = self.violation_cost(delta);
        (0..self.nfa.num_states()).map(move |q2| {
            let w = if self.nfa.has_transition(q, from, to, q2) {
                0
            } else {
                cost
            };
            (q2, w)
        })
    }

    /// Weight of the cheapest accepting run of the augmented automaton.
    pub fn unsafety_of_word(&self, word: &TimedWord) -> Weight {
        let letters = word.letters();
        if letters.is_empty() {
            return 0;
        }
        let n = self.nfa.num_states();
        let mut dist = vec![Weight::MAX; n];
        dist[self.nfa.initial()] = 0;
        for i in 0..letters.len() - 1 {
            let (from, d) = letters[i];
            let to = letters[i + 1].0;
            let delta = ticks(d);
            let mut next = vec![Weight::MAX; n];
            for (q, &w) in dist.iter().enumerate() {
                if w == Weight::MAX {
                    continue;
                }
                for (q2, c) in self.augmented_step(q, from, to, delta) {
                    next[q2] = next[q2].min(w + c);
                }
            }
            dist = next;
        }
        (0..n)
            .filter(|q| self.nfa.is_accepting(*q))
            .map(|q| dist[q])
            .min()
            .unwrap_or(Weight::MAX)
    }

    /// Level of unsafety by brute force: the cheapest set of letters whose
    /// erasure leaves an accepted word.
    pub fn vanish_oracle(&self, word: &TimedWord) -> Result<Weight> {
        let letters = word.letters();
        if letters.len() > ORACLE_MAX_LEN {
            return Err(Error::OracleLimit {
                len: letters.len(),
                max: ORACLE_MAX_LEN,
            });
        }
        let costs: Vec<Weight> = letters.iter().map(|(_, d)| self.violation_cost(ticks(*d))).collect();
        let mut best = Weight::MAX;
        let mut kept = Vec::with_capacity(letters.len());
        for erased in 0u32..(1 << letters.len()) {
            let cost: Weight = (0..letters.len())
                .filter(|i| erased & (1 << i) != 0)
                .map(|i| costs[i])
                .sum();
            if cost >= best {
                continue;
            }
            kept.clear();
            kept.extend(
                (0..letters.len())
                    .filter(|i| erased & (1 << i) == 0)
                    .map(|i| letters[i].0),
            );
            if self.nfa.accepts(&kept) {
                best = cost;
            }
        }
        Ok(best)
    }
}
