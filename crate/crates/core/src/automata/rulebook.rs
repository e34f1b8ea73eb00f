use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::rule::{CostMode, RuleAutomaton};
use super::weight::{ticks, UnsafetyVector, Weight};
use crate::fltl::rules;
use crate::kripke::TimedWord;
use crate::world::LabelSet;
use crate::{Error, Result};

/// One state per rule, in class order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombinedState(pub Vec<u16>);

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleSpec {
    name: String,
    formula: String,
    weight: u32,
    cost_mode: CostMode,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RulebookSpec {
    classes: Vec<Vec<RuleSpec>>,
}

/// Prioritized rule classes; class 0 is the most important.
#[derive(Debug, Clone, Default)]
pub struct WeightedRulebook {
    classes: Vec<Vec<RuleAutomaton>>,
}

impl WeightedRulebook {
    pub fn new(classes: Vec<Vec<RuleAutomaton>>) -> Result<Self> {
        if classes.iter().any(|c| c.is_empty()) {
            return Err(Error::InvalidRulebook("priority classes must be non-empty".into()));
        }
        if classes.iter().flatten().any(|r| r.num_states() > u16::MAX as usize) {
            return Err(Error::InvalidRulebook("rule automaton too large".into()));
        }
        Ok(WeightedRulebook { classes })
    }

    pub fn empty() -> Self {
        WeightedRulebook::default()
    }

    /// The four road rules: sidewalk, then solid lines, then direction and
    /// dotted lines.
    pub fn road_rules() -> Self {
        let r = |name, text, w, mode| {
            RuleAutomaton::parse(name, text, w, mode).expect("built-in rule compiles")
        };
        WeightedRulebook::new(vec![
            vec![r("no_sidewalk", rules::NO_SIDEWALK, 1, CostMode::Duration)],
            vec![r("no_solid_crossing", rules::NO_SOLID_CROSSING, 1, CostMode::Event)],
            vec![
                r("right_direction", rules::RIGHT_DIRECTION, 1, CostMode::Duration),
                r("no_dotted_crossing", rules::NO_DOTTED_CROSSING, 10, CostMode::Event),
            ],
        ])
        .expect("classes are non-empty")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: RulebookSpec = serde_json::from_str(text)?;
        let classes = spec
            .classes
            .into_iter()
            .map(|class| {
                class
                    .into_iter()
                    .map(|r| {
                        RuleAutomaton::parse(r.name.clone(), &r.formula, r.weight, r.cost_mode)
                            .map_err(|e| Error::InvalidRulebook(format!("rule `{}`: {e}", r.name)))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(classes)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let spec = RulebookSpec {
            classes: self
                .classes
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|r| RuleSpec {
                            name: r.name.clone(),
                            formula: r.formula.to_string(),
                            weight: r.weight,
                            cost_mode: r.cost_mode,
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&spec).expect("rulebook serializes")
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<RuleAutomaton>] {
        &self.classes
    }

    /// Rules in combined-state order, with their class index.
    pub fn rules(&self) -> impl Iterator<Item = (usize, &RuleAutomaton)> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |r| (i, r)))
    }

    pub fn num_rules(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    pub fn zero(&self) -> UnsafetyVector {
        UnsafetyVector::zeros(self.num_classes())
    }

    pub fn initial(&self) -> CombinedState {
        CombinedState(self.rules().map(|(_, r)| r.nfa().initial() as u16).collect())
    }

    pub fn is_accepting(&self, q: &CombinedState) -> bool {
        self.rules()
            .zip(&q.0)
            .all(|((_, r), s)| r.nfa().is_accepting(*s as usize))
    }

    /// Successors of `q` on `(from, to)` lasting `delta` ticks, each with its
    /// per-class weight vector.
    pub fn combined_step(
        &self,
        q: &CombinedState,
        from: LabelSet,
        to: LabelSet,
        delta: Weight,
    ) -> Vec<(CombinedState, UnsafetyVector)> {
        let mut out = vec![(CombinedState(Vec::with_capacity(q.0.len())), self.zero())];
        for ((class, rule), s) in self.rules().zip(&q.0) {
            let moves: Vec<(usize, Weight)> =
                rule.augmented_step(*s as usize, from, to, delta).collect();
            out = out
                .into_iter()
                .flat_map(|(state, vec)| {
                    moves.iter().map(move |(q2, w)| {
                        let mut state = state.clone();
                        state.0.push(*q2 as u16);
                        let mut vec = vec.clone();
                        vec.add_at(class, *w);
                        (state, vec)
                    })
                })
                .collect();
        }
        out
    }

    /// Lexicographically cheapest accepting run of the combined automaton.
    pub fn shortest_run(&self, word: &TimedWord) -> UnsafetyVector {
        let letters = word.letters();
        if letters.is_empty() {
            return self.zero();
        }
        let mut frontier: BTreeMap<CombinedState, UnsafetyVector> = BTreeMap::new();
        frontier.insert(self.initial(), self.zero());
        for i in 0..letters.len() - 1 {
            let (from, d) = letters[i];
            let to = letters[i + 1].0;
            let mut next: BTreeMap<CombinedState, UnsafetyVector> = BTreeMap::new();
            for (q, cost) in &frontier {
                for (q2, w) in self.combined_step(q, from, to, ticks(d)) {
                    let total = cost + &w;
                    match next.get_mut(&q2) {
                        Some(best) if *best <= total => {}
                        Some(best) => *best = total,
                        None => {
                            next.insert(q2, total);
                        }
                    }
                }
            }
            frontier = next;
        }
        frontier
            .into_iter()
            .filter(|(q, _)| self.is_accepting(q))
            .map(|(_, v)| v)
            .min()
            .expect("augmented automata accept every word")
    }

    /// Per-class sums of per-rule unsafety.
    pub fn unsafety_vector(&self, word: &TimedWord) -> UnsafetyVector {
        let mut v = self.zero();
        for (class, rule) in self.rules() {
            v.add_at(class, rule.unsafety_of_word(word));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::TICKS_PER_SECOND;
    use crate::world::AtomicProposition::{self, *};

    fn road_rulebook() -> WeightedRulebook {
        WeightedRulebook::road_rules()
    }

    fn l(props: &[AtomicProposition]) -> LabelSet {
        props.iter().copied().collect()
    }

    fn ws(v: &[Weight]) -> UnsafetyVector {
        UnsafetyVector::from_weights(v.to_vec())
    }

    #[test]
    fn all_satisfied_step() {
        let rb = road_rulebook();
        let q = rb.initial();
        let out = rb.combined_step(&q, l(&[Rl, Dir]), l(&[Rl, Dir]), ticks(4.2));
        assert_eq!(out, vec![(q, rb.zero())]);
    }

    #[test]
    fn direction_violation_is_duration_scaled() {
        let rb = road_rulebook();
        let q = rb.initial();
        let out = rb.combined_step(&q, l(&[Rl]), l(&[Rl]), ticks(4.2));
        assert_eq!(out[0].1, ws(&[0, 0, 4_200_000_000]));
    }

    #[test]
    fn solid_crossing_is_one_event() {
        let rb = road_rulebook();
        let q = rb.initial();
        let out = rb.combined_step(&q, l(&[Rl, Dir, Solid]), l(&[Ll, Dir, Solid]), ticks(4.2));
        assert_eq!(out[0].1, ws(&[0, TICKS_PER_SECOND, 0]));
    }

    #[test]
    fn zero_duration_keeps_only_events() {
        let rb = road_rulebook();
        let q = rb.initial();
        let out = rb.combined_step(&q, l(&[Rl, Dotted]), l(&[Ll, Dotted]), 0);
        assert_eq!(out[0].1, ws(&[0, 0, 10 * TICKS_PER_SECOND]));
    }

    #[test]
    fn json_round_trip() {
        let rb = road_rulebook();
        let again = WeightedRulebook::from_json(&rb.to_json()).unwrap();
        assert_eq!(again.num_rules(), 4);
        assert_eq!(again.classes()[2][1].weight, 10);
        assert_eq!(again.classes()[2][1].formula, rb.classes()[2][1].formula);
    }

    #[test]
    fn bad_rulebooks() {
        assert!(WeightedRulebook::from_json(r#"{"classes": [[]]}"#).is_err());
        let bad_formula = r#"{"classes": [[{"name": "x", "formula": "F (_, sw)", "weight": 1, "cost_mode": "event"}]]}"#;
        assert!(matches!(
            WeightedRulebook::from_json(bad_formula),
            Err(Error::InvalidRulebook(_))
        ));
        assert!(WeightedRulebook::from_json(r#"{"classes": []}"#).unwrap().num_classes() == 0);
    }

    #[test]
    fn single_rule_vector_is_its_unsafety() {
        let rule = RuleAutomaton::parse("sw", rules::NO_SIDEWALK, 1, CostMode::Duration).unwrap();
        let rb = WeightedRulebook::new(vec![vec![rule.clone()]]).unwrap();
        let w = TimedWord::new(vec![(l(&[Rl]), 2.0), (l(&[Sw]), 3.0), (l(&[Rl]), 0.0)]);
        assert_eq!(rb.unsafety_vector(&w), ws(&[rule.unsafety_of_word(&w)]));
        assert_eq!(rb.shortest_run(&w), rb.unsafety_vector(&w));
    }
}
