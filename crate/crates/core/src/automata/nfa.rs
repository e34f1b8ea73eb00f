use super::guard::Guard;
use crate::world::LabelSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: usize,
    pub guard: Guard,
    pub to: usize,
}

/// Nondeterministic automaton over the pair alphabet `2^Π × 2^Π`.
///
/// A word `ℓ₀ … ℓₙ` is read as the symbols `(ℓ₀, ℓ₁), …, (ℓₙ₋₁, ℓₙ)`. The
/// empty word is accepted by convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    num_states: usize,
    initial: usize,
    accepting: Vec<bool>,
    transitions: Vec<Transition>,
}

impl Nfa {
    pub fn new(num_states: usize, initial: usize) -> Self {
        assert!(initial < num_states, "initial state out of range");
        Nfa {
            num_states,
            initial,
            accepting: vec![false; num_states],
            transitions: Vec::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn set_accepting(&mut self, q: usize, yes: bool) {
        self.accepting[q] = yes;
    }

    pub fn add_state(&mut self) -> usize {
        self.num_states += 1;
        self.accepting.push(false);
        self.num_states - 1
    }

    pub fn add_transition(&mut self, from: usize, guard: Guard, to: usize) {
        assert!(from < self.num_states && to < self.num_states);
        self.transitions.push(Transition { from, guard, to });
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn successors(
        &self,
        q: usize,
        from: LabelSet,
        to: LabelSet,
    ) -> impl Iterator<Item = usize> + '_ {
        self.transitions
            .iter()
            .filter(move |t| t.from == q && t.guard.holds(from, to))
            .map(|t| t.to)
    }

    /// True if some transition `q → q′` is enabled on `(from, to)`.
    pub fn has_transition(&self, q: usize, from: LabelSet, to: LabelSet, q2: usize) -> bool {
        self.transitions
            .iter()
            .any(|t| t.from == q && t.to == q2 && t.guard.holds(from, to))
    }

    pub fn accepts(&self, word: &[LabelSet]) -> bool {
        if word.is_empty() {
            return true;
        }
        let mut current = vec![false; self.num_states];
        current[self.initial] = true;
        for pair in word.windows(2) {
            let mut next = vec![false; self.num_states];
            for t in &self.transitions {
                if current[t.from] && t.guard.holds(pair[0], pair[1]) {
                    next[t.to] = true;
                }
            }
            current = next;
        }
        current.iter().zip(&self.accepting).any(|(c, a)| *c && *a)
    }

    /// Union of the guards leaving `q`.
    fn outgoing(&self, q: usize) -> Guard {
        let empty = Guard::always().complement();
        self.transitions
            .iter()
            .filter(|t| t.from == q)
            .fold(empty, |acc, t| acc.or(&t.guard))
    }

    pub fn is_complete(&self) -> bool {
        (0..self.num_states).all(|q| self.outgoing(q).is_valid())
    }

    /// Routes every missing symbol to a fresh rejecting sink with a universal
    /// self-loop. Complete automata come back unchanged.
    pub fn complete_nonblocking(&self) -> Nfa {
        let missing: Vec<(usize, Guard)> = (0..self.num_states)
            .filter_map(|q| {
                let out = self.outgoing(q);
                (!out.is_valid()).then(|| (q, out.complement()))
            })
            .collect();
        if missing.is_empty() {
            return self.clone();
        }
        let mut nfa = self.clone();
        let sink = nfa.add_state();
        for (q, guard) in missing {
            nfa.add_transition(q, guard, sink);
        }
        nfa.add_transition(sink, Guard::always(), sink);
        nfa
    }
}
