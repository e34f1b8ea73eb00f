use super::{Formula, Slot};
use crate::automata::{Guard, GuardExpr, Nfa};
use crate::{Error, Result};

/// Compiles `G β`, with `β` a Boolean combination of atoms, into a one-state
/// automaton whose single self-loop is guarded by `β`.
pub fn compile_safety(formula: &Formula) -> Result<Nfa> {
    let Formula::Globally(body) = formula else {
        return Err(Error::UnsupportedFragment(format!(
            "expected `G β` with β Boolean, got {formula}"
        )));
    };
    let guard = Guard::new(guard_expr(body)?);
    let mut nfa = Nfa::new(1, 0);
    nfa.set_accepting(0, true);
    nfa.add_transition(0, guard, 0);
    Ok(nfa)
}

fn guard_expr(f: &Formula) -> Result<GuardExpr> {
    Ok(match f {
        Formula::Atom(Slot::Any, Slot::Any) => GuardExpr::True,
        Formula::Atom(a, b) => GuardExpr::Pair(*a, *b),
        Formula::Not(x) => GuardExpr::Not(Box::new(guard_expr(x)?)),
        Formula::Or(a, b) => GuardExpr::Or(Box::new(guard_expr(a)?), Box::new(guard_expr(b)?)),
        _ => {
            return Err(Error::UnsupportedFragment(format!(
                "temporal operator inside the guard: {f}"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fltl::tests::arb_boolean;
    use crate::fltl::{parse, rules};
    use crate::world::{AtomicProposition, LabelSet};
    use proptest::prelude::*;

    #[test]
    fn sidewalk_rule_is_one_state() {
        let nfa = compile_safety(&parse(rules::NO_SIDEWALK).unwrap()).unwrap();
        assert_eq!(nfa.num_states(), 1);
        assert!(nfa.is_accepting(0));
        let sw = LabelSet::EMPTY.with(AtomicProposition::Sw);
        for a in LabelSet::all() {
            for b in LabelSet::all() {
                let has = nfa.successors(0, a, b).next().is_some();
                assert_eq!(has, !b.contains(AtomicProposition::Sw));
            }
        }
        assert!(!nfa.accepts(&[LabelSet::EMPTY, sw]));
    }

    #[test]
    fn universal_rule_accepts_everything() {
        let nfa = compile_safety(&parse("G (_, _)").unwrap()).unwrap();
        for a in LabelSet::all() {
            assert!(nfa.accepts(&[a, LabelSet::EMPTY, a]));
        }
        assert!(nfa.is_complete());
    }

    #[test]
    fn outside_fragment_is_rejected() {
        for text in ["(rl, ll)", "G F (rl, ll)", "G ((rl,ll) U (ll,rl))", "!G (rl,ll)"] {
            let f = parse(text).unwrap();
            assert!(
                matches!(compile_safety(&f), Err(Error::UnsupportedFragment(_))),
                "{text}"
            );
        }
    }

    fn arb_word() -> impl Strategy<Value = Vec<LabelSet>> {
        prop::collection::vec((0u8..64).prop_map(LabelSet::from_bits), 0..7)
    }

    #[test]
    fn dotted_rule_matches_evaluator_on_random_words() {
        use rand::{Rng, SeedableRng};
        let f = parse(rules::NO_DOTTED_CROSSING).unwrap();
        let nfa = compile_safety(&f).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let len = rng.random_range(0..=6);
            // Bias toward the propositions the rule mentions.
            let word: Vec<LabelSet> = (0..len)
                .map(|_| LabelSet::from_bits(rng.random::<u8>() & 0b11_0110))
                .collect();
            assert_eq!(nfa.accepts(&word), f.evaluate(&word), "{word:?}");
        }
    }

    #[test]
    fn exhaustive_agreement_on_three_propositions() {
        use AtomicProposition::*;
        let sub = [Rl, Ll, Dotted];
        let letters: Vec<LabelSet> = (0u8..8)
            .map(|m| (0..3).filter(|i| m & (1 << i) != 0).map(|i| sub[i]).collect())
            .collect();
        let corpus = [
            rules::NO_SIDEWALK,
            rules::NO_SOLID_CROSSING,
            rules::RIGHT_DIRECTION,
            rules::NO_DOTTED_CROSSING,
            "G ((rl, _) | !(_, dotted))",
            "G !((ll, rl) | (rl, ll))",
        ];
        for text in corpus {
            let f = parse(text).unwrap();
            let nfa = compile_safety(&f).unwrap();
            let mut words: Vec<Vec<LabelSet>> = vec![vec![]];
            for _ in 0..4 {
                let next: Vec<Vec<LabelSet>> = words
                    .iter()
                    .filter(|w| w.len() < 4)
                    .flat_map(|w| {
                        letters.iter().map(move |l| {
                            let mut v = w.clone();
                            v.push(*l);
                            v
                        })
                    })
                    .collect();
                for w in &next {
                    assert_eq!(nfa.accepts(w), f.evaluate(w), "{text} on {w:?}");
                }
                words = next;
            }
        }
    }

    proptest! {
        #[test]
        fn random_fragment_rules_agree(b in arb_boolean(), w in arb_word()) {
            let f = Formula::globally(b);
            let nfa = compile_safety(&f).unwrap();
            prop_assert_eq!(nfa.accepts(&w), f.evaluate(&w));
        }
    }
}
