//! Rule automata over the pair alphabet, weighted augmentation, prioritized
//! rulebooks and the level of unsafety.

mod guard;
mod nfa;
mod rule;
mod rulebook;
mod weight;

pub use guard::{Guard, GuardExpr};
pub use nfa::{Nfa, Transition};
pub use rule::{CostMode, RuleAutomaton, ORACLE_MAX_LEN};
pub use rulebook::{CombinedState, WeightedRulebook};
pub use weight::{seconds, ticks, UnsafetyVector, Weight, TICKS_PER_SECOND};
