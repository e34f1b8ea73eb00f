//! Finite-trace temporal formulas over transition-pair atoms.
//!
//! An atom `(a, b)` holds at position `i` of a word when `a` labels letter `i`
//! and `b` labels letter `i + 1`. `_` matches any letter. Temporal operators
//! range over transition positions `0..n-1` of a word of `n` letters, so
//! `G φ` constrains every transition and says nothing about single-letter
//! words. The empty word satisfies every formula.

mod compile;
mod parser;

use std::fmt;
use std::str::FromStr;

use crate::world::{AtomicProposition, LabelSet};
use crate::{Error, Result};

pub use compile::compile_safety;
pub use parser::parse;

/// One side of an atom: a proposition or the wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Any,
    Prop(AtomicProposition),
}

impl Slot {
    pub fn matches(self, label: LabelSet) -> bool {
        match self {
            Slot::Any => true,
            Slot::Prop(p) => label.contains(p),
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Any => f.write_str("_"),
            Slot::Prop(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Slot, Slot),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Globally(Box<Formula>),
    Finally(Box<Formula>),
}

impl Formula {
    pub fn atom(a: Slot, b: Slot) -> Self {
        Formula::Atom(a, b)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `a & b`, stored as `!(!a | !b)`.
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    pub fn finally(f: Formula) -> Self {
        Formula::Finally(Box::new(f))
    }

    /// Operands of a desugared conjunction, if `self` has that shape.
    fn as_and(&self) -> Option<(&Formula, &Formula)> {
        let Formula::Not(inner) = self else {
            return None;
        };
        let Formula::Or(l, r) = inner.as_ref() else {
            return None;
        };
        match (l.as_ref(), r.as_ref()) {
            (Formula::Not(a), Formula::Not(b)) => Some((a, b)),
            _ => None,
        }
    }

    /// Truth value on a word, at position 0.
    pub fn evaluate(&self, word: &[LabelSet]) -> bool {
        if word.is_empty() {
            return true;
        }
        self.truth_table(word)[0]
    }

    /// Truth value at every position `0..word.len()`.
    fn truth_table(&self, word: &[LabelSet]) -> Vec<bool> {
        let len = word.len();
        // Number of transition positions.
        let steps = len - 1;
        match self {
            Formula::Atom(a, b) => (0..len)
                .map(|i| {
                    a.matches(word[i])
                        && if i + 1 < len {
                            b.matches(word[i + 1])
                        } else {
                            *b == Slot::Any
                        }
                })
                .collect(),
            Formula::Not(f) => f.truth_table(word).into_iter().map(|v| !v).collect(),
            Formula::Or(l, r) => {
                let (l, r) = (l.truth_table(word), r.truth_table(word));
                l.iter().zip(&r).map(|(a, b)| *a || *b).collect()
            }
            Formula::Globally(f) => {
                let inner = f.truth_table(word);
                let mut out = vec![true; len];
                for i in (0..steps).rev() {
                    out[i] = inner[i] && out[i + 1];
                }
                out
            }
            Formula::Finally(f) => {
                let inner = f.truth_table(word);
                let mut out = vec![false; len];
                for i in (0..steps).rev() {
                    out[i] = inner[i] || out[i + 1];
                }
                out
            }
            Formula::Until(l, r) => {
                let (l, r) = (l.truth_table(word), r.truth_table(word));
                let mut out = vec![false; len];
                for i in (0..steps).rev() {
                    out[i] = r[i] || (l[i] && out[i + 1]);
                }
                out
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, b)) = self.as_and() {
            return write!(f, "({a} & {b})");
        }
        match self {
            Formula::Atom(a, b) => write!(f, "({a}, {b})"),
            Formula::Not(x) => write!(f, "!{x}"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::Globally(x) => write!(f, "G {x}"),
            Formula::Finally(x) => write!(f, "F {x}"),
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Formulas of the four road rules.
pub mod rules {
    pub const NO_SIDEWALK: &str = "G !(_, sw)";
    pub const NO_SOLID_CROSSING: &str =
        "G (!((rl,solid) & (rl,ll)) & !((ll,solid) & (ll,rl)))";
    pub const RIGHT_DIRECTION: &str = "G (_, dir)";
    pub const NO_DOTTED_CROSSING: &str =
        "G (!((rl,dotted) & (rl,ll)) & !((ll,dotted) & (ll,rl)))";
}
