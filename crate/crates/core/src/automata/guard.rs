use std::fmt;

use crate::fltl::Slot;
use crate::world::LabelSet;

/// Boolean expression over a transition symbol `(σ, σ′)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GuardExpr {
    True,
    Pair(Slot, Slot),
    Not(Box<GuardExpr>),
    Or(Box<GuardExpr>, Box<GuardExpr>),
}

impl GuardExpr {
    pub fn eval(&self, from: LabelSet, to: LabelSet) -> bool {
        match self {
            GuardExpr::True => true,
            GuardExpr::Pair(a, b) => a.matches(from) && b.matches(to),
            GuardExpr::Not(x) => !x.eval(from, to),
            GuardExpr::Or(a, b) => a.eval(from, to) || b.eval(from, to),
        }
    }
}

impl fmt::Display for GuardExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardExpr::True => f.write_str("(_, _)"),
            GuardExpr::Pair(a, b) => write!(f, "({a}, {b})"),
            GuardExpr::Not(x) => write!(f, "!{x}"),
            GuardExpr::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

/// A guard together with its truth table over all `64 × 64` symbols; row
/// `σ` holds one bit per `σ′`.
#[derive(Clone, PartialEq, Eq)]
pub struct Guard {
    expr: GuardExpr,
    table: Box<[u64; LabelSet::COUNT]>,
}

impl Guard {
    pub fn new(expr: GuardExpr) -> Self {
        let mut table = Box::new([0u64; LabelSet::COUNT]);
        for from in LabelSet::all() {
            let row = &mut table[from.bits() as usize];
            for to in LabelSet::all() {
                if expr.eval(from, to) {
                    *row |= 1 << to.bits();
                }
            }
        }
        Guard { expr, table }
    }

    pub fn always() -> Self {
        Guard::new(GuardExpr::True)
    }

    pub fn expr(&self) -> &GuardExpr {
        &self.expr
    }

    #[inline]
    pub fn holds(&self, from: LabelSet, to: LabelSet) -> bool {
        self.table[from.bits() as usize] >> to.bits() & 1 == 1
    }

    pub fn is_valid(&self) -> bool {
        self.table.iter().all(|row| *row == u64::MAX)
    }

    pub fn is_unsatisfiable(&self) -> bool {
        self.table.iter().all(|row| *row == 0)
    }

    /// Number of symbols accepted, out of 4096.
    pub fn count(&self) -> u32 {
        self.table.iter().map(|r| r.count_ones()).sum()
    }

    pub fn or(&self, other: &Guard) -> Guard {
        let mut table = self.table.clone();
        for (a, b) in table.iter_mut().zip(other.table.iter()) {
            *a |= b;
        }
        Guard {
            expr: GuardExpr::Or(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
            table,
        }
    }

    pub fn complement(&self) -> Guard {
        let mut table = self.table.clone();
        for row in table.iter_mut() {
            *row = !*row;
        }
        Guard {
            expr: GuardExpr::Not(Box::new(self.expr.clone())),
            table,
        }
    }
}

impl fmt::Debug for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Guard({})", self.expr)
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}
