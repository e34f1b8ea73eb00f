use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// Exact cost in nanosecond ticks. One event-mode violation of weight `ϖ`
/// costs `ϖ` seconds' worth of ticks, so both cost modes share a unit.
pub type Weight = i64;

pub const TICKS_PER_SECOND: Weight = 1_000_000_000;

pub fn ticks(seconds: f64) -> Weight {
    debug_assert!(seconds >= 0.0 && seconds.is_finite(), "bad duration {seconds}");
    (seconds * TICKS_PER_SECOND as f64).round() as Weight
}

pub fn seconds(w: Weight) -> f64 {
    w as f64 / TICKS_PER_SECOND as f64
}

/// Per-class unsafety, compared lexicographically (class 1 first).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnsafetyVector(Vec<Weight>);

impl UnsafetyVector {
    pub fn zeros(classes: usize) -> Self {
        UnsafetyVector(vec![0; classes])
    }

    pub fn from_weights(values: Vec<Weight>) -> Self {
        UnsafetyVector(values)
    }

    pub fn weights(&self) -> &[Weight] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_at(&mut self, class: usize, w: Weight) {
        self.0[class] += w;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|w| seconds(*w)).collect()
    }

    pub fn from_f64(values: &[f64]) -> Self {
        UnsafetyVector(values.iter().map(|v| ticks(*v)).collect())
    }
}

impl AddAssign<&UnsafetyVector> for UnsafetyVector {
    fn add_assign(&mut self, rhs: &UnsafetyVector) {
        assert_eq!(self.0.len(), rhs.0.len(), "class count mismatch");
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl Add<&UnsafetyVector> for &UnsafetyVector {
    type Output = UnsafetyVector;

    fn add(self, rhs: &UnsafetyVector) -> UnsafetyVector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for UnsafetyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", seconds(*w))?;
        }
        f.write_str(")")
    }
}

impl Serialize for UnsafetyVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.to_f64().into_iter().map(crate::report::round12))
    }
}

impl<'de> Deserialize<'de> for UnsafetyVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(UnsafetyVector::from_f64(&Vec::<f64>::deserialize(d)?))
    }
}
