//! Minimum-violation motion planning for a curvature-bounded car.
//!
//! The crate grows a sampled Kripke abstraction of Dubins-car motion and,
//! alongside it, a weighted product with a prioritized set of road rules
//! written as finite-trace temporal formulas. The planner keeps the
//! lexicographically best trajectory to the goal: first by per-class level of
//! unsafety, then by travel time.
//!
//! Module map:
//! - [`geometry`]: poses and time-optimal Dubins steering.
//! - [`world`]: polygonal road scenarios and the labeling function.
//! - [`fltl`]: rule formulas (parser, finite-word semantics, compiler).
//! - [`automata`]: rule automata, weights and the level of unsafety.
//! - [`kripke`]: durational Kripke structures, traces and timed words.
//! - [`planner`]: the incremental planner and its plain RRT* reference.
//! - [`report`] and [`render`]: JSON run reports and SVG output.

pub mod automata;
pub mod error;
pub mod fltl;
pub mod geometry;
pub mod kripke;
pub mod planner;
pub mod render;
pub mod report;
pub mod world;

pub use automata::{
    CombinedState, CostMode, RuleAutomaton, UnsafetyVector, Weight, WeightedRulebook,
};
pub use error::{Error, Result};
pub use fltl::Formula;
pub use geometry::{DubinsPath, DubinsWord, Pose};
pub use kripke::{KripkeStructure, TimedWord, Trace};
pub use planner::{plan, Planner, PlannerConfig, Solution};
pub use world::{AtomicProposition, LabelSet, Scenario};
