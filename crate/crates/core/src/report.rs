//! JSON run reports.
//!
//! Floats are rounded to 12 significant digits so reports diff cleanly and
//! repeat byte for byte.

use serde::{Deserialize, Serialize};

use crate::automata::UnsafetyVector;
use crate::geometry::Pose;
use crate::planner::Planner;
use crate::{Error, Result};

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn pose3(p: &Pose) -> [f64; 3] {
    [round12(p.x), round12(p.y), round12(p.theta)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub scenario: String,
    pub rules: String,
    pub iterations: usize,
    pub gamma: f64,
    pub goal_bias: f64,
    pub ds: f64,
    pub alpha: f64,
    pub checkpoint_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub iteration: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
    pub best_unsafety: Option<UnsafetyVector>,
    pub best_duration: Option<f64>,
}

impl Checkpoint {
    pub fn of(planner: &Planner<'_>, elapsed_seconds: Option<f64>) -> Self {
        let best = planner.best_cost();
        Checkpoint {
            iteration: planner.iteration(),
            elapsed_seconds: elapsed_seconds.map(round12),
            best_unsafety: best.map(|c| c.ja.clone()),
            best_duration: best.map(|c| round12(crate::automata::seconds(c.jt))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub trace: Vec<usize>,
    pub trajectory: Vec<[f64; 3]>,
    pub unsafety: UnsafetyVector,
    pub duration: f64,
    pub iteration_found: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KripkeReport {
    pub states: Vec<[f64; 3]>,
    pub tree_edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub states: usize,
    pub kripke_edges: usize,
    pub product_nodes: usize,
    pub product_edges: usize,
    pub rejected_samples: usize,
    pub steer_calls: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub seed: u64,
    pub checkpoints: Vec<Checkpoint>,
    pub solution: Option<SolutionReport>,
    pub kripke: KripkeReport,
    pub stats: StatsReport,
}

impl RunReport {
    pub fn new(planner: &Planner<'_>, config: ConfigEcho, checkpoints: Vec<Checkpoint>) -> Self {
        let solution = planner.solution().map(|s| SolutionReport {
            trace: s.trace.0,
            trajectory: s.trajectory.iter().map(pose3).collect(),
            unsafety: s.unsafety,
            duration: round12(s.duration),
            iteration_found: s.iteration_found,
        });
        let kripke = planner.kripke();
        let product = planner.product();
        RunReport {
            config,
            seed: planner.config().seed,
            checkpoints,
            solution,
            kripke: KripkeReport {
                states: kripke.poses().iter().map(pose3).collect(),
                tree_edges: planner.tree_edges().into_iter().map(|(a, b)| [a, b]).collect(),
            },
            stats: StatsReport {
                states: kripke.len(),
                kripke_edges: kripke.num_edges(),
                product_nodes: product.nodes().len(),
                product_edges: product.num_edges(),
                rejected_samples: planner.stats().rejected_samples,
                steer_calls: planner.stats().steer_calls,
            },
        }
    }

    /// Checkpointed best costs must never get worse.
    pub fn check_monotone(&self) -> Result<()> {
        let keys: Vec<(&UnsafetyVector, f64)> = self
            .checkpoints
            .iter()
            .filter_map(|c| Some((c.best_unsafety.as_ref()?, c.best_duration?)))
            .collect();
        let found_then_lost = self
            .checkpoints
            .windows(2)
            .any(|w| w[0].best_unsafety.is_some() && w[1].best_unsafety.is_none());
        let worse = keys.windows(2).any(|w| {
            w[1].0 > w[0].0 || (w[1].0 == w[0].0 && w[1].1 > w[0].1)
        });
        if worse || found_then_lost {
            return Err(Error::InvalidArgument(
                "checkpointed best cost increased".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.check_monotone()?;
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
