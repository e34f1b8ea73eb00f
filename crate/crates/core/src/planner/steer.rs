use crate::geometry::{dubins_shortest, DubinsPath, Pose};
use crate::world::{LabelSet, Scenario};

/// A collision-free connection whose label changes at most once.
#[derive(Debug, Clone, PartialEq)]
pub struct Steered {
    pub path: DubinsPath,
    /// Label at the start, and the label after the change if there is one.
    pub labels: (LabelSet, Option<LabelSet>),
}

/// Time-optimal connection from `from` to `to`, sampled every `ds` meters.
/// Returns `None` if a sample leaves the bounds, hits an obstacle, or the
/// label changes more than once.
pub fn steer(scenario: &Scenario, from: &Pose, to: &Pose, ds: f64) -> Option<Steered> {
    let path = dubins_shortest(from, to, scenario.rho, scenario.speed);
    let mut first = None;
    let mut second = None;
    for (_, pose) in path.samples(from, ds / scenario.speed) {
        if scenario.pose_blocked(&pose) {
            return None;
        }
        let label = scenario.label_unchecked(&pose);
        match (first, second) {
            (None, _) => first = Some(label),
            (Some(a), None) if label != a => second = Some(label),
            (Some(_), Some(b)) if label != b => return None,
            _ => {}
        }
    }
    Some(Steered {
        path,
        labels: (first.expect("a path has at least one sample"), second),
    })
}
