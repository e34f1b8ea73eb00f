use std::path::Path;

use serde::{Deserialize, Serialize};

use super::planar::{distance_to_polyline, Point, Polygon};
use super::{DEFAULT_BAND_WIDTH, DEFAULT_DIR_THRESHOLD};
use crate::geometry::{angle_diff, Pose};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Bounds {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaneSide {
    Rl,
    Ll,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lane {
    pub polygon: Polygon,
    pub nominal_heading: f64,
    pub side: LaneSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineStyle {
    Dotted,
    Solid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterLine {
    pub polyline: Vec<Point>,
    pub style: LineStyle,
}

impl CenterLine {
    pub fn distance(&self, p: Point) -> f64 {
        distance_to_polyline(&self.polyline, p)
    }
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Goal {
    pub polygon: Polygon,
    #[serde(default = "yes")]
    pub heading_free: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading_tolerance: Option<f64>,
}

impl Goal {
    pub fn contains(&self, pose: &Pose) -> bool {
        if !self.polygon.contains(Point::new(pose.x, pose.y)) {
            return false;
        }
        if self.heading_free {
            return true;
        }
        match self.heading {
            Some(h) => angle_diff(pose.theta, h) <= self.heading_tolerance.unwrap_or(0.0),
            None => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelParams {
    #[serde(default = "default_band_width")]
    pub band_width: f64,
    #[serde(default = "default_dir_threshold")]
    pub dir_threshold: f64,
}

fn default_band_width() -> f64 {
    DEFAULT_BAND_WIDTH
}

fn default_dir_threshold() -> f64 {
    DEFAULT_DIR_THRESHOLD
}

impl Default for LabelParams {
    fn default() -> Self {
        LabelParams {
            band_width: DEFAULT_BAND_WIDTH,
            dir_threshold: DEFAULT_DIR_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitPose {
    x: f64,
    y: f64,
    theta: f64,
}

/// A static road scene: free space, regions that carry labels, start and goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub bounds: Bounds,
    #[serde(default)]
    pub obstacles: Vec<Polygon>,
    #[serde(default)]
    pub sidewalks: Vec<Polygon>,
    #[serde(default)]
    pub lanes: Vec<Lane>,
    #[serde(default)]
    pub center_lines: Vec<CenterLine>,
    #[serde(with = "init_pose")]
    pub init: Pose,
    pub goal: Goal,
    pub speed: f64,
    pub rho: f64,
    #[serde(default)]
    pub label_params: LabelParams,
}

mod init_pose {
    use super::InitPose;
    use crate::geometry::Pose;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &Pose, s: S) -> Result<S::Ok, S::Error> {
        InitPose {
            x: p.x,
            y: p.y,
            theta: p.theta,
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Pose, D::Error> {
        let p = InitPose::deserialize(d)?;
        Ok(Pose::new(p.x, p.y, p.theta))
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Scenario = serde_json::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidScenario(m.to_string()));
        let b = &self.bounds;
        if !(b.x_min.is_finite() && b.y_min.is_finite() && b.x_max.is_finite() && b.y_max.is_finite())
        {
            return bad("bounds must be finite");
        }
        if b.x_min >= b.x_max || b.y_min >= b.y_max {
            return bad("bounds are empty");
        }
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return bad("speed must be positive");
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return bad("rho must be positive");
        }
        let polygons = self
            .obstacles
            .iter()
            .chain(&self.sidewalks)
            .chain(self.lanes.iter().map(|l| &l.polygon))
            .chain(std::iter::once(&self.goal.polygon));
        for poly in polygons {
            if poly.vertices().len() < 3 {
                return bad("polygons need at least three vertices");
            }
            if poly.vertices().iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
                return bad("polygon vertices must be finite");
            }
        }
        for line in &self.center_lines {
            if line.polyline.is_empty() {
                return bad("center lines need at least one point");
            }
        }
        let lp = &self.label_params;
        if !(lp.band_width >= 0.0) || !(lp.dir_threshold > 0.0) {
            return bad("label parameters must be non-negative");
        }
        if self.pose_blocked(&self.init) {
            return bad("initial pose is blocked or out of bounds");
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}
