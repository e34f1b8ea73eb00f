//! Road scenarios, the labeling function and trajectory labeling.

mod planar;
mod scenario;

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::{angle_diff, DubinsPath, Pose};
use crate::kripke::TimedWord;
use crate::{Error, Result};

pub use planar::{distance_to_polyline, point_in_polygon, Point, Polygon};
pub use scenario::{
    Bounds, CenterLine, Goal, LabelParams, Lane, LaneSide, LineStyle, Scenario,
};

pub const DEFAULT_BAND_WIDTH: f64 = 0.2;
pub const DEFAULT_DIR_THRESHOLD: f64 = FRAC_PI_2;

/// The fixed proposition universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomicProposition {
    Sw,
    Rl,
    Ll,
    Dir,
    Dotted,
    Solid,
}

impl AtomicProposition {
    pub const ALL: [AtomicProposition; 6] = [
        AtomicProposition::Sw,
        AtomicProposition::Rl,
        AtomicProposition::Ll,
        AtomicProposition::Dir,
        AtomicProposition::Dotted,
        AtomicProposition::Solid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AtomicProposition::Sw => "sw",
            AtomicProposition::Rl => "rl",
            AtomicProposition::Ll => "ll",
            AtomicProposition::Dir => "dir",
            AtomicProposition::Dotted => "dotted",
            AtomicProposition::Solid => "solid",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for AtomicProposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AtomicProposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AtomicProposition::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownProposition(s.to_string()))
    }
}

/// A subset of the proposition universe.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(u8);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);
    /// Number of distinct label sets (`2^|Π|`).
    pub const COUNT: usize = 64;

    pub fn from_bits(bits: u8) -> Self {
        LabelSet(bits & 0x3f)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, p: AtomicProposition) -> bool {
        self.0 & p.bit() != 0
    }

    pub fn insert(&mut self, p: AtomicProposition) {
        self.0 |= p.bit();
    }

    pub fn with(mut self, p: AtomicProposition) -> Self {
        self.insert(p);
        self
    }

    pub fn iter(self) -> impl Iterator<Item = AtomicProposition> {
        AtomicProposition::ALL
            .into_iter()
            .filter(move |p| self.contains(*p))
    }

    /// Every label set, in bit order.
    pub fn all() -> impl Iterator<Item = LabelSet> {
        (0..Self::COUNT as u8).map(LabelSet)
    }
}

impl FromIterator<AtomicProposition> for LabelSet {
    fn from_iter<I: IntoIterator<Item = AtomicProposition>>(iter: I) -> Self {
        let mut set = LabelSet::EMPTY;
        for p in iter {
            set.insert(p);
        }
        set
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(p.name())?;
        }
        f.write_str("}")
    }
}

impl Serialize for LabelSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for LabelSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let props = Vec::<AtomicProposition>::deserialize(d)?;
        Ok(props.into_iter().collect())
    }
}

impl Scenario {
    /// The labeling function over poses.
    pub fn label(&self, pose: &Pose) -> Result<LabelSet> {
        if !self.bounds.contains(pose.x, pose.y) {
            return Err(Error::OutOfBounds {
                x: pose.x,
                y: pose.y,
            });
        }
        Ok(self.label_unchecked(pose))
    }

    pub(crate) fn label_unchecked(&self, pose: &Pose) -> LabelSet {
        let pt = Point::new(pose.x, pose.y);
        let mut out = LabelSet::EMPTY;
        if self.sidewalks.iter().any(|s| s.contains(pt)) {
            out.insert(AtomicProposition::Sw);
        }
        // First lane in file order wins, which keeps rl and ll exclusive on
        // shared edges.
        if let Some(lane) = self.lanes.iter().find(|l| l.polygon.contains(pt)) {
            out.insert(match lane.side {
                LaneSide::Rl => AtomicProposition::Rl,
                LaneSide::Ll => AtomicProposition::Ll,
            });
            let threshold = self.label_params.dir_threshold;
            if angle_diff(pose.theta, lane.nominal_heading) < threshold {
                out.insert(AtomicProposition::Dir);
            }
        }
        let band = self.label_params.band_width;
        for line in &self.center_lines {
            if line.distance(pt) <= band {
                out.insert(match line.style {
                    LineStyle::Dotted => AtomicProposition::Dotted,
                    LineStyle::Solid => AtomicProposition::Solid,
                });
            }
        }
        out
    }

    /// True if the pose is outside the bounds or inside an obstacle.
    pub fn pose_blocked(&self, pose: &Pose) -> bool {
        if !self.bounds.contains(pose.x, pose.y) {
            return true;
        }
        let pt = Point::new(pose.x, pose.y);
        self.obstacles.iter().any(|o| o.contains(pt))
    }

    pub fn in_goal(&self, pose: &Pose) -> bool {
        self.goal.contains(pose)
    }

    /// Collision test at arc-length resolution `ds`, endpoints included.
    pub fn collides(&self, path: &DubinsPath, from: &Pose, ds: f64) -> bool {
        assert!(ds > 0.0, "ds must be positive");
        path.sample_arclength(from, ds)
            .iter()
            .any(|(_, p)| self.pose_blocked(p))
    }

    /// Destuttered timed word of a path sampled every `ds` meters, and the
    /// number of label changes along it.
    ///
    /// Label changes are attributed to the first sample that shows the new
    /// label, so every block duration is a difference of sample times.
    pub fn label_word(&self, path: &DubinsPath, from: &Pose, ds: f64) -> (TimedWord, usize) {
        assert!(ds > 0.0, "ds must be positive");
        let mut builder = WordBuilder::default();
        for (t, pose) in path.sample_arclength(from, ds) {
            builder.push(t, self.label_unchecked(&pose));
        }
        builder.finish(path.duration)
    }

    /// Label word of a chain of path pieces, each sampled from its own start.
    pub fn label_word_chain(&self, pieces: &[(Pose, DubinsPath)], ds: f64) -> (TimedWord, usize) {
        let mut builder = WordBuilder::default();
        let mut offset = 0.0;
        for (from, path) in pieces {
            for (t, pose) in path.sample_arclength(from, ds) {
                builder.push(offset + t, self.label_unchecked(&pose));
            }
            offset += path.duration;
        }
        builder.finish(offset)
    }
}

#[derive(Default)]
struct WordBuilder {
    blocks: Vec<(LabelSet, f64)>,
}

impl WordBuilder {
    fn push(&mut self, t: f64, label: LabelSet) {
        match self.blocks.last() {
            Some((last, _)) if *last == label => {}
            _ => self.blocks.push((label, t)),
        }
    }

    fn finish(self, end: f64) -> (TimedWord, usize) {
        let n = self.blocks.len();
        let letters = (0..n)
            .map(|i| {
                let (label, start) = self.blocks[i];
                let stop = if i + 1 < n { self.blocks[i + 1].1 } else { end };
                (label, stop - start)
            })
            .collect::<Vec<_>>();
        (TimedWord::new(letters), n.saturating_sub(1))
    }
}
