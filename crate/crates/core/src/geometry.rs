//! Time-optimal steering for the constant-speed Dubins car.
//!
//! The car obeys `x' = v cos θ`, `y' = v sin θ`, `θ' = u` with `|u| ≤ 1`
//! after rescaling, so the minimum turning radius is `rho = v / u_max`. All
//! six canonical words are solved in closed form and the shortest one wins.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Segment lengths below this are treated as absent.
const DEGENERATE_SEGMENT: f64 = 1e-9;

/// Wraps an angle into `[0, 2π)`.
pub fn mod2pi(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Absolute angular difference folded into `[0, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = mod2pi(a - b);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Heading in radians, always in `[0, 2π)`.
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: mod2pi(theta),
        }
    }

    pub fn distance(&self, other: &Pose) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl fmt::Display for Pose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.3}, {:.3}, {:.3})", self.x, self.y, self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SegmentKind {
    Left,
    Straight,
    Right,
}

/// The six canonical Dubins words, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DubinsWord {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
    Rlr,
    Lrl,
}

impl DubinsWord {
    pub const ALL: [DubinsWord; 6] = [
        DubinsWord::Lsl,
        DubinsWord::Rsr,
        DubinsWord::Lsr,
        DubinsWord::Rsl,
        DubinsWord::Rlr,
        DubinsWord::Lrl,
    ];

    pub fn segments(self) -> [SegmentKind; 3] {
        use SegmentKind::*;
        match self {
            DubinsWord::Lsl => [Left, Straight, Left],
            DubinsWord::Rsr => [Right, Straight, Right],
            DubinsWord::Lsr => [Left, Straight, Right],
            DubinsWord::Rsl => [Right, Straight, Left],
            DubinsWord::Rlr => [Right, Left, Right],
            DubinsWord::Lrl => [Left, Right, Left],
        }
    }

    /// Normalized segment parameters `(t, p, q)` for unit turning radius, or
    /// `None` if the word cannot connect the configuration.
    fn solve(self, alpha: f64, beta: f64, d: f64) -> Option<[f64; 3]> {
        let (sa, ca) = alpha.sin_cos();
        let (sb, cb) = beta.sin_cos();
        let c_ab = (alpha - beta).cos();
        match self {
            DubinsWord::Lsl => {
                let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sa - sb);
                if p_sq < 0.0 {
                    return None;
                }
                let tmp = (cb - ca).atan2(d + sa - sb);
                Some([mod2pi(tmp - alpha), p_sq.sqrt(), mod2pi(beta - tmp)])
            }
            DubinsWord::Rsr => {
                let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sb - sa);
                if p_sq < 0.0 {
                    return None;
                }
                let tmp = (ca - cb).atan2(d - sa + sb);
                Some([mod2pi(alpha - tmp), p_sq.sqrt(), mod2pi(tmp - beta)])
            }
            DubinsWord::Lsr => {
                let p_sq = -2.0 + d * d + 2.0 * c_ab + 2.0 * d * (sa + sb);
                if p_sq < 0.0 {
                    return None;
                }
                let p = p_sq.sqrt();
                let tmp = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
                Some([mod2pi(tmp - alpha), p, mod2pi(tmp - beta)])
            }
            DubinsWord::Rsl => {
                let p_sq = d * d - 2.0 + 2.0 * c_ab - 2.0 * d * (sa + sb);
                if p_sq < 0.0 {
                    return None;
                }
                let p = p_sq.sqrt();
                let tmp = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
                Some([mod2pi(alpha - tmp), p, mod2pi(beta - tmp)])
            }
            DubinsWord::Rlr => {
                let tmp = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sa - sb)) / 8.0;
                if tmp.abs() > 1.0 {
                    return None;
                }
                let phi = (ca - cb).atan2(d - sa + sb);
                let p = mod2pi(TAU - tmp.acos());
                let t = mod2pi(alpha - phi + mod2pi(p / 2.0));
                Some([t, p, mod2pi(alpha - beta - t + p)])
            }
            DubinsWord::Lrl => {
                let tmp = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sb - sa)) / 8.0;
                if tmp.abs() > 1.0 {
                    return None;
                }
                let phi = (ca - cb).atan2(d + sa - sb);
                let p = mod2pi(TAU - tmp.acos());
                let t = mod2pi(-alpha - phi + p / 2.0);
                Some([t, p, mod2pi(beta - alpha - t + p)])
            }
        }
    }
}

impl fmt::Display for DubinsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DubinsWord::Lsl => "LSL",
            DubinsWord::Rsr => "RSR",
            DubinsWord::Lsr => "LSR",
            DubinsWord::Rsl => "RSL",
            DubinsWord::Rlr => "RLR",
            DubinsWord::Lrl => "LRL",
        };
        f.write_str(s)
    }
}

/// A curvature-bounded connection between two poses.
///
/// The start pose is not stored; callers pass it back in when sampling, which
/// keeps Kripke edges compact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DubinsPath {
    pub word: DubinsWord,
    /// Arc or straight lengths in meters.
    pub segment_lengths: [f64; 3],
    pub rho: f64,
    pub speed: f64,
    pub duration: f64,
}

impl DubinsPath {
    pub fn length(&self) -> f64 {
        self.segment_lengths.iter().sum()
    }

    /// Pose after travelling `s` meters along the path from `from`.
    pub fn pose_at(&self, from: &Pose, s: f64) -> Pose {
        let mut pose = *from;
        let mut remaining = s.clamp(0.0, self.length());
        for (kind, &len) in self.word.segments().iter().zip(&self.segment_lengths) {
            let step = remaining.min(len);
            pose = advance(&pose, *kind, step, self.rho);
            remaining -= step;
            if remaining <= 0.0 {
                break;
            }
        }
        pose
    }

    /// Exact end pose, composed segment by segment.
    pub fn endpoint(&self, from: &Pose) -> Pose {
        let mut pose = *from;
        for (kind, &len) in self.word.segments().iter().zip(&self.segment_lengths) {
            pose = advance(&pose, *kind, len, self.rho);
        }
        pose
    }

    /// Poses spaced `ds` meters apart by arc length, both endpoints included.
    pub fn sample_arclength(&self, from: &Pose, ds: f64) -> Vec<(f64, Pose)> {
        self.sample_path(from, ds / self.speed)
    }

    /// Poses at times `0, dt, 2dt, …` plus the final pose, tagged with time.
    pub fn sample_path(&self, from: &Pose, dt: f64) -> Vec<(f64, Pose)> {
        self.samples(from, dt).collect()
    }

    /// Lazy form of [`Self::sample_path`].
    pub fn samples<'a>(&'a self, from: &'a Pose, dt: f64) -> impl Iterator<Item = (f64, Pose)> + 'a {
        assert!(dt > 0.0, "sampling step must be positive");
        let interior = if self.duration <= 0.0 {
            0
        } else {
            // Largest k with k·dt < duration − ε, found by stepping so the
            // cut-off matches the time test exactly.
            let mut k = (self.duration / dt).floor() as u64 + 1;
            while k > 0 && k as f64 * dt >= self.duration - DEGENERATE_SEGMENT {
                k -= 1;
            }
            k
        };
        let last = (self.duration > 0.0).then(|| (self.duration, self.endpoint(from)));
        std::iter::once((0.0, *from))
            .chain((1..=interior).map(move |k| {
                let t = k as f64 * dt;
                (t, self.pose_at(from, t * self.speed))
            }))
            .chain(last)
    }
}

fn advance(pose: &Pose, kind: SegmentKind, len: f64, rho: f64) -> Pose {
    if len <= 0.0 {
        return *pose;
    }
    let (x, y, th) = (pose.x, pose.y, pose.theta);
    match kind {
        SegmentKind::Straight => Pose::new(x + len * th.cos(), y + len * th.sin(), th),
        SegmentKind::Left => {
            let phi = len / rho;
            Pose::new(
                x + rho * ((th + phi).sin() - th.sin()),
                y + rho * (th.cos() - (th + phi).cos()),
                th + phi,
            )
        }
        SegmentKind::Right => {
            let phi = len / rho;
            Pose::new(
                x + rho * (th.sin() - (th - phi).sin()),
                y + rho * ((th - phi).cos() - th.cos()),
                th - phi,
            )
        }
    }
}

/// Minimum-duration Dubins path from `from` to `to`.
///
/// Equal durations are broken by [`DubinsWord::ALL`] order.
pub fn dubins_shortest(from: &Pose, to: &Pose, rho: f64, speed: f64) -> DubinsPath {
    assert!(rho > 0.0 && speed > 0.0, "rho and speed must be positive");
    let dx = to.x - from.x;
    let dy = to.y - from.y;
    let dist = dx.hypot(dy);
    let d = dist / rho;
    let heading = if dist > 0.0 { mod2pi(dy.atan2(dx)) } else { 0.0 };
    let alpha = mod2pi(from.theta - heading);
    let beta = mod2pi(to.theta - heading);

    let mut best: Option<(f64, DubinsWord, [f64; 3])> = None;
    for word in DubinsWord::ALL {
        let Some(params) = word.solve(alpha, beta, d) else {
            continue;
        };
        let mut lengths = params.map(|v| v * rho);
        for len in &mut lengths {
            if *len < DEGENERATE_SEGMENT {
                *len = 0.0;
            }
        }
        let total: f64 = lengths.iter().sum();
        if best.is_none_or(|(b, _, _)| total < b) {
            best = Some((total, word, lengths));
        }
    }
    // LSL's p² is a squared distance between turning-circle centers, so that
    // word always solves.
    let (total, word, segment_lengths) = best.expect("some Dubins word always exists");
    DubinsPath {
        word,
        segment_lengths,
        rho,
        speed,
        duration: total / speed,
    }
}

/// Samples the path at time step `dt`; see [`DubinsPath::sample_path`].
pub fn sample_path(path: &DubinsPath, from: &Pose, dt: f64) -> Vec<Pose> {
    path.sample_path(from, dt).into_iter().map(|(_, p)| p).collect()
}
