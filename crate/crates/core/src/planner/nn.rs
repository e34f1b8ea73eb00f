use crate::geometry::{angle_diff, Pose};
use crate::world::Bounds;

/// Distance over `(x, y, α·θ)` with the heading difference wrapped to `[0, π]`.
pub fn pose_distance(a: &Pose, b: &Pose, alpha: f64) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dt = alpha * angle_diff(a.theta, b.theta);
    (dx * dx + dy * dy + dt * dt).sqrt()
}

/// Uniform grid over positions. Exact: every query checks the true metric,
/// and positional distance bounds it from below.
#[derive(Debug, Clone)]
pub struct NearIndex {
    x0: f64,
    y0: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    alpha: f64,
    cells: Vec<Vec<u32>>,
    poses: Vec<Pose>,
}

impl NearIndex {
    pub fn new(bounds: &Bounds, cell: f64, alpha: f64) -> Self {
        assert!(cell > 0.0);
        let nx = ((bounds.width() / cell).ceil() as usize).max(1);
        let ny = ((bounds.height() / cell).ceil() as usize).max(1);
        NearIndex {
            x0: bounds.x_min,
            y0: bounds.y_min,
            cell,
            nx,
            ny,
            alpha,
            cells: vec![Vec::new(); nx * ny],
            poses: Vec::new(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    fn cell_of(&self, x: f64, y: f64) -> (usize, usize) {
        let i = ((x - self.x0) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = ((y - self.y0) / self.cell).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (i, j)
    }

    /// Ids must be inserted densely in order `0, 1, 2, …`.
    pub fn insert(&mut self, id: usize, pose: Pose) {
        assert_eq!(id, self.poses.len(), "ids are inserted in order");
        let (i, j) = self.cell_of(pose.x, pose.y);
        self.cells[j * self.nx + i].push(id as u32);
        self.poses.push(pose);
    }

    /// Ids within `r` of `pose`, ascending.
    pub fn within(&self, pose: &Pose, r: f64) -> Vec<usize> {
        let (i0, j0) = self.cell_of(pose.x - r, pose.y - r);
        let (i1, j1) = self.cell_of(pose.x + r, pose.y + r);
        let mut out = Vec::new();
        for j in j0..=j1 {
            for i in i0..=i1 {
                for &id in &self.cells[j * self.nx + i] {
                    if pose_distance(pose, &self.poses[id as usize], self.alpha) <= r {
                        out.push(id as usize);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Closest id, lowest id on ties.
    pub fn nearest(&self, pose: &Pose) -> Option<usize> {
        if self.poses.is_empty() {
            return None;
        }
        let (ci, cj) = self.cell_of(pose.x, pose.y);
        let mut best: Option<(f64, usize)> = None;
        let max_ring = self.nx.max(self.ny);
        for k in 0..=max_ring {
            // Everything in ring k + 1 is at least k cells away.
            if let Some((d, _)) = best {
                if k > 0 && d < (k - 1) as f64 * self.cell {
                    break;
                }
            }
            let (ci, cj, k) = (ci as isize, cj as isize, k as isize);
            for j in (cj - k)..=(cj + k) {
                if j < 0 || j >= self.ny as isize {
                    continue;
                }
                for i in (ci - k)..=(ci + k) {
                    if i < 0 || i >= self.nx as isize {
                        continue;
                    }
                    if (j - cj).abs() != k && (i - ci).abs() != k {
                        continue;
                    }
                    for &id in &self.cells[j as usize * self.nx + i as usize] {
                        let d = pose_distance(pose, &self.poses[id as usize], self.alpha);
                        let id = id as usize;
                        if best.is_none_or(|(bd, bid)| d < bd || (d == bd && id < bid)) {
                            best = Some((d, id));
                        }
                    }
                }
            }
        }
        best.map(|(_, id)| id)
    }
}
