use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::geometry::Pose;
use crate::world::Scenario;
use crate::{Error, Result};

/// Dimension of the sampled state space `(x, y, θ)`.
pub const STATE_DIM: u32 = 3;

/// Volume of the unit ball in `d` dimensions, for `d ∈ {1, 2, 3}`.
fn unit_ball_volume(d: u32) -> f64 {
    match d {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => unreachable!(),
    }
}

/// `2 (2 + 1/d)^(1/d) (μ / ζ_d)^(1/d)` for a state space of measure `mu`.
pub fn gamma_bound(mu: f64, d: u32) -> Result<f64> {
    if d != STATE_DIM {
        return Err(Error::InvalidArgument(format!(
            "the planner samples a {STATE_DIM}-dimensional space, not {d}"
        )));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidArgument("state-space measure must be positive".into()));
    }
    let d = d as f64;
    Ok(2.0 * (2.0 + 1.0 / d).powf(1.0 / d) * (mu / unit_ball_volume(3)).powf(1.0 / d))
}

/// Smallest admissible radius constant for a scenario: positions over the
/// bounds rectangle, headings over the full circle.
pub fn gamma_lower_bound(scenario: &Scenario) -> f64 {
    gamma_bound(scenario.bounds.area() * TAU, STATE_DIM).expect("validated bounds have positive area")
}

/// `γ (ln n / n)^(1/3)`; zero for `n ≤ 1`.
pub fn near_radius(gamma: f64, n: usize) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let n = n as f64;
    gamma * (n.ln() / n).powf(1.0 / STATE_DIM as f64)
}

/// Uniform pose over the bounds, or over the goal region with probability
/// `goal_bias`.
pub fn sample<R: Rng>(rng: &mut R, scenario: &Scenario, goal_bias: f64) -> Pose {
    if goal_bias > 0.0 && rng.random::<f64>() < goal_bias {
        return sample_goal(rng, scenario);
    }
    let b = &scenario.bounds;
    let x = rng.random_range(b.x_min..=b.x_max);
    let y = rng.random_range(b.y_min..=b.y_max);
    let theta = rng.random_range(0.0..TAU);
    Pose::new(x, y, theta)
}

/// Rejection sampling over the goal polygon's bounding box.
fn sample_goal<R: Rng>(rng: &mut R, scenario: &Scenario) -> Pose {
    let (lo, hi) = scenario.goal.polygon.bbox();
    loop {
        let x = rng.random_range(lo.x..=hi.x);
        let y = rng.random_range(lo.y..=hi.y);
        let theta = match (scenario.goal.heading_free, scenario.goal.heading) {
            (false, Some(h)) => {
                let tol = scenario.goal.heading_tolerance.unwrap_or(0.0);
                h + rng.random_range(-tol..=tol)
            }
            _ => rng.random_range(0.0..TAU),
        };
        let pose = Pose::new(x, y, theta);
        if scenario.in_goal(&pose) {
            return pose;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SCENE: &str = r#"{
        "bounds": {"x_min": 0, "y_min": 0, "x_max": 10, "y_max": 5},
        "init": {"x": 1, "y": 1, "theta": 0},
        "goal": {"polygon": [[8, 1], [9, 1], [9, 4], [8, 4]]},
        "speed": 1, "rho": 1
    }"#;

    #[test]
    fn unit_cube_bound() {
        let want = 2.0 * (7.0f64 / 3.0).cbrt() * (3.0 / (4.0 * PI)).cbrt();
        let got = gamma_bound(1.0, 3).unwrap();
        assert!((got - want).abs() < 1e-12);
        assert!((got - 1.646).abs() < 1e-3);
    }

    #[test]
    fn bound_scales_with_cube_root_of_measure() {
        let a = gamma_bound(1.0, 3).unwrap();
        let b = gamma_bound(8.0, 3).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
    }

    #[test]
    fn other_dimensions_are_rejected() {
        assert!(gamma_bound(PI, 2).is_err());
    }

    #[test]
    fn radius_vanishes_at_one_state() {
        assert_eq!(near_radius(10.0, 1), 0.0);
        assert!(near_radius(10.0, 100) > 0.0);
        assert!(near_radius(10.0, 10_000) < near_radius(10.0, 100));
    }

    #[test]
    fn seeded_sequences_repeat() {
        let s = Scenario::from_json(SCENE).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20).map(|_| sample(&mut rng, &s, 0.1)).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }

    #[test]
    fn full_goal_bias_stays_in_goal() {
        let s = Scenario::from_json(SCENE).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert!(s.in_goal(&sample(&mut rng, &s, 1.0)));
        }
    }

    #[test]
    fn uniform_chi_square() {
        // 10 × 5 × 4 cells over (x, y, θ); critical value of χ² with 199
        // degrees of freedom at α = 0.01 is 247.1.
        let s = Scenario::from_json(SCENE).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (nx, ny, nt) = (10, 5, 4);
        let mut counts = vec![0u32; nx * ny * nt];
        let draws = 100_000;
        for _ in 0..draws {
            let p = sample(&mut rng, &s, 0.0);
            let i = ((p.x / 10.0 * nx as f64) as usize).min(nx - 1);
            let j = ((p.y / 5.0 * ny as f64) as usize).min(ny - 1);
            let k = ((p.theta / TAU * nt as f64) as usize).min(nt - 1);
            counts[(i * ny + j) * nt + k] += 1;
        }
        let expected = draws as f64 / counts.len() as f64;
        let chi2: f64 = counts
            .iter()
            .map(|c| (*c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 247.1, "χ² = {chi2}");
    }
}
