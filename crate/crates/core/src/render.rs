//! SVG pictures of scenarios, trees and solutions.

use std::fmt::Write;

use crate::geometry::{dubins_shortest, Pose};
use crate::report::RunReport;
use crate::world::{LineStyle, Point, Scenario};

/// Pixels per meter.
const SCALE: f64 = 10.0;

struct Canvas<'a> {
    scenario: &'a Scenario,
    out: String,
}

impl Canvas<'_> {
    fn x(&self, x: f64) -> f64 {
        (x - self.scenario.bounds.x_min) * SCALE
    }

    fn y(&self, y: f64) -> f64 {
        (self.scenario.bounds.y_max - y) * SCALE
    }

    fn points<'p>(&self, pts: impl IntoIterator<Item = &'p Point>) -> String {
        pts.into_iter()
            .map(|p| format!("{:.2},{:.2}", self.x(p.x), self.y(p.y)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn pose_points(&self, poses: &[Pose]) -> String {
        poses
            .iter()
            .map(|p| format!("{:.2},{:.2}", self.x(p.x), self.y(p.y)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn polygon(&mut self, pts: &[Point], fill: &str) {
        let pts = self.points(pts);
        writeln!(self.out, r#"<polygon points="{pts}" fill="{fill}"/>"#).unwrap();
    }

    fn polyline(&mut self, pts: String, stroke: &str, width: f64, extra: &str) {
        writeln!(
            self.out,
            r#"<polyline points="{pts}" fill="none" stroke="{stroke}" stroke-width="{width:.2}"{extra}/>"#
        )
        .unwrap();
    }
}

/// Renders the scenario, and the tree and solution of `report` if given.
pub fn render_svg(scenario: &Scenario, report: Option<&RunReport>) -> String {
    let b = &scenario.bounds;
    let (w, h) = (b.width() * SCALE, b.height() * SCALE);
    let mut c = Canvas {
        scenario,
        out: String::new(),
    };
    writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    )
    .unwrap();
    writeln!(c.out, r##"<rect x="0" y="0" width="{w:.2}" height="{h:.2}" fill="#202020"/>"##).unwrap();

    c.out.push_str("<g id=\"lanes\">\n");
    for lane in &scenario.lanes {
        c.polygon(lane.polygon.vertices(), "#d0d0d0");
    }
    c.out.push_str("</g>\n<g id=\"sidewalks\">\n");
    for sw in &scenario.sidewalks {
        c.polygon(sw.vertices(), "#606060");
    }
    c.out.push_str("</g>\n<g id=\"center-lines\">\n");
    for line in &scenario.center_lines {
        let pts = c.points(&line.polyline);
        match line.style {
            LineStyle::Dotted => c.polyline(pts, "#ffffff", 2.0, r#" stroke-dasharray="8,6""#),
            LineStyle::Solid => {
                c.polyline(pts.clone(), "#ffd000", 4.0, "");
                c.polyline(pts, "#d0d0d0", 1.5, "");
            }
        }
    }
    c.out.push_str("</g>\n<g id=\"obstacles\">\n");
    for obs in &scenario.obstacles {
        c.polygon(obs.vertices(), "#c03030");
    }
    c.out.push_str("</g>\n<g id=\"goal\">\n");
    c.polygon(scenario.goal.polygon.vertices(), "#30a040");
    c.out.push_str("</g>\n");

    if let Some(report) = report {
        c.out.push_str("<g id=\"tree\">\n");
        let states: Vec<Pose> = report
            .kripke
            .states
            .iter()
            .map(|s| Pose::new(s[0], s[1], s[2]))
            .collect();
        let dt = scenario.rho / 10.0 / scenario.speed;
        for [a, b] in &report.kripke.tree_edges {
            let (from, to) = (states[*a], states[*b]);
            let path = dubins_shortest(&from, &to, scenario.rho, scenario.speed);
            let poses: Vec<Pose> = path.samples(&from, dt).map(|(_, p)| p).collect();
            let pts = c.pose_points(&poses);
            c.polyline(pts, "#ffffff", 0.6, "");
        }
        c.out.push_str("</g>\n");
        if let Some(sol) = &report.solution {
            let poses: Vec<Pose> = sol
                .trajectory
                .iter()
                .map(|s| Pose::new(s[0], s[1], s[2]))
                .collect();
            let color = if sol.unsafety.is_zero() { "#40e060" } else { "#ff3030" };
            c.out.push_str("<g id=\"solution\">\n");
            let pts = c.pose_points(&poses);
            c.polyline(pts, color, 2.5, "");
            c.out.push_str("</g>\n");
        }
    }

    let init = scenario.init;
    writeln!(
        c.out,
        r##"<circle id="init" cx="{:.2}" cy="{:.2}" r="4.00" fill="#3070ff"/>"##,
        c.x(init.x),
        c.y(init.y)
    )
    .unwrap();
    c.out.push_str("</svg>\n");
    c.out
}
