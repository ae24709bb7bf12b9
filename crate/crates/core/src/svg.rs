//! SVG drawings of a topology on its unit square.

use std::fmt::Write;

use crate::error::{invalid, Result};
use crate::geometry::PointCloud;
use crate::graph::UndirectedGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Width and height of the square canvas in pixels.
    pub canvas: u32,
    /// Blank border around the unit square, in pixels.
    pub margin: u32,
    pub node_radius: f64,
    pub stroke_width: f64,
    pub node_fill: String,
    pub edge_stroke: String,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            canvas: 600,
            margin: 20,
            node_radius: 3.0,
            stroke_width: 1.0,
            node_fill: "#1f4e99".into(),
            edge_stroke: "#7a7a7a".into(),
        }
    }
}

fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Draws `graph` over `cloud`: edges first, nodes on top. The unit square is
/// scaled into the canvas with the y axis pointing up.
pub fn render_svg(cloud: &PointCloud, graph: &UndirectedGraph, options: &RenderOptions) -> Result<String> {
    if cloud.len() != graph.node_count() {
        return Err(invalid(format!(
            "cloud has {} nodes but the graph has {}",
            cloud.len(),
            graph.node_count()
        )));
    }
    let size = options.canvas as f64;
    let margin = options.margin as f64;
    let span = size - 2.0 * margin;
    if span <= 0.0 {
        return Err(invalid("margin leaves no room on the canvas"));
    }
    let sx = |x: f64| margin + x * span;
    let sy = |y: f64| margin + (1.0 - y) * span;

    let mut s = String::new();
    // Writing into a String cannot fail.
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = options.canvas
    );
    let _ = writeln!(
        s,
        r#"<rect x="{m}" y="{m}" width="{w}" height="{w}" fill="none" stroke="black" stroke-width="1"/>"#,
        m = margin,
        w = span
    );
    let _ = writeln!(
        s,
        r#"<g stroke="{}" stroke-width="{}">"#,
        escape_attr(&options.edge_stroke),
        options.stroke_width
    );
    for &(u, v) in graph.edges() {
        let (a, b) = (cloud.point(u), cloud.point(v));
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            sx(a.x),
            sy(a.y),
            sx(b.x),
            sy(b.y)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="{}">"#, escape_attr(&options.node_fill));
    for p in cloud.points() {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{}"/>"#,
            sx(p.x),
            sy(p.y),
            options.node_radius
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
