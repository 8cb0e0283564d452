//! Static SVG figures of one 3-periodic and its blades.

use std::fmt::Write as _;

use poncelet_core::circumellipse::circumconic_centered_fit;
use poncelet_core::{ConcentricPair, Ellipse, Point, Result as GeoResult, Triangle};

use crate::spec::{Layers, RenderSpec};

/// Points per conic outline.
pub const CONIC_SAMPLES: usize = 256;

const MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy)]
enum Style {
    Outer,
    Caustic,
    Triangle,
    Anticevian,
    Blade(usize),
    Excircle,
    Circumcircle,
}

impl Style {
    fn attributes(self) -> &'static str {
        match self {
            Style::Outer => r##"fill="none" stroke="#000000" stroke-width="1.5""##,
            Style::Caustic => r##"fill="none" stroke="#8b4513" stroke-width="1.2""##,
            Style::Triangle => r##"fill="none" stroke="#1f4fd1" stroke-width="1.5""##,
            Style::Anticevian => r##"fill="none" stroke="#2e8b57" stroke-width="1""##,
            Style::Blade(0) => {
                r##"fill="#ff8c00" fill-opacity="0.15" stroke="#ff8c00" stroke-width="1""##
            }
            Style::Blade(1) => {
                r##"fill="#c71585" fill-opacity="0.15" stroke="#c71585" stroke-width="1""##
            }
            Style::Blade(_) => {
                r##"fill="#1e90ff" fill-opacity="0.15" stroke="#1e90ff" stroke-width="1""##
            }
            Style::Excircle => {
                r##"fill="none" stroke="#2e8b57" stroke-width="1" stroke-dasharray="6 4""##
            }
            Style::Circumcircle => {
                r##"fill="none" stroke="#6a5acd" stroke-width="1" stroke-dasharray="2 3""##
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Shape {
    id: String,
    style: Style,
    points: Vec<Point>,
    closed: bool,
}

/// World-space content of one frame.
#[derive(Debug, Clone)]
pub struct Scene {
    t: f64,
    shapes: Vec<Shape>,
    warnings: Vec<String>,
}

fn outline(e: &Ellipse) -> Vec<Point> {
    (0..CONIC_SAMPLES)
        .map(|k| e.point_at(std::f64::consts::TAU * k as f64 / CONIC_SAMPLES as f64))
        .collect()
}

fn circle(center: Point, r: f64) -> Vec<Point> {
    (0..CONIC_SAMPLES)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / CONIC_SAMPLES as f64;
            Point::new(center.x + r * a.cos(), center.y + r * a.sin())
        })
        .collect()
}

fn blade(tri: &Triangle, center: Point) -> GeoResult<Ellipse> {
    circumconic_centered_fit(tri, center)?.to_ellipse()
}

impl Scene {
    pub fn build(pair: &ConcentricPair, t: f64, layers: Layers) -> GeoResult<Self> {
        let orbit = pair.orbit(t)?;
        let tri = orbit.triangle;
        let mut shapes = Vec::new();
        let mut warnings = Vec::new();
        let mut push = |id: String, style, points, closed| {
            shapes.push(Shape {
                id,
                style,
                points,
                closed,
            })
        };

        if layers.outer {
            push("outer".into(), Style::Outer, outline(pair.outer()), true);
        }
        if layers.caustic {
            let caustic = pair.caustic().to_ellipse()?;
            push("caustic".into(), Style::Caustic, outline(&caustic), true);
        }
        let excenters = tri.excenters();
        if layers.blades {
            for (i, c) in excenters.iter().enumerate() {
                match blade(&tri, *c) {
                    Ok(e) => push(
                        format!("blade-{}", i + 1),
                        Style::Blade(i),
                        outline(&e),
                        true,
                    ),
                    Err(e) => warnings.push(format!("blade {} omitted: {e}", i + 1)),
                }
            }
        }
        if layers.excircles {
            let ex = tri.excircles()?;
            for (i, (c, r)) in excenters.iter().zip(ex.radii).enumerate() {
                push(
                    format!("excircle-{}", i + 1),
                    Style::Excircle,
                    circle(*c, r),
                    true,
                );
            }
        }
        if layers.circumcircle {
            let r = tri.metrics().circumradius;
            push(
                "circumcircle".into(),
                Style::Circumcircle,
                circle(tri.circumcenter(), r),
                true,
            );
        }
        if layers.anticevian {
            push(
                "anticevian".into(),
                Style::Anticevian,
                excenters.to_vec(),
                true,
            );
        }
        if layers.triangle {
            push(
                "triangle".into(),
                Style::Triangle,
                tri.vertices().to_vec(),
                true,
            );
        }
        Ok(Self {
            t,
            shapes,
            warnings,
        })
    }

    /// Bounding box `(min, max)` of every drawn point.
    pub fn bounds(&self) -> Option<(Point, Point)> {
        let mut pts = self.shapes.iter().flat_map(|s| s.points.iter());
        let first = *pts.next()?;
        Some(pts.fold((first, first), |(lo, hi), p| {
            (
                Point::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        }))
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// SVG 1.1 document mapping the world box `view` onto `width × height`.
    pub fn to_svg(&self, width: u32, height: u32, view: (Point, Point)) -> String {
        let (w, h) = (f64::from(width), f64::from(height));
        let (lo, hi) = view;
        let span_x = (hi.x - lo.x).max(f64::MIN_POSITIVE);
        let span_y = (hi.y - lo.y).max(f64::MIN_POSITIVE);
        let inner = 1.0 - 2.0 * MARGIN;
        let scale = (w * inner / span_x).min(h * inner / span_y);
        let cx = 0.5 * (lo.x + hi.x);
        let cy = 0.5 * (lo.y + hi.y);
        let px = |p: &Point| (0.5 * w + (p.x - cx) * scale, 0.5 * h - (p.y - cy) * scale);

        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(out, "<title>3-periodic at t={}</title>", self.t);
        out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
        for s in &self.shapes {
            let mut d = String::new();
            for (k, p) in s.points.iter().enumerate() {
                let (x, y) = px(p);
                let _ = write!(d, "{}{x:.3},{y:.3}", if k == 0 { "M" } else { " L" });
            }
            if s.closed {
                d.push_str(" Z");
            }
            let _ = writeln!(
                out,
                r#"<path id="{}" {} d="{d}"/>"#,
                s.id,
                s.style.attributes()
            );
        }
        for (k, msg) in self.warnings.iter().enumerate() {
            let _ = writeln!(out, "<!-- warning: {} -->", escape(msg));
            let _ = writeln!(
                out,
                r##"<text x="8" y="{}" font-family="sans-serif" font-size="12" fill="#b00020">warning: {}</text>"##,
                16 + 14 * k,
                escape(msg)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace("--", "- -")
}

fn unit_box() -> (Point, Point) {
    (Point::new(-1.0, -1.0), Point::new(1.0, 1.0))
}

/// One frame at `spec.t`, framed to its own content.
pub fn render(pair: &ConcentricPair, spec: &RenderSpec) -> GeoResult<String> {
    let scene = Scene::build(pair, spec.t, spec.layers)?;
    let view = scene.bounds().unwrap_or_else(unit_box);
    Ok(scene.to_svg(spec.width, spec.height, view))
}

/// `frames` evenly spaced frames over one revolution, sharing one view box.
pub fn render_frames(
    pair: &ConcentricPair,
    spec: &RenderSpec,
    frames: usize,
) -> GeoResult<Vec<String>> {
    let scenes = (0..frames)
        .map(|k| {
            let t = spec.t + std::f64::consts::TAU * k as f64 / frames as f64;
            Scene::build(pair, t, spec.layers)
        })
        .collect::<GeoResult<Vec<_>>>()?;
    let view = scenes
        .iter()
        .filter_map(Scene::bounds)
        .reduce(|(lo, hi), (l, h)| {
            (
                Point::new(lo.x.min(l.x), lo.y.min(l.y)),
                Point::new(hi.x.max(h.x), hi.y.max(h.y)),
            )
        })
        .unwrap_or_else(unit_box);
    Ok(scenes
        .iter()
        .map(|s| s.to_svg(spec.width, spec.height, view))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(layers: Layers) -> RenderSpec {
        RenderSpec {
            t: 0.7,
            width: 640,
            height: 480,
            layers,
        }
    }

    #[test]
    fn all_layers_present() {
        let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
        let svg = render(&pair, &spec(Layers::ALL)).unwrap();
        for id in [
            "outer",
            "caustic",
            "triangle",
            "anticevian",
            "blade-1",
            "blade-2",
            "blade-3",
            "excircle-1",
            "circumcircle",
        ] {
            assert!(svg.contains(&format!("id=\"{id}\"")), "{id}");
        }
        assert!(svg.contains("stroke-dasharray=\"6 4\""));
        assert!(!svg.contains("warning"));
        let outer = svg.lines().find(|l| l.contains("id=\"outer\"")).unwrap();
        assert_eq!(outer.matches(" L").count(), CONIC_SAMPLES - 1);
    }

    #[test]
    fn layers_are_toggled() {
        let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
        let layers: Layers = "outer,triangle".parse().unwrap();
        let svg = render(&pair, &spec(layers)).unwrap();
        assert_eq!(svg.matches("<path").count(), 2);
    }

    #[test]
    fn deterministic() {
        let pair = ConcentricPair::confocal(1.5, 1.0).unwrap();
        let a = render(&pair, &spec(Layers::ALL)).unwrap();
        let b = render(&pair, &spec(Layers::ALL)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn omitted_blade_is_annotated() {
        let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
        let mut scene = Scene::build(&pair, 0.7, Layers::NONE).unwrap();
        scene
            .warnings
            .push("blade 1 omitted: not an ellipse".into());
        let svg = scene.to_svg(100, 100, unit_box());
        assert!(svg.contains("<!-- warning: blade 1 omitted"));
        assert!(svg.contains("<text"));
    }

    #[test]
    fn frames_share_view() {
        let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
        let frames = render_frames(&pair, &spec("outer".parse().unwrap()), 4).unwrap();
        assert_eq!(frames.len(), 4);
        let body = |s: &String| -> Vec<String> {
            s.lines()
                .filter(|l| !l.starts_with("<title>"))
                .map(String::from)
                .collect()
        };
        assert!(frames.windows(2).all(|w| body(&w[0]) == body(&w[1])));
    }
}
