//! Plain SVG plots with y pointing up.

use std::fmt::Write;

type P = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkerKind {
    Vertex,
    Singular,
    Inflection,
}

impl MarkerKind {
    fn label(self) -> &'static str {
        match self {
            MarkerKind::Vertex => "vertex",
            MarkerKind::Singular => "singular point",
            MarkerKind::Inflection => "inflection",
        }
    }
}

const MARKER_COLOR: &str = "#d62728";

pub struct Line {
    pub label: &'static str,
    pub color: &'static str,
    pub points: Vec<P>,
}

#[derive(Default)]
pub struct Figure {
    pub title: String,
    pub lines: Vec<Line>,
    pub markers: Vec<(MarkerKind, P)>,
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG coordinates: `y` is flipped.
fn at(p: P) -> P {
    [p[0], -p[1]]
}

fn marker(out: &mut String, kind: MarkerKind, p: P, r: f64) {
    let [x, y] = at(p);
    match kind {
        MarkerKind::Vertex => {
            let _ = writeln!(
                out,
                r#"<circle class="vertex" cx="{}" cy="{}" r="{}" fill="{MARKER_COLOR}"/>"#,
                num(x),
                num(y),
                num(r)
            );
        }
        MarkerKind::Inflection => {
            let _ = writeln!(
                out,
                r#"<circle class="inflection" cx="{}" cy="{}" r="{}" fill="none" stroke="{MARKER_COLOR}" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"#,
                num(x),
                num(y),
                num(r)
            );
        }
        MarkerKind::Singular => {
            let _ = writeln!(
                out,
                r#"<path class="singular" d="M{} {} L{} {} M{} {} L{} {}" stroke="{MARKER_COLOR}" stroke-width="2" vector-effect="non-scaling-stroke"/>"#,
                num(x - r),
                num(y - r),
                num(x + r),
                num(y + r),
                num(x - r),
                num(y + r),
                num(x + r),
                num(y - r)
            );
        }
    }
}

impl Figure {
    fn bounds(&self) -> (P, P) {
        let all = self
            .lines
            .iter()
            .flat_map(|l| l.points.iter())
            .chain(self.markers.iter().map(|(_, p)| p))
            .filter(|p| p[0].is_finite() && p[1].is_finite());
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in all {
            for i in 0..2 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        if lo[0] > hi[0] {
            return ([-1.0, -1.0], [1.0, 1.0]);
        }
        (lo, hi)
    }

    pub fn render(&self) -> String {
        let (lo, hi) = self.bounds();
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let pad = |w: f64| 0.05 * if w > 1e-9 * span { w } else { span };
        let (mx, my) = (pad(hi[0] - lo[0]), pad(hi[1] - lo[1]));
        let (x0, y0) = (lo[0] - mx, -hi[1] - my);
        let (w, h) = (hi[0] - lo[0] + 2.0 * mx, hi[1] - lo[1] + 2.0 * my);
        let width = 800u32;
        let height = (width as f64 * h / w).clamp(100.0, 4000.0);
        let r = 0.008 * w.max(h);

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
            num(x0),
            num(y0),
            num(w),
            num(h),
            width,
            height.round() as u32
        );
        let _ = writeln!(out, "<title>{}</title>", escape(&self.title));
        for line in &self.lines {
            let pts: Vec<String> = line
                .points
                .iter()
                .filter(|p| p[0].is_finite() && p[1].is_finite())
                .map(|&p| {
                    let [x, y] = at(p);
                    format!("{},{}", num(x), num(y))
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline class="{}" fill="none" stroke="{}" stroke-width="1.5" vector-effect="non-scaling-stroke" points="{}"/>"#,
                line.label,
                line.color,
                pts.join(" ")
            );
        }
        for &(kind, p) in &self.markers {
            marker(&mut out, kind, p, r);
        }
        self.legend(&mut out, [x0, y0], w.max(h));
        out.push_str("</svg>\n");
        out
    }

    fn legend(&self, out: &mut String, origin: P, size: f64) {
        let font = 0.025 * size;
        let step = 1.4 * font;
        let (x, mut y) = (origin[0] + 0.5 * font, origin[1] + 1.2 * font);
        let mut kinds: Vec<MarkerKind> = Vec::new();
        for (k, _) in &self.markers {
            if !kinds.contains(k) {
                kinds.push(*k);
            }
        }
        kinds.sort_by_key(|k| *k as u8);
        let _ = writeln!(
            out,
            r#"<g class="legend" font-family="sans-serif" font-size="{}">"#,
            num(font)
        );
        for line in &self.lines {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"#,
                num(x),
                num(y - 0.35 * font),
                num(x + 1.5 * font),
                num(y - 0.35 * font),
                line.color
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">{}</text>"#,
                num(x + 2.0 * font),
                num(y),
                line.label
            );
            y += step;
        }
        for k in kinds {
            let mut m = String::new();
            marker(&mut m, k, [x + 0.75 * font, -(y - 0.35 * font)], 0.3 * font);
            out.push_str(&m.replace("class=\"", "class=\"legend-"));
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">{}</text>"#,
                num(x + 2.0 * font),
                num(y),
                k.label()
            );
            y += step;
        }
        out.push_str("</g>\n");
    }
}
