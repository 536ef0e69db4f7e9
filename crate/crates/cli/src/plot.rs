//! Static SVG figures: a main `D_b` panel with an optional inset.

use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Solid,
    DashDot,
    Circles,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

const PALETTE: [&str; 5] = ["#1f3b73", "#b2182b", "#1b7837", "#762a83", "#555555"];

struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x: (f64, f64),
    y: (f64, f64),
    log_x: bool,
}

impl Frame {
    fn tx(&self, x: f64) -> f64 {
        let (v, lo, hi) = if self.log_x {
            (x.log10(), self.x.0.log10(), self.x.1.log10())
        } else {
            (x, self.x.0, self.x.1)
        };
        self.left + (v - lo) / (hi - lo) * self.width
    }

    fn ty(&self, y: f64) -> f64 {
        self.top + self.height - (y - self.y.0) / (self.y.1 - self.y.0) * self.height
    }
}

fn extent(panel: &Panel, pick: impl Fn(&(f64, f64)) -> f64) -> (f64, f64) {
    let values = panel.series.iter().flat_map(|s| s.points.iter().map(&pick)).filter(|v| v.is_finite());
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    step * mag
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn format_tick(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn draw_panel(svg: &mut String, panel: &Panel, frame: &Frame, font: f64) {
    let Frame { left, top, width, height, .. } = *frame;
    let _ = writeln!(
        svg,
        r#"<rect x="{left:.1}" y="{top:.1}" width="{width:.1}" height="{height:.1}" fill="white" stroke="black"/>"#
    );

    let x_ticks: Vec<f64> = if frame.log_x {
        let (a, b) = (frame.x.0.log10().ceil() as i32, frame.x.1.log10().floor() as i32);
        (a..=b).map(|k| 10f64.powi(k)).collect()
    } else {
        linear_ticks(frame.x.0, frame.x.1)
    };
    for t in x_ticks {
        let px = frame.tx(t);
        let bottom = top + height;
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.1}" y1="{bottom:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/>"#,
            bottom - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.1}" y="{:.1}" font-size="{font}" text-anchor="middle">{}</text>"#,
            bottom + font + 3.0,
            format_tick(t)
        );
    }
    for t in linear_ticks(frame.y.0, frame.y.1) {
        let py = frame.ty(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{left:.1}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="black"/>"#,
            left + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="{font}" text-anchor="end">{}</text>"#,
            left - 4.0,
            py + font / 3.0,
            format_tick(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="{font}" text-anchor="middle">{}</text>"#,
        left + width / 2.0,
        top + height + 2.2 * font + 4.0,
        escape(&panel.x_label)
    );
    let (lx, ly) = (left - 2.6 * font - 6.0, top + height / 2.0);
    let _ = writeln!(
        svg,
        r#"<text x="{lx:.1}" y="{ly:.1}" font-size="{font}" text-anchor="middle" transform="rotate(-90 {lx:.1} {ly:.1})">{}</text>"#,
        escape(&panel.y_label)
    );

    let clip = format!("clip{}", left as i64 * 1000 + top as i64);
    let _ = writeln!(
        svg,
        r#"<clipPath id="{clip}"><rect x="{left:.1}" y="{top:.1}" width="{width:.1}" height="{height:.1}"/></clipPath>"#
    );
    let _ = writeln!(svg, r#"<g clip-path="url(#{clip})">"#);
    for (i, s) in panel.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let visible = s.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite() && (!frame.log_x || *x > 0.0));
        match s.style {
            Style::Circles => {
                for &(x, y) in visible {
                    let _ = writeln!(
                        svg,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="2.6" fill="none" stroke="{color}"/>"#,
                        frame.tx(x),
                        frame.ty(y)
                    );
                }
            }
            Style::Solid | Style::DashDot => {
                let path: Vec<String> =
                    visible.map(|&(x, y)| format!("{:.2},{:.2}", frame.tx(x), frame.ty(y))).collect();
                let dash = if s.style == Style::DashDot { r#" stroke-dasharray="9 4 2 4""# } else { "" };
                let _ = writeln!(
                    svg,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                    path.join(" ")
                );
            }
        }
    }
    let _ = writeln!(svg, "</g>");
}

fn draw_legend(svg: &mut String, series: &[Series], x: f64, y: f64, font: f64) {
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let row = y + i as f64 * (font + 6.0);
        match s.style {
            Style::Circles => {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="none" stroke="{color}"/>"#,
                    x + 12.0,
                    row - font / 3.0
                );
            }
            Style::Solid | Style::DashDot => {
                let dash = if s.style == Style::DashDot { r#" stroke-dasharray="9 4 2 4""# } else { "" };
                let _ = writeln!(
                    svg,
                    r#"<line x1="{x:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                    row - font / 3.0,
                    x + 24.0,
                    row - font / 3.0
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{row:.1}" font-size="{font}">{}</text>"#,
            x + 30.0,
            escape(&s.label)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `main` with `D_b` on a fixed `[−0.05, 1.1]` axis and, if given,
/// `inset` in the upper left of the plotting area.
pub fn render(main: &Panel, inset: Option<&Panel>) -> String {
    let (w, h) = (720.0, 520.0);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let mut x = extent(main, |p| p.0);
    if main.log_x && x.0 <= 0.0 {
        x.0 = x.1 * 1e-3;
    }
    let frame = Frame { left: 80.0, top: 30.0, width: 600.0, height: 420.0, x, y: (-0.05, 1.1), log_x: main.log_x };
    draw_panel(&mut svg, main, &frame, 14.0);
    draw_legend(&mut svg, &main.series, frame.left + frame.width - 210.0, frame.top + frame.height - 80.0, 13.0);

    if let Some(inset) = inset {
        let ix = extent(inset, |p| p.0);
        let iy = extent(inset, |p| p.1);
        let pad = 0.05 * (iy.1 - iy.0);
        let inner = Frame {
            left: frame.left + 70.0,
            top: frame.top + 20.0,
            width: 230.0,
            height: 150.0,
            x: ix,
            y: (iy.0 - pad, iy.1 + pad),
            log_x: inset.log_x,
        };
        draw_panel(&mut svg, inset, &inner, 11.0);
    }
    svg.push_str("</svg>\n");
    svg
}
