//! Minimal SVG charts with a logarithmic value axis.

use std::fmt::Write;

const WIDTH: f64 = 560.0;
const HEIGHT: f64 = 380.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone)]
pub enum Body {
    /// Grouped bars, one group per category and one bar per series.
    Bars { categories: Vec<String>, series: Vec<(String, Vec<f64>)> },
    /// Polylines over a shared numeric x axis (linear).
    Lines { series: Vec<(String, Vec<(f64, f64)>)> },
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub body: Body,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Decade range covering every positive finite value; zeros are drawn on the floor.
fn decades(values: impl Iterator<Item = f64>) -> (i32, i32) {
    let (lo, hi) = values
        .filter(|v| v.is_finite() && *v > 0.0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (-1, 0);
    }
    let (a, b) = (lo.log10().floor() as i32, hi.log10().ceil() as i32);
    (a.max(b - 40), if a == b { b + 1 } else { b })
}

impl Chart {
    fn values(&self) -> Vec<f64> {
        match &self.body {
            Body::Bars { series, .. } => series.iter().flat_map(|(_, v)| v.iter().copied()).collect(),
            Body::Lines { series } => series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)).collect(),
        }
    }

    fn render_into(&self, out: &mut String, dx: f64) {
        let (d0, d1) = decades(self.values().into_iter());
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let y_of = |v: f64| {
            let l = if v.is_finite() && v > 0.0 { v.log10().clamp(d0 as f64, d1 as f64) } else { d0 as f64 };
            TOP + plot_h * (1.0 - (l - d0 as f64) / (d1 - d0) as f64)
        };
        let _ = writeln!(out, r#"<g transform="translate({dx:.1},0)">"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + plot_w / 2.0,
            escape(&self.title)
        );
        let step = ((d1 - d0) as f64 / 8.0).ceil().max(1.0) as i32;
        let mut d = d0;
        while d <= d1 {
            let y = y_of(10f64.powi(d));
            let _ = writeln!(
                out,
                r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="11">1e{d}</text>"##,
                LEFT + plot_w,
                LEFT - 6.0,
                y + 4.0
            );
            d += step;
        }
        let _ = writeln!(
            out,
            r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#333"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{:.1}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {:.1})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        );
        let base = TOP + plot_h;
        let labels: Vec<&String> = match &self.body {
            Body::Bars { categories, series } => {
                let group = plot_w / categories.len().max(1) as f64;
                let bar = group * 0.8 / series.len().max(1) as f64;
                for (c, cat) in categories.iter().enumerate() {
                    let x0 = LEFT + group * c as f64 + group * 0.1;
                    for (s, (_, vals)) in series.iter().enumerate() {
                        let y = y_of(vals.get(c).copied().unwrap_or(0.0));
                        let _ = writeln!(
                            out,
                            r#"<rect x="{:.1}" y="{y:.1}" width="{:.1}" height="{:.1}" fill="{}"/>"#,
                            x0 + bar * s as f64,
                            bar * 0.9,
                            base - y,
                            PALETTE[s % PALETTE.len()]
                        );
                    }
                    let _ = writeln!(
                        out,
                        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
                        x0 + group * 0.4,
                        base + 14.0,
                        escape(cat)
                    );
                }
                series.iter().map(|(l, _)| l).collect()
            }
            Body::Lines { series } => {
                let xs = series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0));
                let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
                let span = if x1 > x0 { x1 - x0 } else { 1.0 };
                let x_of = |x: f64| LEFT + plot_w * (x - x0) / span;
                let mut ticks: Vec<f64> = series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)).collect();
                ticks.sort_by(f64::total_cmp);
                ticks.dedup();
                if ticks.len() <= 12 {
                    for x in ticks {
                        let _ = writeln!(
                            out,
                            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="11">{x}</text>"#,
                            x_of(x),
                            base + 14.0
                        );
                    }
                }
                for (s, (_, pts)) in series.iter().enumerate() {
                    let colour = PALETTE[s % PALETTE.len()];
                    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{:.1},{:.1}", x_of(*x), y_of(*y))).collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
                        path.join(" ")
                    );
                    for (x, y) in pts {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{colour}"/>"#,
                            x_of(*x),
                            y_of(*y)
                        );
                    }
                }
                series.iter().map(|(l, _)| l).collect()
            }
        };
        for (s, label) in labels.iter().enumerate() {
            let y = TOP + 12.0 + 18.0 * s as f64;
            let x = WIDTH - RIGHT + 12.0;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{:.1}" width="10" height="10" fill="{}"/><text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
                y - 9.0,
                PALETTE[s % PALETTE.len()],
                x + 15.0,
                y,
                escape(label)
            );
        }
        out.push_str("</g>\n");
    }
}

/// Charts side by side in one document.
pub fn render(charts: &[Chart]) -> String {
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{HEIGHT:.0}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        WIDTH * charts.len() as f64
    );
    for (i, c) in charts.iter().enumerate() {
        c.render_into(&mut out, WIDTH * i as f64);
    }
    out.push_str("</svg>\n");
    out
}
