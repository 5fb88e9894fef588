//! Self-contained SVG figures rendered without a plotting dependency.
//!
//! Output bytes are a pure function of the input series: coordinates are
//! formatted with fixed precision and no timestamps or ids are embedded, so
//! re-plotting identical data reproduces identical files.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 74.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 58.0;

const COLOR_TEXT: &str = "#333333";
const COLOR_AXIS: &str = "#555555";
const COLOR_GRID: &str = "#dddddd";
const COLOR_SERIES: &str = "#1f77b4";
const COLOR_BAND: &str = "#9ecae1";
const COLOR_REFERENCE: &str = "#d62728";

/// A per-level summary series: the median with its quartile band.
pub struct BandSeries {
    pub xs: Vec<f64>,
    pub q1: Vec<f64>,
    pub median: Vec<f64>,
    pub q3: Vec<f64>,
}

/// A median-and-band line figure with an optional dashed reference level.
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: BandSeries,
    pub reference: Option<(String, f64)>,
}

struct Scale {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        let t = if self.hi == self.lo {
            0.5
        } else {
            (v - self.lo) / (self.hi - self.lo)
        };
        self.px_lo + t * (self.px_hi - self.px_lo)
    }
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Tick text kept short but unambiguous; pure function of the value.
fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if !(0.01..10_000.0).contains(&a) {
        return format!("{v:.1e}");
    }
    let mut s = format!("{v:.3}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    s
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if lo == hi {
        let pad = lo.abs().max(1.0) * 0.1;
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.08;
    (lo - pad, hi + pad)
}

fn open_svg(out: &mut String, title: &str) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\" font-family=\"Helvetica, Arial, sans-serif\">\n",
        w = WIDTH,
        h = HEIGHT
    ));
    out.push_str(&format!(
        "<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n",
        w = WIDTH,
        h = HEIGHT
    ));
    out.push_str(&format!(
        "<text x=\"{x}\" y=\"26\" text-anchor=\"middle\" font-size=\"15\" \
         font-weight=\"bold\" fill=\"{c}\">{t}</text>\n",
        x = px(WIDTH / 2.0),
        c = COLOR_TEXT,
        t = escape(title)
    ));
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(out: &mut String, x: &Scale, y: &Scale, x_label: &str, y_label: &str, x_ticks: &[f64]) {
    // Horizontal grid lines plus y tick labels.
    for i in 0..=4 {
        let v = y.lo + (y.hi - y.lo) * (i as f64 / 4.0);
        let yy = y.map(v);
        out.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{yy}\" x2=\"{x2}\" y2=\"{yy}\" stroke=\"{c}\" stroke-width=\"1\"/>\n",
            x1 = px(x.px_lo),
            x2 = px(x.px_hi),
            yy = px(yy),
            c = COLOR_GRID
        ));
        out.push_str(&format!(
            "<text x=\"{xx}\" y=\"{yy}\" text-anchor=\"end\" font-size=\"11\" fill=\"{c}\">{t}</text>\n",
            xx = px(x.px_lo - 8.0),
            yy = px(yy + 4.0),
            c = COLOR_TEXT,
            t = tick_label(v)
        ));
    }
    for &v in x_ticks {
        let xx = x.map(v);
        out.push_str(&format!(
            "<line x1=\"{xx}\" y1=\"{y1}\" x2=\"{xx}\" y2=\"{y2}\" stroke=\"{c}\" stroke-width=\"1\"/>\n",
            xx = px(xx),
            y1 = px(y.px_lo),
            y2 = px(y.px_lo + 5.0),
            c = COLOR_AXIS
        ));
        out.push_str(&format!(
            "<text x=\"{xx}\" y=\"{yy}\" text-anchor=\"middle\" font-size=\"11\" fill=\"{c}\">{t}</text>\n",
            xx = px(xx),
            yy = px(y.px_lo + 20.0),
            c = COLOR_TEXT,
            t = tick_label(v)
        ));
    }
    // Axis frame.
    out.push_str(&format!(
        "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x1}\" y2=\"{y2}\" stroke=\"{c}\" stroke-width=\"1.5\"/>\n",
        x1 = px(x.px_lo),
        y1 = px(y.px_hi),
        y2 = px(y.px_lo),
        c = COLOR_AXIS
    ));
    out.push_str(&format!(
        "<line x1=\"{x1}\" y1=\"{yy}\" x2=\"{x2}\" y2=\"{yy}\" stroke=\"{c}\" stroke-width=\"1.5\"/>\n",
        x1 = px(x.px_lo),
        x2 = px(x.px_hi),
        yy = px(y.px_lo),
        c = COLOR_AXIS
    ));
    out.push_str(&format!(
        "<text x=\"{xx}\" y=\"{yy}\" text-anchor=\"middle\" font-size=\"12\" fill=\"{c}\">{t}</text>\n",
        xx = px((x.px_lo + x.px_hi) / 2.0),
        yy = px(HEIGHT - 14.0),
        c = COLOR_TEXT,
        t = escape(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{yy}\" text-anchor=\"middle\" font-size=\"12\" fill=\"{c}\" \
         transform=\"rotate(-90 18 {yy})\">{t}</text>\n",
        yy = px((y.px_lo + y.px_hi) / 2.0),
        c = COLOR_TEXT,
        t = escape(y_label)
    ));
}

/// Renders a median line with its quartile band. A single point degrades to
/// a marker without band or line segments.
pub fn line_plot_svg(plot: &LinePlot) -> String {
    let s = &plot.series;
    assert_eq!(s.xs.len(), s.median.len());
    assert_eq!(s.xs.len(), s.q1.len());
    assert_eq!(s.xs.len(), s.q3.len());
    assert!(!s.xs.is_empty(), "a plot needs at least one point");

    let (mut x_lo, mut x_hi) = (
        s.xs.iter().cloned().fold(f64::INFINITY, f64::min),
        s.xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    if x_lo == x_hi {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    let mut y_values: Vec<f64> = s
        .q1
        .iter()
        .chain(s.q3.iter())
        .chain(s.median.iter())
        .cloned()
        .collect();
    if let Some((_, v)) = &plot.reference {
        y_values.push(*v);
    }
    let (y_lo, y_hi) = padded(
        y_values.iter().cloned().fold(f64::INFINITY, f64::min),
        y_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );

    let x = Scale {
        lo: x_lo,
        hi: x_hi,
        px_lo: MARGIN_LEFT,
        px_hi: WIDTH - MARGIN_RIGHT,
    };
    let y = Scale {
        lo: y_lo,
        hi: y_hi,
        px_lo: HEIGHT - MARGIN_BOTTOM,
        px_hi: MARGIN_TOP,
    };

    let mut out = String::new();
    open_svg(&mut out, &plot.title);
    axes(&mut out, &x, &y, &plot.x_label, &plot.y_label, &s.xs);

    if s.xs.len() > 1 {
        let mut band = String::from("M");
        for (i, &xv) in s.xs.iter().enumerate() {
            band.push_str(&format!(" {},{}", px(x.map(xv)), px(y.map(s.q3[i]))));
        }
        for (i, &xv) in s.xs.iter().enumerate().rev() {
            band.push_str(&format!(" L {},{}", px(x.map(xv)), px(y.map(s.q1[i]))));
        }
        band.push_str(" Z");
        out.push_str(&format!(
            "<path d=\"{band}\" fill=\"{c}\" fill-opacity=\"0.45\" stroke=\"none\"/>\n",
            c = COLOR_BAND
        ));
        let pts: Vec<String> = s
            .xs
            .iter()
            .enumerate()
            .map(|(i, &xv)| format!("{},{}", px(x.map(xv)), px(y.map(s.median[i]))))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{p}\" fill=\"none\" stroke=\"{c}\" stroke-width=\"2\"/>\n",
            p = pts.join(" "),
            c = COLOR_SERIES
        ));
    }
    for (i, &xv) in s.xs.iter().enumerate() {
        out.push_str(&format!(
            "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"3\" fill=\"{c}\"/>\n",
            cx = px(x.map(xv)),
            cy = px(y.map(s.median[i])),
            c = COLOR_SERIES
        ));
    }

    let mut legend_y = MARGIN_TOP + 8.0;
    let legend_x = WIDTH - MARGIN_RIGHT - 190.0;
    out.push_str(&format!(
        "<line x1=\"{x1}\" y1=\"{yy}\" x2=\"{x2}\" y2=\"{yy}\" stroke=\"{c}\" stroke-width=\"2\"/>\n",
        x1 = px(legend_x),
        x2 = px(legend_x + 26.0),
        yy = px(legend_y - 4.0),
        c = COLOR_SERIES
    ));
    out.push_str(&format!(
        "<text x=\"{xx}\" y=\"{yy}\" font-size=\"11\" fill=\"{c}\">median (band: quartiles)</text>\n",
        xx = px(legend_x + 32.0),
        yy = px(legend_y),
        c = COLOR_TEXT
    ));
    if let Some((name, v)) = &plot.reference {
        out.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{yy}\" x2=\"{x2}\" y2=\"{yy}\" stroke=\"{c}\" \
             stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n",
            x1 = px(x.px_lo),
            x2 = px(x.px_hi),
            yy = px(y.map(*v)),
            c = COLOR_REFERENCE
        ));
        legend_y += 16.0;
        out.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{yy}\" x2=\"{x2}\" y2=\"{yy}\" stroke=\"{c}\" \
             stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n",
            x1 = px(legend_x),
            x2 = px(legend_x + 26.0),
            yy = px(legend_y - 4.0),
            c = COLOR_REFERENCE
        ));
        out.push_str(&format!(
            "<text x=\"{xx}\" y=\"{yy}\" font-size=\"11\" fill=\"{c}\">{t}</text>\n",
            xx = px(legend_x + 32.0),
            yy = px(legend_y),
            c = COLOR_TEXT,
            t = escape(name)
        ));
    }

    out.push_str("</svg>\n");
    out
}

/// Renders one bar per named value, with a zero baseline when values span
/// both signs.
pub fn bar_chart_svg(title: &str, y_label: &str, names: &[String], values: &[f64]) -> String {
    assert_eq!(names.len(), values.len());
    assert!(!names.is_empty(), "a bar chart needs at least one bar");

    let v_lo = values.iter().cloned().fold(0.0_f64, f64::min);
    let v_hi = values.iter().cloned().fold(0.0_f64, f64::max);
    let (y_lo, y_hi) = padded(v_lo, v_hi);
    let y = Scale {
        lo: y_lo,
        hi: y_hi,
        px_lo: HEIGHT - MARGIN_BOTTOM,
        px_hi: MARGIN_TOP,
    };
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let slot = plot_w / names.len() as f64;
    let bar_w = slot * 0.62;

    let mut out = String::new();
    open_svg(&mut out, title);

    for i in 0..=4 {
        let v = y.lo + (y.hi - y.lo) * (i as f64 / 4.0);
        let yy = y.map(v);
        out.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{yy}\" x2=\"{x2}\" y2=\"{yy}\" stroke=\"{c}\" stroke-width=\"1\"/>\n",
            x1 = px(MARGIN_LEFT),
            x2 = px(WIDTH - MARGIN_RIGHT),
            yy = px(yy),
            c = COLOR_GRID
        ));
        out.push_str(&format!(
            "<text x=\"{xx}\" y=\"{yy}\" text-anchor=\"end\" font-size=\"11\" fill=\"{c}\">{t}</text>\n",
            xx = px(MARGIN_LEFT - 8.0),
            yy = px(yy + 4.0),
            c = COLOR_TEXT,
            t = tick_label(v)
        ));
    }

    let zero = y.map(0.0);
    for (i, (&v, name)) in values.iter().zip(names).enumerate() {
        let cx = MARGIN_LEFT + slot * (i as f64 + 0.5);
        let vy = y.map(v);
        let (top, h) = if vy <= zero { (vy, zero - vy) } else { (zero, vy - zero) };
        out.push_str(&format!(
            "<rect x=\"{xx}\" y=\"{yy}\" width=\"{w}\" height=\"{h}\" fill=\"{c}\"/>\n",
            xx = px(cx - bar_w / 2.0),
            yy = px(top),
            w = px(bar_w),
            h = px(h),
            c = COLOR_SERIES
        ));
        out.push_str(&format!(
            "<text x=\"{xx}\" y=\"{yy}\" text-anchor=\"middle\" font-size=\"10\" fill=\"{c}\">{t}</text>\n",
            xx = px(cx),
            yy = px(HEIGHT - MARGIN_BOTTOM + 16.0),
            c = COLOR_TEXT,
            t = escape(name)
        ));
    }
    // Zero baseline over the bars when both signs occur.
    out.push_str(&format!(
        "<line x1=\"{x1}\" y1=\"{yy}\" x2=\"{x2}\" y2=\"{yy}\" stroke=\"{c}\" stroke-width=\"1.5\"/>\n",
        x1 = px(MARGIN_LEFT),
        x2 = px(WIDTH - MARGIN_RIGHT),
        yy = px(zero),
        c = COLOR_AXIS
    ));
    out.push_str(&format!(
        "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x1}\" y2=\"{y2}\" stroke=\"{c}\" stroke-width=\"1.5\"/>\n",
        x1 = px(MARGIN_LEFT),
        y1 = px(y.px_hi),
        y2 = px(y.px_lo),
        c = COLOR_AXIS
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{yy}\" text-anchor=\"middle\" font-size=\"12\" fill=\"{c}\" \
         transform=\"rotate(-90 18 {yy})\">{t}</text>\n",
        yy = px((y.px_lo + y.px_hi) / 2.0),
        c = COLOR_TEXT,
        t = escape(y_label)
    ));

    out.push_str("</svg>\n");
    out
}
