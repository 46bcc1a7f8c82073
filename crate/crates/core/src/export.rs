//! Deterministic report rendering: tables to CSV or JSON, and the
//! convergence chart to a standalone SVG.
//!
//! Every report is a [`Table`]: an ordered configuration echo, a column
//! header, and typed cells. CSV output starts with a `# config:` comment
//! line so a report is reproducible from the artifact alone, then a header
//! row, comma separators, LF line endings. JSON output is one object
//! `{"config": {...}, "columns": [...], "rows": [[...], ...]}` with row
//! arrays in column order. Floating-point cells render through the shortest
//! round-trip formatting, so identical inputs give byte-identical artifacts;
//! exact integers of any size render in full decimal.
//!
//! Cells never contain commas, quotes, or newlines by construction (source
//! lists use `|` and `;` separators), so the CSV needs no quoting layer.

use num_bigint::BigUint;

use crate::exact::format_rational;
use crate::heat::HeatTracePoint;
use crate::spectrum::{EigenvalueRecord, SpectralCount, SpectralSource, SpectrumKind};
use crate::weyl::{ConvergenceRow, WeylConstant};

/// One typed table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Free-form token text (kinds, rationals, source lists).
    Text(String),
    /// An exact nonnegative integer, arbitrary size, decimal rendering.
    Count(BigUint),
    /// A floating-point value, shortest round-trip rendering.
    Float(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Count(n) => n.to_string(),
            Cell::Float(x) => format!("{x}"),
        }
    }

    fn to_json_value(&self) -> serde_json::Value {
        match self {
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            // Arbitrary-size integers exceed JSON number precision; ship the
            // exact decimal as a string.
            Cell::Count(n) => serde_json::Value::String(n.to_string()),
            Cell::Float(x) => serde_json::Number::from_f64(*x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
        }
    }
}

/// An ordered report: configuration echo, header, rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Key/value pairs echoed into every artifact, in insertion order.
    pub config: Vec<(String, String)>,
    /// Column names.
    pub columns: Vec<&'static str>,
    /// Rows of cells; every row has one cell per column.
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(config: Vec<(String, String)>, columns: Vec<&'static str>) -> Self {
        Table {
            config,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a leading `# config:` echo line, header row, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# config:");
        for (key, value) in &self.config {
            out.push(' ');
            out.push_str(key);
            out.push('=');
            out.push_str(value);
        }
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// One JSON object: `config` echo, `columns`, and `rows` as arrays in
    /// column order.
    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// The same object as [`Self::to_json`], as a value — for embedding a
    /// table inside a larger report object.
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut root = serde_json::Map::new();
        let mut config = serde_json::Map::new();
        for (key, value) in &self.config {
            config.insert(key.clone(), serde_json::Value::String(value.clone()));
        }
        root.insert("config".into(), serde_json::Value::Object(config));
        root.insert(
            "columns".into(),
            serde_json::Value::Array(
                self.columns
                    .iter()
                    .map(|c| serde_json::Value::String((*c).into()))
                    .collect(),
            ),
        );
        root.insert(
            "rows".into(),
            serde_json::Value::Array(
                self.rows
                    .iter()
                    .map(|row| {
                        serde_json::Value::Array(
                            row.iter().map(Cell::to_json_value).collect(),
                        )
                    })
                    .collect(),
            ),
        );
        serde_json::Value::Object(root)
    }
}

fn kind_token(kind: SpectrumKind) -> &'static str {
    match kind {
        SpectrumKind::TypeA => "a",
        SpectrumKind::TypeB => "b",
        SpectrumKind::Mixed => "mixed",
    }
}

/// `a(n;j)` and `b(|ξ|²;points)` tokens joined by `|`.
fn source_tokens(sources: &[SpectralSource]) -> String {
    sources
        .iter()
        .map(|s| match s {
            SpectralSource::TypeA { n, j } => format!("a({n};{j})"),
            SpectralSource::TypeB { norm_sq, points } => {
                format!("b({};{points})", format_rational(norm_sq))
            }
        })
        .collect::<Vec<_>>()
        .join("|")
}

/// Spectrum dump: `kind, exact_value, float_value, multiplicity, sources`.
/// `exact_value` is in spectral units `u = π/(2c)`; `float_value` is
/// absolute.
pub fn spectrum_table(config: Vec<(String, String)>, records: &[EigenvalueRecord]) -> Table {
    let mut table = Table::new(
        config,
        vec!["kind", "exact_value", "float_value", "multiplicity", "sources"],
    );
    for r in records {
        table.push_row(vec![
            Cell::Text(kind_token(r.kind).into()),
            Cell::Text(format_rational(&r.exact_value)),
            Cell::Float(r.float_value),
            Cell::Count(r.multiplicity.clone()),
            Cell::Text(source_tokens(&r.sources)),
        ]);
    }
    table
}

/// Counting rows: `lambda, N_a, N_b, N, ratio`.
pub fn count_table(config: Vec<(String, String)>, counts: &[SpectralCount]) -> Table {
    let mut table = Table::new(config, vec!["lambda", "N_a", "N_b", "N", "ratio"]);
    for c in counts {
        table.push_row(vec![
            Cell::Float(c.lambda),
            Cell::Count(c.n_a.clone()),
            Cell::Count(c.n_b.clone()),
            Cell::Count(c.n_total.clone()),
            Cell::Float(c.normalized_ratio),
        ]);
    }
    table
}

/// Convergence rows: `lambda, N_a, N_b, N, ratio, target, rel_error`.
pub fn convergence_table(config: Vec<(String, String)>, rows: &[ConvergenceRow]) -> Table {
    let mut table = Table::new(
        config,
        vec!["lambda", "N_a", "N_b", "N", "ratio", "target", "rel_error"],
    );
    for r in rows {
        table.push_row(vec![
            Cell::Float(r.lambda),
            Cell::Count(r.n_a.clone()),
            Cell::Count(r.n_b.clone()),
            Cell::Count(r.n_total.clone()),
            Cell::Float(r.ratio),
            Cell::Float(r.target),
            Cell::Float(r.rel_error),
        ]);
    }
    table
}

/// Heat-trace rows: `t, g, scaled, truncation_bound`.
pub fn heat_table(config: Vec<(String, String)>, points: &[HeatTracePoint]) -> Table {
    let mut table = Table::new(config, vec!["t", "g", "scaled", "truncation_bound"]);
    for p in points {
        table.push_row(vec![
            Cell::Float(p.t),
            Cell::Float(p.g),
            Cell::Float(p.scaled),
            Cell::Float(p.truncation_bound),
        ]);
    }
    table
}

/// Constant rows: `d, alpha, value, quadrature_error`.
pub fn constant_table(config: Vec<(String, String)>, constants: &[WeylConstant]) -> Table {
    let mut table = Table::new(config, vec!["d", "alpha", "value", "quadrature_error"]);
    for c in constants {
        table.push_row(vec![
            Cell::Count(BigUint::from(c.d)),
            Cell::Float(c.alpha),
            Cell::Float(c.value),
            Cell::Float(c.quadrature_error),
        ]);
    }
    table
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

fn fmt2(x: f64) -> String {
    format!("{x:.2}")
}

/// Standalone convergence chart: the measured `N(λ)/λ^{d+1}` as a polyline
/// over `log₁₀ λ`, with the predicted limit as a horizontal asymptote.
/// Self-contained SVG — no external assets, styles inline.
pub fn convergence_svg(title: &str, rows: &[ConvergenceRow]) -> String {
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let target = rows.first().map_or(0.0, |r| r.target);

    let xs: Vec<f64> = rows.iter().map(|r| r.lambda.log10()).collect();
    let (x_min, x_max) = match (xs.first(), xs.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        (Some(&a), _) => (a - 0.5, a + 0.5),
        _ => (0.0, 1.0),
    };
    let y_top = rows
        .iter()
        .map(|r| r.ratio)
        .fold(target, f64::max)
        .max(f64::MIN_POSITIVE)
        * 1.15;

    let to_x = |lx: f64| MARGIN_LEFT + (lx - x_min) / (x_max - x_min) * plot_w;
    let to_y = |v: f64| MARGIN_TOP + (1.0 - (v / y_top).clamp(0.0, 1.0)) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\" \
         font-family=\"monospace\" font-size=\"13\">\n"
    ));
    svg.push_str(&format!(
        "  <title>{}</title>\n",
        title.replace('&', "&amp;").replace('<', "&lt;")
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"24\" text-anchor=\"middle\">{}</text>\n",
        fmt2(SVG_WIDTH / 2.0),
        title.replace('&', "&amp;").replace('<', "&lt;")
    ));
    // Axes.
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt2(MARGIN_LEFT),
        fmt2(MARGIN_TOP),
        fmt2(MARGIN_LEFT),
        fmt2(MARGIN_TOP + plot_h)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt2(MARGIN_LEFT),
        fmt2(MARGIN_TOP + plot_h),
        fmt2(MARGIN_LEFT + plot_w),
        fmt2(MARGIN_TOP + plot_h)
    ));
    // Tick labels on the decade grid.
    let first_decade = x_min.ceil() as i64;
    let last_decade = x_max.floor() as i64;
    for decade in first_decade..=last_decade {
        let x = to_x(decade as f64);
        svg.push_str(&format!(
            "  <line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"lightgray\"/>\n",
            x = fmt2(x),
            y0 = fmt2(MARGIN_TOP),
            y1 = fmt2(MARGIN_TOP + plot_h)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">1e{decade}</text>\n",
            fmt2(x),
            fmt2(MARGIN_TOP + plot_h + 20.0)
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">lambda (log scale)</text>\n",
        fmt2(MARGIN_LEFT + plot_w / 2.0),
        fmt2(SVG_HEIGHT - 16.0)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"start\">{}</text>\n",
        fmt2(8.0),
        fmt2(MARGIN_TOP - 8.0),
        "N(lambda)/lambda^(d+1)"
    ));
    // Horizontal asymptote at the predicted limit.
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"crimson\" \
         stroke-dasharray=\"6 4\"/>\n",
        fmt2(MARGIN_LEFT),
        fmt2(MARGIN_LEFT + plot_w),
        y = fmt2(to_y(target))
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" fill=\"crimson\" text-anchor=\"end\">target {target}</text>\n",
        fmt2(MARGIN_LEFT + plot_w - 4.0),
        fmt2(to_y(target) - 6.0)
    ));
    // The measured ratio series.
    let points: Vec<String> = rows
        .iter()
        .map(|r| format!("{},{}", fmt2(to_x(r.lambda.log10())), fmt2(to_y(r.ratio))))
        .collect();
    svg.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
        points.join(" ")
    ));
    for p in &points {
        let mut split = p.split(',');
        let (x, y) = (split.next().unwrap_or("0"), split.next().unwrap_or("0"));
        svg.push_str(&format!(
            "  <circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"steelblue\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
