//! Minimal SVG figures: log-log scatter with a fitted line and annotated
//! slope, and trend plots with error bars. Figures carry only numbers that
//! can be recomputed from their CSV.

use crate::error::ExperimentError;
use crate::experiment::ResultTable;
use crate::stats::{fit_line, fit_plane};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    LogLog,
    Trend,
}

#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub x_col: String,
    pub y_col: String,
    pub err_col: Option<String>,
    pub title: String,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;

fn map(v: f64, lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> f64 {
    if hi <= lo {
        return (out_lo + out_hi) / 2.0;
    }
    out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo)
}

/// Render a table to an SVG string.
pub fn emit_plot(
    table: &ResultTable,
    kind: PlotKind,
    spec: &PlotSpec,
) -> Result<String, ExperimentError> {
    if table.rows.is_empty() {
        return Err(ExperimentError::EmptyTable);
    }
    let xs = table
        .column_f64(&spec.x_col)
        .ok_or_else(|| ExperimentError::AssertionFailed(format!("no column {}", spec.x_col)))?;
    let ys = table
        .column_f64(&spec.y_col)
        .ok_or_else(|| ExperimentError::AssertionFailed(format!("no column {}", spec.y_col)))?;
    let errs = match &spec.err_col {
        Some(c) => table.column_f64(c),
        None => None,
    };
    let (px, py): (Vec<f64>, Vec<f64>) = match kind {
        PlotKind::LogLog => (
            xs.iter().map(|v| v.max(1e-300).ln()).collect(),
            ys.iter().map(|v| v.max(1e-300).ln()).collect(),
        ),
        PlotKind::Trend => (xs.clone(), ys.clone()),
    };
    let (xlo, xhi) = bounds(&px);
    let (ylo, yhi) = bounds(&py);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        spec.title
    ));
    // axes
    svg.push_str(&format!(
        "<line x1=\"{MARGIN}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - MARGIN,
        W - MARGIN / 2.0,
        H - MARGIN
    ));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN}\" y1=\"{}\" x2=\"{MARGIN}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - MARGIN,
        MARGIN / 2.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        H - MARGIN / 3.0,
        spec.x_col
    ));
    // points and error bars
    for i in 0..px.len() {
        let cx = map(px[i], xlo, xhi, MARGIN, W - MARGIN / 2.0);
        let cy = map(py[i], ylo, yhi, H - MARGIN, MARGIN / 2.0);
        if let Some(es) = &errs {
            let e = es[i];
            let (e_lo, e_hi) = match kind {
                PlotKind::Trend => (py[i] - e, py[i] + e),
                PlotKind::LogLog => ((ys[i] - e).max(1e-300).ln(), (ys[i] + e).ln()),
            };
            let y1 = map(e_lo, ylo, yhi, H - MARGIN, MARGIN / 2.0);
            let y2 = map(e_hi, ylo, yhi, H - MARGIN, MARGIN / 2.0);
            svg.push_str(&format!(
                "<line x1=\"{cx}\" y1=\"{y1}\" x2=\"{cx}\" y2=\"{y2}\" stroke=\"gray\"/>\n"
            ));
        }
        svg.push_str(&format!(
            "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"3.5\" fill=\"steelblue\"/>\n"
        ));
    }
    // fitted line and slope annotation for log-log plots
    if kind == PlotKind::LogLog {
        if let Some(fit) = fit_line(&px, &py) {
            let y_at = |x: f64| fit.intercept + fit.slope * x;
            let x1 = map(xlo, xlo, xhi, MARGIN, W - MARGIN / 2.0);
            let x2 = map(xhi, xlo, xhi, MARGIN, W - MARGIN / 2.0);
            let y1 = map(y_at(xlo), ylo, yhi, H - MARGIN, MARGIN / 2.0);
            let y2 = map(y_at(xhi), ylo, yhi, H - MARGIN, MARGIN / 2.0);
            svg.push_str(&format!(
                "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"firebrick\" stroke-dasharray=\"5,4\"/>\n"
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"44\" font-size=\"13\" text-anchor=\"middle\">slope = {:.6}</text>\n",
                W / 2.0,
                fit.slope
            ));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

/// The bilinear sweep figure: log-log in `mu` with the plane-fitted
/// exponents annotated. The annotated numbers come from the same fit the
/// sweep reports, recomputable from the CSV.
pub fn bilinear_figure(fit: &crate::bilinear::KFit) -> Result<String, ExperimentError> {
    if fit.cells.is_empty() {
        return Err(ExperimentError::EmptyTable);
    }
    let x1: Vec<f64> = fit.cells.iter().map(|c| c.eff_mu.ln()).collect();
    let x2: Vec<f64> = fit.cells.iter().map(|c| c.eff_nu.ln()).collect();
    let y: Vec<f64> = fit.cells.iter().map(|c| c.ratio.ln()).collect();
    let plane = fit_plane(&x1, &x2, &y)
        .ok_or_else(|| ExperimentError::AssertionFailed("degenerate fit".into()))?;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">bilinear ratio sweep</text>\n",
        W / 2.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"44\" font-size=\"13\" text-anchor=\"middle\">e_mu = {:.6}, e_nu = {:.6}, r2 = {:.4}</text>\n",
        W / 2.0,
        plane.slope_x1,
        plane.slope_x2,
        plane.r_squared
    ));
    let (xlo, xhi) = bounds(&x1);
    let ylo = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let yhi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for i in 0..x1.len() {
        let cx = map(x1[i], xlo, xhi, MARGIN, W - MARGIN / 2.0);
        let cy = map(y[i], ylo, yhi, H - MARGIN, MARGIN / 2.0);
        svg.push_str(&format!(
            "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"3.5\" fill=\"steelblue\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
