//! Self-contained multi-panel SVG line plots.
//!
//! Each named series gets its own stacked panel with axes, tick labels,
//! and a legend label. Output is a pure function of the input, so files
//! are byte-stable for fixed data.

use crate::error::CliError;

const PANEL_WIDTH: f64 = 860.0;
const PANEL_HEIGHT: f64 = 180.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 30.0;

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a >= 1e4 || a < 1e-3 {
        format!("{v:.2e}")
    } else {
        format!("{v:.4}")
    }
}

/// Render named per-sample series, one panel per series, against the given
/// x axis. All series must share the x-axis length and be non-empty.
pub fn render_plot(x_axis: &[f64], series: &[(String, Vec<f64>)]) -> Result<String, CliError> {
    if series.is_empty() || x_axis.is_empty() {
        return Err(CliError::Data("nothing to plot".into()));
    }
    for (name, values) in series {
        if values.is_empty() {
            return Err(CliError::Data(format!("series '{name}' is empty")));
        }
        if values.len() != x_axis.len() {
            return Err(CliError::Data(format!(
                "series '{name}' has {} samples, x axis has {}",
                values.len(),
                x_axis.len()
            )));
        }
    }

    let total_height = (PANEL_HEIGHT + MARGIN_TOP + MARGIN_BOTTOM) * series.len() as f64;
    let total_width = PANEL_WIDTH + MARGIN_LEFT + MARGIN_RIGHT;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{total_width}\" height=\"{total_height}\" \
         viewBox=\"0 0 {total_width} {total_height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    ));

    let x_min = x_axis.first().copied().unwrap();
    let x_max = x_axis.last().copied().unwrap();
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };

    for (panel, (name, values)) in series.iter().enumerate() {
        let top = (PANEL_HEIGHT + MARGIN_TOP + MARGIN_BOTTOM) * panel as f64 + MARGIN_TOP;
        let bottom = top + PANEL_HEIGHT;
        let left = MARGIN_LEFT;
        let right = left + PANEL_WIDTH;

        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for &v in values {
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
        if y_min == y_max {
            y_min -= 1.0;
            y_max += 1.0;
        }
        let y_span = y_max - y_min;

        // Frame and legend.
        out.push_str(&format!(
            "<rect x=\"{left}\" y=\"{top}\" width=\"{PANEL_WIDTH}\" height=\"{PANEL_HEIGHT}\" \
             fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n\
             <text x=\"{lx}\" y=\"{ly}\" font-family=\"monospace\" font-size=\"13\">{name}</text>\n",
            lx = left + 6.0,
            ly = top - 7.0,
        ));

        // Ticks: 5 on x (shared scale), 4 on y.
        for t in 0..=4 {
            let frac = t as f64 / 4.0;
            let xv = x_min + frac * x_span;
            let xp = left + frac * PANEL_WIDTH;
            out.push_str(&format!(
                "<line x1=\"{xp:.2}\" y1=\"{bottom}\" x2=\"{xp:.2}\" y2=\"{y2}\" stroke=\"black\"/>\n\
                 <text x=\"{xp:.2}\" y=\"{ty}\" font-family=\"monospace\" font-size=\"11\" \
                 text-anchor=\"middle\">{label}</text>\n",
                y2 = bottom + 4.0,
                ty = bottom + 16.0,
                label = fmt_tick(xv),
            ));
        }
        for t in 0..=3 {
            let frac = t as f64 / 3.0;
            let yv = y_min + frac * y_span;
            let yp = bottom - frac * PANEL_HEIGHT;
            out.push_str(&format!(
                "<line x1=\"{x1}\" y1=\"{yp:.2}\" x2=\"{left}\" y2=\"{yp:.2}\" stroke=\"black\"/>\n\
                 <text x=\"{tx}\" y=\"{ty:.2}\" font-family=\"monospace\" font-size=\"11\" \
                 text-anchor=\"end\">{label}</text>\n",
                x1 = left - 4.0,
                tx = left - 7.0,
                ty = yp + 4.0,
                label = fmt_tick(yv),
            ));
        }

        // Polyline.
        let mut points = String::new();
        for (x, v) in x_axis.iter().zip(values) {
            let xp = left + (x - x_min) / x_span * PANEL_WIDTH;
            let yp = bottom - (v - y_min) / y_span * PANEL_HEIGHT;
            points.push_str(&format!("{xp:.3},{yp:.3} "));
        }
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"{}\"/>\n",
            points.trim_end()
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}
