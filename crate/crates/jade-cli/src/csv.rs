//! CSV ingestion and emission for time series and analysis results.
//!
//! Numeric output uses 12 significant digits with a `.` decimal separator,
//! independent of locale, so files are bit-stable and round-trip through
//! the reader at that precision. Writes go through a temp file and an
//! atomic rename; no partial output file survives an error.

use crate::error::CliError;
use jade_core::bench::SweepReport;
use jade_core::fif::Decomposition;
use jade_core::jade::JadeResult;
use jade_core::Signal;
use std::io::Write;
use std::path::Path;

/// A parsed numeric table: column headers plus column-major values.
#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Column by header name.
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
    }
}

/// Parse comma-separated numeric text. The first line may be a header; it
/// is detected by failing to parse as numbers. Every data row must have
/// the same column count, and malformed cells are reported by location.
pub fn parse_table(text: &str) -> Result<Table, CliError> {
    let mut headers: Vec<String> = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut data_rows = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Vec<Option<f64>> = cells.iter().map(|c| c.parse::<f64>().ok()).collect();
        if parsed.iter().any(Option::is_none) {
            if data_rows == 0 && headers.is_empty() {
                headers = cells.iter().map(|c| c.to_string()).collect();
                continue;
            }
            let col = parsed.iter().position(Option::is_none).unwrap();
            return Err(CliError::Data(format!(
                "non-numeric cell at line {}, column {}",
                lineno + 1,
                col + 1
            )));
        }
        if columns.is_empty() {
            columns = vec![Vec::new(); cells.len()];
            if headers.is_empty() {
                headers = (0..cells.len()).map(|i| format!("col_{i}")).collect();
            }
        }
        if cells.len() != columns.len() {
            return Err(CliError::Data(format!(
                "line {}: expected {} columns, found {}",
                lineno + 1,
                columns.len(),
                cells.len()
            )));
        }
        for (col, v) in columns.iter_mut().zip(parsed) {
            col.push(v.unwrap());
        }
        data_rows += 1;
    }
    if data_rows == 0 {
        return Err(CliError::Data("no data rows".into()));
    }
    Ok(Table { headers, columns })
}

/// Build a signal from a parsed table: either `(time, value)` columns with
/// uniform sampling, or a single value column plus an explicit rate.
pub fn signal_from_table(table: &Table, rate: Option<f64>) -> Result<Signal, CliError> {
    if table.columns.len() == 1 {
        let rate = rate.ok_or_else(|| {
            CliError::Usage("single-column input needs --rate".into())
        })?;
        if !(rate > 0.0) {
            return Err(CliError::Usage(format!("rate must be positive, got {rate}")));
        }
        return Ok(Signal::new(table.columns[0].clone(), 1.0 / rate)?);
    }
    let time = &table.columns[0];
    let values = &table.columns[1];
    if time.len() < 2 {
        return Err(CliError::Data("need at least two rows".into()));
    }
    let dt = time[1] - time[0];
    if !(dt > 0.0) {
        return Err(CliError::Data("time column must increase".into()));
    }
    for (i, w) in time.windows(2).enumerate() {
        if ((w[1] - w[0]) - dt).abs() > 1e-6 * dt {
            return Err(CliError::Data(format!(
                "non-uniform sampling at row {} (dt {} vs {})",
                i + 2,
                w[1] - w[0],
                dt
            )));
        }
    }
    Ok(Signal::new(values.clone(), dt)?.with_start_time(time[0]))
}

/// Read a signal from CSV text.
pub fn read_csv(text: &str, rate: Option<f64>) -> Result<Signal, CliError> {
    signal_from_table(&parse_table(text)?, rate)
}

/// Format one value with 12 significant digits.
pub fn fmt(v: f64) -> String {
    format!("{v:.11e}")
}

fn render_table(headers: &[&str], columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = headers.join(",");
    out.push('\n');
    for r in 0..rows {
        for (c, col) in columns.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            out.push_str(&fmt(col[r]));
        }
        out.push('\n');
    }
    out
}

/// Render an estimate as `time,phase_rad,if_hz,amplitude,mean`.
pub fn render_jade(signal: &Signal, result: &JadeResult) -> String {
    let time = signal.time_axis();
    render_table(
        &["time", "phase_rad", "if_hz", "amplitude", "mean"],
        &[
            &time,
            &result.phase.splined,
            &result.frequency.values,
            &result.amplitude,
            &result.mean,
        ],
    )
}

/// Render a decomposition as `time,imf_1..imf_k,remainder`.
pub fn render_decomposition(signal: &Signal, decomposition: &Decomposition) -> String {
    let time = signal.time_axis();
    let mut headers: Vec<String> = vec!["time".into()];
    for i in 0..decomposition.imfs.len() {
        headers.push(format!("imf_{}", i + 1));
    }
    headers.push("remainder".into());
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut columns: Vec<&[f64]> = vec![&time];
    for imf in &decomposition.imfs {
        columns.push(imf.samples());
    }
    columns.push(decomposition.remainder.samples());
    render_table(&header_refs, &columns)
}

/// Render a sweep report (delegates to the harness formatting).
pub fn render_sweep(report: &SweepReport) -> String {
    report.to_csv()
}

/// Write text to a path atomically, or to stdout when the path is `-`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) if p.as_os_str() == "-" => {
            print!("{text}");
            Ok(())
        }
        Some(p) => {
            let tmp = p.with_extension(format!("tmp.{}", std::process::id()));
            {
                let mut f = std::fs::File::create(&tmp)
                    .map_err(|e| CliError::Data(format!("{}: {e}", tmp.display())))?;
                f.write_all(text.as_bytes())
                    .map_err(|e| CliError::Data(format!("{}: {e}", tmp.display())))?;
                f.sync_all().ok();
            }
            std::fs::rename(&tmp, p).map_err(|e| {
                std::fs::remove_file(&tmp).ok();
                CliError::Data(format!("{}: {e}", p.display()))
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_column_csv_reads_signal() {
        let s = read_csv("time,value\n0.0,1.0\n0.001,2.0\n0.002,3.0\n", None).unwrap();
        assert_eq!(s.samples(), &[1.0, 2.0, 3.0]);
        assert!((s.sample_period() - 0.001).abs() < 1e-12);
    }

    #[test]
    fn single_column_needs_rate() {
        assert!(matches!(read_csv("1.0\n2.0\n", None), Err(CliError::Usage(_))));
        let s = read_csv("1.0\n2.0\n", Some(360.0)).unwrap();
        assert!((s.sample_period() - 1.0 / 360.0).abs() < 1e-15);
    }

    #[test]
    fn jitter_is_rejected_with_row_number() {
        let err = read_csv("0.0,1.0\n1.0,1.0\n2.5,1.0\n", None).unwrap_err();
        match err {
            CliError::Data(msg) => assert!(msg.contains("row 3"), "{msg}"),
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn non_numeric_cell_is_located() {
        let err = parse_table("0.0,1.0\n1.0,oops\n").unwrap_err();
        match err {
            CliError::Data(msg) => {
                assert!(msg.contains("line 2"), "{msg}");
                assert!(msg.contains("column 2"), "{msg}");
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn roundtrip_preserves_twelve_digits() {
        let values = [1.234567890123e-7, -0.5, 32767.0 / 32768.0, 1.0];
        let text = render_table(&["time", "value"], &[&[0.0, 1.0, 2.0, 3.0], &values]);
        let back = read_csv(&text, None).unwrap();
        for (a, b) in back.samples().iter().zip(values.iter()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn table_lookup_by_header() {
        let t = parse_table("a,b\n1,2\n3,4\n").unwrap();
        assert_eq!(t.column("b").unwrap(), &[2.0, 4.0]);
        assert!(t.column("c").is_none());
        assert_eq!(t.rows(), 2);
    }
}
