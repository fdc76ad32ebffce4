use std::fmt::Write as _;
use std::path::Path;

use super::{DiagnosticsRecord, COLUMNS};
use crate::error::{Error, Result};

/// Header plus one row per record; floats in shortest round-trip form.
pub fn to_csv_string(records: &[DiagnosticsRecord]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for r in records {
        for (k, v) in r.to_array().iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(out, "{v:?}").expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(records: &[DiagnosticsRecord], path: &Path) -> Result<()> {
    std::fs::write(path, to_csv_string(records)).map_err(|e| Error::io(path, e))
}

/// Parses a file written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != COLUMNS.join(",") {
        return Err(Error::InvalidArgument(format!(
            "{}: unexpected diagnostics header",
            path.display()
        )));
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let bad = |msg: String| Error::InvalidArgument(format!("{}:{}: {msg}", path.display(), n + 2));
            let vals = line
                .split(',')
                .map(|s| s.parse::<f64>().map_err(|e| bad(format!("'{s}': {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            let arr: [f64; 24] = vals
                .try_into()
                .map_err(|v: Vec<f64>| bad(format!("expected {} columns, got {}", COLUMNS.len(), v.len())))?;
            Ok(DiagnosticsRecord::from_array(arr))
        })
        .collect()
}
