//! Output helpers shared by the subcommands: deterministic JSON, minimal
//! CSV quoting, and fixed-width text tables.

use serde::Serialize;

use crate::CliError;

/// Serializes a payload as pretty JSON with a trailing newline. Struct
/// fields serialize in declaration order and nothing in any payload is
/// time- or environment-dependent, so identical invocations are
/// byte-identical.
pub fn json<T: Serialize>(payload: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(payload)
        .map_err(|e| CliError::Internal(format!("JSON serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One CSV line from already-rendered fields.
pub fn csv_row(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

/// Renders rows as a left-aligned fixed-width table. The first row is the
/// header; a separator line of dashes follows it.
pub fn text_table(rows: &[Vec<String>]) -> String {
    if rows.is_empty() {
        return String::new();
    }
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                for _ in cell.chars().count()..widths[i] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if idx == 0 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (cols.saturating_sub(1));
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}
