//! Row-oriented table output shared by the CLI emitters.

use std::io;

/// A record type that knows its CSV column set. Implementors also derive
/// `serde::Serialize` with matching field names, so the JSON rendering of a
/// table mirrors the CSV one.
pub trait TableRow: serde::Serialize {
    const CSV_HEADER: &'static str;
    fn csv_row(&self) -> String;
}

/// Header line plus one line per row.
pub fn write_csv<R: TableRow, W: io::Write>(rows: &[R], out: &mut W) -> io::Result<()> {
    writeln!(out, "{}", R::CSV_HEADER)?;
    for row in rows {
        writeln!(out, "{}", row.csv_row())?;
    }
    Ok(())
}

/// Plain-decimal rendering with at least `sig` significant digits and no
/// exponent notation, e.g. `format_sig(0.0102105468, 6) == "0.0102105"`.
pub fn format_sig(x: f64, sig: u32) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}
