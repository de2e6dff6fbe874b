//! Minimal CSV emission: fixed header, 17 significant digits, `\n` endings.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Formats a double so that it parses back to the same bits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_rows<W: Write>(out: &mut W, header: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_num(x)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_file(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut out = BufWriter::new(fs::File::create(path)?);
    write_rows(&mut out, header, rows)?;
    out.flush()
}
