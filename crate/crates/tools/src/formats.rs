//! Text, CSV and JSON file formats.
//!
//! Truth tables are two lines: `n=<k>` and then `2^k` characters from
//! `{+,-}` in input-mask order, `+` meaning +1.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use spectral_core::protocol::ProtocolCodebook;
use spectral_core::tree::TreeStats;
use spectral_core::{subset_label, BooleanFunction, Error, Spectrum};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_truth_table(text: &str) -> spectral_core::Result<BooleanFunction> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, 1, "empty truth-table file"))?;
    let lead = header.len() - header.trim_start().len();
    let n: u32 = header
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| parse_error(hline, lead + 1, "expected `n=<k>`"))?;
    spectral_core::function::check_capacity(n)?;
    let expected = 1usize << n;
    let mut table = Vec::with_capacity(expected);
    let mut last = (hline, header.len());
    for (lineno, line) in lines {
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '+' => table.push(1),
                '-' => table.push(-1),
                c if c.is_whitespace() => {}
                c => {
                    return Err(parse_error(
                        lineno,
                        col + 1,
                        format!("unexpected character `{c}`"),
                    ))
                }
            }
            if table.len() > expected {
                return Err(parse_error(
                    lineno,
                    col + 1,
                    format!("more than {expected} values"),
                ));
            }
        }
        last = (lineno, line.chars().count());
    }
    if table.len() != expected {
        return Err(parse_error(
            last.0,
            last.1 + 1,
            format!("expected {expected} values, found {}", table.len()),
        ));
    }
    BooleanFunction::new(n, table)
}

pub fn truth_table_string(f: &BooleanFunction) -> String {
    f.table()
        .iter()
        .map(|&v| if v == 1 { '+' } else { '-' })
        .collect()
}

pub fn write_truth_table(f: &BooleanFunction) -> String {
    format!("n={}\n{}\n", f.n(), truth_table_string(f))
}

/// Rebuilds a function from its `+`/`-` string.
pub fn function_from_string(table: &str) -> spectral_core::Result<BooleanFunction> {
    let len = table.chars().count();
    if !len.is_power_of_two() {
        return Err(parse_error(
            1,
            1,
            format!("length {len} is not a power of two"),
        ));
    }
    parse_truth_table(&format!("n={}\n{table}\n", len.trailing_zeros()))
}

/// Columns `mask, subset, numerator, value`; `value = numerator / 2^n`.
pub fn write_spectrum_csv<W: Write>(s: &Spectrum, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mask", "subset", "numerator", "value"])?;
    for (mask, &num) in s.numerators().iter().enumerate() {
        w.write_record([
            mask.to_string(),
            subset_label(mask),
            num.to_string(),
            s.coeff_f64(mask).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `mask, codeword, length`.
pub fn write_codebook_csv<W: Write>(p: &ProtocolCodebook, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mask", "codeword", "length"])?;
    for mask in 0..1usize << p.n() {
        w.write_record([mask.to_string(), p.render(mask), p.cost(mask).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// One header row and one data row; the read profile is `;`-separated.
pub fn write_tree_stats_csv<W: Write>(stats: &TreeStats, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "depth",
        "size",
        "leaves",
        "boundary_size",
        "inner_nodes",
        "max_read",
        "read_profile",
    ])?;
    let profile: Vec<String> = stats.read_profile.iter().map(u32::to_string).collect();
    w.write_record([
        stats.depth.to_string(),
        stats.size.to_string(),
        stats.leaves.to_string(),
        stats.boundary_size.to_string(),
        stats.inner_nodes.to_string(),
        stats.max_read.to_string(),
        profile.join(";"),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
