//! Polytope input, sample output and tree formats.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! value reads back bit-for-bit.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;
use tropihar_core::{EquidistantTree, TreeTopology, TropicalPoint, TropicalPolytope, Ultrametric};

use crate::error::{CliError, Result};

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Loads a vertex matrix, one vertex per row, from `.json` or CSV.
/// Rows are canonicalized.
pub fn read_polytope(path: &Path) -> Result<TropicalPolytope> {
    let text = read_text(path)?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let rows = if is_json {
        parse_matrix_json(&text)?
    } else {
        parse_matrix_csv(&text)?
    };
    polytope_from_rows(&rows)
}

pub fn polytope_from_rows(rows: &[Vec<f64>]) -> Result<TropicalPolytope> {
    if rows.is_empty() {
        return Err(CliError::config("vertex matrix is empty"));
    }
    TropicalPolytope::from_rows(rows)
        .map_err(|e| CliError::config(format!("bad vertex matrix: {e}")))
}

/// Either a bare array of rows or an object with a `vertices` field.
pub fn parse_matrix_json(text: &str) -> Result<Vec<Vec<f64>>> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid JSON: {e}")))?;
    let rows = match v {
        Value::Object(mut o) => o
            .remove("vertices")
            .ok_or_else(|| CliError::config("missing `vertices`"))?,
        other => other,
    };
    serde_json::from_value(rows)
        .map_err(|e| CliError::config(format!("expected a matrix of numbers: {e}")))
}

/// Comma-separated rows; `#` starts a comment and a non-numeric first row is
/// taken as a header.
pub fn parse_matrix_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::config(format!("CSV: {e}")))?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if k == 0 => continue,
            Err(e) => return Err(CliError::config(format!("CSV row {}: {e}", k + 1))),
        }
    }
    Ok(rows)
}

/// Reads samples written by [`write_points_csv`] (or any numeric CSV).
pub fn read_points_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    parse_matrix_csv(&read_text(path)?)
}

pub fn point_header(e: usize) -> Vec<String> {
    (1..=e).map(|i| format!("x_{i}")).collect()
}

pub fn write_points_csv<W: Write>(w: W, points: &[TropicalPoint]) -> Result<()> {
    let e = points.first().map_or(0, TropicalPoint::dim);
    write_rows_csv(
        w,
        &point_header(e),
        points.iter().map(TropicalPoint::as_slice),
    )
}

pub fn write_points_jsonl<W: Write>(mut w: W, points: &[TropicalPoint]) -> std::io::Result<()> {
    for p in points {
        serde_json::to_writer(&mut w, p.as_slice())?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

fn write_rows_csv<'a, W: Write>(
    w: W,
    header: &[String],
    rows: impl Iterator<Item = &'a [f64]>,
) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| CliError::config(format!("CSV write: {e}"));
    wr.write_record(header).map_err(csv_err)?;
    for row in rows {
        wr.write_record(row.iter().map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    wr.flush().map_err(|e| CliError::io("<output>", e))
}

/// `d_i_j` labels in pair order, 1-based.
pub fn ultrametric_header(m: usize) -> Vec<String> {
    let mut h = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            h.push(format!("d_{i}_{j}"));
        }
    }
    h
}

pub fn write_ultrametrics_csv<W: Write>(w: W, samples: &[Ultrametric]) -> Result<()> {
    let m = samples.first().map_or(0, Ultrametric::leaves);
    write_rows_csv(
        w,
        &ultrametric_header(m),
        samples.iter().map(Ultrametric::values),
    )
}

/// Rows of a file written by [`write_ultrametrics_csv`]; the header is required.
pub fn read_ultrametrics_csv(path: &Path) -> Result<(usize, Vec<Vec<f64>>)> {
    let text = read_text(path)?;
    let first = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let cols: Vec<&str> = first.split(',').map(str::trim).collect();
    let m = tropihar_core::ultrametric::leaves_for_len(cols.len())
        .filter(|&m| ultrametric_header(m).iter().zip(&cols).all(|(a, b)| a == b))
        .ok_or_else(|| CliError::config("expected an ultrametric CSV with a d_i_j header"))?;
    Ok((m, parse_matrix_csv(&text)?))
}

/// Newick string with branch lengths and 1-based leaf labels.
pub fn newick(tree: &EquidistantTree) -> String {
    fn walk(t: &EquidistantTree, n: usize, out: &mut String) {
        let node = &t.nodes()[n];
        if let Some(l) = node.leaf {
            out.push_str(&(l + 1).to_string());
            return;
        }
        out.push('(');
        for (k, c) in t.sorted_children(n).into_iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            walk(t, c, out);
            out.push(':');
            out.push_str(&(node.height - t.nodes()[c].height).to_string());
        }
        out.push(')');
    }
    let mut s = String::new();
    walk(tree, tree.root(), &mut s);
    s.push(';');
    s
}

/// Topology label to count, pretty-printed JSON.
pub fn histogram_json(h: &BTreeMap<TreeTopology, usize>) -> String {
    let map: BTreeMap<&str, usize> = h.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    serde_json::to_string_pretty(&map).expect("string keys")
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}
