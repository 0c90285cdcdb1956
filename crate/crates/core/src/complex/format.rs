//! Textual interchange format for chain complexes.
//!
//! A canonical document is compact JSON with sorted keys:
//!
//! ```text
//! {"boundaries":{"1":[[0],[0]]},"cells":{"0":["v"],"1":["a","b"]},"name":"x"}
//! ```
//!
//! Matrices are row-major; a matrix with no entries is written `[]` and its
//! shape is recovered from the cell lists.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use serde_json::Value;

use super::ChainComplex;
use crate::error::{Error, Result};
use crate::exactalg::IntegerMatrix;

pub fn to_document(c: &ChainComplex) -> String {
    let mut cells = BTreeMap::new();
    for n in 0..c.dimensions() {
        let names: Vec<String> = c.cells(n as i64).iter().map(|s| json_string(s)).collect();
        cells.insert(n.to_string(), format!("[{}]", names.join(",")));
    }
    let mut boundaries = BTreeMap::new();
    for n in 1..c.dimensions() {
        boundaries.insert(n.to_string(), matrix_text(&c.boundary(n as i64)));
    }
    let mut out = String::new();
    write!(out, "{{\"boundaries\":{},", object(&boundaries)).unwrap();
    write!(out, "\"cells\":{},", object(&cells)).unwrap();
    write!(out, "\"name\":{}}}", json_string(c.name())).unwrap();
    out
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn object(entries: &BTreeMap<String, String>) -> String {
    let parts: Vec<String> = entries.iter().map(|(k, v)| format!("{}:{v}", json_string(k))).collect();
    format!("{{{}}}", parts.join(","))
}

fn matrix_text(m: &IntegerMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return "[]".into();
    }
    m.to_string()
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn dimension_key(key: &str) -> Result<usize> {
    key.parse()
        .map_err(|_| parse_err(format!("dimension key `{key}` is not a nonnegative integer")))
}

/// Parses an interchange document. Shapes are checked against the cell
/// lists; the chain condition is left to [`ChainComplex::validate`].
pub fn from_document(text: &str) -> Result<ChainComplex> {
    let doc: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| parse_err("document is not an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "name" | "cells" | "boundaries") {
            return Err(parse_err(format!("unknown field `{key}`")));
        }
    }
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("missing string field `name`"))?;

    let cell_obj = obj
        .get("cells")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("missing object field `cells`"))?;
    let mut by_dim = BTreeMap::new();
    for (k, v) in cell_obj {
        let n = dimension_key(k)?;
        let list = v
            .as_array()
            .ok_or_else(|| parse_err(format!("cells of dimension {n} are not a list")))?;
        let names = list
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| parse_err(format!("cell name in dimension {n} is not a string")))
            })
            .collect::<Result<Vec<_>>>()?;
        by_dim.insert(n, names);
    }
    let dims = by_dim.keys().next_back().map_or(0, |&n| n + 1);
    let cells: Vec<Vec<String>> = (0..dims).map(|n| by_dim.remove(&n).unwrap_or_default()).collect();

    let empty = serde_json::Map::new();
    let bd_obj = match obj.get("boundaries") {
        Some(v) => v
            .as_object()
            .ok_or_else(|| parse_err("`boundaries` is not an object"))?,
        None => &empty,
    };
    let mut mats = BTreeMap::new();
    for (k, v) in bd_obj {
        let n = dimension_key(k)?;
        if n == 0 || n >= dims.max(1) {
            return Err(parse_err(format!(
                "boundary key {n} outside 1..{}",
                dims.saturating_sub(1)
            )));
        }
        let rows = cells[n - 1].len();
        let cols = cells[n].len();
        mats.insert(n, parse_matrix(v, rows, cols, n)?);
    }
    let mut boundaries = Vec::new();
    for n in 1..dims {
        let (rows, cols) = (cells[n - 1].len(), cells[n].len());
        match mats.remove(&n) {
            Some(m) => boundaries.push(m),
            None if rows == 0 || cols == 0 => boundaries.push(IntegerMatrix::zeros(rows, cols)),
            None => return Err(parse_err(format!("missing boundary matrix for dimension {n}"))),
        }
    }
    ChainComplex::new(name, cells, boundaries)
}

fn parse_matrix(v: &Value, rows: usize, cols: usize, n: usize) -> Result<IntegerMatrix> {
    let outer = v
        .as_array()
        .ok_or_else(|| parse_err(format!("boundary {n} is not a list of rows")))?;
    if outer.is_empty() {
        if rows * cols != 0 {
            return Err(parse_err(format!("boundary {n} is empty but should be {rows}x{cols}")));
        }
        return Ok(IntegerMatrix::zeros(rows, cols));
    }
    if outer.len() != rows {
        return Err(parse_err(format!(
            "boundary {n} has {} rows, expected {rows}",
            outer.len()
        )));
    }
    let mut m = IntegerMatrix::zeros(rows, cols);
    for (i, row) in outer.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| parse_err(format!("row {i} of boundary {n} is not a list")))?;
        if row.len() != cols {
            return Err(parse_err(format!(
                "row {i} of boundary {n} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, x) in row.iter().enumerate() {
            let num = x
                .as_number()
                .ok_or_else(|| parse_err(format!("entry ({i},{j}) of boundary {n} is not a number")))?;
            let big: BigInt = num
                .to_string()
                .parse()
                .map_err(|_| parse_err(format!("entry ({i},{j}) of boundary {n} is not an integer")))?;
            m.set(i, j, big);
        }
    }
    Ok(m)
}
