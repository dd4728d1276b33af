//! Cube file formats.
//!
//! * JSON: `{"n", "start", "mask"?, "layers"}` with `layers[k][i][j]` and an
//!   optional 0/1 `mask` of the same shape. Keys are emitted in that order
//!   and `mask` is omitted when every cell is present.
//! * Text: one `n × n` grid per layer separated by blank lines, `.` for a
//!   hole, `#` comment lines; a `start=<a>` token in a comment sets the
//!   claimed least line sum (default 0).

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::Value;

use crate::cube::{Cube, Mask};
use crate::error::{Error, Result};
use crate::scalar::Entry;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            other => Err(Error::Argument(format!("unknown format '{other}'"))),
        }
    }
}

/// Guesses the format from the first non-blank character.
pub fn sniff(text: &str) -> Format {
    match text.trim_start().chars().next() {
        Some('{') => Format::Json,
        _ => Format::Text,
    }
}

pub fn decode_cube<T: Entry>(text: &str) -> Result<Cube<T>> {
    match sniff(text) {
        Format::Json => decode_json(text),
        Format::Text => decode_text(text),
    }
}

pub fn encode_cube<T: Entry>(cube: &Cube<T>, format: Format) -> String {
    match format {
        Format::Json => encode_json(cube),
        Format::Text => encode_text(cube),
    }
}

fn parse_entry<T: Entry>(value: &Value, locus: &str) -> Result<T> {
    let Value::Number(num) = value else {
        return Err(Error::parse(locus, "expected a nonnegative integer"));
    };
    let literal = num.to_string();
    if literal.starts_with('-') {
        return Err(Error::parse(locus, "negative entry"));
    }
    if literal.contains(['.', 'e', 'E']) {
        return Err(Error::parse(locus, "entry is not an integer"));
    }
    literal
        .parse::<T>()
        .map_err(|_| Error::parse(locus, format!("entry {literal} does not fit the scalar type")))
}

fn parse_size(value: Option<&Value>, field: &str) -> Result<usize> {
    let value = value.ok_or_else(|| Error::parse(field, "missing field"))?;
    let n: u64 = parse_entry(value, field)?;
    usize::try_from(n).map_err(|_| Error::parse(field, "value too large"))
}

fn nested<'a>(value: &'a Value, n: usize, locus: &str) -> Result<&'a Vec<Value>> {
    match value {
        Value::Array(items) if items.len() == n => Ok(items),
        Value::Array(items) => Err(Error::parse(
            locus,
            format!("expected {n} items, found {}", items.len()),
        )),
        _ => Err(Error::parse(locus, "expected an array")),
    }
}

pub fn decode_json<T: Entry>(text: &str) -> Result<Cube<T>> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|err| Error::parse(format!("line {} column {}", err.line(), err.column()), err.to_string()))?;
    let Value::Object(fields) = &doc else {
        return Err(Error::parse("document", "expected a top-level object"));
    };
    for key in fields.keys() {
        if !matches!(key.as_str(), "n" | "start" | "mask" | "layers") {
            return Err(Error::parse(key.as_str(), "unknown field"));
        }
    }
    let n = parse_size(fields.get("n"), "n")?;
    if n == 0 {
        return Err(Error::parse("n", "side length must be at least 1"));
    }
    let start: T = match fields.get("start") {
        Some(v) => parse_entry(v, "start")?,
        None => return Err(Error::parse("start", "missing field")),
    };

    let mask = match fields.get("mask") {
        None => Mask::full(n),
        Some(value) => {
            let mut mask = Mask::full(n);
            for (k, layer) in nested(value, n, "mask")?.iter().enumerate() {
                for (i, row) in nested(layer, n, &format!("mask[{k}]"))?.iter().enumerate() {
                    for (j, cell) in nested(row, n, &format!("mask[{k}][{i}]"))?.iter().enumerate() {
                        let locus = format!("mask[{k}][{i}][{j}]");
                        match cell.as_u64() {
                            Some(0) => mask.set(i, j, k, false),
                            Some(1) => {}
                            _ => return Err(Error::parse(locus, "mask cells must be 0 or 1")),
                        }
                    }
                }
            }
            mask
        }
    };

    let layers_value = fields
        .get("layers")
        .ok_or_else(|| Error::parse("layers", "missing field"))?;
    let mut layers = Vec::with_capacity(n);
    for (k, layer) in nested(layers_value, n, "layers")?.iter().enumerate() {
        let mut rows = Vec::with_capacity(n);
        for (i, row) in nested(layer, n, &format!("layers[{k}]"))?.iter().enumerate() {
            let mut cells = Vec::with_capacity(n);
            for (j, cell) in nested(row, n, &format!("layers[{k}][{i}]"))?.iter().enumerate() {
                let locus = format!("layers[{k}][{i}][{j}]");
                let value: T = parse_entry(cell, &locus)?;
                if !mask.get(i, j, k) && !value.is_zero() {
                    return Err(Error::parse(locus, "nonzero entry on a masked-out cell"));
                }
                cells.push(value);
            }
            rows.push(cells);
        }
        layers.push(rows);
    }
    Cube::from_layers(start, mask, layers)
}

pub fn encode_json<T: Entry>(cube: &Cube<T>) -> String {
    let n = cube.n();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"n\": {n},");
    let _ = writeln!(out, "  \"start\": {},", cube.start());
    let grid = |out: &mut String, name: &str, cell: &dyn Fn(usize, usize, usize) -> String, last: bool| {
        let _ = writeln!(out, "  \"{name}\": [");
        for k in 0..n {
            let rows: Vec<String> = (0..n)
                .map(|i| {
                    let cells: Vec<String> = (0..n).map(|j| cell(i, j, k)).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            let sep = if k + 1 < n { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", rows.join(", "));
        }
        let _ = writeln!(out, "  ]{}", if last { "" } else { "," });
    };
    if !cube.mask().is_full() {
        let mask = cube.mask();
        grid(
            &mut out,
            "mask",
            &|i, j, k| if mask.get(i, j, k) { "1".into() } else { "0".into() },
            false,
        );
    }
    grid(&mut out, "layers", &|i, j, k| cube.get(i, j, k).to_string(), true);
    out.push_str("}\n");
    out
}

pub fn decode_text<T: Entry>(text: &str) -> Result<Cube<T>> {
    let mut start: Option<T> = None;
    let mut declared_n: Option<usize> = None;
    // each layer: rows of (line number, tokens)
    let mut layers: Vec<Vec<(usize, Vec<&str>)>> = Vec::new();
    let mut current: Vec<(usize, Vec<&str>)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            for token in comment.split_whitespace() {
                if let Some(value) = token.strip_prefix("start=") {
                    if value.starts_with('-') {
                        return Err(Error::parse(format!("line {lineno}"), "negative start"));
                    }
                    start =
                        Some(value.parse::<T>().map_err(|_| {
                            Error::parse(format!("line {lineno}"), format!("bad start value '{value}'"))
                        })?);
                } else if let Some(value) = token.strip_prefix("n=") {
                    declared_n =
                        Some(value.parse().map_err(|_| {
                            Error::parse(format!("line {lineno}"), format!("bad side length '{value}'"))
                        })?);
                }
            }
            continue;
        }
        if line.is_empty() {
            if !current.is_empty() {
                layers.push(std::mem::take(&mut current));
            }
            continue;
        }
        current.push((lineno, line.split_whitespace().collect()));
    }
    if !current.is_empty() {
        layers.push(current);
    }

    let n = layers.len();
    if n == 0 {
        return Err(Error::parse("document", "no layers found"));
    }
    if let Some(declared) = declared_n {
        if declared != n {
            return Err(Error::parse(
                "header",
                format!("header declares n={declared} but {n} layers were given"),
            ));
        }
    }
    let mut mask = Mask::full(n);
    let mut values = Vec::with_capacity(n);
    for (k, layer) in layers.iter().enumerate() {
        if layer.len() != n {
            let lineno = layer[0].0;
            return Err(Error::parse(
                format!("line {lineno}"),
                format!("layer {} has {} rows, expected {n}", k + 1, layer.len()),
            ));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, (lineno, tokens)) in layer.iter().enumerate() {
            let locus = format!("line {lineno}");
            if tokens.len() != n {
                return Err(Error::parse(
                    locus,
                    format!("row has {} entries, expected {n}", tokens.len()),
                ));
            }
            let mut row = Vec::with_capacity(n);
            for (j, token) in tokens.iter().enumerate() {
                if *token == "." {
                    mask.set(i, j, k, false);
                    row.push(T::zero());
                } else if token.starts_with('-') {
                    return Err(Error::parse(locus, "negative entry"));
                } else {
                    row.push(
                        token
                            .parse::<T>()
                            .map_err(|_| Error::parse(locus.clone(), format!("bad entry '{token}'")))?,
                    );
                }
            }
            rows.push(row);
        }
        values.push(rows);
    }
    Cube::from_layers(start.unwrap_or_else(T::zero), mask, values)
}

pub fn encode_text<T: Entry>(cube: &Cube<T>) -> String {
    let n = cube.n();
    let cell = |i, j, k| {
        if cube.mask().get(i, j, k) {
            cube.get(i, j, k).to_string()
        } else {
            ".".to_string()
        }
    };
    let width = (0..n * n * n)
        .map(|idx| cell(idx / n % n, idx % n, idx / (n * n)).len())
        .max()
        .unwrap_or(1);
    let mut out = format!("# n={n} start={}\n", cube.start());
    for k in 0..n {
        if k > 0 {
            out.push('\n');
        }
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| format!("{:>width$}", cell(i, j, k))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}
