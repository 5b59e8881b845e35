//! The TNSR/1 text format.
//!
//! ```text
//! # seed=7                  optional comment lines, only before the header
//! tnsr 1 <d> <n> <dense|coo>
//! <body>
//! ```
//!
//! A dense body holds `n^d` whitespace-separated decimals in storage order
//! (last index fastest). A coo body holds one `i_1 .. i_d value` line per
//! listed entry with 1-based indices; unlisted entries are zero and a repeated
//! index tuple is an error. Writers emit 17 significant digits so values
//! round-trip exactly.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use super::{checked_len, DenseTensor};
use crate::error::TensorError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TnsrLayout {
    Dense,
    Coo,
}

impl fmt::Display for TnsrLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TnsrLayout::Dense => "dense",
            TnsrLayout::Coo => "coo",
        })
    }
}

impl FromStr for TnsrLayout {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dense" => Ok(TnsrLayout::Dense),
            "coo" => Ok(TnsrLayout::Coo),
            other => Err(format!("unknown layout '{other}' (expected dense or coo)")),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> TensorError {
    TensorError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_value(tok: &str, line: usize) -> Result<f64, TensorError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number '{tok}'")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value '{tok}'")));
    }
    Ok(v)
}

pub fn read_tnsr<R: Read>(reader: R) -> Result<DenseTensor, TensorError> {
    let reader = BufReader::new(reader);
    let mut lines = reader.lines().enumerate();

    let (header_line, header) = loop {
        match lines.next() {
            None => return Err(parse_err(0, "missing 'tnsr' header")),
            Some((i, line)) => {
                let line = line?;
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                break (i + 1, trimmed.to_string());
            }
        }
    };

    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "tnsr" {
        return Err(parse_err(
            header_line,
            "header must read 'tnsr 1 <d> <n> <dense|coo>'",
        ));
    }
    if fields[1] != "1" {
        return Err(parse_err(
            header_line,
            format!("unsupported format version '{}'", fields[1]),
        ));
    }
    let order: usize = fields[2]
        .parse()
        .map_err(|_| parse_err(header_line, format!("invalid order '{}'", fields[2])))?;
    let dim: usize = fields[3]
        .parse()
        .map_err(|_| parse_err(header_line, format!("invalid dimension '{}'", fields[3])))?;
    let layout: TnsrLayout = fields[4].parse().map_err(|e| parse_err(header_line, e))?;
    if order == 0 || dim == 0 {
        return Err(parse_err(
            header_line,
            "order and dimension must be positive",
        ));
    }
    let len = checked_len(order, dim).ok_or(TensorError::TooLarge { order, dim })?;

    match layout {
        TnsrLayout::Dense => {
            let mut data = Vec::with_capacity(len);
            let mut last_line = header_line;
            for (i, line) in lines {
                let line = line?;
                last_line = i + 1;
                for tok in line.split_whitespace() {
                    if data.len() == len {
                        return Err(parse_err(
                            i + 1,
                            format!("more than {len} values in dense body"),
                        ));
                    }
                    data.push(parse_value(tok, i + 1)?);
                }
            }
            if data.len() != len {
                return Err(parse_err(
                    last_line,
                    format!("dense body has {} values, expected {len}", data.len()),
                ));
            }
            DenseTensor::from_vec(order, dim, data)
        }
        TnsrLayout::Coo => {
            let mut data = vec![0.0; len];
            let mut seen = HashSet::new();
            for (i, line) in lines {
                let line = line?;
                let lineno = i + 1;
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.is_empty() {
                    continue;
                }
                if toks.len() != order + 1 {
                    return Err(parse_err(
                        lineno,
                        format!("expected {} indices and a value", order),
                    ));
                }
                let mut flat = 0usize;
                for tok in &toks[..order] {
                    let k: usize = tok
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("invalid index '{tok}'")))?;
                    if k == 0 || k > dim {
                        return Err(parse_err(lineno, format!("index {k} outside 1..={dim}")));
                    }
                    flat = flat * dim + (k - 1);
                }
                if !seen.insert(flat) {
                    return Err(parse_err(lineno, "duplicate index tuple"));
                }
                data[flat] = parse_value(toks[order], lineno)?;
            }
            DenseTensor::from_vec(order, dim, data)
        }
    }
}

pub fn read_tnsr_file(path: impl AsRef<Path>) -> Result<DenseTensor, TensorError> {
    read_tnsr(std::fs::File::open(path)?)
}

/// Writes `tensor` in TNSR/1. Each entry of `comments` becomes a `# ...`
/// line ahead of the header.
pub fn write_tnsr<W: Write>(
    mut w: W,
    tensor: &DenseTensor,
    layout: TnsrLayout,
    comments: &[String],
) -> Result<(), TensorError> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    let (d, n) = (tensor.order(), tensor.dim());
    writeln!(w, "tnsr 1 {d} {n} {layout}")?;
    match layout {
        TnsrLayout::Dense => {
            for row in tensor.as_slice().chunks(n) {
                let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        }
        TnsrLayout::Coo => {
            let mut idx = vec![0usize; d];
            for &v in tensor.as_slice() {
                if v != 0.0 {
                    for k in &idx {
                        write!(w, "{} ", k + 1)?;
                    }
                    writeln!(w, "{v:.16e}")?;
                }
                super::increment(&mut idx, n);
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_tnsr_file(
    path: impl AsRef<Path>,
    tensor: &DenseTensor,
    layout: TnsrLayout,
    comments: &[String],
) -> Result<(), TensorError> {
    let f = std::fs::File::create(path)?;
    write_tnsr(std::io::BufWriter::new(f), tensor, layout, comments)
}
