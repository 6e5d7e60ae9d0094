//! Matrix Market reader and writer for dense data.
//!
//! Reads `array` and `coordinate` layouts (coordinate data is densified) with
//! `real`, `integer` or `complex` fields and `general`, `symmetric`,
//! `skew-symmetric` or `hermitian` storage. Writes the `array` layout with
//! 17 significant digits, which round-trips every double exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::complex::ComplexScalar;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

/// A parsed file: the matrix and the field it was stored with.
#[derive(Debug, Clone)]
pub struct MtxData {
    pub matrix: DenseMatrix,
    pub field: Field,
}

struct Parser<'a> {
    source: &'a str,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Parser<'a> {
    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse { path: self.source.to_string(), line, msg: msg.into() }
    }

    /// Next non-blank, non-comment line with its 1-based number.
    fn next_data(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.lines.by_ref() {
            let t = line.trim();
            if !t.is_empty() && !t.starts_with('%') {
                return Some((i + 1, t));
            }
        }
        None
    }
}

fn parse_num<T: std::str::FromStr>(p: &Parser<'_>, line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| p.err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| p.err(line, format!("invalid {what} '{tok}'")))
}

/// Parses Matrix Market text; `source` names the input in error messages.
pub fn parse_matrix_market(text: &str, source: &str) -> Result<MtxData> {
    let mut p = Parser { source, lines: text.lines().enumerate() };
    let (_, header) = p.lines.next().ok_or_else(|| p.err(1, "empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(p.err(1, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'"));
    }
    let layout = match tokens[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(p.err(1, format!("unsupported layout '{other}'"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(p.err(1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(p.err(1, format!("unsupported symmetry '{other}'"))),
    };
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(p.err(1, "hermitian storage needs the complex field"));
    }

    let (size_line, sizes) = p.next_data().ok_or_else(|| p.err(1, "missing size line"))?;
    let mut it = sizes.split_whitespace();
    let rows: usize = parse_num(&p, size_line, it.next(), "row count")?;
    let cols: usize = parse_num(&p, size_line, it.next(), "column count")?;
    if rows == 0 || cols == 0 {
        return Err(p.err(size_line, "dimensions must be positive"));
    }
    if symmetry != Symmetry::General && rows != cols {
        return Err(p.err(size_line, "symmetric storage needs a square matrix"));
    }
    let nnz = match layout {
        Layout::Coordinate => Some(parse_num::<usize>(&p, size_line, it.next(), "entry count")?),
        Layout::Array => None,
    };
    if it.next().is_some() {
        return Err(p.err(size_line, "trailing tokens on size line"));
    }

    let read_value = |p: &Parser<'_>, line: usize, it: &mut std::str::SplitWhitespace<'_>| -> Result<ComplexScalar> {
        let re: f64 = parse_num(p, line, it.next(), "value")?;
        let im: f64 = if field == Field::Complex { parse_num(p, line, it.next(), "imaginary part")? } else { 0.0 };
        if it.next().is_some() {
            return Err(p.err(line, "trailing tokens"));
        }
        Ok(ComplexScalar::new(re, im))
    };

    let mut m = DenseMatrix::zeros(rows, cols);
    let mirror = |m: &mut DenseMatrix, i: usize, j: usize, v: ComplexScalar| {
        m[(i, j)] = v;
        if i != j {
            m[(j, i)] = match symmetry {
                Symmetry::General => return,
                Symmetry::Symmetric => v,
                Symmetry::SkewSymmetric => -v,
                Symmetry::Hermitian => v.conj(),
            };
        }
    };

    match layout {
        Layout::Array => {
            // Column-major; symmetric variants store the lower triangle only.
            let positions: Vec<(usize, usize)> = (0..cols)
                .flat_map(|j| {
                    let start = match symmetry {
                        Symmetry::General => 0,
                        Symmetry::Symmetric | Symmetry::Hermitian => j,
                        Symmetry::SkewSymmetric => j + 1,
                    };
                    (start..rows).map(move |i| (i, j))
                })
                .collect();
            for &(i, j) in &positions {
                let (line, text) = p
                    .next_data()
                    .ok_or_else(|| p.err(size_line, format!("expected {} values, file ended early", positions.len())))?;
                let v = read_value(&p, line, &mut text.split_whitespace())?;
                mirror(&mut m, i, j, v);
            }
        }
        Layout::Coordinate => {
            let nnz = nnz.expect("coordinate layout has a count");
            for _ in 0..nnz {
                let (line, text) =
                    p.next_data().ok_or_else(|| p.err(size_line, format!("expected {nnz} entries, file ended early")))?;
                let mut it = text.split_whitespace();
                let i: usize = parse_num(&p, line, it.next(), "row index")?;
                let j: usize = parse_num(&p, line, it.next(), "column index")?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(p.err(line, format!("index ({i}, {j}) outside {rows}x{cols}")));
                }
                let v = read_value(&p, line, &mut it)?;
                mirror(&mut m, i - 1, j - 1, v);
            }
        }
    }
    if let Some((line, _)) = p.next_data() {
        return Err(p.err(line, "unexpected data after the last entry"));
    }
    Ok(MtxData { matrix: m, field })
}

pub fn load_matrix_market(path: &Path) -> Result<MtxData> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix_market(&text, &path.display().to_string())
}

/// Loads an `n x 1` (or `1 x n`) file as a vector.
pub fn load_vector(path: &Path) -> Result<DenseVector> {
    let data = load_matrix_market(path)?;
    let m = data.matrix;
    if m.cols() == 1 {
        Ok(m.column(0))
    } else if m.rows() == 1 {
        DenseVector::new(m.row(0).to_vec())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{}: expected a vector, found a {}x{} matrix",
            path.display(),
            m.rows(),
            m.cols()
        )))
    }
}

/// Array-layout text; `real` when every imaginary part is zero, else `complex`.
pub fn format_matrix_market(m: &DenseMatrix) -> String {
    let real = m.is_real();
    let mut out = String::new();
    let field = if real { "real" } else { "complex" };
    writeln!(out, "%%MatrixMarket matrix array {field} general").unwrap();
    writeln!(out, "{} {}", m.rows(), m.cols()).unwrap();
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let z = m[(i, j)];
            if real {
                writeln!(out, "{:.16e}", z.re).unwrap();
            } else {
                writeln!(out, "{:.16e} {:.16e}", z.re, z.im).unwrap();
            }
        }
    }
    out
}

pub fn save_matrix_market(m: &DenseMatrix, path: &Path) -> Result<()> {
    fs::write(path, format_matrix_market(m)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn save_vector(v: &DenseVector, path: &Path) -> Result<()> {
    let m = DenseMatrix::new(v.dim(), 1, v.as_slice().to_vec())?;
    save_matrix_market(&m, path)
}
