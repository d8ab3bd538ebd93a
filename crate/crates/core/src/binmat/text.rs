//! Plain-text grid format.
//!
//! ```text
//! # optional comment lines
//! 3 4
//! 1 1 1 0
//! 1 1 0 1
//! 1 . 1 1
//! ```
//!
//! A header line `rows cols` is followed by `rows` lines of whitespace separated
//! entries. On input `.` is read as `0`. Several matrices may follow each other in
//! one file. Blank lines and lines starting with `#` are skipped.

use super::{BinaryMatrix, IntMatrix};
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

struct Grid {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
    first_line: usize,
}

fn parse_grids(input: &str) -> Result<Vec<Grid>> {
    let mut lines =
        input.lines().enumerate().map(|(n, l)| (n + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut grids = Vec::new();
    while let Some((line, header)) = lines.next() {
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line, message: format!("expected header 'rows cols', got {header:?}") })
        };
        if dims.len() != 2 {
            return Err(Error::Parse { line, message: format!("expected header 'rows cols', got {header:?}") });
        }
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("header on line {line} declares a zero dimension")));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (n, text) = lines.next().ok_or_else(|| Error::Parse {
                line,
                message: format!("matrix declares {rows} rows but input ends after {r}"),
            })?;
            let before = entries.len();
            for tok in text.split_whitespace() {
                let value = if tok == "." {
                    0
                } else {
                    tok.parse::<u32>()
                        .map_err(|_| Error::Parse { line: n, message: format!("invalid entry {tok:?}") })?
                };
                entries.push(value);
            }
            if entries.len() - before != cols {
                return Err(Error::Parse {
                    line: n,
                    message: format!("expected {cols} entries, found {}", entries.len() - before),
                });
            }
        }
        grids.push(Grid { rows, cols, entries, first_line: line });
    }
    Ok(grids)
}

fn grid_to_binary(g: Grid) -> Result<BinaryMatrix> {
    if let Some(pos) = g.entries.iter().position(|&x| x > 1) {
        return Err(Error::Parse {
            line: g.first_line + 1 + pos / g.cols,
            message: format!("entry {} is not 0 or 1", g.entries[pos]),
        });
    }
    BinaryMatrix::from_fn(g.rows, g.cols, |i, j| g.entries[i * g.cols + j] == 1)
}

/// Parses every matrix in `input`.
pub fn parse_matrices(input: &str) -> Result<Vec<BinaryMatrix>> {
    parse_grids(input)?.into_iter().map(grid_to_binary).collect()
}

pub fn parse_int_matrices(input: &str) -> Result<Vec<IntMatrix>> {
    parse_grids(input)?
        .into_iter()
        .map(|g| IntMatrix::from_fn(g.rows, g.cols, |i, j| g.entries[i * g.cols + j]))
        .collect()
}

fn exactly_one<T>(mut all: Vec<T>) -> Result<T> {
    match all.len() {
        1 => Ok(all.pop().expect("length checked")),
        n => Err(Error::Parse { line: 1, message: format!("expected exactly one matrix, found {n}") }),
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        exactly_one(parse_matrices(s)?)
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        exactly_one(parse_int_matrices(s)?)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            let cells: Vec<&str> = (0..self.cols()).map(|j| if self.get(i, j) { "1" } else { "0" }).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            let cells: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dots_read_as_zero() {
        let m: BinaryMatrix = "# comment\n2 3\n1 . 1\n. 1 0\n".parse().unwrap();
        assert_eq!(m, BinaryMatrix::from_rows(&[[1u8, 0, 1], [0, 1, 0]]).unwrap());
        assert_eq!(m.to_string(), "2 3\n1 0 1\n0 1 0\n");
    }

    #[test]
    fn several_matrices_in_one_file() {
        let text = format!("{}\n{}", BinaryMatrix::identity(2).unwrap(), BinaryMatrix::path_loop(3).unwrap());
        let all = parse_matrices(&text).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[1], BinaryMatrix::path_loop(3).unwrap());
        assert!(text.parse::<BinaryMatrix>().is_err());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!("2 2\n1 0\n".parse::<BinaryMatrix>(), Err(Error::Parse { .. })));
        assert!(matches!("2 2\n1 0\n1 0 1\n".parse::<BinaryMatrix>(), Err(Error::Parse { line: 3, .. })));
        assert!(matches!("2 2\n1 0\n2 0\n".parse::<BinaryMatrix>(), Err(Error::Parse { line: 3, .. })));
        assert!(matches!("x 2\n".parse::<BinaryMatrix>(), Err(Error::Parse { .. })));
        assert!(matches!("0 2\n".parse::<BinaryMatrix>(), Err(Error::Dimension(_))));
        assert!("2 2\n0 2\n2 0\n".parse::<IntMatrix>().is_ok());
    }

    proptest! {
        #[test]
        fn text_roundtrip(rows in 1usize..9, cols in 1usize..70, seed in any::<u64>()) {
            let m = BinaryMatrix::from_fn(rows, cols, |i, j| {
                (seed.rotate_left((i * 7 + j) as u32 % 64) ^ (i * 31 + j) as u64) & 1 == 1
            }).unwrap();
            prop_assert_eq!(m.to_string().parse::<BinaryMatrix>().unwrap(), m);
        }
    }
}
