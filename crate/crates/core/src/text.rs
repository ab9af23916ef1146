//! Line-oriented helpers for the plain-text file formats.
//!
//! Blank lines are significant only inside family files, so every reader
//! takes its lines explicitly and reports 1-based line numbers.

use std::str::FromStr;

use crate::error::{Error, Result};

/// Iterator over `(line_number, line)` starting at 1.
pub(crate) struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    offset: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            offset: 0,
        }
    }

    /// Next line including empty ones.
    pub(crate) fn next_raw(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .next()
            .map(|(i, l)| (i + 1 + self.offset, l.trim_end_matches('\r')))
    }

    /// Next line that is neither blank nor a `#` comment.
    pub(crate) fn next_content(&mut self) -> Option<(usize, &'a str)> {
        loop {
            let (n, l) = self.next_raw()?;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Some((n, t));
            }
        }
    }

    pub(crate) fn expect_content(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = self.offset;
        self.next_content()
            .ok_or_else(|| Error::parse(last, format!("unexpected end of input, expected {what}")))
    }
}

pub(crate) fn parse_fields<T: FromStr>(line_no: usize, line: &str, count: usize) -> Result<Vec<T>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != count {
        return Err(Error::parse(
            line_no,
            format!("expected {count} fields, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<T>()
                .map_err(|_| Error::parse(line_no, format!("cannot parse `{f}`")))
        })
        .collect()
}

/// Reads the `n_rows n_cols` header followed by `n_rows` rows of integers.
pub(crate) fn read_matrix<T: FromStr>(lines: &mut Lines<'_>) -> Result<(usize, usize, Vec<Vec<T>>)> {
    let (n, header) = lines.expect_content("matrix header `n_rows n_cols`")?;
    let dims: Vec<usize> = parse_fields(n, header, 2)?;
    let (rows, cols) = (dims[0], dims[1]);
    let mut out = Vec::with_capacity(rows);
    for _ in 0..rows {
        if cols == 0 {
            // A row with no entries is an empty line; accept either form.
            out.push(Vec::new());
            continue;
        }
        let (n, line) = lines.expect_content("matrix row")?;
        out.push(parse_fields(n, line, cols)?);
    }
    Ok((rows, cols, out))
}
