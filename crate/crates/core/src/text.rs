//! Line-oriented text input shared by the correspondence, lattice and algebra formats.

use std::fmt;

/// A malformed input file, with the 1-based line where the problem was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Iterates over significant lines: trimmed, skipping blanks and `#` comments.
pub struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    pub fn new(src: &'a str) -> Self {
        Lines {
            inner: src.lines().enumerate(),
            last: 0,
        }
    }

    /// Line number of the most recently returned line (0 before any).
    pub fn line_no(&self) -> usize {
        self.last
    }

    pub fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                self.last = i + 1;
                return Some((i + 1, line));
            }
        }
        None
    }

    pub fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let after = self.last;
        self.next_line()
            .ok_or_else(|| ParseError::new(after + 1, format!("unexpected end of input, expected {what}")))
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.last, message)
    }
}

/// Splits a header like `corr 2 3` into its keyword and numeric fields.
pub fn parse_header(line_no: usize, line: &str, keyword: &str, fields: usize) -> Result<Vec<usize>, ParseError> {
    let mut parts = line.split_whitespace();
    match parts.next() {
        Some(k) if k == keyword => {}
        other => {
            return Err(ParseError::new(
                line_no,
                format!("expected `{keyword}`, found `{}`", other.unwrap_or("")),
            ))
        }
    }
    let nums: Vec<&str> = parts.collect();
    if nums.len() != fields {
        return Err(ParseError::new(
            line_no,
            format!("`{keyword}` takes {fields} numeric field(s), found {}", nums.len()),
        ));
    }
    nums.iter()
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| ParseError::new(line_no, format!("`{s}` is not a non-negative integer")))
        })
        .collect()
}
