use std::fmt;

use crate::numbers::{parse_scalar, NumberError};

use super::{Aiet, MapError, Piece};

/// Parse one piece per line, `left | slope | intercept`. Blank lines and
/// lines starting with `#` are skipped. Line numbers in errors are 1-based
/// relative to `text`.
pub fn parse_pieces(text: &str) -> Result<Vec<Piece>, MapError> {
    let mut pieces = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        pieces.push(parse_piece_line(line).map_err(|message| MapError::Parse { line: idx + 1, message })?);
    }
    Ok(pieces)
}

pub(crate) fn parse_piece_line(line: &str) -> Result<Piece, String> {
    let fields: Vec<&str> = line.split('|').collect();
    if fields.len() != 3 {
        return Err(format!("expected `left | slope | intercept`, found {} field(s)", fields.len()));
    }
    let mut vals = Vec::with_capacity(3);
    let mut offset = 0;
    for f in &fields {
        vals.push(parse_scalar(f).map_err(|e| match e {
            NumberError::Parse { message, column } => {
                format!("column {}: {message}", offset + column)
            }
            other => other.to_string(),
        })?);
        offset += f.len() + 1;
    }
    let intercept = vals.pop().expect("three fields");
    let slope = vals.pop().expect("three fields");
    let left = vals.pop().expect("three fields");
    Ok(Piece::new(left, slope, intercept))
}

impl Aiet {
    /// Parse the piece-per-line text format and validate.
    pub fn from_text(text: &str) -> Result<Aiet, MapError> {
        Aiet::from_pieces(parse_pieces(text)?)
    }
}

impl fmt::Display for Aiet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} | {} | {}", p.left, p.slope, p.intercept)?;
        }
        Ok(())
    }
}
