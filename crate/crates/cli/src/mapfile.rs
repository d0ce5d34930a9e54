//! Map description files.
//!
//! ```text
//! # comment
//! map R = rotation(1/3)
//! map A = rrot(0, 1/2, sqrt(2)/5)
//! map E = iet(3 1 4 2; 1/5, 1/3, 1/6, 3/10)
//! map F =
//!   0   | 2   | 0
//!   1/4 | 2/3 | 1/3
//! end
//! group G = A, F
//! ```

use aiet::map::MapError;
use aiet::numbers::{parse_scalar, NumberError, Scalar};
use aiet::Aiet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: MapError },
}

impl MapFileError {
    pub fn is_syntax(&self) -> bool {
        match self {
            MapFileError::Syntax { .. } => true,
            MapFileError::Invalid { source, .. } => matches!(source, MapError::Parse { .. }),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct MapFile {
    pub maps: Vec<(String, Aiet)>,
    pub groups: Vec<(String, Vec<String>)>,
}

impl MapFile {
    pub fn map(&self, name: &str) -> Option<&Aiet> {
        self.maps.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn group(&self, name: &str) -> Option<&[String]> {
        self.groups.iter().find(|(n, _)| n == name).map(|(_, g)| g.as_slice())
    }

    pub fn map_names(&self) -> Vec<String> {
        self.maps.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn group_names(&self) -> Vec<String> {
        self.groups.iter().map(|(n, _)| n.clone()).collect()
    }

    fn taken(&self, name: &str) -> bool {
        self.map(name).is_some() || self.group(name).is_some()
    }
}

/// A substring of a line with its 1-based starting column.
#[derive(Clone, Copy)]
struct Span<'a> {
    text: &'a str,
    column: usize,
}

impl<'a> Span<'a> {
    fn trim(self) -> Span<'a> {
        let lead = self.text.len() - self.text.trim_start().len();
        Span { text: self.text.trim(), column: self.column + self.text[..lead].chars().count() }
    }

    fn slice(self, from: usize, to: usize) -> Span<'a> {
        Span { text: &self.text[from..to], column: self.column + self.text[..from].chars().count() }
    }

    /// Split at `sep` outside parentheses.
    fn split_top(self, sep: char) -> Vec<Span<'a>> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, c) in self.text.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                c if c == sep && depth == 0 => {
                    out.push(self.slice(start, i).trim());
                    start = i + c.len_utf8();
                }
                _ => {}
            }
        }
        out.push(self.slice(start, self.text.len()).trim());
        out
    }
}

struct Ctx<'f> {
    file: &'f MapFile,
    line: usize,
}

impl Ctx<'_> {
    fn syntax(&self, column: usize, message: impl Into<String>) -> MapFileError {
        MapFileError::Syntax { line: self.line, column, message: message.into() }
    }

    fn invalid(&self, source: MapError) -> MapFileError {
        MapFileError::Invalid { line: self.line, source }
    }

    fn scalar(&self, s: Span) -> Result<Scalar, MapFileError> {
        parse_scalar(s.text).map_err(|e| match e {
            NumberError::Parse { message, column } => self.syntax(s.column + column - 1, message),
            other => self.syntax(s.column, other.to_string()),
        })
    }

    fn integer(&self, s: Span) -> Result<i64, MapFileError> {
        s.text.parse().map_err(|_| self.syntax(s.column, format!("expected an integer, found `{}`", s.text)))
    }

    fn map_ref(&self, s: Span) -> Result<Aiet, MapFileError> {
        self.file.map(s.text).cloned().ok_or_else(|| {
            self.syntax(s.column, format!("unknown map `{}` (defined so far: {})", s.text, self.file.map_names().join(", ")))
        })
    }

    fn arity(&self, name: Span, args: &[Span], n: usize) -> Result<(), MapFileError> {
        if args.len() != n {
            return Err(self.syntax(name.column, format!("`{}` takes {n} argument(s), found {}", name.text, args.len())));
        }
        Ok(())
    }

    fn expr(&self, e: Span) -> Result<Aiet, MapFileError> {
        let Some(open) = e.text.find('(') else {
            return self.map_ref(e);
        };
        if !e.text.ends_with(')') {
            return Err(self.syntax(e.column + e.text.chars().count(), "expected `)` at end of expression"));
        }
        let name = e.slice(0, open).trim();
        let inner = e.slice(open + 1, e.text.len() - 1);
        if name.text == "iet" {
            return self.iet(name, inner);
        }
        let args: Vec<Span> = if inner.text.trim().is_empty() { Vec::new() } else { inner.split_top(',') };
        let g = guard();
        match name.text {
            "identity" => {
                self.arity(name, &args, 0)?;
                Ok(Aiet::identity())
            }
            "rotation" => {
                self.arity(name, &args, 1)?;
                Aiet::rotation(&self.scalar(args[0])?).map_err(|e| self.invalid(e))
            }
            "rrot" | "restricted_rotation" => {
                self.arity(name, &args, 3)?;
                let (a, b, d) = (self.scalar(args[0])?, self.scalar(args[1])?, self.scalar(args[2])?);
                Aiet::restricted_rotation(&a, &b, &d).map_err(|e| self.invalid(e))
            }
            "bmap" | "two_slope" => {
                self.arity(name, &args, 2)?;
                Aiet::two_slope_map(&self.scalar(args[0])?, &self.scalar(args[1])?).map_err(|e| self.invalid(e))
            }
            "compose" => {
                if args.is_empty() {
                    return Err(self.syntax(name.column, "`compose` needs at least one map"));
                }
                let maps = args.iter().map(|a| self.expr(*a)).collect::<Result<Vec<_>, _>>()?;
                let mut acc = Aiet::identity();
                for m in maps.iter().rev() {
                    acc = m.compose_guarded(&acc, g).map_err(|e| self.invalid(e))?;
                }
                Ok(acc)
            }
            "inverse" => {
                self.arity(name, &args, 1)?;
                Ok(self.expr(args[0])?.inverse())
            }
            "power" => {
                self.arity(name, &args, 2)?;
                let f = self.expr(args[0])?;
                f.power_guarded(self.integer(args[1])?, g).map_err(|e| self.invalid(e))
            }
            "conj" => {
                self.arity(name, &args, 2)?;
                let (f, h) = (self.expr(args[0])?, self.expr(args[1])?);
                f.conjugate_guarded(&h, g).map_err(|e| self.invalid(e))
            }
            "embed" => {
                self.arity(name, &args, 3)?;
                let f = self.expr(args[0])?;
                f.embed(&self.scalar(args[1])?, &self.scalar(args[2])?).map_err(|e| self.invalid(e))
            }
            other => Err(self.syntax(name.column, format!("unknown constructor `{other}`"))),
        }
    }

    fn iet(&self, name: Span, inner: Span) -> Result<Aiet, MapFileError> {
        let parts = inner.split_top(';');
        if parts.len() != 2 {
            return Err(self.syntax(name.column, "expected `iet(permutation; lengths)`"));
        }
        let mut perm = Vec::new();
        let mut offset = 0;
        for tok in parts[0].text.split(|c: char| c.is_whitespace() || c == ',') {
            let at = parts[0].text[offset..].find(tok).map_or(offset, |i| offset + i);
            offset = at + tok.len();
            if tok.is_empty() {
                continue;
            }
            let span = parts[0].slice(at, at + tok.len());
            perm.push(
                tok.parse::<usize>()
                    .map_err(|_| self.syntax(span.column, format!("expected a positive integer, found `{tok}`")))?,
            );
        }
        let lengths = parts[1].split_top(',').into_iter().map(|s| self.scalar(s)).collect::<Result<Vec<_>, _>>()?;
        Aiet::iet_from_lengths(&perm, &lengths).map_err(|e| self.invalid(e))
    }
}

fn guard() -> usize {
    aiet::map::DEFAULT_PIECE_GUARD
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// `keyword NAME = rest`, returning the name and the right-hand side.
fn definition<'a>(ctx: &Ctx, line: Span<'a>, keyword: &str) -> Result<(String, Span<'a>), MapFileError> {
    let body = line.slice(keyword.len(), line.text.len());
    let Some(eq) = body.text.find('=') else {
        return Err(ctx.syntax(line.column, format!("expected `{keyword} NAME = ...`")));
    };
    let name = body.slice(0, eq).trim();
    if !valid_name(name.text) {
        return Err(ctx.syntax(name.column, format!("invalid name `{}`", name.text)));
    }
    if ctx.file.taken(name.text) {
        return Err(ctx.syntax(name.column, format!("`{}` is already defined", name.text)));
    }
    Ok((name.text.to_string(), body.slice(eq + 1, body.text.len()).trim()))
}

pub fn parse_map_file(text: &str) -> Result<MapFile, MapFileError> {
    let mut file = MapFile::default();
    // (name, first line, piece lines) of an open piece block
    let mut block: Option<(String, usize, String)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let line = Span { text: content, column: 1 }.trim();
        let ctx = Ctx { file: &file, line: idx + 1 };
        if let Some((name, start, body)) = block.as_mut() {
            if line.text == "end" {
                let pieces = aiet::map::parse_pieces(body).map_err(|e| match e {
                    MapError::Parse { line, message } => {
                        MapFileError::Syntax { line: *start + line, column: 1, message }
                    }
                    other => MapFileError::Invalid { line: *start, source: other },
                })?;
                let f = Aiet::from_pieces(pieces).map_err(|e| MapFileError::Invalid { line: *start, source: e })?;
                file.maps.push((std::mem::take(name), f));
                block = None;
            } else {
                body.push_str(content);
                body.push('\n');
            }
            continue;
        }
        if line.text.is_empty() {
            continue;
        }
        if line.text.starts_with("map ") || line.text.starts_with("map\t") {
            let (name, rhs) = definition(&ctx, line, "map")?;
            if rhs.text.is_empty() {
                block = Some((name, idx + 1, String::new()));
            } else {
                let f = ctx.expr(rhs)?;
                file.maps.push((name, f));
            }
        } else if line.text.starts_with("group ") || line.text.starts_with("group\t") {
            let (name, rhs) = definition(&ctx, line, "group")?;
            let mut members = Vec::new();
            for m in rhs.split_top(',') {
                if file.map(m.text).is_none() {
                    return Err(ctx.syntax(m.column, format!("unknown map `{}` in group", m.text)));
                }
                members.push(m.text.to_string());
            }
            file.groups.push((name, members));
        } else {
            return Err(ctx.syntax(line.column, "expected `map NAME = ...` or `group NAME = ...`"));
        }
    }
    if let Some((name, start, _)) = block {
        return Err(MapFileError::Syntax { line: start, column: 1, message: format!("piece block for `{name}` has no `end`") });
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piece_block_errors_point_at_the_line() {
        let text = "map A = rotation(1/2)\nmap F =\n0 | 2 | 0\n1/4 | 2/3 | 1/3x\nend\n";
        match parse_map_file(text) {
            Err(MapFileError::Syntax { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scalar_errors_carry_columns() {
        match parse_map_file("map R = rotation(1/0)") {
            Err(MapFileError::Syntax { line: 1, column, .. }) => assert!((18..=21).contains(&column), "{column}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn names_are_unique_and_groups_resolve() {
        assert!(parse_map_file("map R = rotation(1/2)\nmap R = identity()").is_err());
        assert!(parse_map_file("group G = R").is_err());
        let f = parse_map_file("map R = rotation(1/2)\nmap P = power(R, -3)\ngroup G = R, P").unwrap();
        assert_eq!(f.map("P"), f.map("R"));
        assert_eq!(f.group("G").unwrap(), ["R", "P"]);
    }
}
