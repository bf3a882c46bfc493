//! The input file grammar: `lattice r`, `r` Gram rows, an optional `cone`
//! row, then `gen NAME` blocks of `r` rows each. `#` starts a comment.

use std::fmt;

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use salemlat_core::{ConeReference, GeneratorSet, IntMatrix, Lattice};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InputDocument {
    pub lattice: Lattice,
    pub cone: Option<Vec<BigInt>>,
    pub generators: Vec<(String, IntMatrix)>,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn lex(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &body[s..pos],
                            column: body[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect()
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn integer(line: &Line, tok: &Token) -> Result<BigInt, ParseError> {
    let digits = tok.text.strip_prefix(['+', '-']).unwrap_or(tok.text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line.number, tok.column, format!("expected an integer, found {:?}", tok.text)));
    }
    let text = tok.text.strip_prefix('+').unwrap_or(tok.text);
    text.parse()
        .map_err(|_| err(line.number, tok.column, format!("expected an integer, found {:?}", tok.text)))
}

fn int_row(line: &Line, width: usize, what: &str) -> Result<Vec<BigInt>, ParseError> {
    if line.tokens.len() != width {
        let column = line.tokens.get(width).map_or(line.tokens[0].column, |t| t.column);
        return Err(err(
            line.number,
            column,
            format!("dimension mismatch: {what} row has {} entries, expected {width}", line.tokens.len()),
        ));
    }
    line.tokens.iter().map(|t| integer(line, t)).collect()
}

fn valid_name(n: &str) -> bool {
    let mut chars = n.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub fn parse_input(bytes: &[u8]) -> Result<InputDocument, ParseError> {
    let src = std::str::from_utf8(bytes).map_err(|e| {
        let upto = &bytes[..e.valid_up_to()];
        let line = upto.iter().filter(|&&b| b == b'\n').count() + 1;
        err(line, 1, "input is not valid UTF-8")
    })?;
    let lines = lex(src);
    let mut it = lines.iter().peekable();

    let head = it.next().ok_or_else(|| err(1, 1, "empty input: expected `lattice r`"))?;
    if head.tokens[0].text != "lattice" || head.tokens.len() != 2 {
        return Err(err(head.number, head.tokens[0].column, "expected `lattice r`"));
    }
    let r: usize = head.tokens[1]
        .text
        .parse()
        .ok()
        .filter(|&r| r >= 1)
        .ok_or_else(|| err(head.number, head.tokens[1].column, "lattice rank must be a positive integer"))?;

    let mut rows = Vec::with_capacity(r);
    let mut row_lines = Vec::with_capacity(r);
    for k in 0..r {
        let line = it
            .next()
            .ok_or_else(|| err(head.number, 1, format!("expected {r} Gram rows, found {k}")))?;
        rows.push(int_row(line, r, "Gram")?);
        row_lines.push(line);
    }
    for i in 0..r {
        for j in i + 1..r {
            if rows[i][j] != rows[j][i] {
                let line = row_lines[i];
                return Err(err(
                    line.number,
                    line.tokens[j].column,
                    format!(
                        "Gram matrix is not symmetric: entry ({},{}) = {} but ({},{}) = {}",
                        i + 1,
                        j + 1,
                        rows[i][j],
                        j + 1,
                        i + 1,
                        rows[j][i]
                    ),
                ));
            }
        }
    }
    let lattice = Lattice::new(IntMatrix::from_rows(rows)).map_err(|e| err(head.number, 1, e.to_string()))?;

    let mut cone = None;
    if let Some(line) = it.peek() {
        if line.tokens[0].text == "cone" {
            let line = it.next().expect("peeked");
            let rest = Line {
                number: line.number,
                tokens: line.tokens[1..]
                    .iter()
                    .map(|t| Token {
                        text: t.text,
                        column: t.column,
                    })
                    .collect(),
            };
            if rest.tokens.is_empty() {
                return Err(err(line.number, line.tokens[0].column, format!("cone needs {r} integers")));
            }
            cone = Some(int_row(&rest, r, "cone")?);
        }
    }

    let mut generators: Vec<(String, IntMatrix)> = Vec::new();
    while let Some(line) = it.next() {
        let kw = &line.tokens[0];
        if kw.text != "gen" {
            return Err(err(line.number, kw.column, format!("expected `gen NAME`, found {:?}", kw.text)));
        }
        let Some(name) = line.tokens.get(1).filter(|_| line.tokens.len() == 2) else {
            return Err(err(line.number, kw.column, "expected `gen NAME`"));
        };
        if !valid_name(name.text) {
            return Err(err(line.number, name.column, format!("invalid generator name {:?}", name.text)));
        }
        if generators.iter().any(|(n, _)| n == name.text) {
            return Err(err(
                line.number,
                name.column,
                format!("duplicate generator name {:?}", name.text),
            ));
        }
        let mut m = Vec::with_capacity(r);
        for k in 0..r {
            let row = it.next().ok_or_else(|| {
                err(line.number, kw.column, format!("generator {} needs {r} rows, found {k}", name.text))
            })?;
            if row.tokens[0].text == "gen" {
                return Err(err(
                    row.number,
                    row.tokens[0].column,
                    format!("generator {} needs {r} rows, found {k}", name.text),
                ));
            }
            m.push(int_row(row, r, "matrix")?);
        }
        generators.push((name.text.to_string(), IntMatrix::from_rows(m)));
    }
    Ok(InputDocument {
        lattice,
        cone,
        generators,
    })
}

fn row_text(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

impl InputDocument {
    /// Canonical text: single spaces, no comments, one row per line.
    pub fn to_text(&self) -> String {
        let r = self.lattice.rank();
        let mut s = format!("lattice {r}\n");
        for row in self.lattice.gram().row_vecs() {
            s.push_str(&row_text(&row));
            s.push('\n');
        }
        if let Some(c) = &self.cone {
            s.push_str(&format!("cone {}\n", row_text(c)));
        }
        for (name, m) in &self.generators {
            s.push_str(&format!("gen {name}\n"));
            for row in m.row_vecs() {
                s.push_str(&row_text(&row));
                s.push('\n');
            }
        }
        s
    }

    pub fn cone_reference(&self) -> salemlat_core::error::Result<Option<ConeReference>> {
        self.cone
            .as_ref()
            .map(|v| ConeReference::new(&self.lattice, v.clone()))
            .transpose()
    }

    pub fn generator_set(&self) -> salemlat_core::error::Result<GeneratorSet> {
        GeneratorSet::new(&self.lattice, self.cone_reference()?, self.generators.clone())
    }

    pub fn generator(&self, name: &str) -> Option<&IntMatrix> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

/// Hex sha256 of the raw input bytes.
pub fn content_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
