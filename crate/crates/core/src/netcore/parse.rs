//! Line-oriented reaction DSL.
//!
//! ```text
//! # comment
//! species A B
//! 2A -> B @ 1.0
//! A <-> B @ 1.0 0.5
//! 0 -> A @ 3        # `0` or `∅` is the empty complex
//! ```

use super::{Complex, NetworkBuilder, ReactionNetwork, SpeciesTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    Number(String),
    Plus,
    Arrow,
    BiArrow,
    At,
    Empty,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let tok = match c {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '@' => {
                i += 1;
                Tok::At
            }
            '∅' => {
                i += 1;
                Tok::Empty
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 2;
                Tok::Arrow
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 3;
                Tok::BiArrow
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            c if c.is_ascii_digit() || c == '.' || c == '-' => {
                // A run of digits directly followed by a letter is a
                // coefficient (`2A`); anything else numeric is a rate literal.
                let start = i;
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let all_digits = j > start;
                if all_digits && !continues_number(&chars, j) {
                    i = j;
                    let s: String = chars[start..j].iter().collect();
                    match s.parse::<u32>() {
                        Ok(v) => Tok::Int(v),
                        Err(_) => Tok::Number(s),
                    }
                } else {
                    j = start;
                    while j < chars.len() && is_number_char(chars[j]) {
                        // exponent sign
                        if (chars[j] == '-' || chars[j] == '+') && j > start {
                            let prev = chars[j - 1];
                            if prev != 'e' && prev != 'E' {
                                break;
                            }
                        }
                        j += 1;
                    }
                    i = j;
                    Tok::Number(chars[start..j].iter().collect())
                }
            }
            other => return Err(syntax(line, column, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, column });
    }
    Ok(out)
}

/// Whether the digits ending before `j` continue as a decimal literal
/// (`1.5`, `2e-3`) rather than being a coefficient (`2A`, `2Ethanol`).
fn continues_number(chars: &[char], j: usize) -> bool {
    match chars.get(j) {
        Some('.') => true,
        Some('e') | Some('E') => match chars.get(j + 1) {
            Some(c) if c.is_ascii_digit() => true,
            Some('-') | Some('+') => chars.get(j + 2).is_some_and(|c| c.is_ascii_digit()),
            _ => false,
        },
        _ => false,
    }
}

fn is_number_char(c: char) -> bool {
    c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '-' | '+')
}

struct LineParser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

#[derive(Debug)]
struct RawComplex {
    terms: Vec<(String, u32, usize)>,
}

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn column(&self) -> usize {
        self.peek().map_or(self.end_column, |t| t.column)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        syntax(self.line, self.column(), message)
    }

    fn complex(&mut self) -> Result<RawComplex> {
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Empty) | Some(Tok::Int(0)) => {
                // `0` alone is the empty complex, `0A` is not allowed
                let zero_at = self.pos;
                self.pos += 1;
                if let Some(Token { tok: Tok::Ident(_), .. }) = self.peek() {
                    self.pos = zero_at;
                    return Err(self.err("coefficient must be positive"));
                }
                return Ok(RawComplex { terms: Vec::new() });
            }
            _ => {}
        }
        let mut terms = Vec::new();
        loop {
            let mut coeff = 1;
            if let Some(Token { tok: Tok::Int(v), .. }) = self.peek() {
                coeff = *v;
                self.pos += 1;
            }
            match self.peek() {
                Some(Token { tok: Tok::Ident(name), column }) => {
                    terms.push((name.clone(), coeff, *column));
                    self.pos += 1;
                }
                _ => return Err(self.err("expected species name")),
            }
            if let Some(Token { tok: Tok::Plus, .. }) = self.peek() {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(RawComplex { terms })
    }

    fn rate(&mut self) -> Result<f64> {
        let (text, column) = match self.peek() {
            Some(Token { tok: Tok::Number(s), column }) => (s.clone(), *column),
            Some(Token { tok: Tok::Int(v), column }) => (v.to_string(), *column),
            _ => return Err(self.err("expected rate constant")),
        };
        self.pos += 1;
        let rate: f64 = text
            .parse()
            .map_err(|_| syntax(self.line, column, format!("invalid number `{text}`")))?;
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::NonPositiveRate(rate));
        }
        Ok(rate)
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.err("unexpected trailing input")),
        }
    }
}

enum Line {
    Species(Vec<(String, usize)>),
    Reaction {
        lhs: RawComplex,
        rhs: RawComplex,
        rates: Vec<f64>,
    },
}

fn parse_line(text: &str, line: usize) -> Result<Option<Line>> {
    let toks = tokenize(text, line)?;
    if toks.is_empty() {
        return Ok(None);
    }
    let mut p = LineParser {
        toks: &toks,
        pos: 0,
        line,
        end_column: text.chars().count() + 1,
    };
    if let Tok::Ident(kw) = &toks[0].tok {
        let is_decl = kw == "species"
            && toks.len() > 1
            && !matches!(toks[1].tok, Tok::Plus | Tok::Arrow | Tok::BiArrow);
        if is_decl {
            let mut names = Vec::new();
            for t in &toks[1..] {
                match &t.tok {
                    Tok::Ident(name) => names.push((name.clone(), t.column)),
                    _ => return Err(syntax(line, t.column, "expected species name")),
                }
            }
            return Ok(Some(Line::Species(names)));
        }
    }
    let lhs = p.complex()?;
    let reversible = match p.peek().map(|t| &t.tok) {
        Some(Tok::Arrow) => false,
        Some(Tok::BiArrow) => true,
        _ => return Err(p.err("expected `->` or `<->`")),
    };
    p.pos += 1;
    let rhs = p.complex()?;
    match p.peek().map(|t| &t.tok) {
        Some(Tok::At) => p.pos += 1,
        _ => return Err(p.err("expected `@` before rate")),
    }
    let mut rates = vec![p.rate()?];
    if reversible {
        rates.push(p.rate()?);
    }
    p.expect_end()?;
    Ok(Some(Line::Reaction { lhs, rhs, rates }))
}

/// Parses the reaction DSL into a network.
///
/// Species are ordered by the `species` header when one is present (every
/// reaction must then use declared names), otherwise by first appearance.
/// Complexes are deduplicated in first-appearance order and `<->` expands to
/// the forward transition followed by the reverse one.
pub fn parse_network(text: &str) -> Result<ReactionNetwork> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(l) = parse_line(raw, i + 1)? {
            lines.push((i + 1, l));
        }
    }

    let mut species = SpeciesTable::new();
    let mut declared = false;
    for (line, l) in &lines {
        if let Line::Species(names) = l {
            declared = true;
            for (name, column) in names {
                if species.get(name).is_some() {
                    return Err(syntax(*line, *column, format!("species `{name}` declared twice")));
                }
                species.insert(name.clone());
            }
        }
    }
    if !declared {
        for (_, l) in &lines {
            if let Line::Reaction { lhs, rhs, .. } = l {
                for (name, _, _) in lhs.terms.iter().chain(&rhs.terms) {
                    species.insert(name.clone());
                }
            }
        }
    }

    let to_complex = |raw: &RawComplex, line: usize| -> Result<Complex> {
        let mut c = Complex::zero(species.len());
        for (name, coeff, column) in &raw.terms {
            let i = species.get(name).ok_or_else(|| Error::UnknownSpecies {
                name: name.clone(),
                line,
                column: *column,
            })?;
            c.0[i] += coeff;
        }
        Ok(c)
    };

    let mut builder = NetworkBuilder::new(species.clone());
    let mut any = false;
    for (line, l) in &lines {
        if let Line::Reaction { lhs, rhs, rates } = l {
            any = true;
            let a = to_complex(lhs, *line)?;
            let b = to_complex(rhs, *line)?;
            builder.add(a.clone(), b.clone(), rates[0])?;
            if let Some(&back) = rates.get(1) {
                builder.add(b, a, back)?;
            }
        }
    }
    if !any {
        return Err(Error::NoReactions);
    }
    Ok(builder.finish())
}
