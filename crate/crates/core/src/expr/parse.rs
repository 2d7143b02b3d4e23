use super::{BinOp, Func, ScalarExpr};
use std::f64::consts::E;
use thiserror::Error;

/// Parse failure with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

impl SyntaxError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    X,
    Y,
    Euler,
    Func(Func),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    AbsOpen,
    AbsClose,
    Frac,
    Le,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dialect {
    Ascii,
    Latex,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex_number(
    bytes: &[u8],
    start: usize,
    allow_exponent: bool,
) -> Result<(f64, usize), SyntaxError> {
    let mut i = start;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    if allow_exponent && i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    let text = std::str::from_utf8(&bytes[start..i]).expect("ascii slice");
    if text == "." {
        return Err(SyntaxError::new(start, "malformed number"));
    }
    let v = text
        .parse::<f64>()
        .map_err(|_| SyntaxError::new(start, format!("malformed number '{text}'")))?;
    Ok((v, i))
}

fn lex_ascii(text: &str) -> Result<Lexed, SyntaxError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' | b'.' => {
                let (v, next) = lex_number(bytes, i, true)?;
                i = next;
                toks.push((Tok::Num(v), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "x" => Tok::X,
                    "y" => Tok::Y,
                    _ => match Func::from_name(word) {
                        Some(f) => Tok::Func(f),
                        None => {
                            return Err(SyntaxError::new(
                                start,
                                format!("unknown identifier '{word}'"),
                            ))
                        }
                    },
                };
                toks.push((tok, start));
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(SyntaxError::new(i, format!("unexpected character '{ch}'")));
            }
        };
        i += 1;
        toks.push((tok, start));
    }
    Ok(Lexed {
        toks,
        end: bytes.len(),
    })
}

fn lex_latex(text: &str) -> Result<Lexed, SyntaxError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let (v, next) = lex_number(bytes, i, false)?;
                i = next;
                toks.push((Tok::Num(v), start));
            }
            b'\\' => {
                i += 1;
                let name_start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let name = &text[name_start..i];
                let tok = match name {
                    "" => {
                        // control symbols such as "\ " or "\,"
                        if i < bytes.len() {
                            i += 1;
                        }
                        continue;
                    }
                    "left" | "right" => {
                        let open = name == "left";
                        let Some(&delim) = bytes.get(i) else {
                            return Err(SyntaxError::new(
                                i,
                                format!("missing delimiter after \\{name}"),
                            ));
                        };
                        i += 1;
                        match (delim, open) {
                            (b'(', true) => Tok::LParen,
                            (b')', false) => Tok::RParen,
                            (b'|', true) => Tok::AbsOpen,
                            (b'|', false) => Tok::AbsClose,
                            _ => {
                                return Err(SyntaxError::new(
                                    i - 1,
                                    format!("unsupported delimiter after \\{name}"),
                                ))
                            }
                        }
                    }
                    "cdot" | "times" => Tok::Star,
                    "frac" => Tok::Frac,
                    "le" | "leq" => Tok::Le,
                    "exp" => Tok::Func(Func::Exp),
                    "ln" => Tok::Func(Func::Ln),
                    "sin" => Tok::Func(Func::Sin),
                    "cos" => Tok::Func(Func::Cos),
                    _ => {
                        return Err(SyntaxError::new(
                            start,
                            format!("unsupported command \\{name}"),
                        ));
                    }
                };
                toks.push((tok, start));
            }
            _ => {
                let tok = match c {
                    b'x' => Tok::X,
                    b'y' => Tok::Y,
                    b'e' => Tok::Euler,
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'{' => Tok::LBrace,
                    b'}' => Tok::RBrace,
                    _ => {
                        let ch = text[i..].chars().next().unwrap_or('?');
                        return Err(SyntaxError::new(i, format!("unexpected character '{ch}'")));
                    }
                };
                i += 1;
                toks.push((tok, start));
            }
        }
    }
    Ok(Lexed {
        toks,
        end: bytes.len(),
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    dialect: Dialect,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(SyntaxError::new(self.offset(), format!("expected {what}"))),
            None => Err(SyntaxError::new(
                self.end,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = ScalarExpr::binary(op, lhs, rhs);
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Tok::Num(_)
                    | Tok::X
                    | Tok::Y
                    | Tok::Euler
                    | Tok::Func(_)
                    | Tok::LParen
                    | Tok::LBrace
                    | Tok::AbsOpen
                    | Tok::Frac
            )
        )
    }

    fn term(&mut self) -> Result<ScalarExpr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    BinOp::Mul
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    BinOp::Div
                }
                // juxtaposition is multiplication in LaTeX input
                _ if self.dialect == Dialect::Latex && self.starts_atom() => BinOp::Mul,
                _ => return Ok(lhs),
            };
            let rhs = self.unary()?;
            lhs = ScalarExpr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<ScalarExpr, SyntaxError> {
        if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarExpr, SyntaxError> {
        let base = self.atom()?;
        if self.peek() == Some(Tok::Caret) {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(ScalarExpr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ScalarExpr, SyntaxError> {
        let at = self.offset();
        let Some(tok) = self.bump() else {
            return Err(SyntaxError::new(self.end, "unexpected end of input"));
        };
        match tok {
            Tok::Num(v) => Ok(ScalarExpr::Const(v)),
            Tok::X => Ok(ScalarExpr::x()),
            Tok::Y => Ok(ScalarExpr::y()),
            Tok::Euler => Ok(ScalarExpr::Const(E)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::LBrace => {
                let inner = self.expr()?;
                self.expect(Tok::RBrace, "'}'")?;
                Ok(inner)
            }
            Tok::AbsOpen => {
                let inner = self.expr()?;
                self.expect(Tok::AbsClose, "'\\right|'")?;
                Ok(ScalarExpr::call(Func::Abs, inner))
            }
            Tok::Frac => {
                self.expect(Tok::LBrace, "'{' after \\frac")?;
                let num = self.expr()?;
                self.expect(Tok::RBrace, "'}'")?;
                self.expect(Tok::LBrace, "'{'")?;
                let den = self.expr()?;
                self.expect(Tok::RBrace, "'}'")?;
                Ok(ScalarExpr::binary(BinOp::Div, num, den))
            }
            Tok::Func(f) => {
                let arg = match self.dialect {
                    Dialect::Ascii => {
                        self.expect(Tok::LParen, "'(' after function name")?;
                        let inner = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        inner
                    }
                    Dialect::Latex => self.power()?,
                };
                Ok(ScalarExpr::call(f, arg))
            }
            _ => Err(SyntaxError::new(
                at,
                "expected a number, variable, function or '('",
            )),
        }
    }
}

fn parse_with(text: &str, dialect: Dialect) -> Result<ScalarExpr, SyntaxError> {
    let lexed = match dialect {
        Dialect::Ascii => lex_ascii(text)?,
        Dialect::Latex => lex_latex(text)?,
    };
    if lexed.toks.is_empty() {
        return Err(SyntaxError::new(0, "empty expression"));
    }
    let mut p = Parser {
        toks: lexed.toks,
        pos: 0,
        end: lexed.end,
        dialect,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(SyntaxError::new(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Parses the ASCII expression grammar.
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := unary (('*' | '/') unary)*
/// unary  := '-' unary | power
/// power  := atom ('^' unary)?
/// atom   := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
/// func   := exp | ln | sin | cos | abs
/// ```
///
/// Multiplication must be written explicitly. `^` is right-associative and
/// binds tighter than unary minus, so `-x^2` is `-(x^2)`.
pub fn parse_scalar(text: &str) -> Result<ScalarExpr, SyntaxError> {
    parse_with(text, Dialect::Ascii)
}

/// Parses LaTeX as produced by [`super::emit_latex`] and typed into graphing
/// calculators: `\left( \right)`, braces, `\frac`, `\cdot`, `\left| \right|`,
/// `\exp \ln \sin \cos`, juxtaposition and the constant `e`.
pub fn parse_latex(text: &str) -> Result<ScalarExpr, SyntaxError> {
    parse_with(text, Dialect::Latex)
}

/// Parses `lhs \le rhs` in the LaTeX dialect.
pub fn parse_latex_inequality(text: &str) -> Result<(ScalarExpr, ScalarExpr), SyntaxError> {
    let lexed = lex_latex(text)?;
    let Some(split) = lexed.toks.iter().position(|t| t.0 == Tok::Le) else {
        return Err(SyntaxError::new(lexed.end, "missing \\le"));
    };
    let le_at = lexed.toks[split].1;
    let mut toks = lexed.toks;
    let rhs_toks = toks.split_off(split + 1);
    toks.pop();
    let side = |toks: Vec<(Tok, usize)>, end: usize| -> Result<ScalarExpr, SyntaxError> {
        if toks.is_empty() {
            return Err(SyntaxError::new(end, "empty side of inequality"));
        }
        let mut p = Parser {
            toks,
            pos: 0,
            end,
            dialect: Dialect::Latex,
        };
        let e = p.expr()?;
        if p.pos < p.toks.len() {
            return Err(SyntaxError::new(p.offset(), "unexpected trailing input"));
        }
        Ok(e)
    };
    Ok((side(toks, le_at)?, side(rhs_toks, lexed.end)?))
}
